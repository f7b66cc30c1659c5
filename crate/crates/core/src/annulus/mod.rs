//! Stretch and antistretch flows on crowned annuli.
//!
//! Twist conventions follow the signed-segment reading; shears are positive toward the core.
//! Only interior shears are stored: the last shear on each crown is whatever makes the crown
//! sum to the core length.

mod law;
mod width;

pub use law::{LawRegistry, OppositeLaw, ParallelLaw, SpiralLaw};
pub use width::{
    slender_input, twist_width, type_one_term, type_two_term, type_two_generic, SlenderRegime,
    TwistWidthInput,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyp::log_partial_exp_sum;
use crate::numeric::{log1mexp, one_minus_exp_neg};

/// Fenchel-Nielsen pair of a (1,1)-crowned annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusMetric11 {
    pub ell: f64,
    pub tau: f64,
}

impl AnnulusMetric11 {
    pub fn new(ell: f64, tau: f64) -> Result<Self> {
        if !(ell > 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("annulus needs l > 0 and finite tau, got ({ell}, {tau})")));
        }
        Ok(AnnulusMetric11 { ell, tau })
    }
}

/// How the two crown leaves spiral onto the core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpiralPattern {
    /// Same direction; on a (1,1) annulus this is the only parallel configuration.
    Parallel,
    /// Same direction, reversed orientation (differs from `Parallel` only with interior shears).
    ParallelMinus,
    OppositePlus,
    OppositeMinus,
}

impl SpiralPattern {
    pub const ALL: [SpiralPattern; 4] = [
        SpiralPattern::Parallel,
        SpiralPattern::ParallelMinus,
        SpiralPattern::OppositePlus,
        SpiralPattern::OppositeMinus,
    ];

    pub fn is_parallel(self) -> bool {
        matches!(self, SpiralPattern::Parallel | SpiralPattern::ParallelMinus)
    }

    /// +1 or -1.
    pub fn sign(self) -> f64 {
        match self {
            SpiralPattern::Parallel | SpiralPattern::OppositePlus => 1.0,
            SpiralPattern::ParallelMinus | SpiralPattern::OppositeMinus => -1.0,
        }
    }
}

/// Orientation sign for the crowned-annulus laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// An (nL, nR)-crowned annulus in length/twist/shear coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrownedAnnulusMetric {
    pub n_left: usize,
    pub n_right: usize,
    pub ell: f64,
    pub tau: f64,
    pub shears_left: Vec<f64>,
    pub shears_right: Vec<f64>,
}

impl CrownedAnnulusMetric {
    pub fn new(ell: f64, tau: f64, shears_left: Vec<f64>, shears_right: Vec<f64>) -> Result<Self> {
        let m = CrownedAnnulusMetric {
            n_left: shears_left.len() + 1,
            n_right: shears_right.len() + 1,
            ell,
            tau,
            shears_left,
            shears_right,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ell > 0.0) {
            return Err(Error::Domain(format!("core length {} must be positive", self.ell)));
        }
        if self.n_left == 0 || self.n_right == 0 {
            return Err(Error::Domain("crowns need at least one spike".into()));
        }
        if self.shears_left.len() + 1 != self.n_left || self.shears_right.len() + 1 != self.n_right {
            return Err(Error::Domain("shear lists must have n - 1 entries per crown".into()));
        }
        Ok(())
    }

    /// The remaining shear on each crown, fixed by the sum constraint.
    pub fn determined_shears(&self) -> (f64, f64) {
        (
            self.ell - self.shears_left.iter().sum::<f64>(),
            self.ell - self.shears_right.iter().sum::<f64>(),
        )
    }

    pub fn as_11(&self) -> AnnulusMetric11 {
        AnnulusMetric11 { ell: self.ell, tau: self.tau }
    }
}

impl From<AnnulusMetric11> for CrownedAnnulusMetric {
    fn from(m: AnnulusMetric11) -> Self {
        CrownedAnnulusMetric { n_left: 1, n_right: 1, ell: m.ell, tau: m.tau, shears_left: vec![], shears_right: vec![] }
    }
}

/// `2 (log(1 - e^{-K l}) - K log(1 - e^{-l}))`.
fn opposite_correction(ell: f64, k: f64) -> f64 {
    2.0 * (log1mexp(k * ell) - k * log1mexp(ell))
}

/// `K L(s) - L(K s)` where `L` is the log of the partial exponential sum.
fn shear_correction(shears: &[f64], k: f64) -> f64 {
    let scaled: Vec<f64> = shears.iter().map(|s| k * s).collect();
    k * log_partial_exp_sum(shears) - log_partial_exp_sum(&scaled)
}

pub fn stretch11(m: &AnnulusMetric11, p: SpiralPattern, t: f64) -> AnnulusMetric11 {
    let k = t.exp();
    let tau = match p {
        SpiralPattern::Parallel | SpiralPattern::ParallelMinus => k * m.tau,
        SpiralPattern::OppositePlus => k * m.tau + opposite_correction(m.ell, k),
        SpiralPattern::OppositeMinus => k * m.tau - opposite_correction(m.ell, k),
    };
    AnnulusMetric11 { ell: k * m.ell, tau }
}

fn scaled(m: &CrownedAnnulusMetric, k: f64, tau: f64) -> CrownedAnnulusMetric {
    CrownedAnnulusMetric {
        n_left: m.n_left,
        n_right: m.n_right,
        ell: k * m.ell,
        tau,
        shears_left: m.shears_left.iter().map(|s| k * s).collect(),
        shears_right: m.shears_right.iter().map(|s| k * s).collect(),
    }
}

pub fn stretch_parallel(m: &CrownedAnnulusMetric, sign: Sign, t: f64) -> CrownedAnnulusMetric {
    let k = t.exp();
    let corr = shear_correction(&m.shears_left, k) - shear_correction(&m.shears_right, k);
    scaled(m, k, k * m.tau + sign.value() * corr)
}

pub fn stretch_opposite(m: &CrownedAnnulusMetric, sign: Sign, t: f64) -> CrownedAnnulusMetric {
    let k = t.exp();
    let corr = opposite_correction(m.ell, k)
        + shear_correction(&m.shears_left, k)
        + shear_correction(&m.shears_right, k);
    scaled(m, k, k * m.tau + sign.value() * corr)
}

/// Dispatch on a pattern for crowned annuli.
pub fn stretch_crowned(m: &CrownedAnnulusMetric, p: SpiralPattern, t: f64) -> CrownedAnnulusMetric {
    match p {
        SpiralPattern::Parallel => stretch_parallel(m, Sign::Plus, t),
        SpiralPattern::ParallelMinus => stretch_parallel(m, Sign::Minus, t),
        SpiralPattern::OppositePlus => stretch_opposite(m, Sign::Plus, t),
        SpiralPattern::OppositeMinus => stretch_opposite(m, Sign::Minus, t),
    }
}

/// `t`-derivative at 0 of [`stretch11`].
pub fn stretch_vector11(m: &AnnulusMetric11, p: SpiralPattern) -> (f64, f64) {
    let dtau = if p.is_parallel() { m.tau } else { m.tau + p.sign() * 2.0 * type_one_term(m.ell) };
    (m.ell, dtau)
}

/// Tangent vector of a crowned flow at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrownedTangent {
    pub d_ell: f64,
    pub d_tau: f64,
    pub d_shears_left: Vec<f64>,
    pub d_shears_right: Vec<f64>,
}

pub fn crowned_stretch_vector(m: &CrownedAnnulusMetric, p: SpiralPattern) -> CrownedTangent {
    let g = |s: &[f64]| -> f64 {
        if s.is_empty() {
            0.0
        } else {
            let partial: Vec<f64> = s.iter().scan(0.0, |acc, v| { *acc += v; Some(*acc) }).collect();
            type_two_generic(&partial)
        }
    };
    let (gl, gr) = (g(&m.shears_left), g(&m.shears_right));
    let corr = match p {
        SpiralPattern::Parallel | SpiralPattern::ParallelMinus => gl - gr,
        _ => 2.0 * type_one_term(m.ell) + gl + gr,
    };
    CrownedTangent {
        d_ell: m.ell,
        d_tau: m.tau + p.sign() * corr,
        d_shears_left: m.shears_left.clone(),
        d_shears_right: m.shears_right.clone(),
    }
}

/// Coefficient of the core twist direction in the difference of the two opposite stretch vectors.
pub fn stretch_vector_diff(ell: f64) -> Result<f64> {
    if !(ell > 0.0) {
        return Err(Error::Domain(format!("length {ell} must be positive")));
    }
    Ok(4.0 * type_one_term(ell))
}

/// Leading behaviour of [`stretch_vector_diff`] for long cores.
pub fn asymptotic_coeff(ell: f64) -> f64 {
    4.0 * ell * (-ell).exp()
}

/// Ratio of exact to asymptotic coefficient, computed without underflow.
pub fn asymptotic_ratio(ell: f64) -> f64 {
    // 4 T1 / (4 l e^{-l}) = 1/(1-e^{-l}) - log(1-e^{-l}) e^{l} / l
    1.0 / one_minus_exp_neg(ell) - log1mexp(ell) * ell.exp() / ell
}
