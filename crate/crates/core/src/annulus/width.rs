//! Twist widths: the twist gap between the two opposite-spiralling stretch vectors.

use serde::{Deserialize, Serialize};

use super::stretch_vector_diff;
use crate::error::{Error, Result};
use crate::numeric::{log1mexp, one_minus_exp_neg};

/// Core-length contribution to an opposite-spiralling stretch vector.
pub fn type_one_term(ell: f64) -> f64 {
    ell * (-ell).exp() / one_minus_exp_neg(ell) - log1mexp(ell)
}

/// Shear contribution for three partial sums.
pub fn type_two_term(u: f64, v: f64, w: f64) -> f64 {
    type_two_generic(&[u, v, w])
}

/// `log(1 + sum e^{-P_j}) + sum P_j e^{-P_j} / (1 + sum e^{-P_j})` over partial sums `P_j`.
///
/// The value is unchanged when every partial sum (including the implicit 0) is shifted by the
/// same constant, so we shift by the minimum: every exponent is then non-positive.
pub fn type_two_generic(partial: &[f64]) -> f64 {
    let m = partial.iter().cloned().fold(0.0f64, f64::min);
    let shifted = std::iter::once(-m).chain(partial.iter().map(|p| p - m));
    let (mut z, mut num) = (0.0, 0.0);
    for q in shifted {
        let e = (-q).exp();
        z += e;
        num += q * e;
    }
    z.ln() + num / z
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistWidthInput {
    pub l_alpha: f64,
    /// (l_beta, l_gamma) of the pants on the left of alpha.
    pub left: (f64, f64),
    pub right: (f64, f64),
}

impl TwistWidthInput {
    pub fn symmetric(l_alpha: f64, l_beta: f64, l_gamma: f64) -> Self {
        TwistWidthInput { l_alpha, left: (l_beta, l_gamma), right: (l_beta, l_gamma) }
    }

    fn validate(&self) -> Result<()> {
        if !(self.l_alpha > 0.0) {
            return Err(Error::Domain(format!("l_alpha = {} must be positive", self.l_alpha)));
        }
        for (b, g) in [self.left, self.right] {
            if !(b >= 0.0 && g >= 0.0) {
                return Err(Error::Domain("pants lengths must be non-negative".into()));
            }
        }
        Ok(())
    }
}

/// Interior shears `(s1, s2, s3)` of the two complete extensions on one side of `alpha`.
///
/// The plus extension has `s2 = l_gamma`, `s4 = l_beta`; the minus extension has partial
/// sums `(l_a + l_b + l_g)/2, (l_a - l_b + l_g)/2, l_a + l_g`. Both crowns sum to `l_alpha`.
pub fn extension_shears(l_alpha: f64, l_beta: f64, l_gamma: f64) -> ([f64; 3], [f64; 3]) {
    let plus_outer = 0.5 * (l_alpha - l_beta - l_gamma);
    let minus_outer = 0.5 * (l_alpha + l_beta + l_gamma);
    ([plus_outer, l_gamma, plus_outer], [minus_outer, -l_beta, minus_outer])
}

fn partial_sums(s: &[f64; 3]) -> [f64; 3] {
    [s[0], s[0] + s[1], s[0] + s[1] + s[2]]
}

pub fn twist_width(input: &TwistWidthInput) -> Result<f64> {
    input.validate()?;
    let mut w = stretch_vector_diff(input.l_alpha)?;
    for (b, g) in [input.left, input.right] {
        let (plus, minus) = extension_shears(input.l_alpha, b, g);
        w += type_two_generic(&partial_sums(&plus)) + type_two_generic(&partial_sums(&minus));
    }
    Ok(w)
}

/// The four asymptotic regimes of a slender pair of pants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlenderRegime {
    /// alpha dominates.
    I,
    /// beta dominates.
    II,
    /// gamma dominates.
    III,
    /// no length dominates the sum of the other two.
    IV,
}

impl SlenderRegime {
    pub const ALL: [SlenderRegime; 4] = [SlenderRegime::I, SlenderRegime::II, SlenderRegime::III, SlenderRegime::IV];

    pub fn label(self) -> &'static str {
        match self {
            SlenderRegime::I => "I",
            SlenderRegime::II => "II",
            SlenderRegime::III => "III",
            SlenderRegime::IV => "IV",
        }
    }
}

/// A symmetric input along a sequence that is slender in the given regime as `l_alpha` grows.
pub fn slender_input(regime: SlenderRegime, l_alpha: f64) -> TwistWidthInput {
    let (b, g) = match regime {
        SlenderRegime::I => (1.0, 1.0),
        SlenderRegime::II => (2.0 * l_alpha, 1.0),
        SlenderRegime::III => (1.0, 2.0 * l_alpha),
        SlenderRegime::IV => (l_alpha, l_alpha),
    };
    TwistWidthInput::symmetric(l_alpha, b, g)
}
