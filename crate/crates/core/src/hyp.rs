//! Hyperbolic-plane numerics in the upper half-plane model.

use serde::{Deserialize, Serialize};

use crate::annulus::{AnnulusMetric11, SpiralPattern};
use crate::error::{Error, Result};
use crate::numeric::{arcosh, log1mexp, one_minus_exp_neg};

/// A 2x2 real matrix of determinant 1, taken up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isom2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Isom2 {
    pub const IDENTITY: Isom2 = Isom2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Scale to determinant 1 and fix the sign so the trace is non-negative.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::Domain(format!("matrix determinant {det} is not positive")));
        }
        let s = det.sqrt();
        let m = Isom2 { a: a / s, b: b / s, c: c / s, d: d / s };
        Ok(m.sign_normalized())
    }

    fn sign_normalized(self) -> Self {
        let tr = self.a + self.d;
        let flip = if tr != 0.0 {
            tr < 0.0
        } else {
            let lead = [self.a, self.b, self.c, self.d].into_iter().find(|v| *v != 0.0).unwrap_or(1.0);
            lead < 0.0
        };
        if flip {
            Isom2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }

    /// Hyperbolic translation of length `l` along the imaginary axis.
    pub fn translation(l: f64) -> Self {
        Isom2 { a: (l / 2.0).exp(), b: 0.0, c: 0.0, d: (-l / 2.0).exp() }
    }

    /// Parabolic `z -> z + h`.
    pub fn parabolic(h: f64) -> Self {
        Isom2 { a: 1.0, b: h, c: 0.0, d: 1.0 }
    }

    /// The elliptic involution `z -> -1/z`.
    pub fn involution() -> Self {
        Isom2 { a: 0.0, b: -1.0, c: 1.0, d: 0.0 }
    }

    pub fn mul(&self, o: &Isom2) -> Isom2 {
        Isom2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Isom2 {
        Isom2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Möbius action on a boundary point of the half-plane (`f64::INFINITY` is the point at infinity).
    pub fn apply_boundary(&self, x: f64) -> f64 {
        if x.is_infinite() {
            return if self.c == 0.0 { f64::INFINITY } else { self.a / self.c };
        }
        let den = self.c * x + self.d;
        if den == 0.0 {
            f64::INFINITY
        } else {
            (self.a * x + self.b) / den
        }
    }

    /// Translation length, if the element is hyperbolic.
    pub fn translation_length(&self) -> Result<f64> {
        trace_to_length(self.trace())
    }
}

/// Inputs of the spiralling-horocycle computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpiralConfig {
    /// Length of the closed geodesic being spiralled onto.
    pub closed_length: f64,
    pub shears: Vec<f64>,
    pub d1: f64,
    pub d2: f64,
    pub t: f64,
}

impl SpiralConfig {
    pub fn new(closed_length: f64, d1: f64, d2: f64, t: f64) -> Self {
        SpiralConfig { closed_length, shears: Vec::new(), d1, d2, t }
    }

    fn check(&self) -> Result<()> {
        if !(self.closed_length > 0.0) {
            return Err(Error::Domain(format!("closed length {} must be positive", self.closed_length)));
        }
        if self.d1 < 0.0 || self.d2 < 0.0 {
            return Err(Error::Domain("offsets d1, d2 must be non-negative".into()));
        }
        Ok(())
    }
}

pub fn trace_to_length(tr: f64) -> Result<f64> {
    let t = tr.abs();
    if !(t > 2.0) {
        return Err(Error::NonHyperbolic(t));
    }
    Ok(2.0 * arcosh(t / 2.0))
}

pub fn length_to_trace(l: f64) -> f64 {
    2.0 * (l / 2.0).cosh()
}

/// Total length of the horocyclic segments cut out by a leaf spiralling onto a geodesic of length `l`.
pub fn spiral_horolength(l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::Domain(format!("length {l} must be positive")));
    }
    Ok(1.0 / one_minus_exp_neg(l))
}

/// `1 + e^{-s1} + e^{-(s1+s2)} + ...` in log form.
pub(crate) fn log_partial_exp_sum(shears: &[f64]) -> f64 {
    let mut partial = Vec::with_capacity(shears.len() + 1);
    let mut acc = 0.0;
    partial.push(0.0);
    for s in shears {
        acc += s;
        partial.push(acc);
    }
    let m = partial.iter().cloned().fold(f64::INFINITY, f64::min);
    let sum: f64 = partial.iter().map(|p| (-(p - m)).exp()).sum();
    sum.ln() - m
}

pub fn component_ratio(shears: &[f64], l_alpha: f64) -> Result<f64> {
    if !(l_alpha > 0.0) {
        return Err(Error::Domain(format!("length {l_alpha} must be positive")));
    }
    Ok((log_partial_exp_sum(shears) - log1mexp(l_alpha)).exp())
}

pub fn stretched_horolength(cfg: &SpiralConfig) -> Result<f64> {
    cfg.check()?;
    let k = cfg.t.exp();
    Ok(((-k * cfg.d1).exp() + (-k * cfg.d2).exp()) / one_minus_exp_neg(k * cfg.closed_length))
}

/// Derivative in `t` at `t = 0` of [`stretched_horolength`].
pub fn horolength_derivative(cfg: &SpiralConfig) -> Result<f64> {
    cfg.check()?;
    let (l, d1, d2) = (cfg.closed_length, cfg.d1, cfg.d2);
    let q = one_minus_exp_neg(l);
    let first = (d1 * (-d1).exp() + d2 * (-d2).exp()) / q;
    let second = l * (-l).exp() * ((-d1).exp() + (-d2).exp()) / (q * q);
    Ok(-first - second)
}

/// Trace of the holonomy of a closed curve crossing two annuli of core lengths `l_l`, `l_r`
/// with horocyclic detours `h1..h4`.
pub fn holonomy_trace(l_l: f64, l_r: f64, h: [f64; 4]) -> Result<f64> {
    if !(l_l > 0.0 && l_r > 0.0) {
        return Err(Error::Domain("core lengths must be positive".into()));
    }
    let [h1, h2, h3, h4] = h;
    if h.iter().any(|v| *v < 0.0) {
        return Err(Error::Domain("horocyclic lengths must be non-negative".into()));
    }
    Ok(((l_l + l_r) / 2.0).exp() * (1.0 + h1 * h2) * (1.0 + h3 * h4)
        + ((l_l - l_r) / 2.0).exp() * h1 * h4
        + ((l_r - l_l) / 2.0).exp() * h2 * h3
        + (-(l_l + l_r) / 2.0).exp())
}

/// Ideal endpoints `(u1, u2)` of the developed transverse leaf after an `e^t` stretch of a
/// (1,1)-crowned annulus. The twist is `log|u2/u1|`.
///
/// The closed geodesic is the imaginary axis. For the parallel pattern the leaf's midpoint
/// sits at `i(1 - e^{-l})`; for the opposite patterns at `i`, where the two spiralling ends are
/// swapped by `z -> -1/z`.
pub fn develop_annulus_cover(m: &AnnulusMetric11, pattern: SpiralPattern, t: f64) -> Result<(f64, f64)> {
    if !(m.ell > 0.0) {
        return Err(Error::Domain(format!("length {} must be positive", m.ell)));
    }
    let k = t.exp();
    let h0 = spiral_horolength(m.ell)?;
    let hk = spiral_horolength(k * m.ell)?;
    match pattern {
        SpiralPattern::Parallel | SpiralPattern::ParallelMinus => {
            // Both ends sit on horocycles whose lengths scale linearly; only heights move.
            let u1 = -(-k * m.tau / 2.0).exp() * hk / h0;
            let u2 = (k * m.tau / 2.0).exp() * hk / h0;
            Ok((u1, u2))
        }
        SpiralPattern::OppositePlus => {
            // The horocycle through the leaf is pushed out by e^t in signed distance, so the
            // initial horolength enters with exponent K.
            let u1 = -(-k * m.tau / 2.0).exp() * hk * h0.powf(-k);
            Ok((u1, -1.0 / u1))
        }
        SpiralPattern::OppositeMinus => {
            let mirrored = AnnulusMetric11 { ell: m.ell, tau: -m.tau };
            let (u1, u2) = develop_annulus_cover(&mirrored, SpiralPattern::OppositePlus, t)?;
            Ok((-u2, -u1))
        }
    }
}

/// Twist read off a development.
pub fn developed_twist(u: (f64, f64)) -> f64 {
    (u.1 / u.0).abs().ln()
}

/// The four shear magnitudes compatible with a pair of pants of boundary lengths `(la, lb, lc)`.
pub fn pants_shear_values(la: f64, lb: f64, lc: f64) -> [f64; 4] {
    [
        0.5 * (la + lb + lc).abs(),
        0.5 * (la - lb - lc).abs(),
        0.5 * (la - lb + lc).abs(),
        0.5 * (la + lb - lc).abs(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The ten matrices of the holonomy computation, multiplied right to left.
    fn ten_matrix_trace(l_l: f64, l_r: f64, h: [f64; 4]) -> f64 {
        let r = Isom2::involution();
        let factors = [
            Isom2::parabolic(h[3]),
            r,
            Isom2::parabolic(-h[2]),
            r,
            Isom2::translation(l_r),
            Isom2::parabolic(h[1]),
            r,
            Isom2::parabolic(-h[0]),
            r,
            Isom2::translation(l_l),
        ];
        factors.iter().fold(Isom2::IDENTITY, |acc, m| acc.mul(m)).trace().abs()
    }

    fn horolength_by_series(l: f64) -> f64 {
        let mut s = 0.0;
        let mut k = 0.0;
        loop {
            let term = (-k * l).exp();
            s += term;
            if term < 1e-18 {
                return s;
            }
            k += 1.0;
        }
    }

    #[test]
    fn trace_to_length_examples() {
        assert!((trace_to_length(2.0 * 0.5f64.cosh()).unwrap() - 1.0).abs() < 1e-12);
        let l = trace_to_length(3.0).unwrap();
        assert!((l - 1.9248473002384139).abs() < 1e-12);
        let m = Isom2::translation(l);
        assert!((m.trace() - 3.0).abs() < 1e-12);
        assert_eq!(trace_to_length(2.0), Err(Error::NonHyperbolic(2.0)));
        assert!(trace_to_length(-3.0).is_ok());
    }

    #[test]
    fn spiral_horolength_examples() {
        assert!((spiral_horolength(1.0).unwrap() - 1.5819767068693265).abs() < 1e-12);
        assert!((spiral_horolength(1.0).unwrap() - horolength_by_series(1.0)).abs() < 1e-12);
        assert!((spiral_horolength(100.0).unwrap() - 1.0).abs() < 1e-40);
        assert!(spiral_horolength(0.0).is_err());
        assert!(spiral_horolength(-1.0).is_err());
    }

    #[test]
    fn component_ratio_examples() {
        assert!((component_ratio(&[], 1.0).unwrap() - 1.5819767068693265).abs() < 1e-12);
        assert!((component_ratio(&[0.0], 1.0).unwrap() - 3.163953413738653).abs() < 1e-12);
        assert!((component_ratio(&[0.7], 200.0).unwrap() - (1.0 + (-0.7f64).exp())).abs() < 1e-14);
        assert!(component_ratio(&[1.0], 0.0).is_err());
        for n in 1..6 {
            let zeros = vec![0.0; n - 1];
            let want = n as f64 / (1.0 - (-1.3f64).exp());
            assert!((component_ratio(&zeros, 1.3).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn stretched_horolength_examples() {
        let cfg = SpiralConfig::new(1.0, 0.0, 0.0, 0.0);
        assert!((stretched_horolength(&cfg).unwrap() - 3.163953413738653).abs() < 1e-12);
        let d = SpiralConfig::new(1.3, 0.4, 0.4, 0.0);
        let want = 2.0 * (-0.4f64).exp() * spiral_horolength(1.3).unwrap();
        assert!((stretched_horolength(&d).unwrap() - want).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let c = SpiralConfig::new(0.8, 0.3, 1.1, -2.0 + 0.03 * i as f64);
            let v = stretched_horolength(&c).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn horolength_derivative_examples() {
        let cfg = SpiralConfig::new(1.0, 0.0, 0.0, 0.0);
        let v = horolength_derivative(&cfg).unwrap();
        let e1 = (-1.0f64).exp();
        assert!((v + 2.0 * e1 / (1.0 - e1).powi(2)).abs() < 1e-14);
        assert!((v + 1.8413471884155848).abs() < 1e-12);
        let fd = {
            let h = 1e-5;
            let at = |t: f64| stretched_horolength(&SpiralConfig { t, ..cfg.clone() }).unwrap();
            (at(h) - at(-h)) / (2.0 * h)
        };
        assert!((v - fd).abs() < 1e-6);
        let far = SpiralConfig::new(1.0, 60.0, 60.0, 0.0);
        assert!(horolength_derivative(&far).unwrap().abs() < 1e-20);
    }

    #[test]
    fn holonomy_trace_examples() {
        let flat = holonomy_trace(1.2, 0.7, [0.0; 4]).unwrap();
        assert!((trace_to_length(flat).unwrap() - 1.9).abs() < 1e-12);
        let v = holonomy_trace(1.0, 1.0, [1.0; 4]).unwrap();
        let e = std::f64::consts::E;
        assert!((v - (4.0 * e + 2.0 + 1.0 / e)).abs() < 1e-12);
        assert!((v - 13.2410068).abs() < 1e-7);
        assert!((trace_to_length(v).unwrap() - 5.155130885555814).abs() < 1e-12);
        assert!((ten_matrix_trace(1.0, 1.0, [1.0; 4]) - v).abs() < 1e-12);
    }

    #[test]
    fn isom2_normalizes() {
        let m = Isom2::new(-2.0, -1.0, -1.0, -1.0).unwrap();
        assert!((m.det() - 1.0).abs() < 1e-12);
        assert!(m.trace() > 0.0);
        assert!(Isom2::new(1.0, 1.0, 1.0, 1.0).is_err());
        let p = Isom2::parabolic(2.0);
        assert_eq!(p.mul(&p.inverse()), Isom2::IDENTITY);
        assert_eq!(Isom2::involution().apply_boundary(2.0), -0.5);
    }

    #[test]
    fn development_examples() {
        let m = AnnulusMetric11 { ell: 1.3, tau: 0.4 };
        for p in SpiralPattern::ALL {
            let u = develop_annulus_cover(&m, p, 0.0).unwrap();
            assert!((developed_twist(u) - 0.4).abs() < 1e-12, "{p:?}");
        }
        for &t in &[-0.8, 0.3, 1.0] {
            let u = develop_annulus_cover(&m, SpiralPattern::Parallel, t).unwrap();
            assert!((developed_twist(u) - t.exp() * 0.4).abs() < 1e-10);
            let (u1, u2) = develop_annulus_cover(&m, SpiralPattern::OppositePlus, t).unwrap();
            assert!((u2 + 1.0 / u1).abs() < 1e-10);
        }
        assert!(develop_annulus_cover(&AnnulusMetric11 { ell: 0.0, tau: 0.0 }, SpiralPattern::Parallel, 0.0).is_err());
    }

    #[test]
    fn pants_shear_examples() {
        assert_eq!(pants_shear_values(2.0, 1.0, 1.0), [2.0, 0.0, 1.0, 1.0]);
        assert_eq!(pants_shear_values(3.0, 0.0, 0.0), [1.5; 4]);
        assert_eq!(pants_shear_values(10.0, 3.0, 4.0), [8.5, 1.5, 5.5, 4.5]);
    }

    proptest! {
        #[test]
        fn trace_length_roundtrip(l in 1e-3f64..50.0) {
            let back = trace_to_length(length_to_trace(l)).unwrap();
            prop_assert!((back - l).abs() <= 1e-10 * l.max(1.0));
        }

        #[test]
        fn holonomy_matches_matrix_product(
            ll in 0.05f64..4.0, lr in 0.05f64..4.0,
            h1 in 0.0f64..3.0, h2 in 0.0f64..3.0, h3 in 0.0f64..3.0, h4 in 0.0f64..3.0,
        ) {
            let h = [h1, h2, h3, h4];
            let f = holonomy_trace(ll, lr, h).unwrap();
            let m = ten_matrix_trace(ll, lr, h);
            prop_assert!((f - m).abs() <= 1e-9 * f.abs());
        }

        #[test]
        fn horolength_derivative_is_negative(l in 0.05f64..30.0, d1 in 0.0f64..20.0, d2 in 0.0f64..20.0) {
            let v = horolength_derivative(&SpiralConfig::new(l, d1, d2, 0.0)).unwrap();
            prop_assert!(v < 0.0);
        }

        #[test]
        fn horolength_derivative_matches_fd(l in 0.2f64..6.0, d1 in 0.0f64..3.0, d2 in 0.0f64..3.0) {
            let cfg = SpiralConfig::new(l, d1, d2, 0.0);
            let h = 1e-5;
            let at = |t: f64| stretched_horolength(&SpiralConfig { t, ..cfg.clone() }).unwrap();
            let fd = (at(h) - at(-h)) / (2.0 * h);
            prop_assert!((horolength_derivative(&cfg).unwrap() - fd).abs() < 1e-6);
        }
    }
}
