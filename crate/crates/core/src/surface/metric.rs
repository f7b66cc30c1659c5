//! Truncated suprema: Thurston distance and the Finsler norm.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fricke::{ChartPoint, Covector, SurfacePoint, TangentVec};
use super::slope::{enumerate_slopes_with_level, Slope};
use crate::error::{Error, Result};

/// A truncated supremum with its maximizer and how much the last two depths added.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupReport {
    pub value: f64,
    pub argmax: Slope,
    pub depth: usize,
    /// `sup_d - sup_{d-1}` and `sup_{d-1} - sup_{d-2}`.
    pub increments: [f64; 2],
}

/// `(value, slope)` pairs folded to the maximum; ties go to the lexicographically smaller slope.
fn better(a: (f64, Slope), b: (f64, Slope)) -> (f64, Slope) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn truncated_sup<F>(depth: usize, f: F) -> Result<SupReport>
where
    F: Fn(Slope) -> Result<f64> + Sync,
{
    let slopes = enumerate_slopes_with_level(depth);
    let values: Vec<(f64, Slope, usize)> = slopes
        .par_iter()
        .map(|&(s, lvl)| f(s).map(|v| (v, s, lvl)))
        .collect::<Result<Vec<_>>>()?;
    let upto = |d: usize| {
        values
            .iter()
            .filter(|v| v.2 <= d)
            .fold((f64::NEG_INFINITY, Slope::ZERO), |acc, v| better(acc, (v.0, v.1)))
    };
    let (value, argmax) = upto(depth);
    let prev = upto(depth.saturating_sub(1)).0;
    let prev2 = upto(depth.saturating_sub(2)).0;
    Ok(SupReport { value, argmax, depth, increments: [value - prev, prev - prev2] })
}

/// Slopes here are read in `x`'s marking and transported to `y` as homology classes.
pub fn thurston_distance(x: &SurfacePoint, y: &SurfacePoint, depth: usize) -> Result<SupReport> {
    if depth < 2 {
        return Err(Error::Precondition("distance needs depth >= 2".into()));
    }
    let mut rep = truncated_sup(depth, |s| {
        let c = x.marking.to_standard(s.class());
        Ok((y.class_length(c)? / x.class_length(c)?).ln())
    })?;
    rep.argmax = to_standard_slope(x, rep.argmax);
    Ok(rep)
}

fn to_standard_slope(x: &SurfacePoint, s: Slope) -> Slope {
    let (a, b) = x.marking.to_standard(s.class());
    Slope::from_class(a, b).expect("markings map primitive classes to primitive classes")
}

fn check_step(h: f64) -> Result<()> {
    if !(1e-7..=1e-2).contains(&h) {
        return Err(Error::Precondition(format!("fd step {h} outside [1e-7, 1e-2]")));
    }
    Ok(())
}

fn log_length_at(x: &SurfacePoint, c: (i64, i64), ell: f64, tau: f64) -> Result<f64> {
    let p = SurfacePoint { chart: ChartPoint { ell, tau }, marking: x.marking };
    Ok(p.class_length(c)?.ln())
}

/// Chart gradient of `log l_s`, central differences with one Richardson step. `s` is a standard
/// slope.
pub fn covector_sample(x: &SurfacePoint, s: Slope, h: f64) -> Result<Covector> {
    check_step(h)?;
    covector_of_class(x, s.class(), h)
}

fn covector_of_class(x: &SurfacePoint, c: (i64, i64), h: f64) -> Result<Covector> {
    let ChartPoint { ell, tau } = x.chart;
    let hl = h.min(ell / 4.0);
    let d = |f: &dyn Fn(f64) -> Result<f64>, step: f64| -> Result<f64> {
        let one = |s: f64| -> Result<f64> { Ok((f(s)? - f(-s)?) / (2.0 * s)) };
        Ok((4.0 * one(step / 2.0)? - one(step)?) / 3.0)
    };
    let c_ell = d(&|e| log_length_at(x, c, ell + e, tau), hl)?;
    let c_tau = d(&|e| log_length_at(x, c, ell, tau + e), h)?;
    Ok(Covector { c_ell, c_tau })
}

/// Covectors of every slope up to `depth`, slopes read in `x`'s marking, reported in standard
/// coordinates.
pub fn covector_samples(x: &SurfacePoint, depth: usize, h: f64) -> Result<Vec<(Slope, Covector)>> {
    check_step(h)?;
    enumerate_slopes_with_level(depth)
        .par_iter()
        .map(|&(s, _)| {
            let c = x.marking.to_standard(s.class());
            covector_of_class(x, c, h).map(|w| (to_standard_slope(x, s), w))
        })
        .collect()
}

pub fn finsler_norm(x: &SurfacePoint, v: TangentVec, depth: usize, h: f64) -> Result<SupReport> {
    check_step(h)?;
    let mut rep = truncated_sup(depth, |s| {
        let c = x.marking.to_standard(s.class());
        Ok(covector_of_class(x, c, h)?.apply(v))
    })?;
    rep.argmax = to_standard_slope(x, rep.argmax);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fricke::FrickeTriple;
    use crate::surface::slope::enumerate_slopes;
    use proptest::prelude::*;

    fn markov() -> SurfacePoint {
        SurfacePoint::from_triple(&FrickeTriple::markov()).unwrap()
    }

    #[test]
    fn distance_to_self_is_zero() {
        let x = markov();
        let d = thurston_distance(&x, &x, 7).unwrap();
        assert_eq!(d.value, 0.0);
        assert_eq!(d.increments, [0.0, 0.0]);
        assert!(thurston_distance(&x, &x, 1).is_err());
    }

    #[test]
    fn distance_is_asymmetric_on_twisted_pair() {
        let x = SurfacePoint::standard(ChartPoint::new(1.0, 0.2).unwrap());
        let y = SurfacePoint::standard(ChartPoint::new(1.6, -0.9).unwrap());
        let xy = thurston_distance(&x, &y, 7).unwrap().value;
        let yx = thurston_distance(&y, &x, 7).unwrap().value;
        assert!(xy > 0.0 && yx > 0.0);
        assert!((xy - yx).abs() > 1e-3);
    }

    #[test]
    fn distance_non_decreasing_in_depth() {
        let x = SurfacePoint::standard(ChartPoint::new(0.8, 0.5).unwrap());
        let y = SurfacePoint::standard(ChartPoint::new(1.1, -0.2).unwrap());
        let mut prev = f64::NEG_INFINITY;
        for d in 2..9 {
            let r = thurston_distance(&x, &y, d).unwrap();
            assert!(r.value >= prev);
            assert!(r.increments[0] >= 0.0 && r.increments[1] >= 0.0);
            prev = r.value;
        }
    }

    #[test]
    fn chart_slope_covector() {
        let x = SurfacePoint::standard(ChartPoint::new(1.3, 0.4).unwrap());
        let w = covector_sample(&x, Slope::ZERO, 1e-4).unwrap();
        assert!((w.c_ell - 1.0 / 1.3).abs() < 1e-9);
        assert_eq!(w.c_tau, 0.0);
        assert!(covector_sample(&x, Slope::ZERO, 1.0).is_err());
    }

    #[test]
    fn norm_examples() {
        let x = markov();
        let zero = finsler_norm(&x, TangentVec::new(0.0, 0.0), 5, 1e-4).unwrap();
        assert_eq!(zero.value, 0.0);
        let v = TangentVec::new(0.3, -0.7);
        let one = finsler_norm(&x, v, 5, 1e-4).unwrap().value;
        let two = finsler_norm(&x, v.scale(2.0), 5, 1e-4).unwrap().value;
        assert_eq!(two, 2.0 * one);
    }

    #[test]
    fn norm_dominates_each_covector() {
        let x = SurfacePoint::standard(ChartPoint::new(1.1, 0.3).unwrap());
        let v = TangentVec::new(-0.4, 1.0);
        let n = finsler_norm(&x, v, 5, 1e-4).unwrap().value;
        for (_, w) in covector_samples(&x, 5, 1e-4).unwrap() {
            assert!(n >= w.apply(v));
        }
    }

    #[test]
    fn marking_does_not_change_the_metric() {
        let x = SurfacePoint::standard(ChartPoint::new(1.1, 0.3).unwrap());
        let y = SurfacePoint::standard(ChartPoint::new(1.5, 0.9).unwrap());
        let xr = x.recharted("1/1".parse().unwrap()).unwrap();
        let yr = y.recharted("2/1".parse().unwrap()).unwrap();
        // same enumeration marking for x, so the same slope set and the same sup
        let a = thurston_distance(&xr, &y, 6).unwrap();
        let b = thurston_distance(&xr, &yr, 6).unwrap();
        assert!((a.value - b.value).abs() < 1e-9);
        assert_eq!(a.argmax, b.argmax);
        assert_eq!(xr.marking.chart_slope(), "1/1".parse().unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn covector_matches_plain_difference(l in 0.5f64..3.0, tau in -1.0f64..1.0, k in 0usize..16) {
            let x = SurfacePoint::standard(ChartPoint::new(l, tau).unwrap());
            let s = enumerate_slopes(3)[k];
            let w = covector_sample(&x, s, 1e-4).unwrap();
            let h = 1e-6;
            let f = |e: f64, t: f64| {
                SurfacePoint::standard(ChartPoint::new(l + e, tau + t).unwrap()).length(s).unwrap().ln()
            };
            let dl = (f(h, 0.0) - f(-h, 0.0)) / (2.0 * h);
            let dt = (f(0.0, h) - f(0.0, -h)) / (2.0 * h);
            prop_assert!((w.c_ell - dl).abs() < 1e-6 && (w.c_tau - dt).abs() < 1e-6);
        }
    }
}
