//! Surface flows driven by the annulus laws, and the experiments built on them.

use serde::{Deserialize, Serialize};

use super::fricke::{ChartPoint, FrickeTriple, SurfacePoint, TangentVec};
use super::metric::{finsler_norm, thurston_distance, SupReport};
use super::slope::{dehn_twist, intersection_number, Slope};
use crate::annulus::{stretch_vector_diff, AnnulusMetric11, SpiralLaw};
use crate::error::{Error, Result};

/// Max-ratio certificate for one flow step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowValidation {
    pub sup: SupReport,
    /// `|sup - |t||`.
    pub deviation: f64,
    pub argmax_is_chart_slope: bool,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowStep {
    pub point: SurfacePoint,
    pub validation: FlowValidation,
}

/// Apply the law's (1,1) stretch in the chart of `x`'s chart curve, without validation.
pub fn flow_point(x: &SurfacePoint, law: &dyn SpiralLaw, t: f64) -> SurfacePoint {
    let m = law.stretch11(&AnnulusMetric11 { ell: x.chart.ell, tau: x.chart.tau }, t);
    SurfacePoint { chart: ChartPoint { ell: m.ell, tau: m.tau }, marking: x.marking }
}

/// Flow for time `t`, then certify: forward flows must realize `d(x, x_t) = t`, backward flows
/// `d(x_t, x) = |t|`, with the chart curve maximally stretched. Deviations above `tol` are flagged.
pub fn stretch_flow(x: &SurfacePoint, law: &dyn SpiralLaw, t: f64, depth: usize, tol: f64) -> Result<FlowStep> {
    let y = flow_point(x, law, t);
    let sup = if t >= 0.0 { thurston_distance(x, &y, depth)? } else { thurston_distance(&y, x, depth)? };
    let deviation = (sup.value - t.abs()).abs();
    let argmax_is_chart_slope = t == 0.0 || sup.argmax == x.marking.chart_slope();
    Ok(FlowStep {
        point: y,
        validation: FlowValidation { flagged: deviation > tol || !argmax_is_chart_slope, deviation, argmax_is_chart_slope, sup },
    })
}

/// `t`-derivative of the flow at `x`, in `x`'s chart.
pub fn flow_vector(x: &SurfacePoint, law: &dyn SpiralLaw) -> TangentVec {
    let (d_ell, d_tau) = law.vector11(&AnnulusMetric11 { ell: x.chart.ell, tau: x.chart.tau });
    TangentVec { d_ell, d_tau }
}

/// Sampled trajectory with probe lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    pub times: Vec<f64>,
    pub states: Vec<ChartPoint>,
    pub probes: Vec<Slope>,
    /// `lengths[i][j]`: length of probe `j` at time `i`, `None` once the trace recursion overflowed.
    pub lengths: Vec<Vec<Option<f64>>>,
    pub overflowed: bool,
}

impl FlowTrace {
    fn validate(&self) -> Result<()> {
        let increasing = self.times.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.times.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::Precondition("flow times must be strictly monotone".into()));
        }
        Ok(())
    }
}

pub fn flow_trace(x: &SurfacePoint, law: &dyn SpiralLaw, times: &[f64], probes: &[Slope]) -> Result<FlowTrace> {
    let mut trace = FlowTrace {
        times: times.to_vec(),
        states: Vec::with_capacity(times.len()),
        probes: probes.to_vec(),
        lengths: Vec::with_capacity(times.len()),
        overflowed: false,
    };
    trace.validate()?;
    for &t in times {
        let y = flow_point(x, law, t);
        trace.states.push(y.chart);
        let row = probes
            .iter()
            .map(|s| match y.length(*s) {
                Ok(v) => Some(v),
                Err(_) => {
                    trace.overflowed = true;
                    None
                }
            })
            .collect();
        trace.lengths.push(row);
    }
    Ok(trace)
}

/// One row of the back-time experiment at antistretch time `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktimeRow {
    pub s: f64,
    pub ell: f64,
    pub tau: f64,
    pub tau_over_s: f64,
    /// `l(gamma) / (2 s)` per probe.
    /// Probe lengths scaled projectively so they sum to the summed intersection numbers.
    pub normalized: Vec<Option<f64>>,
    /// `l / 2s`: each crossing of the collapsing collar costs about `2s`.
    pub per_collar: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktimeReport {
    pub chart_slope: Slope,
    pub ell0: f64,
    pub probes: Vec<Slope>,
    /// `i(probe, chart slope)`.
    pub intersections: Vec<u64>,
    pub rows: Vec<BacktimeRow>,
    pub trace: FlowTrace,
    pub overflowed: bool,
}

/// Antistretch from `s = 0` to `s_max` in `steps` equal increments.
pub fn backtime_experiment(
    x: &SurfacePoint,
    law: &dyn SpiralLaw,
    s_max: f64,
    steps: usize,
    probes: &[Slope],
) -> Result<BacktimeReport> {
    if !(s_max > 0.0) || steps == 0 {
        return Err(Error::Precondition("back-time needs s_max > 0 and at least one step".into()));
    }
    let times: Vec<f64> = (0..=steps).map(|k| -s_max * k as f64 / steps as f64).collect();
    let trace = flow_trace(x, law, &times, probes)?;
    let chart_slope = x.marking.chart_slope();
    let intersections: Vec<u64> = probes.iter().map(|p| intersection_number(*p, chart_slope)).collect();
    let rows = times
        .iter()
        .zip(&trace.states)
        .zip(&trace.lengths)
        .map(|((&t, st), ls)| {
            let s = -t;
            BacktimeRow {
                s,
                ell: st.ell,
                tau: st.tau,
                tau_over_s: if s > 0.0 { st.tau / s } else { f64::NAN },
                normalized: projective(ls, &intersections),
                per_collar: ls.iter().map(|l| l.filter(|_| s > 0.0).map(|l| l / (2.0 * s))).collect(),
            }
        })
        .collect();
    Ok(BacktimeReport {
        chart_slope,
        ell0: x.chart.ell,
        intersections,
        probes: probes.to_vec(),
        overflowed: trace.overflowed,
        rows,
        trace,
    })
}

fn projective(lengths: &[Option<f64>], intersections: &[u64]) -> Vec<Option<f64>> {
    let total: Option<f64> = lengths.iter().copied().sum();
    let weight: u64 = intersections.iter().sum();
    match total {
        Some(t) if t > 0.0 && t.is_finite() && weight > 0 => {
            lengths.iter().map(|l| l.map(|l| l * weight as f64 / t)).collect()
        }
        _ => vec![None; lengths.len()],
    }
}

pub fn closed_leaf_length_from_shears(shears: &[f64], signs: &[i8]) -> Result<f64> {
    if shears.len() != signs.len() {
        return Err(Error::Precondition(format!("{} shears but {} signs", shears.len(), signs.len())));
    }
    let mut total = 0.0;
    for (s, e) in shears.iter().zip(signs) {
        total += match e {
            1 => *s,
            -1 => -*s,
            _ => return Err(Error::Precondition(format!("sign {e} is not +1 or -1"))),
        };
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionRow {
    pub m: i64,
    pub alpha_m: Slope,
    pub ell_alpha_m: f64,
    /// Thurston norm of the unit twist vector along `alpha_m`.
    pub twist_norm: f64,
    /// Norm of the difference of the two opposite stretch vectors at `alpha_m`.
    pub diff_norm: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub gamma: Slope,
    pub alpha0: Slope,
    pub intersection: u64,
    pub rows: Vec<ExtractionRow>,
    /// Set when `e^{-l}` underflowed and the sequence stopped early.
    pub stopped_early: bool,
}

/// Recover `l(gamma)` from the stretch-vector differences along Dehn-twisted curves.
pub fn length_extraction(
    x: &FrickeTriple,
    gamma: Slope,
    alpha0: Slope,
    m_max: i64,
    depth: usize,
    h: f64,
) -> Result<ExtractionReport> {
    let i = intersection_number(gamma, alpha0);
    if i == 0 {
        return Err(Error::Precondition(format!("{gamma} and {alpha0} do not intersect")));
    }
    let base = SurfacePoint::from_triple(x)?;
    let mut rows = Vec::new();
    let mut stopped_early = false;
    for m in 1..=m_max {
        let alpha_m = dehn_twist(alpha0, gamma, m);
        let sample = base.recharted(alpha_m).and_then(|p| {
            let diff = stretch_vector_diff(p.chart.ell)?;
            let twist_norm = finsler_norm(&p, TangentVec::new(0.0, 1.0), depth, h)?.value;
            Ok((p.chart.ell, diff, twist_norm))
        });
        let (ell, diff, twist_norm) = match sample {
            Ok(v) => v,
            Err(Error::Overflow(_)) => {
                stopped_early = true;
                break;
            }
            Err(e) => return Err(e),
        };
        if !(diff > f64::MIN_POSITIVE) {
            stopped_early = true;
            break;
        }
        let diff_norm = diff * twist_norm;
        rows.push(ExtractionRow {
            m,
            alpha_m,
            ell_alpha_m: ell,
            twist_norm,
            diff_norm,
            estimate: -diff_norm.ln() / (i as f64 * m as f64),
        });
    }
    Ok(ExtractionReport { gamma, alpha0, intersection: i, rows, stopped_early })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus::{LawRegistry, SpiralPattern};
    use crate::hyp::pants_shear_values;
    use crate::surface::fricke::slope_length;

    fn markov() -> SurfacePoint {
        SurfacePoint::from_triple(&FrickeTriple::markov()).unwrap()
    }

    #[test]
    fn parallel_flow_scales_chart() {
        let reg = LawRegistry::default();
        let x = SurfacePoint::standard(ChartPoint::new(1.2, 0.7).unwrap());
        let step = stretch_flow(&x, reg.get("parallel").unwrap(), 0.4, 5, 1e-2).unwrap();
        assert_eq!(step.point.chart.ell, 0.4f64.exp() * 1.2);
        assert_eq!(step.point.chart.tau, 0.4f64.exp() * 0.7);
    }

    #[test]
    fn zero_time_is_identity() {
        let reg = LawRegistry::default();
        let x = markov();
        for name in reg.names() {
            let step = stretch_flow(&x, reg.get(name).unwrap(), 0.0, 5, 1e-2).unwrap();
            assert_eq!(step.point, x);
            assert_eq!(step.validation.deviation, 0.0);
            assert!(!step.validation.flagged);
        }
    }

    #[test]
    fn flows_validate_at_depth_7() {
        let reg = LawRegistry::default();
        let x = markov();
        for name in ["parallel", "opposite+", "opposite-"] {
            for t in [0.1, 0.3, 1.0, -0.5] {
                let step = stretch_flow(&x, reg.get(name).unwrap(), t, 7, 1e-2).unwrap();
                assert!(step.validation.deviation <= 5e-3, "{name} {t}");
                assert!(step.validation.argmax_is_chart_slope);
                assert!(step.point.local_triple().unwrap().cusp_defect() < 1e-9);
            }
        }
    }

    #[test]
    fn transverse_slopes_stretch_less() {
        let reg = LawRegistry::default();
        let x = markov();
        for p in [SpiralPattern::Parallel, SpiralPattern::OppositePlus, SpiralPattern::OppositeMinus] {
            let law = reg.for_pattern(p).unwrap();
            let v = flow_vector(&x, law);
            let along = crate::surface::metric::covector_sample(&x, Slope::ZERO, 1e-4).unwrap().apply(v);
            assert!((along - 1.0).abs() < 1e-3);
            for s in crate::surface::slope::enumerate_slopes(4).into_iter().skip(1) {
                let w = crate::surface::metric::covector_sample(&x, s, 1e-4).unwrap().apply(v);
                assert!(w < 1.0, "{p:?} {s}");
            }
        }
    }

    #[test]
    fn backtime_scaling_is_exact() {
        let reg = LawRegistry::default();
        let x = markov();
        let probes: Vec<Slope> = ["1/0", "1/1", "2/1"].iter().map(|s| s.parse().unwrap()).collect();
        let rep = backtime_experiment(&x, reg.get("opposite+").unwrap(), 25.0, 50, &probes).unwrap();
        for r in &rep.rows {
            assert!((r.ell - (-r.s).exp() * rep.ell0).abs() <= 1e-12 * rep.ell0);
        }
        assert_eq!(rep.intersections, vec![1, 1, 2]);
        let last = rep.rows.last().unwrap();
        let total: f64 = last.normalized.iter().map(|v| v.unwrap()).sum();
        assert!((total - 4.0).abs() < 1e-12);
        assert!(rep.rows[0].per_collar.iter().all(Option::is_none));
        assert!(backtime_experiment(&x, reg.get("parallel").unwrap(), 0.0, 5, &probes).is_err());
    }

    #[test]
    fn projective_scaling() {
        let v = projective(&[Some(2.0), Some(6.0)], &[1, 3]);
        assert_eq!(v, vec![Some(1.0), Some(3.0)]);
        assert_eq!(projective(&[Some(1.0), None], &[1, 1]), vec![None, None]);
        assert_eq!(projective(&[Some(0.0)], &[1]), vec![None]);
    }

    #[test]
    fn closed_leaf_examples() {
        let (la, lb, lg) = (5.0, 1.5, 0.8);
        let v = pants_shear_values(la, lb, lg);
        let s = closed_leaf_length_from_shears(&[v[1], v[0]], &[1, 1]).unwrap();
        assert!((s - la).abs() < 1e-14);
        assert_eq!(closed_leaf_length_from_shears(&[], &[]).unwrap(), 0.0);
        assert_eq!(closed_leaf_length_from_shears(&[1.0, 2.0], &[1, 1]).unwrap(), 3.0);
        assert!(closed_leaf_length_from_shears(&[1.0], &[]).is_err());
        assert!(closed_leaf_length_from_shears(&[1.0], &[0]).is_err());
    }

    #[test]
    fn extraction_preconditions() {
        let x = FrickeTriple::markov();
        assert!(length_extraction(&x, Slope::ZERO, Slope::ZERO, 3, 5, 1e-4).is_err());
        let rep = length_extraction(&x, Slope::ZERO, Slope::INFINITY, 4, 5, 1e-4).unwrap();
        assert_eq!(rep.rows.len(), 4);
        assert_eq!(rep.rows[2].alpha_m, Slope::new(1, 3).unwrap());
        let direct = slope_length(&x, Slope::new(1, 3).unwrap()).unwrap();
        assert!((rep.rows[2].ell_alpha_m - direct).abs() < 1e-9);
        assert!(rep.rows.iter().all(|r| r.twist_norm > 0.0));
    }

    #[test]
    fn extraction_stops_early_on_overflow() {
        let rep = length_extraction(&FrickeTriple::markov(), Slope::ZERO, Slope::INFINITY, 200, 5, 1e-4).unwrap();
        assert!(rep.stopped_early);
        assert!(!rep.rows.is_empty() && rep.rows.len() < 200);
        assert!(rep.rows.iter().all(|r| r.estimate.is_finite()));
    }

    #[test]
    fn flow_trace_rejects_non_monotone_times() {
        let reg = LawRegistry::default();
        assert!(flow_trace(&markov(), reg.get("parallel").unwrap(), &[0.0, 1.0, 0.5], &[]).is_err());
    }
}
