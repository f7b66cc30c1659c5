//! Fricke traces of the once-punctured torus and the length/twist chart.

use serde::{Deserialize, Serialize};

use super::slope::{algebraic_intersection, Slope};
use crate::error::{Error, Result};
use crate::hyp::trace_to_length;
use crate::numeric::arcosh;

/// Traces `(tr A, tr B, tr AB)` of a marked once-punctured-torus group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrickeTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl FrickeTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let t = FrickeTriple { a, b, c };
        t.validate(1e-10)?;
        Ok(t)
    }

    /// The most symmetric point, `(3, 3, 3)`.
    pub fn markov() -> Self {
        FrickeTriple { a: 3.0, b: 3.0, c: 3.0 }
    }

    /// Relative defect of the cusp relation `a^2 + b^2 + c^2 = abc`.
    pub fn cusp_defect(&self) -> f64 {
        let lhs = self.a * self.a + self.b * self.b + self.c * self.c;
        let rhs = self.a * self.b * self.c;
        (lhs - rhs).abs() / rhs.abs().max(1.0)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if !(self.a > 2.0 && self.b > 2.0 && self.c > 2.0) {
            return Err(Error::InvalidStructure(format!("traces must exceed 2: {self:?}")));
        }
        if self.cusp_defect() > tol {
            return Err(Error::InvalidStructure(format!("cusp relation violated by {:e}", self.cusp_defect())));
        }
        Ok(())
    }

    /// Trace of the class `x A + y B` (primitive), up to sign.
    ///
    /// Descends the Stern-Brocot path using `tr(UV) = tr U tr V - tr(U V^{-1})`.
    pub fn class_trace(&self, x: i64, y: i64) -> f64 {
        let (mut x, mut y) = (x, y);
        if x < 0 || (x == 0 && y < 0) {
            x = -x;
            y = -y;
        }
        let (a, b) = (self.a, self.b);
        // classes with y < 0 use the mirror triple (a, b, ab - c), B -> B^{-1}
        let c = if y < 0 { a * b - self.c } else { self.c };
        let y = y.abs();
        match (x, y) {
            (1, 0) => return a,
            (0, 1) => return b,
            _ => {}
        }
        // left = (1, 0) [A], right = (0, 1) [B]; diff trace tracks tr(left - right)
        let (mut l, mut r) = ((1i64, 0i64), (0i64, 1i64));
        let (mut tl, mut tr, mut td) = (a, b, a * b - c);
        loop {
            let m = (l.0 + r.0, l.1 + r.1);
            let tm = tl * tr - td;
            if m == (x, y) {
                return tm;
            }
            // compare slopes y/x against m.1/m.0
            if (y as i128) * (m.0 as i128) < (m.1 as i128) * (x as i128) {
                // target is closer to A
                td = tr;
                r = m;
                tr = tm;
            } else {
                td = tl;
                l = m;
                tl = tm;
            }
        }
    }

    pub fn trace(&self, s: Slope) -> f64 {
        let (x, y) = s.class();
        self.class_trace(x, y)
    }
}

/// Length and twist of the chart curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub ell: f64,
    pub tau: f64,
}

impl ChartPoint {
    pub fn new(ell: f64, tau: f64) -> Result<Self> {
        if !(ell > 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("chart point needs l > 0, got ({ell}, {tau})")));
        }
        Ok(ChartPoint { ell, tau })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVec {
    pub d_ell: f64,
    pub d_tau: f64,
}

impl TangentVec {
    pub fn new(d_ell: f64, d_tau: f64) -> Self {
        TangentVec { d_ell, d_tau }
    }

    pub fn scale(self, k: f64) -> Self {
        TangentVec { d_ell: k * self.d_ell, d_tau: k * self.d_tau }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub c_ell: f64,
    pub c_tau: f64,
}

impl Covector {
    pub fn apply(&self, v: TangentVec) -> f64 {
        self.c_ell * v.d_ell + self.c_tau * v.d_tau
    }
}

/// Traces of the chart: `A` has length `l`; `B` is `A`'s transverse partner, conjugated by the
/// fractional translation `tau/l` along `A`'s axis. `tau = 0` is the locus `b = c`.
pub fn fn_to_fricke(x: ChartPoint) -> Result<FrickeTriple> {
    if !(x.ell > 0.0) {
        return Err(Error::Domain(format!("length {} must be positive", x.ell)));
    }
    let half = x.ell / 2.0;
    let a = 2.0 * half.cosh();
    let m = 2.0 / half.tanh();
    let b = m * ((x.tau - half) / 2.0).cosh();
    let c = m * ((x.tau + half) / 2.0).cosh();
    let t = FrickeTriple { a, b, c };
    if !(b > 2.0 && c > 2.0) || !b.is_finite() || !c.is_finite() {
        return Err(Error::Degenerate(format!("no structure with b, c > 2 at {x:?}")));
    }
    Ok(t)
}

/// Inverse of [`fn_to_fricke`].
pub fn fricke_to_fn(t: &FrickeTriple) -> Result<ChartPoint> {
    if !(t.a > 2.0) {
        return Err(Error::NonHyperbolic(t.a));
    }
    let ell = 2.0 * arcosh(t.a / 2.0);
    let m = 2.0 / (ell / 2.0).tanh();
    let tau = 2.0 * ((t.c - t.b) / (2.0 * m * (ell / 4.0).sinh())).asinh();
    Ok(ChartPoint { ell, tau })
}

pub fn slope_length(x: &FrickeTriple, s: Slope) -> Result<f64> {
    let tr = x.trace(s);
    if !tr.is_finite() {
        return Err(Error::Overflow(format!("trace of {s}")));
    }
    trace_to_length(tr).map_err(|_| Error::InvalidStructure(format!("trace of {s} is {tr}")))
}

/// A basis `(e1, e2)` of homology with `<e1, e2> = 1`, in `(A, B)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marking {
    pub e1: (i64, i64),
    pub e2: (i64, i64),
}

impl Marking {
    pub const STANDARD: Marking = Marking { e1: (1, 0), e2: (0, 1) };

    pub fn new(e1: (i64, i64), e2: (i64, i64)) -> Result<Self> {
        if algebraic_intersection(e1, e2) != 1 {
            return Err(Error::Domain(format!("{e1:?}, {e2:?} is not a positive basis")));
        }
        Ok(Marking { e1, e2 })
    }

    /// Some basis whose first vector is the class of `s`.
    pub fn adapted(s: Slope) -> Marking {
        let (x, y) = s.class();
        // solve x v - y u = 1
        let (g, u0, v0) = ext_gcd(x, y);
        debug_assert_eq!(g.abs(), 1);
        let (u, v) = if g == 1 { (-v0, u0) } else { (v0, -u0) };
        Marking { e1: (x, y), e2: (u, v) }
    }

    /// The same chart curve with `e2` replaced by `e2 + k e1`.
    pub fn shifted(self, k: i64) -> Marking {
        Marking { e1: self.e1, e2: (self.e2.0 + k * self.e1.0, self.e2.1 + k * self.e1.1) }
    }

    /// Local coordinates of a standard class.
    pub fn to_local(&self, c: (i64, i64)) -> (i64, i64) {
        // c = i e1 + j e2, basis has determinant 1
        let (a, b) = self.e1;
        let (p, q) = self.e2;
        (c.0 * q - c.1 * p, a * c.1 - b * c.0)
    }

    pub fn to_standard(&self, l: (i64, i64)) -> (i64, i64) {
        (l.0 * self.e1.0 + l.1 * self.e2.0, l.0 * self.e1.1 + l.1 * self.e2.1)
    }

    pub fn chart_slope(&self) -> Slope {
        Slope::from_class(self.e1.0, self.e1.1).expect("basis vectors are primitive")
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// A point of Teichmüller space given by a chart point in a chosen marking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub chart: ChartPoint,
    pub marking: Marking,
}

impl SurfacePoint {
    pub fn new(chart: ChartPoint, marking: Marking) -> Self {
        SurfacePoint { chart, marking }
    }

    pub fn standard(chart: ChartPoint) -> Self {
        SurfacePoint { chart, marking: Marking::STANDARD }
    }

    pub fn from_triple(t: &FrickeTriple) -> Result<Self> {
        t.validate(1e-9)?;
        Ok(SurfacePoint::standard(fricke_to_fn(t)?))
    }

    /// Traces of `(e1, e2, e1 + e2)`.
    pub fn local_triple(&self) -> Result<FrickeTriple> {
        fn_to_fricke(self.chart)
    }

    /// Traces in the standard marking.
    pub fn standard_triple(&self) -> Result<FrickeTriple> {
        let t = self.local_triple()?;
        let tr = |c: (i64, i64)| {
            let l = self.marking.to_local(c);
            t.class_trace(l.0, l.1).abs()
        };
        Ok(FrickeTriple { a: tr((1, 0)), b: tr((0, 1)), c: tr((1, 1)) })
    }

    /// Length of a standard class. The chart curve's length is returned exactly.
    pub fn class_length(&self, c: (i64, i64)) -> Result<f64> {
        let l = self.marking.to_local(c);
        if l == (1, 0) || l == (-1, 0) {
            return Ok(self.chart.ell);
        }
        let t = self.local_triple()?;
        let tr = t.class_trace(l.0, l.1);
        if !tr.is_finite() {
            return Err(Error::Overflow(format!("trace of class {c:?}")));
        }
        trace_to_length(tr).map_err(|_| Error::InvalidStructure(format!("trace of class {c:?} is {tr}")))
    }

    pub fn length(&self, s: Slope) -> Result<f64> {
        self.class_length(s.class())
    }

    /// The same point in a chart whose curve is `s`, with the transverse curve chosen so that
    /// `|tau| <= l/2`.
    pub fn recharted(&self, s: Slope) -> Result<SurfacePoint> {
        let base = Marking::adapted(s);
        let in_marking = |m: Marking| -> Result<SurfacePoint> {
            let tr = |c: (i64, i64)| {
                let l = self.marking.to_local(c);
                self.local_triple().map(|t| t.class_trace(l.0, l.1).abs())
            };
            let e12 = (m.e1.0 + m.e2.0, m.e1.1 + m.e2.1);
            let t = FrickeTriple { a: tr(m.e1)?, b: tr(m.e2)?, c: tr(e12)? };
            let mut chart = fricke_to_fn(&t)?;
            if m.e1 == self.marking.e1 || (m.e1.0 == -self.marking.e1.0 && m.e1.1 == -self.marking.e1.1) {
                chart.ell = self.chart.ell;
            }
            Ok(SurfacePoint { chart, marking: m })
        };
        let first = in_marking(base)?;
        let k = (first.chart.tau / first.chart.ell).round() as i64;
        if k == 0 {
            return Ok(first);
        }
        let a = in_marking(base.shifted(k))?;
        let b = in_marking(base.shifted(-k))?;
        Ok(if a.chart.tau.abs() <= b.chart.tau.abs() { a } else { b })
    }
}
