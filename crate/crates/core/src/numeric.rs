//! Small floating-point helpers shared by the geometric modules.

/// `log(1 - e^{-x})` for `x > 0`, accurate both near 0 and for large `x`.
pub fn log1mexp(x: f64) -> f64 {
    if x < std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// `1 - e^{-x}` without cancellation.
pub fn one_minus_exp_neg(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// `arcosh(y)` for `y >= 1`, stable close to 1.
pub fn arcosh(y: f64) -> f64 {
    let z = y - 1.0;
    if z < 0.5 {
        (z + (z * (2.0 + z)).sqrt()).ln_1p()
    } else {
        (y + (y * y - 1.0).sqrt()).ln()
    }
}

/// Central difference with one Richardson step: `(4 D(h/2) - D(h)) / 3`.
pub fn richardson_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d = |s: f64| (f(x + s) - f(x - s)) / (2.0 * s);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}
