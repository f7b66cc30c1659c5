//! Exact rational vectors and the little linear algebra the face calculus needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type QVec = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `round(x * denom) / denom`.
pub fn rationalize(x: f64, denom: i64) -> Result<Q> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("cannot rationalize {x}")));
    }
    let scaled = (x * denom as f64).round();
    let n = BigInt::from(scaled as i128);
    Ok(Q::new(n, BigInt::from(denom)))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Q], k: &Q) -> QVec {
    a.iter().map(|x| x * k).collect()
}

/// Divide by the absolute value of the first non-zero entry.
pub fn normalize_direction(a: &[Q]) -> QVec {
    match a.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let k = lead.abs().recip();
            scale(a, &k)
        }
        None => a.to_vec(),
    }
}

/// Row echelon form in place; returns the rank.
fn eliminate(rows: &mut [QVec]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][col].recip();
        for c in col..ncols {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..ncols {
                    let v = &rows[rank][c] * &f;
                    rows[r][c] -= v;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn rank(rows: &[QVec]) -> usize {
    let mut m = rows.to_vec();
    eliminate(&mut m)
}

/// Dimension of the affine hull of a point set (`-1` reported as 0 for the empty set).
pub fn affine_rank(points: &[&QVec]) -> usize {
    match points.split_first() {
        None => 0,
        Some((first, rest)) => rank(&rest.iter().map(|p| sub(p, first)).collect::<Vec<_>>()),
    }
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &[QVec]) -> Option<Vec<QVec>> {
    let n = m.len();
    let mut aug: Vec<QVec> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    if eliminate(&mut aug) < n {
        return None;
    }
    // after full elimination the left block is the identity when invertible
    for (i, row) in aug.iter().enumerate() {
        if !row[i].is_one() {
            return None;
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(m: &[QVec]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else { return Q::zero() };
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= &a[col][col];
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let v = &a[col][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
    }
    d
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
