use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple closed curve on the torus, `p/q` in lowest terms.
///
/// The curve is the homology class `q A + p B`, where `A = 0/1` and `B = 1/0`; a class and its
/// negative give the same slope. Ordering is lexicographic on `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    pub const ZERO: Slope = Slope { p: 0, q: 1 };
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::Domain("0/0 is not a slope".into()));
        }
        let g = p.gcd(&q);
        if g != 1 {
            return Err(Error::Domain(format!("{p}/{q} is not in lowest terms")));
        }
        Ok(Self::normalized(p, q))
    }

    /// Slope of a primitive homology class given in `(A, B)` coordinates.
    pub fn from_class(x: i64, y: i64) -> Result<Self> {
        Slope::new(y, x)
    }

    fn normalized(p: i64, q: i64) -> Self {
        if q < 0 || (q == 0 && p < 0) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        }
    }

    /// Homology coordinates `(x, y)` with respect to `(A, B)`.
    pub fn class(self) -> (i64, i64) {
        (self.q, self.p)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("cannot parse slope '{s}' (expected p/q)"));
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

/// Slopes with their Stern-Brocot level (0 for `0/1` and `1/0`).
pub fn enumerate_slopes_with_level(depth: usize) -> Vec<(Slope, usize)> {
    let mut out = vec![(Slope::ZERO, 0), (Slope::INFINITY, 0)];
    // intervals between adjacent fractions, as (left, right) in (p, q)
    let mut level: Vec<((i64, i64), (i64, i64))> = vec![((0, 1), (1, 0))];
    for d in 1..=depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        let mut positives = Vec::with_capacity(level.len());
        for &(l, r) in &level {
            let m = (l.0 + r.0, l.1 + r.1);
            positives.push(Slope { p: m.0, q: m.1 });
            next.push((l, m));
            next.push((m, r));
        }
        out.extend(positives.iter().map(|s| (*s, d)));
        out.extend(positives.iter().map(|s| (Slope { p: -s.p, q: s.q }, d)));
        level = next;
    }
    out
}

/// All slopes of Farey level at most `depth`, in a fixed order.
pub fn enumerate_slopes(depth: usize) -> Vec<Slope> {
    enumerate_slopes_with_level(depth).into_iter().map(|(s, _)| s).collect()
}

pub fn intersection_number(a: Slope, b: Slope) -> u64 {
    (a.p as i128 * b.q as i128 - b.p as i128 * a.q as i128).unsigned_abs() as u64
}

/// Algebraic intersection of two classes in `(A, B)` coordinates.
pub fn algebraic_intersection(u: (i64, i64), v: (i64, i64)) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

/// Image of `s` under `m` Dehn twists along `along`, acting on homology:
/// `x -> x + m <along, x> along`.
pub fn dehn_twist(s: Slope, along: Slope, m: i64) -> Slope {
    let g = along.class();
    let x = s.class();
    let k = m * algebraic_intersection(g, x);
    let (nx, ny) = (x.0 + k * g.0, x.1 + k * g.1);
    Slope::normalized(ny, nx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_slopes(0), vec![Slope::ZERO, Slope::INFINITY]);
        let d1: Vec<String> = enumerate_slopes(1).iter().map(|s| s.to_string()).collect();
        assert_eq!(d1, vec!["0/1", "1/0", "1/1", "-1/1"]);
        let mut prev = 0;
        for d in 0..9 {
            let v = enumerate_slopes(d);
            assert_eq!(v.len(), 1 << (d + 1));
            let set: BTreeSet<_> = v.iter().collect();
            assert_eq!(set.len(), v.len());
            assert!(v.len() > prev);
            prev = v.len();
            for s in &v {
                assert_eq!(s.p.gcd(&s.q), 1);
            }
        }
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection_number(Slope::ZERO, Slope::INFINITY), 1);
        let s: Slope = "3/5".parse().unwrap();
        assert_eq!(intersection_number(s, s), 0);
        let a: Slope = "1/2".parse().unwrap();
        let b: Slope = "1/3".parse().unwrap();
        assert_eq!(intersection_number(a, b), 1);
    }

    /// Crossings of straight representatives on the flat square torus, counted directly.
    fn flat_crossings(a: Slope, b: Slope) -> u64 {
        // Parametrize a as t -> t (q_a, p_a), b as u -> c + u (q_b, p_b) with generic offset c;
        // count solutions in [0,1)^2 modulo Z^2 by brute force on a fine lattice of integer shifts.
        let (qa, pa, qb, pb) = (a.q as f64, a.p as f64, b.q as f64, b.p as f64);
        let det = qa * pb - pa * qb;
        if det == 0.0 {
            return 0;
        }
        let c = (0.1234, 0.4321);
        let mut count = 0;
        let r = (a.q.abs() + a.p.abs() + b.q.abs() + b.p.abs() + 2) as i64;
        for i in -r..=r {
            for j in -r..=r {
                // t (qa,pa) - u (qb,pb) = c + (i, j)
                let (x, y) = (c.0 + i as f64, c.1 + j as f64);
                let t = (x * pb - y * qb) / det;
                let u = (x * pa - y * qa) / det;
                if (0.0..1.0).contains(&t) && (0.0..1.0).contains(&u) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn intersection_matches_flat_torus_count() {
        let slopes = enumerate_slopes(3);
        for a in &slopes {
            for b in &slopes {
                assert_eq!(intersection_number(*a, *b), flat_crossings(*a, *b), "{a} {b}");
            }
        }
    }

    #[test]
    fn dehn_twist_examples() {
        for m in 0..30 {
            let s = dehn_twist(Slope::INFINITY, Slope::ZERO, m);
            assert_eq!(s, Slope::new(1, m).unwrap());
            assert_eq!(intersection_number(s, Slope::ZERO), 1);
        }
        let g: Slope = "2/3".parse().unwrap();
        let a: Slope = "1/1".parse().unwrap();
        let twisted = dehn_twist(a, g, 4);
        assert_eq!(intersection_number(twisted, g), intersection_number(a, g));
        assert_eq!(dehn_twist(twisted, g, -4), a);
    }

    #[test]
    fn parse_errors() {
        assert!("2/4".parse::<Slope>().is_err());
        assert!("0/0".parse::<Slope>().is_err());
        assert!("x".parse::<Slope>().is_err());
        assert_eq!("1/-2".parse::<Slope>().unwrap(), Slope { p: -1, q: 2 });
        assert_eq!("-1/0".parse::<Slope>().unwrap(), Slope::INFINITY);
    }

    proptest! {
        #[test]
        fn twist_preserves_intersection_with_axis(p in -50i64..50, q in 0i64..50, m in -20i64..20) {
            prop_assume!(p.gcd(&q) == 1);
            let s = Slope::new(p, q).unwrap();
            let g: Slope = "1/2".parse().unwrap();
            prop_assert_eq!(intersection_number(dehn_twist(s, g, m), g), intersection_number(s, g));
        }
    }
}
