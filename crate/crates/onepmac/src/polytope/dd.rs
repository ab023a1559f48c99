//! Double description method for a pointed cone `{x : A x ≤ 0}`.
//!
//! Rays are kept as primitive integer vectors. Adjacency uses the
//! combinatorial test on tight-constraint sets.

use super::affine::invert;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains_all(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    tight: Bits,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Extreme rays of `{x : row·x ≤ 0 for every row}`. The rows must have
/// full column rank so the cone is pointed.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = rows.first().map_or(0, Vec::len);
    let nrows = rows.len();
    // greedy choice of m independent rows
    let mut basis_rows: Vec<usize> = Vec::new();
    let mut echelon: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for (p, e) in &echelon {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone() / e[*p].clone();
            for (x, y) in r.iter_mut().zip(e) {
                *x -= &f * y;
            }
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            echelon.push((p, r));
            basis_rows.push(i);
            if basis_rows.len() == m {
                break;
            }
        }
    }
    assert_eq!(basis_rows.len(), m, "constraint matrix must have full column rank");
    let a0: Vec<Vec<BigRational>> =
        basis_rows.iter().map(|&i| rows[i].iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let inv = invert(a0).expect("independent rows");
    // ray j is −(column j of A0^{-1}): tight on every initial row but j
    let mut rays: Vec<Ray> = (0..m)
        .map(|j| {
            let col: Vec<BigRational> = (0..m).map(|r| -inv[r][j].clone()).collect();
            let lcm = col.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let v = primitive(col.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
            let mut tight = Bits::new(nrows);
            for (k, &i) in basis_rows.iter().enumerate() {
                if k != j {
                    tight.set(i);
                }
            }
            Ray { v, tight }
        })
        .collect();

    let mut done = vec![false; nrows];
    for &i in &basis_rows {
        done[i] = true;
    }
    for i in 0..nrows {
        if done[i] {
            continue;
        }
        done[i] = true;
        let a = &rows[i];
        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        if plus.is_empty() {
            for (r, val) in rays.iter_mut().zip(&values) {
                if val.is_zero() {
                    r.tight.set(i);
                }
            }
            continue;
        }
        let minus: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &plus {
            for &n in &minus {
                let common = rays[p].tight.and(&rays[n].tight);
                if (common.count() as usize) + 2 < m {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(k, r)| k != p && k != n && r.tight.contains_all(&common));
                if blocked {
                    continue;
                }
                let v: Vec<BigInt> =
                    rays[n].v.iter().zip(&rays[p].v).map(|(xn, xp)| &values[p] * xn - &values[n] * xp).collect();
                let mut tight = common;
                tight.set(i);
                fresh.push(Ray { v: primitive(v), tight });
            }
        }
        let mut kept = Vec::with_capacity(rays.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if values[k].is_zero() {
                r.tight.set(i);
                kept.push(r);
            } else if values[k].is_negative() {
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }
    rays.into_iter().map(|r| r.v).collect()
}
