//! Exact two-phase tableau simplex with Bland's rule.
//!
//! Solves `min c·x` subject to `A x = b`, `x ≥ 0`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
        dual: Vec<BigRational>,
    },
    /// `y` with `yᵀA ≤ 0` and `yᵀb > 0`.
    Infeasible {
        farkas: Vec<BigRational>,
    },
    Unbounded,
}

struct Tableau {
    /// rows × (n + m) coefficients followed by the right-hand side
    t: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    n: usize,
    m: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &BigRational {
        &self.t[r][self.n + self.m]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let s = self.t[r][c].clone();
        for x in self.t[r].iter_mut() {
            *x /= &s;
        }
        let prow = self.t[r].clone();
        for (k, row) in self.t.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Duals `c_B B⁻¹` read from the artificial columns, which start as I.
    fn duals(&self, cost: &[BigRational]) -> Vec<BigRational> {
        (0..self.m).map(|i| (0..self.m).map(|r| &cost[self.basis[r]] * &self.t[r][self.n + i]).sum()).collect()
    }

    /// Runs Bland's rule with the given cost over columns `0..allowed`.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let priced: BigRational = (0..self.m)
                    .filter(|&r| !self.t[r][j].is_zero())
                    .map(|r| &cost[self.basis[r]] * &self.t[r][j])
                    .sum();
                (&cost[j] - priced).is_negative()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, BigRational)> = None;
            for r in 0..self.m {
                let a = &self.t[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, j);
        }
    }

    /// Appends an identity block of artificials; rows with a negative
    /// right-hand side are negated first. Returns the row signs.
    fn new(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> (Self, Vec<BigRational>) {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let mut signs = Vec::with_capacity(m);
        let mut t = Vec::with_capacity(m);
        for (i, (row, rhs)) in a.into_iter().zip(b).enumerate() {
            let flip = rhs.is_negative();
            signs.push(if flip { -BigRational::one() } else { BigRational::one() });
            let mut full: Vec<BigRational> = if flip { row.into_iter().map(|x| -x).collect() } else { row };
            full.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
            full.push(if flip { -rhs } else { rhs });
            t.push(full);
        }
        let basis = (n..n + m).collect();
        (Self { t, basis, n, m }, signs)
    }
}

/// Minimizes `c·x` over `{A x = b, x ≥ 0}`.
pub fn solve(a: Vec<Vec<BigRational>>, b: Vec<BigRational>, c: &[BigRational]) -> LpOutcome {
    let (mut tab, signs) = Tableau::new(a, b);
    let (n, m) = (tab.n, tab.m);
    let phase1: Vec<BigRational> =
        (0..n + m).map(|j| if j >= n { BigRational::one() } else { BigRational::zero() }).collect();
    tab.optimize(&phase1, n + m);
    let infeasibility: BigRational = (0..m).map(|r| &phase1[tab.basis[r]] * tab.rhs(r)).sum();
    if infeasibility.is_positive() {
        let y = tab.duals(&phase1);
        let farkas = y.iter().zip(&signs).map(|(yi, s)| yi * s).collect();
        return LpOutcome::Infeasible { farkas };
    }
    // drive zero-level artificials out where possible
    for r in 0..m {
        if tab.basis[r] < n {
            continue;
        }
        if let Some(j) = (0..n).find(|&j| !tab.t[r][j].is_zero() && !tab.basis.contains(&j)) {
            tab.pivot(r, j);
        }
    }
    let mut cost: Vec<BigRational> = c.to_vec();
    cost.resize(n + m, BigRational::zero());
    if !tab.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.rhs(r).clone();
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    let dual = tab.duals(&cost).iter().zip(&signs).map(|(yi, s)| yi * s).collect();
    LpOutcome::Optimal { x, value, dual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_optimum() {
        // min −x − y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![q(1, 1), q(2, 1), q(1, 1), q(0, 1)], vec![q(3, 1), q(1, 1), q(0, 1), q(1, 1)]];
        let b = vec![q(4, 1), q(6, 1)];
        let c = vec![q(-1, 1), q(-1, 1), q(0, 1), q(0, 1)];
        match solve(a, b, &c) {
            LpOutcome::Optimal { x, value, dual } => {
                assert_eq!(x[0], q(8, 5));
                assert_eq!(x[1], q(6, 5));
                assert_eq!(value, q(-14, 5));
                // strong duality
                assert_eq!(dual[0].clone() * q(4, 1) + dual[1].clone() * q(6, 1), q(-14, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_has_farkas_certificate() {
        // x1 + x2 = 1, x1 + x2 = 2
        let a = vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        let b = vec![q(1, 1), q(2, 1)];
        match solve(a.clone(), b.clone(), &[q(0, 1), q(0, 1)]) {
            LpOutcome::Infeasible { farkas } => {
                for j in 0..2 {
                    let yaj: BigRational = (0..2).map(|i| &farkas[i] * &a[i][j]).sum();
                    assert!(!yaj.is_positive());
                }
                let yb: BigRational = (0..2).map(|i| &farkas[i] * &b[i]).sum();
                assert!(yb.is_positive());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_and_unbounded() {
        // −x + y = −1 → x = 1 + y, minimize −y is unbounded
        let a = vec![vec![q(-1, 1), q(1, 1)]];
        let b = vec![q(-1, 1)];
        assert_eq!(solve(a.clone(), b.clone(), &[q(0, 1), q(-1, 1)]), LpOutcome::Unbounded);
        match solve(a, b, &[q(1, 1), q(0, 1)]) {
            LpOutcome::Optimal { x, .. } => assert_eq!(x, vec![q(1, 1), q(0, 1)]),
            other => panic!("{other:?}"),
        }
    }
}
