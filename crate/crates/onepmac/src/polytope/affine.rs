//! Affine rank and affine hulls by Gaussian elimination on `v_i − v_0`.

use super::PolytopeError;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Incremental row-reduced echelon basis of the differences `v − v_0`.
#[derive(Debug, Clone)]
pub struct AffineRank<T> {
    origin: Option<Vec<T>>,
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
    tol: f64,
}

impl<T: Scalar> AffineRank<T> {
    /// `tol` is ignored for exact scalars.
    pub fn new(tol: f64) -> Self {
        Self { origin: None, rows: Vec::new(), pivots: Vec::new(), tol }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn origin(&self) -> Option<&[T]> {
        self.origin.as_deref()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `point − origin` after elimination against the basis.
    fn residual(&self, point: &[T]) -> Vec<T> {
        let origin = self.origin.as_ref().expect("origin set");
        let mut r: Vec<T> = point.iter().zip(origin).map(|(p, o)| p.clone() - o.clone()).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        r
    }

    pub fn contains(&self, point: &[T]) -> Result<bool, PolytopeError> {
        let origin = self.origin.as_ref().ok_or(PolytopeError::EmptyInput)?;
        check_len(origin.len(), point.len())?;
        Ok(self.residual(point).iter().all(|x| x.is_negligible(self.tol)))
    }

    /// Adds a point; returns true when the rank grew.
    pub fn push(&mut self, point: &[T]) -> Result<bool, PolytopeError> {
        let Some(origin) = &self.origin else {
            self.origin = Some(point.to_vec());
            return Ok(false);
        };
        check_len(origin.len(), point.len())?;
        let mut r = self.residual(point);
        // largest entry as pivot; for exact scalars any nonzero entry would do
        let mut best: Option<usize> = None;
        for (k, x) in r.iter().enumerate() {
            if x.is_negligible(self.tol) {
                continue;
            }
            if best.is_none_or(|b| x.abs() > r[b].abs()) {
                best = Some(k);
                if T::EXACT {
                    break;
                }
            }
        }
        let Some(p) = best else { return Ok(false) };
        let scale = r[p].clone();
        for x in r.iter_mut() {
            *x = x.clone() / scale.clone();
        }
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&r) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        Ok(true)
    }
}

fn check_len(expected: usize, found: usize) -> Result<(), PolytopeError> {
    if expected != found {
        Err(PolytopeError::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

/// Dimension of the affine hull; exact for rationals.
pub fn affine_dimension<T: Scalar>(points: &[Vec<T>]) -> Result<usize, PolytopeError> {
    affine_dimension_tol(points, 0.0)
}

/// As [`affine_dimension`] with a rank tolerance for floating scalars.
pub fn affine_dimension_tol<T: Scalar>(points: &[Vec<T>], tol: f64) -> Result<usize, PolytopeError> {
    if points.is_empty() {
        return Err(PolytopeError::EmptyInput);
    }
    let mut rank = AffineRank::new(tol);
    for p in points {
        rank.push(p)?;
    }
    Ok(rank.rank())
}

/// Exact affine dimension of a stream of integer points, stopping once the
/// rank reaches `cap` (pass the ambient bound when one is known).
///
/// Membership of each new point is first tested in `i128` against a scaled
/// copy of the basis; the rational path runs only when that test fails or
/// overflows.
pub fn affine_dimension_stream(
    points: impl IntoIterator<Item = Vec<i64>>,
    cap: Option<usize>,
) -> Result<usize, PolytopeError> {
    let mut rank = AffineRank::<BigRational>::new(0.0);
    let mut scaled: Option<ScaledBasis> = None;
    let mut origin: Option<Vec<i64>> = None;
    for point in points {
        let Some(o) = &origin else {
            rank.push(&to_rational(&point))?;
            origin = Some(point);
            continue;
        };
        check_len(o.len(), point.len())?;
        if let Some(basis) = &scaled {
            let diff: Vec<i64> = point.iter().zip(o).map(|(a, b)| a - b).collect();
            if basis.contains(&diff) == Some(true) {
                continue;
            }
        }
        if rank.push(&to_rational(&point))? {
            scaled = ScaledBasis::new(&rank);
            if cap.is_some_and(|c| rank.rank() >= c) {
                break;
            }
        }
    }
    if origin.is_none() {
        return Err(PolytopeError::EmptyInput);
    }
    Ok(rank.rank())
}

fn to_rational(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

/// Basis rows times the common denominator, as `i128`.
struct ScaledBasis {
    denom: i128,
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl ScaledBasis {
    fn new(rank: &AffineRank<BigRational>) -> Option<Self> {
        let mut l = BigInt::one();
        for row in rank.rows() {
            for x in row {
                l = l.lcm(x.denom());
            }
        }
        let rows = rank
            .rows()
            .iter()
            .map(|row| row.iter().map(|x| (x.numer() * (&l / x.denom())).to_i128()).collect())
            .collect::<Option<Vec<Vec<i128>>>>()?;
        let n = rank.origin()?.len();
        let free = (0..n).filter(|c| !rank.pivots().contains(c)).collect();
        Some(Self { denom: l.to_i128()?, rows, pivots: rank.pivots().to_vec(), free })
    }

    /// `None` on overflow.
    fn contains(&self, diff: &[i64]) -> Option<bool> {
        for &c in &self.free {
            let mut acc = self.denom.checked_mul(diff[c] as i128)?;
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                let d = diff[p] as i128;
                if d != 0 {
                    acc = acc.checked_sub(d.checked_mul(row[c])?)?;
                }
            }
            if acc != 0 {
                return Some(false);
            }
        }
        Some(true)
    }
}

/// Exact affine hull with an orthogonal projector onto its direction space.
#[derive(Debug, Clone)]
pub struct AffineHull {
    rank: AffineRank<BigRational>,
    gram_inverse: Vec<Vec<BigRational>>,
}

impl AffineHull {
    pub fn new(points: &[Vec<BigRational>]) -> Result<Self, PolytopeError> {
        if points.is_empty() {
            return Err(PolytopeError::EmptyInput);
        }
        let mut rank = AffineRank::new(0.0);
        for p in points {
            rank.push(p)?;
        }
        let rows = rank.rows();
        let gram: Vec<Vec<BigRational>> = rows.iter().map(|a| rows.iter().map(|b| dot(a, b)).collect()).collect();
        let gram_inverse = invert(gram).expect("basis rows are independent");
        Ok(Self { rank, gram_inverse })
    }

    pub fn dim(&self) -> usize {
        self.rank.rank()
    }

    pub fn ambient(&self) -> usize {
        self.origin().len()
    }

    pub fn origin(&self) -> &[BigRational] {
        self.rank.origin().expect("nonempty hull")
    }

    /// Coordinates that parametrize the hull injectively.
    pub fn pivots(&self) -> &[usize] {
        self.rank.pivots()
    }

    pub fn contains(&self, point: &[BigRational]) -> Result<bool, PolytopeError> {
        self.rank.contains(point)
    }

    /// Hull coordinates of a point: its entries at the pivot positions.
    pub fn reduce(&self, point: &[BigRational]) -> Vec<BigRational> {
        self.pivots().iter().map(|&p| point[p].clone()).collect()
    }

    /// Orthogonal projection onto the direction space.
    pub fn project(&self, c: &[BigRational]) -> Vec<BigRational> {
        let rows = self.rank.rows();
        let bc: Vec<BigRational> = rows.iter().map(|r| dot(r, c)).collect();
        let z: Vec<BigRational> = self.gram_inverse.iter().map(|g| dot(g, &bc)).collect();
        let mut out = vec![BigRational::zero(); c.len()];
        for (row, zk) in rows.iter().zip(&z) {
            if zk.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                *o += zk * r;
            }
        }
        out
    }

    /// Basis of the orthogonal complement of the direction space.
    pub fn complement_basis(&self) -> Vec<Vec<BigRational>> {
        let n = self.ambient();
        let pivots = self.pivots();
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![BigRational::zero(); n];
                v[f] = BigRational::one();
                for (row, &p) in self.rank.rows().iter().zip(pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// Gauss–Jordan inverse; `None` when singular.
pub(crate) fn invert(mut m: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let s = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &s;
        }
        for x in inv[col].iter_mut() {
            *x /= &s;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..n {
                let (a, b) = (m[col][c].clone(), inv[col][c].clone());
                m[r][c] -= &f * a;
                inv[r][c] -= &f * b;
            }
        }
    }
    Some(inv)
}
