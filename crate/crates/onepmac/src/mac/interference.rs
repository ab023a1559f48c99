//! Alternating-sign interference functionals.

use super::{Mac, MacError, VANISHING_TOL};
use crate::scalar::Scalar;

/// Largest `|p(b|ai,aj)+p(b|ai',aj')−p(b|ai,aj')−p(b|ai',aj)|` over outputs,
/// input pairs and contexts of the other parties.
pub fn interference_i2<T: Scalar>(mac: &Mac<T>, i: usize, j: usize) -> Result<T, MacError> {
    let al = mac.alphabets();
    al.check_subset(&[i, j])?;
    let (si, sj) = (al.stride(i), al.stride(j));
    let (mi, mj) = (al.input_size(i), al.input_size(j));
    let mut best = T::zero();
    for base in contexts(al, &[i, j]) {
        for b in 0..al.output_size() {
            let p = |ai: usize, aj: usize| mac.prob_at(b, base + ai * si + aj * sj).clone();
            for ai in 0..mi {
                for ai2 in ai + 1..mi {
                    for aj in 0..mj {
                        for aj2 in aj + 1..mj {
                            let v = (p(ai, aj) + p(ai2, aj2) - p(ai, aj2) - p(ai2, aj)).abs();
                            if v > best {
                                best = v;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(best)
}

/// `Σ_{a_S ∈ {0,1}^S} Π(−1)^{a_s} p(0|a)` with the other parties fixed by
/// `context` (entries at positions in `parties` are ignored).
pub fn interference_ik<T: Scalar>(mac: &Mac<T>, parties: &[usize], context: &[usize]) -> Result<T, MacError> {
    let alphas = vec![1; parties.len()];
    interference_ik_restricted(mac, 0, parties, &alphas, context)
}

/// Same sum restricted to inputs `{0, α_s}` per party and output `b`.
pub fn interference_ik_restricted<T: Scalar>(
    mac: &Mac<T>,
    b: usize,
    parties: &[usize],
    alphas: &[usize],
    context: &[usize],
) -> Result<T, MacError> {
    let al = mac.alphabets();
    if parties.is_empty() {
        return Err(MacError::BadSubsetSize { expected: 1, found: 0 });
    }
    al.check_subset(parties)?;
    if alphas.len() != parties.len() {
        return Err(MacError::BadSubsetSize { expected: parties.len(), found: alphas.len() });
    }
    for (&s, &alpha) in parties.iter().zip(alphas) {
        if alpha == 0 || alpha >= al.input_size(s) {
            return Err(MacError::NonBinaryRestriction(s));
        }
    }
    if b >= al.output_size() {
        return Err(MacError::OutputOutOfRange(b));
    }
    let mut ctx = context.to_vec();
    for &s in parties {
        if let Some(slot) = ctx.get_mut(s) {
            *slot = 0;
        }
    }
    al.check_inputs(&ctx)?;
    let base = al.input_index(&ctx);
    let offsets: Vec<usize> = parties.iter().zip(alphas).map(|(&s, &alpha)| alpha * al.stride(s)).collect();
    Ok(signed_sum(mac, b, base, &offsets))
}

fn signed_sum<T: Scalar>(mac: &Mac<T>, b: usize, base: usize, offsets: &[usize]) -> T {
    let mut total = T::zero();
    for mask in 0..1usize << offsets.len() {
        let mut index = base;
        for (k, off) in offsets.iter().enumerate() {
            if mask >> k & 1 == 1 {
                index += off;
            }
        }
        let p = mac.prob_at(b, index).clone();
        if mask.count_ones() % 2 == 0 {
            total = total + p;
        } else {
            total = total - p;
        }
    }
    total
}

/// Largest `|I_K|` over every output, every context and every restriction
/// `{0, α_s}` of the parties in `parties`.
pub fn max_interference_ik<T: Scalar>(mac: &Mac<T>, parties: &[usize]) -> Result<T, MacError> {
    let al = mac.alphabets();
    if parties.is_empty() {
        return Err(MacError::BadSubsetSize { expected: 1, found: 0 });
    }
    al.check_subset(parties)?;
    let mut best = T::zero();
    let restrictions = restriction_choices(parties.iter().map(|&s| al.input_size(s)).collect());
    for base in contexts(al, parties) {
        for alphas in &restrictions {
            let offsets: Vec<usize> = parties.iter().zip(alphas).map(|(&s, &alpha)| alpha * al.stride(s)).collect();
            for b in 0..al.output_size() {
                let v = signed_sum(mac, b, base, &offsets).abs();
                if v > best {
                    best = v;
                }
            }
        }
    }
    Ok(best)
}

/// True when every pairwise second-order interference vanishes.
pub fn is_separable<T: Scalar>(mac: &Mac<T>) -> bool {
    is_separable_with(mac, VANISHING_TOL)
}

pub fn is_separable_with<T: Scalar>(mac: &Mac<T>, tol: f64) -> bool {
    let n = mac.alphabets().parties();
    (0..n).all(|i| (i + 1..n).all(|j| max_interference_ik(mac, &[i, j]).map(|v| v.is_negligible(tol)).unwrap_or(false)))
}

/// Flat base indices of every context, with the listed parties at input 0.
pub(crate) fn contexts(al: &super::Alphabets, fixed: &[usize]) -> Vec<usize> {
    let free: Vec<usize> = (0..al.parties()).filter(|p| !fixed.contains(p)).collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; free.len()];
    loop {
        out.push(free.iter().zip(&digits).map(|(&p, &d)| d * al.stride(p)).sum());
        let mut k = free.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < al.input_size(free[k]) {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn restriction_choices(sizes: Vec<usize>) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for m in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (1..m).map(move |alpha| {
                    let mut next = prefix.clone();
                    next.push(alpha);
                    next
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mac::Alphabets;

    fn and_mac() -> Mac<f64> {
        Mac::deterministic(Alphabets::binary(2), |a| usize::from(!(a[0] == 1 && a[1] == 1)))
    }

    #[test]
    fn and_has_unit_interference() {
        let mac = and_mac();
        assert_eq!(interference_i2(&mac, 0, 1).unwrap(), 1.0);
        assert_eq!(interference_ik(&mac, &[0, 1], &[0, 0]).unwrap(), 1.0);
        assert!(!is_separable(&mac));
    }

    #[test]
    fn half_half_separable_mix_vanishes() {
        let al = Alphabets::binary(2);
        let g1 = Mac::<f64>::deterministic(al.clone(), |a| a[0]);
        let g2 = Mac::<f64>::deterministic(al, |a| 1 - a[1]);
        let mix = Mac::mixture(&[(0.5, &g1), (0.5, &g2)]).unwrap();
        assert_eq!(interference_i2(&mix, 0, 1).unwrap(), 0.0);
        assert!(is_separable(&mix));
    }

    #[test]
    fn bad_indices() {
        let mac = and_mac();
        assert!(matches!(interference_i2(&mac, 0, 2), Err(MacError::IndexOutOfRange { .. })));
        assert!(matches!(interference_i2(&mac, 1, 1), Err(MacError::DuplicateParty(1))));
        assert!(interference_ik(&mac, &[], &[0, 0]).is_err());
    }

    #[test]
    fn ternary_pairs_are_all_checked() {
        // Depends on a_0 == 2 jointly with a_1, invisible to the {0,1} restriction.
        let al = Alphabets::new(vec![3, 2], 2).unwrap();
        let mac = Mac::<f64>::deterministic(al, |a| usize::from(a[0] == 2 && a[1] == 1));
        assert_eq!(interference_ik(&mac, &[0, 1], &[0, 0]).unwrap(), 0.0);
        assert_eq!(max_interference_ik(&mac, &[0, 1]).unwrap(), 1.0);
        assert_eq!(interference_i2(&mac, 0, 1).unwrap(), 1.0);
    }

    #[test]
    fn contexts_enumerate_free_parties() {
        let al = Alphabets::binary(3);
        assert_eq!(contexts(&al, &[0, 2]), vec![0, 2]);
        assert_eq!(contexts(&al, &[1]), vec![0, 1, 4, 5]);
    }
}
