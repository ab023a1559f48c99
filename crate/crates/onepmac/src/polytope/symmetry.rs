//! Relabeling symmetries acting on transition coordinates.

use super::Facet;
use crate::mac::Alphabets;
use std::collections::{HashSet, VecDeque};

/// Coordinate permutations generated by party swaps, per-party input
/// relabelings and output relabelings. `perm[k]` is the image of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    size: usize,
    generators: Vec<Vec<usize>>,
}

impl SymmetryGroup {
    pub fn new(size: usize, generators: Vec<Vec<usize>>) -> Self {
        for g in &generators {
            assert_eq!(g.len(), size, "generator has wrong length");
            let mut seen = vec![false; size];
            for &x in g {
                assert!(x < size && !std::mem::replace(&mut seen[x], true), "not a permutation");
            }
        }
        Self { size, generators }
    }

    pub fn trivial(size: usize) -> Self {
        Self { size, generators: Vec::new() }
    }

    /// Relabeling group of a MAC coordinate space. Parties are swapped only
    /// when their input alphabets agree.
    pub fn for_alphabets(al: &Alphabets) -> Self {
        let n = al.parties();
        let mut generators = Vec::new();
        let coord_map = |f: &dyn Fn(usize, &mut Vec<usize>) -> usize| -> Vec<usize> {
            (0..al.len())
                .map(|k| {
                    let (b, a) = al.split_coord(k);
                    let mut tuple = al.input_tuple(a);
                    let b2 = f(b, &mut tuple);
                    al.coord(b2, &tuple)
                })
                .collect()
        };
        for i in 0..n {
            for j in i + 1..n {
                if al.input_size(i) == al.input_size(j) {
                    generators.push(coord_map(&|b, t: &mut Vec<usize>| {
                        t.swap(i, j);
                        b
                    }));
                }
            }
        }
        for i in 0..n {
            let m = al.input_size(i);
            generators.push(coord_map(&|b, t: &mut Vec<usize>| {
                t[i] = match t[i] {
                    0 => 1,
                    1 => 0,
                    x => x,
                };
                b
            }));
            if m > 2 {
                generators.push(coord_map(&|b, t: &mut Vec<usize>| {
                    t[i] = (t[i] + 1) % m;
                    b
                }));
            }
        }
        let out = al.output_size();
        generators.push(coord_map(&|b, _| match b {
            0 => 1,
            1 => 0,
            x => x,
        }));
        if out > 2 {
            generators.push(coord_map(&|b, _| (b + 1) % out));
        }
        Self::new(al.len(), generators)
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn coordinate_count(&self) -> usize {
        self.size
    }

    pub fn apply<T: Clone>(g: &[usize], v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for (k, x) in v.iter().enumerate() {
            out[g[k]] = x.clone();
        }
        out
    }

    /// Orbit of a canonical facet, by breadth-first closure.
    pub fn orbit(&self, facet: &Facet) -> Vec<Facet> {
        let mut seen: HashSet<Facet> = HashSet::new();
        let mut queue = VecDeque::from([facet.clone()]);
        seen.insert(facet.clone());
        let mut out = Vec::new();
        while let Some(f) = queue.pop_front() {
            for g in &self.generators {
                let image = Facet { normal: Self::apply(g, &f.normal), offset: f.offset.clone() };
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
            out.push(f);
        }
        out.sort();
        out
    }
}

/// One orbit of facets under the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetClass {
    pub representative: Facet,
    pub size: usize,
    pub members: Vec<Facet>,
}

/// Splits canonical facets into orbits; the representative of each orbit
/// is its lexicographically smallest member. Classes are sorted by
/// representative.
pub fn canonicalize_facets(facets: &[Facet], group: &SymmetryGroup) -> Vec<FacetClass> {
    let mut assigned: HashSet<Facet> = HashSet::new();
    let mut classes = Vec::new();
    for f in facets {
        if assigned.contains(f) {
            continue;
        }
        let members = group.orbit(f);
        assigned.extend(members.iter().cloned());
        classes.push(FacetClass { representative: members[0].clone(), size: members.len(), members });
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    classes
}
