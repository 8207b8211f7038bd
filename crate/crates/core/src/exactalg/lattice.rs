//! Canonical representatives modulo an integer lattice.
//!
//! The lattice spanned by the input vectors is brought to Hermite normal form
//! (row style: strictly increasing pivot columns, positive pivots, entries
//! above each pivot reduced into `[0, pivot)`). A vector is then reduced by
//! sweeping the pivots left to right, which picks the unique representative
//! whose pivot coordinates lie in `[0, pivot)`.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::matrix::{smith_normal_form, IntegerMatrix};
use super::poly::Integer;

/// Hermite basis of a lattice in ℤⁿ together with the torsion of ℤⁿ/L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeReduction {
    dim: usize,
    /// `(pivot column, row)` with increasing pivot columns.
    basis: Vec<(usize, Vec<Integer>)>,
    torsion: Vec<Integer>,
}

impl LatticeReduction {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the free part of ℤⁿ/L.
    pub fn quotient_rank(&self) -> usize {
        self.dim - self.basis.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &[Integer]> {
        self.basis.iter().map(|(_, r)| r.as_slice())
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.basis.iter().map(|&(c, _)| c).collect()
    }

    /// Invariant factors of ℤⁿ/L greater than one.
    pub fn torsion(&self) -> &[Integer] {
        &self.torsion
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[Integer]) -> Vec<Integer> {
        assert_eq!(v.len(), self.dim, "vector length does not match the lattice");
        let mut out = v.to_vec();
        self.reduce_in_place(&mut out);
        out
    }

    pub fn reduce_in_place(&self, v: &mut [Integer]) {
        for (c, row) in &self.basis {
            if v[*c].is_zero() {
                continue;
            }
            let q = v[*c].div_floor(&row[*c]);
            if q.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row).skip(*c) {
                if !r.is_zero() {
                    *x -= &q * r;
                }
            }
        }
    }

    pub fn contains(&self, v: &[Integer]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

/// Builds the reduction data for the lattice spanned by `vectors` in ℤⁿ.
/// Panics if the vectors have different lengths.
pub fn lattice_normal_form(dim: usize, vectors: &[Vec<Integer>]) -> LatticeReduction {
    // rows indexed by pivot column; insertion keeps echelon form
    let mut slots: Vec<Option<Vec<Integer>>> = vec![None; dim];
    for v in vectors {
        assert_eq!(v.len(), dim, "lattice vectors must have equal length");
        insert(&mut slots, v.clone());
    }
    let mut basis: Vec<(usize, Vec<Integer>)> =
        slots.into_iter().enumerate().filter_map(|(c, r)| r.map(|r| (c, r))).collect();

    // reduce entries above each pivot into [0, pivot)
    for k in 0..basis.len() {
        let (c, pivot_row) = basis[k].clone();
        for (_, row) in basis.iter_mut().take(k) {
            let q = row[c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &q * p;
                }
            }
        }
    }

    let torsion = if basis.is_empty() {
        Vec::new()
    } else {
        let rows: Vec<Vec<Integer>> = basis.iter().map(|(_, r)| r.clone()).collect();
        let snf = smith_normal_form(&IntegerMatrix::from_rows(&rows));
        snf.invariant_factors().into_iter().filter(|x| !x.is_one()).collect()
    };
    LatticeReduction { dim, basis, torsion }
}

fn insert(slots: &mut [Option<Vec<Integer>>], mut v: Vec<Integer>) {
    let mut c = 0;
    loop {
        while c < v.len() && v[c].is_zero() {
            c += 1;
        }
        if c == v.len() {
            return;
        }
        match slots[c].take() {
            None => {
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                slots[c] = Some(v);
                return;
            }
            Some(mut row) => {
                let (a, b) = (row[c].clone(), v[c].clone());
                if b.is_multiple_of(&a) {
                    let q = &b / &a;
                    axpy(&mut v, &row, &-q, c);
                } else {
                    // [s t; -b/g a/g] is unimodular and clears column c of v
                    let e = a.extended_gcd(&b);
                    let (g, s, t) = (e.gcd, e.x, e.y);
                    let (ag, bg) = (&a / &g, &b / &g);
                    let new_row: Vec<Integer> = row.iter().zip(&v).map(|(r, x)| &s * r + &t * x).collect();
                    let rest: Vec<Integer> = row.iter().zip(&v).map(|(r, x)| &ag * x - &bg * r).collect();
                    row = new_row;
                    v = rest;
                }
                if row[c].is_negative() {
                    row.iter_mut().for_each(|x| *x = -&*x);
                }
                slots[c] = Some(row);
            }
        }
    }
}

fn axpy(v: &mut [Integer], row: &[Integer], k: &Integer, from: usize) {
    for (x, r) in v.iter_mut().zip(row).skip(from) {
        if !r.is_zero() {
            *x += k * r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn even_sublattice() {
        let l = lattice_normal_form(2, &[ints(&[2, 0]), ints(&[0, 2])]);
        assert_eq!(l.torsion(), &ints(&[2, 2])[..]);
        assert_eq!(l.reduce(&ints(&[3, 3])), ints(&[1, 1]));
        // brute force over a window of Z^2: representatives are exactly the
        // four parity classes
        let mut reps = std::collections::BTreeSet::new();
        for x in -4..5 {
            for y in -4..5 {
                let r = l.reduce(&ints(&[x, y]));
                assert_eq!(r, ints(&[x.rem_euclid(2), y.rem_euclid(2)]));
                reps.insert(r);
            }
        }
        assert_eq!(reps.len(), 4);
    }

    #[test]
    fn empty_lattice_is_identity() {
        let l = lattice_normal_form(3, &[]);
        assert_eq!(l.reduce(&ints(&[5, -2, 7])), ints(&[5, -2, 7]));
        assert!(l.torsion().is_empty());
        assert_eq!(l.quotient_rank(), 3);
    }

    #[test]
    fn full_lattice_kills_everything() {
        let l = lattice_normal_form(2, &[ints(&[3, 1]), ints(&[2, 1])]);
        assert!(l.torsion().is_empty());
        assert_eq!(l.reduce(&ints(&[17, -4])), ints(&[0, 0]));
    }

    #[test]
    fn saturated_but_non_unit_pivot() {
        // Z^2 / <(2,1)> is free of rank one
        let l = lattice_normal_form(2, &[ints(&[2, 1])]);
        assert!(l.torsion().is_empty());
        assert_eq!(l.quotient_rank(), 1);
        assert!(l.contains(&ints(&[-4, -2])));
        assert!(!l.contains(&ints(&[1, 0])));
    }

    proptest! {
        #[test]
        fn reduction_is_canonical(
            gens in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 0..4),
            v in prop::collection::vec(-20i64..21, 3),
            k in prop::collection::vec(-3i64..4, 4),
        ) {
            let gens: Vec<Vec<Integer>> = gens.iter().map(|g| ints(g)).collect();
            let l = lattice_normal_form(3, &gens);
            let v = ints(&v);
            let r = l.reduce(&v);
            // idempotent
            prop_assert_eq!(l.reduce(&r), r.clone());
            // invariant under adding lattice elements
            let mut w = v.clone();
            for (g, c) in gens.iter().zip(&k) {
                for (x, y) in w.iter_mut().zip(g) {
                    *x += Integer::from(*c) * y;
                }
            }
            prop_assert_eq!(l.reduce(&w), r.clone());
            // difference lies in the lattice
            let d: Vec<Integer> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
            prop_assert!(l.contains(&d));
        }
    }
}
