//! Projective geometry over F_q: canonical subspaces, Grassmannian
//! enumeration, lattice operations, quotient spaces and the structural maps
//! between a space, a subspace and the quotient.
//!
//! A subspace of PG(n,q) is stored as the unique reduced row echelon basis of
//! its underlying vector space, which makes equality a byte comparison and
//! set membership a plain lookup.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::gfq::{FieldElement, FieldSpec};
use crate::{Error, Result};

/// A projective subspace of PG(n,q) in canonical reduced row echelon form.
///
/// `dim() == -1` encodes the empty subspace, the bottom of the lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Subspace {
    /// Ambient projective dimension.
    n: usize,
    /// RREF basis rows, each of length n+1; empty for the bottom element.
    rows: Vec<Vec<FieldElement>>,
}

/// Reduces `rows` to RREF in place, drops zero rows, returns the rank.
pub(crate) fn rref(field: &FieldSpec, rows: &mut Vec<Vec<FieldElement>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(src) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = field.inv(rows[pivot_row][col]).expect("pivot is nonzero");
        for x in rows[pivot_row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..cols {
                    let sub = field.mul(factor, rows[pivot_row][c]);
                    rows[r][c] = field.sub(rows[r][c], sub);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.retain(|r| r.iter().any(|&x| x != 0));
    rows.len()
}

/// Reduces `v` against an RREF basis; the result is zero iff v lies in the span.
pub(crate) fn reduce_against(
    field: &FieldSpec,
    basis: &[Vec<FieldElement>],
    v: &mut [FieldElement],
) {
    for row in basis {
        let pivot = row.iter().position(|&x| x != 0).expect("basis rows are nonzero");
        if v[pivot] != 0 {
            let factor = v[pivot];
            for c in 0..v.len() {
                v[c] = field.sub(v[c], field.mul(factor, row[c]));
            }
        }
    }
}

/// Right null space of the matrix `a` (rows x cols), as RREF basis rows.
pub(crate) fn nullspace(
    field: &FieldSpec,
    a: &[Vec<FieldElement>],
    cols: usize,
) -> Vec<Vec<FieldElement>> {
    let mut m: Vec<Vec<FieldElement>> = a.to_vec();
    rref(field, &mut m);
    let pivots: Vec<usize> = m
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).unwrap())
        .collect();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![0u8; cols];
        v[fc] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(m[r][fc]);
        }
        basis.push(v);
    }
    rref(field, &mut basis);
    basis
}

/// Inverse of a square matrix, by row reduction of the augmented system.
pub(crate) fn mat_inv(field: &FieldSpec, a: &[Vec<FieldElement>]) -> Option<Vec<Vec<FieldElement>>> {
    let n = a.len();
    let mut aug: Vec<Vec<FieldElement>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u8::from(i == j)));
            r
        })
        .collect();
    rref(field, &mut aug);
    // invertible iff the left block reduced to the identity
    if aug.len() != n
        || aug
            .iter()
            .enumerate()
            .any(|(i, r)| (0..n).any(|j| r[j] != u8::from(i == j)))
    {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) fn mat_mul(
    field: &FieldSpec,
    a: &[Vec<FieldElement>],
    b: &[Vec<FieldElement>],
) -> Vec<Vec<FieldElement>> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0u8; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] = field.add(out[i][j], field.mul(a[i][k], b[k][j]));
            }
        }
    }
    out
}

impl Subspace {
    /// The empty subspace of PG(n,q), the lattice bottom (dimension -1).
    pub fn empty(n: usize) -> Subspace {
        Subspace { n, rows: Vec::new() }
    }

    /// The whole space PG(n,q).
    pub fn full(n: usize) -> Subspace {
        let rows = (0..=n)
            .map(|i| {
                let mut r = vec![0u8; n + 1];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { n, rows }
    }

    /// The subspace spanned by the first `count` standard basis vectors.
    pub fn standard(n: usize, count: usize) -> Subspace {
        let rows = (0..count)
            .map(|i| {
                let mut r = vec![0u8; n + 1];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { n, rows }
    }

    /// Canonicalizes the row span of `vectors` in PG(n,q) with n+1 = vector length.
    pub fn canonicalize(field: &FieldSpec, vectors: &[Vec<FieldElement>]) -> Result<Subspace> {
        let Some(first) = vectors.first() else {
            return Err(Error::InconsistentVectorLengths);
        };
        let len = first.len();
        if len == 0 || vectors.iter().any(|v| v.len() != len) {
            return Err(Error::InconsistentVectorLengths);
        }
        let mut rows = vectors.to_vec();
        rref(field, &mut rows);
        Ok(Subspace { n: len - 1, rows })
    }

    /// Like [`Subspace::canonicalize`] but allows an empty vector list.
    pub fn from_rows(field: &FieldSpec, n: usize, vectors: &[Vec<FieldElement>]) -> Result<Subspace> {
        if vectors.is_empty() {
            return Ok(Subspace::empty(n));
        }
        if vectors.iter().any(|v| v.len() != n + 1) {
            return Err(Error::InconsistentVectorLengths);
        }
        Subspace::canonicalize(field, vectors)
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Projective dimension; -1 for the empty subspace.
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Pivot columns of the canonical basis.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).unwrap())
            .collect()
    }

    pub fn contains_vector(&self, field: &FieldSpec, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        reduce_against(field, &self.rows, &mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Subspace containment `other` ⊆ `self`.
    pub fn contains(&self, field: &FieldSpec, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(field, r))
    }

    /// All projective points of this subspace, as normalized spanning vectors
    /// (first nonzero coordinate 1), in deterministic order.
    pub fn point_vectors(&self, field: &FieldSpec) -> Vec<Vec<FieldElement>> {
        let r = self.rows.len();
        let q = field.q();
        let mut out = Vec::new();
        // points of PG(r-1,q): coefficient vectors with leading 1
        for lead in 0..r {
            let free = r - lead - 1;
            let mut counter = vec![0u8; free];
            loop {
                let mut coeff = vec![0u8; r];
                coeff[lead] = 1;
                coeff[lead + 1..].copy_from_slice(&counter);
                let mut v = vec![0u8; self.n + 1];
                for (i, &c) in coeff.iter().enumerate() {
                    if c != 0 {
                        for j in 0..=self.n {
                            v[j] = field.add(v[j], field.mul(c, self.rows[i][j]));
                        }
                    }
                }
                out.push(v);
                let mut done = true;
                for digit in counter.iter_mut() {
                    *digit += 1;
                    if (*digit as u32) < q {
                        done = false;
                        break;
                    }
                    *digit = 0;
                }
                if done {
                    break;
                }
            }
        }
        out
    }
}

/// Least upper bound of two subspaces of the same ambient space.
pub fn span(field: &FieldSpec, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.n != b.n {
        return Err(Error::AmbientMismatch);
    }
    let mut rows: Vec<Vec<FieldElement>> = a.rows.clone();
    rows.extend(b.rows.iter().cloned());
    rref(field, &mut rows);
    Ok(Subspace { n: a.n, rows })
}

/// Greatest lower bound (intersection), by the Zassenhaus block construction.
pub fn meet(field: &FieldSpec, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.n != b.n {
        return Err(Error::AmbientMismatch);
    }
    let w = a.n + 1;
    let mut block: Vec<Vec<FieldElement>> = Vec::with_capacity(a.rows.len() + b.rows.len());
    for r in &a.rows {
        let mut row = r.clone();
        row.extend_from_slice(r);
        block.push(row);
    }
    for r in &b.rows {
        let mut row = r.clone();
        row.extend(std::iter::repeat(0).take(w));
        block.push(row);
    }
    rref(field, &mut block);
    let mut rows: Vec<Vec<FieldElement>> = block
        .into_iter()
        .filter(|row| row[..w].iter().all(|&x| x == 0))
        .map(|row| row[w..].to_vec())
        .collect();
    rref(field, &mut rows);
    Ok(Subspace { n: a.n, rows })
}

/// The Gaussian binomial coefficient: the number of d-dimensional vector
/// subspaces of F_q^m, as an exact big integer.
pub fn gaussian_binomial(m: u64, d: u64, q: u64) -> BigUint {
    if d > m {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        num *= q.pow((m - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    let (quot, rem) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(rem.is_zero());
    quot
}

/// Streams every d-subspace of PG(n,q) exactly once, in lexicographic order
/// of (pivot set, free entries). The total count is the Gaussian binomial
/// (n+1, d+1)_q.
pub struct GrassmannIter<'a> {
    field: &'a FieldSpec,
    n: usize,
    rank: usize, // d + 1
    pivots: Vec<usize>,
    free_positions: Vec<(usize, usize)>, // (row, col) of each free entry
    counter: Vec<FieldElement>,
    done: bool,
    yielded_bottom: bool,
}

impl<'a> GrassmannIter<'a> {
    pub fn new(field: &'a FieldSpec, n: usize, d: isize) -> GrassmannIter<'a> {
        assert!(d >= -1 && d <= n as isize, "dimension out of range");
        let rank = (d + 1) as usize;
        let pivots: Vec<usize> = (0..rank).collect();
        let mut it = GrassmannIter {
            field,
            n,
            rank,
            pivots,
            free_positions: Vec::new(),
            counter: Vec::new(),
            done: false,
            yielded_bottom: false,
        };
        if rank > 0 {
            it.reset_free();
        }
        it
    }

    fn reset_free(&mut self) {
        self.free_positions.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..=self.n {
                if !self.pivots.contains(&c) {
                    self.free_positions.push((i, c));
                }
            }
        }
        self.counter = vec![0; self.free_positions.len()];
    }

    fn current(&self) -> Subspace {
        let mut rows = vec![vec![0u8; self.n + 1]; self.rank];
        for (i, &p) in self.pivots.iter().enumerate() {
            rows[i][p] = 1;
        }
        for (&(r, c), &v) in self.free_positions.iter().zip(&self.counter) {
            rows[r][c] = v;
        }
        Subspace { n: self.n, rows }
    }

    fn advance(&mut self) {
        let q = self.field.q() as u8;
        // odometer over free entries, least significant last
        for i in (0..self.counter.len()).rev() {
            self.counter[i] += 1;
            if self.counter[i] < q {
                return;
            }
            self.counter[i] = 0;
        }
        // next pivot combination in lexicographic order
        let k = self.rank;
        let m = self.n + 1;
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return;
            }
            i -= 1;
            if self.pivots[i] + 1 <= m - (k - i) {
                if self.pivots[i] + (k - i) < m {
                    self.pivots[i] += 1;
                    for j in i + 1..k {
                        self.pivots[j] = self.pivots[j - 1] + 1;
                    }
                    self.reset_free();
                    return;
                }
            }
        }
    }
}

impl Iterator for GrassmannIter<'_> {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.rank == 0 {
            if self.yielded_bottom {
                return None;
            }
            self.yielded_bottom = true;
            return Some(Subspace::empty(self.n));
        }
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

/// Convenience wrapper over [`GrassmannIter`].
pub fn grassmann_enumerate<'a>(field: &'a FieldSpec, n: usize, d: isize) -> GrassmannIter<'a> {
    GrassmannIter::new(field, n, d)
}

/// Enumerates the t-subspaces of a fixed subspace `s`, by mapping the
/// Grassmannian of its internal coordinates through its basis.
pub fn subspaces_in<'a>(
    field: &'a FieldSpec,
    s: &'a Subspace,
    t: isize,
) -> impl Iterator<Item = Subspace> + 'a {
    let inner_dim = s.dim();
    GrassmannIter::new(field, inner_dim.max(t).max(0) as usize, t.min(inner_dim)).filter_map(
        move |w| {
            if t > inner_dim {
                return None; // no t-subspaces at all
            }
            if w.is_empty() {
                return Some(Subspace::empty(s.n));
            }
            let rows = mat_mul(field, w.rows(), s.rows());
            Some(Subspace::canonicalize(field, &rows).expect("rows are well-formed"))
        },
    )
}

/// A subspace K together with its deterministic complement N, realizing the
/// identification X/K ≅ PG(n-k-1, q).
///
/// N is spanned by the standard basis vectors at K's non-pivot coordinates,
/// so lowering a subspace Z ⊇ K to quotient coordinates is just reading off
/// those columns of Z ∩ N.
#[derive(Debug, Clone)]
pub struct QuotientFrame {
    k: Subspace,
    complement: Subspace,
    nonpivots: Vec<usize>,
}

impl QuotientFrame {
    pub fn new(k: Subspace) -> QuotientFrame {
        let n = k.n;
        let pivots = k.pivots();
        let nonpivots: Vec<usize> = (0..=n).filter(|c| !pivots.contains(c)).collect();
        let rows = nonpivots
            .iter()
            .map(|&c| {
                let mut r = vec![0u8; n + 1];
                r[c] = 1;
                r
            })
            .collect();
        let complement = Subspace { n, rows };
        QuotientFrame { k, complement, nonpivots }
    }

    pub fn base(&self) -> &Subspace {
        &self.k
    }

    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    /// Projective dimension of the quotient space X/K.
    pub fn quotient_dim(&self) -> isize {
        self.k.n as isize - self.k.dim() - 1
    }

    /// Expresses Z ⊇ K in quotient coordinates: (Z ∩ N) read off at the
    /// non-pivot columns of K.
    pub fn lower(&self, field: &FieldSpec, z: &Subspace) -> Result<Subspace> {
        if !z.contains(field, &self.k) {
            return Err(Error::Precondition(
                "subspace does not contain the quotient base".into(),
            ));
        }
        let zn = meet(field, z, &self.complement)?;
        let qn = self.nonpivots.len(); // quotient_dim + 1
        let rows: Vec<Vec<FieldElement>> = zn
            .rows
            .iter()
            .map(|r| self.nonpivots.iter().map(|&c| r[c]).collect())
            .collect();
        if rows.is_empty() {
            return Ok(Subspace::empty(qn - 1));
        }
        let mut rows = rows;
        rref(field, &mut rows);
        Ok(Subspace { n: qn - 1, rows })
    }

    /// Lifts a subspace of the quotient PG(n-k-1,q) to the subspace of X
    /// containing K that represents it.
    pub fn lift(&self, field: &FieldSpec, w: &Subspace) -> Result<Subspace> {
        if w.n + 1 != self.nonpivots.len() {
            return Err(Error::AmbientMismatch);
        }
        let n = self.k.n;
        let mut rows: Vec<Vec<FieldElement>> = self.k.rows.clone();
        for r in &w.rows {
            let mut v = vec![0u8; n + 1];
            for (i, &c) in self.nonpivots.iter().enumerate() {
                v[c] = r[i];
            }
            rows.push(v);
        }
        rref(field, &mut rows);
        Ok(Subspace { n, rows })
    }
}

/// π_K: Y ↦ ⟨K, Y⟩, the natural projection onto the quotient, expressed in X.
pub fn map_pi(field: &FieldSpec, k: &Subspace, y: &Subspace) -> Result<Subspace> {
    span(field, k, y)
}

/// ρ_K: Y ↦ K ∩ Y.
pub fn map_rho(field: &FieldSpec, k: &Subspace, y: &Subspace) -> Result<Subspace> {
    meet(field, k, y)
}

/// The pullback δ_{K,N}(T1, T2) = ⟨T1, T2 ∩ N⟩, the unique subspace with
/// ρ_K = T1 and π_K = T2.
pub fn pullback_delta(
    field: &FieldSpec,
    k: &Subspace,
    n_comp: &Subspace,
    t1: &Subspace,
    t2: &Subspace,
) -> Result<Subspace> {
    let amb = k.n;
    if n_comp.n != amb || t1.n != amb || t2.n != amb {
        return Err(Error::AmbientMismatch);
    }
    if k.dim() + n_comp.dim() != amb as isize - 1 || !meet(field, k, n_comp)?.is_empty() {
        return Err(Error::Precondition("K and N are not complements".into()));
    }
    if !k.contains(field, t1) {
        return Err(Error::Precondition("T1 is not contained in K".into()));
    }
    if !t2.contains(field, k) {
        return Err(Error::Precondition("T2 does not contain K".into()));
    }
    let cut = meet(field, t2, n_comp)?;
    span(field, t1, &cut)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let f2 = f(2);
        let s = Subspace::canonicalize(&f2, &[vec![1, 1, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(s.rows(), &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(s.dim(), 1);

        let f3 = f(3);
        let s = Subspace::canonicalize(&f3, &[vec![2, 2, 0, 0]]).unwrap();
        assert_eq!(s.rows(), &[vec![1, 1, 0, 0]]);

        let bottom = Subspace::from_rows(&f3, 3, &[]).unwrap();
        assert_eq!(bottom.dim(), -1);
    }

    #[test]
    fn canonicalize_rejects_ragged_input() {
        let f2 = f(2);
        assert!(Subspace::canonicalize(&f2, &[vec![1, 0], vec![1, 0, 0]]).is_err());
    }

    #[test]
    fn canonicalize_idempotent_and_order_independent() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let f3 = f(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let base = vec![vec![1, 2, 0, 1, 2], vec![0, 1, 1, 1, 0], vec![2, 0, 1, 0, 1]];
        let canon = Subspace::canonicalize(&f3, &base).unwrap();
        for _ in 0..50 {
            let mut shuffled = base.clone();
            shuffled.shuffle(&mut rng);
            assert_eq!(Subspace::canonicalize(&f3, &shuffled).unwrap(), canon);
        }
        assert_eq!(Subspace::canonicalize(&f3, canon.rows()).unwrap(), canon);
    }

    #[test]
    fn span_meet_lattice_identities() {
        let f2 = f(2);
        let line = Subspace::canonicalize(&f2, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let bottom = Subspace::empty(3);
        assert_eq!(span(&f2, &line, &bottom).unwrap(), line);
        assert_eq!(meet(&f2, &line, &bottom).unwrap(), bottom);

        let p1 = Subspace::canonicalize(&f2, &[vec![1, 0, 1, 0]]).unwrap();
        let p2 = Subspace::canonicalize(&f2, &[vec![0, 1, 1, 0]]).unwrap();
        assert_eq!(span(&f2, &p1, &p2).unwrap().dim(), 1);
    }

    #[test]
    fn modular_dimension_formula_random_pairs() {
        use rand::Rng;
        use rand::SeedableRng;
        let f2 = f(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let all_planes: Vec<Subspace> = grassmann_enumerate(&f2, 4, 2).collect();
        let all_hyper: Vec<Subspace> = grassmann_enumerate(&f2, 4, 3).collect();
        for _ in 0..100 {
            let a = &all_planes[rng.gen_range(0..all_planes.len())];
            let b = &all_hyper[rng.gen_range(0..all_hyper.len())];
            let s = span(&f2, a, b).unwrap();
            let m = meet(&f2, a, b).unwrap();
            assert_eq!(m.dim(), a.dim() + b.dim() - s.dim());
        }
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(5, 2, 2), BigUint::from(155u32));
        assert_eq!(gaussian_binomial(7, 0, 3), BigUint::one());
        assert_eq!(gaussian_binomial(4, 2, 3), BigUint::from(130u32));
        assert_eq!(gaussian_binomial(2, 3, 5), BigUint::zero());
    }

    /// Brute-force count of d-subspaces by canonicalizing all (d+1)-tuples of
    /// vectors, independent of the pivot-set enumeration.
    fn brute_force_count(field: &FieldSpec, n: usize, d: usize) -> usize {
        let q = field.q() as u64;
        let total = q.pow(n as u32 + 1);
        let mut tuples: Vec<Vec<Vec<u8>>> = vec![vec![]];
        for _ in 0..=d {
            let mut next = Vec::new();
            for t in &tuples {
                for v in 0..total {
                    let mut digits = vec![0u8; n + 1];
                    let mut x = v;
                    for digit in digits.iter_mut() {
                        *digit = (x % q) as u8;
                        x /= q;
                    }
                    let mut t2 = t.clone();
                    t2.push(digits);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in tuples {
            let s = Subspace::canonicalize(field, &t).unwrap();
            if s.dim() == d as isize {
                seen.insert(s);
            }
        }
        seen.len()
    }

    #[test]
    fn grassmann_counts_match_gaussian_binomials() {
        for q in [2u64, 3] {
            let field = f(q);
            for n in 1..=4usize {
                for d in -1..=(n as isize) {
                    let count = grassmann_enumerate(&field, n, d).count();
                    let expect = gaussian_binomial(n as u64 + 1, (d + 1) as u64, q);
                    assert_eq!(BigUint::from(count), expect, "n={n} d={d} q={q}");
                }
            }
        }
        // well-known small counts as spot checks
        let f2 = f(2);
        assert_eq!(grassmann_enumerate(&f2, 2, 0).count(), 7);
        assert_eq!(grassmann_enumerate(&f2, 3, 1).count(), 35);
        assert_eq!(grassmann_enumerate(&f2, 4, 2).count(), 155);
    }

    #[test]
    fn grassmann_matches_brute_force_small() {
        for q in [2u64, 3] {
            let field = f(q);
            for (n, d) in [(2usize, 0usize), (2, 1), (3, 1)] {
                if q == 3 && n == 3 {
                    continue; // 81^2 tuples; covered by q=2
                }
                let brute = brute_force_count(&field, n, d);
                let stream: std::collections::BTreeSet<Subspace> =
                    grassmann_enumerate(&field, n, d as isize).collect();
                assert_eq!(stream.len(), brute);
            }
        }
    }

    #[test]
    fn grassmann_yields_unique_canonical_subspaces() {
        let f3 = f(3);
        let all: Vec<Subspace> = grassmann_enumerate(&f3, 3, 1).collect();
        let set: std::collections::BTreeSet<&Subspace> = all.iter().collect();
        assert_eq!(all.len(), set.len());
        for s in &all {
            assert_eq!(&Subspace::canonicalize(&f3, s.rows()).unwrap(), s);
        }
    }

    #[test]
    fn quotient_frame_cases() {
        let f2 = f(2);
        // K = ∅ → quotient is X itself
        let frame = QuotientFrame::new(Subspace::empty(4));
        assert_eq!(frame.quotient_dim(), 4);
        assert_eq!(frame.complement(), &Subspace::full(4));

        // K a point in PG(4,2) → quotient ≅ PG(3,2); its points are the
        // lines through K, of which there are (4,1)_2 = 15
        let k = Subspace::standard(4, 1);
        let frame = QuotientFrame::new(k.clone());
        assert_eq!(frame.quotient_dim(), 3);
        let through: Vec<Subspace> = grassmann_enumerate(&f2, 4, 1)
            .filter(|l| l.contains(&f2, &k))
            .collect();
        assert_eq!(through.len(), 15);
        assert_eq!(gaussian_binomial(4, 1, 2), BigUint::from(15u32));

        // K a hyperplane → quotient is a single point
        let frame = QuotientFrame::new(Subspace::standard(4, 4));
        assert_eq!(frame.quotient_dim(), 0);
    }

    #[test]
    fn quotient_lower_lift_round_trip() {
        let f3 = f(3);
        let k = Subspace::canonicalize(&f3, &[vec![1, 2, 0, 1, 0]]).unwrap();
        let frame = QuotientFrame::new(k.clone());
        for z in grassmann_enumerate(&f3, 4, 2).filter(|z| z.contains(&f3, &k)) {
            let w = frame.lower(&f3, &z).unwrap();
            assert_eq!(w.dim(), z.dim() - k.dim() - 1);
            assert_eq!(frame.lift(&f3, &w).unwrap(), z);
        }
    }

    #[test]
    fn quotient_cardinality_exhaustive() {
        // number of d-subspaces of X containing K = (n-k, d-k)_q
        for q in [2u64, 3] {
            let field = f(q);
            for n in 2..=4usize {
                for k_dim in 0..n as isize - 1 {
                    let k = Subspace::standard(n, (k_dim + 1) as usize);
                    for d in k_dim + 1..=n as isize {
                        let count = grassmann_enumerate(&field, n, d)
                            .filter(|z| z.contains(&field, &k))
                            .count();
                        let expect =
                            gaussian_binomial((n as isize - k_dim) as u64, (d - k_dim) as u64, q);
                        assert_eq!(BigUint::from(count), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn pi_rho_dimension_formula() {
        use rand::Rng;
        use rand::SeedableRng;
        // dim(ρ_K(Y)) + dim_quot(π_K(Y)) = dim(Y) - 1
        let f2 = f(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let subs: Vec<Subspace> = (0..=3)
            .flat_map(|d| grassmann_enumerate(&f2, 5, d).collect::<Vec<_>>())
            .collect();
        let ks: Vec<Subspace> = (0..=2)
            .flat_map(|d| grassmann_enumerate(&f2, 5, d).collect::<Vec<_>>())
            .collect();
        for _ in 0..1000 {
            let k = &ks[rng.gen_range(0..ks.len())];
            let y = &subs[rng.gen_range(0..subs.len())];
            let rho = map_rho(&f2, k, y).unwrap();
            let pi = map_pi(&f2, k, y).unwrap();
            let quot_dim = pi.dim() - k.dim() - 1;
            assert_eq!(rho.dim() + quot_dim, y.dim() - 1);
        }
    }

    #[test]
    fn pi_of_contained_subspace_is_base() {
        let f2 = f(2);
        let k = Subspace::standard(3, 2);
        let y = Subspace::standard(3, 1);
        assert_eq!(map_pi(&f2, &k, &y).unwrap(), k);
        assert_eq!(map_rho(&f2, &k, &Subspace::full(3)).unwrap(), k);
    }

    #[test]
    fn pullback_trivial_cases() {
        let f2 = f(2);
        let n = 5;
        let k = Subspace::standard(n, 2);
        let frame = QuotientFrame::new(k.clone());
        let bottom = Subspace::empty(n);
        let t = pullback_delta(&f2, &k, frame.complement(), &bottom, &k).unwrap();
        assert_eq!(t, bottom);
        let top = pullback_delta(&f2, &k, frame.complement(), &k, &Subspace::full(n)).unwrap();
        assert_eq!(top, Subspace::full(n));
    }

    fn pullback_round_trip(q: u64, n: usize, k_rank: usize, samples: usize, seed: u64) {
        use rand::Rng;
        use rand::SeedableRng;
        let field = f(q);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let k = Subspace::standard(n, k_rank);
        let frame = QuotientFrame::new(k.clone());
        let n_comp = frame.complement();
        let t1s: Vec<Subspace> = (-1..=k.dim())
            .flat_map(|d| {
                grassmann_enumerate(&field, n, d)
                    .filter(|s| k.contains(&field, s))
                    .collect::<Vec<_>>()
            })
            .collect();
        let t2s: Vec<Subspace> = (k.dim()..=n as isize)
            .flat_map(|d| {
                grassmann_enumerate(&field, n, d)
                    .filter(|s| s.contains(&field, &k))
                    .collect::<Vec<_>>()
            })
            .collect();
        for _ in 0..samples {
            let t1 = &t1s[rng.gen_range(0..t1s.len())];
            let t2 = &t2s[rng.gen_range(0..t2s.len())];
            let t = pullback_delta(&field, &k, n_comp, t1, t2).unwrap();
            assert_eq!(&map_rho(&field, &k, &t).unwrap(), t1);
            assert_eq!(&map_pi(&field, &k, &t).unwrap(), t2);
            let t2_quot_dim = t2.dim() - k.dim() - 1;
            assert_eq!(t.dim(), t1.dim() + t2_quot_dim + 1);
        }
    }

    #[test]
    fn pullback_round_trip_pg52() {
        pullback_round_trip(2, 5, 2, 1000, 17);
    }

    #[test]
    fn pullback_round_trip_pg43() {
        pullback_round_trip(3, 4, 2, 1000, 19);
    }

    #[test]
    fn pullback_rejects_bad_preconditions() {
        let f2 = f(2);
        let n = 4;
        let k = Subspace::standard(n, 2);
        let frame = QuotientFrame::new(k.clone());
        let outside = Subspace::canonicalize(&f2, &[vec![0, 0, 0, 0, 1]]).unwrap();
        assert!(pullback_delta(&f2, &k, frame.complement(), &outside, &Subspace::full(n)).is_err());
        assert!(pullback_delta(&f2, &k, frame.complement(), &Subspace::empty(n), &outside).is_err());
        assert!(pullback_delta(&f2, &k, &k, &Subspace::empty(n), &k).is_err());
    }

    #[test]
    fn subspaces_in_plane() {
        let f2 = f(2);
        let h = Subspace::standard(3, 3); // a plane of PG(3,2)
        let lines: Vec<Subspace> = subspaces_in(&f2, &h, 1).collect();
        assert_eq!(lines.len(), 7);
        for l in &lines {
            assert!(h.contains(&f2, l));
            assert_eq!(l.dim(), 1);
        }
    }
}
