//! Symmetric non-degenerate bilinear forms and the induced polarity.
//!
//! The improved recursive construction needs, for a chosen subspace K, a
//! polarity under which K is absolute (K ⊆ K^⊥): the orthogonal hyperplanes
//! of the points of K then cover the whole space line by line, which is what
//! lets the middle layer of the construction block every plane meeting K in
//! a point.

use crate::gfq::{FieldElement, FieldSpec};
use crate::pgspace::{self, Subspace};
use crate::{Error, Result};

/// A symmetric non-degenerate bilinear form on F_q^{n+1}, stored as its Gram
/// matrix.
#[derive(Debug, Clone)]
pub struct BilinearForm {
    n: usize,
    gram: Vec<Vec<FieldElement>>,
}

fn transpose(m: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

impl BilinearForm {
    /// Validates symmetry and non-degeneracy of the Gram matrix.
    pub fn new(field: &FieldSpec, gram: Vec<Vec<FieldElement>>) -> Result<BilinearForm> {
        let dim = gram.len();
        if dim == 0 || gram.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("Gram matrix must be square".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidParameter("Gram matrix must be symmetric".into()));
                }
            }
        }
        if pgspace::mat_inv(field, &gram).is_none() {
            return Err(Error::InvalidParameter("Gram matrix must be invertible".into()));
        }
        Ok(BilinearForm { n: dim - 1, gram })
    }

    /// The standard dot product on F_q^{n+1}.
    pub fn dot(n: usize) -> BilinearForm {
        let gram = (0..=n)
            .map(|i| {
                let mut r = vec![0u8; n + 1];
                r[i] = 1;
                r
            })
            .collect();
        BilinearForm { n, gram }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &[Vec<FieldElement>] {
        &self.gram
    }

    /// Evaluates the form on two coordinate vectors.
    pub fn eval(&self, field: &FieldSpec, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        let mut acc = 0u8;
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj != 0 {
                    acc = field.add(acc, field.mul(ui, field.mul(self.gram[i][j], vj)));
                }
            }
        }
        acc
    }

    /// The orthogonal complement of a subspace under this form.
    /// Always satisfies dim(Y) + dim(perp(Y)) = n - 1.
    pub fn perp(&self, field: &FieldSpec, y: &Subspace) -> Result<Subspace> {
        if y.ambient() != self.n {
            return Err(Error::AmbientMismatch);
        }
        if y.is_empty() {
            return Ok(Subspace::full(self.n));
        }
        let m = pgspace::mat_mul(field, y.rows(), &self.gram);
        let basis = pgspace::nullspace(field, &m, self.n + 1);
        Subspace::from_rows(field, self.n, &basis)
    }

    /// True iff Y ⊆ perp(Y).
    pub fn is_absolute(&self, field: &FieldSpec, y: &Subspace) -> Result<bool> {
        Ok(self.perp(field, y)?.contains(field, y))
    }
}

/// Builds a symmetric non-degenerate bilinear form under which `k` is
/// absolute (k ⊆ perp(k)).
///
/// The basis of K is extended by standard basis vectors to a basis of the
/// ambient space; the Gram matrix in that basis is the permutation matrix of
/// the involution that pairs the i-th vector of K with the i-th extension
/// vector and pairs the remaining extension vectors consecutively, fixing the
/// last one if their count is odd.
pub fn form_absolute_for(field: &FieldSpec, k: &Subspace) -> Result<BilinearForm> {
    let n = k.ambient();
    let r = k.rank();
    if 2 * r > n + 1 {
        return Err(Error::Precondition(
            "absolute subspace needs dim(K) <= (n-1)/2".into(),
        ));
    }
    // extend to a basis: K's rows first, then standard vectors at non-pivot columns
    let mut basis: Vec<Vec<FieldElement>> = k.rows().to_vec();
    let pivots = k.pivots();
    for c in 0..=n {
        if !pivots.contains(&c) {
            let mut v = vec![0u8; n + 1];
            v[c] = 1;
            basis.push(v);
        }
    }
    let dim = n + 1;
    debug_assert_eq!(basis.len(), dim);

    // involution in basis coordinates
    let mut gram_b = vec![vec![0u8; dim]; dim];
    for i in 0..r {
        gram_b[i][r + i] = 1;
        gram_b[r + i][i] = 1;
    }
    let mut rest = 2 * r;
    while rest < dim {
        if rest + 1 < dim {
            gram_b[rest][rest + 1] = 1;
            gram_b[rest + 1][rest] = 1;
            rest += 2;
        } else {
            gram_b[rest][rest] = 1;
            rest += 1;
        }
    }

    // change to standard coordinates: G = M^{-1} G_B M^{-T}
    let minv = pgspace::mat_inv(field, &basis)
        .expect("extension by non-pivot standard vectors is a basis");
    let g = pgspace::mat_mul(
        field,
        &pgspace::mat_mul(field, &minv, &gram_b),
        &transpose(&minv),
    );
    BilinearForm::new(field, g)
}

/// True iff the orthogonal hyperplanes of the points of the line `l` cover
/// the whole space. This holds for every line and every symmetric
/// non-degenerate form; it is exposed as a checkable oracle.
pub fn balloon_check(field: &FieldSpec, form: &BilinearForm, l: &Subspace) -> Result<bool> {
    if l.dim() != 1 {
        return Err(Error::Precondition("balloon check requires a line".into()));
    }
    if l.ambient() != form.ambient() {
        return Err(Error::AmbientMismatch);
    }
    let line_points = l.point_vectors(field);
    let all_points = Subspace::full(form.ambient()).point_vectors(field);
    Ok(all_points
        .iter()
        .all(|v| line_points.iter().any(|p| form.eval(field, p, v) == 0)))
}

/// For each point P of `k`, the orthogonal hyperplane H(P) of the polarity
/// from [`form_absolute_for`]. Each H(P) contains k, and for every line of k
/// the union of its points' hyperplanes covers the whole space.
pub fn hyperplane_assignment(
    field: &FieldSpec,
    k: &Subspace,
) -> Result<Vec<(Subspace, Subspace)>> {
    let form = form_absolute_for(field, k)?;
    let mut out = Vec::new();
    for v in k.point_vectors(field) {
        let p = Subspace::canonicalize(field, &[v])?;
        let h = form.perp(field, &p)?;
        out.push((p, h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgspace::grassmann_enumerate;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn rejects_asymmetric_and_singular_grams() {
        let f2 = f(2);
        assert!(BilinearForm::new(&f2, vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(BilinearForm::new(&f2, vec![vec![1, 1], vec![1, 1]]).is_err());
        assert!(BilinearForm::new(&f2, vec![vec![0, 1], vec![1, 0]]).is_ok());
    }

    #[test]
    fn perp_dimension_and_double_perp_exhaustive_pg32() {
        let f2 = f(2);
        let form = BilinearForm::dot(3);
        for d in -1..=3isize {
            for y in grassmann_enumerate(&f2, 3, d) {
                let p = form.perp(&f2, &y).unwrap();
                assert_eq!(y.dim() + p.dim(), 2);
                assert_eq!(form.perp(&f2, &p).unwrap(), y);
            }
        }
    }

    #[test]
    fn perp_extremes() {
        let f3 = f(3);
        let form = BilinearForm::dot(4);
        assert_eq!(form.perp(&f3, &Subspace::empty(4)).unwrap(), Subspace::full(4));
        assert_eq!(form.perp(&f3, &Subspace::full(4)).unwrap(), Subspace::empty(4));
        let p = Subspace::standard(4, 1);
        assert_eq!(form.perp(&f3, &p).unwrap().dim(), 3);
    }

    #[test]
    fn inclusion_reversal_sampled() {
        use rand::Rng;
        use rand::SeedableRng;
        let f3 = f(3);
        let form = BilinearForm::dot(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let lines: Vec<Subspace> = grassmann_enumerate(&f3, 3, 1).collect();
        let planes: Vec<Subspace> = grassmann_enumerate(&f3, 3, 2).collect();
        let mut seen = 0;
        while seen < 50 {
            let a = &lines[rng.gen_range(0..lines.len())];
            let b = &planes[rng.gen_range(0..planes.len())];
            if b.contains(&f3, a) {
                let pa = form.perp(&f3, a).unwrap();
                let pb = form.perp(&f3, b).unwrap();
                assert!(pa.contains(&f3, &pb));
                seen += 1;
            }
        }
    }

    #[test]
    fn balloon_all_lines_pg32_dot_form() {
        let f2 = f(2);
        let form = BilinearForm::dot(3);
        for l in grassmann_enumerate(&f2, 3, 1) {
            assert!(balloon_check(&f2, &form, &l).unwrap());
        }
    }

    #[test]
    fn balloon_line_pg43_absolute_form() {
        let f3 = f(3);
        let k = Subspace::canonicalize(&f3, &[vec![1, 0, 2, 0, 1], vec![0, 1, 1, 2, 0]]).unwrap();
        let form = form_absolute_for(&f3, &k).unwrap();
        assert!(balloon_check(&f3, &form, &k).unwrap());
    }

    #[test]
    fn absolute_form_empty_base() {
        let f2 = f(2);
        let form = form_absolute_for(&f2, &Subspace::empty(3)).unwrap();
        assert!(form.is_absolute(&f2, &Subspace::empty(3)).unwrap());
    }

    #[test]
    fn absolute_form_point_pg42() {
        let f2 = f(2);
        let p = Subspace::canonicalize(&f2, &[vec![1, 1, 0, 1, 0]]).unwrap();
        let form = form_absolute_for(&f2, &p).unwrap();
        assert_eq!(form.eval(&f2, &p.rows()[0], &p.rows()[0]), 0);
        assert!(form.is_absolute(&f2, &p).unwrap());
    }

    #[test]
    fn absolute_form_line_pg53() {
        let f3 = f(3);
        let k = Subspace::canonicalize(&f3, &[vec![1, 2, 0, 0, 1, 1], vec![0, 0, 1, 2, 2, 0]])
            .unwrap();
        let form = form_absolute_for(&f3, &k).unwrap();
        let perp = form.perp(&f3, &k).unwrap();
        assert!(perp.contains(&f3, &k));
        assert_eq!(perp.dim(), 3);
    }

    #[test]
    fn absolute_form_rejects_large_base() {
        let f2 = f(2);
        // a plane in PG(4,2) has dim 2 > (4-1)/2
        assert!(form_absolute_for(&f2, &Subspace::standard(4, 3)).is_err());
    }

    #[test]
    fn hyperplane_assignment_line_pg52() {
        let f2 = f(2);
        let k = Subspace::canonicalize(&f2, &[vec![1, 0, 1, 0, 1, 0], vec![0, 1, 0, 0, 1, 1]])
            .unwrap();
        let hs = hyperplane_assignment(&f2, &k).unwrap();
        assert_eq!(hs.len(), 3);
        let mut covered = std::collections::BTreeSet::new();
        for (p, h) in &hs {
            assert!(h.contains(&f2, &k), "H(P) must contain K");
            assert!(h.contains(&f2, p));
            for v in h.point_vectors(&f2) {
                covered.insert(Subspace::canonicalize(&f2, &[v]).unwrap());
            }
        }
        assert_eq!(covered.len(), 63);
    }

    #[test]
    fn hyperplane_assignment_balloon_exhaustive_small() {
        // for every K of dim k <= 3 over q <= 3 (one representative ambient
        // n = 2k+1 each), every line of K balloons: the union of the
        // orthogonal hyperplanes of its points is the whole space
        for q in [2u64, 3] {
            let field = f(q);
            for k_dim in 1..=3usize {
                let n = 2 * k_dim + 1;
                let k = Subspace::standard(n, k_dim + 1);
                let form = form_absolute_for(&field, &k).unwrap();
                assert!(form.is_absolute(&field, &k).unwrap());
                let all_points = Subspace::full(n).point_vectors(&field);
                for l in crate::pgspace::subspaces_in(&field, &k, 1) {
                    let line_points = l.point_vectors(&field);
                    let ok = all_points.iter().all(|v| {
                        line_points.iter().any(|p| form.eval(&field, p, v) == 0)
                    });
                    assert!(ok, "line of K fails to balloon (q={q}, k={k_dim})");
                }
            }
        }
    }
}
