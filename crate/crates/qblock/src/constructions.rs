//! Blocking-set constructions: spreads, point cones, spread-in-a-subspace
//! sets, the hyperplane construction, the recursive constructions for lines
//! against planes, and the general (s,t)-recursion.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::bounds::k_star;
use crate::gfq::{self, FieldSpec};
use crate::pgspace::{self, subspaces_in, QuotientFrame, Subspace};
use crate::polarity;
use crate::{Error, Result};

/// A set of t-spaces of PG(n,q), deduplicated by canonical form, together
/// with a record of how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSet {
    n: usize,
    q: u64,
    t: isize,
    construction: String,
    members: BTreeSet<Subspace>,
}

#[derive(Serialize, Deserialize)]
struct LineSetWire {
    n: usize,
    q: u64,
    t: i64,
    construction: String,
    members: Vec<Vec<Vec<u8>>>,
}

impl LineSet {
    pub fn new(n: usize, q: u64, t: isize, construction: impl Into<String>) -> LineSet {
        LineSet { n, q, t, construction: construction.into(), members: BTreeSet::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> isize {
        self.t
    }

    pub fn construction(&self) -> &str {
        &self.construction
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &BTreeSet<Subspace> {
        &self.members
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.members.contains(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subspace> {
        self.members.iter()
    }

    /// Inserts a member, enforcing ambient space and dimension. Returns
    /// whether the member was new.
    pub fn insert(&mut self, s: Subspace) -> Result<bool> {
        if s.ambient() != self.n {
            return Err(Error::AmbientMismatch);
        }
        if s.dim() != self.t {
            return Err(Error::InvalidParameter(format!(
                "member has dimension {}, expected {}",
                s.dim(),
                self.t
            )));
        }
        Ok(self.members.insert(s))
    }

    /// Merges `other` into `self`, enforcing matching parameters.
    pub fn absorb(&mut self, other: LineSet) -> Result<()> {
        if other.n != self.n || other.q != self.q || other.t != self.t {
            return Err(Error::AmbientMismatch);
        }
        self.members.extend(other.members);
        Ok(())
    }

    pub fn save<W: Write>(&self, w: W) -> Result<()> {
        let wire = LineSetWire {
            n: self.n,
            q: self.q,
            t: self.t as i64,
            construction: self.construction.clone(),
            members: self
                .members
                .iter()
                .map(|s| s.rows().iter().cloned().collect())
                .collect(),
        };
        serde_json::to_writer_pretty(w, &wire)?;
        Ok(())
    }

    /// Loads a line set, re-canonicalizing every member and rejecting rows
    /// that are not already in canonical form.
    pub fn load<R: Read>(r: R) -> Result<LineSet> {
        let wire: LineSetWire = serde_json::from_reader(r)?;
        let field = FieldSpec::new(wire.q)?;
        let t = wire.t as isize;
        let mut out = LineSet::new(wire.n, wire.q, t, wire.construction);
        for rows in wire.members {
            let s = Subspace::from_rows(&field, wire.n, &rows)
                .map_err(|e| Error::Format(format!("bad member rows: {e}")))?;
            if s.rows() != rows.as_slice() {
                return Err(Error::Format("member rows are not in canonical form".into()));
            }
            if s.dim() != t {
                return Err(Error::Format(format!(
                    "member has dimension {}, expected {}",
                    s.dim(),
                    t
                )));
            }
            if !out.members.insert(s) {
                return Err(Error::Format("duplicate member".into()));
            }
        }
        Ok(out)
    }
}

/// Sum q^lo + q^(lo+1) + ... + q^hi (0 if the range is empty).
fn geom_sum(q: u64, lo: i64, hi: i64) -> u64 {
    (lo..=hi).map(|j| q.pow(j as u32)).sum()
}

/// The Desarguesian t-spread of PG(n,q): rereading F_q^{n+1} as a vector
/// space over F_{q^{t+1}}, the members are its 1-dimensional subspaces. They
/// partition the points; size (q^{n+1}-1)/(q^{t+1}-1).
pub fn spread(n: usize, t: usize, q: u64) -> Result<LineSet> {
    if (n + 1) % (t + 1) != 0 {
        return Err(Error::Precondition(format!(
            "spread needs (t+1) | (n+1), got n={n}, t={t}"
        )));
    }
    let field = FieldSpec::new(q)?;
    let ext_order = q
        .checked_pow(t as u32 + 1)
        .filter(|&o| o <= 256)
        .ok_or(Error::InvalidParameter(format!(
            "extension field order q^(t+1) too large for q={q}, t={t}"
        )))?;
    let ext = FieldSpec::with_limit(ext_order, ext_order)?;
    let emb = gfq::embed(&field, &ext)?;
    let m = (n + 1) / (t + 1);
    let mut out = LineSet::new(n, q, t as isize, format!("spread(n={n},t={t},q={q})"));

    // normalized projective points of F_{q^{t+1}}^m
    let eo = ext_order as usize;
    for lead in 0..m {
        let free = m - lead - 1;
        let mut counter = vec![0usize; free];
        loop {
            let mut v = vec![0u8; m];
            v[lead] = 1;
            for (i, &c) in counter.iter().enumerate() {
                v[lead + 1 + i] = c as u8;
            }
            // member = F_q-row space of {beta_i * v}, flattened coordinatewise
            let rows: Vec<Vec<u8>> = emb
                .basis()
                .iter()
                .map(|&b| {
                    let mut row = Vec::with_capacity(n + 1);
                    for &vj in &v {
                        row.extend_from_slice(emb.coords(ext.mul(b, vj)));
                    }
                    row
                })
                .collect();
            out.insert(Subspace::canonicalize(&field, &rows)?)?;
            let mut done = true;
            for digit in counter.iter_mut() {
                *digit += 1;
                if *digit < eo {
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
    let expect = (q.pow(n as u32 + 1) - 1) / (q.pow(t as u32 + 1) - 1);
    debug_assert_eq!(out.len() as u64, expect);
    Ok(out)
}

/// All points of the (n-s)-space spanned by the first n-s+1 standard basis
/// vectors; blocks every s-space of PG(n,q).
pub fn bose_burton(n: usize, s: usize, q: u64) -> Result<LineSet> {
    if s > n {
        return Err(Error::Precondition(format!("bose_burton needs s <= n, got s={s}, n={n}")));
    }
    let field = FieldSpec::new(q)?;
    let base = Subspace::standard(n, n - s + 1);
    let mut out = LineSet::new(n, q, 0, format!("bose_burton(n={n},s={s},q={q})"));
    for v in base.point_vectors(&field) {
        out.insert(Subspace::canonicalize(&field, &[v])?)?;
    }
    Ok(out)
}

/// A t-spread of a fixed subspace of dimension (n+1-s)(t+1)-1, lifted into
/// PG(n,q); blocks every s-space under the hypothesis t(n+1-s) <= s.
pub fn beutel_blocking(n: usize, s: usize, t: usize, q: u64) -> Result<LineSet> {
    if t < 1 || s > n {
        return Err(Error::Precondition(format!(
            "beutel_blocking needs 1 <= t and s <= n, got s={s}, t={t}, n={n}"
        )));
    }
    if t as u64 * (n as u64 + 1 - s as u64) > s as u64 {
        return Err(Error::Precondition(format!(
            "beutel_blocking hypothesis n <= s + s/t - 1 fails for n={n}, s={s}, t={t}"
        )));
    }
    let d = (n + 1 - s) * (t + 1) - 1;
    let field = FieldSpec::new(q)?;
    let inner = spread(d, t, q)?;
    let mut out = LineSet::new(n, q, t as isize, format!("beutel_blocking(n={n},s={s},t={t},q={q})"));
    for member in inner.iter() {
        // embed PG(d,q) as the first d+1 coordinates of PG(n,q)
        let rows: Vec<Vec<u8>> = member
            .rows()
            .iter()
            .map(|r| {
                let mut v = r.clone();
                v.resize(n + 1, 0);
                v
            })
            .collect();
        out.insert(Subspace::canonicalize(&field, &rows)?)?;
    }
    Ok(out)
}

/// All lines of the hyperplane x_n = 0; blocks every plane of PG(n,q).
pub fn trivial_21(n: usize, q: u64) -> Result<LineSet> {
    if n < 2 {
        return Err(Error::Precondition(format!("trivial_21 needs n >= 2, got n={n}")));
    }
    let field = FieldSpec::new(q)?;
    let h = Subspace::standard(n, n);
    let mut out = LineSet::new(n, q, 1, format!("trivial_21(n={n},q={q})"));
    for l in subspaces_in(&field, &h, 1) {
        out.insert(l)?;
    }
    Ok(out)
}

/// All t-spaces T of X with K ∩ T = ∅ and ⟨K,T⟩ a member of `b_quot`.
///
/// Members of `b_quot` must be subspaces of X containing K with quotient
/// dimension t (ambient dimension k+t+1). Inside each such member Z, the
/// complements of K are in bijection with the linear maps from a fixed
/// complement U_0 to K's vector space, giving exactly q^{(t+1)(k+1)}
/// complements per member; the bijection is enumerated directly.
pub fn fiber_lift(field: &FieldSpec, k: &Subspace, b_quot: &LineSet, t: isize) -> Result<LineSet> {
    let n = k.ambient();
    if b_quot.n() != n {
        return Err(Error::AmbientMismatch);
    }
    if k.is_empty() {
        let mut out = b_quot.clone();
        out.construction = format!("fiber_lift(k=-1, {})", b_quot.construction);
        return Ok(out);
    }
    let kd = k.dim();
    if b_quot.t() != kd + t + 1 {
        return Err(Error::Precondition(format!(
            "fiber members must have dimension k+t+1 = {}, got {}",
            kd + t + 1,
            b_quot.t()
        )));
    }
    let k_pivots = k.pivots();
    let q = field.q() as u64;
    let maps = (0..(t + 1) * (kd + 1)).fold(1u64, |acc, _| acc * q);
    let mut out = LineSet::new(n, b_quot.q(), t, format!("fiber_lift(K, {})", b_quot.construction));
    for z in b_quot.iter() {
        if !z.contains(field, k) {
            return Err(Error::Precondition("fiber member does not contain K".into()));
        }
        // rows of Z whose pivot is not a pivot of K span a complement of K in Z
        let u0: Vec<&Vec<u8>> = z
            .rows()
            .iter()
            .filter(|r| {
                let p = r.iter().position(|&x| x != 0).unwrap();
                !k_pivots.contains(&p)
            })
            .collect();
        debug_assert_eq!(u0.len() as isize, t + 1);
        let before = out.len();
        // one complement per linear map U_0 -> V_K
        let slots = u0.len() * k.rank();
        let mut counter = vec![0u8; slots];
        loop {
            let rows: Vec<Vec<u8>> = u0
                .iter()
                .enumerate()
                .map(|(i, u)| {
                    let mut v = (*u).clone();
                    for (j, krow) in k.rows().iter().enumerate() {
                        let c = counter[i * k.rank() + j];
                        if c != 0 {
                            for idx in 0..=n {
                                v[idx] = field.add(v[idx], field.mul(c, krow[idx]));
                            }
                        }
                    }
                    v
                })
                .collect();
            out.insert(Subspace::canonicalize(field, &rows)?)?;
            let mut done = true;
            for digit in counter.iter_mut() {
                *digit += 1;
                if (*digit as u64) < q {
                    done = false;
                    break;
                }
                *digit = 0;
            }
            if done {
                break;
            }
        }
        if (out.len() - before) as u64 != maps {
            return Err(Error::Precondition(
                "fiber enumeration produced an unexpected member count".into(),
            ));
        }
    }
    Ok(out)
}

/// One recursion step for lines against planes: the fiber lift of a blocking
/// set of X/K, together with all lines of the fixed hyperplane x_n = 0 that
/// meet K. K is the span of the first k+1 standard basis vectors.
///
/// `inner` must consist of subspaces of X containing K with quotient
/// dimension 1, forming a blocking set of X/K against its planes.
pub fn basic_21(n: usize, q: u64, k: isize, inner: &LineSet) -> Result<LineSet> {
    if !(-1..=(n as isize - 3)).contains(&k) {
        return Err(Error::Precondition(format!(
            "basic_21 needs -1 <= k <= n-3, got k={k}, n={n}"
        )));
    }
    let field = FieldSpec::new(q)?;
    let ks = Subspace::standard(n, (k + 1) as usize);
    let mut out = fiber_lift(&field, &ks, inner, 1)?;
    out.construction = format!("basic_21(n={n},q={q},k={k}; {})", inner.construction);
    let h = Subspace::standard(n, n);
    if !k_subspace_in_hyperplane(&field, &ks, &h) {
        return Err(Error::Precondition("K must lie in the hyperplane x_n = 0".into()));
    }
    for l in subspaces_in(&field, &h, 1) {
        if !pgspace::meet(&field, &l, &ks)?.is_empty() {
            out.insert(l)?;
        }
    }
    Ok(out)
}

fn k_subspace_in_hyperplane(field: &FieldSpec, k: &Subspace, h: &Subspace) -> bool {
    h.contains(field, k)
}

/// Schedule override for [`improved_21_with_schedule`]: maps an ambient
/// dimension to the k used at that level of the recursion. Dimensions absent
/// from the map use the default k(n) = n - 2^floor(log2 n).
pub type KSchedule = BTreeMap<usize, isize>;

/// The recursive construction of a small blocking set of lines against
/// planes, using the default k-schedule.
pub fn improved_21(n: usize, q: u64) -> Result<LineSet> {
    improved_21_with_schedule(n, q, &KSchedule::new())
}

/// Zero-pads rows of a subspace of PG(m,q) into PG(n,q) (first m+1 coords).
fn pad_into(field: &FieldSpec, s: &Subspace, n: usize) -> Result<Subspace> {
    let rows: Vec<Vec<u8>> = s
        .rows()
        .iter()
        .map(|r| {
            let mut v = r.clone();
            v.resize(n + 1, 0);
            v
        })
        .collect();
    Subspace::from_rows(field, n, &rows)
}

/// The recursive construction with an explicit k-schedule.
///
/// Base cases: empty for n < 2, a single line for n = 2, a line spread for
/// n = 3. For n >= 4 with base K of dimension k (span of the first k+1
/// standard basis vectors), the result is the disjoint union of
/// - the fiber lift of the recursive set in X/K (members disjoint from K),
/// - for each point P of K, the lines through P inside the orthogonal
///   hyperplane H(P) of a polarity fixing K absolute, meeting K exactly in P,
/// - the recursive set inside K itself.
pub fn improved_21_with_schedule(n: usize, q: u64, schedule: &KSchedule) -> Result<LineSet> {
    let field = FieldSpec::new(q)?;
    let tag = format!("improved_21(n={n},q={q})");
    if n < 2 {
        return Ok(LineSet::new(n, q, 1, tag));
    }
    if n == 2 {
        let mut out = LineSet::new(n, q, 1, tag);
        out.insert(Subspace::standard(2, 2))?;
        return Ok(out);
    }
    if n == 3 {
        return spread(3, 1, q);
    }

    let k = match schedule.get(&n) {
        Some(&k) => k,
        None => k_star(n) as isize,
    };
    if !(0..=((n as isize - 1) / 2)).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "k = {k} out of range 0..=(n-1)/2 for n = {n}"
        )));
    }
    let ku = (k + 1) as usize;
    let ks = Subspace::standard(n, ku);
    let mut out = LineSet::new(n, q, 1, tag);

    // members disjoint from K: fiber lift of the recursive set of X/K
    let frame = QuotientFrame::new(ks.clone());
    let inner_quot = improved_21_with_schedule(n - ku, q, schedule)?;
    let mut lifted = LineSet::new(n, q, k + 2, inner_quot.construction.clone());
    for w in inner_quot.iter() {
        lifted.insert(frame.lift(&field, w)?)?;
    }
    let part_disjoint = fiber_lift(&field, &ks, &lifted, 1)?;
    let expect_disjoint = q.pow(2 * ku as u32) * inner_quot.len() as u64;
    debug_assert_eq!(part_disjoint.len() as u64, expect_disjoint);

    // members meeting K in a point: lines through P inside H(P), not in K
    let mut part_point = LineSet::new(n, q, 1, String::new());
    for (p, h) in polarity::hyperplane_assignment(&field, &ks)? {
        debug_assert!(h.contains(&field, &ks));
        for r in h.point_vectors(&field) {
            if ks.contains_vector(&field, &r) {
                continue;
            }
            let r_sub = Subspace::canonicalize(&field, &[r])?;
            part_point.insert(pgspace::span(&field, &p, &r_sub)?)?;
        }
    }
    let expect_point = geom_sum(q, 0, k as i64) * geom_sum(q, k as i64, n as i64 - 2);
    debug_assert_eq!(part_point.len() as u64, expect_point);

    // members inside K: the recursive set of K, zero-padded
    let inner_k = improved_21_with_schedule(k as usize, q, schedule)?;
    let mut part_inside = LineSet::new(n, q, 1, String::new());
    for s in inner_k.iter() {
        part_inside.insert(pad_into(&field, s, n)?)?;
    }

    // the three parts are disjoint by how each member meets K
    let total = part_disjoint.len() + part_point.len() + part_inside.len();
    out.absorb(part_disjoint)?;
    out.absorb(part_point)?;
    out.absorb(part_inside)?;
    assert_eq!(out.len(), total, "construction parts must be disjoint");
    Ok(out)
}

/// The general explicit recursion for (s,t)-blocking sets with base K of
/// dimension k: the disjoint union over d in [-1, min(k,t)] of the t-spaces
/// T with dim(K ∩ T) = d whose span with K is a member of a recursively
/// built (s-d-1, t-d-1)-blocking set of X/K.
pub fn explicit_st(n: usize, s: isize, t: isize, q: u64, k: isize) -> Result<LineSet> {
    if !(-1 <= t && t <= s && s <= n as isize) {
        return Err(Error::Precondition(format!(
            "explicit_st needs -1 <= t <= s <= n, got n={n}, s={s}, t={t}"
        )));
    }
    if !(-1..=(n as isize - s - 1)).contains(&k) {
        return Err(Error::Precondition(format!(
            "explicit_st needs -1 <= k <= n-s-1, got k={k}, n={n}, s={s}"
        )));
    }
    let field = FieldSpec::new(q)?;
    let ks = Subspace::standard(n, (k + 1) as usize);
    let frame = QuotientFrame::new(ks.clone());
    let nq = n as isize - k - 1; // quotient dimension
    let mut out = LineSet::new(n, q, t, format!("explicit_st(n={n},s={s},t={t},q={q},k={k})"));
    let mut total = 0usize;
    for d in -1..=k.min(t) {
        let sq = s - d - 1;
        let tq = t - d - 1;
        // recursively built blocking set of the quotient, in quotient coords
        let b_quot = st_blocking(nq, sq, tq, q)?;
        for w in b_quot.iter() {
            let z = frame.lift(&field, w)?;
            for cand in subspaces_in(&field, &z, t) {
                if pgspace::meet(&field, &cand, &ks)?.dim() == d {
                    out.insert(cand)?;
                    total += 1;
                }
            }
        }
    }
    assert_eq!(out.len(), total, "layers of the recursion must be disjoint");
    Ok(out)
}

/// Builds some (s,t)-blocking set of PG(n,q), dispatching on the shape of
/// (s,t): known base cases where available, otherwise one more recursion
/// step with k = 0.
fn st_blocking(n: isize, s: isize, t: isize, q: u64) -> Result<LineSet> {
    debug_assert!(-1 <= t && t <= s && s <= n);
    let nu = n.max(0) as usize;
    if t == -1 {
        // the empty subspace blocks everything
        let mut out = LineSet::new(nu, q, -1, format!("bottom(n={n},q={q})"));
        out.insert(Subspace::empty(nu))?;
        return Ok(out);
    }
    if t == s {
        // every s-space must contain a member of its own dimension: all of them
        let field = FieldSpec::new(q)?;
        let mut out = LineSet::new(nu, q, t, format!("grassmannian(n={n},t={t},q={q})"));
        for z in pgspace::grassmann_enumerate(&field, nu, t) {
            out.insert(z)?;
        }
        return Ok(out);
    }
    if t == 0 {
        return bose_burton(nu, s as usize, q);
    }
    if (s, t) == (2, 1) {
        return improved_21(nu, q);
    }
    if s == n {
        // a single t-space blocks the unique s-space
        let mut out = LineSet::new(nu, q, t, format!("single(n={n},t={t},q={q})"));
        out.insert(Subspace::standard(nu, (t + 1) as usize))?;
        return Ok(out);
    }
    explicit_st(nu, s, t, q, 0)
}
