//! Exhaustive verification of blocking sets, degree profiles with exact
//! statistics, and restriction to subspaces.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::constructions::LineSet;
use crate::gfq::FieldSpec;
use crate::pgspace::{gaussian_binomial, subspaces_in, GrassmannIter, Subspace};
use crate::{Error, Result};

/// Planes are streamed and checked in chunks of this size.
const CHUNK: usize = 4096;

/// Outcome of an exhaustive blocking check.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub blocked: bool,
    /// Lexicographically least uncovered s-space among the first failing
    /// chunk, absent iff blocked.
    pub witness: Option<Subspace>,
    pub s_spaces_checked: u64,
    pub elapsed_ms: u128,
}

impl VerifyReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "blocked": self.blocked,
            "witness": self.witness.as_ref().map(|w| w.rows().to_vec()),
            "s_spaces_checked": self.s_spaces_checked,
            "elapsed_ms": self.elapsed_ms,
        })
    }
}

/// Checks exhaustively that every s-space of PG(n,q) contains a member of
/// `b`, by streaming all s-spaces and enumerating the t-subspaces of each
/// against the canonical membership set. Chunks are checked in parallel;
/// the check stops at the first chunk containing failures and reports the
/// lexicographically least witness of that chunk.
pub fn is_blocking(field: &FieldSpec, b: &LineSet, s: isize) -> Result<VerifyReport> {
    let n = b.n();
    if field.q() as u64 != b.q() {
        return Err(Error::IncompatibleFields(format!(
            "field order {} vs line set order {}",
            field.q(),
            b.q()
        )));
    }
    let t = b.t();
    if !(t <= s && s <= n as isize) {
        return Err(Error::Precondition(format!(
            "is_blocking needs t <= s <= n, got t={t}, s={s}, n={n}"
        )));
    }
    let start = Instant::now();
    let mut stream = GrassmannIter::new(field, n, s);
    let mut checked = 0u64;
    loop {
        let chunk: Vec<Subspace> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(VerifyReport {
                blocked: true,
                witness: None,
                s_spaces_checked: checked,
                elapsed_ms: start.elapsed().as_millis(),
            });
        }
        checked += chunk.len() as u64;
        let witness = chunk
            .par_iter()
            .filter(|space| !subspaces_in(field, space, t).any(|cand| b.contains(&cand)))
            .min()
            .cloned();
        if let Some(w) = witness {
            return Ok(VerifyReport {
                blocked: false,
                witness: Some(w),
                s_spaces_checked: checked,
                elapsed_ms: start.elapsed().as_millis(),
            });
        }
    }
}

/// Which Grassmannian layer a degree profile ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    /// Degree of a point = number of members through it.
    Points,
    /// Degree of an s-space = number of members inside it.
    Spaces(isize),
}

/// Exact histogram of member-degrees over a Grassmannian layer, with the
/// two sides of the corresponding incidence double count.
#[derive(Debug, Clone)]
pub struct DegreeProfile {
    pub layer: Layer,
    pub histogram: BTreeMap<u64, u64>,
    pub min: u64,
    pub max: u64,
    pub mean: BigRational,
    /// Sum of all degrees over the layer.
    pub total_incidences: BigUint,
    /// The same count from the member side: |B| times the number of layer
    /// elements incident with one member.
    pub expected_incidences: BigUint,
}

impl DegreeProfile {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "layer": match self.layer {
                Layer::Points => "points".to_string(),
                Layer::Spaces(s) => format!("spaces({s})"),
            },
            "histogram": self.histogram.iter().map(|(d, c)| (d.to_string(), c)).collect::<BTreeMap<_,_>>(),
            "min": self.min,
            "max": self.max,
            "mean": self.mean.to_string(),
            "total_incidences": self.total_incidences.to_string(),
            "expected_incidences": self.expected_incidences.to_string(),
        })
    }
}

/// Computes the exact degree histogram of `b` over the chosen layer.
pub fn degree_profile(field: &FieldSpec, b: &LineSet, layer: Layer) -> Result<DegreeProfile> {
    let n = b.n();
    let q = b.q();
    let t = b.t();
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut total = BigUint::zero();
    let mut layer_size = BigUint::zero();

    let mut record = |deg: u64| {
        *histogram.entry(deg).or_insert(0) += 1;
        total += deg;
        layer_size += 1u32;
    };

    let expected = match layer {
        Layer::Points => {
            // per point: count members through it
            let mut degrees: BTreeMap<Subspace, u64> = BTreeMap::new();
            for m in b.iter() {
                for v in m.point_vectors(field) {
                    *degrees.entry(Subspace::canonicalize(field, &[v])?).or_insert(0) += 1;
                }
            }
            for p in GrassmannIter::new(field, n, 0) {
                record(degrees.get(&p).copied().unwrap_or(0));
            }
            // each member carries (t+1,1)_q points
            BigUint::from(b.len()) * gaussian_binomial(t as u64 + 1, 1, q)
        }
        Layer::Spaces(s) => {
            if !(t <= s && s <= n as isize) {
                return Err(Error::Precondition(format!(
                    "degree profile needs t <= s <= n, got t={t}, s={s}, n={n}"
                )));
            }
            for space in GrassmannIter::new(field, n, s) {
                let deg = subspaces_in(field, &space, t)
                    .filter(|cand| b.contains(cand))
                    .count() as u64;
                record(deg);
            }
            // each member lies in (n-t, s-t)_q spaces of dimension s
            BigUint::from(b.len())
                * gaussian_binomial((n as isize - t) as u64, (s - t) as u64, q)
        }
    };

    let min = histogram.keys().next().copied().unwrap_or(0);
    let max = histogram.keys().next_back().copied().unwrap_or(0);
    let mean = BigRational::new(
        num_bigint::BigInt::from(total.clone()),
        num_bigint::BigInt::from(layer_size),
    );
    Ok(DegreeProfile {
        layer,
        histogram,
        min,
        max,
        mean,
        total_incidences: total,
        expected_incidences: expected,
    })
}

/// The members of `b` contained in `k`, re-expressed in k's internal
/// coordinates (PG(dim k, q)). If `b` blocks the s-spaces of X and
/// dim(k) >= s, the result blocks the s-spaces of k.
pub fn restrict(field: &FieldSpec, b: &LineSet, k: &Subspace) -> Result<LineSet> {
    if k.ambient() != b.n() {
        return Err(Error::AmbientMismatch);
    }
    let r = k.rank();
    if r == 0 {
        return Err(Error::Precondition("cannot restrict to the empty subspace".into()));
    }
    let pivots = k.pivots();
    let mut out = LineSet::new(
        r - 1,
        b.q(),
        b.t(),
        format!("restrict({})", b.construction()),
    );
    for m in b.iter() {
        if !k.contains(field, m) {
            continue;
        }
        // rows of m are combinations of k's rows; with k in reduced echelon
        // form the coefficients sit at k's pivot columns
        let rows: Vec<Vec<u8>> = m
            .rows()
            .iter()
            .map(|row| pivots.iter().map(|&c| row[c]).collect())
            .collect();
        out.insert(Subspace::from_rows(field, r - 1, &rows)?)?;
    }
    Ok(out)
}
