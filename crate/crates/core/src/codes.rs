//! Additive codes over GF(q^h) and their geometric twins.
//!
//! A code is a GF(q)-linear row span of a kh × n generator matrix over
//! GF(q^h). Splitting each column over a GF(q)-basis of GF(q^h) yields a
//! multiset of flats in PG(kh−1, q); hyperplanes containing s of those flats
//! correspond exactly to the (q−1) scalar classes of messages whose codeword
//! has weight n − s, which gives two independent ways to compute the weight
//! distribution.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::analysis;
use crate::geometry::{rref, Point, Subspace, SubspaceSet};
use crate::gf::{FiniteField, GFElem, SubfieldEmbedding};
use crate::{Error, Result};

/// Default cap on exhaustive codeword enumeration.
pub const DEFAULT_CODEWORD_BUDGET: u64 = 1 << 24;

/// A GF(q)-linear code of length n over the alphabet GF(q^h), held as a
/// kh × n generator matrix with GF(q)-independent rows (so the row span has
/// exactly q^{kh} codewords), together with the basis of GF(q^h) over GF(q)
/// used for coordinate splitting.
#[derive(Debug, Clone)]
pub struct AdditiveCode {
    embedding: SubfieldEmbedding,
    k: u32,
    n: usize,
    /// kh rows of n entries, each an element of the extension field.
    generator: Vec<Vec<GFElem>>,
}

impl AdditiveCode {
    pub fn new(embedding: SubfieldEmbedding, k: u32, generator: Vec<Vec<GFElem>>) -> Result<AdditiveCode> {
        let h = embedding.h();
        if k == 0 || h == 0 {
            return Err(Error::Unsupported("parameters k and h must be at least 1".into()));
        }
        let kh = (k * h) as usize;
        if generator.len() != kh {
            return Err(Error::DeficientRank { rank: generator.len(), expected: kh });
        }
        let n = generator.first().map(|r| r.len()).unwrap_or(0);
        if n == 0 {
            return Err(Error::Unsupported("a code must have length at least 1".into()));
        }
        let big = embedding.big();
        for row in &generator {
            if row.len() != n {
                return Err(Error::Unsupported("generator rows have unequal lengths".into()));
            }
            if let Some(&bad) = row.iter().find(|&&c| c >= big.q()) {
                return Err(Error::BadElement { value: bad as u64, q: big.q() as u64 });
            }
        }
        // GF(q)-independence of the rows: split every entry into its h
        // GF(q)-coordinates and rank the kh × nh matrix.
        let small = embedding.small();
        let mut split: Vec<Vec<GFElem>> = Vec::with_capacity(kh);
        for row in &generator {
            let mut flat = Vec::with_capacity(n * h as usize);
            for &entry in row {
                flat.extend(embedding.coordinates(entry));
            }
            split.push(flat);
        }
        let rank = rref(small, &mut split);
        if rank != kh {
            return Err(Error::DeficientRank { rank, expected: kh });
        }
        Ok(AdditiveCode { embedding, k, n, generator })
    }

    /// The base field GF(q).
    pub fn base(&self) -> &Arc<FiniteField> {
        self.embedding.small()
    }
    /// The alphabet GF(q^h).
    pub fn ext(&self) -> &Arc<FiniteField> {
        self.embedding.big()
    }
    pub fn embedding(&self) -> &SubfieldEmbedding {
        &self.embedding
    }
    pub fn basis(&self) -> &[GFElem] {
        self.embedding.basis()
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn h(&self) -> u32 {
        self.embedding.h()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn generator(&self) -> &[Vec<GFElem>] {
        &self.generator
    }
    /// Number of codewords q^{kh}.
    pub fn size(&self) -> u128 {
        (self.base().q() as u128).pow(self.k * self.h())
    }
}

/// Map w ↦ A_w over the codewords of an additive code; Σ A_w = q^{kh} and
/// A_0 = 1 because generators are validated to full GF(q)-rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: BTreeMap<u32, u64>,
}

impl WeightDistribution {
    pub fn get(&self, w: u32) -> u64 {
        self.counts.get(&w).copied().unwrap_or(0)
    }
    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
    /// The minimum distance d: least w > 0 with A_w > 0.
    pub fn min_distance(&self) -> Option<u32> {
        self.counts.iter().find(|(&w, &n)| w > 0 && n > 0).map(|(&w, _)| w)
    }
}

/// Column i of the generator, split over the basis, spans the i-th element:
/// an (h−1)-flat of PG(kh−1, q), or a smaller flat when the h column slices
/// are dependent. Multiplicity is preserved.
pub fn code_to_subspace_set(c: &AdditiveCode) -> Result<SubspaceSet> {
    let h = c.h() as usize;
    let kh = (c.k * c.h()) as usize;
    let mut elements = Vec::with_capacity(c.n);
    for i in 0..c.n {
        // Row j of the element = the j-th GF(q)-coordinate of column i.
        let mut rows = vec![vec![0 as GFElem; kh]; h];
        let mut all_zero = true;
        for r in 0..kh {
            let coords = c.embedding.coordinates(c.generator[r][i]);
            for (j, &cj) in coords.iter().enumerate() {
                rows[j][r] = cj;
                all_zero &= cj == 0;
            }
        }
        if all_zero {
            return Err(Error::ZeroColumn { index: i });
        }
        elements.push(Subspace::canonicalize(c.base(), &rows)?);
    }
    SubspaceSet::new(c.base().clone(), c.k, c.h(), elements)
}

/// Inverse of [`code_to_subspace_set`] on canonical sets of full (h−1)-flats:
/// row j of gens(π_i) becomes column i of the j-th component matrix. The set
/// must span PG(kh−1, q), since the resulting generator is validated to full
/// GF(q)-rank.
pub fn subspace_set_to_code(x: &SubspaceSet, embedding: SubfieldEmbedding) -> Result<AdditiveCode> {
    if embedding.h() != x.h() || embedding.small() != x.field() {
        return Err(Error::IncompatibleOrders {
            big: embedding.big().q() as u64,
            small: x.field().q() as u64,
        });
    }
    let h = x.h() as usize;
    let kh = (x.k() * x.h()) as usize;
    for (i, el) in x.elements().iter().enumerate() {
        if el.dim() != x.h() - 1 {
            return Err(Error::DeficientElement {
                index: i,
                dim: el.dim() as i64,
                expected: x.h() as i64 - 1,
            });
        }
    }
    let mut generator = vec![vec![0 as GFElem; x.len()]; kh];
    let mut coords = vec![0 as GFElem; h];
    for (i, el) in x.elements().iter().enumerate() {
        for r in 0..kh {
            for j in 0..h {
                coords[j] = el.gens()[j][r];
            }
            generator[r][i] = embedding.combine(&coords);
        }
    }
    AdditiveCode::new(embedding, x.k(), generator)
}

/// Field reduction: each point (a_1 : … : a_k) of PG(k−1, q^h) becomes the
/// (h−1)-flat of PG(kh−1, q) spanned by the expansions of (e_j·a_1, …,
/// e_j·a_k) over the basis, one row per basis element. Distinct points give
/// pairwise skew flats.
pub fn field_reduce(points: &[Point], embedding: &SubfieldEmbedding) -> Result<SubspaceSet> {
    let big = embedding.big();
    let small = embedding.small();
    let h = embedding.h() as usize;
    let k = points
        .first()
        .map(|p| p.coords().len())
        .ok_or_else(|| Error::Unsupported("field reduction of an empty point list".into()))?;
    let mut elements = Vec::with_capacity(points.len());
    for p in points {
        if p.coords().len() != k {
            return Err(Error::AmbientMismatch(k - 1, p.coords().len() - 1));
        }
        let mut rows = Vec::with_capacity(h);
        for j in 0..h {
            let e = embedding.basis()[j];
            let mut row = Vec::with_capacity(k * h);
            for &a in p.coords() {
                row.extend(embedding.coordinates(big.mul(e, a)));
            }
            rows.push(row);
        }
        elements.push(Subspace::canonicalize(small, &rows)?);
    }
    SubspaceSet::new(small.clone(), k as u32, h as u32, elements)
}

/// Weight distribution via the intersection spectrum of the associated flat
/// multiset: A_{n−s} = (q−1)·N_s plus A_0 = 1. The default path — the
/// hyperplane count is far below the codeword count.
pub fn weight_distribution(c: &AdditiveCode) -> Result<WeightDistribution> {
    let x = code_to_subspace_set(c)?;
    let sp = analysis::spectrum(&x)?;
    let qm1 = c.base().q() as u64 - 1;
    let n = c.n as u32;
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    counts.insert(0, 1);
    for (&s, &ns) in sp.counts() {
        debug_assert!(s < n || ns == 0, "a full-rank code has no hyperplane through all columns");
        if ns > 0 {
            *counts.entry(n - s).or_insert(0) += qm1 * ns;
        }
    }
    Ok(WeightDistribution { counts })
}

/// Weight distribution by enumerating all q^{kh} messages. Kept as an
/// independent oracle for the spectrum path; costs O(q^{kh}) row operations
/// via an odometer over message digits with cached partial codewords.
pub fn weight_distribution_exhaustive(c: &AdditiveCode, budget: u64) -> Result<WeightDistribution> {
    let q = c.base().q();
    let kh = (c.k * c.h()) as usize;
    let total = (q as u128).pow(kh as u32);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { what: "exhaustive codeword enumeration", needed: total, budget: budget as u128 });
    }
    let big = c.ext().as_ref();
    let n = c.n;
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    // sums[r] = codeword of the partial message (digits 0..r); sums[0] = 0.
    let mut sums: Vec<Vec<GFElem>> = vec![vec![0; n]; kh + 1];
    let mut digits = vec![0 as GFElem; kh];
    loop {
        let w = sums[kh].iter().filter(|&&x| x != 0).count() as u32;
        *counts.entry(w).or_insert(0) += 1;
        let mut i = kh as isize - 1;
        while i >= 0 {
            if digits[i as usize] + 1 < q {
                digits[i as usize] += 1;
                break;
            }
            digits[i as usize] = 0;
            i -= 1;
        }
        if i < 0 {
            break;
        }
        for r in i as usize..kh {
            let d = c.embedding.embed(digits[r]);
            let (head, tail) = sums.split_at_mut(r + 1);
            let prev = &head[r];
            let cur = &mut tail[0];
            if d == 0 {
                cur.copy_from_slice(prev);
            } else {
                for x in 0..n {
                    cur[x] = big.add(prev[x], big.mul(d, c.generator[r][x]));
                }
            }
        }
    }
    Ok(WeightDistribution { counts })
}

/// All points of PG(k−1, Q) reduced over GF(q): for k = 2 this is the
/// Desarguesian spread of PG(2h−1, q).
pub fn reduce_full_projective_line(embedding: &SubfieldEmbedding) -> Result<SubspaceSet> {
    let big = embedding.big();
    let points = crate::geometry::enumerate_points(1, big)?;
    field_reduce(&points, embedding)
}

/// Largest secant size consistency: d = n − max_secant for the associated set.
pub fn min_distance_via_spectrum(c: &AdditiveCode) -> Result<u32> {
    let x = code_to_subspace_set(c)?;
    let sp = analysis::spectrum(&x)?;
    Ok(c.n as u32 - sp.max_secant())
}
