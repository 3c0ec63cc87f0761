//! Points, flats, and hyperplanes of PG(n, q).
//!
//! Every subspace is held as its reduced-row-echelon generator matrix, which
//! is the unique canonical representative: two values are equal iff their
//! matrices are bit-identical. Points carry a deterministic enumeration
//! index (lexicographic on normalized coordinate vectors), and hyperplanes
//! are stored as normal vectors indexed the same way in the dual space.

use std::sync::Arc;

use crate::gf::{FiniteField, GFElem};
use crate::{Error, Result};

/// Hard cap on enumerable spaces so point indices stay well inside u64.
const POINT_LIMIT: u128 = 1 << 40;

/// (q^{n+1} − 1)/(q − 1), the number of points of PG(n, q), guarded.
pub fn num_points(q: u64, n: u32) -> Result<u64> {
    let mut count: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..=n {
        count += pw;
        pw *= q as u128;
        if count > POINT_LIMIT {
            return Err(Error::SpaceTooLarge { points: count });
        }
    }
    Ok(count as u64)
}

/// Dot product over GF(q).
pub fn dot(f: &FiniteField, a: &[GFElem], b: &[GFElem]) -> GFElem {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0;
    for (&x, &y) in a.iter().zip(b) {
        acc = f.add(acc, f.mul(x, y));
    }
    acc
}

/// A point of PG(n, q): a nonzero coordinate vector normalized so its first
/// nonzero entry is 1, plus its position in the enumeration order.
///
/// Enumeration order is lexicographic on normalized coordinate vectors under
/// the integer encoding, so index 0 is always (0, …, 0, 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<GFElem>,
    index: u64,
}

impl Point {
    /// Normalize an arbitrary nonzero vector to its canonical representative.
    pub fn from_coords(f: &FiniteField, coords: &[GFElem]) -> Result<Point> {
        if let Some(&bad) = coords.iter().find(|&&c| c >= f.q()) {
            return Err(Error::BadElement { value: bad as u64, q: f.q() as u64 });
        }
        let fi = coords.iter().position(|&c| c != 0).ok_or(Error::ZeroSubspace)?;
        let inv = f.inv(coords[fi])?;
        let coords: Vec<GFElem> = coords.iter().map(|&c| f.mul(inv, c)).collect();
        let index = point_index(f, &coords);
        Ok(Point { coords, index })
    }

    /// The point at a given position of the enumeration of PG(n, q).
    pub fn from_index(f: &FiniteField, n: u32, index: u64) -> Result<Point> {
        let total = num_points(f.q() as u64, n)?;
        if index >= total {
            return Err(Error::IndexOutOfRange { index: index as usize, size: total as usize });
        }
        let q = f.q() as u64;
        let w = n as usize + 1;
        // Blocks of constant first-nonzero position fi, deepest first:
        // block fi starts at (q^{n−fi} − 1)/(q − 1) and has q^{n−fi} points.
        let mut fi = n as usize;
        let mut start = 0u64;
        let mut size = 1u64;
        while index >= start + size {
            start += size;
            size *= q;
            fi -= 1;
        }
        let mut coords = vec![0 as GFElem; w];
        coords[fi] = 1;
        let mut suf = index - start;
        for i in (fi + 1..w).rev() {
            coords[i] = (suf % q) as GFElem;
            suf /= q;
        }
        Ok(Point { coords, index })
    }

    pub fn coords(&self) -> &[GFElem] {
        &self.coords
    }
    pub fn index(&self) -> u64 {
        self.index
    }
    /// Ambient projective dimension n.
    pub fn ambient_dim(&self) -> u32 {
        self.coords.len() as u32 - 1
    }
}

/// Enumeration index of a possibly unnormalized nonzero vector.
pub fn point_index(f: &FiniteField, coords: &[GFElem]) -> u64 {
    let w = coords.len();
    let q = f.q() as u64;
    let fi = coords.iter().position(|&c| c != 0).expect("zero vector has no index");
    let inv = if coords[fi] == 1 { 1 } else { f.inv(coords[fi]).expect("nonzero") };
    let mut index = 0u64;
    let mut pw = 1u64;
    for _ in 0..(w - 1 - fi) {
        index += pw;
        pw *= q;
    }
    let mut suf = 0u64;
    for &c in &coords[fi + 1..] {
        suf = suf * q + f.mul(inv, c) as u64;
    }
    index + suf
}

/// All points of PG(n, q), in index order.
pub fn enumerate_points(n: u32, f: &FiniteField) -> Result<Vec<Point>> {
    let total = num_points(f.q() as u64, n)?;
    (0..total).map(|i| Point::from_index(f, n, i)).collect()
}

/// A hyperplane of PG(n, q), stored as its normalized normal vector.
///
/// A point x lies on the hyperplane iff normal · x = 0; a subspace lies in it
/// iff every generator row does.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    normal: Point,
}

impl Hyperplane {
    pub fn from_normal(f: &FiniteField, coords: &[GFElem]) -> Result<Hyperplane> {
        Ok(Hyperplane { normal: Point::from_coords(f, coords)? })
    }
    pub fn from_index(f: &FiniteField, n: u32, index: u64) -> Result<Hyperplane> {
        Ok(Hyperplane { normal: Point::from_index(f, n, index)? })
    }
    pub fn normal(&self) -> &Point {
        &self.normal
    }
    pub fn index(&self) -> u64 {
        self.normal.index
    }
    pub fn ambient_dim(&self) -> u32 {
        self.normal.ambient_dim()
    }
}

/// All hyperplanes of PG(n, q), in dual index order (same order as points).
pub fn enumerate_hyperplanes(n: u32, f: &FiniteField) -> Result<Vec<Hyperplane>> {
    Ok(enumerate_points(n, f)?.into_iter().map(|normal| Hyperplane { normal }).collect())
}

/// A nonempty subspace of PG(n, q) in canonical form: an r × (n+1) generator
/// matrix in reduced row echelon form, pivots left to right, no zero rows.
/// Projective dimension is r − 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: u32,
    gens: Vec<Vec<GFElem>>,
}

impl Subspace {
    /// Row-reduce an arbitrary generating matrix to the canonical form.
    /// Idempotent; rejects the zero matrix.
    pub fn canonicalize(f: &FiniteField, rows: &[Vec<GFElem>]) -> Result<Subspace> {
        let w = rows.first().map(|r| r.len()).unwrap_or(0);
        if w == 0 {
            return Err(Error::ZeroSubspace);
        }
        for r in rows {
            if r.len() != w {
                return Err(Error::AmbientMismatch(w - 1, r.len().saturating_sub(1)));
            }
            if let Some(&bad) = r.iter().find(|&&c| c >= f.q()) {
                return Err(Error::BadElement { value: bad as u64, q: f.q() as u64 });
            }
        }
        let mut m = rows.to_vec();
        let rank = rref(f, &mut m);
        if rank == 0 {
            return Err(Error::ZeroSubspace);
        }
        m.truncate(rank);
        Ok(Subspace { ambient: w as u32 - 1, gens: m })
    }

    /// The point x as a 0-dimensional flat.
    pub fn from_point(f: &FiniteField, p: &Point) -> Subspace {
        Subspace::canonicalize(f, &[p.coords().to_vec()]).expect("a point is nonzero")
    }

    /// Ambient projective dimension n.
    pub fn ambient_dim(&self) -> u32 {
        self.ambient
    }
    /// Projective dimension r − 1.
    pub fn dim(&self) -> u32 {
        self.gens.len() as u32 - 1
    }
    pub fn gens(&self) -> &[Vec<GFElem>] {
        &self.gens
    }

    /// Pivot column of each generator row.
    pub fn pivots(&self) -> Vec<usize> {
        self.gens
            .iter()
            .map(|r| r.iter().position(|&c| c != 0).expect("no zero rows in canonical form"))
            .collect()
    }

    /// Basis of the space of hyperplane normals vanishing on this subspace
    /// (the kernel of the generator matrix), one vector per free column, in
    /// column order. Its span has vector dimension (n+1) − r.
    pub fn dual_flat_basis(&self, f: &FiniteField) -> Vec<Vec<GFElem>> {
        let w = self.ambient as usize + 1;
        let pivots = self.pivots();
        let mut basis = Vec::with_capacity(w - pivots.len());
        for fc in 0..w {
            if pivots.contains(&fc) {
                continue;
            }
            let mut v = vec![0 as GFElem; w];
            v[fc] = 1;
            for (l, &pl) in pivots.iter().enumerate() {
                v[pl] = f.neg(self.gens[l][fc]);
            }
            basis.push(v);
        }
        basis
    }
}

/// Reduced row echelon form in place; returns the rank. Zero rows end up at
/// the bottom and pivot rows are sorted by pivot column, so the result on the
/// first `rank` rows is the unique canonical form of the row space.
pub(crate) fn rref(f: &FiniteField, m: &mut [Vec<GFElem>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let w = m[0].len();
    let mut r = 0;
    for col in 0..w {
        let Some(pr) = (r..rows).find(|&i| m[i][col] != 0) else { continue };
        m.swap(r, pr);
        if m[r][col] != 1 {
            let inv = f.inv(m[r][col]).expect("pivot is nonzero");
            for x in col..w {
                m[r][x] = f.mul(inv, m[r][x]);
            }
        }
        for i in 0..rows {
            if i != r && m[i][col] != 0 {
                let c = m[i][col];
                for x in col..w {
                    let s = f.mul(c, m[r][x]);
                    m[i][x] = f.sub(m[i][x], s);
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Projective dimension of the span of the given subspaces.
pub fn span_dim(f: &FiniteField, subs: &[&Subspace]) -> Result<u32> {
    let first = subs.first().ok_or(Error::ZeroSubspace)?;
    let mut stacked: Vec<Vec<GFElem>> = Vec::new();
    for s in subs {
        if s.ambient != first.ambient {
            return Err(Error::AmbientMismatch(first.ambient as usize, s.ambient as usize));
        }
        stacked.extend(s.gens.iter().cloned());
    }
    let rank = rref(f, &mut stacked);
    Ok(rank as u32 - 1)
}

/// Whether the subspace lies inside the hyperplane.
pub fn incidence(f: &FiniteField, s: &Subspace, hyp: &Hyperplane) -> Result<bool> {
    if s.ambient != hyp.ambient_dim() {
        return Err(Error::AmbientMismatch(s.ambient as usize, hyp.ambient_dim() as usize));
    }
    Ok(s.gens.iter().all(|row| dot(f, row, hyp.normal.coords()) == 0))
}

/// Whether two subspaces intersect trivially: the span has projective
/// dimension dim(a) + dim(b) + 1.
pub fn skew(f: &FiniteField, a: &Subspace, b: &Subspace) -> Result<bool> {
    Ok(span_dim(f, &[a, b])? == a.dim() + b.dim() + 1)
}

/// Visit one representative vector of every projective point in the row
/// space of `rows` (which must be linearly independent). Vectors are not
/// normalized; each projective point is visited exactly once. Cost is O(1)
/// row operations per point, amortized, via an odometer over coefficient
/// suffixes with cached partial sums.
pub fn for_each_span_vector(f: &FiniteField, rows: &[Vec<GFElem>], mut visit: impl FnMut(&[GFElem])) {
    let d = rows.len();
    if d == 0 {
        return;
    }
    let w = rows[0].len();
    let q = f.q();
    let mut sums: Vec<Vec<GFElem>> = vec![vec![0; w]; d];
    // First nonzero coefficient sits at position l with value 1.
    for l in 0..d {
        let suffix = d - l - 1;
        let mut digits = vec![0 as GFElem; suffix];
        sums[l].copy_from_slice(&rows[l]);
        for j in l + 1..d {
            let (head, tail) = sums.split_at_mut(j);
            tail[0].copy_from_slice(&head[j - 1]);
        }
        loop {
            visit(&sums[d - 1]);
            let mut i = suffix as isize - 1;
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
            // Coefficient at position l+1+i changed; everything after reset.
            for jpos in (l + 1 + i as usize)..d {
                let c = digits[jpos - l - 1];
                let (head, tail) = sums.split_at_mut(jpos);
                let prev = &head[jpos - 1];
                let cur = &mut tail[0];
                if c == 0 {
                    cur.copy_from_slice(prev);
                } else {
                    for x in 0..w {
                        cur[x] = f.add(prev[x], f.mul(c, rows[jpos][x]));
                    }
                }
            }
        }
    }
}

/// Point indices of every projective point in the row space of `rows`.
pub fn enumerate_span_indices(f: &FiniteField, rows: &[Vec<GFElem>]) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_span_vector(f, rows, |v| out.push(point_index(f, v)));
    out
}

/// Flats enumerated at once are capped here; beyond this, exhaustive
/// universes stop being desk-scale objects.
pub const FLAT_LIMIT: u128 = 1 << 22;

/// Number of (h−1)-flats of PG(ambient−1, q): the Gaussian binomial
/// [ambient choose h]_q. None if it overflows u128.
pub fn count_flats(q: u64, ambient: u32, h: u32) -> Option<u128> {
    if h > ambient {
        return Some(0);
    }
    // Pascal-style recurrence [n k] = [n-1 k-1] + q^k [n-1 k], all exact.
    let mut row: Vec<Option<u128>> = vec![Some(1)];
    for n in 1..=ambient {
        let top = h.min(n);
        let mut next: Vec<Option<u128>> = Vec::with_capacity(top as usize + 1);
        next.push(Some(1));
        for k in 1..=top {
            let left = if (k as usize) < row.len() { row[k as usize - 1] } else { None };
            let up = row.get(k as usize).copied().flatten();
            let v = if k == n {
                Some(1)
            } else {
                let qk = (q as u128).checked_pow(k)?;
                let scaled = up.and_then(|u| u.checked_mul(qk));
                match (left, scaled) {
                    (Some(a), Some(b)) => a.checked_add(b),
                    _ => None,
                }
            };
            next.push(v);
        }
        row = next;
    }
    row.get(h as usize).copied().flatten()
}

/// Every (h−1)-flat of PG(ambient−1, q), each in canonical (reduced
/// row-echelon) form, in a fixed total order: pivot-column tuples in
/// descending lexicographic order, then free entries as an ascending
/// odometer with the left-most cell most significant. For h = 1 this is
/// exactly the point-index order of `enumerate_points`.
pub fn enumerate_flats(f: &FiniteField, ambient: u32, h: u32) -> Result<Vec<Subspace>> {
    if h == 0 || h > ambient {
        return Err(Error::Unsupported(format!(
            "flats of vector dimension {h} in ambient dimension {ambient} make no sense"
        )));
    }
    let total = count_flats(f.q() as u64, ambient, h).unwrap_or(u128::MAX);
    if total > FLAT_LIMIT {
        return Err(Error::BudgetExceeded { what: "flat universe", needed: total, budget: FLAT_LIMIT });
    }
    let w = ambient as usize;
    let hh = h as usize;
    let q = f.q();

    // All h-subsets of columns, ascending lex; consumed in reverse.
    let mut combos: Vec<Vec<usize>> = Vec::new();
    let mut combo: Vec<usize> = (0..hh).collect();
    loop {
        combos.push(combo.clone());
        let Some(pos) = (0..hh).rev().find(|&i| combo[i] < w - hh + i) else {
            break;
        };
        combo[pos] += 1;
        for i in pos + 1..hh {
            combo[i] = combo[i - 1] + 1;
        }
    }

    let mut out: Vec<Subspace> = Vec::with_capacity(total as usize);
    for pivots in combos.iter().rev() {
        let is_pivot: Vec<bool> = (0..w).map(|c| pivots.contains(&c)).collect();
        // Free cells in row-major order; the last one ticks fastest.
        let cells: Vec<(usize, usize)> = (0..hh)
            .flat_map(|i| (pivots[i] + 1..w).map(move |c| (i, c)))
            .filter(|&(_, c)| !is_pivot[c])
            .collect();
        let mut digits = vec![0 as GFElem; cells.len()];
        loop {
            let mut gens = vec![vec![0 as GFElem; w]; hh];
            for i in 0..hh {
                gens[i][pivots[i]] = 1;
            }
            for (d, &(i, c)) in digits.iter().zip(cells.iter()) {
                gens[i][c] = *d;
            }
            debug_assert_eq!(Subspace::canonicalize(f, &gens).unwrap().gens(), &gens[..]);
            out.push(Subspace { ambient: ambient - 1, gens });

            let Some(pos) = (0..digits.len()).rev().find(|&i| digits[i] + 1 < q) else {
                break;
            };
            digits[pos] += 1;
            for d in digits[pos + 1..].iter_mut() {
                *d = 0;
            }
        }
    }
    Ok(out)
}

/// An ordered multiset of flats of projective dimension ≤ h−1 in PG(kh−1, q).
/// Repeats are permitted and count with multiplicity everywhere.
#[derive(Debug, Clone)]
pub struct SubspaceSet {
    field: Arc<FiniteField>,
    k: u32,
    h: u32,
    elements: Vec<Subspace>,
}

impl SubspaceSet {
    pub fn new(field: Arc<FiniteField>, k: u32, h: u32, elements: Vec<Subspace>) -> Result<SubspaceSet> {
        if k == 0 || h == 0 {
            return Err(Error::Unsupported("parameters k and h must be at least 1".into()));
        }
        let ambient = k * h - 1;
        num_points(field.q() as u64, ambient)?;
        for (i, el) in elements.iter().enumerate() {
            if el.ambient_dim() != ambient {
                return Err(Error::AmbientMismatch(ambient as usize, el.ambient_dim() as usize));
            }
            if el.dim() > h - 1 {
                return Err(Error::DeficientElement {
                    index: i,
                    dim: el.dim() as i64,
                    expected: h as i64 - 1,
                });
            }
        }
        Ok(SubspaceSet { field, k, h, elements })
    }

    /// A set of points (h = 1) from raw coordinate rows.
    pub fn from_points(field: Arc<FiniteField>, k: u32, coords: &[Vec<GFElem>]) -> Result<SubspaceSet> {
        let elements = coords
            .iter()
            .map(|c| Subspace::canonicalize(&field, std::slice::from_ref(c)))
            .collect::<Result<Vec<_>>>()?;
        SubspaceSet::new(field, k, 1, elements)
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn h(&self) -> u32 {
        self.h
    }
    /// Ambient projective dimension kh − 1.
    pub fn ambient_dim(&self) -> u32 {
        self.k * self.h - 1
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }
}

/// Result of a quotient: the image multiset together with the projective
/// dimension of each image (h−1 exactly when the source element was skew to
/// the quotient element).
#[derive(Debug, Clone)]
pub struct QuotientOutcome {
    pub set: SubspaceSet,
    pub image_dims: Vec<u32>,
}

/// Quotient of the set at element i: fixes the complement spanned by the
/// non-pivot unit coordinates of gens(π_i), projects every other element
/// along π_i onto it, and re-reads the images in PG((k−1)h − 1, q).
pub fn quotient(x: &SubspaceSet, i: usize) -> Result<QuotientOutcome> {
    if x.k < 3 {
        return Err(Error::QuotientNeedsK3(x.k));
    }
    if i >= x.len() {
        return Err(Error::IndexOutOfRange { index: i, size: x.len() });
    }
    let f = x.field.as_ref();
    let pi = &x.elements[i];
    if pi.dim() != x.h - 1 {
        return Err(Error::DeficientElement { index: i, dim: pi.dim() as i64, expected: x.h as i64 - 1 });
    }
    let pivots = pi.pivots();
    let w = x.ambient_dim() as usize + 1;
    let keep: Vec<usize> = (0..w).filter(|c| !pivots.contains(c)).collect();

    let mut images = Vec::with_capacity(x.len() - 1);
    let mut image_dims = Vec::with_capacity(x.len() - 1);
    for (j, el) in x.elements.iter().enumerate() {
        if j == i {
            continue;
        }
        let mut rows: Vec<Vec<GFElem>> = Vec::with_capacity(el.gens().len());
        for v in el.gens() {
            // Subtract the π_i component: the result vanishes on every pivot
            // coordinate, so it lives in the chosen complement.
            let mut v = v.clone();
            for (l, &pl) in pivots.iter().enumerate() {
                if v[pl] != 0 {
                    let c = v[pl];
                    for t in 0..w {
                        let s = f.mul(c, pi.gens()[l][t]);
                        v[t] = f.sub(v[t], s);
                    }
                }
            }
            rows.push(keep.iter().map(|&c| v[c]).collect());
        }
        if rows.iter().all(|r| r.iter().all(|&c| c == 0)) {
            return Err(Error::QuotientCollapse { index: j });
        }
        let img = Subspace::canonicalize(f, &rows)?;
        image_dims.push(img.dim());
        images.push(img);
    }
    let set = SubspaceSet::new(x.field.clone(), x.k - 1, x.h, images)?;
    Ok(QuotientOutcome { set, image_dims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u32, m: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, m).unwrap())
    }

    #[test]
    fn flat_counts_and_enumeration() {
        assert_eq!(count_flats(2, 4, 2), Some(35));
        assert_eq!(count_flats(3, 3, 1), Some(13));
        assert_eq!(count_flats(3, 6, 2), Some(11011));
        assert_eq!(count_flats(2, 4, 5), Some(0));

        // Lines of PG(3,2): 35, all distinct, all of vector dimension 2.
        let f = gf(2, 1);
        let lines = enumerate_flats(&f, 4, 2).unwrap();
        assert_eq!(lines.len(), 35);
        let distinct: std::collections::BTreeSet<Vec<Vec<GFElem>>> =
            lines.iter().map(|s| s.gens().to_vec()).collect();
        assert_eq!(distinct.len(), 35);
        assert!(lines.iter().all(|s| s.dim() == 1 && s.ambient_dim() == 3));
        // Each line's dual basis spans the 3 hyperplanes through it.
        assert!(lines
            .iter()
            .all(|s| enumerate_span_indices(&f, &s.dual_flat_basis(&f)).len() == 3));

        // h = 1 reproduces the point order exactly.
        let f3 = gf(3, 1);
        let flats = enumerate_flats(&f3, 3, 1).unwrap();
        let points = enumerate_points(2, &f3).unwrap();
        assert_eq!(flats.len(), points.len());
        for (s, p) in flats.iter().zip(points.iter()) {
            assert_eq!(s.gens()[0], p.coords());
        }

        assert!(enumerate_flats(&f, 4, 0).is_err());
        assert!(enumerate_flats(&f, 4, 5).is_err());
    }

    #[test]
    fn point_counts() {
        assert_eq!(num_points(4, 2).unwrap(), 21);
        assert_eq!(num_points(2, 5).unwrap(), 63);
        assert_eq!(num_points(3, 5).unwrap(), 364);
        assert!(matches!(num_points(2, 60), Err(Error::SpaceTooLarge { .. })));
    }

    #[test]
    fn enumeration_is_lexicographic_and_round_trips() {
        let f = gf(3, 1);
        let pts = enumerate_points(3, &f).unwrap();
        assert_eq!(pts.len(), 40);
        assert_eq!(pts[0].coords(), &[0, 0, 0, 1]);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(p.index(), i as u64);
            assert_eq!(point_index(&f, p.coords()), i as u64);
            assert_eq!(Point::from_index(&f, 3, i as u64).unwrap(), *p);
        }
        for pair in pts.windows(2) {
            assert!(pair[0].coords() < pair[1].coords());
        }
        // Unnormalized input lands on the same index.
        let doubled: Vec<GFElem> = pts[17].coords().iter().map(|&c| f.mul(2, c)).collect();
        assert_eq!(point_index(&f, &doubled), 17);
    }

    #[test]
    fn canonicalize_small_cases() {
        let f2 = gf(2, 1);
        let s = Subspace::canonicalize(&f2, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(s.gens(), &[vec![1, 0, 1], vec![0, 1, 1]]);
        let again = Subspace::canonicalize(&f2, s.gens()).unwrap();
        assert_eq!(s, again);

        let f3 = gf(3, 1);
        let s = Subspace::canonicalize(&f3, &[vec![2, 2, 0], vec![1, 1, 0]]).unwrap();
        assert_eq!(s.gens(), &[vec![1, 1, 0]]);
        assert_eq!(s.dim(), 0);

        assert!(matches!(
            Subspace::canonicalize(&f2, &[vec![0, 0, 0]]),
            Err(Error::ZeroSubspace)
        ));
    }

    proptest! {
        #[test]
        fn canonical_form_ignores_row_operations(seed in 0u64..5000) {
            use rand::{Rng, SeedableRng};
            use rand::seq::SliceRandom;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for f in [gf(2, 1), gf(3, 1), gf(2, 2), gf(5, 1)] {
                let w = rng.gen_range(2..6usize);
                let r = rng.gen_range(1..4usize);
                let rows: Vec<Vec<GFElem>> =
                    (0..r).map(|_| (0..w).map(|_| rng.gen_range(0..f.q())).collect()).collect();
                if rows.iter().all(|row| row.iter().all(|&c| c == 0)) {
                    continue;
                }
                let canon = Subspace::canonicalize(&f, &rows).unwrap();
                let mut shuffled = rows.clone();
                shuffled.shuffle(&mut rng);
                for row in shuffled.iter_mut() {
                    let scale = rng.gen_range(1..f.q());
                    for c in row.iter_mut() {
                        *c = f.mul(scale, *c);
                    }
                }
                prop_assert_eq!(canon, Subspace::canonicalize(&f, &shuffled).unwrap());
            }
        }
    }

    #[test]
    fn spans_skewness_and_incidence() {
        let f = gf(2, 1);
        let l1 = Subspace::canonicalize(&f, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let l2 = Subspace::canonicalize(&f, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(span_dim(&f, &[&l1, &l2]).unwrap(), 3);
        assert_eq!(span_dim(&f, &[&l1, &l1]).unwrap(), l1.dim());
        assert!(skew(&f, &l1, &l2).unwrap());
        assert!(!skew(&f, &l1, &l1).unwrap());

        let h = Hyperplane::from_normal(&f, &[0, 0, 0, 1]).unwrap();
        assert!(incidence(&f, &l1, &h).unwrap());
        let h2 = Hyperplane::from_normal(&f, &[1, 0, 0, 0]).unwrap();
        assert!(!incidence(&f, &l1, &h2).unwrap());

        let short = Subspace::canonicalize(&f, &[vec![1, 0, 0]]).unwrap();
        assert!(matches!(span_dim(&f, &[&l1, &short]), Err(Error::AmbientMismatch(3, 2))));
    }

    #[test]
    fn dual_flat_enumeration_agrees_with_dot_products() {
        for f in [gf(2, 1), gf(3, 1)] {
            let n = if f.q() == 2 { 3 } else { 2 };
            let pts = enumerate_points(n, &f).unwrap();
            for hyp in enumerate_hyperplanes(n, &f).unwrap() {
                let brute: Vec<u64> = pts
                    .iter()
                    .filter(|p| dot(&f, p.coords(), hyp.normal().coords()) == 0)
                    .map(|p| p.index())
                    .collect();
                let s = Subspace::canonicalize(&f, &[hyp.normal().coords().to_vec()]).unwrap();
                let mut via_kernel = enumerate_span_indices(&f, &s.dual_flat_basis(&f));
                via_kernel.sort_unstable();
                assert_eq!(via_kernel, brute);
            }
        }
    }

    #[test]
    fn span_enumeration_visits_each_point_once() {
        let f = gf(3, 1);
        let rows = vec![vec![1, 0, 2, 1], vec![0, 1, 1, 0], vec![0, 0, 1, 2]];
        let mut idx = enumerate_span_indices(&f, &rows);
        assert_eq!(idx.len(), 13); // (3^3 - 1) / 2
        idx.sort_unstable();
        idx.dedup();
        assert_eq!(idx.len(), 13);
    }

    fn frame(field: &Arc<FiniteField>, ndim: u32) -> SubspaceSet {
        let w = ndim as usize + 1;
        let mut coords: Vec<Vec<GFElem>> = (0..w)
            .map(|i| (0..w).map(|j| u32::from(i == j)).collect())
            .collect();
        coords.push(vec![1; w]);
        SubspaceSet::from_points(field.clone(), ndim + 1, &coords).unwrap()
    }

    #[test]
    fn quotient_of_a_frame_is_a_frame() {
        let f = gf(2, 1);
        let big = frame(&f, 4);
        let out = quotient(&big, 4).unwrap();
        assert_eq!(out.set.len(), 5);
        assert_eq!(out.image_dims, vec![0; 5]);
        let expected = frame(&f, 3);
        let mut got: Vec<_> = out.set.elements().to_vec();
        let mut want: Vec<_> = expected.elements().to_vec();
        got.sort_by(|a, b| a.gens().cmp(b.gens()));
        want.sort_by(|a, b| a.gens().cmp(b.gens()));
        assert_eq!(got, want);
        // Quotient at a different element gives the same multiset here.
        let other = quotient(&big, 0).unwrap();
        let mut got2: Vec<_> = other.set.elements().to_vec();
        got2.sort_by(|a, b| a.gens().cmp(b.gens()));
        assert_eq!(got2, want);
    }

    #[test]
    fn quotient_rejects_bad_inputs() {
        let f = gf(2, 1);
        let spreadlike = SubspaceSet::new(
            f.clone(),
            2,
            2,
            vec![Subspace::canonicalize(&f, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap()],
        )
        .unwrap();
        assert!(matches!(quotient(&spreadlike, 0), Err(Error::QuotientNeedsK3(2))));
        let fr = frame(&f, 2);
        assert!(matches!(quotient(&fr, 9), Err(Error::IndexOutOfRange { .. })));
        // A repeated element collapses.
        let rep = SubspaceSet::from_points(f.clone(), 3, &[vec![0, 0, 1], vec![0, 0, 1]]).unwrap();
        assert!(matches!(quotient(&rep, 0), Err(Error::QuotientCollapse { index: 1 })));
    }

    #[test]
    fn subspace_set_validates_shape() {
        let f = gf(2, 1);
        let line = Subspace::canonicalize(&f, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        // A line is too big for h = 1.
        assert!(matches!(
            SubspaceSet::new(f.clone(), 4, 1, vec![line.clone()]),
            Err(Error::DeficientElement { .. })
        ));
        // Wrong ambient.
        let pt = Subspace::canonicalize(&f, &[vec![1, 0, 0]]).unwrap();
        assert!(matches!(
            SubspaceSet::new(f.clone(), 2, 2, vec![pt]),
            Err(Error::AmbientMismatch(..))
        ));
        assert!(SubspaceSet::new(f, 2, 2, vec![line]).is_ok());
    }
}
