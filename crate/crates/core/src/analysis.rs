//! Brute-force ground truth: hyperplane intersection spectra, length-maximal
//! verification, and zero-secant counting through skew subspaces.
//!
//! Everything here is exact enumeration. The fast spectrum path walks, for
//! each element, the dual flat of hyperplanes containing it; the slow path
//! tests every (hyperplane, element) pair and exists as an independent oracle
//! for the fast one.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::geometry::{
    dot, for_each_span_vector, incidence, num_points, point_index, skew, Hyperplane, Subspace,
    SubspaceSet,
};
use crate::gf::FiniteField;
use crate::{Error, Result};

/// Default cap on the number of hyperplanes a spectrum run may enumerate.
pub const DEFAULT_HYPERPLANE_BUDGET: u64 = 1 << 24;
/// The slow path exists as an oracle; keep it at oracle scale.
const SLOW_PATH_LIMIT: u64 = 1 << 16;
/// Cap on (k−1)-subset span checks before sampling kicks in.
pub const DEFAULT_SPAN_BUDGET: u64 = 10_000_000;

/// Exact histogram s ↦ N_s of hyperplanes by the number of set elements they
/// contain (with multiplicity). Every hyperplane is counted, so N_0 is
/// present whenever some hyperplane misses the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    counts: BTreeMap<u32, u64>,
    hyperplanes: u64,
}

impl Spectrum {
    /// N_s.
    pub fn get(&self, s: u32) -> u64 {
        self.counts.get(&s).copied().unwrap_or(0)
    }
    /// Secant sizes with N_s > 0, ascending.
    pub fn support(&self) -> Vec<u32> {
        self.counts.iter().filter(|(_, &n)| n > 0).map(|(&s, _)| s).collect()
    }
    /// Largest s with N_s > 0 (0 for an empty space-less set).
    pub fn max_secant(&self) -> u32 {
        self.counts.iter().rev().find(|(_, &n)| n > 0).map(|(&s, _)| s).unwrap_or(0)
    }
    /// Total number of hyperplanes = Σ N_s.
    pub fn hyperplanes(&self) -> u64 {
        self.hyperplanes
    }
    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }
    /// Σ s·N_s, the number of incident (hyperplane, element) pairs.
    pub fn incidence_mass(&self) -> u64 {
        self.counts.iter().map(|(&s, &n)| s as u64 * n).sum()
    }

    pub fn from_counts(counts: BTreeMap<u32, u64>) -> Spectrum {
        let hyperplanes = counts.values().sum();
        Spectrum { counts, hyperplanes }
    }
}

fn accumulate_element(f: &FiniteField, el: &Subspace, acc: &mut [u32]) {
    let basis = el.dual_flat_basis(f);
    for_each_span_vector(f, &basis, |v| acc[point_index(f, v) as usize] += 1);
}

fn histogram(counters: &[u32]) -> Spectrum {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for &c in counters {
        *counts.entry(c).or_insert(0) += 1;
    }
    Spectrum { counts, hyperplanes: counters.len() as u64 }
}

/// Exact intersection spectrum via per-element dual-flat enumeration:
/// O(|X| · q^{(k−1)h}) counter increments over a dense array indexed by
/// hyperplane. Parallel over elements; the merge is plain addition, so the
/// result is independent of the worker count.
pub fn spectrum(x: &SubspaceSet) -> Result<Spectrum> {
    spectrum_with_budget(x, DEFAULT_HYPERPLANE_BUDGET)
}

pub fn spectrum_with_budget(x: &SubspaceSet, budget: u64) -> Result<Spectrum> {
    let f = x.field().as_ref();
    let hcount = num_points(f.q() as u64, x.ambient_dim())?;
    if hcount > budget {
        return Err(Error::BudgetExceeded {
            what: "hyperplane enumeration for the spectrum",
            needed: hcount as u128,
            budget: budget as u128,
        });
    }
    let counters: Vec<u32> = if x.len() >= 8 && hcount >= (1 << 14) {
        x.elements()
            .par_iter()
            .fold(
                || vec![0u32; hcount as usize],
                |mut acc, el| {
                    accumulate_element(f, el, &mut acc);
                    acc
                },
            )
            .reduce(
                || vec![0u32; hcount as usize],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    } else {
        let mut acc = vec![0u32; hcount as usize];
        for el in x.elements() {
            accumulate_element(f, el, &mut acc);
        }
        acc
    };
    Ok(histogram(&counters))
}

/// Independent oracle: tests every (hyperplane, element) pair directly.
pub fn spectrum_slow(x: &SubspaceSet) -> Result<Spectrum> {
    let f = x.field().as_ref();
    let n = x.ambient_dim();
    let hcount = num_points(f.q() as u64, n)?;
    if hcount > SLOW_PATH_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "exhaustive hyperplane-by-element sweep",
            needed: hcount as u128,
            budget: SLOW_PATH_LIMIT as u128,
        });
    }
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for idx in 0..hcount {
        let hyp = Hyperplane::from_index(f, n, idx)?;
        let mut s = 0u32;
        for el in x.elements() {
            if incidence(f, el, &hyp)? {
                s += 1;
            }
        }
        *counts.entry(s).or_insert(0) += 1;
    }
    Ok(Spectrum { counts, hyperplanes: hcount })
}

/// Verdict on whether a set attains the size bound (t−k+2)q^h + t for a
/// given secant cap t, with the two equality characterizations checked when
/// the bound is attained: every (k−1)-subset spans a ((k−1)h−1)-flat, and
/// every secant size lies in {0, …, k−3} ∪ {t}.
#[derive(Debug, Clone)]
pub struct MaximalityReport {
    /// The supplied secant cap.
    pub t: u32,
    /// Largest observed secant size.
    pub t_observed: u32,
    /// (t−k+2)·q^h + t, exact (negative when t is degenerately small).
    pub bound: i128,
    pub size: u64,
    /// size = bound and no hyperplane exceeds t.
    pub is_length_maximal: bool,
    /// Target span dimension (k−1)h − 1 for (k−1)-subsets.
    pub span_target: u32,
    /// Worst observed shortfall from the target over checked subsets.
    pub worst_span_deficiency: u32,
    /// How many (k−1)-subsets were span-checked.
    pub span_checked: u64,
    /// False when the subset sweep was cut off by the budget.
    pub span_exhaustive: bool,
    /// Secant sizes present in the spectrum but outside {0,…,k−3} ∪ {t}.
    pub secant_violations: Vec<u32>,
    pub spectrum: Spectrum,
}

impl MaximalityReport {
    /// Both equality characterizations hold as verified.
    pub fn equality_conditions_hold(&self) -> bool {
        self.worst_span_deficiency == 0 && self.span_exhaustive && self.secant_violations.is_empty()
    }
}

/// The size bound (t−k+2)·q^h + t as an exact integer.
fn size_bound(q: u64, h: u32, k: u32, t: u32) -> i128 {
    let qh = (q as i128).pow(h);
    (t as i128 - k as i128 + 2) * qh + t as i128
}

pub fn verify_length_maximal(x: &SubspaceSet, t: u32) -> Result<MaximalityReport> {
    verify_length_maximal_with_budgets(x, t, DEFAULT_HYPERPLANE_BUDGET, DEFAULT_SPAN_BUDGET)
}

pub fn verify_length_maximal_with_budgets(
    x: &SubspaceSet,
    t: u32,
    hyperplane_budget: u64,
    span_budget: u64,
) -> Result<MaximalityReport> {
    if t == 0 {
        return Err(Error::Unsupported("the secant cap t must be at least 1".into()));
    }
    let f = x.field().as_ref();
    let (k, h) = (x.k(), x.h());
    let sp = spectrum_with_budget(x, hyperplane_budget)?;
    let t_observed = sp.max_secant();
    let bound = size_bound(f.q() as u64, h, k, t);
    let size = x.len() as u64;
    let is_length_maximal = (size as i128) == bound && t_observed <= t;

    let allowed = |s: u32| s == t || (k >= 3 && s <= k - 3);
    let secant_violations: Vec<u32> = sp.support().into_iter().filter(|&s| !allowed(s)).collect();

    let span_target = (k - 1) * h - 1;
    let mut worst_span_deficiency = 0u32;
    let mut span_checked = 0u64;
    let mut span_exhaustive = true;
    if is_length_maximal && k >= 2 {
        let r = (k - 1) as usize;
        if x.len() >= r {
            let mut idx: Vec<usize> = (0..r).collect();
            loop {
                if span_checked == span_budget {
                    span_exhaustive = false;
                    break;
                }
                let subset: Vec<&Subspace> = idx.iter().map(|&i| &x.elements()[i]).collect();
                let d = crate::geometry::span_dim(f, &subset)?;
                worst_span_deficiency = worst_span_deficiency.max(span_target.saturating_sub(d));
                span_checked += 1;
                // Advance the lexicographic combination odometer.
                let n = x.len();
                let Some(pos) = (0..r).rev().find(|&i| idx[i] < n - r + i) else { break };
                idx[pos] += 1;
                for i in pos + 1..r {
                    idx[i] = idx[i - 1] + 1;
                }
            }
        }
    }

    Ok(MaximalityReport {
        t,
        t_observed,
        bound,
        size,
        is_length_maximal,
        span_target,
        worst_span_deficiency,
        span_checked,
        span_exhaustive,
        secant_violations,
        spectrum: sp,
    })
}

/// Secant tallies over the hyperplanes containing a fixed subspace skew to
/// the whole set: `zero` is the number of such hyperplanes meeting the set in
/// nothing, `tallies` the full histogram (so `tallies[t]` is the t-secant
/// count through the subspace when the set is two-weight).
#[derive(Debug, Clone)]
pub struct SkewSecantCounts {
    pub zero: u64,
    /// Total hyperplanes through the subspace.
    pub through: u64,
    pub tallies: BTreeMap<u32, u64>,
}

pub fn count_zero_secants_through(x: &SubspaceSet, pi: &Subspace) -> Result<SkewSecantCounts> {
    let f = x.field().as_ref();
    if pi.ambient_dim() != x.ambient_dim() {
        return Err(Error::AmbientMismatch(x.ambient_dim() as usize, pi.ambient_dim() as usize));
    }
    for (i, el) in x.elements().iter().enumerate() {
        if !skew(f, pi, el)? {
            return Err(Error::NotSkew { index: i });
        }
    }
    let basis = pi.dual_flat_basis(f);
    let mut tallies: BTreeMap<u32, u64> = BTreeMap::new();
    let mut through = 0u64;
    for_each_span_vector(f, &basis, |v| {
        let s = x
            .elements()
            .iter()
            .filter(|el| el.gens().iter().all(|row| dot(f, row, v) == 0))
            .count() as u32;
        *tallies.entry(s).or_insert(0) += 1;
        through += 1;
    });
    Ok(SkewSecantCounts { zero: tallies.get(&0).copied().unwrap_or(0), through, tallies })
}

/// Whether the spectrum support is contained in {0, t}: equivalently the
/// associated additive code has nonzero weights only n and n−t.
pub fn two_weight_check(x: &SubspaceSet, t: u32) -> Result<bool> {
    let sp = spectrum(x)?;
    Ok(sp.support().into_iter().all(|s| s == 0 || s == t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GFElem;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn gf(p: u32, m: u32) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, m).unwrap())
    }

    /// Conic plus nucleus in PG(2, q), q even: {(1, s, s²)} ∪ {(0,1,0), (0,0,1)}.
    fn hyperoval(f: &Arc<FiniteField>) -> SubspaceSet {
        let mut coords: Vec<Vec<GFElem>> =
            f.elements().map(|s| vec![1, s, f.mul(s, s)]).collect();
        coords.push(vec![0, 1, 0]);
        coords.push(vec![0, 0, 1]);
        SubspaceSet::from_points(f.clone(), 3, &coords).unwrap()
    }

    fn frame(field: &Arc<FiniteField>, ndim: u32) -> SubspaceSet {
        let w = ndim as usize + 1;
        let mut coords: Vec<Vec<GFElem>> =
            (0..w).map(|i| (0..w).map(|j| u32::from(i == j)).collect()).collect();
        coords.push(vec![1; w]);
        SubspaceSet::from_points(field.clone(), ndim + 1, &coords).unwrap()
    }

    fn spectrum_map(pairs: &[(u32, u64)]) -> BTreeMap<u32, u64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn hyperoval_spectra_over_small_even_fields() {
        let cases = [
            (2u32, 1u32, vec![(0u32, 1u64), (2, 6)]),
            (2, 2, vec![(0, 6), (2, 15)]),
            (2, 3, vec![(0, 28), (2, 45)]),
        ];
        for (p, m, expect) in cases {
            let f = gf(p, m);
            let x = hyperoval(&f);
            let sp = spectrum(&x).unwrap();
            assert_eq!(sp.counts(), &spectrum_map(&expect));
            assert_eq!(sp.hyperplanes(), num_points(f.q() as u64, 2).unwrap());
        }
    }

    #[test]
    fn frame_spectra_over_gf2() {
        let f = gf(2, 1);
        let sp3 = spectrum(&frame(&f, 3)).unwrap();
        assert_eq!(sp3.counts(), &spectrum_map(&[(1, 5), (3, 10)]));
        let sp4 = spectrum(&frame(&f, 4)).unwrap();
        assert_eq!(sp4.counts(), &spectrum_map(&[(0, 1), (2, 15), (4, 15)]));
        // Incidence double count: 6 points, 15 hyperplanes through each.
        assert_eq!(sp4.incidence_mass(), 6 * 15);
    }

    #[test]
    fn fast_path_agrees_with_slow_path_on_fixtures() {
        let f4 = gf(2, 2);
        let x = hyperoval(&f4);
        assert_eq!(spectrum(&x).unwrap(), spectrum_slow(&x).unwrap());
        let f2 = gf(2, 1);
        let fr = frame(&f2, 4);
        assert_eq!(spectrum(&fr).unwrap(), spectrum_slow(&fr).unwrap());
    }

    proptest! {
        #[test]
        fn fast_path_agrees_with_slow_path_on_random_multisets(seed in 0u64..300) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for (p, m, k) in [(2u32, 1u32, 4u32), (3, 1, 3), (2, 2, 3)] {
                let f = gf(p, m);
                let npts = num_points(f.q() as u64, k - 1).unwrap();
                let size = rng.gen_range(1..8usize);
                // With replacement: multiplicities must count.
                let coords: Vec<Vec<GFElem>> = (0..size)
                    .map(|_| {
                        let i = rng.gen_range(0..npts);
                        crate::geometry::Point::from_index(&f, k - 1, i).unwrap().coords().to_vec()
                    })
                    .collect();
                let x = SubspaceSet::from_points(f.clone(), k, &coords).unwrap();
                let fast = spectrum(&x).unwrap();
                let slow = spectrum_slow(&x).unwrap();
                prop_assert_eq!(&fast, &slow);
                // Mass identities for full (here: point) elements.
                prop_assert_eq!(fast.hyperplanes(), num_points(f.q() as u64, k - 1).unwrap());
                let through_one = num_points(f.q() as u64, k - 2).unwrap();
                prop_assert_eq!(fast.incidence_mass(), size as u64 * through_one);
            }
        }
    }

    #[test]
    fn maximality_verdicts() {
        let f4 = gf(2, 2);
        let x = hyperoval(&f4);
        let rep = verify_length_maximal(&x, 2).unwrap();
        assert!(rep.is_length_maximal);
        assert!(rep.equality_conditions_hold());
        assert_eq!(rep.bound, 6);
        assert_eq!(rep.t_observed, 2);
        assert_eq!(rep.span_checked, 15); // C(6,2) pairs of points must span a plane

        // Deleting a point breaks the bound but not the cap.
        let smaller = SubspaceSet::new(
            f4.clone(),
            3,
            1,
            x.elements()[..5].to_vec(),
        )
        .unwrap();
        let rep = verify_length_maximal(&smaller, 2).unwrap();
        assert!(!rep.is_length_maximal);
        assert_eq!(rep.size, 5);

        // The 6-point frame of PG(4,2) attains the k=5, t=4 bound, with
        // small secants allowed up to k−3 = 2.
        let f2 = gf(2, 1);
        let rep = verify_length_maximal(&frame(&f2, 4), 4).unwrap();
        assert!(rep.is_length_maximal);
        assert!(rep.equality_conditions_hold());
        assert_eq!(rep.spectrum.support(), vec![0, 2, 4]);

        // The PG(3,2) frame for k=4, t=3: support {1, 3} with k−3 = 1.
        let rep = verify_length_maximal(&frame(&f2, 3), 3).unwrap();
        assert!(rep.is_length_maximal);
        assert!(rep.equality_conditions_hold());
    }

    #[test]
    fn zero_secants_through_an_external_point() {
        let f4 = gf(2, 2);
        let x = hyperoval(&f4);
        // (1, 0, 1) is off the arc: 1 ≠ 0².
        let pt = Subspace::canonicalize(&f4, &[vec![1, 0, 1]]).unwrap();
        let counts = count_zero_secants_through(&x, &pt).unwrap();
        assert_eq!(counts.zero, 2);
        assert_eq!(counts.through, 5);
        assert_eq!(counts.tallies, spectrum_map(&[(0, 2), (2, 3)]));

        // A point of the arc is not skew.
        let on = Subspace::canonicalize(&f4, &[vec![1, 0, 0]]).unwrap();
        assert!(matches!(count_zero_secants_through(&x, &on), Err(Error::NotSkew { .. })));
    }

    #[test]
    fn two_weight_support_checks() {
        let f4 = gf(2, 2);
        assert!(two_weight_check(&hyperoval(&f4), 2).unwrap());
        let f2 = gf(2, 1);
        assert!(!two_weight_check(&frame(&f2, 3), 3).unwrap());
        assert!(!two_weight_check(&frame(&f2, 4), 4).unwrap());
    }
}
