//! Deterministic generators of classical flat sets: spreads, hyperovals,
//! Denniston maximal arcs, elliptic-quadric ovoids, frames, and affine
//! point sets.
//!
//! These objects are the ground truth the rest of the library is tested
//! against, so every generator re-derives its own spectrum and checks it
//! against the closed-form counts before returning. A failed self-check is
//! a hard error, never a silent one.

use std::sync::Arc;

use crate::analysis::{spectrum, Spectrum};
use crate::codes::reduce_full_projective_line;
use crate::formulas::{predicted_secants, ParameterSet};
use crate::geometry::{span_dim, Subspace, SubspaceSet};
use crate::gf::{prime_power_parts, FiniteField, GFElem, SubfieldEmbedding};
use crate::{Error, Result};

/// Which classical family a generated set belongs to, at which parameters,
/// with a short note on the recipe used.
#[derive(Debug, Clone)]
pub struct ConstructionDescriptor {
    pub name: &'static str,
    pub q: u64,
    pub h: u32,
    pub k: u32,
    /// The secant cap the set is declared (and verified) to attain.
    pub t: u64,
    pub note: String,
}

/// A generated set together with its descriptor.
#[derive(Debug, Clone)]
pub struct Construction {
    pub descriptor: ConstructionDescriptor,
    pub set: SubspaceSet,
}

fn field_for(q: u64) -> Result<(Arc<FiniteField>, u32, u32)> {
    let (p, m) = prime_power_parts(q).ok_or(Error::NotPrime(q))?;
    if p > u32::MAX as u64 {
        return Err(Error::FieldTooLarge(q as u128));
    }
    Ok((Arc::new(FiniteField::new(p as u32, m)?), p as u32, m))
}

fn check(name: &str, cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::SelfCheckFailed(format!("{name}: {}", msg())))
    }
}

/// Spectrum support must lie inside `allowed`, and each count named in
/// `exact` must match the closed-form prediction exactly.
fn check_spectrum(
    name: &str,
    sp: &Spectrum,
    allowed: &[u32],
    ps: &ParameterSet,
    exact: &[u64],
) -> Result<()> {
    let support = sp.support();
    check(name, support.iter().all(|s| allowed.contains(s)), || {
        format!("spectrum support {support:?} escapes the allowed set {allowed:?}")
    })?;
    for &s in exact {
        let want = predicted_secants(ps, s)?;
        check(name, want.is_integer(), || {
            format!("the closed-form {s}-secant count {want} is not an integer")
        })?;
        let got = sp.get(s as u32);
        check(name, want.to_integer() == got.into(), || {
            format!("{s}-secant count is {got}, closed form predicts {want}")
        })?;
    }
    Ok(())
}

/// The Desarguesian spread of PG(2h−1, q): the q^h + 1 points of the
/// projective line over GF(q^h), seen as (h−1)-flats over GF(q). Every
/// hyperplane contains exactly one of them (k = 2, t = 1).
pub fn desarguesian_spread(q: u64, h: u32) -> Result<Construction> {
    if h < 2 {
        return Err(Error::Unsupported(
            "a spread of PG(2h-1, q) into (h-1)-flats needs h >= 2".into(),
        ));
    }
    let (small, p, m) = field_for(q)?;
    let mh = m.checked_mul(h).ok_or(Error::FieldTooLarge(u128::MAX))?;
    let big = Arc::new(FiniteField::new(p, mh)?);
    let basis = SubfieldEmbedding::default_basis(&big, h);
    let embedding = SubfieldEmbedding::new(big, small, &basis)?;
    let set = reduce_full_projective_line(&embedding)?;

    let name = "spread";
    let qh = (q as u128).pow(h);
    check(name, set.len() as u128 == qh + 1, || {
        format!("expected q^h+1 = {} flats, built {}", qh + 1, set.len())
    })?;
    let sp = spectrum(&set)?;
    check(name, sp.support() == vec![1], || {
        format!("spectrum support {:?}, expected every hyperplane to be a 1-secant", sp.support())
    })?;
    Ok(Construction {
        descriptor: ConstructionDescriptor {
            name,
            q,
            h,
            k: 2,
            t: 1,
            note: format!("field reduction of the projective line over GF({qh})"),
        },
        set,
    })
}

/// A hyperoval of PG(2, q), q even: the conic (1, s, s²) plus its nucleus
/// (0, 1, 0) and the point (0, 0, 1). Every line is a 0- or 2-secant.
pub fn hyperoval(q: u64) -> Result<Construction> {
    let (f, p, m) = field_for(q)?;
    if p != 2 {
        return Err(Error::Unsupported(format!("a hyperoval needs even q, got q = {q}")));
    }
    let mut coords: Vec<Vec<GFElem>> = f.elements().map(|s| vec![1, s, f.mul(s, s)]).collect();
    coords.push(vec![0, 1, 0]);
    coords.push(vec![0, 0, 1]);
    let set = SubspaceSet::from_points(f, 3, &coords)?;

    let name = "hyperoval";
    check(name, set.len() as u64 == q + 2, || {
        format!("expected q+2 = {} points, built {}", q + 2, set.len())
    })?;
    let ps = ParameterSet::new(p, m, 1, 3, 2)?;
    check_spectrum(name, &spectrum(&set)?, &[0, 2], &ps, &[0, 2])?;
    Ok(Construction {
        descriptor: ConstructionDescriptor {
            name,
            q,
            h: 1,
            k: 3,
            t: 2,
            note: "conic plus nucleus".into(),
        },
        set,
    })
}

/// Smallest field element a (by encoding) such that z² + z + a has no root
/// — i.e. −a misses the image of z ↦ z² + z — making x² + xy + ay²
/// anisotropic. Exists over every finite field: the image has at most
/// ⌈q/2⌉ + [q odd] elements.
fn anisotropic_coefficient(f: &FiniteField) -> GFElem {
    let mut image = vec![false; f.q() as usize];
    for z in f.elements() {
        image[f.add(f.mul(z, z), z) as usize] = true;
    }
    (0..f.q()).find(|&a| !image[f.neg(a) as usize]).expect("z^2+z is never surjective")
}

/// A Denniston maximal arc of PG(2, q): q even, t a nontrivial divisor of
/// q. Points (1, x, y) with x² + xy + ay² in a fixed additive subgroup of
/// order t (the GF(2)-span of the first log₂ t basis monomials), a chosen
/// deterministically so the form is anisotropic. (t−1)q + t points, every
/// line a 0- or t-secant.
pub fn denniston_arc(q: u64, t: u64) -> Result<Construction> {
    let (f, p, m) = field_for(q)?;
    if p != 2 {
        return Err(Error::Unsupported(format!("Denniston arcs need even q, got q = {q}")));
    }
    if t < 2 || t >= q || !q.is_multiple_of(t) {
        return Err(Error::Unsupported(format!(
            "t = {t} is not a nontrivial divisor of q = {q}"
        )));
    }
    let a = anisotropic_coefficient(&f);
    let mut coords = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            let v = f.add(f.add(f.mul(x, x), f.mul(x, y)), f.mul(a, f.mul(y, y)));
            if (v as u64) < t {
                coords.push(vec![1, x, y]);
            }
        }
    }
    let set = SubspaceSet::from_points(f, 3, &coords)?;

    let name = "denniston";
    check(name, set.len() as u64 == (t - 1) * q + t, || {
        format!("expected (t-1)q+t = {} points, built {}", (t - 1) * q + t, set.len())
    })?;
    let ps = ParameterSet::new(p, m, 1, 3, t)?;
    check_spectrum(name, &spectrum(&set)?, &[0, t as u32], &ps, &[0, t])?;
    Ok(Construction {
        descriptor: ConstructionDescriptor {
            name,
            q,
            h: 1,
            k: 3,
            t,
            note: format!(
                "Denniston maximal arc: anisotropic form x^2+xy+{a}y^2, additive subgroup of order {t}"
            ),
        },
        set,
    })
}

/// An elliptic-quadric ovoid of PG(3, q): the zeros of x₀x₃ + Q(x₁, x₂)
/// with Q anisotropic. q² + 1 points, every plane a 1- or (q+1)-secant.
pub fn ovoid(q: u64) -> Result<Construction> {
    let (f, p, m) = field_for(q)?;
    let a = anisotropic_coefficient(&f);
    let mut coords = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            let v = f.add(f.add(f.mul(x, x), f.mul(x, y)), f.mul(a, f.mul(y, y)));
            coords.push(vec![1, x, y, f.neg(v)]);
        }
    }
    coords.push(vec![0, 0, 0, 1]);
    let set = SubspaceSet::from_points(f, 4, &coords)?;

    let name = "ovoid";
    check(name, set.len() as u64 == q * q + 1, || {
        format!("expected q^2+1 = {} points, built {}", q * q + 1, set.len())
    })?;
    let t = q + 1;
    let ps = ParameterSet::new(p, m, 1, 4, t)?;
    check_spectrum(name, &spectrum(&set)?, &[1, t as u32], &ps, &[1, t])?;
    Ok(Construction {
        descriptor: ConstructionDescriptor {
            name,
            q,
            h: 1,
            k: 4,
            t,
            note: format!("elliptic quadric: zeros of x0*x3 + x1^2 + x1*x2 + {a}*x2^2"),
        },
        set,
    })
}

/// The projective system of the dual ternary Golay code: 11 points in
/// PG(4, 3) meeting every hyperplane in exactly 2 or 5 points. This is the
/// one k = 5 parameter set over a field of more than two elements where the
/// secant-count excess vanishes (q^h = 3), and the set attains the bound
/// n = 2q + 5 = 11 at t = q + 2. The coordinates are the lexicographically
/// least witness produced by an exhaustive search.
pub fn ternary_golay() -> Result<Construction> {
    let f = Arc::new(FiniteField::new(3, 1)?);
    let coords: Vec<Vec<GFElem>> = vec![
        vec![0, 0, 0, 0, 1],
        vec![0, 0, 0, 1, 0],
        vec![0, 0, 1, 0, 0],
        vec![0, 1, 0, 0, 0],
        vec![0, 1, 1, 1, 1],
        vec![1, 0, 0, 0, 0],
        vec![1, 0, 1, 1, 2],
        vec![1, 1, 0, 2, 1],
        vec![1, 1, 2, 0, 2],
        vec![1, 2, 1, 2, 0],
        vec![1, 2, 2, 1, 1],
    ];
    let set = SubspaceSet::from_points(f, 5, &coords)?;

    let name = "ternary_golay";
    let t = 5;
    let ps = ParameterSet::new(3, 1, 1, 5, t)?;
    // The vanishing excess forces every hyperplane to be a 2- or 5-secant,
    // with counts given by the closed forms (55 and 66).
    check_spectrum(name, &spectrum(&set)?, &[2, t as u32], &ps, &[2, t])?;
    Ok(Construction {
        descriptor: ConstructionDescriptor {
            name,
            q: 3,
            h: 1,
            k: 5,
            t,
            note: "the 11 points of the dual ternary Golay code [11,5,6]_3".into(),
        },
        set,
    })
}

/// The projective system of the extended ternary Golay code: 12 points in
/// PG(5, 3) whose hyperplane sections have sizes 0, 3, and 6 only. Attains
/// the k = 6 bound n = 2q + 6 = 12 at t = q + 3; quotienting at any point
/// recovers the 11-point dual-Golay set. Like that set, the coordinates are
/// the lexicographically least witness produced by an exhaustive search.
pub fn extended_ternary_golay() -> Result<Construction> {
    let f = Arc::new(FiniteField::new(3, 1)?);
    let coords: Vec<Vec<GFElem>> = vec![
        vec![0, 0, 0, 0, 0, 1],
        vec![0, 0, 0, 0, 1, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![0, 0, 1, 0, 0, 0],
        vec![0, 1, 0, 0, 0, 0],
        vec![0, 1, 1, 1, 1, 1],
        vec![1, 0, 0, 0, 0, 0],
        vec![1, 0, 1, 1, 2, 2],
        vec![1, 1, 0, 2, 1, 2],
        vec![1, 1, 2, 0, 2, 1],
        vec![1, 2, 1, 2, 0, 1],
        vec![1, 2, 2, 1, 1, 0],
    ];
    let set = SubspaceSet::from_points(f, 6, &coords)?;

    let name = "extended_ternary_golay";
    let t = 6;
    // No closed form pins these counts (the k = 5 forms stop at five
    // dimensions), so the full spectrum is checked directly.
    let sp = spectrum(&set)?;
    let got: Vec<(u32, u64)> = sp.counts().iter().map(|(&s, &c)| (s, c)).collect();
    check(name, got == vec![(0, 12), (3, 220), (6, 132)], || {
        format!("hyperplane section sizes {got:?} differ from the expected (0,12) (3,220) (6,132)")
    })?;
    Ok(Construction {
        descriptor: ConstructionDescriptor {
            name,
            q: 3,
            h: 1,
            k: 6,
            t,
            note: "the 12 points of the self-dual extended ternary Golay code [12,6,6]_3".into(),
        },
        set,
    })
}

/// The frame of PG(n_dim, 2): the n_dim + 1 unit points plus the all-ones
/// point — n_dim + 2 points in general position.
pub fn frame(n_dim: u32) -> Result<Construction> {
    if n_dim < 1 {
        return Err(Error::Unsupported("a frame needs ambient dimension at least 1".into()));
    }
    let f = Arc::new(FiniteField::new(2, 1)?);
    let w = (n_dim + 1) as usize;
    let mut coords: Vec<Vec<GFElem>> = (0..w)
        .map(|i| {
            let mut v = vec![0; w];
            v[i] = 1;
            v
        })
        .collect();
    coords.push(vec![1; w]);
    let set = SubspaceSet::from_points(f.clone(), n_dim + 1, &coords)?;

    let name = "frame";
    // General position: dropping any one point leaves a spanning set.
    let as_subs: Vec<Subspace> = set.elements().to_vec();
    for omit in 0..as_subs.len() {
        let rest: Vec<&Subspace> =
            as_subs.iter().enumerate().filter(|(i, _)| *i != omit).map(|(_, s)| s).collect();
        check(name, span_dim(&f, &rest)? == n_dim, || {
            format!("points other than #{omit} fail to span PG({n_dim}, 2)")
        })?;
    }
    Ok(Construction {
        descriptor: ConstructionDescriptor {
            name,
            q: 2,
            h: 1,
            k: n_dim + 1,
            t: n_dim as u64,
            note: "unit points plus the all-ones point".into(),
        },
        set,
    })
}

/// The q² points of PG(2, q) off the line x₀ = 0. Every other line is a
/// q-secant, so this attains the k = 3 bound at t = q.
pub fn affine_arc(q: u64) -> Result<Construction> {
    let (f, p, m) = field_for(q)?;
    let mut coords = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            coords.push(vec![1, x, y]);
        }
    }
    let set = SubspaceSet::from_points(f, 3, &coords)?;

    let name = "affine_arc";
    check(name, set.len() as u64 == q * q, || {
        format!("expected q^2 = {} points, built {}", q * q, set.len())
    })?;
    let ps = ParameterSet::new(p, m, 1, 3, q)?;
    check_spectrum(name, &spectrum(&set)?, &[0, q as u32], &ps, &[0, q])?;
    Ok(Construction {
        descriptor: ConstructionDescriptor {
            name,
            q,
            h: 1,
            k: 3,
            t: q,
            note: "complement of a line".into(),
        },
        set,
    })
}

/// Verification report for a loaded 21-line configuration in PG(5, 3).
#[derive(Debug, Clone)]
pub struct MathonReport {
    pub set: SubspaceSet,
    pub spectrum: Spectrum,
    pub t: u64,
    /// The labeling discrepancy this loader refuses to paper over.
    pub label_note: String,
}

/// Verify a 21-line configuration in PG(5, 3) loaded from a set file
/// (Mathon's example; no generator is shipped because the construction is
/// not determined by its parameters). Requires h = 2: lines of PG(5, 3)
/// have projective dimension 1, even though the configuration is commonly
/// catalogued as a plane maximal-arc analogue with h = 1.
pub fn load_mathon(set: SubspaceSet) -> Result<MathonReport> {
    if set.h() != 2 {
        return Err(Error::Unsupported(format!(
            "the 21-line configuration consists of lines, which are (h-1)-flats with h = 2; \
             got h = {}",
            set.h()
        )));
    }
    let name = "mathon";
    let f = set.field();
    check(name, f.q() == 3, || format!("ambient field is GF({}), expected GF(3)", f.q()))?;
    check(name, set.k() == 3, || format!("k = {}, expected 3 (ambient PG(5, 3))", set.k()))?;
    check(name, set.len() == 21, || format!("{} lines, expected 21", set.len()))?;
    let sp = spectrum(&set)?;
    check(name, sp.support() == vec![0, 3], || {
        format!("spectrum support {:?}, expected exactly {{0, 3}}", sp.support())
    })?;
    Ok(MathonReport {
        set,
        spectrum: sp,
        t: 3,
        label_note: "commonly catalogued with h = 1 as a maximal-arc analogue; its 21 lines in \
                     PG(5, 3) force h = 2, k = 3 under the (h-1)-flats-in-PG(kh-1, q) \
                     convention used here. The discrepancy is recorded, not resolved."
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::verify_length_maximal;
    use crate::codes::field_reduce;
    use crate::geometry::Point;

    fn counts(sp: &Spectrum) -> Vec<(u32, u64)> {
        sp.counts().iter().map(|(&s, &n)| (s, n)).collect()
    }

    #[test]
    fn spreads_partition_the_space() {
        let c = desarguesian_spread(2, 2).unwrap();
        assert_eq!(c.set.len(), 5);
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(1, 15)]);
        // 5 disjoint lines x 3 points = all 15 points of PG(3,2).
        let mut seen = std::collections::BTreeSet::new();
        for e in c.set.elements() {
            for idx in crate::geometry::enumerate_span_indices(c.set.field(), e.gens()) {
                assert!(seen.insert(idx));
            }
        }
        assert_eq!(seen.len(), 15);

        let c = desarguesian_spread(3, 2).unwrap();
        assert_eq!(c.set.len(), 10);
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(1, 40)]);

        assert!(desarguesian_spread(2, 1).is_err());
    }

    #[test]
    fn hyperoval_spectra() {
        for (q, n0, n2) in [(2u64, 1u64, 6u64), (4, 6, 15), (8, 28, 45)] {
            let c = hyperoval(q).unwrap();
            assert_eq!(c.set.len() as u64, q + 2);
            assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(0, n0), (2, n2)]);
        }
        assert!(matches!(hyperoval(3), Err(Error::Unsupported(_))));
        assert!(matches!(hyperoval(6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn smallest_hyperoval_is_the_plane_frame() {
        let a = hyperoval(2).unwrap();
        let b = frame(2).unwrap();
        let idx = |s: &SubspaceSet| {
            let mut v: Vec<u64> = s
                .elements()
                .iter()
                .map(|e| Point::from_coords(s.field(), &e.gens()[0]).unwrap().index())
                .collect();
            v.sort();
            v
        };
        assert_eq!(idx(&a.set), idx(&b.set));
    }

    #[test]
    fn denniston_arcs_have_two_line_sizes() {
        let c = denniston_arc(4, 2).unwrap();
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(0, 6), (2, 15)]);

        let c = denniston_arc(8, 4).unwrap();
        assert_eq!(c.set.len(), 28);
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(0, 10), (4, 63)]);

        let c = denniston_arc(8, 2).unwrap();
        assert_eq!(c.set.len(), 10);
        assert_eq!(spectrum(&c.set).unwrap().support(), vec![0, 2]);

        let c = denniston_arc(16, 4).unwrap();
        assert_eq!(c.set.len(), 52);
        assert_eq!(spectrum(&c.set).unwrap().support(), vec![0, 4]);

        assert!(denniston_arc(4, 3).is_err());
        assert!(denniston_arc(4, 4).is_err());
        assert!(denniston_arc(9, 3).is_err());
    }

    #[test]
    fn ovoid_spectra() {
        let c = ovoid(3).unwrap();
        assert_eq!(c.set.len(), 10);
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(1, 10), (4, 30)]);

        let c = ovoid(4).unwrap();
        assert_eq!(c.set.len(), 17);
        assert_eq!(spectrum(&c.set).unwrap().support(), vec![1, 5]);

        // Degenerate but still well-formed: over GF(2) the quadric is the
        // 5-point frame in disguise.
        let c = ovoid(2).unwrap();
        assert_eq!(c.set.len(), 5);
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(1, 5), (3, 10)]);

        let c = ovoid(5).unwrap();
        assert_eq!(c.set.len(), 26);
        assert_eq!(spectrum(&c.set).unwrap().support(), vec![1, 6]);
    }

    #[test]
    fn frame_spectra() {
        let c = frame(3).unwrap();
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(1, 5), (3, 10)]);
        let c = frame(4).unwrap();
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(0, 1), (2, 15), (4, 15)]);
    }

    #[test]
    fn ternary_golay_is_a_two_weight_eleven_set() {
        let c = ternary_golay().unwrap();
        assert_eq!(c.set.len(), 11);
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(2, 55), (5, 66)]);

        // The associated [11,5]_3 code is the dual of the perfect ternary
        // Golay code: weights 6 and 9 only, minimum distance 6.
        let emb = crate::gf::SubfieldEmbedding::default_tower(c.set.field().clone(), 1).unwrap();
        let code = crate::codes::subspace_set_to_code(&c.set, emb).unwrap();
        let wd = crate::codes::weight_distribution(&code).unwrap();
        let weights: Vec<(u32, u64)> = wd.counts().iter().map(|(&w, &n)| (w, n)).collect();
        assert_eq!(weights, vec![(0, 1), (6, 132), (9, 110)]);
        assert_eq!(wd.min_distance(), Some(6));

        // Quotienting at any point lands on the forced k = 4 parameters
        // (t = q+1 = 4, the ovoid spectrum shape).
        for i in 0..c.set.len() {
            let out = crate::geometry::quotient(&c.set, i).unwrap();
            assert_eq!(counts(&spectrum(&out.set).unwrap()), vec![(1, 10), (4, 30)]);
        }
    }

    #[test]
    fn extended_ternary_golay_tops_the_tower() {
        let c = extended_ternary_golay().unwrap();
        assert_eq!(c.set.len(), 12);

        // Self-dual [12,6,6]_3: weights 6, 9, 12.
        let emb = crate::gf::SubfieldEmbedding::default_tower(c.set.field().clone(), 1).unwrap();
        let code = crate::codes::subspace_set_to_code(&c.set, emb).unwrap();
        let wd = crate::codes::weight_distribution(&code).unwrap();
        let weights: Vec<(u32, u64)> = wd.counts().iter().map(|(&w, &n)| (w, n)).collect();
        assert_eq!(weights, vec![(0, 1), (6, 264), (9, 440), (12, 24)]);

        // Every quotient is an 11-point dual-Golay configuration.
        for i in 0..c.set.len() {
            let out = crate::geometry::quotient(&c.set, i).unwrap();
            assert_eq!(counts(&spectrum(&out.set).unwrap()), vec![(2, 55), (5, 66)]);
        }
    }

    #[test]
    fn affine_arc_spectra() {
        let c = affine_arc(3).unwrap();
        assert_eq!(c.set.len(), 9);
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(0, 1), (3, 12)]);
        // Same secant counts as the smallest hyperoval, though not the same
        // point set.
        let c = affine_arc(2).unwrap();
        assert_eq!(counts(&spectrum(&c.set).unwrap()), vec![(0, 1), (2, 6)]);
    }

    #[test]
    fn every_generator_attains_the_bound() {
        let all: Vec<Construction> = vec![
            desarguesian_spread(2, 2).unwrap(),
            desarguesian_spread(3, 2).unwrap(),
            hyperoval(4).unwrap(),
            hyperoval(8).unwrap(),
            denniston_arc(8, 4).unwrap(),
            ovoid(3).unwrap(),
            ovoid(4).unwrap(),
            frame(3).unwrap(),
            frame(4).unwrap(),
            ternary_golay().unwrap(),
            extended_ternary_golay().unwrap(),
            affine_arc(3).unwrap(),
        ];
        for c in &all {
            let report = verify_length_maximal(&c.set, c.descriptor.t as u32).unwrap();
            assert!(
                report.is_length_maximal && report.equality_conditions_hold(),
                "{} (q={}) fails maximality at its declared t={}",
                c.descriptor.name,
                c.descriptor.q,
                c.descriptor.t,
            );
        }
    }

    #[test]
    fn reduced_hyperoval_stays_maximal() {
        let c = hyperoval(4).unwrap();
        let points: Vec<Point> = c
            .set
            .elements()
            .iter()
            .map(|e| Point::from_coords(c.set.field(), &e.gens()[0]).unwrap())
            .collect();
        let big = c.set.field().clone();
        let small = Arc::new(FiniteField::new(2, 1).unwrap());
        let basis = SubfieldEmbedding::default_basis(&big, 2);
        let emb = SubfieldEmbedding::new(big, small, &basis).unwrap();
        let reduced = field_reduce(&points, &emb).unwrap();
        assert_eq!(reduced.h(), 2);
        assert_eq!(counts(&spectrum(&reduced).unwrap()), vec![(0, 18), (2, 45)]);
        let report = verify_length_maximal(&reduced, 2).unwrap();
        assert!(report.is_length_maximal && report.equality_conditions_hold());
    }

    #[test]
    fn mathon_loader_is_strict() {
        // Points (h = 1) are rejected up front with the labeling note.
        let hyp = hyperoval(4).unwrap();
        assert!(matches!(load_mathon(hyp.set), Err(Error::Unsupported(_))));
        // Lines over the wrong field fail the field check.
        let spread = desarguesian_spread(2, 2).unwrap();
        assert!(matches!(load_mathon(spread.set), Err(Error::SelfCheckFailed(_))));
        // Right field but wrong shape (k = 2, 10 lines).
        let spread = desarguesian_spread(3, 2).unwrap();
        assert!(matches!(load_mathon(spread.set), Err(Error::SelfCheckFailed(_))));
    }
}
