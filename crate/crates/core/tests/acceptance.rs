//! The acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them) and enforcing a
//! pinned wall-clock limit. Two long-running confirmations are wired but
//! `#[ignore]`d; run them with `cargo test -- --ignored`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flatset::analysis::{count_zero_secants_through, spectrum, verify_length_maximal};
use flatset::codes::{
    code_to_subspace_set, field_reduce, weight_distribution, weight_distribution_exhaustive,
};
use flatset::constructions::{
    affine_arc, denniston_arc, desarguesian_spread, frame, hyperoval, ovoid,
};
use flatset::formulas::{
    k4_zero_secants, k5_delta, length_bound, num_hyperplanes, predicted_secants,
    skew_zero_secants, ParameterSet,
};
use flatset::geometry::{enumerate_points, quotient, Point, Subspace, SubspaceSet};
use flatset::gf::{FiniteField, SubfieldEmbedding};
use flatset::search::{confirm_nonexistence, search, SearchProblem, SearchStatus};
use flatset::{AdditiveCode, Error};

fn gate(n: u32, what: &str, limit: Duration, body: impl FnOnce() -> Result<(), String>) {
    let t0 = Instant::now();
    let res = body();
    let elapsed = t0.elapsed();
    match &res {
        Ok(()) if elapsed <= limit => {
            println!("acceptance {n} PASS ({elapsed:.2?} <= {limit:?}): {what}")
        }
        Ok(()) => println!(
            "acceptance {n} FAIL: {what}: correct result but overtime ({elapsed:.2?} > {limit:?})"
        ),
        Err(e) => println!("acceptance {n} FAIL: {what}: {e}"),
    }
    if let Err(e) = res {
        panic!("criterion {n} failed: {e}");
    }
    assert!(elapsed <= limit, "criterion {n} overtime: {elapsed:?} > {limit:?}");
}

struct Fixture {
    label: &'static str,
    set: SubspaceSet,
    t: u64,
}

fn fixtures() -> Vec<Fixture> {
    let fx = |label, set, t| Fixture { label, set, t };
    vec![
        fx("hyperoval q=2", hyperoval(2).unwrap().set, 2),
        fx("hyperoval q=4", hyperoval(4).unwrap().set, 2),
        fx("hyperoval q=8", hyperoval(8).unwrap().set, 2),
        fx("denniston q=8 t=4", denniston_arc(8, 4).unwrap().set, 4),
        fx("ovoid q=3", ovoid(3).unwrap().set, 4),
        fx("ovoid q=4", ovoid(4).unwrap().set, 5),
        fx("frame PG(3,2)", frame(3).unwrap().set, 3),
        fx("frame PG(4,2)", frame(4).unwrap().set, 4),
        fx("spread PG(3,2)", desarguesian_spread(2, 2).unwrap().set, 1),
        fx("spread PG(3,3)", desarguesian_spread(3, 2).unwrap().set, 1),
        fx("affine arc q=3", affine_arc(3).unwrap().set, 3),
    ]
}

fn params_of(set: &SubspaceSet, t: u64) -> ParameterSet {
    ParameterSet::new(set.field().p(), set.field().m(), set.h(), set.k(), t).unwrap()
}

/// (p, m) with p^m = q, for the grid values used below.
fn pm(q: u64) -> (u32, u32) {
    match q {
        2 => (2, 1),
        3 => (3, 1),
        4 => (2, 2),
        5 => (5, 1),
        8 => (2, 3),
        _ => unreachable!("grid covers q in {{2,3,4,5,8}}"),
    }
}

/// The secant sizes with a closed form at these parameters.
fn applicable_forms(k: u32, t: u64, qh: &BigInt) -> Vec<u64> {
    match k {
        3 => vec![0, t],
        4 => vec![0, 1, t],
        5 if BigInt::from(t) == qh + 2 => vec![2, t],
        _ => Vec::new(),
    }
}

fn as_rational(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[test]
fn criterion_1_closed_forms_match_brute_force() {
    gate(
        1,
        "closed-form secant counts equal brute-force spectra on every fixture",
        Duration::from_secs(10),
        || {
            for fx in fixtures() {
                let sp = spectrum(&fx.set).map_err(|e| e.to_string())?;
                let ps = params_of(&fx.set, fx.t);
                let forms = applicable_forms(fx.set.k(), fx.t, &ps.qh());
                for s in forms {
                    let predicted = predicted_secants(&ps, s).map_err(|e| e.to_string())?;
                    if !predicted.is_integer() {
                        return Err(format!("{}: N_{s} = {predicted} is not integral", fx.label));
                    }
                    let observed = as_rational(sp.get(s as u32));
                    if predicted != observed {
                        return Err(format!(
                            "{}: N_{s} predicted {predicted}, brute force found {observed}",
                            fx.label
                        ));
                    }
                }
                if fx.set.k() == 2 {
                    // No closed form applies to spreads; their spectrum is
                    // forced outright: every hyperplane is a 1-secant.
                    if sp.support() != vec![1] || sp.get(1) != sp.hyperplanes() {
                        return Err(format!("{}: spread spectrum is not all-1", fx.label));
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_2_fixtures_attain_the_bound() {
    gate(
        2,
        "every fixture attains the size bound with both equality conditions",
        Duration::from_secs(10),
        || {
            for fx in fixtures() {
                let ps = params_of(&fx.set, fx.t);
                if BigInt::from(fx.set.len() as u64) != length_bound(&ps) {
                    return Err(format!(
                        "{}: size {} differs from the bound {}",
                        fx.label,
                        fx.set.len(),
                        length_bound(&ps)
                    ));
                }
                let report =
                    verify_length_maximal(&fx.set, fx.t as u32).map_err(|e| e.to_string())?;
                if !report.is_length_maximal || !report.equality_conditions_hold() {
                    return Err(format!("{}: maximality verification failed", fx.label));
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_3_code_and_geometry_agree_on_random_codes() {
    gate(
        3,
        "exhaustive and spectrum-derived weight distributions agree on 50 random codes",
        Duration::from_secs(60),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_CAFE);
            let mut tested = 0u32;
            while tested < 50 {
                let &q = [2u64, 3, 4].choose(&mut rng).unwrap();
                let kh_max = match q {
                    2 => 12,
                    3 => 10,
                    _ => 8,
                };
                let kh: u32 = rng.gen_range(2..=kh_max);
                let hs: Vec<u32> =
                    (1..=3u32).filter(|h| kh.is_multiple_of(*h) && kh / h >= 2).collect();
                let &h = hs.choose(&mut rng).unwrap();
                let k = kh / h;
                let n: usize = rng.gen_range(k.max(3) as usize..=k.max(3) as usize + 7);
                let (p, m) = pm(q);
                let small = Arc::new(FiniteField::new(p, m).map_err(|e| e.to_string())?);
                let emb = SubfieldEmbedding::default_tower(small, h).map_err(|e| e.to_string())?;
                let bq = emb.big().q();

                let code = loop {
                    let gen: Vec<Vec<u32>> = (0..kh)
                        .map(|_| (0..n).map(|_| rng.gen_range(0..bq)).collect())
                        .collect();
                    if (0..n).any(|c| gen.iter().all(|row| row[c] == 0)) {
                        continue; // zero column: no subspace is spanned
                    }
                    match AdditiveCode::new(emb.clone(), k, gen) {
                        Ok(c) => break c,
                        Err(Error::DeficientRank { .. }) => continue,
                        Err(e) => return Err(e.to_string()),
                    }
                };

                let via_spectrum = weight_distribution(&code).map_err(|e| e.to_string())?;
                let exhaustive =
                    weight_distribution_exhaustive(&code, 1 << 24).map_err(|e| e.to_string())?;
                if via_spectrum.counts() != exhaustive.counts() {
                    return Err(format!(
                        "distributions disagree for q={q} h={h} k={k} n={n}: \
                         {:?} vs {:?}",
                        via_spectrum.counts(),
                        exhaustive.counts()
                    ));
                }
                let set = code_to_subspace_set(&code).map_err(|e| e.to_string())?;
                let sp = spectrum(&set).map_err(|e| e.to_string())?;
                let d = exhaustive.min_distance().ok_or("no nonzero codeword")?;
                if d != n as u32 - sp.max_secant() {
                    return Err(format!(
                        "q={q} h={h} k={k} n={n}: d = {d} but n - max_secant = {}",
                        n as u32 - sp.max_secant()
                    ));
                }
                tested += 1;
            }
            Ok(())
        },
    );
}

/// First element of the ambient space skew to every member of the set,
/// with its zero-secant tally.
fn first_skew_point_zero_count(set: &SubspaceSet) -> Result<u64, String> {
    let f = set.field();
    for pt in enumerate_points(set.ambient_dim(), f).map_err(|e| e.to_string())? {
        let flat =
            Subspace::canonicalize(f, &[pt.coords().to_vec()]).map_err(|e| e.to_string())?;
        match count_zero_secants_through(set, &flat) {
            Ok(counts) => return Ok(counts.zero),
            Err(Error::NotSkew { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        }
    }
    Err("no point is skew to the set".into())
}

#[test]
fn criterion_4_skew_zero_secant_counts_match_the_formula() {
    gate(
        4,
        "zero-secants through a skew point match the closed form (hyperoval and its reduction)",
        Duration::from_secs(5),
        || {
            let hyp = hyperoval(4).unwrap().set;
            let observed = first_skew_point_zero_count(&hyp)?;
            let predicted = skew_zero_secants(&params_of(&hyp, 2), 1).map_err(|e| e.to_string())?;
            if observed != 2 || predicted != as_rational(2) {
                return Err(format!("hyperoval: observed {observed}, predicted {predicted}"));
            }

            // The same hyperoval read as 6 lines of PG(5,2).
            let f2 = Arc::new(FiniteField::new(2, 1).map_err(|e| e.to_string())?);
            let emb = SubfieldEmbedding::default_tower(f2, 2).map_err(|e| e.to_string())?;
            let pts: Vec<Point> = hyp
                .elements()
                .iter()
                .map(|e| Point::from_coords(emb.big(), &e.gens()[0]))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let six = field_reduce(&pts, &emb).map_err(|e| e.to_string())?;
            let observed = first_skew_point_zero_count(&six)?;
            let predicted = skew_zero_secants(&params_of(&six, 2), 1).map_err(|e| e.to_string())?;
            if observed != 10 || predicted != as_rational(10) {
                return Err(format!("6-line set: observed {observed}, predicted {predicted}"));
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_5_k4_counts_close_and_force_the_parameters() {
    gate(
        5,
        "k=4 closed forms sum to the hyperplane count; the 0-secant count is negative below q^h+1",
        Duration::from_secs(5),
        || {
            for &q in &[2u64, 3, 4, 5, 8] {
                for h in 1..=2u32 {
                    let (p, m) = pm(q);
                    let qh = q.pow(h);
                    let total = BigRational::from_integer(num_hyperplanes(q, 4, h));
                    for t in 4..=qh + 1 {
                        let ps = ParameterSet::new(p, m, h, 4, t).map_err(|e| e.to_string())?;
                        let sum = predicted_secants(&ps, t).map_err(|e| e.to_string())?
                            + predicted_secants(&ps, 1).map_err(|e| e.to_string())?
                            + k4_zero_secants(q, h, t).map_err(|e| e.to_string())?;
                        if sum != total {
                            return Err(format!("q={q} h={h} t={t}: counts sum to {sum}, not {total}"));
                        }
                        let zero = k4_zero_secants(q, h, t).map_err(|e| e.to_string())?;
                        if q > 2 && t <= qh && zero >= BigRational::from_integer(0.into()) {
                            return Err(format!(
                                "q={q} h={h} t={t}: 0-secant count {zero} is not negative"
                            ));
                        }
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_6_k5_counts_reconstruct_delta() {
    gate(
        6,
        "k=5 predicted counts reconstruct the k5 delta polynomial with its sign pattern",
        Duration::from_secs(5),
        || {
            let zero = BigRational::from_integer(0.into());
            for &q in &[2u64, 3, 4, 5, 8] {
                for h in 1..=2u32 {
                    let (p, m) = pm(q);
                    let qh = q.pow(h);
                    let ps = ParameterSet::new(p, m, h, 5, qh + 2).map_err(|e| e.to_string())?;
                    let total = BigRational::from_integer(num_hyperplanes(q, 5, h));
                    let excess = predicted_secants(&ps, qh + 2).map_err(|e| e.to_string())?
                        + predicted_secants(&ps, 2).map_err(|e| e.to_string())?
                        - total;
                    let reconstructed =
                        excess * BigRational::from_integer(BigInt::from(2 * (qh + 2)));
                    let delta = k5_delta(q, h);
                    if reconstructed != delta {
                        return Err(format!(
                            "q={q} h={h}: reconstructed {reconstructed}, polynomial {delta}"
                        ));
                    }
                    let sign_ok = match qh {
                        2 => delta.clone() * as_rational(q - 1) == -as_rational(8),
                        3 => delta == zero,
                        _ => delta > zero,
                    };
                    if !sign_ok {
                        return Err(format!("q={q} h={h}: delta {delta} has the wrong sign"));
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_7_q2_frame_is_maximal_for_k5() {
    gate(
        7,
        "the PG(4,2) frame is length-maximal for k=5, t=4",
        Duration::from_secs(1),
        || {
            let set = frame(4).unwrap().set;
            let report = verify_length_maximal(&set, 4).map_err(|e| e.to_string())?;
            if !report.is_length_maximal || !report.equality_conditions_hold() {
                return Err("frame verification failed".into());
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_8_quotients_stay_maximal() {
    gate(
        8,
        "the quotient at every element of every k>=3 fixture is length-maximal with t-1",
        Duration::from_secs(30),
        || {
            for fx in fixtures().iter().filter(|fx| fx.set.k() >= 3) {
                for i in 0..fx.set.len() {
                    let out = quotient(&fx.set, i).map_err(|e| e.to_string())?;
                    let report = verify_length_maximal(&out.set, fx.t as u32 - 1)
                        .map_err(|e| e.to_string())?;
                    if !report.is_length_maximal || !report.equality_conditions_hold() {
                        return Err(format!("{}: quotient at {i} is not maximal", fx.label));
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_9_search_finds_and_certifies() {
    gate(
        9,
        "search finds small witnesses; exhaustive confirmation certifies small nonexistence",
        Duration::from_secs(300),
        || {
            let problem = |p, m, k, t| -> Result<SearchProblem, String> {
                SearchProblem::new(ParameterSet::new(p, m, 1, k, t).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())
            };

            let out = search(&problem(2, 1, 3, 2)?).map_err(|e| e.to_string())?;
            if out.status != SearchStatus::Found || out.witness.as_ref().map(|w| w.len()) != Some(4)
            {
                return Err("hyperoval search in PG(2,2) did not find a witness".into());
            }

            let out = search(&problem(3, 1, 4, 4)?).map_err(|e| e.to_string())?;
            if out.status != SearchStatus::Found
                || out.witness.as_ref().map(|w| w.len()) != Some(10)
            {
                return Err("ovoid-sized search in PG(3,3) did not find a witness".into());
            }

            let out = confirm_nonexistence(&problem(2, 1, 3, 2)?.with_target(5), false)
                .map_err(|e| e.to_string())?;
            if out.status != SearchStatus::ExhaustedNone || out.tree_hash.is_none() {
                return Err("5-point confirmation in PG(2,2) did not certify".into());
            }

            let out = confirm_nonexistence(&problem(3, 1, 4, 4)?.with_target(11), false)
                .map_err(|e| e.to_string())?;
            if out.status != SearchStatus::ExhaustedNone || out.tree_hash.is_none() {
                return Err("11-point confirmation in PG(3,3) did not certify".into());
            }
            Ok(())
        },
    );
}

#[test]
#[ignore = "long-running: exhaustive run over the 121 points of PG(4,3)"]
fn long_running_11_5_6_confirmation() {
    // Raw-search check of the k = 5 boundary case over GF(3). An 11-point
    // set of PG(4,3) with every hyperplane at a 5-secant or below DOES
    // exist — the projective system of the dual ternary Golay [11,5,6]_3
    // code — so a nonexistence run must come back refuted, with a verified
    // witness matching the shipped construction.
    let prob = SearchProblem::new(ParameterSet::new(3, 1, 1, 5, 5).unwrap()).unwrap();
    let out = confirm_nonexistence(&prob, true).unwrap();
    assert_eq!(out.status, SearchStatus::Found);
    let w = out.witness.unwrap();
    assert_eq!(w.len(), 11);
    let report = verify_length_maximal(&w, 5).unwrap();
    assert!(report.is_length_maximal && report.equality_conditions_hold());
    let golay = flatset::constructions::ternary_golay().unwrap();
    let gens = |s: &flatset::SubspaceSet| {
        s.elements().iter().map(|e| e.gens()[0].clone()).collect::<Vec<_>>()
    };
    assert_eq!(gens(&w), gens(&golay.set));
}

#[test]
#[ignore = "long-running: 21-line search over the 11011 lines of PG(5,3)"]
fn long_running_mathon_configuration_search() {
    // A 21-line 3-secant-capped configuration in PG(5,3) exists (Mathon);
    // the searcher should produce one from scratch.
    let prob = SearchProblem::new(ParameterSet::new(3, 1, 2, 3, 3).unwrap())
        .unwrap()
        .with_parallel_width(4);
    let out = search(&prob).unwrap();
    assert_eq!(out.status, SearchStatus::Found);
    let w = out.witness.unwrap();
    assert_eq!(w.len(), 21);
    let report = verify_length_maximal(&w, 3).unwrap();
    assert!(report.is_length_maximal && report.equality_conditions_hold());
}
