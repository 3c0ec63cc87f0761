//! Closed-form secant counts, size bounds, divisibility conditions, and the
//! parameter-feasibility rule engine — all in exact rational arithmetic.
//!
//! Non-integral values are returned, not errored: integrality failure is
//! itself the interesting signal (it certifies that no set with those
//! parameters exists). No floating point appears anywhere in this module.

use num::{BigInt, BigRational, One, Zero};

use crate::gf::is_prime;
use crate::{Error, Result};

fn bint(x: i128) -> BigInt {
    BigInt::from(x)
}

fn rat(x: i128) -> BigRational {
    BigRational::from_integer(bint(x))
}

fn rati(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

fn bpow(b: u64, e: u32) -> BigInt {
    num::pow::pow(BigInt::from(b), e as usize)
}

/// q^e for possibly negative e, as an exact rational.
fn qpow(q: u64, e: i64) -> BigRational {
    if e >= 0 {
        rati(bpow(q, e as u32))
    } else {
        BigRational::new(One::one(), bpow(q, (-e) as u32))
    }
}

/// (q^a − 1)/(q − 1): the number of points of PG(a−1, q).
fn gauss(q: u64, a: u32) -> BigInt {
    (bpow(q, a) - 1) / (bint(q as i128) - 1)
}

/// Number of hyperplanes (= points) of PG(kh−1, q).
pub fn num_hyperplanes(q: u64, k: u32, h: u32) -> BigInt {
    gauss(q, k * h)
}

/// The parameters (q = p^m, h, k, t) of a candidate set of (h−1)-flats in
/// PG(kh−1, q) with secant cap t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParameterSet {
    p: u32,
    m: u32,
    h: u32,
    k: u32,
    t: u64,
}

impl ParameterSet {
    pub fn new(p: u32, m: u32, h: u32, k: u32, t: u64) -> Result<ParameterSet> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 || h == 0 || k == 0 {
            return Err(Error::Unsupported("parameters m, h, k must be at least 1".into()));
        }
        if t == 0 {
            return Err(Error::Unsupported("the secant cap t must be at least 1".into()));
        }
        match (p as u128).checked_pow(m) {
            Some(q) if q <= (1 << 31) => Ok(ParameterSet { p, m, h, k, t }),
            Some(q) => Err(Error::FieldTooLarge(q)),
            None => Err(Error::FieldTooLarge(u128::MAX)),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }
    pub fn h(&self) -> u32 {
        self.h
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn t(&self) -> u64 {
        self.t
    }
    /// q^h as an exact integer.
    pub fn qh(&self) -> BigInt {
        bpow(self.q(), self.h)
    }
}

/// The size bound (t−k+2)·q^h + t, exact (negative for degenerately small t).
pub fn length_bound(ps: &ParameterSet) -> BigInt {
    (bint(ps.t as i128) - bint(ps.k as i128) + 2) * ps.qh() + bint(ps.t as i128)
}

// ---- the six closed-form secant counts for sets attaining the bound ----

/// k = 3: t·N = n·(hyperplanes through one flat), n = (t−1)q^h + t.
fn secants_3_t(q: u64, h: u32, t: u64) -> BigRational {
    rati(gauss(q, 3 * h)) - secants_3_0(q, h, t)
}

/// k = 3, s = 0: complement of the t-secant count.
fn secants_3_0(q: u64, h: u32, t: u64) -> BigRational {
    let qh = rati(bpow(q, h));
    let inner = &qh * (&qh + rat(1)) / rat(t as i128) - &qh;
    rati(gauss(q, h)) * inner
}

/// k = 4, s = t: pair-counting through 2-element spans.
fn secants_4_t(q: u64, h: u32, t: u64) -> BigRational {
    let qh = rati(bpow(q, h));
    let f1 = &qh + rat(1) - rat(2) * &qh / rat(t as i128);
    let f2 = &qh + rat(1) - &qh / rat(t as i128 - 1);
    f1 * f2 * rati(gauss(q, 2 * h))
}

/// k = 4, s = 1: n · (zero-secant count of a quotient with parameter t−1).
fn secants_4_1(q: u64, h: u32, t: u64) -> BigRational {
    let n = rat(t as i128 - 2) * rati(bpow(q, h)) + rat(t as i128);
    n * secants_3_0(q, h, t - 1)
}

/// k = 5, t = q^h+2, s = 2: (n/2) · N(q^h+1, h, 4, 1).
fn secants_5_2(q: u64, h: u32) -> BigRational {
    let q2h = rati(bpow(q, 2 * h));
    (&q2h + rat(2)) / rat(2) * (&q2h + rat(1)) * rati(gauss(q, h))
}

/// k = 5, t = q^h+2, s = t: triple-counting through 3-element spans.
fn secants_5_t(q: u64, h: u32) -> BigRational {
    let qh = bpow(q, h);
    let q2h = bpow(q, 2 * h);
    let numer = rati(&q2h + 2) * rati(&q2h + 1) * rati(qh.clone()) * rati(&qh - 1);
    numer / (rati(&qh + 2) * rat(q as i128 - 1))
}

/// Closed-form s-secant count N(t, h, k, s) for a set attaining the bound.
/// Supported (k, s) shapes: (3, t), (3, 0), (4, t), (4, 1), (4, 0), (5, 2),
/// (5, t) — the last two only at t = q^h + 2, where they are defined. The
/// value is exact; a non-integral result certifies infeasible parameters.
pub fn predicted_secants(ps: &ParameterSet, s: u64) -> Result<BigRational> {
    let (q, h, t) = (ps.q(), ps.h, ps.t);
    let need_t_at_least_2 = || -> Result<()> {
        if t < 2 {
            Err(Error::Unsupported("this count is defined only for t >= 2".into()))
        } else {
            Ok(())
        }
    };
    match (ps.k, s) {
        (3, s) if s == t => Ok(secants_3_t(q, h, t)),
        (3, 0) => Ok(secants_3_0(q, h, t)),
        (4, s) if s == t => {
            need_t_at_least_2()?;
            Ok(secants_4_t(q, h, t))
        }
        (4, 1) => {
            need_t_at_least_2()?;
            Ok(secants_4_1(q, h, t))
        }
        (4, 0) => k4_zero_secants(q, h, t),
        (5, s) if s == 2 || s == t => {
            match q.checked_pow(h) {
                Some(qh) if t == qh + 2 => {}
                Some(qh) => return Err(Error::K5WrongT { t, qh }),
                None => return Err(Error::Unsupported("q^h overflows the supported range".into())),
            }
            Ok(if s == 2 { secants_5_2(q, h) } else { secants_5_t(q, h) })
        }
        (k, s) => Err(Error::UnsupportedSecantForm { k, s: s.to_string() }),
    }
}

/// Zero-secant hyperplanes through an (s−1)-dimensional subspace skew to the
/// whole set, assuming a pure {0, t} spectrum:
/// (q^h − q^{kh−s−h})/(q−1) + (k−2)(q^{kh−s} − q^h)/(t(q−1)).
/// Integrality of the s = 0, 1 instances forces t | (k−2)q^h.
pub fn skew_zero_secants(ps: &ParameterSet, s: u32) -> Result<BigRational> {
    let kh = ps.k * ps.h;
    if s == 0 || s > kh {
        return Err(Error::Unsupported(format!(
            "the skew-subspace size parameter must satisfy 1 <= s <= kh = {kh}, got {s}"
        )));
    }
    let (q, h, k, t) = (ps.q(), ps.h as i64, ps.k as i64, ps.t as i128);
    let kh = kh as i64;
    let s = s as i64;
    let qm1 = rat(q as i128 - 1);
    let first = (qpow(q, h) - qpow(q, kh - s - h)) / &qm1;
    let second = rat(k as i128 - 2) * (qpow(q, kh - s) - qpow(q, h)) / (rat(t) * &qm1);
    Ok(first + second)
}

/// N(t, h, 4, 0) = q^h(q^h−1)(t−q^h−1)(t(q^h+1)−4q^h−2) / (t(q−1)).
/// Zero exactly at t = q^h+1 and strictly negative for 4 ≤ t ≤ q^h when
/// q > 2, which forces t = q^h+1 for k = 4.
pub fn k4_zero_secants(q: u64, h: u32, t: u64) -> Result<BigRational> {
    if t == 0 {
        return Err(Error::Unsupported("the secant cap t must be at least 1".into()));
    }
    let qh = rati(bpow(q, h));
    let tt = rat(t as i128);
    let numer = &qh * (&qh - rat(1)) * (&tt - &qh - rat(1)) * (&tt * (&qh + rat(1)) - rat(4) * &qh - rat(2));
    Ok(numer / (&tt * rat(q as i128 - 1)))
}

/// The k = 5 excess in closed polynomial form:
/// (q^h)³(q^h−1)²(q^h−3)/(q−1). Positive iff q^h > 3, zero at q^h = 3, and
/// equal to −8/(q−1) at q^h = 2. Related to the hyperplane-count excess by
/// k5_delta = 2(q^h+2) · k5_secant_excess (an exact identity, tested).
pub fn k5_delta(q: u64, h: u32) -> BigRational {
    let qh = rati(bpow(q, h));
    let sq = (&qh - rat(1)) * (&qh - rat(1));
    &qh * &qh * &qh * sq * (&qh - rat(3)) / rat(q as i128 - 1)
}

/// The true hyperplane-count excess at k = 5, t = q^h+2:
/// N(t,h,5,t) + N(t,h,5,2) − |PG(5h−1,q)|. Non-positive whenever a set with
/// these parameters exists (the 0- and 1-secant counts absorb the deficit),
/// so a positive value certifies nonexistence.
pub fn k5_secant_excess(q: u64, h: u32) -> BigRational {
    secants_5_t(q, h) + secants_5_2(q, h) - rati(gauss(q, 5 * h))
}

/// Disposition of one candidate t value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityStatus {
    /// A nonexistence criterion fired.
    RuledOut,
    /// Only these exact parameters survive for this (q, h, k).
    ForcedParameters,
    /// Not settled by any implemented criterion.
    Open,
    /// A classical construction (or a degenerate one) attains the bound.
    ExistsTrivially,
}

impl FeasibilityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeasibilityStatus::RuledOut => "ruled_out",
            FeasibilityStatus::ForcedParameters => "forced_parameters",
            FeasibilityStatus::Open => "open",
            FeasibilityStatus::ExistsTrivially => "exists_trivially",
        }
    }
    /// Everything except a firm nonexistence verdict.
    pub fn survives(&self) -> bool {
        !matches!(self, FeasibilityStatus::RuledOut)
    }
}

/// One fired rule: a stable machine-readable name plus a human explanation
/// with witness values.
#[derive(Debug, Clone)]
pub struct FeasibilityReason {
    pub rule: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct FeasibilityVerdict {
    pub t: u64,
    /// The size bound for this t, exact.
    pub n: BigInt,
    pub status: FeasibilityStatus,
    pub reasons: Vec<FeasibilityReason>,
}

fn reason(rule: &'static str, detail: impl Into<String>) -> FeasibilityReason {
    FeasibilityReason { rule, detail: detail.into() }
}

fn validate_qhk(q: u64, h: u32, k: u32) -> Result<u64> {
    if k < 2 {
        return Err(Error::Unsupported("feasibility classification needs k >= 2".into()));
    }
    if h == 0 {
        return Err(Error::Unsupported("parameter h must be at least 1".into()));
    }
    crate::gf::prime_power_parts(q).ok_or(Error::NotPrime(q))?;
    q.checked_pow(h)
        .ok_or_else(|| Error::Unsupported("q^h overflows the supported range".into()))
}

/// Classify every t in [1, q^h + k − 1] for sets of (h−1)-flats in
/// PG(kh−1, q) with secant cap t attaining the size bound. Each verdict
/// carries the rules that fired, with witness values.
pub fn feasible_t_values(q: u64, h: u32, k: u32) -> Result<Vec<FeasibilityVerdict>> {
    let qh = validate_qhk(q, h, k)?;
    let t_max = qh + k as u64 - 1;
    (1..=t_max).map(|t| classify_parameters(q, h, k, t)).collect()
}

/// The verdict for one specific t — the same rules feasible_t_values
/// applies, usable for any t ≥ 1 (also beyond the standard window).
pub fn classify_parameters(q: u64, h: u32, k: u32, t: u64) -> Result<FeasibilityVerdict> {
    let qh = validate_qhk(q, h, k)?;
    if t == 0 {
        return Err(Error::Unsupported("the secant cap t must be at least 1".into()));
    }
    let n = (bint(t as i128) - bint(k as i128) + 2) * bpow(q, h) + bint(t as i128);
    let (status, reasons) = classify(q, h, k, t, qh, &n);
    Ok(FeasibilityVerdict { t, n, status, reasons })
}

fn classify(
    q: u64,
    h: u32,
    k: u32,
    t: u64,
    qh: u64,
    n: &BigInt,
) -> (FeasibilityStatus, Vec<FeasibilityReason>) {
    use FeasibilityStatus::*;

    if n <= &BigInt::zero() {
        return (
            RuledOut,
            vec![reason("bound_nonpositive", format!("the size bound (t−k+2)q^h+t = {n} is not positive"))],
        );
    }
    if k == 2 {
        return (
            ExistsTrivially,
            vec![reason(
                "spread",
                format!("t disjoint copies of a spread of PG({}, {q}) attain the bound n = t(q^h+1) = {n}", 2 * h - 1),
            )],
        );
    }
    // Degenerate caps: n = (t−k+2)q^h + t with t ≤ k−2 leaves n ≤ t.
    if t <= (k - 2) as u64 {
        if k == 3 {
            return (
                ExistsTrivially,
                vec![reason(
                    "single_flat",
                    format!("n = {n}: a single (h−1)-flat; every hyperplane contains at most one element (the set spans only its own flat, not the ambient space)"),
                )],
            );
        }
        return (
            RuledOut,
            vec![reason(
                "degenerate_spanning",
                format!("n = {n} < k = {k}: too few elements to span PG({}, {q}), so no code of dimension parameter {k} arises", k * h - 1),
            )],
        );
    }

    if k == 3 {
        if t > qh + 1 {
            return (
                RuledOut,
                vec![reason(
                    "single_weight_bound",
                    format!("counting incident pairs forces t <= q^h+1 = {}", qh + 1),
                )],
            );
        }
        if t == qh + 1 {
            return (
                ExistsTrivially,
                vec![reason(
                    "whole_plane",
                    "all points of PG(2, q^h) (field-reduced when h > 1): every hyperplane is a t-secant",
                )],
            );
        }
        if t == qh {
            return (
                ExistsTrivially,
                vec![reason(
                    "affine_plane",
                    "the complement of a line in PG(2, q^h) (field-reduced when h > 1), for every prime power",
                )],
            );
        }
        // 2 <= t < q^h from here on.
        if !qh.is_multiple_of(t) {
            return (
                RuledOut,
                vec![reason(
                    "divisibility",
                    format!("t must divide q^h = {qh} (zero-secant count through a skew point), and {t} does not"),
                )],
            );
        }
        if q.is_multiple_of(2) {
            return (
                ExistsTrivially,
                vec![reason(
                    "denniston",
                    format!("Denniston maximal arcs in PG(2, {qh}) exist for every divisor t of q^h in even characteristic; field reduction preserves the spectrum"),
                )],
            );
        }
        if h == 1 {
            return (
                RuledOut,
                vec![reason(
                    "ball_blokhuis_mazzocca",
                    format!("maximal arcs with 1 < t < q do not exist in Desarguesian planes of odd order (Ball–Blokhuis–Mazzocca), and q = {q} is odd"),
                )],
            );
        }
        let mut reasons = vec![reason(
            "odd_characteristic_window",
            "odd characteristic with h > 1 is not settled by the implemented criteria",
        )];
        if q == 3 && h == 2 && t == 3 {
            reasons.push(reason(
                "mathon_example",
                "a known 21-line configuration in PG(5,3) (Mathon) attains exactly these parameters; load its coordinates from a set file to verify",
            ));
        }
        return (Open, reasons);
    }

    // k >= 4 below.
    if q > 2 {
        if k == 4 {
            if t == qh + 1 {
                return (
                    ForcedParameters,
                    vec![
                        reason(
                            "k4_forcing",
                            format!("for k = 4 and q > 2 the zero-secant count is negative unless t = q^h+1 = {t}; at equality every hyperplane is a 1- or t-secant"),
                        ),
                        reason(
                            "ovoid_existence",
                            "elliptic-quadric ovoids realize these parameters when h = 1; existence for h > 1 is open",
                        ),
                    ],
                );
            }
            let mut reasons = vec![reason(
                "k4_forcing",
                format!("any set attaining the bound in PG({}, {q}) with q > 2 must have t = q^h+1 = {}", 4 * h - 1, qh + 1),
            )];
            if t == (k - 1) as u64 {
                reasons.push(reason(
                    "mds_bound",
                    "t = k−1 would make the associated code an MDS code of length q^h+k−1; for q > 2, k >= 4 this requires 36 | q (Bruen–Silverman) — the clause is recorded verbatim, not acted on".to_string(),
                ));
            }
            if t >= 4 && t <= qh {
                if let Ok(v) = k4_zero_secants(q, h, t) {
                    reasons.push(reason(
                        "k4_zero_negative",
                        format!("the zero-secant count evaluates to {v}, which is negative"),
                    ));
                }
            }
            return (RuledOut, reasons);
        }
        // k >= 5, q > 2. Iterating the quotient k−5 times turns any set
        // attaining the bound into one with k = 5 and cap t−(k−5); one more
        // step reaches k = 4, where the cap is forced to q^h+1. So the only
        // candidate cap at each k is t = q^h + k − 3.
        if t != qh + k as u64 - 3 {
            return (
                RuledOut,
                vec![reason(
                    "quotient_forcing",
                    format!("iterated quotients force t = q^h+k−3 = {}, and t = {t} differs", qh + k as u64 - 3),
                )],
            );
        }
        if qh > 3 {
            let mut reasons = Vec::new();
            if k == 5 {
                let delta = k5_delta(q, h);
                reasons.push(reason(
                    "k5_nonexistence",
                    format!("the secant-count excess is positive (polynomial form {delta}), so the 0- and 1-secant counts would be negative"),
                ));
            } else {
                reasons.push(reason(
                    "upward_propagation",
                    format!("a set with k = {k} would quotient down to a set with k = 5 and cap q^h+2, which cannot exist for q^h > 3"),
                ));
            }
            return (RuledOut, reasons);
        }
        // q^h = 3 (q = 3, h = 1): the excess vanishes, the counting argument
        // is consistent, and the window is realized at k = 5 and k = 6.
        if k == 5 {
            return (
                ExistsTrivially,
                vec![
                    reason(
                        "golay",
                        "the 11 points of the dual ternary Golay code [11,5,6]_3 meet every hyperplane in 2 or 5 points; the vanished excess forces exactly this two-weight structure",
                    ),
                ],
            );
        }
        if k == 6 {
            return (
                ExistsTrivially,
                vec![reason(
                    "golay",
                    "the 12 points of the extended ternary Golay code [12,6,6]_3 attain the bound; each quotient is the 11-point dual-Golay set",
                )],
            );
        }
        return (
            Open,
            vec![reason(
                "golay_tower",
                format!("every quotient chain lands on the extended ternary Golay parameters, which exist; whether the chain lifts to k = {k} is not settled by the implemented criteria"),
            )],
        );
    }

    // q = 2, k >= 4: partial knowledge only.
    if t > qh + k as u64 - 2 {
        return (
            RuledOut,
            vec![reason(
                "quotient_chain",
                format!("iterating the quotient k−3 = {} times yields a k = 3 set with parameter t−k+3 = {} > q^h+1 = {}, violating the single-weight bound", k - 3, t - k as u64 + 3, qh + 1),
            )],
        );
    }
    if h == 1 && t == (k - 1) as u64 {
        return (
            ExistsTrivially,
            vec![reason(
                "frame",
                format!("the {} points e_1..e_{} plus the all-ones point of PG({}, 2) attain the bound with t = k−1", k + 1, k, k - 1),
            )],
        );
    }
    if t < qh + k as u64 - 2 && !qh.is_multiple_of(t - k as u64 + 3) {
        return (
            RuledOut,
            vec![reason(
                "divisibility",
                format!("t−k+3 = {} must divide q^h = {qh} (quotient chain to the k = 3 divisibility condition)", t - k as u64 + 3),
            )],
        );
    }
    (
        Open,
        vec![reason("q2_open", "the binary case is not settled by the implemented criteria")],
    )
}
