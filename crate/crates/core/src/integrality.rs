//! Denominators of the Pontrjagin character.
//!
//! `ph_denominator(k)` is the universal bound n = prod_p p^{phi(k/p)} with
//! n Ph_{4k} integral up to powers of 2; `admissible_pairs` finds the
//! p-primary part that a given space forces; `degree8_criterion` decides when
//! a degree-8 form is a character component exactly when its periods are
//! integral.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::ahss::{d4k_on_form_slot, AhssError, FormSlot, PeriodValue};
use crate::exact::{DegreeRule, Field, GeneratorScheme, GradedPolynomial, Monomial, Rational, Var};
use crate::genera::{a_hat, evaluate_genus, pontrjagin_character, Pairing};
use crate::presentation::CohomologyPresentation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntegralityError {
    #[error("invalid argument: {0}")]
    Validation(String),
    #[error(transparent)]
    Ahss(#[from] AhssError),
}

/// Greatest integer strictly below x, for x > 0.
pub fn phi(x: &Rational) -> Result<i64, IntegralityError> {
    if !x.is_positive_rational() {
        return Err(IntegralityError::Validation(format!("phi needs x > 0, got {x}")));
    }
    let f = x.floor();
    let v = if x.is_integer() { f - 1 } else { f };
    v.to_i64().ok_or_else(|| IntegralityError::Validation("phi out of range".into()))
}

trait Positive {
    fn is_positive_rational(&self) -> bool;
}

impl Positive for Rational {
    fn is_positive_rational(&self) -> bool {
        !self.is_zero() && !self.is_negative()
    }
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenominatorReport {
    pub k: u32,
    /// p -> phi(k/p) for every prime p <= k
    pub exponents: BTreeMap<u64, i64>,
    #[serde(serialize_with = "as_string")]
    pub odd_part: BigInt,
    pub odd_factored: String,
    /// The power of 2 is part of the bound but is absorbed: the statement
    /// lives in Z[1/2].
    pub two_exponent: i64,
    pub two_absorbed: bool,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub fn factored(exponents: &BTreeMap<u64, i64>) -> String {
    let parts: Vec<String> = exponents
        .iter()
        .filter(|(_, &e)| e > 0)
        .map(|(&p, &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn ph_denominator(k: u32) -> Result<DenominatorReport, IntegralityError> {
    if k == 0 {
        return Err(IntegralityError::Validation("k must be at least 1".into()));
    }
    let mut exponents = BTreeMap::new();
    for p in primes_up_to(k as u64) {
        exponents.insert(p, phi(&Rational::new(k as i64, p as i64))?);
    }
    let odd: BTreeMap<u64, i64> = exponents.iter().filter(|(&p, _)| p != 2).map(|(&p, &e)| (p, e)).collect();
    let odd_part = odd.iter().fold(BigInt::one(), |acc, (&p, &e)| acc * BigInt::from(p).pow(e as u32));
    Ok(DenominatorReport {
        k,
        two_exponent: exponents.get(&2).copied().unwrap_or(0),
        two_absorbed: true,
        odd_factored: factored(&odd),
        odd_part,
        exponents,
    })
}

/// Odd part of the common denominator of the coefficients of the universal
/// degree-4k character component (as a polynomial in the p_j).
pub fn character_odd_denominator(k: u32) -> BigInt {
    let ph = pontrjagin_character(4 * k, 0).component(4 * k);
    let mut d = ph.denominator_lcm();
    while d.is_even() {
        d /= 2;
    }
    d
}

/// d_4k survival of a form component, with the value that decides it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survival {
    pub survives: bool,
    pub value: PeriodValue,
    /// first nonzero coordinate of the value, when the component dies
    pub witness: Option<Rational>,
    /// no incoming images were supplied, so the quotient is taken trivially
    pub conservative: bool,
}

/// `incoming` lists elements of (Q/Z)^{b_4k} already in the image of earlier
/// differentials; pass None to test literal vanishing.
pub fn d4k_survival(slot: &FormSlot, k: u32, incoming: Option<&[Vec<Rational>]>) -> Result<Survival, IntegralityError> {
    let value = d4k_on_form_slot(slot, k)?;
    let survives = match incoming {
        Some(gens) => value.vanishes_modulo(gens),
        None => value.is_zero(),
    };
    let witness = if survives { None } else { value.values.iter().find(|v| !v.is_zero()).cloned() };
    Ok(Survival { survives, value, witness, conservative: incoming.is_none() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Degree8Verdict {
    /// A degree-8 closed form is the Ph_8 of a class iff its periods are integers.
    Applies,
    Inapplicable { failing: Vec<String> },
}

pub fn degree8_criterion(p: &CohomologyPresentation) -> Result<Degree8Verdict, IntegralityError> {
    if p.top_degree() < 4 && p.integral(4).rank() > 0 {
        return Err(IntegralityError::Validation("presentation is inconsistent in degree 4".into()));
    }
    let mut failing = Vec::new();
    if p.mod2_dim(1) != 0 {
        failing.push("H^1(M;Z/2) = 0".to_string());
    }
    if p.mod2_dim(2) != 0 {
        failing.push("H^2(M;Z/2) = 0".to_string());
    }
    // rho_2 beta_U(1) = 0 on H^3(U(1)) means every torsion class of H^4 is
    // 2-divisible; in a finite group that forces the 2-primary part to vanish
    let h4 = p.integral(4);
    let even: Vec<u64> = h4.torsion.iter().copied().filter(|t| t % 2 == 0).collect();
    if !even.is_empty() {
        failing.push(format!("torsion of H^4(M;Z) divisible by 2 (has Z/{})", even[0]));
    }
    Ok(if failing.is_empty() { Degree8Verdict::Applies } else { Degree8Verdict::Inapplicable { failing } })
}

/// Which relation between l, r and k enumerates the pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairReading {
    /// 4k + 4r(p-1) = l, the degree P^{2r} actually reaches
    Proof,
    /// 4k + r(p-1) = l, as the condition is printed
    Statement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PairVerdict {
    Admissible { class: Vec<i64> },
    NotAdmissible { reason: String },
    Undetermined { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub r: u32,
    pub k: u32,
    pub verdict: PairVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleReport {
    pub ell: u32,
    pub prime: u64,
    pub reading: PairReading,
    pub pairs: Vec<PairCheck>,
    /// number of admissible pairs
    pub s: usize,
    #[serde(serialize_with = "as_string")]
    pub denominator: BigInt,
    /// some pair could not be decided, so s is only a lower bound
    pub incomplete: bool,
}

fn candidate_pairs(ell: u32, p: u64, reading: PairReading) -> Vec<(u32, u32)> {
    let step = match reading {
        PairReading::Proof => 4 * (p as u32 - 1),
        PairReading::Statement => p as u32 - 1,
    };
    let mut out = Vec::new();
    let mut r = 1;
    while r * step < ell {
        let rest = ell - r * step;
        if rest.is_multiple_of(4) {
            out.push((r, rest / 4));
        }
        r += 1;
    }
    out
}

fn check_pair(pres: &CohomologyPresentation, p: u64, r: u32, k: u32) -> PairVerdict {
    let deg = 4 * k;
    let h = pres.integral(deg);
    if !h.torsion.iter().any(|t| t % p == 0) {
        return PairVerdict::NotAdmissible { reason: format!("H^{deg}(Z) has no {p}-torsion") };
    }
    let need = 2 * r - 1;
    let anns: Vec<_> = pres.divisibility.iter().filter(|a| a.degree == deg && a.prime == p).collect();
    if anns.is_empty() {
        return PairVerdict::Undetermined { reason: format!("no divisibility annotations in degree {deg}") };
    }
    let target = deg + 4 * r * (p as u32 - 1);
    let mut undetermined = None;
    for a in anns {
        // p-primary torsion class, divisible by p^{2r-1} and not by p^{2r}
        let p_torsion = a.class.iter().enumerate().all(|(j, &c)| {
            let order = h.order(j);
            if order == 0 {
                c == 0
            } else {
                let mut o = order;
                while o.is_multiple_of(p) {
                    o /= p;
                }
                c.rem_euclid(order as i64) % (o as i64) == 0 || o == 1
            }
        });
        if !p_torsion || a.exponent != need {
            continue;
        }
        let Some(odd) = pres.odd_primary(p) else {
            undetermined = Some(format!("no mod-{p} data"));
            continue;
        };
        let Some(m) = odd.power.get(&(2 * r).to_string()).and_then(|x| x.get(&deg.to_string())) else {
            undetermined = Some(format!("P^{} on degree {deg} is not supplied", 2 * r));
            continue;
        };
        let y = &a.quotient_reduction;
        let image: Vec<u64> = m.iter().map(|row| row.iter().zip(y).fold(0, |acc, (&x, &v)| (acc + x * v) % p)).collect();
        if image.iter().all(|&x| x == 0) {
            continue;
        }
        let up = pres.integral(target + 1);
        if up.torsion.iter().any(|t| t % p == 0) {
            let Some(b) = odd.bockstein.get(&target.to_string()) else {
                undetermined = Some(format!("beta_{p} on degree {target} is not supplied"));
                continue;
            };
            let out: Vec<i64> = b.iter().map(|row| row.iter().zip(&image).map(|(&c, &x)| c * x as i64).sum()).collect();
            let vanishes = out.iter().enumerate().all(|(j, &x)| match up.order(j) {
                0 => x == 0,
                o => x.rem_euclid(o as i64) == 0,
            });
            if !vanishes {
                continue;
            }
        }
        return PairVerdict::Admissible { class: a.class.clone() };
    }
    match undetermined {
        Some(reason) => PairVerdict::Undetermined { reason },
        None => PairVerdict::NotAdmissible { reason: "no annotated class passes all three conditions".into() },
    }
}

pub fn admissible_pairs(ell: u32, p: u64, pres: &CohomologyPresentation, reading: PairReading) -> Result<AdmissibleReport, IntegralityError> {
    if !primes_up_to(p).last().is_some_and(|&q| q == p) {
        return Err(IntegralityError::Validation(format!("{p} is not prime")));
    }
    if p == 2 {
        return Err(IntegralityError::Validation("admissible pairs are defined for odd primes only".into()));
    }
    let pairs: Vec<PairCheck> = candidate_pairs(ell, p, reading)
        .into_iter()
        .map(|(r, k)| PairCheck { r, k, verdict: check_pair(pres, p, r, k) })
        .collect();
    let s = pairs.iter().filter(|c| matches!(c.verdict, PairVerdict::Admissible { .. })).count();
    let incomplete = pairs.iter().any(|c| matches!(c.verdict, PairVerdict::Undetermined { .. }));
    Ok(AdmissibleReport { ell, prime: p, reading, pairs, s, denominator: BigInt::from(p).pow(s as u32), incomplete })
}

/// Worked obstruction computations on the universal character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    /// Ph_4 as computed
    pub ph4: String,
    /// Ph_8 with p_1 = 0
    pub ph8_without_p1: String,
    /// coefficient of p_2 there
    pub ph8_p2_coefficient: Rational,
    /// agrees with the published 1/6 p_2 up to sign
    pub ph8_matches_up_to_sign: bool,
    /// (1/2) Ph_12 with p_1 = p_2 = 0
    pub half_ph12_without_p1_p2: String,
    pub half_ph12_p3_coefficient: Rational,
    /// A-hat of HP^2 with p = 1 + 2x + 7x^2 and <x^2,[HP^2]> = 1
    pub hp2_a_hat: Rational,
    /// (p_2 - (p_1/2)^2)/48 there, as a multiple of x^2
    pub hp2_obstruction: Rational,
}

fn kill_low(poly: &GradedPolynomial, below: u32) -> GradedPolynomial {
    let s = poly.scheme().clone();
    poly.substitute(&s, 48, |v: Var| {
        if v.index < below {
            GradedPolynomial::zero(&s)
        } else {
            GradedPolynomial::var(&s, v.index)
        }
    })
    .expect("same scheme")
}

fn p_coefficient(poly: &GradedPolynomial, index: u32) -> Rational {
    poly.coefficient(&Monomial::from_vars(vec![Var::new(0, index)]))
}

pub fn obstruction_examples() -> ObstructionReport {
    let ph = pontrjagin_character(12, 0);
    let ph4 = ph.component(4);
    let ph8 = kill_low(&ph.component(8), 2);
    let c8 = p_coefficient(&ph8, 2);
    let half12 = kill_low(&ph.component(12), 3).scale(&Rational::new(1, 2));
    let c12 = p_coefficient(&half12, 3);

    let x = GeneratorScheme::single("x", DegreeRule::Constant(4), Field::Rational);
    let total = GradedPolynomial::parse(&x, "1 + 2*x1 + 7*x1^2").expect("valid");
    let top = Monomial::from_vars(vec![Var::new(0, 1), Var::new(0, 1)]);
    let pairing = Pairing { top_degree: 8, values: BTreeMap::from([(top.clone(), Rational::one())]) };
    let hp2_a_hat = evaluate_genus(&a_hat(8), &total, &pairing).expect("pairing covers x^2");
    let pnt = GeneratorScheme::pontrjagin();
    let obstruction = GradedPolynomial::parse(&pnt, "p2 - 1/4*p1^2").expect("valid").scale(&Rational::new(1, 48));
    let image = obstruction.substitute(&x, 8, |v| total.component(4 * v.index)).expect("same scheme");

    ObstructionReport {
        ph4: ph4.to_string(),
        ph8_without_p1: ph8.to_string(),
        ph8_matches_up_to_sign: c8.abs() == Rational::new(1, 6),
        ph8_p2_coefficient: c8,
        half_ph12_without_p1_p2: half12.to_string(),
        half_ph12_p3_coefficient: c12,
        hp2_a_hat,
        hp2_obstruction: image.coefficient(&top),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::presentation::builtin;

    #[test]
    fn phi_values() {
        assert_eq!(phi(&q(6, 1)).unwrap(), 5);
        assert_eq!(phi(&q(12, 5)).unwrap(), 2);
        assert_eq!(phi(&q(7, 5)).unwrap(), 1);
        assert_eq!(phi(&q(1, 2)).unwrap(), 0);
        assert!(phi(&q(0, 1)).is_err());
        assert!(phi(&q(-3, 2)).is_err());
    }

    #[test]
    fn denominator_table() {
        let want = ["1", "1", "1", "3", "3", "3*5", "3^2*5", "3^2*5*7", "3^2*5*7", "3^3*5*7", "3^3*5^2*7", "3^3*5^2*7*11"];
        for (k, w) in (1..=12).zip(want) {
            let r = ph_denominator(k).unwrap();
            assert_eq!(r.odd_factored, w, "k = {k}");
            assert!(r.two_absorbed);
        }
        assert_eq!(ph_denominator(12).unwrap().odd_part, BigInt::from(27 * 25 * 7 * 11));
        assert!(ph_denominator(0).is_err());
    }

    #[test]
    fn character_denominators_are_not_bounded_coefficientwise() {
        // the universal coefficients carry odd primes the bound does not
        // allow; the bound concerns classes, not polynomial coefficients
        let got: Vec<String> = (1..=6).map(|k| character_odd_denominator(k).to_string()).collect();
        assert_eq!(got, ["1", "3", "45", "315", "14175", "467775"]);
    }

    #[test]
    fn survival_rules() {
        let slot = FormSlot::new(1).with(4, vec![q(1, 1), q(2, 1)]).with(8, vec![q(3, 1)]);
        let s = d4k_survival(&slot, 1, None).unwrap();
        assert!(!s.survives);
        assert_eq!(s.witness, Some(q(1, 2)));
        assert!(d4k_survival(&slot, 2, None).unwrap().survives);
        let even = FormSlot::new(1).with(4, vec![q(2, 1), q(-4, 1)]);
        assert!(d4k_survival(&even, 1, None).unwrap().survives);
        assert!(d4k_survival(&slot, 1, Some(&[vec![q(1, 2), q(0, 1)]])).unwrap().survives);
    }

    #[test]
    fn degree8() {
        assert_eq!(degree8_criterion(&builtin("S8").unwrap()).unwrap(), Degree8Verdict::Applies);
        match degree8_criterion(&builtin("RP4").unwrap()).unwrap() {
            Degree8Verdict::Inapplicable { failing } => assert!(failing[0].starts_with("H^1")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(degree8_criterion(&builtin("CP2").unwrap()).unwrap(), Degree8Verdict::Inapplicable { .. }));
    }

    #[test]
    fn pair_enumeration() {
        assert_eq!(candidate_pairs(16, 3, PairReading::Proof), vec![(1, 2)]);
        assert_eq!(candidate_pairs(16, 3, PairReading::Statement), vec![(2, 3), (4, 2), (6, 1)]);
        let s8 = builtin("S8").unwrap();
        let r = admissible_pairs(16, 3, &s8, PairReading::Proof).unwrap();
        assert_eq!(r.s, 0);
        assert!(admissible_pairs(16, 2, &s8, PairReading::Proof).is_err());
        assert!(admissible_pairs(16, 9, &s8, PairReading::Proof).is_err());
    }

    #[test]
    fn synthetic_pair_is_admissible() {
        let p = CohomologyPresentation::load_json(include_str!("../tests/fixtures/synthetic_odd.json")).unwrap();
        let r = admissible_pairs(12, 3, &p, PairReading::Proof).unwrap();
        assert_eq!(r.pairs.len(), 1);
        assert_eq!((r.pairs[0].r, r.pairs[0].k), (1, 1));
        assert_eq!(r.s, 1);
        assert_eq!(r.denominator, BigInt::from(3));
        assert!(!r.incomplete);
        // printed relation: 4k + 2r = 12 gives (2,2) and (4,1); neither has data
        let st = admissible_pairs(12, 3, &p, PairReading::Statement).unwrap();
        assert_eq!(st.pairs.iter().map(|c| (c.r, c.k)).collect::<Vec<_>>(), vec![(2, 2), (4, 1)]);
        assert_eq!(st.s, 0);
    }

    #[test]
    fn obstructions() {
        let r = obstruction_examples();
        assert_eq!(r.ph4, "p1");
        assert_eq!(r.ph8_p2_coefficient, q(-1, 6));
        assert!(r.ph8_matches_up_to_sign);
        assert_eq!(r.half_ph12_p3_coefficient, q(1, 240));
        assert_eq!(r.hp2_a_hat, q(0, 1));
        assert_eq!(r.hp2_obstruction, q(1, 8));
    }
}
