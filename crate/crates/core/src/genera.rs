//! Symmetric functions, multiplicative sequences and the genera built from them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exact::{DegreeRule, GeneratorScheme, GradedPolynomial, Monomial, PolyError, Rational, Series, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenusError {
    #[error("degree {degree} needs at least {needed} root pairs, got {got}")]
    Unstable { degree: u32, needed: usize, got: usize },
    #[error("characteristic series must have constant term 1")]
    NotNormalized,
    #[error("pairing has no value for top-degree monomial {0}")]
    MissingPairing(String),
    #[error("total class must have constant term 1 and only degrees divisible by 4")]
    BadTotalClass,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NewtonDirection {
    /// power sums s_k written in elementary symmetric e_i
    PowerSumsFromElementary,
    /// elementary e_k written in power sums s_i
    ElementaryFromPowerSums,
}

fn weight(scheme: &GeneratorScheme) -> u32 {
    match scheme.families[0].degree {
        DegreeRule::Linear(w) => w,
        DegreeRule::Constant(_) => panic!("Newton identities need a graded family"),
    }
}

/// s_1..s_n as polynomials in the generators of `scheme`, which play the
/// role of e_1, e_2, ...
pub fn power_sums_in(scheme: &Arc<GeneratorScheme>, n: usize) -> Vec<GradedPolynomial> {
    let top = weight(scheme) * n as u32;
    let e = |i: usize| GradedPolynomial::var(scheme, i as u32);
    let mut s: Vec<GradedPolynomial> = Vec::with_capacity(n);
    for k in 1..=n {
        // s_k = sum_{i<k} (-1)^{i-1} e_i s_{k-i} + (-1)^{k-1} k e_k
        let mut acc = e(k).scale(&Rational::from(k as i64));
        if k % 2 == 0 {
            acc = acc.neg();
        }
        for i in 1..k {
            let t = e(i).mul_trunc(&s[k - i - 1], top).expect("same scheme");
            acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
        }
        s.push(acc);
    }
    s
}

/// e_1..e_n as polynomials in the generators of `scheme`, read as s_1, s_2, ...
pub fn elementary_in(scheme: &Arc<GeneratorScheme>, n: usize) -> Vec<GradedPolynomial> {
    let top = weight(scheme) * n as u32;
    let s = |i: usize| GradedPolynomial::var(scheme, i as u32);
    let mut e: Vec<GradedPolynomial> = vec![GradedPolynomial::one(scheme)];
    for k in 1..=n {
        // k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} s_i
        let mut acc = GradedPolynomial::zero(scheme);
        for i in 1..=k {
            let t = e[k - i].mul_trunc(&s(i), top).expect("same scheme");
            acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
        }
        e.push(acc.scale(&Rational::new(1, k as i64)));
    }
    e.remove(0);
    e
}

/// Newton's identities in either direction, indices 1..=n.
pub fn newton_convert(direction: NewtonDirection, n: usize) -> Vec<GradedPolynomial> {
    match direction {
        NewtonDirection::PowerSumsFromElementary => power_sums_in(&GeneratorScheme::elementary(), n),
        NewtonDirection::ElementaryFromPowerSums => elementary_in(&GeneratorScheme::power_sums(), n),
    }
}

/// Homogeneous pieces K_0, K_1, ... of a multiplicative sequence in the p_j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusExpansion {
    pub components: Vec<GradedPolynomial>,
}

impl GenusExpansion {
    pub fn total(&self) -> GradedPolynomial {
        let scheme = self.components[0].scheme().clone();
        self.components.iter().fold(GradedPolynomial::zero(&scheme), |acc, k| &acc + k)
    }

    pub fn max_j(&self) -> usize {
        self.components.len() - 1
    }
}

/// Multiplicative sequence of `q`, a series in z = y^2 with q(0) = 1, so that
/// prod_i q(z_i) = sum_j K_j(p_1, ..., p_j) with p_j = e_j(z).
pub fn multiplicative_sequence(q: &Series, max_j: usize) -> Result<GenusExpansion, GenusError> {
    if !q.coeff(0).is_one() {
        return Err(GenusError::NotNormalized);
    }
    let p = GeneratorScheme::pontrjagin();
    let top = 4 * max_j as u32;
    let q = Series::new(q.coeffs.clone(), max_j + 1);
    let log = q.log().ok_or(GenusError::NotNormalized)?;
    // log prod q(z_i) = sum_k a_k s_k(z)
    let s = power_sums_in(&p, max_j);
    let mut l = GradedPolynomial::zero(&p);
    for k in 1..=max_j {
        l = &l + &s[k - 1].scale(&log.coeff(k));
    }
    // exp(l), l nilpotent under truncation
    let mut total = GradedPolynomial::one(&p);
    let mut power = GradedPolynomial::one(&p);
    for n in 1..=max_j {
        power = power.mul_trunc(&l, top)?.scale(&Rational::new(1, n as i64));
        total = &total + &power;
    }
    let components = (0..=max_j).map(|j| total.component(4 * j as u32)).collect();
    Ok(GenusExpansion { components })
}

/// Pontrjagin character of a real bundle of the given rank, through `max_degree`:
/// rank + sum_k 2 s_k(p) / (2k)!.
pub fn pontrjagin_character(max_degree: u32, rank: i64) -> GradedPolynomial {
    let p = GeneratorScheme::pontrjagin();
    let n = (max_degree / 4) as usize;
    let s = power_sums_in(&p, n);
    let mut out = GradedPolynomial::constant(&p, Rational::from(rank));
    for k in 1..=n {
        let c = Rational::from(2) / Rational::factorial(2 * k as u32);
        out = &out + &s[k - 1].scale(&c);
    }
    out
}

/// Characteristic series of A-hat in z = y^2: (sqrt z / 2) / sinh(sqrt z / 2).
pub fn a_hat_series(len: usize) -> Series {
    sinh_ratio_in_square(len).inverse().expect("unit series")
}

/// sinh(y/2)/(y/2) as a series in z = y^2.
pub fn sinh_ratio_in_square(len: usize) -> Series {
    Series::sinh_half_ratio(2 * len).even_part_in_square().expect("even series")
}

/// Total A-hat class through `max_degree`.
pub fn a_hat(max_degree: u32) -> GradedPolynomial {
    let max_j = (max_degree / 4) as usize;
    multiplicative_sequence(&a_hat_series(max_j + 1), max_j).expect("normalized").total()
}

/// Rational values on top-degree monomials of some cohomology model.
#[derive(Debug, Clone)]
pub struct Pairing {
    pub top_degree: u32,
    pub values: BTreeMap<Monomial, Rational>,
}

/// Evaluates a genus (a polynomial in the p_j) on a total Pontrjagin class
/// given in another scheme, pairing the top component against `pairing`.
pub fn evaluate_genus(genus: &GradedPolynomial, total_p: &GradedPolynomial, pairing: &Pairing) -> Result<Rational, GenusError> {
    if !total_p.constant_term().is_one() || total_p.degrees().iter().any(|d| d % 4 != 0) {
        return Err(GenusError::BadTotalClass);
    }
    let target = total_p.scheme().clone();
    let image = genus.substitute(&target, pairing.top_degree, |v| total_p.component(4 * v.index))?;
    let top = image.component(pairing.top_degree);
    let mut acc = Rational::zero();
    for (_, m, c) in top.terms() {
        let v = pairing
            .values
            .get(m)
            .ok_or_else(|| GenusError::MissingPairing(GradedPolynomial::monomial(&target, m.clone(), Rational::one()).to_string()))?;
        acc += c * v;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThomGenusReport {
    pub num_root_pairs: usize,
    pub max_degree: u32,
    /// prod (1-e^{x})(1-e^{-x})/(-x^2) against prod sinh(y/2)/(y/2) over y = +-x
    pub root_identity: bool,
    /// the sinh product written in p_j = e_j(y^2) against the inverse of A-hat
    pub pontrjagin_identity: bool,
    /// that p-polynomial specialised back to the roots against the root product
    pub specialization: bool,
}

impl ThomGenusReport {
    pub fn holds(&self) -> bool {
        self.root_identity && self.pontrjagin_identity && self.specialization
    }
}

fn series_in_var(scheme: &Arc<GeneratorScheme>, f: &Series, v: u32, sign: i64, max_degree: u32) -> GradedPolynomial {
    let x = GradedPolynomial::var(scheme, v).scale(&Rational::from(sign));
    let mut out = GradedPolynomial::zero(scheme);
    let mut power = GradedPolynomial::one(scheme);
    for k in 0..f.len() {
        out = &out + &power.scale(&f.coeff(k));
        power = power.mul_trunc(&x, max_degree).expect("same scheme");
    }
    out
}

/// Checks the identity between the spinor-difference character divided by
/// the Euler class and the inverse A-hat genus.
///
/// The bundle has Chern roots x_1..x_N together with their negatives. The
/// left side is prod_j (1-e^{x_j})(1-e^{-x_j}) / (-x_j^2), the right side is
/// prod_y sinh(y/2)/(y/2) over all 2N roots y. In Pontrjagin classes
/// p_j = e_j(y^2) the right side must equal the inverse of A-hat.
pub fn verify_thom_genus_identity(num_root_pairs: usize, max_degree: u32) -> Result<ThomGenusReport, GenusError> {
    let needed = max_degree.div_ceil(4) as usize;
    if num_root_pairs < needed {
        return Err(GenusError::Unstable { degree: max_degree, needed, got: num_root_pairs });
    }
    let xs = GeneratorScheme::roots();
    let len = (max_degree / 2) as usize + 1;

    let a = Series::exponential(len + 2).scale(&-Rational::one()).add(&Series::new(vec![Rational::one()], len + 2));
    let b = Series::exponential_neg(len + 2).scale(&-Rational::one()).add(&Series::new(vec![Rational::one()], len + 2));
    let lhs_factor = a.mul(&b).shift_down(2).expect("order two zero").scale(&-Rational::one());
    let lhs_factor = Series::new(lhs_factor.coeffs, len);
    let sinh_factor = Series::sinh_half_ratio(len);

    let mut lhs = GradedPolynomial::one(&xs);
    let mut rhs = GradedPolynomial::one(&xs);
    for j in 1..=num_root_pairs as u32 {
        lhs = lhs.mul_trunc(&series_in_var(&xs, &lhs_factor, j, 1, max_degree), max_degree)?;
        for sign in [1, -1] {
            rhs = rhs.mul_trunc(&series_in_var(&xs, &sinh_factor, j, sign, max_degree), max_degree)?;
        }
    }
    let root_identity = lhs == rhs;

    let max_j = (max_degree / 4) as usize;
    let k = multiplicative_sequence(&sinh_ratio_in_square(max_j + 1), max_j)?.total();
    let inverse = a_hat(max_degree).invert_unit(max_degree)?;
    let pontrjagin_identity = k == inverse;

    // p(V) = prod_j (1 + x_j^2)^2
    let mut total_p = GradedPolynomial::one(&xs);
    for j in 1..=num_root_pairs as u32 {
        let x = GradedPolynomial::var(&xs, j);
        let f = &GradedPolynomial::one(&xs) + &x.mul_trunc(&x, max_degree)?;
        total_p = total_p.mul_trunc(&f.mul_trunc(&f, max_degree)?, max_degree)?;
    }
    let specialized = k.substitute(&xs, max_degree, |v: Var| total_p.component(4 * v.index))?;
    let specialization = specialized == rhs;

    Ok(ThomGenusReport { num_root_pairs, max_degree, root_identity, pontrjagin_identity, specialization })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> GradedPolynomial {
        GradedPolynomial::parse(&GeneratorScheme::pontrjagin(), text).unwrap()
    }

    #[test]
    fn newton_low_degrees() {
        let s = newton_convert(NewtonDirection::PowerSumsFromElementary, 3);
        assert_eq!(s[0].to_string(), "e1");
        assert_eq!(s[1].to_string(), "e1^2 - 2*e2");
        assert_eq!(s[2].to_string(), "e1^3 - 3*e1*e2 + 3*e3");
        let e = newton_convert(NewtonDirection::ElementaryFromPowerSums, 2);
        assert_eq!(e[1].to_string(), "1/2*s1^2 - 1/2*s2");
    }

    #[test]
    fn pontrjagin_character_low_terms() {
        let ph = pontrjagin_character(12, 0);
        assert_eq!(ph.component(4), p("p1"));
        assert_eq!(ph.component(8), p("1/12*p1^2 - 1/6*p2"));
        assert_eq!(ph.component(12), p("1/360*p1^3 - 1/120*p1*p2 + 1/120*p3"));
    }

    #[test]
    fn a_hat_low_terms() {
        let a = a_hat(8);
        assert_eq!(a, p("1 - 1/24*p1 + 7/5760*p1^2 - 1/1440*p2"));
    }

    #[test]
    fn thom_identity_small() {
        let r = verify_thom_genus_identity(2, 8).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn unstable_request_is_rejected() {
        assert!(matches!(verify_thom_genus_identity(1, 8), Err(GenusError::Unstable { needed: 2, .. })));
    }
}
