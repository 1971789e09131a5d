use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    F2,
}

/// How the degree of a generator depends on its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegreeRule {
    /// degree = weight * index
    Linear(u32),
    /// every generator of the family has this degree
    Constant(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub name: String,
    pub degree: DegreeRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorScheme {
    pub families: Vec<Family>,
    pub field: Field,
}

impl GeneratorScheme {
    pub fn single(name: &str, degree: DegreeRule, field: Field) -> Arc<GeneratorScheme> {
        Arc::new(GeneratorScheme {
            families: vec![Family { name: name.to_string(), degree }],
            field,
        })
    }

    /// p_i in degree 4i over Q.
    pub fn pontrjagin() -> Arc<GeneratorScheme> {
        Self::single("p", DegreeRule::Linear(4), Field::Rational)
    }

    /// Formal roots x_j, all in degree 2.
    pub fn roots() -> Arc<GeneratorScheme> {
        Self::single("x", DegreeRule::Constant(2), Field::Rational)
    }

    /// Stiefel-Whitney classes w_i in degree i over F_2.
    pub fn stiefel_whitney() -> Arc<GeneratorScheme> {
        Self::single("w", DegreeRule::Linear(1), Field::F2)
    }

    /// Two independent families of Stiefel-Whitney classes, `w` and `w'`.
    pub fn stiefel_whitney_pair() -> Arc<GeneratorScheme> {
        Arc::new(GeneratorScheme {
            families: vec![
                Family { name: "w".into(), degree: DegreeRule::Linear(1) },
                Family { name: "w'".into(), degree: DegreeRule::Linear(1) },
            ],
            field: Field::F2,
        })
    }

    pub fn elementary() -> Arc<GeneratorScheme> {
        Self::single("e", DegreeRule::Linear(1), Field::Rational)
    }

    pub fn power_sums() -> Arc<GeneratorScheme> {
        Self::single("s", DegreeRule::Linear(1), Field::Rational)
    }

    pub fn var_degree(&self, v: Var) -> u32 {
        match self.families[v.family as usize].degree {
            DegreeRule::Linear(w) => w * v.index,
            DegreeRule::Constant(d) => d,
        }
    }

    pub fn family_index(&self, name: &str) -> Option<u8> {
        self.families.iter().position(|f| f.name == name).map(|i| i as u8)
    }

    fn var_name(&self, v: Var) -> String {
        format!("{}{}", self.families[v.family as usize].name, v.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub family: u8,
    pub index: u32,
}

impl Var {
    pub fn new(family: u8, index: u32) -> Var {
        Var { family, index }
    }
}

/// Sorted multiset of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<Var>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn from_vars(mut vars: Vec<Var>) -> Monomial {
        vars.sort();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                v.push(self.0[i]);
                i += 1;
            } else {
                v.push(other.0[j]);
                j += 1;
            }
        }
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&other.0[j..]);
        Monomial(v)
    }

    /// (generator, exponent) pairs in order.
    pub fn powers(&self) -> Vec<(Var, u32)> {
        let mut out: Vec<(Var, u32)> = Vec::new();
        for &v in &self.0 {
            match out.last_mut() {
                Some((w, e)) if *w == v => *e += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().filter(|&&w| w == v).count() as u32
    }

    pub fn degree(&self, scheme: &GeneratorScheme) -> u32 {
        self.0.iter().map(|&v| scheme.var_degree(v)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("generator schemes differ")]
    SchemeMismatch,
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("coefficient {0} does not lie in F_2")]
    NotInField(Rational),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator index must be positive")]
    ZeroIndex,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Sparse polynomial over Q or F_2 in graded generators.
///
/// Terms are kept keyed by (total degree, monomial), which fixes the
/// iteration and rendering order.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedPolynomial {
    scheme: Arc<GeneratorScheme>,
    terms: BTreeMap<(u32, Monomial), Rational>,
}

impl GradedPolynomial {
    pub fn zero(scheme: &Arc<GeneratorScheme>) -> Self {
        GradedPolynomial { scheme: scheme.clone(), terms: BTreeMap::new() }
    }

    pub fn one(scheme: &Arc<GeneratorScheme>) -> Self {
        Self::constant(scheme, Rational::one())
    }

    pub fn constant(scheme: &Arc<GeneratorScheme>, c: Rational) -> Self {
        let mut p = Self::zero(scheme);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn generator(scheme: &Arc<GeneratorScheme>, family: u8, index: u32) -> Result<Self, PolyError> {
        if index == 0 {
            return Err(PolyError::ZeroIndex);
        }
        if family as usize >= scheme.families.len() {
            return Err(PolyError::UnknownGenerator(format!("family {family}")));
        }
        Ok(Self::monomial(scheme, Monomial::from_vars(vec![Var::new(family, index)]), Rational::one()))
    }

    /// Generator of the first family.
    pub fn var(scheme: &Arc<GeneratorScheme>, index: u32) -> Self {
        Self::generator(scheme, 0, index).expect("valid generator")
    }

    pub fn monomial(scheme: &Arc<GeneratorScheme>, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(scheme);
        p.add_term(m, c);
        p
    }

    pub fn scheme(&self) -> &Arc<GeneratorScheme> {
        &self.scheme
    }

    pub fn field(&self) -> Field {
        self.scheme.field
    }

    fn reduce(&self, c: Rational) -> Rational {
        match self.scheme.field {
            Field::Rational => c,
            Field::F2 => match c.mod2() {
                Some(b) => Rational::from(b as i64),
                None => panic!("coefficient {c} has no image in F_2"),
            },
        }
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        let d = m.degree(&self.scheme);
        let key = (d, m);
        let cur = self.terms.remove(&key).unwrap_or_else(Rational::zero);
        let next = self.reduce(cur + c);
        if !next.is_zero() {
            self.terms.insert(key, next);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: degree first, then monomial.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Monomial, &Rational)> {
        self.terms.iter().map(|((d, m), c)| (*d, m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        let d = m.degree(&self.scheme);
        self.terms.get(&(d, m.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub fn top_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(d, _)| *d).max()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|(d, _)| *d).collect();
        v.dedup();
        v
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn component(&self, degree: u32) -> Self {
        GradedPolynomial {
            scheme: self.scheme.clone(),
            terms: self
                .terms
                .iter()
                .filter(|((d, _), _)| *d == degree)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        GradedPolynomial {
            scheme: self.scheme.clone(),
            terms: self
                .terms
                .iter()
                .filter(|((d, _), _)| *d <= max_degree)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_scheme(&self, other: &Self) -> Result<(), PolyError> {
        if self.scheme == other.scheme {
            Ok(())
        } else {
            Err(PolyError::SchemeMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_scheme(other)?;
        let mut out = self.clone();
        for ((_, m), c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.scheme);
        for ((_, m), a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// Product with every term of degree above `max_degree` dropped.
    pub fn mul_trunc(&self, other: &Self, max_degree: u32) -> Result<Self, PolyError> {
        self.check_scheme(other)?;
        let mut acc: BTreeMap<(u32, Monomial), Rational> = BTreeMap::new();
        for ((da, ma), ca) in &self.terms {
            if *da > max_degree {
                break;
            }
            for ((db, mb), cb) in &other.terms {
                if da + db > max_degree {
                    break;
                }
                let e = acc.entry((da + db, ma.mul(mb))).or_insert_with(Rational::zero);
                *e += ca * cb;
            }
        }
        let mut out = Self::zero(&self.scheme);
        for ((_, m), c) in acc {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn pow_trunc(&self, n: u32, max_degree: u32) -> Self {
        let mut acc = Self::one(&self.scheme);
        for _ in 0..n {
            acc = acc.mul_trunc(self, max_degree).expect("same scheme");
        }
        acc
    }

    /// Multiplicative inverse through `max_degree`, by geometric series.
    pub fn invert_unit(&self, max_degree: u32) -> Result<Self, PolyError> {
        let c0 = self.constant_term();
        let c0_inv = c0.recip().ok_or(PolyError::NotInvertible)?;
        // a = c0 (1 + n), with n nilpotent modulo truncation
        let mut n = self.scale(&c0_inv);
        n.add_term(Monomial::one(), -Rational::one());
        let n = n.neg().truncate(max_degree);
        let mut sum = Self::one(&self.scheme);
        let mut power = Self::one(&self.scheme);
        loop {
            power = power.mul_trunc(&n, max_degree)?;
            if power.is_zero() {
                break;
            }
            sum = sum.try_add(&power)?;
        }
        Ok(sum.scale(&c0_inv))
    }

    /// Replaces every generator by a polynomial in `target`.
    pub fn substitute<F>(&self, target: &Arc<GeneratorScheme>, max_degree: u32, mut f: F) -> Result<Self, PolyError>
    where
        F: FnMut(Var) -> GradedPolynomial,
    {
        let mut cache: BTreeMap<Var, GradedPolynomial> = BTreeMap::new();
        let mut out = Self::zero(target);
        for ((_, m), c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (v, e) in m.powers() {
                let image = cache.entry(v).or_insert_with(|| f(v)).clone();
                if image.scheme != *target {
                    return Err(PolyError::SchemeMismatch);
                }
                term = term.mul_trunc(&image.pow_trunc(e, max_degree), max_degree)?;
                if term.is_zero() {
                    break;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Same terms over another scheme with matching family layout.
    pub fn rename_scheme(&self, target: &Arc<GeneratorScheme>) -> Self {
        let mut out = Self::zero(target);
        for ((_, m), c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Reduction of an integral polynomial to F_2 coefficients.
    pub fn reduce_mod2(&self, target: &Arc<GeneratorScheme>) -> Result<Self, PolyError> {
        let mut out = Self::zero(target);
        for ((_, m), c) in &self.terms {
            let b = c.mod2().ok_or_else(|| PolyError::NotInField(c.clone()))?;
            out.add_term(m.clone(), Rational::from(b as i64));
        }
        Ok(out)
    }

    /// Evaluates at rational values of the generators.
    pub fn evaluate<F: FnMut(Var) -> Rational>(&self, mut f: F) -> Rational {
        let mut total = Rational::zero();
        for ((_, m), c) in &self.terms {
            let mut t = c.clone();
            for &v in m.vars() {
                t *= &f(v);
            }
            total += t;
        }
        total
    }

    /// Lowest common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()))
    }

    /// Parses the text grammar used by `Display`.
    pub fn parse(scheme: &Arc<GeneratorScheme>, text: &str) -> Result<Self, PolyError> {
        parse_poly(scheme, text)
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((_, m), c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = m
                .powers()
                .into_iter()
                .map(|(v, e)| {
                    let name = self.scheme.var_name(v);
                    if e == 1 { name } else { format!("{name}^{e}") }
                })
                .collect::<Vec<_>>()
                .join("*");
            match (m.is_one(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPolynomial({self})")
    }
}

impl std::ops::Add for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.try_add(rhs).expect("generator schemes differ")
    }
}

impl std::ops::Sub for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.try_sub(rhs).expect("generator schemes differ")
    }
}

pub fn poly_add(a: &GradedPolynomial, b: &GradedPolynomial) -> Result<GradedPolynomial, PolyError> {
    a.try_add(b)
}

pub fn poly_mul(a: &GradedPolynomial, b: &GradedPolynomial, max_degree: u32) -> Result<GradedPolynomial, PolyError> {
    a.mul_trunc(b, max_degree)
}

pub fn invert_unit(a: &GradedPolynomial, max_degree: u32) -> Result<GradedPolynomial, PolyError> {
    a.invert_unit(max_degree)
}

fn split_terms(text: &str) -> Result<Vec<(bool, String)>, PolyError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev_caret = false;
    for ch in text.chars() {
        if ch.is_whitespace() {
            continue;
        }
        if (ch == '+' || ch == '-') && !prev_caret {
            if !cur.is_empty() {
                out.push((neg, std::mem::take(&mut cur)));
            } else if !out.is_empty() || neg {
                return Err(PolyError::Parse(format!("dangling sign in {text:?}")));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        prev_caret = ch == '^';
    }
    if cur.is_empty() {
        return Err(PolyError::Parse(format!("empty term in {text:?}")));
    }
    out.push((neg, cur));
    Ok(out)
}

fn parse_factor(scheme: &GeneratorScheme, s: &str) -> Result<(Var, u32), PolyError> {
    let (base, exp) = match s.split_once('^') {
        Some((b, e)) => (b, e.parse::<u32>().map_err(|_| PolyError::Parse(format!("bad exponent in {s:?}")))?),
        None => (s, 1),
    };
    let split = base.find(|c: char| c.is_ascii_digit()).ok_or_else(|| PolyError::UnknownGenerator(base.to_string()))?;
    let (name, idx) = base.split_at(split);
    let family = scheme.family_index(name).ok_or_else(|| PolyError::UnknownGenerator(base.to_string()))?;
    let index: u32 = idx.parse().map_err(|_| PolyError::UnknownGenerator(base.to_string()))?;
    if index == 0 {
        return Err(PolyError::ZeroIndex);
    }
    Ok((Var::new(family, index), exp))
}

fn parse_poly(scheme: &Arc<GeneratorScheme>, text: &str) -> Result<GradedPolynomial, PolyError> {
    let mut out = GradedPolynomial::zero(scheme);
    if text.trim() == "0" {
        return Ok(out);
    }
    for (neg, term) in split_terms(text)? {
        let mut coeff = Rational::one();
        let mut vars = Vec::new();
        for piece in term.split('*') {
            if piece.is_empty() {
                return Err(PolyError::Parse(format!("empty factor in {term:?}")));
            }
            if piece.starts_with(|c: char| c.is_ascii_digit()) {
                let c: Rational = piece.parse().map_err(|_| PolyError::Parse(format!("bad coefficient {piece:?}")))?;
                coeff = coeff * c;
            } else {
                let (v, e) = parse_factor(scheme, piece)?;
                vars.extend(std::iter::repeat_n(v, e as usize));
            }
        }
        if neg {
            coeff = -coeff;
        }
        if scheme.field == Field::F2 && coeff.mod2().is_none() {
            return Err(PolyError::NotInField(coeff));
        }
        out.add_term(Monomial::from_vars(vars), coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    #[test]
    fn renders_in_canonical_order() {
        let s = GeneratorScheme::pontrjagin();
        let p = GradedPolynomial::parse(&s, "-1/6*p2 + p1 + 1").unwrap();
        assert_eq!(p.to_string(), "1 + p1 - 1/6*p2");
        let r = GradedPolynomial::parse(&s, "p2 + 7*p1^2 - 3*p1*p2").unwrap();
        assert_eq!(r.to_string(), "7*p1^2 + p2 - 3*p1*p2");
    }

    #[test]
    fn truncation_drops_high_terms() {
        let s = GeneratorScheme::pontrjagin();
        let a = GradedPolynomial::parse(&s, "1 + p1").unwrap();
        let b = GradedPolynomial::parse(&s, "1 + p2").unwrap();
        assert_eq!(a.mul_trunc(&b, 4).unwrap().to_string(), "1 + p1");
        assert_eq!(a.mul_trunc(&b, 12).unwrap().to_string(), "1 + p1 + p2 + p1*p2");
    }

    #[test]
    fn inverse_of_one_plus_p1() {
        let s = GeneratorScheme::pontrjagin();
        let a = GradedPolynomial::parse(&s, "1 + p1").unwrap();
        let inv = a.invert_unit(12).unwrap();
        assert_eq!(inv.to_string(), "1 - p1 + p1^2 - p1^3");
        let id = a.mul_trunc(&inv, 12).unwrap();
        assert_eq!(id, GradedPolynomial::one(&s));
    }

    #[test]
    fn non_unit_is_rejected() {
        let s = GeneratorScheme::pontrjagin();
        let a = GradedPolynomial::var(&s, 1);
        assert_eq!(a.invert_unit(8), Err(PolyError::NotInvertible));
    }

    #[test]
    fn scheme_mismatch_is_an_error() {
        let a = GradedPolynomial::one(&GeneratorScheme::pontrjagin());
        let b = GradedPolynomial::one(&GeneratorScheme::roots());
        assert_eq!(a.try_add(&b), Err(PolyError::SchemeMismatch));
    }

    #[test]
    fn f2_coefficients_cancel() {
        let s = GeneratorScheme::stiefel_whitney();
        let a = GradedPolynomial::parse(&s, "w1 + w2").unwrap();
        let sq = a.mul_trunc(&a, 10).unwrap();
        assert_eq!(sq.to_string(), "w1^2 + w2^2");
    }

    #[test]
    fn two_family_names_parse() {
        let s = GeneratorScheme::stiefel_whitney_pair();
        let a = GradedPolynomial::parse(&s, "w3*w'3 + w'1").unwrap();
        assert_eq!(a.to_string(), "w'1 + w3*w'3");
    }

    #[test]
    fn substitution_and_evaluation() {
        let s = GeneratorScheme::pontrjagin();
        let a = GradedPolynomial::parse(&s, "1 + p1 + p1^2").unwrap();
        let x = GeneratorScheme::single("x", DegreeRule::Constant(4), Field::Rational);
        let image = a
            .substitute(&x, 8, |_| GradedPolynomial::var(&x, 1).scale(&Rational::from(2)))
            .unwrap();
        assert_eq!(image.to_string(), "1 + 2*x1 + 4*x1^2");
        assert_eq!(a.evaluate(|_| q(1, 2)), q(7, 4));
    }
}
