//! Coefficient rings KO^*(pt) = Z[eta, alpha, beta^{+-1}]/(2 eta, eta^3, eta alpha, alpha^2 - 4 beta)
//! and K^*(pt) = Z[u^{+-1}], with the maps between them.
//!
//! Degrees are cohomological: eta in KO^{-1}, alpha in KO^{-4}, beta in KO^{-8}, u in K^{-2}.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::exact::Rational;
use crate::group::GroupDescriptor;

/// Additive basis of KO^*(pt).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum KoBasis {
    Beta(i64),
    AlphaBeta(i64),
    EtaBeta(i64),
    Eta2Beta(i64),
}

impl KoBasis {
    /// Cohomological degree t, so that the element lives in KO^t(pt).
    pub fn degree(self) -> i64 {
        match self {
            KoBasis::Beta(k) => -8 * k,
            KoBasis::AlphaBeta(k) => -4 - 8 * k,
            KoBasis::EtaBeta(k) => -1 - 8 * k,
            KoBasis::Eta2Beta(k) => -2 - 8 * k,
        }
    }

    pub fn is_torsion(self) -> bool {
        matches!(self, KoBasis::EtaBeta(_) | KoBasis::Eta2Beta(_))
    }

    pub fn bott_power(self) -> i64 {
        match self {
            KoBasis::Beta(k) | KoBasis::AlphaBeta(k) | KoBasis::EtaBeta(k) | KoBasis::Eta2Beta(k) => k,
        }
    }

    /// Every basis element with Bott exponent in [-range, range].
    pub fn all_within(range: i64) -> Vec<KoBasis> {
        let mut out = Vec::new();
        for k in -range..=range {
            out.extend([KoBasis::Beta(k), KoBasis::AlphaBeta(k), KoBasis::EtaBeta(k), KoBasis::Eta2Beta(k)]);
        }
        out
    }

    pub fn label(self) -> String {
        let beta = |k: i64| match k {
            0 => String::new(),
            1 => "beta".to_string(),
            k => format!("beta^{k}"),
        };
        let join = |head: &str, k: i64| {
            let b = beta(k);
            match (head.is_empty(), b.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => b,
                (false, true) => head.to_string(),
                (false, false) => format!("{head}*{b}"),
            }
        };
        match self {
            KoBasis::Beta(k) => join("", k),
            KoBasis::AlphaBeta(k) => join("alpha", k),
            KoBasis::EtaBeta(k) => join("eta", k),
            KoBasis::Eta2Beta(k) => join("eta^2", k),
        }
    }
}

impl fmt::Display for KoBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Element of KO^*(pt), or of its localisation away from an integer when
/// Adams operations are applied to negative Bott powers.
///
/// Torsion coefficients are stored reduced mod 2.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KoElement {
    terms: BTreeMap<KoBasis, Rational>,
}

/// Reduction of a coefficient on a 2-torsion generator. Inverting an even
/// number kills 2-torsion, so an even denominator gives zero.
fn torsion_coefficient(c: &Rational) -> Rational {
    match c.mod2() {
        Some(b) => Rational::from(b as i64),
        None => Rational::zero(),
    }
}

impl KoElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(KoBasis::Beta(0))
    }

    pub fn basis(b: KoBasis) -> Self {
        Self::term(b, Rational::one())
    }

    pub fn term(b: KoBasis, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(b, c);
        e
    }

    pub fn eta() -> Self {
        Self::basis(KoBasis::EtaBeta(0))
    }

    pub fn alpha() -> Self {
        Self::basis(KoBasis::AlphaBeta(0))
    }

    pub fn beta_pow(k: i64) -> Self {
        Self::basis(KoBasis::Beta(k))
    }

    pub fn add_term(&mut self, b: KoBasis, c: Rational) {
        let cur = self.terms.remove(&b).unwrap_or_else(Rational::zero);
        let mut next = cur + c;
        if b.is_torsion() {
            next = torsion_coefficient(&next);
        }
        if !next.is_zero() {
            self.terms.insert(b, next);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KoBasis, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: KoBasis) -> Rational {
        self.terms.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (b, a) in &self.terms {
            out.add_term(*b, a * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn parse(text: &str) -> Result<Self, KoParseError> {
        parse_ko(text)
    }
}

impl fmt::Display for KoElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            let label = b.label();
            if a.is_one() {
                write!(f, "{label}")?;
            } else if label == "1" {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}*{label}")?;
            }
        }
        Ok(())
    }
}

fn basis_product(a: KoBasis, b: KoBasis) -> KoElement {
    use KoBasis::*;
    let two = Rational::from(2);
    match (a, b) {
        (Beta(i), Beta(j)) => KoElement::basis(Beta(i + j)),
        (Beta(i), AlphaBeta(j)) | (AlphaBeta(j), Beta(i)) => KoElement::basis(AlphaBeta(i + j)),
        (Beta(i), EtaBeta(j)) | (EtaBeta(j), Beta(i)) => KoElement::basis(EtaBeta(i + j)),
        (Beta(i), Eta2Beta(j)) | (Eta2Beta(j), Beta(i)) => KoElement::basis(Eta2Beta(i + j)),
        // alpha^2 = 4 beta
        (AlphaBeta(i), AlphaBeta(j)) => KoElement::term(Beta(i + j + 1), two.clone() * two),
        (EtaBeta(i), EtaBeta(j)) => KoElement::basis(Eta2Beta(i + j)),
        // eta alpha = 0, eta^3 = 0
        _ => KoElement::zero(),
    }
}

pub fn ko_mul(a: &KoElement, b: &KoElement) -> KoElement {
    let mut out = KoElement::zero();
    for (x, cx) in &a.terms {
        for (y, cy) in &b.terms {
            out = out.add(&basis_product(*x, *y).scale(&(cx * cy)));
        }
    }
    out
}

/// Laurent polynomial in u with u in K^{-2}(pt).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KElement {
    terms: BTreeMap<i64, Rational>,
}

impl KElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn u_pow(i: i64) -> Self {
        Self::term(i, Rational::one())
    }

    pub fn term(i: i64, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(i, c);
        e
    }

    pub fn add_term(&mut self, i: i64, c: Rational) {
        let next = self.terms.remove(&i).unwrap_or_else(Rational::zero) + c;
        if !next.is_zero() {
            self.terms.insert(i, next);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, i: i64) -> Rational {
        self.terms.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (i, a) in &self.terms {
            out.add_term(*i, a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    /// Complex conjugation, u -> -u.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero();
        for (i, a) in &self.terms {
            out.add_term(*i, if i % 2 == 0 { a.clone() } else { -a });
        }
        out
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (i, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => "u".to_string(),
                i => format!("u^{i}"),
            };
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// Complexification c: eta -> 0, alpha -> 2u^2, beta -> u^4.
pub fn complexify(a: &KoElement) -> KElement {
    let mut out = KElement::zero();
    for (b, c) in &a.terms {
        match *b {
            KoBasis::Beta(k) => out.add_term(4 * k, c.clone()),
            KoBasis::AlphaBeta(k) => out.add_term(2 + 4 * k, c * Rational::from(2)),
            KoBasis::EtaBeta(_) | KoBasis::Eta2Beta(_) => {}
        }
    }
    out
}

/// Realification on a single power of u.
pub fn realify_power(i: i64) -> KoElement {
    let (k, r) = i.div_mod_floor(&4);
    match r {
        0 => KoElement::term(KoBasis::Beta(k), Rational::from(2)),
        1 => KoElement::basis(KoBasis::Eta2Beta(k)),
        2 => KoElement::basis(KoBasis::AlphaBeta(k)),
        _ => KoElement::zero(),
    }
}

/// Realification r, additive.
pub fn realify(a: &KElement) -> KoElement {
    let mut out = KoElement::zero();
    for (i, c) in &a.terms {
        out = out.add(&realify_power(*i).scale(c));
    }
    out
}

/// The map K -> KO written f_U in the Bott sequence discussion, on u^0..u^3.
pub fn f_u_table() -> [(i64, KoElement); 4] {
    [
        (0, KoElement::term(KoBasis::Beta(0), Rational::from(2))),
        (1, KoElement::basis(KoBasis::Eta2Beta(0))),
        (2, KoElement::basis(KoBasis::AlphaBeta(0))),
        (3, KoElement::zero()),
    ]
}

/// Checks r c = 2 on KO basis elements with |k| <= range_k and
/// c r = 1 + conjugation on u^i with |i| <= 4 range_k.
pub fn check_bott_identities(range_k: i64) -> bool {
    let rc_ok = KoBasis::all_within(range_k).into_iter().all(|b| {
        let x = KoElement::basis(b);
        realify(&complexify(&x)) == x.scale(&Rational::from(2))
    });
    let cr_ok = (-4 * range_k..=4 * range_k).all(|i| {
        let u = KElement::u_pow(i);
        complexify(&realify(&u)) == u.add(&u.conjugate())
    });
    rc_ok && cr_ok
}

/// KO^i(pt), cohomologically indexed: KO^i(pt) = pi_{-i} KO.
pub fn ko_coefficient_group(i: i64) -> GroupDescriptor {
    let (k, m) = (-i).div_mod_floor(&8);
    match m {
        0 => GroupDescriptor::integers().labelled(KoBasis::Beta(k).label()),
        1 => GroupDescriptor::cyclic(2).labelled(KoBasis::EtaBeta(k).label()),
        2 => GroupDescriptor::cyclic(2).labelled(KoBasis::Eta2Beta(k).label()),
        4 => GroupDescriptor::integers().labelled(KoBasis::AlphaBeta(k).label()),
        _ => GroupDescriptor::zero(),
    }
}

/// Flat coefficients: the group written KO-hat_flat^{-i}(pt).
pub fn flat_coefficient_group(i: i64) -> GroupDescriptor {
    let (k, m) = i.div_mod_floor(&8);
    match m {
        7 => GroupDescriptor::circle().labelled(KoBasis::Beta(k + 1).label()),
        1 => GroupDescriptor::cyclic(2).labelled(KoBasis::EtaBeta(k).label()),
        2 => GroupDescriptor::cyclic(2).labelled(KoBasis::Eta2Beta(k).label()),
        3 => GroupDescriptor::circle()
            .labelled(KoBasis::AlphaBeta(k).label())
            .direct_sum(&GroupDescriptor::cyclic(2).labelled(KoBasis::Eta2Beta(0).label())),
        _ => GroupDescriptor::zero(),
    }
}

/// Homotopy of the spaces in the real Bott sequence, rows n mod 8.
/// Columns: O, BO, Sp, BSp, O/U, Sp/U, U/SO, U/Sp.
pub const BOTT_SPACES: [(&str, i64); 8] =
    [("O", 1), ("BO", 0), ("Sp", 5), ("BSp", 4), ("O/U", 2), ("Sp/U", 6), ("U/SO", 7), ("U/Sp", 3)];

/// pi_n of each Bott space for n = 0..7, read off from the KO coefficients:
/// pi_n(X) = pi_{n + shift}(Z x BO).
pub fn bott_space_table() -> Vec<(u32, Vec<GroupDescriptor>)> {
    (0..8)
        .map(|n| {
            let row = BOTT_SPACES
                .iter()
                .map(|&(_, shift)| {
                    let mut g = ko_coefficient_group(-(n + shift));
                    g.labels.clear();
                    g
                })
                .collect();
            (n as u32, row)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse KO element: {0}")]
pub struct KoParseError(pub String);

fn parse_ko(text: &str) -> Result<KoElement, KoParseError> {
    let err = |m: &str| KoParseError(format!("{m} in {text:?}"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty input"));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev = ' ';
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && prev != '^' {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        prev = ch;
    }
    if cur.is_empty() {
        return Err(err("trailing sign"));
    }
    terms.push((neg, cur));

    let mut out = KoElement::zero();
    for (neg, term) in terms {
        let mut acc = KoElement::one();
        for piece in term.split('*') {
            let (base, exp) = match piece.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
                None => (piece, 1),
            };
            let factor = match base {
                "1" if exp == 1 => KoElement::one(),
                "beta" => KoElement::beta_pow(exp),
                "eta" | "alpha" => {
                    if exp < 0 {
                        return Err(err("only beta may have a negative exponent"));
                    }
                    let g = if base == "eta" { KoElement::eta() } else { KoElement::alpha() };
                    (0..exp).fold(KoElement::one(), |a, _| ko_mul(&a, &g))
                }
                _ if exp == 1 => {
                    let c: Rational = base.parse().map_err(|_| err("unknown factor"))?;
                    KoElement::one().scale(&c)
                }
                _ => return Err(err("unknown factor")),
            };
            acc = ko_mul(&acc, &factor);
        }
        out = out.add(&if neg { acc.neg() } else { acc });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        let eta = KoElement::eta();
        let eta2 = ko_mul(&eta, &eta);
        assert!(ko_mul(&eta, &eta2).is_zero());
        assert_eq!(ko_mul(&KoElement::alpha(), &KoElement::alpha()), KoElement::term(KoBasis::Beta(1), Rational::from(4)));
        assert_eq!(ko_mul(&KoElement::beta_pow(1), &KoElement::beta_pow(-1)), KoElement::one());
        assert!(eta.add(&eta).is_zero());
    }

    #[test]
    fn coefficient_groups() {
        let g = ko_coefficient_group(-10);
        assert_eq!(g.torsion, vec![2]);
        assert_eq!(g.labels, vec!["eta^2*beta"]);
        assert!(ko_coefficient_group(3).is_zero());
        assert_eq!(ko_coefficient_group(0).free, 1);
        assert_eq!(ko_coefficient_group(6).labels, vec!["eta^2*beta^-1"]);
        assert_eq!(flat_coefficient_group(-1).circles, 1);
        assert_eq!(flat_coefficient_group(3).to_string(), "Z/2 + U(1)");
        assert!(flat_coefficient_group(0).is_zero());
    }

    #[test]
    fn complexify_and_realify() {
        assert!(complexify(&KoElement::eta()).is_zero());
        let ab = ko_mul(&KoElement::alpha(), &KoElement::beta_pow(1));
        assert_eq!(complexify(&ab), KElement::term(6, Rational::from(2)));
        assert_eq!(realify(&KElement::u_pow(4)), KoElement::term(KoBasis::Beta(1), Rational::from(2)));
        assert!(realify(&KElement::u_pow(3)).is_zero());
        assert_eq!(realify(&KElement::u_pow(2)), KoElement::alpha());
        assert_eq!(realify(&KElement::u_pow(1)), ko_mul(&KoElement::eta(), &KoElement::eta()));
    }

    #[test]
    fn bott_identities_hold() {
        assert!(check_bott_identities(4));
    }

    #[test]
    fn f_u_agrees_with_realification() {
        for (i, image) in f_u_table() {
            assert_eq!(realify_power(i), image, "u^{i}");
        }
    }

    #[test]
    fn parse_and_render() {
        let x = KoElement::parse("2*beta^-1 + eta*beta - alpha*beta^2 + 3*eta").unwrap();
        assert_eq!(x.to_string(), "2*beta^-1 - alpha*beta^2 + eta + eta*beta");
        assert_eq!(KoElement::parse("alpha^2").unwrap().to_string(), "4*beta");
        assert!(KoElement::parse("gamma").is_err());
    }
}
