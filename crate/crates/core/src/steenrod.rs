//! Steenrod squares over F_2.
//!
//! Two sources of squares: the universal rule for Sq^1 on Stiefel-Whitney
//! generators, and per-space matrices read from a presentation. Nothing else
//! is built in; in particular Wu's formula for Sq^i w_j is not.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::exact::{DegreeRule, Field, GeneratorScheme, GradedPolynomial, Monomial, PolyError, Rational, Var};
use crate::presentation::{f2, CohomologyPresentation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SteenrodError {
    #[error("expected a polynomial in Stiefel-Whitney generators over F_2")]
    WrongScheme,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0} has no fundamental-class pairing in dimension {1}")]
    MissingPairing(String, u32),
    #[error("duality pairing is degenerate in degree {0}")]
    Degenerate(u32),
    #[error("class has {got} coordinates, degree {degree} has {expected}")]
    BadClass { degree: u32, expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn check_sw_scheme(s: &GeneratorScheme) -> Result<(), SteenrodError> {
    if s.field != Field::F2 || s.families.iter().any(|f| f.degree != DegreeRule::Linear(1)) {
        return Err(SteenrodError::WrongScheme);
    }
    Ok(())
}

fn w(scheme: &Arc<GeneratorScheme>, family: u8, index: u32) -> GradedPolynomial {
    if index == 0 {
        GradedPolynomial::one(scheme)
    } else {
        GradedPolynomial::monomial(scheme, Monomial::from_vars(vec![Var::new(family, index)]), Rational::one())
    }
}

/// Sq^1 of a single generator: w_{2i} -> w_{2i+1} + w_1 w_{2i}, w_{2i+1} -> w_1 w_{2i+1}.
fn sq1_generator(scheme: &Arc<GeneratorScheme>, v: Var) -> GradedPolynomial {
    let w1 = w(scheme, v.family, 1);
    let wv = w(scheme, v.family, v.index);
    let twisted = w1.mul_trunc(&wv, u32::MAX).expect("same scheme");
    if v.index.is_multiple_of(2) {
        &w(scheme, v.family, v.index + 1) + &twisted
    } else {
        twisted
    }
}

/// Sq^1 extended to polynomials as a derivation.
pub fn sq1_sw(poly: &GradedPolynomial) -> Result<GradedPolynomial, SteenrodError> {
    let scheme = poly.scheme().clone();
    check_sw_scheme(&scheme)?;
    let mut out = GradedPolynomial::zero(&scheme);
    for (_, m, _) in poly.terms() {
        let powers = m.powers();
        for (pos, &(v, e)) in powers.iter().enumerate() {
            if e % 2 == 0 {
                continue;
            }
            // e * v^{e-1} * Sq^1(v) * rest, with e odd
            let mut rest: Vec<Var> = Vec::new();
            for (q, &(u, f)) in powers.iter().enumerate() {
                let times = if q == pos { f - 1 } else { f };
                rest.extend(std::iter::repeat_n(u, times as usize));
            }
            let rest = GradedPolynomial::monomial(&scheme, Monomial::from_vars(rest), Rational::one());
            out = &out + &rest.mul_trunc(&sq1_generator(&scheme, v), u32::MAX)?;
        }
    }
    Ok(out)
}

/// rho_2 of the torsion Pontrjagin class in degree 4k+2, i.e. Sq^1(w_{2k} w_{2k+1}).
pub fn torsion_pontrjagin_mod2(k: u32) -> GradedPolynomial {
    let s = GeneratorScheme::stiefel_whitney();
    let prod = w(&s, 0, 2 * k).mul_trunc(&w(&s, 0, 2 * k + 1), u32::MAX).expect("same scheme");
    sq1_sw(&prod).expect("w scheme")
}

/// Which Stiefel-Whitney classes are set to zero on both bundles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Specialization {
    None,
    /// w_1 = 0
    Orientable,
    /// w_1 = w_2 = 0 and nothing else
    W1W2Only,
    /// w_1 = w_2 = 0 together with its consequence w_3 = Sq^1 w_2 = 0
    W1W2Closed,
    /// the relations of BSpin in this range: w_1, w_2 and every w_{2^i+1}
    Spin,
}

impl Specialization {
    pub fn kills(self, index: u32) -> bool {
        match self {
            Specialization::None => false,
            Specialization::Orientable => index == 1,
            Specialization::W1W2Only => index <= 2,
            Specialization::W1W2Closed => index <= 3,
            Specialization::Spin => index <= 2 || (index >= 3 && (index - 1).is_power_of_two()),
        }
    }

    /// Sets the killed generators to zero.
    pub fn apply(self, poly: &GradedPolynomial) -> GradedPolynomial {
        let scheme = poly.scheme().clone();
        poly.substitute(&scheme, u32::MAX, |v| {
            if self.kills(v.index) {
                GradedPolynomial::zero(&scheme)
            } else {
                w(&scheme, v.family, v.index)
            }
        })
        .expect("same scheme")
    }
}

/// rho_2 of the Whitney-sum correction D_k(E, E') in the two families w = w(E), w' = w(E'):
/// the sum over i + j = k - 1 of Sq^1(w_{2i} w'_{2i+1}) Sq^1(w'_{2j} w_{2j+1}),
/// specialised after the squares are taken.
pub fn whitney_correction_mod2(k: u32, specialization: Specialization) -> GradedPolynomial {
    assert!(k >= 1, "k starts at 1");
    let s = GeneratorScheme::stiefel_whitney_pair();
    let mut total = GradedPolynomial::zero(&s);
    for i in 0..k {
        let j = k - 1 - i;
        let left = w(&s, 0, 2 * i).mul_trunc(&w(&s, 1, 2 * i + 1), u32::MAX).expect("same scheme");
        let right = w(&s, 1, 2 * j).mul_trunc(&w(&s, 0, 2 * j + 1), u32::MAX).expect("same scheme");
        let term = sq1_sw(&left).expect("w scheme").mul_trunc(&sq1_sw(&right).expect("w scheme"), u32::MAX).expect("same scheme");
        total = &total + &term;
    }
    specialization.apply(&total)
}

/// A mod-2 class in one degree, as coordinates over the presentation basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mod2Class {
    pub degree: u32,
    pub coords: Vec<u8>,
}

impl Mod2Class {
    pub fn render(&self, p: &CohomologyPresentation) -> String {
        render_coords(&self.coords, p.mod2_basis(self.degree))
    }
}

fn render_coords(coords: &[u8], basis: &[String]) -> String {
    let parts: Vec<&str> = coords.iter().zip(basis).filter(|(c, _)| **c == 1).map(|(_, b)| b.as_str()).collect();
    if parts.is_empty() { "0".into() } else { parts.join(" + ") }
}

/// How a total class was obtained; the refined variants carry no data beyond
/// the underlying mod-2 class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum Refinement {
    #[default]
    Topological,
    Flat,
    Differential,
}

/// An inhomogeneous mod-2 class: one coordinate vector per degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct TotalClass {
    pub components: BTreeMap<u32, Vec<u8>>,
    pub refinement: Refinement,
}

impl TotalClass {
    pub fn component(&self, d: u32) -> Option<&Vec<u8>> {
        self.components.get(&d)
    }

    pub fn render(&self, p: &CohomologyPresentation) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .filter(|(_, v)| !f2::is_zero_vec(v))
            .map(|(d, v)| render_coords(v, p.mod2_basis(*d)))
            .collect();
        if parts.is_empty() { "0".into() } else { parts.join(" + ") }
    }
}

/// Sq^i x for x of degree `degree`.
pub fn apply_sq(i: u32, degree: u32, x: &[u8], p: &CohomologyPresentation) -> Result<Vec<u8>, SteenrodError> {
    if x.len() != p.mod2_dim(degree) {
        return Err(SteenrodError::BadClass { degree, expected: p.mod2_dim(degree), got: x.len() });
    }
    let m = p
        .sq_map(i, degree)
        .ok_or_else(|| SteenrodError::Unsupported(format!("Sq^{i} on degree {degree} of {} is not recorded", p.name)))?;
    Ok(f2::mat_vec(&m, x))
}

fn pair_top(p: &CohomologyPresentation, top: &[u8]) -> u8 {
    let pairing = p.pairing.as_ref().expect("checked");
    top.iter().zip(&pairing.mod2).fold(0, |acc, (a, b)| acc ^ (a & b))
}

/// Wu classes v_0..v_{dim/2}: the unique classes with <Sq^k x, [M]> = <v_k x, [M]>.
pub fn wu_classes(p: &CohomologyPresentation, dimension: u32) -> Result<Vec<Mod2Class>, SteenrodError> {
    match &p.pairing {
        Some(pr) if pr.degree == dimension => {}
        _ => return Err(SteenrodError::MissingPairing(p.name.clone(), dimension)),
    }
    let mut out = Vec::new();
    for k in 0..=dimension / 2 {
        let nk = p.mod2_dim(k);
        let dual = dimension - k;
        let nd = p.mod2_dim(dual);
        let cup = p
            .cup_mod2(k, dual)
            .ok_or_else(|| SteenrodError::Unsupported(format!("cup product H^{k} x H^{dual} of {}", p.name)))?;
        // rows: test classes x in H^{n-k}; columns: basis of H^k
        let mut a = f2::zeros(nd, nk);
        let mut b = vec![0u8; nd];
        for x in 0..nd {
            for e in 0..nk {
                a[x][e] = pair_top(p, &cup[e][x]);
            }
            let mut unit = vec![0u8; nd];
            unit[x] = 1;
            b[x] = pair_top(p, &apply_sq(k, dual, &unit, p)?);
        }
        let coords = f2::solve_unique(&a, &b, nk).ok_or(SteenrodError::Degenerate(k))?;
        out.push(Mod2Class { degree: k, coords });
    }
    Ok(out)
}

/// Total Stiefel-Whitney class w = Sq(v).
pub fn sw_from_wu(v: &[Mod2Class], p: &CohomologyPresentation) -> Result<TotalClass, SteenrodError> {
    let top = p.top_degree();
    let mut components: BTreeMap<u32, Vec<u8>> = BTreeMap::new();
    for class in v {
        for i in 0..=top.saturating_sub(class.degree) {
            let d = class.degree + i;
            if p.mod2_dim(d) == 0 {
                continue;
            }
            let image = apply_sq(i, class.degree, &class.coords, p)?;
            let slot = components.entry(d).or_insert_with(|| vec![0; p.mod2_dim(d)]);
            for (s, x) in slot.iter_mut().zip(image) {
                *s ^= x;
            }
        }
    }
    components.retain(|_, v| !f2::is_zero_vec(v));
    Ok(TotalClass { components, refinement: Refinement::Topological })
}

/// Checks the Cartan formula on basis products wherever the data covers it;
/// returns the number of identities checked.
pub fn check_cartan(p: &CohomologyPresentation) -> Result<usize, String> {
    let top = p.top_degree();
    let mut checked = 0;
    for a in 0..=top {
        for b in 0..=top - a {
            let Some(cup_ab) = p.cup_mod2(a, b) else { continue };
            for k in 0..=top - a - b {
                let Some(sq_prod) = p.sq_map(k, a + b) else { continue };
                for x in 0..p.mod2_dim(a) {
                    'pairs: for y in 0..p.mod2_dim(b) {
                        let lhs = f2::mat_vec(&sq_prod, &cup_ab[x][y]);
                        let mut rhs = vec![0u8; p.mod2_dim(a + b + k)];
                        for i in 0..=k {
                            let (Some(sa), Some(sb), Some(cup)) = (p.sq_map(i, a), p.sq_map(k - i, b), p.cup_mod2(a + i, b + k - i)) else {
                                continue 'pairs;
                            };
                            let xa: Vec<u8> = sa.iter().map(|r| r[x]).collect();
                            let yb: Vec<u8> = sb.iter().map(|r| r[y]).collect();
                            for (u, &cu) in xa.iter().enumerate() {
                                for (v, &cv) in yb.iter().enumerate() {
                                    if cu & cv == 1 {
                                        for (r, &z) in rhs.iter_mut().zip(&cup[u][v]) {
                                            *r ^= z;
                                        }
                                    }
                                }
                            }
                        }
                        if lhs != rhs {
                            return Err(format!("{}: Cartan fails for Sq^{k} on degrees {a},{b}", p.name));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::builtin;

    fn parse(text: &str) -> GradedPolynomial {
        GradedPolynomial::parse(&GeneratorScheme::stiefel_whitney(), text).unwrap()
    }

    #[test]
    fn sq1_on_generators() {
        assert_eq!(sq1_sw(&parse("w2")).unwrap(), parse("w3 + w1*w2"));
        assert_eq!(sq1_sw(&parse("w1")).unwrap(), parse("w1^2"));
        assert!(sq1_sw(&parse("w2^2")).unwrap().is_zero());
        assert_eq!(torsion_pontrjagin_mod2(1), parse("w3^2"));
        assert_eq!(torsion_pontrjagin_mod2(0), parse("w1^2"));
    }

    #[test]
    fn whitney_corrections() {
        for k in 1..=2 {
            assert!(whitney_correction_mod2(k, Specialization::Orientable).is_zero(), "k={k}");
        }
        for k in 1..=6 {
            assert!(whitney_correction_mod2(k, Specialization::Spin).is_zero(), "k={k}");
        }
        assert!(!whitney_correction_mod2(1, Specialization::None).is_zero());
    }

    #[test]
    fn wu_on_projective_spaces() {
        let rp2 = builtin("RP2").unwrap();
        let v = wu_classes(&rp2, 2).unwrap();
        assert_eq!(v[1].coords, vec![1]);
        assert_eq!(sw_from_wu(&v, &rp2).unwrap().render(&rp2), "1 + a + a^2");
        let cp2 = builtin("CP2").unwrap();
        let v = wu_classes(&cp2, 4).unwrap();
        assert_eq!(sw_from_wu(&v, &cp2).unwrap().render(&cp2), "1 + x + x^2");
        let s5 = builtin("S5").unwrap();
        assert_eq!(sw_from_wu(&wu_classes(&s5, 5).unwrap(), &s5).unwrap().render(&s5), "1");
    }

    #[test]
    fn cartan_holds_on_builtins() {
        for name in crate::presentation::builtin_names() {
            check_cartan(&builtin(name).unwrap()).unwrap();
        }
    }
}

#[cfg(test)]
mod spin_reading {
    use super::*;

    // Killing w1 and w2 alone leaves squares of odd classes behind; w3 goes once
    // Sq^1 w2 = w3 is imposed, w5 only with the BSpin relation.
    #[test]
    fn weaker_readings_leave_odd_squares() {
        let literal: Vec<String> = (1..=6).map(|k| whitney_correction_mod2(k, Specialization::W1W2Only).to_string()).collect();
        assert_eq!(literal, ["0", "0", "w3^2*w'3^2", "0", "w5^2*w'5^2", "0"]);
        let closed: Vec<String> = (1..=6).map(|k| whitney_correction_mod2(k, Specialization::W1W2Closed).to_string()).collect();
        assert_eq!(closed, ["0", "0", "0", "0", "w5^2*w'5^2", "0"]);
    }
}
