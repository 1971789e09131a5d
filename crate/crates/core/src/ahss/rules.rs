//! The identified differentials and their matrices in E_2 coordinates.

use num_integer::Integer;
use serde::Serialize;

use super::{RowKind, Variant};
use crate::exact::lattice::IntMatrix;
use crate::presentation::f2::{self, Mat};
use crate::presentation::CohomologyPresentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// d_2 out of the integral rows t = 0 mod 8
    Sq2Reduction,
    /// d_2 between consecutive mod-2 rows
    Sq2,
    /// d_3 out of the eta^2 rows
    BocksteinSq2,
    /// d_5 out of the integral rows t = 0 mod 8
    BocksteinSq4Reduction,
    /// d_2 from the flat eta^2 rows into the U(1) rows
    IncludeSq2,
    /// d_5 between U(1) rows
    IncludeSq4Reduction,
}

impl Rule {
    pub fn formula(self) -> &'static str {
        match self {
            Rule::Sq2Reduction => "Sq^2 rho_2",
            Rule::Sq2 => "Sq^2",
            Rule::BocksteinSq2 => "beta_2 Sq^2",
            Rule::BocksteinSq4Reduction => "beta_2 Sq^4 rho_2",
            Rule::IncludeSq2 => "j Sq^2",
            Rule::IncludeSq4Reduction => "j_2 Sq^4 rho_2 beta_U(1)",
        }
    }
}

fn topological_rule(t: i64, r: u32) -> Option<Rule> {
    match ((-t).rem_euclid(8), r) {
        (0, 2) => Some(Rule::Sq2Reduction),
        (0, 5) => Some(Rule::BocksteinSq4Reduction),
        (1, 2) => Some(Rule::Sq2),
        (2, 3) => Some(Rule::BocksteinSq2),
        _ => None,
    }
}

/// The formula for d_r out of row t, if one is known.
pub(crate) fn identify(variant: Variant, t: i64, r: u32) -> Option<Rule> {
    match variant {
        Variant::Topological => topological_rule(t, r),
        Variant::Differential => {
            let target = t - r as i64 + 1;
            if t > 0 {
                // first quadrant: same as topological, as long as we stay there
                return if target > 0 { topological_rule(t, r) } else { None };
            }
            if t == 0 {
                return None;
            }
            match ((-t).rem_euclid(8), r) {
                (1, 2) => Some(Rule::Sq2),
                (2, 2) => Some(Rule::IncludeSq2),
                (3, 5) | (7, 5) => Some(Rule::IncludeSq4Reduction),
                _ => None,
            }
        }
    }
}

/// d_r on E_2 generators: `target` has one row per E_2 generator of the
/// target; `test` (U(1) targets only) is the same map read in H^s(Z/2)
/// before applying j.
pub(crate) struct Evaluation {
    pub target: IntMatrix,
    pub test: Option<IntMatrix>,
}

fn to_int(m: &Mat, rows: usize, cols: usize) -> IntMatrix {
    if rows == 0 || cols == 0 {
        return IntMatrix::zeros(rows, cols);
    }
    IntMatrix::from_rows(rows, cols, m.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect())
}

fn mul2(a: &Mat, b: &Mat, b_cols: usize) -> Mat {
    f2::mat_mul(a, b, b_cols)
}

fn need<T>(x: Option<T>, what: String) -> Result<T, String> {
    x.ok_or_else(|| format!("{what} is not supplied by the presentation"))
}

fn sq(p: &CohomologyPresentation, i: u32, d: u32) -> Result<Mat, String> {
    need(p.sq_map(i, d), format!("Sq^{i} on H^{d}(Z/2)"))
}

fn reduction(p: &CohomologyPresentation, d: u32) -> Result<Mat, String> {
    need(p.reduction_map(d), format!("rho_2 on H^{d}(Z)"))
}

fn bockstein(p: &CohomologyPresentation, d: u32) -> Result<IntMatrix, String> {
    let b = need(p.bockstein_map(d), format!("beta_2 on H^{d}(Z/2)"))?;
    Ok(IntMatrix::from_i64(p.integral(d + 1).rank(), p.mod2_dim(d), &b))
}

/// Rows of beta_2 : H^d(Z/2) -> H^{d+1}(Z) that belong to torsion generators.
fn bockstein_torsion(p: &CohomologyPresentation, d: u32) -> Result<IntMatrix, String> {
    let full = bockstein(p, d)?;
    let g = p.integral(d + 1);
    let rows: Vec<_> = full.data[g.free..].to_vec();
    Ok(IntMatrix::from_rows(g.torsion.len(), full.cols, rows))
}

pub(crate) fn evaluate(p: &CohomologyPresentation, rule: Rule, s: u32) -> Result<Evaluation, String> {
    let m2 = |d: u32| p.mod2_dim(d);
    let rank = |d: u32| p.integral(d).rank();
    let ev = match rule {
        Rule::Sq2Reduction => {
            let m = mul2(&sq(p, 2, s)?, &reduction(p, s)?, rank(s));
            Evaluation { target: to_int(&m, m2(s + 2), rank(s)), test: None }
        }
        Rule::Sq2 => Evaluation { target: to_int(&sq(p, 2, s)?, m2(s + 2), m2(s)), test: None },
        Rule::BocksteinSq2 => {
            let a = to_int(&sq(p, 2, s)?, m2(s + 2), m2(s));
            Evaluation { target: bockstein(p, s + 2)?.mul(&a), test: None }
        }
        Rule::BocksteinSq4Reduction => {
            let m = mul2(&sq(p, 4, s)?, &reduction(p, s)?, rank(s));
            let a = to_int(&m, m2(s + 4), rank(s));
            Evaluation { target: bockstein(p, s + 4)?.mul(&a), test: None }
        }
        Rule::IncludeSq2 => {
            let a = to_int(&sq(p, 2, s)?, m2(s + 2), m2(s));
            Evaluation { target: bockstein_torsion(p, s + 2)?.mul(&a), test: Some(a) }
        }
        Rule::IncludeSq4Reduction => {
            // source coordinates are the torsion generators of H^{s+1}(Z)
            let g = p.integral(s + 1);
            let red = reduction(p, s + 1)?;
            let red_t: Mat = red.iter().map(|row| row[g.free..].to_vec()).collect();
            let m = mul2(&sq(p, 4, s + 1)?, &red_t, g.torsion.len());
            let a = to_int(&m, m2(s + 5), g.torsion.len());
            Evaluation { target: bockstein_torsion(p, s + 5)?.mul(&a), test: Some(a) }
        }
    };
    Ok(ev)
}

/// Row kinds a rule expects at its two ends, as a sanity check.
pub(crate) fn expected_kinds(rule: Rule) -> (RowKind, RowKind) {
    match rule {
        Rule::Sq2Reduction => (RowKind::Integral, RowKind::Mod2),
        Rule::Sq2 => (RowKind::Mod2, RowKind::Mod2),
        Rule::BocksteinSq2 | Rule::BocksteinSq4Reduction => (
            if rule == Rule::BocksteinSq2 { RowKind::Mod2 } else { RowKind::Integral },
            RowKind::Integral,
        ),
        Rule::IncludeSq2 => (RowKind::Mod2, RowKind::Circle),
        Rule::IncludeSq4Reduction => (RowKind::Circle, RowKind::Circle),
    }
}

/// Reduces a matrix into a mod-2 target so that recorded matrices are canonical.
pub(crate) fn canonical(m: &IntMatrix, mod2: bool) -> Vec<Vec<String>> {
    m.data
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| if mod2 { x.mod_floor(&2.into()).to_string() } else { x.to_string() })
                .collect()
        })
        .collect()
}
