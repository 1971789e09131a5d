//! p-primary part of d_{4r(p-1)+1} (d_{8r+1} at p = 2).
//!
//! Topological: x divisible by p^{2r-1} goes to beta_p P^{2r}(x / p^{2r-1})
//! times a unit of Z/p that nobody has pinned down. Differential: the operand
//! is beta_U(1)(x) one degree up and the result passes through j_p. Excess
//! vanishing is unconditional; every nonzero answer is flagged because the
//! unit was set to 1.

use serde::Serialize;

use super::{AhssError, Variant};
use crate::exact::lattice::{contains, IntVec};
use crate::presentation::CohomologyPresentation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OddPrimaryOutcome {
    ZeroByExcess { differential: u32, operation: String, operand_degree: u32 },
    Zero { differential: u32, operation: String, reason: String },
    NonzeroUnitAmbiguous { differential: u32, operation: String, degree: u32, image: Vec<i64> },
    Unsupported { differential: u32, reason: String },
}

impl OddPrimaryOutcome {
    pub fn is_zero(&self) -> bool {
        matches!(self, OddPrimaryOutcome::ZeroByExcess { .. } | OddPrimaryOutcome::Zero { .. })
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn mat_vec_mod(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter().map(|row| row.iter().zip(v).fold(0, |acc, (a, b)| (acc + a * b) % p)).collect()
}

/// Whether v lies in span(gens) + p Z^n.
fn in_span_mod(v: &[u64], gens: &[Vec<u64>], p: u64) -> bool {
    let n = v.len();
    let mut all: Vec<IntVec> = gens.iter().map(|g| g.iter().map(|&x| x.into()).collect()).collect();
    for i in 0..n {
        let mut e: IntVec = vec![0.into(); n];
        e[i] = p.into();
        all.push(e);
    }
    let target: IntVec = v.iter().map(|&x| x.into()).collect();
    contains(n, &all, &target)
}

pub fn odd_primary_differential(
    pres: &CohomologyPresentation,
    variant: Variant,
    prime: u64,
    r: u32,
    s: u32,
    class: &[i64],
) -> Result<OddPrimaryOutcome, AhssError> {
    if !is_prime(prime) {
        return Err(AhssError::Validation(format!("{prime} is not prime")));
    }
    if r == 0 {
        return Err(AhssError::Validation("r must be at least 1".into()));
    }
    let (differential, shift, need, operation) = if prime == 2 {
        (8 * r + 1, 8 * r, 4 * r - 1, format!("Sq^{}", 8 * r))
    } else {
        let shift = 4 * r * (prime as u32 - 1);
        (shift + 1, shift, 2 * r - 1, format!("P^{}_{prime}", 2 * r))
    };
    let deg = match variant {
        Variant::Topological => s,
        Variant::Differential => s + 1,
    };
    let excess = if prime == 2 { 8 * r > deg } else { 4 * r > deg };
    if excess {
        return Ok(OddPrimaryOutcome::ZeroByExcess { differential, operation, operand_degree: deg });
    }
    let unsupported = |reason: String| Ok(OddPrimaryOutcome::Unsupported { differential, reason });
    if class.len() != pres.integral(deg).rank() {
        return Err(AhssError::Validation(format!("class has {} coordinates, H^{deg} has {}", class.len(), pres.integral(deg).rank())));
    }
    let Some(ann) = pres.divisibility.iter().find(|a| a.degree == deg && a.prime == prime && a.class == class) else {
        return unsupported(format!("no divisibility annotation for this class in degree {deg}"));
    };
    if ann.exponent < need {
        return unsupported(format!("class is divisible by {prime}^{} only; the rule needs {prime}^{need}", ann.exponent));
    }
    let y = &ann.quotient_reduction;
    let target = deg + shift;
    let image: Vec<u64> = if prime == 2 {
        let Some(sq) = pres.sq_map(shift, deg) else {
            return unsupported(format!("{operation} on H^{deg}(Z/2) is not supplied"));
        };
        sq.iter().map(|row| row.iter().zip(y).fold(0, |acc, (&a, &b)| (acc + a as u64 * b) % 2)).collect()
    } else {
        let Some(odd) = pres.odd_primary(prime) else {
            return unsupported(format!("no mod-{prime} data"));
        };
        let Some(m) = odd.power.get(&(2 * r).to_string()).and_then(|per| per.get(&deg.to_string())) else {
            return unsupported(format!("{operation} on degree {deg} is not supplied"));
        };
        mat_vec_mod(m, y, prime)
    };
    if image.iter().all(|&x| x == 0) {
        return Ok(OddPrimaryOutcome::Zero { differential, operation: operation.clone(), reason: format!("{operation} of the quotient vanishes") });
    }
    match variant {
        Variant::Topological => {
            let h = pres.integral(target + 1);
            let b: Vec<Vec<i64>> = if !h.torsion.iter().any(|t| t % prime == 0) {
                vec![vec![0; image.len()]; h.rank()]
            } else if prime == 2 {
                match pres.bockstein_map(target) {
                    Some(b) => b,
                    None => return unsupported(format!("beta_2 on H^{target}(Z/2) is not supplied")),
                }
            } else {
                match pres.odd_primary(prime).and_then(|o| o.bockstein.get(&target.to_string())) {
                    Some(b) => b.clone(),
                    None => return unsupported(format!("beta_{prime} on H^{target}(Z/{prime}) is not supplied")),
                }
            };
            let out: Vec<i64> = b.iter().map(|row| row.iter().zip(&image).map(|(&a, &x)| a * x as i64).sum()).collect();
            let vanishes = out.iter().enumerate().all(|(j, &x)| {
                let order = h.order(j) as i64;
                if order == 0 {
                    x == 0
                } else {
                    x.rem_euclid(order) == 0
                }
            });
            if vanishes {
                return Ok(OddPrimaryOutcome::Zero { differential, operation, reason: format!("beta_{prime} kills the image") });
            }
            Ok(OddPrimaryOutcome::NonzeroUnitAmbiguous { differential, operation, degree: target + 1, image: out })
        }
        Variant::Differential => {
            let h = pres.integral(target);
            let kernel: Vec<Vec<u64>> = if h.torsion.is_empty() {
                Vec::new()
            } else if prime == 2 {
                match pres.reduction_map(target) {
                    Some(red) => (h.free..h.rank()).map(|j| red.iter().map(|row| row[j] as u64).collect()).collect(),
                    None => return unsupported(format!("rho_2 on H^{target}(Z) is not supplied")),
                }
            } else {
                match pres.odd_primary(prime).and_then(|o| o.reduction.get(&target.to_string())) {
                    Some(red) => (h.free..h.rank()).map(|j| red.iter().map(|row| row[j]).collect()).collect(),
                    None => return unsupported(format!("rho_{prime} on H^{target}(Z) is not supplied")),
                }
            };
            if in_span_mod(&image, &kernel, prime) {
                return Ok(OddPrimaryOutcome::Zero { differential, operation, reason: format!("j_{prime} kills reductions of torsion classes") });
            }
            Ok(OddPrimaryOutcome::NonzeroUnitAmbiguous {
                differential,
                operation,
                degree: target,
                image: image.iter().map(|&x| x as i64).collect(),
            })
        }
    }
}
