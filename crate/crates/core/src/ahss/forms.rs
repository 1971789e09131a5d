//! The form slot at (0,0) of the differential page, and the d_4k that leave it.
//!
//! Closed forms are seen only through their periods on a basis of integral
//! cycles. d_4k sends a degree-4k component to its periods mod Z (4k = 0 mod 8)
//! or half its periods mod Z (4k = 4 mod 8), landing in the torus of the
//! U(1) entry at (4k, 1-4k).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{converge, compute, AhssError, Convergence, Variant};
use crate::exact::lattice::{contains, IntVec};
use crate::exact::Rational;
use crate::group::GroupDescriptor;
use crate::presentation::CohomologyPresentation;

/// What the surviving forms of one degree look like on E_infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormCondition {
    /// d_4k not reached yet
    Pending,
    /// no cohomology in this degree, only exact forms
    Exact,
    /// periods must be integers
    Integral,
    /// periods must be even integers
    EvenIntegral,
    Indeterminate { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormComponent {
    pub degree: u32,
    pub betti: usize,
    pub condition: FormCondition,
    /// Set when finite classes had already reached the target torus, so the
    /// condition is sufficient but may not be necessary.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub conservative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormSlotState {
    /// Rank of the constant (degree-0) part.
    pub constant: usize,
    pub components: Vec<FormComponent>,
}

impl FormSlotState {
    pub fn new(p: &CohomologyPresentation) -> FormSlotState {
        let components = (1..)
            .map(|k| 4 * k)
            .take_while(|&d| d <= p.top_degree())
            .map(|d| {
                let betti = p.betti(d);
                let condition = if betti == 0 { FormCondition::Exact } else { FormCondition::Pending };
                FormComponent { degree: d, betti, condition, conservative: false }
            })
            .collect();
        FormSlotState { constant: p.betti(0), components }
    }

    pub fn component(&self, degree: u32) -> Option<&FormComponent> {
        self.components.iter().find(|c| c.degree == degree)
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if self.constant > 0 {
            parts.push(format!("Z^{} constants", self.constant));
        }
        for c in &self.components {
            let what = match &c.condition {
                FormCondition::Pending => "pending".to_string(),
                FormCondition::Exact => "exact only".to_string(),
                FormCondition::Integral => "integral periods".to_string(),
                FormCondition::EvenIntegral => "even periods".to_string(),
                FormCondition::Indeterminate { reason } => format!("indeterminate ({reason})"),
            };
            let flag = if c.conservative { ", conservative" } else { "" };
            parts.push(format!("deg {}: {what}{flag}", c.degree));
        }
        parts.join("; ")
    }
}

/// Concrete form data: periods of each degree-4k component against a basis
/// of integral 4k-cycles, plus the constant part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormSlot {
    pub constant: i64,
    pub periods: BTreeMap<u32, Vec<Rational>>,
}

impl FormSlot {
    pub fn new(constant: i64) -> FormSlot {
        FormSlot { constant, periods: BTreeMap::new() }
    }

    pub fn with(mut self, degree: u32, periods: Vec<Rational>) -> FormSlot {
        self.periods.insert(degree, periods);
        self
    }

    /// Period vectors must have length b_4k in every degree that is given.
    pub fn check_against(&self, p: &CohomologyPresentation) -> Result<(), AhssError> {
        for (&d, v) in &self.periods {
            if d % 4 != 0 || d == 0 {
                return Err(AhssError::Validation(format!("form degree {d} is not a positive multiple of 4")));
            }
            if v.len() != p.betti(d) {
                return Err(AhssError::Validation(format!("degree {d}: {} periods, but b_{d} = {}", v.len(), p.betti(d))));
            }
        }
        Ok(())
    }
}

/// d_4k of a form slot: an element of (Q/Z)^{b_4k}, each value in [0,1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodValue {
    pub degree: u32,
    /// 1 when 4k = 0 mod 8, 1/2 when 4k = 4 mod 8
    pub scale: Rational,
    pub values: Vec<Rational>,
}

impl PeriodValue {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Zero in the quotient of (Q/Z)^b by the subgroup the given elements
    /// generate (images that reached the torus earlier).
    pub fn vanishes_modulo(&self, incoming: &[Vec<Rational>]) -> bool {
        if self.is_zero() {
            return true;
        }
        let mut den = BigInt::one();
        for v in self.values.iter().chain(incoming.iter().flatten()) {
            den = num_integer::lcm(den, v.denom().clone());
        }
        let b = self.values.len();
        let scale = |v: &Rational| -> BigInt { (v.numer() * &den) / v.denom() };
        let mut gens: Vec<IntVec> = incoming.iter().map(|g| g.iter().map(scale).collect()).collect();
        for i in 0..b {
            let mut e = vec![BigInt::zero(); b];
            e[i] = den.clone();
            gens.push(e);
        }
        let target: IntVec = self.values.iter().map(scale).collect();
        contains(b, &gens, &target)
    }
}

pub fn d4k_on_form_slot(slot: &FormSlot, k: u32) -> Result<PeriodValue, AhssError> {
    if k == 0 {
        return Err(AhssError::Validation("d_4k needs k >= 1".into()));
    }
    let degree = 4 * k;
    let periods = slot
        .periods
        .get(&degree)
        .ok_or_else(|| AhssError::Validation(format!("no periods given in degree {degree}")))?;
    let scale = if k.is_multiple_of(2) { Rational::one() } else { Rational::new(1, 2) };
    let values = periods.iter().map(|w| (w.clone() * scale.clone()).fract_mod_one()).collect();
    Ok(PeriodValue { degree, scale, values })
}

/// Reduced differential KO^0 of S^n as a structured record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoHatSphere {
    pub n: u32,
    /// Volume-form generator is `multiplier * dvol`; None when H^n carries no forms.
    pub multiplier: Option<u32>,
    /// Degrees 4k-1 of the summands d Omega^{4k-1}.
    pub exact_summands: Vec<u32>,
    /// Flat part, from E_infinity^{n,-n}.
    pub torsion: GroupDescriptor,
    pub conservative: bool,
}

impl KoHatSphere {
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if let Some(m) = self.multiplier {
            parts.push(if m == 1 { "<dvol>_Z".to_string() } else { format!("<{m} dvol>_Z") });
        }
        if !self.torsion.is_zero() {
            parts.push(self.torsion.to_string());
        }
        for d in &self.exact_summands {
            parts.push(format!("d Omega^{d}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub fn ko_hat_of_sphere(n: u32) -> Result<KoHatSphere, AhssError> {
    if n == 0 {
        return Err(AhssError::Validation("sphere dimension must be at least 1".into()));
    }
    let p = crate::presentation::builtin(&format!("S{n}"))?.reduced()?;
    let ss = compute(&p, Variant::Differential, (-(n as i64) - 1, 1))?;
    let (pieces, slot) = match converge(&ss, 0) {
        Convergence::Assembled { pieces, form_slot, .. } | Convergence::ExtensionUnresolved { pieces, form_slot, .. } => {
            (pieces, form_slot.ok_or_else(|| AhssError::Invariant("form slot missing".into()))?)
        }
        Convergence::Blocked { blockers, .. } => {
            return Err(AhssError::Invariant(format!("S{n} blocked: {}", blockers.join("; "))))
        }
    };
    let top = slot.component(n);
    let multiplier = match top.map(|c| &c.condition) {
        Some(FormCondition::Integral) => Some(1),
        Some(FormCondition::EvenIntegral) => Some(2),
        Some(FormCondition::Exact) | None => None,
        Some(other) => return Err(AhssError::Invariant(format!("S{n} top forms: {other:?}"))),
    };
    let mut torsion = pieces.iter().fold(GroupDescriptor::zero(), |acc, p| acc.direct_sum(&p.group));
    torsion.labels.clear();
    Ok(KoHatSphere {
        n,
        multiplier,
        exact_summands: slot.components.iter().map(|c| c.degree - 1).collect(),
        torsion,
        conservative: slot.components.iter().any(|c| c.conservative),
    })
}
