//! Atiyah-Hirzebruch pages for KO and for its differential refinement.
//!
//! Entries are subquotients Z_r / B_r of a lattice whose coordinates are the
//! generators of the E_2 entry; torsion coefficients enter as relations.
//! Differentials are only ever evaluated through an identified formula.
//! Anything else is either forced to vanish (lacunarity, or one of the two
//! algebraic rules below) or recorded as unsupported, which marks both ends
//! of the map as undetermined.
//!
//! Rows of the differential variant follow the picture of its E_2 page:
//! for t > 0 the integral KO rows, at (0,0) the form slot, and for t < 0 the
//! flat rows, i = -t:
//!
//! | i mod 8 | coefficient |
//! |---------|-------------|
//! | 1       | Z/2 (eta)   |
//! | 2       | Z/2 (eta^2) |
//! | 3       | U(1) (alpha)|
//! | 7       | U(1) (beta) |
//!
//! A U(1) entry H^s(X;U(1)) is stored as T^{b_s} plus the torsion of
//! H^{s+1}(X;Z) (its Bockstein image). Maps into it from mod-2 rows go
//! through j : H^s(Z/2) -> H^s(U(1)), whose kernel is the reduction of the
//! torsion of H^s(Z); a "test space" in H^s(Z/2) tracks this.

mod engine;
pub mod forms;
pub mod odd;
pub mod render;
mod rules;

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::exact::lattice::{quotient_invariants, solve, unit_vec, IntVec};
use crate::group::GroupDescriptor;
use crate::ko::KoBasis;
use crate::presentation::{CohomologyPresentation, PresentationError};

pub use engine::{compute, compute_for_degree, converge, window_for_degree, Convergence, Piece, SpectralSequence};
pub use forms::{d4k_on_form_slot, ko_hat_of_sphere, FormCondition, FormSlot, FormSlotState, KoHatSphere, PeriodValue};
pub use odd::{odd_primary_differential, OddPrimaryOutcome};
pub use rules::Rule;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AhssError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("invalid request: {0}")]
    Validation(String),
    #[error("engine invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Topological,
    Differential,
}

impl std::str::FromStr for Variant {
    type Err = AhssError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "topological" | "top" => Ok(Variant::Topological),
            "differential" | "diff" => Ok(Variant::Differential),
            _ => Err(AhssError::Validation(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Zero,
    Integral,
    Mod2,
    Circle,
    Forms,
}

/// Coefficient group of row t, with the name of its generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCoefficient {
    pub kind: RowKind,
    pub label: String,
}

fn coefficient(kind: RowKind, b: KoBasis) -> RowCoefficient {
    RowCoefficient { kind, label: b.label() }
}

/// Topological row t carries KO^t(pt) = pi_{-t}(KO).
pub fn topological_row(t: i64) -> RowCoefficient {
    let (k, m) = (-t).div_mod_floor(&8);
    match m {
        0 => coefficient(RowKind::Integral, KoBasis::Beta(k)),
        1 => coefficient(RowKind::Mod2, KoBasis::EtaBeta(k)),
        2 => coefficient(RowKind::Mod2, KoBasis::Eta2Beta(k)),
        4 => coefficient(RowKind::Integral, KoBasis::AlphaBeta(k)),
        _ => RowCoefficient { kind: RowKind::Zero, label: String::new() },
    }
}

pub fn differential_row(s: u32, t: i64) -> RowCoefficient {
    if t > 0 {
        return topological_row(t);
    }
    if t == 0 {
        return if s == 0 {
            RowCoefficient { kind: RowKind::Forms, label: "closed forms".into() }
        } else {
            RowCoefficient { kind: RowKind::Zero, label: String::new() }
        };
    }
    let (k, m) = (-t).div_mod_floor(&8);
    match m {
        1 => coefficient(RowKind::Mod2, KoBasis::EtaBeta(k)),
        2 => coefficient(RowKind::Mod2, KoBasis::Eta2Beta(k)),
        3 => coefficient(RowKind::Circle, KoBasis::AlphaBeta(k)),
        7 => coefficient(RowKind::Circle, KoBasis::Beta(k + 1)),
        _ => RowCoefficient { kind: RowKind::Zero, label: String::new() },
    }
}

pub fn row_coefficient(variant: Variant, s: u32, t: i64) -> RowCoefficient {
    match variant {
        Variant::Topological => topological_row(t),
        Variant::Differential => differential_row(s, t),
    }
}

/// For U(1) entries: the subspace of H^s(Z/2) already known to die under j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TestSpace {
    pub dim: usize,
    pub boundaries: Vec<IntVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub s: u32,
    pub t: i64,
    pub kind: RowKind,
    pub coefficient: String,
    pub group: GroupDescriptor,
    /// Representatives of the current generators, written in E_2 generators.
    pub generators: Vec<String>,
    pub determined: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Set once a finite image has landed in the torus of a U(1) entry.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub torus_touched: bool,
    #[serde(skip)]
    pub(crate) basis: Vec<String>,
    #[serde(skip)]
    pub(crate) cycles: Vec<IntVec>,
    #[serde(skip)]
    pub(crate) boundaries: Vec<IntVec>,
    #[serde(skip)]
    pub(crate) test: Option<TestSpace>,
}

impl Entry {
    pub fn ambient(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_zero()
    }

    fn undetermine(&mut self, why: String) {
        self.determined = false;
        if !self.notes.contains(&why) {
            self.notes.push(why);
        }
    }

    /// Recomputes the group and generator names from cycles and boundaries.
    pub(crate) fn refresh(&mut self) -> Result<(), AhssError> {
        let n = self.ambient();
        let mut coords = Vec::with_capacity(self.boundaries.len());
        for b in &self.boundaries {
            let c = solve(n, &self.cycles, b).ok_or_else(|| {
                AhssError::Invariant(format!("boundary at ({},{}) is not a cycle (d o d != 0)", self.s, self.t))
            })?;
            coords.push(c);
        }
        let (free, torsion) = quotient_invariants(self.cycles.len(), &coords);
        self.group.free = free;
        self.group.torsion = torsion.iter().map(|x| x.to_u64().expect("torsion order fits in u64")).collect();
        self.group.torsion.sort_unstable();
        self.generators = self.cycles.iter().map(|z| render_vector(&self.basis, z)).collect();
        if self.group.circles > 0 {
            self.generators.push(format!("T^{}*{}", self.group.circles, self.coefficient));
        }
        Ok(())
    }
}

fn render_vector(basis: &[String], v: &[num_bigint::BigInt]) -> String {
    let mut parts = Vec::new();
    for (b, c) in basis.iter().zip(v) {
        let c = c.to_i64().unwrap_or(i64::MAX);
        match c {
            0 => {}
            1 => parts.push(b.clone()),
            -1 => parts.push(format!("-{b}")),
            c => parts.push(format!("{c}{b}")),
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn integral_labels(p: &CohomologyPresentation, d: u32) -> Vec<String> {
    let g = p.integral(d);
    (0..g.rank()).map(|j| g.labels.get(j).cloned().unwrap_or_else(|| format!("g{d}.{j}"))).collect()
}

fn tagged(base: &str, coeff: &str) -> String {
    if coeff == "1" || coeff.is_empty() {
        base.to_string()
    } else if base == "1" {
        coeff.to_string()
    } else {
        format!("{base}*{coeff}")
    }
}

/// The E_2 entry at (s,t). The form slot is not an entry; it lives in the
/// page's `form_slot`.
pub fn e2_entry(p: &CohomologyPresentation, variant: Variant, s: u32, t: i64) -> Entry {
    let row = row_coefficient(variant, s, t);
    let mut relations: Vec<IntVec> = Vec::new();
    let mut circles = 0;
    let mut test = None;
    let basis: Vec<String> = match row.kind {
        RowKind::Zero | RowKind::Forms => Vec::new(),
        RowKind::Integral => {
            let g = p.integral(s);
            for (j, &n) in g.torsion.iter().enumerate() {
                let mut v = unit_vec(g.rank(), g.free + j);
                v[g.free + j] = n.into();
                relations.push(v);
            }
            integral_labels(p, s).iter().map(|b| tagged(b, &row.label)).collect()
        }
        RowKind::Mod2 => {
            let n = p.mod2_dim(s);
            for i in 0..n {
                let mut v = unit_vec(n, i);
                v[i] = 2.into();
                relations.push(v);
            }
            p.mod2_basis(s).iter().map(|b| tagged(b, &row.label)).collect()
        }
        RowKind::Circle => {
            let g = p.integral(s + 1);
            let nt = g.torsion.len();
            for (j, &n) in g.torsion.iter().enumerate() {
                let mut v = unit_vec(nt, j);
                v[j] = n.into();
                relations.push(v);
            }
            circles = p.betti(s);
            // ker j = rho_2 of the torsion of H^s(Z)
            let dim = p.mod2_dim(s);
            let mut tb: Vec<IntVec> = (0..dim)
                .map(|i| {
                    let mut v = unit_vec(dim, i);
                    v[i] = 2.into();
                    v
                })
                .collect();
            let h = p.integral(s);
            if let Some(red) = p.reduction_map(s) {
                for j in h.free..h.rank() {
                    tb.push((0..dim).map(|i| red[i][j].into()).collect());
                }
            }
            test = Some(TestSpace { dim, boundaries: tb });
            let lab = integral_labels(p, s + 1);
            lab[g.free..].iter().map(|b| tagged(&format!("lift({b})"), &row.label)).collect()
        }
    };
    let n = basis.len();
    let mut e = Entry {
        s,
        t,
        kind: row.kind,
        coefficient: row.label.clone(),
        group: GroupDescriptor { circles, ..GroupDescriptor::zero() },
        generators: Vec::new(),
        determined: true,
        notes: Vec::new(),
        torus_touched: false,
        basis,
        cycles: (0..n).map(|i| unit_vec(n, i)).collect(),
        boundaries: relations,
        test,
    };
    e.refresh().expect("relations are cycles on E_2");
    e
}

/// One applied (or refused) differential d_r : E_r^{s,t} -> E_r^{s+r,t-r+1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferentialRecord {
    pub r: u32,
    pub source: (u32, i64),
    pub target: (u32, i64),
    pub rule: String,
    pub status: Status,
    /// Matrix in E_2 generators, rows indexed by target generators.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Evaluated { zero: bool },
    ZeroByLacunarity,
    ZeroByAlgebra { reason: String },
    Unsupported { reason: String },
}

impl Status {
    pub fn is_unsupported(&self) -> bool {
        matches!(self, Status::Unsupported { .. })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Status::Evaluated { zero: true } | Status::ZeroByLacunarity | Status::ZeroByAlgebra { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Status::Evaluated { zero: true } => "evaluated-zero",
            Status::Evaluated { zero: false } => "evaluated",
            Status::ZeroByLacunarity => "zero-by-lacunarity",
            Status::ZeroByAlgebra { .. } => "zero-by-algebra",
            Status::Unsupported { .. } => "unsupported",
        }
    }
}

fn entries_as_list<S: Serializer>(m: &BTreeMap<(u32, i64), Entry>, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(m.values().filter(|e| !e.is_zero() || !e.determined))
}

/// E_r for one r. Only rows inside the window are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Page {
    pub r: u32,
    pub variant: Variant,
    pub space: String,
    pub dimension: u32,
    pub rows: (i64, i64),
    #[serde(serialize_with = "entries_as_list")]
    pub entries: BTreeMap<(u32, i64), Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form_slot: Option<FormSlotState>,
    /// The d_r leaving this page.
    pub differentials: Vec<DifferentialRecord>,
}

impl Page {
    pub fn entry(&self, s: u32, t: i64) -> Option<&Entry> {
        self.entries.get(&(s, t))
    }

    pub fn group(&self, s: u32, t: i64) -> Option<&GroupDescriptor> {
        self.entry(s, t).map(|e| &e.group)
    }

    pub fn in_window(&self, t: i64) -> bool {
        self.rows.0 <= t && t <= self.rows.1
    }
}

fn e2_page(p: &CohomologyPresentation, variant: Variant, rows: (i64, i64)) -> Result<Page, AhssError> {
    if rows.0 > rows.1 {
        return Err(AhssError::Validation(format!("empty row window {}..={}", rows.0, rows.1)));
    }
    let dim = p.top_degree();
    let mut entries = BTreeMap::new();
    for s in 0..=dim {
        for t in rows.0..=rows.1 {
            if variant == Variant::Differential && s == 0 && t == 0 {
                continue;
            }
            entries.insert((s, t), e2_entry(p, variant, s, t));
        }
    }
    let form_slot = (variant == Variant::Differential && rows.0 <= 0 && 0 <= rows.1).then(|| FormSlotState::new(p));
    Ok(Page { r: 2, variant, space: p.name.clone(), dimension: dim, rows, entries, form_slot, differentials: Vec::new() })
}

pub fn e2_topological(p: &CohomologyPresentation, rows: (i64, i64)) -> Result<Page, AhssError> {
    e2_page(p, Variant::Topological, rows)
}

pub fn e2_differential(p: &CohomologyPresentation, rows: (i64, i64)) -> Result<Page, AhssError> {
    e2_page(p, Variant::Differential, rows)
}

pub const DEFAULT_TOPOLOGICAL_ROWS: (i64, i64) = (-8, 8);

pub fn default_differential_rows(dim: u32) -> (i64, i64) {
    (-(dim as i64) - 1, 8)
}

pub fn default_rows(variant: Variant, dim: u32) -> (i64, i64) {
    match variant {
        Variant::Topological => DEFAULT_TOPOLOGICAL_ROWS,
        Variant::Differential => default_differential_rows(dim),
    }
}

/// Reduced KO(S^n) from the period-8 pattern, for comparison.
pub fn sphere_table(n: u32) -> GroupDescriptor {
    match (n as i64 - 1).rem_euclid(8) {
        0 | 1 => GroupDescriptor::cyclic(2),
        3 | 7 => GroupDescriptor::integers(),
        _ => GroupDescriptor::zero(),
    }
}

/// Reduced KO^0(S^n), computed by the engine on the reduced sphere and
/// checked against the period-8 table.
pub fn ko_of_sphere(n: u32) -> Result<GroupDescriptor, AhssError> {
    if !(1..=32).contains(&n) {
        return Err(AhssError::Validation(format!("sphere dimension {n} outside 1..=32")));
    }
    let p = crate::presentation::builtin(&format!("S{n}"))?.reduced()?;
    let ss = compute(&p, Variant::Topological, (-(n as i64) - 1, 1))?;
    let mut g = match converge(&ss, 0) {
        Convergence::Assembled { group, .. } => group,
        other => return Err(AhssError::Invariant(format!("S{n} did not converge: {other:?}"))),
    };
    g.labels.clear();
    let expected = sphere_table(n);
    if !g.same_group(&expected) {
        return Err(AhssError::Invariant(format!("engine gives {g} for S{n}, table says {expected}")));
    }
    Ok(g)
}

#[cfg(test)]
mod tests;
