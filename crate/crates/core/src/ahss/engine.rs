use serde::Serialize;

use super::forms::{FormCondition, FormSlotState};
use super::rules::{self, canonical, evaluate, identify};
use super::{e2_entry, e2_page, AhssError, DifferentialRecord, Entry, Page, RowKind, Status, Variant};
use crate::exact::lattice::{contains, preimage, span_basis, IntMatrix, IntVec};
use crate::group::GroupDescriptor;
use crate::presentation::CohomologyPresentation;

/// All pages E_2, ..., E_{dim+1} = E_infinity over one row window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralSequence {
    pub space: String,
    pub variant: Variant,
    pub dimension: u32,
    pub rows: (i64, i64),
    pub pages: Vec<Page>,
}

impl SpectralSequence {
    pub fn infinity(&self) -> &Page {
        self.pages.last().expect("at least E_2")
    }

    pub fn page(&self, r: u32) -> Option<&Page> {
        self.pages.iter().find(|p| p.r == r)
    }

    pub fn records(&self) -> impl Iterator<Item = &DifferentialRecord> {
        self.pages.iter().flat_map(|p| p.differentials.iter())
    }
}

pub fn compute(p: &CohomologyPresentation, variant: Variant, rows: (i64, i64)) -> Result<SpectralSequence, AhssError> {
    let mut pages = vec![e2_page(p, variant, rows)?];
    let dim = p.top_degree();
    for _ in 2..=dim {
        let (next, log) = step(p, pages.last().unwrap())?;
        pages.last_mut().unwrap().differentials = log;
        pages.push(next);
    }
    Ok(SpectralSequence { space: p.name.clone(), variant, dimension: dim, rows, pages })
}

/// A window wide enough that every entry of total degree n is decided by
/// data inside it: edge effects travel less than `dim` rows.
pub fn window_for_degree(dim: u32, n: i64) -> (i64, i64) {
    let d = dim as i64;
    (n - 2 * d - 1, n + d + 1)
}

pub fn compute_for_degree(p: &CohomologyPresentation, variant: Variant, n: i64) -> Result<SpectralSequence, AhssError> {
    compute(p, variant, window_for_degree(p.top_degree(), n))
}

struct Log<'a> {
    r: u32,
    out: &'a mut Vec<DifferentialRecord>,
}

impl Log<'_> {
    fn push(&mut self, source: (u32, i64), target: (u32, i64), rule: &str, status: Status, matrix: Option<Vec<Vec<String>>>) {
        self.out.push(DifferentialRecord { r: self.r, source, target, rule: rule.to_string(), status, matrix });
    }
}

fn unsupported(reason: impl Into<String>) -> Status {
    Status::Unsupported { reason: reason.into() }
}

fn algebra(reason: &str) -> Status {
    Status::ZeroByAlgebra { reason: reason.to_string() }
}

const BASEPOINT: &str = "classes pulled back from the basepoint are permanent cycles";
const RATIONAL: &str = "differentials are rationally zero and the target is torsion-free";

/// Applies every d_r of E_r; returns E_{r+1} and the log of d_r.
fn step(p: &CohomologyPresentation, page: &Page) -> Result<(Page, Vec<DifferentialRecord>), AhssError> {
    let r = page.r;
    let ri = r as i64;
    let variant = page.variant;
    let dim = page.dimension;
    let connected = p.is_connected();
    let mut next = page.clone();
    next.r = r + 1;
    next.differentials = Vec::new();
    let mut records = Vec::new();
    let mut log = Log { r, out: &mut records };
    let mut touched: Vec<(u32, i64)> = Vec::new();

    // sources above the window
    for (&(s, t), e) in &page.entries {
        if s >= r && t + ri - 1 > page.rows.1 && !e.is_zero() {
            let (ss, st) = (s - r, t + ri - 1);
            if !e2_entry(p, variant, ss, st).is_zero() && !(ss == 0 && connected) {
                next.entries.get_mut(&(s, t)).unwrap().undetermine(format!("d_{r} from ({ss},{st}) lies outside the row window"));
            }
        }
    }

    if let Some(slot) = &page.form_slot {
        form_slot_step(p, page, slot, &mut next, &mut log, &mut touched)?;
    }

    for (&(s, t), src) in &page.entries {
        let (ts, tt) = (s + r, t - ri + 1);
        if ts > dim || src.is_zero() {
            continue;
        }
        let key = ((s, t), (ts, tt));
        if tt < page.rows.0 {
            if e2_entry(p, variant, ts, tt).is_zero() {
                log.push(key.0, key.1, "", Status::ZeroByLacunarity, None);
            } else if s == 0 && connected {
                log.push(key.0, key.1, "", algebra(BASEPOINT), None);
            } else {
                log.push(key.0, key.1, "", unsupported("target lies outside the row window"), None);
                next.entries.get_mut(&(s, t)).unwrap().undetermine(format!("d_{r} leaves the row window"));
            }
            continue;
        }
        let tgt = &page.entries[&(ts, tt)];
        if tgt.is_zero() {
            log.push(key.0, key.1, "", Status::ZeroByLacunarity, None);
            continue;
        }
        if s == 0 && connected {
            log.push(key.0, key.1, "", algebra(BASEPOINT), None);
            continue;
        }
        if tgt.kind == RowKind::Integral && tgt.determined && tgt.group.is_torsion_free() {
            log.push(key.0, key.1, "", algebra(RATIONAL), None);
            continue;
        }
        let mark = |next: &mut Page, why: String| {
            next.entries.get_mut(&(s, t)).unwrap().undetermine(why.clone());
            next.entries.get_mut(&(ts, tt)).unwrap().undetermine(why);
        };
        let Some(rule) = identify(variant, t, r) else {
            log.push(key.0, key.1, "", unsupported(format!("no formula is known for d_{r} out of row {t}")), None);
            mark(&mut next, format!("d_{r} ({s},{t}) -> ({ts},{tt}) is not identified"));
            continue;
        };
        let (ks, kt) = rules::expected_kinds(rule);
        if (ks, kt) != (src.kind, tgt.kind) {
            return Err(AhssError::Invariant(format!("{} expects {ks:?} -> {kt:?} at ({s},{t})", rule.formula())));
        }
        if !src.determined || !tgt.determined {
            log.push(key.0, key.1, rule.formula(), unsupported("an end of the map is undetermined"), None);
            mark(&mut next, format!("d_{r} ({s},{t}) -> ({ts},{tt}) acts on an undetermined entry"));
            continue;
        }
        let ev = match evaluate(p, rule, s) {
            Ok(ev) => ev,
            Err(why) => {
                log.push(key.0, key.1, rule.formula(), unsupported(why.clone()), None);
                mark(&mut next, why);
                continue;
            }
        };
        let zero = apply(src, tgt, &ev, &mut next)?;
        let shown = ev.test.as_ref().unwrap_or(&ev.target);
        let mod2 = tgt.kind == RowKind::Mod2 || ev.test.is_some();
        log.push(key.0, key.1, rule.formula(), Status::Evaluated { zero }, Some(canonical(shown, mod2)));
        touched.push((s, t));
        touched.push((ts, tt));
    }
    for key in touched {
        next.entries.get_mut(&key).unwrap().refresh()?;
    }
    Ok((next, records))
}

/// Applies one evaluated differential; returns whether it vanished on E_r.
fn apply(src: &Entry, tgt: &Entry, ev: &rules::Evaluation, next: &mut Page) -> Result<bool, AhssError> {
    if src.cycles.is_empty() {
        return Ok(true);
    }
    let zm = IntMatrix::from_columns(src.ambient(), &src.cycles);
    let image = ev.target.mul(&zm);
    let test_image = ev.test.as_ref().map(|t| t.mul(&zm));
    let (kernel_map, kernel_rel, kernel_dim) = match (&test_image, &tgt.test) {
        (Some(ti), Some(ts)) => (ti, &ts.boundaries, ts.dim),
        (None, None) => (&image, &tgt.boundaries, tgt.ambient()),
        _ => return Err(AhssError::Invariant(format!("U(1) bookkeeping mismatch at ({},{})", tgt.s, tgt.t))),
    };
    let zero = kernel_map.columns().iter().all(|c| contains(kernel_dim, kernel_rel, c));
    if zero {
        return Ok(true);
    }
    let coeffs = preimage(kernel_map, kernel_rel);
    let new_cycles: Vec<IntVec> = coeffs.iter().map(|c| zm.mul_vec(c)).collect();
    next.entries.get_mut(&(src.s, src.t)).unwrap().cycles = span_basis(src.ambient(), &new_cycles);

    let t = next.entries.get_mut(&(tgt.s, tgt.t)).unwrap();
    let mut b = t.boundaries.clone();
    b.extend(image.columns());
    t.boundaries = span_basis(t.ambient(), &b);
    if let (Some(ti), Some(ts)) = (&test_image, t.test.as_mut()) {
        let mut tb = ts.boundaries.clone();
        tb.extend(ti.columns());
        ts.boundaries = span_basis(ts.dim, &tb);
        t.torus_touched = true;
    }
    Ok(false)
}

fn form_slot_step(
    p: &CohomologyPresentation,
    page: &Page,
    slot: &FormSlotState,
    next: &mut Page,
    log: &mut Log<'_>,
    touched: &mut Vec<(u32, i64)>,
) -> Result<(), AhssError> {
    let r = page.r;
    let (ts, tt) = (r, 1 - r as i64);
    if ts > page.dimension {
        return Ok(());
    }
    let target_zero = page.entry(ts, tt).map_or_else(|| e2_entry(p, page.variant, ts, tt).is_zero(), |e| e.is_zero());
    if !r.is_multiple_of(4) {
        if !target_zero {
            log.push((0, 0), (ts, tt), "", algebra("only d_4k act on the form slot"), None);
        }
        return Ok(());
    }
    let Some(ix) = slot.components.iter().position(|c| c.degree == r) else { return Ok(()) };
    let comp = &slot.components[ix];
    let new_slot = next.form_slot.as_mut().unwrap();
    if comp.betti == 0 {
        if !target_zero {
            log.push((0, 0), (ts, tt), "", algebra("no cohomology in this degree: every closed form is exact"), None);
        }
        return Ok(());
    }
    let formula = if r.is_multiple_of(8) { "[omega] mod Z" } else { "1/2 [omega] mod Z" };
    let Some(target) = page.entry(ts, tt) else {
        log.push((0, 0), (ts, tt), formula, unsupported("target lies outside the row window"), None);
        new_slot.components[ix].condition = FormCondition::Indeterminate { reason: "target outside the row window".into() };
        return Ok(());
    };
    if !target.determined {
        log.push((0, 0), (ts, tt), formula, unsupported("target entry is undetermined"), None);
        new_slot.components[ix].condition = FormCondition::Indeterminate { reason: format!("({ts},{tt}) is undetermined") };
        return Ok(());
    }
    new_slot.components[ix].condition = if r.is_multiple_of(8) { FormCondition::Integral } else { FormCondition::EvenIntegral };
    new_slot.components[ix].conservative = target.torus_touched;
    // the periods of all closed forms fill the torus of the target
    let e = next.entries.get_mut(&(ts, tt)).unwrap();
    e.group.circles = 0;
    touched.push((ts, tt));
    log.push((0, 0), (ts, tt), formula, Status::Evaluated { zero: false }, None);
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub s: u32,
    pub t: i64,
    pub group: GroupDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Convergence {
    Assembled {
        degree: i64,
        group: GroupDescriptor,
        pieces: Vec<Piece>,
        #[serde(skip_serializing_if = "Option::is_none")]
        form_slot: Option<FormSlotState>,
    },
    ExtensionUnresolved {
        degree: i64,
        pieces: Vec<Piece>,
        #[serde(skip_serializing_if = "Option::is_none")]
        form_slot: Option<FormSlotState>,
    },
    Blocked {
        degree: i64,
        blockers: Vec<String>,
    },
}

/// Assembles total degree n from E_infinity, refusing when an entry in
/// range is undetermined or when the filtration has a real extension problem.
pub fn converge(ss: &SpectralSequence, n: i64) -> Convergence {
    let page = ss.infinity();
    let mut blockers = Vec::new();
    let mut pieces = Vec::new();
    let mut form_slot = None;
    for s in 0..=ss.dimension {
        let t = n - s as i64;
        if ss.variant == Variant::Differential && s == 0 && t == 0 {
            match &page.form_slot {
                Some(slot) => {
                    for c in &slot.components {
                        if let FormCondition::Indeterminate { reason } = &c.condition {
                            blockers.push(format!("form slot degree {}: {reason}", c.degree));
                        }
                    }
                    form_slot = Some(slot.clone());
                }
                None => blockers.push("form slot outside the row window".into()),
            }
            continue;
        }
        if !page.in_window(t) {
            blockers.push(format!("row {t} is outside the window {}..={}", ss.rows.0, ss.rows.1));
            continue;
        }
        let e = &page.entries[&(s, t)];
        if !e.determined {
            blockers.push(format!("({s},{t}) undetermined: {}", e.notes.join("; ")));
        } else if !e.is_zero() {
            pieces.push(Piece { s, t, group: e.group.clone() });
        }
    }
    if !blockers.is_empty() {
        return Convergence::Blocked { degree: n, blockers };
    }
    let nonzero = pieces.len();
    let all_free = pieces.iter().all(|p| p.group.is_torsion_free() && p.group.circles == 0);
    if nonzero <= 1 || all_free {
        let group = pieces.iter().fold(GroupDescriptor::zero(), |acc, p| acc.direct_sum(&p.group));
        Convergence::Assembled { degree: n, group, pieces, form_slot }
    } else {
        Convergence::ExtensionUnresolved { degree: n, pieces, form_slot }
    }
}
