//! Finite presentations of the cohomology of a space.
//!
//! A presentation lists, degree by degree, the integral groups H^d(X;Z) and
//! a basis of H^d(X;Z/2), together with reduction, Bockstein, Steenrod
//! squares, cup products and an optional fundamental-class pairing. Maps whose
//! source or target vanish are known to be zero; any other map that is not
//! listed is unknown, and consumers report it as unsupported.
//!
//! Integral generators in a degree are ordered free ones first, then one
//! generator per cyclic torsion summand.

pub mod f2;
pub mod generate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::group::GroupDescriptor;
use f2::Mat;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invariant violated in degree {degree} ({map}): {detail}")]
    Invariant { degree: u32, map: String, detail: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown built-in space {0:?}")]
    UnknownSpace(String),
}

fn invariant(degree: u32, map: &str, detail: impl Into<String>) -> PresentationError {
    PresentationError::Invariant { degree, map: map.to_string(), detail: detail.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct IntegralGroup {
    pub free: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
    #[serde(default)]
    pub labels: Vec<String>,
}

impl IntegralGroup {
    pub fn rank(&self) -> usize {
        self.free + self.torsion.len()
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor { free: self.free, torsion: self.torsion.clone(), circles: 0, labels: self.labels.clone() }
    }

    /// Order of generator j, 0 for free generators.
    pub fn order(&self, j: usize) -> u64 {
        if j < self.free { 0 } else { self.torsion[j - self.free] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingData {
    pub degree: u32,
    /// value of [M] on each mod-2 basis element of the top degree
    pub mod2: Vec<u8>,
    /// value of [M] on each integral generator of the top degree, if orientable
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral: Option<Vec<i64>>,
}

/// A class x in H^degree(X;Z) known to be p^exponent times another class,
/// and no higher power; `quotient_reduction` is rho_p(x / p^exponent).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisibilityAnnotation {
    pub degree: u32,
    pub prime: u64,
    pub class: Vec<i64>,
    pub exponent: u32,
    pub quotient_reduction: Vec<u64>,
}

/// Mod-p data at an odd prime: bases, reduction, Bockstein and reduced powers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OddPrimaryData {
    pub prime: u64,
    #[serde(default)]
    pub basis: BTreeMap<String, Vec<String>>,
    /// degree -> rows over the mod-p basis, columns over integral generators
    #[serde(default)]
    pub reduction: BTreeMap<String, Vec<Vec<u64>>>,
    /// degree d -> rows over integral generators of d+1, columns over the mod-p basis of d
    #[serde(default)]
    pub bockstein: BTreeMap<String, Vec<Vec<i64>>>,
    /// "k" -> degree d -> matrix of P^k from degree d to d + 2k(p-1)
    #[serde(default)]
    pub power: BTreeMap<String, BTreeMap<String, Vec<Vec<u64>>>>,
    /// "d1,d2" -> [i][j] -> product vector, over the mod-p bases
    #[serde(default)]
    pub cup: BTreeMap<String, Vec<Vec<Vec<u64>>>>,
}

/// The serialised form. Degrees are string keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDocument {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u32>,
    pub integral: BTreeMap<String, IntegralGroup>,
    pub mod2: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
    #[serde(default)]
    pub reduction: BTreeMap<String, Mat>,
    #[serde(default)]
    pub bockstein: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default)]
    pub sq: BTreeMap<String, BTreeMap<String, Mat>>,
    #[serde(default)]
    pub cup_mod2: BTreeMap<String, Vec<Vec<Vec<u8>>>>,
    #[serde(default)]
    pub cup_integral: BTreeMap<String, Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingData>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub divisibility: Vec<DivisibilityAnnotation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub odd_primary: Vec<OddPrimaryData>,
}

/// A validated presentation. Immutable after loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyPresentation {
    pub name: String,
    pub dimension: Option<u32>,
    integral: BTreeMap<u32, IntegralGroup>,
    mod2: BTreeMap<u32, Vec<String>>,
    reduction: BTreeMap<u32, Mat>,
    bockstein: BTreeMap<u32, Vec<Vec<i64>>>,
    sq: BTreeMap<(u32, u32), Mat>,
    cup_mod2: BTreeMap<(u32, u32), Vec<Vec<Vec<u8>>>>,
    cup_integral: BTreeMap<(u32, u32), Vec<Vec<Vec<i64>>>>,
    pub pairing: Option<PairingData>,
    pub divisibility: Vec<DivisibilityAnnotation>,
    pub odd_primary: Vec<OddPrimaryData>,
}

fn parse_degree(key: &str) -> Result<u32, PresentationError> {
    key.parse::<u32>().map_err(|_| PresentationError::Schema(format!("degree key {key:?} is not a nonnegative integer")))
}

fn parse_pair(key: &str) -> Result<(u32, u32), PresentationError> {
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| PresentationError::Schema(format!("cup key {key:?} must look like \"d1,d2\"")))?;
    Ok((parse_degree(a.trim())?, parse_degree(b.trim())?))
}

fn check_shape<T>(m: &[Vec<T>], rows: usize, cols: usize, degree: u32, map: &str) -> Result<(), PresentationError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        let got_cols = m.first().map_or(0, |r| r.len());
        return Err(invariant(degree, map, format!("expected {rows}x{cols} matrix, got {}x{got_cols}", m.len())));
    }
    Ok(())
}

fn check_binary(m: &Mat, degree: u32, map: &str) -> Result<(), PresentationError> {
    if m.iter().flatten().any(|&x| x > 1) {
        return Err(invariant(degree, map, "entries over F_2 must be 0 or 1"));
    }
    Ok(())
}

impl CohomologyPresentation {
    pub fn from_document(doc: PresentationDocument) -> Result<Self, PresentationError> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(PresentationError::Schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        let mut integral = BTreeMap::new();
        for (k, g) in doc.integral {
            let d = parse_degree(&k)?;
            if g.torsion.iter().any(|&t| t < 2) {
                return Err(invariant(d, "integral", "torsion orders must be at least 2"));
            }
            if !g.labels.is_empty() && g.labels.len() != g.rank() {
                return Err(invariant(d, "integral", "one label per generator"));
            }
            if g.rank() > 0 {
                integral.insert(d, g);
            }
        }
        let mut mod2 = BTreeMap::new();
        for (k, basis) in doc.mod2 {
            let d = parse_degree(&k)?;
            if !basis.is_empty() {
                mod2.insert(d, basis);
            }
        }
        let mut p = CohomologyPresentation {
            name: doc.name,
            dimension: doc.dimension,
            integral,
            mod2,
            reduction: BTreeMap::new(),
            bockstein: BTreeMap::new(),
            sq: BTreeMap::new(),
            cup_mod2: BTreeMap::new(),
            cup_integral: BTreeMap::new(),
            pairing: doc.pairing,
            divisibility: doc.divisibility,
            odd_primary: doc.odd_primary,
        };
        if let Some(dim) = p.dimension {
            if let Some(&top) = p.integral.keys().chain(p.mod2.keys()).max() {
                if top > dim {
                    return Err(invariant(top, "dimension", format!("data above the stated dimension {dim}")));
                }
            }
        }
        for (k, m) in doc.reduction {
            let d = parse_degree(&k)?;
            check_shape(&m, p.mod2_dim(d), p.integral(d).rank(), d, "reduction")?;
            check_binary(&m, d, "reduction")?;
            p.reduction.insert(d, m);
        }
        for (k, m) in doc.bockstein {
            let d = parse_degree(&k)?;
            check_shape(&m, p.integral(d + 1).rank(), p.mod2_dim(d), d, "bockstein")?;
            p.bockstein.insert(d, m);
        }
        for (ik, per) in doc.sq {
            let i = parse_degree(&ik)?;
            if i == 0 {
                return Err(PresentationError::Schema("Sq^0 is the identity and is not stored".into()));
            }
            for (k, m) in per {
                let d = parse_degree(&k)?;
                check_shape(&m, p.mod2_dim(d + i), p.mod2_dim(d), d, &format!("Sq^{i}"))?;
                check_binary(&m, d, &format!("Sq^{i}"))?;
                p.sq.insert((i, d), m);
            }
        }
        for (k, t) in doc.cup_mod2 {
            let (a, b) = parse_pair(&k)?;
            let (na, nb, nc) = (p.mod2_dim(a), p.mod2_dim(b), p.mod2_dim(a + b));
            if t.len() != na || t.iter().any(|r| r.len() != nb || r.iter().any(|v| v.len() != nc || v.iter().any(|&x| x > 1))) {
                return Err(invariant(a + b, "cup_mod2", format!("table {k} has the wrong shape")));
            }
            p.cup_mod2.insert((a, b), t);
        }
        for (k, t) in doc.cup_integral {
            let (a, b) = parse_pair(&k)?;
            let (na, nb, nc) = (p.integral(a).rank(), p.integral(b).rank(), p.integral(a + b).rank());
            if t.len() != na || t.iter().any(|r| r.len() != nb || r.iter().any(|v| v.len() != nc)) {
                return Err(invariant(a + b, "cup_integral", format!("table {k} has the wrong shape")));
            }
            p.cup_integral.insert((a, b), t);
        }
        if let Some(b) = &doc.betti {
            for (d, &bd) in b.iter().enumerate() {
                if p.betti(d as u32) != bd {
                    return Err(invariant(d as u32, "betti", format!("Betti number {bd} but free rank {}", p.betti(d as u32))));
                }
            }
        }
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), PresentationError> {
        let top = self.top_degree();
        // mod-2 dimensions from universal coefficients
        let even = |d: u32| self.integral(d).torsion.iter().filter(|t| *t % 2 == 0).count();
        for d in 0..=top {
            let expected = self.betti(d) + even(d) + even(d + 1);
            if self.mod2_dim(d) != expected {
                return Err(invariant(d, "mod2", format!("basis has {} elements, universal coefficients give {expected}", self.mod2_dim(d))));
            }
        }
        for (&d, m) in &self.reduction {
            let g = self.integral(d);
            for j in 0..g.rank() {
                if g.order(j) % 2 == 1 && m.iter().any(|row| row[j] != 0) {
                    return Err(invariant(d, "reduction", "odd-order generator must reduce to zero"));
                }
            }
        }
        for (&d, m) in &self.bockstein {
            let g = self.integral(d + 1);
            for (j, row) in m.iter().enumerate() {
                for &c in row {
                    let ok = match g.order(j) {
                        0 => c == 0,
                        n => (2 * c).rem_euclid(n as i64) == 0,
                    };
                    if !ok {
                        return Err(invariant(d, "bockstein", "image must be 2-torsion"));
                    }
                }
            }
        }
        for d in 0..=top {
            // rho_2 beta_2 = Sq^1
            if let (Some(b), Some(r), Some(s)) = (self.bockstein_map(d), self.reduction_map(d + 1), self.sq_map(1, d)) {
                let n = self.mod2_dim(d);
                let mut comp = f2::zeros(self.mod2_dim(d + 1), n);
                for (i, row) in r.iter().enumerate() {
                    for j in 0..n {
                        let mut acc = 0i64;
                        for (k, &x) in row.iter().enumerate() {
                            acc += x as i64 * b[k][j];
                        }
                        comp[i][j] = acc.rem_euclid(2) as u8;
                    }
                }
                if comp != s {
                    return Err(invariant(d, "rho_2 beta_2", "does not equal Sq^1"));
                }
            }
            // Sq^1 Sq^1 = 0
            if let (Some(a), Some(b)) = (self.sq_map(1, d), self.sq_map(1, d + 1)) {
                if !f2::is_zero(&f2::mat_mul(&b, &a, self.mod2_dim(d))) {
                    return Err(invariant(d, "Sq^1 Sq^1", "composite is nonzero"));
                }
            }
        }
        for (&(i, d), m) in &self.sq {
            if i > d && !f2::is_zero(m) {
                return Err(invariant(d, &format!("Sq^{i}"), "nonzero above the instability range"));
            }
            if i == d {
                if let Some(cup) = self.cup_mod2.get(&(d, d)) {
                    for x in 0..self.mod2_dim(d) {
                        let col: Vec<u8> = m.iter().map(|row| row[x]).collect();
                        if col != cup[x][x] {
                            return Err(invariant(d, &format!("Sq^{i}"), "top square differs from the cup square"));
                        }
                    }
                }
            }
        }
        if let Some(pair) = &self.pairing {
            if pair.mod2.len() != self.mod2_dim(pair.degree) {
                return Err(invariant(pair.degree, "pairing", "mod-2 pairing has the wrong length"));
            }
            if let Some(v) = &pair.integral {
                if v.len() != self.integral(pair.degree).rank() {
                    return Err(invariant(pair.degree, "pairing", "integral pairing has the wrong length"));
                }
            }
        }
        for a in &self.divisibility {
            if a.class.len() != self.integral(a.degree).rank() {
                return Err(invariant(a.degree, "divisibility", "class has the wrong length"));
            }
        }
        Ok(())
    }

    pub fn load_json(text: &str) -> Result<Self, PresentationError> {
        let doc: PresentationDocument = serde_json::from_str(text).map_err(|e| PresentationError::Schema(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn to_document(&self) -> PresentationDocument {
        let key = |d: u32| d.to_string();
        let mut sq: BTreeMap<String, BTreeMap<String, Mat>> = BTreeMap::new();
        for (&(i, d), m) in &self.sq {
            sq.entry(key(i)).or_default().insert(key(d), m.clone());
        }
        PresentationDocument {
            schema_version: SCHEMA_VERSION,
            name: self.name.clone(),
            dimension: self.dimension,
            integral: self.integral.iter().map(|(d, g)| (key(*d), g.clone())).collect(),
            mod2: self.mod2.iter().map(|(d, b)| (key(*d), b.clone())).collect(),
            betti: None,
            reduction: self.reduction.iter().map(|(d, m)| (key(*d), m.clone())).collect(),
            bockstein: self.bockstein.iter().map(|(d, m)| (key(*d), m.clone())).collect(),
            sq,
            cup_mod2: self.cup_mod2.iter().map(|((a, b), t)| (format!("{a},{b}"), t.clone())).collect(),
            cup_integral: self.cup_integral.iter().map(|((a, b), t)| (format!("{a},{b}"), t.clone())).collect(),
            pairing: self.pairing.clone(),
            divisibility: self.divisibility.clone(),
            odd_primary: self.odd_primary.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serialisable") + "\n"
    }

    /// Highest degree carrying any data.
    pub fn top_degree(&self) -> u32 {
        let data = self.integral.keys().chain(self.mod2.keys()).copied().max().unwrap_or(0);
        self.dimension.map_or(data, |d| d.max(data))
    }

    pub fn integral(&self, d: u32) -> IntegralGroup {
        self.integral.get(&d).cloned().unwrap_or_default()
    }

    pub fn betti(&self, d: u32) -> usize {
        self.integral.get(&d).map_or(0, |g| g.free)
    }

    pub fn mod2_dim(&self, d: u32) -> usize {
        self.mod2.get(&d).map_or(0, |b| b.len())
    }

    pub fn mod2_basis(&self, d: u32) -> &[String] {
        self.mod2.get(&d).map_or(&[], |b| b.as_slice())
    }

    pub fn is_connected(&self) -> bool {
        let g = self.integral(0);
        g.free == 1 && g.torsion.is_empty() && self.mod2_dim(0) == 1
    }

    /// rho_2 : H^d(Z) -> H^d(Z/2), or None if it is not known.
    pub fn reduction_map(&self, d: u32) -> Option<Mat> {
        let (rows, cols) = (self.mod2_dim(d), self.integral(d).rank());
        if rows == 0 || cols == 0 {
            return Some(f2::zeros(rows, cols));
        }
        self.reduction.get(&d).cloned()
    }

    /// beta_2 : H^d(Z/2) -> H^{d+1}(Z), or None if it is not known.
    pub fn bockstein_map(&self, d: u32) -> Option<Vec<Vec<i64>>> {
        let target = self.integral(d + 1);
        let (rows, cols) = (target.rank(), self.mod2_dim(d));
        if rows == 0 || cols == 0 || !target.torsion.iter().any(|t| t % 2 == 0) {
            return Some(vec![vec![0; cols]; rows]);
        }
        self.bockstein.get(&d).cloned()
    }

    /// Sq^i : H^d(Z/2) -> H^{d+i}(Z/2), or None if it is not known.
    pub fn sq_map(&self, i: u32, d: u32) -> Option<Mat> {
        let (rows, cols) = (self.mod2_dim(d + i), self.mod2_dim(d));
        if i == 0 {
            return Some(f2::identity(cols));
        }
        if rows == 0 || cols == 0 || i > d {
            return Some(f2::zeros(rows, cols));
        }
        self.sq.get(&(i, d)).cloned()
    }

    pub fn cup_mod2(&self, a: u32, b: u32) -> Option<Vec<Vec<Vec<u8>>>> {
        let (na, nb, nc) = (self.mod2_dim(a), self.mod2_dim(b), self.mod2_dim(a + b));
        if na == 0 || nb == 0 || nc == 0 {
            return Some(vec![vec![vec![0; nc]; nb]; na]);
        }
        if let Some(t) = self.cup_mod2.get(&(a, b)) {
            return Some(t.clone());
        }
        // graded commutativity mod 2
        self.cup_mod2.get(&(b, a)).map(|t| (0..na).map(|i| (0..nb).map(|j| t[j][i].clone()).collect()).collect())
    }

    pub fn cup_integral(&self, a: u32, b: u32) -> Option<Vec<Vec<Vec<i64>>>> {
        let (na, nb, nc) = (self.integral(a).rank(), self.integral(b).rank(), self.integral(a + b).rank());
        if na == 0 || nb == 0 || nc == 0 {
            return Some(vec![vec![vec![0; nc]; nb]; na]);
        }
        self.cup_integral.get(&(a, b)).cloned()
    }

    pub fn odd_primary(&self, p: u64) -> Option<&OddPrimaryData> {
        self.odd_primary.iter().find(|o| o.prime == p)
    }

    /// The same space with the degree-0 unit removed.
    pub fn reduced(&self) -> Result<Self, PresentationError> {
        if !self.is_connected() {
            return Err(PresentationError::Unsupported(format!("{} is not connected", self.name)));
        }
        let mut r = self.clone();
        r.name = format!("{} (reduced)", self.name);
        r.integral.remove(&0);
        r.mod2.remove(&0);
        r.reduction.remove(&0);
        r.sq.retain(|&(_, d), _| d != 0);
        r.cup_mod2.retain(|&(a, b), _| a != 0 && b != 0);
        r.cup_integral.retain(|&(a, b), _| a != 0 && b != 0);
        Ok(r)
    }
}

/// H^k(X;U(1)) through the splitting tors H^{k+1}(X;Z) + T^{b_k}.
pub fn u1_cohomology(p: &CohomologyPresentation, k: i64) -> Result<GroupDescriptor, PresentationError> {
    if k < 0 {
        return Err(PresentationError::Unsupported(format!("negative degree {k}")));
    }
    let k = k as u32;
    let t = p.integral(k + 1);
    Ok(GroupDescriptor { free: 0, torsion: t.torsion.clone(), circles: p.betti(k), labels: Vec::new() })
}

pub fn load_presentation(text: &str) -> Result<CohomologyPresentation, PresentationError> {
    CohomologyPresentation::load_json(text)
}

macro_rules! builtin_table {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../data/presentations/", $name, ".json")))),*]
    };
}

static BUILTIN: &[(&str, &str)] = builtin_table!(
    "point", "S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9", "S10", "S11", "S12", "S13", "S14", "S15", "S16",
    "RP1", "RP2", "RP3", "RP4", "RP5", "RP6", "RP7", "RP8", "CP1", "CP2", "CP3", "CP4",
);

pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}

/// Text of a shipped presentation file.
pub fn builtin_json(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// A shipped presentation by name, e.g. "S8", "RP4", "CP2", "point".
/// Spheres beyond the shipped range are generated on demand.
pub fn builtin(name: &str) -> Result<CohomologyPresentation, PresentationError> {
    if let Some(text) = builtin_json(name) {
        return load_presentation(text);
    }
    if let Some(n) = name.strip_prefix('S').and_then(|s| s.parse::<u32>().ok()) {
        if n >= 1 {
            return Ok(generate::sphere(n));
        }
    }
    Err(PresentationError::UnknownSpace(name.to_string()))
}

fn tensor_label(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", _) => b.to_string(),
        (_, "1") => a.to_string(),
        _ => format!("{a}*{b}"),
    }
}

/// Cohomology of X x Y for integrally torsion-free factors, with the Cartan
/// formula on squares and the Koszul sign on integral cups.
pub fn kunneth_product(a: &CohomologyPresentation, b: &CohomologyPresentation) -> Result<CohomologyPresentation, PresentationError> {
    for p in [a, b] {
        if p.integral.values().any(|g| !g.torsion.is_empty()) {
            return Err(PresentationError::Unsupported(format!("{} has integral torsion; Tor terms are not handled", p.name)));
        }
    }
    let (ta, tb) = (a.top_degree(), b.top_degree());
    let top = ta + tb;
    // basis of the product in degree n: pairs (i, x, j, y) with i + j = n
    let pairs = |n: u32, dim_a: &dyn Fn(u32) -> usize, dim_b: &dyn Fn(u32) -> usize| -> Vec<(u32, usize, u32, usize)> {
        let mut v = Vec::new();
        for i in 0..=n.min(ta) {
            let j = n - i;
            if j > tb {
                continue;
            }
            for x in 0..dim_a(i) {
                for y in 0..dim_b(j) {
                    v.push((i, x, j, y));
                }
            }
        }
        v
    };
    let ma = |d: u32| a.mod2_dim(d);
    let mb = |d: u32| b.mod2_dim(d);
    let ia = |d: u32| a.betti(d);
    let ib = |d: u32| b.betti(d);

    let mut doc = PresentationDocument {
        schema_version: SCHEMA_VERSION,
        name: format!("{}x{}", a.name, b.name),
        dimension: match (a.dimension, b.dimension) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        },
        integral: BTreeMap::new(),
        mod2: BTreeMap::new(),
        betti: None,
        reduction: BTreeMap::new(),
        bockstein: BTreeMap::new(),
        sq: BTreeMap::new(),
        cup_mod2: BTreeMap::new(),
        cup_integral: BTreeMap::new(),
        pairing: None,
        divisibility: Vec::new(),
        odd_primary: Vec::new(),
    };
    let label_int = |p: &CohomologyPresentation, d: u32, x: usize| p.integral(d).labels.get(x).cloned().unwrap_or_else(|| format!("g{d}_{x}"));
    for n in 0..=top {
        let ip = pairs(n, &ia, &ib);
        if !ip.is_empty() {
            let labels = ip.iter().map(|&(i, x, j, y)| tensor_label(&label_int(a, i, x), &label_int(b, j, y))).collect();
            doc.integral.insert(n.to_string(), IntegralGroup { free: ip.len(), torsion: vec![], labels });
        }
        let mp = pairs(n, &ma, &mb);
        if !mp.is_empty() {
            let labels = mp.iter().map(|&(i, x, j, y)| tensor_label(&a.mod2_basis(i)[x], &b.mod2_basis(j)[y])).collect();
            doc.mod2.insert(n.to_string(), labels);
        }
        // reduction is the tensor product of the factor reductions
        if !ip.is_empty() && !mp.is_empty() {
            let mut m = f2::zeros(mp.len(), ip.len());
            let mut known = true;
            for (c, &(i, x, j, y)) in ip.iter().enumerate() {
                let (Some(ra), Some(rb)) = (a.reduction_map(i), b.reduction_map(j)) else {
                    known = false;
                    break;
                };
                for (r, &(i2, x2, j2, y2)) in mp.iter().enumerate() {
                    if i2 == i && j2 == j {
                        m[r][c] = ra[x2][x] & rb[y2][y];
                    }
                }
            }
            if known {
                doc.reduction.insert(n.to_string(), m);
            }
        }
    }
    // Cartan formula
    for k in 1..=top {
        for n in 0..=top - k {
            let src = pairs(n, &ma, &mb);
            let dst = pairs(n + k, &ma, &mb);
            if src.is_empty() || dst.is_empty() {
                continue;
            }
            let mut m = f2::zeros(dst.len(), src.len());
            let mut known = true;
            'cols: for (c, &(i, x, j, y)) in src.iter().enumerate() {
                for s in 0..=k {
                    let (Some(sa), Some(sb)) = (a.sq_map(s, i), b.sq_map(k - s, j)) else {
                        known = false;
                        break 'cols;
                    };
                    for (r, &(i2, x2, j2, y2)) in dst.iter().enumerate() {
                        if i2 == i + s && j2 == j + k - s {
                            m[r][c] ^= sa[x2][x] & sb[y2][y];
                        }
                    }
                }
            }
            if known && k <= n {
                doc.sq.entry(k.to_string()).or_default().insert(n.to_string(), m);
            }
        }
    }
    // mod-2 cups
    for n1 in 0..=top {
        for n2 in 0..=top - n1 {
            let (s1, s2, s3) = (pairs(n1, &ma, &mb), pairs(n2, &ma, &mb), pairs(n1 + n2, &ma, &mb));
            if s1.is_empty() || s2.is_empty() || s3.is_empty() {
                continue;
            }
            let mut t = vec![vec![vec![0u8; s3.len()]; s2.len()]; s1.len()];
            let mut known = true;
            'outer: for (p1, &(i, x, j, y)) in s1.iter().enumerate() {
                for (p2, &(i2, x2, j2, y2)) in s2.iter().enumerate() {
                    let (Some(ca), Some(cb)) = (a.cup_mod2(i, i2), b.cup_mod2(j, j2)) else {
                        known = false;
                        break 'outer;
                    };
                    for (r, &(i3, x3, j3, y3)) in s3.iter().enumerate() {
                        if i3 == i + i2 && j3 == j + j2 {
                            t[p1][p2][r] = ca[x][x2][x3] & cb[y][y2][y3];
                        }
                    }
                }
            }
            if known {
                doc.cup_mod2.insert(format!("{n1},{n2}"), t);
            }
        }
    }
    // integral cups with the Koszul sign (-1)^{|y| |x'|}
    for n1 in 0..=top {
        for n2 in 0..=top - n1 {
            let (s1, s2, s3) = (pairs(n1, &ia, &ib), pairs(n2, &ia, &ib), pairs(n1 + n2, &ia, &ib));
            if s1.is_empty() || s2.is_empty() || s3.is_empty() {
                continue;
            }
            let mut t = vec![vec![vec![0i64; s3.len()]; s2.len()]; s1.len()];
            let mut known = true;
            'outer2: for (p1, &(i, x, j, y)) in s1.iter().enumerate() {
                for (p2, &(i2, x2, j2, y2)) in s2.iter().enumerate() {
                    let (Some(ca), Some(cb)) = (a.cup_integral(i, i2), b.cup_integral(j, j2)) else {
                        known = false;
                        break 'outer2;
                    };
                    let sign = if (j * i2) % 2 == 1 { -1 } else { 1 };
                    for (r, &(i3, x3, j3, y3)) in s3.iter().enumerate() {
                        if i3 == i + i2 && j3 == j + j2 {
                            t[p1][p2][r] = sign * ca[x][x2][x3] * cb[y][y2][y3];
                        }
                    }
                }
            }
            if known {
                doc.cup_integral.insert(format!("{n1},{n2}"), t);
            }
        }
    }
    if let (Some(pa), Some(pb)) = (&a.pairing, &b.pairing) {
        let degree = pa.degree + pb.degree;
        let basis = pairs(degree, &ma, &mb);
        let mod2 = basis
            .iter()
            .map(|&(i, x, j, y)| if i == pa.degree && j == pb.degree { pa.mod2[x] & pb.mod2[y] } else { 0 })
            .collect();
        let integral = match (&pa.integral, &pb.integral) {
            (Some(va), Some(vb)) => Some(
                pairs(degree, &ia, &ib)
                    .iter()
                    .map(|&(i, x, j, y)| if i == pa.degree && j == pb.degree { va[x] * vb[y] } else { 0 })
                    .collect(),
            ),
            _ => None,
        };
        doc.pairing = Some(PairingData { degree, mod2, integral });
    }
    CohomologyPresentation::from_document(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u1_groups() {
        let s8 = builtin("S8").unwrap();
        let g = u1_cohomology(&s8, 8).unwrap();
        assert_eq!((g.circles, g.torsion.len()), (1, 0));
        let rp4 = builtin("RP4").unwrap();
        let g = u1_cohomology(&rp4, 1).unwrap();
        assert_eq!((g.circles, g.torsion.clone()), (0, vec![2]));
        let pt = builtin("point").unwrap();
        assert!(u1_cohomology(&pt, 3).unwrap().is_zero());
    }

    #[test]
    fn kunneth_ranks() {
        let t = kunneth_product(&builtin("S1").unwrap(), &builtin("S1").unwrap()).unwrap();
        assert_eq!((t.betti(0), t.betti(1), t.betti(2)), (1, 2, 1));
        let p = kunneth_product(&builtin("S4").unwrap(), &builtin("S8").unwrap()).unwrap();
        let ranks: Vec<usize> = (0..=12).map(|d| p.betti(d)).collect();
        assert_eq!(ranks, vec![1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert!(matches!(
            kunneth_product(&builtin("RP2").unwrap(), &builtin("S1").unwrap()),
            Err(PresentationError::Unsupported(_))
        ));
    }
}
