//! Brute-force construction of the shipped presentations.
//!
//! Squares come from the Cartan formula on a single generator: Sq(a) = a + a^2
//! for a degree-1 class and Sq(x) = x + x^2 for a degree-2 class, so
//! Sq^i(a^j) = C(j, i) a^{i+j} and Sq^{2i}(x^j) = C(j, i) x^{i+j}.
//! `cargo run --example regenerate_presentations` rewrites the data files.

use std::collections::BTreeMap;

use super::f2::{binomial_mod2, binomial_mod_p};
use super::{
    CohomologyPresentation, IntegralGroup, OddPrimaryData, PairingData, PresentationDocument, SCHEMA_VERSION,
};

fn empty(name: &str, dimension: u32) -> PresentationDocument {
    PresentationDocument {
        schema_version: SCHEMA_VERSION,
        name: name.to_string(),
        dimension: Some(dimension),
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
    }
}

fn free(label: &str) -> IntegralGroup {
    IntegralGroup { free: 1, torsion: vec![], labels: vec![label.to_string()] }
}

fn power(base: &str, j: u32) -> String {
    match j {
        0 => "1".to_string(),
        1 => base.to_string(),
        _ => format!("{base}^{j}"),
    }
}

fn finish(doc: PresentationDocument) -> CohomologyPresentation {
    CohomologyPresentation::from_document(doc).expect("generated presentation is valid")
}

/// One-dimensional groups in each listed degree, multiplying by adding degrees.
fn monogenic_cups<T: Copy>(doc_degrees: &[u32], one: T, zero: T, nonzero: impl Fn(u32, u32) -> bool) -> BTreeMap<String, Vec<Vec<Vec<T>>>> {
    let mut out = BTreeMap::new();
    for &a in doc_degrees {
        for &b in doc_degrees {
            if doc_degrees.contains(&(a + b)) {
                let v = if nonzero(a, b) { one } else { zero };
                out.insert(format!("{a},{b}"), vec![vec![vec![v]]]);
            }
        }
    }
    out
}

pub fn point() -> CohomologyPresentation {
    let mut doc = empty("point", 0);
    doc.integral.insert("0".into(), free("1"));
    doc.mod2.insert("0".into(), vec!["1".into()]);
    doc.reduction.insert("0".into(), vec![vec![1]]);
    doc.cup_mod2 = monogenic_cups(&[0], 1u8, 0, |_, _| true);
    doc.cup_integral = monogenic_cups(&[0], 1i64, 0, |_, _| true);
    doc.pairing = Some(PairingData { degree: 0, mod2: vec![1], integral: Some(vec![1]) });
    finish(doc)
}

pub fn sphere(n: u32) -> CohomologyPresentation {
    assert!(n >= 1);
    let mut doc = empty(&format!("S{n}"), n);
    for (d, l) in [(0, "1"), (n, "s")] {
        doc.integral.insert(d.to_string(), free(l));
        doc.mod2.insert(d.to_string(), vec![l.to_string()]);
        doc.reduction.insert(d.to_string(), vec![vec![1]]);
    }
    let degrees = [0, n];
    doc.cup_mod2 = monogenic_cups(&degrees, 1u8, 0, |_, _| true);
    doc.cup_integral = monogenic_cups(&degrees, 1i64, 0, |_, _| true);
    doc.pairing = Some(PairingData { degree: n, mod2: vec![1], integral: Some(vec![1]) });
    finish(doc)
}

/// RP^n: mod 2 it is F_2[a]/(a^{n+1}); integrally Z/2 in even positive
/// degrees below or at n, generated by b^j = beta_2(a^{2j-1}), and Z on
/// top when n is odd.
pub fn real_projective(n: u32) -> CohomologyPresentation {
    assert!(n >= 1);
    let mut doc = empty(&format!("RP{n}"), n);
    let mut int_degrees = vec![0];
    doc.integral.insert("0".into(), free("1"));
    for d in 1..=n {
        if d % 2 == 0 {
            doc.integral.insert(
                d.to_string(),
                IntegralGroup { free: 0, torsion: vec![2], labels: vec![power("b", d / 2)] },
            );
            int_degrees.push(d);
        } else if d == n {
            doc.integral.insert(d.to_string(), free("o"));
            int_degrees.push(d);
        }
    }
    let all: Vec<u32> = (0..=n).collect();
    for &d in &all {
        doc.mod2.insert(d.to_string(), vec![power("a", d)]);
    }
    for &d in &int_degrees {
        doc.reduction.insert(d.to_string(), vec![vec![1]]);
    }
    for d in 0..n {
        if d % 2 == 1 {
            doc.bockstein.insert(d.to_string(), vec![vec![1]]);
        }
    }
    for i in 1..=n {
        let mut per = BTreeMap::new();
        for d in i..=n - i {
            per.insert(d.to_string(), vec![vec![binomial_mod2(d, i)]]);
        }
        if !per.is_empty() {
            doc.sq.insert(i.to_string(), per);
        }
    }
    doc.cup_mod2 = monogenic_cups(&all, 1u8, 0, |_, _| true);
    // b^i b^j = b^{i+j}; the odd top class only pairs with the unit
    doc.cup_integral = monogenic_cups(&int_degrees, 1i64, 0, |a, b| a == 0 || b == 0 || (a % 2 == 0 && b % 2 == 0));
    doc.pairing = Some(PairingData { degree: n, mod2: vec![1], integral: (n % 2 == 1).then(|| vec![1]) });
    finish(doc)
}

/// CP^n with its mod-3 reduced power P^1 x^j = j x^{j+2}.
pub fn complex_projective(n: u32) -> CohomologyPresentation {
    assert!(n >= 1);
    let mut doc = empty(&format!("CP{n}"), 2 * n);
    let degrees: Vec<u32> = (0..=n).map(|j| 2 * j).collect();
    for j in 0..=n {
        let d = (2 * j).to_string();
        doc.integral.insert(d.clone(), free(&power("x", j)));
        doc.mod2.insert(d.clone(), vec![power("x", j)]);
        doc.reduction.insert(d, vec![vec![1]]);
    }
    for i in 1..=n {
        let mut per = BTreeMap::new();
        for j in i..=n - i {
            per.insert((2 * j).to_string(), vec![vec![binomial_mod2(j, i)]]);
        }
        if !per.is_empty() {
            doc.sq.insert((2 * i).to_string(), per);
        }
    }
    doc.cup_mod2 = monogenic_cups(&degrees, 1u8, 0, |_, _| true);
    doc.cup_integral = monogenic_cups(&degrees, 1i64, 0, |_, _| true);
    doc.pairing = Some(PairingData { degree: 2 * n, mod2: vec![1], integral: Some(vec![1]) });
    let p = 3u64;
    let mut odd = OddPrimaryData {
        prime: p,
        basis: BTreeMap::new(),
        reduction: BTreeMap::new(),
        bockstein: BTreeMap::new(),
        power: BTreeMap::new(),
        cup: BTreeMap::new(),
    };
    for j in 0..=n {
        odd.basis.insert((2 * j).to_string(), vec![power("x", j)]);
        odd.reduction.insert((2 * j).to_string(), vec![vec![1]]);
    }
    for k in 1..=n / 2 {
        let mut per = BTreeMap::new();
        for j in 0..=n {
            if j + 2 * k <= n {
                per.insert((2 * j).to_string(), vec![vec![binomial_mod_p(j as u64, k as u64, p)]]);
            }
        }
        if !per.is_empty() {
            odd.power.insert(k.to_string(), per);
        }
    }
    doc.odd_primary.push(odd);
    finish(doc)
}

/// Every shipped presentation, in file order.
pub fn all_builtins() -> Vec<CohomologyPresentation> {
    let mut v = vec![point()];
    v.extend((1..=16).map(sphere));
    v.extend((1..=8).map(real_projective));
    v.extend((1..=4).map(complex_projective));
    v
}

/// Writes each shipped presentation as `<name>.json` into `dir`.
pub fn write_all(dir: &std::path::Path) -> std::io::Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for p in all_builtins() {
        std::fs::write(dir.join(format!("{}.json", p.name)), p.to_json())?;
        names.push(p.name.clone());
    }
    Ok(names)
}
