use std::fmt;

use serde::Serialize;

/// Isomorphism type of Z^free + (finite cyclic groups) + U(1)^circles,
/// with optional generator labels for display.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Default)]
pub struct GroupDescriptor {
    pub free: usize,
    pub torsion: Vec<u64>,
    pub circles: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl GroupDescriptor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn integers() -> Self {
        GroupDescriptor { free: 1, ..Self::default() }
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 2, "torsion orders are at least 2");
        GroupDescriptor { torsion: vec![n], ..Self::default() }
    }

    pub fn circle() -> Self {
        GroupDescriptor { circles: 1, ..Self::default() }
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.labels.push(label.into());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty() && self.circles == 0
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut torsion = self.torsion.clone();
        torsion.extend(&other.torsion);
        torsion.sort_unstable();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        GroupDescriptor { free: self.free + other.free, torsion, circles: self.circles + other.circles, labels }
    }

    /// Equality of the underlying groups, ignoring labels and the
    /// order in which cyclic summands were listed.
    pub fn same_group(&self, other: &Self) -> bool {
        let mut a = primary_parts(&self.torsion);
        let mut b = primary_parts(&other.torsion);
        a.sort_unstable();
        b.sort_unstable();
        self.free == other.free && self.circles == other.circles && a == b
    }

    pub fn order_of_torsion(&self) -> u128 {
        self.torsion.iter().map(|&n| n as u128).product()
    }
}

/// Splits cyclic orders into prime-power factors, the canonical form for comparison.
fn primary_parts(orders: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for &n in orders {
        let mut m = n;
        let mut p = 2;
        while m > 1 {
            if p * p > m {
                out.push(m);
                break;
            }
            let mut q = 1;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            if q > 1 {
                out.push(q);
            }
            p += 1;
        }
    }
    out
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        match self.circles {
            0 => {}
            1 => parts.push("U(1)".to_string()),
            n => parts.push(format!("U(1)^{n}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders() {
        assert_eq!(GroupDescriptor::zero().to_string(), "0");
        let g = GroupDescriptor::integers().direct_sum(&GroupDescriptor::cyclic(2)).direct_sum(&GroupDescriptor::circle());
        assert_eq!(g.to_string(), "Z + Z/2 + U(1)");
    }

    #[test]
    fn compares_up_to_isomorphism() {
        let a = GroupDescriptor { torsion: vec![6], ..Default::default() };
        let b = GroupDescriptor { torsion: vec![2, 3], ..Default::default() };
        assert!(a.same_group(&b));
        assert!(!a.same_group(&GroupDescriptor::cyclic(4)));
    }
}
