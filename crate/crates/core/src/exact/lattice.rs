//! Integer lattices: echelon forms, kernels, membership and Smith invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;

pub fn zero_vec(n: usize) -> IntVec {
    vec![BigInt::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> IntVec {
    let mut v = zero_vec(n);
    v[i] = BigInt::one();
    v
}

pub fn int_vec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![zero_vec(cols); rows] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<BigInt>>) -> IntMatrix {
        assert_eq!(data.len(), rows);
        assert!(data.iter().all(|r| r.len() == cols));
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[Vec<i64>]) -> IntMatrix {
        Self::from_rows(rows, cols, data.iter().map(|r| int_vec(r)).collect())
    }

    pub fn from_columns(rows: usize, cols: &[IntVec]) -> IntMatrix {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m.data[i][j] = c[i].clone();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> IntVec {
        (0..self.rows).map(|i| self.data[i][j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVec {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().zip(v).fold(BigInt::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += t;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    fn col_axpy(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let t = &self.data[i][src] * k;
            self.data[i][dst] += t;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }

    fn neg_col(&mut self, j: usize) {
        for row in &mut self.data {
            row[j] = -row[j].clone();
        }
    }
}

/// Column echelon form H = M U with U unimodular. Returns (H, U, rank);
/// the first `rank` columns of H are nonzero with strictly increasing pivot rows.
pub fn column_echelon(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut piv = 0;
    for r in 0..h.rows {
        if piv >= h.cols {
            break;
        }
        loop {
            // smallest nonzero entry in row r among columns >= piv
            let best = (piv..h.cols)
                .filter(|&j| !h.data[r][j].is_zero())
                .min_by(|&a, &b| h.data[r][a].abs().cmp(&h.data[r][b].abs()));
            let Some(b) = best else { break };
            h.swap_cols(piv, b);
            u.swap_cols(piv, b);
            let mut done = true;
            for j in piv + 1..h.cols {
                if h.data[r][j].is_zero() {
                    continue;
                }
                let qt = h.data[r][j].div_floor(&h.data[r][piv]);
                let k = -qt;
                h.col_axpy(j, piv, &k);
                u.col_axpy(j, piv, &k);
                if !h.data[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                if h.data[r][piv].is_negative() {
                    h.neg_col(piv);
                    u.neg_col(piv);
                }
                piv += 1;
                break;
            }
        }
    }
    (h, u, piv)
}

/// Basis of {x : M x = 0}.
pub fn kernel(m: &IntMatrix) -> Vec<IntVec> {
    let (_, u, rank) = column_echelon(m);
    (rank..m.cols).map(|j| u.column(j)).collect()
}

/// Basis of the lattice spanned by `gens` inside Z^dim.
pub fn span_basis(dim: usize, gens: &[IntVec]) -> Vec<IntVec> {
    if gens.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_columns(dim, gens);
    let (h, _, rank) = column_echelon(&m);
    (0..rank).map(|j| h.column(j)).collect()
}

/// Integer coefficients c with sum c_j gens_j = v, if any exist.
pub fn solve(dim: usize, gens: &[IntVec], v: &[BigInt]) -> Option<IntVec> {
    assert_eq!(v.len(), dim);
    if gens.is_empty() {
        return v.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    let m = IntMatrix::from_columns(dim, gens);
    let (h, u, rank) = column_echelon(&m);
    let mut rest: IntVec = v.to_vec();
    let mut y = zero_vec(gens.len());
    let mut col = 0;
    for r in 0..dim {
        if col < rank && !h.data[r][col].is_zero() {
            let (qt, rem) = rest[r].div_rem(&h.data[r][col]);
            if !rem.is_zero() {
                return None;
            }
            for i in 0..dim {
                let t = &h.data[i][col] * &qt;
                rest[i] -= t;
            }
            y[col] = qt;
            col += 1;
        } else if !rest[r].is_zero() {
            return None;
        }
    }
    Some(u.mul_vec(&y))
}

pub fn contains(dim: usize, gens: &[IntVec], v: &[BigInt]) -> bool {
    solve(dim, gens, v).is_some()
}

/// {x in Z^n : M x lies in the lattice spanned by `target`}.
pub fn preimage(m: &IntMatrix, target: &[IntVec]) -> Vec<IntVec> {
    let n = m.cols;
    // kernel of [M | -T], projected onto the first n coordinates
    let mut cols = m.columns();
    for t in target {
        cols.push(t.iter().map(|x| -x).collect());
    }
    let aug = IntMatrix::from_columns(m.rows, &cols);
    let ker = kernel(&aug);
    let proj: Vec<IntVec> = ker.into_iter().map(|k| k[..n].to_vec()).collect();
    span_basis(n, &proj)
}

/// Nonzero diagonal entries of the Smith normal form, each dividing the next.
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.data.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let qt = a[i][t].div_floor(&a[t][t]);
            for j in t..cols {
                let v = &a[t][j] * &qt;
                a[i][j] -= v;
            }
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let qt = a[t][j].div_floor(&a[t][t]);
            for i in t..rows {
                let v = &a[i][t] * &qt;
                a[i][j] -= v;
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // pivot must divide the rest of the block
        let p = a[t][t].clone();
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
        if let Some(i) = bad {
            for j in t..cols {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// Invariants of Z^dim / span(relations): (free rank, torsion orders > 1).
pub fn quotient_invariants(dim: usize, relations: &[IntVec]) -> (usize, Vec<BigInt>) {
    if relations.is_empty() {
        return (dim, Vec::new());
    }
    let m = IntMatrix::from_columns(dim, relations);
    let inv = smith_invariants(&m);
    let free = dim - inv.len();
    (free, inv.into_iter().filter(|d| !d.is_one()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_small_matrix() {
        let m = IntMatrix::from_i64(2, 2, &[vec![2, 4], vec![6, 8]]);
        assert_eq!(smith_invariants(&m), int_vec(&[2, 4]));
        let m = IntMatrix::from_i64(2, 2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_invariants(&m), int_vec(&[1, 6]));
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = IntMatrix::from_i64(2, 4, &[vec![1, 2, 3, 4], vec![2, 4, 6, 9]]);
        let k = kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn membership() {
        let gens = vec![int_vec(&[2, 0]), int_vec(&[1, 3])];
        assert!(contains(2, &gens, &int_vec(&[3, 3])));
        assert!(!contains(2, &gens, &int_vec(&[1, 0])));
        let c = solve(2, &gens, &int_vec(&[0, 6])).unwrap();
        assert_eq!(c, int_vec(&[-1, 2]));
    }

    #[test]
    fn quotient_of_z2_by_diagonal() {
        let (free, tors) = quotient_invariants(2, &[int_vec(&[2, 2])]);
        assert_eq!(free, 1);
        assert_eq!(tors, int_vec(&[2]));
    }

    #[test]
    fn preimage_of_even_lattice() {
        // x -> x mod stuff: M = [1 1], target 2Z
        let m = IntMatrix::from_i64(1, 2, &[vec![1, 1]]);
        let pre = preimage(&m, &[int_vec(&[2])]);
        let (free, tors) = quotient_invariants(2, &pre);
        assert_eq!((free, tors), (0, int_vec(&[2])));
    }
}
