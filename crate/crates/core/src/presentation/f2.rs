//! Small dense matrices over F_2 and Z/p, stored as row lists.

pub type Mat = Vec<Vec<u8>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![0; cols]; rows]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn cols(m: &Mat, fallback: usize) -> usize {
    m.first().map_or(fallback, |r| r.len())
}

pub fn mat_vec(m: &Mat, v: &[u8]) -> Vec<u8> {
    m.iter().map(|row| row.iter().zip(v).fold(0u8, |acc, (a, b)| acc ^ (a & b))).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat, b_cols: usize) -> Mat {
    let mut out = zeros(a.len(), b_cols);
    for (i, row) in a.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..b_cols {
                out[i][j] ^= b[k][j];
            }
        }
    }
    out
}

pub fn is_zero(m: &Mat) -> bool {
    m.iter().all(|r| r.iter().all(|&x| x == 0))
}

pub fn is_zero_vec(v: &[u8]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Unique solution of A x = b over F_2, or None when A is singular or b is
/// outside the image.
pub fn solve_unique(a: &Mat, b: &[u8], n: usize) -> Option<Vec<u8>> {
    let rows = a.len();
    let mut aug: Vec<Vec<u8>> = a.iter().zip(b).map(|(r, &x)| {
        let mut r = r.clone();
        r.push(x);
        r
    }).collect();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| aug[i][c] == 1) else { continue };
        aug.swap(r, p);
        for i in 0..rows {
            if i != r && aug[i][c] == 1 {
                let src = aug[r].clone();
                for (x, y) in aug[i].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    if piv_cols.len() != n || aug[r..].iter().any(|row| row[n] == 1) {
        return None;
    }
    let mut x = vec![0; n];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = aug[i][n];
    }
    Some(x)
}

pub fn binomial_mod2(n: u32, k: u32) -> u8 {
    // Lucas: C(n,k) odd iff k's bits are a subset of n's
    if k > n {
        0
    } else {
        u8::from(n & k == k)
    }
}

pub fn binomial_mod_p(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let (mut n, mut k, mut acc) = (n, k, 1u64);
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        // small binomial mod p
        let mut c = 1u64;
        for i in 0..b {
            c = c * ((a - i) % p) % p;
            c = c * inverse_mod(i + 1, p) % p;
        }
        acc = acc * c % p;
        n /= p;
        k /= p;
    }
    acc
}

pub fn inverse_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas() {
        assert_eq!(binomial_mod2(4, 2), 0);
        assert_eq!(binomial_mod2(5, 1), 1);
        assert_eq!(binomial_mod2(3, 2), 1);
        assert_eq!(binomial_mod_p(6, 3, 3), 2);
        assert_eq!(binomial_mod_p(9, 3, 3), 0);
    }

    #[test]
    fn solves_small_systems() {
        let a = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(solve_unique(&a, &[1, 1], 2), Some(vec![0, 1]));
        let singular = vec![vec![1, 1], vec![1, 1]];
        assert_eq!(solve_unique(&singular, &[1, 0], 2), None);
    }
}
