use super::rational::Rational;

/// Truncated power series in one variable: `coeffs[k]` is the coefficient of z^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub coeffs: Vec<Rational>,
}

impl Series {
    pub fn new(mut coeffs: Vec<Rational>, len: usize) -> Series {
        coeffs.resize(len, Rational::zero());
        Series { coeffs }
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> Rational) -> Series {
        Series { coeffs: (0..len).map(f).collect() }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                out[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        Series { coeffs: out }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        Series { coeffs: (0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn inverse(&self) -> Option<Series> {
        let n = self.len();
        let c0_inv = self.coeffs.first()?.recip()?;
        let mut out = vec![Rational::zero(); n];
        out[0] = c0_inv.clone();
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -(acc * &c0_inv);
        }
        Some(Series { coeffs: out })
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Option<Series> {
        if !self.coeff(0).is_one() {
            return None;
        }
        let n = self.len();
        // (log f)' = f' / f
        let deriv = Series::from_fn(n, |k| self.coeff(k + 1) * Rational::from((k + 1) as i64));
        let q = deriv.mul(&self.inverse()?);
        Some(Series::from_fn(n, |k| if k == 0 { Rational::zero() } else { q.coeff(k - 1) / Rational::from(k as i64) }))
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Option<Series> {
        if !self.coeff(0).is_zero() {
            return None;
        }
        let n = self.len();
        // g = exp f satisfies k g_k = sum_j j f_j g_{k-j}
        let mut g = vec![Rational::zero(); n];
        if n > 0 {
            g[0] = Rational::one();
        }
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += Rational::from(j as i64) * &self.coeffs[j] * &g[k - j];
            }
            g[k] = acc / Rational::from(k as i64);
        }
        Some(Series { coeffs: g })
    }

    /// e^z
    pub fn exponential(len: usize) -> Series {
        Series::from_fn(len, |k| Rational::factorial(k as u32).recip().unwrap())
    }

    /// e^{-z}
    pub fn exponential_neg(len: usize) -> Series {
        Series::from_fn(len, |k| {
            let c = Rational::factorial(k as u32).recip().unwrap();
            if k % 2 == 1 { -c } else { c }
        })
    }

    /// sinh(z/2) / (z/2)
    pub fn sinh_half_ratio(len: usize) -> Series {
        Series::from_fn(len, |k| {
            if k % 2 == 1 {
                return Rational::zero();
            }
            // sum z^{2m} / (4^m (2m+1)!)
            let m = (k / 2) as i32;
            Rational::from(4).pow(-m) / Rational::factorial(k as u32 + 1)
        })
    }

    /// Drops the first `k` coefficients, i.e. divides by z^k. The caller
    /// guarantees those coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Option<Series> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Series { coeffs: self.coeffs.iter().skip(k).cloned().collect() })
    }

    /// For an even series f, the series h with f(z) = h(z^2).
    pub fn even_part_in_square(&self) -> Option<Series> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Series { coeffs: self.coeffs.iter().step_by(2).cloned().collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    #[test]
    fn log_exp_inverse() {
        let f = Series::new(vec![Rational::one(), q(1, 3), q(-2, 5), q(7, 2)], 8);
        let back = f.log().unwrap().exp().unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn exp_of_z() {
        let z = Series::new(vec![Rational::zero(), Rational::one()], 6);
        assert_eq!(z.exp().unwrap(), Series::exponential(6));
    }

    #[test]
    fn sinh_ratio_low_terms() {
        let s = Series::sinh_half_ratio(5);
        assert_eq!(s.coeffs, vec![q(1, 1), q(0, 1), q(1, 24), q(0, 1), q(1, 1920)]);
    }

    #[test]
    fn inverse_times_self() {
        let f = Series::new(vec![q(2, 1), q(1, 1), q(0, 1), q(5, 3)], 7);
        let one = f.mul(&f.inverse().unwrap());
        assert_eq!(one, Series::new(vec![Rational::one()], 7));
    }
}
