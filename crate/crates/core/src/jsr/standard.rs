use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::mat2::{a0, a1, Mat2};
use crate::error::{Error, Result};
use crate::words::ContinuedFraction;

/// The standard matrices `B_{-1} = alpha A_1`, `B_0 = A_0`,
/// `B_{n+1} = B_n^{a_{n+1}} B_{n-1}` for `n = 0..N-1`.
///
/// `B_n` is the product along the standard word `s_n`, so it factors as
/// `alpha^{p_n} C_n` with `C_n` an integer matrix of determinant 1. Only
/// `C_n` is stored.
#[derive(Clone, Debug)]
pub struct StandardMatrixSequence {
    cf: ContinuedFraction,
    alpha: BigRational,
    unscaled: Vec<Mat2<BigInt>>,
}

/// Build `B_{-1}, ..., B_N` for `N = cf.len()`.
pub fn standard_matrices(
    cf: &ContinuedFraction,
    alpha: &BigRational,
) -> Result<StandardMatrixSequence> {
    if cf.is_empty() {
        return Err(Error::out_of_range("cf", "no partial quotients"));
    }
    if alpha.is_negative() || alpha > &BigRational::one() {
        return Err(Error::out_of_range(
            "alpha",
            format!("{alpha} not in [0, 1]"),
        ));
    }
    let mut unscaled: Vec<Mat2<BigInt>> = vec![a1(), a0()];
    for n in 0..cf.len() {
        let next = unscaled[n + 1].pow(cf.quotient(n + 1)).mul(&unscaled[n]);
        unscaled.push(next);
    }
    Ok(StandardMatrixSequence {
        cf: cf.clone(),
        alpha: alpha.clone(),
        unscaled,
    })
}

impl StandardMatrixSequence {
    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    /// Largest index `N`.
    pub fn last_index(&self) -> usize {
        self.unscaled.len() - 2
    }

    fn slot(&self, n: isize) -> usize {
        assert!(
            n >= -1 && n <= self.last_index() as isize,
            "index {n} outside -1..={}",
            self.last_index()
        );
        (n + 1) as usize
    }

    /// `alpha^{p_n}`, the scalar factor of `B_n`.
    pub fn scale(&self, n: isize) -> BigRational {
        let p = &self.cf.convergent(n).0;
        Pow::pow(&self.alpha, p.to_u64().expect("p_n fits in u64"))
    }

    /// The integer part `C_n` with `B_n = alpha^{p_n} C_n`.
    pub fn unscaled(&self, n: isize) -> &Mat2<BigInt> {
        &self.unscaled[self.slot(n)]
    }

    /// `B_n` with exact rational entries.
    pub fn matrix(&self, n: isize) -> Mat2<BigRational> {
        self.unscaled(n).to_rational().scale(&self.scale(n))
    }

    /// `tau_n = tr(B_n)`.
    pub fn trace(&self, n: isize) -> BigRational {
        BigRational::from_integer(self.unscaled(n).trace()) * self.scale(n)
    }

    /// `tr(C_n)`; equals `tau_n` when `alpha = 1`.
    pub fn unscaled_trace(&self, n: isize) -> BigUint {
        self.unscaled(n)
            .trace()
            .to_biguint()
            .expect("nonnegative matrices have nonnegative trace")
    }

    pub fn det(&self, n: isize) -> BigRational {
        self.matrix(n).det()
    }

    pub fn traces(&self) -> Vec<BigRational> {
        (-1..=self.last_index() as isize)
            .map(|n| self.trace(n))
            .collect()
    }

    /// `ln rho(B_n)` in double precision, finite even when the entries are not.
    pub fn ln_rho(&self, n: isize) -> f64 {
        let t = self.unscaled_trace(n);
        let ln_c = if t <= BigUint::from(2u8) {
            0.0
        } else {
            let (ln_t, t_f) = ln_biguint(&t);
            ln_t + ((1.0 + (1.0 - 4.0 / (t_f * t_f)).sqrt()) / 2.0).ln()
        };
        let p = self.cf.convergent(n).0.to_f64().unwrap_or(f64::INFINITY);
        if self.alpha.is_zero() {
            return if p == 0.0 { ln_c } else { f64::NEG_INFINITY };
        }
        ln_c + p * self.alpha.to_f64().unwrap_or(0.0).ln()
    }

    /// `rho_n = rho(B_n)` in double precision; overflows to infinity for
    /// large indices, see [`Self::ln_rho`].
    pub fn rho(&self, n: isize) -> f64 {
        self.ln_rho(n).exp()
    }

    pub fn rhos(&self) -> Vec<f64> {
        (-1..=self.last_index() as isize)
            .map(|n| self.rho(n))
            .collect()
    }
}

/// `(ln x, x as f64 or infinity)` for a possibly huge integer.
fn ln_biguint(x: &BigUint) -> (f64, f64) {
    let bits = x.bits();
    if bits <= 1000 {
        let f = x.to_f64().unwrap_or(f64::INFINITY);
        return (f.ln(), f);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    (
        top.ln() + shift as f64 * std::f64::consts::LN_2,
        f64::INFINITY,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn one() -> BigRational {
        BigRational::one()
    }

    #[test]
    fn first_standard_matrix() {
        let cf = ContinuedFraction::new(vec![1, 1]).unwrap();
        let seq = standard_matrices(&cf, &one()).unwrap();
        let b1 = seq.unscaled(1);
        let i = |x: i64| BigInt::from(x);
        assert_eq!(*b1, Mat2::new(i(2), i(1), i(1), i(1)));
        assert_eq!(seq.trace(1), BigRational::from_integer(i(3)));
        assert!((seq.rho(1) - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn fibonacci_traces_follow_the_recurrence() {
        let cf = ContinuedFraction::fibonacci(10).unwrap();
        let seq = standard_matrices(&cf, &one()).unwrap();
        let tau: Vec<BigUint> = (-1..=10).map(|n| seq.unscaled_trace(n)).collect();
        let expect = [2u64, 2, 3, 4, 10, 37, 366, 13532];
        for (t, e) in tau.iter().zip(expect) {
            assert_eq!(*t, BigUint::from(e));
        }
        for k in 3..tau.len() {
            assert_eq!(tau[k].clone(), &tau[k - 1] * &tau[k - 2] - &tau[k - 3]);
        }
    }

    #[test]
    fn unit_determinants() {
        for quotients in [
            vec![1; 15],
            vec![2; 15],
            vec![3, 1, 2, 3, 1, 1, 2, 3, 2, 1, 3, 1, 2, 2, 1],
        ] {
            let cf = ContinuedFraction::new(quotients).unwrap();
            let seq = standard_matrices(&cf, &one()).unwrap();
            for n in -1..=15 {
                assert!(seq.unscaled(n).det().is_one(), "n = {n}");
            }
        }
    }

    #[test]
    fn scaled_matrices_are_products_along_standard_words() {
        use crate::words::standard_words;
        let cf = ContinuedFraction::new(vec![2, 1, 3]).unwrap();
        let alpha = BigRational::new(BigInt::from(3), BigInt::from(4));
        let seq = standard_matrices(&cf, &alpha).unwrap();
        let pair = [a0::<BigRational>(), a1::<BigRational>().scale(&alpha)];
        for (n, s) in (-1..).zip(standard_words(&cf)) {
            let word: Vec<usize> = s.bits().iter().map(|&b| b as usize).collect();
            assert_eq!(seq.matrix(n), Mat2::product(&pair, &word), "n = {n}");
            let det = seq.det(n);
            let p = seq.cf().convergent(n).0.to_u64().unwrap();
            assert_eq!(det, Pow::pow(&alpha, 2 * p));
        }
    }
}
