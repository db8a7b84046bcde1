use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T> Mat2<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Sub<Output = T>,
{
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Mat2 {
            a: self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            b: self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            c: self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            d: self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        }
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat2 {
            a: self.a.clone() * s.clone(),
            b: self.b.clone() * s.clone(),
            c: self.c.clone() * s.clone(),
            d: self.d.clone() * s.clone(),
        }
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    /// Product `M_{i_1} M_{i_2} ... M_{i_n}` along a word of indices.
    pub fn product<'a>(matrices: &'a [Mat2<T>], word: impl IntoIterator<Item = &'a usize>) -> Self
    where
        T: 'a,
    {
        word.into_iter()
            .fold(Self::identity(), |acc, &i| acc.mul(&matrices[i]))
    }
}

impl Mat2<f64> {
    /// `max |eigenvalue|` from the trace and determinant.
    pub fn spectral_radius(&self) -> f64 {
        let (t, det) = (self.trace(), self.det());
        let disc = t * t - 4.0 * det;
        if disc >= 0.0 {
            let root = disc.sqrt();
            // avoid cancellation in the smaller root
            ((t.abs() + root) / 2.0).max(if t.abs() + root > 0.0 {
                (2.0 * det / (t.abs() + root)).abs()
            } else {
                0.0
            })
        } else {
            det.abs().sqrt()
        }
    }

    /// Largest singular value in closed form.
    pub fn spectral_norm(&self) -> f64 {
        let frob = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.det();
        let disc = (frob * frob - 4.0 * det * det).max(0.0);
        ((frob + disc.sqrt()) / 2.0).sqrt()
    }

    pub fn max_row_sum(&self) -> f64 {
        (self.a.abs() + self.b.abs()).max(self.c.abs() + self.d.abs())
    }
}

impl Mat2<BigRational> {
    pub fn to_f64(&self) -> Mat2<f64> {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        Mat2::new(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }
}

impl Mat2<BigInt> {
    pub fn to_rational(&self) -> Mat2<BigRational> {
        let f = |x: &BigInt| BigRational::from_integer(x.clone());
        Mat2::new(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }
}

/// `A_0 = [[1, 1], [0, 1]]`.
pub fn a0<T>() -> Mat2<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Sub<Output = T>,
{
    Mat2::new(T::one(), T::one(), T::zero(), T::one())
}

/// `A_1 = [[1, 0], [1, 1]]`.
pub fn a1<T>() -> Mat2<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Sub<Output = T>,
{
    Mat2::new(T::one(), T::zero(), T::one(), T::one())
}
