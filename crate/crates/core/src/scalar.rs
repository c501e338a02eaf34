//! The scalar field geometry is generic over.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

/// An ordered field. Predicates are exact only for exact fields such as
/// [`BigRational`]; `f64` is accepted for quick experiments.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync {
    fn from_ratio(p: i64, q: i64) -> Self;

    fn from_int(p: i64) -> Self {
        Self::from_ratio(p, 1)
    }

    /// Some `s` with `0 <= s <= sqrt(self)`, and `s > 0` when `self > 0`.
    fn sqrt_lower(&self) -> Self;

    /// Some `s >= sqrt(self)`.
    fn sqrt_upper(&self) -> Self;
}

impl Scalar for BigRational {
    fn from_ratio(p: i64, q: i64) -> Self {
        BigRational::new(p.into(), q.into())
    }

    fn sqrt_lower(&self) -> Self {
        if !self.is_positive() {
            return Self::zero();
        }
        // sqrt(p/q) = sqrt(p·q·s²) / (q·s), scaled until the floor is nonzero
        let pq = self.numer() * self.denom();
        let mut scale = BigInt::from(1u32 << 16);
        loop {
            let r = (&pq * &scale * &scale).sqrt();
            if !r.is_zero() {
                return BigRational::new(r, self.denom() * &scale);
            }
            scale = &scale * &scale;
        }
    }

    fn sqrt_upper(&self) -> Self {
        if !self.is_positive() {
            return Self::zero();
        }
        let pq = self.numer() * self.denom();
        let scale = BigInt::from(1u32 << 16);
        let n = &pq * &scale * &scale;
        let r = n.sqrt();
        let r = if &r * &r == n { r } else { r + BigInt::one() };
        BigRational::new(r, self.denom() * scale)
    }
}

impl Scalar for f64 {
    fn from_ratio(p: i64, q: i64) -> Self {
        p as f64 / q as f64
    }

    fn sqrt_lower(&self) -> Self {
        self.max(0.0).sqrt()
    }

    fn sqrt_upper(&self) -> Self {
        self.max(0.0).sqrt()
    }
}
