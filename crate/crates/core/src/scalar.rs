//! The coefficient interface shared by the polynomial and series engines.

use crate::{Error, Result};

/// Exact field-like coefficients.
///
/// Implementors: number-field elements, finite-field elements, and the
/// symbolic uniformizer fractions of [`crate::pifrac`]. Everything is by
/// reference; implementations are expected to be exact (no rounding, ever).
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    /// Multiplicative inverse. Errors on zero (or, for symbolic scalars, on
    /// shapes outside the invertible fragment).
    fn inv(&self) -> Result<Self>;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// `self^k` by binary powering, `k >= 0`. `k = 0` requires the scalar to
    /// be nonzero (returns `self * self^{-1}`).
    fn pow_u64(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return if self.is_zero() {
                Err(Error::InvalidArgument("0^0 for scalars".into()))
            } else {
                self.mul(&self.inv()?).inv()
            };
        }
        let mut base = self.clone();
        let mut exp = k;
        let mut acc: Option<Self> = None;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.expect("k >= 1"))
    }
}
