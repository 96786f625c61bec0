//! Exact coefficients that keep the uniformizer symbolic.
//!
//! The generator identities only involve the uniformizer through the
//! binomials `π - π^{q^k}`, so they can be verified as identities of
//! rational functions in an indeterminate `π` — which specializes soundly
//! to every concrete uniformizer and sidesteps the astronomically large
//! integers `p^{q^h}` that a concrete check would materialize at large `q`.
//!
//! A [`PiFrac`] is `num / (π^a · Π_E (π - π^E)^{m_E})` with a sparse integer
//! numerator. Denominators stay in factored form; addition takes factor-wise
//! maxima instead of gcd-normalizing, which keeps every operation in the
//! identity checks polynomial-sized.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, Zero};

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Sparse integer polynomial in the symbol `π`, exponents up to `u64`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    terms: BTreeMap<u64, BigInt>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    pub fn one() -> Self {
        SparsePoly::term(0, BigInt::one())
    }

    pub fn term(exponent: u64, coeff: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        SparsePoly { terms }
    }

    /// `π - π^e` for `e >= 2`.
    pub fn binomial(e: u64) -> Self {
        assert!(e >= 2);
        let mut terms = BTreeMap::new();
        terms.insert(1, BigInt::one());
        terms.insert(e, -BigInt::one());
        SparsePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exponent: u64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(existing) => {
                *existing += coeff;
                if existing.is_zero() {
                    self.terms.remove(&exponent);
                }
            }
            None => {
                self.terms.insert(exponent, coeff);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = SparsePoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn shift(&self, by: u64) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + by, c.clone()))
                .collect(),
        }
    }

    /// Lowest exponent, `None` for zero.
    pub fn order(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }
}

/// Factored denominator `π^pi · Π_E (π - π^E)^{mult}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Denominator {
    pi: u64,
    binomials: BTreeMap<u64, u32>,
}

impl Denominator {
    pub fn trivial() -> Self {
        Denominator::default()
    }

    pub fn pi_power(k: u64) -> Self {
        Denominator {
            pi: k,
            binomials: BTreeMap::new(),
        }
    }

    pub fn from_binomials(exponents: &[u64]) -> Self {
        let mut binomials = BTreeMap::new();
        for &e in exponents {
            assert!(e >= 2);
            *binomials.entry(e).or_insert(0) += 1;
        }
        Denominator { pi: 0, binomials }
    }

    fn merge(&self, rhs: &Self) -> Self {
        let mut binomials = self.binomials.clone();
        for (e, m) in &rhs.binomials {
            *binomials.entry(*e).or_insert(0) += m;
        }
        Denominator {
            pi: self.pi + rhs.pi,
            binomials,
        }
    }

    fn max_with(&self, rhs: &Self) -> Self {
        let mut binomials = self.binomials.clone();
        for (e, m) in &rhs.binomials {
            let entry = binomials.entry(*e).or_insert(0);
            *entry = (*entry).max(*m);
        }
        Denominator {
            pi: self.pi.max(rhs.pi),
            binomials,
        }
    }

    /// The factors present in `target` but missing here, as a polynomial.
    /// Requires `self` to divide `target` factor-wise.
    fn missing_factors(&self, target: &Self) -> SparsePoly {
        let mut out = SparsePoly::one();
        out = out.shift(target.pi - self.pi);
        for (e, m_target) in &target.binomials {
            let m_here = self.binomials.get(e).copied().unwrap_or(0);
            for _ in m_here..*m_target {
                out = out.mul(&SparsePoly::binomial(*e));
            }
        }
        out
    }

    pub fn expand(&self) -> SparsePoly {
        Denominator::trivial().missing_factors(self)
    }

    /// Exact valuation of any specialization sending `π` to a uniformizer:
    /// `π` contributes 1 per power and each binomial `π(1 - π^{E-1})`
    /// contributes exactly 1.
    fn valuation(&self) -> i64 {
        self.pi as i64 + self.binomials.values().map(|&m| m as i64).sum::<i64>()
    }
}

/// A fraction `num / den` in the symbolic uniformizer.
#[derive(Debug, Clone)]
pub struct PiFrac {
    num: SparsePoly,
    den: Denominator,
}

impl PiFrac {
    pub fn zero() -> Self {
        PiFrac {
            num: SparsePoly::zero(),
            den: Denominator::trivial(),
        }
    }

    pub fn one() -> Self {
        PiFrac {
            num: SparsePoly::one(),
            den: Denominator::trivial(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        PiFrac {
            num: SparsePoly::term(0, BigInt::from(n)),
            den: Denominator::trivial(),
        }
    }

    /// `π^k`.
    pub fn pi_pow(k: u64) -> Self {
        PiFrac {
            num: SparsePoly::term(k, BigInt::one()),
            den: Denominator::trivial(),
        }
    }

    /// `π^{-k}`.
    pub fn pi_pow_neg(k: u64) -> Self {
        PiFrac {
            num: SparsePoly::one(),
            den: Denominator::pi_power(k),
        }
    }

    /// `1 / Π (π - π^{E})` over the listed exponents `E >= 2`.
    pub fn inv_binomial_product(exponents: &[u64]) -> Self {
        PiFrac {
            num: SparsePoly::one(),
            den: Denominator::from_binomials(exponents),
        }
    }

    /// `Π (π - π^{E})` as a numerator.
    pub fn binomial_product(exponents: &[u64]) -> Self {
        PiFrac {
            num: Denominator::from_binomials(exponents).expand(),
            den: Denominator::trivial(),
        }
    }

    pub fn numerator(&self) -> &SparsePoly {
        &self.num
    }

    /// A sound lower bound for the valuation of any specialization of this
    /// fraction to a model with ramification degree `e` over the prime `p`:
    /// numerator terms `c·π^j` have valuation at least `e·v_p(c) + j`, and
    /// the denominator valuation is exact. `None` for zero.
    pub fn valuation_lower_bound(&self, p: u64, e: u64) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        let p = BigInt::from(p);
        let num_bound = self
            .num
            .terms()
            .map(|(exp, coeff)| {
                let mut c = coeff.abs();
                let mut v = 0i64;
                while (&c % &p).is_zero() {
                    c /= &p;
                    v += 1;
                }
                e as i64 * v + *exp as i64
            })
            .min()
            .expect("nonzero numerator");
        Some(num_bound - self.den.valuation())
    }
}

impl PartialEq for PiFrac {
    fn eq(&self, other: &Self) -> bool {
        // Cross-multiplied comparison; denominators are never zero.
        self.num.mul(&other.den.expand()) == other.num.mul(&self.den.expand())
    }
}

impl fmt::Display for PiFrac {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({:?})/({:?})", self.num, self.den)
    }
}

impl Scalar for PiFrac {
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        let den = self.den.max_with(&rhs.den);
        let left = self.num.mul(&self.den.missing_factors(&den));
        let right = rhs.num.mul(&rhs.den.missing_factors(&den));
        let num = left.add(&right);
        if num.is_zero() {
            return PiFrac::zero();
        }
        PiFrac { num, den }
    }

    fn neg(&self) -> Self {
        PiFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let num = self.num.mul(&rhs.num);
        if num.is_zero() {
            return PiFrac::zero();
        }
        PiFrac {
            num,
            den: self.den.merge(&rhs.den),
        }
    }

    /// Inversion of the shapes the generator calculus divides by: a single
    /// `±π^a` term or `±(π^u - π^v)`. Anything else is unsupported.
    fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::NotInvertible);
        }
        let den_poly = self.den.expand();
        let terms: Vec<(u64, BigInt)> = self.num.terms().map(|(e, c)| (*e, c.clone())).collect();
        match terms.as_slice() {
            [(a, c)] if c.abs().is_one() => {
                let mut num = den_poly;
                if c.is_negative() {
                    num = num.neg();
                }
                Ok(PiFrac {
                    num,
                    den: Denominator::pi_power(*a),
                })
            }
            [(u, cu), (v, cv)] if cu.abs().is_one() && *cv == -cu.clone() && *u >= 1 => {
                // c(π^u - π^v) = c·π^{u-1}·(π - π^{v-u+1})
                let mut num = den_poly;
                if cu.is_negative() {
                    num = num.neg();
                }
                let mut den = Denominator::pi_power(u - 1);
                den.binomials.insert(v - u + 1, 1);
                Ok(PiFrac { num, den })
            }
            _ => Err(Error::InvalidArgument(
                "symbolic inverse supported only for uniformizer powers and binomials".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_arithmetic() {
        // 1/(π - π^3) + 1/(π - π^3) = 2/(π - π^3)
        let x = PiFrac::inv_binomial_product(&[3]);
        let two_x = x.add(&x);
        assert_eq!(two_x, PiFrac::from_int(2).mul(&x));

        // (π - π^3) * 1/(π - π^3) = 1
        let b = PiFrac::binomial_product(&[3]);
        assert_eq!(b.mul(&x), PiFrac::one());

        // π^2 * π^{-2} = 1
        assert_eq!(PiFrac::pi_pow(2).mul(&PiFrac::pi_pow_neg(2)), PiFrac::one());

        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn inverse_patterns() {
        let pi3 = PiFrac::pi_pow(3);
        assert_eq!(pi3.inv().unwrap().mul(&pi3), PiFrac::one());

        let b = PiFrac::binomial_product(&[5]);
        assert_eq!(b.inv().unwrap().mul(&b), PiFrac::one());

        let neg_b = b.neg();
        assert_eq!(neg_b.inv().unwrap().mul(&neg_b), PiFrac::one());

        let unsupported = PiFrac::from_int(1).add(&PiFrac::pi_pow(1));
        assert!(unsupported.inv().is_err());
    }

    #[test]
    fn valuation_bounds() {
        // π^3 / (π - π^2): numerator bound 3, denominator exactly 1.
        let x = PiFrac::pi_pow(3).mul(&PiFrac::inv_binomial_product(&[2]));
        assert_eq!(x.valuation_lower_bound(3, 1), Some(2));

        // p·π with e = 2: bound 2*1 + 1 = 3.
        let y = PiFrac::from_int(3).mul(&PiFrac::pi_pow(1));
        assert_eq!(y.valuation_lower_bound(3, 2), Some(3));

        assert_eq!(PiFrac::zero().valuation_lower_bound(3, 1), None);
    }
}
