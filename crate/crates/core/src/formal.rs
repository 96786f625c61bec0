//! Laws-with-logarithm: a truncated power-series engine.
//!
//! A law is stored by its log coefficients over the model's fraction field;
//! the group structure, the `[α]`-series, typification, and strict
//! isomorphisms are all computed from the log. Series arithmetic is exact
//! below the truncation bound and discards everything above it.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactnum::{FieldElement, NumberFieldModel};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// A truncated power series in `vars` variables, keeping total degree
/// `<= bound`. Terms map exponent vectors to nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<C: Scalar> {
    vars: usize,
    bound: u64,
    terms: BTreeMap<Vec<u64>, C>,
}

impl<C: Scalar> TruncatedSeries<C> {
    pub fn zero(vars: usize, bound: u64) -> Self {
        TruncatedSeries {
            vars,
            bound,
            terms: BTreeMap::new(),
        }
    }

    /// The monomial series `one · X_{var}`.
    pub fn variable(one: C, vars: usize, var: usize, bound: u64) -> Self {
        let mut s = Self::zero(vars, bound);
        let mut exp = vec![0; vars];
        exp[var] = 1;
        s.add_term(exp, one);
        s
    }

    pub fn from_terms(vars: usize, bound: u64, terms: Vec<(Vec<u64>, C)>) -> Self {
        let mut s = Self::zero(vars, bound);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    /// Univariate constructor from `exponent -> coefficient`.
    pub fn univariate(bound: u64, coeffs: &BTreeMap<u64, C>) -> Self {
        let mut s = Self::zero(1, bound);
        for (e, c) in coeffs {
            s.add_term(vec![*e], c.clone());
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u64>, &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[u64]) -> Option<&C> {
        self.terms.get(exp)
    }

    pub fn constant_term(&self) -> Option<&C> {
        self.terms.get(&vec![0; self.vars])
    }

    fn add_term(&mut self, exp: Vec<u64>, c: C) {
        assert_eq!(exp.len(), self.vars, "exponent arity mismatch");
        if c.is_zero() || exp.iter().sum::<u64>() > self.bound {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    fn check_compat(&self, rhs: &Self) {
        assert_eq!(self.vars, rhs.vars, "series arity mismatch");
        assert_eq!(self.bound, rhs.bound, "series truncation mismatch");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_compat(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            vars: self.vars,
            bound: self.bound,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_compat(rhs);
        let mut out = Self::zero(self.vars, self.bound);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let exp: Vec<u64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if exp.iter().sum::<u64>() <= self.bound {
                    out.add_term(exp, c1.mul(c2));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars, self.bound);
        }
        let mut out = Self::zero(self.vars, self.bound);
        for (e, coeff) in &self.terms {
            out.add_term(e.clone(), coeff.mul(c));
        }
        out
    }

    pub fn pow(&self, k: u64) -> Self {
        assert!(k >= 1);
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
        acc.unwrap()
    }

    /// Substitute `inner` (constant-term-free) into this univariate series.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        assert_eq!(self.vars, 1, "compose needs a univariate outer series");
        assert_eq!(self.bound, inner.bound, "series truncation mismatch");
        if inner.constant_term().is_some() {
            return Err(Error::NotStrict(
                "composition argument must have zero constant term".into(),
            ));
        }
        let mut out = Self::zero(inner.vars, inner.bound);
        let mut cur_pow: Option<(u64, Self)> = None;
        for (e, c) in &self.terms {
            let k = e[0];
            if k == 0 {
                out.add_term(vec![0; inner.vars], c.clone());
                continue;
            }
            let power = match cur_pow.take() {
                None => inner.pow(k),
                Some((prev_k, prev)) => {
                    if k == prev_k {
                        prev
                    } else {
                        prev.mul(&inner.pow(k - prev_k))
                    }
                }
            };
            out = out.add(&power.scale(c));
            cur_pow = Some((k, power));
        }
        Ok(out)
    }

    /// Is this `X + higher`?
    pub fn is_strict(&self) -> bool {
        if self.vars != 1 || self.constant_term().is_some() {
            return false;
        }
        match self.terms.get(&vec![1]) {
            // the linear coefficient must be the unit 1: c·c^{-1} = c
            Some(c) => match c.inv() {
                Ok(inv) => c.mul(&inv) == *c,
                Err(_) => false,
            },
            None => false,
        }
    }

    /// Compositional inverse of a strict univariate series, exact below the
    /// truncation bound.
    pub fn reversion(&self) -> Result<Self> {
        if !self.is_strict() {
            return Err(Error::NotStrict("reversion needs X + higher".into()));
        }
        let one = self.terms.get(&vec![1]).expect("strict").clone();
        let x = Self::variable(one, 1, 0, self.bound);
        // h = f - X has valuation >= 2; the iteration g <- X - h(g) gains at
        // least one correct degree per pass.
        let h = self.sub(&x);
        let mut g = x.clone();
        for _ in 0..=self.bound {
            let next = x.sub(&h.compose(&g)?);
            if next == g {
                break;
            }
            g = next;
        }
        Ok(g)
    }
}

/// A one-dimensional law-with-logarithm over a number-field model: the log
/// coefficients by `X`-exponent (the exponent-1 coefficient is 1), plus the
/// truncation bound used for series expansions.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalModuleLaw {
    model: Arc<NumberFieldModel>,
    log: BTreeMap<u64, FieldElement>,
    bound: u64,
}

impl FormalModuleLaw {
    /// The additive law: `log = X`.
    pub fn additive(model: &Arc<NumberFieldModel>, bound: u64) -> Self {
        let mut log = BTreeMap::new();
        log.insert(1, model.one());
        FormalModuleLaw {
            model: Arc::clone(model),
            log,
            bound,
        }
    }

    /// A `q`-typical law from its higher log coefficients `m_1, m_2, ...`
    /// (placed at exponents `q, q^2, ...`).
    pub fn typical(
        model: &Arc<NumberFieldModel>,
        coeffs: &[FieldElement],
        bound: u64,
    ) -> Result<Self> {
        let q = model.q();
        let mut log = BTreeMap::new();
        log.insert(1, model.one());
        let mut exp = 1u64;
        for c in coeffs {
            exp = exp
                .checked_mul(q)
                .ok_or_else(|| Error::SizeLimit("log exponent overflow".into()))?;
            if !c.is_zero() {
                log.insert(exp, c.clone());
            }
        }
        Ok(FormalModuleLaw {
            model: Arc::clone(model),
            log,
            bound,
        })
    }

    /// A law from an arbitrary log support; requires the exponent-1
    /// coefficient to be exactly 1.
    pub fn from_log(
        model: &Arc<NumberFieldModel>,
        log: BTreeMap<u64, FieldElement>,
        bound: u64,
    ) -> Result<Self> {
        match log.get(&1) {
            Some(c) if *c == model.one() => {}
            _ => {
                return Err(Error::NotStrict(
                    "log must be X + higher (leading coefficient 1)".into(),
                ))
            }
        }
        if log.keys().any(|&e| e == 0) {
            return Err(Error::NotStrict("log has a constant term".into()));
        }
        let log = log.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(FormalModuleLaw {
            model: Arc::clone(model),
            log,
            bound,
        })
    }

    pub fn model(&self) -> &Arc<NumberFieldModel> {
        &self.model
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn log_coefficients(&self) -> &BTreeMap<u64, FieldElement> {
        &self.log
    }

    /// The typical log coefficient `m_i` at exponent `q^i` (zero if absent).
    pub fn typical_coefficient(&self, i: u32) -> Result<FieldElement> {
        let q = self.model.q();
        let exp = q
            .checked_pow(i)
            .ok_or_else(|| Error::SizeLimit("exponent overflow".into()))?;
        Ok(self
            .log
            .get(&exp)
            .cloned()
            .unwrap_or_else(|| self.model.zero()))
    }

    /// Support entirely on powers of `q'` (including `q'^0 = 1`)?
    pub fn is_typical(&self, q_prime: u64) -> bool {
        self.log.keys().all(|&e| is_power_of(e, q_prime))
    }

    pub fn log_series(&self) -> TruncatedSeries<FieldElement> {
        TruncatedSeries::univariate(self.bound, &self.log)
    }

    pub fn exp_series(&self) -> Result<TruncatedSeries<FieldElement>> {
        exp_from_log(&self.log_series())
    }

    /// The formal sum `F(s1, s2) = exp(log s1 + log s2)`; both arguments
    /// must be constant-term-free series in the same variables.
    pub fn formal_sum(
        &self,
        s1: &TruncatedSeries<FieldElement>,
        s2: &TruncatedSeries<FieldElement>,
    ) -> Result<TruncatedSeries<FieldElement>> {
        let log = self.log_series();
        let sum = log.compose(s1)?.add(&log.compose(s2)?);
        self.exp_series()?.compose(&sum)
    }

    /// The `[α]`-series `exp(α · log X)`.
    pub fn bracket(&self, alpha: &FieldElement) -> Result<TruncatedSeries<FieldElement>> {
        let scaled = self.log_series().scale(alpha);
        self.exp_series()?.compose(&scaled)
    }

    /// Typification: restrict the log to exponents that are powers of `q'`
    /// (`q'` must be a power of the model's residue cardinality).
    pub fn typify(&self, q_prime: u64) -> Result<Self> {
        if !is_power_of(q_prime, self.model.q()) {
            return Err(Error::InvalidArgument(format!(
                "{q_prime} is not a power of q = {}",
                self.model.q()
            )));
        }
        let log = self
            .log
            .iter()
            .filter(|(e, _)| is_power_of(**e, q_prime))
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        Ok(FormalModuleLaw {
            model: Arc::clone(&self.model),
            log,
            bound: self.bound,
        })
    }

    /// Whether `[ζ]_F(X) = ζX` below the truncation bound, decided on the
    /// log side: `log(ζX) = ζ·log(X)` iff `ζ^E = ζ` at every supported
    /// exponent `E`, and `exp` is a bijection on truncated constant-free
    /// series, so this is exactly the bracket comparison. Requires
    /// `ζ^{q-1} = 1`.
    pub fn is_linear_on_root(&self, zeta: &FieldElement) -> Result<bool> {
        let order = self.model.q() - 1;
        if order > 0 && zeta.pow_u64(order)? != self.model.one() {
            return Err(Error::InvalidArgument(
                "expected a root of unity of order dividing q - 1".into(),
            ));
        }
        for (&e, coeff) in &self.log {
            if e > self.bound || coeff.is_zero() {
                continue;
            }
            if zeta.pow_u64(e)? != *zeta {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Assert that the group law `F(X, Y)` is integral (all coefficient
    /// valuations nonnegative) through the given total degree.
    pub fn integrality_check(&self, through_degree: u64) -> Result<()> {
        let bound = through_degree.min(self.bound);
        let model = &self.model;
        let log = TruncatedSeries::univariate(bound, &self.log);
        let x = TruncatedSeries::variable(model.one(), 2, 0, bound);
        let y = TruncatedSeries::variable(model.one(), 2, 1, bound);
        let sum = log.compose(&x)?.add(&log.compose(&y)?);
        let exp = exp_from_log(&log)?;
        let f = exp.compose(&sum)?;
        for (e, c) in f.terms() {
            if !c.valuation().is_nonnegative() {
                return Err(Error::MathAssertion(format!(
                    "law coefficient at {e:?} has negative valuation"
                )));
            }
        }
        Ok(())
    }
}

fn is_power_of(e: u64, base: u64) -> bool {
    if e == 1 {
        return true;
    }
    if base <= 1 {
        return false;
    }
    let mut acc = 1u64;
    while acc < e {
        match acc.checked_mul(base) {
            Some(next) => acc = next,
            None => return false,
        }
    }
    acc == e
}

/// Series reversion specialized to logs: `exp(log(X)) = X = log(exp(X))`
/// below the truncation bound.
pub fn exp_from_log(log: &TruncatedSeries<FieldElement>) -> Result<TruncatedSeries<FieldElement>> {
    log.reversion()
}

/// Transport of an endomorphism-series along a strict isomorphism:
/// `ρ ↦ φ ∘ ρ ∘ φ^{-1}`.
pub fn transport_structure(
    phi: &TruncatedSeries<FieldElement>,
    rho: &TruncatedSeries<FieldElement>,
) -> Result<TruncatedSeries<FieldElement>> {
    if !phi.is_strict() {
        return Err(Error::NotStrict("transport needs a strict series".into()));
    }
    let inv = phi.reversion()?;
    phi.compose(&rho.compose(&inv)?)
}

/// A strict isomorphism of typical laws, stored by its `t`-coefficients
/// (`t_0 = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct StrictIso {
    t: Vec<FieldElement>,
}

impl StrictIso {
    pub fn coefficients(&self) -> &[FieldElement] {
        &self.t
    }
}

/// Build the target law of the strict isomorphism with the given
/// `t`-coefficients out of a typical source law: the target log
/// coefficients are `g_i = Σ_{j=0}^{i} m_j t_{i-j}^{q^j}`.
pub fn iso_from_t(
    law: &FormalModuleLaw,
    t: &[FieldElement],
) -> Result<(StrictIso, FormalModuleLaw)> {
    let model = law.model();
    let q = model.q();
    if !law.is_typical(q) {
        return Err(Error::NotTypical(q));
    }
    match t.first() {
        Some(c) if *c == model.one() => {}
        _ => return Err(Error::InvalidArgument("t_0 must be 1".into())),
    }
    let max_index = typical_index_bound(q, law.bound());
    let mut g = Vec::new();
    for i in 0..=max_index {
        let mut acc = model.zero();
        for j in 0..=i {
            let m_j = law.typical_coefficient(j)?;
            if m_j.is_zero() {
                continue;
            }
            let t_val = t
                .get((i - j) as usize)
                .cloned()
                .unwrap_or_else(|| model.zero());
            if t_val.is_zero() {
                continue;
            }
            let power = q
                .checked_pow(j)
                .ok_or_else(|| Error::SizeLimit("exponent overflow".into()))?;
            acc = acc.add(&m_j.mul(&t_val.pow_u64(power)?));
        }
        g.push(acc);
    }
    let target = FormalModuleLaw::typical(model, &g[1..], law.bound())?;
    Ok((StrictIso { t: t.to_vec() }, target))
}

/// Solve for the `t`-coefficients of the strict isomorphism between two
/// typical laws: `t_i = g_i - Σ_{j=0}^{i-1} m_{i-j} t_j^{q^{i-j}}`.
pub fn t_from_iso(source: &FormalModuleLaw, target: &FormalModuleLaw) -> Result<Vec<FieldElement>> {
    let model = source.model();
    let q = model.q();
    if **target.model() != **model {
        return Err(Error::InvalidArgument(
            "laws live over different models".into(),
        ));
    }
    if !source.is_typical(q) || !target.is_typical(q) {
        return Err(Error::NotTypical(q));
    }
    let max_index = typical_index_bound(q, source.bound().min(target.bound()));
    let mut t: Vec<FieldElement> = vec![model.one()];
    for i in 1..=max_index {
        let mut acc = target.typical_coefficient(i)?;
        for j in 0..i {
            let m = source.typical_coefficient(i - j)?;
            if m.is_zero() {
                continue;
            }
            let power = q
                .checked_pow(i - j)
                .ok_or_else(|| Error::SizeLimit("exponent overflow".into()))?;
            let term = m.mul(&t[j as usize].pow_u64(power)?);
            acc = acc.sub(&term);
        }
        t.push(acc);
    }
    Ok(t)
}

/// Largest `i` with `q^i <=` the truncation bound.
fn typical_index_bound(q: u64, bound: u64) -> u32 {
    let mut acc = 1u64;
    let mut i = 0u32;
    while let Some(next) = acc.checked_mul(q) {
        if next > bound {
            break;
        }
        acc = next;
        i += 1;
    }
    i
}

/// The roots of unity of order dividing `q - 1` reachable in the model
/// (powers of the unramified generator and their negatives), paired with
/// their exact multiplicative orders.
pub fn roots_of_unity(model: &Arc<NumberFieldModel>) -> Vec<(FieldElement, u64)> {
    let q = model.q();
    let order = q - 1;
    if order == 0 {
        return Vec::new();
    }
    let mut candidates = vec![model.one(), model.one().neg()];
    let mut power = model.zeta();
    for _ in 0..2 * model.residue_degree() {
        candidates.push(power.clone());
        candidates.push(power.neg());
        power = power.mul(&model.zeta());
    }
    let mut out: Vec<(FieldElement, u64)> = Vec::new();
    for c in candidates {
        if c.is_zero() || out.iter().any(|(x, _)| *x == c) {
            continue;
        }
        if c.pow_u64(order).map(|x| x == model.one()).unwrap_or(false) {
            let mut ord = order;
            for d in 1..=order {
                if order % d == 0 && c.pow_u64(d).map(|x| x == model.one()).unwrap_or(false) {
                    ord = d;
                    break;
                }
            }
            out.push((c, ord));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;
    use num::BigRational;

    fn q3() -> Arc<NumberFieldModel> {
        NumberFieldModel::make(3, 1, 1).unwrap()
    }

    fn q4() -> Arc<NumberFieldModel> {
        NumberFieldModel::new(
            2,
            2,
            1,
            Some(vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]),
            None,
        )
        .unwrap()
    }

    fn series_x(model: &Arc<NumberFieldModel>, bound: u64) -> TruncatedSeries<FieldElement> {
        TruncatedSeries::variable(model.one(), 1, 0, bound)
    }

    #[test]
    fn reversion_identity_and_oracle() {
        let k = q3();
        let x = series_x(&k, 12);
        assert_eq!(x.reversion().unwrap(), x);

        // f = X + X^2, inverted; check against the compositional identity
        // and the classical expansion X - X^2 + 2X^3 - 5X^4 ...
        let f = x.add(&TruncatedSeries::from_terms(1, 12, vec![(vec![2], k.one())]));
        let g = f.reversion().unwrap();
        assert_eq!(f.compose(&g).unwrap(), x);
        assert_eq!(g.compose(&f).unwrap(), x);
        assert_eq!(g.coefficient(&[2]).unwrap(), &k.from_integer(-1));
        assert_eq!(g.coefficient(&[3]).unwrap(), &k.from_integer(2));
        assert_eq!(g.coefficient(&[4]).unwrap(), &k.from_integer(-5));

        let add = FormalModuleLaw::additive(&k, 12);
        assert_eq!(add.exp_series().unwrap(), add.log_series());
    }

    #[test]
    fn reversion_round_trips_on_sampled_strict_series() {
        let k = q3();
        let bound = 10;
        let x = series_x(&k, bound);
        let samples = [
            vec![(vec![2u64], k.from_integer(3))],
            vec![(vec![2], k.from_integer(-1)), (vec![3], k.from_integer(2))],
            vec![
                (vec![4], k.from_rational(BigRational::new(1.into(), 3.into()))),
                (vec![5], k.from_integer(7)),
            ],
        ];
        for extra in samples {
            let f = x.add(&TruncatedSeries::from_terms(1, bound, extra));
            let g = f.reversion().unwrap();
            assert_eq!(f.compose(&g).unwrap(), x);
            assert_eq!(g.compose(&f).unwrap(), x);
        }
    }

    #[test]
    fn reversion_requires_strict() {
        let k = q3();
        let two_x = TruncatedSeries::from_terms(1, 8, vec![(vec![1], k.from_integer(2))]);
        assert!(two_x.reversion().is_err());
    }

    #[test]
    fn formal_sum_unit_and_commutativity() {
        let k = q3();
        let bound = 10;
        let m1 = k.from_rational(BigRational::new(BigInt::from(1), BigInt::from(3)));
        let law = FormalModuleLaw::typical(&k, &[m1], bound).unwrap();

        let x = TruncatedSeries::variable(k.one(), 2, 0, bound);
        let y = TruncatedSeries::variable(k.one(), 2, 1, bound);
        let zero = TruncatedSeries::zero(2, bound);

        assert_eq!(law.formal_sum(&x, &zero).unwrap(), x);
        assert_eq!(
            law.formal_sum(&x, &y).unwrap(),
            law.formal_sum(&y, &x).unwrap()
        );

        let add = FormalModuleLaw::additive(&k, bound);
        assert_eq!(add.formal_sum(&x, &y).unwrap(), x.add(&y));

        // nonzero constant terms are rejected
        let bad = TruncatedSeries::from_terms(2, bound, vec![(vec![0, 0], k.one())]);
        assert!(law.formal_sum(&bad, &y).is_err());
    }

    #[test]
    fn formal_sum_leading_correction_term() {
        // For log = X + X^p/p, the degree-p part of F(X,Y) is
        // ((X^p + Y^p) - (X+Y)^p)/p: computed by independent expansion.
        let p = 3u64;
        let k = q3();
        let bound = p;
        let m1 = k.from_rational(BigRational::new(BigInt::from(1), BigInt::from(p as i64)));
        let law = FormalModuleLaw::typical(&k, &[m1.clone()], bound).unwrap();
        let x = TruncatedSeries::variable(k.one(), 2, 0, bound);
        let y = TruncatedSeries::variable(k.one(), 2, 1, bound);
        let f = law.formal_sum(&x, &y).unwrap();

        let xy = x.add(&y);
        let oracle = xy.add(&x.pow(p).add(&y.pow(p)).sub(&xy.pow(p)).scale(&m1));
        assert_eq!(f, oracle);

        law.integrality_check(p).unwrap();
    }

    #[test]
    fn formal_sum_associativity_through_truncation() {
        let k = q3();
        let bound = 9;
        let m1 = k.from_rational(BigRational::new(BigInt::from(1), BigInt::from(3)));
        let law = FormalModuleLaw::typical(&k, &[m1], bound).unwrap();
        let x = TruncatedSeries::variable(k.one(), 3, 0, bound);
        let y = TruncatedSeries::variable(k.one(), 3, 1, bound);
        let z = TruncatedSeries::variable(k.one(), 3, 2, bound);
        let left = law
            .formal_sum(&law.formal_sum(&x, &y).unwrap(), &z)
            .unwrap();
        let right = law
            .formal_sum(&x, &law.formal_sum(&y, &z).unwrap())
            .unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn bracket_examples_and_multiplicativity() {
        let k = q3();
        let bound = 9;
        let m1 = k.from_rational(BigRational::new(BigInt::from(1), BigInt::from(3)));
        let law = FormalModuleLaw::typical(&k, &[m1], bound).unwrap();

        let x = series_x(&k, bound);
        assert_eq!(law.bracket(&k.one()).unwrap(), x);
        assert!(law.bracket(&k.zero()).unwrap().is_zero());

        let add = FormalModuleLaw::additive(&k, bound);
        let c = k.from_integer(5);
        assert_eq!(add.bracket(&c).unwrap(), x.scale(&c));

        let a = k.from_integer(2);
        let b = k.from_integer(-1);
        let ab = law.bracket(&a.mul(&b)).unwrap();
        let composed = law
            .bracket(&a)
            .unwrap()
            .compose(&law.bracket(&b).unwrap())
            .unwrap();
        assert_eq!(ab, composed);
    }

    #[test]
    fn typify_restricts_log_support() {
        let k = q3();
        let q = k.q();
        let bound = 100;
        let mut log = BTreeMap::new();
        log.insert(1, k.one());
        log.insert(q, k.from_integer(7));
        log.insert(q * q, k.from_integer(5));
        let law = FormalModuleLaw::from_log(&k, log, bound).unwrap();
        let typified = law.typify(q * q).unwrap();
        let support: Vec<u64> = typified.log_coefficients().keys().copied().collect();
        assert_eq!(support, vec![1, q * q]);

        assert_eq!(typified.typify(q * q).unwrap(), typified);
        assert_eq!(law.typify(q).unwrap(), law);

        let add = FormalModuleLaw::additive(&k, bound);
        assert_eq!(add.typify(q).unwrap(), add);

        assert!(law.typify(2).is_err());
    }

    #[test]
    fn iso_from_t_examples() {
        let k = q3();
        let bound = 27;

        let m1 = k.from_integer(2);
        let law = FormalModuleLaw::typical(&k, &[m1.clone()], bound).unwrap();
        let (_, same) = iso_from_t(&law, &[k.one()]).unwrap();
        assert_eq!(same, law);

        let add = FormalModuleLaw::additive(&k, bound);
        let t1 = k.from_integer(4);
        let (_, g) = iso_from_t(&add, &[k.one(), t1.clone()]).unwrap();
        assert_eq!(g.typical_coefficient(1).unwrap(), t1);
        assert_eq!(g.typical_coefficient(2).unwrap(), k.zero());

        let (_, g) = iso_from_t(&law, &[k.one(), t1.clone()]).unwrap();
        assert_eq!(g.typical_coefficient(1).unwrap(), m1.add(&t1));

        assert!(iso_from_t(&law, &[k.from_integer(2)]).is_err());
    }

    #[test]
    fn t_from_iso_base_cases_and_round_trip() {
        let k = q3();
        let bound = 27;
        let m1 = k.from_integer(2);
        let law = FormalModuleLaw::typical(&k, &[m1], bound).unwrap();

        let t = t_from_iso(&law, &law).unwrap();
        assert_eq!(t[0], k.one());
        assert!(t[1..].iter().all(|c| c.is_zero()));

        let add = FormalModuleLaw::additive(&k, bound);
        let gval = k.from_integer(7);
        let target = FormalModuleLaw::typical(&k, &[gval.clone()], bound).unwrap();
        let t = t_from_iso(&add, &target).unwrap();
        assert_eq!(t[1], gval);

        let t_list = vec![
            k.one(),
            k.from_integer(-2),
            k.from_integer(5),
            k.from_integer(1),
        ];
        let (_, target) = iso_from_t(&law, &t_list).unwrap();
        let recovered = t_from_iso(&law, &target).unwrap();
        assert_eq!(recovered, t_list);
    }

    #[test]
    fn iso_target_log_matches_series_definition() {
        // log_G(X) = Σ_i log_F(t_i X^{q^i}) below truncation: the series
        // route and the coefficient route must agree.
        let k = q3();
        let q = k.q();
        let bound = 27;
        let law =
            FormalModuleLaw::typical(&k, &[k.from_integer(2), k.from_integer(1)], bound).unwrap();
        let t_list = vec![k.one(), k.from_integer(3), k.from_integer(-1)];
        let (_, target) = iso_from_t(&law, &t_list).unwrap();

        let log_f = law.log_series();
        let mut series_sum = TruncatedSeries::zero(1, bound);
        for (i, t) in t_list.iter().enumerate() {
            let arg =
                TruncatedSeries::from_terms(1, bound, vec![(vec![q.pow(i as u32)], t.clone())]);
            series_sum = series_sum.add(&log_f.compose(&arg).unwrap());
        }
        assert_eq!(target.log_series(), series_sum);
    }

    #[test]
    fn transport_examples() {
        let k = q3();
        let bound = 9;
        let x = series_x(&k, bound);

        let rho = x.scale(&k.from_integer(2));
        assert_eq!(transport_structure(&x, &rho).unwrap(), rho);

        let phi = x.add(&TruncatedSeries::from_terms(1, bound, vec![(vec![2], k.one())]));
        let transported = transport_structure(&phi, &rho).unwrap();
        let oracle = phi
            .compose(&rho.compose(&phi.reversion().unwrap()).unwrap())
            .unwrap();
        assert_eq!(transported, oracle);

        // sequential transport equals transport along the composite
        let phi2 = x.add(&TruncatedSeries::from_terms(
            1,
            bound,
            vec![(vec![3], k.from_integer(2))],
        ));
        let seq = transport_structure(&phi2, &transport_structure(&phi, &rho).unwrap()).unwrap();
        let composite = transport_structure(&phi2.compose(&phi).unwrap(), &rho).unwrap();
        assert_eq!(seq, composite);

        assert!(transport_structure(&rho, &x).is_err());
    }

    #[test]
    fn root_of_unity_linearity() {
        // q = 3: ζ = -1 is primitive; a law with support {1, 2} fails
        // linearity, typical laws pass.
        let k = q3();
        let bound = 30;
        let zeta = k.one().neg();

        let add = FormalModuleLaw::additive(&k, bound);
        assert!(add.is_linear_on_root(&zeta).unwrap());

        let typical = FormalModuleLaw::typical(&k, &[k.from_integer(2)], bound).unwrap();
        assert!(typical.is_linear_on_root(&zeta).unwrap());

        let mut log = BTreeMap::new();
        log.insert(1, k.one());
        log.insert(2, k.one());
        let law = FormalModuleLaw::from_log(&k, log, bound).unwrap();
        assert!(!law.is_linear_on_root(&zeta).unwrap());

        // the log-side decision agrees with the literal bracket comparison
        let bracket = law.bracket(&zeta).unwrap();
        let zx = series_x(&k, bound).scale(&zeta);
        assert_ne!(bracket, zx);
        let bracket = typical.bracket(&zeta).unwrap();
        assert_eq!(bracket, series_x(&k, bound).scale(&zeta));

        assert!(add.is_linear_on_root(&k.from_integer(2)).is_err());
    }

    #[test]
    fn q4_root_detects_non_typical_exponent() {
        // q = p^2 = 4: log = X + X^p is p-typical but not q-typical, and the
        // primitive cube root of unity detects the exponent p.
        let k = q4();
        let bound = 8;
        let omega = k.zeta();
        assert_eq!(omega.pow_u64(3).unwrap(), k.one());

        let mut log = BTreeMap::new();
        log.insert(1, k.one());
        log.insert(2, k.one());
        let law = FormalModuleLaw::from_log(&k, log, bound).unwrap();
        assert!(!law.is_typical(4));
        assert!(!law.is_linear_on_root(&omega).unwrap());

        let typical = FormalModuleLaw::typical(&k, &[k.one()], bound).unwrap();
        assert!(typical.is_linear_on_root(&omega).unwrap());
    }

    #[test]
    fn roots_of_unity_enumeration() {
        let k = q3();
        let roots = roots_of_unity(&k);
        assert!(roots.iter().any(|(c, ord)| *c == k.one() && *ord == 1));
        assert!(roots
            .iter()
            .any(|(c, ord)| *c == k.one().neg() && *ord == 2));

        let roots = roots_of_unity(&q4());
        let primitive: Vec<_> = roots.iter().filter(|(_, ord)| *ord == 3).collect();
        assert_eq!(primitive.len(), 2);
    }
}
