//! The universal generator calculus for the typical moduli ring.
//!
//! Everything here is driven by compositions of an integer `h`: the
//! `Π`-values attached to index sequences, the `v_I` monomials, and the two
//! closed-form expansions of the log coefficients
//!
//! ```text
//!   ℓ_h = Σ_{||I|| = h} v_I / Π(I)            (Araki generators)
//!   ℓ_h = Σ_{i_1+...+i_r = h} π^{-r} V_{i_1} V_{i_2}^{q^{i_1}} ...   (Hazewinkel)
//! ```
//!
//! The defining relations are verified with the uniformizer symbolic (see
//! [`crate::pifrac`]), which is exact for every model of a given residue
//! cardinality and stays fast even when `q^h` is in the hundreds of
//! millions; concrete-field versions of the same checks exist for
//! cross-checking at small `q`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactnum::{FieldElement, NumberFieldModel};
use crate::gradedpoly::{Family, GradedPoly, Monomial, RingTag, Variable};
use crate::pifrac::PiFrac;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Which generator family an expansion is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Araki,
    Hazewinkel,
}

impl Basis {
    pub fn family(&self) -> Family {
        match self {
            Basis::Araki => Family::ArakiV,
            Basis::Hazewinkel => Family::HazewinkelV,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "araki" => Ok(Basis::Araki),
            "hazewinkel" => Ok(Basis::Hazewinkel),
            other => Err(Error::InvalidArgument(format!("unknown basis '{other}'"))),
        }
    }
}

/// A finite sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndexSeq(Vec<u32>);

impl IndexSeq {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.iter().any(|&i| i == 0) {
            return Err(Error::InvalidArgument(
                "index sequences have positive entries".into(),
            ));
        }
        Ok(IndexSeq(entries))
    }

    pub fn empty() -> Self {
        IndexSeq(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|I|`, the length.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `||I||`, the entry sum.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Concatenation `IJ`.
    pub fn concat(&self, rhs: &Self) -> Self {
        let mut entries = self.0.clone();
        entries.extend_from_slice(&rhs.0);
        IndexSeq(entries)
    }

    /// The partial sums `i_1, i_1+i_2, ..., ||I||`.
    pub fn partial_sums(&self) -> Vec<u32> {
        let mut acc = 0;
        self.0
            .iter()
            .map(|&i| {
                acc += i;
                acc
            })
            .collect()
    }

    /// Split as (prefix of length k, suffix).
    pub fn split_at(&self, k: usize) -> (IndexSeq, IndexSeq) {
        let (a, b) = self.0.split_at(k);
        (IndexSeq(a.to_vec()), IndexSeq(b.to_vec()))
    }
}

/// All compositions of `h` in lexicographic order; `h = 0` gives the empty
/// sequence alone.
pub fn compositions(h: u32) -> Vec<IndexSeq> {
    if h == 0 {
        return vec![IndexSeq::empty()];
    }
    let mut out = Vec::new();
    for first in 1..=h {
        for rest in compositions(h - first) {
            let mut entries = vec![first];
            entries.extend_from_slice(rest.entries());
            out.push(IndexSeq(entries));
        }
    }
    out
}

fn q_pow(q: u64, s: u32) -> Result<u64> {
    q.checked_pow(s)
        .ok_or_else(|| Error::SizeLimit(format!("q^{s} overflows with q = {q}")))
}

/// Coefficient context: supplies the scalars built from the uniformizer that
/// the expansions need, either in a concrete model or symbolically.
pub trait PiScalars {
    type S: Scalar;
    fn q(&self) -> u64;
    fn one(&self) -> Self::S;
    /// `π^k`.
    fn pi_pow(&self, k: u64) -> Result<Self::S>;
    /// `π^{-r}`.
    fn pi_inv_pow(&self, r: u64) -> Result<Self::S>;
    /// `Π (π - π^{E})` over the listed exponents.
    fn pi_product(&self, exponents: &[u64]) -> Result<Self::S>;
    /// `1 / Π (π - π^{E})`.
    fn inv_pi_product(&self, exponents: &[u64]) -> Result<Self::S>;
}

/// Concrete coefficients in a number-field model.
pub struct ModelScalars<'a>(pub &'a Arc<NumberFieldModel>);

impl PiScalars for ModelScalars<'_> {
    type S = FieldElement;

    fn q(&self) -> u64 {
        self.0.q()
    }

    fn one(&self) -> FieldElement {
        self.0.one()
    }

    fn pi_pow(&self, k: u64) -> Result<FieldElement> {
        if k == 0 {
            return Ok(self.0.one());
        }
        self.0.pi_pow(k)
    }

    fn pi_inv_pow(&self, r: u64) -> Result<FieldElement> {
        self.pi_pow(r)?.inv()
    }

    fn pi_product(&self, exponents: &[u64]) -> Result<FieldElement> {
        let mut acc = self.0.one();
        for &e in exponents {
            let factor = self.0.pi().sub(&self.pi_pow(e)?);
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }

    fn inv_pi_product(&self, exponents: &[u64]) -> Result<FieldElement> {
        self.pi_product(exponents)?.inv()
    }
}

/// Symbolic coefficients: only the residue cardinality is fixed.
pub struct SymbolicScalars {
    pub q: u64,
}

impl PiScalars for SymbolicScalars {
    type S = PiFrac;

    fn q(&self) -> u64 {
        self.q
    }

    fn one(&self) -> PiFrac {
        PiFrac::one()
    }

    fn pi_pow(&self, k: u64) -> Result<PiFrac> {
        Ok(PiFrac::pi_pow(k))
    }

    fn pi_inv_pow(&self, r: u64) -> Result<PiFrac> {
        Ok(PiFrac::pi_pow_neg(r))
    }

    fn pi_product(&self, exponents: &[u64]) -> Result<PiFrac> {
        Ok(PiFrac::binomial_product(exponents))
    }

    fn inv_pi_product(&self, exponents: &[u64]) -> Result<PiFrac> {
        Ok(PiFrac::inv_binomial_product(exponents))
    }
}

/// `Π(I)`: the product of `π - π^{q^s}` over the partial sums `s` of `I`.
pub fn pi_value(model: &Arc<NumberFieldModel>, seq: &IndexSeq) -> Result<FieldElement> {
    let ctx = ModelScalars(model);
    let exps = pi_factor_exponents(ctx.q(), seq)?;
    ctx.pi_product(&exps)
}

fn pi_factor_exponents(q: u64, seq: &IndexSeq) -> Result<Vec<u64>> {
    seq.partial_sums().iter().map(|&s| q_pow(q, s)).collect()
}

/// The monomial `v_I = v_{i_1} (v_{i_2})^{q^{i_1}} (v_{i_3})^{q^{i_1+i_2}} ...`
/// (also the Hazewinkel-side monomial shape, under the other family).
pub fn v_monomial(seq: &IndexSeq, family: Family, tag: &RingTag, q: u64) -> Result<Monomial> {
    let mut factors = Vec::new();
    let mut prefix = 0u32;
    for &i in seq.entries() {
        let exponent = q_pow(q, prefix)?;
        factors.push((Variable::new(family, tag.clone(), i), exponent));
        prefix += i;
    }
    Ok(Monomial::from_factors(factors))
}

/// One log coefficient written in a generator family.
#[derive(Debug, Clone)]
pub struct LogExpansion {
    pub h: u32,
    pub basis: Basis,
    pub poly: GradedPoly<FieldElement>,
}

fn log_expansion_generic<P: PiScalars>(
    ctx: &P,
    h: u32,
    basis: Basis,
    tag: &RingTag,
) -> Result<GradedPoly<P::S>> {
    if h == 0 {
        return Ok(GradedPoly::constant(ctx.one()));
    }
    let q = ctx.q();
    let mut out = GradedPoly::zero();
    for seq in compositions(h) {
        let coeff = match basis {
            Basis::Araki => ctx.inv_pi_product(&pi_factor_exponents(q, &seq)?)?,
            Basis::Hazewinkel => ctx.pi_inv_pow(seq.len() as u64)?,
        };
        let mono = v_monomial(&seq, basis.family(), tag, q)?;
        out = out.add(&GradedPoly::monomial(coeff, mono));
    }
    Ok(out)
}

/// Concrete log-coefficient expansion over the model's fraction field.
pub fn log_expansion(
    model: &Arc<NumberFieldModel>,
    h: u32,
    basis: Basis,
    tag: &RingTag,
) -> Result<LogExpansion> {
    let poly = log_expansion_generic(&ModelScalars(model), h, basis, tag)?;
    Ok(LogExpansion { h, basis, poly })
}

pub fn log_araki(model: &Arc<NumberFieldModel>, h: u32) -> Result<LogExpansion> {
    log_expansion(model, h, Basis::Araki, &RingTag::a())
}

pub fn log_hazewinkel(model: &Arc<NumberFieldModel>, h: u32) -> Result<LogExpansion> {
    log_expansion(model, h, Basis::Hazewinkel, &RingTag::a())
}

fn verify_relation_generic<P: PiScalars>(ctx: &P, h: u32, basis: Basis) -> Result<bool> {
    if h == 0 {
        // ℓ_0 = 1 by convention; nothing to check.
        return Ok(true);
    }
    let q = ctx.q();
    let tag = RingTag::a();
    let logs: Vec<GradedPoly<P::S>> = (0..=h)
        .map(|i| log_expansion_generic(ctx, i, basis, &tag))
        .collect::<Result<_>>()?;

    // LHS: π ℓ_h.
    let lhs = logs[h as usize].scale(&ctx.pi_pow(1)?);

    // RHS: Σ ℓ_i (gen_{h-i})^{q^i}; the Araki sum includes i = h with the
    // convention v_0 = π.
    let mut rhs = GradedPoly::zero();
    for i in 0..h {
        let exponent = q_pow(q, i)?;
        let var = Variable::new(basis.family(), tag.clone(), h - i);
        let power = GradedPoly::monomial(ctx.one(), Monomial::var(var).pow(exponent));
        rhs = rhs.add(&logs[i as usize].mul(&power));
    }
    if basis == Basis::Araki {
        let scale = ctx.pi_pow(q_pow(q, h)?)?;
        rhs = rhs.add(&logs[h as usize].scale(&scale));
    }
    Ok(lhs == rhs)
}

/// Verify the Araki defining relation at height `h`, exactly and with the
/// uniformizer symbolic (valid for every model with this `q`).
pub fn verify_araki(model: &Arc<NumberFieldModel>, h: u32) -> Result<bool> {
    verify_relation_generic(&SymbolicScalars { q: model.q() }, h, Basis::Araki)
}

/// Verify the Hazewinkel defining relation at height `h`, symbolically.
pub fn verify_hazewinkel(model: &Arc<NumberFieldModel>, h: u32) -> Result<bool> {
    verify_relation_generic(&SymbolicScalars { q: model.q() }, h, Basis::Hazewinkel)
}

/// Concrete-field version of [`verify_araki`] (cross-check path; needs small
/// `q^h`).
pub fn verify_araki_concrete(model: &Arc<NumberFieldModel>, h: u32) -> Result<bool> {
    verify_relation_generic(&ModelScalars(model), h, Basis::Araki)
}

/// Concrete-field version of [`verify_hazewinkel`].
pub fn verify_hazewinkel_concrete(model: &Arc<NumberFieldModel>, h: u32) -> Result<bool> {
    verify_relation_generic(&ModelScalars(model), h, Basis::Hazewinkel)
}

fn araki_in_hazewinkel_generic<P: PiScalars>(
    ctx: &P,
    h: u32,
    tag: &RingTag,
) -> Result<Vec<GradedPoly<P::S>>> {
    let q = ctx.q();
    // images[j] = the expression of v_{j+1} in the Hazewinkel generators,
    // solved from equating the two expansions of ℓ_j in increasing j.
    let mut images: Vec<GradedPoly<P::S>> = Vec::new();
    let mut var_map: BTreeMap<Variable, GradedPoly<P::S>> = BTreeMap::new();
    for j in 1..=h {
        let hazewinkel = log_expansion_generic(ctx, j, Basis::Hazewinkel, tag)?;
        // Subtract the Araki terms with |I| > 1, whose variables are all of
        // index < j and hence already solved.
        let mut residue = hazewinkel;
        for seq in compositions(j) {
            if seq.len() < 2 {
                continue;
            }
            let coeff = ctx.inv_pi_product(&pi_factor_exponents(q, &seq)?)?;
            let mono = v_monomial(&seq, Family::ArakiV, tag, q)?;
            let substituted = GradedPoly::monomial(coeff, mono).substitute(&var_map);
            residue = residue.sub(&substituted);
        }
        let scale = ctx.pi_product(&[q_pow(q, j)?])?;
        let image = residue.scale(&scale);
        var_map.insert(Variable::araki(tag.clone(), j), image.clone());
        images.push(image);
    }
    Ok(images)
}

/// Express the degree-`h` Araki generator as a polynomial in the Hazewinkel
/// generators (coefficients in the fraction field).
pub fn araki_in_hazewinkel(
    model: &Arc<NumberFieldModel>,
    h: u32,
) -> Result<GradedPoly<FieldElement>> {
    if h == 0 {
        return Ok(GradedPoly::constant(model.one()));
    }
    let images = araki_in_hazewinkel_generic(&ModelScalars(model), h, &RingTag::a())?;
    Ok(images.into_iter().last().expect("h >= 1"))
}

/// Check coefficientwise that the Araki generator is congruent to the
/// Hazewinkel generator modulo the uniformizer, for every model with this
/// residue cardinality: each coefficient of `v_h - V_h` must have positive
/// valuation. Runs symbolically with a sound valuation bound.
pub fn araki_congruent_mod_pi(model: &Arc<NumberFieldModel>, h: u32) -> Result<bool> {
    if h == 0 {
        return Ok(true);
    }
    let ctx = SymbolicScalars { q: model.q() };
    let tag = RingTag::a();
    let images = araki_in_hazewinkel_generic(&ctx, h, &tag)?;
    let image = images.into_iter().last().expect("h >= 1");
    let vh = GradedPoly::monomial(PiFrac::one(), Monomial::var(Variable::hazewinkel(tag, h)));
    let diff = image.sub(&vh);
    let p = model.p();
    let e = model.ramification_degree() as u64;
    for (_, coeff) in diff.terms() {
        match coeff.valuation_lower_bound(p, e) {
            None => {}
            Some(bound) if bound >= 1 => {}
            Some(_) => return Ok(false),
        }
    }
    Ok(true)
}

/// `Σ_t x_t^n` in `m` auxiliary variables.
fn power_sum(model: &Arc<NumberFieldModel>, n: u64, m: u32) -> GradedPoly<FieldElement> {
    let mut out = GradedPoly::zero();
    for t in 1..=m {
        let mono = Monomial::var(Variable::aux(t)).pow(n);
        out = out.add(&GradedPoly::monomial(model.one(), mono));
    }
    out
}

fn assert_integral(poly: &GradedPoly<FieldElement>, what: &str) -> Result<()> {
    for (mono, coeff) in poly.terms() {
        if !coeff.valuation().is_nonnegative() {
            return Err(Error::MathAssertion(format!(
                "{what}: coefficient of {mono} has negative valuation"
            )));
        }
    }
    Ok(())
}

/// The integer-indexed symmetric polynomials `w_k` in `m` variables, solved
/// from `Σ x_t^{q^k} = Σ_{j<=k} π^j (w_j)^{q^{k-j}}`. Integrality of every
/// `w_j` is asserted.
pub fn w_int(model: &Arc<NumberFieldModel>, k: u32, m: u32) -> Result<GradedPoly<FieldElement>> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one variable".into()));
    }
    let q = model.q();
    let mut ws: Vec<GradedPoly<FieldElement>> = Vec::new();
    for kk in 0..=k {
        let mut rhs = power_sum(model, q_pow(q, kk)?, m);
        for (j, wj) in ws.iter().enumerate() {
            let pij = model.pi_pow(j as u64)?;
            let power = wj.pow(q_pow(q, kk - j as u32)?);
            rhs = rhs.sub(&power.scale(&pij));
        }
        let w = rhs.scale(&model.pi_pow(kk as u64)?.inv()?);
        assert_integral(&w, &format!("w_{kk}"))?;
        ws.push(w);
    }
    Ok(ws.pop().expect("at least w_0"))
}

/// The sequence-indexed symmetric polynomials `w_I`, solved triangularly
/// from `Σ x_t^{q^{||H||}} = Σ_{IJ=H} (Π(H)/Π(I)) (w_J)^{q^{||I||}}`.
pub fn w_seq(
    model: &Arc<NumberFieldModel>,
    seq: &IndexSeq,
    m: u32,
) -> Result<GradedPoly<FieldElement>> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one variable".into()));
    }
    let table = w_seq_table(model, seq.weight(), m)?;
    Ok(table
        .get(seq)
        .cloned()
        .expect("table covers all sequences up to the weight"))
}

/// All `w_J` for `||J|| <= max_weight`, solved in weight order.
pub fn w_seq_table(
    model: &Arc<NumberFieldModel>,
    max_weight: u32,
    m: u32,
) -> Result<BTreeMap<IndexSeq, GradedPoly<FieldElement>>> {
    let q = model.q();
    let mut table: BTreeMap<IndexSeq, GradedPoly<FieldElement>> = BTreeMap::new();
    table.insert(IndexSeq::empty(), power_sum(model, 1, m));
    for weight in 1..=max_weight {
        for h_seq in compositions(weight) {
            let pi_h = pi_value(model, &h_seq)?;
            let mut rhs = power_sum(model, q_pow(q, weight)?, m);
            for split in 1..=h_seq.len() {
                let (prefix, suffix) = h_seq.split_at(split);
                let ratio = pi_h.div(&pi_value(model, &prefix)?)?;
                let wj = table
                    .get(&suffix)
                    .expect("suffixes have smaller weight")
                    .clone();
                let power = wj.pow(q_pow(q, prefix.weight())?);
                rhs = rhs.sub(&power.scale(&ratio));
            }
            let w = rhs.scale(&pi_h.inv()?);
            assert_integral(&w, &format!("w_{:?}", h_seq.entries()))?;
            table.insert(h_seq, w);
        }
    }
    Ok(table)
}

/// The congruence `w_I ≡ (w_{|I|})^{q^{||I||-|I|}} mod π`.
pub fn w_seq_congruence(
    model: &Arc<NumberFieldModel>,
    seq: &IndexSeq,
    m: u32,
) -> Result<bool> {
    let q = model.q();
    let wi = w_seq(model, seq, m)?;
    let wlen = w_int(model, seq.len() as u32, m)?;
    let power = q_pow(q, seq.weight() - seq.len() as u32)?;
    let rhs = if power == 1 { wlen } else { wlen.pow(power) };
    let diff = wi.sub(&rhs);
    for (_, coeff) in diff.terms() {
        if !coeff.valuation().is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invariance under all adjacent transpositions of the `m` aux variables.
pub fn is_symmetric(poly: &GradedPoly<FieldElement>, m: u32) -> bool {
    for t in 1..m {
        let swapped = poly.rename(|v| {
            if v.family == Family::Aux && v.index == t {
                Variable::aux(t + 1)
            } else if v.family == Family::Aux && v.index == t + 1 {
                Variable::aux(t)
            } else {
                v.clone()
            }
        });
        if swapped != *poly {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Valuation;

    fn q3() -> Arc<NumberFieldModel> {
        NumberFieldModel::make(3, 1, 1).unwrap()
    }

    #[test]
    fn compositions_are_lex_ordered() {
        let comps = compositions(3);
        let entries: Vec<&[u32]> = comps.iter().map(|c| c.entries()).collect();
        assert_eq!(
            entries,
            vec![&[1u32, 1, 1][..], &[1, 2], &[2, 1], &[3]]
        );
        assert_eq!(compositions(0).len(), 1);
        assert!(compositions(0)[0].is_empty());
    }

    #[test]
    fn pi_value_examples() {
        let k = q3();
        let pi = k.pi();
        let q = k.q();

        assert_eq!(pi_value(&k, &IndexSeq::empty()).unwrap(), k.one());

        // Π((1)) = π - π^q
        let expected = pi.sub(&pi.pow_u64(q).unwrap());
        assert_eq!(pi_value(&k, &IndexSeq::new(vec![1]).unwrap()).unwrap(), expected);

        // Π((1,1)) = (π - π^{q^2})(π - π^q)
        let expected = pi
            .sub(&pi.pow_u64(q * q).unwrap())
            .mul(&pi.sub(&pi.pow_u64(q).unwrap()));
        assert_eq!(
            pi_value(&k, &IndexSeq::new(vec![1, 1]).unwrap()).unwrap(),
            expected
        );
    }

    #[test]
    fn v_monomial_examples() {
        let tag = RingTag::a();
        let q = 3;
        assert!(v_monomial(&IndexSeq::empty(), Family::ArakiV, &tag, q)
            .unwrap()
            .is_one());
        let m = v_monomial(&IndexSeq::new(vec![2]).unwrap(), Family::ArakiV, &tag, q).unwrap();
        assert_eq!(m, Monomial::var(Variable::araki(tag.clone(), 2)));
        // (1,2) -> v_1 * v_2^q
        let m = v_monomial(&IndexSeq::new(vec![1, 2]).unwrap(), Family::ArakiV, &tag, q).unwrap();
        let expected = Monomial::from_factors(vec![
            (Variable::araki(tag.clone(), 1), 1),
            (Variable::araki(tag.clone(), 2), 3),
        ]);
        assert_eq!(m, expected);
    }

    #[test]
    fn log_expansions_low_heights() {
        let k = q3();
        let q = k.q();
        let tag = RingTag::a();

        // ℓ_0 = 1
        assert_eq!(
            log_araki(&k, 0).unwrap().poly,
            GradedPoly::constant(k.one())
        );

        // ℓ_1 (Araki) = v_1/(π - π^q)
        let l1 = log_araki(&k, 1).unwrap().poly;
        let coeff = k.pi().sub(&k.pi().pow_u64(q).unwrap()).inv().unwrap();
        let expected = GradedPoly::monomial(coeff, Monomial::var(Variable::araki(tag.clone(), 1)));
        assert_eq!(l1, expected);

        // ℓ_1 (Hazewinkel) = V_1/π; ℓ_2 = V_2/π + V_1^{1+q}/π^2.
        let l1 = log_hazewinkel(&k, 1).unwrap().poly;
        let expected = GradedPoly::monomial(
            k.pi().inv().unwrap(),
            Monomial::var(Variable::hazewinkel(tag.clone(), 1)),
        );
        assert_eq!(l1, expected);

        let l2 = log_hazewinkel(&k, 2).unwrap().poly;
        assert_eq!(l2.num_terms(), 2);
        let v2 = Monomial::var(Variable::hazewinkel(tag.clone(), 2));
        let v1q1 = Monomial::var(Variable::hazewinkel(tag.clone(), 1)).pow(1 + q);
        assert_eq!(
            l2.coefficient(&v2).unwrap(),
            &k.pi().inv().unwrap()
        );
        assert_eq!(
            l2.coefficient(&v1q1).unwrap(),
            &k.pi().pow_u64(2).unwrap().inv().unwrap()
        );
    }

    #[test]
    fn log_expansions_are_homogeneous() {
        let k = NumberFieldModel::make(2, 2, 1).unwrap();
        let q = k.q();
        for h in 1..=4 {
            for basis in [Basis::Araki, Basis::Hazewinkel] {
                let l = log_expansion(&k, h, basis, &RingTag::a()).unwrap();
                let expected = 2 * (q.pow(h) - 1);
                assert_eq!(l.poly.homogeneous_degree(q).unwrap(), expected);
            }
        }
    }

    #[test]
    fn defining_relations_hold_symbolically_and_concretely() {
        for (p, f, e) in [(3u64, 1usize, 1usize), (2, 2, 1), (3, 1, 2), (5, 1, 1)] {
            let k = NumberFieldModel::make(p, f, e).unwrap();
            for h in 0..=4 {
                assert!(verify_araki(&k, h).unwrap(), "araki p={p} f={f} e={e} h={h}");
                assert!(
                    verify_hazewinkel(&k, h).unwrap(),
                    "hazewinkel p={p} f={f} e={e} h={h}"
                );
            }
            // concrete cross-check at small height
            for h in 0..=3 {
                assert!(verify_araki_concrete(&k, h).unwrap());
                assert!(verify_hazewinkel_concrete(&k, h).unwrap());
            }
        }
    }

    #[test]
    fn araki_in_hazewinkel_closed_form_h1() {
        let k = q3();
        let q = k.q();
        // v_1 = ((π - π^q)/π) V_1
        let image = araki_in_hazewinkel(&k, 1).unwrap();
        let coeff = k
            .pi()
            .sub(&k.pi().pow_u64(q).unwrap())
            .mul(&k.pi().inv().unwrap());
        let expected = GradedPoly::monomial(
            coeff,
            Monomial::var(Variable::hazewinkel(RingTag::a(), 1)),
        );
        assert_eq!(image, expected);
    }

    #[test]
    fn araki_in_hazewinkel_substitutes_back() {
        // Substituting the expressions into the Araki expansion of ℓ_h must
        // reproduce the Hazewinkel expansion exactly.
        let k = NumberFieldModel::make(2, 1, 1).unwrap();
        let tag = RingTag::a();
        for h in 1..=3 {
            let mut map = BTreeMap::new();
            for j in 1..=h {
                map.insert(Variable::araki(tag.clone(), j), araki_in_hazewinkel(&k, j).unwrap());
            }
            let araki = log_araki(&k, h).unwrap().poly.substitute(&map);
            let haz = log_hazewinkel(&k, h).unwrap().poly;
            assert_eq!(araki, haz, "h = {h}");
        }
    }

    #[test]
    fn araki_congruence_mod_pi() {
        for (p, f, e) in [(2u64, 1usize, 1usize), (3, 1, 1), (3, 1, 2), (2, 2, 1)] {
            let k = NumberFieldModel::make(p, f, e).unwrap();
            for h in 1..=3 {
                assert!(
                    araki_congruent_mod_pi(&k, h).unwrap(),
                    "p={p} f={f} e={e} h={h}"
                );
            }
        }
    }

    #[test]
    fn w_int_examples() {
        let k = q3();
        // w_0 = x_1 + ... + x_m
        let w0 = w_int(&k, 0, 2).unwrap();
        assert_eq!(w0, power_sum(&k, 1, 2));

        // one variable: w_1 = (x^q - x^q)/π = 0
        let w1 = w_int(&k, 1, 1).unwrap();
        assert!(w1.is_zero());

        // two variables, q = p: the divided binomial sum, integral.
        let w1 = w_int(&k, 1, 2).unwrap();
        assert!(!w1.is_zero());
        assert_eq!(w1.plain_homogeneous_degree().unwrap(), 3);
        for (_, c) in w1.terms() {
            assert!(c.valuation().is_nonnegative());
        }
        // spot value: coefficient of x_1^2 x_2 in -((x1+x2)^3 - x1^3 - x2^3)/3 is -1
        let mono = Monomial::from_factors(vec![
            (Variable::aux(1), 2),
            (Variable::aux(2), 1),
        ]);
        assert_eq!(w1.coefficient(&mono).unwrap(), &k.from_integer(-1));
    }

    #[test]
    fn w_seq_examples() {
        let k = q3();
        // w_∅ = Σ x_t
        let w = w_seq(&k, &IndexSeq::empty(), 2).unwrap();
        assert_eq!(w, power_sum(&k, 1, 2));

        // m = 1: w_{(1)} = 0
        let w = w_seq(&k, &IndexSeq::new(vec![1]).unwrap(), 1).unwrap();
        assert!(w.is_zero());

        // congruence (b) for all sequences of weight <= 3, m = 2
        for weight in 1..=3u32 {
            for seq in compositions(weight) {
                assert!(w_seq_congruence(&k, &seq, 2).unwrap(), "{:?}", seq.entries());
            }
        }
    }

    #[test]
    fn w_symmetry_and_difference_witness() {
        let k = q3();
        for j in 0..=2 {
            let w = w_int(&k, j, 3).unwrap();
            if !w.is_zero() {
                assert!(is_symmetric(&w, 3));
            }
        }
        for seq in compositions(2) {
            let w = w_seq(&k, &seq, 3).unwrap();
            if !w.is_zero() {
                assert!(is_symmetric(&w, 3));
            }
        }
        // the paper's parenthetical: w_j and w_{(j)} differ in general
        let wj = w_int(&k, 2, 2).unwrap();
        let wseq = w_seq(&k, &IndexSeq::new(vec![2]).unwrap(), 2).unwrap();
        assert_ne!(wj, wseq);
    }

    #[test]
    fn valuations_in_expansions_are_negative_only_in_denominators() {
        // smoke: Araki ℓ_2 over Q_2 has coefficient valuations -1 and -2.
        let k = NumberFieldModel::make(2, 1, 1).unwrap();
        let l2 = log_araki(&k, 2).unwrap().poly;
        let vals: Vec<i64> = l2
            .terms()
            .map(|(_, c)| c.valuation().finite().unwrap())
            .collect();
        assert!(vals.contains(&-1) || vals.contains(&-2));
        assert_eq!(k.pi().valuation(), Valuation::Finite(1));
    }
}
