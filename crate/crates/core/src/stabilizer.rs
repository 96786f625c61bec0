//! Finite presentations of the height-`h` stabilizer algebras and the
//! quotient maps induced by tame totally ramified and unramified extensions.
//!
//! The full algebra at height `h` is `F_{q^h}[t_1, t_2, ...]` modulo
//! `t_i^{q^h} = t_i`. A tame totally ramified extension of degree `e | h`
//! cuts it down by `t_i^{q^{h/e}} = c^{q^i-1} t_i`, where `c` is a primitive
//! `(q^h-1)/(q^{h/e}-1)`-th root of the residue of `α = π_K/π_L^e`; an
//! unramified extension of degree `f | h` kills the `t_i` with `f ∤ i`.
//! Both quotient maps keep the generator names.
//!
//! Coproducts are supported in the range where the closed formula
//! `Δ(t_k) = Σ t_i ⊗ t_{k-i}^{q^i}` is complete (`k` below the absolute
//! ramification times the height); higher `k` is out of scope and rejected.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::basechange::{gamma_tot_ram, ExtensionData};
use crate::exactnum::finite::{primitive_root_of, FFElement, FFEmbedding, FiniteField};
use crate::exactnum::NumberFieldModel;
use crate::generators::Basis;
use crate::gradedpoly::{Family, GradedPoly, Monomial, RingTag, Variable};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// The equivariant thickening of the height-`h` point: generators
/// `t_1..t_M` and the invertible `v_h`, with the twisting relations
/// `t_i v_h^{q^i} - v_h t_i^{q^h}`.
#[derive(Debug, Clone)]
pub struct ThickenedPresentation {
    pub field: Arc<FiniteField>,
    pub q: u64,
    pub h: u32,
    pub num_generators: u32,
    pub relations: Vec<GradedPoly<FFElement>>,
}

/// Relation family of a stabilizer quotient.
#[derive(Debug, Clone)]
pub enum RelationKind {
    /// `t_i^{q^h} = t_i` for every generator.
    Full,
    /// `t_i^{q^{h/e}} = c^{q^i - 1} t_i`.
    Tame { e: u32, c: FFElement },
}

/// A stabilizer algebra (or quotient) presentation over `F_{q^h}`.
#[derive(Debug, Clone)]
pub struct StabilizerPresentation {
    pub field: Arc<FiniteField>,
    /// Residue cardinality of the base ring the generators come from.
    pub q: u64,
    pub h: u32,
    /// Generator indices are the multiples of `stride` (1 = all of them).
    pub stride: u32,
    pub num_generators: u32,
    pub kind: RelationKind,
    /// Strict upper bound on `k` for the closed coproduct formula.
    pub coproduct_range: u32,
}

impl StabilizerPresentation {
    /// `q^h`, the Frobenius exponent of the full relation.
    pub fn full_exponent(&self) -> u64 {
        self.q.pow(self.h)
    }

    /// The left-hand-side exponent of the defining relation.
    pub fn relation_exponent(&self) -> u64 {
        match &self.kind {
            RelationKind::Full => self.q.pow(self.h),
            RelationKind::Tame { e, .. } => self.q.pow(self.h / *e),
        }
    }

    /// The constant multiplying `t_i` on the right of the relation.
    pub fn relation_constant(&self, i: u32) -> Result<FFElement> {
        match &self.kind {
            RelationKind::Full => Ok(self.field.one()),
            RelationKind::Tame { c, .. } => {
                let group = self.field.size() - 1;
                let exp = (mod_pow(self.q, i as u64, group) + group - 1) % group;
                if exp == 0 {
                    Ok(self.field.one())
                } else {
                    c.pow_u64(exp)
                }
            }
        }
    }

    pub fn generator_indices(&self) -> Vec<u32> {
        (1..=self.num_generators)
            .filter(|i| i % self.stride == 0)
            .collect()
    }
}

fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc = 1u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// The thickened presentation at residue cardinality `q` and height `h`,
/// with `num_generators` twisting relations.
pub fn sigma_presentation(
    model: &Arc<NumberFieldModel>,
    h: u32,
    num_generators: u32,
) -> Result<ThickenedPresentation> {
    if h == 0 {
        return Err(Error::InvalidArgument("height must be positive".into()));
    }
    let q = model.q();
    let field = Arc::clone(model.residue_field());
    let tag = RingTag::a();
    let v_h = Variable::araki(tag.clone(), h);
    let mut relations = Vec::new();
    for i in 1..=num_generators {
        let qi = q
            .checked_pow(i)
            .ok_or_else(|| Error::SizeLimit("relation exponent overflow".into()))?;
        let qh = q
            .checked_pow(h)
            .ok_or_else(|| Error::SizeLimit("relation exponent overflow".into()))?;
        let t_i = Variable::t(tag.clone(), i);
        let lhs = Monomial::from_factors(vec![(t_i.clone(), 1), (v_h.clone(), qi)]);
        let rhs = Monomial::from_factors(vec![(v_h.clone(), 1), (t_i.clone(), qh)]);
        let relation =
            GradedPoly::from_terms(vec![(lhs, field.one()), (rhs, field.one().neg())]);
        relations.push(relation);
    }
    Ok(ThickenedPresentation {
        field,
        q,
        h,
        num_generators,
        relations,
    })
}

/// The coefficient field `F_{q^h}` on the default polynomial, with the
/// residue field of the extension top embedded canonically.
fn stabilizer_field(ext: &ExtensionData, h: u32) -> Result<(Arc<FiniteField>, FFEmbedding)> {
    let p = ext.base().p();
    let degree = ext.base().residue_degree() * h as usize * ext.rel_f() as usize;
    let big = FiniteField::default_of_degree(p, degree)?;
    let small = Arc::clone(ext.ext().residue_field());
    let embedding = FFEmbedding::canonical(&small, &big)?;
    Ok((big, embedding))
}

/// The quotient map data of a stabilizer algebra morphism: each generator
/// keeps its name or dies.
#[derive(Debug, Clone)]
pub struct ThetaMap {
    pub source: StabilizerPresentation,
    pub target: StabilizerPresentation,
    /// `θ(t_i) = t_i` when `kill_stride | i`, else `0`.
    pub kill_stride: u32,
    /// The residue `ε(α)` inside the big field, for the tame case.
    pub alpha_residue: Option<FFElement>,
    /// The tame constant `c`, when applicable.
    pub c: Option<FFElement>,
}

impl ThetaMap {
    pub fn image_of(&self, i: u32) -> Option<u32> {
        (i % self.kill_stride == 0).then_some(i)
    }
}

/// The quotient map induced by a tame totally ramified extension of degree
/// `e | h`. Keeps generator names; the target relation picks up the
/// constant `c`, a primitive `(q^h-1)/(q^{h/e}-1)`-th root of `ε(α)`.
pub fn theta_tame(ext: &ExtensionData, h: u32, num_generators: u32) -> Result<ThetaMap> {
    if !ext.is_totally_ramified() {
        return Err(Error::InvalidArgument(
            "the tame quotient needs a totally ramified extension".into(),
        ));
    }
    if ext.is_wild() {
        return Err(Error::WildRamification);
    }
    let e = ext.rel_e();
    if h == 0 || h % e != 0 {
        return Err(Error::InvalidArgument(format!(
            "height {h} must be a positive multiple of e = {e}"
        )));
    }
    let q = ext.base().q();
    let (field, res_embedding) = stabilizer_field(ext, h)?;
    let e_abs = ext.base().ramification_degree() as u32;
    let coproduct_range = e_abs * h;

    let source = StabilizerPresentation {
        field: Arc::clone(&field),
        q,
        h,
        stride: 1,
        num_generators,
        kind: RelationKind::Full,
        coproduct_range,
    };

    if e == 1 {
        // Degenerate: the quotient is the full algebra itself, c = 1.
        let target = source.clone();
        return Ok(ThetaMap {
            source,
            target,
            kill_stride: 1,
            alpha_residue: Some(field.one()),
            c: Some(field.one()),
        });
    }

    let alpha = ext.alpha()?;
    let eps = res_embedding.apply(&alpha.residue()?);
    let order = (field.size() - 1) / (q.pow(h / e) - 1);
    let c = primitive_root_of(&eps, order)?;

    let target = StabilizerPresentation {
        field: Arc::clone(&field),
        q,
        h,
        stride: 1,
        num_generators,
        kind: RelationKind::Tame { e, c: c.clone() },
        coproduct_range,
    };
    Ok(ThetaMap {
        source,
        target,
        kill_stride: 1,
        alpha_residue: Some(eps),
        c: Some(c),
    })
}

/// The quotient map induced by an unramified extension of degree `f | h`:
/// `θ(t_i) = t_i` when `f | i`, zero otherwise; the target is generated by
/// the surviving names.
pub fn theta_unramified(ext: &ExtensionData, h: u32, num_generators: u32) -> Result<ThetaMap> {
    if !ext.is_unramified() {
        return Err(Error::InvalidArgument(
            "the unramified quotient needs an unramified extension".into(),
        ));
    }
    let f = ext.rel_f();
    if h == 0 || h % f != 0 {
        return Err(Error::InvalidArgument(format!(
            "height {h} must be a positive multiple of f = {f}"
        )));
    }
    let q = ext.base().q();
    let (field, _) = stabilizer_field(ext, h)?;
    let e_abs = ext.base().ramification_degree() as u32;
    let coproduct_range = e_abs * h;

    let source = StabilizerPresentation {
        field: Arc::clone(&field),
        q,
        h,
        stride: 1,
        num_generators,
        kind: RelationKind::Full,
        coproduct_range,
    };
    let target = StabilizerPresentation {
        field,
        q,
        h,
        stride: f,
        num_generators,
        kind: RelationKind::Full,
        coproduct_range,
    };
    Ok(ThetaMap {
        source,
        target,
        kill_stride: f,
        alpha_residue: None,
        c: None,
    })
}

/// Symbolic consistency of a tame presentation: iterating the relation `e`
/// times must be compatible with `t_i^{q^h} = t_i`, which reduces to
/// `c^{(q^i-1)(q^h-1)/(q^{h/e}-1)} = 1` for every generator.
pub fn verify_theta_well_defined(pres: &StabilizerPresentation) -> Result<bool> {
    match &pres.kind {
        RelationKind::Full => Ok(true),
        RelationKind::Tame { e, c } => {
            let group = pres.field.size() - 1;
            let m = (pres.q.pow(pres.h) - 1) / (pres.q.pow(pres.h / *e) - 1);
            for i in 1..=pres.num_generators {
                let qi_minus_1 = (mod_pow(pres.q, i as u64, group) + group - 1) % group;
                let exponent = (qi_minus_1 as u128 * (m % group) as u128 % group as u128) as u64;
                if exponent != 0 && !c.pow_u64(exponent)?.is_one() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// A sum of pure tensors of monomials with finite-field coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorPoly {
    arity: usize,
    terms: BTreeMap<Vec<Monomial>, FFElement>,
}

impl TensorPoly {
    pub fn zero(arity: usize) -> Self {
        TensorPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(slots: Vec<Monomial>, coeff: FFElement) -> Self {
        let mut t = TensorPoly {
            arity: slots.len(),
            terms: BTreeMap::new(),
        };
        t.add_term(slots, coeff);
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &FFElement)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, slots: Vec<Monomial>, coeff: FFElement) {
        assert_eq!(slots.len(), self.arity);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&slots) {
            Some(existing) => {
                let sum = existing.add(&coeff);
                if sum.is_zero() {
                    self.terms.remove(&slots);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(slots, coeff);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (slots, coeff) in &rhs.terms {
            out.add_term(slots.clone(), coeff.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.arity, rhs.arity);
        let mut out = TensorPoly::zero(self.arity);
        for (s1, c1) in &self.terms {
            for (s2, c2) in &rhs.terms {
                let slots: Vec<Monomial> = s1.iter().zip(s2).map(|(a, b)| a.mul(b)).collect();
                out.add_term(slots, c1.mul(c2));
            }
        }
        out
    }

    /// `self^k` where `k` is a power of the characteristic: termwise by
    /// Frobenius additivity.
    pub fn frobenius_pow(&self, k: u64) -> Result<Self> {
        let p = match self.terms.values().next() {
            Some(c) => c.field().p(),
            None => return Ok(self.clone()),
        };
        if !is_char_power(k, p) {
            return Err(Error::InvalidArgument(format!(
                "{k} is not a power of the characteristic {p}"
            )));
        }
        let mut out = TensorPoly::zero(self.arity);
        for (slots, coeff) in &self.terms {
            let slots: Vec<Monomial> = slots.iter().map(|m| m.pow(k)).collect();
            out.add_term(slots, coeff.pow_u64(k)?);
        }
        Ok(out)
    }

    /// General power: Frobenius when the exponent is a characteristic
    /// power, repeated multiplication otherwise.
    pub fn pow(&self, k: u64) -> Result<Self> {
        assert!(k >= 1);
        if let Some(c) = self.terms.values().next() {
            if is_char_power(k, c.field().p()) {
                return self.frobenius_pow(k);
            }
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }
}

fn is_char_power(k: u64, p: u64) -> bool {
    let mut acc = 1u64;
    while acc < k {
        match acc.checked_mul(p) {
            Some(next) => acc = next,
            None => return false,
        }
    }
    acc == k
}

/// `Δ(t_k) = Σ_{i=0}^{k} t_i ⊗ (t_{k-i})^{q^i}` with `t_0 = 1`, where
/// generators missing from the presentation (stride) are zero. Rejected at
/// and above the presentation's closed-formula range.
pub fn coproduct_low(pres: &StabilizerPresentation, k: u32) -> Result<TensorPoly> {
    if k >= pres.coproduct_range {
        return Err(Error::InvalidArgument(format!(
            "coproduct of t_{k} is outside the closed-formula range (k < {})",
            pres.coproduct_range
        )));
    }
    let tag = RingTag::a();
    let mut out = TensorPoly::zero(2);
    for i in 0..=k {
        let left_alive = i == 0 || i % pres.stride == 0;
        let right_alive = k == i || (k - i) % pres.stride == 0;
        if !left_alive || !right_alive {
            continue;
        }
        let left = if i == 0 {
            Monomial::one()
        } else {
            Monomial::var(Variable::t(tag.clone(), i))
        };
        let right = if k == i {
            Monomial::one()
        } else {
            Monomial::var(Variable::t(tag.clone(), k - i)).pow(pres.q.pow(i))
        };
        out = out.add(&TensorPoly::term(vec![left, right], pres.field.one()));
    }
    Ok(out)
}

/// Apply the coproduct to one slot of a tensor, raising the arity by one.
pub fn expand_slot(
    pres: &StabilizerPresentation,
    tensor: &TensorPoly,
    slot: usize,
) -> Result<TensorPoly> {
    let mut out = TensorPoly::zero(tensor.arity() + 1);
    for (slots, coeff) in tensor.terms() {
        // Δ of the slot monomial: product of Δ(t_j)^e over its factors.
        let mut delta =
            TensorPoly::term(vec![Monomial::one(), Monomial::one()], pres.field.one());
        for (v, e) in slots[slot].factors() {
            if v.family != Family::T {
                return Err(Error::InvalidArgument(
                    "the coproduct is defined on t-generators only".into(),
                ));
            }
            let d = coproduct_low(pres, v.index)?;
            delta = delta.mul(&d.pow(*e)?);
        }
        for (dslots, dcoeff) in delta.terms() {
            let mut new_slots = Vec::with_capacity(tensor.arity() + 1);
            new_slots.extend_from_slice(&slots[..slot]);
            new_slots.push(dslots[0].clone());
            new_slots.push(dslots[1].clone());
            new_slots.extend_from_slice(&slots[slot + 1..]);
            out.add_term(new_slots, coeff.mul(dcoeff));
        }
    }
    Ok(out)
}

/// `(Δ ⊗ id)Δ(t_k) = (id ⊗ Δ)Δ(t_k)`.
pub fn coassociativity_check(pres: &StabilizerPresentation, k: u32) -> Result<bool> {
    let delta = coproduct_low(pres, k)?;
    let left = expand_slot(pres, &delta, 0)?;
    let right = expand_slot(pres, &delta, 1)?;
    Ok(left == right)
}

/// Kill the monomials containing generators the quotient sends to zero.
fn apply_theta_tensor(tensor: &TensorPoly, kill_stride: u32) -> TensorPoly {
    let mut out = TensorPoly::zero(tensor.arity());
    'terms: for (slots, coeff) in tensor.terms() {
        for mono in slots {
            for (v, _) in mono.factors() {
                if v.family == Family::T && v.index % kill_stride != 0 {
                    continue 'terms;
                }
            }
        }
        out.add_term(slots.clone(), coeff.clone());
    }
    out
}

/// `(θ ⊗ θ) ∘ Δ = Δ ∘ θ` at one generator index `k`.
pub fn theta_coalgebra_check(theta: &ThetaMap, k: u32) -> Result<bool> {
    let lhs = apply_theta_tensor(&coproduct_low(&theta.source, k)?, theta.kill_stride);
    let rhs = if k == 0 || k % theta.kill_stride == 0 {
        coproduct_low(&theta.target, k)?
    } else {
        TensorPoly::zero(2)
    };
    Ok(lhs == rhs)
}

/// The residue of the `κ`-image of the height-`h` generator in the
/// `j`-indexed thickening: the reduction of the coefficient of the pure
/// power `v_j^{(q^h-1)/(q^j-1)}` in `γ(v_h)` (zero when the exponent is not
/// an integer or the coefficient reduces to zero).
pub fn kappa_image(ext: &ExtensionData, j: u32, h: u32) -> Result<FFElement> {
    if !ext.is_totally_ramified() {
        return Err(Error::InvalidArgument(
            "the thickening map needs a totally ramified extension".into(),
        ));
    }
    let q = ext.base().q();
    let res_field = Arc::clone(ext.ext().residue_field());
    if (q.pow(h) - 1) % (q.pow(j) - 1) != 0 {
        return Ok(res_field.zero());
    }
    let exponent = (q.pow(h) - 1) / (q.pow(j) - 1);
    let images = gamma_tot_ram(ext, Basis::Araki, h)?;
    let pure = Monomial::var(Variable::araki(RingTag::b(), j)).pow(exponent);
    match images.image(h)?.coefficient(&pure) {
        None => Ok(res_field.zero()),
        Some(coeff) => coeff.residue(),
    }
}

/// The `κ`-constant of a totally ramified extension of degree `n > 1` at
/// level `j`: the residue `ε(π_A/π_B^n)` and the exponent
/// `(q^{jn}-1)/(q^j-1)`. The alternative closed form
/// `ε((π_A - π_A^{q^{jn}}) / Π_m (π_B - π_B^{q^{mj}}))` is asserted to give
/// the same residue.
pub fn kappa_constant(ext: &ExtensionData, j: u32) -> Result<(FFElement, u64)> {
    if !ext.is_totally_ramified() {
        return Err(Error::InvalidArgument(
            "κ needs a totally ramified extension".into(),
        ));
    }
    let n = ext.rel_e();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "κ is about extensions of degree > 1".into(),
        ));
    }
    if ext.is_wild() {
        return Err(Error::WildRamification);
    }
    let q = ext.base().q();
    let h = j
        .checked_mul(n)
        .ok_or_else(|| Error::SizeLimit("jn overflow".into()))?;
    let exponent = (q.pow(h) - 1) / (q.pow(j) - 1);

    let constant = ext.alpha()?.residue()?;

    // The defining-formula route must agree.
    let pi_a = ext.embedding().apply(&ext.base().pi());
    let pi_b = ext.ext().pi();
    let numerator = pi_a.sub(&pi_a.pow_u64(q.pow(h))?);
    let mut denominator = ext.ext().one();
    for m in 1..=n {
        denominator = denominator.mul(&pi_b.sub(&pi_b.pow_u64(q.pow(m * j))?));
    }
    let first_form = numerator.div(&denominator)?.residue()?;
    if first_form != constant {
        return Err(Error::MathAssertion(
            "the two κ formulas disagree as residues".into(),
        ));
    }
    Ok((constant, exponent))
}

/// Substitute the `κ`-image of `v_h` into the thickened relation of the
/// source and reduce modulo the target thickening relation
/// (`t^{q^{h/e}} → t·v^{q^i-1}`): the result must vanish.
pub fn thickened_substitution_check(
    ext: &ExtensionData,
    h: u32,
    num_generators: u32,
) -> Result<bool> {
    if !ext.is_totally_ramified() || ext.rel_e() < 2 {
        return Err(Error::InvalidArgument(
            "the substitution check needs a totally ramified extension of degree > 1".into(),
        ));
    }
    if ext.is_wild() {
        return Err(Error::WildRamification);
    }
    let e = ext.rel_e();
    if h % e != 0 {
        return Err(Error::InvalidArgument("e must divide h".into()));
    }
    let j = h / e;
    let q = ext.base().q();
    let eps = ext.alpha()?.residue()?;
    let m_exp = (q.pow(h) - 1) / (q.pow(j) - 1);

    let tag = RingTag::b();
    let v_j = Variable::araki(tag.clone(), j);
    for i in 1..=num_generators {
        let t_i = Variable::t(tag.clone(), i);
        let qi = q.pow(i);
        let qh = q.pow(h);
        // image of t_i v_h^{q^i} - v_h t_i^{q^h} under v_h ↦ ε (v_j)^{m}:
        let lhs = GradedPoly::monomial(
            eps.pow_u64(qi)?,
            Monomial::from_factors(vec![(t_i.clone(), 1), (v_j.clone(), m_exp * qi)]),
        );
        let rhs = GradedPoly::monomial(
            eps.clone(),
            Monomial::from_factors(vec![(t_i.clone(), qh), (v_j.clone(), m_exp)]),
        );
        let image = lhs.sub(&rhs);
        let reduced = reduce_thickened(&image, q, j, &t_i, &v_j);
        if !reduced.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Normal form modulo `t^{q^j} = t·v^{q^i - 1}` (with `i` the generator
/// index): rewrite until every `t`-exponent is below `q^j`.
fn reduce_thickened(
    poly: &GradedPoly<FFElement>,
    q: u64,
    j: u32,
    t_var: &Variable,
    v_var: &Variable,
) -> GradedPoly<FFElement> {
    let threshold = q.pow(j);
    let twist = q.pow(t_var.index) - 1;
    let mut out = GradedPoly::zero();
    for (mono, coeff) in poly.terms() {
        let mut t_exp = mono.exponent_of(t_var);
        let mut v_exp = mono.exponent_of(v_var);
        while t_exp >= threshold {
            t_exp = t_exp - threshold + 1;
            v_exp += twist;
        }
        let reduced = Monomial::from_factors(vec![(t_var.clone(), t_exp), (v_var.clone(), v_exp)]);
        out = out.add(&GradedPoly::monomial(coeff.clone(), reduced));
    }
    out
}
