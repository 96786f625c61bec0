//! Exact models of p-adic number fields.
//!
//! A field is modeled as the finite-dimensional rational algebra
//! `Q[x, y]/(u(x), E(y))` where `u` is monic of degree `f` and irreducible
//! mod `p` (the unramified part, generator `ζ`) and `E` is monic of degree
//! `e` over the unramified part and Eisenstein at `p` (uniformizer `π`).
//! Every constant the formulas need — uniformizers, their quotients, the
//! small roots of unity — lives in such a model, and arithmetic stays exact:
//! there is no precision management anywhere.
//!
//! Elements are coordinate vectors over the basis `{ζ^a π^b}`, which is
//! valuation-adapted for unramified-then-Eisenstein towers; the valuation of
//! an element is the minimum of `e·v_p(coefficient) + b` over its nonzero
//! coordinates.

pub mod finite;

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde_json::{json, Value};

use crate::scalar::Scalar;
use crate::{Error, Result};
use finite::{FFElement, FiniteField};

/// A polynomial over the unramified part, stored as `ζ`-coordinate vectors
/// low-to-high in the `y`-degree.
type UnramPoly = Vec<Vec<BigRational>>;

/// Exact model of a p-adic number field; see the module docs.
#[derive(Debug, Clone)]
pub struct NumberFieldModel {
    p: u64,
    f: usize,
    e: usize,
    /// Monic integer polynomial of degree `f`, irreducible mod `p`.
    unramified_minpoly: Vec<BigInt>,
    /// Monic polynomial of degree `e` over the unramified part, Eisenstein
    /// at `p`. Length `e + 1`; each coefficient is a `ζ`-coordinate vector.
    eisenstein_minpoly: UnramPoly,
    residue_field: Arc<FiniteField>,
}

impl PartialEq for NumberFieldModel {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.f == other.f
            && self.e == other.e
            && self.unramified_minpoly == other.unramified_minpoly
            && self.eisenstein_minpoly == other.eisenstein_minpoly
    }
}

impl NumberFieldModel {
    /// Build and validate a model. `unramified` and `eisenstein` default to
    /// the lexicographically smallest irreducible polynomial mod `p` and to
    /// `y^e - p` respectively.
    pub fn new(
        p: u64,
        f: usize,
        e: usize,
        unramified: Option<Vec<BigInt>>,
        eisenstein: Option<UnramPoly>,
    ) -> Result<Arc<Self>> {
        if !finite::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 || e == 0 {
            return Err(Error::InvalidField(
                "residue and ramification degrees must be positive".into(),
            ));
        }
        let unramified_minpoly = match unramified {
            Some(u) => u,
            None => finite::default_irreducible(p, f)?
                .into_iter()
                .map(BigInt::from)
                .collect(),
        };
        if unramified_minpoly.len() != f + 1 || !unramified_minpoly[f].is_one() {
            return Err(Error::InvalidField(format!(
                "unramified polynomial must be monic of degree {f}"
            )));
        }
        let reduced: Vec<u64> = unramified_minpoly
            .iter()
            .map(|c| c.mod_floor_u64(p))
            .collect();
        if !finite::is_irreducible(&reduced, p) {
            return Err(Error::Reducible(format!("{reduced:?}"), p));
        }
        let residue_field = FiniteField::new(p, reduced)?;

        let eisenstein_minpoly = match eisenstein {
            Some(eis) => eis,
            None => {
                // y^e - p
                let mut eis: UnramPoly = vec![vec![BigRational::zero(); f]; e + 1];
                eis[0][0] = -BigRational::from(BigInt::from(p));
                eis[e][0] = BigRational::one();
                eis
            }
        };
        if eisenstein_minpoly.len() != e + 1 {
            return Err(Error::NotEisenstein(format!(
                "expected degree {e}, got {}",
                eisenstein_minpoly.len().saturating_sub(1)
            )));
        }
        for coeff in &eisenstein_minpoly {
            if coeff.len() != f {
                return Err(Error::InvalidField(
                    "Eisenstein coefficients must have f coordinates".into(),
                ));
            }
        }
        let lead = &eisenstein_minpoly[e];
        if !(lead[0].is_one() && lead[1..].iter().all(|c| c.is_zero())) {
            return Err(Error::NotEisenstein("leading coefficient must be 1".into()));
        }

        let model = NumberFieldModel {
            p,
            f,
            e,
            unramified_minpoly,
            eisenstein_minpoly,
            residue_field,
        };

        // Eisenstein condition, in the unramified valuation v(p) = 1: all
        // non-leading coefficients have v >= 1 and the constant term has
        // v = 1 exactly.
        for (i, coeff) in model.eisenstein_minpoly.iter().enumerate().take(e) {
            let v = unramified_valuation(coeff, p);
            match v {
                None => {
                    if i == 0 {
                        return Err(Error::NotEisenstein("constant term is zero".into()));
                    }
                }
                Some(v) => {
                    if v < 1 {
                        return Err(Error::NotEisenstein(format!(
                            "coefficient {i} has valuation {v} < 1"
                        )));
                    }
                    if i == 0 && v != 1 {
                        return Err(Error::NotEisenstein(format!(
                            "constant term has valuation {v} != 1"
                        )));
                    }
                }
            }
        }

        Ok(Arc::new(model))
    }

    /// The default model: smallest unramified polynomial and `y^e - p`.
    pub fn make(p: u64, f: usize, e: usize) -> Result<Arc<Self>> {
        Self::new(p, f, e, None, None)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> usize {
        self.f
    }

    pub fn ramification_degree(&self) -> usize {
        self.e
    }

    /// Residue cardinality `q = p^f`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn dimension(&self) -> usize {
        self.e * self.f
    }

    pub fn unramified_minpoly(&self) -> &[BigInt] {
        &self.unramified_minpoly
    }

    pub fn eisenstein_minpoly(&self) -> &UnramPoly {
        &self.eisenstein_minpoly
    }

    pub fn residue_field(&self) -> &Arc<FiniteField> {
        &self.residue_field
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            model: Arc::clone(self),
            coords: vec![vec![BigRational::zero(); self.f]; self.e],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(self: &Arc<Self>, r: BigRational) -> FieldElement {
        let mut x = self.zero();
        x.coords[0][0] = r;
        x
    }

    pub fn from_integer(self: &Arc<Self>, n: i64) -> FieldElement {
        self.from_rational(BigRational::from(BigInt::from(n)))
    }

    /// The unramified generator `ζ` (zero when `f = 1` and the default
    /// degree-one polynomial `x` is in use).
    pub fn zeta(self: &Arc<Self>) -> FieldElement {
        let mut x = self.zero();
        if self.f == 1 {
            // root of the linear polynomial x + c0.
            x.coords[0][0] = -BigRational::from(self.unramified_minpoly[0].clone());
        } else {
            x.coords[0][1] = BigRational::one();
        }
        x
    }

    /// The uniformizer `π` (the Eisenstein variable; `p` itself when `e = 1`
    /// and the default polynomial `y - p` is in use).
    pub fn pi(self: &Arc<Self>) -> FieldElement {
        let mut x = self.zero();
        if self.e == 1 {
            // root of the linear polynomial y + c0.
            for (a, c) in self.eisenstein_minpoly[0].iter().enumerate() {
                x.coords[0][a] = -c.clone();
            }
            x
        } else {
            x.coords[1][0] = BigRational::one();
            x
        }
    }

    /// `π^k`, with a guard against astronomically large exact values.
    pub fn pi_pow(self: &Arc<Self>, k: u64) -> Result<FieldElement> {
        // Rough digit estimate: v_p contribution k/e, each power of p ~ log10(p).
        let digits = (k / self.e as u64).saturating_mul(1 + self.p.ilog10() as u64);
        if digits > 3_000_000 {
            return Err(Error::SizeLimit(format!(
                "pi^{k} would need ~{digits} digits; use the symbolic checker at this size"
            )));
        }
        self.pi().pow_u64(k)
    }

    /// Reduce a `ζ`-polynomial of any length modulo the unramified minimal
    /// polynomial, returning exactly `f` coordinates.
    fn zeta_reduce(&self, mut poly: Vec<BigRational>) -> Vec<BigRational> {
        let f = self.f;
        while poly.len() > f {
            let lead = poly.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = poly.len() - f;
            for (k, c) in self.unramified_minpoly.iter().take(f).enumerate() {
                let term = &lead * BigRational::from(c.clone());
                poly[shift + k] -= term;
            }
        }
        poly.resize(f, BigRational::zero());
        poly
    }

    fn zeta_mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.zeta_reduce(out)
    }

    /// Canonical JSON descriptor.
    pub fn to_json(&self) -> Value {
        let unram: Vec<String> = self.unramified_minpoly.iter().map(|c| c.to_string()).collect();
        let eis: Vec<Value> = self
            .eisenstein_minpoly
            .iter()
            .map(|coeff| {
                if coeff[1..].iter().all(|c| c.is_zero()) {
                    Value::String(coeff[0].to_string())
                } else {
                    Value::Array(coeff.iter().map(|c| Value::String(c.to_string())).collect())
                }
            })
            .collect();
        json!({
            "p": self.p,
            "f": self.f,
            "e": self.e,
            "unramified_minpoly": unram,
            "eisenstein_minpoly": eis,
        })
    }

    /// Parse the canonical JSON descriptor. Missing polynomial fields fall
    /// back to the defaults.
    pub fn from_json(value: &Value) -> Result<Arc<Self>> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Serialization("field descriptor must be an object".into()))?;
        let p = obj
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Serialization("missing p".into()))?;
        let f = obj.get("f").and_then(Value::as_u64).unwrap_or(1) as usize;
        let e = obj.get("e").and_then(Value::as_u64).unwrap_or(1) as usize;
        let unram = match obj.get("unramified_minpoly") {
            None | Some(Value::Null) => None,
            Some(v) => Some(parse_int_array(v)?),
        };
        let eis = match obj.get("eisenstein_minpoly") {
            None | Some(Value::Null) => None,
            Some(v) => Some(parse_eisenstein(v, f)?),
        };
        Self::new(p, f, e, unram, eis)
    }
}

fn parse_int_array(v: &Value) -> Result<Vec<BigInt>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Serialization("expected coefficient array".into()))?;
    arr.iter()
        .map(|c| match c {
            Value::Number(n) => n
                .as_i64()
                .map(BigInt::from)
                .ok_or_else(|| Error::Serialization("non-integer coefficient".into())),
            Value::String(s) => s
                .parse::<BigInt>()
                .map_err(|_| Error::Serialization(format!("bad integer '{s}'"))),
            _ => Err(Error::Serialization("bad coefficient".into())),
        })
        .collect()
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from(BigInt::from(i)))
            .ok_or_else(|| Error::Serialization("non-integer number".into())),
        Value::String(s) => parse_rational_str(s),
        _ => Err(Error::Serialization("bad rational".into())),
    }
}

pub(crate) fn parse_rational_str(s: &str) -> Result<BigRational> {
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts
        .next()
        .unwrap()
        .trim()
        .parse()
        .map_err(|_| Error::Serialization(format!("bad rational '{s}'")))?;
    let denom: BigInt = match parts.next() {
        None => BigInt::one(),
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| Error::Serialization(format!("bad rational '{s}'")))?,
    };
    if denom.is_zero() {
        return Err(Error::Serialization("zero denominator".into()));
    }
    Ok(BigRational::new(numer, denom))
}

fn parse_eisenstein(v: &Value, f: usize) -> Result<UnramPoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Serialization("expected Eisenstein coefficient array".into()))?;
    arr.iter()
        .map(|c| match c {
            Value::Array(inner) => {
                let mut coords: Vec<BigRational> =
                    inner.iter().map(parse_rational).collect::<Result<_>>()?;
                coords.resize(f, BigRational::zero());
                Ok(coords)
            }
            other => {
                let mut coords = vec![BigRational::zero(); f];
                coords[0] = parse_rational(other)?;
                Ok(coords)
            }
        })
        .collect()
}

/// p-adic valuation of an element of the unramified part (v(p) = 1), or
/// `None` for zero.
fn unramified_valuation(coords: &[BigRational], p: u64) -> Option<i64> {
    coords.iter().filter_map(|c| vp_rational(c, p)).min()
}

/// p-adic valuation of a rational, `None` for zero.
pub(crate) fn vp_rational(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(vp_int(r.numer(), p) - vp_int(r.denom(), p))
}

fn vp_int(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0i64;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }
}

/// The valuation of a field element, normalized so `v(π) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_nonnegative(&self) -> bool {
        match self {
            Valuation::Finite(v) => *v >= 0,
            Valuation::Infinite => true,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Valuation::Finite(v) => *v > 0,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        Some(match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Equal,
            (Valuation::Infinite, _) => Greater,
            (_, Valuation::Infinite) => Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(out, "{v}"),
            Valuation::Infinite => write!(out, "inf"),
        }
    }
}

/// An element of a [`NumberFieldModel`]: rational coordinates over the basis
/// `{ζ^a π^b}`, stored as `coords[b][a]`.
#[derive(Debug, Clone)]
pub struct FieldElement {
    model: Arc<NumberFieldModel>,
    coords: Vec<Vec<BigRational>>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.model == *other.model && self.coords == other.coords
    }
}

impl FieldElement {
    pub fn model(&self) -> &Arc<NumberFieldModel> {
        &self.model
    }

    pub fn coords(&self) -> &[Vec<BigRational>] {
        &self.coords
    }

    fn check_same_model(&self, rhs: &Self) {
        assert!(
            *self.model == *rhs.model,
            "field elements from different models"
        );
    }

    /// Valuation with `v(π) = 1`: the minimum of `e·v_p(coord) + b` over
    /// nonzero coordinates (the basis is valuation-adapted).
    pub fn valuation(&self) -> Valuation {
        let e = self.model.e as i64;
        let p = self.model.p;
        let mut best: Option<i64> = None;
        for (b, block) in self.coords.iter().enumerate() {
            for c in block {
                if let Some(v) = vp_rational(c, p) {
                    let total = e * v + b as i64;
                    best = Some(best.map_or(total, |cur| cur.min(total)));
                }
            }
        }
        match best {
            Some(v) => Valuation::Finite(v),
            None => Valuation::Infinite,
        }
    }

    /// Reduction modulo the maximal ideal, onto the residue field `F_q`.
    /// Errors when the element has negative valuation.
    pub fn residue(&self) -> Result<FFElement> {
        if !self.valuation().is_nonnegative() {
            return Err(Error::NegativeValuation);
        }
        let p = self.model.p;
        let fq = self.model.residue_field();
        let mut coords = vec![0u64; fq.degree()];
        for (a, c) in self.coords[0].iter().enumerate() {
            coords[a] = rational_mod_p(c, p)?;
        }
        let mut acc = fq.zero();
        let gen = fq.generator();
        let mut power = fq.one();
        for (a, &c) in coords.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&power.mul(&fq.from_u64(c)));
            }
            if a + 1 < coords.len() {
                power = power.mul(&gen);
            }
        }
        Ok(acc)
    }

    /// Scalar multiplication by a rational.
    pub fn scale(&self, r: &BigRational) -> Self {
        let coords = self
            .coords
            .iter()
            .map(|block| block.iter().map(|c| c * r).collect())
            .collect();
        FieldElement {
            model: Arc::clone(&self.model),
            coords,
        }
    }
}

/// `c mod p` for a p-integral rational.
fn rational_mod_p(c: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    use num::Integer;
    let n = c.numer().mod_floor(&pb).mod_floor_u64(p);
    let d = c.denom().mod_floor(&pb).mod_floor_u64(p);
    if d == 0 {
        return Err(Error::NegativeValuation);
    }
    // n * d^{-1} mod p via Fermat.
    let mut inv = 1u64;
    let mut base = d % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            inv = inv * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    Ok(n % p * inv % p)
}

impl Scalar for FieldElement {
    fn is_zero(&self) -> bool {
        self.coords
            .iter()
            .all(|block| block.iter().all(|c| c.is_zero()))
    }

    fn add(&self, rhs: &Self) -> Self {
        self.check_same_model(rhs);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(xa, xb)| xa.iter().zip(xb).map(|(a, b)| a + b).collect())
            .collect();
        FieldElement {
            model: Arc::clone(&self.model),
            coords,
        }
    }

    fn neg(&self) -> Self {
        let coords = self
            .coords
            .iter()
            .map(|block| block.iter().map(|c| -c).collect())
            .collect();
        FieldElement {
            model: Arc::clone(&self.model),
            coords,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.check_same_model(rhs);
        let m = &self.model;
        let e = m.e;
        // Convolution in the π-variable, coefficients in the unramified part.
        let mut prod: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); m.f]; 2 * e - 1];
        for (b1, block1) in self.coords.iter().enumerate() {
            if block1.iter().all(|c| c.is_zero()) {
                continue;
            }
            for (b2, block2) in rhs.coords.iter().enumerate() {
                if block2.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let term = m.zeta_mul(block1, block2);
                for (a, t) in term.into_iter().enumerate() {
                    prod[b1 + b2][a] += t;
                }
            }
        }
        // Reduce π-degree modulo the monic Eisenstein polynomial.
        while prod.len() > e {
            let lead = prod.pop().unwrap();
            if lead.iter().all(|c| c.is_zero()) {
                continue;
            }
            let shift = prod.len() - e;
            for (k, coeff) in m.eisenstein_minpoly.iter().take(e).enumerate() {
                if coeff.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let term = m.zeta_mul(&lead, coeff);
                for (a, t) in term.into_iter().enumerate() {
                    prod[shift + k][a] -= t;
                }
            }
        }
        FieldElement {
            model: Arc::clone(&self.model),
            coords: prod,
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let m = &self.model;
        let dim = m.dimension();
        // Multiplication-by-self matrix on the basis (b, a), then solve
        // M y = e_1 exactly.
        let mut matrix = vec![vec![BigRational::zero(); dim]; dim];
        for b in 0..m.e {
            for a in 0..m.f {
                let mut basis = m.zero();
                basis.coords[b][a] = BigRational::one();
                let col = self.mul(&basis);
                for (bb, block) in col.coords.iter().enumerate() {
                    for (aa, c) in block.iter().enumerate() {
                        matrix[bb * m.f + aa][b * m.f + a] = c.clone();
                    }
                }
            }
        }
        let mut rhs = vec![BigRational::zero(); dim];
        rhs[0] = BigRational::one();
        let solution = solve_rational(matrix, rhs).ok_or(Error::NotInvertible)?;
        let mut out = m.zero();
        for b in 0..m.e {
            for a in 0..m.f {
                out.coords[b][a] = solution[b * m.f + a].clone();
            }
        }
        Ok(out)
    }
}

/// Dense exact Gaussian elimination over the rationals; `None` when the
/// system is singular/inconsistent.
fn solve_rational(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..n {
                    let t = &a[col][c] * &factor;
                    a[r][c] -= t;
                }
                let t = &b[col] * &factor;
                b[r] -= t;
            }
        }
    }
    Some(b)
}

/// An embedding of one model into another, recorded by the images of `ζ`
/// and `π` and validated against the source minimal polynomials.
#[derive(Debug, Clone)]
pub struct Embedding {
    source: Arc<NumberFieldModel>,
    target: Arc<NumberFieldModel>,
    zeta_image: FieldElement,
    pi_image: FieldElement,
}

impl Embedding {
    pub fn identity(model: &Arc<NumberFieldModel>) -> Self {
        Embedding {
            source: Arc::clone(model),
            target: Arc::clone(model),
            zeta_image: model.zeta(),
            pi_image: model.pi(),
        }
    }

    /// The canonical embedding for the tower shapes this crate constructs:
    /// the base `Q_p`-model into anything, and same-unramified-part models
    /// into larger Eisenstein steps (`π ↦ π^{e2/e1}` for pure-power
    /// Eisenstein polynomials). Everything is validated exactly; shapes
    /// outside this fragment are rejected.
    pub fn canonical(
        source: &Arc<NumberFieldModel>,
        target: &Arc<NumberFieldModel>,
    ) -> Result<Self> {
        if source.e > target.e || source.f > target.f {
            return Err(Error::UnsupportedEmbedding(
                "source invariants exceed target".into(),
            ));
        }
        let zeta_image = if source.f == 1 {
            // ζ is rational: the root of the linear unramified polynomial.
            let c0 = BigRational::from(source.unramified_minpoly[0].clone());
            target.from_rational(-c0)
        } else if source.unramified_minpoly == target.unramified_minpoly {
            target.zeta()
        } else {
            return Err(Error::UnsupportedEmbedding(
                "unramified parts differ; only identical unramified polynomials supported".into(),
            ));
        };
        let pi_image = if source.e == 1 {
            // π is in the unramified part: the root of the linear Eisenstein
            // polynomial, mapped through ζ.
            let c0 = &source.eisenstein_minpoly[0];
            let mut img = target.zero();
            let mut zp = target.one();
            for (a, c) in c0.iter().enumerate() {
                img = img.add(&zp.scale(&-c.clone()));
                if a + 1 < c0.len() {
                    zp = zp.mul(&zeta_image);
                }
            }
            img
        } else if target.e % source.e == 0 {
            target.pi().pow_u64((target.e / source.e) as u64)?
        } else {
            return Err(Error::UnsupportedEmbedding(
                "ramification degree does not divide".into(),
            ));
        };
        let emb = Embedding {
            source: Arc::clone(source),
            target: Arc::clone(target),
            zeta_image,
            pi_image,
        };
        emb.validate()?;
        Ok(emb)
    }

    fn validate(&self) -> Result<()> {
        // u_src(ζ-image) = 0
        let mut acc = self.target.zero();
        for c in self.source.unramified_minpoly.iter().rev() {
            acc = acc.mul(&self.zeta_image);
            acc = acc.add(&self.target.from_rational(BigRational::from(c.clone())));
        }
        if !acc.is_zero() {
            return Err(Error::UnsupportedEmbedding(
                "zeta image is not a root of the unramified polynomial".into(),
            ));
        }
        // E_src(π-image) = 0, coefficients mapped through the ζ-image.
        let mut acc = self.target.zero();
        for coeff in self.source.eisenstein_minpoly.iter().rev() {
            acc = acc.mul(&self.pi_image);
            let mut val = self.target.zero();
            let mut zp = self.target.one();
            for (a, c) in coeff.iter().enumerate() {
                val = val.add(&zp.scale(c));
                if a + 1 < coeff.len() {
                    zp = zp.mul(&self.zeta_image);
                }
            }
            acc = acc.add(&val);
        }
        if !acc.is_zero() {
            return Err(Error::UnsupportedEmbedding(
                "pi image is not a root of the Eisenstein polynomial".into(),
            ));
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<NumberFieldModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<NumberFieldModel> {
        &self.target
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        assert!(*x.model == *self.source, "element not in embedding source");
        let mut acc = self.target.zero();
        let mut pi_pow = self.target.one();
        for block in &x.coords {
            let mut zeta_pow = self.target.one();
            for (a, c) in block.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&pi_pow.mul(&zeta_pow).scale(c));
                }
                if a + 1 < block.len() {
                    zeta_pow = zeta_pow.mul(&self.zeta_image);
                }
            }
            pi_pow = pi_pow.mul(&self.pi_image);
        }
        acc
    }
}

/// Canonical JSON form of an element: flat rational-string array ordered by
/// π-power, then ζ-power.
pub fn element_to_json(x: &FieldElement) -> Value {
    let coords: Vec<Value> = x
        .coords
        .iter()
        .flat_map(|block| block.iter().map(|c| Value::String(c.to_string())))
        .collect();
    Value::Array(coords)
}

pub fn element_from_json(model: &Arc<NumberFieldModel>, value: &Value) -> Result<FieldElement> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::Serialization("expected coordinate array".into()))?;
    if arr.len() != model.dimension() {
        return Err(Error::Serialization(format!(
            "expected {} coordinates, got {}",
            model.dimension(),
            arr.len()
        )));
    }
    let mut out = model.zero();
    for (idx, v) in arr.iter().enumerate() {
        let b = idx / model.f;
        let a = idx % model.f;
        out.coords[b][a] = parse_rational(v)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_base_cases() {
        // Q_3: π = 3.
        let q3 = NumberFieldModel::make(3, 1, 1).unwrap();
        assert_eq!(q3.q(), 3);
        assert_eq!(q3.pi(), q3.from_integer(3));

        // π^2 = 3 for the default Eisenstein y^2 - 3.
        let k = NumberFieldModel::make(3, 1, 2).unwrap();
        let pi = k.pi();
        assert_eq!(pi.mul(&pi), k.from_integer(3));

        // q = 4 with x^2 + x + 1.
        let u: Vec<BigInt> = vec![1.into(), 1.into(), 1.into()];
        let l = NumberFieldModel::new(2, 2, 1, Some(u), None).unwrap();
        assert_eq!(l.q(), 4);
    }

    #[test]
    fn make_field_rejections() {
        assert!(matches!(
            NumberFieldModel::make(4, 1, 1),
            Err(Error::NotPrime(4))
        ));
        // x^2 + 1 is reducible mod 2.
        let u: Vec<BigInt> = vec![1.into(), 0.into(), 1.into()];
        assert!(matches!(
            NumberFieldModel::new(2, 2, 1, Some(u), None),
            Err(Error::Reducible(..))
        ));
        // y^2 - 9 is not Eisenstein at 3 (constant valuation 2).
        let mut eis = vec![vec![BigRational::zero(); 1]; 3];
        eis[0][0] = BigRational::from(BigInt::from(-9));
        eis[2][0] = BigRational::one();
        assert!(matches!(
            NumberFieldModel::new(3, 1, 2, None, Some(eis)),
            Err(Error::NotEisenstein(_))
        ));
    }

    #[test]
    fn valuation_examples() {
        let q3 = NumberFieldModel::make(3, 1, 1).unwrap();
        assert_eq!(q3.pi().valuation(), Valuation::Finite(1));

        let k = NumberFieldModel::make(3, 1, 2).unwrap();
        assert_eq!(k.from_integer(3).valuation(), Valuation::Finite(2));
        assert_eq!(k.pi().valuation(), Valuation::Finite(1));
        assert_eq!(k.zero().valuation(), Valuation::Infinite);

        // v(π - π^q) = min(1, q) = 1 for e = 1, π = p.
        let q = q3.q();
        let x = q3.pi().sub(&q3.pi().pow_u64(q).unwrap());
        assert_eq!(x.valuation(), Valuation::Finite(1));
    }

    #[test]
    fn valuation_is_additive_on_samples() {
        let k = NumberFieldModel::make(2, 2, 2).unwrap();
        let samples = [
            k.pi(),
            k.zeta().add(&k.pi()),
            k.from_rational(BigRational::new(3.into(), 4.into())),
            k.one().add(&k.zeta().mul(&k.pi())),
        ];
        for x in &samples {
            for y in &samples {
                let vx = x.valuation().finite().unwrap();
                let vy = y.valuation().finite().unwrap();
                assert_eq!(x.mul(y).valuation(), Valuation::Finite(vx + vy));
            }
        }
    }

    #[test]
    fn residue_examples() {
        let k = NumberFieldModel::make(3, 1, 2).unwrap();
        assert!(k.one().residue().unwrap().is_one());
        assert!(k.pi().residue().unwrap().is_zero());

        // p/π^e = 1 exactly in the default model.
        let p_over_pi_e = k.from_integer(3).mul(&k.pi().mul(&k.pi()).inv().unwrap());
        assert_eq!(p_over_pi_e, k.one());
        assert!(p_over_pi_e.residue().unwrap().is_one());

        // Negative valuation is rejected.
        assert!(k.pi().inv().unwrap().residue().is_err());
    }

    #[test]
    fn field_axioms_on_samples() {
        let k = NumberFieldModel::make(2, 2, 2).unwrap();
        let xs = [
            k.one(),
            k.zeta(),
            k.pi(),
            k.zeta().add(&k.pi()).add(&k.one()),
            k.from_rational(BigRational::new(7.into(), 2.into())),
        ];
        for a in &xs {
            for b in &xs {
                assert_eq!(a.mul(b), b.mul(a));
                for c in &xs {
                    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                }
            }
            if !a.is_zero() {
                assert_eq!(a.mul(&a.inv().unwrap()), k.one());
            }
        }
    }

    #[test]
    fn canonical_embeddings_commute_with_valuation() {
        let base = NumberFieldModel::make(3, 1, 1).unwrap();
        let unram = NumberFieldModel::make(3, 2, 1).unwrap();
        let top = NumberFieldModel::make(3, 2, 2).unwrap();

        let e1 = Embedding::canonical(&base, &unram).unwrap();
        let e2 = Embedding::canonical(&unram, &top).unwrap();

        let x = base.from_integer(6);
        let img = e2.apply(&e1.apply(&x));
        // v(6) = 1 in the base; ramification rescaling by e = 2 on top.
        assert_eq!(x.valuation(), Valuation::Finite(1));
        assert_eq!(img.valuation(), Valuation::Finite(2));

        // Ring-map checks on samples.
        let a = unram.zeta();
        let b = unram.from_integer(3);
        assert_eq!(e2.apply(&a.mul(&b)), e2.apply(&a).mul(&e2.apply(&b)));
        assert_eq!(e2.apply(&a.add(&b)), e2.apply(&a).add(&e2.apply(&b)));
    }

    #[test]
    fn ramified_step_embedding() {
        // (1, e=2) into (1, e=4): π ↦ π^2 for pure-power Eisenstein parts.
        let k = NumberFieldModel::make(5, 1, 2).unwrap();
        let l = NumberFieldModel::make(5, 1, 4).unwrap();
        let emb = Embedding::canonical(&k, &l).unwrap();
        let img = emb.apply(&k.pi());
        assert_eq!(img, l.pi().pow_u64(2).unwrap());
        assert_eq!(img.valuation(), Valuation::Finite(2));
    }

    #[test]
    fn json_round_trip() {
        let k = NumberFieldModel::make(3, 2, 2).unwrap();
        let parsed = NumberFieldModel::from_json(&k.to_json()).unwrap();
        assert_eq!(*k, *parsed);

        let x = k.zeta().add(&k.pi().scale(&BigRational::new(1.into(), 3.into())));
        let back = element_from_json(&k, &element_to_json(&x)).unwrap();
        assert_eq!(x, back);
    }
}
