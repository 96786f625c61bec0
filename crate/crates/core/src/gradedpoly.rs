//! Sparse multivariate polynomials in the indexed generator families.
//!
//! Variables come in four families: Hazewinkel `V_i`, Araki `v_i`, the
//! isomorphism coordinates `t_i`, and auxiliary `x_i` (used by the symmetric
//! `w`-polynomials). Each variable carries a ring tag ("A", "B", ...) so
//! that accidental mixing of source and target rings is caught loudly.
//!
//! The monomial order is lexicographic with `V_i <= V_j` iff `i <= j`,
//! comparing the highest variable first; the grading is `|V_i| = 2(q^i - 1)`
//! (and likewise for the `v` and `t` families).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Variable family. The order of the discriminants fixes the (artifact)
/// cross-family storage order; the documented monomial order only ever
/// compares within one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Auxiliary polynomial variables `x_t` (ungraded).
    Aux,
    /// Hazewinkel generators `V_i`.
    HazewinkelV,
    /// Araki generators `v_i`.
    ArakiV,
    /// Strict-isomorphism coordinates `t_i`.
    T,
}

impl Family {
    pub fn symbol(&self) -> &'static str {
        match self {
            Family::Aux => "x",
            Family::HazewinkelV => "V",
            Family::ArakiV => "v",
            Family::T => "t",
        }
    }

    pub fn from_symbol(s: &str) -> Result<Self> {
        Ok(match s {
            "x" => Family::Aux,
            "V" => Family::HazewinkelV,
            "v" => Family::ArakiV,
            "t" => Family::T,
            other => {
                return Err(Error::Serialization(format!(
                    "unknown variable family '{other}'"
                )))
            }
        })
    }
}

/// Ring tag distinguishing generator alphabets of different moduli rings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingTag(pub String);

impl RingTag {
    pub fn a() -> Self {
        RingTag("A".into())
    }

    pub fn b() -> Self {
        RingTag("B".into())
    }

    pub fn new(s: &str) -> Self {
        RingTag(s.into())
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.0)
    }
}

/// An indexed variable, e.g. `V_3` tagged with its moduli ring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub tag: RingTag,
    pub family: Family,
    pub index: u32,
}

impl Variable {
    pub fn new(family: Family, tag: RingTag, index: u32) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        Variable { tag, family, index }
    }

    pub fn hazewinkel(tag: RingTag, index: u32) -> Self {
        Self::new(Family::HazewinkelV, tag, index)
    }

    pub fn araki(tag: RingTag, index: u32) -> Self {
        Self::new(Family::ArakiV, tag, index)
    }

    pub fn t(tag: RingTag, index: u32) -> Self {
        Self::new(Family::T, tag, index)
    }

    pub fn aux(index: u32) -> Self {
        Self::new(Family::Aux, RingTag::a(), index)
    }

    /// Graded degree `2(q^index - 1)`; auxiliary variables are ungraded.
    pub fn degree(&self, q: u64) -> Result<u64> {
        match self.family {
            Family::Aux => Err(Error::InvalidArgument(
                "auxiliary variables carry no grading".into(),
            )),
            _ => {
                let power = (q as u128)
                    .checked_pow(self.index)
                    .ok_or_else(|| Error::SizeLimit("degree overflow".into()))?;
                let deg = 2u128 * (power - 1);
                u64::try_from(deg).map_err(|_| Error::SizeLimit("degree overflow".into()))
            }
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}_{}^{}", self.family.symbol(), self.index, self.tag)
    }
}

/// A monomial: sorted, duplicate-free `(variable, exponent)` pairs with
/// positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Variable, u64)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Variable) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    pub fn from_factors(mut factors: Vec<(Variable, u64)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Variable, u64)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Variable, u64)] {
        &self.factors
    }

    pub fn exponent_of(&self, v: &Variable) -> u64 {
        self.factors
            .iter()
            .find(|(fv, _)| fv == v)
            .map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(rhs.factors.iter().cloned());
        Monomial::from_factors(factors)
    }

    pub fn pow(&self, k: u64) -> Self {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self
                .factors
                .iter()
                .map(|(v, e)| (v.clone(), e * k))
                .collect(),
        }
    }

    /// Total exponent (the plain polynomial degree, used by the symmetric
    /// `w`-polynomials).
    pub fn total_exponent(&self) -> u64 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// Graded degree with residue cardinality `q`; additive over products.
    pub fn degree(&self, q: u64) -> Result<u64> {
        let mut acc: u128 = 0;
        for (v, e) in &self.factors {
            acc += v.degree(q)? as u128 * *e as u128;
        }
        u64::try_from(acc).map_err(|_| Error::SizeLimit("degree overflow".into()))
    }

    /// The storage order: compare exponents variable-by-variable from the
    /// highest variable down. Restricted to a single family and tag this is
    /// exactly the documented lexicographic generator order.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        let mut i = self.factors.len();
        let mut j = other.factors.len();
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {}
            }
            let (va, ea) = &self.factors[i - 1];
            let (vb, eb) = &other.factors[j - 1];
            match va.cmp(vb) {
                Ordering::Less => return Ordering::Less,
                Ordering::Greater => return Ordering::Greater,
                Ordering::Equal => match ea.cmp(eb) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                    ord => return ord,
                },
            }
        }
    }

    fn tags_and_families(&self) -> (Vec<RingTag>, Vec<Family>) {
        let mut tags: Vec<RingTag> = self.factors.iter().map(|(v, _)| v.tag.clone()).collect();
        tags.sort();
        tags.dedup();
        let mut fams: Vec<Family> = self.factors.iter().map(|(v, _)| v.family).collect();
        fams.sort();
        fams.dedup();
        (tags, fams)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_lex(other)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(out, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .rev()
            .map(|(v, e)| {
                if *e == 1 {
                    format!("{}_{}", v.family.symbol(), v.index)
                } else {
                    format!("{}_{}^{}", v.family.symbol(), v.index, e)
                }
            })
            .collect();
        write!(out, "{}", parts.join("*"))
    }
}

/// The documented generator-order comparison: defined for monomials drawn
/// from a single variable family and a single ring tag.
pub fn compare(m1: &Monomial, m2: &Monomial) -> Result<Ordering> {
    let mut tags = Vec::new();
    let mut fams = Vec::new();
    for m in [m1, m2] {
        let (t, f) = m.tags_and_families();
        tags.extend(t);
        fams.extend(f);
    }
    tags.sort();
    tags.dedup();
    fams.sort();
    fams.dedup();
    if fams.len() > 1 || tags.len() > 1 {
        return Err(Error::MixedVariables(format!(
            "compare requires one family and one tag, got {fams:?} over {tags:?}"
        )));
    }
    Ok(m1.cmp_lex(m2))
}

/// A sparse polynomial with [`Scalar`] coefficients; zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedPoly<C: Scalar> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> GradedPoly<C> {
    pub fn zero() -> Self {
        GradedPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        GradedPoly { terms }
    }

    pub fn monomial(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GradedPoly { terms }
    }

    pub fn from_terms(pairs: Vec<(Monomial, C)>) -> Self {
        let mut out = GradedPoly::zero();
        for (m, c) in pairs {
            out.add_term(m, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        self.check_tag_compat(&m);
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Ring tags may not mix inside one polynomial (or one monomial); a
    /// violation means source and target alphabets got confused, which is a
    /// bug in the caller, so it panics.
    fn check_tag_compat(&self, m: &Monomial) {
        let (mut tags, _) = m.tags_and_families();
        if let Some((first, _)) = self.terms.iter().next() {
            let (existing, _) = first.tags_and_families();
            tags.extend(existing);
            tags.sort();
            tags.dedup();
        }
        assert!(
            tags.len() <= 1,
            "ring tags may not mix within one polynomial: {tags:?}"
        );
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = GradedPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        let mut out = GradedPoly::zero();
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), coeff.mul(c));
        }
        out
    }

    pub fn pow(&self, k: u64) -> Self {
        assert!(k >= 1, "polynomial powers start at 1 here");
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

    /// Substitute polynomials for variables; unmapped variables persist.
    pub fn substitute(&self, map: &BTreeMap<Variable, GradedPoly<C>>) -> Self {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let mut term = GradedPoly::constant(c.clone());
            let mut residual = Vec::new();
            for (v, e) in m.factors() {
                match map.get(v) {
                    Some(image) => term = term.mul(&image.pow(*e)),
                    None => residual.push((v.clone(), *e)),
                }
            }
            let residual = Monomial::from_factors(residual);
            for (tm, tc) in term.terms {
                out.add_term(tm.mul(&residual), tc);
            }
        }
        out
    }

    /// Rename variables term-by-term (e.g. the index-preserving renaming
    /// between the `A` and `B` alphabets for leading-monomial comparisons).
    pub fn rename<F>(&self, rename: F) -> Self
    where
        F: Fn(&Variable) -> Variable,
    {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let factors = m.factors().iter().map(|(v, e)| (rename(v), *e)).collect();
            out.add_term(Monomial::from_factors(factors), c.clone());
        }
        out
    }

    /// The maximal monomial in the generator ordering (coefficients play no
    /// role). Errors on the zero polynomial.
    pub fn leading_monomial(&self) -> Result<&Monomial> {
        self.terms.keys().next_back().ok_or(Error::ZeroPolynomial)
    }

    /// The common graded degree of all terms, if one exists.
    pub fn homogeneous_degree(&self, q: u64) -> Result<u64> {
        let mut degree = None;
        for m in self.terms.keys() {
            let d = m.degree(q)?;
            match degree {
                None => degree = Some(d),
                Some(prev) if prev == d => {}
                Some(_) => return Err(Error::NotHomogeneous),
            }
        }
        degree.ok_or(Error::NotHomogeneous)
    }

    /// Plain-degree homogeneity (total exponents), for the aux family.
    pub fn plain_homogeneous_degree(&self) -> Result<u64> {
        let mut degree = None;
        for m in self.terms.keys() {
            let d = m.total_exponent();
            match degree {
                None => degree = Some(d),
                Some(prev) if prev == d => {}
                Some(_) => return Err(Error::NotHomogeneous),
            }
        }
        degree.ok_or(Error::NotHomogeneous)
    }

    /// Map coefficients, dropping terms that land on zero.
    pub fn map_coefficients<D: Scalar, F>(&self, map: F) -> GradedPoly<D>
    where
        F: Fn(&C) -> D,
    {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), map(c));
        }
        out
    }

    pub fn try_map_coefficients<D: Scalar, F>(&self, map: F) -> Result<GradedPoly<D>>
    where
        F: Fn(&C) -> Result<D>,
    {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), map(c)?);
        }
        Ok(out)
    }

    /// Canonical JSON: terms sorted descending in the generator order, each
    /// `{"coeff": ..., "mono": [[family, index, exponent], ...]}` with the
    /// monomial factors listed from the highest variable down.
    pub fn to_json<F>(&self, coeff_to_json: F) -> Value
    where
        F: Fn(&C) -> Value,
    {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono: Vec<Value> = m
                    .factors()
                    .iter()
                    .rev()
                    .map(|(v, e)| json!([v.family.symbol(), v.index, e]))
                    .collect();
                json!({ "coeff": coeff_to_json(c), "mono": mono })
            })
            .collect();
        Value::Array(terms)
    }
}

impl<C: Scalar> fmt::Display for GradedPoly<C> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format!("({c:?})*{m}"))
            .collect();
        write!(out, "{}", parts.join(" + "))
    }
}
