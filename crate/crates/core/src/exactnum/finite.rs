//! Finite fields `F_{p^n}` with explicit defining polynomials.
//!
//! Fields are small enough to enumerate (the guard is `p^n <= 2^20`), which
//! keeps root-finding and primitive-root selection exact and deterministic.

use std::sync::Arc;

use crate::scalar::Scalar;
use crate::{Error, Result};

const ENUMERATION_LIMIT: u64 = 1 << 20;

/// A finite field `F_p[z]/(modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    degree: usize,
    /// Monic, length `degree + 1`, coefficients reduced mod `p`, low-to-high.
    modulus: Vec<u64>,
}

impl FiniteField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= (1 << 31) {
            return Err(Error::SizeLimit(format!("prime {p} too large")));
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let degree = modulus.len().saturating_sub(1);
        if degree == 0 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField(
                "finite-field modulus must be monic of positive degree".into(),
            ));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::Reducible(poly_display(&modulus), p));
        }
        Ok(Arc::new(FiniteField { p, degree, modulus }))
    }

    /// The field `F_{p^n}` on the default (lexicographically smallest
    /// irreducible) polynomial of degree `n`.
    pub fn default_of_degree(p: u64, n: usize) -> Result<Arc<Self>> {
        Self::new(p, default_irreducible(p, n)?)
    }

    pub fn prime_field(p: u64) -> Result<Arc<Self>> {
        Self::default_of_degree(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `p^degree` as a u64 (guarded at construction sites that enumerate).
    pub fn size(&self) -> u64 {
        self.p.pow(self.degree as u32)
    }

    pub fn zero(self: &Arc<Self>) -> FFElement {
        FFElement {
            field: Arc::clone(self),
            coords: vec![0; self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> FFElement {
        self.from_u64(1)
    }

    pub fn from_u64(self: &Arc<Self>, value: u64) -> FFElement {
        let mut coords = vec![0; self.degree];
        coords[0] = value % self.p;
        FFElement {
            field: Arc::clone(self),
            coords,
        }
    }

    /// Signed integer reduction into the prime subfield.
    pub fn from_i64(self: &Arc<Self>, value: i64) -> FFElement {
        let p = self.p as i64;
        self.from_u64(value.rem_euclid(p) as u64)
    }

    /// The class of the generator `z`.
    pub fn generator(self: &Arc<Self>) -> FFElement {
        let mut coords = vec![0; self.degree];
        if self.degree == 1 {
            // F_p itself: z is a root of the degree-1 modulus.
            coords[0] = (self.p - self.modulus[0] % self.p) % self.p;
        } else {
            coords[1] = 1;
        }
        FFElement {
            field: Arc::clone(self),
            coords,
        }
    }

    /// Element with the given enumeration index; coordinates are the
    /// big-endian base-p digits, so increasing index is increasing
    /// lexicographic order on `(c_0, ..., c_{n-1})`.
    pub fn element_from_index(self: &Arc<Self>, index: u64) -> FFElement {
        let mut coords = vec![0; self.degree];
        let mut rem = index;
        for slot in (0..self.degree).rev() {
            coords[slot] = rem % self.p;
            rem /= self.p;
        }
        FFElement {
            field: Arc::clone(self),
            coords,
        }
    }

    /// All elements in lexicographic coordinate order.
    pub fn enumerate(self: &Arc<Self>) -> Result<Vec<FFElement>> {
        let size = self.size();
        if size > ENUMERATION_LIMIT {
            return Err(Error::SizeLimit(format!(
                "cannot enumerate field of size {size}"
            )));
        }
        Ok((0..size).map(|i| self.element_from_index(i)).collect())
    }
}

/// An element of a [`FiniteField`], stored on the basis `1, z, ..., z^{n-1}`.
#[derive(Debug, Clone)]
pub struct FFElement {
    field: Arc<FiniteField>,
    coords: Vec<u64>,
}

impl PartialEq for FFElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coords == other.coords
    }
}

impl Eq for FFElement {}

impl FFElement {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    fn check_same_field(&self, rhs: &Self) {
        assert!(
            *self.field == *rhs.field,
            "finite-field elements from different fields"
        );
    }

    /// Multiplicative order; errors on zero.
    pub fn multiplicative_order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let group = self.field.size() - 1;
        let mut order = group;
        for (prime, _) in factorize(group) {
            while order % prime == 0 && self.pow_u64(order / prime)?.is_one() {
                order /= prime;
            }
        }
        Ok(order)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self) -> Self {
        self.pow_u64(self.field.p()).expect("p >= 1")
    }
}

impl Scalar for FFElement {
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn add(&self, rhs: &Self) -> Self {
        self.check_same_field(rhs);
        let p = self.field.p;
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FFElement {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    fn neg(&self) -> Self {
        let p = self.field.p;
        let coords = self.coords.iter().map(|&a| (p - a) % p).collect();
        FFElement {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.check_same_field(rhs);
        let p = self.field.p;
        let product = poly_mul(&self.coords, &rhs.coords, p);
        let coords = poly_rem(&product, &self.field.modulus, p, self.field.degree);
        FFElement {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        // x^(q - 2) with q = p^n.
        self.pow_u64(self.field.size() - 2)
    }
}

/// Embedding of a subfield into an extension, by a chosen root of the
/// subfield's defining polynomial.
#[derive(Debug, Clone)]
pub struct FFEmbedding {
    source: Arc<FiniteField>,
    target: Arc<FiniteField>,
    generator_image: FFElement,
}

impl FFEmbedding {
    /// Deterministic embedding: the image of the subfield generator is the
    /// lexicographically smallest root of the subfield polynomial in the
    /// target.
    pub fn canonical(source: &Arc<FiniteField>, target: &Arc<FiniteField>) -> Result<Self> {
        if target.degree % source.degree != 0 || source.p != target.p {
            return Err(Error::UnsupportedEmbedding(format!(
                "F_{}^{} does not embed in F_{}^{}",
                source.p, source.degree, target.p, target.degree
            )));
        }
        let image = smallest_root(source.modulus(), target)?.ok_or_else(|| {
            Error::MathAssertion("subfield polynomial has no root in extension".into())
        })?;
        Ok(FFEmbedding {
            source: Arc::clone(source),
            target: Arc::clone(target),
            generator_image: image,
        })
    }

    pub fn identity(field: &Arc<FiniteField>) -> Self {
        FFEmbedding {
            source: Arc::clone(field),
            target: Arc::clone(field),
            generator_image: field.generator(),
        }
    }

    pub fn source(&self) -> &Arc<FiniteField> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteField> {
        &self.target
    }

    pub fn apply(&self, x: &FFElement) -> FFElement {
        assert!(*x.field == *self.source, "element not in embedding source");
        let mut acc = self.target.zero();
        let mut power = self.target.one();
        for (i, &c) in x.coords.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&power.mul(&self.target.from_u64(c)));
            }
            if i + 1 < x.coords.len() {
                power = power.mul(&self.generator_image);
            }
        }
        acc
    }
}

/// The lexicographically smallest root in `field` of a polynomial with
/// prime-field coefficients, if any.
pub fn smallest_root(poly: &[u64], field: &Arc<FiniteField>) -> Result<Option<FFElement>> {
    for candidate in field.enumerate()? {
        if eval_prime_poly(poly, &candidate).is_zero() {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

fn eval_prime_poly(poly: &[u64], x: &FFElement) -> FFElement {
    let field = x.field();
    let mut acc = field.zero();
    for &c in poly.iter().rev() {
        acc = acc.mul(x).add(&field.from_u64(c));
    }
    acc
}

/// `c` with `c^order = target`, of maximal multiplicative order among such
/// roots; ties broken by smallest coordinate vector. Errors when no root
/// exists.
pub fn primitive_root_of(target: &FFElement, order: u64) -> Result<FFElement> {
    if order == 0 {
        return Err(Error::InvalidArgument("root order must be positive".into()));
    }
    if target.is_zero() {
        return Err(Error::NoRoot { order });
    }
    let mut best: Option<(u64, FFElement)> = None;
    for candidate in target.field().enumerate()? {
        if candidate.is_zero() || candidate.pow_u64(order)? != *target {
            continue;
        }
        let ord = candidate.multiplicative_order()?;
        let better = match &best {
            None => true,
            Some((best_ord, _)) => ord > *best_ord,
        };
        if better {
            best = Some((ord, candidate));
        }
    }
    best.map(|(_, c)| c).ok_or(Error::NoRoot { order })
}

// --- polynomial arithmetic over F_p (dense, low-to-high) ---

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder of `a` mod the monic `m`, padded/truncated to `width` coords.
fn poly_rem(a: &[u64], m: &[u64], p: u64, width: usize) -> Vec<u64> {
    let deg_m = m.len() - 1;
    let mut a = a.to_vec();
    while a.len() > deg_m {
        let lead = *a.last().unwrap() % p;
        let shift = a.len() - 1 - deg_m;
        if lead != 0 {
            for (k, &mc) in m.iter().enumerate() {
                let idx = shift + k;
                a[idx] = (a[idx] + (p - mc % p) % p * lead) % p;
            }
        }
        a.pop();
    }
    a.resize(width, 0);
    a
}

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let deg_b = b.len() - 1;
        let lead_inv = mod_inv(*b.last().unwrap(), p);
        let monic_b: Vec<u64> = b.iter().map(|&c| c * lead_inv % p).collect();
        let mut r = {
            let mut r = a.clone();
            while r.len() > deg_b {
                let lead = *r.last().unwrap();
                let shift = r.len() - 1 - deg_b;
                if lead != 0 {
                    for (k, &mc) in monic_b.iter().enumerate() {
                        r[shift + k] = (r[shift + k] + (p - mc) % p * lead) % p;
                    }
                }
                r.pop();
            }
            r
        };
        poly_trim(&mut r);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p prime, a != 0 mod p.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Irreducibility over `F_p` via gcds with `x^{p^d} - x` for `d <= deg/2`.
pub fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let mut poly = poly.to_vec();
    poly_trim(&mut poly);
    if poly.len() < 2 {
        return false;
    }
    let n = poly.len() - 1;
    if n == 1 {
        return true;
    }
    // frob = x^{p^d} mod poly, iterated.
    let x = vec![0, 1];
    let mut frob = x.clone();
    for d in 1..=n / 2 {
        // raise to the p-th power, reducing mod poly.
        let mut acc = vec![1u64];
        let mut base = frob.clone();
        let mut exp = p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = poly_rem(&poly_mul(&acc, &base, p), &poly, p, n);
            }
            base = poly_rem(&poly_mul(&base, &base, p), &poly, p, n);
            exp >>= 1;
        }
        frob = acc;
        let _ = d;
        // gcd(poly, frob - x) must be 1.
        let mut diff = frob.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(poly.clone(), diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree `n`
/// over `F_p`; coefficient tuples are compared from the highest-degree
/// coefficient down to the constant.
pub fn default_irreducible(p: u64, n: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidField("degree must be positive".into()));
    }
    let count = p.checked_pow(n as u32).filter(|&c| c <= ENUMERATION_LIMIT);
    let count = count.ok_or_else(|| Error::SizeLimit("default-polynomial search".into()))?;
    for idx in 0..count {
        // digits of idx, base p, most significant digit = coefficient of x^{n-1}.
        let mut coeffs = vec![0u64; n + 1];
        coeffs[n] = 1;
        let mut rem = idx;
        for slot in 0..n {
            coeffs[slot] = rem % p;
            rem /= p;
        }
        if is_irreducible(&coeffs, p) {
            return Ok(coeffs);
        }
    }
    Err(Error::MathAssertion(format!(
        "no irreducible polynomial of degree {n} over F_{p}"
    )))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Trial-division factorization, returned as (prime, multiplicity) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut m = 0;
            while n % d == 0 {
                n /= d;
                m += 1;
            }
            out.push((d, m));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn poly_display(poly: &[u64]) -> String {
    let terms: Vec<String> = poly
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match i {
            0 => format!("{c}"),
            1 => format!("{c}*x"),
            _ => format!("{c}*x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
