//! Arithmetic in small finite fields GF(p^f), q <= 2^16.
//!
//! Elements are stored as integer codes in `[0, q)` encoding the polynomial
//! residue in base `p` (least significant coefficient first). The modulus is
//! the lexicographically least monic irreducible of degree `f`, so codes are
//! reproducible across runs. Multiplication goes through log/antilog tables
//! built from a verified primitive element.

use crate::util::{is_prime, prime_factors};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{f} out of supported range (q <= 65536)")]
    OutOfRange { p: u64, f: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
}

/// The field GF(p^f) with tabulated arithmetic.
pub struct Field {
    p: u32,
    f: u32,
    q: u32,
    /// Monic modulus of degree f; coefficients c0..cf with cf = 1.
    modulus: Vec<u32>,
    /// exp[i] = primitive^i for i in [0, q-1).
    exp: Vec<u32>,
    /// log[code] for nonzero codes; log[0] is unused.
    log: Vec<u32>,
    primitive: u32,
}

impl fmt::Debug for Field {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "GF({}^{})", self.p, self.f)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}
impl Eq for Field {}

/// Polynomial helpers over Z_p, coefficients little-endian, for bootstrap only.
mod poly {
    /// Remainder of `a` modulo monic `m` over Z_p.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let dm = m.len() - 1;
        while a.len() > dm {
            let lead = *a.last().unwrap();
            let shift = a.len() - 1 - dm;
            if lead != 0 {
                for i in 0..=dm {
                    let idx = shift + i;
                    let sub = (lead as u64 * m[i] as u64) % p as u64;
                    a[idx] = ((a[idx] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
            a.pop();
        }
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        out
    }

    pub fn is_zero(a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }
}

impl Field {
    /// Construct GF(p^f) with the lexicographically least monic irreducible
    /// modulus and the least primitive element.
    pub fn new(p: u64, f: u32) -> Result<Arc<Field>, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if f == 0 {
            return Err(GfError::OutOfRange { p, f });
        }
        let mut q: u64 = 1;
        for _ in 0..f {
            q = q.checked_mul(p).ok_or(GfError::OutOfRange { p, f })?;
            if q > 65536 {
                return Err(GfError::OutOfRange { p, f });
            }
        }
        let p = p as u32;
        let q = q as u32;
        let modulus = least_irreducible(p, f);

        let mut field = Field {
            p,
            f,
            q,
            modulus,
            exp: Vec::new(),
            log: vec![0; q as usize],
            primitive: 1,
        };
        field.install_primitive();
        Ok(Arc::new(field))
    }

    /// Find the least code whose powers enumerate every unit exactly once, and
    /// fill the log/antilog tables from it.
    fn install_primitive(&mut self) {
        let q = self.q;
        if q == 2 {
            self.primitive = 1;
            self.exp = vec![1];
            self.log[1] = 0;
            return;
        }
        let factors = prime_factors(q as u64 - 1);
        'cand: for g in 2..q {
            // quick order screen before building the full table
            for &r in &factors {
                if self.slow_pow(g, (q as u64 - 1) / r) == 1 {
                    continue 'cand;
                }
            }
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut seen = vec![false; q as usize];
            let mut acc = 1u32;
            for _ in 0..q - 1 {
                if seen[acc as usize] {
                    continue 'cand;
                }
                seen[acc as usize] = true;
                exp.push(acc);
                acc = self.slow_mul(acc, g);
            }
            debug_assert_eq!(acc, 1);
            self.primitive = g;
            for (i, &code) in exp.iter().enumerate() {
                self.log[code as usize] = i as u32;
            }
            self.exp = exp;
            return;
        }
        unreachable!("every finite field has a primitive element");
    }

    fn decode(&self, code: u32) -> Vec<u32> {
        let mut c = code;
        let mut out = vec![0u32; self.f as usize];
        for d in out.iter_mut() {
            *d = c % self.p;
            c /= self.p;
        }
        out
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        let mut code = 0u64;
        for &c in coeffs.iter().rev() {
            code = code * self.p as u64 + c as u64;
        }
        code as u32
    }

    /// Table-free multiplication, used while bootstrapping the tables.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let prod = poly::mul(&self.decode(a), &self.decode(b), self.p);
        let rem = poly::rem(&prod, &self.modulus, self.p);
        let mut coeffs = rem;
        coeffs.resize(self.f as usize, 0);
        self.encode(&coeffs)
    }

    fn slow_pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// Code of the verified primitive element.
    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.f == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let da = self.decode(a);
        let n: Vec<u32> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&n)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        let e = (self.q as u64 - 1 - self.log[a as usize] as u64) % (self.q as u64 - 1);
        Ok(self.exp[e as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let le = (self.log[a as usize] as u128 * e as u128) % (self.q as u128 - 1);
        self.exp[le as usize]
    }

    /// a^(p^j), the j-th iterate of the Frobenius automorphism.
    pub fn frobenius(&self, a: u32, j: u32) -> u32 {
        let mut e = 1u64;
        for _ in 0..j % self.f {
            e = e
                .checked_mul(self.p as u64)
                .expect("p^j fits u64 for j < f <= 16");
        }
        self.pow(a, e)
    }

    /// Multiplicative order of a nonzero code.
    pub fn unit_order(&self, a: u32) -> u64 {
        assert_ne!(a, 0);
        let n = self.q as u64 - 1;
        let l = self.log[a as usize] as u64;
        n / num_integer::gcd(n, l)
    }

    pub fn elem(self: &Arc<Self>, code: u32) -> FieldElem {
        assert!(code < self.q, "code out of range");
        FieldElem {
            field: Arc::clone(self),
            code,
        }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElem {
        self.elem(0)
    }
    pub fn one(self: &Arc<Self>) -> FieldElem {
        self.elem(1)
    }
    pub fn primitive_elem(self: &Arc<Self>) -> FieldElem {
        self.elem(self.primitive)
    }
}

/// Lexicographically least monic irreducible of degree f over Z_p, ordered by
/// the base-p code of the non-leading coefficients.
fn least_irreducible(p: u32, f: u32) -> Vec<u32> {
    let mut total: u64 = 1;
    for _ in 0..f {
        total *= p as u64;
    }
    for code in 0..total {
        let mut coeffs = Vec::with_capacity(f as usize + 1);
        let mut c = code;
        for _ in 0..f {
            coeffs.push((c % p as u64) as u32);
            c /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist");
}

/// Trial division against all monic polynomials of degree <= deg/2.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 1 {
        return true;
    }
    if m[0] == 0 {
        return false; // divisible by x
    }
    for d in 1..=deg / 2 {
        let mut total: u64 = 1;
        for _ in 0..d {
            total *= p as u64;
        }
        for code in 0..total {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push((c % p as u64) as u32);
                c /= p as u64;
            }
            div.push(1);
            if poly::is_zero(&poly::rem(m, &div, p)) {
                return false;
            }
        }
    }
    true
}

/// An element of a specific field, carrying its field reference.
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<Field>,
    code: u32,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}#{:?}", self.code, self.field)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && *self.field == *other.field
    }
}
impl Eq for FieldElem {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    pub fn code(&self) -> u32 {
        self.code
    }
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same_field(&self, other: &FieldElem) -> Result<(), GfError> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.mul(self.code, other.code)))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.div(self.code, other.code)?))
    }

    pub fn inv(&self) -> Result<FieldElem, GfError> {
        Ok(self.field.elem(self.field.inv(self.code)?))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.field.elem(self.field.pow(self.code, e))
    }

    /// a^(p^j); `frobenius(a, f)` is the identity.
    pub fn frobenius(&self, j: u32) -> FieldElem {
        self.field.elem(self.field.frobenius(self.code, j))
    }
}

/// Dispatch form of the arithmetic operations.
pub fn arith(a: &FieldElem, b: &FieldElem, kind: ArithKind) -> Result<FieldElem, GfError> {
    match kind {
        ArithKind::Add => a.add(b),
        ArithKind::Sub => a.sub(b),
        ArithKind::Mul => a.mul(b),
        ArithKind::Div => a.div(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force irreducibility oracle: scan every factorisation shape by
    /// multiplying all monic pairs of lower degree.
    fn irreducible_oracle(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        for d1 in 1..deg {
            let d2 = deg - d1;
            let (mut t1, mut t2) = (1u64, 1u64);
            for _ in 0..d1 {
                t1 *= p as u64;
            }
            for _ in 0..d2 {
                t2 *= p as u64;
            }
            for c1 in 0..t1 {
                let mut a = Vec::new();
                let mut c = c1;
                for _ in 0..d1 {
                    a.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                a.push(1);
                for c2 in 0..t2 {
                    let mut b = Vec::new();
                    let mut c = c2;
                    for _ in 0..d2 {
                        b.push((c % p as u64) as u32);
                        c /= p as u64;
                    }
                    b.push(1);
                    if poly::mul(&a, &b, p) == m {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn gf2_prime_field() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.primitive(), 1);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn gf9_modulus_and_primitive() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.q(), 9);
        // chosen modulus must pass the brute-force oracle
        assert!(irreducible_oracle(f.modulus(), 3));
        // x^2+1 (code: c0=1,c1=0) is irreducible over F3, and it is the lex-least
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // primitive element has order exactly 8: its powers enumerate the units
        let g = f.primitive();
        let mut seen = std::collections::HashSet::new();
        let mut acc = 1u32;
        for _ in 0..8 {
            assert!(seen.insert(acc));
            acc = f.mul(acc, g);
        }
        assert_eq!(acc, 1);
        assert_eq!(f.unit_order(g), 8);
    }

    #[test]
    fn gf4_omega() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.q(), 4);
        // the nonidentity units are omega and omega^2 with omega^2 = omega+1, omega^3 = 1
        let omega = f.elem(f.primitive());
        let sq = omega.mul(&omega).unwrap();
        assert_eq!(sq, omega.add(&f.one()).unwrap());
        assert_eq!(omega.pow(3), f.one());
        // char 2: omega + omega = 0
        assert!(omega.add(&omega).unwrap().is_zero());
        // frobenius is squaring
        assert_eq!(omega.frobenius(1), sq);
    }

    #[test]
    fn gf7_arith() {
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.mul(3, 5), 1);
        let a = f.elem(3);
        let b = f.elem(5);
        assert_eq!(arith(&a, &b, ArithKind::Mul).unwrap(), f.one());
    }

    #[test]
    fn gf9_every_unit_inverts() {
        let f = Field::new(3, 2).unwrap();
        for a in 1..9 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), Err(GfError::DivisionByZero));
    }

    #[test]
    fn division_undoes_multiplication() {
        let f = Field::new(13, 1).unwrap();
        for a in 0..13 {
            for b in 1..13 {
                let prod = f.mul(a, b);
                assert_eq!(f.div(prod, b).unwrap(), a);
            }
        }
    }

    #[test]
    fn frobenius_gf9_is_involution() {
        let f = Field::new(3, 2).unwrap();
        for a in 0..9 {
            assert_eq!(f.frobenius(f.frobenius(a, 1), 1), a);
            assert_eq!(f.frobenius(a, 2), a); // order f
        }
    }

    #[test]
    fn frobenius_gf8_fixed_points() {
        let f = Field::new(2, 3).unwrap();
        let fixed: Vec<u32> = (0..8).filter(|&a| f.frobenius(a, 1) == a).collect();
        assert_eq!(fixed, vec![0, 1]);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, f) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 4), (2, 5), (61, 1)] {
            let k = Field::new(p, f).unwrap();
            let q = k.q();
            assert!(q <= 64);
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    // frobenius is additive: (a+b)^p = a^p + b^p
                    assert_eq!(
                        k.frobenius(k.add(a, b), 1),
                        k.add(k.frobenius(a, 1), k.frobenius(b, 1))
                    );
                    for c in 0..q {
                        assert_eq!(k.mul(a, k.mul(b, c)), k.mul(k.mul(a, b), c));
                        assert_eq!(k.add(a, k.add(b, c)), k.add(k.add(a, b), c));
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn large_field_randomized_axioms() {
        let k = Field::new(2, 16).unwrap();
        assert_eq!(k.q(), 65536);
        // distributivity on a pseudorandom sample
        let mut x: u32 = 12345;
        let mut next = move || {
            x = x.wrapping_mul(1103515245).wrapping_add(12421);
            x % 65536
        };
        for _ in 0..2000 {
            let (a, b, c) = (next(), next(), next());
            assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        }
        // multiplicative group is cyclic of order q-1
        assert_eq!(k.unit_order(k.primitive()), 65535);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(6, 1).unwrap_err(), GfError::NotPrime(6));
        assert!(matches!(
            Field::new(2, 17).unwrap_err(),
            GfError::OutOfRange { .. }
        ));
        let f9 = Field::new(3, 2).unwrap();
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(
            f9.elem(1).add(&f7.elem(1)).unwrap_err(),
            GfError::FieldMismatch
        );
    }
}
