// SPDX-License-Identifier: Apache-2.0

//! Arithmetic in GF(p^m).
//!
//! Elements are stored as packed integers: the element with little-endian
//! coefficients `(c_0, ..., c_{m-1})` over GF(p) is the integer
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. Enumeration order is integer order,
//! so zero comes first and ones follows immediately.
//!
//! Multiplication goes through exp/log tables built from a primitive element.
//! The schoolbook polynomial product ([`GaloisField::mul_reference`]) is kept
//! alongside it and the two agree bit for bit.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of a [`GaloisField`], meaningful only together with its field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf(pub(crate) u32);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    /// Packed integer representation.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A symbol of the big alphabet F_Q, identified with an r-vector over F_q.
pub type Symbol = Vec<Gf>;

/// The field GF(p^m) with a fixed monic irreducible modulus.
#[derive(Clone)]
pub struct GaloisField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `num` modulo the monic polynomial `den`, coefficients mod p.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = r.pop().unwrap() % p64;
        if lead == 0 {
            continue;
        }
        let off = r.len() - dd;
        for (k, &c) in den[..dd].iter().enumerate() {
            r[off + k] = (r[off + k] + (p64 - lead) * c as u64) % p64;
        }
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

fn digits_of(mut idx: u64, p: u32, len: u32) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (idx % p as u64) as u32;
            idx /= p as u64;
            d
        })
        .collect()
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for idx in 0..(p as u64).pow(d) {
            let mut div = digits_of(idx, p, d);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    /// Builds GF(p^m) with the lexicographically least monic irreducible modulus.
    ///
    /// Candidates `x^m + c_{m-1} x^{m-1} + ... + c_0` are tried in increasing
    /// order of the packed integer `c_0 + c_1 p + ...`.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = p.checked_pow(m).filter(|&q| q <= MAX_FIELD_ORDER);
        let q = q.ok_or(Error::FieldTooLarge { p, m })?;
        let p = p as u32;
        let mut modulus = None;
        for idx in 0..q {
            let mut cand = digits_of(idx, p, m);
            cand.push(1);
            if is_irreducible(&cand, p) {
                modulus = Some(cand);
                break;
            }
        }
        let modulus = modulus.ok_or(Error::NoIrreducible { p, m })?;
        let mut field = GaloisField {
            p,
            m,
            q: q as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn build_tables(&mut self) {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..self.q)
            .map(Gf)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow_reference(g, order / l) != Gf::ONE)
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = Gf::ONE;
        for k in 0..order {
            exp.push(x.0);
            log[x.0 as usize] = k as u32;
            x = self.mul_reference(x, generator);
        }
        let head = exp.clone();
        exp.extend(head);
        self.exp = exp;
        self.log = log;
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Field order q = p^m.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Little-endian coefficients of the modulus, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Gf {
        Gf::ZERO
    }

    pub fn one(&self) -> Gf {
        Gf::ONE
    }

    pub fn from_index(&self, idx: u32) -> Result<Gf> {
        if idx < self.q {
            Ok(Gf(idx))
        } else {
            Err(Error::InvalidElement(format!(
                "index {idx} out of range for a field of order {}",
                self.q
            )))
        }
    }

    /// Element with the given little-endian coefficients (missing high
    /// coefficients are zero).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Gf> {
        if coeffs.len() > self.m as usize {
            return Err(Error::InvalidElement(format!(
                "{} coefficients given for a degree-{} extension",
                coeffs.len(),
                self.m
            )));
        }
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::InvalidElement(format!(
                    "coefficient {c} not reduced mod {}",
                    self.p
                )));
            }
            idx = idx * self.p + c;
        }
        Ok(Gf(idx))
    }

    /// Integer embedding of GF(p) into the field.
    pub fn from_int(&self, n: i64) -> Gf {
        Gf(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, a: Gf) -> Vec<u32> {
        digits_of(a.0 as u64, self.p, self.m)
    }

    /// All q elements, zero first, in packed-integer order.
    pub fn elements(&self) -> impl Iterator<Item = Gf> + '_ {
        (0..self.q).map(Gf)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf {
        Gf(rng.gen_range(0..self.q))
    }

    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        if self.p == 2 {
            return Gf(a.0 ^ b.0);
        }
        if self.m == 1 {
            return Gf((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut place, mut out) = (a.0, b.0, 1u32, 0u32);
        for _ in 0..self.m {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        Gf(out)
    }

    pub fn neg(&self, a: Gf) -> Gf {
        if self.p == 2 {
            return a;
        }
        let (mut x, mut place, mut out) = (a.0, 1u32, 0u32);
        for _ in 0..self.m {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place = place.wrapping_mul(self.p);
        }
        Gf(out)
    }

    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf::ZERO;
        }
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        Gf(self.exp[k as usize])
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        if a.0 == 0 {
            return Err(Error::InverseOfZero);
        }
        let order = self.q - 1;
        Ok(Gf(self.exp[((order - self.log[a.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.0 == 0 {
            return Gf::ZERO;
        }
        let order = (self.q - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % order)) % order;
        Gf(self.exp[k as usize])
    }

    /// Schoolbook product modulo the field polynomial, independent of the
    /// log tables.
    pub fn mul_reference(&self, a: Gf, b: Gf) -> Gf {
        let x = self.coeffs(a);
        let y = self.coeffs(b);
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.m as usize - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let rem = poly_rem(&prod, &self.modulus, self.p);
        self.from_coeffs(&rem[..rem.len().min(self.m as usize)])
            .expect("reduced remainder is a valid element")
    }

    fn pow_reference(&self, a: Gf, mut e: u64) -> Gf {
        let (mut base, mut acc) = (a, Gf::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_reference(acc, base);
            }
            base = self.mul_reference(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn dot(&self, a: &[Gf], b: &[Gf]) -> Gf {
        a.iter()
            .zip(b)
            .fold(Gf::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn add_symbols(&self, a: &[Gf], b: &[Gf]) -> Symbol {
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, m: u32) -> GaloisField {
        GaloisField::new(p, m).unwrap()
    }

    #[test]
    fn make_rejects_bad_parameters() {
        assert_eq!(GaloisField::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(GaloisField::new(1, 1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(GaloisField::new(2, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(
            GaloisField::new(2, 21),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn prime_field_modulus_is_x() {
        assert_eq!(gf(2, 1).modulus(), &[0, 1]);
        assert_eq!(gf(7, 1).modulus(), &[0, 1]);
    }

    #[test]
    fn gf4_modulus_is_only_irreducible_quadratic() {
        // Brute force: a monic quadratic over GF(2) is irreducible iff it has no root.
        let irreducible: Vec<[u32; 3]> = (0..4)
            .map(|i| [i & 1, i >> 1, 1])
            .filter(|c| (0..2).all(|x| (c[0] + c[1] * x + x * x) % 2 != 0))
            .collect();
        assert_eq!(irreducible, vec![[1, 1, 1]]);
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf4_x_squared_is_x_plus_one() {
        let f = gf(2, 2);
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.coeffs(f.mul(x, x)), vec![1, 1]);
    }

    #[test]
    fn gf7_inverse_of_three() {
        let f = gf(7, 1);
        assert_eq!(f.inv(Gf(3)).unwrap(), Gf(5));
        assert_eq!(f.inv(Gf::ZERO), Err(Error::InverseOfZero));
    }

    #[test]
    fn enumeration_is_zero_first_and_complete() {
        assert_eq!(gf(2, 1).elements().collect::<Vec<_>>(), vec![Gf(0), Gf(1)]);
        let g7: Vec<u32> = gf(7, 1).elements().map(Gf::index).collect();
        assert_eq!(g7, (0..7).collect::<Vec<_>>());
        let g4: std::collections::HashSet<_> = gf(2, 2).elements().collect();
        assert_eq!(g4.len(), 4);
    }

    #[test]
    fn coefficient_round_trip_and_validation() {
        let f = gf(3, 2);
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
        assert!(f.from_coeffs(&[3]).is_err());
        assert!(f.from_coeffs(&[0, 0, 1]).is_err());
        assert!(f.from_index(9).is_err());
    }

    #[test]
    fn tables_match_schoolbook_product() {
        for (p, m) in [(2, 1), (2, 3), (2, 4), (3, 2), (5, 2), (7, 1), (2, 6)] {
            let f = gf(p, m);
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_reference(a, b), "GF({p}^{m})");
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_fields() {
        for (p, m) in [(2, 1), (2, 2), (3, 1), (2, 3), (5, 1), (7, 1), (3, 2), (2, 4)] {
            let f = gf(p, m);
            let els: Vec<Gf> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Gf::ZERO);
                assert_eq!(f.mul(a, Gf::ONE), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Gf::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_pairs_up_to_64() {
        for (p, m) in [(2, 5), (2, 6), (3, 3), (5, 2), (7, 2), (11, 1), (61, 1)] {
            let f = gf(p, m);
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    if !b.is_zero() {
                        assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for (p, m) in [(2, 4), (3, 2), (5, 2), (7, 1), (2, 8), (3, 3)] {
            let f = gf(p, m);
            let q = f.order() as u64;
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a);
                assert_eq!(f.pow_reference(a, q), a);
            }
        }
    }

    #[test]
    fn large_field_builds() {
        let f = gf(2, 16);
        assert_eq!(f.order(), 65536);
        let a = Gf(12345);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Gf::ONE);
    }

    #[test]
    fn irreducibility_check() {
        assert!(is_irreducible(&[1, 1, 0, 1], 2)); // x^3 + x + 1
        assert!(!is_irreducible(&[1, 0, 1], 2)); // (x+1)^2
        assert!(is_irreducible(&[1, 0, 1], 3)); // x^2 + 1 over GF(3)
    }
}
