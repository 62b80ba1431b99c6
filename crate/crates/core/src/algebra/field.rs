//! Finite fields `F_{p^a}` with table-driven multiplication.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{a-1} p^{a-1}`
//! where `(c_0, ..., c_{a-1})` are the coordinates in the power basis of the
//! modulus. Multiplication goes through discrete log/exp tables built once per
//! field; addition is digit-wise.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order the constructor accepts.
pub const FIELD_SIZE_CAP: u64 = 1 << 16;

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

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
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

/// Dense polynomials over `F_p`, low degree first. Only what the modulus
/// search needs.
mod fp_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = r[k] * lead_inv % p;
            let shift = k - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    /// `x^(p^k) mod m` by repeated p-th powering.
    pub fn frob_x(k: u32, m: &[u64], p: u64) -> Vec<u64> {
        let mut x = rem(&[0, 1], m, p);
        for _ in 0..k {
            x = pow_mod(&x, p, m, p);
        }
        x
    }

    /// Rabin's test: `x^(p^a) = x mod f` and `gcd(x^(p^(a/q)) - x, f) = 1`
    /// for every prime `q | a`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let a = (f.len() - 1) as u32;
        if a == 1 {
            return true;
        }
        let x = rem(&[0, 1], f, p);
        if trim(frob_x(a, f, p)) != trim(x.clone()) {
            return false;
        }
        for q in super::prime_divisors(a as u64) {
            let mut h = frob_x(a / q as u32, f, p);
            h.resize(h.len().max(2), 0);
            h[1] = (h[1] + p - 1) % p;
            let g = gcd(f, &trim(h), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// The field `F_{p^a}` with its canonical modulus.
pub struct FiniteField {
    p: u32,
    degree: u32,
    order: u32,
    /// Monic, low degree first, length `degree + 1`.
    modulus: Vec<u32>,
    /// `p^i` for digit extraction.
    place: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}^{} (modulus {:?})",
            self.p, self.degree, self.modulus
        )
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree
    }
}
impl Eq for FiniteField {}

impl FiniteField {
    /// Builds `F_{p^a}`. The modulus is the lexicographically least monic
    /// irreducible of degree `a`, comparing coefficient vectors from `x^{a-1}`
    /// down to the constant term.
    pub fn new(p: u64, a: u32) -> Result<Arc<FiniteField>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::InvalidInput("extension degree must be >= 1".into()));
        }
        let order = (p as u128).checked_pow(a).unwrap_or(u128::MAX);
        if order > FIELD_SIZE_CAP as u128 {
            return Err(Error::SizeCapExceeded(format!(
                "{p}^{a} exceeds field cap {FIELD_SIZE_CAP}"
            )));
        }
        let order = order as u64;
        let mut modulus = None;
        for code in 0..order {
            let mut f: Vec<u64> = (0..a).map(|i| code / p.pow(i) % p).collect();
            f.push(1);
            if fp_poly::is_irreducible(&f, p) {
                modulus = Some(f);
                break;
            }
        }
        let modulus: Vec<u64> = modulus.expect("irreducible polynomials exist in every degree");
        let place: Vec<u32> = (0..a).map(|i| p.pow(i) as u32).collect();

        let to_poly = |code: u64| -> Vec<u64> { (0..a).map(|i| code / p.pow(i) % p).collect() };
        let to_code = |poly: &[u64]| -> u64 {
            poly.iter()
                .enumerate()
                .map(|(i, &c)| c * p.pow(i as u32))
                .sum()
        };
        let slow_pow = |code: u64, e: u64| -> u64 {
            to_code(&fp_poly::pow_mod(&to_poly(code), e, &modulus, p))
        };

        let group_order = order - 1;
        let divisors = prime_divisors(group_order);
        let generator = (1..order)
            .find(|&g| divisors.iter().all(|&r| slow_pow(g, group_order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; group_order as usize];
        let mut log = vec![0u32; order as usize];
        let g_poly = to_poly(generator);
        let mut cur = vec![1u64];
        for (i, slot) in exp.iter_mut().enumerate() {
            let code = to_code(&cur);
            *slot = code as u32;
            log[code as usize] = i as u32;
            cur = fp_poly::mul_mod(&cur, &g_poly, &modulus, p);
        }

        Ok(Arc::new(FiniteField {
            p: p as u32,
            degree: a,
            order: order as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            place,
            generator: generator as u32,
            exp,
            log,
        }))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients of the modulus, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Canonical primitive element (least code generating `F^×`).
    pub fn primitive_element(&self) -> u32 {
        self.generator
    }

    pub fn digits(&self, x: u32) -> Vec<u32> {
        self.place.iter().map(|&pl| x / pl % self.p).collect()
    }

    /// Encodes power-basis coordinates, reducing each mod `p`. Missing
    /// trailing coordinates are zero.
    pub fn from_digits(&self, digits: &[u32]) -> Result<u32> {
        if digits.len() > self.degree as usize {
            return Err(Error::InvalidInput(format!(
                "{} coordinates for a degree-{} field",
                digits.len(),
                self.degree
            )));
        }
        Ok(digits
            .iter()
            .zip(&self.place)
            .map(|(&d, &pl)| (d % self.p) * pl)
            .sum())
    }

    /// Image of an integer under `Z -> F_p ⊂ F`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        if self.p == 2 {
            return x ^ y;
        }
        if self.degree == 1 {
            let s = x + y;
            return if s >= self.p { s - self.p } else { s };
        }
        let mut out = 0;
        for &pl in &self.place {
            let d = (x / pl % self.p + y / pl % self.p) % self.p;
            out += d * pl;
        }
        out
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        if self.p == 2 {
            return x;
        }
        if self.degree == 1 {
            return if x == 0 { 0 } else { self.p - x };
        }
        let mut out = 0;
        for &pl in &self.place {
            let d = x / pl % self.p;
            out += ((self.p - d) % self.p) * pl;
        }
        out
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let n = self.order - 1;
        let e = self.log[x as usize] + self.log[y as usize];
        self.exp[(if e >= n { e - n } else { e }) as usize]
    }

    pub fn inv(&self, x: u32) -> Result<u32> {
        if x == 0 {
            return Err(Error::ZeroElement);
        }
        let n = self.order - 1;
        let l = self.log[x as usize];
        Ok(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, x: u32, y: u32) -> Result<u32> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e` for any integer exponent; `0^e` with `e < 0` is an error.
    pub fn pow(&self, x: u32, e: i64) -> Result<u32> {
        if x == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Less => Err(Error::ZeroElement),
                std::cmp::Ordering::Equal => Ok(1),
                std::cmp::Ordering::Greater => Ok(0),
            };
        }
        let n = (self.order - 1) as i64;
        let l = self.log[x as usize] as i64;
        Ok(self.exp[(l * e.rem_euclid(n)).rem_euclid(n) as usize])
    }

    /// The unique `y` with `y^p = x`.
    pub fn pth_root(&self, x: u32) -> u32 {
        let e = (self.p as u64).pow(self.degree - 1) as i64;
        self.pow(x, e).expect("nonnegative exponent")
    }

    pub fn multiplicative_order(&self, x: u32) -> Result<u64> {
        if x == 0 {
            return Err(Error::ZeroElement);
        }
        let n = (self.order - 1) as u64;
        let l = self.log[x as usize] as u64;
        Ok(n / num_integer::gcd(n, l))
    }

    /// Canonical primitive `m`-th root of unity: `g^((q-1)/m)`.
    pub fn root_of_unity(&self, m: u64) -> Result<u32> {
        let n = (self.order - 1) as u64;
        if m == 0 || !n.is_multiple_of(m) {
            return Err(Error::MissingRootsOfUnity {
                order: self.order as u64,
                m,
            });
        }
        Ok(self.exp[(n / m) as usize % n as usize])
    }

    pub fn element(self: &Arc<Self>, code: u32) -> FieldElement {
        assert!(code < self.order, "code {code} out of range");
        FieldElement {
            field: Arc::clone(self),
            code,
        }
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |c| self.element(c))
    }
}

/// An element of a [`FiniteField`] carrying its field.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<FiniteField>,
    code: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.code == other.code
    }
}
impl Eq for FieldElement {}

impl FieldElement {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    /// Coordinates in the power basis of the modulus.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.inv(self.code)?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        Ok(self.field.element(self.field.pow(self.code, e)?))
    }

    /// Least `d >= 1` with `x^d = 1`.
    pub fn multiplicative_order(&self) -> Result<u64> {
        self.field.multiplicative_order(self.code)
    }

    fn check(&self, other: &FieldElement) {
        assert!(
            *self.field == *other.field,
            "field mismatch in element arithmetic"
        );
    }
}

macro_rules! field_binop {
    ($tr:ident, $method:ident, $op:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.check(rhs);
                self.field.element(self.field.$op(self.code, rhs.code))
            }
        }
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

field_binop!(Add, add, add);
field_binop!(Sub, sub, sub);
field_binop!(Mul, mul, mul);

impl Div<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        self.field.element(
            self.field
                .div(self.code, rhs.code)
                .expect("division by zero"),
        )
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.element(self.field.neg(self.code))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_modulus_x() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 2);
    }

    #[test]
    fn f4_modulus_is_the_unique_irreducible_quadratic() {
        let f = FiniteField::new(2, 2).unwrap();
        // x^2 + x + 1 is the only degree-2 polynomial over F_2 without a root.
        let roots = |c0: u32, c1: u32| {
            (0..2u32)
                .filter(|&x| (x * x + c1 * x + c0).is_multiple_of(2))
                .count()
        };
        assert_eq!(roots(1, 1), 0);
        assert!(roots(0, 0) > 0 && roots(1, 0) > 0 && roots(0, 1) > 0);
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.elements().count(), 4);
    }

    #[test]
    fn rejects_non_primes_and_huge_fields() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            FiniteField::new(2, 17).unwrap_err(),
            Error::SizeCapExceeded(_)
        ));
    }

    #[test]
    fn modulus_is_deterministic() {
        let a = FiniteField::new(3, 3).unwrap();
        let b = FiniteField::new(3, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        // x^3 + 2x + 1 is the least irreducible cubic over F_3 in this order.
        assert_eq!(a.modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn multiplicative_orders() {
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(f4.element(1).multiplicative_order().unwrap(), 1);
        // enumerate powers of each non-identity unit of F_4
        for x in 2..4 {
            let e = f4.element(x);
            let mut acc = e.clone();
            let mut d = 1;
            while acc.code() != 1 {
                acc = &acc * &e;
                d += 1;
            }
            assert_eq!(d, 3);
            assert_eq!(e.multiplicative_order().unwrap(), 3);
        }
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(f3.element(2).multiplicative_order().unwrap(), 2);
        assert_eq!(
            f3.element(0).multiplicative_order(),
            Err(Error::ZeroElement)
        );
    }

    #[test]
    fn axioms_hold_exhaustively_on_small_fields() {
        for (p, a) in [
            (2, 1),
            (3, 1),
            (2, 2),
            (5, 1),
            (2, 3),
            (3, 2),
            (7, 1),
            (2, 4),
            (2, 5),
            (2, 6),
        ] {
            let f = FiniteField::new(p, a).unwrap();
            let q = f.order();
            assert!(q <= 64);
            for x in 0..q {
                assert_eq!(f.add(x, 0), x);
                assert_eq!(f.add(x, f.neg(x)), 0);
                assert_eq!(f.mul(x, 1), x);
                if x != 0 {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
                }
                for y in 0..q {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    for z in 0..q {
                        assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        let f = FiniteField::new(3, 2).unwrap();
        for x in 0..f.order() {
            assert_eq!(f.pow(f.pth_root(x), 3).unwrap(), x);
        }
    }

    #[test]
    fn roots_of_unity() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let z = f4.root_of_unity(3).unwrap();
        assert_eq!(f4.multiplicative_order(z).unwrap(), 3);
        let f2 = FiniteField::new(2, 1).unwrap();
        assert!(matches!(
            f2.root_of_unity(3),
            Err(Error::MissingRootsOfUnity { .. })
        ));
    }
}
