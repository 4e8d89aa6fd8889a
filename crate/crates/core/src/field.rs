//! The residue field F_q = F_p[y]/(phi) and polynomial arithmetic over
//! finite fields (used for irreducibility and locality checks).

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::RingOps;
use crate::error::{Error, Result};

/// Largest number of prime-field coordinates an element may carry.
pub const MAX_RANK: usize = 8;

/// Element of a residue field, stored as coefficients in the power basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FqElem(pub(crate) [u32; MAX_RANK]);

impl FqElem {
    pub fn coeffs(&self, mu: usize) -> &[u32] {
        &self.0[..mu]
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).map_or(1, |i| i + 1);
        write!(f, "{:?}", &self.0[..last])
    }
}

/// Finite field `F_p[y]/(phi)` of order `q = p^mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    p: u32,
    mu: usize,
    /// Monic modulus, little-endian, length `mu + 1`.
    phi: Vec<u32>,
}

impl ResidueField {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(ResidueField { p, mu: 1, phi: vec![0, 1] })
    }

    /// `F_p[y]/(phi)`; `phi` is reduced mod p and must be monic irreducible.
    pub fn new(p: u32, phi: &[u64]) -> Result<Self> {
        let fp = Self::prime(p)?;
        let phi: Vec<u32> = phi.iter().map(|&c| (c % p as u64) as u32).collect();
        let mut poly: Vec<FqElem> = phi.iter().map(|&c| fp.from_int(c as i64)).collect();
        trim(&fp, &mut poly);
        if poly.len() < 2 || poly.len() - 1 > MAX_RANK || *poly.last().unwrap() != fp.one() {
            return Err(Error::MalformedModulus(format!(
                "residue modulus must be monic of degree 1..={MAX_RANK} mod {p}"
            )));
        }
        if !is_irreducible(&fp, &poly) {
            return Err(Error::MalformedModulus(format!("{:?} is reducible mod {p}", phi)));
        }
        let mu = poly.len() - 1;
        Ok(ResidueField { p, mu, phi: phi[..=mu].to_vec() })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.mu
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.mu as u32)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.phi
    }

    pub fn from_coeffs(&self, c: &[u32]) -> FqElem {
        let mut e = FqElem::default();
        for (i, &x) in c.iter().enumerate().take(self.mu) {
            e.0[i] = x % self.p;
        }
        e
    }

    /// All `q` elements in lexicographic coefficient order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |mut idx| {
            let mut e = FqElem::default();
            for c in e.0.iter_mut().take(self.mu) {
                *c = (idx % self.p as u64) as u32;
                idx /= self.p as u64;
            }
            e
        })
    }
}

impl RingOps for ResidueField {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem::default()
    }

    fn one(&self) -> FqElem {
        let mut e = FqElem::default();
        e.0[0] = 1;
        e
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut e = FqElem::default();
        for i in 0..self.mu {
            e.0[i] = (a.0[i] + b.0[i]) % self.p;
        }
        e
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut e = FqElem::default();
        for i in 0..self.mu {
            e.0[i] = (a.0[i] + self.p - b.0[i]) % self.p;
        }
        e
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        self.sub(&self.zero(), a)
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p as u64;
        if self.mu == 1 {
            let mut e = FqElem::default();
            e.0[0] = (a.0[0] as u64 * b.0[0] as u64 % p) as u32;
            return e;
        }
        let mu = self.mu;
        let mut prod = [0u64; 2 * MAX_RANK];
        for i in 0..mu {
            for j in 0..mu {
                prod[i + j] = (prod[i + j] + a.0[i] as u64 * b.0[j] as u64) % p;
            }
        }
        for d in (mu..2 * mu - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (j, &f) in self.phi.iter().enumerate().take(mu) {
                prod[d - mu + j] = (prod[d - mu + j] + (p - c) * f as u64) % p;
            }
            prod[d] = 0;
        }
        let mut e = FqElem::default();
        for i in 0..mu {
            e.0[i] = prod[i] as u32;
        }
        e
    }

    fn from_int(&self, n: i64) -> FqElem {
        let mut e = FqElem::default();
        e.0[0] = n.rem_euclid(self.p as i64) as u32;
        e
    }

    fn is_unit(&self, a: &FqElem) -> bool {
        !self.is_zero(a)
    }

    fn unit_group_order(&self) -> BigUint {
        BigUint::from(self.order() - 1)
    }
}

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

/// Prime factorization as `(p, e)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// ---- polynomials over a field, little-endian coefficient vectors ----

pub fn trim<F: RingOps>(f: &F, a: &mut Vec<F::Elem>) {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
}

pub fn poly_mul<F: RingOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            f.mul_acc(&mut out[i + j], x, y);
        }
    }
    trim(f, &mut out);
    out
}

/// Quotient and remainder; `m` must be non-zero with a unit leading coefficient.
pub fn poly_divrem<F: RingOps>(
    f: &F,
    a: &[F::Elem],
    m: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let mut m = m.to_vec();
    trim(f, &mut m);
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    trim(f, &mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(&m[dm]).expect("leading coefficient is a unit");
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - dm];
    for d in (dm..r.len()).rev() {
        let c = f.mul(&r[d], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        for (j, mj) in m.iter().enumerate() {
            let t = f.mul(&c, mj);
            r[d - dm + j] = f.sub(&r[d - dm + j], &t);
        }
        q[d - dm] = c;
    }
    trim(f, &mut r);
    trim(f, &mut q);
    (q, r)
}

pub fn poly_rem<F: RingOps>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    poly_divrem(f, a, m).1
}

fn make_monic<F: RingOps>(f: &F, a: &mut [F::Elem]) {
    if let Some(l) = a.last() {
        let inv = f.inv(l).expect("field element");
        for c in a.iter_mut() {
            *c = f.mul(c, &inv);
        }
    }
}

/// Monic greatest common divisor over a field.
pub fn poly_gcd<F: RingOps>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = poly_rem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &mut x);
    x
}

pub fn poly_pow_mod<F: RingOps>(
    f: &F,
    base: &[F::Elem],
    e: &BigUint,
    m: &[F::Elem],
) -> Vec<F::Elem> {
    let mut acc = vec![f.one()];
    let base = poly_rem(f, base, m);
    for i in (0..e.bits()).rev() {
        acc = poly_rem(f, &poly_mul(f, &acc, &acc), m);
        if e.bit(i) {
            acc = poly_rem(f, &poly_mul(f, &acc, &base), m);
        }
    }
    trim(f, &mut acc);
    acc
}

fn x_poly<F: RingOps>(f: &F) -> Vec<F::Elem> {
    vec![f.zero(), f.one()]
}

fn field_order<F: RingOps>(f: &F) -> BigUint {
    f.unit_group_order() + BigUint::one()
}

/// `x^(q^i) mod m`.
fn frobenius_power<F: RingOps>(f: &F, i: usize, m: &[F::Elem]) -> Vec<F::Elem> {
    let q = field_order(f);
    let mut h = poly_rem(f, &x_poly(f), m);
    for _ in 0..i {
        h = poly_pow_mod(f, &h, &q, m);
    }
    h
}

/// Rabin's irreducibility test for a polynomial of degree >= 1 over a field.
pub fn is_irreducible<F: RingOps>(f: &F, poly: &[F::Elem]) -> bool {
    let mut g = poly.to_vec();
    trim(f, &mut g);
    if g.len() < 2 {
        return false;
    }
    let deg = g.len() - 1;
    if deg == 1 {
        return true;
    }
    make_monic(f, &mut g);
    let x = x_poly(f);
    let full = frobenius_power(f, deg, &g);
    if poly_rem(f, &full, &g) != poly_rem(f, &x, &g) {
        return false;
    }
    for (r, _) in factorize(deg as u64) {
        let h = frobenius_power(f, deg / r as usize, &g);
        let mut diff = h;
        diff.resize(diff.len().max(2), f.zero());
        diff[1] = f.sub(&diff[1], &f.one());
        trim(f, &mut diff);
        let d = poly_gcd(f, &diff, &g);
        if d.len() != 1 {
            return false;
        }
    }
    true
}

/// If `g` (degree >= 1) is `phi^e` for one monic irreducible `phi`, returns `(phi, e)`.
pub fn irreducible_power<F: RingOps>(f: &F, g: &[F::Elem]) -> Option<(Vec<F::Elem>, usize)> {
    let mut g = g.to_vec();
    trim(f, &mut g);
    if g.len() < 2 {
        return None;
    }
    make_monic(f, &mut g);
    let deg = g.len() - 1;
    let x = x_poly(f);
    let mut phi = None;
    for i in 1..=deg {
        let mut h = frobenius_power(f, i, &g);
        h.resize(h.len().max(2), f.zero());
        h[1] = f.sub(&h[1], &x[1]);
        trim(f, &mut h);
        let d = poly_gcd(f, &h, &g);
        if d.len() > 1 {
            phi = Some(d);
            break;
        }
    }
    let phi = phi?;
    if !is_irreducible(f, &phi) {
        return None;
    }
    let mut rest = g;
    let mut e = 0;
    while rest.len() > 1 {
        let (q, r) = poly_divrem(f, &rest, &phi);
        if !r.is_empty() {
            return None;
        }
        rest = q;
        e += 1;
    }
    Some((phi, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp_poly(f: &ResidueField, c: &[i64]) -> Vec<FqElem> {
        c.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn irreducibility_over_f2() {
        let f2 = ResidueField::prime(2).unwrap();
        assert!(is_irreducible(&f2, &fp_poly(&f2, &[1, 0, 1, 0, 0, 1])));
        assert!(is_irreducible(&f2, &fp_poly(&f2, &[1, 1, 1])));
        assert!(!is_irreducible(&f2, &fp_poly(&f2, &[1, 0, 1])));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(!is_irreducible(&f2, &fp_poly(&f2, &[1, 0, 1, 0, 1])));
    }

    #[test]
    fn x2_plus_1_splits_mod_5() {
        let f5 = ResidueField::prime(5).unwrap();
        assert!(irreducible_power(&f5, &fp_poly(&f5, &[1, 0, 1])).is_none());
        let (phi, e) = irreducible_power(&f5, &fp_poly(&f5, &[0, 0, 1])).unwrap();
        assert_eq!((phi, e), (fp_poly(&f5, &[0, 1]), 2));
    }

    #[test]
    fn f4_multiplication_table() {
        let f4 = ResidueField::new(2, &[1, 1, 1]).unwrap();
        let y = f4.from_coeffs(&[0, 1]);
        let y2 = f4.mul(&y, &y);
        assert_eq!(y2, f4.from_coeffs(&[1, 1]));
        assert_eq!(f4.mul(&y2, &y), f4.one());
        assert_eq!(f4.mul(&f4.inv(&y).unwrap(), &y), f4.one());
        assert_eq!(f4.elements().count(), 4);
    }

    #[test]
    fn reducible_residue_modulus_rejected() {
        assert!(ResidueField::new(2, &[1, 0, 1]).is_err());
        assert!(ResidueField::new(4, &[1, 1]).is_err());
    }
}
