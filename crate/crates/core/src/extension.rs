//! The degree-`m` Galois extension `S = R[θ]/(f)` of a local ring `R`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use crate::arith::{Mat, RingOps};
use crate::error::{Error, Result};
use crate::field::{is_irreducible, FqElem};
use crate::modlin::Submodule;
use crate::ring::{format_poly, LocalRing, RingElem};

/// Element of `S`: coefficients of `1, θ, ..., θ^(m-1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem(pub(crate) Vec<RingElem>);

impl ExtElem {
    pub fn coords(&self) -> &[RingElem] {
        &self.0
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    base: Arc<LocalRing>,
    m: usize,
    /// Integer coefficients of the monic modulus, reduced mod the characteristic.
    f_int: Vec<u64>,
    /// Non-leading coefficients of `f` in `R`.
    f: Vec<RingElem>,
    unit_order: BigUint,
}

impl Extension {
    /// `S = R[θ]/(f)` for a monic integer polynomial `f` whose residue is
    /// irreducible over the residue field of `R`.
    pub fn new(base: Arc<LocalRing>, f: &[i64]) -> Result<Self> {
        let modulus = base.characteristic() as i64;
        let mut f_int: Vec<u64> = f.iter().map(|&c| c.rem_euclid(modulus) as u64).collect();
        while f_int.last() == Some(&0) {
            f_int.pop();
        }
        if f_int.len() < 2 || *f_int.last().unwrap() != 1 {
            return Err(Error::MalformedModulus(format!(
                "{} is not monic of positive degree",
                format_poly(&f_int, "θ")
            )));
        }
        let fq = base.residue_field();
        let psi: Vec<FqElem> = f_int.iter().map(|&c| fq.from_int(c as i64)).collect();
        if !is_irreducible(fq, &psi) {
            return Err(Error::MalformedModulus(format!(
                "{} is reducible over F_{}",
                format_poly(&f_int, "θ"),
                base.q()
            )));
        }
        Ok(Self::assemble(base, f_int))
    }

    fn assemble(base: Arc<LocalRing>, f_int: Vec<u64>) -> Self {
        let m = f_int.len() - 1;
        let f = f_int[..m].iter().map(|&c| base.from_int(c as i64)).collect();
        // |S*| = |S| - |𝔪S| = q^(υm) - q^((υ-1)m)
        let card = base.cardinality().pow(m as u32);
        let unit_order = &card - &card / BigUint::from(base.q()).pow(m as u32);
        Extension { base, m, f_int, f, unit_order }
    }

    /// The extension with the default modulus: the lexicographically first
    /// monic degree-`m` polynomial with coefficients in `{0..p-1}` that is
    /// irreducible over the residue field.
    pub fn with_default_modulus(base: Arc<LocalRing>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("extension degree must be >= 1".into()));
        }
        let f = default_modulus(&base, m)?;
        Ok(Self::assemble(base, f))
    }

    pub fn base(&self) -> &LocalRing {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<LocalRing> {
        &self.base
    }

    /// Extension degree.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Coefficients of the monic modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.f_int
    }

    /// Parseable extension clause, e.g. `ext m=5 f=x^5+x^2+1`.
    pub fn spec(&self) -> String {
        format!("ext m={} f={}", self.m, format_poly(&self.f_int, "x"))
    }

    pub fn theta(&self) -> ExtElem {
        let mut e = self.zero();
        if self.m > 1 {
            e.0[1] = self.base.one();
        } else {
            e.0[0] = self.base.neg(&self.f[0]);
        }
        e
    }

    /// The image of `r` under `R -> S`.
    pub fn embed(&self, r: &RingElem) -> ExtElem {
        let mut e = self.zero();
        e.0[0] = *r;
        e
    }

    /// Coordinate vector in `R^m`.
    pub fn vec_rep(&self, a: &ExtElem) -> Vec<RingElem> {
        a.0.clone()
    }

    /// Inverse of [`vec_rep`](Self::vec_rep).
    pub fn from_vec(&self, v: &[RingElem]) -> Result<ExtElem> {
        if v.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                self.m,
                v.len()
            )));
        }
        Ok(ExtElem(v.to_vec()))
    }

    /// Element from integer coefficients of `1, θ, θ^2, ...`.
    pub fn from_ints(&self, c: &[i64]) -> ExtElem {
        let mut e = self.zero();
        for (x, &v) in e.0.iter_mut().zip(c) {
            *x = self.base.from_int(v);
        }
        e
    }

    /// `a * r` for a scalar `r` of the base ring.
    pub fn scale(&self, a: &ExtElem, r: &RingElem) -> ExtElem {
        ExtElem(a.0.iter().map(|x| self.base.mul(x, r)).collect())
    }

    pub fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> ExtElem {
        ExtElem((0..self.m).map(|_| self.base.random(rng)).collect())
    }

    /// The submodule of `R^m` spanned by the coordinates of `u`.
    pub fn support(&self, u: &[ExtElem]) -> Submodule {
        let rows: Vec<Vec<RingElem>> = u.iter().map(|x| x.0.clone()).collect();
        Submodule::from_mat(self.base.clone(), Mat::from_rows(rows, self.m))
    }

    /// Generators of a submodule of `R^m` read back as elements of `S`.
    pub fn elements_of(&self, module: &Submodule) -> Result<Vec<ExtElem>> {
        self.check_module(module)?;
        Ok(module.gens().row_vecs().into_iter().map(ExtElem).collect())
    }

    pub(crate) fn check_module(&self, module: &Submodule) -> Result<()> {
        let same_ring = Arc::ptr_eq(module.ring(), &self.base) || **module.ring() == *self.base;
        if module.ambient_dim() != self.m || !same_ring {
            return Err(Error::ExtensionMismatch);
        }
        Ok(())
    }

    /// Reduction `Ψ: S -> F_{q^m}` as coefficient vector over `F_q`.
    pub fn residue(&self, a: &ExtElem) -> Vec<FqElem> {
        a.0.iter().map(|x| self.base.residue(x)).collect()
    }

    fn mul_fast(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        // base ring is Z_{p^s}: schoolbook on integers, then fold by f
        let m = self.m;
        let md = self.base.characteristic() as u64;
        let mut buf = [0u64; 2 * MAX_FAST_DEGREE];
        let buf = &mut buf[..2 * m - 1];
        // products stay below 2^40 for small moduli, so several rows fit before reducing
        let batch = if md <= 1 << 20 { 8 } else { 1 };
        for (i, x) in a.0.iter().enumerate() {
            let x = x.0[0] as u64;
            if x == 0 {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                buf[i + j] += x * y.0[0] as u64;
            }
            if (i + 1) % batch == 0 {
                for v in buf.iter_mut() {
                    *v %= md;
                }
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = buf[k] % md;
            if c == 0 {
                continue;
            }
            let neg = md - c;
            for j in 0..m {
                let fj = self.f_int[j];
                if fj != 0 {
                    buf[k - m + j] = (buf[k - m + j] + neg * fj) % md;
                }
            }
        }
        ExtElem(
            buf[..m]
                .iter()
                .map(|&v| self.base.from_int((v % md) as i64))
                .collect(),
        )
    }

    fn mul_generic(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let r = &*self.base;
        let m = self.m;
        let mut buf = vec![r.zero(); 2 * m - 1];
        for (i, x) in a.0.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                r.mul_acc(&mut buf[i + j], x, y);
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = buf[k];
            if r.is_zero(&c) {
                continue;
            }
            for j in 0..m {
                let t = r.mul(&c, &self.f[j]);
                buf[k - m + j] = r.sub(&buf[k - m + j], &t);
            }
        }
        buf.truncate(m);
        ExtElem(buf)
    }
}

/// Largest degree handled by the stack-buffer multiplication.
const MAX_FAST_DEGREE: usize = 128;

fn default_modulus(base: &LocalRing, m: usize) -> Result<Vec<u64>> {
    let p = base.p() as u64;
    let fq = base.residue_field();
    let limit = (p as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    let mut counter: u128 = 0;
    while counter < limit {
        let mut f = Vec::with_capacity(m + 1);
        let mut c = counter;
        for _ in 0..m {
            f.push((c % p as u128) as u64);
            c /= p as u128;
        }
        f.push(1);
        counter += 1;
        if m > 1 && f[0] == 0 {
            continue;
        }
        let psi: Vec<FqElem> = f.iter().map(|&c| fq.from_int(c as i64)).collect();
        if is_irreducible(fq, &psi) {
            return Ok(f);
        }
    }
    Err(Error::UnsupportedRing(format!(
        "no degree-{m} polynomial over F_{p} is irreducible over F_{}; pass f explicitly",
        base.q()
    )))
}

impl RingOps for Extension {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtElem(vec![self.base.zero(); self.m])
    }

    fn one(&self) -> ExtElem {
        self.embed(&self.base.one())
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.add(x, y)).collect())
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.sub(x, y)).collect())
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|x| self.base.neg(x)).collect())
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        if self.base.dim() == 1 && self.m <= MAX_FAST_DEGREE {
            self.mul_fast(a, b)
        } else {
            self.mul_generic(a, b)
        }
    }

    fn from_int(&self, n: i64) -> ExtElem {
        self.embed(&self.base.from_int(n))
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        a.0.iter().all(|x| self.base.is_zero(x))
    }

    /// Units of `S` are the elements off `𝔪S`.
    fn is_unit(&self, a: &ExtElem) -> bool {
        a.0.iter().any(|x| self.base.is_unit(x))
    }

    fn unit_group_order(&self) -> BigUint {
        self.unit_order.clone()
    }
}

impl Extension {
    pub fn try_inv(&self, a: &ExtElem) -> Result<ExtElem> {
        self.inv(a).ok_or(Error::NotAUnit)
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.base, self.spec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s5() -> Extension {
        let z4 = Arc::new(LocalRing::zmod(2, 2).unwrap());
        Extension::new(z4, &[1, 0, 1, 0, 0, 1]).unwrap()
    }

    #[test]
    fn theta_to_the_fifth() {
        let s = s5();
        let t4 = s.from_ints(&[0, 0, 0, 0, 1]);
        assert_eq!(s.mul(&t4, &s.theta()), s.from_ints(&[3, 0, 3]));
        let inv = s.try_inv(&s.theta()).unwrap();
        assert_eq!(s.mul(&inv, &s.theta()), s.one());
        assert_eq!(s.try_inv(&s.from_int(2)), Err(Error::NotAUnit));
    }

    #[test]
    fn default_modulus_matches_first_irreducible() {
        let z4 = Arc::new(LocalRing::zmod(2, 2).unwrap());
        let s = Extension::with_default_modulus(z4.clone(), 5).unwrap();
        assert_eq!(s.modulus(), &[1, 0, 1, 0, 0, 1]);
        let s2 = Extension::with_default_modulus(z4, 2).unwrap();
        assert_eq!(s2.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn generic_and_fast_products_agree() {
        use rand::SeedableRng;
        let s = s5();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = s.random(&mut rng);
            let b = s.random(&mut rng);
            assert_eq!(s.mul_fast(&a, &b), s.mul_generic(&a, &b));
        }
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        let z4 = Arc::new(LocalRing::zmod(2, 2).unwrap());
        assert!(matches!(Extension::new(z4, &[1, 0, 1]), Err(Error::MalformedModulus(_))));
    }
}
