//! Finite rings as products of local rings, with per-factor LRPC decoding.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;

use crate::arith::{Mat, RingOps};
use crate::error::{Error, Result};
use crate::extension::{ExtElem, Extension};
use crate::lrpc::{generate_code, sample_error, CodeParams, DecodingFailure, FailureLine, LrpcCode};
use crate::modlin::Submodule;
use crate::ring::{LocalRing, RingElem};
use crate::spec::{ExtClause, RingSpec};

/// Element of `R_1 × ... × R_ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductElem(pub Vec<RingElem>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductRing {
    factors: Vec<Arc<LocalRing>>,
    /// `N` when the ring is `Z_N` split by the CRT.
    crt_modulus: Option<u64>,
}

impl ProductRing {
    pub fn new(factors: Vec<Arc<LocalRing>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::UnsupportedRing("a product needs at least one factor".into()));
        }
        Ok(ProductRing { factors, crt_modulus: None })
    }

    /// `Z_N` as the product of its prime-power parts.
    pub fn zmod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedRing(format!("Z{n}")));
        }
        let factors = crate::field::factorize(n)
            .into_iter()
            .map(|(p, e)| LocalRing::zmod(p, e).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductRing { factors, crt_modulus: Some(n) })
    }

    pub fn from_spec(spec: &RingSpec) -> Result<Self> {
        let mut r = Self::new(spec.factors.iter().cloned().map(Arc::new).collect())?;
        r.crt_modulus = spec.crt_modulus;
        Ok(r)
    }

    pub fn factors(&self) -> &[Arc<LocalRing>] {
        &self.factors
    }

    pub fn rho(&self) -> usize {
        self.factors.len()
    }

    pub fn crt_modulus(&self) -> Option<u64> {
        self.crt_modulus
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.rho() {
            return Err(Error::IndexOutOfRange { index: j, len: self.rho() });
        }
        Ok(())
    }

    /// `Φ_j`.
    pub fn project(&self, x: &ProductElem, j: usize) -> Result<RingElem> {
        self.check_index(j)?;
        Ok(x.0[j])
    }

    pub fn project_mat(&self, a: &Mat<ProductElem>, j: usize) -> Result<Mat<RingElem>> {
        self.check_index(j)?;
        Ok(a.map(|x| x.0[j]))
    }

    pub fn combine(&self, parts: &[RingElem]) -> Result<ProductElem> {
        if parts.len() != self.rho() {
            return Err(Error::DimensionMismatch(format!("{} parts for {} factors", parts.len(), self.rho())));
        }
        Ok(ProductElem(parts.to_vec()))
    }

    /// Reads an integer residue of `Z_N` (any ring: the image of `Z`).
    pub fn from_integer(&self, x: i64) -> ProductElem {
        self.from_int(x)
    }

    /// The integer in `[0, N)` with the given CRT components.
    pub fn to_integer(&self, x: &ProductElem) -> Result<u64> {
        let n = self
            .crt_modulus
            .ok_or_else(|| Error::UnsupportedRing("integer view needs a Z_N ring".into()))?;
        // x ≡ a_j mod n_j, recombined by Garner-free CRT in u128
        let mut acc: u128 = 0;
        for (r, a) in self.factors.iter().zip(&x.0) {
            let nj = r.characteristic() as u128;
            let mj = n as u128 / nj;
            let inv = mod_inverse((mj % nj) as i128, nj as i128) as u128;
            acc = (acc + a.coords()[0] as u128 * mj % n as u128 * inv) % n as u128;
        }
        Ok(acc as u64)
    }

    /// Submodule of `Φ_j(N)` for generators over the product.
    pub fn project_module(&self, gens: &Mat<ProductElem>, j: usize) -> Result<Submodule> {
        Ok(Submodule::from_mat(self.factors[j].clone(), self.project_mat(gens, j)?))
    }

    /// `(rank, free rank, is free)` of the module generated by the rows of `gens`.
    pub fn localized_rank(&self, gens: &Mat<ProductElem>) -> Result<(usize, usize, bool)> {
        let mut rank = 0;
        let mut frk = usize::MAX;
        let mut free = true;
        let mut first_rank = None;
        for j in 0..self.rho() {
            let m = self.project_module(gens, j)?;
            let (r, f) = (m.rank(), m.free_module_test());
            rank = rank.max(r);
            frk = frk.min(f.0);
            free &= f.1 && *first_rank.get_or_insert(r) == r;
        }
        Ok((rank, frk, free))
    }

    pub fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> ProductElem {
        ProductElem(self.factors.iter().map(|r| r.random(rng)).collect())
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1, mut t0, mut t1) = (m, a.rem_euclid(m), 0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(m)
}

impl RingOps for ProductRing {
    type Elem = ProductElem;

    fn zero(&self) -> ProductElem {
        ProductElem(self.factors.iter().map(|r| r.zero()).collect())
    }
    fn one(&self) -> ProductElem {
        ProductElem(self.factors.iter().map(|r| r.one()).collect())
    }
    fn add(&self, a: &ProductElem, b: &ProductElem) -> ProductElem {
        ProductElem(self.factors.iter().enumerate().map(|(j, r)| r.add(&a.0[j], &b.0[j])).collect())
    }
    fn sub(&self, a: &ProductElem, b: &ProductElem) -> ProductElem {
        ProductElem(self.factors.iter().enumerate().map(|(j, r)| r.sub(&a.0[j], &b.0[j])).collect())
    }
    fn neg(&self, a: &ProductElem) -> ProductElem {
        ProductElem(self.factors.iter().enumerate().map(|(j, r)| r.neg(&a.0[j])).collect())
    }
    fn mul(&self, a: &ProductElem, b: &ProductElem) -> ProductElem {
        ProductElem(self.factors.iter().enumerate().map(|(j, r)| r.mul(&a.0[j], &b.0[j])).collect())
    }
    fn from_int(&self, n: i64) -> ProductElem {
        ProductElem(self.factors.iter().map(|r| r.from_int(n)).collect())
    }
    fn is_unit(&self, a: &ProductElem) -> bool {
        self.factors.iter().enumerate().all(|(j, r)| r.is_unit(&a.0[j]))
    }
    fn unit_group_order(&self) -> BigUint {
        self.factors.iter().map(|r| r.unit_group_order()).product()
    }
    fn inv(&self, a: &ProductElem) -> Option<ProductElem> {
        let parts = self.factors.iter().enumerate().map(|(j, r)| r.inv(&a.0[j])).collect::<Option<Vec<_>>>()?;
        Some(ProductElem(parts))
    }
}

/// Element of `S_1 × ... × S_ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductExtElem(pub Vec<ExtElem>);

/// Extensions of a common degree `m` over every factor.
#[derive(Clone, Debug)]
pub struct ProductExtension {
    ring: ProductRing,
    factors: Vec<Arc<Extension>>,
}

impl ProductExtension {
    pub fn new(ring: ProductRing, factors: Vec<Arc<Extension>>) -> Result<Self> {
        if factors.len() != ring.rho() {
            return Err(Error::DimensionMismatch(format!(
                "{} extensions for {} factors",
                factors.len(),
                ring.rho()
            )));
        }
        if factors.windows(2).any(|w| w[0].m() != w[1].m()) {
            return Err(Error::InvalidParams("all factors need the same extension degree".into()));
        }
        for (e, r) in factors.iter().zip(ring.factors()) {
            if **e.base_arc() != **r {
                return Err(Error::ExtensionMismatch);
            }
        }
        Ok(ProductExtension { ring, factors })
    }

    /// Builds every factor's extension from one clause; an explicit `f` is
    /// reduced into each factor.
    pub fn from_clause(ring: ProductRing, clause: &ExtClause) -> Result<Self> {
        let exts = ring
            .factors()
            .iter()
            .map(|r| clause.build(r.clone()).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, exts)
    }

    pub fn ring(&self) -> &ProductRing {
        &self.ring
    }

    pub fn factors(&self) -> &[Arc<Extension>] {
        &self.factors
    }

    pub fn m(&self) -> usize {
        self.factors[0].m()
    }

    pub fn project(&self, x: &ProductExtElem, j: usize) -> Result<ExtElem> {
        self.ring.check_index(j)?;
        Ok(x.0[j].clone())
    }

    pub fn project_vec(&self, v: &[ProductExtElem], j: usize) -> Result<Vec<ExtElem>> {
        self.ring.check_index(j)?;
        Ok(v.iter().map(|x| x.0[j].clone()).collect())
    }

    pub fn combine_vecs(&self, parts: &[Vec<ExtElem>]) -> Vec<ProductExtElem> {
        let n = parts.first().map_or(0, Vec::len);
        (0..n).map(|i| ProductExtElem(parts.iter().map(|p| p[i].clone()).collect())).collect()
    }

    pub fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> ProductExtElem {
        ProductExtElem(self.factors.iter().map(|s| s.random(rng)).collect())
    }
}

impl RingOps for ProductExtension {
    type Elem = ProductExtElem;

    fn zero(&self) -> ProductExtElem {
        ProductExtElem(self.factors.iter().map(|s| s.zero()).collect())
    }
    fn one(&self) -> ProductExtElem {
        ProductExtElem(self.factors.iter().map(|s| s.one()).collect())
    }
    fn add(&self, a: &ProductExtElem, b: &ProductExtElem) -> ProductExtElem {
        ProductExtElem(self.factors.iter().enumerate().map(|(j, s)| s.add(&a.0[j], &b.0[j])).collect())
    }
    fn sub(&self, a: &ProductExtElem, b: &ProductExtElem) -> ProductExtElem {
        ProductExtElem(self.factors.iter().enumerate().map(|(j, s)| s.sub(&a.0[j], &b.0[j])).collect())
    }
    fn neg(&self, a: &ProductExtElem) -> ProductExtElem {
        ProductExtElem(self.factors.iter().enumerate().map(|(j, s)| s.neg(&a.0[j])).collect())
    }
    fn mul(&self, a: &ProductExtElem, b: &ProductExtElem) -> ProductExtElem {
        ProductExtElem(self.factors.iter().enumerate().map(|(j, s)| s.mul(&a.0[j], &b.0[j])).collect())
    }
    fn from_int(&self, n: i64) -> ProductExtElem {
        ProductExtElem(self.factors.iter().map(|s| s.from_int(n)).collect())
    }
    fn is_unit(&self, a: &ProductExtElem) -> bool {
        self.factors.iter().enumerate().all(|(j, s)| s.is_unit(&a.0[j]))
    }
    fn unit_group_order(&self) -> BigUint {
        self.factors.iter().map(|s| s.unit_group_order()).product()
    }
    fn inv(&self, a: &ProductExtElem) -> Option<ProductExtElem> {
        let parts =
            self.factors.iter().enumerate().map(|(j, s)| s.inv(&a.0[j])).collect::<Option<Vec<_>>>()?;
        Some(ProductExtElem(parts))
    }
}

/// Failure of the product decoder: every failing factor with its line.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("decoding failed in factors {failures:?}")]
pub struct ProductDecodingFailure {
    pub failures: Vec<(usize, FailureLine)>,
}

impl ProductDecodingFailure {
    /// The line reported by the first failing factor.
    pub fn first_line(&self) -> FailureLine {
        self.failures[0].1
    }
}

/// An LRPC code over a product extension: one local code per factor.
#[derive(Clone, Debug)]
pub struct ProductLrpcCode {
    ext: ProductExtension,
    codes: Vec<LrpcCode>,
}

impl ProductLrpcCode {
    pub fn new(ext: ProductExtension, codes: Vec<LrpcCode>) -> Result<Self> {
        if codes.len() != ext.factors.len() || codes.windows(2).any(|w| w[0].params() != w[1].params()) {
            return Err(Error::InvalidParams("factor codes must share (n, k, lambda)".into()));
        }
        Ok(ProductLrpcCode { ext, codes })
    }

    pub fn generate<G: Rng + ?Sized>(ext: ProductExtension, params: CodeParams, rng: &mut G) -> Result<Self> {
        let codes = ext
            .factors
            .iter()
            .map(|s| generate_code(s.clone(), params, rng))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ext, codes)
    }

    pub fn ext(&self) -> &ProductExtension {
        &self.ext
    }

    pub fn codes(&self) -> &[LrpcCode] {
        &self.codes
    }

    pub fn params(&self) -> CodeParams {
        self.codes[0].params()
    }

    /// The combined parity-check matrix.
    pub fn h(&self) -> Mat<ProductExtElem> {
        let h0 = self.codes[0].h();
        Mat::from_fn(h0.rows(), h0.cols(), |i, j| {
            ProductExtElem(self.codes.iter().map(|c| c.h()[(i, j)].clone()).collect())
        })
    }

    pub fn encode(&self, msg: &[ProductExtElem]) -> Result<Vec<ProductExtElem>> {
        let parts = (0..self.codes.len())
            .map(|j| self.codes[j].encode(&self.ext.project_vec(msg, j)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.ext.combine_vecs(&parts))
    }

    pub fn random_codeword<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<ProductExtElem> {
        let parts: Vec<Vec<ExtElem>> = self.codes.iter().map(|c| c.random_codeword(rng)).collect();
        self.ext.combine_vecs(&parts)
    }

    pub fn syndrome(&self, r: &[ProductExtElem]) -> Vec<ProductExtElem> {
        let parts: Vec<Vec<ExtElem>> = self
            .codes
            .iter()
            .enumerate()
            .map(|(j, c)| c.syndrome(&self.ext.project_vec(r, j).expect("index in range")))
            .collect();
        self.ext.combine_vecs(&parts)
    }

    /// Runs the local decoder on every factor and recombines.
    pub fn decode(
        &self,
        r: &[ProductExtElem],
    ) -> std::result::Result<Vec<ProductExtElem>, ProductDecodingFailure> {
        let results: Vec<std::result::Result<Vec<ExtElem>, DecodingFailure>> = self
            .codes
            .par_iter()
            .enumerate()
            .map(|(j, c)| c.decode(&self.ext.project_vec(r, j).expect("index in range")))
            .collect();
        let failures: Vec<(usize, FailureLine)> = results
            .iter()
            .enumerate()
            .filter_map(|(j, res)| res.as_ref().err().map(|f| (j, f.line)))
            .collect();
        if !failures.is_empty() {
            return Err(ProductDecodingFailure { failures });
        }
        let parts: Vec<Vec<ExtElem>> = results.into_iter().map(|r| r.unwrap()).collect();
        Ok(self.ext.combine_vecs(&parts))
    }

    /// Errors with a free support of rank `ts[j]` in factor `j`.
    pub fn sample_error<G: Rng + ?Sized>(&self, ts: &[usize], rng: &mut G) -> Result<Vec<ProductExtElem>> {
        if ts.len() != self.codes.len() {
            return Err(Error::DimensionMismatch(format!("{} ranks for {} factors", ts.len(), self.codes.len())));
        }
        let n = self.params().n;
        let parts = self
            .ext
            .factors
            .iter()
            .zip(ts)
            .map(|(s, &t)| sample_error(s, n, t, rng).map(|(e, _)| e))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.ext.combine_vecs(&parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z6_projection_and_crt() {
        let r = ProductRing::zmod(6).unwrap();
        assert_eq!(r.rho(), 2);
        let five = r.from_integer(5);
        assert_eq!(r.project(&five, 0).unwrap(), r.factors()[0].from_int(1));
        assert_eq!(r.project(&five, 1).unwrap(), r.factors()[1].from_int(2));
        assert_eq!(r.project(&five, 2), Err(Error::IndexOutOfRange { index: 2, len: 2 }));
        for x in 0..12 {
            assert_eq!(r.to_integer(&r.from_integer(x)).unwrap(), (x % 6) as u64);
        }
    }

    #[test]
    fn localized_rank_of_two_in_z6() {
        let r = ProductRing::zmod(6).unwrap();
        let full = Mat::from_rows(vec![vec![r.one()]], 1);
        assert_eq!(r.localized_rank(&full).unwrap(), (1, 1, true));
        let two = Mat::from_rows(vec![vec![r.from_integer(2)]], 1);
        assert_eq!(r.localized_rank(&two).unwrap(), (1, 0, false));
    }

    #[test]
    fn z12_factors() {
        let r = ProductRing::zmod(12).unwrap();
        let chars: Vec<u32> = r.factors().iter().map(|f| f.characteristic()).collect();
        assert_eq!(chars, vec![4, 3]);
    }
}
