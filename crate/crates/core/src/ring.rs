//! Finite commutative local rings as free algebras over a Galois subring.
//!
//! A ring `R` is stored by its structure constants over `Z_{p^s}` in the
//! basis `{ w^a z_i }`, where `w` generates the maximal Galois subring
//! `R0 = Z_{p^s}[w]` (degree `mu`) and `z_1 = 1, z_2, ..., z_gamma` is an
//! `R0`-basis of `R` with `z_i` in the maximal ideal for `i >= 2`. Element
//! coordinates are ordered block by block: coordinate `i*mu + a` is the
//! coefficient of `w^a z_i`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::arith::{invert, vec_mat, Mat, RingOps};
use crate::error::{Error, Result};
pub use crate::field::MAX_RANK;
use crate::field::{irreducible_power, is_prime, FqElem, ResidueField};

/// Rings up to this many elements get their locality checked exhaustively.
pub const DEFAULT_LOCALITY_CAP: u64 = 1 << 16;

/// Element of a [`LocalRing`]: coordinates over `Z_{p^s}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RingElem(pub(crate) [u32; MAX_RANK]);

impl RingElem {
    pub fn coords(&self) -> &[u32; MAX_RANK] {
        &self.0
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).map_or(1, |i| i + 1);
        if last == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", &self.0[..last])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `GR(p^s, mu) = Z_{p^s}[y]/(h)`.
    Galois { h: Vec<u64> },
    /// `Z_{p^s}[x]/(g)`.
    Quotient { g: Vec<u64> },
}

/// A finite commutative local ring with its structure data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRing {
    p: u32,
    s: u32,
    modulus: u32,
    mu: usize,
    gamma: usize,
    dim: usize,
    /// Monic lift of the residue modulus generating `R0`.
    h: Vec<u32>,
    /// `table[(u*dim + v)*dim + w]`: coordinate `w` of `e_u * e_v`.
    table: Vec<u32>,
    residue: ResidueField,
    r0: Option<Arc<LocalRing>>,
    construction: Construction,
    /// Image of the polynomial variable of the construction.
    var: RingElem,
    /// Row `u` = coefficients (in the variable) of basis element `e_u`.
    basis_polys: Vec<Vec<u32>>,
}

fn checked_modulus(p: u64, s: u32) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if s == 0 {
        return Err(Error::UnsupportedRing("characteristic exponent must be >= 1".into()));
    }
    let m = (p as u128).checked_pow(s).filter(|&m| m < (1u128 << 31)).ok_or_else(|| {
        Error::UnsupportedRing(format!("characteristic {p}^{s} exceeds 2^31"))
    })?;
    Ok(m as u32)
}

// Polynomial helpers over Z_M with a monic modulus `g`.
fn zm_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn zm_mulmod(a: &[u64], b: &[u64], g: &[u64], m: u64) -> Vec<u64> {
    let mut out = vec![0u64; (a.len() + b.len()).max(1)];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % m;
        }
    }
    zm_reduce(out, g, m)
}

fn zm_reduce(mut a: Vec<u64>, g: &[u64], m: u64) -> Vec<u64> {
    let d = g.len() - 1;
    while a.len() > d {
        let c = a.pop().unwrap() % m;
        let base = a.len() - d;
        for j in 0..d {
            a[base + j] = (a[base + j] + (m - c) * g[j]) % m;
        }
    }
    zm_trim(&mut a);
    a
}

fn zm_sub(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + m - b.get(i).copied().unwrap_or(0) % m) % m)
        .collect();
    zm_trim(&mut out);
    out
}

fn zm_pow(a: &[u64], e: &BigUint, g: &[u64], m: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    for i in (0..e.bits()).rev() {
        acc = zm_mulmod(&acc, &acc, g, m);
        if e.bit(i) {
            acc = zm_mulmod(&acc, a, g, m);
        }
    }
    acc
}

fn zm_eval(h: &[u64], w: &[u64], g: &[u64], m: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = Vec::new();
    for &c in h.iter().rev() {
        acc = zm_mulmod(&acc, w, g, m);
        if acc.is_empty() {
            acc.push(0);
        }
        acc[0] = (acc[0] + c) % m;
        zm_trim(&mut acc);
    }
    acc
}

fn normalize_poly(c: &[u64], m: u64) -> Vec<u64> {
    let mut v: Vec<u64> = c.iter().map(|&x| x % m).collect();
    zm_trim(&mut v);
    v
}

/// Renders `c` (little-endian) like `x^5+x^2+1`.
pub fn format_poly(c: &[u64], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &x) in c.iter().enumerate().rev() {
        if x == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (x, i) {
            (_, 0) => x.to_string(),
            (1, _) => mono,
            _ => format!("{x}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

impl LocalRing {
    /// The integers modulo `p^s`.
    pub fn zmod(p: u64, s: u32) -> Result<Self> {
        Self::galois(p, s, &[0, 1])
    }

    /// `Z_N` for a prime power `N`.
    pub fn zmod_prime_power(n: u64) -> Result<Self> {
        let (p, s) = prime_power(n)?;
        Self::zmod(p, s)
    }

    /// The Galois ring `Z_{p^s}[y]/(h)`; `h` monic with irreducible reduction mod p.
    pub fn galois(p: u64, s: u32, h: &[u64]) -> Result<Self> {
        let m = checked_modulus(p, s)? as u64;
        let h = normalize_poly(h, m);
        if h.len() < 2 || *h.last().unwrap() != 1 {
            return Err(Error::MalformedModulus(format!(
                "{} is not monic of positive degree",
                format_poly(&h, "y")
            )));
        }
        let mu = h.len() - 1;
        if mu > MAX_RANK {
            return Err(Error::UnsupportedRing(format!("degree {mu} exceeds {MAX_RANK}")));
        }
        let residue = ResidueField::new(p as u32, &h)
            .map_err(|_| Error::MalformedModulus(format!("{} is reducible mod {p}", format_poly(&h, "y"))))?;
        let basis_polys: Vec<Vec<u64>> = (0..mu)
            .map(|a| {
                let mut v = vec![0; a + 1];
                v[a] = 1;
                v
            })
            .collect();
        let coords = |poly: &[u64]| -> Vec<u64> {
            let mut v = zm_reduce(poly.to_vec(), &h, m);
            v.resize(mu, 0);
            v
        };
        let var = coords(&[0, 1]);
        let ring = Self::assemble(
            p as u32,
            s,
            mu,
            1,
            h.clone(),
            residue,
            None,
            Construction::Galois { h: h.clone() },
            &basis_polys,
            |a, b| coords(&zm_mulmod(a, b, &h, m)),
            &var,
        );
        ring.check_structure()?;
        ring.check_locality(DEFAULT_LOCALITY_CAP)?;
        Ok(ring)
    }

    /// `GR(p^s, mu)` with the lexicographically first monic `h` (coefficients
    /// in `0..p`, constant term first) irreducible mod `p`.
    pub fn gr(p: u64, s: u32, mu: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if mu == 0 || mu > MAX_RANK {
            return Err(Error::UnsupportedRing(format!("residue degree {mu} not in 1..={MAX_RANK}")));
        }
        let fp = ResidueField::prime(p as u32)?;
        let total = p.pow(mu as u32);
        for counter in 0..total {
            let mut h: Vec<u64> = Vec::with_capacity(mu + 1);
            let mut c = counter;
            for _ in 0..mu {
                h.push(c % p);
                c /= p;
            }
            h.push(1);
            if mu > 1 && h[0] == 0 {
                continue;
            }
            let hb: Vec<FqElem> = h.iter().map(|&c| fp.from_int(c as i64)).collect();
            if crate::field::is_irreducible(&fp, &hb) {
                return Self::galois(p, s, &h);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// `Z_{p^s}[x]/(g)`, local exactly when `g mod p` is a power of one irreducible.
    pub fn quotient(p: u64, s: u32, g: &[u64]) -> Result<Self> {
        Self::quotient_with_cap(p, s, g, DEFAULT_LOCALITY_CAP)
    }

    pub fn quotient_with_cap(p: u64, s: u32, g: &[u64], cap: u64) -> Result<Self> {
        let m = checked_modulus(p, s)? as u64;
        let g = normalize_poly(g, m);
        if g.len() < 2 || *g.last().unwrap() != 1 {
            return Err(Error::MalformedModulus(format!(
                "{} is not monic of positive degree",
                format_poly(&g, "x")
            )));
        }
        let d = g.len() - 1;
        if d > MAX_RANK {
            return Err(Error::UnsupportedRing(format!("degree {d} exceeds {MAX_RANK}")));
        }
        let fp = ResidueField::prime(p as u32)?;
        let g_bar: Vec<FqElem> = g.iter().map(|&c| fp.from_int(c as i64)).collect();
        let (phi, e) = irreducible_power(&fp, &g_bar).ok_or_else(|| {
            Error::NotLocal(format!(
                "{} mod {p} has more than one irreducible factor",
                format_poly(&g, "x")
            ))
        })?;
        let mu = phi.len() - 1;
        let h: Vec<u64> = phi.iter().map(|c| c.0[0] as u64).collect();
        let residue = ResidueField::new(p as u32, &h)?;

        // Hensel-lift the root x mod m of h to a root w of h in R.
        let unit_order = {
            let card = BigUint::from(m).pow(d as u32);
            let maximal = &card / BigUint::from(p).pow(mu as u32);
            card - maximal
        };
        let h_deriv: Vec<u64> = h.iter().enumerate().skip(1).map(|(i, &c)| c * i as u64 % m).collect();
        let mut w = vec![0u64, 1];
        let mut lifted = false;
        for _ in 0..64 {
            let hv = zm_eval(&h, &w, &g, m);
            if hv.is_empty() {
                lifted = true;
                break;
            }
            let hd = zm_eval(&h_deriv, &w, &g, m);
            let inv = zm_pow(&hd, &(&unit_order - 1u32), &g, m);
            w = zm_sub(&w, &zm_mulmod(&hv, &inv, &g, m), m);
        }
        if !lifted {
            return Err(Error::NotLocal("Hensel lifting of the residue generator failed".into()));
        }

        // e_(j,a) = w^a (x - w)^j
        let x_minus_w = zm_sub(&[0, 1], &w, m);
        let mut basis_polys = Vec::with_capacity(d);
        let mut pi_pow = vec![1u64];
        for _j in 0..e {
            let mut w_pow = vec![1u64];
            for _a in 0..mu {
                basis_polys.push(zm_mulmod(&w_pow, &pi_pow, &g, m));
                w_pow = zm_mulmod(&w_pow, &w, &g, m);
            }
            pi_pow = zm_mulmod(&pi_pow, &x_minus_w, &g, m);
        }
        let zm = LocalRing::zmod(p, s)?;
        let bmat = Mat::from_fn(d, d, |u, i| {
            zm.from_int(basis_polys[u].get(i).copied().unwrap_or(0) as i64)
        });
        let binv = invert(&zm, &bmat)
            .ok_or_else(|| Error::NotLocal("basis change is singular".into()))?;
        let coords = |poly: &[u64]| -> Vec<u64> {
            let mut v: Vec<RingElem> = (0..d).map(|i| zm.from_int(poly.get(i).copied().unwrap_or(0) as i64)).collect();
            v = vec_mat(&zm, &v, &binv);
            v.iter().map(|c| c.0[0] as u64).collect()
        };
        let var = coords(&[0, 1]);
        let r0 = if e > 1 {
            let mut gr = LocalRing::galois(p, s, &h)?;
            gr.r0 = None;
            Some(Arc::new(gr))
        } else {
            None
        };
        let ring = Self::assemble(
            p as u32,
            s,
            mu,
            e,
            h,
            residue,
            r0,
            Construction::Quotient { g: g.clone() },
            &basis_polys,
            |a, b| coords(&zm_mulmod(a, b, &g, m)),
            &var,
        );
        ring.check_structure()?;
        ring.check_locality(cap)?;
        Ok(ring)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        p: u32,
        s: u32,
        mu: usize,
        gamma: usize,
        h: Vec<u64>,
        residue: ResidueField,
        r0: Option<Arc<LocalRing>>,
        construction: Construction,
        basis_polys: &[Vec<u64>],
        mul_polys: impl Fn(&[u64], &[u64]) -> Vec<u64>,
        var: &[u64],
    ) -> Self {
        let dim = mu * gamma;
        let mut table = vec![0u32; dim * dim * dim];
        for u in 0..dim {
            for v in 0..dim {
                let prod = mul_polys(&basis_polys[u], &basis_polys[v]);
                for (w, &c) in prod.iter().enumerate() {
                    table[(u * dim + v) * dim + w] = c as u32;
                }
            }
        }
        let mut var_elem = RingElem::default();
        for (i, &c) in var.iter().enumerate() {
            var_elem.0[i] = c as u32;
        }
        LocalRing {
            p,
            s,
            modulus: (p as u64).pow(s) as u32,
            mu,
            gamma,
            dim,
            h: h.iter().map(|&c| c as u32).collect(),
            table,
            residue,
            r0,
            construction,
            var: var_elem,
            basis_polys: basis_polys
                .iter()
                .map(|b| {
                    let mut v: Vec<u32> = b.iter().map(|&c| c as u32).collect();
                    v.resize(dim, 0);
                    v
                })
                .collect(),
        }
    }

    /// Identity, commutativity and associativity of the structure constants.
    fn check_structure(&self) -> Result<()> {
        let basis: Vec<RingElem> = (0..self.dim).map(|u| self.unit_vector(u)).collect();
        let one = self.one();
        for a in &basis {
            if self.mul(&one, a) != *a {
                return Err(Error::MalformedModulus("first basis element is not the identity".into()));
            }
            for b in &basis {
                let ab = self.mul(a, b);
                if ab != self.mul(b, a) {
                    return Err(Error::MalformedModulus("structure constants are not commutative".into()));
                }
                for c in &basis {
                    if self.mul(&ab, c) != self.mul(a, &self.mul(b, c)) {
                        return Err(Error::MalformedModulus(
                            "structure constants are not associative".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Verifies that elements off the maximal ideal are units and elements on
    /// it are nilpotent, by exhaustive scan when `|R| <= cap`.
    ///
    /// Returns `Ok(false)` when the ring is too large to scan.
    pub fn check_locality(&self, cap: u64) -> Result<bool> {
        let Some(card) = self.cardinality_u64().filter(|&c| c <= cap) else {
            log::warn!("{self}: locality not verified exhaustively (more than {cap} elements)");
            return Ok(false);
        };
        let units = self.unit_group_order();
        let upsilon = BigUint::from(self.upsilon());
        for a in self.elements_unchecked(card) {
            let ok = if self.is_unit(&a) {
                self.pow(&a, &units) == self.one()
            } else {
                self.is_zero(&self.pow(&a, &upsilon))
            };
            if !ok {
                return Err(Error::NotLocal(format!("{a:?} violates the unit/maximal-ideal split")));
            }
        }
        for g in self.maximal_ideal_gens() {
            if self.is_unit(&g) {
                return Err(Error::NotLocal("maximal ideal generator is a unit".into()));
            }
        }
        Ok(true)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Characteristic exponent `s` (characteristic is `p^s`).
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Characteristic `p^s`.
    pub fn characteristic(&self) -> u32 {
        self.modulus
    }

    /// Residue degree `mu`, so `q = p^mu`.
    pub fn mu(&self) -> usize {
        self.mu
    }

    /// Rank of `R` over its Galois subring.
    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// Rank of `R` over `Z_{p^s}`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q(&self) -> u64 {
        self.residue.order()
    }

    /// `|R| = q^upsilon`.
    pub fn upsilon(&self) -> usize {
        self.s as usize * self.gamma
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.modulus).pow(self.dim as u32)
    }

    pub fn cardinality_u64(&self) -> Option<u64> {
        (self.modulus as u64).checked_pow(self.dim as u32)
    }

    /// The maximal Galois subring `R0` (the ring itself when `gamma = 1`).
    pub fn galois_subring(&self) -> &LocalRing {
        self.r0.as_deref().unwrap_or(self)
    }

    pub fn is_galois(&self) -> bool {
        self.gamma == 1
    }

    /// `p` together with `z_2, ..., z_gamma`.
    pub fn maximal_ideal_gens(&self) -> Vec<RingElem> {
        let mut gens = vec![self.from_int(self.p as i64)];
        gens.extend((1..self.gamma).map(|i| self.basis_element(i)));
        gens
    }

    /// `z_{i+1}` (zero-based index).
    pub fn basis_element(&self, i: usize) -> RingElem {
        self.unit_vector(i * self.mu)
    }

    fn unit_vector(&self, u: usize) -> RingElem {
        let mut e = RingElem::default();
        e.0[u] = 1 % self.modulus;
        e
    }

    /// Coordinate block `i` of `a` as an element of `R0`.
    pub fn r0_coord(&self, a: &RingElem, i: usize) -> RingElem {
        let mut e = RingElem::default();
        e.0[..self.mu].copy_from_slice(&a.0[i * self.mu..(i + 1) * self.mu]);
        e
    }

    /// `sum_i blocks[i] * z_i` with `blocks[i]` in `R0`.
    pub fn from_r0_coords(&self, blocks: &[RingElem]) -> RingElem {
        let mut e = RingElem::default();
        for (i, b) in blocks.iter().enumerate() {
            e.0[i * self.mu..(i + 1) * self.mu].copy_from_slice(&b.0[..self.mu]);
        }
        e
    }

    /// Structure constant `c[i][j][k]` in `R0`: `z_i z_j = sum_k c[i][j][k] z_k`.
    pub fn struct_const(&self, i: usize, j: usize, k: usize) -> RingElem {
        let prod = self.mul(&self.basis_element(i), &self.basis_element(j));
        self.r0_coord(&prod, k)
    }

    /// The projection `R -> R/m = F_q`.
    pub fn residue(&self, a: &RingElem) -> FqElem {
        let c: Vec<u32> = a.0[..self.mu].iter().map(|&x| x % self.p).collect();
        self.residue.from_coeffs(&c)
    }

    /// Canonical lift `F_q -> R` with coordinates in `[0, p)`.
    pub fn lift(&self, a: &FqElem) -> RingElem {
        let mut e = RingElem::default();
        e.0[..self.mu].copy_from_slice(&a.0[..self.mu]);
        e
    }

    /// `p`-adic valuation of an element of a Galois ring (`s` for zero).
    pub fn valuation(&self, a: &RingElem) -> u32 {
        debug_assert!(self.is_galois(), "valuation is defined on Galois rings");
        a.0[..self.dim]
            .iter()
            .map(|&c| if c == 0 { self.s } else { c.trailing_zeros_base(self.p) })
            .min()
            .unwrap_or(self.s)
    }

    /// `a / p^v` for `a` divisible by `p^v` (any representative).
    pub fn div_p_pow(&self, a: &RingElem, v: u32) -> RingElem {
        let d = self.p.pow(v);
        let mut e = RingElem::default();
        for i in 0..self.dim {
            debug_assert_eq!(a.0[i] % d, 0);
            e.0[i] = a.0[i] / d;
        }
        e
    }

    pub fn p_pow(&self, v: u32) -> RingElem {
        if v >= self.s {
            return self.zero();
        }
        self.from_int(self.p.pow(v) as i64)
    }

    /// Element from coordinates over `Z_{p^s}` (reduced; missing entries are zero).
    pub fn from_coords(&self, c: &[i64]) -> RingElem {
        let mut e = RingElem::default();
        for (i, &x) in c.iter().enumerate().take(self.dim) {
            e.0[i] = x.rem_euclid(self.modulus as i64) as u32;
        }
        e
    }

    pub fn to_coords(&self, a: &RingElem) -> Vec<u32> {
        a.0[..self.dim].to_vec()
    }

    /// Image of a polynomial in the construction's variable.
    pub fn from_poly(&self, c: &[i64]) -> RingElem {
        let mut acc = self.zero();
        for &x in c.iter().rev() {
            acc = self.mul(&acc, &self.var);
            acc = self.add(&acc, &self.from_int(x));
        }
        acc
    }

    /// Representative polynomial (degree < dim) in the construction's variable.
    pub fn to_poly(&self, a: &RingElem) -> Vec<u64> {
        let m = self.modulus as u64;
        let mut out = vec![0u64; self.dim];
        for (u, b) in self.basis_polys.iter().enumerate() {
            let c = a.0[u] as u64;
            for (i, &x) in b.iter().enumerate() {
                out[i] = (out[i] + c * x as u64) % m;
            }
        }
        zm_trim(&mut out);
        out
    }

    pub fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> RingElem {
        let mut e = RingElem::default();
        for c in e.0.iter_mut().take(self.dim) {
            *c = rng.gen_range(0..self.modulus);
        }
        e
    }

    pub fn random_unit<G: Rng + ?Sized>(&self, rng: &mut G) -> RingElem {
        loop {
            let a = self.random(rng);
            if self.is_unit(&a) {
                return a;
            }
        }
    }

    /// Uniform over `R* ∪ {0}`.
    pub fn random_unit_or_zero<G: Rng + ?Sized>(&self, rng: &mut G) -> RingElem {
        loop {
            let a = self.random(rng);
            if self.is_unit(&a) || self.is_zero(&a) {
                return a;
            }
        }
    }

    /// All elements, for rings of at most `2^24` elements.
    pub fn elements(&self) -> Option<impl Iterator<Item = RingElem> + '_> {
        let card = self.cardinality_u64().filter(|&c| c <= 1 << 24)?;
        Some(self.elements_unchecked(card))
    }

    fn elements_unchecked(&self, card: u64) -> impl Iterator<Item = RingElem> + '_ {
        let m = self.modulus as u64;
        (0..card).map(move |mut idx| {
            let mut e = RingElem::default();
            for c in e.0.iter_mut().take(self.dim) {
                *c = (idx % m) as u32;
                idx /= m;
            }
            e
        })
    }

    /// Parseable description (see the ring-spec grammar).
    pub fn spec(&self) -> String {
        match &self.construction {
            Construction::Galois { h } if self.mu == 1 && h == &[0, 1] => format!("Z{}", self.modulus),
            Construction::Galois { h } => format!("Z{}[x]/({})", self.modulus, format_poly(h, "x")),
            Construction::Quotient { g } => format!("Z{}[x]/({})", self.modulus, format_poly(g, "x")),
        }
    }

    /// `R0` modulus lift `h`.
    pub fn galois_modulus(&self) -> &[u32] {
        &self.h
    }

    #[inline]
    fn reduce(&self, x: u64) -> u32 {
        (x % self.modulus as u64) as u32
    }
}

impl fmt::Display for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

trait TrailingZerosBase {
    fn trailing_zeros_base(self, p: u32) -> u32;
}

impl TrailingZerosBase for u32 {
    fn trailing_zeros_base(mut self, p: u32) -> u32 {
        let mut v = 0;
        while self.is_multiple_of(p) {
            self /= p;
            v += 1;
        }
        v
    }
}

/// Splits a prime power `n = p^s`.
pub fn prime_power(n: u64) -> Result<(u64, u32)> {
    let f = crate::field::factorize(n);
    match f.as_slice() {
        [(p, s)] => Ok((*p, *s)),
        _ => Err(Error::NotPrimePower(n)),
    }
}

impl RingOps for LocalRing {
    type Elem = RingElem;

    #[inline]
    fn zero(&self) -> RingElem {
        RingElem::default()
    }

    #[inline]
    fn one(&self) -> RingElem {
        self.unit_vector(0)
    }

    #[inline]
    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut e = RingElem::default();
        for i in 0..self.dim {
            let x = a.0[i] + b.0[i];
            e.0[i] = if x >= self.modulus { x - self.modulus } else { x };
        }
        e
    }

    #[inline]
    fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut e = RingElem::default();
        for i in 0..self.dim {
            let x = a.0[i] + self.modulus - b.0[i];
            e.0[i] = if x >= self.modulus { x - self.modulus } else { x };
        }
        e
    }

    #[inline]
    fn neg(&self, a: &RingElem) -> RingElem {
        self.sub(&RingElem::default(), a)
    }

    #[inline]
    fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut e = RingElem::default();
        if self.dim == 1 {
            e.0[0] = self.reduce(a.0[0] as u64 * b.0[0] as u64);
            return e;
        }
        let d = self.dim;
        let mut acc = [0u64; MAX_RANK];
        for u in 0..d {
            if a.0[u] == 0 {
                continue;
            }
            for v in 0..d {
                if b.0[v] == 0 {
                    continue;
                }
                let c = a.0[u] as u64 * b.0[v] as u64 % self.modulus as u64;
                let row = &self.table[(u * d + v) * d..(u * d + v + 1) * d];
                for w in 0..d {
                    acc[w] += c * row[w] as u64;
                }
            }
            // keep the accumulator well below 2^64
            for x in acc.iter_mut().take(d) {
                *x %= self.modulus as u64;
            }
        }
        for w in 0..d {
            e.0[w] = self.reduce(acc[w]);
        }
        e
    }

    #[inline]
    fn mul_acc(&self, acc: &mut RingElem, a: &RingElem, b: &RingElem) {
        if self.dim == 1 {
            acc.0[0] = self.reduce(acc.0[0] as u64 + a.0[0] as u64 * b.0[0] as u64);
            return;
        }
        let p = self.mul(a, b);
        *acc = self.add(acc, &p);
    }

    fn from_int(&self, n: i64) -> RingElem {
        let mut e = RingElem::default();
        e.0[0] = n.rem_euclid(self.modulus as i64) as u32;
        e
    }

    #[inline]
    fn is_zero(&self, a: &RingElem) -> bool {
        a.0[..self.dim].iter().all(|&c| c == 0)
    }

    #[inline]
    fn is_unit(&self, a: &RingElem) -> bool {
        a.0[..self.mu].iter().any(|&c| c % self.p != 0)
    }

    fn unit_group_order(&self) -> BigUint {
        let card = self.cardinality();
        let maximal = &card / BigUint::from(self.q());
        card - maximal
    }

    fn inv(&self, a: &RingElem) -> Option<RingElem> {
        if !self.is_unit(a) {
            return None;
        }
        if self.dim == 1 {
            let m = self.modulus as i64;
            let (mut r0, mut r1) = (m, a.0[0] as i64);
            let (mut t0, mut t1) = (0i64, 1i64);
            while r1 != 0 {
                let q = r0 / r1;
                (r0, r1) = (r1, r0 - q * r1);
                (t0, t1) = (t1, t0 - q * t1);
            }
            return Some(self.from_int(t0));
        }
        let e = self.unit_group_order() - BigUint::one();
        Some(self.pow(a, &e))
    }
}

impl LocalRing {
    /// Inverse or [`Error::NotAUnit`].
    pub fn try_inv(&self, a: &RingElem) -> Result<RingElem> {
        self.inv(a).ok_or(Error::NotAUnit)
    }

    /// `true` iff the number of elements is small enough for brute force.
    pub fn is_enumerable(&self, limit: u64) -> bool {
        self.cardinality_u64().is_some_and(|c| c <= limit)
    }
}
