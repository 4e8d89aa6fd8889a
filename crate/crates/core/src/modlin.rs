//! Linear algebra for submodules of `R^n` over a finite local ring `R`.
//!
//! Systems over `R` are expanded over the Galois subring `R0` (each unknown
//! becomes `gamma` unknowns) and solved there with [`HowellForm`].

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use rand::Rng;

use crate::arith::{
    complement_transform, is_zero_vec, pivot_rank, unit_pivot_factor, vec_mat, Mat, RingOps,
    UnitPivotFactor,
};
use crate::chain::HowellForm;
use crate::error::{Error, Result};
use crate::ring::{LocalRing, RingElem};

/// All solutions of a linear system: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub particular: Option<Vec<RingElem>>,
    pub kernel: Vec<Vec<RingElem>>,
}

impl SolutionSet {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }

    /// Every solution, sorted; `None` once more than `limit` are found.
    pub fn enumerate(&self, ring: &LocalRing, limit: usize) -> Option<Vec<Vec<RingElem>>> {
        let Some(x0) = &self.particular else {
            return Some(Vec::new());
        };
        let elems: Vec<RingElem> = ring.elements()?.collect();
        // closure of {0} under v -> v + r*k
        let mut seen = std::collections::HashSet::new();
        let mut queue = vec![vec![ring.zero(); x0.len()]];
        seen.insert(queue[0].clone());
        while let Some(v) = queue.pop() {
            for k in &self.kernel {
                for r in &elems {
                    let w: Vec<RingElem> = v.iter().zip(k).map(|(a, b)| ring.add(a, &ring.mul(r, b))).collect();
                    if seen.insert(w.clone()) {
                        if seen.len() > limit {
                            return None;
                        }
                        queue.push(w);
                    }
                }
            }
        }
        let mut out: Vec<Vec<RingElem>> =
            seen.into_iter().map(|v| v.iter().zip(x0).map(|(a, b)| ring.add(a, b)).collect()).collect();
        out.sort_by_key(|v| v.iter().map(|x| ring.to_coords(x)).collect::<Vec<_>>());
        Some(out)
    }
}

/// `x * M = y` prepared for many right-hand sides.
#[derive(Clone, Debug)]
pub struct LeftSystem {
    k: usize,
    n: usize,
    howell: HowellForm,
}

impl LeftSystem {
    pub fn new(ring: &LocalRing, m: &Mat<RingElem>) -> Self {
        let (k, n) = (m.rows(), m.cols());
        let g = ring.gamma();
        let r0 = ring.galois_subring();
        let howell = if g == 1 {
            HowellForm::new(r0, m)
        } else {
            // row (i, a) holds the R0-coordinates of z_a * M[i][j]
            let basis: Vec<RingElem> = (0..g).map(|a| ring.basis_element(a)).collect();
            let mut big = Mat::zeros(r0, k * g, n * g);
            for i in 0..k {
                for (a, za) in basis.iter().enumerate() {
                    for j in 0..n {
                        let prod = ring.mul(za, &m[(i, j)]);
                        for b in 0..g {
                            big[(i * g + a, j * g + b)] = ring.r0_coord(&prod, b);
                        }
                    }
                }
            }
            HowellForm::new(r0, &big)
        };
        LeftSystem { k, n, howell }
    }

    fn expand(&self, ring: &LocalRing, y: &[RingElem]) -> Vec<RingElem> {
        let g = ring.gamma();
        if g == 1 {
            return y.to_vec();
        }
        y.iter().flat_map(|v| (0..g).map(move |b| ring.r0_coord(v, b))).collect()
    }

    fn collapse(&self, ring: &LocalRing, x: &[RingElem]) -> Vec<RingElem> {
        let g = ring.gamma();
        if g == 1 {
            return x.to_vec();
        }
        x.chunks(g).map(|c| ring.from_r0_coords(c)).collect()
    }

    pub fn particular(&self, ring: &LocalRing, y: &[RingElem]) -> Option<Vec<RingElem>> {
        assert_eq!(y.len(), self.n, "right-hand side length");
        let x = self.howell.solve(ring.galois_subring(), &self.expand(ring, y))?;
        Some(self.collapse(ring, &x))
    }

    pub fn kernel(&self, ring: &LocalRing) -> Vec<Vec<RingElem>> {
        self.howell.kernel().iter().map(|x| self.collapse(ring, x)).collect()
    }

    pub fn solve(&self, ring: &LocalRing, y: &[RingElem]) -> SolutionSet {
        SolutionSet { particular: self.particular(ring, y), kernel: self.kernel(ring) }
    }

    pub fn unknowns(&self) -> usize {
        self.k
    }
}

/// All `x` with `x * M = y`.
pub fn solve_left(ring: &LocalRing, m: &Mat<RingElem>, y: &[RingElem]) -> Result<SolutionSet> {
    if y.len() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{} columns but right-hand side of length {}",
            m.cols(),
            y.len()
        )));
    }
    Ok(LeftSystem::new(ring, m).solve(ring, y))
}

/// All `x` with `A x = b`.
pub fn solve_linear(ring: &LocalRing, a: &Mat<RingElem>, b: &[RingElem]) -> Result<SolutionSet> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    Ok(LeftSystem::new(ring, &a.transpose()).solve(ring, b))
}

/// Rank over `F_q` of the residue image of `a`.
pub fn residue_rank(ring: &LocalRing, a: &Mat<RingElem>) -> usize {
    let fq = ring.residue_field();
    pivot_rank(fq, &a.map(|x| ring.residue(x)))
}

/// A finitely generated submodule of `R^n`, given by generator rows.
#[derive(Clone)]
pub struct Submodule {
    ring: Arc<LocalRing>,
    gens: Mat<RingElem>,
    factor: OnceLock<UnitPivotFactor<RingElem>>,
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Submodule")
            .field("ring", &self.ring.spec())
            .field("gens", &self.gens.row_vecs())
            .finish()
    }
}

impl Submodule {
    pub fn new(ring: Arc<LocalRing>, n: usize, gens: Vec<Vec<RingElem>>) -> Result<Self> {
        if let Some(bad) = gens.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "generator of length {} in R^{n}",
                bad.len()
            )));
        }
        Ok(Self::from_mat(ring, Mat::from_rows(gens, n)))
    }

    pub fn from_mat(ring: Arc<LocalRing>, gens: Mat<RingElem>) -> Self {
        Submodule { ring, gens, factor: OnceLock::new() }
    }

    pub fn zero(ring: Arc<LocalRing>, n: usize) -> Self {
        Self::from_mat(ring, Mat::filled(0, n, RingElem::default()))
    }

    /// `R^n` itself.
    pub fn full(ring: Arc<LocalRing>, n: usize) -> Self {
        let id = Mat::identity(&*ring, n);
        Self::from_mat(ring, id)
    }

    pub fn ring(&self) -> &Arc<LocalRing> {
        &self.ring
    }

    pub fn ambient_dim(&self) -> usize {
        self.gens.cols()
    }

    pub fn gens(&self) -> &Mat<RingElem> {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.rows()
    }

    fn same_ring(&self, other: &Submodule) -> Result<()> {
        if !Arc::ptr_eq(&self.ring, &other.ring) && *self.ring != *other.ring {
            return Err(Error::RingMismatch);
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::AmbientMismatch(self.ambient_dim(), other.ambient_dim()));
        }
        Ok(())
    }

    /// Unit-pivot factorization of the generator matrix (computed once).
    pub fn factor(&self) -> &UnitPivotFactor<RingElem> {
        self.factor.get_or_init(|| unit_pivot_factor(&*self.ring, &self.gens))
    }

    /// `(free rank, is free)`: free exactly when the non-pivot block vanishes.
    pub fn free_module_test(&self) -> (usize, bool) {
        let f = self.factor();
        let t3 = f.t3();
        (f.rank, t3.entries().iter().all(|x| self.ring.is_zero(x)))
    }

    /// Free rank, as the residue-field rank of the generators.
    pub fn free_rank(&self) -> usize {
        residue_rank(&self.ring, &self.gens)
    }

    pub fn is_free(&self) -> bool {
        self.free_module_test().1
    }

    /// Minimal number of generators.
    ///
    /// Drops generators (last first) that lie in the span of the remaining
    /// ones plus `𝔪N`.
    pub fn rank(&self) -> usize {
        let ring = &*self.ring;
        let n = self.ambient_dim();
        let mut keep: Vec<Vec<RingElem>> =
            self.gens.row_vecs().into_iter().filter(|g| !is_zero_vec(ring, g)).collect();
        let mut m_n: Vec<Vec<RingElem>> = Vec::new();
        for g in &keep {
            for mu in ring.maximal_ideal_gens() {
                let v: Vec<RingElem> = g.iter().map(|x| ring.mul(&mu, x)).collect();
                if !is_zero_vec(ring, &v) {
                    m_n.push(v);
                }
            }
        }
        for i in (0..keep.len()).rev() {
            let mut others: Vec<Vec<RingElem>> =
                keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
            others.extend(m_n.iter().cloned());
            let sys = LeftSystem::new(ring, &Mat::from_rows(others, n));
            if sys.particular(ring, &keep[i]).is_some() {
                keep.remove(i);
            }
        }
        keep.len()
    }

    pub fn system(&self) -> LeftSystem {
        LeftSystem::new(&self.ring, &self.gens)
    }

    pub fn contains(&self, v: &[RingElem]) -> bool {
        is_zero_vec(&*self.ring, v) || self.system().particular(&self.ring, v).is_some()
    }

    /// `other ⊆ self`.
    pub fn contains_module(&self, other: &Submodule) -> Result<bool> {
        self.same_ring(other)?;
        let sys = self.system();
        Ok((0..other.num_gens()).all(|i| {
            let g = other.gens.row(i);
            is_zero_vec(&*self.ring, g) || sys.particular(&self.ring, g).is_some()
        }))
    }

    /// Equality as sets, by mutual containment.
    pub fn equals(&self, other: &Submodule) -> Result<bool> {
        Ok(self.contains_module(other)? && other.contains_module(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.entries().iter().all(|x| self.ring.is_zero(x))
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.same_ring(other)?;
        let mut rows = self.gens.row_vecs();
        rows.extend(other.gens.row_vecs());
        Ok(Self::from_mat(self.ring.clone(), Mat::from_rows(rows, self.ambient_dim())))
    }

    /// A basis of a free module, with the transform reading off coordinates.
    pub fn free_basis(&self) -> Result<FreeBasis> {
        let (r, free) = self.free_module_test();
        if !free {
            return Err(Error::NotFree);
        }
        let rows: Vec<usize> = (0..r).collect();
        let basis = self.factor().reduced_rows().select_rows(&rows);
        FreeBasis::new(&self.ring, basis).ok_or(Error::NotFree)
    }

    /// `self ∩ g` for a free module `g`.
    pub fn intersect_with_free(&self, g: &Submodule) -> Result<Submodule> {
        self.same_ring(g)?;
        let basis = g.free_basis()?;
        let ring = &*self.ring;
        let n = self.ambient_dim();
        let r = basis.rank();
        if r == n {
            return Ok(self.clone());
        }
        if r == 0 || self.num_gens() == 0 {
            return Ok(Self::zero(self.ring.clone(), n));
        }
        // v ∈ G  ⟺  (v T)[r..] = 0
        let cols: Vec<usize> = (r..n).collect();
        let t2 = basis.transform.select_cols(&cols);
        let nt2 = crate::arith::mat_mul(ring, &self.gens, &t2);
        let sys = LeftSystem::new(ring, &nt2);
        Ok(self.combinations(&sys.kernel(ring)))
    }

    /// `self ∩ other` for arbitrary submodules, via the kernel of `[N; -M]`.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.same_ring(other)?;
        let ring = &*self.ring;
        let n = self.ambient_dim();
        let k = self.num_gens();
        let mut rows = self.gens.row_vecs();
        rows.extend(other.gens.row_vecs().into_iter().map(|g| g.iter().map(|x| ring.neg(x)).collect()));
        let sys = LeftSystem::new(ring, &Mat::from_rows(rows, n));
        let ys: Vec<Vec<RingElem>> = sys.kernel(ring).into_iter().map(|x| x[..k].to_vec()).collect();
        Ok(self.combinations(&ys))
    }

    /// Picks whichever intersection routine applies.
    pub fn intersect_auto(&self, other: &Submodule) -> Result<Submodule> {
        if other.is_free() {
            self.intersect_with_free(other)
        } else if self.is_free() {
            other.intersect_with_free(self)
        } else {
            self.intersect(other)
        }
    }

    /// Module spanned by `c * gens` for each coefficient row `c`.
    fn combinations(&self, coeffs: &[Vec<RingElem>]) -> Submodule {
        let ring = &*self.ring;
        let rows: Vec<Vec<RingElem>> = coeffs
            .iter()
            .map(|c| vec_mat(ring, c, &self.gens))
            .filter(|v| !is_zero_vec(ring, v))
            .collect();
        Self::from_mat(self.ring.clone(), Mat::from_rows(rows, self.ambient_dim()))
    }

    /// Generator rows with the zero rows removed.
    pub fn pruned(&self) -> Submodule {
        let ring = &*self.ring;
        let rows = self.gens.row_vecs().into_iter().filter(|g| !is_zero_vec(ring, g)).collect();
        Self::from_mat(self.ring.clone(), Mat::from_rows(rows, self.ambient_dim()))
    }
}

/// A basis of a free module and a transform `T` with `basis * T = [I | 0]`.
#[derive(Clone, Debug)]
pub struct FreeBasis {
    basis: Mat<RingElem>,
    transform: Mat<RingElem>,
}

impl FreeBasis {
    /// `None` when the rows are not linearly independent.
    pub fn new(ring: &LocalRing, basis: Mat<RingElem>) -> Option<Self> {
        let transform = complement_transform(ring, &basis)?;
        Some(FreeBasis { basis, transform })
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Mat<RingElem> {
        &self.basis
    }

    /// The unique `x` with `x * basis = v`, if `v` lies in the module.
    pub fn coords(&self, ring: &LocalRing, v: &[RingElem]) -> Option<Vec<RingElem>> {
        let mut vt = vec_mat(ring, v, &self.transform);
        if !is_zero_vec(ring, &vt[self.rank()..]) {
            return None;
        }
        vt.truncate(self.rank());
        Some(vt)
    }
}

/// Number of ordered `r`-tuples of linearly independent vectors in `R^n`:
/// `q^((υ-1)nr) * prod_{i<r} (q^n - q^i)`.
pub fn count_independent_tuples(ring: &LocalRing, n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(ring.q());
    let mut acc = q.pow(((ring.upsilon() - 1) * n * r) as u32);
    let qn = q.pow(n as u32);
    for i in 0..r {
        acc *= &qn - q.pow(i as u32);
    }
    acc
}

/// A uniformly random free submodule of `R^n` of rank `alpha`.
///
/// Uniform independent tuples give uniform modules: every free module of
/// rank `alpha` has the same number `|GL_alpha(R)|` of ordered bases.
pub fn sample_free_submodule<G: Rng + ?Sized>(
    ring: &Arc<LocalRing>,
    alpha: usize,
    n: usize,
    rng: &mut G,
) -> Result<Submodule> {
    if alpha > n {
        return Err(Error::BadRank { rank: alpha, ambient: n });
    }
    loop {
        let rows: Vec<Vec<RingElem>> =
            (0..alpha).map(|_| (0..n).map(|_| ring.random(rng)).collect()).collect();
        let m = Mat::from_rows(rows, n);
        if residue_rank(ring, &m) == alpha {
            return Ok(Submodule::from_mat(ring.clone(), m));
        }
    }
}
