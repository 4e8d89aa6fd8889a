//! Submodules of `S` viewed inside `R^m`: products, the square property and
//! recovery of `A` from `AB`.

use crate::arith::{Mat, RingOps};
use crate::error::{Error, Result};
use crate::extension::{ExtElem, Extension};
use crate::modlin::{FreeBasis, Submodule};

/// Outcome of [`square_property_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarePropertyReport {
    pub has_square_property: bool,
    /// Basis of `B` with `b_1 = 1`.
    pub suitable_basis: Option<Vec<ExtElem>>,
    /// `rk(B^2)`.
    pub beta2: usize,
    /// Zero-based index `i0 >= 1` with `B ∩ b_i0 B' = 0`.
    pub i0: Option<usize>,
}

/// `{ a * b }` spanned inside `R^m`.
pub fn module_product(ext: &Extension, a: &Submodule, b: &Submodule) -> Result<Submodule> {
    let xs = ext.elements_of(a)?;
    let ys = ext.elements_of(b)?;
    Ok(product_of_elements(ext, &xs, &ys))
}

pub fn product_of_elements(ext: &Extension, xs: &[ExtElem], ys: &[ExtElem]) -> Submodule {
    let prods: Vec<ExtElem> = xs
        .iter()
        .filter(|x| !ext.is_zero(x))
        .flat_map(|x| ys.iter().map(move |y| ext.mul(x, y)))
        .collect();
    ext.support(&prods)
}

/// `c * A`.
pub fn scale_module(ext: &Extension, c: &ExtElem, a: &Submodule) -> Result<Submodule> {
    let xs: Vec<ExtElem> = ext.elements_of(a)?.iter().map(|x| ext.mul(c, x)).collect();
    Ok(ext.support(&xs))
}

/// A basis of the free module `f` starting with `1`.
///
/// If the generators already form such a basis they are kept as given.
pub fn basis_with_one(ext: &Extension, f: &Submodule) -> Result<Vec<ExtElem>> {
    ext.check_module(f)?;
    let r = ext.base();
    let one = ext.one();
    let (rank, free) = f.free_module_test();
    if !free {
        return Err(Error::NotFree);
    }
    let gens = ext.elements_of(f)?;
    if gens.len() == rank && gens.first() == Some(&one) {
        return Ok(gens);
    }
    let fb = f.free_basis()?;
    let c = fb.coords(r, &ext.vec_rep(&one)).ok_or(Error::OneNotInModule)?;
    // 1 = sum c_j b_j with some c_j a unit; swap 1 in for that b_j
    let j = c.iter().position(|x| r.is_unit(x)).ok_or(Error::NoSuitableBasis)?;
    let mut basis = vec![one];
    for (i, row) in fb.basis().row_vecs().into_iter().enumerate() {
        if i != j {
            basis.push(ext.from_vec(&row)?);
        }
    }
    Ok(basis)
}

/// Decides whether the free module `f ∋ 1` has the square property.
pub fn square_property_check(ext: &Extension, f: &Submodule) -> Result<SquarePropertyReport> {
    ext.check_module(f)?;
    if !f.contains(&ext.vec_rep(&ext.one())) {
        return Err(Error::OneNotInModule);
    }
    let basis = basis_with_one(ext, f)?;
    let lambda = basis.len();
    let f2 = product_of_elements(ext, &basis, &basis);
    let beta2 = f2.rank();
    let (frk2, free2) = f2.free_module_test();
    let report = |ok: bool, i0: Option<usize>| SquarePropertyReport {
        has_square_property: ok,
        suitable_basis: ok.then(|| basis.clone()),
        beta2,
        i0,
    };
    if lambda == 1 {
        // only i0 in {2..1} could witness; F = <1> is accepted as trivially suitable
        return Ok(report(free2, None));
    }
    if !free2 {
        return Ok(report(false, None));
    }
    if frk2 == lambda * (lambda + 1) / 2 {
        return Ok(report(true, Some(1)));
    }
    let b_prime = ext.support(&basis[1..]);
    for i0 in 1..lambda {
        let scaled = scale_module(ext, &basis[i0], &b_prime)?;
        if f.intersect_auto(&scaled)?.is_zero() {
            return Ok(report(true, Some(i0)));
        }
    }
    Ok(report(false, None))
}

/// `∩_i b_i^{-1} AB` over a suitable basis `b_1..b_β`.
pub fn recover_factor(
    ext: &Extension,
    ab: &Submodule,
    report: &SquarePropertyReport,
) -> Result<Submodule> {
    let basis = report.suitable_basis.as_ref().ok_or(Error::NoSuitableBasis)?;
    let mut acc: Option<Submodule> = None;
    for b in basis {
        let inv = ext.try_inv(b)?;
        let scaled = scale_module(ext, &inv, ab)?;
        acc = Some(match acc {
            None => scaled,
            Some(prev) => prev.intersect_auto(&scaled)?,
        });
    }
    acc.ok_or(Error::NoSuitableBasis)
}

/// Coordinates of elements of a free module `⟨basis⟩ ⊆ S` in that basis.
pub fn element_basis(ext: &Extension, basis: &[ExtElem]) -> Result<FreeBasis> {
    let rows: Vec<Vec<_>> = basis.iter().map(|x| ext.vec_rep(x)).collect();
    FreeBasis::new(ext.base(), Mat::from_rows(rows, ext.m())).ok_or(Error::NotFree)
}
