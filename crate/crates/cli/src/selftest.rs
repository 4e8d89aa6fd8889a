//! Golden vectors checked by `lrpc-sim selftest`.

use std::sync::Arc;

use lrpc_core::ext_module::module_product;
use lrpc_core::modlin::solve_linear;
use lrpc_core::{Extension, LocalRing, Mat, Result};

pub struct Check {
    pub name: &'static str,
    pub ok: bool,
}

/// `[[2, ξ+1], [ξ, 2ξ+1]] x = (0, ξ+2)` over `Z4[ξ]/(ξ^2)` has exactly four solutions.
pub fn linear_system() -> Result<Vec<Check>> {
    let r = LocalRing::quotient(2, 2, &[0, 0, 1])?;
    let e = |c: &[i64]| r.from_poly(c);
    let a = Mat::from_rows(vec![vec![e(&[2]), e(&[1, 1])], vec![e(&[0, 1]), e(&[1, 2])]], 2);
    let b = [e(&[0]), e(&[2, 1])];
    let sols = solve_linear(&r, &a, &b)?.enumerate(&r, 1 << 12);
    let mut expected = vec![
        vec![e(&[3, 2]), e(&[2, 2])],
        vec![e(&[1, 3]), e(&[2])],
        vec![e(&[3]), e(&[2, 2])],
        vec![e(&[1, 1]), e(&[2])],
    ];
    expected.sort_by_key(|v| v.iter().map(|x| r.to_coords(x)).collect::<Vec<_>>());
    Ok(vec![Check { name: "linear system: four solutions", ok: sols == Some(expected) }])
}

/// Submodules `A`, `B` of `Z4[θ]/(θ^5+θ^2+1)`.
pub fn module_examples() -> Result<Vec<Check>> {
    let z4 = Arc::new(LocalRing::zmod(2, 2)?);
    let s = Extension::new(z4, &[1, 0, 1, 0, 0, 1])?;
    let a = s.support(&[s.from_ints(&[3, 2, 0, 3]), s.from_ints(&[1, 3, 0, 2, 2])]);
    let b = s.support(&[s.from_ints(&[1, 0, 0, 2, 1]), s.from_ints(&[3, 2, 0, 3, 2])]);
    let sum = a.sum(&b)?;
    let cap = a.intersect(&b)?;
    let expected_cap = s.support(&[s.from_ints(&[2, 0, 0, 2])]);
    let ab = module_product(&s, &a, &b)?;
    Ok(vec![
        Check { name: "frk(A) = 2, A free", ok: a.free_module_test() == (2, true) },
        Check { name: "frk(B) = 2, B free", ok: b.free_module_test() == (2, true) },
        Check { name: "frk(A+B) = 3, A+B not free", ok: sum.free_module_test() == (3, false) },
        Check { name: "A∩B = <2θ^3+2>, not free", ok: cap.equals(&expected_cap)? && !cap.is_free() },
        Check { name: "AB not free", ok: !ab.is_free() },
    ])
}

pub fn run_all() -> Result<Vec<Check>> {
    let mut all = linear_system()?;
    all.extend(module_examples()?);
    Ok(all)
}
