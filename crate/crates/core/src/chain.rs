//! Complete solution sets of `x * M = y` over a Galois ring.
//!
//! Galois rings are chain rings: every element is `p^v * unit`. Row reduction
//! on `[M | I]` picks the pivot of least valuation, normalizes it to `p^v` and,
//! Howell style, appends the saturation row `p^(s-v) * pivot` so that
//! annihilated multiples of the pivot stay visible to later columns. The
//! zero rows left at the end carry the kernel in their identity part.

use crate::arith::{Mat, RingOps};
use crate::ring::{LocalRing, RingElem};

/// Reduced form of `[M | I]` ready for repeated solves.
#[derive(Clone, Debug)]
pub struct HowellForm {
    k: usize,
    n: usize,
    /// `(column, valuation, row)`; each row has `p^valuation` in `column`
    /// and zeros before it.
    pivots: Vec<(usize, u32, Vec<RingElem>)>,
    kernel: Vec<Vec<RingElem>>,
}

impl HowellForm {
    /// Reduces `m` (`k x n`) over the Galois ring `r0`.
    pub fn new(r0: &LocalRing, m: &Mat<RingElem>) -> Self {
        debug_assert!(r0.is_galois());
        let (k, n) = (m.rows(), m.cols());
        let mut rows: Vec<Vec<RingElem>> = (0..k)
            .map(|i| {
                let mut row = m.row(i).to_vec();
                row.extend((0..k).map(|j| if i == j { r0.one() } else { r0.zero() }));
                row
            })
            .collect();
        let s = r0.s();
        let mut pivots = Vec::new();
        for col in 0..n {
            let best = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| !r0.is_zero(&r[col]))
                .map(|(i, r)| (r0.valuation(&r[col]), i))
                .min();
            let Some((v, idx)) = best else { continue };
            let mut piv = rows.swap_remove(idx);
            // piv[col] = p^v * u
            let u = r0.div_p_pow(&piv[col], v);
            let u_inv = r0.inv(&u).expect("unit part of a chain-ring element");
            if u_inv != r0.one() {
                for x in piv.iter_mut() {
                    *x = r0.mul(x, &u_inv);
                }
            }
            for row in rows.iter_mut() {
                if r0.is_zero(&row[col]) {
                    continue;
                }
                let c = r0.div_p_pow(&row[col], v);
                axpy(r0, row, &c, &piv, col);
            }
            if v > 0 {
                let sat_c = r0.p_pow(s - v);
                let sat: Vec<RingElem> = piv.iter().map(|x| r0.mul(x, &sat_c)).collect();
                if sat.iter().any(|x| !r0.is_zero(x)) {
                    rows.push(sat);
                }
            }
            pivots.push((col, v, piv));
        }
        let kernel = rows
            .into_iter()
            .map(|r| r[n..].to_vec())
            .filter(|r| r.iter().any(|x| !r0.is_zero(x)))
            .collect();
        HowellForm { k, n, pivots, kernel }
    }

    /// Generators of `{x : x * M = 0}`.
    pub fn kernel(&self) -> &[Vec<RingElem>] {
        &self.kernel
    }

    /// One solution of `x * M = y`, if any.
    pub fn solve(&self, r0: &LocalRing, y: &[RingElem]) -> Option<Vec<RingElem>> {
        assert_eq!(y.len(), self.n, "right-hand side length");
        let mut t: Vec<RingElem> = y.to_vec();
        t.extend((0..self.k).map(|_| r0.zero()));
        for (col, v, piv) in &self.pivots {
            if r0.is_zero(&t[*col]) {
                continue;
            }
            if r0.valuation(&t[*col]) < *v {
                return None;
            }
            let c = r0.div_p_pow(&t[*col], *v);
            axpy(r0, &mut t, &c, piv, *col);
        }
        if t[..self.n].iter().any(|x| !r0.is_zero(x)) {
            return None;
        }
        // y - t = sum c_i pivot_i, so x = -t[n..]
        Some(t[self.n..].iter().map(|x| r0.neg(x)).collect())
    }
}

/// `row -= c * piv`, starting at column `from` (earlier entries of `piv` are zero).
fn axpy(r0: &LocalRing, row: &mut [RingElem], c: &RingElem, piv: &[RingElem], from: usize) {
    for (x, p) in row.iter_mut().zip(piv).skip(from) {
        if !r0.is_zero(p) {
            *x = r0.sub(x, &r0.mul(c, p));
        }
    }
}
