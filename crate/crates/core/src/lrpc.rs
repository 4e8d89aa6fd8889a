//! LRPC codes over the Galois extension `S` of a local ring and their
//! rank-syndrome decoder.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{unit_pivot_factor, Mat, RingOps};
use crate::error::{Error, Result};
use crate::ext_module::{element_basis, square_property_check, SquarePropertyReport};
use crate::extension::{ExtElem, Extension};
use crate::modlin::{residue_rank, sample_free_submodule, FreeBasis, Submodule};
use crate::ring::RingElem;

/// Attempts at drawing a parity-check matrix with all required properties.
pub const GENERATION_ATTEMPTS: usize = 1000;
/// Attempts at drawing error coefficients of full residue rank.
pub const ERROR_COEFF_ATTEMPTS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
}

impl CodeParams {
    pub fn new(n: usize, k: usize, lambda: usize) -> Result<Self> {
        let p = CodeParams { n, k, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k >= self.n {
            return Err(Error::InvalidParams(format!("need 0 < k < n, got k={} n={}", self.k, self.n)));
        }
        if self.lambda == 0 || self.lambda * (self.n - self.k) < self.n {
            return Err(Error::InvalidParams(format!(
                "unique decoding needs lambda >= n/(n-k), got lambda={} n={} k={}",
                self.lambda, self.n, self.k
            )));
        }
        Ok(())
    }

    /// Whether `t` satisfies `tλ(λ+1)/2 < m` and `tλ < n-k+1`.
    pub fn bound_applies(&self, t: usize, m: usize) -> bool {
        t * self.lambda * (self.lambda + 1) / 2 < m && t * self.lambda < self.redundancy() + 1
    }

    /// Largest `t` for which [`bound_applies`](Self::bound_applies) holds.
    pub fn t_max(&self, m: usize) -> usize {
        (0..=self.n).take_while(|&t| self.bound_applies(t, m)).last().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFlags {
    pub unique_decoding: bool,
    pub maximal_row_span: bool,
    pub unity: bool,
    pub square_property: bool,
}

impl CodeFlags {
    pub fn all(&self) -> bool {
        self.unique_decoding && self.maximal_row_span && self.unity && self.square_property
    }
}

/// Systematic encoder: with `c' = c` permuted by `col_perm`,
/// `c' = (X * msg, msg)`.
#[derive(Clone, Debug)]
struct Encoder {
    x: Mat<ExtElem>,
    col_perm: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LrpcCode {
    ext: Arc<Extension>,
    params: CodeParams,
    h: Mat<ExtElem>,
    f_basis: Vec<ExtElem>,
    f_inv: Vec<ExtElem>,
    h_ext: Mat<RingElem>,
    /// Rows are the columns of `H_ext`; present with the unique-decoding property.
    h_ext_cols: Option<FreeBasis>,
    flags: CodeFlags,
    square: SquarePropertyReport,
    encoder: Encoder,
}

/// The line of the decoder that rejected the received word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FailureLine {
    /// Syndrome support is not free.
    Line5,
    /// `λ` does not divide the free rank of the syndrome support.
    Line8,
    /// The intersection of the scaled supports is not free.
    Line14,
    /// Candidate support has the wrong free rank, or its product with `F` does.
    Line16,
    /// Erasure decoding found no consistent error.
    Line18,
}

impl FailureLine {
    pub const ALL: [FailureLine; 5] =
        [FailureLine::Line5, FailureLine::Line8, FailureLine::Line14, FailureLine::Line16, FailureLine::Line18];

    pub fn number(self) -> u32 {
        match self {
            FailureLine::Line5 => 5,
            FailureLine::Line8 => 8,
            FailureLine::Line14 => 14,
            FailureLine::Line16 => 16,
            FailureLine::Line18 => 18,
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&l| l == self).unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("decoding failure at line {}", .line.number())]
pub struct DecodingFailure {
    pub line: FailureLine,
}

/// Intermediate quantities of one decoder run.
#[derive(Clone, Debug, Default)]
pub struct DecoderState {
    pub syndrome: Vec<ExtElem>,
    pub support: Option<Submodule>,
    pub nu: usize,
    pub t_prime: usize,
    pub scaled: Vec<Submodule>,
    pub candidate: Option<Submodule>,
    pub error: Option<Vec<ExtElem>>,
}

impl LrpcCode {
    /// Assembles a code from `H` and a basis of `F` with `f_1 = 1`,
    /// computing `H_ext`, the property flags and an encoder.
    pub fn from_parts(
        ext: Arc<Extension>,
        params: CodeParams,
        h: Mat<ExtElem>,
        f_basis: Vec<ExtElem>,
    ) -> Result<Self> {
        params.validate()?;
        let (n, r) = (params.n, params.redundancy());
        if h.rows() != r || h.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "H is {}x{}, expected {r}x{n}",
                h.rows(),
                h.cols()
            )));
        }
        if f_basis.len() != params.lambda || f_basis.first() != Some(&ext.one()) {
            return Err(Error::NoSuitableBasis);
        }
        let f_inv = f_basis.iter().map(|f| ext.try_inv(f)).collect::<Result<Vec<_>>>()?;
        let fb = element_basis(&ext, &f_basis)?;
        let h_ext = build_h_ext(&ext, &h, &fb)?;
        let square = square_property_check(&ext, &ext.support(&f_basis))?;
        let encoder = make_encoder(&ext, &h)?;
        let unique = residue_rank(ext.base(), &h_ext) == n;
        let h_ext_cols = if unique { FreeBasis::new(ext.base(), h_ext.transpose()) } else { None };
        let flags = CodeFlags {
            unique_decoding: unique && h_ext_cols.is_some(),
            maximal_row_span: rows_span_f(&ext, &h_ext, params),
            unity: h_ext.entries().iter().all(|x| ext.base().is_zero(x) || ext.base().is_unit(x)),
            square_property: square.has_square_property
                && square.suitable_basis.as_deref() == Some(&f_basis[..]),
        };
        Ok(LrpcCode { ext, params, h, f_basis, f_inv, h_ext, h_ext_cols, flags, square, encoder })
    }

    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn h(&self) -> &Mat<ExtElem> {
        &self.h
    }

    pub fn h_ext(&self) -> &Mat<RingElem> {
        &self.h_ext
    }

    pub fn f_basis(&self) -> &[ExtElem] {
        &self.f_basis
    }

    pub fn f_module(&self) -> Submodule {
        self.ext.support(&self.f_basis)
    }

    pub fn flags(&self) -> CodeFlags {
        self.flags
    }

    pub fn square_report(&self) -> &SquarePropertyReport {
        &self.square
    }

    /// `msg * G` for the systematic generator `G`.
    pub fn encode(&self, msg: &[ExtElem]) -> Result<Vec<ExtElem>> {
        let (n, k, r) = (self.params.n, self.params.k, self.params.redundancy());
        if msg.len() != k {
            return Err(Error::DimensionMismatch(format!("message of length {} for k={k}", msg.len())));
        }
        let s = &*self.ext;
        let mut c = vec![s.zero(); n];
        for i in 0..r {
            let mut acc = s.zero();
            for (j, m) in msg.iter().enumerate() {
                acc = s.add(&acc, &s.mul(&self.encoder.x[(i, j)], m));
            }
            c[self.encoder.col_perm[i]] = acc;
        }
        for (j, m) in msg.iter().enumerate() {
            c[self.encoder.col_perm[r + j]] = m.clone();
        }
        Ok(c)
    }

    pub fn random_codeword<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<ExtElem> {
        let msg: Vec<ExtElem> = (0..self.params.k).map(|_| self.ext.random(rng)).collect();
        self.encode(&msg).expect("message length matches k")
    }

    /// `r * H^T`.
    pub fn syndrome(&self, r: &[ExtElem]) -> Vec<ExtElem> {
        let s = &*self.ext;
        (0..self.h.rows())
            .map(|i| {
                let mut acc = s.zero();
                for (j, x) in r.iter().enumerate() {
                    if !s.is_zero(x) {
                        acc = s.add(&acc, &s.mul(x, &self.h[(i, j)]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_codeword(&self, c: &[ExtElem]) -> bool {
        c.len() == self.params.n && self.syndrome(c).iter().all(|x| self.ext.is_zero(x))
    }

    /// The unique error with support `⟨basis⟩` and syndrome `s`.
    pub fn erasure_decode(&self, basis: &[ExtElem], s: &[ExtElem]) -> Result<Vec<ExtElem>> {
        let ext = &*self.ext;
        let ring = ext.base();
        let (n, lambda) = (self.params.n, self.params.lambda);
        let t = basis.len();
        let cols = self
            .h_ext_cols
            .as_ref()
            .ok_or_else(|| Error::RankDeficient("H_ext columns are not independent".into()))?;
        let products: Vec<ExtElem> =
            basis.iter().flat_map(|e| self.f_basis.iter().map(move |f| ext.mul(e, f))).collect();
        let prod_basis = element_basis(ext, &products)
            .map_err(|_| Error::RankDeficient(format!("support times F is not free of rank {}", lambda * t)))?;
        // B[(i, l), u] = coefficient of ε_u f_l in s_i
        let mut b = Mat::zeros(ring, s.len() * lambda, t);
        for (i, si) in s.iter().enumerate() {
            let c = prod_basis.coords(ring, &ext.vec_rep(si)).ok_or(Error::NoSolution)?;
            for u in 0..t {
                for l in 0..lambda {
                    b[(i * lambda + l, u)] = c[u * lambda + l];
                }
            }
        }
        // H_ext E' = B, column by column
        let mut e = vec![ext.zero(); n];
        for u in 0..t {
            let col = cols.coords(ring, &b.col(u)).ok_or(Error::NoSolution)?;
            for (i, c) in col.iter().enumerate() {
                if !ring.is_zero(c) {
                    e[i] = ext.add(&e[i], &ext.scale(&basis[u], c));
                }
            }
        }
        Ok(e)
    }

    /// Decodes `r = c + e`, returning `c`.
    pub fn decode(&self, r: &[ExtElem]) -> std::result::Result<Vec<ExtElem>, DecodingFailure> {
        self.decode_with_state(r).0
    }

    pub fn decode_with_state(
        &self,
        r: &[ExtElem],
    ) -> (std::result::Result<Vec<ExtElem>, DecodingFailure>, DecoderState) {
        let mut st = DecoderState::default();
        let res = self.run_decoder(r, &mut st);
        (res, st)
    }

    fn run_decoder(
        &self,
        r: &[ExtElem],
        st: &mut DecoderState,
    ) -> std::result::Result<Vec<ExtElem>, DecodingFailure> {
        let ext = &*self.ext;
        let fail = |line| Err(DecodingFailure { line });
        st.syndrome = self.syndrome(r);
        if st.syndrome.iter().all(|x| ext.is_zero(x)) {
            return Ok(r.to_vec());
        }
        let support = ext.support(&st.syndrome);
        let (nu, free) = support.free_module_test();
        st.support = Some(support.clone());
        if !free {
            return fail(FailureLine::Line5);
        }
        st.nu = nu;
        let lambda = self.params.lambda;
        if nu % lambda != 0 {
            return fail(FailureLine::Line8);
        }
        st.t_prime = nu / lambda;
        let syn_elems = ext.elements_of(&support).expect("support lives in S");
        st.scaled = self
            .f_inv
            .iter()
            .map(|fi| ext.support(&syn_elems.iter().map(|s| ext.mul(fi, s)).collect::<Vec<_>>()))
            .collect();
        let mut cand = st.scaled[0].clone();
        for si in &st.scaled[1..] {
            cand = cand.intersect_with_free(si).expect("scaled supports are free");
        }
        st.candidate = Some(cand.clone());
        let Ok(basis) = cand.free_basis() else {
            return fail(FailureLine::Line14);
        };
        let eps: Vec<ExtElem> =
            basis.basis().row_vecs().iter().map(|v| ext.from_vec(v).unwrap()).collect();
        if eps.len() != st.t_prime {
            return fail(FailureLine::Line16);
        }
        let products: Vec<ExtElem> =
            eps.iter().flat_map(|e| self.f_basis.iter().map(move |f| ext.mul(e, f))).collect();
        if ext.support(&products).free_rank() != nu {
            return fail(FailureLine::Line16);
        }
        let Ok(e) = self.erasure_decode(&eps, &st.syndrome) else {
            return fail(FailureLine::Line18);
        };
        if self.syndrome(&e) != st.syndrome {
            return fail(FailureLine::Line18);
        }
        let c: Vec<ExtElem> = r.iter().zip(&e).map(|(a, b)| ext.sub(a, b)).collect();
        st.error = Some(e);
        Ok(c)
    }

    /// `frk(support(s)) = λt`, for the syndrome `s` of an error of support rank `t`.
    pub fn syndrome_condition(&self, s: &[ExtElem], t: usize) -> bool {
        self.ext.support(s).free_rank() == self.params.lambda * t
    }

    /// `∩ f_i^{-1} support(s)` is free of rank `t`, computed by generic
    /// kernel intersections (independent of the decoder's routine).
    pub fn intersection_condition(&self, s: &[ExtElem], t: usize) -> bool {
        let ext = &*self.ext;
        let scaled: Vec<Submodule> = self
            .f_inv
            .iter()
            .map(|fi| ext.support(&s.iter().map(|x| ext.mul(fi, x)).collect::<Vec<_>>()))
            .collect();
        let mut acc = scaled[0].clone();
        for m in &scaled[1..] {
            acc = acc.intersect(m).expect("same ambient");
        }
        acc.free_module_test() == (t, true)
    }

    /// `frk(E F) = λt` for the support `E` of rank `t`.
    pub fn product_condition(&self, support: &Submodule, t: usize) -> bool {
        let ext = &*self.ext;
        let es = ext.elements_of(support).expect("support lives in S");
        let prods: Vec<ExtElem> =
            es.iter().flat_map(|e| self.f_basis.iter().map(move |f| ext.mul(e, f))).collect();
        ext.support(&prods).free_rank() == self.params.lambda * t
    }

    pub fn to_json(&self) -> String {
        let coords = |x: &ExtElem| -> Vec<Vec<u32>> {
            x.coords().iter().map(|c| self.ext.base().to_coords(c)).collect()
        };
        let file = CodeFile {
            format: FORMAT.into(),
            ring: self.ext.base().spec(),
            ext: self.ext.spec(),
            params: self.params,
            f_basis: self.f_basis.iter().map(coords).collect(),
            h: self.h.row_vecs().iter().map(|row| row.iter().map(coords).collect()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CodeFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if file.format != FORMAT {
            return Err(Error::Format(format!("unknown format {:?}", file.format)));
        }
        let ring = Arc::new(crate::spec::parse_local_ring(&file.ring)?);
        let ext = Arc::new(crate::spec::parse_extension(ring, &file.ext)?);
        let elem = |c: &Vec<Vec<u32>>| -> Result<ExtElem> {
            if c.len() != ext.m() {
                return Err(Error::Format("element with wrong number of coordinates".into()));
            }
            let v: Vec<RingElem> = c
                .iter()
                .map(|x| ext.base().from_coords(&x.iter().map(|&v| v as i64).collect::<Vec<_>>()))
                .collect();
            ext.from_vec(&v)
        };
        let f_basis = file.f_basis.iter().map(elem).collect::<Result<Vec<_>>>()?;
        let rows = file
            .h
            .iter()
            .map(|row| row.iter().map(elem).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let h = Mat::from_rows(rows, file.params.n);
        Self::from_parts(ext, file.params, h, f_basis)
    }
}

impl fmt::Display for LrpcCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params;
        write!(f, "LRPC[n={}, k={}, λ={}] over {}", p.n, p.k, p.lambda, self.ext)
    }
}

const FORMAT: &str = "lrpc-ring/1";

#[derive(Serialize, Deserialize)]
struct CodeFile {
    format: String,
    ring: String,
    ext: String,
    params: CodeParams,
    f_basis: Vec<Vec<Vec<u32>>>,
    h: Vec<Vec<Vec<Vec<u32>>>>,
}

/// `H_ext`: row `i*λ + l`, column `j` holds the `f_l`-coordinate of `h_ij`.
pub fn build_h_ext(ext: &Extension, h: &Mat<ExtElem>, f: &FreeBasis) -> Result<Mat<RingElem>> {
    let ring = ext.base();
    let lambda = f.rank();
    let mut out = Mat::zeros(ring, h.rows() * lambda, h.cols());
    for i in 0..h.rows() {
        for j in 0..h.cols() {
            let c = f.coords(ring, &ext.vec_rep(&h[(i, j)])).ok_or(Error::NotInF)?;
            for (l, x) in c.into_iter().enumerate() {
                out[(i * lambda + l, j)] = x;
            }
        }
    }
    Ok(out)
}

fn rows_span_f(ext: &Extension, h_ext: &Mat<RingElem>, params: CodeParams) -> bool {
    let lambda = params.lambda;
    (0..params.redundancy()).all(|i| {
        let rows: Vec<usize> = (i * lambda..(i + 1) * lambda).collect();
        residue_rank(ext.base(), &h_ext.select_rows(&rows)) == lambda
    })
}

fn make_encoder(ext: &Extension, h: &Mat<ExtElem>) -> Result<Encoder> {
    let r = h.rows();
    let n = h.cols();
    let fac = unit_pivot_factor(ext, h);
    if fac.rank != r {
        return Err(Error::NoInvertibleMinor);
    }
    // T = [T1 | T2], T1 upper uni-triangular: solve T1 X = -T2 by back substitution
    let k = n - r;
    let mut x = Mat::zeros(ext, r, k);
    for j in 0..k {
        for i in (0..r).rev() {
            let mut acc = ext.neg(&fac.t[(i, r + j)]);
            for l in i + 1..r {
                acc = ext.sub(&acc, &ext.mul(&fac.t[(i, l)], &x[(l, j)]));
            }
            x[(i, j)] = acc;
        }
    }
    Ok(Encoder { x, col_perm: fac.col_perm })
}

/// Draws a code whose parity-check matrix has the unique-decoding,
/// maximal-row-span and unity properties, with `F = ⟨1, f_2, ..., f_λ⟩`
/// having the square property.
pub fn generate_code<G: Rng + ?Sized>(
    ext: Arc<Extension>,
    params: CodeParams,
    rng: &mut G,
) -> Result<LrpcCode> {
    params.validate()?;
    let (n, r, lambda) = (params.n, params.redundancy(), params.lambda);
    if lambda > ext.m() {
        return Err(Error::InvalidParams(format!("lambda={lambda} exceeds m={}", ext.m())));
    }
    let ring = ext.base();
    for _ in 0..GENERATION_ATTEMPTS {
        let mut f_basis = vec![ext.one()];
        f_basis.extend((1..lambda).map(|_| ext.random(rng)));
        let f_mod = ext.support(&f_basis);
        if f_mod.free_rank() != lambda {
            continue;
        }
        let sq = square_property_check(&ext, &f_mod)?;
        if !sq.has_square_property {
            continue;
        }
        // rows of coefficients in R* ∪ {0} whose residues span F_q^λ
        let mut coeff_rows: Vec<Vec<Vec<RingElem>>> = Vec::with_capacity(r);
        for _ in 0..r {
            let row = (0..GENERATION_ATTEMPTS).find_map(|_| {
                let row: Vec<Vec<RingElem>> = (0..n)
                    .map(|_| (0..lambda).map(|_| ring.random_unit_or_zero(rng)).collect())
                    .collect();
                let m = Mat::from_rows(row.clone(), lambda);
                (residue_rank(ring, &m) == lambda).then_some(row)
            });
            match row {
                Some(row) => coeff_rows.push(row),
                None => break,
            }
        }
        if coeff_rows.len() != r {
            continue;
        }
        let h = Mat::from_fn(r, n, |i, j| {
            let mut acc = ext.zero();
            for (l, f) in f_basis.iter().enumerate() {
                acc = ext.add(&acc, &ext.scale(f, &coeff_rows[i][j][l]));
            }
            acc
        });
        if unit_pivot_factor(&*ext, &h).rank != r {
            continue;
        }
        let code = match LrpcCode::from_parts(ext.clone(), params, h, f_basis) {
            Ok(c) => c,
            Err(Error::NoInvertibleMinor) => continue,
            Err(e) => return Err(e),
        };
        if code.flags.all() {
            return Ok(code);
        }
    }
    Err(Error::GenerationFailed(format!("no admissible code in {GENERATION_ATTEMPTS} attempts")))
}

/// An error of length `n` whose support is a uniformly random free module of rank `t`.
///
/// Returns the error together with its support.
pub fn sample_error<G: Rng + ?Sized>(
    ext: &Extension,
    n: usize,
    t: usize,
    rng: &mut G,
) -> Result<(Vec<ExtElem>, Submodule)> {
    if t > n.min(ext.m()) {
        return Err(Error::BadRank { rank: t, ambient: n.min(ext.m()) });
    }
    let ring = ext.base_arc();
    let support = sample_free_submodule(ring, t, ext.m(), rng)?;
    let eps = ext.elements_of(&support)?;
    for _ in 0..ERROR_COEFF_ATTEMPTS {
        let c = Mat::from_fn(n, t, |_, _| ring.random(rng));
        if residue_rank(ring, &c) != t {
            continue;
        }
        let e = (0..n)
            .map(|i| {
                let mut acc = ext.zero();
                for (u, eu) in eps.iter().enumerate() {
                    acc = ext.add(&acc, &ext.scale(eu, &c[(i, u)]));
                }
                acc
            })
            .collect();
        return Ok((e, support));
    }
    Err(Error::GenerationFailed(format!(
        "no full-rank error coefficients in {ERROR_COEFF_ATTEMPTS} attempts"
    )))
}
