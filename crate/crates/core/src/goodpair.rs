//! Goodness of a pair (U, V): U the evaluation subspace, V the symbol
//! subspace. The certificate is a rank condition on a block matrix over F_q;
//! a good pair yields a repair scheme whose every helper sends dim(V)
//! symbols, and weak goodness (column containment) is exactly solvability of
//! the scheme's linear systems.
//!
//! Block layout of the matrix M, for U-basis u_1..u_d and S = B1 u B2 with
//! B1 a basis of V and B2 its completion: block row i, block column l
//! (l = 0..s) holds the B2-rows of the multiplication matrix of u_i^(q^l) in
//! basis S. M1 is block column 0, M2 the rest; M2 having full row rank plus
//! the rate inequality ms >= d(m-r) is goodness.

use crate::error::{Error, Result};
use crate::gfield::{Basis, Elt, FieldCtx, LinPoly};
use crate::linalg::{elt_kernel, elt_rank, FqMat};
use crate::subspace::{sample_omega, OmegaVector, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub struct SchemeParams {
    pub q: u64,
    pub m: usize,
    pub d: usize,
    pub s: usize,
    pub r: usize,
}

impl SchemeParams {
    pub fn validate(&self, ctx: &FieldCtx) -> Result<()> {
        if self.q != ctx.q() || self.m != ctx.m() {
            return Err(Error::BadParams("params disagree with the field".into()));
        }
        if !(1 <= self.s && self.s < self.d && self.d <= self.m) {
            return Err(Error::BadParams("need 1 <= s < d <= m".into()));
        }
        if !(1 <= self.r && self.r <= self.m) {
            return Err(Error::BadParams("need 1 <= r <= m".into()));
        }
        Ok(())
    }

    /// The counting inequality m*s >= d*(m-r) that full rank requires.
    pub fn rate_ok(&self) -> bool {
        self.m * self.s >= self.d * (self.m - self.r)
    }
}

pub struct GoodnessMatrix {
    pub mat: FqMat,
    pub d: usize,
    pub r: usize,
    pub s: usize,
    pub m: usize,
    /// B1 (basis of V) followed by the completion B2.
    pub s_basis: Basis,
    pub u_basis: Vec<Elt>,
}

impl GoodnessMatrix {
    /// First m columns: the block for l = 0.
    pub fn m1(&self) -> FqMat {
        let idx: Vec<usize> = (0..self.m).collect();
        self.mat.select_cols(&idx)
    }
    /// Remaining m*s columns: blocks l = 1..s.
    pub fn m2(&self) -> FqMat {
        let idx: Vec<usize> = (self.m..self.m * (self.s + 1)).collect();
        self.mat.select_cols(&idx)
    }

    pub fn report(&self, ctx: &FieldCtx) -> GoodnessReport {
        let m2 = self.m2();
        let rank_m2 = m2.rank(ctx);
        let rank_joint = m2.hstack(&self.m1()).rank(ctx);
        let full = self.d * (self.m - self.r);
        let rate_ok = self.m * self.s >= full;
        GoodnessReport {
            rank_m2,
            rank_joint,
            rate_ok,
            good: rank_m2 == full && rate_ok,
            weakly_good: rank_m2 == rank_joint,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GoodnessReport {
    pub rank_m2: usize,
    /// Rank of [M2 | M1]; equal to rank_m2 iff the columns of M1 already lie
    /// in the column space of M2.
    pub rank_joint: usize,
    pub rate_ok: bool,
    pub good: bool,
    pub weakly_good: bool,
}

pub fn goodness_matrix(ctx: &FieldCtx, u: &Subspace, v: &Subspace, s: usize) -> Result<GoodnessMatrix> {
    let b2 = ctx.complete_basis(v.basis())?;
    goodness_matrix_with_completion(ctx, u, v, s, &b2)
}

/// Same, with the completion of V's basis to S supplied by the caller. The
/// goodness verdict does not depend on the choice (the blocks change by a
/// fixed row operation).
pub fn goodness_matrix_with_completion(
    ctx: &FieldCtx,
    u: &Subspace,
    v: &Subspace,
    s: usize,
    b2: &[Elt],
) -> Result<GoodnessMatrix> {
    let m = ctx.m();
    let d = u.dim();
    let r = v.dim();
    if s < 1 {
        return Err(Error::BadParams("need s >= 1".into()));
    }
    if d == 0 {
        return Err(Error::BadParams("U must not be trivial".into()));
    }
    let mut elems = v.basis().to_vec();
    elems.extend_from_slice(b2);
    let s_basis = ctx.make_basis(elems)?;
    let b2_ref: Vec<Elt> = s_basis.elems[r..].to_vec();
    let mut mat = FqMat::zero(d * (m - r), m * (s + 1));
    for (i, ui) in u.basis().iter().enumerate() {
        for l in 0..=s {
            let w = ctx.frobenius(ui, l);
            let blk = ctx.row_block(&w, &b2_ref, &s_basis)?;
            for bi in 0..m - r {
                for bj in 0..m {
                    mat.set(i * (m - r) + bi, l * m + bj, blk.get(bi, bj));
                }
            }
        }
    }
    Ok(GoodnessMatrix { mat, d, r, s, m, s_basis, u_basis: u.basis().to_vec() })
}

pub fn assess(ctx: &FieldCtx, u: &Subspace, v: &Subspace, s: usize) -> Result<GoodnessReport> {
    Ok(goodness_matrix(ctx, u, v, s)?.report(ctx))
}

pub fn is_good(ctx: &FieldCtx, u: &Subspace, v: &Subspace, s: usize) -> Result<bool> {
    Ok(assess(ctx, u, v, s)?.good)
}

pub fn is_weakly_good(ctx: &FieldCtx, u: &Subspace, v: &Subspace, s: usize) -> Result<bool> {
    Ok(assess(ctx, u, v, s)?.weakly_good)
}

/// Matrix with rows x_i^(q^t) for t = 1..s, over F_{q^m}. Its rank over
/// F_{q^m} equals min(s, rank over F_q of the x_i).
pub fn t_matrix(ctx: &FieldCtx, xs: &[Elt], s: usize) -> Vec<Vec<Elt>> {
    (1..=s).map(|t| xs.iter().map(|x| ctx.frobenius(x, t)).collect()).collect()
}

pub fn t_rank(ctx: &FieldCtx, xs: &[Elt], s: usize) -> usize {
    elt_rank(ctx, &t_matrix(ctx, xs, s))
}

// --- feasibility and the sampling bound ---

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FeasibilityClass {
    /// q >= 3 and ms >= d(m-r).
    Q3Rate,
    /// q = 2, r >= 2 and ms >= d(m-r) + 1.
    Q2Slack,
    /// q = 2, ms = d(m-r) and U is F_{q^a}-linear for a common factor
    /// a >= 2 of m and d.
    Q2Subfield,
    Infeasible,
}

/// Classify parameters. `a` is the subfield linearity degree of the intended
/// U (1 when plain). Any common factor a >= 2 of m and d is accepted for the
/// equality case; the classical statement uses a = gcd(m, d) but the counting
/// argument only needs a common factor.
pub fn feasible(params: &SchemeParams, a: usize) -> FeasibilityClass {
    let lhs = params.m * params.s;
    let rhs = params.d * (params.m - params.r);
    if params.q >= 3 && lhs >= rhs {
        return FeasibilityClass::Q3Rate;
    }
    if params.q == 2 && params.r >= 2 && lhs > rhs {
        return FeasibilityClass::Q2Slack;
    }
    if params.q == 2 && lhs == rhs && a >= 2 && params.m % a == 0 && params.d % a == 0 {
        return FeasibilityClass::Q2Subfield;
    }
    FeasibilityClass::Infeasible
}

/// Lower bound on the probability that a uniform full-rank tuple spans a
/// good complement: 1 - q^(d(m-r)-ms)/(q^a-1) * (q-1)/(q-1-q^(-r)).
pub fn success_bound(params: &SchemeParams, a: usize) -> f64 {
    let q = params.q as f64;
    let expo = (params.d * (params.m - params.r)) as i32 - (params.m * params.s) as i32;
    let lead = q.powi(expo) / (q.powi(a as i32) - 1.0);
    1.0 - lead * (q - 1.0) / (q - 1.0 - q.powi(-(params.r as i32)))
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct Certificate {
    pub rank_m2: usize,
    pub weak_ok: bool,
}

#[derive(Clone, Debug)]
pub struct GoodPair {
    pub params: SchemeParams,
    pub u: Subspace,
    pub v: Subspace,
    pub cert: Certificate,
}

#[derive(Debug)]
pub enum SearchOutcome {
    Found { pair: GoodPair, trials_used: usize },
    /// All trials failed; carries the theoretical per-trial success bound.
    Exhausted { trials: usize, bound: f64 },
}

/// One splitmix64 step; maps (master seed, trial index) to the trial seed.
pub fn derive_seed(master: u64, idx: u64) -> u64 {
    let mut z = master.wrapping_add((idx.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Randomized search: per trial, draw a uniform full-rank (m-r)-tuple, let it
/// span the orthogonal complement of the candidate V, and test goodness.
/// Sequential and deterministic in the master seed; each trial has its own
/// derived generator so the schedule is stable under refactoring.
pub fn search_good_pair(
    ctx: &FieldCtx,
    u: &Subspace,
    params: &SchemeParams,
    trials: usize,
    master_seed: u64,
) -> Result<SearchOutcome> {
    params.validate(ctx)?;
    if u.dim() != params.d {
        return Err(Error::BadParams("U has the wrong dimension".into()));
    }
    let a = u.subfield_degree.unwrap_or(1);
    let class = feasible(params, a);
    if class == FeasibilityClass::Infeasible {
        return Err(Error::Infeasible(format!(
            "no feasibility class covers q={} m={} d={} s={} r={} (a={a})",
            params.q, params.m, params.d, params.s, params.r
        )));
    }
    for t in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(master_seed, t as u64));
        let om = sample_omega(ctx, params.m - params.r, &mut rng);
        let v = om.span(ctx).orthogonal_complement(ctx);
        let rep = assess(ctx, u, &v, params.s)?;
        if rep.good {
            let pair = GoodPair {
                params: *params,
                u: u.clone(),
                v,
                cert: Certificate { rank_m2: rep.rank_m2, weak_ok: rep.weakly_good },
            };
            return Ok(SearchOutcome::Found { pair, trials_used: t + 1 });
        }
    }
    Ok(SearchOutcome::Exhausted { trials, bound: success_bound(params, a) })
}

// --- duality ---

/// The dual pair (V^perp, (sigma^(s+1) U)^perp) without any goodness checks.
pub fn transform_pair_raw(ctx: &FieldCtx, u: &Subspace, v: &Subspace, s: usize) -> (Subspace, Subspace) {
    let u2 = v.orthogonal_complement(ctx);
    let v2 = u.frobenius_image(ctx, (s + 1) % ctx.m()).orthogonal_complement(ctx);
    (u2, v2)
}

/// Goodness-preserving involution on pairs: (U, V) of dimensions (d, r) maps
/// to dimensions (m-r, m-d) with the same s; applying it twice restores the
/// original dimensions.
pub fn duality_transform(ctx: &FieldCtx, pair: &GoodPair) -> Result<GoodPair> {
    let p = &pair.params;
    if p.r >= p.m - p.s {
        return Err(Error::BadParams("transform degenerates: r >= m - s".into()));
    }
    let rep = assess(ctx, &pair.u, &pair.v, p.s)?;
    if !rep.good {
        return Err(Error::BadParams("input pair is not good".into()));
    }
    let (u2, v2) = transform_pair_raw(ctx, &pair.u, &pair.v, p.s);
    let params2 = SchemeParams { q: p.q, m: p.m, d: p.m - p.r, s: p.s, r: p.m - p.d };
    let rep2 = assess(ctx, &u2, &v2, p.s)?;
    if !rep2.good {
        return Err(Error::Unsolvable("transform of a good pair failed the rank check".into()));
    }
    Ok(GoodPair {
        params: params2,
        u: u2,
        v: v2,
        cert: Certificate { rank_m2: rep2.rank_m2, weak_ok: rep2.weakly_good },
    })
}

/// Explicit good pair when (m-r) divides m: U spanned by the first d powers
/// of the canonical generator, V the complement of the subfield F_{q^(m-r)}.
pub fn subfield_complement_pair(ctx: &FieldCtx, d: usize, r: usize, s: usize) -> Result<GoodPair> {
    let m = ctx.m();
    let params = SchemeParams { q: ctx.q(), m, d, s, r };
    params.validate(ctx)?;
    if d >= m {
        return Err(Error::BadParams("need d < m".into()));
    }
    if r == m || m % (m - r) != 0 {
        return Err(Error::BadParams("need (m - r) dividing m".into()));
    }
    if !params.rate_ok() {
        return Err(Error::BadParams("rate inequality ms >= d(m-r) fails".into()));
    }
    let alpha = ctx.alpha();
    let mut pow = ctx.one();
    let mut gens = Vec::with_capacity(d);
    for _ in 0..d {
        gens.push(pow.clone());
        pow = ctx.mul(&pow, &alpha);
    }
    let u = Subspace::from_basis(ctx, &gens)?;
    let v = crate::subspace::subfield(ctx, m - r)?.orthogonal_complement(ctx);
    let rep = assess(ctx, &u, &v, s)?;
    if !rep.good {
        return Err(Error::Unsolvable("power-basis pair failed the rank check".into()));
    }
    Ok(GoodPair { params, u, v, cert: Certificate { rank_m2: rep.rank_m2, weak_ok: rep.weakly_good } })
}

// --- linearized polynomials attached to subspaces ---

/// Monic linearized polynomial prod_{w in W} (X - w), of q-degree dim(W),
/// vanishing exactly on W. Built over the basis, one dimension at a time:
/// L' = L^q - L(w)^(q-1) L. Separable, so the X-coefficient is nonzero.
pub fn annihilator_poly(ctx: &FieldCtx, w: &Subspace) -> Result<LinPoly> {
    let mut coeffs = vec![ctx.one()]; // the identity map X
    for gen in w.basis() {
        let cur = LinPoly { coeffs: coeffs.clone() };
        let lw = cur.eval(ctx, gen);
        if ctx.is_zero(&lw) {
            return Err(Error::BadBasis("generator already annihilated; basis dependent".into()));
        }
        let factor = ctx.pow(&lw, ctx.q() as u128 - 1);
        let mut next = vec![ctx.zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = ctx.frobenius(c, 1); // L^q shifts every term up
            next[i] = ctx.sub(&next[i], &ctx.mul(&factor, c));
        }
        coeffs = next;
    }
    Ok(LinPoly { coeffs })
}

/// Linearized polynomial of q-degree s = m - dim(V) with image exactly V and
/// nonzero X-coefficient. Constructed from the annihilator P of
/// (sigma^(m-s) V)^perp by twisting: coefficient t is p_(s-t)^(q^t). The
/// twist is the adjoint followed by sigma^s, which carries ker(P)^perp onto V.
pub fn image_poly(ctx: &FieldCtx, v: &Subspace) -> Result<LinPoly> {
    let m = ctx.m();
    let s = m - v.dim();
    if s == 0 {
        return Ok(LinPoly { coeffs: vec![ctx.one()] });
    }
    let v0 = v.frobenius_image(ctx, m - s);
    let w = v0.orthogonal_complement(ctx);
    debug_assert_eq!(w.dim(), s);
    let p = annihilator_poly(ctx, &w)?;
    let coeffs: Vec<Elt> = (0..=s).map(|t| ctx.frobenius(&p.coeffs[s - t], t)).collect();
    debug_assert!(!ctx.is_zero(&coeffs[0]));
    Ok(LinPoly { coeffs })
}

// --- explicit non-weakly-good partner (exists whenever r < m - s) ---

#[derive(Clone, Debug)]
pub struct BadPairWitness {
    pub v: Subspace,
    /// Tuple in U^(m-r) (a basis prefix of U padded with zeros).
    pub w: Vec<Elt>,
    /// Basis of V^perp with T(w; s) * b' = 0 yet sum w_i b'_i != 0.
    pub b_prime: Vec<Elt>,
}

/// For any U of dimension d and any r < m - s, build a V such that (U, V) is
/// not even weakly good, together with the violating witness.
pub fn counterexample_pair(ctx: &FieldCtx, u: &Subspace, r: usize, s: usize) -> Result<BadPairWitness> {
    let m = ctx.m();
    let d = u.dim();
    if !(1 <= s && s < d && d < m) {
        return Err(Error::BadParams("need 1 <= s < d < m".into()));
    }
    if r >= m - s {
        return Err(Error::BadParams("need r < m - s".into()));
    }
    let tau = d.min(m - r);
    let w_head: Vec<Elt> = u.basis()[..tau].to_vec();
    // kernel of the (tau-1)-row power matrix is one-dimensional
    let t1 = t_matrix(ctx, &w_head, tau - 1);
    let ker = elt_kernel(ctx, &t1);
    if ker.len() != 1 {
        return Err(Error::Unsolvable("power matrix kernel is not one-dimensional".into()));
    }
    let b_head = ker.into_iter().next().unwrap();
    if ctx.rank_q(&b_head) != tau {
        return Err(Error::Unsolvable("kernel vector entries are dependent".into()));
    }
    // pad w with zeros, extend b' to m - r independent elements
    let mut w = w_head.clone();
    w.resize(m - r, ctx.zero());
    let mut b_prime = b_head;
    let mut rank = tau;
    for j in 0..m {
        if rank == m - r {
            break;
        }
        let cand = ctx.poly_basis_elem(j);
        b_prime.push(cand);
        let r2 = ctx.rank_q(&b_prime);
        if r2 > rank {
            rank = r2;
        } else {
            b_prime.pop();
        }
    }
    debug_assert_eq!(rank, m - r);
    // the witness inner product must be nonzero
    let mut ip = ctx.zero();
    for (wi, bi) in w.iter().zip(&b_prime) {
        ip = ctx.add(&ip, &ctx.mul(wi, bi));
    }
    if ctx.is_zero(&ip) {
        return Err(Error::Unsolvable("witness inner product vanished".into()));
    }
    let v = Subspace::span(ctx, &b_prime).orthogonal_complement(ctx);
    Ok(BadPairWitness { v, w, b_prime })
}

// --- exact bad-set census ---

#[derive(Clone, Debug)]
pub struct BadSetCensus {
    /// |Bad(U)|: full-rank tuples annihilated by the power matrix of some
    /// nonzero tuple over U.
    pub count: u64,
    pub witnesses: Vec<OmegaVector>,
}

/// Kernel dimension over F_{q^m} of the power matrix of the tuple: it is
/// len - min(s, rank_q of the tuple), so a tuple of rank <= s contributes no
/// full-rank kernel vectors at all.
pub fn bad_u_kernel(ctx: &FieldCtx, u_vec: &[Elt], s: usize) -> usize {
    u_vec.len() - t_rank(ctx, u_vec, s)
}

/// Exact census of Bad(U) for tuples of length m - r, by double enumeration:
/// tuples over U up to scaling by the subfield U is linear over, then the
/// full kernel of each power matrix. The guard bounds both enumerations.
pub fn bad_set(ctx: &FieldCtx, u: &Subspace, s: usize, r: usize, guard: u128, collect: bool) -> Result<BadSetCensus> {
    let m = ctx.m();
    let len = m - r;
    let a = u.subfield_degree.unwrap_or(1);
    let scalars: Vec<Elt> = crate::subspace::subfield(ctx, a)?
        .enumerate(ctx, guard)?
        .into_iter()
        .filter(|x| !ctx.is_zero(x))
        .collect();
    let elems = u.enumerate(ctx, guard)?;
    let tuples = (elems.len() as u128).pow(len as u32);
    if tuples > guard {
        return Err(Error::TooLarge(format!("{tuples} tuples exceed guard {guard}")));
    }
    let key_of = |t: &[Elt]| -> Vec<u128> { t.iter().map(|x| ctx.value(x)).collect() };
    let mut bad: std::collections::HashSet<Vec<u128>> = std::collections::HashSet::new();
    let mut kernel_work: u128 = 0;
    let mut idx = vec![0usize; len];
    'outer: loop {
        let tuple: Vec<Elt> = idx.iter().map(|&i| elems[i].clone()).collect();
        let nonzero = tuple.iter().any(|x| !ctx.is_zero(x));
        if nonzero {
            // process only the canonical representative of {beta * tuple}
            let my_key = key_of(&tuple);
            let canonical = scalars
                .iter()
                .map(|b| key_of(&tuple.iter().map(|x| ctx.mul(b, x)).collect::<Vec<_>>()))
                .min()
                .unwrap();
            if my_key == canonical {
                let tm = t_matrix(ctx, &tuple, s);
                let ker = elt_kernel(ctx, &tm);
                let kdim = ker.len();
                if kdim > 0 {
                    let combos = ctx.field_size().pow(kdim as u32);
                    kernel_work += combos;
                    if kernel_work > guard {
                        return Err(Error::TooLarge(format!("kernel enumeration exceeds guard {guard}")));
                    }
                    let mut cid = vec![0u128; kdim];
                    loop {
                        let mut vec = vec![ctx.zero(); len];
                        for (ki, &cv) in cid.iter().enumerate() {
                            if cv != 0 {
                                let c = ctx.elt_from_value(cv);
                                for j in 0..len {
                                    vec[j] = ctx.add(&vec[j], &ctx.mul(&c, &ker[ki][j]));
                                }
                            }
                        }
                        if ctx.rank_q(&vec) == len {
                            bad.insert(key_of(&vec));
                        }
                        let mut ci = 0;
                        loop {
                            if ci == kdim {
                                break;
                            }
                            cid[ci] += 1;
                            if cid[ci] < ctx.field_size() {
                                break;
                            }
                            cid[ci] = 0;
                            ci += 1;
                        }
                        if ci == kdim {
                            break;
                        }
                    }
                }
            }
        }
        let mut i = 0;
        loop {
            if i == len {
                break 'outer;
            }
            idx[i] += 1;
            if idx[i] < elems.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
    let witnesses = if collect {
        bad.iter()
            .map(|key| OmegaVector { entries: key.iter().map(|&v| ctx.elt_from_value(v)).collect() })
            .collect()
    } else {
        Vec::new()
    };
    Ok(BadSetCensus { count: bad.len() as u64, witnesses })
}

/// The counting bound |Bad(U)| < q^(d(m-r)-ms)/(q^a-1) * q^(m(m-r)).
pub fn bad_set_bound(params: &SchemeParams, a: usize) -> f64 {
    let q = params.q as f64;
    let expo = (params.d * (params.m - params.r)) as i32 - (params.m * params.s) as i32;
    q.powi(expo) / (q.powi(a as i32) - 1.0) * q.powi((params.m * (params.m - params.r)) as i32)
}
