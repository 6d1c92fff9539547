//! F_q-linear subspaces of F_{q^m} and sampling of full-rank tuples.
//!
//! A `Subspace` stores its canonical basis: the reduced row echelon form of
//! the coordinate rows. Two subspaces are equal as sets iff their canonical
//! bases are equal componentwise; equality ignores the cached subfield tag.

use crate::error::{Error, Result};
use crate::gfield::{Elt, FieldCtx, Fq};
use crate::linalg::FqMat;
use rand::Rng;

/// Default cap on any enumeration of subspace elements.
pub const ENUM_GUARD: u128 = 1 << 20;

#[derive(Clone, Eq, Debug)]
pub struct Subspace {
    basis: Vec<Elt>,
    /// When `Some(a)`, the subspace is additionally F_{q^a}-linear (closed
    /// under multiplication by the subfield F_{q^a}); recorded by the
    /// constructor that guarantees it, never re-detected.
    pub subfield_degree: Option<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

/// Tuple of F_q-independent elements; sampled uniformly from the set of all
/// full-rank tuples of its length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OmegaVector {
    pub entries: Vec<Elt>,
}

impl Subspace {
    /// Span of arbitrary generators; dependent and zero generators collapse.
    pub fn span(ctx: &FieldCtx, gens: &[Elt]) -> Subspace {
        let m = ctx.m();
        let mut mat = FqMat::zero(gens.len(), m);
        for (i, g) in gens.iter().enumerate() {
            for j in 0..m {
                mat.set(i, j, g.coords()[j]);
            }
        }
        let pivots = mat.rref(ctx);
        let basis = (0..pivots.len())
            .map(|i| ctx.elt_from_coords(mat.row(i).to_vec()).unwrap())
            .collect();
        Subspace { basis, subfield_degree: None }
    }

    /// Span that must not collapse: generators are required independent.
    pub fn from_basis(ctx: &FieldCtx, gens: &[Elt]) -> Result<Subspace> {
        let s = Subspace::span(ctx, gens);
        if s.dim() != gens.len() {
            return Err(Error::BadBasis("generators are dependent".into()));
        }
        Ok(s)
    }

    pub fn zero() -> Subspace {
        Subspace { basis: Vec::new(), subfield_degree: None }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonical (RREF) basis rows.
    pub fn basis(&self) -> &[Elt] {
        &self.basis
    }

    pub fn size(&self, ctx: &FieldCtx) -> u128 {
        (ctx.q() as u128).pow(self.dim() as u32)
    }

    pub fn contains(&self, ctx: &FieldCtx, x: &Elt) -> bool {
        // reduce x against the echelon basis
        let mut rows: Vec<Elt> = self.basis.clone();
        rows.push(x.clone());
        ctx.rank_q(&rows) == self.dim()
    }

    /// All elements, in lexicographic order of basis coefficients (the first
    /// basis vector's coefficient is the most significant digit).
    pub fn enumerate(&self, ctx: &FieldCtx, guard: u128) -> Result<Vec<Elt>> {
        let n = self.size(ctx);
        if n > guard {
            return Err(Error::TooLarge(format!("enumeration of {n} elements exceeds guard {guard}")));
        }
        let q = ctx.q() as u128;
        let d = self.dim();
        let mut out = Vec::with_capacity(n as usize);
        for v in 0..n {
            let mut acc = ctx.zero();
            let mut v = v;
            for i in (0..d).rev() {
                let digit = (v % q) as u16;
                v /= q;
                if digit != 0 {
                    acc = ctx.add(&acc, &ctx.smul(&self.basis[i], Fq(digit)));
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Orthogonal complement under the trace form tr(xy).
    pub fn orthogonal_complement(&self, ctx: &FieldCtx) -> Subspace {
        let m = ctx.m();
        // x in U^perp iff for all basis u: sum_j x_j tr(x^j * u) = 0
        let mut cond = FqMat::zero(self.dim(), m);
        for (i, u) in self.basis.iter().enumerate() {
            for j in 0..m {
                let t = ctx.trace(&ctx.mul(&ctx.poly_basis_elem(j), u));
                cond.set(i, j, t);
            }
        }
        let ker = cond.kernel(ctx);
        let gens: Vec<Elt> = ker.into_iter().map(|v| ctx.elt_from_coords(v).unwrap()).collect();
        Subspace::span(ctx, &gens)
    }

    /// Image under the k-fold Frobenius; a subspace of the same dimension.
    pub fn frobenius_image(&self, ctx: &FieldCtx, k: usize) -> Subspace {
        let gens: Vec<Elt> = self.basis.iter().map(|b| ctx.frobenius(b, k)).collect();
        Subspace::span(ctx, &gens)
    }
}

pub fn random_elt<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> Elt {
    let coords: Vec<Fq> = (0..ctx.m()).map(|_| Fq(rng.random_range(0..ctx.q()) as u16)).collect();
    ctx.elt_from_coords(coords).unwrap()
}

/// Uniform sample from the set of rank-`count` tuples, by rejection.
pub fn sample_omega<R: Rng>(ctx: &FieldCtx, count: usize, rng: &mut R) -> OmegaVector {
    assert!(count <= ctx.m(), "cannot have more than m independent elements");
    loop {
        let entries: Vec<Elt> = (0..count).map(|_| random_elt(ctx, rng)).collect();
        if ctx.rank_q(&entries) == count {
            return OmegaVector { entries };
        }
    }
}

impl OmegaVector {
    pub fn span(&self, ctx: &FieldCtx) -> Subspace {
        Subspace::span(ctx, &self.entries)
    }
}

/// Number of rank-`count` tuples: prod_{j<count} (q^m - q^j).
pub fn omega_size(ctx: &FieldCtx, count: usize) -> u128 {
    let n = ctx.field_size();
    (0..count).map(|j| n - (ctx.q() as u128).pow(j as u32)).product()
}

/// The subfield F_{q^a} (requires a | m) as a subspace: the fixed space of
/// the a-fold Frobenius.
pub fn subfield(ctx: &FieldCtx, a: usize) -> Result<Subspace> {
    if a == 0 || ctx.m() % a != 0 {
        return Err(Error::BadParams(format!("subfield degree {a} does not divide m = {}", ctx.m())));
    }
    let m = ctx.m();
    let mut mat = FqMat::zero(m, m);
    for j in 0..m {
        let img = ctx.frobenius(&ctx.poly_basis_elem(j), a);
        for i in 0..m {
            let v = img.coords()[i];
            mat.set(i, j, if i == j { ctx.fq_sub(v, Fq(1)) } else { v });
        }
    }
    let ker = mat.kernel(ctx);
    let gens: Vec<Elt> = ker.into_iter().map(|v| ctx.elt_from_coords(v).unwrap()).collect();
    let mut s = Subspace::span(ctx, &gens);
    debug_assert_eq!(s.dim(), a);
    s.subfield_degree = Some(a);
    Ok(s)
}

/// Random subspace that is F_{q^a}-linear of dimension `dim_over` over the
/// subfield (so of F_q-dimension a * dim_over).
pub fn subfield_subspace<R: Rng>(ctx: &FieldCtx, a: usize, dim_over: usize, rng: &mut R) -> Result<Subspace> {
    let sub = subfield(ctx, a)?;
    if a * dim_over > ctx.m() {
        return Err(Error::BadParams("subspace dimension exceeds m".into()));
    }
    let mut gens: Vec<Elt> = Vec::new();
    let mut picked = 0;
    while picked < dim_over {
        let cand = random_elt(ctx, rng);
        let mut trial = gens.clone();
        for b in sub.basis() {
            trial.push(ctx.mul(b, &cand));
        }
        if ctx.rank_q(&trial) == (picked + 1) * a {
            gens = trial;
            picked += 1;
        }
    }
    let mut s = Subspace::span(ctx, &gens);
    debug_assert_eq!(s.dim(), a * dim_over);
    s.subfield_degree = Some(a);
    Ok(s)
}

/// Every subspace of the given dimension, by canonicalized enumeration of
/// generator tuples. Desk-scale only; the guard bounds the tuple count.
pub fn all_subspaces(ctx: &FieldCtx, dim: usize, guard: u128) -> Result<Vec<Subspace>> {
    let n = ctx.field_size();
    let tuples = n.pow(dim as u32);
    if tuples > guard {
        return Err(Error::TooLarge(format!("{tuples} generator tuples exceed guard {guard}")));
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut idx = vec![0u128; dim];
    loop {
        let gens: Vec<Elt> = idx.iter().map(|&v| ctx.elt_from_value(v)).collect();
        if ctx.rank_q(&gens) == dim {
            let s = Subspace::span(ctx, &gens);
            let key: Vec<u128> = s.basis().iter().map(|b| ctx.value(b)).collect();
            if seen.insert(key) {
                out.push(s);
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == dim {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < n {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
