//! Generalized Reed-Solomon codes over the extension field: evaluation of
//! polynomials of degree < k at distinct points, each coordinate scaled by a
//! column multiplier. The dual of such a code is again one, on the same
//! points, and the dual multipliers come from the classical formula
//! w_i = 1 / (v_i * prod_{j != i} (a_i - a_j)).

use crate::error::{Error, Result};
use crate::gfield::{Elt, FieldCtx};
use crate::subspace::Subspace;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct RsCode {
    pub eval_points: Vec<Elt>,
    pub k: usize,
    /// GRS column multipliers; all ones for a plain evaluation code.
    pub col_mults: Vec<Elt>,
}

impl RsCode {
    pub fn new(ctx: &FieldCtx, eval_points: Vec<Elt>, k: usize, col_mults: Option<Vec<Elt>>) -> Result<RsCode> {
        let n = eval_points.len();
        if k == 0 || k > n {
            return Err(Error::BadCode(format!("dimension {k} out of range for length {n}")));
        }
        let mut seen = std::collections::HashSet::new();
        for a in &eval_points {
            if !seen.insert(ctx.value(a)) {
                return Err(Error::BadCode("evaluation points must be distinct".into()));
            }
        }
        let col_mults = match col_mults {
            Some(v) => {
                if v.len() != n {
                    return Err(Error::BadCode("one column multiplier per point".into()));
                }
                if v.iter().any(|x| ctx.is_zero(x)) {
                    return Err(Error::BadCode("column multipliers must be nonzero".into()));
                }
                v
            }
            None => vec![ctx.one(); n],
        };
        Ok(RsCode { eval_points, k, col_mults })
    }

    pub fn n(&self) -> usize {
        self.eval_points.len()
    }

    /// Coefficients low to high, length k. Horner at each point, then the
    /// column multiplier.
    pub fn encode(&self, ctx: &FieldCtx, msg: &[Elt]) -> Result<Vec<Elt>> {
        if msg.len() != self.k {
            return Err(Error::BadCode(format!("message length {} != k = {}", msg.len(), self.k)));
        }
        Ok(self
            .eval_points
            .iter()
            .zip(&self.col_mults)
            .map(|(a, v)| ctx.mul(v, &poly_eval(ctx, msg, a)))
            .collect())
    }

    pub fn random_codeword<R: Rng>(&self, ctx: &FieldCtx, rng: &mut R) -> Vec<Elt> {
        let msg: Vec<Elt> = (0..self.k).map(|_| crate::subspace::random_elt(ctx, rng)).collect();
        self.encode(ctx, &msg).unwrap()
    }

    /// Multipliers of the dual code: GRS on the same points, dimension n - k.
    pub fn dual_scaling(&self, ctx: &FieldCtx) -> Result<Vec<Elt>> {
        let n = self.n();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut prod = self.col_mults[i].clone();
            for j in 0..n {
                if j != i {
                    let diff = ctx.sub(&self.eval_points[i], &self.eval_points[j]);
                    prod = ctx.mul(&prod, &diff);
                }
            }
            if ctx.is_zero(&prod) {
                return Err(Error::ZeroDivision);
            }
            out.push(ctx.inv_elt(&prod)?);
        }
        Ok(out)
    }

    pub fn dual_code(&self, ctx: &FieldCtx) -> Result<RsCode> {
        RsCode::new(ctx, self.eval_points.clone(), self.n() - self.k, Some(self.dual_scaling(ctx)?))
    }

    /// Orthogonality to every codeword: sum_i x_i v_i a_i^t = 0 for t < k.
    pub fn is_dual_codeword(&self, ctx: &FieldCtx, x: &[Elt]) -> Result<bool> {
        if x.len() != self.n() {
            return Err(Error::BadCode("length mismatch".into()));
        }
        let mut pows: Vec<Elt> = vec![ctx.one(); self.n()];
        for _t in 0..self.k {
            let mut acc = ctx.zero();
            for i in 0..self.n() {
                acc = ctx.add(&acc, &ctx.mul(&x[i], &ctx.mul(&self.col_mults[i], &pows[i])));
            }
            if !ctx.is_zero(&acc) {
                return Ok(false);
            }
            for i in 0..self.n() {
                pows[i] = ctx.mul(&pows[i], &self.eval_points[i]);
            }
        }
        Ok(true)
    }

    /// Membership: strip multipliers, interpolate on the first k points,
    /// check the fit extends to all of them.
    pub fn contains(&self, ctx: &FieldCtx, word: &[Elt]) -> Result<bool> {
        if word.len() != self.n() {
            return Err(Error::BadCode("length mismatch".into()));
        }
        let pts: Vec<(Elt, Elt)> = (0..self.k)
            .map(|i| {
                Ok((
                    self.eval_points[i].clone(),
                    ctx.div(&word[i], &self.col_mults[i])?,
                ))
            })
            .collect::<Result<_>>()?;
        let f = interpolate(ctx, &pts)?;
        for i in self.k..self.n() {
            let want = ctx.div(&word[i], &self.col_mults[i])?;
            if poly_eval(ctx, &f, &self.eval_points[i]) != want {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Recover the full codeword from >= k coordinates, given as
    /// (position, value). Uses the first k and checks the remainder.
    pub fn codeword_from_positions(&self, ctx: &FieldCtx, known: &[(usize, Elt)]) -> Result<Vec<Elt>> {
        if known.len() < self.k {
            return Err(Error::BadCode(format!("need at least k = {} coordinates", self.k)));
        }
        let pts: Vec<(Elt, Elt)> = known[..self.k]
            .iter()
            .map(|(i, val)| {
                Ok((
                    self.eval_points[*i].clone(),
                    ctx.div(val, &self.col_mults[*i])?,
                ))
            })
            .collect::<Result<_>>()?;
        let f = interpolate(ctx, &pts)?;
        let word = self.encode(ctx, &f)?;
        for (i, val) in &known[self.k..] {
            if &word[*i] != val {
                return Err(Error::BadCode("given coordinates are not on a codeword".into()));
            }
        }
        Ok(word)
    }

    /// Shortening at a set of positions: codewords vanishing there, with
    /// those coordinates deleted. The result is GRS on the surviving points
    /// with dimension k - |T| and multipliers v_a * prod_{t in T} (a - t).
    pub fn shorten(&self, ctx: &FieldCtx, positions: &[usize]) -> Result<RsCode> {
        let t = positions.len();
        let mut uniq: Vec<usize> = positions.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        if uniq.len() != t || uniq.iter().any(|&i| i >= self.n()) {
            return Err(Error::BadCode("shortening positions must be distinct and in range".into()));
        }
        if t >= self.k {
            return Err(Error::BadCode("shortening would empty the code".into()));
        }
        let removed: Vec<Elt> = uniq.iter().map(|&i| self.eval_points[i].clone()).collect();
        let mut pts = Vec::with_capacity(self.n() - t);
        let mut mults = Vec::with_capacity(self.n() - t);
        for i in 0..self.n() {
            if uniq.binary_search(&i).is_ok() {
                continue;
            }
            let a = &self.eval_points[i];
            let mut extra = ctx.one();
            for rm in &removed {
                extra = ctx.mul(&extra, &ctx.sub(a, rm));
            }
            pts.push(a.clone());
            mults.push(ctx.mul(&self.col_mults[i], &extra));
        }
        RsCode::new(ctx, pts, self.k - t, Some(mults))
    }
}

/// Plain evaluation code on all points of the subspace, zero first, in the
/// subspace's enumeration order.
pub fn rs_on_subspace(ctx: &FieldCtx, u: &Subspace, k: usize, guard: u128) -> Result<RsCode> {
    RsCode::new(ctx, u.enumerate(ctx, guard)?, k, None)
}

pub fn poly_eval(ctx: &FieldCtx, coeffs: &[Elt], x: &Elt) -> Elt {
    let mut acc = ctx.zero();
    for c in coeffs.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, x), c);
    }
    acc
}

/// Lagrange interpolation through distinct points; returns coefficients low
/// to high, length = number of points.
pub fn interpolate(ctx: &FieldCtx, points: &[(Elt, Elt)]) -> Result<Vec<Elt>> {
    let n = points.len();
    let mut coeffs = vec![ctx.zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // numerator polynomial prod_{j != i} (X - x_j), denominator scalar
        let mut num = vec![ctx.one()];
        let mut den = ctx.one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut next = vec![ctx.zero(); num.len() + 1];
            for (t, c) in num.iter().enumerate() {
                next[t + 1] = ctx.add(&next[t + 1], c);
                next[t] = ctx.sub(&next[t], &ctx.mul(c, xj));
            }
            num = next;
            den = ctx.mul(&den, &ctx.sub(xi, xj));
        }
        if ctx.is_zero(&den) {
            return Err(Error::BadCode("interpolation points must be distinct".into()));
        }
        let scale = ctx.div(yi, &den)?;
        for (t, c) in num.iter().enumerate() {
            coeffs[t] = ctx.add(&coeffs[t], &ctx.mul(&scale, c));
        }
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::{all_subspaces, ENUM_GUARD};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn dual_scaling_three_point_example() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let a = ctx.alpha();
        let code = RsCode::new(
            &ctx,
            vec![ctx.zero(), ctx.one(), a.clone()],
            2,
            Some(vec![ctx.one(), ctx.one(), a.clone()]),
        )
        .unwrap();
        let w = code.dual_scaling(&ctx).unwrap();
        // w_0 = 1/((0-1)(0-a)) = 1/a = a + 1
        assert_eq!(ctx.value(&w[0]), 3);
        // every dual-code word is orthogonal to every codeword
        let dual = code.dual_code(&ctx).unwrap();
        for msg_val in 0..16u128 {
            let msg = vec![
                ctx.elt_from_value(msg_val % 4),
                ctx.elt_from_value(msg_val / 4),
            ];
            let c = code.encode(&ctx, &msg).unwrap();
            for dv in 0..4u128 {
                let d = dual.encode(&ctx, &[ctx.elt_from_value(dv)]).unwrap();
                let mut ip = ctx.zero();
                for (x, y) in c.iter().zip(&d) {
                    ip = ctx.add(&ip, &ctx.mul(x, y));
                }
                assert!(ctx.is_zero(&ip));
            }
        }
    }

    #[test]
    fn subspace_codes_have_constant_dual_scaling() {
        let ctx = FieldCtx::new(2, 1, 4).unwrap();
        for u in all_subspaces(&ctx, 2, ENUM_GUARD).unwrap() {
            let code = rs_on_subspace(&ctx, &u, 2, ENUM_GUARD).unwrap();
            let w = code.dual_scaling(&ctx).unwrap();
            assert!(w.iter().all(|x| x == &w[0]), "scaling not constant on a subspace");
        }
    }

    #[test]
    fn erasure_recovery_all_patterns() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let u = crate::subspace::subfield(&ctx, 3).unwrap(); // the whole field
        let code = rs_on_subspace(&ctx, &u, 3, ENUM_GUARD).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let c = code.random_codeword(&ctx, &mut rng);
        // drop every pair of coordinates, recover from the rest
        for i in 0..code.n() {
            for j in i + 1..code.n() {
                let known: Vec<(usize, Elt)> = (0..code.n())
                    .filter(|&t| t != i && t != j)
                    .map(|t| (t, c[t].clone()))
                    .collect();
                let rec = code.codeword_from_positions(&ctx, &known).unwrap();
                assert_eq!(rec, c);
            }
        }
    }

    #[test]
    fn random_dual_pairs_are_orthogonal() {
        let ctx = FieldCtx::new(2, 1, 4).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let pts: Vec<Elt> = (0..16).map(|v| ctx.elt_from_value(v)).collect();
        let mults: Vec<Elt> = (0..16)
            .map(|_| loop {
                let x = crate::subspace::random_elt(&ctx, &mut rng);
                if !ctx.is_zero(&x) {
                    break x;
                }
            })
            .collect();
        let code = RsCode::new(&ctx, pts, 7, Some(mults)).unwrap();
        let dual = code.dual_code(&ctx).unwrap();
        for _ in 0..100 {
            let c = code.random_codeword(&ctx, &mut rng);
            let d = dual.random_codeword(&ctx, &mut rng);
            let mut ip = ctx.zero();
            for (x, y) in c.iter().zip(&d) {
                ip = ctx.add(&ip, &ctx.mul(x, y));
            }
            assert!(ctx.is_zero(&ip));
            assert!(code.is_dual_codeword(&ctx, &d).unwrap());
            assert!(dual.is_dual_codeword(&ctx, &c).unwrap());
            assert!(code.contains(&ctx, &c).unwrap());
        }
    }

    #[test]
    fn shortening_matches_vanishing_restriction() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let u = crate::subspace::subfield(&ctx, 3).unwrap();
        let code = rs_on_subspace(&ctx, &u, 4, ENUM_GUARD).unwrap();
        let t = vec![6usize, 7];
        let short = code.shorten(&ctx, &t).unwrap();
        assert_eq!(short.n(), 6);
        assert_eq!(short.k, 2);
        // every shortened codeword, padded with zeros at T, is a parent word
        for mv in 0..64u128 {
            let msg = vec![ctx.elt_from_value(mv % 8), ctx.elt_from_value(mv / 8)];
            let c = short.encode(&ctx, &msg).unwrap();
            let mut padded = c.clone();
            padded.push(ctx.zero());
            padded.push(ctx.zero());
            assert!(code.contains(&ctx, &padded).unwrap());
        }
        // conversely, parent words vanishing on T restrict into the child
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let mut hits = 0;
        for _ in 0..200 {
            let c = code.random_codeword(&ctx, &mut rng);
            if ctx.is_zero(&c[6]) && ctx.is_zero(&c[7]) {
                hits += 1;
                assert!(short.contains(&ctx, &c[..6]).unwrap());
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn interpolation_round_trip() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let pts: Vec<Elt> = (0..5).map(|v| ctx.elt_from_value(v)).collect();
        for _ in 0..20 {
            let coeffs: Vec<Elt> = (0..5).map(|_| crate::subspace::random_elt(&ctx, &mut rng)).collect();
            let pairs: Vec<(Elt, Elt)> = pts.iter().map(|x| (x.clone(), poly_eval(&ctx, &coeffs, x))).collect();
            assert_eq!(interpolate(&ctx, &pairs).unwrap(), coeffs);
        }
    }
}
