//! Executable linear repair schemes. A scheme holds, for each node i, a set
//! of m dual codewords x_1..x_m whose entries at i form an F_q-basis of the
//! extension field. Every helper u sends the r traces tr(gamma_t * c_u) of
//! its symbol against a fixed query basis; each dual codeword's entry at u is
//! an F_q-combination of the queries, so the replacement node can assemble
//! tr(x_{j,i} c_i) = -sum_u sum_t lambda_{j,t} tr(gamma_t c_u) and expand c_i
//! in the reconstruction trace-dual. No matrix inverse runs at repair time.

use crate::error::{Error, Result};
use crate::gfield::{Elt, FieldCtx, Fq};
use crate::goodpair::{annihilator_poly, GoodPair};
use crate::linalg::FqMat;
use crate::rscode::RsCode;
use crate::subspace::{Subspace, ENUM_GUARD};

#[derive(Clone, Debug)]
pub struct HelperPlan {
    /// Position of the helper in the code.
    pub helper: usize,
    /// Query basis: the helper sends tr(gamma_t * c_helper) for each t.
    pub queries: Vec<Elt>,
    /// lambda[j][t]: coefficient of query t in dual word j's entry here.
    pub lambda: Vec<Vec<Fq>>,
}

#[derive(Clone, Debug)]
pub struct NodeScheme {
    pub node: usize,
    /// m dual codewords, each of code length.
    pub dual_words: Vec<Vec<Elt>>,
    /// One plan per helper, ascending by position, the node itself absent.
    pub helpers: Vec<HelperPlan>,
    /// Trace-dual of the entries {x_{j,node}}: c = sum_j tr(x_{j,node} c) recon_j.
    pub recon: Vec<Elt>,
}

#[derive(Clone, Debug)]
pub struct RepairScheme {
    pub code: RsCode,
    /// Uniform per-helper budget in F_q symbols.
    pub r: usize,
    /// One entry per node, indexed by position.
    pub nodes: Vec<NodeScheme>,
}

#[derive(Clone, Debug)]
pub struct RepairTranscript {
    pub node: usize,
    /// Per helper: (position, the F_q symbols it sent).
    pub sent: Vec<(usize, Vec<Fq>)>,
    pub recovered: Elt,
    pub bits: f64,
}

pub fn bits_per_symbol(ctx: &FieldCtx) -> f64 {
    (ctx.q() as f64).log2()
}

/// Fill in lambda and the reconstruction dual for one node, given the dual
/// words and per-helper query bases. Fails if some dual-word entry is outside
/// the F_q-span of that helper's queries, or the node entries do not span.
pub fn assemble_node(
    ctx: &FieldCtx,
    node: usize,
    dual_words: Vec<Vec<Elt>>,
    queries: Vec<(usize, Vec<Elt>)>,
) -> Result<NodeScheme> {
    let m = ctx.m();
    if dual_words.len() != m {
        return Err(Error::BadScheme(format!("need m = {m} dual words, got {}", dual_words.len())));
    }
    let at_node: Vec<Elt> = dual_words.iter().map(|w| w[node].clone()).collect();
    let basis = ctx
        .make_basis(at_node)
        .map_err(|_| Error::BadScheme("dual-word entries at the node do not span".into()))?;
    let recon = ctx.dual_basis(&basis)?.elems;
    let mut helpers = Vec::with_capacity(queries.len());
    for (u, gam) in queries {
        if u == node {
            return Err(Error::BadScheme("the node cannot be its own helper".into()));
        }
        let mut a = FqMat::zero(m, gam.len());
        for (t, g) in gam.iter().enumerate() {
            for (i, &c) in g.coords().iter().enumerate() {
                a.set(i, t, c);
            }
        }
        let mut rhs = FqMat::zero(m, dual_words.len());
        for (j, w) in dual_words.iter().enumerate() {
            for (i, &c) in w[u].coords().iter().enumerate() {
                rhs.set(i, j, c);
            }
        }
        let sol = a.solve_many(ctx, &rhs).ok_or_else(|| {
            Error::BadScheme(format!("dual-word entry at helper {u} is outside the query span"))
        })?;
        let lambda: Vec<Vec<Fq>> = (0..dual_words.len())
            .map(|j| (0..gam.len()).map(|t| sol.get(t, j)).collect())
            .collect();
        helpers.push(HelperPlan { helper: u, queries: gam, lambda });
    }
    helpers.sort_by_key(|h| h.helper);
    Ok(NodeScheme { node, dual_words, helpers, recon })
}

fn index_by_value(ctx: &FieldCtx, code: &RsCode) -> std::collections::HashMap<u128, usize> {
    code.eval_points
        .iter()
        .enumerate()
        .map(|(i, a)| (ctx.value(a), i))
        .collect()
}

/// Scheme for the node at evaluation point 0 from a good pair, extended to
/// every node by translation. For each S-basis element b_j, the linearized
/// polynomial f_j(X) = b_j X + sum_l a_{j,l} X^(q^l) maps U into V; the dual
/// word is f_j(u)/u off the node and b_j at it, and helpers answer against
/// the basis of V divided by their offset. The code is C(U, s): dimension
/// n - q^s on the points of U.
pub fn scheme_from_pair(ctx: &FieldCtx, pair: &GoodPair) -> Result<RepairScheme> {
    let p = &pair.params;
    let m = ctx.m();
    let qs = (ctx.q() as u128).pow(p.s as u32);
    let n = pair.u.size(ctx);
    if qs >= n {
        return Err(Error::BadParams("q^s must be smaller than the code length".into()));
    }
    let k = (n - qs) as usize;
    let code = crate::rscode::rs_on_subspace(ctx, &pair.u, k, ENUM_GUARD)?;
    let gm = crate::goodpair::goodness_matrix(ctx, &pair.u, &pair.v, p.s)?;
    let m2 = gm.m2();
    let mut rhs = gm.m1();
    for i in 0..rhs.rows() {
        for j in 0..rhs.cols() {
            rhs.set(i, j, ctx.fq_neg(rhs.get(i, j)));
        }
    }
    let sol = m2
        .solve_many(ctx, &rhs)
        .ok_or_else(|| Error::Unsolvable("pair is not weakly good: repair systems unsolvable".into()))?;
    // f_j coefficients: X-coefficient is S_j, X^(q^l) coefficient rebuilt
    // from the solution block l
    let s_elems = &gm.s_basis.elems;
    let mut polys: Vec<crate::gfield::LinPoly> = Vec::with_capacity(m);
    for j in 0..m {
        let mut coeffs = vec![ctx.zero(); p.s + 1];
        coeffs[0] = s_elems[j].clone();
        for l in 1..=p.s {
            let mut a = ctx.zero();
            for t in 0..m {
                a = ctx.add(&a, &ctx.smul(&s_elems[t], sol.get((l - 1) * m + t, j)));
            }
            coeffs[l] = a;
        }
        polys.push(crate::gfield::LinPoly { coeffs });
    }
    // node-0 dual words
    let zero_idx = code
        .eval_points
        .iter()
        .position(|a| ctx.is_zero(a))
        .ok_or_else(|| Error::BadCode("evaluation set must contain 0".into()))?;
    let mut words0 = vec![vec![ctx.zero(); code.n()]; m];
    for (j, f) in polys.iter().enumerate() {
        for (ui, u) in code.eval_points.iter().enumerate() {
            words0[j][ui] = if ui == zero_idx {
                f.coeffs[0].clone()
            } else {
                ctx.div(&f.eval(ctx, u), u)?
            };
        }
    }
    let v_basis = pair.v.basis().to_vec();
    let scheme0 = assemble_from_words(ctx, &code, zero_idx, words0.clone(), &v_basis)?;
    let index = index_by_value(ctx, &code);
    let mut nodes = Vec::with_capacity(code.n());
    for i in 0..code.n() {
        if i == zero_idx {
            nodes.push(scheme0.clone());
        } else {
            nodes.push(translate_node(ctx, &code, &index, &words0, &v_basis, zero_idx, i)?);
        }
    }
    nodes.sort_by_key(|ns| ns.node);
    Ok(RepairScheme { code, r: p.r, nodes })
}

/// Helper queries for a pair-style node: basis of V divided by the offset.
fn assemble_from_words(
    ctx: &FieldCtx,
    code: &RsCode,
    node: usize,
    words: Vec<Vec<Elt>>,
    v_basis: &[Elt],
) -> Result<NodeScheme> {
    let a_i = code.eval_points[node].clone();
    let mut queries = Vec::with_capacity(code.n() - 1);
    for (u, a_u) in code.eval_points.iter().enumerate() {
        if u == node {
            continue;
        }
        let off = ctx.sub(a_u, &a_i);
        let gam: Vec<Elt> = v_basis.iter().map(|v| ctx.div(v, &off)).collect::<Result<_>>()?;
        queries.push((u, gam));
    }
    assemble_node(ctx, node, words, queries)
}

/// Positional permutation of the node-0 words: the word entry for the node
/// at u_star, position u, is the node-0 entry at position u - u_star.
fn translate_node(
    ctx: &FieldCtx,
    code: &RsCode,
    index: &std::collections::HashMap<u128, usize>,
    words0: &[Vec<Elt>],
    v_basis: &[Elt],
    zero_idx: usize,
    target: usize,
) -> Result<NodeScheme> {
    let u_star = code.eval_points[target].clone();
    let mut words = vec![vec![ctx.zero(); code.n()]; words0.len()];
    for (ui, u) in code.eval_points.iter().enumerate() {
        let shifted = ctx.sub(u, &u_star);
        let src = *index
            .get(&ctx.value(&shifted))
            .ok_or_else(|| Error::BadScheme("evaluation set is not closed under the translation".into()))?;
        for j in 0..words0.len() {
            words[j][ui] = words0[j][src].clone();
        }
    }
    debug_assert_eq!(
        ctx.value(&words[0][target]),
        ctx.value(&words0[0][zero_idx])
    );
    assemble_from_words(ctx, code, target, words, v_basis)
}

/// Public translation entry point: derive the scheme of the node sitting at
/// evaluation point u_star from the node-0 scheme by the permutation above.
pub fn translate_scheme(ctx: &FieldCtx, scheme: &RepairScheme, u_star: &Elt) -> Result<NodeScheme> {
    let code = &scheme.code;
    let index = index_by_value(ctx, code);
    let zero_idx = *index.get(&0).ok_or_else(|| Error::BadCode("evaluation set must contain 0".into()))?;
    let target = *index
        .get(&ctx.value(u_star))
        .ok_or_else(|| Error::BadScheme("u_star is not an evaluation point".into()))?;
    let node0 = &scheme.nodes[zero_idx];
    if node0.node != zero_idx {
        return Err(Error::BadScheme("scheme nodes are not position-indexed".into()));
    }
    // recover the query shape of node 0: all plans share the V/(u) pattern,
    // so reuse its queries multiplied back by the offset
    let first = &node0.helpers[0];
    let off0 = ctx.sub(&code.eval_points[first.helper], &code.eval_points[zero_idx]);
    let v_basis: Vec<Elt> = first.queries.iter().map(|g| ctx.mul(g, &off0)).collect();
    translate_node(ctx, code, &index, &node0.dual_words, &v_basis, zero_idx, target)
}

/// Repair scheme with annihilator-polynomial queries: W is the span of the
/// first s polynomial-basis elements, L its annihilator, and node i's dual
/// word j evaluates w_a L(beta_j (a - a_i))/(a - a_i) with the code's dual
/// scaling w folded in, so it works on any evaluation set with q^s <= n - k.
/// Every helper sends m - s symbols against a basis of the image of L.
pub fn subspace_poly_scheme(ctx: &FieldCtx, code: &RsCode, s: usize) -> Result<RepairScheme> {
    let m = ctx.m();
    if s < 1 || s >= m {
        return Err(Error::BadParams("need 1 <= s < m".into()));
    }
    let qs = (ctx.q() as u128).pow(s as u32);
    if qs > (code.n() - code.k) as u128 {
        return Err(Error::BadParams("q^s exceeds the code redundancy".into()));
    }
    let w_sub = Subspace::span(ctx, &(0..s).map(|j| ctx.poly_basis_elem(j)).collect::<Vec<_>>());
    let l = annihilator_poly(ctx, &w_sub)?;
    let l0 = l.coeffs[0].clone();
    // image of L: applied to a field basis, spanned over F_q
    let img: Vec<Elt> = (0..m).map(|j| l.eval(ctx, &ctx.poly_basis_elem(j))).collect();
    let nu = Subspace::span(ctx, &img);
    if nu.dim() != m - s {
        return Err(Error::Unsolvable("annihilator image has the wrong dimension".into()));
    }
    let nu_basis = nu.basis().to_vec();
    let scaling = code.dual_scaling(ctx)?;
    let mut nodes = Vec::with_capacity(code.n());
    for i in 0..code.n() {
        let a_i = code.eval_points[i].clone();
        let mut words = vec![vec![ctx.zero(); code.n()]; m];
        for j in 0..m {
            let beta = ctx.poly_basis_elem(j);
            for (ui, a) in code.eval_points.iter().enumerate() {
                words[j][ui] = if ui == i {
                    ctx.mul(&scaling[ui], &ctx.mul(&l0, &beta))
                } else {
                    let z = ctx.sub(a, &a_i);
                    let val = l.eval(ctx, &ctx.mul(&beta, &z));
                    ctx.mul(&scaling[ui], &ctx.div(&val, &z)?)
                };
            }
        }
        let mut queries = Vec::with_capacity(code.n() - 1);
        for (u, a) in code.eval_points.iter().enumerate() {
            if u == i {
                continue;
            }
            let z = ctx.sub(a, &a_i);
            let gam: Vec<Elt> = nu_basis
                .iter()
                .map(|v| ctx.div(&ctx.mul(v, &scaling[u]), &z))
                .collect::<Result<_>>()?;
            queries.push((u, gam));
        }
        nodes.push(assemble_node(ctx, i, words, queries)?);
    }
    Ok(RepairScheme { code: code.clone(), r: m - s, nodes })
}

/// Composite scheme for the code C(F_{q^d}, s): evaluation points the
/// subfield F_{q^d}, dimension q^d - q^s, symbols in F_{q^m}. Decomposes
/// every symbol over a basis of F_{q^m} / F_{q^d} via the relative trace and
/// repairs each component with the annihilator scheme inside F_{q^d}; the
/// per-helper budget is (m/d)(d - s) F_q symbols.
pub fn composite_scheme_subfield(ctx: &FieldCtx, d: usize, s: usize) -> Result<RepairScheme> {
    let m = ctx.m();
    if d >= m || m % d != 0 {
        return Err(Error::BadParams("need d properly dividing m".into()));
    }
    if s < 1 || s >= d {
        return Err(Error::BadParams("need 1 <= s < d".into()));
    }
    let sub = crate::subspace::subfield(ctx, d)?;
    let n = sub.size(ctx) as usize;
    let k = n - (ctx.q() as usize).pow(s as u32);
    let code = crate::rscode::rs_on_subspace(ctx, &sub, k, ENUM_GUARD)?;
    let b_hat = sub.basis().to_vec(); // F_q-basis of the subfield
    let w_sub = Subspace::span(ctx, &b_hat[..s]);
    if w_sub.dim() != s {
        return Err(Error::BadBasis("subfield basis prefix is dependent".into()));
    }
    let l = annihilator_poly(ctx, &w_sub)?;
    let l0 = l.coeffs[0].clone();
    let img: Vec<Elt> = b_hat.iter().map(|b| l.eval(ctx, b)).collect();
    let nu = Subspace::span(ctx, &img);
    if nu.dim() != d - s {
        return Err(Error::Unsolvable("annihilator image has the wrong dimension".into()));
    }
    let nu_basis = nu.basis().to_vec();
    let (rel, rel_dual) = relative_dual_basis(ctx, d)?;
    let _ = rel;
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let b_star = code.eval_points[i].clone();
        // j-major: word (j, l) combines relative coordinate j with B-hat_l
        let mut words = vec![vec![ctx.zero(); n]; m];
        for j in 0..m / d {
            for li in 0..d {
                let w = &mut words[j * d + li];
                for (ui, b) in code.eval_points.iter().enumerate() {
                    let comp = if ui == i {
                        ctx.mul(&l0, &b_hat[li])
                    } else {
                        let z = ctx.sub(b, &b_star);
                        ctx.div(&l.eval(ctx, &ctx.mul(&b_hat[li], &z)), &z)?
                    };
                    w[ui] = ctx.mul(&rel_dual[j], &comp);
                }
            }
        }
        let mut queries = Vec::with_capacity(n - 1);
        for (u, b) in code.eval_points.iter().enumerate() {
            if u == i {
                continue;
            }
            let z = ctx.sub(b, &b_star);
            let mut gam = Vec::with_capacity((m / d) * (d - s));
            for rd in &rel_dual {
                for v in &nu_basis {
                    gam.push(ctx.div(&ctx.mul(rd, v), &z)?);
                }
            }
            queries.push((u, gam));
        }
        nodes.push(assemble_node(ctx, i, words, queries)?);
    }
    Ok(RepairScheme { code, r: (m / d) * (d - s), nodes })
}

/// Basis of F_{q^m} over the subfield F_{q^d} together with its dual under
/// the relative trace x -> sum_i x^(q^(d i)). Greedy over the polynomial
/// basis; relative independence of t elements is F_q-rank t*d of their
/// products with a subfield basis.
pub fn relative_dual_basis(ctx: &FieldCtx, d: usize) -> Result<(Vec<Elt>, Vec<Elt>)> {
    let m = ctx.m();
    if m % d != 0 {
        return Err(Error::BadParams("need d dividing m".into()));
    }
    let ext = m / d;
    let sub = crate::subspace::subfield(ctx, d)?;
    let b_hat = sub.basis().to_vec();
    let mut rel: Vec<Elt> = Vec::with_capacity(ext);
    let mut probe: Vec<Elt> = Vec::new();
    for j in 0..m {
        if rel.len() == ext {
            break;
        }
        let cand = ctx.poly_basis_elem(j);
        let mut trial = probe.clone();
        for b in &b_hat {
            trial.push(ctx.mul(&cand, b));
        }
        if ctx.rank_q(&trial) == trial.len() {
            rel.push(cand);
            probe = trial;
        }
    }
    if rel.len() != ext {
        return Err(Error::BadBasis("could not complete a relative basis".into()));
    }
    let rel_trace = |x: &Elt| -> Elt {
        let mut acc = ctx.zero();
        for i in 0..ext {
            acc = ctx.add(&acc, &ctx.frobenius(x, d * i));
        }
        acc
    };
    // Gram matrix over the subfield, inverted by elimination; entries of the
    // relative trace land in F_{q^d}, so the arithmetic stays there.
    let gram: Vec<Vec<Elt>> = (0..ext)
        .map(|i| (0..ext).map(|j| rel_trace(&ctx.mul(&rel[i], &rel[j]))).collect())
        .collect();
    let inv = crate::linalg::elt_inverse(ctx, &gram)
        .ok_or_else(|| Error::BadBasis("relative Gram matrix is singular".into()))?;
    let rel_dual: Vec<Elt> = (0..ext)
        .map(|i| {
            let mut acc = ctx.zero();
            for j in 0..ext {
                acc = ctx.add(&acc, &ctx.mul(&inv[i][j], &rel[j]));
            }
            acc
        })
        .collect();
    for i in 0..ext {
        for j in 0..ext {
            let t = rel_trace(&ctx.mul(&rel_dual[i], &rel[j]));
            let want = if i == j { ctx.one() } else { ctx.zero() };
            if t != want {
                return Err(Error::BadBasis("relative dual check failed".into()));
            }
        }
    }
    Ok((rel, rel_dual))
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<String>,
    /// Download per repaired node, in bits.
    pub bits_per_node: Vec<f64>,
}

/// Independent check of the repair criterion: every dual word really is a
/// dual codeword, every entry at a helper is the claimed combination of that
/// helper's queries, entries at the node span the field, the reconstruction
/// elements form the trace-dual, and every node and helper is covered.
pub fn verify_scheme(ctx: &FieldCtx, scheme: &RepairScheme) -> Result<VerifyReport> {
    let code = &scheme.code;
    let n = code.n();
    let m = ctx.m();
    let mut violations = Vec::new();
    let mut bits = Vec::with_capacity(n);
    if scheme.nodes.len() != n {
        violations.push(format!("scheme covers {} of {} nodes", scheme.nodes.len(), n));
    }
    for (i, ns) in scheme.nodes.iter().enumerate() {
        if ns.node != i {
            violations.push(format!("node {i}: entry indexed {}", ns.node));
            continue;
        }
        if ns.dual_words.len() != m {
            violations.push(format!("node {i}: {} dual words, expected {m}", ns.dual_words.len()));
            continue;
        }
        for (j, w) in ns.dual_words.iter().enumerate() {
            if w.len() != n {
                violations.push(format!("node {i} word {j}: length {}", w.len()));
            } else if !code.is_dual_codeword(ctx, w)? {
                violations.push(format!("node {i} word {j}: not a dual codeword"));
            }
        }
        let seen: Vec<usize> = ns.helpers.iter().map(|h| h.helper).collect();
        let expect: Vec<usize> = (0..n).filter(|&u| u != i).collect();
        if seen != expect {
            violations.push(format!("node {i}: helper set incomplete"));
            continue;
        }
        let mut node_bits = 0.0;
        for h in &ns.helpers {
            if h.queries.len() != scheme.r {
                violations.push(format!(
                    "node {i} helper {}: {} queries, budget {}",
                    h.helper,
                    h.queries.len(),
                    scheme.r
                ));
            }
            node_bits += h.queries.len() as f64 * bits_per_symbol(ctx);
            if h.lambda.len() != ns.dual_words.len() {
                violations.push(format!("node {i} helper {}: lambda rows", h.helper));
                continue;
            }
            for (j, lam) in h.lambda.iter().enumerate() {
                if lam.len() != h.queries.len() {
                    violations.push(format!("node {i} helper {} word {j}: lambda width", h.helper));
                    continue;
                }
                let mut acc = ctx.zero();
                for (t, g) in h.queries.iter().enumerate() {
                    acc = ctx.add(&acc, &ctx.smul(g, lam[t]));
                }
                if acc != ns.dual_words[j][h.helper] {
                    violations.push(format!(
                        "node {i} helper {} word {j}: entry is not the claimed query combination",
                        h.helper
                    ));
                }
            }
        }
        let at_node: Vec<Elt> = ns.dual_words.iter().map(|w| w[i].clone()).collect();
        if ctx.rank_q(&at_node) != m {
            violations.push(format!("node {i}: entries at the node do not span"));
        } else {
            if ns.recon.len() != m {
                violations.push(format!("node {i}: reconstruction basis size"));
            } else {
                for (j, b) in at_node.iter().enumerate() {
                    for (j2, rc) in ns.recon.iter().enumerate() {
                        let t = ctx.trace(&ctx.mul(b, rc));
                        let want = if j == j2 { Fq(1) } else { Fq(0) };
                        if t != want {
                            violations.push(format!("node {i}: reconstruction dual fails at ({j},{j2})"));
                        }
                    }
                }
            }
        }
        bits.push(node_bits);
    }
    Ok(VerifyReport { ok: violations.is_empty(), violations, bits_per_node: bits })
}

/// Run the protocol: helpers answer traces of their symbols against their
/// query bases, the replacement combines them with lambda and expands in the
/// reconstruction dual.
pub fn execute_repair(ctx: &FieldCtx, scheme: &RepairScheme, codeword: &[Elt], node: usize) -> Result<RepairTranscript> {
    let code = &scheme.code;
    if codeword.len() != code.n() {
        return Err(Error::BadScheme("codeword length mismatch".into()));
    }
    let ns = scheme
        .nodes
        .get(node)
        .filter(|ns| ns.node == node)
        .ok_or_else(|| Error::BadScheme(format!("no scheme entry for node {node}")))?;
    let m = ctx.m();
    let mut sent = Vec::with_capacity(ns.helpers.len());
    let mut traces = vec![Fq(0); m];
    for h in &ns.helpers {
        let syms: Vec<Fq> = h
            .queries
            .iter()
            .map(|g| ctx.trace(&ctx.mul(g, &codeword[h.helper])))
            .collect();
        for j in 0..m {
            for (t, &s) in syms.iter().enumerate() {
                traces[j] = ctx.fq_add(traces[j], ctx.fq_mul(h.lambda[j][t], s));
            }
        }
        sent.push((h.helper, syms));
    }
    let mut recovered = ctx.zero();
    for j in 0..m {
        recovered = ctx.add(&recovered, &ctx.smul(&ns.recon[j], ctx.fq_neg(traces[j])));
    }
    let bits = sent.iter().map(|(_, s)| s.len() as f64).sum::<f64>() * bits_per_symbol(ctx);
    Ok(RepairTranscript { node, sent, recovered, bits })
}

/// Download-everything baseline: read k full symbols, reinterpolate.
pub fn naive_repair(ctx: &FieldCtx, code: &RsCode, codeword: &[Elt], node: usize) -> Result<RepairTranscript> {
    if codeword.len() != code.n() {
        return Err(Error::BadScheme("codeword length mismatch".into()));
    }
    let helpers: Vec<usize> = (0..code.n()).filter(|&u| u != node).take(code.k).collect();
    let known: Vec<(usize, Elt)> = helpers.iter().map(|&u| (u, codeword[u].clone())).collect();
    let full = code.codeword_from_positions(ctx, &known)?;
    let sent = helpers
        .iter()
        .map(|&u| (u, codeword[u].coords().to_vec()))
        .collect();
    Ok(RepairTranscript {
        node,
        sent,
        recovered: full[node].clone(),
        bits: naive_bandwidth(ctx, code),
    })
}

pub fn naive_bandwidth(ctx: &FieldCtx, code: &RsCode) -> f64 {
    code.k as f64 * ctx.m() as f64 * bits_per_symbol(ctx)
}

/// Shorten the code and restrict the scheme: removed positions hold known
/// zeros, so their helper plans and dual-word coordinates are dropped and the
/// surviving nodes keep their repair identities verbatim.
pub fn shorten_scheme(ctx: &FieldCtx, scheme: &RepairScheme, positions: &[usize]) -> Result<RepairScheme> {
    let code = scheme.code.shorten(ctx, positions)?;
    let mut removed: Vec<usize> = positions.to_vec();
    removed.sort_unstable();
    let keep: Vec<usize> = (0..scheme.code.n()).filter(|i| removed.binary_search(i).is_err()).collect();
    let new_index: std::collections::HashMap<usize, usize> =
        keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let mut nodes = Vec::with_capacity(keep.len());
    for &old in &keep {
        let ns = &scheme.nodes[old];
        if ns.node != old {
            return Err(Error::BadScheme("scheme nodes are not position-indexed".into()));
        }
        let dual_words: Vec<Vec<Elt>> = ns
            .dual_words
            .iter()
            .map(|w| keep.iter().map(|&u| w[u].clone()).collect())
            .collect();
        let helpers: Vec<HelperPlan> = ns
            .helpers
            .iter()
            .filter(|h| new_index.contains_key(&h.helper))
            .map(|h| HelperPlan {
                helper: new_index[&h.helper],
                queries: h.queries.clone(),
                lambda: h.lambda.clone(),
            })
            .collect();
        nodes.push(NodeScheme {
            node: new_index[&old],
            dual_words,
            helpers,
            recon: ns.recon.clone(),
        });
    }
    let r = scheme.r;
    let _ = ctx;
    Ok(RepairScheme { code, r, nodes })
}

/// Move the scheme to the same code with different column multipliers:
/// dual words and queries pick up the ratio old/new coordinatewise, then
/// every node is reassembled and recertified.
pub fn grs_rescale_scheme(
    ctx: &FieldCtx,
    scheme: &RepairScheme,
    v_old: &[Elt],
    v_new: &[Elt],
) -> Result<RepairScheme> {
    let code = &scheme.code;
    if v_old.len() != code.n() || v_new.len() != code.n() {
        return Err(Error::BadScheme("multiplier length mismatch".into()));
    }
    if v_old != code.col_mults.as_slice() {
        return Err(Error::BadScheme("v_old disagrees with the scheme's code".into()));
    }
    let ratio: Vec<Elt> = v_old
        .iter()
        .zip(v_new)
        .map(|(o, n)| ctx.div(o, n))
        .collect::<Result<_>>()?;
    let new_code = RsCode::new(ctx, code.eval_points.clone(), code.k, Some(v_new.to_vec()))?;
    let mut nodes = Vec::with_capacity(scheme.nodes.len());
    for ns in &scheme.nodes {
        let words: Vec<Vec<Elt>> = ns
            .dual_words
            .iter()
            .map(|w| w.iter().zip(&ratio).map(|(x, rho)| ctx.mul(x, rho)).collect())
            .collect();
        let queries: Vec<(usize, Vec<Elt>)> = ns
            .helpers
            .iter()
            .map(|h| {
                (
                    h.helper,
                    h.queries.iter().map(|g| ctx.mul(g, &ratio[h.helper])).collect(),
                )
            })
            .collect();
        nodes.push(assemble_node(ctx, ns.node, words, queries)?);
    }
    Ok(RepairScheme { code: new_code, r: scheme.r, nodes })
}
