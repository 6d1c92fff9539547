//! JSON formats for every artifact the CLI reads or writes. Polynomial
//! coefficients are listed constant term first; an extension-field element is
//! the nested array of its coordinate digit vectors in the same order; a
//! subfield scalar is a single digit vector. Scheme and transcript files are
//! versioned with a `schema` field.

use crate::error::{Error, Result};
use crate::gfield::{Elt, FieldCtx, Fq};
use crate::goodpair::{Certificate, GoodPair, SchemeParams};
use crate::repair::{HelperPlan, NodeScheme, RepairScheme, RepairTranscript};
use crate::rscode::RsCode;
use crate::subspace::Subspace;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

pub type FqDto = Vec<u64>;
pub type ElemDto = Vec<FqDto>;

pub fn fq_to_dto(ctx: &FieldCtx, a: Fq) -> FqDto {
    ctx.fq_digits(a)
}

pub fn fq_from_dto(ctx: &FieldCtx, d: &[u64]) -> Result<Fq> {
    ctx.fq_from_digits(d)
}

pub fn elt_to_dto(ctx: &FieldCtx, a: &Elt) -> ElemDto {
    a.coords().iter().map(|&c| ctx.fq_digits(c)).collect()
}

pub fn elt_from_dto(ctx: &FieldCtx, d: &ElemDto) -> Result<Elt> {
    if d.len() != ctx.m() {
        return Err(Error::BadFile(format!("element has {} coordinates, field degree is {}", d.len(), ctx.m())));
    }
    let coords: Vec<Fq> = d.iter().map(|v| ctx.fq_from_digits(v)).collect::<Result<_>>()?;
    ctx.elt_from_coords(coords)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldDto {
    pub p: u64,
    pub e: usize,
    pub m: usize,
    /// Subfield modulus over F_p, constant term first, degree e.
    pub g: Vec<u64>,
    /// Extension modulus over F_q, coefficients as digit vectors, degree m.
    pub h: Vec<FqDto>,
}

impl FieldDto {
    pub fn from_ctx(ctx: &FieldCtx) -> FieldDto {
        FieldDto {
            p: ctx.p(),
            e: ctx.e(),
            m: ctx.m(),
            g: ctx.g_coeffs().to_vec(),
            h: ctx.h_coeffs().iter().map(|&c| ctx.fq_digits(c)).collect(),
        }
    }

    /// Rebuilds the tower and validates the stored moduli.
    pub fn to_ctx(&self) -> Result<FieldCtx> {
        FieldCtx::with_polynomials(self.p, self.e, self.m, self.g.clone(), self.h.clone())
    }
}

/// Deterministic context from (q, m) alone: q is factored as p^e and the
/// moduli are the canonical smallest ones.
pub fn ctx_from_q(q: u64, m: usize) -> Result<FieldCtx> {
    if q < 2 {
        return Err(Error::BadParams("q must be at least 2".into()));
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if q % p != 0 {
        p = q; // q itself is prime
    }
    let mut e = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::BadParams(format!("q = {q} is not a prime power")));
    }
    FieldCtx::new(p, e, m)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubspaceDto {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subfield_degree: Option<usize>,
    pub basis: Vec<ElemDto>,
}

pub fn subspace_to_dto(ctx: &FieldCtx, s: &Subspace) -> SubspaceDto {
    SubspaceDto {
        dim: s.dim(),
        subfield_degree: s.subfield_degree,
        basis: s.basis().iter().map(|b| elt_to_dto(ctx, b)).collect(),
    }
}

pub fn subspace_from_dto(ctx: &FieldCtx, d: &SubspaceDto) -> Result<Subspace> {
    let basis: Vec<Elt> = d.basis.iter().map(|b| elt_from_dto(ctx, b)).collect::<Result<_>>()?;
    let mut s = Subspace::from_basis(ctx, &basis)
        .map_err(|_| Error::BadFile("subspace basis rows are dependent".into()))?;
    if s.dim() != d.dim {
        return Err(Error::BadFile(format!("subspace dim {} disagrees with basis rank {}", d.dim, s.dim())));
    }
    s.subfield_degree = d.subfield_degree;
    Ok(s)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateDto {
    #[serde(rename = "rank_M2")]
    pub rank_m2: usize,
    pub weak_ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoodPairDto {
    pub params: SchemeParams,
    #[serde(rename = "U")]
    pub u: SubspaceDto,
    #[serde(rename = "V")]
    pub v: SubspaceDto,
    pub certificate: CertificateDto,
}

pub fn pair_to_dto(ctx: &FieldCtx, pair: &GoodPair) -> GoodPairDto {
    GoodPairDto {
        params: pair.params,
        u: subspace_to_dto(ctx, &pair.u),
        v: subspace_to_dto(ctx, &pair.v),
        certificate: CertificateDto { rank_m2: pair.cert.rank_m2, weak_ok: pair.cert.weak_ok },
    }
}

/// Rebuilds the field from the stored (q, m) and the pair on top of it.
pub fn pair_from_dto(dto: &GoodPairDto) -> Result<(FieldCtx, GoodPair)> {
    let ctx = ctx_from_q(dto.params.q, dto.params.m)?;
    let pair = GoodPair {
        params: dto.params,
        u: subspace_from_dto(&ctx, &dto.u)?,
        v: subspace_from_dto(&ctx, &dto.v)?,
        cert: Certificate { rank_m2: dto.certificate.rank_m2, weak_ok: dto.certificate.weak_ok },
    };
    Ok((ctx, pair))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeDto {
    pub field: FieldDto,
    pub eval_set: Vec<ElemDto>,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<Vec<ElemDto>>,
}

pub fn code_to_dto(ctx: &FieldCtx, code: &RsCode) -> CodeDto {
    let all_ones = code.col_mults.iter().all(|v| ctx.is_one(v));
    CodeDto {
        field: FieldDto::from_ctx(ctx),
        eval_set: code.eval_points.iter().map(|a| elt_to_dto(ctx, a)).collect(),
        k: code.k,
        scaling: if all_ones {
            None
        } else {
            Some(code.col_mults.iter().map(|v| elt_to_dto(ctx, v)).collect())
        },
    }
}

pub fn code_from_dto(dto: &CodeDto) -> Result<(FieldCtx, RsCode)> {
    let ctx = dto.field.to_ctx()?;
    let pts: Vec<Elt> = dto.eval_set.iter().map(|a| elt_from_dto(&ctx, a)).collect::<Result<_>>()?;
    let mults = match &dto.scaling {
        None => None,
        Some(v) => Some(v.iter().map(|x| elt_from_dto(&ctx, x)).collect::<Result<Vec<_>>>()?),
    };
    let code = RsCode::new(&ctx, pts, dto.k, mults)?;
    Ok((ctx, code))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HelperDto {
    pub helper: usize,
    pub queries: Vec<ElemDto>,
    pub lambda: Vec<Vec<FqDto>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeDto {
    pub node: usize,
    pub dual_words: Vec<Vec<ElemDto>>,
    pub helpers: Vec<HelperDto>,
    pub recon: Vec<ElemDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeDto {
    pub schema: u32,
    pub code: CodeDto,
    pub r: usize,
    pub nodes: Vec<NodeDto>,
}

pub fn scheme_to_dto(ctx: &FieldCtx, scheme: &RepairScheme) -> SchemeDto {
    SchemeDto {
        schema: SCHEMA_VERSION,
        code: code_to_dto(ctx, &scheme.code),
        r: scheme.r,
        nodes: scheme
            .nodes
            .iter()
            .map(|ns| NodeDto {
                node: ns.node,
                dual_words: ns
                    .dual_words
                    .iter()
                    .map(|w| w.iter().map(|x| elt_to_dto(ctx, x)).collect())
                    .collect(),
                helpers: ns
                    .helpers
                    .iter()
                    .map(|h| HelperDto {
                        helper: h.helper,
                        queries: h.queries.iter().map(|g| elt_to_dto(ctx, g)).collect(),
                        lambda: h
                            .lambda
                            .iter()
                            .map(|row| row.iter().map(|&c| fq_to_dto(ctx, c)).collect())
                            .collect(),
                    })
                    .collect(),
                recon: ns.recon.iter().map(|x| elt_to_dto(ctx, x)).collect(),
            })
            .collect(),
    }
}

pub fn scheme_from_dto(dto: &SchemeDto) -> Result<(FieldCtx, RepairScheme)> {
    if dto.schema != SCHEMA_VERSION {
        return Err(Error::BadFile(format!("unsupported schema version {}", dto.schema)));
    }
    let (ctx, code) = code_from_dto(&dto.code)?;
    let mut nodes = Vec::with_capacity(dto.nodes.len());
    for nd in &dto.nodes {
        let dual_words: Vec<Vec<Elt>> = nd
            .dual_words
            .iter()
            .map(|w| w.iter().map(|x| elt_from_dto(&ctx, x)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let mut helpers = Vec::with_capacity(nd.helpers.len());
        for h in &nd.helpers {
            helpers.push(HelperPlan {
                helper: h.helper,
                queries: h.queries.iter().map(|g| elt_from_dto(&ctx, g)).collect::<Result<_>>()?,
                lambda: h
                    .lambda
                    .iter()
                    .map(|row| row.iter().map(|c| fq_from_dto(&ctx, c)).collect::<Result<_>>())
                    .collect::<Result<_>>()?,
            });
        }
        nodes.push(NodeScheme {
            node: nd.node,
            dual_words,
            helpers,
            recon: nd.recon.iter().map(|x| elt_from_dto(&ctx, x)).collect::<Result<_>>()?,
        });
    }
    Ok((ctx, RepairScheme { code, r: dto.r, nodes }))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SentDto {
    pub helper: usize,
    pub symbols: Vec<FqDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranscriptDto {
    pub schema: u32,
    pub node: usize,
    pub sent: Vec<SentDto>,
    pub recovered: ElemDto,
    pub bits: f64,
}

pub fn transcript_to_dto(ctx: &FieldCtx, t: &RepairTranscript) -> TranscriptDto {
    TranscriptDto {
        schema: SCHEMA_VERSION,
        node: t.node,
        sent: t
            .sent
            .iter()
            .map(|(h, syms)| SentDto {
                helper: *h,
                symbols: syms.iter().map(|&s| fq_to_dto(ctx, s)).collect(),
            })
            .collect(),
        recovered: elt_to_dto(ctx, &t.recovered),
        bits: t.bits,
    }
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|e| Error::BadFile(format!("{}: {e}", path.display())))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::BadFile(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}
