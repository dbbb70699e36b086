//! Serializable payloads shared by the command line and the HTTP service,
//! so both print byte-identical JSON for the same input.

use num_bigint::BigInt;
use serde::Serialize;

use crate::catalog::{ReferenceCatalog, SeedInfo};
use crate::error::Result;
use crate::format::QuiverJson;
use crate::linalg;
use crate::mutclass::{self, Caps, ClassStatus};
use crate::patterns::{self, InfiniteCertificate, PatternKind, SubquiverPattern};
use crate::quiver::{Quiver, VertexSet};
use crate::vector::{Gf2Vector, IntVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutateReport {
    pub quiver: QuiverJson,
}

/// Applies 0-based mutations in order.
pub fn mutate(q: &Quiver, sequence: &[usize]) -> Result<MutateReport> {
    Ok(MutateReport {
        quiver: QuiverJson::from_quiver(&q.mutate_sequence(sequence)?),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    #[serde(serialize_with = "crate::format::one_based")]
    pub vertices: Vec<usize>,
    pub oriented: bool,
    pub simply_laced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternReport {
    pub kind: PatternKind,
    #[serde(serialize_with = "crate::format::one_based")]
    pub vertices: VertexSet,
}

impl From<&SubquiverPattern> for PatternReport {
    fn from(p: &SubquiverPattern) -> Self {
        PatternReport {
            kind: p.kind,
            vertices: p.vertices.clone(),
        }
    }
}

/// Invariants and structural patterns of one quiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub connected: bool,
    #[serde(serialize_with = "crate::format::serialize_big_int")]
    pub max_weight: BigInt,
    pub rank_z: usize,
    pub corank_z: usize,
    pub corank_gf2: usize,
    pub dim_v00: usize,
    pub quotient_dim: usize,
    pub double_edges: Vec<PatternReport>,
    /// Cycles in cyclic order, starting at the smallest vertex.
    pub cycles: Vec<CycleReport>,
    pub basic_subquivers: Vec<PatternReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinite_certificate: Option<InfiniteCertificate>,
    pub radical_basis_z: Vec<IntVector>,
    pub radical_basis_gf2: Vec<Gf2Vector>,
    pub basic_radical_vectors: Vec<Gf2Vector>,
}

pub fn analyze(q: &Quiver) -> Result<AnalysisReport> {
    let rank_z = linalg::rank_z(q);
    let dims = patterns::v00(q)?;
    Ok(AnalysisReport {
        n: q.n(),
        connected: q.is_connected(),
        max_weight: q.max_weight(),
        rank_z,
        corank_z: q.n() - rank_z,
        corank_gf2: dims.dim_v0,
        dim_v00: dims.dim_v00,
        quotient_dim: dims.quotient_dim,
        double_edges: patterns::double_edges(q).iter().map(PatternReport::from).collect(),
        cycles: patterns::cycles(q)?
            .into_iter()
            .map(|c| CycleReport {
                vertices: c.order,
                oriented: c.oriented,
                simply_laced: c.simply_laced,
            })
            .collect(),
        basic_subquivers: patterns::basic_subquivers(q)?
            .iter()
            .map(PatternReport::from)
            .collect(),
        infinite_certificate: patterns::infinite_certificate(q)?,
        radical_basis_z: linalg::radical_basis_z(q).vectors,
        radical_basis_gf2: linalg::radical_basis_gf2(q).vectors,
        basic_radical_vectors: patterns::basic_radical_vectors(q)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Page {
    pub offset: usize,
    pub limit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub size: usize,
    pub status: ClassStatus,
    pub connected: bool,
    pub mutations_examined: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<QuiverJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub page: Option<Page>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<QuiverJson>>,
}

/// Enumerates the class of `q`; with a page, includes those members in
/// canonical order.
pub fn class(q: &Quiver, caps: Caps, page: Option<Page>) -> Result<ClassReport> {
    let class = mutclass::enumerate_class(q, caps)?;
    let members = page.as_ref().map(|p| {
        class
            .representatives()
            .iter()
            .skip(p.offset)
            .take(p.limit)
            .map(QuiverJson::from_quiver)
            .collect()
    });
    Ok(ClassReport {
        size: class.size(),
        status: class.status,
        connected: class.connected,
        mutations_examined: class.mutations_examined,
        witness: class.witness.as_ref().map(QuiverJson::from_quiver),
        page,
        members,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogReport {
    pub seeds: Vec<SeedInfo>,
}

pub fn catalog(catalog: &ReferenceCatalog) -> CatalogReport {
    CatalogReport {
        seeds: catalog.seeds(),
    }
}

/// Compact JSON, as written by both front ends.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports serialize")
}
