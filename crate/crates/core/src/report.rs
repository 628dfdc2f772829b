//! Factorization report: every symmetry verdict for one state and one DOF
//! partition, in a serializable shape.

use serde::Serialize;

use crate::error::Result;
use crate::first_quantized::{to_first_quantized, Limits};
use crate::fock::StateVector;
use crate::schema::DofSchema;
use crate::symmetry::{
    check_bosonic_symmetry, check_single_dof_symmetry, project_doubly_symmetric, schmidt_analysis,
    DofPartition, Exchange, Factor,
};

pub const PRODUCT_FORM: &str = "product form";
pub const ENTANGLED: &str = "entangled between DOF groups";

#[derive(Debug, Clone, Serialize)]
pub struct PartitionDoc {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorEntry {
    pub labels: Vec<String>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorDoc {
    pub dofs: Vec<String>,
    pub exchange: Exchange,
    pub entries: Vec<FactorEntry>,
}

impl FactorDoc {
    fn new(schema: &DofSchema, f: &Factor) -> Self {
        FactorDoc {
            dofs: f.dofs.iter().map(|&d| schema.dofs()[d].name.clone()).collect(),
            exchange: f.exchange,
            entries: f
                .entries
                .iter()
                .map(|(t, v)| FactorEntry {
                    labels: f.render_tuple(schema, t),
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorPair {
    pub left: FactorDoc,
    pub right: FactorDoc,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    pub partition: PartitionDoc,
    pub photons: u32,
    pub norm: f64,
    pub bosonic_symmetry_violation: f64,
    /// Exchanging right-group labels with the left group held fixed.
    pub right_exchange_symmetric: bool,
    pub right_exchange_violation: f64,
    /// Exchanging left-group labels with the right group held fixed.
    pub left_exchange_symmetric: bool,
    pub left_exchange_violation: f64,
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub verdict: &'static str,
    pub doubly_symmetric_remainder: f64,
    pub factors: Option<FactorPair>,
}

pub fn factorization_report(
    s: &StateVector,
    p: &DofPartition,
    limits: &Limits,
) -> Result<FactorizationReport> {
    let t = to_first_quantized(s, limits)?;
    let schmidt = schmidt_analysis(&t, p)?;
    let right = check_single_dof_symmetry(&t, p);
    let left = check_single_dof_symmetry(&t, &p.swapped());
    let (_, remainder) = project_doubly_symmetric(&t, p);
    let schema = s.schema();
    let factors = match (&schmidt.left_factor, &schmidt.right_factor) {
        (Some(l), Some(r)) => Some(FactorPair {
            left: FactorDoc::new(schema, l),
            right: FactorDoc::new(schema, r),
        }),
        _ => None,
    };
    Ok(FactorizationReport {
        partition: PartitionDoc {
            left: p.left_names().to_vec(),
            right: p.right_names().to_vec(),
        },
        photons: s.photon_number(),
        norm: s.norm(),
        bosonic_symmetry_violation: check_bosonic_symmetry(&t).max_violation,
        right_exchange_symmetric: right.symmetric,
        right_exchange_violation: right.max_violation,
        left_exchange_symmetric: left.symmetric,
        left_exchange_violation: left.max_violation,
        rank: schmidt.rank,
        singular_values: schmidt.singular_values,
        verdict: if schmidt.rank == 1 { PRODUCT_FORM } else { ENTANGLED },
        doubly_symmetric_remainder: remainder.norm_sqr().sqrt(),
        factors,
    })
}
