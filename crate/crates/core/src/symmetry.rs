//! Permutation symmetry and inter-DOF entanglement of first-quantized tensors.
//!
//! Three complementary checks are provided:
//!
//! * [`check_bosonic_symmetry`]: invariance under exchanging whole photons.
//! * [`check_single_dof_symmetry`]: invariance under exchanging the labels of
//!   one DOF group while the other group stays put. Failure signals that the
//!   group is correlated with the rest.
//! * [`schmidt_analysis`]: singular values of the tensor reshaped into a
//!   (left group tuples) × (right group tuples) matrix. Rank one is exactly
//!   product form.
//!
//! The single-DOF check and the Schmidt rank do not always agree: a product
//! of two antisymmetric factors (the Bell singlet) has rank one yet fails the
//! single-DOF check. Reports keep both verdicts side by side.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::first_quantized::{distinct_orderings, FirstQuantizedTensor};
use crate::fock::C64;
use crate::schema::{DofSchema, Mode};

/// Default pass threshold for the symmetry checks.
pub const SYMMETRY_THRESHOLD: f64 = 1e-10;
/// Singular values below `RANK_THRESHOLD × largest` do not count toward rank.
pub const RANK_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BosonicSymmetryReport {
    pub max_violation: f64,
    pub worst_pair: Option<(Vec<Mode>, Vec<Mode>)>,
}

impl BosonicSymmetryReport {
    pub fn passes(&self) -> bool {
        self.max_violation < SYMMETRY_THRESHOLD
    }
}

/// Max over stored tuples and adjacent transpositions of `|f(t) − f(swap t)|`.
pub fn check_bosonic_symmetry(t: &FirstQuantizedTensor) -> BosonicSymmetryReport {
    let mut report = BosonicSymmetryReport {
        max_violation: 0.0,
        worst_pair: None,
    };
    for (tuple, f) in t.entries() {
        for i in 1..tuple.len() {
            if tuple[i - 1] == tuple[i] {
                continue;
            }
            let mut swapped = tuple.clone();
            swapped.swap(i - 1, i);
            let d = (f - t.get(&swapped)).norm();
            if d > report.max_violation {
                report.max_violation = d;
                report.worst_pair = Some((tuple.clone(), swapped));
            }
        }
    }
    report
}

/// A split of the schema's DOFs into two non-empty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofPartition {
    left: Vec<usize>,
    right: Vec<usize>,
    left_names: Vec<String>,
    right_names: Vec<String>,
}

impl DofPartition {
    pub fn new(schema: &DofSchema, left: &[&str], right: &[&str]) -> Result<Self> {
        let resolve = |names: &[&str]| -> Result<Vec<usize>> {
            let mut idx = names
                .iter()
                .map(|n| schema.require_dof(n))
                .collect::<Result<Vec<_>>>()?;
            idx.sort_unstable();
            Ok(idx)
        };
        let l = resolve(left)?;
        let r = resolve(right)?;
        if l.is_empty() || r.is_empty() {
            return Err(Error::schema("both sides of a partition must be non-empty"));
        }
        if l.windows(2).any(|w| w[0] == w[1]) || r.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::schema("partition lists a DOF twice"));
        }
        if l.iter().any(|d| r.contains(d)) {
            return Err(Error::schema("partition sides overlap"));
        }
        if l.len() + r.len() != schema.len() {
            return Err(Error::schema("partition does not cover every DOF"));
        }
        let names = |idx: &[usize]| idx.iter().map(|&d| schema.dofs()[d].name.clone()).collect();
        Ok(DofPartition {
            left_names: names(&l),
            right_names: names(&r),
            left: l,
            right: r,
        })
    }

    /// `left` against every other DOF of the schema.
    pub fn split_off(schema: &DofSchema, left: &[&str]) -> Result<Self> {
        let rest: Vec<&str> = schema
            .dofs()
            .iter()
            .map(|d| d.name.as_str())
            .filter(|n| !left.contains(n))
            .collect();
        Self::new(schema, left, &rest)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn left_names(&self) -> &[String] {
        &self.left_names
    }

    pub fn right_names(&self) -> &[String] {
        &self.right_names
    }

    pub fn swapped(&self) -> DofPartition {
        DofPartition {
            left: self.right.clone(),
            right: self.left.clone(),
            left_names: self.right_names.clone(),
            right_names: self.left_names.clone(),
        }
    }

    fn split_tuple(&self, tuple: &[Mode]) -> (Vec<Vec<u16>>, Vec<Vec<u16>>) {
        (
            tuple.iter().map(|m| m.project(&self.left)).collect(),
            tuple.iter().map(|m| m.project(&self.right)).collect(),
        )
    }

    fn join_tuple(&self, width: usize, left: &[Vec<u16>], right: &[Vec<u16>]) -> Vec<Mode> {
        left.iter()
            .zip(right)
            .map(|(l, r)| {
                let mut idx = vec![0u16; width];
                for (&d, &v) in self.left.iter().zip(l) {
                    idx[d] = v;
                }
                for (&d, &v) in self.right.iter().zip(r) {
                    idx[d] = v;
                }
                Mode(idx)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleDofReport {
    pub symmetric: bool,
    pub max_violation: f64,
    pub worst_pair: Option<(Vec<Mode>, Vec<Mode>)>,
}

/// Exchange the right-group labels of adjacent photons, holding the left
/// group fixed, and compare coefficients.
pub fn check_single_dof_symmetry(t: &FirstQuantizedTensor, p: &DofPartition) -> SingleDofReport {
    let mut worst = 0.0;
    let mut worst_pair = None;
    for (tuple, f) in t.entries() {
        for i in 1..tuple.len() {
            let mut swapped = tuple.clone();
            for &d in p.right() {
                swapped[i - 1].0[d] = tuple[i].0[d];
                swapped[i].0[d] = tuple[i - 1].0[d];
            }
            if swapped == *tuple {
                continue;
            }
            let d = (f - t.get(&swapped)).norm();
            if d > worst {
                worst = d;
                worst_pair = Some((tuple.clone(), swapped));
            }
        }
    }
    SingleDofReport {
        symmetric: worst < SYMMETRY_THRESHOLD,
        max_violation: worst,
        worst_pair,
    }
}

/// How a factor tensor behaves under exchanging two of its photon slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exchange {
    Symmetric,
    Antisymmetric,
    Mixed,
}

/// A tensor over ordered tuples of one DOF group's labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub dofs: Vec<usize>,
    pub entries: BTreeMap<Vec<Vec<u16>>, C64>,
    pub exchange: Exchange,
}

impl Factor {
    fn new(dofs: Vec<usize>, entries: BTreeMap<Vec<Vec<u16>>, C64>) -> Self {
        let exchange = classify_exchange(&entries);
        Factor {
            dofs,
            entries,
            exchange,
        }
    }

    pub fn get(&self, tuple: &[Vec<u16>]) -> C64 {
        self.entries.get(tuple).copied().unwrap_or_default()
    }

    pub fn render_tuple(&self, schema: &DofSchema, tuple: &[Vec<u16>]) -> Vec<String> {
        tuple
            .iter()
            .map(|labels| {
                labels
                    .iter()
                    .zip(&self.dofs)
                    .map(|(&l, &d)| schema.label(d, l))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect()
    }
}

fn classify_exchange(entries: &BTreeMap<Vec<Vec<u16>>, C64>) -> Exchange {
    let scale = entries.values().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = RANK_THRESHOLD * scale.max(f64::MIN_POSITIVE);
    let (mut sym, mut anti) = (true, true);
    for (tuple, f) in entries {
        for i in 1..tuple.len() {
            let mut swapped = tuple.clone();
            swapped.swap(i - 1, i);
            let g = entries.get(&swapped).copied().unwrap_or_default();
            if (f - g).norm() > tol {
                sym = false;
            }
            if (f + g).norm() > tol {
                anti = false;
            }
        }
    }
    match (sym, anti) {
        (true, _) => Exchange::Symmetric,
        (false, true) => Exchange::Antisymmetric,
        _ => Exchange::Mixed,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtReport {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub left_factor: Option<Factor>,
    pub right_factor: Option<Factor>,
}

impl SchmidtReport {
    pub fn is_product(&self) -> bool {
        self.rank == 1
    }
}

pub fn schmidt_analysis(t: &FirstQuantizedTensor, p: &DofPartition) -> Result<SchmidtReport> {
    if t.is_empty() {
        return Err(Error::ZeroState);
    }
    let mut rows: BTreeMap<Vec<Vec<u16>>, usize> = BTreeMap::new();
    let mut cols: BTreeMap<Vec<Vec<u16>>, usize> = BTreeMap::new();
    let mut cells = Vec::with_capacity(t.len());
    for (tuple, f) in t.entries() {
        let (l, r) = p.split_tuple(tuple);
        let nr = rows.len();
        let i = *rows.entry(l).or_insert(nr);
        let nc = cols.len();
        let j = *cols.entry(r).or_insert(nc);
        cells.push((i, j, *f));
    }
    let mut m = DMatrix::<C64>::zeros(rows.len(), cols.len());
    for (i, j, f) in cells {
        m[(i, j)] = f;
    }
    let svd = m.svd(true, true);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let largest = singular_values[0];
    let rank = singular_values
        .iter()
        .filter(|&&s| s > RANK_THRESHOLD * largest)
        .count();

    let (mut left_factor, mut right_factor) = (None, None);
    if rank == 1 {
        let k = order[0];
        let u = svd.u.as_ref().expect("svd computed with u");
        let v_t = svd.v_t.as_ref().expect("svd computed with v_t");
        let root = largest.sqrt();
        let mut left: BTreeMap<Vec<Vec<u16>>, C64> = rows
            .iter()
            .map(|(key, &i)| (key.clone(), u[(i, k)] * root))
            .collect();
        let mut right: BTreeMap<Vec<Vec<u16>>, C64> = cols
            .iter()
            .map(|(key, &j)| (key.clone(), v_t[(k, j)] * root))
            .collect();
        // Fix the free phase: the largest left entry becomes real positive.
        if let Some(pivot) = left
            .values()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        {
            let phase = pivot.conj() / pivot.norm();
            left.values_mut().for_each(|x| *x *= phase);
            right.values_mut().for_each(|x| *x *= phase.conj());
        }
        let drop = |map: &mut BTreeMap<Vec<Vec<u16>>, C64>| {
            let tol = RANK_THRESHOLD * root;
            map.retain(|_, x| x.norm() > tol);
        };
        drop(&mut left);
        drop(&mut right);
        left_factor = Some(Factor::new(p.left().to_vec(), left));
        right_factor = Some(Factor::new(p.right().to_vec(), right));
    }
    Ok(SchmidtReport {
        singular_values,
        rank,
        left_factor,
        right_factor,
    })
}

/// Orthogonal projection onto the span of `Sym(left multiset) ⊗ Sym(right
/// multiset)` product tensors. Returns `(symmetric_part, remainder)` with
/// `symmetric_part + remainder = t`.
pub fn project_doubly_symmetric(
    t: &FirstQuantizedTensor,
    p: &DofPartition,
) -> (FirstQuantizedTensor, FirstQuantizedTensor) {
    type Key = (Vec<Vec<u16>>, Vec<Vec<u16>>);
    let mut overlaps: BTreeMap<Key, C64> = BTreeMap::new();
    for (tuple, f) in t.entries() {
        let (mut l, mut r) = p.split_tuple(tuple);
        l.sort();
        r.sort();
        *overlaps.entry((l, r)).or_default() += f;
    }
    let width = t.schema().len();
    let mut sym = BTreeMap::new();
    for ((l, r), sum) in overlaps {
        let lo = distinct_orderings(&l);
        let ro = distinct_orderings(&r);
        // Each basis vector has entries 1/√(|lo|·|ro|); projecting twice
        // brings in that factor squared.
        let value = sum / (lo.len() * ro.len()) as f64;
        for a in &lo {
            for b in &ro {
                *sym.entry(p.join_tuple(width, a, b)).or_insert(C64::new(0.0, 0.0)) += value;
            }
        }
    }
    let sym =
        FirstQuantizedTensor::from_map_unchecked(t.schema().clone(), t.photon_number(), sym);
    let remainder = t.sub(&sym);
    (sym, remainder)
}
