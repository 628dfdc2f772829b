//! First-quantized view: a coefficient function over ordered photon tuples.
//!
//! A ket with occupations `{n_m}` and amplitude `c` spreads over every
//! distinct ordering of its mode multiset with coefficient
//! `c·√(∏n_m!/N!)`. The map is an isometry onto the bosonic-symmetric
//! subspace, and [`from_first_quantized`] is its adjoint.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{factorial, FockKet, StateVector, C64, PRUNE_TOLERANCE};
use crate::schema::{Mode, SchemaRef};
use crate::symmetry::check_bosonic_symmetry;

/// Size limits for the first-quantized expansion, whose tuple space grows
/// as `M^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_photons: u32,
    pub max_modes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_photons: 6,
            max_modes: 16,
        }
    }
}

impl Limits {
    pub(crate) fn check_photons(&self, n: u32) -> Result<()> {
        if n > self.max_photons {
            return Err(Error::Capacity {
                what: "photon number",
                value: n as usize,
                limit: self.max_photons as usize,
            });
        }
        Ok(())
    }
}

/// Symmetry tolerance accepted by [`from_first_quantized`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FirstQuantizedTensor {
    schema: SchemaRef,
    photons: u32,
    entries: BTreeMap<Vec<Mode>, C64>,
}

impl FirstQuantizedTensor {
    /// Build a tensor from explicit entries. Every tuple must have length
    /// `photons` and use modes of `schema`.
    pub fn from_entries<I>(schema: SchemaRef, photons: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Mode>, C64)>,
    {
        let mut map = BTreeMap::new();
        for (tuple, f) in entries {
            if tuple.len() != photons as usize {
                return Err(Error::schema(format!(
                    "tuple of length {} in a {photons}-photon tensor",
                    tuple.len()
                )));
            }
            if let Some(m) = tuple.iter().find(|m| !schema.contains(m)) {
                return Err(Error::schema(format!("mode {:?} not in schema", m.0)));
            }
            *map.entry(tuple).or_insert(C64::new(0.0, 0.0)) += f;
        }
        map.retain(|_, f: &mut C64| f.norm() >= PRUNE_TOLERANCE);
        Ok(FirstQuantizedTensor {
            schema,
            photons,
            entries: map,
        })
    }

    pub fn schema(&self) -> &SchemaRef {
        &self.schema
    }

    pub fn photon_number(&self) -> u32 {
        self.photons
    }

    pub fn entries(&self) -> &BTreeMap<Vec<Mode>, C64> {
        &self.entries
    }

    pub fn get(&self, tuple: &[Mode]) -> C64 {
        self.entries.get(tuple).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().fold(0.0, |s, f| s + f.norm_sqr())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ conj(self)·other` over tuples.
    pub fn inner_product(&self, other: &FirstQuantizedTensor) -> C64 {
        self.entries
            .iter()
            .filter_map(|(t, a)| other.entries.get(t).map(|b| a.conj() * b))
            .sum()
    }

    pub(crate) fn from_map_unchecked(
        schema: SchemaRef,
        photons: u32,
        mut entries: BTreeMap<Vec<Mode>, C64>,
    ) -> Self {
        entries.retain(|_, f| f.norm() >= PRUNE_TOLERANCE);
        FirstQuantizedTensor {
            schema,
            photons,
            entries,
        }
    }

    /// `self − other` entrywise.
    pub fn sub(&self, other: &FirstQuantizedTensor) -> FirstQuantizedTensor {
        let mut entries = self.entries.clone();
        for (t, b) in &other.entries {
            *entries.entry(t.clone()).or_default() -= b;
        }
        Self::from_map_unchecked(self.schema.clone(), self.photons, entries)
    }

    pub fn scale(&self, c: C64) -> FirstQuantizedTensor {
        let entries = self.entries.iter().map(|(t, f)| (t.clone(), f * c)).collect();
        Self::from_map_unchecked(self.schema.clone(), self.photons, entries)
    }
}

/// Lexicographic successor of `v`; returns false at the last permutation.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every distinct ordering of a multiset, starting from its sorted form.
pub(crate) fn distinct_orderings<T: Ord + Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut v = items.to_vec();
    v.sort();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

pub fn to_first_quantized(s: &StateVector, limits: &Limits) -> Result<FirstQuantizedTensor> {
    limits.check_photons(s.photon_number())?;
    let modes = s.support_modes().len();
    if modes > limits.max_modes {
        return Err(Error::Capacity {
            what: "occupied mode count",
            value: modes,
            limit: limits.max_modes,
        });
    }
    let n_fact = factorial(s.photon_number());
    let mut entries = BTreeMap::new();
    for (ket, &amp) in s.terms() {
        let f = amp * (ket.factorial_product() / n_fact).sqrt();
        for tuple in distinct_orderings(&ket.mode_multiset()) {
            entries.insert(tuple, f);
        }
    }
    Ok(FirstQuantizedTensor::from_map_unchecked(
        s.schema().clone(),
        s.photon_number(),
        entries,
    ))
}

/// Inverse of [`to_first_quantized`]. Rejects tensors that are not
/// bosonic-symmetric within [`SYMMETRY_TOLERANCE`].
pub fn from_first_quantized(t: &FirstQuantizedTensor) -> Result<StateVector> {
    let report = check_bosonic_symmetry(t);
    if report.max_violation >= SYMMETRY_TOLERANCE {
        let (a, b) = report
            .worst_pair
            .as_ref()
            .map(|(a, b)| (t.schema().display_tuple(a), t.schema().display_tuple(b)))
            .unwrap_or_default();
        return Err(Error::Symmetry {
            violation: report.max_violation,
            pair: (a, b),
        });
    }
    let n_fact = factorial(t.photon_number());
    // Sum f over the orderings of each multiset; the ket amplitude is that
    // sum times √(∏n!/N!).
    let mut sums: BTreeMap<FockKet, C64> = BTreeMap::new();
    for (tuple, f) in t.entries() {
        *sums.entry(FockKet::from_modes(tuple)).or_default() += f;
    }
    let terms = sums
        .into_iter()
        .map(|(ket, sum)| {
            let factor = (ket.factorial_product() / n_fact).sqrt();
            (ket, sum * factor)
        })
        .collect::<Vec<_>>();
    StateVector::from_terms(t.schema().clone(), t.photon_number(), terms)
}
