//! Occupation-number (second-quantized) states.
//!
//! Kets use the convention `a†^n |vac⟩ = √(n!) |n⟩`, so applying a creation
//! operator to a mode holding `n` photons multiplies the amplitude by `√(n+1)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::schema::{DofSchema, Mode, SchemaRef};

pub type C64 = Complex64;

/// Amplitudes with magnitude below this are dropped after linear operations.
pub const PRUNE_TOLERANCE: f64 = 1e-14;

/// A basis ket: sorted `(mode, count)` pairs, counts strictly positive.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockKet {
    occupation: Vec<(Mode, u32)>,
}

impl FockKet {
    pub fn vacuum() -> Self {
        FockKet::default()
    }

    /// Build a ket from arbitrary `(mode, count)` pairs; repeated modes add up
    /// and zero counts are dropped.
    pub fn from_counts<I: IntoIterator<Item = (Mode, u32)>>(counts: I) -> Self {
        let mut map: BTreeMap<Mode, u32> = BTreeMap::new();
        for (m, c) in counts {
            if c > 0 {
                *map.entry(m).or_default() += c;
            }
        }
        FockKet {
            occupation: map.into_iter().collect(),
        }
    }

    /// The ket with one photon for each listed mode (repeats allowed).
    pub fn from_modes<'a, I: IntoIterator<Item = &'a Mode>>(modes: I) -> Self {
        Self::from_counts(modes.into_iter().map(|m| (m.clone(), 1)))
    }

    pub fn occupation(&self) -> &[(Mode, u32)] {
        &self.occupation
    }

    pub fn total_photons(&self) -> u32 {
        self.occupation.iter().map(|(_, n)| n).sum()
    }

    pub fn count(&self, mode: &Mode) -> u32 {
        self.occupation
            .binary_search_by(|(m, _)| m.cmp(mode))
            .map(|i| self.occupation[i].1)
            .unwrap_or(0)
    }

    /// Modes with multiplicity, in canonical order.
    pub fn mode_multiset(&self) -> Vec<Mode> {
        self.occupation
            .iter()
            .flat_map(|(m, n)| std::iter::repeat_n(m.clone(), *n as usize))
            .collect()
    }

    /// `∏ n_m!` as a float.
    pub fn factorial_product(&self) -> f64 {
        self.occupation.iter().map(|(_, n)| factorial(*n)).product()
    }

    /// A copy with `k` more photons in `mode`.
    pub fn raised(&self, mode: &Mode, k: u32) -> FockKet {
        let mut occupation = self.occupation.clone();
        match occupation.binary_search_by(|(m, _)| m.cmp(mode)) {
            Ok(i) => occupation[i].1 += k,
            Err(i) => occupation.insert(i, (mode.clone(), k)),
        }
        FockKet { occupation }
    }

    pub fn map_modes(&self, mut f: impl FnMut(&Mode) -> Mode) -> FockKet {
        Self::from_counts(self.occupation.iter().map(|(m, n)| (f(m), *n)))
    }

    pub fn display(&self, schema: &DofSchema) -> String {
        if self.occupation.is_empty() {
            return "|vac>".to_string();
        }
        let parts: Vec<String> = self
            .occupation
            .iter()
            .map(|(m, n)| format!("{}={n}", schema.display_mode(m)))
            .collect();
        format!("|{}>", parts.join(" "))
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `√((n+k)!/n!)`, the amplitude factor for raising a mode from `n` to `n+k`.
pub fn ladder_factor(n: u32, k: u32) -> f64 {
    ((n + 1)..=(n + k)).map(f64::from).product::<f64>().sqrt()
}

/// A product of creation operators `∏ a†(m)^{e_m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CreationMonomial {
    schema: SchemaRef,
    factors: BTreeMap<Mode, u32>,
}

impl CreationMonomial {
    pub fn new(schema: SchemaRef) -> Self {
        CreationMonomial {
            schema,
            factors: BTreeMap::new(),
        }
    }

    pub fn single(schema: SchemaRef, mode: Mode, exponent: u32) -> Result<Self> {
        Self::new(schema).times(mode, exponent)
    }

    /// Multiply by `a†(mode)^exponent`.
    pub fn times(mut self, mode: Mode, exponent: u32) -> Result<Self> {
        if !self.schema.contains(&mode) {
            return Err(Error::schema(format!("mode {:?} not in schema", mode.0)));
        }
        if exponent > 0 {
            *self.factors.entry(mode).or_default() += exponent;
        }
        Ok(self)
    }

    pub fn degree(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn factors(&self) -> &BTreeMap<Mode, u32> {
        &self.factors
    }

    pub fn schema(&self) -> &SchemaRef {
        &self.schema
    }
}

/// A pure state with a fixed photon number, stored sparsely in the
/// occupation basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    schema: SchemaRef,
    photons: u32,
    terms: BTreeMap<FockKet, C64>,
}

impl PartialEq for StateVector {
    fn eq(&self, other: &Self) -> bool {
        self.photons == other.photons && *self.schema == *other.schema && self.terms == other.terms
    }
}

fn same_schema(a: &SchemaRef, b: &SchemaRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl StateVector {
    pub fn vacuum(schema: SchemaRef) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(FockKet::vacuum(), C64::new(1.0, 0.0));
        StateVector {
            schema,
            photons: 0,
            terms,
        }
    }

    /// The zero vector in the `photons`-photon sector.
    pub fn zero(schema: SchemaRef, photons: u32) -> Self {
        StateVector {
            schema,
            photons,
            terms: BTreeMap::new(),
        }
    }

    /// Build from explicit terms. Repeated kets add up; tiny amplitudes are pruned.
    pub fn from_terms<I>(schema: SchemaRef, photons: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FockKet, C64)>,
    {
        let mut state = StateVector::zero(schema, photons);
        for (ket, amp) in terms {
            if ket.total_photons() != photons {
                return Err(Error::schema(format!(
                    "ket {} has {} photons, expected {photons}",
                    ket.display(&state.schema),
                    ket.total_photons()
                )));
            }
            if let Some((m, _)) = ket.occupation().iter().find(|(m, _)| !state.schema.contains(m)) {
                return Err(Error::schema(format!("mode {:?} not in schema", m.0)));
            }
            *state.terms.entry(ket).or_default() += amp;
        }
        state.prune();
        Ok(state)
    }

    pub fn schema(&self) -> &SchemaRef {
        &self.schema
    }

    pub fn photon_number(&self) -> u32 {
        self.photons
    }

    pub fn terms(&self) -> &BTreeMap<FockKet, C64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, ket: &FockKet) -> C64 {
        self.terms.get(ket).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().fold(0.0, |s, a| s + a.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Modes that carry at least one photon in some ket.
    pub fn support_modes(&self) -> Vec<Mode> {
        let mut modes: Vec<Mode> = self
            .terms
            .keys()
            .flat_map(|k| k.occupation().iter().map(|(m, _)| m.clone()))
            .collect();
        modes.sort();
        modes.dedup();
        modes
    }

    fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= PRUNE_TOLERANCE);
    }

    fn check_compatible(&self, other: &StateVector) -> Result<()> {
        if !same_schema(&self.schema, &other.schema) {
            return Err(Error::schema(format!(
                "schemas differ: {} vs {}",
                self.schema, other.schema
            )));
        }
        Ok(())
    }

    /// Apply a product of creation operators with the standard bosonic
    /// ladder action.
    pub fn apply_creation_monomial(&self, m: &CreationMonomial) -> Result<StateVector> {
        if !same_schema(&self.schema, m.schema()) {
            return Err(Error::schema("monomial and state use different schemas"));
        }
        let terms = self.terms.iter().map(|(ket, &amp)| {
            let mut ket = ket.clone();
            let mut amp = amp;
            for (mode, &k) in m.factors() {
                amp *= ladder_factor(ket.count(mode), k);
                ket = ket.raised(mode, k);
            }
            (ket, amp)
        });
        StateVector::from_terms(self.schema.clone(), self.photons + m.degree(), terms)
    }

    /// `⟨self|other⟩`. States with different photon numbers are orthogonal.
    pub fn inner_product(&self, other: &StateVector) -> Result<C64> {
        self.check_compatible(other)?;
        if self.photons != other.photons {
            return Ok(C64::new(0.0, 0.0));
        }
        let (small, large, flip) = if self.terms.len() <= other.terms.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = C64::new(0.0, 0.0);
        for (ket, a) in &small.terms {
            if let Some(b) = large.terms.get(ket) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    /// `c1·s1 + c2·s2`.
    pub fn add(s1: &StateVector, s2: &StateVector, c1: C64, c2: C64) -> Result<StateVector> {
        s1.check_compatible(s2)?;
        if s1.photons != s2.photons {
            return Err(Error::schema(format!(
                "cannot add {}-photon and {}-photon states",
                s1.photons, s2.photons
            )));
        }
        let mut out = s1.scale(c1);
        for (ket, a) in &s2.terms {
            *out.terms.entry(ket.clone()).or_default() += c2 * a;
        }
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, c: C64) -> StateVector {
        let mut out = StateVector {
            schema: self.schema.clone(),
            photons: self.photons,
            terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect(),
        };
        out.prune();
        out
    }

    /// Unit-norm copy and the original norm.
    pub fn normalize(&self) -> Result<(StateVector, f64)> {
        let norm = self.norm();
        if norm < PRUNE_TOLERANCE {
            return Err(Error::ZeroState);
        }
        Ok((self.scale(C64::new(1.0 / norm, 0.0)), norm))
    }

    /// Re-express the state over another schema by mapping every mode.
    /// The map must be injective on the support for the result to be meaningful.
    pub fn relabel(&self, schema: SchemaRef, mut f: impl FnMut(&Mode) -> Mode) -> Result<StateVector> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(k, a)| (k.map_modes(&mut f), *a))
            .collect();
        StateVector::from_terms(schema, self.photons, terms)
    }

    /// Largest amplitude difference against `other` over the union of kets.
    pub fn max_amplitude_diff(&self, other: &StateVector) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, a) in &self.terms {
            worst = worst.max((a - other.amplitude(k)).norm());
        }
        for (k, b) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }
}
