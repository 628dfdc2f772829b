//! Builders for NOON, GHZ and down-conversion states, and spectral profiles.

use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{CreationMonomial, FockKet, StateVector, C64};
use crate::schema::{
    self, is_identifier, DofSchema, Mode, SchemaRef, FREQUENCY, H, POLARIZATION, SPATIAL, V,
};

/// Real spectral amplitudes `φ(α)` over a finite frequency alphabet with
/// `Σ φ² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    labels: Vec<String>,
    amplitudes: Vec<f64>,
}

pub const PROFILE_NORM_TOLERANCE: f64 = 1e-10;

impl SpectralProfile {
    /// Accepts only already-normalized amplitudes.
    pub fn new(labels: Vec<String>, amplitudes: Vec<f64>) -> Result<Self> {
        Self::validate(&labels, &amplitudes)?;
        let total: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (total - 1.0).abs() > PROFILE_NORM_TOLERANCE {
            return Err(Error::Profile(format!(
                "squared amplitudes sum to {total}, expected 1"
            )));
        }
        Ok(SpectralProfile { labels, amplitudes })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(labels: Vec<String>, amplitudes: Vec<f64>) -> Result<Self> {
        Self::validate(&labels, &amplitudes)?;
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Profile("all amplitudes are zero".into()));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(SpectralProfile { labels, amplitudes })
    }

    fn validate(labels: &[String], amplitudes: &[f64]) -> Result<()> {
        if labels.is_empty() {
            return Err(Error::Profile("profile has no labels".into()));
        }
        if labels.len() != amplitudes.len() {
            return Err(Error::Profile("labels and amplitudes differ in length".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if !is_identifier(l) {
                return Err(Error::Profile(format!("bad frequency label {l:?}")));
            }
            if labels[..i].contains(l) {
                return Err(Error::Profile(format!("duplicate frequency label {l:?}")));
            }
        }
        if let Some(a) = amplitudes.iter().find(|a| !a.is_finite()) {
            return Err(Error::Profile(format!("non-finite amplitude {a}")));
        }
        Ok(())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> KValue {
        compute_k(self)
    }
}

/// `K = Σ φ⁴`, in `(0, 1]`; equal to 1 only for a single frequency.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct KValue(f64);

impl KValue {
    pub fn new(value: f64) -> Result<Self> {
        if !(value > 0.0 && value <= 1.0 + PROFILE_NORM_TOLERANCE) {
            return Err(Error::Profile(format!("K must lie in (0, 1], got {value}")));
        }
        Ok(KValue(value.min(1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for KValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn compute_k(profile: &SpectralProfile) -> KValue {
    KValue(profile.amplitudes.iter().map(|a| a.powi(4)).sum::<f64>().min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Point,
    Uniform(usize),
    /// Amplitudes `∝ exp(−(i − center)²/(2·width²))` on `d` labels.
    Gaussian { d: usize, width: f64 },
    Custom(Vec<(String, f64)>),
}

fn generated_labels(d: usize) -> Vec<String> {
    (0..d).map(|i| format!("w{i}")).collect()
}

pub fn make_profile(kind: &ProfileKind) -> Result<SpectralProfile> {
    match kind {
        ProfileKind::Point => SpectralProfile::new(generated_labels(1), vec![1.0]),
        ProfileKind::Uniform(d) => {
            if *d == 0 {
                return Err(Error::Profile("uniform profile needs d ≥ 1".into()));
            }
            SpectralProfile::normalized(generated_labels(*d), vec![1.0; *d])
        }
        ProfileKind::Gaussian { d, width } => {
            if *d == 0 {
                return Err(Error::Profile("gaussian profile needs d ≥ 1".into()));
            }
            if !(*width > 0.0 && width.is_finite()) {
                return Err(Error::Profile(format!("gaussian width must be positive, got {width}")));
            }
            let center = (*d as f64 - 1.0) / 2.0;
            let amps = (0..*d)
                .map(|i| {
                    let x = i as f64 - center;
                    (-(x * x) / (2.0 * width * width)).exp()
                })
                .collect();
            SpectralProfile::normalized(generated_labels(*d), amps)
        }
        ProfileKind::Custom(pairs) => {
            let (labels, amps) = pairs.iter().cloned().unzip();
            SpectralProfile::normalized(labels, amps)
        }
    }
}

/// A builder output: the unit-norm state plus the norm of the
/// creation-operator expression it came from.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub state: StateVector,
    pub raw_norm: f64,
}

fn vacuum_apply(schema: &SchemaRef, factors: &[(Mode, u32)], coef: C64) -> Result<StateVector> {
    let mut m = CreationMonomial::new(schema.clone());
    for (mode, e) in factors {
        m = m.times(mode.clone(), *e)?;
    }
    Ok(StateVector::vacuum(schema.clone()).apply_creation_monomial(&m)?.scale(coef))
}

fn sum_states(schema: &SchemaRef, photons: u32, parts: Vec<StateVector>) -> Result<StateVector> {
    let one = C64::new(1.0, 0.0);
    parts
        .into_iter()
        .try_fold(StateVector::zero(schema.clone(), photons), |acc, s| {
            StateVector::add(&acc, &s, one, one)
        })
}

/// The mode with the given polarization and label 0 in every DOF other than
/// polarization and (optionally) the spatial DOF.
fn mode_at(schema: &DofSchema, pol_dof: usize, pol: u16, spatial: Option<(usize, u16)>) -> Mode {
    let mut idx = vec![0u16; schema.len()];
    idx[pol_dof] = pol;
    if let Some((d, s)) = spatial {
        idx[d] = s;
    }
    Mode(idx)
}

/// `(a†(H,S)^N + a†(V,S)^N)|vac⟩/√(2·N!)`. Uses the first spatial label and
/// the first label of any other DOF.
pub fn build_noon(n: u32, schema: &SchemaRef) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::schema("NOON state needs N ≥ 1"));
    }
    let sp = schema.require_dof(SPATIAL)?;
    let pol = schema.require_polarization()?;
    let coef = C64::new(1.0 / (2.0 * crate::fock::factorial(n)).sqrt(), 0.0);
    let h = vacuum_apply(schema, &[(mode_at(schema, pol, H, Some((sp, 0))), n)], coef)?;
    let v = vacuum_apply(schema, &[(mode_at(schema, pol, V, Some((sp, 0))), n)], coef)?;
    sum_states(schema, n, vec![h, v])
}

pub fn noon(n: u32) -> Result<StateVector> {
    build_noon(n, &schema::single_mode_schema())
}

/// `(∏ a†(H,S_i) + ∏ a†(V,S_i))|vac⟩/√2` over the first `N` spatial labels.
pub fn build_ghz(n: u32, schema: &SchemaRef) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::schema("GHZ state needs N ≥ 1"));
    }
    let sp = schema.require_dof(SPATIAL)?;
    let pol = schema.require_polarization()?;
    let arms = schema.dofs()[sp].labels.len();
    if arms < n as usize {
        return Err(Error::schema(format!(
            "GHZ({n}) needs {n} spatial labels, schema has {arms}"
        )));
    }
    let coef = C64::new(0.5f64.sqrt(), 0.0);
    let branch = |p: u16| -> Vec<(Mode, u32)> {
        (0..n as u16)
            .map(|i| (mode_at(schema, pol, p, Some((sp, i))), 1))
            .collect()
    };
    let h = vacuum_apply(schema, &branch(H), coef)?;
    let v = vacuum_apply(schema, &branch(V), coef)?;
    sum_states(schema, n, vec![h, v])
}

pub fn ghz(n: u32) -> Result<StateVector> {
    build_ghz(n, &schema::multi_arm_schema(n as usize)?)
}

/// Spatial `[S]` × polarization × the profile's frequency labels.
pub fn pdc_schema(profile: &SpectralProfile) -> Result<SchemaRef> {
    schema::single_mode_frequency_schema(profile.labels())
}

fn pdc_mode(pol: u16, freq: usize) -> Mode {
    // pdc_schema order: spatial, pol, freq
    Mode(vec![0, pol, freq as u16])
}

/// Apply `Σ_terms coef·monomial` to a state.
fn apply_operator(
    schema: &SchemaRef,
    terms: &[(C64, CreationMonomial)],
    s: &StateVector,
    photons_added: u32,
) -> Result<StateVector> {
    let one = C64::new(1.0, 0.0);
    terms.iter().try_fold(
        StateVector::zero(schema.clone(), s.photon_number() + photons_added),
        |acc, (c, m)| StateVector::add(&acc, &s.apply_creation_monomial(m)?, one, *c),
    )
}

/// The pair-creation operator `Σ_α φ(α)[a†²(H,α) + a†²(V,α)]`.
fn pair_operator(schema: &SchemaRef, profile: &SpectralProfile) -> Result<Vec<(C64, CreationMonomial)>> {
    let mut terms = Vec::new();
    for (i, &phi) in profile.amplitudes().iter().enumerate() {
        for pol in [H, V] {
            terms.push((
                C64::new(phi, 0.0),
                CreationMonomial::single(schema.clone(), pdc_mode(pol, i), 2)?,
            ));
        }
    }
    Ok(terms)
}

/// `(1/√2)·Σ_α φ(α)[a†²(H,α) + a†²(V,α)]|vac⟩`, not normalized (norm √2).
pub fn pdc_two_photon_raw(profile: &SpectralProfile) -> Result<StateVector> {
    let schema = pdc_schema(profile)?;
    let op = pair_operator(&schema, profile)?;
    Ok(apply_operator(&schema, &op, &StateVector::vacuum(schema.clone()), 2)?
        .scale(C64::new(0.5f64.sqrt(), 0.0)))
}

pub fn build_pdc_two_photon(profile: &SpectralProfile) -> Result<Prepared> {
    let raw = pdc_two_photon_raw(profile)?;
    let (state, raw_norm) = raw.normalize()?;
    Ok(Prepared { state, raw_norm })
}

/// `½·(Σ_α φ(α)[a†²(H,α) + a†²(V,α)])²|vac⟩`, not normalized.
pub fn pdc_four_photon_raw(profile: &SpectralProfile) -> Result<StateVector> {
    let schema = pdc_schema(profile)?;
    let op = pair_operator(&schema, profile)?;
    let once = apply_operator(&schema, &op, &StateVector::vacuum(schema.clone()), 2)?;
    let twice = apply_operator(&schema, &op, &once, 2)?;
    Ok(twice.scale(C64::new(0.5, 0.0)))
}

pub fn build_pdc_four_photon(profile: &SpectralProfile) -> Result<Prepared> {
    let raw = pdc_four_photon_raw(profile)?;
    let (state, raw_norm) = raw.normalize()?;
    Ok(Prepared { state, raw_norm })
}

/// The two monomial groups of the four-photon state, both un-normalized,
/// with `½(a + b)` equal to [`pdc_four_photon_raw`].
#[derive(Debug, Clone)]
pub struct FourPhotonParts {
    /// Same-polarization pairs at any frequencies, plus `H²V²` at equal
    /// frequency. Polarization is uncorrelated with frequency here.
    pub a: StateVector,
    /// `H²(α)V²(β)` cross terms with `α ≠ β`.
    pub b: StateVector,
}

pub fn build_four_photon_parts(profile: &SpectralProfile) -> Result<FourPhotonParts> {
    let schema = pdc_schema(profile)?;
    let phi = profile.amplitudes();
    let d = phi.len();
    let mut a_parts = Vec::new();
    let mut b_parts = Vec::new();
    for i in 0..d {
        let w = C64::new(phi[i] * phi[i], 0.0);
        a_parts.push(vacuum_apply(&schema, &[(pdc_mode(H, i), 4)], w)?);
        a_parts.push(vacuum_apply(&schema, &[(pdc_mode(V, i), 4)], w)?);
        // The equal-frequency H²V² term appears twice.
        a_parts.push(vacuum_apply(&schema, &[(pdc_mode(H, i), 2), (pdc_mode(V, i), 2)], w * 2.0)?);
        for j in 0..d {
            if i == j {
                continue;
            }
            let w = C64::new(phi[i] * phi[j], 0.0);
            for pol in [H, V] {
                a_parts.push(vacuum_apply(&schema, &[(pdc_mode(pol, i), 2), (pdc_mode(pol, j), 2)], w)?);
            }
            b_parts.push(vacuum_apply(&schema, &[(pdc_mode(H, i), 2), (pdc_mode(V, j), 2)], w)?);
            b_parts.push(vacuum_apply(&schema, &[(pdc_mode(H, j), 2), (pdc_mode(V, i), 2)], w)?);
        }
    }
    Ok(FourPhotonParts {
        a: sum_states(&schema, 4, a_parts)?,
        b: sum_states(&schema, 4, b_parts)?,
    })
}

/// `(a†(H,w0)a†(V,w1) − a†(H,w1)a†(V,w0))|vac⟩/√2` in one spatial mode:
/// antisymmetric in polarization and in frequency, symmetric overall.
pub fn bell_singlet() -> Result<StateVector> {
    let freqs = vec!["w0".to_string(), "w1".to_string()];
    let schema = schema::single_mode_frequency_schema(&freqs)?;
    let r = 0.5f64.sqrt();
    StateVector::from_terms(
        schema,
        2,
        [
            (FockKet::from_modes([&pdc_mode(H, 0), &pdc_mode(V, 1)]), C64::new(r, 0.0)),
            (FockKet::from_modes([&pdc_mode(H, 1), &pdc_mode(V, 0)]), C64::new(-r, 0.0)),
        ],
    )
}

/// The single-frequency four-photon state with two H and two V photons,
/// `a†²(H)a†²(V)|vac⟩/2`, which spreads evenly over the six orderings of HHVV.
pub fn hhvv_symmetric() -> Result<StateVector> {
    let profile = make_profile(&ProfileKind::Point)?;
    let schema = pdc_schema(&profile)?;
    vacuum_apply(&schema, &[(pdc_mode(H, 0), 2), (pdc_mode(V, 0), 2)], C64::new(0.5, 0.0))
}

/// Check that a state lives on a schema with spatial, polarization and
/// frequency DOFs in that order (the PDC layout).
pub fn is_pdc_layout(schema: &DofSchema) -> bool {
    schema.len() == 3
        && schema.dof_index(SPATIAL) == Some(0)
        && schema.dof_index(POLARIZATION) == Some(1)
        && schema.dof_index(FREQUENCY) == Some(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(s: &StateVector, counts: &[(Mode, u32)]) -> C64 {
        s.amplitude(&FockKet::from_counts(counts.iter().cloned()))
    }

    #[test]
    fn noon_has_two_equal_kets() {
        let s = noon(4).unwrap();
        let sch = s.schema().clone();
        let r = 0.5f64.sqrt();
        assert_eq!(s.len(), 2);
        assert!((amp(&s, &[(sch.mode(&["S", "H"]).unwrap(), 4)]).re - r).abs() < 1e-12);
        assert!((amp(&s, &[(sch.mode(&["S", "V"]).unwrap(), 4)]).re - r).abs() < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert_eq!(noon(1).unwrap().len(), 2);
    }

    #[test]
    fn noon_needs_polarization() {
        let bad = std::sync::Arc::new(DofSchema::new([("spatial", vec!["S"])]).unwrap());
        assert!(matches!(build_noon(2, &bad), Err(Error::Schema(_))));
    }

    #[test]
    fn ghz_has_one_photon_per_arm() {
        let s = ghz(3).unwrap();
        assert_eq!(s.len(), 2);
        for ket in s.terms().keys() {
            assert_eq!(ket.occupation().len(), 3);
        }
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let short = schema::multi_arm_schema(2).unwrap();
        assert!(matches!(build_ghz(3, &short), Err(Error::Schema(_))));
    }

    #[test]
    fn k_values() {
        assert!((make_profile(&ProfileKind::Uniform(4)).unwrap().k().value() - 0.25).abs() < 1e-15);
        assert_eq!(make_profile(&ProfileKind::Point).unwrap().k().value(), 1.0);
        let custom = make_profile(&ProfileKind::Custom(vec![
            ("a".into(), 0.8f64.sqrt()),
            ("b".into(), 0.2f64.sqrt()),
        ]))
        .unwrap();
        assert!((custom.k().value() - 0.68).abs() < 1e-12);
        assert!(make_profile(&ProfileKind::Custom(vec![("a".into(), 0.0)])).is_err());
        assert!(make_profile(&ProfileKind::Uniform(0)).is_err());
        assert!(SpectralProfile::new(vec!["a".into(), "b".into()], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn k_decreases_as_uniform_profile_widens() {
        let mut last = 1.0 + 1e-9;
        for d in 1..12 {
            let k = make_profile(&ProfileKind::Uniform(d)).unwrap().k().value();
            assert!(k < last);
            last = k;
        }
    }

    #[test]
    fn gaussian_is_normalized_and_symmetric() {
        let p = make_profile(&ProfileKind::Gaussian { d: 5, width: 1.0 }).unwrap();
        let a = p.amplitudes();
        assert!((a.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((a[0] - a[4]).abs() < 1e-15 && a[2] > a[1]);
    }

    #[test]
    fn two_photon_amplitudes() {
        let point = build_pdc_two_photon(&make_profile(&ProfileKind::Point).unwrap()).unwrap();
        assert_eq!(point.state.len(), 2);
        assert!((point.raw_norm - 2f64.sqrt()).abs() < 1e-12);
        for a in point.state.terms().values() {
            assert!((a.re - 0.5f64.sqrt()).abs() < 1e-12);
        }
        let two = build_pdc_two_photon(&make_profile(&ProfileKind::Uniform(2)).unwrap()).unwrap();
        assert_eq!(two.state.len(), 4);
        for a in two.state.terms().values() {
            assert!((a.re - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn point_profile_four_photon_support() {
        let s = pdc_four_photon_raw(&make_profile(&ProfileKind::Point).unwrap()).unwrap();
        let h = pdc_mode(H, 0);
        let v = pdc_mode(V, 0);
        assert_eq!(s.len(), 3);
        assert!(amp(&s, &[(h.clone(), 4)]).norm() > 0.0);
        assert!(amp(&s, &[(v.clone(), 4)]).norm() > 0.0);
        assert!(amp(&s, &[(h, 2), (v, 2)]).norm() > 0.0);
        let parts = build_four_photon_parts(&make_profile(&ProfileKind::Point).unwrap()).unwrap();
        assert!(parts.b.is_empty());
    }

    #[test]
    fn missing_hv_hv_term() {
        let s = pdc_four_photon_raw(&make_profile(&ProfileKind::Uniform(2)).unwrap()).unwrap();
        let cross = FockKet::from_modes([&pdc_mode(H, 0), &pdc_mode(V, 0), &pdc_mode(H, 1), &pdc_mode(V, 1)]);
        assert_eq!(s.amplitude(&cross), C64::new(0.0, 0.0));
        assert!(amp(&s, &[(pdc_mode(H, 0), 2), (pdc_mode(V, 1), 2)]).norm() > 0.0);
    }

    #[test]
    fn singlet_and_hhvv_are_unit_norm() {
        assert!((bell_singlet().unwrap().norm() - 1.0).abs() < 1e-12);
        assert!((hhvv_symmetric().unwrap().norm() - 1.0).abs() < 1e-12);
    }
}
