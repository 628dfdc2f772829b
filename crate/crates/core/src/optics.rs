//! Linear-optics networks and threshold-detector coincidences.
//!
//! Every element acts on single-photon creation operators over
//! `(arm, polarization)` modes and leaves all other DOFs (frequency) alone.
//! A multiphoton state is propagated by substituting each creation operator
//! with its image and expanding the product.
//!
//! Conventions:
//! * beam splitter with reflectivity `r`: reflected amplitude `i√r`,
//!   transmitted `√(1−r)`;
//! * wave plate with retardance `Γ` and fast axis at `θ`:
//!   `R(θ)·diag(1, e^{iΓ})·R(−θ)`, so a half-wave plate at `θ` is the
//!   reflection with axis `2θ` and a quarter-wave plate at 0 is `diag(1, i)`;
//! * polarizer with pass state `p`: the rank-one map `|p⟩⟨p|`. The blocked
//!   component is discarded and the norm is not restored.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::BuildHasherDefault;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::first_quantized::Limits;
use crate::fock::{FockKet, StateVector, C64};
use crate::schema::{Mode, SchemaRef, H, SPATIAL, V};

pub const UNITARITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Element {
    /// Unitary over the listed arms, identical for both polarizations.
    /// `matrix[i][j]` is the amplitude from `arms[j]` into `arms[i]`, as
    /// `[re, im]`.
    Multiport {
        arms: Vec<usize>,
        matrix: Vec<Vec<[f64; 2]>>,
    },
    BeamSplitter {
        arms: [usize; 2],
        reflectivity: f64,
    },
    /// `a†(V) → e^{iφ} a†(V)` on the listed arms; an empty list means all arms.
    PolarizationPhase {
        #[serde(default)]
        arms: Vec<usize>,
        phase: f64,
    },
    /// `a†(V, arm) → e^{iδ} a†(V, arm)`.
    ArmDelay { arm: usize, phase: f64 },
    WavePlate {
        arm: usize,
        retardance: f64,
        angle: f64,
    },
    HalfWavePlate { arm: usize, angle: f64 },
    QuarterWavePlate { arm: usize, angle: f64 },
    /// Passes `cos θ |H⟩ + e^{iχ} sin θ |V⟩` (θ = `angle`, χ = `phase`).
    Polarizer {
        arm: usize,
        angle: f64,
        #[serde(default)]
        phase: f64,
    },
}

fn cis(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Jones matrix of a wave plate; columns are images of `H` and `V`.
pub fn wave_plate_jones(retardance: f64, angle: f64) -> [[C64; 2]; 2] {
    let (s, c) = angle.sin_cos();
    let e = cis(retardance);
    let off = real(c * s) * (real(1.0) - e);
    [
        [real(c * c) + e * (s * s), off],
        [off, real(s * s) + e * (c * c)],
    ]
}

pub fn polarizer_jones(angle: f64, phase: f64) -> [[C64; 2]; 2] {
    let p = [real(angle.cos()), cis(phase) * angle.sin()];
    [
        [p[0] * p[0].conj(), p[0] * p[1].conj()],
        [p[1] * p[0].conj(), p[1] * p[1].conj()],
    ]
}

impl Element {
    pub fn half_wave_plate(arm: usize, angle: f64) -> Self {
        Element::HalfWavePlate { arm, angle }
    }

    pub fn quarter_wave_plate(arm: usize, angle: f64) -> Self {
        Element::QuarterWavePlate { arm, angle }
    }

    pub fn polarizer(arm: usize, angle: f64) -> Self {
        Element::Polarizer { arm, angle, phase: 0.0 }
    }

    pub fn multiport(arms: Vec<usize>, unitary: &DMatrix<C64>) -> Self {
        let matrix = (0..unitary.nrows())
            .map(|i| (0..unitary.ncols()).map(|j| [unitary[(i, j)].re, unitary[(i, j)].im]).collect())
            .collect();
        Element::Multiport { arms, matrix }
    }

    fn arms_touched(&self) -> Vec<usize> {
        match self {
            Element::Multiport { arms, .. } | Element::PolarizationPhase { arms, .. } => arms.clone(),
            Element::BeamSplitter { arms, .. } => arms.to_vec(),
            Element::ArmDelay { arm, .. }
            | Element::WavePlate { arm, .. }
            | Element::HalfWavePlate { arm, .. }
            | Element::QuarterWavePlate { arm, .. }
            | Element::Polarizer { arm, .. } => vec![*arm],
        }
    }

    fn check_finite(&self) -> bool {
        let vals: Vec<f64> = match self {
            Element::Multiport { matrix, .. } => matrix.iter().flatten().flatten().copied().collect(),
            Element::BeamSplitter { reflectivity, .. } => vec![*reflectivity],
            Element::PolarizationPhase { phase, .. } | Element::ArmDelay { phase, .. } => vec![*phase],
            Element::WavePlate { retardance, angle, .. } => vec![*retardance, *angle],
            Element::HalfWavePlate { angle, .. } | Element::QuarterWavePlate { angle, .. } => vec![*angle],
            Element::Polarizer { angle, phase, .. } => vec![*angle, *phase],
        };
        vals.iter().all(|v| v.is_finite())
    }

    fn multiport_matrix(matrix: &[Vec<[f64; 2]>]) -> DMatrix<C64> {
        let k = matrix.len();
        DMatrix::from_fn(k, k, |i, j| C64::new(matrix[i][j][0], matrix[i][j][1]))
    }

    fn validate(&self, arms: usize) -> Result<()> {
        if !self.check_finite() {
            return Err(Error::network(format!("non-finite parameter in {self:?}")));
        }
        let touched = self.arms_touched();
        if let Some(a) = touched.iter().find(|&&a| a >= arms) {
            return Err(Error::network(format!("arm {a} out of range (network has {arms})")));
        }
        let mut sorted = touched.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::network("element lists an arm twice"));
        }
        match self {
            Element::Multiport { arms, matrix } => {
                if arms.is_empty() || matrix.len() != arms.len() || matrix.iter().any(|r| r.len() != arms.len()) {
                    return Err(Error::network("multiport matrix must be square over its arms"));
                }
                let u = Self::multiport_matrix(matrix);
                let dev = (u.adjoint() * &u - DMatrix::identity(arms.len(), arms.len())).camax();
                if dev > UNITARITY_TOLERANCE {
                    return Err(Error::network(format!("multiport is not unitary (deviation {dev:.3e})")));
                }
            }
            Element::BeamSplitter { reflectivity, .. } if !(0.0..=1.0).contains(reflectivity) => {
                return Err(Error::network(format!("reflectivity {reflectivity} outside [0, 1]")));
            }
            _ => {}
        }
        Ok(())
    }

    /// Single-photon matrix over all `2·arms` modes (index `2·arm + pol`).
    fn matrix(&self, arms: usize) -> DMatrix<C64> {
        let dim = 2 * arms;
        let mut m = DMatrix::<C64>::identity(dim, dim);
        let idx = |arm: usize, pol: u16| 2 * arm + pol as usize;
        let mut set_block = |arm: usize, j: [[C64; 2]; 2]| {
            for q in 0..2u16 {
                for r in 0..2u16 {
                    m[(idx(arm, q), idx(arm, r))] = j[q as usize][r as usize];
                }
            }
        };
        match self {
            Element::Multiport { arms: list, matrix } => {
                let u = Self::multiport_matrix(matrix);
                for (i, &ai) in list.iter().enumerate() {
                    for (j, &aj) in list.iter().enumerate() {
                        for p in [H, V] {
                            m[(idx(ai, p), idx(aj, p))] = u[(i, j)];
                        }
                    }
                }
            }
            Element::BeamSplitter { arms: [a, b], reflectivity } => {
                let t = real((1.0 - reflectivity).sqrt());
                let r = C64::new(0.0, reflectivity.sqrt());
                for p in [H, V] {
                    m[(idx(*a, p), idx(*a, p))] = t;
                    m[(idx(*b, p), idx(*b, p))] = t;
                    m[(idx(*b, p), idx(*a, p))] = r;
                    m[(idx(*a, p), idx(*b, p))] = r;
                }
            }
            Element::PolarizationPhase { arms: list, phase } => {
                let all: Vec<usize> = if list.is_empty() { (0..arms).collect() } else { list.clone() };
                for a in all {
                    m[(idx(a, V), idx(a, V))] = cis(*phase);
                }
            }
            Element::ArmDelay { arm, phase } => m[(idx(*arm, V), idx(*arm, V))] = cis(*phase),
            Element::WavePlate { arm, retardance, angle } => set_block(*arm, wave_plate_jones(*retardance, *angle)),
            Element::HalfWavePlate { arm, angle } => set_block(*arm, wave_plate_jones(PI, *angle)),
            Element::QuarterWavePlate { arm, angle } => set_block(*arm, wave_plate_jones(PI / 2.0, *angle)),
            Element::Polarizer { arm, angle, phase } => set_block(*arm, polarizer_jones(*angle, *phase)),
        }
        m
    }

    pub fn is_lossy(&self) -> bool {
        matches!(self, Element::Polarizer { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearNetwork {
    pub arms: usize,
    pub elements: Vec<Element>,
}

impl LinearNetwork {
    pub fn new(arms: usize, elements: Vec<Element>) -> Result<Self> {
        let net = LinearNetwork { arms, elements };
        net.validate()?;
        Ok(net)
    }

    pub fn identity(arms: usize) -> Self {
        LinearNetwork {
            arms,
            elements: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.arms == 0 {
            return Err(Error::network("network needs at least one arm"));
        }
        self.elements.iter().try_for_each(|e| e.validate(self.arms))
    }

    pub fn is_lossless(&self) -> bool {
        !self.elements.iter().any(Element::is_lossy)
    }

    /// This network preceded by a collective phase `φ` on V in every arm.
    pub fn with_phase(&self, phase: f64) -> LinearNetwork {
        let mut elements = Vec::with_capacity(self.elements.len() + 1);
        elements.push(Element::PolarizationPhase { arms: Vec::new(), phase });
        elements.extend(self.elements.iter().cloned());
        LinearNetwork {
            arms: self.arms,
            elements,
        }
    }

    pub fn then(mut self, more: impl IntoIterator<Item = Element>) -> LinearNetwork {
        self.elements.extend(more);
        self
    }
}

/// Composed map on single-photon creation operators over `(arm, pol)`
/// modes, indexed `2·arm + pol`; column `j` is the image of mode `j`.
pub fn single_photon_map(net: &LinearNetwork) -> Result<DMatrix<C64>> {
    net.validate()?;
    let dim = 2 * net.arms;
    Ok(net
        .elements
        .iter()
        .fold(DMatrix::identity(dim, dim), |acc, e| e.matrix(net.arms) * acc))
}

/// Sparse polynomial in interned output modes, keyed by sorted indices.
type Poly = HashMap<Vec<u16>, C64, BuildHasherDefault<DefaultHasher>>;

/// Propagate a state through the network. The output schema's spatial DOF
/// is widened to the network's arm count (new labels `arm<k>`).
pub fn apply_network(net: &LinearNetwork, s: &StateVector, limits: &Limits) -> Result<StateVector> {
    limits.check_photons(s.photon_number())?;
    let schema = s.schema();
    let sp = schema.require_dof(SPATIAL)?;
    let pol = schema.require_polarization()?;
    let in_arms = schema.dofs()[sp].labels.len();
    if in_arms > net.arms {
        return Err(Error::network(format!(
            "state has {in_arms} spatial modes, network only {}",
            net.arms
        )));
    }
    let t = single_photon_map(net)?;
    let out_schema: SchemaRef = if in_arms == net.arms {
        schema.clone()
    } else {
        std::sync::Arc::new(schema.with_min_labels(sp, net.arms, "arm")?)
    };

    // Output modes are interned as small integers so the expansion works on
    // sorted index vectors. The fixed-key hasher keeps summation order, and
    // therefore every output bit, identical from run to run.
    let mut out_modes: Vec<Mode> = Vec::new();
    let mut out_index: BTreeMap<Mode, u16> = BTreeMap::new();
    let mut images: BTreeMap<Mode, Vec<(u16, C64)>> = BTreeMap::new();
    let mut image_of = |m: &Mode| -> Vec<(u16, C64)> {
        let col = 2 * m.get(sp) as usize + m.get(pol) as usize;
        (0..2 * net.arms)
            .filter_map(|row| {
                let c = t[(row, col)];
                (c.norm() > 0.0).then(|| {
                    let o = m.with(sp, (row / 2) as u16).with(pol, (row % 2) as u16);
                    let i = *out_index.entry(o.clone()).or_insert_with(|| {
                        out_modes.push(o);
                        (out_modes.len() - 1) as u16
                    });
                    (i, c)
                })
            })
            .collect()
    };

    let mut acc: Poly = Poly::default();
    for (ket, &amp) in s.terms() {
        let mut poly: Poly = Poly::default();
        poly.insert(Vec::new(), amp / ket.factorial_product().sqrt());
        for (mode, n) in ket.occupation() {
            let lin = images.entry(mode.clone()).or_insert_with(|| image_of(mode)).clone();
            for _ in 0..*n {
                let mut next = Poly::default();
                for (mono, c) in &poly {
                    for &(i, coef) in &lin {
                        let mut k = Vec::with_capacity(mono.len() + 1);
                        let at = mono.partition_point(|&x| x <= i);
                        k.extend_from_slice(&mono[..at]);
                        k.push(i);
                        k.extend_from_slice(&mono[at..]);
                        *next.entry(k).or_default() += c * coef;
                    }
                }
                poly = next;
            }
        }
        for (mono, c) in poly {
            *acc.entry(mono).or_default() += c;
        }
    }
    let out: Vec<(FockKet, C64)> = acc
        .into_iter()
        .map(|(mono, c)| {
            let ket = FockKet::from_modes(mono.iter().map(|&i| &out_modes[i as usize]));
            let a = c * ket.factorial_product().sqrt();
            (ket, a)
        })
        .collect();
    StateVector::from_terms(out_schema, s.photon_number(), out)
}

/// Threshold detectors, each watching a set of output arms. Insensitive to
/// polarization and frequency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorLayout {
    pub detectors: Vec<Vec<usize>>,
}

impl DetectorLayout {
    pub fn new(detectors: Vec<Vec<usize>>) -> Self {
        DetectorLayout { detectors }
    }

    pub fn per_arm(arms: usize) -> Self {
        DetectorLayout::new((0..arms).map(|a| vec![a]).collect())
    }

    pub fn validate(&self, net: &LinearNetwork) -> Result<()> {
        if self.detectors.is_empty() {
            return Err(Error::network("layout has no detectors"));
        }
        for d in &self.detectors {
            if d.is_empty() {
                return Err(Error::network("detector watches no arms"));
            }
            if let Some(a) = d.iter().find(|&&a| a >= net.arms) {
                return Err(Error::network(format!("detector arm {a} out of range")));
            }
        }
        Ok(())
    }

    fn all_click(&self, arm_counts: &[u32]) -> bool {
        self.detectors
            .iter()
            .all(|d| d.iter().any(|&a| arm_counts[a] > 0))
    }
}

/// Probability that every detector fires, up to the overall efficiency
/// constant carried by lossy elements.
pub fn coincidence_probability(
    s: &StateVector,
    net: &LinearNetwork,
    layout: &DetectorLayout,
    limits: &Limits,
) -> Result<f64> {
    layout.validate(net)?;
    let out = apply_network(net, s, limits)?;
    let sp = out.schema().require_dof(SPATIAL)?;
    let mut counts = vec![0u32; net.arms];
    let mut total = 0.0;
    for (ket, a) in out.terms() {
        counts.iter_mut().for_each(|c| *c = 0);
        for (m, n) in ket.occupation() {
            counts[m.get(sp) as usize] += n;
        }
        if layout.all_click(&counts) {
            total += a.norm_sqr();
        }
    }
    Ok(total)
}

/// Per-arm phase delays `δ_k = 2kπ/N` (k = 1..N). For odd `N` a common
/// offset `π/N` is added so that `∏ e^{iδ_k} = −1` for every `N`; the
/// projection is then onto `|H⟩^⊗N − e^{−iNφ}|V⟩^⊗N`.
pub fn projection_delays(n: usize) -> Vec<f64> {
    let offset = if n % 2 == 1 { PI / n as f64 } else { 0.0 };
    (1..=n)
        .map(|k| 2.0 * PI * k as f64 / n as f64 + offset)
        .collect()
}

/// 1→N splitter chain from arm 0: the k-th splitter (k = 1..N−1) couples
/// arm 0 to arm k with reflectivity `1/(N−k+1)`, leaving `1/√N` amplitude
/// magnitude in every arm.
pub fn splitter_chain(n: usize) -> Vec<Element> {
    (1..n)
        .map(|k| Element::BeamSplitter {
            arms: [0, k],
            reflectivity: 1.0 / (n - k + 1) as f64,
        })
        .collect()
}

fn check_projection_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::network(format!("projection network needs N ≥ 2, got {n}")));
    }
    Ok(())
}

/// Arm delays followed by 45° polarizers, one per arm.
fn delays_and_polarizers(n: usize) -> Vec<Element> {
    let delays = projection_delays(n);
    let mut out: Vec<Element> = delays
        .iter()
        .enumerate()
        .map(|(arm, &phase)| Element::ArmDelay { arm, phase })
        .collect();
    out.extend((0..n).map(|arm| Element::polarizer(arm, PI / 4.0)));
    out
}

/// NOON-state projection for photons sharing one input arm: splitter
/// chain, per-arm delays on V, 45° polarizers, one detector per arm.
pub fn build_noon_projection_network(n: usize) -> Result<(LinearNetwork, DetectorLayout)> {
    check_projection_size(n)?;
    let net = LinearNetwork::new(n, splitter_chain(n))?.then(delays_and_polarizers(n));
    Ok((net, DetectorLayout::per_arm(n)))
}

/// Same measurement with delay and polarizer merged into a single
/// projection per arm onto `(|H⟩ + e^{−iδ_k}|V⟩)/√2`.
pub fn noon_projection_shortcut(n: usize) -> Result<(LinearNetwork, DetectorLayout)> {
    check_projection_size(n)?;
    let projections = projection_delays(n)
        .into_iter()
        .enumerate()
        .map(|(arm, d)| Element::Polarizer {
            arm,
            angle: PI / 4.0,
            phase: -d,
        });
    let net = LinearNetwork::new(n, splitter_chain(n))?.then(projections);
    Ok((net, DetectorLayout::per_arm(n)))
}

/// Wave-plate realization: per arm an optional quarter-wave plate at 0°,
/// a half-wave plate at 22.5° and a polarizer along H or V. Only possible
/// when every delay is a multiple of π/2 (N = 2 or 4).
pub fn noon_projection_wave_plates(n: usize) -> Result<(LinearNetwork, DetectorLayout)> {
    check_projection_size(n)?;
    let mut elements = splitter_chain(n);
    for (arm, d) in projection_delays(n).into_iter().enumerate() {
        let quarter_turns = d / (PI / 2.0);
        let q = quarter_turns.round();
        if (quarter_turns - q).abs() > 1e-9 {
            return Err(Error::network(format!(
                "delay {d} is not a multiple of π/2; no wave-plate realization for N = {n}"
            )));
        }
        let q = (q as i64).rem_euclid(4);
        if q % 2 == 1 {
            elements.push(Element::quarter_wave_plate(arm, 0.0));
        }
        elements.push(Element::half_wave_plate(arm, PI / 8.0));
        let axis = if q >= 2 { PI / 2.0 } else { 0.0 };
        elements.push(Element::polarizer(arm, axis));
    }
    Ok((LinearNetwork::new(n, elements)?, DetectorLayout::per_arm(n)))
}

/// Projection for one photon per spatial mode (GHZ): per-arm delay and 45°
/// polarizer, a detector on every arm.
pub fn build_ghz_projection_network(n: usize) -> Result<(LinearNetwork, DetectorLayout)> {
    check_projection_size(n)?;
    Ok((
        LinearNetwork::new(n, delays_and_polarizers(n))?,
        DetectorLayout::per_arm(n),
    ))
}

/// How the operator `M` is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementNormalization {
    /// `M = (|H^N⟩ − e^{−iNφ}|V^N⟩)(⟨H^N| − e^{iNφ}⟨V^N|) ⊗ I`.
    Raw,
    /// `M/2`, a true projector.
    Projector,
}

/// `⟨s|M|s⟩` for the NOON projection operator, with the identity on every
/// non-polarization DOF.
pub fn noon_operator_expectation(
    s: &StateVector,
    n: u32,
    phase: f64,
    norm: MeasurementNormalization,
) -> Result<f64> {
    if s.photon_number() != n {
        return Err(Error::schema(format!(
            "state has {} photons, measurement expects {n}",
            s.photon_number()
        )));
    }
    let pol = s.schema().require_polarization()?;
    // Amplitudes of the all-H and all-V components, keyed by the
    // configuration of the remaining DOFs.
    let mut comps: BTreeMap<FockKet, (C64, C64)> = BTreeMap::new();
    for (ket, a) in s.terms() {
        let first = match ket.occupation().first() {
            Some((m, _)) => m.get(pol),
            None => continue,
        };
        if ket.occupation().iter().any(|(m, _)| m.get(pol) != first) {
            continue;
        }
        let key = ket.map_modes(|m| m.with(pol, H));
        let e = comps.entry(key).or_default();
        if first == H {
            e.0 += a;
        } else {
            e.1 += a;
        }
    }
    let rot = cis(n as f64 * phase);
    let raw: f64 = comps.values().fold(0.0, |s, (h, v)| s + (h - rot * v).norm_sqr());
    Ok(match norm {
        MeasurementNormalization::Raw => raw,
        MeasurementNormalization::Projector => raw / 2.0,
    })
}
