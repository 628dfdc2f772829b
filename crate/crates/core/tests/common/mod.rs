//! Test-only oracles and generators. Nothing here calls into the network
//! propagation or the four-photon builders it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use dofsim::schema::SchemaRef;
use dofsim::{
    from_first_quantized, single_photon_map, to_first_quantized, DofSchema, FockKet,
    LinearNetwork, Limits, Mode, StateVector, C64,
};
use nalgebra::DMatrix;
use rand::Rng;

/// Spatial × polarization × frequency schema.
pub fn grid_schema(arms: usize, freqs: usize) -> SchemaRef {
    let arms: Vec<String> = (0..arms).map(|i| format!("S{i}")).collect();
    let freqs: Vec<String> = (0..freqs).map(|i| format!("w{i}")).collect();
    Arc::new(
        DofSchema::new([
            ("spatial".to_string(), arms),
            ("pol".to_string(), vec!["H".into(), "V".into()]),
            ("freq".to_string(), freqs),
        ])
        .unwrap(),
    )
}

pub fn all_modes(schema: &DofSchema) -> Vec<Mode> {
    let mut modes = vec![Vec::new()];
    for dof in schema.dofs() {
        modes = modes
            .into_iter()
            .flat_map(|m| {
                (0..dof.labels.len() as u16).map(move |l| {
                    let mut m = m.clone();
                    m.push(l);
                    m
                })
            })
            .collect();
    }
    modes.into_iter().map(Mode).collect()
}

/// A random state with `n` photons spread over `kets` random occupation kets.
pub fn random_state<R: Rng>(rng: &mut R, schema: &SchemaRef, n: u32, kets: usize) -> StateVector {
    let modes = all_modes(schema);
    let terms: Vec<(FockKet, C64)> = (0..kets)
        .map(|_| {
            let picks: Vec<Mode> = (0..n).map(|_| modes[rng.gen_range(0..modes.len())].clone()).collect();
            (
                FockKet::from_modes(&picks),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    StateVector::from_terms(schema.clone(), n, terms).unwrap()
}

/// Haar-ish random unitary from QR of a complex Gaussian-like matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, k: usize) -> DMatrix<C64> {
    let m = DMatrix::from_fn(k, k, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let qr = m.qr();
    qr.q()
}

/// Apply the single-photon map slot by slot to the first-quantized tensor,
/// then fold back. Independent of the multinomial expansion in
/// `apply_network`.
pub fn propagate_first_quantized(net: &LinearNetwork, s: &StateVector) -> StateVector {
    let schema = s.schema();
    let sp = schema.dof_index("spatial").unwrap();
    let pol = schema.dof_index("pol").unwrap();
    let out_schema: SchemaRef = Arc::new(schema.with_min_labels(sp, net.arms, "arm").unwrap());
    let t = single_photon_map(net).unwrap();
    let limits = Limits { max_photons: 8, max_modes: 64 };
    let fq = to_first_quantized(s, &limits).unwrap();

    let mut cur: BTreeMap<Vec<Mode>, C64> = fq.entries().clone();
    for slot in 0..s.photon_number() as usize {
        let mut next: BTreeMap<Vec<Mode>, C64> = BTreeMap::new();
        for (tuple, f) in &cur {
            let m = &tuple[slot];
            let col = 2 * m.get(sp) as usize + m.get(pol) as usize;
            for row in 0..2 * net.arms {
                let c = t[(row, col)];
                if c.norm() == 0.0 {
                    continue;
                }
                let mut tup = tuple.clone();
                tup[slot] = m.with(sp, (row / 2) as u16).with(pol, (row % 2) as u16);
                *next.entry(tup).or_default() += f * c;
            }
        }
        cur = next;
    }
    let fq = dofsim::FirstQuantizedTensor::from_entries(out_schema, s.photon_number(), cur).unwrap();
    from_first_quantized(&fq).unwrap()
}

/// Four-photon down-conversion state by direct enumeration of
/// `½(Σ_α φ_α [x_{Hα}² + x_{Vα}²])²` as a commutative polynomial, then
/// `|n⟩` amplitudes via `√∏n!`. Keys are sorted `(pol, freq)` pairs.
pub fn enumerate_four_photon(phi: &[f64]) -> BTreeMap<Vec<(u16, u16)>, f64> {
    let mut poly: BTreeMap<Vec<(u16, u16)>, f64> = BTreeMap::new();
    let terms: Vec<((u16, u16), f64)> = phi
        .iter()
        .enumerate()
        .flat_map(|(a, &p)| [((0u16, a as u16), p), ((1u16, a as u16), p)])
        .collect();
    for (x, px) in &terms {
        for (y, py) in &terms {
            let mut key = vec![*x, *x, *y, *y];
            key.sort();
            *poly.entry(key).or_default() += 0.5 * px * py;
        }
    }
    poly.into_iter()
        .map(|(key, c)| {
            let mut fact = 1.0;
            let mut i = 0;
            while i < key.len() {
                let mut j = i;
                while j < key.len() && key[j] == key[i] {
                    j += 1;
                }
                fact *= (1..=(j - i)).product::<usize>() as f64;
                i = j;
            }
            (key, c * fact.sqrt())
        })
        .filter(|(_, a)| a.abs() > 0.0)
        .collect()
}

/// Least-squares constant `c` with `rates ≈ c·model`, and the largest
/// deviation of `rates/c` from `model`.
pub fn fit_constant(rates: &[f64], model: &[f64]) -> (f64, f64) {
    let c = rates.iter().zip(model).map(|(r, m)| r * m).sum::<f64>()
        / model.iter().map(|m| m * m).sum::<f64>();
    let dev = rates
        .iter()
        .zip(model)
        .map(|(r, m)| (r / c - m).abs())
        .fold(0.0, f64::max);
    (c, dev)
}
