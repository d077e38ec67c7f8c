//! Monte Carlo logical failure rates under independent data noise.

use rayon::prelude::*;
use serde::Serialize;

use super::sweep::{prepare, run_case, Prepared};
use super::{FaultPauli, FaultSpec, Protocol};
use crate::circuit::EngineKind;
use crate::error::Result;
use crate::rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleConfig {
    pub rates: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
}

/// Logical failures at one physical rate, with a 95% Wilson interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub p: f64,
    pub shots: u64,
    /// Shots with at least one fault.
    pub nontrivial: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub scheme: String,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub points: Vec<RatePoint>,
    /// Maximum-likelihood exponent of `rate = a p^b`.
    pub slope: Option<f64>,
}

pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054;
    let (k, n) = (k as f64, n as f64);
    let ph = k / n;
    let d = 1.0 + z * z / n;
    let c = (ph + z * z / (2.0 * n)) / d;
    let h = z * (ph * (1.0 - ph) / n + z * z / (4.0 * n * n)).sqrt() / d;
    let lo = if k == 0.0 { 0.0 } else { (c - h).max(0.0) };
    let hi = if k == n { 1.0 } else { (c + h).min(1.0) };
    (lo, hi)
}

/// Fits `k_i ~ Poisson(n_i a p_i^b)` by profiling out `a`; `None` when no
/// failures were seen.
pub fn fit_slope(points: &[RatePoint]) -> Option<f64> {
    let total: u64 = points.iter().map(|p| p.failures).sum();
    if total == 0 || points.len() < 2 {
        return None;
    }
    let loglik = |b: f64| {
        let denom: f64 = points.iter().map(|q| q.shots as f64 * q.p.powf(b)).sum();
        let a = total as f64 / denom;
        points
            .iter()
            .map(|q| {
                let mu = q.shots as f64 * a * q.p.powf(b);
                q.failures as f64 * mu.ln() - mu
            })
            .sum::<f64>()
    };
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 6.0f64);
    for _ in 0..200 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if loglik(m1) < loglik(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    Some((lo + hi) / 2.0)
}

/// Independent faults for one shot: each data qubit is hit with
/// probability `p` by a uniformly chosen X, Y or Z.
pub fn draw_faults(rng: &mut SplitMix64, data: &[usize], p: f64, position: usize) -> Vec<FaultSpec> {
    let mut out = Vec::new();
    for &qubit in data {
        if rng.next_f64() < p {
            let pauli = FaultPauli::ALL[rng.below(3) as usize];
            out.push(FaultSpec { qubit, pauli, position });
        }
    }
    out
}

/// Whether the cycle fails to restore the prepared state after `faults`.
fn fails(p: &Protocol, start: &Prepared, faults: &[FaultSpec], seed: u64) -> Result<bool> {
    let out = run_case(p, start, faults, seed)?;
    Ok(match (&out.state, start) {
        (Prepared::Tableau(a), Prepared::Tableau(b)) => !a.same_state(b),
        _ => unreachable!("sampling runs on the tableau engine"),
    })
}

pub fn sample(p: &Protocol, cfg: &SampleConfig) -> Result<SampleReport> {
    let start = prepare(p, EngineKind::Tableau, cfg.seed)?;
    let data = p.data_qubits();
    let pos = p.fault_position();
    let mut points = Vec::new();
    for (pi, &rate) in cfg.rates.iter().enumerate() {
        let per_shot = (0..cfg.shots)
            .into_par_iter()
            .map(|shot| {
                let stream = ((pi as u64) << 32) | shot;
                let mut rng = SplitMix64::substream(cfg.seed, stream);
                let faults = draw_faults(&mut rng, &data, rate, pos);
                if faults.is_empty() {
                    return Ok((0u64, 0u64));
                }
                let f = fails(p, &start, &faults, rng.next_u64())?;
                Ok((1, f as u64))
            })
            .collect::<Result<Vec<_>>>()?;
        let nontrivial = per_shot.iter().map(|x| x.0).sum();
        let failures = per_shot.iter().map(|x| x.1).sum();
        points.push(RatePoint {
            p: rate,
            shots: cfg.shots,
            nontrivial,
            failures,
            rate: failures as f64 / cfg.shots as f64,
            ci: wilson_interval(failures, cfg.shots),
        });
    }
    let slope = fit_slope(&points);
    Ok(SampleReport { scheme: p.scheme.to_string(), dims: p.dims.clone(), seed: cfg.seed, points, slope })
}

/// Failing fault pairs, by exhaustive enumeration of two distinct-qubit
/// faults. Returns `(failing, total)`.
pub fn two_fault_census(p: &Protocol, seed: u64) -> Result<(u64, u64)> {
    let start = prepare(p, EngineKind::Tableau, seed)?;
    let data = p.data_qubits();
    let pos = p.fault_position();
    let singles: Vec<FaultSpec> = data
        .iter()
        .flat_map(|&qubit| FaultPauli::ALL.into_iter().map(move |pauli| FaultSpec { qubit, pauli, position: pos }))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..singles.len())
        .flat_map(|i| (i + 1..singles.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| singles[i].qubit != singles[j].qubit)
        .collect();
    let failing = pairs
        .par_iter()
        .map(|&(i, j)| fails(p, &start, &[singles[i], singles[j]], seed).map(u64::from))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok((failing, pairs.len() as u64))
}

/// Leading-order failure rate `failing (p/3)^2 (1-p)^(n-2)` from the census.
pub fn two_fault_prediction(failing: u64, data_qubits: usize, p: f64) -> f64 {
    failing as f64 * (p / 3.0).powi(2) * (1.0 - p).powi(data_qubits as i32 - 2)
}
