use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::speed::{speed_compare, HeadStartParams, SpeedVerdict};
use super::trace_point;
use crate::address::ExternalAddress;
use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel};

/// Default iterate budget for [`speed_compare`].
pub const SPEED_J_MAX: usize = 50;
/// Potentials sampled for triples lie in this range.
const TRIPLE_T_RANGE: (f64, f64) = (0.2, 6.0);
/// Potentials of the separation grid.
const GRID_T_RANGE: (f64, f64) = (0.5, 5.0);
const GRID_POINTS: usize = 20;

/// A triple or pair on which the speed order misbehaved.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderViolation {
    pub kind: &'static str,
    pub t: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpeedOrderReport {
    pub triples: usize,
    pub decided: usize,
    pub undecided: usize,
    /// Pairs `t < t′` with `t′ ≥ t + 1` on the separation grid.
    pub grid_pairs: usize,
    pub violations: Vec<OrderViolation>,
}

impl SpeedOrderReport {
    pub fn passed(&self) -> bool {
        self.triples > 0 && self.grid_pairs > 0 && self.violations.is_empty()
    }
}

/// Traced points share their address exactly, so a later itinerary
/// mismatch means the orbits lost their imaginary parts to rounding; such
/// pairs count as undecided.
fn verdict(model: &LogModel, params: &HeadStartParams, a: ComplexPoint, b: ComplexPoint) -> Result<SpeedVerdict> {
    match speed_compare(model, params, a, b, SPEED_J_MAX) {
        Ok(r) => Ok(r.verdict),
        Err(Error::AddressMismatch(j)) if j > 0 => Ok(SpeedVerdict::Undecided),
        Err(e) => Err(e),
    }
}

fn opposite(v: SpeedVerdict) -> SpeedVerdict {
    match v {
        SpeedVerdict::Lt => SpeedVerdict::Gt,
        SpeedVerdict::Gt => SpeedVerdict::Lt,
        SpeedVerdict::Undecided => SpeedVerdict::Undecided,
    }
}

/// Samples `n_triples` triples of points on the hair `γ_s` and checks that
/// decided verdicts are antisymmetric and transitive; then checks that
/// `γ(t′)` is faster than `γ(t)` whenever `t′ ≥ t + 1` on a 20-point grid.
pub fn speed_order_verify(
    model: &LogModel,
    params: &HeadStartParams,
    s: &ExternalAddress,
    n_triples: usize,
    seed: u64,
) -> Result<SpeedOrderReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SpeedOrderReport { triples: 0, decided: 0, undecided: 0, grid_pairs: 0, violations: Vec::new() };
    let (lo, hi) = TRIPLE_T_RANGE;
    for _ in 0..n_triples {
        let ts: Vec<f64> = (0..3).map(|_| rng.random_range(lo..hi)).collect();
        let zs = ts.iter().map(|&t| Ok(trace_point(model, s, t)?.z)).collect::<Result<Vec<_>>>()?;
        report.triples += 1;
        // v[i][j] is the verdict of speed_compare(z_i, z_j).
        let mut v = [[SpeedVerdict::Undecided; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    v[i][j] = verdict(model, params, zs[i], zs[j])?;
                    if v[i][j] == SpeedVerdict::Undecided {
                        report.undecided += 1;
                    } else {
                        report.decided += 1;
                    }
                }
            }
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if v[i][j] != SpeedVerdict::Undecided
                    && v[j][i] != SpeedVerdict::Undecided
                    && v[j][i] != opposite(v[i][j])
                {
                    report.violations.push(OrderViolation { kind: "antisymmetry", t: vec![ts[i], ts[j]] });
                }
            }
        }
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
            // z_j faster than z_i and z_k faster than z_j, so z_k must beat z_i.
            if v[i][j] == SpeedVerdict::Gt && v[j][k] == SpeedVerdict::Gt && v[i][k] == SpeedVerdict::Lt {
                report.violations.push(OrderViolation { kind: "transitivity", t: vec![ts[i], ts[j], ts[k]] });
            }
        }
    }
    let (g0, g1) = GRID_T_RANGE;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| g0 + (g1 - g0) * i as f64 / (GRID_POINTS - 1) as f64).collect();
    for &t in &grid {
        for &u in grid.iter().filter(|&&u| u >= t + 1.0) {
            report.grid_pairs += 1;
            let (z, w) = (trace_point(model, s, t)?.z, trace_point(model, s, u)?.z);
            if verdict(model, params, z, w)? != SpeedVerdict::Gt {
                report.violations.push(OrderViolation { kind: "separation", t: vec![t, u] });
            }
        }
    }
    if report.triples == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(report)
}
