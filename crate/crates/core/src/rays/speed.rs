use std::f64::consts::PI;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ComplexPoint, Half, LogModel, TractId};

/// `φ(x) = M·x + K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeadStartParams {
    pub m: f64,
    pub k: f64,
}

impl Default for HeadStartParams {
    fn default() -> Self {
        HeadStartParams { m: 2.0, k: 1.0 }
    }
}

impl HeadStartParams {
    pub fn phi(&self, x: f64) -> f64 {
        self.m * x + self.k
    }

    /// Fails with `BadPhi` unless `φ(x) > x` on `[lo, hi]`.
    pub fn check_range(&self, lo: f64, hi: f64) -> Result<()> {
        if !(self.m.is_finite() && self.k.is_finite()) {
            return Err(Error::BadPhi(f64::NAN));
        }
        for x in [lo, hi] {
            if (self.m - 1.0) * x + self.k <= 0.0 {
                return Err(Error::BadPhi(x));
            }
        }
        Ok(())
    }
}

/// Largest real part of sampled images.
const IMAGE_RE_MAX: f64 = 600.0;
/// Largest real part of sampled head-start images; wide enough that pairs
/// with `Re w > φ(Re z)` are common in every tract of the sampled range.
const HEAD_START_RE_MAX: f64 = 1e6;
const TRACT_RANGE: i64 = 3;
const PLACEMENT_TRIES: usize = 64;
/// Fewer applicable pairs than this makes a head-start run inconclusive.
pub const MIN_APPLICABLE: usize = 100;
const ATTEMPTS_PER_SAMPLE: usize = 50;

fn band_centre(t: &TractId) -> f64 {
    match t {
        TractId::Exp(k) => 2.0 * PI * *k as f64,
        TractId::Sine { k, half: Half::Upper } => 2.0 * PI * *k as f64 + PI / 2.0,
        TractId::Sine { k, half: Half::Lower } => 2.0 * PI * *k as f64 - PI / 2.0,
        TractId::Composite(parts) => band_centre(&parts[0]),
    }
}

fn left_edge(model: &LogModel) -> f64 {
    let lo = model.tract_min_re();
    if lo.is_finite() {
        lo.max(model.h_threshold())
    } else {
        model.h_threshold()
    }
}

/// A point of `tract` with log-uniform real part, found by rejection in
/// the band around the tract.
fn sample_point_in<R: Rng>(model: &LogModel, rng: &mut R, tract: &TractId) -> Result<Option<ComplexPoint>> {
    let (lo, hi) = (left_edge(model).max(1e-3).ln(), HEAD_START_RE_MAX.ln());
    let centre = band_centre(tract);
    for _ in 0..PLACEMENT_TRIES {
        let x = rng.random_range(lo..hi).exp();
        let y = centre + PI * (2.0 * rng.random::<f64>() - 1.0);
        let u = ComplexPoint::new(x, y);
        if model.classify(u)?.as_ref() == Some(tract) {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeadStartViolation {
    pub z: ComplexPoint,
    pub w: ComplexPoint,
    pub re_fz: f64,
    pub re_fw: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeadStartReport {
    pub requested: usize,
    pub attempts: usize,
    pub applicable: usize,
    pub not_applicable: usize,
    pub violations: Vec<HeadStartViolation>,
}

impl HeadStartReport {
    /// No violations among at least `MIN_APPLICABLE` applicable pairs.
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.applicable >= MIN_APPLICABLE
    }
}

/// Samples pairs `z, w` in a common tract whose images share a tract, and
/// records every pair with `Re w > φ(Re z)` but `Re F(w) ≤ φ(Re F(z))`.
/// Sampling stops after `n_samples` applicable pairs or a bounded number of
/// attempts.
pub fn head_start_verify(
    model: &LogModel,
    params: &HeadStartParams,
    n_samples: usize,
    seed: u64,
) -> Result<HeadStartReport> {
    params.check_range(model.tract_min_re().min(model.h_threshold()).max(-1e300), HEAD_START_RE_MAX)?;
    let tracts = model.tracts_in_range(-TRACT_RANGE, TRACT_RANGE);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        HeadStartReport { requested: n_samples, attempts: 0, applicable: 0, not_applicable: 0, violations: Vec::new() };
    while report.applicable < n_samples && report.attempts < ATTEMPTS_PER_SAMPLE * n_samples {
        report.attempts += 1;
        let target = &tracts[rng.random_range(0..tracts.len())];
        let source = &tracts[rng.random_range(0..tracts.len())];
        let (Some(u), Some(v)) = (sample_point_in(model, &mut rng, target)?, sample_point_in(model, &mut rng, target)?)
        else {
            continue;
        };
        let (z, w) = match (model.inverse_branch(source, u), model.inverse_branch(source, v)) {
            (Ok(z), Ok(w)) => (z, w),
            (Err(Error::NoConvergence { .. }), _) | (_, Err(Error::NoConvergence { .. })) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        if w.re > params.phi(z.re) {
            report.applicable += 1;
            let (re_fz, re_fw) = (model.eval(z)?.re, model.eval(w)?.re);
            if re_fw <= params.phi(re_fz) {
                report.violations.push(HeadStartViolation { z, w, re_fz, re_fw });
            }
        } else {
            report.not_applicable += 1;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    pub samples: usize,
    /// `(z, |F'(z)|, bound)` for each failure.
    pub violations: Vec<(ComplexPoint, f64, f64)>,
}

impl ExpansionReport {
    pub fn passed(&self) -> bool {
        self.samples > 0 && self.violations.is_empty()
    }
}

/// Checks `|F'(z)| ≥ (Re F(z) − ln R_f)/(4π)` on seeded tract samples.
pub fn expansion_verify(model: &LogModel, n_samples: usize, seed: u64) -> Result<ExpansionReport> {
    let tracts = model.tracts_in_range(-TRACT_RANGE, TRACT_RANGE);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ExpansionReport { samples: 0, violations: Vec::new() };
    let im_max = 2.0 * PI * TRACT_RANGE as f64;
    while report.samples < n_samples {
        let tract = &tracts[rng.random_range(0..tracts.len())];
        let z = match model.sample_in_tract(&mut rng, tract, IMAGE_RE_MAX, im_max) {
            Ok((z, _)) => z,
            Err(Error::NoConvergence { .. }) => continue,
            Err(e) => return Err(e),
        };
        report.samples += 1;
        let lhs = model.eval_prime(z)?.norm();
        let rhs = model.expansion_bound_for(model.eval(z)?.re);
        if lhs < rhs {
            report.violations.push((z, lhs, rhs));
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpeedVerdict {
    /// `z ≻ w`.
    Lt,
    /// `w ≻ z`.
    Gt,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpeedOrderResult {
    pub verdict: SpeedVerdict,
    pub witness_j: Option<usize>,
}

impl SpeedOrderResult {
    fn undecided() -> Self {
        SpeedOrderResult { verdict: SpeedVerdict::Undecided, witness_j: None }
    }
}

/// Speed comparison of two points with a common address: `Gt` at the first
/// `j` with `Re F^j(w) > φ(Re F^j(z))`, `Lt` symmetrically. Running out of
/// iterates or of floating-point range gives `Undecided`.
pub fn speed_compare(
    model: &LogModel,
    params: &HeadStartParams,
    z: ComplexPoint,
    w: ComplexPoint,
    j_max: usize,
) -> Result<SpeedOrderResult> {
    let (mut a, mut b) = (z, w);
    for j in 0..=j_max {
        let (ta, tb) = match (model.classify(a), model.classify(b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(Error::Overflow(_)), _) | (_, Err(Error::Overflow(_))) => return Ok(SpeedOrderResult::undecided()),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        if ta.is_none() || ta != tb {
            return Err(Error::AddressMismatch(j));
        }
        if b.re > params.phi(a.re) {
            return Ok(SpeedOrderResult { verdict: SpeedVerdict::Gt, witness_j: Some(j) });
        }
        if a.re > params.phi(b.re) {
            return Ok(SpeedOrderResult { verdict: SpeedVerdict::Lt, witness_j: Some(j) });
        }
        if j == j_max {
            break;
        }
        match (model.eval(a), model.eval(b)) {
            (Ok(x), Ok(y)) => (a, b) = (x, y),
            (Err(Error::Overflow(_)), _) | (_, Err(Error::Overflow(_))) => return Ok(SpeedOrderResult::undecided()),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(SpeedOrderResult::undecided())
}

/// Outcome of the finite-depth `J^R` test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JrReport {
    pub member: bool,
    /// Last iterate that was examined.
    pub depth_checked: usize,
    /// The orbit left floating-point range while still growing.
    pub overflowed: bool,
}

pub const JR_DEFAULT_DEPTH: usize = 60;

/// Whether `Re F^j(z) ≥ r` and `F^j(z)` lies in a tract for `j ≤ depth`.
pub fn in_jr(model: &LogModel, z: ComplexPoint, r: f64, depth: usize) -> Result<JrReport> {
    let mut point = z;
    let mut prev_re = f64::NEG_INFINITY;
    for j in 0..=depth {
        let out = JrReport { member: false, depth_checked: j, overflowed: false };
        if !(point.re >= r) {
            return Ok(out);
        }
        match model.classify(point) {
            Ok(Some(_)) => {}
            Ok(None) => return Ok(out),
            Err(Error::Overflow(_)) if point.re > prev_re => {
                return Ok(JrReport { member: true, depth_checked: j, overflowed: true })
            }
            Err(e) => return Err(e),
        }
        if j == depth {
            break;
        }
        match model.eval(point) {
            Ok(next) => {
                prev_re = point.re;
                point = next;
            }
            Err(Error::Overflow(_)) if point.re > prev_re => {
                return Ok(JrReport { member: true, depth_checked: j, overflowed: true })
            }
            Err(Error::Overflow(_)) => return Ok(out),
            Err(e) => return Err(e),
        }
    }
    Ok(JrReport { member: true, depth_checked: depth, overflowed: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::parse_address;
    use crate::rays::trace_point;

    fn quarter() -> LogModel {
        LogModel::exp_default(0.25).unwrap()
    }

    fn c(x: f64) -> ComplexPoint {
        ComplexPoint::new(x, 0.0)
    }

    #[test]
    fn speed_examples() {
        let m = quarter();
        let p = HeadStartParams { m: 2.0, k: 1.0 };
        let gt = speed_compare(&m, &p, c(2.0), c(3.0), 50).unwrap();
        assert_eq!(gt, SpeedOrderResult { verdict: SpeedVerdict::Gt, witness_j: Some(1) });
        let lt = speed_compare(&m, &p, c(3.0), c(2.0), 50).unwrap();
        assert_eq!(lt, SpeedOrderResult { verdict: SpeedVerdict::Lt, witness_j: Some(1) });
        assert_eq!(speed_compare(&m, &p, c(2.0), c(2.0), 50).unwrap().verdict, SpeedVerdict::Undecided);
        // Re F(3) = e³ − ln 4 against φ(e² − ln 4).
        let (f2, f3) = (2f64.exp() - 4f64.ln(), 3f64.exp() - 4f64.ln());
        assert!(f3 > 2.0 * f2 + 1.0 && 3.0 <= 2.0 * 2.0 + 1.0);
        assert!((f3 - 18.699242).abs() < 1e-6 && (2.0 * f2 + 1.0 - 13.005523).abs() < 1e-6);
    }

    #[test]
    fn speed_detects_address_mismatch() {
        let m = quarter();
        let p = HeadStartParams::default();
        let r = speed_compare(&m, &p, c(2.0), ComplexPoint::new(2.0, 2.0 * PI), 50);
        assert_eq!(r, Err(Error::AddressMismatch(0)));
        assert_eq!(speed_compare(&m, &p, c(0.1), c(0.1), 50), Err(Error::AddressMismatch(0)));
    }

    #[test]
    fn jr_examples() {
        let m = quarter();
        let r = in_jr(&m, c(5.0), 3.0, JR_DEFAULT_DEPTH).unwrap();
        assert!(r.member && r.overflowed);
        assert!((m.eval(c(5.0)).unwrap().re - 147.03).abs() < 0.01);
        assert!(!in_jr(&m, c(0.5), 0.0, JR_DEFAULT_DEPTH).unwrap().member);
        let on_hair = trace_point(&m, &parse_address("0").unwrap(), 4.0).unwrap().z;
        assert!(in_jr(&m, on_hair, 2.0, JR_DEFAULT_DEPTH).unwrap().member);
        // The fixed endpoint never reaches 2.
        assert!(!in_jr(&m, c(0.767002), 2.0, JR_DEFAULT_DEPTH).unwrap().member);
        let fixed = in_jr(&m, c(0.7670022414), 0.7, 10).unwrap();
        assert!(fixed.member && !fixed.overflowed && fixed.depth_checked == 10);
    }

    #[test]
    fn head_start_defaults_hold() {
        let m = quarter();
        let r = head_start_verify(&m, &HeadStartParams::default(), 2000, 7).unwrap();
        assert_eq!(r.applicable, 2000);
        assert!(r.violations.is_empty() && r.passed());
        let again = head_start_verify(&m, &HeadStartParams::default(), 2000, 7).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn head_start_rejects_bad_phi_and_vacuity() {
        let m = quarter();
        let bad = head_start_verify(&m, &HeadStartParams { m: 0.5, k: 0.0 }, 100, 1);
        assert!(matches!(bad, Err(Error::BadPhi(_))));
        let vacuous = head_start_verify(&m, &HeadStartParams { m: 1e6, k: 1.0 }, 200, 1).unwrap();
        assert!(vacuous.applicable < MIN_APPLICABLE && !vacuous.passed());
    }

    #[test]
    fn expansion_holds_on_samples() {
        let r = expansion_verify(&quarter(), 10_000, 3).unwrap();
        assert_eq!(r.samples, 10_000);
        assert!(r.passed());
        let s = expansion_verify(&LogModel::sine(0.25, 2.0).unwrap(), 2000, 3).unwrap();
        assert!(s.passed(), "{:?}", s.violations.first());
    }
}
