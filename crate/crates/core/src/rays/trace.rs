use rayon::prelude::*;

use super::{anchor_for, pullback_chain, T_FLOOR};
use crate::address::ExternalAddress;
use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel};

/// A traced point `γ_s(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RayPoint {
    pub t: f64,
    pub z: ComplexPoint,
    /// Number of inverse branches applied.
    pub depth: usize,
    /// `|F(z) − w| / max(1, |w|)` for the point `w` the last branch was applied to.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TracedHair {
    pub address: ExternalAddress,
    /// Ordered by strictly increasing `t`.
    pub points: Vec<RayPoint>,
    pub endpoint_t: Option<f64>,
    /// Grid values that could not be traced, with the reason.
    pub skipped: Vec<(f64, Error)>,
}

/// The endpoint of a hair: the infimum `t*` of traceable potentials and the
/// limit point `z*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Endpoint {
    pub t: f64,
    pub z: ComplexPoint,
}

/// `γ_s(t)`.
pub fn trace_point(model: &LogModel, s: &ExternalAddress, t: f64) -> Result<RayPoint> {
    let (depth, anchor) = anchor_for(model, t)?;
    let w = pullback_chain(model, &s.shift(), depth - 1, ComplexPoint::new(anchor, 0.0)).map_err(|e| match e {
        Error::LeftH { step } => Error::LeftH { step: step + 1 },
        other => other,
    })?;
    let z = pullback_chain(model, s, 1, w)?;
    let residual = (model.eval(z)? - w).norm() / w.norm().max(1.0);
    Ok(RayPoint { t, z, depth, residual })
}

/// Traces `γ_s` on an increasing grid of potentials.
pub fn trace_hair(model: &LogModel, s: &ExternalAddress, t_grid: &[f64]) -> Result<TracedHair> {
    if t_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("potential grid must be finite and strictly increasing".into()));
    }
    let traced: Vec<(f64, Result<RayPoint>)> = t_grid.par_iter().map(|&t| (t, trace_point(model, s, t))).collect();
    let mut points = Vec::with_capacity(traced.len());
    let mut skipped = Vec::new();
    for (t, r) in traced {
        match r {
            Ok(p) => points.push(p),
            Err(e) => skipped.push((t, e)),
        }
    }
    if points.is_empty() {
        return Err(Error::Empty(format!("no potential in the grid could be traced for {s}")));
    }
    Ok(TracedHair { address: s.clone(), points, endpoint_t: None, skipped })
}

const ENDPOINT_T_TOL: f64 = 1e-9;
const ENDPOINT_T_LOW: f64 = -1.0;
const ENDPOINT_Z_TOL: f64 = 1e-14;
const ENDPOINT_MAX_DEPTH: usize = 2000;

fn traceable(model: &LogModel, s: &ExternalAddress, t: f64) -> Result<bool> {
    match trace_point(model, s, t) {
        Ok(_) => Ok(true),
        Err(Error::LeftH { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Bisection for the least traceable potential, and the limit point of
/// pullbacks of a bounded anchor along `s`.
pub fn endpoint_estimate(model: &LogModel, s: &ExternalAddress) -> Result<Endpoint> {
    if traceable(model, s, ENDPOINT_T_LOW)? {
        return Err(Error::NoEndpointFound(ENDPOINT_T_LOW));
    }
    if !traceable(model, s, T_FLOOR)? {
        return Err(Error::LeftH { step: 0 });
    }
    let (mut lo, mut hi) = (ENDPOINT_T_LOW, T_FLOOR);
    while hi - lo > ENDPOINT_T_TOL {
        let mid = 0.5 * (lo + hi);
        if traceable(model, s, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let anchor = ComplexPoint::new(model.h_threshold() + 1.0, 0.0);
    let mut prev = pullback_chain(model, s, 1, anchor)?;
    for n in 2..=ENDPOINT_MAX_DEPTH {
        let z = pullback_chain(model, s, n, anchor)?;
        if (z - prev).norm() < ENDPOINT_Z_TOL * (1.0 + z.norm()) {
            return Ok(Endpoint { t: hi, z });
        }
        prev = z;
    }
    Err(Error::NoConvergence { steps: ENDPOINT_MAX_DEPTH, residual: f64::NAN })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::parse_address;
    use std::f64::consts::PI;

    fn quarter() -> LogModel {
        LogModel::exp_default(0.25).unwrap()
    }

    fn zero() -> ExternalAddress {
        parse_address("0").unwrap()
    }

    /// Independent closed form of the depth-3 tower pullback at `t = 1`.
    fn oracle_t1() -> f64 {
        let l4 = 4f64.ln();
        let a = 1f64.exp().exp().exp();
        (((a + l4).ln() + l4).ln() + l4).ln()
    }

    #[test]
    fn trace_examples() {
        let m = quarter();
        let p = trace_point(&m, &zero(), 1.0).unwrap();
        assert_eq!(p.depth, 3);
        assert!((p.z.re - oracle_t1()).abs() < 1e-12);
        assert!((p.z.re - 1.43325).abs() < 1e-4);
        let e = trace_point(&m, &zero(), std::f64::consts::E).unwrap();
        assert_eq!(e.depth, 2);
        let l4 = 4f64.ln();
        assert!((e.z.re - ((1f64.exp().exp().exp() + l4).ln() + l4).ln()).abs() < 1e-12);
        assert!((e.z.re - 2.80628).abs() < 1e-3);
        for t in [0.2, 1.0, 3.0, 50.0, 600.0] {
            let p = trace_point(&m, &zero(), t).unwrap();
            assert_eq!(p.z.im, 0.0);
            assert!(p.residual < 1e-8);
        }
    }

    #[test]
    fn functional_equation() {
        let m = quarter();
        for s in ["0", "1;0", "0 -1", "2 0 1"] {
            let s = parse_address(s).unwrap();
            for t in [0.1, 0.5, 1.0, 2.0, 4.0, 6.0] {
                let lhs = m.eval(trace_point(&m, &s, t).unwrap().z).unwrap();
                let rhs = trace_point(&m, &s.shift(), t.exp()).unwrap().z;
                assert!((lhs - rhs).norm() < 1e-6 * (1.0 + rhs.norm()), "{s} at {t}");
            }
        }
    }

    #[test]
    fn hair_grid_and_failures() {
        let m = quarter();
        let hair = trace_hair(&m, &zero(), &[-0.5, 0.5, 1.0, 700.0]).unwrap();
        assert_eq!(hair.points.len(), 2);
        assert_eq!(hair.skipped.len(), 2);
        assert!(hair.points.windows(2).all(|w| w[0].t < w[1].t && w[0].z.re < w[1].z.re));
        assert!(matches!(trace_hair(&m, &zero(), &[-2.0, -1.0]), Err(Error::Empty(_))));
        assert!(matches!(trace_hair(&m, &zero(), &[1.0, 1.0]), Err(Error::InvalidArgument(_))));
        assert!(matches!(trace_hair(&m, &zero(), &[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn endpoint_of_the_real_hair() {
        let m = quarter();
        let e = endpoint_estimate(&m, &zero()).unwrap();
        let mut q: f64 = 2.0;
        for _ in 0..60 {
            q -= (0.25 * q.exp() - q) / (0.25 * q.exp() - 1.0);
        }
        assert!((e.z.exp().re - q).abs() < 1e-9);
        assert!((q - 2.153292).abs() < 1e-6);
        assert!((e.z.re - q.ln()).abs() < 1e-12);
        assert!(traceable(&m, &zero(), e.t + 1e-3).unwrap());
        assert!(!traceable(&m, &zero(), e.t - 1e-3).unwrap());
    }

    #[test]
    fn endpoint_with_a_large_first_symbol() {
        let m = quarter();
        let e = endpoint_estimate(&m, &parse_address("50;0").unwrap()).unwrap();
        assert!((e.z.im - 2.0 * PI * 50.0).abs() < PI / 2.0);
        let base = endpoint_estimate(&m, &zero()).unwrap();
        assert!((m.eval(e.z).unwrap() - base.z).norm() < 1e-9);
    }

    #[test]
    fn traced_points_approach_the_endpoint() {
        let m = quarter();
        let e = endpoint_estimate(&m, &zero()).unwrap();
        let d: Vec<f64> =
            [1e-2, 1e-4, 1e-8].iter().map(|&t| (trace_point(&m, &zero(), t).unwrap().z - e.z).norm()).collect();
        assert!(d[0] > d[1] && d[1] > d[2]);
        assert!(d[2] < 1e-2);
    }
}
