//! Hairs of `F`: tracing by pullback, endpoints, and the order-theoretic
//! checks that make a hair an arc to infinity.
//!
//! A hair with address `s` is parameterised by a potential `t > 0`. The
//! anchor tower `G^n(t)` escapes past `1e300` after finitely many steps,
//! and the traced point is the pullback of that anchor along the first `n`
//! entries of `s`. Here `G = exp` on `[T_FLOOR, ∞)` and is extended
//! linearly to `(−∞, T_FLOOR)` through the origin, so `t → 0` gives
//! unbounded depth and the traced points converge to the endpoint.

mod accumulation;
mod order;
mod speed;
mod trace;

use crate::address::ExternalAddress;
use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel};

pub use accumulation::{accumulation_address, accumulation_neighbors, AccumulationStep};
pub use order::{speed_order_verify, OrderViolation, SpeedOrderReport, SPEED_J_MAX};
pub use speed::{
    expansion_verify, head_start_verify, in_jr, speed_compare, ExpansionReport, HeadStartParams, HeadStartReport,
    HeadStartViolation, JrReport, SpeedOrderResult, SpeedVerdict,
};
pub use speed::{JR_DEFAULT_DEPTH, MIN_APPLICABLE};
pub use trace::{endpoint_estimate, trace_hair, trace_point, Endpoint, RayPoint, TracedHair};

/// Below this potential the tower is linear instead of exponential.
pub const T_FLOOR: f64 = 0.1;
/// Largest anchor the tower may reach.
pub const ANCHOR_CAP: f64 = 1e300;
/// Longest tower considered before giving up.
pub const MAX_DEPTH: usize = 400;

/// One step of the anchor tower.
pub fn tower_step(t: f64) -> f64 {
    if t >= T_FLOOR {
        t.exp()
    } else {
        t * T_FLOOR.exp() / T_FLOOR
    }
}

/// `G^n(t)`.
pub fn tower(t: f64, n: usize) -> f64 {
    (0..n).fold(t, |a, _| tower_step(a))
}

/// The depth `n(t)` and anchor `G^{m·n}(t)`, where `m` is the number of
/// base steps per application of `F`. Fails when the tower does not pass
/// `ANCHOR_CAP` within `MAX_DEPTH` levels, or when even one level
/// overshoots.
pub fn anchor_for(model: &LogModel, t: f64) -> Result<(usize, f64)> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("potential {t} is not finite")));
    }
    let m = model.growth_steps();
    let mut anchor = t;
    for n in 0..=MAX_DEPTH {
        let next = tower(anchor, m);
        if next > ANCHOR_CAP {
            return if n == 0 { Err(Error::Overflow(t)) } else { Ok((n, anchor)) };
        }
        if !next.is_finite() {
            break;
        }
        anchor = next;
    }
    Err(Error::LeftH { step: 0 })
}

/// `F_{s_0}^{-1} ∘ … ∘ F_{s_{n−1}}^{-1}(anchor)`.
pub fn pullback_chain(model: &LogModel, s: &ExternalAddress, n: usize, anchor: ComplexPoint) -> Result<ComplexPoint> {
    let mut point = anchor;
    for j in (0..n).rev() {
        point = match model.inverse_branch(s.symbol(j), point) {
            Ok(p) => p,
            Err(Error::OutOfH { .. }) => return Err(Error::LeftH { step: j }),
            Err(e) => return Err(e),
        };
    }
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::parse_address;
    use std::f64::consts::PI;

    fn quarter() -> LogModel {
        LogModel::exp_default(0.25).unwrap()
    }

    #[test]
    fn single_pullback() {
        let z = pullback_chain(&quarter(), &parse_address("0").unwrap(), 1, ComplexPoint::new(2.613706, 0.0)).unwrap();
        assert!((z - ComplexPoint::new(1.386294, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn deep_pullback_converges_to_fixed_point() {
        // Newton on e^z − ln 4 − z = 0.
        let mut q: f64 = 1.0;
        for _ in 0..50 {
            q -= (q.exp() - 4f64.ln() - q) / (q.exp() - 1.0);
        }
        let z = pullback_chain(&quarter(), &parse_address("0").unwrap(), 60, ComplexPoint::new(5.0, 0.0)).unwrap();
        assert!((z.re - q).abs() < 1e-12 && z.im == 0.0);
        assert!((q.exp() - 2.153292).abs() < 1e-6);
    }

    #[test]
    fn pullback_through_a_translate() {
        let s = parse_address("1;0").unwrap();
        let z = pullback_chain(&quarter(), &s, 2, ComplexPoint::new(10.0, 0.0)).unwrap();
        assert!((z.im - 2.0 * PI).abs() < 1e-12);
        // The first pullback stays real, the second adds 2πi.
        let inner = pullback_chain(&quarter(), &s.shift(), 1, ComplexPoint::new(10.0, 0.0)).unwrap();
        let outer = (inner + 4f64.ln()).ln() + ComplexPoint::new(0.0, 2.0 * PI);
        assert!((z - outer).norm() < 1e-14);
    }

    #[test]
    fn pullback_reports_leaving_h() {
        let r = pullback_chain(&quarter(), &parse_address("0").unwrap(), 3, ComplexPoint::new(0.1, 0.0));
        assert_eq!(r, Err(Error::LeftH { step: 2 }));
    }

    #[test]
    fn tower_depths() {
        let m = quarter();
        assert_eq!(anchor_for(&m, 1.0).unwrap().0, 3);
        assert_eq!(anchor_for(&m, 600.0).unwrap().0, 1);
        assert!(matches!(anchor_for(&m, 695.0), Err(Error::Overflow(_))));
        assert!(anchor_for(&m, 1e-6).unwrap().0 > 5);
        assert!(matches!(anchor_for(&m, 0.0), Err(Error::LeftH { .. })));
        assert!(matches!(anchor_for(&m, -1e-3), Err(Error::LeftH { .. })));
        // Continuous through the floor.
        assert!((tower_step(T_FLOOR) - tower_step(T_FLOOR - 1e-15)).abs() < 1e-12);
    }
}
