use crate::address::ExternalAddress;
use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel};
use crate::rays::{endpoint_estimate, trace_point};

/// Default number of iterates [`hairy_subset_z`] follows.
pub const Z_DEFAULT_DEPTH: usize = 20;

const GRID_POINTS: usize = 400;
const GOLDEN_ITERS: usize = 200;
/// Highest potential the search window may reach before tracing overflows.
const T_CEILING: f64 = 690.0;

fn on_hair_tol(z: ComplexPoint) -> f64 {
    1e-6 * (1.0 + z.norm())
}

/// The potential `ρ(z)` of a point on the hair `γ_s`: the `t` with
/// `γ_s(t) = z`. Fails with `NotOnHair` when no traced point comes within
/// `1e-6 (1 + |z|)` of `z`.
pub fn potential_rho(model: &LogModel, z: ComplexPoint, s: &ExternalAddress) -> Result<f64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("point {z} is not finite")));
    }
    if z.re > T_CEILING {
        return Err(Error::Overflow(z.re));
    }
    let end = endpoint_estimate(model, s)?;
    if (z - end.z).norm() <= on_hair_tol(z) {
        return Ok(end.t);
    }
    let lo = end.t;
    let hi = (2.0 * z.re.max(1.0) + 5.0).min(T_CEILING);
    let dist = |t: f64| -> Result<f64> {
        if t <= lo {
            return Ok((end.z - z).norm());
        }
        match trace_point(model, s, t) {
            Ok(p) => Ok((p.z - z).norm()),
            Err(Error::LeftH { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    // Cubic spacing puts most grid points near the endpoint, where the hair
    // moves fastest in t.
    let grid: Vec<f64> = (0..=GRID_POINTS).map(|i| lo + (hi - lo) * (i as f64 / GRID_POINTS as f64).powi(3)).collect();
    let mut best = (0, f64::INFINITY);
    for (i, &t) in grid.iter().enumerate() {
        let d = dist(t)?;
        if d < best.1 {
            best = (i, d);
        }
    }
    let i = best.0;
    let (mut a, mut b) = (grid[i.saturating_sub(1)], grid[(i + 1).min(GRID_POINTS)]);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (dist(c)?, dist(d)?);
    for _ in 0..GOLDEN_ITERS {
        if b - a <= 1e-14 * (1.0 + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = dist(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = dist(d)?;
        }
    }
    let (t, residual) = [(c, fc), (d, fd), (grid[i], best.1)].into_iter().fold((f64::NAN, f64::INFINITY), |acc, x| {
        if x.1 < acc.1 {
            x
        } else {
            acc
        }
    });
    if residual > on_hair_tol(z) {
        return Err(Error::NotOnHair(residual));
    }
    Ok(t)
}

/// Outcome of following an orbit through the set `Z(K)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZReport {
    pub member: bool,
    /// Number of iterates whose potential was checked.
    pub depth_checked: usize,
    /// The orbit left the representable range while escaping; such orbits
    /// count as members.
    pub overflowed: bool,
    /// Smallest potential seen along the orbit.
    pub min_rho: f64,
}

/// Whether `ρ(F^j z) ≥ k_rho` for `j = 0..=depth`, where `z` lies on the
/// hair `γ_s` and `F^j z` is located on `γ_{σ^j s}`.
pub fn hairy_subset_z(
    model: &LogModel,
    k_rho: f64,
    z: ComplexPoint,
    s: &ExternalAddress,
    depth: usize,
) -> Result<ZReport> {
    let mut point = z;
    let mut address = s.clone();
    let mut min_rho = f64::INFINITY;
    for j in 0..=depth {
        if point.re > T_CEILING {
            return Ok(ZReport { member: true, depth_checked: j, overflowed: true, min_rho });
        }
        let rho = potential_rho(model, point, &address)?;
        min_rho = min_rho.min(rho);
        if rho < k_rho {
            return Ok(ZReport { member: false, depth_checked: j, overflowed: false, min_rho });
        }
        if j == depth {
            break;
        }
        point = match model.eval(point) {
            Ok(p) => p,
            Err(Error::Overflow(_)) => {
                return Ok(ZReport { member: true, depth_checked: j + 1, overflowed: true, min_rho })
            }
            Err(e) => return Err(e),
        };
        address = address.shift();
    }
    Ok(ZReport { member: true, depth_checked: depth, overflowed: false, min_rho })
}
