use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{check_finite, guard_re, ComplexPoint, Half, TractId, TWO_PI};
use crate::error::{Error, Result};

/// Abscissa at which tract bands are sampled to decide the vertical order.
pub(crate) const BAND_ABSCISSA: f64 = 50.0;

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_STEPS: usize = 60;
const BOUNDARY_SAMPLES: usize = 2048;

/// Lift of `f(w) = λ sin w`, `λ > 0`.
///
/// On `Im w > 0` we use `λ sin w = λ(i/2)e^{−iw}(1 − e^{2iw})`, so
/// `log(λ sin w) = ln(λ/2) + iπ/2 − iw + Log(1 − e^{2iw})`, and symmetrically
/// on `Im w < 0`. Both pieces are single-valued on their half-planes, and
/// `F(z)` is that logarithm at `w = e^z`. The tract `(k, Upper)` is the lift
/// of the upper component of `{|λ sin w| > R_f}` with `Im z ∈ (2πk, 2πk + π)`;
/// `(k, Lower)` has `Im z ∈ (2πk − π, 2πk)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SineModel {
    pub lambda: f64,
    pub r_f: f64,
    pub h_threshold: f64,
    log_half_lambda: f64,
}

impl SineModel {
    pub fn new(lambda: f64, r_f: f64) -> Result<SineModel> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InfeasibleModel(format!("sine lambda must be positive, got {lambda}")));
        }
        if !(r_f.is_finite() && r_f > lambda) {
            return Err(Error::InfeasibleModel(format!("R_f must exceed lambda = {lambda}, got {r_f}")));
        }
        Ok(SineModel { lambda, r_f, h_threshold: r_f.ln(), log_half_lambda: (lambda / 2.0).ln() })
    }

    fn log_lift(&self, w: Complex64) -> Complex64 {
        let i = Complex64::i();
        if w.im >= 0.0 {
            let q = (2.0 * i * w).exp();
            Complex64::new(self.log_half_lambda, FRAC_PI_2) - i * w + (1.0 - q).ln()
        } else {
            let p = (-2.0 * i * w).exp();
            Complex64::new(self.log_half_lambda, -FRAC_PI_2) + i * w + (1.0 - p).ln()
        }
    }

    /// `d/dw log sin w = cot w`, written through the same exponentials.
    fn log_lift_prime(&self, w: Complex64) -> Complex64 {
        let i = Complex64::i();
        if w.im >= 0.0 {
            let q = (2.0 * i * w).exp();
            -i * (1.0 + q) / (1.0 - q)
        } else {
            let p = (-2.0 * i * w).exp();
            i * (1.0 + p) / (1.0 - p)
        }
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        guard_re(z)?;
        check_finite(self.log_lift(z.exp()))
    }

    pub fn eval_prime(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        guard_re(z)?;
        let w = z.exp();
        check_finite(self.log_lift_prime(w) * w)
    }

    pub fn eval_f(&self, w: ComplexPoint) -> Result<ComplexPoint> {
        if w.im.abs() > super::OVERFLOW_RE {
            return Err(Error::Overflow(w.im.abs()));
        }
        check_finite(self.lambda * w.sin())
    }

    pub fn classify(&self, z: ComplexPoint) -> Result<Option<TractId>> {
        guard_re(z)?;
        let theta = z.im.rem_euclid(TWO_PI);
        if theta == 0.0 || theta == PI {
            return Ok(None);
        }
        let w = z.exp();
        if w.im == 0.0 {
            return Ok(None);
        }
        let modulus_log = self.log_lift(w).re;
        if !(modulus_log >= self.h_threshold) {
            return Ok(None);
        }
        let id = if theta < PI {
            TractId::Sine { k: (z.im / TWO_PI).floor() as i64, half: Half::Upper }
        } else {
            TractId::Sine { k: (z.im / TWO_PI).ceil() as i64, half: Half::Lower }
        };
        Ok(Some(id))
    }

    /// Damped Newton in the `w = e^z` plane, started from the asymptotic
    /// inverse of `sin w ≈ ∓(i/2)e^{±iw}`.
    pub fn inverse_branch(&self, target: &TractId, zeta: ComplexPoint) -> Result<ComplexPoint> {
        let TractId::Sine { k, half } = target else {
            return Err(Error::ModelMismatch(format!("{target} is not a sine tract")));
        };
        let i = Complex64::i();
        let upper = *half == Half::Upper;
        let shifted = zeta - self.log_half_lambda;
        let mut w = if upper { FRAC_PI_2 + i * shifted } else { FRAC_PI_2 - i * shifted };
        let scale = 1.0 + zeta.norm();
        let mut residual = (self.log_lift(w) - zeta).norm();
        let mut steps = 0;
        while residual > NEWTON_TOL * scale && steps < NEWTON_MAX_STEPS {
            steps += 1;
            let r = self.log_lift(w) - zeta;
            let step = r / self.log_lift_prime(w);
            let mut damping = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let candidate = w - step * damping;
                let same_side = if upper { candidate.im > 0.0 } else { candidate.im < 0.0 };
                if same_side {
                    let cand_res = (self.log_lift(candidate) - zeta).norm();
                    if cand_res.is_finite() && cand_res < residual {
                        w = candidate;
                        residual = cand_res;
                        accepted = true;
                        break;
                    }
                }
                damping *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let z = w.ln() + Complex64::new(0.0, TWO_PI * *k as f64);
        let image = self.eval(z)?;
        let res = (image - zeta).norm();
        if res > 1e-10 * scale || self.classify(z)?.as_ref() != Some(target) {
            return Err(Error::NoConvergence { steps, residual: res });
        }
        Ok(z)
    }

    /// `|w|` along the upper boundary curve `|λ sin w| = R_f` over one
    /// period; the lower curve is its mirror image.
    fn boundary_moduli(&self) -> impl Iterator<Item = f64> + '_ {
        let r = self.r_f / self.lambda;
        (0..=BOUNDARY_SAMPLES).map(move |j| {
            let x = -PI + TWO_PI * j as f64 / BOUNDARY_SAMPLES as f64;
            let y = (r * r - x.sin().powi(2)).max(0.0).sqrt().asinh();
            x.hypot(y)
        })
    }

    pub fn validate_disjoint_type(&self) -> bool {
        self.boundary_moduli().all(|m| m.ln() > self.h_threshold)
    }

    pub fn tract_min_re(&self) -> f64 {
        self.boundary_moduli().fold(f64::INFINITY, f64::min).ln()
    }

    /// Midpoint of the Im-band of `tract` on the vertical line `Re z = x`.
    pub(crate) fn band_midpoint(&self, tract: &TractId, x: f64) -> Result<f64> {
        let k = tract.translation().ok_or_else(|| Error::ModelMismatch(format!("{tract} is not a sine tract")))?;
        let centre = TWO_PI * k as f64;
        let n = 4096;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for j in 1..n {
            let im = centre - PI + TWO_PI * j as f64 / n as f64;
            if self.classify(ComplexPoint::new(x, im))?.as_ref() == Some(tract) {
                lo = lo.min(im);
                hi = hi.max(im);
            }
        }
        if lo > hi {
            return Err(Error::NotInTract);
        }
        Ok(0.5 * (lo + hi))
    }

    fn in_tract_at(&self, rho: f64, theta: f64) -> bool {
        let w = Complex64::from_polar(rho, theta);
        w.im != 0.0 && self.log_lift(w).re >= self.h_threshold
    }

    pub fn boundary_point(&self, tract: &TractId, upper: bool, x: f64) -> Result<Option<ComplexPoint>> {
        let TractId::Sine { k, half } = tract else {
            return Err(Error::ModelMismatch(format!("{tract} is not a sine tract")));
        };
        if x > super::OVERFLOW_RE {
            return Err(Error::Overflow(x));
        }
        let rho = x.exp();
        let mid = if *half == Half::Upper { FRAC_PI_2 } else { -FRAC_PI_2 };
        if !self.in_tract_at(rho, mid) {
            return Ok(None);
        }
        // Bisect between the band centre and the real axis on the requested side.
        let outside = if upper { mid + FRAC_PI_2 } else { mid - FRAC_PI_2 };
        let (mut inside, mut out) = (mid, outside);
        for _ in 0..80 {
            let m = 0.5 * (inside + out);
            if self.in_tract_at(rho, m) {
                inside = m;
            } else {
                out = m;
            }
        }
        Ok(Some(ComplexPoint::new(x, TWO_PI * *k as f64 + inside)))
    }
}
