use num_complex::Complex64;

use super::{check_finite, guard_re, ComplexPoint, TractId, TWO_PI};
use crate::error::{Error, Result};

/// `F(z) = e^z + c` with `c = Log λ`, the lift of `f(w) = λe^w`.
///
/// The tract `T_k` is the component of `{Re e^z > c0}` inside the band
/// `|Im z − 2πk| < π/2`, with `c0 = ln(R_f/|λ|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpModel {
    pub lambda: Complex64,
    pub c: Complex64,
    pub r_f: f64,
    pub c0: f64,
    pub h_threshold: f64,
}

impl ExpModel {
    pub const DEFAULT_RF: f64 = 2.0;

    pub fn new(lambda: Complex64, r_f: f64) -> Result<ExpModel> {
        let modulus = lambda.norm();
        if !(modulus.is_finite() && modulus > 0.0) {
            return Err(Error::InfeasibleModel(format!("lambda must be nonzero and finite, got {lambda}")));
        }
        if !(r_f.is_finite() && r_f > modulus) {
            return Err(Error::InfeasibleModel(format!("R_f must exceed |lambda| = {modulus}, got {r_f}")));
        }
        Ok(ExpModel { lambda, c: lambda.ln(), r_f, c0: (r_f / modulus).ln(), h_threshold: r_f.ln() })
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        guard_re(z)?;
        check_finite(z.exp() + self.c)
    }

    pub fn eval_prime(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        guard_re(z)?;
        check_finite(z.exp())
    }

    pub fn eval_f(&self, w: ComplexPoint) -> Result<ComplexPoint> {
        guard_re(w)?;
        check_finite(self.lambda * w.exp())
    }

    pub fn classify(&self, z: ComplexPoint) -> Result<Option<TractId>> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Overflow(z.re));
        }
        let k = (z.im / TWO_PI).round();
        let theta = z.im - TWO_PI * k;
        // Re e^z ≥ c0  ⇔  cos θ ≥ c0·e^{−Re z}; no overflow for large Re z.
        if theta.cos() >= self.c0 * (-z.re).exp() {
            Ok(Some(TractId::Exp(k as i64)))
        } else {
            Ok(None)
        }
    }

    pub fn inverse_branch(&self, target: &TractId, w: ComplexPoint) -> Result<ComplexPoint> {
        let TractId::Exp(k) = target else {
            return Err(Error::ModelMismatch(format!("{target} is not an exp tract")));
        };
        Ok(self.lift_inverse(*k, w))
    }

    /// `Log(w − c) + 2πik` without the half-plane check.
    pub fn lift_inverse(&self, k: i64, w: ComplexPoint) -> ComplexPoint {
        (w - self.c).ln() + Complex64::new(0.0, TWO_PI * k as f64)
    }

    pub fn validate_disjoint_type(&self) -> bool {
        // min Re over T̄ is ln c0, so T̄ ⊂ H iff c0 ≥ R_f.
        self.r_f.ln() + (1.0 / self.lambda.norm()).ln() >= self.r_f
    }

    pub fn tract_min_re(&self) -> f64 {
        if self.c0 > 0.0 {
            self.c0.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    pub fn boundary_point(&self, tract: &TractId, upper: bool, x: f64) -> Option<ComplexPoint> {
        let TractId::Exp(k) = tract else { return None };
        let ratio = self.c0 * (-x).exp();
        if !(ratio <= 1.0) {
            return None;
        }
        let half_width = ratio.acos();
        let centre = TWO_PI * *k as f64;
        let im = if upper { centre + half_width } else { centre - half_width };
        Some(ComplexPoint::new(x, im))
    }
}
