//! Logarithmic transforms of model entire functions.
//!
//! A [`LogModel`] is a map `F: T → H` with `exp ∘ F = f ∘ exp`, where `H` is
//! the half-plane `Re z > ln R_f` and `T` is the union of the tracts, i.e. the
//! components of `exp⁻¹(f⁻¹(ℂ ∖ D̄))` for the disk `D` of radius `R_f`.
//! Every model is immutable after construction and all operations are pure.

mod composite;
mod exp;
mod sine;

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, RngExt};

use crate::error::{Error, Result};

pub use composite::CompositeModel;
pub use exp::ExpModel;
pub use sine::SineModel;

/// A point of the logarithmic (or, where stated, the original) plane.
pub type ComplexPoint = Complex64;

/// Real parts beyond this are refused instead of fed to `exp`.
pub const OVERFLOW_RE: f64 = 700.0;

pub(crate) const TWO_PI: f64 = 2.0 * PI;

/// Half of a sine-family tract pair: the logarithmic lift of the lower or
/// upper component of `{|λ sin w| > R_f}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Half {
    Lower,
    Upper,
}

/// Identifies a tract of a model. Equality is structural; the vertical
/// order is given by [`TractId::structural_cmp`] and checked against the
/// geometry by [`LogModel::vertical_compare`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TractId {
    /// The `2πik` translate of the single exponential tract.
    Exp(i64),
    /// The `2πik` translate of the lower or upper sine tract.
    Sine { k: i64, half: Half },
    /// One tract per stage of a composition, first stage first.
    Composite(Vec<TractId>),
}

/// The symbol family a tract id belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Exp,
    Sine,
    Composite(Vec<Alphabet>),
}

impl TractId {
    pub fn alphabet(&self) -> Alphabet {
        match self {
            TractId::Exp(_) => Alphabet::Exp,
            TractId::Sine { .. } => Alphabet::Sine,
            TractId::Composite(parts) => Alphabet::Composite(parts.iter().map(TractId::alphabet).collect()),
        }
    }

    /// Vertical order of tracts near infinity. Ids from different
    /// alphabets are not comparable.
    pub fn structural_cmp(&self, other: &TractId) -> Result<Ordering> {
        match (self, other) {
            (TractId::Exp(a), TractId::Exp(b)) => Ok(a.cmp(b)),
            (TractId::Sine { k: a, half: ha }, TractId::Sine { k: b, half: hb }) => Ok((a, ha).cmp(&(b, hb))),
            (TractId::Composite(a), TractId::Composite(b)) if a.len() == b.len() => {
                for (x, y) in a.iter().zip(b) {
                    match x.structural_cmp(y)? {
                        Ordering::Equal => continue,
                        ord => return Ok(ord),
                    }
                }
                Ok(Ordering::Equal)
            }
            _ => Err(Error::ModelMismatch(format!("cannot compare tracts {self} and {other}"))),
        }
    }

    /// Order-preserving bijection onto ℤ, available for alphabets with
    /// finitely many tracts per period.
    pub fn to_index(&self) -> Option<i64> {
        match self {
            TractId::Exp(k) => Some(*k),
            TractId::Sine { k, half } => Some(2 * k + i64::from(*half == Half::Upper)),
            TractId::Composite(_) => None,
        }
    }

    pub fn from_index(alphabet: &Alphabet, index: i64) -> Option<TractId> {
        match alphabet {
            Alphabet::Exp => Some(TractId::Exp(index)),
            Alphabet::Sine => Some(TractId::Sine {
                k: index.div_euclid(2),
                half: if index.rem_euclid(2) == 1 { Half::Upper } else { Half::Lower },
            }),
            Alphabet::Composite(_) => None,
        }
    }

    /// The next tract above this one, if the alphabet has one.
    pub fn successor(&self) -> Option<TractId> {
        let i = self.to_index()?;
        TractId::from_index(&self.alphabet(), i.checked_add(1)?)
    }

    pub fn predecessor(&self) -> Option<TractId> {
        let i = self.to_index()?;
        TractId::from_index(&self.alphabet(), i.checked_sub(1)?)
    }

    /// Which `2πi`-translate this tract is.
    pub fn translation(&self) -> Option<i64> {
        match self {
            TractId::Exp(k) | TractId::Sine { k, .. } => Some(*k),
            TractId::Composite(_) => None,
        }
    }

    /// The tract translated by `2πi·m`.
    pub fn translated(&self, m: i64) -> Option<TractId> {
        match self {
            TractId::Exp(k) => Some(TractId::Exp(k.checked_add(m)?)),
            TractId::Sine { k, half } => Some(TractId::Sine { k: k.checked_add(m)?, half: *half }),
            TractId::Composite(_) => None,
        }
    }
}

impl fmt::Display for TractId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TractId::Exp(k) => write!(f, "{k}"),
            TractId::Sine { k, half: Half::Upper } => write!(f, "{k}.U"),
            TractId::Sine { k, half: Half::Lower } => write!(f, "{k}.L"),
            TractId::Composite(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Exp,
    Sine,
    Composite,
}

/// A logarithmic transform of one of the model families.
#[derive(Clone, Debug, PartialEq)]
pub enum LogModel {
    Exp(ExpModel),
    Sine(SineModel),
    Composite(CompositeModel),
}

pub(crate) fn check_finite(z: ComplexPoint) -> Result<ComplexPoint> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Overflow(z.re))
    }
}

pub(crate) fn guard_re(z: ComplexPoint) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.re > OVERFLOW_RE {
        Err(Error::Overflow(z.re))
    } else {
        Ok(())
    }
}

impl LogModel {
    /// Exponential family `f(w) = λe^w` with excluded radius `r_f`; fails
    /// unless the transform is of disjoint type.
    pub fn exp(lambda: ComplexPoint, r_f: f64) -> Result<LogModel> {
        let m = LogModel::Exp(ExpModel::new(lambda, r_f)?);
        if !m.validate_disjoint_type() {
            return Err(Error::InfeasibleModel(format!(
                "exp model with |lambda| = {} and R_f = {r_f} is not of disjoint type",
                lambda.norm()
            )));
        }
        Ok(m)
    }

    /// Exponential family with the default radius `R_f = 2`.
    pub fn exp_default(lambda: f64) -> Result<LogModel> {
        LogModel::exp(ComplexPoint::new(lambda, 0.0), ExpModel::DEFAULT_RF)
    }

    /// Exponential family without the disjoint-type gate; only basic
    /// well-formedness is checked.
    pub fn exp_unchecked(lambda: ComplexPoint, r_f: f64) -> Result<LogModel> {
        Ok(LogModel::Exp(ExpModel::new(lambda, r_f)?))
    }

    /// Sine family `f(w) = λ sin w` for real `λ > 0`.
    pub fn sine(lambda: f64, r_f: f64) -> Result<LogModel> {
        let m = LogModel::Sine(SineModel::new(lambda, r_f)?);
        if !m.validate_disjoint_type() {
            return Err(Error::InfeasibleModel(format!(
                "sine model with lambda = {lambda} and R_f = {r_f} is not of disjoint type"
            )));
        }
        Ok(m)
    }

    pub fn sine_unchecked(lambda: f64, r_f: f64) -> Result<LogModel> {
        Ok(LogModel::Sine(SineModel::new(lambda, r_f)?))
    }

    /// Composition `F_m ∘ … ∘ F_1` of the given stages (first stage applied
    /// first).
    pub fn composite(stages: Vec<LogModel>) -> Result<LogModel> {
        Ok(LogModel::Composite(CompositeModel::new(stages)?))
    }

    pub fn family(&self) -> Family {
        match self {
            LogModel::Exp(_) => Family::Exp,
            LogModel::Sine(_) => Family::Sine,
            LogModel::Composite(_) => Family::Composite,
        }
    }

    /// Left edge of `H`: `ln R_f` of the last stage.
    pub fn h_threshold(&self) -> f64 {
        match self {
            LogModel::Exp(m) => m.h_threshold,
            LogModel::Sine(m) => m.h_threshold,
            LogModel::Composite(m) => m.last().h_threshold(),
        }
    }

    pub fn in_h(&self, w: ComplexPoint) -> bool {
        w.re > self.h_threshold()
    }

    /// Number of base-family steps one application of `F` performs.
    pub fn growth_steps(&self) -> usize {
        match self {
            LogModel::Composite(m) => m.stages().iter().map(LogModel::growth_steps).sum(),
            _ => 1,
        }
    }

    /// The alphabet of this model's tract ids.
    pub fn alphabet(&self) -> Alphabet {
        match self {
            LogModel::Exp(_) => Alphabet::Exp,
            LogModel::Sine(_) => Alphabet::Sine,
            LogModel::Composite(m) => Alphabet::Composite(m.stages().iter().map(LogModel::alphabet).collect()),
        }
    }

    pub fn owns(&self, id: &TractId) -> bool {
        id.alphabet() == self.alphabet()
    }

    fn require_owned(&self, id: &TractId) -> Result<()> {
        if self.owns(id) {
            Ok(())
        } else {
            Err(Error::ModelMismatch(format!("tract {id} does not belong to this model")))
        }
    }

    /// `F(z)` by the closed-form lift.
    pub fn eval(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        match self {
            LogModel::Exp(m) => m.eval(z),
            LogModel::Sine(m) => m.eval(z),
            LogModel::Composite(m) => m.eval(z),
        }
    }

    /// `F'(z)`.
    pub fn eval_prime(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        match self {
            LogModel::Exp(m) => m.eval_prime(z),
            LogModel::Sine(m) => m.eval_prime(z),
            LogModel::Composite(m) => m.eval_prime(z),
        }
    }

    /// The original map `f` in the `w = e^z` plane.
    pub fn eval_f(&self, w: ComplexPoint) -> Result<ComplexPoint> {
        match self {
            LogModel::Exp(m) => m.eval_f(w),
            LogModel::Sine(m) => m.eval_f(w),
            LogModel::Composite(m) => m.eval_f(w),
        }
    }

    /// The tract whose closure contains `z`, if any.
    pub fn classify(&self, z: ComplexPoint) -> Result<Option<TractId>> {
        match self {
            LogModel::Exp(m) => m.classify(z),
            LogModel::Sine(m) => m.classify(z),
            LogModel::Composite(m) => m.classify(z),
        }
    }

    /// `F_T⁻¹(w)` for `w ∈ H`.
    pub fn inverse_branch(&self, target: &TractId, w: ComplexPoint) -> Result<ComplexPoint> {
        self.require_owned(target)?;
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::Overflow(w.re));
        }
        if !self.in_h(w) {
            return Err(Error::OutOfH { re: w.re, im: w.im, threshold: self.h_threshold() });
        }
        match self {
            LogModel::Exp(m) => m.inverse_branch(target, w),
            LogModel::Sine(m) => m.inverse_branch(target, w),
            LogModel::Composite(m) => m.inverse_branch(target, w),
        }
    }

    /// Vertical order of two tracts. For the sine family this is decided
    /// from the sampled Im-bands far to the right, which for the supported
    /// geometry coincides with [`TractId::structural_cmp`].
    pub fn vertical_compare(&self, a: &TractId, b: &TractId) -> Result<Ordering> {
        self.require_owned(a)?;
        self.require_owned(b)?;
        match self {
            LogModel::Sine(m) => {
                if a == b {
                    return Ok(Ordering::Equal);
                }
                let ka = m.band_midpoint(a, sine::BAND_ABSCISSA)?;
                let kb = m.band_midpoint(b, sine::BAND_ABSCISSA)?;
                Ok(ka.total_cmp(&kb))
            }
            LogModel::Composite(m) => m.vertical_compare(a, b),
            LogModel::Exp(_) => a.structural_cmp(b),
        }
    }

    /// Whether the closure of the tracts lies inside `H`.
    pub fn validate_disjoint_type(&self) -> bool {
        match self {
            LogModel::Exp(m) => m.validate_disjoint_type(),
            LogModel::Sine(m) => m.validate_disjoint_type(),
            LogModel::Composite(m) => m.validate_disjoint_type(),
        }
    }

    /// Smallest real part over the closure of a tract (sampled for the
    /// sine family).
    pub fn tract_min_re(&self) -> f64 {
        match self {
            LogModel::Exp(m) => m.tract_min_re(),
            LogModel::Sine(m) => m.tract_min_re(),
            LogModel::Composite(m) => m.stages()[0].tract_min_re(),
        }
    }

    /// `(Re F(z) − ln K)/(4π)` with `ln K` the left edge of `H`; a lower
    /// bound for `|F'(z)|` on the tracts.
    pub fn expansion_lower_bound(&self, z: ComplexPoint) -> Result<f64> {
        if self.classify(z)?.is_none() {
            return Err(Error::NotInTract);
        }
        Ok(self.expansion_bound_for(self.eval(z)?.re))
    }

    /// The same bound expressed through `Re F(z)` directly.
    pub fn expansion_bound_for(&self, re_fz: f64) -> f64 {
        (re_fz - self.h_threshold()) / (4.0 * PI)
    }

    /// All tracts whose translation index lies in `lo..=hi`, in vertical
    /// order. For compositions this is the product over stages.
    pub fn tracts_in_range(&self, lo: i64, hi: i64) -> Vec<TractId> {
        match self {
            LogModel::Exp(_) => (lo..=hi).map(TractId::Exp).collect(),
            LogModel::Sine(_) => {
                (lo..=hi).flat_map(|k| [Half::Lower, Half::Upper].map(|half| TractId::Sine { k, half })).collect()
            }
            LogModel::Composite(m) => {
                let mut out: Vec<Vec<TractId>> = vec![Vec::new()];
                for stage in m.stages() {
                    let ids = stage.tracts_in_range(lo, hi);
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            ids.iter().map(move |id| {
                                let mut p = prefix.clone();
                                p.push(id.clone());
                                p
                            })
                        })
                        .collect();
                }
                out.into_iter().map(TractId::Composite).collect()
            }
        }
    }

    /// A point in the closure of `tract` at the given image: the inverse
    /// branch of a uniformly drawn `w ∈ H` with `Re w ≤ re_max` and
    /// `|Im w| ≤ im_max`.
    pub fn sample_in_tract<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        tract: &TractId,
        re_max: f64,
        im_max: f64,
    ) -> Result<(ComplexPoint, ComplexPoint)> {
        let lo = self.h_threshold();
        let re = lo + (re_max - lo) * rng.random::<f64>();
        // Keep off the open boundary of H.
        let re = re.max(lo + 1e-9);
        let im = im_max * (2.0 * rng.random::<f64>() - 1.0);
        let w = ComplexPoint::new(re, im);
        Ok((self.inverse_branch(tract, w)?, w))
    }

    /// Point on the boundary of `tract` at abscissa `x`: the upper or lower
    /// edge of the tract's Im-band there. `None` if the tract does not reach
    /// that far left.
    pub fn boundary_point(&self, tract: &TractId, upper: bool, x: f64) -> Result<Option<ComplexPoint>> {
        self.require_owned(tract)?;
        match self {
            LogModel::Exp(m) => Ok(m.boundary_point(tract, upper, x)),
            LogModel::Sine(m) => m.boundary_point(tract, upper, x),
            LogModel::Composite(_) => {
                Err(Error::UnsupportedAlphabet("tract boundaries are not tabulated for compositions".into()))
            }
        }
    }

    /// Whether tract ids of this model carry a `2πi` translation action.
    pub fn has_translation(&self) -> bool {
        !matches!(self, LogModel::Composite(_))
    }
}
