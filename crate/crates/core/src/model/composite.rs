use std::cmp::Ordering;

use super::{ComplexPoint, LogModel, TractId};
use crate::error::{Error, Result};

/// `F = F_m ∘ … ∘ F_1`, realised stage by stage. A tract of the composition
/// is the tuple of tracts visited by the partial compositions, and its
/// inverse branch composes the per-stage inverse branches.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeModel {
    stages: Vec<LogModel>,
}

impl CompositeModel {
    pub fn new(stages: Vec<LogModel>) -> Result<CompositeModel> {
        if stages.is_empty() {
            return Err(Error::InfeasibleModel("composition needs at least one stage".into()));
        }
        if stages.iter().any(|s| matches!(s, LogModel::Composite(_))) {
            return Err(Error::InfeasibleModel("nested compositions are not supported".into()));
        }
        Ok(CompositeModel { stages })
    }

    pub fn stages(&self) -> &[LogModel] {
        &self.stages
    }

    pub fn last(&self) -> &LogModel {
        self.stages.last().expect("nonempty by construction")
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        self.stages.iter().try_fold(z, |acc, s| s.eval(acc))
    }

    pub fn eval_prime(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        let mut point = z;
        let mut derivative = ComplexPoint::new(1.0, 0.0);
        for s in &self.stages {
            derivative *= s.eval_prime(point)?;
            point = s.eval(point)?;
        }
        Ok(derivative)
    }

    pub fn eval_f(&self, w: ComplexPoint) -> Result<ComplexPoint> {
        self.stages.iter().try_fold(w, |acc, s| s.eval_f(acc))
    }

    pub fn classify(&self, z: ComplexPoint) -> Result<Option<TractId>> {
        let mut point = z;
        let mut ids = Vec::with_capacity(self.stages.len());
        for (i, s) in self.stages.iter().enumerate() {
            match s.classify(point)? {
                Some(id) => ids.push(id),
                None => return Ok(None),
            }
            if i + 1 < self.stages.len() {
                point = s.eval(point)?;
            }
        }
        Ok(Some(TractId::Composite(ids)))
    }

    pub fn inverse_branch(&self, target: &TractId, w: ComplexPoint) -> Result<ComplexPoint> {
        let TractId::Composite(ids) = target else {
            return Err(Error::ModelMismatch(format!("{target} is not a composite tract")));
        };
        if ids.len() != self.stages.len() {
            return Err(Error::ModelMismatch(format!("{target} has the wrong number of stages")));
        }
        let mut point = w;
        for (stage, id) in self.stages.iter().zip(ids).rev() {
            point = stage.inverse_branch(id, point)?;
        }
        Ok(point)
    }

    pub fn vertical_compare(&self, a: &TractId, b: &TractId) -> Result<Ordering> {
        let (TractId::Composite(xs), TractId::Composite(ys)) = (a, b) else {
            return Err(Error::ModelMismatch("expected composite tracts".into()));
        };
        for ((stage, x), y) in self.stages.iter().zip(xs).zip(ys) {
            match stage.vertical_compare(x, y)? {
                Ordering::Equal => continue,
                ord => return Ok(ord),
            }
        }
        Ok(Ordering::Equal)
    }

    /// Every stage is of disjoint type, each stage's tracts lie in the
    /// previous stage's half-plane, and the first stage's tracts lie in the
    /// final half-plane.
    pub fn validate_disjoint_type(&self) -> bool {
        if !self.stages.iter().all(LogModel::validate_disjoint_type) {
            return false;
        }
        let chained = self.stages.windows(2).all(|pair| pair[1].tract_min_re() > pair[0].h_threshold());
        chained && self.stages[0].tract_min_re() > self.last().h_threshold()
    }
}
