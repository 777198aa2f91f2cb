//! Straight-brush pictures of finite hair families.
//!
//! Each hair `s` becomes the horizontal ray `[t*(s), ∞) × {Φ(s)}`: its
//! potential on the first axis and its address ordinate on the second.
//! [`check_brush_axioms`] tests the brush and comb conditions on such a
//! finite family by refining every hair into straddling neighbours.

mod check;
mod export;
mod potential;

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::address::{embed_ordinate, lex_compare_ext, AddressPoint, ExternalAddress};
use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel, TractId};
use crate::rays::{endpoint_estimate, trace_point};

pub use check::{check_brush_axioms, AxiomCheck, CheckStatus, CombCheckReport, Refinement, Witness};
pub use export::{brush_to_json, brush_to_json_with, model_to_json};
pub use potential::{hairy_subset_z, potential_rho, ZReport, Z_DEFAULT_DEPTH};

/// One hair of a brush.
#[derive(Clone, Debug, PartialEq)]
pub struct BrushHair {
    pub address: ExternalAddress,
    pub ordinate: f64,
    pub endpoint_t: f64,
    pub endpoint_z: ComplexPoint,
    /// `(t, γ(t))`, starting with the endpoint and increasing in `t`.
    pub samples: Vec<(f64, ComplexPoint)>,
}

/// A finite straight-brush picture, sorted by ordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct BrushEmbedding {
    pub model: LogModel,
    /// Human-readable description of the address family.
    pub family: String,
    pub t_grid: Vec<f64>,
    pub hairs: Vec<BrushHair>,
    /// Addresses that could not be traced, with the reason.
    pub failures: Vec<(ExternalAddress, Error)>,
}

/// Every purely periodic address with the given symbols and period at most
/// `max_period`, canonicalised, deduplicated and sorted lexicographically.
pub fn periodic_family(symbols: &[TractId], max_period: usize) -> Result<Vec<ExternalAddress>> {
    if symbols.is_empty() || max_period == 0 {
        return Err(Error::EmptyInput);
    }
    let mut out: Vec<ExternalAddress> = Vec::new();
    let mut words: Vec<Vec<TractId>> = vec![Vec::new()];
    for _ in 0..max_period {
        words = words
            .iter()
            .flat_map(|w| {
                symbols.iter().map(move |s| {
                    let mut v = w.clone();
                    v.push(s.clone());
                    v
                })
            })
            .collect();
        for w in &words {
            let a = ExternalAddress::periodic(w.clone())?;
            if !out.contains(&a) {
                out.push(a);
            }
        }
    }
    let mut err = None;
    out.sort_by(|a, b| {
        lex_compare_ext(a, b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn build_hair(model: &LogModel, s: &ExternalAddress, t_grid: &[f64]) -> Result<BrushHair> {
    let ordinate = embed_ordinate(&AddressPoint::Ext(s.clone()))?;
    let end = endpoint_estimate(model, s)?;
    let mut samples = vec![(end.t, end.z)];
    for &t in t_grid.iter().filter(|&&t| t > end.t) {
        samples.push((t, trace_point(model, s, t)?.z));
    }
    Ok(BrushHair { address: s.clone(), ordinate, endpoint_t: end.t, endpoint_z: end.z, samples })
}

/// Traces every address on `t_grid`, locates its endpoint and ordinate,
/// and sorts the hairs by ordinate.
pub fn build_brush(
    model: &LogModel,
    addresses: &[ExternalAddress],
    t_grid: &[f64],
    family: &str,
) -> Result<BrushEmbedding> {
    if addresses.is_empty() {
        return Err(Error::EmptyInput);
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("potential grid must be finite and strictly increasing".into()));
    }
    let mut unique: Vec<ExternalAddress> = Vec::new();
    for a in addresses {
        if !unique.contains(a) {
            unique.push(a.clone());
        }
    }
    let traced: Vec<(ExternalAddress, Result<BrushHair>)> =
        unique.par_iter().map(|s| (s.clone(), build_hair(model, s, t_grid))).collect();
    let mut hairs = Vec::new();
    let mut failures = Vec::new();
    for (s, r) in traced {
        match r {
            Ok(h) => hairs.push(h),
            Err(e) => failures.push((s, e)),
        }
    }
    if hairs.is_empty() {
        return Err(Error::Empty("no address in the family could be traced".into()));
    }
    hairs.sort_by(|a, b| a.ordinate.total_cmp(&b.ordinate));
    Ok(BrushEmbedding { model: model.clone(), family: family.to_string(), t_grid: t_grid.to_vec(), hairs, failures })
}
