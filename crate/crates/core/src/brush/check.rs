use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use super::{BrushEmbedding, BrushHair};
use crate::address::{embed_ordinate, external_between, lex_compare_ext, AddressPoint, ExternalAddress};
use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel};
use crate::rays::{accumulation_address, endpoint_estimate, trace_point};

/// Slack allowed when a sequence is required to be nonincreasing; it
/// absorbs the bisection tolerance of endpoint potentials.
const MONOTONE_SLACK: f64 = 1e-8;
/// Sample potentials may sit this far below the recorded endpoint.
const SAMPLE_T_SLACK: f64 = 1e-9;
/// Differences are required to be nonincreasing from this level on.
const MONOTONE_FROM: usize = 3;

/// How each hair `s` is refined: at level `n` the neighbours are `s` with
/// entry `n` moved one tract down and one tract up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub depth: usize,
}

impl Refinement {
    pub fn new(depth: usize) -> Result<Refinement> {
        if depth == 0 {
            return Err(Error::InvalidArgument("refinement depth must be at least 1".into()));
        }
        Ok(Refinement { depth })
    }

    /// `(β_n, γ_n)` with `β_n < s < γ_n`.
    pub fn neighbours(&self, s: &ExternalAddress, n: usize) -> Result<(ExternalAddress, ExternalAddress)> {
        Ok((accumulation_address(s, n, -1)?, accumulation_address(s, n, 1)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    InsufficientFamily,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::InsufficientFamily => "INSUFFICIENT_FAMILY",
        })
    }
}

/// A hair on which a check failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub hair: ExternalAddress,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub status: CheckStatus,
    pub witnesses: Vec<Witness>,
    /// Largest value of the quantity the check bounds, for reporting.
    pub worst: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombCheckReport {
    pub tol: f64,
    pub depth: usize,
    pub hairs: usize,
    pub checks: Vec<AxiomCheck>,
}

impl CombCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn status(&self) -> CheckStatus {
        if self.passed() {
            CheckStatus::Pass
        } else if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else {
            CheckStatus::InsufficientFamily
        }
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Every hair named by a failing check, without repeats.
    pub fn failing_hairs(&self) -> Vec<&ExternalAddress> {
        let mut out: Vec<&ExternalAddress> = Vec::new();
        for c in self.checks.iter().filter(|c| c.status == CheckStatus::Fail) {
            for w in &c.witnesses {
                if !out.contains(&&w.hair) {
                    out.push(&w.hair);
                }
            }
        }
        out
    }
}

/// What one hair's refinements look like.
#[derive(Clone, Debug)]
struct HairProbe {
    straddle: Vec<Witness>,
    t_diff: Vec<f64>,
    ordinate_diff: Vec<f64>,
    endpoint_dist: Vec<f64>,
    hausdorff: Vec<f64>,
}

fn hausdorff(a: &[ComplexPoint], b: &[ComplexPoint]) -> f64 {
    let one_way = |p: &[ComplexPoint], q: &[ComplexPoint]| {
        p.iter().map(|x| q.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// The arc of `s` over the hair's sample potentials, starting at its own
/// endpoint.
fn arc(model: &LogModel, s: &ExternalAddress, hair: &BrushHair) -> Result<(f64, Vec<ComplexPoint>, ComplexPoint)> {
    let end = endpoint_estimate(model, s)?;
    let mut pts = vec![end.z];
    for &(t, _) in hair.samples.iter().filter(|(t, _)| *t > end.t) {
        pts.push(trace_point(model, s, t)?.z);
    }
    Ok((end.t, pts, end.z))
}

fn probe(model: &LogModel, hair: &BrushHair, refine: &Refinement) -> Result<HairProbe> {
    let y = &hair.address;
    let own: Vec<ComplexPoint> = hair.samples.iter().map(|(_, z)| *z).collect();
    let mut p = HairProbe {
        straddle: Vec::new(),
        t_diff: Vec::new(),
        ordinate_diff: Vec::new(),
        endpoint_dist: Vec::new(),
        hausdorff: Vec::new(),
    };
    for n in 1..=refine.depth {
        let (beta, gamma) = refine.neighbours(y, n)?;
        if lex_compare_ext(&beta, y)? != Ordering::Less || lex_compare_ext(y, &gamma)? != Ordering::Less {
            p.straddle
                .push(Witness { hair: y.clone(), detail: format!("level {n}: {beta} and {gamma} do not straddle") });
        }
        let mut t_diff: f64 = 0.0;
        let mut ord: f64 = 0.0;
        let mut dist: f64 = 0.0;
        let mut haus: f64 = 0.0;
        for nb in [&beta, &gamma] {
            let (t, pts, z) = arc(model, nb, hair)?;
            t_diff = t_diff.max((t - hair.endpoint_t).abs());
            ord = ord.max((embed_ordinate(&AddressPoint::Ext(nb.clone()))? - hair.ordinate).abs());
            dist = dist.max((z - hair.endpoint_z).norm());
            haus = haus.max(hausdorff(&pts, &own));
        }
        p.t_diff.push(t_diff);
        p.ordinate_diff.push(ord);
        p.endpoint_dist.push(dist);
        p.hausdorff.push(haus);
    }
    Ok(p)
}

/// Nonincreasing from level `MONOTONE_FROM` on, up to the slack.
fn settles(seq: &[f64]) -> Option<usize> {
    let from = MONOTONE_FROM.saturating_sub(1);
    (from + 1..seq.len()).find(|&i| seq[i] > seq[i - 1] + MONOTONE_SLACK).map(|i| i + 1)
}

fn strictly_decreasing(seq: &[f64]) -> Option<usize> {
    (1..seq.len()).find(|&i| seq[i] >= seq[i - 1]).map(|i| i + 1)
}

fn finish(name: &'static str, witnesses: Vec<Witness>, worst: f64) -> AxiomCheck {
    let status = if witnesses.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail };
    AxiomCheck { name, status, witnesses, worst }
}

fn fmt_seq(seq: &[f64]) -> String {
    seq.iter().map(|v| crate::fmt::sig(*v, 3)).collect::<Vec<_>>().join(", ")
}

/// Checks a finite brush against the straight-brush and comb conditions.
///
/// * `order`: ordinates strictly increase and agree with the address order.
/// * `samples`: every sample potential is at least the endpoint potential.
/// * `straddle`: each refinement pair lies on both sides of its hair.
/// * `endpoint_accumulation`: refined endpoint potentials approach the
///   hair's, settle monotonically and end within `tol`.
/// * `ordinate_accumulation`: refined ordinates strictly approach the hair's
///   and end within `tol`.
/// * `hausdorff`: the arc distance to the refinements settles monotonically.
/// * `density`: every gap between neighbouring ordinates contains the
///   ordinate of another address.
/// * `closedness`: refined endpoints in the plane strictly approach the
///   hair's endpoint.
///
/// Checks that need a neighbouring hair report `InsufficientFamily` for a
/// single hair.
pub fn check_brush_axioms(
    model: &LogModel,
    brush: &BrushEmbedding,
    refine: &Refinement,
    tol: f64,
) -> Result<CombCheckReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if refine.depth == 0 {
        return Err(Error::InvalidArgument("refinement depth must be at least 1".into()));
    }
    let hairs = &brush.hairs;
    if hairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut checks = Vec::new();

    let mut w = Vec::new();
    for h in hairs {
        if !(h.ordinate > 0.0 && h.ordinate < 1.0) {
            w.push(Witness { hair: h.address.clone(), detail: format!("ordinate {} outside (0, 1)", h.ordinate) });
        }
    }
    for pair in hairs.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if !(a.ordinate < b.ordinate) || lex_compare_ext(&a.address, &b.address)? != Ordering::Less {
            w.push(Witness { hair: b.address.clone(), detail: format!("out of order after {}", a.address) });
        }
    }
    checks.push(finish("order", w, 0.0));

    let mut w = Vec::new();
    let mut worst: f64 = 0.0;
    for h in hairs {
        let first = h.samples.first().map_or(f64::INFINITY, |s| s.0);
        let below = h.endpoint_t - first;
        worst = worst.max(below);
        if below > SAMPLE_T_SLACK || h.samples.windows(2).any(|s| s[0].0 >= s[1].0) {
            w.push(Witness {
                hair: h.address.clone(),
                detail: format!("sample at t = {first} below endpoint t* = {}", h.endpoint_t),
            });
        }
    }
    checks.push(finish("samples", w, worst));

    let probes: Vec<Result<HairProbe>> = hairs.par_iter().map(|h| probe(model, h, refine)).collect();
    let probes = probes.into_iter().collect::<Result<Vec<_>>>()?;

    let straddle: Vec<Witness> = probes.iter().flat_map(|p| p.straddle.clone()).collect();
    checks.push(finish("straddle", straddle, 0.0));

    let sequence_check = |name: &'static str, pick: fn(&HairProbe) -> &Vec<f64>, strict: bool, bounded: bool| {
        let mut w = Vec::new();
        let mut worst: f64 = 0.0;
        for (h, p) in hairs.iter().zip(&probes) {
            let seq = pick(p);
            let last = *seq.last().unwrap_or(&0.0);
            worst = worst.max(last);
            let bad = if strict { strictly_decreasing(seq) } else { settles(seq) };
            if let Some(level) = bad {
                w.push(Witness {
                    hair: h.address.clone(),
                    detail: format!("increase at level {level}: [{}]", fmt_seq(seq)),
                });
            } else if bounded && !(last < tol) {
                w.push(Witness {
                    hair: h.address.clone(),
                    detail: format!("final difference {last} not below {tol}: [{}]", fmt_seq(seq)),
                });
            }
        }
        let mut c = finish(name, w, worst);
        if hairs.len() < 2 && c.status == CheckStatus::Pass {
            c.status = CheckStatus::InsufficientFamily;
        }
        c
    };
    checks.push(sequence_check("endpoint_accumulation", |p| &p.t_diff, false, true));
    checks.push(sequence_check("ordinate_accumulation", |p| &p.ordinate_diff, true, true));
    checks.push(sequence_check("hausdorff", |p| &p.hausdorff, false, false));
    checks.push(sequence_check("closedness", |p| &p.endpoint_dist, true, false));

    let mut w = Vec::new();
    let mut widest: f64 = 0.0;
    for pair in hairs.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        widest = widest.max(b.ordinate - a.ordinate);
        let mid = external_between(&AddressPoint::Ext(a.address.clone()), &AddressPoint::Ext(b.address.clone()))?;
        let phi = embed_ordinate(&AddressPoint::Ext(mid.clone()))?;
        if !(a.ordinate < phi && phi < b.ordinate) {
            w.push(Witness {
                hair: b.address.clone(),
                detail: format!("{mid} does not land between {} and {}", a.address, b.address),
            });
        }
    }
    let mut density = finish("density", w, widest);
    if hairs.len() < 2 {
        density.status = CheckStatus::InsufficientFamily;
    }
    checks.push(density);

    Ok(CombCheckReport { tol, depth: refine.depth, hairs: hairs.len(), checks })
}
