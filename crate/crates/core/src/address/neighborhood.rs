use std::cmp::Ordering;

use super::{AddressPoint, ExtendedSymbol, ExternalAddress, IntermediateAddress};
use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel, TractId};

/// Spacing of the polylines that stand in for curves in the plane.
const POLYLINE_STEP: f64 = 0.1;
const MAX_POLYLINE_VERTICES: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Minus,
    Plus,
}

/// One of the three kinds of basic neighbourhoods of a point of the
/// compactified address line.
#[derive(Clone, Debug, PartialEq)]
pub enum NeighborhoodSpec {
    /// `T_0 … T_n` and a half-plane `Re > r`.
    Type1 { prefix: Vec<TractId>, r: f64 },
    /// An intermediate address `T_0 … T_{n−1} cut`, the flanking pairs
    /// `(T_n^−, T_{n+1}^−)` and `(T_n^+, T_{n+1}^+)`, and `r`.
    Type2 { address: IntermediateAddress, lower: (TractId, TractId), upper: (TractId, TractId), r: f64 },
    /// `±∞`, a tract `T`, and a polyline arc from `∂T` to `∂H`.
    Type3 { end: End, tract: TractId, arc: Vec<ComplexPoint> },
}

/// A point to test: either in the plane or on the address line.
#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    Plane(ComplexPoint),
    Address(AddressPoint),
}

fn check_radius(model: &LogModel, r: f64) -> Result<()> {
    if !(r.is_finite() && r >= model.h_threshold()) {
        return Err(Error::BadSpec(format!("R = {r} is below the half-plane threshold {}", model.h_threshold())));
    }
    Ok(())
}

fn check_owned<'a>(model: &LogModel, ids: impl IntoIterator<Item = &'a TractId>) -> Result<()> {
    for id in ids {
        if !model.owns(id) {
            return Err(Error::ModelMismatch(format!("tract {id} does not belong to this model")));
        }
    }
    Ok(())
}

/// Whether the first `n` entries of the orbit of `z` follow `word`; returns
/// `F^n(z)` if so. Overflow counts as leaving.
fn follow(model: &LogModel, z: ComplexPoint, word: &[TractId]) -> Result<Option<ComplexPoint>> {
    let mut point = z;
    for t in word {
        match model.classify(point) {
            Ok(Some(ref id)) if id == t => {}
            Ok(_) | Err(Error::Overflow(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
        point = match model.eval(point) {
            Ok(p) => p,
            Err(Error::Overflow(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
    }
    Ok(Some(point))
}

/// Order of the cylinder of `word` relative to `t`; `Equal` if `t` begins
/// with `word`.
fn compare_word(word: &[TractId], t: &AddressPoint) -> Result<Ordering> {
    match t {
        AddressPoint::MinusInf => return Ok(Ordering::Greater),
        AddressPoint::PlusInf => return Ok(Ordering::Less),
        _ => {}
    }
    for (i, w) in word.iter().enumerate() {
        let s = t.extended_symbol(i).expect("a cut ends the comparison");
        match ExtendedSymbol::Tract(w.clone()).compare(&s)? {
            Ordering::Equal => continue,
            ord => return Ok(ord),
        }
    }
    Ok(Ordering::Equal)
}

/// First abscissa at which `tract` has a boundary point, found by stepping
/// right from the sampled minimum and bisecting.
fn boundary_start(model: &LogModel, tract: &TractId) -> Result<Option<f64>> {
    let mut lo = model.tract_min_re();
    if !lo.is_finite() {
        lo = model.h_threshold();
    }
    if model.boundary_point(tract, true, lo)?.is_some() {
        return Ok(Some(lo));
    }
    let mut hi = lo;
    let mut step = 1e-3;
    loop {
        hi += step;
        if hi > lo + 50.0 {
            return Ok(None);
        }
        if model.boundary_point(tract, true, hi)?.is_some() {
            break;
        }
        lo = hi;
        step *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if model.boundary_point(tract, true, mid)?.is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Imaginary parts where the pullback under `F_{outer}^{-1}` of one edge of
/// `inner` crosses the vertical line `Re = x`.
fn pulled_back_crossings(model: &LogModel, outer: &TractId, inner: &TractId, upper: bool, x: f64) -> Result<Vec<f64>> {
    let Some(start) = boundary_start(model, inner)? else {
        return Ok(Vec::new());
    };
    let vertex = |s: f64| -> Result<Option<ComplexPoint>> {
        match model.boundary_point(inner, upper, s) {
            Ok(Some(b)) => match model.inverse_branch(outer, b) {
                Ok(p) => Ok(Some(p)),
                Err(Error::OutOfH { .. }) | Err(Error::NoConvergence { .. }) | Err(Error::Overflow(_)) => Ok(None),
                Err(e) => Err(e),
            },
            Ok(None) | Err(Error::Overflow(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut crossings = Vec::new();
    let mut s = start;
    let Some(mut prev) = vertex(s)? else { return Ok(crossings) };
    let mut ds = POLYLINE_STEP;
    for _ in 0..MAX_POLYLINE_VERTICES {
        let mut next = None;
        while ds > 1e-12 {
            match vertex(s + ds)? {
                Some(p) if (p - prev).norm() <= POLYLINE_STEP => {
                    next = Some(p);
                    break;
                }
                Some(_) => ds *= 0.5,
                None => break,
            }
        }
        let Some(p) = next else { break };
        if (prev.re - x) * (p.re - x) <= 0.0 && prev.re != p.re {
            let u = (x - prev.re) / (p.re - prev.re);
            crossings.push(prev.im + u * (p.im - prev.im));
        }
        s += ds;
        prev = p;
        if prev.re > x + 1.0 {
            break;
        }
        ds *= 2.0;
    }
    Ok(crossings)
}

/// Whether the vertical ray from `z` (upwards for `Plus`) meets the arc.
fn ray_hits_arc(arc: &[ComplexPoint], z: ComplexPoint, end: End) -> bool {
    let beyond = |im: f64| match end {
        End::Plus => im >= z.im,
        End::Minus => im <= z.im,
    };
    if arc.len() == 1 {
        return arc[0].re == z.re && beyond(arc[0].im);
    }
    arc.windows(2).any(|seg| {
        let (a, b) = (seg[0], seg[1]);
        let (lo, hi) = (a.re.min(b.re), a.re.max(b.re));
        if z.re < lo || z.re > hi {
            return false;
        }
        if a.re == b.re {
            return beyond(a.im) || beyond(b.im);
        }
        let u = (z.re - a.re) / (b.re - a.re);
        beyond(a.im + u * (b.im - a.im))
    })
}

/// Membership in a basic neighbourhood.
///
/// Plane points are tested by following their orbit through the named
/// tracts and then checking the half-plane piece directly; the curves that
/// bound type 2 and type 3 pieces are replaced by polylines with vertex
/// spacing at most 0.1. Where the polyline does not reach the abscissa of
/// the point the answer is `false`.
pub fn neighborhood_contains(model: &LogModel, spec: &NeighborhoodSpec, q: &Query) -> Result<bool> {
    match spec {
        NeighborhoodSpec::Type1 { prefix, r } => {
            check_radius(model, *r)?;
            check_owned(model, prefix)?;
            let Some((last, head)) = prefix.split_last() else {
                return Err(Error::BadSpec("type 1 neighbourhoods need at least one tract".into()));
            };
            match q {
                Query::Address(t) => Ok(compare_word(prefix, t)? == Ordering::Equal),
                Query::Plane(z) => {
                    let Some(w) = follow(model, *z, head)? else { return Ok(false) };
                    Ok(w.re > *r && model.classify(w)?.as_ref() == Some(last))
                }
            }
        }
        NeighborhoodSpec::Type2 { address, lower, upper, r } => {
            check_radius(model, *r)?;
            check_owned(model, [&lower.0, &lower.1, &upper.0, &upper.1, &address.cut])?;
            check_owned(model, &address.prefix)?;
            let cut = ExtendedSymbol::Cut(address.cut.clone());
            let below = ExtendedSymbol::Tract(lower.0.clone()).compare(&cut)? == Ordering::Less;
            let above = ExtendedSymbol::Tract(upper.0.clone()).compare(&cut)? == Ordering::Greater;
            if !(below && above) {
                return Err(Error::BadSpec("flanking tracts must lie on either side of the cut".into()));
            }
            match q {
                Query::Address(t) => {
                    let word = |a: &TractId, b: &TractId| {
                        let mut w = address.prefix.clone();
                        w.extend([a.clone(), b.clone()]);
                        w
                    };
                    let lo = compare_word(&word(&lower.0, &lower.1), t)?;
                    let hi = compare_word(&word(&upper.0, &upper.1), t)?;
                    Ok(lo == Ordering::Less && hi == Ordering::Greater)
                }
                Query::Plane(z) => {
                    let Some(w) = follow(model, *z, &address.prefix)? else { return Ok(false) };
                    if !(w.re > *r) {
                        return Ok(false);
                    }
                    let floor = pulled_back_crossings(model, &lower.0, &lower.1, true, w.re)?;
                    let ceiling = pulled_back_crossings(model, &upper.0, &upper.1, false, w.re)?;
                    if floor.is_empty() || ceiling.is_empty() {
                        return Ok(false);
                    }
                    let y_lo = floor.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let y_hi = ceiling.iter().copied().fold(f64::INFINITY, f64::min);
                    Ok(y_lo < w.im && w.im < y_hi)
                }
            }
        }
        NeighborhoodSpec::Type3 { end, tract, arc } => {
            check_owned(model, [tract])?;
            if arc.is_empty() {
                return Err(Error::BadSpec("type 3 neighbourhoods need a nonempty arc".into()));
            }
            match q {
                Query::Address(t) => Ok(match (end, t) {
                    (End::Plus, AddressPoint::PlusInf) | (End::Minus, AddressPoint::MinusInf) => true,
                    (_, AddressPoint::PlusInf) | (_, AddressPoint::MinusInf) => false,
                    _ => {
                        let first = t.extended_symbol(0).expect("finite points have a first entry");
                        let ord = first.compare(&ExtendedSymbol::Tract(tract.clone()))?;
                        ord == if *end == End::Plus { Ordering::Greater } else { Ordering::Less }
                    }
                }),
                Query::Plane(z) => {
                    if !(z.re >= model.h_threshold()) {
                        return Ok(false);
                    }
                    let edge = model.boundary_point(tract, *end == End::Plus, z.re)?;
                    if let Some(b) = edge {
                        let clear = if *end == End::Plus { z.im > b.im } else { z.im < b.im };
                        if !clear {
                            return Ok(false);
                        }
                    }
                    Ok(!ray_hits_arc(arc, *z, *end))
                }
            }
        }
    }
}

/// Depth and radius range over which convergence is tested.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceParams {
    pub n_max: usize,
    pub r_max: f64,
}

impl Default for ConvergenceParams {
    fn default() -> Self {
        ConvergenceParams { n_max: 1, r_max: 10.0 }
    }
}

const RADIUS_GRID: usize = 5;

/// Whether `samples` converge to `s`: for every type 1 neighbourhood of `s`
/// with `n ≤ n_max` and `R` on an even grid of `[threshold, r_max]`, the
/// samples lying inside form a nonempty tail of the sequence.
pub fn converges_to_address(
    model: &LogModel,
    samples: &[ComplexPoint],
    s: &ExternalAddress,
    params: &ConvergenceParams,
) -> Result<bool> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let h = model.h_threshold();
    check_radius(model, params.r_max)?;
    for (index, &z) in samples.iter().enumerate() {
        let mut point = z;
        for step in 0..=params.n_max {
            match model.classify(point) {
                Ok(Some(_)) => {}
                Ok(None) => return Err(Error::NotInJulia { index, step }),
                Err(Error::Overflow(_)) => break,
                Err(e) => return Err(e),
            }
            point = match model.eval(point) {
                Ok(p) => p,
                Err(Error::Overflow(_)) => break,
                Err(e) => return Err(e),
            };
        }
    }
    for n in 0..=params.n_max {
        let prefix = s.prefix(n + 1);
        for i in 0..RADIUS_GRID {
            let r = h + (params.r_max - h) * i as f64 / (RADIUS_GRID - 1) as f64;
            let spec = NeighborhoodSpec::Type1 { prefix: prefix.clone(), r };
            let inside = samples
                .iter()
                .map(|z| neighborhood_contains(model, &spec, &Query::Plane(*z)))
                .collect::<Result<Vec<bool>>>()?;
            let first_inside = inside.iter().position(|&b| b);
            let tail_ok = first_inside.is_some_and(|p| inside[p..].iter().all(|&b| b));
            if !tail_ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::parse_point;
    use crate::model::TractId::Exp;

    fn model() -> LogModel {
        LogModel::exp_default(0.25).unwrap()
    }

    #[test]
    fn type1_examples() {
        let m = model();
        let spec = NeighborhoodSpec::Type1 { prefix: vec![Exp(0)], r: 3.0 };
        assert!(neighborhood_contains(&m, &spec, &Query::Plane(ComplexPoint::new(5.0, 0.0))).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &Query::Plane(ComplexPoint::new(2.0, 0.0))).unwrap());
        let addr = |s: &str| Query::Address(parse_point(s).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &addr("1;0")).unwrap());
        assert!(neighborhood_contains(&m, &spec, &addr("0 5;1")).unwrap());
        assert!(neighborhood_contains(&m, &spec, &addr("0 cut(3)")).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &addr("cut(0)")).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &addr("+inf")).unwrap());
    }

    #[test]
    fn bad_radius() {
        let spec = NeighborhoodSpec::Type1 { prefix: vec![Exp(0)], r: 0.1 };
        let r = neighborhood_contains(&model(), &spec, &Query::Plane(ComplexPoint::new(5.0, 0.0)));
        assert!(matches!(r, Err(Error::BadSpec(_))));
    }

    #[test]
    fn type3_examples() {
        let m = model();
        let arc = vec![ComplexPoint::new(1.2, 1.0), ComplexPoint::new(0.69, 1.0)];
        let spec = NeighborhoodSpec::Type3 { end: End::Plus, tract: Exp(2), arc };
        let addr = |s: &str| Query::Address(parse_point(s).unwrap());
        assert!(neighborhood_contains(&m, &spec, &addr("5;0")).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &addr("2;7")).unwrap());
        assert!(neighborhood_contains(&m, &spec, &addr("cut(2)")).unwrap());
        assert!(neighborhood_contains(&m, &spec, &addr("+inf")).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &addr("-inf")).unwrap());
        // Far above T_2 and clear of the arc.
        assert!(neighborhood_contains(&m, &spec, &Query::Plane(ComplexPoint::new(5.0, 40.0))).unwrap());
        // Inside T_2.
        assert!(!neighborhood_contains(&m, &spec, &Query::Plane(ComplexPoint::new(5.0, 4.0 * std::f64::consts::PI)))
            .unwrap());
        // Below T_2.
        assert!(!neighborhood_contains(&m, &spec, &Query::Plane(ComplexPoint::new(5.0, 0.0))).unwrap());
        let minus = NeighborhoodSpec::Type3 { end: End::Minus, tract: Exp(2), arc: vec![ComplexPoint::new(1.0, 20.0)] };
        assert!(neighborhood_contains(&m, &minus, &Query::Plane(ComplexPoint::new(5.0, 0.0))).unwrap());
        assert!(neighborhood_contains(&m, &minus, &addr("1 4;4")).unwrap());
    }

    #[test]
    fn type2_window_and_plane() {
        let m = model();
        let address = IntermediateAddress::new(vec![], Exp(0)).unwrap();
        let spec = NeighborhoodSpec::Type2 { address, lower: (Exp(0), Exp(0)), upper: (Exp(1), Exp(0)), r: 3.0 };
        let addr = |s: &str| Query::Address(parse_point(s).unwrap());
        assert!(neighborhood_contains(&m, &spec, &addr("cut(0)")).unwrap());
        assert!(neighborhood_contains(&m, &spec, &addr("0 1;0")).unwrap());
        assert!(neighborhood_contains(&m, &spec, &addr("1 -1;0")).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &addr("0 0;3")).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &addr("1 0;3")).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &addr("2;0")).unwrap());
        // Between T_0 and T_1 on the real-part-4 line, well clear of both pullbacks.
        assert!(neighborhood_contains(&m, &spec, &Query::Plane(ComplexPoint::new(4.0, std::f64::consts::PI))).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &Query::Plane(ComplexPoint::new(4.0, 0.0))).unwrap());
        assert!(!neighborhood_contains(&m, &spec, &Query::Plane(ComplexPoint::new(2.0, std::f64::consts::PI))).unwrap());
        let bad = NeighborhoodSpec::Type2 {
            address: IntermediateAddress::new(vec![], Exp(0)).unwrap(),
            lower: (Exp(1), Exp(0)),
            upper: (Exp(2), Exp(0)),
            r: 3.0,
        };
        assert!(matches!(neighborhood_contains(&m, &bad, &addr("0")), Err(Error::BadSpec(_))));
    }

    #[test]
    fn convergence_rejects_bounded_and_alternating_samples() {
        let m = model();
        let s = crate::address::parse_address("0").unwrap();
        let p = ConvergenceParams::default();
        let fixed = ComplexPoint::new(0.767002, 0.0);
        assert!(!converges_to_address(&m, &[fixed; 4], &s, &p).unwrap());
        let escaping: Vec<_> = [3.0, 5.0, 9.0, 17.0].iter().map(|&x| ComplexPoint::new(x, 0.0)).collect();
        assert!(converges_to_address(&m, &escaping, &s, &p).unwrap());
        let outside = ComplexPoint::new(-5.0, 0.0);
        assert!(matches!(converges_to_address(&m, &[outside], &s, &p), Err(Error::NotInJulia { index: 0, step: 0 })));
    }
}
