use super::pullback_chain;
use crate::address::ExternalAddress;
use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel};

/// `s_0 … s_{n−1} (s_n + sign) σ^{n+1}(s)`, where `+1` is the `2πi`
/// translate.
pub fn accumulation_address(s: &ExternalAddress, n: usize, sign: i64) -> Result<ExternalAddress> {
    let entry = s.symbol(n);
    let moved = entry
        .translated(sign)
        .ok_or_else(|| Error::UnsupportedAlphabet(format!("{entry} has no translation action")))?;
    Ok(s.with_entry(n, moved))
}

/// The pullbacks along `s` of `F^n(z0) ∓ 2πi`, returned as `(minus, plus)`.
pub fn accumulation_neighbors(
    model: &LogModel,
    z0: ComplexPoint,
    s: &ExternalAddress,
    n: usize,
) -> Result<(ComplexPoint, ComplexPoint)> {
    let mut w = z0;
    for _ in 0..n {
        w = model.eval(w)?;
    }
    let shift = ComplexPoint::new(0.0, 2.0 * std::f64::consts::PI);
    let minus = accumulation_address(s, n, -1)?;
    let plus = accumulation_address(s, n, 1)?;
    Ok((pullback_chain(model, &minus, n, w - shift)?, pullback_chain(model, &plus, n, w + shift)?))
}

/// One level of the accumulation construction, with the itineraries of
/// both points checked against their predicted addresses.
#[derive(Clone, Debug, PartialEq)]
pub struct AccumulationStep {
    pub n: usize,
    pub minus: ComplexPoint,
    pub plus: ComplexPoint,
    pub address_minus: ExternalAddress,
    pub address_plus: ExternalAddress,
    pub dist_minus: f64,
    pub dist_plus: f64,
    /// The first `n + 2` iterates of both points lie in the predicted tracts.
    pub itinerary_ok: bool,
}

fn follows(model: &LogModel, z: ComplexPoint, a: &ExternalAddress, steps: usize) -> Result<bool> {
    let mut point = z;
    for j in 0..steps {
        if model.classify(point)?.as_ref() != Some(a.symbol(j)) {
            return Ok(false);
        }
        point = model.eval(point)?;
    }
    Ok(true)
}

impl AccumulationStep {
    pub fn compute(model: &LogModel, z0: ComplexPoint, s: &ExternalAddress, n: usize) -> Result<AccumulationStep> {
        let (minus, plus) = accumulation_neighbors(model, z0, s, n)?;
        let address_minus = accumulation_address(s, n, -1)?;
        let address_plus = accumulation_address(s, n, 1)?;
        let itinerary_ok = follows(model, minus, &address_minus, n + 2)? && follows(model, plus, &address_plus, n + 2)?;
        Ok(AccumulationStep {
            n,
            minus,
            plus,
            dist_minus: (minus - z0).norm(),
            dist_plus: (plus - z0).norm(),
            address_minus,
            address_plus,
            itinerary_ok,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::{lex_compare_ext, parse_address};
    use std::cmp::Ordering;

    fn fixed_point() -> ComplexPoint {
        let mut q: f64 = 1.0;
        for _ in 0..60 {
            q -= (q.exp() - 4f64.ln() - q) / (q.exp() - 1.0);
        }
        ComplexPoint::new(q, 0.0)
    }

    #[test]
    fn first_level_matches_complex_log() {
        let m = LogModel::exp_default(0.25).unwrap();
        let s = parse_address("0").unwrap();
        let (minus, plus) = accumulation_neighbors(&m, fixed_point(), &s, 1).unwrap();
        let oracle = (fixed_point() + 4f64.ln() + ComplexPoint::new(0.0, 2.0 * std::f64::consts::PI)).ln();
        assert!((plus - oracle).norm() < 1e-14);
        assert!((plus - ComplexPoint::new(1.893401, 1.240633)).norm() < 1e-6);
        assert!((minus - plus.conj()).norm() < 1e-14);
        assert_eq!(accumulation_address(&s, 1, 1).unwrap(), parse_address("0 1;0").unwrap());
    }

    #[test]
    fn straddle_and_contraction() {
        let m = LogModel::exp_default(0.25).unwrap();
        let s = parse_address("0").unwrap();
        let steps: Vec<_> = (1..=8).map(|n| AccumulationStep::compute(&m, fixed_point(), &s, n).unwrap()).collect();
        for st in &steps {
            assert!(st.itinerary_ok);
            assert_eq!(lex_compare_ext(&st.address_minus, &s).unwrap(), Ordering::Less);
            assert_eq!(lex_compare_ext(&s, &st.address_plus).unwrap(), Ordering::Less);
        }
        for pair in steps.windows(2) {
            assert!(pair[1].dist_plus < pair[0].dist_plus && pair[1].dist_minus < pair[0].dist_minus);
            if pair[1].n >= 2 {
                assert!(pair[1].dist_plus / pair[0].dist_plus <= 0.9);
            }
        }
    }

    #[test]
    fn composite_has_no_translation() {
        let t = crate::model::TractId::Composite(vec![crate::model::TractId::Exp(0)]);
        let s = ExternalAddress::constant(t);
        assert!(matches!(accumulation_address(&s, 0, 1), Err(Error::UnsupportedAlphabet(_))));
    }
}
