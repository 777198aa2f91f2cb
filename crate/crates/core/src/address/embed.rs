use super::AddressPoint;
use crate::error::{Error, Result};
use crate::model::TractId;

/// Width `2^{−|k|}/3` of the subinterval assigned to symbol `k`.
pub fn symbol_weight(k: i64) -> f64 {
    (-(k.unsigned_abs() as f64)).exp2() / 3.0
}

/// Left end `L_k = Σ_{j<k} w_j` of the subinterval of symbol `k`.
pub fn symbol_offset(k: i64) -> f64 {
    if k <= 0 {
        (k as f64).exp2() / 3.0
    } else {
        1.0 - (1.0 - k as f64).exp2() / 3.0
    }
}

/// `3 L_k`, exact in binary.
fn offset3(k: i64) -> f64 {
    if k <= 0 {
        (k as f64).exp2()
    } else {
        3.0 - (1.0 - k as f64).exp2()
    }
}

fn index(t: &TractId) -> Result<i64> {
    t.to_index().ok_or_else(|| Error::UnsupportedAlphabet(format!("{t} has no integer indexing")))
}

/// Applies `x ↦ L_k + w_k x` for the symbols of `word`, innermost last.
fn apply_word(word: &[TractId], x: f64) -> Result<f64> {
    word.iter().rev().try_fold(x, |acc, t| {
        let k = index(t)?;
        Ok(symbol_offset(k) + symbol_weight(k) * acc)
    })
}

/// The order embedding `Φ` of the compactified address line into `[0, 1]`.
///
/// An infinite address is the intersection of its nested intervals; for a
/// periodic tail this is the fixed point of the period's affine map. A cut
/// maps to the common endpoint of its two neighbouring subintervals.
pub fn embed_ordinate(p: &AddressPoint) -> Result<f64> {
    match p {
        AddressPoint::MinusInf => Ok(0.0),
        AddressPoint::PlusInf => Ok(1.0),
        AddressPoint::Ext(a) => {
            // The period word as an affine map x ↦ (n + d·x) / 3^p with the
            // factors of 3 kept out, so short periods divide exactly.
            let (mut n, mut d) = (0.0, 1.0);
            let mut three_p = 1.0;
            for t in a.period().iter().rev() {
                let k = index(t)?;
                let w3 = (-(k.unsigned_abs() as f64)).exp2();
                n = offset3(k) * three_p + w3 * n;
                d *= w3;
                three_p *= 3.0;
            }
            apply_word(a.preperiod(), n / (three_p - d))
        }
        AddressPoint::Inter(a) => {
            let k = index(&a.cut)?;
            apply_word(&a.prefix, symbol_offset(k) + symbol_weight(k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::parse_point;

    #[test]
    fn weights_partition_the_unit_interval() {
        let total: f64 = (-60..=60).map(symbol_weight).sum();
        assert!((total - 1.0).abs() < 1e-15);
        for k in -20..20 {
            assert!((symbol_offset(k) + symbol_weight(k) - symbol_offset(k + 1)).abs() < 1e-15);
        }
        assert!((symbol_offset(0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((symbol_offset(1) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn examples() {
        let phi = |s: &str| embed_ordinate(&parse_point(s).unwrap()).unwrap();
        assert_eq!(phi("0"), 0.5);
        assert!((phi("cut(0)") - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(phi("-inf"), 0.0);
        assert_eq!(phi("+inf"), 1.0);
        // 1̄ solves x = L_1 + w_1 x.
        assert!((phi("1") - (2.0 / 3.0) / (1.0 - 1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn sine_symbols_use_the_index_bijection() {
        let phi = |s: &str| embed_ordinate(&parse_point(s).unwrap()).unwrap();
        assert!((phi("0.L") - 0.5).abs() < 1e-15);
        assert!(phi("0.L") < phi("0.U"));
        assert!(phi("-1.U") < phi("0.L"));
    }

    #[test]
    fn composite_is_unsupported() {
        let t = TractId::Composite(vec![TractId::Exp(0), TractId::Exp(0)]);
        let a = crate::address::ExternalAddress::constant(t);
        assert!(matches!(embed_ordinate(&AddressPoint::Ext(a)), Err(Error::UnsupportedAlphabet(_))));
    }
}
