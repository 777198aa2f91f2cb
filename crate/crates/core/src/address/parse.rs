use std::str::FromStr;

use super::{AddressPoint, ExternalAddress, IntermediateAddress};
use crate::error::{Error, Result};
use crate::model::{Half, TractId};

/// Parses `k`, `k.U` or `k.L`. A Unicode minus sign is accepted.
pub fn parse_symbol(text: &str) -> Result<TractId> {
    let text = text.trim().replace('\u{2212}', "-");
    let int = |s: &str| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad symbol '{text}'")));
    if let Some(k) = text.strip_suffix(".U") {
        Ok(TractId::Sine { k: int(k)?, half: Half::Upper })
    } else if let Some(k) = text.strip_suffix(".L") {
        Ok(TractId::Sine { k: int(k)?, half: Half::Lower })
    } else {
        Ok(TractId::Exp(int(&text)?))
    }
}

fn parse_symbols(text: &str) -> Result<Vec<TractId>> {
    text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(parse_symbol).collect()
}

fn map_mismatch(e: Error) -> Error {
    match e {
        Error::ModelMismatch(m) => Error::Parse(m),
        other => other,
    }
}

/// Parses `pre;period` or a bare, purely periodic `period`.
pub fn parse_address(text: &str) -> Result<ExternalAddress> {
    if text.contains("cut(") {
        return Err(Error::Parse(format!("'{text}' is an intermediate address")));
    }
    let (pre, period) = match text.split_once(';') {
        Some((pre, period)) => (parse_symbols(pre)?, parse_symbols(period)?),
        None => (Vec::new(), parse_symbols(text)?),
    };
    if period.is_empty() {
        return Err(Error::Parse(format!("empty period in '{}'", text.trim())));
    }
    ExternalAddress::new(pre, period).map_err(map_mismatch)
}

/// Parses any point of the compactified line: `-inf`, `+inf`, an
/// intermediate address `symbols cut(k)`, or an external address.
pub fn parse_point(text: &str) -> Result<AddressPoint> {
    let trimmed = text.trim();
    match trimmed {
        "-inf" | "\u{2212}inf" => return Ok(AddressPoint::MinusInf),
        "+inf" | "inf" => return Ok(AddressPoint::PlusInf),
        _ => {}
    }
    let Some(at) = trimmed.find("cut(") else {
        return parse_address(trimmed).map(AddressPoint::Ext);
    };
    let rest = &trimmed[at + 4..];
    let inner = rest.strip_suffix(')').ok_or_else(|| Error::Parse(format!("unterminated cut in '{trimmed}'")))?;
    let prefix = parse_symbols(&trimmed[..at])?;
    let cut = parse_symbol(inner)?;
    IntermediateAddress::new(prefix, cut).map(AddressPoint::Inter).map_err(map_mismatch)
}

impl FromStr for ExternalAddress {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_address(s)
    }
}

impl FromStr for AddressPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_point(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols() {
        assert_eq!(parse_symbol("-3").unwrap(), TractId::Exp(-3));
        assert_eq!(parse_symbol("\u{2212}3").unwrap(), TractId::Exp(-3));
        assert_eq!(parse_symbol("2.U").unwrap(), TractId::Sine { k: 2, half: Half::Upper });
        assert_eq!(parse_symbol("-1.L").unwrap(), TractId::Sine { k: -1, half: Half::Lower });
        assert!(parse_symbol("x").is_err());
        assert!(parse_symbol("1.Q").is_err());
    }

    #[test]
    fn addresses_round_trip() {
        for text in ["0", "1;0", "1 2;3", "0 1", "-9;0", "2.U;0.L 1.U"] {
            let a = parse_address(text).unwrap();
            assert_eq!(parse_address(&a.to_string()).unwrap(), a);
        }
        assert_eq!(parse_address(";0 1").unwrap().to_string(), "0 1");
        assert_eq!(parse_address("0 0;0").unwrap().to_string(), "0");
    }

    #[test]
    fn rejects_empty_period_and_mixed_alphabets() {
        assert!(matches!(parse_address("0 ;"), Err(Error::Parse(_))));
        assert!(matches!(parse_address(""), Err(Error::Parse(_))));
        assert!(matches!(parse_address("0;1.U"), Err(Error::Parse(_))));
        assert!(matches!(parse_address("cut(0)"), Err(Error::Parse(_))));
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("-inf").unwrap(), AddressPoint::MinusInf);
        assert_eq!(parse_point("+inf").unwrap(), AddressPoint::PlusInf);
        let p = parse_point("0, cut(2)").unwrap();
        assert_eq!(p, AddressPoint::Inter(IntermediateAddress { prefix: vec![TractId::Exp(0)], cut: TractId::Exp(2) }));
        assert_eq!(p.to_string(), "0 cut(2)");
        assert_eq!(parse_point(" cut(-1)").unwrap().to_string(), "cut(-1)");
        assert!(parse_point("0 cut(2").is_err());
    }
}
