//! External addresses and their order completion.
//!
//! Infinite addresses are kept eventually periodic so that they have exact
//! canonical forms. Intermediate addresses end in a Dedekind cut of the
//! alphabet; together with the two endpoints `±∞` they fill the gaps of the
//! lexicographic order, and [`embed_ordinate`] realises the resulting arc
//! inside `[0, 1]`.

mod embed;
mod neighborhood;
mod parse;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Alphabet, TractId};

pub use embed::{embed_ordinate, symbol_offset, symbol_weight};
pub use neighborhood::{converges_to_address, neighborhood_contains, ConvergenceParams, End, NeighborhoodSpec, Query};
pub use parse::{parse_address, parse_point, parse_symbol};

/// A letter of the completed alphabet: a tract, or the cut sitting directly
/// above the tract `below`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedSymbol {
    Tract(TractId),
    Cut(TractId),
}

impl ExtendedSymbol {
    pub fn compare(&self, other: &ExtendedSymbol) -> Result<Ordering> {
        use ExtendedSymbol::*;
        match (self, other) {
            (Tract(a), Tract(b)) | (Cut(a), Cut(b)) => a.structural_cmp(b),
            (Cut(x), Tract(a)) => Ok(match a.structural_cmp(x)? {
                Ordering::Greater => Ordering::Less,
                _ => Ordering::Greater,
            }),
            (Tract(_), Cut(_)) => other.compare(self).map(Ordering::reverse),
        }
    }
}

/// An eventually periodic address `preperiod · period^∞` in canonical form:
/// the period is primitive and the preperiod is as short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExternalAddress {
    preperiod: Vec<TractId>,
    period: Vec<TractId>,
}

impl ExternalAddress {
    pub fn new(preperiod: Vec<TractId>, period: Vec<TractId>) -> Result<ExternalAddress> {
        if period.is_empty() {
            return Err(Error::Parse("period must be nonempty".into()));
        }
        let alphabet = period[0].alphabet();
        if preperiod.iter().chain(&period).any(|t| t.alphabet() != alphabet) {
            return Err(Error::ModelMismatch("address mixes symbols from different alphabets".into()));
        }
        let mut a = ExternalAddress { preperiod, period };
        a.canonicalize();
        Ok(a)
    }

    /// The purely periodic address `period^∞`.
    pub fn periodic(period: Vec<TractId>) -> Result<ExternalAddress> {
        ExternalAddress::new(Vec::new(), period)
    }

    /// `s^∞` for a single symbol.
    pub fn constant(symbol: TractId) -> ExternalAddress {
        ExternalAddress { preperiod: Vec::new(), period: vec![symbol] }
    }

    fn canonicalize(&mut self) {
        let p = self.period.len();
        if let Some(d) = (1..p).find(|d| p.is_multiple_of(*d) && (0..p).all(|i| self.period[i] == self.period[i % d])) {
            self.period.truncate(d);
        }
        while let (Some(last_pre), Some(last_per)) = (self.preperiod.last(), self.period.last()) {
            if last_pre != last_per {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[TractId] {
        &self.preperiod
    }

    pub fn period(&self) -> &[TractId] {
        &self.period
    }

    pub fn alphabet(&self) -> Alphabet {
        self.period[0].alphabet()
    }

    /// The `n`-th entry (0-based).
    pub fn symbol(&self, n: usize) -> &TractId {
        if n < self.preperiod.len() {
            &self.preperiod[n]
        } else {
            &self.period[(n - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `n` entries.
    pub fn prefix(&self, n: usize) -> Vec<TractId> {
        (0..n).map(|i| self.symbol(i).clone()).collect()
    }

    /// `σ^n(s)`.
    pub fn suffix(&self, n: usize) -> ExternalAddress {
        if n <= self.preperiod.len() {
            ExternalAddress { preperiod: self.preperiod[n..].to_vec(), period: self.period.clone() }
        } else {
            let mut period = self.period.clone();
            period.rotate_left((n - self.preperiod.len()) % self.period.len());
            ExternalAddress { preperiod: Vec::new(), period }
        }
    }

    /// Drops the first entry.
    pub fn shift(&self) -> ExternalAddress {
        self.suffix(1)
    }

    /// `symbols · self`.
    pub fn prepend(&self, symbols: &[TractId]) -> ExternalAddress {
        let mut preperiod = symbols.to_vec();
        preperiod.extend_from_slice(&self.preperiod);
        let mut a = ExternalAddress { preperiod, period: self.period.clone() };
        a.canonicalize();
        a
    }

    /// The address with entry `n` replaced by `symbol`.
    pub fn with_entry(&self, n: usize, symbol: TractId) -> ExternalAddress {
        let mut head = self.prefix(n);
        head.push(symbol);
        self.suffix(n + 1).prepend(&head)
    }

    /// Positions after which two addresses must agree forever if they agree
    /// up to there.
    fn comparison_horizon(&self, other: &ExternalAddress) -> usize {
        let (p, q) = (self.period.len(), other.period.len());
        self.preperiod.len().max(other.preperiod.len()) + lcm(p, q)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A finite tract word followed by a cut.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntermediateAddress {
    pub prefix: Vec<TractId>,
    /// The cut sits directly above this tract.
    pub cut: TractId,
}

impl IntermediateAddress {
    pub fn new(prefix: Vec<TractId>, cut: TractId) -> Result<IntermediateAddress> {
        let alphabet = cut.alphabet();
        if prefix.iter().any(|t| t.alphabet() != alphabet) {
            return Err(Error::ModelMismatch("address mixes symbols from different alphabets".into()));
        }
        Ok(IntermediateAddress { prefix, cut })
    }

    pub fn extended_symbol(&self, n: usize) -> Option<ExtendedSymbol> {
        match n.cmp(&self.prefix.len()) {
            Ordering::Less => Some(ExtendedSymbol::Tract(self.prefix[n].clone())),
            Ordering::Equal => Some(ExtendedSymbol::Cut(self.cut.clone())),
            Ordering::Greater => None,
        }
    }
}

/// A point of the compactified address line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AddressPoint {
    MinusInf,
    Ext(ExternalAddress),
    Inter(IntermediateAddress),
    PlusInf,
}

impl AddressPoint {
    fn extended_symbol(&self, n: usize) -> Option<ExtendedSymbol> {
        match self {
            AddressPoint::Ext(a) => Some(ExtendedSymbol::Tract(a.symbol(n).clone())),
            AddressPoint::Inter(a) => a.extended_symbol(n),
            _ => None,
        }
    }

    /// Drops the first `n` entries; only valid while those are tracts.
    fn drop_front(&self, n: usize) -> AddressPoint {
        match self {
            AddressPoint::Ext(a) => AddressPoint::Ext(a.suffix(n)),
            AddressPoint::Inter(a) => AddressPoint::Inter(IntermediateAddress {
                prefix: a.prefix[n.min(a.prefix.len())..].to_vec(),
                cut: a.cut.clone(),
            }),
            other => other.clone(),
        }
    }
}

impl From<ExternalAddress> for AddressPoint {
    fn from(a: ExternalAddress) -> Self {
        AddressPoint::Ext(a)
    }
}

impl From<IntermediateAddress> for AddressPoint {
    fn from(a: IntermediateAddress) -> Self {
        AddressPoint::Inter(a)
    }
}

/// Lexicographic order on the compactified address line.
pub fn lex_compare(a: &AddressPoint, b: &AddressPoint) -> Result<Ordering> {
    use AddressPoint::*;
    match (a, b) {
        (MinusInf, MinusInf) | (PlusInf, PlusInf) => return Ok(Ordering::Equal),
        (MinusInf, _) | (_, PlusInf) => return Ok(Ordering::Less),
        (_, MinusInf) | (PlusInf, _) => return Ok(Ordering::Greater),
        _ => {}
    }
    let horizon = match (a, b) {
        (Ext(x), Ext(y)) => x.comparison_horizon(y),
        _ => usize::MAX,
    };
    for n in 0..horizon {
        let (Some(x), Some(y)) = (a.extended_symbol(n), b.extended_symbol(n)) else {
            unreachable!("a cut ends the comparison before either side runs out")
        };
        match x.compare(&y)? {
            Ordering::Equal if matches!(x, ExtendedSymbol::Cut(_)) => return Ok(Ordering::Equal),
            Ordering::Equal => continue,
            ord => return Ok(ord),
        }
    }
    Ok(Ordering::Equal)
}

/// Convenience wrapper for two external addresses.
pub fn lex_compare_ext(a: &ExternalAddress, b: &ExternalAddress) -> Result<Ordering> {
    lex_compare(&AddressPoint::Ext(a.clone()), &AddressPoint::Ext(b.clone()))
}

fn first_difference(a: &ExternalAddress, b: &ExternalAddress) -> Option<usize> {
    (0..a.comparison_horizon(b)).find(|&n| a.symbol(n) != b.symbol(n))
}

fn unsupported(t: &TractId) -> Error {
    Error::UnsupportedAlphabet(format!("alphabet of {t} has no integer indexing"))
}

/// An intermediate address strictly between two distinct external
/// addresses: the shared prefix followed by the cut `⌊(x + y)/2⌋` between
/// the first differing symbols `x < y` (indexed in ℤ).
pub fn intermediate_between(a: &ExternalAddress, b: &ExternalAddress) -> Result<IntermediateAddress> {
    let (lo, hi) = match lex_compare_ext(a, b)? {
        Ordering::Equal => return Err(Error::EqualInputs),
        Ordering::Less => (a, b),
        Ordering::Greater => (b, a),
    };
    let n = first_difference(lo, hi).expect("distinct addresses differ somewhere");
    let (x, y) = (lo.symbol(n), hi.symbol(n));
    let xi = x.to_index().ok_or_else(|| unsupported(x))?;
    let yi = y.to_index().ok_or_else(|| unsupported(y))?;
    let mid = (xi + yi).div_euclid(2);
    let cut = TractId::from_index(&x.alphabet(), mid).ok_or_else(|| unsupported(x))?;
    IntermediateAddress::new(lo.prefix(n), cut)
}

fn successor(t: &TractId) -> Result<TractId> {
    t.successor().ok_or_else(|| unsupported(t))
}

fn predecessor(t: &TractId) -> Result<TractId> {
    t.predecessor().ok_or_else(|| unsupported(t))
}

/// Some external address strictly above `p`.
fn ext_above(p: &AddressPoint, alphabet_hint: &TractId) -> Result<ExternalAddress> {
    match p {
        AddressPoint::MinusInf => Ok(ExternalAddress::constant(alphabet_hint.clone())),
        AddressPoint::Ext(a) => Ok(ExternalAddress::constant(successor(a.symbol(0))?)),
        AddressPoint::Inter(a) => match a.prefix.first() {
            Some(t) => Ok(ExternalAddress::constant(successor(t)?)),
            None => Ok(ExternalAddress::constant(successor(&a.cut)?)),
        },
        AddressPoint::PlusInf => Err(Error::InvalidArgument("nothing lies above +inf".into())),
    }
}

/// Some external address strictly below `p`.
fn ext_below(p: &AddressPoint, alphabet_hint: &TractId) -> Result<ExternalAddress> {
    match p {
        AddressPoint::PlusInf => Ok(ExternalAddress::constant(alphabet_hint.clone())),
        AddressPoint::Ext(a) => Ok(ExternalAddress::constant(predecessor(a.symbol(0))?)),
        AddressPoint::Inter(a) => match a.prefix.first() {
            Some(t) => Ok(ExternalAddress::constant(predecessor(t)?)),
            None => Ok(ExternalAddress::constant(a.cut.clone())),
        },
        AddressPoint::MinusInf => Err(Error::InvalidArgument("nothing lies below -inf".into())),
    }
}

fn any_symbol(p: &AddressPoint) -> Option<TractId> {
    match p.extended_symbol(0)? {
        ExtendedSymbol::Tract(t) | ExtendedSymbol::Cut(t) => Some(t),
    }
}

/// An external address strictly between two distinct points of the
/// compactified line.
pub fn external_between(a: &AddressPoint, b: &AddressPoint) -> Result<ExternalAddress> {
    let (lo, hi) = match lex_compare(a, b)? {
        Ordering::Equal => return Err(Error::EqualInputs),
        Ordering::Less => (a, b),
        Ordering::Greater => (b, a),
    };
    let hint = any_symbol(lo)
        .or_else(|| any_symbol(hi))
        .ok_or_else(|| Error::InvalidArgument("cannot infer the alphabet from ±inf alone".into()))?;
    if *lo == AddressPoint::MinusInf {
        return ext_below(hi, &hint);
    }
    if *hi == AddressPoint::PlusInf {
        return ext_above(lo, &hint);
    }
    let mut n = 0;
    let (x, y) = loop {
        let x = lo.extended_symbol(n).expect("comparison decided before the end");
        let y = hi.extended_symbol(n).expect("comparison decided before the end");
        if x != y {
            break (x, y);
        }
        n += 1;
    };
    let prefix: Vec<TractId> = (0..n)
        .map(|i| match lo.extended_symbol(i) {
            Some(ExtendedSymbol::Tract(t)) => t,
            _ => unreachable!("shared entries before the first difference are tracts"),
        })
        .collect();
    let lies_between = |t: &TractId| -> Result<bool> {
        let s = ExtendedSymbol::Tract(t.clone());
        Ok(x.compare(&s)? == Ordering::Less && s.compare(&y)? == Ordering::Less)
    };
    let candidate = match &x {
        ExtendedSymbol::Tract(t) | ExtendedSymbol::Cut(t) => successor(t)?,
    };
    let tail = if lies_between(&candidate)? {
        ExternalAddress::constant(candidate)
    } else {
        match (&x, &y) {
            // Adjacent letters: keep the lower tract and climb above lo's tail.
            (ExtendedSymbol::Tract(t), _) => ext_above(&lo.drop_front(n + 1), t)?.prepend(std::slice::from_ref(t)),
            // lo ends in a cut directly below hi's tract: descend below hi's tail.
            (ExtendedSymbol::Cut(_), ExtendedSymbol::Tract(t)) => {
                ext_below(&hi.drop_front(n + 1), t)?.prepend(std::slice::from_ref(t))
            }
            (ExtendedSymbol::Cut(_), ExtendedSymbol::Cut(_)) => unreachable!("a successor lies between two cuts"),
        }
    };
    Ok(tail.prepend(&prefix))
}

/// An address of `f` up to the `2πi` translation of its first entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircularAddress {
    pub representative: ExternalAddress,
    /// The translation subtracted from the first entry.
    pub k: i64,
}

/// Normalises the first entry to translation 0.
pub fn circular_normalize(a: &ExternalAddress) -> Result<CircularAddress> {
    let first = a.symbol(0);
    let k =
        first.translation().ok_or_else(|| Error::UnsupportedAlphabet(format!("{first} has no translation action")))?;
    let moved = first.translated(-k).expect("translation exists");
    Ok(CircularAddress { representative: a.with_entry(0, moved), k })
}

/// The address with its first entry translated by `2πi·m`.
pub fn translate_first(a: &ExternalAddress, m: i64) -> Result<ExternalAddress> {
    let first = a.symbol(0);
    let moved =
        first.translated(m).ok_or_else(|| Error::UnsupportedAlphabet(format!("{first} has no translation action")))?;
    Ok(a.with_entry(0, moved))
}

impl fmt::Display for ExternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[TractId]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        if self.preperiod.is_empty() {
            write!(f, "{}", join(&self.period))
        } else {
            write!(f, "{};{}", join(&self.preperiod), join(&self.period))
        }
    }
}

impl fmt::Display for IntermediateAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.prefix {
            write!(f, "{t} ")?;
        }
        write!(f, "cut({})", self.cut)
    }
}

impl fmt::Display for AddressPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AddressPoint::MinusInf => write!(f, "-inf"),
            AddressPoint::PlusInf => write!(f, "+inf"),
            AddressPoint::Ext(a) => write!(f, "{a}"),
            AddressPoint::Inter(a) => write!(f, "{a}"),
        }
    }
}

#[cfg(test)]
mod tests;
