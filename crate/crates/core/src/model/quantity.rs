use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const PRECISION: u32 = 4;
pub const UNITS_PER_TOKEN: u64 = 10_000;

/// Fixed-point token amount in units of 0.0001.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Amount(pub u64);

impl Amount {
    pub const ZERO: Amount = Amount(0);

    pub fn from_tokens(tokens: u64) -> Self {
        Amount(tokens * UNITS_PER_TOKEN)
    }

    pub fn units(self) -> u64 {
        self.0
    }

    /// Lossy conversion for statistics; sums and balances stay in units.
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / UNITS_PER_TOKEN as f64
    }

    pub fn saturating_sub(self, rhs: Amount) -> Amount {
        Amount(self.0.saturating_sub(rhs.0))
    }
}

impl Add for Amount {
    type Output = Amount;
    fn add(self, rhs: Amount) -> Amount {
        Amount(self.0 + rhs.0)
    }
}

impl AddAssign for Amount {
    fn add_assign(&mut self, rhs: Amount) {
        self.0 += rhs.0;
    }
}

impl Sum for Amount {
    fn sum<I: Iterator<Item = Amount>>(iter: I) -> Amount {
        iter.fold(Amount::ZERO, Add::add)
    }
}

impl fmt::Display for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:04}", self.0 / UNITS_PER_TOKEN, self.0 % UNITS_PER_TOKEN)
    }
}

fn parse_amount(s: &str) -> Option<Amount> {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int.is_empty()
        || frac.len() > PRECISION as usize
        || !int.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let whole: u64 = int.parse().ok()?;
    let mut frac_units: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    for _ in frac.len()..PRECISION as usize {
        frac_units *= 10;
    }
    whole
        .checked_mul(UNITS_PER_TOKEN)?
        .checked_add(frac_units)
        .map(Amount)
}

/// A token quantity such as `1.0000 EOS`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Quantity {
    pub amount: Amount,
    pub symbol: String,
}

pub const EOS: &str = "EOS";

impl Quantity {
    pub fn new(amount: Amount, symbol: &str) -> Result<Self, Error> {
        if !valid_symbol(symbol) {
            return Err(Error::InvalidQuantity(format!("{amount} {symbol}")));
        }
        Ok(Quantity {
            amount,
            symbol: symbol.to_string(),
        })
    }

    pub fn eos(amount: Amount) -> Self {
        Quantity {
            amount,
            symbol: EOS.to_string(),
        }
    }

    pub fn is_eos(&self) -> bool {
        self.symbol == EOS
    }
}

fn valid_symbol(s: &str) -> bool {
    (1..=7).contains(&s.len()) && s.bytes().all(|b| b.is_ascii_uppercase())
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidQuantity(s.to_string());
        let (amount, symbol) = s.split_once(' ').ok_or_else(bad)?;
        let amount = parse_amount(amount).ok_or_else(bad)?;
        if !valid_symbol(symbol) {
            return Err(bad());
        }
        Ok(Quantity {
            amount,
            symbol: symbol.to_string(),
        })
    }
}

impl TryFrom<String> for Quantity {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Quantity> for String {
    fn from(q: Quantity) -> String {
        q.to_string()
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.amount, self.symbol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_eos_strings() {
        let q: Quantity = "1.0000 EOS".parse().unwrap();
        assert_eq!(q.amount, Amount(10_000));
        assert!(q.is_eos());
        assert_eq!(q.to_string(), "1.0000 EOS");

        let q: Quantity = "12.5 EOSS".parse().unwrap();
        assert_eq!(q.amount, Amount(125_000));
        assert!(!q.is_eos());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["1.00000 EOS", "-1.0000 EOS", "1.0000", "1.0000 eos", "1.0000 ABCDEFGH", "x EOS", ".5 EOS"] {
            assert!(bad.parse::<Quantity>().is_err(), "{bad}");
        }
    }

    #[test]
    fn amount_display_pads() {
        assert_eq!(Amount(5).to_string(), "0.0005");
        assert_eq!(Amount::from_tokens(400).to_string(), "400.0000");
    }
}
