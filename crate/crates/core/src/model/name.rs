use std::borrow::Borrow;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An EOSIO account name: 1 to 12 characters drawn from `a-z`, `1-5` and `.`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AccountName(String);

pub const MAX_NAME_LEN: usize = 12;

fn valid_char(c: u8) -> bool {
    matches!(c, b'a'..=b'z' | b'1'..=b'5' | b'.')
}

pub fn is_valid_name(s: &str) -> bool {
    !s.is_empty() && s.len() <= MAX_NAME_LEN && s.bytes().all(valid_char)
}

impl AccountName {
    pub fn new(s: impl Into<String>) -> Result<Self, Error> {
        let s = s.into();
        if is_valid_name(&s) {
            Ok(AccountName(s))
        } else {
            Err(Error::InvalidName(s))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for AccountName {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        AccountName::new(s)
    }
}

impl From<AccountName> for String {
    fn from(n: AccountName) -> String {
        n.0
    }
}

impl FromStr for AccountName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        AccountName::new(s)
    }
}

impl fmt::Display for AccountName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for AccountName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for AccountName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl PartialEq<str> for AccountName {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for AccountName {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

/// Shorthand for building names from literals known to be valid.
///
/// Panics on an invalid literal.
pub fn name(s: &str) -> AccountName {
    AccountName::new(s).unwrap_or_else(|_| panic!("invalid account name literal {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_eosio_alphabet() {
        for ok in ["eosio", "eosio.token", "a", "abcdefghijkl", "bot1.2345"] {
            assert!(AccountName::new(ok).is_ok(), "{ok}");
        }
    }

    #[test]
    fn rejects_bad_names() {
        for bad in ["", "Alice", "abcdefghijklm", "bot6", "a-b", "a b"] {
            assert!(AccountName::new(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn serde_validates() {
        let n: AccountName = serde_json::from_str("\"alice\"").unwrap();
        assert_eq!(n, "alice");
        assert!(serde_json::from_str::<AccountName>("\"Alice\"").is_err());
    }
}
