//! Integer lists on the command line: `3`, `0,1`, `1..8` (inclusive),
//! `1..=8`, or any comma-separated mix of those.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IntList(pub Vec<u64>);

#[derive(Debug, PartialEq, Eq)]
pub struct ListError(pub String);

impl fmt::Display for ListError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ListError {}

fn number(s: &str) -> Result<u64, ListError> {
    s.trim().parse().map_err(|_| ListError(format!("not a non-negative integer: {s:?}")))
}

impl FromStr for IntList {
    type Err = ListError;

    fn from_str(s: &str) -> Result<IntList, ListError> {
        let mut out = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(ListError(format!("empty item in {s:?}")));
            }
            if let Some((a, b)) = part.split_once("..") {
                let b = b.strip_prefix('=').unwrap_or(b);
                let (a, b) = (number(a)?, number(b)?);
                if b < a {
                    return Err(ListError(format!("empty range {part:?}")));
                }
                out.extend(a..=b);
            } else {
                out.push(number(part)?);
            }
        }
        // a list, not a multiset: keep first occurrences in order
        let mut seen = std::collections::BTreeSet::new();
        out.retain(|x| seen.insert(*x));
        Ok(IntList(out))
    }
}

/// Config files may give a list either as a JSON array or in flag syntax.
impl<'de> Deserialize<'de> for IntList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<IntList, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(u64),
            Many(Vec<u64>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::One(x) => Ok(IntList(vec![x])),
            Raw::Many(v) if v.is_empty() => Err(serde::de::Error::custom("empty list")),
            Raw::Many(v) => Ok(IntList(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl IntList {
    pub fn to_u32(&self) -> Result<Vec<u32>, ListError> {
        self.0
            .iter()
            .map(|&x| u32::try_from(x).map_err(|_| ListError(format!("{x} is too large"))))
            .collect()
    }
}
