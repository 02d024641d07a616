//! Serde helpers writing rationals as decimal strings such as `"-3/7"`.

use serde::{Deserialize, Deserializer, Serializer};

use super::unipoly::parse_rat;
use super::Rat;

pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
    let text = String::deserialize(d)?;
    parse_rat(&text).map_err(serde::de::Error::custom)
}
