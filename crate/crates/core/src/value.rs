//! Exact values. Utilities are rationals; nothing in the crate touches floats.

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Value = Ratio<i64>;

pub fn int(v: i64) -> Value {
    Value::from_integer(v)
}

/// Wire form of a value: a JSON integer, or a string such as `"3/2"` or `"-4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawValue {
    Int(i64),
    Text(String),
}

impl RawValue {
    pub fn parse(&self) -> Result<Value> {
        match self {
            RawValue::Int(v) => Ok(int(*v)),
            RawValue::Text(s) => parse_value(s),
        }
    }
}

impl From<Value> for RawValue {
    fn from(v: Value) -> Self {
        if v.is_integer() {
            RawValue::Int(*v.numer())
        } else {
            RawValue::Text(format!("{}/{}", v.numer(), v.denom()))
        }
    }
}

pub fn parse_value(s: &str) -> Result<Value> {
    let bad = || Error::InvalidInstance(format!("not an exact value: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Value::new(n, d))
        }
        None => s.parse::<i64>().map(int).map_err(|_| bad()),
    }
}

pub fn to_json(v: Value) -> serde_json::Value {
    serde_json::to_value(RawValue::from(v)).expect("raw values always serialize")
}

pub fn display(v: Value) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Values scaled by a common denominator so that hot loops compare plain integers.
#[derive(Clone, Debug)]
pub(crate) struct Scale {
    pub denom: i64,
}

impl Scale {
    pub fn for_values<'a>(values: impl IntoIterator<Item = &'a Value>) -> Result<Self> {
        let mut denom: i64 = 1;
        for v in values {
            denom = num_integer::lcm(denom, *v.denom());
            if denom.abs() > (1 << 40) {
                return Err(Error::Budget("value denominators too large to scale".into()));
            }
        }
        Ok(Scale { denom })
    }

    pub fn apply(&self, v: Value) -> Result<i64> {
        let scaled = v * Value::from_integer(self.denom);
        debug_assert!(scaled.is_integer());
        Ok(*scaled.numer())
    }

    pub fn unapply(&self, v: i64) -> Value {
        Value::new(v, self.denom)
    }
}

pub(crate) fn is_negative(v: &Value) -> bool {
    v.is_negative()
}
