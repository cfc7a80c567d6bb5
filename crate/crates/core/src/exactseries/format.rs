use super::Series;
use crate::error::{Error, Result};
use crate::{Rat64, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;

/// Structured form `{denom, order_num, order_den, terms: [[exp_num, coeff_num, coeff_den], …]}`.
///
/// Integers that do not fit in 64 bits are written as decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub denom: i64,
    pub order_num: i64,
    pub order_den: i64,
    pub terms: Vec<(i64, Value, Value)>,
}

fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

fn value_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::parse(1, 1, format!("non-integer number {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::parse(1, 1, format!("bad integer string {s:?}"))),
        other => Err(Error::parse(1, 1, format!("expected integer, got {other}"))),
    }
}

impl Series<Rational> {
    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            denom: self.denom,
            order_num: *self.order.numer(),
            order_den: *self.order.denom(),
            terms: self
                .terms
                .iter()
                .map(|(&n, c)| (n, int_value(c.numer()), int_value(c.denom())))
                .collect(),
        }
    }

    pub fn from_record(rec: &SeriesRecord) -> Result<Self> {
        if rec.denom <= 0 || rec.order_den <= 0 {
            return Err(Error::parse(1, 1, "denominators must be positive"));
        }
        let mut map = BTreeMap::new();
        for (n, cn, cd) in &rec.terms {
            let d = value_int(cd)?;
            if d.is_zero() {
                return Err(Error::parse(1, 1, "zero coefficient denominator"));
            }
            map.insert(*n, Rational::new(value_int(cn)?, d));
        }
        Ok(Series::from_raw(
            rec.denom,
            map,
            Rat64::new(rec.order_num, rec.order_den),
        ))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_record()).expect("series record serialises")
    }
}

/// Parses the structured record produced by [`Series::to_json`].
pub fn parse_series_json(text: &str) -> Result<Series<Rational>> {
    let rec: SeriesRecord = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Series::from_record(&rec)
}

fn fmt_exp(e: Rat64) -> String {
    if e.is_integer() {
        format!("{}", e.numer())
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

impl fmt::Display for Series<Rational> {
    /// `c₀·q^{e₀} + c₁·q^{e₁} + … + O(q^{>O})`, unit coefficients elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let zero_exp = e.is_zero();
            if !mag.is_one() || zero_exp {
                write!(f, "{mag}")?;
                if !zero_exp {
                    write!(f, "·")?;
                }
            }
            if !zero_exp {
                if e.is_one() {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{{{}}}", fmt_exp(e))?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{{>{}}})", fmt_exp(self.order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretty_and_roundtrip() {
        let s = Series::from_terms(
            [
                (Rat64::new(-2, 3), Rational::from_integer((-1).into())),
                (Rat64::new(7, 3), Rational::new(1.into(), 2.into())),
                (Rat64::new(0, 1), Rational::from_integer(3.into())),
            ],
            Rat64::new(5, 1),
        );
        assert_eq!(s.to_string(), "-q^{-2/3} + 3 + 1/2·q^{7/3} + O(q^{>5})");
        let text = s.to_json().to_string();
        assert_eq!(parse_series_json(&text).unwrap(), s);
    }
}
