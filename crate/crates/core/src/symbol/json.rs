//! JSON encoding of symbols.
//!
//! Laurent polynomials use `{"coeffs": {"k": [re, im], ...}}`; anything with poles uses
//! `{"gain": [re, im], "zpow": k, "zeros": [...], "poles": [...]}` where each root is
//! `{"z": [re, im], "m": mult, "loc": "in|on|out"}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::factor::roots::{Location, Root};
use crate::symbol::{LaurentPoly, RationalSymbol};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootJson {
    pub z: [f64; 2],
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loc: Option<Location>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolJson {
    Coeffs {
        coeffs: BTreeMap<String, [f64; 2]>,
    },
    Zpk {
        gain: [f64; 2],
        #[serde(default)]
        zpow: i64,
        #[serde(default)]
        zeros: Vec<RootJson>,
        #[serde(default)]
        poles: Vec<RootJson>,
    },
}

fn cplx(v: [f64; 2]) -> Result<Complex64> {
    if v[0].is_finite() && v[1].is_finite() {
        Ok(Complex64::new(v[0], v[1]))
    } else {
        Err(Error::InvalidSymbol("non-finite coefficient".into()))
    }
}

fn root(r: &RootJson) -> Result<Root> {
    let z = cplx(r.z)?;
    if r.m == 0 {
        return Err(Error::InvalidSymbol("root multiplicity must be positive".into()));
    }
    Ok(match r.loc {
        Some(loc) => Root::tagged(z, r.m, loc),
        None => Root::new(z, r.m),
    })
}

impl SymbolJson {
    pub fn to_symbol(&self) -> Result<RationalSymbol> {
        match self {
            SymbolJson::Coeffs { coeffs } => {
                let mut terms = Vec::with_capacity(coeffs.len());
                for (k, v) in coeffs {
                    let k: i64 = k.trim().parse().map_err(|_| Error::InvalidSymbol(format!("bad exponent key {k:?}")))?;
                    terms.push((k, cplx(*v)?));
                }
                Ok(RationalSymbol::from_laurent(LaurentPoly::from_terms(terms)))
            }
            SymbolJson::Zpk { gain, zpow, zeros, poles } => {
                let zeros = zeros.iter().map(root).collect::<Result<Vec<_>>>()?;
                let poles = poles.iter().map(root).collect::<Result<Vec<_>>>()?;
                Ok(RationalSymbol::from_zpk(cplx(*gain)?, *zpow, &zeros, &poles))
            }
        }
    }

    pub fn from_symbol(f: &RationalSymbol) -> Result<Self> {
        if f.is_laurent() {
            return Ok(SymbolJson::Coeffs {
                coeffs: f.num().iter().map(|(k, c)| (k.to_string(), [c.re, c.im])).collect(),
            });
        }
        let zpk = f.zpk()?;
        let enc = |r: &Root| RootJson { z: [r.value.re, r.value.im], m: r.mult, loc: Some(r.loc) };
        Ok(SymbolJson::Zpk {
            gain: [zpk.gain.re, zpk.gain.im],
            zpow: zpk.zpow,
            zeros: zpk.zeros.iter().map(enc).collect(),
            poles: zpk.poles.iter().map(enc).collect(),
        })
    }
}

/// Parses a symbol from a JSON value.
pub fn symbol_from_value(v: &Value) -> Result<RationalSymbol> {
    let js: SymbolJson = serde_json::from_value(v.clone()).map_err(|e| Error::InvalidSymbol(e.to_string()))?;
    js.to_symbol()
}

/// Parses a symbol from JSON text.
pub fn parse_symbol(text: &str) -> Result<RationalSymbol> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidSymbol(e.to_string()))?;
    symbol_from_value(&v)
}

/// Encodes a symbol as a JSON value.
pub fn symbol_to_value(f: &RationalSymbol) -> Value {
    match SymbolJson::from_symbol(f) {
        Ok(js) => serde_json::to_value(js).expect("symbol JSON is serializable"),
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    }
}

impl Serialize for RationalSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolJson::from_symbol(self).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SymbolJson::deserialize(d)?.to_symbol().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::rational::probe_points;

    #[test]
    fn coeff_form_round_trip() {
        let f = parse_symbol(r#"{"coeffs":{"-1":[1,0],"0":[1,0]}}"#).unwrap();
        assert!(f.approx_eq(&RationalSymbol::from_laurent(LaurentPoly::from_real(&[(-1, 1.0), (0, 1.0)])), 0.0));
        let back = symbol_to_value(&f);
        assert_eq!(back, serde_json::json!({"coeffs": {"-1": [1.0, 0.0], "0": [1.0, 0.0]}}));
    }

    #[test]
    fn zpk_form_round_trip() {
        let f = parse_symbol(r#"{"gain":[1,0],"zeros":[{"z":[2,0]}],"poles":[{"z":[0.5,0],"m":1,"loc":"in"}]}"#).unwrap();
        let g = parse_symbol(&symbol_to_value(&f).to_string()).unwrap();
        for z in probe_points(16) {
            assert!((f.eval(z) - g.eval(z)).norm() <= 1e-13 * f.eval(z).norm());
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_symbol(r#"{"coeffs":{"x":[1,0]}}"#).is_err());
        assert!(parse_symbol(r#"{"foo":1}"#).is_err());
    }
}
