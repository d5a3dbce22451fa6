//! JSON forms of tangles, series and lattices.
//!
//! Integers that fit in `i64` are written as JSON numbers, larger ones as
//! decimal strings; both are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hset::AffineLattice;
use crate::magnus::{MagnusSeries, Monomial};
use crate::milnor::{FramingCheck, TanglePresentation};
use crate::word::GroupWord;

/// On-disk tangle: `{"n": 2, "longitudes": [[[2, 1]], [[1, 1]]]}`, each
/// letter an `[index, sign]` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangleFile {
    pub n: usize,
    pub longitudes: Vec<Vec<[i64; 2]>>,
}

impl TangleFile {
    pub fn from_presentation(t: &TanglePresentation) -> Self {
        TangleFile { n: t.n(), longitudes: t.longitudes().iter().map(GroupWord::to_pairs).collect() }
    }

    pub fn to_presentation(&self, check: FramingCheck) -> Result<TanglePresentation> {
        let words = self
            .longitudes
            .iter()
            .map(|w| GroupWord::from_pairs(self.n, w))
            .collect::<Result<Vec<_>>>()?;
        TanglePresentation::with_check(self.n, words, check)
    }
}

pub fn parse_tangle(text: &str, check: FramingCheck) -> Result<TanglePresentation> {
    let file: TangleFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_presentation(check)
}

pub fn tangle_to_json(t: &TanglePresentation) -> String {
    serde_json::to_string(&TangleFile::from_presentation(t)).expect("plain data serializes")
}

pub fn int_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::from(v.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("{n} is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("{s:?} is not an integer"))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

/// `{"n": .., "degree": .., "terms": [[[i1, i2, ...], c], ...]}` in monomial order.
pub fn series_to_json(s: &MagnusSeries) -> Value {
    let terms: Vec<Value> = s.iter().map(|(m, c)| json!([m.to_vec(), int_to_json(c)])).collect();
    json!({ "n": s.n(), "degree": s.degree(), "terms": terms })
}

pub fn series_from_json(v: &Value) -> Result<MagnusSeries> {
    let field = |name: &str| v.get(name).ok_or_else(|| Error::Parse(format!("missing field {name:?}")));
    let as_usize = |x: &Value, what: &str| {
        x.as_u64().map(|u| u as usize).ok_or_else(|| Error::Parse(format!("{what} must be a nonnegative integer")))
    };
    let n = as_usize(field("n")?, "n")?;
    let degree = as_usize(field("degree")?, "degree")?;
    let terms = field("terms")?.as_array().ok_or_else(|| Error::Parse("terms must be a list".into()))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse(format!("bad term {t}")))?;
        let idx = pair[0]
            .as_array()
            .ok_or_else(|| Error::Parse(format!("bad monomial {}", pair[0])))?
            .iter()
            .map(|i| as_usize(i, "variable index"))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        parsed.push((Monomial::new(&idx), int_from_json(&pair[1])?));
    }
    MagnusSeries::from_terms(n, degree, parsed)
}

pub fn lattice_to_json(l: &AffineLattice) -> Value {
    let rows: Vec<Value> = (0..l.gens.rows())
        .map(|r| Value::from(l.gens.row(r).iter().map(int_to_json).collect::<Vec<_>>()))
        .collect();
    json!({
        "n": l.n,
        "k": l.k,
        "j": l.j,
        "basis": l.basis.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "base": l.base.iter().map(int_to_json).collect::<Vec<_>>(),
        "pairs": l.pairs.iter().map(|(p, q)| [p, q]).collect::<Vec<_>>(),
        "gens": rows,
    })
}
