//! JSON files for groups, automorphisms and spectrum reports.
//!
//! Group file: `{"n": 3, "m": 1, "commutators": [{"i": 1, "j": 2, "z": [1]}]}`
//! with 1-based generator indices and `i < j`. Automorphism file:
//! `{"A": [[..]], "B": [[..]], "D": [[..]]}` with matrices as lists of rows;
//! `D` may be omitted and is then solved for. Integers outside the 53-bit
//! safe range are written as decimal strings; both forms are accepted on
//! input. Malformed input gives [`Error::Format`] naming the offending field.

use std::fmt;

use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::TwoStepGroup;
use crate::morphism::{check_dims, solve_induced_center_map, EndoData};
use crate::reidemeister::SpectrumSample;
use crate::{Int, IntMatrix};

const SAFE_MAX: i64 = (1 << 53) - 1;

/// An integer that serializes as a JSON number when it is within the
/// 53-bit safe range and as a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub Int);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) if x.abs() <= SAFE_MAX => s.serialize_i64(x),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct JsonIntVisitor;

impl<'de> Visitor<'de> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(Int::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(Int::from(v)))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<JsonInt, E> {
        Err(E::custom(format!("{v} is not an exact integer; write large integers as strings")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
        v.trim().parse::<Int>().map(JsonInt).map_err(|_| E::custom(format!("{v:?} is not a decimal integer")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(JsonIntVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutatorEntry {
    pub i: usize,
    pub j: usize,
    pub z: Vec<JsonInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub n: usize,
    pub m: usize,
    pub commutators: Vec<CommutatorEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<JsonInt>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<JsonInt>>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<JsonInt>>>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "(root)".to_string() } else { path };
        let inner = e.into_inner();
        let msg = inner.to_string();
        // strip serde_json's trailing position, the path already locates the error
        let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        Error::format(field, msg)
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn matrix_to_rows(m: &IntMatrix) -> Vec<Vec<JsonInt>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(JsonInt).collect()).collect()
}

fn rows_to_matrix(rows: &[Vec<JsonInt>], field: &str, rows_expected: usize, cols_expected: usize) -> Result<IntMatrix> {
    if rows.len() != rows_expected {
        return Err(Error::format(field, format!("expected {rows_expected} rows, found {}", rows.len())));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != cols_expected {
            return Err(Error::format(
                format!("{field}[{r}]"),
                format!("expected {cols_expected} entries, found {}", row.len()),
            ));
        }
    }
    Ok(IntMatrix::from_fn(rows_expected, cols_expected, |i, j| rows[i][j].0.clone()))
}

impl GroupFile {
    pub fn from_group(g: &TwoStepGroup) -> Self {
        let commutators = g
            .declared()
            .map(|(i, j, z)| CommutatorEntry { i: i + 1, j: j + 1, z: z.iter().cloned().map(JsonInt).collect() })
            .collect();
        GroupFile { n: g.n(), m: g.m(), commutators }
    }

    pub fn to_group(&self) -> Result<TwoStepGroup> {
        let mut seen = std::collections::BTreeSet::new();
        let mut comms = Vec::with_capacity(self.commutators.len());
        for (k, c) in self.commutators.iter().enumerate() {
            let at = |f: &str| format!("commutators[{k}].{f}");
            if c.i == 0 || c.i > self.n {
                return Err(Error::format(at("i"), format!("generator index {} outside 1..={}", c.i, self.n)));
            }
            if c.j == 0 || c.j > self.n {
                return Err(Error::format(at("j"), format!("generator index {} outside 1..={}", c.j, self.n)));
            }
            if c.i >= c.j {
                return Err(Error::format(at("j"), format!("need i < j, found i = {}, j = {}", c.i, c.j)));
            }
            if c.z.len() != self.m {
                return Err(Error::format(at("z"), format!("expected {} entries, found {}", self.m, c.z.len())));
            }
            if !seen.insert((c.i, c.j)) {
                return Err(Error::format(at("j"), format!("pair ({}, {}) declared twice", c.i, c.j)));
            }
            comms.push((c.i - 1, c.j - 1, c.z.iter().map(|x| x.0.clone()).collect()));
        }
        TwoStepGroup::new(self.n, self.m, comms)
    }
}

impl AutomorphismFile {
    pub fn from_endo(e: &EndoData) -> Self {
        AutomorphismFile { a: matrix_to_rows(&e.a), b: matrix_to_rows(&e.b), d: Some(matrix_to_rows(&e.d)) }
    }

    /// Builds the endomorphism data for `g`, solving for `D` when absent.
    /// No endomorphism check is made here.
    pub fn to_endo(&self, g: &TwoStepGroup) -> Result<EndoData> {
        let (n, m) = (g.n(), g.m());
        let a = rows_to_matrix(&self.a, "A", n, n)?;
        let b = rows_to_matrix(&self.b, "B", m, n)?;
        let d = match &self.d {
            Some(d) => rows_to_matrix(d, "D", m, m)?,
            None => solve_induced_center_map(g, &a)?
                .ok_or_else(|| Error::format("D", "omitted, and no integral induced map on the center exists"))?,
        };
        let e = EndoData::new(a, b, d);
        check_dims(g, &e)?;
        Ok(e)
    }
}

pub fn parse_group(text: &str) -> Result<TwoStepGroup> {
    parse::<GroupFile>(text)?.to_group()
}

pub fn group_to_json(g: &TwoStepGroup) -> String {
    to_json(&GroupFile::from_group(g))
}

pub fn parse_automorphism(text: &str, g: &TwoStepGroup) -> Result<EndoData> {
    parse::<AutomorphismFile>(text)?.to_endo(g)
}

pub fn automorphism_to_json(e: &EndoData) -> String {
    to_json(&AutomorphismFile::from_endo(e))
}

/// Map entries serialized in the given order.
struct OrderedMap(Vec<(String, AutomorphismFile)>);

impl Serialize for OrderedMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct SpectrumFile {
    height: u32,
    candidates_scanned: u64,
    automorphisms_found: u64,
    truncated: bool,
    finite_values: Vec<JsonInt>,
    witnesses: OrderedMap,
}

/// Spectrum report. Witness keys are the decimal values, in the numeric
/// order of `finite_values`.
pub fn spectrum_to_json(s: &SpectrumSample) -> String {
    to_json(&SpectrumFile {
        height: s.height,
        candidates_scanned: s.candidates_scanned,
        automorphisms_found: s.automorphisms_found,
        truncated: s.truncated,
        finite_values: s.finite_values.iter().cloned().map(JsonInt).collect(),
        witnesses: OrderedMap(s.witnesses.iter().map(|(v, e)| (v.to_string(), AutomorphismFile::from_endo(e))).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{aut_even, make_gd, make_path7};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn group_round_trip_is_bit_exact() {
        let text = r#"{"n": 3, "m": 1, "commutators": [{"i": 2, "j": 3, "z": [5]}, {"i": 1, "j": 2, "z": [1]}]}"#;
        let g = parse_group(text).unwrap();
        assert_eq!(g.c(0, 1), ints(&[1]));
        assert_eq!(g.c(1, 2), ints(&[5]));
        let out = group_to_json(&g);
        assert!(out.find("\"i\": 2").unwrap() < out.find("\"i\": 1").unwrap());
        assert_eq!(group_to_json(&parse_group(&out).unwrap()), out);
        let p = make_path7();
        assert_eq!(parse_group(&group_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn big_integers_are_strings() {
        let big: Int = "123456789012345678901234567890".parse().unwrap();
        let g = TwoStepGroup::new(2, 1, vec![(0, 1, vec![big.clone()])]).unwrap();
        let out = group_to_json(&g);
        assert!(out.contains("\"123456789012345678901234567890\""));
        assert_eq!(parse_group(&out).unwrap().c(0, 1), vec![big]);
        let edge = JsonInt(Int::from(SAFE_MAX));
        assert_eq!(serde_json::to_string(&edge).unwrap(), SAFE_MAX.to_string());
        let over = JsonInt(Int::from(SAFE_MAX + 1));
        assert_eq!(serde_json::to_string(&over).unwrap(), format!("\"{}\"", SAFE_MAX + 1));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let cases = [
            (r#"{"n": 2, "m": 1}"#, "(root)"),
            (r#"{"n": 2, "m": 1, "commutators": [{"i": 1, "j": 2, "z": [1.5]}]}"#, "commutators[0].z[0]"),
            (r#"{"n": 2, "m": 1, "commutators": [{"i": 2, "j": 1, "z": [1]}]}"#, "commutators[0].j"),
            (r#"{"n": 2, "m": 1, "commutators": [{"i": 0, "j": 2, "z": [1]}]}"#, "commutators[0].i"),
            (r#"{"n": 2, "m": 1, "commutators": [{"i": 1, "j": 2, "z": [1, 2]}]}"#, "commutators[0].z"),
            (r#"{"n": 2, "m": 1, "commutators": [{"i": 1, "j": 2, "z": ["x"]}]}"#, "commutators[0].z[0]"),
            (r#"{"n": "two", "m": 1, "commutators": []}"#, "n"),
            (r#"{"n": 2, "m": 1, "commutators": [], "extra": 1}"#, "extra"),
        ];
        for (text, field) in cases {
            match parse_group(text) {
                Err(Error::Format { field: f, message }) => {
                    assert_eq!(f, field, "{text}: {message}");
                    assert!(!message.contains('\n'));
                }
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn automorphism_files() {
        let g = make_gd(&ints(&[1])).unwrap();
        let e = aut_even(&g, &ints(&[2])).unwrap();
        let text = automorphism_to_json(&e);
        assert_eq!(parse_automorphism(&text, &g).unwrap(), e);
        assert_eq!(automorphism_to_json(&parse_automorphism(&text, &g).unwrap()), text);

        let no_d = r#"{"A": [[0, 1, 0], [1, -2, 0], [0, 0, -1]], "B": [[0, 0, 0]]}"#;
        let heis = TwoStepGroup::from_i64(3, 1, &[(0, 1, &[1])]).unwrap();
        assert_eq!(parse_automorphism(no_d, &heis).unwrap().d, IntMatrix::from_rows(vec![ints(&[-1])]).unwrap());

        let no_solution = r#"{"A": [[2, 0, 0], [0, 1, 0], [0, 0, 1]], "B": [[0, 0, 0]]}"#;
        let g2 = TwoStepGroup::from_i64(3, 1, &[(0, 1, &[2])]).unwrap();
        assert!(parse_automorphism(no_solution, &g2).is_ok());
        let g3 = TwoStepGroup::from_i64(3, 1, &[(0, 1, &[1]), (0, 2, &[1])]).unwrap();
        let bad = r#"{"A": [[1, 0, 0], [0, 1, 0], [0, 0, 2]], "B": [[0, 0, 0]]}"#;
        assert!(matches!(parse_automorphism(bad, &g3), Err(Error::Format { field, .. }) if field == "D"));

        let short = r#"{"A": [[1, 0], [0, 1]], "B": [[0, 0, 0]]}"#;
        assert!(matches!(parse_automorphism(short, &heis), Err(Error::Format { field, .. }) if field == "A"));
        let ragged = r#"{"A": [[1, 0, 0], [0, 1], [0, 0, 1]], "B": [[0, 0, 0]]}"#;
        assert!(matches!(parse_automorphism(ragged, &heis), Err(Error::Format { field, .. }) if field == "A[1]"));
    }

    #[test]
    fn spectrum_report_shape() {
        let g = TwoStepGroup::from_i64(2, 1, &[(0, 1, &[1])]).unwrap();
        let s = crate::reidemeister::spectrum_search(&g, 1, None).unwrap();
        let text = spectrum_to_json(&s);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(text.find("\"height\"").unwrap() < text.find("\"candidates_scanned\"").unwrap());
        assert!(text.find("\"finite_values\"").unwrap() < text.find("\"witnesses\"").unwrap());
        assert_eq!(v["witnesses"].as_object().unwrap().len(), s.finite_values.len());
        assert_eq!(spectrum_to_json(&s), text);
    }

    proptest! {
        #[test]
        fn random_groups_round_trip(
            n in 2usize..=4,
            m in 1usize..=2,
            seed in proptest::collection::vec(-(1i64 << 60)..(1i64 << 60), 12),
        ) {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let comms: Vec<_> = pairs.iter().enumerate().rev()
                .map(|(k, &(i, j))| (i, j, (0..m).map(|z| Int::from(seed[(k * m + z) % seed.len()])).collect::<Vec<Int>>()))
                .collect();
            let g = TwoStepGroup::new(n, m, comms).unwrap();
            let text = group_to_json(&g);
            let back = parse_group(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(group_to_json(&back), text);
        }
    }
}
