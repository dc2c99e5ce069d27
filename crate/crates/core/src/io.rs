//! JSON file formats and atomic output.
//!
//! Rationals are `"p/q"` strings. Objects are emitted with fields in
//! declaration order and maps sorted by key, so equal values serialize to
//! identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::{self, DeserializeOwned};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::group::{CayleyError, CayleyTable};
use crate::groupoid::{
    Arrow, Component, FiniteGroupoid, GroupoidError, MalformedRaw, RawArrow, RawGroupoid,
};
use crate::rational::{self, Rational};
use crate::semigroup::{Bisection, MAlgElement};
use crate::symmetric::{PartialInjection, SymmetricError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: cannot write: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), IoError> {
    let err = |source| IoError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(contents.as_bytes()).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    pub group_table: Vec<Vec<usize>>,
    pub base_size: usize,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

/// `{"components":[{"group_table":[[...]], "base_size":k, "weight":"p/q"}]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidFile {
    pub components: Vec<ComponentFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidFileError {
    #[error("component {component}: {source}")]
    Group {
        component: usize,
        source: CayleyError,
    },
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

impl GroupoidFile {
    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        GroupoidFile {
            components: g
                .components()
                .iter()
                .map(|c| ComponentFile {
                    group_table: c.group.rows().to_vec(),
                    base_size: c.base_size,
                    weight: c.weight,
                })
                .collect(),
        }
    }

    pub fn to_groupoid(&self) -> Result<FiniteGroupoid, GroupoidFileError> {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                CayleyTable::new(c.group_table.clone())
                    .map(|grp| Component::new(grp, c.base_size, c.weight))
                    .map_err(|source| GroupoidFileError::Group {
                        component: i,
                        source,
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroupoid::new(components)?)
    }
}

/// `{"units":[...], "arrows":[[id,src,rng],...], "compose":[[a,b,c],...],
/// "masses":{unit:"p/q"}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFile {
    pub units: Vec<u64>,
    pub arrows: Vec<[u64; 3]>,
    pub compose: Vec<[u64; 3]>,
    #[serde(default, with = "mass_map")]
    pub masses: BTreeMap<u64, Rational>,
}

mod mass_map {
    use super::*;

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, Rational>, s: S) -> Result<S::Ok, S::Error> {
        let strs: BTreeMap<String, String> = m
            .iter()
            .map(|(k, v)| (k.to_string(), rational::format_rational(v)))
            .collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<u64, Rational>, D::Error> {
        let strs = BTreeMap::<String, String>::deserialize(d)?;
        strs.into_iter()
            .map(|(k, v)| {
                let k: u64 = k
                    .parse()
                    .map_err(|_| de::Error::custom(format!("unit key {k:?} is not an integer")))?;
                let v = rational::parse_rational(&v).map_err(de::Error::custom)?;
                Ok((k, v))
            })
            .collect()
    }
}

/// `{"unit":"p/q"}` weight overrides for `decompose`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightsFile(#[serde(with = "mass_map")] pub BTreeMap<u64, Rational>);

impl RawFile {
    pub fn to_raw(&self) -> Result<RawGroupoid, MalformedRaw> {
        let mut compositions = BTreeMap::new();
        for &[a, b, c] in &self.compose {
            if compositions.insert((a, b), c).is_some() {
                return Err(MalformedRaw::DuplicateComposition { left: a, right: b });
            }
        }
        Ok(RawGroupoid {
            units: self.units.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|&[id, source, range]| RawArrow { id, source, range })
                .collect(),
            compositions,
            masses: self.masses.clone(),
        })
    }

    pub fn from_raw(raw: &RawGroupoid) -> Self {
        RawFile {
            units: raw.units.clone(),
            arrows: raw
                .arrows
                .iter()
                .map(|a| [a.id, a.source, a.range])
                .collect(),
            compose: raw
                .compositions
                .iter()
                .map(|(&(a, b), &c)| [a, b, c])
                .collect(),
            masses: raw.masses.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BisectionRepr {
    arrows: Vec<[usize; 4]>,
}

/// `{"arrows":[[component,g,y_to,y_from],...]}`. Deserialization does not
/// validate; check against a groupoid before use.
impl Serialize for Bisection {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BisectionRepr {
            arrows: self
                .arrows()
                .iter()
                .map(|a| [a.component, a.g, a.y_to, a.y_from])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bisection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = BisectionRepr::deserialize(d)?;
        Ok(repr
            .arrows
            .into_iter()
            .map(|[c, g, t, f]| Arrow::new(c, g, t, f))
            .collect())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MAlgRepr {
    units: Vec<usize>,
}

/// `{"units":[...]}`
impl Serialize for MAlgElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MAlgRepr {
            units: self.units().iter().copied().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MAlgElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(MAlgElement::from_units(MAlgRepr::deserialize(d)?.units))
    }
}

/// `{"n":k, "map":{"src":dst,...}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialInjectionFile {
    pub n: usize,
    pub map: BTreeMap<String, usize>,
}

impl PartialInjectionFile {
    pub fn from_injection(a: &PartialInjection) -> Self {
        PartialInjectionFile {
            n: a.n(),
            map: a.pairs().map(|(x, y)| (x.to_string(), y)).collect(),
        }
    }

    pub fn to_injection(&self) -> Result<PartialInjection, SymmetricError> {
        let mut pairs = Vec::new();
        for (k, &v) in &self.map {
            let x: usize = k.parse().map_err(|_| SymmetricError::OutOfRange {
                point: usize::MAX,
                n: self.n,
            })?;
            pairs.push((x, v));
        }
        PartialInjection::from_pairs(self.n, pairs)
    }
}

/// `{"pairs":[[bisection, bisection],...]}`: a candidate map on a finite set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub pairs: Vec<(Bisection, Bisection)>,
}

/// A finite set of bisections, either `{"elements":[...]}` or a bare array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KSetFile {
    Wrapped { elements: Vec<Bisection> },
    Bare(Vec<Bisection>),
}

impl KSetFile {
    pub fn into_elements(self) -> Vec<Bisection> {
        match self {
            KSetFile::Wrapped { elements } | KSetFile::Bare(elements) => elements,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn groupoid_round_trip() {
        let g = crate::groupoid::convex_combination(&[
            (
                rat(1, 3),
                FiniteGroupoid::from_group(CayleyTable::cyclic(2)),
            ),
            (rat(2, 3), FiniteGroupoid::full_relation(2)),
        ])
        .unwrap();
        let text = to_json(&GroupoidFile::from_groupoid(&g));
        assert!(text.contains("\"weight\": \"1/3\""));
        let back: GroupoidFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_groupoid().unwrap(), g);
    }

    #[test]
    fn bad_group_table_is_reported() {
        let f: GroupoidFile = serde_json::from_str(
            r#"{"components":[{"group_table":[[0,1],[1,1]],"base_size":1,"weight":"1/1"}]}"#,
        )
        .unwrap();
        assert!(matches!(
            f.to_groupoid(),
            Err(GroupoidFileError::Group { component: 0, .. })
        ));
    }

    #[test]
    fn raw_duplicate_composition() {
        let f: RawFile = serde_json::from_str(
            r#"{"units":[0],"arrows":[[0,0,0]],"compose":[[0,0,0],[0,0,0]],"masses":{"0":"1/1"}}"#,
        )
        .unwrap();
        assert_eq!(
            f.to_raw().unwrap_err(),
            MalformedRaw::DuplicateComposition { left: 0, right: 0 }
        );
    }

    #[test]
    fn raw_round_trip() {
        let (raw, _) = FiniteGroupoid::full_relation(2).to_raw();
        let f = RawFile::from_raw(&raw);
        let back: RawFile = serde_json::from_str(&to_json(&f)).unwrap();
        assert_eq!(back.to_raw().unwrap(), raw);
    }

    #[test]
    fn bisection_and_malg_json() {
        let b: Bisection = [Arrow::new(0, 1, 0, 1)].into_iter().collect();
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(text, r#"{"arrows":[[0,1,0,1]]}"#);
        assert_eq!(serde_json::from_str::<Bisection>(&text).unwrap(), b);
        let m = MAlgElement::from_units([2, 0]);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"units":[0,2]}"#);
    }

    #[test]
    fn injection_json() {
        let f: PartialInjectionFile =
            serde_json::from_str(r#"{"n":3,"map":{"0":1,"1":0}}"#).unwrap();
        let a = f.to_injection().unwrap();
        assert_eq!(a.get(0), Some(1));
        assert_eq!(PartialInjectionFile::from_injection(&a), f);
    }

    #[test]
    fn k_sets_accept_both_shapes() {
        let a: KSetFile = serde_json::from_str(r#"[{"arrows":[]}]"#).unwrap();
        let b: KSetFile = serde_json::from_str(r#"{"elements":[{"arrows":[]}]}"#).unwrap();
        assert_eq!(a.into_elements(), b.into_elements());
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
    }
}
