//! JSON formats for data files and fan files.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{fmt_q, parse_q, IntMatrix, RatLattice, RatMatrix, Q};
use crate::roots::{AmbientRootDatum, DynkinComponent, Family};
use crate::spherical::SphericalDatumK;
use crate::tits::{StarAction, TitsIndex};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unsupported schema version {0:?}")]
    Version(String),
    #[error("missing section {0}")]
    Missing(&'static str),
    #[error("unknown simple root {0:?}")]
    UnknownRoot(String),
    #[error("unknown spherical root {0:?}")]
    UnknownSphericalRoot(String),
    #[error("bad star generator: {0}")]
    BadStar(String),
    #[error("{0}")]
    Invalid(String),
}

/// Exact rational written as `"p/q"`; integers are also accepted bare.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational(pub Q);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string \"p/q\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational(Q::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational(Q::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                parse_q(v).map(Rational).ok_or_else(|| E::custom(format!("bad rational {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn to_rationals(v: &[Q]) -> Vec<Rational> {
    v.iter().cloned().map(Rational).collect()
}

fn rows_q(rows: &[Vec<Rational>]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Ambient,
    Abstract,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub family: Family,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub components: Vec<ComponentSpec>,
}

/// `"flip"`, `"c2.flip"`, `{"swap": ["c1", "c2"]}` or an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StarSpec {
    Named(String),
    Swap { swap: [String; 2] },
    Matrix(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphericalSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_basis: Option<Vec<Vec<Rational>>>,
    pub sigma: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sp: Vec<String>,
    /// Basis of `Γ_k` in `Ξ_k` coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Vec<Rational>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractSpec {
    pub rank: usize,
    pub pairing: Vec<Vec<Rational>>,
    #[serde(default)]
    pub star: Vec<Vec<Vec<i64>>>,
    /// Names of the compact spherical roots.
    #[serde(default)]
    pub compact: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub schema_version: String,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<AmbientSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub compact_simple: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub star_generators: Vec<StarSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spherical: Option<SphericalSpec>,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    pub abstract_spec: Option<AbstractSpec>,
}

fn check_version(v: &str) -> Result<(), SchemaError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(SchemaError::Version(v.to_string()))
    }
}

fn square_matrix(rows: &[Vec<i64>], n: usize) -> Result<IntMatrix, SchemaError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(SchemaError::BadStar(format!("matrix must be {n}x{n}")));
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Ok(IntMatrix::from_i64(&refs))
}

impl DatumFile {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let f: DatumFile = serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))?;
        check_version(&f.schema_version)?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn ambient_datum(&self) -> Result<AmbientRootDatum, SchemaError> {
        let spec = self.ambient.as_ref().ok_or(SchemaError::Missing("ambient"))?;
        if spec.components.is_empty() {
            return Err(SchemaError::Invalid("ambient datum has no components".into()));
        }
        let comps = spec
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let label = c.label.clone().unwrap_or_else(|| format!("c{}", i + 1));
                DynkinComponent::new(c.family, c.rank, label).map_err(|e| SchemaError::Invalid(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut labels: Vec<&String> = comps.iter().map(|c| &c.label).collect();
        labels.sort();
        labels.dedup();
        if labels.len() != comps.len() {
            return Err(SchemaError::Invalid("component labels must be distinct".into()));
        }
        Ok(AmbientRootDatum::new(comps))
    }

    fn star_matrix(amb: &AmbientRootDatum, spec: &StarSpec) -> Result<IntMatrix, SchemaError> {
        let n = amb.dim();
        let perm = match spec {
            StarSpec::Matrix(rows) => return square_matrix(rows, n),
            StarSpec::Named(name) => {
                let ci = match name.split_once('.') {
                    Some((label, "flip")) => amb
                        .component_index(label)
                        .ok_or_else(|| SchemaError::BadStar(format!("unknown component {label:?}")))?,
                    None if name == "flip" && amb.components().len() == 1 => 0,
                    _ => return Err(SchemaError::BadStar(format!("unknown automorphism {name:?}"))),
                };
                amb.component_flip(ci)
                    .ok_or_else(|| SchemaError::BadStar(format!("{name:?}: diagram has no flip")))?
            }
            StarSpec::Swap { swap: [a, b] } => {
                let ia = amb.component_index(a).ok_or_else(|| SchemaError::BadStar(format!("unknown component {a:?}")))?;
                let ib = amb.component_index(b).ok_or_else(|| SchemaError::BadStar(format!("unknown component {b:?}")))?;
                amb.component_swap(ia, ib)
                    .ok_or_else(|| SchemaError::BadStar(format!("components {a:?} and {b:?} are not isomorphic")))?
            }
        };
        Ok(AmbientRootDatum::permutation_matrix(&perm))
    }

    fn root_indices(amb: &AmbientRootDatum, names: &[String]) -> Result<Vec<usize>, SchemaError> {
        names
            .iter()
            .map(|n| amb.root_index(n).ok_or_else(|| SchemaError::UnknownRoot(n.clone())))
            .collect()
    }

    pub fn to_index(&self) -> Result<TitsIndex, SchemaError> {
        if self.mode != Mode::Ambient {
            return Err(SchemaError::Invalid("a group index needs an ambient file".into()));
        }
        let amb = self.ambient_datum()?;
        let compact = Self::root_indices(&amb, &self.compact_simple)?;
        let gens = self
            .star_generators
            .iter()
            .map(|s| Self::star_matrix(&amb, s))
            .collect::<Result<Vec<_>, _>>()?;
        let star = StarAction::new(amb.dim(), gens).map_err(|e| SchemaError::BadStar(e.to_string()))?;
        TitsIndex::new(amb, compact, star).map_err(|e| SchemaError::Invalid(e.to_string()))
    }

    pub fn to_datum(&self) -> Result<SphericalDatumK, SchemaError> {
        let sph = self.spherical.as_ref().ok_or(SchemaError::Missing("spherical"))?;
        let sigma = rows_q(&sph.sigma);
        match self.mode {
            Mode::Ambient => {
                let index = self.to_index()?;
                let amb = index.ambient().clone();
                let xi = sph.xi_basis.as_ref().map(|rows| RatLattice::from_generators(amb.dim(), &rows_q(rows)));
                let sp = Self::root_indices(&amb, &sph.sp)?;
                SphericalDatumK::ambient(index, xi, sigma, sp, sph.names.clone())
                    .map_err(|e| SchemaError::Invalid(e.to_string()))
            }
            Mode::Abstract => {
                let ab = self.abstract_spec.as_ref().ok_or(SchemaError::Missing("abstract"))?;
                let n = ab.rank;
                let pairing = rows_q(&ab.pairing);
                if pairing.len() != n || pairing.iter().any(|r| r.len() != n) {
                    return Err(SchemaError::Invalid(format!("pairing must be {n}x{n}")));
                }
                let gens = ab.star.iter().map(|m| square_matrix(m, n)).collect::<Result<Vec<_>, _>>()?;
                let star = StarAction::new(n, gens).map_err(|e| SchemaError::BadStar(e.to_string()))?;
                let names: Vec<String> =
                    sph.names.clone().unwrap_or_else(|| (1..=sigma.len()).map(|i| format!("s{i}")).collect());
                let compact = ab
                    .compact
                    .iter()
                    .map(|c| names.iter().position(|n| n == c).ok_or_else(|| SchemaError::UnknownSphericalRoot(c.clone())))
                    .collect::<Result<Vec<_>, _>>()?;
                SphericalDatumK::abstract_lattice(RatMatrix::from_rows(&pairing, n), star, sigma, compact, Some(names))
                    .map_err(|e| SchemaError::Invalid(e.to_string()))
            }
        }
    }

    /// `Γ_k` if the file names one, in `Ξ_k` coordinates of rank `d`.
    pub fn gamma(&self, d: usize) -> Result<Option<RatLattice>, SchemaError> {
        let Some(rows) = self.spherical.as_ref().and_then(|s| s.gamma.as_ref()) else { return Ok(None) };
        let rows = rows_q(rows);
        if rows.iter().any(|r| r.len() != d) {
            return Err(SchemaError::Invalid(format!("gamma vectors must have {d} coordinates")));
        }
        Ok(Some(RatLattice::from_generators(d, &rows)))
    }
}

/// Maximal cones by their generators in `N_k` lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub schema_version: String,
    pub cones: Vec<Vec<Vec<i64>>>,
}

impl FanFile {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let f: FanFile = serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))?;
        check_version(&f.schema_version)?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qr;

    #[test]
    fn rationals_accept_strings_and_integers() {
        let v: Vec<Rational> = serde_json::from_str(r#"["1/2", 3, "-4"]"#).unwrap();
        assert_eq!(v, vec![Rational(qr(1, 2)), Rational(qr(3, 1)), Rational(qr(-4, 1))]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","3","-4"]"#);
        assert!(serde_json::from_str::<Rational>(r#""x""#).is_err());
    }

    #[test]
    fn named_and_matrix_stars() {
        let text = r#"{"schema_version":"1","ambient":{"components":[{"family":"A","rank":3}]},
            "star_generators":["flip"]}"#;
        let ix = DatumFile::parse(text).unwrap().to_index().unwrap();
        assert_eq!(ix.star().as_permutation(0).unwrap(), vec![2, 1, 0]);
        let text = r#"{"schema_version":"1","ambient":{"components":[{"family":"A","rank":2}]},
            "star_generators":[[[0,1],[1,0]]]}"#;
        assert_eq!(DatumFile::parse(text).unwrap().to_index().unwrap().star().as_permutation(0).unwrap(), vec![1, 0]);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(DatumFile::parse("{"), Err(SchemaError::Json(_))));
        assert!(matches!(DatumFile::parse(r#"{"schema_version":"9"}"#), Err(SchemaError::Version(_))));
        let text = r#"{"schema_version":"1","ambient":{"components":[{"family":"B","rank":2}]},
            "compact_simple":["a7"]}"#;
        assert!(matches!(DatumFile::parse(text).unwrap().to_index(), Err(SchemaError::UnknownRoot(_))));
        let text = r#"{"schema_version":"1","ambient":{"components":[{"family":"B","rank":2}]},
            "star_generators":["flip"]}"#;
        assert!(matches!(DatumFile::parse(text).unwrap().to_index(), Err(SchemaError::BadStar(_))));
    }

    #[test]
    fn swap_of_two_components() {
        let text = r#"{"schema_version":"1","ambient":{"components":[
            {"family":"A","rank":1,"label":"l"},{"family":"A","rank":1,"label":"r"}]},
            "star_generators":[{"swap":["l","r"]}]}"#;
        let ix = DatumFile::parse(text).unwrap().to_index().unwrap();
        assert_eq!(ix.k_rank(), 1);
        assert_eq!(ix.ambient().root_name(1), "r.a1");
    }
}
