//! JSON formats for quivers, windows, configurations, representations and
//! dimension vectors. Rationals travel as `"num/den"` strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use strata_core::derived::VertexVector;
use strata_core::rep::{DimVector, WindowRep};
use strata_core::{Configuration, Error, Field, Matrix, Quiver, RepArrow, RepQuiver, RepVertex, Result, Window, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub id: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
}

impl QuiverJson {
    pub fn build(&self) -> Result<Arc<Quiver>> {
        let arrows: Vec<(&str, &str, &str)> =
            self.arrows.iter().map(|a| (a.id.as_str(), a.source.as_str(), a.target.as_str())).collect();
        let vertices: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        Ok(Arc::new(Quiver::new(&vertices, &arrows)?))
    }

    pub fn of(q: &Quiver) -> Self {
        QuiverJson {
            vertices: q.names().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowJson { id: a.id.clone(), source: q.name(a.source).into(), target: q.name(a.target).into() })
                .collect(),
        }
    }
}

/// `"all"`, a list of vertex keys, or `{"members": [...], "period": k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigJson {
    Keyword(String),
    Members(Vec<String>),
    Periodic { members: Vec<String>, period: Option<i64> },
}

impl ConfigJson {
    pub fn build(&self, q: &Quiver) -> Result<Configuration> {
        let parse = |keys: &[String]| -> Result<Vec<RepVertex>> { keys.iter().map(|k| RepVertex::parse(q, k)).collect() };
        match self {
            ConfigJson::Keyword(k) if k == "all" => Ok(Configuration::All),
            ConfigJson::Keyword(k) => Err(Error::InvalidInput(format!("unknown configuration {k:?}"))),
            ConfigJson::Members(m) => Configuration::listed(parse(m)?, None),
            ConfigJson::Periodic { members, period } => Configuration::listed(parse(members)?, *period),
        }
    }

    pub fn of(c: &Configuration, q: &Quiver) -> Self {
        match c {
            Configuration::All => ConfigJson::Keyword("all".into()),
            Configuration::Listed { members, period } => {
                let members = members.iter().map(|&(n, l)| RepVertex::new(n, l).key(q)).collect();
                match period {
                    None => ConfigJson::Members(members),
                    Some(_) => ConfigJson::Periodic { members, period: *period },
                }
            }
        }
    }
}

pub fn window(pair: [i64; 2]) -> Result<Window> {
    Window::new(pair[0], pair[1])
}

/// A representation of the framed repetition quiver on a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub quiver: QuiverJson,
    #[serde(default = "yes")]
    pub framed: bool,
    pub window: [i64; 2],
    #[serde(default)]
    pub configuration: Option<ConfigJson>,
    #[serde(default)]
    pub dims: BTreeMap<String, usize>,
    /// Matrix of the arrow `s -> t` as `dim(s)` rows of `dim(t)` entries.
    #[serde(default)]
    pub mats: BTreeMap<String, Vec<Vec<String>>>,
}

fn yes() -> bool {
    true
}

impl RepJson {
    pub fn build(&self) -> Result<WindowRep<Q>> {
        let q = self.quiver.build()?;
        let config = match &self.configuration {
            Some(c) => c.build(&q)?,
            None => Configuration::All,
        };
        let rq = Arc::new(RepQuiver::new(q.clone(), self.framed, window(self.window)?, config));
        let mut dims = DimVector::new();
        for (k, &d) in &self.dims {
            let v = RepVertex::parse(&q, k)?;
            if rq.index_of(v).is_none() {
                if d > 0 {
                    return Err(Error::InvalidInput(format!("{k} is not a vertex of the window")));
                }
                continue;
            }
            dims.insert(v, d);
        }
        let mut mats = BTreeMap::new();
        for (k, rows) in &self.mats {
            let a = RepArrow::parse(&q, k)?;
            let idx = rq.arrow_index(a).ok_or_else(|| Error::InvalidInput(format!("{k} is not an arrow of the window")))?;
            let (s, t) = (a.source(&q), a.target(&q));
            let (ds, dt) = (dims.get(&s).copied().unwrap_or(0), dims.get(&t).copied().unwrap_or(0));
            if rows.len() != ds || rows.iter().any(|r| r.len() != dt) {
                return Err(Error::DimensionMismatch(format!("{k} must be {ds} x {dt}")));
            }
            let entries: Vec<Vec<Q>> =
                rows.iter().map(|r| r.iter().map(|e| Q::parse(e)).collect::<Result<_>>()).collect::<Result<_>>()?;
            mats.insert(idx, Matrix::from_rows(entries, dt));
        }
        WindowRep::from_parts(rq, &dims, mats)
    }

    /// Entries are written with `Display`: `"num/den"` over `Q`, residues over `F_p`.
    pub fn of<F: Field>(rep: &WindowRep<F>) -> Self {
        let rq = rep.quiver();
        let q = rq.quiver();
        let dims = rq
            .vertices()
            .iter()
            .enumerate()
            .filter(|&(i, _)| rep.dim(i) > 0)
            .map(|(i, v)| (v.key(q), rep.dim(i)))
            .collect();
        let mats = rq
            .arrows()
            .iter()
            .enumerate()
            .filter(|&(b, _)| !rep.mat(b).is_zero())
            .map(|(b, a)| (a.key(q), matrix_rows(rep.mat(b))))
            .collect();
        RepJson {
            quiver: QuiverJson::of(q),
            framed: rq.framed(),
            window: [rq.window().lo, rq.window().hi],
            configuration: Some(ConfigJson::of(rq.configuration(), q)),
            dims,
            mats,
        }
    }
}

pub fn matrix_rows<F: Field>(m: &Matrix<F>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(F::to_string).collect()).collect()
}

pub fn dims_json(q: &Quiver, d: &DimVector) -> Value {
    Value::Object(d.iter().map(|(v, &n)| (v.key(q), json!(n))).collect())
}

pub fn vector_json(q: &Quiver, d: &VertexVector) -> Value {
    Value::Object(d.iter().map(|(v, &n)| (v.key(q), json!(n))).collect())
}

pub fn parse_dims(q: &Quiver, map: &BTreeMap<String, usize>) -> Result<DimVector> {
    map.iter().filter(|(_, &n)| n > 0).map(|(k, &n)| Ok((RepVertex::parse(q, k)?, n))).collect()
}

pub fn parse_vector(q: &Quiver, map: &BTreeMap<String, i64>) -> Result<VertexVector> {
    map.iter()
        .filter(|(_, &n)| n != 0)
        .map(|(k, &n)| {
            let v = RepVertex::parse(q, k)?;
            if v.frozen {
                return Err(Error::InvalidInput(format!("{k} is frozen")));
            }
            Ok((v, n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_forms() {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let all: ConfigJson = serde_json::from_str("\"all\"").unwrap();
        assert_eq!(all.build(&q).unwrap(), Configuration::All);
        let list: ConfigJson = serde_json::from_str(r#"["1@0","2@1"]"#).unwrap();
        assert!(list.build(&q).unwrap().contains(RepVertex::new(1, 1)));
        let per: ConfigJson = serde_json::from_str(r#"{"members":["1@0"],"period":2}"#).unwrap();
        assert!(per.build(&q).unwrap().contains(RepVertex::new(0, 4)));
        let bad: ConfigJson = serde_json::from_str(r#"["1'@0"]"#).unwrap();
        assert!(bad.build(&q).is_err());
    }
}
