use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cyclotomic::RootOrder;
use crate::error::{Error, Result};
use crate::matgroup::{DenseMatrix, MonomialMatrix};

/// A matrix as read from a generator file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Matrix {
    Monomial(MonomialMatrix),
    Dense(DenseMatrix),
}

impl Matrix {
    pub fn dim(&self) -> usize {
        match self {
            Matrix::Monomial(m) => m.dim(),
            Matrix::Dense(d) => d.rows(),
        }
    }

    pub fn order(&self) -> RootOrder {
        match self {
            Matrix::Monomial(m) => m.order(),
            Matrix::Dense(d) => d.order(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Matrix::Monomial(m) => m.to_dense(),
            Matrix::Dense(d) => d.clone(),
        }
    }

    /// The monomial form, recognizing dense matrices that happen to be
    /// monomial with root-of-unity entries.
    pub fn to_monomial(&self) -> Option<MonomialMatrix> {
        match self {
            Matrix::Monomial(m) => Some(m.clone()),
            Matrix::Dense(d) => MonomialMatrix::from_dense(d),
        }
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = Value::deserialize(d)?;
        let kind = v.get("kind").and_then(Value::as_str).map(str::to_owned);
        let monomial = match kind.as_deref() {
            Some("monomial") => true,
            Some("dense") => false,
            Some(other) => return Err(D::Error::custom(format!("unknown matrix kind {other:?}"))),
            None => v.get("entries").is_none(),
        };
        if monomial {
            MonomialMatrix::deserialize(v)
                .map(Matrix::Monomial)
                .map_err(D::Error::custom)
        } else {
            DenseMatrix::deserialize(v).map(Matrix::Dense).map_err(D::Error::custom)
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GeneratorFile {
    List(Vec<Matrix>),
    Wrapped { generators: Vec<Matrix> },
}

/// Parses a generator file: a JSON array of matrices or an object with a
/// `"generators"` array. All generators must be square of one dimension.
pub fn read_generators(json: &str) -> Result<Vec<Matrix>> {
    let file: GeneratorFile = serde_json::from_str(json).map_err(|e| Error::input(e.to_string()))?;
    let gens = match file {
        GeneratorFile::List(g) | GeneratorFile::Wrapped { generators: g } => g,
    };
    let Some(first) = gens.first() else {
        return Err(Error::input("no generators given"));
    };
    let n = first.dim();
    for g in &gens {
        if let Matrix::Dense(d) = g {
            if !d.is_square() {
                return Err(Error::input("generators must be square"));
            }
        }
        if g.dim() != n {
            return Err(Error::input(format!(
                "generator dimensions differ ({} vs {n})",
                g.dim()
            )));
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_both_layouts() {
        let list = r#"[{"n":2,"order":2,"kind":"monomial","perm":[1,0],"exps":[0,0]},
                       {"n":2,"order":2,"kind":"monomial","perm":[0,1],"exps":[0,1]}]"#;
        let g = read_generators(list).unwrap();
        assert_eq!(g.len(), 2);
        assert!(matches!(g[0], Matrix::Monomial(_)));
        let wrapped = format!(r#"{{"generators": {list}}}"#);
        assert_eq!(read_generators(&wrapped).unwrap(), g);
    }

    #[test]
    fn dense_without_kind() {
        let g = read_generators(r#"[{"entries": [["0/1","1/1"],["1/1","0/1"]]}]"#).unwrap();
        let Matrix::Dense(d) = &g[0] else {
            panic!("expected dense")
        };
        assert_eq!(d.rows(), 2);
        assert_eq!(g[0].to_monomial().unwrap().perm(), &[1, 0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_generators("[]").is_err());
        assert!(read_generators("{").is_err());
        assert!(read_generators(r#"[{"n":2,"order":2,"kind":"monomial","perm":[0,0],"exps":[0,0]}]"#).is_err());
        let mixed = r#"[{"n":2,"order":1,"kind":"monomial","perm":[0,1],"exps":[0,0]},
                        {"n":1,"order":1,"kind":"monomial","perm":[0],"exps":[0]}]"#;
        assert!(read_generators(mixed).is_err());
    }
}
