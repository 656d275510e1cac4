//! The three worked algebras and the one-parameter family of modules over the
//! third one.

use std::sync::Arc;

use crate::algebra::PathAlgebra;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::Module;
use crate::text::{parse_algebra_file, AlgebraSpec};

pub const NAMES: [&str; 3] = ["ex23", "ex53", "ex54"];

pub fn algebra_text(name: &str) -> Result<&'static str> {
    match name {
        "ex23" => Ok(include_str!("../corpus/ex23.alg")),
        "ex53" => Ok(include_str!("../corpus/ex53.alg")),
        "ex54" => Ok(include_str!("../corpus/ex54.alg")),
        _ => Err(Error::UnknownCorpusName(name.to_string())),
    }
}

pub fn corpus_algebra(name: &str) -> Result<AlgebraSpec> {
    parse_algebra_file(algebra_text(name)?)
}

/// Builds a corpus algebra over the given prime (the file's prime if `None`).
pub fn build(name: &str, prime: Option<u32>) -> Result<Arc<PathAlgebra>> {
    corpus_algebra(name)?.build(prime, crate::algebra::DEFAULT_DEPTH_CAP)
}

/// `M_t` over the `ex54` algebra: dimension vector `(4, 8, 0)`.
pub fn corpus_mt(algebra: &Arc<PathAlgebra>, t: i64) -> Result<Module> {
    let q = algebra.quiver();
    let names: Vec<&str> = q.arrows().iter().map(|a| a.name.as_str()).collect();
    if algebra.vertex_count() != 3 || names != ["a", "b", "g", "l", "d"] {
        return Err(Error::UnknownCorpusName("mt (needs the ex54 algebra)".into()));
    }
    let f = algebra.field();
    let alpha = Matrix::from_rows(
        f,
        &[
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 0],
            vec![0, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 0, t],
        ],
    );
    let mut beta = Matrix::zeros(f, 8, 8);
    for r in 2..8 {
        beta.set(r, r - 2, 1);
    }
    let maps = vec![
        alpha,
        beta,
        Matrix::zeros(f, 0, 8),
        Matrix::zeros(f, 4, 0),
        Matrix::zeros(f, 4, 0),
    ];
    Ok(Module::new(algebra.clone(), vec![4, 8, 0], maps)?.labeled(format!("M_{t}")))
}
