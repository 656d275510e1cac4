mod common;

use common::*;
use findim::corpus::{self, corpus_algebra, corpus_mt};
use findim::module::Module;
use findim::text::parse_algebra_file;
use findim::Error;

#[test]
fn three_vertex_example_file_shape() {
    let spec = corpus_algebra("ex53").unwrap();
    assert_eq!(spec.vertex_count, 3);
    assert_eq!(spec.arrows.len(), 4);
    let rels: Vec<String> = spec
        .relations
        .iter()
        .map(|r| r[0].1.join("*"))
        .collect();
    assert_eq!(rels, ["g*d*b", "d*g", "a*d", "d*b*a"]);
}

#[test]
fn two_vertex_example_file_shape() {
    let spec = corpus_algebra("ex23").unwrap();
    assert_eq!((spec.vertex_count, spec.arrows.len(), spec.relations.len()), (2, 3, 4));
}

#[test]
fn family_algebra_binomial_relation() {
    let spec = corpus_algebra("ex54").unwrap();
    let two_term: Vec<_> = spec.relations.iter().filter(|r| r.len() == 2).collect();
    assert_eq!(two_term.len(), 1);
    assert_eq!(two_term[0][0], (1, vec!["g".to_string(), "a".to_string()]));
    assert_eq!(two_term[0][1].0, -1);
    // every other relation is a length-4 monomial, and b*b*b*a is not among them
    let monomials: Vec<String> = spec
        .relations
        .iter()
        .filter(|r| r.len() == 1)
        .map(|r| r[0].1.join("*"))
        .collect();
    assert_eq!(monomials.len(), 23);
    assert!(!monomials.contains(&"b*b*b*a".to_string()));
    assert!(monomials.iter().all(|m| m.split('*').count() == 4));
}

#[test]
fn render_round_trip_on_corpus() {
    for name in corpus::NAMES {
        let spec = corpus_algebra(name).unwrap();
        assert_eq!(parse_algebra_file(&spec.render()).unwrap(), spec, "{name}");
    }
}

#[test]
fn length_one_relation_is_rejected() {
    let err = parse_algebra_file("field 5\nvertices 1 2\narrow a 1 2\nrel a\n").unwrap_err();
    assert_eq!(err.code(), "syntax_error");
}

#[test]
fn unknown_corpus_name() {
    assert!(matches!(corpus::build("ex99", None), Err(Error::UnknownCorpusName(_))));
}

#[test]
fn projectives_of_three_vertex_example() {
    // P1 = 1/(2 3)/3, P2 = 2/3/1, P3 = 3/1/3
    let a = ex("ex53");
    assert_eq!(p(&a, 1).dims(), [1, 1, 2]);
    assert_eq!(p(&a, 2).dims(), [1, 1, 1]);
    assert_eq!(p(&a, 3).dims(), [1, 0, 2]);
    assert_eq!(a.dim(), 10);
    assert_eq!(a.nilpotency_degree(), 3);
}

#[test]
fn second_radical_quotient_dims() {
    // R/rad² has the vertices plus one basis vector per arrow, at its target.
    for name in corpus::NAMES {
        let spec = corpus_algebra(name).unwrap();
        let mut oracle = vec![1usize; spec.vertex_count];
        for (_, _, t) in &spec.arrows {
            oracle[t - 1] += 1;
        }
        let a = ex(name);
        assert_eq!(Module::radical_power_quotient(&a, 2).dims(), oracle.as_slice(), "{name}");
    }
    assert_eq!(Module::radical_power_quotient(&ex("ex53"), 2).dims(), [2, 2, 3]);
}

#[test]
fn family_modules_satisfy_relations() {
    let a = ex("ex54");
    assert_eq!(a.nilpotency_degree(), 5);
    for t in [0, 1, 2, 3, 5, -1] {
        let m = corpus_mt(&a, t).unwrap();
        assert_eq!(m.dims(), [4, 8, 0]);
        m.validate().unwrap();
        for rel in a.relations() {
            assert!(m.eval_relation(&rel.terms).is_zero());
        }
    }
    assert!(corpus_mt(&ex("ex53"), 0).is_err());
}

#[test]
fn prime_override_changes_the_field() {
    let a = corpus::build("ex53", Some(101)).unwrap();
    assert_eq!(a.prime(), 101);
    assert_eq!(a.dim(), 10);
}
