mod common;

use common::*;
use findim::decompose::{decompose, is_isomorphic};
use findim::expr::{module_from_str, parse_module_expr, ExprContext};
use findim::module::Module;
use findim::strat::{build_epss, standard_modules, verify_stratifying_system, DEFAULT_ITER_CAP, DEFAULT_TRIES};
use findim::Error;

fn top_dims(m: &Module) -> Vec<usize> {
    let r = m.radical().module;
    m.dims().iter().zip(r.dims()).map(|(a, b)| a - b).collect()
}

#[test]
fn syzygies_of_standard_modules() {
    let a = ex("ex53");
    let ctx = ExprContext::new(&a);
    let m = module_from_str("omega^1(D(2)) + omega^2(D(1))", &ctx).unwrap();
    let d = decompose(&m).unwrap();
    let mut parts: Vec<(Vec<usize>, Vec<usize>)> = d
        .summands
        .iter()
        .flat_map(|x| std::iter::repeat((x.witness.dims().to_vec(), top_dims(&x.witness))).take(x.multiplicity))
        .collect();
    parts.sort();
    // (1/3), S(1) and (3/1)
    assert_eq!(
        parts,
        [(vec![1, 0, 0], vec![1, 0, 0]), (vec![1, 0, 1], vec![0, 0, 1]), (vec![1, 0, 1], vec![1, 0, 0])]
    );
    let p3 = p(&a, 3);
    let three_one = p3.quotient_by_basis(&p3.radical_power_basis(2)).module;
    assert!(d.summands.iter().any(|x| is_isomorphic(&x.witness, &three_one).unwrap()));
}

#[test]
fn atoms_match_direct_constructions() {
    let a = ex("ex53");
    let ctx = ExprContext::new(&a);
    let m = module_from_str("radq(1)+radq(2)", &ctx).unwrap();
    let direct = sum(&a, &[Module::radical_power_quotient(&a, 1), Module::radical_power_quotient(&a, 2)]);
    assert!(is_isomorphic(&m, &direct).unwrap());
    assert!(is_isomorphic(&module_from_str("regular()", &ctx).unwrap(), &sum(&a, &[p(&a, 1), p(&a, 2), p(&a, 3)])).unwrap());
    assert!(is_isomorphic(&module_from_str("D(3)", &ctx).unwrap(), &p(&a, 3)).unwrap());
    let b = ex("ex54");
    let ctx = ExprContext::new(&b);
    let m = module_from_str("mt(2)", &ctx).unwrap();
    assert!(is_isomorphic(&m, &findim::corpus::corpus_mt(&b, 2).unwrap()).unwrap());
}

#[test]
fn context_dependent_atoms() {
    let a = ex("ex53");
    let ctx = ExprContext::new(&a);
    assert!(matches!(module_from_str("Q(1)", &ctx), Err(Error::MissingContext(_))));
    assert!(matches!(module_from_str("theta(1)", &ctx), Err(Error::MissingContext(_))));
    let sys = verify_stratifying_system(standard_modules(&a)).unwrap();
    let epss = build_epss(&sys, DEFAULT_ITER_CAP, DEFAULT_TRIES).unwrap();
    let ctx = ExprContext { algebra: &a, system: Some(&sys), epss: Some(&epss) };
    assert!(is_isomorphic(&module_from_str("Q(2)", &ctx).unwrap(), &epss.q[1]).unwrap());
    assert!(is_isomorphic(&module_from_str("theta(1)", &ctx).unwrap(), &s(&a, 1)).unwrap());
    assert!(matches!(module_from_str("Q(4)", &ctx), Err(Error::IndexOutOfRange { index: 4, max: 3 })));
}

#[test]
fn bad_expressions() {
    let a = ex("ex53");
    let ctx = ExprContext::new(&a);
    assert!(matches!(module_from_str("S(1)+P(9)", &ctx), Err(Error::IndexOutOfRange { index: 9, max: 3 })));
    assert!(matches!(module_from_str("nosuch(1)", &ctx), Err(Error::UnknownCorpusName(_))));
    assert!(matches!(module_from_str("mt(1, 2)", &ctx), Err(Error::InvalidModule(_))));
    assert!(matches!(parse_module_expr("omega^2(S(1)"), Err(Error::Syntax { line: 1, .. })));
}
