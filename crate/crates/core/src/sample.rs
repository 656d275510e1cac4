//! Seeded random modules and short exact sequences for property checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::PathAlgebra;
use crate::module::{direct_sum, Module, ModuleMorphism};

/// `0 -> A -> B -> C -> 0`.
#[derive(Debug, Clone)]
pub struct ShortExact {
    pub a: Module,
    pub b: Module,
    pub c: Module,
    pub inclusion: ModuleMorphism,
    pub projection: ModuleMorphism,
}

/// Quotient of a sum of one or two projectives by a random submodule.
pub fn random_quotient(algebra: &Arc<PathAlgebra>, rng: &mut ChaCha8Rng) -> Module {
    let n = algebra.vertex_count();
    let parts: Vec<Module> = (0..rng.gen_range(1..=2))
        .map(|_| Module::projective(algebra, rng.gen_range(0..n)).expect("vertex in range"))
        .collect();
    let cover = direct_sum(algebra, &parts);
    let sub = random_submodule(&cover, rng, 2);
    cover.quotient(&sub.module, &sub.inclusion).expect("inclusion is injective").module
}

fn random_submodule(m: &Module, rng: &mut ChaCha8Rng, max_gens: usize) -> crate::module::Submodule {
    let p = m.field().prime().min(5);
    let support: Vec<usize> = (0..m.dims().len()).filter(|&v| m.dims()[v] > 0).collect();
    let gens: Vec<(usize, Vec<u32>)> = (0..rng.gen_range(0..=max_gens))
        .filter_map(|_| {
            let v = *support.choose(rng)?;
            Some((v, (0..m.dims()[v]).map(|_| rng.gen_range(0..p)).collect()))
        })
        .collect();
    m.submodule_generated(&gens).expect("generators lie in the module")
}

/// Simples, radical quotients, random quotients of projectives and their syzygies.
pub fn random_module(algebra: &Arc<PathAlgebra>, rng: &mut ChaCha8Rng) -> Module {
    let n = algebra.vertex_count();
    match rng.gen_range(0..8) {
        0 => Module::simple(algebra, rng.gen_range(0..n)).expect("vertex in range"),
        1 => Module::projective(algebra, rng.gen_range(0..n)).expect("vertex in range"),
        2 => Module::radical_power_quotient(algebra, rng.gen_range(1..=2)),
        3 => random_quotient(algebra, rng).syzygy(1),
        _ => random_quotient(algebra, rng),
    }
}

/// `B` random, `A` a random submodule, `C = B/A`.
pub fn random_short_exact(algebra: &Arc<PathAlgebra>, rng: &mut ChaCha8Rng) -> ShortExact {
    let b = random_module(algebra, rng);
    let sub = random_submodule(&b, rng, 2);
    let q = b.quotient(&sub.module, &sub.inclusion).expect("inclusion is injective");
    ShortExact {
        a: sub.module,
        b,
        c: q.module,
        inclusion: sub.inclusion,
        projection: q.projection,
    }
}
