#![allow(dead_code)]

use std::sync::Arc;

use findim::corpus;
use findim::module::{direct_sum, Module};
#[allow(unused_imports)]
pub use findim::sample::{random_module, random_short_exact};
use findim::{Matrix, PathAlgebra, PrimeField};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

pub fn ex(name: &str) -> Arc<PathAlgebra> {
    corpus::build(name, None).unwrap()
}

pub fn s(alg: &Arc<PathAlgebra>, i: usize) -> Module {
    Module::simple(alg, i - 1).unwrap()
}

pub fn p(alg: &Arc<PathAlgebra>, i: usize) -> Module {
    Module::projective(alg, i - 1).unwrap()
}

pub fn sum(alg: &Arc<PathAlgebra>, parts: &[Module]) -> Module {
    direct_sum(alg, parts)
}

fn rank(f: PrimeField, rows: &[Vec<u32>], cols: usize) -> usize {
    let mut a: Vec<Vec<u32>> = rows.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = f.inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let k = a[i][c];
                for j in 0..cols {
                    let v = f.mul(k, a[r][j]);
                    a[i][j] = f.sub(a[i][j], v);
                }
            }
        }
        r += 1;
    }
    r
}

fn offsets(sizes: &[usize]) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(sizes.len());
    let mut total = 0;
    for &s in sizes {
        off.push(total);
        total += s;
    }
    (off, total)
}

/// dim Hom(M, N) by solving `N_a X_s = X_t M_a` over every arrow directly.
pub fn hom_dim_oracle(m: &Module, n: &Module) -> usize {
    let alg = m.algebra();
    let f = alg.field();
    let blocks: Vec<usize> = (0..alg.vertex_count()).map(|v| n.dims()[v] * m.dims()[v]).collect();
    let (off, total) = offsets(&blocks);
    let mut rows = Vec::new();
    for (ai, arrow) in alg.quiver().arrows().iter().enumerate() {
        let (sv, tv) = (arrow.source, arrow.target);
        let (na, ma) = (n.map(ai), m.map(ai));
        let (ns, nt, ms, mt) = (n.dims()[sv], n.dims()[tv], m.dims()[sv], m.dims()[tv]);
        for r in 0..nt {
            for c in 0..ms {
                let mut row = vec![0u32; total];
                for k in 0..ns {
                    let idx = off[sv] + k * ms + c;
                    row[idx] = f.add(row[idx], na.get(r, k));
                }
                for k in 0..mt {
                    let idx = off[tv] + r * mt + k;
                    row[idx] = f.sub(row[idx], ma.get(k, c));
                }
                rows.push(row);
            }
        }
    }
    total - rank(f, &rows, total)
}

/// dim Ext¹(M, N) as cocycles `(f_a)` on arrows modulo coboundaries.
/// A family `f_a: M_s -> N_t` defines an extension iff every defining relation
/// has zero off-diagonal block, which is linear in `f`.
pub fn ext1_dim_oracle(m: &Module, n: &Module) -> usize {
    let alg = m.algebra();
    let f = alg.field();
    let q = alg.quiver();
    let blocks: Vec<usize> = q
        .arrows()
        .iter()
        .map(|a| n.dims()[a.target] * m.dims()[a.source])
        .collect();
    let (off, total) = offsets(&blocks);
    let mut rows = Vec::new();
    for rel in alg.relations() {
        let (src, tgt) = {
            let p0 = &rel.terms[0].1;
            (p0.source, p0.target)
        };
        let (mr, nr) = (m.dims()[src], n.dims()[tgt]);
        // coefficient of f_{a_k}[x][y] in entry (r, c) of Σ c · N(after) f_a M(before)
        let mut block = vec![vec![0u32; total]; nr * mr];
        for (coef, path) in &rel.terms {
            let c = f.from_i64(*coef);
            for k in 0..path.arrows.len() {
                let a = path.arrows[k];
                let before = path_matrix(m, &path.arrows[..k], src);
                let after = path_matrix(n, &path.arrows[k + 1..], q.arrow(a).target);
                let (ms, nt) = (m.dims()[q.arrow(a).source], n.dims()[q.arrow(a).target]);
                for r in 0..nr {
                    for col in 0..mr {
                        for x in 0..nt {
                            let left = after.get(r, x);
                            if left == 0 {
                                continue;
                            }
                            for y in 0..ms {
                                let right = before.get(y, col);
                                if right == 0 {
                                    continue;
                                }
                                let idx = off[a] + x * ms + y;
                                let e = &mut block[r * mr + col][idx];
                                *e = f.add(*e, f.mul(c, f.mul(left, right)));
                            }
                        }
                    }
                }
            }
        }
        rows.extend(block);
    }
    let cocycles = total - rank(f, &rows, total);
    let gauge: usize = (0..alg.vertex_count()).map(|v| n.dims()[v] * m.dims()[v]).sum();
    let coboundaries = gauge - hom_dim_oracle(m, n);
    cocycles - coboundaries
}

/// Matrix of a path (application order) acting on `module`, starting at `start`.
fn path_matrix(module: &Module, arrows: &[usize], start: usize) -> Matrix {
    let f = module.field();
    let mut acc = Matrix::identity(f, module.dims()[start]);
    for &a in arrows {
        acc = module.map(a).mul(&acc);
    }
    acc
}

/// pd by walking the syzygy chain until a projective appears; gives up after
/// `cap` steps or once the syzygy grows past 200 dimensions.
pub fn pd_by_chain(m: &Module, cap: usize) -> Option<usize> {
    let mut cur = m.clone();
    for k in 0..=cap {
        if cur.is_zero() || cur.is_projective() {
            return Some(k);
        }
        if cur.dim() > 200 {
            return None;
        }
        cur = cur.syzygy(1);
    }
    None
}

pub fn pick<'a, T>(items: &'a [T], rng: &mut ChaCha8Rng) -> &'a T {
    items.choose(rng).unwrap()
}
