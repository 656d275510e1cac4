//! Krull–Schmidt decomposition through the endomorphism ring.
//!
//! The radical of `End(M)` is the kernel of the trace form, which is exact
//! when `p > dim End(M)`. Splitting elements of the semisimple quotient come
//! from the Frobenius-fixed subalgebra (of `End/rad` itself when commutative,
//! of its centre otherwise); a lift `z` with eigenvalue `c` splits `M` as
//! `ker (z - c)^N ⊕ im (z - c)^N`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::PathAlgebra;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::module::{direct_sum, hom_basis, Module, ModuleMorphism, Submodule};
use crate::poly;

const RANDOM_TRIES: u64 = 64;

/// `End(M)` with structure constants and its semisimple quotient.
#[derive(Debug, Clone)]
pub struct EndAlgebraData {
    pub basis: Vec<ModuleMorphism>,
    /// `mult_table[i][j]` = coordinates of `b_i ∘ b_j`.
    pub mult_table: Vec<Vec<Vec<u32>>>,
    /// Columns are coordinate vectors spanning the radical.
    pub radical_basis: Matrix,
    pub semisimple_quotient_dim: usize,
    pub commutative: bool,
    field: PrimeField,
    /// Indices of basis elements whose images span `End/rad`.
    lifts: Vec<usize>,
    /// Structure constants of `End/rad`.
    quotient_mult: Vec<Vec<Vec<u32>>>,
    quotient_one: Vec<u32>,
}

impl EndAlgebraData {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn radical_dim(&self) -> usize {
        self.radical_basis.cols()
    }

    fn qmul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let q = self.semisimple_quotient_dim;
        let mut out = vec![0u32; q];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for (k, &c) in self.quotient_mult[i][j].iter().enumerate() {
                    if c != 0 {
                        out[k] = f.add(out[k], f.mul(ab, c));
                    }
                }
            }
        }
        out
    }

    fn qpow(&self, x: &[u32], mut e: u64) -> Vec<u32> {
        let mut acc = self.quotient_one.clone();
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.qmul(&acc, &b);
            }
            b = self.qmul(&b, &b);
            e >>= 1;
        }
        acc
    }

    fn unit(&self, k: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.semisimple_quotient_dim];
        v[k] = 1;
        v
    }

    fn is_scalar(&self, x: &[u32]) -> bool {
        let basis = Matrix::from_columns(self.field, x.len(), &[self.quotient_one.clone()]);
        basis
            .solve(&Matrix::from_columns(self.field, x.len(), &[x.to_vec()]))
            .is_some()
    }

    /// Minimal polynomial of an element of `End/rad`, monic, lowest degree first.
    fn min_poly(&self, z: &[u32]) -> Vec<u32> {
        let f = self.field;
        let q = self.semisimple_quotient_dim;
        let mut powers = vec![self.quotient_one.clone()];
        loop {
            let next = self.qmul(powers.last().unwrap(), z);
            let basis = Matrix::from_columns(f, q, &powers);
            if let Some(sol) = basis.solve(&Matrix::from_columns(f, q, &[next.clone()])) {
                let n = powers.len();
                let mut m: Vec<u32> = (0..n).map(|k| f.neg(sol.get(k, 0))).collect();
                m.push(1);
                return m;
            }
            powers.push(next);
        }
    }

    /// Fixed space of `x ↦ x^p` on the span of the given quotient elements.
    fn frobenius_fixed(&self, span: &Matrix) -> Matrix {
        let f = self.field;
        let q = self.semisimple_quotient_dim;
        let images: Vec<Vec<u32>> = (0..span.cols())
            .map(|k| self.qpow(&span.column(k), f.prime() as u64))
            .collect();
        let diff = Matrix::from_columns(f, q, &images).sub(span);
        let kernel = diff.nullspace();
        span.mul(&kernel)
    }

    fn centre(&self) -> Matrix {
        let f = self.field;
        let q = self.semisimple_quotient_dim;
        let mut sys = Matrix::zeros(f, 0, q);
        for k in 0..q {
            // x ↦ x b_k - b_k x, linear in x.
            let cols: Vec<Vec<u32>> = (0..q)
                .map(|i| {
                    let u = self.unit(i);
                    let a = self.qmul(&u, &self.unit(k));
                    let b = self.qmul(&self.unit(k), &u);
                    a.iter().zip(&b).map(|(&s, &t)| f.sub(s, t)).collect()
                })
                .collect();
            sys = sys.vstack(&Matrix::from_columns(f, q, &cols));
        }
        sys.nullspace()
    }

    /// Endomorphism `Σ x_k b_{lift_k}` lifting a quotient element.
    fn lift(&self, x: &[u32]) -> ModuleMorphism {
        let mut acc = self.basis[0].scale(0);
        for (k, &c) in x.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&self.basis[self.lifts[k]].scale(c));
            }
        }
        acc
    }

    /// An element of `End/rad` with a root `c` of its minimal polynomial, which
    /// is not `c` itself.
    fn splitting_element(&self, dims: &[usize]) -> Result<Option<(Vec<u32>, u32)>> {
        let f = self.field;
        let q = self.semisimple_quotient_dim;
        let try_element = |z: &[u32]| -> Option<(Vec<u32>, u32)> {
            if self.is_scalar(z) {
                return None;
            }
            let m = self.min_poly(z);
            poly::roots(f, &m).first().map(|&c| (z.to_vec(), c))
        };
        let whole = Matrix::identity(f, q);
        if self.commutative {
            let fixed = self.frobenius_fixed(&whole);
            if fixed.cols() <= 1 {
                return Err(Error::NonSplit {
                    dims: dims.to_vec(),
                    degree: q,
                });
            }
            for k in 0..fixed.cols() {
                if let Some(hit) = try_element(&fixed.column(k)) {
                    return Ok(Some(hit));
                }
            }
            return Ok(None);
        }
        let centre = self.centre();
        let fixed = self.frobenius_fixed(&centre);
        for k in 0..fixed.cols() {
            if let Some(hit) = try_element(&fixed.column(k)) {
                return Ok(Some(hit));
            }
        }
        for k in 0..q {
            if let Some(hit) = try_element(&self.unit(k)) {
                return Ok(Some(hit));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for _ in 0..RANDOM_TRIES {
            let z: Vec<u32> = (0..q).map(|_| rng.gen_range(0..f.prime())).collect();
            if let Some(hit) = try_element(&z) {
                return Ok(Some(hit));
            }
        }
        Err(Error::NonSplit {
            dims: dims.to_vec(),
            degree: centre.cols(),
        })
    }
}

/// Builds `End(M)`, its radical via the trace form and the semisimple quotient.
pub fn end_algebra(m: &Module) -> Result<EndAlgebraData> {
    let f = m.field();
    let basis = hom_basis(m, m)?;
    let e = basis.len();
    if e > 0 && f.prime() as usize <= e {
        return Err(Error::FieldTooSmall {
            prime: f.prime(),
            dim: e,
        });
    }
    let flat: Vec<Vec<u32>> = basis.iter().map(|b| b.flatten()).collect();
    let len = flat.first().map_or(0, |v| v.len());
    let big = Matrix::from_columns(f, len, &flat);
    let rows = big.transpose().echelon().pivots;
    let coord = big.select_rows(&rows).inverse().expect("basis is independent");
    let coords_of = |g: &ModuleMorphism| -> Vec<u32> {
        let v = g.flatten();
        let picked: Vec<u32> = rows.iter().map(|&r| v[r]).collect();
        coord.mul_vec(&picked)
    };

    let mult_table: Vec<Vec<Vec<u32>>> = basis
        .iter()
        .map(|bi| basis.iter().map(|bj| coords_of(&bi.compose(bj))).collect())
        .collect();

    let tau: Vec<u32> = (0..e)
        .map(|k| (0..e).fold(0, |acc, j| f.add(acc, mult_table[k][j][j])))
        .collect();
    let mut form = Matrix::zeros(f, e, e);
    for i in 0..e {
        for j in 0..e {
            let v = mult_table[i][j]
                .iter()
                .zip(&tau)
                .fold(0, |acc, (&c, &t)| f.add(acc, f.mul(c, t)));
            form.set(i, j, v);
        }
    }
    let radical_basis = form.nullspace();
    let r = radical_basis.cols();
    let lifts = radical_basis.complement_units();
    let q = lifts.len();
    let mut full = radical_basis.clone();
    for &i in &lifts {
        let mut u = Matrix::zeros(f, e, 1);
        u.set(i, 0, 1);
        full = full.hstack(&u);
    }
    let projection = full
        .inverse()
        .expect("radical plus complement is invertible")
        .submatrix(r..e, 0..e);
    let quotient_mult: Vec<Vec<Vec<u32>>> = lifts
        .iter()
        .map(|&i| lifts.iter().map(|&j| projection.mul_vec(&mult_table[i][j])).collect())
        .collect();
    let quotient_one = if e == 0 {
        Vec::new()
    } else {
        projection.mul_vec(&coords_of(&m.identity()))
    };
    let commutative = (0..q).all(|i| (0..q).all(|j| quotient_mult[i][j] == quotient_mult[j][i]));
    Ok(EndAlgebraData {
        basis,
        mult_table,
        radical_basis,
        semisimple_quotient_dim: q,
        commutative,
        field: f,
        lifts,
        quotient_mult,
        quotient_one,
    })
}

/// Indecomposable over F_p. A summand whose `End/rad` is a proper field
/// extension of F_p counts as indecomposable here; [`decompose`] rejects it.
pub fn is_indecomposable(m: &Module) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    let end = end_algebra(m)?;
    if end.semisimple_quotient_dim == 1 {
        return Ok(true);
    }
    if !end.commutative {
        return Ok(false);
    }
    let fixed = end.frobenius_fixed(&Matrix::identity(end.field, end.semisimple_quotient_dim));
    Ok(fixed.cols() == 1)
}

fn fitting_split(m: &Module, z: &ModuleMorphism, c: u32) -> (Submodule, Submodule) {
    let f = m.field();
    let mut kers = Vec::new();
    let mut ims = Vec::new();
    for (zv, &d) in z.maps.iter().zip(m.dims()) {
        let shifted = zv.sub(&Matrix::identity(f, d).scale(c));
        let power = shifted.pow(d as u64);
        kers.push(power.nullspace());
        ims.push(power.column_basis());
    }
    (m.submodule_from_basis(&kers), m.submodule_from_basis(&ims))
}

/// Splits `M` into indecomposables, each with its inclusion into `M`.
fn split_leaves(m: &Module) -> Result<Vec<(Module, ModuleMorphism)>> {
    let mut leaves = Vec::new();
    let mut stack = vec![(m.clone(), m.identity())];
    while let Some((cur, inc)) = stack.pop() {
        if cur.is_zero() {
            continue;
        }
        let end = end_algebra(&cur)?;
        if end.semisimple_quotient_dim == 1 {
            leaves.push((cur, inc));
            continue;
        }
        let (zbar, c) = match end.splitting_element(cur.dims())? {
            Some(hit) => hit,
            None => {
                return Err(Error::NonSplit {
                    dims: cur.dims().to_vec(),
                    degree: end.semisimple_quotient_dim,
                })
            }
        };
        let z = end.lift(&zbar);
        let (a, b) = fitting_split(&cur, &z, c);
        // Second part pushed last so the kernel part is split first.
        stack.push((b.module, inc.compose(&b.inclusion)));
        stack.push((a.module, inc.compose(&a.inclusion)));
    }
    leaves.reverse();
    Ok(leaves)
}

/// Between indecomposables some basis element of `Hom` is invertible whenever
/// the modules are isomorphic, since the non-invertible maps form a subspace.
fn indecomposable_isomorphism(m: &Module, n: &Module) -> Result<Option<ModuleMorphism>> {
    m.same_algebra(n)?;
    if m.dims() != n.dims() {
        return Ok(None);
    }
    Ok(hom_basis(m, n)?.into_iter().find(|h| h.is_isomorphism()))
}

/// An isomorphism `M -> N`, if one exists.
pub fn find_isomorphism(m: &Module, n: &Module) -> Result<Option<ModuleMorphism>> {
    m.same_algebra(n)?;
    if m.dims() != n.dims() {
        return Ok(None);
    }
    let basis = hom_basis(m, n)?;
    if let Some(h) = basis.iter().find(|h| h.is_isomorphism()) {
        return Ok(Some(h.clone()));
    }
    if basis.is_empty() {
        return Ok(m.is_zero().then(|| ModuleMorphism::zero(m, n)));
    }
    let p = m.field().prime();
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..16 {
        let h = basis[1..]
            .iter()
            .fold(basis[0].scale(rng.gen_range(1..p)), |acc, b| acc.add(&b.scale(rng.gen_range(0..p))));
        if h.is_isomorphism() {
            return Ok(Some(h));
        }
    }
    matched_isomorphism(m, n)
}

/// Assembles `M -> N` from matched summands of both decompositions.
fn matched_isomorphism(m: &Module, n: &Module) -> Result<Option<ModuleMorphism>> {
    let dm = decompose(m)?;
    let dn = decompose(n)?;
    let inv: Vec<Matrix> = dm
        .isomorphism()
        .maps
        .iter()
        .map(|a| a.inverse().expect("decomposition isomorphism"))
        .collect();
    let f = m.field();
    let nv = m.dims().len();
    let mut maps: Vec<Matrix> = (0..nv).map(|v| Matrix::zeros(f, n.dims()[v], m.dims()[v])).collect();
    let mut offsets = vec![0usize; nv];
    let mut used = vec![false; dn.summands.len()];
    for sm in &dm.summands {
        let mut pair = None;
        for (k, t) in dn.summands.iter().enumerate() {
            if used[k] || t.multiplicity != sm.multiplicity {
                continue;
            }
            if let Some(phi) = indecomposable_isomorphism(&sm.witness, &t.witness)? {
                pair = Some((k, phi));
                break;
            }
        }
        let Some((k, phi)) = pair else {
            return Ok(None);
        };
        used[k] = true;
        for emb in &dn.summands[k].embeddings {
            for v in 0..nv {
                let w = sm.witness.dims()[v];
                let rows = inv[v].submatrix(offsets[v]..offsets[v] + w, 0..m.dims()[v]);
                maps[v] = maps[v].add(&emb.maps[v].mul(&phi.maps[v]).mul(&rows));
                offsets[v] += w;
            }
        }
    }
    Ok(Some(ModuleMorphism { maps }))
}

/// Vertex `v` when the indecomposable `m` is isomorphic to `P(v)`.
pub fn projective_vertex(m: &Module) -> Option<usize> {
    let top = m.top_dims();
    if top.iter().sum::<usize>() != 1 {
        return None;
    }
    let v = top.iter().position(|&d| d == 1)?;
    (m.algebra().projective_dims(v) == m.dims()).then_some(v)
}

#[derive(Debug, Clone)]
pub struct Summand {
    pub witness: Module,
    pub multiplicity: usize,
    pub projective_vertex: Option<usize>,
    pub class_id: Option<ClassId>,
    /// One monomorphism `witness -> M` per copy.
    pub embeddings: Vec<ModuleMorphism>,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
    module: Module,
}

impl Decomposition {
    pub fn module(&self) -> &Module {
        &self.module
    }

    /// `(vertex, multiplicity)` for projective summands.
    pub fn projective_part(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .summands
            .iter()
            .filter_map(|s| s.projective_vertex.map(|v| (v, s.multiplicity)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn non_projective(&self) -> impl Iterator<Item = &Summand> {
        self.summands.iter().filter(|s| s.projective_vertex.is_none())
    }

    pub fn indecomposable_count(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    /// `⊕ witness^multiplicity` in summand order.
    pub fn assembled(&self) -> Module {
        let parts: Vec<Module> = self
            .summands
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.witness.clone(), s.multiplicity))
            .collect();
        direct_sum(self.module.algebra(), &parts)
    }

    /// The explicit isomorphism `assembled() -> M`.
    pub fn isomorphism(&self) -> ModuleMorphism {
        let f = self.module.field();
        let maps = self
            .module
            .dims()
            .iter()
            .enumerate()
            .map(|(v, &d)| {
                self.summands
                    .iter()
                    .flat_map(|s| s.embeddings.iter())
                    .fold(Matrix::zeros(f, d, 0), |acc, e| acc.hstack(&e.maps[v]))
            })
            .collect();
        ModuleMorphism { maps }
    }

    /// Checks that [`Self::isomorphism`] is an invertible module map.
    pub fn verify(&self) -> bool {
        let iso = self.isomorphism();
        iso.is_morphism(&self.assembled(), &self.module) && iso.is_isomorphism()
    }
}

/// Decomposes `M` into indecomposables grouped by isomorphism class.
pub fn decompose(m: &Module) -> Result<Decomposition> {
    let leaves = split_leaves(m)?;
    let mut summands: Vec<Summand> = Vec::new();
    'leaf: for (leaf, inc) in leaves {
        for s in summands.iter_mut() {
            if let Some(iso) = indecomposable_isomorphism(&s.witness, &leaf)? {
                s.multiplicity += 1;
                s.embeddings.push(inc.compose(&iso));
                continue 'leaf;
            }
        }
        summands.push(Summand {
            projective_vertex: projective_vertex(&leaf),
            witness: leaf.clone(),
            multiplicity: 1,
            class_id: None,
            embeddings: vec![inc],
        });
    }
    Ok(Decomposition {
        summands,
        module: m.clone(),
    })
}

/// Isomorphism test for arbitrary modules.
pub fn is_isomorphic(m: &Module, n: &Module) -> Result<bool> {
    m.same_algebra(n)?;
    if m.dims() != n.dims() {
        return Ok(false);
    }
    if m.is_zero() {
        return Ok(true);
    }
    let dm = decompose(m)?;
    let dn = decompose(n)?;
    if dm.summands.len() != dn.summands.len() {
        return Ok(false);
    }
    let mut used = vec![false; dn.summands.len()];
    for s in &dm.summands {
        let mut found = false;
        for (k, t) in dn.summands.iter().enumerate() {
            if !used[k] && t.multiplicity == s.multiplicity && indecomposable_isomorphism(&s.witness, &t.witness)?.is_some() {
                used[k] = true;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

pub type ClassId = usize;

#[derive(Debug, Clone)]
pub struct ClassEntry {
    pub witness: Module,
    pub projective_vertex: Option<usize>,
}

impl ClassEntry {
    pub fn is_projective(&self) -> bool {
        self.projective_vertex.is_some()
    }
}

/// Iso-classes of indecomposables in insertion order.
#[derive(Debug, Clone)]
pub struct ClassRegistry {
    algebra: Arc<PathAlgebra>,
    classes: Vec<ClassEntry>,
    by_dims: HashMap<Vec<usize>, Vec<ClassId>>,
}

impl ClassRegistry {
    pub fn new(algebra: &Arc<PathAlgebra>) -> Self {
        ClassRegistry {
            algebra: algebra.clone(),
            classes: Vec::new(),
            by_dims: HashMap::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, id: ClassId) -> &ClassEntry {
        &self.classes[id]
    }

    pub fn classes(&self) -> &[ClassEntry] {
        &self.classes
    }

    /// Existing class of an indecomposable, if registered.
    pub fn lookup(&self, m: &Module) -> Result<Option<ClassId>> {
        if let Some(ids) = self.by_dims.get(m.dims()) {
            for &id in ids {
                if indecomposable_isomorphism(&self.classes[id].witness, m)?.is_some() {
                    return Ok(Some(id));
                }
            }
        }
        Ok(None)
    }

    fn insert(&mut self, m: &Module) -> Result<ClassId> {
        if let Some(id) = self.lookup(m)? {
            return Ok(id);
        }
        let id = self.classes.len();
        self.classes.push(ClassEntry {
            witness: m.clone(),
            projective_vertex: projective_vertex(m),
        });
        self.by_dims.entry(m.dims().to_vec()).or_default().push(id);
        Ok(id)
    }

    /// Registers an indecomposable module and returns its class.
    pub fn register(&mut self, m: &Module) -> Result<ClassId> {
        m.same_algebra_as(&self.algebra)?;
        if !is_indecomposable(m)? {
            return Err(Error::NotIndecomposable);
        }
        self.insert(m)
    }

    /// Decomposes `M` and tags every summand with its registered class.
    pub fn decompose(&mut self, m: &Module) -> Result<Decomposition> {
        m.same_algebra_as(&self.algebra)?;
        let mut d = decompose(m)?;
        for s in d.summands.iter_mut() {
            s.class_id = Some(self.insert(&s.witness)?);
        }
        d.summands.sort_by_key(|s| s.class_id);
        Ok(d)
    }
}
