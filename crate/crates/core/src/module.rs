//! Representations of a bound quiver algebra and the linear algebra of their
//! morphisms: Hom spaces, submodules and quotients, radicals, minimal
//! projective covers, syzygies, Ext^1 dimensions and universal extensions.
//!
//! Column-vector convention: an arrow `a: i -> j` acts by a `dims[j] x dims[i]`
//! matrix.

use std::sync::Arc;

use crate::algebra::{Path, PathAlgebra};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;

#[derive(Clone)]
pub struct Module {
    algebra: Arc<PathAlgebra>,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
    label: Option<String>,
}

impl std::fmt::Debug for Module {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Module")
            .field("dims", &self.dims)
            .field("label", &self.label)
            .finish()
    }
}

/// Per-vertex linear maps `f_v: M_v -> N_v` commuting with the arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMorphism {
    pub maps: Vec<Matrix>,
}

/// Minimal projective cover `0 -> kernel -> cover -> M -> 0`.
#[derive(Debug, Clone)]
pub struct CoverData {
    pub cover: Module,
    /// Number of copies of `P(v)` in the cover, per vertex.
    pub multiplicities: Vec<usize>,
    pub epi: ModuleMorphism,
    pub kernel: Module,
    pub kernel_inclusion: ModuleMorphism,
}

/// `0 -> Y^d -> E -> X -> 0` built from a basis of `Ext^1(X, Y)`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub middle: Module,
    pub copies: usize,
    pub inclusion: ModuleMorphism,
    pub projection: ModuleMorphism,
}

/// Quotient module together with its projection and a linear section.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub module: Module,
    pub projection: ModuleMorphism,
    /// Per-vertex linear right inverse of the projection (not a morphism).
    pub section: Vec<Matrix>,
}

/// Submodule given by per-vertex bases, with its inclusion.
#[derive(Debug, Clone)]
pub struct Submodule {
    pub module: Module,
    pub inclusion: ModuleMorphism,
}

impl Module {
    /// Validates shapes and relations.
    pub fn new(algebra: Arc<PathAlgebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        let m = Module::new_unchecked(algebra, dims, maps);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(algebra: Arc<PathAlgebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Self {
        Module {
            algebra,
            dims,
            maps,
            label: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let alg = &self.algebra;
        if self.dims.len() != alg.vertex_count() {
            return Err(Error::InvalidModule(format!(
                "expected {} vertex dimensions, got {}",
                alg.vertex_count(),
                self.dims.len()
            )));
        }
        if self.maps.len() != alg.arrow_count() {
            return Err(Error::InvalidModule("one matrix per arrow is required".into()));
        }
        for (a, m) in alg.quiver().arrows().iter().zip(&self.maps) {
            if m.rows() != self.dims[a.target] || m.cols() != self.dims[a.source] {
                return Err(Error::InvalidModule(format!(
                    "arrow {} needs a {}x{} matrix",
                    a.name, self.dims[a.target], self.dims[a.source]
                )));
            }
            if m.field() != alg.field() {
                return Err(Error::InvalidModule("matrix over the wrong field".into()));
            }
        }
        for rel in alg.relations() {
            if !self.eval_relation(&rel.terms).is_zero() {
                return Err(Error::InvalidModule("a relation does not vanish".into()));
            }
        }
        Ok(())
    }

    pub fn zero(algebra: &Arc<PathAlgebra>) -> Self {
        let n = algebra.vertex_count();
        Module::with_dims_zero_maps(algebra, vec![0; n])
    }

    fn with_dims_zero_maps(algebra: &Arc<PathAlgebra>, dims: Vec<usize>) -> Self {
        let f = algebra.field();
        let maps = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(f, dims[a.target], dims[a.source]))
            .collect();
        Module::new_unchecked(algebra.clone(), dims, maps)
    }

    /// The simple module `S(v)`.
    pub fn simple(algebra: &Arc<PathAlgebra>, v: usize) -> Result<Self> {
        algebra.check_vertex(v)?;
        let mut dims = vec![0; algebra.vertex_count()];
        dims[v] = 1;
        Ok(Module::with_dims_zero_maps(algebra, dims).labeled(format!("S({})", v + 1)))
    }

    /// The indecomposable projective `P(v) = A e_v`.
    pub fn projective(algebra: &Arc<PathAlgebra>, v: usize) -> Result<Self> {
        algebra.check_vertex(v)?;
        let data = algebra.projective_data_ref(v);
        let dims = data.basis.iter().map(|b| b.len()).collect();
        Ok(Module::new_unchecked(algebra.clone(), dims, data.maps.clone()).labeled(format!("P({})", v + 1)))
    }

    /// The regular module `A = ⊕ P(v)`.
    pub fn regular(algebra: &Arc<PathAlgebra>) -> Self {
        let ps: Vec<Module> = (0..algebra.vertex_count())
            .map(|v| Module::projective(algebra, v).expect("vertex in range"))
            .collect();
        direct_sum(algebra, &ps).labeled("A".into())
    }

    /// `⊕_v P(v)/rad^k P(v)`.
    pub fn radical_power_quotient(algebra: &Arc<PathAlgebra>, k: usize) -> Self {
        let parts: Vec<Module> = (0..algebra.vertex_count())
            .map(|v| {
                let p = Module::projective(algebra, v).expect("vertex in range");
                let rk = p.radical_power_basis(k);
                p.quotient_by_basis(&rk).module
            })
            .collect();
        direct_sum(algebra, &parts).labeled(format!("A/rad^{k}"))
    }

    pub fn labeled(mut self, label: String) -> Self {
        self.label = Some(label);
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Matrix {
        &self.maps[arrow]
    }

    pub fn same_algebra(&self, other: &Module) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn same_algebra_as(&self, algebra: &Arc<PathAlgebra>) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Matrix of a path acting on the module.
    pub fn eval_path(&self, path: &Path) -> Matrix {
        let mut acc = Matrix::identity(self.field(), self.dims[path.source]);
        for &a in &path.arrows {
            acc = self.maps[a].mul(&acc);
        }
        acc
    }

    pub fn eval_relation(&self, terms: &[(i64, Path)]) -> Matrix {
        let (src, tgt) = (terms[0].1.source, terms[0].1.target);
        let f = self.field();
        let mut acc = Matrix::zeros(f, self.dims[tgt], self.dims[src]);
        for (c, path) in terms {
            acc = acc.add(&self.eval_path(path).scale(f.from_i64(*c)));
        }
        acc
    }

    fn identity_maps(&self) -> Vec<Matrix> {
        self.dims.iter().map(|&d| Matrix::identity(self.field(), d)).collect()
    }

    pub fn identity(&self) -> ModuleMorphism {
        ModuleMorphism {
            maps: self.identity_maps(),
        }
    }

    /// Per-vertex basis of `rad M = Σ_a Im(M_a)`.
    pub fn radical_basis(&self) -> Vec<Matrix> {
        let f = self.field();
        let mut spans: Vec<Matrix> = self.dims.iter().map(|&d| Matrix::zeros(f, d, 0)).collect();
        for (a, m) in self.algebra.quiver().arrows().iter().zip(&self.maps) {
            spans[a.target] = spans[a.target].hstack(m);
        }
        spans.into_iter().map(|s| s.column_basis()).collect()
    }

    /// Per-vertex basis of `rad^k M`; `k = 0` gives the whole module.
    pub fn radical_power_basis(&self, k: usize) -> Vec<Matrix> {
        let mut current = self.identity_maps();
        for _ in 0..k {
            let f = self.field();
            let mut next: Vec<Matrix> = self.dims.iter().map(|&d| Matrix::zeros(f, d, 0)).collect();
            for (a, m) in self.algebra.quiver().arrows().iter().zip(&self.maps) {
                next[a.target] = next[a.target].hstack(&m.mul(&current[a.source]));
            }
            current = next.into_iter().map(|s| s.column_basis()).collect();
        }
        current
    }

    pub fn radical(&self) -> Submodule {
        let basis = self.radical_basis();
        self.submodule_from_basis(&basis)
    }

    /// `M / rad M`, a semisimple module.
    pub fn top(&self) -> Module {
        self.quotient_by_basis(&self.radical_basis()).module
    }

    /// Dimension vector of the top.
    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_basis()
            .iter()
            .zip(&self.dims)
            .map(|(r, &d)| d - r.cols())
            .collect()
    }

    /// Submodule spanned by per-vertex column bases that are already closed
    /// under the arrows and linearly independent.
    pub fn submodule_from_basis(&self, basis: &[Matrix]) -> Submodule {
        let dims: Vec<usize> = basis.iter().map(|b| b.cols()).collect();
        let maps = self
            .algebra
            .quiver()
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| {
                let image = m.mul(&basis[a.source]);
                basis[a.target]
                    .solve(&image)
                    .expect("submodule basis is closed under arrows")
            })
            .collect();
        Submodule {
            module: Module::new_unchecked(self.algebra.clone(), dims, maps),
            inclusion: ModuleMorphism {
                maps: basis.to_vec(),
            },
        }
    }

    /// Closes per-vertex spans under the arrow actions and returns a basis.
    pub fn closure(&self, spans: &[Matrix]) -> Vec<Matrix> {
        let mut current: Vec<Matrix> = spans.iter().map(|s| s.column_basis()).collect();
        loop {
            let mut changed = false;
            for (a, m) in self.algebra.quiver().arrows().iter().zip(&self.maps) {
                let image = m.mul(&current[a.source]);
                let joined = current[a.target].hstack(&image).column_basis();
                if joined.cols() > current[a.target].cols() {
                    current[a.target] = joined;
                    changed = true;
                }
            }
            if !changed {
                return current;
            }
        }
    }

    /// Submodule generated by vectors `(vertex, coordinates)`.
    pub fn submodule_generated(&self, vectors: &[(usize, Vec<u32>)]) -> Result<Submodule> {
        let f = self.field();
        let mut spans: Vec<Vec<Vec<u32>>> = vec![Vec::new(); self.dims.len()];
        for (v, vec) in vectors {
            self.algebra.check_vertex(*v)?;
            if vec.len() != self.dims[*v] {
                return Err(Error::InvalidModule(format!(
                    "vector of length {} at vertex {} of dimension {}",
                    vec.len(),
                    v + 1,
                    self.dims[*v]
                )));
            }
            spans[*v].push(vec.iter().map(|&x| x % f.prime()).collect());
        }
        let spans: Vec<Matrix> = spans
            .iter()
            .zip(&self.dims)
            .map(|(cols, &d)| Matrix::from_columns(f, d, cols))
            .collect();
        let basis = self.closure(&spans);
        Ok(self.submodule_from_basis(&basis))
    }

    /// Quotient by a submodule given as per-vertex column bases.
    pub fn quotient_by_basis(&self, basis: &[Matrix]) -> Quotient {
        let f = self.field();
        let mut proj = Vec::new();
        let mut section = Vec::new();
        for (b, &d) in basis.iter().zip(&self.dims) {
            let comp = b.complement_units();
            let mut units = Matrix::zeros(f, d, comp.len());
            for (k, &i) in comp.iter().enumerate() {
                units.set(i, k, 1);
            }
            let full = b.hstack(&units);
            let inv = full.inverse().expect("basis plus complement is invertible");
            proj.push(inv.submatrix(b.cols()..d, 0..d));
            section.push(units);
        }
        let dims: Vec<usize> = section.iter().map(|s| s.cols()).collect();
        let maps = self
            .algebra
            .quiver()
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| proj[a.target].mul(m).mul(&section[a.source]))
            .collect();
        Quotient {
            module: Module::new_unchecked(self.algebra.clone(), dims, maps),
            projection: ModuleMorphism { maps: proj },
            section,
        }
    }

    /// Quotient by the image of a monomorphism `sub -> self`.
    pub fn quotient(&self, sub: &Module, inclusion: &ModuleMorphism) -> Result<Quotient> {
        self.same_algebra(sub)?;
        if !inclusion.is_injective() {
            return Err(Error::NotInjective);
        }
        Ok(self.quotient_by_basis(&inclusion.maps))
    }

    /// `M` modulo the submodule generated by `M_v` for `v` in `vertices`.
    pub fn trace_quotient(&self, vertices: &[usize]) -> Module {
        let f = self.field();
        let spans: Vec<Matrix> = self
            .dims
            .iter()
            .enumerate()
            .map(|(v, &d)| {
                if vertices.contains(&v) {
                    Matrix::identity(f, d)
                } else {
                    Matrix::zeros(f, d, 0)
                }
            })
            .collect();
        let basis = self.closure(&spans);
        self.quotient_by_basis(&basis).module
    }

    /// Generators of the top in column-echelon order: for each vertex, the unit
    /// vectors completing a basis of the radical.
    pub fn top_generators(&self) -> Vec<Vec<usize>> {
        self.radical_basis().iter().map(|r| r.complement_units()).collect()
    }

    /// Image of a basis path of `P(v)` applied to `x ∈ M_v`.
    fn act(&self, path: &Path, x: &[u32]) -> Vec<u32> {
        let mut cur = x.to_vec();
        for &a in &path.arrows {
            cur = self.maps[a].mul_vec(&cur);
        }
        cur
    }

    /// Minimal projective cover, with the top basis chosen by [`Self::top_generators`].
    pub fn projective_cover(&self) -> CoverData {
        let alg = self.algebra.clone();
        let f = self.field();
        let n = alg.vertex_count();
        let gens = self.top_generators();
        let multiplicities: Vec<usize> = gens.iter().map(|g| g.len()).collect();
        let mut summands = Vec::new();
        let mut columns: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
        for (v, units) in gens.iter().enumerate() {
            let data = alg.projective_data_ref(v);
            for &u in units {
                summands.push(Module::projective(&alg, v).expect("vertex in range"));
                let mut x = vec![0u32; self.dims[v]];
                x[u] = 1;
                for (t, paths) in data.basis.iter().enumerate() {
                    for &bi in paths {
                        columns[t].push(self.act(&alg.basis()[bi], &x));
                    }
                }
            }
        }
        let cover = direct_sum(&alg, &summands);
        let epi = ModuleMorphism {
            maps: columns
                .iter()
                .enumerate()
                .map(|(t, cols)| Matrix::from_columns(f, self.dims[t], cols))
                .collect(),
        };
        let Submodule { module, inclusion } = kernel(&cover, &epi);
        CoverData {
            cover,
            multiplicities,
            epi,
            kernel: module,
            kernel_inclusion: inclusion,
        }
    }

    /// `Ω^k M` through minimal covers, keeping projective summands.
    pub fn syzygy(&self, k: usize) -> Module {
        let mut m = self.clone();
        for _ in 0..k {
            if m.is_zero() {
                break;
            }
            m = m.projective_cover().kernel;
        }
        m
    }

    pub fn is_projective(&self) -> bool {
        let cover = self.projective_cover();
        cover.kernel.is_zero()
    }

    /// Dimension of `Hom(P0, N)` for `P0 = ⊕ P(v)^{mult_v}`.
    fn hom_from_projective_dim(multiplicities: &[usize], n: &Module) -> usize {
        multiplicities.iter().zip(n.dims()).map(|(m, d)| m * d).sum()
    }

    /// Coordinates of a module whose vertex spaces are stacked in vertex order.
    pub fn total_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    /// Shuffles every vertex basis by the given invertible matrices, returning
    /// the isomorphic module `T^{-1} M T`.
    pub fn change_basis(&self, change: &[Matrix]) -> Result<Module> {
        let inv: Vec<Matrix> = change
            .iter()
            .map(|t| t.inverse().ok_or_else(|| Error::InvalidModule("singular change of basis".into())))
            .collect::<Result<_>>()?;
        let maps = self
            .algebra
            .quiver()
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| inv[a.target].mul(m).mul(&change[a.source]))
            .collect();
        Ok(Module::new_unchecked(self.algebra.clone(), self.dims.clone(), maps))
    }
}

impl ModuleMorphism {
    pub fn zero(source: &Module, target: &Module) -> Self {
        let f = source.field();
        ModuleMorphism {
            maps: source
                .dims()
                .iter()
                .zip(target.dims())
                .map(|(&s, &t)| Matrix::zeros(f, t, s))
                .collect(),
        }
    }

    /// Checks shapes and commutation with every arrow.
    pub fn is_morphism(&self, source: &Module, target: &Module) -> bool {
        if self.maps.len() != source.dims().len() {
            return false;
        }
        for (v, m) in self.maps.iter().enumerate() {
            if m.rows() != target.dims()[v] || m.cols() != source.dims()[v] {
                return false;
            }
        }
        source
            .algebra()
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .all(|(ai, a)| self.maps[a.target].mul(source.map(ai)) == target.map(ai).mul(&self.maps[a.source]))
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &ModuleMorphism) -> ModuleMorphism {
        ModuleMorphism {
            maps: self.maps.iter().zip(&first.maps).map(|(g, f)| g.mul(f)).collect(),
        }
    }

    pub fn add(&self, other: &ModuleMorphism) -> ModuleMorphism {
        ModuleMorphism {
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> ModuleMorphism {
        ModuleMorphism {
            maps: self.maps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.maps.iter().all(|m| m.is_invertible())
    }

    pub fn rank(&self) -> usize {
        self.maps.iter().map(|m| m.rank()).sum()
    }

    /// Flattened coordinates, vertex by vertex in row-major order.
    pub fn flatten(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for m in &self.maps {
            for i in 0..m.rows() {
                out.extend_from_slice(m.row(i));
            }
        }
        out
    }
}

/// Direct sum with summand bases concatenated at every vertex.
pub fn direct_sum(algebra: &Arc<PathAlgebra>, modules: &[Module]) -> Module {
    let n = algebra.vertex_count();
    let f = algebra.field();
    let dims: Vec<usize> = (0..n).map(|v| modules.iter().map(|m| m.dims[v]).sum()).collect();
    let maps = (0..algebra.arrow_count())
        .map(|a| {
            let blocks: Vec<Matrix> = modules.iter().map(|m| m.maps[a].clone()).collect();
            Matrix::block_diag(f, &blocks)
        })
        .collect();
    Module::new_unchecked(algebra.clone(), dims, maps)
}

/// `M^k`
pub fn power(module: &Module, k: usize) -> Module {
    let copies = vec![module.clone(); k];
    direct_sum(module.algebra(), &copies)
}

/// Kernel of `f: M -> N` with its inclusion into `M`.
pub fn kernel(source: &Module, f: &ModuleMorphism) -> Submodule {
    let basis: Vec<Matrix> = f.maps.iter().map(|m| m.nullspace()).collect();
    source.submodule_from_basis(&basis)
}

/// Image of `f: M -> N` as a submodule of `N`.
pub fn image(target: &Module, f: &ModuleMorphism) -> Submodule {
    let basis: Vec<Matrix> = f.maps.iter().map(|m| m.column_basis()).collect();
    target.submodule_from_basis(&basis)
}

/// Cokernel of `f: M -> N`.
pub fn cokernel(target: &Module, f: &ModuleMorphism) -> Quotient {
    let basis: Vec<Matrix> = f.maps.iter().map(|m| m.column_basis()).collect();
    target.quotient_by_basis(&basis)
}

/// Basis of `Hom(M, N)`, computed from the minimal projective presentation of
/// `M`: a morphism is a choice of images of the top generators that kills the
/// syzygy.
pub fn hom_basis(m: &Module, n: &Module) -> Result<Vec<ModuleMorphism>> {
    m.same_algebra(n)?;
    let cover = m.projective_cover();
    Ok(hom_basis_with_cover(m, n, &cover))
}

pub(crate) fn hom_basis_with_cover(m: &Module, n: &Module, cover: &CoverData) -> Vec<ModuleMorphism> {
    let alg = m.algebra().clone();
    let f = m.field();
    let nv = alg.vertex_count();
    // Unknowns: the image of each top generator, a vector in N at its vertex.
    let mut gens: Vec<usize> = Vec::new();
    for (v, &k) in cover.multiplicities.iter().enumerate() {
        gens.extend(std::iter::repeat_n(v, k));
    }
    let mut offsets = Vec::with_capacity(gens.len());
    let mut unknowns = 0;
    for &v in &gens {
        offsets.push(unknowns);
        unknowns += n.dims[v];
    }
    if unknowns == 0 {
        return Vec::new();
    }
    // For the basis path q of generator g, the image of q in N_t is N_q x_g,
    // a linear function of the unknowns.
    let mut lifted: Vec<Vec<Matrix>> = vec![Vec::new(); nv];
    for (g, &v) in gens.iter().enumerate() {
        let data = alg.projective_data_ref(v);
        for (t, paths) in data.basis.iter().enumerate() {
            for &bi in paths {
                let nq = n.eval_path(&alg.basis()[bi]);
                let mut block = Matrix::zeros(f, n.dims[t], unknowns);
                block.paste(0, offsets[g], &nq);
                lifted[t].push(block);
            }
        }
    }
    // Constraint: for every kernel basis vector w at vertex t,
    // Σ_j w_j * lifted[t][j] = 0 (a dims_N[t] x unknowns block).
    let mut rows: Vec<Matrix> = Vec::new();
    for t in 0..nv {
        let inc = &cover.kernel_inclusion.maps[t];
        for k in 0..inc.cols() {
            let mut acc = Matrix::zeros(f, n.dims[t], unknowns);
            for j in 0..inc.rows() {
                let w = inc.get(j, k);
                if w != 0 {
                    acc = acc.add(&lifted[t][j].scale(w));
                }
            }
            rows.push(acc);
        }
    }
    let system = rows
        .into_iter()
        .fold(Matrix::zeros(f, 0, unknowns), |acc, r| acc.vstack(&r));
    let solutions = system.nullspace();
    // A section of the epi at each vertex expresses M_t in terms of P0_t.
    let sections: Vec<Matrix> = cover
        .epi
        .maps
        .iter()
        .map(|e| e.solve(&Matrix::identity(f, e.rows())).expect("cover is surjective"))
        .collect();
    (0..solutions.cols())
        .map(|s| {
            let x = solutions.column(s);
            let maps = (0..nv)
                .map(|t| {
                    // Φ_t : P0_t -> N_t, then precompose with the section.
                    let cols: Vec<Vec<u32>> = lifted[t].iter().map(|blk| blk.mul_vec(&x)).collect();
                    let phi = Matrix::from_columns(f, n.dims[t], &cols);
                    phi.mul(&sections[t])
                })
                .collect();
            ModuleMorphism { maps }
        })
        .collect()
}

/// Basis of `Hom(M, N)` by solving the commutation equations
/// `f_j M_a = N_a f_i` directly. Independent of [`hom_basis`].
pub fn hom_basis_by_commutation(m: &Module, n: &Module) -> Result<Vec<ModuleMorphism>> {
    m.same_algebra(n)?;
    let alg = m.algebra();
    let f = m.field();
    let nv = alg.vertex_count();
    let mut offsets = vec![0; nv + 1];
    for v in 0..nv {
        offsets[v + 1] = offsets[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = offsets[nv];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let eq_count: usize = alg
        .quiver()
        .arrows()
        .iter()
        .map(|a| n.dims[a.target] * m.dims[a.source])
        .sum();
    let mut sys = Matrix::zeros(f, eq_count, unknowns);
    let mut row = 0;
    for (ai, a) in alg.quiver().arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let ma = m.map(ai);
        let na = n.map(ai);
        for r in 0..n.dims[t] {
            for c in 0..m.dims[s] {
                // Σ_k f_t[r,k] M_a[k,c] - Σ_k N_a[r,k] f_s[k,c]
                for k in 0..m.dims[t] {
                    let idx = offsets[t] + r * m.dims[t] + k;
                    let v = ma.get(k, c);
                    sys.set(row, idx, f.add(sys.get(row, idx), v));
                }
                for k in 0..n.dims[s] {
                    let idx = offsets[s] + k * m.dims[s] + c;
                    let v = na.get(r, k);
                    sys.set(row, idx, f.sub(sys.get(row, idx), v));
                }
                row += 1;
            }
        }
    }
    let sol = sys.nullspace();
    Ok((0..sol.cols())
        .map(|s| {
            let x = sol.column(s);
            let maps = (0..nv)
                .map(|v| {
                    let mut mat = Matrix::zeros(f, n.dims[v], m.dims[v]);
                    for r in 0..n.dims[v] {
                        for c in 0..m.dims[v] {
                            mat.set(r, c, x[offsets[v] + r * m.dims[v] + c]);
                        }
                    }
                    mat
                })
                .collect();
            ModuleMorphism { maps }
        })
        .collect())
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    Ok(hom_basis(m, n)?.len())
}

/// `dim Ext^1(M, N) = dim Hom(ΩM, N) - dim Hom(P0, N) + dim Hom(M, N)`.
pub fn ext1_dim(m: &Module, n: &Module) -> Result<usize> {
    m.same_algebra(n)?;
    let cover = m.projective_cover();
    let hom_omega = hom_basis(&cover.kernel, n)?.len();
    let hom_p0 = Module::hom_from_projective_dim(&cover.multiplicities, n);
    let hom_m = hom_basis_with_cover(m, n, &cover).len();
    Ok(hom_omega + hom_m - hom_p0)
}

/// Universal extension of `X` by `Y`: the pushout of `0 -> ΩX -> P0 -> X -> 0`
/// along `ΩX -> Y^d`, whose components represent a basis of `Ext^1(X, Y)`.
pub fn universal_extension(x: &Module, y: &Module) -> Result<Extension> {
    x.same_algebra(y)?;
    let alg = x.algebra().clone();
    let f = x.field();
    let cover = x.projective_cover();
    let omega = &cover.kernel;
    let iota = &cover.kernel_inclusion;

    // Restrictions of Hom(P0, Y) to ΩX span the trivial classes.
    let from_p0 = hom_basis(&cover.cover, y)?;
    let restricted: Vec<Vec<u32>> = from_p0.iter().map(|h| h.compose(iota).flatten()).collect();
    let candidates = hom_basis(omega, y)?;
    let len: usize = (0..alg.vertex_count()).map(|v| y.dims[v] * omega.dims[v]).sum();
    let mut span = Matrix::from_columns(f, len, &restricted).column_basis();
    let mut chosen = Vec::new();
    for c in candidates {
        let v = c.flatten();
        let joined = span.hstack(&Matrix::from_columns(f, len, &[v]));
        if joined.rank() > span.cols() {
            span = joined;
            chosen.push(c);
        }
    }
    let d = chosen.len();
    if d == 0 {
        return Ok(Extension {
            middle: x.clone(),
            copies: 0,
            inclusion: ModuleMorphism::zero(&Module::zero(&alg), x),
            projection: x.identity(),
        });
    }

    let yd = power(y, d);
    let sum = direct_sum(&alg, &[cover.cover.clone(), yd.clone()]);
    // (ι, -g): ΩX -> P0 ⊕ Y^d
    let twist = ModuleMorphism {
        maps: (0..alg.vertex_count())
            .map(|v| {
                let mut blocks = iota.maps[v].clone();
                for g in &chosen {
                    blocks = blocks.vstack(&g.maps[v].scale(f.neg(1)));
                }
                blocks
            })
            .collect(),
    };
    let q = sum.quotient_by_basis(&twist.maps.iter().map(|m| m.column_basis()).collect::<Vec<_>>());
    let p0_dims = cover.cover.dims.clone();
    let inclusion = ModuleMorphism {
        maps: (0..alg.vertex_count())
            .map(|v| {
                let mut embed = Matrix::zeros(f, sum.dims[v], yd.dims[v]);
                embed.paste(p0_dims[v], 0, &Matrix::identity(f, yd.dims[v]));
                q.projection.maps[v].mul(&embed)
            })
            .collect(),
    };
    let projection = ModuleMorphism {
        maps: (0..alg.vertex_count())
            .map(|v| {
                let eps0 = cover.epi.maps[v].hstack(&Matrix::zeros(f, x.dims[v], yd.dims[v]));
                eps0.mul(&q.section[v])
            })
            .collect(),
    };
    Ok(Extension {
        middle: q.module,
        copies: d,
        inclusion,
        projection,
    })
}
