//! Bound quiver algebras: quivers, relations, residue path bases and the
//! multiplication table of `kQ/I` over a prime field.
//!
//! Paths are stored in application order: `arrows[0]` is applied first. The
//! textual convention is function order, so the relation written `g*d*b` is the
//! path `[b, d, g]` here. Vertices are 0-based in the API and 1-based in text.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;

/// Default bound on the nilpotency degree search.
pub const DEFAULT_DEPTH_CAP: usize = 32;

/// Give up on enumerating paths beyond this many; the ideal is then treated as
/// not admissible.
const PATH_LIMIT: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<Arrow>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::BadQuiver("at least one vertex is required".into()));
        }
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= vertex_count || a.target >= vertex_count {
                return Err(Error::BadQuiver(format!(
                    "arrow {} has an endpoint outside 1..={vertex_count}",
                    a.name
                )));
            }
            if arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::BadQuiver(format!("duplicate arrow name {}", a.name)));
            }
        }
        Ok(Quiver {
            vertex_count,
            arrows,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, idx: usize) -> &Arrow {
        &self.arrows[idx]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

/// A path of the quiver, possibly trivial (`e_v`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    /// Arrow indices in application order.
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    /// Builds a path from arrows in application order, checking composability.
    pub fn from_arrows(quiver: &Quiver, arrows: Vec<usize>) -> Option<Self> {
        let first = *arrows.first()?;
        let mut at = quiver.arrow(first).source;
        for &a in &arrows {
            let arrow = quiver.arrows.get(a)?;
            if arrow.source != at {
                return None;
            }
            at = arrow.target;
        }
        Some(Path {
            source: quiver.arrow(first).source,
            target: at,
            arrows,
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `after ∘ self`: first `self`, then `after`. `None` if not composable.
    pub fn then(&self, after: &Path) -> Option<Path> {
        if self.target != after.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&after.arrows);
        Some(Path {
            source: self.source,
            target: after.target,
            arrows,
        })
    }

    /// Function-order rendering, e.g. `g*d*b`; trivial paths render as `e1`.
    pub fn render(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e{}", self.source + 1);
        }
        self.arrows
            .iter()
            .rev()
            .map(|&a| quiver.arrow(a).name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A linear combination of parallel paths of length at least two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(i64, Path)>,
}

impl Relation {
    pub fn new(terms: Vec<(i64, Path)>) -> Self {
        Relation { terms }
    }

    pub fn monomial(path: Path) -> Self {
        Relation {
            terms: vec![(1, path)],
        }
    }

    fn validate(&self, quiver: &Quiver) -> Result<()> {
        let Some((_, first)) = self.terms.first() else {
            return Err(Error::BadRelation("empty relation".into()));
        };
        for (c, path) in &self.terms {
            if *c == 0 {
                return Err(Error::BadRelation("zero coefficient".into()));
            }
            if path.len() < 2 {
                return Err(Error::BadRelation(format!(
                    "term {} has length < 2",
                    path.render(quiver)
                )));
            }
            if Path::from_arrows(quiver, path.arrows.clone()).as_ref() != Some(path) {
                return Err(Error::BadRelation(format!(
                    "term {} is not a path",
                    path.render(quiver)
                )));
            }
            if path.source != first.source || path.target != first.target {
                return Err(Error::BadRelation(format!(
                    "terms {} and {} are not parallel",
                    first.render(quiver),
                    path.render(quiver)
                )));
            }
        }
        Ok(())
    }

    fn min_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0)
    }
}

/// Sparse element of the algebra in the residue path basis.
pub type Element = Vec<(usize, u32)>;

/// Data of an indecomposable projective `P(i) = A e_i`.
#[derive(Debug, Clone)]
pub(crate) struct ProjectiveData {
    /// Algebra-basis indices with source `i`, grouped by target vertex.
    pub(crate) basis: Vec<Vec<usize>>,
    pub(crate) maps: Vec<Matrix>,
}

#[derive(Debug)]
pub struct PathAlgebra {
    field: PrimeField,
    quiver: Quiver,
    relations: Vec<Relation>,
    basis: Vec<Path>,
    /// Index of every path of length below the nilpotency degree.
    path_index: HashMap<Path, PathClass>,
    mult_table: Vec<Vec<Element>>,
    nilpotency: usize,
    projectives: Vec<ProjectiveData>,
}

#[derive(Debug, Clone)]
enum PathClass {
    Basis(usize),
    Reduced(Element),
}

/// Paths of the quiver grouped by length, grown on demand.
struct PathEnumerator<'q> {
    quiver: &'q Quiver,
    by_len: Vec<Vec<Path>>,
    total: usize,
}

impl<'q> PathEnumerator<'q> {
    fn new(quiver: &'q Quiver) -> Self {
        let trivial: Vec<Path> = (0..quiver.vertex_count()).map(Path::trivial).collect();
        let total = trivial.len();
        PathEnumerator {
            quiver,
            by_len: vec![trivial],
            total,
        }
    }

    fn ensure(&mut self, len: usize) -> bool {
        while self.by_len.len() <= len {
            let last = self.by_len.last().unwrap();
            let mut next = Vec::new();
            for p in last {
                for (ai, a) in self.quiver.arrows().iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push(Path {
                            source: p.source,
                            target: a.target,
                            arrows,
                        });
                    }
                }
            }
            self.total += next.len();
            self.by_len.push(next);
            if self.total > PATH_LIMIT {
                return false;
            }
        }
        true
    }

    /// Paths ending at `v` with length at most `max`.
    fn ending_at(&self, v: usize, max: usize) -> impl Iterator<Item = &Path> {
        self.by_len[..=max.min(self.by_len.len() - 1)]
            .iter()
            .flatten()
            .filter(move |p| p.target == v)
    }

    fn starting_at(&self, v: usize, max: usize) -> impl Iterator<Item = &Path> {
        self.by_len[..=max.min(self.by_len.len() - 1)]
            .iter()
            .flatten()
            .filter(move |p| p.source == v)
    }
}

/// Reduced echelon form of `(I + J^{k+1}) / J^{k+1}` inside the span of
/// paths of length at most `k`, columns ordered by increasing length.
struct IdealSlice {
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    rows: Matrix,
    pivots: Vec<usize>,
}

impl IdealSlice {
    fn compute(field: PrimeField, enumerator: &PathEnumerator, relations: &[Relation], k: usize) -> Self {
        let paths: Vec<Path> = enumerator.by_len[..=k].iter().flatten().cloned().collect();
        let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut generators: Vec<Vec<u32>> = Vec::new();
        for rel in relations {
            let m = rel.min_len();
            if m > k {
                continue;
            }
            let (src, tgt) = (rel.terms[0].1.source, rel.terms[0].1.target);
            let room = k - m;
            for before in enumerator.ending_at(src, room) {
                for after in enumerator.starting_at(tgt, room - before.len()) {
                    let mut vec = vec![0u32; paths.len()];
                    let mut nonzero = false;
                    for (c, term) in &rel.terms {
                        let total = before.len() + term.len() + after.len();
                        if total > k {
                            continue;
                        }
                        let full = before.then(term).and_then(|p| p.then(after)).expect("composable");
                        let idx = index[&full];
                        vec[idx] = field.add(vec[idx], field.from_i64(*c));
                        nonzero = true;
                    }
                    if nonzero {
                        generators.push(vec);
                    }
                }
            }
        }
        let mat = if generators.is_empty() {
            Matrix::zeros(field, 0, paths.len())
        } else {
            let mut m = Matrix::zeros(field, generators.len(), paths.len());
            for (i, g) in generators.iter().enumerate() {
                for (j, &v) in g.iter().enumerate() {
                    m.set(i, j, v);
                }
            }
            m
        };
        let ech = mat.echelon();
        IdealSlice {
            paths,
            index,
            rows: ech.reduced,
            pivots: ech.pivots,
        }
    }

    /// True when the path's unit vector lies in the row span.
    fn contains_path(&self, path: &Path) -> bool {
        let idx = self.index[path];
        // Rows are fully reduced, so a unit vector is in the span iff it is a
        // pivot whose row has no other nonzero entry.
        match self.pivots.iter().position(|&c| c == idx) {
            Some(r) => self.rows.row(r).iter().enumerate().all(|(j, &v)| j == idx || v == 0),
            None => false,
        }
    }
}

impl PathAlgebra {
    /// Builds `kQ/I` over `F_p`, searching the nilpotency degree up to `depth_cap`.
    pub fn build(quiver: Quiver, relations: Vec<Relation>, prime: u32, depth_cap: usize) -> Result<Arc<Self>> {
        let field = PrimeField::new(prime).ok_or(Error::NotPrime(prime as u64))?;
        let mut kept = Vec::new();
        for rel in relations {
            rel.validate(&quiver)?;
            let terms: Vec<(i64, Path)> = rel
                .terms
                .into_iter()
                .filter(|(c, _)| c.rem_euclid(prime as i64) != 0)
                .collect();
            if !terms.is_empty() {
                kept.push(Relation { terms });
            }
        }
        let relations = kept;

        let mut enumerator = PathEnumerator::new(&quiver);
        let mut nilpotency = None;
        for n in 1..=depth_cap {
            if !enumerator.ensure(n) {
                break;
            }
            let slice = IdealSlice::compute(field, &enumerator, &relations, n);
            if enumerator.by_len[n].iter().all(|p| slice.contains_path(p)) {
                nilpotency = Some(n);
                break;
            }
        }
        let nilpotency = nilpotency.ok_or(Error::NotFiniteDimensional { cap: depth_cap })?;

        // The quotient lives in kQ_{<L}; J^L lies in the ideal.
        let slice = IdealSlice::compute(field, &enumerator, &relations, nilpotency - 1);
        let mut is_pivot = vec![None; slice.paths.len()];
        for (r, &c) in slice.pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        let mut basis_of_col = vec![usize::MAX; slice.paths.len()];
        for (c, path) in slice.paths.iter().enumerate() {
            if is_pivot[c].is_none() {
                basis_of_col[c] = basis.len();
                basis.push(path.clone());
            }
        }
        let mut path_index = HashMap::new();
        for (c, path) in slice.paths.iter().enumerate() {
            let class = match is_pivot[c] {
                None => PathClass::Basis(basis_of_col[c]),
                Some(r) => {
                    let row = slice.rows.row(r);
                    let elem: Element = row
                        .iter()
                        .enumerate()
                        .filter(|&(j, &v)| j != c && v != 0)
                        .map(|(j, &v)| (basis_of_col[j], field.neg(v)))
                        .collect();
                    PathClass::Reduced(elem)
                }
            };
            path_index.insert(path.clone(), class);
        }

        let mut algebra = PathAlgebra {
            field,
            quiver,
            relations,
            basis,
            path_index,
            mult_table: Vec::new(),
            nilpotency,
            projectives: Vec::new(),
        };
        algebra.mult_table = (0..algebra.basis.len())
            .map(|i| {
                (0..algebra.basis.len())
                    .map(|j| algebra.multiply_basis(i, j))
                    .collect()
            })
            .collect();
        algebra.projectives = (0..algebra.vertex_count())
            .map(|v| algebra.projective_data(v))
            .collect();
        Ok(Arc::new(algebra))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn prime(&self) -> u32 {
        self.field.prime()
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn arrow_count(&self) -> usize {
        self.quiver.arrows().len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    /// Least `L` with `rad^L = 0`.
    pub fn nilpotency_degree(&self) -> usize {
        self.nilpotency
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count(),
            })
        }
    }

    /// Normal form of a path in the residue basis.
    pub fn normal_form(&self, path: &Path) -> Element {
        if path.len() >= self.nilpotency {
            return Vec::new();
        }
        match &self.path_index[path] {
            PathClass::Basis(i) => vec![(*i, 1)],
            PathClass::Reduced(e) => e.clone(),
        }
    }

    /// Normal form of a linear combination of paths.
    pub fn reduce(&self, terms: &[(i64, Path)]) -> Element {
        let mut acc: HashMap<usize, u32> = HashMap::new();
        for (c, path) in terms {
            let c = self.field.from_i64(*c);
            for (i, v) in self.normal_form(path) {
                let slot = acc.entry(i).or_insert(0);
                *slot = self.field.add(*slot, self.field.mul(c, v));
            }
        }
        let mut out: Element = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        out.sort_unstable();
        out
    }

    fn multiply_basis(&self, i: usize, j: usize) -> Element {
        // b_i * b_j means b_j first, then b_i.
        match self.basis[j].then(&self.basis[i]) {
            Some(path) => self.normal_form(&path),
            None => Vec::new(),
        }
    }

    /// `b_i * b_j` (apply `b_j` first).
    pub fn product(&self, i: usize, j: usize) -> &Element {
        &self.mult_table[i][j]
    }

    /// Index of the trivial path `e_v` in the basis.
    pub fn idempotent(&self, v: usize) -> usize {
        match &self.path_index[&Path::trivial(v)] {
            PathClass::Basis(i) => *i,
            PathClass::Reduced(_) => unreachable!("relations lie in rad^2"),
        }
    }

    fn projective_data(&self, v: usize) -> ProjectiveData {
        let n = self.vertex_count();
        let mut basis = vec![Vec::new(); n];
        for (i, p) in self.basis.iter().enumerate() {
            if p.source == v {
                basis[p.target].push(i);
            }
        }
        let local: HashMap<usize, usize> = basis
            .iter()
            .flat_map(|b| b.iter().enumerate().map(|(k, &i)| (i, k)))
            .collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut m = Matrix::zeros(self.field, basis[a.target].len(), basis[a.source].len());
                for (col, &bi) in basis[a.source].iter().enumerate() {
                    let extended = self.basis[bi].then(&Path {
                        source: a.source,
                        target: a.target,
                        arrows: vec![ai],
                    });
                    for (k, c) in self.normal_form(&extended.expect("composable")) {
                        m.set(local[&k], col, c);
                    }
                }
                m
            })
            .collect();
        ProjectiveData { basis, maps }
    }

    pub(crate) fn projective_data_ref(&self, v: usize) -> &ProjectiveData {
        &self.projectives[v]
    }

    /// Dimension vector of `P(v)`.
    pub fn projective_dims(&self, v: usize) -> Vec<usize> {
        self.projectives[v].basis.iter().map(|b| b.len()).collect()
    }
}
