//! The group `K` of non-projective indecomposables, the syzygy operator on it,
//! projective dimension, and the Igusa–Todorov functions Φ and Ψ.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::PathAlgebra;
use crate::decompose::{ClassId, ClassRegistry, Decomposition};
use crate::error::{Error, Result};
use crate::module::{direct_sum, Module};

pub const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PdResult {
    Finite { value: usize },
    Infinite { cycle: Vec<ClassId> },
    Unknown { depth: usize },
}

impl PdResult {
    pub fn finite(&self) -> Option<usize> {
        match self {
            PdResult::Finite { value } => Some(*value),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PdResult::Infinite { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, PdResult::Unknown { .. })
    }
}

/// Element of `K` with finite support over non-projective classes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct KVector {
    pub coefficients: BTreeMap<ClassId, i64>,
}

impl KVector {
    pub fn unit(c: ClassId) -> Self {
        KVector {
            coefficients: BTreeMap::from([(c, 1)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(|&v| v == 0)
    }

    pub fn add(&self, other: &KVector) -> KVector {
        let mut out = self.coefficients.clone();
        for (&c, &v) in &other.coefficients {
            *out.entry(c).or_insert(0) += v;
        }
        out.retain(|_, v| *v != 0);
        KVector { coefficients: out }
    }

    pub fn scale(&self, k: i64) -> KVector {
        let mut out: BTreeMap<ClassId, i64> = self.coefficients.iter().map(|(&c, &v)| (c, v * k)).collect();
        out.retain(|_, v| *v != 0);
        KVector { coefficients: out }
    }

    pub fn support(&self) -> Vec<ClassId> {
        self.coefficients.iter().filter(|(_, &v)| v != 0).map(|(&c, _)| c).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiResult {
    pub value: Option<usize>,
    pub rank_trace: Vec<usize>,
    /// Number of syzygy steps after which the orbit closed.
    pub orbit_closed_at: Option<usize>,
    pub orbit: Vec<ClassId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub phi: usize,
    pub rank_trace: Vec<usize>,
    /// Classes of the summands of `Ω^Φ(M)`.
    pub c_m: Vec<ClassId>,
    pub pfd_c_m: usize,
    pub psi: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadCubeReport {
    pub nilpotency_degree: usize,
    pub psi: PsiReport,
    pub bound: usize,
}

/// Syzygy data for one non-projective class.
#[derive(Debug, Clone)]
struct OmegaEntry {
    /// Non-projective summands of the syzygy with multiplicities.
    non_projective: Vec<(ClassId, usize)>,
}

struct Exploration {
    nodes: Vec<ClassId>,
    closed_at: Option<usize>,
    levels: usize,
}

/// Owns the class registry and memoizes syzygies of classes.
pub struct Engine {
    registry: ClassRegistry,
    omega: HashMap<ClassId, OmegaEntry>,
    max_depth: usize,
}

impl Engine {
    pub fn new(algebra: &Arc<PathAlgebra>, max_depth: usize) -> Self {
        Engine {
            registry: ClassRegistry::new(algebra),
            omega: HashMap::new(),
            max_depth: max_depth.max(1),
        }
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        self.registry.algebra()
    }

    pub fn registry(&self) -> &ClassRegistry {
        &self.registry
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn decompose(&mut self, m: &Module) -> Result<Decomposition> {
        self.registry.decompose(m)
    }

    /// Non-projective classes of `M` with multiplicities.
    fn non_projective_classes(&mut self, m: &Module) -> Result<Vec<(ClassId, usize)>> {
        let d = self.registry.decompose(m)?;
        Ok(d.non_projective()
            .map(|s| (s.class_id.expect("registered"), s.multiplicity))
            .collect())
    }

    pub fn k_class(&mut self, m: &Module) -> Result<KVector> {
        let mut coefficients = BTreeMap::new();
        for (c, k) in self.non_projective_classes(m)? {
            coefficients.insert(c, k as i64);
        }
        Ok(KVector { coefficients })
    }

    /// Unit vectors of the distinct non-projective summand classes.
    pub fn span_generators(&mut self, m: &Module) -> Result<Vec<KVector>> {
        Ok(self
            .non_projective_classes(m)?
            .into_iter()
            .map(|(c, _)| KVector::unit(c))
            .collect())
    }

    /// Non-projective summands of `Ω` of a class.
    pub fn omega_of_class(&mut self, c: ClassId) -> Result<Vec<(ClassId, usize)>> {
        if let Some(e) = self.omega.get(&c) {
            return Ok(e.non_projective.clone());
        }
        let witness = self.registry.get(c).witness.clone();
        let syz = witness.syzygy(1);
        let non_projective = self.non_projective_classes(&syz)?;
        self.omega.insert(
            c,
            OmegaEntry {
                non_projective: non_projective.clone(),
            },
        );
        Ok(non_projective)
    }

    /// `Ω` on `K`.
    pub fn omega_k(&mut self, v: &KVector) -> Result<KVector> {
        let mut out = KVector::default();
        for (&c, &k) in &v.coefficients {
            for (d, m) in self.omega_of_class(c)? {
                out = out.add(&KVector::unit(d).scale(k * m as i64));
            }
        }
        Ok(out)
    }

    /// Breadth-first closure of `start` under `Ω`, at most `max_depth` levels.
    fn explore(&mut self, start: &[ClassId]) -> Result<Exploration> {
        let mut seen: BTreeSet<ClassId> = start.iter().copied().collect();
        let mut nodes: Vec<ClassId> = seen.iter().copied().collect();
        let mut frontier = nodes.clone();
        let mut levels = 0;
        while !frontier.is_empty() {
            if levels == self.max_depth {
                return Ok(Exploration {
                    nodes,
                    closed_at: None,
                    levels,
                });
            }
            let mut next = Vec::new();
            for c in frontier {
                for (d, _) in self.omega_of_class(c)? {
                    if seen.insert(d) {
                        next.push(d);
                        nodes.push(d);
                    }
                }
            }
            levels += 1;
            frontier = next;
        }
        Ok(Exploration {
            nodes,
            closed_at: Some(levels),
            levels,
        })
    }

    /// A cycle among classes whose syzygies are known, reachable from `start`.
    fn find_cycle(&self, start: &[ClassId]) -> Option<Vec<ClassId>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state: HashMap<ClassId, u8> = HashMap::new();
        for &s in start {
            let mut stack: Vec<(ClassId, usize)> = Vec::new();
            let mut path: Vec<ClassId> = Vec::new();
            if state.get(&s).copied().unwrap_or(0) != 0 {
                continue;
            }
            state.insert(s, 1);
            stack.push((s, 0));
            path.push(s);
            while let Some(&mut (node, ref mut idx)) = stack.last_mut() {
                let succ: Vec<ClassId> = self
                    .omega
                    .get(&node)
                    .map(|e| e.non_projective.iter().map(|&(d, _)| d).collect())
                    .unwrap_or_default();
                if *idx < succ.len() {
                    let d = succ[*idx];
                    *idx += 1;
                    match state.get(&d).copied().unwrap_or(0) {
                        0 => {
                            state.insert(d, 1);
                            stack.push((d, 0));
                            path.push(d);
                        }
                        1 => {
                            let pos = path.iter().position(|&x| x == d).unwrap();
                            return Some(path[pos..].to_vec());
                        }
                        _ => {}
                    }
                } else {
                    state.insert(node, 2);
                    stack.pop();
                    path.pop();
                }
            }
        }
        None
    }

    fn pd_of_classes(&mut self, start: &[ClassId]) -> Result<PdResult> {
        if start.is_empty() {
            return Ok(PdResult::Finite { value: 0 });
        }
        let ex = self.explore(start)?;
        if let Some(cycle) = self.find_cycle(start) {
            return Ok(PdResult::Infinite { cycle });
        }
        if ex.closed_at.is_none() {
            return Ok(PdResult::Unknown { depth: ex.levels });
        }
        // Acyclic and closed: longest path, pd(c) = 1 + max pd of successors.
        let mut memo: HashMap<ClassId, usize> = HashMap::new();
        fn longest(c: ClassId, omega: &HashMap<ClassId, OmegaEntry>, memo: &mut HashMap<ClassId, usize>) -> usize {
            if let Some(&v) = memo.get(&c) {
                return v;
            }
            let v = 1 + omega[&c]
                .non_projective
                .iter()
                .map(|&(d, _)| longest(d, omega, memo))
                .max()
                .unwrap_or(0);
            memo.insert(c, v);
            v
        }
        let value = start.iter().map(|&c| longest(c, &self.omega, &mut memo)).max().unwrap_or(0);
        Ok(PdResult::Finite { value })
    }

    pub fn pd(&mut self, m: &Module) -> Result<PdResult> {
        let start: Vec<ClassId> = self.non_projective_classes(m)?.into_iter().map(|(c, _)| c).collect();
        self.pd_of_classes(&start)
    }

    pub fn pd_class(&mut self, c: ClassId) -> Result<PdResult> {
        if self.registry.get(c).is_projective() {
            return Ok(PdResult::Finite { value: 0 });
        }
        self.pd_of_classes(&[c])
    }

    fn phi_of_classes(&mut self, generators: &[ClassId]) -> Result<PhiResult> {
        if generators.is_empty() {
            return Ok(PhiResult {
                value: Some(0),
                rank_trace: vec![0],
                orbit_closed_at: Some(0),
                orbit: Vec::new(),
            });
        }
        let ex = self.explore(generators)?;
        let orbit = ex.nodes.clone();
        let index: HashMap<ClassId, usize> = orbit.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let n = orbit.len();
        // Columns: current images of the generators, in orbit coordinates.
        let mut current: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|c| {
                let mut v = vec![BigInt::zero(); n];
                v[index[c]] = BigInt::one();
                v
            })
            .collect();
        let steps = match ex.closed_at {
            Some(_) => n + 1,
            None => ex.levels,
        };
        let mut rank_trace = vec![rational_rank(&current)];
        for _ in 0..steps {
            let mut next = Vec::with_capacity(current.len());
            for col in &current {
                let mut out = vec![BigInt::zero(); n];
                for (i, x) in col.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let Some(entry) = self.omega.get(&orbit[i]) else {
                        continue;
                    };
                    for &(d, k) in &entry.non_projective {
                        out[index[&d]] += x * BigInt::from(k);
                    }
                }
                next.push(out);
            }
            current = next;
            rank_trace.push(rational_rank(&current));
        }
        let value = ex.closed_at.map(|_| {
            let last = *rank_trace.last().unwrap();
            let mut k = rank_trace.len() - 1;
            while k > 0 && rank_trace[k - 1] == last {
                k -= 1;
            }
            k
        });
        Ok(PhiResult {
            value,
            rank_trace,
            orbit_closed_at: ex.closed_at,
            orbit,
        })
    }

    pub fn phi(&mut self, m: &Module) -> Result<PhiResult> {
        let gens: Vec<ClassId> = self.non_projective_classes(m)?.into_iter().map(|(c, _)| c).collect();
        self.phi_of_classes(&gens)
    }

    pub fn psi(&mut self, m: &Module) -> Result<PsiReport> {
        let gens: Vec<ClassId> = self.non_projective_classes(m)?.into_iter().map(|(c, _)| c).collect();
        let phi = self.phi_of_classes(&gens)?;
        let Some(value) = phi.value else {
            return Err(Error::Undecided(format!(
                "Φ: orbit not closed within {} syzygy steps",
                self.max_depth
            )));
        };
        let mut v = KVector {
            coefficients: gens.iter().map(|&c| (c, 1)).collect(),
        };
        for _ in 0..value {
            v = self.omega_k(&v)?;
        }
        let c_m = v.support();
        let mut pfd = 0;
        for &c in &c_m {
            match self.pd_class(c)? {
                PdResult::Finite { value } => pfd = pfd.max(value),
                PdResult::Infinite { .. } => {}
                PdResult::Unknown { depth } => {
                    return Err(Error::Undecided(format!("pd of a summand unknown at depth {depth}")))
                }
            }
        }
        Ok(PsiReport {
            phi: value,
            rank_trace: phi.rank_trace,
            c_m,
            pfd_c_m: pfd,
            psi: value + pfd,
        })
    }

    /// Largest Ψ over an explicit finite family.
    pub fn psi_dim_finite_family(&mut self, modules: &[Module]) -> Result<usize> {
        let mut best = 0;
        for m in modules {
            best = best.max(self.psi(m)?.psi);
        }
        Ok(best)
    }

    /// `2 + Ψ(A/rad A ⊕ A/rad² A)` for algebras with `rad³ = 0`.
    pub fn radcube_pfd_bound(&mut self) -> Result<RadCubeReport> {
        let alg = self.algebra().clone();
        let degree = alg.nilpotency_degree();
        if degree > 3 {
            return Err(Error::RadCubeNotZero { degree });
        }
        let m = direct_sum(
            &alg,
            &[Module::radical_power_quotient(&alg, 1), Module::radical_power_quotient(&alg, 2)],
        );
        let psi = self.psi(&m)?;
        Ok(RadCubeReport {
            nilpotency_degree: degree,
            bound: 2 + psi.psi,
            psi,
        })
    }
}

/// Rank over Q of the matrix with the given integer columns.
pub fn rational_rank(columns: &[Vec<BigInt>]) -> usize {
    let Some(first) = columns.first() else {
        return 0;
    };
    let rows = first.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| columns.iter().map(|c| BigRational::from_integer(c[i].clone())).collect())
        .collect();
    let cols = columns.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let factor = &m[r][c] / &pivot;
                for k in c..cols {
                    let delta = &factor * &m[rank][k];
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}
