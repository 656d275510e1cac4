//! Stratifying systems, θ-filtrations, Ext-projective systems and the
//! finitistic-dimension bounds built from them.
//!
//! Indices are 0-based in the API; reports carry 1-based indices.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::PathAlgebra;
use crate::decompose::{decompose, is_indecomposable};
use crate::error::{Error, Result};
use crate::igusa_todorov::{Engine, PdResult};
use crate::matrix::Matrix;
use crate::module::{direct_sum, ext1_dim, hom_basis, kernel, power, universal_extension, Module, ModuleMorphism};

pub const DEFAULT_TRIES: usize = 24;
pub const DEFAULT_ITER_CAP: usize = 16;

/// `Δ(i) = P(i)` modulo the trace of the vertices above `i`.
pub fn standard_modules(algebra: &Arc<PathAlgebra>) -> Vec<Module> {
    let n = algebra.vertex_count();
    (0..n)
        .map(|i| {
            let above: Vec<usize> = (i + 1..n).collect();
            Module::projective(algebra, i)
                .expect("vertex in range")
                .trace_quotient(&above)
                .labeled(format!("D({})", i + 1))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub size: usize,
    pub indecomposable: Vec<bool>,
    /// `(j, i, dim Hom(θ(j), θ(i)))` with `j > i` and nonzero dimension, 1-based.
    pub hom_violations: Vec<(usize, usize, usize)>,
    /// `(j, i, dim Ext¹(θ(j), θ(i)))` with `j >= i` and nonzero dimension, 1-based.
    pub ext_violations: Vec<(usize, usize, usize)>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct StratSystem {
    pub theta: Vec<Module>,
    pub report: SystemReport,
}

impl StratSystem {
    pub fn size(&self) -> usize {
        self.theta.len()
    }

    pub fn algebra(&self) -> &Arc<PathAlgebra> {
        self.theta[0].algebra()
    }

    fn require_verified(&self) -> Result<()> {
        if self.report.passed {
            Ok(())
        } else {
            Err(Error::ValidationFailed("θ is not a stratifying system".into()))
        }
    }

    pub fn sum(&self) -> Module {
        direct_sum(self.algebra(), &self.theta)
    }
}

/// Checks indecomposability and the Hom/Ext vanishing conditions.
pub fn verify_stratifying_system(theta: Vec<Module>) -> Result<StratSystem> {
    if theta.is_empty() {
        return Err(Error::InvalidModule("a stratifying system needs at least one module".into()));
    }
    for m in &theta[1..] {
        theta[0].same_algebra(m)?;
    }
    let t = theta.len();
    let mut indecomposable = Vec::with_capacity(t);
    for m in &theta {
        indecomposable.push(is_indecomposable(m)?);
    }
    let mut hom_violations = Vec::new();
    let mut ext_violations = Vec::new();
    for j in 0..t {
        for i in 0..=j {
            if j > i {
                let h = hom_basis(&theta[j], &theta[i])?.len();
                if h > 0 {
                    hom_violations.push((j + 1, i + 1, h));
                }
            }
            let e = ext1_dim(&theta[j], &theta[i])?;
            if e > 0 {
                ext_violations.push((j + 1, i + 1, e));
            }
        }
    }
    let passed = indecomposable.iter().all(|&b| b) && hom_violations.is_empty() && ext_violations.is_empty();
    Ok(StratSystem {
        theta,
        report: SystemReport {
            size: t,
            indecomposable,
            hom_violations,
            ext_violations,
            passed,
        },
    })
}

/// All `m >= 0` with `Σ m_i dimvec θ(i) = dimvec M`, restricted to indices
/// `>= from`, in lexicographic order.
pub fn feasible_multiplicities(m: &Module, theta: &[Module]) -> Vec<Vec<usize>> {
    feasible_from(m.dims(), theta, 0)
}

fn feasible_from(target: &[usize], theta: &[Module], from: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, rest: &mut [usize], theta: &[Module], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == theta.len() {
            if rest.iter().all(|&r| r == 0) {
                out.push(current.clone());
            }
            return;
        }
        let d = theta[k].dims();
        let bound = d
            .iter()
            .zip(rest.iter())
            .filter(|(&dv, _)| dv > 0)
            .map(|(&dv, &r)| r / dv)
            .min()
            .unwrap_or(0);
        for c in 0..=bound {
            for (r, &dv) in rest.iter_mut().zip(d) {
                *r -= c * dv;
            }
            current[k] = c;
            rec(k + 1, rest, theta, current, out);
            for (r, &dv) in rest.iter_mut().zip(d) {
                *r += c * dv;
            }
        }
        current[k] = 0;
    }
    let from = from.min(theta.len());
    let mut rest = target.to_vec();
    let mut current = vec![0usize; theta.len()];
    let mut out = Vec::new();
    rec(from, &mut rest, theta, &mut current, &mut out);
    out
}

/// One step `0 -> next -> module -> θ(index)^multiplicity -> 0`.
#[derive(Debug, Clone)]
pub struct FiltrationLayer {
    pub index: usize,
    pub multiplicity: usize,
    pub module: Module,
    pub epi: ModuleMorphism,
}

/// Peel list from the top; the kernel of the last epi is zero.
#[derive(Debug, Clone)]
pub struct FiltrationCertificate {
    pub module: Module,
    pub layers: Vec<FiltrationLayer>,
}

impl FiltrationCertificate {
    /// Recomputes every kernel and checks surjectivity and the final zero.
    pub fn verify(&self, theta: &[Module]) -> bool {
        let mut current = self.module.clone();
        for layer in &self.layers {
            if layer.index >= theta.len() || layer.module.dims() != current.dims() || layer.module.maps() != current.maps() {
                return false;
            }
            let target = power(&theta[layer.index], layer.multiplicity);
            if !layer.epi.is_morphism(&current, &target) || !layer.epi.is_surjective() {
                return false;
            }
            current = kernel(&current, &layer.epi).module;
        }
        current.is_zero()
    }
}

#[derive(Debug, Clone)]
pub enum Membership {
    Member(FiltrationCertificate),
    NonMember(String),
    Unknown(String),
}

impl Membership {
    pub fn certificate(&self) -> Option<&FiltrationCertificate> {
        match self {
            Membership::Member(c) => Some(c),
            _ => None,
        }
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            Membership::Member(_) => "member",
            Membership::NonMember(_) => "non_member",
            Membership::Unknown(_) => "unknown",
        }
    }
}

/// Searches for a θ-filtration of `M`, peeling `θ(min)` quotients first.
pub fn filtration_search(m: &Module, sys: &StratSystem, tries: usize) -> Result<Membership> {
    sys.require_verified()?;
    m.same_algebra(&sys.theta[0])?;
    search_from(m, &sys.theta, 0, tries.max(1))
}

fn search_from(m: &Module, theta: &[Module], from: usize, tries: usize) -> Result<Membership> {
    if m.is_zero() {
        return Ok(Membership::Member(FiltrationCertificate {
            module: m.clone(),
            layers: Vec::new(),
        }));
    }
    let feasible = feasible_from(m.dims(), theta, from);
    if feasible.is_empty() {
        return Ok(Membership::NonMember(
            "dimension vector is not a nonnegative combination of the θ(i)".into(),
        ));
    }
    let pairs: BTreeSet<(usize, usize)> = feasible
        .iter()
        .map(|v| {
            let i = v.iter().position(|&x| x > 0).expect("nonzero module");
            (i, v[i])
        })
        .collect();
    let mut possible = false;
    for (i, k) in pairs {
        let hom = hom_basis(m, &theta[i])?;
        if hom.len() < k {
            continue;
        }
        possible = true;
        let target = power(&theta[i], k);
        for epi in candidate_epis(&hom, k, tries, (from as u64) << 32 | i as u64) {
            if !epi.is_surjective() {
                continue;
            }
            let ker = kernel(m, &epi).module;
            if let Membership::Member(rest) = search_from(&ker, theta, i + 1, tries)? {
                debug_assert!(epi.is_morphism(m, &target));
                let mut layers = vec![FiltrationLayer {
                    index: i,
                    multiplicity: k,
                    module: m.clone(),
                    epi,
                }];
                layers.extend(rest.layers);
                return Ok(Membership::Member(FiltrationCertificate {
                    module: m.clone(),
                    layers,
                }));
            }
        }
    }
    if possible {
        Ok(Membership::Unknown("no filtration found among the tried epimorphisms".into()))
    } else {
        Ok(Membership::NonMember(
            "Hom(M, θ(i)) is too small for every feasible multiplicity vector".into(),
        ))
    }
}

/// Stacks `k` maps into `M -> θ^k`: consecutive windows of the basis, then
/// seeded random combinations.
fn candidate_epis(hom: &[ModuleMorphism], k: usize, tries: usize, seed: u64) -> Vec<ModuleMorphism> {
    let stack = |maps: &[ModuleMorphism]| ModuleMorphism {
        maps: (0..maps[0].maps.len())
            .map(|v| {
                maps[1..]
                    .iter()
                    .fold(maps[0].maps[v].clone(), |acc, f| acc.vstack(&f.maps[v]))
            })
            .collect(),
    };
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for start in 0..=(hom.len() - k) {
        if out.len() == tries {
            return out;
        }
        out.push(stack(&hom[start..start + k]));
    }
    let f = hom[0].maps.first().map(|m| m.field());
    let Some(field) = f else {
        return out;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f17_0000 ^ seed);
    while out.len() < tries {
        let combos: Vec<ModuleMorphism> = (0..k)
            .map(|_| {
                hom.iter().fold(hom[0].scale(0), |acc, h| {
                    acc.add(&h.scale(rng.gen_range(0..field.prime())))
                })
            })
            .collect();
        out.push(stack(&combos));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportData {
    /// `[M : θ(i)]` for every index.
    pub multiplicities: Vec<usize>,
    /// 1-based support.
    pub support: Vec<usize>,
    /// 1-based; `None` stands for `+∞` (zero module).
    pub min: Option<usize>,
    /// 1-based; `None` stands for `-∞` (zero module).
    pub max: Option<usize>,
}

pub fn support_data(cert: &FiltrationCertificate, t: usize) -> SupportData {
    let mut multiplicities = vec![0usize; t];
    for layer in &cert.layers {
        multiplicities[layer.index] += layer.multiplicity;
    }
    let support: Vec<usize> = (0..t).filter(|&i| multiplicities[i] > 0).map(|i| i + 1).collect();
    SupportData {
        min: support.first().copied(),
        max: support.last().copied(),
        multiplicities,
        support,
    }
}

/// The subsystem `θ_M` on the support of a certificate.
pub fn restrict_system(sys: &StratSystem, cert: &FiltrationCertificate) -> Result<StratSystem> {
    let data = support_data(cert, sys.size());
    if data.support.is_empty() {
        return Err(Error::InvalidModule("the zero module has empty support".into()));
    }
    verify_stratifying_system(data.support.iter().map(|&i| sys.theta[i - 1].clone()).collect())
}

#[derive(Debug, Clone)]
pub struct Epss {
    pub q: Vec<Module>,
    /// `Q(i) -> θ(i)`.
    pub projections: Vec<ModuleMorphism>,
    pub kernels: Vec<Module>,
    pub kernel_inclusions: Vec<ModuleMorphism>,
    pub certificates: Vec<FiltrationCertificate>,
    /// Universal-extension passes used per index.
    pub passes: Vec<usize>,
}

impl Epss {
    pub fn q_sum(&self) -> Module {
        direct_sum(self.q[0].algebra(), &self.q)
    }
}

/// Builds `Q(i)` from `θ(i)` by repeated universal extensions by `θ(j)`, `j > i`.
pub fn build_epss(sys: &StratSystem, iter_cap: usize, tries: usize) -> Result<Epss> {
    sys.require_verified()?;
    let t = sys.size();
    let theta = &sys.theta;
    let mut q = vec![None; t];
    let mut projections = vec![None; t];
    let mut passes = vec![0usize; t];
    for i in (0..t).rev() {
        let mut x = theta[i].clone();
        let mut pi = x.identity();
        let mut converged = (i + 1..t).all(|j| ext1_dim(&x, &theta[j]).map(|d| d == 0).unwrap_or(false));
        while !converged {
            if passes[i] == iter_cap {
                return Err(Error::EpssNotConverged {
                    index: i + 1,
                    cap: iter_cap,
                });
            }
            passes[i] += 1;
            for j in (i + 1..t).rev() {
                if ext1_dim(&x, &theta[j])? > 0 {
                    let ext = universal_extension(&x, &theta[j])?;
                    pi = pi.compose(&ext.projection);
                    x = ext.middle;
                }
            }
            converged = true;
            for j in i + 1..t {
                if ext1_dim(&x, &theta[j])? > 0 {
                    converged = false;
                }
            }
        }
        if !is_indecomposable(&x)? {
            (x, pi) = onto_summand(&x, &pi).ok_or_else(|| {
                Error::ValidationFailed(format!("no indecomposable summand of Q({}) maps onto θ({})", i + 1, i + 1))
            })??;
        }
        q[i] = Some(x.labeled(format!("Q({})", i + 1)));
        projections[i] = Some(pi);
    }
    let q: Vec<Module> = q.into_iter().map(|m| m.unwrap()).collect();
    let projections: Vec<ModuleMorphism> = projections.into_iter().map(|p| p.unwrap()).collect();
    let mut kernels = Vec::with_capacity(t);
    let mut kernel_inclusions = Vec::with_capacity(t);
    let mut certificates = Vec::with_capacity(t);
    for i in 0..t {
        let sub = kernel(&q[i], &projections[i]);
        let cert = match search_from(&sub.module, theta, i + 1, tries)? {
            Membership::Member(c) => c,
            other => {
                return Err(Error::ValidationFailed(format!(
                    "K({}) has no filtration by θ(j), j > {} ({})",
                    i + 1,
                    i + 1,
                    other.verdict()
                )))
            }
        };
        kernels.push(sub.module);
        kernel_inclusions.push(sub.inclusion);
        certificates.push(cert);
    }
    let epss = Epss {
        q,
        projections,
        kernels,
        kernel_inclusions,
        certificates,
        passes,
    };
    let sum = epss.q_sum();
    for (j, th) in theta.iter().enumerate() {
        if ext1_dim(&sum, th)? > 0 {
            return Err(Error::ValidationFailed(format!("Ext¹(Q, θ({})) ≠ 0", j + 1)));
        }
    }
    for (i, qi) in epss.q.iter().enumerate() {
        if !is_indecomposable(qi)? {
            return Err(Error::ValidationFailed(format!("Q({}) is decomposable", i + 1)));
        }
    }
    Ok(epss)
}

/// The first indecomposable summand on which `pi` stays surjective.
fn onto_summand(x: &Module, pi: &ModuleMorphism) -> Option<Result<(Module, ModuleMorphism)>> {
    let d = match decompose(x) {
        Ok(d) => d,
        Err(e) => return Some(Err(e)),
    };
    d.summands.iter().find_map(|s| {
        s.embeddings.iter().find_map(|emb| {
            let r = pi.compose(emb);
            r.is_surjective().then(|| Ok((s.witness.clone(), r)))
        })
    })
}

pub fn is_ext_projective(x: &Module, sys: &StratSystem) -> Result<bool> {
    for th in &sys.theta {
        if ext1_dim(x, th)? > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_ext_injective(x: &Module, sys: &StratSystem) -> Result<bool> {
    for th in &sys.theta {
        if ext1_dim(th, x)? > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct ExtProjectiveCover {
    pub q0: Module,
    /// 0-based indices `j` of the `Q(j)` summands of `q0`, in order.
    pub summands: Vec<usize>,
    pub epsilon: ModuleMorphism,
    pub kernel: Module,
    pub kernel_certificate: FiltrationCertificate,
}

/// Right `add Q`-approximation of `M`, trimmed greedily from the last summand.
pub fn ext_projective_cover(
    m: &Module,
    cert: &FiltrationCertificate,
    epss: &Epss,
    sys: &StratSystem,
    tries: usize,
) -> Result<ExtProjectiveCover> {
    sys.require_verified()?;
    let t = sys.size();
    let data = support_data(cert, t);
    let alg = m.algebra().clone();
    let f = m.field();
    let Some(min) = data.min else {
        let zero = Module::zero(&alg);
        return Ok(ExtProjectiveCover {
            q0: zero.clone(),
            summands: Vec::new(),
            epsilon: ModuleMorphism::zero(&zero, m),
            kernel: zero.clone(),
            kernel_certificate: FiltrationCertificate {
                module: zero,
                layers: Vec::new(),
            },
        });
    };
    let mut items: Vec<(usize, ModuleMorphism)> = Vec::new();
    for j in (min - 1)..t {
        for h in hom_basis(&epss.q[j], m)? {
            items.push((j, h));
        }
    }
    let assemble = |chosen: &[bool]| -> (Module, Vec<usize>, ModuleMorphism) {
        let picked: Vec<&(usize, ModuleMorphism)> =
            items.iter().zip(chosen).filter(|(_, &c)| c).map(|(it, _)| it).collect();
        let modules: Vec<Module> = picked.iter().map(|(j, _)| epss.q[*j].clone()).collect();
        let source = direct_sum(&alg, &modules);
        let maps = (0..alg.vertex_count())
            .map(|v| {
                picked
                    .iter()
                    .fold(Matrix::zeros(f, m.dims()[v], 0), |acc, (_, h)| acc.hstack(&h.maps[v]))
            })
            .collect();
        (source, picked.iter().map(|(j, _)| *j).collect(), ModuleMorphism { maps })
    };
    let accept = |source: &Module, eps: &ModuleMorphism| -> Result<Option<(Module, FiltrationCertificate)>> {
        if !eps.is_surjective() {
            return Ok(None);
        }
        let ker = kernel(source, eps).module;
        match search_from(&ker, &sys.theta, 0, tries)? {
            Membership::Member(c) => Ok(Some((ker, c))),
            _ => Ok(None),
        }
    };
    let mut chosen = vec![true; items.len()];
    let (source, _, eps) = assemble(&chosen);
    let Some(mut best) = accept(&source, &eps)? else {
        return Err(Error::CoverNotFound("the full Hom stack gives no filtered kernel".into()));
    };
    for k in (0..items.len()).rev() {
        chosen[k] = false;
        let (source, _, eps) = assemble(&chosen);
        match accept(&source, &eps)? {
            Some(found) => best = found,
            None => chosen[k] = true,
        }
    }
    let (q0, summands, epsilon) = assemble(&chosen);
    let (kernel_module, kernel_certificate) = best;
    let kd = support_data(&kernel_certificate, t);
    if kd.min.is_some_and(|kmin| kmin <= min) {
        return Err(Error::CoverNotFound(format!(
            "kernel support starts at {} which is not above {}",
            kd.min.unwrap(),
            min
        )));
    }
    Ok(ExtProjectiveCover {
        q0,
        summands,
        epsilon,
        kernel: kernel_module,
        kernel_certificate,
    })
}

/// 1-based `∞_θ`, `s`, and the individual projective dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfinitePart {
    pub infinity_set: Vec<usize>,
    pub s: usize,
    pub pds: Vec<PdResult>,
}

pub fn infinite_part(sys: &StratSystem, engine: &mut Engine) -> Result<InfinitePart> {
    let mut pds = Vec::with_capacity(sys.size());
    for th in &sys.theta {
        pds.push(engine.pd(th)?);
    }
    let mut infinity_set = Vec::new();
    let mut s = 0;
    for (i, pd) in pds.iter().enumerate() {
        match pd {
            PdResult::Finite { value } => s = s.max(*value),
            PdResult::Infinite { .. } => infinity_set.push(i + 1),
            PdResult::Unknown { depth } => {
                return Err(Error::Undecided(format!("pd θ({}) unknown at depth {}", i + 1, depth)))
            }
        }
    }
    Ok(InfinitePart { infinity_set, s, pds })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Assumptions {
    pub three_finitistic: bool,
    pub three_cardinal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    /// Every θ(i) has finite pd: the bound is `pd θ`.
    AllFinite,
    OneInfinite,
    TwoInfinite,
    ThreeInfinite,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub card_infinity: usize,
    pub infinity_set: Vec<usize>,
    pub s: usize,
    pub case: BoundCase,
    pub alpha: Option<usize>,
    pub beta: Option<usize>,
    pub epsilon0: Option<usize>,
    /// Bound on the Ψ-dimension of `F(θ)` when exactly one index is infinite.
    pub psi_dimension_bound: Option<usize>,
    pub three_finitistic_bound: Option<usize>,
    pub three_cardinal_bound: Option<usize>,
    pub bound: Option<usize>,
    pub assumptions: Vec<String>,
}

fn omega(m: &Module, k: usize) -> Module {
    m.syzygy(k)
}

fn sum2(a: &Module, b: &Module) -> Module {
    direct_sum(a.algebra(), &[a.clone(), b.clone()])
}

/// Dispatches on the number of θ(i) of infinite projective dimension.
pub fn finitistic_bound(
    sys: &StratSystem,
    epss: Option<&Epss>,
    engine: &mut Engine,
    assumptions: Assumptions,
) -> Result<BoundReport> {
    sys.require_verified()?;
    let inf = infinite_part(sys, engine)?;
    let card = inf.infinity_set.len();
    let s = inf.s;
    let th = |k: usize| &sys.theta[inf.infinity_set[k] - 1];
    let mut report = BoundReport {
        card_infinity: card,
        infinity_set: inf.infinity_set.clone(),
        s,
        case: BoundCase::Unsupported,
        alpha: None,
        beta: None,
        epsilon0: None,
        psi_dimension_bound: None,
        three_finitistic_bound: None,
        three_cardinal_bound: None,
        bound: None,
        assumptions: Vec::new(),
    };
    let need_q = |epss: Option<&Epss>| epss.map(|e| e.q_sum()).ok_or(Error::MissingEpss);
    match card {
        0 => {
            report.case = BoundCase::AllFinite;
            report.bound = Some(s);
        }
        1 => {
            report.case = BoundCase::OneInfinite;
            report.bound = Some(s);
            report.psi_dimension_bound = Some(1 + s + engine.psi(&omega(th(0), s + 1))?.psi);
        }
        2 => {
            report.case = BoundCase::TwoInfinite;
            let q = need_q(epss)?;
            let alpha = engine.psi(&sum2(&omega(th(1), s + 1), &omega(th(0), s + 2)))?.psi;
            let beta = engine.psi(&omega(&sum2(&q, th(1)), s + 1))?.psi;
            report.alpha = Some(alpha);
            report.beta = Some(beta);
            report.bound = Some(s + 2 + alpha.min(beta));
        }
        3 => {
            report.case = BoundCase::ThreeInfinite;
            if !assumptions.three_finitistic && !assumptions.three_cardinal {
                return Err(Error::MissingAssumption);
            }
            let q = need_q(epss)?;
            let eps0 = engine.psi(&sum2(&omega(th(2), s + 1), &omega(th(1), s + 2)))?.psi;
            report.epsilon0 = Some(eps0);
            let t12 = sum2(th(1), th(2));
            let t01 = sum2(th(0), th(1));
            let mut candidates = Vec::new();
            if assumptions.three_finitistic {
                report.assumptions.push("three_finitistic".into());
                let x = sum2(&omega(&sum2(&t12, &q), s + eps0 + 3), &omega(&t01, s + eps0 + 4));
                let b = s + 4 + eps0 + engine.psi(&x)?.psi;
                report.three_finitistic_bound = Some(b);
                candidates.push(b);
            }
            if assumptions.three_cardinal {
                report.assumptions.push("three_cardinal".into());
                let a = engine.psi(&sum2(&omega(th(2), s + 1), &omega(&q, s + 2)))?.psi;
                let b = engine.psi(&sum2(&omega(&sum2(&t12, &q), s + 1), &omega(&t01, s + 2)))?.psi;
                let v = s + 2 + a.max(b);
                report.three_cardinal_bound = Some(v);
                candidates.push(v);
            }
            report.bound = candidates.into_iter().min();
        }
        _ => {}
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Vacuous,
    Counterexample,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub support: Vec<usize>,
    pub kernel_support: Vec<usize>,
    pub pd_module: Option<PdResult>,
    pub pd_kernel: Option<PdResult>,
    pub three_finitistic: Verdict,
    pub three_cardinal: Verdict,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreePropertiesReport {
    pub infinity_set: Vec<usize>,
    pub samples: Vec<SampleReport>,
    /// `"no counterexample found in sample"` or `"COUNTEREXAMPLE"`.
    pub three_finitistic: String,
    pub three_cardinal: String,
}

fn overall(verdicts: impl Iterator<Item = Verdict>) -> String {
    let v: Vec<Verdict> = verdicts.collect();
    if v.contains(&Verdict::Counterexample) {
        "COUNTEREXAMPLE".into()
    } else {
        "no counterexample found in sample".into()
    }
}

/// Checks both hypotheses on each sampled `M` through its Ext-projective cover.
pub fn check_three_properties(
    sys: &StratSystem,
    epss: &Epss,
    samples: &[(Module, FiltrationCertificate)],
    engine: &mut Engine,
    tries: usize,
) -> Result<ThreePropertiesReport> {
    let inf = infinite_part(sys, engine)?;
    if inf.infinity_set.len() != 3 {
        return Err(Error::ValidationFailed(format!(
            "the 3-properties need exactly three infinite indices, found {}",
            inf.infinity_set.len()
        )));
    }
    let (i0, i1, i2) = (inf.infinity_set[0], inf.infinity_set[1], inf.infinity_set[2]);
    let t = sys.size();
    let mut reports = Vec::new();
    for (m, cert) in samples {
        let sd = support_data(cert, t);
        let cover = match ext_projective_cover(m, cert, epss, sys, tries) {
            Ok(c) => c,
            Err(e) if e.is_inconclusive() => {
                reports.push(SampleReport {
                    support: sd.support,
                    kernel_support: Vec::new(),
                    pd_module: None,
                    pd_kernel: None,
                    three_finitistic: Verdict::Unknown,
                    three_cardinal: Verdict::Unknown,
                    note: Some(e.to_string()),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let kd = support_data(&cover.kernel_certificate, t);
        let pd_m = engine.pd(m)?;
        let in_k = |i: usize| kd.support.contains(&i);
        let finitistic = if !(in_k(i1) && in_k(i2)) {
            Verdict::Vacuous
        } else {
            match &pd_m {
                PdResult::Unknown { .. } => Verdict::Unknown,
                PdResult::Infinite { .. } => Verdict::Vacuous,
                PdResult::Finite { .. } => match engine.pd(&cover.kernel)? {
                    PdResult::Finite { .. } => Verdict::Holds,
                    PdResult::Infinite { .. } => Verdict::Counterexample,
                    PdResult::Unknown { .. } => Verdict::Unknown,
                },
            }
        };
        let m_inf: Vec<usize> = sd.support.iter().copied().filter(|i| inf.infinity_set.contains(i)).collect();
        let cardinal = if m_inf != [i0, i1] {
            Verdict::Vacuous
        } else if kd.support.iter().filter(|i| inf.infinity_set.contains(i)).count() <= 1 {
            Verdict::Holds
        } else {
            Verdict::Counterexample
        };
        let pd_kernel = engine.pd(&cover.kernel)?;
        reports.push(SampleReport {
            support: sd.support,
            kernel_support: kd.support,
            pd_module: Some(pd_m),
            pd_kernel: Some(pd_kernel),
            three_finitistic: finitistic,
            three_cardinal: cardinal,
            note: None,
        });
    }
    Ok(ThreePropertiesReport {
        infinity_set: inf.infinity_set,
        three_finitistic: overall(reports.iter().map(|r| r.three_finitistic)),
        three_cardinal: overall(reports.iter().map(|r| r.three_cardinal)),
        samples: reports,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraVerdict {
    Member,
    NonMember,
    Unknown,
}

/// Whether every indecomposable projective has a Δ-filtration.
pub fn is_standardly_stratified(algebra: &Arc<PathAlgebra>, tries: usize) -> Result<(AlgebraVerdict, Vec<Membership>)> {
    let sys = verify_stratifying_system(standard_modules(algebra))?;
    let mut results = Vec::new();
    for v in 0..algebra.vertex_count() {
        let p = Module::projective(algebra, v)?;
        results.push(filtration_search(&p, &sys, tries)?);
    }
    let verdict = if results.iter().any(|r| matches!(r, Membership::NonMember(_))) {
        AlgebraVerdict::NonMember
    } else if results.iter().all(|r| matches!(r, Membership::Member(_))) {
        AlgebraVerdict::Member
    } else {
        AlgebraVerdict::Unknown
    };
    Ok((verdict, results))
}
