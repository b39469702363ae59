//! Constructive realization: builds graded posets with a prescribed rank-5
//! cd-index or rank-5/6 d-vector, and flag simplicial 4-spheres with a
//! prescribed γ-vector, via joins of cycle blocks followed by scheduled
//! unzips or edge subdivisions.

use thiserror::Error;

use crate::flagvec::Rank5Coeffs;
use crate::poset::{ElementId, GradedPoset, PosetError};
use crate::simplicial::{cycle_complex, zero_sphere, SimplicialComplex, SimplicialError};

/// Errors raised by feasibility checks and constructions.
#[derive(Debug, Error)]
pub enum RealizeError {
    /// Cycle posets only exist for `k ≥ 3`.
    #[error("cycle posets need k >= 3, got {k}")]
    KTooSmall { k: u64 },
    /// The requested invariant is not attained by any object in the class.
    #[error("target is not realizable: {0}")]
    InfeasibleTarget(String),
    /// An intermediate block would be a cycle of length `< 3`.
    #[error("construction would need a degenerate cycle of length {len}")]
    DegenerateCycle { len: u64 },
    /// A scheduled surgery step failed; indicates a bug in the schedule.
    #[error("construction step failed: {0}")]
    Poset(#[from] PosetError),
    /// A scheduled subdivision failed; indicates a bug in the schedule.
    #[error("construction step failed: {0}")]
    Simplicial(#[from] SimplicialError),
}

/// Witness for the middle feasibility case of rank-5 cd-indices: splits
/// `b_1+b_2+b_3 = α_1` and `c_1+c_2+c_3 = α_3` with
/// `Σ b_i c_i = α_1 α_3 − α_13`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseWitness {
    pub b: [u64; 3],
    pub c: [u64; 3],
}

/// Which construction (if any) realizes a rank-5 cd-index target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No poset in the class attains the target.
    Infeasible,
    /// `α_2 = 0` and `α_13 = α_1 α_3`: a join of two cycle blocks.
    CaseI,
    /// `α_2 = 1` with a witness split: unzips on a three-cycle seed.
    CaseII(CaseWitness),
    /// `α_2 ≥ 2` and `α_13 ≤ α_1 α_3`: unzips on a four-cycle seed.
    CaseIII,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, Verdict::Infeasible)
    }
}

/// Feasibility answer for a rank-5 cd-index target, echoing the target.
#[derive(Clone, Debug)]
pub struct Feasibility {
    pub verdict: Verdict,
    pub target: Rank5Coeffs,
}

/// A realized poset together with a replayable construction trace: one line
/// per block join, label assignment, and unzip step.
#[derive(Clone, Debug)]
pub struct Realization {
    pub poset: GradedPoset,
    pub trace: Vec<String>,
}

/// A realized simplicial complex with its construction trace.
#[derive(Clone, Debug)]
pub struct ComplexRealization {
    pub complex: SimplicialComplex,
    pub trace: Vec<String>,
}

/// The rank-2 Boolean algebra: bottom, two atoms, top. Its cd-index is `c`.
pub fn build_boolean2() -> GradedPoset {
    let elements = [(0u64, 0usize), (1, 1), (2, 1), (3, 2)];
    let covers = [(0u64, 1u64), (0, 2), (1, 3), (2, 3)];
    GradedPoset::from_parts(elements, covers, 0, 3).expect("fixed poset is valid")
}

/// Face poset of a `k`-gon with bottom and top adjoined: `k` rank-1
/// vertices, `k` rank-2 edges, edge `i` covering vertices `i` and `i+1`
/// cyclically. Its cd-index is `c² + (k−2)d`.
pub fn build_cycle_poset(k: u64) -> Result<GradedPoset, RealizeError> {
    if k < 3 {
        return Err(RealizeError::KTooSmall { k });
    }
    let top = 2 * k + 1;
    let mut elements = vec![(0u64, 0usize)];
    let mut covers = Vec::new();
    for i in 1..=k {
        elements.push((i, 1));
        covers.push((0, i));
    }
    for i in 0..k {
        let edge = k + 1 + i;
        elements.push((edge, 2));
        covers.push((1 + i, edge));
        covers.push((1 + (i + 1) % k, edge));
        covers.push((edge, top));
    }
    elements.push((top, 3));
    Ok(GradedPoset::from_parts(elements, covers, 0, top).expect("cycle poset is valid"))
}

/// A rank-3 block with cd-index `c² + (k−2)d`: the `k`-gon poset for
/// `k ≥ 3`, and the join of two rank-2 Boolean algebras for `k = 2`
/// (a 2-gon is not a simplicial object, but `c²` is still attained).
pub fn cycle_or_boolean_join(k: u64) -> Result<GradedPoset, RealizeError> {
    match k {
        0 | 1 => Err(RealizeError::KTooSmall { k }),
        2 => Ok(build_boolean2().join(&build_boolean2())),
        _ => build_cycle_poset(k),
    }
}

fn block_name(k: u64) -> String {
    if k == 2 { "B_2 * B_2".into() } else { format!("C_{k}") }
}

/// Decides which construction realizes the rank-5 cd-index
/// `c⁴ + α_1 dc² + α_2 cdc + α_3 c²d + α_13 d²`. Negative coefficients are
/// infeasible; coefficients beyond `u64` are rejected as unrealizable.
/// The middle case is settled by exhaustive lexicographic search over the
/// witness splits, which is sound and complete because every part is
/// bounded by its column sum.
pub fn feasible_rank5_cd(t: &Rank5Coeffs) -> Feasibility {
    let verdict = match t.as_u64() {
        None => Verdict::Infeasible,
        Some((a1, a2, a3, a13)) => rank5_verdict(a1, a2, a3, a13),
    };
    Feasibility { verdict, target: t.clone() }
}

fn rank5_verdict(a1: u64, a2: u64, a3: u64, a13: u64) -> Verdict {
    let product = a1 as u128 * a3 as u128;
    match a2 {
        0 => {
            if a13 as u128 == product {
                Verdict::CaseI
            } else {
                Verdict::Infeasible
            }
        }
        1 => match case2_witness(a1, a3, a13) {
            Some(w) => Verdict::CaseII(w),
            None => Verdict::Infeasible,
        },
        _ => {
            if a13 as u128 <= product {
                Verdict::CaseIII
            } else {
                Verdict::Infeasible
            }
        }
    }
}

/// First witness in lexicographic order over `(b_1, b_2, b_3, c_1, c_2, c_3)`
/// with `Σ b_i c_i = α_1 α_3 − α_13`, or `None` when no split exists.
fn case2_witness(a1: u64, a3: u64, a13: u64) -> Option<CaseWitness> {
    let product = a1 as u128 * a3 as u128;
    if (a13 as u128) > product {
        return None;
    }
    let need = product - a13 as u128;
    for b1 in 0..=a1 {
        for b2 in 0..=a1 - b1 {
            let b3 = a1 - b1 - b2;
            for c1 in 0..=a3 {
                let part = b1 as u128 * c1 as u128;
                if part > need {
                    break;
                }
                for c2 in 0..=a3 - c1 {
                    let c3 = a3 - c1 - c2;
                    let total = part + b2 as u128 * c2 as u128 + b3 as u128 * c3 as u128;
                    if total == need {
                        return Some(CaseWitness { b: [b1, b2, b3], c: [c1, c2, c3] });
                    }
                }
            }
        }
    }
    None
}

/// Labeled seed for the unzip schedules: the join `B_2 * C_k * B_2`, whose
/// cd-index is `c⁴ + (k−2) cdc`, with the smallest rank-1 element `rho`,
/// the rank-2 elements `taus` in id order, the rank-3 elements `sigmas`
/// arranged so that `sigmas[i]` covers `taus[i]` and `taus[i+1]`
/// (cyclically), and the smallest rank-4 element `pi`.
pub struct Rank5Seed {
    pub poset: GradedPoset,
    pub rho: ElementId,
    pub taus: Vec<ElementId>,
    pub sigmas: Vec<ElementId>,
    pub pi: ElementId,
}

pub fn seed_rank5(cycle_len: u64) -> Result<Rank5Seed, RealizeError> {
    let poset = build_boolean2().join(&build_cycle_poset(cycle_len)?).join(&build_boolean2());
    let rho = min_of_rank(&poset, 1);
    let pi = min_of_rank(&poset, 4);
    let mut taus = poset.rank_layer(2);
    taus.sort_by_key(|e| e.0);
    // Walk the middle cycle: start at the smallest rank-2 element, step to
    // its smaller unvisited neighbor, and record the connecting rank-3
    // element; neighbors share exactly one of the rank-3 elements.
    let k = taus.len();
    let mut order = vec![taus[0]];
    let mut sigmas = Vec::new();
    let mut used = vec![taus[0]];
    for _ in 0..k {
        let cur = *order.last().expect("nonempty");
        let mut next: Option<(ElementId, ElementId)> = None;
        for s in poset.up_covers(cur)? {
            for t in poset.down_covers(s)? {
                if t == cur {
                    continue;
                }
                let fresh = !used.contains(&t);
                let closing = order.len() == k && t == order[0];
                if (fresh || closing) && next.is_none_or(|(_, b)| t.0 < b.0) {
                    next = Some((s, t));
                }
            }
        }
        let (s, t) = next.expect("middle layer is a single cycle");
        sigmas.push(s);
        if order.len() < k {
            order.push(t);
            used.push(t);
        }
    }
    Ok(Rank5Seed { poset, rho, taus: order, sigmas, pi })
}

fn min_of_rank(p: &GradedPoset, rank: usize) -> ElementId {
    p.rank_layer(rank).into_iter().min_by_key(|e| e.0).expect("rank layer is nonempty")
}

/// Runs `unzip_k` and records the step in the trace.
fn unzip_step(
    p: GradedPoset,
    x: ElementId,
    x_name: &str,
    y: ElementId,
    y_name: &str,
    k: u64,
    trace: &mut Vec<String>,
) -> Result<GradedPoset, RealizeError> {
    if k == 0 {
        return Ok(p);
    }
    trace.push(format!("unzip ({x_name}={}, {y_name}={}) x{k}", x.0, y.0));
    Ok(p.unzip_k(x, y, k)?)
}

/// Builds a rank-5 poset whose cd-index is exactly
/// `c⁴ + α_1 dc² + α_2 cdc + α_3 c²d + α_13 d²`, selecting the construction
/// by feasibility case, and returns it with a replayable trace.
pub fn realize_rank5_cd_traced(t: &Rank5Coeffs) -> Result<Realization, RealizeError> {
    let infeasible = || RealizeError::InfeasibleTarget(format!("rank-5 cd-index {t}"));
    let (a1, a2, a3, a13) = t.as_u64().ok_or_else(infeasible)?;
    match feasible_rank5_cd(t).verdict {
        Verdict::Infeasible => Err(infeasible()),
        Verdict::CaseI => {
            let left = a1 + 2;
            let right = a3 + 2;
            let poset = cycle_or_boolean_join(left)?.join(&cycle_or_boolean_join(right)?);
            let trace = vec![format!("join: {} * {}", block_name(left), block_name(right))];
            Ok(Realization { poset, trace })
        }
        Verdict::CaseII(w) => realize_case2(w),
        Verdict::CaseIII => realize_case3(a1, a2, a3, a13),
    }
}

/// Middle case: seed `B_2 * C_3 * B_2` (cd-index `c⁴ + cdc`), then unzip
/// `(tau_i, rho)` `b_i` times and `(pi, sigma_i)` `c_i` times, where
/// `sigma_i` is the rank-3 element *not* above `tau_i`. Each `(tau_i, rho)`
/// unzip adds `dc²`; each `(pi, sigma_i)` unzip adds `c²d + (α_1 − b_i) d²`
/// because the lower interval of `sigma_i` has grown into a
/// `(2 + b_j + b_k)`-gon.
fn realize_case2(w: CaseWitness) -> Result<Realization, RealizeError> {
    let seed = seed_rank5(3)?;
    let mut trace = vec!["join: B_2 * C_3 * B_2".to_string()];
    // Opposite pairing: sigma_i is the unique rank-3 element not above
    // tau_i. With the cyclic seed labels that is sigmas[i+1].
    let sigmas: Vec<ElementId> =
        (0..3).map(|i| seed.sigmas[(i + 1) % 3]).collect();
    trace.push(format!(
        "labels: rho={}, tau=[{}, {}, {}], sigma=[{}, {}, {}], pi={}",
        seed.rho.0,
        seed.taus[0].0,
        seed.taus[1].0,
        seed.taus[2].0,
        sigmas[0].0,
        sigmas[1].0,
        sigmas[2].0,
        seed.pi.0
    ));
    let mut poset = seed.poset;
    for (i, (&tau, &b)) in seed.taus.iter().zip(&w.b).enumerate() {
        let name = format!("tau_{}", i + 1);
        poset = unzip_step(poset, tau, &name, seed.rho, "rho", b, &mut trace)?;
    }
    for (i, (&sigma, &c)) in sigmas.iter().zip(&w.c).enumerate() {
        let name = format!("sigma_{}", i + 1);
        poset = unzip_step(poset, seed.pi, "pi", sigma, &name, c, &mut trace)?;
    }
    Ok(Realization { poset, trace })
}

/// Last case: seed `B_2 * C_4 * B_2` (cd-index `c⁴ + 2cdc`) with cyclic
/// labels, then one of three schedules chosen by `α_1` and `α_13`; all end
/// by unzipping `(sigma_1, tau_1)` `(α_2 − 2)` times, which adds `cdc` per
/// step once tau_1's lower interval has been cut down to a Boolean square.
fn realize_case3(a1: u64, a2: u64, a3: u64, a13: u64) -> Result<Realization, RealizeError> {
    let seed = seed_rank5(4)?;
    let mut trace = vec!["join: B_2 * C_4 * B_2".to_string()];
    trace.push(format!(
        "labels: rho={}, tau=[{}, {}, {}, {}], sigma=[{}, {}, {}, {}], pi={}",
        seed.rho.0,
        seed.taus[0].0,
        seed.taus[1].0,
        seed.taus[2].0,
        seed.taus[3].0,
        seed.sigmas[0].0,
        seed.sigmas[1].0,
        seed.sigmas[2].0,
        seed.sigmas[3].0,
        seed.pi.0
    ));
    let (rho, pi) = (seed.rho, seed.pi);
    let (tau, sigma) = (&seed.taus, &seed.sigmas);
    let mut p = seed.poset;
    if a1 == 0 {
        // α_13 ≤ α_1 α_3 forces α_13 = 0: only the c²d and cdc terms grow.
        p = unzip_step(p, pi, "pi", sigma[0], "sigma_1", a3, &mut trace)?;
    } else if a13 <= a1 {
        // Raise d² by α_13 through tau_1 before touching sigma_1, so the
        // single (pi, sigma_1) unzip sees the enlarged lower interval.
        p = unzip_step(p, tau[0], "tau_1", rho, "rho", a13, &mut trace)?;
        p = unzip_step(p, tau[3], "tau_4", rho, "rho", a1 - a13, &mut trace)?;
        if a3 > 0 {
            p = unzip_step(p, pi, "pi", sigma[0], "sigma_1", 1, &mut trace)?;
            p = unzip_step(p, pi, "pi", sigma[1], "sigma_2", a3 - 1, &mut trace)?;
        }
    } else {
        // α_13 > α_1 ≥ 1: split α_13 = α_1 β − p with β = ⌈α_13 / α_1⌉, so
        // β − 1 unzips through the enlarged sigma_1 and one through sigma_4
        // land exactly α_13 copies of d².
        let beta = a13.div_ceil(a1);
        let excess = a1 * beta - a13;
        p = unzip_step(p, tau[0], "tau_1", rho, "rho", a1 - excess, &mut trace)?;
        p = unzip_step(p, tau[1], "tau_2", rho, "rho", excess, &mut trace)?;
        p = unzip_step(p, pi, "pi", sigma[0], "sigma_1", beta - 1, &mut trace)?;
        p = unzip_step(p, pi, "pi", sigma[2], "sigma_3", a3 - beta, &mut trace)?;
        p = unzip_step(p, pi, "pi", sigma[3], "sigma_4", 1, &mut trace)?;
    }
    p = unzip_step(p, sigma[0], "sigma_1", tau[0], "tau_1", a2 - 2, &mut trace)?;
    Ok(Realization { poset: p, trace })
}

/// See [`realize_rank5_cd_traced`]; drops the trace.
pub fn realize_rank5_cd(t: &Rank5Coeffs) -> Result<GradedPoset, RealizeError> {
    Ok(realize_rank5_cd_traced(t)?.poset)
}

/// The smallest-`a` split `x = a + b` with `ab = y`, if one exists.
pub fn exact_pair(x: u64, y: u64) -> Option<(u64, u64)> {
    (0..=x / 2).map(|a| (a, x - a)).find(|&(a, b)| a as u128 * b as u128 == y as u128)
}

/// Whether `(1, x, y)` is the d-vector of some rank-5 poset in the class:
/// `4y ≤ (x−1)²` or `y = ab` for a split `x = a + b`.
pub fn feasible_rank5_d(x: u64, y: u64) -> bool {
    below_parabola(x, y, 1) || exact_pair(x, y).is_some()
}

/// `4y ≤ (x − shift)²`, exactly, treating `x < shift` as a zero base.
fn below_parabola(x: u64, y: u64, shift: u64) -> bool {
    let base = x.saturating_sub(shift) as u128;
    4 * y as u128 <= base * base
}

/// Picks `(a, b)` with `y ≤ ab`, `a + b ≤ x − 1` and `a(b−1) < y`,
/// scanning `a` upward and `b` from the least candidate per `a`. Only
/// called when `4y ≤ (x−1)²` and no exact split exists, which guarantees a
/// match with `y ≥ 1`.
fn rank5_d_split(x: u64, y: u64) -> Option<(u64, u64)> {
    for a in 0..x {
        let lo = y.div_ceil(a.max(1));
        for b in lo..=x.saturating_sub(1 + a) {
            if (y as u128) <= a as u128 * b as u128 && a as u128 * (b as u128 - 1) < y as u128 {
                return Some((a, b));
            }
        }
    }
    None
}

/// Builds a rank-5 poset with d-vector `(1, x, y)`: a join of two cycle
/// blocks when `y` splits as a product, otherwise a rank-5 cd-index
/// realization of `(a, x−a−b, b, y)`.
pub fn realize_rank5_d_traced(x: u64, y: u64) -> Result<Realization, RealizeError> {
    let infeasible = || RealizeError::InfeasibleTarget(format!("rank-5 d-vector (1, {x}, {y})"));
    if let Some((a, b)) = exact_pair(x, y) {
        let poset = cycle_or_boolean_join(a + 2)?.join(&cycle_or_boolean_join(b + 2)?);
        let trace = vec![format!("join: {} * {}", block_name(a + 2), block_name(b + 2))];
        return Ok(Realization { poset, trace });
    }
    if !below_parabola(x, y, 1) {
        return Err(infeasible());
    }
    let (a, b) = rank5_d_split(x, y).ok_or_else(infeasible)?;
    let target = Rank5Coeffs::new(a, x - a - b, b, y);
    let mut out = realize_rank5_cd_traced(&target)?;
    out.trace.insert(0, format!("reduce: d-vector (1, {x}, {y}) to cd-index {target}"));
    Ok(out)
}

/// See [`realize_rank5_d_traced`]; drops the trace.
pub fn realize_rank5_d(x: u64, y: u64) -> Result<GradedPoset, RealizeError> {
    Ok(realize_rank5_d_traced(x, y)?.poset)
}

/// Whether `(1, x, y)` is the d-vector of some rank-6 poset in the class:
/// `4y ≤ x²` exactly.
pub fn feasible_rank6_d(x: u64, y: u64) -> bool {
    below_parabola(x, y, 0)
}

/// Builds a rank-6 poset with d-vector `(1, x, y)`. When the target is
/// already attainable in rank 5 the rank-5 poset is joined with a Boolean
/// block (which leaves the d-vector unchanged); otherwise the seed
/// `C_{a−r+2} * B_2 * C_{b+1}` is unzipped `r` times at `(sigma, rho)` and
/// once at `(pi, tau)`.
pub fn realize_rank6_d_traced(x: u64, y: u64) -> Result<Realization, RealizeError> {
    let infeasible = || RealizeError::InfeasibleTarget(format!("rank-6 d-vector (1, {x}, {y})"));
    if !feasible_rank6_d(x, y) {
        return Err(infeasible());
    }
    if feasible_rank5_d(x, y) {
        let mut out = realize_rank5_d_traced(x, y)?;
        out.poset = out.poset.join(&build_boolean2());
        out.trace.push("join: B_2".to_string());
        return Ok(out);
    }
    // Here (x−1)² < 4y ≤ x² and y has no exact split, so a split with
    // a(b−1) < y ≤ ab and b ≥ 2 exists; r = ab − y < a keeps both cycle
    // blocks non-degenerate.
    let (a, b) = (2..x)
        .map(|b| (x - b, b))
        .find(|&(a, b)| {
            (y as u128) <= a as u128 * b as u128 && a as u128 * (b as u128 - 1) < y as u128
        })
        .ok_or_else(infeasible)?;
    let r = a * b - y;
    let (left, right) = (a - r + 2, b + 1);
    if left < 3 {
        return Err(RealizeError::DegenerateCycle { len: left });
    }
    if right < 3 {
        return Err(RealizeError::DegenerateCycle { len: right });
    }
    let poset = build_cycle_poset(left)?
        .join(&build_boolean2())
        .join(&build_cycle_poset(right)?);
    let mut trace = vec![format!("join: C_{left} * B_2 * C_{right}")];
    let rho = min_of_rank(&poset, 2);
    let tau = min_of_rank(&poset, 3);
    let sigma = *poset
        .rank_layer(3)
        .iter()
        .max_by_key(|e| e.0)
        .expect("rank layer is nonempty");
    let pi = min_of_rank(&poset, 4);
    trace.push(format!("labels: rho={}, tau={}, sigma={}, pi={}", rho.0, tau.0, sigma.0, pi.0));
    let mut p = unzip_step(poset, sigma, "sigma", rho, "rho", r, &mut trace)?;
    p = unzip_step(p, pi, "pi", tau, "tau", 1, &mut trace)?;
    Ok(Realization { poset: p, trace })
}

/// See [`realize_rank6_d_traced`]; drops the trace.
pub fn realize_rank6_d(x: u64, y: u64) -> Result<GradedPoset, RealizeError> {
    Ok(realize_rank6_d_traced(x, y)?.poset)
}

/// Whether `(1, x, y)` is the γ-vector of some flag homology 4-sphere:
/// `4y ≤ x²` exactly.
pub fn feasible_gamma4(x: u64, y: u64) -> bool {
    below_parabola(x, y, 0)
}

/// Runs one edge subdivision with a fresh vertex and records it.
fn subdivide_step(
    k: SimplicialComplex,
    i: u64,
    i_name: &str,
    j: u64,
    trace: &mut Vec<String>,
) -> Result<(SimplicialComplex, u64), RealizeError> {
    let v = k.vertices().iter().max().map_or(0, |m| m + 1);
    trace.push(format!("subdivide edge {{{i_name}={i}, {j}}} -> {v}"));
    Ok((k.edge_subdivision(i, j, v)?, v))
}

/// Builds a flag simplicial complex that is a homology 4-sphere with
/// γ-vector `(1, x, y)`, with a replayable trace. When `y` splits as a
/// product over `x` and `4y ≤ (x−1)²`, the complex is a suspended join of
/// two cycles; otherwise the seed `C_{a−r+4} * S⁰ * C_{b+3}` is subdivided
/// `r` times along edges at one suspension vertex and once at the other.
pub fn build_flag_gamma4_traced(x: u64, y: u64) -> Result<ComplexRealization, RealizeError> {
    let infeasible = || RealizeError::InfeasibleTarget(format!("gamma-vector (1, {x}, {y})"));
    if !feasible_gamma4(x, y) {
        return Err(infeasible());
    }
    if below_parabola(x, y, 1) {
        if let Some((a, b)) = exact_pair(x, y) {
            let complex = cycle_complex(a + 4).join(&cycle_complex(b + 4)).join(&zero_sphere());
            let trace = vec![format!("join: cycle({}) * cycle({}) * S0", a + 4, b + 4)];
            return Ok(ComplexRealization { complex, trace });
        }
    }
    // y ≥ 1 here (y = 0 always splits as 0 · x), so a split with
    // a(b−1) < y ≤ ab, a + b = x and a ≥ 1 exists; r = ab − y < a.
    let (a, b) = (1..x)
        .map(|a| (a, x - a))
        .find(|&(a, b)| {
            (y as u128) <= a as u128 * b as u128 && a as u128 * (b as u128 - 1) < y as u128
        })
        .ok_or_else(infeasible)?;
    let r = a * b - y;
    let first = cycle_complex(a - r + 4);
    let s = *first.vertices().iter().min().expect("cycle has vertices");
    let with_poles = first.join(&zero_sphere());
    let mut verts = with_poles.vertices().into_iter().collect::<Vec<_>>();
    verts.sort_unstable();
    let (u, v) = (verts[verts.len() - 2], verts[verts.len() - 1]);
    let complex = with_poles.join(&cycle_complex(b + 3));
    // The second cycle is relabeled past both poles, so its least vertex is
    // the least vertex above `v`.
    let t = *complex.vertices().range(v + 1..).next().expect("second cycle has vertices");
    let mut trace = vec![format!("join: cycle({}) * S0 * cycle({})", a - r + 4, b + 3)];
    trace.push(format!("labels: u={u}, v={v}, s={s}, t={t}"));
    let mut k = complex;
    let mut target = s;
    for _ in 0..r {
        let (next, fresh) = subdivide_step(k, u, "u", target, &mut trace)?;
        k = next;
        target = fresh;
    }
    let (k, _) = subdivide_step(k, v, "v", t, &mut trace)?;
    Ok(ComplexRealization { complex: k, trace })
}

/// See [`build_flag_gamma4_traced`]; drops the trace.
pub fn build_flag_gamma4(x: u64, y: u64) -> Result<SimplicialComplex, RealizeError> {
    Ok(build_flag_gamma4_traced(x, y)?.complex)
}
