//! Condition (E): nonnegative integer equations, `N` of them at the polygon
//! vertices (value `δ_N`) and any number elsewhere (value `π` or `2π`), whose
//! `α`, `β` and `γ` column sums agree.
//!
//! Writing each equation as its balance vector `(p − q, p − r)`, the
//! condition asks for a multiset of `N` vertex equations plus interior
//! equations whose vectors sum to zero. The decision runs two independent
//! routes:
//!
//! * refutation: a linear functional `f = λ(p − q) + μ(p − r)` that is
//!   positive on every vertex equation and nonnegative on every interior
//!   equation; summing `f` over a balanced system would then give `0 > 0`;
//! * witness: a search over vertex compositions and interior multisets.
//!
//! Any multiset of vectors of sup-norm at most `M` can be ordered so that its
//! partial sums stay within `2M` of the segment from the origin to the total
//! (Steinitz lemma). The witness search therefore only visits lattice points
//! in that box; inside it the search is exhaustive.

use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::angles::{check_ngon, enumerate_solutions, AngleTriple, EquationSolution, Target};
use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// An equation together with how many times it is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counted {
    pub equation: EquationSolution,
    pub count: u64,
}

/// A system of equations satisfying Condition (E). Both lists are sorted by
/// equation and hold positive counts only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EWitness {
    pub vertex_counts: Vec<Counted>,
    pub interior_counts: Vec<Counted>,
}

impl EWitness {
    /// Builds a witness from `(equation, count)` pairs, merging duplicates.
    pub fn from_counts(
        vertex: impl IntoIterator<Item = (EquationSolution, u64)>,
        interior: impl IntoIterator<Item = (EquationSolution, u64)>,
    ) -> Self {
        fn collect(items: impl IntoIterator<Item = (EquationSolution, u64)>) -> Vec<Counted> {
            let mut merged = std::collections::BTreeMap::new();
            for (equation, count) in items {
                *merged.entry(equation).or_insert(0u64) += count;
            }
            merged
                .into_iter()
                .filter(|&(_, count)| count > 0)
                .map(|(equation, count)| Counted { equation, count })
                .collect()
        }
        EWitness {
            vertex_counts: collect(vertex),
            interior_counts: collect(interior),
        }
    }

    /// Column sums `(Σp, Σq, Σr)` over every counted equation.
    pub fn column_sums(&self) -> [u128; 3] {
        let mut sums = [0u128; 3];
        for entry in self.vertex_counts.iter().chain(&self.interior_counts) {
            for (slot, coeff) in sums.iter_mut().zip(entry.equation.coefficients()) {
                *slot += coeff as u128 * entry.count as u128;
            }
        }
        sums
    }

    pub fn interior_total(&self) -> u64 {
        self.interior_counts.iter().map(|c| c.count).sum()
    }

    /// Number of interior equations with value `2π`.
    pub fn full_turns(&self) -> u64 {
        self.interior_counts
            .iter()
            .filter(|c| c.equation.target == Target::InteriorTwoPi)
            .map(|c| c.count)
            .sum()
    }
}

/// A balance functional `f(p, q, r) = λ(p − q) + μ(p − r)` ruling out
/// Condition (E).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ERefutation {
    pub lambda: i64,
    pub mu: i64,
    /// Smallest value of `±f` over the vertex equations, where the sign is
    /// the one making `f` positive there.
    pub vertex_min: Rational,
    /// Vertex equations the certificate speaks about; `None` means every
    /// solution of the vertex identity.
    pub vertex_scope: Option<Vec<EquationSolution>>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EReport {
    Feasible { witness: EWitness },
    Infeasible { refutation: ERefutation },
    Unknown { bound: u64, reason: String },
}

impl EReport {
    pub fn is_feasible(&self) -> bool {
        matches!(self, EReport::Feasible { .. })
    }
    pub fn is_infeasible(&self) -> bool {
        matches!(self, EReport::Infeasible { .. })
    }
    pub fn is_unknown(&self) -> bool {
        matches!(self, EReport::Unknown { .. })
    }
    pub fn label(&self) -> &'static str {
        match self {
            EReport::Feasible { .. } => "feasible",
            EReport::Infeasible { .. } => "infeasible",
            EReport::Unknown { .. } => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EOptions {
    /// Cap on the number of interior equations in a witness. Defaults to
    /// `4·N·n`.
    pub bound: Option<u64>,
    /// Coefficient bound for `|λ|` and `|μ|`. Defaults to `4·n`.
    pub functional_bound: Option<u64>,
    pub refute: bool,
    /// Run the witness search even after a refutation was found, and fail
    /// loudly if both succeed.
    pub cross_check: bool,
    /// Restrict the vertex equations, e.g. to the uniform equation of a
    /// vertex form. `None` allows every solution of the vertex identity.
    pub vertex_equations: Option<Vec<EquationSolution>>,
    /// Maximum number of lattice states the witness search may store.
    pub state_budget: usize,
}

impl Default for EOptions {
    fn default() -> Self {
        EOptions {
            bound: None,
            functional_bound: None,
            refute: true,
            cross_check: true,
            vertex_equations: None,
            state_budget: 4_000_000,
        }
    }
}

/// Decides Condition (E) with default options and an optional witness bound.
pub fn check_e(triple: &AngleTriple, sides: u64, search_bound: Option<u64>) -> Result<EReport> {
    check_e_with(
        triple,
        sides,
        &EOptions {
            bound: search_bound,
            ..EOptions::default()
        },
    )
}

struct Equations {
    vertex: Vec<EquationSolution>,
    interior: Vec<EquationSolution>,
}

fn vertex_set(
    triple: &AngleTriple,
    sides: u64,
    scope: Option<&[EquationSolution]>,
) -> Result<Vec<EquationSolution>> {
    match scope {
        None => enumerate_solutions(triple, sides, Target::VertexDelta),
        Some(list) => {
            for eq in list {
                if eq.target != Target::VertexDelta || !eq.holds(triple, sides) {
                    return Err(Error::NotAVertexSolution(format!("{eq} for {triple} at N = {sides}")));
                }
            }
            let mut list = list.to_vec();
            list.sort();
            list.dedup();
            Ok(list)
        }
    }
}

fn equations(triple: &AngleTriple, sides: u64, scope: Option<&[EquationSolution]>) -> Result<Equations> {
    let mut interior = enumerate_solutions(triple, sides, Target::InteriorPi)?;
    interior.extend(enumerate_solutions(triple, sides, Target::InteriorTwoPi)?);
    Ok(Equations {
        vertex: vertex_set(triple, sides, scope)?,
        interior,
    })
}

pub fn check_e_with(triple: &AngleTriple, sides: u64, options: &EOptions) -> Result<EReport> {
    check_ngon(sides)?;
    let scope = options.vertex_equations.as_deref();
    let eqs = equations(triple, sides, scope)?;
    let bound = options
        .bound
        .unwrap_or_else(|| 4u64.saturating_mul(sides).saturating_mul(triple.n()));
    let vertex_scope = options.vertex_equations.as_ref().map(|_| eqs.vertex.clone());

    if eqs.vertex.is_empty() {
        return Ok(EReport::Infeasible {
            refutation: ERefutation {
                lambda: 0,
                mu: 0,
                vertex_min: Rational::zero(),
                vertex_scope,
                note: "no vertex solution".into(),
            },
        });
    }

    let refutation = if options.refute {
        let r = options.functional_bound.unwrap_or(4 * triple.n());
        find_functional(&eqs, r)?.map(|(lambda, mu, vertex_min)| ERefutation {
            lambda,
            mu,
            vertex_min: Rational::from(vertex_min),
            vertex_scope: vertex_scope.clone(),
            note: format!(
                "f = {lambda}(p-q) + {mu}(p-r) is >= {vertex_min} on every vertex equation \
                 and >= 0 on every interior equation"
            ),
        })
    } else {
        None
    };

    let search = if refutation.is_none() || options.cross_check {
        Some(search_witness(&eqs, sides, bound, options.state_budget)?)
    } else {
        None
    };

    match (refutation, search) {
        (Some(_), Some(SearchOutcome::Found(w))) => Err(Error::Internal(format!(
            "{triple} at N = {sides}: both a refutation and a witness ({} interior equations) exist",
            w.interior_total()
        ))),
        (Some(refutation), _) => {
            debug_assert!(verify_refutation(triple, sides, &refutation));
            Ok(EReport::Infeasible { refutation })
        }
        (None, Some(SearchOutcome::Found(witness))) => {
            if !verify_witness(triple, sides, &witness) {
                return Err(Error::Internal(format!("witness for {triple} does not verify")));
            }
            Ok(EReport::Feasible { witness })
        }
        (None, Some(SearchOutcome::Stopped(reason))) => Ok(EReport::Unknown {
            bound,
            reason: reason.to_string(),
        }),
        (None, None) => unreachable!("the witness search runs whenever no refutation exists"),
    }
}

/// Exact re-verification of a witness.
pub fn verify_witness(triple: &AngleTriple, sides: u64, witness: &EWitness) -> bool {
    if check_ngon(sides).is_err() {
        return false;
    }
    let vertex_total: u128 = witness.vertex_counts.iter().map(|c| c.count as u128).sum();
    if vertex_total != sides as u128 {
        return false;
    }
    let vertex_ok = witness
        .vertex_counts
        .iter()
        .all(|c| c.equation.target == Target::VertexDelta && c.equation.holds(triple, sides));
    let interior_ok = witness
        .interior_counts
        .iter()
        .all(|c| c.equation.target.is_interior() && c.equation.holds(triple, sides));
    let [p, q, r] = witness.column_sums();
    vertex_ok && interior_ok && p == q && q == r
}

/// Exact re-verification of a refutation over the complete solution sets.
pub fn verify_refutation(triple: &AngleTriple, sides: u64, cert: &ERefutation) -> bool {
    let Ok(eqs) = equations(triple, sides, cert.vertex_scope.as_deref()) else {
        return false;
    };
    if eqs.vertex.is_empty() {
        return true;
    }
    let f = |eq: &EquationSolution| {
        let (x, y) = eq.balance();
        cert.lambda as i128 * x as i128 + cert.mu as i128 * y as i128
    };
    [1i128, -1].into_iter().any(|sign| {
        let vertex_values: Vec<i128> = eqs.vertex.iter().map(|e| sign * f(e)).collect();
        let min = *vertex_values.iter().min().expect("nonempty");
        min > 0
            && eqs.interior.iter().all(|e| sign * f(e) >= 0)
            && cert.vertex_min == Rational::from_integer(min)
    })
}

/// Searches `|λ|, |μ| ≤ bound` for a functional positive on the vertex balance
/// vectors and nonnegative on the interior ones. Minimizes `|λ| + |μ|`, then
/// prefers larger `λ`, then larger `μ`.
fn find_functional(eqs: &Equations, bound: u64) -> Result<Option<(i64, i64, i64)>> {
    let bound = i64::try_from(bound).map_err(|_| Error::Overflow("functional bound".into()))?;
    let constraints: Vec<((i128, i128), bool)> = eqs
        .vertex
        .iter()
        .map(|e| (e.balance(), true))
        .chain(eqs.interior.iter().map(|e| (e.balance(), false)))
        .map(|((x, y), strict)| ((x as i128, y as i128), strict))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();

    let mut best: Option<(i64, i64)> = None;
    let key = |(l, m): (i64, i64)| (l.abs() + m.abs(), -l, -m);
    for lambda in (-bound..=bound).rev() {
        let (mut lo, mut hi) = (-(bound as i128), bound as i128);
        let l = lambda as i128;
        let mut possible = true;
        for &((x, y), strict) in &constraints {
            // Need l·x + μ·y > 0 (strict) or ≥ 0.
            let s = -l * x;
            if y == 0 {
                if (strict && l * x <= 0) || (!strict && l * x < 0) {
                    possible = false;
                    break;
                }
            } else if y > 0 {
                // μ > s / y
                let m = if strict { Integer::div_floor(&s, &y) + 1 } else { Integer::div_ceil(&s, &y) };
                lo = lo.max(m);
            } else {
                // μ·y > s with y < 0  ⇔  μ < s / y
                let m = if strict { Integer::div_ceil(&s, &y) - 1 } else { Integer::div_floor(&s, &y) };
                hi = hi.min(m);
            }
        }
        if !possible || lo > hi {
            continue;
        }
        let mu = if lo > 0 {
            lo
        } else if hi < 0 {
            hi
        } else {
            0
        } as i64;
        if lambda == 0 && mu == 0 {
            continue;
        }
        let candidate = (lambda, mu);
        if best.is_none_or(|b| key(candidate) < key(b)) {
            best = Some(candidate);
        }
    }
    Ok(best.map(|(lambda, mu)| {
        let vertex_min = eqs
            .vertex
            .iter()
            .map(|e| {
                let (x, y) = e.balance();
                lambda * x + mu * y
            })
            .min()
            .expect("nonempty");
        (lambda, mu, vertex_min)
    }))
}

enum SearchOutcome {
    Found(EWitness),
    Stopped(StopReason),
}

#[derive(Clone, Copy)]
enum StopReason {
    Exhausted,
    BoundReached,
    Budget,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::Exhausted => {
                "witness search exhausted its Steinitz box; no balance functional within the coefficient bound"
            }
            StopReason::BoundReached => "no witness within the interior-equation bound",
            StopReason::Budget => "witness search exceeded its state budget",
        })
    }
}

type Point = (i64, i64);

/// A vertex composition: counts aligned with the vertex equation list.
struct Composition {
    sum: Point,
    counts: Vec<u64>,
}

/// All balance sums reachable by `sides` vertex equations, each with the
/// lexicographically largest count vector producing it.
fn vertex_compositions(
    vertex: &[EquationSolution],
    sides: u64,
    budget: usize,
) -> Option<Vec<Composition>> {
    let vectors: Vec<Point> = vertex.iter().map(|e| e.balance()).collect();
    let mut states: HashMap<(Point, u64), Vec<u64>> = HashMap::new();
    states.insert(((0, 0), 0), Vec::new());
    let last = vectors.len() - 1;
    for (i, &(x, y)) in vectors.iter().enumerate() {
        let mut next: HashMap<(Point, u64), Vec<u64>> = HashMap::new();
        for (((sx, sy), used), counts) in states {
            let range: Box<dyn Iterator<Item = u64>> = if i == last {
                Box::new(std::iter::once(sides - used))
            } else {
                Box::new(0..=sides - used)
            };
            for m in range {
                let mi = m as i64;
                let key = ((sx + mi * x, sy + mi * y), used + m);
                let mut c = counts.clone();
                c.push(m);
                match next.get(&key) {
                    Some(existing) if *existing >= c => {}
                    _ => {
                        next.insert(key, c);
                    }
                }
            }
            if next.len() > budget {
                return None;
            }
        }
        states = next;
    }
    let mut out: Vec<Composition> = states
        .into_iter()
        .map(|((sum, _), counts)| Composition { sum, counts })
        .collect();
    out.sort_by(|a, b| b.counts.cmp(&a.counts));
    Some(out)
}

struct Move {
    delta: Point,
    full_turn: bool,
    equation: usize,
}

struct Label {
    state: Point,
    full_turns: u64,
    parent: usize,
    mv: usize,
}

/// Finds a witness minimizing the number of `2π` equations, then the number
/// of interior equations. Remaining ties go to earlier vertex compositions
/// and to earlier equations in the search order.
fn search_witness(eqs: &Equations, sides: u64, bound: u64, budget: usize) -> Result<SearchOutcome> {
    let Some(compositions) = vertex_compositions(&eqs.vertex, sides, budget) else {
        return Ok(SearchOutcome::Stopped(StopReason::Budget));
    };

    let build = |comp: &Composition, interior: Vec<(EquationSolution, u64)>| {
        EWitness::from_counts(
            eqs.vertex.iter().copied().zip(comp.counts.iter().copied()),
            interior,
        )
    };
    if let Some(comp) = compositions.iter().find(|c| c.sum == (0, 0)) {
        return Ok(SearchOutcome::Found(build(comp, Vec::new())));
    }

    // Interior moves, skipping zero vectors and dominated duplicates.
    let mut moves: Vec<Move> = Vec::new();
    let mut seen: HashSet<Point> = HashSet::new();
    for (idx, eq) in eqs.interior.iter().enumerate() {
        let delta = eq.balance();
        if delta != (0, 0) && seen.insert(delta) {
            moves.push(Move {
                delta,
                full_turn: eq.target == Target::InteriorTwoPi,
                equation: idx,
            });
        }
    }
    if moves.is_empty() {
        return Ok(SearchOutcome::Stopped(StopReason::Exhausted));
    }

    // target point → index of the first composition needing it
    let mut targets: HashMap<Point, usize> = HashMap::new();
    for (i, comp) in compositions.iter().enumerate() {
        targets.entry((-comp.sum.0, -comp.sum.1)).or_insert(i);
    }
    let reach = moves
        .iter()
        .map(|m| m.delta.0.abs().max(m.delta.1.abs()))
        .max()
        .expect("nonempty");
    let margin = 2 * reach + 1;
    let (mut x0, mut x1, mut y0, mut y1) = (0i64, 0i64, 0i64, 0i64);
    for &(x, y) in targets.keys() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x0, x1, y0, y1) = (x0 - margin, x1 + margin, y0 - margin, y1 + margin);
    let inside = |(x, y): Point| x >= x0 && x <= x1 && y >= y0 && y <= y1;

    let mut labels = vec![Label {
        state: (0, 0),
        full_turns: 0,
        parent: usize::MAX,
        mv: usize::MAX,
    }];
    let mut best_turns: HashMap<Point, u64> = HashMap::new();
    best_turns.insert((0, 0), 0);
    let mut frontier = vec![0usize];
    // (full turns, layer, composition index, label)
    let mut found: Option<(u64, u64, usize, usize)> = None;
    let mut layer = 0u64;
    let mut stop = StopReason::Exhausted;

    while !frontier.is_empty() {
        if layer >= bound {
            stop = StopReason::BoundReached;
            break;
        }
        layer += 1;
        let mut next: HashMap<Point, usize> = HashMap::new();
        let mut order: Vec<Point> = Vec::new();
        for &li in &frontier {
            let (state, turns) = (labels[li].state, labels[li].full_turns);
            for (mi, mv) in moves.iter().enumerate() {
                let to = (state.0 + mv.delta.0, state.1 + mv.delta.1);
                if !inside(to) {
                    continue;
                }
                let t = turns + mv.full_turn as u64;
                if found.is_some_and(|(ft, ..)| t >= ft) {
                    continue;
                }
                if best_turns.get(&to).is_some_and(|&b| b <= t) {
                    continue;
                }
                match next.get(&to) {
                    Some(&existing) if labels[existing].full_turns <= t => continue,
                    Some(&existing) => {
                        labels[existing] = Label { state: to, full_turns: t, parent: li, mv: mi };
                    }
                    None => {
                        labels.push(Label { state: to, full_turns: t, parent: li, mv: mi });
                        next.insert(to, labels.len() - 1);
                        order.push(to);
                    }
                }
            }
        }
        frontier.clear();
        for point in order {
            let li = next[&point];
            best_turns.insert(point, labels[li].full_turns);
            frontier.push(li);
            if let Some(&ci) = targets.get(&point) {
                let t = labels[li].full_turns;
                let better = match found {
                    None => true,
                    Some((ft, fl, fc, _)) => (t, layer, ci) < (ft, fl, fc),
                };
                if better {
                    found = Some((t, layer, ci, li));
                }
            }
        }
        // A hit found so far may not be optimal yet, so it is not reported.
        if best_turns.len() > budget || labels.len() > budget.saturating_mul(4) {
            return Ok(SearchOutcome::Stopped(StopReason::Budget));
        }
    }

    match found {
        Some((_, _, ci, mut li)) => {
            let mut interior: Vec<(EquationSolution, u64)> = Vec::new();
            while labels[li].parent != usize::MAX {
                let mv = &moves[labels[li].mv];
                interior.push((eqs.interior[mv.equation], 1));
                li = labels[li].parent;
            }
            Ok(SearchOutcome::Found(build(&compositions[ci], interior)))
        }
        None => Ok(SearchOutcome::Stopped(stop)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::make_triple;
    use proptest::prelude::*;

    fn t(a: u64, b: u64, c: u64, n: u64) -> AngleTriple {
        make_triple(a, b, c, n).unwrap()
    }
    fn v(p: u64, q: u64, r: u64) -> EquationSolution {
        EquationSolution::new(Target::VertexDelta, p, q, r)
    }
    fn pi(p: u64, q: u64, r: u64) -> EquationSolution {
        EquationSolution::new(Target::InteriorPi, p, q, r)
    }
    fn two_pi(p: u64, q: u64, r: u64) -> EquationSolution {
        EquationSolution::new(Target::InteriorTwoPi, p, q, r)
    }
    fn only(eq: EquationSolution) -> EOptions {
        EOptions {
            vertex_equations: Some(vec![eq]),
            ..EOptions::default()
        }
    }
    fn witness_of(report: EReport) -> EWitness {
        match report {
            EReport::Feasible { witness } => witness,
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    fn pentagon_witness() -> EWitness {
        EWitness::from_counts([(v(1, 0, 0), 5)], [(pi(0, 1, 3), 1), (pi(0, 4, 2), 1)])
    }

    #[test]
    fn pentagon_with_uniform_vertices() {
        let triple = t(6, 1, 3, 10);
        let w = witness_of(check_e_with(&triple, 5, &only(v(1, 0, 0))).unwrap());
        assert_eq!(w, pentagon_witness());
        assert_eq!(w.column_sums(), [5, 5, 5]);
    }

    #[test]
    fn pentagon_with_mixed_vertices_needs_no_interior() {
        // 3×α + 1×2γ + 1×(3β+γ) balances on its own.
        let triple = t(6, 1, 3, 10);
        let w = witness_of(check_e(&triple, 5, None).unwrap());
        assert!(verify_witness(&triple, 5, &w));
        assert_eq!(w.interior_total(), 0);
    }

    #[test]
    fn verify_witness_examples() {
        let triple = t(6, 1, 3, 10);
        assert!(verify_witness(&triple, 5, &pentagon_witness()));
        let short = EWitness::from_counts([(v(1, 0, 0), 4)], [(pi(0, 1, 3), 1), (pi(0, 4, 2), 1)]);
        assert!(!verify_witness(&triple, 5, &short));
        let bad = EWitness::from_counts([(v(1, 0, 0), 5)], [(pi(0, 1, 3), 1), (pi(0, 4, 1), 1)]);
        assert!(!verify_witness(&triple, 5, &bad));
    }

    #[test]
    fn n42_and_n30_witnesses() {
        let w = witness_of(check_e_with(&t(20, 10, 12, 42), 42, &only(v(2, 0, 0))).unwrap());
        let expected =
            EWitness::from_counts([(v(2, 0, 0), 42)], [(two_pi(0, 0, 7), 8), (pi(0, 3, 1), 28)]);
        assert_eq!(w, expected);
        assert_eq!(w.column_sums(), [84, 84, 84]);

        let w = witness_of(check_e_with(&t(14, 6, 10, 30), 30, &only(v(2, 0, 0))).unwrap());
        let expected =
            EWitness::from_counts([(v(2, 0, 0), 30)], [(pi(0, 0, 3), 20), (pi(0, 5, 0), 12)]);
        assert_eq!(w, expected);
    }

    #[test]
    fn n78_is_refuted_by_p_minus_q() {
        let triple = t(38, 17, 23, 78);
        let report = check_e(&triple, 78, None).unwrap();
        let EReport::Infeasible { refutation } = report else { panic!("{report:?}") };
        assert_eq!((refutation.lambda, refutation.mu), (1, 0));
        assert!(verify_refutation(&triple, 78, &refutation));
        let zero = ERefutation { lambda: 0, mu: 0, ..refutation.clone() };
        assert!(!verify_refutation(&triple, 78, &zero));
        let wrong_min = ERefutation { vertex_min: Rational::from(3i64), ..refutation };
        assert!(!verify_refutation(&triple, 78, &wrong_min));
    }

    #[test]
    fn n60_triples_are_refuted() {
        for triple in [t(29, 12, 19, 60), t(29, 11, 20, 60)] {
            let report = check_e(&triple, 60, None).unwrap();
            let EReport::Infeasible { refutation } = &report else { panic!("{report:?}") };
            assert!(verify_refutation(&triple, 60, refutation));
        }
    }

    #[test]
    fn feasible_instance_has_no_certificate() {
        let triple = t(6, 1, 3, 10);
        for scope in [None, Some(vec![v(1, 0, 0)])] {
            for lambda in -40..=40 {
                for mu in -40..=40 {
                    for vertex_min in [1i64, 2, 3, 5] {
                        let cert = ERefutation {
                            lambda,
                            mu,
                            vertex_min: Rational::from(vertex_min),
                            vertex_scope: scope.clone(),
                            note: String::new(),
                        };
                        assert!(!verify_refutation(&triple, 5, &cert), "{lambda},{mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn bound_and_refutation_switches() {
        let triple = t(38, 17, 23, 78);
        let opts = EOptions { bound: Some(0), ..EOptions::default() };
        assert!(check_e_with(&triple, 78, &opts).unwrap().is_infeasible());
        let opts = EOptions { bound: Some(0), refute: false, ..EOptions::default() };
        assert!(check_e_with(&triple, 78, &opts).unwrap().is_unknown());
        let pentagon = EOptions { bound: Some(0), ..only(v(1, 0, 0)) };
        assert_eq!(
            check_e_with(&t(6, 1, 3, 10), 5, &pentagon).unwrap(),
            EReport::Unknown { bound: 0, reason: StopReason::BoundReached.to_string() }
        );
        // Without the functional route the exhaustive box search still finds
        // nothing, but that is not a certificate.
        let opts = EOptions { refute: false, ..EOptions::default() };
        assert!(check_e_with(&triple, 78, &opts).unwrap().is_unknown());
    }

    #[test]
    fn no_vertex_solution() {
        // δ_4 = π/2 = 3.5·π/7 is not reachable with integer coefficients.
        let triple = t(3, 2, 2, 7);
        let report = check_e(&triple, 4, None).unwrap();
        let EReport::Infeasible { refutation } = report else { panic!() };
        assert_eq!(refutation.note, "no vertex solution");
        assert!(verify_refutation(&triple, 4, &refutation));
    }

    #[test]
    fn vertex_restriction_is_validated() {
        let triple = t(6, 1, 3, 10);
        assert!(matches!(
            check_e_with(&triple, 5, &only(v(0, 1, 0))),
            Err(Error::NotAVertexSolution(_))
        ));
    }

    #[test]
    fn reports_serialize_with_a_verdict_tag() {
        let report = check_e_with(&t(7, 1, 2, 10), 10, &only(v(1, 1, 0))).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["verdict"], "feasible");
        let back: EReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }

    fn arb_instance() -> impl Strategy<Value = (AngleTriple, u64)> {
        (3u64..16, 3u64..13).prop_flat_map(|(n, sides)| {
            (1..n - 1).prop_flat_map(move |a| {
                (1..n - a).prop_map(move |b| (t(a, b, n - a - b, n), sides))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn decided_reports_reverify((triple, sides) in arb_instance()) {
            let report = check_e(&triple, sides, None).unwrap();
            match &report {
                EReport::Feasible { witness } => prop_assert!(verify_witness(&triple, sides, witness)),
                EReport::Infeasible { refutation } => prop_assert!(verify_refutation(&triple, sides, refutation)),
                EReport::Unknown { .. } => {}
            }
            let scaled = make_triple(2 * triple.a(), 2 * triple.b(), 2 * triple.c(), 2 * triple.n()).unwrap();
            prop_assert_eq!(check_e(&scaled, sides, None).unwrap(), report);
        }

        #[test]
        fn verdict_is_permutation_invariant((triple, sides) in arb_instance(), pi in 0usize..6) {
            const PERMS: [[usize; 3]; 6] = [[0,1,2],[0,2,1],[1,0,2],[1,2,0],[2,0,1],[2,1,0]];
            let base = check_e(&triple, sides, None).unwrap();
            let moved = check_e(&triple.permuted(PERMS[pi]), sides, None).unwrap();
            prop_assert_eq!(base.label(), moved.label());
        }
    }
}
