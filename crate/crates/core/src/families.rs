//! Candidate generation and screening for the three uniform vertex forms.
//!
//! With every polygon vertex carrying the same equation, the triangle falls
//! into one of three forms: `α = δ_N`, `α + β = δ_N` or `2α = δ_N`. The last
//! form splits into two parametrized candidate lists (cases I and II below);
//! the other two are screened by enumerating the free angle over a bounded
//! denominator.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angles::{check_ngon, AngleTriple, EquationSolution, Target};
use crate::condition_e::{check_e_with, EOptions, EReport};
use crate::condition_k::{check_k, KReport};
use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// Case II parameters: `u = p₀ − q₀`, `s = r₀ − q₀`, `t = 2v₀ − p₀ − q₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseParams {
    pub u: i64,
    pub s: i64,
    pub t: i64,
}

impl CaseParams {
    /// All parameters in range with `t ≤ s ≤ 2t`, ordered by `(u, s, t)`.
    pub fn all() -> Vec<CaseParams> {
        let mut out = Vec::new();
        for u in -6..=4 {
            for s in 1..=7 {
                for t in 1..=4 {
                    if t <= s && s <= 2 * t {
                        out.push(CaseParams { u, s, t });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexForm {
    AlphaEqualsDelta,
    AlphaPlusBeta,
    TwoAlpha,
}

impl VertexForm {
    pub const ALL: [VertexForm; 3] = [
        VertexForm::AlphaEqualsDelta,
        VertexForm::AlphaPlusBeta,
        VertexForm::TwoAlpha,
    ];

    /// The uniform vertex equation `(p, q, r)`.
    pub fn equation(self) -> EquationSolution {
        let (p, q) = match self {
            VertexForm::AlphaEqualsDelta => (1, 0),
            VertexForm::AlphaPlusBeta => (1, 1),
            VertexForm::TwoAlpha => (2, 0),
        };
        EquationSolution::new(Target::VertexDelta, p, q, 0)
    }

    pub fn name(self) -> &'static str {
        match self {
            VertexForm::AlphaEqualsDelta => "alpha=delta",
            VertexForm::AlphaPlusBeta => "alpha+beta=delta",
            VertexForm::TwoAlpha => "2alpha=delta",
        }
    }
}

impl std::str::FromStr for VertexForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        VertexForm::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown vertex form {s:?}")))
    }
}

fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("nonzero denominator")
}

/// `(p₀, q₀, r₀, v₀)` with `v₀ ∈ {1, 2}`, `min(p₀, q₀) = 0`, `2v₀ = p₀ + r₀`
/// and `p₀, q₀ < r₀`.
pub fn case1_quadruples() -> Vec<(u64, u64, u64, u64)> {
    let mut out = Vec::new();
    for v0 in 1..=2u64 {
        for p0 in 0..=2 * v0 {
            let r0 = 2 * v0 - p0;
            for q0 in 0..r0 {
                if p0 < r0 && p0.min(q0) == 0 {
                    out.push((p0, q0, r0, v0));
                }
            }
        }
    }
    out
}

/// Distinct values `(r₀ − p₀)/(r₀ − q₀)`: the case I multiples of `π/N`
/// available to `β`.
pub fn case1_beta_multiples() -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for (p0, q0, r0, _) in case1_quadruples() {
        let rho = q(r0 as i64 - p0 as i64, r0 as i64 - q0 as i64);
        if !out.contains(&rho) {
            out.push(rho);
        }
    }
    out
}

fn half_delta(sides: u64) -> Rational {
    q(sides as i64 - 2, 2 * sides as i64)
}

/// Case I: `α = δ_N/2`, `β = ρπ/N` for each case I multiple `ρ`.
pub fn case1_candidates(sides: u64) -> Result<Vec<AngleTriple>> {
    check_ngon(sides)?;
    let alpha = half_delta(sides);
    let mut out = Vec::new();
    for rho in case1_beta_multiples() {
        let beta = rho / Rational::from(sides);
        let gamma = Rational::one() - &alpha - &beta;
        if gamma.is_positive() && alpha.is_positive() {
            let triple = AngleTriple::from_angles(&alpha, &beta, &gamma)?;
            if !out.contains(&triple) {
                out.push(triple);
            }
        }
    }
    Ok(out)
}

/// Case II angles over `n = 2sN`, or `None` when some angle is not positive
/// or `β > γ`.
pub fn case2_triple(params: CaseParams, sides: u64) -> Result<Option<AngleTriple>> {
    let CaseParams { u, s, t } = params;
    let big_n = i64::try_from(sides).map_err(|_| Error::Overflow("N".into()))?;
    let n = 2 * s * big_n;
    let a = (big_n - 2) * s;
    let c = t * big_n + 2 * u;
    let b = (s - t) * big_n - 2 * (u - s);
    debug_assert_eq!(a + b + c, n);
    if a <= 0 || b <= 0 || c <= 0 || b > c {
        return Ok(None);
    }
    crate::angles::make_triple(a as u64, b as u64, c as u64, n as u64).map(Some)
}

/// Case II (`t < s`) candidates, deduplicated with the first parameters kept.
pub fn case2_candidates(sides: u64) -> Result<Vec<(CaseParams, AngleTriple)>> {
    check_ngon(sides)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for params in CaseParams::all().into_iter().filter(|p| p.t < p.s) {
        if let Some(triple) = case2_triple(params, sides)? {
            if seen.insert(triple) {
                out.push((params, triple));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case2Survivor {
    pub params: CaseParams,
    pub triple: AngleTriple,
    pub k: KReport,
    pub e: Option<EReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case2Record {
    pub sides: u64,
    pub candidates: usize,
    pub survivors: Vec<Case2Survivor>,
}

fn two_alpha_options() -> EOptions {
    EOptions {
        vertex_equations: Some(vec![VertexForm::TwoAlpha.equation()]),
        ..EOptions::default()
    }
}

/// Case II screen at a single `N`: Condition (K) against `2α = δ_N`, then
/// optionally Condition (E) restricted to that vertex equation.
pub fn search_case2_at(sides: u64, with_e: bool) -> Result<Case2Record> {
    let candidates = case2_candidates(sides)?;
    let vertex = [VertexForm::TwoAlpha.equation()];
    let mut survivors = Vec::new();
    for &(params, triple) in &candidates {
        let k = check_k(&triple, sides, &vertex)?;
        if !k.passed() {
            continue;
        }
        let e = if with_e {
            Some(check_e_with(&triple, sides, &two_alpha_options())?)
        } else {
            None
        };
        survivors.push(Case2Survivor { params, triple, k, e });
    }
    survivors.sort_by_key(|s| s.triple);
    Ok(Case2Record {
        sides,
        candidates: candidates.len(),
        survivors,
    })
}

/// Runs [`search_case2_at`] for every `N` in `from..=to` in parallel. The
/// result is ordered by `N` regardless of scheduling.
pub fn search_case2(from: u64, to: u64, with_e: bool) -> Result<BTreeMap<u64, Case2Record>> {
    if from < 3 || from > to {
        return Err(Error::InvalidInput(format!("need 3 <= from <= to, got {from}..{to}")));
    }
    let records: Result<Vec<Case2Record>> = (from..=to)
        .into_par_iter()
        .map(|sides| search_case2_at(sides, with_e))
        .collect();
    Ok(records?.into_iter().map(|r| (r.sides, r)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Screened {
    pub triple: AngleTriple,
    pub k: KReport,
    pub e: EReport,
}

/// Triples of the given form whose free angle is `j·π/max_denom`.
pub fn form_triples(sides: u64, form: VertexForm, max_denom: u64) -> Result<Vec<AngleTriple>> {
    check_ngon(sides)?;
    if max_denom < sides {
        return Err(Error::InvalidInput(format!("max_denom {max_denom} < N = {sides}")));
    }
    let big_n = sides as i64;
    let d = i64::try_from(max_denom).map_err(|_| Error::Overflow("max_denom".into()))?;
    let delta = q(big_n - 2, big_n);
    let mut out = Vec::new();
    for j in 1..d {
        let free = q(j, d);
        let angles = match form {
            VertexForm::AlphaEqualsDelta => {
                let gamma = q(2, big_n) - &free;
                (free <= gamma).then(|| (delta.clone(), free, gamma))
            }
            VertexForm::AlphaPlusBeta => {
                let beta = &delta - &free;
                (free >= beta).then(|| (free, beta, q(2, big_n)))
            }
            VertexForm::TwoAlpha => {
                let gamma = q(big_n + 2, 2 * big_n) - &free;
                (free <= gamma).then(|| (half_delta(sides), free, gamma))
            }
        };
        let Some((alpha, beta, gamma)) = angles else { continue };
        if !(alpha.is_positive() && beta.is_positive() && gamma.is_positive()) {
            continue;
        }
        let triple = AngleTriple::from_angles(&alpha, &beta, &gamma)?;
        if !out.contains(&triple) {
            out.push(triple);
        }
    }
    Ok(out)
}

fn screen_one(triple: &AngleTriple, sides: u64, form: VertexForm) -> Result<Option<Screened>> {
    let vertex = form.equation();
    if !vertex.holds(triple, sides) {
        return Err(Error::Internal(format!("{triple} is not of form {}", form.name())));
    }
    let k = check_k(triple, sides, &[vertex])?;
    if !k.passed() {
        return Ok(None);
    }
    let options = EOptions {
        vertex_equations: Some(vec![vertex]),
        ..EOptions::default()
    };
    let e = check_e_with(triple, sides, &options)?;
    Ok((!e.is_infeasible()).then_some(Screened { triple: *triple, k, e }))
}

/// Triples of `form` with free-angle denominator dividing `max_denom` that
/// pass Condition (K) and are not refuted by Condition (E).
pub fn screen_form(sides: u64, form: VertexForm, max_denom: u64) -> Result<Vec<Screened>> {
    let triples = form_triples(sides, form, max_denom)?;
    let screened: Result<Vec<Option<Screened>>> = triples
        .par_iter()
        .map(|t| screen_one(t, sides, form))
        .collect();
    Ok(screened?.into_iter().flatten().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `(δ_N/2, δ_N/2, 2π/N)`
    HalfDeltaPair,
    /// `(δ_N/2, π/N, π/2)`
    HalfDeltaRight,
    /// `(δ_N, π/N, π/N)`
    FullDelta,
    Exceptional,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::HalfDeltaPair => "family (i)",
            Family::HalfDeltaRight => "family (ii)",
            Family::FullDelta => "family (iii)",
            Family::Exceptional => "exceptional",
        }
    }
}

pub fn canonical_families(sides: u64) -> Result<[(Family, AngleTriple); 3]> {
    check_ngon(sides)?;
    let big_n = sides as i64;
    let mk = |a: Rational, b: Rational, c: Rational| AngleTriple::from_angles(&a, &b, &c);
    Ok([
        (Family::HalfDeltaPair, mk(half_delta(sides), half_delta(sides), q(2, big_n))?),
        (Family::HalfDeltaRight, mk(half_delta(sides), q(1, big_n), q(1, 2))?),
        (Family::FullDelta, mk(q(big_n - 2, big_n), q(1, big_n), q(1, big_n))?),
    ])
}

pub fn family_of(triple: &AngleTriple, sides: u64) -> Result<Family> {
    Ok(canonical_families(sides)?
        .into_iter()
        .find(|(_, t)| t.shape() == triple.shape())
        .map_or(Family::Exceptional, |(f, _)| f))
}

/// Where a classified triple came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Origin {
    Form { form: VertexForm },
    Case1,
    Case2 { params: CaseParams },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classified {
    pub triple: AngleTriple,
    pub family: Family,
    pub origins: Vec<Origin>,
    pub verdict: String,
    pub e: EReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub sides: u64,
    pub max_denom: u64,
    pub entries: Vec<Classified>,
    pub scope_note: String,
}

impl Classification {
    pub fn canonical_count(&self) -> usize {
        self.entries.iter().filter(|e| e.family != Family::Exceptional).count()
    }
    pub fn exceptional(&self) -> impl Iterator<Item = &Classified> {
        self.entries.iter().filter(|e| e.family == Family::Exceptional)
    }
}

pub const NOT_EXCLUDED: &str = "not excluded by (K)+(E)";

/// Everything at this `N` that survives Condition (K) and is not refuted by
/// Condition (E), labelled by family. Entries are unique up to similarity and
/// ordered by family, then triple.
pub fn classify(sides: u64, max_denom: u64) -> Result<Classification> {
    let mut found: Vec<(Origin, Screened)> = Vec::new();
    for form in VertexForm::ALL {
        for s in screen_form(sides, form, max_denom)? {
            found.push((Origin::Form { form }, s));
        }
    }
    for triple in case1_candidates(sides)? {
        if let Some(s) = screen_one(&triple, sides, VertexForm::TwoAlpha)? {
            found.push((Origin::Case1, s));
        }
    }
    for (params, triple) in case2_candidates(sides)? {
        if let Some(s) = screen_one(&triple, sides, VertexForm::TwoAlpha)? {
            found.push((Origin::Case2 { params }, s));
        }
    }

    let mut by_shape: BTreeMap<[u64; 3], Classified> = BTreeMap::new();
    for (origin, s) in found {
        let key = s.triple.shape();
        let family = family_of(&s.triple, sides)?;
        let entry = by_shape.entry(key).or_insert_with(|| Classified {
            triple: s.triple,
            family,
            origins: Vec::new(),
            verdict: NOT_EXCLUDED.into(),
            e: s.e,
        });
        if !entry.origins.contains(&origin) {
            entry.origins.push(origin);
        }
    }
    let mut entries: Vec<Classified> = by_shape.into_values().collect();
    entries.sort_by_key(|e| (e.family, e.triple.n(), e.triple));
    Ok(Classification {
        sides,
        max_denom,
        entries,
        scope_note: format!(
            "forms screened with free-angle denominators dividing {max_denom}; \
             survivors are {NOT_EXCLUDED}, not known tilings"
        ),
    })
}
