//! Condition (K): the fractional-part identities
//!
//! ```text
//! {ka/n} + {kb/n} + {kc/n} = 1
//! p{ka/n} + q{kb/n} + r{kc/n} = 1 − 2{k/N}
//! ```
//!
//! for every `k` prime to `nN` with `{k/N} < 1/2`, and every vertex equation
//! `(p, q, r)`.
//!
//! Both sides depend on `k` only modulo `L = lcm(n, N)`, and every residue
//! prime to `L` lifts to an integer prime to `nN` (shift by a multiple of `L`),
//! so scanning the residues of `[1, L)` decides the condition exactly.

use serde::{Deserialize, Serialize};

use crate::angles::{check_ngon, AngleTriple, EquationSolution, Target};
use crate::error::{Error, Result};
use crate::exactmath::{coprime_to, frac_numer, lcm, prime_divisors, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KVerdict {
    Pass,
    Fail,
}

/// One of the identities checked at a residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum KEquation {
    /// `{ka/n} + {kb/n} + {kc/n} = 1`.
    AngleSum,
    /// `p{ka/n} + q{kb/n} + r{kc/n} = 1 − 2{k/N}`.
    Vertex { p: u64, q: u64, r: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KEvaluation {
    pub equation: KEquation,
    pub left: Rational,
    pub right: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KCounterexample {
    pub k: u64,
    /// The first failing identity: vertex equations are consulted before the
    /// angle-sum identity.
    pub equation: KEquation,
    pub left: Rational,
    pub right: Rational,
    /// Every identity at `k`: vertex equations in input order, then the
    /// angle sum.
    pub evaluations: Vec<KEvaluation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KReport {
    pub verdict: KVerdict,
    /// `lcm(n, N)`; residues are taken in `[1, modulus)`.
    pub modulus: u64,
    /// Residues tested, ascending. On failure the list stops at the
    /// counterexample.
    pub admissible: Vec<u64>,
    pub counterexample: Option<KCounterexample>,
}

impl KReport {
    pub fn passed(&self) -> bool {
        self.verdict == KVerdict::Pass
    }
}

/// Calls `visit` on each admissible residue modulo `lcm(n, N)` in ascending
/// order until it returns `false`.
pub(crate) fn for_each_admissible(
    n: u64,
    sides: u64,
    mut visit: impl FnMut(u64) -> bool,
) -> Result<u64> {
    let modulus = lcm(n, sides)?;
    let primes = prime_divisors(modulus);
    for k in 1..modulus {
        if 2 * (k % sides) >= sides || !coprime_to(k, &primes) {
            continue;
        }
        if !visit(k) {
            break;
        }
    }
    Ok(modulus)
}

/// Residues `k ∈ [1, lcm(n, N))` prime to the modulus with `{k/N} < 1/2`.
pub fn admissible_residues(n: u64, sides: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    check_ngon(sides)?;
    let mut out = Vec::new();
    for_each_admissible(n, sides, |k| {
        out.push(k);
        true
    })?;
    Ok(out)
}

/// Evaluates one identity at `k`, exactly.
pub fn evaluate_at(triple: &AngleTriple, sides: u64, k: u64, equation: KEquation) -> KEvaluation {
    let n = triple.n();
    let fr = |x: u64| frac_numer(k, x, n);
    let (fa, fb, fc) = (fr(triple.a()), fr(triple.b()), fr(triple.c()));
    let (left, right) = match equation {
        KEquation::AngleSum => (
            Rational::ratio(fa as u128 + fb as u128 + fc as u128, n),
            Rational::one(),
        ),
        KEquation::Vertex { p, q, r } => (
            Rational::ratio(
                p as u128 * fa as u128 + q as u128 * fb as u128 + r as u128 * fc as u128,
                n,
            ),
            Rational::ratio(sides - 2 * (k % sides), sides),
        ),
    };
    KEvaluation {
        equation,
        holds: left == right,
        left,
        right,
    }
}

/// Decides Condition (K) for `triple` against the supplied vertex equations.
pub fn check_k(
    triple: &AngleTriple,
    sides: u64,
    vertex_eqs: &[EquationSolution],
) -> Result<KReport> {
    check_ngon(sides)?;
    if vertex_eqs.is_empty() {
        return Err(Error::InvalidInput("at least one vertex equation is required".into()));
    }
    for eq in vertex_eqs {
        if eq.target != Target::VertexDelta || !eq.holds(triple, sides) {
            return Err(Error::NotAVertexSolution(format!(
                "({},{},{}) for {triple} at N = {sides}",
                eq.p, eq.q, eq.r
            )));
        }
    }
    let n = triple.n() as u128;
    let big_n = sides as u128;
    let [a, b, c] = triple.coefficients();
    let mut tested = Vec::new();
    let mut failing = None;
    let modulus = for_each_admissible(triple.n(), sides, |k| {
        tested.push(k);
        let fa = frac_numer(k, a, triple.n()) as u128;
        let fb = frac_numer(k, b, triple.n()) as u128;
        let fc = frac_numer(k, c, triple.n()) as u128;
        let rhs = n * (big_n - 2 * (k % sides) as u128);
        let vertex_ok = vertex_eqs.iter().all(|eq| {
            big_n * (eq.p as u128 * fa + eq.q as u128 * fb + eq.r as u128 * fc) == rhs
        });
        if vertex_ok && fa + fb + fc == n {
            true
        } else {
            failing = Some(k);
            false
        }
    })?;

    let counterexample = failing.map(|k| {
        let evaluations: Vec<KEvaluation> = vertex_eqs
            .iter()
            .map(|eq| KEquation::Vertex { p: eq.p, q: eq.q, r: eq.r })
            .chain(std::iter::once(KEquation::AngleSum))
            .map(|equation| evaluate_at(triple, sides, k, equation))
            .collect();
        let cited = evaluations
            .iter()
            .find(|e| !e.holds)
            .expect("a failing residue has a failing identity")
            .clone();
        KCounterexample {
            k,
            equation: cited.equation,
            left: cited.left,
            right: cited.right,
            evaluations,
        }
    });
    Ok(KReport {
        verdict: if counterexample.is_some() { KVerdict::Fail } else { KVerdict::Pass },
        modulus,
        admissible: tested,
        counterexample,
    })
}

/// Re-evaluates a report's counterexample, if any, from scratch.
pub fn counterexample_reproduces(triple: &AngleTriple, sides: u64, report: &KReport) -> bool {
    match (&report.counterexample, report.verdict) {
        (None, KVerdict::Pass) => true,
        (Some(cx), KVerdict::Fail) => {
            let again = evaluate_at(triple, sides, cx.k, cx.equation);
            !again.holds && again.left == cx.left && again.right == cx.right
        }
        _ => false,
    }
}
