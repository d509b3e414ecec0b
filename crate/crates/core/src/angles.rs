//! Angle triples `(a/n)π, (b/n)π, (c/n)π`, the regular polygon angle, and
//! nonnegative integer solutions of `pα + qβ + rγ = t·π`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{gcd, Rational};

/// Largest denominator accepted. Keeps every `k·a` product of the residue
/// scans inside `u128`.
pub const MAX_DENOMINATOR: u64 = u32::MAX as u64;

/// Angles of a triangle as multiples of `π/n`, in canonical reduced form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AngleTriple {
    a: u64,
    b: u64,
    c: u64,
    n: u64,
}

impl AngleTriple {
    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn b(&self) -> u64 {
        self.b
    }
    pub fn c(&self) -> u64 {
        self.c
    }
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn coefficients(&self) -> [u64; 3] {
        [self.a, self.b, self.c]
    }

    /// The three angles as multiples of `π`.
    pub fn angles(&self) -> [Rational; 3] {
        [self.a, self.b, self.c].map(|x| Rational::ratio(x, self.n))
    }

    /// Builds a triple from angles given as multiples of `π`.
    pub fn from_angles(alpha: &Rational, beta: &Rational, gamma: &Rational) -> Result<Self> {
        use num_integer::Integer;
        let den = alpha
            .denom()
            .lcm(beta.denom())
            .lcm(gamma.denom());
        let scale = |x: &Rational| -> Result<u64> {
            let scaled = x * &Rational::from_integer(den.clone());
            scaled
                .to_u64()
                .ok_or_else(|| Error::InvalidTriple(format!("angle {x} is not a positive fraction")))
        };
        let n = Rational::from_integer(den.clone())
            .to_u64()
            .ok_or_else(|| Error::InvalidTriple(format!("denominator {den} too large")))?;
        make_triple(scale(alpha)?, scale(beta)?, scale(gamma)?, n)
    }

    /// Reorders the angles: `perm[i]` names the source slot of new slot `i`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let coeffs = self.coefficients();
        AngleTriple {
            a: coeffs[perm[0]],
            b: coeffs[perm[1]],
            c: coeffs[perm[2]],
            n: self.n,
        }
    }

    /// Angles sorted ascending, for comparing triangles up to similarity.
    pub fn shape(&self) -> [u64; 3] {
        let mut s = self.coefficients();
        s.sort_unstable();
        s
    }
}

impl fmt::Display for AngleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})/{}", self.a, self.b, self.c, self.n)
    }
}

/// Validates and reduces `(a, b, c, n)`.
pub fn make_triple(a: u64, b: u64, c: u64, n: u64) -> Result<AngleTriple> {
    if a == 0 || b == 0 || c == 0 || n == 0 {
        return Err(Error::InvalidTriple(format!(
            "components must be positive, got ({a},{b},{c},{n})"
        )));
    }
    if a.checked_add(b).and_then(|s| s.checked_add(c)) != Some(n) {
        return Err(Error::InvalidTriple(format!("{a}+{b}+{c} != {n}")));
    }
    let g = gcd(gcd(a, b), gcd(c, n));
    let reduced = AngleTriple {
        a: a / g,
        b: b / g,
        c: c / g,
        n: n / g,
    };
    if reduced.n > MAX_DENOMINATOR {
        return Err(Error::InvalidTriple(format!(
            "denominator {} exceeds {MAX_DENOMINATOR}",
            reduced.n
        )));
    }
    Ok(reduced)
}

/// A regular polygon with `sides` vertices and vertex angle `delta·π`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NGon {
    pub sides: u64,
    pub delta: Rational,
}

impl NGon {
    pub fn new(sides: u64) -> Result<Self> {
        Ok(NGon {
            sides,
            delta: delta_of(sides)?,
        })
    }
}

/// The vertex angle of the regular `N`-gon, `(N−2)/N`, as a multiple of `π`.
pub fn delta_of(sides: u64) -> Result<Rational> {
    check_ngon(sides)?;
    Ok(Rational::ratio(sides - 2, sides))
}

pub(crate) fn check_ngon(sides: u64) -> Result<()> {
    if sides < 3 {
        return Err(Error::InvalidInput(format!("N must be >= 3, got {sides}")));
    }
    if sides > MAX_DENOMINATOR {
        return Err(Error::InvalidInput(format!("N = {sides} is too large")));
    }
    Ok(())
}

/// Right-hand side of an angle equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `δ_N`, the angle at a vertex of the polygon.
    VertexDelta,
    /// `π`, a vertex lying in the relative interior of a side or tile edge.
    InteriorPi,
    /// `2π`, an interior vertex.
    InteriorTwoPi,
}

impl Target {
    /// The target as `(numerator, denominator)` of a multiple of `π`.
    pub fn as_fraction(self, sides: u64) -> (u64, u64) {
        match self {
            Target::VertexDelta => (sides - 2, sides),
            Target::InteriorPi => (1, 1),
            Target::InteriorTwoPi => (2, 1),
        }
    }

    pub fn value(self, sides: u64) -> Rational {
        let (num, den) = self.as_fraction(sides);
        Rational::ratio(num, den)
    }

    pub fn is_interior(self) -> bool {
        !matches!(self, Target::VertexDelta)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::VertexDelta => "delta",
            Target::InteriorPi => "pi",
            Target::InteriorTwoPi => "2pi",
        })
    }
}

/// Nonnegative `(p, q, r)` with `pα + qβ + rγ` equal to the target.
///
/// Ordered by target first, then lexicographically in `(p, q, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EquationSolution {
    pub target: Target,
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

impl EquationSolution {
    pub fn new(target: Target, p: u64, q: u64, r: u64) -> Self {
        EquationSolution { target, p, q, r }
    }

    pub fn coefficients(&self) -> [u64; 3] {
        [self.p, self.q, self.r]
    }

    /// Whether the identity holds exactly for `triple` and `sides`.
    pub fn holds(&self, triple: &AngleTriple, sides: u64) -> bool {
        let (tn, td) = self.target.as_fraction(sides);
        let lhs = self.p as u128 * triple.a as u128
            + self.q as u128 * triple.b as u128
            + self.r as u128 * triple.c as u128;
        lhs * td as u128 == tn as u128 * triple.n as u128
    }

    /// Contribution `(p − q, p − r)` to the column-sum balance.
    pub fn balance(&self) -> (i64, i64) {
        (
            self.p as i64 - self.q as i64,
            self.p as i64 - self.r as i64,
        )
    }
}

impl fmt::Display for EquationSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})@{}", self.p, self.q, self.r, self.target)
    }
}

/// All nonnegative `(p, q, r)` solving the target identity, ascending.
pub fn enumerate_solutions(
    triple: &AngleTriple,
    sides: u64,
    target: Target,
) -> Result<Vec<EquationSolution>> {
    check_ngon(sides)?;
    let (tn, td) = target.as_fraction(sides);
    let scaled = triple.n as u128 * tn as u128;
    if scaled % td as u128 != 0 {
        return Ok(Vec::new());
    }
    let rhs = scaled / td as u128;
    let (a, b, c) = (triple.a as u128, triple.b as u128, triple.c as u128);
    let mut out = Vec::new();
    for p in 0..=rhs / a {
        let after_p = rhs - p * a;
        for q in 0..=after_p / b {
            let rest = after_p - q * b;
            if rest % c == 0 {
                out.push(EquationSolution::new(
                    target,
                    p as u64,
                    q as u64,
                    (rest / c) as u64,
                ));
            }
        }
    }
    Ok(out)
}
