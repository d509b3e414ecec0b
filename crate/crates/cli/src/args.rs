use polytile_core::{make_triple, AngleTriple, EquationSolution, Rational, Target};

fn integers<const K: usize>(s: &str) -> Result<[u64; K], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != K {
        return Err(format!("expected {K} comma-separated integers, got {s:?}"));
    }
    let mut out = [0u64; K];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part
            .parse()
            .map_err(|_| format!("{part:?} is not a nonnegative integer"))?;
    }
    Ok(out)
}

/// `a,b,c,n`
pub fn parse_triple(s: &str) -> Result<AngleTriple, String> {
    let [a, b, c, n] = integers::<4>(s)?;
    make_triple(a, b, c, n).map_err(|e| e.to_string())
}

/// `p,q,r` as a vertex equation.
pub fn parse_vertex(s: &str) -> Result<EquationSolution, String> {
    let [p, q, r] = integers::<3>(s)?;
    Ok(EquationSolution::new(Target::VertexDelta, p, q, r))
}

/// `a,n,N,N'`
pub fn parse_l7(s: &str) -> Result<[u64; 4], String> {
    integers::<4>(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L2Args {
    pub start: Rational,
    pub length_factor: Rational,
    pub sides: u64,
    pub modulus: u64,
    pub residue: i64,
}

/// `a,c,N,m,u` where `a` and `c` may be fractions such as `3/2`.
pub fn parse_l2(s: &str) -> Result<L2Args, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, c, n, m, u] = parts[..] else {
        return Err(format!("expected a,c,N,m,u, got {s:?}"));
    };
    let rational = |x: &str| x.parse::<Rational>().map_err(|e| format!("{x:?}: {e}"));
    let int = |x: &str| x.parse::<u64>().map_err(|_| format!("{x:?} is not a positive integer"));
    Ok(L2Args {
        start: rational(a)?,
        length_factor: rational(c)?,
        sides: int(n)?,
        modulus: int(m)?,
        residue: u.parse().map_err(|_| format!("{u:?} is not an integer"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triples() {
        assert_eq!(parse_triple("20,10,12,42").unwrap().to_string(), "(10,5,6)/21");
        assert!(parse_triple("1,1,1,4").is_err());
        assert!(parse_triple("1,1,2").is_err());
        assert!(parse_triple("1,x,2,4").is_err());
    }

    #[test]
    fn l2() {
        let args = parse_l2("1/2, 3, 30, 2, -1").unwrap();
        assert_eq!(args.start, Rational::new(1, 2).unwrap());
        assert_eq!(args.residue, -1);
        assert!(parse_l2("1,2,3").is_err());
    }
}
