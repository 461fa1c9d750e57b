//! Weighted lattice paths in `ℕ₀²`, used as a brute-force oracle for the
//! binomial coefficients and their convolutions.
//!
//! A horizontal step `(s−1,t) → (s,t)` weighs `W(s,t)`; a vertical step
//! `(s,t−1) → (s,t)` weighs `v(s,t)`, which is 1 for single-weight families.

use std::fmt;


use crate::elliptic::ConvolutionKind;
use crate::error::{Error, Result};
use crate::weights::{big_weight, small_weight_v, WeightDomain, WeightSpec};

/// Longest path the enumerator will materialize.
pub const MAX_STEPS: u32 = 22;

pub type Point = (u32, u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    H,
    V,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: Point,
    pub steps: Vec<Step>,
}

impl Path {
    pub fn new(start: Point, steps: Vec<Step>) -> Self {
        Path { start, steps }
    }

    pub fn end(&self) -> Point {
        self.points().last().unwrap_or(self.start)
    }

    /// Endpoint of every step, in order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.steps.iter().scan(self.start, |pos, step| {
            match step {
                Step::H => pos.0 += 1,
                Step::V => pos.1 += 1,
            }
            Some(*pos)
        })
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(match s {
                Step::H => "H",
                Step::V => "V",
            })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Path {
    type Err = Error;

    /// An `H`/`V` string, starting at the origin.
    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'H' | 'h' => Ok(Step::H),
                'V' | 'v' => Ok(Step::V),
                other => Err(Error::Parse(format!("unexpected step '{other}'"))),
            })
            .collect::<Result<_>>()?;
        Ok(Path::new((0, 0), steps))
    }
}

/// All paths from `a` to `omega`, horizontal-first in lexicographic order.
/// Empty when `omega` is not weakly north-east of `a`.
pub fn enumerate_paths(a: Point, omega: Point) -> Result<Vec<Path>> {
    if omega.0 < a.0 || omega.1 < a.1 {
        return Ok(Vec::new());
    }
    let (dx, dy) = (omega.0 - a.0, omega.1 - a.1);
    if dx + dy > MAX_STEPS {
        return Err(Error::TooLarge { steps: dx + dy, limit: MAX_STEPS });
    }
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity((dx + dy) as usize);
    fn go(h: u32, v: u32, start: Point, steps: &mut Vec<Step>, out: &mut Vec<Path>) {
        if h == 0 && v == 0 {
            out.push(Path::new(start, steps.clone()));
            return;
        }
        if h > 0 {
            steps.push(Step::H);
            go(h - 1, v, start, steps, out);
            steps.pop();
        }
        if v > 0 {
            steps.push(Step::V);
            go(h, v - 1, start, steps, out);
            steps.pop();
        }
    }
    go(dx, dy, a, &mut steps, &mut out);
    Ok(out)
}

pub fn path_weight<C: WeightDomain>(path: &Path, spec: &WeightSpec) -> Result<C> {
    let mut acc = C::one();
    for (step, (s, t)) in path.steps.iter().zip(path.points()) {
        acc = acc
            * match step {
                Step::H => big_weight::<C>(spec, s, t)?,
                Step::V => small_weight_v::<C>(spec, s, t)?,
            };
    }
    Ok(acc)
}

/// Sum of the weights of all paths from `a` to `omega`.
pub fn generating_function<C: WeightDomain>(a: Point, omega: Point, spec: &WeightSpec) -> Result<C> {
    enumerate_paths(a, omega)?
        .iter()
        .try_fold(C::zero(), |acc, path| Ok(acc + path_weight::<C>(path, spec)?))
}

/// Residual of splitting the paths from the origin to `omega` at a line:
///
/// * `Diagonal`: by the point where the path meets `x + y = index`
/// * `Vertical`: by the unique horizontal step from column `index − 1`
///   to column `index`, at height `t`; that step contributes `W(index, t)`
/// * `Horizontal`: by the unique vertical step from row `index − 1` to
///   row `index`, in column `s`; that step contributes `v(s, index)`
///
/// Each piece is a generating function over a sub-rectangle, so the
/// residual vanishes by construction only if enumeration and weights agree.
pub fn decompose_check<C: WeightDomain>(
    which: ConvolutionKind,
    spec: &WeightSpec,
    omega: Point,
    index: u32,
) -> Result<C> {
    let origin = (0, 0);
    let lhs = generating_function::<C>(origin, omega, spec)?;
    let (k, l) = omega;
    let mut rhs = C::zero();
    match which {
        ConvolutionKind::Diagonal => {
            if index > k + l {
                return Err(Error::InvalidParameter(format!("diagonal {index} misses the box to {omega:?}")));
            }
            for j in 0..=index.min(k) {
                let mid = (j, index - j);
                if mid.1 > l {
                    continue;
                }
                rhs = rhs + generating_function::<C>(origin, mid, spec)? * generating_function::<C>(mid, omega, spec)?;
            }
        }
        ConvolutionKind::Vertical => {
            if !(1..=k).contains(&index) {
                return Err(Error::InvalidParameter(format!("vertical split needs 1 <= l <= {k}, got {index}")));
            }
            for t in 0..=l {
                let before = generating_function::<C>(origin, (index - 1, t), spec)?;
                let after = generating_function::<C>((index, t), omega, spec)?;
                rhs = rhs + before * big_weight::<C>(spec, index, t)? * after;
            }
        }
        ConvolutionKind::Horizontal => {
            if !(1..=l).contains(&index) {
                return Err(Error::InvalidParameter(format!("horizontal split needs 1 <= k <= {l}, got {index}")));
            }
            for s in 0..=k {
                let before = generating_function::<C>(origin, (s, index - 1), spec)?;
                let after = generating_function::<C>((s, index), omega, spec)?;
                rhs = rhs + before * small_weight_v::<C>(spec, s, index)? * after;
            }
        }
    }
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::SymPoly;
    use crate::weights::Family;

    fn p(s: &str) -> SymPoly {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_paths((0, 0), (0, 0)).unwrap(), vec![Path::new((0, 0), vec![])]);
        let two = enumerate_paths((0, 0), (1, 1)).unwrap();
        assert_eq!(two.iter().map(|p| p.to_string()).collect::<Vec<_>>(), ["HV", "VH"]);
        assert_eq!(enumerate_paths((0, 0), (2, 1)).unwrap().len(), 3);
        assert_eq!(enumerate_paths((1, 2), (4, 4)).unwrap().len(), 10);
        assert!(enumerate_paths((2, 0), (1, 3)).unwrap().is_empty());
        assert!(matches!(enumerate_paths((0, 0), (12, 11)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn running_example_weights() {
        let p0: Path = "HHVHHVH".parse().unwrap();
        assert_eq!(p0.end(), (5, 2));
        let w: SymPoly = path_weight(&p0, &WeightSpec::generic()).unwrap();
        assert_eq!(w, p("w(3,1)*w(4,1)*w(5,1)*w(5,2)"));
        let w: SymPoly = path_weight(&p0, &WeightSpec::generic_double()).unwrap();
        assert_eq!(w, p("v(2,1)*w(3,1)*w(4,1)*v(4,2)*w(5,1)*w(5,2)"));
        let up: Path = "VVVV".parse().unwrap();
        assert_eq!(path_weight::<SymPoly>(&up, &WeightSpec::generic()).unwrap(), SymPoly::one());
    }

    #[test]
    fn generating_function_examples() {
        let spec = WeightSpec::generic();
        assert_eq!(generating_function::<SymPoly>((0, 0), (4, 0), &spec).unwrap(), SymPoly::one());
        assert_eq!(generating_function::<SymPoly>((0, 0), (1, 1), &spec).unwrap(), p("1 + w(1,1)"));
        let g: SymPoly = generating_function((0, 0), (2, 2), &WeightSpec::q_symbolic()).unwrap();
        assert_eq!(g, p("1 + q + 2*q^2 + q^3 + q^4"));
    }

    #[test]
    fn decompositions_vanish() {
        let spec = WeightSpec::generic();
        let r: SymPoly = decompose_check(ConvolutionKind::Diagonal, &spec, (0, 0), 0).unwrap();
        assert!(r.is_zero());
        let r: SymPoly = decompose_check(ConvolutionKind::Diagonal, &spec, (2, 2), 2).unwrap();
        assert!(r.is_zero());
        let r: SymPoly = decompose_check(ConvolutionKind::Vertical, &WeightSpec::q_symbolic(), (3, 3), 2).unwrap();
        assert!(r.is_zero());
        let dbl = WeightSpec::generic_double();
        let r: SymPoly = decompose_check(ConvolutionKind::Horizontal, &dbl, (3, 2), 1).unwrap();
        assert!(r.is_zero());
        let r: SymPoly = decompose_check(ConvolutionKind::Vertical, &dbl, (3, 2), 3).unwrap();
        assert!(r.is_zero());
        let stirling = WeightSpec::new(Family::StirlingSecond).unwrap();
        let r: SymPoly = decompose_check(ConvolutionKind::Horizontal, &stirling, (3, 3), 2).unwrap();
        assert!(r.is_zero());
        assert!(decompose_check::<SymPoly>(ConvolutionKind::Vertical, &spec, (3, 3), 0).is_err());
    }
}
