use serde::Serialize;

use super::ast::{AffineConfiguration, Body, Formula, Statement};
use crate::error::{capability, domain, Error, Result};

/// Largest poset accepted for `C_P` and `C'_P`.
pub const POSET_MAX: usize = 5;

/// `(x ⊂ y)`: families avoiding it are antichains.
pub fn comparable_pair() -> AffineConfiguration {
    AffineConfiguration::new(
        "sperner",
        vec!["x".into(), "y".into()],
        Body::Stmt(Statement::subset(Formula::var(0), Formula::var(1))),
    )
    .expect("well formed")
}

/// `(z = x ∪ y)`: families avoiding it are union-free; in a 2-dimensional
/// grid a witness is a corner.
pub fn corner() -> AffineConfiguration {
    AffineConfiguration::new(
        "unionfree",
        vec!["x".into(), "y".into(), "z".into()],
        Body::Stmt(Statement::equal(
            Formula::var(2),
            Formula::join(Formula::var(0), Formula::var(1)),
        )),
    )
    .expect("well formed")
}

/// The `d`-dimensional Boolean algebra with one variable `x_I` per
/// `I ⊆ [d]`: `x_∅ = x_i ∩ x_j` for `i < j` and `x_I = ∪_{i∈I} x_{i}`.
///
/// Variable `x_I` has index equal to the bitmask of `I`.
pub fn boolean_algebra(d: u32) -> Result<AffineConfiguration> {
    if d == 0 || d > 6 {
        return domain(format!("Boolean algebra dimension must be 1..=6, got {d}"));
    }
    let count = 1usize << d;
    let names = (0..count)
        .map(|mask| {
            if mask == 0 {
                "x_{}".to_string()
            } else {
                let members: Vec<String> = (0..d)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (i + 1).to_string())
                    .collect();
                format!("x_{{{}}}", members.join(","))
            }
        })
        .collect();
    let mut parts = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            parts.push(Body::Stmt(Statement::equal(
                Formula::var(0),
                Formula::meet(Formula::var(1 << i), Formula::var(1 << j)),
            )));
        }
    }
    for mask in 1..count {
        let join = Formula::join_all((0..d).filter(|i| mask >> i & 1 == 1).map(|i| 1usize << i))
            .expect("non-empty");
        parts.push(Body::Stmt(Statement::equal(Formula::var(mask), join)));
    }
    AffineConfiguration::new(format!("boolean{d}"), names, Body::And(parts))
}

/// A strict partial order on `{0, ..., size-1}`, stored as its transitive
/// closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Poset {
    pub size: usize,
    /// `less[p][q]` iff `p ≺ q`.
    pub less: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds the closure of `relations` (0-based pairs `p ≺ q`) and rejects
    /// cycles.
    pub fn new(size: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        if size == 0 {
            return domain("a poset needs at least one element");
        }
        if size > POSET_MAX {
            return capability(format!(
                "posets are limited to {POSET_MAX} elements, got {size}"
            ));
        }
        let mut less = vec![vec![false; size]; size];
        for &(p, q) in relations {
            if p >= size || q >= size {
                return domain(format!("relation {p} < {q} outside the poset"));
            }
            less[p][q] = true;
        }
        for k in 0..size {
            for i in 0..size {
                for j in 0..size {
                    if less[i][k] && less[k][j] {
                        less[i][j] = true;
                    }
                }
            }
        }
        if (0..size).any(|i| less[i][i]) {
            return domain("relation contains a cycle");
        }
        Ok(Poset { size, less })
    }

    pub fn chain(size: usize) -> Result<Poset> {
        let rel: Vec<(usize, usize)> = (1..size).map(|i| (i - 1, i)).collect();
        Poset::new(size, &rel)
    }

    pub fn antichain(size: usize) -> Result<Poset> {
        Poset::new(size, &[])
    }

    /// Parses the text format: the first line is `|P|`, every further
    /// non-empty line is `i<j` with 1-based element labels.
    pub fn parse(text: &str) -> Result<Poset> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let (line, first) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty poset file".into()))?;
        let size: usize = first
            .parse()
            .map_err(|_| parse_err(line, format!("expected the poset size, got {first:?}")))?;
        let mut rel = Vec::new();
        for (line, l) in lines {
            let (a, b) = l
                .split_once('<')
                .ok_or_else(|| parse_err(line, format!("expected `i<j`, got {l:?}")))?;
            let p: usize = a
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("bad label {a:?}")))?;
            let q: usize = b
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("bad label {b:?}")))?;
            if p == 0 || q == 0 || p > size || q > size {
                return Err(parse_err(line, format!("labels must be in 1..={size}")));
            }
            rel.push((p - 1, q - 1));
        }
        Poset::new(size, &rel)
    }

    fn names(&self) -> Vec<String> {
        (1..=self.size).map(|i| format!("x{i}")).collect()
    }

    /// `∧_{p≺q} (x_p ⊂ x_q)`: forbids `P` as a weak subposet.
    pub fn weak_configuration(&self) -> AffineConfiguration {
        let mut parts = Vec::new();
        for p in 0..self.size {
            for q in 0..self.size {
                if self.less[p][q] {
                    parts.push(Body::Stmt(Statement::subset(
                        Formula::var(p),
                        Formula::var(q),
                    )));
                }
            }
        }
        AffineConfiguration::new("poset-weak", self.names(), Body::And(parts)).expect("well formed")
    }

    /// The weak conditions plus `¬(x_p ⊂ x_q) ∧ ¬(x_q ⊂ x_p)` for every
    /// incomparable pair: forbids `P` as an induced subposet.
    pub fn induced_configuration(&self) -> AffineConfiguration {
        let Body::And(mut parts) = self.weak_configuration().body else {
            unreachable!("weak configuration is a conjunction")
        };
        for p in 0..self.size {
            for q in p + 1..self.size {
                if !self.less[p][q] && !self.less[q][p] {
                    let sub =
                        |a, b| Body::Stmt(Statement::subset(Formula::var(a), Formula::var(b)));
                    parts.push(Body::not(sub(p, q)));
                    parts.push(Body::not(sub(q, p)));
                }
            }
        }
        AffineConfiguration::new("poset-induced", self.names(), Body::And(parts))
            .expect("well formed")
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub comparable: AffineConfiguration,
    pub corner: AffineConfiguration,
    pub boolean2: AffineConfiguration,
}

pub fn builtin_configurations() -> Catalog {
    Catalog {
        comparable: comparable_pair(),
        corner: corner(),
        boolean2: boolean_algebra(2).expect("d = 2 is valid"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_chain_is_comparable_pair() {
        let c = Poset::chain(2).unwrap().weak_configuration();
        assert_eq!(c.to_string(), "(x1 ⊂ x2)");
    }

    #[test]
    fn two_antichain_induced() {
        let c = Poset::antichain(2).unwrap().induced_configuration();
        assert_eq!(c.to_string(), "¬(x1 ⊂ x2) ∧ ¬(x2 ⊂ x1)");
    }

    #[test]
    fn boolean2_shape() {
        let c = boolean_algebra(2).unwrap();
        assert_eq!(c.arity(), 4);
        assert_eq!(
            c.to_string(),
            "(x_{} = (x_{1} ∩ x_{2})) ∧ (x_{1} = x_{1}) ∧ (x_{2} = x_{2}) ∧ (x_{1,2} = (x_{1} ∪ x_{2}))"
        );
    }

    #[test]
    fn parse_poset_file() {
        let p = Poset::parse("3\n1<2\n2<3\n").unwrap();
        assert!(p.less[0][2]);
        assert!(matches!(
            Poset::parse("2\n1<3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(Poset::parse("2\n1<2\n2<1\n").is_err());
        assert!(matches!(Poset::new(6, &[]), Err(Error::Capability(_))));
    }
}
