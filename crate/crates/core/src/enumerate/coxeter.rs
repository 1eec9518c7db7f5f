//! Coxeter type of a simply-laced generating set, read off its Gram
//! matrix. Finite types and the affine types that occur at index 0 are
//! recognised; anything else is an error rather than a guess.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterComponent {
    /// `'A'`, `'D'` or `'E'`.
    pub family: char,
    pub rank: usize,
    pub affine: bool,
}

impl Ord for CoxeterComponent {
    /// Larger rank first, then E before D before A, finite before affine.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .rank
            .cmp(&self.rank)
            .then_with(|| other.family.cmp(&self.family))
            .then_with(|| self.affine.cmp(&other.affine))
    }
}

impl PartialOrd for CoxeterComponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CoxeterComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.family, self.rank, if self.affine { "(1)" } else { "" })
    }
}

/// A product of irreducible types, kept sorted. The empty product prints as
/// `trivial`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxeterType(pub Vec<CoxeterComponent>);

impl CoxeterType {
    pub fn new(mut comps: Vec<CoxeterComponent>) -> Self {
        comps.sort();
        CoxeterType(comps)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| !c.affine)
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("trivial");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for CoxeterType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "trivial" {
            return Ok(CoxeterType(vec![]));
        }
        let bad = || Error::invalid(format!("bad Coxeter label {s:?}"));
        let mut comps = Vec::new();
        for part in s.split('x') {
            let (body, affine) = match part.strip_suffix("(1)") {
                Some(b) => (b, true),
                None => (part, false),
            };
            let mut chars = body.chars();
            let family = chars.next().filter(|c| matches!(c, 'A' | 'D' | 'E')).ok_or_else(bad)?;
            let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
            comps.push(CoxeterComponent { family, rank, affine });
        }
        Ok(CoxeterType::new(comps))
    }
}

fn comp(family: char, rank: usize, affine: bool) -> CoxeterComponent {
    CoxeterComponent { family, rank, affine }
}

/// Classifies the Coxeter group generated by reflections in roots with the
/// given Gram matrix (diagonal 2, off-diagonal `-multiplicity`).
pub fn coxeter_type(gram: &[Vec<i64>]) -> Result<CoxeterType> {
    let n = gram.len();
    if gram.iter().enumerate().any(|(a, r)| r.len() != n || r[a] != 2) {
        return Err(Error::invalid("Gram matrix must be square with 2 on the diagonal"));
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut members = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < members.len() {
            let a = members[k];
            for b in 0..n {
                if b != a && gram[a][b] != 0 && !seen[b] {
                    seen[b] = true;
                    members.push(b);
                }
            }
            k += 1;
        }
        comps.push(component_type(gram, &members)?);
    }
    Ok(CoxeterType::new(comps))
}

fn component_type(gram: &[Vec<i64>], members: &[usize]) -> Result<CoxeterComponent> {
    let v = members.len();
    let fail = |why: &str| Err(Error::NotFiniteType(format!("component of {v} nodes: {why}")));
    let mut edges = 0;
    let mut deg = vec![0usize; v];
    for x in 0..v {
        for y in x + 1..v {
            let g = gram[members[x]][members[y]];
            if g > 0 {
                return fail("positive off-diagonal entry");
            }
            if g < 0 {
                if g < -1 {
                    return if v == 2 && g == -2 { Ok(comp('A', 1, true)) } else { fail("multiple edge") };
                }
                edges += 1;
                deg[x] += 1;
                deg[y] += 1;
            }
        }
    }
    if v == 1 {
        return Ok(comp('A', 1, false));
    }
    if edges == v {
        return if deg.iter().all(|&d| d == 2) { Ok(comp('A', v - 1, true)) } else { fail("cycle with branches") };
    }
    if edges > v {
        return fail("more than one cycle");
    }
    let branches: Vec<usize> = (0..v).filter(|&x| deg[x] >= 3).collect();
    if branches.is_empty() {
        return Ok(comp('A', v, false));
    }
    if branches.iter().any(|&x| deg[x] > 4) {
        return fail("vertex of degree above 4");
    }
    if branches.len() == 1 && deg[branches[0]] == 4 {
        return if v == 5 { Ok(comp('D', 4, true)) } else { fail("degree-4 vertex with long arms") };
    }
    if branches.iter().any(|&x| deg[x] == 4) {
        return fail("degree-4 vertex");
    }
    let adj = |x: usize| (0..v).filter(move |&y| y != x && gram[members[x]][members[y]] != 0);
    // Arm lengths hanging off a branch vertex (stopping at other branches).
    let arms = |c: usize| -> Vec<(usize, bool)> {
        adj(c)
            .map(|start| {
                let (mut prev, mut cur, mut len) = (c, start, 1);
                loop {
                    if deg[cur] >= 3 {
                        return (len, false);
                    }
                    match adj(cur).find(|&y| y != prev) {
                        Some(next) => {
                            prev = cur;
                            cur = next;
                            len += 1;
                        }
                        None => return (len, true),
                    }
                }
            })
            .collect()
    };
    match branches.len() {
        1 => {
            let mut a: Vec<usize> = arms(branches[0]).into_iter().map(|x| x.0).collect();
            a.sort_unstable();
            match (a[0], a[1], a[2]) {
                (1, 1, k) => Ok(comp('D', k + 3, false)),
                (1, 2, 2) => Ok(comp('E', 6, false)),
                (1, 2, 3) => Ok(comp('E', 7, false)),
                (1, 2, 4) => Ok(comp('E', 8, false)),
                (2, 2, 2) => Ok(comp('E', 6, true)),
                (1, 3, 3) => Ok(comp('E', 7, true)),
                (1, 2, 5) => Ok(comp('E', 8, true)),
                _ => fail("star with arms outside the finite and affine lists"),
            }
        }
        2 => {
            // Two forks joined by a path, each fork with two leaves.
            let ok = branches.iter().all(|&b| arms(b).iter().filter(|&&(len, leaf)| leaf && len == 1).count() == 2);
            if ok {
                Ok(comp('D', v - 1, true))
            } else {
                fail("two branch vertices outside the affine D pattern")
            }
        }
        _ => fail("three or more branch vertices"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Vec<Vec<i64>> {
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if a == b {
                            2
                        } else if a.abs_diff(b) == 1 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn from_edges(n: usize, e: &[(usize, usize)]) -> Vec<Vec<i64>> {
        let mut g = vec![vec![0; n]; n];
        for (a, row) in g.iter_mut().enumerate() {
            row[a] = 2;
        }
        for &(a, b) in e {
            g[a][b] = -1;
            g[b][a] = -1;
        }
        g
    }

    #[test]
    fn finite_types() {
        assert_eq!(coxeter_type(&path(5)).unwrap().to_string(), "A5");
        let d5 = from_edges(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]);
        assert_eq!(coxeter_type(&d5).unwrap().to_string(), "D5");
        let e8 = from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]);
        assert_eq!(coxeter_type(&e8).unwrap().to_string(), "E8");
        assert_eq!(coxeter_type(&[]).unwrap().to_string(), "trivial");
    }

    #[test]
    fn affine_types() {
        let cyc = from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(coxeter_type(&cyc).unwrap().to_string(), "A3(1)");
        let d4 = from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(coxeter_type(&d4).unwrap().to_string(), "D4(1)");
        let d6 = from_edges(7, &[(0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6)]);
        assert_eq!(coxeter_type(&d6).unwrap().to_string(), "D6(1)");
        assert_eq!(coxeter_type(&[vec![2, -2], vec![-2, 2]]).unwrap().to_string(), "A1(1)");
    }

    #[test]
    fn products_sort_and_parse() {
        let g = from_edges(5, &[(1, 2), (2, 3), (3, 4)]);
        let t = coxeter_type(&g).unwrap();
        assert_eq!(t.to_string(), "A4xA1");
        assert_eq!("A1xA4".parse::<CoxeterType>().unwrap(), t);
        assert!("B2".parse::<CoxeterType>().is_err());
    }

    #[test]
    fn hyperbolic_is_rejected() {
        assert!(matches!(coxeter_type(&[vec![2, -3], vec![-3, 2]]), Err(Error::NotFiniteType(_))));
        let t = from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        assert!(coxeter_type(&t).is_err());
    }
}
