//! Recursive-descent parser for the parenthesis notation.
//!
//! ```text
//! spectral := point ("," point)*
//! point    := group+ | run
//! group    := "(" (group+ | run) ")"
//! run      := item+
//! item     := digit | "[" integer "]"
//! ```

use super::{PointType, SpectralType, Tree};
use crate::error::{Error, Result};

struct Parser {
    /// Non-whitespace characters with their byte offsets in the input.
    toks: Vec<(usize, char)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn spectral(&mut self) -> Result<SpectralType> {
        let mut points = Vec::new();
        loop {
            let start = self.offset();
            let tree = self.point()?;
            let pt = PointType::new(tree).map_err(|e| match e {
                Error::Invalid(msg) => Error::Parse { pos: start, msg },
                other => other,
            })?;
            points.push(pt);
            match self.peek() {
                None => break,
                Some(',') => self.pos += 1,
                Some(')') => return self.err("unbalanced parenthesis"),
                Some(c) => return self.err(format!("unexpected character {c:?}")),
            }
        }
        SpectralType::new(points).map_err(|e| match e {
            Error::Invalid(msg) => Error::Parse { pos: 0, msg },
            other => other,
        })
    }

    fn point(&mut self) -> Result<Tree> {
        match self.peek() {
            Some('(') => Ok(Tree::Node(self.groups()?)),
            Some(c) if is_item_start(c) => Ok(Tree::Leaf(self.run()?)),
            Some(')') => self.err("unbalanced parenthesis"),
            Some(c) => self.err(format!("expected a block, found {c:?}")),
            None => self.err("empty point"),
        }
    }

    fn groups(&mut self) -> Result<Vec<Tree>> {
        let mut out = Vec::new();
        while self.peek() == Some('(') {
            out.push(self.group()?);
        }
        Ok(out)
    }

    fn group(&mut self) -> Result<Tree> {
        self.pos += 1; // '('
        let t = match self.peek() {
            Some('(') => Tree::Node(self.groups()?),
            Some(c) if is_item_start(c) => Tree::Leaf(self.run()?),
            Some(')') => return self.err("empty group"),
            None => return self.err("unbalanced parenthesis"),
            Some(c) => return self.err(format!("unexpected character {c:?}")),
        };
        match self.peek() {
            Some(')') => {
                self.pos += 1;
                Ok(t)
            }
            None | Some(',') => self.err("unbalanced parenthesis"),
            Some(c) if is_item_start(c) => self.err("a group mixes blocks and a run"),
            Some(c) => self.err(format!("unexpected character {c:?}")),
        }
    }

    fn run(&mut self) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                if c == '0' {
                    return self.err("zero multiplicity");
                }
                out.push(c as i64 - '0' as i64);
                self.pos += 1;
            } else if c == '[' {
                self.pos += 1;
                let mut digits = String::new();
                while let Some(d) = self.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(d);
                    self.pos += 1;
                }
                if self.peek() != Some(']') || digits.is_empty() {
                    return self.err("malformed bracketed multiplicity");
                }
                let m: i64 = digits
                    .parse()
                    .map_err(|_| Error::Parse { pos: self.offset(), msg: "multiplicity out of range".into() })?;
                if m == 0 {
                    return self.err("zero multiplicity");
                }
                out.push(m);
                self.pos += 1;
            } else {
                break;
            }
        }
        if out.is_empty() {
            return self.err("expected a multiplicity");
        }
        Ok(out)
    }
}

fn is_item_start(c: char) -> bool {
    c.is_ascii_digit() || c == '['
}

/// Parses the parenthesis notation. Whitespace is ignored.
pub fn parse_spectral_type(text: &str) -> Result<SpectralType> {
    let toks: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = Parser { toks, pos: 0, end: text.len() };
    p.spectral()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_point_structure() {
        let st = parse_spectral_type("(1)(12),((1)(1))((11))").unwrap();
        assert_eq!(st.num_points(), 2);
        let p0 = st.point(0);
        assert_eq!(p0.num_blocks(), 2);
        assert_eq!(p0.chain(0).len(), 1);
        assert_eq!(p0.chain(1).len(), 2);
        assert_eq!(p0.d(0, 1), 0);
        let p1 = st.point(1);
        assert_eq!(p1.num_blocks(), 3);
        assert_eq!(p1.d(0, 1), 0);
        assert_eq!(p1.d(0, 2), 1);
        assert_eq!(p1.d(1, 2), 1);
    }

    #[test]
    fn unequal_ranks_rejected() {
        let e = parse_spectral_type("(1)(11),((1)(1))((11))").unwrap_err();
        assert!(matches!(e, Error::Parse { ref msg, .. } if msg.contains("rank mismatch")));
    }

    #[test]
    fn regular_points() {
        let st = parse_spectral_type("11,11,11").unwrap();
        assert_eq!(st.num_points(), 3);
        assert!(st.points().iter().all(|p| p.is_regular() && p.chain(0) == [1, 1]));
        assert_eq!(st.rank(), 2);
    }

    #[test]
    fn deep_pole() {
        let st = parse_spectral_type("(((1)))(((1)))").unwrap();
        assert_eq!(st.point(0).pole_order(), 4);
        assert_eq!(st.point(0).d(0, 1), 2);
    }

    #[test]
    fn bracketed_and_whitespace() {
        let st = parse_spectral_type(" [12]3 , 5 [10] ").unwrap();
        assert_eq!(st.point(0).chain(0), [12, 3]);
        assert_eq!(st.to_notation(), "5[10],[12]3");
    }

    #[test]
    fn errors() {
        let e = parse_spectral_type("((1)(1)").unwrap_err();
        assert!(matches!(e, Error::Parse { ref msg, .. } if msg.contains("unbalanced")));
        assert!(parse_spectral_type("(1)((1))").is_err());
        assert!(parse_spectral_type("11,111").is_err());
        assert!(parse_spectral_type("10").is_err());
        assert!(parse_spectral_type("1)").is_err());
        assert!(parse_spectral_type("").is_err());
    }

    #[test]
    fn canonical_printing_is_idempotent() {
        for s in ["(1)(12),((1)(1))((11))", "11,11,11", "(((1)))(((1)))", "21,(1)(1)(1),21"] {
            let st = parse_spectral_type(s).unwrap();
            let c = st.to_notation();
            let again = parse_spectral_type(&c).unwrap();
            assert_eq!(again, st.canonical());
            assert_eq!(again.to_notation(), c);
        }
        let st = parse_spectral_type("21,(1)(1)(1),21").unwrap();
        assert_eq!(st.to_notation(), "(1)(1)(1),21,21");
    }
}
