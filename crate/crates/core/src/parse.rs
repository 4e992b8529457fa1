//! Set expressions for the shipped instances.
//!
//! ```text
//! set    := "empty" | piece ("U" piece)*
//! piece  := ("[" | "(") rat "," (rat | "inf") ("]" | ")")      halfline
//! box    := piece "x" piece                                    dict2
//! slab   := piece "x" ("ball(" rat ")" | "ball[" rat "]" | "all" | "{" vec,* "}")   cone:n
//! lat    := "ALL" | "ALL\{" sub,* "}" | "{" sub,* "}"          lattice2
//! sub    := "zero" | "full" | "span(" rat "," rat ")"
//! ```

use std::fmt;

use num_traits::Signed;

use crate::instances::{AnyEvs, Subspace, SubspaceLattice};
use crate::scalar::parse_rational_prefix;
use crate::sets::{Interval, IntervalUnion, LatticeFamily, ProductSlice, Rect, RectUnion, SetAlgebra, SetError, SlicePiece, VectorRegion};
use crate::{CheckOutcome, Rational, Scalar};

/// A parsed set over one of the instances with exact set support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetRep {
    Interval(IntervalUnion<Rational>),
    Rect(RectUnion<Rational>),
    Lattice(LatticeFamily),
    Slice(ProductSlice),
}

impl fmt::Display for SetRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRep::Interval(a) => write!(f, "{a}"),
            SetRep::Rect(a) => write!(f, "{a}"),
            SetRep::Lattice(a) => write!(f, "{a}"),
            SetRep::Slice(a) => write!(f, "{a}"),
        }
    }
}

impl SetRep {
    pub fn is_balanced(&self) -> Result<CheckOutcome, SetError> {
        match self {
            SetRep::Interval(a) => a.is_balanced(),
            SetRep::Rect(a) => a.is_balanced(),
            SetRep::Lattice(a) => a.is_balanced(),
            SetRep::Slice(a) => SetAlgebra::is_balanced(a),
        }
    }

    pub fn is_absorbing(&self) -> Result<CheckOutcome, SetError> {
        match self {
            SetRep::Interval(a) => a.is_absorbing(),
            SetRep::Rect(a) => a.is_absorbing(),
            SetRep::Lattice(a) => a.is_absorbing(),
            SetRep::Slice(a) => a.is_absorbing(),
        }
    }

    /// Semantic equality of the represented sets.
    pub fn set_eq(&self, other: &SetRep) -> bool {
        match (self, other) {
            (SetRep::Interval(a), SetRep::Interval(b)) => a.set_eq(b),
            (SetRep::Rect(a), SetRep::Rect(b)) => a.set_eq(b),
            (SetRep::Lattice(a), SetRep::Lattice(b)) => a.set_eq(b),
            (SetRep::Slice(a), SetRep::Slice(b)) => a.dim() == b.dim() && a.set_eq(b),
            _ => false,
        }
    }

    pub fn as_intervals(&self) -> Option<&IntervalUnion<Rational>> {
        match self {
            SetRep::Interval(a) => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("expected {0}")]
    Syntax(String),
    #[error("{0}")]
    Domain(String),
    #[error("instance {0} has no set expressions")]
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Intervals,
    Rects,
    Lattice,
    Slices(usize),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, what: &str) -> Result<T, ParseError> {
        Err(ParseError { offset: self.pos, kind: ParseErrorKind::Syntax(what.to_string()) })
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.syntax(&format!("`{tok}`"))
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        match parse_rational_prefix::<Rational>(self.rest()) {
            Some((q, used)) => {
                self.pos += used;
                Ok(q)
            }
            None => self.syntax("a rational p or p/q"),
        }
    }

    fn scalar(&mut self) -> Result<Scalar, ParseError> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(|b| b.is_ascii_digit() || b"/+-i".contains(b)).count();
        match self.rest()[..len].parse::<Scalar>() {
            Ok(s) => {
                self.pos += len;
                Ok(s)
            }
            Err(e) => Err(ParseError { offset: self.pos + e.offset, kind: ParseErrorKind::Syntax("a scalar p/q+r/si".into()) }),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn interval(&mut self) -> Result<Interval<Rational>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let lo_closed = if self.eat("[") {
            true
        } else if self.eat("(") {
            false
        } else {
            return self.syntax("`[` or `(`");
        };
        self.skip_ws();
        let lo_at = self.pos;
        let lo = self.rational()?;
        if lo.is_negative() {
            return Err(ParseError { offset: lo_at, kind: ParseErrorKind::Domain(format!("left endpoint {lo} is outside [0,inf)")) });
        }
        self.expect(",")?;
        let hi = if self.eat("inf") { None } else { Some(self.rational()?) };
        let hi_closed = if self.eat("]") {
            if hi.is_none() {
                self.pos -= 1;
                return self.syntax("`)` after inf");
            }
            true
        } else if self.eat(")") {
            false
        } else {
            return self.syntax("`]` or `)`");
        };
        Interval::new(lo, lo_closed, hi, hi_closed).map_err(|e| ParseError { offset: start, kind: ParseErrorKind::Domain(e.to_string()) })
    }

    fn region(&mut self, n: usize) -> Result<VectorRegion, ParseError> {
        if self.eat("ball(") {
            let r = self.rational()?;
            self.expect(")")?;
            return Ok(VectorRegion::Ball { radius: r, closed: false });
        }
        if self.eat("ball[") {
            let r = self.rational()?;
            self.expect("]")?;
            return Ok(VectorRegion::Ball { radius: r, closed: true });
        }
        if self.eat("all") {
            return Ok(VectorRegion::All);
        }
        self.expect("{")?;
        let mut vecs = Vec::new();
        if !self.eat("}") {
            loop {
                self.skip_ws();
                let at = self.pos;
                self.expect("(")?;
                let mut v = vec![self.scalar()?];
                while self.eat(",") {
                    v.push(self.scalar()?);
                }
                self.expect(")")?;
                if v.len() != n {
                    return Err(ParseError { offset: at, kind: ParseErrorKind::Syntax(format!("a vector with {n} coordinates")) });
                }
                vecs.push(v);
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(VectorRegion::Finite(vecs))
    }

    fn subspace(&mut self) -> Result<Subspace, ParseError> {
        let n = SubspaceLattice::DIM;
        if self.eat("zero") {
            return Ok(Subspace::zero(n));
        }
        if self.eat("full") {
            return Ok(Subspace::full(n));
        }
        self.expect("span(")?;
        let mut rows = Vec::new();
        if self.eat("(") {
            loop {
                rows.push(vec![self.rational()?, {
                    self.expect(",")?;
                    self.rational()?
                }]);
                self.expect(")")?;
                if !self.eat(",") {
                    break;
                }
                self.expect("(")?;
            }
        } else {
            let p = self.rational()?;
            self.expect(",")?;
            rows.push(vec![p, self.rational()?]);
        }
        self.expect(")")?;
        Ok(Subspace::span(n, &rows))
    }

    fn subspace_list(&mut self) -> Result<Vec<Subspace>, ParseError> {
        self.expect("{")?;
        let mut out = Vec::new();
        if self.eat("}") {
            return Ok(out);
        }
        loop {
            out.push(self.subspace()?);
            if self.eat("}") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn set(&mut self, shape: Shape) -> Result<SetRep, ParseError> {
        if shape == Shape::Lattice {
            let fam = if self.eat("ALL") {
                if self.eat("\\") {
                    LatticeFamily::all_except(self.subspace_list()?)
                } else {
                    LatticeFamily::all()
                }
            } else {
                LatticeFamily::finite(self.subspace_list()?)
            };
            return Ok(SetRep::Lattice(fam));
        }
        let mut more = !self.eat("empty");
        let mut intervals = Vec::new();
        let mut rects = Vec::new();
        let mut pieces = Vec::new();
        while more {
            let i = self.interval()?;
            match shape {
                Shape::Intervals => intervals.push(i),
                Shape::Rects => {
                    self.expect("x")?;
                    rects.push(Rect::new(i, self.interval()?));
                }
                Shape::Slices(n) => {
                    self.expect("x")?;
                    pieces.push(SlicePiece { r: i, v: self.region(n)? });
                }
                Shape::Lattice => unreachable!(),
            }
            more = self.eat("U");
        }
        Ok(match shape {
            Shape::Intervals => SetRep::Interval(IntervalUnion::new(intervals)),
            Shape::Rects => SetRep::Rect(RectUnion::new(rects)),
            Shape::Slices(n) => SetRep::Slice(ProductSlice::new(n, pieces)),
            Shape::Lattice => unreachable!(),
        })
    }
}

fn shape_of(instance: &AnyEvs) -> Option<Shape> {
    match instance {
        AnyEvs::HalfLine(_) => Some(Shape::Intervals),
        AnyEvs::Dict(_) => Some(Shape::Rects),
        AnyEvs::Lattice(_) => Some(Shape::Lattice),
        AnyEvs::Cone(c) => Some(Shape::Slices(c.dim())),
        _ => None,
    }
}

/// Parses a set expression for `instance` into canonical form.
pub fn parse_set(text: &str, instance: &AnyEvs) -> Result<SetRep, ParseError> {
    use crate::Evs;
    let shape = shape_of(instance).ok_or_else(|| ParseError { offset: 0, kind: ParseErrorKind::Unsupported(instance.name()) })?;
    let mut p = Parser { src: text, pos: 0 };
    let set = p.set(shape)?;
    if !p.at_end() {
        return p.syntax("end of input");
    }
    Ok(set)
}

/// Parses a halfline set expression.
pub fn parse_intervals(text: &str) -> Result<IntervalUnion<Rational>, ParseError> {
    match parse_set(text, &AnyEvs::HalfLine(Default::default()))? {
        SetRep::Interval(a) => Ok(a),
        _ => unreachable!("halfline parses to intervals"),
    }
}

/// One set expression per non-blank line; `#` starts a comment line.
/// Errors carry the 1-based line number.
pub fn parse_lines(text: &str, instance: &AnyEvs) -> Result<Vec<SetRep>, (usize, ParseError)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_set(l, instance).map_err(|e| (i + 1, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(s: &str) -> AnyEvs {
        s.parse().unwrap()
    }

    #[test]
    fn interval_grammar() {
        let a = parse_intervals("[0,1/2) U (3/4,2]").unwrap();
        assert_eq!(a.components().len(), 2);
        assert_eq!(a.to_string(), "[0,1/2) U (3/4,2]");
        assert_eq!(parse_intervals("[0,1) U [1,2)").unwrap().to_string(), "[0,2)");
        assert_eq!(parse_intervals(" [ 1 , inf ) ").unwrap().to_string(), "[1,inf)");
        assert_eq!(parse_intervals("empty").unwrap(), IntervalUnion::empty());
        assert_eq!(parse_intervals("[0,0]").unwrap().to_string(), "[0,0]");
    }

    #[test]
    fn interval_errors() {
        let e = parse_intervals("[-1,0)").unwrap_err();
        assert_eq!(e.offset, 1);
        assert!(matches!(e.kind, ParseErrorKind::Domain(_)));
        assert_eq!(parse_intervals("[0,1) U").unwrap_err().offset, 7);
        assert_eq!(parse_intervals("[0;1)").unwrap_err().offset, 2);
        assert_eq!(parse_intervals("[0,inf]").unwrap_err().offset, 6);
        assert!(matches!(parse_intervals("[2,1)").unwrap_err().kind, ParseErrorKind::Domain(_)));
        assert_eq!(parse_intervals("[0,1) junk").unwrap_err().offset, 6);
    }

    #[test]
    fn other_shapes() {
        let d = inst("dict2");
        assert_eq!(parse_set("[0,1)x[0,2)", &d).unwrap().to_string(), "[0,1)x[0,2)");
        let l = inst("lattice2");
        assert_eq!(parse_set("ALL", &l).unwrap(), SetRep::Lattice(LatticeFamily::all()));
        let f = parse_set("ALL\\{span(1,0), zero}", &l).unwrap();
        assert_eq!(f.to_string(), "ALL\\{zero,span(1,0)}");
        assert_eq!(parse_set("{span(2,4),full}", &l).unwrap().to_string(), "{full,span(1,2)}");
        let c = inst("cone:2");
        let s = parse_set("[0,1)xball(1) U [2,3]x{(0,1/2+1/3i)}", &c).unwrap();
        assert_eq!(parse_set(&s.to_string(), &c).unwrap(), s);
        assert_eq!(parse_set("[0,1)x{(1)}", &c).unwrap_err().offset, 7);
        assert!(matches!(parse_set("[0,1)", &inst("twisted:2")).unwrap_err().kind, ParseErrorKind::Unsupported(_)));
    }

    #[test]
    fn lines_with_comments() {
        let sets = parse_lines("# gens\n[1,2)\n\n[0,1]\n", &inst("halfline")).unwrap();
        assert_eq!(sets.len(), 2);
        let (line, _) = parse_lines("[0,1)\n[x", &inst("halfline")).unwrap_err();
        assert_eq!(line, 2);
    }
}
