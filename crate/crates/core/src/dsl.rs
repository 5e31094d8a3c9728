//! Text syntax for operad elements, e.g. `((1,2),3)+((3,1),2)+((2,3),1)`.
//!
//! Bracket products are written `(a,b)` or `[a,b]`; infix products `a*b`,
//! `a·b` (ASCII `.`), `a◊b` (ASCII `<>`), `a▹b` (ASCII `|>`). A coefficient
//! is an integer or `p/q` placed before a monomial. `1` alone is the identity.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::free_operad::{GenId, Glyph, OperadElement, Signature, Tree, MAX_ARITY};
use crate::kernel::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Unbalanced,
    DuplicateLeaf(u8),
    MissingLeaf(u8),
    MixedArity { expected: usize, found: usize },
    UnknownSymbol(String),
    Unexpected(String),
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Character offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            ParseErrorKind::Unbalanced => "unbalanced delimiter".to_string(),
            ParseErrorKind::DuplicateLeaf(l) => format!("leaf {l} appears twice"),
            ParseErrorKind::MissingLeaf(l) => format!("leaf {l} is missing"),
            ParseErrorKind::MixedArity { expected, found } => {
                format!("monomial has arity {found}, expected {expected}")
            }
            ParseErrorKind::UnknownSymbol(s) => format!("unknown product symbol `{s}`"),
            ParseErrorKind::Unexpected(s) => format!("unexpected {s}"),
            ParseErrorKind::Empty => "empty expression".to_string(),
        };
        write!(f, "at column {}: {}", self.pos + 1, what)
    }
}

impl ParseError {
    /// The input line with a caret under the offending column.
    pub fn render(&self, src: &str) -> String {
        format!("{src}\n{}^ {self}", " ".repeat(self.pos))
    }
}

/// Glyph → generator lookup for one parse.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    entries: Vec<(Glyph, GenId)>,
}

impl SymbolTable {
    /// Every plain generator of a signature under its own glyph.
    pub fn for_signature(sig: &Signature) -> Self {
        let entries = sig
            .ids()
            .filter(|g| !sig.is_reversed(*g))
            .map(|g| (sig.family_of(g).glyph.clone(), g))
            .collect();
        SymbolTable { entries }
    }

    fn bracket(&self, open: char) -> Option<GenId> {
        self.entries.iter().find_map(|(gl, g)| match gl {
            Glyph::Bracket { open: o, .. } if *o == open => Some(*g),
            _ => None,
        })
    }

    fn infix(&self, op: char) -> Option<GenId> {
        self.entries.iter().find_map(|(gl, g)| match gl {
            Glyph::Infix(c) if *c == op => Some(*g),
            _ => None,
        })
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    table: &'a SymbolTable,
    /// Stack of open-delimiter positions, for diagnostics.
    opens: Vec<usize>,
    /// Leaves of the current monomial with their offsets.
    leaves: Vec<(u8, usize)>,
}

fn closer(open: char) -> char {
    match open {
        '(' => ')',
        '[' => ']',
        _ => open,
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { pos: self.pos, kind }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            None if !self.opens.is_empty() => ParseError {
                pos: *self.opens.last().unwrap(),
                kind: ParseErrorKind::Unbalanced,
            },
            None => self.err(ParseErrorKind::Unexpected("end of input".into())),
            Some(')' | ']') => self.err(ParseErrorKind::Unbalanced),
            Some(c) => self.err(ParseErrorKind::Unexpected(format!("`{c}`"))),
        }
    }

    fn number(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    /// Infix operator at the cursor, consuming it.
    fn infix_op(&mut self) -> Option<Result<GenId, ParseError>> {
        self.skip_ws();
        let at = self.pos;
        let c = self.peek()?;
        let (glyph, width) = match c {
            '·' | '.' => ('·', 1),
            '*' => ('*', 1),
            '◊' => ('◊', 1),
            '▹' => ('▹', 1),
            '<' if self.chars.get(self.pos + 1) == Some(&'>') => ('◊', 2),
            '|' if self.chars.get(self.pos + 1) == Some(&'>') => ('▹', 2),
            c if c.is_alphanumeric() || "()[],+-/".contains(c) || c.is_whitespace() => return None,
            other => {
                return Some(Err(ParseError {
                    pos: at,
                    kind: ParseErrorKind::UnknownSymbol(other.to_string()),
                }))
            }
        };
        self.pos += width;
        Some(self.table.infix(glyph).ok_or(ParseError {
            pos: at,
            kind: ParseErrorKind::UnknownSymbol(glyph.to_string()),
        }))
    }

    /// `atom (op atom)*`, left-associated.
    fn chain(&mut self) -> Result<Tree, ParseError> {
        let mut t = self.atom()?;
        while let Some(op) = self.infix_op() {
            let g = op?;
            let rhs = self.atom()?;
            t = Tree::node(g, t, rhs);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Tree, ParseError> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.number().unwrap();
                let l: u8 = n
                    .clone()
                    .try_into()
                    .ok()
                    .filter(|l: &u8| *l >= 1 && (*l as usize) <= MAX_ARITY)
                    .ok_or(ParseError { pos: at, kind: ParseErrorKind::Unexpected(format!("leaf label {n}")) })?;
                self.leaves.push((l, at));
                Ok(Tree::Leaf(l))
            }
            Some(open @ ('(' | '[')) => {
                self.pos += 1;
                self.opens.push(at);
                let first = self.chain()?;
                self.skip_ws();
                match self.peek() {
                    Some(',') => {
                        self.pos += 1;
                        let second = self.chain()?;
                        self.skip_ws();
                        if self.peek() != Some(closer(open)) {
                            return Err(self.unexpected_close(at));
                        }
                        self.pos += 1;
                        self.opens.pop();
                        let g = self.table.bracket(open).ok_or(ParseError {
                            pos: at,
                            kind: ParseErrorKind::UnknownSymbol(format!("{open},{}", closer(open))),
                        })?;
                        Ok(Tree::node(g, first, second))
                    }
                    Some(')') if open == '(' => {
                        self.pos += 1;
                        self.opens.pop();
                        Ok(first)
                    }
                    _ => Err(self.unexpected_close(at)),
                }
            }
            _ => Err(self.unexpected()),
        }
    }

    fn unexpected_close(&self, open_at: usize) -> ParseError {
        match self.peek() {
            None | Some(')') | Some(']') => ParseError { pos: open_at, kind: ParseErrorKind::Unbalanced },
            _ => self.unexpected(),
        }
    }

    fn coefficient(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let save = self.pos;
        let Some(num) = self.number() else {
            return Ok(Rational::one());
        };
        self.skip_ws();
        match self.peek() {
            Some('/') => {
                self.pos += 1;
                self.skip_ws();
                let at = self.pos;
                let den = self
                    .number()
                    .ok_or_else(|| self.err(ParseErrorKind::Unexpected("missing denominator".into())))?;
                if den.is_zero() {
                    return Err(ParseError { pos: at, kind: ParseErrorKind::Unexpected("zero denominator".into()) });
                }
                Ok(Rational::new(num, den))
            }
            Some('(') | Some('[') => Ok(Rational::from_integer(num)),
            _ => {
                // a bare leaf label, not a coefficient
                self.pos = save;
                Ok(Rational::one())
            }
        }
    }

    fn expression(&mut self) -> Result<Vec<Monomial>, ParseError> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err(ParseErrorKind::Empty));
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let mut sign = Rational::one();
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    self.pos += 1;
                    sign = -sign;
                }
                _ if first => {}
                None => break,
                _ => return Err(self.unexpected()),
            }
            first = false;
            let c = self.coefficient()?;
            self.skip_ws();
            let at = self.pos;
            let t = self.chain()?;
            let leaves = std::mem::take(&mut self.leaves);
            terms.push((sign * c, t, at, leaves));
            self.skip_ws();
            if self.peek().is_none() {
                break;
            }
        }
        Ok(terms)
    }
}

/// Coefficient, tree, offset, and leaf offsets of one parsed monomial.
type Monomial = (Rational, Tree, usize, Vec<(u8, usize)>);

fn check_leaves(t: &Tree, at: usize, positions: &[(u8, usize)]) -> Result<usize, ParseError> {
    let n = t.leaves().len();
    let mut seen = BTreeSet::new();
    for (l, pos) in positions {
        if !seen.insert(*l) {
            return Err(ParseError { pos: *pos, kind: ParseErrorKind::DuplicateLeaf(*l) });
        }
    }
    for l in 1..=n as u8 {
        if !seen.contains(&l) {
            return Err(ParseError { pos: at, kind: ParseErrorKind::MissingLeaf(l) });
        }
    }
    Ok(n)
}

/// Parse with an explicit symbol table.
pub fn parse_with(text: &str, table: &SymbolTable, sig: &Signature) -> Result<OperadElement, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, table, opens: Vec::new(), leaves: Vec::new() };
    let terms = p.expression()?;
    let mut arity = None;
    for (_, t, at, leaves) in &terms {
        let n = check_leaves(t, *at, leaves)?;
        match arity {
            None => arity = Some(n),
            Some(a) if a != n => {
                return Err(ParseError { pos: *at, kind: ParseErrorKind::MixedArity { expected: a, found: n } })
            }
            _ => {}
        }
    }
    let mut e = OperadElement::zero(arity.unwrap_or(0));
    for (c, t, _, _) in terms {
        e.add_tree(&t, c, sig);
    }
    Ok(e)
}

/// Parse using every generator of `sig` under its own glyph.
pub fn parse_relation(text: &str, sig: &Signature) -> Result<OperadElement, ParseError> {
    parse_with(text, &SymbolTable::for_signature(sig), sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_operad::{format_element, Generator, SwapKind};
    use crate::kernel::{q, qi};

    fn sig() -> Signature {
        Signature::new(vec![
            Generator::new("lie", 0, SwapKind::Antisymmetric, Glyph::Bracket { open: '(', close: ')' }),
            Generator::new("leib", 1, SwapKind::Pair, Glyph::Bracket { open: '[', close: ']' }),
            Generator::new("zinb", 0, SwapKind::Pair, Glyph::Infix('*')),
            Generator::new("com", 0, SwapKind::Symmetric, Glyph::Infix('·')),
        ])
    }

    #[test]
    fn jacobi() {
        let s = sig();
        let e = parse_relation("((1,2),3)+((3,1),2)+((2,3),1)", &s).unwrap();
        assert_eq!(e.arity, 3);
        assert_eq!(e.terms.len(), 3);
        assert!(e.terms.values().all(|c| c == &qi(1) || c == &qi(-1)));
    }

    #[test]
    fn identity_and_coefficients() {
        let s = sig();
        assert_eq!(parse_relation("1", &s).unwrap(), OperadElement::identity());
        let e = parse_relation(" 3/4 [1,2] - 2[2,1] ", &s).unwrap();
        assert_eq!(e.terms.values().cloned().collect::<Vec<_>>().len(), 2);
        assert!(e.terms.values().any(|c| c == &q(3, 4)));
        let z = parse_relation("1*(2·3) - (1*2)*3", &s).unwrap();
        assert_eq!(z.arity, 3);
    }

    #[test]
    fn cancellation() {
        let s = sig();
        assert!(parse_relation("(1,2)+(2,1)", &s).unwrap().is_zero());
        assert!(parse_relation("1·2-2·1", &s).unwrap().is_zero());
    }

    #[test]
    fn errors_are_positioned() {
        let s = sig();
        let e = parse_relation("([1,2)", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Unbalanced);
        assert_eq!(e.pos, 1);
        let e = parse_relation("((1,2),1)", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateLeaf(1));
        assert_eq!(e.pos, 7);
        let e = parse_relation("(1,2)+((1,2),3)", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MixedArity { expected: 2, found: 3 });
        assert_eq!(e.pos, 6);
        let e = parse_relation("1#2", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("#".into()));
        let e = parse_relation("1◊2", &s).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnknownSymbol(_)));
        let e = parse_relation("(1,3)", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingLeaf(2));
        assert!(parse_relation("", &s).is_err());
        assert!(parse_relation("(1,2))", &s).is_err());
        assert!(e.render("(1,3)").contains('^'));
    }

    #[test]
    fn round_trip() {
        let s = sig();
        for text in ["[(1,2),3]-([1,2],3)+([2,1],3)", "(1*2)·3-1*(2·3)+(1·2)*3", "1/2[1,[2,3]]"] {
            let e = parse_relation(text, &s).unwrap();
            let shown = format_element(&e, &s);
            assert_eq!(parse_relation(&shown, &s).unwrap(), e, "{shown}");
        }
    }
}
