//! Recursive-descent parser for `exists x y . (x + x = 4) and (x * y = 6)`.

use std::fmt;

use crate::ast::{Formula, IntFormula, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    Exists,
    And,
    Or,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::Exists => write!(f, "'exists'"),
            Tok::And => write!(f, "'and'"),
            Tok::Or => write!(f, "'or'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let err = |m: String| ParseError { line: l0, col: c0, message: m };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| err(format!("integer literal {s} is too large")))?;
            out.push(Spanned { tok: Tok::Int(n), line: l0, col: c0 });
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let tok = match s.as_str() {
                "exists" => Tok::Exists,
                "and" => Tok::And,
                "or" => Tok::Or,
                "not" | "forall" => return Err(err(format!("'{s}' is not allowed: only positive existential sentences are accepted"))),
                _ => Tok::Ident(s),
            };
            out.push(Spanned { tok, line: l0, col: c0 });
        } else if "+*=().".contains(c) {
            i += 1;
            out.push(Spanned { tok: Tok::Sym(c), line: l0, col: c0 });
        } else if c == '!' || c == '~' {
            return Err(err(format!("'{c}' is not allowed: only positive existential sentences are accepted")));
        } else {
            return Err(err(format!("unexpected character '{c}'")));
        }
        col += i - start;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: Vec<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, message: String) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, col: t.col, message }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.eat(&Tok::Sym(c)) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn sentence(&mut self) -> PResult<IntFormula> {
        if self.eat(&Tok::Exists) {
            while let Tok::Ident(v) = self.peek().clone() {
                if self.vars.contains(&v) {
                    return Err(self.error(format!("variable '{v}' declared twice")));
                }
                self.vars.push(v);
                self.pos += 1;
            }
            if self.vars.is_empty() {
                return Err(self.unexpected("a variable name"));
            }
            self.expect_sym('.')?;
        }
        let body = self.disjunction()?;
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("'and', 'or' or end of input"));
        }
        Ok(IntFormula { vars: std::mem::take(&mut self.vars), body })
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(&Tok::Or) {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.atom()?];
        while self.eat(&Tok::And) {
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    /// An equation, or a parenthesized formula. A leading `(` is ambiguous,
    /// so the equation reading is tried first.
    fn atom(&mut self) -> PResult<Formula> {
        let start = self.pos;
        let as_equation = self.equation();
        if as_equation.is_ok() || *self.toks[start].tok_ref() != Tok::Sym('(') {
            return as_equation;
        }
        let eq_err = as_equation.unwrap_err();
        let eq_pos = self.pos;
        self.pos = start + 1;
        let inner = self.disjunction().and_then(|f| self.expect_sym(')').map(|_| f));
        match inner {
            Ok(f) => Ok(f),
            Err(e) => {
                let further = (e.line, e.col) >= (eq_err.line, eq_err.col);
                if !further {
                    self.pos = eq_pos;
                }
                Err(if further { e } else { eq_err })
            }
        }
    }

    fn equation(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        self.expect_sym('=')?;
        let rhs = self.term()?;
        Ok(Formula::Eq(lhs, rhs))
    }

    fn term(&mut self) -> PResult<Term> {
        let mut t = self.product()?;
        while self.eat(&Tok::Sym('+')) {
            t = Term::Add(Box::new(t), Box::new(self.product()?));
        }
        Ok(t)
    }

    fn product(&mut self) -> PResult<Term> {
        let mut t = self.factor()?;
        while self.eat(&Tok::Sym('*')) {
            t = Term::Mul(Box::new(t), Box::new(self.factor()?));
        }
        Ok(t)
    }

    fn factor(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Ident(v) => {
                if !self.vars.contains(&v) {
                    return Err(self.error(format!("undeclared variable '{v}'")));
                }
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Term::Const(n))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect_sym(')')?;
                Ok(t)
            }
            _ => Err(self.unexpected("a variable, an integer or '('")),
        }
    }
}

impl Spanned {
    fn tok_ref(&self) -> &Tok {
        &self.tok
    }
}

pub fn parse(src: &str) -> Result<IntFormula, ParseError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0, vars: Vec::new() }.sentence()
}
