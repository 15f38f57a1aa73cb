//! A small declarative language for diagonal growth systems.
//!
//! ```text
//! # comments run to end of line; ';' ends a statement
//! var L = 106.65;  dL/dt = 0.02549605 * L;  role labor L;
//! var K = 100.70;  dK/dt = 0.06472564 * K;  role capital K;
//! var Y = 106.08;  dY/dt = 0.03592651 * Y;  role output Y;
//! ```
//!
//! Exactly three variables are accepted, each with one rate equation that
//! refers only to itself, and each bound to a distinct role.

use std::fmt;

use thiserror::Error;

use crate::error::MathError;
use crate::model::ExponentialModel;
use crate::scalar::Scalar;

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Labor,
    Capital,
    Output,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Labor, Role::Capital, Role::Output];

    pub fn keyword(self) -> &'static str {
        match self {
            Role::Labor => "labor",
            Role::Capital => "capital",
            Role::Output => "output",
        }
    }

    fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.keyword() == s)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Token sequence does not match the grammar.
    Syntax(String),
    /// A numeric literal that is malformed or outside the scalar range.
    InvalidNumber(String),
    /// A rate equation or role names a variable that was never declared.
    UnknownVariable(String),
    /// `dX/dt` refers to a variable other than `X`.
    OffDiagonal { variable: String, referenced: String },
    /// A variable, rate equation or role appears twice.
    DuplicateDeclaration(String),
    /// One of labor, capital or output is not assigned.
    MissingRole(Role),
    /// Two roles are bound to the same variable.
    RoleConflict { variable: String, first: Role, second: Role },
    /// A declared variable has no rate equation.
    MissingRate(String),
    /// The model does not declare exactly three variables.
    VariableCount(usize),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number `{s}`"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ParseErrorKind::OffDiagonal { variable, referenced } => write!(
                f,
                "rate of `{variable}` refers to `{referenced}`; only `{variable}` itself is allowed"
            ),
            ParseErrorKind::DuplicateDeclaration(what) => write!(f, "duplicate declaration of {what}"),
            ParseErrorKind::MissingRole(r) => write!(f, "no variable has role `{r}`"),
            ParseErrorKind::RoleConflict { variable, first, second } => {
                write!(f, "variable `{variable}` has roles `{first}` and `{second}`")
            }
            ParseErrorKind::MissingRate(v) => write!(f, "variable `{v}` has no rate equation"),
            ParseErrorKind::VariableCount(n) => write!(f, "expected exactly 3 variables, found {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Where the problem was detected; `None` for whole-model conditions.
    pub position: Option<Position>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some(p) => write!(f, "{p}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl ParseError {
    fn at(kind: ParseErrorKind, position: Position) -> Self {
        Self { kind, position: Some(position) }
    }

    fn global(kind: ParseErrorKind) -> Self {
        Self { kind, position: None }
    }
}

/// One declared state variable.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableSpec<T> {
    pub name: String,
    pub rate: T,
    pub init: T,
}

/// A validated three-variable diagonal system with role bindings.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec<T> {
    variables: Vec<VariableSpec<T>>,
    roles: [usize; 3],
}

impl<T: Scalar> ModelSpec<T> {
    /// Builds a spec directly; `roles` names the labor, capital and output variables.
    pub fn new(variables: Vec<VariableSpec<T>>, labor: &str, capital: &str, output: &str) -> Result<Self, ParseError> {
        if variables.len() != 3 {
            return Err(ParseError::global(ParseErrorKind::VariableCount(variables.len())));
        }
        for (i, v) in variables.iter().enumerate() {
            if !is_ident(&v.name) {
                return Err(ParseError::global(ParseErrorKind::Syntax(format!(
                    "`{}` is not an identifier",
                    v.name
                ))));
            }
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(ParseError::global(ParseErrorKind::DuplicateDeclaration(format!(
                    "variable `{}`",
                    v.name
                ))));
            }
            for x in [v.rate, v.init] {
                if !x.is_finite() {
                    return Err(ParseError::global(ParseErrorKind::InvalidNumber(x.to_string())));
                }
            }
        }
        let mut roles = [0; 3];
        for (role, name) in Role::ALL.into_iter().zip([labor, capital, output]) {
            let idx = variables
                .iter()
                .position(|v| v.name == name)
                .ok_or_else(|| ParseError::global(ParseErrorKind::UnknownVariable(name.to_string())))?;
            if let Some(prev) = Role::ALL[..role.index()].iter().find(|r| roles[r.index()] == idx) {
                return Err(ParseError::global(ParseErrorKind::RoleConflict {
                    variable: name.to_string(),
                    first: *prev,
                    second: role,
                }));
            }
            roles[role.index()] = idx;
        }
        Ok(Self { variables, roles })
    }

    /// Variables in declaration order.
    pub fn variables(&self) -> &[VariableSpec<T>] {
        &self.variables
    }

    pub fn variable(&self, role: Role) -> &VariableSpec<T> {
        &self.variables[self.roles[role.index()]]
    }

    pub fn labor_var(&self) -> &str {
        &self.variable(Role::Labor).name
    }

    pub fn capital_var(&self) -> &str {
        &self.variable(Role::Capital).name
    }

    pub fn output_var(&self) -> &str {
        &self.variable(Role::Output).name
    }

    /// Canonical text form; [`parse_model`] reads it back to an equal spec.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for v in &self.variables {
            out.push_str(&format!("var {} = {:?};\n", v.name, v.init));
            out.push_str(&format!("d{}/dt = {:?} * {};\n", v.name, v.rate, v.name));
        }
        for role in Role::ALL {
            out.push_str(&format!("role {} {};\n", role, self.variable(role).name));
        }
        out
    }

    /// The growth model bound by roles, with base year 0.
    pub fn to_model(&self) -> Result<ExponentialModel<T>, MathError> {
        let [l, k, y] = Role::ALL.map(|r| self.variable(r));
        ExponentialModel::from_levels([l.rate, k.rate, y.rate], [l.init, k.init, y.init], 0)
    }
}

/// Free-function form of [`ModelSpec::to_model`].
pub fn to_model<T: Scalar>(spec: &ModelSpec<T>) -> Result<ExponentialModel<T>, MathError> {
    spec.to_model()
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Eq,
    Semi,
    Slash,
    Star,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Star => f.write_str("`*`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let digit_at = |j: usize| chars.get(j).is_some_and(|c| c.is_ascii_digit());
    while i < chars.len() {
        let c = chars[i];
        let pos = Position { line, column: col };
        let start = i;
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => i += 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '=' | ';' | '/' | '*' => {
                toks.push((
                    match c {
                        '=' => Tok::Eq,
                        ';' => Tok::Semi,
                        '/' => Tok::Slash,
                        _ => Tok::Star,
                    },
                    pos,
                ));
                i += 1;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            }
            c if c.is_ascii_digit() || c == '.' || c == '+' || c == '-' => {
                if c == '+' || c == '-' {
                    i += 1;
                }
                let mut mantissa_digits = 0;
                while digit_at(i) {
                    i += 1;
                    mantissa_digits += 1;
                }
                if chars.get(i) == Some(&'.') {
                    i += 1;
                    while digit_at(i) {
                        i += 1;
                        mantissa_digits += 1;
                    }
                }
                let mut ok = mantissa_digits > 0;
                if ok && matches!(chars.get(i), Some('e' | 'E')) {
                    i += 1;
                    if matches!(chars.get(i), Some('+' | '-')) {
                        i += 1;
                    }
                    ok = digit_at(i);
                    while digit_at(i) {
                        i += 1;
                    }
                }
                // a literal must not run straight into an identifier character
                if chars.get(i).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '.') {
                    ok = false;
                    while chars.get(i).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '.') {
                        i += 1;
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                if !ok {
                    return Err(ParseError::at(ParseErrorKind::InvalidNumber(lit), pos));
                }
                toks.push((Tok::Number(lit), pos));
            }
            other => {
                return Err(ParseError::at(
                    ParseErrorKind::Syntax(format!("unexpected character {other:?}")),
                    pos,
                ))
            }
        }
        col += i - start;
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, Position)],
    pos: usize,
    end: Position,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a (Tok, Position)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self, expected: &str) -> Result<&'a (Tok, Position), ParseError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(ParseError::at(
                ParseErrorKind::Syntax(format!("expected {expected}, found end of input")),
                self.end,
            )),
        }
    }

    fn unexpected(expected: &str, found: &(Tok, Position)) -> ParseError {
        ParseError::at(
            ParseErrorKind::Syntax(format!("expected {expected}, found {}", found.0)),
            found.1,
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        let expected = tok.to_string();
        let t = self.next(&expected)?;
        if t.0 == tok {
            Ok(())
        } else {
            Err(Self::unexpected(&expected, t))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(&'a str, Position), ParseError> {
        let t = self.next(expected)?;
        match &t.0 {
            Tok::Ident(s) => Ok((s, t.1)),
            _ => Err(Self::unexpected(expected, t)),
        }
    }

    fn number<T: Scalar>(&mut self) -> Result<T, ParseError> {
        let t = self.next("a number")?;
        match &t.0 {
            Tok::Number(s) => s
                .parse::<T>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError::at(ParseErrorKind::InvalidNumber(s.clone()), t.1)),
            _ => Err(Self::unexpected("a number", t)),
        }
    }
}

struct Decl<T> {
    name: String,
    init: T,
    at: Position,
}

struct RateEq<T> {
    name: String,
    rate: T,
    referenced: String,
    at: Position,
    ref_at: Position,
}

/// Parses and validates a model description.
pub fn parse_model<T: Scalar>(text: &str) -> Result<ModelSpec<T>, ParseError> {
    let toks = lex(text)?;
    let end = {
        let line = text.split('\n').count();
        let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Position { line, column }
    };
    let mut p = Parser { toks: &toks, pos: 0, end };

    let mut decls: Vec<Decl<T>> = Vec::new();
    let mut rates: Vec<RateEq<T>> = Vec::new();
    let mut roles: [Option<(String, Position)>; 3] = [None, None, None];

    while let Some((tok, at)) = p.peek() {
        let at = *at;
        let Tok::Ident(head) = tok else {
            return Err(Parser::unexpected("a statement", &toks[p.pos]));
        };
        if head == "var" {
            p.pos += 1;
            let (name, name_at) = p.ident("a variable name")?;
            p.expect(Tok::Eq)?;
            let init = p.number()?;
            p.expect(Tok::Semi)?;
            if decls.iter().any(|d| d.name == name) {
                return Err(ParseError::at(
                    ParseErrorKind::DuplicateDeclaration(format!("variable `{name}`")),
                    name_at,
                ));
            }
            decls.push(Decl { name: name.to_string(), init, at: name_at });
        } else if head == "role" {
            p.pos += 1;
            let (kw, kw_at) = p.ident("`labor`, `capital` or `output`")?;
            let role = Role::from_keyword(kw).ok_or_else(|| {
                ParseError::at(
                    ParseErrorKind::Syntax(format!("expected `labor`, `capital` or `output`, found `{kw}`")),
                    kw_at,
                )
            })?;
            let (name, name_at) = p.ident("a variable name")?;
            p.expect(Tok::Semi)?;
            if roles[role.index()].is_some() {
                return Err(ParseError::at(
                    ParseErrorKind::DuplicateDeclaration(format!("role `{role}`")),
                    at,
                ));
            }
            roles[role.index()] = Some((name.to_string(), name_at));
        } else if head.len() > 1 && head.starts_with('d') && matches!(toks.get(p.pos + 1), Some((Tok::Slash, _))) {
            p.pos += 2;
            let (dt, dt_at) = p.ident("`dt`")?;
            if dt != "dt" {
                return Err(ParseError::at(
                    ParseErrorKind::Syntax(format!("expected `dt`, found `{dt}`")),
                    dt_at,
                ));
            }
            p.expect(Tok::Eq)?;
            let rate = p.number()?;
            p.expect(Tok::Star)?;
            let (referenced, ref_at) = p.ident("a variable name")?;
            p.expect(Tok::Semi)?;
            let name = &head[1..];
            if rates.iter().any(|r| r.name == name) {
                return Err(ParseError::at(
                    ParseErrorKind::DuplicateDeclaration(format!("rate equation for `{name}`")),
                    at,
                ));
            }
            rates.push(RateEq {
                name: name.to_string(),
                rate,
                referenced: referenced.to_string(),
                at,
                ref_at,
            });
        } else {
            return Err(ParseError::at(
                ParseErrorKind::Syntax(format!("expected `var`, `role` or a rate equation, found `{head}`")),
                at,
            ));
        }
    }

    let declared = |name: &str| decls.iter().any(|d| d.name == name);
    for r in &rates {
        if !declared(&r.name) {
            return Err(ParseError::at(ParseErrorKind::UnknownVariable(r.name.clone()), r.at));
        }
        if !declared(&r.referenced) {
            return Err(ParseError::at(ParseErrorKind::UnknownVariable(r.referenced.clone()), r.ref_at));
        }
        if r.referenced != r.name {
            return Err(ParseError::at(
                ParseErrorKind::OffDiagonal {
                    variable: r.name.clone(),
                    referenced: r.referenced.clone(),
                },
                r.ref_at,
            ));
        }
    }
    for (name, at) in roles.iter().flatten() {
        if !declared(name) {
            return Err(ParseError::at(ParseErrorKind::UnknownVariable(name.clone()), *at));
        }
    }
    if decls.len() != 3 {
        let at = decls.get(3).map(|d| d.at);
        return Err(ParseError { kind: ParseErrorKind::VariableCount(decls.len()), position: at });
    }
    for d in &decls {
        if !rates.iter().any(|r| r.name == d.name) {
            return Err(ParseError::at(ParseErrorKind::MissingRate(d.name.clone()), d.at));
        }
    }
    for role in Role::ALL {
        if roles[role.index()].is_none() {
            return Err(ParseError::global(ParseErrorKind::MissingRole(role)));
        }
    }
    for second in Role::ALL {
        let (name, at) = roles[second.index()].as_ref().unwrap();
        if let Some(first) = Role::ALL[..second.index()]
            .iter()
            .find(|r| roles[r.index()].as_ref().is_some_and(|(n, _)| n == name))
        {
            return Err(ParseError::at(
                ParseErrorKind::RoleConflict { variable: name.clone(), first: *first, second },
                *at,
            ));
        }
    }

    let variables = decls
        .into_iter()
        .map(|d| {
            let rate = rates.iter().find(|r| r.name == d.name).unwrap().rate;
            VariableSpec { name: d.name, rate, init: d.init }
        })
        .collect();
    let role_name = |r: Role| roles[r.index()].as_ref().unwrap().0.as_str();
    ModelSpec::new(
        variables,
        role_name(Role::Labor),
        role_name(Role::Capital),
        role_name(Role::Output),
    )
}
