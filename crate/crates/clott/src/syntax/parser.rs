//! Concrete grammar. Parsing runs in two phases: a token/structure phase
//! and a resolver phase that classifies `t [x]` as tick or clock
//! application and rejects unbound identifiers.

use std::fmt;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

fn err<T>(pos: &Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos: pos.clone(), msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Colon,
    Semi,
    Comma,
    Equals,
}

const KEYWORDS: &[&str] = &[
    "clocks", "ctx", "type", "Nat", "Pi", "Sig", "Id", "Later", "Forall", "Str", "lam", "pair",
    "fst", "snd", "tlam", "adv", "clam", "dfix", "suc", "natrec", "refl", "cirr", "tirr",
];

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut lx = Lexer { chars: src.chars().peekable(), line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        while let Some(&c) = lx.chars.peek() {
            if c == '\n' {
                lx.chars.next();
                lx.line += 1;
                lx.col = 1;
            } else if c.is_whitespace() {
                lx.chars.next();
                lx.col += 1;
            } else if c == '-' {
                // comment: -- to end of line
                let mut clone = lx.chars.clone();
                clone.next();
                if clone.peek() == Some(&'-') {
                    while let Some(&c2) = lx.chars.peek() {
                        if c2 == '\n' {
                            break;
                        }
                        lx.chars.next();
                        lx.col += 1;
                    }
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        let pos = Pos { line: lx.line, col: lx.col };
        let Some(&c) = lx.chars.peek() else { break };
        let tok = match c {
            '(' => {
                lx.bump();
                Tok::LParen
            }
            ')' => {
                lx.bump();
                Tok::RParen
            }
            '[' => {
                lx.bump();
                Tok::LBrack
            }
            ']' => {
                lx.bump();
                Tok::RBrack
            }
            ':' => {
                lx.bump();
                Tok::Colon
            }
            ';' => {
                lx.bump();
                Tok::Semi
            }
            ',' => {
                lx.bump();
                Tok::Comma
            }
            '=' => {
                lx.bump();
                Tok::Equals
            }
            c if c.is_ascii_digit() => {
                let mut n: u64 = 0;
                while let Some(&d) = lx.chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n * 10 + v as u64;
                        lx.bump();
                    } else {
                        break;
                    }
                }
                Tok::Num(n)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = lx.chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '\'' {
                        s.push(d);
                        lx.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            other => return err(&pos, format!("unexpected character {other:?}")),
        };
        out.push((tok, pos));
    }
    Ok(out)
}

impl Lexer<'_> {
    fn bump(&mut self) {
        self.chars.next();
        self.col += 1;
    }
}

// Raw concrete trees: identifiers not yet classified. Every node keeps
// its position even where resolution currently has nothing to report.
#[derive(Debug, Clone)]
#[allow(dead_code)]
enum CTy {
    Nat(Pos),
    Pi(Pos, String, Box<CTy>, Box<CTy>),
    Sigma(Pos, String, Box<CTy>, Box<CTy>),
    Id(Pos, Box<CTy>, Box<CTm>, Box<CTm>),
    Later(Pos, Option<String>, String, Box<CTy>),
    Forall(Pos, String, Box<CTy>),
    Str(Pos, String),
}

#[derive(Debug, Clone)]
#[allow(dead_code)]
enum CTm {
    Var(Pos, String),
    Num(Pos, u64),
    Lam(Pos, String, Box<CTy>, Box<CTm>),
    App(Pos, Box<CTm>, Box<CTm>),
    Pair(Pos, Box<CTm>, Box<CTm>),
    Fst(Pos, Box<CTm>),
    Snd(Pos, Box<CTm>),
    Refl(Pos, Box<CTm>),
    Suc(Pos, Box<CTm>),
    NatRec(Pos, Box<CTm>, Box<CTm>, Box<CTm>),
    TickLam(Pos, String, String, Box<CTm>),
    Bracket(Pos, Box<CTm>, String),
    Adv(Pos, Box<CTm>, String, String),
    ClockLam(Pos, String, Box<CTm>),
    Dfix(Pos, String, Box<CTm>),
    Cirr(Pos, Box<CTm>),
    Tirr(Pos, Box<CTm>),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn pos(&self) -> Pos {
        self.toks
            .get(self.at)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| match self.toks.last() {
                Some((_, p)) => Pos { line: p.line, col: p.col + 1 },
                None => Pos { line: 1, col: 1 },
            })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(got) if got == *t => Ok(()),
            Some(got) => err(&pos, format!("expected {what}, found {got:?}")),
            None => err(&pos, format!("expected {what}, found end of input")),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Ident(s)) => {
                if KEYWORDS.contains(&s.as_str()) {
                    err(&pos, format!("reserved word {s:?} cannot be used as {what}"))
                } else {
                    Ok((s, pos))
                }
            }
            other => err(&pos, format!("expected {what}, found {other:?}")),
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn ty(&mut self) -> Result<CTy, ParseError> {
        let pos = self.pos();
        if self.eat_kw("Nat") {
            return Ok(CTy::Nat(pos));
        }
        if self.eat_kw("Pi") || self.is_kw("Sig") {
            let is_pi = !self.eat_kw("Sig");
            self.expect(&Tok::LParen, "'('")?;
            let (x, _) = self.ident("a variable binder")?;
            self.expect(&Tok::Colon, "':'")?;
            let a = self.ty()?;
            self.expect(&Tok::RParen, "')'")?;
            let b = self.ty()?;
            return Ok(if is_pi {
                CTy::Pi(pos, x, Box::new(a), Box::new(b))
            } else {
                CTy::Sigma(pos, x, Box::new(a), Box::new(b))
            });
        }
        if self.eat_kw("Id") {
            let a = self.ty_atom()?;
            let t = self.tm_atom()?;
            let u = self.tm_atom()?;
            return Ok(CTy::Id(pos, Box::new(a), Box::new(t), Box::new(u)));
        }
        if self.eat_kw("Later") {
            if self.peek() == Some(&Tok::LParen) {
                self.next();
                let (a, _) = self.ident("a tick binder")?;
                self.expect(&Tok::Colon, "':'")?;
                let (k, _) = self.ident("a clock")?;
                self.expect(&Tok::RParen, "')'")?;
                let body = self.ty()?;
                return Ok(CTy::Later(pos, Some(a), k, Box::new(body)));
            }
            let (k, _) = self.ident("a clock")?;
            let body = self.ty()?;
            return Ok(CTy::Later(pos, None, k, Box::new(body)));
        }
        if self.eat_kw("Forall") {
            let (k, _) = self.ident("a clock binder")?;
            let body = self.ty()?;
            return Ok(CTy::Forall(pos, k, Box::new(body)));
        }
        if self.is_kw("Str") {
            return self.ty_atom();
        }
        if self.peek() == Some(&Tok::LParen) {
            return self.ty_atom();
        }
        err(&pos, format!("expected a type, found {:?}", self.peek()))
    }

    fn ty_atom(&mut self) -> Result<CTy, ParseError> {
        let pos = self.pos();
        if self.eat_kw("Nat") {
            return Ok(CTy::Nat(pos));
        }
        if self.eat_kw("Str") {
            self.expect(&Tok::LBrack, "'['")?;
            let (k, _) = self.ident("a clock")?;
            self.expect(&Tok::RBrack, "']'")?;
            return Ok(CTy::Str(pos, k));
        }
        if self.peek() == Some(&Tok::LParen) {
            self.next();
            let t = self.ty()?;
            self.expect(&Tok::RParen, "')'")?;
            return Ok(t);
        }
        err(&pos, format!("expected an atomic type, found {:?}", self.peek()))
    }

    fn tm(&mut self) -> Result<CTm, ParseError> {
        let pos = self.pos();
        if self.eat_kw("lam") {
            self.expect(&Tok::LParen, "'('")?;
            let (x, _) = self.ident("a variable binder")?;
            self.expect(&Tok::Colon, "':'")?;
            // `lam (a : k) t` with a bare clock annotation abstracts a tick
            if let (Some(Tok::Ident(k)), Some(Tok::RParen)) = (self.peek(), self.peek2()) {
                if !KEYWORDS.contains(&k.as_str()) {
                    let k = k.clone();
                    self.next();
                    self.next();
                    let body = self.tm()?;
                    return Ok(CTm::TickLam(pos, x, k, Box::new(body)));
                }
            }
            let a = self.ty()?;
            self.expect(&Tok::RParen, "')'")?;
            let body = self.tm()?;
            return Ok(CTm::Lam(pos, x, Box::new(a), Box::new(body)));
        }
        if self.eat_kw("tlam") {
            self.expect(&Tok::LParen, "'('")?;
            let (a, _) = self.ident("a tick binder")?;
            self.expect(&Tok::Colon, "':'")?;
            let (k, _) = self.ident("a clock")?;
            self.expect(&Tok::RParen, "')'")?;
            let body = self.tm()?;
            return Ok(CTm::TickLam(pos, a, k, Box::new(body)));
        }
        if self.eat_kw("clam") {
            let (k, _) = self.ident("a clock binder")?;
            let body = self.tm()?;
            return Ok(CTm::ClockLam(pos, k, Box::new(body)));
        }
        // application chain
        let mut head = self.tm_postfix()?;
        loop {
            match self.peek() {
                Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                    let armpos = self.pos();
                    let arg = self.tm_postfix()?;
                    head = CTm::App(armpos, Box::new(head), Box::new(arg));
                }
                Some(Tok::Num(_)) | Some(Tok::LParen) => {
                    let armpos = self.pos();
                    let arg = self.tm_postfix()?;
                    head = CTm::App(armpos, Box::new(head), Box::new(arg));
                }
                Some(Tok::Ident(s))
                    if matches!(
                        s.as_str(),
                        "pair" | "fst" | "snd" | "refl" | "suc" | "natrec" | "adv" | "dfix"
                            | "cirr" | "tirr"
                    ) =>
                {
                    let armpos = self.pos();
                    let arg = self.tm_postfix()?;
                    head = CTm::App(armpos, Box::new(head), Box::new(arg));
                }
                _ => break,
            }
        }
        Ok(head)
    }

    fn tm_postfix(&mut self) -> Result<CTm, ParseError> {
        let mut t = self.tm_atom()?;
        while self.peek() == Some(&Tok::LBrack) {
            let pos = self.pos();
            self.next();
            let (x, _) = self.ident("a tick or clock")?;
            self.expect(&Tok::RBrack, "']'")?;
            t = CTm::Bracket(pos, Box::new(t), x);
        }
        Ok(t)
    }

    fn tm_atom(&mut self) -> Result<CTm, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.next();
                Ok(CTm::Num(pos, n))
            }
            Some(Tok::LParen) => {
                self.next();
                let t = self.tm()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(t)
            }
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                match s.as_str() {
                    "pair" => {
                        self.next();
                        let a = self.tm_postfix()?;
                        let b = self.tm_postfix()?;
                        Ok(CTm::Pair(pos, Box::new(a), Box::new(b)))
                    }
                    "fst" => {
                        self.next();
                        Ok(CTm::Fst(pos, Box::new(self.tm_postfix()?)))
                    }
                    "snd" => {
                        self.next();
                        Ok(CTm::Snd(pos, Box::new(self.tm_postfix()?)))
                    }
                    "refl" => {
                        self.next();
                        Ok(CTm::Refl(pos, Box::new(self.tm_postfix()?)))
                    }
                    "suc" => {
                        self.next();
                        Ok(CTm::Suc(pos, Box::new(self.tm_postfix()?)))
                    }
                    "cirr" => {
                        self.next();
                        Ok(CTm::Cirr(pos, Box::new(self.tm_postfix()?)))
                    }
                    "tirr" => {
                        self.next();
                        Ok(CTm::Tirr(pos, Box::new(self.tm_postfix()?)))
                    }
                    "natrec" => {
                        self.next();
                        let z = self.tm_postfix()?;
                        let st = self.tm_postfix()?;
                        let n = self.tm_postfix()?;
                        Ok(CTm::NatRec(pos, Box::new(z), Box::new(st), Box::new(n)))
                    }
                    "adv" => {
                        self.next();
                        let s = self.tm_postfix()?;
                        let (k, _) = self.ident("the witness clock")?;
                        let (kp, _) = self.ident("the collapse clock")?;
                        Ok(CTm::Adv(pos, Box::new(s), k, kp))
                    }
                    "dfix" => {
                        self.next();
                        let (k, _) = self.ident("a clock")?;
                        let body = self.tm_postfix()?;
                        Ok(CTm::Dfix(pos, k, Box::new(body)))
                    }
                    _ if KEYWORDS.contains(&s.as_str()) => {
                        err(&pos, format!("unexpected keyword {s:?} in term position"))
                    }
                    _ => {
                        self.next();
                        Ok(CTm::Var(pos, s))
                    }
                }
            }
            other => err(&pos, format!("expected a term, found {other:?}")),
        }
    }
}

// ---------------------------------------------------------------------------
// resolver

#[derive(Default, Clone)]
struct Scope {
    vars: Vec<String>,
    ticks: Vec<String>,
    clocks: Vec<String>,
}

#[derive(Clone, Copy, PartialEq)]
enum Cat {
    Var,
    Tick,
    Clock,
}

impl Scope {
    fn check_free(&self, name: &str, pos: &Pos) -> Result<(), ParseError> {
        let cats = [(&self.vars, "variable"), (&self.ticks, "tick"), (&self.clocks, "clock")];
        for (stack, what) in cats {
            if stack.iter().any(|s| s == name) {
                return err(pos, format!("name {name:?} already bound as a {what}"));
            }
        }
        Ok(())
    }

    /// Binders may shadow within their own category; a collision with a
    /// different category would make `t [x]` ambiguous and is rejected.
    fn check_binder(&self, name: &str, cat: Cat, pos: &Pos) -> Result<(), ParseError> {
        let cats =
            [(&self.vars, Cat::Var, "variable"), (&self.ticks, Cat::Tick, "tick"), (&self.clocks, Cat::Clock, "clock")];
        for (stack, c, what) in cats {
            if c != cat && stack.iter().any(|s| s == name) {
                return err(pos, format!("name {name:?} already bound as a {what}"));
            }
        }
        Ok(())
    }
}

fn resolve_ty(t: &CTy, sc: &mut Scope) -> Result<TypeExpr, ParseError> {
    match t {
        CTy::Nat(_) => Ok(TypeExpr::Nat),
        CTy::Str(pos, k) => {
            require_clock(sc, k, pos)?;
            Ok(TypeExpr::Str(k.clone()))
        }
        CTy::Pi(pos, x, a, b) | CTy::Sigma(pos, x, a, b) => {
            let a2 = resolve_ty(a, sc)?;
            if x != "_" {
                sc.check_binder(x, Cat::Var, pos)?;
            }
            sc.vars.push(x.clone());
            let b2 = resolve_ty(b, sc);
            sc.vars.pop();
            let b2 = b2?;
            Ok(match t {
                CTy::Pi(..) => TypeExpr::Pi(x.clone(), Box::new(a2), Box::new(b2)),
                _ => TypeExpr::Sigma(x.clone(), Box::new(a2), Box::new(b2)),
            })
        }
        CTy::Id(_, a, l, r) => Ok(TypeExpr::Id(
            Box::new(resolve_ty(a, sc)?),
            Box::new(resolve_tm(l, sc)?),
            Box::new(resolve_tm(r, sc)?),
        )),
        CTy::Later(pos, a, k, b) => {
            require_clock(sc, k, pos)?;
            let tick = a.clone().unwrap_or_else(|| "_".to_string());
            if tick != "_" {
                sc.check_binder(&tick, Cat::Tick, pos)?;
            }
            sc.ticks.push(tick.clone());
            let b2 = resolve_ty(b, sc);
            sc.ticks.pop();
            Ok(TypeExpr::Later(tick, k.clone(), Box::new(b2?)))
        }
        CTy::Forall(pos, k, b) => {
            sc.check_binder(k, Cat::Clock, pos)?;
            sc.clocks.push(k.clone());
            let b2 = resolve_ty(b, sc);
            sc.clocks.pop();
            Ok(TypeExpr::Forall(k.clone(), Box::new(b2?)))
        }
    }
}

fn require_clock(sc: &Scope, k: &str, pos: &Pos) -> Result<(), ParseError> {
    if sc.clocks.iter().any(|c| c == k) {
        Ok(())
    } else {
        err(pos, format!("unbound clock {k:?}"))
    }
}

fn resolve_tm(t: &CTm, sc: &mut Scope) -> Result<Term, ParseError> {
    match t {
        CTm::Var(pos, x) => {
            if sc.vars.iter().any(|v| v == x) {
                Ok(Term::Var(x.clone()))
            } else {
                err(pos, format!("unbound identifier {x:?}"))
            }
        }
        CTm::Num(_, n) => Ok(nat_lit(*n)),
        CTm::Lam(pos, x, a, b) => {
            let a2 = resolve_ty(a, sc)?;
            sc.check_binder(x, Cat::Var, pos)?;
            sc.vars.push(x.clone());
            let b2 = resolve_tm(b, sc);
            sc.vars.pop();
            Ok(Term::Lam(x.clone(), Box::new(a2), Box::new(b2?)))
        }
        CTm::App(_, f, u) => Ok(Term::App(Box::new(resolve_tm(f, sc)?), Box::new(resolve_tm(u, sc)?))),
        CTm::Pair(_, a, b) => {
            Ok(Term::Pair(Box::new(resolve_tm(a, sc)?), Box::new(resolve_tm(b, sc)?)))
        }
        CTm::Fst(_, a) => Ok(Term::Fst(Box::new(resolve_tm(a, sc)?))),
        CTm::Snd(_, a) => Ok(Term::Snd(Box::new(resolve_tm(a, sc)?))),
        CTm::Refl(_, a) => Ok(Term::Refl(Box::new(resolve_tm(a, sc)?))),
        CTm::Suc(_, a) => Ok(Term::Suc(Box::new(resolve_tm(a, sc)?))),
        CTm::Cirr(_, a) => Ok(Term::Cirr(Box::new(resolve_tm(a, sc)?))),
        CTm::Tirr(_, a) => Ok(Term::Tirr(Box::new(resolve_tm(a, sc)?))),
        CTm::NatRec(_, z, s, n) => Ok(Term::NatRec(
            Box::new(resolve_tm(z, sc)?),
            Box::new(resolve_tm(s, sc)?),
            Box::new(resolve_tm(n, sc)?),
        )),
        CTm::TickLam(pos, a, k, b) => {
            require_clock(sc, k, pos)?;
            sc.check_binder(a, Cat::Tick, pos)?;
            sc.ticks.push(a.clone());
            let b2 = resolve_tm(b, sc);
            sc.ticks.pop();
            Ok(Term::TickLam(a.clone(), k.clone(), Box::new(b2?)))
        }
        CTm::Bracket(pos, t, x) => {
            let t2 = resolve_tm(t, sc)?;
            if sc.ticks.iter().any(|a| a == x) {
                Ok(Term::TickApp(Box::new(t2), x.clone()))
            } else if sc.clocks.iter().any(|k| k == x) {
                Ok(Term::ClockApp(Box::new(t2), x.clone()))
            } else {
                err(pos, format!("unbound tick or clock {x:?}"))
            }
        }
        CTm::Adv(pos, s, k, kp) => {
            require_clock(sc, kp, pos)?;
            sc.check_binder(k, Cat::Clock, pos)?;
            sc.clocks.push(k.clone());
            let s2 = resolve_tm(s, sc);
            sc.clocks.pop();
            Ok(Term::DiamondApp(Box::new(s2?), k.clone(), kp.clone()))
        }
        CTm::ClockLam(pos, k, b) => {
            sc.check_binder(k, Cat::Clock, pos)?;
            sc.clocks.push(k.clone());
            let b2 = resolve_tm(b, sc);
            sc.clocks.pop();
            Ok(Term::ClockLam(k.clone(), Box::new(b2?)))
        }
        CTm::Dfix(pos, k, b) => {
            require_clock(sc, k, pos)?;
            Ok(Term::Dfix(k.clone(), Box::new(resolve_tm(b, sc)?)))
        }
    }
}

/// A parsed top-level file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub judgement: Judgement,
}

/// Parses `[clocks ..;] [ctx ..;] judgement`. A file that declares no
/// clocks runs in the ambient single-clock context `k0`.
pub fn parse_file(src: &str) -> Result<SourceFile, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    let mut clocks = Vec::new();
    if p.eat_kw("clocks") {
        while let Some(Tok::Ident(s)) = p.peek() {
            if KEYWORDS.contains(&s.as_str()) {
                break;
            }
            let (k, pos) = p.ident("a clock")?;
            if clocks.contains(&k) {
                return err(&pos, format!("duplicate clock {k:?}"));
            }
            clocks.push(k);
        }
        p.expect(&Tok::Semi, "';' after clocks")?;
    }
    if clocks.is_empty() {
        clocks.push("k0".to_string());
    }

    let mut sc = Scope { clocks: clocks.clone(), ..Default::default() };
    let mut entries = Vec::new();
    if p.eat_kw("ctx") {
        if p.peek() != Some(&Tok::Semi) {
            loop {
                let (name, pos) = p.ident("a context entry name")?;
                p.expect(&Tok::Colon, "':'")?;
                // a bare clock identifier right before ',' or ';' is a tick entry
                let is_tick = matches!(
                    (p.peek(), p.peek2()),
                    (Some(Tok::Ident(k)), Some(Tok::Comma) | Some(Tok::Semi) | None)
                        if clocks.contains(k)
                );
                sc.check_free(&name, &pos)?;
                if is_tick {
                    let (k, _) = p.ident("a clock")?;
                    entries.push(Entry::Tick(name.clone(), k));
                    sc.ticks.push(name);
                } else {
                    let a = p.ty()?;
                    let a2 = resolve_ty(&a, &mut sc)?;
                    entries.push(Entry::Term(name.clone(), a2));
                    sc.vars.push(name);
                }
                if p.peek() == Some(&Tok::Comma) {
                    p.next();
                } else {
                    break;
                }
            }
        }
        p.expect(&Tok::Semi, "';' after ctx")?;
    }
    let ctx = Context { clocks, entries };

    let judgement = if p.eat_kw("type") {
        let a = p.ty()?;
        let a2 = resolve_ty(&a, &mut sc)?;
        Judgement::TypeWf(ctx, a2)
    } else {
        let t = p.tm()?;
        let t2 = resolve_tm(&t, &mut sc)?;
        match p.peek() {
            Some(Tok::Colon) => {
                p.next();
                let a = p.ty()?;
                let a2 = resolve_ty(&a, &mut sc)?;
                Judgement::Typing(ctx, t2, a2)
            }
            Some(Tok::Equals) => {
                p.next();
                let u = p.tm()?;
                let u2 = resolve_tm(&u, &mut sc)?;
                p.expect(&Tok::Colon, "':' before the equality type")?;
                let a = p.ty()?;
                let a2 = resolve_ty(&a, &mut sc)?;
                Judgement::Equality(ctx, t2, u2, a2)
            }
            other => {
                let pos = p.pos();
                return err(&pos, format!("expected ':' or '=' after the subject term, found {other:?}"));
            }
        }
    };
    let pos = p.pos();
    if p.peek().is_some() {
        return err(&pos, format!("trailing input {:?}", p.peek()));
    }
    Ok(SourceFile { judgement })
}

/// Parses a term against a given context (used by tests and fixtures).
pub fn parse_term_in(ctx: &Context, src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    let mut sc = Scope::default();
    sc.clocks = ctx.clocks.clone();
    for e in &ctx.entries {
        match e {
            Entry::Term(x, _) => sc.vars.push(x.clone()),
            Entry::Tick(a, _) => sc.ticks.push(a.clone()),
        }
    }
    let t = p.tm()?;
    let t2 = resolve_tm(&t, &mut sc)?;
    if p.peek().is_some() {
        return err(&p.pos(), format!("trailing input {:?}", p.peek()));
    }
    Ok(t2)
}

/// Parses a type against a given context.
pub fn parse_type_in(ctx: &Context, src: &str) -> Result<TypeExpr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    let mut sc = Scope::default();
    sc.clocks = ctx.clocks.clone();
    for e in &ctx.entries {
        match e {
            Entry::Term(x, _) => sc.vars.push(x.clone()),
            Entry::Tick(a, _) => sc.ticks.push(a.clone()),
        }
    }
    let t = p.ty()?;
    let t2 = resolve_ty(&t, &mut sc)?;
    if p.peek().is_some() {
        return err(&p.pos(), format!("trailing input {:?}", p.peek()));
    }
    Ok(t2)
}
