//! Statement files: `;`-terminated statements with `#` comments.
//!
//! ```text
//! ring R vars x,y,z [param t] over QQ|FF p order grevlex|lex|eliminate k;
//! ideal I = x^2, y^2;              ideal J = intersect(I, point(p));
//! point p = (0, 0, 1);
//! let N = 6;
//! structure Y on I case 3e [support p] [data z = J];
//! module K = bowtie(x, y, z, w) [support p];
//! family F case-e on I data f = x^2, g = y^2, path = (0, t, t, 0);
//! check equal(limit(F), Y) = true derived "engine";
//! ```
//!
//! Checks carry a source tag: `stated "<claim>"`, `derived "<how>"` or
//! `trivial`.

use detachlab_core::expr::parse_poly_at;
use detachlab_core::families::{param_ring, FamilyKind};
use detachlab_core::field::CoefficientField;
use detachlab_core::structures::CaseLabel;
use detachlab_core::{Error, MonomialOrder, Polynomial, Ring, RingRef};

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub field: Option<CoefficientField>,
    pub order: Option<MonomialOrder>,
    pub param: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Call { name: String, args: Vec<Expr>, line: usize, col: usize },
    Name(String),
    Int(i64),
    Str(String),
    Bool(bool),
    /// Anything else (a polynomial, tuple or matrix), kept as text.
    Raw { text: String, line: usize, col: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tag {
    Stated(String),
    Derived(String),
    Trivial,
}

impl Tag {
    pub fn kind(&self) -> &'static str {
        match self {
            Tag::Stated(_) => "stated",
            Tag::Derived(_) => "derived",
            Tag::Trivial => "trivial",
        }
    }

    pub fn note(&self) -> &str {
        match self {
            Tag::Stated(s) | Tag::Derived(s) => s,
            Tag::Trivial => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub text: String,
    pub lhs: Expr,
    pub cmp: Cmp,
    pub rhs: Expr,
    pub tag: Tag,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub enum Decl {
    Ideal(Vec<Polynomial>),
    IdealExpr(Expr),
    Point(Vec<Polynomial>),
    Int(i64),
    Structure { on: String, case: CaseLabel, support: Option<Expr>, data: Vec<(String, Expr)> },
    Module { template: Expr, support: Option<Expr> },
    Family { kind: FamilyKind, on: Option<String>, data: Vec<(String, Expr)> },
}

#[derive(Clone, Debug)]
pub struct Statement {
    pub name: String,
    pub decl: Decl,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct Document {
    pub example: Option<String>,
    pub claim: Option<String>,
    pub notes: Vec<String>,
    pub ring: Option<RingRef>,
    pub statements: Vec<Statement>,
    pub checks: Vec<Check>,
}

impl Document {
    pub fn geometric_ring(&self) -> Option<RingRef> {
        let r = self.ring.as_ref()?;
        Some(match r.param_index() {
            Some(t) => r.drop_vars(1 << t, MonomialOrder::Grevlex),
            None => r.clone(),
        })
    }

    pub fn find(&self, name: &str) -> Option<&Statement> {
        self.statements.iter().rev().find(|s| s.name == name)
    }

    /// Name of the last statement accepted by `pred`.
    pub fn last_where(&self, pred: impl Fn(&Decl) -> bool) -> Option<&str> {
        self.statements.iter().rev().find(|s| pred(&s.decl)).map(|s| s.name.as_str())
    }
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

struct Source {
    chars: Vec<char>,
    /// (line, col) of each char.
    pos: Vec<(usize, usize)>,
}

impl Source {
    fn new(text: &str) -> Source {
        let mut chars = Vec::new();
        let mut pos = Vec::new();
        let (mut line, mut col) = (1, 1);
        let mut in_comment = false;
        let mut in_str = false;
        for c in text.chars() {
            let mut keep = c;
            if in_comment {
                if c == '\n' {
                    in_comment = false;
                } else {
                    keep = ' ';
                }
            } else if c == '"' {
                in_str = !in_str;
            } else if c == '#' && !in_str {
                in_comment = true;
                keep = ' ';
            }
            chars.push(keep);
            pos.push((line, col));
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        pos.push((line, col));
        Source { chars, pos }
    }

    fn at(&self, i: usize) -> (usize, usize) {
        self.pos[i.min(self.pos.len() - 1)]
    }

    /// Statement ranges split at top-level `;`.
    fn statements(&self) -> Result<Vec<(usize, usize)>, Error> {
        let mut out = Vec::new();
        let mut depth: i32 = 0;
        let mut in_str = false;
        let mut start = 0;
        for (i, &c) in self.chars.iter().enumerate() {
            match c {
                '"' => in_str = !in_str,
                '(' | '[' if !in_str => depth += 1,
                ')' | ']' if !in_str => {
                    depth -= 1;
                    if depth < 0 {
                        let (l, c) = self.at(i);
                        return Err(perr(l, c, "unbalanced closing bracket"));
                    }
                }
                ';' if !in_str && depth == 0 => {
                    out.push((start, i));
                    start = i + 1;
                }
                _ => {}
            }
        }
        if in_str {
            let (l, c) = self.at(start);
            return Err(perr(l, c, "unterminated string"));
        }
        if self.chars[start..].iter().any(|c| !c.is_whitespace()) {
            let first = start + self.chars[start..].iter().position(|c| !c.is_whitespace()).unwrap();
            let (l, c) = self.at(first);
            return Err(perr(l, c, if depth > 0 { "unbalanced opening bracket" } else { "missing `;`" }));
        }
        Ok(out)
    }
}

struct Cursor<'a> {
    src: &'a Source,
    i: usize,
    end: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '+' || c == '.'
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.i < self.end && self.src.chars[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn done(&mut self) -> bool {
        self.skip_ws();
        self.i >= self.end
    }

    fn here(&mut self) -> (usize, usize) {
        self.skip_ws();
        self.src.at(self.i)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.src.at(self.i);
        perr(l, c, msg)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        (self.i < self.end).then(|| self.src.chars[self.i])
    }

    /// Identifier-like word; `-`, `+` and `.` are allowed inside names.
    fn word(&mut self) -> Result<String, Error> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.end && is_ident_char(self.src.chars[self.i]) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a name"));
        }
        Ok(self.src.chars[start..self.i].iter().collect())
    }

    fn ident(&mut self) -> Result<String, Error> {
        self.skip_ws();
        let (l, c) = self.here();
        let start = self.i;
        while self.i < self.end && (self.src.chars[self.i].is_alphanumeric() || self.src.chars[self.i] == '_') {
            self.i += 1;
        }
        let w: String = self.src.chars[start..self.i].iter().collect();
        match w.chars().next() {
            Some(ch) if ch.is_alphabetic() => Ok(w),
            _ => Err(perr(l, c, "expected an identifier")),
        }
    }

    fn try_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let save = self.i;
        match self.word() {
            Ok(w) if w == kw => true,
            _ => {
                self.i = save;
                false
            }
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), Error> {
        if self.try_keyword(kw) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{kw}`")))
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), Error> {
        if self.peek() == Some(ch) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{ch}`")))
        }
    }

    fn string(&mut self) -> Result<String, Error> {
        self.expect('"')?;
        let start = self.i;
        while self.i < self.end && self.src.chars[self.i] != '"' {
            self.i += 1;
        }
        let s = self.src.chars[start..self.i].iter().collect();
        self.expect('"')?;
        Ok(s)
    }

    fn integer(&mut self) -> Result<i64, Error> {
        let (l, c) = self.here();
        let w = self.word()?;
        w.parse().map_err(|_| perr(l, c, format!("expected an integer, found `{w}`")))
    }

    /// Text up to the next top-level char in `stops` (or the end).
    fn chunk(&mut self, stops: &[char]) -> (usize, usize) {
        self.skip_ws();
        let start = self.i;
        let mut depth = 0;
        let mut in_str = false;
        while self.i < self.end {
            let c = self.src.chars[self.i];
            if c == '"' {
                in_str = !in_str;
            } else if !in_str {
                if depth == 0 && stops.contains(&c) {
                    break;
                }
                if c == '(' || c == '[' {
                    depth += 1;
                } else if c == ')' || c == ']' {
                    depth -= 1;
                }
            }
            self.i += 1;
        }
        let mut end = self.i;
        while end > start && self.src.chars[end - 1].is_whitespace() {
            end -= 1;
        }
        (start, end)
    }

    fn text(&self, (a, b): (usize, usize)) -> String {
        self.src.chars[a..b].iter().collect()
    }

    fn sub(&self, (a, b): (usize, usize)) -> Cursor<'a> {
        Cursor { src: self.src, i: a, end: b }
    }

    /// Comma-separated items up to the end of this cursor.
    fn list(&mut self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if self.done() {
            return out;
        }
        loop {
            out.push(self.chunk(&[',']));
            if self.peek() == Some(',') {
                self.i += 1;
            } else {
                break;
            }
        }
        out
    }
}

fn parse_expr(cur: &Cursor<'_>, span: (usize, usize)) -> Result<Expr, Error> {
    let text = cur.text(span);
    let (line, col) = cur.src.at(span.0);
    if text.is_empty() {
        return Err(perr(line, col, "empty expression"));
    }
    if let Some(s) = text.strip_prefix('"') {
        return s.strip_suffix('"').map(|s| Expr::Str(s.to_string())).ok_or_else(|| perr(line, col, "unterminated string"));
    }
    if text == "true" || text == "false" {
        return Ok(Expr::Bool(text == "true"));
    }
    if let Ok(n) = text.parse::<i64>() {
        return Ok(Expr::Int(n));
    }
    let head: String = text.chars().take_while(|&c| c.is_alphanumeric() || c == '_').collect();
    if !head.is_empty() && head.chars().next().unwrap().is_alphabetic() {
        if head.len() == text.len() {
            return Ok(Expr::Name(head));
        }
        let mut c = cur.sub(span);
        c.i += head.chars().count();
        if c.peek() == Some('(') && text.ends_with(')') {
            let open = c.i;
            let inner_end = span.1 - 1;
            // the opening bracket must close at the very end
            let mut depth = 0;
            let mut closes_at_end = true;
            for k in open..span.1 {
                match cur.src.chars[k] {
                    '(' | '[' => depth += 1,
                    ')' | ']' => {
                        depth -= 1;
                        if depth == 0 && k != span.1 - 1 {
                            closes_at_end = false;
                        }
                    }
                    _ => {}
                }
            }
            if closes_at_end {
                let mut inner = cur.sub((open + 1, inner_end));
                let args = inner.list().into_iter().map(|s| parse_expr(cur, s)).collect::<Result<Vec<_>, _>>()?;
                return Ok(Expr::Call { name: head, args, line, col });
            }
        }
    }
    Ok(Expr::Raw { text, line, col })
}

fn parse_field(cur: &mut Cursor<'_>) -> Result<CoefficientField, Error> {
    let (l, c) = cur.here();
    match cur.word()?.as_str() {
        "QQ" => Ok(CoefficientField::Rationals),
        "FF" => {
            let (l, c) = cur.here();
            let p = cur.integer()?;
            CoefficientField::prime(p as u64).map_err(|e| perr(l, c, e.to_string()))
        }
        w => Err(perr(l, c, format!("unknown field `{w}`"))),
    }
}

/// `QQ`, `FF:p` or `FF p`.
pub fn parse_field_spec(s: &str) -> Result<CoefficientField, Error> {
    let s = s.trim();
    if s == "QQ" {
        return Ok(CoefficientField::Rationals);
    }
    let p = s.strip_prefix("FF").map(|r| r.trim_start_matches([':', ' ']));
    match p.and_then(|p| p.parse::<u64>().ok()) {
        Some(p) => CoefficientField::prime(p),
        None => Err(perr(1, 1, format!("unknown field `{s}`"))),
    }
}

/// `grevlex`, `lex` or `eliminate k`.
pub fn parse_order_spec(s: &str) -> Result<MonomialOrder, Error> {
    let mut it = s.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some("grevlex"), None, _) => Ok(MonomialOrder::Grevlex),
        (Some("lex"), None, _) => Ok(MonomialOrder::Lex),
        (Some("eliminate"), Some(k), None) => match k.parse::<usize>() {
            Ok(k) if (1..32).contains(&k) => Ok(MonomialOrder::eliminate(k)),
            _ => Err(perr(1, 1, format!("bad block size `{k}`"))),
        },
        _ => Err(perr(1, 1, format!("unknown order `{s}`"))),
    }
}

fn parse_order(cur: &mut Cursor<'_>) -> Result<MonomialOrder, Error> {
    let (l, c) = cur.here();
    let w = cur.word()?;
    let spec = if w == "eliminate" { format!("eliminate {}", cur.word()?) } else { w };
    parse_order_spec(&spec).map_err(|e| match e {
        Error::Parse { msg, .. } => perr(l, c, msg),
        e => e,
    })
}

fn parse_ring(cur: &mut Cursor<'_>, ov: &Overrides) -> Result<RingRef, Error> {
    cur.word()?;
    cur.keyword("vars")?;
    let (vl, vc) = cur.here();
    let mut vars = vec![cur.ident()?];
    while cur.peek() == Some(',') {
        cur.i += 1;
        vars.push(cur.ident()?);
    }
    let mut param = None;
    if cur.try_keyword("param") {
        param = Some(cur.ident()?);
    }
    cur.keyword("over")?;
    let field = parse_field(cur)?;
    let mut order = MonomialOrder::Grevlex;
    if cur.try_keyword("order") {
        order = parse_order(cur)?;
    }
    if !cur.done() {
        return Err(cur.err("unexpected text after ring declaration"));
    }
    let field = ov.field.clone().unwrap_or(field);
    let order = ov.order.unwrap_or(order);
    if let Some(p) = &ov.param {
        if param.as_deref() != Some(p) {
            if let Some(i) = vars.iter().position(|v| v == p) {
                vars.remove(i);
                param = Some(p.clone());
            }
        }
    }
    let geom = Ring::from_names(vars, false, field, order).map_err(|e| perr(vl, vc, e.to_string()))?;
    match param {
        Some(t) => param_ring(&geom, &t).map_err(|e| perr(vl, vc, e.to_string())),
        None => Ok(geom),
    }
}

fn parse_polys(cur: &Cursor<'_>, ring: &RingRef, spans: &[(usize, usize)]) -> Result<Vec<Polynomial>, Error> {
    spans
        .iter()
        .map(|&s| {
            let (l, c) = cur.src.at(s.0);
            parse_poly_at(ring, &cur.text(s), l, c)
        })
        .collect()
}

/// `key = value, key = value` pairs.
fn parse_data(cur: &mut Cursor<'_>) -> Result<Vec<(String, Expr)>, Error> {
    let mut out = Vec::new();
    for item in cur.list() {
        let mut c = cur.sub(item);
        let key = c.ident()?;
        c.expect('=')?;
        let rest = c.chunk(&[]);
        out.push((key, parse_expr(cur, rest)?));
    }
    Ok(out)
}

fn parse_check(cur: &mut Cursor<'_>, line: usize) -> Result<Check, Error> {
    let text_start = {
        cur.skip_ws();
        cur.i
    };
    let lhs_span = cur.chunk(&['=', '<', '>', '!']);
    let lhs = parse_expr(cur, lhs_span)?;
    let cmp = match cur.peek() {
        Some('=') => Cmp::Eq,
        Some('!') => Cmp::Ne,
        Some('<') => Cmp::Lt,
        Some('>') => Cmp::Gt,
        _ => return Err(cur.err("expected a comparison")),
    };
    cur.i += 1;
    let cmp = match (cmp, cur.src.chars.get(cur.i)) {
        (Cmp::Ne, Some('=')) => {
            cur.i += 1;
            Cmp::Ne
        }
        (Cmp::Ne, _) => return Err(cur.err("expected `!=`")),
        (Cmp::Lt, Some('=')) => {
            cur.i += 1;
            Cmp::Le
        }
        (Cmp::Gt, Some('=')) => {
            cur.i += 1;
            Cmp::Ge
        }
        (c, _) => c,
    };
    // the expected value ends where the source tag begins
    cur.skip_ws();
    let rhs_start = cur.i;
    let mut rhs_end = cur.end;
    let mut tag = None;
    let mut probe = cur.sub((rhs_start, cur.end));
    loop {
        let (a, _) = probe.chunk(&[' ', '\t', '\n', '\r']);
        if a >= probe.end {
            break;
        }
        let word = probe.text((a, probe.i));
        if word == "stated" || word == "derived" || word == "trivial" {
            rhs_end = a;
            let mut t = cur.sub((probe.i, cur.end));
            tag = Some(match word.as_str() {
                "trivial" => Tag::Trivial,
                w => {
                    let s = t.string()?;
                    if w == "stated" {
                        Tag::Stated(s)
                    } else {
                        Tag::Derived(s)
                    }
                }
            });
            if !t.done() {
                return Err(t.err("unexpected text after source tag"));
            }
            break;
        }
    }
    let Some(tag) = tag else {
        return Err(cur.err("check needs a source tag: stated \"..\", derived \"..\" or trivial"));
    };
    let mut rhs_span = (rhs_start, rhs_end);
    while rhs_span.1 > rhs_span.0 && cur.src.chars[rhs_span.1 - 1].is_whitespace() {
        rhs_span.1 -= 1;
    }
    let rhs = parse_expr(cur, rhs_span)?;
    let text = cur.text((text_start, rhs_span.1));
    Ok(Check { text: text.split_whitespace().collect::<Vec<_>>().join(" "), lhs, cmp, rhs, tag, line })
}

/// Parse a statement file.
pub fn parse_document(text: &str, ov: &Overrides) -> Result<Document, Error> {
    let src = Source::new(text);
    let mut doc = Document { example: None, claim: None, notes: Vec::new(), ring: None, statements: Vec::new(), checks: Vec::new() };
    for (a, b) in src.statements()? {
        let mut cur = Cursor { src: &src, i: a, end: b };
        if cur.done() {
            continue;
        }
        let (line, col) = cur.here();
        let save = cur.i;
        let head = cur.word()?;
        let need_ring = |doc: &Document| doc.ring.clone().ok_or_else(|| perr(line, col, "no ring declared yet"));
        match head.as_str() {
            "example" => {
                doc.example = Some(cur.word()?);
            }
            "claim" => doc.claim = Some(cur.string()?),
            "note" => doc.notes.push(cur.string()?),
            "ring" => {
                if doc.ring.is_some() {
                    return Err(perr(line, col, "only one ring per file"));
                }
                cur.i = save;
                cur.word()?;
                doc.ring = Some(parse_ring(&mut cur, ov)?);
                continue;
            }
            "check" => {
                need_ring(&doc)?;
                let c = parse_check(&mut cur, line)?;
                doc.checks.push(c);
                continue;
            }
            "ideal" | "point" | "let" | "structure" | "module" | "family" => {
                let ring = need_ring(&doc)?;
                let name = cur.ident()?;
                let decl = match head.as_str() {
                    "ideal" => {
                        cur.expect('=')?;
                        let rest = cur.chunk(&[]);
                        match parse_expr(&cur, rest)? {
                            e @ Expr::Call { .. } => Decl::IdealExpr(e),
                            Expr::Name(n) if ring.index_of(&n).is_none() => Decl::IdealExpr(Expr::Name(n)),
                            _ => {
                                let items = cur.sub(rest).list();
                                Decl::Ideal(parse_polys(&cur, &ring, &items)?)
                            }
                        }
                    }
                    "point" => {
                        cur.expect('=')?;
                        cur.expect('(')?;
                        let inner = cur.chunk(&[')']);
                        cur.expect(')')?;
                        let items = cur.sub(inner).list();
                        let coords = parse_polys(&cur, &ring, &items)?;
                        let n = doc.geometric_ring().unwrap().nvars();
                        if coords.len() != n {
                            return Err(perr(line, col, format!("point needs {n} coordinates, found {}", coords.len())));
                        }
                        Decl::Point(coords)
                    }
                    "let" => {
                        cur.expect('=')?;
                        Decl::Int(cur.integer()?)
                    }
                    "structure" => {
                        cur.keyword("on")?;
                        let on = cur.ident()?;
                        cur.keyword("case")?;
                        let (l, c) = cur.here();
                        let case: CaseLabel = cur.word()?.parse().map_err(|e: Error| perr(l, c, e.to_string()))?;
                        let support = if cur.try_keyword("support") {
                            let span = cur.clone_chunk();
                            Some(parse_expr(&cur, span)?)
                        } else {
                            None
                        };
                        let data = if cur.try_keyword("data") { parse_data(&mut cur)? } else { Vec::new() };
                        Decl::Structure { on, case, support, data }
                    }
                    "module" => {
                        cur.expect('=')?;
                        let t = cur.chunk(&[]);
                        // a trailing `support <point>` clause
                        let text = cur.text(t);
                        let (tmpl, support) = match text.rfind(" support ") {
                            Some(k) => {
                                let split = t.0 + text[..k].chars().count();
                                let sup_start = split + " support ".len();
                                (parse_expr(&cur, (t.0, split))?, Some(parse_expr(&cur, (sup_start, t.1))?))
                            }
                            None => (parse_expr(&cur, t)?, None),
                        };
                        Decl::Module { template: tmpl, support }
                    }
                    _ => {
                        let (l, c) = cur.here();
                        let kind: FamilyKind = cur.word()?.parse().map_err(|e: Error| perr(l, c, e.to_string()))?;
                        let on = if cur.try_keyword("on") { Some(cur.ident()?) } else { None };
                        let data = if cur.try_keyword("data") { parse_data(&mut cur)? } else { Vec::new() };
                        Decl::Family { kind, on, data }
                    }
                };
                if !cur.done() {
                    return Err(cur.err("unexpected text at end of statement"));
                }
                doc.statements.push(Statement { name, decl, line, col });
                continue;
            }
            _ => return Err(perr(line, col, format!("unknown statement `{head}`"))),
        }
        if !cur.done() {
            return Err(cur.err("unexpected text at end of statement"));
        }
    }
    Ok(doc)
}

impl Cursor<'_> {
    /// The next whitespace-free chunk (respecting brackets).
    fn clone_chunk(&mut self) -> (usize, usize) {
        self.chunk(&[' ', '\t', '\n', '\r'])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Document, Error> {
        parse_document(s, &Overrides::default())
    }

    #[test]
    fn ring_and_ideal() {
        let d = parse("ring R vars x,y over QQ order grevlex; ideal I = x^2, y^2;").unwrap();
        let Decl::Ideal(g) = &d.find("I").unwrap().decl else { panic!() };
        assert_eq!(g.len(), 2);
        assert_eq!(d.ring.as_ref().unwrap().nvars(), 2);
    }

    #[test]
    fn twisted_cubic_generators_are_quadrics() {
        let d = parse("ring R vars x,y,z,w over QQ order grevlex;\n# the twisted cubic\nideal I = x*z-y^2, x*w-y*z, y*w-z^2;").unwrap();
        let Decl::Ideal(g) = &d.find("I").unwrap().decl else { panic!() };
        assert!(g.len() == 3 && g.iter().all(|p| p.degree() == Some(2)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("ring R vars x,y over QQ;\nideal I = x^2, q;").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 16, .. }), "{e:?}");
        let e = parse("ring R vars x,y over FF 32004;").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 25, .. }), "{e:?}");
        let e = parse("ring R vars x over QQ;\nideal I = x").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = parse("ideal I = x;").unwrap_err();
        assert!(e.to_string().contains("no ring"));
        let e = parse("ring R vars x over QQ;\ncheck length(I) = 1;").unwrap_err();
        assert!(e.to_string().contains("source tag"));
    }

    #[test]
    fn statements_of_every_kind() {
        let d = parse(
            "example demo; claim \"a; b\";\nring R vars x,y,z param t over QQ;\nlet N = 6;\nideal X = x^2, y^2;\npoint p = (0, t, 0);\nideal J = intersect(X, point(p));\nstructure Y on X case 3e data z = X;\nmodule K = bowtie(x, y, z, x+y) support p;\nfamily F case-e on X data f = x^2, g = y^2, path = (0, t, t, 0);\ncheck equal(limit(F), Y) = true derived \"engine\";\ncheck arith((N-2)+(4*N-16)+9+(8-5)) >= arith(4*N) stated \"5N-6 >= 4N\";",
        )
        .unwrap();
        assert_eq!(d.example.as_deref(), Some("demo"));
        assert_eq!(d.claim.as_deref(), Some("a; b"));
        assert!(d.ring.as_ref().unwrap().has_param());
        assert_eq!(d.statements.len(), 7);
        assert!(matches!(d.find("J").unwrap().decl, Decl::IdealExpr(Expr::Call { .. })));
        let Decl::Module { support, .. } = &d.find("K").unwrap().decl else { panic!() };
        assert_eq!(support, &Some(Expr::Name("p".into())));
        let Decl::Family { kind, data, .. } = &d.find("F").unwrap().decl else { panic!() };
        assert_eq!(*kind, FamilyKind::CaseE);
        assert_eq!(data.len(), 3);
        assert_eq!(d.checks[1].cmp, Cmp::Ge);
        assert_eq!(d.checks[1].tag, Tag::Stated("5N-6 >= 4N".into()));
        assert_eq!(d.checks[0].text, "equal(limit(F), Y) = true");
    }

    #[test]
    fn overrides_replace_field_and_mark_the_parameter() {
        let ov = Overrides { field: Some(CoefficientField::prime(32003).unwrap()), order: None, param: Some("t".into()) };
        let d = parse_document("ring R vars x,y,t over QQ;", &ov).unwrap();
        let r = d.ring.unwrap();
        assert_eq!(r.field().characteristic(), 32003);
        assert_eq!(r.param_index(), Some(2));
    }

    #[test]
    fn field_and_order_specs() {
        assert_eq!(parse_field_spec("FF:32003").unwrap().characteristic(), 32003);
        assert!(parse_field_spec("FF:32004").is_err());
        assert_eq!(parse_order_spec("eliminate 2").unwrap(), MonomialOrder::eliminate(2));
        assert!(parse_order_spec("deglex").is_err());
    }
}
