//! The line-oriented instance file format.
//!
//! ```text
//! # mF over k[x,y]
//! field Q
//! ring base x y fiber u v
//! module free 1 shifts (0,0)
//! submodule H fiberdeg 1 gens x*u, x*v, y*u, y*v
//! set r 3
//! ```

use std::fmt;

use mixmult::error::Error as CoreError;
use mixmult::graded_module::{FreeModuleSpec, ModulePresentation};
use mixmult::ring::{Bidegree, Polynomial, Ring, RingSpec, SubmoduleSpec};
use mixmult::scalar::{is_prime, Field};
use num_bigint::BigInt;

/// A diagnosed problem in an instance file. `line` and `column` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The core error kind when the text parsed but the object was invalid.
    pub kind: &'static str,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
        kind: "parse",
    }
}

fn core_err(line: usize, column: usize, e: CoreError) -> ParseError {
    ParseError {
        line,
        column,
        message: e.to_string(),
        kind: e.kind(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FileSettings {
    pub r: Option<u32>,
    pub grid: Option<usize>,
    pub cutoff: Option<u32>,
    pub window: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub field: Field,
    pub ring: Ring,
    pub module: ModulePresentation,
    /// Named submodules in declaration order.
    pub submodules: Vec<(String, SubmoduleSpec)>,
    pub settings: FileSettings,
}

impl InstanceFile {
    pub fn submodule(&self, name: &str) -> Option<&SubmoduleSpec> {
        self.submodules
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, h)| h)
    }

    /// The same instance with every coefficient reduced into `field`.
    pub fn with_field(&self, field: Field) -> Result<InstanceFile, CoreError> {
        let ring = self.ring.with_field(field);
        let module = self.module.change_ring(&ring)?;
        let submodules = self
            .submodules
            .iter()
            .map(|(n, h)| {
                let gens = h
                    .gens()
                    .iter()
                    .map(|g| g.change_ring(&ring))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((
                    n.clone(),
                    SubmoduleSpec::new(&ring, h.fiber_degree(), gens)?,
                ))
            })
            .collect::<Result<Vec<_>, CoreError>>()?;
        Ok(InstanceFile {
            field,
            ring,
            module,
            submodules,
            settings: self.settings.clone(),
        })
    }
}

/// Whitespace-separated words with their 0-based byte columns.
fn words(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((b, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b, &s[b..]));
    }
    out
}

fn parse_uint<T: std::str::FromStr>(
    line: usize,
    col: usize,
    w: &str,
    what: &str,
) -> Result<T, ParseError> {
    w.parse()
        .map_err(|_| err(line, col + 1, format!("expected {what}, found `{w}`")))
}

struct Module {
    line: usize,
    shifts: Vec<Bidegree>,
    rels: Vec<(usize, Vec<Polynomial>)>,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut field: Option<Field> = None;
    let mut ring: Option<Ring> = None;
    let mut module: Option<Module> = None;
    let mut submodules: Vec<(String, SubmoduleSpec)> = Vec::new();
    let mut settings = FileSettings::default();

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let ws = words(line);
        let Some(&(kcol, key)) = ws.first() else {
            continue;
        };
        match key {
            "field" => {
                if field.is_some() {
                    return Err(err(ln, kcol + 1, "duplicate field declaration"));
                }
                if ring.is_some() {
                    return Err(err(ln, kcol + 1, "field must be declared before ring"));
                }
                field = Some(match ws.get(1..) {
                    Some([(_, "Q")]) => Field::Rational,
                    Some([(_, "Fp"), (c, p)]) => {
                        let p: u64 = parse_uint(ln, *c, p, "a prime")?;
                        if !is_prime(p) {
                            return Err(err(ln, c + 1, format!("{p} is not prime")));
                        }
                        Field::Prime(p)
                    }
                    _ => {
                        return Err(err(
                            ln,
                            kcol + 1,
                            "expected `field Q` or `field Fp <prime>`",
                        ))
                    }
                });
            }
            "ring" => {
                if ring.is_some() {
                    return Err(err(ln, kcol + 1, "duplicate ring declaration"));
                }
                ring = Some(parse_ring(ln, &ws, field.unwrap_or(Field::Rational))?);
            }
            "module" => {
                need_ring(&ring, ln, kcol)?;
                if module.is_some() {
                    return Err(err(ln, kcol + 1, "duplicate module declaration"));
                }
                module = Some(Module {
                    line: ln,
                    shifts: parse_free(ln, line, &ws)?,
                    rels: Vec::new(),
                });
            }
            "rel" => {
                let r = need_ring(&ring, ln, kcol)?;
                let Some(m) = module.as_mut() else {
                    return Err(err(ln, kcol + 1, "`rel` before `module`"));
                };
                let start = kcol + key.len();
                let mut entries = Vec::new();
                for (off, piece) in split_top(&line[start..], ';') {
                    entries.push(parse_poly(r, piece, ln, start + off)?);
                }
                m.rels.push((ln, entries));
            }
            "submodule" => {
                let r = need_ring(&ring, ln, kcol)?;
                let (name, h) = parse_submodule(r, ln, line, &ws)?;
                if submodules.iter().any(|(n, _)| *n == name) {
                    return Err(err(
                        ln,
                        ws[1].0 + 1,
                        format!("duplicate submodule `{name}`"),
                    ));
                }
                submodules.push((name, h));
            }
            "set" => {
                let (Some(&(c, k)), Some(&(vc, v)), None) = (ws.get(1), ws.get(2), ws.get(3))
                else {
                    return Err(err(ln, kcol + 1, "expected `set <key> <int>`"));
                };
                match k {
                    "r" => settings.r = Some(parse_uint(ln, vc, v, "an integer")?),
                    "grid" => settings.grid = Some(parse_uint(ln, vc, v, "an integer")?),
                    "cutoff" => settings.cutoff = Some(parse_uint(ln, vc, v, "an integer")?),
                    "window" => settings.window = Some(parse_uint(ln, vc, v, "an integer")?),
                    _ => return Err(err(ln, c + 1, format!("unknown setting `{k}`"))),
                }
            }
            _ => return Err(err(ln, kcol + 1, format!("unknown directive `{key}`"))),
        }
    }

    let Some(ring) = ring else {
        return Err(err(1, 1, "missing `ring` declaration"));
    };
    let module = match module {
        None => ModulePresentation::free_ring(&ring),
        Some(m) => {
            let free = FreeModuleSpec::new(&ring, m.shifts).map_err(|e| core_err(m.line, 1, e))?;
            let mut rows = Vec::new();
            for (ln, entries) in &m.rels {
                if entries.len() != free.rank() {
                    return Err(err(
                        *ln,
                        1,
                        format!(
                            "relation has {} entries, module has rank {}",
                            entries.len(),
                            free.rank()
                        ),
                    ));
                }
                // Validate one at a time to report the right line.
                ModulePresentation::new(free.clone(), vec![entries.clone()])
                    .map_err(|e| core_err(*ln, 1, e))?;
                rows.push(entries.clone());
            }
            ModulePresentation::new(free, rows).map_err(|e| core_err(m.line, 1, e))?
        }
    };
    Ok(InstanceFile {
        field: ring.field(),
        ring,
        module,
        submodules,
        settings,
    })
}

fn need_ring(ring: &Option<Ring>, ln: usize, col: usize) -> Result<&Ring, ParseError> {
    ring.as_ref()
        .ok_or_else(|| err(ln, col + 1, "`ring` must be declared first"))
}

fn parse_ring(ln: usize, ws: &[(usize, &str)], field: Field) -> Result<Ring, ParseError> {
    let mut base = Vec::new();
    let mut fiber = Vec::new();
    let mut section: Option<&str> = None;
    for &(c, w) in &ws[1..] {
        match w {
            "base" | "fiber" => {
                if section == Some(w) || (w == "base" && section == Some("fiber")) {
                    return Err(err(ln, c + 1, format!("unexpected `{w}`")));
                }
                section = Some(w);
            }
            _ => {
                let valid = w.chars().next().is_some_and(|ch| ch.is_ascii_alphabetic())
                    && w.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
                if !valid {
                    return Err(err(ln, c + 1, format!("invalid variable name `{w}`")));
                }
                match section {
                    Some("base") => base.push(w.to_string()),
                    Some("fiber") => fiber.push(w.to_string()),
                    _ => return Err(err(ln, c + 1, "expected `base` or `fiber`")),
                }
            }
        }
    }
    RingSpec::new(field, base, fiber).map_err(|e| core_err(ln, ws[0].0 + 1, e))
}

fn parse_free(ln: usize, line: &str, ws: &[(usize, &str)]) -> Result<Vec<Bidegree>, ParseError> {
    let (Some(&(_, "free")), Some(&(cc, count)), Some(&(sc, "shifts"))) =
        (ws.get(1), ws.get(2), ws.get(3))
    else {
        return Err(err(
            ln,
            ws[0].0 + 1,
            "expected `module free <count> shifts (a,n) ...`",
        ));
    };
    let count: usize = parse_uint(ln, cc, count, "a count")?;
    let rest_start = sc + "shifts".len();
    let mut shifts = Vec::new();
    let rest = &line[rest_start..];
    let mut chars = rest.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c != '(' {
            return Err(err(ln, rest_start + i + 1, "expected `(a,n)`"));
        }
        let close = rest[i..]
            .find(')')
            .ok_or_else(|| err(ln, rest_start + i + 1, "unclosed `(`"))?;
        let inner = &rest[i + 1..i + close];
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [a, n] = parts[..] else {
            return Err(err(ln, rest_start + i + 1, "expected `(a,n)`"));
        };
        let col = rest_start + i;
        shifts.push(Bidegree::new(
            parse_uint(ln, col, a, "a base degree")?,
            parse_uint(ln, col, n, "a fiber degree")?,
        ));
        while chars.peek().is_some_and(|&(j, _)| j <= i + close) {
            chars.next();
        }
    }
    if shifts.len() != count {
        return Err(err(
            ln,
            cc + 1,
            format!(
                "{count} generators declared but {} shifts given",
                shifts.len()
            ),
        ));
    }
    Ok(shifts)
}

fn parse_submodule(
    ring: &Ring,
    ln: usize,
    line: &str,
    ws: &[(usize, &str)],
) -> Result<(String, SubmoduleSpec), ParseError> {
    let (Some(&(_, name)), Some(&(_, "fiberdeg")), Some(&(dc, d)), Some(&(gc, "gens"))) =
        (ws.get(1), ws.get(2), ws.get(3), ws.get(4))
    else {
        return Err(err(
            ln,
            ws[0].0 + 1,
            "expected `submodule <name> fiberdeg <d> gens <poly>, ...`",
        ));
    };
    let d: u32 = parse_uint(ln, dc, d, "a fiber degree")?;
    let start = gc + "gens".len();
    let mut gens = Vec::new();
    let tail = &line[start..];
    if !tail.trim().is_empty() {
        for (off, piece) in split_top(tail, ',') {
            let col = start + off;
            let g = parse_poly(ring, piece, ln, col)?;
            // Checked one at a time so the diagnostic points at the generator.
            SubmoduleSpec::new(ring, d, vec![g.clone()])
                .map_err(|e| core_err(ln, col + 1 + leading_ws(piece), e))?;
            gens.push(g);
        }
    }
    let h = SubmoduleSpec::new(ring, d, gens).map_err(|e| core_err(ln, start + 1, e))?;
    Ok((name.to_string(), h))
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

/// Splits at `sep` outside parentheses, with each piece's byte offset.
fn split_top(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Parses an integer-coefficient polynomial in infix form. `col` is the
/// 0-based column of `s` within its line.
pub fn parse_poly(ring: &Ring, s: &str, line: usize, col: usize) -> Result<Polynomial, ParseError> {
    let mut p = PolyParser {
        ring,
        src: s.as_bytes(),
        pos: 0,
        line,
        col,
    };
    p.skip_ws();
    if p.pos == s.len() {
        return Err(err(line, col + 1, "empty polynomial"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(p.error(format!(
            "unexpected `{}`",
            s[p.pos..].chars().next().unwrap()
        )));
    }
    Ok(v)
}

struct PolyParser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl PolyParser<'_> {
    fn error(&self, msg: impl Into<String>) -> ParseError {
        err(self.line, self.col + self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { acc.add(&t) } else { acc.sub(&t) }.expect("same ring");
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.multiply(&self.power()?).expect("same ring");
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected an exponent"));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = text.parse().map_err(|_| {
                err(
                    self.line,
                    self.col + start + 1,
                    format!("exponent `{text}` too large"),
                )
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = text.parse().expect("digits");
                Ok(Polynomial::constant(
                    self.ring,
                    self.ring.field().from_bigint(&n),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.var_index(name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => Err(err(
                        self.line,
                        self.col + start + 1,
                        format!("unknown variable `{name}`"),
                    )),
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of polynomial")),
        }
    }
}
