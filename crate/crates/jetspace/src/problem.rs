//! Problem-file parsing: a ring declaration, named polynomial blocks and an
//! options block, with positional error reporting.
//!
//! ```text
//! ring x y z
//! X: x*y - z^2
//! Y[1/2]: x*y
//! W: x, y, z
//! options: max_level=6, seed=42
//! ```

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::poly::{PolyRing, Polynomial};
use crate::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, col {col}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}, col {col}: unknown variable `{name}`")]
    UnknownVariable {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("line {line}: duplicate block `{name}`")]
    DuplicateBlock { line: usize, name: String },
    #[error("line {line}: {message}")]
    Block { line: usize, message: String },
    #[error("missing ring declaration")]
    MissingRing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>, // token, line, col (1-based)
    pos: usize,
}

fn lex(text: &str, start_line: usize, start_col: usize) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let mut line = start_line;
    let mut col = start_col;
    let mut chars = text.chars().peekable();
    let bump = |chars: &mut std::iter::Peekable<std::str::Chars>,
                    line: &mut usize,
                    col: &mut usize| {
        let c = chars.next().unwrap();
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        c
    };
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        if c.is_whitespace() {
            bump(&mut chars, &mut line, &mut col);
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    s.push(bump(&mut chars, &mut line, &mut col));
                } else {
                    break;
                }
            }
            toks.push((Tok::Num(s.parse().expect("digits")), tline, tcol));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(bump(&mut chars, &mut line, &mut col));
                } else {
                    break;
                }
            }
            toks.push((Tok::Ident(s), tline, tcol));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError::Syntax {
                    line: tline,
                    col: tcol,
                    expected: "a term".to_string(),
                    found: format!("`{other}`"),
                })
            }
        };
        bump(&mut chars, &mut line, &mut col);
        toks.push((tok, tline, tcol));
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> &(Tok, usize, usize) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        let (tok, line, col) = self.peek();
        ParseError::Syntax {
            line: *line,
            col: *col,
            expected: expected.to_string(),
            found: tok.to_string(),
        }
    }
}

/// Grammar: expr := term (('+'|'-') term)*, term := factor ('*' factor)*,
/// factor := '-'* atom ('^' NAT)?, atom := NUM ('/' NUM)? | IDENT | '(' expr ')'.
/// Implicit multiplication is not accepted.
fn parse_expr(lx: &mut Lexer, ring: &Arc<PolyRing>) -> Result<Polynomial, ParseError> {
    let mut acc = parse_term(lx, ring)?;
    loop {
        match lx.peek().0 {
            Tok::Plus => {
                lx.next();
                acc = &acc + &parse_term(lx, ring)?;
            }
            Tok::Minus => {
                lx.next();
                acc = &acc - &parse_term(lx, ring)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer, ring: &Arc<PolyRing>) -> Result<Polynomial, ParseError> {
    let mut acc = parse_factor(lx, ring)?;
    while lx.peek().0 == Tok::Star {
        lx.next();
        acc = &acc * &parse_factor(lx, ring)?;
    }
    Ok(acc)
}

fn parse_factor(lx: &mut Lexer, ring: &Arc<PolyRing>) -> Result<Polynomial, ParseError> {
    let mut negate = false;
    while lx.peek().0 == Tok::Minus {
        lx.next();
        negate = !negate;
    }
    let base = parse_atom(lx, ring)?;
    let p = if lx.peek().0 == Tok::Caret {
        lx.next();
        match &lx.peek().0 {
            Tok::Num(n) => match n.to_string().parse::<u32>() {
                Ok(e) => {
                    lx.next();
                    base.pow(e)
                }
                Err(_) => return Err(lx.err("an exponent that fits in 32 bits")),
            },
            _ => return Err(lx.err("a nonnegative integer exponent")),
        }
    } else {
        base
    };
    Ok(if negate { -&p } else { p })
}

fn parse_atom(lx: &mut Lexer, ring: &Arc<PolyRing>) -> Result<Polynomial, ParseError> {
    match lx.peek().0.clone() {
        Tok::Num(n) => {
            lx.next();
            if lx.peek().0 == Tok::Slash {
                lx.next();
                match lx.peek().0.clone() {
                    Tok::Num(d) => {
                        if d.is_zero() {
                            Err(lx.err("a nonzero denominator"))
                        } else {
                            lx.next();
                            Ok(Polynomial::constant(ring, Rat::new(n, d)))
                        }
                    }
                    _ => Err(lx.err("an integer denominator")),
                }
            } else {
                Ok(Polynomial::constant(ring, Rat::from_integer(n)))
            }
        }
        Tok::Ident(name) => {
            let (_, line, col) = lx.next();
            match ring.var_index(&name) {
                Some(i) => Ok(Polynomial::var(ring, i)),
                None => Err(ParseError::UnknownVariable { line, col, name }),
            }
        }
        Tok::LParen => {
            lx.next();
            let inner = parse_expr(lx, ring)?;
            if lx.peek().0 == Tok::RParen {
                lx.next();
                Ok(inner)
            } else {
                Err(lx.err("`)`"))
            }
        }
        _ => Err(lx.err("a number, variable or `(`")),
    }
}

/// Parse one polynomial in the given ring.
pub fn parse_polynomial(ring: &Arc<PolyRing>, text: &str) -> Result<Polynomial, ParseError> {
    parse_polynomial_at(ring, text, 1, 1)
}

fn parse_polynomial_at(
    ring: &Arc<PolyRing>,
    text: &str,
    line: usize,
    col: usize,
) -> Result<Polynomial, ParseError> {
    let mut lx = lex(text, line, col)?;
    let p = parse_expr(&mut lx, ring)?;
    if lx.peek().0 != Tok::End {
        return Err(lx.err("`+`, `-`, `*`, `^` or end of input"));
    }
    Ok(p)
}

/// Parse a rational written as `n` or `n/d` (optionally negative).
pub fn parse_rational(text: &str) -> Result<Rat, String> {
    let t = text.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let mut it = t.splitn(2, '/');
    let n: BigInt = it
        .next()
        .unwrap()
        .trim()
        .parse()
        .map_err(|_| format!("bad rational `{text}`"))?;
    let r = match it.next() {
        Some(d) => {
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| format!("bad rational `{text}`"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{text}`"));
            }
            Rat::new(n, d)
        }
        None => Rat::from_integer(n),
    };
    Ok(if neg { -r } else { r })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub max_level: Option<usize>,
    pub max_jac: Option<usize>,
    pub max_contact: Option<usize>,
    pub seed: Option<u64>,
    pub pair_limit: Option<usize>,
}

/// A parsed problem: ring, defining equations, weighted subschemes, center,
/// optional divisor block and options.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub ring: Arc<PolyRing>,
    pub x_gens: Vec<Polynomial>,
    pub d_gens: Option<Vec<Polynomial>>,
    pub y_blocks: Vec<(Rat, Vec<Polynomial>)>,
    pub w_gens: Option<Vec<Polynomial>>,
    pub options: Options,
}

struct RawBlock {
    name: String,
    q: Option<Rat>,
    line: usize,
    // (text, line, col) per comma-separated item
    items: Vec<(String, usize, usize)>,
}

/// Strip comments, locate block headers, split block bodies on commas.
fn split_blocks(text: &str) -> Result<(Vec<String>, Vec<RawBlock>), ParseError> {
    let mut ring_vars: Option<Vec<String>> = None;
    let mut blocks: Vec<RawBlock> = Vec::new();
    for (lno, raw_line) in text.lines().enumerate() {
        let lno = lno + 1;
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("ring") {
            if rest.starts_with(char::is_whitespace) {
                if ring_vars.is_some() {
                    return Err(ParseError::DuplicateBlock {
                        line: lno,
                        name: "ring".to_string(),
                    });
                }
                let vars: Vec<String> = rest.split_whitespace().map(String::from).collect();
                if vars.is_empty() {
                    return Err(ParseError::Block {
                        line: lno,
                        message: "ring declaration needs at least one variable".to_string(),
                    });
                }
                for (i, v) in vars.iter().enumerate() {
                    let head_ok = v
                        .chars()
                        .next()
                        .map(|c| c.is_ascii_alphabetic() || c == '_')
                        .unwrap_or(false);
                    if !head_ok || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                        return Err(ParseError::Block {
                            line: lno,
                            message: format!("bad variable name `{v}`"),
                        });
                    }
                    if vars[..i].contains(v) {
                        return Err(ParseError::Block {
                            line: lno,
                            message: format!("duplicate variable `{v}`"),
                        });
                    }
                }
                ring_vars = Some(vars);
                continue;
            }
        }
        // block header?
        if let Some(colon) = trimmed.find(':') {
            let head = trimmed[..colon].trim();
            let is_header = head == "X"
                || head == "D"
                || head == "W"
                || head == "options"
                || (head.starts_with("Y[") && head.ends_with(']'));
            if is_header {
                let q = if head.starts_with("Y[") {
                    let inner = &head[2..head.len() - 1];
                    let q = parse_rational(inner).map_err(|m| ParseError::Block {
                        line: lno,
                        message: m,
                    })?;
                    if q.is_negative() {
                        return Err(ParseError::Block {
                            line: lno,
                            message: format!("coefficient {inner} must be nonnegative"),
                        });
                    }
                    Some(q)
                } else {
                    None
                };
                let name = if q.is_some() { "Y" } else { head }.to_string();
                if name != "Y" && blocks.iter().any(|b| b.name == name) {
                    return Err(ParseError::DuplicateBlock { line: lno, name });
                }
                let body = &trimmed[colon + 1..];
                let body_col = indent + colon + 2; // 1-based col after ':'
                let mut block = RawBlock {
                    name,
                    q,
                    line: lno,
                    items: Vec::new(),
                };
                push_items(&mut block, body, lno, body_col);
                blocks.push(block);
                continue;
            }
        }
        // continuation line of the last block
        match blocks.last_mut() {
            Some(block) => push_items(block, line, lno, 1),
            None => {
                return Err(ParseError::Block {
                    line: lno,
                    message: format!("unexpected content `{trimmed}` before any block"),
                })
            }
        }
    }
    let vars = ring_vars.ok_or(ParseError::MissingRing)?;
    Ok((vars, blocks))
}

fn push_items(block: &mut RawBlock, body: &str, line: usize, start_col: usize) {
    let mut col = start_col;
    for piece in body.split(',') {
        if !piece.trim().is_empty() {
            block.items.push((piece.to_string(), line, col));
        }
        col += piece.chars().count() + 1;
    }
}

/// Parse a full problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let (vars, blocks) = split_blocks(text)?;
    let ring = PolyRing::new(vars);
    let mut out = ProblemFile {
        ring: ring.clone(),
        x_gens: Vec::new(),
        d_gens: None,
        y_blocks: Vec::new(),
        w_gens: None,
        options: Options::default(),
    };
    for block in blocks {
        if block.name == "options" {
            for (item, line, _col) in &block.items {
                let mut kv = item.splitn(2, '=');
                let key = kv.next().unwrap().trim();
                let value = kv.next().ok_or_else(|| ParseError::Block {
                    line: *line,
                    message: format!("expected key=value, found `{}`", item.trim()),
                })?;
                let value = value.trim();
                let parse_usize = |v: &str| -> Result<usize, ParseError> {
                    v.parse().map_err(|_| ParseError::Block {
                        line: *line,
                        message: format!("bad value `{v}` for option {key}"),
                    })
                };
                match key {
                    "max_level" => out.options.max_level = Some(parse_usize(value)?),
                    "max_jac" => out.options.max_jac = Some(parse_usize(value)?),
                    "max_contact" => out.options.max_contact = Some(parse_usize(value)?),
                    "pair_limit" => out.options.pair_limit = Some(parse_usize(value)?),
                    "seed" => {
                        out.options.seed = Some(value.parse().map_err(|_| ParseError::Block {
                            line: *line,
                            message: format!("bad value `{value}` for option seed"),
                        })?)
                    }
                    other => {
                        return Err(ParseError::Block {
                            line: *line,
                            message: format!("unknown option `{other}`"),
                        })
                    }
                }
            }
            continue;
        }
        let mut polys = Vec::new();
        for (item, line, col) in &block.items {
            polys.push(parse_polynomial_at(&ring, item, *line, *col)?);
        }
        if polys.is_empty() {
            return Err(ParseError::Block {
                line: block.line,
                message: format!("block {} has no polynomials", block.name),
            });
        }
        match block.name.as_str() {
            "X" => out.x_gens = polys,
            "D" => out.d_gens = Some(polys),
            "W" => out.w_gens = Some(polys),
            "Y" => out.y_blocks.push((block.q.expect("Y block has q"), polys)),
            _ => unreachable!(),
        }
    }
    Ok(out)
}

/// Canonical textual rendering; `parse_problem(render(p))` equals `p`.
pub fn render_problem(p: &ProblemFile) -> String {
    let mut out = String::new();
    out.push_str("ring ");
    out.push_str(&p.ring.var_names().join(" "));
    out.push('\n');
    let join = |polys: &[Polynomial]| {
        polys
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    if !p.x_gens.is_empty() {
        out.push_str(&format!("X: {}\n", join(&p.x_gens)));
    }
    if let Some(d) = &p.d_gens {
        out.push_str(&format!("D: {}\n", join(d)));
    }
    for (q, gens) in &p.y_blocks {
        out.push_str(&format!("Y[{}]: {}\n", crate::poly::rat_str(q), join(gens)));
    }
    if let Some(w) = &p.w_gens {
        out.push_str(&format!("W: {}\n", join(w)));
    }
    let mut opts = Vec::new();
    if let Some(v) = p.options.max_level {
        opts.push(format!("max_level={v}"));
    }
    if let Some(v) = p.options.max_jac {
        opts.push(format!("max_jac={v}"));
    }
    if let Some(v) = p.options.max_contact {
        opts.push(format!("max_contact={v}"));
    }
    if let Some(v) = p.options.seed {
        opts.push(format!("seed={v}"));
    }
    if let Some(v) = p.options.pair_limit {
        opts.push(format!("pair_limit={v}"));
    }
    if !opts.is_empty() {
        out.push_str(&format!("options: {}\n", opts.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn minimal_file() {
        let p = parse_problem("ring x y z\nX: x*y - z^2").unwrap();
        assert_eq!(p.ring.nvars(), 3);
        assert_eq!(p.x_gens.len(), 1);
        assert_eq!(p.x_gens[0].to_string(), "x*y - z^2");
    }

    #[test]
    fn coefficient_parse() {
        let p = parse_problem("ring x y\nY[3/2]: x*y").unwrap();
        assert_eq!(p.y_blocks.len(), 1);
        assert_eq!(p.y_blocks[0].0, Rat::new(3.into(), 2.into()));
    }

    #[test]
    fn truncated_input_position() {
        let err = parse_problem("ring x\nX: x + ").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                col: 8,
                expected: "a number, variable or `(`".to_string(),
                found: "end of input".to_string(),
            }
        );
    }

    #[test]
    fn unknown_variable_position() {
        let err = parse_problem("ring x\nX: x + w").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownVariable {
                line: 2,
                col: 8,
                name: "w".to_string()
            }
        );
    }

    #[test]
    fn implicit_multiplication_rejected() {
        let ring = PolyRing::new(vec!["x"]);
        assert!(parse_polynomial(&ring, "2x").is_err());
        assert!(parse_polynomial(&ring, "2*x").is_ok());
    }

    #[test]
    fn duplicate_block_rejected() {
        let err = parse_problem("ring x\nX: x\nX: x^2").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateBlock { line: 3, .. }));
    }

    #[test]
    fn expressions() {
        let ring = PolyRing::new(vec!["x", "y"]);
        let p = parse_polynomial(&ring, "(x + y)^2 - 2*x*y").unwrap();
        let x = Polynomial::var(&ring, 0);
        let y = Polynomial::var(&ring, 1);
        assert_eq!(p, &x.pow(2) + &y.pow(2));
        let c = parse_polynomial(&ring, "-3/4").unwrap();
        assert_eq!(
            c,
            Polynomial::constant(&ring, Rat::new((-3).into(), 4.into()))
        );
        assert!(parse_polynomial(&ring, "x / 2").is_err());
        assert_eq!(
            parse_polynomial(&ring, "x^0").unwrap(),
            Polynomial::constant(&ring, Rat::one())
        );
    }

    #[test]
    fn options_and_render_round_trip() {
        let text =
            "ring x y z\nX: x*y - z^2\nY[1/2]: x, y\nW: x, y, z\noptions: max_level=5, seed=7\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.options.max_level, Some(5));
        assert_eq!(p.options.seed, Some(7));
        let rendered = render_problem(&p);
        let p2 = parse_problem(&rendered).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn multiline_blocks_and_comments() {
        let text = "# a surface\nring x y z\nX: x*y - z^2   # the node\nW: x,\n   y, z\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.w_gens.as_ref().unwrap().len(), 3);
    }
}
