//! Versioned text formats for matrices, words, certificates, modules,
//! epimorphisms and symbols.
//!
//! Every format starts with a `vaserstein-<kind> v1` header followed by a
//! `ring <spec>` line. Entries are separated by ", ". Blank lines and lines
//! starting with `#` are ignored.

use std::sync::Arc;

use crate::elem::{Block, BlockDecomposition, ElemWord};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::projmod::{ProjModule, Trivialization, UmEpi};
use crate::ring::{ring_parse, Elem, Ring};
use crate::witt::{EquivCert, VTriple};

const VERSION: &str = "v1";

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(k, l)| (k + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines { inner: it.peekable() }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.inner.next().ok_or_else(|| Error::Parse(format!("unexpected end of input, expected {what}")))
    }

    /// A line `key rest`, returning rest.
    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let (n, line) = self.next(key)?;
        match line.split_once(char::is_whitespace) {
            Some((k, rest)) if k == key => Ok(rest.trim()),
            None if line == key => Ok(""),
            _ => parse_err(format!("line {n}: expected `{key}`, found `{line}`")),
        }
    }

    fn keyed_usize(&mut self, key: &str) -> Result<usize> {
        let v = self.keyed(key)?;
        v.parse().map_err(|_| Error::Parse(format!("`{key}` needs a count, found `{v}`")))
    }

    fn header(&mut self, kind: &str) -> Result<()> {
        let (n, line) = self.next("header")?;
        let expected = format!("vaserstein-{kind} {VERSION}");
        if line != expected {
            return parse_err(format!("line {n}: expected header `{expected}`, found `{line}`"));
        }
        Ok(())
    }

    fn ring(&mut self) -> Result<Ring> {
        ring_parse(self.keyed("ring")?)
    }

    fn finish(&mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((n, l)) => parse_err(format!("line {n}: trailing content `{l}`")),
        }
    }
}

fn parse_row(ring: &Ring, line: &str, len: usize) -> Result<Vec<Elem>> {
    if len == 0 {
        return if line.is_empty() { Ok(Vec::new()) } else { parse_err("expected an empty row") };
    }
    let row: Vec<Elem> = line.split(',').map(|t| Elem::parse(ring, t.trim())).collect::<Result<_>>()?;
    if row.len() != len {
        return parse_err(format!("expected {len} entries, found {}", row.len()));
    }
    Ok(row)
}

fn write_row(out: &mut String, row: &[Elem]) {
    let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
    out.push_str(&parts.join(", "));
    out.push('\n');
}

fn write_matrix_body(out: &mut String, m: &Matrix) {
    out.push_str(&format!("dims {} {}\n", m.rows(), m.cols()));
    if m.cols() == 0 {
        return;
    }
    for i in 0..m.rows() {
        write_row(out, &m.row(i));
    }
}

fn parse_matrix_body(lines: &mut Lines, ring: &Ring) -> Result<Matrix> {
    let d = lines.keyed("dims")?;
    let parts: Vec<usize> = d
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad dims `{d}`"))))
        .collect::<Result<_>>()?;
    let [r, c] = parts[..] else {
        return parse_err(format!("dims needs two numbers, found `{d}`"));
    };
    let mut rows = Vec::with_capacity(r);
    for _ in 0..r {
        // rows of a matrix with zero columns are omitted
        if c == 0 {
            rows.push(Vec::new());
            continue;
        }
        let (n, line) = lines.next("matrix row")?;
        rows.push(parse_row(ring, line, c).map_err(|e| Error::Parse(format!("line {n}: {e}")))?);
    }
    if r == 0 {
        return Ok(Matrix::zeros(ring, 0, c));
    }
    Matrix::from_rows(ring, rows)
}

fn write_vector(out: &mut String, key: &str, v: &[Elem]) {
    out.push_str(key);
    out.push(' ');
    write_row(out, v);
}

fn parse_vector(lines: &mut Lines, ring: &Ring, key: &str, len: usize) -> Result<Vec<Elem>> {
    let v = lines.keyed(key)?;
    parse_row(ring, v, len)
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = format!("vaserstein-matrix {VERSION}\nring {}\n", m.ring());
    write_matrix_body(&mut out, m);
    out
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = Lines::new(text);
    lines.header("matrix")?;
    let ring = lines.ring()?;
    let m = parse_matrix_body(&mut lines, &ring)?;
    lines.finish()?;
    Ok(m)
}

fn write_word_body(out: &mut String, w: &ElemWord) {
    let blocks = w.blocks();
    out.push_str(&format!("blocks {}\n", blocks.len()));
    for b in blocks.blocks() {
        match b {
            Block::Free(k) => out.push_str(&format!("block free {k}\n")),
            Block::Projective(pi) => {
                out.push_str(&format!("block projective {}\n", pi.rows()));
                for i in 0..pi.rows() {
                    write_row(out, &pi.row(i));
                }
            }
        }
    }
    out.push_str(&format!("factors {}\n", w.len()));
    for f in w.factors() {
        out.push_str(&format!("factor {} {}\n", f.target, f.source));
        let local = f.coeff.submatrix(
            blocks.offset(f.target),
            blocks.offset(f.source),
            blocks.size(f.target),
            blocks.size(f.source),
        );
        for i in 0..local.rows() {
            write_row(out, &local.row(i));
        }
    }
}

fn parse_word_body(lines: &mut Lines, ring: &Ring) -> Result<ElemWord> {
    let nb = lines.keyed_usize("blocks")?;
    let mut blocks = Vec::with_capacity(nb);
    for _ in 0..nb {
        let spec = lines.keyed("block")?;
        let mut parts = spec.split_whitespace();
        let kind = parts.next().unwrap_or("");
        let size: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad block line `{spec}`")))?;
        match kind {
            "free" => blocks.push(Block::Free(size)),
            "projective" => {
                let mut rows = Vec::with_capacity(size);
                for _ in 0..size {
                    let (_, line) = lines.next("projector row")?;
                    rows.push(parse_row(ring, line, size)?);
                }
                blocks.push(Block::Projective(Matrix::from_rows(ring, rows)?));
            }
            _ => return parse_err(format!("unknown block kind `{kind}`")),
        }
    }
    let decomposition = Arc::new(BlockDecomposition::new(ring, blocks)?);
    let mut w = ElemWord::with_blocks(&decomposition);
    let nf = lines.keyed_usize("factors")?;
    for _ in 0..nf {
        let spec = lines.keyed("factor")?;
        let ts: Vec<usize> = spec
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad factor line `{spec}`"))))
            .collect::<Result<_>>()?;
        let [t, s] = ts[..] else {
            return parse_err(format!("factor needs target and source, found `{spec}`"));
        };
        if t >= decomposition.len() || s >= decomposition.len() {
            return parse_err(format!("factor refers to a missing block: `{spec}`"));
        }
        let (rows, cols) = (decomposition.size(t), decomposition.size(s));
        let mut local = Vec::with_capacity(rows);
        for _ in 0..rows {
            let (_, line) = lines.next("factor row")?;
            local.push(parse_row(ring, line, cols)?);
        }
        w.push_local(t, s, &Matrix::from_rows(ring, local)?)?;
    }
    Ok(w)
}

pub fn write_word(w: &ElemWord) -> String {
    let mut out = format!("vaserstein-word {VERSION}\nring {}\n", w.ring());
    write_word_body(&mut out, w);
    out
}

pub fn parse_word(text: &str) -> Result<ElemWord> {
    let mut lines = Lines::new(text);
    lines.header("word")?;
    let ring = lines.ring()?;
    let w = parse_word_body(&mut lines, &ring)?;
    lines.finish()?;
    Ok(w)
}

pub fn write_cert(c: &EquivCert) -> String {
    let mut out = format!("vaserstein-cert {VERSION}\nring {}\nlevel {}\n", c.word.ring(), c.level);
    write_word_body(&mut out, &c.word);
    out
}

pub fn parse_cert(text: &str) -> Result<EquivCert> {
    let mut lines = Lines::new(text);
    lines.header("cert")?;
    let ring = lines.ring()?;
    let level = lines.keyed_usize("level")?;
    let word = parse_word_body(&mut lines, &ring)?;
    lines.finish()?;
    Ok(EquivCert { level, word })
}

fn write_module_body(out: &mut String, p: &ProjModule) {
    out.push_str(&format!("rank {}\npi\n", p.rank()));
    write_matrix_body(out, p.pi());
    if let Some((u, v)) = p.complement() {
        out.push_str("complement\n");
        write_matrix_body(out, u);
        write_matrix_body(out, v);
    }
}

fn parse_module_body(lines: &mut Lines, ring: &Ring) -> Result<ProjModule> {
    let rank = lines.keyed_usize("rank")?;
    lines.keyed("pi")?;
    let pi = parse_matrix_body(lines, ring)?;
    let mut module = ProjModule::new(pi, rank)?;
    if matches!(lines.inner.peek(), Some((_, "complement"))) {
        lines.keyed("complement")?;
        let u = parse_matrix_body(lines, ring)?;
        let v = parse_matrix_body(lines, ring)?;
        module = module.with_complement(u, v)?;
    }
    Ok(module)
}

/// A projective module, optionally with a trivialization of its determinant.
pub fn write_module(p: &ProjModule, triv: Option<&Trivialization>) -> String {
    let mut out = format!("vaserstein-module {VERSION}\nring {}\n", p.ring());
    write_module_body(&mut out, p);
    if let Some(t) = triv {
        write_vector(&mut out, "w", &t.w);
        write_vector(&mut out, "lambda", &t.lambda);
    }
    out
}

pub fn parse_module(text: &str) -> Result<(ProjModule, Option<Trivialization>)> {
    let mut lines = Lines::new(text);
    lines.header("module")?;
    let ring = lines.ring()?;
    let module = parse_module_body(&mut lines, &ring)?;
    let triv = if lines.inner.peek().is_some() {
        let n = module.ambient() * module.ambient().saturating_sub(1) / 2;
        let w = parse_vector(&mut lines, &ring, "w", n)?;
        let lambda = parse_vector(&mut lines, &ring, "lambda", n)?;
        let t = Trivialization { w, lambda };
        t.validate(&module)?;
        Some(t)
    } else {
        None
    };
    lines.finish()?;
    Ok((module, triv))
}

/// An epimorphism a on P₀ ⊕ R and its section, in ambient coordinates.
pub fn write_epi(e: &UmEpi) -> String {
    let mut out = format!("vaserstein-epi {VERSION}\nring {}\n", e.ring());
    write_vector(&mut out, "a", &e.a);
    write_vector(&mut out, "s", &e.s);
    out
}

pub fn parse_epi(text: &str, base: &ProjModule) -> Result<UmEpi> {
    let mut lines = Lines::new(text);
    lines.header("epi")?;
    let ring = lines.ring()?;
    if ring != *base.ring() {
        return parse_err(format!("epimorphism over {ring}, module over {}", base.ring()));
    }
    let n = base.ambient() + 1;
    let a = parse_vector(&mut lines, &ring, "a", n)?;
    let s = parse_vector(&mut lines, &ring, "s", n)?;
    lines.finish()?;
    UmEpi::new(base.clone(), a, s)
}

/// A triple with the ξ matrix of its free embedding and that matrix's Pfaffian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolRecord {
    pub triple: VTriple,
    pub xi: Matrix,
    pub pfaffian: Elem,
}

pub fn write_symbol(r: &SymbolRecord) -> String {
    let mut out = format!("vaserstein-symbol {VERSION}\nring {}\n", r.triple.ring());
    write_module_body(&mut out, &r.triple.module);
    out.push_str("g\n");
    write_matrix_body(&mut out, &r.triple.g);
    out.push_str("f\n");
    write_matrix_body(&mut out, &r.triple.f);
    out.push_str(&format!("pfaffian {}\nxi\n", r.pfaffian));
    write_matrix_body(&mut out, &r.xi);
    out
}

pub fn parse_symbol(text: &str) -> Result<SymbolRecord> {
    let mut lines = Lines::new(text);
    lines.header("symbol")?;
    let ring = lines.ring()?;
    let module = parse_module_body(&mut lines, &ring)?;
    lines.keyed("g")?;
    let g = parse_matrix_body(&mut lines, &ring)?;
    lines.keyed("f")?;
    let f = parse_matrix_body(&mut lines, &ring)?;
    let pfaffian = Elem::parse(&ring, lines.keyed("pfaffian")?)?;
    lines.keyed("xi")?;
    let xi = parse_matrix_body(&mut lines, &ring)?;
    lines.finish()?;
    Ok(SymbolRecord { triple: VTriple::new(module, g, f)?, xi, pfaffian })
}
