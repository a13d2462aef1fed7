//! Plain-text hypergraph format.
//!
//! ```text
//! n m
//! s v1 v2 ... vs      (m lines, vertices sorted)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::{normalize_edge, Hypergraph, HypergraphBuilder, Vertex};

pub fn to_text(h: &Hypergraph) -> String {
    let mut out = String::with_capacity(h.total_size() * 4 + 16);
    let _ = writeln!(out, "{} {}", h.n(), h.edge_count());
    for e in h.edges() {
        let _ = write!(out, "{}", e.len());
        for v in e {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} `{tok}`"),
    })
}

pub fn read_text<R: Read>(reader: R) -> Result<Hypergraph> {
    let mut lines = BufReader::new(reader)
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

    let (lno, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let header = header?;
    let mut toks = header.split_whitespace();
    let n: usize = parse_num(toks.next(), lno, "vertex count")?;
    let m: usize = parse_num(toks.next(), lno, "edge count")?;
    if toks.next().is_some() {
        return Err(Error::Parse {
            line: lno,
            msg: "trailing tokens in header".into(),
        });
    }

    let mut b = HypergraphBuilder::new(n);
    for _ in 0..m {
        let (lno, line) = lines.next().ok_or(Error::Parse {
            line: lno + 1,
            msg: format!("expected {m} edges"),
        })?;
        let line = line?;
        let mut toks = line.split_whitespace();
        let s: usize = parse_num(toks.next(), lno, "edge size")?;
        let verts = toks
            .map(|t| parse_num::<Vertex>(Some(t), lno, "vertex"))
            .collect::<Result<Vec<_>>>()?;
        if verts.len() != s {
            return Err(Error::Parse {
                line: lno,
                msg: format!("edge size {s} but {} vertices listed", verts.len()),
            });
        }
        let e = normalize_edge(n, &verts).map_err(|e| Error::Parse {
            line: lno,
            msg: e.to_string(),
        })?;
        if !b.add_edge(&e)? {
            return Err(Error::Parse {
                line: lno,
                msg: "duplicate edge".into(),
            });
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::Parse {
            line: lno,
            msg: format!("more than {m} edges"),
        });
    }
    Ok(b.build())
}

pub fn from_text(s: &str) -> Result<Hypergraph> {
    read_text(s.as_bytes())
}

pub fn read_file<P: AsRef<Path>>(path: P) -> Result<Hypergraph> {
    read_text(fs::File::open(path)?)
}

pub fn write_file<P: AsRef<Path>>(path: P, h: &Hypergraph) -> Result<()> {
    fs::write(path, to_text(h))?;
    Ok(())
}
