//! Plain-text edge lists.
//!
//! ```text
//! n=3
//! 0 1
//! 0 2
//! 1 2
//! ```
//!
//! Ids are 0-based, each line holds `i j` with `i < j`, lines are in
//! ascending lexicographic order, and every line ends with `\n`. The reader
//! accepts either orientation and any order, but rejects self-loops,
//! duplicate edges and ids outside `0..n`.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

pub fn write_edgelist<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "n={}", g.node_count())?;
    for (i, j) in g.edges() {
        writeln!(out, "{i} {j}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_edgelist(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    write_edgelist(g, BufWriter::new(file))
}

pub fn read_edgelist<R: Read>(input: R) -> Result<Graph> {
    let reader = BufReader::new(input);
    let mut lines = reader.lines().enumerate();

    let node_count = loop {
        let Some((idx, line)) = lines.next() else {
            return Err(Error::format(1, "missing `n=<count>` header"));
        };
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let count = trimmed
            .strip_prefix("n=")
            .and_then(|c| c.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::format(idx + 1, format!("expected `n=<count>` header, found `{trimmed}`")))?;
        if count == 0 {
            return Err(Error::format(idx + 1, "node count must be positive"));
        }
        break count;
    };

    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(Error::format(lineno, format!("expected two node ids, found `{trimmed}`"))),
        };
        let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::format(lineno, format!("`{s}` is not a node id")));
        let (a, b) = (parse(a)?, parse(b)?);
        if a >= node_count || b >= node_count {
            return Err(Error::format(lineno, format!("node id {} out of range for n={node_count}", a.max(b))));
        }
        if a == b {
            return Err(Error::format(lineno, format!("self-loop on node {a}")));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::format(lineno, format!("duplicate edge {a} {b}")));
        }
        edges.push((a, b));
    }
    Ok(Graph::from_edges_unchecked(node_count, &edges))
}

pub fn load_edgelist(path: impl AsRef<Path>) -> Result<Graph> {
    read_edgelist(File::open(path)?)
}
