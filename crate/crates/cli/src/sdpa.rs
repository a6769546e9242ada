//! SDPA sparse format (.dat-s) reader and writer.
//!
//! The file states the problem
//! `minimize cᵀx  subject to  Σ xᵢFᵢ − F₀ ⪰ 0`,
//! which maps onto the dual of conekit's standard form via
//! `y = x`, `b = −c`, `Aᵢ = −Fᵢ`, `C = −F₀`. In other words, the dual
//! objective `bᵀy` of the parsed [`ConicProblem`] equals minus the file's
//! objective at the file's optimum. The mapping is its own inverse, so
//! parse ∘ write is the identity.
//!
//! Negative blockStruct entries denote diagonal blocks: `-d` expands to `d`
//! size-1 blocks, and entries in such blocks must be diagonal.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use conekit::cones::{BlockStructure, BlockSymMatrix, ConicProblem};

/// Parse error with a line number (1-based; 0 marks end-of-file context).
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SDPA parse error at line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

/// Tokens of one logical line; separators are whitespace and the
/// punctuation the format traditionally allows.
fn tokens(line: &str) -> Vec<&str> {
    line.split(|c: char| c.is_whitespace() || matches!(c, ',' | '(' | ')' | '{' | '}'))
        .filter(|t| !t.is_empty())
        .collect()
}

struct FileBlock {
    /// first structure-block index this file block expands to
    base: usize,
    /// side length for matrix blocks; d for a diagonal block of d scalars
    size: usize,
    diagonal: bool,
}

pub fn parse_sdpa(text: &str) -> Result<ConicProblem, ParseError> {
    // data lines, with their original 1-based numbers
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('*') && !t.starts_with('"')
        });

    let (mline, mtext) = match lines.next() {
        Some(v) => v,
        None => return err(0, "missing header (constraint count)"),
    };
    let m: usize = match tokens(mtext).first().and_then(|t| t.parse().ok()) {
        Some(v) => v,
        None => return err(mline, "cannot read the constraint count"),
    };

    let (nbline, nbtext) = match lines.next() {
        Some(v) => v,
        None => return err(0, "missing block count"),
    };
    let nblock: usize = match tokens(nbtext).first().and_then(|t| t.parse().ok()) {
        Some(v) => v,
        None => return err(nbline, "cannot read the block count"),
    };

    let (bsline, bstext) = match lines.next() {
        Some(v) => v,
        None => return err(0, "missing block structure"),
    };
    let bs_tokens = tokens(bstext);
    if bs_tokens.len() != nblock {
        return err(
            bsline,
            format!("block structure lists {} entries, expected {nblock}", bs_tokens.len()),
        );
    }
    let mut file_blocks = Vec::with_capacity(nblock);
    let mut sizes: Vec<usize> = Vec::new();
    for t in &bs_tokens {
        let v: i64 = match t.parse() {
            Ok(v) => v,
            Err(_) => return err(bsline, format!("bad block size `{t}`")),
        };
        if v == 0 {
            return err(bsline, "zero block size");
        }
        let base = sizes.len();
        if v > 0 {
            sizes.push(v as usize);
            file_blocks.push(FileBlock { base, size: v as usize, diagonal: false });
        } else {
            let d = (-v) as usize;
            sizes.resize(sizes.len() + d, 1);
            file_blocks.push(FileBlock { base, size: d, diagonal: true });
        }
    }
    let structure = match BlockStructure::new(sizes) {
        Ok(s) => s,
        Err(e) => return err(bsline, e.to_string()),
    };

    let (cline, ctext) = match lines.next() {
        Some(v) => v,
        None => return err(0, "missing objective vector"),
    };
    let c_tokens = tokens(ctext);
    if c_tokens.len() != m {
        return err(cline, format!("objective vector has {} entries, expected {m}", c_tokens.len()));
    }
    let mut b = Vec::with_capacity(m);
    for t in &c_tokens {
        match t.parse::<f64>() {
            Ok(v) => b.push(-v), // b = −c
            Err(_) => return err(cline, format!("bad objective entry `{t}`")),
        }
    }

    let mut c_mat = BlockSymMatrix::zeros(&structure);
    let mut a_mats = vec![BlockSymMatrix::zeros(&structure); m];
    let mut seen: BTreeMap<(usize, usize, usize, usize), usize> = BTreeMap::new();

    for (lineno, ltext) in lines {
        let toks = tokens(ltext);
        if toks.len() != 5 {
            return err(lineno, format!("entry line has {} fields, expected 5", toks.len()));
        }
        let matno: usize = match toks[0].parse() {
            Ok(v) => v,
            Err(_) => return err(lineno, format!("bad matrix number `{}`", toks[0])),
        };
        if matno > m {
            return err(lineno, format!("matrix number {matno} exceeds {m}"));
        }
        let blkno: usize = match toks[1].parse() {
            Ok(v) if v >= 1 => v,
            _ => return err(lineno, format!("bad block number `{}`", toks[1])),
        };
        if blkno > file_blocks.len() {
            return err(lineno, format!("block number {blkno} exceeds {}", file_blocks.len()));
        }
        let i: usize = match toks[2].parse() {
            Ok(v) if v >= 1 => v,
            _ => return err(lineno, format!("bad row index `{}`", toks[2])),
        };
        let j: usize = match toks[3].parse() {
            Ok(v) if v >= 1 => v,
            _ => return err(lineno, format!("bad column index `{}`", toks[3])),
        };
        if i > j {
            return err(lineno, format!("indices must satisfy i <= j (got {i} > {j})"));
        }
        let value: f64 = match toks[4].parse() {
            Ok(v) => v,
            Err(_) => return err(lineno, format!("bad value `{}`", toks[4])),
        };
        let fb = &file_blocks[blkno - 1];
        if i > fb.size || j > fb.size {
            return err(lineno, format!("index ({i},{j}) outside block {blkno} of size {}", fb.size));
        }
        if fb.diagonal && i != j {
            return err(lineno, format!("off-diagonal entry ({i},{j}) in diagonal block {blkno}"));
        }
        if let Some(prev) = seen.insert((matno, blkno, i, j), lineno) {
            return err(
                lineno,
                format!("duplicate entry ({matno},{blkno},{i},{j}); first seen at line {prev}"),
            );
        }
        // map into the expanded structure; values are negated (A = −F, C = −F₀)
        let (blk, r, c) =
            if fb.diagonal { (fb.base + i - 1, 0, 0) } else { (fb.base, j - 1, i - 1) };
        if matno == 0 {
            c_mat.set(blk, r, c, -value);
        } else {
            a_mats[matno - 1].set(blk, r, c, -value);
        }
    }

    ConicProblem::new(structure, c_mat, a_mats, b).map_err(|e| ParseError {
        line: 0,
        message: format!("parsed data does not form a valid problem: {e}"),
    })
}

/// Serialize a problem. Runs of two or more size-1 blocks are coalesced into
/// diagonal (negative) block entries; values are printed with 17 significant
/// digits so the round trip is exact; entries are ordered canonically.
pub fn write_sdpa(p: &ConicProblem) -> String {
    let sizes = p.structure().sizes();
    // group structure blocks into file blocks
    let mut file_blocks: Vec<(usize, usize, bool)> = Vec::new(); // (base, size, diagonal)
    let mut i = 0;
    while i < sizes.len() {
        if sizes[i] == 1 {
            let mut run = 1;
            while i + run < sizes.len() && sizes[i + run] == 1 {
                run += 1;
            }
            if run >= 2 {
                file_blocks.push((i, run, true));
            } else {
                file_blocks.push((i, 1, false));
            }
            i += run;
        } else {
            file_blocks.push((i, sizes[i], false));
            i += 1;
        }
    }
    // structure block index → (file block number, offset within it)
    let mut lookup = vec![(0usize, 0usize); sizes.len()];
    for (fb_idx, &(base, size, diagonal)) in file_blocks.iter().enumerate() {
        if diagonal {
            for off in 0..size {
                lookup[base + off] = (fb_idx + 1, off);
            }
        } else {
            lookup[base] = (fb_idx + 1, 0);
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "* conekit SDPA sparse export");
    let _ = writeln!(out, "{}", p.num_constraints());
    let _ = writeln!(out, "{}", file_blocks.len());
    let bs: Vec<String> = file_blocks
        .iter()
        .map(|&(_, size, diagonal)| {
            if diagonal {
                format!("-{size}")
            } else {
                format!("{size}")
            }
        })
        .collect();
    let _ = writeln!(out, "{}", bs.join(" "));
    let c_line: Vec<String> = p.b().iter().map(|&bi| fmt_value(-bi)).collect();
    let _ = writeln!(out, "{}", c_line.join(" "));

    // entries: (matno, blkno, i, j, value) with value = −stored
    let mut entries: Vec<(usize, usize, usize, usize, f64)> = Vec::new();
    let push_matrix = |matno: usize, mat: &BlockSymMatrix, entries: &mut Vec<_>| {
        for (blk, r, c, v) in mat.lower_entries() {
            if v == 0.0 {
                continue;
            }
            let (fb, off) = lookup[blk];
            let (i, j) = if file_blocks[fb - 1].2 {
                (off + 1, off + 1) // diagonal block scalar
            } else {
                (c + 1, r + 1) // file stores the upper triangle, i ≤ j
            };
            entries.push((matno, fb, i, j, -v));
        }
    };
    push_matrix(0, p.c(), &mut entries);
    for (k, a) in p.constraints().iter().enumerate() {
        push_matrix(k + 1, a, &mut entries);
    }
    entries.sort_by_key(|e| (e.0, e.1, e.2, e.3));
    for (matno, blkno, i, j, v) in entries {
        let _ = writeln!(out, "{matno} {blkno} {i} {j} {}", fmt_value(v));
    }
    out
}

fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}
