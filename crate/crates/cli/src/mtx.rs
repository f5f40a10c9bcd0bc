//! Matrix Market reader and writer for dense complex matrices.
//!
//! Array and coordinate layouts with real, integer, or complex fields are
//! accepted (symmetry `general` only); files are written in array complex
//! layout, column-major, one `re im` pair per line, with shortest
//! round-tripping number formatting.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use singpencil::CMat;

pub fn read_matrix(path: &Path) -> Result<CMat> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_matrix(&text).with_context(|| format!("cannot parse {}", path.display()))
}

pub fn parse_matrix(text: &str) -> Result<CMat> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow!("empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        bail!("not a Matrix Market matrix header: {header}");
    }
    let layout = tokens[2].as_str();
    let field = tokens[3].as_str();
    let symmetry = tokens[4].as_str();
    if symmetry != "general" {
        bail!("unsupported symmetry {symmetry:?}; only general is handled");
    }
    let values_per_entry = match field {
        "complex" => 2,
        "real" | "integer" => 1,
        other => bail!("unsupported field {other:?}"),
    };

    let mut data = lines.filter(|l| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let size_line = data.next().ok_or_else(|| anyhow!("missing size line"))?;
    let dims: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| anyhow!("bad size {t:?}: {e}")))
        .collect::<Result<_>>()?;

    match layout {
        "array" => {
            let [rows, cols] = dims[..] else {
                bail!("array size line needs 2 numbers");
            };
            let mut out = CMat::zeros(rows, cols);
            let mut values = Vec::with_capacity(rows * cols * values_per_entry);
            for line in data {
                for tok in line.split_whitespace() {
                    values.push(
                        tok.parse::<f64>()
                            .map_err(|e| anyhow!("bad number {tok:?}: {e}"))?,
                    );
                }
            }
            if values.len() != rows * cols * values_per_entry {
                bail!(
                    "expected {} values, found {}",
                    rows * cols * values_per_entry,
                    values.len()
                );
            }
            for idx in 0..rows * cols {
                let (j, i) = (idx / rows, idx % rows);
                out[(i, j)] = if values_per_entry == 2 {
                    Complex64::new(values[2 * idx], values[2 * idx + 1])
                } else {
                    Complex64::new(values[idx], 0.0)
                };
            }
            Ok(out)
        }
        "coordinate" => {
            let [rows, cols, nnz] = dims[..] else {
                bail!("coordinate size line needs 3 numbers");
            };
            let mut out = CMat::zeros(rows, cols);
            let mut count = 0usize;
            for line in data {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 2 + values_per_entry {
                    bail!("bad coordinate entry: {line:?}");
                }
                let i: usize = toks[0].parse()?;
                let j: usize = toks[1].parse()?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    bail!("coordinate ({i}, {j}) out of range for {rows}x{cols}");
                }
                let re: f64 = toks[2].parse()?;
                let im: f64 = if values_per_entry == 2 {
                    toks[3].parse()?
                } else {
                    0.0
                };
                out[(i - 1, j - 1)] = Complex64::new(re, im);
                count += 1;
            }
            if count != nnz {
                bail!("expected {nnz} entries, found {count}");
            }
            Ok(out)
        }
        other => bail!("unsupported layout {other:?}"),
    }
}

pub fn write_matrix(path: &Path, m: &CMat) -> Result<()> {
    fs::write(path, render_matrix(m))
        .with_context(|| format!("cannot write {}", path.display()))
}

pub fn render_matrix(m: &CMat) -> String {
    let mut out = String::from("%%MatrixMarket matrix array complex general\n");
    out.push_str(&format!("{} {}\n", m.nrows(), m.ncols()));
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            out.push_str(&format!("{} {}\n", v.re, v.im));
        }
    }
    out
}
