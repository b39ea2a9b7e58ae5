//! Argument and file parsing: lattice specs, cell lists, rectangles, and
//! the 1-based axis numbering used on the command line.

use std::fs;
use std::path::Path;

use bootlab_core::{parse_cells, CellSet, Error, LatticeSpec, Rect, Result};

/// A spec argument is either inline JSON (starts with `{`) or a path to a
/// JSON file.
pub fn load_spec(arg: &str) -> Result<LatticeSpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)
            .map_err(|e| Error::Parse(format!("cannot read spec file {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad lattice spec: {e}")))
}

/// A cells argument is a path if such a file exists, otherwise inline text
/// in the one-cell-per-line format (use `;` as a line separator inline).
pub fn load_cells(spec: &LatticeSpec, arg: &str) -> Result<CellSet> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg)
            .map_err(|e| Error::Parse(format!("cannot read cells file {arg}: {e}")))?
    } else {
        arg.replace(';', "\n")
    };
    parse_cells(spec, &text)
}

pub fn parse_coords(arg: &str, what: &str) -> Result<Vec<u32>> {
    arg.split(',')
        .map(|f| {
            f.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad {what} coordinate {f:?}")))
        })
        .collect()
}

/// Rectangle syntax `lo1,lo2:hi1,hi2` over the long axes.
pub fn parse_rect(spec: &LatticeSpec, arg: &str) -> Result<Rect> {
    let (lo, hi) = arg
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("rect {arg:?} must look like lo1,lo2:hi1,hi2")))?;
    Rect::new(
        spec,
        parse_coords(lo, "rect low")?,
        parse_coords(hi, "rect high")?,
    )
}

/// Converts a 1-based axis flag to the 0-based index the library uses.
pub fn axis_index(axis: u32, count: usize, what: &str) -> Result<usize> {
    if axis == 0 || axis as usize > count {
        return Err(Error::domain(format!(
            "{what} axis {axis} out of range 1..={count}"
        )));
    }
    Ok(axis as usize - 1)
}

/// Cell list as deterministic coordinate strings, ascending index order.
pub fn cell_strings(spec: &LatticeSpec, set: &CellSet) -> Vec<String> {
    set.iter()
        .map(|idx| {
            spec.cell_of(idx)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}
