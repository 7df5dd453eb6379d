//! Text field files: a header line `k N`, then `C(3,k)` blocks of `N³` values, x fastest.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use super::form::{component_count, Form};
use super::grid::Grid;
use crate::{Error, Result};

pub fn format_form(form: &Form) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", form.degree(), form.grid().n());
    for comp in form.components() {
        for row in comp.chunks(form.grid().n()) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    out
}

/// Parses a field file. The grid is created from the header unless `grid` is given,
/// in which case its size must match.
pub fn parse_form(text: &str, grid: Option<&Arc<Grid>>) -> Result<Form> {
    let mut tokens = text.split_whitespace();
    let mut header = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what} in header")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad {what} in header")))
    };
    let degree = header("degree")?;
    let n = header("N")?;
    if degree > 3 {
        return Err(Error::Parse(format!("degree {degree} out of range")));
    }
    let grid = match grid {
        Some(g) if g.n() != n => return Err(Error::GridMismatch),
        Some(g) => g.clone(),
        None => Grid::new(n)?,
    };
    let values: Vec<f64> = tokens
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad value {t:?}"))))
        .collect::<Result<_>>()?;
    let expected = component_count(degree) * grid.len();
    if values.len() != expected {
        return Err(Error::Parse(format!("expected {expected} values, found {}", values.len())));
    }
    let comps = values.chunks(grid.len()).map(<[f64]>::to_vec).collect();
    Form::from_components(&grid, degree, comps)
}

pub fn write_form(path: impl AsRef<Path>, form: &Form) -> Result<()> {
    fs::write(path, format_form(form))?;
    Ok(())
}

pub fn read_form(path: impl AsRef<Path>, grid: Option<&Arc<Grid>>) -> Result<Form> {
    parse_form(&fs::read_to_string(path)?, grid)
}
