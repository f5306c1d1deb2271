//! Text serialization of lattice fields.
//!
//! ```text
//! gaugelab-field 1
//! dim 2
//! points 64 64
//! spacing 1.5625e-1 1.5625e-1
//! origin -5e0 -5e0
//! boundary periodic
//! kind complex
//! components 2
//! values
//! <re> <im>
//! ...
//! ```
//!
//! Values follow the header one per line, component block after component
//! block, each block row-major over the grid. A `real` field stores only the
//! real part per line. Floats are written in Rust's shortest round-trip form,
//! so a write/read cycle is lossless.

use std::io::{BufRead, Write};

use crate::grid::{Boundary, Grid, ScalarField, SpinorField, VectorField};
use crate::{Error, Result, C64};

const MAGIC: &str = "gaugelab-field";
const VERSION: u32 = 1;

/// A grid plus one or more sample blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDump {
    pub grid: Grid,
    pub real: bool,
    pub components: Vec<Vec<C64>>,
}

impl FieldDump {
    pub fn scalar(f: &ScalarField) -> Self {
        Self {
            grid: f.grid().clone(),
            real: f.is_real(),
            components: vec![f.values().to_vec()],
        }
    }

    pub fn vector(v: &VectorField) -> Self {
        Self {
            grid: v.grid().clone(),
            real: v.components().iter().all(ScalarField::is_real),
            components: v.components().iter().map(|c| c.values().to_vec()).collect(),
        }
    }

    pub fn spinor(s: &SpinorField) -> Self {
        Self {
            grid: crate::grid::LatticeField::grid(s).clone(),
            real: false,
            components: vec![s.upper().to_vec(), s.lower().to_vec()],
        }
    }

    pub fn into_scalar(self) -> Result<ScalarField> {
        if self.components.len() != 1 {
            return Err(Error::Parse(format!("expected 1 component, found {}", self.components.len())));
        }
        let real = self.real;
        let values = self.components.into_iter().next().unwrap_or_default();
        if real {
            ScalarField::from_real(&self.grid, values.iter().map(|v| v.re).collect())
        } else {
            ScalarField::new(&self.grid, values)
        }
    }

    pub fn into_vector(self) -> Result<VectorField> {
        let grid = self.grid.clone();
        let real = self.real;
        VectorField::new(
            self.components
                .into_iter()
                .map(|c| {
                    if real {
                        ScalarField::from_real(&grid, c.iter().map(|v| v.re).collect())
                    } else {
                        ScalarField::new(&grid, c)
                    }
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let g = &self.grid;
        writeln!(w, "{MAGIC} {VERSION}")?;
        writeln!(w, "dim {}", g.dim())?;
        writeln!(w, "points {}", join(g.points().iter().map(|p| p.to_string())))?;
        writeln!(w, "spacing {}", join(g.spacing().iter().map(|h| format!("{h:e}"))))?;
        writeln!(w, "origin {}", join(g.origin().iter().map(|o| format!("{o:e}"))))?;
        writeln!(w, "boundary {}", g.boundary())?;
        writeln!(w, "kind {}", if self.real { "real" } else { "complex" })?;
        writeln!(w, "components {}", self.components.len())?;
        writeln!(w, "values")?;
        for block in &self.components {
            for v in block {
                if self.real {
                    writeln!(w, "{:e}", v.re)?;
                } else {
                    writeln!(w, "{:e} {:e}", v.re, v.im)?;
                }
            }
        }
        Ok(())
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = || -> Result<String> {
            loop {
                match lines.next() {
                    Some(line) => {
                        let line = line?;
                        let t = line.trim();
                        if !t.is_empty() && !t.starts_with('#') {
                            return Ok(t.to_string());
                        }
                    }
                    None => return Err(Error::Parse("unexpected end of field file".into())),
                }
            }
        };
        let head = next()?;
        if head != format!("{MAGIC} {VERSION}") {
            return Err(Error::Parse(format!("bad header line '{head}'")));
        }
        let dim: usize = keyed(&next()?, "dim")?.parse().map_err(perr)?;
        let points: Vec<usize> = parse_list(&keyed(&next()?, "points")?)?;
        let spacing: Vec<f64> = parse_list(&keyed(&next()?, "spacing")?)?;
        let origin: Vec<f64> = parse_list(&keyed(&next()?, "origin")?)?;
        let boundary: Boundary = keyed(&next()?, "boundary")?.parse()?;
        let real = match keyed(&next()?, "kind")?.as_str() {
            "real" => true,
            "complex" => false,
            other => return Err(Error::Parse(format!("unknown kind '{other}'"))),
        };
        let ncomp: usize = keyed(&next()?, "components")?.parse().map_err(perr)?;
        if next()? != "values" {
            return Err(Error::Parse("missing 'values' marker".into()));
        }
        if points.len() != dim {
            return Err(Error::Parse("points list does not match dim".into()));
        }
        let grid = Grid::new(&points, &spacing, &origin, boundary)?;
        let mut components = Vec::with_capacity(ncomp);
        for _ in 0..ncomp {
            let mut block = Vec::with_capacity(grid.len());
            for _ in 0..grid.len() {
                let line = next()?;
                let mut it = line.split_whitespace();
                let re: f64 = it.next().ok_or_else(|| Error::Parse("empty value line".into()))?.parse().map_err(perr)?;
                let im: f64 = if real {
                    0.0
                } else {
                    it.next()
                        .ok_or_else(|| Error::Parse("complex value needs two numbers".into()))?
                        .parse()
                        .map_err(perr)?
                };
                block.push(C64::new(re, im));
            }
            components.push(block);
        }
        Ok(Self { grid, real, components })
    }
}

fn join<I: Iterator<Item = String>>(it: I) -> String {
    it.collect::<Vec<_>>().join(" ")
}

fn perr<E: std::fmt::Display>(e: E) -> Error {
    Error::Parse(e.to_string())
}

fn keyed(line: &str, key: &str) -> Result<String> {
    match line.split_once(char::is_whitespace) {
        Some((k, rest)) if k == key => Ok(rest.trim().to_string()),
        _ => Err(Error::Parse(format!("expected '{key} ...', found '{line}'"))),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split_whitespace().map(|t| t.parse::<T>().map_err(perr)).collect()
}
