//! Function files.
//!
//! Radial tables are CSV with header `norm,value`; finitely supported
//! functions are CSV with header `path,value`, where `path` is a vertex
//! address such as `0/2/1` (empty or `/` for the root). Values are
//! decimal literals read at the working precision.

use std::io::{Read, Write};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::TreeParams;
use crate::harness::TABLE_DIGITS;
use crate::lorentz::{FiniteFunction, RadialFunction};
use crate::numerics::LogScalar;

#[derive(Deserialize)]
struct RadialRow {
    norm: usize,
    value: String,
}

#[derive(Deserialize)]
struct FiniteRow {
    path: String,
    value: String,
}

/// Norms may come in any order; missing norms up to the largest one are zero.
pub fn read_radial_csv<R: Read>(reader: R, tree: TreeParams) -> Result<RadialFunction> {
    let k = tree.k();
    let mut rdr = csv::Reader::from_reader(reader);
    let mut values: Vec<Option<LogScalar>> = Vec::new();
    for row in rdr.deserialize() {
        let row: RadialRow = row?;
        if row.norm >= values.len() {
            values.resize(row.norm + 1, None);
        }
        if values[row.norm].is_some() {
            return Err(Error::Format(format!("norm {} listed twice", row.norm)));
        }
        values[row.norm] = Some(LogScalar::parse(&row.value, k)?);
    }
    let values = values
        .into_iter()
        .map(|v| v.unwrap_or_else(|| LogScalar::zero(k)))
        .collect();
    RadialFunction::new(tree, values)
}

pub fn read_finite_csv<R: Read>(reader: R, tree: TreeParams) -> Result<FiniteFunction> {
    let k = tree.k();
    let mut rdr = csv::Reader::from_reader(reader);
    let mut f = FiniteFunction::zero(tree);
    let mut seen = std::collections::BTreeSet::new();
    for row in rdr.deserialize() {
        let row: FiniteRow = row?;
        let x = tree.parse_vertex(&row.path)?;
        if !seen.insert(x.clone()) {
            return Err(Error::Format(format!("vertex {x} listed twice")));
        }
        f.insert(x, LogScalar::parse(&row.value, k)?)?;
    }
    Ok(f)
}

pub fn write_radial_csv<W: Write>(writer: W, f: &RadialFunction) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["norm", "value"])?;
    for (n, v) in f.values().iter().enumerate() {
        w.write_record([n.to_string(), v.to_sci(TABLE_DIGITS)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_finite_csv<W: Write>(writer: W, f: &FiniteFunction) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["path", "value"])?;
    for (x, v) in f.iter() {
        w.write_record([x.to_string(), v.to_sci(TABLE_DIGITS)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_round_trip() {
        let tree = TreeParams::new(2).unwrap();
        let f = read_radial_csv("norm,value\n2,0.5\n0,3\n".as_bytes(), tree).unwrap();
        assert_eq!(f.values().len(), 3);
        assert!(f.values()[1].is_zero());
        let mut out = Vec::new();
        write_radial_csv(&mut out, &f).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "norm,value\n0,3.00000000000000e0\n1,0.00000000000000e0\n2,5.00000000000000e-1\n"
        );
        let g = read_radial_csv(text.as_bytes(), tree).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn finite_round_trip() {
        let tree = TreeParams::new(3).unwrap();
        let f = read_finite_csv("path,value\n/,1\n0/2,1e-300\n3,7\n".as_bytes(), tree).unwrap();
        assert_eq!(f.len(), 3);
        let mut out = Vec::new();
        write_finite_csv(&mut out, &f).unwrap();
        let g = read_finite_csv(out.as_slice(), tree).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_bad_rows() {
        let tree = TreeParams::new(2).unwrap();
        assert!(read_radial_csv("norm,value\n0,-1\n".as_bytes(), tree).is_err());
        assert!(read_radial_csv("norm,value\n0,1\n0,2\n".as_bytes(), tree).is_err());
        assert!(read_radial_csv("norm,value\n0,abc\n".as_bytes(), tree).is_err());
        assert!(read_finite_csv("path,value\n0/3,1\n".as_bytes(), tree).is_err());
    }
}
