//! CSV export of traced branches, one row per polyline vertex.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::fmt17;
use crate::error::Result;
use crate::tracer::Branch;

pub const COLUMNS: [&str; 11] = [
    "J",
    "n",
    "m",
    "component_id",
    "point_index",
    "t",
    "b",
    "lambda",
    "lambda_phys",
    "n_real_zeros",
    "beta",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusRow {
    #[serde(rename = "J")]
    pub j: usize,
    pub n: usize,
    pub m: usize,
    pub component_id: usize,
    pub point_index: usize,
    pub t: f64,
    pub b: f64,
    pub lambda: f64,
    pub lambda_phys: f64,
    pub n_real_zeros: usize,
    pub beta: Option<f64>,
}

pub fn rows_from_branches(j: usize, branches: &[Branch]) -> Vec<LocusRow> {
    branches
        .iter()
        .flat_map(|br| {
            br.points.iter().enumerate().map(move |(i, p)| LocusRow {
                j,
                n: br.label.n,
                m: br.label.m,
                component_id: br.component_id,
                point_index: i,
                t: p.t,
                b: p.b,
                lambda: p.lambda,
                lambda_phys: p.lambda_phys,
                n_real_zeros: p.classification.n_real,
                beta: p.beta,
            })
        })
        .collect()
}

pub fn write_rows<W: Write>(out: W, rows: &[LocusRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record([
            r.j.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.component_id.to_string(),
            r.point_index.to_string(),
            fmt17(r.t),
            fmt17(r.b),
            fmt17(r.lambda),
            fmt17(r.lambda_phys),
            r.n_real_zeros.to_string(),
            r.beta.map(fmt17).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows back; the header must list exactly [`COLUMNS`] in order.
pub fn read_rows<R: Read>(input: R) -> Result<Vec<LocusRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != COLUMNS {
        return Err(crate::Error::InvalidInput(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let rows = vec![
            LocusRow {
                j: 3,
                n: 2,
                m: 1,
                component_id: 1,
                point_index: 0,
                t: 0.0,
                b: 0.1 + 0.2,
                lambda: -1.0 / 3.0,
                lambda_phys: 1.0 / 3.0,
                n_real_zeros: 0,
                beta: Some(std::f64::consts::FRAC_PI_6),
            },
            LocusRow {
                j: 3,
                n: 2,
                m: 1,
                component_id: 1,
                point_index: 1,
                t: 1e-300,
                b: 400.0,
                lambda: -159_999.5,
                lambda_phys: 159_999.5,
                n_real_zeros: 0,
                beta: None,
            },
        ];
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("J,n,m,component_id,point_index,t,b,lambda,lambda_phys,n_real_zeros,beta\n"));
        assert!(text.lines().nth(2).unwrap().ends_with(",0,"));
        assert_eq!(read_rows(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_rows("b,lambda\n1,2\n".as_bytes()).is_err());
        assert!(read_rows(format!("{}\n1,2\n", COLUMNS.join(",")).as_bytes()).is_err());
    }
}
