use std::io::{Read, Write};

use crate::error::{Error, Result};

use super::{RadialFunction, RadialGrid};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

/// Writes `r,value` rows with a header. `comments` become `# ` lines before the header.
pub fn write_profile_csv<W: Write>(u: &RadialFunction, comments: &[String], out: W) -> Result<()> {
    let mut out = out;
    for c in comments {
        writeln!(out, "# {c}").map_err(io_err)?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "value"])?;
    for (r, v) in u.grid().nodes().iter().zip(u.values()) {
        w.write_record([fmt_f64(*r), fmt_f64(*v)])?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

/// Reads `r,value` CSV (comment lines start with `#`). The grid is taken from the `r` column;
/// the profile is Dirichlet when its value at `r = 1` is zero.
pub fn read_profile_csv<R: Read>(input: R) -> Result<RadialFunction> {
    let (r, v) = read_two_columns(input, "value")?;
    let dirichlet = v.last() == Some(&0.0);
    let grid = RadialGrid::from_nodes(r)?;
    RadialFunction::new(grid, v, dirichlet)
}

pub(crate) fn read_two_columns<R: Read>(input: R, second: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (ir, iv) = match (col("r"), col(second).or_else(|| col("value"))) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Parse(format!("expected columns `r,{second}`, found {headers:?}"))),
    };
    let mut rs = Vec::new();
    let mut vs = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            let s = rec.get(i).unwrap_or("");
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("row {}: cannot parse `{s}` as a number", line + 1)))
        };
        rs.push(parse(ir)?);
        vs.push(parse(iv)?);
    }
    Ok((rs, vs))
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io { path: "<stream>".into(), source: e }
}
