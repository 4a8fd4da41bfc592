//! CSV tables. Every file starts with a `# thetaflow <name> v1` line.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::damping::RateFit;
use super::energy::EnergyRecord;
use super::lyapunov::LowBlockRow;
use crate::error::Result;

fn writer(path: &Path, name: &str, header: &[&str]) -> Result<csv::Writer<File>> {
    let mut f = File::create(path)?;
    writeln!(f, "# thetaflow {name} v1")?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(header)?;
    Ok(w)
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_energy(path: &Path, records: &[EnergyRecord]) -> Result<()> {
    let mut w = writer(
        path,
        "energy",
        &["t", "inst_low", "inst_high", "cl_low", "cl_high", "l1_low", "l1_high", "e"],
    )?;
    for r in records {
        w.write_record([r.t, r.inst_low, r.inst_high, r.cl_low, r.cl_high, r.l1_low, r.l1_high, r.e].map(num))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_blocks(path: &Path, rows: &[(f64, Vec<LowBlockRow>)]) -> Result<()> {
    let mut w = writer(
        path,
        "blocks",
        &["t", "j", "b_norm", "v_norm", "lambda_b_norm", "cross", "l2", "f1_norm", "f2_norm"],
    )?;
    for (t, rs) in rows {
        for r in rs {
            let b = &r.block;
            w.write_record([
                num(*t),
                r.j.to_string(),
                num(b.b_norm),
                num(b.v_norm),
                num(b.lambda_b_norm),
                num(b.cross),
                num(b.l2),
                num(r.f1),
                num(r.f2),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, num)
}

pub fn write_rates(path: &Path, fits: &[RateFit]) -> Result<()> {
    let mut w = writer(path, "rates", &["j", "rate", "predicted_re_lambda", "rel_err"])?;
    for f in fits {
        w.write_record([f.j.to_string(), opt(f.rate), num(-f.predicted), opt(f.rel_err())])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_constants(path: &Path, rows: &[(String, f64, String)]) -> Result<()> {
    let mut w = writer(path, "constants", &["check", "constant", "resolution"])?;
    for (name, c, res) in rows {
        w.write_record([name.clone(), num(*c), res.clone()])?;
    }
    w.flush()?;
    Ok(())
}

/// Generic table with a versioned header.
pub fn write_table(path: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = writer(path, name, header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_file_has_versioned_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("energy.csv");
        write_energy(&p, &[EnergyRecord { t: 0.5, e: 1.0, ..Default::default() }]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# thetaflow energy v1"));
        assert_eq!(lines.next(), Some("t,inst_low,inst_high,cl_low,cl_high,l1_low,l1_high,e"));
        assert!(lines.next().unwrap().starts_with("5e-1,"));
    }
}
