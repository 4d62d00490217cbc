//! Decay CSV, fit summary and gnuplot data files.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use super::experiment::{DecayCurve, DecayRow};
use super::fit::FitResult;
use crate::error::{Error, Result};

pub const DECAY_CSV: &str = "decay.csv";
pub const FIT_SUMMARY: &str = "fit.txt";
pub const GNUPLOT_DAT: &str = "decay.dat";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportFiles {
    pub decay_csv: PathBuf,
    pub fit_summary: PathBuf,
    pub gnuplot: PathBuf,
}

pub fn decay_csv_string(curve: &DecayCurve) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &curve.rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_decay_csv<R: Read>(input: R) -> Result<DecayCurve> {
    let mut rd = csv::Reader::from_reader(input);
    let rows = rd.deserialize::<DecayRow>().collect::<std::result::Result<Vec<_>, _>>()?;
    DecayCurve::new(rows)
}

pub fn fit_summary_string(curve: &DecayCurve, fit: &FitResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "amplitude = {}", fit.amplitude);
    let _ = writeln!(s, "amplitude_stderr = {}", fit.amplitude_stderr);
    let _ = writeln!(s, "tau_s = {}", fit.tau_s);
    let _ = writeln!(s, "tau_stderr_s = {}", fit.tau_stderr_s);
    if let (Some(b), Some(db)) = (fit.offset, fit.offset_stderr) {
        let _ = writeln!(s, "offset = {b}");
        let _ = writeln!(s, "offset_stderr = {db}");
    }
    let _ = writeln!(s, "residual_rms = {}", fit.residual_rms);
    match curve.entangled_until_s() {
        Some(t) => {
            let _ = writeln!(s, "entangled_until_s = {t}");
        }
        None => s.push_str("entangled_until_s = none\n"),
    }
    for f in &curve.failures {
        let _ = writeln!(s, "failed_point t_s = {}: {}", f.t_s, f.reason);
    }
    s
}

pub fn gnuplot_string(curve: &DecayCurve, fit: &FitResult) -> String {
    let mut s = String::from("# t_s fmin stderr fit\n");
    for r in &curve.rows {
        let _ = writeln!(s, "{} {} {} {}", r.t_s, r.fmin, r.stderr, fit.predict(r.t_s));
    }
    s
}

/// Writes the three report files into `dir`. Nothing is written unless
/// every file can be produced.
pub fn emit_report(curve: &DecayCurve, fit: &FitResult, dir: &Path) -> Result<ReportFiles> {
    if curve.is_empty() {
        return Err(Error::Precondition("decay curve is empty".into()));
    }
    curve.validate()?;
    if !(fit.tau_s > 0.0 && fit.tau_s.is_finite()) {
        return Err(Error::Precondition(format!("fit has invalid tau {}", fit.tau_s)));
    }
    let contents = [
        (DECAY_CSV, decay_csv_string(curve)?),
        (FIT_SUMMARY, fit_summary_string(curve, fit)),
        (GNUPLOT_DAT, gnuplot_string(curve, fit)),
    ];
    fs::create_dir_all(dir)?;
    let mut staged = Vec::new();
    for (name, text) in &contents {
        let tmp = dir.join(format!(".{name}.tmp"));
        if let Err(e) = fs::write(&tmp, text) {
            for p in staged.iter().chain(std::iter::once(&tmp)) {
                let _ = fs::remove_file(p);
            }
            return Err(e.into());
        }
        staged.push(tmp);
    }
    for ((name, _), tmp) in contents.iter().zip(&staged) {
        fs::rename(tmp, dir.join(name))?;
    }
    Ok(ReportFiles {
        decay_csv: dir.join(DECAY_CSV),
        fit_summary: dir.join(FIT_SUMMARY),
        gnuplot: dir.join(GNUPLOT_DAT),
    })
}
