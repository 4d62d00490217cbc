//! CSV forms of count records and parity scans.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::parity::ParityScan;
use super::setting::{MeasurementRecord, MeasurementSetting, OutcomeCounts, Rot};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct CountRow {
    setting_rot1: String,
    setting_rot2: String,
    n00: u64,
    n01: u64,
    n10: u64,
    n11: u64,
    shots: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ParityRow {
    delta_phi_rad: f64,
    parity: f64,
    shots: u64,
}

pub fn write_counts_csv<W: Write>(records: &[MeasurementRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        let n = r.counts.0;
        w.serialize(CountRow {
            setting_rot1: r.setting.rot1.as_str().into(),
            setting_rot2: r.setting.rot2.as_str().into(),
            n00: n[0],
            n01: n[1],
            n10: n[2],
            n11: n[3],
            shots: r.shots(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_counts_csv<R: Read>(input: R) -> Result<Vec<MeasurementRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in rd.deserialize::<CountRow>() {
        let row = row?;
        let counts = OutcomeCounts([row.n00, row.n01, row.n10, row.n11]);
        if counts.shots() != row.shots {
            return Err(Error::Parse(format!(
                "counts sum to {} but shots column says {}",
                counts.shots(),
                row.shots
            )));
        }
        out.push(MeasurementRecord {
            setting: MeasurementSetting::new(row.setting_rot1.parse::<Rot>()?, row.setting_rot2.parse::<Rot>()?),
            counts,
        });
    }
    Ok(out)
}

pub fn write_parity_csv<W: Write>(scan: &ParityScan, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for ((d, p), c) in scan.relative_phases.iter().zip(&scan.parities).zip(&scan.counts) {
        w.serialize(ParityRow {
            delta_phi_rad: *d,
            parity: *p,
            shots: c.shots(),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `(delta_phi_rad, parity, shots)` rows.
pub fn read_parity_csv<R: Read>(input: R) -> Result<Vec<(f64, f64, u64)>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in rd.deserialize::<ParityRow>() {
        let row = row?;
        if !(-1.0..=1.0).contains(&row.parity) {
            return Err(Error::Parse(format!("parity {} outside [-1, 1]", row.parity)));
        }
        out.push((row.delta_phi_rad, row.parity, row.shots));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::bell_psi;
    use crate::rng::SeedStream;
    use crate::tomo::parity::{default_phase_grid, simulate_parity_scan};
    use crate::tomo::sampling::{simulate_tomography, Readout};

    #[test]
    fn counts_round_trip_and_header() {
        let recs = simulate_tomography(&bell_psi(0.0), 50, Readout::ideal(), &mut SeedStream::new(1).rng(0));
        let mut buf = Vec::new();
        write_counts_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("setting_rot1,setting_rot2,n00,n01,n10,n11,shots\nId,Id,0,"));
        assert_eq!(read_counts_csv(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn rejects_inconsistent_shots() {
        let text = "setting_rot1,setting_rot2,n00,n01,n10,n11,shots\nId,Id,1,2,3,4,11\n";
        assert!(read_counts_csv(text.as_bytes()).is_err());
    }

    #[test]
    fn parity_csv() {
        let scan = simulate_parity_scan(&bell_psi(0.0), &default_phase_grid(4), 10, 0.0, 0.0, &mut SeedStream::new(2).rng(0));
        let mut buf = Vec::new();
        write_parity_csv(&scan, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("delta_phi_rad,parity,shots\n0.0,"));
        let rows = read_parity_csv(&buf[..]).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].2, 10);
    }
}
