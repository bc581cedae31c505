//! Output files: field CSVs, 16-bit PGM snapshots and the checksum manifest.

use crate::error::{Error, Result};
use crate::geometry::Point;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

pub const CSV_HEADER: &str = "x,y,t,re,im";

/// One field sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRow {
    pub x: Point,
    pub t: f64,
    pub value: C64,
}

/// 17 significant digits: enough to round-trip every f64.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(path: &Path, rows: &[FieldRow]) -> Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(f, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            f,
            "{},{},{},{},{}",
            num(r.x[0]),
            num(r.x[1]),
            num(r.t),
            num(r.value.re),
            num(r.value.im)
        )?;
    }
    f.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<FieldRow>> {
    let bad = |line: usize, m: &str| Error::Domain(format!("{}:{line}: {m}", path.display()));
    let mut lines = BufReader::new(fs::File::open(path)?).lines();
    if lines.next().transpose()?.as_deref() != Some(CSV_HEADER) {
        return Err(bad(1, "missing header"));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad(i + 2, "unparsable number"))?;
        if v.len() != 5 {
            return Err(bad(i + 2, "expected 5 columns"));
        }
        rows.push(FieldRow {
            x: [v[0], v[1]],
            t: v[2],
            value: C64::new(v[3], v[4]),
        });
    }
    Ok(rows)
}

/// Scale recorded next to every PGM so gray levels map back to values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PgmScale {
    pub min: f64,
    pub max: f64,
    pub t: f64,
    pub width: usize,
    pub height: usize,
}

/// Gray levels for `values` (row-major, first row at the top). A constant
/// field maps to mid-gray.
pub fn gray_levels(values: &[f64]) -> (Vec<u16>, f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let g = values
        .iter()
        .map(|&v| {
            if span > 0.0 {
                ((v - min) / span * 65535.0).round() as u16
            } else {
                32768
            }
        })
        .collect();
    (g, min, max)
}

/// Binary 16-bit PGM (big-endian samples) plus a `.json` sidecar with the
/// scale. Returns both paths.
pub fn write_pgm(path: &Path, values: &[f64], width: usize, height: usize, t: f64) -> Result<(PathBuf, PathBuf)> {
    if values.len() != width * height {
        return Err(Error::Shape(format!("{} values for a {width}x{height} image", values.len())));
    }
    let (g, min, max) = gray_levels(values);
    let mut bytes = format!("P5\n{width} {height}\n65535\n").into_bytes();
    for v in g {
        bytes.extend_from_slice(&v.to_be_bytes());
    }
    fs::write(path, bytes)?;
    let side = path.with_extension("pgm.json");
    let scale = PgmScale {
        min,
        max,
        t,
        width,
        height,
    };
    fs::write(&side, serde_json::to_string_pretty(&scale)?)?;
    Ok((path.to_path_buf(), side))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

/// `manifest.csv` listing every file (relative path, SHA-256).
pub fn write_manifest(dir: &Path, files: &[PathBuf]) -> Result<PathBuf> {
    let mut text = String::from("path,sha256\n");
    for f in files {
        let rel = f.strip_prefix(dir).unwrap_or(f);
        text.push_str(&format!("{},{}\n", rel.display(), sha256_file(f)?));
    }
    let path = dir.join("manifest.csv");
    fs::write(&path, text)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_field_is_mid_gray() {
        let (g, min, max) = gray_levels(&[0.25; 6]);
        assert!(g.iter().all(|&v| v == 32768));
        assert_eq!((min, max), (0.25, 0.25));
        let (g, ..) = gray_levels(&[-1.0, 0.0, 1.0]);
        assert_eq!(g, vec![0, 32768, 65535]);
    }

    #[test]
    fn pgm_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("snap.pgm");
        let (_, side) = write_pgm(&p, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0], 3, 2, 1.5).unwrap();
        let bytes = fs::read(&p).unwrap();
        let head = b"P5\n3 2\n65535\n";
        assert_eq!(&bytes[..head.len()], head);
        assert_eq!(bytes.len(), head.len() + 12);
        assert_eq!(&bytes[head.len()..head.len() + 2], &[0, 0]);
        assert_eq!(&bytes[bytes.len() - 2..], &[0xff, 0xff]);
        let s: PgmScale = serde_json::from_str(&fs::read_to_string(side).unwrap()).unwrap();
        assert_eq!((s.min, s.max, s.t), (0.0, 5.0, 1.5));
        assert!(write_pgm(&p, &[0.0; 5], 3, 2, 0.0).is_err());
    }

    #[test]
    fn manifest_lists_hashes() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.txt");
        fs::write(&a, "abc").unwrap();
        let m = write_manifest(dir.path(), &[a]).unwrap();
        let text = fs::read_to_string(m).unwrap();
        assert_eq!(
            text,
            "path,sha256\na.txt,ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad\n"
        );
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bitwise(vals in prop::collection::vec(
            (any::<f64>(), any::<f64>(), -1e6..1e6f64, any::<f64>(), any::<f64>()), 1..20)
        ) {
            let rows: Vec<FieldRow> = vals
                .iter()
                .filter(|v| [v.0, v.1, v.3, v.4].iter().all(|x| x.is_finite()))
                .map(|&(x, y, t, re, im)| FieldRow { x: [x, y], t, value: C64::new(re, im) })
                .collect();
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("f.csv");
            write_csv(&p, &rows).unwrap();
            let back = read_csv(&p).unwrap();
            prop_assert_eq!(back.len(), rows.len());
            for (a, b) in rows.iter().zip(&back) {
                for (u, v) in [(a.x[0], b.x[0]), (a.x[1], b.x[1]), (a.t, b.t), (a.value.re, b.value.re), (a.value.im, b.value.im)] {
                    prop_assert_eq!(u.to_bits(), v.to_bits());
                }
            }
        }
    }
}
