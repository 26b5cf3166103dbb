//! Path bundles on disk.
//!
//! CSV: a header `t,<name>,...` then one row per grid point.
//!
//! Binary: the 8 bytes `ITOPATH1`, the row count and column count as
//! little-endian `u64`, then `rows × cols` little-endian `f64` in row-major
//! order. Column 0 holds the times, the remaining columns the drivers.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::numeric::path::{Grid, SamplePath};

pub const BINARY_MAGIC: &[u8; 8] = b"ITOPATH1";

/// Named paths on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBundle {
    pub names: Vec<String>,
    pub paths: Vec<SamplePath>,
}

impl PathBundle {
    pub fn new(names: Vec<String>, paths: Vec<SamplePath>) -> Result<Self> {
        if names.len() != paths.len() {
            return Err(Error::DimensionMismatch { expected: names.len(), found: paths.len() });
        }
        if let Some(first) = paths.first() {
            if paths.iter().any(|p| p.check_grid(first).is_err()) {
                return Err(Error::GridMismatch);
            }
        }
        Ok(PathBundle { names, paths })
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.paths.first().map(SamplePath::grid)
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        let Some(grid) = self.grid() else { return Vec::new() };
        grid.times()
            .iter()
            .enumerate()
            .map(|(m, &t)| std::iter::once(t).chain(self.paths.iter().map(|p| p.values()[m])).collect())
            .collect()
    }

    fn from_columns(names: Vec<String>, times: Vec<f64>, columns: Vec<Vec<f64>>) -> Result<Self> {
        let grid = Grid::new(times)?;
        let paths = columns
            .into_iter()
            .map(|c| SamplePath::new(grid.clone(), c))
            .collect::<Result<Vec<_>>>()?;
        PathBundle::new(names, paths)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let header = std::iter::once("t".to_string()).chain(self.names.iter().cloned());
        out.write_record(header).map_err(csv_err)?;
        for row in self.rows() {
            out.write_record(row.iter().map(|v| format!("{v:?}"))).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let headers = rd.headers().map_err(csv_err)?.clone();
        if headers.get(0).map(str::trim) != Some("t") {
            return Err(Error::Format("first CSV column must be `t`".into()));
        }
        let names: Vec<String> = headers.iter().skip(1).map(|s| s.trim().to_string()).collect();
        let mut times = Vec::new();
        let mut columns = vec![Vec::new(); names.len()];
        for (line, rec) in rd.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            if rec.len() != names.len() + 1 {
                return Err(Error::Format(format!("row {} has {} fields, expected {}", line + 2, rec.len(), names.len() + 1)));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| Error::Format(format!("row {}: bad number {s:?}", line + 2)))
            };
            times.push(parse(&rec[0])?);
            for (c, field) in columns.iter_mut().zip(rec.iter().skip(1)) {
                c.push(parse(field)?);
            }
        }
        PathBundle::from_columns(names, times, columns)
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let rows = self.rows();
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&(rows.len() as u64).to_le_bytes())?;
        w.write_all(&(self.paths.len() as u64 + 1).to_le_bytes())?;
        for row in rows {
            for v in row {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Driver names are not stored in the binary format; they come back as
    /// `x1, x2, ...`.
    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != BINARY_MAGIC {
            return Err(Error::Format("missing ITOPATH1 header".into()));
        }
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let rows = u64::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let cols = u64::from_le_bytes(word) as usize;
        if cols == 0 {
            return Err(Error::Format("binary path file without a time column".into()));
        }
        let mut data = Vec::new();
        r.read_to_end(&mut data)?;
        if data.len() != rows * cols * 8 {
            return Err(Error::Format(format!("expected {} data bytes, found {}", rows * cols * 8, data.len())));
        }
        let values: Vec<f64> = data
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        let times = values.iter().step_by(cols).copied().collect();
        let columns = (1..cols).map(|c| values.iter().skip(c).step_by(cols).copied().collect()).collect();
        let names = (1..cols).map(|c| format!("x{c}")).collect();
        PathBundle::from_columns(names, times, columns)
    }

    /// Writes CSV, or the binary format when the extension is `.bin`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        if is_binary(path) {
            self.write_binary(f)
        } else {
            self.write_csv(f)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        if is_binary(path) {
            PathBundle::read_binary(f)
        } else {
            PathBundle::read_csv(f)
        }
    }
}

fn is_binary(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "bin")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::path::{simulate, DriverSpec, PathSeed};

    fn bundle() -> PathBundle {
        let g = Grid::uniform(1.0, 16).unwrap();
        let w = simulate(&DriverSpec::Brownian { sigma: 1.0 }, &g, PathSeed::new(1, 0, 0)).unwrap();
        let n = simulate(&DriverSpec::Poisson { lambda: 3.0 }, &g, PathSeed::new(1, 0, 1)).unwrap();
        PathBundle::new(vec!["w".into(), "n".into()], vec![w, n]).unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let b = bundle();
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,w,n\n0.0,0.0,0.0\n"));
        assert_eq!(PathBundle::read_csv(buf.as_slice()).unwrap(), b);
    }

    #[test]
    fn binary_round_trip() {
        let b = bundle();
        let mut buf = Vec::new();
        b.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..8], b"ITOPATH1");
        assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), 17);
        assert_eq!(u64::from_le_bytes(buf[16..24].try_into().unwrap()), 3);
        assert_eq!(buf.len(), 24 + 17 * 3 * 8);
        let back = PathBundle::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back.paths, b.paths);
        assert_eq!(back.names, vec!["x1", "x2"]);
    }

    #[test]
    fn corrupt_inputs() {
        assert!(PathBundle::read_binary(&b"ITOPATH2"[..]).is_err());
        let mut buf = Vec::new();
        bundle().write_binary(&mut buf).unwrap();
        buf.pop();
        assert!(PathBundle::read_binary(buf.as_slice()).is_err());
        assert!(PathBundle::read_csv("x,y\n0,0\n".as_bytes()).is_err());
        assert!(PathBundle::read_csv("t,y\n0,1\n".as_bytes()).is_err());
        assert!(PathBundle::read_csv("t,y\n0,0\n1,abc\n".as_bytes()).is_err());
    }

    #[test]
    fn files_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let b = bundle();
        for name in ["p.csv", "p.bin"] {
            let path = dir.path().join(name);
            b.save(&path).unwrap();
            assert_eq!(PathBundle::load(&path).unwrap().paths, b.paths);
        }
    }
}
