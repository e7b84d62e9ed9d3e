use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One unbinned measurement as read from disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RawPoint {
    /// Separation from the electrostatic calibration, before correction, m.
    pub d_raw: f64,
    /// Attractive force, positive, N.
    pub force: f64,
    /// Statistical 1σ, N.
    pub sigma: f64,
    /// Minimizing potential, V. Kept for fidelity, unused by the fit.
    pub v_m: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct InputRow {
    d_um: f64,
    #[serde(rename = "force_pN")]
    force_pn: f64,
    #[serde(rename = "sigma_pN")]
    sigma_pn: f64,
    #[serde(rename = "vm_mV", default)]
    vm_mv: Option<f64>,
}

/// Parses `d_um,force_pN,sigma_pN[,vm_mV]` with `#` comment lines.
pub fn read_raw_csv<R: Read>(reader: R) -> Result<Vec<RawPoint>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
    let mut points = Vec::new();
    for (line, row) in rdr.deserialize::<InputRow>().enumerate() {
        let row = row?;
        if !(row.d_um > 0.0) || !(row.sigma_pn > 0.0) || !row.force_pn.is_finite() {
            return Err(Error::invalid(format!("data row {}: need d_um > 0, sigma_pN > 0, finite force", line + 1)));
        }
        points.push(RawPoint {
            d_raw: row.d_um * 1e-6,
            force: row.force_pn * 1e-12,
            sigma: row.sigma_pn * 1e-12,
            v_m: row.vm_mv.map(|v| v * 1e-3),
        });
    }
    if points.is_empty() {
        return Err(Error::invalid("input contains no data rows"));
    }
    Ok(points)
}

pub fn load_raw_csv(path: &Path) -> Result<Vec<RawPoint>> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    read_raw_csv(file)
}

/// `x` with `digits` significant digits, plain notation for moderate
/// magnitudes and exponent notation otherwise.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// Rounds `x` to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    fmt_sig(x, digits).parse().expect("formatted float parses")
}

pub fn pn(force: f64) -> String {
    fmt_sig(force * 1e12, 6)
}

pub fn um(d: f64) -> String {
    fmt_sig(d * 1e6, 5)
}

/// A CSV document preceded by `# key=value` comment lines.
pub fn csv_document(comments: &[(String, String)], header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for (k, v) in comments {
        out.extend_from_slice(format!("# {k}={v}\n").as_bytes());
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn raw_csv_document(comments: &[(String, String)], points: &[RawPoint]) -> Result<Vec<u8>> {
    let rows: Vec<Vec<String>> = points.iter().map(|p| vec![um(p.d_raw), pn(p.force), pn(p.sigma)]).collect();
    csv_document(comments, &["d_um", "force_pN", "sigma_pN"], &rows)
}

/// Writes files by temp-file-then-rename and deletes everything it wrote
/// unless [`AtomicOutputs::commit`] is called.
#[derive(Debug)]
pub struct AtomicOutputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
    committed: bool,
}

impl AtomicOutputs {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new(), committed: false })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let target = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp"));
        std::fs::write(&tmp, bytes)?;
        if let Err(e) = std::fs::rename(&tmp, &target) {
            let _ = std::fs::remove_file(&tmp);
            return Err(e.into());
        }
        self.written.push(target.clone());
        Ok(target)
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.written)
    }
}

impl Drop for AtomicOutputs {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = std::fs::remove_file(p);
            }
        }
    }
}
