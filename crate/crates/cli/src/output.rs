//! Sweep and fringe file formats. Every float is emitted at nine significant
//! digits so that reading a file back reproduces the quantized values exactly.

use std::io::Write;
use std::path::Path;

use marker_duality::analysis::DualityRecord;
use marker_duality::experiment::FringeSample;
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

use crate::{CliError, OutputFormat, Result};

pub const SWEEP_HEADER: [&str; 6] = ["phi", "V", "D_geo", "D_lik", "E", "duality_sum"];
pub const FRINGE_HEADER: [&str; 2] = ["phase", "population"];

/// Rounds to nine significant digits.
pub fn quantize(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Shortest text that parses back to `quantize(x)`; exponent form for very
/// small or very large magnitudes.
pub fn format_value(x: f64) -> String {
    let q = quantize(x);
    if q != 0.0 && q.is_finite() && !(1e-4..1e15).contains(&q.abs()) {
        format!("{q:e}")
    } else {
        q.to_string()
    }
}

fn parse_field(record: &csv::StringRecord, i: usize) -> Result<f64> {
    let field = record
        .get(i)
        .ok_or_else(|| CliError::InvalidConfig(format!("row has {} fields", record.len())))?;
    field
        .trim()
        .parse()
        .map_err(|_| CliError::InvalidConfig(format!("bad number `{field}`")))
}

pub fn quantize_record(r: &DualityRecord) -> DualityRecord {
    DualityRecord {
        phi: quantize(r.phi),
        visibility: quantize(r.visibility),
        d_geo: quantize(r.d_geo),
        d_lik: quantize(r.d_lik),
        entanglement: quantize(r.entanglement),
        duality_sum: quantize(r.duality_sum),
    }
}

pub fn write_sweep<W: Write>(
    records: &[DualityRecord],
    format: OutputFormat,
    out: W,
) -> Result<()> {
    let quantized: Vec<_> = records.iter().map(quantize_record).collect();
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(SWEEP_HEADER)?;
            for r in &quantized {
                w.write_record(
                    [
                        r.phi,
                        r.visibility,
                        r.d_geo,
                        r.d_lik,
                        r.entanglement,
                        r.duality_sum,
                    ]
                    .map(format_value),
                )?;
            }
            w.flush()?;
        }
        OutputFormat::Json => write_json(&quantized, out)?,
    }
    Ok(())
}

pub fn read_sweep_csv<R: std::io::Read>(input: R) -> Result<Vec<DualityRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != SWEEP_HEADER {
        return Err(CliError::InvalidConfig(format!(
            "unexpected sweep header {header:?}"
        )));
    }
    rdr.records()
        .map(|row| {
            let row = row?;
            let v = |i| parse_field(&row, i);
            Ok(DualityRecord {
                phi: v(0)?,
                visibility: v(1)?,
                d_geo: v(2)?,
                d_lik: v(3)?,
                entanglement: v(4)?,
                duality_sum: v(5)?,
            })
        })
        .collect()
}

pub fn read_sweep_json<R: std::io::Read>(input: R) -> Result<Vec<DualityRecord>> {
    Ok(serde_json::from_reader(input)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeOutput {
    pub samples: Vec<FringeSample>,
    #[serde(rename = "V")]
    pub visibility: f64,
}

/// CSV fringes end with a `# V=<value>` line carrying the fitted visibility.
pub fn write_fringe<W: Write>(
    fringe: &FringeOutput,
    format: OutputFormat,
    mut out: W,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(FRINGE_HEADER)?;
                for s in &fringe.samples {
                    w.write_record([format_value(s.phase), format_value(s.population)])?;
                }
                w.flush()?;
            }
            writeln!(out, "# V={}", format_value(fringe.visibility))?;
        }
        OutputFormat::Json => {
            let q = FringeOutput {
                samples: fringe
                    .samples
                    .iter()
                    .map(|s| FringeSample {
                        phase: quantize(s.phase),
                        population: quantize(s.population),
                    })
                    .collect(),
                visibility: quantize(fringe.visibility),
            };
            write_json(&q, out)?;
        }
    }
    Ok(())
}

pub fn read_fringe_csv<R: std::io::Read>(mut input: R) -> Result<FringeOutput> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let mut visibility = None;
    for line in text.lines() {
        if let Some(v) = line.strip_prefix("# V=") {
            visibility =
                Some(v.trim().parse().map_err(|_| {
                    CliError::InvalidConfig(format!("bad visibility line `{line}`"))
                })?);
        }
    }
    let visibility =
        visibility.ok_or_else(|| CliError::InvalidConfig("missing `# V=` line".into()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let samples = rdr
        .records()
        .map(|row| {
            let row = row?;
            Ok(FringeSample {
                phase: parse_field(&row, 0)?,
                population: parse_field(&row, 1)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FringeOutput {
        samples,
        visibility,
    })
}

fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Writes through a sibling temporary file that only replaces `path` once
/// `fill` succeeds; on failure nothing is left behind.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut buf)?;
        buf.flush().map_err(io_err)?;
    }
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
