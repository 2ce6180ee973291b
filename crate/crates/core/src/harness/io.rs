use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{CeosError, PointId, Result, VectorSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VectorFormat {
    /// Records of `[i32 dim][dim x f32]`, little endian.
    #[serde(rename = "fvecs")]
    Fvecs,
    /// One vector per line, comma separated.
    #[serde(rename = "csv")]
    Csv,
    /// `u64 n, u64 d` header then `n * d` f32, row major, little endian.
    #[serde(rename = "raw-f32")]
    RawF32,
}

impl VectorFormat {
    pub fn name(self) -> &'static str {
        match self {
            VectorFormat::Fvecs => "fvecs",
            VectorFormat::Csv => "csv",
            VectorFormat::RawF32 => "raw-f32",
        }
    }
}

impl FromStr for VectorFormat {
    type Err = CeosError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fvecs" => Ok(VectorFormat::Fvecs),
            "csv" => Ok(VectorFormat::Csv),
            "raw-f32" => Ok(VectorFormat::RawF32),
            other => Err(CeosError::param(format!(
                "unknown vector format {other:?} (expected fvecs, csv or raw-f32)"
            ))),
        }
    }
}

pub fn load_vectors(path: impl AsRef<Path>, format: VectorFormat) -> Result<VectorSet> {
    let path = path.as_ref();
    let file =
        File::open(path).map_err(|e| CeosError::from(e).context(path.display().to_string()))?;
    read_vectors(BufReader::new(file), format).map_err(|e| e.context(path.display().to_string()))
}

pub fn read_vectors<R: Read>(mut r: R, format: VectorFormat) -> Result<VectorSet> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    match format {
        VectorFormat::Fvecs => parse_fvecs(&bytes),
        VectorFormat::Csv => parse_csv(&bytes),
        VectorFormat::RawF32 => parse_raw(&bytes),
    }
}

fn finite_record(values: &[f32], record: usize) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CeosError::format(format!(
            "non-finite value in record {record}"
        )));
    }
    Ok(())
}

fn parse_fvecs(bytes: &[u8]) -> Result<VectorSet> {
    let mut cur = bytes;
    let mut dim = None;
    let mut values = Vec::new();
    let mut record = 0;
    while !cur.is_empty() {
        let d = cur
            .read_i32::<LE>()
            .map_err(|_| CeosError::format(format!("truncated header in record {record}")))?;
        if d <= 0 {
            return Err(CeosError::format(format!(
                "record {record} has dimension {d}"
            )));
        }
        let d = d as usize;
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => {
                return Err(CeosError::format(format!(
                    "record {record} has dimension {d}, expected {expected}"
                )))
            }
            _ => {}
        }
        let start = values.len();
        values.resize(start + d, 0.0);
        cur.read_f32_into::<LE>(&mut values[start..])
            .map_err(|_| CeosError::format(format!("truncated values in record {record}")))?;
        finite_record(&values[start..], record)?;
        record += 1;
    }
    VectorSet::from_flat(dim.unwrap_or(0), values)
}

fn parse_csv(bytes: &[u8]) -> Result<VectorSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut dim = None;
    let mut values = Vec::new();
    for (record, row) in rdr.records().enumerate() {
        let row = row?;
        if row.iter().all(str::is_empty) {
            continue;
        }
        let start = values.len();
        for field in row.iter() {
            let v: f32 = field.parse().map_err(|_| {
                CeosError::format(format!("record {record}: cannot parse {field:?}"))
            })?;
            values.push(v);
        }
        let d = values.len() - start;
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => {
                return Err(CeosError::format(format!(
                    "record {record} has dimension {d}, expected {expected}"
                )))
            }
            _ => {}
        }
        finite_record(&values[start..], record)?;
    }
    VectorSet::from_flat(dim.unwrap_or(0), values)
}

fn parse_raw(bytes: &[u8]) -> Result<VectorSet> {
    if bytes.is_empty() {
        return Ok(VectorSet::default());
    }
    let mut cur = bytes;
    let n = cur
        .read_u64::<LE>()
        .map_err(|_| CeosError::format("raw-f32 header truncated"))?;
    let d = cur
        .read_u64::<LE>()
        .map_err(|_| CeosError::format("raw-f32 header truncated"))?;
    let expected = (n as u128) * (d as u128) * 4;
    if expected != cur.len() as u128 {
        return Err(CeosError::format(format!(
            "raw-f32 header says {n}x{d} but {} payload bytes follow",
            cur.len()
        )));
    }
    let mut values = vec![0.0f32; (n * d) as usize];
    cur.read_f32_into::<LE>(&mut values)?;
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(CeosError::format(format!(
            "non-finite value in record {}",
            pos / d.max(1) as usize
        )));
    }
    if n == 0 {
        return Ok(VectorSet::with_dim(d as usize));
    }
    VectorSet::from_flat(d as usize, values)
}

pub fn write_vectors(path: impl AsRef<Path>, set: &VectorSet, format: VectorFormat) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        VectorFormat::Fvecs => {
            for v in set.iter() {
                w.write_i32::<LE>(v.len() as i32)?;
                for &x in v {
                    w.write_f32::<LE>(x)?;
                }
            }
        }
        VectorFormat::Csv => {
            for v in set.iter() {
                let line: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                writeln!(w, "{}", line.join(","))?;
            }
        }
        VectorFormat::RawF32 => {
            w.write_u64::<LE>(set.len() as u64)?;
            w.write_u64::<LE>(set.dim() as u64)?;
            for &x in set.as_flat() {
                w.write_f32::<LE>(x)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Ground-truth ids in ivecs layout: `[i32 k][k x i32]` per query.
pub fn write_ivecs(path: impl AsRef<Path>, rows: &[Vec<PointId>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for row in rows {
        w.write_i32::<LE>(row.len() as i32)?;
        for &id in row {
            w.write_i32::<LE>(id as i32)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_ivecs(path: impl AsRef<Path>) -> Result<Vec<Vec<PointId>>> {
    let bytes = std::fs::read(path)?;
    let mut cur = &bytes[..];
    let mut rows = Vec::new();
    while !cur.is_empty() {
        let k = cur
            .read_i32::<LE>()
            .map_err(|_| CeosError::format("truncated ivecs record"))?;
        if k < 0 {
            return Err(CeosError::format(format!("ivecs record with length {k}")));
        }
        let mut row = vec![0i32; k as usize];
        cur.read_i32_into::<LE>(&mut row)
            .map_err(|_| CeosError::format("truncated ivecs record"))?;
        rows.push(row.into_iter().map(|v| v as PointId).collect());
    }
    Ok(rows)
}

/// Hex SHA-256 of a file's bytes.
pub fn file_checksum(path: impl AsRef<Path>) -> Result<String> {
    let mut f = BufReader::new(File::open(path)?);
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let read = f.read(&mut buf)?;
        if read == 0 {
            break;
        }
        hasher.update(&buf[..read]);
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}
