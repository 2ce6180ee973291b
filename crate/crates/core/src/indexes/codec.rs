//! Versioned little-endian container for every index type.
//!
//! ```text
//! magic      8 bytes  "CEOSIDX\0"
//! version    u32
//! algorithm  u8       1=1ceos 2=2ceos 3=sceos 4=sceos-est 5=sceos-ta 6=coceos
//! d, D, n    u64 x 3
//! b, s0, m   u64 x 3  (0 when unused)
//! rotation   u8 kind (0 gaussian, 1 spinner), u64 seed,
//!            then D*d f64 (gaussian, row-major) or 3*D i8 signs (spinner)
//! payload    algorithm specific, see `write_payload`
//! ```

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::Arc;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use super::{
    Algorithm, CeosIndex, CoCeosIndex, ListEntry, OneCeosIndex, SceosEstIndex, SceosFullIndex,
    SceosTaIndex,
};
use crate::projection::{ProjectedMatrix, RotationKind, RotationSpec};
use crate::{CeosError, PointId, Result};

pub const MAGIC: &[u8; 8] = b"CEOSIDX\0";
pub const FORMAT_VERSION: u32 = 1;

struct Header {
    algorithm: Algorithm,
    d: u64,
    dims: u64,
    n: u64,
    b: u64,
    s0: u64,
    m: u64,
}

pub fn write_index<W: Write>(index: &CeosIndex, w: &mut W) -> Result<()> {
    let rot = index.rotation();
    let (b, s0, m) = match index {
        CeosIndex::OneCeos(i) => (i.b, 0, 0),
        CeosIndex::SceosFull(i) => (i.b, i.s0, 0),
        CeosIndex::CoCeos(i) => (0, 0, i.m),
        CeosIndex::SceosEst(_) | CeosIndex::SceosTa(_) => (0, 0, 0),
    };
    w.write_all(MAGIC)?;
    w.write_u32::<LE>(FORMAT_VERSION)?;
    w.write_u8(index.algorithm().tag())?;
    for v in [rot.in_dim(), rot.out_dim(), index.points(), b, s0, m] {
        w.write_u64::<LE>(v as u64)?;
    }
    write_rotation(rot, w)?;
    write_payload(index, w)?;
    w.flush()?;
    Ok(())
}

fn write_rotation<W: Write>(rot: &RotationSpec, w: &mut W) -> Result<()> {
    w.write_u8(rot.kind().tag())?;
    w.write_u64::<LE>(rot.seed())?;
    if let Some(m) = rot.matrix() {
        for &v in m {
            w.write_f64::<LE>(v)?;
        }
    }
    if let Some(signs) = rot.signs() {
        for diag in signs {
            for &s in diag {
                w.write_i8(s)?;
            }
        }
    }
    Ok(())
}

fn write_ids<W: Write>(ids: &[PointId], w: &mut W) -> Result<()> {
    for &id in ids {
        w.write_u32::<LE>(id)?;
    }
    Ok(())
}

fn write_entries<W: Write>(entries: &[ListEntry], w: &mut W) -> Result<()> {
    for e in entries {
        w.write_f32::<LE>(e.value)?;
        w.write_u32::<LE>(e.id)?;
    }
    Ok(())
}

fn write_matrix<W: Write>(m: &ProjectedMatrix, w: &mut W) -> Result<()> {
    for &v in m.as_rows() {
        w.write_f32::<LE>(v)?;
    }
    Ok(())
}

// 1ceos/2ceos: top ids (D * min(b, n)), then bottom ids for 2ceos.
// sceos: u64 list count, then per list 2*s0 u32 key dims, u32 length, ids.
// sceos-est: projected matrix (D rows of n f32).
// sceos-ta: projected matrix, then D*n sorted (f32 value, u32 id) entries.
// coceos: D*min(m, n) largest entries, then as many smallest entries.
fn write_payload<W: Write>(index: &CeosIndex, w: &mut W) -> Result<()> {
    match index {
        CeosIndex::OneCeos(i) => {
            write_ids(&i.top, w)?;
            if let Some(bottom) = &i.bottom {
                write_ids(bottom, w)?;
            }
        }
        CeosIndex::SceosFull(i) => {
            w.write_u64::<LE>(i.lists.len() as u64)?;
            for (key, ids) in &i.lists {
                for &k in key {
                    w.write_u32::<LE>(k)?;
                }
                w.write_u32::<LE>(ids.len() as u32)?;
                write_ids(ids, w)?;
            }
        }
        CeosIndex::SceosEst(i) => write_matrix(&i.matrix, w)?,
        CeosIndex::SceosTa(i) => {
            write_matrix(&i.matrix, w)?;
            write_entries(&i.sorted, w)?;
        }
        CeosIndex::CoCeos(i) => {
            write_entries(&i.largest, w)?;
            write_entries(&i.smallest, w)?;
        }
    }
    Ok(())
}

fn usize_of(v: u64, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| CeosError::format(format!("{what}={v} does not fit in memory")))
}

fn read_header<R: Read>(r: &mut R) -> Result<Header> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CeosError::format("not a ceos index file (bad magic)"));
    }
    let version = r.read_u32::<LE>()?;
    if version != FORMAT_VERSION {
        return Err(CeosError::format(format!(
            "unsupported index version {version} (expected {FORMAT_VERSION})"
        )));
    }
    let algorithm = Algorithm::from_tag(r.read_u8()?)?;
    let mut f = [0u64; 6];
    for v in &mut f {
        *v = r.read_u64::<LE>()?;
    }
    Ok(Header {
        algorithm,
        d: f[0],
        dims: f[1],
        n: f[2],
        b: f[3],
        s0: f[4],
        m: f[5],
    })
}

fn read_rotation<R: Read>(r: &mut R, d: usize, dims: usize) -> Result<RotationSpec> {
    let kind = RotationKind::from_tag(r.read_u8()?)?;
    let seed = r.read_u64::<LE>()?;
    match kind {
        RotationKind::Gaussian => {
            let mut m = vec![0.0f64; d * dims];
            r.read_f64_into::<LE>(&mut m)?;
            Ok(RotationSpec::from_matrix(d, dims, m)
                .map_err(|e| CeosError::format(e.to_string()))?
                .with_seed(seed))
        }
        RotationKind::Spinner => {
            let mut signs: [Vec<i8>; 3] = Default::default();
            for diag in &mut signs {
                *diag = vec![0i8; dims];
                r.read_i8_into(diag)?;
            }
            RotationSpec::from_signs(seed, d, signs).map_err(|e| CeosError::format(e.to_string()))
        }
    }
}

fn read_ids<R: Read>(r: &mut R, len: usize) -> Result<Vec<PointId>> {
    let mut v = vec![0u32; len];
    r.read_u32_into::<LE>(&mut v)?;
    Ok(v)
}

fn read_entries<R: Read>(r: &mut R, len: usize) -> Result<Vec<ListEntry>> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let value = r.read_f32::<LE>()?;
        let id = r.read_u32::<LE>()?;
        out.push(ListEntry { value, id });
    }
    Ok(out)
}

fn read_matrix<R: Read>(r: &mut R, rot: Arc<RotationSpec>, n: usize) -> Result<ProjectedMatrix> {
    let mut v = vec![0.0f32; rot.out_dim() * n];
    r.read_f32_into::<LE>(&mut v)?;
    ProjectedMatrix::from_rows(rot, n, v).map_err(|e| CeosError::format(e.to_string()))
}

fn check_ids(ids: &[PointId], n: usize) -> Result<()> {
    if ids.iter().any(|&id| id as usize >= n) {
        return Err(CeosError::format("stored point id out of range"));
    }
    Ok(())
}

pub fn read_index<R: Read>(r: &mut R) -> Result<CeosIndex> {
    let h = read_header(r)?;
    let d = usize_of(h.d, "d")?;
    let dims = usize_of(h.dims, "D")?;
    let n = usize_of(h.n, "n")?;
    let rot = Arc::new(read_rotation(r, d, dims)?);
    if rot.out_dim() != dims {
        return Err(CeosError::format(
            "rotation dimension disagrees with header",
        ));
    }
    let index = match h.algorithm {
        Algorithm::OneCeos | Algorithm::TwoCeos => {
            let b = usize_of(h.b, "b")?;
            let len = dims * b.min(n);
            let top = read_ids(r, len)?;
            check_ids(&top, n)?;
            let bottom = if h.algorithm == Algorithm::TwoCeos {
                let v = read_ids(r, len)?;
                check_ids(&v, n)?;
                Some(v)
            } else {
                None
            };
            CeosIndex::OneCeos(OneCeosIndex {
                rotation: rot,
                points: n,
                b,
                top,
                bottom,
            })
        }
        Algorithm::SceosFull => {
            let s0 = usize_of(h.s0, "s0")?;
            let count = r.read_u64::<LE>()?;
            let mut lists = BTreeMap::new();
            for _ in 0..count {
                let key = read_ids(r, 2 * s0)?;
                let len = r.read_u32::<LE>()? as usize;
                if len > n {
                    return Err(CeosError::format("list longer than the point count"));
                }
                let ids = read_ids(r, len)?;
                check_ids(&ids, n)?;
                lists.insert(key, ids);
            }
            CeosIndex::SceosFull(SceosFullIndex {
                rotation: rot,
                points: n,
                s0,
                b: usize_of(h.b, "b")?,
                lists,
            })
        }
        Algorithm::SceosEst => CeosIndex::SceosEst(SceosEstIndex {
            matrix: read_matrix(r, rot, n)?,
        }),
        Algorithm::SceosTa => {
            let matrix = read_matrix(r, rot, n)?;
            let sorted = read_entries(r, dims * n)?;
            check_ids(&sorted.iter().map(|e| e.id).collect::<Vec<_>>(), n)?;
            CeosIndex::SceosTa(SceosTaIndex { matrix, sorted })
        }
        Algorithm::CoCeos => {
            let m = usize_of(h.m, "m")?;
            let len = dims * m.min(n);
            let largest = read_entries(r, len)?;
            let smallest = read_entries(r, len)?;
            CeosIndex::CoCeos(CoCeosIndex {
                rotation: rot,
                points: n,
                m,
                largest,
                smallest,
            })
        }
    };
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexes::BuildParams;
    use crate::projection::{make_rotation, project_all};
    use crate::VectorSet;
    use proptest::prelude::*;

    fn small_data(n: usize, d: usize, seed: u64) -> VectorSet {
        let vals: Vec<f32> = (0..n * d)
            .map(|i| (((i as u64 + 1) * (seed * 2 + 7919)) % 1013) as f32 / 507.0 - 1.0)
            .collect();
        VectorSet::from_flat(d, vals).unwrap()
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_index(&mut &b"NOTCEOS\0rest"[..]).is_err());
        let mut bytes = MAGIC.to_vec();
        bytes.extend_from_slice(&99u32.to_le_bytes());
        assert!(matches!(
            read_index(&mut &bytes[..]),
            Err(CeosError::Format(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn round_trip_is_bit_exact(
            n in 1usize..40,
            seed in 0u64..1000,
            algo_ix in 0usize..6,
            gaussian in any::<bool>(),
        ) {
            let d = 5;
            let data = small_data(n, d, seed);
            let kind = if gaussian { RotationKind::Gaussian } else { RotationKind::Spinner };
            let rot = Arc::new(make_rotation(kind, seed, d, 8).unwrap());
            let matrix = project_all(rot, &data).unwrap();
            let params = BuildParams { b: 7, s0: 1, m: 5, ..BuildParams::default() };
            let index = CeosIndex::build(Algorithm::ALL[algo_ix], matrix, &params).unwrap();
            let mut bytes = Vec::new();
            write_index(&index, &mut bytes).unwrap();
            prop_assert_eq!(bytes.len() as u64, index.serialized_len().unwrap());
            let back = read_index(&mut &bytes[..]).unwrap();
            prop_assert_eq!(&back, &index);
            let mut again = Vec::new();
            write_index(&back, &mut again).unwrap();
            prop_assert_eq!(bytes, again);
        }
    }
}
