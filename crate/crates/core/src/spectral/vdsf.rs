//! `VDSF` binary snapshot format.
//!
//! Layout (all integers `u32` little-endian, floats `f64` little-endian):
//! magic `VDSF`, version, dim, points per dimension, period, field count,
//! then for each field a length-prefixed UTF-8 name, then the physical
//! arrays of every field in order, row-major.

use std::io::{Read, Write};

use super::lattice::Lattice;
use crate::error::{Error, Result};

pub const VDSF_MAGIC: &[u8; 4] = b"VDSF";
pub const VDSF_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub lattice: Lattice,
    pub fields: Vec<(String, Vec<f64>)>,
}

impl Snapshot {
    pub fn field(&self, name: &str) -> Option<&[f64]> {
        self.fields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }
}

pub fn write_vdsf<W: Write>(mut w: W, snapshot: &Snapshot) -> Result<()> {
    let lattice = &snapshot.lattice;
    for (name, data) in &snapshot.fields {
        if data.len() != lattice.len() {
            return Err(Error::Format(format!(
                "field {name} has {} values, lattice has {}",
                data.len(),
                lattice.len()
            )));
        }
    }
    w.write_all(VDSF_MAGIC)?;
    w.write_all(&VDSF_VERSION.to_le_bytes())?;
    w.write_all(&(lattice.dim() as u32).to_le_bytes())?;
    w.write_all(&(lattice.points_per_dim() as u32).to_le_bytes())?;
    w.write_all(&lattice.period().to_le_bytes())?;
    w.write_all(&(snapshot.fields.len() as u32).to_le_bytes())?;
    for (name, _) in &snapshot.fields {
        w.write_all(&(name.len() as u32).to_le_bytes())?;
        w.write_all(name.as_bytes())?;
    }
    let mut buf = Vec::with_capacity(lattice.len() * 8);
    for (_, data) in &snapshot.fields {
        buf.clear();
        for x in data {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u32::from_le_bytes(b))
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Format("unexpected end of file".into())
    } else {
        Error::Io(e)
    }
}

pub fn read_vdsf<R: Read>(mut r: R) -> Result<Snapshot> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(truncated)?;
    if &magic != VDSF_MAGIC {
        return Err(Error::Format("bad magic bytes".into()));
    }
    let version = read_u32(&mut r)?;
    if version != VDSF_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let dim = read_u32(&mut r)? as usize;
    let n = read_u32(&mut r)? as usize;
    let mut pb = [0u8; 8];
    r.read_exact(&mut pb).map_err(truncated)?;
    let period = f64::from_le_bytes(pb);
    let lattice = Lattice::new(dim, n, period).map_err(|e| Error::Format(e.to_string()))?;
    let count = read_u32(&mut r)? as usize;
    if count > 4096 {
        return Err(Error::Format(format!("implausible field count {count}")));
    }
    let mut names = Vec::with_capacity(count);
    for _ in 0..count {
        let len = read_u32(&mut r)? as usize;
        if len > 1 << 16 {
            return Err(Error::Format(format!("implausible name length {len}")));
        }
        let mut nb = vec![0u8; len];
        r.read_exact(&mut nb).map_err(truncated)?;
        names.push(String::from_utf8(nb).map_err(|_| Error::Format("field name is not UTF-8".into()))?);
    }
    let mut fields = Vec::with_capacity(count);
    let mut raw = vec![0u8; lattice.len() * 8];
    for name in names {
        r.read_exact(&mut raw).map_err(truncated)?;
        let data = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        fields.push((name, data));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Format("trailing bytes after field data".into()));
    }
    Ok(Snapshot { lattice, fields })
}
