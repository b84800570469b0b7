//! Raw coefficient files: 16-byte header (`b"PSPL"`, u32 version, u64 count)
//! followed by `count` little-endian f64 values.

use std::path::Path;

use crate::{Error, Result};

pub const SIDECAR_MAGIC: &[u8; 4] = b"PSPL";
pub const SIDECAR_VERSION: u32 = 1;

pub fn sidecar_bytes(values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 8 * values.len());
    out.extend_from_slice(SIDECAR_MAGIC);
    out.extend_from_slice(&SIDECAR_VERSION.to_le_bytes());
    out.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn write_sidecar(path: &Path, values: &[f64]) -> Result<()> {
    super::write_atomic(path, &sidecar_bytes(values))
}

pub fn read_sidecar(path: &Path) -> Result<Vec<f64>> {
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    parse_sidecar(&bytes)
}

fn parse_sidecar(bytes: &[u8]) -> Result<Vec<f64>> {
    if bytes.len() < 16 || &bytes[..4] != SIDECAR_MAGIC {
        return Err(Error::Format("not a PSPL coefficient file".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != SIDECAR_VERSION {
        return Err(Error::Format(format!("unsupported PSPL version {version}")));
    }
    let count = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    if bytes.len() != 16 + 8 * count {
        return Err(Error::Format(format!(
            "PSPL file declares {count} values but holds {} bytes of data",
            bytes.len() - 16
        )));
    }
    Ok(bytes[16..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let b = sidecar_bytes(&[1.5]);
        assert_eq!(&b[..4], b"PSPL");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(b[8..16].try_into().unwrap()), 1);
        assert_eq!(b.len(), 24);
    }

    #[test]
    fn truncated_rejected() {
        let mut b = sidecar_bytes(&[1.0, 2.0]);
        b.pop();
        assert!(parse_sidecar(&b).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip_is_bit_exact(v in proptest::collection::vec(any::<f64>(), 0..64)) {
            let back = parse_sidecar(&sidecar_bytes(&v)).unwrap();
            prop_assert_eq!(back.len(), v.len());
            for (a, b) in back.iter().zip(&v) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
