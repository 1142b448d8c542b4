//! Binary container for [`NGramModel`].
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "SGSP"            4 bytes magic
//! version           u16
//! section x 5       uni, bi, tri, sds, meta, in that order
//!   byte_len        u64, length of the section body that follows
//!   entries         u64
//!   entry*          u32 key_len, key (UTF-8), u64 value
//! crc32             u32 over every byte after the version field
//! ```
//!
//! Entries in every section are sorted by key bytes. The `sds` section holds
//! `bi` and `tri` with the IEEE-754 bit pattern of the log-count scale as
//! value. The `meta` section holds `corpus_id=<id>` (value 0), `lines` and
//! `total_uni`.

use std::collections::HashMap;
use std::io::{Read, Write};

use thiserror::Error;

use crate::ngram::{ModelMeta, NGramModel};

pub const MAGIC: &[u8; 4] = b"SGSP";
pub const FORMAT_VERSION: u16 = 1;

const HEADER_LEN: usize = 6;
const CORPUS_ID_PREFIX: &str = "corpus_id=";

#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error("not a model file (bad magic bytes)")]
    BadMagic,
    #[error("unsupported model format version {found} (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },
    #[error("model file truncated at byte {at}")]
    Truncated { at: usize },
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("malformed model file: {0}")]
    Malformed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

type Entries = Vec<(Vec<u8>, u64)>;

fn encode_section(out: &mut Vec<u8>, mut entries: Entries) {
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let mut body = Vec::new();
    body.extend_from_slice(&(entries.len() as u64).to_le_bytes());
    for (key, value) in entries {
        body.extend_from_slice(&(key.len() as u32).to_le_bytes());
        body.extend_from_slice(&key);
        body.extend_from_slice(&value.to_le_bytes());
    }
    out.extend_from_slice(&(body.len() as u64).to_le_bytes());
    out.extend_from_slice(&body);
}

fn key_of(chars: &[char]) -> Vec<u8> {
    chars.iter().collect::<String>().into_bytes()
}

/// Serializes the model into a byte buffer.
pub fn encode_model(m: &NGramModel) -> Vec<u8> {
    let mut payload = Vec::new();
    encode_section(&mut payload, m.uni.iter().map(|(c, &n)| (key_of(&[*c]), n)).collect());
    encode_section(&mut payload, m.bi.iter().map(|(k, &n)| (key_of(k), n)).collect());
    encode_section(&mut payload, m.tri.iter().map(|(k, &n)| (key_of(k), n)).collect());
    encode_section(
        &mut payload,
        vec![
            (b"bi".to_vec(), m.log_sd_bi.to_bits()),
            (b"tri".to_vec(), m.log_sd_tri.to_bits()),
        ],
    );
    encode_section(
        &mut payload,
        vec![
            (format!("{CORPUS_ID_PREFIX}{}", m.meta.corpus_id).into_bytes(), 0),
            (b"lines".to_vec(), m.meta.lines),
            (b"total_uni".to_vec(), m.total_uni),
        ],
    );

    let mut out = Vec::with_capacity(HEADER_LEN + payload.len() + 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&payload);
    out.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
    out
}

pub fn save_model<W: Write>(m: &NGramModel, mut sink: W) -> Result<(), ModelIoError> {
    sink.write_all(&encode_model(m))?;
    sink.flush()?;
    Ok(())
}

pub fn load_model<R: Read>(mut source: R) -> Result<NGramModel, ModelIoError> {
    let mut buf = Vec::new();
    source.read_to_end(&mut buf)?;
    decode_model(&buf)
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ModelIoError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        match end {
            Some(end) => {
                let s = &self.buf[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(ModelIoError::Truncated { at: self.buf.len() }),
        }
    }

    fn u32(&mut self) -> Result<u32, ModelIoError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, ModelIoError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

fn decode_section(cur: &mut Cursor<'_>, name: &str) -> Result<Vec<(String, u64)>, ModelIoError> {
    let len = cur.u64()?;
    let len = usize::try_from(len).map_err(|_| ModelIoError::Truncated { at: cur.buf.len() })?;
    let body = cur.take(len)?;
    let mut inner = Cursor { buf: body, pos: 0 };
    let malformed = |what: &str| ModelIoError::Malformed(format!("section {name}: {what}"));
    let count = inner.u64().map_err(|_| malformed("missing entry count"))?;
    let mut entries: Vec<(String, u64)> = Vec::new();
    for _ in 0..count {
        let klen = inner.u32().map_err(|_| malformed("entry overruns section"))? as usize;
        let key = inner.take(klen).map_err(|_| malformed("entry overruns section"))?;
        let value = inner.u64().map_err(|_| malformed("entry overruns section"))?;
        let key = std::str::from_utf8(key).map_err(|_| malformed("key is not UTF-8"))?;
        if let Some((prev, _)) = entries.last() {
            if prev.as_bytes() >= key.as_bytes() {
                return Err(malformed("keys not strictly sorted"));
            }
        }
        entries.push((key.to_owned(), value));
    }
    if inner.pos != body.len() {
        return Err(malformed("trailing bytes"));
    }
    Ok(entries)
}

fn chars_exact<const N: usize>(key: &str, section: &str) -> Result<[char; N], ModelIoError> {
    let v: Vec<char> = key.chars().collect();
    v.try_into()
        .map_err(|_| ModelIoError::Malformed(format!("section {section}: key {key:?} has wrong length")))
}

fn positive(v: u64, section: &str) -> Result<u64, ModelIoError> {
    if v == 0 {
        Err(ModelIoError::Malformed(format!("section {section}: zero count")))
    } else {
        Ok(v)
    }
}

pub fn decode_model(buf: &[u8]) -> Result<NGramModel, ModelIoError> {
    if buf.len() < MAGIC.len() {
        return Err(ModelIoError::Truncated { at: buf.len() });
    }
    if &buf[..4] != MAGIC {
        return Err(ModelIoError::BadMagic);
    }
    let mut cur = Cursor { buf, pos: 4 };
    let version = u16::from_le_bytes(cur.take(2)?.try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(ModelIoError::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }

    let uni_e = decode_section(&mut cur, "uni")?;
    let bi_e = decode_section(&mut cur, "bi")?;
    let tri_e = decode_section(&mut cur, "tri")?;
    let sds_e = decode_section(&mut cur, "sds")?;
    let meta_e = decode_section(&mut cur, "meta")?;

    let payload_end = cur.pos;
    let stored = cur.u32()?;
    if cur.pos != buf.len() {
        return Err(ModelIoError::Malformed("trailing bytes after checksum".into()));
    }
    let computed = crc32fast::hash(&buf[HEADER_LEN..payload_end]);
    if stored != computed {
        return Err(ModelIoError::Checksum { stored, computed });
    }

    let mut uni = HashMap::with_capacity(uni_e.len());
    for (k, v) in uni_e {
        let [c] = chars_exact::<1>(&k, "uni")?;
        uni.insert(c, positive(v, "uni")?);
    }
    let mut bi = HashMap::with_capacity(bi_e.len());
    for (k, v) in bi_e {
        bi.insert(chars_exact::<2>(&k, "bi")?, positive(v, "bi")?);
    }
    let mut tri = HashMap::with_capacity(tri_e.len());
    for (k, v) in tri_e {
        tri.insert(chars_exact::<3>(&k, "tri")?, positive(v, "tri")?);
    }

    let sd = |name: &str| -> Result<f64, ModelIoError> {
        let bits = sds_e
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| ModelIoError::Malformed(format!("section sds: missing {name}")))?;
        let x = f64::from_bits(bits);
        if x > 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(ModelIoError::Malformed(format!("section sds: invalid {name} scale")))
        }
    };
    let log_sd_bi = sd("bi")?;
    let log_sd_tri = sd("tri")?;

    let mut corpus_id = None;
    let mut lines = None;
    let mut total_uni = None;
    for (k, v) in meta_e {
        if let Some(id) = k.strip_prefix(CORPUS_ID_PREFIX) {
            corpus_id = Some(id.to_owned());
        } else if k == "lines" {
            lines = Some(v);
        } else if k == "total_uni" {
            total_uni = Some(v);
        }
    }
    let (Some(corpus_id), Some(lines), Some(total_uni)) = (corpus_id, lines, total_uni) else {
        return Err(ModelIoError::Malformed("section meta: missing field".into()));
    };
    if total_uni != uni.values().sum::<u64>() {
        return Err(ModelIoError::Malformed("section meta: total_uni disagrees with counts".into()));
    }

    Ok(NGramModel {
        uni,
        bi,
        tri,
        total_uni,
        log_sd_bi,
        log_sd_tri,
        meta: ModelMeta { corpus_id, lines },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> NGramModel {
        NGramModel::ingest_lines(&["天安门", "天安门广场"], "toy")
    }

    #[test]
    fn round_trip_toy() {
        let m = toy();
        let bytes = encode_model(&m);
        assert_eq!(&bytes[..4], b"SGSP");
        let back = decode_model(&bytes).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.bi_count('天', '安'), 2);
    }

    #[test]
    fn round_trip_empty() {
        let m = NGramModel::default();
        let back = decode_model(&encode_model(&m)).unwrap();
        assert!(back.is_empty());
        assert_eq!(back, m);
    }

    #[test]
    fn every_truncation_is_detected() {
        let bytes = encode_model(&toy());
        for cut in 6..bytes.len() {
            match decode_model(&bytes[..cut]) {
                Err(ModelIoError::Truncated { .. }) => {}
                other => panic!("cut at {cut}: {other:?}"),
            }
        }
    }

    #[test]
    fn corrupted_payload_fails_checksum() {
        let mut bytes = encode_model(&toy());
        // flip a bit inside the last count of the meta section
        let n = bytes.len();
        bytes[n - 6] ^= 0x01;
        assert!(matches!(decode_model(&bytes), Err(ModelIoError::Checksum { .. })));
    }

    #[test]
    fn version_and_magic() {
        let mut bytes = encode_model(&toy());
        bytes[4] = 9;
        assert!(matches!(
            decode_model(&bytes),
            Err(ModelIoError::VersionMismatch { found: 9, expected: 1 })
        ));
        bytes[0] = b'X';
        assert!(matches!(decode_model(&bytes), Err(ModelIoError::BadMagic)));
    }
}
