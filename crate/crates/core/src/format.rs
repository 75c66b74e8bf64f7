//! Binary model file format.
//!
//! All integers are little-endian.
//!
//! | field            | encoding                                              |
//! |------------------|-------------------------------------------------------|
//! | magic            | `b"HDLM"`                                             |
//! | version          | u16, currently 1                                      |
//! | D                | u32                                                   |
//! | n                | u8                                                    |
//! | seed             | u64                                                   |
//! | alphabet         | u16 byte length, then UTF-8                           |
//! | permutation      | D × u32, `mapping[i]` is the destination of index `i` |
//! | labels           | per symbol, `ceil(D/8)` bytes; component `j` is bit `j % 8` of byte `j / 8`, set for +1 |
//! | language count   | u16                                                   |
//! | per language     | name (u16 length + UTF-8), sample_count u32, byte_count u64, vector D × i32 |
//! | checksum         | CRC-32 (IEEE) of every preceding byte, u32            |
//!
//! Labels and permutation are stored even though the seed determines them,
//! so a file does not depend on the random generator that produced it. The
//! format has no field for the folding flags; files always load with case
//! and diacritic folding enabled, and saving a model with either flag off is
//! rejected.

use std::fs;
use std::path::Path;

use crate::encoder::{Encoder, EncoderConfig, LabelSet};
use crate::error::{Error, Result};
use crate::hv::{BipolarLabel, Hypervector};
use crate::model::{LanguageModel, LanguageVector};
use crate::normalize::AlphabetConfig;

pub const MAGIC: &[u8; 4] = b"HDLM";
pub const VERSION: u16 = 1;

pub fn to_bytes(model: &LanguageModel) -> Result<Vec<u8>> {
    let cfg = model.config();
    if !cfg.alphabet.fold_case() || !cfg.alphabet.fold_diacritics() {
        return Err(Error::Config(
            "the model format only stores alphabets with case and diacritic folding".into(),
        ));
    }
    let dim = cfg.dim;
    let alphabet: String = cfg.alphabet.symbols().iter().collect();
    let languages = model.languages();

    let mut out = Vec::with_capacity(64 + dim * 4 * (1 + languages.len()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(dim as u32).to_le_bytes());
    out.push(cfg.n as u8);
    out.extend_from_slice(&cfg.seed.to_le_bytes());
    put_str(&mut out, &alphabet, "alphabet")?;

    for &m in model.encoder().permutation().mapping() {
        out.extend_from_slice(&m.to_le_bytes());
    }
    for label in model.encoder().labels().iter() {
        let mut packed = vec![0u8; dim.div_ceil(8)];
        for (j, &c) in label.components().iter().enumerate() {
            if c > 0 {
                packed[j / 8] |= 1 << (j % 8);
            }
        }
        out.extend_from_slice(&packed);
    }

    let count = u16::try_from(languages.len())
        .map_err(|_| Error::Config("too many languages for the model format".into()))?;
    out.extend_from_slice(&count.to_le_bytes());
    for lang in languages {
        put_str(&mut out, &lang.name, "language name")?;
        out.extend_from_slice(&lang.sample_count.to_le_bytes());
        out.extend_from_slice(&lang.byte_count.to_le_bytes());
        for &c in lang.vector.components() {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }

    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}

fn put_str(out: &mut Vec<u8>, s: &str, what: &str) -> Result<()> {
    let len = u16::try_from(s.len())
        .map_err(|_| Error::Config(format!("{what} is too long for the model format")))?;
    out.extend_from_slice(&len.to_le_bytes());
    out.extend_from_slice(s.as_bytes());
    Ok(())
}

pub fn from_bytes(bytes: &[u8]) -> Result<LanguageModel> {
    if bytes.len() >= 4 && &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < 10 {
        return Err(Error::Checksum);
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(tail.try_into().unwrap());
    if crc32fast::hash(body) != stored {
        return Err(Error::Checksum);
    }

    let mut r = Reader { buf: body, pos: 4 };
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let dim = r.u32()? as usize;
    let n = r.u8()? as usize;
    let seed = r.u64()?;
    let alphabet = r.string()?;
    let alphabet = AlphabetConfig::new(alphabet.chars().collect(), true, true)
        .map_err(|e| Error::invariant("alphabet", e.to_string()))?;
    let config = EncoderConfig {
        n,
        dim,
        seed,
        alphabet,
    };
    config
        .validate()
        .map_err(|e| Error::invariant("encoder configuration", e.to_string()))?;

    let mapping = (0..dim).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
    let packed_len = dim.div_ceil(8);
    let mut labels = Vec::with_capacity(config.alphabet.len());
    for _ in 0..config.alphabet.len() {
        let packed = r.take(packed_len)?;
        let components = (0..dim)
            .map(|j| {
                if packed[j / 8] >> (j % 8) & 1 == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        labels.push(BipolarLabel::from_components(components)?);
    }
    let encoder = Encoder::from_parts(config, LabelSet::from_labels(labels), mapping)?;

    let count = r.u16()? as usize;
    let mut languages = Vec::with_capacity(count);
    for _ in 0..count {
        let name = r.string()?;
        let sample_count = r.u32()?;
        let byte_count = r.u64()?;
        let components = (0..dim)
            .map(|_| r.u32().map(|v| v as i32))
            .collect::<Result<Vec<_>>>()?;
        languages.push(LanguageVector {
            name,
            vector: Hypervector::from_components_unchecked(components),
            sample_count,
            byte_count,
        });
    }
    if r.pos != body.len() {
        return Err(Error::Malformed(format!(
            "{} unexpected trailing bytes",
            body.len() - r.pos
        )));
    }
    LanguageModel::from_parts(encoder, languages)
}

pub fn save_model(model: &LanguageModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = to_bytes(model)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LanguageModel> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    from_bytes(&bytes)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&end| end <= self.buf.len())
            .ok_or_else(|| {
                Error::Malformed(format!("unexpected end of data at byte {}", self.pos))
            })?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().unwrap())
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.array::<1>()?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        self.array().map(u16::from_le_bytes)
    }

    fn u32(&mut self) -> Result<u32> {
        self.array().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64> {
        self.array().map(u64::from_le_bytes)
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u16()? as usize;
        let raw = self.take(len)?;
        String::from_utf8(raw.to_vec()).map_err(|_| Error::Malformed("string is not UTF-8".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> LanguageModel {
        LanguageModel::build(
            vec![
                ("eng".to_string(), vec!["the cat sat on the mat"]),
                ("nld".to_string(), vec!["de kat zat op de mat"]),
            ],
            EncoderConfig::new(3, 64, 9).unwrap(),
        )
        .unwrap()
    }

    fn reseal(bytes: &mut [u8]) {
        let len = bytes.len() - 4;
        let crc = crc32fast::hash(&bytes[..len]);
        bytes[len..].copy_from_slice(&crc.to_le_bytes());
    }

    #[test]
    fn header_layout() {
        let bytes = to_bytes(&model()).unwrap();
        assert_eq!(&bytes[..4], b"HDLM");
        assert_eq!(&bytes[4..6], &[1, 0]);
        assert_eq!(&bytes[6..10], &64u32.to_le_bytes());
        assert_eq!(bytes[10], 3);
        assert_eq!(&bytes[11..19], &9u64.to_le_bytes());
        assert_eq!(&bytes[19..21], &27u16.to_le_bytes());
        assert_eq!(&bytes[21..48], b"abcdefghijklmnopqrstuvwxyz ");
        // header + permutation + labels + count + 2 × (name + counts + vector) + crc
        let expected = 48 + 64 * 4 + 27 * 8 + 2 + 2 * (2 + 3 + 4 + 8 + 64 * 4) + 4;
        assert_eq!(bytes.len(), expected);
    }

    #[test]
    fn round_trip() {
        let m = model();
        let bytes = to_bytes(&m).unwrap();
        let loaded = from_bytes(&bytes).unwrap();
        assert_eq!(loaded, m);
        assert_eq!(to_bytes(&loaded).unwrap(), bytes);
    }

    #[test]
    fn corruption_is_detected() {
        let bytes = to_bytes(&model()).unwrap();
        assert!(matches!(
            from_bytes(&bytes[..bytes.len() - 9]),
            Err(Error::Checksum)
        ));
        assert!(matches!(from_bytes(&bytes[..3]), Err(Error::Checksum)));
        let mut flipped = bytes.clone();
        flipped[200] ^= 0x10;
        assert!(matches!(from_bytes(&flipped), Err(Error::Checksum)));
        let mut magic = bytes.clone();
        magic[0] = b'X';
        assert!(matches!(from_bytes(&magic), Err(Error::BadMagic)));
        let mut version = bytes;
        version[4] = 2;
        reseal(&mut version);
        assert!(matches!(
            from_bytes(&version),
            Err(Error::UnsupportedVersion(2))
        ));
    }

    #[test]
    fn invariant_violations_are_named() {
        let bytes = to_bytes(&model()).unwrap();
        let labels_at = 48 + 64 * 4;

        let mut unbalanced = bytes.clone();
        unbalanced[labels_at] ^= 0x01;
        reseal(&mut unbalanced);
        match from_bytes(&unbalanced) {
            Err(Error::Invariant { invariant, .. }) => assert_eq!(invariant, "label balance"),
            other => panic!("unexpected {other:?}"),
        }

        let mut repeated = bytes.clone();
        let first = repeated[48..52].to_vec();
        repeated[52..56].copy_from_slice(&first);
        reseal(&mut repeated);
        match from_bytes(&repeated) {
            Err(Error::Invariant { invariant, .. }) => {
                assert_eq!(invariant, "permutation bijection")
            }
            other => panic!("unexpected {other:?}"),
        }

        let mut odd = bytes;
        odd[6] = 63;
        reseal(&mut odd);
        assert!(matches!(from_bytes(&odd), Err(Error::Invariant { .. })));
    }

    #[test]
    fn non_folding_alphabet_cannot_be_saved() {
        let alphabet = AlphabetConfig::new("abc ".chars().collect(), false, true).unwrap();
        let cfg = EncoderConfig::new(2, 16, 1)
            .unwrap()
            .with_alphabet(alphabet);
        let m = LanguageModel::build(
            vec![
                ("a".to_string(), vec!["abc"]),
                ("b".to_string(), vec!["cab"]),
            ],
            cfg,
        )
        .unwrap();
        assert!(matches!(to_bytes(&m), Err(Error::Config(_))));
    }
}
