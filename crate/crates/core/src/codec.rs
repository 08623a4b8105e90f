//! Portable byte format for enumeratively-coded sequences.
//!
//! A sequence of known composition is stored as its lexicographic rank among
//! the K = T!/(c_1!...c_n!) sequences of that composition, using exactly
//! ceil(log2 K) bits padded to whole bytes. Layout, bit-exact:
//!
//! ```text
//! offset  size  field
//! 0       4     magic "ENUM"
//! 4       1     version (1)
//! 5       1     n: number of symbols (1..=255)
//! 6       4     T: sequence length, big-endian u32
//! 10      6     reserved, zero
//! 16      4n    counts c_1..c_n, big-endian u32 each
//! 16+4n   ...   rank, big-endian, ceil(ceil(log2 K) / 8) bytes
//! ```
//!
//! The rank is right-aligned in its field (leading pad bits are zero). A
//! composition with K = 1 has a zero-length payload.

use crate::combinatorics::{
    multinomial_count, rank_sequence, unrank_sequence, CombinatoricsError, TypeVector,
};
use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"ENUM";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("composition has {n} symbols; the header field holds at most 255")]
    TooManySymbols { n: usize },

    #[error("sequence length {t} exceeds the u32 header field")]
    LengthOverflow { t: u64 },

    #[error("count {count} at index {index} exceeds the u32 header field")]
    CountOverflow { index: usize, count: u64 },

    #[error("corrupt header: {0}")]
    CorruptHeader(String),

    #[error("payload holds rank {rank}, but the composition admits only {count} sequences")]
    PayloadOutOfRange { rank: BigUint, count: BigUint },

    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}

type Result<T> = std::result::Result<T, CodecError>;

/// Bits needed to index any sequence of composition `t`: ceil(log2 K).
pub fn payload_bit_len(t: &TypeVector) -> u64 {
    let count = multinomial_count(t);
    // ranks run over [0, K-1], so ceil(log2 K) = bit length of K - 1
    (count - BigUint::one()).bits()
}

/// Encodes `seq` (0-based symbol indices with composition exactly `t`) into
/// the header + rank byte format.
pub fn encode_sequence(seq: &[usize], t: &TypeVector) -> Result<Vec<u8>> {
    if t.len() > 255 {
        return Err(CodecError::TooManySymbols { n: t.len() });
    }
    if t.total() > u32::MAX as u64 {
        return Err(CodecError::LengthOverflow { t: t.total() });
    }
    for (index, &count) in t.counts().iter().enumerate() {
        if count > u32::MAX as u64 {
            return Err(CodecError::CountOverflow { index, count });
        }
    }
    let rank = rank_sequence(seq, t)?;
    let payload_len = payload_bit_len(t).div_ceil(8) as usize;

    let mut out = Vec::with_capacity(HEADER_LEN + 4 * t.len() + payload_len);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(t.len() as u8);
    out.extend_from_slice(&(t.total() as u32).to_be_bytes());
    out.extend_from_slice(&[0u8; 6]);
    for &count in t.counts() {
        out.extend_from_slice(&(count as u32).to_be_bytes());
    }
    if payload_len > 0 {
        // right-align the big-endian rank in the payload field
        let rank_bytes = rank.to_bytes_be();
        let rank_bytes = if rank_bytes == [0] {
            &[][..]
        } else {
            &rank_bytes[..]
        };
        debug_assert!(rank_bytes.len() <= payload_len);
        out.resize(out.len() + payload_len - rank_bytes.len(), 0);
        out.extend_from_slice(rank_bytes);
    }
    Ok(out)
}

/// Decodes a header + rank byte string back into its composition and
/// sequence. Strict: every structural defect is a [`CodecError`].
pub fn decode_sequence(bytes: &[u8]) -> Result<(TypeVector, Vec<usize>)> {
    if bytes.len() < HEADER_LEN {
        return Err(CodecError::CorruptHeader(format!(
            "{} bytes is shorter than the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if bytes[0..4] != MAGIC {
        return Err(CodecError::CorruptHeader("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(CodecError::CorruptHeader(format!(
            "unsupported version {}",
            bytes[4]
        )));
    }
    let n = bytes[5] as usize;
    if n == 0 {
        return Err(CodecError::CorruptHeader("zero symbol count".into()));
    }
    let total = u32::from_be_bytes(bytes[6..10].try_into().unwrap()) as u64;
    if bytes[10..16].iter().any(|&b| b != 0) {
        return Err(CodecError::CorruptHeader("nonzero reserved bytes".into()));
    }
    let counts_end = HEADER_LEN + 4 * n;
    if bytes.len() < counts_end {
        return Err(CodecError::CorruptHeader(format!(
            "header declares {n} counts but the file is truncated"
        )));
    }
    let counts: Vec<u64> = (0..n)
        .map(|i| {
            let at = HEADER_LEN + 4 * i;
            u32::from_be_bytes(bytes[at..at + 4].try_into().unwrap()) as u64
        })
        .collect();
    if counts.iter().sum::<u64>() != total {
        return Err(CodecError::CorruptHeader(format!(
            "counts sum to {}, header declares T = {total}",
            counts.iter().sum::<u64>()
        )));
    }
    let t = TypeVector::new(counts).map_err(|e| CodecError::CorruptHeader(e.to_string()))?;

    let payload_len = payload_bit_len(&t).div_ceil(8) as usize;
    let payload = &bytes[counts_end..];
    if payload.len() != payload_len {
        return Err(CodecError::CorruptHeader(format!(
            "payload is {} bytes, composition requires exactly {payload_len}",
            payload.len()
        )));
    }
    let rank = BigUint::from_bytes_be(payload);
    let count = multinomial_count(&t);
    if rank >= count {
        return Err(CodecError::PayloadOutOfRange { rank, count });
    }
    let seq = unrank_sequence(&rank, &t)?;
    Ok((t, seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::log2_biguint;

    fn tv(counts: &[u64]) -> TypeVector {
        TypeVector::new(counts.to_vec()).unwrap()
    }

    #[test]
    fn payload_of_ten_sequences_is_four_bits() {
        // K = 10 from the (2, 3) composition
        assert_eq!(payload_bit_len(&tv(&[2, 3])), 4);
    }

    #[test]
    fn encode_aabbb_layout() {
        let bytes = encode_sequence(&[0, 0, 1, 1, 1], &tv(&[2, 3])).unwrap();
        assert_eq!(bytes.len(), 16 + 8 + 1);
        assert_eq!(&bytes[0..4], b"ENUM");
        assert_eq!(bytes[4], 1); // version
        assert_eq!(bytes[5], 2); // n
        assert_eq!(&bytes[6..10], &5u32.to_be_bytes());
        assert_eq!(&bytes[10..16], &[0u8; 6]);
        assert_eq!(&bytes[16..20], &2u32.to_be_bytes());
        assert_eq!(&bytes[20..24], &3u32.to_be_bytes());
        assert_eq!(bytes[24], 0); // rank of the lexicographically first
    }

    #[test]
    fn round_trip_all_ranks_of_small_composition() {
        let t = tv(&[2, 3]);
        for rank in 0u32..10 {
            let seq = unrank_sequence(&BigUint::from(rank), &t).unwrap();
            let bytes = encode_sequence(&seq, &t).unwrap();
            let (t2, seq2) = decode_sequence(&bytes).unwrap();
            assert_eq!(t2, t);
            assert_eq!(seq2, seq);
        }
    }

    #[test]
    fn single_class_composition_has_empty_payload() {
        let t = tv(&[4]);
        let bytes = encode_sequence(&[0, 0, 0, 0], &t).unwrap();
        assert_eq!(bytes.len(), 16 + 4);
        let (_, seq) = decode_sequence(&bytes).unwrap();
        assert_eq!(seq, vec![0, 0, 0, 0]);
    }

    #[test]
    fn encode_rejects_wrong_composition() {
        let err = encode_sequence(&[0, 0, 1, 1], &tv(&[2, 3])).unwrap_err();
        assert!(matches!(
            err,
            CodecError::Combinatorics(CombinatoricsError::CompositionMismatch { .. })
        ));
    }

    #[test]
    fn decode_rejects_structural_damage() {
        let good = encode_sequence(&[0, 1, 1], &tv(&[1, 2])).unwrap();

        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        assert!(matches!(
            decode_sequence(&bad_magic),
            Err(CodecError::CorruptHeader(_))
        ));

        let mut bad_version = good.clone();
        bad_version[4] = 9;
        assert!(matches!(
            decode_sequence(&bad_version),
            Err(CodecError::CorruptHeader(_))
        ));

        assert!(matches!(
            decode_sequence(&good[..10]),
            Err(CodecError::CorruptHeader(_))
        ));

        let mut extra = good.clone();
        extra.push(0);
        assert!(matches!(
            decode_sequence(&extra),
            Err(CodecError::CorruptHeader(_))
        ));

        let mut bad_sum = good.clone();
        bad_sum[19] = 9; // first count no longer matches T
        assert!(matches!(
            decode_sequence(&bad_sum),
            Err(CodecError::CorruptHeader(_))
        ));
    }

    #[test]
    fn decode_rejects_rank_beyond_class() {
        // (1, 1): K = 2, one payload byte; rank 2 is out of range
        let mut bytes = encode_sequence(&[0, 1], &tv(&[1, 1])).unwrap();
        *bytes.last_mut().unwrap() = 2;
        assert!(matches!(
            decode_sequence(&bytes),
            Err(CodecError::PayloadOutOfRange { .. })
        ));
    }

    #[test]
    fn payload_bits_match_log2_bound() {
        for counts in [vec![2u64, 3], vec![5, 5], vec![1, 2, 3]] {
            let t = tv(&counts);
            let bits = payload_bit_len(&t);
            let log2k = log2_biguint(&multinomial_count(&t));
            assert!(bits as f64 >= log2k);
            assert!((bits as f64) < log2k + 1.0 + 1e-9);
        }
    }
}
