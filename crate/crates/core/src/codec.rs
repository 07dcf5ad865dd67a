//! Fixed-width block codec between arbitrary alphabets and binary
//! streams, and the transport of local rules across it.
//!
//! Each letter becomes one marker block `1 . bits . 1 . 0^(2^d + 1)`
//! where `bits` is the letter index in d binary digits. The opening 1 is
//! the only 1 in the block preceded by a long zero run, which lets a
//! sliding window relocate the block grid without any global alignment
//! information. The naive width-d encoding (no markers) is also provided
//! as the contrast case: it drops exactly that self-synchronization.

use crate::ca::LocalRule;
use crate::error::{Error, Result};
use crate::stream::{Alphabet, Stream, BOUNDARY};

/// Marker-block encoder for one source alphabet.
#[derive(Clone, Debug)]
pub struct Codec {
    alphabet: Alphabet,
    bits: usize,
}

impl Codec {
    pub fn new(alphabet: Alphabet) -> Self {
        let mut bits = 1;
        while 1usize << bits < alphabet.len() {
            bits += 1;
        }
        Codec { alphabet, bits }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Digits in the letter-index field.
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Length of one encoded block: 1 + d + 1 + (2^d + 1).
    pub fn block_len(&self) -> u64 {
        (self.bits + (1 << self.bits) + 3) as u64
    }

    /// The marker block for one letter.
    pub fn encode_letter(&self, letter: char) -> Result<String> {
        let index = self.alphabet.index_of(letter).ok_or(Error::LetterOutsideAlphabet {
            letter,
            alphabet: self.alphabet.as_string(),
        })?;
        let mut block = String::with_capacity(self.block_len() as usize);
        block.push('1');
        for j in (0..self.bits).rev() {
            block.push(if index >> j & 1 == 1 { '1' } else { '0' });
        }
        block.push('1');
        for _ in 0..(1usize << self.bits) + 1 {
            block.push('0');
        }
        Ok(block)
    }

    /// Block-encodes a stream into a binary stream.
    pub fn encode(&self, s: &Stream) -> Result<Stream> {
        self.alphabet.expect_same(s.alphabet())?;
        let codec = self.clone();
        let s = s.clone();
        let block_len = self.block_len();
        Ok(Stream::from_fn(Alphabet::binary(), move |i| {
            let letter = s.letter_at(i / block_len)?;
            let block = codec.encode_letter(letter)?;
            Ok(block.as_bytes()[(i % block_len) as usize] as char)
        }))
    }

    /// Width-d encoding without markers; blocks cannot be re-aligned
    /// from local context.
    pub fn naive_encode(&self, s: &Stream) -> Result<Stream> {
        self.alphabet.expect_same(s.alphabet())?;
        let alphabet = self.alphabet.clone();
        let s = s.clone();
        let bits = self.bits as u64;
        Ok(Stream::from_fn(Alphabet::binary(), move |i| {
            let index = alphabet
                .index_of(s.letter_at(i / bits)?)
                .expect("stream letters are alphabet-checked");
            let j = bits - 1 - i % bits;
            Ok(if index as u64 >> j & 1 == 1 { '1' } else { '0' })
        }))
    }

    /// Inverts [`Codec::encode`], validating every block shape.
    pub fn decode(&self, encoded: &Stream) -> Result<Stream> {
        if !encoded.alphabet().is_binary() {
            return Err(Error::NonBinaryAlphabet { got: encoded.alphabet().as_string() });
        }
        let codec = self.clone();
        let encoded = encoded.clone();
        let block_len = self.block_len();
        Ok(Stream::from_fn(codec.alphabet.clone(), move |i| {
            let base = i * block_len;
            let mut cells = String::with_capacity(block_len as usize);
            for t in 0..block_len {
                cells.push(encoded.letter_at(base + t)?);
            }
            let bad = |reason: &str| Error::MalformedBlock {
                block: i,
                index: base,
                reason: reason.into(),
            };
            let bytes = cells.as_bytes();
            if bytes[0] != b'1' {
                return Err(bad("missing opening 1"));
            }
            if bytes[codec.bits + 1] != b'1' {
                return Err(bad("missing closing 1"));
            }
            if bytes[codec.bits + 2..].iter().any(|&b| b != b'0') {
                return Err(bad("nonzero padding"));
            }
            let mut index = 0usize;
            for &b in &bytes[1..=codec.bits] {
                index = index << 1 | usize::from(b == b'1');
            }
            if index >= codec.alphabet.len() {
                return Err(bad("letter index out of range"));
            }
            Ok(codec.alphabet.letters()[index])
        }))
    }
}

/// Lifts a radius-N rule on plain streams to a radius-(N+1)L rule on
/// their block encodings, where L is the block length: the lifted rule
/// locates the block grid from the marker shape, decodes the 2N+1
/// letters around its own block, applies the inner rule, and emits its
/// cell of the re-encoded output letter.
pub fn transport_rule(rule: &LocalRule, codec: &Codec) -> Result<LocalRule> {
    rule.alphabet().expect_same(codec.alphabet())?;
    let block_len = codec.block_len() as usize;
    let inner_radius = rule.radius() as usize;
    let radius = (inner_radius + 1) * block_len;
    let zero_run = (1usize << codec.bits()) + 1;
    let rule = rule.clone();
    let codec = codec.clone();
    Ok(LocalRule::from_fn(Alphabet::binary(), radius as u64, move |w| {
        let center = radius;
        // Phase of the center cell within its block.
        let phase = if w[0] == BOUNDARY {
            // Boundary windows fix the grid absolutely: the center sits
            // at stream index radius - (number of boundary cells).
            let leading = w.iter().take_while(|&&c| c == BOUNDARY).count();
            (block_len - leading % block_len) % block_len
        } else {
            // Interior windows find a block start: an opening 1 preceded
            // by the zero run that only occurs at block boundaries.
            let mut found = None;
            for s in center + 1 - block_len..=center + block_len {
                if s < zero_run {
                    continue;
                }
                if w[s] == '1' && w[s - zero_run..s].iter().all(|&c| c == '0' || c == BOUNDARY) {
                    found = Some(s);
                    break;
                }
            }
            match found {
                Some(s) => (center + block_len - s) % block_len,
                None => return '0',
            }
        };
        let block_start = center - phase;
        let mut letters = Vec::with_capacity(2 * inner_radius + 1);
        for j in -(inner_radius as i64)..=inner_radius as i64 {
            let base = block_start as i64 + j * block_len as i64;
            let mut index = 0usize;
            let mut boundary = false;
            let mut valid = true;
            for t in 1..=codec.bits() {
                match w.get((base + t as i64) as usize) {
                    Some(&BOUNDARY) => boundary = true,
                    Some(&'1') => index = index << 1 | 1,
                    Some(&'0') => index <<= 1,
                    _ => valid = false,
                }
            }
            if base < 0 || boundary {
                letters.push(BOUNDARY);
            } else if valid && index < codec.alphabet().len() {
                letters.push(codec.alphabet().letters()[index]);
            } else {
                return '0';
            }
        }
        let out = match rule.eval(&letters) {
            Ok(letter) => letter,
            Err(_) => return '0',
        };
        let block = codec.encode_letter(out).expect("rule outputs are letters");
        block.as_bytes()[phase] as char
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_shapes() {
        let binary = Codec::new(Alphabet::binary());
        assert_eq!(binary.bits(), 1);
        assert_eq!(binary.block_len(), 6);
        assert_eq!(binary.encode_letter('0').unwrap(), "101000");
        assert_eq!(binary.encode_letter('1').unwrap(), "111000");
        let abc = Codec::new(Alphabet::new("ABC").unwrap());
        assert_eq!(abc.bits(), 2);
        assert_eq!(abc.block_len(), 9);
        assert_eq!(abc.encode_letter('A').unwrap(), "100100000");
        assert_eq!(abc.encode_letter('B').unwrap(), "101100000");
        assert_eq!(abc.encode_letter('C').unwrap(), "110100000");
        assert!(abc.encode_letter('x').is_err());
    }

    #[test]
    fn naive_blocks_are_bare_indices() {
        let abc = Codec::new(Alphabet::new("ABC").unwrap());
        let b = Stream::constant(Alphabet::new("ABC").unwrap(), 'B').unwrap();
        let c = Stream::constant(Alphabet::new("ABC").unwrap(), 'C').unwrap();
        assert_eq!(abc.naive_encode(&b).unwrap().prefix(6).unwrap(), "010101");
        assert_eq!(abc.naive_encode(&c).unwrap().prefix(6).unwrap(), "101010");
    }
}
