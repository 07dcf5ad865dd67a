//! Lazy, memoized infinite streams over finite alphabets.
//!
//! A [`Stream`] is a total function from indices to letters, evaluated on
//! demand and cached in a growable prefix buffer. Combinators build new
//! streams out of old ones; each value memoizes independently, so repeated
//! prefix scans cost O(n) generator steps overall.
//!
//! The index space is guarded by a configurable ceiling (default 2^24,
//! override with the `STREAMLAB_MAX_PREFIX` environment variable). Exceeding
//! it is reported as an error, never answered incorrectly.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Rendering of the out-of-range symbol that pads windows at negative indices.
pub const BOUNDARY: char = '#';
/// Wildcard symbol used in rule-file patterns; matches any letter or `#`.
pub const WILDCARD: char = '_';

const DEFAULT_CEILING: u64 = 1 << 24;
const EMPTY_BLOCK_SCAN_BOUND: u64 = 100_000;

/// Current index ceiling: `STREAMLAB_MAX_PREFIX` if set and parseable,
/// otherwise 2^24. Read once per process.
pub fn index_ceiling() -> u64 {
    static CEILING: OnceLock<u64> = OnceLock::new();
    *CEILING.get_or_init(|| {
        std::env::var("STREAMLAB_MAX_PREFIX")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_CEILING)
    })
}

/// An ordered set of at least two distinct printable letters.
///
/// `#` (boundary) and `_` (wildcard) are reserved and rejected.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Rc<Vec<char>>,
}

impl std::fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Alphabet({})", self.as_string())
    }
}

impl Alphabet {
    pub fn new(letters: &str) -> Result<Self> {
        let chars: Vec<char> = letters.chars().collect();
        let fail = |reason: &str| Error::BadAlphabet {
            text: letters.to_string(),
            reason: reason.to_string(),
        };
        if chars.len() < 2 {
            return Err(fail("need at least two letters"));
        }
        for (k, &c) in chars.iter().enumerate() {
            if c == BOUNDARY || c == WILDCARD {
                return Err(fail("'#' and '_' are reserved"));
            }
            if c.is_whitespace() || c.is_control() {
                return Err(fail("letters must be printable and non-blank"));
            }
            if chars[..k].contains(&c) {
                return Err(fail("duplicate letter"));
            }
        }
        Ok(Alphabet { letters: Rc::new(chars) })
    }

    /// The two-letter alphabet `01`.
    pub fn binary() -> Self {
        Alphabet { letters: Rc::new(vec!['0', '1']) }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn first(&self) -> char {
        self.letters[0]
    }

    pub fn contains(&self, c: char) -> bool {
        self.letters.contains(&c)
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.letters.iter().position(|&x| x == c)
    }

    pub fn is_binary(&self) -> bool {
        *self.letters == ['0', '1']
    }

    pub fn as_string(&self) -> String {
        self.letters.iter().collect()
    }

    /// Error unless `other` is the same alphabet.
    pub fn expect_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                expected: self.as_string(),
                got: other.as_string(),
            })
        }
    }

    /// Validates that every char of `w` is a letter of this alphabet.
    pub fn check_word(&self, w: &str) -> Result<()> {
        for c in w.chars() {
            if !self.contains(c) {
                return Err(Error::LetterOutsideAlphabet {
                    letter: c,
                    alphabet: self.as_string(),
                });
            }
        }
        Ok(())
    }
}

type GenFn = Box<dyn FnMut(u64) -> Result<char>>;

struct Inner {
    alphabet: Alphabet,
    memo: RefCell<Vec<char>>,
    gen: RefCell<GenFn>,
    ceiling: u64,
}

/// A deterministic, total, lazily evaluated infinite word.
///
/// Cloning is cheap (shared backing); clones share one memo buffer.
#[derive(Clone)]
pub struct Stream {
    inner: Rc<Inner>,
}

impl Stream {
    /// Builds a stream from a generator called with strictly ascending
    /// indices starting at 0. The generator may keep internal state.
    pub fn from_gen(alphabet: Alphabet, gen: impl FnMut(u64) -> Result<char> + 'static) -> Self {
        Stream {
            inner: Rc::new(Inner {
                alphabet,
                memo: RefCell::new(Vec::new()),
                gen: RefCell::new(Box::new(gen)),
                ceiling: index_ceiling(),
            }),
        }
    }

    /// Builds a stream from a pure random-access function.
    pub fn from_fn(alphabet: Alphabet, f: impl Fn(u64) -> Result<char> + 'static) -> Self {
        Self::from_gen(alphabet, move |i| f(i))
    }

    /// `letter^omega`.
    pub fn constant(alphabet: Alphabet, letter: char) -> Result<Self> {
        if !alphabet.contains(letter) {
            return Err(Error::LetterOutsideAlphabet {
                letter,
                alphabet: alphabet.as_string(),
            });
        }
        Ok(Self::from_fn(alphabet, move |_| Ok(letter)))
    }

    /// `w^omega` for a nonempty word `w`.
    pub fn periodic(alphabet: Alphabet, w: &str) -> Result<Self> {
        alphabet.check_word(w)?;
        let chars: Vec<char> = w.chars().collect();
        if chars.is_empty() {
            return Err(Error::Other("periodic word must be nonempty".into()));
        }
        Ok(Self::from_fn(alphabet, move |i| {
            Ok(chars[(i % chars.len() as u64) as usize])
        }))
    }

    /// `x . y^omega` for a nonempty period `y`.
    pub fn ultimately_periodic(alphabet: Alphabet, x: &str, y: &str) -> Result<Self> {
        alphabet.check_word(x)?;
        alphabet.check_word(y)?;
        let head: Vec<char> = x.chars().collect();
        let tail: Vec<char> = y.chars().collect();
        if tail.is_empty() {
            return Err(Error::Other("ultimately periodic tail must be nonempty".into()));
        }
        Ok(Self::from_fn(alphabet, move |i| {
            let i = i as usize;
            if i < head.len() {
                Ok(head[i])
            } else {
                Ok(tail[(i - head.len()) % tail.len()])
            }
        }))
    }

    /// A finite prefix posing as a stream; indexing past its end is an error.
    /// Used for quoted sequences whose generator is not part of the artifact.
    pub fn fixture(alphabet: Alphabet, w: &str) -> Result<Self> {
        alphabet.check_word(w)?;
        let chars: Vec<char> = w.chars().collect();
        let len = chars.len();
        Ok(Self::from_fn(alphabet, move |i| {
            chars
                .get(i as usize)
                .copied()
                .ok_or(Error::FixtureExhausted { len, index: i })
        }))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.inner.alphabet
    }

    /// The letter at index `i`, memoized.
    pub fn letter_at(&self, i: u64) -> Result<char> {
        if i >= self.inner.ceiling {
            return Err(Error::CeilingExceeded { index: i, ceiling: self.inner.ceiling });
        }
        {
            let memo = self.inner.memo.borrow();
            if let Some(&c) = memo.get(i as usize) {
                return Ok(c);
            }
        }
        let mut memo = self.inner.memo.borrow_mut();
        let mut gen = self.inner.gen.borrow_mut();
        while (memo.len() as u64) <= i {
            let k = memo.len() as u64;
            let c = gen(k)?;
            if !self.inner.alphabet.contains(c) {
                return Err(Error::LetterOutsideAlphabet {
                    letter: c,
                    alphabet: self.inner.alphabet.as_string(),
                });
            }
            memo.push(c);
        }
        Ok(memo[i as usize])
    }

    /// The first `n` letters as a `String`.
    pub fn prefix(&self, n: u64) -> Result<String> {
        let mut out = String::with_capacity(n as usize);
        for i in 0..n {
            out.push(self.letter_at(i)?);
        }
        Ok(out)
    }
}

/// An infinite sequence of finite words, used to realize concatenations
/// of block families into a single stream.
pub struct WordSeq {
    block_at: Box<dyn Fn(u64) -> Vec<char>>,
}

impl WordSeq {
    pub fn new(block_at: impl Fn(u64) -> Vec<char> + 'static) -> Self {
        WordSeq { block_at: Box::new(block_at) }
    }

    pub fn block(&self, i: u64) -> Vec<char> {
        (self.block_at)(i)
    }
}

/// The concatenation of all blocks of `ws`, in order.
///
/// Empty blocks are skipped; if `EMPTY_BLOCK_SCAN_BOUND` consecutive blocks
/// are empty the stream reports an error instead of spinning.
pub fn concat_blocks(alphabet: Alphabet, ws: WordSeq) -> Stream {
    let mut next_block: u64 = 0;
    let mut buf: Vec<char> = Vec::new();
    let mut pos: usize = 0;
    Stream::from_gen(alphabet, move |_| {
        while pos >= buf.len() {
            let mut empties: u64 = 0;
            loop {
                let w = ws.block(next_block);
                next_block += 1;
                if w.is_empty() {
                    empties += 1;
                    if empties >= EMPTY_BLOCK_SCAN_BOUND {
                        return Err(Error::EmptyBlocks { scanned: empties });
                    }
                } else {
                    buf = w;
                    pos = 0;
                    break;
                }
            }
        }
        let c = buf[pos];
        pos += 1;
        Ok(c)
    })
}

/// Interleaves two streams: even indices from `a`, odd from `b`.
pub fn zip(a: &Stream, b: &Stream) -> Result<Stream> {
    a.alphabet().expect_same(b.alphabet())?;
    let (a, b) = (a.clone(), b.clone());
    Ok(Stream::from_fn(a.alphabet().clone(), move |i| {
        if i % 2 == 0 {
            a.letter_at(i / 2)
        } else {
            b.letter_at(i / 2)
        }
    }))
}

/// Bitwise complement of a binary stream.
pub fn inv(a: &Stream) -> Result<Stream> {
    if !a.alphabet().is_binary() {
        return Err(Error::NonBinaryAlphabet { got: a.alphabet().as_string() });
    }
    let s = a.clone();
    Ok(Stream::from_fn(Alphabet::binary(), move |i| {
        Ok(if s.letter_at(i)? == '0' { '1' } else { '0' })
    }))
}

/// Pointwise override of finitely many positions.
pub fn mutate(a: &Stream, edits: BTreeMap<u64, char>) -> Result<Stream> {
    for &c in edits.values() {
        if !a.alphabet().contains(c) {
            return Err(Error::LetterOutsideAlphabet {
                letter: c,
                alphabet: a.alphabet().as_string(),
            });
        }
    }
    let s = a.clone();
    Ok(Stream::from_fn(s.alphabet().clone(), move |i| match edits.get(&i) {
        Some(&c) => Ok(c),
        None => s.letter_at(i),
    }))
}

/// Removes the first `n` letters.
pub fn drop(a: &Stream, n: u64) -> Stream {
    let s = a.clone();
    Stream::from_fn(s.alphabet().clone(), move |i| s.letter_at(i + n))
}

/// Prepends the finite word `w`.
pub fn cons(w: &str, a: &Stream) -> Result<Stream> {
    a.alphabet().check_word(w)?;
    let head: Vec<char> = w.chars().collect();
    let s = a.clone();
    Ok(Stream::from_fn(s.alphabet().clone(), move |i| {
        let i = i as usize;
        if i < head.len() {
            Ok(head[i])
        } else {
            s.letter_at((i - head.len()) as u64)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_reserved_and_duplicates() {
        assert!(Alphabet::new("0").is_err());
        assert!(Alphabet::new("0#").is_err());
        assert!(Alphabet::new("a_").is_err());
        assert!(Alphabet::new("aa").is_err());
        assert!(Alphabet::new("ab").is_ok());
    }

    #[test]
    fn fixture_exhausts() {
        let s = Stream::fixture(Alphabet::binary(), "0101").unwrap();
        assert_eq!(s.prefix(4).unwrap(), "0101");
        assert!(matches!(s.letter_at(4), Err(Error::FixtureExhausted { len: 4, index: 4 })));
    }

    #[test]
    fn generator_letters_are_checked() {
        let s = Stream::from_fn(Alphabet::binary(), |_| Ok('x'));
        assert!(matches!(s.letter_at(0), Err(Error::LetterOutsideAlphabet { .. })));
    }

    #[test]
    fn empty_block_scan_is_bounded() {
        let s = concat_blocks(Alphabet::binary(), WordSeq::new(|_| Vec::new()));
        assert!(matches!(s.letter_at(0), Err(Error::EmptyBlocks { .. })));
    }
}
