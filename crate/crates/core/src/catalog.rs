//! Named generators for the streams used throughout the crate and the CLI.
//!
//! Every entry is deterministic. Atoms take parameters after a colon,
//! separated by `/` (for example `tau:3`, `ultper:11/10`, `algoctr:1/2/2`).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::stream::{concat_blocks, Alphabet, Stream, WordSeq};

/// Which occurrences a selective rewrite touches, counting from 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    All,
    Even,
    Odd,
}

impl Selector {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "all" => Ok(Selector::All),
            "even" => Ok(Selector::Even),
            "odd" => Ok(Selector::Odd),
            _ => Err(Error::Other(format!(
                "unknown selector {text:?} (expected all, even, or odd)"
            ))),
        }
    }

    fn selects(self, occurrence: u64) -> bool {
        match self {
            Selector::All => true,
            Selector::Even => occurrence % 2 == 0,
            Selector::Odd => occurrence % 2 == 1,
        }
    }
}

/// One row of the catalog listing.
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub doc: &'static str,
}

/// Everything `build` can construct, for `catalog` output and docs.
pub fn entries() -> Vec<CatalogEntry> {
    let e = |name, params, doc| CatalogEntry { name, params, doc };
    vec![
        e("tm", "", "Thue-Morse word: parity of the binary digit sum"),
        e("pd", "", "period-doubling word: successive Thue-Morse letters XORed"),
        e("ones", "", "1^w"),
        e("zeros", "", "0^w"),
        e("periodic", "w", "w^w"),
        e("ultper", "x/y", "x . y^w"),
        e("tau", "k", "(1 . 0^{k-1})^w, minimal period k"),
        e("sparse", "linear|square|pow2", "1-blocks with growing 0-gaps i, i^2, or 2^i"),
        e("sigma_weak", "i", "blocks (1.0^{i-1})^j . 0^{2^j} for j = 0, 1, ..."),
        e("mu", "j", "descending-chain stream: triangular blocks of short periodic prefixes"),
        e("primes", "", "indicator of the prime indices"),
        e("diag", "a|b", "an incomparable pair with staggered isolated 1s"),
        e("fig3", "src|dst", "block-marker pair: marker trails one block behind in dst"),
        e("unipair", "a|b", "aligned enumeration of all word pairs, lengths ascending"),
        e("algoctr", "p[/q]/s", "1-blocks with 0-gaps ceil(alpha * s^{2i+1}), alpha = p/q"),
        e("mephisto", "", "fixed point of the substitution 0 -> 001, 1 -> 110"),
        e("sierpinski", "", "17-letter fixture prefix; indexing past it is an error"),
    ]
}

/// Builds the catalog stream `name` with the given `/`-separated parameters.
pub fn build(name: &str, params: &[&str]) -> Result<Stream> {
    let bad = |reason: &str| Error::BadCatalogParams {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    let no_params = |params: &[&str]| -> Result<()> {
        if params.is_empty() {
            Ok(())
        } else {
            Err(bad("takes no parameters"))
        }
    };
    match name {
        "tm" => {
            no_params(params)?;
            Ok(thue_morse())
        }
        "pd" => {
            no_params(params)?;
            Ok(period_doubling())
        }
        "ones" => {
            no_params(params)?;
            Stream::constant(Alphabet::binary(), '1')
        }
        "zeros" => {
            no_params(params)?;
            Stream::constant(Alphabet::binary(), '0')
        }
        "periodic" => match params {
            [w] => Stream::periodic(alphabet_for_words(&[w])?, w),
            _ => Err(bad("expected one word")),
        },
        "ultper" => match params {
            [x, y] => Stream::ultimately_periodic(alphabet_for_words(&[x, y])?, x, y),
            _ => Err(bad("expected head/period")),
        },
        "tau" => match params {
            [k] => tau(parse_num(k, name)?),
            _ => Err(bad("expected a period")),
        },
        "sparse" => match params {
            [gap] => sparse(gap),
            _ => Err(bad("expected linear, square, or pow2")),
        },
        "sigma_weak" => match params {
            [i] => sigma_weak(parse_num(i, name)?),
            _ => Err(bad("expected a gap parameter")),
        },
        "mu" => match params {
            [j] => mu(parse_num(j, name)?),
            _ => Err(bad("expected a chain index")),
        },
        "primes" => {
            no_params(params)?;
            Ok(primes())
        }
        "diag" => match params {
            [side] => diag(side),
            _ => Err(bad("expected a or b")),
        },
        "fig3" => match params {
            [side] => block_marker(side),
            _ => Err(bad("expected src or dst")),
        },
        "unipair" => match params {
            [side] => unipair(side),
            _ => Err(bad("expected a or b")),
        },
        "algoctr" => match params {
            [p, s] => algo_counterexample(parse_num(p, name)?, 1, parse_num(s, name)?),
            [p, q, s] => {
                algo_counterexample(parse_num(p, name)?, parse_num(q, name)?, parse_num(s, name)?)
            }
            _ => Err(bad("expected alpha (p or p/q) and an alphabet size")),
        },
        "mephisto" => {
            no_params(params)?;
            Ok(mephisto())
        }
        "sierpinski" => {
            no_params(params)?;
            Stream::fixture(Alphabet::binary(), SIERPINSKI_PREFIX)
        }
        _ => Err(Error::UnknownCatalogEntry { name: name.to_string() }),
    }
}

/// The 17 known letters of the Sierpinski-triangle sequence; the generator
/// body is an extension point, so longer prefixes are unavailable.
pub const SIERPINSKI_PREFIX: &str = "00111100011000011";

fn parse_num(text: &str, name: &str) -> Result<u64> {
    text.parse().map_err(|_| Error::BadCatalogParams {
        name: name.to_string(),
        reason: format!("{text:?} is not a number"),
    })
}

/// Binary if the words only use 0/1, otherwise the sorted letter set.
fn alphabet_for_words(words: &[&str]) -> Result<Alphabet> {
    let mut letters: Vec<char> = words.iter().flat_map(|w| w.chars()).collect();
    letters.sort_unstable();
    letters.dedup();
    if letters.iter().all(|c| *c == '0' || *c == '1') {
        return Ok(Alphabet::binary());
    }
    Alphabet::new(&letters.iter().collect::<String>())
}

/// Thue-Morse: letter i is the parity of the number of 1 bits of i.
pub fn thue_morse() -> Stream {
    Stream::from_fn(Alphabet::binary(), |i| {
        Ok(if i.count_ones() % 2 == 0 { '0' } else { '1' })
    })
}

/// Period-doubling: letter i is tm(i) XOR tm(i+1).
pub fn period_doubling() -> Stream {
    Stream::from_fn(Alphabet::binary(), |i| {
        let parity = i.count_ones() + (i + 1).count_ones();
        Ok(if parity % 2 == 0 { '0' } else { '1' })
    })
}

fn tau(k: u64) -> Result<Stream> {
    if k == 0 {
        return Err(Error::BadCatalogParams {
            name: "tau".into(),
            reason: "period must be at least 1".into(),
        });
    }
    let mut w = String::from("1");
    w.extend(std::iter::repeat('0').take(k as usize - 1));
    Stream::periodic(Alphabet::binary(), &w)
}

/// A binary stream that is 1 exactly at the (strictly increasing) positions
/// produced by `positions`.
fn ones_at(positions: impl Iterator<Item = u64> + 'static) -> Stream {
    let mut it = positions;
    let mut next = None;
    let mut primed = false;
    Stream::from_gen(Alphabet::binary(), move |i| {
        if !primed {
            next = it.next();
            primed = true;
        }
        if next == Some(i) {
            next = it.next();
            Ok('1')
        } else {
            Ok('0')
        }
    })
}

/// Cumulative positions of the 1s in `Pi 1 . 0^{gap(i)}`.
fn block_one_positions(gap: impl Fn(u64) -> u64 + 'static) -> impl Iterator<Item = u64> {
    let mut pos: u64 = 0;
    let mut block: u64 = 0;
    std::iter::from_fn(move || {
        let here = pos;
        pos = pos.saturating_add(1).saturating_add(gap(block));
        block += 1;
        Some(here)
    })
}

fn sparse(gap: &str) -> Result<Stream> {
    let gap_fn: Box<dyn Fn(u64) -> u64> = match gap {
        "linear" => Box::new(|i| i),
        "square" => Box::new(|i| i.saturating_mul(i)),
        "pow2" => Box::new(|i| 1u64.checked_shl(i as u32).unwrap_or(u64::MAX)),
        _ => {
            return Err(Error::BadCatalogParams {
                name: "sparse".into(),
                reason: format!("unknown gap law {gap:?}"),
            })
        }
    };
    Ok(ones_at(block_one_positions(move |i| gap_fn(i))))
}

fn sigma_weak(i: u64) -> Result<Stream> {
    if i == 0 {
        return Err(Error::BadCatalogParams {
            name: "sigma_weak".into(),
            reason: "gap parameter must be at least 1".into(),
        });
    }
    // Block j is (1 . 0^{i-1})^j . 0^{2^j}; its 1s sit at the block start
    // plus multiples of i.
    let mut block_start: u64 = 0;
    let mut j: u64 = 0;
    let mut t: u64 = 0;
    Ok(ones_at(std::iter::from_fn(move || loop {
        if t < j {
            let here = block_start + t * i;
            t += 1;
            return Some(here);
        }
        let pow = 1u64.checked_shl(j as u32).unwrap_or(u64::MAX);
        block_start = block_start.saturating_add(j * i).saturating_add(pow);
        j += 1;
        t = 0;
    })))
}

fn mu(j: u64) -> Result<Stream> {
    if j == 0 {
        return Err(Error::BadCatalogParams {
            name: "mu".into(),
            reason: "chain index must be at least 1".into(),
        });
    }
    // Block t (1-indexed, length t) carries the first t letters of the
    // period-k stream (1 . 0^{k-1})^w, where k-1 counts the block's position
    // inside the triangular row r = min { r : r(r+1)/2 >= t }; chain member
    // j collapses every block with k <= j to 1^t.
    Ok(concat_blocks(
        Alphabet::binary(),
        WordSeq::new(move |b| {
            let t = b + 1;
            let mut r = 1u64;
            while r * (r + 1) / 2 < t {
                r += 1;
            }
            let k = t - r * (r - 1) / 2 + 1;
            if k <= j {
                vec!['1'; t as usize]
            } else {
                (0..t).map(|c| if c % k == 0 { '1' } else { '0' }).collect()
            }
        }),
    ))
}

fn primes() -> Stream {
    Stream::from_fn(Alphabet::binary(), |i| {
        Ok(if is_prime(i) { '1' } else { '0' })
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn zeros_then(count: u64, rest: &[char]) -> Vec<char> {
    let mut w = vec!['0'; count as usize];
    w.extend_from_slice(rest);
    w
}

fn diag(side: &str) -> Result<Stream> {
    let seq = match side {
        // Block i: 0^{5i+2} . 1 . 0^i on one side, 0^{3i+1} . 1 . 0^{3i+1}
        // on the other; both blocks have length 6i+3, so the streams stay
        // aligned while the 1s drift apart.
        "a" => WordSeq::new(|i| {
            let mut w = zeros_then(5 * i + 2, &['1']);
            w.extend(std::iter::repeat('0').take(i as usize));
            w
        }),
        "b" => WordSeq::new(|i| {
            let mut w = zeros_then(3 * i + 1, &['1']);
            w.extend(std::iter::repeat('0').take((3 * i + 1) as usize));
            w
        }),
        _ => {
            return Err(Error::BadCatalogParams {
                name: "diag".into(),
                reason: format!("expected a or b, got {side:?}"),
            })
        }
    };
    Ok(concat_blocks(Alphabet::binary(), seq))
}

fn xi(i: u64) -> char {
    if i % 3 == 2 {
        '1'
    } else {
        '0'
    }
}

fn block_marker(side: &str) -> Result<Stream> {
    // Both streams concatenate blocks 0^{i+1} . 1 . x; src carries the
    // marker letter xi(i+1), dst the one-block-older xi(i), xi = (001)^w.
    let offset = match side {
        "src" => 1,
        "dst" => 0,
        _ => {
            return Err(Error::BadCatalogParams {
                name: "fig3".into(),
                reason: format!("expected src or dst, got {side:?}"),
            })
        }
    };
    Ok(concat_blocks(
        Alphabet::binary(),
        WordSeq::new(move |i| zeros_then(i + 1, &['1', xi(i + offset)])),
    ))
}

fn unipair(side: &str) -> Result<Stream> {
    let pick_first = match side {
        "a" => true,
        "b" => false,
        _ => {
            return Err(Error::BadCatalogParams {
                name: "unipair".into(),
                reason: format!("expected a or b, got {side:?}"),
            })
        }
    };
    // For k = 1, 2, ... and every pair (w1, w2) of binary length-k words in
    // lexicographic order on the pair, append w1 (side a) or w2 (side b).
    // There are 4^k pairs of length k, so block b falls in the length class
    // reached by peeling off complete classes.
    Ok(concat_blocks(
        Alphabet::binary(),
        WordSeq::new(move |b| {
            let mut k: u32 = 1;
            let mut start: u64 = 0;
            while b - start >= 1u64 << (2 * k) {
                start += 1u64 << (2 * k);
                k += 1;
            }
            let pair = b - start;
            let word = if pick_first { pair >> k } else { pair & ((1 << k) - 1) };
            (0..k)
                .rev()
                .map(|bit| if word >> bit & 1 == 1 { '1' } else { '0' })
                .collect()
        }),
    ))
}

fn algo_counterexample(p: u64, q: u64, s: u64) -> Result<Stream> {
    if p == 0 || q == 0 || s < 2 {
        return Err(Error::BadCatalogParams {
            name: "algoctr".into(),
            reason: "need alpha > 0 and alphabet size >= 2".into(),
        });
    }
    // Block i is 0^{g(i)} . 1 with g(i) = ceil(alpha * s^{2i+1}); saturating
    // arithmetic keeps the iterator total, and the index ceiling stops
    // evaluation long before saturation could matter.
    let gap = move |i: u64| -> u64 {
        let power = (0..2 * i + 1).try_fold(1u128, |acc, _| acc.checked_mul(s as u128));
        match power {
            Some(pw) => {
                let num = (p as u128).saturating_mul(pw);
                u64::try_from(num.div_ceil(q as u128)).unwrap_or(u64::MAX)
            }
            None => u64::MAX,
        }
    };
    let mut pos: u64 = 0;
    let mut block: u64 = 0;
    Ok(ones_at(std::iter::from_fn(move || {
        let here = pos.saturating_add(gap(block));
        pos = here.saturating_add(1);
        block += 1;
        Some(here)
    })))
}

fn mephisto() -> Stream {
    // Fixed point of 0 -> 001, 1 -> 110; letter 3j+r is determined by
    // letter j, so the prefix can be grown in place.
    let mut v: Vec<u8> = vec![0];
    Stream::from_gen(Alphabet::binary(), move |i| {
        while v.len() as u64 <= i {
            let j = v.len();
            let src = v[j / 3];
            let image = if src == 0 { [0, 0, 1] } else { [1, 1, 0] };
            v.push(image[j % 3]);
        }
        Ok(if v[i as usize] == 0 { '0' } else { '1' })
    })
}

/// Rewrites selected greedy left-to-right occurrences of `w` in `base` by
/// the marked word 1 . v . 1 . 0^{|v|+1}, which has the same length as `w`
/// must have (2|v|+3) so the rewrite is length-preserving.
pub fn maximal_variant(base: &Stream, w: &str, v: &str, sel: Selector) -> Result<Stream> {
    if !base.alphabet().is_binary() {
        return Err(Error::NonBinaryAlphabet { got: base.alphabet().as_string() });
    }
    base.alphabet().check_word(w)?;
    base.alphabet().check_word(v)?;
    let w: Vec<char> = w.chars().collect();
    let marked: Vec<char> = {
        let mut m = vec!['1'];
        m.extend(v.chars());
        m.push('1');
        m.extend(std::iter::repeat('0').take(v.chars().count() + 1));
        m
    };
    if w.len() != marked.len() {
        return Err(Error::Other(format!(
            "pattern length {} does not match marked-word length {}",
            w.len(),
            marked.len()
        )));
    }
    let base = base.clone();
    let mut out: VecDeque<char> = VecDeque::new();
    let mut cursor: u64 = 0;
    let mut occurrence: u64 = 0;
    Ok(Stream::from_gen(Alphabet::binary(), move |_| {
        while out.is_empty() {
            let mut matches = true;
            for (k, &wc) in w.iter().enumerate() {
                if base.letter_at(cursor + k as u64)? != wc {
                    matches = false;
                    break;
                }
            }
            if matches {
                let replacement = if sel.selects(occurrence) { &marked } else { &w };
                out.extend(replacement.iter().copied());
                cursor += w.len() as u64;
                occurrence += 1;
            } else {
                out.push_back(base.letter_at(cursor)?);
                cursor += 1;
            }
        }
        Ok(out.pop_front().expect("refilled above"))
    }))
}
