//! Sliding-window local rules: neighborhood extraction, global update,
//! composition, constructive rule builders, and the `%ca` rule file format.
//!
//! A rule of radius N maps windows of length 2N+1 over the alphabet plus
//! the boundary symbol `#` (which pads negative indices) to letters. Rules
//! are evaluable objects; full tables are materialized only on request
//! because composed rules can have radii whose tables are astronomically
//! large.

use std::collections::BTreeSet;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::stream::{Alphabet, Stream, BOUNDARY, WILDCARD};

enum RuleKind {
    Table { patterns: Vec<(Vec<char>, char)>, default: char },
    Func(Box<dyn Fn(&[char]) -> char>),
}

struct RuleInner {
    alphabet: Alphabet,
    radius: u64,
    kind: RuleKind,
}

/// A total local rule over windows of length 2N+1.
///
/// Cloning is cheap; rules are immutable after construction.
#[derive(Clone)]
pub struct LocalRule {
    inner: Rc<RuleInner>,
}

impl std::fmt::Debug for LocalRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.inner.kind {
            RuleKind::Table { patterns, .. } => format!("table[{}]", patterns.len()),
            RuleKind::Func(_) => "func".to_string(),
        };
        write!(f, "LocalRule(radius {}, {kind})", self.inner.radius)
    }
}

fn pattern_matches(pattern: &[char], window: &[char]) -> bool {
    pattern
        .iter()
        .zip(window)
        .all(|(p, w)| *p == WILDCARD || p == w)
}

impl LocalRule {
    /// Builds a first-match-wins pattern table with a mandatory default.
    /// Patterns may use `#` (boundary) and `_` (matches anything).
    pub fn from_table(
        alphabet: Alphabet,
        radius: u64,
        patterns: Vec<(String, char)>,
        default: char,
    ) -> Result<Self> {
        let width = (2 * radius + 1) as usize;
        let mut compiled = Vec::with_capacity(patterns.len());
        for (pattern, out) in patterns {
            let cells: Vec<char> = pattern.chars().collect();
            if cells.len() != width {
                return Err(Error::BadRule(format!(
                    "pattern {pattern:?} has length {}, expected {width}",
                    cells.len()
                )));
            }
            for &c in &cells {
                if c != BOUNDARY && c != WILDCARD && !alphabet.contains(c) {
                    return Err(Error::BadRule(format!(
                        "pattern {pattern:?} uses {c:?}, not a letter, '#', or '_'"
                    )));
                }
            }
            if !alphabet.contains(out) {
                return Err(Error::BadRule(format!("output {out:?} is not a letter")));
            }
            compiled.push((cells, out));
        }
        if !alphabet.contains(default) {
            return Err(Error::BadRule(format!("default {default:?} is not a letter")));
        }
        Ok(LocalRule {
            inner: Rc::new(RuleInner {
                alphabet,
                radius,
                kind: RuleKind::Table { patterns: compiled, default },
            }),
        })
    }

    /// Wraps a total function as a rule. The function must return letters
    /// of the alphabet; this is checked on every evaluation.
    pub fn from_fn(
        alphabet: Alphabet,
        radius: u64,
        f: impl Fn(&[char]) -> char + 'static,
    ) -> Self {
        LocalRule {
            inner: Rc::new(RuleInner { alphabet, radius, kind: RuleKind::Func(Box::new(f)) }),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.inner.alphabet
    }

    pub fn radius(&self) -> u64 {
        self.inner.radius
    }

    /// Evaluates the rule on one window of length 2N+1.
    pub fn eval(&self, window: &[char]) -> Result<char> {
        let want = (2 * self.inner.radius + 1) as usize;
        if window.len() != want {
            return Err(Error::WindowLength {
                got: window.len(),
                radius: self.inner.radius,
                want,
            });
        }
        let out = match &self.inner.kind {
            RuleKind::Table { patterns, default } => patterns
                .iter()
                .find(|(p, _)| pattern_matches(p, window))
                .map(|(_, o)| *o)
                .unwrap_or(*default),
            RuleKind::Func(f) => f(window),
        };
        if !self.inner.alphabet.contains(out) {
            return Err(Error::BadRule(format!(
                "rule produced {out:?}, not a letter of {}",
                self.inner.alphabet.as_string()
            )));
        }
        Ok(out)
    }

    /// The pattern table, if this rule is table-backed.
    pub fn table(&self) -> Option<(Vec<(String, char)>, char)> {
        match &self.inner.kind {
            RuleKind::Table { patterns, default } => Some((
                patterns
                    .iter()
                    .map(|(p, o)| (p.iter().collect(), *o))
                    .collect(),
                *default,
            )),
            RuleKind::Func(_) => None,
        }
    }
}

/// The window (s(i-N), ..., s(i+N)) with `#` at negative positions.
pub fn neighborhood(s: &Stream, radius: u64, i: u64) -> Result<Vec<char>> {
    let mut w = Vec::with_capacity((2 * radius + 1) as usize);
    let lo = i as i128 - radius as i128;
    for j in lo..=i as i128 + radius as i128 {
        if j < 0 {
            w.push(BOUNDARY);
        } else {
            w.push(s.letter_at(j as u64)?);
        }
    }
    Ok(w)
}

/// One global update step: result(i) = rule(neighborhood(s, N, i)).
pub fn apply(rule: &LocalRule, s: &Stream) -> Result<Stream> {
    rule.alphabet().expect_same(s.alphabet())?;
    let rule = rule.clone();
    let s = s.clone();
    Ok(Stream::from_fn(rule.alphabet().clone(), move |i| {
        let w = neighborhood(&s, rule.radius(), i)?;
        rule.eval(&w)
    }))
}

/// The rule applying `r1` first and `r2` to the result, with radius N1+N2.
///
/// Boundary windows are handled exactly as sequential application would:
/// slots of the inner image that precede position 0 are `#`, and inner
/// windows that stick out to the left keep their `#` padding.
pub fn compose(r1: &LocalRule, r2: &LocalRule) -> Result<LocalRule> {
    r1.alphabet().expect_same(r2.alphabet())?;
    let n1 = r1.radius() as usize;
    let n2 = r2.radius() as usize;
    let (r1, r2) = (r1.clone(), r2.clone());
    let alphabet = r1.alphabet().clone();
    Ok(LocalRule::from_fn(
        alphabet.clone(),
        (n1 + n2) as u64,
        move |window| {
            // When the window shows L boundary cells the output index is
            // N - L, so inner-image slot t corresponds to input index
            // (N - L) - N2 + t and is itself boundary when t < L - N1.
            let leading = window.iter().take_while(|&&c| c == BOUNDARY).count();
            let mut slots = Vec::with_capacity(2 * n2 + 1);
            for t in 0..=2 * n2 {
                let slot = if leading > 0 && (t as i64) < leading as i64 - n1 as i64 {
                    BOUNDARY
                } else {
                    match r1.eval(&window[t..t + 2 * n1 + 1]) {
                        Ok(c) => c,
                        Err(_) => return alphabet.first(),
                    }
                };
                slots.push(slot);
            }
            r2.eval(&slots).unwrap_or_else(|_| alphabet.first())
        },
    ))
}

fn bit(c: char) -> u8 {
    u8::from(c == '1')
}

/// Radius-1 binary rule adding the center and right letters modulo two
/// (`#` counts as 0).
pub fn xor_rule() -> LocalRule {
    LocalRule::from_fn(Alphabet::binary(), 1, |w| {
        if bit(w[1]) ^ bit(w[2]) == 1 {
            '1'
        } else {
            '0'
        }
    })
}

/// The elementary rule numbered by the standard 8-bit convention
/// (`#` counts as 0). Rule 102 coincides with [`xor_rule`].
pub fn eca_rule(number: u8) -> LocalRule {
    LocalRule::from_fn(Alphabet::binary(), 1, move |w| {
        let idx = 4 * bit(w[0]) + 2 * bit(w[1]) + bit(w[2]);
        if number >> idx & 1 == 1 {
            '1'
        } else {
            '0'
        }
    })
}

/// Radius-0 rule ignoring its input.
pub fn const_rule(alphabet: Alphabet, letter: char) -> Result<LocalRule> {
    if !alphabet.contains(letter) {
        return Err(Error::LetterOutsideAlphabet { letter, alphabet: alphabet.as_string() });
    }
    Ok(LocalRule::from_fn(alphabet, 0, move |_| letter))
}

/// Radius-0 rule copying the center letter.
pub fn identity_rule(alphabet: Alphabet) -> LocalRule {
    let fallback = alphabet.first();
    LocalRule::from_fn(alphabet.clone(), 0, move |w| {
        if alphabet.contains(w[0]) {
            w[0]
        } else {
            fallback
        }
    })
}

/// Radius-1 rule copying the right neighbor; removes the first letter.
pub fn tail_rule(alphabet: Alphabet) -> LocalRule {
    let fallback = alphabet.first();
    LocalRule::from_fn(alphabet.clone(), 1, move |w| {
        if alphabet.contains(w[2]) {
            w[2]
        } else {
            fallback
        }
    })
}

/// Rule of radius |w| prepending the finite word `w`: boundary windows
/// read off `w`, interior windows copy the letter |w| places to the left.
pub fn prepend_rule(alphabet: Alphabet, w: &str) -> Result<LocalRule> {
    alphabet.check_word(w)?;
    let letters: Vec<char> = w.chars().collect();
    if letters.is_empty() {
        return Err(Error::BadRule("prepended word must be nonempty".into()));
    }
    let fallback = alphabet.first();
    let alpha = alphabet.clone();
    let n = letters.len();
    Ok(LocalRule::from_fn(alphabet, n as u64, move |win| {
        let leading = win.iter().take_while(|&&c| c == BOUNDARY).count();
        if leading > 0 {
            letters[n - leading.min(n)]
        } else if alpha.contains(win[0]) {
            win[0]
        } else {
            fallback
        }
    }))
}

/// Checks that all cyclic rotations of `w` are distinct.
fn is_primitive(w: &[char]) -> bool {
    let m = w.len();
    (1..m).all(|s| (0..m).any(|t| w[t] != w[(t + s) % m]))
}

/// Rule reducing the periodic stream `from^w` to `to^w`, provided |to|
/// divides |from| and `from` has no shorter period. Radius |from|-1; each
/// cyclic rotation of `from`, read from the window center rightward,
/// determines the aligned letter of `to`.
pub fn periodic_rule(from: &str, to: &str) -> Result<LocalRule> {
    let alphabet = {
        let mut letters: Vec<char> = from.chars().chain(to.chars()).collect();
        letters.sort_unstable();
        letters.dedup();
        if letters.iter().all(|c| *c == '0' || *c == '1') {
            Alphabet::binary()
        } else {
            Alphabet::new(&letters.iter().collect::<String>())?
        }
    };
    let wm: Vec<char> = from.chars().collect();
    let wn: Vec<char> = to.chars().collect();
    let (m, n) = (wm.len(), wn.len());
    if m == 0 || n == 0 {
        return Err(Error::BadRule("periodic words must be nonempty".into()));
    }
    if m % n != 0 {
        return Err(Error::BadRule(format!(
            "target period {n} does not divide source period {m}"
        )));
    }
    if !is_primitive(&wm) {
        return Err(Error::BadRule(format!("{from:?} has a shorter period")));
    }
    let mut patterns = Vec::with_capacity(m);
    for s in 0..m {
        let mut pattern: String = std::iter::repeat(WILDCARD).take(m - 1).collect();
        pattern.extend((0..m).map(|t| wm[(s + t) % m]));
        patterns.push((pattern, wn[s % n]));
    }
    LocalRule::from_table(alphabet, m as u64 - 1, patterns, wn[0])
}

/// The patch-collapse rule of the descending-chain construction: radius
/// 2i+1, fills 0-runs of length at most `i` that are flanked by 1s and
/// preceded either by another 1 or by the spacing pattern 1 . 0^i.
pub fn mu_chain_rule(i: u64) -> LocalRule {
    let i = i as usize;
    let center = 2 * i + 1;
    LocalRule::from_fn(Alphabet::binary(), center as u64, move |w| {
        if w[center] == '1' {
            return '1';
        }
        for k in 1..=i {
            for p in 0..k {
                // Candidate: the center is the p-th letter of a 0-run of
                // length k spanning [center-p, center-p+k).
                let start = center - p;
                if !(w[start..start + k].iter().all(|&c| c == '0')) {
                    continue;
                }
                if w[start - 1] != '1' || w[start + k] != '1' {
                    continue;
                }
                let ctx = start - 2;
                let dense_left = w[ctx] == '1';
                let spaced_left =
                    w[ctx] == '0' && w[ctx - i] == '1' && w[ctx - i + 1..ctx].iter().all(|&c| c == '0');
                if dense_left || spaced_left {
                    return '1';
                }
            }
        }
        '0'
    })
}

/// The word a radius-N rule writes around an isolated 1: letter t is the
/// rule's output on the window 0^{2N-t} . 1 . 0^t.
pub fn sparse_extract_w(rule: &LocalRule, radius: u64) -> Result<String> {
    if radius != rule.radius() {
        return Err(Error::BadRule(format!(
            "extraction radius {radius} does not match rule radius {}",
            rule.radius()
        )));
    }
    if !rule.alphabet().is_binary() {
        return Err(Error::NonBinaryAlphabet { got: rule.alphabet().as_string() });
    }
    let width = (2 * radius + 1) as usize;
    let mut w = String::with_capacity(width);
    for t in 0..width {
        let mut window = vec!['0'; width];
        window[width - 1 - t] = '1';
        w.push(rule.eval(&window)?);
    }
    Ok(w)
}

/// Rule emitting 1 exactly on the windows equal to `w` (odd length), so
/// the 1s of the preimage reappear at the centers of the `w`-copies.
pub fn sparse_recover_rule(w: &str) -> Result<LocalRule> {
    let cells: Vec<char> = w.chars().collect();
    if cells.len() % 2 == 0 || cells.is_empty() {
        return Err(Error::BadRule(format!(
            "recovery word must have odd length, got {}",
            cells.len()
        )));
    }
    for &c in &cells {
        if c != '0' && c != '1' {
            return Err(Error::BadRule(format!("recovery word must be binary, got {c:?}")));
        }
    }
    let radius = (cells.len() as u64 - 1) / 2;
    LocalRule::from_table(Alphabet::binary(), radius, vec![(w.to_string(), '1')], '0')
}

/// Rule undoing a marked rewrite: windows covering an occurrence of the
/// marked word `v_hat` output the corresponding letter of `w`; everything
/// else copies the center. Radius |w|-1.
pub fn maximal_inverse_rule(w: &str, v_hat: &str) -> Result<LocalRule> {
    let w: Vec<char> = w.chars().collect();
    let marked: Vec<char> = v_hat.chars().collect();
    if w.len() != marked.len() || w.is_empty() {
        return Err(Error::BadRule(format!(
            "pattern length {} does not match marked-word length {}",
            w.len(),
            marked.len()
        )));
    }
    let n = w.len();
    let center = n - 1;
    Ok(LocalRule::from_fn(Alphabet::binary(), center as u64, move |win| {
        for t in (0..n).rev() {
            let start = center - t;
            if win[start..start + n] == marked[..] {
                return w[t];
            }
        }
        if win[center] == '1' {
            '1'
        } else {
            '0'
        }
    }))
}

const GAP_CLEARANCE: u64 = 7;
const THRESHOLD_SCAN: u64 = 4096;

/// Positions of 1s in `s` on [from, to).
fn events_in(s: &Stream, from: u64, to: u64) -> Result<Vec<u64>> {
    let mut ones = Vec::new();
    for i in from..to {
        if s.letter_at(i)? == '1' {
            ones.push(i);
        }
    }
    Ok(ones)
}

/// First position after the last 1 (within the scan window) that is not
/// followed by at least seven 0s.
fn clearance_threshold(s: &Stream) -> Result<u64> {
    let ones = events_in(s, 0, THRESHOLD_SCAN)?;
    let mut threshold = 0;
    for pair in ones.windows(2) {
        if pair[1] - pair[0] <= GAP_CLEARANCE {
            threshold = pair[0] + 1;
        }
    }
    Ok(threshold)
}

/// The cells of one interleaving pattern anchored at its first 1.
///
/// Four-cell patterns carry a pair of events at distance at most 3; the
/// eight-cell ones (prefix 1111) carry an isolated event or a pair at
/// distance 4..=7. `a_first` tells which stream owns the anchor.
fn pattern_cells(a_first: bool, partner_offset: Option<u64>) -> Vec<char> {
    let cells: Vec<u8> = match partner_offset {
        // Four-cell pair markers: cells 1-2 hold a two-bit distance code,
        // cell 3 tells which stream owns the anchor. A second-stream
        // anchor implies distance >= 1, so the code stores k-1 there.
        Some(k @ 0..=3) if a_first => vec![1, (k & 1) as u8, (k >> 1 & 1) as u8, 0],
        Some(k @ 1..=3) => vec![1, ((k - 1) & 1) as u8, ((k - 1) >> 1 & 1) as u8, 1],
        // Eight-cell pair markers 1111 t 1 a b: t names the anchor's
        // stream and ab is the distance minus 4.
        Some(k @ 4..=7) => {
            let tag = u8::from(!a_first);
            vec![1, 1, 1, 1, tag, 1, ((k - 4) >> 1 & 1) as u8, ((k - 4) & 1) as u8]
        }
        Some(_) => unreachable!("pair offsets are clamped to 0..=7 with ties anchored first"),
        None if a_first => vec![1, 1, 1, 1, 0, 0, 0, 0],
        None => vec![1, 1, 1, 1, 1, 0, 0, 0],
    };
    cells.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}

/// Interleaves two sparse binary streams into one: beyond the clearance
/// threshold every 1 of either input becomes a short marker pattern in
/// the output, from which both inputs can be recovered by the rules of
/// [`suprema_decode_rules`]. Events before the threshold are dropped.
///
/// Errors if events beyond the threshold sit too close together for the
/// marker patterns to stay unambiguous.
pub fn suprema_encode(a: &Stream, b: &Stream) -> Result<Stream> {
    for s in [a, b] {
        if !s.alphabet().is_binary() {
            return Err(Error::NonBinaryAlphabet { got: s.alphabet().as_string() });
        }
    }
    let threshold = clearance_threshold(a)?.max(clearance_threshold(b)?);
    let streams = [a.clone(), b.clone()];
    let mut scans = [threshold, threshold];
    let mut nexts: [Option<u64>; 2] = [None, None];
    let mut scheduled: BTreeSet<u64> = BTreeSet::new();
    let mut next_legal: u64 = 0;
    // Finds the next event of one stream, scanning no further than `cap`.
    fn advance(s: &Stream, scan: &mut u64, next: &mut Option<u64>, cap: u64) -> Result<()> {
        while next.is_none() && *scan <= cap {
            if s.letter_at(*scan)? == '1' {
                *next = Some(*scan);
            }
            *scan += 1;
        }
        Ok(())
    }
    Ok(Stream::from_gen(Alphabet::binary(), move |i| {
        // Every anchor at position <= i must be decided before cell i is
        // emitted; deciding an anchor needs the partner stream scanned
        // another GAP_CLEARANCE cells ahead.
        loop {
            for side in 0..2 {
                advance(&streams[side], &mut scans[side], &mut nexts[side], i)?;
            }
            let due = [nexts[0].filter(|&p| p <= i), nexts[1].filter(|&p| p <= i)];
            let (who, anchor) = match (due[0], due[1]) {
                (None, None) => break,
                (Some(p), None) => (0, p),
                (None, Some(p)) => (1, p),
                (Some(pa), Some(pb)) => {
                    if pa <= pb {
                        (0, pa)
                    } else {
                        (1, pb)
                    }
                }
            };
            let other = 1 - who;
            advance(
                &streams[other],
                &mut scans[other],
                &mut nexts[other],
                anchor + GAP_CLEARANCE,
            )?;
            let partner = nexts[other].filter(|&p| p <= anchor + GAP_CLEARANCE);
            if anchor < next_legal {
                return Err(Error::Other(format!(
                    "marker at {anchor} would overlap the previous one (events too close \
                     beyond threshold {threshold})"
                )));
            }
            let cells = pattern_cells(who == 0, partner.map(|p| p - anchor));
            let mut last_one = 0;
            for (off, &c) in cells.iter().enumerate() {
                if c == '1' {
                    scheduled.insert(anchor + off as u64);
                    last_one = off as u64;
                }
            }
            next_legal = (anchor + cells.len() as u64).max(anchor + last_one + 4);
            nexts[who] = None;
            if partner.is_some() {
                nexts[other] = None;
            }
        }
        Ok(if scheduled.remove(&i) { '1' } else { '0' })
    }))
}

/// Events carried by the marker pattern anchored at window position `q`,
/// as (position of first-stream event, position of second-stream event).
fn marker_events(w: &[char], q: usize) -> (Option<usize>, Option<usize>) {
    if w[q + 1..q + 4].iter().all(|&c| c == '1') {
        let ext = 4 + 2 * bit(w[q + 6]) as usize + bit(w[q + 7]) as usize;
        match (w[q + 4], w[q + 5]) {
            ('0', '0') => (Some(q), None),
            ('0', '1') => (Some(q), Some(q + ext)),
            ('1', '0') => (None, Some(q)),
            _ => (Some(q + ext), Some(q)),
        }
    } else {
        let k = bit(w[q + 1]) as usize + 2 * bit(w[q + 2]) as usize;
        if w[q + 3] == '0' {
            (Some(q), Some(q + k))
        } else {
            (Some(q + k + 1), Some(q))
        }
    }
}

/// The two radius-10 rules recovering the inputs of [`suprema_encode`]:
/// the first reconstructs the first argument, the second the second.
pub fn suprema_decode_rules() -> (LocalRule, LocalRule) {
    let decode = |want_first: bool| {
        LocalRule::from_fn(Alphabet::binary(), 10, move |w| {
            let center = 10usize;
            for q in center - 7..=center {
                // A marker starts at a 1 preceded by three non-1 cells.
                if w[q] != '1' || w[q - 3..q].iter().any(|&c| c == '1') {
                    continue;
                }
                let (first, second) = marker_events(w, q);
                let hit = if want_first { first } else { second };
                if hit == Some(center) {
                    return '1';
                }
            }
            '0'
        })
    };
    (decode(true), decode(false))
}

const MATERIALIZE_LIMIT: u128 = 250_000;

/// Expands any rule into an explicit pattern table over all windows,
/// with the most common output folded into the default clause. Refused
/// when the table would be unreasonably large.
pub fn materialize(rule: &LocalRule) -> Result<LocalRule> {
    let symbols: Vec<char> = rule
        .alphabet()
        .letters()
        .iter()
        .copied()
        .chain(std::iter::once(BOUNDARY))
        .collect();
    let width = (2 * rule.radius() + 1) as usize;
    let count = (symbols.len() as u128)
        .checked_pow(width as u32)
        .filter(|&c| c <= MATERIALIZE_LIMIT)
        .ok_or_else(|| {
            Error::BadRule(format!(
                "radius {} table would exceed {MATERIALIZE_LIMIT} entries",
                rule.radius()
            ))
        })?;
    let mut rows: Vec<(Vec<char>, char)> = Vec::with_capacity(count as usize);
    let mut odometer = vec![0usize; width];
    loop {
        let window: Vec<char> = odometer.iter().map(|&d| symbols[d]).collect();
        let out = rule.eval(&window)?;
        rows.push((window, out));
        let mut pos = width;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < symbols.len() {
                break;
            }
            odometer[pos] = 0;
        }
        if odometer.iter().all(|&d| d == 0) {
            break;
        }
    }
    let default = *rule
        .alphabet()
        .letters()
        .iter()
        .max_by_key(|&&letter| rows.iter().filter(|(_, o)| *o == letter).count())
        .expect("alphabet is nonempty");
    let patterns = rows
        .into_iter()
        .filter(|(_, o)| *o != default)
        .map(|(wdw, o)| (wdw.into_iter().collect::<String>(), o))
        .collect();
    LocalRule::from_table(rule.alphabet().clone(), rule.radius(), patterns, default)
}

/// Parses the `%ca` rule file format.
pub fn parse_rule(text: &str) -> Result<LocalRule> {
    let err = |line: usize, reason: &str| Error::FileFormat {
        what: "ca".into(),
        line,
        reason: reason.into(),
    };
    let mut lines = text.lines().enumerate();
    let header = lines.next().ok_or_else(|| err(1, "empty file"))?;
    if header.1.trim() != "%ca" {
        return Err(err(1, "expected %ca header"));
    }
    let alphabet_line = lines.next().ok_or_else(|| err(2, "missing alphabet line"))?;
    let alphabet = match alphabet_line.1.trim().strip_prefix("alphabet:") {
        Some(rest) => Alphabet::new(rest.trim())?,
        None => return Err(err(2, "expected 'alphabet: <letters>'")),
    };
    let radius_line = lines.next().ok_or_else(|| err(3, "missing radius line"))?;
    let radius: u64 = match radius_line.1.trim().strip_prefix("radius:") {
        Some(rest) => rest
            .trim()
            .parse()
            .map_err(|_| err(3, "radius is not a number"))?,
        None => return Err(err(3, "expected 'radius: <N>'")),
    };
    let mut patterns = Vec::new();
    let mut default = None;
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if default.is_some() {
            return Err(err(idx + 1, "content after the default clause"));
        }
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| err(idx + 1, "expected '<pattern> -> <letter>'"))?;
        let mut out_chars = rhs.trim().chars();
        let out = match (out_chars.next(), out_chars.next()) {
            (Some(c), None) => c,
            _ => return Err(err(idx + 1, "output must be a single letter")),
        };
        let lhs = lhs.trim();
        if lhs == "default" {
            default = Some(out);
        } else {
            patterns.push((lhs.to_string(), out));
        }
    }
    let default = default.ok_or_else(|| err(text.lines().count(), "missing default clause"))?;
    LocalRule::from_table(alphabet, radius, patterns, default)
}

/// Renders a table-backed rule in the `%ca` format; expand other rules
/// with [`materialize`] first.
pub fn format_rule(rule: &LocalRule) -> Result<String> {
    let (patterns, default) = rule
        .table()
        .ok_or_else(|| Error::BadRule("rule is not table-backed; materialize it first".into()))?;
    let mut out = String::new();
    out.push_str("%ca\n");
    out.push_str(&format!("alphabet: {}\n", rule.alphabet().as_string()));
    out.push_str(&format!("radius: {}\n", rule.radius()));
    for (pattern, letter) in &patterns {
        out.push_str(&format!("{pattern} -> {letter}\n"));
    }
    out.push_str(&format!("default -> {default}\n"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn eval_rejects_wrong_window_lengths() {
        let rule = xor_rule();
        assert!(matches!(rule.eval(&win("01")), Err(Error::WindowLength { .. })));
        assert_eq!(rule.eval(&win("011")).unwrap(), '0');
    }

    #[test]
    fn tables_match_in_order_with_wildcards() {
        let rule = LocalRule::from_table(
            Alphabet::binary(),
            1,
            vec![("1__".into(), '1'), ("#__".into(), '1'), ("_1_".into(), '0')],
            '0',
        )
        .unwrap();
        assert_eq!(rule.eval(&win("111")).unwrap(), '1');
        assert_eq!(rule.eval(&win("110")).unwrap(), '1'); // first row shadows the third
        assert_eq!(rule.eval(&win("010")).unwrap(), '0');
        assert_eq!(rule.eval(&win("#10")).unwrap(), '1');
        assert_eq!(rule.eval(&win("000")).unwrap(), '0');
    }

    #[test]
    fn from_table_validates() {
        assert!(LocalRule::from_table(Alphabet::binary(), 1, vec![("01".into(), '0')], '0').is_err());
        assert!(LocalRule::from_table(Alphabet::binary(), 1, vec![("01x".into(), '0')], '0').is_err());
        assert!(LocalRule::from_table(Alphabet::binary(), 1, vec![], 'x').is_err());
    }

    #[test]
    fn primitivity_check() {
        assert!(is_primitive(&win("011101")));
        assert!(!is_primitive(&win("0101")));
        assert!(!is_primitive(&win("111")));
    }

    #[test]
    fn rule_file_round_trip() {
        let text = "%ca\nalphabet: 01\nradius: 1\n1__ -> 1\ndefault -> 0\n";
        let rule = parse_rule(text).unwrap();
        assert_eq!(rule.radius(), 1);
        assert_eq!(rule.eval(&win("100")).unwrap(), '1');
        assert_eq!(format_rule(&rule).unwrap(), text);
    }

    #[test]
    fn rule_file_errors_carry_line_numbers() {
        assert!(matches!(
            parse_rule("%ca\nalphabet: 01\nradius: 1\n1__ -> 1\n"),
            Err(Error::FileFormat { .. })
        ));
        assert!(matches!(
            parse_rule("%fst\n"),
            Err(Error::FileFormat { line: 1, .. })
        ));
    }

    #[test]
    fn materialize_small_rule() {
        let table = materialize(&xor_rule()).unwrap();
        for w in ["000", "001", "010", "011", "#01", "1#0", "###"] {
            assert_eq!(table.eval(&win(w)).unwrap(), xor_rule().eval(&win(w)).unwrap());
        }
        assert!(materialize(&mu_chain_rule(3)).is_err());
    }
}
