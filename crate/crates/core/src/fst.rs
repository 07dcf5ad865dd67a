//! Sequential transducers: finite-state machines that read a stream one
//! letter at a time and emit a finite (possibly empty) word per step.
//!
//! Unlike a local rule, a transducer can buffer unboundedly far behind
//! its input, which is what lets it deinterleave, integrate, or delay
//! streams that no sliding-window rule can. Output streams detect
//! machines that stop emitting: a machine that runs too many consecutive
//! steps without output is reported as stalled.

use std::collections::{HashMap, HashSet, VecDeque};
use std::rc::Rc;

use crate::ca::{neighborhood, LocalRule};
use crate::error::{Error, Result};
use crate::stream::{Alphabet, Stream, BOUNDARY};

struct FstInner {
    alphabet: Alphabet,
    states: Vec<String>,
    start: usize,
    /// delta[state][letter index] = (next state, output word).
    delta: Vec<Vec<(usize, Vec<char>)>>,
}

/// A deterministic transducer with total transition coverage.
#[derive(Clone)]
pub struct Fst {
    inner: Rc<FstInner>,
}

impl std::fmt::Debug for Fst {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Fst({} states over {})",
            self.inner.states.len(),
            self.inner.alphabet.as_string()
        )
    }
}

impl Fst {
    /// Builds a machine from named transitions. Every (state, letter)
    /// pair must have exactly one transition, and the output words must
    /// stay inside the alphabet.
    pub fn new(
        alphabet: Alphabet,
        start: &str,
        transitions: &[(&str, char, &str, &str)],
    ) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        let start_idx = intern(start, &mut names);
        let mut partial: HashMap<(usize, usize), (usize, Vec<char>)> = HashMap::new();
        for &(from, letter, to, out) in transitions {
            let letter_idx = alphabet.index_of(letter).ok_or(Error::LetterOutsideAlphabet {
                letter,
                alphabet: alphabet.as_string(),
            })?;
            if out != "-" {
                alphabet.check_word(out)?;
            }
            let from_idx = intern(from, &mut names);
            let to_idx = intern(to, &mut names);
            let word: Vec<char> = if out == "-" { Vec::new() } else { out.chars().collect() };
            if partial.insert((from_idx, letter_idx), (to_idx, word)).is_some() {
                return Err(Error::BadRule(format!(
                    "duplicate transition from {from:?} on {letter:?}"
                )));
            }
        }
        let mut delta = Vec::with_capacity(names.len());
        for (s, name) in names.iter().enumerate() {
            let mut row = Vec::with_capacity(alphabet.len());
            for (l, letter) in alphabet.letters().iter().enumerate() {
                let entry = partial.get(&(s, l)).cloned().ok_or_else(|| {
                    Error::BadRule(format!("state {name:?} has no transition on {letter:?}"))
                })?;
                row.push(entry);
            }
            delta.push(row);
        }
        Ok(Fst {
            inner: Rc::new(FstInner { alphabet, states: names, start: start_idx, delta }),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.inner.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.inner.states.len()
    }

    /// Steps allowed without any output before the run counts as stalled.
    pub fn stall_bound(&self) -> u64 {
        let max_out = self
            .inner
            .delta
            .iter()
            .flatten()
            .map(|(_, w)| w.len() as u64)
            .max()
            .unwrap_or(0);
        4 * self.inner.states.len() as u64 * (1 + max_out)
    }
}

/// Runs the machine on `s` and returns the emitted stream. Reading a
/// letter of the result consumes as much input as needed; if the machine
/// makes too many consecutive steps without emitting, the read errors
/// with a stall.
pub fn apply_fst(fst: &Fst, s: &Stream) -> Result<Stream> {
    fst.alphabet().expect_same(s.alphabet())?;
    let fst = fst.clone();
    let s = s.clone();
    let mut state = fst.inner.start;
    let mut cursor: u64 = 0;
    let mut buffer: VecDeque<char> = VecDeque::new();
    let bound = fst.stall_bound();
    Ok(Stream::from_gen(fst.alphabet().clone(), move |_| {
        let mut quiet: u64 = 0;
        while buffer.is_empty() {
            if quiet > bound {
                return Err(Error::Stall { steps: bound });
            }
            let letter = s.letter_at(cursor)?;
            cursor += 1;
            let letter_idx = fst
                .inner
                .alphabet
                .index_of(letter)
                .expect("stream letters are alphabet-checked");
            let (next, out) = &fst.inner.delta[state][letter_idx];
            state = *next;
            if out.is_empty() {
                quiet += 1;
            } else {
                buffer.extend(out.iter().copied());
            }
        }
        Ok(buffer.pop_front().expect("buffer is nonempty"))
    }))
}

/// Drops every second letter, starting by keeping letter 0.
pub fn deinterleave_fst() -> Fst {
    Fst::new(
        Alphabet::binary(),
        "q0",
        &[
            ("q0", '0', "q1", "0"),
            ("q0", '1', "q1", "1"),
            ("q1", '0', "q0", "-"),
            ("q1", '1', "q0", "-"),
        ],
    )
    .expect("fixed machine is well-formed")
}

/// Integrates a stream of successive pairwise differences: reading the
/// difference stream reproduces the stream it was derived from, one
/// letter ahead after the two-letter start.
pub fn xor_accumulate_fst() -> Fst {
    Fst::new(
        Alphabet::binary(),
        "q0",
        &[
            ("q0", '0', "q1", "00"),
            ("q0", '1', "q2", "01"),
            ("q1", '0', "q1", "0"),
            ("q1", '1', "q2", "1"),
            ("q2", '0', "q2", "1"),
            ("q2", '1', "q1", "0"),
        ],
    )
    .expect("fixed machine is well-formed")
}

/// Moves each block's trailing marker bit one block earlier, the
/// transformation relating the two marked block streams of the catalog.
pub fn block_marker_delay_fst() -> Fst {
    Fst::new(
        Alphabet::binary(),
        "q0",
        &[
            ("q0", '0', "q0", "0"),
            ("q0", '1', "q2", "1"),
            ("q2", '0', "q0", "0"),
            ("q2", '1', "q1", "0"),
            ("q1", '0', "q1", "0"),
            ("q1", '1', "q3", "1"),
            ("q3", '0', "q0", "1"),
            ("q3", '1', "q1", "1"),
        ],
    )
    .expect("fixed machine is well-formed")
}

const COMPILE_STATE_LIMIT: usize = 4096;

/// Compiles a local rule into a transducer that tracks the last 2N+1
/// letters as its state and emits the rule's output once the window has
/// caught up with the N-letter lookahead.
pub fn compile_ca_to_fst(rule: &LocalRule) -> Result<Fst> {
    let radius = rule.radius() as usize;
    let width = 2 * radius + 1;
    let alphabet = rule.alphabet().clone();
    let start: Vec<char> = vec![BOUNDARY; width];
    let name_of = |w: &[char]| w.iter().collect::<String>();
    let mut seen: HashSet<Vec<char>> = HashSet::new();
    let mut queue: VecDeque<Vec<char>> = VecDeque::new();
    let mut transitions: Vec<(String, char, String, String)> = Vec::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(window) = queue.pop_front() {
        for &letter in alphabet.letters() {
            let mut next = window[1..].to_vec();
            next.push(letter);
            // The window still holding boundary cells beyond the center
            // has not consumed N+1 letters yet, so there is nothing to
            // emit for it.
            let leading = next.iter().take_while(|&&c| c == BOUNDARY).count();
            let out = if leading > radius {
                "-".to_string()
            } else {
                rule.eval(&next)?.to_string()
            };
            transitions.push((name_of(&window), letter, name_of(&next), out));
            if seen.insert(next.clone()) {
                if seen.len() > COMPILE_STATE_LIMIT {
                    return Err(Error::BadRule(format!(
                        "rule of radius {radius} compiles to more than \
                         {COMPILE_STATE_LIMIT} transducer states"
                    )));
                }
                queue.push_back(next);
            }
        }
    }
    let refs: Vec<(&str, char, &str, &str)> = transitions
        .iter()
        .map(|(f, l, t, o)| (f.as_str(), *l, t.as_str(), o.as_str()))
        .collect();
    Fst::new(alphabet, &name_of(&start), &refs)
}

/// Parses the `%fst` machine file format.
pub fn parse_fst(text: &str) -> Result<Fst> {
    let err = |line: usize, reason: &str| Error::FileFormat {
        what: "fst".into(),
        line,
        reason: reason.into(),
    };
    let mut lines = text.lines().enumerate();
    let header = lines.next().ok_or_else(|| err(1, "empty file"))?;
    if header.1.trim() != "%fst" {
        return Err(err(1, "expected %fst header"));
    }
    let alphabet_line = lines.next().ok_or_else(|| err(2, "missing alphabet line"))?;
    let alphabet = match alphabet_line.1.trim().strip_prefix("alphabet:") {
        Some(rest) => Alphabet::new(rest.trim())?,
        None => return Err(err(2, "expected 'alphabet: <letters>'")),
    };
    let start_line = lines.next().ok_or_else(|| err(3, "missing start line"))?;
    let start = match start_line.1.trim().strip_prefix("start:") {
        Some(rest) => rest.trim().to_string(),
        None => return Err(err(3, "expected 'start: <state>'")),
    };
    let mut transitions: Vec<(String, char, String, String)> = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| err(idx + 1, "expected '<state> <letter> -> <state> / <word>'"))?;
        let mut lhs_parts = lhs.split_whitespace();
        let (from, letter_text) = match (lhs_parts.next(), lhs_parts.next(), lhs_parts.next()) {
            (Some(f), Some(l), None) => (f, l),
            _ => return Err(err(idx + 1, "left side must be '<state> <letter>'")),
        };
        let mut letter_chars = letter_text.chars();
        let letter = match (letter_chars.next(), letter_chars.next()) {
            (Some(c), None) => c,
            _ => return Err(err(idx + 1, "input letter must be a single character")),
        };
        let (to, out) = rhs
            .split_once('/')
            .ok_or_else(|| err(idx + 1, "right side must be '<state> / <word>'"))?;
        transitions.push((
            from.to_string(),
            letter,
            to.trim().to_string(),
            out.trim().to_string(),
        ));
    }
    let refs: Vec<(&str, char, &str, &str)> = transitions
        .iter()
        .map(|(f, l, t, o)| (f.as_str(), *l, t.as_str(), o.as_str()))
        .collect();
    Fst::new(alphabet, &start, &refs)
}

/// Renders a machine in the `%fst` format.
pub fn format_fst(fst: &Fst) -> String {
    let inner = &fst.inner;
    let mut out = String::new();
    out.push_str("%fst\n");
    out.push_str(&format!("alphabet: {}\n", inner.alphabet.as_string()));
    out.push_str(&format!("start: {}\n", inner.states[inner.start]));
    for (s, row) in inner.delta.iter().enumerate() {
        for (l, (to, word)) in row.iter().enumerate() {
            let word_text: String = if word.is_empty() {
                "-".into()
            } else {
                word.iter().collect()
            };
            out.push_str(&format!(
                "{} {} -> {} / {}\n",
                inner.states[s],
                inner.alphabet.letters()[l],
                inner.states[*to],
                word_text
            ));
        }
    }
    out
}

/// First pair of positions whose radius-N source windows agree while the
/// target letters differ, scanning up to `horizon`.
pub fn conflict_witness(
    src: &Stream,
    dst: &Stream,
    radius: u64,
    horizon: u64,
) -> Result<Option<(u64, u64)>> {
    let mut seen: HashMap<Vec<char>, (char, u64)> = HashMap::new();
    for i in 0..horizon {
        let window = neighborhood(src, radius, i)?;
        let target = dst.letter_at(i)?;
        match seen.get(&window) {
            Some(&(prev_target, prev_i)) if prev_target != target => {
                return Ok(Some((prev_i, i)));
            }
            Some(_) => {}
            None => {
                seen.insert(window, (target, i));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machines_require_total_coverage() {
        assert!(matches!(
            Fst::new(Alphabet::binary(), "q0", &[("q0", '0', "q0", "0")]),
            Err(Error::BadRule(_))
        ));
        assert!(Fst::new(
            Alphabet::binary(),
            "q0",
            &[("q0", '0', "q0", "0"), ("q0", '1', "q0", "1"), ("q0", '1', "q0", "0")]
        )
        .is_err());
    }

    #[test]
    fn stall_bound_scales_with_machine_size() {
        assert_eq!(deinterleave_fst().stall_bound(), 16);
        assert_eq!(xor_accumulate_fst().stall_bound(), 36);
    }

    #[test]
    fn silent_machines_stall() {
        let quiet = Fst::new(
            Alphabet::binary(),
            "q0",
            &[("q0", '0', "q0", "-"), ("q0", '1', "q0", "-")],
        )
        .unwrap();
        let s = Stream::constant(Alphabet::binary(), '0').unwrap();
        let out = apply_fst(&quiet, &s).unwrap();
        assert!(matches!(out.letter_at(0), Err(Error::Stall { .. })));
    }
}
