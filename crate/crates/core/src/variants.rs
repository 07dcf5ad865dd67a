//! Phase-switching and word-emitting rule variants.
//!
//! Two liberalizations of the sliding-window model. A hybrid rule keeps
//! a bank of K same-radius rules and picks one by output index, so the
//! machine can treat even and odd (or any residue class of) positions
//! differently. A finite-word rule emits a word per window, empty words
//! allowed, so the output is the concatenation of all emissions and the
//! machine can stretch or shrink its input.

use std::fmt::Write as _;

use crate::ca::{neighborhood, LocalRule};
use crate::error::{Error, Result};
use crate::stream::{Alphabet, Stream, BOUNDARY, WILDCARD};

/// A bank of K same-radius rules applied cyclically: output index i is
/// produced by the rule at position i mod K in the bank.
#[derive(Clone)]
pub struct HybridRule {
    rules: Vec<LocalRule>,
}

impl std::fmt::Debug for HybridRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HybridRule(radius {}, {} phases)", self.radius(), self.phases())
    }
}

impl HybridRule {
    /// Bundles phase rules into a hybrid rule. All phases must share one
    /// alphabet and radius.
    pub fn new(rules: Vec<LocalRule>) -> Result<Self> {
        let first = rules
            .first()
            .ok_or_else(|| Error::BadRule("a hybrid rule needs at least one phase".into()))?;
        for rule in &rules[1..] {
            first.alphabet().expect_same(rule.alphabet())?;
            if rule.radius() != first.radius() {
                return Err(Error::BadRule(format!(
                    "phase radii differ: {} vs {}",
                    first.radius(),
                    rule.radius()
                )));
            }
        }
        Ok(HybridRule { rules })
    }

    pub fn phases(&self) -> usize {
        self.rules.len()
    }

    pub fn radius(&self) -> u64 {
        self.rules[0].radius()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.rules[0].alphabet()
    }

    /// The phase rule for output indices congruent to `k` mod K.
    pub fn rule(&self, k: usize) -> &LocalRule {
        &self.rules[k]
    }
}

/// Applies a hybrid rule everywhere: index i gets the letter of phase
/// rule i mod K read on the radius-N window around i.
pub fn apply_hybrid(h: &HybridRule, s: &Stream) -> Result<Stream> {
    h.alphabet().expect_same(s.alphabet())?;
    let (h, s) = (h.clone(), s.clone());
    let k = h.phases() as u64;
    Ok(Stream::from_fn(h.alphabet().clone(), move |i| {
        let window = neighborhood(&s, h.radius(), i)?;
        h.rule((i % k) as usize).eval(&window)
    }))
}

/// Composes two hybrid rules into one that acts like the first followed
/// by the second: K1*K2 phases of radius N1+N2. Output phase r feeds the
/// second bank's rule r mod K2 with first-bank letters whose own phases
/// follow the intermediate indices r-N2..r+N2.
pub fn compose_hybrid(first: &HybridRule, second: &HybridRule) -> Result<HybridRule> {
    first.alphabet().expect_same(second.alphabet())?;
    let alphabet = first.alphabet().clone();
    let (k1, k2) = (first.phases() as u64, second.phases() as u64);
    let (n1, n2) = (first.radius() as usize, second.radius() as usize);
    let mut rules = Vec::with_capacity((k1 * k2) as usize);
    for r in 0..k1 * k2 {
        let inner = first.clone();
        let outer = second.rule((r % k2) as usize).clone();
        let alphabet = alphabet.clone();
        rules.push(LocalRule::from_fn(
            alphabet.clone(),
            (n1 + n2) as u64,
            move |window| {
                let leading = window.iter().take_while(|&&c| c == BOUNDARY).count();
                let mut slots = Vec::with_capacity(2 * n2 + 1);
                for t in 0..=2 * n2 {
                    let slot = if leading > 0 && (t as i64) < leading as i64 - n1 as i64 {
                        BOUNDARY
                    } else {
                        let phase =
                            (r as i64 - n2 as i64 + t as i64).rem_euclid(k1 as i64) as usize;
                        match inner.rule(phase).eval(&window[t..t + 2 * n1 + 1]) {
                            Ok(c) => c,
                            Err(_) => return alphabet.first(),
                        }
                    };
                    slots.push(slot);
                }
                outer.eval(&slots).unwrap_or_else(|_| alphabet.first())
            },
        ));
    }
    HybridRule::new(rules)
}

/// Parses the `%hca` file format: header, `alphabet:`, `radius:`,
/// `phases: K`, then one `phase k:` block per phase, each a pattern
/// table ending in its own default clause.
pub fn parse_hybrid(text: &str) -> Result<HybridRule> {
    let err = |line: usize, reason: &str| Error::FileFormat {
        what: "hca",
        line,
        reason: reason.into(),
    };
    let mut lines = text.lines().enumerate();
    let header = lines.next().ok_or_else(|| err(1, "empty file"))?;
    if header.1.trim() != "%hca" {
        return Err(err(1, "expected %hca header"));
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
    let phases_line = lines.next().ok_or_else(|| err(4, "missing phases line"))?;
    let phases: usize = match phases_line.1.trim().strip_prefix("phases:") {
        Some(rest) => rest
            .trim()
            .parse()
            .map_err(|_| err(4, "phase count is not a number"))?,
        None => return Err(err(4, "expected 'phases: <K>'")),
    };
    if phases == 0 {
        return Err(err(4, "phase count must be at least 1"));
    }

    let mut rules = Vec::with_capacity(phases);
    let mut patterns: Vec<(String, char)> = Vec::new();
    let mut default: Option<char> = None;
    let mut open_phase: Option<usize> = None;
    let close = |open: &mut Option<usize>,
                     patterns: &mut Vec<(String, char)>,
                     default: &mut Option<char>,
                     rules: &mut Vec<LocalRule>,
                     line: usize|
     -> Result<()> {
        if let Some(k) = open.take() {
            let d = default
                .take()
                .ok_or_else(|| err(line, &format!("phase {k} is missing its default clause")))?;
            rules.push(LocalRule::from_table(
                alphabet.clone(),
                radius,
                std::mem::take(patterns),
                d,
            )?);
        }
        Ok(())
    };
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("phase ") {
            let label = rest.trim_end_matches(':').trim();
            let k: usize = label
                .parse()
                .map_err(|_| err(idx + 1, "phase label is not a number"))?;
            close(&mut open_phase, &mut patterns, &mut default, &mut rules, idx + 1)?;
            if k != rules.len() + 1 {
                return Err(err(
                    idx + 1,
                    &format!("expected phase {}, found phase {k}", rules.len() + 1),
                ));
            }
            open_phase = Some(k);
            continue;
        }
        if open_phase.is_none() {
            return Err(err(idx + 1, "pattern line outside any phase block"));
        }
        if default.is_some() {
            return Err(err(idx + 1, "content after the phase's default clause"));
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
    let last = text.lines().count();
    close(&mut open_phase, &mut patterns, &mut default, &mut rules, last)?;
    if rules.len() != phases {
        return Err(err(
            last,
            &format!("declared {phases} phases, found {}", rules.len()),
        ));
    }
    HybridRule::new(rules)
}

/// Renders a hybrid rule in the `%hca` format. Every phase must carry a
/// finite pattern table.
pub fn format_hybrid(h: &HybridRule) -> Result<String> {
    let mut out = String::from("%hca\n");
    let _ = writeln!(out, "alphabet: {}", h.alphabet().as_string());
    let _ = writeln!(out, "radius: {}", h.radius());
    let _ = writeln!(out, "phases: {}", h.phases());
    for k in 0..h.phases() {
        let (patterns, default) = h.rule(k).table().ok_or_else(|| {
            Error::Other(format!("phase {} has no finite table to print", k + 1))
        })?;
        let _ = writeln!(out, "phase {}:", k + 1);
        for (pattern, letter) in patterns {
            let _ = writeln!(out, "{pattern} -> {letter}");
        }
        let _ = writeln!(out, "default -> {default}");
    }
    Ok(out)
}

enum WordRuleKind {
    Table {
        patterns: Vec<(Vec<char>, String)>,
        default: String,
    },
    Func(Box<dyn Fn(&[char]) -> String>),
}

/// A rule that emits a finite word (possibly empty) per window; the
/// image of a stream is the concatenation of all emissions.
pub struct FiniteWordRule {
    alphabet: Alphabet,
    radius: u64,
    kind: WordRuleKind,
}

impl std::fmt::Debug for FiniteWordRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.kind {
            WordRuleKind::Table { patterns, .. } => format!("table[{}]", patterns.len()),
            WordRuleKind::Func(_) => "func".to_string(),
        };
        write!(f, "FiniteWordRule(radius {}, {kind})", self.radius)
    }
}

impl FiniteWordRule {
    /// Builds a word rule from a pattern table. Patterns may use '#' for
    /// the boundary and '_' as a wildcard; first match wins, unmatched
    /// windows emit the default word.
    pub fn from_table(
        alphabet: Alphabet,
        radius: u64,
        patterns: Vec<(String, String)>,
        default: String,
    ) -> Result<Self> {
        let width = (2 * radius + 1) as usize;
        let mut compiled = Vec::with_capacity(patterns.len());
        for (pattern, word) in patterns {
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
            check_word(&alphabet, &word)?;
            compiled.push((cells, word));
        }
        check_word(&alphabet, &default)?;
        Ok(FiniteWordRule {
            alphabet,
            radius,
            kind: WordRuleKind::Table { patterns: compiled, default },
        })
    }

    /// Wraps a total function as a word rule; outputs are letter-checked
    /// on every evaluation.
    pub fn from_fn(
        alphabet: Alphabet,
        radius: u64,
        f: impl Fn(&[char]) -> String + 'static,
    ) -> Self {
        FiniteWordRule { alphabet, radius, kind: WordRuleKind::Func(Box::new(f)) }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    /// The word emitted for one window of length 2N+1.
    pub fn eval(&self, window: &[char]) -> Result<String> {
        let want = (2 * self.radius + 1) as usize;
        if window.len() != want {
            return Err(Error::WindowLength { got: window.len(), radius: self.radius, want });
        }
        let word = match &self.kind {
            WordRuleKind::Table { patterns, default } => patterns
                .iter()
                .find(|(p, _)| {
                    p.iter()
                        .zip(window)
                        .all(|(&pc, &wc)| pc == WILDCARD || pc == wc)
                })
                .map(|(_, w)| w.clone())
                .unwrap_or_else(|| default.clone()),
            WordRuleKind::Func(f) => f(window),
        };
        check_word(&self.alphabet, &word)?;
        Ok(word)
    }

    pub fn table(&self) -> Option<(Vec<(String, String)>, String)> {
        match &self.kind {
            WordRuleKind::Table { patterns, default } => Some((
                patterns
                    .iter()
                    .map(|(p, w)| (p.iter().collect(), w.clone()))
                    .collect(),
                default.clone(),
            )),
            WordRuleKind::Func(_) => None,
        }
    }
}

fn check_word(alphabet: &Alphabet, word: &str) -> Result<()> {
    for c in word.chars() {
        if !alphabet.contains(c) {
            return Err(Error::LetterOutsideAlphabet {
                letter: c,
                alphabet: alphabet.as_string(),
            });
        }
    }
    Ok(())
}

/// Doubles every letter: window center c emits cc.
pub fn double_rule(alphabet: Alphabet) -> FiniteWordRule {
    FiniteWordRule::from_fn(alphabet, 0, |w| [w[0], w[0]].iter().collect())
}

/// Erases one letter and copies the rest.
pub fn erase_rule(alphabet: Alphabet, erased: char) -> Result<FiniteWordRule> {
    if !alphabet.contains(erased) {
        return Err(Error::LetterOutsideAlphabet {
            letter: erased,
            alphabet: alphabet.as_string(),
        });
    }
    Ok(FiniteWordRule::from_fn(alphabet, 0, move |w| {
        if w[0] == erased {
            String::new()
        } else {
            w[0].to_string()
        }
    }))
}

/// Concatenated emissions of `rule` over `s` until at least `min_out`
/// letters have accumulated.
///
/// Whether a word rule ever emits again is undecidable in general, so
/// the scan gives up after max(64, 4*min_out) consecutive empty
/// emissions and reports a stall. That budget comfortably covers the
/// linearly growing quiet gaps of the marker-erasure streams used here
/// while still terminating on silent rules.
pub fn apply_fword(rule: &FiniteWordRule, s: &Stream, min_out: u64) -> Result<String> {
    rule.alphabet().expect_same(s.alphabet())?;
    let quiet_limit = 64u64.max(4 * min_out);
    let mut out = String::new();
    let mut quiet = 0u64;
    let mut i = 0u64;
    while (out.len() as u64) < min_out {
        let emitted = rule.eval(&neighborhood(s, rule.radius(), i)?)?;
        if emitted.is_empty() {
            quiet += 1;
            if quiet > quiet_limit {
                return Err(Error::Stall { steps: quiet });
            }
        } else {
            quiet = 0;
            out.push_str(&emitted);
        }
        i += 1;
    }
    Ok(out)
}

/// Parses the `%fca` file format: like `%ca` but the right-hand side is
/// a word, with `-` standing for the empty word.
pub fn parse_fword(text: &str) -> Result<FiniteWordRule> {
    let err = |line: usize, reason: &str| Error::FileFormat {
        what: "fca",
        line,
        reason: reason.into(),
    };
    let mut lines = text.lines().enumerate();
    let header = lines.next().ok_or_else(|| err(1, "empty file"))?;
    if header.1.trim() != "%fca" {
        return Err(err(1, "expected %fca header"));
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
            .ok_or_else(|| err(idx + 1, "expected '<pattern> -> <word|->'"))?;
        let rhs = rhs.trim();
        if rhs.is_empty() {
            return Err(err(idx + 1, "missing output word (use '-' for the empty word)"));
        }
        let word = if rhs == "-" { String::new() } else { rhs.to_string() };
        let lhs = lhs.trim();
        if lhs == "default" {
            default = Some(word);
        } else {
            patterns.push((lhs.to_string(), word));
        }
    }
    let default = default.ok_or_else(|| err(text.lines().count(), "missing default clause"))?;
    FiniteWordRule::from_table(alphabet, radius, patterns, default)
}

/// Renders a word rule in the `%fca` format; requires a finite table.
pub fn format_fword(rule: &FiniteWordRule) -> Result<String> {
    let (patterns, default) = rule
        .table()
        .ok_or_else(|| Error::Other("word rule has no finite table to print".into()))?;
    let mut out = String::from("%fca\n");
    let _ = writeln!(out, "alphabet: {}", rule.alphabet().as_string());
    let _ = writeln!(out, "radius: {}", rule.radius());
    let show = |w: &str| if w.is_empty() { "-".to_string() } else { w.to_string() };
    for (pattern, word) in patterns {
        let _ = writeln!(out, "{pattern} -> {}", show(&word));
    }
    let _ = writeln!(out, "default -> {}", show(&default));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{const_rule, identity_rule};

    fn binary() -> Alphabet {
        Alphabet::new("01").unwrap()
    }

    #[test]
    fn hybrid_phases_must_agree_on_shape() {
        let wide = LocalRule::from_fn(binary(), 1, |w| w[1]);
        let narrow = identity_rule(binary());
        assert!(HybridRule::new(vec![wide, narrow]).is_err());
        assert!(HybridRule::new(vec![]).is_err());
    }

    #[test]
    fn word_outputs_are_letter_checked() {
        let bad = FiniteWordRule::from_fn(binary(), 0, |_| "2".into());
        assert!(bad.eval(&['0']).is_err());
        assert!(FiniteWordRule::from_table(binary(), 0, vec![("0".into(), "12".into())], "".into())
            .is_err());
    }

    #[test]
    fn empty_emissions_stall_eventually() {
        let silent = FiniteWordRule::from_fn(binary(), 0, |_| String::new());
        let zeros = Stream::constant(binary(), '0').unwrap();
        match apply_fword(&silent, &zeros, 4) {
            Err(Error::Stall { steps }) => assert_eq!(steps, 65),
            other => panic!("expected a stall, got {other:?}"),
        }
    }

    #[test]
    fn constant_phase_banks_print_and_parse() {
        let h = HybridRule::new(vec![
            LocalRule::from_table(binary(), 0, vec![], '0').unwrap(),
            LocalRule::from_table(binary(), 0, vec![("1".into(), '1')], '0').unwrap(),
        ])
        .unwrap();
        let text = format_hybrid(&h).unwrap();
        let back = parse_hybrid(&text).unwrap();
        assert_eq!(back.phases(), 2);
        assert_eq!(format_hybrid(&back).unwrap(), text);
        let fn_backed = HybridRule::new(vec![const_rule(binary(), '0').unwrap()]).unwrap();
        assert!(format_hybrid(&fn_backed).is_err());
    }
}
