//! Deciding whether one stream is a sliding-window image of another.
//!
//! The slogan: a radius-N rule taking `src` to `dst` exists exactly when
//! equal radius-N source windows always sit over equal target letters.
//! The checker learns a partial window table by scanning; a collision
//! with two different target letters is a conflict witness refuting that
//! radius, and a conflict-free scan yields a candidate rule that is then
//! re-verified against the target.
//!
//! Scans are over a finite horizon, so "yes" verdicts are exact for the
//! scanned prefix and "no" verdicts are certificates: each carries the
//! witness pair per refuted radius. The budget-bounded variant instead
//! spends a global step budget across radii and guesses by comparing how
//! far it got against the window-count threshold, which makes it cheap
//! but deliberately fallible; its non-monotone behavior in the budget is
//! part of the point.

use std::collections::HashMap;

use crate::ca::{format_rule, neighborhood, LocalRule};
use crate::error::{Error, Result};
use crate::stream::Stream;

/// A refutation of one radius: positions `i_prev < i` with equal source
/// windows but different target letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub radius: u64,
    pub i_prev: u64,
    pub i: u64,
}

/// Window table learned from a conflict-free scan: each observed window
/// maps to its target letter and the first index where it was seen.
#[derive(Clone, Debug)]
pub struct PartialRuleTable {
    radius: u64,
    map: HashMap<Vec<char>, (char, u64)>,
}

impl PartialRuleTable {
    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, window: &[char]) -> Option<(char, u64)> {
        self.map.get(window).copied()
    }

    /// Observed windows with their letters and first-seen indices.
    pub fn entries(&self) -> impl Iterator<Item = (&[char], char, u64)> {
        self.map.iter().map(|(w, &(letter, first))| (w.as_slice(), letter, first))
    }

    /// Completes the table into a total rule: unobserved windows fall to
    /// the first letter of the alphabet.
    pub fn complete(&self, alphabet: &crate::stream::Alphabet) -> Result<LocalRule> {
        let mut patterns: Vec<(String, char)> = self
            .map
            .iter()
            .map(|(w, &(letter, _))| (w.iter().collect::<String>(), letter))
            .collect();
        patterns.sort();
        LocalRule::from_table(alphabet.clone(), self.radius, patterns, alphabet.first())
    }
}

/// Result of one scan at a fixed radius.
#[derive(Debug)]
pub enum InferOutcome {
    Table(PartialRuleTable),
    Conflict { i_prev: u64, i: u64 },
}

/// Scans positions 0..horizon (boundary windows included) and either
/// learns a window table or reports the first conflict.
pub fn infer_rule(src: &Stream, dst: &Stream, radius: u64, horizon: u64) -> Result<InferOutcome> {
    let mut map: HashMap<Vec<char>, (char, u64)> = HashMap::new();
    for i in 0..horizon {
        let window = neighborhood(src, radius, i)?;
        let letter = dst.letter_at(i)?;
        match map.get(&window) {
            Some(&(prev_letter, i_prev)) if prev_letter != letter => {
                return Ok(InferOutcome::Conflict { i_prev, i });
            }
            Some(_) => {}
            None => {
                map.insert(window, (letter, i));
            }
        }
    }
    Ok(InferOutcome::Table(PartialRuleTable { radius, map }))
}

/// Outcome of a radius search: on success `rule` holds a verified rule
/// of radius `radius_reached`; on failure `witnesses` refutes every
/// radius up to the bound.
#[derive(Debug)]
pub struct Verdict {
    pub answer: bool,
    pub radius_reached: u64,
    pub scanned: u64,
    pub witnesses: Vec<Witness>,
    pub rule: Option<LocalRule>,
}

/// Searches radii 0..=max_radius for a rule taking `src` to `dst` on the
/// scanned prefix. A learned table is completed and re-verified against
/// the target before it is accepted.
pub fn synthesize(src: &Stream, dst: &Stream, max_radius: u64, horizon: u64) -> Result<Verdict> {
    let mut witnesses = Vec::new();
    for radius in 0..=max_radius {
        match infer_rule(src, dst, radius, horizon)? {
            InferOutcome::Conflict { i_prev, i } => {
                witnesses.push(Witness { radius, i_prev, i });
            }
            InferOutcome::Table(table) => {
                let rule = table.complete(src.alphabet())?;
                for i in 0..horizon {
                    let got = rule.eval(&neighborhood(src, radius, i)?)?;
                    let want = dst.letter_at(i)?;
                    if got != want {
                        return Err(Error::Other(format!(
                            "synthesized rule disagrees with its own table at {i}"
                        )));
                    }
                }
                return Ok(Verdict {
                    answer: true,
                    radius_reached: radius,
                    scanned: horizon,
                    witnesses,
                    rule: Some(rule),
                });
            }
        }
    }
    Ok(Verdict {
        answer: false,
        radius_reached: max_radius,
        scanned: horizon,
        witnesses,
        rule: None,
    })
}

const REPORT_TABLE_LIMIT: usize = 256;

/// Plain-text rendering of a verdict, with the rule file embedded when
/// the learned table is small enough to print.
pub fn report(verdict: &Verdict) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "answer: {}\n",
        if verdict.answer { "yes" } else { "no" }
    ));
    out.push_str(&format!("radius: {}\n", verdict.radius_reached));
    out.push_str(&format!("scanned: {}\n", verdict.scanned));
    for w in &verdict.witnesses {
        out.push_str(&format!(
            "witness: radius {} conflicts at i={} (earlier i={})\n",
            w.radius, w.i, w.i_prev
        ));
    }
    if let Some(rule) = &verdict.rule {
        let patterns = rule.table().map(|(p, _)| p.len()).unwrap_or(usize::MAX);
        if patterns <= REPORT_TABLE_LIMIT {
            if let Ok(text) = format_rule(rule) {
                out.push_str("rule:\n");
                out.push_str(&text);
            }
        } else {
            out.push_str(&format!(
                "rule: radius {} with {patterns} table rows (omitted)\n",
                rule.radius()
            ));
        }
    }
    out
}

/// Where the step budget ran out, and the guess made there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetOutcome {
    pub answer: bool,
    pub radius: u64,
    pub index: u64,
}

/// Budget-bounded guesser: spends one unit per scanned position across
/// increasing radii, abandoning a radius at its first conflict. When the
/// budget runs out at radius N and position i, it answers yes exactly
/// when i has reached `alpha` times the count of radius-N windows, the
/// heuristic being that surviving that far past the window count means
/// the radius probably works. The comparison i >= (p/q) * |A|^(2N+1) is
/// exact in integers; `alpha` is the pair (p, q).
pub fn budget_check(
    src: &Stream,
    dst: &Stream,
    alpha: (u64, u64),
    c_max: u64,
) -> Result<BudgetOutcome> {
    let (p, q) = alpha;
    if q == 0 {
        return Err(Error::Other("alpha denominator must be nonzero".into()));
    }
    let letters = src.alphabet().len() as u128;
    let mut spent: u64 = 0;
    for radius in 0.. {
        let mut seen: HashMap<Vec<char>, char> = HashMap::new();
        let mut i = radius;
        loop {
            spent += 1;
            if spent > c_max {
                let pool = letters.saturating_pow(2 * radius as u32 + 1);
                let answer = (i as u128).saturating_mul(q as u128)
                    >= (p as u128).saturating_mul(pool);
                return Ok(BudgetOutcome { answer, radius, index: i });
            }
            let window = neighborhood(src, radius, i)?;
            let letter = dst.letter_at(i)?;
            match seen.get(&window) {
                Some(&prev) if prev != letter => break,
                Some(_) => {}
                None => {
                    seen.insert(window, letter);
                }
            }
            i += 1;
        }
    }
    unreachable!("the budget is finite")
}

/// Least pair of shifts aligning the two streams: the first (n, m) in
/// the order sorted by n+m then n, with both at most `max_shift`, such
/// that a(n+i) = b(m+i) for every i below the horizon.
pub fn congruent(
    a: &Stream,
    b: &Stream,
    max_shift: u64,
    horizon: u64,
) -> Result<Option<(u64, u64)>> {
    a.alphabet().expect_same(b.alphabet())?;
    for total in 0..=2 * max_shift {
        for n in 0..=total.min(max_shift) {
            let m = total - n;
            if m > max_shift {
                continue;
            }
            let mut ok = true;
            for i in 0..horizon {
                if a.letter_at(n + i)? != b.letter_at(m + i)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some((n, m)));
            }
        }
    }
    Ok(None)
}

/// Two-sided reducibility probe built on [`synthesize`]: answers for
/// (a to b, b to a) with the same bounds.
pub fn mutual(a: &Stream, b: &Stream, max_radius: u64, horizon: u64) -> Result<(Verdict, Verdict)> {
    Ok((
        synthesize(a, b, max_radius, horizon)?,
        synthesize(b, a, max_radius, horizon)?,
    ))
}
