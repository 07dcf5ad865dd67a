use std::collections::BTreeMap;
use std::collections::HashMap;

use proptest::prelude::*;
use streamlab::ca::{self, mu_chain_rule};
use streamlab::catalog;
use streamlab::reducer::{
    budget_check, congruent, infer_rule, report, synthesize, InferOutcome, Witness,
};
use streamlab::stream::{self, Alphabet, Stream};

fn cat(name: &str, params: &[&str]) -> Stream {
    catalog::build(name, params).unwrap()
}

fn tau(k: u64) -> Stream {
    cat("tau", &[&k.to_string()])
}

fn mu(j: u64) -> Stream {
    cat("mu", &[&j.to_string()])
}

fn witness_triples(ws: &[Witness]) -> Vec<(u64, u64, u64)> {
    ws.iter().map(|w| (w.radius, w.i_prev, w.i)).collect()
}

#[test]
fn pairwise_xor_is_found_at_radius_one() {
    let tm = cat("tm", &[]);
    let pd = cat("pd", &[]);
    let verdict = synthesize(&tm, &pd, 3, 500).unwrap();
    assert!(verdict.answer);
    assert_eq!(verdict.radius_reached, 1);
    assert_eq!(witness_triples(&verdict.witnesses), vec![(0, 1, 2)]);
    let rule = verdict.rule.unwrap();
    let (patterns, default) = rule.table().unwrap();
    // one boundary window plus the six length-3 factors of the source
    assert_eq!(patterns.len(), 7);
    assert_eq!(default, '0');
    assert_eq!(
        ca::apply(&rule, &tm).unwrap().prefix(500).unwrap(),
        pd.prefix(500).unwrap()
    );
}

#[test]
fn learned_rotation_table_reads_the_window_center() {
    let src = cat("periodic", &["011101"]);
    let dst = cat("periodic", &["10"]);
    let expected: HashMap<&str, char> = [
        ("011101", '1'),
        ("111010", '0'),
        ("110101", '1'),
        ("101011", '0'),
        ("010111", '1'),
        ("101110", '0'),
    ]
    .into_iter()
    .collect();
    match infer_rule(&src, &dst, 5, 60).unwrap() {
        InferOutcome::Conflict { .. } => panic!("rotation pair must be conflict-free"),
        InferOutcome::Table(table) => {
            assert_eq!(table.len(), 11); // 5 boundary windows + 6 rotations
            let mut interior = 0;
            for (window, letter, _) in table.entries() {
                if window.contains(&'#') {
                    continue;
                }
                interior += 1;
                let key: String = window[5..11].iter().collect();
                assert_eq!(expected[key.as_str()], letter, "window {key}");
            }
            assert_eq!(interior, 6);
        }
    }
}

#[test]
fn period_streams_reduce_exactly_by_divisibility() {
    for m in 2u64..10 {
        for n in 2u64..10 {
            let verdict = synthesize(&tau(m), &tau(n), m, 40 * m).unwrap();
            assert_eq!(
                verdict.answer,
                m % n == 0,
                "period {m} -> period {n} unexpected verdict"
            );
            if !verdict.answer {
                // every radius up to the bound is refuted by a witness pair
                assert_eq!(verdict.witnesses.len() as u64, m + 1);
            }
        }
    }
    // the all-zero window forces half-period lookahead even when it divides
    assert_eq!(synthesize(&tau(6), &tau(2), 6, 240).unwrap().radius_reached, 2);
}

#[test]
fn chain_streams_reduce_forward_but_not_backward() {
    // forward at j = 1 genuinely needs radius 7: the bound 4 is refuted
    let narrow = synthesize(&mu(1), &mu(2), 4, 5000).unwrap();
    assert!(!narrow.answer);
    assert_eq!(
        witness_triples(&narrow.witnesses),
        vec![(0, 2, 4), (1, 2, 14), (2, 7, 14), (3, 7, 20), (4, 20, 56)]
    );

    let wide = synthesize(&mu(1), &mu(2), 7, 5000).unwrap();
    assert!(wide.answer);
    assert_eq!(wide.radius_reached, 7);
    assert_eq!(
        witness_triples(&wide.witnesses),
        vec![
            (0, 2, 4),
            (1, 2, 14),
            (2, 7, 14),
            (3, 7, 20),
            (4, 20, 56),
            (5, 20, 407),
            (6, 20, 407)
        ]
    );

    let second = synthesize(&mu(2), &mu(3), 6, 5000).unwrap();
    assert!(second.answer);
    assert_eq!(second.radius_reached, 5);

    let third = synthesize(&mu(3), &mu(4), 8, 5000).unwrap();
    assert!(third.answer);
    assert_eq!(third.radius_reached, 6);

    for j in 1u64..=3 {
        let back = synthesize(&mu(j + 1), &mu(j), 2 * j + 2, 2000).unwrap();
        assert!(!back.answer, "chain must not run backward at {j}");
        assert_eq!(back.witnesses.len() as u64, 2 * j + 3);
    }
}

#[test]
fn learned_chain_rule_agrees_with_the_patch_rule() {
    let guide = mu_chain_rule(2);
    match infer_rule(&mu(2), &mu(3), 5, 5000).unwrap() {
        InferOutcome::Conflict { .. } => panic!("second chain step must be conflict-free"),
        InferOutcome::Table(table) => {
            let mut collapsed = 0;
            let mut untouched = 0;
            for (window, letter, _) in table.entries() {
                assert_eq!(guide.eval(window).unwrap(), letter);
                if window[5] == '0' {
                    match letter {
                        '1' => collapsed += 1,
                        _ => untouched += 1,
                    }
                }
            }
            // both the patch-collapse rows and the default row are exercised
            assert!(collapsed >= 2, "no zero was collapsed");
            assert!(untouched >= 2, "no zero survived");
        }
    }
}

#[test]
fn budget_answers_oscillate_before_stabilizing() {
    let cases = [
        (1, false),
        (2, true),
        (3, false),
        (4, false),
        (5, false),
        (6, false),
        (10, false),
        (20, false),
        (35, false),
        (36, true),
        (37, true),
        (100, true),
    ];
    for (c_max, want) in cases {
        let got = budget_check(&tau(6), &tau(2), (1, 1), c_max).unwrap();
        assert_eq!(got.answer, want, "budget {c_max}");
    }
    let at_stable = budget_check(&tau(6), &tau(2), (1, 1), 36).unwrap();
    assert_eq!((at_stable.radius, at_stable.index), (2, 32));
}

#[test]
fn budget_yes_is_a_guess_the_full_search_refutes() {
    // the reverse pair is irreducible, yet a tiny budget still answers yes
    let lucky = budget_check(&tau(2), &tau(6), (1, 1), 2).unwrap();
    assert!(lucky.answer);
    for c_max in (20..=200).step_by(20) {
        assert!(!budget_check(&tau(2), &tau(6), (1, 1), c_max).unwrap().answer);
    }
    assert!(!synthesize(&tau(2), &tau(6), 6, 240).unwrap().answer);
}

#[test]
fn budget_sweep_on_the_gap_stream_contains_both_answers() {
    let zeros = cat("zeros", &[]);
    let gaps = cat("algoctr", &["1", "2"]);
    let mut yes = Vec::new();
    for c_max in [1u64, 2, 3, 4, 10, 100, 1000, 10_000, 100_000] {
        if budget_check(&zeros, &gaps, (1, 1), c_max).unwrap().answer {
            yes.push(c_max);
        }
    }
    assert_eq!(yes, vec![2]);
}

#[test]
fn alpha_scales_the_yes_threshold() {
    assert!(budget_check(&tau(6), &tau(2), (1, 2), 20).unwrap().answer);
    assert!(!budget_check(&tau(6), &tau(2), (1, 2), 19).unwrap().answer);
    assert!(budget_check(&tau(6), &tau(2), (2, 1), 68).unwrap().answer);
    assert!(!budget_check(&tau(6), &tau(2), (2, 1), 67).unwrap().answer);
}

#[test]
fn congruence_finds_the_least_alignment() {
    let tm = cat("tm", &[]);
    assert_eq!(
        congruent(&stream::drop(&tm, 5), &tm, 10, 500).unwrap(),
        Some((0, 5))
    );
    assert_eq!(congruent(&tm, &tm, 10, 400).unwrap(), Some((0, 0)));
    let two = tau(2);
    assert_eq!(
        congruent(&two, &stream::drop(&two, 1), 6, 100).unwrap(),
        Some((0, 1))
    );
}

#[test]
fn congruence_rejects_disjoint_streams() {
    assert_eq!(
        congruent(&cat("zeros", &[]), &cat("ones", &[]), 8, 100).unwrap(),
        None
    );
}

#[test]
fn untouched_mutation_is_congruent_at_zero() {
    let tm = cat("tm", &[]);
    let same = stream::mutate(&tm, BTreeMap::new()).unwrap();
    assert_eq!(congruent(&tm, &same, 6, 300).unwrap(), Some((0, 0)));
}

#[test]
fn reports_carry_the_verdict_and_the_rule() {
    let tm = cat("tm", &[]);
    let pd = cat("pd", &[]);
    let yes = report(&synthesize(&tm, &pd, 3, 200).unwrap());
    assert!(yes.contains("answer: yes"));
    assert!(yes.contains("radius: 1"));
    assert!(yes.contains("witness: radius 0 conflicts at i=2 (earlier i=1)"));
    assert!(yes.contains("%ca"));
    let no = report(&synthesize(&tau(2), &tau(6), 2, 100).unwrap());
    assert!(no.contains("answer: no"));
    assert!(!no.contains("%ca"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // applying any rule yields a pair the search must solve within its radius
    #[test]
    fn synthesis_recovers_images_of_known_rules(seed in 0u64..1 << 48, eca in 0u8..=255) {
        let alphabet = Alphabet::new("01").unwrap();
        let word: String = (0..24)
            .map(|i| if (seed >> (i % 48)) & 1 == 1 { '1' } else { '0' })
            .collect();
        let src = Stream::ultimately_periodic(alphabet, &word[..8], &word[8..]).unwrap();
        let dst = ca::apply(&ca::eca_rule(eca), &src).unwrap();
        let verdict = synthesize(&src, &dst, 1, 300).unwrap();
        prop_assert!(verdict.answer);
        prop_assert!(verdict.radius_reached <= 1);
    }
}
