//! Block-codec round-trips and rule transport across the encoding.

use streamlab::ca::{apply, identity_rule, periodic_rule, xor_rule, LocalRule};
use streamlab::catalog;
use streamlab::codec::{transport_rule, Codec};
use streamlab::stream::{Alphabet, Stream};
use streamlab::Error;

fn cat(name: &str, params: &[&str]) -> Stream {
    catalog::build(name, params).unwrap()
}

fn abc() -> Alphabet {
    Alphabet::new("ABC").unwrap()
}

#[test]
fn encode_decode_round_trip() {
    let binary = Codec::new(Alphabet::binary());
    let tm = cat("tm", &[]);
    let decoded = binary.decode(&binary.encode(&tm).unwrap()).unwrap();
    assert_eq!(decoded.prefix(100).unwrap(), tm.prefix(100).unwrap());

    let codec = Codec::new(abc());
    let s = Stream::periodic(abc(), "ABCCBA").unwrap();
    let decoded = codec.decode(&codec.encode(&s).unwrap()).unwrap();
    assert_eq!(decoded.prefix(100).unwrap(), s.prefix(100).unwrap());
}

#[test]
fn encoded_blocks_concatenate_markers() {
    let binary = Codec::new(Alphabet::binary());
    let tm = cat("tm", &[]);
    let encoded = binary.encode(&tm).unwrap();
    // 0110 encodes block by block.
    assert_eq!(
        encoded.prefix(24).unwrap(),
        "101000111000111000101000"
    );
}

#[test]
fn decode_rejects_malformed_blocks() {
    let binary = Codec::new(Alphabet::binary());
    let zeros = Stream::constant(Alphabet::binary(), '0').unwrap();
    let decoded = binary.decode(&zeros).unwrap();
    assert!(matches!(
        decoded.letter_at(0),
        Err(Error::MalformedBlock { block: 0, .. })
    ));
    // Valid first block, nonzero padding in the second.
    let text = format!("101000{}", "111100");
    let bad = Stream::ultimately_periodic(Alphabet::binary(), &text, "0").unwrap();
    let decoded = binary.decode(&bad).unwrap();
    assert_eq!(decoded.letter_at(0).unwrap(), '0');
    assert!(matches!(
        decoded.letter_at(1),
        Err(Error::MalformedBlock { block: 1, .. })
    ));
}

#[test]
fn transport_commutes_with_encoding_for_pairwise_xor() {
    let binary = Codec::new(Alphabet::binary());
    let tm = cat("tm", &[]);
    let lifted = transport_rule(&xor_rule(), &binary).unwrap();
    assert_eq!(lifted.radius(), 12);
    let via_encoded = apply(&lifted, &binary.encode(&tm).unwrap()).unwrap();
    let via_plain = binary.encode(&apply(&xor_rule(), &tm).unwrap()).unwrap();
    assert_eq!(via_encoded.prefix(240).unwrap(), via_plain.prefix(240).unwrap());
}

#[test]
fn transport_carries_the_period_collapsing_rule() {
    let binary = Codec::new(Alphabet::binary());
    let rule = periodic_rule("100000", "10").unwrap();
    let lifted = transport_rule(&rule, &binary).unwrap();
    assert_eq!(lifted.radius(), 36);
    let out = apply(&lifted, &binary.encode(&cat("tau", &["6"])).unwrap()).unwrap();
    let expect = binary.encode(&cat("tau", &["2"])).unwrap();
    assert_eq!(out.prefix(300).unwrap(), expect.prefix(300).unwrap());
}

#[test]
fn transport_handles_radius_zero_rules() {
    let binary = Codec::new(Alphabet::binary());
    let lifted = transport_rule(&identity_rule(Alphabet::binary()), &binary).unwrap();
    assert_eq!(lifted.radius(), 6);
    let tm = cat("tm", &[]);
    let encoded = binary.encode(&tm).unwrap();
    let out = apply(&lifted, &encoded).unwrap();
    assert_eq!(out.prefix(150).unwrap(), encoded.prefix(150).unwrap());
}

#[test]
fn transport_works_over_a_three_letter_alphabet() {
    let codec = Codec::new(abc());
    let rule = LocalRule::from_fn(abc(), 1, |w| {
        // Cyclic successor of the right neighbor, with # pinned to A.
        match w[2] {
            'A' => 'B',
            'B' => 'C',
            _ => 'A',
        }
    });
    let s = Stream::periodic(abc(), "ABCACB").unwrap();
    let lifted = transport_rule(&rule, &codec).unwrap();
    assert_eq!(lifted.radius(), 18);
    let via_encoded = apply(&lifted, &codec.encode(&s).unwrap()).unwrap();
    let via_plain = codec.encode(&apply(&rule, &s).unwrap()).unwrap();
    assert_eq!(via_encoded.prefix(270).unwrap(), via_plain.prefix(270).unwrap());
}

#[test]
fn transport_requires_matching_alphabets() {
    let codec = Codec::new(abc());
    assert!(transport_rule(&xor_rule(), &codec).is_err());
}
