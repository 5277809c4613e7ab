use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dbrank_core::codebook::{length_bounds, verify_length};
use dbrank_core::codec::{self, Mode};
use dbrank_core::json::{from_json_str, to_json_string, ProfileJson, RankingJson};
use dbrank_core::{CodeParams, EncodingFrame, Error, TieBreakMode};

fn frame(q: usize, ell: usize, mode: TieBreakMode) -> EncodingFrame {
    let p = CodeParams::new(q, ell).unwrap();
    let d = EncodingFrame::default_for(&p).unwrap();
    EncodingFrame::new(&p, d.alpha().to_vec(), d.beta().to_vec(), mode).unwrap()
}

#[test]
fn documents_survive_the_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (q, ell) in [(3, 2), (5, 2), (4, 3)] {
        let f = frame(q, ell, TieBreakMode::FirstOccurrence);
        for mode in [Mode::Systematic, Mode::SelfLoop, Mode::FirstNode, Mode::FirstNodeSelfLoop] {
            let (msg, x) = codec::random_accepted(&f, mode, &mut rng, 100).unwrap();
            let doc = RankingJson::new(f.params(), &msg.ranks, msg.loops.as_ref());
            let back: RankingJson = from_json_str(&to_json_string(&doc)).unwrap();
            assert_eq!(back.ranking(f.graph()).unwrap(), msg.ranks);
            assert_eq!(back.loop_ranks(f.graph()).unwrap(), msg.loops);

            let profile = ProfileJson::new(&x).unwrap().with_origin(&f, mode.name());
            let parsed: ProfileJson = from_json_str(&to_json_string(&profile)).unwrap();
            let y = parsed.to_weights().unwrap();
            let f2 = parsed.frame.unwrap().to_frame().unwrap();
            let m2 = Mode::parse(parsed.mode.as_deref().unwrap()).unwrap();
            assert_eq!(codec::decode(&f2, m2, &y).unwrap(), msg);
        }
    }
}

#[test]
fn reverse_edge_frames_meet_their_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for q in 3..=7 {
        let f = frame(q, 2, TieBreakMode::ReverseEdge);
        let bound = length_bounds(f.params(), TieBreakMode::ReverseEdge);
        assert!(bound.reverse_edge_upper.is_some());
        for _ in 0..20 {
            let rt = codec::round_trip(&f, Mode::Systematic, &codec::random_message(&f, Mode::Systematic, &mut rng))
                .unwrap();
            assert!(rt.ok());
            assert!(verify_length(&rt.profile, TieBreakMode::ReverseEdge), "q={q}");
        }
    }
}

#[test]
fn decoding_a_foreign_profile_fails_cleanly() {
    let f = frame(3, 2, TieBreakMode::FirstOccurrence);
    let p = f.params();
    // Balanced but with a repeated weight: no strict ranking exists.
    let x = dbrank_core::WeightMap::from_u64s(p, &[1, 2, 2, 2, 1, 2, 2, 2, 3]).unwrap();
    for mode in Mode::ALL {
        assert!(codec::decode(&f, mode, &x).is_err(), "{}", mode.name());
    }
    // A zero entry is not a profile vector of a string with every gram.
    let z = dbrank_core::WeightMap::from_u64s(p, &[0, 1, 1, 1, 0, 1, 1, 1, 0]).unwrap();
    for mode in Mode::ALL {
        let r = codec::decode(&f, mode, &z);
        assert!(matches!(r, Err(Error::NotPositive(_))), "{}: {r:?}", mode.name());
    }
}
