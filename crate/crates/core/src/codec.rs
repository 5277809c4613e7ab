//! One entry point per encoder mode, plus the encode → realize → profile →
//! decode round trip.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::frame::EncodingFrame;
use crate::graph::Edge;
use crate::nonsystematic::{
    decode_first_node, decode_first_node_with_self_loops, encode_first_node,
    encode_first_node_with_self_loops, encode_full, first_node_core_domain, first_node_domain,
};
use crate::ranking::{rank_of_weights, Ranking, TieMode};
use crate::sequence::{profile_vector, realize_string};
use crate::systematic::{
    decode_systematic, decode_with_self_loops, encode_systematic, encode_with_self_loops,
    self_loop_core_set,
};
use crate::weights::WeightMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Rank `E \ E'_H`.
    Systematic,
    /// Rank `E \ E'_H` without the self-loops, and place the loops freely.
    SelfLoop,
    /// Rank `(E \ E'_H) ∪ {e_0}`, rejecting a Dyck configuration at `v_0`.
    FirstNode,
    /// First-node ranking without the self-loops, loops placed freely.
    FirstNodeSelfLoop,
    /// Rank all of `E`; succeeds when the all-nodes condition holds.
    Full,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Systematic,
        Mode::SelfLoop,
        Mode::FirstNode,
        Mode::FirstNodeSelfLoop,
        Mode::Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Systematic => "systematic",
            Mode::SelfLoop => "selfloop",
            Mode::FirstNode => "firstnode",
            Mode::FirstNodeSelfLoop => "firstnode-selfloop",
            Mode::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Result<Mode> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown mode {s:?}")))
    }

    pub fn places_loops(self) -> bool {
        matches!(self, Mode::SelfLoop | Mode::FirstNodeSelfLoop)
    }

    /// The edges the user ranks directly.
    pub fn information_set(self, frame: &EncodingFrame) -> BTreeSet<Edge> {
        match self {
            Mode::Systematic => frame.information_set(),
            Mode::SelfLoop => self_loop_core_set(frame),
            Mode::FirstNode => first_node_domain(frame),
            Mode::FirstNodeSelfLoop => first_node_core_domain(frame),
            Mode::Full => frame.graph().edges().collect(),
        }
    }
}

/// What a mode encodes: a ranking of its information set and, for the
/// loop-placing modes, the final ranks of the self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub ranks: Ranking,
    pub loops: Option<BTreeMap<Edge, usize>>,
}

fn loops_of(mode: Mode, msg: &Message) -> Result<&BTreeMap<Edge, usize>> {
    msg.loops
        .as_ref()
        .ok_or_else(|| Error::Format(format!("mode {} needs self-loop ranks", mode.name())))
}

pub fn encode(frame: &EncodingFrame, mode: Mode, msg: &Message) -> Result<WeightMap> {
    if !mode.places_loops() && msg.loops.is_some() {
        return Err(Error::Format(format!(
            "mode {} does not take self-loop ranks",
            mode.name()
        )));
    }
    match mode {
        Mode::Systematic => encode_systematic(frame, &msg.ranks),
        Mode::SelfLoop => encode_with_self_loops(frame, &msg.ranks, loops_of(mode, msg)?),
        Mode::FirstNode => encode_first_node(frame, &msg.ranks),
        Mode::FirstNodeSelfLoop => {
            encode_first_node_with_self_loops(frame, &msg.ranks, loops_of(mode, msg)?)
        }
        Mode::Full => encode_full(frame.params(), &msg.ranks)?.ok_or_else(|| {
            Error::Precondition(
                "no vertex order meets the all-nodes condition (the ranking may still be feasible)"
                    .into(),
            )
        }),
    }
}

pub fn decode(frame: &EncodingFrame, mode: Mode, x: &WeightMap) -> Result<Message> {
    x.require_profile_vector()?;
    let plain = |ranks| Message { ranks, loops: None };
    Ok(match mode {
        Mode::Systematic => plain(decode_systematic(frame, x)?),
        Mode::FirstNode => plain(decode_first_node(frame, x)?),
        Mode::Full => plain(rank_of_weights(x, TieMode::Strict)?),
        Mode::SelfLoop | Mode::FirstNodeSelfLoop => {
            let (ranks, loops) = if mode == Mode::SelfLoop {
                decode_with_self_loops(frame, x)?
            } else {
                decode_first_node_with_self_loops(frame, x)?
            };
            Message {
                ranks,
                loops: Some(loops),
            }
        }
    })
}

/// A uniformly random message for `mode`. Non-systematic modes may reject it.
pub fn random_message(frame: &EncodingFrame, mode: Mode, rng: &mut impl Rng) -> Message {
    let mut order: Vec<Edge> = mode.information_set(frame).into_iter().collect();
    order.shuffle(rng);
    let ranks = Ranking::from_order(&order).expect("shuffled set is a bijection");
    let loops = mode.places_loops().then(|| {
        let mut slots: Vec<usize> = (0..frame.graph().edge_count()).collect();
        slots.shuffle(rng);
        frame.graph().self_loops().into_iter().zip(slots).collect()
    });
    Message { ranks, loops }
}

/// A random message the mode accepts, drawing at most `attempts` times.
///
/// Uniform total rankings almost never pass the all-nodes condition once
/// `q^ℓ` is past a dozen edges, so `Full` candidates are the rankings of
/// random systematic codewords instead. Those are feasible by construction
/// and often qualify.
pub fn random_accepted(
    frame: &EncodingFrame,
    mode: Mode,
    rng: &mut impl Rng,
    attempts: usize,
) -> Result<(Message, WeightMap)> {
    let mut last = None;
    for _ in 0..attempts.max(1) {
        let msg = if mode == Mode::Full {
            let sys = random_message(frame, Mode::Systematic, rng);
            let x = encode(frame, Mode::Systematic, &sys)?;
            Message {
                ranks: rank_of_weights(&x, TieMode::Strict)?,
                loops: None,
            }
        } else {
            random_message(frame, mode, rng)
        };
        match encode(frame, mode, &msg) {
            Ok(x) => return Ok((msg, x)),
            Err(e @ (Error::DyckConfiguration { .. } | Error::Precondition(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip {
    pub profile: WeightMap,
    pub string_length: usize,
    pub decoded: Message,
    /// Realized string's profile equals the encoded profile.
    pub profile_ok: bool,
    /// Decoded message equals the input.
    pub message_ok: bool,
}

impl RoundTrip {
    pub fn ok(&self) -> bool {
        self.profile_ok && self.message_ok
    }
}

/// Encode, realize as a string, re-read its profile and decode.
pub fn round_trip(frame: &EncodingFrame, mode: Mode, msg: &Message) -> Result<RoundTrip> {
    let profile = encode(frame, mode, msg)?;
    let s = realize_string(&profile)?;
    let reread = profile_vector(frame.params(), &s)?;
    let decoded = decode(frame, mode, &reread)?;
    Ok(RoundTrip {
        profile_ok: reread == profile,
        message_ok: decoded == *msg,
        string_length: s.chars().count(),
        profile,
        decoded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::CodeParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_mode_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (q, ell) in [(3, 2), (4, 2), (3, 3)] {
            let f = EncodingFrame::default_for(&CodeParams::new(q, ell).unwrap()).unwrap();
            for mode in Mode::ALL {
                let msg = random_accepted(&f, mode, &mut rng, 200).unwrap().0;
                let rt = round_trip(&f, mode, &msg).unwrap();
                assert!(rt.ok(), "{} q={q} ℓ={ell}", mode.name());
            }
        }
    }

    #[test]
    fn mode_names_parse() {
        for m in Mode::ALL {
            assert_eq!(Mode::parse(m.name()).unwrap(), m);
        }
        assert!(Mode::parse("bogus").is_err());
    }

    #[test]
    fn loops_only_where_expected() {
        let f = EncodingFrame::default_for(&CodeParams::new(3, 2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut msg = random_message(&f, Mode::SelfLoop, &mut rng);
        assert!(encode(&f, Mode::SelfLoop, &msg).is_ok());
        msg.loops = None;
        assert!(matches!(encode(&f, Mode::SelfLoop, &msg), Err(Error::Format(_))));
        let mut sys = random_message(&f, Mode::Systematic, &mut rng);
        sys.loops = Some(BTreeMap::new());
        assert!(matches!(encode(&f, Mode::Systematic, &sys), Err(Error::Format(_))));
    }
}
