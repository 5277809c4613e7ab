//! The systematic encoder: any ranking of `E \ E'_H` extends to a feasible
//! profile vector, computed edge by edge along the Hamiltonian path.
//!
//! Weights are carried as integers in units of `(2Δ)^-1` once the tie
//! breaking starts, so every step is exact.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::frame::EncodingFrame;
use crate::graph::Edge;
use crate::ranking::{rank_of_weights, Ranking, TieMode};
use crate::weights::WeightMap;

/// Intermediate weights of one encoding run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingTrace {
    /// Integer weights once the Hamiltonian path is balanced, before tie
    /// breaking. Edges outside the run (excluded self-loops) are zero.
    pub balanced: Vec<BigInt>,
    /// After tie breaking, in units of `(2Δ)^-1`, i.e. already multiplied
    /// by `2Δ`.
    pub tie_broken: Vec<BigInt>,
    /// The final profile vector.
    pub output: WeightMap,
}

/// Which optional bound checks a completion run performs.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Checks {
    /// `|wt(e)| ≤ C(q^ℓ - q^{ℓ-1} + 2, 2)` on the path after balancing.
    pub path_bound: bool,
    /// `wt(E) ≤ q^{5ℓ}` on the output.
    pub length_bound: bool,
}

/// Runs the balancing, tie-breaking, scaling and shifting steps on a
/// partially seeded weighting.
pub(crate) struct Completion<'a> {
    frame: &'a EncodingFrame,
    beta: Cow<'a, [Edge]>,
    active: Vec<bool>,
}

impl<'a> Completion<'a> {
    pub fn new(frame: &'a EncodingFrame) -> Self {
        Completion {
            frame,
            beta: Cow::Borrowed(frame.beta()),
            active: vec![true; frame.graph().edge_count()],
        }
    }

    /// Leave the self-loops out entirely. They cancel in every balance
    /// equation, and removing them from `β` keeps it a closed walk.
    pub fn without_self_loops(frame: &'a EncodingFrame) -> Self {
        let g = frame.graph();
        let mut active = vec![true; g.edge_count()];
        for e in g.self_loops() {
            active[e.0] = false;
        }
        let beta = frame
            .beta()
            .iter()
            .copied()
            .filter(|&e| !g.is_self_loop(e))
            .collect();
        Completion {
            frame,
            beta: Cow::Owned(beta),
            active,
        }
    }

    /// `weights` must hold integers for every active edge except
    /// `e_first..e_{n-2}`, whose entries are ignored.
    pub fn run(&self, mut weights: Vec<BigInt>, first: usize, checks: Checks) -> Result<EncodingTrace> {
        let frame = self.frame;
        let g = frame.graph();
        let alpha = frame.alpha();
        let n = alpha.len();

        // Balance v_first..v_{n-2}; v_{n-1} then balances itself.
        for &e in &alpha[first..n - 1] {
            let v = g.src(e);
            weights[e.0] = BigInt::zero();
            let inw: BigInt = g.in_edges(v)?.iter().map(|x| &weights[x.0]).sum();
            let outw: BigInt = g.out_edges(v)?.iter().map(|x| &weights[x.0]).sum();
            weights[e.0] = inw - outw;
        }
        if checks.path_bound {
            let info = g.edge_count() - n + 1;
            let bound = BigInt::from(info + 1) * BigInt::from(info) / 2;
            for &e in &alpha[..n - 1] {
                if weights[e.0].abs() > bound {
                    return Err(Error::Invariant(format!(
                        "path weight {} of {} exceeds {bound}",
                        weights[e.0],
                        g.edge_gram(e)
                    )));
                }
            }
        }
        let balanced = weights.clone();

        // Tie breaking in units of (2Δ)^-1.
        let two_delta = frame.delta() * 2;
        let mut units: Vec<BigInt> = weights.iter().map(|w| w * &two_delta).collect();
        let mut added = vec![0u64; g.edge_count()];
        for i in 0..n - 1 {
            let cycle = frame.tie_break_cycle_in(&self.beta, i)?;
            let step = 2 * (i as u64 + 1);
            for e in cycle.edges {
                units[e.0] += step;
                added[e.0] += step;
            }
        }
        let cap = &two_delta - 2u32;
        if let Some(e) = (0..added.len()).find(|&e| BigInt::from(added[e]) > cap) {
            return Err(Error::Invariant(format!(
                "tie-break additions on {} reach a full unit",
                g.edge_gram(Edge(e))
            )));
        }
        for &e in alpha {
            units[e.0] += 1u32;
        }
        let tie_broken = units.clone();

        // Shift so the smallest active weight is 1.
        let min = g
            .edges()
            .filter(|&e| self.active[e.0])
            .map(|e| &units[e.0])
            .min()
            .cloned()
            .ok_or_else(|| Error::Invariant("no active edges".into()))?;
        let shift = min - 1;
        for e in g.edges() {
            if self.active[e.0] {
                units[e.0] -= &shift;
            } else {
                units[e.0] = BigInt::zero();
            }
        }
        self.check_output(&units)?;
        if checks.length_bound {
            let total: BigInt = units.iter().sum();
            let bound = BigInt::from(g.q()).pow(5 * g.params().ell() as u32);
            if total > bound {
                return Err(Error::Invariant(format!(
                    "total weight {total} exceeds q^(5ℓ) = {bound}"
                )));
            }
        }
        let output = WeightMap::from_integers(g.params(), units)?;
        Ok(EncodingTrace {
            balanced,
            tie_broken,
            output,
        })
    }

    fn check_output(&self, units: &[BigInt]) -> Result<()> {
        let g = self.frame.graph();
        let mut seen = BTreeSet::new();
        for e in g.edges().filter(|&e| self.active[e.0]) {
            if !units[e.0].is_positive() {
                return Err(Error::Invariant(format!("{} is not positive", g.edge_gram(e))));
            }
            if !seen.insert(&units[e.0]) {
                return Err(Error::Invariant(format!("{} ties another edge", g.edge_gram(e))));
            }
        }
        for v in g.vertices() {
            let inw: BigInt = g.in_edges(v)?.iter().map(|x| &units[x.0]).sum();
            let outw: BigInt = g.out_edges(v)?.iter().map(|x| &units[x.0]).sum();
            if inw != outw {
                return Err(Error::Invariant(format!(
                    "output unbalanced at {}",
                    g.vertex_gram(v)
                )));
            }
        }
        Ok(())
    }
}

/// Seed `π(e) + 1` on the ranked edges.
pub(crate) fn seed(edge_count: usize, pi: &Ranking) -> Vec<BigInt> {
    let mut w = vec![BigInt::zero(); edge_count];
    for (e, r) in pi.iter() {
        w[e.0] = BigInt::from(r + 1);
    }
    w
}

/// Check that `x` restricted to `domain` ranks like `pi`.
pub(crate) fn check_projection(x: &WeightMap, domain: &BTreeSet<Edge>, pi: &Ranking) -> Result<()> {
    let full = rank_of_weights(x, TieMode::Strict)
        .map_err(|e| Error::Invariant(format!("encoder output has ties: {e}")))?;
    if &full.project(domain)? != pi {
        return Err(Error::Invariant(
            "encoder output does not reproduce the input ranking".into(),
        ));
    }
    Ok(())
}

/// Encode a ranking of `E \ E'_H` as a feasible profile vector.
pub fn encode_systematic(frame: &EncodingFrame, pi: &Ranking) -> Result<WeightMap> {
    encode_systematic_traced(frame, pi).map(|t| t.output)
}

pub fn encode_systematic_traced(frame: &EncodingFrame, pi: &Ranking) -> Result<EncodingTrace> {
    let g = frame.graph();
    let info = frame.information_set();
    pi.require_domain(&info, g)?;
    let trace = Completion::new(frame).run(
        seed(g.edge_count(), pi),
        0,
        Checks {
            path_bound: true,
            length_bound: true,
        },
    )?;
    check_projection(&trace.output, &info, pi)?;
    Ok(trace)
}

/// Recover the information-set ranking from an encoded vector.
pub fn decode_systematic(frame: &EncodingFrame, x: &WeightMap) -> Result<Ranking> {
    rank_of_weights(x, TieMode::Strict)?.project(&frame.information_set())
}

/// `(E \ E'_H)` without the self-loops.
pub fn self_loop_core_set(frame: &EncodingFrame) -> BTreeSet<Edge> {
    let g = frame.graph();
    frame
        .information_set()
        .into_iter()
        .filter(|&e| !g.is_self_loop(e))
        .collect()
}

/// Validate a self-loop placement: each of the `q` loops gets a distinct
/// final rank in `0..q^ℓ`.
pub fn check_loop_ranks(frame: &EncodingFrame, loop_ranks: &BTreeMap<Edge, usize>) -> Result<()> {
    let g = frame.graph();
    let loops: BTreeSet<Edge> = g.self_loops().into_iter().collect();
    if !loop_ranks.keys().eq(loops.iter()) {
        return Err(Error::DomainMismatch(
            "loop ranks must cover exactly the q self-loops".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    for (&e, &r) in loop_ranks {
        if r >= g.edge_count() || !seen.insert(r) {
            return Err(Error::Precondition(format!(
                "self-loop {} has rank {r}, which is out of range or already taken",
                g.edge_gram(e)
            )));
        }
    }
    Ok(())
}

/// Encode with the self-loops outside the systematic part: run the encoder
/// on the loop-free graph, then drop each self-loop at its requested final
/// rank. A self-loop adds equally to both sides of its vertex, so any
/// placement stays balanced.
pub fn encode_with_self_loops(
    frame: &EncodingFrame,
    pi_core: &Ranking,
    loop_ranks: &BTreeMap<Edge, usize>,
) -> Result<WeightMap> {
    let g = frame.graph();
    let core = self_loop_core_set(frame);
    pi_core.require_domain(&core, g)?;
    check_loop_ranks(frame, loop_ranks)?;

    let completion = Completion::without_self_loops(frame);
    let trace = completion.run(
        seed(g.edge_count(), pi_core),
        0,
        Checks {
            path_bound: true,
            length_bound: false,
        },
    )?;
    let core_weights = trace
        .output
        .to_integers()
        .ok_or_else(|| Error::Invariant("non-integer core weights".into()))?;
    place_self_loops(frame, core_weights, &core, pi_core, loop_ranks)
}

/// Give each self-loop its requested final rank on top of loop-free
/// weights (loops hold zero in `core_weights`), then check the result.
pub(crate) fn place_self_loops(
    frame: &EncodingFrame,
    core_weights: Vec<BigInt>,
    core: &BTreeSet<Edge>,
    pi_core: &Ranking,
    loop_ranks: &BTreeMap<Edge, usize>,
) -> Result<WeightMap> {
    let g = frame.graph();
    // Non-loop edges in ascending weight.
    let mut order: Vec<Edge> = g.edges().filter(|&e| !g.is_self_loop(e)).collect();
    order.sort_by(|a, b| core_weights[a.0].cmp(&core_weights[b.0]));

    // Stretch the gaps to q+1 so up to q loops fit between neighbours.
    let q = g.q();
    let stretch = BigInt::from(q + 1);
    let mut out: Vec<BigInt> = core_weights.iter().map(|w| w * &stretch).collect();
    let mut by_rank: Vec<(usize, Edge)> = loop_ranks.iter().map(|(&e, &r)| (r, e)).collect();
    by_rank.sort();
    let mut slot = 0;
    for (k, &(rank, e)) in by_rank.iter().enumerate() {
        // Non-loop edges ranked below this loop.
        let below = rank - k;
        let base = if below == 0 {
            BigInt::zero()
        } else {
            &core_weights[order[below - 1].0] * &stretch
        };
        slot = if k > 0 && by_rank[k - 1].0 + 1 == rank { slot + 1 } else { 1 };
        out[e.0] = base + slot;
    }
    let out = crate::feasibility::normalize_min(out);
    let x = WeightMap::from_integers(g.params(), out)?;

    let full = rank_of_weights(&x, TieMode::Strict)
        .map_err(|e| Error::Invariant(format!("self-loop placement tied: {e}")))?;
    if !x.is_balanced() || full.project(core)? != *pi_core {
        return Err(Error::Invariant("self-loop encoding lost the core ranking".into()));
    }
    for (&e, &r) in loop_ranks {
        if full.rank(e) != Some(r) {
            return Err(Error::Invariant(format!(
                "self-loop {} landed at rank {:?}, wanted {r}",
                g.edge_gram(e),
                full.rank(e)
            )));
        }
    }
    Ok(x)
}

/// Inverse of [`encode_with_self_loops`].
pub fn decode_with_self_loops(
    frame: &EncodingFrame,
    x: &WeightMap,
) -> Result<(Ranking, BTreeMap<Edge, usize>)> {
    let full = rank_of_weights(x, TieMode::Strict)?;
    let core = full.project(&self_loop_core_set(frame))?;
    let loops = frame
        .graph()
        .self_loops()
        .into_iter()
        .map(|e| (e, full.rank(e).unwrap_or_default()))
        .collect();
    Ok((core, loops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::TieBreakMode;
    use crate::params::CodeParams;

    fn worked_frame() -> EncodingFrame {
        EncodingFrame::from_strings(
            &CodeParams::new(4, 2).unwrap(),
            "AGTC",
            "AGTCAACCTTATGGCG",
            TieBreakMode::FirstOccurrence,
        )
        .unwrap()
    }

    fn worked_ranking(frame: &EncodingFrame) -> Ranking {
        let pairs = [
            ("AC", 0), ("CA", 1), ("CT", 2), ("GC", 3), ("CG", 4), ("TA", 5), ("AT", 6),
            ("TG", 7), ("GA", 8), ("AA", 9), ("GG", 10), ("TT", 11), ("CC", 12),
        ];
        Ranking::from_grams(
            frame.graph(),
            &pairs.iter().map(|&(s, r)| (s.to_string(), r)).collect(),
        )
        .unwrap()
    }

    fn by_gram(frame: &EncodingFrame, values: &[BigInt], gram: &str) -> BigInt {
        values[frame.graph().parse_edge(gram).unwrap().0].clone()
    }

    #[test]
    fn balancing_stage_matches_worked_example() {
        let f = worked_frame();
        let t = encode_systematic_traced(&f, &worked_ranking(&f)).unwrap();
        assert_eq!(by_gram(&f, &t.balanced, "AG"), 9.into());
        assert_eq!(by_gram(&f, &t.balanced, "GT"), 9.into());
        assert_eq!(by_gram(&f, &t.balanced, "TC"), 5.into());
    }

    #[test]
    fn tie_break_stage_matches_worked_example() {
        // Numerators over 2Δ = 14 after tie breaking.
        let f = worked_frame();
        let t = encode_systematic_traced(&f, &worked_ranking(&f)).unwrap();
        let expect = [
            ("AA", 10 * 14), ("GA", 9 * 14 + 2), ("AG", 9 * 14 + 3), ("AT", 7 * 14 + 4),
            ("TA", 6 * 14 + 4), ("GT", 9 * 14 + 5), ("TG", 8 * 14 + 4), ("TT", 12 * 14 + 4),
            ("GG", 11 * 14 + 2), ("CC", 13 * 14 + 6), ("CT", 3 * 14 + 6), ("AC", 14),
            ("CA", 2 * 14 + 1), ("TC", 5 * 14 + 7), ("CG", 5 * 14 + 2), ("GC", 4 * 14 + 2),
        ];
        for (gram, units) in expect {
            assert_eq!(by_gram(&f, &t.tie_broken, gram), BigInt::from(units), "{gram}");
        }
    }

    #[test]
    fn rejects_wrong_domain() {
        let f = worked_frame();
        let pi = Ranking::from_order(&[Edge(0)]).unwrap();
        assert!(matches!(encode_systematic(&f, &pi), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn self_loop_placement() {
        let f = EncodingFrame::default_for(&CodeParams::new(3, 2).unwrap()).unwrap();
        let g = f.graph();
        let core = self_loop_core_set(&f);
        assert_eq!(core.len(), 9 - 3 + 1 - 3);
        let order: Vec<Edge> = core.iter().rev().copied().collect();
        let pi = Ranking::from_order(&order).unwrap();
        let loops = g.self_loops();
        for placement in [[0usize, 1, 2], [8, 0, 4], [3, 4, 5], [6, 7, 8]] {
            let ranks: BTreeMap<Edge, usize> = loops.iter().copied().zip(placement).collect();
            let x = encode_with_self_loops(&f, &pi, &ranks).unwrap();
            assert!(x.is_balanced());
            let (core_back, loops_back) = decode_with_self_loops(&f, &x).unwrap();
            assert_eq!(core_back, pi);
            assert_eq!(loops_back, ranks);
        }
        let clash: BTreeMap<Edge, usize> = loops.iter().copied().zip([1, 1, 2]).collect();
        assert!(encode_with_self_loops(&f, &pi, &clash).is_err());
    }

    #[test]
    fn output_matches_worked_example() {
        let f = worked_frame();
        let x = encode_systematic(&f, &worked_ranking(&f)).unwrap();
        let expect = [
            ("AA", 127), ("AC", 1), ("AG", 116), ("AT", 89), ("CA", 16), ("CC", 175),
            ("CG", 59), ("CT", 35), ("GA", 115), ("GC", 45), ("GG", 143), ("GT", 118),
            ("TA", 75), ("TC", 64), ("TG", 103), ("TT", 159),
        ];
        let got = x.to_gram_map().unwrap();
        for (gram, w) in expect {
            assert_eq!(got[gram], BigInt::from(w), "{gram}");
        }
        assert_eq!(decode_systematic(&f, &x).unwrap(), worked_ranking(&f));
    }

    fn random_ranking(domain: &BTreeSet<Edge>, rng: &mut impl rand::Rng) -> Ranking {
        use rand::seq::SliceRandom;
        let mut order: Vec<Edge> = domain.iter().copied().collect();
        order.shuffle(rng);
        Ranking::from_order(&order).unwrap()
    }

    #[test]
    fn random_rankings_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (q, ell) in [(3, 2), (4, 2), (3, 3), (5, 2), (4, 3)] {
            let f = EncodingFrame::default_for(&CodeParams::new(q, ell).unwrap()).unwrap();
            let info = f.information_set();
            let mut seen = BTreeSet::new();
            for _ in 0..40 {
                let pi = random_ranking(&info, &mut rng);
                let x = encode_systematic(&f, &pi).unwrap();
                assert!(x.is_balanced());
                assert_eq!(decode_systematic(&f, &x).unwrap(), pi);
                seen.insert(x.to_integers().unwrap());
            }
        }
    }

    #[test]
    fn encoder_is_injective_on_small_code() {
        // All 7! rankings for q = 3, ℓ = 2 give distinct vectors.
        let f = EncodingFrame::default_for(&CodeParams::new(3, 2).unwrap()).unwrap();
        let info: Vec<Edge> = f.information_set().into_iter().collect();
        let mut perm: Vec<usize> = (0..info.len()).collect();
        let mut outputs = BTreeSet::new();
        loop {
            let order: Vec<Edge> = perm.iter().map(|&i| info[i]).collect();
            let x = encode_systematic(&f, &Ranking::from_order(&order).unwrap()).unwrap();
            assert!(outputs.insert(x.to_integers().unwrap()));
            if !crate::feasibility::next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(outputs.len(), 5040);
    }

    #[test]
    fn reverse_edge_mode() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for q in 3usize..=6 {
            let p = CodeParams::new(q, 2).unwrap();
            let d = EncodingFrame::default_for(&p).unwrap();
            let f = EncodingFrame::new(
                &p,
                d.alpha().to_vec(),
                d.beta().to_vec(),
                TieBreakMode::ReverseEdge,
            )
            .unwrap();
            let bound = BigInt::from((3 * q.pow(6) + 4 * q.pow(3)) / 2);
            for _ in 0..20 {
                let pi = random_ranking(&f.information_set(), &mut rng);
                let x = encode_systematic(&f, &pi).unwrap();
                assert_eq!(decode_systematic(&f, &x).unwrap(), pi);
                assert!(x.total() <= num_rational::BigRational::from_integer(bound.clone()));
            }
        }
    }
}
