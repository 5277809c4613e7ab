//! Non-systematic encoders: the first-node extension, which lets the user
//! also rank the first Hamiltonian edge, and a sufficient-condition encoder
//! for rankings of the whole edge set.
//!
//! Both rebalance vertices with [`calibrate`], which lifts every weight at
//! or above a pivot edge by the same amount and so never reorders edges.
//! Self-loops add the same weight to both sides of their vertex, so every
//! count and sum here skips them.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::feasibility::{cut_word, is_dyck_word, normalize_min, rank_vector, word_string};
use crate::frame::EncodingFrame;
use crate::graph::{DeBruijnGraph, Edge, Vertex};
use crate::params::CodeParams;
use crate::ranking::{rank_of_weights, Ranking, TieMode};
use crate::systematic::{check_loop_ranks, check_projection, place_self_loops, Checks, Completion};
use crate::weights::WeightMap;

/// Weights of a partially assigned graph, indexed by edge id.
pub type PartialWeights = Vec<Option<BigRational>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexState {
    /// In-weight below out-weight; holds `in - out`.
    Over(BigRational),
    /// In-weight above out-weight; holds `in - out`.
    Under(BigRational),
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeRole {
    StepUp,
    StepDown,
    Stable,
}

impl EdgeRole {
    pub fn name(self) -> &'static str {
        match self {
            EdgeRole::StepUp => "step_up",
            EdgeRole::StepDown => "step_down",
            EdgeRole::Stable => "stable",
        }
    }
}

fn non_loop(g: &DeBruijnGraph, edges: Vec<Edge>) -> impl Iterator<Item = Edge> + '_ {
    edges.into_iter().filter(move |&e| !g.is_self_loop(e))
}

fn weight<'w>(g: &DeBruijnGraph, w: &'w [Option<BigRational>], e: Edge) -> Result<&'w BigRational> {
    w[e.0]
        .as_ref()
        .ok_or_else(|| Error::MissingWeight(g.edge_gram(e)))
}

/// Over/under/balanced; every non-loop edge at `v` must be weighted.
pub fn vertex_state(g: &DeBruijnGraph, w: &[Option<BigRational>], v: Vertex) -> Result<VertexState> {
    let mut defect = BigRational::zero();
    for e in non_loop(g, g.in_edges(v)?) {
        defect += weight(g, w, e)?;
    }
    for e in non_loop(g, g.out_edges(v)?) {
        defect -= weight(g, w, e)?;
    }
    Ok(if defect.is_positive() {
        VertexState::Under(defect)
    } else if defect.is_negative() {
        VertexState::Over(defect)
    } else {
        VertexState::Balanced
    })
}

/// `|E_{≥e*} ∩ E_in(v)| - |E_{≥e*} ∩ E_out(v)|`, by any ordered value.
fn role_balance<T: Ord>(
    g: &DeBruijnGraph,
    value: &impl Fn(Edge) -> Option<T>,
    v: Vertex,
    e_star: Edge,
) -> Result<i64> {
    let missing = |e: Edge| Error::MissingWeight(g.edge_gram(e));
    let pivot = value(e_star).ok_or_else(|| missing(e_star))?;
    let mut diff = 0i64;
    for (edges, sign) in [(g.in_edges(v)?, 1), (g.out_edges(v)?, -1)] {
        for e in non_loop(g, edges) {
            if value(e).ok_or_else(|| missing(e))? >= pivot {
                diff += sign;
            }
        }
    }
    Ok(diff)
}

fn role_of(diff: i64) -> EdgeRole {
    match diff.signum() {
        -1 => EdgeRole::StepUp,
        1 => EdgeRole::StepDown,
        _ => EdgeRole::Stable,
    }
}

pub fn edge_role<T: Ord>(
    g: &DeBruijnGraph,
    value: impl Fn(Edge) -> Option<T>,
    v: Vertex,
    e_star: Edge,
) -> Result<EdgeRole> {
    role_balance(g, &value, v, e_star).map(role_of)
}

/// Balance `v` by adding `c = |defect| / |count difference|` to every weighted
/// edge at least as heavy as `e_star`. Returns `c`.
pub fn calibrate(
    g: &DeBruijnGraph,
    w: &mut [Option<BigRational>],
    v: Vertex,
    e_star: Edge,
) -> Result<BigRational> {
    let state = vertex_state(g, w, v)?;
    let diff = role_balance(g, &|e: Edge| w[e.0].clone(), v, e_star)?;
    let role = role_of(diff);
    let defect = match (&state, role) {
        (VertexState::Under(d), EdgeRole::StepUp) | (VertexState::Over(d), EdgeRole::StepDown) => d,
        _ => {
            return Err(Error::Precondition(format!(
                "{} is {:?} but {} is {} for it",
                g.vertex_gram(v),
                state,
                g.edge_gram(e_star),
                role.name()
            )))
        }
    };
    let c = defect.abs() / BigRational::from_integer(BigInt::from(diff.abs()));
    let pivot = weight(g, w, e_star)?.clone();
    for x in w.iter_mut().flatten() {
        if *x >= pivot {
            *x += &c;
        }
    }
    if vertex_state(g, w, v)? != VertexState::Balanced {
        return Err(Error::Invariant(format!(
            "calibration left {} unbalanced",
            g.vertex_gram(v)
        )));
    }
    Ok(c)
}

/// The pivot edge from the cut word at `{v}`: the edge right after the
/// shortest prefix with strictly more in-edges (under state) or out-edges
/// (over state).
fn prefix_pivot(
    g: &DeBruijnGraph,
    w: &[Option<BigRational>],
    v: Vertex,
    under: bool,
) -> Result<Option<Edge>> {
    let cut = g.cut_edges(&[v])?;
    let mut edges: Vec<(BigRational, Edge, bool)> = Vec::new();
    for (list, out) in [(&cut.incoming, false), (&cut.outgoing, true)] {
        for &e in list {
            edges.push((weight(g, w, e)?.clone(), e, out));
        }
    }
    edges.sort();
    let mut height = 0i64;
    for t in 0..edges.len() {
        height += if edges[t].2 { -1 } else { 1 };
        let majority = if under { height > 0 } else { height < 0 };
        if majority && t + 1 < edges.len() {
            return Ok(Some(edges[t + 1].1));
        }
    }
    Ok(None)
}

/// Multiply by the lcm of denominators. Unassigned entries become zero.
fn clear_denominators(w: &[Option<BigRational>]) -> Vec<BigInt> {
    let lcm = w
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    w.iter()
        .map(|x| match x {
            Some(r) => r.numer() * (&lcm / r.denom()),
            None => BigInt::zero(),
        })
        .collect()
}

/// `(E \ E'_H) ∪ {e_0}`.
pub fn first_node_domain(frame: &EncodingFrame) -> BTreeSet<Edge> {
    let mut d = frame.information_set();
    d.insert(frame.alpha()[0]);
    d
}

/// [`first_node_domain`] without the self-loops.
pub fn first_node_core_domain(frame: &EncodingFrame) -> BTreeSet<Edge> {
    let g = frame.graph();
    first_node_domain(frame)
        .into_iter()
        .filter(|&e| !g.is_self_loop(e))
        .collect()
}

/// Reject a Dyck configuration at `{v}` under the seeded weights.
fn require_no_dyck(g: &DeBruijnGraph, w: &[Option<BigRational>], v: Vertex) -> Result<()> {
    let word = cut_word(g, |e| w[e.0].clone(), &[v])?;
    if is_dyck_word(&word) {
        return Err(Error::DyckConfiguration {
            vertices: g.vertex_gram(v),
            word: word_string(&word),
        });
    }
    Ok(())
}

fn first_node_weights(frame: &EncodingFrame, pi: &Ranking) -> Result<Vec<BigInt>> {
    let g = frame.graph();
    let mut w: PartialWeights = vec![None; g.edge_count()];
    for (e, r) in pi.iter() {
        w[e.0] = Some(BigRational::from_integer(BigInt::from(r + 1)));
    }
    // v_0 is the only vertex whose edges are all assigned by now.
    let v0 = g.src(frame.alpha()[0]);
    require_no_dyck(g, &w, v0)?;
    let under = match vertex_state(g, &w, v0)? {
        VertexState::Balanced => None,
        VertexState::Under(_) => Some(true),
        VertexState::Over(_) => Some(false),
    };
    if let Some(under) = under {
        let pivot = prefix_pivot(g, &w, v0, under)?
            .ok_or_else(|| Error::Invariant("non-Dyck word without a pivot".into()))?;
        calibrate(g, &mut w, v0, pivot)?;
    }
    Ok(clear_denominators(&w))
}

/// Encode a ranking of `(E \ E'_H) ∪ {e_0}` that has no Dyck configuration
/// at `{v_0}`.
pub fn encode_first_node(frame: &EncodingFrame, pi: &Ranking) -> Result<WeightMap> {
    frame.params().require_encoder_regime()?;
    let g = frame.graph();
    let domain = first_node_domain(frame);
    pi.require_domain(&domain, g)?;
    let seeded = first_node_weights(frame, pi)?;
    let none = Checks {
        path_bound: false,
        length_bound: false,
    };
    let trace = Completion::new(frame).run(seeded, 1, none)?;
    check_projection(&trace.output, &domain, pi)?;
    Ok(trace.output)
}

/// As [`encode_first_node`] with the self-loops ranked freely afterwards,
/// as in [`crate::systematic::encode_with_self_loops`].
pub fn encode_first_node_with_self_loops(
    frame: &EncodingFrame,
    pi_core: &Ranking,
    loop_ranks: &BTreeMap<Edge, usize>,
) -> Result<WeightMap> {
    frame.params().require_encoder_regime()?;
    let g = frame.graph();
    let core = first_node_core_domain(frame);
    pi_core.require_domain(&core, g)?;
    check_loop_ranks(frame, loop_ranks)?;
    let seeded = first_node_weights(frame, pi_core)?;
    let none = Checks {
        path_bound: false,
        length_bound: false,
    };
    let trace = Completion::without_self_loops(frame).run(seeded, 1, none)?;
    let core_weights = trace
        .output
        .to_integers()
        .ok_or_else(|| Error::Invariant("non-integer core weights".into()))?;
    place_self_loops(frame, core_weights, &core, pi_core, loop_ranks)
}

pub fn decode_first_node(frame: &EncodingFrame, x: &WeightMap) -> Result<Ranking> {
    rank_of_weights(x, TieMode::Strict)?.project(&first_node_domain(frame))
}

pub fn decode_first_node_with_self_loops(
    frame: &EncodingFrame,
    x: &WeightMap,
) -> Result<(Ranking, BTreeMap<Edge, usize>)> {
    let full = rank_of_weights(x, TieMode::Strict)?;
    let core = full.project(&first_node_core_domain(frame))?;
    let loops = frame
        .graph()
        .self_loops()
        .into_iter()
        .map(|e| (e, full.rank(e).unwrap_or_default()))
        .collect();
    Ok((core, loops))
}

/// Search budget for [`full_condition_order`], in visited states.
pub const SEARCH_LIMIT: usize = 1 << 22;

/// Per-vertex data for the all-nodes condition.
struct Roles {
    /// `roles[v][e]`
    roles: Vec<Vec<EdgeRole>>,
    dyck_free: Vec<bool>,
}

impl Roles {
    fn new(g: &DeBruijnGraph, ranks: &[usize]) -> Result<Self> {
        let value = |e: Edge| Some(ranks[e.0]);
        let mut roles = Vec::with_capacity(g.vertex_count());
        let mut dyck_free = Vec::with_capacity(g.vertex_count());
        for v in g.vertices() {
            roles.push(
                g.edges()
                    .map(|e| edge_role(g, value, v, e))
                    .collect::<Result<Vec<_>>>()?,
            );
            dyck_free.push(!is_dyck_word(&cut_word(g, value, &[v])?));
        }
        Ok(Roles { roles, dyck_free })
    }

    /// An edge with `role` at `v` that is stable for every earlier vertex.
    fn pivot(&self, v: usize, earlier: &[usize], role: EdgeRole) -> Option<Edge> {
        (0..self.roles[v].len())
            .find(|&e| {
                self.roles[v][e] == role
                    && earlier.iter().all(|&u| self.roles[u][e] == EdgeRole::Stable)
            })
            .map(Edge)
    }

    fn admissible(&self, v: usize, earlier: &[usize]) -> bool {
        self.dyck_free[v]
            && self.pivot(v, earlier, EdgeRole::StepUp).is_some()
            && self.pivot(v, earlier, EdgeRole::StepDown).is_some()
    }
}

/// A vertex order meeting the all-nodes sufficient condition for the total
/// ranking `pi`, if one exists: every vertex but the last is free of Dyck
/// configurations and has a step-up and a step-down edge that are stable
/// for all vertices before it. `None` says nothing about feasibility.
pub fn full_condition_order(params: &CodeParams, pi: &Ranking) -> Result<Option<Vec<Vertex>>> {
    params.require_encoder_regime()?;
    let ranks = rank_vector(params, pi)?;
    let g = DeBruijnGraph::new(params.clone());
    let roles = Roles::new(&g, &ranks)?;
    Ok(search_order(&roles, g.vertex_count())?.map(|o| o.into_iter().map(Vertex).collect()))
}

fn search_order(roles: &Roles, n: usize) -> Result<Option<Vec<usize>>> {
    // Prefer vertices that leave the most edges stable.
    let mut candidates: Vec<usize> = (0..n).collect();
    let stable = |v: usize| {
        roles.roles[v]
            .iter()
            .filter(|&&r| r == EdgeRole::Stable)
            .count()
    };
    candidates.sort_by_key(|&v| (std::cmp::Reverse(stable(v)), v));

    struct Search<'a> {
        roles: &'a Roles,
        candidates: Vec<usize>,
        order: Vec<usize>,
        used: Vec<bool>,
        failed: HashSet<Vec<bool>>,
        visits: usize,
    }
    impl Search<'_> {
        fn go(&mut self) -> Result<bool> {
            let n = self.used.len();
            if self.order.len() + 1 >= n {
                if let Some(last) = (0..n).find(|&v| !self.used[v]) {
                    self.order.push(last);
                }
                return Ok(true);
            }
            if self.failed.contains(&self.used) {
                return Ok(false);
            }
            self.visits += 1;
            if self.visits > SEARCH_LIMIT {
                return Err(Error::ResourceGuard(format!(
                    "vertex-order search exceeded {SEARCH_LIMIT} states"
                )));
            }
            for k in 0..self.candidates.len() {
                let v = self.candidates[k];
                if self.used[v] || !self.roles.admissible(v, &self.order) {
                    continue;
                }
                self.used[v] = true;
                self.order.push(v);
                if self.go()? {
                    return Ok(true);
                }
                self.order.pop();
                self.used[v] = false;
            }
            self.failed.insert(self.used.clone());
            Ok(false)
        }
    }
    let mut s = Search {
        roles,
        candidates,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        failed: HashSet::new(),
        visits: 0,
    };
    Ok(s.go()?.then_some(s.order))
}

/// Realize a total ranking through the all-nodes condition. `Ok(None)` means
/// the condition is not met, not that `pi` is infeasible.
pub fn encode_full(params: &CodeParams, pi: &Ranking) -> Result<Option<WeightMap>> {
    params.require_encoder_regime()?;
    let ranks = rank_vector(params, pi)?;
    let g = DeBruijnGraph::new(params.clone());
    let roles = Roles::new(&g, &ranks)?;
    let Some(order) = search_order(&roles, g.vertex_count())? else {
        return Ok(None);
    };
    let mut w: PartialWeights = ranks
        .iter()
        .map(|&r| Some(BigRational::from_integer(BigInt::from(r + 1))))
        .collect();
    for i in 0..order.len() - 1 {
        let v = order[i];
        let role = match vertex_state(&g, &w, Vertex(v))? {
            VertexState::Balanced => continue,
            VertexState::Under(_) => EdgeRole::StepUp,
            VertexState::Over(_) => EdgeRole::StepDown,
        };
        let pivot = roles
            .pivot(v, &order[..i], role)
            .ok_or_else(|| Error::Invariant("admissible vertex lost its pivot".into()))?;
        calibrate(&g, &mut w, Vertex(v), pivot)?;
    }
    let x = WeightMap::from_integers(params, normalize_min(clear_denominators(&w)))?;
    if !x.is_balanced() {
        return Err(Error::Invariant("all-nodes witness is not balanced".into()));
    }
    if rank_of_weights(&x, TieMode::Strict)? != *pi {
        return Err(Error::Invariant("all-nodes witness reorders edges".into()));
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::is_feasible_ranking;
    use crate::frame::TieBreakMode;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Option<BigRational> {
        Some(BigRational::from_integer(BigInt::from(n)))
    }

    fn ranking_from_values(g: &DeBruijnGraph, values: &[u32]) -> Ranking {
        let grams: BTreeMap<String, usize> = g
            .edges()
            .map(|e| (g.edge_gram(e), values[e.0] as usize))
            .collect();
        Ranking::from_grams(g, &grams).unwrap()
    }

    fn g(qq: usize, ell: usize) -> DeBruijnGraph {
        DeBruijnGraph::new(CodeParams::new(qq, ell).unwrap())
    }

    #[test]
    fn calibrate_under_state() {
        // At A: in CA=5, GA=1; out AC=2, AG=3. AA is a loop and is ignored.
        let g = g(3, 2);
        let e = |s: &str| g.parse_edge(s).unwrap();
        let mut w: PartialWeights = vec![None; 9];
        for (s, x) in [("CA", 5), ("GA", 1), ("AC", 2), ("AG", 3), ("AA", 7)] {
            w[e(s).0] = q(x);
        }
        let v = g.parse_vertex("A").unwrap();
        assert!(matches!(vertex_state(&g, &w, v).unwrap(), VertexState::Under(_)));
        let value = |x: Edge| w[x.0].clone();
        assert_eq!(edge_role(&g, value, v, e("AC")).unwrap(), EdgeRole::StepUp);
        assert_eq!(edge_role(&g, value, v, e("AG")).unwrap(), EdgeRole::Stable);
        assert_eq!(edge_role(&g, value, v, e("CA")).unwrap(), EdgeRole::StepDown);
        assert!(matches!(calibrate(&g, &mut w.clone(), v, e("CA")), Err(Error::Precondition(_))));

        let c = calibrate(&g, &mut w, v, e("AC")).unwrap();
        assert_eq!(Some(c), q(1));
        assert_eq!(w[e("CA").0], q(6));
        assert_eq!(w[e("GA").0], q(1));
        assert_eq!(vertex_state(&g, &w, v).unwrap(), VertexState::Balanced);
    }

    #[test]
    fn calibrate_over_state_mirror() {
        let g = g(3, 2);
        let e = |s: &str| g.parse_edge(s).unwrap();
        let mut w: PartialWeights = vec![None; 9];
        for (s, x) in [("AC", 5), ("AG", 1), ("CA", 2), ("GA", 3)] {
            w[e(s).0] = q(x);
        }
        let v = g.parse_vertex("A").unwrap();
        assert!(matches!(vertex_state(&g, &w, v).unwrap(), VertexState::Over(_)));
        assert_eq!(calibrate(&g, &mut w, v, e("CA")).unwrap(), BigRational::one());
        assert_eq!(vertex_state(&g, &w, v).unwrap(), VertexState::Balanced);
        // Missing weight at the vertex.
        w[e("AG").0] = None;
        assert!(matches!(vertex_state(&g, &w, v), Err(Error::MissingWeight(_))));
    }

    proptest! {
        #[test]
        fn calibrate_preserves_order(seed in any::<u64>()) {
            let g = g(4, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut values: Vec<u32> = (1..=16).collect();
            values.shuffle(&mut rng);
            let w0: PartialWeights = values.iter().map(|&x| q(x as i64)).collect();
            let v = Vertex(seed as usize % 4);
            let want = match vertex_state(&g, &w0, v).unwrap() {
                VertexState::Balanced => return Ok(()),
                VertexState::Under(_) => EdgeRole::StepUp,
                VertexState::Over(_) => EdgeRole::StepDown,
            };
            let value = |x: Edge| w0[x.0].clone();
            for e in g.edges() {
                if edge_role(&g, value, v, e).unwrap() != want {
                    continue;
                }
                let mut w = w0.clone();
                calibrate(&g, &mut w, v, e).unwrap();
                prop_assert_eq!(vertex_state(&g, &w, v).unwrap(), VertexState::Balanced);
                for a in 0..16 {
                    for b in 0..16 {
                        prop_assert_eq!(w0[a] < w0[b], w[a] < w[b]);
                    }
                }
            }
        }
    }

    fn random_ranking(domain: &BTreeSet<Edge>, rng: &mut ChaCha8Rng) -> Ranking {
        let mut order: Vec<Edge> = domain.iter().copied().collect();
        order.shuffle(rng);
        Ranking::from_order(&order).unwrap()
    }

    #[test]
    fn first_node_rejects_alternating_cut() {
        let f = EncodingFrame::default_for(&CodeParams::new(3, 2).unwrap()).unwrap();
        let g = f.graph();
        let v0 = g.src(f.alpha()[0]);
        let cut = g.cut_edges(&[v0]).unwrap();
        let mut order = Vec::new();
        for (a, b) in cut.incoming.iter().zip(&cut.outgoing) {
            order.push(*a);
            order.push(*b);
        }
        let rest: Vec<Edge> = first_node_domain(&f)
            .into_iter()
            .filter(|e| !order.contains(e))
            .collect();
        order.extend(rest);
        let pi = Ranking::from_order(&order).unwrap();
        match encode_first_node(&f, &pi) {
            Err(Error::DyckConfiguration { word, .. }) => assert_eq!(word, "0101"),
            other => panic!("expected Dyck rejection, got {other:?}"),
        }
    }

    #[test]
    fn first_node_outputs_are_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for qq in [3, 4] {
            let p = CodeParams::new(qq, 2).unwrap();
            let f = EncodingFrame::default_for(&p).unwrap();
            let domain = first_node_domain(&f);
            let mut accepted = 0;
            while accepted < 250 {
                let pi = random_ranking(&domain, &mut rng);
                let x = match encode_first_node(&f, &pi) {
                    Err(Error::DyckConfiguration { .. }) => continue,
                    r => r.unwrap(),
                };
                accepted += 1;
                assert!(x.is_balanced());
                assert_eq!(decode_first_node(&f, &x).unwrap(), pi);
                let full = rank_of_weights(&x, TieMode::Strict).unwrap();
                assert!(is_feasible_ranking(&p, &full).unwrap().is_some());
            }
        }
    }

    #[test]
    fn first_node_larger_and_reverse_edge_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = CodeParams::new(3, 3).unwrap();
        let f = EncodingFrame::default_for(&p).unwrap();
        let p4 = CodeParams::new(4, 2).unwrap();
        let d = EncodingFrame::default_for(&p4).unwrap();
        let r = EncodingFrame::new(&p4, d.alpha().to_vec(), d.beta().to_vec(), TieBreakMode::ReverseEdge)
            .unwrap();
        for frame in [&f, &r] {
            let domain = first_node_domain(frame);
            for _ in 0..50 {
                let pi = random_ranking(&domain, &mut rng);
                match encode_first_node(frame, &pi) {
                    Err(Error::DyckConfiguration { .. }) => {}
                    r => assert_eq!(decode_first_node(frame, &r.unwrap()).unwrap(), pi),
                }
            }
        }
    }

    #[test]
    fn first_node_self_loop_variant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = CodeParams::new(4, 2).unwrap();
        let f = EncodingFrame::default_for(&p).unwrap();
        let core = first_node_core_domain(&f);
        assert_eq!(core.len(), 16 - 4 + 2 - 4);
        let loops = f.graph().self_loops();
        let mut done = 0;
        while done < 50 {
            let pi = random_ranking(&core, &mut rng);
            let mut slots: Vec<usize> = (0..16).collect();
            slots.shuffle(&mut rng);
            let ranks: BTreeMap<Edge, usize> = loops.iter().copied().zip(slots).collect();
            let x = match encode_first_node_with_self_loops(&f, &pi, &ranks) {
                Err(Error::DyckConfiguration { .. }) => continue,
                r => r.unwrap(),
            };
            done += 1;
            let (back, loops_back) = decode_first_node_with_self_loops(&f, &x).unwrap();
            assert_eq!(back, pi);
            assert_eq!(loops_back, ranks);
        }
    }

    #[test]
    fn full_condition_fails_on_counterexamples() {
        let g = g(4, 2);
        // Order AA AC AG AT CA CC CG CT GA GC GG GT TA TC TG TT.
        let counterexample = ranking_from_values(&g, &[12, 0, 1, 7, 2, 13, 6, 8, 3, 5, 14, 10, 4, 11, 9, 15]);
        assert_eq!(full_condition_order(g.params(), &counterexample).unwrap(), None);
        assert_eq!(encode_full(g.params(), &counterexample).unwrap(), None);
        assert!(is_feasible_ranking(g.params(), &counterexample).unwrap().is_some());

        let infeasible = ranking_from_values(&g, &[12, 0, 1, 5, 4, 13, 11, 7, 3, 10, 14, 6, 2, 8, 9, 15]);
        assert_eq!(encode_full(g.params(), &infeasible).unwrap(), None);
    }

    #[test]
    fn full_accepts_systematic_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (qq, ell) in [(3, 2), (4, 2), (3, 3)] {
            let p = CodeParams::new(qq, ell).unwrap();
            let f = EncodingFrame::default_for(&p).unwrap();
            let mut accepted = 0;
            for _ in 0..60 {
                let pi = random_ranking(&f.information_set(), &mut rng);
                let x = crate::systematic::encode_systematic(&f, &pi).unwrap();
                let full = rank_of_weights(&x, TieMode::Strict).unwrap();
                if let Some(w) = encode_full(&p, &full).unwrap() {
                    accepted += 1;
                    assert!(w.is_balanced());
                    assert_eq!(rank_of_weights(&w, TieMode::Strict).unwrap(), full);
                    assert!(is_feasible_ranking(&p, &full).unwrap().is_some());
                }
            }
            assert!(accepted > 0, "q={qq} ℓ={ell}");
        }
    }
}
