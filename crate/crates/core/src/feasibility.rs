//! Feasibility of profile vectors and of permutations.
//!
//! A permutation `π` of all `q^ℓ` edges is feasible when some balanced,
//! positive integer weighting realizes it. The oracle poses this as an
//! exact linear feasibility problem with unit gaps:
//!
//! ```text
//! x[π⁻¹(0)] ≥ 1,   x[π⁻¹(k+1)] ≥ x[π⁻¹(k)] + 1,   Σ_in(v) x = Σ_out(v) x  ∀v
//! ```
//!
//! Writing `x[π⁻¹(k)] = (k+1) + d_0 + … + d_k` with slack `d ≥ 0` turns the
//! ordering into sign constraints, leaving only the balance rows (the last
//! vertex is implied by the others). Any rational solution, multiplied by
//! the lcm of its denominators, stays balanced, keeps gaps of at least one
//! and stays positive, so rational feasibility equals integer feasibility.
//! Conversely any strictly ordered positive integer solution has unit gaps.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DeBruijnGraph, Edge, Vertex};
use crate::params::CodeParams;
use crate::ranking::Ranking;
use crate::simplex::find_nonnegative_solution;
use crate::weights::WeightMap;

/// A balanced positive integer weighting that satisfies the queried ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityWitness {
    pub profile: WeightMap,
}

/// A positive vector is feasible iff its weighted De Bruijn graph balances.
pub fn is_feasible_vector(x: &WeightMap) -> Result<bool> {
    x.require_profile_vector()?;
    Ok(x.is_balanced())
}

/// Ranks indexed by edge id. Requires a total ranking.
pub fn rank_vector(params: &CodeParams, pi: &Ranking) -> Result<Vec<usize>> {
    let n = params.edge_count();
    if pi.len() != n || pi.domain().any(|e| e.0 >= n) {
        return Err(Error::DomainMismatch(format!(
            "feasibility needs a ranking of all {n} edges, got {}",
            pi.len()
        )));
    }
    let mut ranks = vec![0; n];
    for (e, r) in pi.iter() {
        ranks[e.0] = r;
    }
    Ok(ranks)
}

/// Exact LP oracle. `Some(witness)` iff `pi` is feasible.
pub fn is_feasible_ranking(
    params: &CodeParams,
    pi: &Ranking,
) -> Result<Option<FeasibilityWitness>> {
    let ranks = rank_vector(params, pi)?;
    let g = DeBruijnGraph::new(params.clone());
    let Some(x) = solve_ranks(&g, &ranks) else {
        return Ok(None);
    };
    let profile = integer_witness(params, x)?;
    Ok(Some(FeasibilityWitness { profile }))
}

/// Rational weights realizing `ranks` with unit gaps, if any exist.
pub(crate) fn solve_ranks(g: &DeBruijnGraph, ranks: &[usize]) -> Option<Vec<BigRational>> {
    let n = ranks.len();
    let rows = g.vertex_count() - 1;
    let mut a = vec![vec![0i64; n]; rows];
    let mut b = vec![0i64; rows];
    for e in g.edges() {
        let r = ranks[e.0];
        let (s, d) = (g.src(e).0, g.dest(e).0);
        if s == d {
            continue;
        }
        // x_e = (r+1) + Σ_{j ≤ r} d_j enters `d` positively and `s` negatively.
        for (v, sign) in [(d, 1i64), (s, -1i64)] {
            if v < rows {
                a[v][..=r].iter_mut().for_each(|c| *c += sign);
                b[v] -= sign * (r as i64 + 1);
            }
        }
    }
    let lift = |v: i64| BigRational::from_integer(BigInt::from(v));
    let slack = find_nonnegative_solution(
        a.into_iter()
            .map(|row| row.into_iter().map(lift).collect())
            .collect(),
        b.into_iter().map(lift).collect(),
    )?;
    // Rebuild x from the slack prefix sums in rank order.
    let mut order = vec![0usize; n];
    for (e, &r) in ranks.iter().enumerate() {
        order[r] = e;
    }
    let mut x = vec![BigRational::zero(); n];
    let mut acc = BigRational::zero();
    for (k, &e) in order.iter().enumerate() {
        acc += &slack[k];
        x[e] = &acc + BigRational::from_integer(BigInt::from(k + 1));
    }
    Some(x)
}

/// Scale by the lcm of denominators, then shift so the minimum is 1. Both
/// steps keep balance because every vertex has as many in-edges as out-edges.
pub(crate) fn integer_witness(params: &CodeParams, x: Vec<BigRational>) -> Result<WeightMap> {
    let lcm = x.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = x.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let w = WeightMap::from_integers(params, normalize_min(ints))?;
    if !w.is_balanced() {
        return Err(Error::Invariant("LP witness is not balanced".into()));
    }
    Ok(w)
}

/// Subtract `min - 1` from every weight.
pub(crate) fn normalize_min(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(min) = ints.iter().min().cloned() {
        let shift = min - 1;
        ints.iter_mut().for_each(|w| *w -= &shift);
    }
    ints
}

/// Subsets examined by the Dyck checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyckMode {
    Singletons,
    AllSubsets,
}

/// Largest vertex count for [`DyckMode::AllSubsets`].
pub const ALL_SUBSETS_LIMIT: usize = 12;

/// Is `word` (`false` = in-edge, `true` = out-edge, ascending weight) a
/// Dyck word read either way? Equivalently, the `i`-th lightest in-edge is
/// lighter than the `i`-th lightest out-edge for every `i`, or vice versa.
pub fn is_dyck_word(word: &[bool]) -> bool {
    let ins = word.iter().filter(|&&b| !b).count();
    if ins * 2 != word.len() {
        return false;
    }
    let mut height = 0i64;
    let mut low = 0i64;
    let mut high = 0i64;
    for &b in word {
        height += if b { -1 } else { 1 };
        low = low.min(height);
        high = high.max(height);
    }
    low == 0 || high == 0
}

pub fn word_string(word: &[bool]) -> String {
    word.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// The in/out indicator word of the cut at `subset`, sorted by `value`.
pub fn cut_word<T: Ord>(
    g: &DeBruijnGraph,
    value: impl Fn(Edge) -> Option<T>,
    subset: &[Vertex],
) -> Result<Vec<bool>> {
    let cut = g.cut_edges(subset)?;
    let mut tagged = Vec::with_capacity(cut.incoming.len() * 2);
    for (edges, tag) in [(&cut.incoming, false), (&cut.outgoing, true)] {
        for &e in edges {
            let v = value(e).ok_or_else(|| Error::MissingWeight(g.edge_gram(e)))?;
            tagged.push((v, e, tag));
        }
    }
    tagged.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(p) = tagged.windows(2).find(|p| p[0].0 == p[1].0) {
        return Err(Error::Tie(g.edge_gram(p[0].1), g.edge_gram(p[1].1)));
    }
    Ok(tagged.into_iter().map(|(_, _, t)| t).collect())
}

/// Whether the cut at `subset` is in Dyck configuration under `value`.
pub fn dyck_at<T: Ord>(
    g: &DeBruijnGraph,
    value: impl Fn(Edge) -> Option<T>,
    subset: &[Vertex],
) -> Result<bool> {
    Ok(is_dyck_word(&cut_word(g, value, subset)?))
}

pub fn dyck_at_ranking(g: &DeBruijnGraph, pi: &Ranking, subset: &[Vertex]) -> Result<bool> {
    dyck_at(g, |e| pi.rank(e), subset)
}

pub fn dyck_at_weights(w: &WeightMap, subset: &[Vertex]) -> Result<bool> {
    let values = w.to_rationals();
    dyck_at(w.graph(), |e| Some(values[e.0].clone()), subset)
}

/// One examined subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyckFinding {
    pub subset: Vec<Vertex>,
    pub word: String,
    pub dyck: bool,
}

/// Precomputed cuts for a family of subsets, for checking many rankings.
#[derive(Debug, Clone)]
pub struct DyckChecker {
    subsets: Vec<Vec<Vertex>>,
    // (edge, is_out) per subset
    cuts: Vec<Vec<(usize, bool)>>,
}

impl DyckChecker {
    pub fn new(g: &DeBruijnGraph, mode: DyckMode) -> Result<Self> {
        let n = g.vertex_count();
        let subsets: Vec<Vec<Vertex>> = match mode {
            DyckMode::Singletons => (0..n).map(|v| vec![Vertex(v)]).collect(),
            DyckMode::AllSubsets => {
                if n > ALL_SUBSETS_LIMIT {
                    return Err(Error::ResourceGuard(format!(
                        "all-subsets Dyck check limited to {ALL_SUBSETS_LIMIT} vertices, graph has {n}"
                    )));
                }
                (1u32..(1 << n) - 1)
                    .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(Vertex).collect())
                    .collect()
            }
        };
        let cuts = subsets
            .iter()
            .map(|s| {
                let cut = g.cut_edges(s)?;
                Ok(cut
                    .incoming
                    .iter()
                    .map(|e| (e.0, false))
                    .chain(cut.outgoing.iter().map(|e| (e.0, true)))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DyckChecker { subsets, cuts })
    }

    pub fn subsets(&self) -> &[Vec<Vertex>] {
        &self.subsets
    }

    fn word(&self, idx: usize, ranks: &[usize]) -> Vec<bool> {
        let mut cut = self.cuts[idx].clone();
        cut.sort_unstable_by_key(|&(e, _)| ranks[e]);
        cut.into_iter().map(|(_, t)| t).collect()
    }

    /// Index of the first subset in Dyck configuration under `ranks`.
    pub fn first_dyck(&self, ranks: &[usize]) -> Option<usize> {
        (0..self.cuts.len()).find(|&i| is_dyck_word(&self.word(i, ranks)))
    }

    pub fn report(&self, ranks: &[usize]) -> Vec<DyckFinding> {
        (0..self.cuts.len())
            .map(|i| {
                let word = self.word(i, ranks);
                DyckFinding {
                    subset: self.subsets[i].clone(),
                    dyck: is_dyck_word(&word),
                    word: word_string(&word),
                }
            })
            .collect()
    }
}

/// `true` iff no examined subset is in Dyck configuration. Necessary for
/// feasibility, not sufficient.
pub fn dyck_necessary_check(params: &CodeParams, pi: &Ranking, mode: DyckMode) -> Result<bool> {
    let ranks = rank_vector(params, pi)?;
    let checker = DyckChecker::new(&DeBruijnGraph::new(params.clone()), mode)?;
    Ok(checker.first_dyck(&ranks).is_none())
}

pub fn dyck_report(params: &CodeParams, pi: &Ranking, mode: DyckMode) -> Result<Vec<DyckFinding>> {
    let ranks = rank_vector(params, pi)?;
    let checker = DyckChecker::new(&DeBruijnGraph::new(params.clone()), mode)?;
    Ok(checker.report(&ranks))
}

/// Largest `q^ℓ` enumerated without an explicit override.
pub const ENUMERATION_LIMIT: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Skip collecting the feasible rankings.
    pub count_only: bool,
    /// Worker threads; 0 uses the rayon default.
    pub parallel: usize,
    /// Reject singleton Dyck configurations before calling the LP.
    pub dyck_prefilter: bool,
    /// Lift the `q^ℓ ≤ 9` guard.
    pub override_guard: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            count_only: true,
            parallel: 0,
            dyck_prefilter: true,
            override_guard: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub examined: u64,
    pub feasible: u64,
    /// Rankings rejected by the Dyck prefilter without an LP call.
    pub prefiltered: u64,
    /// Rank vectors (indexed by edge id) of the feasible rankings, in
    /// lexicographic order, unless `count_only`.
    pub rankings: Option<Vec<Vec<usize>>>,
}

/// Count (and optionally list) all feasible rankings of `Σ^ℓ`.
pub fn enumerate_feasible(params: &CodeParams, options: &EnumerateOptions) -> Result<Enumeration> {
    let n = params.edge_count();
    if n > ENUMERATION_LIMIT && !options.override_guard {
        return Err(Error::ResourceGuard(format!(
            "enumerating {n}! rankings needs an explicit override (limit q^ℓ ≤ {ENUMERATION_LIMIT})"
        )));
    }
    let total = factorial_u64(n).ok_or_else(|| {
        Error::ResourceGuard(format!("{n}! rankings exceed the enumeration index space"))
    })?;
    let g = DeBruijnGraph::new(params.clone());
    let checker = DyckChecker::new(&g, DyckMode::Singletons)?;

    let chunks = 256u64.min(total);
    let run = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = total * c / chunks;
                let end = total * (c + 1) / chunks;
                scan_range(&g, &checker, options, start, end)
            })
            .collect::<Vec<_>>()
    };
    let parts = if options.parallel > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.parallel)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?
            .install(run)
    } else {
        run()
    };

    let mut out = Enumeration {
        examined: total,
        feasible: 0,
        prefiltered: 0,
        rankings: (!options.count_only).then(Vec::new),
    };
    for part in parts {
        out.feasible += part.feasible;
        out.prefiltered += part.prefiltered;
        if let (Some(all), Some(mine)) = (out.rankings.as_mut(), part.rankings) {
            all.extend(mine);
        }
    }
    Ok(out)
}

struct Partial {
    feasible: u64,
    prefiltered: u64,
    rankings: Option<Vec<Vec<usize>>>,
}

fn scan_range(
    g: &DeBruijnGraph,
    checker: &DyckChecker,
    options: &EnumerateOptions,
    start: u64,
    end: u64,
) -> Partial {
    let mut out = Partial {
        feasible: 0,
        prefiltered: 0,
        rankings: (!options.count_only).then(Vec::new),
    };
    let mut ranks = nth_permutation(g.edge_count(), start);
    for _ in start..end {
        if options.dyck_prefilter && checker.first_dyck(&ranks).is_some() {
            out.prefiltered += 1;
        } else if solve_ranks(g, &ranks).is_some() {
            out.feasible += 1;
            if let Some(list) = out.rankings.as_mut() {
                list.push(ranks.clone());
            }
        }
        next_permutation(&mut ranks);
    }
    out
}

pub(crate) fn factorial_u64(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// The `index`-th permutation of `0..n` in lexicographic order.
pub fn nth_permutation(n: usize, mut index: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let f = factorial_u64(k).unwrap_or(u64::MAX);
        let pick = (index / f) as usize;
        index %= f;
        out.push(pool.remove(pick));
    }
    out
}

/// Advance to the lexicographic successor; `false` (and reset) after the last.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        p.reverse();
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).unwrap_or(i + 1);
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Convert a rank vector into a [`Ranking`].
pub fn ranking_from_vector(ranks: &[usize]) -> Result<Ranking> {
    Ranking::new(
        ranks
            .iter()
            .enumerate()
            .map(|(e, &r)| (Edge(e), r))
            .collect::<BTreeMap<_, _>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranking::{rank_of_weights, TieMode};

    fn params(q: usize, ell: usize) -> CodeParams {
        CodeParams::new(q, ell).unwrap()
    }

    fn ranking(g: &DeBruijnGraph, pairs: &[(&str, usize)]) -> Ranking {
        Ranking::from_grams(
            g,
            &pairs.iter().map(|&(s, r)| (s.to_string(), r)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn vector_feasibility() {
        let p = params(3, 2);
        let ok = WeightMap::from_u64s(&p, &[7, 1, 5, 2, 11, 8, 4, 9, 10]).unwrap();
        assert!(is_feasible_vector(&ok).unwrap());
        assert!(is_feasible_vector(&WeightMap::from_u64s(&p, &[1; 9]).unwrap()).unwrap());
        let bad = WeightMap::from_u64s(&p, &[7, 2, 5, 2, 11, 8, 4, 9, 10]).unwrap();
        assert!(!is_feasible_vector(&bad).unwrap());
        let zero = WeightMap::from_u64s(&p, &[0, 1, 5, 2, 11, 8, 4, 9, 10]).unwrap();
        assert!(matches!(is_feasible_vector(&zero), Err(Error::NotPositive(_))));
    }

    #[test]
    fn example_permutation_is_feasible() {
        let p = params(3, 2);
        let x = WeightMap::from_u64s(&p, &[7, 1, 5, 2, 11, 8, 4, 9, 10]).unwrap();
        let pi = rank_of_weights(&x, TieMode::Strict).unwrap();
        let w = is_feasible_ranking(&p, &pi).unwrap().expect("feasible");
        assert!(is_feasible_vector(&w.profile).unwrap());
        assert_eq!(rank_of_weights(&w.profile, TieMode::Strict).unwrap(), pi);
        // Same input, same witness.
        assert_eq!(is_feasible_ranking(&p, &pi).unwrap().unwrap(), w);
    }

    #[test]
    fn partial_rankings_rejected() {
        let p = params(3, 2);
        let pi = Ranking::from_order(&[Edge(0), Edge(1)]).unwrap();
        assert!(matches!(is_feasible_ranking(&p, &pi), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn dyck_words() {
        assert!(is_dyck_word(&[false, true]));
        assert!(is_dyck_word(&[true, false]));
        assert!(is_dyck_word(&[false, false, true, true]));
        assert!(!is_dyck_word(&[false, true, true, false]));
        assert!(!is_dyck_word(&[false, false, true]));
        // Alternating 0101… is Dyck.
        assert!(is_dyck_word(&[false, true, false, true, false, true]));
    }

    #[test]
    fn single_vertex_cut_word() {
        let p = params(3, 2);
        let g = DeBruijnGraph::new(p.clone());
        // A: in {CA, GA}, out {AC, AG}
        let mut w = [None; 9];
        w[g.parse_edge("CA").unwrap().0] = Some(1);
        w[g.parse_edge("GA").unwrap().0] = Some(3);
        w[g.parse_edge("AC").unwrap().0] = Some(2);
        w[g.parse_edge("AG").unwrap().0] = Some(4);
        let word = cut_word(&g, |e| w[e.0], &[Vertex(0)]).unwrap();
        assert_eq!(word_string(&word), "0101");
        assert!(dyck_at(&g, |e| w[e.0], &[Vertex(0)]).unwrap());
        w[g.parse_edge("AG").unwrap().0] = None;
        assert!(matches!(
            dyck_at(&g, |e| w[e.0], &[Vertex(0)]),
            Err(Error::MissingWeight(s)) if s == "AG"
        ));
        assert_eq!(dyck_at(&g, |e| w[e.0], &[]), Err(Error::ImproperSubset));
    }

    // Count non-Dyck interleavings of q in-edges and q out-edges at a
    // loop-free vertex by brute force over all (2q)! orderings.
    #[test]
    fn local_non_dyck_count_matches_catalan_formula() {
        let p = params(4, 3);
        let g = DeBruijnGraph::new(p.clone());
        let v = g.parse_vertex("AC").unwrap();
        let cut = g.cut_edges(&[v]).unwrap();
        let edges: Vec<Edge> = cut.incoming.iter().chain(&cut.outgoing).copied().collect();
        assert_eq!(edges.len(), 8);
        let mut perm: Vec<usize> = (0..8).collect();
        let mut accepted = 0;
        let mut total = 0;
        loop {
            let mut w = vec![None; g.edge_count()];
            for (i, &e) in edges.iter().enumerate() {
                w[e.0] = Some(perm[i]);
            }
            total += 1;
            if !dyck_at(&g, |e| w[e.0], &[v]).unwrap() {
                accepted += 1;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(total, 40320);
        assert_eq!(accepted, 24192);
    }

    #[test]
    fn permutation_indexing() {
        assert_eq!(nth_permutation(3, 0), [0, 1, 2]);
        assert_eq!(nth_permutation(3, 5), [2, 1, 0]);
        let mut p = nth_permutation(4, 0);
        for i in 1..24u64 {
            assert!(next_permutation(&mut p));
            assert_eq!(p, nth_permutation(4, i));
        }
        assert!(!next_permutation(&mut p));
    }

    // q = 2: balance at A reads x(AA)+x(CA) = x(AA)+x(AC), forcing
    // x(AC) = x(CA), which no ranking allows. Brute-force the small integer
    // box as an independent witness search, then compare with the LP count.
    #[test]
    fn binary_alphabet_has_no_feasible_rankings() {
        let p = params(2, 2);
        let mut found = 0;
        for a in 1..=8u64 {
            for b in 1..=8 {
                for c in 1..=8 {
                    for d in 1..=8 {
                        let w = WeightMap::from_u64s(&p, &[a, b, c, d]).unwrap();
                        let distinct = [a, b, c, d].iter().collect::<std::collections::BTreeSet<_>>().len() == 4;
                        if distinct && w.is_balanced() {
                            found += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(found, 0);
        for prefilter in [true, false] {
            let opts = EnumerateOptions { dyck_prefilter: prefilter, ..Default::default() };
            assert_eq!(enumerate_feasible(&p, &opts).unwrap().feasible, 0);
        }
    }

    #[test]
    fn guard() {
        let p = params(4, 2);
        assert!(matches!(
            enumerate_feasible(&p, &EnumerateOptions::default()),
            Err(Error::ResourceGuard(_))
        ));
        assert!(DyckChecker::new(&DeBruijnGraph::new(params(4, 3)), DyckMode::AllSubsets).is_err());
    }

    #[test]
    fn section_four_permutation_is_infeasible_without_singleton_dyck() {
        let p = params(4, 2);
        let g = DeBruijnGraph::new(p.clone());
        let pi = ranking(
            &g,
            &[
                ("AA", 12), ("AC", 0), ("AG", 1), ("AT", 5), ("CA", 4), ("CC", 13),
                ("CG", 11), ("CT", 7), ("GA", 3), ("GC", 10), ("GG", 14), ("GT", 6),
                ("TA", 2), ("TC", 8), ("TG", 9), ("TT", 15),
            ],
        );
        assert!(dyck_necessary_check(&p, &pi, DyckMode::Singletons).unwrap());
        assert!(is_feasible_ranking(&p, &pi).unwrap().is_none());
    }
}
