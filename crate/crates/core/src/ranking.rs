//! Rankings: bijections from an edge set onto `0..k`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::graph::{DeBruijnGraph, Edge};
use crate::weights::WeightMap;

/// A permutation of an edge subset, stored as edge → rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ranking {
    ranks: BTreeMap<Edge, usize>,
}

impl Ranking {
    /// Validates that the ranks are exactly `0..len`.
    pub fn new(ranks: BTreeMap<Edge, usize>) -> Result<Self> {
        let k = ranks.len();
        let mut seen = vec![false; k];
        for &r in ranks.values() {
            if r >= k || std::mem::replace(&mut seen[r], true) {
                return Err(Error::NotBijective(k));
            }
        }
        Ok(Ranking { ranks })
    }

    /// Ranks given by position: `order[i]` gets rank `i`.
    pub fn from_order(order: &[Edge]) -> Result<Self> {
        let ranks: BTreeMap<Edge, usize> =
            order.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        if ranks.len() != order.len() {
            return Err(Error::NotBijective(order.len()));
        }
        Ok(Ranking { ranks })
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, e: Edge) -> Option<usize> {
        self.ranks.get(&e).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = Edge> + '_ {
        self.ranks.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, usize)> + '_ {
        self.ranks.iter().map(|(&e, &r)| (e, r))
    }

    /// Edges in ascending rank.
    pub fn order(&self) -> Vec<Edge> {
        let mut order = vec![Edge(0); self.len()];
        for (&e, &r) in &self.ranks {
            order[r] = e;
        }
        order
    }

    pub fn require_domain(&self, expected: &BTreeSet<Edge>, g: &DeBruijnGraph) -> Result<()> {
        if self.ranks.len() == expected.len() && self.ranks.keys().eq(expected.iter()) {
            return Ok(());
        }
        let missing = expected.iter().find(|e| !self.ranks.contains_key(e));
        let extra = self.ranks.keys().find(|e| !expected.contains(e));
        let detail = match (missing, extra) {
            (Some(e), _) => format!("edge {} is missing", g.edge_gram(*e)),
            (None, Some(e)) => format!("edge {} is not in the information set", g.edge_gram(*e)),
            (None, None) => "domain differs".to_string(),
        };
        Err(Error::DomainMismatch(detail))
    }

    /// `π|_B`: keep the relative order of the elements of `B`.
    pub fn project(&self, subset: &BTreeSet<Edge>) -> Result<Ranking> {
        if let Some(e) = subset.iter().find(|e| !self.ranks.contains_key(e)) {
            return Err(Error::DomainMismatch(format!(
                "projection set contains unranked edge {}",
                e.0
            )));
        }
        let kept: Vec<Edge> = self
            .order()
            .into_iter()
            .filter(|e| subset.contains(e))
            .collect();
        Ranking::from_order(&kept)
    }

    pub fn to_grams(&self, g: &DeBruijnGraph) -> BTreeMap<String, usize> {
        self.ranks
            .iter()
            .map(|(&e, &r)| (g.edge_gram(e), r))
            .collect()
    }

    pub fn from_grams(g: &DeBruijnGraph, ranks: &BTreeMap<String, usize>) -> Result<Ranking> {
        let mut out = BTreeMap::new();
        for (gram, &r) in ranks {
            if out.insert(g.parse_edge(gram)?, r).is_some() {
                return Err(Error::Format(format!("edge {gram} ranked twice")));
            }
        }
        Ranking::new(out)
    }
}

/// Tie handling in [`rank_of_weights`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieMode {
    /// Equal weights are an error.
    #[default]
    Strict,
    /// Equal weights are ordered by edge id. Lossy: the result does not
    /// satisfy the weights.
    LexicographicLossy,
}

/// The unique `π` with `w ⊨ π`.
pub fn rank_of_weights(w: &WeightMap, mode: TieMode) -> Result<Ranking> {
    let g = w.graph();
    let values: Vec<BigRational> = w.to_rationals();
    let mut order: Vec<Edge> = g.edges().collect();
    order.sort_by(|a, b| values[a.0].cmp(&values[b.0]).then(a.cmp(b)));
    if mode == TieMode::Strict {
        if let Some(pair) = order.windows(2).find(|p| values[p[0].0] == values[p[1].0]) {
            return Err(Error::Tie(g.edge_gram(pair[0]), g.edge_gram(pair[1])));
        }
    }
    Ranking::from_order(&order)
}

pub fn project_ranking(r: &Ranking, subset: &BTreeSet<Edge>) -> Result<Ranking> {
    r.project(subset)
}
