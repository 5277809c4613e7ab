//! Exact per-edge weights on a De Bruijn graph.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{DeBruijnGraph, Edge, Vertex};
use crate::params::CodeParams;

/// How the weights are stored. Every representation converts to the others
/// without rounding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightRepr {
    Integer(Vec<BigInt>),
    /// `numerators[e] / denominator`, e.g. units of `(2Δ)^-1`.
    Scaled {
        numerators: Vec<BigInt>,
        denominator: BigInt,
    },
    Rational(Vec<BigRational>),
}

/// A weight for every edge of `G_{q,ℓ-1}`, indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMap {
    graph: DeBruijnGraph,
    repr: WeightRepr,
}

impl WeightMap {
    pub fn from_integers(params: &CodeParams, weights: Vec<BigInt>) -> Result<Self> {
        Self::build(params, WeightRepr::Integer(weights))
    }

    pub fn from_u64s(params: &CodeParams, weights: &[u64]) -> Result<Self> {
        Self::from_integers(params, weights.iter().map(|&w| BigInt::from(w)).collect())
    }

    pub fn from_scaled(
        params: &CodeParams,
        numerators: Vec<BigInt>,
        denominator: BigInt,
    ) -> Result<Self> {
        if !denominator.is_positive() {
            return Err(Error::Format("scale denominator must be positive".into()));
        }
        Self::build(
            params,
            WeightRepr::Scaled {
                numerators,
                denominator,
            },
        )
    }

    pub fn from_rationals(params: &CodeParams, weights: Vec<BigRational>) -> Result<Self> {
        Self::build(params, WeightRepr::Rational(weights))
    }

    /// Keyed by gram string; every edge must be present.
    pub fn from_grams(params: &CodeParams, weights: &BTreeMap<String, BigInt>) -> Result<Self> {
        let graph = DeBruijnGraph::new(params.clone());
        let mut values: Vec<Option<BigInt>> = vec![None; graph.edge_count()];
        for (gram, w) in weights {
            let e = graph.parse_edge(gram)?;
            values[e.0] = Some(w.clone());
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| Error::MissingWeight(graph.edge_gram(Edge(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_integers(params, values)
    }

    fn build(params: &CodeParams, repr: WeightRepr) -> Result<Self> {
        let graph = DeBruijnGraph::new(params.clone());
        let len = match &repr {
            WeightRepr::Integer(v) => v.len(),
            WeightRepr::Scaled { numerators, .. } => numerators.len(),
            WeightRepr::Rational(v) => v.len(),
        };
        if len != graph.edge_count() {
            return Err(Error::Format(format!(
                "expected {} weights, got {len}",
                graph.edge_count()
            )));
        }
        Ok(WeightMap { graph, repr })
    }

    pub fn graph(&self) -> &DeBruijnGraph {
        &self.graph
    }

    pub fn params(&self) -> &CodeParams {
        self.graph.params()
    }

    pub fn repr(&self) -> &WeightRepr {
        &self.repr
    }

    pub fn len(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, e: Edge) -> BigRational {
        match &self.repr {
            WeightRepr::Integer(v) => BigRational::from_integer(v[e.0].clone()),
            WeightRepr::Scaled {
                numerators,
                denominator,
            } => BigRational::new(numerators[e.0].clone(), denominator.clone()),
            WeightRepr::Rational(v) => v[e.0].clone(),
        }
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.graph.edges().map(|e| self.get(e)).collect()
    }

    /// `Some` iff every weight is an integer.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        match &self.repr {
            WeightRepr::Integer(v) => Some(v.clone()),
            WeightRepr::Scaled {
                numerators,
                denominator,
            } => numerators
                .iter()
                .map(|n| {
                    let (q, r) = n.div_rem(denominator);
                    r.is_zero().then_some(q)
                })
                .collect(),
            WeightRepr::Rational(v) => v
                .iter()
                .map(|r| r.is_integer().then(|| r.to_integer()))
                .collect(),
        }
    }

    /// Multiply by the least common denominator, giving integers.
    pub fn clear_denominators(&self) -> WeightMap {
        let ints = match &self.repr {
            WeightRepr::Integer(v) => v.clone(),
            WeightRepr::Scaled { numerators, .. } => numerators.clone(),
            WeightRepr::Rational(v) => {
                let lcm = v
                    .iter()
                    .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                v.iter()
                    .map(|r| r.numer() * (&lcm / r.denom()))
                    .collect()
            }
        };
        WeightMap {
            graph: self.graph.clone(),
            repr: WeightRepr::Integer(ints),
        }
    }

    /// Positive integer entries throughout.
    pub fn is_profile_vector(&self) -> bool {
        self.to_integers()
            .is_some_and(|v| v.iter().all(|w| w.is_positive()))
    }

    pub fn require_profile_vector(&self) -> Result<Vec<BigInt>> {
        let ints = self.to_integers();
        for e in self.graph.edges() {
            let ok = ints.as_ref().is_some_and(|v| v[e.0].is_positive());
            if !ok {
                return Err(Error::NotPositive(self.graph.edge_gram(e)));
            }
        }
        Ok(ints.unwrap_or_default())
    }

    pub fn total(&self) -> BigRational {
        self.sum(self.graph.edges())
    }

    fn sum(&self, edges: impl IntoIterator<Item = Edge>) -> BigRational {
        match &self.repr {
            WeightRepr::Integer(v) => {
                BigRational::from_integer(edges.into_iter().map(|e| &v[e.0]).sum())
            }
            WeightRepr::Scaled {
                numerators,
                denominator,
            } => BigRational::new(
                edges.into_iter().map(|e| &numerators[e.0]).sum(),
                denominator.clone(),
            ),
            WeightRepr::Rational(v) => edges
                .into_iter()
                .fold(BigRational::zero(), |acc, e| acc + &v[e.0]),
        }
    }

    /// `wt(E_in(v)) - wt(E_out(v))`. The self-loop sits on both sides.
    pub fn defect(&self, v: Vertex) -> Result<BigRational> {
        let inw = self.sum(self.graph.in_edges(v)?);
        let outw = self.sum(self.graph.out_edges(v)?);
        Ok(inw - outw)
    }

    pub fn is_balanced(&self) -> bool {
        self.first_unbalanced().is_none()
    }

    pub fn first_unbalanced(&self) -> Option<Vertex> {
        self.graph
            .vertices()
            .find(|&v| !self.defect(v).map(|d| d.is_zero()).unwrap_or(false))
    }

    pub fn require_balanced(&self) -> Result<()> {
        match self.first_unbalanced() {
            None => Ok(()),
            Some(v) => Err(Error::Unbalanced(self.graph.vertex_gram(v))),
        }
    }

    /// `wt(E_in(U)) - wt(E_out(U))` over the set-level cut.
    pub fn cut_imbalance(&self, subset: &[Vertex]) -> Result<BigRational> {
        let cut = self.graph.cut_edges(subset)?;
        Ok(self.sum(cut.incoming) - self.sum(cut.outgoing))
    }

    /// Gram-keyed view for serialization. Integers only.
    pub fn to_gram_map(&self) -> Option<BTreeMap<String, BigInt>> {
        let ints = self.to_integers()?;
        Some(
            self.graph
                .edges()
                .map(|e| (self.graph.edge_gram(e), ints[e.0].clone()))
                .collect(),
        )
    }
}
