//! Strings and their cyclic ℓ-gram profiles.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{DeBruijnGraph, Edge, Vertex};
use crate::params::{Alphabet, CodeParams};
use crate::weights::WeightMap;

/// Longest string [`realize_string`] will build.
pub const REALIZE_LIMIT: usize = 1 << 31;

/// Cyclic window counts of `s`, indexed by gram id (base `q`, first symbol
/// most significant). Works for any `ell ≥ 1`; windows wrap around as often
/// as needed when `s` is shorter than `ell`.
pub fn profile_counts(alphabet: &Alphabet, s: &str, ell: usize) -> Result<Vec<u64>> {
    if ell == 0 {
        return Err(Error::InvalidParams("ℓ must be at least 1".into()));
    }
    let digits: Vec<usize> = s.chars().map(|c| alphabet.digit(c)).collect::<Result<_>>()?;
    if digits.is_empty() {
        return Err(Error::Precondition("string must be non-empty".into()));
    }
    let q = alphabet.len();
    let size = crate::params::checked_pow(q, ell)
        .ok_or_else(|| Error::InvalidParams(format!("{q}^{ell} grams is too many")))?;
    let mut counts = vec![0u64; size];
    let n = digits.len();
    let mut id = 0usize;
    for j in 0..ell - 1 {
        id = (id * q + digits[j % n]) % size;
    }
    for i in 0..n {
        id = (id * q + digits[(i + ell - 1) % n]) % size;
        counts[id] += 1;
    }
    Ok(counts)
}

/// `p_s` as a weight map on the De Bruijn graph of `params`.
pub fn profile_vector(params: &CodeParams, s: &str) -> Result<WeightMap> {
    let counts = profile_counts(params.alphabet(), s, params.ell())?;
    WeightMap::from_integers(params, counts.into_iter().map(BigInt::from).collect())
}

/// A cyclic string whose profile is `x`.
///
/// Walks an Eulerian circuit of the multigraph with `x(e)` copies of `e`,
/// starting at vertex 0 and always leaving by the smallest edge id that has
/// copies left.
pub fn realize_string(x: &WeightMap) -> Result<String> {
    let g = x.graph();
    let ints = x.require_profile_vector()?;
    x.require_balanced()?;
    let mut remaining = Vec::with_capacity(ints.len());
    let mut total = 0usize;
    for (e, w) in ints.iter().enumerate() {
        let w = w
            .to_usize()
            .filter(|&w| w <= REALIZE_LIMIT)
            .ok_or_else(|| too_long(g, Edge(e)))?;
        total = total.checked_add(w).filter(|&t| t <= REALIZE_LIMIT).ok_or_else(|| too_long(g, Edge(e)))?;
        remaining.push(w);
    }
    let circuit = eulerian_circuit(g, &mut remaining, total);
    let alphabet = g.params().alphabet();
    let span = g.vertex_count();
    Ok(circuit
        .into_iter()
        .map(|e| alphabet.symbol(e.0 / span))
        .collect())
}

fn too_long(g: &DeBruijnGraph, e: Edge) -> Error {
    Error::ResourceGuard(format!(
        "profile total exceeds {REALIZE_LIMIT} symbols (at {})",
        g.edge_gram(e)
    ))
}

/// Hierholzer's algorithm on multiplicity counters. `remaining` is consumed.
fn eulerian_circuit(g: &DeBruijnGraph, remaining: &mut [usize], total: usize) -> Vec<Edge> {
    let q = g.q();
    // Next symbol to try on leaving each vertex.
    let mut next = vec![0usize; g.vertex_count()];
    let mut circuit = Vec::with_capacity(total);
    // (vertex, edge used to reach it)
    let mut stack: Vec<(Vertex, Option<Edge>)> = vec![(Vertex(0), None)];
    while let Some(&(v, via)) = stack.last() {
        let mut taken = None;
        while next[v.0] < q {
            let e = v.0 * q + next[v.0];
            if remaining[e] > 0 {
                remaining[e] -= 1;
                taken = Some(Edge(e));
                break;
            }
            next[v.0] += 1;
        }
        match taken {
            Some(e) => stack.push((g.dest(e), Some(e))),
            None => {
                stack.pop();
                if let Some(e) = via {
                    circuit.push(e);
                }
            }
        }
    }
    circuit.reverse();
    circuit
}
