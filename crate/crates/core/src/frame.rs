//! Encoding frames: a Hamiltonian cycle `α` of `G_{q,ℓ-1}`, an extension `β`
//! making `α‖β` Eulerian, the tie-break cycles `γ_i`, and the scale `Δ`.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::{DeBruijnGraph, Edge, Vertex};
use crate::params::CodeParams;

/// Identifies the default-frame construction, so outputs can be compared
/// across releases.
pub const FRAME_ALGORITHM: &str = "fkm-lyndon-debruijn/hierholzer-min-edge/first-occurrence-v1";

/// How the tie-break cycles `γ_i` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreakMode {
    /// `γ_i` is `e_i` followed by the first `β` stretch from `dest(e_i)` back
    /// to `src(e_i)`; `Δ = C(q^{ℓ-1}, 2) + 1`.
    #[default]
    FirstOccurrence,
    /// `ℓ = 2` only: `γ_i` is `e_i` and its reverse edge. The cycles are
    /// edge-disjoint, so `Δ = q^{ℓ-1}` suffices.
    ReverseEdge,
}

impl TieBreakMode {
    pub fn name(self) -> &'static str {
        match self {
            TieBreakMode::FirstOccurrence => "first-occurrence",
            TieBreakMode::ReverseEdge => "reverse-edge",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "first-occurrence" => Ok(TieBreakMode::FirstOccurrence),
            "reverse-edge" => Ok(TieBreakMode::ReverseEdge),
            other => Err(Error::Format(format!("unknown tie-break mode {other:?}"))),
        }
    }
}

/// The cycle used to separate `e_i` from the other Hamiltonian edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieBreakCycle {
    /// Index of `e_i` in `α`.
    pub index: usize,
    /// Inclusive `β` index range `(s, s')`, cyclic. `None` in reverse-edge mode.
    pub beta_span: Option<(usize, usize)>,
    /// `e_i` followed by the rest of the cycle.
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingFrame {
    graph: DeBruijnGraph,
    alpha: Vec<Edge>,
    beta: Vec<Edge>,
    mode: TieBreakMode,
    delta: BigInt,
}

impl EncodingFrame {
    /// FKM Hamiltonian cycle and its Hierholzer extension.
    pub fn default_for(params: &CodeParams) -> Result<Self> {
        let alpha = default_hamiltonian(params)?;
        let beta = eulerian_extension(params, &alpha)?;
        Self::new(params, alpha, beta, TieBreakMode::FirstOccurrence)
    }

    pub fn new(
        params: &CodeParams,
        alpha: Vec<Edge>,
        beta: Vec<Edge>,
        mode: TieBreakMode,
    ) -> Result<Self> {
        params.require_encoder_regime()?;
        let graph = DeBruijnGraph::new(params.clone());
        validate_hamiltonian(&graph, &alpha)?;
        validate_eulerian(&graph, &alpha, &beta)?;
        let n = graph.vertex_count();
        let delta = match mode {
            TieBreakMode::FirstOccurrence => BigInt::from(n) * (n - 1) / 2 + 1,
            TieBreakMode::ReverseEdge => {
                if params.ell() != 2 {
                    return Err(Error::InvalidFrame(
                        "reverse-edge tie breaking needs ℓ = 2".into(),
                    ));
                }
                BigInt::from(n)
            }
        };
        Ok(EncodingFrame {
            graph,
            alpha,
            beta,
            mode,
            delta,
        })
    }

    /// Parse the cyclic-string form: `alpha` spells the Hamiltonian vertex
    /// sequence through its `(ℓ-1)`-windows, `euler` spells `α‖β` through
    /// its `ℓ`-windows.
    pub fn from_strings(
        params: &CodeParams,
        alpha: &str,
        euler: &str,
        mode: TieBreakMode,
    ) -> Result<Self> {
        let graph = DeBruijnGraph::new(params.clone());
        let alpha_edges = cyclic_windows(&graph, alpha)?;
        let all = cyclic_windows(&graph, euler)?;
        let n = alpha_edges.len();
        if all.len() < n || all[..n] != alpha_edges[..] {
            return Err(Error::InvalidFrame(
                "Eulerian string must start with the Hamiltonian cycle".into(),
            ));
        }
        Self::new(params, alpha_edges, all[n..].to_vec(), mode)
    }

    pub fn alpha_string(&self) -> String {
        self.spell(&self.alpha)
    }

    pub fn euler_string(&self) -> String {
        let mut s = self.spell(&self.alpha);
        s.push_str(&self.spell(&self.beta));
        s
    }

    fn spell(&self, edges: &[Edge]) -> String {
        let q = self.graph.q();
        let lead = self.graph.edge_count() / q;
        edges
            .iter()
            .map(|e| self.graph.params().alphabet().symbol(e.0 / lead % q))
            .collect()
    }

    pub fn graph(&self) -> &DeBruijnGraph {
        &self.graph
    }

    pub fn params(&self) -> &CodeParams {
        self.graph.params()
    }

    pub fn alpha(&self) -> &[Edge] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Edge] {
        &self.beta
    }

    pub fn mode(&self) -> TieBreakMode {
        self.mode
    }

    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    /// `v_i = src(e_i)`.
    pub fn vertex_order(&self) -> Vec<Vertex> {
        self.alpha.iter().map(|&e| self.graph.src(e)).collect()
    }

    /// `E'_H = {e_0, …, e_{n-2}}`.
    pub fn hamiltonian_path(&self) -> BTreeSet<Edge> {
        self.alpha[..self.alpha.len() - 1].iter().copied().collect()
    }

    /// `E \ E'_H`, the systematic information set.
    pub fn information_set(&self) -> BTreeSet<Edge> {
        let path = self.hamiltonian_path();
        self.graph.edges().filter(|e| !path.contains(e)).collect()
    }

    /// `γ_i` for `0 ≤ i ≤ n-2`.
    pub fn tie_break_cycle(&self, i: usize) -> Result<TieBreakCycle> {
        self.tie_break_cycle_in(&self.beta, i)
    }

    pub(crate) fn tie_break_cycle_in(&self, beta: &[Edge], i: usize) -> Result<TieBreakCycle> {
        if i + 1 >= self.alpha.len() {
            return Err(Error::Precondition(format!(
                "tie-break index {i} out of range 0..{}",
                self.alpha.len() - 1
            )));
        }
        let e = self.alpha[i];
        let g = &self.graph;
        match self.mode {
            TieBreakMode::ReverseEdge => {
                let back = g
                    .edge_between(g.dest(e), g.src(e))
                    .ok_or_else(|| Error::Invariant("reverse edge missing".into()))?;
                Ok(TieBreakCycle {
                    index: i,
                    beta_span: None,
                    edges: vec![e, back],
                })
            }
            TieBreakMode::FirstOccurrence => {
                let (from, to) = (g.dest(e), g.src(e));
                let s = beta.iter().position(|&b| g.src(b) == from).ok_or_else(|| {
                    Error::Invariant(format!("no β edge leaves {}", g.vertex_gram(from)))
                })?;
                let m = beta.len();
                let offset = (0..m)
                    .find(|&k| g.dest(beta[(s + k) % m]) == to)
                    .ok_or_else(|| {
                        Error::Invariant(format!("no β edge enters {}", g.vertex_gram(to)))
                    })?;
                let mut edges = Vec::with_capacity(offset + 2);
                edges.push(e);
                edges.extend((0..=offset).map(|k| beta[(s + k) % m]));
                Ok(TieBreakCycle {
                    index: i,
                    beta_span: Some((s, (s + offset) % m)),
                    edges,
                })
            }
        }
    }
}

fn cyclic_windows(g: &DeBruijnGraph, s: &str) -> Result<Vec<Edge>> {
    let chars: Vec<char> = s.chars().collect();
    let ell = g.params().ell();
    if chars.is_empty() {
        return Err(Error::InvalidFrame("empty cycle string".into()));
    }
    (0..chars.len())
        .map(|i| {
            let gram: String = (0..ell).map(|k| chars[(i + k) % chars.len()]).collect();
            g.parse_edge(&gram)
        })
        .collect()
}

fn validate_hamiltonian(g: &DeBruijnGraph, alpha: &[Edge]) -> Result<()> {
    let n = g.vertex_count();
    if alpha.len() != n {
        return Err(Error::InvalidFrame(format!(
            "Hamiltonian cycle has {} edges, expected {n}",
            alpha.len()
        )));
    }
    let mut seen = vec![false; n];
    for (i, &e) in alpha.iter().enumerate() {
        g.check_edge(e)?;
        let next = alpha[(i + 1) % n];
        if g.dest(e) != g.src(next) {
            return Err(Error::InvalidFrame(format!(
                "Hamiltonian edges {} and {} do not chain",
                g.edge_gram(e),
                g.edge_gram(next)
            )));
        }
        let v = g.src(e);
        if std::mem::replace(&mut seen[v.0], true) {
            return Err(Error::InvalidFrame(format!(
                "vertex {} visited twice",
                g.vertex_gram(v)
            )));
        }
    }
    Ok(())
}

fn validate_eulerian(g: &DeBruijnGraph, alpha: &[Edge], beta: &[Edge]) -> Result<()> {
    let m = g.edge_count();
    if alpha.len() + beta.len() != m {
        return Err(Error::InvalidFrame(format!(
            "Eulerian cycle has {} edges, expected {m}",
            alpha.len() + beta.len()
        )));
    }
    let all: Vec<Edge> = alpha.iter().chain(beta).copied().collect();
    let mut seen = vec![false; m];
    for (i, &e) in all.iter().enumerate() {
        g.check_edge(e)?;
        if std::mem::replace(&mut seen[e.0], true) {
            return Err(Error::InvalidFrame(format!(
                "edge {} used twice",
                g.edge_gram(e)
            )));
        }
        let next = all[(i + 1) % m];
        if g.dest(e) != g.src(next) {
            return Err(Error::InvalidFrame(format!(
                "Eulerian edges {} and {} do not chain",
                g.edge_gram(e),
                g.edge_gram(next)
            )));
        }
    }
    Ok(())
}

/// Lyndon words over `q` digits of length dividing `order`, concatenated
/// in lexicographic order (Fredricksen–Kessler–Maiorana). Returns the
/// digit sequence, of length `q^order`.
pub fn de_bruijn_sequence(q: usize, order: usize) -> Vec<usize> {
    let mut seq = Vec::new();
    let mut word = vec![0usize; order + 1];
    let mut len = 1usize;
    // Duval's successor: word[1..=len] is the current Lyndon word.
    loop {
        if order.is_multiple_of(len) {
            seq.extend_from_slice(&word[1..=len]);
        }
        for k in len + 1..=order {
            word[k] = word[k - len];
        }
        len = order;
        while len > 0 && word[len] == q - 1 {
            len -= 1;
        }
        if len == 0 {
            break;
        }
        word[len] += 1;
    }
    seq
}

/// The FKM De Bruijn sequence of order `ℓ-1`, read as a Hamiltonian cycle of
/// `G_{q,ℓ-1}`.
pub fn default_hamiltonian(params: &CodeParams) -> Result<Vec<Edge>> {
    params.require_encoder_regime()?;
    let g = DeBruijnGraph::new(params.clone());
    let seq = de_bruijn_sequence(params.q(), params.ell() - 1);
    let n = seq.len();
    let ell = params.ell();
    Ok((0..n)
        .map(|i| Edge((0..ell).fold(0, |acc, k| acc * g.q() + seq[(i + k) % n])))
        .collect())
}

/// Extend a Hamiltonian cycle to an Eulerian cycle: Hierholzer on the edges
/// `α` does not use, starting from `v_0`, always taking the smallest
/// remaining edge id.
pub fn eulerian_extension(params: &CodeParams, alpha: &[Edge]) -> Result<Vec<Edge>> {
    params.require_encoder_regime()?;
    let g = DeBruijnGraph::new(params.clone());
    validate_hamiltonian(&g, alpha)?;
    let q = g.q();
    let mut used = vec![false; g.edge_count()];
    for &e in alpha {
        used[e.0] = true;
    }
    // Next candidate out-edge offset per vertex.
    let mut cursor = vec![0usize; g.vertex_count()];
    let mut next_edge = |v: Vertex, used: &mut [bool]| -> Option<Edge> {
        while cursor[v.0] < q {
            let e = Edge(v.0 * q + cursor[v.0]);
            cursor[v.0] += 1;
            if !used[e.0] {
                used[e.0] = true;
                return Some(e);
            }
        }
        None
    };

    let start = g.src(alpha[0]);
    let mut stack: Vec<Edge> = Vec::new();
    let mut circuit: Vec<Edge> = Vec::new();
    let mut at = start;
    loop {
        if let Some(e) = next_edge(at, &mut used) {
            stack.push(e);
            at = g.dest(e);
        } else if let Some(e) = stack.pop() {
            circuit.push(e);
            at = stack.last().map_or(start, |&top| g.dest(top));
        } else {
            break;
        }
    }
    circuit.reverse();
    let expected = g.edge_count() - alpha.len();
    if circuit.len() != expected {
        return Err(Error::Invariant(format!(
            "residual graph is not connected: traversal covered {} of {expected} edges",
            circuit.len()
        )));
    }
    Ok(circuit)
}
