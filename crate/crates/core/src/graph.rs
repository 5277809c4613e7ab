//! The De Bruijn graph `G_{q,ℓ-1}`: vertices are `(ℓ-1)`-grams, edges are
//! `ℓ`-grams. Nothing is stored; adjacency is base-`q` arithmetic on ids.

use std::fmt;

use crate::error::{Error, Result};
use crate::params::CodeParams;

/// An `ℓ`-gram, as its base-`q` integer id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub usize);

/// An `(ℓ-1)`-gram, as its base-`q` integer id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub usize);

impl Edge {
    pub fn index(self) -> usize {
        self.0
    }
}

impl Vertex {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeBruijnGraph {
    params: CodeParams,
}

impl DeBruijnGraph {
    pub fn new(params: CodeParams) -> Self {
        DeBruijnGraph { params }
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn q(&self) -> usize {
        self.params.q()
    }

    pub fn vertex_count(&self) -> usize {
        self.params.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.params.edge_count()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.vertex_count()).map(Vertex)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> {
        (0..self.edge_count()).map(Edge)
    }

    /// Drop the last symbol.
    pub fn src(&self, e: Edge) -> Vertex {
        Vertex(e.0 / self.q())
    }

    /// Drop the first symbol.
    pub fn dest(&self, e: Edge) -> Vertex {
        Vertex(e.0 % self.vertex_count())
    }

    pub fn is_self_loop(&self, e: Edge) -> bool {
        self.src(e) == self.dest(e)
    }

    /// The `q` edges of the form `a^ℓ`, in symbol order.
    pub fn self_loops(&self) -> Vec<Edge> {
        let repunit = (self.edge_count() - 1) / (self.q() - 1);
        (0..self.q()).map(|a| Edge(a * repunit)).collect()
    }

    pub fn edge_between(&self, from: Vertex, to: Vertex) -> Option<Edge> {
        let e = Edge(from.0 * self.q() + to.0 % self.q());
        (self.dest(e) == to).then_some(e)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v.0 >= self.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: v.0,
                count: self.vertex_count(),
            });
        }
        Ok(())
    }

    pub fn check_edge(&self, e: Edge) -> Result<()> {
        if e.0 >= self.edge_count() {
            return Err(Error::EdgeOutOfRange {
                edge: e.0,
                count: self.edge_count(),
            });
        }
        Ok(())
    }

    /// The `q` edges entering `v`, self-loop included.
    pub fn in_edges(&self, v: Vertex) -> Result<Vec<Edge>> {
        self.check_vertex(v)?;
        let stride = self.vertex_count();
        Ok((0..self.q()).map(|a| Edge(a * stride + v.0)).collect())
    }

    /// The `q` edges leaving `v`, self-loop included.
    pub fn out_edges(&self, v: Vertex) -> Result<Vec<Edge>> {
        self.check_vertex(v)?;
        let base = v.0 * self.q();
        Ok((0..self.q()).map(|a| Edge(base + a)).collect())
    }

    /// Edges crossing into and out of `U`. Edges with both endpoints in `U`
    /// (self-loops included) belong to neither side.
    pub fn cut_edges(&self, subset: &[Vertex]) -> Result<Cut> {
        let member = self.membership(subset)?;
        let mut incoming = Vec::new();
        let mut outgoing = Vec::new();
        for e in self.edges() {
            let s = member[self.src(e).0];
            let d = member[self.dest(e).0];
            match (s, d) {
                (false, true) => incoming.push(e),
                (true, false) => outgoing.push(e),
                _ => {}
            }
        }
        Ok(Cut { incoming, outgoing })
    }

    pub(crate) fn membership(&self, subset: &[Vertex]) -> Result<Vec<bool>> {
        let mut member = vec![false; self.vertex_count()];
        for &v in subset {
            self.check_vertex(v)?;
            member[v.0] = true;
        }
        let size = member.iter().filter(|&&m| m).count();
        if size == 0 || size == self.vertex_count() {
            return Err(Error::ImproperSubset);
        }
        Ok(member)
    }

    pub fn edge_gram(&self, e: Edge) -> String {
        self.params.alphabet().decode(e.0, self.params.ell())
    }

    pub fn vertex_gram(&self, v: Vertex) -> String {
        self.params.alphabet().decode(v.0, self.params.ell() - 1)
    }

    pub fn parse_edge(&self, gram: &str) -> Result<Edge> {
        self.params
            .alphabet()
            .encode(gram, self.params.ell())
            .map(Edge)
    }

    pub fn parse_vertex(&self, gram: &str) -> Result<Vertex> {
        self.params
            .alphabet()
            .encode(gram, self.params.ell() - 1)
            .map(Vertex)
    }
}

/// The two sides of a vertex-set cut. In a De Bruijn graph both sides have
/// the same size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub incoming: Vec<Edge>,
    pub outgoing: Vec<Edge>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(q: usize, ell: usize) -> DeBruijnGraph {
        DeBruijnGraph::new(CodeParams::new(q, ell).unwrap())
    }

    fn grams(g: &DeBruijnGraph, edges: &[Edge]) -> Vec<String> {
        edges.iter().map(|&e| g.edge_gram(e)).collect()
    }

    #[test]
    fn vertex_neighbourhoods() {
        let g = graph(3, 2);
        let a = g.parse_vertex("A").unwrap();
        assert_eq!(grams(&g, &g.in_edges(a).unwrap()), ["AA", "CA", "GA"]);
        assert_eq!(grams(&g, &g.out_edges(a).unwrap()), ["AA", "AC", "AG"]);

        let g = graph(4, 3);
        let ac = g.parse_vertex("AC").unwrap();
        assert_eq!(
            grams(&g, &g.in_edges(ac).unwrap()),
            ["AAC", "CAC", "GAC", "TAC"]
        );
        assert!(g.in_edges(Vertex(16)).is_err());
    }

    #[test]
    fn cuts() {
        let g = graph(3, 2);
        let v = |s: &str| g.parse_vertex(s).unwrap();
        let cut = g.cut_edges(&[v("A")]).unwrap();
        assert_eq!(grams(&g, &cut.incoming), ["CA", "GA"]);
        assert_eq!(grams(&g, &cut.outgoing), ["AC", "AG"]);
        let cut = g.cut_edges(&[v("A"), v("C")]).unwrap();
        assert_eq!(grams(&g, &cut.incoming), ["GA", "GC"]);
        assert_eq!(grams(&g, &cut.outgoing), ["AG", "CG"]);

        let g4 = graph(4, 2);
        let cut = g4.cut_edges(&[Vertex(0)]).unwrap();
        assert_eq!((cut.incoming.len(), cut.outgoing.len()), (3, 3));

        assert_eq!(g.cut_edges(&[]), Err(Error::ImproperSubset));
        assert_eq!(
            g.cut_edges(&[v("A"), v("C"), v("G")]),
            Err(Error::ImproperSubset)
        );
    }

    #[test]
    fn self_loops_are_constant_grams() {
        for (q, ell) in [(2, 2), (3, 2), (4, 3), (5, 4)] {
            let g = graph(q, ell);
            let loops: Vec<Edge> = g.edges().filter(|&e| g.is_self_loop(e)).collect();
            assert_eq!(loops, g.self_loops());
            for e in loops {
                let s = g.edge_gram(e);
                assert!(s.chars().all(|c| s.starts_with(c)));
            }
        }
    }

    #[test]
    fn regular_degrees() {
        let g = graph(4, 3);
        let mut indeg = vec![0; g.vertex_count()];
        let mut outdeg = vec![0; g.vertex_count()];
        for e in g.edges() {
            indeg[g.dest(e).0] += 1;
            outdeg[g.src(e).0] += 1;
        }
        assert!(indeg.iter().chain(&outdeg).all(|&d| d == 4));
    }

    proptest! {
        #[test]
        fn id_gram_round_trip(q in 2usize..=6, ell in 2usize..=4, seed in any::<u64>()) {
            let g = graph(q, ell);
            let e = Edge(seed as usize % g.edge_count());
            let s = g.edge_gram(e);
            prop_assert_eq!(g.parse_edge(&s).unwrap(), e);
            prop_assert_eq!(g.vertex_gram(g.src(e)), s[..ell - 1].to_string());
            prop_assert_eq!(g.vertex_gram(g.dest(e)), s[1..].to_string());
            let v = g.src(e);
            prop_assert_eq!(g.parse_vertex(&g.vertex_gram(v)).unwrap(), v);
            prop_assert_eq!(g.edge_between(g.src(e), g.dest(e)), Some(e));
        }

        #[test]
        fn cut_sides_have_equal_size(q in 2usize..=4, ell in 2usize..=3, mask in any::<u64>()) {
            let g = graph(q, ell);
            let n = g.vertex_count();
            let subset: Vec<Vertex> = (0..n).filter(|i| mask >> (i % 64) & 1 == 1).map(Vertex).collect();
            prop_assume!(!subset.is_empty() && subset.len() < n);
            let cut = g.cut_edges(&subset).unwrap();
            prop_assert_eq!(cut.incoming.len(), cut.outgoing.len());
        }
    }
}
