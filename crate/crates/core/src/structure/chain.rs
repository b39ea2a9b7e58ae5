//! Chains of two-coloured graphs and the crossing event used to count
//! spanned components: each member graph lives on `S x {1,2}`, consecutive
//! members are glued by identity edges, and the question is whether the
//! glued graph connects the first layer to the last.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// `(member of S, half)` with the member in `1..=s` and the half 1 or 2.
pub type Vertex = (u32, u8);

/// Simple graph on `S x {1,2}` whose edges carry one of two labels; the two
/// edge sets are disjoint and undirected (stored with endpoints sorted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredGraph {
    s: u32,
    good: BTreeSet<(Vertex, Vertex)>,
    bad: BTreeSet<(Vertex, Vertex)>,
}

impl ColouredGraph {
    pub fn new(
        s: u32,
        good: impl IntoIterator<Item = (Vertex, Vertex)>,
        bad: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        if s == 0 {
            return Err(Error::domain("vertex base set must be nonempty"));
        }
        let norm = |edges: &mut BTreeSet<(Vertex, Vertex)>,
                    input: &mut dyn Iterator<Item = (Vertex, Vertex)>|
         -> Result<()> {
            for (a, b) in input {
                for v in [a, b] {
                    if v.0 < 1 || v.0 > s || !(v.1 == 1 || v.1 == 2) {
                        return Err(Error::domain(format!(
                            "vertex {v:?} outside S x {{1,2}} with |S| = {s}"
                        )));
                    }
                }
                if a == b {
                    return Err(Error::domain(format!("self-loop at {a:?}")));
                }
                edges.insert((a.min(b), a.max(b)));
            }
            Ok(())
        };
        let mut g = BTreeSet::new();
        let mut b = BTreeSet::new();
        norm(&mut g, &mut good.into_iter())?;
        norm(&mut b, &mut bad.into_iter())?;
        if let Some(e) = g.intersection(&b).next() {
            return Err(Error::domain(format!("edge {e:?} labelled both good and bad")));
        }
        Ok(ColouredGraph { s, good: g, bad: b })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn good_edges(&self) -> impl Iterator<Item = &(Vertex, Vertex)> {
        self.good.iter()
    }

    pub fn bad_edges(&self) -> impl Iterator<Item = &(Vertex, Vertex)> {
        self.bad.iter()
    }

    fn vertex_id(&self, v: Vertex) -> usize {
        ((v.0 - 1) * 2 + (v.1 - 1) as u32) as usize
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// A graph is admissible when it has a bad edge, or when every component of
/// its good edges is a clique.
pub fn is_admissible(g: &ColouredGraph) -> bool {
    if !g.bad.is_empty() {
        return true;
    }
    let n = 2 * g.s as usize;
    let mut dsu = Dsu::new(n);
    for &(a, b) in &g.good {
        dsu.union(g.vertex_id(a), g.vertex_id(b));
    }
    let mut size = vec![0u64; n];
    let mut edges = vec![0u64; n];
    for v in 0..n {
        let r = dsu.find(v);
        size[r] += 1;
    }
    for &(a, _) in &g.good {
        let r = dsu.find(g.vertex_id(a));
        edges[r] += 1;
    }
    (0..n).all(|v| {
        let r = dsu.find(v);
        edges[r] == size[r] * (size[r] - 1) / 2
    })
}

/// A sequence of admissible graphs sharing one base set; admissibility is
/// enforced here so the crossing test can assume it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphChain {
    s: u32,
    graphs: Vec<ColouredGraph>,
}

impl GraphChain {
    pub fn new(graphs: Vec<ColouredGraph>) -> Result<Self> {
        let Some(first) = graphs.first() else {
            return Err(Error::domain("chain must contain at least one graph"));
        };
        let s = first.s;
        for (t, g) in graphs.iter().enumerate() {
            if g.s != s {
                return Err(Error::domain(format!(
                    "graph {} has base size {}, chain expects {}",
                    t + 1,
                    g.s,
                    s
                )));
            }
            if !is_admissible(g) {
                return Err(Error::domain(format!("graph {} is not admissible", t + 1)));
            }
        }
        Ok(GraphChain { s, graphs })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[ColouredGraph] {
        &self.graphs
    }
}

/// Glues the chain into one graph on `S x [2m]` -- member `t` occupies
/// layers `2t-1, 2t`, identity edges join layer `2t` to `2t+1` -- and tests
/// for a path from the first layer to the last.  Edge labels play no role
/// here; every edge conducts.
pub fn chain_crossed(chain: &GraphChain) -> bool {
    let s = chain.s as usize;
    let m = chain.graphs.len();
    let layers = 2 * m;
    let id = |member: u32, layer: usize| (layer - 1) * s + (member as usize - 1);
    let mut dsu = Dsu::new(s * layers);
    for (t, g) in chain.graphs.iter().enumerate() {
        let base = 2 * t; // layers base+1, base+2
        for &(a, b) in g.good.iter().chain(&g.bad) {
            dsu.union(id(a.0, base + a.1 as usize), id(b.0, base + b.1 as usize));
        }
    }
    for t in 1..m {
        for member in 1..=chain.s {
            dsu.union(id(member, 2 * t), id(member, 2 * t + 1));
        }
    }
    for first in 1..=chain.s {
        for last in 1..=chain.s {
            if dsu.find(id(first, 1)) == dsu.find(id(last, layers)) {
                return true;
            }
        }
    }
    false
}
