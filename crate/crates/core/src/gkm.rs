//! GKM graphs: a regular graph with an axial function on oriented edges.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{GkmError, Result};
use crate::linalg::{integer_row, Echelon};
use crate::poly::LinearForm;
use crate::rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrientedEdge {
    pub src: usize,
    pub dst: usize,
    pub label: LinearForm,
    /// Index of the oppositely oriented edge, if one was paired.
    pub reverse: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GkmGraph {
    n_vars: usize,
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<OrientedEdge>,
    out: Vec<Vec<usize>>,
}

impl GkmGraph {
    fn empty(n_vars: usize, vertices: Vec<String>) -> Result<Self> {
        if n_vars == 0 || n_vars > crate::poly::MAX_VARS {
            return Err(GkmError::TooManyVariables(n_vars, crate::poly::MAX_VARS));
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GkmError::MalformedGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let out = vec![Vec::new(); vertices.len()];
        Ok(GkmGraph { n_vars, vertices, index, edges: Vec::new(), out })
    }

    fn push_edge(&mut self, src: usize, dst: usize, label: LinearForm, reverse: Option<usize>) -> Result<usize> {
        if src >= self.vertices.len() || dst >= self.vertices.len() {
            return Err(GkmError::MalformedGraph(format!("edge endpoint out of range: ({src}, {dst})")));
        }
        if label.n_vars() != self.n_vars {
            return Err(GkmError::ArityMismatch { left: self.n_vars, right: label.n_vars() });
        }
        let id = self.edges.len();
        self.edges.push(OrientedEdge { src, dst, label, reverse });
        self.out[src].push(id);
        Ok(id)
    }

    /// Each `(p, q, l)` contributes the oriented edge `p -> q` labelled `l` and its
    /// reverse `q -> p` labelled `-l`, stored at consecutive indices.
    pub fn from_unordered_edges(
        n_vars: usize,
        vertices: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, LinearForm)>,
    ) -> Result<Self> {
        let mut g = Self::empty(n_vars, vertices)?;
        for (p, q, l) in edges {
            let id = g.edges.len();
            let neg = -&l;
            g.push_edge(p, q, l, Some(id + 1))?;
            g.push_edge(q, p, neg, Some(id))?;
        }
        Ok(g)
    }

    /// Builds from an explicit list of oriented edges. Each edge is paired with an
    /// unpaired edge `(q, p, -l)` when one exists; leftover edges stay unpaired and
    /// are reported by [`GkmGraph::validate`].
    pub fn from_oriented_edges(
        n_vars: usize,
        vertices: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, LinearForm)>,
    ) -> Result<Self> {
        let mut g = Self::empty(n_vars, vertices)?;
        for (p, q, l) in edges {
            g.push_edge(p, q, l, None)?;
        }
        let mut open: HashMap<(usize, usize, LinearForm), Vec<usize>> = HashMap::new();
        for id in 0..g.edges.len() {
            let e = &g.edges[id];
            let key = (e.dst, e.src, -&e.label);
            if let Some(partner) = open.get_mut(&key).and_then(Vec::pop) {
                g.edges[id].reverse = Some(partner);
                g.edges[partner].reverse = Some(id);
            } else {
                let e = &g.edges[id];
                open.entry((e.src, e.dst, e.label.clone())).or_default().push(id);
            }
        }
        Ok(g)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[OrientedEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &OrientedEdge {
        &self.edges[e]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// The labels `Λ_p` on edges leaving `v`.
    pub fn star(&self, v: usize) -> Vec<&LinearForm> {
        self.out[v].iter().map(|&e| &self.edges[e].label).collect()
    }

    /// Common out-degree, if the graph is regular.
    pub fn degree(&self) -> Option<usize> {
        let d = self.out.first().map_or(0, Vec::len);
        self.out.iter().all(|o| o.len() == d).then_some(d)
    }

    /// One representative per paired edge (the lower index) plus every unpaired edge.
    pub fn unordered_edges(&self) -> impl Iterator<Item = (usize, &OrientedEdge)> {
        self.edges.iter().enumerate().filter(|(i, e)| e.reverse.is_none_or(|r| *i < r))
    }

    /// Finds the edge `src -> dst` with the given label.
    pub fn find_edge(&self, src: usize, dst: usize, label: &LinearForm) -> Option<usize> {
        self.out[src].iter().copied().find(|&e| self.edges[e].dst == dst && &self.edges[e].label == label)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();

        let regular = match self.degree() {
            Some(_) => AxiomCheck::pass(Axiom::Regular),
            None => {
                let d = self.out.first().map_or(0, Vec::len);
                let v = self.out.iter().position(|o| o.len() != d).unwrap_or(0);
                AxiomCheck::fail(Axiom::Regular, Witness::Vertex { vertex: self.vertices[v].clone(), labels: vec![] })
            }
        };
        checks.push(regular);

        let reversal = match self.edges.iter().position(|e| e.reverse.is_none()) {
            None => AxiomCheck::pass(Axiom::Reversal),
            Some(i) => AxiomCheck::fail(Axiom::Reversal, self.edge_witness(i)),
        };
        checks.push(reversal);

        let mut independence = AxiomCheck::pass(Axiom::PairwiseIndependent);
        'vertices: for v in 0..self.vertices.len() {
            let star = self.star(v);
            for a in 0..star.len() {
                for b in a + 1..star.len() {
                    if star[a].is_proportional(star[b]) {
                        independence = AxiomCheck::fail(
                            Axiom::PairwiseIndependent,
                            Witness::Vertex { vertex: self.vertices[v].clone(), labels: vec![star[a].to_string(), star[b].to_string()] },
                        );
                        break 'vertices;
                    }
                }
                if star[a].is_zero() {
                    independence = AxiomCheck::fail(
                        Axiom::PairwiseIndependent,
                        Witness::Vertex { vertex: self.vertices[v].clone(), labels: vec![star[a].to_string()] },
                    );
                    break 'vertices;
                }
            }
        }
        checks.push(independence);

        let congruence = match (0..self.edges.len()).find(|&e| !self.congruent_stars(e)) {
            None => AxiomCheck::pass(Axiom::Congruence),
            Some(e) => AxiomCheck::fail(Axiom::Congruence, self.edge_witness(e)),
        };
        checks.push(congruence);

        ValidationReport { checks }
    }

    fn edge_witness(&self, e: usize) -> Witness {
        let edge = &self.edges[e];
        Witness::Edge {
            src: self.vertices[edge.src].clone(),
            dst: self.vertices[edge.dst].clone(),
            label: edge.label.to_string(),
        }
    }

    /// Whether there is a bijection `Λ_src -> Λ_dst` with corresponding labels
    /// congruent modulo the label of `e`.
    fn congruent_stars(&self, e: usize) -> bool {
        let edge = &self.edges[e];
        if edge.label.is_zero() {
            return false;
        }
        let left = self.star(edge.src);
        let right = self.star(edge.dst);
        if left.len() != right.len() {
            return false;
        }
        let adj: Vec<Vec<usize>> = left
            .iter()
            .map(|a| (0..right.len()).filter(|&j| (*a - right[j]).is_proportional(&edge.label)).collect())
            .collect();
        has_perfect_matching(&adj, right.len())
    }

    /// Whether at every vertex the labels are sum-zero and span a space of rank `n - 1`.
    pub fn is_full_rank(&self) -> bool {
        let target = self.n_vars - 1;
        (0..self.vertices.len()).all(|v| {
            let star = self.star(v);
            if !star.iter().all(|l| l.is_sum_zero()) {
                return false;
            }
            let mut e = Echelon::new(self.n_vars);
            for l in star {
                e.insert(form_row(l));
            }
            e.rank() == target
        })
    }

    /// Connected component of `base` in the subgraph of edges whose labels lie in
    /// the linear span of `span`.
    pub fn fixed_subgraph(&self, span: &[LinearForm], base: &str) -> Result<GkmGraph> {
        let base = self.vertex_index(base).ok_or_else(|| GkmError::UnknownVertex(base.to_string()))?;
        let mut echelon = Echelon::new(self.n_vars);
        for l in span {
            if l.n_vars() != self.n_vars {
                return Err(GkmError::ArityMismatch { left: self.n_vars, right: l.n_vars() });
            }
            echelon.insert(form_row(l));
        }
        let keep: Vec<bool> = self.edges.iter().map(|e| echelon.contains(form_row(&e.label))).collect();

        let mut seen = vec![false; self.vertices.len()];
        seen[base] = true;
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.out[v] {
                let w = self.edges[e].dst;
                if keep[e] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let mut renumber = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for v in (0..self.vertices.len()).filter(|&v| seen[v]) {
            renumber[v] = vertices.len();
            vertices.push(self.vertices[v].clone());
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, e)| keep[*i] && seen[e.src] && seen[e.dst])
            .map(|(_, e)| (renumber[e.src], renumber[e.dst], e.label.clone()))
            .collect();
        GkmGraph::from_oriented_edges(self.n_vars, vertices, edges)
    }

    /// Vertex sets of the connected components of the underlying graph, each in
    /// vertex order, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<String>> {
        self.component_indices()
            .into_iter()
            .map(|c| c.into_iter().map(|v| self.vertices[v].clone()).collect())
            .collect()
    }

    pub(crate) fn component_indices(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Whether the underlying simple graph is `K_{3,3}`.
    pub fn is_k33(&self) -> bool {
        if self.vertices.len() != 6 {
            return false;
        }
        let mut simple: BTreeSet<(usize, usize)> = BTreeSet::new();
        for e in &self.edges {
            if e.src == e.dst {
                return false;
            }
            simple.insert((e.src.min(e.dst), e.src.max(e.dst)));
        }
        let mut adj = vec![Vec::new(); 6];
        for &(a, b) in &simple {
            adj[a].push(b);
            adj[b].push(a);
        }
        if adj.iter().any(|a| a.len() != 3) {
            return false;
        }
        // 3-regular and bipartite on 6 vertices forces parts of size 3 joined completely.
        let mut color = [None::<bool>; 6];
        color[0] = Some(false);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                match color[w] {
                    None => {
                        color[w] = Some(!color[v].unwrap());
                        queue.push_back(w);
                    }
                    Some(c) if c == color[v].unwrap() => return false,
                    _ => {}
                }
            }
        }
        color.iter().all(Option::is_some) && color.iter().filter(|c| **c == Some(true)).count() == 3
    }

    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            n_vars: self.n_vars,
            vertices: self.vertices.clone(),
            edges: self
                .unordered_edges()
                .map(|(_, e)| EdgeJson {
                    src: self.vertices[e.src].clone(),
                    dst: self.vertices[e.dst].clone(),
                    label: e.label.coeffs().iter().map(rational::to_text).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph serializes")
    }

    pub fn from_json_value(v: &GraphJson) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, name) in v.vertices.iter().enumerate() {
            index.insert(name.as_str(), i);
        }
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| GkmError::UnknownVertex(name.to_string()));
        let mut edges = Vec::with_capacity(v.edges.len());
        for e in &v.edges {
            if e.label.len() != v.n_vars {
                return Err(GkmError::ArityMismatch { left: v.n_vars, right: e.label.len() });
            }
            let coeffs = e.label.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>()?;
            edges.push((lookup(&e.src)?, lookup(&e.dst)?, LinearForm::new(coeffs)));
        }
        Self::from_unordered_edges(v.n_vars, v.vertices.clone(), edges)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: GraphJson = serde_json::from_str(s).map_err(|e| GkmError::Parse(e.to_string()))?;
        Self::from_json_value(&v)
    }

    /// Undirected DOT rendering, one line per unordered edge.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for (_, e) in self.unordered_edges() {
            let _ = writeln!(s, "  \"{}\" -- \"{}\" [label=\"{}\"];", self.vertices[e.src], self.vertices[e.dst], e.label);
        }
        s.push_str("}\n");
        s
    }
}

fn form_row(l: &LinearForm) -> crate::linalg::SparseRow {
    let v: Vec<_> = l.coeffs().iter().cloned().enumerate().collect();
    integer_row(&v)
}

/// Kuhn's augmenting-path matching; `adj[i]` lists right vertices compatible with left `i`.
fn has_perfect_matching(adj: &[Vec<usize>], n_right: usize) -> bool {
    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, adj, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    if adj.len() != n_right {
        return false;
    }
    let mut owner = vec![None; n_right];
    (0..adj.len()).all(|i| augment(i, adj, &mut vec![false; n_right], &mut owner))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Regular,
    /// `α(ē) = -α(e)`
    Reversal,
    PairwiseIndependent,
    /// `Λ_{i(e)} ≡ Λ_{t(e)} mod α(e)`
    Congruence,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Edge { src: String, dst: String, label: String },
    Vertex { vertex: String, labels: Vec<String> },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    fn pass(axiom: Axiom) -> Self {
        AxiomCheck { axiom, passed: true, witness: None }
    }

    fn fail(axiom: Axiom, witness: Witness) -> Self {
        AxiomCheck { axiom, passed: false, witness: Some(witness) }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("every axiom is checked")
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EdgeJson {
    pub src: String,
    pub dst: String,
    pub label: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n_vars: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}
