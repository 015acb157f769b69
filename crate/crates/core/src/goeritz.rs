//! Planar embeddings of superbase graphs, Goeritz matrices, spanning-tree
//! counts and alternating diagram data via the medial construction.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ObtuseSuperbase, SuperbaseGraph};
use crate::linalg;

/// A combinatorial embedding: each parallel edge is a separate id and
/// `rotation[v]` lists the edge ids around `v` in cyclic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarEmbedding {
    pub vertices: usize,
    /// Endpoints `(u, v)` with `u < v`, one entry per edge id.
    pub edges: Vec<(usize, usize)>,
    pub rotation: Vec<Vec<usize>>,
    pub faces: usize,
}

impl PlanarEmbedding {
    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    fn position(&self, v: usize, e: usize) -> usize {
        self.rotation[v].iter().position(|&x| x == e).expect("edge at vertex")
    }

    /// Edge after `e` in the rotation at `v`.
    pub fn succ(&self, v: usize, e: usize) -> usize {
        let r = &self.rotation[v];
        r[(self.position(v, e) + 1) % r.len()]
    }

    /// Edge before `e` in the rotation at `v`.
    pub fn pred(&self, v: usize, e: usize) -> usize {
        let r = &self.rotation[v];
        r[(self.position(v, e) + r.len() - 1) % r.len()]
    }

    /// Faces as sequences of darts `(edge, tail)`.
    pub fn trace_faces(&self) -> Vec<Vec<(usize, usize)>> {
        let mut seen = BTreeSet::new();
        let mut faces = Vec::new();
        for e in 0..self.edges.len() {
            for tail in [self.edges[e].0, self.edges[e].1] {
                if seen.contains(&(e, tail)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut de, mut dt) = (e, tail);
                while seen.insert((de, dt)) {
                    face.push((de, dt));
                    let head = self.other(de, dt);
                    de = self.succ(head, de);
                    dt = head;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// `V - E + F = 2` for a connected graph.
    pub fn euler_ok(&self) -> bool {
        if self.edges.is_empty() {
            return self.vertices <= 1;
        }
        self.vertices as i64 - self.edges.len() as i64 + self.trace_faces().len() as i64 == 2
    }
}

fn simple_adjacency(g: &SuperbaseGraph) -> Vec<Vec<usize>> {
    (0..g.vertices).map(|v| g.neighbors(v).collect()).collect()
}

/// Biconnected blocks of a simple graph, as edge lists.
fn blocks(adj: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    struct St<'a> {
        adj: &'a [Vec<usize>],
        disc: Vec<Option<usize>>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<(usize, usize)>,
        out: Vec<Vec<(usize, usize)>>,
    }
    fn dfs(st: &mut St, u: usize, parent: Option<usize>) {
        st.disc[u] = Some(st.time);
        st.low[u] = st.time;
        st.time += 1;
        for i in 0..st.adj[u].len() {
            let w = st.adj[u][i];
            match st.disc[w] {
                None => {
                    st.stack.push((u, w));
                    dfs(st, w, Some(u));
                    st.low[u] = st.low[u].min(st.low[w]);
                    if st.low[w] >= st.disc[u].unwrap() {
                        let mut block = Vec::new();
                        while let Some(e) = st.stack.pop() {
                            block.push(e);
                            if e == (u, w) {
                                break;
                            }
                        }
                        st.out.push(block);
                    }
                }
                Some(dw) => {
                    if Some(w) != parent && dw < st.disc[u].unwrap() {
                        st.stack.push((u, w));
                        st.low[u] = st.low[u].min(dw);
                    }
                }
            }
        }
    }
    let n = adj.len();
    let mut st = St {
        adj,
        disc: vec![None; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..n {
        if st.disc[v].is_none() {
            dfs(&mut st, v, None);
        }
    }
    st.out
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Demoucron-Malgrange-Pertuiset embedding of a biconnected simple block.
/// Returns the rotation (neighbour order) at each block vertex.
fn embed_block(edges: &[(usize, usize)]) -> Option<BTreeMap<usize, Vec<usize>>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    adj.values_mut().for_each(|l| l.sort_unstable());
    if edges.len() == 1 {
        let (a, b) = edges[0];
        return Some(BTreeMap::from([(a, vec![b]), (b, vec![a])]));
    }
    // initial cycle through the smallest edge
    let &(a, b) = edges.iter().min_by_key(|&&(x, y)| key(x, y)).unwrap();
    let path = bfs_path(&adj, b, |v| v == a, |u, v| !(key(u, v) == key(a, b)), |_| true)?;
    let cycle = path;
    let mut in_h: BTreeSet<usize> = cycle.iter().copied().collect();
    let mut h_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..cycle.len() {
        h_edges.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let all: BTreeSet<(usize, usize)> = edges.iter().map(|&(x, y)| key(x, y)).collect();
    while h_edges.len() < all.len() {
        let frags = fragments(&adj, &all, &in_h, &h_edges);
        let mut choice: Option<(usize, usize)> = None;
        let mut best = usize::MAX;
        for (fi, f) in frags.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&k| f.attachments.iter().all(|v| faces[k].contains(v)))
                .collect();
            if admissible.is_empty() {
                return None;
            }
            if admissible.len() < best {
                best = admissible.len();
                choice = Some((fi, admissible[0]));
            }
        }
        let (fi, face_idx) = choice.expect("a fragment remains");
        let frag = &frags[fi];
        let path = match &frag.chord {
            Some((u, v)) => vec![*u, *v],
            None => {
                let start = *frag.attachments.iter().next().unwrap();
                let comp = &frag.vertices;
                bfs_path(
                    &adj,
                    start,
                    |v| v != start && in_h.contains(&v),
                    |u, v| !h_edges.contains(&key(u, v)) && comp.contains(if u == start { &v } else { &u }),
                    |v| comp.contains(&v) || in_h.contains(&v),
                )?
            }
        };
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
        for w in path.windows(2) {
            h_edges.insert(key(w[0], w[1]));
        }
        in_h.extend(path.iter().copied());
    }
    let mut succ: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &faces {
        let k = f.len();
        for i in 0..k {
            let (u, v, w) = (f[i], f[(i + 1) % k], f[(i + 2) % k]);
            succ.insert((v, u), w);
        }
    }
    let mut rot = BTreeMap::new();
    for (&v, nbrs) in &adj {
        let first = nbrs[0];
        let mut order = vec![first];
        let mut cur = succ[&(v, first)];
        while cur != first {
            order.push(cur);
            cur = succ[&(v, cur)];
        }
        if order.len() != nbrs.len() {
            return None;
        }
        rot.insert(v, order);
    }
    Some(rot)
}

struct Fragment {
    attachments: BTreeSet<usize>,
    vertices: BTreeSet<usize>,
    chord: Option<(usize, usize)>,
}

fn fragments(
    adj: &BTreeMap<usize, Vec<usize>>,
    all: &BTreeSet<(usize, usize)>,
    in_h: &BTreeSet<usize>,
    h_edges: &BTreeSet<(usize, usize)>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &(u, v) in all {
        if !h_edges.contains(&(u, v)) && in_h.contains(&u) && in_h.contains(&v) {
            out.push(Fragment {
                attachments: BTreeSet::from([u, v]),
                vertices: BTreeSet::new(),
                chord: Some((u, v)),
            });
        }
    }
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &s in adj.keys() {
        if in_h.contains(&s) || seen.contains(&s) {
            continue;
        }
        let mut vertices = BTreeSet::from([s]);
        let mut attachments = BTreeSet::new();
        let mut queue = VecDeque::from([s]);
        seen.insert(s);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[&x] {
                if in_h.contains(&y) {
                    attachments.insert(y);
                } else if seen.insert(y) {
                    vertices.insert(y);
                    queue.push_back(y);
                }
            }
        }
        out.push(Fragment { attachments, vertices, chord: None });
    }
    out
}

/// Shortest path from `start` to a vertex satisfying `goal`, using edges
/// allowed by `edge_ok` and entering only vertices allowed by `vertex_ok`.
fn bfs_path(
    adj: &BTreeMap<usize, Vec<usize>>,
    start: usize,
    goal: impl Fn(usize) -> bool,
    edge_ok: impl Fn(usize, usize) -> bool,
    vertex_ok: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = BTreeSet::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[&x] {
            if !edge_ok(x, y) || !vertex_ok(y) || seen.contains(&y) {
                continue;
            }
            prev.insert(y, x);
            if goal(y) {
                let mut path = vec![y];
                let mut cur = y;
                while let Some(&p) = prev.get(&cur) {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            seen.insert(y);
            queue.push_back(y);
        }
    }
    None
}

/// Split an oriented face by a path between two of its vertices.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = face.len();
    let a = path[0];
    let b = *path.last().unwrap();
    let i = face.iter().position(|&x| x == a).unwrap();
    let j = face.iter().position(|&x| x == b).unwrap();
    let interior = &path[1..path.len() - 1];
    let walk = |from: usize, to: usize| -> Vec<usize> {
        let mut out = vec![face[from]];
        let mut t = from;
        while t != to {
            t = (t + 1) % k;
            out.push(face[t]);
        }
        out
    };
    let mut f1 = walk(i, j);
    f1.extend(interior.iter().rev());
    let mut f2 = walk(j, i);
    f2.extend(interior.iter());
    (f1, f2)
}

/// A planar embedding of a connected multigraph, or `None` when it is not
/// planar. Parallel edges are placed consecutively.
pub fn planarity(g: &SuperbaseGraph) -> Option<PlanarEmbedding> {
    if !g.is_connected() {
        return None;
    }
    let adj = simple_adjacency(g);
    let mut rot_simple: Vec<Vec<usize>> = vec![Vec::new(); g.vertices];
    for block in blocks(&adj) {
        let rot = embed_block(&block)?;
        for (v, order) in rot {
            rot_simple[v].extend(order);
        }
    }
    let mut edges = Vec::new();
    let mut ids: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (u, v, m) in g.edges() {
        let list = ids.entry((u, v)).or_default();
        for _ in 0..m {
            list.push(edges.len());
            edges.push((u, v));
        }
    }
    let rotation: Vec<Vec<usize>> = (0..g.vertices)
        .map(|v| {
            let mut out = Vec::new();
            for &w in &rot_simple[v] {
                let list = &ids[&key(v, w)];
                if v < w {
                    out.extend(list.iter().copied());
                } else {
                    out.extend(list.iter().rev().copied());
                }
            }
            out
        })
        .collect();
    let mut emb = PlanarEmbedding {
        vertices: g.vertices,
        edges,
        rotation,
        faces: 0,
    };
    emb.faces = if emb.edges.is_empty() { 1 } else { emb.trace_faces().len() };
    assert!(emb.euler_ok(), "embedding failed the Euler check");
    Some(emb)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoeritzMatrix {
    pub dropped: usize,
    pub matrix: Vec<Vec<i64>>,
}

impl GoeritzMatrix {
    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.matrix)
    }
}

/// Vertex of maximal degree, lowest index on ties.
pub fn default_drop(g: &SuperbaseGraph) -> usize {
    (0..g.vertices)
        .max_by(|&a, &b| g.degree(a).cmp(&g.degree(b)).then(b.cmp(&a)))
        .unwrap_or(0)
}

/// Gram matrix of all superbase vectors except `drop`.
pub fn goeritz_matrix(b: &ObtuseSuperbase, drop: usize) -> Result<GoeritzMatrix> {
    let n = b.vectors.len();
    if drop >= n {
        return Err(Error::IndexOutOfRange { index: drop, len: n });
    }
    let kept: Vec<Vec<i64>> = (0..n).filter(|&i| i != drop).map(|i| b.vectors[i].clone()).collect();
    Ok(GoeritzMatrix { dropped: drop, matrix: linalg::gram(&kept) })
}

/// Matrix-Tree count: determinant of the reduced Laplacian.
pub fn spanning_tree_count(g: &SuperbaseGraph) -> BigInt {
    let n = g.vertices;
    if n <= 1 {
        return BigInt::from(1);
    }
    let lap: Vec<Vec<i64>> = (1..n)
        .map(|i| {
            (1..n)
                .map(|j| if i == j { g.degree(i) as i64 } else { -(g.mult[i][j] as i64) })
                .collect()
        })
        .collect();
    linalg::determinant(&lap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhiteGraph {
    pub vertices: usize,
    /// `[i, j, multiplicity]` with `i < j`.
    pub edges: Vec<[u64; 3]>,
    /// Endpoints of each individual edge id.
    pub edge_ids: Vec<(usize, usize)>,
    pub rotation: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingDiagramData {
    pub white_graph: WhiteGraph,
    /// `[a, b, c, d]` per crossing: incoming under-arc first, then
    /// counterclockwise. Arc labels are 1-based.
    pub pd_crossings: Vec<[usize; 4]>,
    pub components: usize,
    #[serde(with = "decimal")]
    pub determinant: BigInt,
}

/// Big integers as decimal strings in JSON.
mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Endpoint slots of a crossing, counterclockwise.
const UL: usize = 0;
const LL: usize = 1;
const LR: usize = 2;
const UR: usize = 3;

/// Medial construction: one crossing per edge, strands joined through the
/// corners of the embedding.
pub fn emit_branching_set(e: &PlanarEmbedding, b: &ObtuseSuperbase) -> Result<AlternatingDiagramData> {
    if !e.euler_ok() || e.vertices != b.vectors.len() {
        return Err(Error::NotPlanar);
    }
    let c = e.edges.len();
    // corner (v, edge) = corner between edge and succ_v(edge); connects the
    // succ-side slot of `edge` to the pred-side slot of succ_v(edge).
    let slot_succ = |v: usize, x: usize| if e.edges[x].0 == v { UL } else { LR };
    let slot_pred = |v: usize, x: usize| if e.edges[x].0 == v { LL } else { UR };
    // link[(crossing, slot)] = (crossing, slot) at the other end of the segment
    let mut link: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut corners = Vec::new();
    for v in 0..e.vertices {
        for &x in &e.rotation[v] {
            let y = e.succ(v, x);
            let p = (x, slot_succ(v, x));
            let q = (y, slot_pred(v, y));
            link.insert(p, q);
            link.insert(q, p);
            corners.push((p, q));
        }
    }
    let opposite = |slot: usize| (slot + 2) % 4;
    let mut label: HashMap<(usize, usize), usize> = HashMap::new();
    let mut entering_under: Vec<Option<usize>> = vec![None; c];
    let mut next_label = 1;
    let mut components = 0;
    for &(p0, _) in &corners {
        if label.contains_key(&p0) {
            continue;
        }
        components += 1;
        // walk: leave crossing at slot p, traverse the segment, enter the next crossing
        let mut p = p0;
        loop {
            let q = link[&p];
            label.insert(p, next_label);
            label.insert(q, next_label);
            next_label += 1;
            let (x, s) = q;
            if s == LL || s == UR {
                entering_under[x] = Some(s);
            }
            p = (x, opposite(s));
            if p == p0 {
                break;
            }
        }
    }
    let pd: Vec<[usize; 4]> = (0..c)
        .map(|x| {
            let l = |s: usize| label[&(x, s)];
            match entering_under[x].expect("under strand traversed") {
                LL => [l(LL), l(LR), l(UR), l(UL)],
                _ => [l(UR), l(UL), l(LL), l(LR)],
            }
        })
        .collect();
    let determinant = spanning_tree_count(&b.graph);
    Ok(AlternatingDiagramData {
        white_graph: WhiteGraph {
            vertices: e.vertices,
            edges: b.graph.edges().into_iter().map(|(i, j, m)| [i as u64, j as u64, m]).collect(),
            edge_ids: e.edges.clone(),
            rotation: e.rotation.clone(),
        },
        pd_crossings: pd,
        components,
        determinant,
    })
}

/// Determinant from the Fox colouring matrix of a PD code (absolute value of
/// a first minor). `None` when the arc count differs from the crossing count.
pub fn fox_determinant(pd: &[[usize; 4]]) -> Option<BigInt> {
    let labels: usize = pd.iter().flat_map(|x| x.iter()).copied().max().unwrap_or(0);
    let mut parent: Vec<usize> = (0..=labels).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for x in pd {
        let (a, b) = (find(&mut parent, x[1]), find(&mut parent, x[3]));
        parent[a] = b;
    }
    let mut arc_index: BTreeMap<usize, usize> = BTreeMap::new();
    for l in 1..=labels {
        let r = find(&mut parent, l);
        let next = arc_index.len();
        arc_index.entry(r).or_insert(next);
    }
    if arc_index.len() != pd.len() || pd.is_empty() {
        return None;
    }
    let n = pd.len();
    let mut m = vec![vec![0i64; n]; n];
    for (row, x) in pd.iter().enumerate() {
        let over = arc_index[&find(&mut parent, x[1])];
        m[row][over] += 2;
        m[row][arc_index[&find(&mut parent, x[0])]] -= 1;
        m[row][arc_index[&find(&mut parent, x[2])]] -= 1;
    }
    let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    let d = linalg::determinant(&minor);
    Some(if d < BigInt::from(0) { -d } else { d })
}
