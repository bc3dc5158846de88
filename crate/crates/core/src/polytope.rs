//! Combinatorial simple polytopes given by vertex–facet incidence.
//!
//! A vertex is the sorted set of the `n` facets meeting there. Only the
//! local conditions that every simple polytope satisfies are checked;
//! realizability is not.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn mask_of(facets: &[usize]) -> u64 {
    facets.iter().fold(0u64, |m, &f| m | (1u64 << f))
}

pub(crate) fn facets_of(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Sign of the permutation that sorts `tuple` (entries pairwise distinct).
pub fn permutation_sign(tuple: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if tuple[i] > tuple[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Neighbor {
    pub vertex: usize,
    /// Facet entering when moving to `vertex`.
    pub entering: usize,
}

#[derive(Debug, Clone)]
pub struct SimplePolytope {
    dim: usize,
    facets: usize,
    vertices: Vec<Vec<usize>>,
    masks: Vec<u64>,
    /// `neighbors[v][k]` is reached by dropping `vertices[v][k]`.
    neighbors: Vec<Vec<Neighbor>>,
    vertex_index: HashMap<u64, usize>,
}

impl PartialEq for SimplePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.facets == other.facets && self.vertices == other.vertices
    }
}

impl Eq for SimplePolytope {}

/// Checks every local simple-polytope condition on a raw vertex list.
pub fn validate_polytope(raw: &[Vec<usize>], dim: usize, facets: usize) -> Result<SimplePolytope> {
    if dim == 0 {
        return Err(Error::NotSimple("dimension must be positive".into()));
    }
    if facets > 64 {
        return Err(Error::TooManyFacets(facets));
    }
    if raw.is_empty() {
        return Err(Error::NotSimple("no vertices".into()));
    }
    let mut vertices = Vec::with_capacity(raw.len());
    let mut vertex_index = HashMap::new();
    for (idx, v) in raw.iter().enumerate() {
        let mut v = v.clone();
        v.sort_unstable();
        v.dedup();
        if v.len() != dim || v.len() != raw[idx].len() {
            return Err(Error::NotSimple(format!(
                "vertex {:?} does not lie on exactly {dim} distinct facets",
                raw[idx]
            )));
        }
        if let Some(&f) = v.iter().find(|&&f| f >= facets) {
            return Err(Error::NotSimple(format!("facet index {f} out of range 0..{facets}")));
        }
        if vertex_index.insert(mask_of(&v), idx).is_some() {
            return Err(Error::NotSimple(format!("duplicate vertex {v:?}")));
        }
        vertices.push(v);
    }
    let masks: Vec<u64> = vertices.iter().map(|v| mask_of(v)).collect();
    let covered = masks.iter().fold(0u64, |a, &m| a | m);
    if let Some(f) = (0..facets).find(|&f| covered & (1 << f) == 0) {
        return Err(Error::NotSimple(format!("facet {f} contains no vertex")));
    }

    let mut ridges: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, &m) in masks.iter().enumerate() {
        for &f in &vertices[i] {
            ridges.entry(m & !(1 << f)).or_default().push(i);
        }
    }
    let mut neighbors = Vec::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        let mut row = Vec::with_capacity(dim);
        for &f in v {
            let ridge = masks[i] & !(1 << f);
            let holders = &ridges[&ridge];
            if holders.len() > 2 {
                return Err(Error::NotSimple(format!(
                    "ridge {:?} lies in {} vertices",
                    facets_of(ridge),
                    holders.len()
                )));
            }
            let Some(&w) = holders.iter().find(|&&w| w != i) else {
                return Err(Error::NotSimple(format!(
                    "vertex {v:?} has no edge partner across facet {f}"
                )));
            };
            let entering = (masks[w] & !ridge).trailing_zeros() as usize;
            row.push(Neighbor { vertex: w, entering });
        }
        neighbors.push(row);
    }

    let mut seen = vec![false; vertices.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for nb in &neighbors[u] {
            if !seen[nb.vertex] {
                seen[nb.vertex] = true;
                queue.push_back(nb.vertex);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Disconnected);
    }

    Ok(SimplePolytope { dim, facets, vertices, masks, neighbors, vertex_index })
}

/// One edge of the polytope, between `ends.0` and `ends.1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub ends: (usize, usize),
    /// Facet dropped when leaving each endpoint along the edge.
    pub dropped: (usize, usize),
    /// The `n - 1` facets containing the edge.
    pub support: Vec<usize>,
}

impl SimplePolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count(&self) -> usize {
        self.facets
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &[usize] {
        &self.vertices[v]
    }

    pub(crate) fn mask(&self, v: usize) -> u64 {
        self.masks[v]
    }

    pub(crate) fn neighbors(&self, v: usize) -> &[Neighbor] {
        &self.neighbors[v]
    }

    pub fn find_vertex(&self, facets: &[usize]) -> Option<usize> {
        if facets.iter().any(|&f| f >= self.facets) {
            return None;
        }
        self.vertex_index.get(&mask_of(facets)).copied()
    }

    /// Index of the lexicographically smallest vertex.
    pub fn base_vertex(&self) -> usize {
        (0..self.vertices.len()).min_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b])).unwrap()
    }

    /// Number of vertices on facet `f`.
    pub fn facet_degree(&self, f: usize) -> usize {
        self.masks.iter().filter(|&&m| m & (1 << f) != 0).count()
    }

    /// True iff the facets in `s` have a common vertex.
    pub fn nonempty_face(&self, s: &[usize]) -> bool {
        if s.iter().any(|&f| f >= self.facets) {
            return false;
        }
        let sm = mask_of(s);
        self.masks.iter().any(|&m| m & sm == sm)
    }

    fn face_masks_by_size(&self) -> Vec<HashSet<u64>> {
        let mut by_size = vec![HashSet::new(); self.dim + 1];
        for &m in &self.masks {
            let facets = facets_of(m);
            for sub in 0u64..(1 << self.dim) {
                let mut s = 0u64;
                for (k, &f) in facets.iter().enumerate() {
                    if sub & (1 << k) != 0 {
                        s |= 1 << f;
                    }
                }
                by_size[s.count_ones() as usize].insert(s);
            }
        }
        by_size
    }

    /// Inclusion-minimal facet sets with empty intersection, sorted.
    pub fn minimal_nonfaces(&self) -> Vec<Vec<usize>> {
        let faces = self.face_masks_by_size();
        let is_face = |s: u64| faces.get(s.count_ones() as usize).is_some_and(|set| set.contains(&s));
        let mut out = Vec::new();
        for k in 1..=self.dim + 1 {
            for &f in &faces[k - 1] {
                let start = if f == 0 { 0 } else { 64 - f.leading_zeros() as usize };
                for i in start..self.facets {
                    let s = f | (1 << i);
                    if is_face(s) {
                        continue;
                    }
                    let minimal = facets_of(s).iter().all(|&j| is_face(s & !(1 << j)));
                    if minimal {
                        out.push(facets_of(s));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// `(f, h)` with `f[k]` the number of codimension-`k` faces.
    pub fn f_h_vectors(&self) -> (Vec<u64>, Vec<i64>) {
        let faces = self.face_masks_by_size();
        let f: Vec<u64> = faces.iter().map(|s| s.len() as u64).collect();
        let n = self.dim;
        let h = (0..=n)
            .map(|i| {
                (0..=i)
                    .map(|k| {
                        let sign = if (i - k) % 2 == 0 { 1 } else { -1 };
                        sign * binomial(n - k, i - k) as i64 * f[k] as i64
                    })
                    .sum()
            })
            .collect();
        (f, h)
    }

    pub fn edge_graph(&self) -> Vec<Edge> {
        let mut edges = Vec::new();
        for (v, row) in self.neighbors.iter().enumerate() {
            for (k, nb) in row.iter().enumerate() {
                if v < nb.vertex {
                    let support = self.vertices[v].iter().copied().filter(|&f| f != self.vertices[v][k]).collect();
                    edges.push(Edge {
                        ends: (v, nb.vertex),
                        dropped: (self.vertices[v][k], nb.entering),
                        support,
                    });
                }
            }
        }
        edges
    }

    /// Applies a facet relabeling; vertex order is preserved.
    pub fn relabeled(&self, pi: &FacetBijection) -> SimplePolytope {
        let raw: Vec<Vec<usize>> = self.vertices.iter().map(|v| v.iter().map(|&f| pi.apply(f)).collect()).collect();
        validate_polytope(&raw, self.dim, self.facets).expect("relabeling preserves validity")
    }

    /// Vertex list as sorted facet tuples, sorted lexicographically.
    pub fn sorted_vertex_list(&self) -> Vec<Vec<usize>> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }
}

/// `k`-element subsets of `0..m` as ascending tuples, in lexicographic order.
pub(crate) fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < m - k + i) else { break };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// A permutation of facet labels: facet `j` of the source goes to `map[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FacetBijection(pub Vec<usize>);

impl FacetBijection {
    pub fn identity(m: usize) -> Self {
        FacetBijection((0..m).collect())
    }

    pub fn apply(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (j, &k) in self.0.iter().enumerate() {
            inv[k] = j;
        }
        FacetBijection(inv)
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &FacetBijection) -> Self {
        FacetBijection(self.0.iter().map(|&k| other.0[k]).collect())
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&k| k < seen.len() && !std::mem::replace(&mut seen[k], true))
    }

    /// True iff this maps the vertex set of `p` onto that of `q`.
    pub fn is_isomorphism(&self, p: &SimplePolytope, q: &SimplePolytope) -> bool {
        p.facets == q.facets
            && p.dim == q.dim
            && p.vertex_count() == q.vertex_count()
            && self.len() == p.facets
            && self.is_permutation()
            && p.vertices.iter().all(|v| {
                let image: Vec<usize> = v.iter().map(|&f| self.apply(f)).collect();
                q.find_vertex(&image).is_some()
            })
    }
}

/// Lazily enumerates every combinatorial isomorphism `p -> q` by
/// backtracking over facets, pruned by facet degree and facet adjacency.
pub fn isomorphisms<'a>(p: &'a SimplePolytope, q: &'a SimplePolytope) -> Isomorphisms<'a> {
    Isomorphisms::new(p, q)
}

pub struct Isomorphisms<'a> {
    p: &'a SimplePolytope,
    q: &'a SimplePolytope,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    /// Vertices of `p` whose facets are all assigned once level `k` is set.
    completes: Vec<Vec<usize>>,
    adjacent_p: Vec<u64>,
    adjacent_q: Vec<u64>,
    cursor: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    level: usize,
    finished: bool,
}

fn facet_adjacency(p: &SimplePolytope) -> Vec<u64> {
    let mut adj = vec![0u64; p.facets];
    for &m in &p.masks {
        for f in facets_of(m) {
            adj[f] |= m & !(1 << f);
        }
    }
    adj
}

impl<'a> Isomorphisms<'a> {
    fn new(p: &'a SimplePolytope, q: &'a SimplePolytope) -> Self {
        let m = p.facets;
        let adjacent_p = facet_adjacency(p);
        let adjacent_q = facet_adjacency(q);
        let degree_p: Vec<usize> = (0..m).map(|f| p.facet_degree(f)).collect();
        let degree_q: Vec<usize> = (0..q.facets).map(|f| q.facet_degree(f)).collect();
        let mut finished = p.facets != q.facets || p.dim != q.dim || p.vertex_count() != q.vertex_count();
        if !finished {
            let (mut a, mut b) = (degree_p.clone(), degree_q.clone());
            a.sort_unstable();
            b.sort_unstable();
            finished = a != b;
        }

        // BFS over facet adjacency keeps every new facet adjacent to an
        // already-placed one, which is where the pruning bites.
        let mut order = Vec::with_capacity(m);
        let mut placed = 0u64;
        while order.len() < m {
            let start = (0..m).find(|&f| placed & (1 << f) == 0).unwrap();
            let mut queue = VecDeque::from([start]);
            placed |= 1 << start;
            while let Some(f) = queue.pop_front() {
                order.push(f);
                for g in facets_of(adjacent_p[f]) {
                    if placed & (1 << g) == 0 {
                        placed |= 1 << g;
                        queue.push_back(g);
                    }
                }
            }
        }

        let candidates = order
            .iter()
            .map(|&f| (0..q.facets).filter(|&g| degree_q[g] == degree_p[f]).collect())
            .collect();
        let mut completes = vec![Vec::new(); m];
        let mut assigned = 0u64;
        for (lvl, &f) in order.iter().enumerate() {
            assigned |= 1 << f;
            for (v, &vm) in p.masks.iter().enumerate() {
                if vm & (1 << f) != 0 && vm & !assigned == 0 {
                    completes[lvl].push(v);
                }
            }
        }
        Isomorphisms {
            p,
            q,
            order,
            candidates,
            completes,
            adjacent_p,
            adjacent_q,
            cursor: vec![0; m],
            map: vec![None; m],
            used: vec![false; q.facets],
            level: 0,
            finished: finished || m == 0,
        }
    }

    fn consistent(&self, lvl: usize, f: usize, g: usize) -> bool {
        for &h in &self.order[..lvl] {
            let img = self.map[h].expect("earlier levels are assigned");
            let a = self.adjacent_p[f] & (1 << h) != 0;
            let b = self.adjacent_q[g] & (1 << img) != 0;
            if a != b {
                return false;
            }
        }
        true
    }

    fn completed_vertices_map(&self, lvl: usize) -> bool {
        self.completes[lvl].iter().all(|&v| {
            let image: u64 = facets_of(self.p.masks[v])
                .into_iter()
                .fold(0, |acc, f| acc | (1 << self.map[f].expect("complete vertex")));
            self.q.vertex_index.contains_key(&image)
        })
    }
}

impl Iterator for Isomorphisms<'_> {
    type Item = FacetBijection;

    fn next(&mut self) -> Option<FacetBijection> {
        let m = self.order.len();
        loop {
            if self.finished {
                return None;
            }
            let lvl = self.level;
            let f = self.order[lvl];
            if let Some(g) = self.map[f].take() {
                self.used[g] = false;
            }
            let mut placed = false;
            while self.cursor[lvl] < self.candidates[lvl].len() {
                let g = self.candidates[lvl][self.cursor[lvl]];
                self.cursor[lvl] += 1;
                if self.used[g] || !self.consistent(lvl, f, g) {
                    continue;
                }
                self.map[f] = Some(g);
                self.used[g] = true;
                if self.completed_vertices_map(lvl) {
                    placed = true;
                    break;
                }
                self.map[f] = None;
                self.used[g] = false;
            }
            if !placed {
                self.cursor[lvl] = 0;
                if lvl == 0 {
                    self.finished = true;
                    return None;
                }
                self.level -= 1;
                continue;
            }
            if lvl + 1 == m {
                return Some(FacetBijection(self.map.iter().map(|g| g.unwrap()).collect()));
            }
            self.level += 1;
        }
    }
}

/// Orientation of the dual simplicial sphere: a sign per vertex, relative to
/// the sorted facet order of that vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationAssignment {
    pub base: usize,
    signs: Vec<i64>,
}

impl OrientationAssignment {
    /// Sign of vertex `v` with its facets in sorted order.
    pub fn sign(&self, v: usize) -> i64 {
        self.signs[v]
    }

    /// Sign of vertex `v` with its facets listed in `ordering`.
    pub fn sign_of_ordering(&self, v: usize, ordering: &[usize]) -> i64 {
        self.signs[v] * permutation_sign(ordering)
    }

    pub fn signs(&self) -> &[i64] {
        &self.signs
    }
}

/// Sign of the sorted tuple of the vertex reached from `u` (sign `s`) by
/// replacing `dropped` with `entering` in place.
fn propagate_sign(u: &[usize], s: i64, dropped: usize, entering: usize) -> i64 {
    let (lo, hi) = if dropped < entering { (dropped, entering) } else { (entering, dropped) };
    let between = u.iter().filter(|&&x| x > lo && x < hi).count();
    let parity = if between % 2 == 0 { 1 } else { -1 };
    -s * parity
}

pub fn orientation_assignment(p: &SimplePolytope) -> Result<OrientationAssignment> {
    let priority: Vec<usize> = (0..p.vertex_count()).collect();
    orientation_assignment_with_order(p, &priority)
}

/// Same as [`orientation_assignment`], but visits vertices by ascending
/// `priority[v]`. The result does not depend on the order.
pub fn orientation_assignment_with_order(p: &SimplePolytope, priority: &[usize]) -> Result<OrientationAssignment> {
    let base = p.base_vertex();
    let mut signs = vec![0i64; p.vertex_count()];
    signs[base] = 1;
    let mut heap = BinaryHeap::from([Reverse((priority[base], base))]);
    let mut done = vec![false; p.vertex_count()];
    while let Some(Reverse((_, u))) = heap.pop() {
        if std::mem::replace(&mut done[u], true) {
            continue;
        }
        for (k, nb) in p.neighbors[u].iter().enumerate() {
            let s = propagate_sign(&p.vertices[u], signs[u], p.vertices[u][k], nb.entering);
            match signs[nb.vertex] {
                0 => {
                    signs[nb.vertex] = s;
                    heap.push(Reverse((priority[nb.vertex], nb.vertex)));
                }
                t if t != s => {
                    return Err(Error::NonOrientable { vertex: p.vertices[nb.vertex].clone() });
                }
                _ => {}
            }
        }
    }
    Ok(OrientationAssignment { base, signs })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> SimplePolytope {
        validate_polytope(&[vec![0, 1], vec![0, 2], vec![1, 2]], 2, 3).unwrap()
    }

    pub(crate) fn square() -> SimplePolytope {
        validate_polytope(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], 2, 4).unwrap()
    }

    /// Δ¹×Δ²: ends 0,1; sides 2,3,4.
    fn prism3() -> SimplePolytope {
        let mut raw = Vec::new();
        for e in 0..2 {
            for skip in 2..5 {
                let mut v = vec![e];
                v.extend((2..5).filter(|&s| s != skip));
                raw.push(v);
            }
        }
        validate_polytope(&raw, 3, 5).unwrap()
    }

    #[test]
    fn validation() {
        triangle();
        square();
        let err = validate_polytope(&[vec![0, 1], vec![0, 2]], 2, 3).unwrap_err();
        assert!(matches!(err, Error::NotSimple(_)), "{err}");
        // two disjoint segments
        let err = validate_polytope(&[vec![0], vec![1], vec![2], vec![3]], 1, 4).unwrap_err();
        assert!(matches!(err, Error::NotSimple(_)), "{err}");
        // ridge {0} in three vertices
        let err = validate_polytope(&[vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2]], 2, 4).unwrap_err();
        assert!(matches!(err, Error::NotSimple(_)), "{err}");
    }

    #[test]
    fn disconnected_is_rejected() {
        // two disjoint triangles
        let raw = vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![3, 4], vec![3, 5], vec![4, 5]];
        assert_eq!(validate_polytope(&raw, 2, 6).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn faces() {
        let t = triangle();
        assert!(t.nonempty_face(&[0, 1]));
        assert!(!t.nonempty_face(&[0, 1, 2]));
        assert!(!square().nonempty_face(&[0, 2]));
        assert_eq!(t.minimal_nonfaces(), vec![vec![0, 1, 2]]);
        assert_eq!(square().minimal_nonfaces(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(prism3().minimal_nonfaces(), vec![vec![0, 1], vec![2, 3, 4]]);
    }

    #[test]
    fn minimal_nonfaces_match_brute_force() {
        for p in [triangle(), square(), prism3()] {
            let m = p.facet_count();
            let mut brute = Vec::new();
            for s in 1u64..(1 << m) {
                let set = facets_of(s);
                if !p.nonempty_face(&set) && set.iter().all(|&j| p.nonempty_face(&facets_of(s & !(1 << j)))) {
                    brute.push(set);
                }
            }
            brute.sort();
            assert_eq!(p.minimal_nonfaces(), brute);
        }
    }

    #[test]
    fn f_and_h_vectors() {
        assert_eq!(triangle().f_h_vectors(), (vec![1, 3, 3], vec![1, 1, 1]));
        assert_eq!(square().f_h_vectors().1, vec![1, 2, 1]);
        assert_eq!(prism3().f_h_vectors(), (vec![1, 5, 9, 6], vec![1, 2, 2, 1]));
    }

    #[test]
    fn edges() {
        assert_eq!(triangle().edge_graph().len(), 3);
        assert_eq!(square().edge_graph().len(), 4);
        let prism = prism3();
        let edges = prism.edge_graph();
        assert_eq!(edges.len(), 9);
        let mut degree = vec![0; prism.vertex_count()];
        for e in &edges {
            degree[e.ends.0] += 1;
            degree[e.ends.1] += 1;
            assert_eq!(e.support.len(), 2);
        }
        assert!(degree.iter().all(|&d| d == 3));
    }

    fn brute_force_isomorphisms(p: &SimplePolytope, q: &SimplePolytope) -> usize {
        fn perms(m: usize) -> Vec<Vec<usize>> {
            if m == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(m - 1) {
                for i in 0..m {
                    let mut p = p.clone();
                    p.insert(i, m - 1);
                    out.push(p);
                }
            }
            out
        }
        perms(p.facet_count()).into_iter().filter(|pi| FacetBijection(pi.clone()).is_isomorphism(p, q)).count()
    }

    #[test]
    fn isomorphism_counts() {
        assert_eq!(isomorphisms(&square(), &square()).count(), 8);
        assert_eq!(isomorphisms(&triangle(), &square()).count(), 0);
        assert_eq!(isomorphisms(&prism3(), &prism3()).count(), 12);
        assert_eq!(brute_force_isomorphisms(&prism3(), &prism3()), 12);
        for pi in isomorphisms(&prism3(), &prism3()) {
            assert!(pi.is_isomorphism(&prism3(), &prism3()));
        }
    }

    #[test]
    fn isomorphisms_compose() {
        let s = square();
        let q = s.relabeled(&FacetBijection(vec![2, 0, 3, 1]));
        let r = q.relabeled(&FacetBijection(vec![1, 3, 0, 2]));
        let a: Vec<_> = isomorphisms(&s, &q).collect();
        let b: Vec<_> = isomorphisms(&q, &r).collect();
        let c: HashSet<_> = isomorphisms(&s, &r).collect();
        assert!(isomorphisms(&s, &s).any(|pi| pi == FacetBijection::identity(4)));
        for x in &a {
            for y in &b {
                assert!(c.contains(&x.then(y)));
            }
        }
    }

    #[test]
    fn orientation_examples() {
        let t = triangle();
        let o = orientation_assignment(&t).unwrap();
        assert_eq!(o.sign(t.find_vertex(&[0, 1]).unwrap()), 1);
        assert_eq!(o.sign(t.find_vertex(&[0, 2]).unwrap()), -1);
        assert_eq!(o.sign(t.find_vertex(&[1, 2]).unwrap()), 1);

        let s = square();
        let o = orientation_assignment(&s).unwrap();
        let sign = |v: &[usize]| o.sign(s.find_vertex(v).unwrap());
        assert_eq!([sign(&[0, 1]), sign(&[1, 2]), sign(&[2, 3]), sign(&[0, 3])], [1, 1, 1, -1]);

        let seg = validate_polytope(&[vec![0], vec![1]], 1, 2).unwrap();
        let o = orientation_assignment(&seg).unwrap();
        assert_eq!(o.signs(), &[1, -1]);
    }

    #[test]
    fn every_edge_flips_the_tuple_sign() {
        for p in [triangle(), square(), prism3()] {
            let o = orientation_assignment(&p).unwrap();
            for e in p.edge_graph() {
                let (u, w) = e.ends;
                let mut tuple = p.vertex(u).to_vec();
                let k = tuple.iter().position(|&f| f == e.dropped.0).unwrap();
                tuple[k] = e.dropped.1;
                assert_eq!(o.sign_of_ordering(w, &tuple), -o.sign(u));
            }
        }
    }
}
