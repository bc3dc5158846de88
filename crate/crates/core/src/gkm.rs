//! GKM graphs: the edge graph of the polytope labeled by the tangent weights
//! of the invariant 2-spheres, each known only up to sign.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{det, integer_kernel, primitive_generator, IntMatrix, IntVector};
use crate::polytope::FacetBijection;
use crate::qtoric::QuasitoricPair;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkmEdge {
    pub ends: (usize, usize),
    /// Sign-normalized primitive covector.
    pub label: IntVector,
    /// The `n - 1` facets containing the edge.
    pub support: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkmGraph {
    pub dim: usize,
    pub facets: usize,
    pub vertex_count: usize,
    /// Facets at each vertex; present together with the edge supports.
    pub vertex_facets: Option<Vec<Vec<usize>>>,
    pub edges: Vec<GkmEdge>,
}

impl GkmGraph {
    pub fn has_supports(&self) -> bool {
        self.vertex_facets.is_some() && self.edges.iter().all(|e| e.support.is_some())
    }

    /// Drops the facet data, leaving the labeled graph.
    pub fn bare(&self) -> GkmGraph {
        GkmGraph {
            vertex_facets: None,
            edges: self.edges.iter().map(|e| GkmEdge { support: None, ..e.clone() }).collect(),
            ..self.clone()
        }
    }

    /// Renumbers vertices: vertex `v` becomes `perm[v]`.
    pub fn renumbered(&self, perm: &[usize]) -> GkmGraph {
        let mut vertex_facets = self.vertex_facets.clone();
        if let Some(vf) = &self.vertex_facets {
            let mut out = vec![Vec::new(); vf.len()];
            for (v, f) in vf.iter().enumerate() {
                out[perm[v]] = f.clone();
            }
            vertex_facets = Some(out);
        }
        let edges = self
            .edges
            .iter()
            .map(|e| GkmEdge { ends: (perm[e.ends.0], perm[e.ends.1]), ..e.clone() })
            .collect();
        GkmGraph { vertex_facets, edges, ..self.clone() }
    }

    fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.ends.0].push((e.ends.1, i));
            inc[e.ends.1].push((e.ends.0, i));
        }
        inc
    }
}

pub fn build_gkm(q: &QuasitoricPair) -> Result<GkmGraph> {
    let p = q.polytope();
    let frames = q.frames();
    let mut edges = Vec::new();
    for e in p.edge_graph() {
        let (a, b) = e.ends;
        let from_a = frames[a].weight_for(e.dropped.0).expect("dropped facet is at the vertex");
        let from_b = frames[b].weight_for(e.dropped.1).expect("dropped facet is at the vertex");
        let label = from_a.sign_normalized();
        if label != from_b.sign_normalized() {
            return Err(Error::InconsistentWeights { edge: e.ends });
        }
        edges.push(GkmEdge { ends: e.ends, label, support: Some(e.support) });
    }
    Ok(GkmGraph {
        dim: q.dim(),
        facets: q.facet_count(),
        vertex_count: p.vertex_count(),
        vertex_facets: Some(p.vertices().to_vec()),
        edges,
    })
}

/// The characteristic vector of each facet, up to sign, as the primitive
/// generator of the common kernel of the labels of edges inside the facet.
pub fn reconstruct_lambda(g: &GkmGraph) -> Result<IntMatrix> {
    if !g.edges.iter().all(|e| e.support.is_some()) {
        return Err(Error::MissingFacetSupport);
    }
    let columns = (0..g.facets)
        .map(|f| {
            let labels: Vec<IntVector> = g
                .edges
                .iter()
                .filter(|e| e.support.as_ref().is_some_and(|s| s.contains(&f)))
                .map(|e| e.label.clone())
                .collect();
            integer_kernel(&labels, g.dim)
                .and_then(|k| primitive_generator(&k))
                .map_err(|source| Error::Facet { facet: f, source: Box::new(source) })
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_columns(g.dim, &columns)
}

/// The incident labels at every vertex form a basis of `Q^n`.
pub fn labels_span_at_vertices(g: &GkmGraph) -> Result<bool> {
    for inc in g.incidence() {
        let rows: Vec<Vec<i64>> = inc.iter().map(|&(_, i)| g.edges[i].label.0.clone()).collect();
        if rows.len() != g.dim || det(&IntMatrix::from_rows(&rows)?)? == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkmIsomorphism {
    /// Vertex `v` goes to `vertices[v]`.
    pub vertices: Vec<usize>,
    pub facets: FacetBijection,
}

/// A label-preserving graph isomorphism that carries facets to facets.
/// Graphs without facet supports are refused.
pub fn gkm_equiv(g: &GkmGraph, h: &GkmGraph) -> Result<Option<GkmIsomorphism>> {
    if !g.has_supports() || !h.has_supports() {
        return Err(Error::MissingFacetSupport);
    }
    if g.dim != h.dim || g.facets != h.facets || g.vertex_count != h.vertex_count || g.edges.len() != h.edges.len() {
        return Ok(None);
    }
    if g.vertex_count == 0 {
        return Ok(Some(GkmIsomorphism { vertices: Vec::new(), facets: FacetBijection::identity(g.facets) }));
    }
    let mut gl: Vec<&IntVector> = g.edges.iter().map(|e| &e.label).collect();
    let mut hl: Vec<&IntVector> = h.edges.iter().map(|e| &e.label).collect();
    gl.sort();
    hl.sort();
    if gl != hl {
        return Ok(None);
    }

    let order = bfs_order(g);
    let mut s = IsoSearch {
        g,
        h,
        ginc: g.incidence(),
        hinc: h.incidence(),
        gvf: g.vertex_facets.as_ref().expect("checked"),
        hvf: h.vertex_facets.as_ref().expect("checked"),
        order,
        phi: vec![usize::MAX; g.vertex_count],
        used: vec![false; h.vertex_count],
        psi: vec![usize::MAX; g.facets],
        psi_used: vec![false; h.facets],
    };
    Ok(s.run())
}

fn bfs_order(g: &GkmGraph) -> Vec<usize> {
    let inc = g.incidence();
    let mut seen = vec![false; g.vertex_count];
    let mut order = vec![0];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &(u, _) in &inc[v] {
            if !seen[u] {
                seen[u] = true;
                order.push(u);
            }
        }
    }
    order
}

struct IsoSearch<'a> {
    g: &'a GkmGraph,
    h: &'a GkmGraph,
    ginc: Vec<Vec<(usize, usize)>>,
    hinc: Vec<Vec<(usize, usize)>>,
    gvf: &'a [Vec<usize>],
    hvf: &'a [Vec<usize>],
    order: Vec<usize>,
    phi: Vec<usize>,
    used: Vec<bool>,
    psi: Vec<usize>,
    psi_used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn run(&mut self) -> Option<GkmIsomorphism> {
        if self.order.len() != self.g.vertex_count {
            return None;
        }
        let first = self.order[0];
        for c in 0..self.h.vertex_count {
            if let Some(found) = self.try_assign(first, c, 1) {
                return Some(found);
            }
        }
        None
    }

    fn try_assign(&mut self, v: usize, c: usize, depth: usize) -> Option<GkmIsomorphism> {
        if self.used[c] || self.ginc[v].len() != self.hinc[c].len() {
            return None;
        }
        // every already-mapped neighbor must be joined by an equally labeled edge
        for &(u, e) in &self.ginc[v] {
            let pu = self.phi[u];
            if pu == usize::MAX {
                continue;
            }
            let joined = self.hinc[c].iter().any(|&(w, f)| w == pu && self.h.edges[f].label == self.g.edges[e].label);
            if !joined {
                return None;
            }
        }
        let mut gl: Vec<&IntVector> = self.ginc[v].iter().map(|&(_, e)| &self.g.edges[e].label).collect();
        let mut hl: Vec<&IntVector> = self.hinc[c].iter().map(|&(_, e)| &self.h.edges[e].label).collect();
        gl.sort();
        hl.sort();
        if gl != hl {
            return None;
        }
        let added = self.extend_facets(v, c)?;
        self.phi[v] = c;
        self.used[c] = true;
        if depth == self.order.len() {
            if let Some(found) = self.finish() {
                return Some(found);
            }
        } else {
            let next = self.order[depth];
            for c2 in 0..self.h.vertex_count {
                if let Some(found) = self.try_assign(next, c2, depth + 1) {
                    return Some(found);
                }
            }
        }
        self.phi[v] = usize::MAX;
        self.used[c] = false;
        for f in added {
            self.psi_used[self.psi[f]] = false;
            self.psi[f] = usize::MAX;
        }
        None
    }

    /// Matches the facets of `v` with those of `c` through the edges already
    /// mapped at `v`; the facet opposite an edge at `v` is the one missing
    /// from its support. Returns newly fixed facets, or `None` on conflict.
    fn extend_facets(&mut self, v: usize, c: usize) -> Option<Vec<usize>> {
        let mut pairs = Vec::new();
        for &(u, e) in &self.ginc[v] {
            let pu = self.phi[u];
            if pu == usize::MAX {
                continue;
            }
            let (_, f) = *self.hinc[c]
                .iter()
                .find(|&&(w, f)| w == pu && self.h.edges[f].label == self.g.edges[e].label)?;
            let gs = self.g.edges[e].support.as_ref().expect("checked");
            let hs = self.h.edges[f].support.as_ref().expect("checked");
            let go = self.gvf[v].iter().find(|x| !gs.contains(x))?;
            let ho = self.hvf[c].iter().find(|x| !hs.contains(x))?;
            pairs.push((*go, *ho));
        }
        let mut added = Vec::new();
        for (a, b) in pairs {
            if self.psi[a] == b {
                continue;
            }
            if self.psi[a] != usize::MAX || self.psi_used[b] {
                for f in added {
                    self.psi_used[self.psi[f]] = false;
                    self.psi[f] = usize::MAX;
                }
                return None;
            }
            self.psi[a] = b;
            self.psi_used[b] = true;
            added.push(a);
        }
        Some(added)
    }

    /// Completes the facet map from the vertex map and verifies it.
    fn finish(&self) -> Option<GkmIsomorphism> {
        let m = self.g.facets;
        let mut psi = self.psi.clone();
        let mut used = self.psi_used.clone();
        // facets determined by vertex incidence alone, e.g. in dimension one
        for v in 0..self.g.vertex_count {
            let c = self.phi[v];
            let open_g: Vec<usize> = self.gvf[v].iter().copied().filter(|&f| psi[f] == usize::MAX).collect();
            let open_h: Vec<usize> = self.hvf[c].iter().copied().filter(|&f| !used[f]).collect();
            if open_g.len() == 1 && open_h.len() == 1 {
                psi[open_g[0]] = open_h[0];
                used[open_h[0]] = true;
            }
        }
        if psi.contains(&usize::MAX) {
            return None;
        }
        for v in 0..self.g.vertex_count {
            let mut image: Vec<usize> = self.gvf[v].iter().map(|&f| psi[f]).collect();
            image.sort_unstable();
            let mut target = self.hvf[self.phi[v]].clone();
            target.sort_unstable();
            if image != target {
                return None;
            }
        }
        debug_assert_eq!(psi.len(), m);
        Some(GkmIsomorphism { vertices: self.phi.clone(), facets: FacetBijection(psi) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::validate_polytope;
    use crate::qtoric::tests::{cp2, hirzebruch};

    fn v(x: &[i64]) -> IntVector {
        IntVector::new(x.to_vec())
    }

    #[test]
    fn cp2_labels() {
        let g = build_gkm(&cp2()).unwrap();
        assert_eq!(g.edges.len(), 3);
        for e in &g.edges {
            let s = e.support.as_ref().unwrap();
            let expected = match s[0] {
                0 => v(&[0, 1]),
                1 => v(&[1, 0]),
                _ => v(&[1, -1]),
            };
            assert_eq!(e.label, expected);
        }
        assert!(labels_span_at_vertices(&g).unwrap());
    }

    #[test]
    fn cp1_single_edge() {
        let seg = validate_polytope(&[vec![0], vec![1]], 1, 2).unwrap();
        let q = QuasitoricPair::new(seg, IntMatrix::from_rows(&[[1, -1]]).unwrap()).unwrap();
        let g = build_gkm(&q).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].label, v(&[1]));
        assert!(gkm_equiv(&g, &g.renumbered(&[1, 0])).unwrap().is_some());
    }

    #[test]
    fn roundtrip() {
        for q in [cp2(), hirzebruch(2), hirzebruch(-3)] {
            let r = reconstruct_lambda(&build_gkm(&q).unwrap()).unwrap();
            for j in 0..q.facet_count() {
                assert_eq!(r.column(j), q.column(j).sign_normalized());
            }
        }
    }

    #[test]
    fn degenerate_facet_is_rejected() {
        let g = GkmGraph {
            dim: 2,
            facets: 1,
            vertex_count: 2,
            vertex_facets: None,
            edges: vec![
                GkmEdge { ends: (0, 1), label: v(&[0, 0]), support: Some(vec![0]) },
                GkmEdge { ends: (0, 1), label: v(&[0, 0]), support: Some(vec![0]) },
            ],
        };
        assert_eq!(
            reconstruct_lambda(&g).unwrap_err(),
            Error::Facet { facet: 0, source: Box::new(Error::RankNotOne { rank: 2 }) }
        );
    }

    #[test]
    fn equivalence_examples() {
        let g = build_gkm(&hirzebruch(2)).unwrap();
        assert!(gkm_equiv(&g, &g.renumbered(&[2, 0, 3, 1])).unwrap().is_some());
        let h0 = build_gkm(&hirzebruch(0)).unwrap();
        assert!(gkm_equiv(&h0, &g).unwrap().is_none());
        assert_eq!(gkm_equiv(&g.bare(), &g).unwrap_err(), Error::MissingFacetSupport);
    }
}
