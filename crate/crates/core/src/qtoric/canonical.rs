//! Canonical forms under facet relabeling, change of torus basis and
//! column sign flips.
//!
//! A *frame* is a vertex together with an ordering of its facets. Each frame
//! induces a facet labeling (the frame's facets get labels `0..n` in order,
//! the rest are labeled by a deterministic breadth-first sweep of the edge
//! graph) and, in the weak mode, a basis of the lattice in which the frame's
//! columns are the standard basis. The canonical form is the minimum over all
//! frames of `(relabeled vertex list, sign-normalized matrix)`.
//!
//! A frame fixes the basis only up to the signs of its own columns, so the
//! weak mode also minimizes over those row signs. Relabelings, bases and
//! signs act compatibly on frames, so the minimum is a class function; two inputs with equal forms are related by the
//! relabeling and basis change read off from their minimizing frames.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{QuasitoricPair, Twist};
use crate::error::Result;
use crate::lattice::{unimodular_inverse, IntMatrix};
use crate::polytope::{facets_of, FacetBijection, SimplePolytope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Quotient by `GL(n, Z)` as well.
    Weak,
    /// The torus basis is fixed.
    Strong,
}

/// Normal form of a characteristic pair; equal forms mean equivalent pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub dim: usize,
    pub facets: usize,
    /// Sorted facet tuples in canonical labels, sorted lexicographically.
    pub vertices: Vec<Vec<usize>>,
    pub matrix: IntMatrix,
}

impl CanonicalForm {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.to_string().into_bytes()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};m={};V=", self.dim, self.facets)?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join("."))?;
        }
        write!(f, ";L=")?;
        let parts: Vec<String> = self.matrix.as_slice().iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub(crate) struct SearchResult {
    pub form: CanonicalForm,
    /// Original facet to canonical label.
    pub labels: FacetBijection,
    /// Sign applied to each original column.
    pub signs: Vec<i64>,
    /// Basis change applied to the original matrix.
    pub transform: IntMatrix,
}

const UNLABELED: usize = usize::MAX;

/// Order key of a vertex: ascending keys sort equal-size facet sets in
/// lexicographic order of their sorted tuples.
#[inline]
fn vertex_key(mask: u64) -> u64 {
    !mask.reverse_bits()
}

#[inline]
fn key_to_facets(key: u64) -> Vec<usize> {
    facets_of((!key).reverse_bits())
}

struct Scratch {
    labels: Vec<usize>,
    visited: Vec<bool>,
    queue: Vec<usize>,
    edge_order: Vec<(usize, usize)>,
    keys: Vec<u64>,
}

impl Scratch {
    fn new(p: &SimplePolytope) -> Self {
        Scratch {
            labels: vec![UNLABELED; p.facet_count()],
            visited: vec![false; p.vertex_count()],
            queue: Vec::with_capacity(p.vertex_count()),
            edge_order: Vec::with_capacity(p.dim()),
            keys: Vec::with_capacity(p.vertex_count()),
        }
    }
}

/// Labels every facet starting from the frame `(v, ordering)`.
fn label_from_frame(p: &SimplePolytope, v: usize, ordering: &[usize], s: &mut Scratch) {
    s.labels.fill(UNLABELED);
    for (k, &f) in ordering.iter().enumerate() {
        s.labels[f] = k;
    }
    let mut next = ordering.len();
    s.visited.fill(false);
    s.queue.clear();
    s.queue.push(v);
    s.visited[v] = true;
    let mut head = 0;
    while head < s.queue.len() {
        let u = s.queue[head];
        head += 1;
        s.edge_order.clear();
        s.edge_order.extend(p.vertex(u).iter().enumerate().map(|(k, &f)| (s.labels[f], k)));
        s.edge_order.sort_unstable();
        for &(_, k) in &s.edge_order {
            let nb = p.neighbors(u)[k];
            if s.labels[nb.entering] == UNLABELED {
                s.labels[nb.entering] = next;
                next += 1;
            }
            if !s.visited[nb.vertex] {
                s.visited[nb.vertex] = true;
                s.queue.push(nb.vertex);
            }
        }
    }
    debug_assert_eq!(next, p.facet_count());
}

#[derive(Clone)]
struct Best {
    keys: Vec<u64>,
    matrix: Vec<i64>,
    vertex: usize,
    /// Rows of the vertex transform, in output order.
    row_order: Vec<usize>,
    /// Row signs applied after the frame's basis change.
    delta: Vec<i64>,
    labels: Vec<usize>,
    signs: Vec<i64>,
}

impl Best {
    fn cmp_rank(&self, other: &Best) -> Ordering {
        self.keys
            .cmp(&other.keys)
            .then_with(|| self.matrix.cmp(&other.matrix))
            .then_with(|| self.vertex.cmp(&other.vertex))
            .then_with(|| self.row_order.cmp(&other.row_order))
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Chooses row signs `delta` (a sign flip of the frame's own columns, which
/// must be undone by the basis change) and column signs so that the matrix is
/// lexicographically smallest in row-major order. `rows` is `n x m` in
/// canonical column order. Returns `(matrix, delta, column signs)`.
///
/// Entry `(l, c)` becomes `rows[l][c] * delta[l] * delta[r_c] * sign0_c`,
/// where `r_c` is the first nonzero row of column `c`, so row `l` only
/// depends on `delta[0..=l]`: a greedy sweep that branches on ties finds the
/// minimum.
fn minimize_row_signs(rows: &[i64], n: usize, m: usize) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
    let mut first_row = vec![n; m];
    let mut first_sign = vec![0i64; m];
    for c in 0..m {
        if let Some(r) = (0..n).find(|&r| rows[r * m + c] != 0) {
            first_row[c] = r;
            first_sign[c] = rows[r * m + c].signum();
        }
    }
    let row_with = |l: usize, delta: &[i64], dl: i64, out: &mut [i64]| {
        for c in 0..m {
            let r = first_row[c];
            out[c] = if r > l {
                0
            } else {
                let dr = if r == l { dl } else { delta[r] };
                rows[l * m + c] * dl * dr * first_sign[c]
            };
        }
    };

    struct Ctx<'a> {
        n: usize,
        m: usize,
        row_with: &'a dyn Fn(usize, &[i64], i64, &mut [i64]),
        best: Option<(Vec<i64>, Vec<i64>)>,
    }

    fn rec(ctx: &mut Ctx<'_>, l: usize, delta: &mut Vec<i64>, matrix: &mut Vec<i64>) {
        let m = ctx.m;
        if l == ctx.n {
            let better = match &ctx.best {
                None => true,
                Some((bm, bd)) => (&*matrix, &*delta) < (bm, bd),
            };
            if better {
                ctx.best = Some((matrix.clone(), delta.clone()));
            }
            return;
        }
        let mut plus = vec![0; m];
        let mut minus = vec![0; m];
        (ctx.row_with)(l, delta, 1, &mut plus);
        let choices: Vec<(i64, Vec<i64>)> = if l == 0 {
            // flipping every row at once changes nothing after normalization
            vec![(1, plus)]
        } else {
            (ctx.row_with)(l, delta, -1, &mut minus);
            match plus.cmp(&minus) {
                Ordering::Less => vec![(1, plus)],
                Ordering::Greater => vec![(-1, minus)],
                Ordering::Equal => vec![(1, plus), (-1, minus)],
            }
        };
        for (d, row) in choices {
            // prune against the best complete matrix so far
            if let Some((bm, _)) = &ctx.best {
                let prefix = &bm[..l * m];
                if matrix[..l * m].cmp(prefix).then_with(|| row[..].cmp(&bm[l * m..(l + 1) * m])) == Ordering::Greater {
                    continue;
                }
            }
            delta.push(d);
            matrix[l * m..(l + 1) * m].copy_from_slice(&row);
            rec(ctx, l + 1, delta, matrix);
            delta.pop();
        }
    }

    let mut ctx = Ctx { n, m, row_with: &row_with, best: None };
    let mut delta = Vec::with_capacity(n);
    let mut matrix = vec![0; n * m];
    rec(&mut ctx, 0, &mut delta, &mut matrix);
    let (matrix, delta) = ctx.best.expect("at least one sign choice");
    let col_signs = (0..m)
        .map(|c| if first_row[c] < n { delta[first_row[c]] * first_sign[c] } else { 1 })
        .collect();
    (matrix, delta, col_signs)
}

fn best_at_vertex(q: &QuasitoricPair, refined: &IntMatrix, v: usize, mode: Mode) -> Option<Best> {
    let p = q.polytope();
    let (n, m) = (p.dim(), p.facet_count());
    let vertex = p.vertex(v);
    let mut s = Scratch::new(p);
    let mut rows = vec![0i64; n * m];
    let mut best: Option<Best> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut ordering = vec![0; n];
    loop {
        for k in 0..n {
            ordering[k] = vertex[perm[k]];
        }
        label_from_frame(p, v, &ordering, &mut s);
        s.keys.clear();
        for u in 0..p.vertex_count() {
            let relabeled = facets_of(p.mask(u)).into_iter().fold(0u64, |acc, f| acc | (1 << s.labels[f]));
            s.keys.push(vertex_key(relabeled));
        }
        s.keys.sort_unstable();

        let key_order = best.as_ref().map_or(Ordering::Less, |b| s.keys.cmp(&b.keys));
        if key_order != Ordering::Greater {
            // the strong mode keeps the torus basis, so rows stay in place
            let row_order: Vec<usize> = match mode {
                Mode::Weak => perm.clone(),
                Mode::Strong => (0..n).collect(),
            };
            for j in 0..m {
                let c = s.labels[j];
                for k in 0..n {
                    rows[k * m + c] = refined[(row_order[k], j)];
                }
            }
            let (matrix, delta, col_signs) = match mode {
                Mode::Weak => minimize_row_signs(&rows, n, m),
                Mode::Strong => {
                    let col_signs: Vec<i64> = (0..m)
                        .map(|c| (0..n).map(|k| rows[k * m + c]).find(|&x| x != 0).map_or(1, i64::signum))
                        .collect();
                    let matrix = (0..n * m).map(|i| rows[i] * col_signs[i % m]).collect();
                    (matrix, vec![1; n], col_signs)
                }
            };
            let better = match &best {
                None => true,
                Some(b) => key_order == Ordering::Less || matrix < b.matrix,
            };
            if better {
                best = Some(Best {
                    keys: s.keys.clone(),
                    matrix,
                    vertex: v,
                    row_order,
                    delta,
                    labels: s.labels.clone(),
                    signs: (0..m).map(|j| col_signs[s.labels[j]]).collect(),
                });
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

pub(crate) fn search(q: &QuasitoricPair, mode: Mode) -> Result<SearchResult> {
    let p = q.polytope();
    let (n, m) = (p.dim(), p.facet_count());
    let transforms: Vec<IntMatrix> = (0..p.vertex_count())
        .map(|v| match mode {
            Mode::Weak => unimodular_inverse(&q.lambda().select_columns(p.vertex(v))),
            Mode::Strong => Ok(IntMatrix::identity(n)),
        })
        .collect::<Result<_>>()?;
    let refined: Vec<IntMatrix> = transforms.iter().map(|t| t.mul(q.lambda())).collect::<Result<_>>()?;

    let best = (0..p.vertex_count())
        .into_par_iter()
        .filter_map(|v| best_at_vertex(q, &refined[v], v, mode))
        .reduce_with(|a, b| if b.cmp_rank(&a) == Ordering::Less { b } else { a })
        .expect("a validated polytope has a vertex");

    let matrix = IntMatrix::from_row_major(n, m, best.matrix)?;
    let form = CanonicalForm { dim: n, facets: m, vertices: best.keys.iter().map(|&k| key_to_facets(k)).collect(), matrix };
    Ok(SearchResult {
        form,
        labels: FacetBijection(best.labels),
        signs: best.signs,
        transform: IntMatrix::from_rows(
            &(0..n)
                .map(|k| transforms[best.vertex].row(best.row_order[k]).scaled(best.delta[k]).map(|r| r.0))
                .collect::<Result<Vec<_>>>()?,
        )?,
    })
}

pub fn canonical_form(q: &QuasitoricPair) -> Result<CanonicalForm> {
    Ok(search(q, Mode::Weak)?.form)
}

fn same_shape(a: &QuasitoricPair, b: &QuasitoricPair) -> bool {
    a.dim() == b.dim()
        && a.facet_count() == b.facet_count()
        && a.polytope().vertex_count() == b.polytope().vertex_count()
}

fn witness(a: &SearchResult, b: &SearchResult) -> Result<Twist> {
    let relabel = a.labels.then(&b.labels.inverse());
    let matrix = unimodular_inverse(&b.transform)?.mul(&a.transform)?;
    let signs = (0..relabel.len()).map(|j| a.signs[j] * b.signs[relabel.apply(j)]).collect();
    Ok(Twist { relabel, matrix, signs })
}

fn equiv(q: &QuasitoricPair, target: &QuasitoricPair, mode: Mode) -> Result<Option<Twist>> {
    if !same_shape(q, target) {
        return Ok(None);
    }
    let (a, b) = rayon::join(|| search(q, mode), || search(target, mode));
    let (a, b) = (a?, b?);
    if a.form != b.form {
        return Ok(None);
    }
    let twist = witness(&a, &b)?;
    assert!(twist.maps(q, target), "equal canonical forms must yield a verifying witness");
    Ok(Some(twist))
}

/// A witness `(π, A, ε)` with `λ'_{π(j)} = ε_j A λ_j` if `q` and `target`
/// are weakly equivariantly equivalent.
pub fn weak_equiv(q: &QuasitoricPair, target: &QuasitoricPair) -> Result<Option<Twist>> {
    equiv(q, target, Mode::Weak)
}

/// A witness with `A = I` if some relabeling matches columns up to sign.
pub fn strong_equiv(q: &QuasitoricPair, target: &QuasitoricPair) -> Result<Option<Twist>> {
    equiv(q, target, Mode::Strong)
}
