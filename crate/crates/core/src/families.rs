//! Named families, the prism `k` invariant, bounded enumeration over a fixed
//! polytope and the prism counting experiment.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{presentation, Localization, Monomial};
use crate::error::{Error, Result};
use crate::lattice::{det, IntMatrix, IntVector};
use crate::polytope::{validate_polytope, SimplePolytope};
use crate::qtoric::{canonical_form, CanonicalForm, QuasitoricPair};

fn bad(msg: impl Into<String>) -> Error {
    Error::DimensionMismatch(msg.into())
}

/// Product of simplices of the given dimensions. Block `i` owns the facets
/// `o_i .. o_i + n_i` (its coordinate facets) and `N + i`, where `o_i` is the
/// offset of the block and `N` the total dimension.
fn simplex_product(dims: &[usize]) -> Result<SimplePolytope> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(bad("every factor needs dimension at least 1"));
    }
    let total: usize = dims.iter().sum();
    let mut vertices: Vec<Vec<usize>> = vec![Vec::new()];
    let mut offset = 0;
    for (i, &d) in dims.iter().enumerate() {
        let block: Vec<usize> = (offset..offset + d).chain([total + i]).collect();
        let mut next = Vec::new();
        for v in &vertices {
            for drop in 0..=d {
                let mut w = v.clone();
                w.extend(block.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &f)| f));
                next.push(w);
            }
        }
        vertices = next;
        offset += d;
    }
    for v in vertices.iter_mut() {
        v.sort_unstable();
    }
    vertices.sort();
    validate_polytope(&vertices, total, total + dims.len())
}

/// `CP^n`: the simplex with `Λ = [I | (-1, ..., -1)]`.
pub fn projective_space(n: usize) -> Result<QuasitoricPair> {
    product_family(&[n])
}

/// `Π CP^{n_i}` with block-diagonal characteristic matrix.
pub fn product_family(dims: &[usize]) -> Result<QuasitoricPair> {
    let p = simplex_product(dims)?;
    let total: usize = dims.iter().sum();
    let mut rows = vec![vec![0i64; total + dims.len()]; total];
    let mut offset = 0;
    for (i, &d) in dims.iter().enumerate() {
        for k in offset..offset + d {
            rows[k][k] = 1;
            rows[k][total + i] = -1;
        }
        offset += d;
    }
    QuasitoricPair::new(p, IntMatrix::from_rows(&rows)?)
}

pub fn square() -> SimplePolytope {
    validate_polytope(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], 2, 4).expect("square is valid")
}

/// Hirzebruch surface: columns `(1,0), (0,1), (-1,a), (0,-1)` around the square.
pub fn hirzebruch(a: i64) -> Result<QuasitoricPair> {
    QuasitoricPair::new(square(), IntMatrix::from_rows(&[[1, 0, -1, 0], [0, 1, a, -1]])?)
}

/// `Δ^1 × Δ^{n-1}` with facets `E0 = 0`, `E1 = 1` (the ends) and the sides
/// `S_i = i + 1` for `i = 1..=n`.
pub fn prism(n: usize) -> Result<SimplePolytope> {
    if n < 2 {
        return Err(bad("prism needs n >= 2"));
    }
    let sides: Vec<usize> = (2..n + 2).collect();
    let mut vertices = Vec::new();
    for end in 0..2 {
        for skip in &sides {
            let mut v = vec![end];
            v.extend(sides.iter().filter(|s| *s != skip));
            vertices.push(v);
        }
    }
    validate_polytope(&vertices, n, n + 2)
}

/// `λ(E0) = (1, ..., 1)`, `λ(E1)` with `k` leading entries `-1` and the rest
/// `1`, `λ(S_i) = -e_i`.
pub fn prism_family(n: usize, k: usize) -> Result<QuasitoricPair> {
    if k > n {
        return Err(bad(format!("k = {k} exceeds n = {n}")));
    }
    let p = prism(n)?;
    let mut columns = vec![IntVector::new(vec![1; n])];
    columns.push(IntVector::new((0..n).map(|i| if i < k { -1 } else { 1 }).collect()));
    columns.extend((0..n).map(|i| IntVector::unit(n, i).negated()));
    QuasitoricPair::new(p, IntMatrix::from_columns(n, &columns)?)
}

/// The two ends of a prism: its unique disjoint pair of facets.
fn prism_ends(q: &QuasitoricPair) -> Result<(usize, usize)> {
    let p = q.polytope();
    let n = p.dim();
    let wrong = |why: &str| Error::WrongPolytope(format!("not Δ¹×Δ^{}: {why}", n.saturating_sub(1)));
    if n < 3 {
        return Err(wrong("dimension must be at least 3"));
    }
    if p.facet_count() != n + 2 || p.vertex_count() != 2 * n {
        return Err(wrong("facet or vertex count"));
    }
    let nonfaces = p.minimal_nonfaces();
    let pairs: Vec<&Vec<usize>> = nonfaces.iter().filter(|s| s.len() == 2).collect();
    if nonfaces.len() != 2 || pairs.len() != 1 {
        return Err(wrong("minimal non-faces"));
    }
    let (e0, e1) = (pairs[0][0], pairs[0][1]);
    let sides: Vec<usize> = (0..n + 2).filter(|&f| f != e0 && f != e1).collect();
    if !nonfaces.contains(&sides) {
        return Err(wrong("sides do not form a non-face"));
    }
    Ok((e0, e1))
}

/// `k_M`: write every side class as `α a + β b` where `a`, `b` are the end
/// classes, flip sides so that `α = 1`, and count `β = -1`. For odd `n` the
/// sign of `b` is fixed by `<a^n> = <b^n>`; for even `n` the answer is only
/// defined up to `k ↦ n - k` and the smaller value is returned.
pub fn prism_k_invariant(q: &QuasitoricPair) -> Result<usize> {
    let (e0, e1) = prism_ends(q)?;
    let n = q.dim();
    let m = q.facet_count();
    let pres = presentation(q);
    let fa = pres.linear_form(e0);
    let fb = pres.linear_form(e1);
    let d = fa[0] * fb[1] - fa[1] * fb[0];
    if d.abs() != 1 {
        return Err(Error::NotConnectedSumCohomology(format!("end classes span a sublattice of index {}", d.abs())));
    }
    let loc = Localization::new(q)?;
    let a_n = loc.integrate(&Monomial::from_factors(m, &vec![e0; n])?)?;
    let b_n = loc.integrate(&Monomial::from_factors(m, &vec![e1; n])?)?;
    if a_n.abs() != 1 || b_n.abs() != 1 {
        return Err(Error::NotConnectedSumCohomology(format!("<a^n> = {a_n}, <b^n> = {b_n}")));
    }
    let b_sign = if n % 2 == 1 && a_n != b_n { -1 } else { 1 };
    let mut k = 0;
    for s in (0..m).filter(|&f| f != e0 && f != e1) {
        let f = pres.linear_form(s);
        // solve f = α fa + β fb
        let alpha = (f[0] * fb[1] - f[1] * fb[0]) * d;
        let beta = (fa[0] * f[1] - fa[1] * f[0]) * d;
        if alpha.abs() != 1 || beta.abs() != 1 {
            return Err(Error::NotConnectedSumCohomology(format!(
                "side {s} = {alpha} a + {beta} b"
            )));
        }
        if alpha * beta * b_sign == -1 {
            k += 1;
        }
    }
    Ok(if n % 2 == 0 { k.min(n - k) } else { k })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub form: CanonicalForm,
    pub multiplicity: usize,
    /// Lexicographically smallest enumerated matrix in the class.
    pub representative: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub facets: usize,
    pub bound: i64,
    /// Number of valid matrices found, counted with sign-normalized columns.
    pub matrices: usize,
    pub class_count: usize,
    /// Sorted by canonical form.
    pub classes: Vec<ClassEntry>,
}

pub const DEFAULT_SEARCH_CAP: u128 = 100_000_000;

/// Sign-normalized primitive vectors in `[-bound, bound]^n`, sorted.
fn candidate_columns(n: usize, bound: i64) -> Vec<IntVector> {
    let side = (2 * bound + 1) as usize;
    let mut out = Vec::new();
    for idx in 0..side.pow(n as u32) {
        let mut x = idx;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let c = (x % side) as i64 - bound;
                x /= side;
                c
            })
            .collect();
        let v = IntVector::new(v);
        if v.is_primitive() && v.leading_sign() > 0 {
            out.push(v);
        }
    }
    out.sort();
    out
}

/// Every valid characteristic matrix over `p` with entries in
/// `[-bound, bound]` and sign-normalized columns, in lexicographic order of
/// the column tuples.
pub fn enumerate_matrices(p: &SimplePolytope, bound: i64, cap: u128) -> Result<Vec<QuasitoricPair>> {
    if bound < 1 {
        return Err(bad("bound must be at least 1"));
    }
    let (n, m) = (p.dim(), p.facet_count());
    let cands = candidate_columns(n, bound);
    let size = (0..m).try_fold(1u128, |acc, _| acc.checked_mul(cands.len() as u128)).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::SearchSpaceTooLarge { size, cap });
    }
    // vertices checked once their largest facet is assigned
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); m];
    for v in 0..p.vertex_count() {
        closing[*p.vertex(v).iter().max().expect("vertex has facets")].push(v);
    }
    let found: Vec<Vec<Vec<usize>>> = (0..cands.len())
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut chosen = vec![first];
            extend(p, &cands, &closing, &mut chosen, &mut out);
            out
        })
        .collect();
    found
        .into_iter()
        .flatten()
        .map(|choice| {
            let cols: Vec<IntVector> = choice.iter().map(|&c| cands[c].clone()).collect();
            QuasitoricPair::new(p.clone(), IntMatrix::from_columns(n, &cols)?)
        })
        .collect()
}

fn vertices_ok(p: &SimplePolytope, cands: &[IntVector], closing: &[usize], chosen: &[usize]) -> bool {
    closing.iter().all(|&v| {
        let cols: Vec<IntVector> = p.vertex(v).iter().map(|&f| cands[chosen[f]].clone()).collect();
        IntMatrix::from_columns(p.dim(), &cols).and_then(|m| det(&m)).is_ok_and(|d| d.abs() == 1)
    })
}

fn extend(p: &SimplePolytope, cands: &[IntVector], closing: &[Vec<usize>], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let j = chosen.len() - 1;
    if !vertices_ok(p, cands, &closing[j], chosen) {
        return;
    }
    if chosen.len() == p.facet_count() {
        out.push(chosen.clone());
        return;
    }
    for c in 0..cands.len() {
        chosen.push(c);
        extend(p, cands, closing, chosen, out);
        chosen.pop();
    }
}

pub fn enumerate_classes(p: &SimplePolytope, bound: i64) -> Result<ClassificationReport> {
    enumerate_classes_with_cap(p, bound, DEFAULT_SEARCH_CAP)
}

pub fn enumerate_classes_with_cap(p: &SimplePolytope, bound: i64, cap: u128) -> Result<ClassificationReport> {
    let pairs = enumerate_matrices(p, bound, cap)?;
    classify(p, bound, &pairs)
}

/// Groups enumerated pairs by canonical form.
pub fn classify(p: &SimplePolytope, bound: i64, pairs: &[QuasitoricPair]) -> Result<ClassificationReport> {
    let forms: Vec<CanonicalForm> = pairs.par_iter().map(canonical_form).collect::<Result<_>>()?;
    let mut groups: BTreeMap<CanonicalForm, (usize, IntMatrix)> = BTreeMap::new();
    for (form, q) in forms.into_iter().zip(pairs) {
        let entry = groups.entry(form).or_insert_with(|| (0, q.lambda().clone()));
        entry.0 += 1;
        if q.lambda().as_slice() < entry.1.as_slice() {
            entry.1 = q.lambda().clone();
        }
    }
    let classes: Vec<ClassEntry> = groups
        .into_iter()
        .map(|(form, (multiplicity, representative))| ClassEntry { form, multiplicity, representative })
        .collect();
    Ok(ClassificationReport {
        dim: p.dim(),
        facets: p.facet_count(),
        bound,
        matrices: pairs.len(),
        class_count: classes.len(),
        classes,
    })
}

/// Weak-equivalence classes among `prism_family(n, k)` for odd `k`, or even
/// `k` when `bar` is set.
pub fn count_alpha(n: usize, bar: bool) -> Result<usize> {
    if n < 3 {
        return Err(bad("counting needs n >= 3"));
    }
    let parity = if bar { 0 } else { 1 };
    let forms = (0..=n)
        .filter(|k| k % 2 == parity)
        .map(|k| canonical_form(&prism_family(n, k)?))
        .collect::<Result<std::collections::BTreeSet<_>>>()?;
    Ok(forms.len())
}

/// The closed-form counts for `n >= 3`.
pub fn count_alpha_closed_form(n: usize, bar: bool) -> Option<usize> {
    if n < 3 {
        return None;
    }
    Some(match (n % 2, n % 4) {
        (1, _) => n.div_ceil(2),
        (_, 0) if bar => n / 4 + 1,
        (_, 0) => n / 4,
        _ => (n + 2) / 4,
    })
}

/// All `2^m` column sign patterns applied to `q`, in binary order of the
/// flipped facets.
pub fn omniorientations(q: &QuasitoricPair) -> Result<Vec<(Vec<i64>, QuasitoricPair)>> {
    let m = q.facet_count();
    if m >= 32 {
        return Err(Error::TooManyFacets(m));
    }
    (0..1u32 << m)
        .map(|mask| {
            let signs: Vec<i64> = (0..m).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
            let cols: Vec<IntVector> =
                (0..m).map(|j| q.column(j).scaled(signs[j])).collect::<Result<_>>()?;
            let flipped = QuasitoricPair::new(q.polytope().clone(), IntMatrix::from_columns(q.dim(), &cols)?)?;
            Ok((signs, flipped))
        })
        .collect()
}
