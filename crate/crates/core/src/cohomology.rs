//! Cohomology of a quasitoric pair: the face-ring presentation, top-degree
//! pairings by fixed-point localization, and characteristic-number vectors.

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::FacetBijection;
use crate::qtoric::{refine_at_vertex, QuasitoricPair, VertexFrame};

/// `u_target = Σ coeff · u_j` over the free generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearRelation {
    pub target: usize,
    pub terms: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyPresentation {
    pub generators: usize,
    /// Minimal non-faces; each gives the monomial relation `Π u_i = 0`.
    pub nonfaces: Vec<Vec<usize>>,
    /// Facets of the base vertex, eliminated by the linear relations.
    pub eliminated: Vec<usize>,
    /// The remaining generators, a basis of `H^2`.
    pub free: Vec<usize>,
    pub relations: Vec<LinearRelation>,
    /// `b_0, b_2, ..., b_2n`.
    pub betti: Vec<i64>,
}

impl CohomologyPresentation {
    /// Coordinates of `u_i` in the basis `free`.
    pub fn linear_form(&self, i: usize) -> Vec<i64> {
        let mut form = vec![0; self.free.len()];
        if let Some(k) = self.free.iter().position(|&j| j == i) {
            form[k] = 1;
        } else if let Some(rel) = self.relations.iter().find(|r| r.target == i) {
            for &(j, c) in &rel.terms {
                let k = self.free.iter().position(|&f| f == j).expect("relation over free generators");
                form[k] = c;
            }
        }
        form
    }
}

pub fn presentation(q: &QuasitoricPair) -> CohomologyPresentation {
    let p = q.polytope();
    let base = p.base_vertex();
    let eliminated = p.vertex(base).to_vec();
    let free: Vec<usize> = (0..q.facet_count()).filter(|j| !eliminated.contains(j)).collect();
    let refined = refine_at_vertex(q, base, &eliminated).expect("base vertex of a validated pair");
    let relations = eliminated
        .iter()
        .enumerate()
        .map(|(k, &target)| LinearRelation {
            target,
            terms: free.iter().map(|&j| (j, -refined[(k, j)])).collect(),
        })
        .collect();
    CohomologyPresentation {
        generators: q.facet_count(),
        nonfaces: p.minimal_nonfaces(),
        eliminated,
        free,
        relations,
        betti: p.f_h_vectors().1,
    }
}

/// Exponent vector over the facets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// `u_{f_1} ... u_{f_d}` with repetition allowed.
    pub fn from_factors(facets: usize, factors: &[usize]) -> Result<Self> {
        let mut e = vec![0; facets];
        for &f in factors {
            if f >= facets {
                return Err(Error::DimensionMismatch(format!("facet {f} out of range 0..{facets}")));
            }
            e[f] += 1;
        }
        Ok(Monomial(e))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Factors in ascending order, with repetition.
    pub fn factors(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect()
    }

    /// All degree-`d` monomials, ordered lexicographically by factor tuple.
    pub fn all_of_degree(facets: usize, d: usize) -> Vec<Monomial> {
        multisets(facets, d)
            .into_iter()
            .map(|f| Monomial::from_factors(facets, &f).expect("factors in range"))
            .collect()
    }
}

/// Non-decreasing tuples of length `d` over `0..m`, in lexicographic order.
pub(crate) fn multisets(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d == 0 {
        out.push(Vec::new());
        return out;
    }
    if m == 0 {
        return out;
    }
    let mut cur = vec![0; d];
    loop {
        out.push(cur.clone());
        let Some(i) = (0..d).rev().find(|&i| cur[i] + 1 < m) else { break };
        let next = cur[i] + 1;
        for x in &mut cur[i..] {
            *x = next;
        }
    }
    out
}

struct EvalPoint {
    /// `weights[v][k] = <w_k, t>`.
    weights: Vec<Vec<BigInt>>,
    euler: Vec<BigInt>,
}

/// Localization integrator: `<mon, [M]> = Σ_v mon|_v / e(v)`, evaluated
/// exactly at two generic points of the torus Lie algebra.
pub struct Localization {
    dim: usize,
    facets: usize,
    frames: Vec<VertexFrame>,
    points: Vec<EvalPoint>,
}

const MAX_POINT_ATTEMPTS: i64 = 512;

impl Localization {
    pub fn new(q: &QuasitoricPair) -> Result<Self> {
        let frames = q.frames();
        let n = q.dim();
        let mut points = Vec::with_capacity(2);
        let mut s = 2i64;
        while points.len() < 2 {
            if s > MAX_POINT_ATTEMPTS {
                return Err(Error::GenericPointOnHyperplane);
            }
            let t: Vec<BigInt> = (0..n as u32).map(|k| BigInt::from(s).pow(k)).collect();
            s += 1;
            let weights: Vec<Vec<BigInt>> = frames
                .iter()
                .map(|f| {
                    f.weights
                        .iter()
                        .map(|w| w.iter().zip(&t).map(|(&a, b)| BigInt::from(a) * b).sum())
                        .collect()
                })
                .collect();
            if weights.iter().flatten().any(Zero::is_zero) {
                continue;
            }
            let euler = weights
                .iter()
                .zip(&frames)
                .map(|(ws, f)| ws.iter().fold(BigInt::from(f.sign), |acc, w| acc * w))
                .collect();
            points.push(EvalPoint { weights, euler });
        }
        Ok(Localization { dim: n, facets: q.facet_count(), frames, points })
    }

    /// The localization sum at each evaluation point, for any degree.
    pub fn evaluate(&self, mon: &Monomial) -> Vec<BigRational> {
        let e = mon.exponents();
        self.points
            .iter()
            .map(|pt| {
                let mut sum = BigRational::zero();
                for (v, f) in self.frames.iter().enumerate() {
                    let supported = e.iter().enumerate().all(|(i, &a)| a == 0 || f.facets.contains(&i));
                    if !supported {
                        continue;
                    }
                    let num = f
                        .facets
                        .iter()
                        .enumerate()
                        .fold(BigInt::one(), |acc, (k, &j)| acc * pt.weights[v][k].pow(e[j]));
                    sum += BigRational::new(num, pt.euler[v].clone());
                }
                sum
            })
            .collect()
    }

    /// `Σ_v 1 / e(v)` at each evaluation point.
    pub fn degree_zero_sums(&self) -> Vec<BigRational> {
        self.evaluate(&Monomial(vec![0; self.facets]))
    }

    pub fn integrate(&self, mon: &Monomial) -> Result<i64> {
        if mon.exponents().len() != self.facets {
            return Err(Error::DimensionMismatch(format!(
                "monomial over {} facets, pair has {}",
                mon.exponents().len(),
                self.facets
            )));
        }
        if mon.degree() as usize != self.dim {
            return Ok(0);
        }
        let values = self.evaluate(mon);
        let first = &values[0];
        if values.iter().any(|v| v != first) || !first.is_integer() {
            let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            return Err(Error::NonIntegralResult(format!("{:?}: {}", mon.factors(), shown.join(" vs "))));
        }
        first.to_integer().to_i64().ok_or(Error::Overflow)
    }
}

pub fn integrate(q: &QuasitoricPair, mon: &Monomial) -> Result<i64> {
    Localization::new(q)?.integrate(mon)
}

/// Pairings of every degree-`n` monomial, keyed by sorted factor tuple in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharNumberVector {
    pub dim: usize,
    pub facets: usize,
    pub entries: Vec<(Vec<usize>, i64)>,
}

impl CharNumberVector {
    pub fn get(&self, factors: &[usize]) -> Option<i64> {
        self.entries.binary_search_by(|(f, _)| f.as_slice().cmp(factors)).ok().map(|i| self.entries[i].1)
    }
}

pub fn char_numbers(q: &QuasitoricPair) -> Result<CharNumberVector> {
    let loc = Localization::new(q)?;
    let entries = multisets(q.facet_count(), q.dim())
        .into_par_iter()
        .map(|f| {
            let mon = Monomial::from_factors(q.facet_count(), &f)?;
            Ok((f, loc.integrate(&mon)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CharNumberVector { dim: q.dim(), facets: q.facet_count(), entries })
}

/// Alignment of two characteristic-number vectors:
/// `b[π(mon)] = orientation · Π_j signs[j]^{a_j} · a[mon]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharMatch {
    pub relabel: FacetBijection,
    pub orientation: i64,
    pub signs: Vec<i64>,
}

/// Matches up to a facet bijection and the global orientation sign. The
/// orientation of `M` is fixed by the vertex-orientation convention only up
/// to a global sign, so it is not part of the data being compared.
pub fn char_numbers_match(q: &QuasitoricPair, target: &QuasitoricPair) -> Result<Option<CharMatch>> {
    if q.dim() != target.dim() || q.facet_count() != target.facet_count() {
        return Ok(None);
    }
    Ok(match_vectors(&char_numbers(q)?, &char_numbers(target)?, false))
}

/// As [`char_numbers_match`], also allowing a sign flip of each facet's
/// orientation (a change of omniorientation).
pub fn char_numbers_match_omni(q: &QuasitoricPair, target: &QuasitoricPair) -> Result<Option<CharMatch>> {
    if q.dim() != target.dim() || q.facet_count() != target.facet_count() {
        return Ok(None);
    }
    Ok(match_vectors(&char_numbers(q)?, &char_numbers(target)?, true))
}

pub fn match_vectors(a: &CharNumberVector, b: &CharNumberVector, omni: bool) -> Option<CharMatch> {
    if a.dim != b.dim || a.facets != b.facets || a.entries.len() != b.entries.len() {
        return None;
    }
    let m = a.facets;
    let profile = |v: &CharNumberVector, i: usize| {
        let mut p: Vec<(usize, u64)> = v
            .entries
            .iter()
            .filter_map(|(f, x)| {
                let e = f.iter().filter(|&&j| j == i).count();
                (e > 0).then_some((e, x.unsigned_abs()))
            })
            .collect();
        p.sort_unstable();
        p
    };
    let pa: Vec<_> = (0..m).map(|i| profile(a, i)).collect();
    let pb: Vec<_> = (0..m).map(|i| profile(b, i)).collect();
    let candidates: Vec<Vec<usize>> = (0..m).map(|i| (0..m).filter(|&j| pa[i] == pb[j]).collect()).collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (idx, (f, _)) in a.entries.iter().enumerate() {
        if let Some(&last) = f.last() {
            by_last[last].push(idx);
        }
    }
    let lookup: HashMap<&[usize], i64> = b.entries.iter().map(|(f, x)| (f.as_slice(), *x)).collect();

    let mut matcher = Matcher { a, lookup, by_last, candidates, omni, pi: vec![usize::MAX; m], used: vec![false; m] };
    matcher.search(0)
}

struct Matcher<'a> {
    a: &'a CharNumberVector,
    lookup: HashMap<&'a [usize], i64>,
    by_last: Vec<Vec<usize>>,
    candidates: Vec<Vec<usize>>,
    omni: bool,
    pi: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn image(&self, factors: &[usize]) -> i64 {
        let mut img: Vec<usize> = factors.iter().map(|&f| self.pi[f]).collect();
        img.sort_unstable();
        self.lookup[img.as_slice()]
    }

    fn search(&mut self, i: usize) -> Option<CharMatch> {
        let m = self.pi.len();
        if i == m {
            return self.solve_signs();
        }
        for c in self.candidates[i].clone() {
            if self.used[c] {
                continue;
            }
            self.pi[i] = c;
            let ok = self.by_last[i].iter().all(|&idx| {
                let (f, x) = &self.a.entries[idx];
                self.image(f).abs() == x.abs()
            });
            if ok {
                self.used[c] = true;
                if let Some(found) = self.search(i + 1) {
                    return Some(found);
                }
                self.used[c] = false;
            }
        }
        self.pi[i] = usize::MAX;
        None
    }

    /// Solves for the sign flips over GF(2). Bit `j < m` is facet `j`'s
    /// flip, bit `m` the orientation flip, bit 127 the right-hand side.
    fn solve_signs(&self) -> Option<CharMatch> {
        let m = self.pi.len();
        const RHS: u32 = 127;
        let mut rows: Vec<u128> = Vec::new();
        for (f, x) in &self.a.entries {
            if *x == 0 {
                continue;
            }
            let y = self.image(f);
            let mut row = 1u128 << m;
            if self.omni {
                for &j in f {
                    row ^= 1 << j;
                }
            }
            if (x < &0) != (y < 0) {
                row |= 1 << RHS;
            }
            rows.push(row);
        }
        let mut pivots: Vec<(usize, u128)> = Vec::new();
        for mut row in rows {
            for &(bit, p) in &pivots {
                if row >> bit & 1 == 1 {
                    row ^= p;
                }
            }
            let vars = row & !(1 << RHS);
            if vars == 0 {
                if row != 0 {
                    return None;
                }
                continue;
            }
            let bit = vars.trailing_zeros() as usize;
            for (_, p) in pivots.iter_mut() {
                if *p >> bit & 1 == 1 {
                    *p ^= row;
                }
            }
            pivots.push((bit, row));
        }
        // free variables are zero, so each pivot takes its right-hand side
        let mut flips = vec![false; m + 1];
        for (bit, p) in pivots {
            flips[bit] = p >> RHS & 1 == 1;
        }
        let sign = |b: bool| if b { -1 } else { 1 };
        Some(CharMatch {
            relabel: FacetBijection(self.pi.clone()),
            orientation: sign(flips[m]),
            signs: flips[..m].iter().map(|&b| sign(b)).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalNumbers {
    /// `Σ <u_i^2>`; real dimension 4 only.
    pub p1_pair: Option<i64>,
    /// Sum of the square-free top-degree pairings.
    pub c_top_pair: i64,
    /// Real dimension 4 only.
    pub signature: Option<i64>,
}

pub fn classical_numbers(q: &QuasitoricPair) -> Result<ClassicalNumbers> {
    let loc = Localization::new(q)?;
    let (n, m) = (q.dim(), q.facet_count());
    let mut c_top_pair = 0i64;
    for s in crate::polytope::subsets(m, n) {
        c_top_pair += loc.integrate(&Monomial::from_factors(m, &s)?)?;
    }
    let (p1_pair, signature) = if n == 2 {
        let mut p1 = 0;
        for i in 0..m {
            p1 += loc.integrate(&Monomial::from_factors(m, &[i, i])?)?;
        }
        (Some(p1), Some(signature_with(q, &loc)?))
    } else {
        (None, None)
    };
    Ok(ClassicalNumbers { p1_pair, c_top_pair, signature })
}

/// Signature of the intersection form on `H^2`; real dimension 4 only.
pub fn signature(q: &QuasitoricPair) -> Result<i64> {
    if q.dim() != 2 {
        return Err(Error::DimensionUnsupported { supported: 2, got: q.dim() });
    }
    signature_with(q, &Localization::new(q)?)
}

fn signature_with(q: &QuasitoricPair, loc: &Localization) -> Result<i64> {
    let free = presentation(q).free;
    let m = q.facet_count();
    let mut g = Vec::with_capacity(free.len());
    for &a in &free {
        let mut row = Vec::with_capacity(free.len());
        for &b in &free {
            row.push(BigRational::from_integer(loc.integrate(&Monomial::from_factors(m, &[a, b])?)?.into()));
        }
        g.push(row);
    }
    Ok(symmetric_signature(g))
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
fn symmetric_signature(mut g: Vec<Vec<BigRational>>) -> i64 {
    let r = g.len();
    let mut sig = 0;
    for k in 0..r {
        if g[k][k].is_zero() {
            if let Some(i) = (k + 1..r).find(|&i| !g[i][i].is_zero()) {
                g.swap(k, i);
                for row in g.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(i) = (k + 1..r).find(|&i| !g[k][i].is_zero()) {
                // e_k -> e_k + e_i makes the pivot 2 g[k][i] != 0
                for c in 0..r {
                    let add = g[i][c].clone();
                    g[k][c] += add;
                }
                for row in g.iter_mut() {
                    let add = row[i].clone();
                    row[k] += add;
                }
            } else {
                continue;
            }
        }
        let pivot = g[k][k].clone();
        sig += if pivot.is_positive() { 1 } else { -1 };
        for i in k + 1..r {
            let factor = &g[i][k] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for c in k..r {
                let sub = &factor * &g[k][c];
                g[i][c] -= sub;
            }
            for row in g.iter_mut() {
                let sub = &factor * &row[k];
                row[i] -= sub;
            }
        }
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtoric::tests::{cp2, hirzebruch};

    fn mon(m: usize, f: &[usize]) -> Monomial {
        Monomial::from_factors(m, f).unwrap()
    }

    #[test]
    fn multisets_in_lex_order() {
        let all = multisets(3, 2);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[5], vec![2, 2]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(multisets(4, 3).len(), 20);
    }

    #[test]
    fn cp2_presentation() {
        let pr = presentation(&cp2());
        assert_eq!(pr.nonfaces, vec![vec![0, 1, 2]]);
        assert_eq!(pr.free, vec![2]);
        assert_eq!(
            pr.relations,
            vec![
                LinearRelation { target: 0, terms: vec![(2, 1)] },
                LinearRelation { target: 1, terms: vec![(2, 1)] },
            ]
        );
        assert_eq!(pr.betti, vec![1, 1, 1]);
    }

    #[test]
    fn cp2_pairings() {
        let q = cp2();
        assert_eq!(integrate(&q, &mon(3, &[0, 1])).unwrap(), 1);
        assert_eq!(integrate(&q, &mon(3, &[2, 2])).unwrap(), 1);
        assert_eq!(integrate(&q, &mon(3, &[2])).unwrap(), 0);
        let loc = Localization::new(&q).unwrap();
        assert!(loc.degree_zero_sums().iter().all(Zero::is_zero));
    }

    #[test]
    fn hirzebruch_squares() {
        let v = char_numbers(&hirzebruch(1)).unwrap();
        let squares: Vec<i64> = (0..4).map(|i| v.get(&[i, i]).unwrap()).collect();
        assert_eq!(squares, vec![0, -1, 0, 1]);
        assert_eq!(v.entries.len(), 10);
    }

    #[test]
    fn matcher_examples() {
        assert!(char_numbers_match(&hirzebruch(1), &hirzebruch(-1)).unwrap().is_some());
        assert!(char_numbers_match(&hirzebruch(0), &hirzebruch(1)).unwrap().is_none());
        let m = char_numbers_match(&hirzebruch(2), &hirzebruch(2)).unwrap().unwrap();
        assert_eq!(m.orientation, 1);
    }

    #[test]
    fn signature_diagonalization() {
        let r = |x: i64| BigRational::from_integer(x.into());
        assert_eq!(symmetric_signature(vec![vec![r(0), r(1)], vec![r(1), r(0)]]), 0);
        assert_eq!(symmetric_signature(vec![vec![r(1), r(0)], vec![r(0), r(1)]]), 2);
        assert_eq!(symmetric_signature(vec![vec![r(0), r(0)], vec![r(0), r(-3)]]), -1);
    }

    #[test]
    fn classical_hirzebruch() {
        for a in -3..=3 {
            let c = classical_numbers(&hirzebruch(a)).unwrap();
            assert_eq!(c.p1_pair, Some(0));
            assert_eq!(c.signature, Some(0));
            assert_eq!(c.c_top_pair, 4);
        }
        assert_eq!(classical_numbers(&cp2()).unwrap().c_top_pair, 3);
    }
}
