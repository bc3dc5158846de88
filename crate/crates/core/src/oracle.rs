//! Brute-force face-ring evaluator, independent of localization.
//!
//! The first `n` generators are eliminated with the linear relations, so a
//! degree-`d` piece is spanned by monomials in the `m - n` free generators.
//! Monomial relations are each minimal non-face product times every
//! complementary monomial; ranks come from exact Gaussian elimination over
//! the rationals.

use std::collections::HashMap;

use num::{BigInt, BigRational, ToPrimitive, Zero};

use crate::cohomology::{multisets, presentation, CohomologyPresentation, Monomial};
use crate::error::{Error, Result};
use crate::qtoric::{vertex_frame, QuasitoricPair};

/// Largest number of free generators the oracle accepts.
pub const MAX_FREE: usize = 5;

/// Polynomial in the free generators of a fixed degree, as coefficients over
/// the monomial basis of that degree.
type Poly = HashMap<Vec<usize>, BigInt>;

struct FaceRing {
    pres: CohomologyPresentation,
    forms: Vec<Vec<i64>>,
}

impl FaceRing {
    fn new(q: &QuasitoricPair) -> Result<Self> {
        let pres = presentation(q);
        if pres.free.len() > MAX_FREE {
            return Err(Error::DimensionUnsupported { supported: MAX_FREE, got: pres.free.len() });
        }
        let forms = (0..q.facet_count()).map(|i| pres.linear_form(i)).collect();
        Ok(FaceRing { pres, forms })
    }

    fn free(&self) -> usize {
        self.pres.free.len()
    }

    /// Expands `Π u_f` (with repetition) times the free monomial `base`.
    fn expand(&self, factors: &[usize], base: &[usize]) -> Poly {
        let mut poly: Poly = HashMap::from([(base.to_vec(), BigInt::from(1))]);
        for &f in factors {
            let mut next: Poly = HashMap::new();
            for (mono, c) in &poly {
                for (k, &a) in self.forms[f].iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let mut m2 = mono.clone();
                    let pos = m2.partition_point(|&x| x <= k);
                    m2.insert(pos, k);
                    *next.entry(m2).or_insert_with(BigInt::zero) += c * a;
                }
            }
            next.retain(|_, c| !c.is_zero());
            poly = next;
        }
        poly
    }

    /// Reduced row echelon basis of the relation subspace in degree `d`.
    fn relations(&self, d: usize) -> (Vec<Vec<usize>>, Echelon) {
        let basis = multisets(self.free(), d);
        let index: HashMap<&[usize], usize> = basis.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
        let mut ech = Echelon::new(basis.len());
        for nf in &self.pres.nonfaces {
            if nf.len() > d {
                continue;
            }
            for comp in multisets(self.free(), d - nf.len()) {
                let poly = self.expand(nf, &comp);
                let mut row = vec![BigRational::zero(); basis.len()];
                for (mono, c) in poly {
                    row[index[mono.as_slice()]] = BigRational::from_integer(c);
                }
                ech.insert(row);
            }
        }
        (basis, ech)
    }
}

/// Incrementally maintained reduced row echelon form.
struct Echelon {
    width: usize,
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon { width, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &mut [BigRational]) {
        for (p, r) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let f = row[*p].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }

    fn insert(&mut self, mut row: Vec<BigRational>) {
        self.reduce(&mut row);
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { return };
        let inv = row[p].recip();
        for x in row.iter_mut() {
            *x *= &inv;
        }
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(&row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, row));
    }

    fn free_columns(&self) -> Vec<usize> {
        (0..self.width).filter(|c| self.rows.iter().all(|(p, _)| p != c)).collect()
    }
}

/// Top-degree evaluator; build once, query many monomials.
pub struct FaceRingOracle {
    ring: FaceRing,
    basis_index: HashMap<Vec<usize>, usize>,
    ech: Echelon,
    column: usize,
    /// Residual of the reference vertex monomial divided by its pairing.
    reference: BigRational,
}

impl FaceRingOracle {
    pub fn new(q: &QuasitoricPair) -> Result<Self> {
        let ring = FaceRing::new(q)?;
        let n = q.dim();
        let (basis, ech) = ring.relations(n);
        let free_cols = ech.free_columns();
        if free_cols.len() != 1 {
            return Err(Error::QuotientNotRankOne(free_cols.len()));
        }
        let basis_index = basis.into_iter().enumerate().map(|(i, b)| (b, i)).collect();
        let v = q.polytope().base_vertex();
        let sigma = vertex_frame(q, v).sign;
        let mut oracle = FaceRingOracle {
            ring,
            basis_index,
            ech,
            column: free_cols[0],
            reference: BigRational::zero(),
        };
        let r = oracle.residual(q.polytope().vertex(v));
        if r.is_zero() {
            return Err(Error::QuotientNotRankOne(0));
        }
        oracle.reference = r / BigRational::from_integer(sigma.into());
        Ok(oracle)
    }

    fn residual(&self, factors: &[usize]) -> BigRational {
        let mut row = vec![BigRational::zero(); self.basis_index.len()];
        for (mono, c) in self.ring.expand(factors, &[]) {
            row[self.basis_index[&mono]] = BigRational::from_integer(c);
        }
        self.ech.reduce(&mut row);
        row.swap_remove(self.column)
    }

    pub fn integrate(&self, mon: &Monomial) -> Result<i64> {
        if mon.exponents().len() != self.ring.pres.generators {
            return Err(Error::DimensionMismatch("monomial length differs from facet count".into()));
        }
        if mon.degree() as usize + 1 != self.ring.pres.betti.len() {
            return Ok(0);
        }
        let value = self.residual(&mon.factors()) / &self.reference;
        if !value.is_integer() {
            return Err(Error::NonIntegralResult(format!("{:?}: {value}", mon.factors())));
        }
        value.to_integer().to_i64().ok_or(Error::Overflow)
    }
}

pub fn integrate_oracle(q: &QuasitoricPair, mon: &Monomial) -> Result<i64> {
    FaceRingOracle::new(q)?.integrate(mon)
}

/// `b_0, b_2, ..., b_2n` as dimensions of the graded quotient pieces.
pub fn betti_oracle(q: &QuasitoricPair) -> Result<Vec<i64>> {
    let ring = FaceRing::new(q)?;
    Ok((0..=q.dim())
        .map(|d| {
            let (basis, ech) = ring.relations(d);
            (basis.len() - ech.rank()) as i64
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::integrate;
    use crate::qtoric::tests::{cp2, hirzebruch};

    fn mon(m: usize, f: &[usize]) -> Monomial {
        Monomial::from_factors(m, f).unwrap()
    }

    #[test]
    fn cp2_examples() {
        let q = cp2();
        assert_eq!(integrate_oracle(&q, &mon(3, &[0, 1])).unwrap(), 1);
        assert_eq!(integrate_oracle(&q, &mon(3, &[2, 2])).unwrap(), 1);
        assert_eq!(betti_oracle(&q).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn square_examples() {
        let h0 = hirzebruch(0);
        assert_eq!(integrate_oracle(&h0, &mon(4, &[0, 2])).unwrap(), 0);
        assert_eq!(betti_oracle(&h0).unwrap(), vec![1, 2, 1]);
        let h1 = hirzebruch(1);
        assert_eq!(integrate_oracle(&h1, &mon(4, &[1, 1])).unwrap(), -1);
        assert_eq!(integrate_oracle(&h1, &mon(4, &[3, 3])).unwrap(), 1);
    }

    #[test]
    fn agrees_with_localization() {
        for a in -3..=3 {
            let q = hirzebruch(a);
            let oracle = FaceRingOracle::new(&q).unwrap();
            for m in Monomial::all_of_degree(4, 2) {
                assert_eq!(oracle.integrate(&m).unwrap(), integrate(&q, &m).unwrap(), "a={a} {m:?}");
            }
        }
    }
}
