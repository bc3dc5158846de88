#![allow(dead_code)]

use qtoric::families::{hirzebruch, prism_family, product_family, projective_space};
use qtoric::lattice::{det, IntMatrix};
use qtoric::{FacetBijection, QuasitoricPair, Twist};
use rand::seq::SliceRandom;
use rand::Rng;

/// Small named instances used across the cross-checks.
pub fn corpus() -> Vec<(String, QuasitoricPair)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push((format!("CP{n}"), projective_space(n).unwrap()));
    }
    out.push(("CP1xCP1".into(), product_family(&[1, 1]).unwrap()));
    out.push(("CP1xCP2".into(), product_family(&[1, 2]).unwrap()));
    for a in -3..=3 {
        out.push((format!("H{a}"), hirzebruch(a).unwrap()));
    }
    for k in 0..=2 {
        out.push((format!("prism(2,{k})"), prism_family(2, k).unwrap()));
    }
    for k in 0..=3 {
        out.push((format!("prism(3,{k})"), prism_family(3, k).unwrap()));
    }
    out
}

/// A random element of `GL(n, Z)` built from elementary moves.
pub fn random_gl<R: Rng>(n: usize, rng: &mut R) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    if n > 1 {
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c = if rng.gen_bool(0.5) { 1 } else { -1 };
            for k in 0..n {
                rows[i][k] += c * rows[j][k];
            }
        }
        rows.shuffle(rng);
    }
    for row in rows.iter_mut() {
        if rng.gen_bool(0.5) {
            row.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let m = IntMatrix::from_rows(&rows).unwrap();
    assert_eq!(det(&m).unwrap().abs(), 1);
    m
}

pub fn random_relabel<R: Rng>(m: usize, rng: &mut R) -> FacetBijection {
    let mut p: Vec<usize> = (0..m).collect();
    p.shuffle(rng);
    FacetBijection(p)
}

pub fn random_twist<R: Rng>(q: &QuasitoricPair, rng: &mut R) -> Twist {
    let m = q.facet_count();
    Twist {
        relabel: random_relabel(m, rng),
        matrix: random_gl(q.dim(), rng),
        signs: (0..m).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect(),
    }
}

/// Columns agree up to sign.
pub fn same_up_to_signs(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.rows() == b.rows()
        && a.cols() == b.cols()
        && (0..a.cols()).all(|j| a.column(j).sign_normalized() == b.column(j).sign_normalized())
}
