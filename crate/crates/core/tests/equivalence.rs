mod common;

use qtoric::cohomology::{char_numbers, char_numbers_match, char_numbers_match_omni};
use qtoric::families::{hirzebruch, prism_family, product_family};
use qtoric::lattice::IntMatrix;
use qtoric::{canonical_form, strong_equiv, weak_equiv, FacetBijection, Twist};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{corpus, random_relabel, random_twist};

#[test]
fn twists_keep_the_canonical_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, q) in corpus() {
        let form = canonical_form(&q).unwrap();
        for _ in 0..20 {
            let t = q.twisted(&random_twist(&q, &mut rng)).unwrap();
            assert_eq!(canonical_form(&t).unwrap().to_bytes(), form.to_bytes(), "{name}");
        }
    }
}

#[test]
fn canonical_form_is_deterministic() {
    let q = prism_family(4, 1).unwrap();
    let a = canonical_form(&q).unwrap().to_string();
    for _ in 0..3 {
        assert_eq!(canonical_form(&q).unwrap().to_string(), a);
    }
}

#[test]
fn strong_equivalence_ignores_only_relabeling_and_signs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (name, q) in corpus() {
        let m = q.facet_count();
        let t = Twist {
            relabel: random_relabel(m, &mut rng),
            matrix: IntMatrix::identity(q.dim()),
            signs: (0..m).map(|j| if j % 2 == 0 { -1 } else { 1 }).collect(),
        };
        let target = q.twisted(&t).unwrap();
        let w = strong_equiv(&q, &target).unwrap().unwrap_or_else(|| panic!("{name}"));
        assert!(w.maps(&q, &target));
        assert_eq!(w.matrix, IntMatrix::identity(q.dim()));
    }
}

#[test]
fn distinct_hirzebruch_surfaces() {
    for a in 0..=4i64 {
        for b in 0..=4i64 {
            let e = weak_equiv(&hirzebruch(a).unwrap(), &hirzebruch(b).unwrap()).unwrap().is_some();
            assert_eq!(e, a == b, "H{a} vs H{b}");
        }
    }
}

#[test]
fn prism_pairs_follow_the_k_rule() {
    for n in 3..=6 {
        for k in 0..=n {
            for l in 0..=n {
                let same = canonical_form(&prism_family(n, k).unwrap()).unwrap()
                    == canonical_form(&prism_family(n, l).unwrap()).unwrap();
                // flipping E1 and reversing the coordinates sends k to n - k
                let expected = k == l || k + l == n;
                assert_eq!(same, expected, "n={n} k={k} l={l}");
            }
        }
    }
}

#[test]
fn product_matches_hirzebruch_zero() {
    let w = weak_equiv(&product_family(&[1, 1]).unwrap(), &hirzebruch(0).unwrap()).unwrap();
    assert!(w.is_some());
}

#[test]
fn char_numbers_follow_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, q) in corpus() {
        let pi = random_relabel(q.facet_count(), &mut rng);
        let t = q
            .twisted(&Twist { relabel: pi, ..Twist::identity(q.dim(), q.facet_count()) })
            .unwrap();
        assert!(char_numbers_match(&q, &t).unwrap().is_some(), "{name}");
    }
}

#[test]
fn sign_flips_act_per_monomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, q) in corpus() {
        let twist = random_twist(&q, &mut rng);
        let t = q.twisted(&twist).unwrap();
        let m = char_numbers_match_omni(&q, &t).unwrap().unwrap_or_else(|| panic!("{name}"));
        let (a, b) = (char_numbers(&q).unwrap(), char_numbers(&t).unwrap());
        for (f, x) in &a.entries {
            let mut img: Vec<usize> = f.iter().map(|&j| m.relabel.apply(j)).collect();
            img.sort_unstable();
            let sign: i64 = m.orientation * f.iter().map(|&j| m.signs[j]).product::<i64>();
            assert_eq!(b.get(&img).unwrap(), sign * x, "{name} {f:?}");
        }
    }
}

#[test]
fn witness_maps_relabeled_hirzebruch() {
    let q = hirzebruch(3).unwrap();
    let t = q
        .twisted(&Twist {
            relabel: FacetBijection(vec![3, 0, 1, 2]),
            matrix: IntMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap(),
            signs: vec![1, -1, -1, 1],
        })
        .unwrap();
    assert!(weak_equiv(&q, &t).unwrap().unwrap().maps(&q, &t));
}

#[test]
fn coordinate_swap_is_weak_but_not_strong() {
    let q = hirzebruch(2).unwrap();
    let swapped = q
        .twisted(&Twist { matrix: IntMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap(), ..Twist::identity(2, 4) })
        .unwrap();
    assert!(strong_equiv(&q, &swapped).unwrap().is_none());
    assert!(weak_equiv(&q, &swapped).unwrap().is_some());
}
