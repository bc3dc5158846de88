//! Shared inputs for the criterion benches.

use qtoric::families::{hirzebruch, prism_family, product_family, projective_space};
use qtoric::QuasitoricPair;

/// Named instances of increasing size.
pub fn fixtures() -> Vec<(&'static str, QuasitoricPair)> {
    vec![
        ("H3", hirzebruch(3).unwrap()),
        ("CP4", projective_space(4).unwrap()),
        ("CP2xCP2", product_family(&[2, 2]).unwrap()),
        ("CP2xCP3", product_family(&[2, 3]).unwrap()),
        ("prism(4,1)", prism_family(4, 1).unwrap()),
        ("prism(6,1)", prism_family(6, 1).unwrap()),
    ]
}
