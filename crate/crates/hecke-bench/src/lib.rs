//! Fixtures shared by the verifier benchmarks.

use std::sync::Arc;

use hecke::{CartanDatum, CartanType, MetaplecticDatum};

pub fn cartan(t: CartanType) -> Arc<CartanDatum> {
    Arc::new(CartanDatum::new(t).expect("supported Cartan type"))
}

/// Covers of `GL_r` used by the metaplectic benchmarks.
pub fn covers() -> Vec<(String, MetaplecticDatum)> {
    [(2, 2), (2, 3), (3, 2)]
        .into_iter()
        .map(|(r, n)| (format!("GL{r} n={n}"), MetaplecticDatum::gl(r, n).expect("valid cover")))
        .collect()
}
