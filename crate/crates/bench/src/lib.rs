//! Shared fixtures for the kernel benchmarks in `benches/`.

use std::sync::Arc;

use qkac::{Borel, CartanDatum};

/// A fresh word-basis cache, so each iteration measures the full computation.
pub fn borel(preset: &str, height: i64) -> Arc<Borel> {
    Arc::new(Borel::new(Arc::new(CartanDatum::preset(preset).expect("known preset")), height))
}
