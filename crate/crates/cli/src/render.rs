//! Deterministic numeric formatting: 12 significant digits everywhere.

pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000000e0".to_string();
    }
    format!("{v:.11e}")
}
