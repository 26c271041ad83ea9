//! Small numeric helpers with order-independent results.

/// Sum whose value does not depend on the order of `values`: the terms are
/// sorted before accumulation.
pub fn canonical_sum(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

/// Empirical quantile of sorted data with linear interpolation between order
/// statistics (the "type 7" definition). `p` in `[0, 1]`; `sorted` non-empty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
