//! Tie-inclusive nearest-neighbor selection.
//!
//! Selection depends only on the multiset of distances, never on row order:
//! every candidate within [`TIE_EPS`] of the k-th smallest distance is kept.

/// Distances closer than this are treated as equal.
pub const TIE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    pub row: usize,
    pub distance: f64,
}

/// The `k` nearest candidates plus everything tied with the k-th, sorted by
/// `(distance, row)`. `k` is clamped to the number of candidates.
pub fn tie_inclusive_nearest(mut candidates: Vec<Neighbor>, k: usize) -> Vec<Neighbor> {
    if candidates.is_empty() || k == 0 {
        return Vec::new();
    }
    candidates.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.row.cmp(&b.row)));
    let k = k.min(candidates.len());
    let cutoff = candidates[k - 1].distance + TIE_EPS;
    let keep = candidates.partition_point(|c| c.distance <= cutoff);
    candidates.truncate(keep);
    candidates
}

/// Weights for a tie-inclusive group so the group counts as exactly
/// `min(k, len)` neighbors: rows strictly inside the k-th distance weigh 1,
/// rows tied at it share the remaining weight equally. `group` must come from
/// [`tie_inclusive_nearest`] with the same `k`.
pub fn group_weights(group: &[Neighbor], k: usize) -> (usize, f64) {
    let k = k.min(group.len());
    if k == 0 {
        return (0, 0.0);
    }
    let kth = group[k - 1].distance;
    let strict = group.partition_point(|c| c.distance < kth - TIE_EPS);
    let tied = group.len() - strict;
    (strict, (k - strict) as f64 / tied as f64)
}
