//! Closed-form magnetization for the long-range Ising chain prepared in
//! `|00..0>`: every other site contributes one cosine factor.

/// `<sz_n>(t) = prod_{k != n} cos(2 J t / |n - k|^delta)` for an `n_sites`
/// chain (1-based `site`), no channel involved.
pub fn longrange_ising_sz(site: usize, t: f64, n_sites: usize, j: f64, delta: f64) -> f64 {
    (1..=n_sites)
        .filter(|&k| k != site)
        .map(|k| (2.0 * j * t / (site.abs_diff(k) as f64).powf(delta)).cos())
        .product()
}
