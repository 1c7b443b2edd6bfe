//! Window sets: which of the students near position `i` may sit before it.
//!
//! Entities are identified by their base label (base position). With a
//! displacement bound `k`, every label below `i - k` must already be placed
//! before position `i` and no label above `i + k - 1` can be. Only the labels
//! in `[max(1, i-k), min(n, i+k-1)]` are undetermined; a prefix mask records
//! which of them precede position `i`.

use crate::error::{ChainError, Result};

/// Occupant of position `center` together with the set of undetermined
/// window labels placed before it. Bit `b` of `prefix_mask` stands for label
/// `window_start(center) + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WindowAssignment {
    pub center: usize,
    pub occupant: usize,
    pub prefix_mask: u64,
}

/// Labels `1..=n` with displacement bound `k` (already clamped to `n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowGeometry {
    pub n: usize,
    pub k: usize,
}

impl WindowGeometry {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let k = k.min(n);
        let width = n.min(2 * k);
        if width > 64 {
            return Err(ChainError::WindowTooWide { k, width });
        }
        Ok(WindowGeometry { n, k })
    }

    /// Number of labels that always precede position `i`: labels `1..=i-k-1`.
    #[inline]
    pub fn forced(&self, i: usize) -> usize {
        i.saturating_sub(self.k + 1)
    }

    #[inline]
    pub fn window_start(&self, i: usize) -> usize {
        i.saturating_sub(self.k).max(1)
    }

    /// Inclusive end of the undetermined window; below `window_start` when empty.
    #[inline]
    pub fn window_end(&self, i: usize) -> usize {
        (i + self.k).saturating_sub(1).min(self.n)
    }

    pub fn window_width(&self, i: usize) -> usize {
        (self.window_end(i) + 1).saturating_sub(self.window_start(i))
    }

    /// Range of labels allowed to occupy position `i`.
    pub fn occupant_range(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.k).max(1)..=(i + self.k).min(self.n)
    }

    /// Whether `label` belongs to the prefix set encoded by `wa`.
    pub fn in_prefix(&self, wa: &WindowAssignment, label: usize) -> bool {
        let i = wa.center;
        if label <= self.forced(i) {
            return label >= 1;
        }
        let start = self.window_start(i);
        if label < start || label > self.window_end(i) {
            return false;
        }
        wa.prefix_mask >> (label - start) & 1 == 1
    }

    /// Window labels marked in `wa`'s mask, ascending.
    pub fn window_members(&self, wa: &WindowAssignment) -> impl Iterator<Item = usize> {
        let start = self.window_start(wa.center);
        let mask = wa.prefix_mask;
        (0..64usize).filter(move |b| mask >> b & 1 == 1).map(move |b| start + b)
    }

    /// All labels before position `wa.center`, ascending.
    pub fn prefix_members(&self, wa: &WindowAssignment) -> impl Iterator<Item = usize> {
        (1..=self.forced(wa.center)).chain(self.window_members(wa))
    }

    /// Encodes an explicit set of window labels as a mask for position `i`.
    pub fn mask_of(&self, i: usize, labels: impl IntoIterator<Item = usize>) -> Option<u64> {
        let start = self.window_start(i);
        let end = self.window_end(i);
        let mut mask = 0u64;
        for l in labels {
            if l < start || l > end {
                return None;
            }
            mask |= 1 << (l - start);
        }
        Some(mask)
    }

    /// Decides whether a k-bounded permutation can put `occupant` at position
    /// `i` with exactly `forced ∪ mask` before it.
    ///
    /// Each label may only take positions in `[label-k, label+k]`. For such
    /// interval constraints a matching exists iff the sorted assignment works,
    /// so the prefix labels are matched to `1..i` in ascending order and the
    /// remaining labels to `i+1..` in ascending order.
    pub fn is_realizable(&self, i: usize, occupant: usize, mask: u64) -> bool {
        let k = self.k;
        if occupant.abs_diff(i) > k || occupant < 1 || occupant > self.n {
            return false;
        }
        let start = self.window_start(i);
        let width = self.window_width(i);
        if width < 64 && mask >> width != 0 {
            return false;
        }
        if occupant >= start && occupant < start + width && mask >> (occupant - start) & 1 == 1 {
            return false;
        }
        let mut pos = self.forced(i);
        for b in 0..width {
            if mask >> b & 1 == 1 {
                pos += 1;
                if (start + b).abs_diff(pos) > k {
                    return false;
                }
            }
        }
        if pos + 1 != i {
            return false;
        }
        for label in start..=(i + k).min(self.n) {
            let in_mask = label < start + width && mask >> (label - start) & 1 == 1;
            if in_mask || label == occupant {
                continue;
            }
            pos += 1;
            if pos == i {
                pos += 1;
            }
            if label.abs_diff(pos) > k {
                return false;
            }
        }
        true
    }
}

/// How window sets are decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowMethod {
    /// Sorted (Hall-condition) matching per candidate subset.
    #[default]
    Matching,
    /// Enumerate every k-bounded permutation of the relevant labels. Exponential
    /// in `i`; meant for cross-checking on small instances.
    Exhaustive,
}

/// Every prefix mask (over the window of `i`) that can precede `occupant` at
/// position `i` in some k-bounded permutation of `1..=n_side`.
pub fn enumerate_window_sets(i: usize, occupant: usize, k: usize, n_side: usize) -> Result<Vec<u64>> {
    enumerate_window_sets_with(i, occupant, k, n_side, WindowMethod::Matching)
}

pub fn enumerate_window_sets_with(
    i: usize,
    occupant: usize,
    k: usize,
    n_side: usize,
    method: WindowMethod,
) -> Result<Vec<u64>> {
    let geo = WindowGeometry::new(n_side, k)?;
    if i == 0 || i > n_side || !geo.occupant_range(i).contains(&occupant) {
        return Ok(Vec::new());
    }
    Ok(match method {
        WindowMethod::Matching => matching_sets(&geo, i, occupant),
        WindowMethod::Exhaustive => exhaustive_sets(&geo, i, occupant),
    })
}

fn matching_sets(geo: &WindowGeometry, i: usize, occupant: usize) -> Vec<u64> {
    let width = geo.window_width(i);
    let need = i - 1 - geo.forced(i);
    if need > width {
        return Vec::new();
    }
    let mut out = Vec::new();
    for_each_combination(width, need, |mask| {
        if geo.is_realizable(i, occupant, mask) {
            out.push(mask);
        }
    });
    out.sort_unstable();
    out
}

/// Calls `f` on every `width`-bit mask with exactly `ones` bits set.
fn for_each_combination(width: usize, ones: usize, mut f: impl FnMut(u64)) {
    if ones == 0 {
        f(0);
        return;
    }
    if ones > width {
        return;
    }
    let limit: u128 = 1u128 << width;
    let mut mask: u64 = if ones == 64 { u64::MAX } else { (1u64 << ones) - 1 };
    loop {
        f(mask);
        // Gosper's hack
        let c = mask & mask.wrapping_neg();
        let r = mask as u128 + c as u128;
        if r >= limit {
            break;
        }
        let r = r as u64;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

fn exhaustive_sets(geo: &WindowGeometry, i: usize, occupant: usize) -> Vec<u64> {
    let m = (i + geo.k).min(geo.n);
    let mut used = vec![false; m + 1];
    let mut perm = Vec::with_capacity(m);
    let mut out = Vec::new();
    fn rec(
        geo: &WindowGeometry,
        m: usize,
        i: usize,
        occupant: usize,
        used: &mut [bool],
        perm: &mut Vec<usize>,
        out: &mut Vec<u64>,
    ) {
        let p = perm.len() + 1;
        if p > m {
            let window = perm[..i - 1].iter().copied().filter(|&l| l > geo.forced(i));
            if let Some(mask) = geo.mask_of(i, window) {
                out.push(mask);
            }
            return;
        }
        for x in 1..=m {
            if used[x] || x.abs_diff(p) > geo.k {
                continue;
            }
            if (p == i) != (x == occupant) {
                continue;
            }
            used[x] = true;
            perm.push(x);
            rec(geo, m, i, occupant, used, perm, out);
            perm.pop();
            used[x] = false;
        }
    }
    rec(geo, m, i, occupant, &mut used, &mut perm, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}
