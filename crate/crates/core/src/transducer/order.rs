// SPDX-License-Identifier: Apache-2.0

//! Incremental lexicographic ordering of several streams.
//!
//! After `d` columns the tracker holds the stream indices sorted by their
//! length-`d` prefixes, grouped into runs of equal prefixes. Refining by the
//! next column splits every group into its 0-extensions followed by its
//! 1-extensions, so the element at sorted position `k` always carries the
//! `k`-th smallest prefix, which is a prefix of the `k`-th smallest stream.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct OrderTracker {
    order: Vec<u8>,
    /// `tied[p]`: the stream at position `p` equals the one at `p - 1` so far.
    tied: Vec<bool>,
    next_order: Vec<u8>,
    next_tied: Vec<bool>,
}

impl OrderTracker {
    pub(crate) fn new(n: usize) -> Self {
        debug_assert!(n <= u8::MAX as usize);
        OrderTracker {
            order: (0..n as u8).collect(),
            tied: (0..n).map(|p| p > 0).collect(),
            next_order: Vec::with_capacity(n),
            next_tied: Vec::with_capacity(n),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.order.len()
    }

    pub(crate) fn refine(&mut self, column: &[bool]) {
        let n = self.order.len();
        self.next_order.clear();
        self.next_tied.clear();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && self.tied[end] {
                end += 1;
            }
            for want in [false, true] {
                let mut first = true;
                for p in start..end {
                    let i = self.order[p];
                    if column[i as usize] == want {
                        self.next_order.push(i);
                        self.next_tied.push(!first);
                        first = false;
                    }
                }
            }
            start = end;
        }
        std::mem::swap(&mut self.order, &mut self.next_order);
        std::mem::swap(&mut self.tied, &mut self.next_tied);
    }

    /// Stream index at sorted position `p` (0-based).
    pub(crate) fn at(&self, p: usize) -> usize {
        self.order[p] as usize
    }

    pub(crate) fn tied_with_previous(&self, p: usize) -> bool {
        self.tied[p]
    }

    /// True when the stream at position `p` is strictly separated from all
    /// others, so its rank can no longer change.
    pub(crate) fn isolated(&self, p: usize) -> bool {
        !self.tied[p] && (p + 1 == self.order.len() || !self.tied[p + 1])
    }

    /// Stream index of the `k`-th smallest (0-based) among streams in `mask`.
    pub(crate) fn rank_in(&self, mask: u32, k: usize) -> usize {
        self.order
            .iter()
            .map(|&i| i as usize)
            .filter(|&i| mask >> i & 1 == 1)
            .nth(k)
            .expect("rank within subset")
    }

    pub(crate) fn position_of(&self, i: usize) -> usize {
        self.order.iter().position(|&x| x as usize == i).expect("tracked index")
    }

    pub(crate) fn key(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.order);
        out.extend(self.tied.iter().map(|&t| u8::from(t)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_prefixes(streams: &[Vec<bool>], d: usize) -> Vec<Vec<bool>> {
        let mut p: Vec<Vec<bool>> = streams.iter().map(|s| s[..d].to_vec()).collect();
        p.sort();
        p
    }

    #[test]
    fn ranks_follow_sorted_prefixes() {
        let streams: Vec<Vec<bool>> = ["0110", "0101", "0110", "1000", "0000"]
            .iter()
            .map(|s| s.chars().map(|c| c == '1').collect())
            .collect();
        let mut t = OrderTracker::new(streams.len());
        for d in 0..4 {
            let col: Vec<bool> = streams.iter().map(|s| s[d]).collect();
            t.refine(&col);
            let expect = sorted_prefixes(&streams, d + 1);
            for (p, e) in expect.iter().enumerate() {
                assert_eq!(&streams[t.at(p)][..d + 1], &e[..]);
            }
        }
        // "0110" twice stays tied; "0000" and "1000" are isolated.
        let p0 = t.position_of(0);
        let p2 = t.position_of(2);
        assert_eq!(p0.abs_diff(p2), 1);
        assert!(t.tied_with_previous(p0.max(p2)));
        assert!(t.isolated(t.position_of(4)));
        assert_eq!(t.rank_in(0b01011, 0), 1);
    }
}
