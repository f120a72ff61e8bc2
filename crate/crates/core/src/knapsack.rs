//! Subset-sum knapsack used by the tree solver.
//!
//! Item sizes equal their values, so the problem is: pick a subset whose total
//! is as large as possible without exceeding the capacity.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackSolution {
    /// Selected item indices, ascending.
    pub selected: Vec<usize>,
    pub total: usize,
}

/// Maximizes the selected total subject to `total <= capacity`.
///
/// Among all optimal subsets the one whose ascending index list is
/// lexicographically smallest is returned. Runs in `O(items * capacity)`.
pub fn knapsack_max(items: &[usize], capacity: usize) -> KnapsackSolution {
    let k = items.len();
    let width = capacity + 1;
    // reach[i * width + w]: some subset of items[i..] sums to exactly w
    let mut reach = vec![false; (k + 1) * width];
    reach[k * width] = true;
    for i in (0..k).rev() {
        let (head, tail) = reach.split_at_mut((i + 1) * width);
        let row = &mut head[i * width..];
        let next = &tail[..width];
        row.copy_from_slice(next);
        let size = items[i];
        if size <= capacity {
            for w in size..width {
                if next[w - size] {
                    row[w] = true;
                }
            }
        }
    }
    let total = (0..width).rev().find(|&w| reach[w]).unwrap_or(0);

    let mut selected = Vec::new();
    let mut remaining = total;
    for (i, &size) in items.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if size <= remaining && reach[(i + 1) * width + remaining - size] {
            selected.push(i);
            remaining -= size;
        }
    }
    KnapsackSolution { selected, total }
}

#[cfg(test)]
pub(crate) mod brute {
    use super::KnapsackSolution;

    /// Enumerates every subset; keeps the best total, then the
    /// lexicographically smallest ascending index list.
    pub fn knapsack_brute(items: &[usize], capacity: usize) -> KnapsackSolution {
        let mut best: Option<KnapsackSolution> = None;
        for mask in 0u32..(1 << items.len()) {
            let selected: Vec<usize> = (0..items.len()).filter(|i| mask >> i & 1 == 1).collect();
            let total: usize = selected.iter().map(|&i| items[i]).sum();
            if total > capacity {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => total > b.total || (total == b.total && selected < b.selected),
            };
            if better {
                best = Some(KnapsackSolution { selected, total });
            }
        }
        best.expect("empty subset is always admissible")
    }
}
