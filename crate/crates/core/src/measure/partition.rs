//! Set partitions whose blocks all have at least two elements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint blocks covering a site subset, each of size ≥ 2, at least two
/// blocks. Blocks are ordered by their first element in the input order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{{{}}}", parts.join(" | "))
    }
}

/// Every partition of `items` into at least two blocks of size at least
/// two, in the order obtained by letting the first remaining element pick
/// its block-mates lexicographically.
pub(crate) fn blocks_min2<T: Copy>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    grow(items, &mut current, &mut out);
    out.retain(|p| p.len() >= 2);
    out
}

fn grow<T: Copy>(rest: &[T], current: &mut Vec<Vec<T>>, out: &mut Vec<Vec<Vec<T>>>) {
    let Some((&first, tail)) = rest.split_first() else {
        out.push(current.clone());
        return;
    };
    // pick k ≥ 1 companions from tail, leaving either nothing or ≥ 2 items
    for k in 1..=tail.len() {
        if tail.len() - k == 1 {
            continue;
        }
        for chosen in combinations(tail.len(), k) {
            let mut block = vec![first];
            block.extend(chosen.iter().map(|&j| tail[j]));
            let remaining: Vec<T> = (0..tail.len())
                .filter(|j| !chosen.contains(j))
                .map(|j| tail[j])
                .collect();
            current.push(block);
            grow(&remaining, current, out);
            current.pop();
        }
    }
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All partitions of the site subset `sites` into ≥ 2 blocks of size ≥ 2.
///
/// Sites are sorted first, so blocks come out ordered by smallest element.
pub fn enumerate_partitions_min2(sites: &[usize]) -> Result<Vec<Partition>> {
    if sites.len() < 2 {
        return Err(Error::InvalidSubset(format!(
            "need at least two sites to partition, got {}",
            sites.len()
        )));
    }
    let mut sorted = sites.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSubset("repeated site".into()));
    }
    Ok(blocks_min2(&sorted)
        .into_iter()
        .map(|blocks| Partition { blocks })
        .collect())
}
