//! Brute-force generation of small connected graphs up to isomorphism.

use std::collections::BTreeSet;

use super::{encode_graph6, Graph};
use crate::error::{Error, Result};

const MAX_ENUM_VERTICES: usize = 6;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Non-isomorphic connected graphs on exactly `n` vertices, sorted by their
/// graph6 encoding. Each representative is the labelling whose upper-triangle
/// bit string (graph6 order) is lexicographically smallest.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_ENUM_VERTICES {
        return Err(Error::TooLarge {
            n,
            limit: MAX_ENUM_VERTICES,
        });
    }
    if n <= 1 {
        return Ok(vec![Graph::empty(n)]);
    }
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let index = |a: usize, b: usize| {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        j * (j - 1) / 2 + i
    };
    let m = pairs.len();
    // bit k of a mask is pair k; graph6 order reads pair 0 as the most significant bit
    let perms: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|p| pairs.iter().map(|&(i, j)| index(p[i], p[j])).collect())
        .collect();
    let to_key = |mask: u32| -> u32 {
        let mut key = 0u32;
        for k in 0..m {
            key = (key << 1) | (mask >> k & 1);
        }
        key
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << m {
        let mut g = Graph::empty(n);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                g.add_edge_unchecked(i, j);
            }
        }
        if !g.is_connected() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut image = 0u32;
                for (k, &t) in p.iter().enumerate() {
                    image |= (mask >> k & 1) << t;
                }
                to_key(image)
            })
            .min()
            .expect("at least one permutation");
        if seen.insert(canon) {
            let mut c = Graph::empty(n);
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if canon >> (m - 1 - k) & 1 == 1 {
                    c.add_edge_unchecked(i, j);
                }
            }
            out.push(c);
        }
    }
    out.sort_by_key(encode_graph6);
    Ok(out)
}

/// Connected graphs on `1..=max_n` vertices.
pub fn connected_graphs_upto(max_n: usize) -> Result<Vec<Graph>> {
    let mut all = Vec::new();
    for n in 1..=max_n {
        all.extend(connected_graphs(n)?);
    }
    Ok(all)
}
