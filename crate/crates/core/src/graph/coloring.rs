use super::cliques::{maximal_cliques, DEFAULT_CLIQUE_CAP};
use super::Graph;
use crate::error::{Error, Result};

/// Largest vertex count accepted by the exact exponential searches.
pub const EXACT_VERTEX_LIMIT: usize = 20;

fn guard(g: &Graph) -> Result<()> {
    if g.n() > EXACT_VERTEX_LIMIT {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: EXACT_VERTEX_LIMIT,
        });
    }
    Ok(())
}

pub fn clique_number(g: &Graph) -> Result<usize> {
    guard(g)?;
    Ok(maximal_cliques(g, DEFAULT_CLIQUE_CAP)?
        .iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(0))
}

pub fn independence_number(g: &Graph) -> Result<usize> {
    clique_number(&g.complement())
}

pub fn is_proper_coloring(g: &Graph, coloring: &[usize]) -> bool {
    coloring.len() == g.n() && g.edges().iter().all(|&(u, v)| coloring[u] != coloring[v])
}

/// Exact chromatic number by trying `k = omega, omega+1, ...`.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    guard(g)?;
    if g.n() == 0 {
        return Ok(0);
    }
    let mut k = clique_number(g)?.max(1);
    loop {
        if search(g, k).is_some() {
            return Ok(k);
        }
        k += 1;
    }
}

/// A proper coloring with colors `0..k`, if one exists.
pub fn find_coloring(g: &Graph, k: usize) -> Result<Option<Vec<usize>>> {
    guard(g)?;
    Ok(search(g, k))
}

/// DSATUR-ordered backtracking with symmetry breaking on fresh colors.
fn search(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.n();
    if n == 0 {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let mut colors = vec![usize::MAX; n];
    if backtrack(g, k, &mut colors, 0, 0) {
        Some(colors)
    } else {
        None
    }
}

fn backtrack(g: &Graph, k: usize, colors: &mut [usize], done: usize, used: usize) -> bool {
    let n = g.n();
    if done == n {
        return true;
    }
    // pick the uncolored vertex with most distinct neighbor colors, then degree
    let mut best = usize::MAX;
    let mut best_key = (0, 0);
    let mut best_forbidden = 0u64;
    for v in 0..n {
        if colors[v] != usize::MAX {
            continue;
        }
        let mut forbidden = 0u64;
        for w in g.neighbors(v) {
            if colors[w] != usize::MAX {
                forbidden |= 1 << colors[w];
            }
        }
        let key = (forbidden.count_ones() as usize, g.degree(v));
        if best == usize::MAX || key > best_key {
            best = v;
            best_key = key;
            best_forbidden = forbidden;
        }
    }
    let v = best;
    for col in 0..k.min(used + 1) {
        if best_forbidden >> col & 1 == 1 {
            continue;
        }
        colors[v] = col;
        if backtrack(g, k, colors, done + 1, used.max(col + 1)) {
            return true;
        }
    }
    colors[v] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_chromatic(g: &Graph) -> usize {
        let n = g.n();
        for k in 1..=n {
            let total = k.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let col: Vec<usize> = (0..n)
                    .map(|_| {
                        let x = c % k;
                        c /= k;
                        x
                    })
                    .collect();
                if is_proper_coloring(g, &col) {
                    return k;
                }
            }
        }
        0
    }

    #[test]
    fn small_values() {
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(chromatic_number(&c5).unwrap(), 3);
        assert_eq!(clique_number(&c5).unwrap(), 2);
        assert_eq!(independence_number(&c5).unwrap(), 2);
        for n in 1..7 {
            let k = Graph::complete(n).unwrap();
            assert_eq!(chromatic_number(&k).unwrap(), n);
            assert_eq!(clique_number(&k).unwrap(), n);
        }
        assert_eq!(chromatic_number(&Graph::petersen()).unwrap(), 3);
    }

    #[test]
    fn products_of_c5_and_k3() {
        let c5 = Graph::cycle(5).unwrap();
        let k3 = Graph::complete(3).unwrap();
        // The OR product with K3 joins three copies of C5, so each copy needs
        // its own three colors.
        let disj = c5.disjunctive_product(&k3);
        assert_eq!(chromatic_number(&disj).unwrap(), 9);
        assert!(find_coloring(&disj, 8).unwrap().is_none());
        // C5[K3] is colored by 8 colors: ceil(5 * 3 / 2).
        let lex = c5.lexicographic_product(&k3);
        assert_eq!(chromatic_number(&lex).unwrap(), 8);
        assert!(find_coloring(&lex, 7).unwrap().is_none());
        assert!(is_proper_coloring(&lex, &find_coloring(&lex, 8).unwrap().unwrap()));
    }

    #[test]
    fn size_guard_refuses() {
        let big = Graph::cycle(EXACT_VERTEX_LIMIT + 1).unwrap();
        assert!(matches!(chromatic_number(&big), Err(Error::TooLarge { .. })));
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(n in 1usize..7, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = crate::graph::random_graph(n, p, seed);
            let chi = chromatic_number(&g).unwrap();
            prop_assert_eq!(chi, brute_chromatic(&g));
            prop_assert!(clique_number(&g).unwrap() <= chi);
            prop_assert_eq!(independence_number(&g).unwrap(), clique_number(&g.complement()).unwrap());
        }
    }
}
