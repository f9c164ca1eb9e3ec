use fixedbitset::FixedBitSet;

use super::{Graph, VertexSet};
use crate::error::{Error, Result};

/// Default bound on the number of cliques any enumeration may return.
pub const DEFAULT_CLIQUE_CAP: usize = 200_000;

/// Inclusion-maximal cliques in lexicographic order (Bron–Kerbosch with
/// Tomita pivoting). Aborts once more than `cap` cliques are found.
pub fn maximal_cliques(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    let n = g.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    let x = FixedBitSet::with_capacity(n);
    let mut r = Vec::new();
    bron_kerbosch(g, &mut r, p, x, &mut out, cap)?;
    out.sort();
    Ok(out)
}

fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<usize>,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    out: &mut Vec<VertexSet>,
    cap: usize,
) -> Result<()> {
    if p.is_clear() {
        if x.is_clear() {
            if out.len() == cap {
                return Err(Error::CapExceeded {
                    what: "maximal clique",
                    count: cap + 1,
                    cap,
                });
            }
            out.push(VertexSet::new(r.clone()));
        }
        return Ok(());
    }
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| p.intersection(g.adjacency_row(u)).count())
        .expect("p is nonempty");
    let mut candidates = p.clone();
    candidates.difference_with(g.adjacency_row(pivot));
    for v in candidates.ones() {
        let row = g.adjacency_row(v);
        let mut p2 = p.clone();
        p2.intersect_with(row);
        let mut x2 = x.clone();
        x2.intersect_with(row);
        r.push(v);
        bron_kerbosch(g, r, p2, x2, out, cap)?;
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
    Ok(())
}

/// Maximal independent sets, i.e. maximal cliques of the complement.
pub fn maximal_independent_sets(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    maximal_cliques(&g.complement(), cap).map_err(|e| match e {
        Error::CapExceeded { count, cap, .. } => Error::CapExceeded {
            what: "maximal independent set",
            count,
            cap,
        },
        e => e,
    })
}

/// Every nonempty clique, in lexicographic order.
pub fn all_cliques(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    fn grow(
        g: &Graph,
        cur: &mut Vec<usize>,
        cand: &FixedBitSet,
        out: &mut Vec<VertexSet>,
        cap: usize,
    ) -> Result<()> {
        for v in cand.ones() {
            cur.push(v);
            if out.len() == cap {
                return Err(Error::CapExceeded {
                    what: "clique",
                    count: cap + 1,
                    cap,
                });
            }
            out.push(VertexSet::new(cur.clone()));
            let mut next = cand.clone();
            next.intersect_with(g.adjacency_row(v));
            next.remove_range(..v + 1);
            grow(g, cur, &next, out, cap)?;
            cur.pop();
        }
        Ok(())
    }
    let mut all = FixedBitSet::with_capacity(g.n());
    all.insert_range(..);
    let mut out = Vec::new();
    grow(g, &mut Vec::new(), &all, &mut out, cap)?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force_maximal_cliques(g: &Graph) -> Vec<VertexSet> {
        let n = g.n();
        let cliques: Vec<Vec<usize>> = (1u32..1 << n)
            .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect::<Vec<_>>())
            .filter(|s| g.is_clique(s))
            .collect();
        let mut out: Vec<VertexSet> = cliques
            .iter()
            .filter(|s| {
                (0..n).all(|v| {
                    s.contains(&v) || !s.iter().all(|&u| g.has_edge(u, v))
                })
            })
            .map(|s| VertexSet::new(s.clone()))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn examples() {
        let c5 = Graph::cycle(5).unwrap();
        let mc = maximal_cliques(&c5, 100).unwrap();
        let expected: Vec<VertexSet> = c5
            .edges()
            .into_iter()
            .map(|(u, v)| VertexSet::new(vec![u, v]))
            .collect();
        assert_eq!(mc, expected);
        assert_eq!(mc, brute_force_maximal_cliques(&c5));

        let k4 = Graph::complete(4).unwrap();
        assert_eq!(maximal_cliques(&k4, 100).unwrap(), vec![VertexSet::new(vec![0, 1, 2, 3])]);
        let e3 = Graph::empty(3);
        assert_eq!(maximal_cliques(&e3, 100).unwrap().len(), 3);
    }

    #[test]
    fn independent_sets() {
        let c5 = Graph::cycle(5).unwrap();
        let mis = maximal_independent_sets(&c5, 100).unwrap();
        assert_eq!(mis.len(), 5);
        assert!(mis.iter().all(|s| s.len() == 2 && c5.is_independent(s.members())));
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(maximal_independent_sets(&k3, 100).unwrap().len(), 3);
        let e4 = Graph::empty(4);
        assert_eq!(
            maximal_independent_sets(&e4, 100).unwrap(),
            vec![VertexSet::new(vec![0, 1, 2, 3])]
        );
    }

    #[test]
    fn cap_aborts() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(matches!(
            maximal_cliques(&c5, 4),
            Err(Error::CapExceeded { cap: 4, .. })
        ));
        assert!(all_cliques(&Graph::complete(5).unwrap(), 30).is_err());
        assert_eq!(all_cliques(&Graph::complete(5).unwrap(), 31).unwrap().len(), 31);
    }

    proptest! {
        #[test]
        fn matches_brute_force(n in 1usize..10, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = crate::graph::random_graph(n, p, seed);
            let mc = maximal_cliques(&g, DEFAULT_CLIQUE_CAP).unwrap();
            prop_assert_eq!(&mc, &brute_force_maximal_cliques(&g));
            for (i, a) in mc.iter().enumerate() {
                prop_assert!(g.is_clique(a.members()));
                for (j, b) in mc.iter().enumerate() {
                    prop_assert!(i == j || !a.is_subset(b));
                }
            }
            let all = all_cliques(&g, DEFAULT_CLIQUE_CAP).unwrap();
            prop_assert!(all.iter().all(|s| g.is_clique(s.members())));
            let expected = (1u32..1 << n)
                .filter(|m| g.is_clique(&(0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>()))
                .count();
            prop_assert_eq!(all.len(), expected);
        }
    }
}
