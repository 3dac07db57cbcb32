//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use xormagic::Mode;

/// Every labelled `d`-regular graph on `order` vertices, as adjacency matrices.
pub fn regular_graphs(order: usize, d: usize) -> Vec<Vec<Vec<bool>>> {
    fn go(
        pairs: &[(usize, usize)],
        i: usize,
        d: usize,
        deg: &mut Vec<usize>,
        adj: &mut Vec<Vec<bool>>,
        out: &mut Vec<Vec<Vec<bool>>>,
    ) {
        if i == pairs.len() {
            if deg.iter().all(|&k| k == d) {
                out.push(adj.clone());
            }
            return;
        }
        let (u, v) = pairs[i];
        // a vertex's last undecided pair closes its row
        let closes = |w: usize| pairs[i + 1..].iter().all(|&(a, b)| a != w && b != w);
        if deg[u] < d && deg[v] < d {
            deg[u] += 1;
            deg[v] += 1;
            adj[u][v] = true;
            adj[v][u] = true;
            if !(closes(u) && deg[u] != d) && !(closes(v) && deg[v] != d) {
                go(pairs, i + 1, d, deg, adj, out);
            }
            adj[u][v] = false;
            adj[v][u] = false;
            deg[u] -= 1;
            deg[v] -= 1;
        }
        if !(closes(u) && deg[u] != d) && !(closes(v) && deg[v] != d) {
            go(pairs, i + 1, d, deg, adj, out);
        }
    }
    let pairs: Vec<(usize, usize)> = (0..order)
        .flat_map(|u| (u + 1..order).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    go(
        &pairs,
        0,
        d,
        &mut vec![0; order],
        &mut vec![vec![false; order]; order],
        &mut out,
    );
    out
}

pub fn connected(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (u, row) in adj.iter().enumerate() {
        for (v, _) in row.iter().enumerate().skip(u + 1).filter(|(_, &b)| b) {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

pub fn zero_weights(adj: &[Vec<bool>], labels: &[u32], mode: Mode) -> bool {
    (0..adj.len()).all(|v| {
        let mut w = if mode == Mode::Closed { labels[v] } else { 0 };
        for u in 0..adj.len() {
            if adj[v][u] {
                w ^= labels[u];
            }
        }
        w == 0
    })
}

/// Every symmetric loop-free adjacency of the given order.
pub fn all_graphs(order: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..order)
        .flat_map(|u| (u + 1..order).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let mut adj = vec![vec![false; order]; order];
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    adj[u][v] = true;
                    adj[v][u] = true;
                }
            }
            adj
        })
        .collect()
}

/// All adjacencies when `exhaustive`, otherwise only the `d`-regular ones.
pub fn candidate_graphs(order: usize, d: usize, exhaustive: bool) -> Vec<Vec<Vec<bool>>> {
    if exhaustive {
        all_graphs(order)
    } else {
        regular_graphs(order, d)
    }
}
