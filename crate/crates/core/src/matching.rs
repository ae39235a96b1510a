//! Maximum bipartite matching with a Hall-violation certificate on failure.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum matching by shortest augmenting paths (Hopcroft–Karp), O(E √V).
///
/// `adj[u]` lists the right-hand neighbours of left vertex `u`. Returns, for
/// every left vertex, its matched right vertex.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut mate_l = vec![NIL; left];
    let mut mate_r = vec![NIL; right];
    let mut dist = vec![0usize; left];
    loop {
        // layer the graph from free left vertices
        let mut queue = VecDeque::new();
        for u in 0..left {
            if mate_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = NIL;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = mate_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == NIL {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..left {
            if mate_l[u] == NIL {
                augment(u, adj, &mut mate_l, &mut mate_r, &mut dist);
            }
        }
    }
    mate_l.into_iter().map(|v| (v != NIL).then_some(v)).collect()
}

fn augment(
    root: usize,
    adj: &[Vec<usize>],
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    // iterative DFS along the BFS layers
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    let mut path: Vec<(usize, usize)> = Vec::new();
    while let Some(&mut (u, ref mut next)) = stack.last_mut() {
        if *next >= adj[u].len() {
            dist[u] = NIL;
            stack.pop();
            path.pop();
            continue;
        }
        let v = adj[u][*next];
        *next += 1;
        let w = mate_r[v];
        if w == NIL {
            path.push((u, v));
            for &(pu, pv) in &path {
                mate_l[pu] = pv;
                mate_r[pv] = pu;
            }
            return true;
        }
        if dist[w] != NIL && dist[w] == dist[u] + 1 {
            path.push((u, v));
            stack.push((w, 0));
        }
    }
    false
}

/// Left vertices reachable from unmatched left vertices by alternating paths,
/// and their neighbourhood. When the matching is maximum and some left vertex
/// is unmatched, `|neighbourhood| < |reachable|`.
pub fn hall_violator(
    adj: &[Vec<usize>],
    right: usize,
    mate_l: &[Option<usize>],
) -> (Vec<usize>, Vec<usize>) {
    let mut mate_r = vec![NIL; right];
    for (u, m) in mate_l.iter().enumerate() {
        if let Some(v) = *m {
            mate_r[v] = u;
        }
    }
    let mut seen_l = vec![false; adj.len()];
    let mut seen_r = vec![false; right];
    let mut queue: VecDeque<usize> = (0..adj.len()).filter(|&u| mate_l[u].is_none()).collect();
    for &u in &queue {
        seen_l[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen_r[v] {
                seen_r[v] = true;
                let w = mate_r[v];
                if w != NIL && !seen_l[w] {
                    seen_l[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let s = (0..adj.len()).filter(|&u| seen_l[u]).collect();
    let t = (0..right).filter(|&v| seen_r[v]).collect();
    (s, t)
}
