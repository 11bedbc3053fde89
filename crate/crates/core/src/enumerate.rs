//! Isomorph-free generation of small connected graphs and trees.
//!
//! Connected graphs on `n` vertices come from connected graphs on `n - 1`
//! vertices by adding a vertex joined to a nonempty subset; every connected
//! graph arises this way because it has a vertex whose removal keeps it
//! connected. Duplicates are removed with a canonical code computed by
//! individualisation and refinement. Trees grow by adding leaves and are
//! deduplicated by the AHU encoding rooted at the centre.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Largest order accepted by [`canonical_code`].
pub const MAX_CANON_ORDER: usize = 16;
/// Largest order generated by [`connected_graphs`].
pub const MAX_CONNECTED_ORDER: usize = 9;
/// Largest order generated by [`trees`].
pub const MAX_TREE_ORDER: usize = 20;

/// Adjacency rows as bitmasks.
pub type Bits = Vec<u16>;

fn bits_of(g: &WeightedGraph) -> Result<Bits> {
    let n = g.order();
    if n > MAX_CANON_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    let mut adj = vec![0u16; n];
    for e in g.edges() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
    }
    Ok(adj)
}

fn code_of(adj: &[u16], order: &[usize]) -> u128 {
    let n = order.len();
    let mut code = 0u128;
    for i in 0..n {
        for j in i + 1..n {
            code <<= 1;
            if adj[order[i]] >> order[j] & 1 == 1 {
                code |= 1;
            }
        }
    }
    code
}

fn graph_from_code(n: usize, code: u128) -> WeightedGraph {
    let pairs = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if code >> (pairs - 1 - k) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    WeightedGraph::unweighted(n, edges).expect("decoded code is a simple graph")
}

/// Splits cells until every vertex of a cell has the same number of
/// neighbours in every cell. Cells split in increasing order of that count,
/// so the result depends only on the isomorphism class of the
/// (graph, ordered partition) pair.
fn refine(adj: &[u16], cells: &mut Vec<Vec<usize>>) {
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            let mask: u16 = cells[s].iter().fold(0, |m, &x| m | 1 << x);
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
                for &x in cell {
                    groups
                        .entry((adj[x] & mask).count_ones())
                        .or_default()
                        .push(x);
                }
                if groups.len() > 1 {
                    changed = true;
                }
                next.extend(groups.into_values());
            }
            *cells = next;
            s += 1;
        }
        if !changed {
            return;
        }
    }
}

struct Search<'a> {
    adj: &'a [u16],
    best: Option<(u128, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, mut cells: Vec<Vec<usize>>, fixed: &mut Vec<usize>) {
        refine(self.adj, &mut cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let code = code_of(self.adj, &order);
            match &self.best {
                Some((b, perm)) if *b == code => {
                    let mut gamma = vec![0; order.len()];
                    for (&a, &b) in perm.iter().zip(&order) {
                        gamma[a] = b;
                    }
                    self.automorphisms.push(gamma);
                }
                Some((b, _)) if *b > code => {}
                _ => self.best = Some((code, order)),
            }
            return;
        };
        let cell = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &x in &cell {
            if explored.iter().any(|&y| self.same_orbit(fixed, y, x)) {
                continue;
            }
            explored.push(x);
            let mut child = cells.clone();
            let rest: Vec<usize> = cell.iter().copied().filter(|&y| y != x).collect();
            child.splice(target..=target, [vec![x], rest]);
            fixed.push(x);
            self.run(child, fixed);
            fixed.pop();
        }
    }

    /// Whether the automorphisms found so far that fix `fixed` pointwise
    /// move `a` to `b`.
    fn same_orbit(&self, fixed: &[usize], a: usize, b: usize) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .automorphisms
            .iter()
            .filter(|g| fixed.iter().all(|&f| g[f] == f))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut seen: u16 = 1 << a;
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            for g in &gens {
                let y = g[x];
                if seen >> y & 1 == 0 {
                    seen |= 1 << y;
                    stack.push(y);
                }
            }
        }
        false
    }
}

fn canonical_bits(adj: &[u16]) -> (u128, Vec<usize>) {
    let n = adj.len();
    if n == 0 {
        return (0, Vec::new());
    }
    let mut s = Search {
        adj,
        best: None,
        automorphisms: Vec::new(),
    };
    s.run(vec![(0..n).collect()], &mut Vec::new());
    s.best.expect("search reaches a leaf")
}

/// Canonical code of a simple graph: equal codes for graphs of the same
/// order exactly when they are isomorphic. Weights are ignored.
pub fn canonical_code(g: &WeightedGraph) -> Result<u128> {
    Ok(canonical_bits(&bits_of(g)?).0)
}

/// The canonically relabelled copy of `g`.
pub fn canonical_form(g: &WeightedGraph) -> Result<WeightedGraph> {
    Ok(graph_from_code(g.order(), canonical_code(g)?))
}

pub fn are_isomorphic(a: &WeightedGraph, b: &WeightedGraph) -> Result<bool> {
    Ok(a.order() == b.order() && a.size() == b.size() && canonical_code(a)? == canonical_code(b)?)
}

fn extend(n: usize, parents: &[u128]) -> Vec<u128> {
    let set: BTreeSet<u128> = parents
        .par_iter()
        .flat_map_iter(|&code| {
            let mut adj = bits_of(&graph_from_code(n - 1, code)).expect("small order");
            adj.push(0);
            let mut out = Vec::with_capacity(1 << (n - 1));
            for subset in 1u16..(1 << (n - 1)) {
                let mut a = adj.clone();
                a[n - 1] = subset;
                for (x, row) in a.iter_mut().enumerate().take(n - 1) {
                    if subset >> x & 1 == 1 {
                        *row |= 1 << (n - 1);
                    }
                }
                out.push(canonical_bits(&a).0);
            }
            out
        })
        .collect();
    set.into_iter().collect()
}

/// One representative of every isomorphism class of connected graphs on
/// `n` vertices, `1 <= n <= 9`, in canonical labelling and increasing
/// canonical code.
pub fn connected_graphs(n: usize) -> Result<Vec<WeightedGraph>> {
    if n == 0 || n > MAX_CONNECTED_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    let mut codes = vec![0u128];
    for k in 2..=n {
        codes = extend(k, &codes);
    }
    Ok(codes.into_iter().map(|c| graph_from_code(n, c)).collect())
}

/// AHU encoding of the subtree of `root` away from `parent`.
fn ahu(adj: &[Vec<usize>], root: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[root]
        .iter()
        .filter(|&&c| c != parent)
        .map(|&c| ahu(adj, c, root))
        .collect();
    kids.sort_unstable();
    let mut s = String::from("(");
    for k in kids {
        s.push_str(&k);
    }
    s.push(')');
    s
}

fn centres(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&x| deg[x] == 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &x in &layer {
            for &y in &adj[x] {
                deg[y] -= 1;
                if deg[y] == 1 {
                    next.push(y);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Canonical string of a free tree given by adjacency lists.
pub fn tree_code(adj: &[Vec<usize>]) -> String {
    centres(adj)
        .into_iter()
        .map(|c| ahu(adj, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

fn tree_from_code(code: &str) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0;
    for ch in code.chars() {
        if ch == '(' {
            if let Some(&p) = stack.last() {
                edges.push((p, next));
            }
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
        }
    }
    edges
}

/// One representative of every isomorphism class of trees on `n`
/// vertices, `1 <= n <= 20`, sorted by canonical string.
pub fn trees(n: usize) -> Result<Vec<WeightedGraph>> {
    if n == 0 || n > MAX_TREE_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    let mut codes: BTreeSet<String> = BTreeSet::from(["()".to_string()]);
    for k in 2..=n {
        codes = codes
            .par_iter()
            .flat_map_iter(|code| {
                let edges = tree_from_code(code);
                let mut adj = vec![Vec::new(); k];
                for &(a, b) in &edges {
                    adj[a].push(b);
                    adj[b].push(a);
                }
                (0..k - 1)
                    .map(|x| {
                        let mut a = adj.clone();
                        a[x].push(k - 1);
                        a[k - 1].push(x);
                        tree_code(&a)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(codes
        .into_iter()
        .map(|c| WeightedGraph::unweighted(n, tree_from_code(&c)).expect("tree code is valid"))
        .collect())
}
