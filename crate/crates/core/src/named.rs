//! Constructors for the concrete graphs studied here. Vertices are 0-based.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Petersen graph. Indices 0..5 are the outer cycle, 5..10 the inner
/// pentagram, with spokes `i -- i + 5`. Designated pair: the adjacent
/// vertices 0 and 1.
pub fn petersen() -> WeightedGraph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    WeightedGraph::unweighted(10, edges)
        .and_then(|g| g.with_pair(0, 1))
        .expect("petersen is valid")
        .with_label("petersen")
}

/// The 11-vertex planar graph with adjacency peak transfer over distance 4.
/// Designated pair: `u = 2`, `v = 9`.
pub fn g11() -> WeightedGraph {
    const EDGES: [(usize, usize); 21] = [
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 2),
        (1, 3),
        (2, 3),
        (0, 5),
        (1, 8),
        (3, 4),
        (4, 6),
        (4, 7),
        (5, 6),
        (6, 7),
        (7, 8),
        (6, 9),
        (7, 9),
        (5, 10),
        (6, 10),
        (7, 10),
        (8, 10),
        (9, 10),
    ];
    WeightedGraph::unweighted(11, EDGES)
        .and_then(|g| g.with_pair(2, 9))
        .expect("g11 is valid")
        .with_label("g11")
}

/// The 12-vertex self-dual planar graph with Laplacian peak transfer.
/// Designated pair: `u = 0`, `v = 8`.
pub fn g12() -> WeightedGraph {
    const EDGES: [(usize, usize); 22] = [
        (0, 1),
        (0, 4),
        (0, 6),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 6),
        (1, 11),
        (2, 8),
        (3, 7),
        (4, 7),
        (5, 7),
        (5, 9),
        (6, 9),
        (6, 10),
        (7, 8),
        (7, 9),
        (8, 9),
        (9, 10),
        (8, 11),
        (10, 11),
    ];
    WeightedGraph::unweighted(12, EDGES)
        .and_then(|g| g.with_pair(0, 8))
        .expect("g12 is valid")
        .with_label("g12")
}

/// The 4-cycle with one edge of weight -1, whose antipodal pairs have zero
/// transfer. Matrix rows: `[0,-1,0,1], [-1,0,1,0], [0,1,0,1], [1,0,1,0]`.
pub fn c4_signed() -> WeightedGraph {
    WeightedGraph::new(4, [(0, 1, -1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
        .and_then(|g| g.with_pair(0, 2))
        .expect("signed c4 is valid")
        .with_label("c4neg")
}

fn need(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        Err(Error::BadParam(format!("{what} needs n >= {min}, got {n}")))
    } else {
        Ok(())
    }
}

/// Path on `n` vertices, pair = the two ends.
pub fn path(n: usize) -> Result<WeightedGraph> {
    need(n, 2, "path")?;
    Ok(
        WeightedGraph::unweighted(n, (0..n - 1).map(|i| (i, i + 1)))?
            .with_pair(0, n - 1)?
            .with_label(format!("path{n}")),
    )
}

/// Cycle on `n` vertices, pair = `0` and `n / 2`.
pub fn cycle(n: usize) -> Result<WeightedGraph> {
    need(n, 3, "cycle")?;
    Ok(
        WeightedGraph::unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))?
            .with_pair(0, n / 2)?
            .with_label(format!("cycle{n}")),
    )
}

pub fn complete(n: usize) -> Result<WeightedGraph> {
    need(n, 2, "complete")?;
    let edges = (0..n).flat_map(|j| (0..j).map(move |i| (i, j)));
    Ok(WeightedGraph::unweighted(n, edges)?
        .with_pair(0, 1)?
        .with_label(format!("complete{n}")))
}

/// Star `K_{1,leaves}` with centre 0; pair = centre and leaf 1.
pub fn star(leaves: usize) -> Result<WeightedGraph> {
    need(leaves, 1, "star")?;
    Ok(
        WeightedGraph::unweighted(leaves + 1, (1..=leaves).map(|i| (0, i)))?
            .with_pair(0, 1)?
            .with_label(format!("star{leaves}")),
    )
}

/// `d`-dimensional hypercube; pair = `0` and its antipode.
pub fn hypercube(d: usize) -> Result<WeightedGraph> {
    need(d, 1, "hypercube")?;
    if d > 16 {
        return Err(Error::BadParam(format!(
            "hypercube dimension {d} too large"
        )));
    }
    let n = 1usize << d;
    let edges = (0..n).flat_map(|x| {
        (0..d).filter_map(move |b| {
            let y = x ^ (1 << b);
            (x < y).then_some((x, y))
        })
    });
    Ok(WeightedGraph::unweighted(n, edges)?
        .with_pair(0, n - 1)?
        .with_label(format!("hypercube{d}")))
}

/// `n` copies of `K_2`, each with one endpoint joined to both `u` and `v`.
///
/// Vertex 0 is `v`, vertex 1 is `u`; gadget `i` occupies `2 + 2i` (joined to
/// `u` and `v`) and `3 + 2i`. Designated pair `(u, v) = (1, 0)`.
pub fn k2_family(n: usize) -> Result<WeightedGraph> {
    need(n, 1, "k2family")?;
    let mut edges = Vec::with_capacity(3 * n);
    for i in 0..n {
        let a = 2 + 2 * i;
        edges.push((1, a));
        edges.push((0, a));
        edges.push((a, a + 1));
    }
    Ok(WeightedGraph::unweighted(2 * n + 2, edges)?
        .with_pair(1, 0)?
        .with_label(format!("k2family{n}")))
}

/// Path position of `v_j` (1-based `j`) in `X_n`.
pub fn xn_v_index(n: usize, j: usize) -> usize {
    2 * (n - j)
}

/// Path position of `w_j` (1-based `j`) in `X_n`.
pub fn xn_w_index(_n: usize, j: usize) -> usize {
    2 * (j - 1) + 1
}

/// The weighted path `X_n` on `2n` vertices, visiting
/// `v_n, w_1, v_{n-1}, w_2, ..., v_1, w_n`, where edge `v_j w_k` has weight
/// `sqrt(j k)`. Designated pair `(w_1, w_n) = (1, 2n - 1)`.
pub fn xn(n: usize) -> Result<WeightedGraph> {
    need(n, 1, "xn")?;
    let mut edges = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        // v_{n-i} -- w_{i+1}
        edges.push((2 * i, 2 * i + 1, (((n - i) * (i + 1)) as f64).sqrt()));
        if i + 1 < n {
            // w_{i+1} -- v_{n-i-1}
            edges.push((
                2 * i + 1,
                2 * i + 2,
                (((i + 1) * (n - i - 1)) as f64).sqrt(),
            ));
        }
    }
    Ok(WeightedGraph::new(2 * n, edges)?
        .with_pair(1, 2 * n - 1)?
        .with_label(format!("xn{n}")))
}

/// Vertex classes of `Y_n`, in the path order of `X_n`: class `i` is the
/// blow-up of `X_n`'s vertex `i`.
pub fn yn_classes(n: usize) -> Vec<std::ops::Range<usize>> {
    let mut classes = Vec::with_capacity(2 * n);
    let mut start = 0;
    for i in 0..n {
        for size in [n - i, i + 1] {
            classes.push(start..start + size);
            start += size;
        }
    }
    classes
}

/// Unweighted blow-up `Y_n` of `X_n`: `v_j`, `w_j` become independent sets
/// of size `j`, joined completely wherever `X_n` has an edge.
pub fn yn(n: usize) -> Result<WeightedGraph> {
    need(n, 1, "yn")?;
    let classes = yn_classes(n);
    let order = classes.last().map_or(0, |c| c.end);
    let mut edges = Vec::new();
    for pair in classes.windows(2) {
        for a in pair[0].clone() {
            for b in pair[1].clone() {
                edges.push((a, b));
            }
        }
    }
    Ok(WeightedGraph::unweighted(order, edges)?.with_label(format!("yn{n}")))
}

/// Looks up a named graph. `param` is the size parameter for the
/// parametrized families and must be absent for the sporadic ones.
pub fn named_graph(name: &str, param: Option<usize>) -> Result<WeightedGraph> {
    let name = name.to_ascii_lowercase();
    let sporadic = |g: WeightedGraph| match param {
        None => Ok(g),
        Some(p) => Err(Error::BadParam(format!(
            "`{name}` takes no parameter, got {p}"
        ))),
    };
    let sized = |f: fn(usize) -> Result<WeightedGraph>| match param {
        Some(p) => f(p),
        None => Err(Error::BadParam(format!("`{name}` needs a size parameter"))),
    };
    match name.as_str() {
        "petersen" => sporadic(petersen()),
        "g11" => sporadic(g11()),
        "g12" => sporadic(g12()),
        "c4neg" => sporadic(c4_signed()),
        "k2" => sporadic(complete(2)?.with_label("k2")),
        "path" | "p" => sized(path),
        "cycle" | "c" => sized(cycle),
        "complete" | "k" => sized(complete),
        "star" => sized(star),
        "hypercube" | "q" => sized(hypercube),
        "k2family" | "gn" => sized(k2_family),
        "xn" => sized(xn),
        "yn" => sized(yn),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Parses `petersen`, `path9`, `path:9` or `path(9)`.
pub fn resolve_name(spec: &str) -> Result<WeightedGraph> {
    let spec = spec.trim();
    if let Some((name, rest)) = spec.split_once(['(', ':']) {
        let digits = rest.trim_end_matches(')');
        let p = digits
            .parse()
            .map_err(|_| Error::BadParam(format!("bad size parameter in `{spec}`")))?;
        return named_graph(name, Some(p));
    }
    let split = spec
        .find(|c: char| c.is_ascii_digit())
        .unwrap_or(spec.len());
    let (name, digits) = spec.split_at(split);
    // sporadic names containing digits
    if digits.is_empty()
        || matches!(
            spec.to_ascii_lowercase().as_str(),
            "k2" | "g11" | "g12" | "c4neg"
        )
    {
        return named_graph(spec, None);
    }
    let p = digits
        .parse()
        .map_err(|_| Error::UnknownName(spec.to_string()))?;
    named_graph(name, Some(p))
}
