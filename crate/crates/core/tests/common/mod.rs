#![allow(dead_code)]

use nalgebra::DMatrix;
use peakwalk_core::{named, MatrixKind, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A worked example: graph, matrix kind and designated pair.
pub struct Case {
    pub name: String,
    pub graph: WeightedGraph,
    pub kind: MatrixKind,
    pub u: usize,
    pub v: usize,
}

impl Case {
    fn new(graph: WeightedGraph, kind: MatrixKind) -> Case {
        let (u, v) = graph.pair().expect("example graphs carry a pair");
        let name = format!("{}/{}", graph.label().unwrap_or("?"), kind.short_name());
        Case {
            name,
            graph,
            kind,
            u,
            v,
        }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        self.graph.matrix(self.kind)
    }
}

/// Examples expected to have peak state transfer at their pair.
pub fn peak_cases() -> Vec<Case> {
    let mut out = vec![
        Case::new(named::petersen(), MatrixKind::Adjacency),
        Case::new(named::g11(), MatrixKind::Adjacency),
        Case::new(named::g12(), MatrixKind::Laplacian),
        Case::new(named::complete(2).unwrap(), MatrixKind::Adjacency),
    ];
    out.extend((1..=6).map(|n| Case::new(named::k2_family(n).unwrap(), MatrixKind::Adjacency)));
    out.extend((1..=8).map(|n| Case::new(named::xn(n).unwrap(), MatrixKind::Adjacency)));
    out
}

/// Every worked example, including the ones without peak transfer.
pub fn all_cases() -> Vec<Case> {
    let mut out = peak_cases();
    out.push(Case::new(named::c4_signed(), MatrixKind::Adjacency));
    out.push(Case::new(named::path(4).unwrap(), MatrixKind::Adjacency));
    out.push(Case::new(named::path(9).unwrap(), MatrixKind::Adjacency));
    out.push(Case::new(named::g11(), MatrixKind::Laplacian));
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symmetric matrix with entries in [-2, 2]; a third of the time the
/// entries are small integers so that eigenvalues repeat.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let integral = rng.gen_ratio(1, 3);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = if integral {
                rng.gen_range(-1i32..=1) as f64
            } else {
                rng.gen_range(-2.0..2.0)
            };
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// Random connected unweighted graph: a random spanning tree plus extra edges.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((rng.gen_range(0..i), i));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(extra) && !edges.contains(&(i, j)) {
                edges.push((i, j));
            }
        }
    }
    WeightedGraph::unweighted(n, edges).unwrap()
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Connected graphs: `(n, total, pst_A, peak_A, pst_L, peak_L)`.
pub const TABLE_CONNECTED: [[usize; 6]; 8] = [
    [2, 1, 1, 1, 1, 1],
    [3, 2, 1, 2, 0, 2],
    [4, 6, 1, 4, 2, 5],
    [5, 21, 1, 9, 0, 13],
    [6, 112, 1, 20, 0, 50],
    [7, 853, 1, 42, 0, 191],
    [8, 11117, 5, 98, 198, 1332],
    [9, 261080, 3, 221, 0, 15055],
];

/// Trees, same columns.
pub const TABLE_TREES: [[usize; 6]; 17] = [
    [2, 1, 1, 1, 1, 1],
    [3, 1, 1, 1, 0, 1],
    [4, 2, 0, 1, 0, 1],
    [5, 3, 0, 2, 0, 1],
    [6, 6, 0, 2, 0, 1],
    [7, 11, 0, 3, 0, 1],
    [8, 23, 0, 2, 0, 1],
    [9, 47, 0, 6, 0, 1],
    [10, 106, 0, 2, 0, 2],
    [11, 235, 0, 7, 0, 1],
    [12, 551, 0, 3, 0, 1],
    [13, 1301, 0, 14, 0, 1],
    [14, 3159, 0, 8, 0, 1],
    [15, 7741, 0, 18, 0, 1],
    [16, 19320, 0, 16, 0, 1],
    [17, 48629, 0, 45, 0, 1],
    [18, 123867, 0, 18, 0, 1],
];

pub fn expected(table: &[[usize; 6]], n: usize) -> [usize; 6] {
    *table.iter().find(|r| r[0] == n).expect("order in table")
}

pub fn row_array(r: &peakwalk_core::survey::CensusRow) -> [usize; 6] {
    [r.n, r.total, r.pst_a, r.peak_a, r.pst_l, r.peak_l]
}
