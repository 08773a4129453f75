#![allow(dead_code)]

use pcc_core::comm::{BoolFunction, CommMatrix};
use pcc_core::graph::LabeledGraph;
use pcc_core::{Cell, PartialMatrix};
use proptest::prelude::*;

fn cell() -> impl Strategy<Value = Cell> {
    prop_oneof![3 => Just(Cell::Zero), 3 => Just(Cell::One), 2 => Just(Cell::Star)]
}

/// Nonempty partial classes with up to `points` points and `concepts` concepts.
pub fn partial_class(points: usize, concepts: usize) -> impl Strategy<Value = PartialMatrix> {
    (1..=points, 1..=concepts).prop_flat_map(|(n, k)| {
        prop::collection::vec(prop::collection::vec(cell(), n), k)
            .prop_map(move |rows| PartialMatrix::new(n, rows).unwrap())
    })
}

pub fn graph(max_n: usize) -> impl Strategy<Value = LabeledGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        prop::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges: Vec<_> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
            LabeledGraph::from_edges(n, &edges).unwrap()
        })
    })
}

pub fn comm_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = CommMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(any::<bool>(), r * c).prop_map(move |cells| CommMatrix::new(r, c, cells).unwrap())
    })
}

pub fn bool_function(max_n: usize) -> impl Strategy<Value = BoolFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1 << n).prop_map(move |t| BoolFunction::new(n, t).unwrap())
    })
}

/// Exact chromatic number by trying every assignment with `k` colors.
pub fn brute_chi(g: &LabeledGraph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    for k in 1..=n {
        let mut colors = vec![0usize; n];
        loop {
            if g.edges().all(|(u, v)| colors[u] != colors[v]) {
                return k;
            }
            let mut i = 0;
            while i < n {
                colors[i] += 1;
                if colors[i] < k {
                    break;
                }
                colors[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    n
}

/// `(positive, negative)` eigenvalue counts of the adjacency matrix, exactly:
/// characteristic polynomial by Berkowitz over integers, then sign changes
/// (exact for real-rooted polynomials).
pub fn exact_inertia(g: &LabeledGraph) -> (usize, usize) {
    let n = g.n();
    let a: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| g.has_edge(i, j) as i128).collect())
        .collect();
    let p = berkowitz(&a);
    // p[0] x^n + p[1] x^(n-1) + ... + p[n]; strip the zero roots
    let mut coeffs = p.clone();
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    let changes = |c: &[i128]| {
        let signs: Vec<i128> = c.iter().filter(|&&x| x != 0).map(|x| x.signum()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let deg = coeffs.len() - 1;
    let negated: Vec<i128> = coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| if (deg - i) % 2 == 1 { -c } else { c })
        .collect();
    (changes(&coeffs), changes(&negated))
}

/// Coefficients of `det(xI - A)`, leading first.
fn berkowitz(a: &[Vec<i128>]) -> Vec<i128> {
    let n = a.len();
    let mut poly = vec![1i128];
    for k in 0..n {
        // leading principal (k+1)x(k+1) block: [[A_k, c], [r, a_kk]]
        let r: Vec<i128> = (0..k).map(|j| a[k][j]).collect();
        let c: Vec<i128> = (0..k).map(|i| a[i][k]).collect();
        // Toeplitz column: 1, -a_kk, -r c, -r A c, -r A^2 c, ...
        let mut col = vec![1i128, -a[k][k]];
        let mut v = c.clone();
        for _ in 0..k {
            let rv: i128 = r.iter().zip(&v).map(|(x, y)| x * y).sum();
            col.push(-rv);
            v = (0..k).map(|i| (0..k).map(|j| a[i][j] * v[j]).sum()).collect();
        }
        let mut next = vec![0i128; k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, &p) in poly.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    *slot += col[i - j] * p;
                }
            }
        }
        poly = next;
    }
    poly
}

/// Smallest certificate for `x` by enumerating fixed sets smallest first.
pub fn brute_cert(f: &BoolFunction, x: usize) -> usize {
    let n = f.n();
    let b = f.eval(x);
    let mut best = n;
    for fixed in 0usize..1 << n {
        let k = fixed.count_ones() as usize;
        if k >= best {
            continue;
        }
        let agree = (0..1usize << n)
            .filter(|y| (y ^ x) & fixed == 0)
            .all(|y| f.eval(y) == b);
        if agree {
            best = k;
        }
    }
    best
}

/// Minimum rectangle cover or partition of the `b`-cells by dynamic
/// programming over cell subsets; at most 12 cells.
pub fn brute_cover(h: &CommMatrix, b: bool, partition: bool) -> usize {
    let (rows, cols) = (h.rows(), h.cols());
    assert!(rows * cols <= 12);
    let mut rects = Vec::new();
    for rs in 1usize..1 << rows {
        for cs in 1usize..1 << cols {
            let cells: Vec<(usize, usize)> = (0..rows)
                .filter(|r| rs >> r & 1 == 1)
                .flat_map(|r| (0..cols).filter(move |c| cs >> c & 1 == 1).map(move |c| (r, c)))
                .collect();
            if cells.iter().all(|&(r, c)| h.get(r, c) == b) {
                rects.push(cells.iter().fold(0usize, |m, &(r, c)| m | 1 << (r * cols + c)));
            }
        }
    }
    let target = h
        .cells_equal(b)
        .iter()
        .fold(0usize, |m, &(r, c)| m | 1 << (r * cols + c));
    let mut dp = vec![usize::MAX; target + 1];
    dp[0] = 0;
    for s in 1..=target {
        if s & !target != 0 {
            continue;
        }
        let low = s & s.wrapping_neg();
        for &r in &rects {
            if r & low == 0 || (partition && r & !s != 0) {
                continue;
            }
            let rest = s & !r;
            if dp[rest] != usize::MAX {
                dp[s] = dp[s].min(dp[rest] + 1);
            }
        }
    }
    dp[target]
}
