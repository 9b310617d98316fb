//! Brute-force reference computations, written against the graph API only
//! so they share no code with the solvers they check.

use std::collections::HashMap;

use biaswalk_core::{Graph, VertexSet};

/// Gaussian elimination with partial pivoting; `None` for singular systems.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..m {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; m];
    for row in (0..m).rev() {
        let s: f64 = (row + 1..m).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Calls `f` with every deterministic choice (an out-neighbour per listed
/// vertex).
fn for_each_choice(g: &Graph, vertices: &[usize], mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; vertices.len()];
    let mut pick: Vec<usize> = vertices.iter().map(|&v| g.neighbours(v)[0]).collect();
    loop {
        f(&pick);
        let mut k = 0;
        loop {
            if k == vertices.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < g.degree(vertices[k]) {
                pick[k] = g.neighbours(vertices[k])[idx[k]];
                break;
            }
            idx[k] = 0;
            pick[k] = g.neighbours(vertices[k])[0];
            k += 1;
        }
    }
}

/// Expected time to leave `states` under fixed choices, where leaving to `y`
/// adds `exit[y]`.
fn absorbing_values(g: &Graph, states: &[usize], choice: &[usize], eps: f64, exit: &[f64]) -> Option<Vec<f64>> {
    let m = states.len();
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in states.iter().enumerate() {
        pos[v] = i;
    }
    let mut a = vec![vec![0.0; m]; m];
    let mut b = vec![1.0; m];
    for (i, &x) in states.iter().enumerate() {
        a[i][i] += 1.0;
        let d = g.degree(x) as f64;
        let mut add = |y: usize, w: f64| {
            if pos[y] == usize::MAX {
                b[i] += w * exit[y];
            } else {
                a[i][pos[y]] -= w;
            }
        };
        for &y in g.neighbours(x) {
            add(y, (1.0 - eps) / d);
        }
        add(choice[i], eps);
    }
    gauss_solve(a, b)
}

/// Expected cover time from `start` when, having visited `mask` and standing
/// at `v`, the controller draws the next vertex from `row(mask, v)`, given as
/// weights over `g.neighbours(v)`.
pub fn cover_value_with_rows(g: &Graph, start: usize, eps: f64, row: &dyn Fn(u64, usize) -> Vec<f64>) -> Option<f64> {
    let mut memo: HashMap<u64, Vec<f64>> = HashMap::new();
    Some(rows_layer(g, 1 << start, eps, row, &mut memo)?[start])
}

fn rows_layer(
    g: &Graph,
    mask: u64,
    eps: f64,
    row: &dyn Fn(u64, usize) -> Vec<f64>,
    memo: &mut HashMap<u64, Vec<f64>>,
) -> Option<Vec<f64>> {
    if let Some(v) = memo.get(&mask) {
        return Some(v.clone());
    }
    let n = g.n();
    let states: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    let out = if states.len() == n {
        vec![0.0; n]
    } else {
        let mut exit = vec![0.0; n];
        for y in 0..n {
            if mask >> y & 1 == 0 && states.iter().any(|&x| g.neighbours(x).contains(&y)) {
                exit[y] = rows_layer(g, mask | 1 << y, eps, row, memo)?[y];
            }
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in states.iter().enumerate() {
            pos[v] = i;
        }
        let m = states.len();
        let mut a = vec![vec![0.0; m]; m];
        let mut b = vec![1.0; m];
        for (i, &x) in states.iter().enumerate() {
            a[i][i] += 1.0;
            let d = g.degree(x) as f64;
            let w = row(mask, x);
            for (k, &y) in g.neighbours(x).iter().enumerate() {
                let p = (1.0 - eps) / d + eps * w[k];
                if pos[y] == usize::MAX {
                    b[i] += p * exit[y];
                } else {
                    a[i][pos[y]] -= p;
                }
            }
        }
        let h = gauss_solve(a, b)?;
        let mut out = vec![f64::NAN; n];
        for (i, &v) in states.iter().enumerate() {
            out[v] = h[i];
        }
        out
    };
    memo.insert(mask, out.clone());
    Some(out)
}

/// Optimal expected hitting times of `target`, minimised over all
/// deterministic bias matrices; zero on the target.
pub fn hitting_by_enumeration(g: &Graph, target: &VertexSet, eps: f64) -> Vec<f64> {
    let n = g.n();
    let free: Vec<usize> = (0..n).filter(|&v| !target.contains(v)).collect();
    let zero = vec![0.0; n];
    let mut best = vec![f64::INFINITY; free.len()];
    for_each_choice(g, &free, |choice| {
        if let Some(h) = absorbing_values(g, &free, choice, eps, &zero) {
            for (b, v) in best.iter_mut().zip(h) {
                if v >= 0.0 {
                    *b = b.min(v);
                }
            }
        }
    });
    let mut out = zero;
    for (i, &v) in free.iter().enumerate() {
        out[v] = best[i];
    }
    out
}

/// Optimal expected cover time from `start`, found by enumerating every
/// deterministic choice per visited set; exits into a new vertex `y` cost
/// the optimal value from `y` with `y` added.
pub fn cover_by_enumeration(g: &Graph, start: usize, eps: f64) -> f64 {
    let mut memo: HashMap<u64, Vec<f64>> = HashMap::new();
    cover_layer(g, 1 << start, eps, &mut memo)[start]
}

fn cover_layer(g: &Graph, mask: u64, eps: f64, memo: &mut HashMap<u64, Vec<f64>>) -> Vec<f64> {
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let n = g.n();
    let states: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    let mut exit = vec![0.0; n];
    let out = if states.len() == n {
        vec![0.0; n]
    } else {
        for y in 0..n {
            let adjacent = states.iter().any(|&x| g.neighbours(x).contains(&y));
            if mask >> y & 1 == 0 && adjacent {
                exit[y] = cover_layer(g, mask | 1 << y, eps, memo)[y];
            }
        }
        let mut best = vec![f64::INFINITY; states.len()];
        for_each_choice(g, &states, |choice| {
            if let Some(h) = absorbing_values(g, &states, choice, eps, &exit) {
                for (b, v) in best.iter_mut().zip(h) {
                    if v >= 0.0 {
                        *b = b.min(v);
                    }
                }
            }
        });
        let mut out = vec![f64::NAN; n];
        for (i, &v) in states.iter().enumerate() {
            out[v] = best[i];
        }
        out
    };
    memo.insert(mask, out.clone());
    out
}

/// Probability that the simple random walk from `u` satisfies `test` after
/// `t` steps, summing over all `t`-step walks.
pub fn srw_path_probability(g: &Graph, u: usize, t: usize, test: &dyn Fn(&[usize]) -> bool) -> f64 {
    fn go(g: &Graph, path: &mut Vec<usize>, weight: f64, t: usize, test: &dyn Fn(&[usize]) -> bool) -> f64 {
        if path.len() == t + 1 {
            return if test(path) { weight } else { 0.0 };
        }
        let x = *path.last().expect("nonempty");
        let d = g.degree(x) as f64;
        let mut total = 0.0;
        for &y in g.neighbours(x) {
            path.push(y);
            total += go(g, path, weight / d, t, test);
            path.pop();
        }
        total
    }
    go(g, &mut vec![u], 1.0, t, test)
}
