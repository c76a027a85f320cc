//! Simplex results checked against brute-force vertex enumeration and
//! sampled feasible points.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uavrelay::lpcore::{solve_lp, LpModel, LpStatus, Relation, VarId};

struct Dense {
    n: usize,
    /// rows as (coeffs, relation, rhs)
    rows: Vec<(Vec<f64>, Relation, f64)>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    planted: Vec<f64>,
}

impl Dense {
    fn random(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Self {
        let lower: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..0.0f64).round()).collect();
        let upper: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..5.0f64).round()).collect();
        let x0: Vec<f64> = (0..n).map(|j| rng.random_range(lower[j]..upper[j])).collect();
        let mut rows = Vec::new();
        for _ in 0..k {
            let a: Vec<f64> = (0..n)
                .map(|_| if rng.random_bool(0.7) { rng.random_range(-4i32..=4) as f64 } else { 0.0 })
                .collect();
            let act: f64 = a.iter().zip(&x0).map(|(p, q)| p * q).sum();
            let rel = match rng.random_range(0..5) {
                0 => Relation::Eq,
                1 | 2 => Relation::Le,
                _ => Relation::Ge,
            };
            let rhs = match rel {
                Relation::Eq => act,
                Relation::Le => act + rng.random_range(0.0..2.0),
                Relation::Ge => act - rng.random_range(0.0..2.0),
            };
            rows.push((a, rel, rhs));
        }
        let cost = (0..n).map(|_| rng.random_range(-5.0..5.0f64)).collect();
        Dense { n, rows, lower, upper, cost, planted: x0 }
    }

    fn model(&self) -> (LpModel, Vec<VarId>) {
        let mut m = LpModel::new();
        let vars: Vec<VarId> = (0..self.n)
            .map(|j| m.add_variable(format!("x{j}"), self.lower[j], self.upper[j], self.cost[j]).unwrap())
            .collect();
        for (i, (a, rel, rhs)) in self.rows.iter().enumerate() {
            let coeffs = a.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, &v)| (vars[j], v)).collect();
            m.add_constraint(format!("r{i}"), coeffs, *rel, *rhs).unwrap();
        }
        (m, vars)
    }

    fn feasible(&self, x: &[f64], tol: f64) -> bool {
        if (0..self.n).any(|j| x[j] < self.lower[j] - tol || x[j] > self.upper[j] + tol) {
            return false;
        }
        self.rows.iter().all(|(a, rel, rhs)| {
            let act: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
            match rel {
                Relation::Le => act <= rhs + tol,
                Relation::Ge => act >= rhs - tol,
                Relation::Eq => (act - rhs).abs() <= tol,
            }
        })
    }

    /// Minimum objective over all vertices of the (bounded) feasible region.
    fn vertex_enumeration(&self) -> Option<f64> {
        // candidate hyperplanes: every row and every variable bound
        let mut planes: Vec<(Vec<f64>, f64)> = self.rows.iter().map(|(a, _, b)| (a.clone(), *b)).collect();
        for j in 0..self.n {
            let mut e = vec![0.0; self.n];
            e[j] = 1.0;
            planes.push((e.clone(), self.lower[j]));
            planes.push((e, self.upper[j]));
        }
        let mut best: Option<f64> = None;
        let mut subset: Vec<usize> = (0..self.n).collect();
        loop {
            if let Some(x) = solve_dense(&subset.iter().map(|&i| planes[i].clone()).collect::<Vec<_>>(), self.n) {
                if self.feasible(&x, 1e-9) {
                    let obj: f64 = self.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                    best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
            }
            if !next_combination(&mut subset, planes.len()) {
                break;
            }
        }
        best
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Gaussian elimination with partial pivoting; None when singular.
fn solve_dense(planes: &[(Vec<f64>, f64)], n: usize) -> Option<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = planes.iter().map(|(r, b)| r.iter().copied().chain([*b]).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(c, p);
        let pivot = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != c {
                let f = row[c] / pivot[c];
                for (v, p) in row[c..=n].iter_mut().zip(&pivot[c..=n]) {
                    *v -= f * p;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

#[test]
fn matches_vertex_enumeration_on_fifty_random_lps() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    for case in 0..50 {
        let n = rng.random_range(2..=5);
        let k = rng.random_range(1..=5);
        let lp = Dense::random(&mut rng, n, k);
        let (model, _) = lp.model();
        let sol = solve_lp(&model).unwrap();
        let oracle = lp.vertex_enumeration().expect("constructed feasible");
        assert_eq!(sol.status, LpStatus::Optimal, "case {case}");
        assert!(
            (sol.objective - oracle).abs() <= 1e-6 * (1.0 + oracle.abs()),
            "case {case}: simplex {} vs enumeration {}",
            sol.objective,
            oracle
        );
        assert!(model.max_violation(&sol.values) <= 1e-7, "case {case}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Larger instances: feasibility within tolerance and weak duality
    /// against sampled feasible points (the planted point among them).
    #[test]
    fn optimum_not_beaten_by_feasible_samples(seed in any::<u64>(), n in 5usize..=40, k in 1usize..=30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = Dense::random(&mut rng, n, k);
        let (model, _) = lp.model();
        let sol = solve_lp(&model).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(model.max_violation(&sol.values) <= 1e-7);
        for _ in 0..200 {
            let x: Vec<f64> = (0..n).map(|j| rng.random_range(lp.lower[j]..=lp.upper[j])).collect();
            if lp.feasible(&x, 0.0) {
                let obj: f64 = lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                prop_assert!(sol.objective <= obj + 1e-6);
            }
        }
        let planted: f64 = lp.cost.iter().zip(&lp.planted).map(|(c, v)| c * v).sum();
        prop_assert!(sol.objective <= planted + 1e-6);
        let again = solve_lp(&model).unwrap();
        prop_assert_eq!(again.values, sol.values);
    }
}
