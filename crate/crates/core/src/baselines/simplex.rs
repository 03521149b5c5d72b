//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Sized for the tiny programs the benchmarks produce (a few hundred columns,
//! a handful of rows); reduced costs are recomputed from scratch every pivot.

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;

/// `max c.x  s.t.  A_le x <= b_le,  A_eq x = b_eq,  x >= 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub le: Vec<(Vec<f64>, f64)>,
    pub eq: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.rows[r][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col];
        self.rows[row].iter_mut().for_each(|v| *v /= p);
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let factor = other[col];
            if factor != 0.0 {
                for (v, pv) in other.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
                other[col] = 0.0;
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations for `max cost.x` over columns `0..allowed`.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: f64 = self.rows.iter().zip(&self.basis).map(|(row, &b)| cost[b] * row[j]).sum();
                cost[j] - z > COST_EPS
            });
            let Some(col) = entering else { return true };

            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][col];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r) / a;
                    leaving = match leaving {
                        None => Some((r, ratio)),
                        Some((best, best_ratio)) => {
                            if ratio < best_ratio - 1e-15
                                || (ratio <= best_ratio + 1e-15 && self.basis[r] < self.basis[best])
                            {
                                Some((r, ratio))
                            } else {
                                Some((best, best_ratio))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leaving else { return false };
            self.pivot(row, col);
        }
    }
}

impl LinearProgram {
    pub fn solve(&self) -> Outcome {
        let n = self.objective.len();
        let n_slack = self.le.len();
        let n_rows = self.le.len() + self.eq.len();

        // Normalise every row to a nonnegative right-hand side and decide which
        // rows need an artificial variable.
        struct Row {
            coeffs: Vec<f64>,
            slack: Option<(usize, f64)>,
            rhs: f64,
        }
        let mut rows: Vec<Row> = Vec::with_capacity(n_rows);
        for (i, (a, b)) in self.le.iter().enumerate() {
            let sign = if *b < 0.0 { -1.0 } else { 1.0 };
            rows.push(Row {
                coeffs: a.iter().map(|v| sign * v).collect(),
                slack: Some((i, sign)),
                rhs: sign * b,
            });
        }
        for (a, b) in &self.eq {
            let sign = if *b < 0.0 { -1.0 } else { 1.0 };
            rows.push(Row { coeffs: a.iter().map(|v| sign * v).collect(), slack: None, rhs: sign * b });
        }
        let needs_artificial: Vec<bool> = rows.iter().map(|r| !matches!(r.slack, Some((_, s)) if s > 0.0)).collect();
        let n_art = needs_artificial.iter().filter(|&&x| x).count();
        let cols = n + n_slack + n_art;

        let mut tableau = Tableau { rows: Vec::with_capacity(n_rows), basis: Vec::with_capacity(n_rows), cols };
        let mut next_art = n + n_slack;
        for (row, art) in rows.iter().zip(&needs_artificial) {
            let mut line = vec![0.0; cols + 1];
            line[..n].copy_from_slice(&row.coeffs);
            if let Some((i, s)) = row.slack {
                line[n + i] = s;
            }
            line[cols] = row.rhs;
            let basic = if *art {
                line[next_art] = 1.0;
                next_art += 1;
                next_art - 1
            } else {
                n + row.slack.unwrap().0
            };
            tableau.rows.push(line);
            tableau.basis.push(basic);
        }

        if n_art > 0 {
            let mut phase1 = vec![0.0; cols];
            phase1[n + n_slack..].iter_mut().for_each(|c| *c = -1.0);
            tableau.optimize(&phase1, cols);
            let infeasibility: f64 = tableau
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= n + n_slack)
                .map(|(r, _)| tableau.rhs(r))
                .sum();
            if infeasibility > FEAS_EPS {
                return Outcome::Infeasible;
            }
            // Drive remaining (zero-valued) artificials out of the basis; drop
            // rows that turn out to be redundant.
            let mut r = 0;
            while r < tableau.rows.len() {
                if tableau.basis[r] >= n + n_slack {
                    let col = (0..n + n_slack).find(|&j| tableau.rows[r][j].abs() > PIVOT_EPS);
                    match col {
                        Some(j) => tableau.pivot(r, j),
                        None => {
                            tableau.rows.remove(r);
                            tableau.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        let mut phase2 = vec![0.0; cols];
        phase2[..n].copy_from_slice(&self.objective);
        if !tableau.optimize(&phase2, n + n_slack) {
            return Outcome::Unbounded;
        }
        let mut x = vec![0.0; n];
        for (r, &b) in tableau.basis.iter().enumerate() {
            if b < n {
                x[b] = tableau.rhs(r);
            }
        }
        let value = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        Outcome::Optimal { x, value }
    }
}
