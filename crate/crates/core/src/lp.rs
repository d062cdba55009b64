//! Dense two-phase simplex with Bland's rule.
//!
//! Sizes in this crate are tiny (a few dozen rows), so a dense tableau is the
//! simplest correct choice. With exact scalars the result is exact; Bland's
//! rule guarantees termination.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::{Scalar, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `maximize c.x` subject to linear rows; each variable is free or `>= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram<F> {
    free: Vec<bool>,
    objective: Vec<F>,
    rows: Vec<(Vec<F>, Relation, F)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<F> {
    Optimal { value: F, x: Vec<F> },
    Infeasible,
    Unbounded,
    /// Only reachable with floating point cycling.
    IterationLimit,
}

impl<F: Scalar> LpOutcome<F> {
    pub fn optimal(&self) -> Option<(&F, &[F])> {
        match self {
            LpOutcome::Optimal { value, x } => Some((value, x)),
            _ => None,
        }
    }
}

impl<F: Scalar> LinearProgram<F> {
    /// `free[j]` marks variable `j` as unrestricted in sign.
    pub fn new(free: Vec<bool>, objective: Vec<F>) -> Self {
        assert_eq!(free.len(), objective.len());
        LinearProgram { free, objective, rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    pub fn add(&mut self, coeffs: Vec<F>, rel: Relation, rhs: F) {
        assert_eq!(coeffs.len(), self.free.len());
        self.rows.push((coeffs, rel, rhs));
    }

    pub fn solve(&self, eps: f64) -> LpOutcome<F> {
        Tableau::build(self, eps).run(self)
    }
}

struct Tableau<F> {
    t: Vec<Vec<F>>,
    basis: Vec<usize>,
    /// Column ranges: structural columns first, then slacks, then artificials.
    n_struct: usize,
    n_art_start: usize,
    n_cols: usize,
    /// Structural column for (variable, negative part).
    map: Vec<(usize, Option<usize>)>,
    eps: f64,
}

impl<F: Scalar> Tableau<F> {
    fn build(lp: &LinearProgram<F>, eps: f64) -> Self {
        let mut map = Vec::with_capacity(lp.free.len());
        let mut col = 0;
        for &f in &lp.free {
            if f {
                map.push((col, Some(col + 1)));
                col += 2;
            } else {
                map.push((col, None));
                col += 1;
            }
        }
        let n_struct = col;
        let n_slack = lp.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let m = lp.rows.len();
        let n_art_start = n_struct + n_slack;
        let n_cols = n_art_start + m;
        let mut t = vec![vec![F::zero(); n_cols + 1]; m + 1];
        let mut basis = vec![0; m];
        let mut slack = n_struct;
        for (i, (coeffs, rel, rhs)) in lp.rows.iter().enumerate() {
            let flip = rhs.sign(0.0) == Sign::Negative;
            let s = |v: F| if flip { -v } else { v };
            for (j, c) in coeffs.iter().enumerate() {
                let (p, n) = map[j];
                t[i][p] = s(c.clone());
                if let Some(n) = n {
                    t[i][n] = s(-c.clone());
                }
            }
            let mut slack_basic = None;
            match rel {
                Relation::Le | Relation::Ge => {
                    let coef = if *rel == Relation::Le { F::one() } else { -F::one() };
                    let coef = s(coef);
                    if coef.sign(0.0) == Sign::Positive {
                        slack_basic = Some(slack);
                    }
                    t[i][slack] = coef;
                    slack += 1;
                }
                Relation::Eq => {}
            }
            t[i][n_cols] = s(rhs.clone());
            match slack_basic {
                Some(c) => basis[i] = c,
                None => {
                    t[i][n_art_start + i] = F::one();
                    basis[i] = n_art_start + i;
                }
            }
        }
        Tableau { t, basis, n_struct, n_art_start, n_cols, map, eps }
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.n_cols + 1;
        let inv = F::one() / self.t[r][c].clone();
        for j in 0..w {
            let v = self.t[r][j].clone() * inv.clone();
            self.t[r][j] = v;
        }
        for i in 0..self.t.len() {
            if i == r {
                continue;
            }
            let f = self.t[i][c].clone();
            if f.sign(0.0) == Sign::Zero {
                continue;
            }
            for j in 0..w {
                let v = self.t[i][j].clone() - f.clone() * self.t[r][j].clone();
                self.t[i][j] = v;
            }
            if !F::EXACT {
                self.t[i][c] = F::zero();
            }
        }
        self.basis[r] = c;
    }

    /// Loads `maximize cost.x` into the objective row and prices out the basis.
    fn set_objective(&mut self, cost: &[F]) {
        let m = self.m();
        let w = self.n_cols + 1;
        for j in 0..w {
            self.t[m][j] = if j < cost.len() { -cost[j].clone() } else { F::zero() };
        }
        for i in 0..m {
            let b = self.basis[i];
            let cb = if b < cost.len() { cost[b].clone() } else { F::zero() };
            if cb.sign(0.0) == Sign::Zero {
                continue;
            }
            for j in 0..w {
                let v = self.t[m][j].clone() + cb.clone() * self.t[i][j].clone();
                self.t[m][j] = v;
            }
        }
    }

    /// Runs simplex iterations over columns `< limit`. Returns false if unbounded.
    fn iterate(&mut self, limit: usize) -> Result<bool, ()> {
        let m = self.m();
        let max_iter = 200 * (m + limit) + 1000;
        for _ in 0..max_iter {
            let enter = (0..limit).find(|&j| self.t[m][j].sign(self.eps) == Sign::Negative && !self.basis.contains(&j));
            let Some(c) = enter else { return Ok(true) };
            let mut best: Option<(usize, F)> = None;
            for i in 0..m {
                if self.t[i][c].sign(self.eps) != Sign::Positive {
                    continue;
                }
                let ratio = self.t[i][self.n_cols].clone() / self.t[i][c].clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => match ratio.cmp_eps(&br, 0.0) {
                        Sign::Negative => Some((i, ratio)),
                        Sign::Zero if self.basis[i] < self.basis[bi] => Some((i, ratio)),
                        _ => Some((bi, br)),
                    },
                };
            }
            let Some((r, _)) = best else { return Ok(false) };
            self.pivot(r, c);
        }
        Err(())
    }

    fn run(mut self, lp: &LinearProgram<F>) -> LpOutcome<F> {
        let m = self.m();
        let has_art = self.basis.iter().any(|&b| b >= self.n_art_start);
        if has_art {
            let mut cost = vec![F::zero(); self.n_cols];
            for c in cost.iter_mut().skip(self.n_art_start) {
                *c = -F::one();
            }
            self.set_objective(&cost);
            match self.iterate(self.n_cols) {
                Err(()) => return LpOutcome::IterationLimit,
                Ok(_) => {}
            }
            let scale = 1.0 + self.t.iter().take(m).fold(0.0, |a, r| libm::fmax(a, libm::fabs(r[self.n_cols].to_f64())));
            if self.t[m][self.n_cols].sign(self.eps * scale) != Sign::Zero {
                return LpOutcome::Infeasible;
            }
            // Drive remaining artificials out of the basis or drop their rows.
            let mut i = 0;
            while i < self.m() {
                if self.basis[i] >= self.n_art_start {
                    let c = (0..self.n_art_start).find(|&j| self.t[i][j].sign(self.eps) != Sign::Zero);
                    match c {
                        Some(c) => self.pivot(i, c),
                        None => {
                            self.t.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut cost = vec![F::zero(); self.n_struct];
        for (j, c) in lp.objective.iter().enumerate() {
            let (p, n) = self.map[j];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c.clone();
            }
        }
        self.set_objective(&cost);
        match self.iterate(self.n_art_start) {
            Err(()) => return LpOutcome::IterationLimit,
            Ok(false) => return LpOutcome::Unbounded,
            Ok(true) => {}
        }
        let m = self.m();
        let mut col_val = vec![F::zero(); self.n_cols];
        for i in 0..m {
            col_val[self.basis[i]] = self.t[i][self.n_cols].clone();
        }
        let x: Vec<F> = self
            .map
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => col_val[p].clone() - col_val[n].clone(),
                None => col_val[p].clone(),
            })
            .collect();
        let mut value = F::zero();
        for (c, xi) in lp.objective.iter().zip(&x) {
            value = value + c.clone() * xi.clone();
        }
        LpOutcome::Optimal { value, x }
    }
}
