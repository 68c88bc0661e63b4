//! Exact rational linear programming: a dense two-phase simplex with Bland's
//! rule, and an independent Fourier-Motzkin feasibility oracle used to
//! cross-check it.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

pub const MAX_VARIABLES: usize = 200;
pub const MAX_CONSTRAINTS: usize = 2000;
pub const FM_MAX_VARIABLES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

/// Maximization program over free (unrestricted) variables.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Variable assignment for Optimal (and a feasible point for Unbounded
    /// when one was found before detecting the unbounded ray).
    pub assignment: Option<Vec<Rat>>,
    pub objective_value: Option<Rat>,
    /// Farkas certificate of infeasibility: one multiplier per constraint,
    /// nonnegative on inequality rows, with sum(y_i * row_i) = 0 and
    /// sum(y_i * rhs_i) > 0.
    pub farkas: Option<Vec<Rat>>,
}

impl LinearProgram {
    pub fn new(variables: Vec<String>) -> Self {
        LinearProgram {
            variables,
            constraints: Vec::new(),
            objective: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<Rat>, relation: Relation, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.num_vars());
        // Store rows in primitive integer form; drop vacuous rows.
        let mut all = coeffs;
        all.push(rhs);
        let prim = crate::rat::QVec(all).primitive().0;
        let (coeffs, rhs) = (prim[..self.num_vars()].to_vec(), prim[self.num_vars()].clone());
        if coeffs.iter().all(|c| c.is_zero()) {
            let vacuous = match relation {
                Relation::Ge => !rhs.is_positive(),
                Relation::Eq => rhs.is_zero(),
            };
            if vacuous {
                return;
            }
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Removes exact duplicate rows.
    pub fn dedupe(&mut self) {
        let mut seen: Vec<(Vec<Rat>, Relation, Rat)> = Vec::new();
        self.constraints.retain(|c| {
            let key = (c.coeffs.clone(), c.relation, c.rhs.clone());
            if seen.contains(&key) {
                false
            } else {
                seen.push(key);
                true
            }
        });
    }

    /// Exact check that an assignment satisfies every constraint.
    pub fn is_feasible_point(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|c| {
            let lhs: Rat = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            match c.relation {
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }

    /// Exact check of a Farkas witness.
    pub fn is_farkas_witness(&self, y: &[Rat]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        for (c, yi) in self.constraints.iter().zip(y) {
            if c.relation == Relation::Ge && yi.is_negative() {
                return false;
            }
        }
        let n = self.num_vars();
        for j in 0..n {
            let s: Rat = self
                .constraints
                .iter()
                .zip(y)
                .map(|(c, yi)| &c.coeffs[j] * yi)
                .sum();
            if !s.is_zero() {
                return false;
            }
        }
        let rhs: Rat = self.constraints.iter().zip(y).map(|(c, yi)| &c.rhs * yi).sum();
        rhs.is_positive()
    }
}

struct Tableau {
    // rows x cols, last column is the rhs.
    a: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pv = self.a[row][col].clone();
        for c in 0..=self.ncols {
            self.a[row][c] /= pv.clone();
        }
        for r in 0..self.a.len() {
            if r == row || self.a[r][col].is_zero() {
                continue;
            }
            let factor = self.a[r][col].clone();
            for c in 0..=self.ncols {
                let sub = &factor * &self.a[row][c];
                self.a[r][c] -= sub;
            }
        }
        self.basis[row] = col;
    }

    /// Maximization over the given candidate columns: Dantzig pivoting with a
    /// switch to Bland's rule after a pivot budget, which guarantees
    /// termination. Returns false when the objective is unbounded.
    fn maximize(&mut self, cost: &mut [Rat], candidates: &[bool]) -> bool {
        let budget = 4 * (self.a.len() + self.ncols) + 64;
        let mut pivots = 0usize;
        loop {
            pivots += 1;
            let bland = pivots > budget;
            let col = if bland {
                (0..self.ncols).find(|&j| candidates[j] && cost[j].is_positive())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.ncols {
                    if candidates[j] && cost[j].is_positive() {
                        best = match best {
                            None => Some(j),
                            Some(b) if cost[j] > cost[b] => Some(j),
                            keep => keep,
                        };
                    }
                }
                best
            };
            let Some(col) = col else { return true };
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..self.a.len() {
                if self.a[r][col].is_positive() {
                    let ratio = &self.a[r][self.ncols] / &self.a[r][col];
                    let better = match &leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else { return false };
            self.pivot(row, col);
            // Keep the cost row reduced against the new basis.
            if !cost[col].is_zero() {
                let factor = cost[col].clone();
                for c in 0..=self.ncols {
                    let sub = &factor * &self.a[row][c];
                    cost[c] -= sub;
                }
            }
        }
    }
}

/// Exact two-phase simplex. Variables are free; internally each is split into
/// a difference of nonnegative parts.
pub fn solve(p: &LinearProgram) -> Result<LpSolution> {
    if p.num_vars() > MAX_VARIABLES || p.constraints.len() > MAX_CONSTRAINTS {
        return Err(Error::SizeBudgetExceeded(format!(
            "{} variables / {} constraints",
            p.num_vars(),
            p.constraints.len()
        )));
    }
    let n = p.num_vars();
    let m = p.constraints.len();
    let n_surplus = p
        .constraints
        .iter()
        .filter(|c| c.relation == Relation::Ge)
        .count();
    // Columns: u (n), w (n), surplus (n_surplus), artificial (m), then rhs.
    let ncols = 2 * n + n_surplus + m;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut flips: Vec<bool> = Vec::with_capacity(m);
    let mut surplus_idx = 0usize;
    for (i, c) in p.constraints.iter().enumerate() {
        let flip = c.rhs.is_negative();
        let sign = if flip { -Rat::one() } else { Rat::one() };
        let mut row = vec![Rat::zero(); ncols + 1];
        for j in 0..n {
            row[j] = &sign * &c.coeffs[j];
            row[n + j] = -&row[j];
        }
        if c.relation == Relation::Ge {
            row[2 * n + surplus_idx] = -&sign * Rat::one();
            surplus_idx += 1;
        }
        row[2 * n + n_surplus + i] = Rat::one();
        row[ncols] = &sign * &c.rhs;
        rows.push(row);
        flips.push(flip);
    }

    let mut t = Tableau {
        a: rows,
        basis: (0..m).map(|i| 2 * n + n_surplus + i).collect(),
        ncols,
    };

    // Phase 1: maximize -sum(artificials). Reduced cost row for the initial
    // artificial basis: sum of the structural rows.
    let mut cost = vec![Rat::zero(); ncols + 1];
    for r in 0..m {
        for c in 0..=ncols {
            let add = t.a[r][c].clone();
            cost[c] += add;
        }
    }
    for i in 0..m {
        cost[2 * n + n_surplus + i] = Rat::zero();
    }
    let candidates: Vec<bool> = (0..ncols).map(|j| j < 2 * n + n_surplus).collect();
    let ok = t.maximize(&mut cost, &candidates);
    debug_assert!(ok, "phase 1 objective is bounded by construction");
    if cost[ncols].is_positive() {
        // Infeasible: recover the Farkas multipliers from the reduced cost of
        // the artificial columns (y_i = 1 + redcost_i in this orientation).
        let mut y = Vec::with_capacity(m);
        for i in 0..m {
            let red = &cost[2 * n + n_surplus + i];
            let yi = Rat::one() + red;
            y.push(if flips[i] { -yi } else { yi });
        }
        debug_assert!(p.is_farkas_witness(&y), "invalid Farkas certificate");
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            assignment: None,
            objective_value: None,
            farkas: Some(y),
        });
    }

    // Drive artificials out of the basis where possible; rows where it is
    // impossible are identically zero and harmless.
    for r in 0..m {
        if t.basis[r] >= 2 * n + n_surplus {
            if let Some(col) = (0..2 * n + n_surplus).find(|&j| !t.a[r][j].is_zero()) {
                t.pivot(r, col);
            }
        }
    }

    // Phase 2: maximize the real objective, artificial columns frozen.
    let mut cost2 = vec![Rat::zero(); ncols + 1];
    for j in 0..n {
        cost2[j] = p.objective.get(j).cloned().unwrap_or_else(Rat::zero);
        cost2[n + j] = -cost2[j].clone();
    }
    // Reduce against current basis.
    for r in 0..m {
        let b = t.basis[r];
        if !cost2[b].is_zero() {
            let factor = cost2[b].clone();
            for c in 0..=ncols {
                let sub = &factor * &t.a[r][c];
                cost2[c] -= sub;
            }
        }
    }
    let candidates2: Vec<bool> = (0..ncols).map(|j| j < 2 * n + n_surplus).collect();
    let bounded = t.maximize(&mut cost2, &candidates2);

    let mut x = vec![Rat::zero(); 2 * n + n_surplus];
    for r in 0..m {
        if t.basis[r] < x.len() {
            x[t.basis[r]] = t.a[r][ncols].clone();
        }
    }
    let assignment: Vec<Rat> = (0..n).map(|j| &x[j] - &x[n + j]).collect();
    debug_assert!(p.is_feasible_point(&assignment));
    if !bounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            assignment: Some(assignment),
            objective_value: None,
            farkas: None,
        });
    }
    let value: Rat = p
        .objective
        .iter()
        .zip(&assignment)
        .map(|(c, v)| c * v)
        .sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        assignment: Some(assignment),
        objective_value: Some(value),
        farkas: None,
    })
}

/// The result of eliminating equality rows by exact substitution: a reduced
/// inequality-only program plus the data to lift assignments back.
pub struct ReducedProgram {
    pub program: LinearProgram,
    n: usize,
    keep: Vec<usize>,
    subs: Vec<(usize, Vec<Rat>, Rat)>,
}

impl ReducedProgram {
    pub fn lift(&self, x: &[Rat]) -> Vec<Rat> {
        let mut full = vec![Rat::zero(); self.n];
        for (pos, &j) in self.keep.iter().enumerate() {
            full[j] = x[pos].clone();
        }
        for (var, expr, k) in self.subs.iter().rev() {
            let mut v = k.clone();
            for j in 0..self.n {
                if !expr[j].is_zero() {
                    v += &expr[j] * &full[j];
                }
            }
            full[*var] = v;
        }
        full
    }
}

/// Eliminates equality rows by substitution. `None` when a constant row is
/// already contradictory.
pub fn reduce_equalities(p: &LinearProgram) -> Option<ReducedProgram> {
    let n = p.num_vars();
    let mut subs: Vec<(usize, Vec<Rat>, Rat)> = Vec::new();
    let mut eliminated = vec![false; n];
    let mut rows: Vec<(Vec<Rat>, Relation, Rat)> = p
        .constraints
        .iter()
        .map(|c| (c.coeffs.clone(), c.relation, c.rhs.clone()))
        .collect();
    loop {
        let Some(idx) = rows
            .iter()
            .position(|(co, rel, _)| *rel == Relation::Eq && co.iter().any(|c| !c.is_zero()))
        else {
            break;
        };
        let (eco, _, erhs) = rows.swap_remove(idx);
        let var = eco.iter().position(|c| !c.is_zero()).unwrap();
        let pivot = eco[var].clone();
        // var = (erhs - sum_{j != var} eco_j x_j) / pivot
        let mut expr = vec![Rat::zero(); n];
        for (j, c) in eco.iter().enumerate() {
            if j != var && !c.is_zero() {
                expr[j] = -(c / &pivot);
            }
        }
        let konst = &erhs / &pivot;
        for (co, _, rhs) in rows.iter_mut() {
            if co[var].is_zero() {
                continue;
            }
            let f = co[var].clone();
            co[var] = Rat::zero();
            for j in 0..n {
                if !expr[j].is_zero() {
                    co[j] += &f * &expr[j];
                }
            }
            *rhs -= &f * &konst;
        }
        for (_, e, k) in subs.iter_mut() {
            if !e[var].is_zero() {
                let f = e[var].clone();
                e[var] = Rat::zero();
                for j in 0..n {
                    if !expr[j].is_zero() {
                        e[j] += &f * &expr[j];
                    }
                }
                *k += &f * &konst;
            }
        }
        eliminated[var] = true;
        subs.push((var, expr, konst));
    }
    let keep: Vec<usize> = (0..n).filter(|&j| !eliminated[j]).collect();
    let mut reduced = LinearProgram::new(keep.iter().map(|j| p.variables[*j].clone()).collect());
    let mut full_obj: Vec<Rat> = (0..n)
        .map(|j| p.objective.get(j).cloned().unwrap_or_else(Rat::zero))
        .collect();
    for (var, expr, _k) in subs.iter().rev() {
        if !full_obj[*var].is_zero() {
            let f = full_obj[*var].clone();
            full_obj[*var] = Rat::zero();
            for j in 0..n {
                if !expr[j].is_zero() {
                    full_obj[j] += &f * &expr[j];
                }
            }
        }
    }
    reduced.objective = keep.iter().map(|&j| full_obj[j].clone()).collect();
    for (co, rel, rhs) in rows {
        if co.iter().all(|c| c.is_zero()) {
            let bad = match rel {
                Relation::Ge => rhs.is_positive(),
                Relation::Eq => !rhs.is_zero(),
            };
            if bad {
                return None;
            }
            continue;
        }
        reduced.constrain(keep.iter().map(|&j| co[j].clone()).collect(), rel, rhs);
    }
    reduced.dedupe();
    Some(ReducedProgram {
        program: reduced,
        n,
        keep,
        subs,
    })
}

/// Feasibility-oriented solve: equality rows are eliminated by exact
/// substitution first and the witness is lifted back. Farkas certificates are
/// not produced on this path; use `solve` when they are needed.
pub fn solve_with_presolve(p: &LinearProgram) -> Result<LpSolution> {
    let Some(red) = reduce_equalities(p) else {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            assignment: None,
            objective_value: None,
            farkas: None,
        });
    };
    let sol = solve(&red.program)?;
    Ok(LpSolution {
        status: sol.status,
        assignment: sol.assignment.map(|x| red.lift(&x)),
        objective_value: sol.objective_value,
        farkas: None,
    })
}

/// Independent feasibility oracle by exact Fourier-Motzkin elimination.
/// Derived rows carry the set of original rows they combine; Imbert's
/// criterion (history larger than eliminated-count + 1 means redundant)
/// keeps the row growth polynomial on small systems.
pub fn fm_eliminate(p: &LinearProgram) -> Result<bool> {
    if p.num_vars() > FM_MAX_VARIABLES {
        return Err(Error::SizeBudgetExceeded(format!(
            "Fourier-Motzkin supports <= {FM_MAX_VARIABLES} variables, got {}",
            p.num_vars()
        )));
    }
    type Row = (Vec<Rat>, Relation, Rat, std::collections::BTreeSet<usize>);
    let mut rows: Vec<Row> = p
        .constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            (
                c.coeffs.clone(),
                c.relation,
                c.rhs.clone(),
                std::collections::BTreeSet::from([i]),
            )
        })
        .collect();
    let mut live: Vec<usize> = (0..p.num_vars()).collect();
    let mut eliminated = 0usize;

    while !live.is_empty() {
        // Substitute using an equality row when one mentions a live variable.
        let eq_hit = rows.iter().enumerate().find_map(|(idx, (co, rel, _, _))| {
            if *rel != Relation::Eq {
                return None;
            }
            live.iter().position(|&v| !co[v].is_zero()).map(|vi| (idx, vi))
        });
        if let Some((idx, vi)) = eq_hit {
            let var = live[vi];
            let (eco, _, erhs, ehist) = rows.swap_remove(idx);
            let pivot = eco[var].clone();
            for (co, _, rhs, hist) in rows.iter_mut() {
                if co[var].is_zero() {
                    continue;
                }
                let factor = &co[var] / &pivot;
                for j in 0..co.len() {
                    let sub = &factor * &eco[j];
                    co[j] -= sub;
                }
                let sub = &factor * &erhs;
                *rhs -= sub;
                hist.extend(ehist.iter().cloned());
            }
            live.remove(vi);
            eliminated += 1;
        } else {
            // Pick the variable minimizing the number of products.
            let (vi, _) = live
                .iter()
                .enumerate()
                .map(|(vi, &var)| {
                    let pos = rows.iter().filter(|(co, _, _, _)| co[var].is_positive()).count();
                    let neg = rows.iter().filter(|(co, _, _, _)| co[var].is_negative()).count();
                    (vi, pos * neg)
                })
                .min_by_key(|&(_, cost)| cost)
                .expect("live variable exists");
            let var = live.remove(vi);
            eliminated += 1;
            let mut lowers: Vec<Row> = Vec::new();
            let mut uppers: Vec<Row> = Vec::new();
            let mut rest: Vec<Row> = Vec::new();
            for row in rows.drain(..) {
                if row.0[var].is_zero() {
                    rest.push(row);
                } else if row.0[var].is_positive() {
                    lowers.push(row);
                } else {
                    uppers.push(row);
                }
            }
            for (lc, _, lr, lh) in &lowers {
                for (uc, _, ur, uh) in &uppers {
                    let mut hist = lh.clone();
                    hist.extend(uh.iter().cloned());
                    // Imbert's redundancy criterion.
                    if hist.len() > eliminated + 1 {
                        continue;
                    }
                    let a = lc[var].clone();
                    let b = -uc[var].clone();
                    let mut co: Vec<Rat> =
                        (0..lc.len()).map(|j| &b * &lc[j] + &a * &uc[j]).collect();
                    co[var] = Rat::zero();
                    let rhs = &b * lr + &a * ur;
                    rest.push((co, Relation::Ge, rhs, hist));
                }
            }
            rows = rest;
        }
        // Normalize to primitive integer rows and dedupe.
        for (co, _, rhs, _) in rows.iter_mut() {
            let mut all = co.clone();
            all.push(rhs.clone());
            let prim = crate::rat::QVec(all).primitive().0;
            let n = co.len();
            *rhs = prim[n].clone();
            co.clone_from_slice(&prim[..n]);
        }
        rows.sort_by(|a, b| {
            (&a.0, &a.2, a.1 == Relation::Eq, a.3.len())
                .cmp(&(&b.0, &b.2, b.1 == Relation::Eq, b.3.len()))
        });
        rows.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1 && a.2 == b.2);
        // Keep only contradictions among the constant rows; if any survive,
        // the system is infeasible.
        rows.retain(|(co, rel, rhs, _)| {
            if co.iter().any(|c| !c.is_zero()) {
                return true;
            }
            match rel {
                Relation::Ge => rhs.is_positive(),
                Relation::Eq => !rhs.is_zero(),
            }
        });
        if rows.iter().any(|(co, _, _, _)| co.iter().all(|c| c.is_zero())) {
            return Ok(false);
        }
    }
    for (_, rel, rhs, _) in &rows {
        let bad = match rel {
            Relation::Ge => rhs.is_positive(),
            Relation::Eq => !rhs.is_zero(),
        };
        if bad {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn var_names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn maximizes_bounded_epsilon() {
        // max eps s.t. eps <= 1.
        let mut p = LinearProgram::new(var_names(1));
        p.objective = vec![rint(1)];
        p.constrain(vec![rint(-1)], Relation::Ge, rint(-1));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective_value.unwrap(), rint(1));
    }

    #[test]
    fn infeasible_pair_has_farkas_witness() {
        // x >= 1 and -x >= 0.
        let mut p = LinearProgram::new(var_names(1));
        p.objective = vec![rint(0)];
        p.constrain(vec![rint(1)], Relation::Ge, rint(1));
        p.constrain(vec![rint(-1)], Relation::Ge, rint(0));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        let y = s.farkas.unwrap();
        assert!(p.is_farkas_witness(&y));
        assert_eq!(y, vec![rint(1), rint(1)]);
        assert!(!fm_eliminate(&p).unwrap());
    }

    #[test]
    fn detects_unbounded_direction() {
        let mut p = LinearProgram::new(var_names(2));
        p.objective = vec![rint(1), rint(0)];
        p.constrain(vec![rint(0), rint(1)], Relation::Ge, rint(0));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
    }

    #[test]
    fn equalities_and_fractions() {
        // x + y = 1, x - y >= 1/3, max y  =>  y = 1/3.
        let mut p = LinearProgram::new(var_names(2));
        p.objective = vec![rint(0), rint(1)];
        p.constrain(vec![rint(1), rint(1)], Relation::Eq, rint(1));
        p.constrain(vec![rint(1), rint(-1)], Relation::Ge, rat(1, 3));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective_value.unwrap(), rat(1, 3));
        assert!(fm_eliminate(&p).unwrap());
    }

    #[test]
    fn simplex_agrees_with_elimination_on_random_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut feasible = 0;
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=8);
            let mut p = LinearProgram::new(var_names(n));
            p.objective = vec![rint(0); n];
            for _ in 0..m {
                let coeffs: Vec<Rat> = (0..n).map(|_| rint(rng.gen_range(-3..=3))).collect();
                let rel = if rng.gen_bool(0.2) {
                    Relation::Eq
                } else {
                    Relation::Ge
                };
                p.constrain(coeffs, rel, rint(rng.gen_range(-4..=4)));
            }
            let s = solve(&p).unwrap();
            let fm = fm_eliminate(&p).unwrap();
            assert_eq!(s.status != LpStatus::Infeasible, fm);
            if fm {
                feasible += 1;
                assert!(p.is_feasible_point(&s.assignment.unwrap()));
            } else {
                assert!(p.is_farkas_witness(&s.farkas.unwrap()));
            }
        }
        assert!(feasible > 5, "want both outcomes exercised, got {feasible}");
    }
}
