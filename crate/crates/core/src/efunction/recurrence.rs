//! Taylor coefficients of a solution of `T·Y' = (T·A)·Y` from its seeds.
//!
//! Writing `Y = Σ y_s z^s`, `T = Σ t_d z^d` and `T·A = Σ M_d z^d`, the
//! coefficient of `z^k` gives
//!
//! ```text
//! Σ_j (t_{k+1-j}·j·I − M_{k-j}) y_j = 0.
//! ```
//!
//! With `h = max(1 − ord T, −ord(T·A))` the highest index appearing in
//! equation `k` is `s = k + h`, so the equations can be solved one index at
//! a time. When the leading block is singular (an integer local exponent) the
//! missing components must come from the seeds.

use num_traits::{One, Signed, Zero};

use crate::algebra::{RatPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RecurrenceIssue {
    Underdetermined { index: usize },
    Inconsistent { index: usize },
}

pub(crate) struct Recurrence {
    m: usize,
    t: Vec<Rational>,
    /// `mats[d]` is the coefficient of `z^d` in `T·A`, row major.
    mats: Vec<Vec<Vec<Rational>>>,
    shift: i64,
}

impl Recurrence {
    pub(crate) fn new(t: &RatPoly, ta: &[Vec<RatPoly>]) -> Self {
        let m = ta.len();
        let q = ta
            .iter()
            .flatten()
            .filter_map(RatPoly::degree)
            .max()
            .unwrap_or(0);
        let mats: Vec<Vec<Vec<Rational>>> = (0..=q)
            .map(|d| {
                (0..m)
                    .map(|i| (0..m).map(|j| ta[i][j].coeff(d)).collect())
                    .collect()
            })
            .collect();
        let t_ord = t.valuation().expect("T is nonzero") as i64;
        let shift = match mats
            .iter()
            .position(|mat| mat.iter().flatten().any(|x| !x.is_zero()))
        {
            Some(d) => (1 - t_ord).max(-(d as i64)),
            None => 1 - t_ord,
        };
        Recurrence {
            m,
            t: t.coeffs().to_vec(),
            mats,
            shift,
        }
    }

    /// Block multiplying `y_j` in the equation for `z^k`.
    fn block(&self, k: i64, j: usize) -> Option<Vec<Vec<Rational>>> {
        let td = k + 1 - j as i64;
        let md = k - j as i64;
        let tc = (td >= 0)
            .then(|| self.t.get(td as usize))
            .flatten()
            .filter(|c| !c.is_zero());
        let mc = (md >= 0).then(|| self.mats.get(md as usize)).flatten();
        if tc.is_none() && mc.is_none() {
            return None;
        }
        let jr = Rational::from_integer(j.into());
        let mut out = vec![vec![Rational::zero(); self.m]; self.m];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                if let Some(mat) = mc {
                    *x = -mat[r][c].clone();
                }
                if r == c {
                    if let Some(t) = tc {
                        *x += t * &jr;
                    }
                }
            }
        }
        Some(out)
    }

    /// Coefficient vectors `y_0..=y_n` (indexed `[s][component]`).
    pub(crate) fn solve(
        &self,
        seeds: &[Vec<Rational>],
        n: usize,
    ) -> Result<Vec<Vec<Rational>>, RecurrenceIssue> {
        let mut ys: Vec<Vec<Rational>> = Vec::with_capacity(n + 1);
        let depth = self.mats.len().max(self.t.len()) as i64;
        for s in 0..=n {
            let k = s as i64 - self.shift;
            let fixed: Vec<Option<&Rational>> = seeds.iter().map(|sd| sd.get(s)).collect();
            if k < 0 {
                // no equation has y_s as its leading unknown
                let y = fixed
                    .iter()
                    .map(|f| f.cloned().ok_or(RecurrenceIssue::Underdetermined { index: s }))
                    .collect::<Result<Vec<_>, _>>()?;
                ys.push(y);
                continue;
            }
            let lead = self.block(k, s).unwrap_or_else(|| vec![vec![Rational::zero(); self.m]; self.m]);
            let mut rhs = vec![Rational::zero(); self.m];
            let lo = (k - depth).max(0) as usize;
            for (j, yj) in ys.iter().enumerate().skip(lo) {
                if let Some(b) = self.block(k, j) {
                    for (r, acc) in rhs.iter_mut().enumerate() {
                        for (c, y) in yj.iter().enumerate() {
                            if !y.is_zero() {
                                *acc -= &b[r][c] * y;
                            }
                        }
                    }
                }
            }
            ys.push(solve_with_fixed(&lead, rhs, &fixed).map_err(|e| match e {
                SolveIssue::Inconsistent => RecurrenceIssue::Inconsistent { index: s },
                SolveIssue::Underdetermined => RecurrenceIssue::Underdetermined { index: s },
            })?);
        }
        Ok(ys)
    }

    /// Largest index at which the leading block can be singular, when that
    /// set is finite.
    pub(crate) fn last_singular_index(&self) -> Option<usize> {
        let t_ord = self.t.iter().position(|c| !c.is_zero()).unwrap_or(0) as i64;
        if self.shift != 1 - t_ord {
            // leading block is constant in s
            return None;
        }
        let lead_t = self.t[t_ord as usize].clone();
        let md = -self.shift;
        let bound = if md >= 0 && (md as usize) < self.mats.len() {
            let mat = &self.mats[md as usize];
            mat.iter()
                .map(|row| row.iter().map(|x| x.abs()).sum::<Rational>())
                .max()
                .unwrap_or_else(Rational::zero)
                / lead_t.abs()
        } else {
            Rational::zero()
        };
        // eigenvalues of M/t are bounded by the max row sum
        Some(bound.floor().to_integer().try_into().unwrap_or(usize::MAX / 2))
    }
}

enum SolveIssue {
    Inconsistent,
    Underdetermined,
}

/// Solves `lead · y = rhs` where some components of `y` are already fixed.
fn solve_with_fixed(
    lead: &[Vec<Rational>],
    mut rhs: Vec<Rational>,
    fixed: &[Option<&Rational>],
) -> Result<Vec<Rational>, SolveIssue> {
    let m = fixed.len();
    let unknown: Vec<usize> = (0..m).filter(|&i| fixed[i].is_none()).collect();
    for (c, f) in fixed.iter().enumerate() {
        if let Some(v) = f {
            for (r, acc) in rhs.iter_mut().enumerate() {
                *acc -= &lead[r][c] * *v;
            }
        }
    }
    // augmented system over the unknown columns
    let mut a: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let mut row: Vec<Rational> = unknown.iter().map(|&c| lead[r][c].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let u = unknown.len();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..u {
        let Some(p) = (row..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pr = a[row].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[u].is_zero()) {
        return Err(SolveIssue::Inconsistent);
    }
    if pivot_cols.len() < u {
        return Err(SolveIssue::Underdetermined);
    }
    let mut y: Vec<Rational> = fixed
        .iter()
        .map(|f| f.cloned().unwrap_or_else(Rational::zero))
        .collect();
    for (r, &col) in pivot_cols.iter().enumerate() {
        y[unknown[col]] = a[r][u].clone();
    }
    debug_assert!(pivot_cols.iter().enumerate().all(|(r, &c)| a[r][c].is_one()));
    Ok(y)
}
