//! Exact rank computations over Q and over fraction fields of Q[vars].

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FractionElement, Matrix, MultiPoly, Rational, Var};

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_over_q(m: &Matrix<Rational>) -> usize {
    let mut e = QEchelon::default();
    for r in 0..m.rows() {
        let v: BTreeMap<usize, Rational> = m
            .row(r)
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        e.insert(v);
    }
    e.rank()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    let pivots = rref(&mut rows);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); n];
            x[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -rows[i][f].clone();
            }
            x
        })
        .collect()
}

/// Incremental echelon basis of sparse rational vectors (pivot = leading index).
#[derive(Clone, Debug, Default)]
pub struct QEchelon {
    rows: Vec<BTreeMap<usize, Rational>>,
    by_pivot: HashMap<usize, usize>,
}

impl QEchelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after elimination against the stored rows.
    pub fn reduce(&self, mut v: BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        let mut floor = 0usize;
        loop {
            let next = v.range(floor..).find(|(k, _)| self.by_pivot.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { return v };
            let row = &self.rows[self.by_pivot[&k]];
            for (j, x) in row {
                let e = v.entry(*j).or_insert_with(Rational::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(j);
                }
            }
            floor = k + 1;
        }
    }

    pub fn contains(&self, v: BTreeMap<usize, Rational>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert `v`; returns whether it was independent of the stored rows.
    pub fn insert(&mut self, v: BTreeMap<usize, Rational>) -> bool {
        let r = self.reduce(v);
        let Some((&k, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let r: BTreeMap<usize, Rational> = r.into_iter().map(|(j, x)| (j, x * &inv)).collect();
        self.by_pivot.insert(k, self.rows.len());
        self.rows.push(r);
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecializeError {
    #[error("denominator vanishes at entry ({row}, {col}): {entry}")]
    DenominatorVanishes { row: usize, col: usize, entry: String },
    #[error("assignment leaves variable {var} free at entry ({row}, {col})")]
    Unassigned { row: usize, col: usize, var: String },
}

/// Substitute rational values for every variable.
pub fn specialize(
    m: &Matrix<FractionElement>,
    assignment: &[(Var, Rational)],
) -> Result<Matrix<Rational>, SpecializeError> {
    let mut out = Matrix::zeros(m.rows(), m.cols());
    for (r, c, x) in m.entries() {
        let v = x.eval(assignment).map_err(|_| SpecializeError::DenominatorVanishes {
            row: r,
            col: c,
            entry: x.to_string(),
        })?;
        let val = v.as_constant().ok_or_else(|| SpecializeError::Unassigned {
            row: r,
            col: c,
            var: v.vars()[0].name(),
        })?;
        out.set(r, c, val);
    }
    Ok(out)
}

/// Rank over Q of a polynomial matrix evaluated at a point (polynomial entries only).
pub fn specialized_rank(m: &Matrix<MultiPoly>, assignment: &[(Var, Rational)]) -> usize {
    let ev = m.map(|p| p.eval_rational(assignment).expect("complete polynomial assignment"));
    rank_over_q(&ev)
}

/// Fraction-free (Bareiss) elimination; returns rank, pivot rows/cols, the last pivot and
/// the row-swap parity.
fn bareiss(m: &Matrix<MultiPoly>) -> (usize, MultiPoly, bool) {
    let mut a: Vec<Vec<MultiPoly>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    let (n, cols) = (m.rows(), m.cols());
    let mut prev = MultiPoly::one();
    let mut r = 0;
    let mut swaps = false;
    for c in 0..cols {
        if r == n {
            break;
        }
        // pivot-size heuristic: fewest terms, then lowest total degree
        let Some(p) = (r..n)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| (a[i][c].len(), a[i][c].total_degree()))
        else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps = !swaps;
        }
        let piv = a[r][c].clone();
        for i in r + 1..n {
            let f = a[i][c].clone();
            for j in c + 1..cols {
                let num = piv.mul(&a[i][j]).sub(&f.mul(&a[r][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss division must be exact");
            }
            a[i][c] = MultiPoly::zero();
        }
        // rows r+1.. on columns < c are already zero
        prev = piv;
        r += 1;
    }
    (r, prev, swaps)
}

pub fn bareiss_rank(m: &Matrix<MultiPoly>) -> usize {
    bareiss(m).0
}

/// Determinant via fraction-free elimination.
pub fn bareiss_determinant(m: &Matrix<MultiPoly>) -> MultiPoly {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    if m.rows() == 0 {
        return MultiPoly::one();
    }
    let (r, last, swaps) = bareiss(m);
    if r < m.rows() {
        return MultiPoly::zero();
    }
    if swaps {
        last.neg()
    } else {
        last
    }
}

/// Clear denominators row by row and shift away negative exponents.
fn to_polynomial_rows(m: &Matrix<FractionElement>) -> Matrix<MultiPoly> {
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let mut dens: Vec<MultiPoly> = Vec::new();
        for x in m.row(r) {
            if !x.denom().is_one() && !dens.contains(x.denom()) {
                dens.push(x.denom().clone());
            }
        }
        let mult = dens.iter().fold(MultiPoly::one(), |a, b| a.mul(b));
        let mut row: Vec<MultiPoly> = m
            .row(r)
            .iter()
            .map(|x| x.numer().mul(&mult.div_exact(x.denom()).expect("denominator divides the product")))
            .collect();
        // Laurent monomials: multiply the row by a monomial to make it polynomial
        let mut shift: Vec<(Var, i32)> = Vec::new();
        for p in &row {
            for v in p.vars() {
                let lo = p.min_degree_in(v);
                if lo < 0 {
                    match shift.iter_mut().find(|(w, _)| *w == v) {
                        Some((_, e)) => *e = (*e).max(-lo),
                        None => shift.push((v, -lo)),
                    }
                }
            }
        }
        if !shift.is_empty() {
            shift.sort();
            let mono = super::Monomial(shift);
            row = row.into_iter().map(|p| p.mul_monomial(&mono)).collect();
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Matrix::zeros(0, m.cols());
    }
    Matrix::from_rows(rows)
}

fn random_point(vars: &[Var], rng: &mut ChaCha8Rng) -> Vec<(Var, Rational)> {
    vars.iter()
        .map(|v| {
            let x: i64 = rng.gen_range(1..=997);
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            (*v, Rational::from_integer((s * x).into()))
        })
        .collect()
}

/// Rank over the fraction field of Q[vars].
///
/// A seeded random specialization gives a lower bound. With a single variable the bound is
/// certified exactly: every (r+1)-minor has degree at most (r+1)·δ, so if the rank stays ≤ r at
/// (r+1)·δ + 1 distinct points all those minors vanish identically. With several variables the
/// rank is computed by fraction-free elimination.
pub fn rank_over_fractions(m: &Matrix<FractionElement>) -> usize {
    let p = to_polynomial_rows(m);
    // drop zero rows and columns
    let rows: Vec<usize> = (0..p.rows()).filter(|&r| p.row(r).iter().any(|x| !x.is_zero())).collect();
    let cols: Vec<usize> = (0..p.cols()).filter(|&c| rows.iter().any(|&r| !p.get(r, c).is_zero())).collect();
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    let p = p.select_rows(&rows).select_cols(&cols);
    let mut vars: Vec<Var> = p.entries().flat_map(|(_, _, x)| x.vars()).collect();
    vars.sort();
    vars.dedup();
    if vars.is_empty() {
        return rank_over_q(&p.map(|x| x.as_constant().unwrap()));
    }
    let full = p.rows().min(p.cols());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut r0 = 0;
    for _ in 0..2 {
        r0 = r0.max(specialized_rank(&p, &random_point(&vars, &mut rng)));
        if r0 == full {
            return r0;
        }
    }
    if vars.len() == 1 {
        let v = vars[0];
        let delta = p.entries().map(|(_, _, x)| x.degree_in(v)).max().unwrap_or(0).max(0) as usize;
        let mut checked = 0usize;
        loop {
            let needed = (r0 + 1) * delta + 1;
            let mut raised = false;
            while checked < needed {
                checked += 1;
                let r = specialized_rank(&p, &[(v, Rational::from_integer((checked as i64).into()))]);
                if r > r0 {
                    r0 = r;
                    raised = true;
                    break;
                }
            }
            if r0 == full || !raised {
                return r0;
            }
        }
    }
    bareiss_rank(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_int;

    fn fe(p: MultiPoly) -> FractionElement {
        p.into()
    }

    #[test]
    fn identity_has_full_rank() {
        let m: Matrix<FractionElement> = Matrix::identity(3);
        assert_eq!(rank_over_fractions(&m), 3);
    }

    #[test]
    fn proportional_rows() {
        let l = MultiPoly::var(Var::lambda(0));
        let h = MultiPoly::var(Var::h());
        let m = Matrix::from_rows(vec![
            vec![fe(l.clone()), fe(h.clone())],
            vec![fe(l.scale(&q_int(2))), fe(h.scale(&q_int(2)))],
        ]);
        assert_eq!(rank_over_fractions(&m), 1);
        let pm = m.map(|x| x.numer().clone());
        assert_eq!(bareiss_rank(&pm), 1);
        assert!(bareiss_determinant(&pm).is_zero());
    }

    #[test]
    fn univariate_certificate_finds_generic_rank() {
        // rank 2 generically, rank 1 at lambda = 1..=2 would fool a naive probe
        let l = MultiPoly::var(Var::lambda(0));
        let one = MultiPoly::one();
        let m = Matrix::from_rows(vec![
            vec![fe(one.clone()), fe(one.clone())],
            vec![fe(one.clone()), fe(l.clone())],
        ]);
        assert_eq!(rank_over_fractions(&m), 2);
        let det = bareiss_determinant(&m.map(|x| x.numer().clone()));
        assert_eq!(det, l.sub(&one));
    }

    #[test]
    fn specialize_reports_vanishing_denominator() {
        let l = MultiPoly::var(Var::lambda(0));
        let h = MultiPoly::var(Var::h());
        let m = Matrix::from_rows(vec![vec![FractionElement::new(l, h)]]);
        let err = specialize(&m, &[(Var::lambda(0), q_int(1)), (Var::h(), q_int(0))]).unwrap_err();
        assert!(err.to_string().contains("denominator vanishes"));
    }

    #[test]
    fn specialize_substitutes() {
        let l = MultiPoly::var(Var::lambda(0));
        let h = MultiPoly::var(Var::h());
        let m = Matrix::from_rows(vec![vec![fe(l.sub(&h))]]);
        let s = specialize(&m, &[(Var::lambda(0), q_int(3)), (Var::h(), q_int(1))]).unwrap();
        assert_eq!(s.get(0, 0), &q_int(2));
    }

    #[test]
    fn nullspace_dimension() {
        let m = Matrix::from_rows(vec![vec![q_int(1), q_int(2), q_int(3)], vec![q_int(2), q_int(4), q_int(6)]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for x in ns {
            let s: Rational = x.iter().zip(m.row(0)).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
    }
}
