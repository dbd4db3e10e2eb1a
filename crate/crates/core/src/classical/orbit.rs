use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{q_int, rank_over_q, Matrix, Rational};
use crate::liealg::{ChevalleyBasis, ParabolicDatum};
use crate::Error;

type Mat = Vec<Vec<Rational>>;

/// Exact rational points `g Λ₀ g⁻¹` of a semisimple adjoint orbit in `sl_n`.
#[derive(Clone, Debug)]
pub struct OrbitSample {
    pub n: usize,
    pub eigenvalues: Vec<Rational>,
    pub seed: u64,
    pub points: Vec<Mat>,
}

fn elementary_conjugate(m: &mut Mat, i: usize, j: usize, c: &Rational) {
    // (I + c E_ij) M (I - c E_ij)
    let n = m.len();
    let row_j = m[j].clone();
    for k in 0..n {
        let v = &row_j[k] * c;
        m[i][k] += v;
    }
    for row in m.iter_mut() {
        let v = &row[i] * c;
        row[j] -= v;
    }
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                c[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    c
}

/// `exp(cX)` for nilpotent `X`, summed until the powers vanish.
fn exp_nilpotent(x: &[Vec<Rational>], c: &Rational) -> Mat {
    let n = x.len();
    let cx: Mat = x.iter().map(|row| row.iter().map(|v| v * c).collect()).collect();
    let mut out: Mat = (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    let mut term = out.clone();
    for k in 1..=n {
        term = mat_mul(&term, &cx);
        if term.iter().all(|r| r.iter().all(|v| v.is_zero())) {
            break;
        }
        let kq = q_int(k as i64);
        term = term.iter().map(|r| r.iter().map(|v| v / &kq).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                out[i][j] += &term[i][j];
            }
        }
    }
    out
}

impl OrbitSample {
    pub fn new(eigenvalues: Vec<Rational>, count: usize, seed: u64) -> Result<OrbitSample, Error> {
        let n = eigenvalues.len();
        if n < 2 {
            return Err(Error::InvalidInput("need at least two eigenvalues".into()));
        }
        let trace: Rational = eigenvalues.iter().sum();
        if !trace.is_zero() {
            return Err(Error::InvalidInput("eigenvalues must sum to zero".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(count);
        for _ in 0..count {
            let mut m: Mat = (0..n)
                .map(|i| (0..n).map(|j| if i == j { eigenvalues[i].clone() } else { Rational::zero() }).collect())
                .collect();
            for _ in 0..3 * n {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let mut c = rng.gen_range(1..=2i64);
                if rng.gen_bool(0.5) {
                    c = -c;
                }
                elementary_conjugate(&mut m, i, j, &q_int(c));
            }
            points.push(m);
        }
        Ok(OrbitSample { n, eigenvalues, seed, points })
    }

    /// Points `g M₀ g⁻¹` of the orbit through the functional with `λ(h_i)` given per simple
    /// root and vanishing on root vectors, identified with `M₀` via the trace form of the
    /// matrix model. `g` is a product of root exponentials `exp(c X_α)`.
    pub fn for_functional(pd: &ParabolicDatum, cartan_values: &[Rational], count: usize, seed: u64) -> Result<OrbitSample, Error> {
        let b = &pd.basis;
        let r = b.rank();
        let n = b.matrix(b.h(0)).len();
        let trace_form = |x: usize, y: usize| -> Rational {
            let (mx, my) = (b.matrix(x), b.matrix(y));
            let mut t = Rational::zero();
            for i in 0..n {
                for k in 0..n {
                    t += &mx[i][k] * &my[k][i];
                }
            }
            t
        };
        // M₀ = Σ a_j H_j with tr(M₀ H_i) = λ(h_i)
        let mut rows: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                let mut row: Vec<Rational> = (0..r).map(|j| trace_form(b.h(i), b.h(j))).collect();
                row.push(cartan_values[i].clone());
                row
            })
            .collect();
        crate::exact::rref(&mut rows);
        let mut m0: Mat = vec![vec![Rational::zero(); n]; n];
        for (j, row) in rows.iter().enumerate() {
            let hj = b.matrix(b.h(j));
            for i in 0..n {
                for k in 0..n {
                    m0[i][k] += &row[r] * &hj[i][k];
                }
            }
        }
        let root_mats: Vec<usize> = (0..b.n_pos()).flat_map(|k| [b.e(k), b.f(k)]).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(count);
        for _ in 0..count {
            let mut m = m0.clone();
            for _ in 0..3 * n {
                let x = root_mats[rng.gen_range(0..root_mats.len())];
                let mut c = rng.gen_range(1..=2i64);
                if rng.gen_bool(0.5) {
                    c = -c;
                }
                let g = exp_nilpotent(b.matrix(x), &q_int(c));
                let gi = exp_nilpotent(b.matrix(x), &q_int(-c));
                m = mat_mul(&mat_mul(&g, &m), &gi);
            }
            points.push(m);
        }
        let eigenvalues = (0..n).map(|i| m0[i][i].clone()).collect();
        Ok(OrbitSample { n, eigenvalues, seed, points })
    }

    /// Coordinates `ξ(x) = tr(M x)` of every point on every basis element.
    pub fn coordinates(&self, basis: &ChevalleyBasis) -> Vec<Vec<Rational>> {
        self.points
            .iter()
            .map(|m| {
                (0..basis.dim())
                    .map(|x| {
                        let xm = basis.matrix(x);
                        let mut tr = Rational::zero();
                        for i in 0..self.n {
                            for k in 0..self.n {
                                if !xm[k][i].is_zero() {
                                    tr += &m[i][k] * &xm[k][i];
                                }
                            }
                        }
                        tr
                    })
                    .collect()
            })
            .collect()
    }

    /// `tr(M^k)` for `k = 1..=n`; identical for every point of the orbit.
    pub fn power_traces(m: &Mat) -> Vec<Rational> {
        let n = m.len();
        let mut p = m.clone();
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            out.push((0..n).map(|i| p[i][i].clone()).sum());
            if k < n {
                let mut q = vec![vec![Rational::zero(); n]; n];
                for i in 0..n {
                    for l in 0..n {
                        if p[i][l].is_zero() {
                            continue;
                        }
                        for j in 0..n {
                            q[i][j] += &p[i][l] * &m[l][j];
                        }
                    }
                }
                p = q;
            }
        }
        out
    }
}

/// Exponent vectors of total degree `≤ d` in `nvars` variables.
pub fn monomials_up_to(nvars: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(p: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if p == cur.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur[p] = a as u32;
            rec(p + 1, left - a, cur, out);
        }
        cur[p] = 0;
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

fn eval_monomial(exps: &[u32], coords: &[Rational]) -> Rational {
    let mut v = Rational::one();
    for (e, c) in exps.iter().zip(coords) {
        for _ in 0..*e {
            v *= c;
        }
    }
    v
}

fn evaluation_rank(monos: &[&Vec<u32>], coords: &[Vec<Rational>]) -> usize {
    let rows: Vec<Vec<Rational>> = monos.iter().map(|m| coords.iter().map(|c| eval_monomial(m, c)).collect()).collect();
    rank_over_q(&Matrix::from_rows(rows))
}

/// `dim F_λ^{≤d}`: rank of the evaluation matrix of monomials of degree `≤ d` at the sample points.
pub fn orbit_filtered_dim(sample: &OrbitSample, basis: &ChevalleyBasis, d: usize) -> Result<usize, Error> {
    let monos = monomials_up_to(basis.dim(), d);
    if sample.points.len() < monos.len() {
        return Err(Error::InvalidInput(format!(
            "insufficient points: {} points for {} monomials",
            sample.points.len(),
            monos.len()
        )));
    }
    let coords = sample.coordinates(basis);
    Ok(evaluation_rank(&monos.iter().collect::<Vec<_>>(), &coords))
}

/// Weight-graded version of [`orbit_filtered_dim`]: the orbit ideal is torus-stable, so the
/// quotient splits by weight. Weights are in fundamental-weight coordinates.
pub fn orbit_weight_ranks(sample: &OrbitSample, basis: &ChevalleyBasis, d: usize) -> Result<BTreeMap<Vec<i64>, u64>, Error> {
    let monos = monomials_up_to(basis.dim(), d);
    if sample.points.len() < monos.len() {
        return Err(Error::InvalidInput(format!(
            "insufficient points: {} points for {} monomials",
            sample.points.len(),
            monos.len()
        )));
    }
    let rs = &basis.rs;
    let elem_weights: Vec<Vec<i64>> = (0..basis.dim()).map(|x| rs.root_to_weight(&basis.weight(x))).collect();
    let mut groups: BTreeMap<Vec<i64>, Vec<&Vec<u32>>> = BTreeMap::new();
    for m in &monos {
        let mut w = vec![0i64; rs.rank];
        for (x, &e) in m.iter().enumerate() {
            for (wi, v) in w.iter_mut().zip(&elem_weights[x]) {
                *wi += e as i64 * v;
            }
        }
        groups.entry(w).or_default().push(m);
    }
    let coords = sample.coordinates(basis);
    let mut out = BTreeMap::new();
    for (w, ms) in groups {
        let r = evaluation_rank(&ms, &coords);
        if r > 0 {
            out.insert(w, r as u64);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::RootSystem;

    fn sl(n: usize) -> ChevalleyBasis {
        ChevalleyBasis::new(&RootSystem::from_name(&format!("A{}", n - 1)).unwrap())
    }

    #[test]
    fn points_stay_on_the_orbit() {
        let s = OrbitSample::new(vec![q_int(2), q_int(-1), q_int(-1)], 4, 7).unwrap();
        let base = OrbitSample::power_traces(&vec![
            vec![q_int(2), q_int(0), q_int(0)],
            vec![q_int(0), q_int(-1), q_int(0)],
            vec![q_int(0), q_int(0), q_int(-1)],
        ]);
        for p in &s.points {
            assert_eq!(OrbitSample::power_traces(p), base);
        }
    }

    #[test]
    fn sl2_regular_dims() {
        let b = sl(2);
        let s = OrbitSample::new(vec![q_int(1), q_int(-1)], 30, 1).unwrap();
        let dims: Vec<usize> = (0..4).map(|d| orbit_filtered_dim(&s, &b, d).unwrap()).collect();
        assert_eq!(dims, vec![1, 4, 9, 16]);
        let s2 = OrbitSample::new(vec![q_int(1), q_int(-1)], 30, 2).unwrap();
        assert_eq!(orbit_filtered_dim(&s2, &b, 3).unwrap(), 16);
    }

    #[test]
    fn sl3_regular_degree_one() {
        let b = sl(3);
        let s = OrbitSample::new(vec![q_int(1), q_int(0), q_int(-1)], 12, 3).unwrap();
        assert_eq!(orbit_filtered_dim(&s, &b, 1).unwrap(), 9);
        assert_eq!(orbit_filtered_dim(&s, &b, 0).unwrap(), 1);
    }

    #[test]
    fn sp4_orbit_points_preserve_power_traces() {
        let pd = ParabolicDatum::from_names("B2", &[]).unwrap();
        let s = OrbitSample::for_functional(&pd, &[q_int(2), q_int(3)], 3, 5).unwrap();
        let base = OrbitSample::power_traces(&s.points[0]);
        assert!(s.points.iter().all(|p| OrbitSample::power_traces(p) == base));
        let b = &pd.basis;
        let coords = s.coordinates(b);
        assert_ne!(coords[0], coords[1]);
        // B2 regular orbit: dim 8, one quadratic invariant
        let s = OrbitSample::for_functional(&pd, &[q_int(2), q_int(3)], 80, 5).unwrap();
        assert_eq!(orbit_filtered_dim(&s, b, 2).unwrap(), 65);
    }

    #[test]
    fn insufficient_points_is_an_error() {
        let b = sl(2);
        let s = OrbitSample::new(vec![q_int(1), q_int(-1)], 3, 1).unwrap();
        assert!(orbit_filtered_dim(&s, &b, 2).is_err());
    }
}
