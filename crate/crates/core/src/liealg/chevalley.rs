use num_traits::{One, Zero};
use serde_json::json;

use super::RootSystem;
use crate::exact::{q_int, rational_to_i64, rref, Rational};

type Mat = Vec<Vec<Rational>>;

/// Kind of a Chevalley basis element together with its root or simple-root index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    E(usize),
    H(usize),
    F(usize),
}

/// Chevalley basis with integral structure constants.
///
/// Basis layout: `e_k` for positive roots `k`, then `h_i`, then `f_k`.
#[derive(Clone, Debug)]
pub struct ChevalleyBasis {
    pub rs: RootSystem,
    brackets: Vec<Vec<Vec<(usize, i64)>>>,
    matrices: Vec<Mat>,
    /// For each non-simple positive root, the pair `(i, beta)` with `gamma = alpha_i + beta`
    /// used to fix the sign of `e_gamma`.
    pub extraspecial: Vec<Option<(usize, usize)>>,
}

fn zero_mat(n: usize) -> Mat {
    vec![vec![Rational::zero(); n]; n]
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = zero_mat(n);
    m[i][j] = Rational::one();
    m
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zero_mat(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn lin(a: &Mat, ca: &Rational, b: &Mat, cb: &Rational) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x * ca + y * cb).collect())
        .collect()
}

fn commutator(a: &Mat, b: &Mat) -> Mat {
    lin(&mat_mul(a, b), &Rational::one(), &mat_mul(b, a), &-Rational::one())
}

fn scaled(a: &Mat, c: &Rational) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

fn transpose(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

fn is_zero_mat(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Matrices of the simple root vectors `e_i` in the defining representation.
fn simple_matrices(rs: &RootSystem) -> Vec<Mat> {
    match rs.type_letter {
        'A' => {
            let n = rs.rank + 1;
            (0..rs.rank).map(|i| unit(n, i, i + 1)).collect()
        }
        'B' => {
            // sp4 with long root 2x_2 and short root x_1 - x_2
            let long = unit(4, 1, 3);
            let short = lin(&unit(4, 0, 1), &Rational::one(), &unit(4, 3, 2), &-Rational::one());
            vec![long, short]
        }
        _ => unreachable!("root system validated on construction"),
    }
}

/// Coordinates of `x` in the span of `basis` (flattened matrices); `None` if outside.
fn solve_in_span(basis: &[Mat], x: &Mat) -> Option<Vec<Rational>> {
    let n = x.len();
    let k = basis.len();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[i][j].clone()).collect();
            row.push(x[i][j].clone());
            rows.push(row);
        }
    }
    let pivots = rref(&mut rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut sol = vec![Rational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = rows[r][k].clone();
    }
    Some(sol)
}

impl ChevalleyBasis {
    pub fn new(rs: &RootSystem) -> ChevalleyBasis {
        let r = rs.rank;
        let np = rs.positive_roots.len();
        let simple = simple_matrices(rs);
        let mut e: Vec<Mat> = Vec::with_capacity(np);
        let mut f: Vec<Mat> = Vec::with_capacity(np);
        let mut extraspecial = vec![None; np];
        let h: Vec<Mat> = simple.iter().map(|x| commutator(x, &transpose(x))).collect();
        for (k, gamma) in rs.positive_roots.iter().enumerate() {
            if k < r {
                e.push(simple[k].clone());
                f.push(transpose(&simple[k]));
                continue;
            }
            let (i, b) = (0..r)
                .find_map(|i| {
                    let mut beta = gamma.clone();
                    beta[i] -= 1;
                    rs.root_index(&beta).map(|b| (i, b))
                })
                .expect("non-simple root has a simple predecessor");
            extraspecial[k] = Some((i, b));
            let beta = &rs.positive_roots[b];
            let mut p = 0;
            loop {
                let mut down = beta.clone();
                down[i] -= p + 1;
                if rs.root_index(&down).is_some() {
                    p += 1;
                } else {
                    break;
                }
            }
            let eg = scaled(&commutator(&e[i], &e[b]), &q_int(p + 1).recip());
            let y = commutator(&f[b], &f[i]);
            let hy = solve_in_span(&h, &commutator(&eg, &y)).expect("[e, f] is diagonal");
            let dg = rs.form(gamma, gamma) / 2;
            let j = (0..r).find(|&j| gamma[j] != 0).unwrap();
            let coroot_j = q_int(gamma[j] * rs.symmetrizers[j]) / q_int(dg);
            let s = &hy[j] / coroot_j;
            e.push(eg);
            f.push(scaled(&y, &s.recip()));
        }
        let mut matrices = e;
        matrices.extend(h);
        matrices.extend(f);
        let dim = matrices.len();
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        for x in 0..dim {
            for y in 0..dim {
                let c = commutator(&matrices[x], &matrices[y]);
                if is_zero_mat(&c) {
                    continue;
                }
                let coords = solve_in_span(&matrices, &c).expect("algebra closed under bracket");
                brackets[x][y] = coords
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(z, v)| (z, rational_to_i64(v).expect("integral structure constant")))
                    .collect();
            }
        }
        ChevalleyBasis { rs: rs.clone(), brackets, matrices, extraspecial }
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn n_pos(&self) -> usize {
        self.rs.positive_roots.len()
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn e(&self, k: usize) -> usize {
        k
    }

    pub fn h(&self, i: usize) -> usize {
        self.n_pos() + i
    }

    pub fn f(&self, k: usize) -> usize {
        self.n_pos() + self.rank() + k
    }

    pub fn kind(&self, x: usize) -> Generator {
        let (np, r) = (self.n_pos(), self.rank());
        if x < np {
            Generator::E(x)
        } else if x < np + r {
            Generator::H(x - np)
        } else {
            Generator::F(x - np - r)
        }
    }

    /// Weight of a basis element in simple-root coordinates.
    pub fn weight(&self, x: usize) -> Vec<i64> {
        match self.kind(x) {
            Generator::E(k) => self.rs.positive_roots[k].clone(),
            Generator::H(_) => vec![0; self.rank()],
            Generator::F(k) => self.rs.positive_roots[k].iter().map(|v| -v).collect(),
        }
    }

    pub fn bracket(&self, x: usize, y: usize) -> &[(usize, i64)] {
        &self.brackets[x][y]
    }

    /// Matrix of a basis element in the defining representation.
    pub fn matrix(&self, x: usize) -> &[Vec<Rational>] {
        &self.matrices[x]
    }

    pub fn name(&self, x: usize) -> String {
        let coords = |k: usize| {
            self.rs.positive_roots[k].iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        };
        match self.kind(x) {
            Generator::E(k) => format!("e({})", coords(k)),
            Generator::H(i) => format!("h{}", i + 1),
            Generator::F(k) => format!("f({})", coords(k)),
        }
    }

    /// Bracket of two elements given as sparse coordinate vectors.
    pub fn bracket_vec(&self, a: &[(usize, Rational)], b: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
        let mut acc = vec![Rational::zero(); self.dim()];
        for (x, cx) in a {
            for (y, cy) in b {
                for &(z, c) in self.bracket(*x, *y) {
                    acc[z] += cx * cy * q_int(c);
                }
            }
        }
        acc.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Number of basis triples violating the Jacobi identity.
    pub fn jacobi_violations(&self) -> usize {
        let n = self.dim();
        let one = |x: usize| vec![(x, Rational::one())];
        let mut bad = 0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let a = self.bracket_vec(&one(x), &self.bracket_vec(&one(y), &one(z)));
                    let b = self.bracket_vec(&one(y), &self.bracket_vec(&one(z), &one(x)));
                    let c = self.bracket_vec(&one(z), &self.bracket_vec(&one(x), &one(y)));
                    let mut acc = vec![Rational::zero(); n];
                    for (w, v) in a.into_iter().chain(b).chain(c) {
                        acc[w] += v;
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let neg: Vec<(usize, i64)> = self.bracket(y, x).iter().map(|&(z, c)| (z, -c)).collect();
                self.bracket(x, y) == neg.as_slice()
            })
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut constants = Vec::new();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                if x < y && !self.brackets[x][y].is_empty() {
                    let terms: Vec<_> = self.brackets[x][y]
                        .iter()
                        .map(|&(z, c)| json!({"coeff": c, "element": self.name(z)}))
                        .collect();
                    constants.push(json!({"x": self.name(x), "y": self.name(y), "bracket": terms}));
                }
            }
        }
        json!({
            "root_system": self.rs.to_json(),
            "basis": (0..self.dim()).map(|x| self.name(x)).collect::<Vec<_>>(),
            "sign_convention": "e_gamma = [e_i, e_beta]/(p+1) with i the smallest simple index such that gamma - alpha_i is a root",
            "structure_constants": constants,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(name: &str) -> ChevalleyBasis {
        ChevalleyBasis::new(&RootSystem::from_name(name).unwrap())
    }

    #[test]
    fn sl2_relations() {
        let b = basis("A1");
        let (e, h, f) = (b.e(0), b.h(0), b.f(0));
        assert_eq!(b.bracket(e, f), &[(h, 1)]);
        assert_eq!(b.bracket(h, e), &[(e, 2)]);
        assert_eq!(b.bracket(h, f), &[(f, -2)]);
    }

    #[test]
    fn a2_simple_bracket_has_unit_constant() {
        let b = basis("A2");
        let c = b.bracket(b.e(0), b.e(1));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].0, b.e(2));
        assert_eq!(c[0].1.abs(), 1);
    }

    #[test]
    fn jacobi_and_antisymmetry() {
        for name in ["A1", "A2", "B2", "A3"] {
            let b = basis(name);
            assert_eq!(b.jacobi_violations(), 0, "{name}");
            assert!(b.is_antisymmetric(), "{name}");
        }
    }

    #[test]
    fn cartan_action_matches_cartan_matrix() {
        for name in ["A2", "B2", "A3"] {
            let b = basis(name);
            for i in 0..b.rank() {
                for k in 0..b.n_pos() {
                    let root = &b.rs.positive_roots[k];
                    let a = b.rs.pairing_coroot(root, i);
                    let expect: Vec<(usize, i64)> = if a == 0 { vec![] } else { vec![(b.e(k), a)] };
                    assert_eq!(b.bracket(b.h(i), b.e(k)), expect.as_slice(), "{name}");
                }
            }
        }
    }

    #[test]
    fn root_vector_pairs_give_coroots() {
        let b = basis("B2");
        for k in 0..b.n_pos() {
            let c = b.bracket(b.e(k), b.f(k));
            assert!(c.iter().all(|&(z, _)| matches!(b.kind(z), Generator::H(_))));
            // h_gamma acts on e_gamma by 2
            let mut on_e = 0;
            for &(z, coeff) in c {
                if let Generator::H(i) = b.kind(z) {
                    on_e += coeff * b.rs.pairing_coroot(&b.rs.positive_roots[k], i);
                }
            }
            assert_eq!(on_e, 2);
        }
    }

    #[test]
    fn strings_give_p_plus_one() {
        let b = basis("B2");
        // alpha_2 + (alpha_1 + alpha_2): p = 1
        let c = b.bracket(b.e(1), b.e(2));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].1.abs(), 2);
    }
}
