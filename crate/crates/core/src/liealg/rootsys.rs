use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::{q_int, Rational};
use crate::Error;

/// Root datum of a supported simple Lie algebra.
///
/// Cartan convention: `cartan[i][j] = <alpha_j, alpha_i^vee>`, so `[h_i, e_j] = cartan[i][j] e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub type_letter: char,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// `d_i` with `d_i a_ij = d_j a_ji`; `(alpha_i, alpha_i) = 2 d_i`.
    pub symmetrizers: Vec<i64>,
    /// Positive roots in simple-root coordinates, height-then-lex order.
    pub positive_roots: Vec<Vec<i64>>,
    /// Fundamental weights in simple-root coordinates.
    pub fundamental_weights: Vec<Vec<Rational>>,
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.type_letter, self.rank)
    }
}

#[derive(Serialize)]
struct RootSystemJson<'a> {
    #[serde(rename = "type")]
    kind: String,
    cartan: &'a Vec<Vec<i64>>,
    symmetrizers: &'a Vec<i64>,
    positive_roots: &'a Vec<Vec<i64>>,
    fundamental_weights: Vec<Vec<String>>,
}

fn cartan_matrix(letter: char, rank: usize) -> Option<Vec<Vec<i64>>> {
    let mut c = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        c[i][i] = 2;
        if i + 1 < rank {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    }
    match (letter, rank) {
        ('A', 1..=3) => Some(c),
        // alpha_1 long, alpha_2 short
        ('B', 2) => {
            c[1][0] = -2;
            Some(c)
        }
        _ => None,
    }
}

impl RootSystem {
    /// Parse names like `A2` or `B2`.
    pub fn from_name(name: &str) -> Result<RootSystem, Error> {
        let mut chars = name.trim().chars();
        let letter = chars.next().ok_or_else(|| Error::Unsupported(name.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Unsupported(name.to_string()))?;
        RootSystem::build(letter.to_ascii_uppercase(), rank)
    }

    pub fn build(letter: char, rank: usize) -> Result<RootSystem, Error> {
        let cartan = cartan_matrix(letter, rank).ok_or_else(|| Error::Unsupported(format!("{letter}{rank}")))?;
        let symmetrizers = match letter {
            'B' => vec![2, 1],
            _ => vec![1; rank],
        };
        let mut rs = RootSystem {
            type_letter: letter,
            rank,
            cartan,
            symmetrizers,
            positive_roots: Vec::new(),
            fundamental_weights: Vec::new(),
        };
        rs.positive_roots = rs.enumerate_positive_roots();
        rs.fundamental_weights = rs.compute_fundamental_weights();
        Ok(rs)
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    /// `<beta, alpha_i^vee>` for `beta` in simple-root coordinates.
    pub fn pairing_coroot(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|j| beta[j] * self.cartan[i][j]).sum()
    }

    /// Symmetric form `(a, b)` on the root lattice.
    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] * b[j] * self.symmetrizers[i] * self.cartan[i][j];
            }
        }
        s
    }

    pub fn is_root(&self, beta: &[i64]) -> bool {
        let neg: Vec<i64> = beta.iter().map(|x| -x).collect();
        self.positive_roots.iter().any(|r| r == beta || *r == neg)
    }

    pub fn root_index(&self, beta: &[i64]) -> Option<usize> {
        self.positive_roots.iter().position(|r| r == beta)
    }

    pub fn height(beta: &[i64]) -> i64 {
        beta.iter().sum()
    }

    pub fn max_height(&self) -> usize {
        self.positive_roots.iter().map(|r| Self::height(r) as usize).max().unwrap_or(1)
    }

    fn enumerate_positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..n {
                    // alpha_i-string through beta: beta - p alpha_i, ..., beta + q alpha_i
                    let mut p = 0;
                    loop {
                        let mut down = beta.clone();
                        down[i] -= p + 1;
                        if down.iter().all(|x| *x >= 0) && roots.contains(&down) && down.iter().any(|x| *x != 0) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - self.pairing_coroot(beta, i);
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !roots.contains(&up) && !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            roots.extend(next.iter().cloned());
            frontier = next;
        }
        roots.sort_by(|a, b| Self::height(a).cmp(&Self::height(b)).then_with(|| b.cmp(a)));
        roots
    }

    fn compute_fundamental_weights(&self) -> Vec<Vec<Rational>> {
        // alpha_j = sum_i C_ij omega_i, so omega = (C^T)^{-1} alpha.
        let n = self.rank;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = (0..n).map(|j| q_int(self.cartan[j][i])).collect();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        crate::exact::rref(&mut aug);
        // row i of the inverse of C^T gives omega_i's coordinates
        (0..n).map(|i| aug[i][n..].to_vec()).collect()
    }

    /// Weight (fundamental-weight coordinates) of a root-lattice element.
    pub fn root_to_weight(&self, beta: &[i64]) -> Vec<i64> {
        (0..self.rank).map(|i| self.pairing_coroot(beta, i)).collect()
    }

    /// Simple-root coordinates of a weight given in fundamental-weight coordinates.
    pub fn weight_to_root_coords(&self, w: &[i64]) -> Vec<Rational> {
        let n = self.rank;
        (0..n)
            .map(|j| (0..n).map(|i| q_int(w[i]) * &self.fundamental_weights[i][j]).sum())
            .collect()
    }

    /// `(lambda, mu)` for weights in fundamental-weight coordinates.
    pub fn weight_form(&self, a: &[i64], b: &[i64]) -> Rational {
        // (omega_i, alpha_j) = d_j delta_ij
        let b_roots = self.weight_to_root_coords(b);
        (0..self.rank)
            .map(|j| q_int(a[j] * self.symmetrizers[j]) * &b_roots[j])
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RootSystemJson {
            kind: self.name(),
            cartan: &self.cartan,
            symmetrizers: &self.symmetrizers,
            positive_roots: &self.positive_roots,
            fundamental_weights: self
                .fundamental_weights
                .iter()
                .map(|w| w.iter().map(|x| x.to_string()).collect())
                .collect(),
        })
        .expect("root data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_frac;

    #[test]
    fn counts_of_positive_roots() {
        for (name, n) in [("A1", 1), ("A2", 3), ("B2", 4), ("A3", 6)] {
            let rs = RootSystem::from_name(name).unwrap();
            assert_eq!(rs.positive_roots.len(), n, "{name}");
        }
    }

    #[test]
    fn a2_roots_in_order() {
        let rs = RootSystem::from_name("A2").unwrap();
        assert_eq!(rs.positive_roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(rs.cartan, vec![vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn b2_symmetrizers() {
        let rs = RootSystem::from_name("B2").unwrap();
        assert_eq!(rs.positive_roots, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(rs.symmetrizers[i] * rs.cartan[i][j], rs.symmetrizers[j] * rs.cartan[j][i]);
            }
        }
    }

    #[test]
    fn fundamental_weights_a2() {
        let rs = RootSystem::from_name("A2").unwrap();
        assert_eq!(rs.fundamental_weights[0], vec![q_frac(2, 3), q_frac(1, 3)]);
        assert_eq!(rs.root_to_weight(&[1, 1]), vec![1, 1]);
    }

    #[test]
    fn unsupported_types() {
        assert!(RootSystem::from_name("G2").is_err());
        assert!(RootSystem::from_name("A9").is_err());
    }
}
