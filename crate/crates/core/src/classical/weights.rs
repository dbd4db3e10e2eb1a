use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::exact::{q_int, rational_to_i64, Rational};
use crate::liealg::{LeviDatum, RootSystem};

/// Weight multiplicities of `V_μ`, keyed by weights in fundamental-weight coordinates.
#[derive(Clone, Debug)]
pub struct WeightMultiplicities {
    pub highest: Vec<i64>,
    pub mults: BTreeMap<Vec<i64>, u64>,
}

impl WeightMultiplicities {
    pub fn dim(&self) -> u64 {
        self.mults.values().sum()
    }

    pub fn mult(&self, w: &[i64]) -> u64 {
        self.mults.get(w).copied().unwrap_or(0)
    }

    pub fn zero_weight(&self) -> u64 {
        self.mult(&vec![0; self.highest.len()])
    }
}

fn rho(rs: &RootSystem) -> Vec<i64> {
    vec![1; rs.rank]
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scaled_sub(a: &[i64], b: &[i64], k: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - k * y).collect()
}

/// Freudenthal's recursion, level by level below the highest weight.
pub fn weight_multiplicities(rs: &RootSystem, mu: &[i64]) -> WeightMultiplicities {
    let pos_w: Vec<Vec<i64>> = rs.positive_roots.iter().map(|a| rs.root_to_weight(a)).collect();
    let simple_w: Vec<Vec<i64>> = (0..rs.rank)
        .map(|i| {
            let mut e = vec![0; rs.rank];
            e[i] = 1;
            rs.root_to_weight(&e)
        })
        .collect();
    let r = rho(rs);
    let mr = add(mu, &r);
    let norm_top = rs.weight_form(&mr, &mr);
    let mut mults: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    mults.insert(mu.to_vec(), 1);
    let mut level: Vec<Vec<i64>> = vec![mu.to_vec()];
    while !level.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for nu in &level {
            for s in &simple_w {
                let cand = scaled_sub(nu, s, 1);
                if !next.contains(&cand) && !mults.contains_key(&cand) {
                    next.push(cand);
                }
            }
        }
        next.sort();
        let mut kept = Vec::new();
        for nu in next {
            let nr = add(&nu, &r);
            let denom = &norm_top - rs.weight_form(&nr, &nr);
            if denom <= Rational::zero() {
                continue;
            }
            let depth: Rational = rs.weight_to_root_coords(&scaled_sub(mu, &nu, 1)).into_iter().sum();
            let depth = rational_to_i64(&depth).expect("root-lattice difference");
            let mut sum = Rational::zero();
            for (a, root) in pos_w.iter().zip(&rs.positive_roots) {
                let ht = RootSystem::height(root);
                for k in 1..=depth / ht {
                    let up = scaled_sub(&nu, a, -k);
                    let m = mults.get(&up).copied().unwrap_or(0);
                    if m > 0 {
                        sum += rs.weight_form(&up, a) * q_int(m as i64);
                    }
                }
            }
            let m = q_int(2) * sum / denom;
            let m = rational_to_i64(&m).expect("Freudenthal multiplicity is integral");
            if m > 0 {
                mults.insert(nu.clone(), m as u64);
                kept.push(nu);
            }
        }
        level = kept;
    }
    WeightMultiplicities { highest: mu.to_vec(), mults }
}

/// Weyl dimension formula.
pub fn weyl_dimension(rs: &RootSystem, mu: &[i64]) -> u64 {
    let r = rho(rs);
    let mr = add(mu, &r);
    let mut num = Rational::one();
    for a in &rs.positive_roots {
        let aw = rs.root_to_weight(a);
        num *= rs.weight_form(&mr, &aw) / rs.weight_form(&r, &aw);
    }
    rational_to_i64(&num).expect("integral dimension") as u64
}

fn reflect(rs: &RootSystem, w: &[i64], i: usize) -> Vec<i64> {
    let mut e = vec![0; rs.rank];
    e[i] = 1;
    scaled_sub(w, &rs.root_to_weight(&e), w[i])
}

/// Elements of `W_L` as `(w ρ, sign)` pairs, enumerated through the orbit of `ρ`.
pub fn levi_weyl_group(rs: &RootSystem, levi: &LeviDatum) -> Vec<(Vec<i64>, i64)> {
    let r = rho(rs);
    let mut seen: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    seen.insert(r.clone(), 1);
    let mut queue = VecDeque::from([r]);
    while let Some(w) = queue.pop_front() {
        let sign = seen[&w];
        for &i in &levi.levi_simples {
            let v = reflect(rs, &w, i);
            if !seen.contains_key(&v) {
                seen.insert(v.clone(), -sign);
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().collect()
}

/// `ℓ_μ`: multiplicity of the trivial `L`-module in `V_μ|_L`.
pub fn levi_invariant_dim(rs: &RootSystem, levi: &LeviDatum, mu: &[i64]) -> u64 {
    let wm = weight_multiplicities(rs, mu);
    levi_invariant_from(rs, levi, &wm.mults)
}

/// Alternating sum `Σ_{w ∈ W_L} ε(w) m(ρ − wρ)` over an arbitrary character.
pub fn levi_invariant_from(rs: &RootSystem, levi: &LeviDatum, character: &BTreeMap<Vec<i64>, u64>) -> u64 {
    let r = rho(rs);
    let mut total: i64 = 0;
    for (wr, sign) in levi_weyl_group(rs, levi) {
        let shift: Vec<i64> = r.iter().zip(&wr).map(|(a, b)| a - b).collect();
        total += sign * character.get(&shift).copied().unwrap_or(0) as i64;
    }
    assert!(total >= 0, "negative branching multiplicity");
    total as u64
}

/// Decompose a finite-dimensional character into irreducibles by peeling highest weights.
pub fn decompose_character(rs: &RootSystem, character: &BTreeMap<Vec<i64>, u64>) -> BTreeMap<Vec<i64>, u64> {
    let mut rest: BTreeMap<Vec<i64>, i64> = character.iter().map(|(k, v)| (k.clone(), *v as i64)).collect();
    let mut out = BTreeMap::new();
    loop {
        rest.retain(|_, v| *v != 0);
        let height = |w: &Vec<i64>| -> Rational { rs.weight_to_root_coords(w).into_iter().sum() };
        let top = rest
            .iter()
            .filter(|(w, v)| **v > 0 && w.iter().all(|&c| c >= 0))
            .map(|(w, _)| w.clone())
            .max_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));
        let Some(top) = top else {
            assert!(rest.is_empty(), "character is not a sum of irreducibles");
            return out;
        };
        let m = rest[&top];
        for (w, k) in weight_multiplicities(rs, &top).mults {
            *rest.entry(w).or_insert(0) -= m * k as i64;
        }
        out.insert(top, m as u64);
    }
}

/// Row of the multiplicity table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMultEntry {
    pub mu: Vec<i64>,
    pub dim: u64,
    pub zero_weight: u64,
    pub ell: u64,
}

/// All dominant `μ` in the root lattice with `dim V_μ ≤ dim_cap`.
pub fn weight_mult_table(rs: &RootSystem, levi: &LeviDatum, dim_cap: u64) -> Vec<WeightMultEntry> {
    let mut out = Vec::new();
    let bound = 12;
    let mut mu = vec![0i64; rs.rank];
    loop {
        let in_root_lattice = rs.weight_to_root_coords(&mu).iter().all(|c| c.is_integer());
        if in_root_lattice && weyl_dimension(rs, &mu) <= dim_cap {
            let wm = weight_multiplicities(rs, &mu);
            out.push(WeightMultEntry {
                mu: mu.clone(),
                dim: wm.dim(),
                zero_weight: wm.zero_weight(),
                ell: levi_invariant_from(rs, levi, &wm.mults),
            });
        }
        let mut i = 0;
        loop {
            if i == rs.rank {
                out.sort_by_key(|e| (e.dim, e.mu.clone()));
                return out;
            }
            mu[i] += 1;
            if mu[i] <= bound {
                break;
            }
            mu[i] = 0;
            i += 1;
        }
    }
}

pub fn table_to_csv(table: &[WeightMultEntry]) -> String {
    let mut s = String::from("mu,dim,zero_weight,ell\n");
    for e in table {
        let mu: Vec<String> = e.mu.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "\"({})\",{},{},{}", mu.join(","), e.dim, e.zero_weight, e.ell);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_even_weights() {
        let rs = RootSystem::from_name("A1").unwrap();
        for k in 0..5 {
            let wm = weight_multiplicities(&rs, &[2 * k]);
            assert_eq!(wm.dim(), 2 * k as u64 + 1);
            assert!(wm.mults.values().all(|&m| m == 1));
            assert_eq!(levi_invariant_dim(&rs, &LeviDatum::torus(1), &[2 * k]), 1);
        }
    }

    #[test]
    fn sl3_adjoint_and_standard() {
        let rs = RootSystem::from_name("A2").unwrap();
        let adj = weight_multiplicities(&rs, &[1, 1]);
        assert_eq!((adj.dim(), adj.zero_weight()), (8, 2));
        let std = weight_multiplicities(&rs, &[1, 0]);
        assert_eq!((std.dim(), std.zero_weight()), (3, 0));
        assert_eq!(levi_invariant_dim(&rs, &LeviDatum::torus(2), &[1, 1]), 2);
        let levi = LeviDatum::new(2, &[0]).unwrap();
        assert_eq!(levi_invariant_dim(&rs, &levi, &[1, 1]), 1);
    }

    #[test]
    fn weyl_formula_agrees_with_freudenthal() {
        for name in ["A2", "B2", "A3"] {
            let rs = RootSystem::from_name(name).unwrap();
            for mu in [[1i64, 0, 0], [0, 1, 0], [2, 1, 0], [1, 1, 1], [0, 2, 1]] {
                let mu = &mu[..rs.rank];
                assert_eq!(weight_multiplicities(&rs, mu).dim(), weyl_dimension(&rs, mu), "{name} {mu:?}");
            }
        }
    }

    #[test]
    fn decomposition_of_adjoint_squared() {
        // S^2(sl3) = 1 + 8 + 27
        let rs = RootSystem::from_name("A2").unwrap();
        let adj = weight_multiplicities(&rs, &[1, 1]).mults;
        let mut sym: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
        let ws: Vec<(Vec<i64>, u64)> = adj.into_iter().collect();
        for i in 0..ws.len() {
            for j in i..ws.len() {
                let w = add(&ws[i].0, &ws[j].0);
                let (a, b) = (ws[i].1, ws[j].1);
                let n = if i == j { a * (a + 1) / 2 } else { a * b };
                *sym.entry(w).or_insert(0) += n;
            }
        }
        let dec = decompose_character(&rs, &sym);
        let expect: BTreeMap<Vec<i64>, u64> = [(vec![0, 0], 1), (vec![1, 1], 1), (vec![2, 2], 1)].into_iter().collect();
        assert_eq!(dec, expect);
    }

    #[test]
    fn table_respects_zero_weight_bound() {
        let rs = RootSystem::from_name("B2").unwrap();
        let levi = LeviDatum::new(2, &[1]).unwrap();
        let table = weight_mult_table(&rs, &levi, 64);
        assert!(!table.is_empty());
        for e in &table {
            assert!(e.ell <= e.zero_weight);
            assert!(e.dim <= 64);
        }
        let torus = weight_mult_table(&rs, &LeviDatum::torus(2), 64);
        assert!(torus.iter().all(|e| e.ell == e.zero_weight));
    }
}
