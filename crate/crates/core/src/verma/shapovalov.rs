use std::collections::BTreeMap;

use serde_json::json;

use super::{ModuleVector, PBWMonomial, Straightener, TruncatedVerma};
use crate::exact::{bareiss_determinant, q_int, rank_over_fractions, FractionElement, Matrix, MultiPoly, Var};
use crate::liealg::ParabolicDatum;

/// One weight block of the pairing `<v_0*, (E-word)(F-word) v_0>`.
#[derive(Clone, Debug)]
pub struct ShapovalovBlock {
    pub depth: usize,
    pub weight: Vec<i64>,
    pub size: usize,
    pub rank: usize,
    pub matrix: Matrix<MultiPoly>,
    pub determinant: MultiPoly,
    pub factors: Vec<(MultiPoly, u32)>,
    pub cofactor: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct ShapovalovReport {
    pub blocks: Vec<ShapovalovBlock>,
}

impl ShapovalovReport {
    /// `(depth, total size, total generic rank)` per depth.
    pub fn per_depth(&self) -> Vec<(usize, usize, usize)> {
        let mut acc: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for b in &self.blocks {
            let e = acc.entry(b.depth).or_default();
            e.0 += b.size;
            e.1 += b.rank;
        }
        acc.into_iter().map(|(d, (s, r))| (d, s, r)).collect()
    }

    pub fn is_generically_full(&self) -> bool {
        self.blocks.iter().all(|b| b.rank == b.size)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<_> = self
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "depth": b.depth,
                    "weight": b.weight,
                    "size": b.size,
                    "rank": b.rank,
                    "determinant": b.determinant.to_string(),
                    "factors": b.factors.iter().map(|(f, e)| json!({"factor": f.to_string(), "power": e})).collect::<Vec<_>>(),
                    "cofactor": b.cofactor.to_string(),
                })
            })
            .collect();
        json!({ "blocks": blocks })
    }
}

/// Apply the PBW word `e_{n_1}^{b_1} ... e_{n_m}^{b_m}` (rightmost factor first).
fn apply_e_word(st: &Straightener, exps: &[u32], v: &ModuleVector) -> ModuleVector {
    let pd = st.pd();
    let mut cur = v.clone();
    for p in (0..exps.len()).rev() {
        let e = pd.basis.e(pd.n_minus[p]);
        for _ in 0..exps[p] {
            cur = st.apply(e, &cur);
        }
    }
    cur
}

pub fn shapovalov_rank(pd: &ParabolicDatum, depth_cap: usize) -> ShapovalovReport {
    let tv = TruncatedVerma::new(pd, depth_cap);
    let st = Straightener::symbolic(pd);
    let mut groups: BTreeMap<(usize, Vec<i64>), Vec<usize>> = BTreeMap::new();
    for i in 0..tv.dim() {
        groups.entry((tv.depths[i], tv.weights[i].clone())).or_default().push(i);
    }
    let vacuum = PBWMonomial::vacuum(pd.n_minus.len());
    let nvars = pd.levi.n_params();
    let mut blocks = Vec::new();
    for ((depth, weight), idx) in groups {
        let n = idx.len();
        let mut m = Matrix::<MultiPoly>::zeros(n, n);
        for (r, &i) in idx.iter().enumerate() {
            // the E-word mirrors the F-word with the same exponents
            for (c, &j) in idx.iter().enumerate() {
                let mut v = ModuleVector::new();
                v.insert(tv.basis[j].clone(), MultiPoly::one());
                let out = apply_e_word(&st, &tv.basis[i].0, &v);
                if let Some(x) = out.get(&vacuum) {
                    m.set(r, c, x.clone());
                }
            }
        }
        let rank = rank_over_fractions(&m.map(|p| FractionElement::from(p.clone())));
        let determinant = bareiss_determinant(&m);
        let (factors, cofactor) = linear_factors(&determinant, nvars);
        blocks.push(ShapovalovBlock { depth, weight, size: n, rank, matrix: m, determinant, factors, cofactor });
    }
    ShapovalovReport { blocks }
}

/// Split off factors `a·λ + b` with small integer coefficients by trial division.
pub fn linear_factors(p: &MultiPoly, nvars: usize) -> (Vec<(MultiPoly, u32)>, MultiPoly) {
    let mut rest = p.clone();
    let mut out = Vec::new();
    if rest.is_zero() {
        return (out, rest);
    }
    let mut coeff_vecs: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..nvars {
        coeff_vecs = coeff_vecs
            .into_iter()
            .flat_map(|v| (-2..=2).map(move |c| {
                let mut w = v.clone();
                w.push(c);
                w
            }))
            .collect();
    }
    coeff_vecs.retain(|v| v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0));
    for a in &coeff_vecs {
        let mut form = MultiPoly::zero();
        for (i, &c) in a.iter().enumerate() {
            form = form.add(&MultiPoly::var(Var::lambda(i)).scale(&q_int(c)));
        }
        for b in -12..=12 {
            let f = form.add(&MultiPoly::from_int(b));
            let mut e = 0;
            while rest.total_degree() > 0 {
                match rest.div_exact(&f) {
                    Some(q) => {
                        rest = q;
                        e += 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                out.push((f, e));
            }
        }
    }
    (out, rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_entries_are_falling_factorials() {
        let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
        let rep = shapovalov_rank(&pd, 5);
        let l = MultiPoly::var(Var::lambda(0));
        for b in &rep.blocks {
            let k = b.depth as i64;
            let mut expect = MultiPoly::one();
            for j in 0..k {
                expect = expect.mul(&l.sub(&MultiPoly::from_int(j))).scale(&q_int(j + 1));
            }
            assert_eq!(b.size, 1);
            assert_eq!(*b.matrix.get(0, 0), expect, "depth {k}");
            assert_eq!(b.rank, 1);
        }
        let d1 = rep.blocks.iter().find(|b| b.depth == 1).unwrap();
        assert_eq!(d1.factors, vec![(l.clone(), 1)]);
    }

    #[test]
    fn a2_parabolic_is_generically_full() {
        let pd = ParabolicDatum::from_names("A2", &[0]).unwrap();
        let rep = shapovalov_rank(&pd, 3);
        assert!(rep.is_generically_full());
        for b in &rep.blocks {
            assert_eq!(b.cofactor.total_degree(), 0, "depth {} det {}", b.depth, b.determinant);
        }
    }
}
