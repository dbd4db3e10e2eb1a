//! Generalized Verma modules `M_λ = Ind_P^G 1_λ` realized on `U(N⁻_P)`, truncated by
//! weight depth, with generator actions computed by PBW straightening.

mod operator;
mod shapovalov;

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::exact::{Monomial, MultiPoly, Var};
use crate::liealg::{Generator, ParabolicDatum};
use crate::Error;

pub use operator::Operator;
pub use shapovalov::{linear_factors, shapovalov_rank, ShapovalovBlock, ShapovalovReport};

/// Exponents over the ordered `N⁻_P` basis; the empty word is `v_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PBWMonomial(pub Vec<u32>);

impl PBWMonomial {
    pub fn vacuum(n: usize) -> Self {
        PBWMonomial(vec![0; n])
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn depth(&self, heights: &[usize]) -> usize {
        self.0.iter().zip(heights).map(|(&a, &h)| a as usize * h).sum()
    }
}

/// A vector of the Verma module as PBW monomials with coefficients.
pub type ModuleVector = BTreeMap<PBWMonomial, MultiPoly>;

/// PBW basis of depth at most `depth_cap`.
#[derive(Clone, Debug)]
pub struct TruncatedVerma {
    pub pd: ParabolicDatum,
    pub depth_cap: usize,
    pub basis: Vec<PBWMonomial>,
    pub depths: Vec<usize>,
    /// Weight relative to the highest weight, in simple-root coordinates.
    pub weights: Vec<Vec<i64>>,
    index: HashMap<PBWMonomial, usize>,
    heights: Vec<usize>,
}

impl TruncatedVerma {
    pub fn new(pd: &ParabolicDatum, depth_cap: usize) -> TruncatedVerma {
        let heights: Vec<usize> = pd.n_minus.iter().map(|&k| pd.root_height(k)).collect();
        let mut basis = Vec::new();
        let mut cur = vec![0u32; heights.len()];
        enumerate(&heights, 0, depth_cap, &mut cur, &mut basis);
        basis.sort_by(|a, b| a.depth(&heights).cmp(&b.depth(&heights)).then_with(|| b.cmp(a)));
        let depths = basis.iter().map(|m| m.depth(&heights)).collect();
        let rank = pd.rs().rank;
        let weights = basis
            .iter()
            .map(|m| {
                let mut w = vec![0i64; rank];
                for (p, &a) in m.0.iter().enumerate() {
                    for (wi, r) in w.iter_mut().zip(&pd.rs().positive_roots[pd.n_minus[p]]) {
                        *wi -= a as i64 * r;
                    }
                }
                w
            })
            .collect();
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        TruncatedVerma { pd: pd.clone(), depth_cap, basis, depths, weights, index, heights }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &PBWMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn format_monomial(&self, m: &PBWMonomial) -> String {
        let mut parts = Vec::new();
        for (p, &a) in m.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let name = self.pd.basis.name(self.pd.basis.f(self.pd.n_minus[p]));
            parts.push(if a == 1 { name } else { format!("{name}^{a}") });
        }
        parts.push("v0".to_string());
        parts.join(" ")
    }
}

fn enumerate(heights: &[usize], p: usize, budget: usize, cur: &mut Vec<u32>, out: &mut Vec<PBWMonomial>) {
    if p == heights.len() {
        out.push(PBWMonomial(cur.clone()));
        return;
    }
    let mut a = 0;
    while a * heights[p] <= budget {
        cur[p] = a as u32;
        enumerate(heights, p + 1, budget - a * heights[p], cur, out);
        a += 1;
    }
    cur[p] = 0;
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Memoized PBW straightening of `x · (monomial ⊗ v_0)`.
pub struct Straightener {
    pd: ParabolicDatum,
    cartan_values: Vec<MultiPoly>,
    position: Vec<Option<usize>>,
    memo: RefCell<HashMap<(usize, PBWMonomial), Rc<ModuleVector>>>,
}

impl Straightener {
    /// Symbolic `λ`: `λ(h_i) = λ_j` for the j-th orbit parameter, 0 on the Levi.
    pub fn symbolic(pd: &ParabolicDatum) -> Straightener {
        let values = (0..pd.rs().rank)
            .map(|i| match pd.levi.param_of(i) {
                Some(j) => MultiPoly::var(Var::lambda(j)),
                None => MultiPoly::zero(),
            })
            .collect();
        Straightener::with_cartan_values(pd, values)
    }

    pub fn with_cartan_values(pd: &ParabolicDatum, cartan_values: Vec<MultiPoly>) -> Straightener {
        let mut position = vec![None; pd.basis.n_pos()];
        for (p, &k) in pd.n_minus.iter().enumerate() {
            position[k] = Some(p);
        }
        Straightener { pd: pd.clone(), cartan_values, position, memo: RefCell::new(HashMap::new()) }
    }

    pub fn pd(&self) -> &ParabolicDatum {
        &self.pd
    }

    pub fn act(&self, x: usize, m: &PBWMonomial) -> Rc<ModuleVector> {
        let key = (x, m.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let v = Rc::new(self.compute(x, m));
        self.memo.borrow_mut().insert(key, v.clone());
        v
    }

    fn compute(&self, x: usize, m: &PBWMonomial) -> ModuleVector {
        let mut out = ModuleVector::new();
        let b = &self.pd.basis;
        let first = m.0.iter().position(|&a| a > 0);
        let Some(first) = first else {
            match b.kind(x) {
                Generator::E(_) => {}
                Generator::H(i) => {
                    if !self.cartan_values[i].is_zero() {
                        out.insert(m.clone(), self.cartan_values[i].clone());
                    }
                }
                Generator::F(k) => {
                    if let Some(p) = self.position[k] {
                        let mut e = m.clone();
                        e.0[p] += 1;
                        out.insert(e, MultiPoly::one());
                    }
                }
            }
            return out;
        };
        if let Generator::F(k) = b.kind(x) {
            if let Some(p) = self.position[k] {
                if p <= first {
                    let mut e = m.clone();
                    e.0[p] += 1;
                    out.insert(e, MultiPoly::one());
                    return out;
                }
            }
        }
        // x · (y · rest) = y · (x · rest) + [x, y] · rest
        let y = b.f(self.pd.n_minus[first]);
        let mut rest = m.clone();
        rest.0[first] -= 1;
        for (m2, c) in self.act(x, &rest).iter() {
            for (m3, c2) in self.act(y, m2).iter() {
                add_into(&mut out, m3, &c.mul(c2));
            }
        }
        for &(z, cz) in b.bracket(x, y) {
            let cz = MultiPoly::from_int(cz);
            for (m3, c3) in self.act(z, &rest).iter() {
                add_into(&mut out, m3, &cz.mul(c3));
            }
        }
        out
    }

    /// Apply `x` to a module vector.
    pub fn apply(&self, x: usize, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::new();
        for (m, c) in v {
            for (m2, c2) in self.act(x, m).iter() {
                add_into(&mut out, m2, &c.mul(c2));
            }
        }
        out
    }
}

fn add_into(v: &mut ModuleVector, m: &PBWMonomial, c: &MultiPoly) {
    if c.is_zero() {
        return;
    }
    match v.get_mut(m) {
        Some(x) => {
            *x = x.add(c);
            if x.is_zero() {
                v.remove(m);
            }
        }
        None => {
            v.insert(m.clone(), c.clone());
        }
    }
}

/// Action of one Chevalley basis element on the truncated module.
#[derive(Clone, Debug)]
pub struct GeneratorAction {
    pub generator: usize,
    pub op: Operator<MultiPoly>,
}

impl GeneratorAction {
    /// Largest input depth whose column is exact.
    pub fn overflow_depth(&self) -> i64 {
        self.op.trusted
    }
}

/// Depth increase caused by a basis element (negative for raising operators).
pub fn depth_shift(pd: &ParabolicDatum, x: usize) -> i64 {
    -pd.basis.weight(x).iter().sum::<i64>()
}

pub fn generator_action(x: usize, tv: &TruncatedVerma, st: &Straightener) -> GeneratorAction {
    let cap = tv.depth_cap as i64;
    let raise = depth_shift(&tv.pd, x);
    let cols = tv
        .basis
        .iter()
        .map(|m| {
            st.act(x, m)
                .iter()
                .filter_map(|(m2, c)| tv.index_of(m2).map(|r| (r, c.clone())))
                .collect::<BTreeMap<usize, MultiPoly>>()
        })
        .collect();
    GeneratorAction { generator: x, op: Operator::from_columns(cols, cap - raise.max(0), raise) }
}

/// `h φ_{λ/h}(x)`: every `λ`-monomial of degree `k` picks up `h^{1-k}`.
pub fn rescale_entry(p: &MultiPoly) -> Result<MultiPoly, Error> {
    let mut out = MultiPoly::zero();
    for (m, c) in p.terms() {
        let k: i32 = m.0.iter().filter(|(v, _)| v.lambda_index().is_some()).map(|(_, e)| *e).sum();
        if k > 1 {
            return Err(Error::NonPolynomial(format!("{p}")));
        }
        let hm = Monomial::var(Var::h(), 1 - k);
        out = out.add(&MultiPoly::monomial(m.mul(&hm), c.clone()));
    }
    Ok(out)
}

pub fn rescaled_action(ga: &GeneratorAction) -> Result<GeneratorAction, Error> {
    Ok(GeneratorAction { generator: ga.generator, op: ga.op.try_map(rescale_entry)? })
}

/// Symbolic actions of every basis element, plain and rescaled.
pub struct VermaActions {
    pub tv: TruncatedVerma,
    pub plain: Vec<GeneratorAction>,
    pub rescaled: Vec<GeneratorAction>,
}

impl VermaActions {
    pub fn new(pd: &ParabolicDatum, depth_cap: usize) -> Result<VermaActions, Error> {
        let tv = TruncatedVerma::new(pd, depth_cap);
        let st = Straightener::symbolic(pd);
        let plain: Vec<GeneratorAction> = (0..pd.basis.dim()).map(|x| generator_action(x, &tv, &st)).collect();
        let rescaled = plain.iter().map(rescaled_action).collect::<Result<_, _>>()?;
        Ok(VermaActions { tv, plain, rescaled })
    }
}

/// Count of basis pairs where `φ(x)φ(y) − φ(y)φ(x) − φ([x,y])` is nonzero on trusted columns.
pub fn homomorphism_violations(actions: &VermaActions) -> usize {
    let b = &actions.tv.pd.basis;
    let n = b.dim();
    let mut bad = 0;
    for x in 0..n {
        for y in x + 1..n {
            let (px, py) = (&actions.plain[x].op, &actions.plain[y].op);
            let mut comm = px.compose(py).sub(&py.compose(px));
            for &(z, c) in b.bracket(x, y) {
                comm = comm.sub(&actions.plain[z].op.scale(&MultiPoly::from_int(c)));
            }
            let t = comm.trusted;
            let residual = comm.restrict_columns(|c| actions.tv.depths[c] as i64 <= t);
            if !residual.is_zero() {
                bad += 1;
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_int;

    fn sl2(depth: usize) -> VermaActions {
        VermaActions::new(&ParabolicDatum::from_names("A1", &[]).unwrap(), depth).unwrap()
    }

    #[test]
    fn basis_sizes() {
        let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
        assert_eq!(TruncatedVerma::new(&pd, 3).dim(), 4);
        assert_eq!(TruncatedVerma::new(&pd, 0).dim(), 1);
        let pd = ParabolicDatum::from_names("A2", &[0]).unwrap();
        assert_eq!(TruncatedVerma::new(&pd, 2).dim(), 4);
    }

    #[test]
    fn sl2_raising_formula() {
        let a = sl2(5);
        let b = &a.tv.pd.basis;
        let l = MultiPoly::var(Var::lambda(0));
        let h = MultiPoly::var(Var::h());
        for k in 1..=5usize {
            let expect = l.sub(&MultiPoly::from_int(k as i64 - 1)).scale(&q_int(k as i64));
            assert_eq!(a.plain[b.e(0)].op.entry(k - 1, k), expect);
            let resc = l.sub(&h.scale(&q_int(k as i64 - 1))).scale(&q_int(k as i64));
            assert_eq!(a.rescaled[b.e(0)].op.entry(k - 1, k), resc);
            let hk = l.sub(&h.scale(&q_int(2 * k as i64)));
            assert_eq!(a.rescaled[b.h(0)].op.entry(k, k), hk);
        }
        assert_eq!(a.plain[b.h(0)].op.entry(0, 0), l);
        assert_eq!(a.plain[b.f(0)].op.entry(3, 2), MultiPoly::one());
        assert_eq!(a.plain[b.f(0)].overflow_depth(), 4);
    }

    #[test]
    fn actions_are_homomorphisms() {
        for (name, s, d) in [("A1", vec![], 4), ("A2", vec![], 4), ("A2", vec![0], 4), ("B2", vec![], 4)] {
            let a = VermaActions::new(&ParabolicDatum::from_names(name, &s).unwrap(), d).unwrap();
            assert_eq!(homomorphism_violations(&a), 0, "{name} {s:?}");
        }
    }

    #[test]
    fn weights_are_compatible() {
        let a = VermaActions::new(&ParabolicDatum::from_names("A2", &[]).unwrap(), 4).unwrap();
        let b = &a.tv.pd.basis;
        for x in 0..b.dim() {
            let w = b.weight(x);
            for (c, col) in a.plain[x].op.cols.iter().enumerate() {
                for (r, _) in col {
                    let expect: Vec<i64> = a.tv.weights[c].iter().zip(&w).map(|(u, v)| u + v).collect();
                    assert_eq!(a.tv.weights[*r], expect);
                }
            }
        }
    }

    #[test]
    fn rescaled_entries_have_degree_one() {
        let a = VermaActions::new(&ParabolicDatum::from_names("A2", &[0]).unwrap(), 4).unwrap();
        for g in &a.rescaled {
            for col in &g.op.cols {
                for (_, v) in col {
                    assert_eq!(v.homogeneous_degree(&v.vars()), Some(1));
                }
            }
        }
    }
}
