use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::algebra::{UqAlgebra, UqElement};
use super::gq::GqBasis;
use super::hopf::HopfData;
use super::module::{QOp, QVermaModule};
use crate::exact::{expand_qfrac, q_int, rank_over_fractions, FractionElement, Matrix, Monomial, MultiPoly, QEchelon, QFrac, Rational, Ring, Var};
use crate::liealg::ChevalleyBasis;
use crate::verma::Operator;

/// Operator with entries polynomial in `t`, `λ_i` and Laurent in `h`.
pub type TOp = Operator<MultiPoly>;

fn truncate_t(p: &MultiPoly, order: usize) -> MultiPoly {
    MultiPoly::from_terms(p.terms().filter(|(m, _)| m.exp(Var::t()) <= order as i32).map(|(m, c)| (m.clone(), c.clone())))
}

fn truncate_op(op: &TOp, order: usize) -> TOp {
    op.map(|p| truncate_t(p, order))
}

/// `h · φ_{q,λ/h}(x)` under `q = e^t`, `L_i = e^{tλ_i/h}`, modulo `t^{order+1}`.
pub fn expand_rescaled(op: &QOp, order: usize) -> TOp {
    let weights = |i: usize| MultiPoly::var(Var::lambda(i)).mul(&MultiPoly::var_pow(Var::h(), -1));
    let h = MultiPoly::var(Var::h());
    op.map(|c| expand_qfrac(c, &weights, order).to_poly().mul(&h))
}

/// One degree of the quantum slice filtration.
#[derive(Clone, Debug)]
pub struct QSliceLevel {
    pub degree: usize,
    pub ops: Vec<TOp>,
    pub weights: Vec<Vec<i64>>,
    pub trusted: i64,
    /// Q-rank of the `t^0` parts of the spanning set.
    pub t0_rank: usize,
    /// `ranks_by_order[k]`: rank over `Q(t)` of the selected operators truncated at `t^k`.
    pub ranks_by_order: Vec<usize>,
    /// `t`-orders carrying a negative power of `h`.
    pub nonpolynomial_orders: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct QSliceReport {
    pub algebra: String,
    pub depth: usize,
    pub t_order: usize,
    pub levels: Vec<QSliceLevel>,
}

impl QSliceReport {
    pub fn t0_ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.t0_rank).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "algebra": self.algebra,
            "depth": self.depth,
            "t_order": self.t_order,
            "table": self.levels.iter().map(|l| json!({
                "d": l.degree,
                "t0_rank": l.t0_rank,
                "ranks_by_t_order": l.ranks_by_order,
                "nonpolynomial_t_orders": l.nonpolynomial_orders,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Flattened `t^k` coefficient over `(row, col, λh-monomial)` on trusted columns.
fn flatten_t_coefficient(op: &TOp, module: &QVermaModule, trusted: i64, k: usize, index: &mut BTreeMap<(usize, usize, Monomial), usize>) -> BTreeMap<usize, Rational> {
    let mut v = BTreeMap::new();
    for (c, col) in op.cols.iter().enumerate() {
        if module.depths[c] as i64 > trusted {
            continue;
        }
        for (r, p) in col {
            for (m, x) in p.terms() {
                if m.exp(Var::t()) as usize != k {
                    continue;
                }
                let n = index.len();
                let slot = *index.entry((*r, c, m.without(Var::t()))).or_insert(n);
                v.insert(slot, x.clone());
            }
        }
    }
    v
}

fn rank_over_qt(ops: &[&TOp], module: &QVermaModule, trusted: i64) -> usize {
    let mut keys: BTreeSet<(usize, usize, Monomial)> = BTreeSet::new();
    for op in ops {
        for (c, col) in op.cols.iter().enumerate() {
            if module.depths[c] as i64 > trusted {
                continue;
            }
            for (r, p) in col {
                for (m, _) in p.terms() {
                    keys.insert((*r, c, m.without(Var::t())));
                }
            }
        }
    }
    if keys.is_empty() {
        return 0;
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let rows: Vec<Vec<FractionElement>> = ops
        .iter()
        .map(|op| {
            keys.iter()
                .map(|(r, c, mono)| {
                    let p = op.entry(*r, *c);
                    let univariate = MultiPoly::from_terms(p.terms().filter(|(m, _)| m.without(Var::t()) == *mono).map(|(m, x)| {
                        (Monomial::var(Var::t(), m.exp(Var::t())), x.clone())
                    }));
                    FractionElement::from(univariate)
                })
                .collect()
        })
        .collect();
    rank_over_fractions(&Matrix::from_rows(rows))
}

/// Quantum slices `S_d` spanned by `h·φ_{q,λ/h}(G_q)`-words, `λ_j` and `h`, with bases
/// selected on the `t^0` parts.
pub fn build_q_slice(gq: &GqBasis, module: &QVermaModule, d_max: usize, t_order: usize) -> QSliceReport {
    let alg = module.alg;
    let basis = ChevalleyBasis::new(&alg.rs);
    let gens: Vec<(TOp, Vec<i64>)> = gq
        .elements
        .iter()
        .enumerate()
        .map(|(x, el)| (expand_rescaled(&module.phi(el), t_order), basis.weight(x)))
        .collect();
    let mut scalars: Vec<MultiPoly> = (0..alg.rank()).map(|j| MultiPoly::var(Var::lambda(j))).collect();
    scalars.push(MultiPoly::var(Var::h()));
    let depth = module.depth_cap as i64;
    let mut levels = vec![QSliceLevel {
        degree: 0,
        ops: vec![Operator::identity(module.dim(), depth)],
        weights: vec![vec![0; alg.rank()]],
        trusted: depth,
        t0_rank: 1,
        ranks_by_order: vec![1; t_order + 1],
        nonpolynomial_orders: vec![],
    }];
    for d in 1..=d_max {
        let prev = levels.last().unwrap();
        let mut cands: Vec<(TOp, Vec<i64>)> = Vec::new();
        for (a, w) in prev.ops.iter().zip(&prev.weights) {
            for (g, wg) in &gens {
                let wx = w.iter().zip(wg).map(|(u, v)| u + v).collect();
                cands.push((truncate_op(&g.compose(a), t_order), wx));
            }
            for s in &scalars {
                cands.push((a.scale(s), w.clone()));
            }
        }
        let trusted = cands.iter().map(|(o, _)| o.trusted).min().unwrap_or(-1);
        let mut index = BTreeMap::new();
        let mut ech = QEchelon::default();
        let (mut ops, mut weights) = (Vec::new(), Vec::new());
        for (op, w) in cands {
            if ech.insert(flatten_t_coefficient(&op, module, trusted, 0, &mut index)) {
                ops.push(op);
                weights.push(w);
            }
        }
        let mut blocks: BTreeMap<Vec<i64>, Vec<&TOp>> = BTreeMap::new();
        for (op, w) in ops.iter().zip(&weights) {
            blocks.entry(w.clone()).or_default().push(op);
        }
        let ranks_by_order = (0..=t_order)
            .map(|k| {
                let cut: BTreeMap<Vec<i64>, Vec<TOp>> =
                    blocks.iter().map(|(w, v)| (w.clone(), v.iter().map(|o| truncate_op(o, k)).collect())).collect();
                cut.values().map(|v| rank_over_qt(&v.iter().collect::<Vec<_>>(), module, trusted)).sum()
            })
            .collect();
        let nonpoly = nonpolynomial_orders(&ops);
        levels.push(QSliceLevel {
            degree: d,
            t0_rank: ops.len(),
            ops,
            weights,
            trusted,
            ranks_by_order,
            nonpolynomial_orders: nonpoly,
        });
    }
    QSliceReport { algebra: alg.rs.name(), depth: module.depth_cap, t_order, levels }
}

/// Outcome of the exact equivariance and homomorphism checks on random slice elements.
#[derive(Clone, Debug, Default)]
pub struct EquivarianceReport {
    pub pairs: usize,
    /// `Σ ad(u_(1))(A) ad(u_(2))(B) = ad(u)(AB)`.
    pub product_failures: usize,
    /// `ad(uv) = ad(u) ad(v)`.
    pub homomorphism_failures: usize,
    /// `ad(u) φ(X) = φ(ad(u) X)` for `X` in `G_q`.
    pub gq_failures: usize,
    pub checks: usize,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.pairs > 0 && self.product_failures == 0 && self.homomorphism_failures == 0 && self.gq_failures == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "pairs": self.pairs,
            "checks": self.checks,
            "product_failures": self.product_failures,
            "homomorphism_failures": self.homomorphism_failures,
            "gq_failures": self.gq_failures,
            "passed": self.passed(),
        })
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> QFrac {
    let n = rng.gen_range(-5i64..=5);
    let d = rng.gen_range(1i64..=3);
    QFrac::from_rational(&(q_int(n) / q_int(d)))
}

/// Random `Q`-combinations `A` of degree-1 and `B` of degree-2 slice elements, checked
/// against every generator `E_i`, `F_i`, `K_i`.
pub fn equivariance_check(gq: &GqBasis, module: &QVermaModule, pairs: usize, seed: u64) -> EquivarianceReport {
    let alg = module.alg;
    let hopf = HopfData::new(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phis: Vec<QOp> = gq.elements.iter().map(|x| module.phi(x)).collect();
    let id = Operator::identity(module.dim(), module.depth_cap as i64);
    let gens: Vec<UqElement> = (0..alg.rank()).flat_map(|i| [alg.e(i), alg.f(i), alg.k_simple(i, 1)]).collect();
    let mut rep = EquivarianceReport { pairs, ..Default::default() };
    for _ in 0..pairs {
        let mut a = id.scale(&small_rational(&mut rng));
        for p in &phis {
            a = a.add(&p.scale(&small_rational(&mut rng)));
        }
        let mut b = Operator::zero(module.dim(), module.depth_cap as i64);
        for _ in 0..2 {
            let i = rng.gen_range(0..phis.len());
            let j = rng.gen_range(0..phis.len());
            b = b.add(&phis[i].compose(&phis[j]).scale(&small_rational(&mut rng)));
        }
        let ab = a.compose(&b);
        for u in &gens {
            let mut lhs = Operator::zero(module.dim(), ab.trusted);
            for ((m1, m2), c) in hopf.coproduct(u) {
                let x1 = UqElement::mono(m1, QFrac::from_int(1));
                let x2 = UqElement::mono(m2, QFrac::from_int(1));
                lhs = lhs.add(&module.ad(&hopf, &x1, &a).compose(&module.ad(&hopf, &x2, &b)).scale(&c));
            }
            rep.checks += 1;
            if !module.agree(&lhs, &module.ad(&hopf, u, &ab)) {
                rep.product_failures += 1;
            }
        }
        let u = &gens[rng.gen_range(0..gens.len())];
        let v = &gens[rng.gen_range(0..gens.len())];
        rep.checks += 1;
        let lhs = module.ad(&hopf, &alg.mul(u, v), &a);
        let rhs = module.ad(&hopf, u, &module.ad(&hopf, v, &a));
        if !module.agree(&lhs, &rhs) {
            rep.homomorphism_failures += 1;
        }
        let x = rng.gen_range(0..gq.elements.len());
        rep.checks += 1;
        let lhs = module.ad(&hopf, u, &phis[x]);
        let rhs = module.phi(&super::gq::ad_in_algebra(&hopf, u, &gq.elements[x]));
        if !module.agree(&lhs, &rhs) {
            rep.gq_failures += 1;
        }
    }
    rep
}

/// Second bracket on linear generators of `sl_2`.
///
/// The commutator of degree-1 elements is expanded in a basis of the degree-2 slice whose
/// first members are `h·(degree-1 basis)`. Dropping those coordinates is reduction modulo
/// `h`. `T(x,y)` is the reduced `t`-coefficient and `R(x,y)` the reduced image of
/// `[E,x][F,y] - [F,x][E,y]`, the bracket generated by `E∧F` on linear functions.
#[derive(Clone, Debug)]
pub struct SecondBracketReport {
    pub pairs: Vec<BracketPair>,
    pub constant: Option<Rational>,
    pub antisymmetric: bool,
    /// `t^0` part of `[φX, φY]` equals `h·φ([x,y])`.
    pub kks_ok: bool,
    /// Every `t`-coefficient lies in the degree-2 slice.
    pub in_slice: bool,
    pub nonpolynomial_orders: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BracketPair {
    pub x: String,
    pub y: String,
    pub t_part: Vec<Rational>,
    pub r_part: Vec<Rational>,
    pub proportional: bool,
}

impl SecondBracketReport {
    pub fn proportional(&self) -> bool {
        self.in_slice && self.constant.is_some() && self.pairs.iter().all(|p| p.proportional)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v = |x: &[Rational]| x.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        json!({
            "schema": 1,
            "kks_ok": self.kks_ok,
            "in_slice": self.in_slice,
            "antisymmetric": self.antisymmetric,
            "constant": self.constant.as_ref().map(|c| c.to_string()),
            "proportional_to_e_wedge_f": self.proportional(),
            "nonpolynomial_t_orders": self.nonpolynomial_orders,
            "pairs": self.pairs.iter().map(|p| json!({
                "x": p.x, "y": p.y, "t_part_mod_h": v(&p.t_part), "e_wedge_f_mod_h": v(&p.r_part), "proportional": p.proportional,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Coordinates of `target` in the span of `basis`, or `None` when it is outside.
fn solve(basis: &[BTreeMap<usize, Rational>], target: &BTreeMap<usize, Rational>) -> Option<Vec<Rational>> {
    let slots: BTreeSet<usize> = basis.iter().flat_map(|b| b.keys().copied()).chain(target.keys().copied()).collect();
    let n = basis.len();
    let mut rows: Vec<Vec<Rational>> = slots
        .iter()
        .map(|s| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b.get(s).cloned().unwrap_or_else(Rational::zero)).collect();
            row.push(target.get(s).cloned().unwrap_or_else(Rational::zero));
            row
        })
        .collect();
    let pivots = crate::exact::rref(&mut rows);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = rows[r][n].clone();
    }
    Some(x)
}

fn nonpolynomial_orders(ops: &[TOp]) -> Vec<usize> {
    let mut out = BTreeSet::new();
    for op in ops {
        for col in &op.cols {
            for (_, p) in col {
                for (m, _) in p.terms() {
                    if m.exp(Var::h()) < 0 {
                        out.insert(m.exp(Var::t()) as usize);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

pub fn second_bracket_sl2(gq: &GqBasis, module: &QVermaModule) -> SecondBracketReport {
    let alg: &UqAlgebra = module.alg;
    let basis = ChevalleyBasis::new(&alg.rs);
    let n = basis.dim();
    let depth = module.depth_cap as i64;
    let ops: Vec<TOp> = gq.elements.iter().map(|x| expand_rescaled(&module.phi(x), 1)).collect();
    let id = Operator::identity(module.dim(), depth);
    let scalars: Vec<MultiPoly> = (0..alg.rank()).map(|j| MultiPoly::var(Var::lambda(j))).chain([MultiPoly::var(Var::h())]).collect();
    let h = MultiPoly::var(Var::h());
    let mut deg1: Vec<TOp> = ops.clone();
    deg1.extend(scalars.iter().map(|s| id.scale(s)));
    // degree-2 candidates with h-multiples first
    let mut cands: Vec<TOp> = deg1.iter().map(|a| a.scale(&h)).collect();
    let n_h = cands.len();
    for a in &deg1 {
        for g in &ops {
            cands.push(truncate_op(&g.compose(a), 1));
        }
        for s in &scalars[..scalars.len() - 1] {
            cands.push(a.scale(s));
        }
    }
    let trusted = cands.iter().map(|o| o.trusted).min().unwrap();
    let mut index = BTreeMap::new();
    let mut ech = QEchelon::default();
    let (mut b0, mut b1, mut is_h) = (Vec::new(), Vec::new(), Vec::new());
    for (k, op) in cands.iter().enumerate() {
        let v0 = flatten_t_coefficient(op, module, trusted, 0, &mut index);
        if ech.insert(v0.clone()) {
            b1.push(flatten_t_coefficient(op, module, trusted, 1, &mut index));
            b0.push(v0);
            is_h.push(k < n_h);
        }
    }
    let project = |c: Vec<Rational>| -> Vec<Rational> { c.into_iter().zip(&is_h).filter(|(_, h)| !**h).map(|(x, _)| x).collect() };
    let t0: Vec<TOp> = ops.iter().map(|o| truncate_op(o, 0)).collect();
    let lin = |v: &[(usize, i64)]| -> TOp { v.iter().fold(Operator::zero(module.dim(), depth), |acc, (z, c)| acc.add(&t0[*z].scale(&MultiPoly::from_int(*c)))) };
    let (e, f) = (basis.e(0), basis.f(0));
    let mut pairs = Vec::new();
    let mut kks_ok = true;
    let mut in_slice = true;
    let mut t_parts: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let comm = truncate_op(&ops[x].compose(&ops[y]).sub(&ops[y].compose(&ops[x])), 1);
            let c0 = flatten_t_coefficient(&comm, module, trusted, 0, &mut index);
            let kks = lin(basis.bracket(x, y)).scale(&h);
            kks_ok &= c0 == flatten_t_coefficient(&kks, module, trusted, 0, &mut index);
            let c1 = flatten_t_coefficient(&comm, module, trusted, 1, &mut index);
            let t_part = solve(&b0, &c0).and_then(|a| {
                let mut resid = c1.clone();
                for (coef, v) in a.iter().zip(&b1) {
                    for (s, val) in v {
                        let e = resid.entry(*s).or_insert_with(Rational::zero);
                        *e -= coef * val;
                    }
                }
                resid.retain(|_, v| !Ring::is_zero(v));
                solve(&b0, &resid)
            });
            let r_op = lin(basis.bracket(e, x)).compose(&lin(basis.bracket(f, y))).sub(&lin(basis.bracket(f, x)).compose(&lin(basis.bracket(e, y))));
            let r_part = solve(&b0, &flatten_t_coefficient(&r_op, module, trusted, 0, &mut index));
            let (Some(tp), Some(rp)) = (t_part, r_part) else {
                in_slice = false;
                continue;
            };
            let (tp, rp) = (project(tp), project(rp));
            t_parts.insert((x, y), tp.clone());
            pairs.push(BracketPair { x: basis.name(x), y: basis.name(y), t_part: tp, r_part: rp, proportional: false });
        }
    }
    // one global scalar
    let mut constant = None;
    for p in &pairs {
        if let Some(k) = p.r_part.iter().position(|v| !Ring::is_zero(v)) {
            constant = Some(&p.t_part[k] / &p.r_part[k]);
            break;
        }
    }
    for p in pairs.iter_mut() {
        p.proportional = match &constant {
            Some(c) => p.t_part.iter().zip(&p.r_part).all(|(t, r)| *t == c * r),
            None => false,
        };
    }
    let antisymmetric = t_parts.iter().all(|((x, y), v)| t_parts.get(&(*y, *x)).map(|w| w.iter().zip(v).all(|(a, b)| *a == -b.clone())).unwrap_or(false));
    SecondBracketReport { pairs, constant, antisymmetric, kks_ok, in_slice, nonpolynomial_orders: nonpolynomial_orders(&ops) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uq::find_gq;

    #[test]
    fn sl2_quantum_slice_matches_classical_ranks() {
        let u = UqAlgebra::new("A1").unwrap();
        let g = find_gq(&u, 40).unwrap();
        let m = QVermaModule::new(&u, 6);
        let rep = build_q_slice(&g, &m, 2, 2);
        assert_eq!(rep.t0_ranks(), vec![1, 5, 14]);
    }

    #[test]
    fn sl2_equivariance_small() {
        let u = UqAlgebra::new("A1").unwrap();
        let g = find_gq(&u, 40).unwrap();
        let m = QVermaModule::new(&u, 4);
        let rep = equivariance_check(&g, &m, 3, 7);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn sl2_second_bracket_is_e_wedge_f() {
        let u = UqAlgebra::new("A1").unwrap();
        let g = find_gq(&u, 40).unwrap();
        let m = QVermaModule::new(&u, 6);
        let rep = second_bracket_sl2(&g, &m);
        assert!(rep.kks_ok && rep.in_slice && rep.antisymmetric);
        assert!(rep.proportional());
        assert_eq!(rep.constant, Some(q_int(-1)));
    }
}
