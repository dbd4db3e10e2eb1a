use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{flatten_rational, FlatIndex, GradedSlice, PolyOp, SliceBuilder};
use crate::classical::{decompose_character, levi_invariant_dim, orbit_filtered_dim, orbit_weight_ranks, OrbitSample};
use crate::exact::{
    q_int, rank_over_fractions, rank_over_q, FractionElement, Matrix, MultiPoly, QEchelon, Rational, Var,
};
use crate::liealg::{Generator, ParabolicDatum};
use crate::verma::Operator;
use crate::Error;

/// Result of the `(1/h)[hφX, hφY] = hφ([X,Y])` check over all generator pairs.
#[derive(Clone, Debug)]
pub struct CommutativityReport {
    pub pairs: usize,
    pub failing: Vec<(String, String)>,
    pub max_residual_terms: usize,
    pub trusted: i64,
}

impl CommutativityReport {
    pub fn passed(&self) -> bool {
        self.failing.is_empty()
    }
}

pub fn commutativity_mod_h(sb: &SliceBuilder) -> CommutativityReport {
    let b = &sb.pd.basis;
    let tv = &sb.actions.tv;
    let h = MultiPoly::var(Var::h());
    let mut failing = Vec::new();
    let mut max_terms = 0;
    let mut trusted = i64::MAX;
    let mut pairs = 0;
    for x in 0..b.dim() {
        for y in x + 1..b.dim() {
            pairs += 1;
            let (gx, gy) = (sb.generator(x), sb.generator(y));
            let mut res = gx.compose(gy).sub(&gy.compose(gx));
            for &(z, c) in b.bracket(x, y) {
                res = res.sub(&sb.generator(z).scale(&h.scale(&q_int(c))));
            }
            let t = res.trusted;
            trusted = trusted.min(t);
            let res = res.restrict_columns(|c| tv.depths[c] as i64 <= t);
            let terms: usize = res.cols.iter().flat_map(|c| c.iter()).map(|(_, v)| v.len()).sum();
            if terms > 0 {
                failing.push((b.name(x), b.name(y)));
                max_terms = max_terms.max(terms);
            }
        }
    }
    CommutativityReport { pairs, failing, max_residual_terms: max_terms, trusted }
}

/// `λ(X)` for a basis element: the Cartan value on `h_i`, zero on root vectors.
fn classical_value(pd: &ParabolicDatum, x: usize) -> MultiPoly {
    match pd.basis.kind(x) {
        Generator::H(i) => match pd.levi.param_of(i) {
            Some(j) => MultiPoly::var(Var::lambda(j)),
            None => MultiPoly::zero(),
        },
        _ => MultiPoly::zero(),
    }
}

fn permutations(word: &[usize]) -> Vec<Vec<usize>> {
    if word.len() <= 1 {
        return vec![word.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..word.len() {
        let mut rest = word.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// `v_0`-coefficient of `φ_{λ,h}(sym(X_{a_1} ⋯ X_{a_d})) v_0`.
pub fn symmetrized_action_on_vacuum(sb: &SliceBuilder, word: &[usize]) -> Result<MultiPoly, Error> {
    let need = word.len() * sb.pd.rs().max_height();
    if need > sb.depth() {
        return Err(Error::DepthExhausted(format!("word of length {} needs depth {need}", word.len())));
    }
    let perms = permutations(word);
    let mut total = MultiPoly::zero();
    for p in &perms {
        let mut v: BTreeMap<usize, MultiPoly> = BTreeMap::from([(0, MultiPoly::one())]);
        for &x in p.iter().rev() {
            let g = sb.generator(x);
            let mut next: BTreeMap<usize, MultiPoly> = BTreeMap::new();
            for (c, coeff) in &v {
                for (r, e) in &g.cols[*c] {
                    let add = e.mul(coeff);
                    let cur = next.remove(r).unwrap_or_else(MultiPoly::zero).add(&add);
                    if !cur.is_zero() {
                        next.insert(*r, cur);
                    }
                }
            }
            v = next;
        }
        total = total.add(&v.remove(&0).unwrap_or_else(MultiPoly::zero));
    }
    Ok(total.scale(&q_int(perms.len() as i64).recip()))
}

/// `(h-constant term of the v_0-coefficient, f(λ))` at the given assignment of the `λ_j`.
pub fn leading_term_eval(sb: &SliceBuilder, word: &[usize], lambda: &[Rational]) -> Result<(Rational, Rational), Error> {
    let p = symmetrized_action_on_vacuum(sb, word)?;
    let lead = p.coeff_of_power(Var::h(), 0);
    let mut f = MultiPoly::one();
    for &x in word {
        f = f.mul(&classical_value(&sb.pd, x));
    }
    let assignment: Vec<(Var, Rational)> = lambda.iter().enumerate().map(|(j, v)| (Var::lambda(j), v.clone())).collect();
    let lv = lead.eval_rational(&assignment).map_err(|v| Error::InvalidInput(format!("{} unassigned", v.name())))?;
    let fv = f.eval_rational(&assignment).map_err(|v| Error::InvalidInput(format!("{} unassigned", v.name())))?;
    Ok((lv, fv))
}

fn specialize_op(op: &PolyOp, assignment: &[(Var, Rational)]) -> Result<Operator<Rational>, Error> {
    op.try_map(|p| {
        p.eval_rational(assignment)
            .map_err(|v| Error::InvalidInput(format!("{} unassigned", v.name())))
    })
}

/// Operators of distinct weights have disjoint supports, so ranks add over weight blocks.
fn weight_blocks(slice: &GradedSlice) -> BTreeMap<&Vec<i64>, Vec<usize>> {
    let mut blocks: BTreeMap<&Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (k, w) in slice.weights.iter().enumerate() {
        blocks.entry(w).or_default().push(k);
    }
    blocks
}

fn block_positions(ops: &[&PolyOp], trusted: i64, sb: &SliceBuilder) -> Vec<(usize, usize)> {
    let tv = &sb.actions.tv;
    let mut pos = BTreeSet::new();
    for op in ops {
        for (c, col) in op.cols.iter().enumerate() {
            if tv.depths[c] as i64 <= trusted {
                pos.extend(col.iter().map(|(r, _)| (*r, c)));
            }
        }
    }
    pos.into_iter().collect()
}

/// Rank of a slice over Q(λ, h) with coordinates the matrix positions. Entries are
/// homogeneous, so `h = 1` preserves the rank.
pub fn generic_slice_rank(slice: &GradedSlice, sb: &SliceBuilder) -> usize {
    let one = [(Var::h(), q_int(1))];
    weight_blocks(slice)
        .values()
        .map(|idx| {
            let ops: Vec<&PolyOp> = idx.iter().map(|&k| &slice.ops[k]).collect();
            let pos = block_positions(&ops, slice.trusted, sb);
            if pos.is_empty() {
                return 0;
            }
            let rows: Vec<Vec<FractionElement>> = ops
                .iter()
                .map(|op| {
                    pos.iter()
                        .map(|&(r, c)| FractionElement::from(op.entry(r, c).eval(&one).expect("polynomial entry")))
                        .collect()
                })
                .collect();
            rank_over_fractions(&Matrix::from_rows(rows))
        })
        .sum()
}

/// Q-rank of a slice after substituting numbers for `λ_j` and `h`.
pub fn specialized_slice_rank(slice: &GradedSlice, sb: &SliceBuilder, assignment: &[(Var, Rational)]) -> Result<usize, Error> {
    let mut total = 0;
    for idx in weight_blocks(slice).values() {
        let ops: Vec<&PolyOp> = idx.iter().map(|&k| &slice.ops[k]).collect();
        let pos = block_positions(&ops, slice.trusted, sb);
        if pos.is_empty() {
            continue;
        }
        let rows: Vec<Vec<Rational>> = ops
            .iter()
            .map(|op| {
                pos.iter()
                    .map(|&(r, c)| op.entry(r, c).eval_rational(assignment).map_err(|v| Error::InvalidInput(v.name())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        total += rank_over_q(&Matrix::from_rows(rows));
    }
    Ok(total)
}

/// Seeded point of `Λ_L × (Q∖{0})` with integer coordinates in `±[1, 100]`.
pub fn random_point(rng: &mut ChaCha8Rng, n_params: usize) -> Vec<(Var, Rational)> {
    let draw = |rng: &mut ChaCha8Rng| {
        let v = rng.gen_range(1..=100i64);
        q_int(if rng.gen_bool(0.5) { v } else { -v })
    };
    let mut out: Vec<(Var, Rational)> = (0..n_params).map(|j| (Var::lambda(j), draw(rng))).collect();
    out.push((Var::h(), draw(rng)));
    out
}

fn format_point(p: &[(Var, Rational)]) -> String {
    p.iter().map(|(v, x)| format!("{}={x}", v.name())).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug)]
pub struct FlatnessRow {
    pub degree: usize,
    pub graded_rank: usize,
    pub generic_rank: usize,
    pub specialized: Vec<(String, usize)>,
}

/// Rank at a point outside `Λ_L × (Q∖{0})`, reported as a finding.
#[derive(Clone, Debug)]
pub struct SpecialPoint {
    pub label: String,
    pub point: String,
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FlatnessReport {
    pub rows: Vec<FlatnessRow>,
    pub special: Vec<SpecialPoint>,
    pub depth: usize,
}

impl FlatnessReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.specialized.iter().all(|(_, k)| *k == r.generic_rank))
    }

    /// First specialization where a rank drops, if any.
    pub fn first_drop(&self) -> Option<(usize, String, usize, usize)> {
        for r in &self.rows {
            for (p, k) in &r.specialized {
                if *k != r.generic_rank {
                    return Some((r.degree, p.clone(), *k, r.generic_rank));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "depth": self.depth,
            "rows": self.rows.iter().map(|r| json!({
                "d": r.degree,
                "graded_rank": r.graded_rank,
                "generic_rank": r.generic_rank,
                "specialized": r.specialized.iter().map(|(p, k)| json!({"point": p, "rank": k})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "special_points": self.special.iter().map(|s| json!({
                "label": s.label, "point": s.point, "ranks": s.ranks,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Generic rank over `Q(λ,h)` versus specialized ranks at seeded random points, per degree.
pub fn flatness_evidence(sb: &SliceBuilder, slices: &[GradedSlice], trials: usize, seed: u64) -> Result<FlatnessReport, Error> {
    let m = sb.pd.levi.n_params();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<(Var, Rational)>> = (0..trials).map(|_| random_point(&mut rng, m)).collect();
    let mut rows = Vec::new();
    for s in slices {
        let generic = generic_slice_rank(s, sb);
        let mut specialized = Vec::new();
        for p in &points {
            specialized.push((format_point(p), specialized_slice_rank(s, sb, p)?));
        }
        rows.push(FlatnessRow { degree: s.degree, graded_rank: s.rank, generic_rank: generic, specialized });
    }
    let base = random_point(&mut rng, m);
    let mut special = Vec::new();
    let mut zero_lambda = base.clone();
    for (v, x) in zero_lambda.iter_mut() {
        if v.lambda_index() == Some(0) {
            *x = Rational::zero();
        }
    }
    let mut zero_h = base.clone();
    for (v, x) in zero_h.iter_mut() {
        if *v == Var::h() {
            *x = Rational::zero();
        }
    }
    for (label, p) in [("lambda_1 = 0", zero_lambda), ("h = 0", zero_h)] {
        let ranks = slices.iter().map(|s| specialized_slice_rank(s, sb, &p)).collect::<Result<_, _>>()?;
        special.push(SpecialPoint { label: label.to_string(), point: format_point(&p), ranks });
    }
    Ok(FlatnessReport { rows, special, depth: sb.depth() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicRow {
    /// Dominant weight in fundamental-weight coordinates.
    pub mu: Vec<i64>,
    pub n_mu: u64,
    /// Multiplicity in the classical filtered piece `F_λ^{≤d}` (orbit oracle).
    pub ell_filtered: Option<u64>,
    /// Full multiplicity `ℓ_μ` in `F_λ`.
    pub ell: u64,
}

#[derive(Clone, Debug)]
pub struct IsotypicReport {
    pub degree_cap: usize,
    pub depth: usize,
    pub rows: Vec<IsotypicRow>,
}

impl IsotypicReport {
    /// `n_μ` agrees with the filtered oracle where available, never exceeds `ℓ_μ`, and
    /// equals `ℓ_μ` wherever the filtered piece already carries the full multiplicity.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| match r.ell_filtered {
            Some(f) => r.n_mu == f && (f != r.ell || r.n_mu == r.ell) && r.n_mu <= r.ell,
            None => r.n_mu <= r.ell,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "degree_cap": self.degree_cap,
            "depth": self.depth,
            "rows": self.rows.iter().map(|r| json!({
                "mu": r.mu, "n_mu": r.n_mu, "ell_filtered": r.ell_filtered, "ell": r.ell,
                "saturated": r.ell_filtered.map(|f| f == r.ell),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Highest-weight vectors of the adjoint action on the specialized filtered algebra.
pub fn multiplicity_check(sb: &SliceBuilder, d_max: usize, lambda: &[Rational], h0: &Rational, seed: u64) -> Result<IsotypicReport, Error> {
    if lambda.iter().any(|x| x.is_zero()) {
        return Err(Error::InvalidInput("λ_i must be nonzero".into()));
    }
    if h0.is_zero() {
        return Err(Error::InvalidInput("h must be nonzero".into()));
    }
    let pd = &sb.pd;
    let rs = pd.rs();
    let b = &pd.basis;
    let tv = &sb.actions.tv;
    let mut assignment: Vec<(Var, Rational)> = lambda.iter().enumerate().map(|(j, v)| (Var::lambda(j), v.clone())).collect();
    assignment.push((Var::h(), h0.clone()));
    let slices = sb.build(d_max);
    let top = slices.last().expect("degree 0 slice");
    let ops: Vec<Operator<Rational>> = top.ops.iter().map(|o| specialize_op(o, &assignment)).collect::<Result<_, _>>()?;
    let raisers: Vec<Operator<Rational>> = (0..rs.rank)
        .map(|i| specialize_op(sb.generator(b.e(i)), &assignment))
        .collect::<Result<_, _>>()?;

    let mut by_weight: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (k, w) in top.weights.iter().enumerate() {
        let fw = rs.root_to_weight(w);
        if fw.iter().all(|&c| c >= 0) {
            by_weight.entry(fw).or_default().push(k);
        }
    }
    let mut n_mu: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    for (mu, idx) in by_weight {
        // Q-basis of the weight space on trusted columns
        let mut index = FlatIndex::default();
        let mut ech = QEchelon::default();
        let mut basis = Vec::new();
        for &k in &idx {
            if ech.insert(flatten_rational(&ops[k], tv, top.trusted, &mut index)) {
                basis.push(k);
            }
        }
        let mut adj: Vec<Operator<Rational>> = Vec::new();
        let mut t = i64::MAX;
        for &k in &basis {
            for e in &raisers {
                let c = e.compose(&ops[k]).sub(&ops[k].compose(e));
                t = t.min(c.trusted);
                adj.push(c);
            }
        }
        let mut index = FlatIndex::default();
        let nr = raisers.len();
        let flat: Vec<Vec<BTreeMap<usize, Rational>>> = basis
            .iter()
            .enumerate()
            .map(|(j, _)| (0..nr).map(|i| flatten_rational(&adj[j * nr + i], tv, t, &mut index)).collect())
            .collect();
        let width = index.len();
        let rows: Vec<Vec<Rational>> = flat
            .iter()
            .map(|parts| {
                let mut row = vec![Rational::zero(); width];
                for part in parts {
                    for (c, v) in part {
                        row[*c] = v.clone();
                    }
                }
                row
            })
            .collect();
        let rank = if width == 0 || rows.is_empty() { 0 } else { rank_over_q(&Matrix::from_rows(rows)) };
        let hw = (basis.len() - rank) as u64;
        if hw > 0 {
            n_mu.insert(mu, hw);
        }
    }

    let filtered: Option<BTreeMap<Vec<i64>, u64>> = {
        let cartan_values: Vec<Rational> = (0..rs.rank)
            .map(|i| pd.levi.param_of(i).map_or_else(Rational::zero, |j| lambda[j].clone()))
            .collect();
        let nmon = crate::classical::monomials_up_to(b.dim(), d_max).len();
        let sample = OrbitSample::for_functional(pd, &cartan_values, nmon + 10, seed)?;
        let ch = orbit_weight_ranks(&sample, b, d_max)?;
        Some(decompose_character(rs, &ch))
    };
    let mut mus: BTreeSet<Vec<i64>> = n_mu.keys().cloned().collect();
    if let Some(f) = &filtered {
        mus.extend(f.keys().cloned());
    }
    let rows = mus
        .into_iter()
        .map(|mu| IsotypicRow {
            n_mu: n_mu.get(&mu).copied().unwrap_or(0),
            ell_filtered: filtered.as_ref().map(|f| f.get(&mu).copied().unwrap_or(0)),
            ell: levi_invariant_dim(rs, &pd.levi, &mu),
            mu,
        })
        .collect();
    Ok(IsotypicReport { degree_cap: d_max, depth: sb.depth(), rows })
}

/// Graded ranks predicted by the orbit: with `g_j` the jumps of the filtered coordinate-ring
/// dimensions at the orbit through `λ`, `rank_d = Σ_j g_j · #(monomials of degree d-j in λ, h)`.
pub fn hilbert_oracle(pd: &ParabolicDatum, d_max: usize, lambda: &[Rational], seed: u64) -> Result<Vec<usize>, Error> {
    if lambda.iter().any(|x| x.is_zero()) {
        return Err(Error::InvalidInput("λ_i must be nonzero".into()));
    }
    let rs = pd.rs();
    let b = &pd.basis;
    let cartan_values: Vec<Rational> = (0..rs.rank)
        .map(|i| pd.levi.param_of(i).map_or_else(Rational::zero, |j| lambda[j].clone()))
        .collect();
    let nmon = crate::classical::monomials_up_to(b.dim(), d_max).len();
    let sample = OrbitSample::for_functional(pd, &cartan_values, nmon + 10, seed)?;
    let filtered: Vec<usize> = (0..=d_max).map(|d| orbit_filtered_dim(&sample, b, d)).collect::<Result<_, _>>()?;
    let jumps: Vec<usize> = (0..=d_max).map(|j| filtered[j] - if j == 0 { 0 } else { filtered[j - 1] }).collect();
    let params = pd.levi.n_params() + 1;
    let count = |k: usize| crate::classical::monomials_up_to(params, k).len() - if k == 0 { 0 } else { crate::classical::monomials_up_to(params, k - 1).len() };
    Ok((0..=d_max).map(|d| (0..=d).map(|j| jumps[j] * count(d - j)).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_commutativity() {
        let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
        let sb = SliceBuilder::new(&pd, 6).unwrap();
        let rep = commutativity_mod_h(&sb);
        assert_eq!(rep.pairs, 3);
        assert!(rep.passed());
    }

    #[test]
    fn sl2_leading_terms() {
        let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
        let sb = SliceBuilder::new(&pd, 6).unwrap();
        let b = &pd.basis;
        let l = MultiPoly::var(Var::lambda(0));
        let h = MultiPoly::var(Var::h());
        assert_eq!(symmetrized_action_on_vacuum(&sb, &[b.h(0)]).unwrap(), l);
        assert_eq!(
            symmetrized_action_on_vacuum(&sb, &[b.e(0), b.f(0)]).unwrap(),
            h.mul(&l).scale(&crate::exact::q_frac(1, 2))
        );
        let (lead, f) = leading_term_eval(&sb, &[b.h(0), b.h(0)], &[q_int(7)]).unwrap();
        assert_eq!((lead, f), (q_int(49), q_int(49)));
    }

    #[test]
    fn sl2_multiplicities_low_degree() {
        let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
        let sb = SliceBuilder::new(&pd, 8).unwrap();
        let rep = multiplicity_check(&sb, 2, &[q_int(5)], &q_int(1), 0).unwrap();
        let got: Vec<(Vec<i64>, u64)> = rep.rows.iter().map(|r| (r.mu.clone(), r.n_mu)).collect();
        assert_eq!(got, vec![(vec![0], 1), (vec![2], 1), (vec![4], 1)]);
        assert!(rep.passed());
    }

    #[test]
    fn oracle_matches_sl2_hilbert_series() {
        let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
        // (1+s)/(1-s)^4
        assert_eq!(hilbert_oracle(&pd, 4, &[q_int(3)], 1).unwrap(), vec![1, 5, 14, 30, 55]);
    }

    #[test]
    fn zero_lambda_is_rejected() {
        let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
        let sb = SliceBuilder::new(&pd, 4).unwrap();
        assert!(multiplicity_check(&sb, 1, &[q_int(0)], &q_int(1), 0).is_err());
    }
}
