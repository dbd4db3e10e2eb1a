//! The deformed adjoint representation `G_q` inside the ad-finite part of `U_q`.

use std::collections::{BTreeMap, VecDeque};

use serde_json::json;

use super::algebra::{UqAlgebra, UqElement, UqMono};
use super::hopf::HopfData;
use crate::exact::{exp_series, expand_laurent, expand_qfrac, q_int, rank_over_q, rational_to_i64, Matrix, Monomial, MultiPoly, QFrac, Rational, Ring, Var};
use crate::liealg::{ChevalleyBasis, RootSystem};
use crate::Error;

/// `ad(u)A = Σ u_(1) A S(u_(2))` inside `U_q`.
pub fn ad_in_algebra(hopf: &HopfData, u: &UqElement, a: &UqElement) -> UqElement {
    let alg = hopf.alg;
    let mut out = UqElement::zero();
    for ((m1, m2), c) in hopf.coproduct(u) {
        let s = hopf.antipode(&UqElement::mono(m2, QFrac::from_int(1)));
        let x = alg.product(&[&UqElement::mono(m1, c), a, &s]);
        out = out.add(&x);
    }
    out
}

/// Incremental row echelon form over `Q(q)` for `L`-free coefficients.
#[derive(Default)]
pub struct QFracEchelon {
    rows: Vec<(UqMono, UqElement)>,
}

impl QFracEchelon {
    pub fn reduce(&self, v: &UqElement) -> UqElement {
        let mut v = v.clone();
        for (p, row) in &self.rows {
            if let Some(c) = v.terms.get(p).cloned() {
                v = v.sub(&row.scale(&c));
            }
        }
        v
    }

    /// Inserts `v` if it is independent; returns whether it was.
    pub fn insert(&mut self, v: &UqElement) -> bool {
        let r = self.reduce(v);
        let Some((p, c)) = r.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        let inv = c.inverse().expect("L-free pivot");
        let r = r.scale(&inv);
        for (_, row) in self.rows.iter_mut() {
            if let Some(x) = row.terms.get(&p).cloned() {
                *row = row.sub(&r.scale(&x));
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn contains(&self, v: &UqElement) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Nullspace of the map `c ↦ Σ c_j v_j` over `Q(q)`.
fn nullspace(vectors: &[UqElement]) -> Vec<Vec<QFrac>> {
    let keys: Vec<UqMono> = {
        let mut k: Vec<UqMono> = vectors.iter().flat_map(|v| v.terms.keys().cloned()).collect();
        k.sort();
        k.dedup();
        k
    };
    let n = vectors.len();
    // rows = coordinates, cols = unknowns
    let mut m: Vec<Vec<QFrac>> = keys
        .iter()
        .map(|k| vectors.iter().map(|v| v.terms.get(k).cloned().unwrap_or_else(QFrac::zero)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("L-free pivot");
        m[r] = m[r].iter().map(|x| x.mul(&inv)).collect();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row_r = m[r].clone();
                m[i] = m[i].iter().zip(&row_r).map(|(a, b)| a.sub(&b.mul(&f))).collect();
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![QFrac::zero(); n];
            v[fc] = QFrac::from_int(1);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = m[row][fc].neg();
            }
            v
        })
        .collect()
}

fn combine(vs: &[UqElement], c: &[QFrac]) -> UqElement {
    vs.iter().zip(c).fold(UqElement::zero(), |acc, (v, x)| acc.add(&v.scale(x)))
}

/// Classical `q → 1` data of an element: the leading `t`-order under `q = e^t`,
/// `K_i = e^{t d_i h_i}` and its coefficient as a vector in `g` when that coefficient is linear.
#[derive(Clone, Debug)]
pub struct ClassicalLimit {
    pub order: i64,
    /// Coordinates in the Chevalley basis, `None` when the leading coefficient is not in `g`.
    pub vector: Option<Vec<Rational>>,
}

fn h_var(i: usize) -> Var {
    Var::named(&format!("H{}", i + 1))
}

/// Leading coefficient of the `t`-expansion, keyed by `(F-exponents, H-monomial, E-exponents)`.
/// Order of vanishing at `q = 1` of an `L`-free coefficient.
fn q_valuation(c: &QFrac) -> i64 {
    let val = |p: &MultiPoly| -> i64 {
        let span = (p.degree_in(Var::q()) - p.min_degree_in(Var::q())).max(0) as usize;
        expand_laurent(p, &|_| MultiPoly::zero(), span + 1).valuation().expect("nonzero") as i64
    };
    val(c.numer()) - val(&c.denom_poly())
}

/// `((q - q^{-1}) / 2)^k`.
fn q_scale(k: i64) -> QFrac {
    let base = QFrac::new(MultiPoly::var(Var::q()).sub(&MultiPoly::var_pow(Var::q(), -1)), &MultiPoly::from_int(2));
    let base = if k < 0 { base.inverse().unwrap() } else { base };
    (0..k.abs()).fold(QFrac::from_int(1), |acc, _| acc.mul(&base))
}

fn leading_coefficient(alg: &UqAlgebra, x: &UqElement, max_order: usize) -> Option<(i64, BTreeMap<(Vec<u32>, Monomial, Vec<u32>), Rational>)> {
    let shift = x.terms.values().map(q_valuation).min()?;
    let x = &x.scale(&q_scale(-shift));
    let mut by_order: Vec<BTreeMap<(Vec<u32>, Monomial, Vec<u32>), Rational>> = vec![BTreeMap::new(); max_order + 1];
    for (m, c) in &x.terms {
        let cs = expand_qfrac(c, &|_| MultiPoly::zero(), max_order);
        let mut form = MultiPoly::zero();
        for (i, &k) in m.k.iter().enumerate() {
            let d = alg.rs.symmetrizers[i];
            form = form.add(&MultiPoly::var(h_var(i)).scale(&q_int(k as i64 * d as i64)));
        }
        let ks = exp_series(&form, max_order);
        for j in 0..=max_order {
            let mut acc = MultiPoly::zero();
            for a in 0..=j {
                acc = acc.add(&ks.coeff(j - a).scale(&cs.coeff(a).as_constant().expect("L-free coefficient")));
            }
            for (hm, v) in acc.terms() {
                let key = (m.f.clone(), hm.clone(), m.e.clone());
                let e = by_order[j].entry(key.clone()).or_insert_with(Rational::zero);
                *e += v;
                if e.is_zero() {
                    by_order[j].remove(&key);
                }
            }
        }
    }
    by_order.into_iter().enumerate().find(|(_, m)| !m.is_empty()).map(|(j, m)| (j as i64 + shift, m))
}

/// Classical image of a quantum root-vector letter in Chevalley coordinates.
fn letter_limit(alg: &UqAlgebra, basis: &ChevalleyBasis, pos: usize, raising: bool) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); basis.dim()];
    let root = alg.pbw[pos];
    let r = alg.root(pos);
    if RootSystem::height(r) == 1 {
        v[if raising { basis.e(root) } else { basis.f(root) }] = Rational::one();
    } else {
        // at q = 1 the root vector is X_1 X_2 - X_2 X_1
        let (a, b) = if raising { (basis.e(0), basis.e(1)) } else { (basis.f(0), basis.f(1)) };
        for &(z, c) in basis.bracket(a, b) {
            v[z] += q_int(c);
        }
    }
    v
}

pub fn classical_limit(alg: &UqAlgebra, basis: &ChevalleyBasis, x: &UqElement, max_order: usize) -> Option<ClassicalLimit> {
    let (order, lead) = leading_coefficient(alg, x, max_order)?;
    let mut v = vec![Rational::zero(); basis.dim()];
    for ((f, hm, e), c) in &lead {
        let nf: u32 = f.iter().sum();
        let ne: u32 = e.iter().sum();
        let nh = hm.total_degree();
        if nf + ne + nh as u32 != 1 {
            return Some(ClassicalLimit { order, vector: None });
        }
        let w = if nh == 1 {
            let i = (0..alg.rank()).find(|&i| hm.exp(h_var(i)) == 1).unwrap();
            let mut w = vec![Rational::zero(); basis.dim()];
            w[basis.h(i)] = Rational::one();
            w
        } else if nf == 1 {
            letter_limit(alg, basis, f.iter().position(|&a| a == 1).unwrap(), false)
        } else {
            letter_limit(alg, basis, e.iter().position(|&a| a == 1).unwrap(), true)
        };
        for (a, b) in v.iter_mut().zip(w) {
            *a += c * b;
        }
    }
    Some(ClassicalLimit { order, vector: Some(v) })
}

/// `G_q` with one element per Chevalley basis vector, normalized so that element `x`
/// specializes to `x` at `q = 1`.
#[derive(Clone, Debug)]
pub struct GqBasis {
    pub algebra: String,
    /// Exponent `ω` of the seed `K_ω`.
    pub seed_exponent: Vec<i32>,
    /// `4` when `ad(U)K_{-4μ}` was used verbatim, `2` for the fallback.
    pub scale: i32,
    pub mu: Vec<i64>,
    pub closure_dim: usize,
    pub highest_weight_candidates: usize,
    pub elements: Vec<UqElement>,
    pub names: Vec<String>,
    pub ad_closed: bool,
}

impl GqBasis {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "algebra": self.algebra,
            "seed": format!("K^{:?}", self.seed_exponent),
            "exponent_scale": self.scale,
            "mu": self.mu,
            "closure_dim": self.closure_dim,
            "highest_weight_candidates": self.highest_weight_candidates,
            "ad_closed": self.ad_closed,
            "hopf_convention": HopfData::convention(),
            "basis": self.names.iter().zip(&self.elements).map(|(n, x)| json!({
                "limit": n,
                "terms": x.terms.iter().map(|(m, c)| json!({
                    "F": m.f, "K": m.k, "E": m.e, "coeff": c.to_string(),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Closure of `{x}` under `ad(E_i)`, `ad(F_i)`, capped at `cap` dimensions.
fn ad_closure(hopf: &HopfData, x: &UqElement, cap: usize) -> Option<Vec<UqElement>> {
    let u = hopf.alg;
    let gens: Vec<UqElement> = (0..u.rank()).flat_map(|i| [u.e(i), u.f(i)]).collect();
    let mut ech = QFracEchelon::default();
    let mut kept = Vec::new();
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(v) = queue.pop_front() {
        if !ech.insert(&v) {
            continue;
        }
        kept.push(v.clone());
        if kept.len() > cap {
            return None;
        }
        for g in &gens {
            let w = ad_in_algebra(hopf, g, &v);
            if !w.is_zero() {
                queue.push_back(w);
            }
        }
    }
    Some(kept)
}

/// Dominant `μ` (fundamental coordinates) with `scale·μ` in the root lattice, by height.
fn seed_weights(rs: &RootSystem, scale: i32) -> Vec<(Vec<i64>, Vec<i32>)> {
    let mut out = Vec::new();
    for total in 1..=4i64 {
        let mut cands: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..rs.rank {
            cands = cands.into_iter().flat_map(|c| (0..=total).map(move |a| [c.clone(), vec![a]].concat())).collect();
        }
        for mu in cands.into_iter().filter(|c| c.iter().sum::<i64>() == total) {
            let rc = rs.weight_to_root_coords(&mu);
            let scaled: Vec<Rational> = rc.iter().map(|x| x * q_int(scale as i64)).collect();
            if scaled.iter().all(|x| x.is_integer()) {
                let w: Vec<i32> = scaled.iter().map(|x| -(rational_to_i64(x).unwrap() as i32)).collect();
                out.push((mu, w));
            }
        }
    }
    out
}

/// Locate `G_q`: close `K_{-scale·μ}` under the adjoint action, take an ad-highest-weight
/// vector of weight `θ` with the shortest PBW words, generate its copy, and normalize by
/// the `q = 1` limit. `scale = 4` is tried first; `2` is the fallback when the closure at
/// `4` exceeds `cap`.
pub fn find_gq(alg: &UqAlgebra, cap: usize) -> Result<GqBasis, Error> {
    let hopf = HopfData::new(alg);
    let rs = &alg.rs;
    let basis = ChevalleyBasis::new(rs);
    let theta = rs.positive_roots.iter().max_by_key(|r| RootSystem::height(r)).unwrap().clone();
    for scale in [4, 2] {
        for (mu, w) in seed_weights(rs, scale) {
            let Some(span) = ad_closure(&hopf, &alg.k(&w), cap) else { break };
            let top: Vec<UqElement> = span.iter().filter(|v| v.weight(alg).as_deref() == Some(&theta[..])).cloned().collect();
            if top.is_empty() {
                continue;
            }
            // ad-highest-weight vectors in the θ weight space
            let images: Vec<UqElement> = top
                .iter()
                .map(|v| {
                    // tag each ad(E_i) image with i through the F-exponent slot offset
                    let mut acc = UqElement::zero();
                    for i in 0..alg.rank() {
                        let img = ad_in_algebra(&hopf, &alg.e(i), v);
                        for (m, c) in img.terms {
                            let mut m2 = m.clone();
                            m2.k.push(i as i32);
                            acc.add_term(m2, c);
                        }
                    }
                    acc
                })
                .collect();
            let kernel = nullspace(&images);
            if kernel.is_empty() {
                continue;
            }
            let mut cands: Vec<UqElement> = kernel.iter().map(|c| combine(&top, c)).collect();
            cands.sort_by_key(|x| (x.max_length(), x.terms.len()));
            let n_cands = cands.len();
            let hw = cands.swap_remove(0);
            let Some(copy) = ad_closure(&hopf, &hw, basis.dim()) else { continue };
            if copy.len() != basis.dim() {
                continue;
            }
            // normalize each element so its leading t-coefficient has order 0
            let mut limits = Vec::new();
            let mut normalized = Vec::new();
            for x in &copy {
                let lim = classical_limit(alg, &basis, x, 8).ok_or_else(|| Error::Failed("no classical limit".into()))?;
                let Some(v) = lim.vector else {
                    return Err(Error::Failed("G_q candidate does not specialize into g".into()));
                };
                let y = x.scale(&q_scale(-lim.order));
                limits.push(v);
                normalized.push(y);
            }
            let m = Matrix::from_rows(limits.clone());
            if rank_over_q(&m) != basis.dim() {
                return Err(Error::Failed("q = 1 limits do not span g".into()));
            }
            // change of basis so that element x specializes to the basis vector x
            let n = basis.dim();
            // solve Σ_k c_{x,k} limit_k = e_x, i.e. C = (limits^T)^{-1} applied per target
            let mut lt: Vec<Vec<Rational>> = (0..n)
                .map(|k| {
                    let mut row = limits[k].clone();
                    row.extend((0..n).map(|j| if j == k { Rational::one() } else { Rational::zero() }));
                    row
                })
                .collect();
            crate::exact::rref(&mut lt);
            // rows of lt are now [I | (limits)^{-1}]; element x = Σ_k inv[x][k] normalized_k
            let elements: Vec<UqElement> = (0..n)
                .map(|x| {
                    (0..n).fold(UqElement::zero(), |acc, k| {
                        let c = &lt[k][n + x];
                        if c.is_zero() {
                            acc
                        } else {
                            acc.add(&normalized[k].scale(&QFrac::from_poly(MultiPoly::constant(c.clone()))))
                        }
                    })
                })
                .collect();
            let mut ech = QFracEchelon::default();
            for x in &elements {
                ech.insert(x);
            }
            let gens: Vec<UqElement> = (0..alg.rank())
                .flat_map(|i| [alg.e(i), alg.f(i), alg.k_simple(i, 1), alg.k_simple(i, -1)])
                .collect();
            let ad_closed = elements.iter().all(|x| gens.iter().all(|g| ech.contains(&ad_in_algebra(&hopf, g, x))));
            return Ok(GqBasis {
                algebra: rs.name(),
                seed_exponent: w,
                scale,
                mu,
                closure_dim: span.len(),
                highest_weight_candidates: n_cands,
                names: (0..n).map(|x| basis.name(x)).collect(),
                elements,
                ad_closed,
            });
        }
    }
    Err(Error::DepthExhausted(format!("no ad-finite seed with closure ≤ {cap} contains the adjoint representation")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_gq_is_three_dimensional() {
        let u = UqAlgebra::new("A1").unwrap();
        let g = find_gq(&u, 40).unwrap();
        assert_eq!(g.elements.len(), 3);
        assert_eq!(g.scale, 4);
        assert_eq!(g.seed_exponent, vec![-2]);
        assert_eq!(g.closure_dim, 9);
        assert!(g.ad_closed);
        let b = ChevalleyBasis::new(&u.rs);
        for (x, el) in g.elements.iter().enumerate() {
            let lim = classical_limit(&u, &b, el, 6).unwrap();
            assert_eq!(lim.order, 0);
            let v = lim.vector.unwrap();
            for (y, c) in v.iter().enumerate() {
                assert_eq!(*c, if x == y { Rational::one() } else { Rational::zero() });
            }
        }
        // ad(E) kills the highest element
        let h = HopfData::new(&u);
        assert!(ad_in_algebra(&h, &u.e(0), &g.elements[b.e(0)]).is_zero());
    }
}
