//! Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

use std::time::{Duration, Instant};

use orbitq_core::classical::{orbit_filtered_dim, OrbitSample};
use orbitq_core::exact::{q_int, MultiPoly, Rational, Var};
use orbitq_core::liealg::{ChevalleyBasis, Generator, ParabolicDatum};
use orbitq_core::quantizer::{
    commutativity_mod_h, flatness_evidence, hilbert_function, hilbert_oracle, leading_term_eval, multiplicity_check, random_point,
    specialized_slice_rank, SliceBuilder,
};
use orbitq_core::uq::{build_q_slice, classical_limit, equivariance_check, find_gq, second_bracket_sl2, HopfData, QVermaModule, UqAlgebra};
use orbitq_core::verma::shapovalov_rank;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Coefficients of `(1+s)/(1-s)^4`.
fn sl2_series(d_max: usize) -> Vec<usize> {
    (0..=d_max as u64).map(|d| (binom(d + 3, 3) + if d > 0 { binom(d + 2, 3) } else { 0 }) as usize).collect()
}

fn c1_hilbert() -> Outcome {
    let t = Instant::now();
    let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
    let (table, _, _) = hilbert_function(&pd, 3, 24).unwrap();
    let elapsed = t.elapsed();
    let series = sl2_series(3);
    let orbit = hilbert_oracle(&pd, 3, &[q_int(7)], 3).unwrap();
    let pass = table.ranks == vec![1, 5, 14, 30] && table.ranks == series && table.ranks == orbit && table.stabilized && elapsed < Duration::from_secs(60);
    outcome(pass, format!("sl2 ranks {:?}, series {:?}, orbit oracle {:?}, {:.1?}", table.ranks, series, orbit, elapsed))
}

fn c2_sl2_generic_dims() -> Outcome {
    let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
    let sb = SliceBuilder::new(&pd, 12).unwrap();
    let slices = sb.build(4);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ok = true;
    let mut seen = Vec::new();
    for _ in 0..5 {
        let p = random_point(&mut rng, 1);
        let lambda0 = p[0].1.clone();
        let ranks: Vec<usize> = slices.iter().map(|s| specialized_slice_rank(s, &sb, &p).unwrap()).collect();
        let expected: Vec<usize> = (0..=4).map(|d| (d + 1) * (d + 1)).collect();
        let half = &lambda0 / q_int(2);
        let sample = OrbitSample::new(vec![half.clone(), -half], 40, 5).unwrap();
        let orbit: Vec<usize> = (0..=4).map(|d| orbit_filtered_dim(&sample, &pd.basis, d).unwrap()).collect();
        ok &= ranks == expected && orbit == expected;
        seen.push(ranks);
    }
    outcome(ok, format!("ranks at 5 points {:?}, (d+1)^2 and orbit dims agree", seen[0]))
}

fn c3_commutativity() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, depth, pairs) in [("A1", 6, 3), ("A2", 8, 28)] {
        let pd = ParabolicDatum::from_names(name, &[]).unwrap();
        let rep = commutativity_mod_h(&SliceBuilder::new(&pd, depth).unwrap());
        ok &= rep.passed() && rep.pairs == pairs;
        parts.push(format!("{name}: {} pairs, {} failing", rep.pairs, rep.failing.len()));
    }
    outcome(ok, parts.join("; "))
}

/// `f(λ)` for a word: zero unless every letter is in the Cartan, then the product of `λ(h_i)`.
fn value_at_lambda(b: &ChevalleyBasis, pd: &ParabolicDatum, word: &[usize], lambda: &[Rational]) -> Rational {
    word.iter().fold(q_int(1), |acc, &x| match b.kind(x) {
        Generator::H(i) => acc * pd.levi.param_of(i).map_or_else(|| q_int(0), |j| lambda[j].clone()),
        _ => q_int(0),
    })
}

fn c4_leading_terms() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, depth) in [("A1", 4), ("A2", 6)] {
        let pd = ParabolicDatum::from_names(name, &[]).unwrap();
        let sb = SliceBuilder::new(&pd, depth).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let lambda: Vec<Rational> = (0..pd.levi.n_params()).map(|_| q_int(rng.gen_range(1..=9))).collect();
        let n = pd.basis.dim();
        let mut bad = 0;
        for _ in 0..50 {
            let len = rng.gen_range(1..=3);
            let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
            let (lead, _) = leading_term_eval(&sb, &word, &lambda).unwrap();
            if lead != value_at_lambda(&pd.basis, &pd, &word, &lambda) {
                bad += 1;
            }
        }
        ok &= bad == 0;
        parts.push(format!("{name}: 50 words, {bad} mismatches"));
    }
    outcome(ok, parts.join("; "))
}

fn c5_multiplicities() -> Outcome {
    let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
    let rep = multiplicity_check(&SliceBuilder::new(&pd, 10).unwrap(), 3, &[q_int(5)], &q_int(1), 0).unwrap();
    let sl2: Vec<(i64, u64, u64)> = rep.rows.iter().map(|r| (r.mu[0], r.n_mu, r.ell)).collect();
    let sl2_ok = sl2 == vec![(0, 1, 1), (2, 1, 1), (4, 1, 1), (6, 1, 1)] && rep.passed();
    let pd3 = ParabolicDatum::from_names("A2", &[]).unwrap();
    let rep3 = multiplicity_check(&SliceBuilder::new(&pd3, 8).unwrap(), 2, &[q_int(3), q_int(5)], &q_int(1), 0).unwrap();
    let get = |mu: &[i64]| rep3.rows.iter().find(|r| r.mu == mu).map(|r| (r.n_mu, r.ell_filtered, r.ell));
    let adj = get(&[1, 1]);
    let sl3_ok = get(&[0, 0]).map(|x| x.0) == Some(1) && adj.map(|x| x.0) == Some(2) && adj.map(|x| x.2) == Some(2) && rep3.passed();
    outcome(
        sl2_ok && sl3_ok,
        format!(
            "sl2 (mu, n, l): {:?}; sl3 (1,1): {:?}, (2,2): {:?} (n, filtered, full)",
            sl2,
            adj,
            get(&[2, 2])
        ),
    )
}

fn c6_shapovalov() -> Outcome {
    let pd = ParabolicDatum::from_names("A1", &[]).unwrap();
    let rep = shapovalov_rank(&pd, 5);
    let l = MultiPoly::var(Var::lambda(0));
    let mut ok = true;
    for b in &rep.blocks {
        // k! λ(λ-1)...(λ-k+1)
        let k = b.depth as i64;
        let mut expect = MultiPoly::from_int((1..=k).product::<i64>().max(1));
        for j in 0..k {
            expect = expect.mul(&l.sub(&MultiPoly::from_int(j)));
        }
        ok &= b.size == 1 && b.rank == 1 && b.determinant == expect;
    }
    let pd2 = ParabolicDatum::from_names("A2", &[0]).unwrap();
    let rep2 = shapovalov_rank(&pd2, 3);
    let factored = rep2.blocks.iter().filter(|b| b.depth > 0).all(|b| !b.factors.is_empty());
    ok &= rep.blocks.len() == 6 && rep2.is_generically_full() && factored;
    outcome(ok, format!("sl2 depths 0..5 match k!·(λ)_k; A2 S={{α1}} per-depth {:?}", rep2.per_depth()))
}

fn c7_flatness() -> Outcome {
    let pd = ParabolicDatum::from_names("A2", &[0]).unwrap();
    let (table, sb, slices) = hilbert_function(&pd, 2, 24).unwrap();
    let rep = flatness_evidence(&sb, &slices, 6, 17).unwrap();
    let oracle = hilbert_oracle(&pd, 2, &[q_int(4)], 1).unwrap();
    let pass = rep.passed() && table.ranks == oracle && rep.rows.iter().all(|r| r.specialized.len() >= 5);
    let generic: Vec<usize> = rep.rows.iter().map(|r| r.generic_rank).collect();
    outcome(pass, format!("A2 S={{α1}}: graded {:?} = oracle {:?}; generic {:?} at 6 points", table.ranks, oracle, generic))
}

fn c8_quantum() -> Outcome {
    let u = UqAlgebra::new("A1").unwrap();
    let hopf = HopfData::new(&u);
    let axioms = hopf.generators().iter().all(|(_, g)| hopf.axioms_hold(g));
    let gq = find_gq(&u, 40).unwrap();
    let basis = ChevalleyBasis::new(&u.rs);
    let limits_ok = gq.elements.len() == 3
        && gq.elements.iter().enumerate().all(|(x, el)| {
            let lim = classical_limit(&u, &basis, el, 6).unwrap();
            lim.order == 0 && lim.vector.unwrap().iter().enumerate().all(|(y, c)| *c == if x == y { q_int(1) } else { q_int(0) })
        });
    let eq = equivariance_check(&gq, &QVermaModule::new(&u, 5), 20, 11);
    let slice = build_q_slice(&gq, &QVermaModule::new(&u, 6), 2, 2);
    let t0 = slice.t0_ranks();
    let pass = axioms && limits_ok && gq.ad_closed && eq.passed() && t0 == vec![1, 5, 14];
    outcome(
        pass,
        format!(
            "Hopf axioms {axioms}; G_q dim {} limits {{E,H,F}} {limits_ok}; {} equivariance pairs ({} checks) ok {}; t^0 ranks {:?}",
            gq.elements.len(),
            eq.pairs,
            eq.checks,
            eq.passed(),
            t0
        ),
    )
}

fn c9_second_bracket() -> Outcome {
    let u = UqAlgebra::new("A1").unwrap();
    let gq = find_gq(&u, 40).unwrap();
    let rep = second_bracket_sl2(&gq, &QVermaModule::new(&u, 6));
    let pass = rep.proportional() && rep.antisymmetric && rep.kks_ok;
    let c = rep.constant.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "none".into());
    outcome(pass, format!("t-part mod h = {c} · (E∧F bracket) on {} ordered pairs; antisymmetric {}", rep.pairs.len(), rep.antisymmetric))
}

fn main() {
    // `cargo test` passes harness flags; a name filter that excludes this suite skips it
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if args.iter().any(|a| !"acceptance".contains(a.as_str())) {
        return;
    }
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("hilbert function of sl2", c1_hilbert),
        ("generic filtered dims of sl2", c2_sl2_generic_dims),
        ("commutativity modulo h", c3_commutativity),
        ("leading terms of symmetrized monomials", c4_leading_terms),
        ("isotypic multiplicities", c5_multiplicities),
        ("shapovalov ranks and factors", c6_shapovalov),
        ("flatness of A2 with S={α1}", c7_flatness),
        ("quantum sl2 layer", c8_quantum),
        ("second bracket of sl2", c9_second_bracket),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = std::panic::catch_unwind(f).unwrap_or_else(|_| outcome(false, "panicked"));
        if !o.pass {
            failed += 1;
        }
        println!("criterion {}: {} [{}] {} ({:.1?})", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail, t.elapsed());
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
