use std::time::Instant;

use orbitq_core::classical::{orbit_filtered_dim, OrbitSample};
use orbitq_core::exact::{q_int, Rational};
use orbitq_core::liealg::ChevalleyBasis;
use orbitq_core::quantizer::{
    commutativity_mod_h, flatness_evidence, hilbert_function, hilbert_oracle, initial_depth, leading_term_eval, multiplicity_check,
    specialized_slice_rank, SliceBuilder,
};
use orbitq_core::uq::{build_q_slice, equivariance_check, find_gq, second_bracket_sl2, HopfData, QVermaModule, UqAlgebra};
use orbitq_core::verma::{homomorphism_violations, shapovalov_rank, Straightener, TruncatedVerma, VermaActions};
use orbitq_core::exact::Var;
use orbitq_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{CheckReport, Command, RunConfig, Status};

fn report(name: &str, pass: bool, details: serde_json::Value, started: Instant) -> CheckReport {
    CheckReport {
        name: name.to_string(),
        status: if pass { Status::Pass } else { Status::Fail },
        details,
        table: None,
        timing: started.elapsed(),
    }
}

fn skipped(name: &str, why: &str) -> CheckReport {
    CheckReport { name: name.to_string(), status: Status::Skipped, details: json!({"reason": why}), table: None, timing: Default::default() }
}

/// The configured λ, or a seeded point with entries in `±[1, 20]`.
fn numeric_lambda(cfg: &RunConfig, salt: u64) -> Vec<Rational> {
    if let Some(l) = &cfg.lambda {
        return l.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt);
    (0..cfg.pd.levi.n_params())
        .map(|_| {
            let v = rng.gen_range(1..=20i64);
            q_int(if rng.gen_bool(0.5) { v } else { -v })
        })
        .collect()
}

fn fmt_q(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn quantum_algebra(cfg: &RunConfig) -> Result<UqAlgebra, Error> {
    if !cfg.levi.is_empty() {
        return Err(Error::Unsupported("the quantum layer covers the torus Levi only".into()));
    }
    UqAlgebra::new(&cfg.algebra)
}

pub fn roots(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let b = &cfg.pd.basis;
    let jac = b.jacobi_violations();
    let anti = b.is_antisymmetric();
    Ok(report(
        "roots",
        jac == 0 && anti,
        json!({"root_system": cfg.pd.rs().to_json(), "parabolic": cfg.pd.to_json(), "basis": b.to_json(), "jacobi_violations": jac, "antisymmetric": anti}),
        t,
    ))
}

pub fn verma_act(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let depth = cfg.depth.unwrap_or(3);
    let actions = VermaActions::new(&cfg.pd, depth)?;
    let bad = homomorphism_violations(&actions);
    let tv = TruncatedVerma::new(&cfg.pd, depth.min(2));
    let st = Straightener::symbolic(&cfg.pd);
    let b = &cfg.pd.basis;
    let table: Vec<_> = (0..b.dim())
        .map(|x| {
            let images: Vec<_> = tv
                .basis
                .iter()
                .map(|m| {
                    let v = st.act(x, m);
                    json!({
                        "on": tv.format_monomial(m),
                        "image": v.iter().map(|(k, c)| json!({"monomial": tv.format_monomial(k), "coeff": c.to_string()})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({"generator": b.name(x), "action": images})
        })
        .collect();
    Ok(report(
        "verma-act",
        bad == 0,
        json!({"depth": depth, "module_dim": actions.tv.dim(), "bracket_violations": bad, "low_depth_actions": table}),
        t,
    ))
}

pub fn shapovalov(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let depth = cfg.depth.unwrap_or(if cfg.pd.rs().rank == 1 { 5 } else { 3 });
    let rep = shapovalov_rank(&cfg.pd, depth);
    let per_depth: Vec<_> = rep.per_depth().into_iter().map(|(d, s, r)| json!({"depth": d, "size": s, "rank": r})).collect();
    Ok(report("shapovalov", rep.is_generically_full(), json!({"depth": depth, "per_depth": per_depth, "report": rep.to_json()}), t))
}

pub fn hilbert(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let d = cfg.degree.unwrap_or(3);
    let (table, sb, slices) = match cfg.depth {
        Some(depth) => hilbert_function(&cfg.pd, d, depth.min(cfg.depth_cap).max(depth))?,
        None => hilbert_function(&cfg.pd, d, cfg.depth_cap)?,
    };
    let oracle = hilbert_oracle(&cfg.pd, d, &numeric_lambda(cfg, 11), cfg.seed)?;
    let mut details = table.to_json();
    details["orbit_oracle"] = json!(oracle);
    if let Some(l) = &cfg.lambda {
        let mut point: Vec<(Var, Rational)> = l.iter().enumerate().map(|(j, v)| (Var::lambda(j), v.clone())).collect();
        point.push((Var::h(), q_int(1)));
        let ranks: Vec<usize> = slices.iter().map(|s| specialized_slice_rank(s, &sb, &point)).collect::<Result<_, _>>()?;
        details["specialized_at_lambda_h1"] = json!({"lambda": fmt_q(l), "ranks": ranks});
    }
    let status = if !table.stabilized {
        Status::Inconclusive
    } else if table.ranks == oracle {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(CheckReport {
        name: "hilbert".into(),
        status,
        details,
        table: Some(table.ranks.iter().copied().enumerate().collect()),
        timing: t.elapsed(),
    })
}

pub fn flatness(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let d = cfg.degree.unwrap_or(2);
    let (table, sb, slices) = hilbert_function(&cfg.pd, d, cfg.depth.unwrap_or(cfg.depth_cap))?;
    let rep = flatness_evidence(&sb, &slices, cfg.points.max(1), cfg.seed)?;
    let mut details = rep.to_json();
    details["stabilized"] = json!(table.stabilized);
    let pass = rep.passed();
    let mut r = report("flatness", pass, details, t);
    if pass && !table.stabilized {
        r.status = Status::Inconclusive;
    }
    Ok(r)
}

pub fn poisson(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let rs = cfg.pd.rs();
    let depth = cfg.depth.unwrap_or(initial_depth(&cfg.pd, 2).max(3 * rs.max_height()));
    let sb = SliceBuilder::new(&cfg.pd, depth)?;
    let comm = commutativity_mod_h(&sb);
    let lambda = numeric_lambda(cfg, 23);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let n = cfg.pd.basis.dim();
    let mut mismatches = Vec::new();
    for _ in 0..cfg.samples {
        let len = rng.gen_range(1..=3usize);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        let (lead, f) = leading_term_eval(&sb, &word, &lambda)?;
        if lead != f {
            let names: Vec<String> = word.iter().map(|&x| cfg.pd.basis.name(x)).collect();
            mismatches.push(json!({"word": names, "leading": lead.to_string(), "f_lambda": f.to_string()}));
        }
    }
    let pass = comm.passed() && mismatches.is_empty();
    Ok(report(
        "poisson",
        pass,
        json!({
            "depth": depth,
            "pairs": comm.pairs,
            "failing_pairs": comm.failing,
            "lambda": fmt_q(&lambda),
            "leading_term_samples": cfg.samples,
            "leading_term_mismatches": mismatches,
        }),
        t,
    ))
}

pub fn multiplicity(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let d = cfg.degree.unwrap_or(2);
    let depth = cfg.depth.unwrap_or(initial_depth(&cfg.pd, d) + 2);
    let sb = SliceBuilder::new(&cfg.pd, depth)?;
    let lambda = numeric_lambda(cfg, 37);
    let rep = multiplicity_check(&sb, d, &lambda, &q_int(1), cfg.seed)?;
    let mut details = rep.to_json();
    details["lambda"] = json!(fmt_q(&lambda));
    Ok(report("multiplicity", rep.passed(), details, t))
}

pub fn orbit_dim(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let d = cfg.degree.unwrap_or(3);
    let lambda = numeric_lambda(cfg, 41);
    let pd = &cfg.pd;
    let b: &ChevalleyBasis = &pd.basis;
    let cartan: Vec<Rational> = (0..pd.rs().rank)
        .map(|i| pd.levi.param_of(i).map_or_else(|| q_int(0), |j| lambda[j].clone()))
        .collect();
    let npts = orbitq_core::classical::monomials_up_to(b.dim(), d).len() + 10;
    let dims = |seed: u64| -> Result<Vec<usize>, Error> {
        let s = OrbitSample::for_functional(pd, &cartan, npts, seed)?;
        (0..=d).map(|k| orbit_filtered_dim(&s, b, k)).collect()
    };
    let first = dims(cfg.seed)?;
    let second = dims(cfg.seed.wrapping_add(1))?;
    let status = if first == second { Status::Pass } else { Status::Inconclusive };
    Ok(CheckReport {
        name: "orbit-dim".into(),
        status,
        details: json!({"lambda": fmt_q(&lambda), "points": npts, "filtered_dims": first, "second_batch": second}),
        table: Some(first.iter().copied().enumerate().collect()),
        timing: t.elapsed(),
    })
}

pub fn q_hilbert(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let u = quantum_algebra(cfg)?;
    let d = cfg.degree.unwrap_or(2);
    let gq = find_gq(&u, 100)?;
    let depth = cfg.depth.unwrap_or(2 * d * cfg.pd.rs().max_height() + 2);
    let module = QVermaModule::new(&u, depth);
    let rep = build_q_slice(&gq, &module, d, cfg.t_order);
    let (table, _, _) = hilbert_function(&cfg.pd, d, cfg.depth_cap)?;
    let t0 = rep.t0_ranks();
    let t_flat = rep.levels.iter().all(|l| l.ranks_by_order.iter().all(|&k| k == l.t0_rank));
    let mut details = rep.to_json();
    details["classical_ranks"] = json!(table.ranks);
    details["constant_across_t_orders"] = json!(t_flat);
    Ok(CheckReport {
        name: "q-hilbert".into(),
        status: if t0 == table.ranks && t_flat { Status::Pass } else { Status::Fail },
        details,
        table: Some(t0.into_iter().enumerate().collect()),
        timing: t.elapsed(),
    })
}

pub fn gq(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let u = quantum_algebra(cfg)?;
    let g = find_gq(&u, 100)?;
    let pass = g.ad_closed && g.elements.len() == cfg.pd.basis.dim();
    Ok(report("gq", pass, g.to_json(), t))
}

pub fn equivariance(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let u = quantum_algebra(cfg)?;
    let hopf = HopfData::new(&u);
    let failing: Vec<String> = hopf.generators().into_iter().filter(|(_, g)| !hopf.axioms_hold(g)).map(|(n, _)| n).collect();
    let g = find_gq(&u, 100)?;
    let depth = cfg.depth.unwrap_or(if u.rank() == 1 { 5 } else { 3 });
    let module = QVermaModule::new(&u, depth);
    let rep = equivariance_check(&g, &module, cfg.pairs, cfg.seed);
    let mut details = rep.to_json();
    details["depth"] = json!(depth);
    details["hopf_convention"] = HopfData::convention();
    details["hopf_axiom_failures"] = json!(failing);
    Ok(report("equivariance", rep.passed() && failing.is_empty(), details, t))
}

pub fn bracket2(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let t = Instant::now();
    let u = quantum_algebra(cfg)?;
    if u.rank() != 1 {
        return Err(Error::Unsupported("the second bracket is extracted for sl2 only".into()));
    }
    let g = find_gq(&u, 100)?;
    let module = QVermaModule::new(&u, cfg.depth.unwrap_or(6));
    let rep = second_bracket_sl2(&g, &module);
    let pass = rep.proportional() && rep.antisymmetric && rep.kks_ok;
    Ok(report("bracket2", pass, rep.to_json(), t))
}

pub fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<CheckReport, Error> {
    match cmd {
        Command::Roots => roots(cfg),
        Command::VermaAct => verma_act(cfg),
        Command::Shapovalov => shapovalov(cfg),
        Command::Hilbert => hilbert(cfg),
        Command::Flatness => flatness(cfg),
        Command::Poisson => poisson(cfg),
        Command::Multiplicity => multiplicity(cfg),
        Command::OrbitDim => orbit_dim(cfg),
        Command::QHilbert => q_hilbert(cfg),
        Command::Gq => gq(cfg),
        Command::Equivariance => equivariance(cfg),
        Command::Bracket2 => bracket2(cfg),
        Command::VerifyAll => Err(Error::InvalidInput("verify-all is not a single check".into())),
    }
}

/// Classical checks always run; quantum checks run for A1/A2 with the torus Levi and a
/// positive t-order, and are reported as skipped otherwise.
pub fn verify_all(cfg: &RunConfig) -> Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    let mut cfg = cfg.clone();
    if cfg.degree.is_none() && cfg.pd.rs().rank > 1 {
        cfg.degree = Some(2);
    }
    let cfg = &cfg;
    for c in [Command::Hilbert, Command::Flatness, Command::Poisson, Command::Multiplicity, Command::Shapovalov] {
        out.push(dispatch(c, cfg)?);
    }
    let quantum_ok = matches!(cfg.algebra.as_str(), "A1" | "A2") && cfg.levi.is_empty();
    for (c, name) in [(Command::Gq, "gq"), (Command::Equivariance, "equivariance"), (Command::QHilbert, "q-hilbert"), (Command::Bracket2, "bracket2")] {
        if cfg.t_order == 0 {
            out.push(skipped(name, "t-order 0"));
        } else if !quantum_ok {
            out.push(skipped(name, "quantum layer covers A1/A2 with the torus Levi"));
        } else if c == Command::Bracket2 && cfg.algebra != "A1" {
            out.push(skipped(name, "second bracket is extracted for sl2 only"));
        } else {
            out.push(dispatch(c, cfg)?);
        }
    }
    Ok(out)
}
