//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bellgap::games::{
    chsh_correlation_functional, chsh_game, check_normalization, hadamard_correlation_functional,
    hat_construction, khot_vishnoi, tensor_product, KvParams,
};
use bellgap::model::{behaviour_from_correlation, correlation_from_behaviour, evaluate, Scenario};
use bellgap::quantum::random::random_strategy;
use bellgap::quantum::{
    behaviour_of, check_dimension_bound, check_output_bound, chsh_optimal_strategy,
    correlation_seesaw, hat_strategy, kv_strategy, K_G_UPPER,
};
use bellgap::sampling::{random_correlation, random_correlation_functional, random_game};
use bellgap::solvers::{
    bilocal_correlation_value, bilocal_value_general, bilocal_value_ns, local_correlation_value,
    local_value, ns_correlation_value, ns_value, SolverOptions,
};
use bellgap::verify::{thm2_values, Check};

type Outcome = Result<Vec<Check>, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn(&SolverOptions) -> Outcome,
}

fn main() {
    let opts = SolverOptions::default();
    let criteria = [
        Criterion { id: 1, title: "correlation tensors map to NS behaviours and back", limit: Duration::from_secs(5), run: c1_lemma1 },
        Criterion { id: 2, title: "CHSH local, NS and quantum values", limit: Duration::from_secs(10), run: c2_chsh },
        Criterion { id: 3, title: "local value of CHSH x CHSH against brute force", limit: Duration::from_secs(30), run: c3_chsh_squared },
        Criterion { id: 4, title: "three-copies construction on CHSH", limit: Duration::from_secs(120), run: c4_hat },
        Criterion { id: 5, title: "tripartite Hadamard correlation values", limit: Duration::from_secs(30), run: c5_hadamard },
        Criterion { id: 6, title: "see-saw values within K_G of local/bilocal", limit: Duration::from_secs(300), run: c6_grothendieck },
        Criterion { id: 7, title: "Khot-Vishnoi game at l=2", limit: Duration::from_secs(300), run: c7_kv },
        Criterion { id: 8, title: "dimension and output bounds", limit: Duration::from_secs(120), run: c8_bounds },
        Criterion { id: 9, title: "class sandwich on random tripartite games", limit: Duration::from_secs(300), run: c9_sandwich },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)(&opts);
        let elapsed = start.elapsed();
        let (ok, detail) = match &outcome {
            Ok(checks) => {
                let bad: Vec<&Check> = checks.iter().filter(|k| !k.pass).collect();
                for k in &bad {
                    println!("    failed: {} lhs={} rhs={} tol={:e}", k.name, k.lhs, k.rhs, k.tolerance);
                }
                (bad.is_empty(), format!("{} checks", checks.len()))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= c.limit;
        let pass = ok && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {} ({detail}; {:.2}s of {}s{})",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            if in_time { "" } else { ", over time" }
        );
        if let Ok(checks) = &outcome {
            for k in checks.iter().filter(|k| k.name.starts_with("record:")) {
                println!("    {} = {}", &k.name[7..], k.lhs);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// A recorded number; always passes.
fn record(name: &str, value: f64) -> Check {
    Check::eq(format!("record:{name}"), value, value, 0.0)
}

fn c1_lemma1(_: &SolverOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = Vec::new();
    for t in 0..100 {
        let k = 2 + t % 2;
        let n = 1 + (t / 2) % 4;
        let s = Scenario::uniform(k, n, 2).map_err(err)?;
        let gamma = random_correlation(&s, &mut rng).map_err(err)?;
        let p = behaviour_from_correlation(&gamma);
        checks.push(Check::le(format!("ns[{t}]"), common::ns_defect(&s, p.table()), 0.0, 1e-9));
        checks.push(Check::eq(format!("ns-flag[{t}]"), p.is_non_signalling() as u8 as f64, 1.0, 0.0));
        let back = correlation_from_behaviour(&p).map_err(err)?;
        let trip = back.table().iter().zip(gamma.table()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        checks.push(Check::le(format!("roundtrip[{t}]"), trip, 0.0, 1e-12));
    }
    Ok(checks)
}

fn c2_chsh(opts: &SolverOptions) -> Outcome {
    let g = chsh_game();
    let local = local_value(&g, opts).map_err(err)?.value;
    let ns = ns_value(&g, opts).map_err(err)?.value;
    let constructed = evaluate(&g, &behaviour_of(&chsh_optimal_strategy()).map_err(err)?).map_err(err)?;
    // Game value = 1/2 + 1/2 * correlation value of the ±1/4 functional.
    let cor = correlation_seesaw(&chsh_correlation_functional(), &[2, 2], 20).map_err(err)?.value;
    let seesaw_game = 0.5 + 0.5 * cor;
    Ok(vec![
        Check::eq("local", local, 0.75, 0.0),
        Check::eq("ns", ns, 1.0, 1e-9),
        Check::ge("quantum-lower constructed", constructed, 0.85355, 1e-4),
        Check::ge("quantum-lower see-saw", seesaw_game, 0.85355, 1e-4),
        Check::eq("constructed vs Tsirelson oracle", constructed, common::chsh_quantum_oracle(), 1e-12),
        record("see-saw game value", seesaw_game),
    ])
}

fn c3_chsh_squared(opts: &SolverOptions) -> Outcome {
    let g = tensor_product(&chsh_game(), &chsh_game()).map_err(err)?;
    let fast = local_value(&g, opts).map_err(err)?.value;
    let brute = common::brute_force_local(&g);
    Ok(vec![
        Check::eq("best-response", fast, 0.625, 1e-12),
        Check::eq("brute force", brute, 0.625, 1e-12),
        Check::eq("agreement", fast, brute, 1e-12),
    ])
}

fn c4_hat(opts: &SolverOptions) -> Outcome {
    let v = thm2_values(opts).map_err(err)?;
    let g = chsh_game();
    let hat = hat_construction(&g).map_err(err)?;
    let direct = evaluate(&hat, &behaviour_of(&hat_strategy(&chsh_optimal_strategy(), &g).map_err(err)?).map_err(err)?)
        .map_err(err)?;
    let q3 = v.chsh_quantum.value.powi(3);
    Ok(vec![
        Check::eq("(a) hat strategy value", direct, 0.853553f64.powi(3), 1e-6),
        Check::le("(b) bilocal(hat)", v.hat_bilocal.value, 0.625, 1e-9),
        Check::ge(
            "(c) ratio inequality",
            v.hat_quantum.value / v.hat_bilocal.value,
            q3 / v.chsh_squared_local.value,
            1e-6,
        ),
        record("bilocal-general(hat(chsh))", v.hat_bilocal.value),
        record("bilocal-ns(hat(chsh))", v.hat_bilocal_ns.value),
        record("local(hat(chsh))", v.hat_local.value),
    ])
}

fn c5_hadamard(opts: &SolverOptions) -> Outcome {
    let m = hadamard_correlation_functional(4).map_err(err)?;
    let ns = ns_correlation_value(&m).map_err(err)?.value;
    let bl = bilocal_correlation_value(&m, opts).map_err(err)?.value;
    let local = local_correlation_value(&m, opts).map_err(err)?.value;
    let brute = common::brute_force_local_correlation(&m);
    Ok(vec![
        Check::eq("ns-cor", ns, 16.0, 0.0),
        Check::eq("bilocal-cor", bl, 16.0, 1e-9),
        Check::eq("local-cor brute force", local, brute, 0.0),
        Check::le("bilocal <= sqrt(8) local", bl, 8f64.sqrt() * local, 1e-9),
        record("local-cor(H4)", local),
    ])
}

fn c6_grothendieck(opts: &SolverOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = Vec::new();
    for t in 0..50 {
        let n = 2 + t % 2;
        let d = 2 + t % 3;
        let f = random_correlation_functional(&Scenario::uniform(2, n, 2).map_err(err)?, &mut rng).map_err(err)?;
        let q = correlation_seesaw(&f, &[d, d], 4).map_err(err)?.value;
        let local = local_correlation_value(&f, opts).map_err(err)?.value;
        checks.push(Check::le(format!("bipartite[{t}]"), q, K_G_UPPER * local, 1e-9));
    }
    for t in 0..50 {
        let n = 2 + t % 2;
        let d = 2 + t % 3;
        let f = random_correlation_functional(&Scenario::uniform(3, n, 2).map_err(err)?, &mut rng).map_err(err)?;
        let q = correlation_seesaw(&f, &[d, d, d], 4).map_err(err)?.value;
        let bl = bilocal_correlation_value(&f, opts).map_err(err)?.value;
        checks.push(Check::le(format!("tripartite[{t}]"), q, K_G_UPPER * bl, 1e-9));
    }
    Ok(checks)
}

fn c7_kv(opts: &SolverOptions) -> Outcome {
    let mut checks = Vec::new();
    for (tag, params) in [
        ("default eta", KvParams::new(2).map_err(err)?),
        ("eta=0.25", KvParams::with_eta(2, 0.25).map_err(err)?),
    ] {
        let g = khot_vishnoi(params).map_err(err)?;
        let qs = kv_strategy(params).map_err(err)?;
        let local = local_value(&g, opts).map_err(err)?.value;
        let brute = common::brute_force_local(&g);
        let ns = ns_value(&g, opts).map_err(err)?.value;
        let q = evaluate(&g, &behaviour_of(&qs).map_err(err)?).map_err(err)?;
        checks.push(Check::eq(format!("{tag}: normalization"), check_normalization(&g) as u8 as f64, 1.0, 0.0));
        checks.push(Check::eq(format!("{tag}: local vs brute force"), local, brute, 1e-12));
        checks.push(Check::le(format!("{tag}: local <= ns"), local, ns, 1e-7));
        checks.push(Check::le(format!("{tag}: kv strategy <= ns"), q, ns, 1e-7));
        checks.push(record(&format!("{tag}: local"), local));
        checks.push(record(&format!("{tag}: ns"), ns));
        checks.push(record(&format!("{tag}: kv strategy"), q));
    }
    Ok(checks)
}

fn c8_bounds(opts: &SolverOptions) -> Outcome {
    let g = chsh_game();
    let hat = hat_construction(&g).map_err(err)?;
    let qs = hat_strategy(&chsh_optimal_strategy(), &g).map_err(err)?;
    let mut checks = Vec::new();
    let mut push = |tag: String, qs: &bellgap::quantum::QuantumStrategy, g: &bellgap::BellFunctional| -> Result<(), String> {
        let d = check_dimension_bound(qs, g, opts).map_err(err)?;
        let k = check_output_bound(qs, g, opts).map_err(err)?;
        checks.push(Check::eq(format!("{tag}: dimension bound"), d.holds as u8 as f64, 1.0, 0.0));
        checks.push(Check::eq(format!("{tag}: output bound"), k.holds as u8 as f64, 1.0, 0.0));
        Ok(())
    };
    push("hat(chsh)".into(), &qs, &hat)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for t in 0..20 {
        let n = 1 + t % 2;
        let k = 2 + (t / 2) % 2;
        let d = 1 + t % 3;
        let s = Scenario::uniform(3, n, k).map_err(err)?;
        let game = random_game(&s, &mut rng).map_err(err)?;
        let strat = random_strategy(&[d; 3], s.inputs(), s.outputs(), &mut rng).map_err(err)?;
        push(format!("random[{t},N={n},K={k},d={d}]"), &strat, &game)?;
    }
    Ok(checks)
}

fn c9_sandwich(opts: &SolverOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s = Scenario::uniform(3, 2, 2).map_err(err)?;
    let mut checks = Vec::new();
    for t in 0..30 {
        let g = random_game(&s, &mut rng).map_err(err)?;
        let local = local_value(&g, opts).map_err(err)?.value;
        let blns = bilocal_value_ns(&g, opts).map_err(err)?.value;
        let blg = bilocal_value_general(&g, opts).map_err(err)?.value;
        let ns = ns_value(&g, opts).map_err(err)?.value;
        checks.push(Check::le(format!("[{t}] local <= bilocal-ns"), local, blns, 1e-7));
        checks.push(Check::le(format!("[{t}] bilocal-ns <= bilocal-general"), blns, blg, 1e-7));
        checks.push(Check::le(format!("[{t}] local <= ns"), local, ns, 1e-7));
    }
    Ok(checks)
}
