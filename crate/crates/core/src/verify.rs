//! Verification suites: each runs its instances and records every
//! inequality as a [`Check`] with both sides and the tolerance used.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::{chsh_correlation_functional, chsh_game, hadamard_correlation_functional};
use crate::games::{hat_construction, tensor_product};
use crate::io::ReportFile;
use crate::model::{correlation_from_behaviour, behaviour_from_correlation, Scenario};
use crate::quantum::random::random_strategy;
use crate::quantum::{
    behaviour_of, chsh_optimal_strategy, check_dimension_bound, check_output_bound,
    correlation_seesaw, hat_strategy, strategy_value, BoundCheck, K_G_UPPER,
};
use crate::sampling::{random_correlation, random_correlation_functional, random_game};
use crate::solvers::{
    bilocal_correlation_value, bilocal_value_general, bilocal_value_ns, local_correlation_value,
    local_value, lv_ratio, ns_correlation_value, ns_value, SolverOptions, ValueReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
}

/// One inequality; `pass` is a function of the other fields.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: f64, relation: Relation, rhs: f64, tolerance: f64) -> Self {
        let pass = match relation {
            Relation::Le => lhs <= rhs + tolerance,
            Relation::Ge => lhs >= rhs - tolerance,
            Relation::Eq => (lhs - rhs).abs() <= tolerance,
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            relation,
            tolerance,
            pass,
        }
    }

    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(name, lhs, Relation::Le, rhs, tol)
    }

    pub fn ge(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(name, lhs, Relation::Ge, rhs, tol)
    }

    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(name, lhs, Relation::Eq, rhs, tol)
    }

    fn from_bound(prefix: &str, b: &BoundCheck) -> Self {
        Self::le(format!("{prefix}/{}", b.name), b.lhs, b.rhs, 1e-9)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    PropBilocalCor,
    PropLv,
    Thm2,
    LemmasDk,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["lemma1", "prop-bilocal-cor", "prop-lv", "thm2", "lemmas-dk", "all"];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::PropBilocalCor => "prop-bilocal-cor",
            Suite::PropLv => "prop-lv",
            Suite::Thm2 => "thm2",
            Suite::LemmasDk => "lemmas-dk",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Suite::Lemma1,
            Suite::PropBilocalCor,
            Suite::PropLv,
            Suite::Thm2,
            Suite::LemmasDk,
            Suite::All,
        ]
        .into_iter()
        .find(|x| x.as_str() == s)
        .ok_or_else(|| Error::domain(format!("unknown suite {s:?}; expected one of {:?}", Self::NAMES)))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub opts: SolverOptions,
    /// See-saw seeds per functional.
    pub seeds: u64,
    /// Random instances per randomized family.
    pub samples: usize,
    pub rng_seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            opts: SolverOptions::default(),
            seeds: 20,
            samples: 20,
            rng_seed: 2024,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<ReportFile> {
    let start = Instant::now();
    let mut report = match suite {
        Suite::Lemma1 => lemma1(cfg)?,
        Suite::PropBilocalCor => prop_bilocal_cor(cfg)?,
        Suite::PropLv => prop_lv(cfg)?,
        Suite::Thm2 => thm2(cfg)?,
        Suite::LemmasDk => lemmas_dk(cfg)?,
        Suite::All => {
            let mut all = ReportFile::new("all");
            for s in [Suite::Lemma1, Suite::PropBilocalCor, Suite::PropLv, Suite::Thm2, Suite::LemmasDk] {
                all.merge(run_suite(s, cfg)?);
            }
            return Ok(all);
        }
    };
    report
        .wall_times
        .insert(suite.as_str().to_owned(), start.elapsed().as_secs_f64());
    Ok(report)
}

/// Random correlation tensors map to non-signalling behaviours and back.
pub fn lemma1(cfg: &VerifyConfig) -> Result<ReportFile> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut worst_ns = 0.0f64;
    let mut worst_trip = 0.0f64;
    let instances = cfg.samples.max(1) * 5;
    for t in 0..instances {
        let k = 2 + t % 2;
        let n = 1 + (t / 2) % 4;
        let s = Scenario::uniform(k, n, 2)?;
        let gamma = random_correlation(&s, &mut rng)?;
        let p = behaviour_from_correlation(&gamma);
        if let Some(v) = p.non_signalling_report().worst {
            worst_ns = worst_ns.max(v.deviation);
        }
        let back = correlation_from_behaviour(&p)?;
        let err = back
            .table()
            .iter()
            .zip(gamma.table())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst_trip = worst_trip.max(err);
    }
    let mut r = ReportFile::new("lemma1");
    r.checks.push(Check::le(
        format!("lemma1/ns-deviation[{instances} tensors]"),
        worst_ns,
        0.0,
        1e-9,
    ));
    r.checks.push(Check::le(
        format!("lemma1/roundtrip-error[{instances} tensors]"),
        worst_trip,
        0.0,
        1e-12,
    ));
    Ok(r)
}

/// Hadamard functional values and the bilocal/local correlation gap bound.
pub fn prop_bilocal_cor(cfg: &VerifyConfig) -> Result<ReportFile> {
    let m = hadamard_correlation_functional(4)?;
    let mut r = ReportFile::new(m.label());
    let ns = ns_correlation_value(&m)?;
    let bl = bilocal_correlation_value(&m, &cfg.opts)?;
    let loc = local_correlation_value(&m, &cfg.opts)?;
    r.checks.push(Check::eq("hadamard4/ns-cor", ns.value, 16.0, 0.0));
    r.checks.push(Check::eq("hadamard4/bilocal-cor", bl.value, 16.0, 1e-9));
    r.checks.push(Check::le("hadamard4/bilocal<=sqrt(2N)*local", bl.value, 8f64.sqrt() * loc.value, 1e-9));
    r.lv_ratios.push(lv_ratio(&bl, &loc));
    r.values.extend([ns, bl, loc]);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0xb1);
    for t in 0..cfg.samples {
        let n = 1 + t % 4;
        let f = random_correlation_functional(&Scenario::uniform(3, n, 2)?, &mut rng)?;
        let ns = ns_correlation_value(&f)?.value;
        let bl = bilocal_correlation_value(&f, &cfg.opts)?.value;
        let loc = local_correlation_value(&f, &cfg.opts)?.value;
        let tag = format!("random-cor3[{t},N={n}]");
        r.checks.push(Check::le(format!("{tag}/local<=bilocal"), loc, bl, 1e-9));
        r.checks.push(Check::le(format!("{tag}/bilocal<=ns"), bl, ns, 1e-9));
        r.checks.push(Check::le(
            format!("{tag}/bilocal<=sqrt(2N)*local"),
            bl,
            (2.0 * n as f64).sqrt() * loc,
            1e-9,
        ));
    }
    Ok(r)
}

/// Per-functional violation ratios and the Grothendieck consistency checks.
pub fn prop_lv(cfg: &VerifyConfig) -> Result<ReportFile> {
    let mut r = ReportFile::new("prop-lv");
    let g = chsh_game();
    let loc = local_value(&g, &cfg.opts)?;
    let ns = ns_value(&g, &cfg.opts)?;
    let q = strategy_value(&g, &chsh_optimal_strategy())?;
    r.checks.push(Check::eq("chsh/local", loc.value, 0.75, 0.0));
    r.checks.push(Check::eq("chsh/ns", ns.value, 1.0, 1e-9));
    r.checks.push(Check::ge("chsh/quantum-lower", q.value, 0.85355, 1e-4));
    r.checks.push(Check::le("chsh/quantum-lower<=ns", q.value, ns.value, 1e-7));
    r.lv_ratios.push(lv_ratio(&ns, &loc));
    r.lv_ratios.push(lv_ratio(&q, &loc));

    let c = chsh_correlation_functional();
    let qc = correlation_seesaw(&c, &[2, 2], cfg.seeds)?;
    let lc = local_correlation_value(&c, &cfg.opts)?;
    r.checks.push(Check::eq("chsh-cor/see-saw", qc.value, std::f64::consts::FRAC_1_SQRT_2, 1e-6));
    r.checks.push(Check::ge("chsh-cor/see-saw>=local", qc.value, lc.value, 1e-9));
    r.lv_ratios.push(lv_ratio(&qc, &lc));
    r.values.extend([loc, ns, q, qc, lc]);

    r.checks.extend(grothendieck_checks(cfg.samples, cfg.samples, cfg)?);
    Ok(r)
}

/// See-saw values of random correlation functionals stay within `K_G` of
/// the local (bipartite) or bilocal (tripartite) value.
pub fn grothendieck_checks(bipartite: usize, tripartite: usize, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x6b);
    let mut checks = Vec::new();
    let seeds = cfg.seeds.clamp(1, 4);
    for t in 0..bipartite {
        let n = 2 + t % 2;
        let d = 2 + t % 3;
        let f = random_correlation_functional(&Scenario::uniform(2, n, 2)?, &mut rng)?;
        let q = correlation_seesaw(&f, &[d, d], seeds)?.value;
        let loc = local_correlation_value(&f, &cfg.opts)?.value;
        checks.push(Check::le(format!("kg-bipartite[{t},N={n},d={d}]"), q, K_G_UPPER * loc, 1e-9));
    }
    for t in 0..tripartite {
        let n = 2 + t % 2;
        let d = 2 + t % 2;
        let f = random_correlation_functional(&Scenario::uniform(3, n, 2)?, &mut rng)?;
        let q = correlation_seesaw(&f, &[d, d, d], seeds)?.value;
        let bl = bilocal_correlation_value(&f, &cfg.opts)?.value;
        checks.push(Check::le(format!("kg-tripartite[{t},N={n},d={d}]"), q, K_G_UPPER * bl, 1e-9));
    }
    Ok(checks)
}

/// Values entering the hat(CHSH) checks.
pub struct Thm2Values {
    pub chsh_quantum: ValueReport,
    pub chsh_squared_local: ValueReport,
    pub hat_quantum: ValueReport,
    pub hat_local: ValueReport,
    pub hat_bilocal_ns: ValueReport,
    pub hat_bilocal: ValueReport,
}

pub fn thm2_values(opts: &SolverOptions) -> Result<Thm2Values> {
    let g = chsh_game();
    let hat = hat_construction(&g)?;
    let qs = chsh_optimal_strategy();
    Ok(Thm2Values {
        chsh_quantum: strategy_value(&g, &qs)?,
        chsh_squared_local: local_value(&tensor_product(&g, &g)?, opts)?,
        hat_quantum: strategy_value(&hat, &hat_strategy(&qs, &g)?)?,
        hat_local: local_value(&hat, opts)?,
        hat_bilocal_ns: bilocal_value_ns(&hat, opts)?,
        hat_bilocal: bilocal_value_general(&hat, opts)?,
    })
}

pub fn thm2(cfg: &VerifyConfig) -> Result<ReportFile> {
    let v = thm2_values(&cfg.opts)?;
    let mut r = ReportFile::new("hat(chsh)");
    let q3 = v.chsh_quantum.value.powi(3);
    r.checks.push(Check::eq("thm2/hat-strategy=q(chsh)^3", v.hat_quantum.value, q3, 1e-6));
    r.checks.push(Check::le(
        "thm2/bilocal(hat)<=local(chsh^2)",
        v.hat_bilocal.value,
        v.chsh_squared_local.value,
        1e-9,
    ));
    r.checks.push(Check::ge(
        "thm2/q(hat)/bilocal(hat)>=q(chsh)^3/local(chsh^2)",
        v.hat_quantum.value / v.hat_bilocal.value,
        q3 / v.chsh_squared_local.value,
        1e-6,
    ));
    r.checks.push(Check::le("thm2/local<=bilocal-ns", v.hat_local.value, v.hat_bilocal_ns.value, 1e-7));
    r.checks.push(Check::le("thm2/bilocal-ns<=bilocal", v.hat_bilocal_ns.value, v.hat_bilocal.value, 1e-7));
    r.lv_ratios.push(lv_ratio(&v.hat_quantum, &v.hat_bilocal));
    r.values.extend([
        v.chsh_quantum,
        v.chsh_squared_local,
        v.hat_quantum,
        v.hat_local,
        v.hat_bilocal_ns,
        v.hat_bilocal,
    ]);
    Ok(r)
}

/// Dimension and output bounds on hat(CHSH) and random tripartite games.
pub fn lemmas_dk(cfg: &VerifyConfig) -> Result<ReportFile> {
    let mut r = ReportFile::new("lemmas-dk");
    let g = chsh_game();
    let hat = hat_construction(&g)?;
    let qs = hat_strategy(&chsh_optimal_strategy(), &g)?;
    r.checks.push(Check::from_bound("hat(chsh)", &check_dimension_bound(&qs, &hat, &cfg.opts)?));
    r.checks.push(Check::from_bound("hat(chsh)", &check_output_bound(&qs, &hat, &cfg.opts)?));
    r.checks.extend(random_dk_checks(cfg.samples, cfg)?);
    Ok(r)
}

pub fn random_dk_checks(count: usize, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0xd4);
    let mut checks = Vec::new();
    for t in 0..count {
        let n = 1 + t % 2;
        let k = 2 + (t / 2) % 2;
        let d = 1 + t % 3;
        let s = Scenario::uniform(3, n, k)?;
        let g = random_game(&s, &mut rng)?;
        let qs = random_strategy(&[d; 3], s.inputs(), s.outputs(), &mut rng)?;
        let tag = format!("random-game[{t},N={n},K={k},d={d}]");
        // Quantum behaviours are non-signalling.
        let ns_dev = behaviour_of(&qs)?
            .non_signalling_report()
            .worst
            .map_or(0.0, |w| w.deviation);
        checks.push(Check::le(format!("{tag}/ns-deviation"), ns_dev, 0.0, 1e-9));
        checks.push(Check::from_bound(&tag, &check_dimension_bound(&qs, &g, &cfg.opts)?));
        checks.push(Check::from_bound(&tag, &check_output_bound(&qs, &g, &cfg.opts)?));
    }
    Ok(checks)
}
