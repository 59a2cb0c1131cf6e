//! The lemma-indexed property suites: every semantic equation of the
//! underlying theory is checked exhaustively over the truncated skeleton
//! of worlds, with one report row per (fixture, world).

pub mod corpus;
pub mod suites;

use std::collections::BTreeMap;

use crate::interp::interp_ctx;
use crate::interp::{interp_term, interp_type};
use crate::semantics::psh::subsets_containing;
use crate::semantics::{Bounds, Psh, SemValue};
use crate::syntax::ast::*;
use crate::syntax::parser::parse_term_in;
use crate::worlds::{advance_world, tick_dec, Truncation, World};
use crate::{Error, Result};

pub use corpus::EnvSeed;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub trunc: Truncation,
    pub nat_bound: u64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { trunc: Truncation::default(), nat_bound: 4, seed: 0 }
    }
}

impl SuiteConfig {
    pub fn bounds(&self) -> Bounds {
        Bounds::new(self.trunc, self.nat_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    TruncationExceeded(String),
}

#[derive(Debug, Clone)]
pub struct CheckRow {
    pub lemma: String,
    pub fixture: String,
    pub world: String,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<CheckRow>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| matches!(c.status, Status::Pass))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "checks": self.checks.iter().map(|c| {
                let status = match &c.status {
                    Status::Pass => serde_json::json!("pass"),
                    Status::Fail(m) => serde_json::json!({"fail": m}),
                    Status::TruncationExceeded(m) => serde_json::json!({"truncation-exceeded": m}),
                };
                serde_json::json!({
                    "lemma": c.lemma,
                    "fixture": c.fixture,
                    "world": c.world,
                    "status": status,
                })
            }).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut pass = 0usize;
        for c in &self.checks {
            match &c.status {
                Status::Pass => pass += 1,
                Status::Fail(m) => {
                    s.push_str(&format!(
                        "FAIL {} [{}] {} at {}: {}\n",
                        self.suite, c.lemma, c.fixture, c.world, m
                    ));
                }
                Status::TruncationExceeded(m) => {
                    s.push_str(&format!(
                        "TRUNC {} [{}] {} at {}: {}\n",
                        self.suite, c.lemma, c.fixture, c.world, m
                    ));
                }
            }
        }
        s.push_str(&format!(
            "suite {}: {}/{} checks pass\n",
            self.suite,
            pass,
            self.checks.len()
        ));
        s
    }
}

/// A recorder the suite bodies push rows into.
pub struct Recorder {
    pub suite: String,
    pub checks: Vec<CheckRow>,
}

impl Recorder {
    pub fn new(suite: &str) -> Recorder {
        Recorder { suite: suite.to_string(), checks: Vec::new() }
    }

    pub fn record(&mut self, lemma: &str, fixture: &str, world: &str, status: Status) {
        self.checks.push(CheckRow {
            lemma: lemma.to_string(),
            fixture: fixture.to_string(),
            world: world.to_string(),
            status,
        });
    }

    /// Records a boolean outcome; truncation errors get their own status,
    /// distinguishable from property failures.
    pub fn check(&mut self, lemma: &str, fixture: &str, world: &str, r: Result<bool>) {
        let status = match r {
            Ok(true) => Status::Pass,
            Ok(false) => Status::Fail("equation does not hold".into()),
            Err(Error::Truncation(m)) => Status::TruncationExceeded(m),
            Err(e) => Status::Fail(e.to_string()),
        };
        self.record(lemma, fixture, world, status);
    }

    pub fn finish(self) -> Report {
        Report { suite: self.suite, checks: self.checks }
    }
}

/// The presheaves the suites quantify over, kept as a description so both
/// the carrier operations and a seeded element generator are available.
#[derive(Clone)]
pub enum PshSpec {
    Ctx(Context, Vec<EnvSeed>),
    Later(Ident, Box<PshSpec>),
    Earlier(Ident, Box<PshSpec>),
    Reindex(BTreeMap<Ident, Ident>, Box<PshSpec>, Vec<Ident>),
}

impl PshSpec {
    pub fn ctx(c: &Context, seeds: &[EnvSeed]) -> PshSpec {
        PshSpec::Ctx(c.clone(), seeds.to_vec())
    }

    pub fn later(self, k: &str) -> PshSpec {
        PshSpec::Later(k.to_string(), Box::new(self))
    }

    pub fn earlier(self, k: &str) -> PshSpec {
        PshSpec::Earlier(k.to_string(), Box::new(self))
    }

    pub fn reindex(self, nu: &BTreeMap<Ident, Ident>, delta: &[Ident]) -> PshSpec {
        PshSpec::Reindex(nu.clone(), Box::new(self), delta.to_vec())
    }

    pub fn delta(&self) -> Vec<Ident> {
        match self {
            PshSpec::Ctx(c, _) => c.clocks.clone(),
            PshSpec::Later(_, f) | PshSpec::Earlier(_, f) => f.delta(),
            PshSpec::Reindex(_, _, d) => d.clone(),
        }
    }

    pub fn psh(&self) -> Psh {
        match self {
            PshSpec::Ctx(c, _) => interp_ctx(c),
            PshSpec::Later(k, f) => Psh::later(k.clone(), f.psh()),
            PshSpec::Earlier(k, f) => Psh::earlier(k.clone(), f.psh()),
            PshSpec::Reindex(nu, f, d) => Psh::reindex(nu.clone(), f.psh(), d.clone()),
        }
    }

    /// Elements at a world: the enumeration where it exists, extended by
    /// seed-generated environments for function-typed entries.
    pub fn elements(&self, w: &World, bounds: &Bounds) -> Result<Vec<SemValue>> {
        match self {
            PshSpec::Ctx(c, seeds) => gen_envs(c, w, seeds, bounds),
            PshSpec::Later(k, f) => {
                if w.tick_of(k) == 0 {
                    Ok(vec![SemValue::Star])
                } else {
                    f.elements(&tick_dec(w, k), bounds)
                }
            }
            PshSpec::Earlier(k, f) => {
                let mut out = Vec::new();
                for x in subsets_containing(&w.synced_with(k), k) {
                    let (adv, _) = advance_world(w, &x, k);
                    for v in f.elements(&adv, bounds)? {
                        out.push(SemValue::tick(x.clone(), v));
                    }
                }
                Ok(out)
            }
            PshSpec::Reindex(nu, f, _) => f.elements(&w.precompose(nu), bounds),
        }
    }
}

/// Environments of a context at a world: exhaustive for enumerable entry
/// types, seeded terms elsewhere, and all synchronisation classes for tick
/// entries.
pub fn gen_envs(
    ctx: &Context,
    w: &World,
    seeds: &[EnvSeed],
    bounds: &Bounds,
) -> Result<Vec<SemValue>> {
    gen_envs_upto(ctx, ctx.entries.len(), w, seeds, bounds)
}

fn gen_envs_upto(
    ctx: &Context,
    n: usize,
    w: &World,
    seeds: &[EnvSeed],
    bounds: &Bounds,
) -> Result<Vec<SemValue>> {
    if n == 0 {
        return Ok(vec![SemValue::Star]);
    }
    match &ctx.entries[n - 1] {
        Entry::Term(x, a) => {
            let prefix_envs = gen_envs_upto(ctx, n - 1, w, seeds, bounds)?;
            let prefix = ctx.prefix(n - 1);
            let a_ty = interp_type(&prefix, a)?;
            let mut out = Vec::new();
            for env in prefix_envs {
                match a_ty.set_at(w, &env, bounds)?.enumerate(bounds) {
                    Ok(vals) => {
                        for v in vals {
                            out.push(SemValue::pair(env.clone(), v));
                        }
                    }
                    Err(Error::NotEnumerable(_)) => {
                        for s in seeds {
                            if let Some(tsrc) = s.get(x) {
                                let t = parse_term_in(&prefix, tsrc)?;
                                let v = interp_term(&prefix, &t)?.eval(w, &env, bounds)?;
                                out.push(SemValue::pair(env.clone(), v));
                            }
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(out)
        }
        Entry::Tick(_, k) => {
            let mut out = Vec::new();
            for x in subsets_containing(&w.synced_with(k), k) {
                let (adv, _) = advance_world(w, &x, k);
                for env in gen_envs_upto(ctx, n - 1, &adv, seeds, bounds)? {
                    out.push(SemValue::tick(x.clone(), env));
                }
            }
            Ok(out)
        }
    }
}

pub const SUITES: &[&str] = &[
    "eq5-eq6-triangles",
    "lemma2-transposition",
    "lemma7-reindexing",
    "eq3-eq4",
    "lemma8-substitution",
    "lemma9-27-clock-weakening",
    "lemma10-forall-beta-eta",
    "lemma11-30-unfolding",
    "prop6-lemma14-15-tick-irrelevance",
    "prop12-diamond-welldefinedness",
    "lemma16-18-29-31-exchange-algebra",
    "lemma13-clock-irrelevance",
    "beta-eta",
    "typing",
    "soundness",
    "presheaf-laws",
    "streams",
];

/// Runs one named suite.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report> {
    let bounds = cfg.bounds();
    let mut rec = Recorder::new(name);
    match name {
        "eq5-eq6-triangles" => suites::triangles(&mut rec, &bounds)?,
        "lemma2-transposition" => suites::transposition(&mut rec, &bounds)?,
        "lemma7-reindexing" => suites::reindexing(&mut rec, &bounds)?,
        "eq3-eq4" => suites::eq3_eq4(&mut rec, &bounds)?,
        "lemma8-substitution" => suites::substitution_lemma(&mut rec, &bounds)?,
        "lemma9-27-clock-weakening" => suites::clock_weakening(&mut rec, &bounds)?,
        "lemma10-forall-beta-eta" => suites::forall_beta_eta(&mut rec, &bounds)?,
        "lemma11-30-unfolding" => suites::unfolding(&mut rec, &bounds, cfg)?,
        "prop6-lemma14-15-tick-irrelevance" => suites::tick_irrelevance(&mut rec, &bounds)?,
        "prop12-diamond-welldefinedness" => suites::diamond_welldefined(&mut rec, &bounds)?,
        "lemma16-18-29-31-exchange-algebra" => suites::exchange_algebra(&mut rec, &bounds)?,
        "lemma13-clock-irrelevance" => suites::clock_irrelevance(&mut rec, &bounds)?,
        "beta-eta" => suites::beta_eta(&mut rec, &bounds)?,
        "typing" => suites::typing(&mut rec)?,
        "soundness" => suites::soundness(&mut rec, &bounds)?,
        "presheaf-laws" => suites::presheaf_laws(&mut rec, cfg)?,
        "streams" => suites::streams(&mut rec, &bounds, cfg)?,
        other => return Err(Error::Sem(format!("unknown suite {other:?}"))),
    }
    Ok(rec.finish())
}

/// Runs every suite in order.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<Report>> {
    SUITES.iter().map(|s| run_suite(s, cfg)).collect()
}

/// Extracts the first `depth` elements of a clock-quantified stream by
/// iterating head and tail through the denotational semantics in the
/// ambient single-clock context.
pub fn stream_prefix(stream: &Term, depth: u32, cfg: &SuiteConfig) -> Result<Vec<u64>> {
    if depth > cfg.trunc.max_ticks {
        return Err(Error::Truncation(format!(
            "prefix depth {depth} exceeds the tick budget {}",
            cfg.trunc.max_ticks
        )));
    }
    let bounds = cfg.bounds();
    let ctx = Context::new(vec!["k0".into()]);
    let w = World::from_json(&serde_json::json!({
        "clocks": {"l0": cfg.trunc.max_ticks},
        "valuation": {"k0": "l0"},
    }))
    .map_err(Error::World)?;
    let mut s = stream.clone();
    let mut out = Vec::new();
    for i in 0..depth {
        let head = Term::Fst(Box::new(Term::ClockApp(Box::new(s.clone()), "k0".into())));
        let v = interp_term(&ctx, &head)?.eval(&w, &SemValue::Star, &bounds)?;
        out.push(v.as_nat()?);
        let ka = format!("kt{i}a");
        let kb = format!("kt{i}b");
        s = Term::ClockLam(
            ka.clone(),
            Box::new(Term::DiamondApp(
                Box::new(Term::Snd(Box::new(Term::ClockApp(Box::new(s), kb.clone())))),
                kb,
                ka,
            )),
        );
    }
    Ok(out)
}
