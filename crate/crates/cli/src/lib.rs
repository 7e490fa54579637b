//! Command implementations behind the `stardyn` binary.
//!
//! Each command returns a JSON report and a verdict. Verification failures
//! exit with 1; input errors exit with 2.

pub mod descriptor;

use serde_json::{json, Value};
use stardyn::covrep::{
    build_example_1_3_with_limit, build_strict_rep_with_limit, BasisId, RepContext, RepKind, Relation, Status,
};
use stardyn::transfer::completeness_report;
use stardyn::unitize::unitize_kernel;
use stardyn::{random, ExtendedSystem, GaussRat, Tower};

use descriptor::{element_json, System};

/// Basis points allowed before a command refuses to enumerate.
pub const DEFAULT_DEPTH_LIMIT: usize = 10_000;
pub const DEPTH_LIMIT_VAR: &str = "STARDYN_DEPTH_LIMIT";

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Input(String),
    /// Exit code 1.
    Verification(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Verification(m) => write!(f, "verification failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<stardyn::Error> for CliError {
    fn from(e: stardyn::Error) -> Self {
        match e {
            stardyn::Error::Input(_) | stardyn::Error::Domain(_) | stardyn::Error::Limit { .. } => {
                CliError::Input(e.to_string())
            }
            stardyn::Error::ContractBreach(_) | stardyn::Error::NotComplete { .. } => {
                CliError::Verification(e.to_string())
            }
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

/// A report plus whether every asserted check passed.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
    pub dot: Option<String>,
}

pub fn depth_limit_from(var: Option<&str>) -> Result<usize, CliError> {
    match var {
        None => Ok(DEFAULT_DEPTH_LIMIT),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{DEPTH_LIMIT_VAR} must be a non-negative integer, got '{s}'"))),
    }
}

fn guard(what: &str, size: usize, limit: usize) -> Result<(), CliError> {
    if size > limit {
        return Err(CliError::Input(format!("{what} has {size} basis points, above the limit {limit}")));
    }
    Ok(())
}

pub fn classify(sys: &System) -> Result<Outcome, CliError> {
    let endo = sys.endo();
    let c = endo.classify()?;
    let r = completeness_report(&endo)?;
    let alg = endo.source();
    let mut report = json!({
        "mono": c.mono,
        "epi": c.epi,
        "auto": c.auto,
        "unital_kernel": c.unital_kernel,
        "hereditary_range": c.hereditary_range,
        "complete": c.complete,
        "completeness": { "i": r.i, "ii": r.ii, "iii": r.iii, "iv": r.iv },
        "kernel_unit": element_json(r.kernel_unit.element())?,
        "delta_one": element_json(&endo.apply(&alg.identity()))?,
        "witness_p": r.p.as_ref().map(|p| element_json(p.element())).transpose()?,
        "transfer_unit": r.transfer_unit.as_ref().map(element_json).transpose()?,
    });
    if let System::Map(m) = sys {
        let d = m.duality_report::<GaussRat>()?;
        report["duality"] = d
            .rows
            .iter()
            .map(|row| json!({ "row": row.name, "algebra_side": row.algebra_side, "map_side": row.map_side }))
            .collect();
    }
    Ok(Outcome { report, passed: true, dot: None })
}

pub fn extend(sys: &System, levels: usize, limit: usize, want_dot: bool) -> Result<Outcome, CliError> {
    let tower = Tower::new(sys.endo())?;
    let dims: Vec<usize> = (0..=levels).map(|n| tower.level_algebra(n).dim()).collect();
    guard("the tower", dims.iter().copied().max().unwrap_or(0), limit)?;
    let summands: Vec<Vec<usize>> = (0..=levels).map(|n| tower.level_algebra(n).summand_dims()).collect();
    let checks = [tower.verify_tower(levels), tower.verify_transfer_axioms(levels)];
    let passed = checks.iter().all(|r| r.passed());
    let checks: Vec<Value> = checks
        .iter()
        .flat_map(|r| &r.checks)
        .map(|c| json!({ "identity": c.name, "checked": c.checked, "failed": c.failed }))
        .collect();
    let report = json!({ "levels": levels, "dims": dims, "summand_dims": summands, "checks": checks, "passed": passed });
    Ok(Outcome { report, passed, dot: want_dot.then(|| tower.bratteli_dot(levels)) })
}

pub fn spectrum(sys: &System, depth: usize, limit: usize, want_dot: bool) -> Result<Outcome, CliError> {
    let map = sys.partial_map()?;
    let ext: ExtendedSystem<GaussRat> = ExtendedSystem::new(map.clone());
    let points = ext.enumerate_points(depth);
    guard("the spectrum", points.len(), limit)?;
    let sizes: Vec<usize> = (0..=depth).map(|n| ext.level_spectrum(n).len()).collect();
    let dims: Vec<usize> = (0..=depth).map(|n| ext.tower().level_algebra(n).dim()).collect();
    let edges: Vec<Value> = points
        .iter()
        .filter_map(|p| ext.alpha_tilde(p).ok().map(|q| json!([ext.display(p), ext.display(&q)])))
        .collect();
    let check = if depth >= 1 {
        let r = ext.natural_extension_system_check(depth)?;
        json!({
            "cardinality_checks": r.cardinality_checks,
            "bonding_checks": r.bonding_checks,
            "dynamics_checks": r.dynamics_checks,
        })
    } else {
        Value::Null
    };
    let report = json!({
        "depth": depth,
        "count": points.len(),
        "points": points.iter().map(|p| ext.display(p)).collect::<Vec<_>>(),
        "alpha_tilde": edges,
        "level_sizes": sizes,
        "level_dims": dims,
        "system_check": check,
    });
    Ok(Outcome { report, passed: sizes == dims, dot: want_dot.then(|| ext.dot(depth)) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Example13,
}

fn basis_label(ctx: &RepContext<GaussRat>, id: &BasisId) -> String {
    match id {
        BasisId::Ext(p) => ctx.system().display(p),
        BasisId::Pair { x, n } => format!("({},{n})", ctx.map().name(*x)),
    }
}

/// Expected status; `None` when the relation is reported but not asserted.
fn expected(kind: RepKind, r: Relation) -> Option<Status> {
    match (kind, r) {
        (RepKind::Strict, _) => Some(Status::Pass),
        (RepKind::Example13, Relation::CR1DoublePrime) => Some(Status::Fail),
        (RepKind::Example13, Relation::CR3) => None,
        (RepKind::Example13, _) => Some(Status::Pass),
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Inconclusive => "inconclusive",
    }
}

pub fn covrep(sys: &System, depth: usize, mode: Mode, limit: usize) -> Result<Outcome, CliError> {
    let map = sys.partial_map()?;
    let ctx = match mode {
        Mode::Strict => build_strict_rep_with_limit::<GaussRat>(map, depth, limit)?,
        Mode::Example13 => build_example_1_3_with_limit::<GaussRat>(map, depth, limit)?,
    };
    let level = if mode == Mode::Strict { depth } else { 0 };
    let report = ctx.verify_cr(&Relation::ALL, level)?;
    let mut passed = true;
    let relations: Vec<Value> = report
        .relations
        .iter()
        .map(|r| {
            let exp = expected(ctx.kind(), r.relation);
            let matches = exp.is_none_or(|e| e == r.status());
            passed &= matches;
            json!({
                "relation": r.relation.name(),
                "status": status_name(r.status()),
                "expected": exp.map(status_name),
                "as_expected": matches,
                "checks": r.checks,
                "certified_vectors": r.certified_vectors,
                "uncertified_checks": r.uncertified_checks,
                "failures": r.failures,
                "witnesses": r.witnesses.iter().map(|w| basis_label(&ctx, w)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let isometry_checks = ctx.partial_isometry_check()?;
    let s = ctx.structural_checks()?;
    let structural = json!({
        "certified_vectors": s.certified_vectors,
        "strict": s.strict,
        "isometric": s.isometric,
        "gap_witness": s.gap_witness.as_ref().map(|w| basis_label(&ctx, w)),
        "conjugacy_checks": s.conjugacy_checks,
        "pi_plus_checks": s.pi_plus_checks,
        "gap_dims": s.gap_dims,
    });
    let report = json!({
        "mode": if mode == Mode::Strict { "strict" } else { "example13" },
        "depth": depth,
        "basis_size": report.basis_size,
        "relations": relations,
        "partial_isometry_checks": isometry_checks,
        "structural": structural,
        "passed": passed,
    });
    Ok(Outcome { report, passed, dot: None })
}

/// Runs every suite that applies to the system.
pub fn verify_all(sys: &System, depth: usize, limit: usize) -> Result<Outcome, CliError> {
    let mut suites: Vec<Value> = Vec::new();
    let mut passed = true;
    let mut record = |name: &str, result: Result<Value, CliError>| {
        let (ok, detail) = match result {
            Ok(v) => (v.get("passed").and_then(Value::as_bool).unwrap_or(true), v),
            Err(CliError::Verification(m)) => (false, json!(m)),
            Err(e @ CliError::Input(_)) => return Err(e),
        };
        passed &= ok;
        suites.push(json!({ "suite": name, "passed": ok, "detail": detail }));
        Ok(())
    };

    record("classify", classify(sys).map(|o| o.report))?;
    record("extend", extend(sys, depth, limit, false).map(|o| o.report))?;
    let endo = sys.endo();
    record(
        "extension",
        (|| {
            let tower = Tower::new(endo.clone())?;
            let kernel = (0..=depth).map(|n| tower.kernel_unit_is_iota_q(n)).collect::<Result<Vec<_>, _>>()?;
            let complete = endo.classify()?.complete;
            let bijective = !complete || (0..=depth).all(|n| tower.embedding_is_bijective(n));
            let mut rng = random::rng(0x0005_eed0);
            let round_trips = (0..20).all(|_| {
                let bs = random::coefficient_list::<GaussRat, _>(&mut rng, tower.algebra(), depth + 1);
                tower.from_transfer_sum(&bs).is_ok_and(|x| {
                    let c = tower.to_coordinates(&x);
                    tower.inductive_coefficients(&bs) == c && tower.is_canonical(&c)
                })
            });
            let ok = kernel.iter().all(|&b| b) && bijective && round_trips;
            Ok::<_, CliError>(json!({
                "kernel_unit_is_iota_q": kernel,
                "embeddings_bijective": bijective,
                "normal_form_round_trips": round_trips,
                "passed": ok,
            }))
        })(),
    )?;
    record(
        "unitization",
        (|| {
            let u = unitize_kernel(&endo)?;
            let ok = u.embed_is_bijective() && u.delta_plus.kernel_unit() == u.kernel_unit();
            Ok::<_, CliError>(json!({ "aplus_blocks": u.aplus.block_dims(), "passed": ok }))
        })(),
    )?;
    if let System::Map(map) = sys {
        record("spectrum", spectrum(sys, depth.max(1), limit, false).map(|o| o.report))?;
        record("covrep strict", covrep(sys, depth, Mode::Strict, limit).map(|o| o.report))?;
        record(
            "correspondence",
            (|| {
                let ctx = build_strict_rep_with_limit::<GaussRat>(map, depth, limit)?;
                let mut rng = random::rng(0x0005_eed1);
                let alg = ctx.system().tower().algebra().clone();
                let lists: Vec<_> =
                    (0..10).map(|_| random::coefficient_list::<GaussRat, _>(&mut rng, &alg, depth + 1)).collect();
                let r = ctx.correspondence_check(&lists)?;
                Ok::<_, CliError>(json!({ "lists": r.lists, "checks": r.checks, "uncertified": r.uncertified }))
            })(),
        )?;
        if map.is_injective() {
            record("covrep example13", covrep(sys, depth, Mode::Example13, limit).map(|o| o.report))?;
        }
    }
    let report = json!({ "depth": depth, "suites": suites, "passed": passed });
    Ok(Outcome { report, passed, dot: None })
}
