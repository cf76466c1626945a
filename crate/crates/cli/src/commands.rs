use std::fs;
use std::io::{BufReader, Write};

use chainlattice::containers::container_stats;
use chainlattice::dump::{chain_dump_string, read_chain_dump};
use chainlattice::extremal::{
    aggregate_bound, boolean_algebra, comparable_pair, corner, corner_deletion_bound, ex_oracle,
    grid_partition, refined_boolean_bound, theorem32_bound, verify_grid_partition,
    AffineConfiguration, Ambient, Grid, Poset,
};
use chainlattice::lattice::{
    dominance_check, uniformity_stats, verify_chain_decomposition, ChainDecomposition, Ground,
};
use chainlattice::numerics::{appendix_table_check, binomial_estimate_check, default_grid};
use chainlattice::pipeline::{run_pipeline, run_pipeline_best_of, PipelineTrace};
use chainlattice::sperner::{build_sperner_graph, sperner_summary};
use chainlattice::subset::middle_binom;
use chainlattice::symmetric::{sigma_profile, symmetric_decomposition};
use chainlattice::{Error, Method};
use serde_json::{json, Value};

use crate::{Command, Global, GroundArg, MethodArg, ModeArg};

pub enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

pub fn run(g: &Global, cmd: &Command) -> Result<u8, Failure> {
    let (mut record, passed) = match cmd {
        Command::Decompose => decompose(g)?,
        Command::Verify { ground } => verify(g, *ground)?,
        Command::Stats => stats(g)?,
        Command::Sperner => sperner(g)?,
        Command::Extremal {
            config,
            mode,
            k,
            induced,
            c,
            alpha,
        } => extremal(g, config, *mode, *k, *induced, *c, *alpha)?,
        Command::Containers { samples } => containers(g, *samples)?,
        Command::Numerics { check } => numerics(check)?,
    };
    let obj = record.as_object_mut().expect("records are objects");
    obj.insert("schema".into(), json!(1));
    obj.insert("passed".into(), json!(passed));
    let mut text = serde_json::to_string_pretty(&record).expect("JSON values serialize");
    text.push('\n');
    match &g.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Check(format!("cannot write to stdout: {e}")))?;
        }
    }
    Ok(if passed { 0 } else { 1 })
}

fn need_n(g: &Global) -> Result<u32, Failure> {
    g.n.ok_or_else(|| Failure::Usage("--n is required".into()))
}

fn method_of(g: &Global, default: MethodArg) -> Method {
    g.method.unwrap_or(default).into()
}

/// Decomposition for `(n, method, seed)`, honouring `--best-of` for the
/// uniform method.
fn build(
    g: &Global,
    n: u32,
    method: Method,
) -> Result<(ChainDecomposition, Option<PipelineTrace>), Failure> {
    if g.best_of == 0 {
        return Err(Failure::Usage("--best-of must be at least 1".into()));
    }
    Ok(match method {
        Method::Symmetric => (symmetric_decomposition(n)?, None),
        Method::Uniform => {
            let eps = g.eps.first().copied().unwrap_or(0.5);
            let (d, t) = if g.best_of > 1 {
                run_pipeline_best_of(n, g.seed, g.best_of, eps)?
            } else {
                run_pipeline(n, g.seed)?
            };
            (d, Some(t))
        }
    })
}

fn uniformity(d: &ChainDecomposition, eps: &[f64]) -> (Value, Value) {
    let mut near = Vec::new();
    let mut cover = Vec::new();
    for &e in eps {
        let st = uniformity_stats(d, e);
        near.push(json!({"eps": e, "fraction": st.near_uniform_fraction}));
        cover.push(json!({"eps": e, "fraction": st.coverage_fraction}));
    }
    (Value::Array(near), Value::Array(cover))
}

fn decompose(g: &Global) -> Outcome {
    let n = need_n(g)?;
    let method = method_of(g, MethodArg::Uniform);
    let (d, trace) = build(g, n, method)?;
    let report = verify_chain_decomposition(&d);
    let s = (1u128 << n) as f64 / middle_binom(n) as f64;
    let (near, cover) = uniformity(&d, &g.eps);
    let mut rec = json!({
        "command": "decompose",
        "n": n,
        "seed": g.seed,
        "method": method.name(),
        "num_chains": d.num_chains(),
        "s": s,
        "histogram": d.profile().histogram(),
        "near_uniform_fraction": near,
        "coverage_fraction": cover,
        "verified": report.passed,
    });
    if let Some(t) = &trace {
        let obj = rec.as_object_mut().expect("object");
        obj.insert("seed".into(), json!(t.seed));
        obj.insert("k".into(), json!(t.constants.k));
        obj.insert("C0".into(), json!(t.constants.c0));
        obj.insert("leftover_size".into(), json!(t.leftover_size));
        obj.insert(
            "counts".into(),
            json!({
                "short": t.short(),
                "irrelevant": t.irrelevant(),
                "sad": t.sad(),
                "incompatible": t.incompatible(),
                "shattered_blocks": t.shattered_blocks,
                "repair_events": t.repair_events,
            }),
        );
    }
    rec.as_object_mut()
        .expect("object")
        .insert("dump".into(), write_dump(g, &d)?);
    Ok((rec, report.passed))
}

fn write_dump(g: &Global, d: &ChainDecomposition) -> Result<Value, Failure> {
    let Some(path) = &g.chains else {
        return Ok(Value::Null);
    };
    let text = chain_dump_string(d);
    let bytes = text.len() as u64;
    if g.max_bytes.is_some_and(|max| bytes > max) {
        return Ok(json!({"path": path, "bytes": bytes, "written": false}));
    }
    fs::write(path, text)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(json!({"path": path, "bytes": bytes, "written": true}))
}

fn read_dump(g: &Global, ground: Ground) -> Result<Result<ChainDecomposition, Error>, Failure> {
    let path = g
        .chains
        .as_ref()
        .ok_or_else(|| Failure::Usage("--chains <file> is required".into()))?;
    let file = fs::File::open(path)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
    Ok(read_chain_dump(BufReader::new(file), ground))
}

fn verify(g: &Global, ground: GroundArg) -> Outcome {
    let ground = match ground {
        GroundArg::Full => Ground::Full,
        GroundArg::UpperHalf => Ground::UpperHalf,
    };
    let label = ground.label();
    let d = match read_dump(g, ground)? {
        Ok(d) => d,
        Err(e) => {
            let rec = json!({"command": "verify", "ground": label, "error": e.to_string()});
            return Ok((rec, false));
        }
    };
    let report = verify_chain_decomposition(&d);
    let rec = json!({
        "command": "verify",
        "n": d.n,
        "ground": label,
        "report": report,
        "minimum_chains": d.ground == Ground::Full && d.num_chains() as u128 == middle_binom(d.n),
    });
    Ok((rec, report.passed))
}

fn stats(g: &Global) -> Outcome {
    let (d, source) = if g.chains.is_some() {
        let d = read_dump(g, Ground::Full)?.map_err(|e| Failure::Check(e.to_string()))?;
        (d, "dump")
    } else {
        let n = need_n(g)?;
        let method = method_of(g, MethodArg::Symmetric);
        (build(g, n, method)?.0, method.name())
    };
    let report = verify_chain_decomposition(&d);
    let (near, cover) = uniformity(&d, &g.eps);
    let dominated = if d.num_chains() as u128 == middle_binom(d.n) {
        let sigma = sigma_profile(d.n)?.sigma;
        Some(dominance_check(&d.profile(), &sigma)?)
    } else {
        None
    };
    let rec = json!({
        "command": "stats",
        "n": d.n,
        "source": source,
        "num_chains": d.num_chains(),
        "histogram": d.profile().histogram(),
        "near_uniform_fraction": near,
        "coverage_fraction": cover,
        "dominated_by_symmetric": dominated,
        "verified": report.passed,
    });
    Ok((rec, report.passed))
}

fn sperner(g: &Global) -> Outcome {
    let n = need_n(g)?;
    let method = method_of(g, MethodArg::Symmetric);
    let (d, _) = build(g, n, method)?;
    let graph = build_sperner_graph(&d)?;
    let summary = sperner_summary(&graph);
    let passed = summary.alpha_certified && summary.meets_turan;
    let mut rec = serde_json::to_value(&summary).expect("summary serializes");
    let obj = rec.as_object_mut().expect("object");
    obj.insert("command".into(), json!("sperner"));
    obj.insert("method".into(), json!(method.name()));
    obj.insert("seed".into(), json!(g.seed));
    Ok((rec, passed))
}

/// Default `(d, c, alpha)` for the grid bound of a built-in configuration.
type GridConstants = Option<(u32, f64, f64)>;

fn load_config(
    config_name: &str,
    induced: bool,
) -> Result<(AffineConfiguration, GridConstants), Failure> {
    Ok(match config_name {
        "sperner" => (comparable_pair(), Some((1, 1.0, 1.0))),
        "unionfree" => (corner(), Some((2, 2.0, 1.0))),
        "boolean2" => (boolean_algebra(2)?, Some((2, 1.0, 0.5))),
        other => {
            let Some(path) = other.strip_prefix("poset:") else {
                return Err(Failure::Usage(format!(
                    "unknown configuration {other:?}; expected sperner, unionfree, boolean2 or poset:<file>"
                )));
            };
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
            let p = Poset::parse(&text)?;
            let c = if induced {
                p.induced_configuration()
            } else {
                p.weak_configuration()
            };
            (c, None)
        }
    })
}

fn format_family(amb: &Ambient, family: &[u64]) -> Value {
    match amb {
        Ambient::Lattice { .. } => family.iter().map(|x| json!(format!("{x:x}"))).collect(),
        Ambient::Grid(grid) => family.iter().map(|&p| json!(grid.coords(p))).collect(),
    }
}

#[allow(clippy::too_many_arguments)]
fn extremal(
    g: &Global,
    config_name: &str,
    mode: ModeArg,
    k: Option<u32>,
    induced: bool,
    c_arg: Option<f64>,
    alpha_arg: Option<f64>,
) -> Outcome {
    let (config, constants) = load_config(config_name, induced)?;
    let base = json!({
        "command": "extremal",
        "config": config_name,
        "formula": config.to_string(),
    });
    let mut rec = base;
    let obj = rec.as_object_mut().expect("object");
    let passed = match mode {
        ModeArg::Oracle => {
            let amb = match (k, g.n) {
                (Some(k), _) => {
                    let d = g.d.unwrap_or(constants.map_or(1, |c| c.0));
                    Ambient::Grid(Grid::cube(k, d)?)
                }
                (None, Some(n)) => Ambient::Lattice { n },
                (None, None) => {
                    return Err(Failure::Usage(
                        "oracle mode needs --k (grid) or --n (lattice)".into(),
                    ))
                }
            };
            let res = ex_oracle(&amb, &config)?;
            obj.insert("mode".into(), json!("oracle"));
            obj.insert("ambient".into(), json!(amb.label()));
            obj.insert("exact_or_bound".into(), json!(res.value));
            obj.insert("exact".into(), json!(true));
            obj.insert("witness".into(), format_family(&amb, &res.family));
            obj.insert("nodes".into(), json!(res.nodes));
            match (&amb, config_name) {
                (Ambient::Grid(grid), "unionfree") if grid.d() == 2 => {
                    let cap = corner_deletion_bound(grid)?;
                    obj.insert("deletion_bound".into(), json!(cap));
                    res.value <= cap
                }
                _ => true,
            }
        }
        ModeArg::Bound => {
            let n = need_n(g)?;
            if n > 1000 {
                return Err(Failure::Usage("bound mode supports n <= 1000".into()));
            }
            let (d0, c0, a0) = constants.unwrap_or((0, f64::NAN, f64::NAN));
            let d = g.d.unwrap_or(d0);
            let c = c_arg.unwrap_or(c0);
            let alpha = alpha_arg.unwrap_or(a0);
            if d == 0 || c.is_nan() || alpha.is_nan() {
                return Err(Failure::Usage(
                    "poset configurations need --d, --c and --alpha".into(),
                ));
            }
            let bound = theorem32_bound(n, d, c, alpha)?;
            let ln_m: f64 = (0..n / 2)
                .map(|i| ((n - i) as f64 / (i + 1) as f64).ln())
                .sum();
            obj.insert("mode".into(), json!("bound"));
            obj.insert("ambient".into(), json!(format!("2^[{n}]")));
            obj.insert("exact_or_bound".into(), json!(bound));
            obj.insert("exact".into(), json!(false));
            obj.insert("d".into(), json!(d));
            obj.insert("c".into(), json!(c));
            obj.insert("alpha".into(), json!(alpha));
            obj.insert(
                "over_middle_binomial".into(),
                json!((bound.ln() - ln_m).exp()),
            );
            if config_name == "boolean2" {
                obj.insert("refined_bound".into(), json!(refined_boolean_bound(n)?));
            }
            true
        }
        ModeArg::Partition => {
            let n = need_n(g)?;
            let d = g.d.unwrap_or(constants.map_or(1, |c| c.0));
            let method = method_of(g, MethodArg::Symmetric);
            let gp = grid_partition(n, d, method, g.seed)?;
            let report = verify_grid_partition(&gp);
            let agg = aggregate_bound(&gp, &config)?;
            obj.insert("mode".into(), json!("partition"));
            obj.insert("ambient".into(), json!(format!("2^[{n}]")));
            obj.insert("method".into(), json!(method.name()));
            obj.insert("exact_or_bound".into(), json!(agg.total));
            obj.insert("exact".into(), json!(false));
            obj.insert("cell_shapes".into(), json!(agg.shapes));
            obj.insert("partition".into(), json!(report));
            report.passed
        }
    };
    Ok((rec, passed))
}

fn containers(g: &Global, samples: usize) -> Outcome {
    let n = g.n.unwrap_or(12);
    let st = container_stats(n, g.seed, samples)?;
    let passed = st.all_contained && st.all_monotone && st.within_twice_budget;
    let mut rec = serde_json::to_value(&st).expect("stats serialize");
    rec.as_object_mut()
        .expect("object")
        .insert("command".into(), json!("containers"));
    Ok((rec, passed))
}

fn numerics(check: &str) -> Outcome {
    let (mut rec, passed) = if check == "appendix" {
        let r = appendix_table_check()?;
        let passed = r.passed;
        (serde_json::to_value(&r).expect("report serializes"), passed)
    } else if let Some(part) = check.strip_prefix("claim22:") {
        let part: u32 = part
            .parse()
            .map_err(|_| Failure::Usage(format!("bad part {part:?}, expected 1..6")))?;
        let r = binomial_estimate_check(part, &default_grid(part))?;
        let passed = r.passed;
        (serde_json::to_value(&r).expect("report serializes"), passed)
    } else {
        return Err(Failure::Usage(format!(
            "unknown check {check:?}; expected claim22:<part> or appendix"
        )));
    };
    let obj = rec.as_object_mut().expect("object");
    obj.insert("command".into(), json!("numerics"));
    obj.insert("check".into(), json!(check));
    Ok((rec, passed))
}
