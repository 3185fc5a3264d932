//! Subcommand dispatch and reports.
//!
//! Every subcommand produces a [`Report`]. The human form ends with the elapsed time; the
//! `--json` form leaves timing out so that equal inputs give byte-identical output.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use sinvaut_core::construct::{
    build_model, check_submodel_h, extend_stage, recover_order, t2_richness_with, BuildParams,
    ClauseSchedule, HWeight, OrderVerdict, PaEntry, StagedModel, T2Options, Task, TheoryStructure,
};
use sinvaut_core::galois::{
    aut, check_homogeneous, encode_single, galois_atoms, galois_closure_with_cap, gamma,
    generate_group, invariant_image_op, is_galois_closed, ka_atoms_with, ka_closure_with, loc_o,
    reduce_generators, sinv_with_cap, ssup, GaloisVerdict, HomogeneityVerdict, KaOptions,
    PermGroup, RelationSet, DEFAULT_CAP,
};
use sinvaut_core::logic::{
    clause_count, clauses, eval_logical_op, parse_formula, qe_exists_clause, Clause, Formula,
    Signature,
};
use sinvaut_core::{BaseSet, PartialMap, Perm, Relation, Structure};

use crate::format::{
    is_staged, read_json, relation_to_json, staged_from_json, staged_to_json, structure_from_json,
    structure_to_json, theory_from_json, weights_from_json, weights_to_json, write_json,
    FormatError,
};

/// Relations with more bits than this draw a warning.
const LARGE_RELATION_BITS: usize = 1 << 24;

#[derive(Debug, Parser)]
#[command(
    name = "sinvaut",
    version,
    about = "Invariant relations, automorphism groups and staged models"
)]
struct Cli {
    /// Print the machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Most relations materialized per arity by closure operators.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Schedule {
    Complete,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Automorphism group of a structure.
    Aut { file: PathBuf },
    /// Strongly invariant relations of the group generated by `--gen`.
    Sinv {
        #[arg(long)]
        base: usize,
        /// A permutation as its image list, e.g. `1,2,0`; repeatable.
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        /// Write the materialized relations as a structure.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least relation of the structure containing a tuple.
    Gamma {
        file: PathBuf,
        #[arg(long)]
        tuple: String,
    },
    /// Closure under logical operations.
    KaClosure {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        #[arg(long)]
        work_arity: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `sInv Aut` closure.
    GaloisClosure {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is the relation set fixed by `sInv Aut`?
    IsGaloisClosed {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        /// Close under logical operations first.
        #[arg(long)]
        close: bool,
    },
    /// Does every partial automorphism with at most `k` points extend?
    Homog {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Strong superposition of a tuple under membership constraints.
    Ssup {
        file: PathBuf,
        #[arg(long)]
        a: String,
        /// `NAME=TUPLE`: the image of TUPLE must lie in relation NAME; repeatable.
        #[arg(long = "bind")]
        binds: Vec<String>,
    },
    /// Encode the relations of one arity as a single relation of twice the arity.
    EncodeSingle {
        file: PathBuf,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One encoded relation per arity.
    ReduceGenerators {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local closure of a permutation set.
    LocO {
        #[arg(long)]
        base: usize,
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[arg(long)]
        max_arity: Option<usize>,
    },
    /// The invariant operation defined by targets and sigma, applied to inputs.
    InvariantOp {
        file: PathBuf,
        /// Comma-separated relation names.
        #[arg(long)]
        targets: String,
        #[arg(long)]
        sigma: String,
        /// Comma-separated relation names.
        #[arg(long)]
        inputs: String,
    },
    /// Relation defined by a formula in free variables `x1..xm`.
    EvalFormula {
        file: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        arity: usize,
    },
    /// Quantifier-free equivalent of `(E x0) K`.
    QeClause {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        clause: String,
    },
    /// Clauses in `x0..xn`.
    EnumerateClauses {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        no_empty: bool,
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
    /// Irreflexivity check.
    CheckT1 { file: PathBuf },
    /// Are all clauses in `x0..xn` witnessed?
    T2Richness {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        param_bound: Option<usize>,
        #[arg(long, default_value_t = 20)]
        max_report: usize,
    },
    /// Weak submodel check; weights come from `--h` or from a staged MODEL.
    CheckSubH {
        sub: PathBuf,
        model: PathBuf,
        #[arg(long)]
        h: Option<PathBuf>,
    },
    /// One extension step.
    ExtendStage {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Partial automorphism as `a:b` pairs, e.g. `0:1,1:2`.
        #[arg(long)]
        pi: Option<String>,
        /// `PARAMS:CLAUSE`, e.g. `1:r2(x0,x1) & !r1(x0)`; repeatable.
        #[arg(long = "task")]
        tasks: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Staged model construction.
    BuildModel {
        #[arg(long)]
        stages: usize,
        #[arg(long)]
        richness: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        initial_size: usize,
        #[arg(long, value_enum, default_value_t = Schedule::Complete)]
        schedule: Schedule,
        #[arg(long)]
        element_cap: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Relative order of two elements read off the relations.
    RecoverOrder {
        file: PathBuf,
        #[arg(long)]
        x: Option<usize>,
        #[arg(long)]
        y: Option<usize>,
    },
    /// Seeded trials comparing the two closures.
    CheckFiniteTheorem {
        #[arg(long)]
        base: usize,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Most generators per trial.
        #[arg(long, default_value_t = 3)]
        relations: usize,
    },
    /// A linear order, a full bipartite graph and a seeded random graph.
    Fixtures {
        #[arg(long, default_value_t = 4)]
        base: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Edge probability of the random graph.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] sinvaut_core::Error),
}

type Result<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Vec<String>,
    pub result: Value,
    pub ok: bool,
    pub witness: Option<Value>,
    human: Vec<String>,
    warnings: Vec<String>,
}

impl Report {
    fn ok(result: Value) -> Self {
        Report {
            command: Vec::new(),
            result,
            ok: true,
            witness: None,
            human: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn verdict(ok: bool, result: Value, witness: Option<Value>) -> Self {
        Report {
            ok,
            witness,
            ..Report::ok(result)
        }
    }

    fn line(mut self, text: impl Into<String>) -> Self {
        self.human.push(text.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("verdict".into(), json!(if self.ok { "ok" } else { "fail" }));
        obj.insert(
            "witness".into(),
            self.witness.clone().unwrap_or(Value::Null),
        );
        obj.insert("result".into(), self.result.clone());
        Value::Object(obj)
    }

    fn to_human(&self, millis: f64) -> String {
        let mut out = format!("command: sinvaut {}\n", self.command.join(" "));
        for l in &self.human {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(if self.ok {
            "verdict: ok\n"
        } else {
            "verdict: fail\n"
        });
        if let Some(w) = &self.witness {
            out.push_str(&format!("witness: {w}\n"));
        }
        out.push_str(&format!("time: {millis:.1} ms\n"));
        out
    }
}

/// What a run printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let start = Instant::now();
    match dispatch(&cli) {
        Ok(mut report) => {
            report.command = args
                .iter()
                .skip(1)
                .map(|a| a.to_string_lossy().into_owned())
                .collect();
            let stdout = if cli.json {
                let mut text = serde_json::to_string_pretty(&report.to_json()).expect("plain data");
                text.push('\n');
                text
            } else {
                report.to_human(start.elapsed().as_secs_f64() * 1e3)
            };
            let stderr = report
                .warnings
                .iter()
                .map(|w| format!("warning: {w}\n"))
                .collect();
            Outcome {
                code: if report.ok { 0 } else { 1 },
                stdout,
                stderr,
            }
        }
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let cap = cli.cap;
    match &cli.command {
        Command::Aut { file } => cmd_aut(file),
        Command::Sinv {
            base,
            gens,
            max_arity,
            out,
        } => cmd_sinv(*base, gens, *max_arity, out.as_deref(), cap),
        Command::Gamma { file, tuple } => cmd_gamma(file, tuple),
        Command::KaClosure {
            file,
            max_arity,
            work_arity,
            out,
        } => cmd_ka_closure(file, *max_arity, *work_arity, out.as_deref(), cap),
        Command::GaloisClosure {
            file,
            max_arity,
            out,
        } => cmd_galois_closure(file, *max_arity, out.as_deref(), cap),
        Command::IsGaloisClosed {
            file,
            max_arity,
            close,
        } => cmd_is_galois_closed(file, *max_arity, *close, cap),
        Command::Homog { file, k } => cmd_homog(file, *k),
        Command::Ssup { file, a, binds } => cmd_ssup(file, a, binds),
        Command::EncodeSingle { file, arity, out } => {
            cmd_encode_single(file, *arity, out.as_deref())
        }
        Command::ReduceGenerators {
            file,
            max_arity,
            out,
        } => cmd_reduce_generators(file, *max_arity, out.as_deref()),
        Command::LocO {
            base,
            gens,
            max_arity,
        } => cmd_loc_o(*base, gens, *max_arity),
        Command::InvariantOp {
            file,
            targets,
            sigma,
            inputs,
        } => cmd_invariant_op(file, targets, sigma, inputs),
        Command::EvalFormula {
            file,
            formula,
            arity,
        } => cmd_eval_formula(file, formula, *arity),
        Command::QeClause { n, clause } => cmd_qe_clause(*n, clause),
        Command::EnumerateClauses { n, no_empty, limit } => {
            cmd_enumerate_clauses(*n, *no_empty, *limit)
        }
        Command::CheckT1 { file } => cmd_check_t1(file),
        Command::T2Richness {
            file,
            n,
            param_bound,
            max_report,
        } => cmd_t2_richness(file, *n, *param_bound, *max_report),
        Command::CheckSubH { sub, model, h } => cmd_check_sub_h(sub, model, h.as_deref()),
        Command::ExtendStage {
            file,
            s,
            pi,
            tasks,
            out,
        } => cmd_extend_stage(file, *s, pi.as_deref(), tasks, out),
        Command::BuildModel {
            stages,
            richness,
            s,
            seed,
            initial_size,
            schedule,
            element_cap,
            out,
        } => {
            let mut params = BuildParams::new(*stages, *richness, *s, *seed);
            params.initial_size = *initial_size;
            params.schedule = match schedule {
                Schedule::Complete => ClauseSchedule::Complete,
                Schedule::All => ClauseSchedule::All,
            };
            if let Some(c) = element_cap {
                params.element_cap = *c;
            }
            cmd_build_model(&params, out)
        }
        Command::RecoverOrder { file, x, y } => cmd_recover_order(file, *x, *y),
        Command::CheckFiniteTheorem {
            base,
            max_arity,
            trials,
            seed,
            relations,
        } => cmd_check_finite_theorem(*base, *max_arity, *trials, *seed, *relations, cap),
        Command::Fixtures {
            base,
            seed,
            p,
            out_dir,
        } => cmd_fixtures(*base, *seed, *p, out_dir.as_deref()),
    }
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    let text = text
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']']);
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .or_else(|_| usage(format!("`{p}` is not a natural number")))
        })
        .collect()
}

fn parse_perm(text: &str) -> Result<Perm> {
    Ok(Perm::new(parse_list(text)?)?)
}

fn parse_perms(base: usize, gens: &[String]) -> Result<Vec<Perm>> {
    let perms = gens
        .iter()
        .map(|g| parse_perm(g))
        .collect::<Result<Vec<_>>>()?;
    if let Some(p) = perms.iter().find(|p| p.degree() != base) {
        return usage(format!(
            "permutation {:?} does not act on {base} points",
            p.images()
        ));
    }
    Ok(perms)
}

fn parse_pairs(text: &str) -> Result<PartialMap> {
    let mut pairs = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((a, b)) = part.split_once(':') else {
            return usage(format!("`{part}` is not an `a:b` pair"));
        };
        let a: usize = a
            .trim()
            .parse()
            .or_else(|_| usage(format!("`{a}` is not a natural number")))?;
        let b: usize = b
            .trim()
            .parse()
            .or_else(|_| usage(format!("`{b}` is not a natural number")))?;
        pairs.push((a, b));
    }
    Ok(PartialMap::from_pairs(pairs)?)
}

fn parse_clause(n: usize, text: &str) -> Result<Clause> {
    let phi = parse_formula(text, &Signature::theory(n + 1))?;
    Ok(Clause::from_formula(n, &phi)?)
}

fn show_clause(k: &Clause) -> String {
    show_formula(&k.to_formula(), k.n())
}

fn show_formula(phi: &Formula, n: usize) -> String {
    phi.display(&Signature::theory(n + 1)).to_string()
}

fn load_structure(path: &Path) -> Result<Structure> {
    Ok(structure_from_json(&read_json(path)?)?)
}

fn load_set(path: &Path) -> Result<(Structure, RelationSet)> {
    let s = load_structure(path)?;
    let set = RelationSet::from_relations(s.base(), s.relations())?;
    Ok((s, set))
}

fn load_theory(path: &Path) -> Result<TheoryStructure> {
    Ok(theory_from_json(&read_json(path)?)?)
}

fn named<'a>(s: &'a Structure, name: &str) -> Result<&'a Relation> {
    match s.get(name.trim()) {
        Some(r) => Ok(r),
        None => usage(format!("no relation named `{}`", name.trim())),
    }
}

fn tuples(r: &Relation) -> Value {
    json!(r.tuples().collect::<Vec<_>>())
}

fn perm_json(p: &Perm) -> Value {
    json!(p.images())
}

fn pairs_json(p: &PartialMap) -> Value {
    json!(p.pairs().map(|(a, b)| [a, b]).collect::<Vec<_>>())
}

fn count_json(atoms: usize) -> Value {
    match 1u64.checked_shl(atoms as u32).filter(|_| atoms < 64) {
        Some(c) => json!(c),
        None => json!(format!("2^{atoms}")),
    }
}

fn set_to_structure(set: &RelationSet, prefix: &str) -> Result<Structure> {
    let mut s = Structure::new(set.base());
    for m in set.arities() {
        for (i, r) in set.at(m).enumerate() {
            s.push(format!("{prefix}{m}_{i}"), r.clone())?;
        }
    }
    Ok(s)
}

fn write_structure(path: Option<&Path>, s: &Structure) -> Result<()> {
    if let Some(p) = path {
        write_json(p, &structure_to_json(s))?;
    }
    Ok(())
}

fn large_warnings(base: BaseSet, arities: impl IntoIterator<Item = usize>) -> Vec<String> {
    arities
        .into_iter()
        .filter_map(|m| {
            let bits = base.tuple_count(m).unwrap_or(usize::MAX);
            (bits > LARGE_RELATION_BITS)
                .then(|| format!("relations of arity {m} hold {bits} bits each"))
        })
        .collect()
}

fn group_json(g: &PermGroup) -> Value {
    json!({
        "order": g.order(),
        "generators": g.generators().iter().map(perm_json).collect::<Vec<_>>(),
    })
}

fn order_text(g: &PermGroup) -> String {
    g.order()
        .map_or_else(|| "unknown".to_string(), |o| o.to_string())
}

fn cmd_aut(file: &Path) -> Result<Report> {
    let (s, set) = load_set(file)?;
    let g = aut(&set);
    let mut report = Report::ok(group_json(&g)).line(format!("group order: {}", order_text(&g)));
    report.warnings = large_warnings(s.base(), set.arities());
    for p in g.generators() {
        report = report.line(format!("generator: {:?}", p.images()));
    }
    Ok(report)
}

fn cmd_sinv(
    base: usize,
    gens: &[String],
    max_arity: usize,
    out: Option<&Path>,
    cap: usize,
) -> Result<Report> {
    let b = BaseSet::new(base)?;
    let g = generate_group(b, &parse_perms(base, gens)?)?;
    let sv = sinv_with_cap(&g, max_arity, cap)?;
    let mut arities = Map::new();
    let mut report = Report::ok(Value::Null).line(format!("group order: {}", order_text(&g)));
    for m in 1..=max_arity {
        let orbits = sv.orbits(m);
        arities.insert(
            m.to_string(),
            json!({
                "orbits": orbits.iter().map(tuples).collect::<Vec<_>>(),
                "relations": count_json(orbits.len()),
            }),
        );
        report = report.line(format!(
            "arity {m}: {} orbits, {} relations",
            orbits.len(),
            count_json(orbits.len())
        ));
    }
    if out.is_some() {
        write_structure(out, &set_to_structure(&sv.to_relation_set()?, "s")?)?;
    }
    report.result = json!({"group": group_json(&g), "arities": arities});
    Ok(report)
}

fn cmd_gamma(file: &Path, tuple: &str) -> Result<Report> {
    let (_, set) = load_set(file)?;
    let t = parse_list(tuple)?;
    let r = gamma(&set, &t)?;
    Ok(Report::ok(json!({"tuple": t, "gamma": tuples(&r)}))
        .line(format!("gamma{t:?}: {}", tuples(&r))))
}

fn atoms_report(atoms: &std::collections::BTreeMap<usize, Vec<Relation>>) -> Report {
    let mut arities = Map::new();
    let mut report = Report::ok(Value::Null);
    for (m, a) in atoms {
        arities.insert(
            m.to_string(),
            json!({"atoms": a.iter().map(tuples).collect::<Vec<_>>(), "relations": count_json(a.len())}),
        );
        report = report.line(format!(
            "arity {m}: {} atoms, {} relations",
            a.len(),
            count_json(a.len())
        ));
    }
    report.result = json!({ "arities": arities });
    report
}

fn cmd_ka_closure(
    file: &Path,
    max_arity: usize,
    work_arity: Option<usize>,
    out: Option<&Path>,
    cap: usize,
) -> Result<Report> {
    let (s, set) = load_set(file)?;
    let opts = KaOptions {
        cap,
        work_arity,
        ..KaOptions::default()
    };
    let mut report = atoms_report(&ka_atoms_with(&set, max_arity, opts)?);
    if out.is_some() {
        write_structure(
            out,
            &set_to_structure(&ka_closure_with(&set, max_arity, opts)?, "k")?,
        )?;
    }
    report.warnings = large_warnings(s.base(), 1..=max_arity);
    Ok(report)
}

fn cmd_galois_closure(
    file: &Path,
    max_arity: usize,
    out: Option<&Path>,
    cap: usize,
) -> Result<Report> {
    let (s, set) = load_set(file)?;
    let mut report = atoms_report(&galois_atoms(&set, max_arity)?);
    if out.is_some() {
        write_structure(
            out,
            &set_to_structure(&galois_closure_with_cap(&set, max_arity, cap)?, "g")?,
        )?;
    }
    report.warnings = large_warnings(s.base(), 1..=max_arity);
    Ok(report)
}

fn cmd_is_galois_closed(file: &Path, max_arity: usize, close: bool, cap: usize) -> Result<Report> {
    let (_, mut set) = load_set(file)?;
    if close {
        set = ka_closure_with(
            &set,
            max_arity,
            KaOptions {
                cap,
                ..KaOptions::default()
            },
        )?;
    }
    Ok(match is_galois_closed(&set, max_arity)? {
        GaloisVerdict::Closed => Report::ok(json!({"closed": true})).line("Galois closed"),
        GaloisVerdict::NotClosed { a, b } => Report::verdict(
            false,
            json!({"closed": false}),
            Some(json!({"a": a, "b": b})),
        )
        .line(format!(
            "{a:?} and {b:?} are inseparable but lie in different orbits"
        )),
    })
}

fn cmd_homog(file: &Path, k: Option<usize>) -> Result<Report> {
    let s = load_structure(file)?;
    let k = k.unwrap_or(s.base().size());
    Ok(match check_homogeneous(&s, k) {
        HomogeneityVerdict::Homogeneous => {
            Report::ok(json!({"homogeneous": true, "k": k})).line("homogeneous")
        }
        HomogeneityVerdict::NotExtendable(map) => {
            let shown = map
                .pairs()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect::<Vec<_>>()
                .join(", ");
            Report::verdict(
                false,
                json!({"homogeneous": false, "k": k}),
                Some(pairs_json(&map)),
            )
            .line(format!("partial automorphism {{{shown}}} does not extend"))
        }
    })
}

fn cmd_ssup(file: &Path, a: &str, binds: &[String]) -> Result<Report> {
    let s = load_structure(file)?;
    let a = parse_list(a)?;
    let mut constraints = Vec::new();
    for bind in binds {
        let Some((name, tuple)) = bind.split_once('=') else {
            return usage(format!("`{bind}` is not NAME=TUPLE"));
        };
        constraints.push((parse_list(tuple)?, named(&s, name)?.clone()));
    }
    let r = ssup(&a, &constraints, s.base())?;
    Ok(
        Report::ok(json!({"arity": r.arity(), "tuples": tuples(&r)})).line(format!(
            "{} tuples: {}",
            r.len(),
            tuples(&r)
        )),
    )
}

fn cmd_encode_single(file: &Path, arity: usize, out: Option<&Path>) -> Result<Report> {
    let s = load_structure(file)?;
    let q: Vec<Relation> = s
        .relations()
        .iter()
        .filter(|r| r.arity() == arity)
        .cloned()
        .collect();
    let r = encode_single(&q, s.base(), arity)?;
    write_structure(out, &Structure::new(s.base()).with("rho", r.clone())?)?;
    Ok(
        Report::ok(json!({"relation": relation_to_json(&r)})).line(format!(
            "arity {}, {} tuples",
            r.arity(),
            r.len()
        )),
    )
}

fn cmd_reduce_generators(file: &Path, max_arity: usize, out: Option<&Path>) -> Result<Report> {
    let (_, set) = load_set(file)?;
    let reduced = set_to_structure(&reduce_generators(&set, max_arity)?, "q")?;
    write_structure(out, &reduced)?;
    let mut report = Report::ok(structure_to_json(&reduced));
    for (name, r) in reduced.names().iter().zip(reduced.relations()) {
        report = report.line(format!("{name}: arity {}, {} tuples", r.arity(), r.len()));
    }
    Ok(report)
}

fn cmd_loc_o(base: usize, gens: &[String], max_arity: Option<usize>) -> Result<Report> {
    let b = BaseSet::new(base)?;
    let mut input = parse_perms(base, gens)?;
    let mut closure = loc_o(&input, b, max_arity.unwrap_or(base))?;
    input.sort();
    input.dedup();
    closure.sort();
    let equal = closure == input;
    Ok(Report::ok(json!({
        "elements": closure.iter().map(perm_json).collect::<Vec<_>>(),
        "equals_input": equal,
    }))
    .line(format!(
        "{} permutations, equal to the input: {equal}",
        closure.len()
    )))
}

fn cmd_invariant_op(file: &Path, targets: &str, sigma: &str, inputs: &str) -> Result<Report> {
    let s = load_structure(file)?;
    let pick = |names: &str| -> Result<Vec<Relation>> {
        names
            .split(',')
            .filter(|n| !n.trim().is_empty())
            .map(|n| named(&s, n).cloned())
            .collect()
    };
    let r = invariant_image_op(&pick(targets)?, named(&s, sigma)?, &pick(inputs)?)?;
    Ok(
        Report::ok(json!({"arity": r.arity(), "tuples": tuples(&r)})).line(format!(
            "{} tuples: {}",
            r.len(),
            tuples(&r)
        )),
    )
}

fn cmd_eval_formula(file: &Path, formula: &str, arity: usize) -> Result<Report> {
    let s = load_structure(file)?;
    let phi = parse_formula(formula, &Signature::of_structure(&s))?;
    let r = eval_logical_op(&phi, s.relations(), s.base(), arity)?;
    Ok(
        Report::ok(json!({"arity": r.arity(), "tuples": tuples(&r)})).line(format!(
            "{} tuples: {}",
            r.len(),
            tuples(&r)
        )),
    )
}

fn cmd_qe_clause(n: usize, text: &str) -> Result<Report> {
    let k = parse_clause(n, text)?;
    let qe = show_formula(&qe_exists_clause(&k), n);
    Ok(Report::ok(json!({"clause": show_clause(&k), "qe": qe}))
        .line(format!("(E x0) {}", show_clause(&k)))
        .line(format!("<-> {qe}")))
}

fn cmd_enumerate_clauses(n: usize, no_empty: bool, limit: usize) -> Result<Report> {
    let total = clause_count(n).map(|c| c - u128::from(no_empty));
    let listed: Vec<String> = clauses(n)
        .filter(|k| !(no_empty && k.is_empty()))
        .take(limit)
        .map(|k| show_clause(&k))
        .collect();
    let count = match total.and_then(|c| u64::try_from(c).ok()) {
        Some(c) => json!(c),
        None => json!(total.map_or_else(|| "overflow".to_string(), |c| c.to_string())),
    };
    let mut report =
        Report::ok(json!({"count": count, "clauses": listed})).line(format!("{count} clauses"));
    for k in &listed {
        report = report.line(k.clone());
    }
    Ok(report)
}

fn cmd_check_t1(file: &Path) -> Result<Report> {
    let t = load_theory(file)?;
    Ok(match t.t1_violation() {
        None => Report::ok(json!({"size": t.size()})).line("T1 holds"),
        Some(v) => Report::verdict(false, json!({"size": t.size()}), Some(json!(v)))
            .line(format!("tuple {v:?} has a repeated entry but holds")),
    })
}

fn cmd_t2_richness(
    file: &Path,
    n: usize,
    param_bound: Option<usize>,
    max_report: usize,
) -> Result<Report> {
    let t = load_theory(file)?;
    let r = t2_richness_with(
        &t,
        n,
        T2Options {
            param_bound,
            max_report,
        },
    )?;
    let unmet: Vec<Value> = r
        .unmet
        .iter()
        .map(|u| json!({"params": u.params, "clause": show_clause(&u.clause)}))
        .collect();
    let result = json!({"checked": r.checked.to_string(), "unmet_count": r.unmet_count.to_string(), "unmet": unmet});
    let line = format!(
        "{} clause instances checked, {} unmet",
        r.checked, r.unmet_count
    );
    Ok(Report::verdict(r.is_rich(), result, unmet.first().cloned()).line(line))
}

fn cmd_check_sub_h(sub: &Path, model: &Path, h: Option<&Path>) -> Result<Report> {
    let n = load_theory(sub)?;
    let m_doc = read_json(model)?;
    let m = theory_from_json(&m_doc)?;
    let weights_doc = match h {
        Some(p) => read_json(p)?,
        None if is_staged(&m_doc) => m_doc.clone(),
        None => return usage("no weights: pass --h or a staged model"),
    };
    let weights = if is_staged(&weights_doc) {
        staged_from_json(&weights_doc)?
            .h()
            .restrict(n.size()..m.size())
    } else {
        weights_from_json(&weights_doc)?
    };
    let result = json!({"sub_size": n.size(), "size": m.size()});
    Ok(match check_submodel_h(&n, &m, &weights)? {
        None => Report::ok(result).line("weak submodel"),
        Some(t) => Report::verdict(false, result, Some(json!(t))).line(format!("fails at {t:?}")),
    })
}

fn parse_task(text: &str) -> Result<Task> {
    let Some((params, clause)) = text.split_once(':') else {
        return usage(format!("`{text}` is not PARAMS:CLAUSE"));
    };
    let params = parse_list(params)?;
    let k = parse_clause(params.len(), clause)?;
    Ok(Task::new(params, k)?)
}

fn cmd_extend_stage(
    file: &Path,
    s: usize,
    pi: Option<&str>,
    tasks: &[String],
    out: &Path,
) -> Result<Report> {
    let doc = read_json(file)?;
    let prior = if is_staged(&doc) {
        Some(staged_from_json(&doc)?)
    } else {
        None
    };
    let m = theory_from_json(&doc)?;
    let pi = match (pi, &prior) {
        (Some(text), _) => parse_pairs(text)?,
        (None, Some(sm)) => sm.pi().clone(),
        (None, None) => PartialMap::new(),
    };
    let tasks = tasks
        .iter()
        .map(|t| parse_task(t))
        .collect::<Result<Vec<_>>>()?;
    let ext = extend_stage(&m, &pi, s, &tasks)?;
    let (mut stages, mut h, mut log, seed, richness) = match &prior {
        Some(sm) => (
            sm.stage_sizes().to_vec(),
            sm.h().clone(),
            sm.pa_log().to_vec(),
            sm.seed(),
            sm.richness(),
        ),
        None => (vec![m.size()], HWeight::new(), Vec::new(), 0, 0),
    };
    log.push(PaEntry {
        stage: stages.len() - 1,
        s,
        map: pi,
    });
    stages.push(ext.model.size());
    h.extend(&ext.h);
    let staged =
        StagedModel::from_parts(ext.model, stages, h, ext.pi.clone(), log, seed, richness, s)?;
    write_json(out, &staged_to_json(&staged))?;
    let result = json!({
        "size": staged.model().size(),
        "witnesses": ext.witnesses,
        "h": weights_to_json(&ext.h),
        "pi": pairs_json(&ext.pi),
    });
    Ok(Report::ok(result)
        .line(format!(
            "{} -> {} elements",
            m.size(),
            staged.model().size()
        ))
        .line(format!("witnesses: {:?}", ext.witnesses)))
}

fn cmd_build_model(params: &BuildParams, out: &Path) -> Result<Report> {
    let sm = build_model(params)?;
    write_json(out, &staged_to_json(&sm))?;
    let verified = sm.verify();
    let result = json!({
        "stages": sm.stage_sizes(),
        "exceptions": sm.model().exception_count(),
        "pi_size": sm.pi().len(),
        "seed": sm.seed(),
    });
    let line = format!(
        "stage sizes {:?}, {} exceptional tuples",
        sm.stage_sizes(),
        sm.model().exception_count()
    );
    Ok(match verified {
        Ok(()) => Report::ok(result).line(line).line("all checks pass"),
        Err(e) => Report::verdict(false, result, Some(json!(e.to_string()))).line(line),
    })
}

fn verdict_name(v: OrderVerdict) -> &'static str {
    match v {
        OrderVerdict::Less => "less",
        OrderVerdict::Greater => "greater",
        OrderVerdict::Undecidable => "undecidable",
    }
}

fn cmd_recover_order(file: &Path, x: Option<usize>, y: Option<usize>) -> Result<Report> {
    let sm = staged_from_json(&read_json(file)?)?;
    let agrees = |x: usize, y: usize, v: OrderVerdict| match v {
        OrderVerdict::Less => x < y,
        OrderVerdict::Greater => x > y,
        OrderVerdict::Undecidable => true,
    };
    match (x, y) {
        (Some(x), Some(y)) => {
            let v = recover_order(&sm, x, y)?;
            let ok = agrees(x, y, v);
            let result = json!({"x": x, "y": y, "verdict": verdict_name(v)});
            Ok(Report::verdict(ok, result, (!ok).then(|| json!([x, y])))
                .line(format!("{x} vs {y}: {}", verdict_name(v))))
        }
        (None, None) => {
            let n = sm.stage_size(0);
            let (mut decided, mut pairs, mut wrong) = (0usize, 0usize, Vec::new());
            for x in 0..n {
                for y in (0..n).filter(|&y| y != x) {
                    let v = recover_order(&sm, x, y)?;
                    pairs += 1;
                    if v != OrderVerdict::Undecidable {
                        decided += 1;
                    }
                    if !agrees(x, y, v) {
                        wrong.push([x, y]);
                    }
                }
            }
            let result = json!({"pairs": pairs, "decided": decided, "disagreements": wrong.len()});
            let line = format!(
                "first stage: {decided} of {pairs} ordered pairs decided, {} disagreements",
                wrong.len()
            );
            Ok(
                Report::verdict(wrong.is_empty(), result, wrong.first().map(|w| json!(w)))
                    .line(line),
            )
        }
        _ => usage("pass both --x and --y, or neither"),
    }
}

/// A random relation set on `base` points drawn from `rng`.
pub fn random_relations(
    rng: &mut ChaCha8Rng,
    base: BaseSet,
    max_arity: usize,
    max_count: usize,
) -> Vec<Relation> {
    let count = rng.gen_range(1..=max_count.max(1));
    (0..count)
        .map(|_| {
            let arity = rng.gen_range(1..=max_arity.max(1));
            Relation::from_fn(base, arity, |_| rng.gen_bool(0.5)).expect("small arity")
        })
        .collect()
}

fn cmd_check_finite_theorem(
    base: usize,
    max_arity: usize,
    trials: usize,
    seed: u64,
    relations: usize,
    cap: usize,
) -> Result<Report> {
    let b = BaseSet::new(base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = KaOptions {
        cap,
        ..KaOptions::default()
    };
    for trial in 0..trials {
        let q =
            RelationSet::from_relations(b, &random_relations(&mut rng, b, max_arity, relations))?;
        let ka = ka_closure_with(&q, max_arity, opts)?;
        let gal = galois_closure_with_cap(&q, max_arity, cap)?;
        if let Some(m) = (1..=max_arity).find(|&m| !ka.at(m).eq(gal.at(m))) {
            let witness = json!({"trial": trial, "arity": m, "ka": ka.count_at(m), "galois": gal.count_at(m)});
            return Ok(
                Report::verdict(false, json!({"trials": trial + 1}), Some(witness))
                    .line(format!("trial {trial}: closures differ at arity {m}")),
            );
        }
    }
    Ok(Report::ok(json!({"trials": trials})).line(format!("{trials} trials: both closures agree")))
}

/// The three example structures on `base` points, keyed by name.
pub fn fixtures(
    base: usize,
    seed: u64,
    p: f64,
) -> std::result::Result<Vec<(&'static str, Structure)>, sinvaut_core::Error> {
    let b = BaseSet::new(base)?;
    let half = base.div_ceil(2);
    let order = Relation::from_fn(b, 2, |t| t[0] < t[1])?;
    let bipartite = Relation::from_fn(b, 2, |t| (t[0] < half) != (t[1] < half))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for x in 0..base {
        for y in x + 1..base {
            if rng.gen_bool(p) {
                edges.push([x, y]);
                edges.push([y, x]);
            }
        }
    }
    let graph = Relation::from_tuples(b, 2, &edges)?;
    Ok(vec![
        ("order", Structure::new(b).with("lt", order)?),
        ("bipartite", Structure::new(b).with("e", bipartite)?),
        ("random_graph", Structure::new(b).with("e", graph)?),
    ])
}

fn fixture_holds(name: &str, s: &Structure) -> bool {
    let r = &s.relations()[0];
    let n = s.base().size();
    let all = || s.base().tuples(2);
    match name {
        "order" => {
            let irreflexive = (0..n).all(|x| !r.contains(&[x, x]));
            let total = all().all(|t| t[0] == t[1] || r.contains(&t) || r.contains(&[t[1], t[0]]));
            let transitive = s.base().tuples(3).all(|t| {
                !(r.contains(&t[..2]) && r.contains(&t[1..])) || r.contains(&[t[0], t[2]])
            });
            irreflexive && total && transitive
        }
        "bipartite" => {
            let half = n.div_ceil(2);
            all().all(|t| {
                r.contains(&t) == ((t[0] < half && t[1] >= half) || (t[0] >= half && t[1] < half))
            })
        }
        _ => all().all(|t| {
            r.contains(&t) == r.contains(&[t[1], t[0]]) && !(t[0] == t[1] && r.contains(&t))
        }),
    }
}

fn cmd_fixtures(base: usize, seed: u64, p: f64, out_dir: Option<&Path>) -> Result<Report> {
    if !(0.0..=1.0).contains(&p) {
        return usage(format!("edge probability {p} is outside [0, 1]"));
    }
    let mut result = Map::new();
    let mut report = Report::ok(Value::Null);
    let mut all_hold = true;
    for (name, s) in fixtures(base, seed, p)? {
        let doc = structure_to_json(&s);
        let back = structure_from_json(&doc)?;
        let holds = back == s && fixture_holds(name, &back);
        all_hold &= holds;
        if let Some(dir) = out_dir {
            std::fs::create_dir_all(dir).map_err(|source| FormatError::Io {
                path: dir.display().to_string(),
                source,
            })?;
            write_json(&dir.join(format!("{name}.json")), &doc)?;
        }
        report = report.line(format!(
            "{name}: {} edges, property holds: {holds}",
            s.relations()[0].len()
        ));
        result.insert(
            name.to_string(),
            json!({"structure": doc, "property_holds": holds}),
        );
    }
    report.ok = all_hold;
    report.result = Value::Object(result);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_and_pair_syntax() {
        assert_eq!(parse_list("0, 2,1").unwrap(), vec![0, 2, 1]);
        assert_eq!(parse_list("(1,2)").unwrap(), vec![1, 2]);
        assert!(parse_list("").unwrap().is_empty());
        assert!(parse_list("a").is_err());
        let pi = parse_pairs("0:1, 1:2").unwrap();
        assert_eq!(pi.get(1), Some(2));
        assert!(parse_pairs("0-1").is_err());
        assert!(parse_pairs("0:1,0:2").is_err());
    }

    #[test]
    fn task_syntax() {
        let t = parse_task("2:r2(x0,x1) & !r1(x0)").unwrap();
        assert_eq!(t.params, vec![2]);
        assert_eq!(t.clause.literals().len(), 2);
        assert!(parse_task(":true").unwrap().clause.is_empty());
        assert!(parse_task("1:r2(x1,x1)").is_err());
    }

    #[test]
    fn fixtures_satisfy_their_properties() {
        for n in 1..=5 {
            for (name, s) in fixtures(n, 3, 0.5).unwrap() {
                assert!(fixture_holds(name, &s), "{name} on {n}");
            }
        }
        let (_, g) = &fixtures(4, 3, 0.5).unwrap()[2];
        let flipped = Structure::new(g.base())
            .with(
                "lt",
                Relation::from_fn(g.base(), 2, |t| t[0] > t[1]).unwrap(),
            )
            .unwrap();
        assert!(fixture_holds("order", &flipped));
        assert!(!fixture_holds("bipartite", &flipped));
    }

    #[test]
    fn large_relations_warn() {
        let b = BaseSet::new(20).unwrap();
        assert!(large_warnings(b, [5]).is_empty());
        assert_eq!(large_warnings(b, [6]).len(), 1);
    }
}
