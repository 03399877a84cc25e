//! Task execution and report assembly.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::cache::Cache;
use super::expr::parse_scalar;
use super::job::{JobSpec, Task};
use crate::braided::{word_name, BraidedSpace};
use crate::enveloping::{self, BracketTable};
use crate::error::{Error, Result};
use crate::linalg::SVec;
use crate::{pareigis, par, tensor, tower};

pub const TOOL: &str = "braidwork";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub cache: Option<Cache>,
    /// Adds wall-clock times, which makes reports non-reproducible.
    pub timing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskError {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    #[serde(flatten)]
    pub task: Task,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<TaskError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub input_hash: String,
    pub job: Value,
    pub warnings: Vec<String>,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn has_internal_error(&self) -> bool {
        self.tasks.iter().any(|t| t.error.as_ref().is_some_and(|e| e.kind == "internal"))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn basis_json(d: usize, n: usize, v: &SVec) -> Value {
    Value::Array(v.iter().map(|(w, s)| json!([word_name(d, n, *w as usize), s.to_string()])).collect())
}

/// Runs every task of the job. Errors building the space or the bracket are
/// input errors and abort the run; task errors are recorded per task.
pub fn run(job: &JobSpec, input: &str, opts: &RunOptions) -> Result<Report> {
    let space = job.build_space()?;
    let bracket = job.build_bracket(&space)?;
    let echo = json!({
        "field_order": job.field_order,
        "space": { "kind": space.kind().tag(), "dim": space.dim(), "budget": space.budget(), "params": job.space.params },
        "bracket": job.bracket,
        "tasks": job.tasks,
    });
    let ctx = Ctx { job, space: &space, bracket: bracket.as_ref() };
    let run_one = |t: &Task| -> (TaskReport, Vec<String>) {
        let start = Instant::now();
        let key = opts.cache.as_ref().map(|_| cache_key(&echo, t));
        let cached = match (&opts.cache, &key) {
            (Some(c), Some(k)) => c.get(k),
            _ => None,
        };
        let out = match cached {
            Some(v) => Ok((v, Vec::new())),
            None => {
                let r = ctx.execute(t);
                if let (Ok((v, _)), Some(c), Some(k)) = (&r, &opts.cache, &key) {
                    c.put(k, v);
                }
                r
            }
        };
        let elapsed_ms = opts.timing.then(|| start.elapsed().as_millis() as u64);
        match out {
            Ok((v, w)) => (TaskReport { task: t.clone(), status: "ok", result: Some(v), error: None, elapsed_ms }, w),
            Err(e) => (
                TaskReport {
                    task: t.clone(),
                    status: "error",
                    result: None,
                    error: Some(TaskError { kind: e.kind().into(), message: e.to_string() }),
                    elapsed_ms,
                },
                Vec::new(),
            ),
        }
    };
    let outcomes: Vec<(TaskReport, Vec<String>)> = if par::jobs() > 1 && job.tasks.len() > 1 {
        run_parallel(&job.tasks, &run_one)
    } else {
        job.tasks.iter().map(run_one).collect()
    };
    let mut warnings: Vec<String> = Vec::new();
    let mut tasks = Vec::new();
    for (t, w) in outcomes {
        for x in w {
            if !warnings.contains(&x) {
                warnings.push(x);
            }
        }
        tasks.push(t);
    }
    Ok(Report { tool: TOOL, version: VERSION, input_hash: sha256_hex(input.as_bytes()), job: echo, warnings, tasks })
}

/// Independent tasks on up to `par::jobs()` threads, results in input order.
fn run_parallel<T: Send>(tasks: &[Task], f: &(dyn Fn(&Task) -> T + Sync)) -> Vec<T> {
    let k = par::jobs().min(tasks.len());
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<T>> = (0..tasks.len()).map(|_| None).collect();
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|s| {
        for _ in 0..k {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let r = f(&tasks[i]);
                results.lock().expect("result lock")[i] = Some(r);
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every task ran")).collect()
}

fn cache_key(echo: &Value, t: &Task) -> String {
    let body = json!({ "version": VERSION, "job": { "field_order": echo["field_order"], "space": echo["space"], "bracket": echo["bracket"] }, "task": t });
    sha256_hex(body.to_string().as_bytes())
}

struct Ctx<'a> {
    job: &'a JobSpec,
    space: &'a BraidedSpace,
    bracket: Option<&'a BracketTable>,
}

impl Ctx<'_> {
    fn bracket(&self) -> Result<&BracketTable> {
        self.bracket.ok_or_else(|| Error::ValidationError("this task needs a [bracket] section".into()))
    }

    fn execute(&self, t: &Task) -> Result<(Value, Vec<String>)> {
        let s = self.space;
        let d = s.dim();
        let mut warnings = Vec::new();
        if t.degree() > s.budget() {
            return Err(Error::DegreeBudgetExceeded { degree: t.degree(), budget: s.budget() });
        }
        let v = match t {
            Task::Ybe => json!({ "satisfied": true, "dim": d, "kind": s.kind().tag() }),
            Task::MinPoly => {
                let mp: Vec<String> = s.min_poly().iter().map(|c| c.to_string()).collect();
                let hecke = s.hecke().map(|h| json!({ "mark": h.mark.to_string(), "regular": h.regular }));
                json!({ "coefficients": mp, "degree": mp.len() - 1, "hecke": hecke, "diagonal": s.diagonal_matrix().is_some() })
            }
            Task::ESpaces { from, to } => {
                let mut out = Vec::new();
                for n in *from..=*to {
                    let e = tensor::primitives_e(s, n)?;
                    let basis: Vec<Value> = e.rows().iter().map(|r| basis_json(d, n, r)).collect();
                    out.push(json!({ "n": n, "dim": e.dim(), "basis": basis }));
                }
                json!({ "degrees": out })
            }
            Task::Nichols { degree } => {
                let dims = tensor::nichols_dims(s, *degree)?;
                json!({ "dims": dims, "total": dims.iter().sum::<usize>() })
            }
            Task::NicholsTower { degree } => json!({ "dims": tower::nichols_via_tower(s, *degree)? }),
            Task::Sdeg { degree } => serde_json::to_value(tower::sdeg(s, *degree)?).expect("serializable"),
            Task::Quadratic { degree } => json!({ "quadratic": tower::is_quadratic(s, *degree)? }),
            Task::Validate => {
                enveloping::validate_bracket(self.bracket()?)?;
                json!({ "valid": true })
            }
            Task::LieCheck { n, slack } => {
                let fq = enveloping::enveloping_filtration(self.bracket()?, *n, *slack)?;
                warnings.extend(fq.warnings().iter().cloned());
                serde_json::to_value(enveloping::lie_check(&fq)).expect("serializable")
            }
            Task::Pbw { n, slack } => {
                let fq = enveloping::enveloping_filtration(self.bracket()?, *n, *slack)?;
                warnings.extend(fq.warnings().iter().cloned());
                let verdict = enveloping::pbw_check(&fq)?;
                json!({
                    "verdict": verdict,
                    "dims_u": fq.dims_u(),
                    "stabilized": fq.stabilized(),
                    "unconstrained_degrees": fq.unconstrained_degrees(),
                })
            }
            Task::Primitive { n, slack } => {
                let fq = enveloping::enveloping_filtration(self.bracket()?, *n, *slack)?;
                warnings.extend(fq.warnings().iter().cloned());
                json!({ "primitives_are_v": enveloping::primitive_check(&fq, *n)? })
            }
            Task::Hecke => match enveloping::hecke_presentation(self.bracket()?)? {
                None => json!({ "hecke": false }),
                Some(p) => json!({ "hecke": true, "presentation": p }),
            },
            Task::Pareigis { n, zeta } => {
                let z = self.zeta(zeta)?;
                let zs = pareigis::zeta_space(s, *n, &z)?;
                let e = tensor::primitives_e(s, *n)?;
                let mut images = Vec::new();
                for r in zs.subspace.rows() {
                    images.push(pareigis::pi_zeta(s, &zs, r)?);
                }
                let im = crate::linalg::Subspace::span(*n, s.words(*n), &images);
                json!({
                    "zeta": z.to_string(),
                    "zeta_space_dim": zs.subspace.dim(),
                    "image_dim": im.dim(),
                    "image_in_e": im.is_subspace_of(&e),
                    "e_dim": e.dim(),
                })
            }
            Task::PiSu { n } => json!({ "holds": pareigis::check_pi_su(s, *n)?, "e_dim": tensor::primitives_e(s, *n)?.dim() }),
            Task::PlVerify { n, zeta } => {
                let z = self.zeta(zeta)?;
                let mut table = self.bracket()?.clone();
                let mut extended = false;
                if table.cutoff() < *n {
                    table = enveloping::extend_by_multiplication(&table, *n, 1)?;
                    extended = true;
                }
                let r = pareigis::verify_pl(&table, *n, &z)?;
                json!({ "zeta": z.to_string(), "report": r, "extended_by_multiplication": extended })
            }
        };
        Ok((v, warnings))
    }

    fn zeta(&self, s: &str) -> Result<crate::linalg::Scalar> {
        parse_scalar(self.job.field(), s).map_err(Error::ValidationError)
    }
}

/// Plain-text rendering: one block per task with its top-level fields.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}  input {}\n", r.tool, r.version, &r.input_hash[..12]));
    let sp = &r.job["space"];
    out.push_str(&format!(
        "space {}  dim {}  budget {}  field Q(z_{})\n",
        sp["kind"].as_str().unwrap_or("?"),
        sp["dim"],
        sp["budget"],
        r.job["field_order"]
    ));
    for w in &r.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    for t in &r.tasks {
        let head = serde_json::to_value(&t.task).expect("serializable");
        let args: Vec<String> = head
            .as_object()
            .into_iter()
            .flatten()
            .filter(|(k, _)| k.as_str() != "task")
            .map(|(k, v)| format!("{k}={}", compact(v)))
            .collect();
        out.push_str(&format!("[{}] {} {}", t.task.name(), args.join(" "), t.status));
        if let Some(ms) = t.elapsed_ms {
            out.push_str(&format!(" ({ms} ms)"));
        }
        out.push('\n');
        if let Some(e) = &t.error {
            out.push_str(&format!("  {}: {}\n", e.kind, e.message));
        }
        if let Some(Value::Object(m)) = &t.result {
            for (k, v) in m {
                out.push_str(&format!("  {k}: {}\n", compact(v)));
            }
        }
    }
    out
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) if a.iter().all(|x| x.is_number()) => {
            a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        other => other.to_string(),
    }
}
