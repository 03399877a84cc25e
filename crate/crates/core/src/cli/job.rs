//! The line-oriented job grammar.
//!
//! ```text
//! [field]
//! m = 4
//! [space]
//! space = scalar          # preset:<name> | diagonal | scalar | flip | explicit
//! d = 2
//! q = z
//! budget = 6
//! [bracket]
//! preset = zero           # zero | gurevich | sl2
//! map = x1x0 - x0x1 -> x1
//! [tasks]
//! nichols = 6
//! sdeg = 6
//! ```
//!
//! `#` starts a comment. Keys inside a section may appear in any order.

use serde::Serialize;

use super::expr::{parse_matrix, parse_scalar, parse_tensor};
use crate::braided::{presets, BraidedSpace};
use crate::enveloping::{gurevich_bracket, sl2_bracket, BracketTable};
use crate::error::{Error, Result};
use crate::linalg::{SVec, Scalar};
use crate::scalar::{field_make, root_order, CycloField};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum Task {
    Ybe,
    MinPoly,
    ESpaces { from: usize, to: usize },
    Nichols { degree: usize },
    NicholsTower { degree: usize },
    Sdeg { degree: usize },
    Quadratic { degree: usize },
    Validate,
    LieCheck { n: usize, slack: usize },
    Pbw { n: usize, slack: usize },
    Primitive { n: usize, slack: usize },
    Hecke,
    Pareigis { n: usize, zeta: String },
    PiSu { n: usize },
    PlVerify { n: usize, zeta: String },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Ybe => "ybe",
            Task::MinPoly => "min_poly",
            Task::ESpaces { .. } => "e_spaces",
            Task::Nichols { .. } => "nichols",
            Task::NicholsTower { .. } => "nichols_tower",
            Task::Sdeg { .. } => "sdeg",
            Task::Quadratic { .. } => "quadratic",
            Task::Validate => "validate",
            Task::LieCheck { .. } => "lie_check",
            Task::Pbw { .. } => "pbw",
            Task::Primitive { .. } => "primitive",
            Task::Hecke => "hecke",
            Task::Pareigis { .. } => "pareigis",
            Task::PiSu { .. } => "pi_su",
            Task::PlVerify { .. } => "pl_verify",
        }
    }

    /// Highest tensor degree the task touches.
    pub fn degree(&self) -> usize {
        match self {
            Task::Ybe | Task::MinPoly | Task::Validate | Task::Hecke => 3,
            Task::ESpaces { to, .. } => *to,
            Task::Nichols { degree }
            | Task::NicholsTower { degree }
            | Task::Sdeg { degree }
            | Task::Quadratic { degree } => *degree,
            Task::LieCheck { n, slack } | Task::Pbw { n, slack } | Task::Primitive { n, slack } => n + slack,
            Task::Pareigis { n, .. } | Task::PiSu { n } => *n,
            Task::PlVerify { n, .. } => n + 1,
        }
    }

    fn with_degree(&self, d: usize) -> Task {
        match self {
            Task::Nichols { .. } => Task::Nichols { degree: d },
            Task::NicholsTower { .. } => Task::NicholsTower { degree: d },
            Task::Sdeg { .. } => Task::Sdeg { degree: d },
            Task::Quadratic { .. } => Task::Quadratic { degree: d },
            t => t.clone(),
        }
    }

}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceDecl {
    pub kind: String,
    /// Parameters as written, in input order.
    pub params: Vec<(String, String)>,
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketDecl {
    pub preset: Option<String>,
    pub cutoff: Option<usize>,
    pub maps: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JobSpec {
    pub field_order: u32,
    pub space: SpaceDecl,
    pub bracket: Option<BracketDecl>,
    pub tasks: Vec<Task>,
    #[serde(skip)]
    lines: LineMap,
}

#[derive(Clone, Debug, Default)]
struct LineMap {
    space: usize,
    bracket: usize,
    params: Vec<usize>,
    maps: Vec<usize>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError { line, msg: msg.into() }
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| perr(line, format!("expected a non-negative integer, found '{}'", s.trim())))
}

fn parse_pair(line: usize, s: &str, default_second: Option<usize>) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').collect();
    match (parts.as_slice(), default_second) {
        ([a], Some(b)) => Ok((parse_usize(line, a)?, b)),
        ([a, b], _) => Ok((parse_usize(line, a)?, parse_usize(line, b)?)),
        _ => Err(perr(line, format!("expected 'n, slack', found '{}'", s.trim()))),
    }
}

fn parse_task<'a>(line: usize, key: &str, val: Option<&'a str>) -> Result<Task> {
    let need = |v: Option<&'a str>| v.ok_or_else(|| perr(line, format!("task '{key}' needs a value")));
    let t = match key {
        "ybe" => Task::Ybe,
        "min_poly" => Task::MinPoly,
        "validate" => Task::Validate,
        "hecke" => Task::Hecke,
        "e_spaces" => {
            let v = need(val)?;
            let (a, b) = match v.split_once("..") {
                Some((a, b)) => (parse_usize(line, a)?, parse_usize(line, b)?),
                None => {
                    let n = parse_usize(line, v)?;
                    (n, n)
                }
            };
            if a > b {
                return Err(perr(line, "empty degree range"));
            }
            Task::ESpaces { from: a, to: b }
        }
        "nichols" => Task::Nichols { degree: parse_usize(line, need(val)?)? },
        "nichols_tower" => Task::NicholsTower { degree: parse_usize(line, need(val)?)? },
        "sdeg" => Task::Sdeg { degree: parse_usize(line, need(val)?)? },
        "quadratic" => Task::Quadratic { degree: parse_usize(line, need(val)?)? },
        "lie_check" | "pbw" | "primitive" => {
            let (n, slack) = parse_pair(line, need(val)?, Some(2))?;
            match key {
                "lie_check" => Task::LieCheck { n, slack },
                "pbw" => Task::Pbw { n, slack },
                _ => Task::Primitive { n, slack },
            }
        }
        "pi_su" => Task::PiSu { n: parse_usize(line, need(val)?)? },
        "pareigis" | "pl_verify" => {
            let v = need(val)?;
            let (n, z) = v.split_once(',').ok_or_else(|| perr(line, format!("'{key}' needs 'n, zeta'")))?;
            let n = parse_usize(line, n)?;
            let zeta = z.trim().to_string();
            if key == "pareigis" {
                Task::Pareigis { n, zeta }
            } else {
                Task::PlVerify { n, zeta }
            }
        }
        _ => return Err(perr(line, format!("unknown task '{key}'"))),
    };
    Ok(t)
}

/// Parses the job text. Scalars are checked here so that bad input fails
/// before any computation.
pub fn parse_spec(text: &str) -> Result<JobSpec> {
    let mut section = String::new();
    let mut m: Option<u32> = None;
    let mut space: Option<SpaceDecl> = None;
    let mut params: Vec<(String, String)> = Vec::new();
    let mut budget = None;
    let mut bracket: Option<BracketDecl> = None;
    let mut tasks = Vec::new();
    let mut lines = LineMap::default();
    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = name.trim().to_string();
            match section.as_str() {
                "field" | "space" | "tasks" => {}
                "bracket" => {
                    lines.bracket = ln;
                    bracket.get_or_insert(BracketDecl { preset: None, cutoff: None, maps: Vec::new() });
                }
                _ => return Err(perr(ln, format!("unknown section [{section}]"))),
            }
            continue;
        }
        let (key, val) = match line.split_once('=') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (line, None),
        };
        let need = || val.filter(|v| !v.is_empty()).ok_or_else(|| perr(ln, format!("'{key}' needs a value")));
        match section.as_str() {
            "field" => match key {
                "m" => {
                    let v = parse_usize(ln, need()?)?;
                    if v == 0 || v > 10_000 {
                        return Err(perr(ln, "m must be between 1 and 10000"));
                    }
                    m = Some(v as u32);
                }
                _ => return Err(perr(ln, format!("unknown key '{key}' in [field]"))),
            },
            "space" => match key {
                "space" | "kind" => {
                    lines.space = ln;
                    space = Some(SpaceDecl { kind: need()?.to_string(), params: Vec::new(), budget: None });
                }
                "budget" | "D" => budget = Some(parse_usize(ln, need()?)?),
                _ => {
                    lines.params.push(ln);
                    params.push((key.to_string(), need()?.to_string()));
                }
            },
            "bracket" => {
                let b = bracket.as_mut().expect("bracket section opened");
                match key {
                    "preset" => b.preset = Some(need()?.to_string()),
                    "cutoff" => b.cutoff = Some(parse_usize(ln, need()?)?),
                    "map" => {
                        let (u, v) = need()?
                            .split_once("->")
                            .ok_or_else(|| perr(ln, "a bracket map reads 'map = <tensor> -> <vector>'"))?;
                        lines.maps.push(ln);
                        b.maps.push((u.trim().to_string(), v.trim().to_string()));
                    }
                    _ => return Err(perr(ln, format!("unknown key '{key}' in [bracket]"))),
                }
            }
            "tasks" => tasks.push(parse_task(ln, key, val.filter(|v| !v.is_empty()))?),
            _ => return Err(perr(ln, "key outside of any section")),
        }
    }
    let mut space = space.ok_or_else(|| perr(0, "missing 'space = ...' in [space]"))?;
    space.params = params;
    space.budget = budget;
    let job = JobSpec { field_order: m.unwrap_or(1), space, bracket, tasks, lines };
    job.check_scalars()?;
    Ok(job)
}

impl JobSpec {
    pub fn field(&self) -> &'static CycloField {
        field_make(self.field_order)
    }

    /// Replaces the degree of every degree-indexed task and the budget.
    pub fn override_degree(&mut self, d: usize) {
        self.tasks = self.tasks.iter().map(|t| t.with_degree(d)).collect();
        self.space.budget = Some(d.max(self.space.budget.unwrap_or(0)));
    }

    pub fn filter_tasks(&mut self, names: &[String]) {
        self.tasks.retain(|t| names.iter().any(|n| n == t.name()));
    }

    pub fn budget(&self) -> usize {
        let need = self.tasks.iter().map(Task::degree).max().unwrap_or(3).max(3);
        self.space.budget.unwrap_or(need)
    }

    fn param(&self, key: &str) -> Option<(usize, &str)> {
        self.space
            .params
            .iter()
            .zip(&self.lines.params)
            .find(|((k, _), _)| k == key)
            .map(|((_, v), ln)| (*ln, v.as_str()))
    }

    fn scalar_param(&self, key: &str) -> Result<Option<Scalar>> {
        match self.param(key) {
            None => Ok(None),
            Some((ln, v)) => parse_scalar(self.field(), v).map(Some).map_err(|e| perr(ln, e)),
        }
    }

    fn usize_param(&self, key: &str) -> Result<Option<usize>> {
        self.param(key).map(|(ln, v)| parse_usize(ln, v)).transpose()
    }

    fn check_scalars(&self) -> Result<()> {
        let f = self.field();
        for ((k, v), ln) in self.space.params.iter().zip(&self.lines.params) {
            let r = if v.trim_start().starts_with('[') {
                parse_matrix(f, v).map(|_| ())
            } else if matches!(k.as_str(), "d" | "n") {
                parse_usize(*ln, v).map(|_| ()).map_err(|e| e.to_string())
            } else {
                parse_scalar(f, v).map(|_| ())
            };
            r.map_err(|e| perr(*ln, e))?;
        }
        for t in &self.tasks {
            if let Task::Pareigis { n, zeta } | Task::PlVerify { n, zeta } = t {
                let z = parse_scalar(f, zeta).map_err(|e| perr(0, e))?;
                if root_order(&z) != Some(*n as u32) {
                    return Err(Error::ValidationError(format!(
                        "{zeta} is not a primitive {n}-th root of unity in Q(z_{})",
                        self.field_order
                    )));
                }
            }
            if let Task::PiSu { n } = t {
                if f.primitive_roots_of_order(*n as u32).is_none() {
                    return Err(Error::ValidationError(format!(
                        "the primitive {n}-th roots of unity are not all in Q(z_{})",
                        self.field_order
                    )));
                }
            }
        }
        Ok(())
    }

    /// Builds the braided space; construction validates the braid equation.
    pub fn build_space(&self) -> Result<BraidedSpace> {
        let f = self.field();
        let budget = self.budget();
        let kind = self.space.kind.trim();
        let ln = self.lines.space;
        let d = self.usize_param("d")?;
        let q = match self.param("q") {
            Some((_, v)) if v.trim_start().starts_with('[') => None,
            _ => self.scalar_param("q")?,
        };
        let need_d = || d.ok_or_else(|| Error::ValidationError(format!("'{kind}' needs d = <dimension>")));
        let need_q = || q.clone().ok_or_else(|| Error::ValidationError(format!("'{kind}' needs q = <scalar>")));
        let matrix = |key: &str| -> Result<Vec<Vec<Scalar>>> {
            let (l, v) = self.param(key).ok_or_else(|| Error::ValidationError(format!("'{kind}' needs {key} = [[..]]")))?;
            parse_matrix(f, v).map_err(|e| perr(l, e))
        };
        let name = kind.strip_prefix("preset:").map(str::trim);
        match (kind, name) {
            ("diagonal", _) | (_, Some("quantum_linear")) => presets::quantum_linear(f, matrix("q")?, budget),
            ("scalar", _) | (_, Some("scalar")) => presets::scalar(f, need_d()?, need_q()?, budget),
            ("flip", _) | (_, Some("flip")) => presets::flip(f, need_d()?, budget),
            ("explicit", _) => {
                let c = matrix("c")?;
                let d = need_d()?;
                if c.len() != d * d || c.iter().any(|r| r.len() != d * d) {
                    return Err(Error::ValidationError(format!("c must be a {0}x{0} matrix", d * d)));
                }
                let cols = (0..d * d)
                    .map(|col| {
                        (0..d * d)
                            .filter(|&r| !c[r][col].is_zero())
                            .map(|r| (r as u32, c[r][col].clone()))
                            .collect::<SVec>()
                    })
                    .collect();
                BraidedSpace::new(f, d, cols, crate::braided::Kind::Explicit, budget)
            }
            (_, Some("d4_rack")) => presets::d4_rack(f, budget),
            (_, Some("twodim_sdeg2")) => presets::twodim_sdeg2(f, budget),
            (_, Some("gurevich")) => presets::gurevich(f, self.gurevich_mu()?, budget),
            (_, Some("standard_hecke")) => presets::standard_hecke(f, need_d()?, need_q()?, budget),
            (_, Some(p)) if p.starts_with("cartan_A") => {
                let n = parse_usize(ln, &p["cartan_A".len()..])?;
                presets::cartan_an(f, n, need_q()?, budget)
            }
            _ => Err(perr(ln, format!("unknown space '{kind}'"))),
        }
    }

    /// mu for the gurevich preset, given directly or as a square root of q.
    pub fn gurevich_mu(&self) -> Result<Scalar> {
        if let Some(mu) = self.scalar_param("mu")? {
            return Ok(mu);
        }
        let q = self
            .scalar_param("q")?
            .ok_or_else(|| Error::ValidationError("gurevich needs mu = <scalar> or q = <scalar>".into()))?;
        square_root(&q).ok_or_else(|| {
            Error::ValidationError(format!(
                "q = {q} has no square root mu in Q(z_{}); give mu directly or enlarge m",
                self.field_order
            ))
        })
    }

    pub fn build_bracket(&self, space: &BraidedSpace) -> Result<Option<BracketTable>> {
        let Some(b) = &self.bracket else {
            return Ok(None);
        };
        let f = space.field();
        let preset = b.preset.as_deref().map(str::trim);
        let base = match preset {
            None | Some("zero") => {
                let cutoff = b.cutoff.unwrap_or(if b.maps.is_empty() { space.budget() } else { 2 });
                if b.maps.is_empty() {
                    BracketTable::zero(space, cutoff)?
                } else {
                    let mut pairs = Vec::new();
                    for ((u, v), ln) in b.maps.iter().zip(&self.lines.maps) {
                        let (n, u) = parse_tensor(f, space.dim(), u).map_err(|e| perr(*ln, e))?;
                        let (k, v) = parse_tensor(f, space.dim(), v).map_err(|e| perr(*ln, e))?;
                        if k != 1 && !v.is_empty() {
                            return Err(perr(*ln, "bracket values must be vectors of V"));
                        }
                        if n < 2 || n > cutoff {
                            return Err(perr(*ln, format!("argument degree {n} outside 2..={cutoff}")));
                        }
                        pairs.push((n, u, v));
                    }
                    BracketTable::from_pairs(space, cutoff, &pairs)?
                }
            }
            Some("gurevich") => gurevich_bracket(space, &self.gurevich_mu()?)?,
            Some("sl2") => sl2_bracket(space)?,
            Some(p) => return Err(perr(self.lines.bracket, format!("unknown bracket preset '{p}'"))),
        };
        Ok(Some(base))
    }
}

/// A square root of q: rational squares and roots of unity are tried.
fn square_root(q: &Scalar) -> Option<Scalar> {
    let f = q.field();
    if let Some(r) = q.as_rational() {
        if r.signum() > 0 {
            let (n, d) = (r.numer(), r.denom());
            let (sn, sd) = (n.sqrt(), d.sqrt());
            if &sn * &sn == n && &sd * &sd == d {
                return Some(f.from_rational(crate::scalar::Rational::from_bigints(sn, sd)));
            }
        }
    }
    let (g, order) = f.primitive_root();
    let mut p = f.one();
    for _ in 0..order {
        if &(&p * &p) == q {
            return Some(p);
        }
        p = &p * &g;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_job() {
        let job = parse_spec(
            "[field]\nm = 2\n[space]\nspace = diagonal\nq = [[−1, 1], [−1, −1]]\n[tasks]\nsdeg = 5\nnichols_tower = 4\n",
        )
        .unwrap();
        let s = job.build_space().unwrap();
        let twodim = presets::twodim_sdeg2(job.field(), 5).unwrap();
        assert_eq!(s.c_columns(), twodim.c_columns());
        assert_eq!(job.budget(), 5);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_spec("[field]\nm = 4\n[space]\nspace = scalar\nd = 2\nq = z^\n").unwrap_err();
        assert!(matches!(e, Error::ParseError { line: 6, .. }), "{e}");
        let e = parse_spec("[space]\nspace = flip\nd = 2\n[tasks]\nfrobnicate\n").unwrap_err();
        assert!(matches!(e, Error::ParseError { line: 5, .. }));
    }

    #[test]
    fn gurevich_needs_a_square_root() {
        let job = parse_spec("[field]\nm = 8\n[space]\nspace = preset:gurevich\nq = z\n").unwrap();
        assert!(matches!(job.build_space(), Err(Error::ValidationError(_))));
        let job = parse_spec("[field]\nm = 8\n[space]\nspace = preset:gurevich\nq = z^2\n").unwrap();
        assert!(job.build_space().is_ok());
        let job = parse_spec("[space]\nspace = preset:gurevich\nq = 4\n").unwrap();
        assert_eq!(job.gurevich_mu().unwrap(), job.field().from_int(2));
    }

    #[test]
    fn root_orders_are_validated() {
        let e = parse_spec("[field]\nm = 4\n[space]\nspace = flip\nd = 2\n[tasks]\npareigis = 3, z\n").unwrap_err();
        assert!(matches!(e, Error::ValidationError(_)));
    }
}
