//! Example catalog: preset jobs with their expected values.

use serde::Serialize;
use serde_json::{json, Value};

use super::job::parse_spec;
use super::run::{run, Report, RunOptions};

pub struct Entry {
    pub name: &'static str,
    pub job: &'static str,
    /// (task index, JSON pointer into its result, expected value).
    pub expect: fn() -> Vec<(usize, &'static str, Value)>,
}

pub fn entries() -> Vec<Entry> {
    vec![
        Entry {
            name: "scalar_zeta4",
            job: "[field]\nm = 4\n[space]\nspace = scalar\nd = 2\nq = z\n[tasks]\nnichols = 6\nsdeg = 6\n",
            expect: || vec![(0, "/dims", json!([1, 2, 4, 8, 0, 0, 0])), (1, "/value", json!(1)), (1, "/status", json!("certified"))],
        },
        Entry {
            name: "scalar_two",
            job: "[space]\nspace = scalar\nd = 2\nq = 2\n[tasks]\nsdeg = 5\n",
            expect: || vec![(0, "/value", json!(0)), (0, "/status", json!("certified"))],
        },
        Entry {
            name: "flip2",
            job: "[space]\nspace = flip\nd = 2\n[tasks]\nnichols = 6\nsdeg = 6\ne_spaces = 2\n",
            expect: || vec![(0, "/dims", json!([1, 2, 3, 4, 5, 6, 7])), (1, "/value", json!(1)), (2, "/degrees/0/dim", json!(1))],
        },
        Entry {
            name: "flip3",
            job: "[space]\nspace = flip\nd = 3\n[tasks]\nnichols = 5\nsdeg = 5\ne_spaces = 2\n",
            expect: || vec![(0, "/dims", json!([1, 3, 6, 10, 15, 21])), (1, "/value", json!(1)), (2, "/degrees/0/dim", json!(3))],
        },
        Entry {
            name: "d4_rack",
            job: "[space]\nspace = preset:d4_rack\nbudget = 6\n[tasks]\nnichols = 6\nsdeg = 6\nquadratic = 4\ne_spaces = 2\n",
            expect: || {
                vec![
                    (0, "/dims", json!([1, 4, 8, 12, 14, 12, 8])),
                    (1, "/value", json!(2)),
                    (2, "/quadratic", json!(false)),
                    (3, "/degrees/0/dim", json!(8)),
                ]
            },
        },
        Entry {
            name: "twodim_sdeg2",
            job: "[field]\nm = 2\n[space]\nspace = diagonal\nq = [[-1, 1], [-1, -1]]\n[tasks]\nsdeg = 6\n",
            expect: || vec![(0, "/value", json!(2)), (0, "/status", json!("certified"))],
        },
        Entry {
            name: "cartan_A2_root3",
            job: "[field]\nm = 3\n[space]\nspace = preset:cartan_A2\nq = z\n[tasks]\nsdeg = 9\n",
            expect: || vec![(0, "/value", json!(2)), (0, "/status", json!("certified"))],
        },
        Entry {
            name: "cartan_A2_generic",
            job: "[space]\nspace = preset:cartan_A2\nq = 2\n[tasks]\nsdeg = 6\n",
            expect: || vec![(0, "/value", json!(1))],
        },
        Entry {
            name: "gurevich",
            job: "[space]\nspace = preset:gurevich\nmu = 2\nbudget = 6\n[bracket]\npreset = gurevich\n[tasks]\nquadratic = 5\nvalidate\nlie_check = 4, 2\npbw = 4, 2\nprimitive = 4, 2\n",
            expect: || {
                vec![
                    (0, "/quadratic", json!(true)),
                    (1, "/valid", json!(true)),
                    (2, "/status", json!("is_lie_up_to")),
                    (3, "/verdict/status", json!("pbw_consistent")),
                    (3, "/verdict/gr_dims", json!([1, 3, 6, 10, 15])),
                    (4, "/primitives_are_v", json!(true)),
                ]
            },
        },
        Entry {
            name: "standard_hecke",
            job: "[space]\nspace = preset:standard_hecke\nd = 2\nq = 3\n[tasks]\nsdeg = 5\nnichols = 5\n",
            expect: || vec![(0, "/value", json!(1)), (0, "/status", json!("certified")), (1, "/dims", json!([1, 2, 3, 4, 5, 6]))],
        },
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub mismatches: Vec<String>,
}

pub fn check_entry(e: &Entry, opts: &RunOptions) -> CheckResult {
    let report = parse_spec(e.job).and_then(|j| run(&j, e.job, opts));
    let mut mismatches = Vec::new();
    match report {
        Err(err) => mismatches.push(format!("job failed: {err}")),
        Ok(r) => mismatches.extend(compare(&r, &(e.expect)())),
    }
    CheckResult { name: e.name, passed: mismatches.is_empty(), mismatches }
}

fn compare(r: &Report, expect: &[(usize, &str, Value)]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, ptr, want) in expect {
        let t = &r.tasks[*i];
        let got = t.result.as_ref().and_then(|v| v.pointer(ptr));
        if got != Some(want) {
            let shown = match (got, &t.error) {
                (Some(g), _) => g.to_string(),
                (None, Some(e)) => format!("error {}", e.message),
                (None, None) => "missing".into(),
            };
            out.push(format!("{}{ptr}: expected {want}, got {shown}", t.task.name()));
        }
    }
    out
}
