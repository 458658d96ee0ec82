//! Driving the command line in-process and reading its JSON report back.

use spaceform_mtw::cli::{run, RunReport};

fn main() {
    let csv = std::env::temp_dir().join("mtw-neg-cosh.csv");
    let args = ["mtw", "check", "--cost", "neg-cosh", "--K", "-1", "--dim", "3", "--diameter", "2", "--json", "--csv"];
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(args.iter().map(|s| s.to_string()).chain([csv.display().to_string()]), &mut out, &mut err);
    let report: RunReport = serde_json::from_slice(&out).expect("JSON report");
    let verdict = report.verdict.expect("check reports a verdict");
    println!("exit {code}, status {}, {:.1} ms", verdict.status, report.wall_time_ms);
    let text = std::fs::read_to_string(&csv).expect("csv written");
    let mut lines = text.lines();
    println!("{}\n{}\n... {} rows", lines.next().unwrap_or(""), lines.next().unwrap_or(""), text.lines().count() - 1);
}
