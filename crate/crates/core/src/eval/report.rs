//! Plain-text and CSV renderings of evaluation rows.

use std::fmt::Write as _;

use super::{round_half_up, weighted_average, EvalRow, Metrics, Tool};
use crate::pattern::PatternId;

pub const WA_PROJECT: &str = "WA";

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| round_half_up(x).to_string())
}

/// Rows of each pattern followed by one task-weighted row per tool.
pub fn with_weighted_averages(rows: &[EvalRow]) -> Vec<EvalRow> {
    let mut patterns: Vec<PatternId> = rows.iter().map(|r| r.pattern).collect();
    patterns.sort();
    patterns.dedup();
    let mut out = Vec::new();
    for p in patterns {
        let of_pattern: Vec<&EvalRow> = rows.iter().filter(|r| r.pattern == p).collect();
        out.extend(of_pattern.iter().map(|r| (*r).clone()));
        for tool in Tool::ALL {
            let ms: Vec<Metrics> = of_pattern.iter().filter(|r| r.tool == tool).map(|r| r.metrics).collect();
            if ms.is_empty() {
                continue;
            }
            let metrics = weighted_average(&ms).unwrap_or_default();
            out.push(EvalRow {
                pattern: p,
                project: WA_PROJECT.to_string(),
                tool,
                metrics,
            });
        }
    }
    out
}

/// One aligned table per pattern with integer percentages.
pub fn report_text(rows: &[EvalRow]) -> String {
    let all = with_weighted_averages(rows);
    let width = all.iter().map(|r| r.project.len()).max().unwrap_or(0).max("Project".len());
    let mut out = String::new();
    let mut current = None;
    for r in &all {
        if current != Some(r.pattern) {
            if current.is_some() {
                out.push('\n');
            }
            current = Some(r.pattern);
            let _ = writeln!(out, "{} {}", r.pattern, r.pattern.notation());
            let _ = writeln!(
                out,
                "{:<width$}  {:<7}  {:>5}  {:>4}  {:>4}  {:>4}  {:>4}",
                "Project", "Tool", "Tasks", "Cov", "Pre", "Rec", "F1"
            );
        }
        let m = &r.metrics;
        let _ = writeln!(
            out,
            "{:<width$}  {:<7}  {:>5}  {:>4}  {:>4}  {:>4}  {:>4}",
            r.project,
            r.tool.as_str(),
            m.task_count,
            round_half_up(m.coverage),
            cell(m.precision),
            cell(m.recall),
            cell(m.f1)
        );
    }
    out
}

/// `pattern,project,tool,tasks,cov,pre,rec,f1` with integer percentages;
/// absent values are empty.
pub fn report_csv(rows: &[EvalRow]) -> String {
    let mut out = String::from("pattern,project,tool,tasks,cov,pre,rec,f1\n");
    let num = |v: Option<f64>| v.map(|x| round_half_up(x).to_string()).unwrap_or_default();
    for r in with_weighted_averages(rows) {
        let m = &r.metrics;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.pattern,
            r.project.replace(',', "_"),
            r.tool,
            m.task_count,
            round_half_up(m.coverage),
            num(m.precision),
            num(m.recall),
            num(m.f1)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(project: &str, tool: Tool, f1: f64, n: usize) -> EvalRow {
        EvalRow {
            pattern: PatternId::P1,
            project: project.into(),
            tool,
            metrics: Metrics {
                coverage: 100.0,
                precision: Some(f1),
                recall: Some(f1),
                f1: Some(f1),
                task_count: n,
            },
        }
    }

    #[test]
    fn weighted_rows_follow_projects() {
        let rows = vec![row("a", Tool::CoRec, 80.0, 30), row("b", Tool::CoRec, 60.0, 10), row("a", Tool::Rose, 10.0, 30)];
        let csv = report_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "P1,a,CoRec,30,100,80,80,80");
        assert_eq!(lines[4], "P1,WA,CoRec,40,100,75,75,75");
        assert_eq!(lines[5], "P1,WA,ROSE,30,100,10,10,10");
        let text = report_text(&rows);
        assert!(text.starts_with("P1 *CF-f->CF\nProject"));
        assert!(text.lines().any(|l| l.starts_with("WA") && l.ends_with("75")));
    }

    #[test]
    fn absent_values_render_empty() {
        let mut r = row("a", Tool::Tar, 0.0, 4);
        r.metrics = Metrics { task_count: 4, ..Metrics::default() };
        assert!(report_csv(&[r.clone()]).contains("P1,a,TAR,4,0,,,\n"));
        assert!(report_text(&[r]).lines().nth(2).unwrap().ends_with("-     -     -"));
    }
}
