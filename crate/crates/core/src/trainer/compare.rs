//! Align evaluation reports from different runs into one comparison
//! table: per agent count, the collision level, per-agent per-step
//! reward, and per-agent progress of each run.

use std::path::Path;

use thiserror::Error;

use crate::trainer::eval::{EvalReport, EVAL_HEADER};

pub const COMPARE_HEADER: &str = "n_agents,algo,collisions,reward_per_agent_step,progress_per_agent";

#[derive(Debug, Error)]
pub enum CompareError {
    #[error("need at least 2 reports, got {0}")]
    NotEnoughReports(usize),
    #[error("reports mix behaviors: {0} vs {1}")]
    MismatchedBehaviors(String, String),
    #[error("malformed report {path}: {reason}")]
    Malformed { path: String, reason: String },
}

/// One parsed row of an evaluation report CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub behavior: String,
    pub algo: String,
    pub n_agents: usize,
    pub episode: usize,
    pub colliding_frac: f64,
    pub reward_per_agent_step: f64,
    pub progress_per_agent: f64,
}

/// A loaded report file: its origin plus every row.
#[derive(Debug, Clone)]
pub struct LoadedReport {
    pub path: String,
    pub rows: Vec<ReportRow>,
}

impl LoadedReport {
    pub fn from_reports(label: &str, reports: &[EvalReport]) -> Self {
        let rows = reports
            .iter()
            .flat_map(|r| {
                r.episodes.iter().map(|m| ReportRow {
                    behavior: r.behavior.tag().to_string(),
                    algo: r.algo_label.clone(),
                    n_agents: r.n_agents,
                    episode: m.episode,
                    colliding_frac: m.colliding_frac,
                    reward_per_agent_step: m.reward_per_agent_step(),
                    progress_per_agent: m.mean_progress(),
                })
            })
            .collect();
        LoadedReport {
            path: label.to_string(),
            rows,
        }
    }

    pub fn parse(path_label: &str, text: &str) -> Result<Self, CompareError> {
        let bad = |reason: String| CompareError::Malformed {
            path: path_label.to_string(),
            reason,
        };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
        if header != EVAL_HEADER {
            return Err(bad(format!("unexpected header '{header}'")));
        }
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 10 {
                return Err(bad(format!(
                    "line {}: expected 10 fields, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            let num = |i: usize| -> Result<f64, CompareError> {
                fields[i]
                    .parse::<f64>()
                    .map_err(|e| bad(format!("line {}: field {}: {e}", lineno + 2, i + 1)))
            };
            rows.push(ReportRow {
                behavior: fields[0].to_string(),
                algo: fields[1].to_string(),
                n_agents: num(2)? as usize,
                episode: num(3)? as usize,
                colliding_frac: num(6)?,
                reward_per_agent_step: num(7)?,
                progress_per_agent: num(8)?,
            });
        }
        if rows.is_empty() {
            return Err(bad("no data rows".into()));
        }
        Ok(LoadedReport {
            path: path_label.to_string(),
            rows,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CompareError> {
        let label = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CompareError::Malformed {
            path: label.clone(),
            reason: e.to_string(),
        })?;
        Self::parse(&label, &text)
    }

    fn behavior(&self) -> &str {
        &self.rows[0].behavior
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub n_agents: usize,
    pub algo: String,
    pub collisions: f64,
    pub reward_per_agent_step: f64,
    pub progress_per_agent: f64,
}

/// Mean the per-episode rows of every report per agent count and emit
/// aligned rows, ordered by agent count then input order.
pub fn compare_runs(reports: &[LoadedReport]) -> Result<Vec<CompareRow>, CompareError> {
    if reports.len() < 2 {
        return Err(CompareError::NotEnoughReports(reports.len()));
    }
    let first_behavior = reports[0].behavior();
    for r in &reports[1..] {
        if r.behavior() != first_behavior {
            return Err(CompareError::MismatchedBehaviors(
                first_behavior.to_string(),
                r.behavior().to_string(),
            ));
        }
    }

    let mut counts: Vec<usize> = reports
        .iter()
        .flat_map(|r| r.rows.iter().map(|row| row.n_agents))
        .collect();
    counts.sort_unstable();
    counts.dedup();

    let mut out = Vec::new();
    for &n in &counts {
        for report in reports {
            let rows: Vec<&ReportRow> =
                report.rows.iter().filter(|r| r.n_agents == n).collect();
            if rows.is_empty() {
                continue;
            }
            let k = rows.len() as f64;
            out.push(CompareRow {
                n_agents: n,
                algo: rows[0].algo.clone(),
                collisions: rows.iter().map(|r| r.colliding_frac).sum::<f64>() / k,
                reward_per_agent_step: rows
                    .iter()
                    .map(|r| r.reward_per_agent_step)
                    .sum::<f64>()
                    / k,
                progress_per_agent: rows.iter().map(|r| r.progress_per_agent).sum::<f64>() / k,
            });
        }
    }
    Ok(out)
}

pub fn comparison_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from(COMPARE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n_agents, r.algo, r.collisions, r.reward_per_agent_step, r.progress_per_agent
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report_text(algo: &str, behavior: &str) -> String {
        let mut s = String::from(EVAL_HEADER);
        s.push('\n');
        s.push_str(&format!("{behavior},{algo},2,0,100,50,0.1,0.25,30,1.5\n"));
        s.push_str(&format!("{behavior},{algo},2,1,100,70,0.3,0.35,40,1.5\n"));
        s.push_str(&format!("{behavior},{algo},4,0,100,80,0.2,0.2,20,2.5\n"));
        s
    }

    #[test]
    fn identical_reports_have_zero_deltas() {
        let a = LoadedReport::parse("a.csv", &report_text("ps_ddpg", "lanekeeping")).unwrap();
        let b = LoadedReport::parse("b.csv", &report_text("ps_ddpg", "lanekeeping")).unwrap();
        let rows = compare_runs(&[a, b]).unwrap();
        assert_eq!(rows.len(), 4);
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].collisions, pair[1].collisions);
            assert_eq!(pair[0].progress_per_agent, pair[1].progress_per_agent);
        }
        // Means over the two n=2 episodes.
        assert_eq!(rows[0].n_agents, 2);
        assert!((rows[0].collisions - 0.2).abs() < 1e-12);
        assert!((rows[0].reward_per_agent_step - 0.3).abs() < 1e-12);
        assert!((rows[0].progress_per_agent - 35.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_behaviors_rejected() {
        let a = LoadedReport::parse("a.csv", &report_text("ps_ddpg", "lanekeeping")).unwrap();
        let b = LoadedReport::parse("b.csv", &report_text("single_ddpg", "overtaking")).unwrap();
        assert!(matches!(
            compare_runs(&[a, b]),
            Err(CompareError::MismatchedBehaviors(_, _))
        ));
    }

    #[test]
    fn single_report_rejected() {
        let a = LoadedReport::parse("a.csv", &report_text("ps_ddpg", "lanekeeping")).unwrap();
        assert!(matches!(
            compare_runs(&[a]),
            Err(CompareError::NotEnoughReports(1))
        ));
    }

    #[test]
    fn comparison_csv_schema() {
        let a = LoadedReport::parse("a.csv", &report_text("ps_ddpg", "lanekeeping")).unwrap();
        let b = LoadedReport::parse("b.csv", &report_text("single_ddpg", "lanekeeping")).unwrap();
        let csv = comparison_csv(&compare_runs(&[a, b]).unwrap());
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n_agents,algo,collisions,reward_per_agent_step,progress_per_agent"
        );
        let first = lines.next().unwrap();
        assert!(first.starts_with("2,ps_ddpg,"));
    }

    #[test]
    fn malformed_csv_names_the_file() {
        let err = LoadedReport::parse("bad.csv", "not,a,header\n1,2,3\n").unwrap_err();
        match err {
            CompareError::Malformed { path, .. } => assert_eq!(path, "bad.csv"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
