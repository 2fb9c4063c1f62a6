//! CSV renderings of schedules, energization times, trajectories and LP
//! solutions, and the schedule reader used for re-scoring.

use std::fmt::Write as _;

use thiserror::Error;

use crate::format::sig9;
use crate::lp::LpSolution;
use crate::precedence::PrecedenceForest;
use crate::scalar::Scalar;
use crate::schedule::{Assignment, Schedule, Trajectory};

pub const SCHEDULE_HEADER: &str = "crew,job,start,completion";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown job `{id}`")]
    UnknownJob { line: usize, id: String },
}

/// Crews are numbered from 1.
pub fn schedule_csv<T: Scalar>(schedule: &Schedule<T>, forest: &PrecedenceForest<T>) -> String {
    let mut out = format!("{SCHEDULE_HEADER}\n");
    for (crew, a) in schedule.assignments() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            crew + 1,
            forest.jobs()[a.job].id,
            sig9(a.start.as_f64()),
            sig9(a.completion.as_f64())
        );
    }
    out
}

/// Reads `crew,job,start,completion` rows. Blank lines, `#` comments and
/// the header are skipped; the completion column is ignored, and jobs keep
/// their crew and their order by listed start.
pub fn parse_schedule_csv<T: Scalar>(text: &str, forest: &PrecedenceForest<T>) -> Result<Schedule<T>, CsvError> {
    let mut lists: Vec<Vec<Assignment<T>>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') || content.replace(' ', "") == SCHEDULE_HEADER {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(CsvError::Syntax { line, message: format!("expected 4 fields, found {}", fields.len()) });
        }
        let crew: usize = fields[0]
            .parse()
            .ok()
            .filter(|&c| c >= 1)
            .ok_or_else(|| CsvError::Syntax { line, message: format!("bad crew `{}`", fields[0]) })?;
        let job = forest
            .job_index(fields[1])
            .ok_or_else(|| CsvError::UnknownJob { line, id: fields[1].to_string() })?;
        let start = T::parse_decimal(fields[2])
            .ok_or_else(|| CsvError::Syntax { line, message: format!("bad start `{}`", fields[2]) })?;
        if lists.len() < crew {
            lists.resize(crew, Vec::new());
        }
        lists[crew - 1].push(Assignment { job, start, completion: start + forest.jobs()[job].ptime });
    }
    for list in &mut lists {
        list.sort_by(|a, b| a.start.partial_cmp(&b.start).unwrap_or(std::cmp::Ordering::Equal));
    }
    if lists.is_empty() {
        lists.push(Vec::new());
    }
    Ok(Schedule::from_crews(lists))
}

pub fn energization_csv<T: Scalar>(node_ids: &[String], energization: &[T]) -> String {
    let mut out = String::from("node,energization_time\n");
    for (id, e) in node_ids.iter().zip(energization) {
        let _ = writeln!(out, "{id},{}", sig9(e.as_f64()));
    }
    out
}

pub fn trajectory_csv<T: Scalar>(trajectory: &Trajectory<T>) -> String {
    let mut out = String::from("time,restored_weight,fraction\n");
    for p in &trajectory.points {
        let _ = writeln!(
            out,
            "{},{},{}",
            sig9(p.time.as_f64()),
            sig9(p.restored.as_f64()),
            sig9(p.fraction.as_f64())
        );
    }
    out
}

pub fn lp_csv<T: Scalar>(lp: &LpSolution, forest: &PrecedenceForest<T>) -> String {
    let mut out = String::from("job,energization,midpoint\n");
    for (j, job) in forest.jobs().iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", job.id, sig9(lp.energization[j]), sig9(lp.midpoints[j]));
    }
    out
}

/// One cut per line: round, violation when added, member job ids.
pub fn cut_log<T: Scalar>(lp: &LpSolution, forest: &PrecedenceForest<T>) -> String {
    let mut out = String::from("round,violation,members\n");
    for (k, cut) in lp.cuts.iter().enumerate() {
        let members: Vec<&str> = cut.members.iter().map(|&j| forest.jobs()[j].id.as_str()).collect();
        let _ = writeln!(out, "{},{},{}", k + 1, sig9(cut.violation), members.join(" "));
    }
    out
}
