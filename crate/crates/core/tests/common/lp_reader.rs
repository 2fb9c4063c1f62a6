//! Reader for the LP-format subset the exporter writes, feeding the
//! `microlp` branch-and-bound solver. Test-only: the library never solves
//! its integer programmes itself.

use std::collections::HashMap;

use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, SolutionStatus};

/// `(terms, sense, rhs)`.
pub type LpRow = (Vec<(usize, f64)>, ComparisonOp, f64);

#[derive(Debug, Default)]
pub struct LpFile {
    pub names: Vec<String>,
    index: HashMap<String, usize>,
    pub objective: Vec<(usize, f64)>,
    pub constant: f64,
    pub rows: Vec<LpRow>,
    pub free: Vec<bool>,
    pub binary: Vec<bool>,
}

impl LpFile {
    fn var(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.free.push(false);
        self.binary.push(false);
        i
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    Objective,
    Rows,
    Bounds,
    Binaries,
}

pub fn parse(text: &str) -> LpFile {
    let mut lp = LpFile::default();
    let mut section = None;
    // statement tokens gathered until the next label or section
    let mut pending: Vec<String> = Vec::new();

    let flush = |lp: &mut LpFile, section: Option<Section>, tokens: &mut Vec<String>| {
        if tokens.is_empty() {
            return;
        }
        match section {
            Some(Section::Objective) => {
                let (terms, constant, _) = parse_terms(lp, tokens);
                lp.objective = terms;
                lp.constant = constant;
            }
            Some(Section::Rows) => {
                let (terms, _, rest) = parse_terms(lp, tokens);
                let op = match rest[0].as_str() {
                    "<=" => ComparisonOp::Le,
                    ">=" => ComparisonOp::Ge,
                    "=" => ComparisonOp::Eq,
                    other => panic!("unknown sense {other}"),
                };
                let rhs: f64 = rest[1].parse().expect("numeric rhs");
                lp.rows.push((terms, op, rhs));
            }
            _ => {}
        }
        tokens.clear();
    };

    for line in text.lines() {
        if line.starts_with('\\') {
            continue;
        }
        let trimmed = line.trim();
        let next = match trimmed {
            "Minimize" => Some(Section::Objective),
            "Subject To" => Some(Section::Rows),
            "Bounds" => Some(Section::Bounds),
            "Binaries" => Some(Section::Binaries),
            "End" => None,
            _ => {
                match section {
                    Some(Section::Bounds) => {
                        let parts: Vec<&str> = trimmed.split_whitespace().collect();
                        assert_eq!(parts.get(1), Some(&"free"), "only free bounds are written");
                        let v = lp.var(parts[0]);
                        lp.free[v] = true;
                    }
                    Some(Section::Binaries) => {
                        for name in trimmed.split_whitespace() {
                            let v = lp.var(name);
                            lp.binary[v] = true;
                        }
                    }
                    _ => {
                        for token in trimmed.split_whitespace() {
                            if token.ends_with(':') {
                                flush(&mut lp, section, &mut pending);
                            } else {
                                pending.push(token.to_string());
                            }
                        }
                    }
                }
                continue;
            }
        };
        flush(&mut lp, section, &mut pending);
        section = next;
    }
    flush(&mut lp, section, &mut pending);
    lp
}

/// Parses `(+|-) [coef] name` and `(+|-) constant` pieces up to a sense
/// token; returns the terms, the constant and the remaining tokens.
fn parse_terms(lp: &mut LpFile, tokens: &[String]) -> (Vec<(usize, f64)>, f64, Vec<String>) {
    let mut terms = Vec::new();
    let mut constant = 0.0;
    let mut i = 0;
    while i < tokens.len() {
        let sign = match tokens[i].as_str() {
            "+" => 1.0,
            "-" => -1.0,
            _ => break,
        };
        i += 1;
        let token = &tokens[i];
        if let Ok(number) = token.parse::<f64>() {
            let is_coef = tokens
                .get(i + 1)
                .is_some_and(|t| !matches!(t.as_str(), "+" | "-" | "<=" | ">=" | "="));
            if is_coef {
                let v = lp.var(&tokens[i + 1]);
                terms.push((v, sign * number));
                i += 2;
            } else {
                constant += sign * number;
                i += 1;
            }
        } else {
            let v = lp.var(token);
            terms.push((v, sign));
            i += 1;
        }
    }
    (terms, constant, tokens[i..].to_vec())
}

pub struct MipResult {
    pub objective: f64,
    pub values: Vec<f64>,
}

/// Solves the parsed model to proven optimality with `microlp`.
pub fn solve(lp: &LpFile) -> MipResult {
    let mut obj = vec![0.0; lp.names.len()];
    for &(v, c) in &lp.objective {
        obj[v] += c;
    }
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..lp.names.len())
        .map(|v| {
            if lp.binary[v] {
                problem.add_binary_var(obj[v])
            } else if lp.free[v] {
                problem.add_var(obj[v], (f64::NEG_INFINITY, f64::INFINITY))
            } else {
                problem.add_var(obj[v], (0.0, f64::INFINITY))
            }
        })
        .collect();
    for (terms, op, rhs) in &lp.rows {
        let mut expr = LinearExpr::empty();
        for &(v, c) in terms {
            expr.add(vars[v], c);
        }
        problem.add_constraint(expr, *op, *rhs);
    }
    let solution = problem
        .solve()
        .expect("model is feasible")
        .into_solution()
        .expect("solve runs to completion");
    assert_eq!(solution.status(), SolutionStatus::Optimal);
    MipResult {
        objective: solution.objective() + lp.constant,
        values: vars.iter().map(|&v| solution.var_value(v)).collect(),
    }
}
