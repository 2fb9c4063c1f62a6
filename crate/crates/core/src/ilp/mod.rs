//! Time-indexed integer programme, its LP-format export, and the exhaustive
//! search used as ground truth on small instances.
//!
//! Period `t` (1-based) covers the interval `[t - 1, t)`. A line finished at
//! time `C` has `y = 1` from period `C + 1` on, so a node energized at `E`
//! is dark for exactly `E` periods and the objective equals the harm.

mod exact;
mod export;

use std::collections::BTreeMap;

use thiserror::Error;

pub use exact::{exact_enum, exact_enum_with_cap, EnumError, ExactResult, DEFAULT_ENUM_CAP};
pub use export::export_model;

use crate::network::Network;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IlpError {
    #[error("need at least one crew")]
    NoCrews,
    #[error("line {line}: repair time {value} is not an integer")]
    NonIntegerRepairTime { line: String, value: f64 },
    #[error("horizon {horizon} is shorter than the longest repair time {longest}")]
    HorizonTooShort { horizon: usize, longest: usize },
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("completion time of line {line} is not a nonnegative integer")]
    NonIntegerTime { line: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    /// Free continuous variable.
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Var {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// One named linear row `sum coef * var  sense  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Network data the model was built from, in network order.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelLine {
    pub id: String,
    /// Endpoint nearer the source.
    pub from: usize,
    pub to: usize,
    /// Integer repair time, or `None` when intact.
    pub repair_time: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlpModel {
    pub horizon: usize,
    pub crews: usize,
    pub big_m: f64,
    pub node_ids: Vec<String>,
    pub node_weights: Vec<f64>,
    pub source: usize,
    pub lines: Vec<ModelLine>,
    pub vars: Vec<Var>,
    pub rows: Vec<Row>,
    /// Minimised: `objective_constant + sum coef * var`.
    pub objective: Vec<(usize, f64)>,
    pub objective_constant: f64,
    /// Shortest repair-time path from the source, per node.
    pub srtp: Vec<usize>,
    damaged: Vec<usize>,
    x_base: usize,
    y_base: usize,
    u_base: usize,
    f_base: usize,
}

impl IlpModel {
    fn slot(&self, base: usize, item: usize, t: usize) -> usize {
        base + item * self.horizon + (t - 1)
    }

    /// `x` variable of the `k`-th damaged line at period `t`.
    pub fn x(&self, k: usize, t: usize) -> usize {
        self.slot(self.x_base, k, t)
    }

    pub fn y(&self, line: usize, t: usize) -> usize {
        self.slot(self.y_base, line, t)
    }

    pub fn u(&self, node: usize, t: usize) -> usize {
        self.slot(self.u_base, node, t)
    }

    pub fn f(&self, line: usize, t: usize) -> usize {
        self.slot(self.f_base, line, t)
    }

    /// Network indices of the damaged lines; position `k` here is job `k`.
    pub fn damaged_lines(&self) -> &[usize] {
        &self.damaged
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective_constant + self.objective.iter().map(|&(v, c)| c * values[v]).sum::<f64>()
    }

    /// Names of rows violated by more than `tol`, plus binaries off {0, 1}.
    pub fn violations(&self, values: &[f64], tol: f64) -> Result<Vec<String>, IlpError> {
        if values.len() != self.vars.len() {
            return Err(IlpError::WrongLength {
                expected: self.vars.len(),
                got: values.len(),
            });
        }
        let mut bad = Vec::new();
        for (var, &v) in self.vars.iter().zip(values) {
            if var.kind == VarKind::Binary && v.abs() > tol && (v - 1.0).abs() > tol {
                bad.push(var.name.clone());
            }
        }
        for row in &self.rows {
            let lhs: f64 = row.terms.iter().map(|&(v, c)| c * values[v]).sum();
            let ok = match row.sense {
                Sense::Le => lhs <= row.rhs + tol,
                Sense::Ge => lhs >= row.rhs - tol,
                Sense::Eq => (lhs - row.rhs).abs() <= tol,
            };
            if !ok {
                bad.push(row.name.clone());
            }
        }
        Ok(bad)
    }

    /// Variable values implied by integer completion times of the damaged
    /// lines (indexed like jobs). Flows carry one unit per energized node
    /// downstream of each line.
    pub fn implied_values(&self, completions: &[f64]) -> Result<Vec<f64>, IlpError> {
        if completions.len() != self.damaged.len() {
            return Err(IlpError::WrongLength {
                expected: self.damaged.len(),
                got: completions.len(),
            });
        }
        let mut done = vec![0usize; self.lines.len()];
        for (k, &c) in completions.iter().enumerate() {
            let line = &self.lines[self.damaged[k]];
            if c < 0.0 || c.fract() != 0.0 {
                return Err(IlpError::NonIntegerTime { line: line.id.clone() });
            }
            done[self.damaged[k]] = c as usize;
        }

        // node energization = latest completion on the source path
        let n = self.node_ids.len();
        let mut energized = vec![0usize; n];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (l, line) in self.lines.iter().enumerate() {
            children[line.from].push(l);
        }
        let mut order = vec![self.source];
        let mut cursor = 0;
        while cursor < order.len() {
            let node = order[cursor];
            cursor += 1;
            for &l in &children[node] {
                let to = self.lines[l].to;
                energized[to] = energized[node].max(done[l]);
                order.push(to);
            }
        }

        let mut values = vec![0.0; self.vars.len()];
        for t in 1..=self.horizon {
            for (k, &l) in self.damaged.iter().enumerate() {
                let p = self.lines[l].repair_time.unwrap_or(0);
                if done[l] >= t && done[l] < t + p {
                    values[self.x(k, t)] = 1.0;
                }
            }
            for (l, line) in self.lines.iter().enumerate() {
                if line.repair_time.is_none() || t > done[l] {
                    values[self.y(l, t)] = 1.0;
                }
            }
            let mut lit = vec![0.0; n];
            for i in 0..n {
                if t > energized[i] {
                    values[self.u(i, t)] = 1.0;
                    lit[i] = 1.0;
                }
            }
            // subtree sums, leaves first
            let mut below = lit;
            for &node in order.iter().rev() {
                for &l in &children[node] {
                    let to = self.lines[l].to;
                    values[self.f(l, t)] = below[to];
                    below[node] += below[to];
                }
            }
        }
        Ok(values)
    }

    /// Repair order read off a solution: damaged lines sorted by the period
    /// their far end is energized, then by the period the repair starts,
    /// then by job index. The model allows split repairs, so start order
    /// alone can mislead; energization is what the objective pays for.
    /// A repair completing exactly at the horizon earns nothing inside it,
    /// so an optimal solution may leave it unfinished; such lines go last.
    pub fn priority_from_solution(&self, values: &[f64]) -> Result<Vec<usize>, IlpError> {
        if values.len() != self.vars.len() {
            return Err(IlpError::WrongLength {
                expected: self.vars.len(),
                got: values.len(),
            });
        }
        let late = self.horizon + 1;
        let mut done = vec![0; self.lines.len()];
        let mut start = vec![late; self.lines.len()];
        for (k, &l) in self.damaged.iter().enumerate() {
            let p = self.lines[l].repair_time.unwrap_or(0);
            done[l] = late;
            let mut work = 0;
            for t in 1..=self.horizon {
                if values[self.x(k, t)] > 0.5 {
                    if work == 0 {
                        start[l] = t;
                    }
                    work += 1;
                    if work == p {
                        done[l] = t;
                        break;
                    }
                }
            }
        }
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); self.node_ids.len()];
        for (l, line) in self.lines.iter().enumerate() {
            children[line.from].push(l);
        }
        let mut energized = vec![0; self.lines.len()];
        let mut stack: Vec<(usize, usize)> = vec![(self.source, 0)];
        while let Some((node, e)) = stack.pop() {
            for &l in &children[node] {
                energized[l] = e.max(done[l]);
                stack.push((self.lines[l].to, energized[l]));
            }
        }
        let mut keys: Vec<(usize, usize, usize)> =
            self.damaged.iter().enumerate().map(|(k, &l)| (energized[l], start[l], k)).collect();
        keys.sort_unstable();
        Ok(keys.into_iter().map(|(_, _, k)| k).collect())
    }
}

/// Builds the time-indexed model. `horizon` defaults to the total repair
/// time, which no non-delay schedule can exceed.
pub fn build_ilp<T: Scalar>(net: &Network<T>, crews: usize, horizon: Option<usize>) -> Result<IlpModel, IlpError> {
    if crews == 0 {
        return Err(IlpError::NoCrews);
    }
    let orientation = net.orientation();
    let mut lines = Vec::with_capacity(net.lines().len());
    for (line, &(from, to)) in net.lines().iter().zip(&orientation) {
        let repair_time = match line.repair_time() {
            None => None,
            Some(p) if p.is_integral() => Some(p.as_f64().round() as usize),
            Some(p) => {
                return Err(IlpError::NonIntegerRepairTime {
                    line: line.id.clone(),
                    value: p.as_f64(),
                })
            }
        };
        lines.push(ModelLine { id: line.id.clone(), from, to, repair_time });
    }
    let damaged: Vec<usize> = (0..lines.len()).filter(|&l| lines[l].repair_time.is_some()).collect();
    let total: usize = lines.iter().filter_map(|l| l.repair_time).sum();
    let longest = lines.iter().filter_map(|l| l.repair_time).max().unwrap_or(0);
    let horizon = horizon.unwrap_or(total.max(1));
    if horizon == 0 || horizon < longest {
        return Err(IlpError::HorizonTooShort { horizon, longest });
    }

    let node_ids: Vec<String> = net.nodes().iter().map(|n| n.id.clone()).collect();
    let node_weights: Vec<f64> = net.nodes().iter().map(|n| n.weight.as_f64()).collect();
    let n = node_ids.len();
    let source = net.source();
    let big_m = (n - 1) as f64;
    let tt = horizon;

    let mut vars = Vec::with_capacity(tt * (damaged.len() + 2 * lines.len() + n));
    let mut family = |prefix: &str, ids: &mut dyn Iterator<Item = &str>, kind: VarKind| {
        let base = vars.len();
        for id in ids {
            for t in 1..=tt {
                vars.push(Var { name: format!("{prefix}_{id}_{t}"), kind });
            }
        }
        base
    };
    let x_base = family("x", &mut damaged.iter().map(|&l| lines[l].id.as_str()), VarKind::Binary);
    let y_base = family("y", &mut lines.iter().map(|l| l.id.as_str()), VarKind::Binary);
    let u_base = family("u", &mut node_ids.iter().map(String::as_str), VarKind::Binary);
    let f_base = family("f", &mut lines.iter().map(|l| l.id.as_str()), VarKind::Free);

    let srtp = shortest_repair_paths(n, source, &lines);
    let mut model = IlpModel {
        horizon,
        crews,
        big_m,
        node_ids,
        node_weights,
        source,
        lines,
        vars,
        rows: Vec::new(),
        objective: Vec::new(),
        objective_constant: 0.0,
        srtp,
        damaged,
        x_base,
        y_base,
        u_base,
        f_base,
    };
    add_rows(&mut model);

    let total_weight: f64 = model.node_weights.iter().sum();
    model.objective_constant = total_weight * tt as f64;
    let mut objective = Vec::new();
    for i in 0..n {
        let w = model.node_weights[i];
        if w != 0.0 {
            for t in 1..=tt {
                objective.push((model.u(i, t), -w));
            }
        }
    }
    model.objective = objective;
    Ok(model)
}

fn add_rows(model: &mut IlpModel) {
    let tt = model.horizon;
    let m = model.crews as f64;
    let big_m = model.big_m;
    let mut rows = Vec::new();
    let row = |name: String, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64| Row { name, terms, sense, rhs };

    for &l in &model.damaged {
        rows.push(row(format!("init_y_{}", model.lines[l].id), vec![(model.y(l, 1), 1.0)], Sense::Eq, 0.0));
    }
    for (l, line) in model.lines.iter().enumerate() {
        if line.repair_time.is_none() {
            for t in 1..=tt {
                rows.push(row(format!("intact_y_{}_{t}", line.id), vec![(model.y(l, t), 1.0)], Sense::Eq, 1.0));
            }
        }
    }
    let s = model.source;
    for t in 1..=tt {
        rows.push(row(format!("source_u_{}_{t}", model.node_ids[s]), vec![(model.u(s, t), 1.0)], Sense::Eq, 1.0));
    }
    if !model.damaged.is_empty() {
        for t in 1..=tt {
            let terms = (0..model.damaged.len()).map(|k| (model.x(k, t), 1.0)).collect();
            rows.push(row(format!("crews_{t}"), terms, Sense::Le, m));
        }
    }
    for (k, &l) in model.damaged.iter().enumerate() {
        let p = model.lines[l].repair_time.unwrap_or(0) as f64;
        for t in 1..=tt {
            let mut terms = vec![(model.y(l, t), p)];
            terms.extend((1..t).map(|tau| (model.x(k, tau), -1.0)));
            rows.push(row(format!("repair_{}_{t}", model.lines[l].id), terms, Sense::Le, 0.0));
        }
    }
    let out_of_source: Vec<usize> = (0..model.lines.len()).filter(|&l| model.lines[l].from == s).collect();
    if !out_of_source.is_empty() {
        for t in 1..=tt {
            let terms = out_of_source.iter().map(|&l| (model.f(l, t), 1.0)).collect();
            rows.push(row(format!("source_flow_{t}"), terms, Sense::Ge, 0.0));
        }
    }
    for (l, line) in model.lines.iter().enumerate() {
        for t in 1..=tt {
            let (f, y) = (model.f(l, t), model.y(l, t));
            rows.push(row(format!("flow_ub_{}_{t}", line.id), vec![(f, 1.0), (y, -big_m)], Sense::Le, 0.0));
            rows.push(row(format!("flow_lb_{}_{t}", line.id), vec![(f, 1.0), (y, big_m)], Sense::Ge, 0.0));
        }
    }
    let mut inflow: Vec<Vec<usize>> = vec![Vec::new(); model.node_ids.len()];
    let mut outflow: Vec<Vec<usize>> = vec![Vec::new(); model.node_ids.len()];
    for (l, line) in model.lines.iter().enumerate() {
        inflow[line.to].push(l);
        outflow[line.from].push(l);
    }
    for i in (0..model.node_ids.len()).filter(|&i| i != s) {
        for t in 1..=tt {
            let mut terms = vec![(model.u(i, t), 1.0)];
            terms.extend(inflow[i].iter().map(|&l| (model.f(l, t), -1.0)));
            terms.extend(outflow[i].iter().map(|&l| (model.f(l, t), 1.0)));
            rows.push(row(format!("energize_{}_{t}", model.node_ids[i]), terms, Sense::Le, 0.0));
        }
    }
    for i in 0..model.node_ids.len() {
        let last = (model.srtp[i] / model.crews).saturating_sub(1).min(tt);
        if last >= 1 {
            let terms = (1..=last).map(|t| (model.u(i, t), 1.0)).collect();
            rows.push(row(format!("srtp_{}", model.node_ids[i]), terms, Sense::Eq, 0.0));
        }
    }
    model.rows = rows;
}

/// Sum of damaged repair times on the (unique) path from the source.
fn shortest_repair_paths(n: usize, source: usize, lines: &[ModelLine]) -> Vec<usize> {
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (l, line) in lines.iter().enumerate() {
        children.entry(line.from).or_default().push(l);
    }
    let mut dist = vec![0; n];
    let mut stack = vec![source];
    while let Some(node) = stack.pop() {
        for &l in children.get(&node).map(Vec::as_slice).unwrap_or(&[]) {
            let line = &lines[l];
            dist[line.to] = dist[node] + line.repair_time.unwrap_or(0);
            stack.push(line.to);
        }
    }
    dist
}
