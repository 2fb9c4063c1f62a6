//! Minimal LP interface used by the cutting-plane loop.

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Solution, Variable};

use super::LpError;

/// Minimisation LP over a fixed set of bounded variables, grown one
/// `>=` row at a time.
pub trait LpEngine {
    /// Adds `sum coef * x >= rhs`.
    fn add_constraint(&mut self, terms: &[(usize, f64)], rhs: f64) -> Result<(), LpError>;
    fn solve(&mut self) -> Result<(), LpError>;
    fn value(&self, var: usize) -> f64;
    fn objective(&self) -> f64;
}

enum State {
    Building(Problem),
    Solved(Box<Solution>),
    Poisoned,
}

/// [`LpEngine`] backed by the `minilp` simplex; rows added after the first
/// solve are handled by warm-started dual simplex.
pub struct MinilpEngine {
    vars: Vec<Variable>,
    state: State,
}

impl MinilpEngine {
    /// One variable per objective coefficient, each with bounds `[lower, +inf)`.
    pub fn new(objective: &[f64], lower: &[f64]) -> Self {
        let mut problem = Problem::new(OptimizationDirection::Minimize);
        let vars = objective
            .iter()
            .zip(lower)
            .map(|(&c, &lb)| problem.add_var(c, (lb, f64::INFINITY)))
            .collect();
        Self {
            vars,
            state: State::Building(problem),
        }
    }

    fn expr(&self, terms: &[(usize, f64)]) -> LinearExpr {
        let mut expr = LinearExpr::empty();
        for &(var, coef) in terms {
            expr.add(self.vars[var], coef);
        }
        expr
    }
}

impl LpEngine for MinilpEngine {
    fn add_constraint(&mut self, terms: &[(usize, f64)], rhs: f64) -> Result<(), LpError> {
        let expr = self.expr(terms);
        match std::mem::replace(&mut self.state, State::Poisoned) {
            State::Building(mut problem) => {
                problem.add_constraint(expr, ComparisonOp::Ge, rhs);
                self.state = State::Building(problem);
            }
            State::Solved(solution) => {
                let solution = (*solution)
                    .add_constraint(expr, ComparisonOp::Ge, rhs)
                    .map_err(|e| LpError::Engine(e.to_string()))?;
                self.state = State::Solved(Box::new(solution));
            }
            State::Poisoned => return Err(LpError::Engine("engine left in failed state".into())),
        }
        Ok(())
    }

    fn solve(&mut self) -> Result<(), LpError> {
        match std::mem::replace(&mut self.state, State::Poisoned) {
            State::Building(problem) => {
                let solution = problem.solve().map_err(|e| LpError::Engine(e.to_string()))?;
                self.state = State::Solved(Box::new(solution));
                Ok(())
            }
            solved @ State::Solved(_) => {
                self.state = solved;
                Ok(())
            }
            State::Poisoned => Err(LpError::Engine("engine left in failed state".into())),
        }
    }

    fn value(&self, var: usize) -> f64 {
        match &self.state {
            State::Solved(solution) => *solution.var_value(self.vars[var]),
            _ => f64::NAN,
        }
    }

    fn objective(&self) -> f64 {
        match &self.state {
            State::Solved(solution) => solution.objective(),
            _ => f64::NAN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_variable_lp_with_late_row() {
        let mut lp = MinilpEngine::new(&[1.0, 1.0], &[2.0, 2.0]);
        lp.solve().unwrap();
        assert_eq!(lp.objective(), 4.0);
        lp.add_constraint(&[(0, 2.0), (1, 2.0)], 12.0).unwrap();
        lp.solve().unwrap();
        assert!((lp.objective() - 6.0).abs() < 1e-9);
        assert!((2.0 * lp.value(0) + 2.0 * lp.value(1) - 12.0).abs() < 1e-9);
    }
}
