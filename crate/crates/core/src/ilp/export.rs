//! CPLEX LP-format writer.

use std::fmt::Write as _;

use super::{IlpModel, Sense, VarKind};

const TERMS_PER_LINE: usize = 8;

/// Renders the model as LP-format text. Rows appear in construction order,
/// numbers in shortest round-trip form, so equal models give equal bytes.
pub fn export_model(model: &IlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ gridmend repair model: horizon {}, crews {}, big-M {}",
        model.horizon, model.crews, model.big_m
    );
    out.push_str("Minimize\n obj:");
    let mut objective = render_terms(model, &model.objective);
    if model.objective_constant != 0.0 || model.objective.is_empty() {
        push_term(&mut objective, model.objective_constant, None);
    }
    write_wrapped(&mut out, &objective);
    out.push('\n');

    out.push_str("Subject To\n");
    for row in &model.rows {
        let _ = write!(out, " {}:", row.name);
        let mut pieces = render_terms(model, &row.terms);
        pieces.push(format!("{} {}", row.sense.symbol(), number(row.rhs)));
        write_wrapped(&mut out, &pieces);
        out.push('\n');
    }

    out.push_str("Bounds\n");
    for var in model.vars.iter().filter(|v| v.kind == VarKind::Free) {
        let _ = writeln!(out, " {} free", var.name);
    }

    out.push_str("Binaries\n");
    let binaries: Vec<String> = model
        .vars
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.clone())
        .collect();
    for chunk in binaries.chunks(TERMS_PER_LINE) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
    out.push_str("End\n");
    out
}

fn render_terms(model: &IlpModel, terms: &[(usize, f64)]) -> Vec<String> {
    let mut pieces = Vec::with_capacity(terms.len());
    for &(var, coef) in terms {
        push_term(&mut pieces, coef, Some(&model.vars[var].name));
    }
    pieces
}

fn push_term(pieces: &mut Vec<String>, coef: f64, name: Option<&str>) {
    let sign = if coef < 0.0 { "-" } else { "+" };
    let magnitude = coef.abs();
    let piece = match name {
        Some(name) if magnitude == 1.0 => format!("{sign} {name}"),
        Some(name) => format!("{sign} {} {name}", number(magnitude)),
        None => format!("{sign} {}", number(magnitude)),
    };
    pieces.push(piece);
}

fn write_wrapped(out: &mut String, pieces: &[String]) {
    for (i, piece) in pieces.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        out.push(' ');
        out.push_str(piece);
    }
}

fn number(x: f64) -> String {
    // Display for f64 is the shortest string that parses back to `x`
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

impl Sense {
    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "<=" | "=<" | "<" => Some(Sense::Le),
            ">=" | "=>" | ">" => Some(Sense::Ge),
            "=" => Some(Sense::Eq),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::build_ilp;
    use crate::network::Network;

    const GOLDEN: &str = "\
\\ gridmend repair model: horizon 2, crews 1, big-M 1
Minimize
 obj: - u_b_1 - u_b_2 + 2
Subject To
 init_y_L1: + y_L1_1 = 0
 source_u_a_1: + u_a_1 = 1
 source_u_a_2: + u_a_2 = 1
 crews_1: + x_L1_1 <= 1
 crews_2: + x_L1_2 <= 1
 repair_L1_1: + 2 y_L1_1 <= 0
 repair_L1_2: + 2 y_L1_2 - x_L1_1 <= 0
 source_flow_1: + f_L1_1 >= 0
 source_flow_2: + f_L1_2 >= 0
 flow_ub_L1_1: + f_L1_1 - y_L1_1 <= 0
 flow_lb_L1_1: + f_L1_1 + y_L1_1 >= 0
 flow_ub_L1_2: + f_L1_2 - y_L1_2 <= 0
 flow_lb_L1_2: + f_L1_2 + y_L1_2 >= 0
 energize_b_1: + u_b_1 - f_L1_1 <= 0
 energize_b_2: + u_b_2 - f_L1_2 <= 0
 srtp_b: + u_b_1 = 0
Bounds
 f_L1_1 free
 f_L1_2 free
Binaries
 x_L1_1 x_L1_2 y_L1_1 y_L1_2 u_a_1 u_a_2 u_b_1 u_b_2
End
";

    fn tiny() -> Network<f64> {
        Network::parse("node a 0 source\nnode b 1\nedge L1 a b damaged 2\n").unwrap()
    }

    #[test]
    fn smallest_model_golden() {
        let model = build_ilp(&tiny(), 1, None).unwrap();
        assert_eq!(export_model(&model), GOLDEN);
    }

    #[test]
    fn export_is_deterministic() {
        let a = export_model(&build_ilp(&tiny(), 1, None).unwrap());
        let b = export_model(&build_ilp(&tiny(), 1, None).unwrap());
        assert_eq!(a.as_bytes(), b.as_bytes());
    }

    #[test]
    fn long_rows_wrap() {
        let text = "node s 0 source\n".to_string()
            + &(1..=10).map(|i| format!("node n{i} 1\nedge l{i} s n{i} damaged 1\n")).collect::<String>();
        let model = build_ilp(&Network::<f64>::parse(&text).unwrap(), 2, None).unwrap();
        let lp = export_model(&model);
        let crews = lp.lines().position(|l| l.starts_with(" crews_1:")).unwrap();
        let next = lp.lines().nth(crews + 1).unwrap();
        assert!(next.starts_with("   "));
        assert!(next.trim_end().ends_with("<= 2"));
    }

    #[test]
    fn numbers_round_trip() {
        assert_eq!(number(0.1), "0.1");
        assert_eq!(number(5.0), "5");
        assert_eq!(number(-0.0), "0");
        assert_eq!(number(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }
}
