use std::fmt::Write;

use super::{LpModel, Relation};

fn term(out: &mut String, coeff: f64, name: &str, first: bool) {
    if first {
        if coeff < 0.0 {
            let _ = write!(out, "- {} {}", -coeff, name);
        } else {
            let _ = write!(out, "{coeff} {name}");
        }
    } else if coeff < 0.0 {
        let _ = write!(out, " - {} {}", -coeff, name);
    } else {
        let _ = write!(out, " + {coeff} {name}");
    }
}

/// Renders `model` in the CPLEX-style LP text layout understood by most
/// external solvers. `binaries` lists columns to emit in a `Binaries` section.
pub fn write_lp(model: &LpModel, binaries: &[&str]) -> String {
    let mut out = String::from("\\ uavrelay model\nMinimize\n obj: ");
    let mut first = true;
    for v in model.vars().iter().filter(|v| v.objective != 0.0) {
        term(&mut out, v.objective, &v.name, first);
        first = false;
    }
    if first {
        out.push('0');
    }
    out.push_str("\nSubject To\n");
    for (i, row) in model.rows().iter().enumerate() {
        let _ = write!(out, " r{i}: ");
        let mut first = true;
        for &(v, a) in &row.coeffs {
            term(&mut out, a, &model.var(v).name, first);
            first = false;
        }
        if first {
            out.push_str("0 x_dummy");
        }
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        let _ = writeln!(out, " {rel} {}", row.rhs);
    }
    out.push_str("Bounds\n");
    for v in model.vars() {
        match (v.lower.is_finite(), v.upper.is_finite()) {
            (true, true) if v.lower == v.upper => {
                let _ = writeln!(out, " {} = {}", v.name, v.lower);
            }
            (true, true) => {
                let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
            }
            (true, false) => {
                let _ = writeln!(out, " {} >= {}", v.name, v.lower);
            }
            (false, true) => {
                let _ = writeln!(out, " -inf <= {} <= {}", v.name, v.upper);
            }
            (false, false) => {
                let _ = writeln!(out, " {} free", v.name);
            }
        }
    }
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for b in binaries {
            let _ = writeln!(out, " {b}");
        }
    }
    out.push_str("End\n");
    out
}
