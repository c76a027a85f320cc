use std::collections::HashMap;
use std::fmt;

use super::LpError;

/// Index of a column in an [`LpModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

/// Index of a row in an [`LpModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<(VarId, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    /// Row activity bounds `[lo, hi]` implied by the relation.
    pub fn activity_bounds(&self) -> (f64, f64) {
        match self.relation {
            Relation::Le => (f64::NEG_INFINITY, self.rhs),
            Relation::Eq => (self.rhs, self.rhs),
            Relation::Ge => (self.rhs, f64::INFINITY),
        }
    }

    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, a)| a * values[v.0]).sum()
    }

    /// Amount by which `values` violate this row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let act = self.activity(values);
        let (lo, hi) = self.activity_bounds();
        (lo - act).max(act - hi).max(0.0)
    }
}

/// A minimization LP over bounded columns and sparse rows.
///
/// Models are plain values: cloning is cheap enough for the sizes this crate
/// builds, and the bound-editing helpers return new models instead of
/// mutating shared state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpModel {
    vars: Vec<Variable>,
    rows: Vec<Constraint>,
    names: HashMap<String, VarId>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        objective: f64,
    ) -> Result<VarId, LpError> {
        let name = name.into();
        if lower.is_nan() || upper.is_nan() || lower > upper || lower == f64::INFINITY || upper == f64::NEG_INFINITY {
            return Err(LpError::InvalidBounds { name, lower, upper });
        }
        if !objective.is_finite() {
            return Err(LpError::NonFinite(format!("objective of {name}")));
        }
        if self.names.contains_key(&name) {
            return Err(LpError::DuplicateName(name));
        }
        let id = VarId(self.vars.len());
        self.names.insert(name.clone(), id);
        self.vars.push(Variable { name, lower, upper, objective });
        Ok(id)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(VarId, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> Result<RowId, LpError> {
        let name = name.into();
        if !rhs.is_finite() {
            return Err(LpError::NonFinite(format!("rhs of {name}")));
        }
        for &(v, a) in &coeffs {
            if v.0 >= self.vars.len() {
                return Err(LpError::UnknownColumn(v.0));
            }
            if !a.is_finite() {
                return Err(LpError::NonFinite(format!("coefficient in {name}")));
            }
        }
        let id = RowId(self.rows.len());
        self.rows.push(Constraint { name, coeffs, relation, rhs });
        Ok(id)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs.len()).sum()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.names.get(name).copied()
    }

    pub fn set_objective(&mut self, id: VarId, coeff: f64) {
        self.vars[id.0].objective = coeff;
    }

    /// Overwrites both bounds of a column in place.
    pub fn set_bounds(&mut self, id: VarId, lower: f64, upper: f64) -> Result<(), LpError> {
        let var = &mut self.vars[id.0];
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(LpError::InvalidBounds { name: var.name.clone(), lower, upper });
        }
        var.lower = lower;
        var.upper = upper;
        Ok(())
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.vars.iter().zip(values).map(|(v, x)| v.objective * x).sum()
    }

    /// Largest bound or row violation of `values` (absolute).
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let bound = self
            .vars
            .iter()
            .zip(values)
            .map(|(v, &x)| (v.lower - x).max(x - v.upper).max(0.0))
            .fold(0.0, f64::max);
        let rows = self.rows.iter().map(|r| r.violation(values)).fold(0.0, f64::max);
        bound.max(rows)
    }

    /// Checks the structural invariants a solver relies on.
    pub fn validate(&self) -> Result<(), LpError> {
        for v in &self.vars {
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(LpError::InvalidBounds { name: v.name.clone(), lower: v.lower, upper: v.upper });
            }
        }
        for r in &self.rows {
            if let Some(&(v, _)) = r.coeffs.iter().find(|(v, _)| v.0 >= self.vars.len()) {
                return Err(LpError::UnknownColumn(v.0));
            }
        }
        Ok(())
    }
}

/// Returns a copy of `model` with `name` pinned to `value` (`lo = hi = value`).
pub fn fix_variable(model: &LpModel, name: &str, value: f64) -> Result<LpModel, LpError> {
    let id = model.var_id(name).ok_or_else(|| LpError::UnknownName(name.to_string()))?;
    let var = model.var(id);
    if !(var.lower <= value && value <= var.upper) {
        return Err(LpError::FixOutOfBounds {
            name: name.to_string(),
            value,
            lower: var.lower,
            upper: var.upper,
        });
    }
    let mut out = model.clone();
    out.set_bounds(id, value, value)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let mut m = LpModel::new();
        m.add_variable("x", 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(m.add_variable("x", 0.0, 1.0, 1.0), Err(LpError::DuplicateName(_))));
    }

    #[test]
    fn inverted_bounds_rejected() {
        let mut m = LpModel::new();
        assert!(matches!(m.add_variable("x", 2.0, 1.0, 0.0), Err(LpError::InvalidBounds { .. })));
    }

    #[test]
    fn fix_leaves_original_untouched() {
        let mut m = LpModel::new();
        m.add_variable("x", 0.0, 10.0, 1.0).unwrap();
        let fixed = fix_variable(&m, "x", 4.0).unwrap();
        assert_eq!(m.vars()[0].upper, 10.0);
        assert_eq!(fixed.vars()[0].lower, 4.0);
        assert_eq!(fixed.vars()[0].upper, 4.0);
        // rebuilding the bounds gives the original back
        let mut rebuilt = fixed.clone();
        rebuilt.set_bounds(VarId(0), 0.0, 10.0).unwrap();
        assert_eq!(rebuilt, m);
    }

    #[test]
    fn fix_errors() {
        let mut m = LpModel::new();
        m.add_variable("x", 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(fix_variable(&m, "nope", 0.0), Err(LpError::UnknownName(_))));
        assert!(matches!(fix_variable(&m, "x", 2.0), Err(LpError::FixOutOfBounds { .. })));
    }
}
