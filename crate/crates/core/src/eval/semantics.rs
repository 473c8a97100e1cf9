use super::{GroundProgram, Interpretation};
use crate::syntax::{BodyElement, Rule};

/// B+(r) ⊆ I and B-(r) ∩ I = ∅. `r` must be ground and builtin-free.
pub fn body_true(r: &Rule, i: &Interpretation) -> bool {
    r.body.iter().all(|e| match e {
        BodyElement::Literal(l) => i.contains(&l.atom) != l.negated,
        BodyElement::Builtin(_) => panic!("body_true expects a ground program"),
    })
}

fn head_true(r: &Rule, i: &Interpretation) -> bool {
    r.head.iter().any(|a| i.contains(a))
}

pub fn is_model(i: &Interpretation, gp: &GroundProgram) -> bool {
    gp.rules.iter().all(|r| head_true(r, i) || !body_true(r, i))
}

/// The rules of `gp` whose body is true w.r.t. `i`, untouched. Weak
/// constraints are not part of a reduct.
pub fn reduct(gp: &GroundProgram, i: &Interpretation) -> GroundProgram {
    GroundProgram {
        rules: gp
            .rules
            .iter()
            .filter(|r| body_true(r, i))
            .cloned()
            .collect(),
        weak_constraints: Vec::new(),
    }
}
