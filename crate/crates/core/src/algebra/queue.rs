//! The recursive queue specification over three ports.

use std::collections::BTreeSet;

use super::term::{accept, encap, hide, merge, prefix, sum, var, CommAction, Payload, RecursiveSpec, Term};
use crate::error::{Error, Result};
use crate::symbol::Symbol;

pub const PORTS: [&str; 3] = ["i", "l", "o"];

/// Name of the equation with input port `x` and output port `y`.
pub fn queue_var(x: &str, y: &str) -> String {
    format!("Q{x}{y}")
}

/// The six equations
/// `Qxy = 1 + y!eps.Qxy + Σ_d x?d.hide(C, encap({z}, Qxz || (1 + y!d.Qzy)))`
/// where `z` is the third port and `C` is all three ports.
pub fn queue_spec(data: &BTreeSet<Symbol>) -> Result<RecursiveSpec> {
    if data.is_empty() {
        return Err(Error::Precondition("queue specification needs a non-empty data set".into()));
    }
    let mut spec = RecursiveSpec::default();
    for x in PORTS {
        for y in PORTS {
            if x == y {
                continue;
            }
            let z = PORTS.iter().find(|p| **p != x && **p != y).unwrap();
            let me = queue_var(x, y);
            let mut branches: Vec<Term> =
                vec![accept(), prefix(CommAction::Send(y.into(), Payload::EmptyProbe), var(&me))];
            for d in data {
                let out = prefix(CommAction::Send(y.into(), Payload::Data(d.clone())), var(queue_var(z, y)));
                let body = hide(PORTS, encap([*z], merge(var(queue_var(x, z)), sum([accept(), out]))));
                branches.push(prefix(CommAction::Receive(x.into(), Payload::Data(d.clone())), body));
            }
            spec.equations.insert(me, sum(branches));
        }
    }
    Ok(spec)
}
