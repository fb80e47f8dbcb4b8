//! Process terms with send/receive communication, the recursive queue
//! specification, and the split of a queue automaton into a finite control
//! talking to a queue.

mod control;
mod queue;
mod sos;
mod term;

pub use control::{
    compose_terms, compose_with_queue, control_of, queue_automaton, spec_of_lts, Composite, CompositeConfig, Control,
};
pub use queue::{queue_spec, queue_var, PORTS};
pub use sos::{alphabet, sos_step, term_lts, terminates, TermGraph};
pub use term::{
    accept, bcp_to_text, choice, deadlock, encap, hide, merge, parse_bcp, parse_term, prefix, sum, var, BcpFile,
    CommAction, Payload, Port, ProcessTerm, RecursiveSpec, Term,
};
