//! Queue automata, reactive Turing machines and branching bisimilarity
//! checking over depth-bounded truncations of their process graphs.

pub mod algebra;
pub mod automaton;
pub mod bisim;
pub mod compute;
pub mod corpus;
pub mod error;
pub mod harness;
pub mod language;
pub mod lts;
pub mod parse;
pub mod rtm;
pub mod symbol;
pub mod transform;
pub mod two_queue;

pub use automaton::{QConfiguration, QTransition, QueueAutomaton};
pub use error::{Error, ParseError, Result};
pub use lts::{explore, ExplorationBound, FiniteLts, ProcessGraph};
pub use rtm::{Cell, Move, Rtm, RtmConfiguration, TapeInstance};
pub use symbol::{ActionLabel, Symbol, Trigger, Word};
pub use two_queue::{QConfiguration2, QTransition2, TwoQueueAutomaton};
