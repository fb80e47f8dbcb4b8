//! The built-in example machines, embedded at compile time.

use crate::algebra::{parse_bcp, BcpFile};
use crate::automaton::QueueAutomaton;
use crate::error::{Error, Result};
use crate::parse;
use crate::rtm::Rtm;
use crate::two_queue::TwoQueueAutomaton;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Qa,
    Qa2,
    Rtm,
    Bcp,
}

impl Kind {
    pub fn extension(self) -> &'static str {
        match self {
            Kind::Qa => "qa",
            Kind::Qa2 => "qa2",
            Kind::Rtm => "rtm",
            Kind::Bcp => "bcp",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub id: &'static str,
    pub kind: Kind,
    pub text: &'static str,
}

macro_rules! entry {
    ($id:literal, $kind:expr, $file:literal) => {
        Entry { id: $id, kind: $kind, text: include_str!(concat!("../../../corpus/", $file)) }
    };
}

const ENTRIES: &[Entry] = &[
    entry!("fig1", Kind::Qa, "fig1.qa"),
    entry!("fig2", Kind::Qa, "fig2.qa"),
    entry!("fig3_left", Kind::Qa, "fig3_left.qa"),
    entry!("fig3_right", Kind::Qa, "fig3_right.qa"),
    entry!("fig5", Kind::Qa, "fig5.qa"),
    entry!("fig6", Kind::Qa, "fig6.qa"),
    entry!("fig7", Kind::Qa, "fig7.qa"),
    entry!("shuttle", Kind::Qa2, "shuttle.qa2"),
    entry!("rtm_blank_loop", Kind::Rtm, "rtm_blank_loop.rtm"),
    entry!("rtm_writer", Kind::Rtm, "rtm_writer.rtm"),
    entry!("queue", Kind::Bcp, "queue.bcp"),
];

pub fn entries() -> &'static [Entry] {
    ENTRIES
}

pub fn entry(id: &str) -> Result<&'static Entry> {
    ENTRIES.iter().find(|e| e.id == id).ok_or_else(|| Error::Precondition(format!("no corpus entry '{id}'")))
}

fn expect(id: &str, kind: Kind) -> Result<&'static str> {
    let e = entry(id)?;
    if e.kind != kind {
        return Err(Error::Precondition(format!("corpus entry '{id}' is not a .{} file", kind.extension())));
    }
    Ok(e.text)
}

pub fn load_qa(id: &str) -> Result<QueueAutomaton> {
    parse::parse_qa(expect(id, Kind::Qa)?)
}

pub fn load_qa2(id: &str) -> Result<TwoQueueAutomaton> {
    parse::parse_qa2(expect(id, Kind::Qa2)?)
}

pub fn load_rtm(id: &str) -> Result<Rtm> {
    parse::parse_rtm(expect(id, Kind::Rtm)?)
}

pub fn load_bcp(id: &str) -> Result<BcpFile> {
    parse_bcp(expect(id, Kind::Bcp)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads() {
        for e in entries() {
            let ok = match e.kind {
                Kind::Qa => load_qa(e.id).map(|_| ()),
                Kind::Qa2 => load_qa2(e.id).map(|_| ()),
                Kind::Rtm => load_rtm(e.id).map(|_| ()),
                Kind::Bcp => load_bcp(e.id).map(|_| ()),
            };
            ok.unwrap_or_else(|err| panic!("{}: {err}", e.id));
        }
    }

    #[test]
    fn wrong_kind_is_rejected() {
        assert!(load_rtm("fig1").is_err());
        assert!(load_qa("missing").is_err());
    }

    #[test]
    fn queue_file_matches_the_generated_spec() {
        let f = load_bcp("queue").unwrap();
        let spec = crate::algebra::queue_spec(&[crate::symbol::Symbol::new("d").unwrap()].into()).unwrap();
        assert_eq!(f.spec, spec);
        assert_eq!(f.root, crate::algebra::var("Qio"));
    }
}
