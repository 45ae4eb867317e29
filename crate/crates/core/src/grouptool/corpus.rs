//! Shipped proof scripts for the groups with hand-written arguments: 11
//! from one-cusped fillings and 9 from closed fillings.

use super::presentation::{parse_presentation, Presentation};
use super::script::{ProofScript, ScriptParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Cusped,
    Closed,
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub family: Family,
    pub text: &'static str,
}

macro_rules! entry {
    ($name:literal, $family:ident) => {
        CorpusEntry {
            name: $name,
            family: Family::$family,
            text: include_str!(concat!("../../corpus/", $name, ".hcs")),
        }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    entry!("cusped-01", Cusped),
    entry!("cusped-02", Cusped),
    entry!("cusped-03", Cusped),
    entry!("cusped-04", Cusped),
    entry!("cusped-05", Cusped),
    entry!("cusped-06", Cusped),
    entry!("cusped-07", Cusped),
    entry!("cusped-08", Cusped),
    entry!("cusped-09", Cusped),
    entry!("cusped-10", Cusped),
    entry!("cusped-11", Cusped),
    entry!("closed-01", Closed),
    entry!("closed-02", Closed),
    entry!("closed-03", Closed),
    entry!("closed-04", Closed),
    entry!("closed-05", Closed),
    entry!("closed-06", Closed),
    entry!("closed-07", Closed),
    entry!("closed-08", Closed),
    entry!("closed-09", Closed),
];

impl CorpusEntry {
    pub fn script(&self) -> Result<ProofScript, ScriptParseError> {
        ProofScript::parse(self.text)
    }

    /// The presentation named by the script's `group` header.
    pub fn presentation(&self) -> Presentation {
        let s = self.script().expect("shipped script parses");
        parse_presentation(s.group.as_deref().expect("shipped script has a header")).expect("shipped header parses")
    }
}

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}
