//! Finitely presented groups and checkable proofs of non-hyperbolicity.

pub mod corpus;
pub mod detect;
pub mod presentation;
pub mod script;
pub mod search;
pub mod snf;
pub mod word;

pub use detect::{detect, detection_script};
pub use presentation::{one_relator, parse_presentation, parse_word, ParseError, Presentation, PresentationError};
pub use script::{verify_script, verify_script_report, ProofScript, ProofState, Reason, Step, Verdict};
pub use search::{assert_trivial_word, replay, Derivation, SearchConfig, SearchError};
pub use snf::{abelian_invariants, abelianization, has_infinite_order_image, AbelianInvariants};
pub use word::Word;
