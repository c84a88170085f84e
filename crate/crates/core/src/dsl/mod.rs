//! Text formats for models and for annotated utterances.
//!
//! Model text is a sequence of declarations, one per line by convention:
//!
//! ```text
//! quality screens { level: ordinal, structure: well_defined_shared, domain: 1..50 }
//! goal g1 { holds: flight_booked }
//! qc q1 optional { holds: screens_below_5, quality: screens, constraint: "< 5" }
//! plan p1 { holds: wizard_used }
//! alternatives { p1 | p2 }
//! rule r1: wizard_used => screens_below_5
//! priority r1 > r2
//! approx sg1 <- q1 { correlation: -0.8, justification: "fewer screens, less effort" }
//! evaluate e1: favor q1
//! prefer x1: p1 > p2
//! prefer m1: pref x1 > x2
//! ```
//!
//! `->` is a strict rule, `=>` a defeasible one. `//` starts a comment.

mod lexer;
mod model;
mod parser;
mod render;
mod utterance;

pub use model::{parse_model, Namespace, ParsedModel, SpanTable};
pub use render::{render_model, HEADER};
pub use utterance::{parse_utterances, ParsedUtterances};
