//! Text syntax, rendering, structured documents, and the command line.

pub mod cli;
pub mod document;
pub mod parse;
pub mod render;

pub use document::{from_document, from_json, to_document, to_json, Document, Value, SCHEMA};
pub use parse::{parse_cyclic, parse_expression, parse_operator, parse_poly, parse_vector, Parsed};
pub use render::{default_slot_names, render_cyclic, render_letter, render_operator, render_poly, render_vector};
