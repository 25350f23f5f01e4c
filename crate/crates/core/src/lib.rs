pub mod bck;
pub mod cointeraction;
pub mod embedding;
pub mod error;
pub mod examples;
pub mod forest;
pub mod growth;
pub mod linalg;
pub mod lincomb;
pub mod mkw;
pub mod postlie;
pub mod regstruct;
pub mod report;
pub mod text;
pub mod verify;

pub use error::{Error, ParseError};
pub use forest::{parse_forest, parse_tree, render_forest, Alphabet, Decoration, Forest, Tree};
pub use lincomb::{LinComb, MultiTensor, Rational, TensorElem};
