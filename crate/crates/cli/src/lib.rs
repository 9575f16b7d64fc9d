//! JSON front end for the `gcorners` library: the input schema, command
//! dispatch, and the bundled example corpus.

pub mod corpus;
pub mod error;
pub mod run;
pub mod schema;

pub use error::{CliError, Located};
pub use run::{report, run, Command, Options};
pub use schema::{parse, Document};
