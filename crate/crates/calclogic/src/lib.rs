//! File formats, shipped fixture corpora, batch checking and the
//! command-line driver for `calclogic-core`.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod fixture;
pub mod golden;
pub mod record;

pub use error::{CliError, FixtureError};
pub use fixture::{fixture, Fixture};
