//! One module per subcommand; each writes through the run's [`OutputDir`](crate::output::OutputDir).

pub mod evolve;
pub mod lambda;
pub mod modes;
pub mod rays;
pub mod spectrum;
