pub mod algebra;
pub mod cli;
pub mod config;
pub mod error;
pub mod gcp;
pub mod grid;
pub mod harmonic;
pub mod io;
pub mod lie;
pub mod loops;
pub mod parallel;
pub mod presets;
pub mod surfaces;
pub mod verify;
