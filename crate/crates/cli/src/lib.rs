//! Map-file parsing, the analysis pipeline and the fixture self-test behind
//! the `jacfiber` command.

pub mod analysis;
pub mod app;
pub mod mapfile;
pub mod selftest;

pub use analysis::{analyze, render_text, AnalysisReport, AnalyzeOptions};
pub use app::{main_with_args, Cli, Command, EXIT_INPUT, EXIT_VIOLATION};
pub use mapfile::{parse_map_file, FieldSpec, MapFile, MapInput, ParseError};
pub use selftest::{run_selftest, SelftestReport, FIXTURES};
