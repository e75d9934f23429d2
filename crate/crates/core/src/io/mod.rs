pub mod config;
pub mod json;
pub mod parse;
pub mod print;

pub use config::{load_config, Config, ConfigError, ExportFormat, ExternalTool};
pub use json::{to_json, versioned, witness_json, FORMAT_VERSION};
pub use parse::{parse_ctrs, parse_term, parse_trs, CtrsProblem, ParseError, Span, TrsProblem};
pub use print::{print_csrs, print_ctrs, print_trs};
