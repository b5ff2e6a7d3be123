//! Configuration files and machine-readable sweep outputs.

mod emit;
mod format;
mod load;

pub use emit::{
    dat_file_name, emit_outputs, fields_file_name, write_trajectory_csv, RunManifest,
    CONDITIONS_FILE, CONDITIONS_HEADER, CONFIG_FILE, FIELDS_HEADER, MANIFEST_FILE, SHEET_FILE,
    SHEET_HEADER, SUMMARY_FILE, TOOL_VERSION, TRAJECTORY_HEADER,
};
pub use format::{json_num, num, parse_num};
pub use load::{load_config, report_from_dir, StoredReport};
