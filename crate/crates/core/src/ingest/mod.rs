//! Dump parsing, judgment extraction and thread assembly.

mod label;
mod parse;
mod profile;
mod record;

pub use label::{extract_judgment, JudgmentLabel, UnknownLabel};
pub use parse::{
    decode_record, open_dump, parse_dump, serialize_thread, write_thread, ParseReport,
};
pub use profile::FormatProfile;
pub use record::{Comment, RawMessage, ThreadRecord, VotePolicy};
