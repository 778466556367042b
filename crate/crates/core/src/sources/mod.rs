//! Synthetic data with known statistics.

mod markov;
mod worksheet;

pub use markov::{entropy_rate, MarkovSpec, MAX_TABLE_ENTRIES, STATIONARY_TOLERANCE};
pub use worksheet::{
    corpus_bytes, corpus_text, read_records, worksheet_corpus, worksheet_record, write_records,
    WorksheetRecord,
};
