//! Data files shipped with the crate.

use crate::error::Result;
use crate::search::{BoundsTable, CoverWitness};

/// Known bounds for `N_q(g)`: intervals for q in {5, 9, 16}, upper bounds for q in {7, 11, 13}.
pub const BOUNDS_CSV: &str = include_str!("../fixtures/bounds.csv");

/// Witnesses for the record covers over F_16, F_9 and F_5, one JSON object per line.
pub const RECORD_WITNESSES: &str = include_str!("../fixtures/record_witnesses.jsonl");

pub fn bounds() -> BoundsTable {
    BoundsTable::from_csv_str(BOUNDS_CSV).expect("shipped bounds parse")
}

pub fn record_witnesses() -> Result<Vec<CoverWitness>> {
    RECORD_WITNESSES
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(CoverWitness::from_json_line)
        .collect()
}

/// Targeted search settings for q in {7, 11, 13}: family, sampling ratio and
/// seed, with the point count each genus should reach.
pub const TABLE_SPOTCHECKS_CSV: &str = include_str!("../fixtures/table_spotchecks.csv");

#[derive(Clone, Debug, PartialEq, serde::Deserialize)]
pub struct SpotCheck {
    pub q: u32,
    pub family: String,
    pub sample: f64,
    pub seed: u64,
    pub genus: u64,
    pub target: u64,
}

pub fn table_spotchecks() -> Vec<SpotCheck> {
    csv::Reader::from_reader(TABLE_SPOTCHECKS_CSV.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .expect("shipped spot checks parse")
}
