use rayon::prelude::*;

use super::session::{compress, Report};
use crate::error::Result;
use crate::predictors::PredictorConfig;

/// Compresses `source` under each config, in parallel, returning one report
/// per config in the given order. Configs are expected in increasing
/// capacity (freq order, or neural width).
pub fn scaling_ladder(source: &[u8], configs: &[PredictorConfig]) -> Result<Vec<Report>> {
    configs
        .par_iter()
        .map(|c| compress(source, c).map(|(_, stats)| stats.report(c)))
        .collect()
}
