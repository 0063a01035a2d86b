//! Growth speeds of the star and periphery, duration binning across a
//! corpus, and response-time statistics.

mod bins;
mod response;
mod speed;

pub use bins::{
    bin_and_average, quantile, tukey_upper_fence, BinMethod, DurationBin, DurationBins,
};
pub use response::{response_times, summarize, ResponseTimeSummary, VoteClass};
pub use speed::{growth_speed, thread_speeds, DeltaM, SpeedProfile, SpeedUnit, ThreadSpeeds};
