//! Work statistics, entropy production and information-rate bounds.

mod info;
mod sta;
mod work;

pub use info::{bekenstein_rate, holevo_learning, landauer_product, otto_engine_bounds, LandauerReport, OttoBounds, OttoStrokes};
pub use sta::{sta_cost_and_qsl, StaCostReport};
pub use work::{clausius_geometric_check, sigma_max, thermal_state, two_point_work, work_statistics, WorkStatistics};
