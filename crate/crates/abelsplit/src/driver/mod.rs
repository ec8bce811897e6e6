//! The π_split experiment for a curve over ℚ, curve fitting, and survey output.

pub mod curve;
pub mod fit;
pub mod pisplit;
pub mod survey;

pub use curve::RationalGenus2;
pub use fit::{fit_counting, FitModel, FitResult};
pub use pisplit::{log_grid, oracle_split, pisplit, split_at, PisplitResult, GRID, ORACLE_LIMIT};
pub use survey::{run_survey, run_survey_to, CensusMode, Cell, Format, Provenance, Survey, SurveyParams, SurveyRow};
