//! Scalar abstraction for clinical scores.
//!
//! Composite ranking and quantile extraction never do arithmetic on scores,
//! only comparisons, so the core is generic over the score scalar. Concrete
//! aliases for f32/f64 live at the crate root.

use std::fmt;

use num_traits::Float;

/// Any floating-point scalar usable as a clinical score.
pub trait Score: Float + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T> Score for T where T: Float + fmt::Debug + fmt::Display + Send + Sync + 'static {}
