//! Real scalar abstraction for the state-vector simulator.
//!
//! Amplitudes are `Complex<T>` for any `T: Real`. Each scalar type carries its
//! own numerical tolerances, since a normalization check that is meaningful
//! for `f64` is unattainable in `f32`.

use std::fmt::Debug;

use num_traits::{Float, FloatConst};

pub trait Real: Float + FloatConst + Debug + Default + Send + Sync + 'static {
    /// Allowed deviation of a squared norm (or probability sum) from one.
    const NORM_TOL: f64;
    /// Allowed componentwise deviation in algebraic identities.
    const IDENTITY_TOL: f64;

    fn from_f64(v: f64) -> Self;

    fn as_f64(self) -> f64;
}

impl Real for f64 {
    const NORM_TOL: f64 = 1e-9;
    const IDENTITY_TOL: f64 = 1e-10;

    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const NORM_TOL: f64 = 1e-5;
    const IDENTITY_TOL: f64 = 1e-5;

    #[inline]
    fn from_f64(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}
