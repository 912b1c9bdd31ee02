//! Minkowski geometry in natural units (c = 1), signature (+, -, -, -).
//!
//! Only boosts along `x` are modelled; `y` and `z` ride along unchanged.

use core::ops::Sub;

use libm::{cosh, sinh};

use crate::{Error, Result};

/// Relative tolerance for the null-interval test.
pub const LIGHTLIKE_TOLERANCE: f64 = 1e-12;

/// Half-width of the band around a slice inside which an event counts as on it.
pub const ON_SLICE_TOLERANCE: f64 = 1e-12;

/// A spacetime point or displacement `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const ORIGIN: FourVector = FourVector::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector { t, x, y, z }
    }

    /// An event in the `t`-`x` plane.
    pub const fn tx(t: f64, x: f64) -> Self {
        FourVector::new(t, x, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `s² = t² - x² - y² - z²`; positive for timelike displacements.
    pub fn interval(&self) -> f64 {
        self.t * self.t - self.x * self.x - self.y * self.y - self.z * self.z
    }

    fn max_abs_component(&self) -> f64 {
        self.t
            .abs()
            .max(self.x.abs())
            .max(self.y.abs())
            .max(self.z.abs())
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }
}

impl From<[f64; 4]> for FourVector {
    fn from([t, x, y, z]: [f64; 4]) -> Self {
        FourVector::new(t, x, y, z)
    }
}

impl Sub for FourVector {
    type Output = FourVector;

    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector::new(
            self.t - rhs.t,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

/// Coordinates of `v` in the frame moving along `x` with rapidity `chi`.
pub fn boost(v: FourVector, chi: f64) -> Result<FourVector> {
    if !chi.is_finite() {
        return Err(Error::InvalidArgument("rapidity must be finite"));
    }
    if !v.is_finite() {
        return Err(Error::InvalidArgument(
            "four-vector components must be finite",
        ));
    }
    let (ch, sh) = (cosh(chi), sinh(chi));
    Ok(FourVector::new(
        v.t * ch - v.x * sh,
        -v.t * sh + v.x * ch,
        v.y,
        v.z,
    ))
}

/// Where the second event sits relative to the light cone of the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CausalClass {
    TimelikePast,
    TimelikeFuture,
    Lightlike,
    Spacelike,
}

/// Classifies `e2` relative to `e1`.
///
/// The displacement is null when `|s²| <= 1e-12 · max|component|²`, so a
/// coincident pair is reported as [`CausalClass::Lightlike`].
pub fn causal_relation(e1: FourVector, e2: FourVector) -> CausalClass {
    let d = e2 - e1;
    let s2 = d.interval();
    let scale = d.max_abs_component();
    if s2.abs() <= LIGHTLIKE_TOLERANCE * scale * scale {
        CausalClass::Lightlike
    } else if s2 < 0.0 {
        CausalClass::Spacelike
    } else if d.t > 0.0 {
        CausalClass::TimelikeFuture
    } else {
        CausalClass::TimelikePast
    }
}

/// The hyperplane `t' = tau` of the frame with rapidity `chi` along `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacelikeSlice {
    chi: f64,
    tau: f64,
}

impl SpacelikeSlice {
    pub fn new(chi: f64, tau: f64) -> Result<Self> {
        if !chi.is_finite() {
            return Err(Error::InvalidArgument("slice rapidity must be finite"));
        }
        if !tau.is_finite() {
            return Err(Error::InvalidArgument("slice time must be finite"));
        }
        Ok(SpacelikeSlice { chi, tau })
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// True when `e` lies strictly to the past of this slice. Events within
    /// [`ON_SLICE_TOLERANCE`] of the slice are not yet before it.
    pub fn is_before(&self, e: FourVector) -> bool {
        let band = ON_SLICE_TOLERANCE * self.tau.abs().max(1.0);
        slice_time(self, e) < self.tau - band
    }

    /// Spacetime `t` of the slice at position `x` (for drawing).
    pub fn t_at(&self, x: f64) -> f64 {
        (self.tau + x * sinh(self.chi)) / cosh(self.chi)
    }
}

/// Boosted time coordinate `t' = t cosh χ - x sinh χ` of an event.
pub fn slice_time(slice: &SpacelikeSlice, e: FourVector) -> f64 {
    e.t * cosh(slice.chi) - e.x * sinh(slice.chi)
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Whether the time order of two events simultaneous in the rest frame
/// differs between the frames with rapidities `+chi` and `-chi`.
pub fn ordering_flips(event_a: FourVector, event_b: FourVector, chi: f64) -> Result<bool> {
    if !chi.is_finite() || !event_a.is_finite() || !event_b.is_finite() {
        return Err(Error::InvalidArgument("events and rapidity must be finite"));
    }
    let scale = event_a
        .max_abs_component()
        .max(event_b.max_abs_component())
        .max(1.0);
    if (event_a.t - event_b.t).abs() > ON_SLICE_TOLERANCE * scale {
        return Err(Error::InvalidArgument(
            "events must be simultaneous in the rest frame",
        ));
    }
    if event_a.x == event_b.x {
        return Err(Error::InvalidArgument("events must be separated along x"));
    }
    let order = |chi: f64| -> Result<i8> {
        let slice = SpacelikeSlice::new(chi, 0.0)?;
        Ok(sign(
            slice_time(&slice, event_a) - slice_time(&slice, event_b),
        ))
    };
    Ok(order(chi)? != order(-chi)?)
}
