//! Open systems under Lorentz boosts.
//!
//! Two toy scenarios in 1+1 dimensional special relativity, each with a pair
//! of interventions at spacelike separation:
//!
//! * [`classical`]: two bouncing masses receiving momentum kicks, described by
//!   a Liouville support on the `(E1, E2)` energy plane;
//! * [`quantum`]: two unentangled spins measured along `y`, described by a
//!   product state vector.
//!
//! Observers in relative motion put the interventions in different time
//! orders ([`spacetime`]), so their descriptions on their own simultaneity
//! slices differ. [`checker`] verifies that no map of any kind (and hence no
//! linear one) converts one observer's descriptions into the other's across
//! all outcome branches, while outcome statistics agree in every frame.
//! [`bell`] contrasts the classical angular-momentum model with the singlet
//! via CHSH.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bell;
pub mod checker;
pub mod classical;
mod error;
pub mod quantum;
pub mod spacetime;

pub use crate::error::{Error, Result};

/// Binary outcome of an intervention: a measured `σ_y = ±1`, or the sign of
/// the pre-kick momentum `±p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One of the two particles (or subsystems) of a scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Particle {
    First,
    Second,
}

impl Particle {
    pub const BOTH: [Particle; 2] = [Particle::First, Particle::Second];

    pub fn index(self) -> usize {
        match self {
            Particle::First => 0,
            Particle::Second => 1,
        }
    }
}
