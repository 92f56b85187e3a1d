//! Continuous control action shared by the simulator and the learner.

use thiserror::Error;

/// Declared component ranges: steer in [-1, 1], accel and brake in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Action {
    pub steer: f64,
    pub accel: f64,
    pub brake: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("action component {component} = {value} outside its declared range")]
pub struct ActionOutOfRange {
    pub component: &'static str,
    pub value: f64,
}

impl Action {
    pub fn new(steer: f64, accel: f64, brake: f64) -> Self {
        Action {
            steer,
            accel,
            brake,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.steer, self.accel, self.brake]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Action::new(a[0], a[1], a[2])
    }

    /// Error on the first component outside its declared range (NaN included).
    pub fn validate(&self) -> Result<(), ActionOutOfRange> {
        let check = |component, value: f64, lo: f64, hi: f64| {
            if value >= lo && value <= hi {
                Ok(())
            } else {
                Err(ActionOutOfRange { component, value })
            }
        };
        check("steer", self.steer, -1.0, 1.0)?;
        check("accel", self.accel, 0.0, 1.0)?;
        check("brake", self.brake, 0.0, 1.0)
    }

    /// Clamp every component into its declared range.
    pub fn clamped(&self) -> Action {
        Action {
            steer: self.steer.clamp(-1.0, 1.0),
            accel: self.accel.clamp(0.0, 1.0),
            brake: self.brake.clamp(0.0, 1.0),
        }
    }
}
