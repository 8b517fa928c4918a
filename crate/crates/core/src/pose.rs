//! Planar pose, bounded velocity commands, and the exact constant-control
//! flow of the unicycle model.

use crate::vec2::Vec2;

/// Below this turn rate the constant-control flow is evaluated with the
/// straight-line formula. The arc formula divides by the turn rate, which
/// turns into garbage once `sin` differences underflow; the crossover error
/// is of order `MIN_TURN_RATE * dt^2`, far below every tolerance in the
/// crate. Prediction and integration share this constant so they always
/// agree bit for bit.
pub const MIN_TURN_RATE: f64 = 1e-9;

/// Wraps an angle into [-pi, pi].
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle % std::f64::consts::TAU;
    if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    } else if a < -std::f64::consts::PI {
        a += std::f64::consts::TAU;
    }
    a
}

/// Planar position plus heading.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    pub position: Vec2,
    /// Heading in radians, normalized into [-pi, pi].
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Pose {
            position: Vec2::new(x, y),
            heading: wrap_angle(heading),
        }
    }

    /// Exact constant-control solution of the unicycle dynamics: a circular
    /// arc when the turn rate is nonzero, a straight segment otherwise.
    pub fn advanced(&self, cmd: VelocityCommand, dt: f64) -> Pose {
        let phi = self.heading;
        if cmd.angular.abs() <= MIN_TURN_RATE {
            let step = Vec2::new(phi.cos(), phi.sin()) * (cmd.linear * dt);
            Pose {
                position: self.position + step,
                heading: wrap_angle(phi + cmd.angular * dt),
            }
        } else {
            let radius = cmd.linear / cmd.angular;
            let phi_end = phi + cmd.angular * dt;
            let step = Vec2::new(phi_end.sin() - phi.sin(), phi.cos() - phi_end.cos()) * radius;
            Pose {
                position: self.position + step,
                heading: wrap_angle(phi_end),
            }
        }
    }
}

/// Bounded linear/angular speeds in normalized units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VelocityCommand {
    pub linear: f64,
    pub angular: f64,
}

impl VelocityCommand {
    pub const STOP: VelocityCommand = VelocityCommand {
        linear: 0.0,
        angular: 0.0,
    };

    /// Builds a command, clamping both speeds into [-1, 1].
    pub fn new(linear: f64, angular: f64) -> Self {
        VelocityCommand {
            linear: linear.clamp(-1.0, 1.0),
            angular: angular.clamp(-1.0, 1.0),
        }
    }

    pub fn is_stop(&self) -> bool {
        self.linear == 0.0 && self.angular == 0.0
    }
}
