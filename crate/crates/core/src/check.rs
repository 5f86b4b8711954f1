//! Named numerical checks shared by the experiments and the report writer.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    /// Evaluated below the resolution floor; never counted as a pass.
    Untrusted,
    /// Reported value without an assertion.
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Untrusted => "untrusted",
            Status::Info => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub scale: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl CheckRow {
    pub fn new(name: impl Into<String>, scale: f64, lhs: f64, rhs: f64, tolerance: f64, passed: bool) -> Self {
        CheckRow {
            name: name.into(),
            scale,
            lhs,
            rhs,
            tolerance,
            status: if passed { Status::Pass } else { Status::Fail },
        }
    }

    /// Passes when `lhs <= rhs + tolerance`.
    pub fn at_most(name: impl Into<String>, scale: f64, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(name, scale, lhs, rhs, tolerance, lhs <= rhs + tolerance)
    }

    /// Passes when `|lhs - rhs| <= tolerance * max(1, |lhs|, |rhs|)`.
    pub fn close(name: impl Into<String>, scale: f64, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let size = lhs.abs().max(rhs.abs()).max(1.0);
        Self::new(name, scale, lhs, rhs, tolerance, (lhs - rhs).abs() <= tolerance * size)
    }

    pub fn info(name: impl Into<String>, scale: f64, lhs: f64, rhs: f64) -> Self {
        CheckRow {
            name: name.into(),
            scale,
            lhs,
            rhs,
            tolerance: 0.0,
            status: Status::Info,
        }
    }

    /// Marks the row untrusted unless it is purely informational.
    pub fn untrusted(mut self) -> Self {
        if self.status != Status::Info {
            self.status = Status::Untrusted;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}
