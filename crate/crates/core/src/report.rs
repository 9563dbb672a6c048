use serde::{Deserialize, Serialize};

/// One named identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub measured_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// A list of identity checks with their measured errors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a check; NaN errors never pass.
    pub fn push(&mut self, name: impl Into<String>, measured_error: f64, tolerance: f64) {
        self.entries.push(CheckEntry {
            name: name.into(),
            measured_error,
            tolerance,
            passed: measured_error <= tolerance,
        });
    }

    /// Records a check that failed to evaluate at all.
    pub fn push_failure(&mut self, name: impl Into<String>, tolerance: f64) {
        self.push(name, f64::INFINITY, tolerance);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn max_error(&self) -> f64 {
        self.entries.iter().map(|e| e.measured_error).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_tracks_tolerance() {
        let mut r = VerificationReport::new();
        r.push("a", 1e-9, 1e-8);
        assert!(r.all_passed());
        r.push("b", f64::NAN, 1e-8);
        assert!(!r.all_passed());
        assert_eq!(r.failures().count(), 1);
    }
}
