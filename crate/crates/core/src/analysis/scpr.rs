// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use super::AnalysisError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatingClassKind {
    BarelyFail,
    BarelyPass,
    Fail,
    Pass,
}

impl OperatingClassKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OperatingClassKind::BarelyFail => "BarelyFail",
            OperatingClassKind::BarelyPass => "BarelyPass",
            OperatingClassKind::Fail => "Fail",
            OperatingClassKind::Pass => "Pass",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatingClass {
    /// Percent.
    pub scpr: f64,
    pub class: OperatingClassKind,
}

impl fmt::Display for OperatingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:.2}%", self.class.as_str(), self.scpr)
    }
}

/// Slack-to-clock-period ratio in percent.
pub fn scpr(worst_slack: f64, clock_period: f64) -> Result<f64, AnalysisError> {
    if !(clock_period > 0.0) {
        return Err(AnalysisError::NonPositivePeriod(clock_period));
    }
    Ok(worst_slack / clock_period * 100.0)
}

/// Open intervals (-10, 0) and (0, 10) are the barely classes; 0 is a pass.
pub fn classify_operating_point(scpr: f64) -> OperatingClass {
    let class = if scpr <= -10.0 {
        OperatingClassKind::Fail
    } else if scpr < 0.0 {
        OperatingClassKind::BarelyFail
    } else if scpr > 0.0 && scpr < 10.0 {
        OperatingClassKind::BarelyPass
    } else {
        OperatingClassKind::Pass
    };
    OperatingClass { scpr, class }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        use OperatingClassKind::*;
        let c = |v| classify_operating_point(v).class;
        assert_eq!(c(-10.0), Fail);
        assert_eq!(c(-9.99), BarelyFail);
        assert_eq!(c(0.0), Pass);
        assert_eq!(c(7.72), BarelyPass);
        assert_eq!(c(10.0), Pass);
        assert_eq!(c(15.0), Pass);
        assert!(scpr(1.0, 0.0).is_err());
        assert_eq!(scpr(0.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn display() {
        let s = scpr(0.0078, 0.6).unwrap();
        assert_eq!(classify_operating_point(s).to_string(), "BarelyPass 1.30%");
        assert_eq!(classify_operating_point(100.0).to_string(), "Pass 100.00%");
    }
}
