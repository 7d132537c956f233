// SPDX-License-Identifier: Apache-2.0

//! Pearson correlation between sweep parameters and final metrics.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::stats::{Sentinel, Stat};
use super::AnalysisError;

/// Pearson r; the sentinel when either vector has zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Stat, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len();
    if n < 2 {
        return Ok(Stat::Sentinel(Sentinel::Undefined));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(Stat::Sentinel(Sentinel::Undefined));
    }
    Ok(Stat::Value(
        (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0),
    ))
}

/// One design instance: its parameters and final metrics.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSample {
    pub circuit: String,
    pub params: BTreeMap<String, f64>,
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub circuit: String,
    pub parameter: String,
    pub metric: String,
    pub n: usize,
    pub r: Stat,
}

/// One r per (circuit, parameter, metric), over instances carrying both values.
pub fn parameter_correlation(samples: &[CorrelationSample]) -> Vec<CorrelationRow> {
    let mut by_circuit: BTreeMap<&str, Vec<&CorrelationSample>> = BTreeMap::new();
    for s in samples {
        by_circuit.entry(s.circuit.as_str()).or_default().push(s);
    }
    let mut rows = Vec::new();
    for (circuit, group) in by_circuit {
        let params: BTreeSet<&String> = group.iter().flat_map(|s| s.params.keys()).collect();
        let metrics: BTreeSet<&String> = group.iter().flat_map(|s| s.metrics.keys()).collect();
        for p in &params {
            for m in &metrics {
                let (xs, ys): (Vec<f64>, Vec<f64>) = group
                    .iter()
                    .filter_map(|s| Some((*s.params.get(*p)?, *s.metrics.get(*m)?)))
                    .unzip();
                let r = pearson(&xs, &ys).expect("equal lengths by construction");
                rows.push(CorrelationRow {
                    circuit: circuit.to_string(),
                    parameter: p.to_string(),
                    metric: m.to_string(),
                    n: xs.len(),
                    r,
                });
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_and_anti() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(pearson(&x, &x).unwrap(), Stat::Value(1.0));
        assert_eq!(pearson(&x, &neg).unwrap(), Stat::Value(-1.0));
        assert_eq!(
            pearson(&x, &[1.0; 4]).unwrap(),
            Stat::Sentinel(Sentinel::Undefined)
        );
        assert!(pearson(&x, &[1.0]).is_err());
    }

    #[test]
    fn grouped_rows() {
        let mk = |c: &str, p: f64, m: f64| CorrelationSample {
            circuit: c.into(),
            params: BTreeMap::from([("clock_period".into(), p), ("const".into(), 1.0)]),
            metrics: BTreeMap::from([("worst_slack".into(), m)]),
        };
        let rows =
            parameter_correlation(&[mk("a", 1.0, 0.1), mk("a", 2.0, 0.5), mk("b", 1.0, 0.0)]);
        assert_eq!(rows.len(), 4);
        let r = &rows
            .iter()
            .find(|r| r.circuit == "a" && r.parameter == "clock_period")
            .unwrap();
        assert_eq!((r.n, r.r), (2, Stat::Value(1.0)));
        assert!(rows
            .iter()
            .find(|r| r.circuit == "a" && r.parameter == "const")
            .unwrap()
            .r
            .is_sentinel(Sentinel::Undefined));
    }
}
