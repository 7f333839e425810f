use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("geometric mean of an empty list")]
    Empty,
    #[error("geometric mean needs positive finite values, got {0}")]
    NonPositive(f64),
}

/// `exp(mean(ln x))`.
pub fn geometric_mean(values: &[f64]) -> Result<f64, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    let mut acc = 0.0;
    for &x in values {
        if !(x.is_finite() && x > 0.0) {
            return Err(StatsError::NonPositive(x));
        }
        acc += x.ln();
    }
    if let [x] = values {
        return Ok(*x);
    }
    Ok((acc / values.len() as f64).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileMode {
    /// Objective to maximize; counts `value >= tau * best`.
    Maximize,
    /// Running time; counts `t <= fastest / tau`.
    MinimizeTime,
}

/// Per-instance, per-algorithm values. `values[i][a]` belongs to
/// `instances[i]` and `algorithms[a]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub algorithms: Vec<String>,
    pub instances: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub tau: f64,
    /// Fraction per algorithm, in table order.
    pub fractions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("no value for algorithm {algorithm:?} on instance {instance:?}")]
    MissingCell { instance: String, algorithm: String },
    #[error("table shape does not match its labels")]
    Shape,
    #[error("tau must lie in (0, 1], got {0}")]
    Tau(f64),
    #[error("value {value} for {algorithm:?} on {instance:?} is not a finite non-negative number")]
    BadValue {
        instance: String,
        algorithm: String,
        value: f64,
    },
}

/// `count` values of tau evenly spaced from 1 down to `min`, inclusive.
pub fn default_taus(min: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![1.0];
    }
    (0..count)
        .map(|i| 1.0 - (1.0 - min) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Performance profile: for each tau, the fraction of instances on which
/// each algorithm is within factor tau of the best. Ties count for every
/// tied algorithm.
pub fn performance_profile(
    table: &ResultTable,
    mode: ProfileMode,
    taus: &[f64],
) -> Result<Vec<ProfileRow>, ProfileError> {
    let k = table.algorithms.len();
    if table.values.len() != table.instances.len() || table.values.iter().any(|r| r.len() != k) {
        return Err(ProfileError::Shape);
    }
    if let Some(&t) = taus.iter().find(|&&t| !(t > 0.0 && t <= 1.0)) {
        return Err(ProfileError::Tau(t));
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(table.values.len());
    for (i, row) in table.values.iter().enumerate() {
        let mut full = Vec::with_capacity(k);
        for (a, cell) in row.iter().enumerate() {
            let cell_err = |value: Option<f64>| {
                let (instance, algorithm) = (table.instances[i].clone(), table.algorithms[a].clone());
                match value {
                    None => ProfileError::MissingCell { instance, algorithm },
                    Some(value) => ProfileError::BadValue {
                        instance,
                        algorithm,
                        value,
                    },
                }
            };
            let v = cell.ok_or_else(|| cell_err(None))?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(cell_err(Some(v)));
            }
            full.push(v);
        }
        rows.push(full);
    }
    let best: Vec<f64> = rows
        .iter()
        .map(|r| match mode {
            ProfileMode::Maximize => r.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ProfileMode::MinimizeTime => r.iter().copied().fold(f64::INFINITY, f64::min),
        })
        .collect();
    let total = rows.len().max(1) as f64;
    Ok(taus
        .iter()
        .map(|&tau| {
            let fractions = (0..k)
                .map(|a| {
                    let hits = rows
                        .iter()
                        .zip(&best)
                        .filter(|(r, &b)| match mode {
                            ProfileMode::Maximize => r[a] >= tau * b,
                            ProfileMode::MinimizeTime => r[a] <= b / tau,
                        })
                        .count();
                    hits as f64 / total
                })
                .collect();
            ProfileRow { tau, fractions }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(values: Vec<Vec<f64>>) -> ResultTable {
        let k = values.first().map_or(0, Vec::len);
        ResultTable {
            algorithms: (0..k).map(|a| format!("A{a}")).collect(),
            instances: (0..values.len()).map(|i| format!("i{i}")).collect(),
            values: values.into_iter().map(|r| r.into_iter().map(Some).collect()).collect(),
        }
    }

    #[test]
    fn geometric_mean_examples() {
        assert_eq!(geometric_mean(&[2.0, 8.0]).unwrap(), 4.0);
        assert_eq!(geometric_mean(&[7.5]).unwrap(), 7.5);
        assert!((geometric_mean(&[1.0, 1.0, 1000.0]).unwrap() - 10.0).abs() < 1e-9);
        assert_eq!(geometric_mean(&[1.0, 0.0]), Err(StatsError::NonPositive(0.0)));
        assert_eq!(geometric_mean(&[]), Err(StatsError::Empty));
    }

    #[test]
    fn profile_examples() {
        let p = performance_profile(&table(vec![vec![10.0, 5.0]]), ProfileMode::Maximize, &[1.0, 0.5])
            .unwrap();
        assert_eq!(p[0].fractions, vec![1.0, 0.0]);
        assert_eq!(p[1].fractions, vec![1.0, 1.0]);

        let eq = table(vec![vec![3.0, 3.0, 3.0], vec![1.0, 1.0, 1.0]]);
        for mode in [ProfileMode::Maximize, ProfileMode::MinimizeTime] {
            for row in performance_profile(&eq, mode, &default_taus(0.1, 10)).unwrap() {
                assert_eq!(row.fractions, vec![1.0; 3]);
            }
        }

        let split = table(vec![vec![4.0, 2.0], vec![1.0, 3.0]]);
        let p = performance_profile(&split, ProfileMode::Maximize, &[1.0]).unwrap();
        assert_eq!(p[0].fractions, vec![0.5, 0.5]);
        let p = performance_profile(&split, ProfileMode::MinimizeTime, &[1.0, 0.5]).unwrap();
        assert_eq!(p[0].fractions, vec![0.5, 0.5]);
        assert_eq!(p[1].fractions, vec![1.0, 0.5]);
    }

    #[test]
    fn profile_rejects_bad_input() {
        let mut t = table(vec![vec![1.0, 2.0]]);
        t.values[0][1] = None;
        assert_eq!(
            performance_profile(&t, ProfileMode::Maximize, &[1.0]),
            Err(ProfileError::MissingCell {
                instance: "i0".into(),
                algorithm: "A1".into()
            })
        );
        let t = table(vec![vec![1.0, 2.0]]);
        assert!(performance_profile(&t, ProfileMode::Maximize, &[0.0]).is_err());
        assert!(performance_profile(&t, ProfileMode::Maximize, &[1.5]).is_err());
        let t = table(vec![vec![1.0, f64::NAN]]);
        assert!(performance_profile(&t, ProfileMode::MinimizeTime, &[1.0]).is_err());
    }

    #[test]
    fn default_tau_grid() {
        let t = default_taus(0.5, 6);
        assert_eq!(t.len(), 6);
        assert_eq!(t[0], 1.0);
        assert!((t[5] - 0.5).abs() < 1e-12);
        assert!(t.windows(2).all(|w| w[0] > w[1]));
    }
}
