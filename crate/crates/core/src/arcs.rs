//! Relation arcs, character arcs and the window functions that smooth them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::participants::EventRecord;
use crate::scoring::{circumstance, CircumstanceParams, ScoringError};

#[derive(Debug, Error, PartialEq)]
pub enum ArcError {
    #[error("window size {0} must be odd and at least 3")]
    InvalidWindow(usize),
    #[error("polynomial order {p} must be below the window size {n}")]
    InvalidOrder { n: usize, p: usize },
    #[error("derivative order {deriv} exceeds polynomial order {p}")]
    InvalidDerivative { deriv: usize, p: usize },
    #[error("unknown filter `{0}` (expected savgol, mean or triangular)")]
    UnknownFilter(String),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}

/// Least-squares polynomial smoothing weights.
///
/// Fits a degree-`p` polynomial to `n` equally spaced points and returns the
/// convolution weights that evaluate its `deriv`-th derivative at the window
/// centre (unit sample spacing). For `deriv = 0` the weights sum to one.
#[allow(clippy::needless_range_loop)]
pub fn savgol_coefficients(n: usize, p: usize, deriv: usize) -> Result<Vec<f64>, ArcError> {
    if n.is_multiple_of(2) {
        return Err(ArcError::InvalidWindow(n));
    }
    if p >= n {
        return Err(ArcError::InvalidOrder { n, p });
    }
    if deriv > p {
        return Err(ArcError::InvalidDerivative { deriv, p });
    }
    let half = (n - 1) / 2;
    if half == 0 {
        return Ok(vec![1.0]);
    }
    let cols = p + 1;
    // Vandermonde matrix on abscissae scaled into [-1, 1] for conditioning.
    let scale = half as f64;
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|row| {
            let u = (row as f64 - scale) / scale;
            let mut pow = 1.0;
            (0..cols)
                .map(|_| {
                    let v = pow;
                    pow *= u;
                    v
                })
                .collect()
        })
        .collect();

    // Householder QR, reflectors stored as unit vectors.
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let norm = (j..n).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (0..n).map(|i| if i < j { 0.0 } else { a[i][j] }).collect();
        v[j] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm > 0.0 {
            v.iter_mut().for_each(|x| *x /= vnorm);
            for k in j..cols {
                let dot: f64 = (j..n).map(|i| v[i] * a[i][k]).sum();
                for i in j..n {
                    a[i][k] -= 2.0 * v[i] * dot;
                }
            }
        }
        reflectors.push(v);
    }

    // Solve R^T z = e_deriv (forward substitution); weights are Q [z; 0].
    let mut z = vec![0.0; n];
    for i in 0..cols {
        let rhs = if i == deriv { 1.0 } else { 0.0 };
        let acc: f64 = (0..i).map(|k| a[k][i] * z[k]).sum();
        z[i] = (rhs - acc) / a[i][i];
    }
    for v in reflectors.iter().rev() {
        let dot: f64 = v.iter().zip(&z).map(|(x, y)| x * y).sum();
        z.iter_mut().zip(v).for_each(|(zi, vi)| *zi -= 2.0 * vi * dot);
    }
    // undo the abscissa scaling: d^k/dx^k = m^-k d^k/du^k, times k!
    let factor = (1..=deriv).map(|k| k as f64).product::<f64>() / scale.powi(deriv as i32);
    Ok(z.into_iter().map(|w| w * factor).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilterKind {
    #[serde(rename = "mean")]
    RollingMean,
    #[serde(rename = "triangular")]
    TriangularMean,
    #[serde(rename = "savgol")]
    SavitzkyGolay,
}

impl FromStr for FilterKind {
    type Err = ArcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" | "rolling_mean" => Ok(FilterKind::RollingMean),
            "triangular" | "triangular_mean" => Ok(FilterKind::TriangularMean),
            "savgol" | "savitzky_golay" => Ok(FilterKind::SavitzkyGolay),
            other => Err(ArcError::UnknownFilter(other.to_owned())),
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterKind::RollingMean => "mean",
            FilterKind::TriangularMean => "triangular",
            FilterKind::SavitzkyGolay => "savgol",
        })
    }
}

/// A concrete window: kind, odd size `n >= 3` and, for Savitzky-Golay, the
/// polynomial order `p < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    kind: FilterKind,
    n: usize,
    p: Option<usize>,
}

impl WindowSpec {
    pub fn new(kind: FilterKind, n: usize, p: Option<usize>) -> Result<Self, ArcError> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(ArcError::InvalidWindow(n));
        }
        let p = match kind {
            FilterKind::SavitzkyGolay => {
                let p = p.unwrap_or(3.min(n - 1));
                if p >= n {
                    return Err(ArcError::InvalidOrder { n, p });
                }
                Some(p)
            }
            _ => None,
        };
        Ok(Self { kind, n, p })
    }

    pub fn savgol(n: usize, p: usize) -> Result<Self, ArcError> {
        Self::new(FilterKind::SavitzkyGolay, n, Some(p))
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> Option<usize> {
        self.p
    }

    /// Convolution weights, centre at index `n / 2`.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.n;
        let half = n / 2;
        match self.kind {
            FilterKind::RollingMean => vec![1.0 / n as f64; n],
            FilterKind::TriangularMean => {
                let total = ((half + 1) * (half + 1)) as f64;
                (0..n).map(|i| (half + 1 - i.abs_diff(half)) as f64 / total).collect()
            }
            FilterKind::SavitzkyGolay => {
                savgol_coefficients(n, self.p.expect("savgol window has an order"), 0).expect("validated window")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Smoothed {
    pub values: Vec<f64>,
    /// The series was shorter than the window and is returned unchanged.
    pub passthrough: bool,
}

/// Convolves the series with the window, mirroring it at both ends
/// (`x[-k] = x[k]`). Series shorter than the window come back unchanged with
/// `passthrough` set.
pub fn apply_window(series: &[f64], spec: &WindowSpec) -> Smoothed {
    let len = series.len();
    if len < spec.n {
        return Smoothed {
            values: series.to_vec(),
            passthrough: true,
        };
    }
    let weights = spec.weights();
    let half = spec.n as isize / 2;
    let last = len as isize - 1;
    let values = (0..len as isize)
        .map(|i| {
            weights
                .iter()
                .enumerate()
                .map(|(k, w)| {
                    let mut j = i + k as isize - half;
                    if j < 0 {
                        j = -j;
                    } else if j > last {
                        j = 2 * last - j;
                    }
                    w * series[j as usize]
                })
                .sum()
        })
        .collect();
    Smoothed {
        values,
        passthrough: false,
    }
}

/// How windows are chosen for a series: a fixed size, or sized from the
/// series length as the next odd integer >= max(5, round(len / 10)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct WindowPolicy {
    pub filter: FilterKind,
    pub size: Option<usize>,
    pub poly: usize,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self {
            filter: FilterKind::SavitzkyGolay,
            size: None,
            poly: 3,
        }
    }
}

impl WindowPolicy {
    pub fn auto_size(len: usize) -> usize {
        let tenth = (len + 5) / 10;
        let n = tenth.max(5);
        if n.is_multiple_of(2) {
            n + 1
        } else {
            n
        }
    }

    pub fn resolve(&self, len: usize) -> Result<WindowSpec, ArcError> {
        let n = self.size.unwrap_or_else(|| Self::auto_size(len));
        WindowSpec::new(self.filter, n, Some(self.poly))
    }

    /// Checks a fixed size and order up front.
    pub fn validate(&self) -> Result<(), ArcError> {
        self.resolve(self.size.unwrap_or(5)).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationKey {
    pub actor: usize,
    pub experiencer: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcPoint {
    pub event_id: usize,
    pub sentence_index: usize,
    /// Trigger token index in the document.
    pub position: usize,
    pub raw_t: f64,
    pub smoothed_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcSeries {
    pub points: Vec<ArcPoint>,
    pub window: Option<WindowSpec>,
    pub passthrough: bool,
}

impl ArcSeries {
    fn smooth(mut points: Vec<ArcPoint>, policy: &WindowPolicy) -> Result<Self, ArcError> {
        points.sort_by_key(|p| p.event_id);
        if points.is_empty() {
            return Ok(Self {
                points,
                window: None,
                passthrough: false,
            });
        }
        let spec = policy.resolve(points.len())?;
        let raw: Vec<f64> = points.iter().map(|p| p.raw_t).collect();
        let smoothed = apply_window(&raw, &spec);
        for (p, v) in points.iter_mut().zip(&smoothed.values) {
            p.smoothed_t = *v;
        }
        Ok(Self {
            points,
            window: Some(spec),
            passthrough: smoothed.passthrough,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn smoothed(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.smoothed_t).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationArc {
    pub key: RelationKey,
    pub series: ArcSeries,
}

fn point(record: &EventRecord, params: &CircumstanceParams) -> Result<ArcPoint, ArcError> {
    let raw_t = circumstance(record.sentiment, &record.emotions, params)?;
    Ok(ArcPoint {
        event_id: record.event_id,
        sentence_index: record.sentence_index(),
        position: record.trigger.token_index,
        raw_t,
        smoothed_t: raw_t,
    })
}

/// One arc per directed (actor, experiencer) pair, each smoothed over its own
/// events in narrative order. Records without both roles are skipped.
pub fn build_relation_arcs(
    records: &[EventRecord],
    params: &CircumstanceParams,
    policy: &WindowPolicy,
) -> Result<BTreeMap<RelationKey, RelationArc>, ArcError> {
    let mut grouped: BTreeMap<RelationKey, Vec<ArcPoint>> = BTreeMap::new();
    for r in records {
        if let Some((actor, experiencer)) = r.pair() {
            grouped
                .entry(RelationKey { actor, experiencer })
                .or_default()
                .push(point(r, params)?);
        }
    }
    grouped
        .into_iter()
        .map(|(key, points)| {
            Ok((
                key,
                RelationArc {
                    key,
                    series: ArcSeries::smooth(points, policy)?,
                },
            ))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Actor,
    Experiencer,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Actor => "actor",
            Role::Experiencer => "experiencer",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterArc {
    pub cluster_id: usize,
    pub actor: ArcSeries,
    pub experiencer: ArcSeries,
}

impl CharacterArc {
    pub fn series(&self, role: Role) -> &ArcSeries {
        match role {
            Role::Actor => &self.actor,
            Role::Experiencer => &self.experiencer,
        }
    }
}

/// The character's relation arcs merged per role, then smoothed over the
/// merged sequence. Each event belongs to exactly one directed pair, so the
/// merge is a disjoint union of the relation arcs' raw points.
pub fn build_character_arc(
    cluster_id: usize,
    records: &[EventRecord],
    params: &CircumstanceParams,
    policy: &WindowPolicy,
) -> Result<CharacterArc, ArcError> {
    let mut as_actor = Vec::new();
    let mut as_experiencer = Vec::new();
    for r in records {
        let Some((a, e)) = r.pair() else { continue };
        if a == cluster_id {
            as_actor.push(point(r, params)?);
        }
        if e == cluster_id {
            as_experiencer.push(point(r, params)?);
        }
    }
    Ok(CharacterArc {
        cluster_id,
        actor: ArcSeries::smooth(as_actor, policy)?,
        experiencer: ArcSeries::smooth(as_experiencer, policy)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Peak,
    Valley,
}

impl fmt::Display for ExtremumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtremumKind::Peak => "peak",
            ExtremumKind::Valley => "valley",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    /// Position in the series.
    pub index: usize,
    pub kind: ExtremumKind,
    pub prominence: f64,
}

/// Interior local maxima of `values` (flat tops reported at their middle)
/// with their topographic prominence.
fn peaks(values: &[f64]) -> Vec<(usize, f64)> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i - 1] < values[i] {
            let mut ahead = i + 1;
            while ahead + 1 < n && values[ahead] == values[i] {
                ahead += 1;
            }
            if values[ahead] < values[i] {
                let mid = (i + ahead - 1) / 2;
                let v = values[mid];
                let mut left_min = v;
                for &x in values[..i].iter().rev() {
                    if x > v {
                        break;
                    }
                    left_min = left_min.min(x);
                }
                let mut right_min = v;
                for &x in &values[ahead..] {
                    if x > v {
                        break;
                    }
                    right_min = right_min.min(x);
                }
                out.push((mid, v - left_min.max(right_min)));
                i = ahead;
                continue;
            }
        }
        i += 1;
    }
    out
}

/// Peaks and valleys whose prominence is at least `min_prominence`. The
/// prominence is the height above the higher of the two lowest points
/// separating the extremum from more extreme terrain on either side.
pub fn find_extrema(values: &[f64], min_prominence: f64) -> Vec<Extremum> {
    if values.len() < 3 {
        return Vec::new();
    }
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    let mut out: Vec<Extremum> = peaks(values)
        .into_iter()
        .map(|(index, prominence)| Extremum {
            index,
            kind: ExtremumKind::Peak,
            prominence,
        })
        .chain(peaks(&negated).into_iter().map(|(index, prominence)| Extremum {
            index,
            kind: ExtremumKind::Valley,
            prominence,
        }))
        .filter(|e| e.prominence >= min_prominence)
        .collect();
    out.sort_by_key(|e| e.index);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn savgol_five_quadratic() {
        let w = savgol_coefficients(5, 2, 0).unwrap();
        let expected: Vec<f64> = [-3.0, 12.0, 17.0, 12.0, -3.0].iter().map(|x| x / 35.0).collect();
        assert!(close(&w, &expected, 1e-12), "{w:?}");
    }

    #[test]
    fn savgol_degree_zero_is_mean() {
        let w = savgol_coefficients(3, 0, 0).unwrap();
        assert!(close(&w, &[1.0 / 3.0; 3], 1e-12));
    }

    #[test]
    fn savgol_full_degree_is_identity() {
        let w = savgol_coefficients(5, 4, 0).unwrap();
        assert!(close(&w, &[0.0, 0.0, 1.0, 0.0, 0.0], 1e-12), "{w:?}");
    }

    #[test]
    fn savgol_first_derivative() {
        // central difference of a quadratic fit over 5 points: (-2,-1,0,1,2)/10
        let w = savgol_coefficients(5, 2, 1).unwrap();
        assert!(close(&w, &[-0.2, -0.1, 0.0, 0.1, 0.2], 1e-12), "{w:?}");
    }

    #[test]
    fn savgol_rejects_bad_parameters() {
        assert_eq!(savgol_coefficients(4, 2, 0), Err(ArcError::InvalidWindow(4)));
        assert_eq!(savgol_coefficients(5, 5, 0), Err(ArcError::InvalidOrder { n: 5, p: 5 }));
        assert_eq!(
            savgol_coefficients(5, 2, 3),
            Err(ArcError::InvalidDerivative { deriv: 3, p: 2 })
        );
        assert!(WindowSpec::new(FilterKind::RollingMean, 1, None).is_err());
        assert!(WindowSpec::savgol(3, 3).is_err());
    }

    #[test]
    fn rolling_mean_interior() {
        let spec = WindowSpec::new(FilterKind::RollingMean, 3, None).unwrap();
        let out = apply_window(&[1.0, 2.0, 3.0, 4.0, 5.0], &spec);
        assert!(!out.passthrough);
        assert!(close(&out.values[1..4], &[2.0, 3.0, 4.0], 1e-12));
        // mirrored edges: (2 + 1 + 2) / 3 and (4 + 5 + 4) / 3
        assert!(close(&[out.values[0], out.values[4]], &[5.0 / 3.0, 13.0 / 3.0], 1e-12));
    }

    #[test]
    fn triangular_weights() {
        let spec = WindowSpec::new(FilterKind::TriangularMean, 5, None).unwrap();
        assert!(close(
            &spec.weights(),
            &[1.0 / 9.0, 2.0 / 9.0, 3.0 / 9.0, 2.0 / 9.0, 1.0 / 9.0],
            1e-15
        ));
    }

    #[test]
    fn short_series_passes_through() {
        let spec = WindowSpec::savgol(7, 3).unwrap();
        let out = apply_window(&[1.0, 5.0, 2.0], &spec);
        assert!(out.passthrough);
        assert_eq!(out.values, [1.0, 5.0, 2.0]);
    }

    #[test]
    fn auto_window_size() {
        assert_eq!(WindowPolicy::auto_size(3), 5);
        assert_eq!(WindowPolicy::auto_size(60), 7);
        assert_eq!(WindowPolicy::auto_size(100), 11);
        assert_eq!(WindowPolicy::auto_size(115), 13);
        assert_eq!(WindowPolicy::auto_size(124), 13);
    }

    #[test]
    fn extrema_simple_peak() {
        let e = find_extrema(&[0.0, 1.0, 0.0], 0.5);
        assert_eq!(
            e,
            [Extremum {
                index: 1,
                kind: ExtremumKind::Peak,
                prominence: 1.0
            }]
        );
        assert!(find_extrema(&[0.0, 1.0, 2.0, 3.0], 0.0).is_empty());
        assert!(find_extrema(&[0.0, 1.0], 0.0).is_empty());
    }

    #[test]
    fn extrema_prominence_uses_higher_saddle() {
        // peak 3 at index 1: left base 0, right path dips to 1 before reaching 5
        let e = find_extrema(&[0.0, 3.0, 1.0, 5.0, 0.0], 0.0);
        let p1 = e.iter().find(|x| x.index == 1).unwrap();
        assert_eq!(p1.prominence, 2.0);
        let p3 = e.iter().find(|x| x.index == 3).unwrap();
        assert_eq!(p3.prominence, 5.0);
        let v = e.iter().find(|x| x.index == 2).unwrap();
        assert_eq!((v.kind, v.prominence), (ExtremumKind::Valley, 2.0));
        assert_eq!(find_extrema(&[0.0, 3.0, 1.0, 5.0, 0.0], 2.5).len(), 1);
    }

    #[test]
    fn extrema_plateau_reports_middle() {
        let e = find_extrema(&[0.0, 2.0, 2.0, 2.0, 0.0], 1.0);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].index, 2);
    }
}
