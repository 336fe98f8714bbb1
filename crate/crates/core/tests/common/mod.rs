//! Independent oracles and fixture helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Smoothing weights from the least-squares normal equations, in exact
/// arithmetic. With design matrix `A[i][j] = x_i^j` over `x = -m..=m`, the
/// fitted value at the centre is `e_0^T (A^T A)^-1 A^T y`, so the weights are
/// `A (A^T A)^-1 e_0`.
#[allow(clippy::needless_range_loop)]
pub fn savgol_oracle(n: usize, p: usize) -> Vec<BigRational> {
    let m = (n / 2) as i64;
    let cols = p + 1;
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let a: Vec<Vec<BigRational>> = (-m..=m)
        .map(|x| (0..cols).map(|j| int(x.pow(j as u32))).collect())
        .collect();
    // augmented [A^T A | e_0]
    let mut g: Vec<Vec<BigRational>> = (0..cols)
        .map(|r| {
            let mut row: Vec<BigRational> = (0..cols)
                .map(|c| a.iter().fold(BigRational::zero(), |acc, ai| acc + &ai[r] * &ai[c]))
                .collect();
            row.push(if r == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            });
            row
        })
        .collect();
    for col in 0..cols {
        let pivot = (col..cols)
            .find(|&r| !g[r][col].is_zero())
            .expect("singular normal matrix");
        g.swap(col, pivot);
        let inv = BigRational::one() / &g[col][col];
        for v in g[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..cols {
            if r != col && !g[r][col].is_zero() {
                let f = g[r][col].clone();
                for c in 0..=cols {
                    let delta = &f * &g[col][c];
                    g[r][c] = &g[r][c] - delta;
                }
            }
        }
    }
    let y: Vec<BigRational> = g.iter().map(|row| row[cols].clone()).collect();
    a.iter()
        .map(|ai| ai.iter().zip(&y).fold(BigRational::zero(), |acc, (x, yj)| acc + x * yj))
        .collect()
}

pub fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().expect("finite rational")
}

/// Direct evaluation of `alpha * s + sum(beta_label * confidence)`.
pub fn circumstance_direct(s: f64, emotions: &[(&str, f64)], alpha: f64, beta: &BTreeMap<String, f64>) -> f64 {
    let mut sum = 0.0;
    for (label, c) in emotions {
        sum += beta[*label] * c;
    }
    alpha * s + sum
}

pub const EMOTION_NAMES: [&str; 28] = [
    "admiration",
    "amusement",
    "anger",
    "annoyance",
    "approval",
    "caring",
    "confusion",
    "curiosity",
    "desire",
    "disappointment",
    "disapproval",
    "disgust",
    "embarrassment",
    "excitement",
    "fear",
    "gratitude",
    "grief",
    "joy",
    "love",
    "nervousness",
    "optimism",
    "pride",
    "realization",
    "relief",
    "remorse",
    "sadness",
    "surprise",
    "neutral",
];

/// Gold trigger lists from `fixtures/realis/gold.tsv`, one entry per line of
/// the sample.
pub fn realis_gold() -> Vec<Vec<String>> {
    read_fixture("realis/gold.tsv")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let words = l.split('\t').nth(1).unwrap_or("");
            words.split(',').filter(|w| !w.is_empty()).map(str::to_owned).collect()
        })
        .collect()
}

/// Peak resident set size of this process in bytes (Linux only).
pub fn peak_rss_bytes() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}
