#![allow(dead_code)]

use emt_core::ext::{ExtReal, PosInf};
use emt_core::{GenMetricSpace, SpaceKind};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Shortest-path closure of a random weighted digraph. With
/// `infinite_prob > 0` some edges are missing, which can leave infinite
/// distances after the closure.
pub fn random_category(rng: &mut ChaCha8Rng, n: usize, infinite_prob: f64) -> GenMetricSpace {
    let mut d = vec![vec![PosInf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = if i == j {
                ExtReal::ZERO
            } else if rng.gen_bool(infinite_prob) {
                PosInf
            } else {
                ExtReal::Finite(f64::from(rng.gen_range(1u32..=40)) / 8.0)
            };
        }
    }
    close(&mut d);
    GenMetricSpace::new(GenMetricSpace::numbered(n), d, SpaceKind::RplusCategory).unwrap()
}

/// A classical metric with all distances at least `min_d`.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize, min_d: f64) -> GenMetricSpace {
    let mut d = vec![vec![ExtReal::ZERO; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = ExtReal::Finite(min_d + rng.gen_range(0.0..4.0));
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    close(&mut d);
    GenMetricSpace::new(GenMetricSpace::numbered(n), d, SpaceKind::ClassicalMetric).unwrap()
}

fn close(d: &mut [Vec<ExtReal>]) {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].plus(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
}

/// Random non-negative values with a few infinities and repeated values.
pub fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<ExtReal> {
    (0..n)
        .map(|_| match rng.gen_range(0..10) {
            0 => PosInf,
            1 => ExtReal::ZERO,
            _ => ExtReal::Finite(f64::from(rng.gen_range(0u32..=48)) / 8.0),
        })
        .collect()
}

/// Exact on infinities, within `tol` on finite values.
pub fn close_enough(a: &[ExtReal], b: &[ExtReal], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(*y, tol))
}
