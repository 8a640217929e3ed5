use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::models::sbm::sbm_nu_matrix;
use crate::particles::ParticleCloud;

fn choose2(n: f64) -> f64 {
    n * (n - 1.0) / 2.0
}

/// Adjusted Rand index of two partitions given as label vectors.
///
/// Returns 1 when both partitions are trivial in the same way (the index
/// and its expectation coincide), which is the usual convention.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut table: HashMap<(usize, usize), f64> = HashMap::new();
    let mut rows: HashMap<usize, f64> = HashMap::new();
    let mut cols: HashMap<usize, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1.0;
        *rows.entry(x).or_default() += 1.0;
        *cols.entry(y).or_default() += 1.0;
    }
    // sort before summing so the result does not depend on hash order
    let sum_sorted = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.into_iter().map(choose2).sum::<f64>()
    };
    let index = sum_sorted(table.into_values().collect());
    let sa = sum_sorted(rows.into_values().collect());
    let sb = sum_sorted(cols.into_values().collect());
    let expected = sa * sb / choose2(a.len() as f64);
    let max = 0.5 * (sa + sb);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

/// Per site, the category with the most weight; ties go to the smaller index.
pub fn posterior_mode_labels(cloud: &ParticleCloud, num_categories: usize) -> Result<Vec<usize>> {
    cloud.require_normalized()?;
    let d = cloud.particles[0].len();
    let mut mass = vec![vec![0.0; num_categories]; d];
    for (x, w) in cloud.particles.iter().zip(cloud.weights()) {
        for (site, &c) in x.labels().iter().enumerate() {
            mass[site][c] += w;
        }
    }
    Ok(mass
        .iter()
        .map(|m| {
            let mut best = 0;
            for (k, v) in m.iter().enumerate() {
                if *v > m[best] {
                    best = k;
                }
            }
            best
        })
        .collect())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Mean squared error of the `nu` block of an SBM parameter, minimized over
/// relabelings of the estimated blocks.
pub fn sbm_theta_mse(estimate: &[f64], truth: &[f64], num_blocks: usize) -> f64 {
    let q = num_blocks;
    let (est, tru) = (sbm_nu_matrix(estimate, q), sbm_nu_matrix(truth, q));
    let count = (q * (q + 1) / 2) as f64;
    permutations(q)
        .iter()
        .map(|perm| {
            let mut s = 0.0;
            for a in 0..q {
                for b in a..q {
                    s += (est[perm[a] * q + perm[b]] - tru[a * q + b]).powi(2);
                }
            }
            s / count
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latent::LatentPoint;
    use crate::particles::normalize_weights;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn ari_cases() {
        let a = [0, 0, 1, 1, 2, 2];
        assert_eq!(adjusted_rand_index(&a, &a).unwrap(), 1.0);
        assert_eq!(adjusted_rand_index(&a, &[2, 2, 0, 0, 1, 1]).unwrap(), 1.0);
        // contingency table [[1, 1], [0, 2]]: index 1, expected 1, max 1.5
        assert_eq!(adjusted_rand_index(&[1, 1, 2, 2], &[1, 2, 2, 2]).unwrap(), 0.0);
        assert!(matches!(adjusted_rand_index(&[0], &[0, 1]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn ari_known_value() {
        // table [[2, 1], [0, 3]]: index 1 + 3 = 4, rows 3+3 -> 6, cols 1+6 -> 7,
        // expected 6*7/15 = 2.8, max 6.5 -> (4 - 2.8) / (6.5 - 2.8)
        let v = adjusted_rand_index(&[0, 0, 0, 1, 1, 1], &[0, 0, 1, 1, 1, 1]).unwrap();
        assert_relative_eq!(v, 1.2 / 3.7, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn ari_is_symmetric_and_relabel_invariant(pairs in prop::collection::vec((0usize..4, 0usize..3), 2..40)) {
            let a: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let b: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            let ab = adjusted_rand_index(&a, &b).unwrap();
            prop_assert_eq!(ab, adjusted_rand_index(&b, &a).unwrap());
            let relabeled: Vec<usize> = a.iter().map(|x| 7 - x).collect();
            prop_assert!((ab - adjusted_rand_index(&relabeled, &b).unwrap()).abs() < 1e-12);
            prop_assert!(ab <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn mode_labels() {
        let single = ParticleCloud::uniform(vec![LatentPoint::Discrete(vec![1, 0, 1])]).unwrap();
        assert_eq!(posterior_mode_labels(&single, 2).unwrap(), vec![1, 0, 1]);
        let tie = ParticleCloud::uniform(vec![LatentPoint::Discrete(vec![0, 1]), LatentPoint::Discrete(vec![1, 1])]).unwrap();
        assert_eq!(posterior_mode_labels(&tie, 2).unwrap(), vec![0, 1]);
        let pts = vec![LatentPoint::Discrete(vec![1, 0]), LatentPoint::Discrete(vec![0, 0])];
        let c = normalize_weights(ParticleCloud::weighted(pts, vec![0.7f64.ln(), 0.3f64.ln()]).unwrap()).unwrap();
        assert_eq!(posterior_mode_labels(&c, 2).unwrap(), vec![1, 0]);
    }

    #[test]
    fn nu_mse_ignores_block_order() {
        let truth = vec![0.6, 0.4, 0.25, 0.1, 0.2];
        let swapped = vec![0.4, 0.6, 0.2, 0.1, 0.25];
        assert_eq!(sbm_theta_mse(&swapped, &truth, 2), 0.0);
        assert_relative_eq!(sbm_theta_mse(&[0.5, 0.5, 0.35, 0.1, 0.2], &truth, 2), 0.01 / 3.0, epsilon = 1e-15);
        assert_eq!(permutations(3).len(), 6);
    }
}
