use rand::Rng;

use crate::error::Result;
use crate::particles::ParticleCloud;
use crate::rng::RngStream;

/// Ancestor indices drawn i.i.d. from the cloud's weights.
///
/// Uses inverse-CDF lookup on sorted uniforms, which is the same law as N
/// independent categorical draws.
pub fn multinomial_ancestors(cloud: &ParticleCloud, rng: &RngStream) -> Result<Vec<usize>> {
    cloud.require_normalized()?;
    let n = cloud.len();
    let mut r = rng.rng();
    let mut cdf = Vec::with_capacity(n);
    let mut acc = 0.0;
    for lw in &cloud.log_weights {
        acc += lw.exp();
        cdf.push(acc);
    }
    let mut uniforms: Vec<f64> = (0..n).map(|_| r.random::<f64>() * acc).collect();
    uniforms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ancestors = Vec::with_capacity(n);
    let mut j = 0;
    for u in uniforms {
        // u < acc, so zero-mass slots (empty cdf intervals) are never selected
        while j + 1 < n && cdf[j] <= u {
            j += 1;
        }
        ancestors.push(j);
    }
    Ok(ancestors)
}

/// Multinomial resampling; the output is equally weighted and normalized.
pub fn multinomial_resample(cloud: &ParticleCloud, rng: &RngStream) -> Result<ParticleCloud> {
    let ancestors = multinomial_ancestors(cloud, rng)?;
    let particles = ancestors.iter().map(|&a| cloud.particles[a].clone()).collect();
    ParticleCloud::uniform(particles)
}
