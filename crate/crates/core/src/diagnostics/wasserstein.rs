use crate::error::Result;
use crate::particles::ParticleCloud;

fn sorted_marginal(cloud: &ParticleCloud, coordinate: usize) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = cloud
        .particles
        .iter()
        .zip(cloud.weights())
        .map(|(x, w)| (x.coord(coordinate), w))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

/// `W_1` between the weighted 1-D marginals of two clouds at `coordinate`,
/// computed as the integral of `|F_a - F_b|` over the merged support.
pub fn wasserstein1_1d(a: &ParticleCloud, b: &ParticleCloud, coordinate: usize) -> Result<f64> {
    a.require_normalized()?;
    b.require_normalized()?;
    let pa = sorted_marginal(a, coordinate);
    let pb = sorted_marginal(b, coordinate);
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (0.0f64, 0.0f64);
    let mut prev: Option<f64> = None;
    let mut total = 0.0f64;
    while i < pa.len() || j < pb.len() {
        let t = match (pa.get(i), pb.get(j)) {
            (Some(x), Some(y)) => x.0.min(y.0),
            (Some(x), None) => x.0,
            (None, Some(y)) => y.0,
            (None, None) => unreachable!(),
        };
        if let Some(p) = prev {
            total += (fa - fb).abs() * (t - p);
        }
        while i < pa.len() && pa[i].0 == t {
            fa += pa[i].1;
            i += 1;
        }
        while j < pb.len() && pb[j].0 == t {
            fb += pb[j].1;
            j += 1;
        }
        prev = Some(t);
    }
    Ok(total)
}
