//! Stochastic block model on an undirected simple graph.
//!
//! Node `i` has block `x_i ~ Categorical(p)`; each ordered pair `(i, j)`,
//! `i != j`, contributes `Bernoulli(nu_{x_i x_j})` for the edge indicator.
//! Counting ordered pairs means every undirected pair enters twice.
//!
//! `theta = (p_0..p_{Q-1}, nu_{ql} for q <= l)`, the `nu` block in row order.

use rand::Rng;

use crate::error::{Error, Result};
use crate::latent::{LatentPoint, LatentSpace};
use crate::model::LatentModel;
use crate::rng::SmcRng;

const KARATE_EDGES: &str = include_str!("../../data/karate.edgelist");

/// Two-faction split of the karate club (0 = instructor's group).
pub const KARATE_FACTIONS: [usize; 34] = [
    0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1,
];

#[derive(Debug, Clone, PartialEq)]
pub struct SbmGraph {
    num_nodes: usize,
    neighbors: Vec<Vec<usize>>,
    adjacency: Vec<bool>,
    num_edges: usize,
}

impl SbmGraph {
    pub fn new(num_nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_nodes == 0 {
            return Err(Error::InvalidConfig("graph needs at least one node".into()));
        }
        let mut g = Self {
            num_nodes,
            neighbors: vec![Vec::new(); num_nodes],
            adjacency: vec![false; num_nodes * num_nodes],
            num_edges: 0,
        };
        for (k, &(i, j)) in edges.iter().enumerate() {
            g.add_edge(i, j).map_err(|message| Error::Parse { line: k + 1, message })?;
        }
        Ok(g)
    }

    fn add_edge(&mut self, i: usize, j: usize) -> std::result::Result<(), String> {
        let n = self.num_nodes;
        if i >= n || j >= n {
            return Err(format!("edge ({i}, {j}) references a node outside 0..{n}"));
        }
        if i == j {
            return Err(format!("self loop at node {i}"));
        }
        if self.adjacency[i * n + j] {
            return Err(format!("duplicate edge ({i}, {j})"));
        }
        self.adjacency[i * n + j] = true;
        self.adjacency[j * n + i] = true;
        self.neighbors[i].push(j);
        self.neighbors[j].push(i);
        self.num_edges += 1;
        Ok(())
    }

    /// Parses whitespace-separated, 0-indexed `i j` lines. Blank lines and
    /// text after `#` are ignored. The node count is `num_nodes` if given,
    /// otherwise one more than the largest index.
    pub fn parse_edge_list(text: &str, num_nodes: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |message: String| Error::Parse { line: k + 1, message };
            if fields.len() != 2 {
                return Err(parse_err(format!("expected two node indices, found {:?}", line)));
            }
            let idx = |s: &str| s.parse::<usize>().map_err(|e| parse_err(format!("bad node index {s:?}: {e}")));
            edges.push((k + 1, idx(fields[0])?, idx(fields[1])?));
        }
        let n = match num_nodes {
            Some(n) => n,
            None => edges.iter().map(|&(_, i, j)| i.max(j) + 1).max().unwrap_or(0),
        };
        if n == 0 {
            return Err(Error::Parse {
                line: 0,
                message: "edge list is empty and no node count was given".into(),
            });
        }
        let mut g = Self::new(n, &[])?;
        for (line, i, j) in edges {
            g.add_edge(i, j).map_err(|message| Error::Parse { line, message })?;
        }
        Ok(g)
    }

    /// Zachary's karate club network (34 nodes, 78 edges).
    pub fn karate() -> Self {
        Self::parse_edge_list(KARATE_EDGES, Some(34)).expect("bundled karate edge list is valid")
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.num_nodes + j]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_nodes)
            .flat_map(|i| self.neighbors[i].iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect()
    }

    /// Draws a graph and its true labels from the model.
    /// `nu` is the full symmetric `Q x Q` matrix in row-major order.
    pub fn simulate(num_nodes: usize, p: &[f64], nu: &[f64], rng: &mut SmcRng) -> Result<(Self, Vec<usize>)> {
        let q = p.len();
        if nu.len() != q * q {
            return Err(Error::LengthMismatch {
                left: nu.len(),
                right: q * q,
            });
        }
        let labels: Vec<usize> = (0..num_nodes)
            .map(|_| {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (k, pk) in p.iter().enumerate() {
                    acc += pk;
                    if u < acc {
                        return k;
                    }
                }
                q - 1
            })
            .collect();
        let mut edges = Vec::new();
        for i in 0..num_nodes {
            for j in i + 1..num_nodes {
                if rng.random::<f64>() < nu[labels[i] * q + labels[j]] {
                    edges.push((i, j));
                }
            }
        }
        Ok((Self::new(num_nodes, &edges)?, labels))
    }
}

/// Label counts and ordered-pair edge / pair counts per block pair
/// (`Q x Q`, row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct SbmStats {
    pub counts: Vec<f64>,
    pub edges: Vec<f64>,
    pub pairs: Vec<f64>,
}

impl SbmStats {
    pub fn num_blocks(&self) -> usize {
        self.counts.len()
    }

    /// Closed-form maximizer of the complete-data likelihood. Block pairs
    /// with no node pairs keep the value from `fallback`.
    pub fn m_step(&self, fallback: &[f64]) -> Vec<f64> {
        let q = self.num_blocks();
        let total: f64 = self.counts.iter().sum();
        let mut theta: Vec<f64> = self.counts.iter().map(|c| c / total).collect();
        for a in 0..q {
            for b in a..q {
                let (e, p) = if a == b {
                    (self.edges[a * q + a], self.pairs[a * q + a])
                } else {
                    (
                        self.edges[a * q + b] + self.edges[b * q + a],
                        self.pairs[a * q + b] + self.pairs[b * q + a],
                    )
                };
                theta.push(if p > 0.0 { e / p } else { fallback[q + nu_index(a, b, q)] });
            }
        }
        theta
    }

    /// `s + gamma (other - s)` componentwise.
    pub fn blend(&self, other: &SbmStats, gamma: f64) -> SbmStats {
        let mix = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + gamma * (y - x)).collect();
        SbmStats {
            counts: mix(&self.counts, &other.counts),
            edges: mix(&self.edges, &other.edges),
            pairs: mix(&self.pairs, &other.pairs),
        }
    }
}

pub fn sbm_suff_stats(labels: &[usize], graph: &SbmGraph, num_blocks: usize) -> SbmStats {
    let q = num_blocks;
    let mut counts = vec![0.0; q];
    for &c in labels {
        counts[c] += 1.0;
    }
    let mut edges = vec![0.0; q * q];
    for (i, &a) in labels.iter().enumerate() {
        for &j in graph.neighbors(i) {
            edges[a * q + labels[j]] += 1.0;
        }
    }
    let mut pairs = vec![0.0; q * q];
    for a in 0..q {
        for b in 0..q {
            pairs[a * q + b] = counts[a] * counts[b] - if a == b { counts[a] } else { 0.0 };
        }
    }
    SbmStats { counts, edges, pairs }
}

/// Position of `nu_{ab}` (`a <= b` after sorting) inside the `nu` block.
pub fn nu_index(a: usize, b: usize, num_blocks: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * num_blocks - a * a.saturating_sub(1) / 2 + (b - a)
}

pub fn sbm_theta_dim(num_blocks: usize) -> usize {
    num_blocks + num_blocks * (num_blocks + 1) / 2
}

/// Flattens `p` and the symmetric `Q x Q` matrix `nu` into `theta`.
pub fn sbm_theta(p: &[f64], nu: &[f64]) -> Vec<f64> {
    let q = p.len();
    let mut theta = p.to_vec();
    for a in 0..q {
        for b in a..q {
            theta.push(nu[a * q + b]);
        }
    }
    theta
}

/// The full symmetric `Q x Q` matrix of edge probabilities in `theta`.
pub fn sbm_nu_matrix(theta: &[f64], num_blocks: usize) -> Vec<f64> {
    let q = num_blocks;
    let mut nu = vec![0.0; q * q];
    for a in 0..q {
        for b in 0..q {
            nu[a * q + b] = theta[q + nu_index(a, b, q)];
        }
    }
    nu
}

/// Requires every component in `(0, 1)` and rescales `p` onto the simplex.
pub fn sbm_theta_postprocess(mut theta: Vec<f64>, num_blocks: usize) -> Result<Vec<f64>> {
    if let Some((index, &value)) = theta.iter().enumerate().find(|(_, v)| !(**v > 0.0 && **v < 1.0)) {
        return Err(Error::DomainViolation { index, value });
    }
    let total: f64 = theta[..num_blocks].iter().sum();
    for p in &mut theta[..num_blocks] {
        *p /= total;
    }
    Ok(theta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SbmModel {
    pub graph: SbmGraph,
    pub num_blocks: usize,
    /// Factor applied to the theta-gradient in the mirror step. Defaults to
    /// one over the number of ordered node pairs.
    pub gradient_scale: f64,
}

impl SbmModel {
    pub fn new(graph: SbmGraph, num_blocks: usize) -> Result<Self> {
        if num_blocks < 2 {
            return Err(Error::InvalidConfig("the block model needs at least 2 blocks".into()));
        }
        let d = graph.num_nodes() as f64;
        let gradient_scale = 1.0 / (d * (d - 1.0)).max(1.0);
        Ok(Self { graph, num_blocks, gradient_scale })
    }

    pub fn stats(&self, labels: &[usize]) -> SbmStats {
        sbm_suff_stats(labels, &self.graph, self.num_blocks)
    }

    /// `log p_theta(x, y)` from sufficient statistics.
    pub fn log_joint_from_stats(&self, theta: &[f64], s: &SbmStats) -> f64 {
        let q = self.num_blocks;
        let mut total = 0.0;
        for a in 0..q {
            if s.counts[a] > 0.0 {
                total += s.counts[a] * theta[a].ln();
            }
            for b in 0..q {
                let nu = theta[q + nu_index(a, b, q)];
                let (e, non) = (s.edges[a * q + b], s.pairs[a * q + b] - s.edges[a * q + b]);
                if e > 0.0 {
                    total += e * nu.ln();
                }
                if non > 0.0 {
                    total += non * (1.0 - nu).ln();
                }
            }
        }
        total
    }
}

impl LatentModel for SbmModel {
    fn latent_space(&self) -> LatentSpace {
        LatentSpace::Discrete {
            dim: self.graph.num_nodes(),
            num_categories: self.num_blocks,
        }
    }

    fn theta_dim(&self) -> usize {
        sbm_theta_dim(self.num_blocks)
    }

    fn log_joint(&self, theta: &[f64], x: &LatentPoint) -> f64 {
        self.log_joint_from_stats(theta, &self.stats(x.labels()))
    }

    fn grad_theta_u(&self, theta: &[f64], x: &LatentPoint) -> Vec<f64> {
        let q = self.num_blocks;
        let s = self.stats(x.labels());
        let mut g: Vec<f64> = (0..q).map(|a| -s.counts[a] / theta[a]).collect();
        g.resize(self.theta_dim(), 0.0);
        for a in 0..q {
            for b in 0..q {
                let k = q + nu_index(a, b, q);
                let nu = theta[k];
                let (e, non) = (s.edges[a * q + b], s.pairs[a * q + b] - s.edges[a * q + b]);
                g[k] -= e / nu - non / (1.0 - nu);
            }
        }
        g
    }

    fn theta_gradient_scale(&self) -> f64 {
        self.gradient_scale
    }

    fn log_joint_many(&self, thetas: &[&[f64]], x: &LatentPoint) -> Vec<f64> {
        let s = self.stats(x.labels());
        thetas.iter().map(|t| self.log_joint_from_stats(t, &s)).collect()
    }

    /// O(d_x): only pairs that involve `site` change.
    fn log_joint_site_delta(&self, theta: &[f64], x: &[usize], site: usize, new_category: usize) -> f64 {
        let q = self.num_blocks;
        let (from, to) = (x[site], new_category);
        if from == to {
            return 0.0;
        }
        let mut others = vec![0.0; q];
        for (j, &c) in x.iter().enumerate() {
            if j != site {
                others[c] += 1.0;
            }
        }
        let mut linked = vec![0.0; q];
        for &j in self.graph.neighbors(site) {
            linked[x[j]] += 1.0;
        }
        let mut delta = theta[to].ln() - theta[from].ln();
        for l in 0..q {
            let nu_to = theta[q + nu_index(to, l, q)];
            let nu_from = theta[q + nu_index(from, l, q)];
            let logit = |nu: f64| nu.ln() - (1.0 - nu).ln();
            // each affected unordered pair enters as (i, j) and (j, i)
            let edge_part = if linked[l] > 0.0 { linked[l] * (logit(nu_to) - logit(nu_from)) } else { 0.0 };
            let pair_part = if others[l] > 0.0 { others[l] * ((1.0 - nu_to).ln() - (1.0 - nu_from).ln()) } else { 0.0 };
            delta += 2.0 * (edge_part + pair_part);
        }
        delta
    }

    fn log_prior0(&self, x: &LatentPoint) -> f64 {
        -(x.len() as f64) * (self.num_blocks as f64).ln()
    }

    fn log_prior0_site_delta(&self, _x: &[usize], _site: usize, _new_category: usize) -> f64 {
        0.0
    }

    fn sample_prior0(&self, rng: &mut SmcRng) -> LatentPoint {
        LatentPoint::Discrete((0..self.graph.num_nodes()).map(|_| rng.random_range(0..self.num_blocks)).collect())
    }

    fn category_law(&self, _site: usize) -> Option<Vec<f64>> {
        Some(vec![1.0 / self.num_blocks as f64; self.num_blocks])
    }

    fn project_theta(&self, theta: Vec<f64>) -> Result<Vec<f64>> {
        sbm_theta_postprocess(theta, self.num_blocks)
    }
}
