//! Geometric model of a Rayleigh-damped mass–spring network and assembly of
//! its stiffness, damping and mass matrices.
//!
//! Degrees of freedom are ordered node-major, coordinate-minor: node `i`
//! owns rows `i*d .. i*d + d`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::linalg::{BlockPartition, SymMatrix};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node<T> {
    pub position: Vec<T>,
    pub mass: T,
    pub terminal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spring<T> {
    pub i: usize,
    pub j: usize,
    pub k: T,
}

/// Proportionality constants of `C = αK + βM`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayleighParams<T> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> RayleighParams<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let p = Self { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn undamped() -> Self {
        Self {
            alpha: T::zero(),
            beta: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= T::zero() && self.beta >= T::zero())
            || !self.alpha.is_finite()
            || !self.beta.is_finite()
        {
            return Err(Error::InvalidNetwork(format!(
                "Rayleigh constants must be finite and nonnegative, got alpha={} beta={}",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }
}

/// A validated network. Construct with [`ElastodynamicNetwork::new`] or
/// deserialize from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawNetwork<T>",
    bound(deserialize = "T: Real + Deserialize<'de>")
)]
pub struct ElastodynamicNetwork<T: Real> {
    dimension: usize,
    nodes: Vec<Node<T>>,
    springs: Vec<Spring<T>>,
    rayleigh: RayleighParams<T>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork<T> {
    dimension: usize,
    nodes: Vec<Node<T>>,
    springs: Vec<Spring<T>>,
    rayleigh: RayleighParams<T>,
}

impl<T: Real> TryFrom<RawNetwork<T>> for ElastodynamicNetwork<T> {
    type Error = Error;
    fn try_from(raw: RawNetwork<T>) -> Result<Self> {
        Self::new(raw.dimension, raw.nodes, raw.springs, raw.rayleigh)
    }
}

impl<T: Real> ElastodynamicNetwork<T> {
    /// Validates the network and merges parallel springs on the same
    /// unordered node pair by adding their stiffnesses.
    pub fn new(
        dimension: usize,
        nodes: Vec<Node<T>>,
        springs: Vec<Spring<T>>,
        rayleigh: RayleighParams<T>,
    ) -> Result<Self> {
        validate_nodes(dimension, &nodes)?;
        if !nodes.iter().any(|n| n.terminal) {
            return Err(Error::InvalidNetwork("at least one terminal node required".into()));
        }
        rayleigh.validate()?;
        let springs = merge_springs(&nodes, springs)?;
        Ok(Self {
            dimension,
            nodes,
            springs,
            rayleigh,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn springs(&self) -> &[Spring<T>] {
        &self.springs
    }

    pub fn rayleigh(&self) -> RayleighParams<T> {
        self.rayleigh
    }

    pub fn with_rayleigh(mut self, rayleigh: RayleighParams<T>) -> Result<Self> {
        rayleigh.validate()?;
        self.rayleigh = rayleigh;
        Ok(self)
    }

    pub fn terminal_positions(&self) -> Vec<Vec<T>> {
        self.nodes
            .iter()
            .filter(|n| n.terminal)
            .map(|n| n.position.clone())
            .collect()
    }

    pub fn assemble(&self) -> Result<SystemMatrices<T>> {
        assemble(self)
    }
}

pub(crate) fn validate_nodes<T: Real>(dimension: usize, nodes: &[Node<T>]) -> Result<()> {
    if dimension != 2 && dimension != 3 {
        return Err(Error::InvalidNetwork(format!(
            "dimension must be 2 or 3, got {dimension}"
        )));
    }
    for (idx, n) in nodes.iter().enumerate() {
        if n.position.len() != dimension {
            return Err(Error::InvalidNetwork(format!(
                "node {idx} has {} coordinates, expected {dimension}",
                n.position.len()
            )));
        }
        if n.position.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidNetwork(format!("node {idx} has a non-finite position")));
        }
        if !(n.mass >= T::zero()) || !n.mass.is_finite() {
            return Err(Error::InvalidNetwork(format!(
                "node {idx} has invalid mass {}",
                n.mass
            )));
        }
    }
    Ok(())
}

fn merge_springs<T: Real>(nodes: &[Node<T>], springs: Vec<Spring<T>>) -> Result<Vec<Spring<T>>> {
    let mut merged: BTreeMap<(usize, usize), T> = BTreeMap::new();
    let mut order = Vec::new();
    for s in springs {
        if s.i >= nodes.len() || s.j >= nodes.len() {
            return Err(Error::InvalidNetwork(format!(
                "spring {}-{} references a missing node",
                s.i, s.j
            )));
        }
        if s.i == s.j || geometry::distance(&nodes[s.i].position, &nodes[s.j].position) == T::zero()
        {
            return Err(Error::DegenerateSpring { i: s.i, j: s.j });
        }
        if !(s.k > T::zero()) || !s.k.is_finite() {
            return Err(Error::InvalidNetwork(format!(
                "spring {}-{} has invalid stiffness {}",
                s.i, s.j, s.k
            )));
        }
        let key = (s.i.min(s.j), s.i.max(s.j));
        match merged.get_mut(&key) {
            Some(k) => *k += s.k,
            None => {
                merged.insert(key, s.k);
                order.push(key);
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|(i, j)| Spring { i, j, k: merged[&(i, j)] })
        .collect())
}

/// The real system matrices of `(K + λC + λ²M) u = f` together with the
/// node data needed to interpret them.
#[derive(Debug, Clone)]
pub struct SystemMatrices<T: Real> {
    pub k: SymMatrix<T>,
    pub c: SymMatrix<T>,
    pub m: SymMatrix<T>,
    /// Degree-of-freedom partition induced by the terminal flags.
    pub partition: BlockPartition,
    pub dimension: usize,
    pub rayleigh: RayleighParams<T>,
    pub positions: Vec<Vec<T>>,
    pub masses: Vec<T>,
    pub terminal: Vec<bool>,
}

impl<T: Real> SystemMatrices<T> {
    /// Builds `M` from node masses and `C = αK + βM` entrywise around a given
    /// stiffness matrix.
    pub fn from_stiffness(
        dimension: usize,
        nodes: &[Node<T>],
        rayleigh: RayleighParams<T>,
        k: SymMatrix<T>,
    ) -> Result<Self> {
        let n = nodes.len() * dimension;
        if k.order() != n {
            return Err(Error::DimensionMismatch(format!(
                "stiffness of order {} for {} degrees of freedom",
                k.order(),
                n
            )));
        }
        let diag: Vec<T> = nodes
            .iter()
            .flat_map(|node| std::iter::repeat_n(node.mass, dimension))
            .collect();
        let m = SymMatrix::from_diagonal(&diag);
        let km = k.matrix();
        let (alpha, beta) = (rayleigh.alpha, rayleigh.beta);
        let c = DMatrix::from_fn(n, n, |i, j| alpha * km[(i, j)] + beta * m[(i, j)]);
        let mask: Vec<bool> = nodes
            .iter()
            .flat_map(|node| std::iter::repeat_n(node.terminal, dimension))
            .collect();
        Ok(Self {
            c: SymMatrix::symmetrize(c),
            k,
            m,
            partition: BlockPartition::from_mask(&mask),
            dimension,
            rayleigh,
            positions: nodes.iter().map(|n| n.position.clone()).collect(),
            masses: nodes.iter().map(|n| n.mass).collect(),
            terminal: nodes.iter().map(|n| n.terminal).collect(),
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.masses.len()
    }

    pub fn terminal_positions(&self) -> Vec<Vec<T>> {
        self.positions
            .iter()
            .zip(&self.terminal)
            .filter(|(_, &t)| t)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Degrees of freedom of node `i`.
    pub fn dofs(&self, node: usize) -> std::ops::Range<usize> {
        node * self.dimension..(node + 1) * self.dimension
    }
}

/// Unit direction of `x_i − x_j`.
pub fn spring_direction<T: Real>(xi: &[T], xj: &[T]) -> Vec<T> {
    let len = geometry::distance(xi, xj);
    xi.iter().zip(xj).map(|(&a, &b)| (a - b) / len).collect()
}

/// Adds `k · ([e_i e_j][[1,−1],[−1,1]][e_i e_j]ᵀ) ⊗ n nᵀ` to `out`.
pub(crate) fn add_spring<T: Real>(out: &mut DMatrix<T>, d: usize, i: usize, j: usize, k: T, n: &[T]) {
    for a in 0..d {
        for b in 0..d {
            let v = k * n[a] * n[b];
            out[(i * d + a, i * d + b)] += v;
            out[(j * d + a, j * d + b)] += v;
            out[(i * d + a, j * d + b)] -= v;
            out[(j * d + a, i * d + b)] -= v;
        }
    }
}

pub fn assemble<T: Real>(net: &ElastodynamicNetwork<T>) -> Result<SystemMatrices<T>> {
    let d = net.dimension;
    let nodes = &net.nodes;
    for s in &net.springs {
        if geometry::distance(&nodes[s.i].position, &nodes[s.j].position) == T::zero() {
            return Err(Error::DegenerateSpring { i: s.i, j: s.j });
        }
    }
    let n = nodes.len() * d;
    let mut k = DMatrix::zeros(n, n);
    for s in &net.springs {
        let dir = spring_direction(&nodes[s.i].position, &nodes[s.j].position);
        add_spring(&mut k, d, s.i, s.j, s.k, &dir);
    }
    SystemMatrices::from_stiffness(d, nodes, net.rayleigh, SymMatrix::symmetrize(k))
}

/// Parameters of [`random_network`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomNetworkSpec {
    pub dimension: usize,
    pub n_terminals: usize,
    pub n_interior: usize,
    /// Fraction of interior nodes given positive mass (rounded to a count).
    pub mass_fraction: f64,
    /// Drawn uniformly from `[0, 2]²` when `None`.
    pub rayleigh: Option<RayleighParams<f64>>,
    /// Probability of each non-tree edge.
    pub edge_probability: f64,
    /// Accept a single node with no springs instead of failing.
    pub allow_springless: bool,
}

impl RandomNetworkSpec {
    pub fn new(dimension: usize, n_terminals: usize, n_interior: usize, mass_fraction: f64) -> Self {
        Self {
            dimension,
            n_terminals,
            n_interior,
            mass_fraction,
            rayleigh: None,
            edge_probability: 0.6,
            allow_springless: false,
        }
    }
}

const MIN_NODE_SEPARATION: f64 = 1e-3;
const MAX_GENERATION_ATTEMPTS: usize = 100;

/// Deterministic random network with nodes in the unit box and a connected
/// spring graph. Node order is shuffled so terminals and interior nodes
/// interleave.
pub fn random_network<T: Real>(seed: u64, spec: &RandomNetworkSpec) -> Result<ElastodynamicNetwork<T>> {
    let d = spec.dimension;
    if d != 2 && d != 3 {
        return Err(Error::GenerationFailed(format!("dimension {d} not in {{2, 3}}")));
    }
    if spec.n_terminals == 0 {
        return Err(Error::GenerationFailed("at least one terminal required".into()));
    }
    if !(0.0..=1.0).contains(&spec.mass_fraction) {
        return Err(Error::GenerationFailed(format!(
            "mass_fraction {} outside [0, 1]",
            spec.mass_fraction
        )));
    }
    let total = spec.n_terminals + spec.n_interior;
    if total == 1 && !spec.allow_springless {
        return Err(Error::GenerationFailed(
            "a single node admits no springs".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_GENERATION_ATTEMPTS {
        let Some(net) = draw_network(&mut rng, spec)? else {
            continue;
        };
        if !well_separated_interior(&net)? {
            continue;
        }
        let cast = |x: f64| T::lit(x);
        let nodes = net
            .nodes
            .iter()
            .map(|n| Node {
                position: n.position.iter().copied().map(cast).collect(),
                mass: cast(n.mass),
                terminal: n.terminal,
            })
            .collect();
        let springs = net
            .springs
            .iter()
            .map(|s| Spring { i: s.i, j: s.j, k: cast(s.k) })
            .collect();
        let rayleigh = RayleighParams {
            alpha: cast(net.rayleigh.alpha),
            beta: cast(net.rayleigh.beta),
        };
        return ElastodynamicNetwork::new(d, nodes, springs, rayleigh);
    }
    Err(Error::GenerationFailed(
        "no separated, well-conditioned configuration after bounded retries".into(),
    ))
}

/// Relative eigenvalue bounds of the interior blocks of an accepted network:
/// each eigenvalue is an exact zero or clearly positive.
const NULL_EIGENVALUE: f64 = 1e-12;
const MIN_EIGENVALUE: f64 = 1e-6;

/// Rejects networks where K_II, K_II + M_II or the massless-interior block
/// K_JJ has an eigenvalue between the two bounds. Such near-floppy
/// directions (a node held by almost collinear springs, say) make the
/// response numerically resonant at every λ or give modal stiffnesses that
/// cannot be told apart from zero.
fn well_separated_interior(net: &ElastodynamicNetwork<f64>) -> Result<bool> {
    let sys = net.assemble()?;
    let d = net.dimension;
    let interior = sys.partition.interior();
    let massless: Vec<usize> = interior
        .iter()
        .copied()
        .filter(|&r| net.nodes[r / d].mass == 0.0)
        .collect();
    let pick = |m: &DMatrix<f64>, idx: &[usize]| DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])]);
    let k_ii = pick(sys.k.matrix(), interior);
    let blocks = [
        k_ii.clone() + pick(sys.m.matrix(), interior),
        k_ii,
        pick(sys.k.matrix(), &massless),
    ];
    Ok(blocks.iter().all(|b| {
        let (values, _) = crate::dense::real_sym_eig(b);
        let top = values.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        values
            .iter()
            .all(|&x| x.abs() <= NULL_EIGENVALUE * top || x >= MIN_EIGENVALUE * top)
    }))
}

/// One draw of positions, masses, springs and damping. `None` when two
/// nodes land closer than the minimum separation.
fn draw_network(rng: &mut ChaCha8Rng, spec: &RandomNetworkSpec) -> Result<Option<ElastodynamicNetwork<f64>>> {
    let d = spec.dimension;
    let total = spec.n_terminals + spec.n_interior;
    let positions: Vec<Vec<f64>> = (0..total)
        .map(|_| (0..d).map(|_| rng.random::<f64>()).collect())
        .collect();
    let separated = positions.iter().enumerate().all(|(i, a)| {
        positions[i + 1..]
            .iter()
            .all(|b| geometry::distance(a, b) >= MIN_NODE_SEPARATION)
    });
    if !separated {
        return Ok(None);
    }
    let n_massive = (spec.mass_fraction * spec.n_interior as f64).round() as usize;
    let mut interior_massive: Vec<bool> = (0..spec.n_interior).map(|i| i < n_massive).collect();
    interior_massive.shuffle(rng);

    let mut kinds: Vec<Option<bool>> = std::iter::repeat_n(None, spec.n_terminals)
        .chain(interior_massive.into_iter().map(Some))
        .collect();
    kinds.shuffle(rng);

    let nodes: Vec<Node<f64>> = kinds
        .iter()
        .zip(&positions)
        .map(|(kind, p)| {
            let mass = match kind {
                None => rng.random::<f64>(),
                Some(true) => rng.random_range(0.5..2.0),
                Some(false) => 0.0,
            };
            Node {
                position: p.clone(),
                mass,
                terminal: kind.is_none(),
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    let mut springs = Vec::new();
    let mut linked = std::collections::BTreeSet::new();
    for idx in 1..total {
        let parent = order[rng.random_range(0..idx)];
        let child = order[idx];
        linked.insert((parent.min(child), parent.max(child)));
        springs.push(Spring {
            i: parent,
            j: child,
            k: rng.random_range(0.5..2.0),
        });
    }
    for i in 0..total {
        for j in (i + 1)..total {
            if !linked.contains(&(i, j)) && rng.random::<f64>() < spec.edge_probability {
                springs.push(Spring {
                    i,
                    j,
                    k: rng.random_range(0.5..2.0),
                });
            }
        }
    }
    let rayleigh = match spec.rayleigh {
        Some(r) => r,
        None => RayleighParams {
            alpha: rng.random_range(0.0..2.0),
            beta: rng.random_range(0.0..2.0),
        },
    };
    ElastodynamicNetwork::new(d, nodes, springs, rayleigh).map(Some)
}
