//! Realization of admissible canonical responses as superpositions of
//! elementary Rayleigh-damped components sharing the terminal nodes.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::characterize::{check_balanced, check_canonical, CheckOptions};
use crate::error::{Error, Result};
use crate::geometry::{self, cross, diameter, distance, distance_to_hull, force_and_torque};
use crate::linalg::{self, sym_eig, SymMatrix};
use crate::network::{add_spring, spring_direction, Node, RayleighParams, Spring, SystemMatrices};
use crate::response::{evaluate_canonical, CanonicalResponse, ResponseEvaluator};
use crate::sampling::sample_lambdas;
use crate::scalar::Real;

/// Rank-one balanced elastic element with stiffness `f fᵀ` over `support`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealElasticElement<T> {
    pub support: Vec<usize>,
    /// Forces stacked `d` per support node.
    pub force: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element<T> {
    Spring(Spring<T>),
    Ideal(IdealElasticElement<T>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Springs,
    IdealElements,
    TerminalMasses,
    RankOneGadget,
}

/// One summand of a superposition. Its first nodes are the shared terminals,
/// in order; the remaining nodes are private to the component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkComponent<T> {
    pub kind: ComponentKind,
    pub nodes: Vec<Node<T>>,
    pub elements: Vec<Element<T>>,
    pub rayleigh: RayleighParams<T>,
}

impl<T: Real> NetworkComponent<T> {
    pub fn dimension(&self) -> usize {
        self.nodes.first().map_or(0, |n| n.position.len())
    }

    pub fn n_terminals(&self) -> usize {
        self.nodes.iter().filter(|n| n.terminal).count()
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = &Node<T>> {
        self.nodes.iter().filter(|n| !n.terminal)
    }

    /// Adds this component's stiffness to `out`, mapping local node `i` to
    /// global node `map[i]`.
    fn add_stiffness(&self, out: &mut DMatrix<T>, map: &[usize]) -> Result<()> {
        let d = self.dimension();
        for el in &self.elements {
            match el {
                Element::Spring(s) => {
                    let (xi, xj) = (&self.nodes[s.i].position, &self.nodes[s.j].position);
                    if distance(xi, xj) == T::zero() {
                        return Err(Error::DegenerateSpring { i: s.i, j: s.j });
                    }
                    add_spring(out, d, map[s.i], map[s.j], s.k, &spring_direction(xi, xj));
                }
                Element::Ideal(e) => {
                    if e.force.len() != e.support.len() * d {
                        return Err(Error::DimensionMismatch(format!(
                            "ideal element with {} supports carries {} force entries",
                            e.support.len(),
                            e.force.len()
                        )));
                    }
                    let dofs: Vec<usize> = e
                        .support
                        .iter()
                        .flat_map(|&n| (0..d).map(move |a| map[n] * d + a))
                        .collect();
                    for (a, &ra) in dofs.iter().enumerate() {
                        for (b, &rb) in dofs.iter().enumerate() {
                            out[(ra, rb)] += e.force[a] * e.force[b];
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// System matrices of the component on its own.
    pub fn system_matrices(&self) -> Result<SystemMatrices<T>> {
        let d = self.dimension();
        let n = self.nodes.len();
        for el in &self.elements {
            let support: Vec<usize> = match el {
                Element::Spring(s) => vec![s.i, s.j],
                Element::Ideal(e) => e.support.clone(),
            };
            if let Some(&bad) = support.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidNetwork(format!("element references node {bad} of {n}")));
            }
        }
        let mut k = DMatrix::zeros(n * d, n * d);
        self.add_stiffness(&mut k, &(0..n).collect::<Vec<_>>())?;
        SystemMatrices::from_stiffness(d, &self.nodes, self.rayleigh, SymMatrix::symmetrize(k))
    }
}

/// Superposition of components sharing the terminal nodes and only those.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralizedNetwork<T> {
    pub terminals: Vec<Vec<T>>,
    pub components: Vec<NetworkComponent<T>>,
    pub epsilon_hull: T,
}

impl<T: Real> GeneralizedNetwork<T> {
    pub fn internal_positions(&self) -> Vec<Vec<T>> {
        self.components
            .iter()
            .flat_map(|c| c.internal_nodes().map(|n| n.position.clone()))
            .collect()
    }

    /// Checks the superposition rule: every component lists the shared
    /// terminals first and in order, and has a matching Rayleigh pair.
    pub fn validate(&self) -> Result<()> {
        let nt = self.terminals.len();
        for (ci, c) in self.components.iter().enumerate() {
            let ok = c.nodes.len() >= nt
                && c.nodes[..nt].iter().zip(&self.terminals).all(|(n, x)| n.terminal && &n.position == x)
                && c.nodes[nt..].iter().all(|n| !n.terminal);
            if !ok {
                return Err(Error::InvalidNetwork(format!(
                    "component {ci} does not share exactly the network terminals"
                )));
            }
            if let Some(first) = self.components.first() {
                if c.rayleigh != first.rayleigh {
                    return Err(Error::InvalidNetwork(format!("component {ci} has different Rayleigh constants")));
                }
            }
        }
        Ok(())
    }

    /// One system holding every component: the terminals (with summed
    /// masses) followed by each component's internal nodes.
    pub fn assemble(&self, rayleigh: RayleighParams<T>) -> Result<SystemMatrices<T>> {
        self.validate()?;
        let d = self.terminals.first().map_or(2, |p| p.len());
        let nt = self.terminals.len();
        let mut nodes: Vec<Node<T>> = self
            .terminals
            .iter()
            .map(|p| Node {
                position: p.clone(),
                mass: T::zero(),
                terminal: true,
            })
            .collect();
        let mut maps = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let mut map: Vec<usize> = (0..nt).collect();
            for (i, n) in c.nodes.iter().enumerate() {
                if i < nt {
                    nodes[i].mass += n.mass;
                } else {
                    map.push(nodes.len());
                    nodes.push(n.clone());
                }
            }
            maps.push(map);
        }
        let order = nodes.len() * d;
        let mut k = DMatrix::zeros(order, order);
        for (c, map) in self.components.iter().zip(&maps) {
            c.add_stiffness(&mut k, map)?;
        }
        let rayleigh = self.components.first().map_or(rayleigh, |c| c.rayleigh);
        SystemMatrices::from_stiffness(d, &nodes, rayleigh, SymMatrix::symmetrize(k))
    }
}

/// Placement settings for the two balancing nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementOptions<T> {
    pub epsilon_hull: T,
    /// Minimum distance to forbidden points, terminals and each other;
    /// `None` means `1e-6 · max(hull diameter, ε)`.
    pub min_clearance: Option<T>,
    pub max_attempts: usize,
    /// Largest accepted condition number of the balance system over its
    /// generic rank.
    pub max_condition: T,
}

impl<T: Real> PlacementOptions<T> {
    pub fn new(epsilon_hull: T) -> Self {
        Self {
            epsilon_hull,
            min_clearance: None,
            max_attempts: 200,
            max_condition: T::lit(1e8),
        }
    }

    fn clearance(&self, terminals: &[Vec<T>]) -> T {
        self.min_clearance
            .unwrap_or_else(|| T::lit(1e-6) * diameter(terminals).max(self.epsilon_hull))
    }
}

/// Two new nodes and the forces `g` on them that balance a force system.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancingPair<T> {
    pub positions: [Vec<T>; 2],
    /// `(f_a, f_b)`, stacked.
    pub g: Vec<T>,
    pub condition: T,
}

/// Net force and torque equations for forces `(g_a, g_b)` at `x_a`, `x_b`,
/// as a matrix over the `2d` unknowns.
fn balance_system<T: Real>(xa: &[T], xb: &[T]) -> DMatrix<T> {
    let d = xa.len();
    let nt = if d == 2 { 1 } else { 3 };
    let mut e = DMatrix::zeros(d + nt, 2 * d);
    for (node, x) in [xa, xb].into_iter().enumerate() {
        for a in 0..d {
            e[(a, node * d + a)] = T::one();
            let mut unit = vec![T::zero(); d];
            unit[a] = T::one();
            for (t, c) in cross(x, &unit).into_iter().enumerate() {
                e[(d + t, node * d + a)] = c;
            }
        }
    }
    e
}

/// Minimum-norm forces at `x_a`, `x_b` balancing `f` at `terminals`, and the
/// condition number of the balance system over its generic rank (3 in the
/// plane, 5 in space, where `(u, −u)` with `u ∥ x_a − x_b` is always null).
pub fn solve_balance<T: Real>(terminals: &[Vec<T>], f: &[T], xa: &[T], xb: &[T]) -> Result<(Vec<T>, T)> {
    let d = xa.len();
    // torques about x_b keep the system well scaled far from the origin
    let shift = |x: &[T]| -> Vec<T> { x.iter().zip(xb).map(|(&a, &b)| a - b).collect() };
    let local: Vec<Vec<T>> = terminals.iter().map(|x| shift(x)).collect();
    let (force, torque) = force_and_torque(f, &local);
    let e = balance_system(&shift(xa), &vec![T::zero(); d]);
    let rhs = DVector::from_iterator(e.nrows(), force.iter().chain(&torque).map(|&x| -x));
    let rank = if d == 2 { 3 } else { 5 };
    let svd = crate::dense::real_svd(&e);
    let (top, low) = (svd.s[0], svd.s[rank - 1]);
    if !(low > 0.0) {
        return Err(Error::PlacementFailed("balancing nodes coincide".into()));
    }
    let mut g = DVector::zeros(2 * d);
    for i in 0..rank {
        let coef = svd.u.column(i).dot(&rhs) / T::lit(svd.s[i]);
        g += svd.v.column(i) * coef;
    }
    Ok((g.iter().copied().collect(), T::lit(top / low)))
}

fn random_unit<T: Real, R: Rng>(rng: &mut R, d: usize) -> Vec<T> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.iter().map(|x| T::lit(x / n)).collect();
        }
    }
}

fn random_hull_point<T: Real, R: Rng>(rng: &mut R, points: &[Vec<T>]) -> Vec<T> {
    let w: Vec<f64> = points.iter().map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    let d = points[0].len();
    (0..d)
        .map(|a| {
            points
                .iter()
                .zip(&w)
                .fold(T::zero(), |acc, (p, &wi)| acc + p[a] * T::lit(wi / total))
        })
        .collect()
}

/// Places two nodes near the terminal hull and finds forces on them that
/// balance `f`. See [`balance_forces_with`].
pub fn balance_forces<T: Real>(
    terminals: &[Vec<T>],
    f: &[T],
    epsilon_hull: T,
    forbidden: &[Vec<T>],
    seed: u64,
) -> Result<BalancingPair<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    balance_forces_with(terminals, f, &PlacementOptions::new(epsilon_hull), forbidden, &mut rng)
}

/// Rejection-samples `x_b` within `ε/4` of the hull and `x_a = x_b + t` with
/// `|t| ∈ [ε/4, ε/2)`. In space `t` is drawn orthogonal to `x_b × F − T`,
/// which the balance equations require.
pub fn balance_forces_with<T: Real, R: Rng>(
    terminals: &[Vec<T>],
    f: &[T],
    opts: &PlacementOptions<T>,
    forbidden: &[Vec<T>],
    rng: &mut R,
) -> Result<BalancingPair<T>> {
    if terminals.is_empty() {
        return Err(Error::PlacementFailed("no terminals".into()));
    }
    let d = terminals[0].len();
    if f.len() != terminals.len() * d {
        return Err(Error::DimensionMismatch(format!(
            "{} force entries for {} terminals in dimension {d}",
            f.len(),
            terminals.len()
        )));
    }
    let eps = opts.epsilon_hull;
    if !(eps > T::zero()) {
        return Err(Error::PlacementFailed(format!("epsilon_hull must be positive, got {eps}")));
    }
    let clearance = opts.clearance(terminals);
    let f_norm = geometry::norm(f);
    let (force, torque) = force_and_torque(f, terminals);
    let quarter = eps / T::lit(4.0);
    let mut last = String::from("no attempt made");
    for _ in 0..opts.max_attempts {
        let h = random_hull_point(rng, terminals);
        let off = random_unit::<T, _>(rng, d);
        let r = quarter * T::lit(rng.random::<f64>());
        let xb: Vec<T> = h.iter().zip(&off).map(|(&a, &o)| a + o * r).collect();
        let mut t = random_unit::<T, _>(rng, d);
        if d == 3 {
            let mut c = cross(&xb, &force);
            for (ci, ti) in c.iter_mut().zip(&torque) {
                *ci -= *ti;
            }
            let cn = geometry::norm(&c);
            if cn > T::zero() {
                let dot = t.iter().zip(&c).fold(T::zero(), |a, (&x, &y)| a + x * y) / (cn * cn);
                for (ti, &ci) in t.iter_mut().zip(&c) {
                    *ti -= dot * ci;
                }
                let tn = geometry::norm(&t);
                if tn < T::lit(0.1) {
                    last = "degenerate direction".into();
                    continue;
                }
                t.iter_mut().for_each(|x| *x /= tn);
            }
        }
        let len = quarter * (T::one() + T::lit(rng.random::<f64>()));
        let xa: Vec<T> = xb.iter().zip(&t).map(|(&b, &ti)| b + ti * len).collect();

        let too_close = |x: &[T]| forbidden.iter().chain(terminals).any(|p| distance(x, p) < clearance);
        if too_close(&xa) || too_close(&xb) || distance(&xa, &xb) < clearance {
            last = "candidate too close to a forbidden point".into();
            continue;
        }
        if distance_to_hull(&xa, terminals) > eps || distance_to_hull(&xb, terminals) > eps {
            last = "candidate outside the hull neighbourhood".into();
            continue;
        }
        let (g, condition) = solve_balance(terminals, f, &xa, &xb)?;
        if !(condition <= opts.max_condition) {
            last = format!("balance system condition number {condition}");
            continue;
        }
        let mut all = terminals.to_vec();
        all.push(xa.clone());
        all.push(xb.clone());
        let full: Vec<T> = f.iter().chain(&g).copied().collect();
        let residual = geometry::balance_residual(&full, &all);
        if !(residual <= T::lit(1e-10) * (T::one() + f_norm)) {
            last = format!("balance residual {residual}");
            continue;
        }
        return Ok(BalancingPair {
            positions: [xa, xb],
            g,
            condition,
        });
    }
    Err(Error::PlacementFailed(format!(
        "{} attempts exhausted; last rejection: {last}",
        opts.max_attempts
    )))
}

/// Component with response `[(1+αλ) − (1+αλ)²σ/(σ + (ασ+β)λ + λ²)] f fᵀ`:
/// an ideal element with force `[f; g]` on the terminals and two new nodes,
/// each of mass `|g|²/σ`.
pub fn build_rank_one_gadget<T: Real>(
    terminals: &[Vec<T>],
    f: &[T],
    sigma: T,
    rayleigh: RayleighParams<T>,
    epsilon_hull: T,
    forbidden: &[Vec<T>],
    seed: u64,
) -> Result<NetworkComponent<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build_rank_one_gadget_with(terminals, f, sigma, rayleigh, &PlacementOptions::new(epsilon_hull), forbidden, &mut rng)
}

pub fn build_rank_one_gadget_with<T: Real, R: Rng>(
    terminals: &[Vec<T>],
    f: &[T],
    sigma: T,
    rayleigh: RayleighParams<T>,
    opts: &PlacementOptions<T>,
    forbidden: &[Vec<T>],
    rng: &mut R,
) -> Result<NetworkComponent<T>> {
    let f_norm = geometry::norm(f);
    if f_norm == T::zero() {
        return Err(Error::ZeroForce);
    }
    if !(sigma > T::zero()) {
        return Err(Error::NotCharacterizable(format!("gadget needs sigma > 0, got {sigma}")));
    }
    rayleigh.validate()?;
    let pair = balance_forces_with(terminals, f, opts, forbidden, rng)?;
    let mut g = pair.g;
    if geometry::norm(&g) <= T::lit(1e-8) * f_norm {
        // f is balanced already; a self-balanced pair along x_a − x_b keeps
        // the internal nodes loaded
        let dir = spring_direction(&pair.positions[0], &pair.positions[1]);
        let s = f_norm / T::lit(2.0).sqrt();
        for (a, &u) in dir.iter().enumerate() {
            g[a] += u * s;
            g[dir.len() + a] -= u * s;
        }
    }
    let mass = geometry::norm_sqr(&g) / sigma;
    let nt = terminals.len();
    let mut nodes: Vec<Node<T>> = terminals
        .iter()
        .map(|p| Node {
            position: p.clone(),
            mass: T::zero(),
            terminal: true,
        })
        .collect();
    for p in pair.positions {
        nodes.push(Node {
            position: p,
            mass,
            terminal: false,
        });
    }
    Ok(NetworkComponent {
        kind: ComponentKind::RankOneGadget,
        nodes,
        elements: vec![Element::Ideal(IdealElasticElement {
            support: (0..nt + 2).collect(),
            force: f.iter().chain(&g).copied().collect(),
        })],
        rayleigh,
    })
}

/// Closed-form gadget response coefficient
/// `(1+αλ) − (1+αλ)²σ/(σ + (ασ+β)λ + λ²)`.
pub fn gadget_coefficient<T: Real>(sigma: T, rayleigh: &RayleighParams<T>, lambda: crate::Cx<T>) -> crate::Cx<T> {
    let one_al = lambda * rayleigh.alpha + T::one();
    let q = lambda * lambda + lambda * (rayleigh.alpha * sigma + rayleigh.beta) + sigma;
    one_al - one_al * one_al * sigma / q
}

/// Outcome of [`decompose_two_node_element`].
#[derive(Debug, Clone, PartialEq)]
pub enum TwoNodeDecomposition<T> {
    Spring(Spring<T>),
    /// The element carries no force and can be dropped.
    Zero,
    Unrepresentable,
}

/// The single spring whose stiffness equals `f fᵀ`, if any. Requires
/// `f₁ = −f₂` parallel to `x₁ − x₂`; then `k = |f₁|²`.
pub fn decompose_two_node_element<T: Real>(
    el: &IdealElasticElement<T>,
    positions: &[Vec<T>],
    tol: T,
) -> Result<TwoNodeDecomposition<T>> {
    if el.support.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-node decomposition of a {}-node element",
            el.support.len()
        )));
    }
    let (i, j) = (el.support[0], el.support[1]);
    let (xi, xj) = match (positions.get(i), positions.get(j)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidNetwork("element support outside the node list".into())),
    };
    let d = xi.len();
    if el.force.len() != 2 * d {
        return Err(Error::DimensionMismatch("force vector length".into()));
    }
    let (f1, f2) = el.force.split_at(d);
    let scale = geometry::norm(&el.force);
    if scale == T::zero() {
        return Ok(TwoNodeDecomposition::Zero);
    }
    let opposite = f1.iter().zip(f2).all(|(&a, &b)| (a + b).abs() <= tol * scale);
    let len = distance(xi, xj);
    if !opposite || len == T::zero() {
        return Ok(TwoNodeDecomposition::Unrepresentable);
    }
    let n = spring_direction(xi, xj);
    let along = f1.iter().zip(&n).fold(T::zero(), |a, (&x, &y)| a + x * y);
    let perp = f1
        .iter()
        .zip(&n)
        .fold(T::zero(), |a, (&x, &y)| a + (x - along * y) * (x - along * y))
        .sqrt();
    if perp > tol * scale {
        return Ok(TwoNodeDecomposition::Unrepresentable);
    }
    Ok(TwoNodeDecomposition::Spring(Spring {
        i,
        j,
        k: geometry::norm_sqr(f1),
    }))
}

/// Settings for [`synthesize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOptions<T> {
    pub placement: PlacementOptions<T>,
    pub check: CheckOptions<T>,
    /// Relative eigenvalue cutoff when factoring `W(0)` and `Rⱼ/σⱼ`.
    pub rank_tol: T,
    pub verify_samples: usize,
    pub verify_tol: T,
}

impl<T: Real> SynthesisOptions<T> {
    pub fn new(epsilon_hull: T) -> Self {
        Self {
            placement: PlacementOptions::new(epsilon_hull),
            check: CheckOptions::default(),
            rank_tol: T::lit(1e-12),
            verify_samples: 50,
            verify_tol: T::lit(1e-8),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundTripReport {
    pub n_lambda_samples: usize,
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis<T> {
    pub network: GeneralizedNetwork<T>,
    pub verification: RoundTripReport,
}

/// `S = Σ w wᵀ` over eigenpairs with eigenvalue above `rank_tol · max`.
pub fn psd_factors<T: Real>(s: &SymMatrix<T>, rank_tol: T) -> Vec<Vec<T>> {
    let eig = sym_eig(s);
    let top = eig.values.iter().fold(T::zero(), |a, &x| a.max(x.abs()));
    let mut out = Vec::new();
    for (i, &mu) in eig.values.iter().enumerate().rev() {
        if mu > rank_tol * top && mu > T::zero() {
            out.push(eig.vectors.column(i).iter().map(|&u| u * mu.sqrt()).collect());
        }
    }
    out
}

/// `P S P` with `P` the orthogonal projector onto balanced force systems,
/// removing rounding-level rigid-motion content before factorization.
pub fn project_balanced<T: Real>(s: &SymMatrix<T>, positions: &[Vec<T>]) -> SymMatrix<T> {
    let rigid = geometry::rigid_motions(positions);
    let svd = crate::dense::real_svd(&rigid);
    let top = svd.s.first().copied().unwrap_or(0.0);
    let rank = svd.s.iter().filter(|&&x| x > 1e-12 * top).count();
    let q = svd.u.columns(0, rank);
    let n = s.order();
    let p = DMatrix::<T>::identity(n, n) - &q * q.transpose();
    SymMatrix::symmetrize(&p * s.matrix() * &p)
}

fn terminal_nodes<T: Real>(terminals: &[Vec<T>], masses: impl Fn(usize) -> T) -> Vec<Node<T>> {
    terminals
        .iter()
        .enumerate()
        .map(|(i, p)| Node {
            position: p.clone(),
            mass: masses(i),
            terminal: true,
        })
        .collect()
}

/// Builds `(1+αλ)W(0)` from ideal elements, `(βλ+λ²)M` from terminal
/// masses, and each resonant term from rank-one gadgets, then verifies the
/// superposition against the canonical form.
pub fn synthesize<T: Real>(
    cr: &CanonicalResponse<T>,
    opts: &SynthesisOptions<T>,
    forbidden: &[Vec<T>],
    seed: u64,
) -> Result<Synthesis<T>> {
    let report = check_canonical(cr, &opts.check)?;
    if !report.pass {
        return Err(Error::NotCharacterizable(format!(
            "failed conditions: {}",
            report.failed().join(", ")
        )));
    }
    let d = cr.dimension();
    if cr.mbb.chunks(d).any(|b| b.iter().any(|&x| x != b[0])) {
        return Err(Error::NotCharacterizable("Mbb is not constant on node blocks".into()));
    }
    cr.rayleigh
        .validate()
        .map_err(|e| Error::NotCharacterizable(e.to_string()))?;
    let terminals = &cr.terminal_positions;
    let nt = terminals.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut components = Vec::new();

    let w0 = project_balanced(&cr.static_response(), terminals);
    let static_factors = psd_factors(&w0, opts.rank_tol);
    if !static_factors.is_empty() {
        let mut elements = Vec::with_capacity(static_factors.len());
        for w in static_factors {
            let col = DMatrix::from_column_slice(w.len(), 1, &w);
            let bal = check_balanced(&col, terminals, opts.check.tol)?;
            if !bal.balanced {
                return Err(Error::NotCharacterizable(format!(
                    "static factor is not balanced (residual {})",
                    bal.worst_residual
                )));
            }
            elements.push(Element::Ideal(IdealElasticElement {
                support: (0..nt).collect(),
                force: w,
            }));
        }
        components.push(NetworkComponent {
            kind: ComponentKind::IdealElements,
            nodes: terminal_nodes(terminals, |_| T::zero()),
            elements,
            rayleigh: cr.rayleigh,
        });
    }

    if cr.mbb.iter().any(|&m| m > T::zero()) {
        components.push(NetworkComponent {
            kind: ComponentKind::TerminalMasses,
            nodes: terminal_nodes(terminals, |i| cr.mbb[i * d]),
            elements: Vec::new(),
            rayleigh: cr.rayleigh,
        });
    }

    let mut placement = opts.placement;
    placement.min_clearance = Some(placement.clearance(terminals));
    let mut avoid: Vec<Vec<T>> = forbidden.to_vec();
    for m in &cr.modes {
        let scaled = m.residue.scale(T::one() / m.sigma);
        for v in psd_factors(&scaled, opts.rank_tol) {
            let gadget =
                build_rank_one_gadget_with(terminals, &v, m.sigma, cr.rayleigh, &placement, &avoid, &mut rng)?;
            avoid.extend(gadget.internal_nodes().map(|n| n.position.clone()));
            components.push(gadget);
        }
    }

    let network = GeneralizedNetwork {
        terminals: terminals.clone(),
        components,
        epsilon_hull: opts.placement.epsilon_hull,
    };
    let verification = verify_synthesis(cr, &network, opts.verify_samples, &mut rng)?;
    if !(T::lit(verification.max_rel_error) <= opts.verify_tol) {
        return Err(Error::ReconstructionMismatch {
            max_rel_error: verification.max_rel_error,
            allowed: opts.verify_tol.as_f64(),
        });
    }
    Ok(Synthesis { network, verification })
}

/// Worst relative mismatch between the assembled network and the canonical
/// form at random non-resonant `λ`.
pub fn verify_synthesis<T: Real, R: Rng>(
    cr: &CanonicalResponse<T>,
    network: &GeneralizedNetwork<T>,
    samples: usize,
    rng: &mut R,
) -> Result<RoundTripReport> {
    let sys = network.assemble(cr.rayleigh)?;
    let eval = ResponseEvaluator::new(&sys);
    let mut worst = T::zero();
    for lambda in sample_lambdas::<T, _>(rng, samples, &cr.singular_points()) {
        let got = eval.evaluate(lambda)?;
        let want = evaluate_canonical(cr, lambda)?;
        worst = worst.max(linalg::rel_error(got.w.matrix(), want.w.matrix()));
    }
    Ok(RoundTripReport {
        n_lambda_samples: samples,
        max_rel_error: worst.as_f64(),
    })
}
