//! Terminal response `W(λ)` of a Rayleigh-damped network, elimination of
//! massless interior nodes, and extraction of the pole–residue canonical form
//!
//! `W(λ) = (1+αλ)A + (βλ+λ²)M − Σⱼ (1+αλ)² Rⱼ / (σⱼ + λ(ασⱼ+β) + λ²)`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atlas::resonances_of;
use crate::error::{Error, Result};
use crate::linalg::{
    self, psd_violation, schur_complement, schur_with_rank, submatrix, sym_eig, BlockPartition,
    SchurMode, SymMatrix, PINV_TOL,
};
use crate::network::{RayleighParams, SystemMatrices};
use crate::sampling::sample_lambdas;
use crate::scalar::{cabs, Cx, Real};
use crate::serde_util::{from_rows, to_rows};

/// Relative singular-value threshold below which an interior block counts
/// as singular.
pub const RESONANCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseSample<T: Real> {
    pub lambda: Cx<T>,
    pub w: SymMatrix<Cx<T>>,
}

/// `K + λC + λ²M` as a complex symmetric matrix.
pub fn pencil<T: Real>(k: &SymMatrix<T>, c: &SymMatrix<T>, m: &SymMatrix<T>, lambda: Cx<T>) -> SymMatrix<Cx<T>> {
    let l2 = lambda * lambda;
    let (k, c, m) = (k.matrix(), c.matrix(), m.matrix());
    SymMatrix::symmetrize(DMatrix::from_fn(k.nrows(), k.ncols(), |i, j| {
        lambda * c[(i, j)] + l2 * m[(i, j)] + k[(i, j)]
    }))
}

/// Dimension of the common kernel of the given interior blocks, i.e. the
/// interior directions on which the pencil vanishes for every `λ`.
fn persistent_nullity<T: Real>(blocks: &[DMatrix<T>], tol: T) -> usize {
    let n = blocks.first().map_or(0, |b| b.ncols());
    if n == 0 {
        return 0;
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut stacked = DMatrix::zeros(rows, n);
    let mut at = 0;
    for b in blocks {
        stacked.rows_mut(at, b.nrows()).copy_from(b);
        at += b.nrows();
    }
    let s = crate::dense::real_svd(&stacked).s;
    let largest = s[0];
    if largest == 0.0 {
        return n;
    }
    s.iter().filter(|&&x| x <= tol.as_f64() * largest).count()
}

/// Schur complement of the pencil at `lambda`, pseudo-inverting exactly the
/// `null_dim` persistent directions and rejecting any further near-singular
/// direction as a resonance.
fn pencil_schur<T: Real>(
    pencil: &SymMatrix<Cx<T>>,
    partition: &BlockPartition,
    null_dim: usize,
    lambda: Cx<T>,
    tol: T,
) -> Result<SymMatrix<Cx<T>>> {
    schur_with_rank(pencil, partition, |s| {
        let n = s.len();
        let keep = n - null_dim.min(n);
        if keep == 0 {
            return Ok(0);
        }
        if s[keep - 1] <= tol * s[0] {
            return Err(Error::AtResonance {
                re: lambda.re.as_f64(),
                im: lambda.im.as_f64(),
                singular_values: s.iter().map(|x| x.as_f64()).collect(),
            });
        }
        Ok(keep)
    })
}

/// Evaluates `W(λ)` for one system, caching the persistent interior kernel.
#[derive(Debug, Clone)]
pub struct ResponseEvaluator<'a, T: Real> {
    sys: &'a SystemMatrices<T>,
    null_dim: usize,
    tol: T,
}

impl<'a, T: Real> ResponseEvaluator<'a, T> {
    pub fn new(sys: &'a SystemMatrices<T>) -> Self {
        Self::with_tolerance(sys, T::lit(RESONANCE_TOL))
    }

    pub fn with_tolerance(sys: &'a SystemMatrices<T>, tol: T) -> Self {
        let ii = sys.partition.interior();
        let blocks = [sys.k.matrix(), sys.c.matrix(), sys.m.matrix()].map(|m| submatrix(m, ii, ii));
        Self {
            sys,
            null_dim: persistent_nullity(&blocks, tol),
            tol,
        }
    }

    /// Number of interior directions carrying neither stiffness nor mass.
    pub fn persistent_nullity(&self) -> usize {
        self.null_dim
    }

    pub fn evaluate(&self, lambda: Cx<T>) -> Result<ResponseSample<T>> {
        let p = pencil(&self.sys.k, &self.sys.c, &self.sys.m, lambda);
        let w = pencil_schur(&p, &self.sys.partition, self.null_dim, lambda, self.tol)?;
        Ok(ResponseSample { lambda, w })
    }
}

/// `W(λ)`: Schur complement of the interior block of `K + λC + λ²M`.
///
/// Interior directions free of stiffness and mass (floppy massless nodes)
/// are pseudo-inverted; any other singularity is reported as
/// [`Error::AtResonance`].
pub fn evaluate_response<T: Real>(sys: &SystemMatrices<T>, lambda: Cx<T>) -> Result<ResponseSample<T>> {
    ResponseEvaluator::new(sys).evaluate(lambda)
}

/// The network with massless interior nodes eliminated: terminals `B`
/// followed by massive interior nodes `J`.
#[derive(Debug, Clone)]
pub struct ReducedSystem<T: Real> {
    pub k_tilde: SymMatrix<T>,
    pub c_tilde: SymMatrix<T>,
    pub mbb: Vec<T>,
    pub mjj: Vec<T>,
    pub rayleigh: RayleighParams<T>,
    pub terminal_positions: Vec<Vec<T>>,
    /// Largest entry of the stiffness before elimination. Rounding in `k_tilde`
    /// is relative to this, not to `k_tilde` itself.
    pub stiffness_scale: T,
}

impl<T: Real> ReducedSystem<T> {
    pub fn n_boundary(&self) -> usize {
        self.mbb.len()
    }

    pub fn n_massive(&self) -> usize {
        self.mjj.len()
    }

    pub fn mass_matrix(&self) -> SymMatrix<T> {
        let diag: Vec<T> = self.mbb.iter().chain(&self.mjj).copied().collect();
        SymMatrix::from_diagonal(&diag)
    }

    pub fn partition(&self) -> BlockPartition {
        let nb = self.n_boundary();
        let n = nb + self.n_massive();
        BlockPartition::new((0..nb).collect(), (nb..n).collect(), n).expect("contiguous partition")
    }

    /// `max |C̃ − (αK̃ + β diag(M_BB, M_JJ))|`.
    pub fn rayleigh_deviation(&self) -> T {
        let m = self.mass_matrix();
        let (a, b) = (self.rayleigh.alpha, self.rayleigh.beta);
        let expected = self.k_tilde.matrix() * a + m.matrix() * b;
        linalg::max_abs(&(self.c_tilde.matrix() - expected))
    }

    /// `W(λ)` from the reduced matrices (Schur complement of the `JJ` block).
    pub fn response(&self, lambda: Cx<T>) -> Result<ResponseSample<T>> {
        let m = self.mass_matrix();
        let p = pencil(&self.k_tilde, &self.c_tilde, &m, lambda);
        let w = pencil_schur(&p, &self.partition(), 0, lambda, T::lit(RESONANCE_TOL))?;
        Ok(ResponseSample { lambda, w })
    }
}

/// Eliminates the massless interior nodes with pseudoinverse Schur
/// complements of `K` and `C`.
pub fn eliminate_massless<T: Real>(sys: &SystemMatrices<T>, tol: T) -> Result<ReducedSystem<T>> {
    let d = sys.dimension;
    let boundary = sys.partition.boundary().to_vec();
    let (mut massive, mut massless) = (Vec::new(), Vec::new());
    for node in 0..sys.n_nodes() {
        if sys.terminal[node] {
            continue;
        }
        // exact test: masslessness is a modelling choice
        let target = if sys.masses[node] == T::zero() { &mut massless } else { &mut massive };
        target.extend(sys.dofs(node));
    }
    let keep: Vec<usize> = boundary.iter().chain(&massive).copied().collect();
    let part = BlockPartition::new(keep, massless, sys.k.order())?;
    let k_tilde = schur_complement(&sys.k, &part, SchurMode::Pseudoinverse, tol)?;
    let c_tilde = schur_complement(&sys.c, &part, SchurMode::Pseudoinverse, tol)?;
    let diag = |idx: &[usize]| idx.iter().map(|&i| sys.m[(i, i)]).collect::<Vec<T>>();
    let reduced = ReducedSystem {
        mbb: diag(&boundary),
        mjj: diag(&massive),
        k_tilde,
        c_tilde,
        rayleigh: sys.rayleigh,
        terminal_positions: sys.terminal_positions(),
        stiffness_scale: sys.k.max_abs(),
    };
    debug_assert_eq!(reduced.n_boundary() % d, 0);

    let deviation = reduced.rayleigh_deviation();
    // K̃ can cancel to nothing, e.g. a massless hub held by d springs
    let allowed = T::lit(1e-10) * reduced.k_tilde.max_abs().max(reduced.stiffness_scale);
    if deviation > allowed {
        return Err(Error::RayleighStructureBroken {
            deviation: deviation.as_f64(),
            allowed: allowed.as_f64(),
        });
    }
    let nb = reduced.n_boundary();
    let jj: Vec<usize> = (nb..nb + reduced.n_massive()).collect();
    for (name, m) in [("K", &reduced.k_tilde), ("C", &reduced.c_tilde)] {
        let v = psd_violation(&m.principal(&jj));
        if v > T::lit(1e-9) {
            return Err(Error::NotCharacterizable(format!(
                "reduced {name}_JJ is indefinite (relative violation {v})"
            )));
        }
    }
    Ok(reduced)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mode<T: Real> {
    pub sigma: T,
    pub residue: SymMatrix<T>,
}

/// The tuple `(α, β, A, M_BB, {(σⱼ, Rⱼ)})` plus terminal positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    into = "CanonicalFile<T>",
    try_from = "CanonicalFile<T>",
    bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>")
)]
pub struct CanonicalResponse<T: Real> {
    pub rayleigh: RayleighParams<T>,
    pub a: SymMatrix<T>,
    pub mbb: Vec<T>,
    pub modes: Vec<Mode<T>>,
    pub terminal_positions: Vec<Vec<T>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalFile<T> {
    alpha: T,
    beta: T,
    #[serde(rename = "A")]
    a: Vec<Vec<T>>,
    #[serde(rename = "Mbb")]
    mbb: Vec<T>,
    modes: Vec<ModeFile<T>>,
    terminals: Vec<Vec<T>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeFile<T> {
    sigma: T,
    #[serde(rename = "R")]
    r: Vec<Vec<T>>,
}

impl<T: Real> From<CanonicalResponse<T>> for CanonicalFile<T> {
    fn from(cr: CanonicalResponse<T>) -> Self {
        Self {
            alpha: cr.rayleigh.alpha,
            beta: cr.rayleigh.beta,
            a: to_rows(cr.a.matrix()),
            mbb: cr.mbb,
            modes: cr
                .modes
                .iter()
                .map(|m| ModeFile {
                    sigma: m.sigma,
                    r: to_rows(m.residue.matrix()),
                })
                .collect(),
            terminals: cr.terminal_positions,
        }
    }
}

impl<T: Real> TryFrom<CanonicalFile<T>> for CanonicalResponse<T> {
    type Error = Error;
    fn try_from(f: CanonicalFile<T>) -> Result<Self> {
        let sym = |rows: &[Vec<T>], what: &str| {
            SymMatrix::new(from_rows(rows, what)?)
                .map_err(|e| Error::InvalidCanonical(format!("{what}: {e}")))
        };
        let modes = f
            .modes
            .iter()
            .enumerate()
            .map(|(j, m)| {
                Ok(Mode {
                    sigma: m.sigma,
                    residue: sym(&m.r, &format!("modes[{j}].R"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            RayleighParams {
                alpha: f.alpha,
                beta: f.beta,
            },
            sym(&f.a, "A")?,
            f.mbb,
            modes,
            f.terminals,
        )
    }
}

impl<T: Real> CanonicalResponse<T> {
    /// Checks shapes only; admissibility is the characterizer's job.
    pub fn new(
        rayleigh: RayleighParams<T>,
        a: SymMatrix<T>,
        mbb: Vec<T>,
        modes: Vec<Mode<T>>,
        terminal_positions: Vec<Vec<T>>,
    ) -> Result<Self> {
        let cr = Self {
            rayleigh,
            a,
            mbb,
            modes,
            terminal_positions,
        };
        cr.validate_structure()?;
        Ok(cr)
    }

    /// Response identically zero at the given terminals.
    pub fn zero(rayleigh: RayleighParams<T>, terminal_positions: Vec<Vec<T>>) -> Self {
        let n = terminal_positions.len() * terminal_positions.first().map_or(0, |p| p.len());
        Self {
            rayleigh,
            a: SymMatrix::zeros(n),
            mbb: vec![T::zero(); n],
            modes: Vec::new(),
            terminal_positions,
        }
    }

    pub fn validate_structure(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCanonical(msg));
        if self.terminal_positions.is_empty() {
            return bad("at least one terminal required".into());
        }
        let d = self.terminal_positions[0].len();
        if d != 2 && d != 3 {
            return bad(format!("terminal dimension must be 2 or 3, got {d}"));
        }
        if self.terminal_positions.iter().any(|p| p.len() != d) {
            return bad("terminal positions have mixed dimensions".into());
        }
        if self.terminal_positions.iter().flatten().any(|x| !x.is_finite()) {
            return bad("non-finite terminal position".into());
        }
        let n = self.terminal_positions.len() * d;
        if self.a.order() != n {
            return bad(format!("A has order {}, expected {n}", self.a.order()));
        }
        if self.mbb.len() != n {
            return bad(format!("Mbb has length {}, expected {n}", self.mbb.len()));
        }
        if self.mbb.iter().any(|x| !x.is_finite()) {
            return bad("non-finite mass".into());
        }
        if let Err(e) = self.rayleigh.validate() {
            return bad(e.to_string());
        }
        for (j, m) in self.modes.iter().enumerate() {
            if m.residue.order() != n {
                return bad(format!("modes[{j}].R has order {}, expected {n}", m.residue.order()));
            }
            if !m.sigma.is_finite() {
                return bad(format!("modes[{j}].sigma is not finite"));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.terminal_positions[0].len()
    }

    pub fn n_terminals(&self) -> usize {
        self.terminal_positions.len()
    }

    /// `W(0) = A − Σ Rⱼ/σⱼ`.
    pub fn static_response(&self) -> SymMatrix<T> {
        let mut w = self.a.matrix().clone();
        for m in &self.modes {
            w -= m.residue.matrix() / m.sigma;
        }
        SymMatrix::symmetrize(w)
    }

    /// Roots of every `qⱼ` with `σⱼ > 0`.
    pub fn resonances(&self) -> Vec<Cx<T>> {
        self.modes
            .iter()
            .filter(|m| m.sigma > T::zero())
            .flat_map(|m| {
                let (p, q) = resonances_of(m.sigma, &self.rayleigh);
                [p, q]
            })
            .collect()
    }

    /// Points to keep clear of when sampling `λ` for comparisons against
    /// assembled networks: the poles, `0`, `−β` and `−1/α`.
    pub fn singular_points(&self) -> Vec<Cx<T>> {
        let mut pts = self.resonances();
        pts.extend(rayleigh_singular_points(&self.rayleigh));
        pts
    }

    pub fn evaluate(&self, lambda: Cx<T>) -> Result<ResponseSample<T>> {
        evaluate_canonical(self, lambda)
    }
}

/// `0`, `−β` and (for α > 0) `−1/α`, where interior blocks of Rayleigh
/// networks can degenerate without producing a pole of `W`.
pub fn rayleigh_singular_points<T: Real>(r: &RayleighParams<T>) -> Vec<Cx<T>> {
    let mut pts = vec![Cx::new(T::zero(), T::zero()), Cx::new(-r.beta, T::zero())];
    if r.alpha > T::zero() {
        pts.push(Cx::new(-T::one() / r.alpha, T::zero()));
    }
    pts
}

/// `W(λ)` from canonical data.
pub fn evaluate_canonical<T: Real>(cr: &CanonicalResponse<T>, lambda: Cx<T>) -> Result<ResponseSample<T>> {
    let (alpha, beta) = (cr.rayleigh.alpha, cr.rayleigh.beta);
    let one = Cx::new(T::one(), T::zero());
    let one_al = one + lambda * alpha;
    let mass_factor = lambda * beta + lambda * lambda;
    let guard = T::lit(1e-12) * (T::one() + lambda.norm_sqr());
    let n = cr.a.order();
    let a = cr.a.matrix();
    let mut w = DMatrix::from_fn(n, n, |i, j| {
        let mut v = one_al * a[(i, j)];
        if i == j {
            v += mass_factor * cr.mbb[i];
        }
        v
    });
    for m in &cr.modes {
        let q = lambda * lambda + lambda * (alpha * m.sigma + beta) + m.sigma;
        if cabs(q) <= guard {
            return Err(Error::AtResonance {
                re: lambda.re.as_f64(),
                im: lambda.im.as_f64(),
                singular_values: vec![cabs(q).as_f64()],
            });
        }
        let coef = one_al * one_al / q;
        let r = m.residue.matrix();
        for j in 0..n {
            for i in 0..n {
                w[(i, j)] -= coef * r[(i, j)];
            }
        }
    }
    Ok(ResponseSample {
        lambda,
        w: SymMatrix::symmetrize(w),
    })
}

/// Tolerances and verification settings for [`extract_canonical`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions<T> {
    /// Relative pseudoinverse truncation for massless elimination.
    pub tol_pinv: T,
    /// Relative threshold below which a mode counts as floppy.
    pub tol_floppy: T,
    /// Relative width of an eigenvalue cluster sharing one residue.
    pub tol_cluster: T,
    pub verify_samples: usize,
    pub verify_tol: T,
    pub seed: u64,
}

impl<T: Real> Default for ExtractOptions<T> {
    fn default() -> Self {
        Self {
            tol_pinv: T::lit(PINV_TOL),
            tol_floppy: T::lit(1e-9),
            tol_cluster: T::lit(1e-8),
            verify_samples: 20,
            verify_tol: T::lit(1e-8),
            seed: 0x5eed,
        }
    }
}

/// Canonical form plus the intermediate data of its extraction.
#[derive(Debug, Clone)]
pub struct Extraction<T: Real> {
    pub canonical: CanonicalResponse<T>,
    pub reduced: ReducedSystem<T>,
    /// Every eigenvalue of `M_JJ^{-1/2} K̃_JJ M_JJ^{-1/2}`, floppy ones included.
    pub interior_sigmas: Vec<T>,
    pub floppy_modes: usize,
    /// Worst relative mismatch of the verification samples.
    pub max_rel_error: T,
}

impl<T: Real> Extraction<T> {
    /// Points where the assembled network or its canonical form may be
    /// singular.
    pub fn singular_points(&self) -> Vec<Cx<T>> {
        let r = &self.canonical.rayleigh;
        let mut pts = rayleigh_singular_points(r);
        for &s in &self.interior_sigmas {
            if s > T::zero() {
                let (p, q) = resonances_of(s, r);
                pts.extend([p, q]);
            }
        }
        pts
    }
}

pub fn extract_canonical<T: Real>(sys: &SystemMatrices<T>, opts: &ExtractOptions<T>) -> Result<CanonicalResponse<T>> {
    extract_canonical_detailed(sys, opts).map(|e| e.canonical)
}

/// Builds the canonical form by simultaneous diagonalization of the reduced
/// massive-interior stiffness and mass, then checks it against direct
/// evaluation at random non-resonant `λ`.
pub fn extract_canonical_detailed<T: Real>(
    sys: &SystemMatrices<T>,
    opts: &ExtractOptions<T>,
) -> Result<Extraction<T>> {
    let reduced = eliminate_massless(sys, opts.tol_pinv)?;
    let nb = reduced.n_boundary();
    let nj = reduced.n_massive();
    let bb: Vec<usize> = (0..nb).collect();
    let jj: Vec<usize> = (nb..nb + nj).collect();
    let kt = reduced.k_tilde.matrix();

    let mut modes = Vec::new();
    let mut interior_sigmas = Vec::new();
    let mut floppy_modes = 0;
    if nj > 0 {
        let inv_sqrt: Vec<T> = reduced.mjj.iter().map(|&m| T::one() / m.sqrt()).collect();
        let kjj = submatrix(kt, &jj, &jj);
        let scaled = SymMatrix::symmetrize(DMatrix::from_fn(nj, nj, |i, j| {
            inv_sqrt[i] * kjj[(i, j)] * inv_sqrt[j]
        }));
        let eig = sym_eig(&scaled);
        // X = M_JJ^{-1/2} U, columns of K̃_BJ X are the couplings v_i
        let mut x = eig.vectors.clone();
        for (i, mut row) in x.row_iter_mut().enumerate() {
            row *= inv_sqrt[i];
        }
        let v = submatrix(kt, &bb, &jj) * x;

        let top = eig.values.iter().fold(T::zero(), |a, &s| a.max(s));
        let k_scale = reduced.k_tilde.max_abs().max(reduced.stiffness_scale);
        let m_scale = inv_sqrt.iter().fold(T::zero(), |a, &s| a.max(s));
        let mut kept: Vec<(T, usize)> = Vec::new();
        for (i, &sigma) in eig.values.iter().enumerate() {
            interior_sigmas.push(sigma);
            if sigma <= opts.tol_floppy * top {
                let coupling = v.column(i).norm();
                let allowed = opts.tol_floppy * k_scale * m_scale;
                if coupling > allowed {
                    return Err(Error::FloppyModeInconsistent {
                        sigma: sigma.as_f64(),
                        coupling: coupling.as_f64(),
                        allowed: allowed.as_f64(),
                    });
                }
                floppy_modes += 1;
            } else {
                kept.push((sigma, i));
            }
        }
        // eigenvalues are ascending, so clusters are contiguous runs
        let mut start = 0;
        while start < kept.len() {
            let base = kept[start].0;
            let mut end = start + 1;
            while end < kept.len() && kept[end].0 - base <= opts.tol_cluster * base {
                end += 1;
            }
            let group = &kept[start..end];
            let mut r = DMatrix::zeros(nb, nb);
            let mut sum = T::zero();
            for &(sigma, i) in group {
                let col = v.column(i);
                r += &col * col.transpose();
                sum += sigma;
            }
            modes.push(Mode {
                sigma: sum / T::lit(group.len() as f64),
                residue: SymMatrix::symmetrize(r),
            });
            start = end;
        }
    }

    let canonical = CanonicalResponse::new(
        reduced.rayleigh,
        reduced.k_tilde.principal(&bb),
        reduced.mbb.clone(),
        modes,
        reduced.terminal_positions.clone(),
    )?;
    let mut extraction = Extraction {
        canonical,
        reduced,
        interior_sigmas,
        floppy_modes,
        max_rel_error: T::zero(),
    };

    if opts.verify_samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let eval = ResponseEvaluator::new(sys);
        let avoid = extraction.singular_points();
        let mut worst = T::zero();
        for lambda in sample_lambdas::<T, _>(&mut rng, opts.verify_samples, &avoid) {
            let direct = eval.evaluate(lambda)?;
            let canon = evaluate_canonical(&extraction.canonical, lambda)?;
            worst = worst.max(linalg::rel_error(canon.w.matrix(), direct.w.matrix()));
        }
        extraction.max_rel_error = worst;
        if !(worst <= opts.verify_tol) {
            return Err(Error::ReconstructionMismatch {
                max_rel_error: worst.as_f64(),
                allowed: opts.verify_tol.as_f64(),
            });
        }
    }
    Ok(extraction)
}
