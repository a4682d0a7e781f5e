//! Admissibility of candidate canonical responses: the five structural
//! conditions, balanced static forces, and sampled passivity.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::balance_residual;
use crate::linalg::{self, psd_violation, SymMatrix};
use crate::atlas::resonances_of;
use crate::response::CanonicalResponse;
use crate::scalar::{Cx, Real};

/// Outcome of [`check_balanced`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalanceCheck<T> {
    pub balanced: bool,
    /// Largest net force or torque component over all columns.
    pub worst_residual: T,
    pub worst_column: usize,
}

/// Whether every column of `f` is a balanced force system at `positions`,
/// with tolerance `tol · (1 + max|F|)`.
pub fn check_balanced<T: Real>(f: &DMatrix<T>, positions: &[Vec<T>], tol: T) -> Result<BalanceCheck<T>> {
    let d = positions.first().map_or(0, |p| p.len());
    if d == 0 || positions.iter().any(|p| p.len() != d) {
        return Err(Error::DimensionMismatch("positions must share a dimension of 2 or 3".into()));
    }
    if d != 2 && d != 3 {
        return Err(Error::DimensionMismatch(format!("unsupported dimension {d}")));
    }
    if f.nrows() != positions.len() * d {
        return Err(Error::DimensionMismatch(format!(
            "force matrix has {} rows, positions need {}",
            f.nrows(),
            positions.len() * d
        )));
    }
    if f.ncols() == 0 {
        return Err(Error::DimensionMismatch("force matrix has no columns".into()));
    }
    let mut worst = T::zero();
    let mut worst_column = 0;
    for (c, col) in f.column_iter().enumerate() {
        let col: Vec<T> = col.iter().copied().collect();
        let r = balance_residual(&col, positions);
        if r > worst {
            worst = r;
            worst_column = c;
        }
    }
    let allowed = tol * (T::one() + linalg::max_abs(f));
    Ok(BalanceCheck {
        balanced: worst <= allowed,
        worst_residual: worst,
        worst_column,
    })
}

/// One admissibility condition; `worst_violation` is zero when the
/// condition holds with room to spare.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub pass: bool,
    pub worst_violation: f64,
    pub witness: String,
}

impl Condition {
    fn holds() -> Self {
        Self {
            pass: true,
            worst_violation: 0.0,
            witness: String::new(),
        }
    }

    fn from_violation<T: Real>(violation: T, tol: T, witness: String) -> Self {
        let v = if violation > T::zero() { violation } else { T::zero() };
        Self {
            pass: v <= tol,
            worst_violation: v.as_f64(),
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conditions {
    #[serde(rename = "R_psd")]
    pub r_psd: Condition,
    pub sigma_positive: Condition,
    #[serde(rename = "M_diag_psd")]
    pub m_diag_psd: Condition,
    #[serde(rename = "A_psd")]
    pub a_psd: Condition,
    pub poles_left_half: Condition,
    pub static_psd: Condition,
    pub static_balanced: Condition,
    pub passivity_sampled: Condition,
}

impl Conditions {
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Condition)> {
        [
            ("R_psd", &self.r_psd),
            ("sigma_positive", &self.sigma_positive),
            ("M_diag_psd", &self.m_diag_psd),
            ("A_psd", &self.a_psd),
            ("poles_left_half", &self.poles_left_half),
            ("static_psd", &self.static_psd),
            ("static_balanced", &self.static_balanced),
            ("passivity_sampled", &self.passivity_sampled),
        ]
        .into_iter()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterizationReport {
    pub pass: bool,
    pub conditions: Conditions,
    pub warnings: Vec<String>,
}

impl CharacterizationReport {
    pub fn failed(&self) -> Vec<&'static str> {
        self.conditions.iter().filter(|(_, c)| !c.pass).map(|(n, _)| n).collect()
    }
}

/// Tolerance and frequency grid for [`check_canonical`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions<T> {
    pub tol: T,
    pub omega_min: T,
    pub omega_max: T,
    /// Log-spaced samples on each sign of ω.
    pub omega_points: usize,
}

impl<T: Real> Default for CheckOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-9),
            omega_min: T::lit(1e-2),
            omega_max: T::lit(1e2),
            omega_points: 41,
        }
    }
}

impl<T: Real> CheckOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { tol, ..Self::default() }
    }

    /// `±` log grid, negative frequencies first.
    pub fn omega_grid(&self) -> Vec<T> {
        let n = self.omega_points;
        let (lo, hi) = (self.omega_min.ln(), self.omega_max.ln());
        let pos: Vec<T> = (0..n)
            .map(|k| {
                if n == 1 {
                    self.omega_min
                } else {
                    (lo + (hi - lo) * T::lit(k as f64) / T::lit((n - 1) as f64)).exp()
                }
            })
            .collect();
        pos.iter().rev().map(|&w| -w).chain(pos.iter().copied()).collect()
    }
}

/// `ω · Im W(iω)` as a real symmetric matrix.
///
/// With every `σⱼ ≠ 0` the matrix is assembled as
/// `αω²W(0) + βω²M + Σ eⱼ(ω) Rⱼ`, which avoids cancelling the large
/// `αω²A` term against the residue sum. The scalar
/// `eⱼ(ω) = αω²/σⱼ − ω Im[(1+iαω)²/qⱼ(iω)]` is the imaginary part of a
/// single damped mode.
pub fn passivity_matrix<T: Real>(cr: &CanonicalResponse<T>, omega: T) -> Result<SymMatrix<T>> {
    let (alpha, beta) = (cr.rayleigh.alpha, cr.rayleigh.beta);
    let lambda = Cx::new(T::zero(), omega);
    let w2 = omega * omega;
    let one_al = Cx::new(T::one(), alpha * omega);
    let num = one_al * one_al;
    let guard = T::lit(1e-12) * (T::one() + w2);
    let decomposed = cr.modes.iter().all(|m| m.sigma != T::zero());
    let n = cr.a.order();
    let mut p = if decomposed {
        cr.static_response().matrix() * (alpha * w2)
    } else {
        cr.a.matrix() * (alpha * w2)
    };
    for i in 0..n {
        p[(i, i)] += beta * w2 * cr.mbb[i];
    }
    for m in &cr.modes {
        let q = lambda * lambda + lambda * (alpha * m.sigma + beta) + m.sigma;
        if q.re.hypot(q.im) <= guard {
            return Err(Error::AtResonance {
                re: T::zero().as_f64(),
                im: omega.as_f64(),
                singular_values: vec![q.re.hypot(q.im).as_f64()],
            });
        }
        let mut coef = -omega * (num / q).im;
        if decomposed {
            coef += alpha * w2 / m.sigma;
        }
        p += m.residue.matrix() * coef;
    }
    Ok(SymMatrix::symmetrize(p))
}

/// Smallest eigenvalue of `ω · Im W(iω)`.
pub fn passivity_margin<T: Real>(cr: &CanonicalResponse<T>, omega: T) -> Result<T> {
    let p = passivity_matrix(cr, omega)?;
    Ok(linalg::eig_range(&p).0)
}

/// Condition failing when the largest violation exceeds `tol`.
fn worst_condition<T: Real>(items: impl Iterator<Item = (T, String)>, tol: T) -> Condition {
    items
        .fold(None::<(T, String)>, |best, (v, w)| match best {
            Some((b, _)) if b >= v => best,
            _ => Some((v, w)),
        })
        .map_or_else(Condition::holds, |(v, w)| Condition::from_violation(v, tol, w))
}

/// Condition failing as soon as any item is present.
fn strict_condition<T: Real>(items: impl Iterator<Item = (T, String)>) -> Condition {
    items
        .fold(None::<(T, String)>, |best, (v, w)| match best {
            Some((b, _)) if b >= v => best,
            _ => Some((v, w)),
        })
        .map_or_else(Condition::holds, |(v, witness)| Condition {
            pass: false,
            worst_violation: v.max(T::zero()).as_f64(),
            witness,
        })
}

fn is_block_constant<T: Real>(mbb: &[T], d: usize) -> bool {
    mbb.chunks(d).all(|b| b.iter().all(|&x| x == b[0]))
}

/// Evaluates every admissibility condition; failures are reported, not
/// raised.
pub fn check_canonical<T: Real>(cr: &CanonicalResponse<T>, opts: &CheckOptions<T>) -> Result<CharacterizationReport> {
    cr.validate_structure()?;
    let tol = opts.tol;
    let d = cr.dimension();
    let mut warnings = Vec::new();

    let r_psd = worst_condition(
        cr.modes.iter().enumerate().map(|(j, m)| {
            let v = psd_violation(&m.residue);
            (v, format!("modes[{j}].R has relative negative eigenvalue {}", -v))
        }),
        tol,
    );
    let sigma_positive = strict_condition(
        cr.modes
            .iter()
            .enumerate()
            .filter(|(_, m)| !(m.sigma > T::zero()))
            .map(|(j, m)| (-m.sigma, format!("modes[{j}].sigma = {}", m.sigma))),
    );
    let poles = worst_condition(
        cr.modes.iter().enumerate().map(|(j, m)| {
            let (p, q) = resonances_of(m.sigma, &cr.rayleigh);
            let re = p.re.max(q.re);
            (re, format!("modes[{j}] has a resonance with real part {re}"))
        }),
        tol,
    );
    for (j, w) in cr.modes.windows(2).enumerate() {
        if !(w[1].sigma > w[0].sigma) {
            warnings.push(format!("modes[{}].sigma does not strictly exceed modes[{j}].sigma", j + 1));
        }
    }

    let m_psd = strict_condition(
        cr.mbb
            .iter()
            .enumerate()
            .filter(|(_, &m)| m < T::zero())
            .map(|(i, &m)| (-m, format!("Mbb[{i}] = {m}"))),
    );
    if !is_block_constant(&cr.mbb, d) {
        warnings.push("Mbb is not constant on node blocks; it cannot be realized by node masses".into());
    }

    let va = psd_violation(&cr.a);
    let a_psd = Condition::from_violation(va, tol, format!("A has relative negative eigenvalue {}", -va));

    let (static_psd, static_balanced) = if cr.modes.iter().any(|m| m.sigma == T::zero()) {
        let undefined = Condition {
            pass: false,
            worst_violation: f64::INFINITY,
            witness: "W(0) is undefined because some sigma is zero".into(),
        };
        (undefined.clone(), undefined)
    } else {
        let w0 = cr.static_response();
        let v = psd_violation(&w0);
        let psd = Condition::from_violation(v, tol, format!("W(0) has relative negative eigenvalue {}", -v));
        let bal = check_balanced(w0.matrix(), &cr.terminal_positions, tol)?;
        let allowed = tol * (T::one() + w0.max_abs());
        let balanced = Condition {
            pass: bal.balanced,
            worst_violation: bal.worst_residual.as_f64(),
            witness: if bal.balanced {
                String::new()
            } else {
                format!(
                    "column {} of W(0) has net force or torque {} (allowed {allowed})",
                    bal.worst_column, bal.worst_residual
                )
            },
        };
        (psd, balanced)
    };

    let mut passivity = Condition::holds();
    let mut worst = T::zero();
    for omega in opts.omega_grid() {
        match passivity_margin(cr, omega) {
            Ok(margin) => {
                if -margin > worst {
                    worst = -margin;
                    passivity = Condition::from_violation(
                        worst,
                        tol,
                        format!("min eig of omega Im W(i omega) is {margin} at omega = {omega}"),
                    );
                }
            }
            Err(Error::AtResonance { .. }) => {
                warnings.push(format!("omega = {omega} is a resonance and was skipped"));
            }
            Err(e) => return Err(e),
        }
    }

    let conditions = Conditions {
        r_psd,
        sigma_positive,
        m_diag_psd: m_psd,
        a_psd,
        poles_left_half: poles,
        static_psd,
        static_balanced,
        passivity_sampled: passivity,
    };
    let pass = conditions.iter().all(|(_, c)| c.pass);
    Ok(CharacterizationReport {
        pass,
        conditions,
        warnings,
    })
}
