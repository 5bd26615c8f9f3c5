//! Concurrence: pure states (reduced-density and 2×2-minor forms), the
//! exact two-qubit formula, and a numerical estimate of the convex roof for
//! small mixed blocks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, cr, ComplexMatrix};
use crate::random::{derived_seed, random_isometry, seeded};
use crate::states::{BipartiteState, PureState, PSD_TOL};
use crate::subspace::SubspaceSelector;

/// Largest local dimension accepted by [`roof_estimate`].
pub const MAX_ROOF_DIM: usize = 5;
/// Eigenvalues at or below this are dropped from the support of a mixed state.
pub const SUPPORT_FLOOR: f64 = 1e-12;
/// An ensemble average at or below this fraction of `tr ρ` counts as zero
/// and ends the search.
pub const ZERO_ROOF: f64 = 1e-12;

const GRID: usize = 32;
const REFINE_ROUNDS: usize = 3;
const GOLDEN_ITERS: usize = 40;
/// Smoothing schedule `ε` for the member cost; the last stage is exact.
const SMOOTHING: [f64; 3] = [1e-2, 1e-4, 0.0];

/// `√(2 (1 − tr ρ_A²))` for a normalized pure state.
pub fn pure_concurrence(psi: &PureState) -> f64 {
    let a = psi.coeffs();
    let rho_a = a * &a.adjoint();
    let purity: f64 = rho_a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    libm::sqrt((2.0 * (1.0 - purity)).max(0.0))
}

/// `2 √(Σ_{i<k} Σ_{j<l} |a_ij a_kl − a_il a_kj|²)`, optionally restricted to the
/// rows and columns of a selector. Accepts unnormalized coefficients and is
/// homogeneous of degree 2 in them.
pub fn pure_concurrence_minors(coeffs: &ComplexMatrix, selector: Option<&SubspaceSelector>) -> Result<f64> {
    let all_rows: Vec<usize>;
    let all_cols: Vec<usize>;
    let (rows, cols) = match selector {
        Some(sel) => {
            let last = |v: &[usize]| v.last().copied().unwrap_or(0);
            if last(sel.rows()) >= coeffs.rows() || last(sel.cols()) >= coeffs.cols() {
                return Err(Error::Selector(format!(
                    "selector {:?}x{:?} out of range for a {}x{} coefficient matrix",
                    sel.rows(),
                    sel.cols(),
                    coeffs.rows(),
                    coeffs.cols()
                )));
            }
            (sel.rows(), sel.cols())
        }
        None => {
            all_rows = (0..coeffs.rows()).collect();
            all_cols = (0..coeffs.cols()).collect();
            (&all_rows[..], &all_cols[..])
        }
    };
    let mut sum = 0.0;
    for (p, &i) in rows.iter().enumerate() {
        for &k in &rows[p + 1..] {
            for (q, &j) in cols.iter().enumerate() {
                for &l in &cols[q + 1..] {
                    sum += (coeffs[(i, j)] * coeffs[(k, l)] - coeffs[(i, l)] * coeffs[(k, j)]).norm_sqr();
                }
            }
        }
    }
    Ok(2.0 * libm::sqrt(sum))
}

/// Wootters' two-qubit concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, with `λ` the
/// decreasing square roots of the spectrum of `ρ (Y⊗Y) ρ̄ (Y⊗Y)`.
///
/// The spectrum is taken from the Hermitian `√ρ ρ̃ √ρ`, which is similar to
/// that product. Unnormalized input is fine; the result scales linearly.
pub fn wootters(rho: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::Dimension(format!(
            "two-qubit concurrence needs a 4x4 matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let scale = rho.trace().re.abs().max(1.0);
    let (vals, vecs) = linalg::eigh(rho)?;
    if vals[0] < -PSD_TOL * scale {
        return Err(Error::NotPositive { min_eigenvalue: vals[0] });
    }
    // The λᵢ are the singular values of Ψᵀ (Y ⊗ Y) Ψ with Ψ = V √Λ, which
    // avoids square roots of round-off in the spin-flipped product.
    let psi = ComplexMatrix::from_fn(4, 4, |i, j| vecs[(i, j)] * libm::sqrt(vals[j].max(0.0)));
    let tau = &(&psi.transpose() * &spin_flip()) * &psi;
    let mut mu = linalg::singular_values(&tau)?;
    mu.sort_by(|a, b| a.total_cmp(b));
    // ascending, so λ₁ is last
    Ok((mu[3] - mu[2] - mu[1] - mu[0]).max(0.0))
}

fn spin_flip() -> ComplexMatrix {
    let mut yy = ComplexMatrix::zeros(4, 4);
    yy[(0, 3)] = cr(-1.0);
    yy[(1, 2)] = cr(1.0);
    yy[(2, 1)] = cr(1.0);
    yy[(3, 0)] = cr(-1.0);
    yy
}

/// Settings for [`roof_estimate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoofOptions {
    /// Ensemble size; `None` means `min(r², 2r + 4)` for a rank-`r` input.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub max_sweeps: usize,
    /// A sweep improving the objective by less than this ends the run.
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 10,
            max_sweeps: 500,
            tol: 1e-10,
            seed: 0,
        }
    }
}

pub fn default_ensemble_size(rank: usize) -> usize {
    (rank * rank).min(2 * rank + 4)
}

/// Best decomposition found by [`roof_estimate`].
#[derive(Clone, Debug)]
pub struct RoofResult {
    /// `Σ p_i C(ψ_i)` of the returned ensemble; an upper estimate of the roof.
    pub value: f64,
    /// `(p_i, ψ_i)` with `Σ p_i |ψ_i⟩⟨ψ_i|` equal to the input up to the dropped support.
    pub ensemble: Vec<(f64, PureState)>,
    pub converged: bool,
    /// Average concurrence of the spectral decomposition, the starting point of restart 0.
    pub initial_value: f64,
    /// Best exact objective after each sweep of the winning restart, starting with its initial value.
    pub history: Vec<f64>,
    pub restart: usize,
}

/// Upper estimate of the convex-roof concurrence `min Σ p_i C(ψ_i)`.
///
/// The ensemble is `ψ̃_i = Σ_j U_ij √λ_j |v_j⟩` for a `K × r` isometry `U`
/// acting on the weighted eigenvectors. Each sweep visits every pair of
/// members and applies the two-member unitary
/// `[[cos θ, e^{iφ} sin θ], [−e^{−iφ} sin θ, cos θ]]` minimizing their summed
/// concurrence, located by a 32×32 grid and golden-section refinement.
/// Restart 0 starts from the spectral decomposition, later restarts from
/// seeded random isometries; the smallest value wins.
///
/// Sweeps first run on the smoothed cost `2√(‖M(ψ̃)‖² + ε²‖ψ̃‖⁴)` for
/// `ε = 10⁻², 10⁻⁴` and then on the exact cost until a sweep improves it by
/// less than `tol`.
///
/// Works on unnormalized blocks too: the weights then sum to the trace.
pub fn roof_estimate(rho: &BipartiteState, opts: &RoofOptions) -> Result<RoofResult> {
    if rho.m() > MAX_ROOF_DIM || rho.n() > MAX_ROOF_DIM {
        return Err(Error::Dimension(format!(
            "roof estimation is limited to {MAX_ROOF_DIM}⊗{MAX_ROOF_DIM}, got {}⊗{}",
            rho.m(),
            rho.n()
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Parameter {
            name: "tol".into(),
            value: opts.tol,
            range: "(0, ∞)",
        });
    }
    rho.require_positive()?;
    let (m, n) = (rho.m(), rho.n());
    let (vals, vecs) = linalg::eigh(rho.matrix())?;
    let dim = rho.index().dim();
    let support: Vec<Vec<Complex64>> = vals
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &l)| l > SUPPORT_FLOOR)
        .map(|(j, &l)| {
            let w = libm::sqrt(l);
            (0..dim).map(|r| vecs[(r, j)] * w).collect()
        })
        .collect();
    let rank = support.len();
    if rank == 0 {
        return Ok(RoofResult {
            value: 0.0,
            ensemble: Vec::new(),
            converged: true,
            initial_value: 0.0,
            history: vec![0.0],
            restart: 0,
        });
    }
    let k = opts.ensemble_size.unwrap_or_else(|| default_ensemble_size(rank)).max(rank);
    let table = MinorTable::new(m, n);
    let restarts = opts.restarts.max(1);
    let zero = ZERO_ROOF * rho.trace();
    let first = run_restart(&support, k, &table, opts, 0, zero);
    let mut runs = vec![first];
    if runs[0].value > zero {
        runs.extend(crate::par::map_indices(restarts - 1, |r| {
            run_restart(&support, k, &table, opts, r + 1, zero)
        }));
    }

    let initial_value = runs[0].history[0];
    let (best_idx, _) = runs
        .iter()
        .enumerate()
        .fold((0usize, f64::INFINITY), |(bi, bv), (i, r)| if r.value < bv { (i, r.value) } else { (bi, bv) });
    let best = runs.into_iter().nth(best_idx).expect("at least one restart");

    let mut ensemble = Vec::new();
    let mut value = 0.0;
    for member in &best.members {
        let weight: f64 = member.iter().map(|z| z.norm_sqr()).sum();
        if weight <= 1e-300 {
            continue;
        }
        let inv = 1.0 / libm::sqrt(weight);
        let psi = PureState::from_amplitudes(m, n, member.iter().map(|z| z * inv).collect())?;
        value += weight * pure_concurrence_minors(psi.coeffs(), None)?;
        ensemble.push((weight, psi));
    }
    Ok(RoofResult {
        value,
        ensemble,
        converged: best.converged,
        initial_value,
        history: best.history,
        restart: best_idx,
    })
}

struct Run {
    members: Vec<Vec<Complex64>>,
    value: f64,
    history: Vec<f64>,
    converged: bool,
}

fn run_restart(
    support: &[Vec<Complex64>],
    k: usize,
    table: &MinorTable,
    opts: &RoofOptions,
    restart: usize,
    zero: f64,
) -> Run {
    let rank = support.len();
    let dim = support[0].len();
    let start: Vec<Vec<Complex64>> = if restart == 0 {
        (0..k)
            .map(|i| if i < rank { support[i].clone() } else { vec![Complex64::default(); dim] })
            .collect()
    } else {
        let mut rng = seeded(derived_seed(opts.seed, restart as u64));
        let u = random_isometry(k, rank, &mut rng);
        (0..k)
            .map(|i| {
                (0..dim)
                    .map(|x| (0..rank).map(|j| u[(i, j)] * support[j][x]).sum())
                    .collect()
            })
            .collect()
    };
    let phases = phase_grid();
    let mut state = Sweeper::new(start, table);
    let mut best = (state.true_value(), state.members.clone());
    let mut history = vec![best.0];
    let mut converged = k == 1;
    let mut sweeps = 0;
    if k > 1 && best.0 > zero {
        for (stage, &eps) in SMOOTHING.iter().enumerate() {
            state.set_smoothing(eps);
            let mut value = state.value();
            let last = stage + 1 == SMOOTHING.len();
            while sweeps < opts.max_sweeps {
                sweeps += 1;
                state.sweep(table, &phases);
                let next = state.value();
                let improvement = value - next;
                value = next.min(value);
                let truth = state.true_value();
                if truth < best.0 {
                    best = (truth, state.members.clone());
                }
                history.push(best.0);
                if best.0 <= zero || (last && improvement < opts.tol) {
                    converged = true;
                    break;
                }
                if !last && improvement < opts.tol.max(eps * 1e-4) {
                    break;
                }
            }
            if converged || sweeps >= opts.max_sweeps {
                break;
            }
        }
    } else {
        converged = true;
    }
    Run {
        members: best.1,
        value: best.0,
        history,
        converged,
    }
}

/// Ensemble members with cached minors under the (optionally smoothed) cost
/// `2 √(‖M(x)‖² + ε² ‖x‖⁴)` per member.
struct Sweeper {
    members: Vec<Vec<Complex64>>,
    minors: Vec<Vec<Complex64>>,
    norms: Vec<f64>,
    weights: Vec<f64>,
    eps2: f64,
}

impl Sweeper {
    fn new(members: Vec<Vec<Complex64>>, table: &MinorTable) -> Self {
        let minors: Vec<Vec<Complex64>> = members.iter().map(|v| table.minors(v)).collect();
        let norms = minors.iter().map(|m| sq_norm(m)).collect();
        let weights = members.iter().map(|v| sq_norm(v)).collect();
        Self {
            members,
            minors,
            norms,
            weights,
            eps2: 0.0,
        }
    }

    fn set_smoothing(&mut self, eps: f64) {
        self.eps2 = eps * eps;
    }

    fn cost(&self, i: usize) -> f64 {
        member_cost(self.norms[i], self.weights[i], self.eps2)
    }

    fn value(&self) -> f64 {
        (0..self.members.len()).map(|i| self.cost(i)).sum()
    }

    fn true_value(&self) -> f64 {
        self.norms.iter().map(|&n| 2.0 * libm::sqrt(n)).sum()
    }

    fn sweep(&mut self, table: &MinorTable, phases: &Phases) {
        let k = self.members.len();
        for i in 0..k {
            for l in i + 1..k {
                let before = self.cost(i) + self.cost(l);
                if before == 0.0 {
                    continue;
                }
                let (x, y) = (&self.members[i], &self.members[l]);
                let cross = table.cross(x, y);
                let overlap: Complex64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
                let objective = PairObjective::new(
                    &self.minors[i],
                    &cross,
                    &self.minors[l],
                    [self.weights[i], self.weights[l]],
                    overlap,
                    self.eps2,
                );
                let (theta, phi, predicted) = objective.minimize(phases);
                if !(predicted < before - 1e-15 * before) {
                    continue;
                }
                let (ni, nl) = rotate(x, y, theta, phi);
                let (mi, ml) = (table.minors(&ni), table.minors(&nl));
                let (ni2, nl2) = (sq_norm(&mi), sq_norm(&ml));
                let (wi, wl) = (sq_norm(&ni), sq_norm(&nl));
                if member_cost(ni2, wi, self.eps2) + member_cost(nl2, wl, self.eps2) < before {
                    self.members[i] = ni;
                    self.members[l] = nl;
                    self.minors[i] = mi;
                    self.minors[l] = ml;
                    self.norms[i] = ni2;
                    self.norms[l] = nl2;
                    self.weights[i] = wi;
                    self.weights[l] = wl;
                }
            }
        }
    }
}

fn sq_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn member_cost(norm_sq: f64, weight: f64, eps2: f64) -> f64 {
    2.0 * libm::sqrt(norm_sq + eps2 * weight * weight)
}

fn rotate(x: &[Complex64], y: &[Complex64], theta: f64, phi: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let (s, co) = (libm::sin(theta), libm::cos(theta));
    let e = c(libm::cos(phi), libm::sin(phi));
    let a: Vec<Complex64> = x.iter().zip(y).map(|(&xv, &yv)| xv * co + e * s * yv).collect();
    let b: Vec<Complex64> = x.iter().zip(y).map(|(&xv, &yv)| -(e.conj() * s) * xv + yv * co).collect();
    (a, b)
}


/// Composite-index quadruples `(ij, kl, il, kj)` of every 2×2 minor.
struct MinorTable {
    quads: Vec<[usize; 4]>,
}

impl MinorTable {
    fn new(m: usize, n: usize) -> Self {
        let mut quads = Vec::new();
        for i in 0..m {
            for k in i + 1..m {
                for j in 0..n {
                    for l in j + 1..n {
                        quads.push([i * n + j, k * n + l, i * n + l, k * n + j]);
                    }
                }
            }
        }
        Self { quads }
    }

    fn minors(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.quads
            .iter()
            .map(|&[ij, kl, il, kj]| x[ij] * x[kl] - x[il] * x[kj])
            .collect()
    }

    /// Symmetric bilinear form with `cross(x, x) = minors(x)`.
    fn cross(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        self.quads
            .iter()
            .map(|&[ij, kl, il, kj]| (x[ij] * y[kl] + y[ij] * x[kl] - x[il] * y[kj] - y[il] * x[kj]) * 0.5)
            .collect()
    }
}

/// Summed concurrence of a rotated pair as a function of `(θ, φ)`.
///
/// With `P = M(x)`, `Q = B(x, y)`, `R = M(y)` the minors of the rotated pair
/// are `c²P + 2cs e^{iφ} Q + s² e^{2iφ} R` and (up to a global phase)
/// `s²P − 2cs e^{iφ} Q + c² e^{2iφ} R`, so only the Gram matrix of
/// `{P, Q, R}` is needed per evaluation.
/// `(e^{iφ}, e^{2iφ})` on the `φ` grid.
type Phases = [(Complex64, Complex64); GRID];

fn phase_grid() -> Phases {
    let dphi = 2.0 * PI / GRID as f64;
    core::array::from_fn(|b| {
        let p = b as f64 * dphi;
        (c(libm::cos(p), libm::sin(p)), c(libm::cos(2.0 * p), libm::sin(2.0 * p)))
    })
}

struct PairObjective {
    gram: [[Complex64; 3]; 3],
    weights: [f64; 2],
    overlap: Complex64,
    eps2: f64,
}

/// Per-`θ` data: Fourier coefficients in `φ` of both members' squared minor
/// norms, and their weights as `w + v · Re(e^{iφ}⟨x|y⟩)`.
type Row = [(f64, Complex64, Complex64, f64, f64); 2];

impl PairObjective {
    fn new(p: &[Complex64], q: &[Complex64], r: &[Complex64], weights: [f64; 2], overlap: Complex64, eps2: f64) -> Self {
        let vs = [p, q, r];
        let mut gram = [[Complex64::default(); 3]; 3];
        for a in 0..3 {
            for b in a..3 {
                let g: Complex64 = vs[a].iter().zip(vs[b]).map(|(x, y)| x.conj() * y).sum();
                gram[a][b] = g;
                gram[b][a] = g.conj();
            }
        }
        Self {
            gram,
            weights,
            overlap,
            eps2,
        }
    }

    /// Fourier coefficients in `φ` of `‖u₀P + u₁e^{iφ}Q + u₂e^{2iφ}R‖²`.
    fn coefficients(&self, u: [f64; 3]) -> (f64, Complex64, Complex64) {
        let g = &self.gram;
        let a0 = u[0] * u[0] * g[0][0].re + u[1] * u[1] * g[1][1].re + u[2] * u[2] * g[2][2].re;
        let a1 = g[0][1] * (u[0] * u[1]) + g[1][2] * (u[1] * u[2]);
        let a2 = g[0][2] * (u[0] * u[2]);
        (a0, a1, a2)
    }

    fn rows(&self, theta: f64) -> Row {
        let (s, co) = (libm::sin(theta), libm::cos(theta));
        let (s2, c2, cs2) = (s * s, co * co, 2.0 * co * s);
        let [a, b] = self.weights;
        let (p0, p1, p2) = self.coefficients([c2, cs2, s2]);
        let (q0, q1, q2) = self.coefficients([s2, -cs2, c2]);
        [(p0, p1, p2, c2 * a + s2 * b, cs2), (q0, q1, q2, s2 * a + c2 * b, -cs2)]
    }

    fn eval_rows(&self, rows: &Row, e: Complex64, e2: Complex64) -> f64 {
        let re_overlap = (e * self.overlap).re;
        rows.iter()
            .map(|&(a0, a1, a2, w, v)| {
                let norm = (a0 + 2.0 * ((a1 * e).re + (a2 * e2).re)).max(0.0);
                let weight = w + v * re_overlap;
                member_cost(norm, weight, self.eps2)
            })
            .sum()
    }

    fn eval(&self, theta: f64, phi: f64) -> f64 {
        let e = c(libm::cos(phi), libm::sin(phi));
        self.eval_rows(&self.rows(theta), e, e * e)
    }

    fn minimize(&self, phases: &Phases) -> (f64, f64, f64) {
        let dtheta = 0.5 * PI / GRID as f64;
        let dphi = 2.0 * PI / GRID as f64;
        let mut best = (0.0, 0.0, self.eval(0.0, 0.0));
        for a in 1..GRID {
            let t = a as f64 * dtheta;
            let rows = self.rows(t);
            for (b, &(e, e2)) in phases.iter().enumerate() {
                let f = self.eval_rows(&rows, e, e2);
                if f < best.2 {
                    best = (t, b as f64 * dphi, f);
                }
            }
        }
        let (mut t, mut p) = (best.0, best.1);
        let (mut wt, mut wp) = (dtheta, dphi);
        for _ in 0..REFINE_ROUNDS {
            let e = c(libm::cos(p), libm::sin(p));
            t = golden(|x| self.eval_rows(&self.rows(x), e, e * e), t - wt, t + wt);
            let rows = self.rows(t);
            p = golden(
                |y| {
                    let e = c(libm::cos(y), libm::sin(y));
                    self.eval_rows(&rows, e, e * e)
                },
                p - wp,
                p + wp,
            );
            wt *= 0.25;
            wp *= 0.25;
        }
        let f = self.eval(t, p);
        if f < best.2 {
            (t, p, f)
        } else {
            best
        }
    }
}

/// Golden-section search for a minimizer of `f` on `[lo, hi]`.
fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}
