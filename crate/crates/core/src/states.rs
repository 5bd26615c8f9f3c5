//! Pure and mixed bipartite states, the example family, and N-copy regrouping.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, bipartite_kron, cr, BipartiteIndex, ComplexMatrix, HERMITIAN_TOL};

/// Normalization tolerance for pure-state coefficients.
pub const PURE_NORM_TOL: f64 = 1e-10;
/// Unit-trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-8;
/// Most negative eigenvalue accepted as roundoff.
pub const PSD_TOL: f64 = 1e-8;

/// Pure state `Σ a_ij |ij⟩` stored as its `m × n` coefficient matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    coeffs: ComplexMatrix,
}

impl PureState {
    pub fn new(coeffs: ComplexMatrix) -> Result<Self> {
        BipartiteIndex::new(coeffs.rows(), coeffs.cols())?;
        let norm_sq: f64 = coeffs.as_slice().iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::Norm { norm_sq });
        }
        Ok(Self { coeffs })
    }

    /// From amplitudes listed in composite order `i * n + j`.
    pub fn from_amplitudes(m: usize, n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new(ComplexMatrix::new(m, n, amplitudes)?)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(m: usize, n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let norm = libm::sqrt(norm);
        if !(norm > 0.0) {
            return Err(Error::Norm { norm_sq: norm * norm });
        }
        Self::from_amplitudes(m, n, amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// `|ij⟩`.
    pub fn basis(m: usize, n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= m || j >= n {
            return Err(Error::Dimension(format!("basis state |{i}{j}⟩ outside {m}⊗{n}")));
        }
        let mut coeffs = ComplexMatrix::zeros(m, n);
        coeffs[(i, j)] = cr(1.0);
        Self::new(coeffs)
    }

    /// `Σ_i |ii⟩ / √d`.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        let amp = 1.0 / libm::sqrt(d as f64);
        let mut coeffs = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            coeffs[(i, i)] = cr(amp);
        }
        Self::new(coeffs)
    }

    pub fn m(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn n(&self) -> usize {
        self.coeffs.cols()
    }

    pub fn index(&self) -> BipartiteIndex {
        BipartiteIndex::new(self.m(), self.n()).expect("validated at construction")
    }

    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    /// Amplitudes in composite order.
    pub fn amplitudes(&self) -> &[Complex64] {
        self.coeffs.as_slice()
    }
}

/// Summary of the numerical health of a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fingerprint {
    pub m: usize,
    pub n: usize,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub hermitian_deviation: f64,
}

/// Density operator on `m ⊗ n`.
///
/// Normalized states carry unit trace. Projected sub-blocks and scaled
/// copies are unnormalized (trace in `[0, 1]` for blocks of a normalized
/// state). Positivity is verified at construction unless the state was
/// built through [`BipartiteState::new_indefinite`], in which case
/// [`BipartiteState::positivity_checked`] is false and every operation that
/// needs positivity checks it on its own inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    idx: BipartiteIndex,
    mat: ComplexMatrix,
    normalized: bool,
    positivity_checked: bool,
}

impl BipartiteState {
    /// Validates a unit-trace, Hermitian, positive semidefinite operator.
    /// Matrices within the Hermiticity tolerance are symmetrized.
    pub fn new(idx: BipartiteIndex, mat: ComplexMatrix) -> Result<Self> {
        let mat = Self::validate(idx, mat, true)?;
        Ok(Self {
            idx,
            mat,
            normalized: true,
            positivity_checked: true,
        })
    }

    /// Like [`BipartiteState::new`] but for a sub-normalized block: trace
    /// must be non-negative, anything else is checked as usual.
    pub fn new_unnormalized(idx: BipartiteIndex, mat: ComplexMatrix) -> Result<Self> {
        let mat = Self::validate(idx, mat, false)?;
        Ok(Self {
            idx,
            mat,
            normalized: false,
            positivity_checked: true,
        })
    }

    /// Hermitian unit-trace operator whose positivity is not required.
    pub fn new_indefinite(idx: BipartiteIndex, mat: ComplexMatrix) -> Result<Self> {
        idx.check(&mat)?;
        let mat = hermitian_or_err(mat)?;
        check_unit_trace(&mat)?;
        Ok(Self {
            idx,
            mat,
            normalized: true,
            positivity_checked: false,
        })
    }

    /// Internal constructor for outputs of positivity- and Hermiticity-preserving maps.
    pub(crate) fn from_parts(idx: BipartiteIndex, mat: ComplexMatrix, normalized: bool, positivity_checked: bool) -> Self {
        debug_assert_eq!(mat.rows(), idx.dim());
        Self {
            idx,
            mat,
            normalized,
            positivity_checked,
        }
    }

    fn validate(idx: BipartiteIndex, mat: ComplexMatrix, unit_trace: bool) -> Result<ComplexMatrix> {
        idx.check(&mat)?;
        let mat = hermitian_or_err(mat)?;
        if unit_trace {
            check_unit_trace(&mat)?;
        } else if mat.trace().re < -TRACE_TOL {
            return Err(Error::Trace {
                trace: mat.trace().re,
                expected: "non-negative",
            });
        }
        let min_eigenvalue = linalg::min_eigenvalue(&mat)?;
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(mat)
    }

    pub fn index(&self) -> BipartiteIndex {
        self.idx
    }

    pub fn m(&self) -> usize {
        self.idx.m()
    }

    pub fn n(&self) -> usize {
        self.idx.n()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn positivity_checked(&self) -> bool {
        self.positivity_checked
    }

    /// Errors unless the operator is positive semidefinite within tolerance.
    /// Free for states whose positivity was verified at construction.
    pub fn require_positive(&self) -> Result<()> {
        if self.positivity_checked {
            return Ok(());
        }
        let min_eigenvalue = self.min_eigenvalue()?;
        if min_eigenvalue < -PSD_TOL * self.trace().abs().max(1.0) {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        linalg::min_eigenvalue(&self.mat)
    }

    pub fn fingerprint(&self) -> Result<Fingerprint> {
        Ok(Fingerprint {
            m: self.m(),
            n: self.n(),
            trace: self.trace(),
            min_eigenvalue: self.min_eigenvalue()?,
            hermitian_deviation: self.mat.hermitian_deviation(),
        })
    }

    /// `factor · ρ` as an unnormalized state.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0) || !factor.is_finite() {
            return Err(Error::Parameter {
                name: "factor".to_owned(),
                value: factor,
                range: "[0, ∞)",
            });
        }
        Ok(Self::from_parts(self.idx, self.mat.scale(factor), false, self.positivity_checked))
    }

    /// `ρ / tr ρ`, or `None` for a block with trace below `1e-14`.
    pub fn normalized_copy(&self) -> Option<Self> {
        let tr = self.trace();
        if tr < crate::subspace::ZERO_BLOCK_TRACE {
            return None;
        }
        Some(Self::from_parts(self.idx, self.mat.scale(1.0 / tr), true, self.positivity_checked))
    }

    /// Same operator with the two subsystems exchanged.
    pub fn swapped(&self) -> Self {
        let idx = self.idx;
        let sw = idx.swapped();
        let mat = ComplexMatrix::from_fn(idx.dim(), idx.dim(), |r, col| {
            let (j, i) = (r / sw.n(), r % sw.n());
            let (l, k) = (col / sw.n(), col % sw.n());
            self.mat[(idx.composite(i, j), idx.composite(k, l))]
        });
        Self::from_parts(sw, mat, self.normalized, self.positivity_checked)
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
    pub fn local_unitary(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        if ua.rows() != self.m() || ua.cols() != self.m() || ub.rows() != self.n() || ub.cols() != self.n() {
            return Err(Error::Dimension(format!(
                "local unitaries of size {}x{} and {}x{} do not fit {}⊗{}",
                ua.rows(),
                ua.cols(),
                ub.rows(),
                ub.cols(),
                self.m(),
                self.n()
            )));
        }
        let u = linalg::kron(ua, ub)?;
        let mat = &(&u * &self.mat) * &u.adjoint();
        Ok(Self::from_parts(self.idx, mat.hermitian_part(), self.normalized, self.positivity_checked))
    }
}

fn hermitian_or_err(mat: ComplexMatrix) -> Result<ComplexMatrix> {
    let dev = mat.hermitian_deviation();
    if dev > HERMITIAN_TOL * (1.0 + mat.max_abs()) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(mat.hermitian_part())
}

fn check_unit_trace(mat: &ComplexMatrix) -> Result<()> {
    let tr = mat.trace().re;
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::Trace {
            trace: tr,
            expected: "unit-trace",
        });
    }
    Ok(())
}

/// `|ψ⟩⟨ψ|`.
pub fn from_pure(psi: &PureState) -> BipartiteState {
    let mat = ComplexMatrix::outer(psi.amplitudes());
    BipartiteState::from_parts(psi.index(), mat, true, true)
}

/// `ρ^{⊗N}` regrouped as `m^N ⊗ n^N`, with the first copy's local index
/// most significant on each side.
pub fn tensor_copies(rho: &BipartiteState, copies: usize) -> Result<BipartiteState> {
    tensor_copies_capped(rho, copies, linalg::DEFAULT_DIM_CAP)
}

pub fn tensor_copies_capped(rho: &BipartiteState, copies: usize, cap: usize) -> Result<BipartiteState> {
    if copies == 0 {
        return Err(Error::Parameter {
            name: "copies".to_owned(),
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    let base = rho.index();
    let mut dim = base.dim();
    for _ in 1..copies {
        dim = dim.checked_mul(base.dim()).filter(|&d| d <= cap).ok_or(Error::SizeLimit {
            dim: dim.saturating_mul(base.dim()),
            cap,
        })?;
    }
    let mut acc = rho.matrix().clone();
    let mut idx = base;
    for _ in 1..copies {
        let (next, next_idx) = bipartite_kron(&acc, idx, rho.matrix(), base, cap)?;
        acc = next;
        idx = next_idx;
    }
    let normalized = rho.is_normalized();
    Ok(BipartiteState::from_parts(idx, acc, normalized, rho.positivity_checked()))
}

/// Parameterised example states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Builtin {
    /// `(p/3)(|00⟩+|11⟩+|22⟩)(h.c.) + (1−p)|33⟩⟨33|` on 4⊗4.
    Rho0 { p: f64 },
    /// Horodecki's 3⊗3 family `σ_α`: separable for α ∈ [2,3], PPT entangled
    /// for α ∈ (3,4], NPT for α ∈ (4,5].
    SigmaAlpha { alpha: f64 },
    /// `p·σ_α ⊕ (1−p)|33⟩⟨33|` on 4⊗4.
    Rho1 { p: f64, alpha: f64 },
    /// The 4⊗4 NPT example built entry by entry. As written it is Hermitian
    /// with unit trace but has the negative eigenvalue `p(1−√2)/6`, coming
    /// from the couplings of `|12⟩` to both `|00⟩` and `|01⟩`; it is
    /// constructed with [`BipartiteState::new_indefinite`].
    Rho2 { p: f64 },
    /// `Σ|ii⟩/√d` on d⊗d.
    MaxEnt { d: usize },
    /// `w|φ⁺_d⟩⟨φ⁺_d| + (1−w) I/d²`.
    Isotropic { d: usize, w: f64 },
}

pub const BUILTIN_NAMES: [&str; 6] = ["rho0", "sigma_alpha", "rho1", "rho2", "maxent", "isotropic"];

const DEFAULT_P: f64 = 0.5;
const DEFAULT_ALPHA: f64 = 3.5;
const DEFAULT_W: f64 = 0.9;
const DEFAULT_D: f64 = 3.0;
const MAX_BUILTIN_D: usize = 16;

impl Builtin {
    /// Parses a builtin by name. Unspecified parameters take the defaults
    /// `p = 0.5`, `alpha = 3.5`, `w = 0.9`, `d = 3`.
    pub fn from_params(name: &str, params: &[(&str, f64)]) -> Result<Self> {
        let allowed: &[&str] = match name {
            "rho0" | "rho2" => &["p"],
            "sigma_alpha" => &["alpha"],
            "rho1" => &["p", "alpha"],
            "maxent" => &["d"],
            "isotropic" => &["d", "w"],
            _ => return Err(Error::UnknownState(name.to_owned())),
        };
        for (key, _) in params {
            if !allowed.contains(key) {
                return Err(Error::UnknownState(format!("{name} has no parameter `{key}`")));
            }
        }
        let get = |key: &str, default: f64| {
            params
                .iter()
                .rev()
                .find(|(k, _)| *k == key)
                .map_or(default, |&(_, v)| v)
        };
        let p = range_checked("p", get("p", DEFAULT_P), 0.0, 1.0, "[0, 1]")?;
        let alpha = range_checked("alpha", get("alpha", DEFAULT_ALPHA), 2.0, 5.0, "[2, 5]")?;
        let w = range_checked("w", get("w", DEFAULT_W), 0.0, 1.0, "[0, 1]")?;
        let d = dimension_param(get("d", DEFAULT_D))?;
        Ok(match name {
            "rho0" => Builtin::Rho0 { p },
            "sigma_alpha" => Builtin::SigmaAlpha { alpha },
            "rho1" => Builtin::Rho1 { p, alpha },
            "rho2" => Builtin::Rho2 { p },
            "maxent" => Builtin::MaxEnt { d },
            _ => Builtin::Isotropic { d, w },
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Rho0 { .. } => "rho0",
            Builtin::SigmaAlpha { .. } => "sigma_alpha",
            Builtin::Rho1 { .. } => "rho1",
            Builtin::Rho2 { .. } => "rho2",
            Builtin::MaxEnt { .. } => "maxent",
            Builtin::Isotropic { .. } => "isotropic",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Builtin::Rho0 { p } | Builtin::Rho2 { p } => vec![("p", p)],
            Builtin::SigmaAlpha { alpha } => vec![("alpha", alpha)],
            Builtin::Rho1 { p, alpha } => vec![("p", p), ("alpha", alpha)],
            Builtin::MaxEnt { d } => vec![("d", d as f64)],
            Builtin::Isotropic { d, w } => vec![("d", d as f64), ("w", w)],
        }
    }

    pub fn state(&self) -> Result<BipartiteState> {
        match *self {
            Builtin::Rho0 { p } => {
                let idx = BipartiteIndex::new(4, 4)?;
                let mut mat = ComplexMatrix::zeros(16, 16);
                for i in 0..3 {
                    for k in 0..3 {
                        mat[(idx.composite(i, i), idx.composite(k, k))] = cr(p / 3.0);
                    }
                }
                mat[(15, 15)] = cr(1.0 - p);
                BipartiteState::new(idx, mat)
            }
            Builtin::SigmaAlpha { alpha } => BipartiteState::new(BipartiteIndex::new(3, 3)?, sigma_alpha(alpha)),
            Builtin::Rho1 { p, alpha } => {
                let idx = BipartiteIndex::new(4, 4)?;
                let small = BipartiteIndex::new(3, 3)?;
                let sigma = sigma_alpha(alpha);
                let mut mat = ComplexMatrix::zeros(16, 16);
                for (i, j, k, l) in quad(3) {
                    mat[(idx.composite(i, j), idx.composite(k, l))] =
                        sigma[(small.composite(i, j), small.composite(k, l))] * p;
                }
                mat[(15, 15)] = cr(1.0 - p);
                BipartiteState::new(idx, mat)
            }
            Builtin::Rho2 { p } => {
                let idx = BipartiteIndex::new(4, 4)?;
                let at = |i: usize, j: usize| idx.composite(i, j);
                let mut mat = ComplexMatrix::zeros(16, 16);
                for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)] {
                    mat[(at(i, j), at(i, j))] = cr(p / 6.0);
                }
                for (a, b) in [((0, 0), (1, 2)), ((0, 1), (1, 2)), ((1, 0), (1, 1))] {
                    mat[(at(a.0, a.1), at(b.0, b.1))] = cr(-p / 6.0);
                    mat[(at(b.0, b.1), at(a.0, a.1))] = cr(-p / 6.0);
                }
                mat[(at(2, 2), at(2, 2))] = cr((1.0 - p) / 2.0);
                mat[(at(3, 3), at(3, 3))] = cr((1.0 - p) / 2.0);
                BipartiteState::new_indefinite(idx, mat)
            }
            Builtin::MaxEnt { d } => Ok(from_pure(&PureState::maximally_entangled(d)?)),
            Builtin::Isotropic { d, w } => {
                let idx = BipartiteIndex::new(d, d)?;
                let phi = from_pure(&PureState::maximally_entangled(d)?);
                let noise = ComplexMatrix::identity(d * d).scale((1.0 - w) / (d * d) as f64);
                BipartiteState::new(idx, &phi.matrix().scale(w) + &noise)
            }
        }
    }
}

/// Builds a builtin state by name; see [`Builtin::from_params`].
pub fn builtin(name: &str, params: &[(&str, f64)]) -> Result<BipartiteState> {
    Builtin::from_params(name, params)?.state()
}

fn sigma_alpha(alpha: f64) -> ComplexMatrix {
    let idx = BipartiteIndex::new(3, 3).expect("3x3");
    let mut mat = ComplexMatrix::zeros(9, 9);
    for i in 0..3 {
        for k in 0..3 {
            mat[(idx.composite(i, i), idx.composite(k, k))] = cr(2.0 / 21.0);
        }
    }
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        mat[(idx.composite(i, j), idx.composite(i, j))] += cr(alpha / 21.0);
    }
    for (i, j) in [(1, 0), (2, 1), (0, 2)] {
        mat[(idx.composite(i, j), idx.composite(i, j))] += cr((5.0 - alpha) / 21.0);
    }
    mat
}

fn quad(d: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..d * d * d * d).map(move |x| (x / (d * d * d), (x / (d * d)) % d, (x / d) % d, x % d))
}

fn range_checked(name: &str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<f64> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::Parameter {
            name: String::from(name),
            value,
            range,
        });
    }
    Ok(value)
}

fn dimension_param(value: f64) -> Result<usize> {
    if libm::trunc(value) != value || !(2.0..=MAX_BUILTIN_D as f64).contains(&value) {
        return Err(Error::Parameter {
            name: String::from("d"),
            value,
            range: "integers in [2, 16]",
        });
    }
    Ok(value as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{min_eigenvalue, partial_transpose_a};

    #[test]
    fn from_pure_examples() {
        let rho = from_pure(&PureState::basis(2, 2, 0, 0).unwrap());
        assert_eq!(rho.matrix(), &ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]));

        let bell = from_pure(&PureState::maximally_entangled(2).unwrap());
        for r in 0..4 {
            for col in 0..4 {
                let want = if [0, 3].contains(&r) && [0, 3].contains(&col) { 0.5 } else { 0.0 };
                assert!((bell.matrix()[(r, col)] - cr(want)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        let c = ComplexMatrix::from_real_diag(&[1.0, 1.0]);
        assert!(matches!(PureState::new(c), Err(Error::Norm { .. })));
    }

    #[test]
    fn rho0_at_p1_is_embedded_psi_plus() {
        let rho = builtin("rho0", &[("p", 1.0)]).unwrap();
        let mut amps = vec![cr(0.0); 16];
        for i in 0..3 {
            amps[5 * i] = cr(1.0 / 3f64.sqrt());
        }
        let want = from_pure(&PureState::from_amplitudes(4, 4, amps).unwrap());
        assert!(rho.matrix().max_abs_diff(want.matrix()) < 1e-15);
    }

    #[test]
    fn sigma_alpha_ppt_regimes() {
        let pt_min = |alpha: f64| {
            let s = builtin("sigma_alpha", &[("alpha", alpha)]).unwrap();
            min_eigenvalue(&partial_transpose_a(s.matrix(), s.index()).unwrap()).unwrap()
        };
        assert!(pt_min(2.5) >= -1e-10);
        assert!(pt_min(4.5) < -1e-6);
    }

    #[test]
    fn rho2_is_hermitian_unit_trace_and_indefinite_as_written() {
        for p in [0.3, 0.6, 1.0] {
            let rho = builtin("rho2", &[("p", p)]).unwrap();
            assert!(!rho.positivity_checked());
            assert!((rho.trace() - 1.0).abs() < 1e-15);
            assert_eq!(rho.matrix().hermitian_deviation(), 0.0);
            let want = p * (1.0 - 2f64.sqrt()) / 6.0;
            assert!((rho.min_eigenvalue().unwrap() - want).abs() < 1e-12);
            assert!(matches!(rho.require_positive(), Err(Error::NotPositive { .. })));
        }
    }

    #[test]
    fn builtin_sweep_is_valid() {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            for name in ["rho0", "rho2"] {
                let rho = builtin(name, &[("p", p)]).unwrap();
                assert!((rho.trace() - 1.0).abs() < 1e-12);
                assert!(rho.matrix().hermitian_deviation() < 1e-15);
            }
            for alpha in [2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0] {
                let rho = builtin("rho1", &[("p", p), ("alpha", alpha)]).unwrap();
                assert!(rho.min_eigenvalue().unwrap() >= -1e-12);
                assert!((rho.trace() - 1.0).abs() < 1e-12);
            }
            let iso = builtin("isotropic", &[("d", 3.0), ("w", p)]).unwrap();
            assert!(iso.min_eigenvalue().unwrap() >= -1e-12);
        }
        for alpha in [2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0] {
            let s = builtin("sigma_alpha", &[("alpha", alpha)]).unwrap();
            assert!(s.min_eigenvalue().unwrap() >= -1e-12);
            assert!((s.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(builtin("rho9", &[]), Err(Error::UnknownState(_))));
        assert!(matches!(builtin("sigma_alpha", &[("alpha", 7.0)]), Err(Error::Parameter { .. })));
        assert!(matches!(builtin("rho0", &[("p", -0.1)]), Err(Error::Parameter { .. })));
        assert!(matches!(builtin("maxent", &[("d", 2.5)]), Err(Error::Parameter { .. })));
        assert!(matches!(builtin("rho0", &[("alpha", 3.0)]), Err(Error::UnknownState(_))));
    }

    #[test]
    fn defaults_apply() {
        assert_eq!(Builtin::from_params("rho1", &[]).unwrap(), Builtin::Rho1 { p: 0.5, alpha: 3.5 });
        assert_eq!(Builtin::from_params("isotropic", &[]).unwrap(), Builtin::Isotropic { d: 3, w: 0.9 });
    }

    #[test]
    fn tensor_copies_basics() {
        let rho = builtin("isotropic", &[("d", 2.0), ("w", 0.7)]).unwrap();
        assert_eq!(tensor_copies(&rho, 1).unwrap(), rho);
        let two = tensor_copies(&rho, 2).unwrap();
        assert_eq!((two.m(), two.n()), (4, 4));
        assert!((two.trace() - rho.trace().powi(2)).abs() < 1e-12);
        assert!(two.min_eigenvalue().unwrap() >= -1e-12);
        assert!(matches!(tensor_copies(&rho, 0), Err(Error::Parameter { .. })));
        let big = builtin("rho0", &[]).unwrap();
        assert!(matches!(tensor_copies(&big, 4), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn tensor_copies_entry_formula() {
        let rho = builtin("rho1", &[("p", 0.8), ("alpha", 4.2)]).unwrap();
        let two = tensor_copies(&rho, 2).unwrap();
        let (b, t) = (rho.index(), two.index());
        let (i, j, k, l) = ([1, 2], [0, 3], [2, 1], [3, 0]);
        let want = rho.matrix()[(b.composite(i[0], j[0]), b.composite(k[0], l[0]))]
            * rho.matrix()[(b.composite(i[1], j[1]), b.composite(k[1], l[1]))];
        let got = two.matrix()[(t.composite(i[0] * 4 + i[1], j[0] * 4 + j[1]), t.composite(k[0] * 4 + k[1], l[0] * 4 + l[1]))];
        assert_eq!(got, want);
    }

    #[test]
    fn validation_errors() {
        let idx = BipartiteIndex::new(2, 2).unwrap();
        let low = ComplexMatrix::identity(4).scale(0.9 / 4.0);
        assert!(matches!(BipartiteState::new(idx, low), Err(Error::Trace { .. })));
        let neg = ComplexMatrix::from_real_diag(&[1.5, -0.5, 0.0, 0.0]);
        assert!(matches!(BipartiteState::new(idx, neg), Err(Error::NotPositive { .. })));
        assert!(matches!(BipartiteState::new(idx, ComplexMatrix::identity(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn swapped_is_an_involution() {
        let rho = builtin("rho1", &[("p", 0.3), ("alpha", 3.7)]).unwrap();
        let s = rho.swapped();
        assert_eq!(s.swapped(), rho);
        let idx = BipartiteIndex::new(2, 3).unwrap();
        let mut mat = ComplexMatrix::zeros(6, 6);
        mat[(idx.composite(1, 2), idx.composite(1, 2))] = cr(1.0);
        let st = BipartiteState::new(idx, mat).unwrap().swapped();
        assert_eq!((st.m(), st.n()), (3, 2));
        assert_eq!(st.matrix()[(st.index().composite(2, 1), st.index().composite(2, 1))], cr(1.0));
    }
}
