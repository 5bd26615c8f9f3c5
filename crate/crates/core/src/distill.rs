//! Sufficient conditions for distillability.
//!
//! * `theorem3`: some 2⊗3 (or 3⊗2) coordinate block of `ρ^{⊗N}` has a
//!   non-positive partial transpose. Such a block is entangled, and every
//!   entangled 2⊗3 state is distillable.
//! * `tau22_ou`: `τ_{2⊗2}(ρ^{⊗N}) > 0` for some `N`. Any entangled 2⊗2 block
//!   sits inside a 2⊗3 block, so this never fires without `theorem3`.
//! * `reduction`: `ρ_A ⊗ I − ρ` or `I ⊗ ρ_B − ρ` has a negative eigenvalue.
//!
//! None of them certifies non-distillability; the verdict is `Yes` or `Unknown`.

use crate::bounds::tau22;
use crate::error::{Error, Result};
use crate::linalg::{self, kron, partial_trace, partial_transpose_a, ComplexMatrix, Side};
use crate::par;
use crate::random::{derived_seed, haar_unitary, seeded};
use crate::states::{tensor_copies, BipartiteState};
use crate::subspace::{enumerate, project_matrix, SubspaceSelector, ZERO_BLOCK_TRACE};

/// Relative threshold for calling a block NPT: `λ_min(b^{T_A}) < −NPT_TOL · tr b`.
pub const NPT_TOL: f64 = 1e-9;
/// Absolute eigenvalue threshold of the reduction criterion.
pub const REDUCTION_TOL: f64 = 1e-9;
/// `τ_{2⊗2}` above this counts as positive.
pub const TAU22_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// Two A-side indices, three B-side indices.
    TwoByThree,
    ThreeByTwo,
}

impl Orientation {
    pub fn label(&self) -> &'static str {
        match self {
            Orientation::TwoByThree => "2x3",
            Orientation::ThreeByTwo => "3x2",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Number of copies `N`.
    pub copies: usize,
    pub selector: SubspaceSelector,
    pub orientation: Orientation,
    /// Smallest eigenvalue of the block's partial transpose.
    pub min_pt_eigenvalue: f64,
    /// Index of the random local rotation the witness was found under, if any.
    pub rotation: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distillable {
    Yes,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistillVerdict {
    pub distillable: Distillable,
    pub witness: Option<Witness>,
    pub theorem3: bool,
    /// Smallest copy number at which `τ_{2⊗2}(ρ^{⊗N}) > 0`.
    pub tau22_ou: Option<usize>,
    pub reduction: bool,
    pub reduction_min_eigenvalue: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_copies: usize,
    pub rotations: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_copies: 2,
            rotations: 0,
            seed: 0,
        }
    }
}

/// NPT test on a (possibly unnormalized) block; returns the decision and
/// the smallest eigenvalue of the partial transpose.
pub fn is_npt(rho: &BipartiteState, tol: f64) -> Result<(bool, f64)> {
    npt_matrix(rho.matrix(), rho.index(), tol)
}

fn npt_matrix(mat: &ComplexMatrix, idx: linalg::BipartiteIndex, tol: f64) -> Result<(bool, f64)> {
    let tr = mat.trace().re;
    let min = linalg::min_eigenvalue(&partial_transpose_a(mat, idx)?)?;
    if tr < ZERO_BLOCK_TRACE {
        return Ok((false, min));
    }
    Ok((min < -tol * tr, min))
}

/// Reduction criterion; returns whether it is violated and the smallest
/// eigenvalue over both reduction operators.
pub fn reduction_violated(rho: &BipartiteState) -> Result<(bool, f64)> {
    let idx = rho.index();
    let rho_a = partial_trace(rho.matrix(), idx, Side::B)?;
    let rho_b = partial_trace(rho.matrix(), idx, Side::A)?;
    let left = &kron(&rho_a, &ComplexMatrix::identity(idx.n()))? - rho.matrix();
    let right = &kron(&ComplexMatrix::identity(idx.m()), &rho_b)? - rho.matrix();
    let min = linalg::min_eigenvalue(&left)?.min(linalg::min_eigenvalue(&right)?);
    Ok((min < -REDUCTION_TOL, min))
}

fn check_degenerate(rho: &BipartiteState) -> Result<()> {
    if rho.trace() < ZERO_BLOCK_TRACE {
        return Err(Error::Trace {
            trace: rho.trace(),
            expected: "non-degenerate (≥ 1e-14)",
        });
    }
    Ok(())
}

/// First NPT 2⊗3 / 3⊗2 block of `ρ^{⊗N}`, scanning `N = 1..=max_copies`,
/// 2⊗3 before 3⊗2, selectors in lexicographic order. A side of dimension
/// below 3 contributes all of its indices.
///
/// With `rotations > 0` the same scan is repeated on `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`
/// for that many seeded Haar-random local unitaries when the unrotated scan
/// finds nothing.
pub fn theorem3_witness(rho: &BipartiteState, opts: &SearchOptions) -> Result<Option<Witness>> {
    check_degenerate(rho)?;
    if let Some(w) = scan_copies(rho, opts.max_copies, None)? {
        return Ok(Some(w));
    }
    for r in 0..opts.rotations {
        let mut rng = seeded(derived_seed(opts.seed, r as u64));
        let ua = haar_unitary(rho.m(), &mut rng);
        let ub = haar_unitary(rho.n(), &mut rng);
        let rotated = rho.local_unitary(&ua, &ub)?;
        if let Some(w) = scan_copies(&rotated, opts.max_copies, Some(r))? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn scan_copies(rho: &BipartiteState, max_copies: usize, rotation: Option<usize>) -> Result<Option<Witness>> {
    if max_copies == 0 {
        return Err(Error::Parameter {
            name: "copies".into(),
            value: 0.0,
            range: "[1, ∞)",
        });
    }
    for copies in 1..=max_copies {
        let state = tensor_copies(rho, copies)?;
        for orientation in [Orientation::TwoByThree, Orientation::ThreeByTwo] {
            let (s, t) = match orientation {
                Orientation::TwoByThree => (2, state.n().min(3)),
                Orientation::ThreeByTwo => (state.m().min(3), 2),
            };
            let selectors = enumerate(state.m(), state.n(), s, t)?;
            if let Some((selector, min)) = first_npt(&state, &selectors)? {
                return Ok(Some(Witness {
                    copies,
                    selector,
                    orientation,
                    min_pt_eigenvalue: min,
                    rotation,
                }));
            }
        }
    }
    Ok(None)
}

fn first_npt(state: &BipartiteState, selectors: &[SubspaceSelector]) -> Result<Option<(SubspaceSelector, f64)>> {
    const CHUNK: usize = 512;
    for chunk in selectors.chunks(CHUNK) {
        let results = par::map_slice(chunk, |_, sel| -> Result<(bool, f64)> {
            let block = project_matrix(state.matrix(), state.index(), sel)?;
            npt_matrix(&block, sel.block_index(), NPT_TOL)
        });
        for (sel, res) in chunk.iter().zip(results) {
            let (npt, min) = res?;
            if npt {
                return Ok(Some((sel.clone(), min)));
            }
        }
    }
    Ok(None)
}

/// Smallest `N ≤ max_copies` with `τ_{2⊗2}(ρ^{⊗N}) > 0`, if any.
pub fn ou_criterion(rho: &BipartiteState, max_copies: usize) -> Result<Option<usize>> {
    check_degenerate(rho)?;
    for copies in 1..=max_copies {
        let state = tensor_copies(rho, copies)?;
        if tau22(&state)?.value_sq > TAU22_TOL {
            return Ok(Some(copies));
        }
    }
    Ok(None)
}

/// Runs all three criteria.
pub fn verdict(rho: &BipartiteState, opts: &SearchOptions) -> Result<DistillVerdict> {
    let witness = theorem3_witness(rho, opts)?;
    let tau22_ou = ou_criterion(rho, opts.max_copies)?;
    let (reduction, reduction_min_eigenvalue) = reduction_violated(rho)?;
    let theorem3 = witness.is_some();
    let distillable = if theorem3 || tau22_ou.is_some() || reduction {
        Distillable::Yes
    } else {
        Distillable::Unknown
    };
    Ok(DistillVerdict {
        distillable,
        witness,
        theorem3,
        tau22_ou,
        reduction,
        reduction_min_eigenvalue,
    })
}

/// Smallest partial-transpose eigenvalue over every 2⊗2 block.
pub fn min_pt_eigenvalue_2x2(rho: &BipartiteState) -> Result<f64> {
    let selectors = enumerate(rho.m(), rho.n(), 2, 2)?;
    let mins = par::map_slice(&selectors, |_, sel| -> Result<f64> {
        let block = project_matrix(rho.matrix(), rho.index(), sel)?;
        linalg::min_eigenvalue(&partial_transpose_a(&block, sel.block_index())?)
    });
    mins.into_iter().try_fold(f64::INFINITY, |acc, m| Ok(acc.min(m?)))
}
