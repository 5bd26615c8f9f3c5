//! Lower bounds on the squared concurrence `C²(ρ)` assembled from sub-blocks.
//!
//! Every report stores per-block contributions and a prefactor with
//! `value_sq = prefactor · Σ contributions`:
//!
//! | kind                | contribution per block `b`                 | prefactor             |
//! |---------------------|--------------------------------------------|-----------------------|
//! | `tau22`             | `wootters(b)²`                             | 1                     |
//! | `kappa`             | `(‖b^{T_A}‖ − tr b)²`                      | `2 c_st / (t(t−1))`   |
//! | `zeta`              | `(max(‖b^{T_A}‖, ‖R(b)‖) − tr b)²`         | `2 c_st / (t(t−1))`   |
//! | `chen_global`       | `(max(‖ρ^{T_A}‖, ‖R(ρ)‖) − 1)²`            | `2 / (n(n−1))`        |
//! | `tau_roof_estimate` | `roof(b)²`                                 | `c_st`                |
//! | `combined`          | already weighted                           | 1                     |
//!
//! For `kappa` and `zeta` the `t` in the prefactor is the smaller of the two
//! block sizes; both norms are invariant under exchanging the subsystems, so a
//! caller's `(s, t)` with `t > s` is evaluated as the swapped problem.

use alloc::format;
use alloc::vec::Vec;

use crate::concurrence::{roof_estimate, wootters, RoofOptions};
use crate::error::{Error, Result};
use crate::linalg::{partial_transpose_a, realign, trace_norm, BipartiteIndex, ComplexMatrix};
use crate::par;
use crate::random::derived_seed;
use crate::states::BipartiteState;
use crate::subspace::{c_st, enumerate, project, project_matrix, SubspaceSelector, ZERO_BLOCK_TRACE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    Tau22,
    Kappa,
    Zeta,
    ChenGlobal,
    Combined,
    TauRoofEstimate,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Tau22 => "tau22",
            BoundKind::Kappa => "kappa",
            BoundKind::Zeta => "zeta",
            BoundKind::ChenGlobal => "chen_global",
            BoundKind::Combined => "combined",
            BoundKind::TauRoofEstimate => "tau_roof_estimate",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "tau22" => BoundKind::Tau22,
            "kappa" => BoundKind::Kappa,
            "zeta" => BoundKind::Zeta,
            "chen" | "chen_global" => BoundKind::ChenGlobal,
            "combined" => BoundKind::Combined,
            "tau_roof_estimate" | "roof" => BoundKind::TauRoofEstimate,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockTerm {
    pub selector: SubspaceSelector,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub s: usize,
    pub t: usize,
    /// Lower bound on `C²` (an estimate for `tau_roof_estimate`).
    pub value_sq: f64,
    pub prefactor: f64,
    pub blocks: Vec<BlockTerm>,
    pub certified: bool,
    /// False when some roof optimization hit its sweep limit.
    pub converged: bool,
    /// True when `t > s` and the bound was evaluated with the subsystems exchanged.
    pub swapped: bool,
}

impl BoundReport {
    fn assemble(kind: BoundKind, s: usize, t: usize, prefactor: f64, blocks: Vec<BlockTerm>) -> Self {
        let value_sq = prefactor * blocks.iter().map(|b| b.contribution).sum::<f64>();
        Self {
            kind,
            s,
            t,
            value_sq,
            prefactor,
            blocks,
            certified: kind != BoundKind::TauRoofEstimate,
            converged: true,
            swapped: t > s,
        }
    }

    /// `√value_sq`, the corresponding bound on `C` itself.
    pub fn value(&self) -> f64 {
        libm::sqrt(self.value_sq.max(0.0))
    }
}

/// `max(‖block^{T_A}‖, ‖R(block)‖) − tr(block)`, clamped at 0; the realignment
/// norm only enters when `use_realign` is set.
pub fn primitive_norm_bound(block: &ComplexMatrix, idx: BipartiteIndex, use_realign: bool) -> Result<f64> {
    idx.check(block)?;
    let tr = block.trace().re;
    if tr < ZERO_BLOCK_TRACE {
        return Ok(0.0);
    }
    let mut norm = trace_norm(&partial_transpose_a(block, idx)?)?;
    if use_realign {
        norm = norm.max(trace_norm(&realign(block, idx)?)?);
    }
    Ok((norm - tr).max(0.0))
}

fn norm_bound(rho: &BipartiteState, s: usize, t: usize, use_realign: bool) -> Result<BoundReport> {
    let coeff = c_st(rho.m(), rho.n(), s, t)?;
    let small = s.min(t) as f64;
    let prefactor = 2.0 * coeff.value() / (small * (small - 1.0));
    let selectors = enumerate(rho.m(), rho.n(), s, t)?;
    let terms = par::map_slice(&selectors, |_, sel| -> Result<BlockTerm> {
        let block = project_matrix(rho.matrix(), rho.index(), sel)?;
        let g = primitive_norm_bound(&block, sel.block_index(), use_realign)?;
        Ok(BlockTerm {
            selector: sel.clone(),
            contribution: g * g,
        })
    });
    let kind = if use_realign { BoundKind::Zeta } else { BoundKind::Kappa };
    Ok(BoundReport::assemble(kind, s, t, prefactor, terms.into_iter().collect::<Result<_>>()?))
}

/// Partial-transpose bound `κ_{s⊗t}`.
pub fn kappa(rho: &BipartiteState, s: usize, t: usize) -> Result<BoundReport> {
    norm_bound(rho, s, t, false)
}

/// Partial-transpose-or-realignment bound `ζ_{s⊗t}`.
pub fn zeta(rho: &BipartiteState, s: usize, t: usize) -> Result<BoundReport> {
    norm_bound(rho, s, t, true)
}

/// `τ_{2⊗2} = Σ_blocks C²(b)` with each 2⊗2 block's concurrence from Wootters' formula.
pub fn tau22(rho: &BipartiteState) -> Result<BoundReport> {
    let selectors = enumerate(rho.m(), rho.n(), 2, 2)?;
    let terms = par::map_slice(&selectors, |_, sel| -> Result<BlockTerm> {
        let block = project_matrix(rho.matrix(), rho.index(), sel)?;
        let conc = if block.trace().re < ZERO_BLOCK_TRACE { 0.0 } else { wootters(&block)? };
        Ok(BlockTerm {
            selector: sel.clone(),
            contribution: conc * conc,
        })
    });
    Ok(BoundReport::assemble(BoundKind::Tau22, 2, 2, 1.0, terms.into_iter().collect::<Result<_>>()?))
}

/// Whole-state bound `C² ≥ 2/(n(n−1)) · (max(‖ρ^{T_A}‖, ‖R(ρ)‖) − 1)²`, with
/// `n` the smaller local dimension.
pub fn chen_global(rho: &BipartiteState) -> Result<BoundReport> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > crate::states::TRACE_TOL {
        return Err(Error::Trace {
            trace: tr,
            expected: "unit-trace",
        });
    }
    let small = rho.m().min(rho.n()) as f64;
    let g = primitive_norm_bound(rho.matrix(), rho.index(), true)?;
    let full = SubspaceSelector::full(rho.m(), rho.n())?;
    let blocks = alloc::vec![BlockTerm {
        selector: full,
        contribution: g * g,
    }];
    let mut report = BoundReport::assemble(BoundKind::ChenGlobal, rho.m(), rho.n(), 2.0 / (small * (small - 1.0)), blocks);
    report.swapped = false;
    Ok(report)
}

/// `c_st · Σ_blocks roof(b)²` from the numerical roof estimator. Not a
/// certified bound: the roof values are upper estimates of each block's
/// concurrence.
pub fn tau_roof_estimate(rho: &BipartiteState, s: usize, t: usize, opts: &RoofOptions) -> Result<BoundReport> {
    let coeff = c_st(rho.m(), rho.n(), s, t)?;
    let selectors = enumerate(rho.m(), rho.n(), s, t)?;
    let terms = par::map_slice(&selectors, |i, sel| -> Result<(BlockTerm, bool)> {
        let block = project(rho, sel)?;
        if block.trace() < ZERO_BLOCK_TRACE {
            return Ok((
                BlockTerm {
                    selector: sel.clone(),
                    contribution: 0.0,
                },
                true,
            ));
        }
        let block_opts = RoofOptions {
            seed: derived_seed(opts.seed, i as u64),
            ..*opts
        };
        let res = roof_estimate(&block, &block_opts)?;
        Ok((
            BlockTerm {
                selector: sel.clone(),
                contribution: res.value * res.value,
            },
            res.converged,
        ))
    });
    let mut blocks = Vec::with_capacity(terms.len());
    let mut converged = true;
    for term in terms {
        let (b, ok) = term?;
        converged &= ok;
        blocks.push(b);
    }
    let mut report = BoundReport::assemble(BoundKind::TauRoofEstimate, s, t, coeff.value(), blocks);
    report.converged = converged;
    Ok(report)
}

/// Weight of one `(s, t)` pair.
pub type SubspaceWeight = ((usize, usize), f64);
/// Weight of one inner bound family.
pub type InnerWeight = (BoundKind, f64);

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Uniform weights over every `(s, t)` with `2 ≤ s ≤ m`, `2 ≤ t ≤ n`.
pub fn default_weights(m: usize, n: usize) -> Vec<SubspaceWeight> {
    let count = ((m - 1) * (n - 1)) as f64;
    (2..=m)
        .flat_map(|s| (2..=n).map(move |t| ((s, t), 1.0 / count)))
        .collect()
}

/// Equal weights on `kappa` and `zeta`.
pub fn default_inner() -> Vec<InnerWeight> {
    alloc::vec![(BoundKind::Kappa, 0.5), (BoundKind::Zeta, 0.5)]
}

fn check_weights<K: PartialEq + core::fmt::Debug>(what: &str, weights: &[(K, f64)]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::Weights(format!("no {what} weights given")));
    }
    for (i, (key, w)) in weights.iter().enumerate() {
        if !(w.is_finite() && *w >= 0.0 && *w <= 1.0) {
            return Err(Error::Weights(format!("{what} weight {w} for {key:?} is outside [0, 1]")));
        }
        if weights[..i].iter().any(|(k, _)| k == key) {
            return Err(Error::Weights(format!("{what} weight for {key:?} given twice")));
        }
    }
    let sum: f64 = weights.iter().map(|(_, w)| w).sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::Weights(format!("{what} weights sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Convex combination `Σ_st Σ_i p_st q_i · (bound_i at (s, t))` of the
/// block-wise bounds, each inner family contributing
/// `(tr b)² g_i²(b / tr b)` per block with its own prefactor folded into `g_i`.
///
/// Inner families may be `kappa`, `zeta`, `tau_roof_estimate` (uses `roof`),
/// and `tau22` (only with weight on `(2, 2)`). The result is certified unless
/// a roof estimate carries positive weight.
pub fn combined(
    rho: &BipartiteState,
    weights: &[SubspaceWeight],
    inner: &[InnerWeight],
    roof: &RoofOptions,
) -> Result<BoundReport> {
    check_weights("subspace", weights)?;
    check_weights("inner", inner)?;
    for &((s, t), _) in weights {
        c_st(rho.m(), rho.n(), s, t)?;
    }
    let mut blocks = Vec::new();
    let mut certified = true;
    let mut converged = true;
    for &((s, t), p) in weights.iter().filter(|(_, p)| *p > 0.0) {
        for &(kind, q) in inner.iter().filter(|(_, q)| *q > 0.0) {
            let report = match kind {
                BoundKind::Kappa => kappa(rho, s, t)?,
                BoundKind::Zeta => zeta(rho, s, t)?,
                BoundKind::Tau22 if (s, t) == (2, 2) => tau22(rho)?,
                BoundKind::Tau22 => {
                    return Err(Error::Weights(format!(
                        "tau22 is only defined on 2⊗2 blocks, but (s, t) = ({s}, {t}) has weight {p}"
                    )))
                }
                BoundKind::TauRoofEstimate => tau_roof_estimate(rho, s, t, roof)?,
                BoundKind::ChenGlobal | BoundKind::Combined => {
                    return Err(Error::Weights(format!("{} cannot be an inner bound", kind.name())))
                }
            };
            certified &= report.certified;
            converged &= report.converged;
            let w = p * q * report.prefactor;
            blocks.extend(report.blocks.into_iter().map(|b| BlockTerm {
                selector: b.selector,
                contribution: w * b.contribution,
            }));
        }
    }
    let (s, t) = (rho.m(), rho.n());
    let mut report = BoundReport::assemble(BoundKind::Combined, s, t, 1.0, blocks);
    report.certified = certified;
    report.converged = converged;
    report.swapped = false;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use crate::states::{builtin, from_pure, PureState};

    #[test]
    fn primitive_on_scaled_maximally_entangled() {
        // ‖(|ψ⁺₃⟩⟨ψ⁺₃|)^{T_A}‖ = 3, so a block p|ψ⁺₃⟩⟨ψ⁺₃| gives 3p − p.
        let p = 0.7;
        let psi = from_pure(&PureState::maximally_entangled(3).unwrap());
        let block = psi.matrix().scale(p);
        let idx = psi.index();
        assert!((primitive_norm_bound(&block, idx, false).unwrap() - 2.0 * p).abs() < 1e-12);
        assert!((primitive_norm_bound(&block, idx, true).unwrap() - 2.0 * p).abs() < 1e-12);
    }

    #[test]
    fn primitive_zero_cases() {
        let idx = BipartiteIndex::new(2, 3).unwrap();
        assert_eq!(primitive_norm_bound(&ComplexMatrix::zeros(6, 6), idx, true).unwrap(), 0.0);
        let prod = from_pure(&PureState::basis(2, 3, 1, 2).unwrap());
        assert!(primitive_norm_bound(prod.matrix(), idx, true).unwrap() < 1e-12);
    }

    #[test]
    fn kappa_rho2_example() {
        for p in [0.3, 0.7, 1.0] {
            let rho = builtin("rho2", &[("p", p)]).unwrap();
            let k = kappa(&rho, 3, 3).unwrap();
            assert!((k.value_sq - p * p / 54.0).abs() <= 1e-9 * p * p);
            assert!(k.certified);
            assert_eq!(k.blocks.len(), 16);
        }
    }

    #[test]
    fn tau22_of_two_qubit_state_is_wootters_squared() {
        let rho = builtin("isotropic", &[("d", 2.0), ("w", 0.8)]).unwrap();
        let c = wootters(rho.matrix()).unwrap();
        assert!((tau22(&rho).unwrap().value_sq - c * c).abs() < 1e-12);
    }

    #[test]
    fn swapped_orientation_matches_explicit_swap() {
        let rho = builtin("rho1", &[("p", 0.9), ("alpha", 4.5)]).unwrap();
        let a = zeta(&rho, 2, 3).unwrap();
        let b = zeta(&rho.swapped(), 3, 2).unwrap();
        assert!(a.swapped && !b.swapped);
        assert!((a.value_sq - b.value_sq).abs() < 1e-12);
        assert!((a.prefactor - 2.0 * 0.5 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_full_equals_chen_global() {
        let rho = builtin("rho0", &[("p", 0.5)]).unwrap();
        let z = zeta(&rho, 4, 4).unwrap();
        let c = chen_global(&rho).unwrap();
        assert!((z.value_sq - c.value_sq).abs() < 1e-12);
    }

    #[test]
    fn chen_global_of_maximally_entangled() {
        for d in 2..=4 {
            let rho = builtin("maxent", &[("d", d as f64)]).unwrap();
            let want = 2.0 * (d as f64 - 1.0) / d as f64;
            assert!((chen_global(&rho).unwrap().value_sq - want).abs() < 1e-10);
        }
    }

    #[test]
    fn chen_global_needs_unit_trace() {
        let rho = builtin("rho0", &[]).unwrap().scaled(0.5).unwrap();
        assert!(matches!(chen_global(&rho), Err(Error::Trace { .. })));
    }

    #[test]
    fn bounds_vanish_on_products() {
        let idx = BipartiteIndex::new(3, 3).unwrap();
        let mut mat = ComplexMatrix::zeros(9, 9);
        mat[(4, 4)] = cr(0.5);
        mat[(0, 0)] = cr(0.5);
        let rho = BipartiteState::new(idx, mat).unwrap();
        assert!(kappa(&rho, 3, 2).unwrap().value_sq < 1e-20);
        assert!(zeta(&rho, 2, 2).unwrap().value_sq < 1e-20);
        assert!(chen_global(&rho).unwrap().value_sq < 1e-20);
    }

    #[test]
    fn combined_degenerates_to_single_bounds() {
        let rho = builtin("rho1", &[("p", 0.8), ("alpha", 4.6)]).unwrap();
        let roof = RoofOptions::default();
        let c = combined(&rho, &[((2, 2), 1.0)], &[(BoundKind::Tau22, 1.0)], &roof).unwrap();
        assert!((c.value_sq - tau22(&rho).unwrap().value_sq).abs() < 1e-12);
        let c = combined(&rho, &[((3, 3), 1.0)], &[(BoundKind::Zeta, 1.0)], &roof).unwrap();
        assert!((c.value_sq - zeta(&rho, 3, 3).unwrap().value_sq).abs() < 1e-12);
        assert!(c.certified);
    }

    #[test]
    fn combined_on_rho2_halves_zeta33() {
        let rho = builtin("rho2", &[("p", 0.6)]).unwrap();
        let c = combined(&rho, &[((2, 2), 0.5), ((3, 3), 0.5)], &[(BoundKind::Zeta, 1.0)], &RoofOptions::default()).unwrap();
        let z33 = zeta(&rho, 3, 3).unwrap().value_sq;
        assert!((c.value_sq - 0.5 * z33).abs() < 1e-12);
    }

    #[test]
    fn combined_weight_errors() {
        let rho = builtin("rho0", &[]).unwrap();
        let roof = RoofOptions::default();
        let inner = default_inner();
        assert!(matches!(combined(&rho, &[((2, 2), 0.5)], &inner, &roof), Err(Error::Weights(_))));
        assert!(matches!(
            combined(&rho, &[((2, 2), 0.5), ((2, 2), 0.5)], &inner, &roof),
            Err(Error::Weights(_))
        ));
        assert!(matches!(
            combined(&rho, &[((3, 3), 1.0)], &[(BoundKind::Tau22, 1.0)], &roof),
            Err(Error::Weights(_))
        ));
        assert!(combined(&rho, &[((5, 3), 1.0)], &inner, &roof).is_err());
    }

    #[test]
    fn default_weights_are_uniform() {
        let w = default_weights(4, 3);
        assert_eq!(w.len(), 6);
        assert!((w.iter().map(|x| x.1).sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
