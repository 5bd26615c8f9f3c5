//! `s ⊗ t` sub-blocks: index-subset selectors, their enumeration, the
//! projection `ρ ↦ (A ⊗ B) ρ (A ⊗ B)†` onto coordinate subspaces, and the
//! combinatorial weight `c_st`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{BipartiteIndex, ComplexMatrix};
use crate::states::BipartiteState;

/// Blocks with smaller trace are treated as zero blocks.
pub const ZERO_BLOCK_TRACE: f64 = 1e-14;

/// Strictly increasing index subsets of the A side (`rows`) and B side (`cols`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubspaceSelector {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl SubspaceSelector {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        for (side, set) in [("A", &rows), ("B", &cols)] {
            if set.len() < 2 {
                return Err(Error::Selector(format!("{side}-side subset {set:?} has fewer than 2 indices")));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Selector(format!("{side}-side subset {set:?} is not strictly increasing")));
            }
        }
        Ok(Self { rows, cols })
    }

    /// Selector covering the whole `m ⊗ n` space.
    pub fn full(m: usize, n: usize) -> Result<Self> {
        Self::new((0..m).collect(), (0..n).collect())
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn s(&self) -> usize {
        self.rows.len()
    }

    pub fn t(&self) -> usize {
        self.cols.len()
    }

    /// Index space of the projected block.
    pub fn block_index(&self) -> BipartiteIndex {
        BipartiteIndex::new(self.s(), self.t()).expect("selector sizes are at least 2")
    }

    pub fn check(&self, idx: BipartiteIndex) -> Result<()> {
        let last = |v: &[usize]| v.last().copied().unwrap_or(0);
        if last(&self.rows) >= idx.m() || last(&self.cols) >= idx.n() {
            return Err(Error::Selector(format!(
                "selector {:?}x{:?} does not fit {}⊗{}",
                self.rows,
                self.cols,
                idx.m(),
                idx.n()
            )));
        }
        Ok(())
    }

    /// Composite indices of the block in the parent space, in block order.
    pub fn composite_indices(&self, idx: BipartiteIndex) -> Vec<usize> {
        self.rows
            .iter()
            .flat_map(|&i| self.cols.iter().map(move |&j| idx.composite(i, j)))
            .collect()
    }
}

/// Lexicographic `k`-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if next[pos] < self.n - k + pos {
                next[pos] += 1;
                for q in pos + 1..k {
                    next[q] = next[q - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn check_bounds(m: usize, n: usize, s: usize, t: usize) -> Result<()> {
    if m < 2 || n < 2 || !(2..=m).contains(&s) || !(2..=n).contains(&t) {
        return Err(Error::Selector(format!(
            "need 2 <= s <= m and 2 <= t <= n, got s={s}, t={t} for {m}⊗{n}"
        )));
    }
    Ok(())
}

/// All `C(m,s) · C(n,t)` selectors, rows outermost, each side lexicographic.
pub fn enumerate(m: usize, n: usize, s: usize, t: usize) -> Result<Vec<SubspaceSelector>> {
    check_bounds(m, n, s, t)?;
    let col_sets: Vec<Vec<usize>> = Combinations::new(n, t).collect();
    Ok(Combinations::new(m, s)
        .flat_map(|rows| {
            col_sets.iter().map(move |cols| SubspaceSelector {
                rows: rows.clone(),
                cols: cols.clone(),
            })
        })
        .collect())
}

/// The `st × st` principal submatrix of `mat` picked out by `sel`.
pub fn project_matrix(mat: &ComplexMatrix, idx: BipartiteIndex, sel: &SubspaceSelector) -> Result<ComplexMatrix> {
    idx.check(mat)?;
    sel.check(idx)?;
    Ok(mat.principal_submatrix(&sel.composite_indices(idx)))
}

/// Unnormalized `s ⊗ t` block of `rho`.
pub fn project(rho: &BipartiteState, sel: &SubspaceSelector) -> Result<BipartiteState> {
    let mat = project_matrix(rho.matrix(), rho.index(), sel)?;
    let full = sel.s() == rho.m() && sel.t() == rho.n();
    Ok(BipartiteState::from_parts(
        sel.block_index(),
        mat,
        full && rho.is_normalized(),
        rho.positivity_checked(),
    ))
}

/// Exact rational `c_st = 1 / [C(m−2, s−2) · C(n−2, t−2)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub numerator: u64,
    pub denominator: u64,
}

impl Coefficient {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

pub fn c_st(m: usize, n: usize, s: usize, t: usize) -> Result<Coefficient> {
    check_bounds(m, n, s, t)?;
    Ok(Coefficient {
        numerator: 1,
        denominator: binomial(m - 2, s - 2) * binomial(n - 2, t - 2),
    })
}
