//! Translation-symmetry block diagonalization on a periodic ring.
//!
//! Basis states are `level * 2^N + bits`, where `bits` holds one spin per site
//! and `level` is any label untouched by translation (a boson occupation).
//! Momentum blocks are built from orbit representatives; the blocks for k and
//! −k of a real Hamiltonian are complex conjugates and share a spectrum, so
//! only 0 ≤ k ≤ π is diagonalized and the interior momenta count twice.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A real Hamiltonian on a translation-invariant ring.
pub(crate) trait RingHamiltonian: Sync {
    fn sites(&self) -> usize;
    fn dim(&self) -> usize;
    /// Push `(target, amplitude)` for every term of `H|state⟩`.
    fn apply(&self, state: usize, out: &mut Vec<(usize, f64)>);
    /// Conserved label commuting with translation, 0 if none.
    fn sector(&self, _state: usize) -> u8 {
        0
    }
}

/// Shift every spin one site along the ring.
pub(crate) fn translate(state: usize, sites: usize) -> usize {
    let mask = (1usize << sites) - 1;
    let bits = state & mask;
    let rotated = ((bits << 1) | (bits >> (sites - 1))) & mask;
    (state & !mask) | rotated
}

/// Orbit representative (smallest member), orbit period and the number of
/// translations `ℓ` with `state = T^ℓ rep`.
fn orbit(state: usize, sites: usize) -> (usize, usize, usize) {
    let mut rep = state;
    let mut to_rep = 0;
    let mut period = sites;
    let mut s = state;
    for j in 1..=sites {
        s = translate(s, sites);
        if s == state {
            period = j;
            break;
        }
        if s < rep {
            rep = s;
            to_rep = j;
        }
    }
    (rep, period, (sites - to_rep) % sites)
}

pub(crate) struct Block {
    pub momentum: usize,
    pub reps: Vec<usize>,
    pub periods: Vec<usize>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn is_real(&self, sites: usize) -> bool {
        self.momentum == 0 || 2 * self.momentum == sites
    }

    /// Multiplicity from ±k pairing.
    pub fn weight(&self, sites: usize) -> f64 {
        if self.is_real(sites) {
            1.0
        } else {
            2.0
        }
    }
}

/// All blocks with momentum index 0..=N/2, non-empty only.
pub(crate) fn blocks<H: RingHamiltonian>(h: &H) -> Vec<Block> {
    let n = h.sites();
    let mut reps: Vec<(usize, usize, u8)> = Vec::new();
    for state in 0..h.dim() {
        let (rep, period, _) = orbit(state, n);
        if rep == state {
            reps.push((state, period, h.sector(state)));
        }
    }
    let mut sectors: Vec<u8> = reps.iter().map(|r| r.2).collect();
    sectors.sort_unstable();
    sectors.dedup();

    let mut out = Vec::new();
    for m in 0..=n / 2 {
        for &label in &sectors {
            let (r, p): (Vec<usize>, Vec<usize>) = reps
                .iter()
                .filter(|&&(_, period, s)| s == label && (m * period) % n == 0)
                .map(|&(rep, period, _)| (rep, period))
                .unzip();
            if !r.is_empty() {
                out.push(Block {
                    momentum: m,
                    reps: r,
                    periods: p,
                });
            }
        }
    }
    out
}

/// Bytes held at once while diagonalizing the largest block.
pub(crate) fn block_bytes(blocks: &[Block], sites: usize, vectors: bool) -> u64 {
    blocks
        .iter()
        .map(|b| {
            let d = b.dim() as u64;
            let elem = if b.is_real(sites) { 8 } else { 16 };
            let copies = if vectors { 3 } else { 2 };
            d * d * elem * copies
        })
        .max()
        .unwrap_or(0)
}

fn block_matrix<H: RingHamiltonian>(h: &H, block: &Block) -> DMatrix<Complex64> {
    let n = h.sites();
    let d = block.dim();
    let k = 2.0 * PI * block.momentum as f64 / n as f64;
    let index: HashMap<usize, usize> = block.reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    let mut terms = Vec::new();
    for (col, &rep) in block.reps.iter().enumerate() {
        terms.clear();
        h.apply(rep, &mut terms);
        let r_col = block.periods[col] as f64;
        for &(target, amp) in &terms {
            let (rep_t, _, shift) = orbit(target, n);
            let Some(&row) = index.get(&rep_t) else {
                continue;
            };
            let ratio = (r_col / block.periods[row] as f64).sqrt();
            m[(row, col)] += Complex64::from_polar(amp * ratio, k * shift as f64);
        }
    }
    m
}

/// Eigenvalues of one block, with the expectation of a diagonal observable in
/// each eigenvector when `observable` is given.
pub(crate) fn solve_block<H: RingHamiltonian>(
    h: &H,
    block: &Block,
    observable: Option<&dyn Fn(usize) -> f64>,
) -> Result<Vec<(f64, f64)>> {
    let m = block_matrix(h, block);
    let diag: Option<Vec<f64>> = observable.map(|f| block.reps.iter().map(|&r| f(r)).collect());
    if block.is_real(h.sites()) {
        let real = m.map(|z| z.re);
        match diag {
            None => Ok(real.symmetric_eigenvalues().iter().map(|&e| (e, 0.0)).collect()),
            Some(diag) => {
                let eig = SymmetricEigen::try_new(real, f64::EPSILON, 0)
                    .ok_or_else(|| Error::Eigensolver("real block did not converge".into()))?;
                Ok(pair_with_expectation(eig.eigenvalues.as_slice(), &diag, |i, r| {
                    eig.eigenvectors[(r, i)].powi(2)
                }))
            }
        }
    } else {
        match diag {
            None => Ok(m.symmetric_eigenvalues().iter().map(|&e| (e, 0.0)).collect()),
            Some(diag) => {
                let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0)
                    .ok_or_else(|| Error::Eigensolver("complex block did not converge".into()))?;
                Ok(pair_with_expectation(eig.eigenvalues.as_slice(), &diag, |i, r| {
                    eig.eigenvectors[(r, i)].norm_sqr()
                }))
            }
        }
    }
}

fn pair_with_expectation<F>(values: &[f64], diag: &[f64], prob: F) -> Vec<(f64, f64)>
where
    F: Fn(usize, usize) -> f64,
{
    values
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, diag.iter().enumerate().map(|(r, &o)| prob(i, r) * o).sum()))
        .collect()
}

/// Dense matrix of `h` in the full computational basis.
pub(crate) fn dense<H: RingHamiltonian>(h: &H) -> DMatrix<f64> {
    let d = h.dim();
    let mut m = DMatrix::<f64>::zeros(d, d);
    let mut terms = Vec::new();
    for col in 0..d {
        terms.clear();
        h.apply(col, &mut terms);
        for &(row, amp) in &terms {
            m[(row, col)] += amp;
        }
    }
    m
}
