//! The tangent map `dφ₁ : 𝔤 → Q` of the implicit representation mapping at
//! the identity, its image and its kernel (the symmetry algebra of the
//! elementary surface).
//!
//! With `φ(g)` represented by the matrix `g⁻ᵀ M g⁻¹` and
//! `d/dt γ(t)⁻¹ |₀ = −γ'(0)`, the derivative along any curve through the
//! identity with velocity `γ` is `−(M γ + γᵀ M)`.

use num_traits::Zero;

use crate::exact::{Mat4, Rational, Ring};
use crate::group::AlgebraElement;
use crate::quadric::Quadric;

pub(crate) fn dphi1_matrix<T: Ring>(m: &Mat4<T>, gamma: &Mat4<T>) -> Mat4<T> {
    m.mul(gamma).add(&gamma.transpose().mul(m)).neg()
}

/// `dφ₁(γ)` for the elementary quadric `qbar`. May be the zero quadric.
pub fn dphi1(qbar: &Quadric, gamma: &AlgebraElement) -> Quadric {
    Quadric::from_matrix_or_zero(dphi1_matrix(qbar.matrix(), gamma.matrix()))
}

/// Reduced row echelon form in place; returns pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Linearly independent spanning set of `dφ₁(span(gens))` and its rank.
/// The basis is the reduced row echelon form of the image vectors, so it
/// is canonical for a given span.
pub fn image_basis(qbar: &Quadric, gens: &[AlgebraElement]) -> (Vec<Quadric>, usize) {
    let mut rows: Vec<Vec<Rational>> = gens
        .iter()
        .map(|g| dphi1(qbar, g).coeffs().to_vec())
        .collect();
    rref(&mut rows);
    let basis: Vec<Quadric> = rows
        .into_iter()
        .map(|r| Quadric::from_coeffs_or_zero(std::array::from_fn(|k| r[k].clone())))
        .collect();
    let rank = basis.len();
    (basis, rank)
}

/// Basis of `{γ ∈ span(gens) : dφ₁(γ) = 0}`.
pub fn stabilizer_kernel(qbar: &Quadric, gens: &[AlgebraElement]) -> Vec<AlgebraElement> {
    stabilizer_kernel_coeffs(qbar, gens)
        .iter()
        .map(|c| AlgebraElement::combination(c, gens))
        .collect()
}

/// Kernel basis as coefficient vectors over `gens`, one free generator
/// per vector.
pub fn stabilizer_kernel_coeffs(qbar: &Quadric, gens: &[AlgebraElement]) -> Vec<Vec<Rational>> {
    let n = gens.len();
    let images: Vec<[Rational; 10]> = gens.iter().map(|g| dphi1(qbar, g).coeffs()).collect();
    // 10 × n system: column j is the image of gens[j].
    let mut rows: Vec<Vec<Rational>> = (0..10)
        .map(|k| images.iter().map(|im| im[k].clone()).collect())
        .collect();
    let pivots = rref(&mut rows);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut coeffs = vec![Rational::zero(); n];
            coeffs[free] = Rational::from_integer(1.into());
            for (row, &pc) in rows.iter().zip(&pivots) {
                coeffs[pc] = -row[free].clone();
            }
            coeffs
        })
        .collect()
}
