use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::rational::{Rational, Vector};
use super::LinalgError;

/// Counts of negative, positive and zero entries in a congruence-diagonal
/// form of a symmetric matrix. Sylvester's law of inertia makes these
/// independent of the diagonalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub neg: usize,
    pub pos: usize,
    pub null: usize,
}

impl Inertia {
    pub fn is_nondegenerate(&self) -> bool {
        self.null == 0
    }
}

/// Diagonalizes a symmetric matrix by congruence.
///
/// Returns the diagonal `d` and an invertible `a` with `aᵀ g a = diag(d)`.
/// A zero pivot is replaced by the first later index with a nonzero diagonal;
/// failing that, by adding the first later index `j` with `g[i][j] != 0`,
/// which makes the pivot `2 g[i][j]`.
pub fn congruence_diagonalize(g: &Matrix) -> Result<(Vec<Rational>, Matrix), LinalgError> {
    let n = g.require_square()?;
    if let Some((row, col)) = g.symmetry_defect() {
        return Err(LinalgError::NotSymmetric { row, col });
    }
    let mut m = g.clone();
    let mut a = Matrix::identity(n);
    for i in 0..n {
        if m[(i, i)].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !m[(j, j)].is_zero()) {
                swap_sym(&mut m, i, j);
                swap_cols(&mut a, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !m[(i, j)].is_zero()) {
                add_sym(&mut m, i, j, &Rational::one());
                add_col(&mut a, i, j, &Rational::one());
            } else {
                continue;
            }
        }
        let pivot = m[(i, i)].clone();
        for j in i + 1..n {
            if m[(i, j)].is_zero() {
                continue;
            }
            let t = -(&m[(i, j)] / &pivot);
            add_sym(&mut m, j, i, &t);
            add_col(&mut a, j, i, &t);
        }
    }
    let d = (0..n).map(|i| m[(i, i)].clone()).collect();
    Ok((d, a))
}

/// row/col `target` += t * row/col `src` (a congruence by an elementary matrix)
fn add_sym(m: &mut Matrix, target: usize, src: usize, t: &Rational) {
    let n = m.rows();
    for k in 0..n {
        let v = &m[(src, k)] * t;
        m[(target, k)] += v;
    }
    for k in 0..n {
        let v = &m[(k, src)] * t;
        m[(k, target)] += v;
    }
}

fn add_col(a: &mut Matrix, target: usize, src: usize, t: &Rational) {
    for k in 0..a.rows() {
        let v = &a[(k, src)] * t;
        a[(k, target)] += v;
    }
}

fn swap_sym(m: &mut Matrix, i: usize, j: usize) {
    let n = m.rows();
    for k in 0..n {
        let tmp = m[(i, k)].clone();
        m[(i, k)] = m[(j, k)].clone();
        m[(j, k)] = tmp;
    }
    for k in 0..n {
        let tmp = m[(k, i)].clone();
        m[(k, i)] = m[(k, j)].clone();
        m[(k, j)] = tmp;
    }
}

fn swap_cols(a: &mut Matrix, i: usize, j: usize) {
    for k in 0..a.rows() {
        let tmp = a[(k, i)].clone();
        a[(k, i)] = a[(k, j)].clone();
        a[(k, j)] = tmp;
    }
}

/// Inertia of a symmetric matrix; `null == 0` iff the matrix is invertible.
pub fn gram_signature(g: &Matrix) -> Result<Inertia, LinalgError> {
    let (d, _) = congruence_diagonalize(g)?;
    let mut out = Inertia {
        neg: 0,
        pos: 0,
        null: 0,
    };
    for e in &d {
        if e.is_zero() {
            out.null += 1;
        } else if e.is_negative() {
            out.neg += 1;
        } else {
            out.pos += 1;
        }
    }
    Ok(out)
}

/// Vectors `w_j` with `(v_i, w_j) = δ_ij` for the bilinear form `metric`.
///
/// Extends the `v_i` to a basis of the whole space with coordinate vectors,
/// takes the dual basis `v^j` (rows of the inverse basis matrix) and pulls it
/// back through the metric: `w_j = metric⁻¹ (v^j)ᵀ`.
pub fn dual_vectors(vs: &[Vector], metric: &Matrix) -> Result<Vec<Vector>, LinalgError> {
    let n = metric.require_square()?;
    for v in vs {
        if v.len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    if vs.is_empty() {
        return Ok(Vec::new());
    }
    let mut basis: Vec<Vector> = vs.to_vec();
    if Matrix::from_columns(&basis)?.rank() < vs.len() {
        return Err(LinalgError::DependentVectors);
    }
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::one();
        basis.push(e);
        if Matrix::from_columns(&basis)?.rank() < basis.len() {
            basis.pop();
        }
    }
    let b = Matrix::from_columns(&basis)?;
    let b_inv = b.inverse()?.ok_or(LinalgError::Singular)?;
    let metric_inv = metric.inverse()?.ok_or(LinalgError::Singular)?;
    Ok((0..vs.len())
        .map(|j| metric_inv.mul_vec(b_inv.row(j)))
        .collect())
}
