//! The Jacobi operator `J(v) y = R(y, v) v` and the higher-order operator
//! `J(sigma) y = sum_ij h^ij R(y, v_i) v_j` as exact matrices.
//!
//! Matrix entries follow `(R(x,y)z, w) = R(x,y,z,w)`, so
//! `J[m][l] = eps_m sum_ab R[l][a][b][m] P^ab` with `P^ab = v^a v^b` for a
//! vector and `P = B^T h^{-1} B` for a subspace with basis rows `B`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::curvature::{AlgebraicCurvatureTensor, Signature};
use crate::grassmann::{primitive, GrassmannError, Subspace};
use crate::linalg::{congruence_diagonalize, Matrix, Rational, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobiError {
    #[error("vector has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("(v,v) = 0: the line through v is degenerate")]
    NullVector,
    #[error("subspace lives in {found}, tensor in {expected}")]
    SignatureMismatch {
        expected: Signature,
        found: Signature,
    },
    #[error("subspace is degenerate ({null} null directions in its Gram matrix)")]
    Degenerate { null: usize },
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

/// What a Jacobi matrix was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JacobiSource {
    Vector(Vector),
    Line(Vector),
    Subspace(Subspace),
}

/// An `n x n` Jacobi matrix, self-adjoint for the ambient inner product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiMatrix {
    matrix: Matrix,
    source: JacobiSource,
}

impl JacobiMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn source(&self) -> &JacobiSource {
        &self.source
    }

    /// First basis pair with `(J e_i, e_j) != (e_i, J e_j)`.
    pub fn self_adjointness_defect(&self, sig: Signature) -> Option<(usize, usize)> {
        self_adjointness_defect(&self.matrix, sig)
    }
}

/// `(M e_i, e_j) = eps_j M[j][i]` must equal `(e_i, M e_j) = eps_i M[i][j]`.
pub fn self_adjointness_defect(m: &Matrix, sig: Signature) -> Option<(usize, usize)> {
    let n = sig.dim();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = &m[(j, i)] * Rational::from_integer(sig.epsilon(j).into());
            let rhs = &m[(i, j)] * Rational::from_integer(sig.epsilon(i).into());
            if lhs != rhs {
                return Some((i, j));
            }
        }
    }
    None
}

fn check_len(r: &AlgebraicCurvatureTensor, v: &[Rational]) -> Result<(), JacobiError> {
    let n = r.signature().dim();
    if v.len() != n {
        return Err(JacobiError::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(())
}

/// Dense expansion of `J(v)` straight from the components.
fn dense_jacobi(r: &AlgebraicCurvatureTensor, v: &[Rational]) -> Matrix {
    let sig = r.signature();
    let n = sig.dim();
    let support: Vec<usize> = (0..n).filter(|&a| !v[a].is_zero()).collect();
    Matrix::from_fn(n, n, |m, l| {
        let mut acc = Rational::zero();
        for &a in &support {
            for &b in &support {
                let c = r.get(l, a, b, m);
                if !c.is_zero() {
                    acc += c * &v[a] * &v[b];
                }
            }
        }
        if sig.epsilon(m) < 0 {
            -acc
        } else {
            acc
        }
    })
}

/// `J(v) y = R(y, v) v`; defined for every `v`, null or not.
pub fn jacobi_vector(
    r: &AlgebraicCurvatureTensor,
    v: &[Rational],
) -> Result<JacobiMatrix, JacobiError> {
    check_len(r, v)?;
    Ok(JacobiMatrix {
        matrix: dense_jacobi(r, v),
        source: JacobiSource::Vector(v.to_vec()),
    })
}

/// `(v, v)^{-1} J(v)`, which depends only on the line through `v`.
pub fn jacobi_line(
    r: &AlgebraicCurvatureTensor,
    v: &[Rational],
) -> Result<JacobiMatrix, JacobiError> {
    check_len(r, v)?;
    let norm = r.signature().inner(v, v);
    if norm.is_zero() {
        return Err(JacobiError::NullVector);
    }
    Ok(JacobiMatrix {
        matrix: dense_jacobi(r, v).scale(&norm.recip()),
        source: JacobiSource::Line(v.to_vec()),
    })
}

fn check_subspace(r: &AlgebraicCurvatureTensor, sigma: &Subspace) -> Result<(), JacobiError> {
    if sigma.ambient() != r.signature() {
        return Err(JacobiError::SignatureMismatch {
            expected: r.signature(),
            found: sigma.ambient(),
        });
    }
    Ok(())
}

/// `P = B^T h^{-1} B` for a basis of `sigma`, scaled to integers:
/// returns `(P_int, d)` with `P = P_int / d`.
///
/// Fraction-free Gauss-Jordan on `[h | B]` leaves `det(h) I` on the left and
/// `det(h) h^{-1} B` on the right, all in integers.
fn integer_projector(sigma: &Subspace) -> Result<(Vec<BigInt>, BigInt), JacobiError> {
    let sig = sigma.ambient();
    let n = sig.dim();
    let basis: Vec<Vec<BigInt>> = sigma
        .basis()
        .iter()
        .map(|v| primitive(v).iter().map(|x| x.numer().clone()).collect())
        .collect();
    let k = basis.len();
    let inner = |x: &[BigInt], y: &[BigInt]| -> BigInt {
        (0..n)
            .filter(|&c| !x[c].is_zero() && !y[c].is_zero())
            .map(|c| {
                if sig.epsilon(c) < 0 {
                    -(&x[c] * &y[c])
                } else {
                    &x[c] * &y[c]
                }
            })
            .sum()
    };
    let mut a: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..k).map(|j| inner(&basis[i], &basis[j])).collect();
            row.extend(basis[i].iter().cloned());
            row
        })
        .collect();
    let width = k + n;
    let mut prev = BigInt::one();
    for col in 0..k {
        let piv =
            (col..k)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| JacobiError::Degenerate {
                    null: sigma.signature().null,
                })?;
        a.swap(col, piv);
        for i in (0..k).filter(|&i| i != col) {
            for j in (0..width).filter(|&j| j != col) {
                let v = &a[col][col] * &a[i][j] - &a[i][col] * &a[col][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[col][col].clone();
    }
    let sign = if prev.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut p = vec![BigInt::zero(); n * n];
    for x in 0..n {
        for y in x..n {
            let v: BigInt = (0..k)
                .filter(|&i| !basis[i][x].is_zero())
                .map(|i| &basis[i][x] * &a[i][k + y])
                .sum::<BigInt>()
                * &sign;
            p[y * n + x] = v.clone();
            p[x * n + y] = v;
        }
    }
    Ok((p, prev * sign))
}

/// Contracts `eps_m R[l][a][b][m] P^ab` over the nonzero components.
fn contract(r: &AlgebraicCurvatureTensor, p_int: &[BigInt], p_denom: &BigInt) -> Matrix {
    let sig = r.signature();
    let n = sig.dim();
    let ints = r.integer_components();
    let mut acc = vec![BigInt::zero(); n * n];
    for ([l, a, b, m], value) in &ints.entries {
        let w = &p_int[a * n + b];
        if !w.is_zero() {
            acc[m * n + l] += value * w;
        }
    }
    let denom = p_denom * &ints.denom;
    Matrix::from_fn(n, n, |m, l| {
        let v = Rational::new(acc[m * n + l].clone(), denom.clone());
        if sig.epsilon(m) < 0 {
            -v
        } else {
            v
        }
    })
}

/// `J(sigma) y = sum_ij h^ij R(y, v_i) v_j` for a non-degenerate `sigma`;
/// independent of the basis chosen for `sigma`.
pub fn jacobi_subspace(
    r: &AlgebraicCurvatureTensor,
    sigma: &Subspace,
) -> Result<JacobiMatrix, JacobiError> {
    check_subspace(r, sigma)?;
    let (p_int, d) = integer_projector(sigma)?;
    Ok(JacobiMatrix {
        matrix: contract(r, &p_int, &d),
        source: JacobiSource::Subspace(sigma.clone()),
    })
}

/// `J(sigma)` as `sum_j (u_j, u_j)^{-1} J(u_j)` over an orthogonal basis
/// `u_j` of `sigma` obtained by congruence; on an orthonormal basis this is
/// `eps_1 J(e_1) + ... + eps_k J(e_k)`. Used as an independent cross-check.
pub fn jacobi_subspace_orthogonal(
    r: &AlgebraicCurvatureTensor,
    sigma: &Subspace,
) -> Result<JacobiMatrix, JacobiError> {
    check_subspace(r, sigma)?;
    let n = r.signature().dim();
    let (d, a) = congruence_diagonalize(sigma.gram()).expect("Gram matrices are symmetric");
    let null = d.iter().filter(|x| x.is_zero()).count();
    if null > 0 {
        return Err(JacobiError::Degenerate { null });
    }
    let basis = sigma.basis();
    let mut total = Matrix::zeros(n, n);
    for (j, dj) in d.iter().enumerate() {
        let u: Vector = (0..n)
            .map(|c| (0..basis.len()).map(|i| &a[(i, j)] * &basis[i][c]).sum())
            .collect();
        total = &total + &dense_jacobi(r, &u).scale(&dj.recip());
    }
    Ok(JacobiMatrix {
        matrix: total,
        source: JacobiSource::Subspace(sigma.clone()),
    })
}

/// `sum_i eps_i J(e_i)` is not a multiple of the identity.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("sum of eps_i J(e_i) is not scalar: entry ({}, {}) is {found}, expected {expected}", .row + 1, .col + 1)]
pub struct TraceViolation {
    pub row: usize,
    pub col: usize,
    pub found: Rational,
    pub expected: Rational,
}

/// `c` with `sum_i eps_i J(e_i) = c Id`, checked entrywise.
#[allow(clippy::result_large_err)]
pub fn check_trace_identity(r: &AlgebraicCurvatureTensor) -> Result<Rational, TraceViolation> {
    let sig = r.signature();
    let n = sig.dim();
    let mut total = Matrix::zeros(n, n);
    for i in 0..n {
        let j = dense_jacobi(r, &sig.unit(i));
        total = &total + &j.scale(&Rational::from_integer(sig.epsilon(i).into()));
    }
    let c = total[(0, 0)].clone();
    for row in 0..n {
        for col in 0..n {
            let expected = if row == col {
                c.clone()
            } else {
                Rational::zero()
            };
            if total[(row, col)] != expected {
                return Err(TraceViolation {
                    row,
                    col,
                    found: total[(row, col)].clone(),
                    expected,
                });
            }
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{r_id, r_phi_a, validate_symmetries};
    use crate::grassmann::coordinate_subspace;
    use crate::linalg::rat;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn diag(entries: &[i64]) -> Matrix {
        Matrix::diagonal(&entries.iter().map(|&e| rat(e, 1)).collect::<Vec<_>>())
    }

    #[test]
    fn jacobi_of_round_sphere() {
        let r = r_id(sig(0, 3));
        let e1 = sig(0, 3).unit(0);
        assert_eq!(*jacobi_vector(&r, &e1).unwrap().matrix(), diag(&[0, 1, 1]));
        let two_e1: Vector = e1.iter().map(|x| x * rat(2, 1)).collect();
        assert_eq!(
            *jacobi_line(&r, &two_e1).unwrap().matrix(),
            diag(&[0, 1, 1])
        );
        assert_eq!(
            *jacobi_vector(&r, &two_e1).unwrap().matrix(),
            diag(&[0, 4, 4])
        );
        assert!(jacobi_vector(&r, &vec![rat(0, 1); 3])
            .unwrap()
            .matrix()
            .is_zero());
        assert!(matches!(
            jacobi_vector(&r, &[rat(1, 1)]),
            Err(JacobiError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lorentzian_lines() {
        let s = sig(1, 1);
        let r = r_id(s);
        assert_eq!(
            jacobi_line(&r, &[rat(1, 1), rat(1, 1)]),
            Err(JacobiError::NullVector)
        );
        // J(v) y = (v,v) y - (y,v) v restricted to the line and its complement
        let j = jacobi_line(&r, &s.unit(0)).unwrap();
        assert_eq!(*j.matrix(), diag(&[0, 1]));
        assert_eq!(j.self_adjointness_defect(s), None);
    }

    #[test]
    fn phi_a_vanishes_beyond_support() {
        let s = sig(4, 4);
        let r = r_phi_a(s, 1).unwrap();
        assert!(jacobi_vector(&r, &s.unit(s.timelike(4)))
            .unwrap()
            .matrix()
            .is_zero());
        assert!(!jacobi_vector(&r, &s.unit(s.timelike(1)))
            .unwrap()
            .matrix()
            .is_zero());
    }

    #[test]
    fn subspace_formula_matches_orthogonal_sum() {
        let s = sig(2, 2);
        let r = r_phi_a(s, 1).unwrap();
        let plane = coordinate_subspace(s, &[1], &[1]).unwrap();
        assert!(jacobi_subspace(&r, &plane).unwrap().matrix().is_zero());
        let skew = Subspace::new(
            s,
            vec![
                vec![rat(1, 1), rat(2, 1), rat(0, 1), rat(1, 1)],
                vec![rat(0, 1), rat(1, 2), rat(3, 1), rat(-1, 1)],
            ],
        )
        .unwrap();
        let j = jacobi_subspace(&r, &skew).unwrap();
        assert_eq!(j, jacobi_subspace_orthogonal(&r, &skew).unwrap());
        assert_eq!(j.self_adjointness_defect(s), None);
        assert!((j.matrix() * j.matrix()).is_zero());
        // null basis vectors: the Gram matrix has a zero leading pivot
        let hyperbolic = Subspace::new(
            s,
            vec![
                vec![rat(1, 1), rat(0, 1), rat(1, 1), rat(0, 1)],
                vec![rat(1, 1), rat(0, 1), rat(-1, 1), rat(0, 1)],
                vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(2, 1)],
            ],
        )
        .unwrap();
        assert_eq!(hyperbolic.gram()[(0, 0)], rat(0, 1));
        assert_eq!(
            jacobi_subspace(&r, &hyperbolic).unwrap(),
            jacobi_subspace_orthogonal(&r, &hyperbolic).unwrap()
        );
    }

    #[test]
    fn single_vector_subspace_matches_normalized_operator() {
        let s = sig(1, 2);
        let r = r_id(s);
        let v = s.unit(0);
        let line = Subspace::new(s, vec![v.clone()]).unwrap();
        let expected = jacobi_vector(&r, &v).unwrap().matrix().scale(&rat(-1, 1));
        assert_eq!(*jacobi_subspace(&r, &line).unwrap().matrix(), expected);
    }

    #[test]
    fn degenerate_subspaces_rejected() {
        let s = sig(1, 1);
        let r = r_id(s);
        let null = Subspace::new(s, vec![vec![rat(1, 1), rat(1, 1)]]).unwrap();
        assert!(matches!(
            jacobi_subspace(&r, &null),
            Err(JacobiError::Degenerate { null: 1 })
        ));
        let other = coordinate_subspace(sig(2, 0), &[1], &[]).unwrap();
        assert!(matches!(
            jacobi_subspace(&r, &other),
            Err(JacobiError::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn trace_identity() {
        assert_eq!(check_trace_identity(&r_id(sig(2, 3))), Ok(rat(4, 1)));
        assert_eq!(
            check_trace_identity(&r_phi_a(sig(2, 3), 1).unwrap()),
            Ok(rat(0, 1))
        );
        // 2 R_Id on the plane span{e1,e2} plus R_Id on span{e3}: not Einstein
        let s = sig(0, 3);
        let id = r_id(s);
        let n = 3;
        let comps: Vec<Rational> = (0..81)
            .map(|idx| {
                let quad = [idx / 27, idx / 9 % n, idx / 3 % n, idx % n];
                let c = id.get(quad[0], quad[1], quad[2], quad[3]).clone();
                if quad.iter().all(|&i| i < 2) {
                    c * rat(2, 1)
                } else {
                    c
                }
            })
            .collect();
        let bumped = validate_symmetries(s, comps).unwrap();
        assert!(check_trace_identity(&bumped).is_err());
    }
}
