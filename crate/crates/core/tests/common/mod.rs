//! Brute-force oracles shared by the integration tests. None of these call
//! the elimination, Hessenberg or projector code they are compared with.

#![allow(dead_code)]

use jordan_osserman::curvature::{AlgebraicCurvatureTensor, Signature};
use jordan_osserman::linalg::{rat, Matrix, Polynomial, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries `num/den` with `|num| <= height` and `1 <= den <= 3`; roughly a
/// third of the entries are zero so that singular matrices are common.
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, height: i64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        if rng.gen_range(0..3) == 0 {
            Rational::zero()
        } else {
            rat(rng.gen_range(-height..=height), rng.gen_range(1..=3))
        }
    })
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Rank as the largest size of a non-vanishing minor.
pub fn minor_rank(m: &Matrix) -> usize {
    let rows = m.to_rows();
    for k in (1..=m.rows().min(m.cols())).rev() {
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let sub: Vec<Vec<Rational>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect())
                    .collect();
                if !cofactor_det(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

/// `det(t I - A)` sampled at `t = 0..=n` by cofactors, then Lagrange
/// interpolation.
pub fn interpolated_char_poly(m: &Matrix) -> Polynomial {
    let n = m.rows();
    let points: Vec<(Rational, Rational)> = (0..=n as i64)
        .map(|t| {
            let t = rat(t, 1);
            let shifted: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { &t - &m[(i, j)] } else { -&m[(i, j)] })
                        .collect()
                })
                .collect();
            (t, cofactor_det(&shifted))
        })
        .collect();
    let mut result = vec![Rational::zero(); n + 1];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        for (d, c) in basis.iter().enumerate() {
            result[d] += c * yi / &denom;
        }
    }
    Polynomial::from_coeffs(result)
}

/// Inverse by the adjugate formula.
pub fn adjugate_inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.rows();
    let rows = m.to_rows();
    let det = cofactor_det(&rows);
    if det.is_zero() {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| {
        let minor: Vec<Vec<Rational>> = (0..n)
            .filter(|&r| r != j)
            .map(|r| {
                (0..n)
                    .filter(|&c| c != i)
                    .map(|c| rows[r][c].clone())
                    .collect()
            })
            .collect();
        let c = cofactor_det(&minor) / &det;
        if (i + j) % 2 == 0 {
            c
        } else {
            -c
        }
    }))
}

/// `J(sigma) y = sum_ij h^ij R(y, v_i) v_j` straight from the definition:
/// column `l` holds the coordinates of `J(e_l)`, recovered from
/// `(J(e_l), e_m) = sum_ij h^ij R(e_l, v_i, v_j, e_m)`.
pub fn jacobi_oracle(r: &AlgebraicCurvatureTensor, basis: &[Vec<Rational>]) -> Matrix {
    let sig = r.signature();
    let n = sig.dim();
    let k = basis.len();
    let gram = Matrix::from_fn(k, k, |i, j| sig.inner(&basis[i], &basis[j]));
    let h_inv = adjugate_inverse(&gram).expect("non-degenerate");
    Matrix::from_fn(n, n, |m, l| {
        let (el, em) = (sig.unit(l), sig.unit(m));
        let mut total = Rational::zero();
        for i in 0..k {
            for j in 0..k {
                if !h_inv[(i, j)].is_zero() {
                    total += &h_inv[(i, j)] * r.eval(&el, &basis[i], &basis[j], &em);
                }
            }
        }
        total * rat(sig.epsilon(m), 1)
    })
}

/// Integer vectors with entries in `[-height, height]`.
pub fn random_vectors(
    rng: &mut ChaCha8Rng,
    count: usize,
    n: usize,
    height: i64,
) -> Vec<Vec<Rational>> {
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| rat(rng.gen_range(-height..=height), 1))
                .collect()
        })
        .collect()
}

pub fn sig(p: usize, q: usize) -> Signature {
    Signature::new(p, q).unwrap()
}
