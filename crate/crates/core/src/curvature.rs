//! Algebraic curvature tensors on a space of signature `(p, q)`.
//!
//! The basis is ordered `e1-..ep-, e1+..eq+`, so flat index `i` is timelike
//! iff `i < p`. Components are stored densely as `R(e_i, e_j, e_k, e_l)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{Matrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurvatureError {
    #[error("signature ({p},{q}) has dimension below 2")]
    InvalidSignature { p: usize, q: usize },
    #[error("expected {expected} components, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("curvature symmetries violated: {0}")]
    Symmetry(SymmetryReport),
    #[error("map is not skew-adjoint: (phi e{i}, e{j}) != -(e{i}, phi e{j})")]
    NotSkewAdjoint { i: usize, j: usize },
    #[error("phi_a needs 1 <= a and 2a <= min(p,q); got a={a} on ({p},{q})")]
    InvalidPhiA { a: usize, p: usize, q: usize },
    #[error("no standard phi with phi^2 = {sign}Id on ({p},{q}): {reason}")]
    IncompatibleSquare {
        sign: &'static str,
        p: usize,
        q: usize,
        reason: &'static str,
    },
    #[error("matrix is {rows}x{cols}, expected {n}x{n}")]
    MatrixShape { rows: usize, cols: usize, n: usize },
    #[error("linear combination mixes signatures {first} and {other}")]
    MixedSignatures { first: Signature, other: Signature },
    #[error("linear combination has no terms")]
    EmptyCombination,
}

/// Signature `(p, q)` of the ambient inner product `diag(-1 x p, +1 x q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self, CurvatureError> {
        if p + q < 2 {
            return Err(CurvatureError::InvalidSignature { p, q });
        }
        Ok(Signature { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    /// `(e_i, e_i)`: `-1` for the first `p` indices, `+1` after.
    pub fn epsilon(&self, i: usize) -> i64 {
        if i < self.p {
            -1
        } else {
            1
        }
    }

    pub fn metric(&self) -> Matrix {
        Matrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                Rational::from_integer(self.epsilon(i).into())
            } else {
                Rational::zero()
            }
        })
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        x.iter()
            .zip(y)
            .enumerate()
            .filter(|(_, (a, b))| !a.is_zero() && !b.is_zero())
            .map(|(i, (a, b))| {
                let prod = a * b;
                if i < self.p {
                    -prod
                } else {
                    prod
                }
            })
            .sum()
    }

    /// Flat index of `e_k-` for a 1-based label `k`.
    pub fn timelike(&self, k: usize) -> usize {
        assert!(k >= 1 && k <= self.p, "timelike label t{k} out of range");
        k - 1
    }

    /// Flat index of `e_k+` for a 1-based label `k`.
    pub fn spacelike(&self, k: usize) -> usize {
        assert!(k >= 1 && k <= self.q, "spacelike label s{k} out of range");
        self.p + k - 1
    }

    /// Label of a flat index: `t3` for `e3-`, `s1` for `e1+`.
    pub fn label(&self, i: usize) -> String {
        if i < self.p {
            format!("t{}", i + 1)
        } else {
            format!("s{}", i - self.p + 1)
        }
    }

    /// The signature `(q, p)` obtained by changing the sign of the inner product.
    pub fn reversed(&self) -> Signature {
        Signature {
            p: self.q,
            q: self.p,
        }
    }

    pub fn unit(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// A linear map `phi` with `(phi x, y) = -(x, phi y)`; column `j` of the
/// matrix is `phi e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewAdjointMap {
    signature: Signature,
    matrix: Matrix,
}

impl SkewAdjointMap {
    pub fn new(signature: Signature, matrix: Matrix) -> Result<Self, CurvatureError> {
        let n = signature.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(CurvatureError::MatrixShape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                n,
            });
        }
        let map = SkewAdjointMap { signature, matrix };
        for i in 0..n {
            for j in i..n {
                if map.form(i, j) != -map.form(j, i) {
                    return Err(CurvatureError::NotSkewAdjoint { i, j });
                }
            }
        }
        Ok(map)
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `(phi e_i, e_j) = eps_j phi[j][i]`
    pub fn form(&self, i: usize, j: usize) -> Rational {
        let v = &self.matrix[(j, i)];
        if self.signature.epsilon(j) < 0 {
            -v
        } else {
            v.clone()
        }
    }

    pub fn scale(&self, t: &Rational) -> Self {
        SkewAdjointMap {
            signature: self.signature,
            matrix: self.matrix.scale(t),
        }
    }
}

/// The maps `Phi_a`: for `i <= a`,
/// `Phi_a e_{2i-1}± = ±(e_{2i}- + e_{2i}+)` and
/// `Phi_a e_{2i}± = ∓(e_{2i-1}- + e_{2i-1}+)`; zero on `e_k±` with `k > 2a`.
pub fn phi_a(sig: Signature, a: usize) -> Result<SkewAdjointMap, CurvatureError> {
    if a == 0 || 2 * a > sig.p.min(sig.q) {
        return Err(CurvatureError::InvalidPhiA {
            a,
            p: sig.p,
            q: sig.q,
        });
    }
    let n = sig.dim();
    let mut m = Matrix::zeros(n, n);
    let one = Rational::one();
    for i in 1..=a {
        let (odd, even) = (2 * i - 1, 2 * i);
        let even_sum = [sig.timelike(even), sig.spacelike(even)];
        let odd_sum = [sig.timelike(odd), sig.spacelike(odd)];
        for &row in &even_sum {
            m[(row, sig.timelike(odd))] = -one.clone();
            m[(row, sig.spacelike(odd))] = one.clone();
        }
        for &row in &odd_sum {
            m[(row, sig.timelike(even))] = one.clone();
            m[(row, sig.spacelike(even))] = -one.clone();
        }
    }
    SkewAdjointMap::new(sig, m)
}

/// Canonical `phi` with `phi^2 = square_sign * Id`.
///
/// For `-1` the timelike and the spacelike blocks are each paired as
/// `e_{2i-1} -> e_{2i} -> -e_{2i-1}`; for `+1` the map swaps `e_i-` and `e_i+`.
pub fn standard_phi(sig: Signature, square_sign: i8) -> Result<SkewAdjointMap, CurvatureError> {
    let n = sig.dim();
    let mut m = Matrix::zeros(n, n);
    let one = Rational::one();
    match square_sign {
        -1 => {
            if !sig.p.is_multiple_of(2) || !sig.q.is_multiple_of(2) {
                return Err(CurvatureError::IncompatibleSquare {
                    sign: "-",
                    p: sig.p,
                    q: sig.q,
                    reason: "p and q must both be even",
                });
            }
            for (start, len) in [(0, sig.p), (sig.p, sig.q)] {
                for k in (0..len).step_by(2) {
                    let (a, b) = (start + k, start + k + 1);
                    m[(b, a)] = one.clone();
                    m[(a, b)] = -one.clone();
                }
            }
        }
        1 => {
            if sig.p != sig.q {
                return Err(CurvatureError::IncompatibleSquare {
                    sign: "+",
                    p: sig.p,
                    q: sig.q,
                    reason: "p must equal q",
                });
            }
            for k in 0..sig.p {
                m[(sig.p + k, k)] = one.clone();
                m[(k, sig.p + k)] = one.clone();
            }
        }
        _ => panic!("square_sign must be +1 or -1"),
    }
    SkewAdjointMap::new(sig, m)
}

/// How a tensor was built; used for descriptions and to recognise the
/// `R_{Phi_a}` family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorOrigin {
    ConstantSectional,
    Skew,
    PhiA { a: usize },
    Dense,
    Combination(Vec<(Rational, TensorOrigin)>),
}

impl fmt::Display for TensorOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorOrigin::ConstantSectional => f.write_str("R_Id"),
            TensorOrigin::Skew => f.write_str("R_phi"),
            TensorOrigin::PhiA { a } => write!(f, "R_Phi_{a}"),
            TensorOrigin::Dense => f.write_str("dense"),
            TensorOrigin::Combination(terms) => {
                let parts: Vec<String> = terms.iter().map(|(c, o)| format!("({c})*{o}")).collect();
                f.write_str(&parts.join(" + "))
            }
        }
    }
}

/// First violating index quadruple (0-based) for each curvature identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymmetryReport {
    pub antisymmetry: Option<[usize; 4]>,
    pub pair_symmetry: Option<[usize; 4]>,
    pub bianchi: Option<[usize; 4]>,
}

impl SymmetryReport {
    pub fn is_clean(&self) -> bool {
        self.antisymmetry.is_none() && self.pair_symmetry.is_none() && self.bianchi.is_none()
    }
}

impl fmt::Display for SymmetryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let show = |name: &str, q: &Option<[usize; 4]>| {
            q.map(|[i, j, k, l]| {
                format!(
                    "{name} fails at R[{}][{}][{}][{}]",
                    i + 1,
                    j + 1,
                    k + 1,
                    l + 1
                )
            })
        };
        parts.extend(show("R(x,y,z,w) = -R(y,x,z,w)", &self.antisymmetry));
        parts.extend(show("R(x,y,z,w) = R(z,w,x,y)", &self.pair_symmetry));
        parts.extend(show("first Bianchi identity", &self.bianchi));
        if parts.is_empty() {
            f.write_str("no violations")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

/// Nonzero components scaled to integers: `R[i][j][k][l] = value / denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerComponents {
    pub denom: BigInt,
    pub entries: Vec<([usize; 4], BigInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicCurvatureTensor {
    signature: Signature,
    components: Vec<Rational>,
    origin: TensorOrigin,
    integer: IntegerComponents,
}

impl AlgebraicCurvatureTensor {
    fn from_parts(signature: Signature, components: Vec<Rational>, origin: TensorOrigin) -> Self {
        let denom = components
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let n = signature.dim();
        let entries = components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| {
                let quad = [idx / (n * n * n), idx / (n * n) % n, idx / n % n, idx % n];
                (quad, c.numer() * (&denom / c.denom()))
            })
            .collect();
        AlgebraicCurvatureTensor {
            signature,
            components,
            origin,
            integer: IntegerComponents { denom, entries },
        }
    }

    fn build(
        signature: Signature,
        origin: TensorOrigin,
        f: impl Fn(usize, usize, usize, usize) -> Rational,
    ) -> Self {
        let n = signature.dim();
        let mut components = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        components.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self::from_parts(signature, components, origin)
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn origin(&self) -> &TensorOrigin {
        &self.origin
    }

    pub fn description(&self) -> String {
        format!("{} on {}", self.origin, self.signature)
    }

    pub fn components(&self) -> &[Rational] {
        &self.components
    }

    pub fn integer_components(&self) -> &IntegerComponents {
        &self.integer
    }

    /// `R(e_i, e_j, e_k, e_l)`, 0-based.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        let n = self.signature.dim();
        &self.components[((i * n + j) * n + k) * n + l]
    }

    /// `R(x, y, z, w)` by multilinear expansion.
    pub fn eval(&self, x: &[Rational], y: &[Rational], z: &[Rational], w: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for ([i, j, k, l], v) in &self.integer.entries {
            if x[*i].is_zero() || y[*j].is_zero() || z[*k].is_zero() || w[*l].is_zero() {
                continue;
            }
            total += &x[*i] * &y[*j] * &z[*k] * &w[*l] * Rational::from_integer(v.clone());
        }
        total / Rational::from_integer(self.integer.denom.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.integer.entries.is_empty()
    }

    /// The `a` of `c * R_{Phi_a}` with `c != 0`, if that is how the tensor
    /// was built.
    pub fn phi_a_parameter(&self) -> Option<usize> {
        fn walk(origin: &TensorOrigin) -> Option<usize> {
            match origin {
                TensorOrigin::PhiA { a } => Some(*a),
                TensorOrigin::Combination(terms) => {
                    let live: Vec<_> = terms.iter().filter(|(c, _)| !c.is_zero()).collect();
                    match live.as_slice() {
                        [(_, inner)] => walk(inner),
                        _ => None,
                    }
                }
                _ => None,
            }
        }
        if self.is_zero() {
            return None;
        }
        walk(&self.origin)
    }

    /// `c` with `R = c * R_Id` componentwise (including `c = 0`), if any.
    pub fn constant_sectional_multiple(&self) -> Option<Rational> {
        let id = r_id(self.signature);
        let sig = self.signature;
        let c =
            self.get(0, 1, 1, 0) * Rational::from_integer((sig.epsilon(0) * sig.epsilon(1)).into());
        let matches = self
            .components
            .iter()
            .zip(&id.components)
            .all(|(a, b)| *a == b * &c);
        matches.then_some(c)
    }

    pub fn scale(&self, t: &Rational) -> Self {
        linear_combination(&[(t.clone(), self)]).expect("single term")
    }
}

/// Checks the curvature identities componentwise and wraps the array.
pub fn validate_symmetries(
    signature: Signature,
    components: Vec<Rational>,
) -> Result<AlgebraicCurvatureTensor, CurvatureError> {
    let report = symmetry_report(signature, &components)?;
    if !report.is_clean() {
        return Err(CurvatureError::Symmetry(report));
    }
    Ok(AlgebraicCurvatureTensor::from_parts(
        signature,
        components,
        TensorOrigin::Dense,
    ))
}

/// First violation of each identity; errors only on a shape mismatch.
pub fn symmetry_report(
    signature: Signature,
    components: &[Rational],
) -> Result<SymmetryReport, CurvatureError> {
    let n = signature.dim();
    let expected = n * n * n * n;
    if components.len() != expected {
        return Err(CurvatureError::ShapeMismatch {
            expected,
            found: components.len(),
        });
    }
    let at = |i: usize, j: usize, k: usize, l: usize| &components[((i * n + j) * n + k) * n + l];
    let mut report = SymmetryReport::default();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let r = at(i, j, k, l);
                    if report.antisymmetry.is_none() && *r != -at(j, i, k, l) {
                        report.antisymmetry = Some([i, j, k, l]);
                    }
                    if report.pair_symmetry.is_none() && r != at(k, l, i, j) {
                        report.pair_symmetry = Some([i, j, k, l]);
                    }
                    if report.bianchi.is_none() && !(r + at(j, k, i, l) + at(k, i, j, l)).is_zero()
                    {
                        report.bianchi = Some([i, j, k, l]);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `R_Id(x,y,z,w) = (y,z)(x,w) - (x,z)(y,w)`, constant sectional curvature.
pub fn r_id(sig: Signature) -> AlgebraicCurvatureTensor {
    let g = |a: usize, b: usize| if a == b { sig.epsilon(a) } else { 0 };
    AlgebraicCurvatureTensor::build(sig, TensorOrigin::ConstantSectional, |i, j, k, l| {
        Rational::from_integer((g(j, k) * g(i, l) - g(i, k) * g(j, l)).into())
    })
}

/// `R_phi(x,y,z,w) = (phi y,z)(phi x,w) - (phi x,z)(phi y,w) - 2(phi x,y)(phi z,w)`.
pub fn r_phi(phi: &SkewAdjointMap) -> AlgebraicCurvatureTensor {
    r_phi_with_origin(phi, TensorOrigin::Skew)
}

/// `R_{Phi_a}` with its origin recorded.
pub fn r_phi_a(sig: Signature, a: usize) -> Result<AlgebraicCurvatureTensor, CurvatureError> {
    Ok(r_phi_with_origin(&phi_a(sig, a)?, TensorOrigin::PhiA { a }))
}

fn r_phi_with_origin(phi: &SkewAdjointMap, origin: TensorOrigin) -> AlgebraicCurvatureTensor {
    let n = phi.signature.dim();
    let form: Vec<Rational> = (0..n * n).map(|idx| phi.form(idx / n, idx % n)).collect();
    let f = |a: usize, b: usize| &form[a * n + b];
    let two = Rational::from_integer(2.into());
    AlgebraicCurvatureTensor::build(phi.signature, origin, |i, j, k, l| {
        f(j, k) * f(i, l) - f(i, k) * f(j, l) - &two * f(i, j) * f(k, l)
    })
}

/// `sum c_t R_t`; all terms must share one signature.
pub fn linear_combination(
    terms: &[(Rational, &AlgebraicCurvatureTensor)],
) -> Result<AlgebraicCurvatureTensor, CurvatureError> {
    let (_, first) = terms.first().ok_or(CurvatureError::EmptyCombination)?;
    let sig = first.signature;
    if let Some((_, other)) = terms.iter().find(|(_, t)| t.signature != sig) {
        return Err(CurvatureError::MixedSignatures {
            first: sig,
            other: other.signature,
        });
    }
    let len = first.components.len();
    let mut components = vec![Rational::zero(); len];
    for (c, t) in terms {
        if c.is_zero() {
            continue;
        }
        for (acc, v) in components.iter_mut().zip(&t.components) {
            if !v.is_zero() {
                *acc += c * v;
            }
        }
    }
    let origin = TensorOrigin::Combination(
        terms
            .iter()
            .map(|(c, t)| (c.clone(), t.origin.clone()))
            .collect(),
    );
    Ok(AlgebraicCurvatureTensor::from_parts(
        sig, components, origin,
    ))
}

/// The Ricci form `rho(y,x) = sum_i eps_i R(y,e_i,e_i,x)` is not a multiple
/// of the inner product; `(y, x)` is the first offending entry.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not Einstein: rho(e{}, e{}) = {found}, expected {expected}", .y + 1, .x + 1)]
pub struct NotEinstein {
    pub y: usize,
    pub x: usize,
    pub found: Rational,
    pub expected: Rational,
}

/// The Ricci form as a matrix.
pub fn ricci_form(r: &AlgebraicCurvatureTensor) -> Matrix {
    let sig = r.signature;
    let n = sig.dim();
    Matrix::from_fn(n, n, |y, x| {
        (0..n)
            .map(|i| {
                let v = r.get(y, i, i, x);
                if sig.epsilon(i) < 0 {
                    -v
                } else {
                    v.clone()
                }
            })
            .sum()
    })
}

/// `c` with `rho = c (.,.)`.
#[allow(clippy::result_large_err)]
pub fn einstein_constant(r: &AlgebraicCurvatureTensor) -> Result<Rational, NotEinstein> {
    let sig = r.signature;
    let n = sig.dim();
    let rho = ricci_form(r);
    let c = &rho[(0, 0)] * Rational::from_integer(sig.epsilon(0).into());
    for y in 0..n {
        for x in 0..n {
            let expected = if x == y {
                &c * Rational::from_integer(sig.epsilon(x).into())
            } else {
                Rational::zero()
            };
            if rho[(y, x)] != expected {
                return Err(NotEinstein {
                    y,
                    x,
                    found: rho[(y, x)].clone(),
                    expected,
                });
            }
        }
    }
    Ok(c)
}
