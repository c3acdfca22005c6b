//! Subspaces of a signature `(p, q)` space: construction, signature,
//! orthogonal complements, seeded sampling and the coordinate witness pairs
//! that separate ranks of `J_{Phi_a}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::Signature;
use crate::linalg::{gram_signature, Inertia, LinalgError, Matrix, Rational, Vector};

pub const DEFAULT_HEIGHT: u32 = 3;
pub const DEFAULT_MAX_TRIES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrassmannError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("vector has {found} coordinates, ambient dimension is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("subspace is empty")]
    Empty,
    #[error("subspace is degenerate ({null} null directions in its Gram matrix)")]
    Degenerate { null: usize },
    #[error(
        "type ({r},{s}) is not admissible on ({p},{q}): need r <= p, s <= q, 1 <= r+s <= p+q-1"
    )]
    Inadmissible {
        r: usize,
        s: usize,
        p: usize,
        q: usize,
    },
    #[error("coordinate label {label} out of range")]
    IndexOutOfRange { label: String },
    #[error("coordinate label {label} repeated")]
    RepeatedIndex { label: String },
    #[error("no subspace of type ({r},{s}) found in {tries} tries; try a larger height")]
    TriesExhausted { r: usize, s: usize, tries: usize },
    #[error("a={a} is invalid on ({p},{q}): need 1 <= a and 2a <= min(p,q)")]
    InvalidA { a: usize, p: usize, q: usize },
}

/// A type `(r, s)` with `r <= p`, `s <= q` and `1 <= r+s <= p+q-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub r: usize,
    pub s: usize,
}

impl AdmissiblePair {
    pub fn new(sig: Signature, r: usize, s: usize) -> Result<Self, GrassmannError> {
        if r > sig.p() || s > sig.q() || r + s == 0 || r + s >= sig.dim() {
            return Err(GrassmannError::Inadmissible {
                r,
                s,
                p: sig.p(),
                q: sig.q(),
            });
        }
        Ok(AdmissiblePair { r, s })
    }

    /// All admissible pairs, ordered by `r` then `s`.
    pub fn all(sig: Signature) -> Vec<AdmissiblePair> {
        (0..=sig.p())
            .flat_map(|r| (0..=sig.q()).map(move |s| (r, s)))
            .filter_map(|(r, s)| AdmissiblePair::new(sig, r, s).ok())
            .collect()
    }

    /// The type `(p-r, q-s)` of orthogonal complements.
    pub fn complement(&self, sig: Signature) -> AdmissiblePair {
        AdmissiblePair {
            r: sig.p() - self.r,
            s: sig.q() - self.s,
        }
    }

    pub fn dim(&self) -> usize {
        self.r + self.s
    }
}

impl fmt::Display for AdmissiblePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.s)
    }
}

/// A subspace given by a basis, with its Gram matrix `h_ij = (v_i, v_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: Signature,
    basis: Vec<Vector>,
    gram: Matrix,
}

impl Subspace {
    pub fn new(ambient: Signature, basis: Vec<Vector>) -> Result<Self, GrassmannError> {
        if basis.is_empty() {
            return Err(GrassmannError::Empty);
        }
        let n = ambient.dim();
        if let Some(v) = basis.iter().find(|v| v.len() != n) {
            return Err(GrassmannError::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if Matrix::from_rows(basis.clone())?.rank() < basis.len() {
            return Err(GrassmannError::DependentBasis);
        }
        let k = basis.len();
        let gram = Matrix::from_fn(k, k, |i, j| ambient.inner(&basis[i], &basis[j]));
        Ok(Subspace {
            ambient,
            basis,
            gram,
        })
    }

    pub fn ambient(&self) -> Signature {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(r, s, null)`: negative, positive and zero directions of the Gram matrix.
    pub fn signature(&self) -> Inertia {
        gram_signature(&self.gram).expect("Gram matrices are symmetric")
    }

    /// The type `(r, s)` if the subspace is non-degenerate and admissible.
    pub fn admissible_type(&self) -> Result<AdmissiblePair, GrassmannError> {
        let inertia = self.signature();
        if inertia.null > 0 {
            return Err(GrassmannError::Degenerate { null: inertia.null });
        }
        AdmissiblePair::new(self.ambient, inertia.neg, inertia.pos)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.signature().is_nondegenerate()
    }

    /// `{y : (v_i, y) = 0 for all i}`, with basis vectors scaled to
    /// primitive integer vectors.
    pub fn orthogonal_complement(&self) -> Result<Subspace, GrassmannError> {
        let inertia = self.signature();
        if inertia.null > 0 {
            return Err(GrassmannError::Degenerate { null: inertia.null });
        }
        let n = self.ambient.dim();
        if self.dim() == n {
            return Err(GrassmannError::Empty);
        }
        let constraints = Matrix::from_fn(self.dim(), n, |i, j| {
            let v = &self.basis[i][j];
            if self.ambient.epsilon(j) < 0 {
                -v
            } else {
                v.clone()
            }
        });
        let kernel = constraints.kernel().iter().map(|v| primitive(v)).collect();
        Subspace::new(self.ambient, kernel)
    }

    /// Equal spans, decided by comparing reduced row echelon forms.
    pub fn same_span(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && self.echelon() == other.echelon()
    }

    fn echelon(&self) -> Matrix {
        Matrix::from_rows(self.basis.clone())
            .expect("rectangular basis")
            .rref()
            .0
    }

    /// Coordinate labels (`t1`, `s2`, ...) when every basis vector is a basis
    /// element of the ambient space.
    pub fn coordinate_labels(&self) -> Option<Vec<String>> {
        self.basis
            .iter()
            .map(|v| {
                let mut nonzero = v.iter().enumerate().filter(|(_, x)| !x.is_zero());
                match (nonzero.next(), nonzero.next()) {
                    (Some((i, x)), None) if x.is_one() => Some(self.ambient.label(i)),
                    _ => None,
                }
            })
            .collect()
    }
}

/// `span{t1,s1}` for coordinate subspaces, `span{[1, 0, -2], ...}` otherwise.
impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(labels) = self.coordinate_labels() {
            return write!(f, "span{{{}}}", labels.join(","));
        }
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|v| {
                let entries: Vec<String> = v.iter().map(ToString::to_string).collect();
                format!("[{}]", entries.join(", "))
            })
            .collect();
        write!(f, "span{{{}}}", rows.join(", "))
    }
}

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same positive ray.
pub fn primitive(v: &[Rational]) -> Vector {
    let denom = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&denom / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

/// Span of `e_k-` for `k` in `timelike` and `e_k+` for `k` in `spacelike`
/// (1-based labels), in that order.
pub fn coordinate_subspace(
    sig: Signature,
    timelike: &[usize],
    spacelike: &[usize],
) -> Result<Subspace, GrassmannError> {
    let mut indices = Vec::with_capacity(timelike.len() + spacelike.len());
    for (labels, bound, prefix) in [(timelike, sig.p(), 't'), (spacelike, sig.q(), 's')] {
        for &k in labels {
            let label = format!("{prefix}{k}");
            if k == 0 || k > bound {
                return Err(GrassmannError::IndexOutOfRange { label });
            }
            let idx = if prefix == 't' {
                sig.timelike(k)
            } else {
                sig.spacelike(k)
            };
            if indices.contains(&idx) {
                return Err(GrassmannError::RepeatedIndex { label });
            }
            indices.push(idx);
        }
    }
    Subspace::new(sig, indices.into_iter().map(|i| sig.unit(i)).collect())
}

/// All coordinate subspaces of type `(r, s)` in lexicographic order of the
/// label sets, at most `cap` of them.
pub fn coordinate_subspaces_of_type(
    sig: Signature,
    target: AdmissiblePair,
    cap: usize,
) -> Vec<Subspace> {
    let timelike = combinations(sig.p(), target.r);
    let spacelike = combinations(sig.q(), target.s);
    let mut out = Vec::new();
    'outer: for t in &timelike {
        for s in &spacelike {
            if out.len() == cap {
                break 'outer;
            }
            out.push(coordinate_subspace(sig, t, s).expect("labels in range"));
        }
    }
    out
}

/// `k`-element subsets of `1..=n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// SplitMix64 finalizer.
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sample `index` in cell `(r, s)`: SplitMix64 folded over
/// `master, r, s, index`.
pub fn mix_seed(master: u64, r: usize, s: usize, index: usize) -> u64 {
    [r as u64, s as u64, index as u64]
        .iter()
        .fold(splitmix64(master), |h, &x| splitmix64(h ^ x))
}

fn check_type(sigma: &Subspace, target: AdmissiblePair) -> bool {
    let inertia = sigma.signature();
    inertia.null == 0 && inertia.neg == target.r && inertia.pos == target.s
}

/// Draws `r+s` vectors with integer entries uniform in `[-height, height]`
/// until they are independent and span a subspace of type `(r, s)`.
///
/// The generator is ChaCha8 seeded with `seed`, so equal arguments give equal
/// subspaces on every platform.
pub fn sample_subspace(
    sig: Signature,
    target: AdmissiblePair,
    seed: u64,
    height: u32,
    max_tries: usize,
) -> Result<Subspace, GrassmannError> {
    AdmissiblePair::new(sig, target.r, target.s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    box_tries(sig, target, &mut rng, height, max_tries).ok_or(GrassmannError::TriesExhausted {
        r: target.r,
        s: target.s,
        tries: max_tries,
    })
}

fn box_tries(
    sig: Signature,
    target: AdmissiblePair,
    rng: &mut ChaCha8Rng,
    height: u32,
    tries: usize,
) -> Option<Subspace> {
    let h = i64::from(height);
    let n = sig.dim();
    for _ in 0..tries {
        let raw: Vec<Vec<i64>> = (0..target.dim())
            .map(|_| (0..n).map(|_| rng.gen_range(-h..=h)).collect())
            .collect();
        match minor_inertia(sig, &raw) {
            Some((neg, pos)) if neg != target.r || pos != target.s => continue,
            _ => {}
        }
        let basis = raw
            .iter()
            .map(|v| {
                v.iter()
                    .map(|&x| Rational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        if let Ok(sigma) = Subspace::new(sig, basis) {
            if check_type(&sigma, target) {
                return Some(sigma);
            }
        }
    }
    None
}

/// `(neg, pos)` of the Gram matrix of integer vectors from the signs of its
/// leading principal minors, or `None` when a minor vanishes or `i128`
/// overflows and the exact rational path must decide.
fn minor_inertia(sig: Signature, vs: &[Vec<i64>]) -> Option<(usize, usize)> {
    let k = vs.len();
    let mut a = vec![vec![0i128; k]; k];
    for i in 0..k {
        for j in i..k {
            let mut acc = 0i128;
            for (c, (x, y)) in vs[i].iter().zip(&vs[j]).enumerate() {
                let term = i128::from(*x).checked_mul(i128::from(*y))?;
                acc = if sig.epsilon(c) < 0 {
                    acc.checked_sub(term)?
                } else {
                    acc.checked_add(term)?
                };
            }
            a[i][j] = acc;
            a[j][i] = acc;
        }
    }
    let (mut neg, mut prev) = (0, 1i128);
    for p in 0..k {
        let pivot = a[p][p];
        if pivot == 0 {
            return None;
        }
        if pivot.signum() != prev.signum() {
            neg += 1;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let v = pivot
                    .checked_mul(a[i][j])?
                    .checked_sub(a[i][p].checked_mul(a[p][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = pivot;
    }
    Some((neg, k - neg))
}

/// Moves the coordinate subspace `span{t1..tr, s1..ss}` by the Cayley
/// isometry `(I - K)^{-1}(I + K)`, where `K = eta S` and `S` is skew with
/// integer entries in `[-height, height]`.
///
/// Box sampling almost never produces maximal timelike or maximal spacelike
/// subspaces (the admissible region of the box is tiny), while isometries
/// preserve type, so this reaches every type with one draw.
pub fn sample_subspace_isometry(
    sig: Signature,
    target: AdmissiblePair,
    seed: u64,
    height: u32,
    max_tries: usize,
) -> Result<Subspace, GrassmannError> {
    AdmissiblePair::new(sig, target.r, target.s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    isometry_tries(sig, target, &mut rng, height, max_tries).ok_or(GrassmannError::TriesExhausted {
        r: target.r,
        s: target.s,
        tries: max_tries,
    })
}

fn isometry_tries(
    sig: Signature,
    target: AdmissiblePair,
    rng: &mut ChaCha8Rng,
    height: u32,
    tries: usize,
) -> Option<Subspace> {
    let h = i64::from(height.max(1));
    let n = sig.dim();
    let columns: Vec<usize> = (0..target.r).chain(sig.p()..sig.p() + target.s).collect();
    for _ in 0..tries {
        let mut k = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = Rational::from_integer(rng.gen_range(-h..=h).into());
                k[(i, j)] = if sig.epsilon(i) < 0 {
                    -v.clone()
                } else {
                    v.clone()
                };
                k[(j, i)] = if sig.epsilon(j) < 0 { v } else { -v };
            }
        }
        let id = Matrix::identity(n);
        let Ok(Some(inv)) = (&id - &k).inverse() else {
            continue;
        };
        let g = &inv * &(&id + &k);
        let basis = columns.iter().map(|&c| primitive(&g.column(c))).collect();
        if let Ok(sigma) = Subspace::new(sig, basis) {
            if check_type(&sigma, target) {
                return Some(sigma);
            }
        }
    }
    None
}

/// How random subspaces are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingStrategy {
    /// Integer box rejection only.
    Box,
    /// Cayley isometries applied to a coordinate subspace.
    Isometry,
    /// A short run of box rejection, then isometries.
    Auto,
}

/// Box tries spent by [`SamplingStrategy::Auto`] before switching.
pub const AUTO_BOX_TRIES: usize = 64;

/// Samples with the given strategy; every strategy is a pure function of
/// its arguments.
pub fn sample_with(
    sig: Signature,
    target: AdmissiblePair,
    seed: u64,
    height: u32,
    max_tries: usize,
    strategy: SamplingStrategy,
) -> Result<Subspace, GrassmannError> {
    match strategy {
        SamplingStrategy::Box => sample_subspace(sig, target, seed, height, max_tries),
        SamplingStrategy::Isometry => {
            sample_subspace_isometry(sig, target, seed, height, max_tries)
        }
        SamplingStrategy::Auto => {
            AdmissiblePair::new(sig, target.r, target.s)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            box_tries(sig, target, &mut rng, height, AUTO_BOX_TRIES.min(max_tries))
                .or_else(|| isometry_tries(sig, target, &mut rng, height, max_tries))
                .ok_or(GrassmannError::TriesExhausted {
                    r: target.r,
                    s: target.s,
                    tries: max_tries,
                })
        }
    }
}

/// Which coordinate construction produced a witness pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessCase {
    /// `2a < p` and `1 <= r <= p-1`.
    Subcritical,
    /// `2a = p`, `1 <= r <= p-1` and `1 <= s <= q-1`.
    Critical,
}

/// Two coordinate subspaces of one type whose `J_{Phi_a}` ranks differ by
/// `expected_rank_gap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPair {
    pub sigma1: Subspace,
    pub sigma2: Subspace,
    pub case: WitnessCase,
    /// Built on the sign-reversed space, with timelike and spacelike swapped.
    pub swapped: bool,
    pub expected_rank_gap: usize,
}

/// A coordinate label set: 1-based timelike and spacelike labels.
type Labels = (Vec<usize>, Vec<usize>);

/// Labels of the pair on a space whose timelike block has size `p`, or
/// `None` when neither construction applies.
fn direct_pair(
    p: usize,
    q: usize,
    a: usize,
    r: usize,
    s: usize,
) -> Option<(Labels, Labels, WitnessCase, usize)> {
    if r == 0 || r >= p {
        return None;
    }
    // tau = span{e2-..er-, e2+..es+}
    let tau_t: Vec<usize> = (2..=r).collect();
    let tau_s: Vec<usize> = (2..=s).collect();
    let with = |t: &[usize], sp: &[usize]| -> Labels {
        let mut lt = vec![];
        lt.extend_from_slice(t);
        lt.extend(&tau_t);
        let mut ls = vec![];
        ls.extend_from_slice(sp);
        ls.extend(&tau_s);
        (lt, ls)
    };
    if 2 * a < p {
        let (one, two) = if s >= 1 {
            (with(&[1], &[1]), with(&[p], &[1]))
        } else {
            (with(&[1], &[]), with(&[p], &[]))
        };
        return Some((one, two, WitnessCase::Subcritical, 1));
    }
    if 2 * a == p && s >= 1 && s < q {
        let one = with(&[1], &[1]);
        let (two, gap) = if r >= s {
            (with(&[r + 1], &[1]), 2)
        } else if s < p {
            (with(&[1], &[s + 1]), 2)
        } else {
            (with(&[1], &[s + 1]), 1)
        };
        return Some((one, two, WitnessCase::Critical, gap));
    }
    None
}

/// The coordinate witness pair for `R_{Phi_a}` at `target`, if one of the
/// two constructions applies directly or after reversing the sign of the
/// inner product (which exchanges timelike and spacelike labels).
pub fn witness_pair(
    sig: Signature,
    a: usize,
    target: AdmissiblePair,
) -> Result<Option<WitnessPair>, GrassmannError> {
    if a == 0 || 2 * a > sig.p().min(sig.q()) {
        return Err(GrassmannError::InvalidA {
            a,
            p: sig.p(),
            q: sig.q(),
        });
    }
    let target = AdmissiblePair::new(sig, target.r, target.s)?;
    let (p, q, r, s) = (sig.p(), sig.q(), target.r, target.s);
    let build = |(t, sp): &Labels, swapped: bool| {
        if swapped {
            coordinate_subspace(sig, sp, t)
        } else {
            coordinate_subspace(sig, t, sp)
        }
    };
    for swapped in [false, true] {
        let found = if swapped {
            direct_pair(q, p, a, s, r)
        } else {
            direct_pair(p, q, a, r, s)
        };
        if let Some((one, two, case, gap)) = found {
            return Ok(Some(WitnessPair {
                sigma1: build(&one, swapped)?,
                sigma2: build(&two, swapped)?,
                case,
                swapped,
                expected_rank_gap: gap,
            }));
        }
    }
    Ok(None)
}
