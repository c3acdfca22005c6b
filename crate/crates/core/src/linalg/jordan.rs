use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::factor::factor_over_q;
use super::matrix::{integer_rank, Matrix};
use super::poly::Polynomial;
use super::rational::Rational;
use super::LinalgError;

/// Jordan block sizes for one eigenvalue, sorted descending.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// `size^count` blocks, e.g. `from_counts(&[(2, 3), (1, 2)])` is `2^3 1^2`.
    pub fn from_counts(counts: &[(usize, usize)]) -> Self {
        Self::new(
            counts
                .iter()
                .flat_map(|&(size, count)| std::iter::repeat_n(size, count))
                .collect(),
        )
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Renders as `2^2 1^3`; the empty partition renders as `()`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match groups.last_mut() {
                Some((size, count)) if *size == p => *count += 1,
                _ => groups.push((p, 1)),
            }
        }
        let text: Vec<String> = groups
            .iter()
            .map(|&(size, count)| {
                if count == 1 {
                    size.to_string()
                } else {
                    format!("{size}^{count}")
                }
            })
            .collect();
        f.write_str(&text.join(" "))
    }
}

/// Conjugacy-class invariant of a rational matrix.
///
/// Rational eigenvalues carry their Jordan partitions. Every irreducible
/// factor `f` of the characteristic polynomial of degree at least two carries
/// the rank sequence of `f(A)^k`, which fixes the block sizes at each of the
/// conjugate roots of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanFingerprint {
    pub dimension: usize,
    pub rational_part: BTreeMap<Rational, Partition>,
    pub irreducible_part: BTreeMap<Polynomial, Vec<usize>>,
}

impl JordanFingerprint {
    /// Dimension accounted for by the parts, which always equals `dimension`.
    pub fn accounted_dimension(&self) -> usize {
        let rational: usize = self.rational_part.values().map(Partition::total).sum();
        // nullity of f(A)^k stabilizes at deg(f) * multiplicity
        let irreducible: usize = self
            .irreducible_part
            .values()
            .map(|ranks| ranks[0] - ranks.last().copied().unwrap_or(0))
            .sum();
        rational + irreducible
    }

    pub fn is_diagonalizable_over_q(&self) -> bool {
        self.irreducible_part.is_empty()
            && self
                .rational_part
                .values()
                .all(|p| p.parts().iter().all(|&b| b == 1))
    }
}

impl fmt::Display for JordanFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self
            .rational_part
            .iter()
            .map(|(ev, part)| format!("{ev} -> {part}"))
            .collect();
        items.extend(self.irreducible_part.iter().map(|(poly, ranks)| {
            let r: Vec<String> = ranks.iter().map(ToString::to_string).collect();
            format!("[{poly}] -> ranks {}", r.join(","))
        }));
        write!(f, "{{{}}}", items.join("; "))
    }
}

fn rank_sequence_of(m: &Matrix) -> Vec<usize> {
    let n = m.rows();
    let base = m.integer_scaled();
    let mut seq = vec![n];
    let mut power = base.clone();
    loop {
        let r = integer_rank(power.clone());
        let prev = *seq.last().expect("non-empty");
        seq.push(r);
        if r == 0 || r == prev {
            return seq;
        }
        power = integer_product(&power, &base);
    }
}

/// `a * b` divided by the gcd of its entries; rank is unaffected.
fn integer_product(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = b.first().map_or(0, Vec::len);
    let mut out: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .map(|(x, brow)| x * &brow[j])
                        .sum()
                })
                .collect()
        })
        .collect();
    let g = out.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in out.iter_mut().flatten() {
            *x /= &g;
        }
    }
    out
}

/// `[rank(A^0), rank(A^1), ...]`, stopping at the first repeated value or at
/// zero. The first entry is the dimension.
pub fn rank_sequence(m: &Matrix) -> Result<Vec<usize>, LinalgError> {
    m.require_square()?;
    Ok(rank_sequence_of(m))
}

fn partition_from_ranks(ranks: &[usize]) -> Partition {
    // ranks stabilize; r_{k+1} past the end equals the last value
    let r = |k: usize| {
        ranks
            .get(k)
            .copied()
            .unwrap_or(*ranks.last().expect("non-empty"))
    };
    let mut counts = Vec::new();
    for k in 1..ranks.len() {
        let exactly = r(k - 1) + r(k + 1) - 2 * r(k);
        if exactly > 0 {
            counts.push((k, exactly));
        }
    }
    Partition::from_counts(&counts)
}

/// Jordan block sizes of `A` at `lambda`; empty when `lambda` is not an
/// eigenvalue. Uses `#blocks of size k = r_{k-1} - 2 r_k + r_{k+1}` with
/// `r_k = rank((A - lambda)^k)`.
pub fn jordan_partition_at(m: &Matrix, lambda: &Rational) -> Result<Partition, LinalgError> {
    let n = m.require_square()?;
    let shifted = m - &Matrix::scalar(n, lambda);
    Ok(partition_from_ranks(&rank_sequence_of(&shifted)))
}

/// Complete conjugacy invariant: two rational matrices have equal
/// fingerprints iff they are similar.
pub fn jordan_fingerprint(m: &Matrix) -> Result<JordanFingerprint, LinalgError> {
    let chi = m.char_poly()?;
    jordan_fingerprint_with_char_poly(m, &chi)
}

/// [`jordan_fingerprint`] reusing an already computed characteristic
/// polynomial of `m`.
pub fn jordan_fingerprint_with_char_poly(
    m: &Matrix,
    chi: &Polynomial,
) -> Result<JordanFingerprint, LinalgError> {
    let n = m.require_square()?;
    if chi.degree() != Some(n) {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: chi.degree().unwrap_or(0),
        });
    }
    let mut rational_part = BTreeMap::new();
    let mut irreducible_part = BTreeMap::new();
    for (factor, _mult) in factor_over_q(chi) {
        if factor.degree() == Some(1) {
            let root = -factor.coeff(0);
            let part = jordan_partition_at(m, &root)?;
            rational_part.insert(root, part);
        } else {
            let at = factor.eval_matrix(m);
            irreducible_part.insert(factor, rank_sequence_of(&at));
        }
    }
    Ok(JordanFingerprint {
        dimension: n,
        rational_part,
        irreducible_part,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn nilpotent_block(n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if j == i + 1 { rat(1, 1) } else { rat(0, 1) })
    }

    #[test]
    fn rank_sequences() {
        assert_eq!(
            rank_sequence(&nilpotent_block(3)).unwrap(),
            vec![3, 2, 1, 0]
        );
        assert_eq!(rank_sequence(&Matrix::identity(4)).unwrap(), vec![4, 4]);
        assert_eq!(rank_sequence(&Matrix::zeros(3, 3)).unwrap(), vec![3, 0]);
        assert!(rank_sequence(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn partitions_at_eigenvalues() {
        let id = Matrix::identity(3);
        assert_eq!(
            jordan_partition_at(&id, &rat(1, 1)).unwrap(),
            Partition::new(vec![1, 1, 1])
        );
        assert!(jordan_partition_at(&id, &rat(0, 1)).unwrap().is_empty());
        assert_eq!(
            jordan_partition_at(&nilpotent_block(4), &rat(0, 1)).unwrap(),
            Partition::new(vec![4])
        );
    }

    #[test]
    fn fingerprint_of_scalar() {
        let c = rat(5, 2);
        let fp = jordan_fingerprint(&Matrix::scalar(3, &c)).unwrap();
        assert_eq!(fp.rational_part.len(), 1);
        assert_eq!(fp.rational_part[&c], Partition::new(vec![1, 1, 1]));
        assert!(fp.irreducible_part.is_empty());
        assert_eq!(fp.accounted_dimension(), 3);
    }

    #[test]
    fn fingerprint_of_rotation() {
        let rot = Matrix::from_i64(2, 2, &[0, -1, 1, 0]);
        let fp = jordan_fingerprint(&rot).unwrap();
        assert!(fp.rational_part.is_empty());
        assert_eq!(fp.irreducible_part.len(), 1);
        assert_eq!(
            fp.irreducible_part[&Polynomial::from_i64(&[1, 0, 1])],
            vec![2, 0]
        );
        assert_eq!(fp.accounted_dimension(), 2);
    }

    #[test]
    fn partition_display() {
        assert_eq!(
            Partition::from_counts(&[(2, 2), (1, 3)]).to_string(),
            "2^2 1^3"
        );
        assert_eq!(Partition::new(vec![3]).to_string(), "3");
        assert_eq!(Partition::default().to_string(), "()");
    }
}
