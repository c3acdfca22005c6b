//! Osserman and Jordan Osserman verdicts per Grassmannian type, the duality
//! identity `J(sigma) + J(sigma^perp) = c Id`, and grid reports.
//!
//! A refutation is a certificate: two subspaces of one type whose Jacobi
//! operators have different fingerprints. Consistency only means that no
//! difference turned up among the subspaces examined.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::{einstein_constant, AlgebraicCurvatureTensor, NotEinstein, Signature};
use crate::grassmann::{
    coordinate_subspaces_of_type, mix_seed, sample_with, witness_pair, AdmissiblePair,
    GrassmannError, SamplingStrategy, Subspace, DEFAULT_HEIGHT, DEFAULT_MAX_TRIES,
};
use crate::jacobi::{jacobi_subspace, JacobiError};
use crate::linalg::{
    jordan_fingerprint_with_char_poly, JordanFingerprint, Matrix, Polynomial, Rational,
};

pub const DEFAULT_SAMPLES: usize = 50;
/// Coordinate subspaces examined per type before random samples.
pub const DEFAULT_COORDINATE_CAP: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OssermanError {
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    NotEinstein(Box<NotEinstein>),
    #[error("{0}")]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error("a={a} is invalid on ({p},{q}): need 1 <= a and 2a <= min(p,q)")]
    InvalidA { a: usize, p: usize, q: usize },
}

impl From<NotEinstein> for OssermanError {
    fn from(e: NotEinstein) -> Self {
        OssermanError::NotEinstein(Box::new(e))
    }
}

/// Which property a verdict is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Constant characteristic polynomial.
    Osserman,
    /// Constant Jordan normal form.
    Jordan,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Osserman => "osserman",
            Mode::Jordan => "jordan",
        })
    }
}

/// The invariant compared across a Grassmannian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fingerprint {
    Spectral(Polynomial),
    Jordan(JordanFingerprint),
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fingerprint::Spectral(p) => f.write_str(&p.display_with("λ")),
            Fingerprint::Jordan(j) => write!(f, "{j}"),
        }
    }
}

/// Characteristic polynomial of `J(sigma)`.
pub fn spectral_fingerprint(
    r: &AlgebraicCurvatureTensor,
    sigma: &Subspace,
) -> Result<Polynomial, OssermanError> {
    Ok(jacobi_subspace(r, sigma)?.matrix().char_poly()?)
}

/// Jordan fingerprint of `J(sigma)`.
pub fn jordan_fingerprint_of(
    r: &AlgebraicCurvatureTensor,
    sigma: &Subspace,
) -> Result<JordanFingerprint, OssermanError> {
    let j = jacobi_subspace(r, sigma)?.into_matrix();
    let chi = j.char_poly()?;
    Ok(jordan_fingerprint_with_char_poly(&j, &chi)?)
}

/// Fingerprint of `J(sigma)` in the given mode.
pub fn fingerprint(
    r: &AlgebraicCurvatureTensor,
    sigma: &Subspace,
    mode: Mode,
) -> Result<Fingerprint, OssermanError> {
    Ok(match mode {
        Mode::Osserman => Fingerprint::Spectral(spectral_fingerprint(r, sigma)?),
        Mode::Jordan => Fingerprint::Jordan(jordan_fingerprint_of(r, sigma)?),
    })
}

/// Where an examined subspace came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SubspaceOrigin {
    WitnessFirst,
    WitnessSecond,
    Coordinate { index: usize },
    Sample { index: usize, seed: u64 },
}

impl fmt::Display for SubspaceOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubspaceOrigin::WitnessFirst => f.write_str("witness sigma1"),
            SubspaceOrigin::WitnessSecond => f.write_str("witness sigma2"),
            SubspaceOrigin::Coordinate { index } => write!(f, "coordinate #{index}"),
            SubspaceOrigin::Sample { index, seed } => write!(f, "sample #{index} (seed {seed})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    /// Two subspaces of the type with different fingerprints were found.
    RefutedWithWitness,
    /// Every examined subspace had the same fingerprint; not a proof.
    ConsistentAfterNSamples,
    /// The tensor is a multiple of `R_Id`, for which `J(sigma) = c (k Id - pi_sigma)`
    /// is diagonalizable with spectrum fixed by the type.
    CertifiedByIdentity,
}

impl VerdictKind {
    pub fn is_refuted(&self) -> bool {
        *self == VerdictKind::RefutedWithWitness
    }
}

/// Two subspaces of one type with different fingerprints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub sigma1: Subspace,
    pub sigma2: Subspace,
    pub origin1: SubspaceOrigin,
    pub origin2: SubspaceOrigin,
    pub fingerprint1: Fingerprint,
    pub fingerprint2: Fingerprint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub mode: Mode,
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
    /// Subspaces whose fingerprints were compared (witness, coordinate and
    /// random ones together).
    pub samples_used: usize,
    /// The common fingerprint when not refuted.
    pub fingerprint: Option<Fingerprint>,
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        self.kind.is_refuted()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VerdictKind::RefutedWithWitness => {
                let w = self.witness.as_ref().expect("refutations carry witnesses");
                write!(
                    f,
                    "refuted: {} [{}] -> {} vs {} [{}] -> {}",
                    w.sigma1, w.origin1, w.fingerprint1, w.sigma2, w.origin2, w.fingerprint2
                )
            }
            VerdictKind::ConsistentAfterNSamples => {
                write!(
                    f,
                    "consistent (not a proof) after {} subspaces",
                    self.samples_used
                )
            }
            VerdictKind::CertifiedByIdentity => write!(f, "certified: multiple of R_Id"),
        }
    }
}

/// Knobs of a scan; equal configurations give identical verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub samples: usize,
    pub seed: u64,
    pub height: u32,
    pub max_tries: usize,
    pub coordinate_cap: usize,
    pub strategy: SamplingStrategy,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            samples: DEFAULT_SAMPLES,
            seed: 1,
            height: DEFAULT_HEIGHT,
            max_tries: DEFAULT_MAX_TRIES,
            coordinate_cap: DEFAULT_COORDINATE_CAP,
            strategy: SamplingStrategy::Auto,
        }
    }
}

/// Running comparison for one mode.
struct Tracker {
    mode: Mode,
    first: Option<(Subspace, SubspaceOrigin, Fingerprint)>,
    witness: Option<Witness>,
    seen: usize,
}

impl Tracker {
    fn new(mode: Mode) -> Self {
        Tracker {
            mode,
            first: None,
            witness: None,
            seen: 0,
        }
    }

    fn done(&self) -> bool {
        self.witness.is_some()
    }

    fn observe(&mut self, sigma: &Subspace, origin: SubspaceOrigin, fp: Fingerprint) {
        self.seen += 1;
        match &self.first {
            None => self.first = Some((sigma.clone(), origin, fp)),
            Some((s1, o1, f1)) if *f1 != fp => {
                self.witness = Some(Witness {
                    sigma1: s1.clone(),
                    sigma2: sigma.clone(),
                    origin1: *o1,
                    origin2: origin,
                    fingerprint1: f1.clone(),
                    fingerprint2: fp,
                });
            }
            Some(_) => {}
        }
    }

    fn verdict(self, certified: bool) -> Verdict {
        let (kind, fingerprint) = match (&self.witness, self.first) {
            (Some(_), _) => (VerdictKind::RefutedWithWitness, None),
            (None, first) => (
                if certified {
                    VerdictKind::CertifiedByIdentity
                } else {
                    VerdictKind::ConsistentAfterNSamples
                },
                first.map(|(_, _, f)| f),
            ),
        };
        Verdict {
            mode: self.mode,
            kind,
            witness: self.witness,
            samples_used: self.seen,
            fingerprint,
        }
    }
}

/// Verdicts of both modes for one type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellVerdicts {
    pub osserman: Verdict,
    pub jordan: Verdict,
}

/// Subspaces examined for a type, in order: the coordinate witness pair
/// (for the `R_{Phi_a}` family), coordinate subspaces up to the cap, then
/// seeded random samples.
fn evaluate(
    r: &AlgebraicCurvatureTensor,
    target: AdmissiblePair,
    modes: &[Mode],
    config: &ScanConfig,
) -> Result<Vec<Verdict>, OssermanError> {
    let sig = r.signature();
    let target = AdmissiblePair::new(sig, target.r, target.s)?;
    let mut trackers: Vec<Tracker> = modes.iter().map(|&m| Tracker::new(m)).collect();
    let mut visit = |sigma: &Subspace, origin: SubspaceOrigin| -> Result<bool, OssermanError> {
        let j = jacobi_subspace(r, sigma)?.into_matrix();
        let chi = j.char_poly()?;
        let mut jordan = None;
        for t in trackers.iter_mut().filter(|t| !t.done()) {
            let fp = match t.mode {
                Mode::Osserman => Fingerprint::Spectral(chi.clone()),
                Mode::Jordan => {
                    if jordan.is_none() {
                        jordan = Some(jordan_fingerprint_with_char_poly(&j, &chi)?);
                    }
                    Fingerprint::Jordan(jordan.clone().expect("just computed"))
                }
            };
            t.observe(sigma, origin, fp);
        }
        Ok(trackers.iter().all(Tracker::done))
    };

    let mut finished = false;
    if let Some(a) = r.phi_a_parameter() {
        if let Some(w) = witness_pair(sig, a, target)? {
            finished = visit(&w.sigma1, SubspaceOrigin::WitnessFirst)?
                || visit(&w.sigma2, SubspaceOrigin::WitnessSecond)?;
        }
    }
    if !finished {
        for (index, sigma) in coordinate_subspaces_of_type(sig, target, config.coordinate_cap)
            .iter()
            .enumerate()
        {
            if visit(sigma, SubspaceOrigin::Coordinate { index })? {
                finished = true;
                break;
            }
        }
    }
    if !finished {
        for index in 0..config.samples {
            let seed = mix_seed(config.seed, target.r, target.s, index);
            let sigma = sample_with(
                sig,
                target,
                seed,
                config.height,
                config.max_tries,
                config.strategy,
            )?;
            if visit(&sigma, SubspaceOrigin::Sample { index, seed })? {
                break;
            }
        }
    }
    let certified = r.constant_sectional_multiple().is_some();
    Ok(trackers.into_iter().map(|t| t.verdict(certified)).collect())
}

/// Verdict for one type and mode.
pub fn test_type(
    r: &AlgebraicCurvatureTensor,
    target: AdmissiblePair,
    mode: Mode,
    config: &ScanConfig,
) -> Result<Verdict, OssermanError> {
    Ok(evaluate(r, target, &[mode], config)?.remove(0))
}

/// Both verdicts for one type, computing each Jacobi operator once; equal to
/// running [`test_type`] per mode.
pub fn test_cell(
    r: &AlgebraicCurvatureTensor,
    target: AdmissiblePair,
    config: &ScanConfig,
) -> Result<CellVerdicts, OssermanError> {
    let mut v = evaluate(r, target, &[Mode::Osserman, Mode::Jordan], config)?;
    let jordan = v.pop().expect("two modes");
    let osserman = v.pop().expect("two modes");
    Ok(CellVerdicts { osserman, jordan })
}

/// Outcome of checking `J(sigma) + J(sigma^perp) = c Id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityOutcome {
    pub complement: Subspace,
    /// `J(sigma) + J(sigma^perp) - c Id`.
    pub defect: Matrix,
}

impl DualityOutcome {
    pub fn passed(&self) -> bool {
        self.defect.is_zero()
    }
}

/// Computes the defect of `J(sigma) + J(sigma^perp) = c Id`.
pub fn duality_check(
    r: &AlgebraicCurvatureTensor,
    sigma: &Subspace,
    c: &Rational,
) -> Result<DualityOutcome, OssermanError> {
    let complement = sigma.orthogonal_complement()?;
    let sum = jacobi_subspace(r, sigma)?.matrix() + jacobi_subspace(r, &complement)?.matrix();
    let n = r.signature().dim();
    let defect = &sum - &Matrix::scalar(n, c);
    Ok(DualityOutcome { complement, defect })
}

/// [`duality_check`] with `c` taken from the Einstein constant of `r`.
pub fn duality_check_einstein(
    r: &AlgebraicCurvatureTensor,
    sigma: &Subspace,
) -> Result<(Rational, DualityOutcome), OssermanError> {
    let c = einstein_constant(r)?;
    let outcome = duality_check(r, sigma, &c)?;
    Ok((c, outcome))
}

/// A cell of the grid pictures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mark {
    /// Jordan Osserman of this type.
    Star,
    /// Not Jordan Osserman of this type.
    Circle,
    /// `(0,0)` or `(p,q)`.
    Inadmissible,
}

impl Mark {
    pub fn symbol(&self, ascii: bool) -> char {
        match (self, ascii) {
            (Mark::Star, false) => '★',
            (Mark::Circle, false) => '○',
            (Mark::Inadmissible, false) => '−',
            (Mark::Star, true) => '*',
            (Mark::Circle, true) => 'o',
            (Mark::Inadmissible, true) => '-',
        }
    }
}

/// Marks indexed by `(r, s)` for `0 <= r <= p`, `0 <= s <= q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkGrid {
    pub signature: Signature,
    marks: Vec<Vec<Mark>>,
}

impl MarkGrid {
    fn from_fn(signature: Signature, f: impl Fn(usize, usize) -> Mark) -> Self {
        let marks = (0..=signature.p())
            .map(|r| (0..=signature.q()).map(|s| f(r, s)).collect())
            .collect();
        MarkGrid { signature, marks }
    }

    pub fn get(&self, r: usize, s: usize) -> Mark {
        self.marks[r][s]
    }

    /// Cells where the two grids disagree.
    pub fn differences(&self, other: &MarkGrid) -> Vec<(usize, usize, Mark, Mark)> {
        let mut out = Vec::new();
        for r in 0..=self.signature.p() {
            for s in 0..=self.signature.q() {
                let (a, b) = (self.get(r, s), other.get(r, s));
                if a != b {
                    out.push((r, s, a, b));
                }
            }
        }
        out
    }

    /// Rows from `s = q` down to `s = 0`, `r` increasing to the right.
    pub fn render(&self, ascii: bool) -> String {
        let mut out = String::new();
        for s in (0..=self.signature.q()).rev() {
            let row: Vec<String> = (0..=self.signature.p())
                .map(|r| self.get(r, s).symbol(ascii).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn is_corner(sig: Signature, r: usize, s: usize) -> bool {
    (r, s) == (0, 0) || (r, s) == (sig.p(), sig.q())
}

/// The Jordan Osserman picture predicted for `R_{Phi_a}`.
///
/// For `p <= q`: with `2a < p` only `(p,0)` and `(0,q)` are starred; with
/// `2a = p < q` the edges `s = 0` and `s = q` are starred; with `2a = p = q`
/// the whole boundary is. For `p > q` the picture of `(q,p)` is transposed.
pub fn expected_grid(sig: Signature, a: usize) -> Result<MarkGrid, OssermanError> {
    let (p, q) = (sig.p(), sig.q());
    if a == 0 || 2 * a > p.min(q) {
        return Err(OssermanError::InvalidA { a, p, q });
    }
    if p > q {
        let t = expected_grid(sig.reversed(), a)?;
        return Ok(MarkGrid::from_fn(sig, |r, s| t.get(s, r)));
    }
    Ok(MarkGrid::from_fn(sig, |r, s| {
        if is_corner(sig, r, s) {
            return Mark::Inadmissible;
        }
        let star = if 2 * a < p {
            (r, s) == (p, 0) || (r, s) == (0, q)
        } else if p < q {
            s == 0 || s == q
        } else {
            r == 0 || r == p || s == 0 || s == q
        };
        if star {
            Mark::Star
        } else {
            Mark::Circle
        }
    }))
}

/// Verdicts for every admissible type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridReport {
    pub signature: Signature,
    pub tensor: String,
    pub config: ScanConfig,
    pub cells: BTreeMap<AdmissiblePair, CellVerdicts>,
}

impl GridReport {
    /// Star where the Jordan verdict is not refuted.
    pub fn jordan_marks(&self) -> MarkGrid {
        MarkGrid::from_fn(self.signature, |r, s| {
            match self.cells.get(&AdmissiblePair { r, s }) {
                None => Mark::Inadmissible,
                Some(c) if c.jordan.is_refuted() => Mark::Circle,
                Some(_) => Mark::Star,
            }
        })
    }

    /// Star where the Osserman verdict is not refuted.
    pub fn osserman_marks(&self) -> MarkGrid {
        MarkGrid::from_fn(self.signature, |r, s| {
            match self.cells.get(&AdmissiblePair { r, s }) {
                None => Mark::Inadmissible,
                Some(c) if c.osserman.is_refuted() => Mark::Circle,
                Some(_) => Mark::Star,
            }
        })
    }
}

/// Both verdicts for every admissible type.
pub fn grid_scan(
    r: &AlgebraicCurvatureTensor,
    config: &ScanConfig,
) -> Result<GridReport, OssermanError> {
    let sig = r.signature();
    let mut cells = BTreeMap::new();
    for target in AdmissiblePair::all(sig) {
        cells.insert(target, test_cell(r, target, config)?);
    }
    Ok(GridReport {
        signature: sig,
        tensor: r.description(),
        config: *config,
        cells,
    })
}
