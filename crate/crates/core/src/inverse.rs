//! Inverse construction: from a prescribed equally spaced spectrum and a
//! prescribed overlap profile `|<0|e_m>|^2`, build a star model whose
//! initial state `|0>` has exactly those overlaps.
//!
//! Working in the eigenbasis of the target Hamiltonian (where it is the
//! diagonal matrix of target energies):
//!
//! 1. `|0>` gets the real positive components `sqrt(w_m)`.
//! 2. Gram-Schmidt on `(|0>, e_-M, .., e_-1, e_1, .., e_M)`, starting from
//!    `|0>`, gives an orthonormal basis whose first vector is `|0>`.
//! 3. The Hamiltonian restricted to the complement of `|0>` is diagonalized;
//!    its eigenvectors become the modes and its eigenvalues the mode energies.
//! 4. In the basis `(|0>, modes)` the Hamiltonian is an arrowhead; each mode
//!    is rephased so that its coupling is real and non-negative.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::cluster_ranges;
use crate::error::{Error, Result};
use crate::hermitian::{eigh, ComplexMatrix, HermitianMatrix};
use crate::model::{build_hamiltonian, StarModel};
use crate::scalar::{Complex, Real};

/// Target spectrum `E_m = eps0 + (m / M) D`, `m = -M..M`, and the overlaps
/// `|<0|e_m>|^2` listed in the same order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "ProfileJson<T>",
    into = "ProfileJson<T>",
    bound = "T: Real"
)]
pub struct SpectralProfile<T> {
    m_half: usize,
    eps0: T,
    d_width: T,
    overlaps: Vec<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct ProfileJson<T> {
    m_half: usize,
    eps0: T,
    d_width: T,
    overlaps: Vec<T>,
}

impl<T: Real> TryFrom<ProfileJson<T>> for SpectralProfile<T> {
    type Error = Error;

    fn try_from(j: ProfileJson<T>) -> Result<Self> {
        SpectralProfile::new(j.m_half, j.eps0, j.d_width, j.overlaps)
    }
}

impl<T: Real> From<SpectralProfile<T>> for ProfileJson<T> {
    fn from(p: SpectralProfile<T>) -> Self {
        Self {
            m_half: p.m_half,
            eps0: p.eps0,
            d_width: p.d_width,
            overlaps: p.overlaps,
        }
    }
}

fn check_spectrum_params<T: Real>(m_half: usize, eps0: T, d_width: T) -> Result<()> {
    if m_half == 0 {
        return Err(Error::InvalidProfile("m_half must be at least 1".into()));
    }
    if !eps0.is_finite() {
        return Err(Error::InvalidProfile("eps0 must be finite".into()));
    }
    if !(d_width > T::zero() && d_width.is_finite()) {
        return Err(Error::InvalidProfile(format!(
            "d_width must be positive and finite, got {d_width}"
        )));
    }
    Ok(())
}

impl<T: Real> SpectralProfile<T> {
    pub fn new(m_half: usize, eps0: T, d_width: T, overlaps: Vec<T>) -> Result<Self> {
        check_spectrum_params(m_half, eps0, d_width)?;
        let dim = 2 * m_half + 1;
        if overlaps.len() != dim {
            return Err(Error::InvalidProfile(format!(
                "expected {dim} overlaps for m_half = {m_half}, got {}",
                overlaps.len()
            )));
        }
        if let Some(i) = overlaps.iter().position(|w| !w.is_finite()) {
            return Err(Error::InvalidProfile(format!("overlap {i} is not finite")));
        }
        if let Some(i) = overlaps.iter().position(|w| *w <= T::zero()) {
            return Err(Error::DegenerateProfile(format!(
                "overlap at m = {} is {}, every overlap must be strictly positive",
                i as i64 - m_half as i64,
                overlaps[i]
            )));
        }
        let sum = overlaps.iter().fold(T::zero(), |a, &w| a + w);
        if (sum - T::one()).abs() > T::normalization_tolerance() {
            return Err(Error::InvalidProfile(format!(
                "overlaps sum to {sum}, expected 1"
            )));
        }
        Ok(Self {
            m_half,
            eps0,
            d_width,
            overlaps,
        })
    }

    pub fn m_half(&self) -> usize {
        self.m_half
    }

    pub fn eps0(&self) -> T {
        self.eps0
    }

    pub fn d_width(&self) -> T {
        self.d_width
    }

    /// `2M + 1`.
    pub fn dim(&self) -> usize {
        self.overlaps.len()
    }

    /// Overlaps ordered `m = -M..M`.
    pub fn overlaps(&self) -> &[T] {
        &self.overlaps
    }

    /// Overlap at signed index `m`.
    pub fn overlap(&self, m: i64) -> T {
        self.overlaps[(m + self.m_half as i64) as usize]
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        equally_spaced_spectrum(self.m_half, self.eps0, self.d_width)
    }

    /// Largest `|w_m - w_-m|`.
    pub fn asymmetry(&self) -> T {
        (1..=self.m_half as i64).fold(T::zero(), |acc, m| {
            acc.max((self.overlap(m) - self.overlap(-m)).abs())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    /// Malformed JSON is a [`Error::Parse`]; well-formed but invalid
    /// parameters keep their own validation error.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: ProfileJson<T> =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::try_from(raw)
    }
}

/// `eps0 + (m / M) D` for `m = -M..M`, ascending.
pub fn equally_spaced_spectrum<T: Real>(m_half: usize, eps0: T, d_width: T) -> Vec<T> {
    assert!(m_half >= 1, "m_half must be at least 1");
    let mh = T::from_usize(m_half).unwrap();
    (-(m_half as i64)..=m_half as i64)
        .map(|m| {
            if m == 0 {
                eps0
            } else {
                eps0 + T::from_i64(m).unwrap() / mh * d_width
            }
        })
        .collect()
}

/// Every overlap equal to `1 / (2M + 1)`.
pub fn flat_profile<T: Real>(m_half: usize, eps0: T, d_width: T) -> Result<SpectralProfile<T>> {
    check_spectrum_params(m_half, eps0, d_width)?;
    let dim = 2 * m_half + 1;
    let w = T::one() / T::from_usize(dim).unwrap();
    SpectralProfile::new(m_half, eps0, d_width, vec![w; dim])
}

/// Symmetric profile with weights drawn uniformly from `(0, 1]` for
/// `m = 0..M`, mirrored to negative `m` and normalized.
pub fn random_symmetric_profile<T: Real, R: Rng + ?Sized>(
    m_half: usize,
    eps0: T,
    d_width: T,
    rng: &mut R,
) -> Result<SpectralProfile<T>> {
    check_spectrum_params(m_half, eps0, d_width)?;
    let half: Vec<f64> = (0..=m_half).map(|_| 1.0 - rng.gen::<f64>()).collect();
    let raw: Vec<f64> = (-(m_half as i64)..=m_half as i64)
        .map(|m| half[m.unsigned_abs() as usize])
        .collect();
    normalized_profile(m_half, eps0, d_width, &raw)
}

/// Profile with independent weights for every `m`, drawn from `(0, 1]` and normalized.
pub fn random_profile<T: Real, R: Rng + ?Sized>(
    m_half: usize,
    eps0: T,
    d_width: T,
    rng: &mut R,
) -> Result<SpectralProfile<T>> {
    check_spectrum_params(m_half, eps0, d_width)?;
    let raw: Vec<f64> = (0..2 * m_half + 1)
        .map(|_| 1.0 - rng.gen::<f64>())
        .collect();
    normalized_profile(m_half, eps0, d_width, &raw)
}

fn normalized_profile<T: Real>(
    m_half: usize,
    eps0: T,
    d_width: T,
    raw: &[f64],
) -> Result<SpectralProfile<T>> {
    let total: f64 = raw.iter().sum();
    SpectralProfile::new(
        m_half,
        eps0,
        d_width,
        raw.iter().map(|w| T::lit(w / total)).collect(),
    )
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Fails with [`Error::DegenerateProfile`] when a residual norm drops below
/// the breakdown tolerance.
fn orthonormalize<T: Real>(vectors: Vec<Vec<T>>) -> Result<Vec<Vec<T>>> {
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(vectors.len());
    for (idx, mut v) in vectors.into_iter().enumerate() {
        for _pass in 0..2 {
            for q in &basis {
                let proj = dot(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * *y;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if !(norm >= T::breakdown_tolerance()) {
            return Err(Error::DegenerateProfile(format!(
                "Gram-Schmidt breakdown at vector {idx} (residual norm {:e})",
                norm.as_f64()
            )));
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        basis.push(v);
    }
    Ok(basis)
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

/// Builds a star model realizing the profile; see the module docs.
///
/// Modes are ordered by descending coupling (compared at ten significant
/// digits), ties broken by ascending energy.
pub fn construct_hamiltonian<T: Real>(p: &SpectralProfile<T>) -> Result<StarModel<T>> {
    let n = p.dim();
    let energies = p.eigenvalues();

    let initial: Vec<T> = p.overlaps.iter().map(|w| w.sqrt()).collect();
    let mut seq = Vec::with_capacity(n);
    seq.push(initial);
    for j in (0..n).filter(|&j| j != p.m_half) {
        let mut e = vec![T::zero(); n];
        e[j] = T::one();
        seq.push(e);
    }
    let basis = orthonormalize(seq)?;

    // Hamiltonian in the orthonormal basis: B^T diag(E) B
    let h_in_basis = |i: usize, j: usize| -> T {
        basis[i]
            .iter()
            .zip(&basis[j])
            .zip(&energies)
            .fold(T::zero(), |acc, ((a, b), e)| acc + *a * *b * *e)
    };
    let dim_red = n - 1;
    let h00 = h_in_basis(0, 0);
    let coupling: Vec<T> = (1..n).map(|i| h_in_basis(i, 0)).collect();
    let reduced = HermitianMatrix::new(ComplexMatrix::from_fn(dim_red, |i, j| {
        Complex::new(h_in_basis(i + 1, j + 1), T::zero())
    }))?;
    let red = eigh(&reduced)?;
    let w = red.eigenvectors();

    let mut modes: Vec<(T, T)> = (0..dim_red)
        .map(|k| {
            let alpha = (0..dim_red).fold(Complex::<T>::zero(), |acc, j| {
                acc + w[(j, k)].conj() * coupling[j]
            });
            (alpha.norm(), red.eigenvalues()[k])
        })
        .collect();

    let alpha_max = modes.iter().fold(T::zero(), |acc, m| acc.max(m.0));
    let key = |a: T| -> i64 {
        if alpha_max.is_zero() {
            0
        } else {
            (a / alpha_max * T::lit(1e10)).round().to_i64().unwrap_or(0)
        }
    };
    modes.sort_by(|x, y| {
        key(y.0)
            .cmp(&key(x.0))
            .then(x.1.partial_cmp(&y.1).unwrap())
            .then(y.0.partial_cmp(&x.0).unwrap())
    });

    let mut eps = Vec::with_capacity(n);
    eps.push(h00);
    eps.extend(modes.iter().map(|m| m.1));
    StarModel::with_real_couplings(eps, modes.iter().map(|m| m.0).collect())
}

/// Outcome of diagonalizing a model and comparing it with a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RoundTripReport<T> {
    pub max_eigenvalue_error: T,
    pub max_overlap_error: T,
    pub tolerance: T,
    pub pass: bool,
}

/// Compares the sorted spectrum and the overlaps of `m` with the target.
///
/// Overlaps are compared per level: indices whose model eigenvalues fall in
/// one cluster have their model and target weights summed before comparison.
pub fn verify_round_trip<T: Real>(
    m: &StarModel<T>,
    p: &SpectralProfile<T>,
    tol: T,
) -> Result<RoundTripReport<T>> {
    if m.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            actual: m.dim(),
        });
    }
    let d = eigh(&build_hamiltonian(m))?;
    let target = p.eigenvalues();
    let max_eigenvalue_error = d
        .eigenvalues()
        .iter()
        .zip(&target)
        .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()));

    let mut max_overlap_error = T::zero();
    for range in cluster_ranges(d.eigenvalues(), T::cluster_tolerance()) {
        let model: T = d.zero_overlaps()[range.clone()]
            .iter()
            .fold(T::zero(), |a, &w| a + w);
        let want: T = p.overlaps[range].iter().fold(T::zero(), |a, &w| a + w);
        max_overlap_error = max_overlap_error.max((model - want).abs());
    }
    Ok(RoundTripReport {
        max_eigenvalue_error,
        max_overlap_error,
        tolerance: tol,
        pass: max_eigenvalue_error <= tol && max_overlap_error <= tol,
    })
}
