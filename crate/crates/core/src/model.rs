//! Star (arrowhead) Hamiltonians of an excited atom coupled to independent
//! field modes, and the closed-form survival probabilities of the solvable
//! special cases.
//!
//! Basis state `0` is "atom excited, field empty"; state `k >= 1` is "atom
//! de-excited, mode `k` excited". The modes do not couple to each other, so
//! the Hamiltonian is nonzero only on the diagonal and in row/column 0.
//! Coupling orientation: `H[k][0] = alpha_k` and `H[0][k] = conj(alpha_k)`.
//! Units: hbar = 1.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, HermitianMatrix};
use crate::scalar::{Complex, Real};

/// Diagonal energies `eps_0..eps_N` and couplings `alpha_1..alpha_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "StarModelJson<T>",
    into = "StarModelJson<T>",
    bound = "T: Real"
)]
pub struct StarModel<T> {
    eps: Vec<T>,
    alpha: Vec<Complex<T>>,
}

/// On-disk form: `{"eps": [...], "alpha_re": [...], "alpha_im": [...]}`.
#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct StarModelJson<T> {
    eps: Vec<T>,
    alpha_re: Vec<T>,
    alpha_im: Vec<T>,
}

impl<T: Real> TryFrom<StarModelJson<T>> for StarModel<T> {
    type Error = Error;

    fn try_from(j: StarModelJson<T>) -> Result<Self> {
        if j.alpha_re.len() != j.alpha_im.len() {
            return Err(Error::InvalidModel(format!(
                "alpha_re has {} entries but alpha_im has {}",
                j.alpha_re.len(),
                j.alpha_im.len()
            )));
        }
        let alpha = j
            .alpha_re
            .into_iter()
            .zip(j.alpha_im)
            .map(|(re, im)| Complex::new(re, im))
            .collect();
        StarModel::new(j.eps, alpha)
    }
}

impl<T: Real> From<StarModel<T>> for StarModelJson<T> {
    fn from(m: StarModel<T>) -> Self {
        Self {
            alpha_re: m.alpha.iter().map(|a| a.re).collect(),
            alpha_im: m.alpha.iter().map(|a| a.im).collect(),
            eps: m.eps,
        }
    }
}

impl<T: Real> StarModel<T> {
    pub fn new(eps: Vec<T>, alpha: Vec<Complex<T>>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidModel("at least one mode is required".into()));
        }
        if eps.len() != alpha.len() + 1 {
            return Err(Error::InvalidModel(format!(
                "len(eps) = {} must equal len(alpha) + 1 = {}",
                eps.len(),
                alpha.len() + 1
            )));
        }
        let finite = eps.iter().all(|x| x.is_finite())
            && alpha.iter().all(|a| a.re.is_finite() && a.im.is_finite());
        if !finite {
            return Err(Error::InvalidModel("non-finite parameter".into()));
        }
        Ok(Self { eps, alpha })
    }

    pub fn with_real_couplings(eps: Vec<T>, alpha: Vec<T>) -> Result<Self> {
        Self::new(
            eps,
            alpha
                .into_iter()
                .map(|a| Complex::new(a, T::zero()))
                .collect(),
        )
    }

    /// One atom level and `n` copies of the same mode (`eps_k = eps0`, `alpha_k = alpha`).
    pub fn identical_modes(n: usize, eps0: T, alpha: Complex<T>) -> Result<Self> {
        Self::new(vec![eps0; n + 1], vec![alpha; n])
    }

    /// Atom level `eps0` and a single mode at `eps1`.
    pub fn two_level(eps0: T, eps1: T, alpha: Complex<T>) -> Result<Self> {
        Self::new(vec![eps0, eps1], vec![alpha])
    }

    /// Number of modes `N`.
    pub fn modes(&self) -> usize {
        self.alpha.len()
    }

    /// Hilbert-space dimension `N + 1`.
    pub fn dim(&self) -> usize {
        self.eps.len()
    }

    pub fn eps(&self) -> &[T] {
        &self.eps
    }

    pub fn alpha(&self) -> &[Complex<T>] {
        &self.alpha
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Arrowhead matrix of `m`; every entry outside the diagonal and row/column 0 is exactly zero.
pub fn build_hamiltonian<T: Real>(m: &StarModel<T>) -> HermitianMatrix<T> {
    let n = m.dim();
    let mut h = ComplexMatrix::zeros(n);
    for (k, &e) in m.eps.iter().enumerate() {
        h[(k, k)] = Complex::new(e, T::zero());
    }
    for (k, &a) in m.alpha.iter().enumerate() {
        h[(k + 1, 0)] = a;
        h[(0, k + 1)] = a.conj();
    }
    HermitianMatrix::new(h).expect("arrowhead construction is Hermitian")
}

/// Resonant single mode: `cos^2(|alpha| t)`.
pub fn two_level_survival<T: Real>(alpha_abs: T, t: T) -> T {
    let c = (alpha_abs * t).cos();
    c * c
}

/// Detuned single mode, generalized Rabi formula
/// `1 - (|alpha|^2 / Omega^2) sin^2(Omega t)` with
/// `Omega^2 = |alpha|^2 + Delta^2`, `Delta = (eps1 - eps0) / 2`.
pub fn detuned_two_level_survival<T: Real>(eps0: T, eps1: T, alpha: Complex<T>, t: T) -> T {
    let delta = (eps1 - eps0) / T::lit(2.0);
    if delta.is_zero() {
        return two_level_survival(alpha.norm(), t);
    }
    let a2 = alpha.norm_sqr();
    let omega2 = a2 + delta * delta;
    if omega2.is_zero() {
        return T::one();
    }
    let s = (omega2.sqrt() * t).sin();
    T::one() - a2 / omega2 * s * s
}

/// `n` identical modes: `cos^2(sqrt(n) |alpha| t)`.
pub fn identical_modes_survival<T: Real>(n: usize, alpha_abs: T, t: T) -> T {
    let n = T::from_usize(n).expect("mode count representable");
    two_level_survival(n.sqrt() * alpha_abs, t)
}

/// Spectrum of the identical-modes Hamiltonian.
///
/// Only the collective mode `(1/sqrt(n)) sum_k |k>` couples to the atom; the
/// two hybrids of `|0>` with it carry all of the initial-state weight, and
/// the `n - 1` orthogonal mode combinations stay at `eps0` with zero weight.
#[derive(Debug, Clone, PartialEq)]
pub struct IdenticalModesSpectrum<T> {
    /// `(eps0 - sqrt(n)|alpha|, 1/2)`
    pub lower: (T, T),
    /// `(eps0 + sqrt(n)|alpha|, 1/2)`
    pub upper: (T, T),
    pub dark_energy: T,
    pub dark_count: usize,
}

pub fn identical_modes_spectrum<T: Real>(
    n: usize,
    eps0: T,
    alpha: Complex<T>,
) -> IdenticalModesSpectrum<T> {
    assert!(n >= 1, "identical_modes_spectrum needs at least one mode");
    let split = T::from_usize(n).unwrap().sqrt() * alpha.norm();
    let half = T::lit(0.5);
    IdenticalModesSpectrum {
        lower: (eps0 - split, half),
        upper: (eps0 + split, half),
        dark_energy: eps0,
        dark_count: n - 1,
    }
}

/// Random model with `modes` modes, energies and coupling components uniform in `[-scale, scale]`.
pub fn random_star_model<T: Real, R: Rng + ?Sized>(
    modes: usize,
    scale: f64,
    rng: &mut R,
) -> StarModel<T> {
    let mut u = || T::lit(rng.gen_range(-scale..=scale));
    let eps = (0..=modes).map(|_| u()).collect();
    let alpha = (0..modes).map(|_| Complex::new(u(), u())).collect();
    StarModel::new(eps, alpha).expect("random parameters are valid")
}
