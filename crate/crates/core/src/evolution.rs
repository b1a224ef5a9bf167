//! Exact time evolution in the eigenbasis, survival probabilities, and an
//! independent Runge-Kutta integrator used as a cross-check.
//!
//! The propagator is `exp(-i H t)` (hbar = 1). Every reported quantity is a
//! modulus, so it is unchanged under `t -> -t` conjugation of the phases.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::csv;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, SpectralDecomposition};
use crate::scalar::{Complex, Real};

/// Normalized state amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amps: Vec<Complex<T>>) -> Result<Self> {
        let norm = norm(&amps);
        if amps.is_empty() || (norm - T::one()).abs() > T::state_norm_tolerance() {
            return Err(Error::NotNormalized {
                norm: norm.as_f64(),
            });
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex<T>>) -> Result<Self> {
        let n = norm(&amps);
        if !(n > T::zero() && n.is_finite()) {
            return Err(Error::NotNormalized { norm: n.as_f64() });
        }
        Ok(Self {
            amps: amps.into_iter().map(|a| a.unscale(n)).collect(),
        })
    }

    /// Basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut amps = vec![Complex::zero(); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm(&self) -> T {
        norm(&self.amps)
    }

    /// `|<index|psi>|^2`.
    pub fn probability(&self, index: usize) -> T {
        self.amps[index].norm_sqr()
    }
}

fn norm<T: Real>(amps: &[Complex<T>]) -> T {
    amps.iter()
        .fold(T::zero(), |acc, a| acc + a.norm_sqr())
        .sqrt()
}

/// Uniform sampling of `[t_start, t_end]` with `samples` points, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TimeGrid<T> {
    t_start: T,
    t_end: T,
    samples: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_start: T, t_end: T, samples: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(Error::InvalidGrid("non-finite bounds".into()));
        }
        if t_end <= t_start {
            return Err(Error::InvalidGrid(format!(
                "t_end ({t_end}) must exceed t_start ({t_start})"
            )));
        }
        if samples < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples, got {samples}"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            samples,
        })
    }

    pub fn t_start(&self) -> T {
        self.t_start
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn step(&self) -> T {
        (self.t_end - self.t_start) / T::from_usize(self.samples - 1).unwrap()
    }

    pub fn time(&self, i: usize) -> T {
        if i + 1 == self.samples {
            return self.t_end;
        }
        self.t_start + self.step() * T::from_usize(i).unwrap()
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.samples).map(move |i| self.time(i))
    }
}

/// `P(t)` sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SurvivalSeries<T> {
    grid: TimeGrid<T>,
    values: Vec<T>,
}

impl<T: Real> SurvivalSeries<T> {
    pub fn new(grid: TimeGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.samples() {
            return Err(Error::InvalidSeries(format!(
                "{} values for {} grid samples",
                values.len(),
                grid.samples()
            )));
        }
        if let Some(bad) = values
            .iter()
            .find(|p| !(**p >= T::zero() && **p <= T::one()))
        {
            return Err(Error::InvalidSeries(format!("value {bad} outside [0, 1]")));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.grid.times().zip(self.values.iter().copied())
    }

    /// `t,P` table with times multiplied by `time_scale`.
    pub fn to_csv_scaled(&self, time_scale: f64) -> String {
        csv::write_table(
            &["t", "P"],
            self.iter()
                .map(|(t, p)| vec![t.as_f64() * time_scale, p.as_f64()]),
        )
    }

    pub fn to_csv(&self) -> String {
        self.to_csv_scaled(1.0)
    }

    /// Reads a table whose first two columns are `t,P`; further columns are
    /// ignored. The time column must be uniformly spaced.
    pub fn from_csv(text: &str) -> Result<Self> {
        let (header, rows) = csv::read_table(text)?;
        if header.len() < 2 || header[0] != "t" || header[1] != "P" {
            return Err(Error::Parse(format!(
                "expected header starting with t,P, got {}",
                header.join(",")
            )));
        }
        if rows.len() < 2 {
            return Err(Error::Parse("need at least two rows".into()));
        }
        let t0 = rows[0][0];
        let t1 = rows[rows.len() - 1][0];
        let grid = TimeGrid::new(T::lit(t0), T::lit(t1), rows.len())?;
        let step = (t1 - t0) / (rows.len() - 1) as f64;
        for (i, row) in rows.iter().enumerate() {
            let expected = t0 + step * i as f64;
            if (row[0] - expected).abs() > 1e-9 * t1.abs().max(t0.abs()).max(step) {
                return Err(Error::Parse(format!(
                    "time column is not uniform at row {}",
                    i + 1
                )));
            }
        }
        Self::new(grid, rows.iter().map(|r| T::lit(r[1])).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series serializes")
    }
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// `V diag(exp(-i E_n t)) V^dagger psi0`.
pub fn evolve_state<T: Real>(
    d: &SpectralDecomposition<T>,
    psi0: &StateVector<T>,
    t: T,
) -> Result<StateVector<T>> {
    let n = d.dim();
    check_dim(n, psi0.dim())?;
    let v = d.eigenvectors();
    let psi = psi0.amplitudes();
    let coeffs: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let c = (0..n).fold(Complex::<T>::zero(), |acc, i| {
                acc + v[(i, k)].conj() * psi[i]
            });
            c * Complex::from_polar(T::one(), -d.eigenvalues()[k] * t)
        })
        .collect();
    let out = (0..n)
        .map(|i| {
            coeffs
                .iter()
                .enumerate()
                .fold(Complex::zero(), |acc, (k, c)| acc + v[(i, k)] * *c)
        })
        .collect();
    Ok(StateVector { amps: out })
}

/// Survival amplitude `sum_n |<0|e_n>|^2 exp(-i E_n t)`.
pub fn survival_amplitude<T: Real>(d: &SpectralDecomposition<T>, t: T) -> Complex<T> {
    d.eigenvalues()
        .iter()
        .zip(d.zero_overlaps())
        .fold(Complex::zero(), |acc, (&e, &w)| {
            acc + Complex::from_polar(w, -e * t)
        })
}

/// `P(t) = |sum_n |<0|e_n>|^2 exp(-i E_n t)|^2`, clamped to `[0, 1]`.
pub fn survival_probability<T: Real>(d: &SpectralDecomposition<T>, t: T) -> T {
    survival_amplitude(d, t).norm_sqr().min(T::one())
}

pub fn survival_series<T: Real>(
    d: &SpectralDecomposition<T>,
    grid: TimeGrid<T>,
) -> SurvivalSeries<T> {
    let values = grid.times().map(|t| survival_probability(d, t)).collect();
    SurvivalSeries { grid, values }
}

/// `0.01 / ||H||_F`, the step at which the integrator tracks the exact
/// propagator to better than 1e-6 over desk-scale times.
pub fn recommended_step<T: Real>(h: &HermitianMatrix<T>) -> T {
    let norm = h.frobenius_norm();
    let base = T::lit(0.01);
    if norm.is_zero() {
        base
    } else {
        base / norm
    }
}

/// Integrates `i dpsi/dt = H psi` from 0 to `t` with classical fixed-step RK4.
///
/// The step count is `ceil(|t| / dt)` so the last step lands on `t`
/// exactly. The state is not renormalized between steps; the returned
/// vector is normalized once at the end.
pub fn evolve_oracle<T: Real>(
    h: &HermitianMatrix<T>,
    psi0: &StateVector<T>,
    t: T,
    dt: T,
) -> Result<StateVector<T>> {
    check_dim(h.dim(), psi0.dim())?;
    if !(dt > T::zero()) {
        return Err(Error::InvalidGrid(format!("step {dt} must be positive")));
    }
    let product = dt * h.frobenius_norm();
    if product > T::lit(0.5) {
        return Err(Error::StepTooLarge {
            product: product.as_f64(),
        });
    }
    let steps = (t.abs() / dt).ceil().to_usize().unwrap_or(0);
    if steps == 0 {
        return Ok(psi0.clone());
    }
    let step = t / T::from_usize(steps).unwrap();
    let m = h.as_matrix();
    let minus_i = Complex::new(T::zero(), -T::one());
    let rhs = |psi: &[Complex<T>]| -> Vec<Complex<T>> {
        m.mul_vec(psi).into_iter().map(|z| z * minus_i).collect()
    };
    let axpy = |x: &[Complex<T>], k: &[Complex<T>], s: T| -> Vec<Complex<T>> {
        x.iter().zip(k).map(|(a, b)| *a + b.scale(s)).collect()
    };

    let half = step / T::lit(2.0);
    let sixth = step / T::lit(6.0);
    let two = T::lit(2.0);
    let mut psi = psi0.amplitudes().to_vec();
    for _ in 0..steps {
        let k1 = rhs(&psi);
        let k2 = rhs(&axpy(&psi, &k1, half));
        let k3 = rhs(&axpy(&psi, &k2, half));
        let k4 = rhs(&axpy(&psi, &k3, step));
        for i in 0..psi.len() {
            psi[i] += (k1[i] + k2[i].scale(two) + k3[i].scale(two) + k4[i]).scale(sixth);
        }
    }
    StateVector::normalized(psi)
}

/// `|<0|psi(t)>|^2` from the integrator, starting in `|0>`.
pub fn oracle_survival<T: Real>(h: &HermitianMatrix<T>, t: T, dt: T) -> Result<T> {
    let psi = evolve_oracle(h, &StateVector::basis(h.dim(), 0), t, dt)?;
    Ok(psi.probability(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::eigh;
    use crate::model::{build_hamiltonian, two_level_survival, StarModel};
    use std::f64::consts::PI;

    fn resonant(eps0: f64, alpha: f64) -> HermitianMatrix<f64> {
        build_hamiltonian(&StarModel::with_real_couplings(vec![eps0, eps0], vec![alpha]).unwrap())
    }

    #[test]
    fn zero_time_is_identity() {
        let h = resonant(0.3, 1.0);
        let d = eigh(&h).unwrap();
        let psi =
            StateVector::normalized(vec![Complex::new(1.0, 0.5), Complex::new(-0.2, 0.1)]).unwrap();
        let out = evolve_state(&d, &psi, 0.0).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(evolve_oracle(&h, &psi, 0.0, 1e-3).unwrap(), psi);
    }

    #[test]
    fn diagonal_hamiltonian_only_rotates_phases() {
        let energies = [0.5, -1.25, 2.0];
        let d = eigh(&HermitianMatrix::diagonal(&energies).unwrap()).unwrap();
        let amps = vec![
            Complex::new(0.6, 0.0),
            Complex::new(0.0, 0.64),
            Complex::new(0.48, 0.0),
        ];
        let psi = StateVector::new(amps.clone()).unwrap();
        let t = 1.7;
        let out = evolve_state(&d, &psi, t).unwrap();
        for k in 0..3 {
            let expected = amps[k] * Complex::from_polar(1.0, -energies[k] * t);
            assert!((out.amplitudes()[k] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn resonant_transfer_at_quarter_period() {
        let d = eigh(&resonant(0.0, 1.0)).unwrap();
        let out = evolve_state(&d, &StateVector::basis(2, 0), PI / 2.0).unwrap();
        assert!(out.probability(0) < 1e-28);
        assert!((out.probability(1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn survival_matches_projection_and_examples() {
        let d = eigh(&resonant(0.0, 1.0)).unwrap();
        assert!((survival_probability(&d, 0.0) - 1.0).abs() < 1e-15);
        for &t in &[0.1, 0.9, 2.3, 11.0] {
            let psi = evolve_state(&d, &StateVector::basis(2, 0), t).unwrap();
            assert!((survival_probability(&d, t) - psi.probability(0)).abs() < 1e-12);
        }

        // equally spaced (-1, 0, 1), weights 1/3: P(pi) = |1/3 - 2/3|^2 = 1/9
        let d = eigh(
            &HermitianMatrix::from_real_symmetric(vec![
                vec![0.0, (1.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt()],
                vec![(1.0f64 / 3.0).sqrt(), 1.0 / 3.0f64.sqrt(), 0.0],
                vec![(1.0f64 / 3.0).sqrt(), 0.0, -1.0 / 3.0f64.sqrt()],
            ])
            .unwrap(),
        )
        .unwrap();
        assert!((survival_probability(&d, PI) - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn series_examples() {
        let grid = TimeGrid::new(0.0, 20.0, 501).unwrap();
        let decoupled = build_hamiltonian(
            &StarModel::with_real_couplings(vec![0.0, 1.0, 2.0], vec![0.0, 0.0]).unwrap(),
        );
        let s = survival_series(&eigh(&decoupled).unwrap(), grid);
        assert!(s.values().iter().all(|&p| p == 1.0));

        let s = survival_series(&eigh(&resonant(1.0, 0.7)).unwrap(), grid);
        assert!((s.values()[0] - 1.0).abs() < 1e-12);
        for (t, p) in s.iter() {
            assert!((p - two_level_survival(0.7, t)).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn oracle_agrees_on_resonant_pair() {
        let h = resonant(0.0, 1.0);
        let dt = recommended_step(&h);
        let psi0 = StateVector::basis(2, 0);
        let exact = evolve_state(&eigh(&h).unwrap(), &psi0, PI / 2.0).unwrap();
        let approx = evolve_oracle(&h, &psi0, PI / 2.0, dt).unwrap();
        for (a, b) in exact.amplitudes().iter().zip(approx.amplitudes()) {
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn oracle_rejects_large_steps() {
        let h = resonant(0.0, 1.0);
        let psi0 = StateVector::basis(2, 0);
        assert!(matches!(
            evolve_oracle(&h, &psi0, 1.0, 0.5),
            Err(Error::StepTooLarge { .. })
        ));
        assert!(evolve_oracle(&h, &psi0, 1.0, 0.0).is_err());
        assert!(matches!(
            evolve_oracle(&h, &StateVector::basis(3, 0), 1.0, 0.01),
            Err(Error::DimensionMismatch {
                expected: 2,
                actual: 3
            })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let d = eigh(&resonant(0.0, 1.0)).unwrap();
        assert!(matches!(
            evolve_state(&d, &StateVector::basis(3, 0), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn state_and_grid_validation() {
        assert!(StateVector::<f64>::new(vec![Complex::new(0.5, 0.0)]).is_err());
        assert!(StateVector::<f64>::normalized(vec![Complex::new(0.0, 0.0)]).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        let g = TimeGrid::new(0.0, 1.0, 5).unwrap();
        assert_eq!(
            g.times().collect::<Vec<_>>(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert!(SurvivalSeries::new(g, vec![1.0, 0.5, 1.5, 0.0, 0.0]).is_err());
        assert!(SurvivalSeries::new(g, vec![1.0; 4]).is_err());
    }

    #[test]
    fn csv_format_and_round_trip() {
        let g = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let s = SurvivalSeries::new(g, vec![1.0, 1.0 / 3.0, 0.0]).unwrap();
        let text = s.to_csv();
        assert_eq!(text, "t,P\n0,1\n0.5,0.333333333333\n1,0\n");
        let back = SurvivalSeries::<f64>::from_csv(&text).unwrap();
        assert_eq!(back.grid(), s.grid());
        assert_eq!(back.to_csv(), text);
        assert!(SurvivalSeries::<f64>::from_csv("x,P\n0,1\n1,1\n").is_err());
        assert!(SurvivalSeries::<f64>::from_csv("t,P\n0,1\n0.1,1\n1,1\n").is_err());
        // extra columns are ignored
        let wide = "t,P,P_analytic\n0,1,1\n2,0.5,0.5\n";
        assert_eq!(
            SurvivalSeries::<f64>::from_csv(wide).unwrap().values(),
            &[1.0, 0.5]
        );
    }
}
