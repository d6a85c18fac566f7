//! Periodic field algebra on the torus [0, 2pi)^2.
//!
//! Fields are stored as Fourier coefficients with integer wavevectors in the
//! standard FFT layout, so `f(x) = sum_k c(k) e^{i k.x}`. Real-valued fields
//! keep the Hermitian symmetry `c(-k) = conj(c(k))` up to roundoff. The side
//! length is fixed to 2pi; rescaling from a unit torus changes constants in
//! the inequalities checked elsewhere but no exponents.

mod fft;

use crate::error::{CoreError, Result};
use ndarray::Array2;
use num_complex::Complex64;


pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Uniform n-by-n grid on the torus; n is a power of two, at least 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(CoreError::invalid(format!(
                "grid size must be a power of two >= 8, got {n}"
            )));
        }
        Ok(Grid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side_length(&self) -> f64 {
        TWO_PI
    }

    pub fn cell_area(&self) -> f64 {
        let h = TWO_PI / self.n as f64;
        h * h
    }

    pub fn spacing(&self) -> f64 {
        TWO_PI / self.n as f64
    }

    /// Physical coordinate of grid index `i` along either axis.
    pub fn coord(&self, i: usize) -> f64 {
        TWO_PI * i as f64 / self.n as f64
    }

    /// Signed integer wavenumber of FFT index `i` (Nyquist mapped to +n/2).
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Wavenumber used for first derivatives: the Nyquist mode has no
    /// well-defined odd derivative on a real grid, so it is zeroed.
    pub fn deriv_wavenumber(&self, i: usize) -> f64 {
        if i == self.n / 2 {
            0.0
        } else {
            self.wavenumber(i) as f64
        }
    }

    fn conj_index(&self, i: usize) -> usize {
        (self.n - i) % self.n
    }
}

/// Real scalar field stored by its Fourier coefficients.
#[derive(Debug, Clone)]
pub struct SpectralScalar {
    grid: Grid,
    coeffs: Array2<Complex64>,
}

impl SpectralScalar {
    pub fn zeros(grid: Grid) -> Self {
        SpectralScalar {
            grid,
            coeffs: Array2::default((grid.n, grid.n)),
        }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[[0, 0]] = Complex64::new(value, 0.0);
        f
    }

    pub fn from_coeffs(grid: Grid, coeffs: Array2<Complex64>) -> Self {
        assert_eq!(coeffs.dim(), (grid.n, grid.n));
        SpectralScalar { grid, coeffs }
    }

    /// Forward transform of physical samples (values at `grid.coord`).
    pub fn from_physical(grid: Grid, values: &Array2<f64>) -> Self {
        assert_eq!(values.dim(), (grid.n, grid.n));
        let mut data = values.mapv(|v| Complex64::new(v, 0.0));
        fft::fft2_inplace(&mut data, false);
        let scale = 1.0 / (grid.n * grid.n) as f64;
        data.mapv_inplace(|c| c * scale);
        SpectralScalar { grid, coeffs: data }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Array2::zeros((grid.n, grid.n));
        for i in 0..grid.n {
            for j in 0..grid.n {
                values[[i, j]] = f(grid.coord(i), grid.coord(j));
            }
        }
        Self::from_physical(grid, &values)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeffs
    }

    /// Inverse transform; the imaginary residue of a Hermitian field is
    /// dropped (it stays at roundoff level, see `physical_imag_ratio`).
    pub fn to_physical(&self) -> Array2<f64> {
        let mut data = self.coeffs.clone();
        fft::fft2_inplace(&mut data, true);
        data.mapv(|c| c.re)
    }

    /// max |Im f| / max |f| of the inverse transform; a reality diagnostic.
    pub fn physical_imag_ratio(&self) -> f64 {
        let mut data = self.coeffs.clone();
        fft::fft2_inplace(&mut data, true);
        let mut max_im: f64 = 0.0;
        let mut max_abs: f64 = 0.0;
        for c in data.iter() {
            max_im = max_im.max(c.im.abs());
            max_abs = max_abs.max(c.norm());
        }
        if max_abs == 0.0 {
            0.0
        } else {
            max_im / max_abs
        }
    }

    /// Mean value over the torus (the k = 0 coefficient).
    pub fn mean(&self) -> f64 {
        self.coeffs[[0, 0]].re
    }

    /// Integral over the torus.
    pub fn integral(&self) -> f64 {
        self.mean() * TWO_PI * TWO_PI
    }

    /// L^2 norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        TWO_PI * sum.sqrt()
    }

    /// L^2 inner product by Parseval.
    pub fn l2_inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid);
        let sum: f64 = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a * b.conj()).re)
            .sum();
        TWO_PI * TWO_PI * sum
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Partial derivative along `axis` (0 or 1): coefficients i k_axis c(k).
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(axis < 2);
        let g = self.grid;
        let mut out = self.coeffs.clone();
        for i in 0..g.n {
            let ki = g.deriv_wavenumber(i);
            for j in 0..g.n {
                let k = if axis == 0 { ki } else { g.deriv_wavenumber(j) };
                out[[i, j]] *= Complex64::new(0.0, k);
            }
        }
        SpectralScalar { grid: g, coeffs: out }
    }

    /// Laplacian: -|k|^2 c(k). Uses full wavenumbers (the even derivative is
    /// unambiguous at the Nyquist mode).
    pub fn laplacian(&self) -> Self {
        let g = self.grid;
        let mut out = self.coeffs.clone();
        for i in 0..g.n {
            let ki = g.wavenumber(i) as f64;
            for j in 0..g.n {
                let kj = g.wavenumber(j) as f64;
                out[[i, j]] *= -(ki * ki + kj * kj);
            }
        }
        SpectralScalar { grid: g, coeffs: out }
    }

    pub fn gradient(&self) -> SpectralVector {
        SpectralVector {
            x: self.derivative(0),
            y: self.derivative(1),
            solenoidal: false,
        }
    }

    /// ||grad f||_2 by Parseval.
    pub fn grad_l2_norm(&self) -> f64 {
        let g = self.grid;
        let mut sum = 0.0;
        for i in 0..g.n {
            let ki = g.deriv_wavenumber(i);
            for j in 0..g.n {
                let kj = g.deriv_wavenumber(j);
                sum += (ki * ki + kj * kj) * self.coeffs[[i, j]].norm_sqr();
            }
        }
        TWO_PI * sum.sqrt()
    }

    /// 2/3-rule truncation: zero every coefficient with 3 max(|k1|,|k2|) > n.
    pub fn dealias(&self) -> Self {
        let mut out = self.clone();
        out.dealias_inplace();
        out
    }

    pub fn dealias_inplace(&mut self) {
        let g = self.grid;
        let n = g.n as i64;
        for i in 0..g.n {
            let ki = g.wavenumber(i).abs();
            for j in 0..g.n {
                let kj = g.wavenumber(j).abs();
                if 3 * ki.max(kj) > n {
                    self.coeffs[[i, j]] = Complex64::default();
                }
            }
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        SpectralScalar {
            grid: self.grid,
            coeffs: self.coeffs.mapv(|c| c * s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid);
        SpectralScalar {
            grid: self.grid,
            coeffs: &self.coeffs + &other.coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid);
        SpectralScalar {
            grid: self.grid,
            coeffs: &self.coeffs - &other.coeffs,
        }
    }

    /// self + s * other, the workhorse of time-stepper combinations.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid);
        let mut out = self.coeffs.clone();
        out.zip_mut_with(&other.coeffs, |a, b| *a += b * s);
        SpectralScalar { grid: self.grid, coeffs: out }
    }

    /// Mean plus low (1 <= |k| <= n_split) plus high (|k| > n_split) parts,
    /// with |k| the Euclidean wavevector length.
    pub fn low_high_split(&self, n_split: usize) -> Result<FrequencySplit> {
        if n_split < 1 {
            return Err(CoreError::invalid(format!(
                "n_split must be >= 1, got {n_split}"
            )));
        }
        let g = self.grid;
        let cut = (n_split * n_split) as i64;
        let mut low = Self::zeros(g);
        let mut high = Self::zeros(g);
        for i in 0..g.n {
            let ki = g.wavenumber(i);
            for j in 0..g.n {
                let kj = g.wavenumber(j);
                if i == 0 && j == 0 {
                    continue;
                }
                let k2 = ki * ki + kj * kj;
                if k2 <= cut {
                    low.coeffs[[i, j]] = self.coeffs[[i, j]];
                } else {
                    high.coeffs[[i, j]] = self.coeffs[[i, j]];
                }
            }
        }
        Ok(FrequencySplit {
            mean: self.mean(),
            low,
            high,
            n_split,
        })
    }

    /// Hermitian-symmetry defect: max |c(-k) - conj(c(k))|.
    pub fn hermitian_defect(&self) -> f64 {
        let g = self.grid;
        let mut worst: f64 = 0.0;
        for i in 0..g.n {
            for j in 0..g.n {
                let a = self.coeffs[[i, j]];
                let b = self.coeffs[[g.conj_index(i), g.conj_index(j)]];
                worst = worst.max((a - b.conj()).norm());
            }
        }
        worst
    }
}

/// Real vector field; both components share one grid.
#[derive(Debug, Clone)]
pub struct SpectralVector {
    pub x: SpectralScalar,
    pub y: SpectralScalar,
    solenoidal: bool,
}

impl SpectralVector {
    pub fn new(x: SpectralScalar, y: SpectralScalar) -> Self {
        assert_eq!(x.grid, y.grid, "components must share one grid");
        SpectralVector { x, y, solenoidal: false }
    }

    pub fn zeros(grid: Grid) -> Self {
        SpectralVector {
            x: SpectralScalar::zeros(grid),
            y: SpectralScalar::zeros(grid),
            solenoidal: true,
        }
    }

    pub fn grid(&self) -> Grid {
        self.x.grid
    }

    pub fn is_flagged_solenoidal(&self) -> bool {
        self.solenoidal
    }

    pub fn divergence(&self) -> SpectralScalar {
        self.x.derivative(0).add(&self.y.derivative(1))
    }

    /// max_k |k . v(k)| / max_k |v(k)|, the solenoidality defect.
    pub fn divergence_defect(&self) -> f64 {
        let g = self.grid();
        let mut max_div: f64 = 0.0;
        let mut max_coeff: f64 = 0.0;
        for i in 0..g.n {
            let ki = g.deriv_wavenumber(i);
            for j in 0..g.n {
                let kj = g.deriv_wavenumber(j);
                let cx = self.x.coeffs[[i, j]];
                let cy = self.y.coeffs[[i, j]];
                max_div = max_div.max((cx * ki + cy * kj).norm());
                max_coeff = max_coeff.max(cx.norm().max(cy.norm()));
            }
        }
        if max_coeff == 0.0 {
            0.0
        } else {
            max_div / max_coeff
        }
    }

    /// Leray projection onto divergence-free fields:
    /// v(k) -> (I - k k^T / |k|^2) v(k), mean mode untouched.
    pub fn leray_project(&self) -> Self {
        let g = self.grid();
        let mut x = self.x.coeffs.clone();
        let mut y = self.y.coeffs.clone();
        for i in 0..g.n {
            let ki = g.deriv_wavenumber(i);
            for j in 0..g.n {
                let kj = g.deriv_wavenumber(j);
                let k2 = ki * ki + kj * kj;
                if k2 == 0.0 {
                    continue;
                }
                let dot = x[[i, j]] * ki + y[[i, j]] * kj;
                x[[i, j]] -= dot * (ki / k2);
                y[[i, j]] -= dot * (kj / k2);
            }
        }
        SpectralVector {
            x: SpectralScalar { grid: g, coeffs: x },
            y: SpectralScalar { grid: g, coeffs: y },
            solenoidal: true,
        }
    }

    pub fn l2_norm(&self) -> f64 {
        (self.x.l2_norm().powi(2) + self.y.l2_norm().powi(2)).sqrt()
    }

    pub fn l2_inner(&self, other: &Self) -> f64 {
        self.x.l2_inner(&other.x) + self.y.l2_inner(&other.y)
    }

    /// ||grad v||_2 over all four entries of the velocity gradient.
    pub fn grad_l2_norm(&self) -> f64 {
        (self.x.grad_l2_norm().powi(2) + self.y.grad_l2_norm().powi(2)).sqrt()
    }

    /// Grid maximum of |v| in physical space.
    pub fn max_phys_norm(&self) -> f64 {
        let px = self.x.to_physical();
        let py = self.y.to_physical();
        px.iter()
            .zip(py.iter())
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        SpectralVector {
            x: self.x.scale(s),
            y: self.y.scale(s),
            solenoidal: self.solenoidal,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        SpectralVector {
            x: self.x.add(&other.x),
            y: self.y.add(&other.y),
            solenoidal: self.solenoidal && other.solenoidal,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        SpectralVector {
            x: self.x.sub(&other.x),
            y: self.y.sub(&other.y),
            solenoidal: self.solenoidal && other.solenoidal,
        }
    }

    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        SpectralVector {
            x: self.x.axpy(s, &other.x),
            y: self.y.axpy(s, &other.y),
            solenoidal: self.solenoidal && other.solenoidal,
        }
    }

    pub fn dealias(&self) -> Self {
        SpectralVector {
            x: self.x.dealias(),
            y: self.y.dealias(),
            solenoidal: self.solenoidal,
        }
    }
}

/// Appendix-style decomposition b = mean + b_n + tilde(b)_n.
#[derive(Debug, Clone)]
pub struct FrequencySplit {
    pub mean: f64,
    pub low: SpectralScalar,
    pub high: SpectralScalar,
    pub n_split: usize,
}

impl FrequencySplit {
    /// mean + low + high, for reconstruction checks.
    pub fn reconstruct(&self) -> SpectralScalar {
        let mut out = self.low.add(&self.high);
        out.coeffs[[0, 0]] += Complex64::new(self.mean, 0.0);
        out
    }
}

/// Pointwise product computed pseudo-spectrally with the 2/3 rule applied to
/// both inputs and to the result.
pub fn dealiased_product(a: &SpectralScalar, b: &SpectralScalar) -> SpectralScalar {
    assert_eq!(a.grid, b.grid);
    let pa = a.dealias().to_physical();
    let pb = b.dealias().to_physical();
    let prod = &pa * &pb;
    let mut out = SpectralScalar::from_physical(a.grid, &prod);
    out.dealias_inplace();
    out
}

/// Pointwise product with no truncation anywhere (collocation product).
pub fn pointwise_product(a: &SpectralScalar, b: &SpectralScalar) -> SpectralScalar {
    assert_eq!(a.grid, b.grid);
    let prod = &a.to_physical() * &b.to_physical();
    SpectralScalar::from_physical(a.grid, &prod)
}

/// Random real field with coefficients proportional to |k|^(-decay) and
/// uniform phases, supported on 1 <= max(|k1|,|k2|) <= kmax_inf. The H^1
/// ensemble used throughout the inequality sweeps is `decay = 2`.
pub fn random_trig_scalar<R: rand::Rng>(
    grid: Grid,
    kmax_inf: usize,
    decay: f64,
    rng: &mut R,
) -> SpectralScalar {
    assert!(kmax_inf >= 1 && kmax_inf < grid.n / 2, "kmax must stay below Nyquist");
    let mut f = SpectralScalar::zeros(grid);
    let n = grid.n;
    let kmax = kmax_inf as i64;
    for k1 in -kmax..=kmax {
        for k2 in -kmax..=kmax {
            // Fill one representative of each conjugate pair.
            if (k1, k2) <= (0, 0) {
                continue;
            }
            let k2norm = ((k1 * k1 + k2 * k2) as f64).sqrt();
            let amp = k2norm.powf(-decay);
            let phase = rng.gen_range(0.0..TWO_PI);
            let c = Complex64::from_polar(amp, phase);
            let i = ((k1 + n as i64) % n as i64) as usize;
            let j = ((k2 + n as i64) % n as i64) as usize;
            let ic = ((-k1 + n as i64) % n as i64) as usize;
            let jc = ((-k2 + n as i64) % n as i64) as usize;
            f.coeffs[[i, j]] = c;
            f.coeffs[[ic, jc]] = c.conj();
        }
    }
    f
}

/// Random divergence-free velocity with the same spectral envelope.
pub fn random_solenoidal_vector<R: rand::Rng>(
    grid: Grid,
    kmax_inf: usize,
    decay: f64,
    rng: &mut R,
) -> SpectralVector {
    let x = random_trig_scalar(grid, kmax_inf, decay, rng);
    let y = random_trig_scalar(grid, kmax_inf, decay, rng);
    SpectralVector::new(x, y).leray_project()
}
