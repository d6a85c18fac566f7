//! Lebesgue-norm machinery: grid and radial-quadrature norm paths, the
//! norm-class functionals, exponential-integrability testing and trend
//! classification. Verdicts produced here are numerical evidence about a
//! finite p range, never proofs of class membership.

use crate::error::{CoreError, Result};
use crate::quad;
use crate::spectral::{SpectralScalar, TWO_PI};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

/// Where a norm curve came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSource {
    GridField,
    RadialProfile,
}

/// Sampled p -> ||f||_p curve.
#[derive(Debug, Clone)]
pub struct LpNormCurve {
    pub p_values: Vec<f64>,
    pub norms: Vec<f64>,
    pub source: CurveSource,
}

impl LpNormCurve {
    /// Worst violation of Hoelder log-convexity (log ||f||_p convex in 1/p),
    /// as an absolute excess in log scale. Exact curves give ~0.
    pub fn log_convexity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.p_values.windows(3).zip(self.norms.windows(3)) {
            let (ps, ns) = w;
            if ns.iter().any(|&n| n <= 0.0) {
                continue;
            }
            let (t1, t2, t3) = (1.0 / ps[0], 1.0 / ps[1], 1.0 / ps[2]);
            let lam = (t2 - t3) / (t1 - t3);
            let interp = lam * ns[0].ln() + (1.0 - lam) * ns[2].ln();
            worst = worst.max(ns[1].ln() - interp);
        }
        worst
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_values.len() != self.norms.len() {
            return Err(CoreError::invalid("p grid and norm list lengths differ"));
        }
        if self.p_values.windows(2).any(|w| w[1] <= w[0]) || self.p_values.iter().any(|&p| p < 1.0)
        {
            return Err(CoreError::invalid("p grid must be increasing with p >= 1"));
        }
        if self.norms.iter().any(|n| !n.is_finite() || *n < 0.0) {
            return Err(CoreError::invalid("norms must be finite and nonnegative"));
        }
        let defect = self.log_convexity_defect();
        if defect > 1e-8 {
            return Err(CoreError::Numerical(format!(
                "Lp curve violates log-convexity by {defect:.3e} in log scale"
            )));
        }
        Ok(())
    }
}

/// Default p grid: 40 geometric points from 1.25 to 1e4.
pub fn default_p_grid() -> Vec<f64> {
    geometric_grid(1.25, 1e4, 40)
}

pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|i| lo * (ratio * i as f64).exp()).collect()
}

/// Radial model profiles from the norm-class examples.
#[derive(Debug, Clone)]
pub enum ProfileKind {
    /// -log|x| on |x| <= 1
    NegLog,
    /// log|log|x|| on |x| <= 1/e
    LogAbsLog,
    /// log log |log|x|| on |x| <= e^{-e}
    LogLogAbsLog,
    /// linear interpolation of (radius, value) samples, zero outside
    CustomTabulated { radii: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub kind: ProfileKind,
    pub dimension: u32,
    pub support_radius: f64,
}

impl RadialProfile {
    pub fn neg_log(dimension: u32) -> Self {
        RadialProfile { kind: ProfileKind::NegLog, dimension, support_radius: 1.0 }
    }

    pub fn log_abs_log(dimension: u32) -> Self {
        RadialProfile {
            kind: ProfileKind::LogAbsLog,
            dimension,
            support_radius: (-1.0f64).exp(),
        }
    }

    pub fn log_log_abs_log(dimension: u32) -> Self {
        RadialProfile {
            kind: ProfileKind::LogLogAbsLog,
            dimension,
            support_radius: (-std::f64::consts::E).exp(),
        }
    }

    pub fn custom(radii: Vec<f64>, values: Vec<f64>, dimension: u32) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(CoreError::invalid("tabulated profile needs >= 2 samples"));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] < 0.0 {
            return Err(CoreError::invalid("tabulated radii must increase from >= 0"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(CoreError::invalid("profile values must be finite and >= 0"));
        }
        let support_radius = *radii.last().unwrap();
        Ok(RadialProfile {
            kind: ProfileKind::CustomTabulated { radii, values },
            dimension,
            support_radius,
        })
    }

    /// Profile value at radius r (zero outside the support).
    pub fn value(&self, r: f64) -> f64 {
        if r > self.support_radius {
            return 0.0;
        }
        match &self.kind {
            ProfileKind::NegLog => {
                if r <= 0.0 {
                    f64::INFINITY
                } else {
                    (-r.ln()).max(0.0)
                }
            }
            ProfileKind::LogAbsLog => {
                if r <= 0.0 {
                    f64::INFINITY
                } else {
                    (-r.ln()).ln().max(0.0)
                }
            }
            ProfileKind::LogLogAbsLog => {
                if r <= 0.0 {
                    f64::INFINITY
                } else {
                    (-r.ln()).ln().ln().max(0.0)
                }
            }
            ProfileKind::CustomTabulated { radii, values } => {
                if r <= radii[0] {
                    return values[0];
                }
                match radii.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
                    Ok(i) => values[i],
                    Err(i) => {
                        let (r0, r1) = (radii[i - 1], radii[i]);
                        let w = (r - r0) / (r1 - r0);
                        values[i - 1] * (1.0 - w) + values[i] * w
                    }
                }
            }
        }
    }

    /// Profile value in the s = -log r coordinate.
    fn value_log_coord(&self, s: f64) -> f64 {
        match &self.kind {
            ProfileKind::NegLog => s.max(0.0),
            ProfileKind::LogAbsLog => {
                if s <= 1.0 {
                    0.0
                } else {
                    s.ln()
                }
            }
            ProfileKind::LogLogAbsLog => {
                if s <= std::f64::consts::E {
                    0.0
                } else {
                    s.ln().ln().max(0.0)
                }
            }
            ProfileKind::CustomTabulated { .. } => self.value((-s).exp()),
        }
    }

    fn s_min(&self) -> f64 {
        -self.support_radius.ln()
    }
}

/// Surface area of the unit sphere in R^d (c_1 = 2, c_2 = 2 pi, ...).
pub fn unit_sphere_area(d: u32) -> f64 {
    let d = d as f64;
    (std::f64::consts::PI.ln() * (d / 2.0) + std::f64::consts::LN_2 - ln_gamma(d / 2.0)).exp()
}

/// Grid-quadrature Lp norm, evaluated in the log domain so p in the
/// thousands cannot overflow: (sum |f_i|^p h^2)^{1/p}.
pub fn lp_norm_grid(f: &SpectralScalar, p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(CoreError::invalid(format!("p must be >= 1, got {p}")));
    }
    let phys = f.to_physical();
    let max = phys.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = phys.iter().map(|v| (v.abs() / max).powf(p)).sum();
    let ln_norm = max.ln() + (sum.ln() + f.grid().cell_area().ln()) / p;
    Ok(ln_norm.exp())
}

/// Radial-quadrature Lp norm: (c_d int_0^R r^{d-1} g(r)^p dr)^{1/p},
/// computed after the substitution r = e^{-s} and entirely in the log
/// domain (the integrand tops 1e+5000 for the singular profiles).
pub fn lp_norm_radial(profile: &RadialProfile, p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(CoreError::invalid(format!("p must be >= 1, got {p}")));
    }
    let d = profile.dimension as f64;
    let s_min = profile.s_min();
    let phi = |s: f64| {
        let g = profile.value_log_coord(s);
        if g <= 0.0 {
            f64::NEG_INFINITY
        } else {
            p * g.ln() - d * s
        }
    };
    // Find an upper cutoff: past the peak the -d s term kills the integrand.
    let mut s_hi = s_min + 8.0;
    let mut running_max = f64::NEG_INFINITY;
    loop {
        for i in 0..64 {
            let s = s_min + (s_hi - s_min) * i as f64 / 63.0;
            running_max = running_max.max(phi(s));
        }
        if phi(s_hi) < running_max - 250.0 || s_hi > 1e9 {
            break;
        }
        s_hi = s_min + (s_hi - s_min) * 2.0;
    }
    let log_integral = quad::log_domain_integral(phi, s_min, s_hi, 1e-11)?;
    if log_integral == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let ln_norm = (unit_sphere_area(profile.dimension).ln() + log_integral) / p;
    Ok(ln_norm.exp())
}

/// Closed-form ||log|x| 1_{B(0,1)}||_p = ((c_d / d^{p+1}) Gamma(p+1))^{1/p},
/// via log-Gamma.
pub fn exact_neg_log_norm(p: f64, d: u32) -> Result<f64> {
    if p < 1.0 || d < 1 {
        return Err(CoreError::invalid("need p >= 1 and d >= 1"));
    }
    let dd = d as f64;
    let ln = (unit_sphere_area(d).ln() - (p + 1.0) * dd.ln() + ln_gamma(p + 1.0)) / p;
    Ok(ln.exp())
}

/// int_0^R min(g(r), cap) r^{d-1} dr for a profile, by the same log
/// substitution. Used as the independent mass oracle for sampled densities.
pub fn capped_profile_radial_integral(profile: &RadialProfile, cap: f64) -> Result<f64> {
    if cap <= 0.0 {
        return Err(CoreError::invalid("cap must be positive"));
    }
    let d = profile.dimension as f64;
    let s_min = profile.s_min();
    // e^{-d s} * cap drops below 1e-20 * (anything useful) quickly.
    let s_hi = s_min + (cap.ln().max(0.0) + 60.0) / d;
    let q = quad::integrate(
        |s| (-d * s).exp() * profile.value_log_coord(s).min(cap),
        s_min,
        s_hi,
        1e-15,
        1e-12,
    )?;
    Ok(q.value)
}

/// Curves over a p grid; evaluations are independent per p and run in
/// parallel with a deterministic output order.
pub fn lp_curve_grid(f: &SpectralScalar, p_values: &[f64]) -> Result<LpNormCurve> {
    let norms = p_values
        .par_iter()
        .map(|&p| lp_norm_grid(f, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(LpNormCurve {
        p_values: p_values.to_vec(),
        norms,
        source: CurveSource::GridField,
    })
}

pub fn lp_curve_radial(profile: &RadialProfile, p_values: &[f64]) -> Result<LpNormCurve> {
    let norms = p_values
        .par_iter()
        .map(|&p| lp_norm_radial(profile, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(LpNormCurve {
        p_values: p_values.to_vec(),
        norms,
        source: CurveSource::RadialProfile,
    })
}

/// Trend verdict for a functional of p as p grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendVerdict {
    TendsToZero,
    BoundedAway,
    Inconclusive,
}

impl std::fmt::Display for TrendVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TrendVerdict::TendsToZero => "tends-to-zero",
            TrendVerdict::BoundedAway => "bounded-away",
            TrendVerdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassVerdicts {
    pub in_l: TrendVerdict,
    pub in_y0: TrendVerdict,
    pub in_lexp: bool,
}

/// Norm curve with the two class functionals and, once classified, the
/// trend verdicts.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub curve: LpNormCurve,
    /// p values the functionals are evaluated at (curve entries with p > 1).
    pub functional_p: Vec<f64>,
    /// (1 / log p) ||f||_p^2 log(1 + ||f||_p)
    pub l_functional: Vec<f64>,
    /// ||f||_p / p
    pub y0_functional: Vec<f64>,
    pub lexp_beta_star: Option<f64>,
    pub verdicts: Option<ClassVerdicts>,
}

/// Pointwise evaluation of both class functionals; entries with p <= 1 are
/// skipped (the 1/log p factor would be undefined).
pub fn class_functionals(curve: LpNormCurve) -> Result<ClassReport> {
    curve.validate()?;
    if curve.p_values.last().copied().unwrap_or(0.0) < 1e3 {
        return Err(CoreError::invalid("p grid must reach at least 1e3"));
    }
    let mut functional_p = Vec::new();
    let mut l_functional = Vec::new();
    let mut y0_functional = Vec::new();
    for (&p, &n) in curve.p_values.iter().zip(curve.norms.iter()) {
        if p <= 1.0 {
            continue;
        }
        functional_p.push(p);
        l_functional.push(n * n * (1.0 + n).ln() / p.ln());
        y0_functional.push(n / p);
    }
    Ok(ClassReport {
        curve,
        functional_p,
        l_functional,
        y0_functional,
        lexp_beta_star: None,
        verdicts: None,
    })
}

/// Input for the exponential-integrability test.
pub enum LexpInput<'a> {
    Profile(&'a RadialProfile),
    GridField(&'a SpectralScalar),
}

const LEXP_CAP: f64 = 1e12;

/// Smallest beta in `beta_list` for which int (e^{|f|/beta} - 1) stays
/// finite below the cap, judged by stabilization under domain refinement.
pub fn lexp_test(input: LexpInput<'_>, beta_list: &[f64]) -> Result<Option<f64>> {
    if beta_list.is_empty() || beta_list.iter().any(|&b| b <= 0.0) {
        return Err(CoreError::invalid("beta list must be positive"));
    }
    if beta_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CoreError::invalid("beta list must be increasing"));
    }
    for &beta in beta_list {
        let finite = match &input {
            LexpInput::GridField(f) => {
                // A grid field is bounded, so the discrete integral is a
                // finite sum; the cap only guards the profile quadrature
                // where a genuine divergence has to be detected.
                let phys = f.to_physical();
                let sum: f64 = phys.iter().map(|v| (v.abs() / beta).exp_m1()).sum();
                (sum * f.grid().cell_area()).is_finite()
            }
            LexpInput::Profile(profile) => lexp_profile_converges(profile, beta)?,
        };
        if finite {
            return Ok(Some(beta));
        }
    }
    Ok(None)
}

/// Integrate c_d e^{-ds} (e^{g(s)/beta} - 1) over expanding windows in the
/// s = -log r coordinate; converged when the window contributions die out.
fn lexp_profile_converges(profile: &RadialProfile, beta: f64) -> Result<bool> {
    let d = profile.dimension as f64;
    let c_d = unit_sphere_area(profile.dimension);
    let s_min = profile.s_min();
    let width = 40.0;
    let mut total = 0.0;
    let mut prev_segment = f64::INFINITY;
    for k in 0..60 {
        let a = s_min + width * k as f64;
        let b = a + width;
        let integrand = |s: f64| {
            let e = profile.value_log_coord(s) / beta - d * s;
            if e > 700.0 {
                f64::INFINITY
            } else {
                e.exp() - (-d * s).exp()
            }
        };
        let segment = match quad::integrate(integrand, a, b, 1e-14, 1e-10) {
            Ok(q) => c_d * q.value,
            Err(CoreError::QuadratureAccuracy { value, .. }) if !value.is_finite() => {
                return Ok(false)
            }
            Err(e) => return Err(e),
        };
        if !segment.is_finite() || total + segment > LEXP_CAP {
            return Ok(false);
        }
        total += segment;
        if k >= 1 && segment <= 1e-12 * total.max(1e-300) {
            return Ok(true);
        }
        if k >= 2 && segment >= 0.9 * prev_segment && segment > 1e-12 * total.max(1e-300) {
            // window contributions stopped decaying: divergent tail
            return Ok(false);
        }
        prev_segment = segment;
    }
    Ok(false)
}

/// Least-squares slope of log(functional) against log(p) over the top
/// decade of the grid, mapped to a trend verdict. Reporting conventions,
/// not a proof: slope below -0.05 counts as decay; otherwise a functional
/// still above 1e-6 counts as bounded away from zero.
fn trend_verdict(p: &[f64], f: &[f64]) -> TrendVerdict {
    let p_max = p.last().copied().unwrap_or(0.0);
    let cut = p_max / 10.0;
    let pts: Vec<(f64, f64)> = p
        .iter()
        .zip(f.iter())
        .filter(|(&pp, _)| pp >= cut)
        .map(|(&pp, &ff)| (pp, ff))
        .collect();
    if pts.len() < 3 {
        return TrendVerdict::Inconclusive;
    }
    if pts.iter().all(|&(_, ff)| ff < 1e-300) {
        return TrendVerdict::TendsToZero;
    }
    if pts.iter().any(|&(_, ff)| ff <= 0.0) {
        return TrendVerdict::Inconclusive;
    }
    let n = pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(pp, ff) in &pts {
        let x = pp.ln();
        let y = ff.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let last = pts.last().unwrap().1;
    if slope < -0.05 {
        TrendVerdict::TendsToZero
    } else if last > 1e-6 {
        TrendVerdict::BoundedAway
    } else {
        TrendVerdict::Inconclusive
    }
}

/// Full classification: functionals, trend verdicts, and the L^exp verdict
/// from a supplied beta scan result.
pub fn classify(curve: LpNormCurve, lexp_beta_star: Option<f64>) -> Result<ClassReport> {
    let mut report = class_functionals(curve)?;
    if report.functional_p.last().copied().unwrap_or(0.0) < 1e3 {
        return Err(CoreError::invalid("functional grid must reach at least 1e3"));
    }
    let in_l = trend_verdict(&report.functional_p, &report.l_functional);
    let in_y0 = trend_verdict(&report.functional_p, &report.y0_functional);
    report.verdicts = Some(ClassVerdicts {
        in_l,
        in_y0,
        in_lexp: lexp_beta_star.is_some(),
    });
    report.lexp_beta_star = lexp_beta_star;
    Ok(report)
}

/// Convenience: default beta scan used by the classification pipeline.
pub fn default_beta_grid() -> Vec<f64> {
    vec![0.1, 0.2, 0.3, 0.45, 0.55, 0.7, 1.0, 1.5, 2.0, 4.0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(unit_sphere_area(1), 2.0, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(2), TWO_PI, max_relative = 1e-14);
        assert_relative_eq!(
            unit_sphere_area(3),
            4.0 * std::f64::consts::PI,
            max_relative = 1e-14
        );
    }

    #[test]
    fn grid_norm_constant_field() {
        let g = Grid::new(32).unwrap();
        let f = SpectralScalar::constant(g, 3.2);
        for &p in &[1.0, 2.5, 7.0] {
            let expected = 3.2 * (TWO_PI * TWO_PI).powf(1.0 / p);
            assert_relative_eq!(lp_norm_grid(&f, p).unwrap(), expected, max_relative = 1e-12);
        }
        assert!(lp_norm_grid(&f, 0.5).is_err());
    }

    #[test]
    fn grid_norm_p2_matches_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Grid::new(64).unwrap();
        let f = crate::spectral::random_trig_scalar(g, 12, 2.0, &mut rng);
        assert_relative_eq!(lp_norm_grid(&f, 2.0).unwrap(), f.l2_norm(), max_relative = 1e-10);
    }

    #[test]
    fn grid_norm_large_p_approaches_max_from_below() {
        let g = Grid::new(64).unwrap();
        let f = SpectralScalar::from_fn(g, |x, y| {
            (-4.0 * ((x - std::f64::consts::PI).powi(2) + (y - std::f64::consts::PI).powi(2)))
                .exp()
        });
        let max = f.to_physical().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let n3 = lp_norm_grid(&f, 1e3).unwrap();
        let n4 = lp_norm_grid(&f, 1e4).unwrap();
        assert!(n3 < n4, "monotone approach: {n3} < {n4}");
        assert!(n4 < max);
        assert!((max - n4) / max < 0.01);
    }

    #[test]
    fn radial_neg_log_closed_forms() {
        // (2 pi Gamma(5) / 2^5)^{1/4} = (3 pi / 2)^{1/4}
        let profile = RadialProfile::neg_log(2);
        let expected = (1.5 * std::f64::consts::PI).powf(0.25);
        assert_relative_eq!(lp_norm_radial(&profile, 4.0).unwrap(), expected, max_relative = 1e-9);
        assert_relative_eq!(exact_neg_log_norm(1.0, 2).unwrap(), std::f64::consts::PI / 2.0, max_relative = 1e-12);
        assert_relative_eq!(exact_neg_log_norm(2.0, 1).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn radial_quadrature_cross_checks_gamma_formula() {
        let profile = RadialProfile::neg_log(2);
        for &p in &[1.0, 2.0, 5.0, 10.0, 25.0, 50.0] {
            let quad_norm = lp_norm_radial(&profile, p).unwrap();
            let exact = exact_neg_log_norm(p, 2).unwrap();
            assert_relative_eq!(quad_norm, exact, max_relative = 1e-8);
        }
    }

    #[test]
    fn radial_volume_formula_for_flat_profile() {
        let profile = RadialProfile::custom(vec![0.0, 0.5], vec![1.0, 1.0], 2).unwrap();
        let expected = (TWO_PI * 0.25 / 2.0).powf(1.0 / 3.0);
        assert_relative_eq!(lp_norm_radial(&profile, 3.0).unwrap(), expected, max_relative = 1e-8);
    }

    #[test]
    fn yudovich_ratio_converges_to_1_over_2e() {
        // ||f||_p / p -> 1/(2e) for the planar -log profile. The approach is
        // O(log p / p): 2.4% off at p = 200, under 0.5% by p = 1000.
        let limit = 0.5 / std::f64::consts::E;
        let r200 = exact_neg_log_norm(200.0, 2).unwrap() / 200.0;
        let r1000 = exact_neg_log_norm(1000.0, 2).unwrap() / 1000.0;
        let r5000 = exact_neg_log_norm(5000.0, 2).unwrap() / 5000.0;
        // dual route: the adaptive radial quadrature confirms the
        // log-Gamma value at p = 200
        let q200 = lp_norm_radial(&RadialProfile::neg_log(2), 200.0).unwrap() / 200.0;
        assert_relative_eq!(r200, q200, max_relative = 1e-8);
        assert_relative_eq!(r200, 0.188_325_964_895_716_9, max_relative = 1e-12);
        assert!((r200 / limit - 1.0).abs() < 0.03);
        assert!((r1000 / limit - 1.0).abs() < 0.01);
        assert!((r5000 / limit - 1.0).abs() < 0.002);
        assert!((r1000 / limit - 1.0).abs() < (r200 / limit - 1.0).abs());
    }

    #[test]
    fn functionals_of_constant_decay() {
        let grid = default_p_grid();
        let norms: Vec<f64> = grid
            .iter()
            .map(|&p| 2.5 * (TWO_PI * TWO_PI).powf(1.0 / p))
            .collect();
        let curve = LpNormCurve { p_values: grid, norms, source: CurveSource::GridField };
        let report = classify(curve, Some(0.1)).unwrap();
        let v = report.verdicts.unwrap();
        assert_eq!(v.in_l, TrendVerdict::TendsToZero);
        assert_eq!(v.in_y0, TrendVerdict::TendsToZero);
        assert!(v.in_lexp);
        // c^2 log(1+c) / log(1e4) for c ~ 2.5
        assert_relative_eq!(
            *report.l_functional.last().unwrap(),
            2.5f64.powi(2) * 3.5f64.ln() / 1e4f64.ln(),
            max_relative = 2e-3
        );
        assert!(report.y0_functional.last().unwrap() < &1e-2);
    }

    #[test]
    fn neg_log_not_in_y0_but_in_lexp() {
        let grid = default_p_grid();
        let norms: Vec<f64> = grid
            .iter()
            .map(|&p| exact_neg_log_norm(p, 2).unwrap())
            .collect();
        let curve = LpNormCurve { p_values: grid, norms, source: CurveSource::RadialProfile };
        let profile = RadialProfile::neg_log(2);
        let beta = lexp_test(LexpInput::Profile(&profile), &default_beta_grid()).unwrap();
        // exact criterion: finite iff beta > 1/d = 1/2
        assert_eq!(beta, Some(0.55));
        let report = classify(curve, beta).unwrap();
        let v = report.verdicts.unwrap();
        assert_eq!(v.in_y0, TrendVerdict::BoundedAway);
        assert!(v.in_lexp);
        let last_y0 = *report.y0_functional.last().unwrap();
        assert!((last_y0 / (0.5 / std::f64::consts::E) - 1.0).abs() < 0.005);
    }

    #[test]
    fn lexp_divergence_below_half_for_neg_log() {
        let profile = RadialProfile::neg_log(2);
        assert_eq!(
            lexp_test(LexpInput::Profile(&profile), &[0.3, 0.45]).unwrap(),
            None
        );
        assert_eq!(
            lexp_test(LexpInput::Profile(&profile), &[0.55, 1.0]).unwrap(),
            Some(0.55)
        );
    }

    #[test]
    fn lexp_grid_cases() {
        let g = Grid::new(32).unwrap();
        let bounded = SpectralScalar::from_fn(g, |x, y| 2.0 + x.sin() * y.cos());
        assert_eq!(
            lexp_test(LexpInput::GridField(&bounded), &[0.05, 1.0]).unwrap(),
            Some(0.05),
            "bounded fields have a finite integral at any beta"
        );
        let zero = SpectralScalar::zeros(g);
        assert_eq!(
            lexp_test(LexpInput::GridField(&zero), &[0.2]).unwrap(),
            Some(0.2)
        );
        assert!(lexp_test(LexpInput::GridField(&zero), &[0.2, 0.1]).is_err());
    }

    #[test]
    fn triple_log_profile_verdicts() {
        // Honest finite-p behavior of log log |log|x||: the Y0 functional
        // decays cleanly, while the L functional *rises* over [1e2, 1e4]
        // (its true decay only sets in astronomically late), so the trend
        // classifier cannot certify the 'in L' membership on this grid.
        let profile = RadialProfile::log_log_abs_log(2);
        let grid = default_p_grid();
        let curve = lp_curve_radial(&profile, &grid).unwrap();
        curve.validate().unwrap();
        let beta = lexp_test(LexpInput::Profile(&profile), &default_beta_grid()).unwrap();
        assert!(beta.is_some());
        let report = classify(curve, beta).unwrap();
        let v = report.verdicts.unwrap();
        assert_eq!(v.in_y0, TrendVerdict::TendsToZero);
        assert!(v.in_lexp);
        let l = &report.l_functional;
        assert!(
            l.last().unwrap() > &l[l.len() - 6],
            "L functional should rise over the top of the default grid"
        );
        assert_eq!(v.in_l, TrendVerdict::BoundedAway);
    }

    #[test]
    fn embedding_witness_across_profiles() {
        // Whatever the classifier decides, the embedding chain must hold as
        // numerical evidence: in L implies in Y0, in Y0 implies some finite
        // exponential integral.
        let betas = default_beta_grid();
        let cases: Vec<(LpNormCurve, Option<f64>)> = vec![
            {
                let grid = default_p_grid();
                let norms = grid.iter().map(|&p| 2.5 * (TWO_PI * TWO_PI).powf(1.0 / p)).collect();
                (
                    LpNormCurve { p_values: grid, norms, source: CurveSource::GridField },
                    Some(0.1),
                )
            },
            {
                let profile = RadialProfile::neg_log(2);
                let grid = default_p_grid();
                (
                    lp_curve_radial(&profile, &grid).unwrap(),
                    lexp_test(LexpInput::Profile(&profile), &betas).unwrap(),
                )
            },
            {
                let profile = RadialProfile::log_abs_log(2);
                let grid = default_p_grid();
                (
                    lp_curve_radial(&profile, &grid).unwrap(),
                    lexp_test(LexpInput::Profile(&profile), &betas).unwrap(),
                )
            },
            {
                let profile = RadialProfile::log_log_abs_log(2);
                let grid = default_p_grid();
                (
                    lp_curve_radial(&profile, &grid).unwrap(),
                    lexp_test(LexpInput::Profile(&profile), &betas).unwrap(),
                )
            },
        ];
        for (curve, beta) in cases {
            let report = classify(curve, beta).unwrap();
            let v = report.verdicts.unwrap();
            if v.in_l == TrendVerdict::TendsToZero {
                assert_eq!(v.in_y0, TrendVerdict::TendsToZero);
            }
            if v.in_y0 == TrendVerdict::TendsToZero {
                assert!(v.in_lexp);
            }
        }
    }

    #[test]
    fn grid_and_radial_paths_agree_on_capped_sample() {
        // Pointwise sample of min(-log r, cap) about the torus center vs the
        // radial quadrature of the same capped profile.
        let g = Grid::new(128).unwrap();
        let cap = -(g.spacing() / 2.0f64).ln();
        let c = std::f64::consts::PI;
        let f = SpectralScalar::from_fn(g, |x, y| {
            let r = ((x - c).powi(2) + (y - c).powi(2)).sqrt();
            if r >= 1.0 {
                0.0
            } else {
                (-r.ln()).min(cap)
            }
        });
        let radii = geometric_grid(1e-9, 1.0, 4000);
        let values: Vec<f64> = radii.iter().map(|&r| (-r.ln()).min(cap)).collect();
        let capped = RadialProfile::custom(radii, values, 2).unwrap();
        for &p in &[2.0, 6.0, 20.0] {
            let grid_norm = lp_norm_grid(&f, p).unwrap();
            let radial_norm = lp_norm_radial(&capped, p).unwrap();
            let rel = (grid_norm / radial_norm - 1.0).abs();
            println!("p = {p}: grid {grid_norm:.6}, radial {radial_norm:.6}, rel {rel:.3e}");
            assert!(rel < 0.05, "consistency at p = {p}: {rel:.3e}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn curves_from_random_fields_are_log_convex(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = Grid::new(32).unwrap();
            let f = crate::spectral::random_trig_scalar(g, 8, 2.0, &mut rng);
            // nonnegative field: square it pointwise
            let phys = f.to_physical().mapv(|v| v * v);
            let f2 = SpectralScalar::from_physical(g, &phys);
            let curve = lp_curve_grid(&f2, &geometric_grid(1.5, 2e3, 15)).unwrap();
            prop_assert!(curve.log_convexity_defect() <= 1e-8);
        }
    }
}
