//! Pure two-mode Gaussian states in the covariance-matrix picture.
//!
//! Quadratures are ordered `(x+, x-, y+, y-)` with `x = (a + a†)/√2` and
//! `y = (a - a†)/(√2 i)`. States are written in the normal-mode basis of the
//! generator, so only its eigenvalues enter the QFI.

#[allow(unused_imports)] // inherent once std is linked, e.g. in test builds
use num_traits::Float;
use num_complex::Complex64;

use crate::{
    circuit::{GeneratorSpectrum, TransferMatrix},
    linalg::{Mat2, Mat4},
    Eps, Error, Result,
};

const UNITARY_TOL: f64 = 1e-10;

/// Angles `(η, χ, φ, θ)` of the mode-mixing unitary
///
/// ```text
/// U = e^{-iη/2} [[ e^{-i(χ+φ)/2} cos θ/2, -e^{i(χ-φ)/2} sin θ/2 ],
///                [ e^{-i(χ-φ)/2} sin θ/2,  e^{i(χ+φ)/2} cos θ/2 ]]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UnitaryAngles {
    pub eta: f64,
    pub chi: f64,
    pub phi: f64,
    pub theta: f64,
}

impl UnitaryAngles {
    pub const IDENTITY: UnitaryAngles = UnitaryAngles { eta: 0.0, chi: 0.0, phi: 0.0, theta: 0.0 };

    pub fn new(eta: f64, chi: f64, phi: f64, theta: f64) -> Self {
        Self { eta, chi, phi, theta }
    }

    pub fn unitary(&self) -> Mat2 {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let g = Complex64::from_polar(1.0, -0.5 * self.eta);
        let e = |angle: f64| Complex64::from_polar(1.0, 0.5 * angle);
        Mat2::new(
            g * e(-(self.chi + self.phi)) * c,
            -g * e(self.chi - self.phi) * s,
            g * e(-(self.chi - self.phi)) * s,
            g * e(self.chi + self.phi) * c,
        )
    }
}

/// Pure Gaussian state: squeezing `r_plus >= r_minus >= 0` applied to the
/// two modes, mixed by the unitary of `angles`, then displaced to `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPureState {
    r_plus: f64,
    r_minus: f64,
    angles: UnitaryAngles,
    alpha: [Complex64; 2],
}

impl GaussianPureState {
    pub fn new(r_plus: f64, r_minus: f64, angles: UnitaryAngles, alpha: [Complex64; 2]) -> Result<Self> {
        if !(r_minus >= 0.0) || !(r_plus >= r_minus) || !r_plus.is_finite() {
            return Err(Error::InvalidArgument("squeezing must satisfy r_plus >= r_minus >= 0"));
        }
        let finite = [angles.eta, angles.chi, angles.phi, angles.theta].iter().all(|a| a.is_finite())
            && alpha.iter().all(|a| a.re.is_finite() && a.im.is_finite());
        if !finite {
            return Err(Error::InvalidArgument("angles and displacement must be finite"));
        }
        Ok(Self { r_plus, r_minus, angles, alpha })
    }

    pub fn vacuum() -> Self {
        Self { r_plus: 0.0, r_minus: 0.0, angles: UnitaryAngles::IDENTITY, alpha: [Complex64::new(0.0, 0.0); 2] }
    }

    pub fn squeezed_vacuum(r: f64) -> Result<Self> {
        Self::new(r, 0.0, UnitaryAngles::IDENTITY, [Complex64::new(0.0, 0.0); 2])
    }

    pub fn coherent(alpha: [Complex64; 2]) -> Result<Self> {
        Self::new(0.0, 0.0, UnitaryAngles::IDENTITY, alpha)
    }

    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }

    pub fn r_minus(&self) -> f64 {
        self.r_minus
    }

    pub fn angles(&self) -> UnitaryAngles {
        self.angles
    }

    pub fn alpha(&self) -> [Complex64; 2] {
        self.alpha
    }

    pub fn unitary(&self) -> Mat2 {
        self.angles.unitary()
    }

    /// `‖α‖²`
    pub fn displacement_norm_sqr(&self) -> f64 {
        self.alpha[0].norm_sqr() + self.alpha[1].norm_sqr()
    }
}

/// Covariance matrix and displacement vector of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceState {
    pub gamma: Mat4,
    pub d: [f64; 4],
}

impl CovarianceState {
    pub fn vacuum() -> Self {
        Self { gamma: Mat4::identity().scale(0.5), d: [0.0; 4] }
    }

    /// Entrywise deviation of `(ΓΩ)²` from `-I/4`; zero for pure states.
    pub fn purity_residual(&self) -> f64 {
        let go = self.gamma * Mat4::omega();
        (go * go).max_abs_diff(&Mat4::identity().scale(-0.25))
    }

    /// Complex displacements `(⟨a+⟩, ⟨a-⟩)`.
    pub fn alpha(&self) -> [Complex64; 2] {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        [Complex64::new(self.d[0] * s, self.d[2] * s), Complex64::new(self.d[1] * s, self.d[3] * s)]
    }
}

/// Real symplectic orthogonal matrix of the mode transformation `a -> U a`.
pub fn symplectic_of(u: &Mat2) -> Mat4 {
    let mut r = Mat4::ZERO;
    for i in 0..2 {
        for j in 0..2 {
            let z = u[(i, j)];
            r[(i, j)] = z.re;
            r[(i, j + 2)] = -z.im;
            r[(i + 2, j)] = z.im;
            r[(i + 2, j + 2)] = z.re;
        }
    }
    r
}

/// `Γ = R Q² Rᵀ / 2` and `d = √2 (Re α, Im α)`.
pub fn to_covariance(state: &GaussianPureState) -> CovarianceState {
    let r = symplectic_of(&state.unitary());
    let (p, m) = (2.0 * state.r_plus, 2.0 * state.r_minus);
    let q2 = Mat4::diag([p.exp(), m.exp(), (-p).exp(), (-m).exp()]);
    let mut gamma = (r * q2 * r.transpose()).scale(0.5);
    symmetrize(&mut gamma);
    let s = core::f64::consts::SQRT_2;
    let [a, b] = state.alpha;
    CovarianceState { gamma, d: [s * a.re, s * b.re, s * a.im, s * b.im] }
}

fn symmetrize(m: &mut Mat4) {
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Propagate a state through a circuit with the given transfer matrix.
pub fn evolve(state: &CovarianceState, tm: &TransferMatrix) -> Result<CovarianceState> {
    rotate(state, &tm.single_particle())
}

/// Apply the passive mode transformation `u` (same convention as
/// `fock::mode_rotate`).
pub fn rotate(state: &CovarianceState, u: &Mat2) -> Result<CovarianceState> {
    let u = *u;
    let deviation = u.unitarity_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NonUnitary { deviation });
    }
    let r = symplectic_of(&u);
    let mut gamma = r * state.gamma * r.transpose();
    symmetrize(&mut gamma);
    Ok(CovarianceState { gamma, d: r.apply(&state.d) })
}

/// Symplectic eigenvalues `(ν1, ν2)`, `ν1 >= ν2`: the moduli of the
/// eigenvalues of the antisymmetric matrix `Γ^{1/2} Ω Γ^{1/2}`, read off from
/// the symmetric matrix `-(Γ^{1/2} Ω Γ^{1/2})²` whose spectrum is
/// `(ν2², ν2², ν1², ν1²)`.
pub fn symplectic_eigenvalues(gamma: &Mat4) -> (f64, f64) {
    let (w, v) = gamma.symmetric_eigen();
    let root = v * Mat4::diag(w.map(|x| x.max(0.0).sqrt())) * v.transpose();
    let a = root * Mat4::omega() * root;
    let mut m = (a * a).scale(-1.0);
    symmetrize(&mut m);
    let (nu2, _) = m.symmetric_eigen();
    let hi = (0.5 * (nu2[2] + nu2[3])).max(0.0).sqrt();
    let lo = (0.5 * (nu2[0] + nu2[1])).max(0.0).sqrt();
    (hi, lo)
}

/// Real antisymmetric `K` with `H = iK` the quadrature generator of the
/// normal-mode phase shifts.
fn generator_block(eps: Eps) -> Mat4 {
    let mut k = Mat4::ZERO;
    k[(0, 2)] = eps.plus;
    k[(1, 3)] = eps.minus;
    k[(2, 0)] = -eps.plus;
    k[(3, 1)] = -eps.minus;
    k
}

/// `F = ½ (Tr K² - Tr(Γ⁻¹ K Γ K)) + (Kd)ᵀ Γ⁻¹ (Kd)` for a given inverse.
fn qfi_from_inverse(cov: &CovarianceState, inv: &Mat4, eps: Eps) -> f64 {
    let k = generator_block(eps);
    let first = 0.5 * ((k * k).trace() - (*inv * k * cov.gamma * k).trace());
    let kd = k.apply(&cov.d);
    let w = inv.apply(&kd);
    let second: f64 = kd.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
    first + second
}

/// QFI of a pure covariance state, inverting `Γ` through `Γ⁻¹ = 4 Ωᵀ Γ Ω`.
pub fn covariance_qfi(cov: &CovarianceState, eps: Eps) -> Result<f64> {
    let omega = Mat4::omega();
    let inv = (omega.transpose() * cov.gamma * omega).scale(4.0);
    if inv.0.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::SingularCovariance);
    }
    Ok(qfi_from_inverse(cov, &inv, eps))
}

/// QFI of an arbitrary (possibly mixed) covariance state for the same
/// quadratic generator, using a generic inverse of `Γ`. Only meaningful
/// for pure states, kept as an independent check.
pub fn covariance_qfi_generic(cov: &CovarianceState, eps: Eps) -> Result<f64> {
    let inv = cov.gamma.inverse(1e-15).ok_or(Error::SingularCovariance)?;
    Ok(qfi_from_inverse(cov, &inv, eps))
}

/// The two contributions of the closed-form QFI together with the direct
/// covariance evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianQfiParts {
    /// Squeezing contribution.
    pub f1: f64,
    /// Displacement contribution.
    pub f2: f64,
    /// Direct evaluation from `(Γ, d, K)`.
    pub direct: f64,
}

impl GaussianQfiParts {
    pub fn total(&self) -> f64 {
        self.f1 + self.f2
    }

    /// `|total - direct|` relative to `max(1, total)`.
    pub fn disagreement(&self) -> f64 {
        (self.total() - self.direct).abs() / self.total().abs().max(1.0)
    }
}

/// Squeezing contribution in closed form in terms of the unitary angles.
pub fn qfi_squeezing_part(state: &GaussianPureState, eps: Eps) -> f64 {
    let mean = 0.5 * (eps.plus + eps.minus);
    let delta = eps.plus - eps.minus;
    let (rp, rm) = (state.r_plus, state.r_minus);
    let (st, ct) = state.angles.theta.sin_cos();
    let sx = state.angles.chi.sin();
    let a = mean + 0.5 * delta * ct;
    let b = mean - 0.5 * delta * ct;
    let (s2p, s2m) = ((2.0 * rp).sinh(), (2.0 * rm).sinh());
    let ssum = (rp + rm).sinh();
    2.0 * a * a * s2p * s2p
        + 2.0 * b * b * s2m * s2m
        + delta * delta * st * st * (ssum * ssum - sx * sx * s2p * s2m)
}

/// Displacement contribution `4 Σ_k [cosh 2r_k |β_k|² + sinh 2r_k Re β_k²]`
/// with `β = U† ε α`.
pub fn qfi_displacement_part(state: &GaussianPureState, eps: Eps) -> f64 {
    let ea = [state.alpha[0] * eps.plus, state.alpha[1] * eps.minus];
    let beta = state.unitary().adjoint().apply(ea);
    [state.r_plus, state.r_minus]
        .iter()
        .zip(beta.iter())
        .map(|(r, b)| (2.0 * r).cosh() * b.norm_sqr() + (2.0 * r).sinh() * (b * b).re)
        .sum::<f64>()
        * 4.0
}

pub fn gaussian_qfi_parts(state: &GaussianPureState, eps: Eps) -> Result<GaussianQfiParts> {
    let direct = covariance_qfi(&to_covariance(state), eps)?;
    Ok(GaussianQfiParts { f1: qfi_squeezing_part(state, eps), f2: qfi_displacement_part(state, eps), direct })
}

/// QFI of a pure Gaussian state, expressed in the normal modes of `gen`.
pub fn gaussian_qfi(state: &GaussianPureState, gen: &GeneratorSpectrum) -> Result<f64> {
    gaussian_qfi_eps(state, gen.eps())
}

pub fn gaussian_qfi_eps(state: &GaussianPureState, eps: Eps) -> Result<f64> {
    let parts = gaussian_qfi_parts(state, eps)?;
    // the direct path loses about e^{4r} ulps; only compare where that is small
    debug_assert!(
        state.r_plus > 4.0 || parts.disagreement() < 1e-8,
        "closed-form and direct Gaussian QFI disagree: {parts:?}"
    );
    Ok(parts.total())
}

/// Mean and variance of the total particle number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianNumberMoments {
    pub mean: f64,
    pub var: f64,
}

/// Number statistics of a pure Gaussian state.
///
/// `⟨N⟩ = ½(Tr Γ + |d|² - 2)`. Expanding `N² ` in quadratures and applying
/// Wick's theorem to the centred fourth moments gives
/// `Var N = ½(Tr Γ² - 1) + dᵀ Γ d`.
pub fn gaussian_number_moments(state: &GaussianPureState) -> GaussianNumberMoments {
    covariance_number_moments(&to_covariance(state))
}

pub fn covariance_number_moments(cov: &CovarianceState) -> GaussianNumberMoments {
    let d2: f64 = cov.d.iter().map(|x| x * x).sum();
    let mean = 0.5 * (cov.gamma.trace() + d2 - 2.0);
    let gd = cov.gamma.apply(&cov.d);
    let dgd: f64 = cov.d.iter().zip(gd.iter()).map(|(a, b)| a * b).sum();
    let var = 0.5 * ((cov.gamma * cov.gamma).trace() - 1.0) + dgd;
    GaussianNumberMoments { mean, var }
}

/// `r = ½ ln(1 + 2N + 2 sqrt(N(N+1)))`, i.e. `sinh² r = N`.
pub fn optimal_squeezing(n_mean: f64) -> f64 {
    (n_mean.sqrt()).asinh()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalGaussian {
    pub state: GaussianPureState,
    pub qfi: f64,
}

/// Best pure Gaussian probe of mean particle number `n_mean`: a squeezed
/// vacuum in the normal mode of larger `|ε|`, vacuum in the other.
pub fn optimal_gaussian(n_mean: f64, eps: Eps) -> Result<OptimalGaussian> {
    if !(n_mean > 0.0) || !n_mean.is_finite() {
        return Err(Error::InvalidArgument("mean particle number must be positive"));
    }
    let r = optimal_squeezing(n_mean);
    // squeeze mode + unless mode - carries the larger eigenvalue
    let theta = if eps.minus * eps.minus > eps.plus * eps.plus { core::f64::consts::PI } else { 0.0 };
    let angles = UnitaryAngles::new(0.0, 0.0, 0.0, theta);
    let state = GaussianPureState::new(r, 0.0, angles, [Complex64::new(0.0, 0.0); 2])?;
    let top = eps.ordered().plus;
    Ok(OptimalGaussian { state, qfi: 8.0 * top * top * n_mean * (n_mean + 1.0) })
}

/// Best QFI over squeezings and displacement directions at fixed mean `N`
/// and displacement norm `‖α‖² = alpha2`; decreasing in `alpha2`.
pub fn max_qfi_given_displacement(n_mean: f64, alpha2: f64, eps: Eps) -> Result<f64> {
    if !(n_mean >= 0.0) || !(alpha2 >= 0.0) || alpha2 > n_mean {
        return Err(Error::InvalidArgument("displacement norm must lie in [0, N]"));
    }
    let top = eps.ordered().plus;
    let rest = n_mean - alpha2;
    let root = (rest * (1.0 + rest)).sqrt();
    Ok(4.0 * top * top * (2.0 * rest * (1.0 + rest) + alpha2 * (1.0 + 2.0 * rest + 2.0 * root)))
}

/// `4 ε+² ‖α‖² e^{2 r+}`, the ceiling of the displacement contribution.
pub fn displacement_ceiling(state: &GaussianPureState, eps: Eps) -> f64 {
    let top = eps.ordered().plus;
    4.0 * top * top * state.displacement_norm_sqr() * (2.0 * state.r_plus).exp()
}

/// Displacement of norm `norm` that saturates [`displacement_ceiling`] for
/// the given unitary angles, assuming `ε+² >= ε-²`. When `ε+² > ε-²` the
/// ceiling is only reached with `θ = 0`.
pub fn saturating_alpha(norm: f64, angles: &UnitaryAngles, eps: Eps) -> [Complex64; 2] {
    if eps.plus * eps.plus != eps.minus * eps.minus {
        let lead = Complex64::from_polar(norm, -0.5 * (angles.eta + angles.chi + angles.phi));
        [lead, Complex64::new(0.0, 0.0)]
    } else {
        let g = Complex64::from_polar(norm, -0.5 * (angles.eta + angles.chi));
        let (s, c) = (0.5 * angles.theta).sin_cos();
        [g * Complex64::from_polar(c, -0.5 * angles.phi), g * Complex64::from_polar(s, 0.5 * angles.phi)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ANTI: Eps = Eps::new(1.0, -1.0);

    #[test]
    fn vacuum_covariance() {
        let cov = to_covariance(&GaussianPureState::vacuum());
        assert!(cov.gamma.max_abs_diff(&Mat4::identity().scale(0.5)) < 1e-15);
        assert_eq!(cov.d, [0.0; 4]);
        assert_eq!(gaussian_qfi_eps(&GaussianPureState::vacuum(), ANTI).unwrap(), 0.0);
    }

    #[test]
    fn squeezed_covariance() {
        let r = 0.7;
        let cov = to_covariance(&GaussianPureState::squeezed_vacuum(r).unwrap());
        let expect = Mat4::diag([(2.0 * r).exp(), 1.0, (-2.0 * r).exp(), 1.0]).scale(0.5);
        assert!(cov.gamma.max_abs_diff(&expect) < 1e-15);
        let (a, b) = symplectic_eigenvalues(&cov.gamma);
        assert!((a - 0.5).abs() < 1e-12 && (b - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unitary_is_unitary_and_r_orthogonal_symplectic() {
        let u = UnitaryAngles::new(0.3, -1.1, 2.0, 0.9).unitary();
        assert!(u.unitarity_deviation() < 1e-15);
        let r = symplectic_of(&u);
        assert!((r * r.transpose()).max_abs_diff(&Mat4::identity()) < 1e-14);
        let o = Mat4::omega();
        assert!((r * o * r.transpose()).max_abs_diff(&o) < 1e-14);
    }

    #[test]
    fn optimal_state_values() {
        let opt = optimal_gaussian(4.0, ANTI).unwrap();
        assert!((opt.state.r_plus() - (2.0 + 5.0f64.sqrt()).ln()).abs() < 1e-14);
        assert!((opt.qfi - 160.0).abs() < 1e-12);
        let f = gaussian_qfi_eps(&opt.state, ANTI).unwrap();
        assert!((f - 160.0).abs() < 1e-10);
        let mom = gaussian_number_moments(&opt.state);
        assert!((mom.mean - 4.0).abs() < 1e-10);
        assert!((mom.var - 40.0).abs() < 1e-10);
        assert!((optimal_gaussian(4.0, Eps::new(1.0, 1.0)).unwrap().qfi - 160.0).abs() < 1e-12);
    }

    #[test]
    fn swapped_eigenvalues_squeeze_the_other_mode() {
        let eps = Eps::new(0.2, -1.0);
        let opt = optimal_gaussian(2.0, eps).unwrap();
        let f = gaussian_qfi_eps(&opt.state, eps).unwrap();
        assert!((f - opt.qfi).abs() < 1e-10 * opt.qfi);
    }

    #[test]
    fn coherent_qfi_and_moments() {
        let alpha = Complex64::new(1.2, -0.4);
        let s = GaussianPureState::coherent([alpha, Complex64::new(0.0, 0.0)]).unwrap();
        let f = gaussian_qfi_eps(&s, ANTI).unwrap();
        assert!((f - 4.0 * alpha.norm_sqr()).abs() < 1e-12);
        let m = gaussian_number_moments(&s);
        assert!((m.mean - alpha.norm_sqr()).abs() < 1e-12);
        assert!((m.var - alpha.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn two_paths_agree_on_a_generic_state() {
        let s = GaussianPureState::new(
            0.9,
            0.35,
            UnitaryAngles::new(0.4, 1.3, -0.8, 2.1),
            [Complex64::new(0.3, -0.7), Complex64::new(-1.1, 0.2)],
        )
        .unwrap();
        let eps = Eps::new(0.8, -0.3);
        let p = gaussian_qfi_parts(&s, eps).unwrap();
        assert!(p.disagreement() < 1e-10, "{p:?}");
        let generic = covariance_qfi_generic(&to_covariance(&s), eps).unwrap();
        assert!((generic - p.direct).abs() < 1e-9 * p.direct.max(1.0));
    }

    #[test]
    fn displacement_limit_matches_optimum() {
        let f = max_qfi_given_displacement(4.0, 0.0, ANTI).unwrap();
        assert!((f - 160.0).abs() < 1e-12);
        let f = max_qfi_given_displacement(4.0, 4.0, ANTI).unwrap();
        assert!((f - 16.0).abs() < 1e-12);
    }

    #[test]
    fn saturating_direction_reaches_ceiling() {
        let angles = UnitaryAngles::new(0.7, -0.2, 1.4, 0.0);
        let eps = Eps::new(1.0, 0.4);
        let alpha = saturating_alpha(0.8, &angles, eps);
        let s = GaussianPureState::new(0.6, 0.1, angles, alpha).unwrap();
        let f2 = qfi_displacement_part(&s, eps);
        assert!((f2 - displacement_ceiling(&s, eps)).abs() < 1e-12);
    }

    #[test]
    fn evolve_identity_and_vacuum() {
        let s = to_covariance(&GaussianPureState::squeezed_vacuum(0.5).unwrap());
        let same = evolve(&s, &TransferMatrix::IDENTITY).unwrap();
        assert!(same.gamma.max_abs_diff(&s.gamma) < 1e-15);
        let tm = crate::circuit::transfer_matrix(&crate::circuit::CircuitSpec::mach_zehnder(), 0.4);
        let v = evolve(&CovarianceState::vacuum(), &tm).unwrap();
        assert!(v.gamma.max_abs_diff(&Mat4::identity().scale(0.5)) < 1e-15);
    }
}
