//! Two-mode linear circuits: parameterisation, transfer matrix, generator
//! and normal modes.
//!
//! A circuit is described by four real functions of the unknown parameter
//! `phi`, each affine (`offset + slope * phi`). The transfer matrix is
//!
//! ```text
//! T± = e^{-iχ} e^{∓iτ} cos β,    R± = -i e^{-iχ} e^{∓iρ} sin β
//! ```
//!
//! and the scattering operator maps `a+† -> T+ a+† + R+ a-†`,
//! `a-† -> R- a+† + T- a-†`. The generator `H = i S† ∂S/∂phi` is the
//! quadratic form `A+ a+†a+ + A- a-†a- + B a-†a+ + B* a+†a-`.

#[allow(unused_imports)] // inherent once std is linked, e.g. in test builds
use num_traits::Float;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::{linalg::Mat2, Eps};

/// Real affine function `offset + slope * phi`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Affine {
    pub offset: f64,
    pub slope: f64,
}

impl Affine {
    pub const fn new(offset: f64, slope: f64) -> Self {
        Self { offset, slope }
    }

    pub const fn constant(offset: f64) -> Self {
        Self::new(offset, 0.0)
    }

    pub fn eval(&self, phi: f64) -> f64 {
        self.offset + self.slope * phi
    }
}

/// Named circuit configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogTag {
    /// Balanced Mach-Zehnder interferometer: `β = phi/2`, `ρ = -π/2`.
    MachZehnder,
    /// Opposite phase shifts on the two arms: `τ = phi`.
    Antisymmetric,
    /// Equal phase shifts on the two arms: `χ = phi`.
    Symmetric,
    /// Phase shift on one arm only: `χ = τ = phi/2`.
    Unbalanced,
    Custom,
}

impl CatalogTag {
    pub const ALL: [CatalogTag; 4] = [
        CatalogTag::MachZehnder,
        CatalogTag::Antisymmetric,
        CatalogTag::Symmetric,
        CatalogTag::Unbalanced,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CatalogTag::MachZehnder => "mach_zehnder",
            CatalogTag::Antisymmetric => "antisymmetric",
            CatalogTag::Symmetric => "symmetric",
            CatalogTag::Unbalanced => "unbalanced",
            CatalogTag::Custom => "custom",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "mach_zehnder" => Some(CatalogTag::MachZehnder),
            "antisymmetric" => Some(CatalogTag::Antisymmetric),
            "symmetric" => Some(CatalogTag::Symmetric),
            "unbalanced" => Some(CatalogTag::Unbalanced),
            "custom" => Some(CatalogTag::Custom),
            _ => None,
        }
    }
}

/// Affine parameterisation `(β, χ, τ, ρ)` of a two-mode circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitSpec {
    pub beta: Affine,
    pub chi: Affine,
    pub tau: Affine,
    pub rho: Affine,
    pub catalog: Option<CatalogTag>,
}

impl CircuitSpec {
    pub fn custom(beta: Affine, chi: Affine, tau: Affine, rho: Affine) -> Self {
        Self { beta, chi, tau, rho, catalog: Some(CatalogTag::Custom) }
    }

    /// Expand a catalog tag. `Custom` expands to the identity circuit.
    pub fn from_catalog(tag: CatalogTag) -> Self {
        let zero = Affine::default();
        let (beta, chi, tau, rho) = match tag {
            CatalogTag::MachZehnder => {
                (Affine::new(0.0, 0.5), zero, zero, Affine::constant(-FRAC_PI_2))
            }
            CatalogTag::Antisymmetric => (zero, zero, Affine::new(0.0, 1.0), zero),
            CatalogTag::Symmetric => (zero, Affine::new(0.0, 1.0), zero, zero),
            CatalogTag::Unbalanced => (zero, Affine::new(0.0, 0.5), Affine::new(0.0, 0.5), zero),
            CatalogTag::Custom => (zero, zero, zero, zero),
        };
        Self { beta, chi, tau, rho, catalog: Some(tag) }
    }

    pub fn mach_zehnder() -> Self {
        Self::from_catalog(CatalogTag::MachZehnder)
    }

    pub fn antisymmetric() -> Self {
        Self::from_catalog(CatalogTag::Antisymmetric)
    }

    pub fn symmetric() -> Self {
        Self::from_catalog(CatalogTag::Symmetric)
    }

    pub fn unbalanced() -> Self {
        Self::from_catalog(CatalogTag::Unbalanced)
    }

    /// Probability that a single particle entering port `+` leaves port `+`.
    pub fn p_plus(&self, phi: f64) -> f64 {
        let c = self.beta.eval(phi).cos();
        c * c
    }
}

/// Entries of the 2x2 transfer matrix at a given `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub t_plus: Complex64,
    pub t_minus: Complex64,
    pub r_plus: Complex64,
    pub r_minus: Complex64,
}

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix {
        t_plus: Complex64::new(1.0, 0.0),
        t_minus: Complex64::new(1.0, 0.0),
        r_plus: Complex64::new(0.0, 0.0),
        r_minus: Complex64::new(0.0, 0.0),
    };

    /// The array `[[T+, R+], [R-, T-]]` acting on the creation operators.
    pub fn as_matrix(&self) -> Mat2 {
        Mat2::new(self.t_plus, self.r_plus, self.r_minus, self.t_minus)
    }

    /// Action on the single-particle states `(|1,0>, |0,1>)`:
    /// `[[T+, R-], [R+, T-]]`. Column `j` is the image of port `j`.
    pub fn single_particle(&self) -> Mat2 {
        self.as_matrix().transpose()
    }

    /// Largest violation of the unitarity relations between `T±` and `R±`.
    pub fn unitarity_residual(&self) -> f64 {
        let (tp, tm, rp, rm) = (self.t_plus, self.t_minus, self.r_plus, self.r_minus);
        [
            (tp.norm_sqr() + rp.norm_sqr() - 1.0).abs(),
            (tm.norm_sqr() + rm.norm_sqr() - 1.0).abs(),
            (tp.norm_sqr() + rm.norm_sqr() - 1.0).abs(),
            (tm.norm_sqr() + rp.norm_sqr() - 1.0).abs(),
            (tp.conj() * rm + rp.conj() * tm).norm(),
            (tm.conj() * rp + rm.conj() * tp).norm(),
            (tp.conj() * rp + rm.conj() * tm).norm(),
            (tm.conj() * rm + rp.conj() * tp).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `e^{i theta}`, exact when `theta` is an exact multiple of `π/2` in floating
/// point (so catalog circuits give exactly real or imaginary entries).
fn unit_phase(theta: f64) -> Complex64 {
    let q = theta / FRAC_PI_2;
    if q == q.round() && q.abs() < 1e15 {
        return match (q as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, theta)
}

pub fn transfer_matrix(spec: &CircuitSpec, phi: f64) -> TransferMatrix {
    let beta = spec.beta.eval(phi);
    let chi = spec.chi.eval(phi);
    let tau = spec.tau.eval(phi);
    let rho = spec.rho.eval(phi);
    let (sb, cb) = beta.sin_cos();
    let global = unit_phase(-chi);
    let minus_i = Complex64::new(0.0, -1.0);
    TransferMatrix {
        t_plus: global * unit_phase(-tau) * cb,
        t_minus: global * unit_phase(tau) * cb,
        r_plus: minus_i * global * unit_phase(-rho) * sb,
        r_minus: minus_i * global * unit_phase(rho) * sb,
    }
}

/// Generator coefficients together with the normal-mode decomposition.
///
/// `mixing` maps physical to normal modes, `c = mixing · a`. Its rows are the
/// conjugated single-particle eigenvectors, so
/// `mixing · h · mixing† = diag(eps_plus, eps_minus)` where
/// `h = [[a_plus, conj(b)], [b, a_minus]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpectrum {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b: Complex64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub mixing: Mat2,
    /// Set when `b == 0` and `a_plus == a_minus`: the generator is a multiple
    /// of the number operator and `mixing` is the identity by convention.
    pub degenerate: bool,
}

impl GeneratorSpectrum {
    /// Diagonalise the single-particle matrix `[[a_plus, conj(b)], [b, a_minus]]`.
    pub fn from_coefficients(a_plus: f64, a_minus: f64, b: Complex64) -> Self {
        let sum = a_plus + a_minus;
        let diff = a_plus - a_minus;
        let root = (diff * diff + 4.0 * b.norm_sqr()).sqrt();
        // sgn(0) = +1
        let sign = if sum >= 0.0 { 1.0 } else { -1.0 };
        let eps = Eps::new(0.5 * sign * (sum.abs() + root), 0.5 * sign * (sum.abs() - root)).ordered();

        if b == Complex64::new(0.0, 0.0) && a_plus == a_minus {
            return Self {
                a_plus,
                a_minus,
                b,
                eps_plus: a_plus,
                eps_minus: a_plus,
                mixing: Mat2::IDENTITY,
                degenerate: true,
            };
        }

        let v_plus = eigenvector(a_plus, a_minus, b, eps.plus);
        let v_minus = if eps.plus == eps.minus {
            // Only reachable through rounding; keep the pair orthogonal.
            [-v_plus[1].conj(), v_plus[0].conj()]
        } else {
            eigenvector(a_plus, a_minus, b, eps.minus)
        };
        let mixing = Mat2::new(v_plus[0].conj(), v_plus[1].conj(), v_minus[0].conj(), v_minus[1].conj());
        Self { a_plus, a_minus, b, eps_plus: eps.plus, eps_minus: eps.minus, mixing, degenerate: false }
    }

    /// Build the spectrum from a Hermitian single-particle matrix (the
    /// anti-Hermitian part, if any, is discarded).
    pub fn from_matrix(h: &Mat2) -> Self {
        let b = (h[(1, 0)] + h[(0, 1)].conj()) * 0.5;
        Self::from_coefficients(h[(0, 0)].re, h[(1, 1)].re, b)
    }

    pub fn eps(&self) -> Eps {
        Eps::new(self.eps_plus, self.eps_minus)
    }

    /// Single-particle generator matrix `[[A+, B*], [B, A-]]`.
    pub fn single_particle(&self) -> Mat2 {
        Mat2::new(
            Complex64::new(self.a_plus, 0.0),
            self.b.conj(),
            self.b,
            Complex64::new(self.a_minus, 0.0),
        )
    }

    /// Generator already in normal form with the given eigenvalues.
    pub fn diagonal(eps: Eps) -> Self {
        Self::from_coefficients(eps.plus, eps.minus, Complex64::new(0.0, 0.0))
    }
}

/// Normalised eigenvector of `[[ap, conj(b)], [b, am]]` for eigenvalue `e`,
/// phase-fixed so that its first nonzero entry is real and positive.
fn eigenvector(ap: f64, am: f64, b: Complex64, e: f64) -> [Complex64; 2] {
    // Two proportional candidates; take the better conditioned one.
    let first = [b.conj(), Complex64::new(e - ap, 0.0)];
    let second = [Complex64::new(e - am, 0.0), b];
    let n1 = first[0].norm_sqr() + first[1].norm_sqr();
    let n2 = second[0].norm_sqr() + second[1].norm_sqr();
    let (v, n) = if n1 >= n2 { (first, n1) } else { (second, n2) };
    let n = n.sqrt();
    let mut v = [v[0] / n, v[1] / n];
    let lead = if v[0].norm() > 1e-14 { v[0] } else { v[1] };
    let phase = lead.conj() / lead.norm();
    v[0] *= phase;
    v[1] *= phase;
    v
}

/// Generator coefficients from the analytic derivatives of `(β, χ, τ, ρ)`.
pub fn generator(spec: &CircuitSpec, phi: f64) -> GeneratorSpectrum {
    let beta = spec.beta.eval(phi);
    let sum_tr = spec.tau.eval(phi) + spec.rho.eval(phi);
    let d_beta = spec.beta.slope;
    let d_chi = spec.chi.slope;
    let d_sum = spec.tau.slope + spec.rho.slope;
    let d_diff = spec.tau.slope - spec.rho.slope;
    let (s2, c2) = (2.0 * beta).sin_cos();
    let half = 0.5 * (d_sum + d_diff * c2);
    let b = Complex64::new(d_beta, 0.5 * d_diff * s2) * unit_phase(-sum_tr);
    GeneratorSpectrum::from_coefficients(d_chi + half, d_chi - half, b)
}

/// Classical Fisher information `(∂P+/∂phi)^2 / (P+ P-)` of a single particle
/// injected in port `+` and counted at the output ports.
///
/// Where `P+ P-` vanishes the continuous limit `4 β'^2` is returned; it is
/// always finite because `β` is affine.
pub fn classical_fi_single_particle(spec: &CircuitSpec, phi: f64) -> f64 {
    let (sb, cb) = spec.beta.eval(phi).sin_cos();
    let d_beta = spec.beta.slope;
    // P+ P- = sin²β cos²β, kept in product form to avoid 1 - cos²β
    let pp = sb * sb * cb * cb;
    if pp < 1e-12 {
        return 4.0 * d_beta * d_beta;
    }
    let dp = -2.0 * sb * cb * d_beta;
    dp * dp / pp
}

/// Single-particle QFI: the classical term plus `4 P+ P- ((τ - ρ)')^2`.
pub fn qfi_single_particle(spec: &CircuitSpec, phi: f64) -> f64 {
    let (sb, cb) = spec.beta.eval(phi).sin_cos();
    let d_diff = spec.tau.slope - spec.rho.slope;
    classical_fi_single_particle(spec, phi) + 4.0 * sb * sb * cb * cb * d_diff * d_diff
}
