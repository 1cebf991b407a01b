//! Closed-form bounds: maximal QFI under a number budget, Cramer-Rao
//! uncertainties, the variance-plane domain and the Gaussian gap.


#[allow(unused_imports)] // inherent once std is linked, e.g. in test builds
use num_traits::Float;
use crate::{
    circuit::GeneratorSpectrum,
    states::{sigma, NumberBudget},
    Eps, Error, Result,
};

/// Relative slack when testing whether `xi` lies on the arc.
const ARC_TOL: f64 = 1e-12;

/// Point `(Var[m], Var[n], Cov[m,n])` in the variance space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariancePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl VariancePoint {
    /// Point on the plane `x + y + 2z = ΔN^2` of a budget.
    pub fn on_budget(x: f64, y: f64, budget: &NumberBudget) -> Self {
        Self { x, y, z: 0.5 * (budget.var() - x - y) }
    }

    /// `ξ = (x - y) / 2`
    pub fn xi(&self) -> f64 {
        0.5 * (self.x - self.y)
    }

    /// `h^2 = ε+² x + ε-² y + 2 ε+ ε- z`
    pub fn h2(&self, eps: Eps) -> f64 {
        eps.plus * eps.plus * self.x + eps.minus * eps.minus * self.y + 2.0 * eps.plus * eps.minus * self.z
    }
}

/// `(|ε+ - ε-| sqrt(N² + ΔN²) + |ε+ + ε-| ΔN)²`
pub fn max_qfi(budget: &NumberBudget, eps: Eps) -> f64 {
    let n = budget.n_mean();
    let term = eps.spread() * (n * n + budget.var()).sqrt() + eps.sum_abs() * budget.std_dev();
    term * term
}

/// [`max_qfi`] for the eigenvalues of a generator.
pub fn max_qfi_for(budget: &NumberBudget, gen: &GeneratorSpectrum) -> f64 {
    max_qfi(budget, gen.eps())
}

/// Minimal uncertainty `1 / sqrt(ν F)` after `trials` repetitions.
pub fn cramer_rao(fisher: f64, trials: u32) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trial count must be positive"));
    }
    if !(fisher >= 0.0) {
        return Err(Error::InvalidArgument("Fisher information must be non-negative"));
    }
    if fisher == 0.0 {
        return Err(Error::ZeroInformation);
    }
    Ok(1.0 / (trials as f64 * fisher).sqrt())
}

/// Corners `C± = (N² σ±/4, N² σ∓/4)` where the parabolic boundary meets the
/// line `x + y = N²/2 + ΔN²`.
pub fn domain_corners(budget: &NumberBudget) -> (VariancePoint, VariancePoint) {
    let n2 = budget.n_mean() * budget.n_mean();
    let s = sigma(budget);
    let c_plus = VariancePoint::on_budget(n2 * s.sigma_plus / 4.0, n2 * s.sigma_minus / 4.0, budget);
    let c_minus = VariancePoint::on_budget(n2 * s.sigma_minus / 4.0, n2 * s.sigma_plus / 4.0, budget);
    (c_plus, c_minus)
}

/// Residual of the parabola `(x - y)² - 2ΔN²(x + y) + ΔN⁴ = 0`.
pub fn parabola_residual(budget: &NumberBudget, x: f64, y: f64) -> f64 {
    let v = budget.var();
    (x - y) * (x - y) - 2.0 * v * (x + y) + v * v
}

/// Residual of the line `x + y = N²/2 + ΔN²`.
pub fn line_residual(budget: &NumberBudget, x: f64, y: f64) -> f64 {
    x + y - 0.5 * budget.n_mean() * budget.n_mean() - budget.var()
}

/// Half-width `N²(σ+ - σ-)/8` of the `ξ` range between the corners.
pub fn arc_half_width(budget: &NumberBudget) -> f64 {
    let s = sigma(budget);
    budget.n_mean() * budget.n_mean() * (s.sigma_plus - s.sigma_minus) / 8.0
}

fn check_arc(budget: &NumberBudget, xi: f64) -> Result<()> {
    let half_width = arc_half_width(budget);
    if !(xi.abs() <= half_width * (1.0 + ARC_TOL) + ARC_TOL) {
        return Err(Error::OutOfArc { xi, half_width });
    }
    Ok(())
}

/// Generator variance along the parabolic boundary, as a function of `ξ`.
pub fn h2_on_parabola(budget: &NumberBudget, eps: Eps, xi: f64) -> Result<f64> {
    let v = budget.var();
    if v <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    check_arc(budget, xi)?;
    let (p, q) = (eps.plus, eps.minus);
    Ok((p - q) * (p - q) / v * xi * xi + (p * p - q * q) * xi + 0.25 * (p + q) * (p + q) * v)
}

/// Generator variance along the straight boundary between the corners.
pub fn h2_on_line(budget: &NumberBudget, eps: Eps, xi: f64) -> Result<f64> {
    check_arc(budget, xi)?;
    let (p, q) = (eps.plus, eps.minus);
    let n = budget.n_mean();
    Ok((p * p - q * q) * xi + 0.25 * (p - q) * (p - q) * n * n + 0.5 * (p * p + q * q) * budget.var())
}

/// Which corner maximises the generator variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    Plus,
    /// `ε+² = ε-²`: both corners give the same value.
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMaximum {
    /// Supremum of the generator variance over the domain.
    pub h2: f64,
    pub corner: Corner,
    pub point: VariancePoint,
}

impl BoundaryMaximum {
    pub fn degenerate(&self) -> bool {
        self.corner == Corner::Tie
    }
}

/// Maximum of the generator variance over the boundary of the variance-plane
/// domain, evaluated at the corners.
pub fn boundary_maximum(budget: &NumberBudget, eps: Eps) -> BoundaryMaximum {
    let eps = eps.ordered();
    let (c_plus, _) = domain_corners(budget);
    let h2 = c_plus.h2(eps);
    let corner = if eps.plus * eps.plus == eps.minus * eps.minus { Corner::Tie } else { Corner::Plus };
    BoundaryMaximum { h2, corner, point: c_plus }
}

/// The three configurations whose generator is already diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecialCase {
    /// `(ε+, ε-) = (1, -1)`
    Antisymmetric,
    /// `(ε+, ε-) = (1, 1)`
    Symmetric,
    /// `(ε+, ε-) = (1, 0)`
    Unbalanced,
}

impl SpecialCase {
    pub const ALL: [SpecialCase; 3] = [SpecialCase::Antisymmetric, SpecialCase::Symmetric, SpecialCase::Unbalanced];

    pub fn eps(&self) -> Eps {
        match self {
            SpecialCase::Antisymmetric => Eps::new(1.0, -1.0),
            SpecialCase::Symmetric => Eps::new(1.0, 1.0),
            SpecialCase::Unbalanced => Eps::new(1.0, 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpecialCase::Antisymmetric => "antisymmetric",
            SpecialCase::Symmetric => "symmetric",
            SpecialCase::Unbalanced => "unbalanced",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Maximal QFI of a special configuration, with the uncertainty available as
/// a function of the number of trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialCaseBound {
    pub case: SpecialCase,
    pub qfi: f64,
}

impl SpecialCaseBound {
    pub fn delta_phi_min(&self, trials: u32) -> Result<f64> {
        cramer_rao(self.qfi, trials)
    }
}

pub fn special_case_qfi(case: SpecialCase, budget: &NumberBudget) -> SpecialCaseBound {
    let n = budget.n_mean();
    let v = budget.var();
    let qfi = match case {
        SpecialCase::Antisymmetric => 4.0 * (n * n + v),
        SpecialCase::Symmetric => 4.0 * v,
        SpecialCase::Unbalanced => {
            let t = (n * n + v).sqrt() + v.sqrt();
            t * t
        }
    };
    SpecialCaseBound { case, qfi }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianGap {
    /// Maximal QFI at the Gaussian number variance `ΔN² = 2N(N+1)`.
    pub f_tilde: f64,
    /// Best QFI over pure Gaussian states of mean `N`, `8 ε+² N (N+1)`.
    pub f_gauss: f64,
    /// `(f_tilde - f_gauss) / f_tilde`
    pub relative_gap: f64,
    /// Limit of `relative_gap` as `N -> ∞`.
    pub asymptotic_gap: f64,
}

pub fn gaussian_gap(eps: Eps, n_mean: f64) -> Result<GaussianGap> {
    if !(n_mean > 0.0) {
        return Err(Error::InvalidArgument("mean particle number must be positive"));
    }
    let eps = eps.ordered();
    let n = n_mean;
    let (d, s) = (eps.spread(), eps.sum_abs());
    let t = d * (n * (3.0 * n + 2.0)).sqrt() + s * (2.0 * n * (n + 1.0)).sqrt();
    let f_tilde = t * t;
    let f_gauss = 8.0 * eps.plus * eps.plus * n * (n + 1.0);
    // f_tilde - f_gauss expanded so that it vanishes identically when d = 0
    let cross = (2.0 * n * n * (3.0 * n + 2.0) * (n + 1.0)).sqrt() - 2.0 * n * (n + 1.0);
    let excess = d * d * n * n + 2.0 * d * s * cross;
    let relative_gap = if f_tilde > 0.0 { excess / f_tilde } else { 0.0 };
    let denom = 3.0f64.sqrt() * d + 2.0f64.sqrt() * s;
    let asymptotic_gap = if denom > 0.0 {
        d * (d + 2.0 * (6.0f64.sqrt() - 2.0) * s) / (denom * denom)
    } else {
        0.0
    };
    Ok(GaussianGap { f_tilde, f_gauss, relative_gap, asymptotic_gap })
}
