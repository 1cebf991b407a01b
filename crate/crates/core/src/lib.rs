//! Quantum Fisher information for two-mode, particle-number preserving
//! linear circuits.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! machinery; file formats and the command-line front end live in the
//! `bimetro` crate.
//!
//! Overview
//! ========
//!
//! * [`circuit`]: affine circuit parameterisation, transfer matrix, generator
//!   and its normal-mode diagonalisation.
//! * [`fock`]: sparse truncated two-mode Fock states, number moments and the
//!   pure-state QFI as a generator variance.
//! * [`states`]: NOON, quasi-NOON, Poissonian cat and squeezed-vacuum probes.
//! * [`bounds`]: closed-form maximal QFI under a number budget, the
//!   variance-plane geometry and the Gaussian gap.
//! * [`gaussian`]: covariance-matrix calculus for pure two-mode Gaussian
//!   states.
//! * [`oracle`]: brute-force cross-checks (finite-difference generators,
//!   constrained random distributions, explicit operator variances).
//!
//! Every normal-mode quantity follows the ordering `eps_plus^2 >= eps_minus^2`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod circuit;
mod error;
pub mod fock;
pub mod gaussian;
mod linalg;
pub mod oracle;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{Mat2, Mat4};
pub use num_complex::Complex64;

/// Normal-mode eigenvalues `(eps_plus, eps_minus)` of a generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eps {
    pub plus: f64,
    pub minus: f64,
}

impl Eps {
    pub const fn new(plus: f64, minus: f64) -> Self {
        Self { plus, minus }
    }

    /// `|eps_plus - eps_minus|`
    pub fn spread(&self) -> f64 {
        libm::fabs(self.plus - self.minus)
    }

    /// `|eps_plus + eps_minus|`
    pub fn sum_abs(&self) -> f64 {
        libm::fabs(self.plus + self.minus)
    }

    /// Value of the diagonal generator on the normal-mode Fock state `|m, n>`.
    pub fn energy(&self, m: u32, n: u32) -> f64 {
        self.plus * m as f64 + self.minus * n as f64
    }

    /// Swap the two eigenvalues if needed so that `plus^2 >= minus^2`.
    pub fn ordered(self) -> Self {
        if self.plus * self.plus >= self.minus * self.minus {
            self
        } else {
            Self::new(self.minus, self.plus)
        }
    }
}

impl From<(f64, f64)> for Eps {
    fn from((plus, minus): (f64, f64)) -> Self {
        Self::new(plus, minus)
    }
}
