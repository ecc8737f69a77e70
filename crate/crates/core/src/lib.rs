//! Quasi-exactly-solvable spectra of inverse-quartic radial Hamiltonians,
//! specialized to the three parity sectors of the spin-one
//! Duffin-Kemmer-Petiau equation with a Kratzer-type non-minimal vector
//! coupling.
//!
//! Everything numerical is generic over a [`Real`] scalar (`f32`, `f64` or the
//! double-double [`DoubleDouble`]);
//! the sl(2) generator matrices are generic over a [`Ring`] so they can be
//! audited in exact rational arithmetic. The `*64` aliases below fix the
//! scalar to `f64`, which is what the command-line tool uses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dd;
pub mod dkp;
pub mod heun;
pub mod matrix;
pub mod oracles;
pub mod qes;
pub mod scalar;
pub mod scan;
pub mod verify;

pub use dd::DoubleDouble;
pub use dkp::{
    admissibility, eigenpair, energy_levels, kratzer_from_physical, quantized_level,
    sector_coefficients, solve_determinant_constraint, wavefunction, Admissibility, Condition,
    ConstraintRoot, DkpError, EnergyPair, KratzerPhysical, Parameter, PotentialParams,
    RadialSolution, Sector, SpectrumPoint,
};
pub use heun::{classify, HeunClass, HeunError, Pole, RationalPotential, TranscendentalTerm};
pub use matrix::DenseMatrix;
pub use oracles::{
    commutator_audit, dense_determinant, ode_residual, operator_equivalence, OperatorEquivalence,
    OracleError, ResidualReport,
};
pub use qes::{
    algebraize, build_generators, constraint_roots_in_b, evaluate_solution, normalized_determinant,
    qes_hamiltonian_matrix, recursion_coefficients, solve_quantization, tilde_h_matrix,
    tridiagonal_determinant, Algebraization, DeterminantValue, GeneratorMatrices,
    InverseQuarticCoefficients, PolynomialSolution, QesError, Tridiagonal, WaveValue,
};
pub use scalar::{Real, Ring};

/// Exact rational scalar for generator audits.
pub type Rational = num_rational::Rational64;

pub type InverseQuarticCoefficients64 = InverseQuarticCoefficients<f64>;
pub type Algebraization64 = Algebraization<f64>;
pub type PolynomialSolution64 = PolynomialSolution<f64>;
pub type ExactGenerators = GeneratorMatrices<Rational>;
pub type PotentialParams64 = PotentialParams<f64>;
pub type SpectrumPoint64 = SpectrumPoint<f64>;
pub type RadialSolution64 = RadialSolution<f64>;
