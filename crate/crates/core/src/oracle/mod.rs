//! Independent ground truth on `X = Z`: root counting, Wiener–Hopf
//! factorization, kernels, Hankel matrices and Nehari distances.

pub mod factor;
pub mod hankel;
pub mod laurent;
pub mod rational;
pub mod roots;

pub use factor::{
    analytic_spectrum_membership, factorize, kernel_cokernel, FactorizationResult, KernelCokernel, Membership,
};
pub use hankel::{
    hankel_block, hankel_spectrum, nehari_distance, unimodular_invertibility, FourierSymbol, HankelSpectrum,
    Invertibility, UnimodularReport,
};
pub use laurent::{LaurentPolynomial, Root, RootLocation, RootSet, ZWinding};
pub use rational::{blaschke, RationalSymbol};
