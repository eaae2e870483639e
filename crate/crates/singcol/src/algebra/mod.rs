pub mod groebner;
pub mod matrix;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod univariate;

pub use groebner::{
    buchberger, local_colength, local_standard_basis, normal_form, standard_monomial_count,
    StandardCount,
};
pub use matrix::{RationalMatrix, SparseRow};
pub use monomial::{Monomial, MonomialOrder, OrderKey, Var};
pub use parse::parse_polynomial;
pub use poly::Polynomial;
pub use rational::Rational;
pub use univariate::Univariate;
