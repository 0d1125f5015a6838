//! Exact scalars: cyclotomic fields, one adjoined radical, and certified
//! numeric zero tests.

mod cyclo;
mod interval;
mod parse;
mod poly;
mod roots;
mod tower;

pub use cyclo::{normalize_order, Cyclotomic};
pub use interval::{cyclotomic_interval, principal_root_interval, root_of_unity, ComplexInterval, RealBall};
pub use num_rational::BigRational as Rational;
pub use parse::{
    format_cyclotomic, format_radical, format_scalar, parse_radical, parse_scalar,
    parse_scalar_with, ParseError,
};
pub use poly::{cyclotomic_polynomial, euler_phi};
pub use roots::{is_power_of_i, kth_roots, kth_roots_with_precision, positive_real_root, pth_root_in_field};
pub use tower::{
    AlgebraicScalar, Radical, Scalar, ScalarError, Undecided, ZeroTest, DEFAULT_MAX_PRECISION,
};

/// Three-valued zero test of `s` with the given precision ceiling in bits.
pub fn decide_zero(s: &Scalar, max_precision: u32) -> ZeroTest {
    s.decide_zero(max_precision)
}
