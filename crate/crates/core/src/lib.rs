pub mod coefficients;
pub mod cuts;
pub mod extensions;
pub mod exponents;
pub mod ramification;
pub mod scenarios;
pub mod series;
