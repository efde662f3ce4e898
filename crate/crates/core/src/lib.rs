pub mod cli;
pub mod discrete_oracle;
pub mod exact;
pub mod field;
pub mod height_bounds;
pub mod kernel;
pub mod quadrature;
pub mod padic_equilibrium;
pub mod real_equilibrium;
