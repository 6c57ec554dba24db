//! Classical modular building blocks.

pub mod eisenstein;
pub mod eta;
pub mod jacobi;
pub mod recipe;
pub mod theta;

pub use eisenstein::{e2, f2, lambda, q_derivative};
pub use eta::{eta, eta_product, eta_quotient, euler_product};
pub use jacobi::{jacobi_generators, JacobiBasis};
pub use recipe::{newform, recipes, t_tilde, FormRecipe, RecipeError};
pub use theta::{theta, theta1_magnitude, theta1_squared, theta_null};
