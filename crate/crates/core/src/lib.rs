pub mod abelianize;
pub mod expr;
pub mod gauge;
pub mod lie;
pub mod models;
pub mod par;
pub mod poisson;
