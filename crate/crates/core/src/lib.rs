pub mod driver;
pub mod elaborate;
pub mod eval;
pub mod fomega;
pub mod kinds;
pub mod resolution;
pub mod surface;
pub mod syntax;
pub mod typing;
