pub mod criterion;
pub mod exact;
pub mod expr;
pub mod extended;
pub mod families;
pub mod jet;
pub mod poly;
pub mod ratfun;
pub mod roots;
pub mod sphere;
pub mod zalcman;
pub mod specialfn;

pub use expr::FunctionHandle;
pub use extended::ExtendedComplex;
pub use jet::Jet;
