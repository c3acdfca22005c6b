pub mod cli;
pub mod curvature;
pub mod grassmann;
pub mod jacobi;
pub mod linalg;
pub mod osserman;
