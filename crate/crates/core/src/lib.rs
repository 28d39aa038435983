pub mod polyalg;
pub mod ocpmodel;
pub mod compactify;
pub mod hierarchy;
pub mod conicsolve;
pub mod oracles;
pub mod seqsim;
mod upoly;
pub mod cli;
