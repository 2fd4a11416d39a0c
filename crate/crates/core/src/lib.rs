pub mod budget;
pub mod cyclo;
pub mod error;
pub mod ffield;
pub mod polyring;
pub mod laurent;
pub mod constraints;
pub mod spectral;
pub mod counting;
pub mod cli;
