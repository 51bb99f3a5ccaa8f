//! Exact enumeration and generating-series toolkit for rooted chord diagrams.

pub mod chord;
pub mod fps;
pub mod gfseries;
pub mod bijections;
pub mod bell;
pub mod asymptotics;
pub mod diffeo;
pub mod yukawa;
