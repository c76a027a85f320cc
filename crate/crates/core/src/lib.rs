pub mod lpcore;
pub mod netgraph;
pub mod radio;
pub mod rng;
pub mod harness;
pub mod scenario;
pub mod solvers;
pub mod uprmodel;
