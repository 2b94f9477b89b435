pub mod graph;
pub mod linalg;
pub mod kernel;
pub mod patch;
pub mod lattice;
pub mod bec;
pub mod matching;
pub mod generators;
pub mod planar_code;
pub mod cache;
pub mod survey;
