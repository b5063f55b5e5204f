//! Exact lexicographic cutting planes for integer linear optimization over
//! compact sets that are only accessible through a linear-optimization oracle.

pub mod analysis;
pub mod lattice;
pub mod lex;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod solver;
