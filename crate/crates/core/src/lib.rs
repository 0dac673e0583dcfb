//! Longest heapable subsequences, permutation-DAG alphabets and maximum
//! binary trees on graphs of bounded treewidth.

pub mod alphabet;
pub mod formats;
pub mod oracles;
pub mod permdag;
pub mod sequences;
pub mod treewidth_mbt;
