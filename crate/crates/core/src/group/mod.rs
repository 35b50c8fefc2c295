//! Finite groups as multiplication tables, free products in normal form,
//! generating sets and word lengths.

mod free_product;
mod generators;
mod library;
mod table;

pub use free_product::{check_injective_on, Factor, FreeProduct, NormalFormWord, Syllable};
pub use library::group_library;
pub use generators::{cayley_word_length, GeneratingSet, Generators};
pub use table::{FiniteGroupTable, EXHAUSTIVE_ASSOCIATIVITY_MAX};
