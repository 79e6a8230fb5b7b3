//! Finite groups, bi-sets, characters and exact root-of-unity arithmetic.

mod biset;
mod character;
mod cyclotomic;
mod group;
mod scalar;

pub use biset::{regular_biset, BiSet, BiSetError, RawBiSet, RegularBiSet};
pub use character::{characters_of, Character};
pub use cyclotomic::{cyclotomic_polynomial, sig_digits, CyclotomicError, CyclotomicField, CyclotomicNumber, Polynomial};
pub use group::{
  cyclic_group, direct_product, permutation_index, permutations, symmetric_group, Elem, FiniteGroup, GroupError,
  RawGroup, IDENTITY,
};
pub use scalar::UnitScalar;
