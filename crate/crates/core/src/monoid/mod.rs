//! Presented monoids and their factorization invariants.

pub(crate) mod engine;
mod family;
mod fg;
mod kernel;
mod ops;
mod presentation;
mod probe;
mod quadrant;
mod report;
mod threshold;

pub use family::primes_squared_bound;
pub use ops::{
    atom_divisors, atoms_up_to, common_divisors, divides, divisors, factorizations, is_atom, is_member, length_set,
    mcds,
};
pub use presentation::{Budget, CustomFamily, Element, FamilyRule, MonoidPresentation};
pub use probe::{probe, Property};
pub use report::{BudgetUsed, Factorization, Listing, ProbeReport, Scope, Verdict, Witness};
