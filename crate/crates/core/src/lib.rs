//! Cellular normal forms and minimal-model representatives for the
//! simply-typed lambda calculus over one ground type `o` and finitely many
//! ground constants.

pub mod cellular;
pub mod cli;
pub mod kernel;
pub mod model;
pub mod oracle;

pub use kernel::{
    alpha_eq, beta_normalize, eta_long, parse_term, parse_type, print_term, type_of, KernelError,
    Name, Raw, Signature, SimpleType, Term, TypingEnv,
};
