//! Exact algebraic models of higher-level Deligne–Lusztig characters of
//! `GL_n` over finite chain rings `O_r = O/π^r`.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. Everything is
//! exact: ring arithmetic is modular, character values live in cyclotomic
//! fields with rational coefficients.
//!
//! Module map:
//!
//! * [`chainring`] – `O_r`, its unramified extensions, Frobenius, Teichmüller lifts.
//! * [`cyclo`] – cyclotomic numbers, roots of unity, finite abelian duality.
//! * [`groups`] – `GL_n(O_r)`, congruence kernels, maximal tori, Weyl groups.
//! * [`tchar`] – torus characters, the β-dictionary and genericity classification.
//! * [`heisenberg`] – the Heisenberg lift `ρ_θ` and its extension `ρ̂_θ`.
//! * [`dlchar`] – the induced character, sign data, orbit map and verifiers.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chainring;
pub mod cyclo;
pub mod dlchar;
mod error;
pub mod fp;
pub mod groups;
pub mod heisenberg;
pub mod tchar;

pub use error::{Error, Result};

/// Default bound on the number of elements any full enumeration may visit.
pub const DEFAULT_GUARD: u64 = 1 << 24;

/// Bound on full enumerations of rings and groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard(pub u64);

impl Default for Guard {
    fn default() -> Self {
        Guard(DEFAULT_GUARD)
    }
}

impl Guard {
    pub fn check(&self, what: &'static str, size: u64) -> Result<()> {
        if size > self.0 {
            Err(Error::GuardExceeded { what, size, limit: self.0 })
        } else {
            Ok(())
        }
    }
}
