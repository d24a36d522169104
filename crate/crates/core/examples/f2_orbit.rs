//! Orbits of F2 tensors under changes of basis, and their ranks.
//!
//! Spins the orbit of a code under `GL_p x GL_q x GL_r` and compares ranks
//! from the exhaustive oracle across the orbit.
//!
//! ```text
//! cargo run --example f2_orbit [-- CODE]
//! ```

use tensorlab::code::dots_pattern;
use tensorlab::f2::group::product_generators;
use tensorlab::f2::{oracle_rank, spin_orbit};

fn main() -> tensorlab::Result<()> {
    let dims = [2, 2, 3];
    let code: u32 = std::env::args()
        .nth(1)
        .and_then(|s| tensorlab::text::parse_code(&s))
        .map_or(0b100_000_000_001, |c| c as u32);
    let orbit = spin_orbit(dims, code, &product_generators(dims));
    let canonical = *orbit.iter().min().expect("orbit contains the seed");
    let rank = oracle_rank(dims, code as u64)?;
    println!("code      {code} {}", dots_pattern(dims, code));
    println!("canonical {canonical} {}", dots_pattern(dims, canonical));
    println!("orbit size {}, rank {rank}", orbit.len());
    let agree = orbit.iter().all(|&c| oracle_rank(dims, c as u64).ok() == Some(rank));
    println!("rank constant on the orbit: {agree}");
    Ok(())
}
