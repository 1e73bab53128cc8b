//! Invariants and function values for the square lattice.

use torus_structures::{ComplexValue, Result, WeierstrassContext};

fn main() -> Result<()> {
    let ctx = WeierstrassContext::new(ComplexValue::new(0.0, 1.0), 1e-13)?;
    println!("g2 = {:.12}, g3 = {:.3e}", ctx.g2(), ctx.g3().norm());
    println!("eta1 = {:.12}, eta_tau = {:.12}", ctx.eta1(), ctx.eta_tau());
    println!("Legendre residual = {:.2e}", ctx.legendre_residual().norm());
    for u in [ComplexValue::new(0.3, 0.2), ComplexValue::new(0.5, 0.0), ComplexValue::new(0.25, 0.5)] {
        let v = ctx.values(u)?;
        println!(
            "u = {u:.2}: wp = {:.9}, wp' = {:.9}, zeta = {:.9}, sigma = {:.9}",
            v.wp,
            v.wp_prime,
            v.zeta,
            ctx.sigma(u)
        );
    }
    Ok(())
}
