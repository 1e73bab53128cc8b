//! Numerical transport of dz/du = (A(u) + c) z around the periods, compared
//! with the closed-form multipliers.

use torus_structures::rh::{rh_map, A0Point};
use torus_structures::riccati::{monodromy_numeric, LinearFamilyPoint};
use torus_structures::{ComplexValue as C, Result, WeierstrassContext};

fn main() -> Result<()> {
    let ctx = WeierstrassContext::new(C::new(0.5, 1.0), 1e-13)?;
    for (u0, c) in [(C::new(0.3, 0.4), C::new(0.0, 0.0)), (C::new(0.75, 0.5), C::new(-0.4, 0.9))] {
        let num = monodromy_numeric(&ctx, &LinearFamilyPoint::new(&ctx, u0, c)?)?;
        let closed = rh_map(&ctx, &A0Point::main(u0, c))?;
        println!("u0 = {u0}, c = {c}");
        println!("  numeric: x = {:.12}, y = {:.12} (quadrature error {:.1e})", num.x, num.y, num.error);
        println!("  closed:  x = {:.12}, y = {:.12}", closed.x, closed.y);
        println!("  |ratio - 1| = {:.2e}", (num.x / closed.x - 1.0).norm().max((num.y / closed.y - 1.0).norm()));
    }
    Ok(())
}
