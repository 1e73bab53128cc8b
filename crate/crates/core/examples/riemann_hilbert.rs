//! The monodromy map on connection data: charts, Jacobian, Newton inverse
//! and the induced group law.

use torus_structures::rh::{
    group_law, group_law_residual, rh_inverse, rh_jacobian, rh_map, A0Point, ChartRequest, InverseOptions,
};
use torus_structures::{ComplexValue as C, Result, WeierstrassContext};

fn main() -> Result<()> {
    let ctx = WeierstrassContext::new(C::new(0.0, 1.0), 1e-13)?;
    let p = A0Point::main(C::new(0.3, 0.2), C::new(0.1, 0.4));
    let m = rh_map(&ctx, &p)?;
    println!("M(p) = ({:.9}, {:.9})", m.x, m.y);
    println!("M(zero chart, c0 = 0.5) = {:?}", rh_map(&ctx, &A0Point::zero(C::new(0.5, 0.0)))?);

    let j = rh_jacobian(&ctx, &p, 1e-3)?;
    println!("Jacobian singular values {:.4e}, {:.4e}", j.singular_values[0], j.singular_values[1]);

    let seed = A0Point::main(C::new(0.35, 0.15), C::new(0.0, 0.0));
    let inv = rh_inverse(&ctx, &m, &seed, &InverseOptions::default())?;
    println!("inverse: {:?} after {} iterations", inv.point, inv.iterations);

    let q = A0Point::main(C::new(0.45, 0.6), C::new(-0.2, 0.1));
    let pq = group_law(&ctx, &p, &q, ChartRequest::Auto)?;
    println!("p * q = {pq:?}, residual {:.1e}", group_law_residual(&ctx, &p, &q, &pq)?);
    let doubled = group_law(&ctx, &A0Point::main(C::new(0.5, 0.0), C::new(0.3, 0.0)), &A0Point::main(C::new(0.5, 0.0), C::new(0.3, 0.0)), ChartRequest::Auto)?;
    println!("half-period doubled: {doubled:?}");
    Ok(())
}
