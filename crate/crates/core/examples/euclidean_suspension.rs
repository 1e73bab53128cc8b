//! dz/du = ℘(u) + γ: transport the Riccati form along the periods, classify
//! the resulting pair of translations and the suspended bundle.

use torus_structures::bundle::classify_suspension;
use torus_structures::mobius::classify_commuting_pair;
use torus_structures::path::{period_loops, DetourSide};
use torus_structures::riccati::{euclidean_monodromy, euclidean_riccati, transport_riccati_map};
use torus_structures::{ComplexValue as C, Result, WeierstrassContext};

fn main() -> Result<()> {
    let ctx = WeierstrassContext::new(C::new(0.5, 3f64.sqrt() / 2.0), 1e-13)?;
    let gamma = C::new(0.8, -0.3);
    let (b1, bt) = euclidean_monodromy(&ctx, gamma);
    println!("closed form: b1 = {b1:.9}, b_tau = {bt:.9}, b_tau - tau b1 = {:.9}", bt - ctx.tau() * b1);

    let eq = euclidean_riccati(&ctx, gamma);
    let (l1, lt) = period_loops(ctx.lattice(), &[C::new(0.0, 0.0)], C::new(0.3, 0.4), 0.05, DetourSide::Ccw)?;
    let f = transport_riccati_map(&eq, &l1)?;
    let g = transport_riccati_map(&eq, &lt)?;
    let cl = classify_commuting_pair(&f, &g, 1e-9)?;
    println!("transported pair: {:?}", cl.class);
    let s = classify_suspension(&cl.class, ctx.tau(), 1e-9)?;
    println!("suspension: {} (e = {})", s.class.tag(), s.class.e());
    Ok(())
}
