//! Developing maps (e^{cu} − 1)/c, their affine monodromy, the B1
//! coordinates and two structures on different tori sharing them.

use torus_structures::affine::{
    affine_monodromy, developing_map, monodromy_to_b1, noninjective_pair, schwarzian_numeric, AffineStructure,
    DEFAULT_STEP,
};
use torus_structures::{ComplexValue as C, Result};

fn main() -> Result<()> {
    let s = AffineStructure::new(C::new(0.2, 1.1), C::new(0.7, -0.3))?;
    let m = affine_monodromy(&s);
    println!("monodromy: z -> {:.6} z + {:.6},  z -> {:.6} z + {:.6}", m.a1, m.b1, m.a_tau, m.b_tau);
    let b = monodromy_to_b1(&s)?;
    println!("B1: a1 = {:.6}, a_tau = {:.6}, [{:.6} : {:.6}]", b.a1, b.a_tau, b.bdir[0], b.bdir[1]);
    let f = |u: C| developing_map(s.c, u);
    let sch = schwarzian_numeric(&f, C::new(0.1, 0.1), DEFAULT_STEP)?;
    println!("S(f) = {sch:.9}, expected {:.9}", s.quadratic_differential());

    let (s1, s2) = noninjective_pair(C::new(0.0, 1.0), C::new(0.3, 1.8), 1, -2)?;
    let d = monodromy_to_b1(&s1)?.distance(&monodromy_to_b1(&s2)?);
    println!("(tau, c) = ({}, {:.6}) and ({}, {:.6}): B1 distance {d:.1e}", s1.tau, s1.c, s2.tau, s2.c);
    Ok(())
}
