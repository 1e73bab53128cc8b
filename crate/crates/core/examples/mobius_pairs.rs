//! Normal forms of commuting Möbius pairs.

use torus_structures::mobius::classify_commuting_pair;
use torus_structures::{ComplexValue as C, MobiusMap, Result};

fn main() -> Result<()> {
    let h = MobiusMap::new(C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(1.0, 1.0), C::new(3.0, 0.0))?;
    let pairs = [
        ("linear", MobiusMap::scaling(C::new(2.0, 0.0))?, MobiusMap::scaling(C::new(0.0, 1.5))?),
        ("euclidean", MobiusMap::translation(C::new(1.0, 0.0)), MobiusMap::translation(C::new(0.2, 1.0))),
        ("dihedral", MobiusMap::scaling(C::new(-1.0, 0.0))?, MobiusMap::inversion()),
    ];
    for (name, f, g) in pairs {
        // hide the normal form behind a conjugation
        let (f, g) = (h.conjugate(&f)?, h.conjugate(&g)?);
        let cl = classify_commuting_pair(&f, &g, 1e-10)?;
        println!("{name}: {:?}", cl.class);
    }
    Ok(())
}
