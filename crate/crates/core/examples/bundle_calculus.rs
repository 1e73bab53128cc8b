//! Intersection numbers, tangency counts, elementary transformations and the
//! genus-g rigidity solve.

use torus_structures::bundle::{
    case_analysis_second_elm, elm_sequence, intersect, poincare_rigidity, tangency_count, HomologyClass,
    SecondElmLocation, SurfaceContext,
};
use torus_structures::{ComplexValue as C, Result};

fn main() -> Result<()> {
    let ctx = SurfaceContext::new(2, 2)?;
    let sigma = HomologyClass::section(3);
    println!("g = 2, e = 2: sigma.sigma = {}, s0.sigma = {}", intersect(&ctx, sigma, sigma), intersect(&ctx, HomologyClass::minimal_section(), sigma));
    println!("Tang(F, s0 + 3f) with d = 0: {}", tangency_count(&ctx, 0, 3)?);
    for g in 1..=4 {
        println!("genus {g}: {:?}", poincare_rigidity(g)?);
    }
    println!("elm track from 0: {:?}", elm_sequence(0, &[true, false, false, true]));
    let u0 = C::new(0.3, 0.2);
    for q in [
        SecondElmLocation::SpecialPoint,
        SecondElmLocation::GenericOffFiber(u0),
        SecondElmLocation::SameFiberGeneric,
        SecondElmLocation::OnSigmaInfinity(u0),
    ] {
        println!("{q:?} -> {:?}", case_analysis_second_elm(q));
    }
    Ok(())
}
