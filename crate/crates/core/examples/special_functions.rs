//! The hypergeometric kernels in double and double-double precision.
//!
//!     cargo run --release --example special_functions

use wishart_sum::specfun::dd::Dd;
use wishart_sum::specfun::{hyp1f1, hyp1f1_dd, hyp1f1_deriv, hyp1f1_elementary, hyp2f1, hyp2f1_dd, hyp2f1_deriv};

fn main() -> wishart_sum::Result<()> {
    let (a, b) = (5.0, 15.0);
    for z in [-20.0, -3.5, 0.5, 60.25] {
        let f = hyp1f1(a, b, z)?;
        let kummer = z.exp() * hyp1f1(b - a, b, -z)?;
        let dd = hyp1f1_dd(a, b, Dd::from(z))?.to_dd();
        println!(
            "1F1({a}; {b}; {z}) = {f:.16e}  kummer {kummer:.16e}  elementary {:.16e}  dd {:.16e} + {:.3e}",
            hyp1f1_elementary(5, 10, z)?,
            dd.hi(),
            dd.lo()
        );
    }
    // far past the f64 range of the Kummer partner
    let deep = hyp1f1_dd(a, b, Dd::from(-900.5))?.to_dd();
    println!("1F1({a}; {b}; -900.5) = {:.16e}  dd {:.16e} + {:.3e}", hyp1f1(a, b, -900.5)?, deep.hi(), deep.lo());
    for z in [-7.5, -0.6, 0.3, 0.9] {
        let dd = hyp2f1_dd(5.0, 23.0, 15.0, Dd::from(z), Dd::ONE - Dd::from(z))?.to_dd();
        println!("2F1(5, 23; 15; {z}) = {:.16e}  dd {:.16e} + {:.3e}", hyp2f1(5.0, 23.0, 15.0, z)?, dd.hi(), dd.lo());
    }
    let (z, h) = (-2.0, 1e-5);
    let fd = (hyp1f1(3.0, 8.0, z + h)? - hyp1f1(3.0, 8.0, z - h)?) / (2.0 * h);
    println!("d/dz 1F1(3; 8; {z}): exact {:.12e}, central difference {fd:.12e}", hyp1f1_deriv(1, 3.0, 8.0, z)?);
    let fd = (hyp2f1(2.0, 7.0, 6.0, 0.4 + h)? - hyp2f1(2.0, 7.0, 6.0, 0.4 - h)?) / (2.0 * h);
    println!("d/dz 2F1(2, 7; 6; 0.4): exact {:.12e}, central difference {fd:.12e}", hyp2f1_deriv(1, 2.0, 7.0, 6.0, 0.4)?);
    Ok(())
}
