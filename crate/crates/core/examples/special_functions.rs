//! Evaluates the normal CDF, Owen's T and the bivariate normal CDF.

use acsfw::special::{bvn_cdf, log_norm_cdf, norm_cdf, owens_t};

fn main() -> acsfw::Result<()> {
    for z in [-40.0, -5.0, 0.0, 1.0, 3.0] {
        println!("Phi({z:>5}) = {:.17e}   log Phi = {:.6}", norm_cdf(z), log_norm_cdf(z));
    }
    for (h, a) in [(0.5, 2.0), (0.0, 1.0), (2.0, 0.5), (-1.5, 10.0)] {
        println!("T({h}, {a}) = {:.17}", owens_t(h, a)?);
    }
    for (h, k, rho) in [(0.0, 0.0, 0.5), (1.0, -0.5, -0.9), (2.0, 2.0, 0.999)] {
        println!("BvN({h}, {k}; {rho}) = {:.17}", bvn_cdf(h, k, rho)?.value());
    }
    // correlation 1/2 at the origin has the exact value 1/3
    println!("BvN(0, 0; 0.5) - 1/3 = {:e}", bvn_cdf(0.0, 0.0, 0.5)?.value() - 1.0 / 3.0);
    Ok(())
}
