// Augmented Bloch vectors, superoperators and matrix functions of `sI - L0`.
//
// `cargo run --example bloch_algebra`

use noisespec::bloch::{
    anticommutator_superop, commutator_superop, devectorize, matrix_s_function, sigma_theta,
    sigma_x, vectorize, BlochVector, SuperopEigendecomposition,
};
use noisespec::{Result, C64};

pub fn run_example() -> Result<()> {
    let half = C64::new(0.5, 0.0);

    // rho <-> v round trip
    let rho = devectorize(&BlochVector::new(0.3, -0.2, 0.5));
    let v = vectorize(&rho)?;
    println!(
        "v = {:?}, physical: {}",
        v.components(),
        v.is_physical(1e-12)
    );

    // L0 = -i[H0, .] for H0 = (Delta/2) sigma_theta
    let delta = 1.3;
    let h0 = sigma_theta(1.0) * C64::new(0.5 * delta, 0.0);
    let l0 = commutator_superop(&h0)?;
    let l1_plus = anticommutator_superop(&(sigma_x() * half))?;
    println!(
        "L1+ first column = {:?}",
        l1_plus.matrix().column(0).as_slice()
    );

    // eigenvalues {0, 0, +-i Delta}; L0 = P^-1 diag P
    let eig = SuperopEigendecomposition::from_hamiltonian(&h0)?;
    println!("eigenvalues of L0: {:?}", eig.eigenvalues());
    println!(
        "reconstruction error: {:.1e}",
        eig.reconstruction_error(&l0)
    );

    // the resolvent (sI - L0)^-1 as a matrix function of 1/z
    let s = C64::new(0.2, 0.4);
    let r = matrix_s_function(|z| Ok(z.inv()), &eig, s)?;
    let check = (nalgebra::Matrix4::<C64>::identity() * s - l0.complex()) * r;
    println!(
        "|(sI - L0) R - I| = {:.1e}",
        (check - nalgebra::Matrix4::identity()).norm()
    );

    // exact propagator exp(t L0) rotates the Bloch vector
    let vt = eig.propagator(std::f64::consts::PI / delta) * BlochVector::up().as_vector();
    println!("v(pi / Delta) from |0>: {:.6?}", vt.as_slice());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
