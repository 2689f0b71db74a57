//! Frank-Wolfe sparse approximation on an explicit kernel matrix.

use acsfw::{binarize, fw_construct, DenseKernel};
use nalgebra::DMatrix;

fn main() -> acsfw::Result<()> {
    // three groups of near-identical feature vectors
    let rows = [
        [1.0, 0.0, 0.0],
        [0.98, 0.05, 0.0],
        [1.02, -0.03, 0.01],
        [0.0, 1.0, 0.0],
        [0.02, 0.97, 0.0],
        [0.0, 0.0, 0.6],
        [0.01, 0.0, 0.62],
    ];
    let v = DMatrix::from_fn(rows.len(), 3, |i, j| rows[i][j]);
    let kernel = DenseKernel::gram(&v)?;
    let state = fw_construct(&kernel, 4)?;
    for (step, (f, g)) in state.selected().iter().zip(state.gammas()).enumerate() {
        println!("step {step}: vertex {f}, gamma {g:.4}");
    }
    println!("weights {:.3?}", state.weights());
    println!("relative residual {:.2e}", (state.residual_sq() / state.total_sq()).sqrt());
    println!("batch {:?}", binarize(&state).indices);
    Ok(())
}
