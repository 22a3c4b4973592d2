//! Scratch timing probe (not shipped).
use std::time::Instant;

use eoplab_core::{
    eop_estimate, eop_product_estimate, werner, OptimizerOptions, WernerParams,
};
use eoplab_core::sampling::random_density;
use eoplab_core::{ComplexMatrix, DensityOperator};

fn two_qubit(seed: u64) -> DensityOperator {
    let d = random_density(4, 4, seed).unwrap();
    DensityOperator::new(vec![2, 2], d.matrix().clone()).unwrap()
}

fn main() {
    // pure x pure (rank 1): trivial
    let w1 = werner(WernerParams::new(1.0).unwrap());
    let opts = OptimizerOptions { restarts: 2, seed: 3, ..Default::default() };
    let t = Instant::now();
    let c = eop_product_estimate(&w1, &w1, &opts).unwrap();
    println!("W(1)xW(1): {:.6} in {:.2}s", c.best_value(), t.elapsed().as_secs_f64());

    // random mixed pair: the 4096-dim hot path
    let rho = two_qubit(101);
    let sigma = two_qubit(102);
    let opts = OptimizerOptions { restarts: 2, max_iters: 300, seed: 3, ..Default::default() };
    let t = Instant::now();
    let c1 = eop_estimate(&rho, &opts).unwrap();
    let c2 = eop_estimate(&sigma, &opts).unwrap();
    println!("singles: {:.6} + {:.6} in {:.2}s", c1.best_value(), c2.best_value(), t.elapsed().as_secs_f64());
    let t = Instant::now();
    let cp = eop_product_estimate(&rho, &sigma, &opts).unwrap();
    println!(
        "product: {:.6} (sum {:.6}) iters {} in {:.2}s",
        cp.best_value(),
        c1.best_value() + c2.best_value(),
        cp.iterations(),
        t.elapsed().as_secs_f64()
    );
    let _ = ComplexMatrix::identity(2);
}
