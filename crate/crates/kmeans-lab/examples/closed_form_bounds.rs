//! Evaluate the closed-form machinery: distance scales, noise thresholds,
//! decay bases, and the union bounds they feed.

use kmeans_lab::theory::{
    alpha_current, alpha_other, hartigan_rho, hartigan_rho_uniform, hartigan_union_bound,
    lloyd_noise_threshold, lloyd_rho, lloyd_rho_balanced, lloyd_union_bound, sigma_balanced,
    HartiganBoundInputs, LloydBoundInputs,
};

fn main() -> kmeans_lab::Result<()> {
    let (tau_sq, c, c_bar): (f64, usize, usize) = (1.0, 20, 20);
    let threshold = lloyd_noise_threshold(tau_sq.sqrt(), c, c_bar);
    println!("single-sample noise threshold at sizes ({c}, {c_bar}): sigma_0 = {threshold:.4}");
    println!("distance scales at sigma^2 = 2 sigma_0^2, purity 1/2:");
    let s2 = 2.0 * threshold * threshold;
    println!(
        "  current cluster: {:.4}",
        alpha_current(tau_sq, s2, c, 0.5)
    );
    println!(
        "  other cluster:   {:.4}",
        alpha_other(tau_sq, s2, c_bar, 0.5)
    );

    println!("\nLloyd decay base rho and switch bound rho^(d/4):");
    println!(
        "{:>8} {:>10} {:>12} {:>12}",
        "beta", "rho", "d=500", "d=5000"
    );
    for beta in [1.25, 2.0, 4.0] {
        let sigma_sq = beta * threshold * threshold;
        let rho = lloyd_rho(&LloydBoundInputs::new(tau_sq, sigma_sq, c, c_bar)?)?;
        println!(
            "{beta:>8} {rho:>10.6} {:>12.4e} {:>12.4e}",
            rho.powf(125.0),
            rho.powf(1250.0)
        );
    }

    println!("\nHartigan stay bound at sizes (20, 20), purities (0.25, 0.75):");
    for beta in [1.25, 2.0, 4.0] {
        let sigma_sq = beta * threshold * threshold;
        let rho = hartigan_rho(&HartiganBoundInputs::new(
            tau_sq, sigma_sq, 20, 20, 0.25, 0.75,
        )?)?;
        println!(
            "  beta {beta}: rho = {rho:.6}, rho^(5000/4) = {:.4e}",
            rho.powf(1250.0)
        );
    }

    println!("\nuniform bounds over all partitions (n = 30, q = 3, beta = 1.5):");
    let n = 30;
    let sigma = sigma_balanced(1.5, n as f64, 3.0);
    let rho_q = lloyd_rho_balanced(sigma, n as f64, 3.0)?;
    let rho_h = hartigan_rho_uniform(tau_sq, sigma * sigma, n, 0.5)?;
    println!("  sigma = {sigma:.3}, rho_q = {rho_q:.8}, rho_h = {rho_h:.10}");
    println!(
        "{:>10} {:>22} {:>22}",
        "d", "P(some balanced not", "P(some incorrect"
    );
    println!(
        "{:>10} {:>22} {:>22}",
        "", "Lloyd-fixed) <=", "Hartigan-fixed) <="
    );
    for d in [10_000, 100_000, 1_000_000] {
        let lb = lloyd_union_bound(n, d, rho_q)?;
        let hb = hartigan_union_bound(n, d, rho_h)?;
        println!(
            "{d:>10} {:>22.4e} {:>22.4e}",
            lb.probability, hb.probability
        );
    }
    Ok(())
}
