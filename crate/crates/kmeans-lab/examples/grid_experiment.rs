//! A small benchmark grid over (dimension, noise variance): every cell
//! reports mean NMI, win rate against the ground-truth loss, and iteration
//! counts, then lands in a CSV.

use kmeans_lab::experiments::{
    run_grid, write_report, Algorithm, GridSpec, InitStrategy, ReportFormat,
};

fn main() -> kmeans_lab::Result<()> {
    let gs = GridSpec {
        dims: vec![10, 100, 2000],
        noise_vars: vec![0.25, 30.0],
        k: 2,
        samples_per_class: 20,
        tau_sq: 1.0,
        trials: 20,
        algorithms: vec![Algorithm::Lloyd, Algorithm::Hartigan, Algorithm::PcaSplit],
        inits: vec![InitStrategy::RandomPartition],
        master_seed: 12,
    };
    let cells = run_grid(&gs)?;

    println!(
        "{:>6} {:>9} {:>10} {:>9} {:>10} {:>10}",
        "d", "sigma^2", "algorithm", "nmi", "win rate", "iters"
    );
    for cell in &cells {
        println!(
            "{:>6} {:>9} {:>10} {:>9.3} {:>10.2} {:>10.2}",
            cell.d,
            cell.sigma_sq,
            cell.algorithm.name(),
            cell.nmi_mean,
            cell.win_rate_mean,
            cell.iterations_mean
        );
    }

    let path = std::env::temp_dir().join("kmeans_lab_grid.csv");
    write_report(&cells, &path, ReportFormat::Csv)?;
    println!("\nwrote {} cells to {}", cells.len(), path.display());
    Ok(())
}
