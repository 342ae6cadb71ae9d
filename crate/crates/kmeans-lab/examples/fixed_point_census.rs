//! Exhaustive fixed-point census: sample a few datasets, enumerate every
//! nonempty bipartition, and count which are fixed points of each
//! algorithm. High dimension makes essentially all balanced partitions
//! Lloyd-fixed while Hartigan keeps none of the incorrect ones.

use kmeans_lab::experiments::run_fixed_point_census;

fn main() -> kmeans_lab::Result<()> {
    let (n, tau_sq, beta, q, datasets, seed) = (12, 1.0, 1.5, 3.0, 5, 4);
    for d in [2usize, 4096] {
        let rows = run_fixed_point_census(n, d, tau_sq, beta, q, datasets, seed)?;
        println!(
            "d = {d}: sigma^2 = {:.2}, union-bound logs (lloyd, hartigan) = ({:.1}, {:.1})",
            rows[0].sigma_sq, rows[0].lloyd_union_bound_log, rows[0].hartigan_union_bound_log
        );
        println!(
            "{:>22} {:>10} {:>12} {:>11} {:>15}",
            "dataset seed", "balanced", "lloyd-fixed", "incorrect", "hartigan-fixed"
        );
        for row in &rows {
            println!(
                "{:>22} {:>10} {:>12} {:>11} {:>15}",
                row.dataset_seed,
                row.n_balanced,
                row.n_lloyd_fixed_balanced,
                row.n_incorrect,
                row.n_hartigan_fixed_incorrect
            );
        }
        println!();
    }
    Ok(())
}
