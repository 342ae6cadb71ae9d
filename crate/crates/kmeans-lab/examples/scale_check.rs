//! Moment check for the distance-scale laws: with partition and labels
//! held fixed across replicates, the squared distance from a sample to a
//! centroid is a scaled chi-squared variable, so its mean is alpha*d and
//! its variance 2*alpha^2*d.

use kmeans_lab::experiments::{run_scale_check, ScaleCheckConfig};

fn main() -> kmeans_lab::Result<()> {
    for (label, from0) in [("pure current cluster", 6), ("mixed current cluster", 3)] {
        let cfg = ScaleCheckConfig {
            class_sizes: (6, 6),
            cluster_size: 6,
            in_cluster_from_class0: from0,
            tau_sq: 1.0,
            sigma_sq: 2.0,
            d: 64,
            replicates: 4000,
            master_seed: 21,
        };
        println!("{label} (purity {}):", from0 as f64 / 6.0);
        for row in run_scale_check(&cfg)? {
            println!(
                "  {:>8}: mean {:>8.2} vs {:>8.2} ({:+.2} se) | var {:>9.1} vs {:>9.1} ({:+.2} se)",
                row.which,
                row.empirical_mean,
                row.expected_mean,
                (row.empirical_mean - row.expected_mean) / row.se_mean,
                row.empirical_var,
                row.expected_var,
                (row.empirical_var - row.expected_var) / row.se_var,
            );
        }
    }
    Ok(())
}
