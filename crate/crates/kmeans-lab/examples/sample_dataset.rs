//! Draw a dataset from the isotropic Gaussian mixture, write it as CSV,
//! and sanity-check the first two moments of the draw.

use kmeans_lab::model::{sample_gmm_with_centers, write_dataset_csv, GmmSpec};

fn main() -> kmeans_lab::Result<()> {
    let spec = GmmSpec {
        k: 3,
        d: 50,
        tau_sq: 1.0,
        sigma_sq: 4.0,
        class_sizes: vec![30, 20, 10],
        seed: 7,
    };
    let (ds, centers) = sample_gmm_with_centers(&spec)?;
    println!(
        "sampled {} samples in {} dimensions, classes {:?}",
        ds.n(),
        ds.dim(),
        spec.class_sizes
    );

    // Centers are N(0, tau^2) per coordinate.
    let center_var = centers.iter().map(|c| c * c).sum::<f64>() / centers.len() as f64;
    println!(
        "empirical center variance {center_var:.3} (expected around {})",
        spec.tau_sq
    );

    // Within-class differences have variance 2 sigma^2 per coordinate.
    let labels = ds.labels.as_ref().unwrap();
    let (mut sum_sq, mut count) = (0.0, 0usize);
    for i in 0..ds.n() {
        for j in (i + 1)..ds.n() {
            if labels[i] == labels[j] {
                for c in 0..ds.dim() {
                    let diff = ds.data[[i, c]] - ds.data[[j, c]];
                    sum_sq += diff * diff;
                    count += 1;
                }
            }
        }
    }
    println!(
        "within-class difference variance {:.3} (expected around {})",
        sum_sq / count as f64,
        2.0 * spec.sigma_sq
    );

    let path = std::env::temp_dir().join("kmeans_lab_sample.csv");
    write_dataset_csv(&ds, &path, true)?;
    println!("wrote labeled CSV to {}", path.display());
    Ok(())
}
