//! PCA baselines on a high-dimensional two-cluster problem: projecting
//! onto the first principal component (or a few) turns a case that stalls
//! Lloyd into an easy one.

use kmeans_lab::clustering::{
    init_random_partition, kmeans_loss, lloyd_run, pca_reduce, pca_split, LloydInit, RunConfig,
};
use kmeans_lab::metrics::nmi;
use kmeans_lab::model::{sample_gmm, GmmSpec, Partition};
use kmeans_lab::theory::sigma_balanced;

fn main() -> kmeans_lab::Result<()> {
    let n = 40;
    let sigma = sigma_balanced(1.25, n as f64, 3.0);
    let spec = GmmSpec::balanced(2, 2000, 1.0, sigma * sigma, n / 2, 5);
    let ds = sample_gmm(&spec)?;
    let labels = ds.labels.clone().unwrap();
    let truth_loss = kmeans_loss(&ds, &Partition::new(labels.clone(), 2)?)?;
    println!(
        "d = {}, sigma^2 = {:.2}, ground-truth loss {truth_loss:.1}",
        spec.d, spec.sigma_sq
    );

    let cfg = RunConfig::default();
    let init = init_random_partition(n, 2, 3)?;

    let (plain, _) = lloyd_run(&ds, LloydInit::Partition(init.clone()), &cfg)?;
    println!(
        "Lloyd on raw data:      NMI {:.3}, loss {:.1}",
        nmi(plain.assign(), &labels)?,
        kmeans_loss(&ds, &plain)?
    );

    // PCA + Lloyd: cluster in the reduced space, score on the original.
    let reduced = pca_reduce(&ds, 2)?;
    let (pca_lloyd, _) = lloyd_run(&reduced, LloydInit::Partition(init), &cfg)?;
    println!(
        "Lloyd after PCA (r=2):  NMI {:.3}, loss {:.1}",
        nmi(pca_lloyd.assign(), &labels)?,
        kmeans_loss(&ds, &pca_lloyd)?
    );

    // PCA + Split: the sign of the first component.
    let split = pca_split(&ds)?;
    println!(
        "PCA + sign split:       NMI {:.3}, loss {:.1}",
        nmi(split.assign(), &labels)?,
        kmeans_loss(&ds, &split)?
    );
    Ok(())
}
