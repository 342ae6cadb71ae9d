//! The headline contrast: in high dimension with high noise, a random
//! balanced partition is already a fixed point of Lloyd's update, so the
//! algorithm returns its initialization. Hartigan's single-sample moves
//! escape and recover the true clusters.

use kmeans_lab::clustering::{
    hartigan_run, init_random_partition, is_lloyd_fixed_point, kmeans_loss, lloyd_run, LloydInit,
    RunConfig,
};
use kmeans_lab::metrics::nmi;
use kmeans_lab::model::{sample_gmm, GmmSpec, Partition};
use kmeans_lab::theory::sigma_balanced;

fn main() -> kmeans_lab::Result<()> {
    let n = 40;
    let sigma = sigma_balanced(1.5, n as f64, 3.0);
    let spec = GmmSpec::balanced(2, 10_000, 1.0, sigma * sigma, n / 2, 2024);
    println!("n = {n}, d = {}, sigma^2 = {:.2}", spec.d, spec.sigma_sq);

    let ds = sample_gmm(&spec)?;
    let labels = ds.labels.clone().unwrap();
    let truth = Partition::new(labels.clone(), 2)?;
    let truth_loss = kmeans_loss(&ds, &truth)?;
    println!("ground-truth loss {truth_loss:.1}");

    let init = init_random_partition(n, 2, 99)?;
    println!(
        "random balanced init: NMI {:.3}, Lloyd fixed point already? {}",
        nmi(init.assign(), &labels)?,
        is_lloyd_fixed_point(&ds, &init, 0.0)?
    );

    let cfg = RunConfig::default();
    let (lp, lrep) = lloyd_run(&ds, LloydInit::Partition(init.clone()), &cfg)?;
    println!(
        "Lloyd:    {} iterations, NMI {:.3}, loss {:.1}",
        lrep.iterations,
        nmi(lp.assign(), &labels)?,
        kmeans_loss(&ds, &lp)?
    );

    let (hp, hrep) = hartigan_run(&ds, init, &cfg)?;
    println!(
        "Hartigan: {} sweeps ({} moves), NMI {:.3}, loss {:.1}",
        hrep.iterations,
        hrep.moves_per_sweep.iter().sum::<usize>(),
        nmi(hp.assign(), &labels)?,
        kmeans_loss(&ds, &hp)?
    );
    Ok(())
}
