//! Monte Carlo check of the chi-squared difference tail bound: the
//! empirical probability of `Y1 - Y2 <= m` never exceeds the Chernoff
//! bound, independent or not.

use kmeans_lab::metrics::wilson_interval;
use kmeans_lab::rng::SplitMix64;
use kmeans_lab::theory::{chi_diff_tail_bound, ScalePair};

fn chi2(rng: &mut SplitMix64, d: usize) -> f64 {
    (0..d).map(|_| rng.next_gaussian().powi(2)).sum()
}

fn main() -> kmeans_lab::Result<()> {
    let samples = 200_000u64;
    println!("{samples} samples per cell");
    println!(
        "{:>6} {:>6} {:>6} {:>4} {:>12} {:>12}",
        "b1", "b2", "m", "d", "empirical", "bound"
    );
    let mut rng = SplitMix64::new(31);
    for (b1, b2, m_unit) in [(2.0, 1.0, 0.0), (3.0, 2.4, 0.5), (10.0, 9.0, -0.5)] {
        for d in [8usize, 32, 128] {
            let m = m_unit * (b1 - b2) * d as f64 / 8.0;
            let sp = ScalePair::new(b1, b2)?;
            let bound = chi_diff_tail_bound(&sp, m, d)?.bound;
            let mut hits = 0u64;
            for _ in 0..samples {
                if b1 * chi2(&mut rng, d) - b2 * chi2(&mut rng, d) <= m {
                    hits += 1;
                }
            }
            let w = wilson_interval(hits, samples - hits, 1.96)?;
            println!(
                "{b1:>6} {b2:>6} {m:>6.1} {d:>4} {:>12.5} {:>12.5} {}",
                w.estimate,
                bound,
                if w.estimate <= bound {
                    "ok"
                } else {
                    "VIOLATED"
                }
            );
        }
    }
    Ok(())
}
