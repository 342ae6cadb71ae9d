//! Walk all 2^n labeled bipartitions of a small index set and census their
//! balance, comparing the unbalanced fraction against the Hoeffding bound.

use kmeans_lab::model::{size_is_q_balanced, BipartitionIter};

fn main() -> kmeans_lab::Result<()> {
    let n = 12;
    let total = 1u64 << n;
    println!("enumerating {total} labeled bipartitions of [{n}]");

    let nonempty = BipartitionIter::new(n, true)?.count();
    println!("nonempty assignments: {nonempty} (= 2^{n} - 2)");

    println!(
        "\n{:>6} {:>12} {:>16} {:>16}",
        "q", "balanced", "unbalanced frac", "2 exp(-q^2/2)"
    );
    for q in [0.5, 1.0, 2.0, 3.0] {
        let balanced = BipartitionIter::new(n, false)?
            .filter(|p| size_is_q_balanced(p.sizes()[1], n, q))
            .count() as u64;
        // Hoeffding controls deviations of at least q*sqrt(n)/2 from n/2.
        let deviant = BipartitionIter::new(n, false)?
            .filter(|p| (p.sizes()[1] as f64 - n as f64 / 2.0).abs() >= q * (n as f64).sqrt() / 2.0)
            .count() as u64;
        println!(
            "{q:>6} {balanced:>12} {:>16.5} {:>16.5}",
            deviant as f64 / total as f64,
            2.0 * (-q * q / 2.0f64).exp()
        );
    }

    // Sharded iteration covers the same space piece by piece.
    let by_shards: u64 = (0..4)
        .map(|s| {
            BipartitionIter::shard(n, true, s * total / 4, (s + 1) * total / 4, 30)
                .unwrap()
                .count() as u64
        })
        .sum();
    println!("\nfour shards re-count the nonempty assignments: {by_shards}");
    Ok(())
}
