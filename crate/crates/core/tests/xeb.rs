// SPDX-License-Identifier: Apache-2.0

mod common;

use rcsforge::distributions::theoretical_xeb;
use rcsforge::xeb::{run_xeb, RescaledStream};
use rcsforge::SystemDims;

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn identical_across_thread_counts() {
    let reference = in_pool(1, || run_xeb(70, 200_000, 9, 1).unwrap());
    for t in [2, 8] {
        let est = in_pool(t, || run_xeb(70, 200_000, 9, t).unwrap());
        assert_eq!(est.f_xeb.to_bits(), reference.f_xeb.to_bits());
        assert_eq!(est.three_sigma.to_bits(), reference.three_sigma.to_bits());
    }
}

#[test]
fn unbiased_at_four_qubits() {
    let (ok, votes) = common::two_of_three(|seed| {
        let est = run_xeb(4, 1_000_000, seed, 1).unwrap();
        (est.f_xeb - 15.0 / 17.0).abs() <= 3.0 * est.three_sigma
    });
    assert!(ok, "votes={votes:?}");
}

#[test]
fn error_bar_coverage() {
    let runs = 50;
    let covered = (0..runs)
        .filter(|&seed| run_xeb(70, 100_000, seed, 1).unwrap().covers(1.0))
        .count();
    assert!(covered as f64 / runs as f64 >= 0.98, "{covered}/{runs}");
}

#[test]
fn error_bar_follows_exponential_moments() {
    // For p ~ Exp(1): E p^2 = 2, E p^4 = 24, so Var p^2 = 20.
    let est = run_xeb(70, 1_000_000, 3, 1).unwrap();
    let predicted = 3.0 * (20.0f64 / 1e6).sqrt();
    assert!((est.three_sigma - predicted).abs() / predicted < 0.1);
}

#[test]
fn rescaled_mean_is_one_in_every_regime() {
    for n in [3u64, 53, 54, 1000, 1001] {
        let dims = SystemDims::new(n).unwrap();
        let draws = 1_000_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        let mut bits = rcsforge::xeb::BitString::zeros(n);
        let mut stream = RescaledStream::new(dims, n);
        for _ in 0..draws {
            let p = stream.next_into(&mut bits);
            s1 += p;
            s2 += p * p;
        }
        let mean = s1 / draws as f64;
        let se = ((s2 / draws as f64 - mean * mean) / draws as f64).sqrt();
        assert!((mean - 1.0).abs() < 5.0 * se, "n={n}: {mean} ± {se}");
        assert!(theoretical_xeb(dims) <= 1.0);
    }
}
