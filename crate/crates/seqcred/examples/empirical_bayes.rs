//! Marginal-likelihood selection of the prior regularity. At small n the
//! selected gamma swings with the noise; as n grows it settles near the
//! regularity of the truth.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use seqcred::conjugate_posterior::empirical_bayes_gamma;
use seqcred::sequence_model::{generate_observation, polynomial_signal};

fn main() -> seqcred::Result<()> {
    let beta = 1.5;
    let grid: Vec<f64> = (1..=12).map(|i| 0.25 * i as f64).collect();

    println!("truth: polynomial decay with beta = {beta}; grid 0.25..=3.0 step 0.25");
    println!("{:>7} {:>6} {:>10}", "n", "K", "gamma_hat");
    for (row, n) in [100.0f64, 1000.0, 10_000.0, 100_000.0].into_iter().enumerate() {
        let k = n as usize;
        let truth = polynomial_signal(beta, 1.0, k)?;
        let mut rng = ChaCha12Rng::seed_from_u64(40 + row as u64);
        let obs = generate_observation(&truth, n, &mut rng, 40 + row as u64)?;
        let fit = empirical_bayes_gamma(&obs, &grid, 1.0)?;
        println!("{:>7} {:>6} {:>10.2}", n, k, fit.gamma_hat);
    }

    // The likelihood surface itself, at moderate n.
    let n = 1000.0;
    let truth = polynomial_signal(beta, 1.0, n as usize)?;
    let mut rng = ChaCha12Rng::seed_from_u64(41);
    let obs = generate_observation(&truth, n, &mut rng, 41)?;
    let fit = empirical_bayes_gamma(&obs, &grid, 1.0)?;
    println!("\nlog marginal likelihood over the grid at n = {n}:");
    for (g, ll) in grid.iter().zip(&fit.log_likelihoods) {
        let marker = if *g == fit.gamma_hat { "  <- selected" } else { "" };
        println!("  gamma {g:>5.2}: {ll:>12.2}{marker}");
    }
    Ok(())
}
