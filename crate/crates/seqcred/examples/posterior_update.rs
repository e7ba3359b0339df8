//! The basic conjugate update: observe a polynomially decaying signal
//! through Gaussian white noise and inspect how the posterior shrinks each
//! coordinate back toward zero as the prior variance decays.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use seqcred::conjugate_posterior::{compute_posterior, DiagonalGaussianPrior};
use seqcred::sequence_model::{generate_observation, polynomial_signal};

fn main() -> seqcred::Result<()> {
    let k = 40;
    let n = 200.0;
    let truth = polynomial_signal(1.0, 1.0, k)?;

    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let obs = generate_observation(&truth, n, &mut rng, 1)?;

    let prior = DiagonalGaussianPrior::new(1.0, 1.0, k)?;
    let post = compute_posterior(&prior, &obs)?;

    println!("n = {n}, K = {k}, prior gamma = {}, tau = {}", prior.gamma(), prior.tau());
    println!("{:>3} {:>9} {:>9} {:>9} {:>9} {:>7}", "k", "truth", "y", "mean", "sd", "shrink");
    for i in (0..8).chain([19, 39]) {
        // shrink = posterior mean / observation: lambda_k / (lambda_k + 1/n)
        let shrink = post.means()[i] / obs.y()[i];
        println!(
            "{:>3} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>7.3}",
            i + 1,
            truth.coeffs()[i],
            obs.y()[i],
            post.means()[i],
            post.variances()[i].sqrt(),
            shrink,
        );
    }

    let sq_err: f64 = post
        .means()
        .iter()
        .zip(truth.coeffs())
        .map(|(m, t)| (m - t) * (m - t))
        .sum();
    println!("\nsquared l2 error of the posterior mean: {sq_err:.5}");
    println!("posterior expected squared distance:    {:.5}", post.variances().iter().sum::<f64>());
    Ok(())
}
