//! Calibrate credible balls from posterior draws in all three norms and
//! test whether the truth lands inside, with and without a blow-up factor.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use seqcred::conjugate_posterior::{compute_posterior, sample_posterior, DiagonalGaussianPrior};
use seqcred::credible_sets::{calibrate_radius, CredibleBall, NormSpec};
use seqcred::norms::{EllipsoidWeightSpec, MultiscaleWeightSpec};
use seqcred::sequence_model::{generate_observation, polynomial_signal, SignalVector};

fn main() -> seqcred::Result<()> {
    let n = 500.0;
    let s = 20_000;
    let mut rng = ChaCha12Rng::seed_from_u64(2);

    // Single-indexed case: l2 and ellipsoid balls around the same center.
    let k = 100;
    let truth = polynomial_signal(1.0, 1.0, k)?;
    let obs = generate_observation(&truth, n, &mut rng, 2)?;
    let post = compute_posterior(&DiagonalGaussianPrior::new(1.0, 1.0, k)?, &obs)?;
    let draws = sample_posterior(&post, s, &mut rng)?;

    println!("n = {n}, K = {k}, S = {s} posterior draws");
    println!("{:>11} {:>6} {:>8} {:>14} {:>16}", "norm", "alpha", "radius", "truth inside?", "inside at L=1.5?");
    for norm in [NormSpec::L2, NormSpec::Ellipsoid(EllipsoidWeightSpec::default_for(k))] {
        for alpha in [0.05, 0.2] {
            let radius = calibrate_radius(&draws, post.means(), &norm, alpha)?;
            let ball = CredibleBall::new(post.center(), radius, 1.0, alpha, norm.clone())?;
            let blown = CredibleBall::new(post.center(), radius, 1.5, alpha, norm.clone())?;
            println!(
                "{:>11} {:>6} {:>8.4} {:>14} {:>16}",
                norm.name(),
                alpha,
                radius,
                ball.contains(truth.coeffs())?,
                blown.contains(truth.coeffs())?,
            );
        }
    }

    // Multiscale case: K = 2^(J+1) - 1 coefficients, sup-norm over levels.
    let spec = MultiscaleWeightSpec::default_for_max_level(6);
    let km = spec.signal_len();
    let coeffs = polynomial_signal(1.0, 1.0, km)?.coeffs().to_vec();
    let truth_m = SignalVector::new_multiscale(coeffs)?;
    let obs_m = generate_observation(&truth_m, n, &mut rng, 2)?;
    let post_m = compute_posterior(&DiagonalGaussianPrior::new(1.0, 1.0, km)?, &obs_m)?;
    let draws_m = sample_posterior(&post_m, s, &mut rng)?;
    let norm_m = NormSpec::Multiscale(spec);
    for alpha in [0.05, 0.2] {
        let radius = calibrate_radius(&draws_m, post_m.means(), &norm_m, alpha)?;
        let ball = CredibleBall::new(post_m.center(), radius, 1.0, alpha, norm_m.clone())?;
        let blown = CredibleBall::new(post_m.center(), radius, 1.5, alpha, norm_m.clone())?;
        println!(
            "{:>11} {:>6} {:>8.4} {:>14} {:>16}",
            "multiscale",
            alpha,
            radius,
            ball.contains(truth_m.coeffs())?,
            blown.contains(truth_m.coeffs())?,
        );
    }
    Ok(())
}
