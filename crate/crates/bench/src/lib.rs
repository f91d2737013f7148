//! Shared fixtures for the criterion benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reviewsim_core::learn::preset;
use reviewsim_core::model::Setting;
use reviewsim_core::AuthorModel;

pub use rand_chacha;

/// The four-tier fitted model with noiseless authors at V = 5, eta = 0.7.
pub fn iclr_setting(m: usize) -> Setting {
    let p = preset("ICLR2020-L4").expect("bundled preset");
    Setting {
        prior: p.prior,
        review: p.review,
        author: AuthorModel::noiseless(5.0, 0.7),
        m,
    }
}

/// Synthetic review dataset drawn from the four-tier preset.
pub fn synthetic_reviews(n_papers: usize, seed: u64) -> Vec<Vec<u8>> {
    let p = preset("ICLR2020-L4").expect("bundled preset");
    let (_, probs) = p.prior.categorical().expect("categorical");
    let (_, confusion) = p.review.categorical_view().expect("categorical");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |probs: &[f64], rng: &mut ChaCha8Rng| -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &pr) in probs.iter().enumerate() {
            acc += pr;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    };
    (0..n_papers)
        .map(|_| {
            let q = draw(probs, &mut rng);
            (0..3).map(|_| draw(&confusion[q], &mut rng) as u8).collect()
        })
        .collect()
}
