// Builds a bias direction from defining pairs by PCA and compares it with
// the plain mean of the pair differences. When the pairs disagree the two
// directions can be far apart and Direct Bias follows the PCA one.

use embias::diagnostics::{build_directbias_blindspot, pca_vs_mean_direction_angle};
use embias::direct_bias::{direct_bias_word, mean_pair_direction, subspace_pca, DefiningSet};
use embias::store::ResolvedWord;

pub fn run_example() -> embias::Result<()> {
    let pair = |a: [f64; 2]| DefiningSet::from_vectors(&[a.to_vec(), vec![-a[0], -a[1]]]);
    let sets = vec![pair([-1.0, 2.0])?, pair([-1.0, -2.0])?];

    let pca = subspace_pca(&sets, 1)?;
    let mean = mean_pair_direction(&sets)?;
    println!("pca direction   {:?}", pca.basis()[0]);
    println!("mean direction  {:?}", mean);
    println!("angle between   {:.1}°", pca_vs_mean_direction_angle(&sets)?);

    for (name, v) in [("horizontal", [1.0, 0.0]), ("vertical", [0.0, 1.0])] {
        let w = ResolvedWord::new(name, v.to_vec())?;
        println!("{name:<10} direct bias = {:.3}", direct_bias_word(&w, &pca, 1.0)?);
    }

    let fixture = build_directbias_blindspot(2.0)?;
    let (ok, observed) = fixture.evaluate(&Default::default())?;
    println!("inverted fixture {observed:?} holds: {ok}");
    Ok(())
}

fn main() {
    run_example().expect("direct bias example");
}
