// MAC reports 1.0 for a word sitting exactly between two antipodal
// attribute words, but also for words that clearly prefer one of them.

use embias::diagnostics::build_mac_equidistant;
use embias::mac::mac_word;
use embias::similarity::{AttributeFamily, AttributeSet};
use embias::store::ResolvedWord;

pub fn run_example() -> embias::Result<()> {
    let a = AttributeSet::from_vectors("A", &[vec![1.0, 0.0]])?;
    let b = AttributeSet::from_vectors("B", &[vec![-1.0, 0.0]])?;
    let family = AttributeFamily::pair(a, b)?;
    for deg in [0.0f64, 30.0, 60.0, 90.0] {
        let r = deg.to_radians();
        let w = ResolvedWord::new(format!("{deg}°"), vec![r.cos(), r.sin()])?;
        println!("word at {deg:>4}° from A: mac = {:.12}", mac_word(&w, &family)?);
    }

    let fixture = build_mac_equidistant(std::f64::consts::FRAC_PI_2)?;
    let (ok, observed) = fixture.evaluate(&Default::default())?;
    println!("equidistant fixture: {observed:?} ({})", if ok { "as expected" } else { "unexpected" });
    Ok(())
}

fn main() {
    run_example().expect("mac example");
}
