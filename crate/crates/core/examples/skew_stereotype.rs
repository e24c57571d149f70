// Skew and stereotype separate two kinds of bias: a set that leans one way
// as a whole versus a set whose words lean different ways.

use embias::same::{same_binary_set, same_skew, same_stereotype, StereotypeMode};
use embias::similarity::{AttributeSet, TargetSet};

fn unit(deg: f64) -> Vec<f64> {
    let r = deg.to_radians();
    vec![r.cos(), r.sin()]
}

pub fn run_example() -> embias::Result<()> {
    let a = AttributeSet::from_vectors("A", &[vec![1.0, 0.0]])?;
    let b = AttributeSet::from_vectors("B", &[vec![-1.0, 0.0]])?;

    let groups = [
        ("neutral", vec![unit(90.0), unit(90.0)]),
        ("skewed", vec![unit(60.0), unit(60.0)]),
        ("stereotyped", vec![unit(60.0), unit(120.0)]),
        ("both", vec![unit(30.0), unit(80.0)]),
    ];
    println!("{:<12} {:>8} {:>8} {:>11}", "set", "same", "skew", "stereotype");
    for (name, vectors) in groups {
        let t = TargetSet::from_vectors(name, &vectors)?;
        println!(
            "{name:<12} {:>8.4} {:>+8.4} {:>11.4}",
            same_binary_set(&t, &a, &b)?,
            same_skew(&t, &a, &b)?,
            same_stereotype(&t, &a, &b, StereotypeMode::Stddev)?
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("skew/stereotype example");
}
