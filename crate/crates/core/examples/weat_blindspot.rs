// Two target groups mirrored across the attribute axis: every word leans
// towards one group, yet WEAT's effect size is zero because the group
// means coincide. SAME sees the lean.

use embias::diagnostics::{build_weat_blindspot, FixtureTargets};
use embias::same::same_binary_set;
use embias::similarity::TargetSet;
use embias::weat::{weat_effect_size, weat_word};

pub fn run_example() -> embias::Result<()> {
    let fixture = build_weat_blindspot(60.0, 10.0)?;
    let FixtureTargets::Partition(part) = &fixture.targets else {
        unreachable!("the blindspot fixture is a partition")
    };
    let [a, b] = fixture.family.sets() else { unreachable!() };

    for w in part.x().members().iter().chain(part.y().members()) {
        println!("{:<4} s(w, A, B) = {:+.8}", w.surface(), weat_word(w, a, b)?);
    }
    let d = weat_effect_size(part, a, b)?;
    let all: Vec<_> = part.x().members().iter().chain(part.y().members()).cloned().collect();
    let same = same_binary_set(&TargetSet::new("all", all)?, a, b)?;
    println!("effect size d = {d:.2e}");
    println!("SAME          = {same:.6}");
    Ok(())
}

fn main() {
    run_example().expect("blindspot example");
}
