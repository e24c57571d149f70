//! Every example under examples/ runs to completion.

#[allow(dead_code)]
mod load_and_score {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/load_and_score.rs"));
}

#[test]
fn load_and_score_runs() {
    load_and_score::run_example().expect("load_and_score example should run");
}

#[allow(dead_code)]
mod weat_blindspot {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/weat_blindspot.rs"));
}

#[test]
fn weat_blindspot_runs() {
    weat_blindspot::run_example().expect("weat_blindspot example should run");
}

#[allow(dead_code)]
mod mac_antipodal {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/mac_antipodal.rs"));
}

#[test]
fn mac_antipodal_runs() {
    mac_antipodal::run_example().expect("mac_antipodal example should run");
}

#[allow(dead_code)]
mod direct_bias_pca {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/direct_bias_pca.rs"));
}

#[test]
fn direct_bias_pca_runs() {
    direct_bias_pca::run_example().expect("direct_bias_pca example should run");
}

#[allow(dead_code)]
mod same_multiclass {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/same_multiclass.rs"));
}

#[test]
fn same_multiclass_runs() {
    same_multiclass::run_example().expect("same_multiclass example should run");
}

#[allow(dead_code)]
mod skew_stereotype {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/skew_stereotype.rs"));
}

#[test]
fn skew_stereotype_runs() {
    skew_stereotype::run_example().expect("skew_stereotype example should run");
}

#[allow(dead_code)]
mod subset_bound {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/subset_bound.rs"));
}

#[test]
fn subset_bound_runs() {
    subset_bound::run_example().expect("subset_bound example should run");
}

#[allow(dead_code)]
mod variance_paradox {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/variance_paradox.rs"));
}

#[test]
fn variance_paradox_runs() {
    variance_paradox::run_example().expect("variance_paradox example should run");
}

#[allow(dead_code)]
mod synthetic_grid {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/synthetic_grid.rs"));
}

#[test]
fn synthetic_grid_runs() {
    synthetic_grid::run_example().expect("synthetic_grid example should run");
}

#[allow(dead_code)]
mod subset_robustness {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/subset_robustness.rs"));
}

#[test]
fn subset_robustness_runs() {
    subset_robustness::run_example().expect("subset_robustness example should run");
}
