//! Counterexample fixtures and bound checkers that show where each metric
//! misreports bias.
//!
//! Every fixture carries a literal numeric claim. [`run_diagnostics`]
//! evaluates all of them against a [`Metrics`] table, so a deliberately
//! broken metric can be swapped in and seen to fail.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::direct_bias::{self, mean_pair_direction, BiasSubspace, DefiningSet};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mac;
use crate::same::{self, StereotypeMode};
use crate::similarity::{assoc, AttributeFamily, AttributeSet, TargetSet};
use crate::stats;
use crate::store::ResolvedWord;
use crate::weat::{self, WeatPartition};

type PairScore = fn(&ResolvedWord, &AttributeSet, &AttributeSet) -> Result<f64>;
type SetPairScore = fn(&TargetSet, &AttributeSet, &AttributeSet) -> Result<f64>;

/// The metric implementations a diagnostics run is evaluated against.
#[derive(Clone, Copy)]
pub struct Metrics {
    pub weat_word: PairScore,
    pub weat_effect_size: fn(&WeatPartition, &AttributeSet, &AttributeSet) -> Result<f64>,
    pub mac: fn(&TargetSet, &AttributeFamily) -> Result<f64>,
    pub subspace_pca: fn(&[DefiningSet], usize) -> Result<BiasSubspace>,
    pub direct_bias: fn(&TargetSet, &BiasSubspace, f64) -> Result<f64>,
    pub same_pairwise: PairScore,
    pub same_binary_set: SetPairScore,
    pub same_skew: SetPairScore,
    pub same_stereotype: fn(&TargetSet, &AttributeSet, &AttributeSet, StereotypeMode) -> Result<f64>,
    pub same_subspace: fn(&AttributeFamily) -> Result<BiasSubspace>,
    pub same_word: fn(&ResolvedWord, &BiasSubspace) -> Result<f64>,
}

impl Metrics {
    pub fn faithful() -> Self {
        Self {
            weat_word: weat::weat_word,
            weat_effect_size: weat::weat_effect_size,
            mac: mac::mac,
            subspace_pca: direct_bias::subspace_pca,
            direct_bias: direct_bias::direct_bias,
            same_pairwise: same::same_pairwise,
            same_binary_set: same::same_binary_set,
            same_skew: same::same_skew,
            same_stereotype: same::same_stereotype,
            same_subspace: same::same_subspace,
            same_word: same::same_word,
        }
    }
}

impl Default for Metrics {
    fn default() -> Self {
        Self::faithful()
    }
}

impl std::fmt::Debug for Metrics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Metrics { .. }")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixtureTargets {
    Set(TargetSet),
    Partition(WeatPartition),
}

/// The numeric predicate a fixture must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// `max_w s(w, A, B) = ‖â − b̂‖`, attained at `w = â − b̂`, and the maxima
    /// of the two attribute pairs differ.
    WeatWordMaximumDependsOnAttributes,
    /// `|d| < 1e-9` while every `|s(w, A, B)|` equals `word_score`, and SAME
    /// reports `same_score > 0`.
    WeatEffectSizeBlind { word_score: f64, same_score: f64 },
    /// `d = ±2` within 1e-9.
    WeatEffectSizeExtreme,
    /// All words share one positive association gap: `d` is degenerate or
    /// `|d| < 0.05`, while SAME skew exceeds `min_skew`.
    WeatSkewBlind { min_skew: f64 },
    /// MAC equals `value` within `tolerance`.
    MacValue { value: f64, tolerance: f64 },
    /// Direct Bias of the first target (equidistant) is 1 and of the second
    /// (maximally biased) is 0, within 1e-9.
    DirectBiasInverted,
    /// SAME is 0 on the first (equidistant) target and positive on the second.
    SameTrustworthy,
    /// SAME is 1 on the first (in-span) target and 0 on the second
    /// (orthogonal), within 1e-9.
    SameExtremes,
    /// Skew is positive and stereotype zero on the first half of the targets;
    /// skew is zero and stereotype positive on the second half.
    SkewStereotypeSeparation,
}

/// A geometric configuration paired with the claim it must satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleFixture {
    pub name: String,
    pub family: AttributeFamily,
    pub targets: FixtureTargets,
    pub defining_sets: Vec<DefiningSet>,
    pub claim: Claim,
    pub parameters: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub id: String,
    pub claim: String,
    pub passed: bool,
    pub observed: BTreeMap<String, f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub rows: Vec<DiagnosticRow>,
    pub all_passed: bool,
}

fn word(name: &str, v: &[f64]) -> ResolvedWord {
    ResolvedWord::new(name, v.to_vec()).expect("fixture vectors are finite and nonzero")
}

fn unit(deg: f64) -> Vec<f64> {
    let r = deg.to_radians();
    vec![r.cos(), r.sin()]
}

fn rotate(v: &[f64], deg: f64) -> Vec<f64> {
    let (s, c) = deg.to_radians().sin_cos();
    vec![c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn single(name: &str, v: &[f64]) -> AttributeSet {
    AttributeSet::new(name, vec![word(name, v)]).expect("one member")
}

/// Two target groups mirrored across the axis between `A` and `B`: the
/// group means coincide although every word leans by `2 sin φ sin g`.
pub fn build_weat_blindspot(phi_degrees: f64, half_gap_degrees: f64) -> Result<CounterexampleFixture> {
    if !(phi_degrees > 0.0 && phi_degrees < 90.0) {
        return Err(Error::InvalidParameter(format!("phi must be in (0°, 90°), got {phi_degrees}")));
    }
    if !(half_gap_degrees > 0.0 && half_gap_degrees < 45.0) {
        return Err(Error::InvalidParameter(format!(
            "half gap must be in (0°, 45°), got {half_gap_degrees}"
        )));
    }
    let (phi, g) = (phi_degrees, half_gap_degrees);
    let a = single("a", &unit(g));
    let b = single("b", &unit(-g));
    let x = TargetSet::new("X", vec![word("x1", &unit(phi)), word("x2", &unit(-phi))])?;
    let y = TargetSet::new("Y", vec![word("y1", &unit(180.0 - phi)), word("y2", &unit(180.0 + phi))])?;
    let word_score = 2.0 * phi.to_radians().sin() * g.to_radians().sin();
    Ok(CounterexampleFixture {
        name: "weat-effect-size-blindspot".into(),
        family: AttributeFamily::pair(a, b)?,
        targets: FixtureTargets::Partition(WeatPartition::new(x, y)?),
        defining_sets: Vec::new(),
        claim: Claim::WeatEffectSizeBlind {
            word_score,
            same_score: phi.to_radians().sin(),
        },
        parameters: params(&[("phi_degrees", phi), ("half_gap_degrees", g)]),
    })
}

/// Four words with one shared association gap, split two against two.
/// With `epsilon_degrees > 0` each group gets one word rotated by `+ε` and
/// one by `−ε`, which keeps the group means equal.
pub fn build_weat_skew_blindspot(epsilon_degrees: f64) -> Result<CounterexampleFixture> {
    let base = [1.0, 0.0];
    let e = epsilon_degrees;
    let x = TargetSet::new("X", vec![word("x1", &rotate(&base, e)), word("x2", &rotate(&base, -e))])?;
    let y = TargetSet::new("Y", vec![word("y1", &rotate(&base, e)), word("y2", &rotate(&base, -e))])?;
    Ok(CounterexampleFixture {
        name: if e == 0.0 {
            "weat-effect-size-skew-blind".into()
        } else {
            "weat-effect-size-skew-blind-perturbed".into()
        },
        family: AttributeFamily::pair(single("a", &[1.0, 0.0]), single("b", &[0.0, 1.0]))?,
        targets: FixtureTargets::Partition(WeatPartition::new(x, y)?),
        defining_sets: Vec::new(),
        claim: Claim::WeatSkewBlind { min_skew: 0.7 },
        parameters: params(&[("epsilon_degrees", e)]),
    })
}

/// Antipodal attribute words: every target scores exactly 1.
pub fn build_mac_blindspot() -> Result<CounterexampleFixture> {
    let a = [0.6, 0.8];
    let targets = TargetSet::new(
        "T",
        vec![word("t1", &[1.0, 0.0]), word("t2", &[0.0, 1.0]), word("t3", &[-1.0, 0.0])],
    )?;
    Ok(CounterexampleFixture {
        name: "mac-antipodal-constant".into(),
        family: AttributeFamily::pair(single("a", &a), single("b", &[-a[0], -a[1]]))?,
        targets: FixtureTargets::Set(targets),
        defining_sets: Vec::new(),
        claim: Claim::MacValue { value: 1.0, tolerance: 0.0 },
        parameters: params(&[("a_x", a[0]), ("a_y", a[1])]),
    })
}

/// A target halfway between two attribute words `theta` apart; MAC reports
/// `1 − cos(θ/2)` although the word is equidistant.
pub fn build_mac_equidistant(theta_radians: f64) -> Result<CounterexampleFixture> {
    if !(theta_radians > 0.0 && theta_radians < std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!("theta must be in (0, π), got {theta_radians}")));
    }
    let t = TargetSet::new("T", vec![word("t", &unit((theta_radians / 2.0).to_degrees()))])?;
    Ok(CounterexampleFixture {
        name: "mac-equidistant-nonzero".into(),
        family: AttributeFamily::pair(single("a", &[1.0, 0.0]), single("b", &unit(theta_radians.to_degrees())))?,
        targets: FixtureTargets::Set(t),
        defining_sets: Vec::new(),
        claim: Claim::MacValue {
            value: 1.0 - (theta_radians / 2.0).cos(),
            tolerance: 1e-12,
        },
        parameters: params(&[("theta_radians", theta_radians)]),
    })
}

/// Crossed defining pairs `a_1 = (−1, r) = −c_1`, `a_2 = (−1, −r) = −c_2`.
/// With `r > 1` the first principal component is the y axis, which is
/// exactly the direction of words equidistant to both groups.
pub fn build_directbias_blindspot(r: f64) -> Result<CounterexampleFixture> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r must be > 1, got {r}")));
    }
    let (a1, a2) = ([-1.0, r], [-1.0, -r]);
    let (c1, c2) = ([1.0, -r], [1.0, r]);
    let a = AttributeSet::new("A", vec![word("a1", &a1), word("a2", &a2)])?;
    let c = AttributeSet::new("C", vec![word("c1", &c1), word("c2", &c2)])?;
    let d1 = DefiningSet::new(vec![word("a1", &a1), word("c1", &c1)])?;
    let d2 = DefiningSet::new(vec![word("a2", &a2), word("c2", &c2)])?;
    let targets = TargetSet::new("W", vec![word("neutral", &[0.0, 1.0]), word("biased", &[1.0, 0.0])])?;
    Ok(CounterexampleFixture {
        name: "direct-bias-pca-inversion".into(),
        family: AttributeFamily::pair(a, c)?,
        targets: FixtureTargets::Set(targets),
        defining_sets: vec![d1, d2],
        claim: Claim::DirectBiasInverted,
        parameters: params(&[("r", r)]),
    })
}

fn build_weat_word_extremes() -> Result<CounterexampleFixture> {
    let wide = AttributeFamily::pair(single("a", &[1.0, 0.0, 0.0]), single("b", &[-1.0, 0.0, 0.0]))?;
    Ok(CounterexampleFixture {
        name: "weat-word-extremes-depend-on-attributes".into(),
        family: wide,
        targets: FixtureTargets::Set(TargetSet::new("W", vec![word("w", &[0.3, 0.4, 0.5])])?),
        defining_sets: Vec::new(),
        claim: Claim::WeatWordMaximumDependsOnAttributes,
        parameters: BTreeMap::new(),
    })
}

fn build_weat_extreme() -> Result<CounterexampleFixture> {
    let x = TargetSet::new("X", vec![word("x1", &[1.0, 0.2]), word("x2", &[1.0, 0.2])])?;
    let y = TargetSet::new("Y", vec![word("y1", &[-1.0, -0.2]), word("y2", &[-1.0, -0.2])])?;
    Ok(CounterexampleFixture {
        name: "weat-effect-size-extreme".into(),
        family: AttributeFamily::pair(single("a", &[0.8, 0.6]), single("b", &[0.0, 1.0]))?,
        targets: FixtureTargets::Partition(WeatPartition::new(x, y)?),
        defining_sets: Vec::new(),
        claim: Claim::WeatEffectSizeExtreme,
        parameters: BTreeMap::new(),
    })
}

/// Antipodal attributes with a stereotyped pair (mirror images) and a skewed
/// pair (identical words); MAC is 1 for both.
fn build_mac_insensitive() -> Result<CounterexampleFixture> {
    let alpha = 30.0;
    let targets = TargetSet::new(
        "T",
        vec![
            word("secretary", &unit(alpha)),
            word("engineer", &unit(180.0 - alpha)),
            word("secretary2", &unit(alpha)),
            word("secretary3", &unit(alpha)),
        ],
    )?;
    Ok(CounterexampleFixture {
        name: "mac-insensitive-to-skew-and-stereotype".into(),
        family: AttributeFamily::pair(single("she", &[1.0, 0.0]), single("he", &[-1.0, 0.0]))?,
        targets: FixtureTargets::Set(targets),
        defining_sets: Vec::new(),
        claim: Claim::MacValue { value: 1.0, tolerance: 1e-15 },
        parameters: params(&[("alpha_degrees", alpha)]),
    })
}

fn axes_family() -> Result<AttributeFamily> {
    AttributeFamily::new(vec![
        single("A0", &[1.0, 0.0, 0.0, 0.0]),
        single("A1", &[0.0, 1.0, 0.0, 0.0]),
        single("A2", &[0.0, 0.0, 1.0, 0.0]),
    ])
}

fn build_same_trustworthy() -> Result<CounterexampleFixture> {
    let t = TargetSet::new("W", vec![word("fair", &[1.0, 1.0, 1.0, 2.0]), word("leaning", &[1.0, 0.9, 1.0, 2.0])])?;
    Ok(CounterexampleFixture {
        name: "same-trustworthy".into(),
        family: axes_family()?,
        targets: FixtureTargets::Set(t),
        defining_sets: Vec::new(),
        claim: Claim::SameTrustworthy,
        parameters: BTreeMap::new(),
    })
}

fn build_same_extremes() -> Result<CounterexampleFixture> {
    let t = TargetSet::new("W", vec![word("in-span", &[2.0, -1.0, -1.0, 0.0]), word("orthogonal", &[1.0, 1.0, 1.0, 5.0])])?;
    Ok(CounterexampleFixture {
        name: "same-extremes-attainable".into(),
        family: axes_family()?,
        targets: FixtureTargets::Set(t),
        defining_sets: Vec::new(),
        claim: Claim::SameExtremes,
        parameters: BTreeMap::new(),
    })
}

fn build_skew_stereotype() -> Result<CounterexampleFixture> {
    let t = TargetSet::new(
        "W",
        vec![
            word("skew1", &unit(20.0)),
            word("skew2", &unit(20.0)),
            word("stereo1", &unit(20.0)),
            word("stereo2", &unit(70.0)),
        ],
    )?;
    Ok(CounterexampleFixture {
        name: "same-skew-vs-stereotype".into(),
        family: AttributeFamily::pair(single("a", &[1.0, 0.0]), single("b", &[0.0, 1.0]))?,
        targets: FixtureTargets::Set(t),
        defining_sets: Vec::new(),
        claim: Claim::SkewStereotypeSeparation,
        parameters: BTreeMap::new(),
    })
}

/// Every fixture [`run_diagnostics`] evaluates, in report order.
pub fn all_fixtures() -> Result<Vec<CounterexampleFixture>> {
    Ok(vec![
        build_weat_word_extremes()?,
        build_weat_blindspot(60.0, 10.0)?,
        build_weat_extreme()?,
        build_weat_skew_blindspot(0.0)?,
        build_weat_skew_blindspot(1.0)?,
        build_mac_blindspot()?,
        build_mac_equidistant(std::f64::consts::FRAC_PI_2)?,
        build_mac_insensitive()?,
        build_directbias_blindspot(2.0)?,
        build_same_trustworthy()?,
        build_same_extremes()?,
        build_skew_stereotype()?,
    ])
}

fn claim_text(claim: &Claim) -> String {
    match claim {
        Claim::WeatWordMaximumDependsOnAttributes => {
            "max s(w,A,B) = ‖â−b̂‖ and differs between attribute pairs".into()
        }
        Claim::WeatEffectSizeBlind { word_score, .. } => {
            format!("|d| < 1e-9 while every |s(w,A,B)| = {word_score:.8}; SAME > 0")
        }
        Claim::WeatEffectSizeExtreme => "d = ±2".into(),
        Claim::WeatSkewBlind { min_skew } => {
            format!("d degenerate or |d| < 0.05 while SAME skew > {min_skew}")
        }
        Claim::MacValue { value, .. } => format!("MAC = {value:.10}"),
        Claim::DirectBiasInverted => "Direct Bias: equidistant word = 1, biased word = 0".into(),
        Claim::SameTrustworthy => "SAME = 0 iff equidistant".into(),
        Claim::SameExtremes => "SAME attains 1 in span and 0 orthogonal".into(),
        Claim::SkewStereotypeSeparation => "skew sees skew only, stereotype sees stereotype only".into(),
    }
}

impl CounterexampleFixture {
    /// All target words; a partition is flattened to X then Y.
    pub fn target_set(&self) -> Result<TargetSet> {
        match &self.targets {
            FixtureTargets::Set(t) => Ok(t.clone()),
            FixtureTargets::Partition(p) => {
                TargetSet::new("X∪Y", p.x().members().iter().chain(p.y().members()).cloned().collect())
            }
        }
    }

    pub fn partition(&self) -> Result<&WeatPartition> {
        match &self.targets {
            FixtureTargets::Partition(p) => Ok(p),
            FixtureTargets::Set(_) => Err(Error::InvalidParameter(format!("fixture `{}` has no partition", self.name))),
        }
    }

    /// The first two attribute sets.
    pub fn pair(&self) -> (&AttributeSet, &AttributeSet) {
        (&self.family.sets()[0], &self.family.sets()[1])
    }

    /// Evaluates the claim; `observed` holds the metric values it was judged on.
    pub fn evaluate(&self, m: &Metrics) -> Result<(bool, BTreeMap<String, f64>)> {
        let mut obs = BTreeMap::new();
        let (a, b) = self.pair();
        let passed = match self.claim {
            Claim::WeatWordMaximumDependsOnAttributes => {
                let narrow = (single("a", &[1.0, 0.0, 0.0]), single("b", &[0.0, 1.0, 0.0]));
                let mut ok = true;
                let mut maxima = Vec::new();
                for (label, (a, b)) in [("wide", (a.clone(), b.clone())), ("narrow", narrow)] {
                    let gap = linalg::sub(a.centroid(), b.centroid());
                    let bound = linalg::norm(&gap);
                    let at_gap = (m.weat_word)(&word("gap", &gap), &a, &b)?;
                    let targets = self.target_set()?;
                    let other = (m.weat_word)(&targets.members()[0], &a, &b)?;
                    ok &= (at_gap - bound).abs() < 1e-12 && other.abs() <= bound + 1e-12;
                    obs.insert(format!("max_{label}"), at_gap);
                    maxima.push(at_gap);
                }
                ok && (maxima[0] - maxima[1]).abs() > 0.1
            }
            Claim::WeatEffectSizeBlind { word_score, same_score } => {
                let part = self.partition()?;
                let d = (m.weat_effect_size)(part, a, b)?;
                obs.insert("effect_size".into(), d);
                let mut ok = d.abs() < 1e-9;
                let mut min_abs = f64::INFINITY;
                for w in self.target_set()?.members() {
                    let s = (m.weat_word)(w, a, b)?;
                    min_abs = min_abs.min(s.abs());
                    ok &= (s.abs() - word_score).abs() < 1e-12;
                }
                obs.insert("min_abs_word_score".into(), min_abs);
                let same = (m.same_binary_set)(&self.target_set()?, a, b)?;
                obs.insert("same_binary_set".into(), same);
                ok && min_abs > 0.0 && (same - same_score).abs() < 1e-12
            }
            Claim::WeatEffectSizeExtreme => {
                let d = (m.weat_effect_size)(self.partition()?, a, b)?;
                obs.insert("effect_size".into(), d);
                (d.abs() - 2.0).abs() < 1e-9
            }
            Claim::WeatSkewBlind { min_skew } => {
                let blind = match (m.weat_effect_size)(self.partition()?, a, b) {
                    Err(Error::DegenerateVariance) => {
                        obs.insert("degenerate_variance".into(), 1.0);
                        true
                    }
                    Ok(d) => {
                        obs.insert("effect_size".into(), d);
                        d.abs() < 0.05
                    }
                    Err(e) => return Err(e),
                };
                let all = self.target_set()?;
                let skew = (m.same_skew)(&all, a, b)?;
                let stereo = (m.same_stereotype)(&all, a, b, StereotypeMode::Stddev)?;
                obs.insert("same_skew".into(), skew);
                obs.insert("same_stereotype".into(), stereo);
                blind && skew > min_skew
            }
            Claim::MacValue { value, tolerance } => {
                let v = (m.mac)(&self.target_set()?, &self.family)?;
                obs.insert("mac".into(), v);
                (v - value).abs() <= tolerance
            }
            Claim::DirectBiasInverted => {
                let g = (m.subspace_pca)(&self.defining_sets, 1)?;
                let t = self.target_set()?;
                let neutral = TargetSet::new("neutral", vec![t.members()[0].clone()])?;
                let biased = TargetSet::new("biased", vec![t.members()[1].clone()])?;
                let db_neutral = (m.direct_bias)(&neutral, &g, 1.0)?;
                let db_biased = (m.direct_bias)(&biased, &g, 1.0)?;
                let gap = assoc(&t.members()[0], a)? - assoc(&t.members()[0], b)?;
                obs.insert("direct_bias_neutral".into(), db_neutral);
                obs.insert("direct_bias_biased".into(), db_biased);
                obs.insert("neutral_association_gap".into(), gap);
                (db_neutral - 1.0).abs() < 1e-9 && db_biased.abs() < 1e-9 && gap.abs() < 1e-12
            }
            Claim::SameTrustworthy => {
                let s = (m.same_subspace)(&self.family)?;
                let t = self.target_set()?;
                let fair = (m.same_word)(&t.members()[0], &s)?;
                let leaning = (m.same_word)(&t.members()[1], &s)?;
                obs.insert("same_fair".into(), fair);
                obs.insert("same_leaning".into(), leaning);
                let equidistant = all_equidistant(&t.members()[0], &self.family, 1e-12)?;
                fair < 1e-9 && equidistant && leaning > 1e-3
            }
            Claim::SameExtremes => {
                let s = (m.same_subspace)(&self.family)?;
                let t = self.target_set()?;
                let inside = (m.same_word)(&t.members()[0], &s)?;
                let orth = (m.same_word)(&t.members()[1], &s)?;
                obs.insert("same_in_span".into(), inside);
                obs.insert("same_orthogonal".into(), orth);
                (inside - 1.0).abs() < 1e-9 && orth.abs() < 1e-9
            }
            Claim::SkewStereotypeSeparation => {
                let t = self.target_set()?;
                let skewed = t.subset("skewed", &[0, 1])?;
                let stereo = t.subset("stereotyped", &[2, 3])?;
                let sk1 = (m.same_skew)(&skewed, a, b)?;
                let st1 = (m.same_stereotype)(&skewed, a, b, StereotypeMode::Stddev)?;
                let sk2 = (m.same_skew)(&stereo, a, b)?;
                let st2 = (m.same_stereotype)(&stereo, a, b, StereotypeMode::Stddev)?;
                obs.insert("skewed_skew".into(), sk1);
                obs.insert("skewed_stereotype".into(), st1);
                obs.insert("stereotyped_skew".into(), sk2);
                obs.insert("stereotyped_stereotype".into(), st2);
                sk1 > 0.1 && st1 < 1e-12 && sk2.abs() < 1e-12 && st2 > 0.1
            }
        };
        Ok((passed, obs))
    }
}

/// Whether every pair of sets in the family has the same association with
/// `w`, up to `tol`.
pub fn all_equidistant(w: &ResolvedWord, family: &AttributeFamily, tol: f64) -> Result<bool> {
    let scores = family.sets().iter().map(|s| assoc(w, s)).collect::<Result<Vec<_>>>()?;
    Ok(scores.iter().all(|s| (s - scores[0]).abs() < tol))
}

/// Checks that every subset of `xs` satisfies
/// `|Σ (x_i − μ̂)/σ̂| ≤ sqrt(m (n − m))` (population σ̂), and that for each
/// `m` the two-level configuration attains the bound.
pub fn check_subset_sum_bound(xs: &[f64]) -> Result<bool> {
    Ok(subset_sum_bound_report(xs)?.holds())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsetBoundReport {
    /// Largest `|Σ z| − sqrt(m (n − m))` over all subsets (≤ 0 when the bound holds).
    pub worst_slack: f64,
    /// Largest distance between the two-level sum and its bound over `m`.
    pub equality_error: f64,
}

impl SubsetBoundReport {
    pub fn holds(&self) -> bool {
        self.worst_slack <= 1e-9 && self.equality_error <= 1e-9
    }
}

pub const SUBSET_BOUND_MAX_N: usize = 12;

pub fn subset_sum_bound_report(xs: &[f64]) -> Result<SubsetBoundReport> {
    let n = xs.len();
    if n == 0 || n > SUBSET_BOUND_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "subset enumeration needs 1..={SUBSET_BOUND_MAX_N} values, got {n}"
        )));
    }
    let mu = stats::mean(xs);
    let sigma = stats::population_std(xs);
    if stats::is_constant(xs, 1e-12) {
        return Err(Error::DegenerateVariance);
    }
    let z: Vec<f64> = xs.iter().map(|x| (x - mu) / sigma).collect();
    let mut worst = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        let m = mask.count_ones() as f64;
        let sum: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| z[i]).sum();
        worst = worst.max(sum.abs() - (m * (n as f64 - m)).sqrt());
    }

    let mut equality_error = 0.0f64;
    let nf = n as f64;
    for m in 1..n {
        let mf = m as f64;
        let hi = mu + ((nf - mf) / mf).sqrt() * sigma;
        let lo = mu - (mf / (nf - mf)).sqrt() * sigma;
        let two_level: Vec<f64> = (0..n).map(|i| if i < m { hi } else { lo }).collect();
        let (mu2, s2) = (stats::mean(&two_level), stats::population_std(&two_level));
        let sum: f64 = two_level[..m].iter().map(|x| (x - mu2) / s2).sum();
        equality_error = equality_error.max((sum.abs() - (mf * (nf - mf)).sqrt()).abs());
    }
    Ok(SubsetBoundReport {
        worst_slack: worst,
        equality_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub name: String,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub effect_size: f64,
    pub same_binary_set: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceParadox {
    pub planted: Vec<(String, f64)>,
    pub pairings: Vec<Pairing>,
}

impl VarianceParadox {
    pub fn pairing(&self, name: &str) -> Option<&Pairing> {
        self.pairings.iter().find(|p| p.name == name)
    }
}

/// Six occupation-like words whose association gaps are proportional to
/// planted scores, regrouped three ways. The effect size swings from near
/// its maximum to zero while SAME over the same words does not move.
pub fn variance_paradox_demo() -> Result<VarianceParadox> {
    let planted = [
        ("bishop", 0.3),
        ("lawmaker", 0.6),
        ("footballer", 0.9),
        ("sociologist", -0.3),
        ("nurse", -0.6),
        ("hairdresser", -0.9),
    ];
    let a = single("male", &[1.0, 0.0, 0.5]);
    let b = single("female", &[-1.0, 0.0, 0.5]);
    let words: BTreeMap<&str, ResolvedWord> = planted
        .iter()
        .map(|&(name, beta)| (name, word(name, &[beta, (1.0 - beta * beta).sqrt(), 0.0])))
        .collect();
    let group = |name: &str, members: &[&str]| TargetSet::new(name, members.iter().map(|m| words[m].clone()).collect());

    let specs: [(&str, &[&str], &[&str]); 3] = [
        ("separated", &["footballer", "bishop"], &["hairdresser", "sociologist"]),
        ("extreme", &["footballer", "lawmaker"], &["hairdresser", "nurse"]),
        ("mean-cancelling", &["footballer", "hairdresser"], &["bishop", "sociologist"]),
    ];
    let mut pairings = Vec::new();
    for (name, x, y) in specs {
        let part = WeatPartition::new(group("X", x)?, group("Y", y)?)?;
        let effect_size = weat::weat_effect_size(&part, &a, &b)?;
        let union: Vec<&str> = x.iter().chain(y).copied().collect();
        let same_binary_set = same::same_binary_set(&group("X∪Y", &union)?, &a, &b)?;
        pairings.push(Pairing {
            name: name.into(),
            x: x.iter().map(|s| s.to_string()).collect(),
            y: y.iter().map(|s| s.to_string()).collect(),
            effect_size,
            same_binary_set,
        });
    }
    Ok(VarianceParadox {
        planted: planted.iter().map(|(n, b)| (n.to_string(), *b)).collect(),
        pairings,
    })
}

/// Angle in degrees, folded to `[0°, 90°]`, between the first principal
/// component of the defining sets and the normalized mean of their pair
/// directions.
pub fn pca_vs_mean_direction_angle(defining_sets: &[DefiningSet]) -> Result<f64> {
    let pca = direct_bias::subspace_pca(defining_sets, 1)?;
    let mean = mean_pair_direction(defining_sets)?;
    Ok(linalg::folded_angle_degrees(&pca.basis()[0], &mean))
}

fn row(id: &str, claim: String, outcome: Result<(bool, BTreeMap<String, f64>)>) -> DiagnosticRow {
    match outcome {
        Ok((passed, observed)) => DiagnosticRow {
            id: id.into(),
            claim,
            passed,
            observed,
            error: None,
        },
        Err(e) => DiagnosticRow {
            id: id.into(),
            claim,
            passed: false,
            observed: BTreeMap::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Property expected of a score on a fixture, and whether it was observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub metric: String,
    pub property: String,
    /// Fixture the verdict was reached on.
    pub witness: String,
    pub expected: bool,
    pub observed: bool,
}

/// Judges WEAT effect size, MAC, Direct Bias and SAME against the
/// unbiased-trustworthy, skew-sensitive and stereotype-sensitive properties
/// on the fixtures that separate them.
pub fn property_verdicts(m: &Metrics) -> Result<Vec<PropertyVerdict>> {
    let verdict = |metric: &str, property: &str, witness: &str, expected: bool, observed: bool| PropertyVerdict {
        metric: metric.into(),
        property: property.into(),
        witness: witness.into(),
        expected,
        observed,
    };
    let mut out = Vec::new();

    // trustworthy: no-bias value must coincide with every word being equidistant
    let blind = build_weat_blindspot(60.0, 10.0)?;
    let (a, b) = blind.pair();
    let d = (m.weat_effect_size)(blind.partition()?, a, b)?;
    let same_blind = (m.same_binary_set)(&blind.target_set()?, a, b)?;
    out.push(verdict("weat-effect-size", "unbiased-trustworthy", "weat-blindspot", false, d.abs() >= 1e-9));
    out.push(verdict("same", "unbiased-trustworthy", "weat-blindspot", true, same_blind >= 1e-9));

    let mac_fix = build_mac_blindspot()?;
    let mac_v = (m.mac)(&mac_fix.target_set()?, &mac_fix.family)?;
    out.push(verdict("mac", "unbiased-trustworthy", "mac-antipodal", false, (mac_v - 1.0).abs() >= 1e-9));

    let db_fix = build_directbias_blindspot(2.0)?;
    let g = (m.subspace_pca)(&db_fix.defining_sets, 1)?;
    let neutral = db_fix.target_set()?.subset("neutral", &[0])?;
    let db = (m.direct_bias)(&neutral, &g, 1.0)?;
    let (da, dc) = db_fix.pair();
    let same_db = (m.same_binary_set)(&neutral, da, dc)?;
    out.push(verdict("direct-bias", "unbiased-trustworthy", "pca-inversion", false, db.abs() < 1e-9));
    out.push(verdict("same", "unbiased-trustworthy", "pca-inversion", true, same_db.abs() < 1e-9));

    // skew-sensitive: a uniformly skewed set must score away from no-bias
    let skew = build_weat_skew_blindspot(1.0)?;
    let (a, b) = skew.pair();
    let d = (m.weat_effect_size)(skew.partition()?, a, b)?;
    out.push(verdict("weat-effect-size", "skew-sensitive", "skew-blindspot", false, d.abs() >= 0.05));
    let skewed_set = skew.target_set()?;
    out.push(verdict("same", "skew-sensitive", "skew-blindspot", true, (m.same_binary_set)(&skewed_set, a, b)? > 1e-9));
    let mac_ins = build_mac_insensitive()?;
    let skewed_mac = mac_ins.target_set()?.subset("skewed", &[0, 2, 3])?;
    let stereo_mac = mac_ins.target_set()?.subset("stereotyped", &[0, 1])?;
    let mv = (m.mac)(&skewed_mac, &mac_ins.family)?;
    out.push(verdict("mac", "skew-sensitive", "mac-skewed", false, (mv - 1.0).abs() >= 1e-9));

    // stereotype-sensitive: opposite leanings must score away from no-bias
    let mv = (m.mac)(&stereo_mac, &mac_ins.family)?;
    out.push(verdict("mac", "stereotype-sensitive", "mac-stereotyped", false, (mv - 1.0).abs() >= 1e-9));
    let (sa, sb) = mac_ins.pair();
    let x = TargetSet::new("X", vec![stereo_mac.members()[0].clone()])?;
    let y = TargetSet::new("Y", vec![stereo_mac.members()[1].clone()])?;
    let d = (m.weat_effect_size)(&WeatPartition::new(x, y)?, sa, sb)?;
    out.push(verdict("weat-effect-size", "stereotype-sensitive", "mac-stereotyped", true, d.abs() >= 1e-9));
    out.push(verdict("same", "stereotype-sensitive", "mac-stereotyped", true, (m.same_binary_set)(&stereo_mac, sa, sb)? > 1e-9));
    Ok(out)
}

/// Evaluates every fixture, the subset-sum bound, the variance paradox, the
/// PCA-vs-mean direction angle and the property verdicts.
pub fn run_diagnostics(m: &Metrics) -> DiagnosticsReport {
    let mut rows = Vec::new();
    match all_fixtures() {
        Ok(fixtures) => {
            for f in fixtures {
                rows.push(row(&f.name, claim_text(&f.claim), f.evaluate(m)));
            }
        }
        Err(e) => rows.push(row("fixtures", "fixtures build".into(), Err(e))),
    }

    let bound = (|| {
        let mut obs = BTreeMap::new();
        let two_level = subset_sum_bound_report(&[3.0, 3.0, -1.0, -1.0, -1.0, -1.0])?;
        let pair = subset_sum_bound_report(&[1.0, -1.0])?;
        obs.insert("two_level_worst_slack".into(), two_level.worst_slack);
        obs.insert("pair_worst_slack".into(), pair.worst_slack);
        let constant_rejected = matches!(subset_sum_bound_report(&[2.0, 2.0, 2.0]), Err(Error::DegenerateVariance));
        let attained = two_level.worst_slack.abs() < 1e-9 && pair.worst_slack.abs() < 1e-9;
        Ok((two_level.holds() && pair.holds() && attained && constant_rejected, obs))
    })();
    rows.push(row(
        "subset-sum-bound",
        "|Σ (x−μ̂)/σ̂| ≤ sqrt(m(n−m)), attained by two-level values".into(),
        bound,
    ));

    let paradox = variance_paradox_demo().and_then(|v| {
        let sep = v.pairing("separated").expect("present");
        let cancel = v.pairing("mean-cancelling").expect("present");
        let obs = BTreeMap::from([
            ("separated_effect_size".to_string(), sep.effect_size),
            ("mean_cancelling_effect_size".to_string(), cancel.effect_size),
            ("same_binary_set".to_string(), sep.same_binary_set),
        ]);
        let ok = sep.effect_size.abs() > 1.5
            && cancel.effect_size.abs() < 0.01
            && (sep.same_binary_set - cancel.same_binary_set).abs() < 1e-12;
        Ok((ok, obs))
    });
    rows.push(row(
        "variance-paradox",
        "regrouping the same words moves |d| from > 1.5 to < 0.01; SAME unchanged".into(),
        paradox,
    ));

    let angle = build_directbias_blindspot(2.0).and_then(|f| {
        let deg = pca_vs_mean_direction_angle(&f.defining_sets)?;
        Ok(((deg - 90.0).abs() < 1e-9, BTreeMap::from([("angle_degrees".to_string(), deg)])))
    });
    rows.push(row(
        "pca-vs-mean-direction-angle",
        "crossed defining pairs: PCA direction ⟂ mean pair direction".into(),
        angle,
    ));

    match property_verdicts(m) {
        Ok(verdicts) => {
            for v in verdicts {
                let id = format!("property/{}/{}/{}", v.metric, v.property, v.witness);
                let claim = format!("{} is {}{}", v.metric, if v.expected { "" } else { "not " }, v.property);
                let obs = BTreeMap::from([("observed".to_string(), if v.observed { 1.0 } else { 0.0 })]);
                rows.push(row(&id, claim, Ok((v.observed == v.expected, obs))));
            }
        }
        Err(e) => rows.push(row("property", "property verdicts".into(), Err(e))),
    }

    let all_passed = rows.iter().all(|r| r.passed);
    DiagnosticsReport { rows, all_passed }
}

/// Plain-text pass/fail table.
pub fn render_table(report: &DiagnosticsReport) -> String {
    let width = report.rows.iter().map(|r| r.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in &report.rows {
        let status = if r.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {:width$}  {}", r.id, r.claim));
        if let Some(e) = &r.error {
            out.push_str(&format!("  [error: {e}]"));
        }
        out.push('\n');
    }
    let failed = report.rows.iter().filter(|r| !r.passed).count();
    out.push_str(&format!("{} checks, {} failed\n", report.rows.len(), failed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faithful_metrics_pass_every_row() {
        let report = run_diagnostics(&Metrics::faithful());
        for r in &report.rows {
            assert!(r.passed, "{} failed: {:?} {:?}", r.id, r.observed, r.error);
        }
        assert!(report.all_passed);
    }

    #[test]
    fn blindspot_values() {
        let f = build_weat_blindspot(60.0, 10.0).unwrap();
        let (ok, obs) = f.evaluate(&Metrics::faithful()).unwrap();
        assert!(ok);
        assert!((obs["min_abs_word_score"] - 0.300767466).abs() < 1e-9);
        assert!((obs["same_binary_set"] - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(build_weat_blindspot(90.0, 10.0).is_err());
        assert!(build_weat_blindspot(60.0, 45.0).is_err());
    }

    #[test]
    fn small_phi_scores_vanish_but_d_stays_zero() {
        let f = build_weat_blindspot(0.01, 10.0).unwrap();
        let (ok, obs) = f.evaluate(&Metrics::faithful()).unwrap();
        assert!(ok && obs["min_abs_word_score"] < 1e-4);
    }

    #[test]
    fn skew_blindspot_variants() {
        let m = Metrics::faithful();
        let (_, exact) = build_weat_skew_blindspot(0.0).unwrap().evaluate(&m).unwrap();
        assert_eq!(exact["degenerate_variance"], 1.0);
        assert!((exact["same_skew"] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(exact["same_stereotype"] < 1e-12);
        let (ok, pert) = build_weat_skew_blindspot(1.0).unwrap().evaluate(&m).unwrap();
        assert!(ok && pert["effect_size"].abs() < 0.05 && pert["same_skew"] > 0.7);
    }

    #[test]
    fn direct_bias_needs_r_above_one() {
        assert!(build_directbias_blindspot(1.0).is_err());
        assert!(build_directbias_blindspot(3.0).is_ok());
    }

    #[test]
    fn subset_bound_examples() {
        let r = subset_sum_bound_report(&[1.0, -1.0]).unwrap();
        assert!(r.holds() && r.worst_slack.abs() < 1e-12);
        let r = subset_sum_bound_report(&[3.0, 3.0, -1.0, -1.0, -1.0, -1.0]).unwrap();
        assert!(r.holds() && r.worst_slack.abs() < 1e-9);
        assert!(check_subset_sum_bound(&[0.1, 5.0, -2.0, 3.3]).unwrap());
        assert!(matches!(check_subset_sum_bound(&[4.0, 4.0]), Err(Error::DegenerateVariance)));
    }

    #[test]
    fn variance_paradox_pattern() {
        let v = variance_paradox_demo().unwrap();
        let sep = v.pairing("separated").unwrap();
        assert!((sep.effect_size - 1.7888543819998317).abs() < 1e-9);
        assert!(v.pairing("mean-cancelling").unwrap().effect_size.abs() < 1e-12);
        assert!((sep.same_binary_set - 0.6).abs() < 1e-12);
    }

    #[test]
    fn angle_examples() {
        let single = vec![DefiningSet::from_vectors(&[vec![1.0, 0.5, 0.0], vec![-0.2, 0.1, 0.9]]).unwrap()];
        assert!(pca_vs_mean_direction_angle(&single).unwrap() < 1e-6);
        let f = build_directbias_blindspot(2.0).unwrap();
        assert!((pca_vs_mean_direction_angle(&f.defining_sets).unwrap() - 90.0).abs() < 1e-9);
    }

    #[test]
    fn property_table_matches_expectations() {
        for v in property_verdicts(&Metrics::faithful()).unwrap() {
            assert_eq!(v.expected, v.observed, "{} / {}", v.metric, v.property);
        }
    }
}
