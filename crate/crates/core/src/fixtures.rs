//! Worked fixtures: the coin-flip state space and the objects built on it.
//!
//! States are `h, t` (faces), `e, el` (edges; `el` is the worn edge) and
//! `l1, l2` (marked landing spots).

use crate::act::{Act, Lottery, UtilityFunction};
use crate::belief::Belief;
use crate::hypothesis_testing::HtRepresentation;
use crate::lps::LpsRepresentation;
use crate::ordered_surprises::OsRepresentation;
use crate::preferences::PreferenceFamily;
use crate::rational::{q, Rational};
use crate::space::StateSpace;

pub fn coin_space() -> StateSpace {
    StateSpace::new(["h", "t", "e", "el", "l1", "l2"]).expect("valid labels")
}

/// `μ₀` uniform on the faces, `μ₁` on the edges (7/8, 1/8), `μ₂` uniform on the marks.
pub fn coin_priors() -> [Belief; 3] {
    let s = coin_space();
    [
        Belief::from_pairs(&s, &[("h", q(1, 2)), ("t", q(1, 2))]),
        Belief::from_pairs(&s, &[("e", q(7, 8)), ("el", q(1, 8))]),
        Belief::from_pairs(&s, &[("l1", q(1, 2)), ("l2", q(1, 2))]),
    ]
    .map(|b| b.expect("valid fixture"))
}

pub fn coin_os() -> OsRepresentation {
    OsRepresentation::new(coin_priors().to_vec()).expect("full coverage")
}

/// The hypothesis-testing counterexample: `ρ = (1/2, 1/3, 1/6)`, threshold 0.
pub fn coin_ht_counterexample() -> HtRepresentation {
    HtRepresentation::new(coin_priors().to_vec(), vec![q(1, 2), q(1, 3), q(1, 6)], Rational::zero())
        .expect("valid fixture")
}

pub fn coin_lps() -> LpsRepresentation {
    LpsRepresentation::new(coin_priors().to_vec()).expect("nonempty")
}

/// Linear utility over money labels `$0, $1/2, $1, $2`.
pub fn money_utility() -> UtilityFunction {
    UtilityFunction::new([("$0", q(0, 1)), ("$1/2", q(1, 2)), ("$1", q(1, 1)), ("$2", q(2, 1))])
}

/// `$v` on the faces, `$0` elsewhere.
pub fn faces_bet(space: &StateSpace, v: i64) -> Act {
    let faces = space.event(["h", "t"]).expect("coin space");
    Act::bet(space, faces, Lottery::sure(format!("${v}")), Lottery::sure("$0"))
}

/// `$1` on the faces, `$1/2` on the edges, `$0` elsewhere.
pub fn edge_hedge(space: &StateSpace) -> Act {
    let edges = space.event(["e", "el"]).expect("coin space");
    let faces = space.event(["h", "t"]).expect("coin space");
    let g = Act::bet(space, edges, Lottery::sure("$1/2"), Lottery::sure("$0"));
    crate::act::compose_act(&Act::constant(space, Lottery::sure("$1")), faces, &g).expect("same space")
}

/// Coin ordered surprises with linear money utility at every order.
pub fn coin_family() -> PreferenceFamily {
    let u = money_utility();
    PreferenceFamily::new(coin_os(), vec![u.clone(), u.clone(), u]).expect("valid family")
}
