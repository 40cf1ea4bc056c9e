//! Property tests for the structural invariants: rewriting soundness,
//! prefix coherence, factor-set closure, clustered builds, and the
//! concatenation law for order types.

use proptest::prelude::*;

use clusterword::cluster::{self, ClusterCheck};
use clusterword::fixtures;
use clusterword::green;
use clusterword::ordertype::OrderType;
use clusterword::recognition;
use clusterword::term::{Factor, OmegaTerm};

fn factor_strategy(depth: u32) -> BoxedStrategy<Factor> {
    let letter = prop::sample::select(vec!['a', 'b']).prop_map(Factor::Letter);
    if depth == 0 {
        letter.boxed()
    } else {
        prop_oneof![
            3 => letter,
            2 => word_strategy(depth - 1).prop_map(Factor::Omega),
        ]
        .boxed()
    }
}

fn word_strategy(depth: u32) -> BoxedStrategy<OmegaTerm> {
    prop::collection::vec(factor_strategy(depth), 1..4)
        .prop_map(|fs| OmegaTerm::new(fs).unwrap())
        .boxed()
}

fn terms() -> BoxedStrategy<OmegaTerm> {
    word_strategy(2)
}

/// Images across the aperiodic fixtures; the rewriting rules are identities
/// of finite aperiodic semigroups only.
fn eval_everywhere(t: &OmegaTerm) -> Vec<usize> {
    let mut out = Vec::new();
    for (_, sg) in fixtures::aperiodic() {
        let Some(phi) = sg.generators() else { continue };
        if !t.letters().iter().all(|c| phi.contains_key(c)) {
            continue;
        }
        out.push(t.eval(&sg, &phi.clone()).unwrap());
    }
    out
}

proptest! {
    #[test]
    fn print_parse_roundtrip(t in terms()) {
        prop_assert_eq!(OmegaTerm::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn every_rewrite_step_preserves_evaluation(t in terms()) {
        let mut cur = t;
        while let Some(next) = cur.rewrite_step() {
            prop_assert_eq!(eval_everywhere(&cur), eval_everywhere(&next), "{} -> {}", cur, next);
            cur = next;
        }
    }

    #[test]
    fn normalization_preserves_evaluation(t in terms()) {
        prop_assert_eq!(eval_everywhere(&t), eval_everywhere(&t.normalize()));
    }

    #[test]
    fn normal_forms_are_stable(t in terms()) {
        let n = t.normalize();
        prop_assert!(n.is_normal());
        prop_assert_eq!(n.clone(), n.normalize());
    }

    #[test]
    fn prefixes_are_nested(t in terms(), k in 1usize..12) {
        if let Ok(long) = t.finite_prefix(k) {
            for j in 1..k {
                prop_assert!(long.starts_with(&t.finite_prefix(j).unwrap()));
            }
        }
    }

    #[test]
    fn window_labels_spell_the_prefix(t in terms(), k in 1usize..10) {
        let n = t.normalize();
        let ce = cluster::build(&n).unwrap();
        if let Ok(prefix) = n.finite_prefix(k) {
            prop_assert_eq!(cluster::window_left(&ce, k), prefix);
        }
        if let Ok(suffix) = n.finite_suffix(k) {
            prop_assert_eq!(cluster::window_right(&ce, k), suffix);
        }
    }

    #[test]
    fn factor_sets_are_monotone_and_factorial(t in terms(), n in 1usize..5) {
        let small = t.factors_upto(n);
        let large = t.factors_upto(n + 1);
        prop_assert!(small.is_subset(&large));
        for w in &small {
            for i in 0..w.len() {
                for j in i + 1..=w.len() {
                    prop_assert!(small.contains(&w[i..j]));
                }
            }
        }
    }

    #[test]
    fn builds_are_clustered(t in terms()) {
        let ce = cluster::build(&t.normalize()).unwrap();
        prop_assert_eq!(cluster::check_clustered(&ce), ClusterCheck::Clustered);
    }

    #[test]
    fn concatenation_law_for_order_types(u in terms(), v in terms()) {
        let (nu, nv) = (u.normalize(), v.normalize());
        let mut joined = nu.factors().to_vec();
        joined.extend(nv.factors().iter().cloned());
        let w = OmegaTerm::new(joined.clone()).unwrap();
        // the law applies when the cut survives normalization verbatim
        if w.normalize().factors() == joined.as_slice() {
            let whole = cluster::order_type(&cluster::build(&w.normalize()).unwrap());
            let left = cluster::build(&nu).unwrap();
            let right = cluster::build(&nv).unwrap();
            let mut combined = block_atoms_of(&left);
            combined.extend(block_atoms_of(&right));
            combined.push(clusterword::ordertype::Atom::Fin(1));
            let sum = OrderType(combined).canonical();
            prop_assert_eq!(whole, sum);
        }
    }

    #[test]
    fn recognition_is_isomorphism_invariant(t in terms()) {
        // builds of equal normal forms recognize the same elements
        let n = t.normalize();
        let ce = cluster::build(&n).unwrap();
        for (_, sg) in fixtures::all() {
            if !green::is_aperiodic(&sg) || !green::is_unambiguous(&sg) {
                continue;
            }
            let Some(phi) = sg.generators() else { continue };
            if !n.letters().iter().all(|c| phi.contains_key(c)) {
                continue;
            }
            let phi = phi.clone();
            let set = recognition::recognized_set(&ce, &sg, &phi).unwrap();
            prop_assert_eq!(set, vec![n.eval(&sg, &phi).unwrap()]);
        }
    }
}

fn block_atoms_of(ce: &cluster::ClusterExpr) -> Vec<clusterword::ordertype::Atom> {
    use clusterword::ordertype::Atom;
    let mut atoms = Vec::new();
    for block in &ce.blocks {
        match block {
            cluster::Block::Letters(s) => atoms.push(Atom::Fin(s.len())),
            cluster::Block::Omega { body, .. } => {
                let inner = OrderType(block_atoms_of(body));
                atoms.push(Atom::OmegaMul(inner.clone()));
                atoms.push(Atom::One);
                atoms.push(Atom::OmegaStarMul(inner));
            }
        }
    }
    atoms
}

/// The image of a stationary representative sits in a J-class containing an
/// idempotent that stabilizes the center's image vertex.
#[test]
fn stationary_representatives_match_image_stabilizers() {
    let sample = clusterword::term::sample_terms(11, 25, &['a', 'b'], 2);
    for t in sample {
        let ce = cluster::build(&t).unwrap();
        for (family, jrep) in cluster::stationary_points(&ce) {
            for (name, sg) in fixtures::aperiodic() {
                let Some(phi) = sg.generators() else { continue };
                if !t.letters().iter().all(|c| phi.contains_key(c)) {
                    continue;
                }
                let phi = phi.clone();
                let gd = green::green(&sg);
                let j = jrep.eval(&sg, &phi).unwrap();
                // image vertex of the center: prefix and suffix both absorb
                // the omega power of the block base
                let (x, y) = center_pair(&ce, &family, &sg, &phi);
                let stabilizing_idempotent = gd
                    .idempotents_of_j_class(gd.j_class[j])
                    .into_iter()
                    .any(|e| sg.mul1(x, e) == x && sg.mul1(e, y) == y);
                assert!(
                    stabilizing_idempotent,
                    "{t}: family {family} on {name}: no idempotent of the class of {} stabilizes ({}, {})",
                    j + 1,
                    x + 1,
                    y + 1
                );
            }
        }
    }
}

fn center_pair(
    ce: &cluster::ClusterExpr,
    family: &cluster::StatFamily,
    sg: &clusterword::FiniteSemigroup,
    phi: &std::collections::BTreeMap<char, usize>,
) -> (usize, usize) {
    use clusterword::term::eval_factors;
    let mut cur = ce;
    let mut x = sg.one();
    let mut y = sg.one();
    for (depth, &block) in family.0.iter().enumerate() {
        let mut pre = Vec::new();
        for b in &cur.blocks[..block] {
            pre.extend(cluster::block_factors(b));
        }
        let mut post = Vec::new();
        for b in &cur.blocks[block + 1..] {
            post.extend(cluster::block_factors(b));
        }
        let cluster::Block::Omega { body, base, .. } = &cur.blocks[block] else {
            panic!("family path leaves the omega blocks");
        };
        let u = sg.omega_power(base.eval(sg, phi).unwrap());
        let pre_img = eval_factors(&pre, sg, phi).unwrap();
        let post_img = eval_factors(&post, sg, phi).unwrap();
        x = sg.mul1(x, sg.mul1(pre_img, u));
        y = sg.mul1(sg.mul1(u, post_img), y);
        let _ = depth;
        cur = body;
    }
    (x, y)
}
