//! Cluster expressions: finite presentations of the labeled linear order
//! attached to a normalized omega-term.
//!
//! A [`ClusterExpr`] is a sequence of blocks. A letters block contributes
//! one labeled step point per letter; an omega block contributes omega many
//! copies of its body, a single stationary center, and reverse-omega many
//! more copies. The expression presents the order *minus its maximum*; the
//! maximum point, labeled `1`, is implicit and appended at top level. This
//! makes concatenation of terms literally concatenation of blocks.

use std::fmt;

use crate::error::{Error, Result};
use crate::ordertype::{Atom, OrderType};
use crate::term::{Factor, OmegaTerm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    /// One step point per letter.
    Letters(String),
    /// `body * w + center + body * w*`; the center's J-class representative
    /// is `(base)^w`.
    Omega {
        body: Box<ClusterExpr>,
        base: OmegaTerm,
        jrep: OmegaTerm,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterExpr {
    pub blocks: Vec<Block>,
    /// The term this expression presents.
    pub term: OmegaTerm,
}

/// A step-point or center address. Copies count from the left end of the
/// omega part (`Fwd`) or from the right end of the reverse part (`Bwd`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pos {
    Word {
        block: usize,
        offset: usize,
    },
    Fwd {
        block: usize,
        copy: usize,
        inner: Box<Pos>,
    },
    Bwd {
        block: usize,
        copy: usize,
        inner: Box<Pos>,
    },
    Center {
        block: usize,
    },
    Max,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pos::Word { block, offset } => write!(f, "b{block}.{offset}"),
            Pos::Fwd { block, copy, inner } => write!(f, "b{block}.fwd{copy}.{inner}"),
            Pos::Bwd { block, copy, inner } => write!(f, "b{block}.bwd{copy}.{inner}"),
            Pos::Center { block } => write!(f, "b{block}.center"),
            Pos::Max => write!(f, "max"),
        }
    }
}

/// Builds the cluster expression of a normalized term.
pub fn build(term: &OmegaTerm) -> Result<ClusterExpr> {
    if !term.is_normal() {
        return Err(Error::NotNormalized {
            term: term.to_string(),
        });
    }
    Ok(build_unchecked(term))
}

fn build_unchecked(term: &OmegaTerm) -> ClusterExpr {
    let mut blocks: Vec<Block> = Vec::new();
    for factor in term.factors() {
        match factor {
            Factor::Letter(c) => match blocks.last_mut() {
                Some(Block::Letters(s)) => s.push(*c),
                _ => blocks.push(Block::Letters(c.to_string())),
            },
            Factor::Omega(base) => {
                let body = build_unchecked(base);
                let block = Block::Omega {
                    body: Box::new(body),
                    base: base.clone(),
                    jrep: OmegaTerm::omega(base.clone()),
                };
                if let Some(prev) = blocks.last() {
                    if boundary_centers_adjacent(prev, &block) {
                        // two adjacent stationary centers: collapse and log;
                        // unreachable from normalized input
                        log::warn!("adjacent stationary centers merged at build time");
                        continue;
                    }
                }
                blocks.push(block);
            }
        }
    }
    ClusterExpr {
        blocks,
        term: term.clone(),
    }
}

/// True when the boundary between the two blocks would put two stationary
/// points side by side, which needs bodies without step points.
fn boundary_centers_adjacent(prev: &Block, next: &Block) -> bool {
    match (prev, next) {
        (Block::Omega { body: b1, .. }, Block::Omega { body: b2, .. }) => {
            !has_step_points(b1) && !has_step_points(b2)
        }
        _ => false,
    }
}

pub fn has_step_points(ce: &ClusterExpr) -> bool {
    ce.blocks.iter().any(|b| match b {
        Block::Letters(s) => !s.is_empty(),
        Block::Omega { body, .. } => has_step_points(body),
    })
}

/// Order type of the presented order, implicit maximum included.
pub fn order_type(ce: &ClusterExpr) -> OrderType {
    let mut atoms = block_atoms(ce);
    atoms.push(Atom::Fin(1));
    OrderType(atoms).canonical()
}

fn block_atoms(ce: &ClusterExpr) -> Vec<Atom> {
    let mut atoms = Vec::new();
    for block in &ce.blocks {
        match block {
            Block::Letters(s) => atoms.push(Atom::Fin(s.len())),
            Block::Omega { body, .. } => {
                let inner = OrderType(block_atoms(body));
                atoms.push(Atom::OmegaMul(inner.clone()));
                atoms.push(Atom::One);
                atoms.push(Atom::OmegaStarMul(inner));
            }
        }
    }
    atoms
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterAxiom {
    MinMax,
    SuccessorDuality,
    PredecessorDuality,
    StepDensity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClusterCheck {
    Clustered,
    Violation(ClusterAxiom),
}

/// Checks the clustered-order axioms on the presentation. With the grammar
/// used here the only expressible violation is an omega body without step
/// points, which breaks step density (and with it the boundary dualities);
/// the extremal axiom holds because the implicit maximum always exists.
pub fn check_clustered(ce: &ClusterExpr) -> ClusterCheck {
    fn bodies_ok(ce: &ClusterExpr) -> bool {
        ce.blocks.iter().all(|b| match b {
            Block::Letters(_) => true,
            Block::Omega { body, .. } => has_step_points(body) && bodies_ok(body),
        })
    }
    if bodies_ok(ce) {
        ClusterCheck::Clustered
    } else {
        ClusterCheck::Violation(ClusterAxiom::StepDensity)
    }
}

/// Label of a step point; the implicit maximum carries the label `1`.
pub fn step_label(ce: &ClusterExpr, pos: &Pos) -> Result<char> {
    match pos {
        Pos::Max => Ok('1'),
        Pos::Word { block, offset } => match ce.blocks.get(*block) {
            Some(Block::Letters(s)) => s
                .chars()
                .nth(*offset)
                .ok_or_else(|| Error::InvalidPosition(format!("offset {offset} out of range"))),
            _ => Err(Error::InvalidPosition(format!(
                "block {block} is not a letters block"
            ))),
        },
        Pos::Fwd { block, inner, .. } | Pos::Bwd { block, inner, .. } => {
            match ce.blocks.get(*block) {
                Some(Block::Omega { body, .. }) => step_label_inner(body, inner),
                _ => Err(Error::InvalidPosition(format!(
                    "block {block} is not an omega block"
                ))),
            }
        }
        Pos::Center { .. } => Err(Error::InvalidPosition(
            "stationary points carry no letter".into(),
        )),
    }
}

fn step_label_inner(ce: &ClusterExpr, pos: &Pos) -> Result<char> {
    match pos {
        Pos::Max => Err(Error::InvalidPosition(
            "max addresses only the top level".into(),
        )),
        _ => step_label(ce, pos),
    }
}

/// The first `k` step labels, reading from the left.
pub fn window_left(ce: &ClusterExpr, k: usize) -> String {
    let mut out = String::new();
    collect_left(ce, k, &mut out);
    out
}

fn collect_left(ce: &ClusterExpr, k: usize, out: &mut String) {
    for block in &ce.blocks {
        if out.len() >= k {
            return;
        }
        match block {
            Block::Letters(s) => {
                for c in s.chars() {
                    out.push(c);
                    if out.len() >= k {
                        return;
                    }
                }
            }
            Block::Omega { body, .. } => {
                if !has_step_points(body) {
                    continue;
                }
                while out.len() < k {
                    collect_left(body, k, out);
                }
                return;
            }
        }
    }
}

/// The last `k` step labels, reading from the right (maximum excluded).
pub fn window_right(ce: &ClusterExpr, k: usize) -> String {
    let mut out = Vec::new();
    collect_right(ce, k, &mut out);
    out.reverse();
    out.into_iter().collect()
}

fn collect_right(ce: &ClusterExpr, k: usize, out: &mut Vec<char>) {
    for block in ce.blocks.iter().rev() {
        if out.len() >= k {
            return;
        }
        match block {
            Block::Letters(s) => {
                for c in s.chars().rev() {
                    out.push(c);
                    if out.len() >= k {
                        return;
                    }
                }
            }
            Block::Omega { body, .. } => {
                if !has_step_points(body) {
                    continue;
                }
                while out.len() < k {
                    collect_right(body, k, out);
                }
                return;
            }
        }
    }
}

/// A family of stationary centers: the chain of omega-block indices leading
/// to the center, outermost first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StatFamily(pub Vec<usize>);

impl fmt::Display for StatFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| format!("b{i}")).collect();
        write!(f, "{}.center", parts.join("."))
    }
}

/// All stationary-center families with their J-class representatives.
/// A family inside an omega body stands for one center per copy.
pub fn stationary_points(ce: &ClusterExpr) -> Vec<(StatFamily, OmegaTerm)> {
    let mut out = Vec::new();
    fn walk(ce: &ClusterExpr, prefix: &mut Vec<usize>, out: &mut Vec<(StatFamily, OmegaTerm)>) {
        for (i, block) in ce.blocks.iter().enumerate() {
            if let Block::Omega { body, jrep, .. } = block {
                prefix.push(i);
                out.push((StatFamily(prefix.clone()), jrep.clone()));
                walk(body, prefix, out);
                prefix.pop();
            }
        }
    }
    walk(ce, &mut Vec::new(), &mut out);
    out
}

/// Isomorphism of the presented labeled orders: structural equality of the
/// canonical presentations, labels compared pointwise, stationary markers
/// by position.
pub fn isomorphic(a: &ClusterExpr, b: &ClusterExpr) -> bool {
    a.blocks == b.blocks
}

/// Factors of a single block.
pub fn block_factors(block: &Block) -> Vec<Factor> {
    match block {
        Block::Letters(s) => s.chars().map(Factor::Letter).collect(),
        Block::Omega { base, .. } => vec![Factor::Omega(base.clone())],
    }
}

/// The word spelled strictly before a step point. Empty at the minimum.
pub fn prefix_factors(ce: &ClusterExpr, pos: &Pos) -> Result<Vec<Factor>> {
    let mut out = Vec::new();
    fn blocks_before(ce: &ClusterExpr, n: usize, out: &mut Vec<Factor>) {
        for b in &ce.blocks[..n] {
            out.extend(block_factors(b));
        }
    }
    match pos {
        Pos::Max => {
            blocks_before(ce, ce.blocks.len(), &mut out);
        }
        Pos::Word { block, offset } => {
            let Some(Block::Letters(s)) = ce.blocks.get(*block) else {
                return Err(Error::InvalidPosition(format!(
                    "block {block} is not a letters block"
                )));
            };
            if *offset >= s.len() {
                return Err(Error::InvalidPosition(format!(
                    "offset {offset} out of range"
                )));
            }
            blocks_before(ce, *block, &mut out);
            out.extend(s.chars().take(*offset).map(Factor::Letter));
        }
        Pos::Fwd { block, copy, inner } => {
            let Some(Block::Omega { body, base, .. }) = ce.blocks.get(*block) else {
                return Err(Error::InvalidPosition(format!(
                    "block {block} is not an omega block"
                )));
            };
            blocks_before(ce, *block, &mut out);
            for _ in 0..*copy {
                out.extend(base.factors().iter().cloned());
            }
            out.extend(prefix_factors(body, inner)?);
        }
        Pos::Bwd { block, inner, .. } => {
            let Some(Block::Omega { body, base, .. }) = ce.blocks.get(*block) else {
                return Err(Error::InvalidPosition(format!(
                    "block {block} is not an omega block"
                )));
            };
            blocks_before(ce, *block, &mut out);
            out.push(Factor::Omega(base.clone()));
            out.extend(prefix_factors(body, inner)?);
        }
        Pos::Center { .. } => {
            return Err(Error::InvalidPosition("centers are not step points".into()));
        }
    }
    Ok(out)
}

/// The word spelled from a step point on, starting with its own label.
/// Empty at the maximum.
pub fn suffix_factors(ce: &ClusterExpr, pos: &Pos) -> Result<Vec<Factor>> {
    let mut out = Vec::new();
    fn blocks_after(ce: &ClusterExpr, n: usize, out: &mut Vec<Factor>) {
        for b in &ce.blocks[n + 1..] {
            out.extend(block_factors(b));
        }
    }
    match pos {
        Pos::Max => {}
        Pos::Word { block, offset } => {
            let Some(Block::Letters(s)) = ce.blocks.get(*block) else {
                return Err(Error::InvalidPosition(format!(
                    "block {block} is not a letters block"
                )));
            };
            if *offset >= s.len() {
                return Err(Error::InvalidPosition(format!(
                    "offset {offset} out of range"
                )));
            }
            out.extend(s.chars().skip(*offset).map(Factor::Letter));
            blocks_after(ce, *block, &mut out);
        }
        Pos::Fwd { block, inner, .. } => {
            let Some(Block::Omega { body, base, .. }) = ce.blocks.get(*block) else {
                return Err(Error::InvalidPosition(format!(
                    "block {block} is not an omega block"
                )));
            };
            out.extend(suffix_factors(body, inner)?);
            out.push(Factor::Omega(base.clone()));
            blocks_after(ce, *block, &mut out);
        }
        Pos::Bwd { block, copy, inner } => {
            let Some(Block::Omega { body, base, .. }) = ce.blocks.get(*block) else {
                return Err(Error::InvalidPosition(format!(
                    "block {block} is not an omega block"
                )));
            };
            out.extend(suffix_factors(body, inner)?);
            for _ in 0..*copy {
                out.extend(base.factors().iter().cloned());
            }
            blocks_after(ce, *block, &mut out);
        }
        Pos::Center { .. } => {
            return Err(Error::InvalidPosition("centers are not step points".into()));
        }
    }
    Ok(out)
}

/// ASCII sketch of the presented order: letters for step points, `*` for a
/// small center, `@` for a top-level one.
pub fn diagram(ce: &ClusterExpr) -> String {
    fn walk(ce: &ClusterExpr, top: bool, out: &mut String) {
        for block in &ce.blocks {
            match block {
                Block::Letters(s) => out.push_str(s),
                Block::Omega { body, .. } => {
                    walk(body, false, out);
                    out.push_str("... ");
                    out.push(if top { '@' } else { '*' });
                    out.push_str(" ...");
                    walk(body, false, out);
                }
            }
        }
    }
    let mut out = String::new();
    walk(ce, true, &mut out);
    out.push('1');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::OmegaTerm;

    fn t(s: &str) -> OmegaTerm {
        OmegaTerm::parse(s).unwrap()
    }

    fn b(s: &str) -> ClusterExpr {
        build(&t(s)).unwrap()
    }

    #[test]
    fn build_refuses_unnormalized_terms() {
        assert!(matches!(
            build(&t("a(a)^w")),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn single_omega_order_type() {
        let ce = b("(a)^w");
        assert_eq!(order_type(&ce).to_string(), "w + 1 + w*");
        assert_eq!(stationary_points(&ce).len(), 1);
    }

    #[test]
    fn nested_omega_order_type() {
        let ce = b("((a)^wb)^w");
        assert_eq!(
            order_type(&ce).to_string(),
            "(w+1+w*)\u{b7}w + 1 + (w+1+w*)\u{b7}w*"
        );
    }

    #[test]
    fn finite_word_order_type() {
        let ce = b("ab");
        assert_eq!(ce.blocks, vec![Block::Letters("ab".into())]);
        assert_eq!(order_type(&ce).to_string(), "F(3)");
        assert!(stationary_points(&ce).is_empty());
    }

    #[test]
    fn builds_are_clustered() {
        for s in ["a", "ab", "(a)^w", "((a)^wb)^w", "a(b(c)^w)^wa"] {
            let term = t(s).normalize();
            assert_eq!(
                check_clustered(&build(&term).unwrap()),
                ClusterCheck::Clustered,
                "{s}"
            );
        }
    }

    #[test]
    fn hand_built_empty_body_violates_step_density() {
        let ce = ClusterExpr {
            blocks: vec![Block::Omega {
                body: Box::new(ClusterExpr {
                    blocks: vec![],
                    term: t("a"),
                }),
                base: t("a"),
                jrep: t("(a)^w"),
            }],
            term: t("(a)^w"),
        };
        assert_eq!(
            check_clustered(&ce),
            ClusterCheck::Violation(ClusterAxiom::StepDensity)
        );
    }

    #[test]
    fn labels_and_windows() {
        let ce = b("(a)^w");
        let pos = Pos::Fwd {
            block: 0,
            copy: 3,
            inner: Box::new(Pos::Word {
                block: 0,
                offset: 0,
            }),
        };
        assert_eq!(step_label(&ce, &pos).unwrap(), 'a');
        assert_eq!(step_label(&ce, &Pos::Max).unwrap(), '1');

        let nested = b("((a)^wb)^w");
        assert_eq!(window_left(&nested, 5), "aaaaa");
        assert_eq!(window_right(&nested, 1), "b");
        assert_eq!(window_right(&nested, 3), "aab");
    }

    #[test]
    fn windows_spell_prefixes_and_suffixes() {
        for s in ["(ab)^w", "((a)^wb)^w", "ab(ba)^w", "(a)^wb(c)^w"] {
            let term = t(s).normalize();
            let ce = build(&term).unwrap();
            for k in 1..=8 {
                assert_eq!(
                    window_left(&ce, k),
                    term.finite_prefix(k).unwrap(),
                    "{s} left {k}"
                );
                assert_eq!(
                    window_right(&ce, k),
                    term.finite_suffix(k).unwrap(),
                    "{s} right {k}"
                );
            }
            assert_eq!(
                window_right(&ce, 1).chars().next().unwrap(),
                term.last_letter()
            );
        }
    }

    #[test]
    fn stationary_families_and_jreps() {
        let ce = b("((a)^wb)^w");
        let stats = stationary_points(&ce);
        assert_eq!(stats.len(), 2);
        assert_eq!(stats[0].0, StatFamily(vec![0]));
        assert_eq!(stats[0].1, t("((a)^wb)^w"));
        assert_eq!(stats[1].0, StatFamily(vec![0, 0]));
        assert_eq!(stats[1].1, t("(a)^w"));
    }

    #[test]
    fn isomorphism_is_equality_of_normal_builds() {
        assert!(isomorphic(
            &b("(a)^w"),
            &build(&t("a(a)^w").normalize()).unwrap()
        ));
        assert!(!isomorphic(&b("(a)^w"), &b("(b)^w")));
        assert!(!isomorphic(&b("ab"), &b("ba")));
    }

    #[test]
    fn prefix_and_suffix_terms_at_positions() {
        let ce = b("((a)^wb)^w");
        // position: copy 2 of the outer block, inside it copy 1 of the inner
        // omega, at the letter
        let pos = Pos::Fwd {
            block: 0,
            copy: 2,
            inner: Box::new(Pos::Fwd {
                block: 0,
                copy: 1,
                inner: Box::new(Pos::Word {
                    block: 0,
                    offset: 0,
                }),
            }),
        };
        let pre = OmegaTerm::new(prefix_factors(&ce, &pos).unwrap()).unwrap();
        assert_eq!(pre.to_string(), "(a)^wb(a)^wba");
        let suf = OmegaTerm::new(suffix_factors(&ce, &pos).unwrap()).unwrap();
        assert_eq!(suf.to_string(), "a(a)^wb((a)^wb)^w");
        // product of the two spells the whole term after normalization
        let mut all = pre.factors().to_vec();
        all.extend(suf.factors().iter().cloned());
        assert_eq!(OmegaTerm::new(all).unwrap().normalize(), t("((a)^wb)^w"));
    }

    #[test]
    fn bwd_prefix_terms_absorb_into_the_omega() {
        let ce = b("(ab)^w");
        let pos = Pos::Bwd {
            block: 0,
            copy: 2,
            inner: Box::new(Pos::Word {
                block: 0,
                offset: 1,
            }),
        };
        let pre = OmegaTerm::new(prefix_factors(&ce, &pos).unwrap()).unwrap();
        assert_eq!(pre.to_string(), "(ab)^wa");
        let suf = OmegaTerm::new(suffix_factors(&ce, &pos).unwrap()).unwrap();
        assert_eq!(suf.to_string(), "babab");
    }

    #[test]
    fn diagram_sketch() {
        assert_eq!(diagram(&b("(a)^w")), "a... @ ...a1");
    }
}
