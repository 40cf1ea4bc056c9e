//! Omega-terms: words over a finite alphabet extended by the idempotent
//! power `(...)^w`, with evaluation into finite semigroups and rewriting to
//! a canonical form.
//!
//! A term is a nonempty sequence of factors; a factor is a letter or an
//! omega power of a term. There is no explicit concatenation node, so terms
//! are flat by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::corpus::CorpusEntry;
use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Letter(char),
    Omega(OmegaTerm),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaTerm(Vec<Factor>);

impl OmegaTerm {
    /// Wraps a nonempty factor sequence.
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "a term has at least one factor".into(),
            });
        }
        for f in &factors {
            if let Factor::Omega(inner) = f {
                if inner.0.is_empty() {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "an omega power has a nonempty base".into(),
                    });
                }
            }
        }
        Ok(OmegaTerm(factors))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn letter(c: char) -> Self {
        OmegaTerm(vec![Factor::Letter(c)])
    }

    pub fn omega(base: OmegaTerm) -> Self {
        OmegaTerm(vec![Factor::Omega(base)])
    }

    /// Grammar: `term := factor+ ; factor := letter | '(' term ')^w'`,
    /// letters lowercase ASCII; whitespace between factors is skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let word = parse_word(bytes, &mut pos)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(Error::Parse {
                pos: pos + 1,
                msg: format!("unexpected character {:?}", bytes[pos] as char),
            });
        }
        OmegaTerm::new(word)
    }

    pub fn letters(&self) -> BTreeSet<char> {
        fn walk(fs: &[Factor], out: &mut BTreeSet<char>) {
            for f in fs {
                match f {
                    Factor::Letter(c) => {
                        out.insert(*c);
                    }
                    Factor::Omega(t) => walk(&t.0, out),
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(&self.0, &mut out);
        out
    }

    pub fn node_count(&self) -> usize {
        fn walk(fs: &[Factor]) -> usize {
            fs.iter()
                .map(|f| match f {
                    Factor::Letter(_) => 1,
                    Factor::Omega(t) => 1 + walk(&t.0),
                })
                .sum()
        }
        walk(&self.0)
    }

    pub fn contains_omega(&self) -> bool {
        self.0.iter().any(|f| matches!(f, Factor::Omega(_)))
    }

    /// Length as a finite word, `None` for terms with an omega power.
    pub fn finite_len(&self) -> Option<usize> {
        if self.contains_omega() {
            None
        } else {
            Some(self.0.len())
        }
    }

    /// Homomorphic image under `phi`, with omega powers evaluated by
    /// [`FiniteSemigroup::omega_power`].
    pub fn eval(&self, sg: &FiniteSemigroup, phi: &BTreeMap<char, usize>) -> Result<usize> {
        eval_factors_s(&self.0, sg, phi)
    }

    pub fn first_letter(&self) -> char {
        match &self.0[0] {
            Factor::Letter(c) => *c,
            Factor::Omega(t) => t.first_letter(),
        }
    }

    pub fn last_letter(&self) -> char {
        match self.0.last().unwrap() {
            Factor::Letter(c) => *c,
            Factor::Omega(t) => t.last_letter(),
        }
    }

    /// The length-`k` prefix as a finite word.
    pub fn finite_prefix(&self, k: usize) -> Result<String> {
        let mut out = String::new();
        collect_prefix(&self.0, k, &mut out);
        if out.len() < k {
            return Err(Error::PrefixTooLong {
                wanted: k,
                len: out.len(),
            });
        }
        Ok(out)
    }

    /// The length-`k` suffix as a finite word.
    pub fn finite_suffix(&self, k: usize) -> Result<String> {
        let mut out = Vec::new();
        collect_suffix(&self.0, k, &mut out);
        if out.len() < k {
            return Err(Error::PrefixTooLong {
                wanted: k,
                len: out.len(),
            });
        }
        out.reverse();
        Ok(out.into_iter().collect())
    }

    /// The exact set of finite factors of length at most `n`, obtained by
    /// unrolling omega powers until the factor set reaches its fixpoint.
    pub fn factors_upto(&self, n: usize) -> BTreeSet<String> {
        if n == 0 {
            return BTreeSet::new();
        }
        let mut reps = n + 2;
        let mut prev = factor_set(&self.expand(reps), n);
        loop {
            reps += 1;
            let next = factor_set(&self.expand(reps), n);
            if next == prev {
                return next;
            }
            prev = next;
        }
    }

    /// Finite word with every omega power replaced by `reps` copies.
    fn expand(&self, reps: usize) -> String {
        fn walk(fs: &[Factor], reps: usize, out: &mut String) {
            for f in fs {
                match f {
                    Factor::Letter(c) => out.push(*c),
                    Factor::Omega(t) => {
                        let mut unit = String::new();
                        walk(&t.0, reps, &mut unit);
                        for _ in 0..reps {
                            out.push_str(&unit);
                        }
                    }
                }
            }
        }
        let mut out = String::new();
        walk(&self.0, reps, &mut out);
        out
    }

    /// Applies one rewrite rule at the innermost leftmost redex, if any.
    pub fn rewrite_step(&self) -> Option<OmegaTerm> {
        rewrite_word(&self.0).map(OmegaTerm)
    }

    /// Exhaustive rewriting to the canonical form. The rules, each valid in
    /// every finite aperiodic semigroup:
    ///
    /// * `(x^w)^w -> x^w`
    /// * `x^w x^w -> x^w`
    /// * `x x^w -> x^w` and `x^w x -> x^w`
    /// * `(x^n)^w -> x^w` for `n >= 2`
    /// * `(xy)^w x -> x (yx)^w`
    ///
    /// Each step drops the node count or moves a letter out of the scope of
    /// an omega opening, so rewriting terminates.
    pub fn normalize(&self) -> OmegaTerm {
        let mut t = self.clone();
        while let Some(next) = t.rewrite_step() {
            t = next;
        }
        t
    }

    pub fn is_normal(&self) -> bool {
        self.rewrite_step().is_none()
    }
}

impl fmt::Display for OmegaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in &self.0 {
            match factor {
                Factor::Letter(c) => write!(f, "{c}")?,
                Factor::Omega(t) => write!(f, "({t})^w")?,
            }
        }
        Ok(())
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_word(bytes: &[u8], pos: &mut usize) -> Result<Vec<Factor>> {
    let mut out = Vec::new();
    loop {
        skip_ws(bytes, pos);
        if *pos >= bytes.len() {
            break;
        }
        match bytes[*pos] {
            c if c.is_ascii_lowercase() => {
                out.push(Factor::Letter(c as char));
                *pos += 1;
            }
            b'(' => {
                *pos += 1;
                let inner = parse_word(bytes, pos)?;
                if inner.is_empty() {
                    return Err(Error::Parse {
                        pos: *pos + 1,
                        msg: "empty omega base".into(),
                    });
                }
                skip_ws(bytes, pos);
                if !bytes[*pos..].starts_with(b")^w") {
                    return Err(Error::Parse {
                        pos: *pos + 1,
                        msg: "expected `)^w`".into(),
                    });
                }
                *pos += 3;
                out.push(Factor::Omega(OmegaTerm(inner)));
            }
            b')' => break,
            c => {
                return Err(Error::Parse {
                    pos: *pos + 1,
                    msg: format!("unexpected character {:?}", c as char),
                })
            }
        }
    }
    Ok(out)
}

/// Image of a factor sequence in `S` (never the adjoined identity, since
/// terms are nonempty).
fn eval_factors_s(
    fs: &[Factor],
    sg: &FiniteSemigroup,
    phi: &BTreeMap<char, usize>,
) -> Result<usize> {
    let mut acc: Option<usize> = None;
    for f in fs {
        let v = match f {
            Factor::Letter(c) => *phi.get(c).ok_or(Error::UnmappedLetter(*c))?,
            Factor::Omega(t) => sg.omega_power(eval_factors_s(&t.0, sg, phi)?),
        };
        acc = Some(match acc {
            None => v,
            Some(a) => sg.mul(a, v),
        });
    }
    acc.ok_or_else(|| Error::Invariant("empty factor sequence".into()))
}

/// Image of a possibly empty factor sequence in `S^I`.
pub fn eval_factors(
    fs: &[Factor],
    sg: &FiniteSemigroup,
    phi: &BTreeMap<char, usize>,
) -> Result<usize> {
    if fs.is_empty() {
        return Ok(sg.one());
    }
    eval_factors_s(fs, sg, phi)
}

fn factor_set(word: &str, n: usize) -> BTreeSet<String> {
    let chars: Vec<char> = word.chars().collect();
    let mut out = BTreeSet::new();
    for i in 0..chars.len() {
        for len in 1..=n.min(chars.len() - i) {
            out.insert(chars[i..i + len].iter().collect());
        }
    }
    out
}

fn collect_prefix(fs: &[Factor], k: usize, out: &mut String) {
    for f in fs {
        if out.len() >= k {
            return;
        }
        match f {
            Factor::Letter(c) => out.push(*c),
            Factor::Omega(t) => {
                if t.contains_omega() {
                    collect_prefix(&t.0, k, out);
                } else {
                    let unit: String =
                        t.0.iter()
                            .map(|f| match f {
                                Factor::Letter(c) => *c,
                                Factor::Omega(_) => unreachable!(),
                            })
                            .collect();
                    while out.len() < k {
                        for c in unit.chars() {
                            out.push(c);
                            if out.len() >= k {
                                break;
                            }
                        }
                    }
                }
                // everything after an omega power is beyond every finite prefix
                return;
            }
        }
    }
}

fn collect_suffix(fs: &[Factor], k: usize, out: &mut Vec<char>) {
    for f in fs.iter().rev() {
        if out.len() >= k {
            return;
        }
        match f {
            Factor::Letter(c) => out.push(*c),
            Factor::Omega(t) => {
                if t.contains_omega() {
                    collect_suffix(&t.0, k, out);
                } else {
                    let unit: Vec<char> =
                        t.0.iter()
                            .rev()
                            .map(|f| match f {
                                Factor::Letter(c) => *c,
                                Factor::Omega(_) => unreachable!(),
                            })
                            .collect();
                    while out.len() < k {
                        for &c in &unit {
                            out.push(c);
                            if out.len() >= k {
                                break;
                            }
                        }
                    }
                }
                return;
            }
        }
    }
}

/// Shortest `p` with `w = p^(len/p)`.
fn primitive_root(fs: &[Factor]) -> usize {
    let n = fs.len();
    'outer: for p in 1..n {
        if !n.is_multiple_of(p) {
            continue;
        }
        for i in p..n {
            if fs[i] != fs[i - p] {
                continue 'outer;
            }
        }
        return p;
    }
    n
}

fn rewrite_word(word: &[Factor]) -> Option<Vec<Factor>> {
    for (i, factor) in word.iter().enumerate() {
        let Factor::Omega(base) = factor else {
            continue;
        };
        // innermost first
        if let Some(nb) = rewrite_word(&base.0) {
            let mut out = word.to_vec();
            out[i] = Factor::Omega(OmegaTerm(nb));
            return Some(out);
        }
        let b = &base.0;
        // (x^w)^w -> x^w
        if b.len() == 1 {
            if let Factor::Omega(inner) = &b[0] {
                let mut out = word.to_vec();
                out[i] = Factor::Omega(inner.clone());
                return Some(out);
            }
        }
        // (x^n)^w -> x^w
        let root = primitive_root(b);
        if root < b.len() {
            let mut out = word.to_vec();
            out[i] = Factor::Omega(OmegaTerm(b[..root].to_vec()));
            return Some(out);
        }
        // x^w x^w -> x^w
        if i + 1 < word.len() && word[i + 1] == *factor {
            let mut out = word.to_vec();
            out.remove(i + 1);
            return Some(out);
        }
        // x x^w -> x^w
        if i >= b.len() && &word[i - b.len()..i] == b.as_slice() {
            let mut out = word.to_vec();
            out.drain(i - b.len()..i);
            return Some(out);
        }
        // x^w x -> x^w
        if i + 1 + b.len() <= word.len() && &word[i + 1..i + 1 + b.len()] == b.as_slice() {
            let mut out = word.to_vec();
            out.drain(i + 1..i + 1 + b.len());
            return Some(out);
        }
        // (xy)^w x -> x (yx)^w, with x the longest proper prefix of the base
        // matching what follows
        let avail = word.len() - i - 1;
        let max_k = b.len().saturating_sub(1).min(avail);
        for k in (1..=max_k).rev() {
            if word[i + 1..i + 1 + k] == b[..k] {
                let mut rotated = b[k..].to_vec();
                rotated.extend_from_slice(&b[..k]);
                let mut out = Vec::with_capacity(word.len());
                out.extend_from_slice(&word[..i]);
                out.extend_from_slice(&b[..k]);
                out.push(Factor::Omega(OmegaTerm(rotated)));
                out.extend_from_slice(&word[i + 1 + k..]);
                return Some(out);
            }
        }
    }
    None
}

/// Deterministic sample of distinct normalized terms over the alphabet,
/// with omega powers nested at most `max_depth` deep.
pub fn sample_terms(
    seed: u64,
    count: usize,
    alphabet: &[char],
    max_depth: usize,
) -> Vec<OmegaTerm> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    fn gen_word(rng: &mut rand_chacha::ChaCha8Rng, alphabet: &[char], depth: usize) -> Vec<Factor> {
        let len = rng.gen_range(1..=4usize);
        (0..len)
            .map(|_| {
                if depth > 0 && rng.gen_bool(0.4) {
                    Factor::Omega(OmegaTerm(gen_word(rng, alphabet, depth - 1)))
                } else {
                    Factor::Letter(alphabet[rng.gen_range(0..alphabet.len())])
                }
            })
            .collect()
    }

    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count && attempts < 100_000 {
        attempts += 1;
        let t = OmegaTerm(gen_word(&mut rng, alphabet, max_depth)).normalize();
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    out
}

/// Outcome of comparing two terms against a corpus of finite images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Some member evaluates the terms differently (1-based images).
    Distinct {
        witness: String,
        lhs: usize,
        rhs: usize,
    },
    /// Every applicable member agrees; equality is not claimed.
    IndistinguishableAtScale,
}

/// Evaluates both terms in the unambiguous cover of every corpus member
/// whose generator map covers the letters used.
pub fn equal_oracle(t1: &OmegaTerm, t2: &OmegaTerm, corpus: &[CorpusEntry]) -> Verdict {
    let mut letters = t1.letters();
    letters.extend(t2.letters());
    for entry in corpus {
        let target = entry.recognition_target();
        let Some(phi) = target.generators() else {
            continue;
        };
        if !letters.iter().all(|c| phi.contains_key(c)) {
            continue;
        }
        let phi = phi.clone();
        let lhs = t1.eval(target, &phi).expect("letters are covered");
        let rhs = t2.eval(target, &phi).expect("letters are covered");
        if lhs != rhs {
            return Verdict::Distinct {
                witness: entry.id.clone(),
                lhs: lhs + 1,
                rhs: rhs + 1,
            };
        }
    }
    Verdict::IndistinguishableAtScale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fixtures;

    fn t(s: &str) -> OmegaTerm {
        OmegaTerm::parse(s).unwrap()
    }

    #[test]
    fn parses_letters_and_omegas() {
        let term = t("a(b)^w");
        assert_eq!(
            term.factors(),
            &[Factor::Letter('a'), Factor::Omega(OmegaTerm::letter('b'))]
        );
    }

    #[test]
    fn parse_keeps_nested_omegas() {
        let term = t("((ab)^w)^w");
        let inner = OmegaTerm::new(vec![Factor::Letter('a'), Factor::Letter('b')]).unwrap();
        assert_eq!(term, OmegaTerm::omega(OmegaTerm::omega(inner)));
    }

    #[test]
    fn empty_input_is_a_syntax_error() {
        assert!(matches!(OmegaTerm::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(OmegaTerm::parse("()^w"), Err(Error::Parse { .. })));
        assert!(matches!(OmegaTerm::parse("a)"), Err(Error::Parse { .. })));
        assert!(matches!(OmegaTerm::parse("(a"), Err(Error::Parse { .. })));
        assert!(matches!(OmegaTerm::parse("A"), Err(Error::Parse { .. })));
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in ["a", "ab", "a(b)^w", "((ab)^w)^w", "(a(ba)^w)^wb"] {
            assert_eq!(t(s).to_string(), s);
        }
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(t("(a)^w(a)^w").normalize(), t("(a)^w"));
        assert_eq!(t("a(a)^w").normalize(), t("(a)^w"));
        assert_eq!(t("(a)^wa").normalize(), t("(a)^w"));
        assert_eq!(t("((ab)^w)^w").normalize(), t("(ab)^w"));
        assert_eq!(t("(abab)^w").normalize(), t("(ab)^w"));
        assert_eq!(t("(ab)^wa").normalize(), t("a(ba)^w"));
        assert_eq!(t("(ab)^wab").normalize(), t("(ab)^w"));
        assert_eq!(t("ab").normalize(), t("ab"));
        // omega factors move left too
        assert_eq!(t("((a)^wb)^w(a)^w").normalize(), t("(a)^w(b(a)^w)^w"));
    }

    #[test]
    fn normal_forms_are_fixpoints() {
        for s in ["(a)^w", "a(ba)^w", "(ab)^w", "ab", "((a)^wb)^w"] {
            assert!(t(s).is_normal(), "{s}");
        }
    }

    #[test]
    fn eval_omega_of_zero_in_u2() {
        let u2 = fixtures::u2();
        let phi = u2.generators().unwrap().clone();
        assert_eq!(t("(a)^w").eval(&u2, &phi).unwrap(), 1);
        assert_eq!(t("(b)^w").eval(&u2, &phi).unwrap(), 0);
        assert_eq!(t("ab").eval(&u2, &phi).unwrap(), u2.mul(1, 0));
    }

    #[test]
    fn eval_rejects_unmapped_letters() {
        let u2 = fixtures::u2();
        let phi = u2.generators().unwrap().clone();
        assert_eq!(
            t("ax").eval(&u2, &phi).unwrap_err(),
            Error::UnmappedLetter('x')
        );
    }

    #[test]
    fn conjugation_identity_holds_in_fixtures() {
        // (xy)^w x = x (yx)^w in every finite semigroup
        let lhs = t("(ab)^wa");
        let rhs = t("a(ba)^w");
        for (name, sg) in fixtures::all() {
            let Some(phi) = sg.generators() else { continue };
            if !phi.contains_key(&'a') || !phi.contains_key(&'b') {
                continue;
            }
            let phi = phi.clone();
            assert_eq!(
                lhs.eval(&sg, &phi).unwrap(),
                rhs.eval(&sg, &phi).unwrap(),
                "{name}"
            );
        }
    }

    #[test]
    fn first_and_last_letters() {
        assert_eq!(t("(ab)^w").first_letter(), 'a');
        assert_eq!(t("(ab)^w").last_letter(), 'b');
        assert_eq!(t("c(ab)^w").first_letter(), 'c');
        assert_eq!(t("((a)^wb)^w").last_letter(), 'b');
    }

    #[test]
    fn finite_prefixes() {
        assert_eq!(t("(ab)^w").finite_prefix(5).unwrap(), "ababa");
        assert_eq!(t("a(b)^wc").finite_prefix(4).unwrap(), "abbb");
        assert_eq!(t("((ab)^wc)^w").finite_prefix(3).unwrap(), "aba");
        assert_eq!(
            t("ab").finite_prefix(3).unwrap_err(),
            Error::PrefixTooLong { wanted: 3, len: 2 }
        );
        // prefixes are coherent
        let w = t("((a)^wb)^w");
        let p10 = w.finite_prefix(10).unwrap();
        for k in 1..10 {
            assert!(p10.starts_with(&w.finite_prefix(k).unwrap()));
        }
    }

    #[test]
    fn finite_suffixes() {
        assert_eq!(t("(ab)^w").finite_suffix(5).unwrap(), "babab");
        assert_eq!(t("c(ba)^w").finite_suffix(3).unwrap(), "aba");
        assert_eq!(t("((a)^wb)^w").finite_suffix(2).unwrap(), "ab");
    }

    #[test]
    fn factor_sets() {
        let fs = t("(a)^w").factors_upto(5);
        let expected: BTreeSet<String> = ["a", "aa", "aaa", "aaaa", "aaaaa"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(fs, expected);

        let fs2 = t("(ab)^w").factors_upto(2);
        let expected2: BTreeSet<String> = ["a", "b", "ab", "ba"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(fs2, expected2);

        // factorial: closed under factors
        let fs3 = t("((a)^wb)^w").factors_upto(4);
        for w in &fs3 {
            for i in 0..w.len() {
                for j in i + 1..=w.len() {
                    assert!(fs3.contains(&w[i..j]));
                }
            }
        }
        assert!(fs3.contains("ba"));
        assert!(fs3.contains("aab"));
        assert!(!fs3.contains("bb"));
    }

    #[test]
    fn oracle_distinguishes_omegas_over_distinct_letters() {
        let corpus = corpus::corpus(1, 8, 0);
        match equal_oracle(&t("(a)^w"), &t("(b)^w"), &corpus) {
            Verdict::Distinct { witness, lhs, rhs } => {
                assert_eq!(witness, "u2");
                assert_eq!((lhs, rhs), (2, 1));
            }
            v => panic!("expected distinct, got {v:?}"),
        }
    }

    #[test]
    fn oracle_distinguishes_ab_from_ba() {
        let corpus = corpus::corpus(1, 8, 0);
        assert!(matches!(
            equal_oracle(&t("ab"), &t("ba"), &corpus),
            Verdict::Distinct { .. }
        ));
    }

    #[test]
    fn oracle_cannot_separate_aperiodic_equals() {
        let corpus = corpus::corpus(1, 8, 5);
        for (l, r) in [
            ("(a)^w", "a(a)^w"),
            ("(ab)^wa", "a(ba)^w"),
            ("(abab)^w", "(ab)^w"),
        ] {
            assert_eq!(
                equal_oracle(&t(l), &t(r), &corpus),
                Verdict::IndistinguishableAtScale,
                "{l} vs {r}"
            );
        }
    }

    #[test]
    fn null_semigroup_cover_separates_ab_from_ba() {
        // the base null semigroup sends both to its zero; the cover does not
        let n2 = fixtures::null2();
        let phi = n2.generators().unwrap().clone();
        assert_eq!(
            t("ab").eval(&n2, &phi).unwrap(),
            t("ba").eval(&n2, &phi).unwrap()
        );
        let cover = crate::expansion::unambiguous_cover(&n2, 8).unwrap();
        let cphi = cover.sg.generators().unwrap().clone();
        assert_ne!(
            t("ab").eval(&cover.sg, &cphi).unwrap(),
            t("ba").eval(&cover.sg, &cphi).unwrap()
        );
    }
}
