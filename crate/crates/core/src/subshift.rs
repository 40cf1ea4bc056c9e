//! Languages of subshifts at a finite word length: beta-shift languages
//! from the expansion word of a Parry parameter, factor languages of
//! omega-terms, factor complexity and entropy estimates.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::term::OmegaTerm;

/// A Parry parameter `beta > 1`, given by the quasi-greedy expansion of 1
/// as an eventually periodic digit word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParryBeta {
    pub preperiod: Vec<u8>,
    pub period: Vec<u8>,
}

impl ParryBeta {
    /// Parses `pre(period)`, e.g. `(10)` for the golden mean or `(1)` for
    /// the full shift on two digits.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |msg: &str| Error::BadExpansion(format!("{text:?}: {msg}"));
        let open = text
            .find('(')
            .ok_or_else(|| err("expected `pre(period)`"))?;
        if !text.ends_with(')') {
            return Err(err("expected a closing parenthesis"));
        }
        let digits = |s: &str| -> Result<Vec<u8>> {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| err("digits only"))
                })
                .collect()
        };
        let pb = ParryBeta {
            preperiod: digits(&text[..open])?,
            period: digits(&text[open + 1..text.len() - 1])?,
        };
        pb.validate()?;
        Ok(pb)
    }

    fn validate(&self) -> Result<()> {
        let err = |msg: String| Error::BadExpansion(msg);
        if self.period.is_empty() {
            return Err(err("the period is empty".into()));
        }
        if self.period.iter().all(|&d| d == 0) {
            return Err(err("a quasi-greedy expansion has no all-zero period".into()));
        }
        let d0 = self.digit(0);
        if d0 == 0 {
            return Err(err("the leading digit is zero".into()));
        }
        // self-admissibility: every shifted tail is dominated by the word
        let horizon = 2 * (self.preperiod.len() + self.period.len()) + 2;
        for k in 1..=self.preperiod.len() + self.period.len() {
            let mut strictly_less = false;
            for i in 0..horizon {
                match self.digit(k + i).cmp(&self.digit(i)) {
                    Ordering::Less => {
                        strictly_less = true;
                        break;
                    }
                    Ordering::Greater => {
                        return Err(err(format!("shift by {k} dominates the expansion")));
                    }
                    Ordering::Equal => {}
                }
            }
            let _ = strictly_less;
        }
        Ok(())
    }

    /// Digit at position `i` of the infinite expansion.
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Number of digits of the shift alphabet `{0, ..., ceil(beta) - 1}`.
    pub fn alphabet_size(&self) -> u8 {
        self.digit(0) + 1
    }

    /// Lexicographic comparison of the parameters via their expansions.
    pub fn compare(&self, other: &ParryBeta) -> Ordering {
        let horizon = 2 * (self.preperiod.len() + self.period.len())
            + 2 * (other.preperiod.len() + other.period.len())
            + 2;
        for i in 0..horizon {
            match self.digit(i).cmp(&other.digit(i)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// A subshift language materialized up to a length bound: `words[k - 1]`
/// holds the sorted words of length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubshiftLanguage {
    pub alphabet: Vec<char>,
    pub words: Vec<Vec<Vec<u8>>>,
}

impl SubshiftLanguage {
    pub fn max_len(&self) -> usize {
        self.words.len()
    }

    pub fn count(&self, len: usize) -> usize {
        self.words.get(len - 1).map_or(0, |w| w.len())
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        !word.is_empty()
            && self
                .words
                .get(word.len() - 1)
                .is_some_and(|ws| ws.binary_search(&word.to_vec()).is_ok())
    }

    pub fn render(&self, word: &[u8]) -> String {
        word.iter().map(|&d| self.alphabet[d as usize]).collect()
    }

    /// Inclusion at every materialized length of `self` also covered by
    /// `other`.
    pub fn included_in(&self, other: &SubshiftLanguage) -> bool {
        let n = self.max_len().min(other.max_len());
        (1..=n).all(|len| {
            self.words[len - 1]
                .iter()
                .all(|w| other.words[len - 1].binary_search(w).is_ok())
        })
    }
}

/// Words admissible for the beta-shift up to length `n`: every suffix is
/// lexicographically dominated by the expansion of 1.
pub fn beta_language(pb: &ParryBeta, n: usize) -> SubshiftLanguage {
    let alphabet: Vec<char> = (0..pb.alphabet_size())
        .map(|d| char::from_digit(d as u32, 10).unwrap())
        .collect();
    // state per word: the set of suffix lengths matching a prefix of the
    // expansion exactly; other suffixes are strictly below and stay legal
    let mut words: Vec<Vec<Vec<u8>>> = Vec::new();
    let mut layer: Vec<(Vec<u8>, Vec<usize>)> = vec![(Vec::new(), Vec::new())];
    for _ in 1..=n {
        let mut next_layer = Vec::new();
        let mut next_words = Vec::new();
        for (word, tight) in &layer {
            'digit: for d in 0..pb.alphabet_size() {
                let mut new_tight = Vec::new();
                for &j in tight.iter().chain(std::iter::once(&0)) {
                    match d.cmp(&pb.digit(j)) {
                        Ordering::Greater => continue 'digit,
                        Ordering::Equal => new_tight.push(j + 1),
                        Ordering::Less => {}
                    }
                }
                let mut w = word.clone();
                w.push(d);
                next_words.push(w.clone());
                next_layer.push((w, new_tight));
            }
        }
        next_words.sort_unstable();
        words.push(next_words);
        layer = next_layer;
    }
    SubshiftLanguage { alphabet, words }
}

/// The factor language of an omega-term up to length `n`.
pub fn term_language(term: &OmegaTerm, n: usize) -> SubshiftLanguage {
    let alphabet: Vec<char> = term.letters().into_iter().collect();
    let digit = |c: char| alphabet.iter().position(|&a| a == c).unwrap() as u8;
    let mut words: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n];
    for f in term.factors_upto(n) {
        let w: Vec<u8> = f.chars().map(digit).collect();
        words[w.len() - 1].push(w);
    }
    for ws in &mut words {
        ws.sort_unstable();
    }
    SubshiftLanguage { alphabet, words }
}

/// A language given by an explicit word list, closed under nothing.
pub fn explicit_language(alphabet: Vec<char>, word_list: &[&str], n: usize) -> SubshiftLanguage {
    let digit = |c: char| alphabet.iter().position(|&a| a == c).unwrap() as u8;
    let mut words: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n];
    for w in word_list {
        let v: Vec<u8> = w.chars().map(digit).collect();
        if (1..=n).contains(&v.len()) {
            words[v.len() - 1].push(v);
        }
    }
    for ws in &mut words {
        ws.sort_unstable();
        ws.dedup();
    }
    SubshiftLanguage { alphabet, words }
}

/// Factor counts `q(1), ..., q(n)`.
pub fn factor_complexity(lang: &SubshiftLanguage, n: usize) -> Vec<usize> {
    (1..=n.min(lang.max_len())).map(|k| lang.count(k)).collect()
}

/// `(1/n) log2 q(n)`, an upper estimate of the entropy; the entropy itself
/// is the infimum of these over `n`.
pub fn entropy_estimate(counts: &[usize], n: usize) -> Result<f64> {
    if n == 0 || n > counts.len() || counts[n - 1] == 0 {
        return Err(Error::EmptyLength(n));
    }
    Ok((counts[n - 1] as f64).log2() / n as f64)
}

/// Closure under both one-sided factors, at every materialized length.
pub fn is_factorial(lang: &SubshiftLanguage) -> bool {
    for len in 2..=lang.max_len() {
        for w in &lang.words[len - 1] {
            if !lang.contains(&w[1..]) || !lang.contains(&w[..len - 1]) {
                return false;
            }
        }
    }
    true
}

/// Every word extends on both sides within the materialized bound.
pub fn is_prolongable(lang: &SubshiftLanguage) -> bool {
    let a = lang.alphabet.len() as u8;
    for len in 1..lang.max_len() {
        for w in &lang.words[len - 1] {
            let left = (0..a).any(|c| {
                let mut v = vec![c];
                v.extend_from_slice(w);
                lang.contains(&v)
            });
            let right = (0..a).any(|c| {
                let mut v = w.clone();
                v.push(c);
                lang.contains(&v)
            });
            if !left || !right {
                return false;
            }
        }
    }
    true
}

/// For every pair of words, some nonempty connector keeps the product in
/// the language; pairs too long to test within the bound are skipped.
pub fn is_irreducible_at_scale(lang: &SubshiftLanguage) -> bool {
    let n = lang.max_len();
    let alphabet_size = lang.alphabet.len() as u8;
    for ls in 1..n {
        for lt in 1..n {
            if ls + lt + 1 > n {
                continue;
            }
            for s in &lang.words[ls - 1] {
                for t in &lang.words[lt - 1] {
                    let max_mid = n - ls - lt;
                    if !has_connector(lang, s, t, max_mid, alphabet_size) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn has_connector(lang: &SubshiftLanguage, s: &[u8], t: &[u8], max_mid: usize, a: u8) -> bool {
    let mut mids: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 1..=max_mid {
        let mut next = Vec::new();
        for mid in &mids {
            for c in 0..a {
                let mut m = mid.clone();
                m.push(c);
                let mut w = s.to_vec();
                w.extend_from_slice(&m);
                w.extend_from_slice(t);
                if lang.contains(&w) {
                    return true;
                }
                next.push(m);
            }
        }
        mids = next;
    }
    false
}

pub fn golden_mean() -> ParryBeta {
    ParryBeta::parse("(10)").unwrap()
}

pub fn full_shift2() -> ParryBeta {
    ParryBeta::parse("(1)").unwrap()
}

pub fn tribonacci() -> ParryBeta {
    ParryBeta::parse("(110)").unwrap()
}
