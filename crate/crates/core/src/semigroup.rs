//! Finite semigroups given by their multiplication table.
//!
//! Elements are `0`-based indices internally; the Cayley file format and all
//! user-facing reports are `1`-based. The monoid `S^I` obtained by adjoining
//! a fresh identity is not materialized: the index `S.one() == S.size()`
//! denotes the adjoined identity and [`FiniteSemigroup::mul1`] multiplies in
//! `S^I`. This holds even when `S` already has a neutral element, so the
//! adjoined identity is always a new isolated point.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    size: usize,
    /// Row-major `size * size` table, `table[x * size + y] = x * y`.
    table: Vec<usize>,
    /// Letter -> element, when the semigroup came with a generating map.
    generators: Option<BTreeMap<char, usize>>,
    /// Index of an element adjoined by [`FiniteSemigroup::adjoin_identity`].
    adjoined_identity: Option<usize>,
}

impl FiniteSemigroup {
    /// Builds a semigroup from 0-based rows, verifying associativity and
    /// (when a generator map is given) that the generators generate.
    pub fn from_rows(
        rows: Vec<Vec<usize>>,
        generators: Option<BTreeMap<char, usize>>,
    ) -> Result<Self> {
        let size = rows.len();
        let mut table = vec![0usize; size * size];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Parse {
                    pos: i + 2,
                    msg: format!("row {} has {} entries, expected {}", i + 1, row.len(), size),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= size {
                    return Err(Error::IndexOutOfRange {
                        value: v + 1,
                        size,
                        row: i + 1,
                        col: j + 1,
                    });
                }
                table[i * size + j] = v;
            }
        }
        let sg = FiniteSemigroup {
            size,
            table,
            generators,
            adjoined_identity: None,
        };
        sg.check_associative()?;
        sg.check_generated()?;
        Ok(sg)
    }

    /// Parses the Cayley file format: a size line, `size` rows of 1-based
    /// entries, and an optional `gens a=3 b=5` line. `#` starts a comment.
    pub fn from_table(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            let line = line.trim();
            if !line.is_empty() {
                lines.push((lineno + 1, line));
            }
        }
        let (first_no, first) = *lines.first().ok_or(Error::Parse {
            pos: 1,
            msg: "empty file".into(),
        })?;
        let size: usize = first.parse().map_err(|_| Error::Parse {
            pos: first_no,
            msg: format!("expected the element count, found {first:?}"),
        })?;
        if size == 0 {
            return Err(Error::Parse {
                pos: first_no,
                msg: "a semigroup has at least one element".into(),
            });
        }
        if lines.len() < size + 1 {
            return Err(Error::Parse {
                pos: first_no,
                msg: format!("expected {} table rows, found {}", size, lines.len() - 1),
            });
        }
        let mut rows = Vec::with_capacity(size);
        for (lineno, line) in &lines[1..=size] {
            let mut row = Vec::with_capacity(size);
            for tok in line.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| Error::Parse {
                    pos: *lineno,
                    msg: format!("bad table entry {tok:?}"),
                })?;
                if v == 0 {
                    return Err(Error::Parse {
                        pos: *lineno,
                        msg: "table entries are 1-based".into(),
                    });
                }
                row.push(v - 1);
            }
            rows.push(row);
        }
        let mut generators = None;
        if let Some((lineno, line)) = lines.get(size + 1) {
            let mut toks = line.split_whitespace();
            if toks.next() != Some("gens") {
                return Err(Error::Parse {
                    pos: *lineno,
                    msg: format!("expected `gens`, found {line:?}"),
                });
            }
            let mut map = BTreeMap::new();
            for tok in toks {
                let (letter, idx) = tok.split_once('=').ok_or(Error::Parse {
                    pos: *lineno,
                    msg: format!("expected letter=index, found {tok:?}"),
                })?;
                let letter = single_lowercase(letter).ok_or(Error::Parse {
                    pos: *lineno,
                    msg: format!("generator names are single lowercase letters, found {letter:?}"),
                })?;
                let idx: usize = idx.parse().map_err(|_| Error::Parse {
                    pos: *lineno,
                    msg: format!("bad generator index {idx:?}"),
                })?;
                if idx == 0 || idx > size {
                    return Err(Error::BadGenerator {
                        letter,
                        index: idx,
                        size,
                    });
                }
                map.insert(letter, idx - 1);
            }
            generators = Some(map);
        }
        Self::from_rows(rows, generators)
    }

    /// The transformation semigroup generated by total maps on `{1..k}`,
    /// written 0-based (`maps[g][p]` is where generator `g` sends point `p`).
    /// Products act left-to-right: `(x*y)(p) = y(x(p))`. Generators are
    /// lettered `a`, `b`, `c`, ... in the order given.
    pub fn from_transformations(maps: &[Vec<usize>]) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let degree = maps[0].len();
        for (gi, m) in maps.iter().enumerate() {
            if m.len() != degree {
                return Err(Error::Parse {
                    pos: gi + 1,
                    msg: format!(
                        "transformation {} has degree {}, expected {}",
                        gi + 1,
                        m.len(),
                        degree
                    ),
                });
            }
            for (p, &q) in m.iter().enumerate() {
                if q >= degree {
                    return Err(Error::BadTransformation {
                        index: gi + 1,
                        point: p + 1,
                        image: q + 1,
                        degree,
                    });
                }
            }
        }

        let compose =
            |f: &[usize], g: &[usize]| -> Vec<usize> { f.iter().map(|&p| g[p]).collect() };

        // BFS closure under right multiplication by the generators.
        let mut elems: Vec<Vec<usize>> = Vec::new();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::new();
        for m in maps {
            if !index.contains_key(m) {
                index.insert(m.clone(), elems.len());
                elems.push(m.clone());
                queue.push_back(m.clone());
            }
        }
        while let Some(f) = queue.pop_front() {
            for g in maps {
                let h = compose(&f, g);
                if !index.contains_key(&h) {
                    index.insert(h.clone(), elems.len());
                    elems.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        let size = elems.len();
        let mut rows = vec![vec![0usize; size]; size];
        for (i, f) in elems.iter().enumerate() {
            for (j, g) in elems.iter().enumerate() {
                rows[i][j] = index[&compose(f, g)];
            }
        }
        let mut gens = BTreeMap::new();
        for (gi, m) in maps.iter().enumerate() {
            let letter = (b'a' + gi as u8) as char;
            gens.insert(letter, index[m]);
        }
        Self::from_rows(rows, Some(gens))
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.size;
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    let lhs = self.mul(xy, z);
                    let rhs = self.mul(x, self.mul(y, z));
                    if lhs != rhs {
                        return Err(Error::NotAssociative {
                            x: x + 1,
                            y: y + 1,
                            z: z + 1,
                            lhs: lhs + 1,
                            rhs: rhs + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_generated(&self) -> Result<()> {
        let Some(gens) = &self.generators else {
            return Ok(());
        };
        let mut reached = vec![false; self.size];
        let mut queue: Vec<usize> = Vec::new();
        for &g in gens.values() {
            if !reached[g] {
                reached[g] = true;
                queue.push(g);
            }
        }
        while let Some(x) = queue.pop() {
            for &g in gens.values() {
                let y = self.mul(x, g);
                if !reached[y] {
                    reached[y] = true;
                    queue.push(y);
                }
            }
        }
        match reached.iter().position(|&r| !r) {
            None => Ok(()),
            Some(e) => Err(Error::NotGenerated { element: e + 1 }),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Index of the adjoined identity of `S^I` (one past the last element).
    pub fn one(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// All of `S^I`, the identity last.
    pub fn elements1(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.size
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    /// Multiplication in `S^I`.
    pub fn mul1(&self, x: usize, y: usize) -> usize {
        if x == self.size {
            y
        } else if y == self.size {
            x
        } else {
            self.mul(x, y)
        }
    }

    pub fn generators(&self) -> Option<&BTreeMap<char, usize>> {
        self.generators.as_ref()
    }

    pub fn set_generators(&mut self, gens: Option<BTreeMap<char, usize>>) -> Result<()> {
        self.generators = gens;
        self.check_generated()
    }

    /// Installs a letter map without requiring the images to generate.
    /// Theorem-grade guarantees only hold for generating maps; evaluation
    /// and the recognition checks accept any map.
    pub fn set_letter_map(&mut self, gens: BTreeMap<char, usize>) -> Result<()> {
        for (&letter, &idx) in &gens {
            if idx >= self.size {
                return Err(Error::BadGenerator {
                    letter,
                    index: idx + 1,
                    size: self.size,
                });
            }
        }
        self.generators = Some(gens);
        Ok(())
    }

    pub fn adjoined_identity(&self) -> Option<usize> {
        self.adjoined_identity
    }

    /// `S^I` as a materialized semigroup: a fresh identity is appended even
    /// when `S` already has one.
    pub fn adjoin_identity(&self) -> Self {
        let n = self.size;
        let m = n + 1;
        let mut table = vec![0usize; m * m];
        for x in 0..m {
            for y in 0..m {
                table[x * m + y] = self.mul1(x, y);
            }
        }
        FiniteSemigroup {
            size: m,
            table,
            generators: self.generators.clone(),
            adjoined_identity: Some(n),
        }
    }

    /// The unique idempotent in the subsemigroup generated by `s`.
    pub fn omega_power(&self, s: usize) -> usize {
        let mut seen = vec![usize::MAX; self.size + 1];
        let mut p = s;
        let mut k = 1usize;
        loop {
            if seen[p] != usize::MAX {
                // Powers from seen[p] on repeat with period k - seen[p].
                let mu = seen[p];
                let period = k - mu;
                // The cycle {s^mu, ..., s^(mu+period-1)} is a group; find its
                // idempotent member.
                let mut q = p;
                loop {
                    if self.mul1(q, q) == q {
                        return q;
                    }
                    q = self.mul1(q, s);
                    debug_assert!(period > 0);
                }
            }
            seen[p] = k;
            p = self.mul1(p, s);
            k += 1;
        }
    }

    /// Least `i >= 1` with `s^i = s^(i+1)`; only meaningful for aperiodic
    /// elements, where `s^i = s^omega` from that point on.
    pub fn aperiodicity_index(&self, s: usize) -> Option<usize> {
        let mut p = s;
        for i in 1..=self.size + 1 {
            let next = self.mul1(p, s);
            if next == p {
                return Some(i);
            }
            p = next;
        }
        None
    }

    /// Image of a word of `S^I` elements, `one()` for the empty word.
    pub fn product(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.one(), |acc, &x| self.mul1(acc, x))
    }

    /// Canonical Cayley file text for this semigroup.
    pub fn to_table_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.size));
        for x in 0..self.size {
            let row: Vec<String> = (0..self.size)
                .map(|y| (self.mul(x, y) + 1).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        if let Some(gens) = &self.generators {
            let parts: Vec<String> = gens
                .iter()
                .map(|(l, i)| format!("{}={}", l, i + 1))
                .collect();
            out.push_str(&format!("gens {}\n", parts.join(" ")));
        }
        out
    }
}

impl fmt::Display for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_table_string())
    }
}

fn single_lowercase(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) if c.is_ascii_lowercase() => Some(c),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_u2_and_verifies_it() {
        let sg = FiniteSemigroup::from_table("2\n1 2\n2 2\ngens a=2 b=1\n").unwrap();
        assert_eq!(sg.size(), 2);
        assert_eq!(sg.mul(0, 1), 1);
        assert_eq!(sg.mul(1, 1), 1);
        assert_eq!(sg.generators().unwrap()[&'a'], 1);
        // every element idempotent
        for x in sg.elements() {
            assert_eq!(sg.mul(x, x), x);
        }
    }

    #[test]
    fn parses_c2() {
        let sg = FiniteSemigroup::from_table("2\n2 1\n1 2\ngens a=1\n").unwrap();
        assert_eq!(sg.mul(0, 0), 1);
        assert_eq!(sg.omega_power(0), 1);
    }

    #[test]
    fn reports_associativity_witness() {
        // 1*2 = 2 but flipping the last row breaks (2,2,1).
        let err = FiniteSemigroup::from_table("2\n1 2\n1 1\n").unwrap_err();
        match err {
            Error::NotAssociative { .. } => {}
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }

    #[test]
    fn left_projection_like_table_is_associative() {
        // x*y = 1 if x = 1 else y; associative, accepted.
        let sg = FiniteSemigroup::from_table("2\n1 1\n1 2\n").unwrap();
        assert_eq!(sg.mul(1, 0), 0);
    }

    #[test]
    fn rejects_out_of_range_entries() {
        let err = FiniteSemigroup::from_table("2\n1 3\n2 2\n").unwrap_err();
        match err {
            Error::IndexOutOfRange { value: 3, .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn constants_generate_right_zero_band() {
        let sg = FiniteSemigroup::from_transformations(&[vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(sg.size(), 2);
        let a = sg.generators().unwrap()[&'a'];
        let b = sg.generators().unwrap()[&'b'];
        assert_eq!(sg.mul(a, b), b);
        assert_eq!(sg.mul(b, a), a);
    }

    #[test]
    fn identity_alone_generates_trivial_semigroup() {
        let sg = FiniteSemigroup::from_transformations(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(sg.size(), 1);
    }

    #[test]
    fn transposition_generates_c2() {
        let sg = FiniteSemigroup::from_transformations(&[vec![1, 0]]).unwrap();
        assert_eq!(sg.size(), 2);
        let a = sg.generators().unwrap()[&'a'];
        assert_eq!(sg.mul(a, a), 1 - a);
    }

    #[test]
    fn empty_generator_list_is_an_error() {
        assert_eq!(
            FiniteSemigroup::from_transformations(&[]).unwrap_err(),
            Error::EmptyGenerators
        );
    }

    #[test]
    fn adjoin_identity_always_adds_a_fresh_element() {
        let u2 = FiniteSemigroup::from_table("2\n1 2\n2 2\n").unwrap();
        let m = u2.adjoin_identity();
        assert_eq!(m.size(), 3);
        assert_eq!(m.adjoined_identity(), Some(2));
        for x in m.elements() {
            assert_eq!(m.mul(x, 2), x);
            assert_eq!(m.mul(2, x), x);
        }
        // adjoining twice keeps adding
        assert_eq!(m.adjoin_identity().size(), 4);
    }

    #[test]
    fn adjoin_identity_extends_fixture_tables() {
        let trivial = FiniteSemigroup::from_table("1\n1\n").unwrap();
        let two = trivial.adjoin_identity();
        assert_eq!(two.size(), 2);
        for x in two.elements() {
            assert_eq!(two.mul(x, x), x); // a semilattice
        }
        let fb = crate::fixtures::free_band2();
        let fb1 = fb.adjoin_identity();
        assert_eq!(fb1.size(), 7);
        for x in fb.elements() {
            for y in fb.elements() {
                assert_eq!(fb1.mul(x, y), fb.mul(x, y));
            }
        }
    }

    #[test]
    fn omega_power_of_idempotent_is_itself() {
        let u2 = FiniteSemigroup::from_table("2\n1 2\n2 2\n").unwrap();
        for x in u2.elements() {
            assert_eq!(u2.omega_power(x), x);
        }
    }

    #[test]
    fn omega_power_follows_power_sequence() {
        // s with s^3 = s^2 != s: the 3-element monogenic aperiodic semigroup.
        // elements: s=1, s^2=2, with s^2 absorbing (s^3 = s^2).
        let sg = FiniteSemigroup::from_table("2\n2 2\n2 2\n").unwrap();
        assert_eq!(sg.omega_power(0), 1);
        assert_eq!(sg.aperiodicity_index(0), Some(2));
    }

    #[test]
    fn table_roundtrip_is_stable() {
        let text = "2\n1 2\n2 2\ngens a=2 b=1\n";
        let sg = FiniteSemigroup::from_table(text).unwrap();
        assert_eq!(sg.to_table_string(), text);
    }
}
