//! The test corpus: curated fixtures plus seeded random aperiodic
//! transformation semigroups, each paired with its unambiguous cover.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expansion::{self, Cover};
use crate::fixtures;
use crate::green;
use crate::semigroup::FiniteSemigroup;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub sg: FiniteSemigroup,
    pub cover: Cover,
}

impl CorpusEntry {
    pub fn is_unambiguous(&self) -> bool {
        self.cover.rounds == 0
    }

    /// The member itself when already unambiguous, otherwise its cover:
    /// the semigroup recognition runs against.
    pub fn recognition_target(&self) -> &FiniteSemigroup {
        if self.is_unambiguous() {
            &self.sg
        } else {
            &self.cover.sg
        }
    }
}

fn entry(id: &str, sg: FiniteSemigroup) -> CorpusEntry {
    let cover = expansion::unambiguous_cover(&sg, expansion::DEFAULT_COVER_ROUNDS)
        .unwrap_or_else(|e| panic!("no cover for corpus member {id}: {e}"));
    CorpusEntry {
        id: id.to_string(),
        sg,
        cover,
    }
}

/// Deterministic corpus: the aperiodic fixtures are always present, then
/// `count` seeded random `A`-generated aperiodic semigroups of size at most
/// `max_size`, deduplicated by table.
pub fn corpus(seed: u64, max_size: usize, count: usize) -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = fixtures::aperiodic()
        .into_iter()
        .map(|(name, sg)| entry(name, sg))
        .collect();

    let mut seen: std::collections::BTreeSet<String> =
        out.iter().map(|e| e.sg.to_table_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0usize;
    let mut attempt = 0usize;
    while found < count && attempt < 100_000 {
        attempt += 1;
        let degree = rng.gen_range(2..=4usize);
        let ngens = rng.gen_range(1..=3usize);
        let maps: Vec<Vec<usize>> = (0..ngens)
            .map(|_| (0..degree).map(|_| rng.gen_range(0..degree)).collect())
            .collect();
        let Ok(sg) = FiniteSemigroup::from_transformations(&maps) else {
            continue;
        };
        if sg.size() > max_size || !green::is_aperiodic(&sg) {
            continue;
        }
        let key = sg.to_table_string();
        if !seen.insert(key) {
            continue;
        }
        found += 1;
        out.push(entry(&format!("rnd-{seed}-{found:03}"), sg));
    }
    out
}

/// Fixture count, so callers can size a corpus to an exact total.
pub fn fixture_count() -> usize {
    fixtures::aperiodic().len()
}
