//! Curated fixture semigroups, shared with the `.sgp` files shipped in
//! `fixtures/` so the parser is on the hot path of every test.

use crate::semigroup::FiniteSemigroup;

macro_rules! fixture {
    ($name:ident, $file:literal) => {
        pub fn $name() -> FiniteSemigroup {
            FiniteSemigroup::from_table(include_str!(concat!("../../../fixtures/", $file)))
                .expect(concat!($file, " must parse"))
        }
    };
}

fixture!(u2, "u2.sgp");
fixture!(free_band2, "freeband2.sgp");
fixture!(brandt_ap, "brandt-ap.sgp");
fixture!(one_a, "one-a.sgp");
fixture!(rect_band22, "rectband22.sgp");
fixture!(null2, "null2.sgp");
fixture!(c2, "c2.sgp");
fixture!(trivial, "trivial.sgp");

/// All fixtures with stable names, in a fixed order. `c2` is the only
/// non-aperiodic member.
pub fn all() -> Vec<(&'static str, FiniteSemigroup)> {
    vec![
        ("u2", u2()),
        ("freeband2", free_band2()),
        ("brandt-ap", brandt_ap()),
        ("one-a", one_a()),
        ("rectband22", rect_band22()),
        ("null2", null2()),
        ("c2", c2()),
        ("trivial", trivial()),
    ]
}

/// The aperiodic fixtures, the ones eligible for the corpus.
pub fn aperiodic() -> Vec<(&'static str, FiniteSemigroup)> {
    all().into_iter().filter(|(n, _)| *n != "c2").collect()
}
