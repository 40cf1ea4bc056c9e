//! One-sided chain expansions cut down to generators, and the unambiguous
//! cover obtained by alternating them.
//!
//! An element of the right expansion of an `A`-generated semigroup `S` is
//! the reduced chain of suffix values accumulated while multiplying
//! generators, a strict `<=_L`-chain; the left expansion dually records
//! prefix values as a strict `<=_R`-chain. Chains are stored bottom first,
//! so `chain[0]` is the value of the whole product and the projection onto
//! `S` just reads it off.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::green::{self, GreenData};
use crate::semigroup::FiniteSemigroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `<=_R`-chains of prefix values.
    Left,
    /// `<=_L`-chains of suffix values.
    Right,
}

/// Everything `unambiguous_cover` returns: the cover itself, the onto
/// projection (element of the cover -> element of the base), and how many
/// expansion rounds were applied.
#[derive(Debug, Clone)]
pub struct Cover {
    pub sg: FiniteSemigroup,
    pub projection: Vec<usize>,
    pub rounds: usize,
}

const SIZE_CAP: usize = 50_000;

fn same_class(gd: &GreenData, side: Side, x: usize, y: usize) -> bool {
    match side {
        Side::Left => gd.r_class[x] == gd.r_class[y],
        Side::Right => gd.l_class[x] == gd.l_class[y],
    }
}

/// Keeps the bottom-most entry of each block of equivalent neighbours, so
/// the value at index 0 survives.
fn reduce(gd: &GreenData, side: Side, chain: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(chain.len());
    for x in chain {
        match out.last() {
            Some(&top) if same_class(gd, side, top, x) => {}
            _ => out.push(x),
        }
    }
    out
}

fn chain_product(
    sg: &FiniteSemigroup,
    gd: &GreenData,
    side: Side,
    c: &[usize],
    d: &[usize],
) -> Vec<usize> {
    let mut combined = Vec::with_capacity(c.len() + d.len());
    match side {
        Side::Right => {
            let vd = d[0];
            combined.extend(c.iter().map(|&s| sg.mul(s, vd)));
            combined.extend_from_slice(d);
        }
        Side::Left => {
            let vc = c[0];
            combined.extend(d.iter().map(|&t| sg.mul(vc, t)));
            combined.extend_from_slice(c);
        }
    }
    reduce(gd, side, combined)
}

/// The one-sided chain expansion of an `A`-generated semigroup, together
/// with the projection onto it. The result is generated by the singleton
/// chains of the generator images, under the same letters.
pub fn rhodes_expansion(sg: &FiniteSemigroup, side: Side) -> Result<(FiniteSemigroup, Vec<usize>)> {
    let gens = sg.generators().ok_or(Error::MissingGenerators)?.clone();
    let gd = green::green(sg);

    let mut elems: Vec<Vec<usize>> = Vec::new();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &g in gens.values() {
        let chain = vec![g];
        if !index.contains_key(&chain) {
            index.insert(chain.clone(), elems.len());
            elems.push(chain);
            queue.push_back(elems.len() - 1);
        }
    }
    let gen_chains: Vec<Vec<usize>> = gens.values().map(|&g| vec![g]).collect();
    while let Some(i) = queue.pop_front() {
        for g in &gen_chains {
            let p = chain_product(sg, &gd, side, &elems[i], g);
            if !index.contains_key(&p) {
                if elems.len() >= SIZE_CAP {
                    return Err(Error::Invariant(format!(
                        "expansion exceeded {SIZE_CAP} elements"
                    )));
                }
                index.insert(p.clone(), elems.len());
                elems.push(p.clone());
                queue.push_back(elems.len() - 1);
            }
        }
    }

    let size = elems.len();
    let mut rows = vec![vec![0usize; size]; size];
    for i in 0..size {
        for j in 0..size {
            let p = chain_product(sg, &gd, side, &elems[i], &elems[j]);
            let k = *index.get(&p).ok_or_else(|| {
                Error::Invariant("expansion is not closed under its own product".into())
            })?;
            rows[i][j] = k;
        }
    }
    let mut new_gens = BTreeMap::new();
    for (&letter, &g) in &gens {
        new_gens.insert(letter, index[&vec![g]]);
    }
    let expanded = FiniteSemigroup::from_rows(rows, Some(new_gens))?;
    let projection = elems.iter().map(|c| c[0]).collect();
    Ok((expanded, projection))
}

pub const DEFAULT_COVER_ROUNDS: usize = 8;

/// Alternates left and right expansions until the result is unambiguous.
/// Requires an aperiodic generated semigroup; fails explicitly when the
/// round cap is hit.
pub fn unambiguous_cover(sg: &FiniteSemigroup, max_rounds: usize) -> Result<Cover> {
    if sg.generators().is_none() {
        return Err(Error::MissingGenerators);
    }
    if !green::is_aperiodic(sg) {
        return Err(Error::NotAperiodic);
    }
    let mut current = sg.clone();
    // projection[i] = image in the original semigroup
    let mut projection: Vec<usize> = sg.elements().collect();
    let mut side = Side::Right;
    for round in 0..=max_rounds {
        if green::is_unambiguous(&current) {
            if !green::is_aperiodic(&current) {
                return Err(Error::Invariant("expansion lost aperiodicity".into()));
            }
            return Ok(Cover {
                sg: current,
                projection,
                rounds: round,
            });
        }
        if round == max_rounds {
            break;
        }
        let (next, proj) = rhodes_expansion(&current, side)?;
        projection = proj.iter().map(|&p| projection[p]).collect();
        current = next;
        side = match side {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        };
    }
    Err(Error::CoverCapExceeded {
        rounds: max_rounds,
        last_size: current.size(),
    })
}
