//! Green's relations on `S^I` and the classification predicates built on
//! them: aperiodicity, unambiguity, equidivisibility, stability.
//!
//! All quasi-orders are computed on the monoid `S^I`; indices `0..size` are
//! the elements of `S` and `size` is the adjoined identity. `x <=_R y` means
//! `x` is in `y * S^I`, and dually for `<=_L`; `<=_J` uses two-sided factors.

use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;

#[derive(Debug, Clone)]
pub struct GreenData {
    /// `leq_r[x][y]` iff `x <=_R y`, i.e. `x` in `y * S^I`. Indices over `S^I`.
    pub leq_r: Vec<Vec<bool>>,
    pub leq_l: Vec<Vec<bool>>,
    pub leq_j: Vec<Vec<bool>>,
    /// Class id per element of `S^I`, numbered in element order.
    pub r_class: Vec<usize>,
    pub l_class: Vec<usize>,
    pub j_class: Vec<usize>,
    pub h_class: Vec<usize>,
    pub d_class: Vec<usize>,
    /// Idempotents of `S^I` (always contains the adjoined identity).
    pub idempotents: Vec<usize>,
}

impl GreenData {
    pub fn j_equiv(&self, x: usize, y: usize) -> bool {
        self.j_class[x] == self.j_class[y]
    }

    pub fn idempotents_of_j_class(&self, class: usize) -> Vec<usize> {
        self.idempotents
            .iter()
            .copied()
            .filter(|&e| self.j_class[e] == class)
            .collect()
    }
}

/// Computes the Green structure of `S^I` from the set-membership
/// definitions, by direct enumeration.
pub fn green(sg: &FiniteSemigroup) -> GreenData {
    let m = sg.size() + 1;
    let mut leq_r = vec![vec![false; m]; m];
    let mut leq_l = vec![vec![false; m]; m];
    let mut leq_j = vec![vec![false; m]; m];
    for y in sg.elements1() {
        for t in sg.elements1() {
            leq_r[sg.mul1(y, t)][y] = true;
            leq_l[sg.mul1(t, y)][y] = true;
            for u in sg.elements1() {
                leq_j[sg.mul1(sg.mul1(t, y), u)][y] = true;
            }
        }
    }
    let r_class = classes_of(&leq_r);
    let l_class = classes_of(&leq_l);
    let j_class = classes_of(&leq_j);
    let h_class = intersect_classes(&r_class, &l_class);
    let d_class = join_classes(&r_class, &l_class);
    let idempotents = sg.elements1().filter(|&x| sg.mul1(x, x) == x).collect();
    GreenData {
        leq_r,
        leq_l,
        leq_j,
        r_class,
        l_class,
        j_class,
        h_class,
        d_class,
        idempotents,
    }
}

fn classes_of(leq: &[Vec<bool>]) -> Vec<usize> {
    let n = leq.len();
    let mut class = vec![usize::MAX; n];
    let mut next = 0;
    for x in 0..n {
        if class[x] != usize::MAX {
            continue;
        }
        class[x] = next;
        for y in x + 1..n {
            if class[y] == usize::MAX && leq[x][y] && leq[y][x] {
                class[y] = next;
            }
        }
        next += 1;
    }
    class
}

fn intersect_classes(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut map = std::collections::BTreeMap::new();
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let next = map.len();
        let id = *map.entry((a[i], b[i])).or_insert(next);
        out.push(id);
    }
    out
}

/// Smallest equivalence containing both partitions (union-find).
fn join_classes(a: &[usize], b: &[usize]) -> Vec<usize> {
    let n = a.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut by_a = std::collections::BTreeMap::new();
    let mut by_b = std::collections::BTreeMap::new();
    for i in 0..n {
        if let Some(&j) = by_a.get(&a[i]) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        } else {
            by_a.insert(a[i], i);
        }
        if let Some(&j) = by_b.get(&b[i]) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        } else {
            by_b.insert(b[i], i);
        }
    }
    let mut map = std::collections::BTreeMap::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let r = find(&mut parent, i);
        let next = map.len();
        let id = *map.entry(r).or_insert(next);
        out.push(id);
    }
    out
}

/// `s^(omega+1) = s^omega` for every element.
pub fn is_aperiodic(sg: &FiniteSemigroup) -> bool {
    sg.elements().all(|s| {
        let e = sg.omega_power(s);
        sg.mul1(e, s) == e
    })
}

/// Unambiguity of one of the Green quasi-orders, quantified over `S`:
/// elements above a common element are comparable.
fn unambiguous_order(sg: &FiniteSemigroup, leq: &[Vec<bool>]) -> bool {
    for x in sg.elements() {
        let above: Vec<usize> = sg.elements().filter(|&y| leq[x][y]).collect();
        for (i, &y) in above.iter().enumerate() {
            for &z in &above[i + 1..] {
                if !leq[y][z] && !leq[z][y] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_unambiguous_with(sg: &FiniteSemigroup, gd: &GreenData) -> bool {
    unambiguous_order(sg, &gd.leq_l) && unambiguous_order(sg, &gd.leq_r)
}

pub fn is_unambiguous(sg: &FiniteSemigroup) -> bool {
    is_unambiguous_with(sg, &green(sg))
}

/// First failing quadruple `(x, y, u, v)` with `xy = uv` but no transition
/// `t` in `S^I` with (`xt = u` and `y = tv`) or (`x = ut` and `ty = v`).
pub fn equidivisibility_witness(sg: &FiniteSemigroup) -> Option<(usize, usize, usize, usize)> {
    for x in sg.elements() {
        for y in sg.elements() {
            let xy = sg.mul(x, y);
            for u in sg.elements() {
                for v in sg.elements() {
                    if sg.mul(u, v) != xy {
                        continue;
                    }
                    let ok = sg.elements1().any(|t| {
                        (sg.mul1(x, t) == u && y == sg.mul1(t, v))
                            || (x == sg.mul1(u, t) && sg.mul1(t, y) == v)
                    });
                    if !ok {
                        return Some((x, y, u, v));
                    }
                }
            }
        }
    }
    None
}

pub fn is_equidivisible(sg: &FiniteSemigroup) -> bool {
    equidivisibility_witness(sg).is_none()
}

/// Whether the specific quadruple refutes equidivisibility: `xy = uv` holds
/// and no transition connects the two factorizations.
pub fn refutes_equidivisibility(
    sg: &FiniteSemigroup,
    x: usize,
    y: usize,
    u: usize,
    v: usize,
) -> bool {
    sg.mul(x, y) == sg.mul(u, v)
        && !sg.elements1().any(|t| {
            (sg.mul1(x, t) == u && y == sg.mul1(t, v)) || (x == sg.mul1(u, t) && sg.mul1(t, y) == v)
        })
}

/// `J` meets `<=_L` in `L` and `<=_R` in `R`. Holds in every finite
/// semigroup; serves as a sanity check of the Green computation.
pub fn is_stable_with(sg: &FiniteSemigroup, gd: &GreenData) -> bool {
    for x in sg.elements1() {
        for y in sg.elements1() {
            if gd.j_class[x] == gd.j_class[y] {
                if gd.leq_l[x][y] && gd.l_class[x] != gd.l_class[y] {
                    return false;
                }
                if gd.leq_r[x][y] && gd.r_class[x] != gd.r_class[y] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_stable(sg: &FiniteSemigroup) -> bool {
    is_stable_with(sg, &green(sg))
}

/// Bundle of the predicates, used by reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Profile {
    pub aperiodic: bool,
    pub unambiguous: bool,
    pub equidivisible: bool,
    pub stable: bool,
}

pub fn profile(sg: &FiniteSemigroup) -> Profile {
    let gd = green(sg);
    Profile {
        aperiodic: is_aperiodic(sg),
        unambiguous: is_unambiguous_with(sg, &gd),
        equidivisible: is_equidivisible(sg),
        stable: is_stable_with(sg, &gd),
    }
}

pub fn require_unambiguous_aperiodic(sg: &FiniteSemigroup) -> Result<()> {
    if !is_aperiodic(sg) {
        return Err(Error::NotAperiodic);
    }
    if !is_unambiguous(sg) {
        return Err(Error::NotUnambiguous);
    }
    Ok(())
}
