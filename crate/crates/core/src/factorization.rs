//! The quasi-ordered set of 2-factorizations of a semigroup element, its
//! similarity classes, transition labels, stabilizer monoids and the
//! `J`-class attached to each class.
//!
//! Everything is materialized: vertices are all pairs `(u, v)` of `S^I`
//! with `u * v = s`, and `(u, v) <= (u', v')` iff some `t` in `S^I` has
//! `u * t = u'` and `v = t * v'`. Transition label sets are stored, not
//! just existence bits, because the `K_p` and `J_p` computations need them.

use crate::error::{Error, Result};
use crate::green::{self, GreenData};
use crate::semigroup::FiniteSemigroup;

#[derive(Debug, Clone)]
pub struct FactorizationPoset {
    pub element: usize,
    /// All 2-factorizations of the element, sorted.
    pub vertices: Vec<(usize, usize)>,
    /// `leq[i][j]` iff vertex `i <= j`, i.e. `transitions[i][j]` nonempty.
    pub leq: Vec<Vec<bool>>,
    /// Transition labels `t` with `u_i * t = u_j` and `v_i = t * v_j`.
    pub transitions: Vec<Vec<Vec<usize>>>,
    /// Similarity class id per vertex (mutual `<=`).
    pub sim_class: Vec<usize>,
    /// Vertices of each class.
    pub classes: Vec<Vec<usize>>,
    /// Induced order on classes.
    pub class_leq: Vec<Vec<bool>>,
    /// Whether the class order is total.
    pub is_linear: bool,
}

pub fn build_poset(sg: &FiniteSemigroup, s: usize) -> FactorizationPoset {
    let mut vertices = Vec::new();
    for u in sg.elements1() {
        for v in sg.elements1() {
            if sg.mul1(u, v) == s {
                vertices.push((u, v));
            }
        }
    }
    vertices.sort_unstable();
    let n = vertices.len();
    let mut leq = vec![vec![false; n]; n];
    let mut transitions = vec![vec![Vec::new(); n]; n];
    for (i, &(u, v)) in vertices.iter().enumerate() {
        for (j, &(x, y)) in vertices.iter().enumerate() {
            let ts: Vec<usize> = sg
                .elements1()
                .filter(|&t| sg.mul1(u, t) == x && v == sg.mul1(t, y))
                .collect();
            if !ts.is_empty() {
                leq[i][j] = true;
            }
            transitions[i][j] = ts;
        }
    }

    let mut sim_class = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if sim_class[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![i];
        sim_class[i] = id;
        for j in i + 1..n {
            if sim_class[j] == usize::MAX && leq[i][j] && leq[j][i] {
                sim_class[j] = id;
                members.push(j);
            }
        }
        classes.push(members);
    }
    let k = classes.len();
    let mut class_leq = vec![vec![false; k]; k];
    for p in 0..k {
        for q in 0..k {
            class_leq[p][q] = leq[classes[p][0]][classes[q][0]];
        }
    }
    let is_linear = (0..k).all(|p| (0..k).all(|q| class_leq[p][q] || class_leq[q][p]));
    FactorizationPoset {
        element: s,
        vertices,
        leq,
        transitions,
        sim_class,
        classes,
        class_leq,
        is_linear,
    }
}

impl FactorizationPoset {
    pub fn vertex_index(&self, u: usize, v: usize) -> Option<usize> {
        self.vertices.binary_search(&(u, v)).ok()
    }

    /// Index of `(1, s)`.
    pub fn min_vertex(&self, sg: &FiniteSemigroup) -> usize {
        self.vertex_index(sg.one(), self.element)
            .expect("(1, s) is a vertex")
    }

    /// Index of `(s, 1)`.
    pub fn max_vertex(&self, sg: &FiniteSemigroup) -> usize {
        self.vertex_index(self.element, sg.one())
            .expect("(s, 1) is a vertex")
    }

    /// Stabilizer monoid of a vertex: all `z` with `u * z = u`, `z * v = v`.
    pub fn stabilizer_monoid(&self, sg: &FiniteSemigroup, vertex: usize) -> Vec<usize> {
        let (u, v) = self.vertices[vertex];
        sg.elements1()
            .filter(|&z| sg.mul1(u, z) == u && sg.mul1(z, v) == v)
            .collect()
    }

    /// Whether some element other than the identity stabilizes the vertex.
    pub fn has_nontrivial_stabilizer(&self, sg: &FiniteSemigroup, vertex: usize) -> bool {
        self.stabilizer_monoid(sg, vertex)
            .iter()
            .any(|&z| z != sg.one())
    }

    /// Plain-text adjacency listing, stable across runs: one line per
    /// vertex with its class, then one line per related pair with the
    /// transition labels. Elements are 1-based, the adjoined identity
    /// prints as `1`.
    pub fn to_text(&self, sg: &FiniteSemigroup) -> String {
        let name = |x: usize| {
            if x == sg.one() {
                "1".to_string()
            } else {
                format!("e{}", x + 1)
            }
        };
        let mut out = format!("element {} linear {}\n", name(self.element), self.is_linear);
        for (i, &(u, v)) in self.vertices.iter().enumerate() {
            out.push_str(&format!(
                "v{} ({},{}) class {}\n",
                i,
                name(u),
                name(v),
                self.sim_class[i]
            ));
        }
        for i in 0..self.vertices.len() {
            for j in 0..self.vertices.len() {
                if self.leq[i][j] {
                    let labels: Vec<String> =
                        self.transitions[i][j].iter().map(|&t| name(t)).collect();
                    out.push_str(&format!("v{} <= v{} via {}\n", i, j, labels.join(",")));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct StabilizerData {
    pub vertex: (usize, usize),
    /// The stabilizer monoid, a submonoid of `S^I`.
    pub monoid: Vec<usize>,
    /// Its minimum ideal.
    pub minimal_ideal: Vec<usize>,
    /// `J`-class id (in `S^I`) of the elements of the minimum ideal.
    pub jp: usize,
}

/// Minimum ideal of a subsemigroup of `S^I`, given by its element list.
fn minimum_ideal(sg: &FiniteSemigroup, monoid: &[usize]) -> Result<Vec<usize>> {
    // J-order within the submonoid: x <= y iff x in M^1 y M^1.
    let below = |x: usize, y: usize| -> bool {
        monoid
            .iter()
            .any(|&a| monoid.iter().any(|&b| sg.mul1(sg.mul1(a, y), b) == x))
    };
    let minimal: Vec<usize> = monoid
        .iter()
        .copied()
        .filter(|&x| monoid.iter().all(|&y| below(x, y)))
        .collect();
    if minimal.is_empty() {
        return Err(Error::Invariant(
            "a finite monoid has a minimum ideal".into(),
        ));
    }
    for &x in &minimal {
        for &y in &minimal {
            if !below(x, y) || !below(y, x) {
                return Err(Error::Invariant(
                    "minimum ideal elements must be J-equivalent".into(),
                ));
            }
        }
    }
    Ok(minimal)
}

pub fn stabilizer_data(
    sg: &FiniteSemigroup,
    gd: &GreenData,
    poset: &FactorizationPoset,
    vertex: usize,
) -> Result<StabilizerData> {
    let monoid = poset.stabilizer_monoid(sg, vertex);
    let minimal_ideal = minimum_ideal(sg, &monoid)?;
    let jp = gd.j_class[minimal_ideal[0]];
    if minimal_ideal.iter().any(|&x| gd.j_class[x] != jp) {
        return Err(Error::Invariant(
            "minimum ideal spreads over several J-classes of S^I".into(),
        ));
    }
    Ok(StabilizerData {
        vertex: poset.vertices[vertex],
        monoid,
        minimal_ideal,
        jp,
    })
}

/// The `J`-class of `S^I` carrying the minimum ideals of the stabilizers of
/// the vertices of a similarity class; checked identical across vertices.
pub fn jp_class(
    sg: &FiniteSemigroup,
    gd: &GreenData,
    poset: &FactorizationPoset,
    class: usize,
) -> Result<usize> {
    let mut jp = None;
    for &v in &poset.classes[class] {
        let data = stabilizer_data(sg, gd, poset, v)?;
        match jp {
            None => jp = Some(data.jp),
            Some(j) if j == data.jp => {}
            Some(j) => {
                return Err(Error::Invariant(format!(
                    "inconsistent J-class across a similarity class: {} vs {}",
                    j, data.jp
                )))
            }
        }
    }
    jp.ok_or_else(|| Error::Invariant("empty similarity class".into()))
}

/// Whether `t` labels a transition from the class to itself; the direct
/// answer is cross-checked against the factor criterion (`t` divides the
/// elements of `J_p`).
pub fn transition_characterization(
    sg: &FiniteSemigroup,
    gd: &GreenData,
    poset: &FactorizationPoset,
    class: usize,
    t: usize,
) -> Result<bool> {
    let direct = poset.classes[class].iter().any(|&i| {
        poset.classes[class]
            .iter()
            .any(|&j| poset.transitions[i][j].contains(&t))
    });
    let jp = jp_class(sg, gd, poset, class)?;
    let witness = sg
        .elements1()
        .find(|&x| gd.j_class[x] == jp)
        .expect("J-class is inhabited");
    let criterion = gd.leq_j[witness][t];
    if direct != criterion {
        return Err(Error::Invariant(format!(
            "transition characterization mismatch for label {}: direct {}, factor criterion {}",
            t + 1,
            direct,
            criterion
        )));
    }
    Ok(direct)
}

/// All edges inside the class labeled by elements of `J_p`. Requires an
/// unambiguous semigroup.
pub fn kp_edges(
    sg: &FiniteSemigroup,
    gd: &GreenData,
    poset: &FactorizationPoset,
    class: usize,
) -> Result<Vec<(usize, usize, usize)>> {
    if !green::is_unambiguous_with(sg, gd) {
        return Err(Error::NotUnambiguous);
    }
    let jp = jp_class(sg, gd, poset, class)?;
    let mut edges = Vec::new();
    for &i in &poset.classes[class] {
        for &j in &poset.classes[class] {
            for &t in &poset.transitions[i][j] {
                if gd.j_class[t] == jp {
                    edges.push((i, j, t));
                }
            }
        }
    }
    Ok(edges)
}

/// The bijection sending each vertex of the class to the unique idempotent
/// of `J_p` stabilizing it. Requires an unambiguous aperiodic semigroup.
pub fn idempotent_bijection(
    sg: &FiniteSemigroup,
    gd: &GreenData,
    poset: &FactorizationPoset,
    class: usize,
) -> Result<Vec<(usize, usize)>> {
    green::require_unambiguous_aperiodic(sg)?;
    let jp = jp_class(sg, gd, poset, class)?;
    let idempotents = gd.idempotents_of_j_class(jp);
    let mut pairs = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for &v in &poset.classes[class] {
        let stab = poset.stabilizer_monoid(sg, v);
        let es: Vec<usize> = stab
            .into_iter()
            .filter(|&z| sg.mul1(z, z) == z && gd.j_class[z] == jp)
            .collect();
        match es.as_slice() {
            [e] => {
                if !used.insert(*e) {
                    return Err(Error::Invariant(format!(
                        "idempotent {} stabilizes two vertices of the class",
                        e + 1
                    )));
                }
                pairs.push((v, *e));
            }
            [] => {
                return Err(Error::Invariant(
                    "vertex with no stabilizing idempotent in J_p".into(),
                ))
            }
            _ => {
                return Err(Error::Invariant(format!(
                    "vertex stabilized by {} idempotents of J_p",
                    es.len()
                )))
            }
        }
    }
    if used.len() != idempotents.len() {
        return Err(Error::Invariant(format!(
            "bijection misses idempotents: {} vertices vs {} idempotents",
            used.len(),
            idempotents.len()
        )));
    }
    Ok(pairs)
}
