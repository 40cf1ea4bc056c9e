//! Recognition of cluster expressions by pairs `(phi, s)` over a finite
//! unambiguous aperiodic semigroup.
//!
//! A recognizer assigns to every step point a 2-factorization of `s`. The
//! infinite copy families of an omega block are handled through eventual
//! constancy: images of powers stabilize at the aperiodicity index of the
//! base image, so checking finitely many copies per block covers every
//! instance. The four conditions checked are: the minimum maps to `(1, s)`,
//! the maximum to `(s, 1)`, successor pairs map to edges labeled by the
//! image of the left label, and at every stationary center the left and
//! right cofinal value sets agree.

use std::collections::{BTreeMap, BTreeSet};

use crate::cluster::{self, ClusterExpr, Pos, StatFamily};
use crate::error::{Error, Result};
use crate::green;
use crate::semigroup::FiniteSemigroup;
use crate::term::{self, OmegaTerm};

type Pair = (usize, usize);

#[derive(Debug, Clone)]
pub struct Recognizer {
    pub sg: FiniteSemigroup,
    pub phi: BTreeMap<char, usize>,
    pub s: usize,
    pub ce: ClusterExpr,
    /// Copy index per omega node (keyed by block path) from which values
    /// are constant; at most the aperiodicity index of the base image + 1.
    caps: BTreeMap<Vec<usize>, usize>,
    /// Explicit assignment for searched recognizers; canonical recognizers
    /// evaluate positions on demand.
    assigned: Option<BTreeMap<Pos, Pair>>,
}

/// Left and right cofinal value sets at a stationary center. For a valid
/// recognizer the two sets coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofinalValueSet {
    pub family: StatFamily,
    pub left: BTreeSet<Pair>,
    pub right: BTreeSet<Pair>,
}

fn omega_caps(
    ce: &ClusterExpr,
    sg: &FiniteSemigroup,
    phi: &BTreeMap<char, usize>,
) -> Result<BTreeMap<Vec<usize>, usize>> {
    fn walk(
        ce: &ClusterExpr,
        sg: &FiniteSemigroup,
        phi: &BTreeMap<char, usize>,
        path: &mut Vec<usize>,
        out: &mut BTreeMap<Vec<usize>, usize>,
    ) -> Result<()> {
        for (i, block) in ce.blocks.iter().enumerate() {
            if let cluster::Block::Omega { body, base, .. } = block {
                let img = base.eval(sg, phi)?;
                let idx = sg.aperiodicity_index(img).ok_or(Error::NotAperiodic)?;
                path.push(i);
                out.insert(path.clone(), idx + 1);
                walk(body, sg, phi, path, out)?;
                path.pop();
            }
        }
        Ok(())
    }
    let mut out = BTreeMap::new();
    walk(ce, sg, phi, &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn uniform_caps(ce: &ClusterExpr, bound: usize) -> BTreeMap<Vec<usize>, usize> {
    fn walk(
        ce: &ClusterExpr,
        bound: usize,
        path: &mut Vec<usize>,
        out: &mut BTreeMap<Vec<usize>, usize>,
    ) {
        for (i, block) in ce.blocks.iter().enumerate() {
            if let cluster::Block::Omega { body, .. } = block {
                path.push(i);
                out.insert(path.clone(), bound);
                walk(body, bound, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(ce, bound, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone)]
struct GapInfo {
    family: Vec<usize>,
    /// Copy context of the enclosing omega nodes, outermost first; `true`
    /// marks a forward copy.
    outer: Vec<(bool, usize)>,
    left: Vec<Pos>,
    right: Vec<Pos>,
}

#[derive(Debug, Clone)]
enum Item {
    Step(Pos),
    Gap(GapInfo),
}

fn wrap_pos(pos: &Pos, block: usize, copy: usize, fwd: bool) -> Pos {
    if fwd {
        Pos::Fwd {
            block,
            copy,
            inner: Box::new(pos.clone()),
        }
    } else {
        Pos::Bwd {
            block,
            copy,
            inner: Box::new(pos.clone()),
        }
    }
}

fn wrap_item(item: &Item, block: usize, copy: usize, fwd: bool) -> Item {
    match item {
        Item::Step(p) => Item::Step(wrap_pos(p, block, copy, fwd)),
        Item::Gap(g) => {
            let mut outer = vec![(fwd, copy)];
            outer.extend(g.outer.iter().cloned());
            Item::Gap(GapInfo {
                family: g.family.clone(),
                outer,
                left: g
                    .left
                    .iter()
                    .map(|p| wrap_pos(p, block, copy, fwd))
                    .collect(),
                right: g
                    .right
                    .iter()
                    .map(|p| wrap_pos(p, block, copy, fwd))
                    .collect(),
            })
        }
    }
}

/// Representative linearization: step points and stationary gaps in order,
/// with copies `0..=cap` per omega part. Also returns the self-junction
/// pairs that model the constant tails.
fn linearize(
    ce: &ClusterExpr,
    caps: &BTreeMap<Vec<usize>, usize>,
    path: &mut Vec<usize>,
) -> (Vec<Item>, Vec<(Pos, Pos)>) {
    let mut items = Vec::new();
    let mut junctions = Vec::new();
    for (i, block) in ce.blocks.iter().enumerate() {
        match block {
            cluster::Block::Letters(s) => {
                for offset in 0..s.len() {
                    items.push(Item::Step(Pos::Word { block: i, offset }));
                }
            }
            cluster::Block::Omega { body, .. } => {
                path.push(i);
                let cap = caps[path.as_slice()];
                let (body_items, body_junctions) = linearize(body, caps, path);
                path.pop();
                let steps: Vec<Pos> = body_items
                    .iter()
                    .filter_map(|it| match it {
                        Item::Step(p) => Some(p.clone()),
                        Item::Gap(_) => None,
                    })
                    .collect();
                for n in 0..=cap {
                    for item in &body_items {
                        items.push(wrap_item(item, i, n, true));
                    }
                    for (a, b) in &body_junctions {
                        junctions.push((wrap_pos(a, i, n, true), wrap_pos(b, i, n, true)));
                    }
                }
                if let (Some(first), Some(last)) = (steps.first(), steps.last()) {
                    junctions.push((wrap_pos(last, i, cap, true), wrap_pos(first, i, cap, true)));
                    junctions.push((
                        wrap_pos(last, i, cap, false),
                        wrap_pos(first, i, cap, false),
                    ));
                }
                items.push(Item::Gap(GapInfo {
                    family: {
                        let mut f = path.clone();
                        f.push(i);
                        f
                    },
                    outer: Vec::new(),
                    left: steps.iter().map(|p| wrap_pos(p, i, cap, true)).collect(),
                    right: steps.iter().map(|p| wrap_pos(p, i, cap, false)).collect(),
                }));
                for m in (0..=cap).rev() {
                    for item in &body_items {
                        items.push(wrap_item(item, i, m, false));
                    }
                    for (a, b) in &body_junctions {
                        junctions.push((wrap_pos(a, i, m, false), wrap_pos(b, i, m, false)));
                    }
                }
            }
        }
    }
    (items, junctions)
}

impl Recognizer {
    /// The 2-factorization assigned to a step position.
    pub fn pair_at(&self, pos: &Pos) -> Result<Pair> {
        match &self.assigned {
            None => {
                let x = term::eval_factors(
                    &cluster::prefix_factors(&self.ce, pos)?,
                    &self.sg,
                    &self.phi,
                )?;
                let y = term::eval_factors(
                    &cluster::suffix_factors(&self.ce, pos)?,
                    &self.sg,
                    &self.phi,
                )?;
                Ok((x, y))
            }
            Some(map) => {
                let clamped = self.clamp(pos);
                map.get(&clamped)
                    .copied()
                    .ok_or_else(|| Error::InvalidPosition(format!("no assignment at {clamped}")))
            }
        }
    }

    fn clamp(&self, pos: &Pos) -> Pos {
        fn go(pos: &Pos, caps: &BTreeMap<Vec<usize>, usize>, path: &mut Vec<usize>) -> Pos {
            match pos {
                Pos::Fwd { block, copy, inner } | Pos::Bwd { block, copy, inner } => {
                    path.push(*block);
                    let cap = caps.get(path.as_slice()).copied().unwrap_or(0);
                    let inner2 = go(inner, caps, path);
                    path.pop();
                    wrap_pos(
                        &inner2,
                        *block,
                        (*copy).min(cap),
                        matches!(pos, Pos::Fwd { .. }),
                    )
                }
                p => p.clone(),
            }
        }
        go(pos, &self.caps, &mut Vec::new())
    }

    /// Copy index from which the family values of the omega node at the
    /// given block path are constant.
    pub fn stabilization_cap(&self, node: &[usize]) -> Option<usize> {
        self.caps.get(node).copied()
    }

    /// The representative step positions, in order: one per letter and per
    /// copy up to the stabilization cap of each omega part.
    pub fn representative_positions(&self) -> Vec<Pos> {
        let mut path = Vec::new();
        let (items, _) = linearize(&self.ce, &self.caps, &mut path);
        items
            .into_iter()
            .filter_map(|it| match it {
                Item::Step(p) => Some(p),
                Item::Gap(_) => None,
            })
            .collect()
    }
}

/// Image of the element presented by the expression, from its structure.
pub fn ce_eval(
    ce: &ClusterExpr,
    sg: &FiniteSemigroup,
    phi: &BTreeMap<char, usize>,
) -> Result<usize> {
    let mut factors = Vec::new();
    for block in &ce.blocks {
        factors.extend(cluster::block_factors(block));
    }
    term::eval_factors(&factors, sg, phi)
}

/// The recognizer assigning to each step point the pair (image of its
/// prefix, image of its suffix). Requires an aperiodic semigroup so that
/// the copy families are eventually constant.
pub fn canonical_recognizer(
    ce: &ClusterExpr,
    sg: &FiniteSemigroup,
    phi: &BTreeMap<char, usize>,
) -> Result<Recognizer> {
    if !green::is_aperiodic(sg) {
        return Err(Error::NotAperiodic);
    }
    let s = ce_eval(ce, sg, phi)?;
    let caps = omega_caps(ce, sg, phi)?;
    Ok(Recognizer {
        sg: sg.clone(),
        phi: phi.clone(),
        s,
        ce: ce.clone(),
        caps,
        assigned: None,
    })
}

fn edge_ok(rec: &Recognizer, p: &Pos, q: &Pos) -> Result<bool> {
    let a = cluster::step_label(&rec.ce, p)?;
    let img = *rec.phi.get(&a).ok_or(Error::UnmappedLetter(a))?;
    let (x1, y1) = rec.pair_at(p)?;
    let (x2, y2) = rec.pair_at(q)?;
    Ok(rec.sg.mul1(x1, img) == x2 && y1 == rec.sg.mul1(img, y2))
}

fn run_checks(rec: &Recognizer) -> Result<bool> {
    let mut path = Vec::new();
    let (items, junctions) = linearize(&rec.ce, &rec.caps, &mut path);
    let steps: Vec<&Pos> = items
        .iter()
        .filter_map(|it| match it {
            Item::Step(p) => Some(p),
            Item::Gap(_) => None,
        })
        .collect();
    let Some(first) = steps.first() else {
        return Err(Error::Invariant("expression has no step points".into()));
    };
    // minimum
    if rec.pair_at(first)? != (rec.sg.one(), rec.s) {
        return Ok(false);
    }
    // successor edges
    let mut prev: Option<&Pos> = None;
    for item in &items {
        match item {
            Item::Step(p) => {
                if let Some(q) = prev {
                    if !edge_ok(rec, q, p)? {
                        return Ok(false);
                    }
                }
                prev = Some(p);
            }
            Item::Gap(_) => prev = None,
        }
    }
    // constant tails repeat
    for (p, q) in &junctions {
        if !edge_ok(rec, p, q)? {
            return Ok(false);
        }
    }
    // maximum
    let last = steps.last().unwrap();
    let a = cluster::step_label(&rec.ce, last)?;
    let img = *rec.phi.get(&a).ok_or(Error::UnmappedLetter(a))?;
    let (x, y) = rec.pair_at(last)?;
    if rec.sg.mul1(x, img) != rec.s || y != img {
        return Ok(false);
    }
    // balanced cofinal sets
    for item in &items {
        if let Item::Gap(gap) = item {
            let left: BTreeSet<Pair> = gap
                .left
                .iter()
                .map(|p| rec.pair_at(p))
                .collect::<Result<_>>()?;
            let right: BTreeSet<Pair> = gap
                .right
                .iter()
                .map(|p| rec.pair_at(p))
                .collect::<Result<_>>()?;
            if left != right {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The set of elements `s` recognizing the expression: the structural image
/// when the canonical recognizer passes all conditions, empty otherwise.
pub fn recognized_set(
    ce: &ClusterExpr,
    sg: &FiniteSemigroup,
    phi: &BTreeMap<char, usize>,
) -> Result<Vec<usize>> {
    green::require_unambiguous_aperiodic(sg)?;
    let rec = canonical_recognizer(ce, sg, phi)?;
    if run_checks(&rec)? {
        Ok(vec![rec.s])
    } else {
        Ok(vec![])
    }
}

/// Whether `(phi, s)` recognizes the expression. Hypotheses: unambiguous
/// aperiodic semigroup.
pub fn verify_recognition(
    ce: &ClusterExpr,
    sg: &FiniteSemigroup,
    phi: &BTreeMap<char, usize>,
    s: usize,
) -> Result<bool> {
    Ok(recognized_set(ce, sg, phi)?.contains(&s))
}

/// Cofinal value sets at the canonical representative of a stationary
/// family (enclosing copies at their stabilization caps).
pub fn fg(rec: &Recognizer, family: &StatFamily) -> Result<CofinalValueSet> {
    let mut path = Vec::new();
    let (items, _) = linearize(&rec.ce, &rec.caps, &mut path);
    for item in &items {
        if let Item::Gap(gap) = item {
            if gap.family == family.0 && gap.outer.iter().all(|&(fwd, _)| fwd) {
                // pick the instance whose enclosing copies sit at the caps,
                // inside the stabilized region
                let at_caps = gap
                    .outer
                    .iter()
                    .zip(family.0.iter().scan(Vec::new(), |p: &mut Vec<usize>, &b| {
                        p.push(b);
                        Some(rec.caps.get(p.as_slice()).copied().unwrap_or(0))
                    }))
                    .all(|(&(_, copy), cap)| copy == cap);
                if !at_caps {
                    continue;
                }
                let left: BTreeSet<Pair> = gap
                    .left
                    .iter()
                    .map(|p| rec.pair_at(p))
                    .collect::<Result<_>>()?;
                let right: BTreeSet<Pair> = gap
                    .right
                    .iter()
                    .map(|p| rec.pair_at(p))
                    .collect::<Result<_>>()?;
                return Ok(CofinalValueSet {
                    family: family.clone(),
                    left,
                    right,
                });
            }
        }
    }
    Err(Error::InvalidPosition(format!(
        "no stationary family {family}"
    )))
}

/// Exhaustive search for a recognizer with all copy families constant from
/// `family_bound` on. Independent of the canonical construction.
pub fn search_recognizer(
    ce: &ClusterExpr,
    sg: &FiniteSemigroup,
    phi: &BTreeMap<char, usize>,
    s: usize,
    family_bound: usize,
    visit_cap: u64,
) -> Result<Option<Recognizer>> {
    let caps = uniform_caps(ce, family_bound);
    let mut path = Vec::new();
    let (items, junctions) = linearize(ce, &caps, &mut path);
    let steps: Vec<Pos> = items
        .iter()
        .filter_map(|it| match it {
            Item::Step(p) => Some(p.clone()),
            Item::Gap(_) => None,
        })
        .collect();
    if steps.is_empty() {
        return Err(Error::Invariant("expression has no step points".into()));
    }
    let index_of: BTreeMap<Pos, usize> = steps.iter().cloned().zip(0..).collect();
    // run starts: step indices with no direct predecessor step
    let mut run_start = vec![false; steps.len()];
    {
        let mut prev_is_step = false;
        let mut k = 0usize;
        for item in &items {
            match item {
                Item::Step(_) => {
                    run_start[k] = !prev_is_step;
                    prev_is_step = true;
                    k += 1;
                }
                Item::Gap(_) => prev_is_step = false,
            }
        }
    }
    let labels: Vec<usize> = steps
        .iter()
        .map(|p| {
            let a = cluster::step_label(ce, p)?;
            phi.get(&a).copied().ok_or(Error::UnmappedLetter(a))
        })
        .collect::<Result<_>>()?;
    let all_pairs: Vec<Pair> = {
        let mut v = Vec::new();
        for x in sg.elements1() {
            for y in sg.elements1() {
                if sg.mul1(x, y) == s {
                    v.push((x, y));
                }
            }
        }
        v
    };
    // junction constraints as index pairs, checked once both ends are set
    let junction_idx: Vec<(usize, usize)> = junctions
        .iter()
        .map(|(p, q)| (index_of[p], index_of[q]))
        .collect();
    let gap_sets: Vec<(Vec<usize>, Vec<usize>)> = items
        .iter()
        .filter_map(|it| match it {
            Item::Gap(g) => Some((
                g.left.iter().map(|p| index_of[p]).collect(),
                g.right.iter().map(|p| index_of[p]).collect(),
            )),
            Item::Step(_) => None,
        })
        .collect();

    let mut search = Search {
        sg,
        s,
        run_start,
        labels,
        all_pairs,
        junction_idx,
        gap_sets,
        assignment: Vec::with_capacity(steps.len()),
        visited: 0,
        visit_cap,
    };
    if !search.dfs(0, steps.len())? {
        return Ok(None);
    }
    let map: BTreeMap<Pos, Pair> = steps.into_iter().zip(search.assignment).collect();
    Ok(Some(Recognizer {
        sg: sg.clone(),
        phi: phi.clone(),
        s,
        ce: ce.clone(),
        caps,
        assigned: Some(map),
    }))
}

struct Search<'a> {
    sg: &'a FiniteSemigroup,
    s: usize,
    run_start: Vec<bool>,
    labels: Vec<usize>,
    all_pairs: Vec<Pair>,
    junction_idx: Vec<(usize, usize)>,
    gap_sets: Vec<(Vec<usize>, Vec<usize>)>,
    assignment: Vec<Pair>,
    visited: u64,
    visit_cap: u64,
}

impl Search<'_> {
    fn junction_ok(&self, pi: usize, qi: usize) -> bool {
        let (xp, yp) = self.assignment[pi];
        let (xq, yq) = self.assignment[qi];
        let a = self.labels[pi];
        self.sg.mul1(xp, a) == xq && yp == self.sg.mul1(a, yq)
    }

    fn dfs(&mut self, k: usize, total: usize) -> Result<bool> {
        self.visited += 1;
        if self.visited > self.visit_cap {
            return Err(Error::SearchCapExceeded {
                cap: self.visit_cap,
            });
        }
        if k == total {
            let (x, y) = self.assignment[k - 1];
            let a = self.labels[k - 1];
            if self.sg.mul1(x, a) != self.s || y != a {
                return Ok(false);
            }
            for (l, r) in &self.gap_sets {
                let ls: BTreeSet<Pair> = l.iter().map(|&i| self.assignment[i]).collect();
                let rs: BTreeSet<Pair> = r.iter().map(|&i| self.assignment[i]).collect();
                if ls != rs {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let candidates: Vec<Pair> = if k == 0 {
            vec![(self.sg.one(), self.s)]
        } else if self.run_start[k] {
            self.all_pairs.clone()
        } else {
            let (xp, yp) = self.assignment[k - 1];
            let a = self.labels[k - 1];
            let x = self.sg.mul1(xp, a);
            self.sg
                .elements1()
                .filter(|&y| self.sg.mul1(a, y) == yp && self.sg.mul1(x, y) == self.s)
                .map(|y| (x, y))
                .collect()
        };
        for pair in candidates {
            self.assignment.push(pair);
            let consistent = self
                .junction_idx
                .iter()
                .filter(|&&(pi, qi)| pi.max(qi) == k)
                .all(|&(pi, qi)| self.junction_ok(pi, qi));
            if consistent && self.dfs(k + 1, total)? {
                return Ok(true);
            }
            self.assignment.pop();
        }
        Ok(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WorthyVerdict {
    PassAtScale,
    Refuted(String),
    Undecided(String),
}

#[derive(Debug, Clone)]
pub struct WorthyReport {
    pub verdict: WorthyVerdict,
    pub lines: Vec<String>,
}

fn first_step(ce: &ClusterExpr) -> Option<Pos> {
    for (i, block) in ce.blocks.iter().enumerate() {
        match block {
            cluster::Block::Letters(s) if !s.is_empty() => {
                return Some(Pos::Word {
                    block: i,
                    offset: 0,
                })
            }
            cluster::Block::Omega { body, .. } => {
                if let Some(inner) = first_step(body) {
                    return Some(Pos::Fwd {
                        block: i,
                        copy: 0,
                        inner: Box::new(inner),
                    });
                }
            }
            _ => {}
        }
    }
    None
}

/// Step positions whose prefixes are literal slices of the block sequence:
/// every letter of a letters block, the entry of each omega block, and the
/// maximum.
fn cut_positions(ce: &ClusterExpr) -> Vec<Pos> {
    let mut out = Vec::new();
    for (i, block) in ce.blocks.iter().enumerate() {
        match block {
            cluster::Block::Letters(s) => {
                for offset in 0..s.len() {
                    out.push(Pos::Word { block: i, offset });
                }
            }
            cluster::Block::Omega { body, .. } => {
                if let Some(inner) = first_step(body) {
                    out.push(Pos::Fwd {
                        block: i,
                        copy: 0,
                        inner: Box::new(inner),
                    });
                }
            }
        }
    }
    out.push(Pos::Max);
    out
}

/// Checks the worthiness conditions against a corpus: unique recognized
/// element per member, the same for closed step-point intervals,
/// edge-compatibility of interval transitions, and for each sampled step
/// point some member whose recognizer leaves it unstabilized.
pub fn check_worthy(ce: &ClusterExpr, corpus: &[crate::corpus::CorpusEntry]) -> WorthyReport {
    let letters: BTreeSet<char> =
        match OmegaTerm::new(ce.blocks.iter().flat_map(cluster::block_factors).collect()) {
            Ok(t) => t.letters(),
            Err(_) => {
                return WorthyReport {
                    verdict: WorthyVerdict::Refuted("empty expression".into()),
                    lines: vec![],
                }
            }
        };
    let cuts = cut_positions(ce);
    let mut unstabilized = vec![false; cuts.len()];
    let mut lines = Vec::new();
    let mut refutation: Option<String> = None;
    let mut used_members = 0usize;

    for entry in corpus {
        let target = entry.recognition_target();
        let Some(phi) = target.generators() else {
            continue;
        };
        if !letters.iter().all(|c| phi.contains_key(c)) {
            continue;
        }
        let phi = phi.clone();
        used_members += 1;

        let set = match recognized_set(ce, target, &phi) {
            Ok(s) => s,
            Err(e) => {
                refutation.get_or_insert(format!("{}: {e}", entry.id));
                continue;
            }
        };
        let eval = ce_eval(ce, target, &phi).ok();
        let verdict = if set.len() == 1 {
            "unique"
        } else {
            "W1-violated"
        };
        lines.push(format!(
            "{} | {} | {} | {{{}}} | {}",
            ce.term,
            entry.id,
            eval.map_or("-".into(), |v| (v + 1).to_string()),
            set.iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(","),
            verdict,
        ));
        if set.len() != 1 {
            refutation.get_or_insert(format!("{}: {} recognized elements", entry.id, set.len()));
            continue;
        }

        let rec = match canonical_recognizer(ce, target, &phi) {
            Ok(r) => r,
            Err(e) => {
                refutation.get_or_insert(format!("{}: {e}", entry.id));
                continue;
            }
        };

        // intervals between sampled cuts
        for i in 0..cuts.len() {
            for j in i + 1..cuts.len() {
                let pre_i = cluster::prefix_factors(ce, &cuts[i]).unwrap_or_default();
                let pre_j = cluster::prefix_factors(ce, &cuts[j]).unwrap_or_default();
                if pre_j.len() <= pre_i.len() || pre_j[..pre_i.len()] != pre_i[..] {
                    continue;
                }
                let mid = &pre_j[pre_i.len()..];
                let Ok(mid_term) = OmegaTerm::new(mid.to_vec()) else {
                    continue;
                };
                let normal = mid_term.normalize();
                let Ok(mid_ce) = cluster::build(&normal) else {
                    continue;
                };
                match recognized_set(&mid_ce, target, &phi) {
                    Ok(ms) if ms.len() == 1 => {
                        // edge compatibility of the interval transition
                        let t_img = ms[0];
                        let (xi, yi) = rec.pair_at(&cuts[i]).unwrap_or((usize::MAX, usize::MAX));
                        let (xj, yj) = rec.pair_at(&cuts[j]).unwrap_or((usize::MAX, usize::MAX));
                        if target.mul1(xi, t_img) != xj || yi != target.mul1(t_img, yj) {
                            refutation.get_or_insert(format!(
                                "{}: interval transition not an edge at {} .. {}",
                                entry.id, cuts[i], cuts[j]
                            ));
                        }
                    }
                    Ok(ms) => {
                        refutation.get_or_insert(format!(
                            "{}: interval {} .. {} recognized by {} elements",
                            entry.id,
                            cuts[i],
                            cuts[j],
                            ms.len()
                        ));
                    }
                    Err(e) => {
                        refutation.get_or_insert(format!("{}: {e}", entry.id));
                    }
                }
            }
        }

        // stabilizer-freeness of sampled step points
        for (k, cut) in cuts.iter().enumerate() {
            if unstabilized[k] {
                continue;
            }
            if let Ok((x, y)) = rec.pair_at(cut) {
                let stabilized = target
                    .elements()
                    .any(|z| target.mul1(x, z) == x && target.mul1(z, y) == y);
                if !stabilized {
                    unstabilized[k] = true;
                }
            }
        }
    }

    let verdict = if let Some(r) = refutation {
        WorthyVerdict::Refuted(r)
    } else if used_members == 0 {
        WorthyVerdict::Undecided("no corpus member covers the alphabet".into())
    } else if let Some(k) = unstabilized.iter().position(|&u| !u) {
        WorthyVerdict::Undecided(format!(
            "no corpus member leaves step point {} unstabilized",
            cuts[k]
        ))
    } else {
        WorthyVerdict::PassAtScale
    };
    WorthyReport { verdict, lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::build;
    use crate::corpus;
    use crate::fixtures;
    use crate::term::OmegaTerm;

    fn t(s: &str) -> OmegaTerm {
        OmegaTerm::parse(s).unwrap()
    }

    fn u2_phi() -> (FiniteSemigroup, BTreeMap<char, usize>) {
        let sg = fixtures::u2();
        let phi = sg.generators().unwrap().clone();
        (sg, phi)
    }

    #[test]
    fn canonical_pairs_on_a_omega_over_u2() {
        let (sg, phi) = u2_phi();
        let ce = build(&t("(a)^w")).unwrap();
        let rec = canonical_recognizer(&ce, &sg, &phi).unwrap();
        let z = 1;
        assert_eq!(rec.s, z);
        let at = |copy| Pos::Fwd {
            block: 0,
            copy,
            inner: Box::new(Pos::Word {
                block: 0,
                offset: 0,
            }),
        };
        assert_eq!(rec.pair_at(&at(0)).unwrap(), (sg.one(), z));
        assert_eq!(rec.pair_at(&at(3)).unwrap(), (z, z));
        assert_eq!(rec.pair_at(&Pos::Max).unwrap(), (z, sg.one()));
    }

    #[test]
    fn recognition_matches_evaluation_on_u2() {
        let (sg, phi) = u2_phi();
        let ce = build(&t("(a)^w")).unwrap();
        let z = 1;
        let e = 0;
        assert!(verify_recognition(&ce, &sg, &phi, z).unwrap());
        assert!(!verify_recognition(&ce, &sg, &phi, e).unwrap());
    }

    #[test]
    fn finite_word_middle_pair() {
        let (sg, phi) = u2_phi();
        let ce = build(&t("ab")).unwrap();
        let rec = canonical_recognizer(&ce, &sg, &phi).unwrap();
        let mid = Pos::Word {
            block: 0,
            offset: 1,
        };
        assert_eq!(rec.pair_at(&mid).unwrap(), (phi[&'a'], phi[&'b']));
    }

    #[test]
    fn recognition_agreement_on_fixture_members() {
        let corpus = corpus::corpus(1, 8, 0);
        for term_str in ["(a)^w", "ab", "(ab)^w", "((a)^wb)^w", "a(ba)^w"] {
            let term = t(term_str).normalize();
            let ce = build(&term).unwrap();
            for entry in &corpus {
                let target = entry.recognition_target();
                let phi = target.generators().unwrap().clone();
                if !term.letters().iter().all(|c| phi.contains_key(c)) {
                    continue;
                }
                let eval = term.eval(target, &phi).unwrap();
                for s in target.elements() {
                    assert_eq!(
                        verify_recognition(&ce, target, &phi, s).unwrap(),
                        s == eval,
                        "{term_str} on {} at {}",
                        entry.id,
                        s + 1
                    );
                }
            }
        }
    }

    #[test]
    fn fg_of_the_single_center_over_u2() {
        let (sg, phi) = u2_phi();
        let ce = build(&t("(a)^w")).unwrap();
        let rec = canonical_recognizer(&ce, &sg, &phi).unwrap();
        let sets = fg(&rec, &StatFamily(vec![0])).unwrap();
        let z = 1;
        let expected: BTreeSet<Pair> = [(z, z)].into_iter().collect();
        assert_eq!(sets.left, expected);
        assert_eq!(sets.right, expected);
    }

    #[test]
    fn fg_balances_on_nested_blocks() {
        let (sg, phi) = u2_phi();
        let ce = build(&t("((a)^wb)^w")).unwrap();
        let rec = canonical_recognizer(&ce, &sg, &phi).unwrap();
        for (family, _) in cluster::stationary_points(&ce) {
            let sets = fg(&rec, &family).unwrap();
            assert_eq!(sets.left, sets.right, "{family}");
        }
    }

    #[test]
    fn every_represented_pair_multiplies_to_the_image() {
        let corpus = corpus::corpus(1, 8, 0);
        for term_str in ["((a)^wb)^w", "(ab)^w", "a(ba)^w"] {
            let term = t(term_str).normalize();
            let ce = build(&term).unwrap();
            for entry in &corpus {
                let target = entry.recognition_target();
                let phi = target.generators().unwrap().clone();
                if !term.letters().iter().all(|c| phi.contains_key(c)) {
                    continue;
                }
                let rec = canonical_recognizer(&ce, target, &phi).unwrap();
                assert_eq!(rec.s, term.eval(target, &phi).unwrap());
                for pos in rec.representative_positions() {
                    let (x, y) = rec.pair_at(&pos).unwrap();
                    assert_eq!(
                        target.mul1(x, y),
                        rec.s,
                        "{term_str} at {pos} on {}",
                        entry.id
                    );
                }
            }
        }
    }

    #[test]
    fn search_agrees_with_verification_on_small_cases() {
        let (sg, phi) = u2_phi();
        for term_str in ["(a)^w", "ab", "(ab)^w"] {
            let term = t(term_str).normalize();
            let ce = build(&term).unwrap();
            let eval = term.eval(&sg, &phi).unwrap();
            for s in sg.elements() {
                let found = search_recognizer(&ce, &sg, &phi, s, 3, 5_000_000)
                    .unwrap()
                    .is_some();
                assert_eq!(found, s == eval, "{term_str} at {}", s + 1);
            }
        }
    }

    #[test]
    fn searched_recognizer_for_finite_words_is_canonical() {
        let (sg, phi) = u2_phi();
        let ce = build(&t("ab")).unwrap();
        let eval = t("ab").eval(&sg, &phi).unwrap();
        let rec = search_recognizer(&ce, &sg, &phi, eval, 2, 1_000_000)
            .unwrap()
            .expect("recognizer exists");
        let canon = canonical_recognizer(&ce, &sg, &phi).unwrap();
        for offset in 0..2 {
            let pos = Pos::Word { block: 0, offset };
            assert_eq!(rec.pair_at(&pos).unwrap(), canon.pair_at(&pos).unwrap());
        }
    }

    #[test]
    fn worthy_passes_on_built_terms() {
        let corpus = corpus::corpus(1, 8, 0);
        for term_str in ["ab", "(a)^w", "(ab)^w"] {
            let ce = build(&t(term_str).normalize()).unwrap();
            let report = check_worthy(&ce, &corpus);
            assert_eq!(report.verdict, WorthyVerdict::PassAtScale, "{term_str}");
        }
    }

    #[test]
    fn worthy_flags_label_base_mismatch() {
        // an omega block whose base disagrees with its body labels
        let good = build(&t("(ab)^w")).unwrap();
        let mut bad = good.clone();
        if let cluster::Block::Omega { base, .. } = &mut bad.blocks[0] {
            *base = t("aa");
        }
        let corpus = corpus::corpus(1, 8, 0);
        let report = check_worthy(&bad, &corpus);
        assert!(matches!(report.verdict, WorthyVerdict::Refuted(_)));
    }
}
