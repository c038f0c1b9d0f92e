//! Structural analyses on [`DirectedGraph`]s.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fib::{fib_index_of, fib_usize};
use crate::graph::{build_l_rauzy, build_rauzy, DirectedGraph};
use crate::word::{Source, Word};

/// Strongly connected components, each sorted, listed by smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SccDecomposition {
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
}

impl SccDecomposition {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.components.len() == 1
    }
}

/// Iterative Tarjan over an adjacency list.
pub fn scc(adj: &[Vec<usize>]) -> SccDecomposition {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next = 0;
    // (vertex, next neighbour slot)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut slot)) = call.last_mut() {
            if *slot == 0 {
                index[v] = next;
                low[v] = next;
                next += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(*slot) {
                *slot += 1;
                if index[w] == UNVISITED {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    components.sort_unstable_by_key(|c| c[0]);
    let mut component_of = vec![0; n];
    for (ci, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = ci;
        }
    }
    SccDecomposition {
        components,
        component_of,
    }
}

pub fn strongly_connected(g: &DirectedGraph) -> SccDecomposition {
    scc(&g.adjacency())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub in_degree: Vec<usize>,
    pub out_degree: Vec<usize>,
}

impl DegreeReport {
    pub fn min_in(&self) -> usize {
        self.in_degree.iter().copied().min().unwrap_or(0)
    }

    pub fn min_out(&self) -> usize {
        self.out_degree.iter().copied().min().unwrap_or(0)
    }

    pub fn isolated(&self) -> Vec<usize> {
        (0..self.in_degree.len())
            .filter(|&v| self.in_degree[v] == 0 && self.out_degree[v] == 0)
            .collect()
    }

    /// Vertices with in-degree and out-degree both equal to 2.
    pub fn two_in_two_out(&self) -> Vec<usize> {
        (0..self.in_degree.len())
            .filter(|&v| self.in_degree[v] == 2 && self.out_degree[v] == 2)
            .collect()
    }
}

pub fn degrees(g: &DirectedGraph) -> DegreeReport {
    let mut in_degree = vec![0; g.vertex_count()];
    let mut out_degree = vec![0; g.vertex_count()];
    for a in g.arcs() {
        out_degree[a.from] += 1;
        in_degree[a.to] += 1;
    }
    DegreeReport {
        in_degree,
        out_degree,
    }
}

/// Fibonacci parameters of an order `k = F_{n+1} − 1`: returns `n`.
pub fn closed_form_order(k: usize) -> Option<usize> {
    let m = fib_index_of(k + 1)?;
    (m >= 2).then(|| m - 1)
}

/// Whether `(k, ℓ)` satisfies `k = F_{n+1} − 1` and
/// `F_{n−1} <= k − ℓ <= F_n`.
pub fn closed_form_applies(k: usize, ell: usize) -> bool {
    closed_form_check(k, ell).is_ok()
}

fn closed_form_check(k: usize, ell: usize) -> Result<usize> {
    let fail = |reason: String| Error::ClosedFormPrecondition { k, ell, reason };
    if ell == 0 || ell >= k {
        return Err(fail("need 1 <= ell <= k-1".into()));
    }
    let n = closed_form_order(k).ok_or_else(|| fail(format!("k+1 = {} is not a Fibonacci number", k + 1)))?;
    let step = k - ell;
    let (lo, hi) = (fib_usize(n - 1).unwrap(), fib_usize(n).unwrap());
    if step < lo || step > hi {
        return Err(fail(format!("k-ell = {step} is outside [F_{{n-1}}, F_n] = [{lo}, {hi}]")));
    }
    Ok(n)
}

/// Arc list of the Fibonacci ℓ-Rauzy graph of order `k = F_{n+1} − 1`
/// from the three index shifts, as 1-based `(from, to)` pairs, sorted.
pub fn closed_form_arcs(k: usize, ell: usize) -> Result<Vec<(usize, usize)>> {
    let n = closed_form_check(k, ell)?;
    let s = k - ell;
    let (fnn, fn1) = (fib_usize(n).unwrap(), fib_usize(n + 1).unwrap());
    let mut arcs = Vec::with_capacity(fn1 + s);
    arcs.extend((1..=fn1 - s).map(|i| (i, i + s)));
    arcs.extend((fn1 - s + 1..=fn1).map(|i| (i, i + s - fn1)));
    arcs.extend((fnn - s + 1..=fnn).map(|i| (i, i + s - fnn)));
    arcs.sort_unstable();
    Ok(arcs)
}

/// Vertex bijection `g1 → g2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoMapping {
    pub map: Vec<usize>,
}

impl IsoMapping {
    /// Whether the map is a bijection carrying the arc multiset of `g1`
    /// exactly onto that of `g2`.
    pub fn verify(&self, g1: &DirectedGraph, g2: &DirectedGraph) -> bool {
        let n = g1.vertex_count();
        if n != g2.vertex_count() || self.map.len() != n || g1.arc_count() != g2.arc_count() {
            return false;
        }
        let mut hit = vec![false; n];
        for &m in &self.map {
            if m >= n || std::mem::replace(&mut hit[m], true) {
                return false;
            }
        }
        let image = multiplicities(g1.arcs().iter().map(|a| (self.map[a.from], self.map[a.to])));
        image == multiplicities(g2.arcs().iter().map(|a| (a.from, a.to)))
    }
}

fn multiplicities(pairs: impl Iterator<Item = (usize, usize)>) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for p in pairs {
        *m.entry(p).or_insert(0) += 1;
    }
    m
}

/// Cheapest invariant that tells two graphs apart, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Discriminator {
    VertexCount,
    ArcCount,
    DegreeSequence,
}

pub fn invariant_mismatch(g1: &DirectedGraph, g2: &DirectedGraph) -> Option<Discriminator> {
    if g1.vertex_count() != g2.vertex_count() {
        return Some(Discriminator::VertexCount);
    }
    if g1.arc_count() != g2.arc_count() {
        return Some(Discriminator::ArcCount);
    }
    let seq = |g: &DirectedGraph| {
        let d = degrees(g);
        let mut s: Vec<_> = d.in_degree.into_iter().zip(d.out_degree).collect();
        s.sort_unstable();
        s
    };
    if seq(g1) != seq(g2) {
        return Some(Discriminator::DegreeSequence);
    }
    None
}

pub const ISO_MAX_VERTICES: usize = 200;

struct IsoSide {
    mult: HashMap<(usize, usize), usize>,
    color: Vec<usize>,
}

/// Exact isomorphism search for desk-scale graphs: colour refinement on
/// (in, out, loop) signatures, then backtracking within colour classes.
pub fn isomorphic(g1: &DirectedGraph, g2: &DirectedGraph) -> Result<Option<IsoMapping>> {
    for g in [g1, g2] {
        if g.vertex_count() > ISO_MAX_VERTICES {
            return Err(Error::SizeLimit {
                what: "isomorphism search vertex count",
                limit: ISO_MAX_VERTICES,
            });
        }
    }
    if invariant_mismatch(g1, g2).is_some() {
        return Ok(None);
    }
    let n = g1.vertex_count();
    let (Some(c1), Some(c2)) = refine_jointly(g1, g2) else {
        return Ok(None);
    };
    let side = |g: &DirectedGraph, color: Vec<usize>| IsoSide {
        mult: g
            .arcs()
            .iter()
            .fold(HashMap::new(), |mut m, a| {
                *m.entry((a.from, a.to)).or_insert(0) += 1;
                m
            }),
        color,
    };
    let s1 = side(g1, c1);
    let s2 = side(g2, c2);

    // assign rarest colours first
    let mut class_size: HashMap<usize, usize> = HashMap::new();
    for &c in &s1.color {
        *class_size.entry(c).or_insert(0) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&s1.color[v]], s1.color[v], v));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if backtrack(0, &order, &s1, &s2, &mut map, &mut used) {
        let m = IsoMapping { map };
        debug_assert!(m.verify(g1, g2));
        Ok(Some(m))
    } else {
        Ok(None)
    }
}

fn backtrack(
    depth: usize,
    order: &[usize],
    s1: &IsoSide,
    s2: &IsoSide,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    let mult = |s: &IsoSide, a: usize, b: usize| s.mult.get(&(a, b)).copied().unwrap_or(0);
    for cand in 0..map.len() {
        if used[cand] || s2.color[cand] != s1.color[v] {
            continue;
        }
        if mult(s1, v, v) != mult(s2, cand, cand) {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let mu = map[u];
            mult(s1, v, u) == mult(s2, cand, mu) && mult(s1, u, v) == mult(s2, mu, cand)
        });
        if !consistent {
            continue;
        }
        map[v] = cand;
        used[cand] = true;
        if backtrack(depth + 1, order, s1, s2, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[cand] = false;
    }
    false
}

/// Joint 1-dimensional colour refinement. Returns `None` for a side when
/// the two colour histograms disagree.
fn refine_jointly(g1: &DirectedGraph, g2: &DirectedGraph) -> (Option<Vec<usize>>, Option<Vec<usize>>) {
    let n1 = g1.vertex_count();
    let initial = |g: &DirectedGraph| {
        let d = degrees(g);
        let loops = g.arcs().iter().fold(vec![0; g.vertex_count()], |mut l, a| {
            if a.from == a.to {
                l[a.from] += 1;
            }
            l
        });
        (0..g.vertex_count())
            .map(|v| vec![d.in_degree[v], d.out_degree[v], loops[v]])
            .collect::<Vec<_>>()
    };
    let mut sigs: Vec<Vec<usize>> = initial(g1);
    sigs.extend(initial(g2));
    let adj: Vec<(usize, usize)> = g1
        .arcs()
        .iter()
        .map(|a| (a.from, a.to))
        .chain(g2.arcs().iter().map(|a| (a.from + n1, a.to + n1)))
        .collect();
    let mut colors = canonical_colors(&sigs);
    let mut classes = colors.iter().max().map_or(0, |m| m + 1);
    loop {
        let total = colors.len();
        let mut outs: Vec<Vec<usize>> = vec![Vec::new(); total];
        let mut ins: Vec<Vec<usize>> = vec![Vec::new(); total];
        for &(a, b) in &adj {
            outs[a].push(colors[b]);
            ins[b].push(colors[a]);
        }
        let sigs: Vec<Vec<usize>> = (0..total)
            .map(|v| {
                outs[v].sort_unstable();
                ins[v].sort_unstable();
                let mut s = vec![colors[v], usize::MAX];
                s.extend(&outs[v]);
                s.push(usize::MAX);
                s.extend(&ins[v]);
                s
            })
            .collect();
        let next = canonical_colors(&sigs);
        let next_classes = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    let (c1, c2) = colors.split_at(n1);
    let hist = |c: &[usize]| {
        let mut h = c.to_vec();
        h.sort_unstable();
        h
    };
    if hist(c1) == hist(c2) {
        (Some(c1.to_vec()), Some(c2.to_vec()))
    } else {
        (None, None)
    }
}

fn canonical_colors(sigs: &[Vec<usize>]) -> Vec<usize> {
    let mut distinct: Vec<&Vec<usize>> = sigs.iter().collect();
    distinct.sort_unstable();
    distinct.dedup();
    sigs.iter()
        .map(|s| distinct.binary_search(&s).expect("signature present"))
        .collect()
}

fn fibonacci_pair(k: usize, ell: usize) -> Result<(DirectedGraph, DirectedGraph)> {
    let len = 2 * k - ell;
    let f = Source::Fibonacci.prefix_for_factors(len)?;
    let fc = Source::FibonacciComplement.prefix_for_factors(len)?;
    Ok((build_l_rauzy(&f, k, ell)?, build_l_rauzy(&fc, k, ell)?))
}

/// Checks that complementing every letter maps the ℓ-Rauzy graph of the
/// Fibonacci word onto that of its complement, labels included.
pub fn complement_iso_check(k: usize, ell: usize) -> Result<IsoMapping> {
    let (g, gc) = fibonacci_pair(k, ell)?;
    let mut map = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        let image = gc
            .vertex_index(&v.complement())
            .ok_or_else(|| Error::CheckFailed(format!("complement of vertex {v} is not a vertex for k={k}, ell={ell}")))?;
        map.push(image);
    }
    let mapping = IsoMapping { map };
    if !mapping.verify(&g, &gc) {
        return Err(Error::CheckFailed(format!(
            "complement map does not preserve arcs for k={k}, ell={ell}"
        )));
    }
    let mut labels: Vec<Word> = g.arcs().iter().map(|a| a.label.complement()).collect();
    let mut labels_c: Vec<Word> = gc.arcs().iter().map(|a| a.label.clone()).collect();
    labels.sort_unstable();
    labels_c.sort_unstable();
    if labels != labels_c {
        return Err(Error::CheckFailed(format!(
            "complemented arc labels differ for k={k}, ell={ell}"
        )));
    }
    Ok(mapping)
}

/// Result of comparing length-`(k − ℓ)` walks of the Rauzy graph with the
/// arcs of the ℓ-Rauzy graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub k: usize,
    pub ell: usize,
    pub walk_count: usize,
    pub arc_count: usize,
    /// Spelled by a walk but not an arc label.
    pub spurious: Vec<Word>,
    /// Arc labels no walk spells.
    pub missing: Vec<Word>,
    /// Spelled by more than one walk.
    pub repeated: Vec<Word>,
}

impl PsiReport {
    pub fn is_bijection(&self) -> bool {
        self.walk_count == self.arc_count
            && self.spurious.is_empty()
            && self.missing.is_empty()
            && self.repeated.is_empty()
    }
}

pub const PSI_MAX_WALKS: usize = 1 << 20;

/// Enumerates every walk of `k − ℓ` arcs in the Rauzy graph of the
/// Fibonacci word and compares the spelled words, with multiplicity, to the
/// arc labels of the ℓ-Rauzy graph.
pub fn psi_bijection_check(k: usize, ell: usize) -> Result<PsiReport> {
    if ell == 0 || ell >= k {
        return Err(Error::OverlapRange { k, ell });
    }
    let len = 2 * k - ell;
    let w = Source::Fibonacci.prefix_for_factors(len)?;
    let rauzy = build_rauzy(&w, k)?;
    let target = build_l_rauzy(&w, k, ell)?;

    let mut out: Vec<Vec<(usize, crate::word::Symbol)>> = vec![Vec::new(); rauzy.vertex_count()];
    for a in rauzy.arcs() {
        out[a.from].push((a.to, a.label[k]));
    }
    let steps = k - ell;
    let mut spelled: BTreeMap<Word, usize> = BTreeMap::new();
    let mut walks = 0usize;
    let mut buf = Vec::with_capacity(len);
    for (start, v) in rauzy.vertices().iter().enumerate() {
        buf.clear();
        buf.extend_from_slice(v);
        walk(start, steps, &out, &mut buf, &mut |word| {
            walks += 1;
            *spelled.entry(Word::from(word)).or_insert(0) += 1;
            walks <= PSI_MAX_WALKS
        });
        if walks > PSI_MAX_WALKS {
            return Err(Error::SizeLimit {
                what: "Rauzy walk enumeration",
                limit: PSI_MAX_WALKS,
            });
        }
    }

    let labels: BTreeMap<Word, ()> = target.arcs().iter().map(|a| (a.label.clone(), ())).collect();
    let spurious = spelled.keys().filter(|w| !labels.contains_key(*w)).cloned().collect();
    let missing = labels.keys().filter(|w| !spelled.contains_key(*w)).cloned().collect();
    let repeated = spelled
        .iter()
        .filter(|(_, &c)| c > 1)
        .map(|(w, _)| w.clone())
        .collect();
    Ok(PsiReport {
        k,
        ell,
        walk_count: walks,
        arc_count: target.arc_count(),
        spurious,
        missing,
        repeated,
    })
}

fn walk(
    v: usize,
    steps: usize,
    out: &[Vec<(usize, crate::word::Symbol)>],
    buf: &mut Vec<crate::word::Symbol>,
    emit: &mut impl FnMut(&[crate::word::Symbol]) -> bool,
) -> bool {
    if steps == 0 {
        return emit(buf);
    }
    for &(to, s) in &out[v] {
        buf.push(s);
        let keep_going = walk(to, steps - 1, out, buf, emit);
        buf.pop();
        if !keep_going {
            return false;
        }
    }
    true
}
