//! de Bruijn, Rauzy, half-range Rauzy and ℓ-Rauzy graphs.
//!
//! Vertices are the length-`k` factors of a prefix in first-occurrence
//! order. Every arc carries the word it spells: the source followed by the
//! part of the target beyond the shared overlap.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{factors, Symbol, Word, WordPrefix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HrrVariant {
    Even,
    OddI,
    OddII,
}

impl HrrVariant {
    pub fn name(self) -> &'static str {
        match self {
            HrrVariant::Even => "even",
            HrrVariant::OddI => "odd-I",
            HrrVariant::OddII => "odd-II",
        }
    }

    /// Number of letters a source shares with its target.
    pub fn overlap(self, k: usize) -> usize {
        match self {
            HrrVariant::Even => k / 2,
            HrrVariant::OddI => k.div_ceil(2),
            HrrVariant::OddII => k / 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    DeBruijn,
    Rauzy,
    LRauzy,
    HalfRange(HrrVariant),
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::DeBruijn => f.write_str("de-bruijn"),
            GraphKind::Rauzy => f.write_str("rauzy"),
            GraphKind::LRauzy => f.write_str("l-rauzy"),
            GraphKind::HalfRange(v) => write!(f, "half-range-{}", v.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub label: Word,
}

/// A directed multigraph on words. Loops are allowed; parallel arcs are
/// allowed as long as their labels differ.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    kind: GraphKind,
    k: usize,
    ell: usize,
    vertices: Vec<Word>,
    arcs: Vec<Arc>,
}

impl DirectedGraph {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Vertex length.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Overlap between the two endpoints of an arc.
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn label_len(&self) -> usize {
        2 * self.k - self.ell
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertex_index(&self, u: &[Symbol]) -> Option<usize> {
        self.vertices.iter().position(|v| v.symbols() == u)
    }

    /// Out-neighbour lists, one entry per arc.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for a in &self.arcs {
            adj[a.from].push(a.to);
        }
        adj
    }

    /// Arcs as 1-based `(from, to)` pairs, sorted.
    pub fn index_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<_> = self.arcs.iter().map(|a| (a.from + 1, a.to + 1)).collect();
        pairs.sort_unstable();
        pairs
    }

    /// Same vertex labels and same labeled arcs, ignoring order and kind.
    pub fn same_labeled_graph(&self, other: &DirectedGraph) -> bool {
        let vs = |g: &DirectedGraph| g.vertices.iter().cloned().collect::<BTreeSet<_>>();
        let es = |g: &DirectedGraph| {
            g.arcs
                .iter()
                .map(|a| (g.vertices[a.from].clone(), g.vertices[a.to].clone(), a.label.clone()))
                .collect::<BTreeSet<_>>()
        };
        self.vertices.len() == other.vertices.len()
            && self.arcs.len() == other.arcs.len()
            && vs(self) == vs(other)
            && es(self) == es(other)
    }
}

#[cfg(test)]
impl DirectedGraph {
    /// Unlabeled graph on `n` vertices for structural tests. Vertex and arc
    /// words are binary encodings of their indices.
    pub(crate) fn from_index_arcs(n: usize, arcs: &[(usize, usize)]) -> Self {
        let bits = |x: usize, width: usize| {
            Word::new(
                (0..width)
                    .rev()
                    .map(|b| if x >> b & 1 == 1 { Symbol::One } else { Symbol::Zero })
                    .collect(),
            )
        };
        DirectedGraph {
            kind: GraphKind::LRauzy,
            k: 16,
            ell: 1,
            vertices: (0..n).map(|v| bits(v, 16)).collect(),
            arcs: arcs
                .iter()
                .enumerate()
                .map(|(i, &(from, to))| Arc {
                    from,
                    to,
                    label: bits(i, 31),
                })
                .collect(),
        }
    }
}

fn check_overlap(k: usize, ell: usize) -> Result<()> {
    if ell == 0 || ell >= k {
        return Err(Error::OverlapRange { k, ell });
    }
    Ok(())
}

/// ℓ-Rauzy graph of order `k`. Each factor of length `2k − ℓ` yields the arc
/// from its length-`k` prefix to its length-`k` suffix, which overlap in
/// exactly `ℓ` letters.
pub fn build_l_rauzy(w: &WordPrefix, k: usize, ell: usize) -> Result<DirectedGraph> {
    check_overlap(k, ell)?;
    let label_len = 2 * k - ell;
    w.ensure_covers(label_len)?;
    let vertices = factors(w, k)?;
    let labels = factors(w, label_len)?;
    let arcs = labels
        .factors()
        .iter()
        .map(|label| {
            let from = vertices.index_of(&label[..k]).expect("prefix of a factor is a factor");
            let to = vertices
                .index_of(&label[label_len - k..])
                .expect("suffix of a factor is a factor");
            Arc {
                from,
                to,
                label: label.clone(),
            }
        })
        .collect();
    Ok(DirectedGraph {
        kind: GraphKind::LRauzy,
        k,
        ell,
        vertices: vertices.factors().to_vec(),
        arcs,
    })
}

/// Pairs `(u, v)` whose `overlap`-suffix/prefix agree and whose spelled word
/// lies in `language`, scanned source by source.
fn overlap_arcs(vertices: &[Word], overlap: usize, language: Option<&HashSet<&[Symbol]>>) -> Vec<Arc> {
    let k = vertices.first().map_or(0, |v| v.len());
    let mut by_prefix: HashMap<&[Symbol], Vec<usize>> = HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        by_prefix.entry(&v[..overlap]).or_default().push(i);
    }
    let mut arcs = Vec::new();
    for (from, u) in vertices.iter().enumerate() {
        let Some(targets) = by_prefix.get(&u[k - overlap..]) else {
            continue;
        };
        for &to in targets {
            let mut label = u.to_vec();
            label.extend_from_slice(&vertices[to][overlap..]);
            if language.is_none_or(|l| l.contains(label.as_slice())) {
                arcs.push(Arc {
                    from,
                    to,
                    label: Word::new(label),
                });
            }
        }
    }
    arcs
}

/// Language of length-`len` factors of a prefix, as a set of windows.
fn language(w: &WordPrefix, len: usize) -> HashSet<&[Symbol]> {
    w.symbols().windows(len).collect()
}

/// Classic Rauzy graph: `u → v` iff `u[2..k] = v[1..k−1]` and `u·v_k` is a
/// factor.
pub fn build_rauzy(w: &WordPrefix, k: usize) -> Result<DirectedGraph> {
    if k == 0 {
        return Err(Error::OrderRange {
            k,
            reason: "Rauzy graphs need k >= 1",
        });
    }
    w.ensure_covers(k + 1)?;
    let vertices = factors(w, k)?.factors().to_vec();
    let lang = language(w, k + 1);
    let arcs = overlap_arcs(&vertices, k - 1, Some(&lang));
    Ok(DirectedGraph {
        kind: GraphKind::Rauzy,
        k,
        ell: k - 1,
        vertices,
        arcs,
    })
}

/// Half-range Rauzy graph, following the even / odd type I / odd type II
/// cases directly: the endpoints share `k/2`, `(k+1)/2` or `(k−1)/2`
/// letters and the spelled word must be a factor.
pub fn build_hrr(w: &WordPrefix, k: usize, variant: HrrVariant) -> Result<DirectedGraph> {
    let parity_ok = match variant {
        HrrVariant::Even => k.is_multiple_of(2),
        HrrVariant::OddI | HrrVariant::OddII => k % 2 == 1,
    };
    if !parity_ok {
        return Err(Error::VariantParity {
            variant: variant.name(),
            k,
        });
    }
    if k < 2 {
        return Err(Error::OrderRange {
            k,
            reason: "half-range Rauzy graphs need k > 1",
        });
    }
    let overlap = variant.overlap(k);
    let label_len = 2 * k - overlap;
    w.ensure_covers(label_len)?;
    let vertices = factors(w, k)?.factors().to_vec();
    let lang = language(w, label_len);
    let arcs = overlap_arcs(&vertices, overlap, Some(&lang));
    Ok(DirectedGraph {
        kind: GraphKind::HalfRange(variant),
        k,
        ell: overlap,
        vertices,
        arcs,
    })
}

pub const DE_BRUIJN_MAX_ORDER: usize = 20;

/// de Bruijn graph on all `2^k` binary words, in lexicographic order.
pub fn build_debruijn(k: usize) -> Result<DirectedGraph> {
    if k < 2 {
        return Err(Error::OrderRange {
            k,
            reason: "de Bruijn graphs need k > 1",
        });
    }
    if k > DE_BRUIJN_MAX_ORDER {
        return Err(Error::SizeLimit {
            what: "de Bruijn order",
            limit: DE_BRUIJN_MAX_ORDER,
        });
    }
    let vertices: Vec<Word> = (0..1usize << k)
        .map(|bits| {
            Word::new(
                (0..k)
                    .rev()
                    .map(|b| if bits >> b & 1 == 1 { Symbol::One } else { Symbol::Zero })
                    .collect(),
            )
        })
        .collect();
    let arcs = overlap_arcs(&vertices, k - 1, None);
    Ok(DirectedGraph {
        kind: GraphKind::DeBruijn,
        k,
        ell: k - 1,
        vertices,
        arcs,
    })
}
