//! Folded subgroup automata for finitely generated subgroups of free groups.
//!
//! A subgroup given by generator words becomes a wedge of labeled loops at a
//! base vertex; folding identifies vertices until no vertex carries two
//! equally labeled edges in the same direction, and trimming removes
//! non-base vertices of degree one. The result is the core automaton of the
//! subgroup: membership is a base-to-base trace, the rank is
//! `edges - vertices + 1`, and a spanning tree yields a free basis.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::word::{Alphabet, FreeWord, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StallingsError {
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Order in which pending edges are folded in. Folding is confluent, so the
/// choice only permutes intermediate states; both orders are deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldOrder {
    FirstInFirstOut,
    LastInFirstOut,
}

/// The folded core automaton of a finitely generated subgroup.
#[derive(Debug, Clone)]
pub struct SubgroupGraph {
    alphabet: Arc<Alphabet>,
    /// `out[v][g]` is the endpoint of the g-labeled edge leaving `v`.
    out: Vec<Vec<Option<usize>>>,
    /// `inn[v][g]` is the origin of the g-labeled edge entering `v`.
    inn: Vec<Vec<Option<usize>>>,
}

struct Folder {
    parent: Vec<usize>,
    out: Vec<BTreeMap<usize, usize>>,
    inn: Vec<BTreeMap<usize, usize>>,
    pending: VecDeque<(usize, usize, usize)>,
    order: FoldOrder,
}

impl Folder {
    fn new(order: FoldOrder) -> Folder {
        Folder {
            parent: vec![0],
            out: vec![BTreeMap::new()],
            inn: vec![BTreeMap::new()],
            pending: VecDeque::new(),
            order,
        }
    }

    fn fresh_vertex(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        self.out.push(BTreeMap::new());
        self.inn.push(BTreeMap::new());
        v
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Merges two root vertices; the loser's incident edges are re-queued and
    /// re-inserted against the surviving maps.
    fn union(&mut self, a: usize, b: usize) {
        let (winner, loser) = if a < b { (a, b) } else { (b, a) };
        self.parent[loser] = winner;
        for (g, v) in std::mem::take(&mut self.out[loser]) {
            self.pending.push_back((winner, g, v));
        }
        for (g, u) in std::mem::take(&mut self.inn[loser]) {
            self.pending.push_back((u, g, winner));
        }
    }

    fn next_pending(&mut self) -> Option<(usize, usize, usize)> {
        match self.order {
            FoldOrder::FirstInFirstOut => self.pending.pop_front(),
            FoldOrder::LastInFirstOut => self.pending.pop_back(),
        }
    }

    fn fold(&mut self) {
        while let Some((u, g, v)) = self.next_pending() {
            let u = self.find(u);
            let v = self.find(v);
            if let Some(&w) = self.out[u].get(&g) {
                let w = self.find(w);
                if w != v {
                    self.union(v, w);
                }
                continue;
            }
            if let Some(&t) = self.inn[v].get(&g) {
                let t = self.find(t);
                if t != u {
                    self.union(u, t);
                    let root = self.find(u);
                    self.pending.push_back((root, g, v));
                    continue;
                }
            }
            self.out[u].insert(g, v);
            self.inn[v].insert(g, u);
        }
    }

    /// Edge set over root vertices, deduplicated and canonicalized.
    fn edges(&mut self) -> Vec<(usize, usize, usize)> {
        let mut edges = Vec::new();
        for u in 0..self.parent.len() {
            if self.find(u) != u {
                continue;
            }
            let entries: Vec<(usize, usize)> = self.out[u].iter().map(|(&g, &v)| (g, v)).collect();
            for (g, v) in entries {
                let v = self.find(v);
                edges.push((u, g, v));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Whether the current edge set still violates determinism somewhere.
    fn violation(edges: &[(usize, usize, usize)]) -> bool {
        let mut seen_out = std::collections::HashSet::new();
        let mut seen_in = std::collections::HashSet::new();
        for &(u, g, v) in edges {
            if !seen_out.insert((u, g)) || !seen_in.insert((v, g)) {
                return true;
            }
        }
        false
    }
}

impl SubgroupGraph {
    /// Builds the folded core graph of the subgroup generated by the given
    /// reduced words, deterministically in their order.
    pub fn build(
        alphabet: &Arc<Alphabet>,
        generators: &[FreeWord],
    ) -> Result<SubgroupGraph, StallingsError> {
        SubgroupGraph::build_ordered(alphabet, generators, FoldOrder::FirstInFirstOut)
    }

    pub fn build_ordered(
        alphabet: &Arc<Alphabet>,
        generators: &[FreeWord],
        order: FoldOrder,
    ) -> Result<SubgroupGraph, StallingsError> {
        for w in generators {
            if w.alphabet() != alphabet {
                return Err(WordError::AlphabetMismatch.into());
            }
        }
        let mut folder = Folder::new(order);
        for w in generators {
            let letters: Vec<(usize, i8)> = w.letters().collect();
            let mut current = 0usize;
            for (i, &(g, sign)) in letters.iter().enumerate() {
                let target = if i + 1 == letters.len() {
                    0
                } else {
                    folder.fresh_vertex()
                };
                let (src, dst) = if sign > 0 {
                    (current, target)
                } else {
                    (target, current)
                };
                folder.pending.push_back((src, g, dst));
                current = target;
            }
        }
        // fold to a fixpoint; the verification sweep catches the rare case
        // where stale map entries survived a merge, and each re-pass strictly
        // shrinks the vertex set
        loop {
            folder.fold();
            let edges = folder.edges();
            if !Folder::violation(&edges) {
                break;
            }
            folder.pending.extend(edges);
            for u in 0..folder.parent.len() {
                if folder.find(u) == u {
                    folder.out[u].clear();
                    folder.inn[u].clear();
                }
            }
        }
        let base_root = folder.find(0);
        let edges = folder.edges();
        Ok(SubgroupGraph::assemble(alphabet, base_root, &edges))
    }

    /// Trims non-core hairs and renumbers vertices in trace order from the
    /// base (vertex 0 of the result).
    fn assemble(
        alphabet: &Arc<Alphabet>,
        base: usize,
        edges: &[(usize, usize, usize)],
    ) -> SubgroupGraph {
        let rank = alphabet.rank();
        let mut out_map: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
        let mut inn_map: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
        out_map.entry(base).or_default();
        inn_map.entry(base).or_default();
        for &(u, g, v) in edges {
            out_map.entry(u).or_default().insert(g, v);
            inn_map.entry(v).or_default().insert(g, u);
            out_map.entry(v).or_default();
            inn_map.entry(u).or_default();
        }
        // iteratively remove degree-<=1 non-base vertices
        let degree = |out_map: &BTreeMap<usize, BTreeMap<usize, usize>>,
                      inn_map: &BTreeMap<usize, BTreeMap<usize, usize>>,
                      v: usize| {
            out_map.get(&v).map_or(0, BTreeMap::len) + inn_map.get(&v).map_or(0, BTreeMap::len)
        };
        let mut queue: VecDeque<usize> = out_map
            .keys()
            .copied()
            .filter(|&v| v != base && degree(&out_map, &inn_map, v) <= 1)
            .collect();
        while let Some(v) = queue.pop_front() {
            if v == base || !out_map.contains_key(&v) {
                continue;
            }
            if degree(&out_map, &inn_map, v) > 1 {
                continue;
            }
            let outs: Vec<(usize, usize)> = out_map[&v].iter().map(|(&g, &w)| (g, w)).collect();
            let inns: Vec<(usize, usize)> = inn_map[&v].iter().map(|(&g, &u)| (g, u)).collect();
            for (g, w) in outs {
                inn_map.get_mut(&w).map(|m| m.remove(&g));
                if w != base && degree(&out_map, &inn_map, w) <= 1 {
                    queue.push_back(w);
                }
            }
            for (g, u) in inns {
                out_map.get_mut(&u).map(|m| m.remove(&g));
                if u != base && degree(&out_map, &inn_map, u) <= 1 {
                    queue.push_back(u);
                }
            }
            out_map.remove(&v);
            inn_map.remove(&v);
        }
        // renumber by trace order from the base
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        index.insert(base, 0);
        let mut order = vec![base];
        let mut bfs = VecDeque::from([base]);
        while let Some(v) = bfs.pop_front() {
            for g in 0..rank {
                for next in [out_map[&v].get(&g).copied(), inn_map[&v].get(&g).copied()]
                    .into_iter()
                    .flatten()
                {
                    if let std::collections::btree_map::Entry::Vacant(slot) = index.entry(next) {
                        slot.insert(order.len());
                        order.push(next);
                        bfs.push_back(next);
                    }
                }
            }
        }
        debug_assert_eq!(index.len(), out_map.len(), "folded graph is connected");
        let n = order.len();
        let mut out = vec![vec![None; rank]; n];
        let mut inn = vec![vec![None; rank]; n];
        for (&v, targets) in &out_map {
            for (&g, &w) in targets {
                out[index[&v]][g] = Some(index[&w]);
                inn[index[&w]][g] = Some(index[&v]);
            }
        }
        SubgroupGraph {
            alphabet: Arc::clone(alphabet),
            out,
            inn,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().flatten().filter(|e| e.is_some()).count()
    }

    /// Rank of the subgroup: `edges - vertices + 1` for the connected core.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Whether the word traces a base-to-base loop.
    pub fn contains(&self, w: &FreeWord) -> Result<bool, StallingsError> {
        if w.alphabet() != &self.alphabet {
            return Err(WordError::AlphabetMismatch.into());
        }
        let mut v = 0usize;
        for (g, sign) in w.letters() {
            let next = if sign > 0 {
                self.out[v][g]
            } else {
                self.inn[v][g]
            };
            match next {
                Some(w) => v = w,
                None => return Ok(false),
            }
        }
        Ok(v == 0)
    }

    /// The list of edges `(source, generator, target)` in vertex order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut edges = Vec::new();
        for (v, row) in self.out.iter().enumerate() {
            for (g, target) in row.iter().enumerate() {
                if let Some(w) = target {
                    edges.push((v, g, *w));
                }
            }
        }
        edges
    }

    /// A free basis of the subgroup: one loop word per non-tree edge of a
    /// spanning tree, each of the form `path(u) g path(v)^-1`.
    pub fn basis(&self) -> Vec<FreeWord> {
        let n = self.vertex_count();
        let mut tree_parent: Vec<Option<(usize, usize, i8)>> = vec![None; n];
        let mut visited = vec![false; n];
        visited[0] = true;
        let mut tree_edges = std::collections::HashSet::new();
        let mut bfs = VecDeque::from([0usize]);
        while let Some(v) = bfs.pop_front() {
            for g in 0..self.alphabet.rank() {
                if let Some(w) = self.out[v][g] {
                    if !visited[w] {
                        visited[w] = true;
                        tree_parent[w] = Some((v, g, 1));
                        tree_edges.insert((v, g, w));
                        bfs.push_back(w);
                    }
                }
                if let Some(u) = self.inn[v][g] {
                    if !visited[u] {
                        visited[u] = true;
                        tree_parent[u] = Some((v, g, -1));
                        tree_edges.insert((u, g, v));
                        bfs.push_back(u);
                    }
                }
            }
        }
        let path_to = |v: usize| -> FreeWord {
            let mut letters: Vec<(usize, i64)> = Vec::new();
            let mut cur = v;
            while let Some((parent, g, sign)) = tree_parent[cur] {
                letters.push((g, sign as i64));
                cur = parent;
            }
            letters.reverse();
            FreeWord::from_letters(&self.alphabet, letters).expect("indices in range")
        };
        let mut basis = Vec::new();
        for (u, g, v) in self.edges() {
            if tree_edges.contains(&(u, g, v)) {
                continue;
            }
            let g_word = FreeWord::generator(&self.alphabet, g).expect("index in range");
            let word = path_to(u)
                .concat_unchecked(&g_word)
                .concat_unchecked(&path_to(v).invert());
            basis.push(word);
        }
        basis
    }

    /// Base-point-preserving isomorphism test. Vertices are renumbered by
    /// deterministic trace order from the base, which is forced for folded
    /// automata, so equality of the renumbered edge lists decides.
    pub fn is_isomorphic(&self, other: &SubgroupGraph) -> bool {
        self.alphabet == other.alphabet
            && self.vertex_count() == other.vertex_count()
            && self.edges() == other.edges()
    }
}

/// Convenience: the family `{[a^n, b^m] : 0 < |n|, |m| <= limit}` over a
/// rank-2 alphabet, enumerated in lexicographic `(n, m)` order.
pub fn commutator_family(
    alphabet: &Arc<Alphabet>,
    limit: i64,
) -> Result<Vec<FreeWord>, StallingsError> {
    let a = FreeWord::generator(alphabet, 0).map_err(StallingsError::from)?;
    let b = FreeWord::generator(alphabet, 1).map_err(StallingsError::from)?;
    let mut family = Vec::new();
    for n in -limit..=limit {
        if n == 0 {
            continue;
        }
        for m in -limit..=limit {
            if m == 0 {
                continue;
            }
            let word = a
                .pow(&BigInt::from(n))
                .commutator(&b.pow(&BigInt::from(m)))
                .map_err(StallingsError::from)?;
            family.push(word);
        }
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn ab() -> Arc<Alphabet> {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn graph(alphabet: &Arc<Alphabet>, gens: &[&str]) -> SubgroupGraph {
        let words: Vec<FreeWord> = gens.iter().map(|t| parse(t, alphabet).unwrap()).collect();
        SubgroupGraph::build(alphabet, &words).unwrap()
    }

    #[test]
    fn single_generator_loop() {
        let a = ab();
        let g = graph(&a, &["a"]);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.rank(), 1);
        assert!(g.contains(&parse("a^5", &a).unwrap()).unwrap());
        assert!(!g.contains(&parse("b", &a).unwrap()).unwrap());
        assert_eq!(g.basis(), vec![parse("a", &a).unwrap()]);
    }

    #[test]
    fn empty_generating_set() {
        let a = ab();
        let g = SubgroupGraph::build(&a, &[]).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.rank(), 0);
        assert!(g.contains(&FreeWord::neutral(&a)).unwrap());
        assert!(!g.contains(&parse("a", &a).unwrap()).unwrap());
        assert!(g.basis().is_empty());
    }

    #[test]
    fn commutator_core_is_a_four_cycle() {
        let a = ab();
        let g = graph(&a, &["[a,b]"]);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.rank(), 1);
        assert!(g.contains(&parse("[a,b]^3", &a).unwrap()).unwrap());
        assert!(!g.contains(&parse("[a,b] a", &a).unwrap()).unwrap());
    }

    #[test]
    fn conjugate_generator_keeps_hair_to_base() {
        let a = ab();
        let g = graph(&a, &["a b a^-1"]);
        // base hair into a b-loop
        assert_eq!(g.rank(), 1);
        assert!(g.contains(&parse("a b^4 a^-1", &a).unwrap()).unwrap());
        assert!(!g.contains(&parse("b", &a).unwrap()).unwrap());
    }

    #[test]
    fn two_commutators_fold_to_rank_two() {
        let a = ab();
        let g = graph(&a, &["[a,b]", "[a^2,b^2]"]);
        assert_eq!(g.rank(), 2);
        assert!(!g.contains(&parse("b", &a).unwrap()).unwrap());
        assert!(g.contains(&parse("[a,b] [a^2,b^2]", &a).unwrap()).unwrap());
    }

    #[test]
    fn commutator_family_ranks() {
        let a = ab();
        for limit in [1i64, 2] {
            let family = commutator_family(&a, limit).unwrap();
            assert_eq!(family.len(), (2 * limit as usize).pow(2));
            let g = SubgroupGraph::build(&a, &family).unwrap();
            assert_eq!(g.rank(), family.len(), "limit {limit}");
            for w in &family {
                assert!(g.contains(w).unwrap());
            }
        }
    }

    #[test]
    fn rank_never_exceeds_generator_count() {
        let a = ab();
        let gens = ["[a,b]", "[a,b]^2", "a b a", "b a b^-1", "a^3"];
        let words: Vec<FreeWord> = gens.iter().map(|t| parse(t, &a).unwrap()).collect();
        let g = SubgroupGraph::build(&a, &words).unwrap();
        assert!(g.rank() <= words.len());
        for w in &words {
            assert!(g.contains(w).unwrap());
        }
    }

    #[test]
    fn basis_regenerates_isomorphic_graph() {
        let a = ab();
        let g = graph(&a, &["[a,b]", "[a^2,b^2]", "a b a"]);
        let basis = g.basis();
        assert_eq!(basis.len(), g.rank());
        for w in &basis {
            assert!(g.contains(w).unwrap());
        }
        let rebuilt = SubgroupGraph::build(&a, &basis).unwrap();
        assert!(g.is_isomorphic(&rebuilt));
    }

    #[test]
    fn basis_of_single_commutator() {
        let a = ab();
        let g = graph(&a, &["[a,b]"]);
        let basis = g.basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].letter_len(), 4u32.into());
        assert!(g.contains(&basis[0]).unwrap());
    }

    #[test]
    fn fold_orders_agree() {
        let a = ab();
        let gens = ["[a,b]", "[a^2,b^2]", "a b a^-1 b"];
        let words: Vec<FreeWord> = gens.iter().map(|t| parse(t, &a).unwrap()).collect();
        let fifo = SubgroupGraph::build_ordered(&a, &words, FoldOrder::FirstInFirstOut).unwrap();
        let lifo = SubgroupGraph::build_ordered(&a, &words, FoldOrder::LastInFirstOut).unwrap();
        assert!(fifo.is_isomorphic(&lifo));
    }

    #[test]
    fn whole_group_membership() {
        let a = ab();
        let g = graph(&a, &["a", "b"]);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.rank(), 2);
        assert!(g.contains(&parse("[a,b] b a^-5", &a).unwrap()).unwrap());
    }
}
