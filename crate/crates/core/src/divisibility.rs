//! Divisible classes supported on ADE configurations and the obstructions
//! they impose on a K3 surface.
//!
//! A candidate is a class `(1/p) sum c_i C_i` with integral pairing against
//! every curve of the configuration:
//!
//! * `p = 2`: `c_i` in `{0, 1}`, the support is 8 or 16 pairwise disjoint
//!   curves (an even set);
//! * `p = 3`: the support is 6 or 9 pairwise disjoint `A_2` chains carrying
//!   the coefficients `1, 2` in some orientation.
//!
//! Candidates are stored as packed coefficient words so that `F_p`-linear
//! arguments (how many independent divisible classes fit on a set of curves)
//! reduce to bit operations.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ade::{AdeConfig, Component, DynkinGraph};
use crate::lattice::{rational_to_string, RationalVector};

/// Coefficient vector over `F_2` or `F_3`, one bit position per curve.
/// Position `i` holds 1 if bit `i` of `ones` is set, 2 if bit `i` of `twos`
/// is set, and 0 otherwise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpWord {
    pub ones: u64,
    pub twos: u64,
}

impl FpWord {
    pub fn is_zero(&self) -> bool {
        self.ones == 0 && self.twos == 0
    }

    pub fn support(&self) -> u64 {
        self.ones | self.twos
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn add(&self, other: &FpWord, p: u32) -> FpWord {
        match p {
            2 => FpWord { ones: self.ones ^ other.ones, twos: 0 },
            3 => {
                let (a1, a2, b1, b2) = (self.ones, self.twos, other.ones, other.twos);
                let a0 = !(a1 | a2);
                let b0 = !(b1 | b2);
                FpWord {
                    ones: (a0 & b1) | (a1 & b0) | (a2 & b2),
                    twos: (a0 & b2) | (a2 & b0) | (a1 & b1),
                }
            }
            _ => panic!("unsupported prime {p}"),
        }
    }

    /// `k * self` for `k` in `1..p`.
    pub fn scale(&self, k: u32, p: u32) -> FpWord {
        match (p, k % p) {
            (_, 0) => FpWord::default(),
            (_, 1) => *self,
            (3, 2) => FpWord { ones: self.twos, twos: self.ones },
            _ => panic!("unsupported scalar {k} mod {p}"),
        }
    }

    /// Representative of the line `F_p^* self`: the multiple whose lowest
    /// nonzero coefficient is 1.
    pub fn normalized(&self, p: u32) -> FpWord {
        let low = self.support() & self.support().wrapping_neg();
        if self.twos & low != 0 {
            self.scale(2, p)
        } else {
            *self
        }
    }

    pub fn coefficient(&self, i: usize) -> u8 {
        if self.ones >> i & 1 == 1 {
            1
        } else if self.twos >> i & 1 == 1 {
            2
        } else {
            0
        }
    }

    pub fn coefficients(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.coefficient(i)).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisibilityError {
    #[error("configuration has {0} curves; at most 64 are supported")]
    TooManyCurves(usize),
    #[error("candidate is not an even set on this configuration: {0}")]
    NotAnEvenSet(String),
    #[error("curve {curve} meets {count} branch curves; only 0 or 2 are supported")]
    NonReducedIntersection { curve: String, count: usize },
    #[error("configuration after contraction is not ADE: {0}")]
    NotADEAfterContraction(String),
}

/// A divisible class `(1/p) sum c_i C_i` on a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisibleCandidate {
    pub prime: u32,
    pub word: FpWord,
    /// Number of curves of the configuration.
    pub len: usize,
}

impl DivisibleCandidate {
    pub fn coefficients(&self) -> Vec<u8> {
        self.word.coefficients(self.len)
    }

    /// Curve indices carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.word.support() >> i & 1 == 1).collect()
    }

    /// Number of curves for `p = 2`, number of `A_2` chains for `p = 3`.
    pub fn size(&self) -> usize {
        let w = self.word.weight() as usize;
        if self.prime == 3 {
            w / 2
        } else {
            w
        }
    }

    /// `(coefficient-1 curve, coefficient-2 curve)` for each `A_2` of a
    /// 3-divisible candidate.
    pub fn oriented_pairs(&self, graph: &DynkinGraph) -> Vec<(usize, usize)> {
        let neighbors = graph.neighbors();
        (0..self.len)
            .filter(|&i| self.word.coefficient(i) == 1)
            .filter_map(|i| {
                neighbors[i].iter().find(|&&j| self.word.coefficient(j) == 2).map(|&j| (i, j))
            })
            .collect()
    }

    /// The class `(1/p) sum c_i C_i` in curve coordinates.
    pub fn class_vector(&self) -> RationalVector {
        let p = BigInt::from(self.prime);
        RationalVector(
            self.coefficients()
                .into_iter()
                .map(|c| BigRational::new(BigInt::from(c), p.clone()))
                .collect(),
        )
    }

    pub fn support_labels(&self, graph: &DynkinGraph) -> Vec<String> {
        if self.prime == 3 {
            self.oriented_pairs(graph)
                .into_iter()
                .map(|(a, b)| format!("{}+2*{}", graph.nodes[a], graph.nodes[b]))
                .collect()
        } else {
            self.support().into_iter().map(|i| graph.nodes[i].clone()).collect()
        }
    }
}

/// Integral pairing test `G c = 0 mod p` on a Dynkin graph.
fn pairs_integrally(graph_adj: &[u64], word: &FpWord, p: u32) -> bool {
    (0..graph_adj.len()).all(|v| {
        // (C_v . sum c_i C_i) = -2 c_v + sum over neighbours, and -2 = 1 mod 3;
        // mod 2 the diagonal term vanishes
        let nbr = graph_adj[v];
        let mut total = (word.ones & nbr).count_ones() + 2 * (word.twos & nbr).count_ones();
        if p == 3 {
            total += word.coefficient(v) as u32;
        }
        total.is_multiple_of(p)
    })
}

fn adjacency(graph: &DynkinGraph) -> Result<Vec<u64>, DivisibilityError> {
    let n = graph.node_count();
    if n > 64 {
        return Err(DivisibilityError::TooManyCurves(n));
    }
    let mut adj = vec![0u64; n];
    for &(a, b) in &graph.edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    Ok(adj)
}

/// Local patterns of one block, shifted to global positions, with their size.
fn even_block_patterns(component: Component, start: usize) -> Vec<(FpWord, usize)> {
    let local = AdeConfig::from_components(&[(component, 1)]).dynkin();
    let adj = adjacency(&local).expect("single block is small");
    crate::ade::component_independent_sets(component)
        .into_iter()
        .map(|s| FpWord { ones: s, twos: 0 })
        .filter(|w| pairs_integrally(&adj, w, 2))
        .map(|w| (FpWord { ones: w.ones << start, twos: 0 }, w.weight() as usize))
        .collect()
}

fn three_block_patterns(component: Component, start: usize) -> Vec<(FpWord, usize)> {
    let local = AdeConfig::from_components(&[(component, 1)]).dynkin();
    let adj = adjacency(&local).expect("single block is small");
    let edges = component.edges();
    let mut matchings: Vec<Vec<(usize, usize)>> = Vec::new();
    // induced matchings: chosen edges share no vertex and no edge joins them
    fn rec(
        k: usize,
        edges: &[(usize, usize)],
        adj: &[u64],
        used: u64,
        chosen: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if k == edges.len() {
            out.push(chosen.clone());
            return;
        }
        rec(k + 1, edges, adj, used, chosen, out);
        let (a, b) = edges[k];
        let pair = 1u64 << a | 1u64 << b;
        let closed = pair | adj[a] | adj[b];
        if used & closed == 0 {
            chosen.push((a, b));
            rec(k + 1, edges, adj, used | pair, chosen, out);
            chosen.pop();
        }
    }
    rec(0, &edges, &adj, 0, &mut Vec::new(), &mut matchings);

    let mut out = Vec::new();
    for m in matchings {
        for orient in 0u64..1 << m.len() {
            let mut w = FpWord::default();
            for (k, &(a, b)) in m.iter().enumerate() {
                let (one, two) = if orient >> k & 1 == 0 { (a, b) } else { (b, a) };
                w.ones |= 1 << one;
                w.twos |= 1 << two;
            }
            if pairs_integrally(&adj, &w, 3) {
                out.push((FpWord { ones: w.ones << start, twos: w.twos << start }, m.len()));
            }
        }
    }
    out
}

/// Combine per-block patterns into global words whose total size is allowed.
fn combine_blocks(blocks: &[Vec<(FpWord, usize)>], sizes: &[usize]) -> Vec<FpWord> {
    let max = *sizes.iter().max().unwrap_or(&0);
    let mut out = Vec::new();
    fn rec(
        k: usize,
        blocks: &[Vec<(FpWord, usize)>],
        sizes: &[usize],
        max: usize,
        acc: FpWord,
        size: usize,
        out: &mut Vec<FpWord>,
    ) {
        if k == blocks.len() {
            if sizes.contains(&size) {
                out.push(acc);
            }
            return;
        }
        for &(w, s) in &blocks[k] {
            if size + s <= max {
                let next = FpWord { ones: acc.ones | w.ones, twos: acc.twos | w.twos };
                rec(k + 1, blocks, sizes, max, next, size + s, out);
            }
        }
    }
    rec(0, blocks, sizes, max, FpWord::default(), 0, &mut out);
    out.sort();
    out
}

fn candidates_for(config: &AdeConfig, prime: u32) -> Result<Vec<DivisibleCandidate>, DivisibilityError> {
    let graph = config.dynkin();
    let adj = adjacency(&graph)?;
    let len = graph.node_count();
    let blocks: Vec<Vec<(FpWord, usize)>> = graph
        .blocks
        .iter()
        .map(|b| match prime {
            2 => even_block_patterns(b.component, b.start),
            _ => three_block_patterns(b.component, b.start),
        })
        .collect();
    let sizes: &[usize] = if prime == 2 { &[8, 16] } else { &[6, 9] };
    let mut words = combine_blocks(&blocks, sizes);
    if prime == 3 {
        words.retain(|w| w.normalized(3) == *w);
    }
    debug_assert!(words.iter().all(|w| pairs_integrally(&adj, w, prime)));
    Ok(words.into_iter().map(|word| DivisibleCandidate { prime, word, len }).collect())
}

/// All even-set candidates: 8 or 16 disjoint curves whose half-sum pairs
/// integrally with every curve.
pub fn even_set_candidates(config: &AdeConfig) -> Result<Vec<DivisibleCandidate>, DivisibilityError> {
    candidates_for(config, 2)
}

/// All 3-divisible candidates on 6 or 9 disjoint `A_2` chains, one per pair
/// `{D, 2D}` (the stored orientation has coefficient 1 on the lowest curve).
pub fn three_divisible_candidates(
    config: &AdeConfig,
) -> Result<Vec<DivisibleCandidate>, DivisibilityError> {
    candidates_for(config, 3)
}

/// Independent even sets forced on `r` disjoint curves: `max(0, r - 11)`.
pub fn required_for_disjoint(r: usize) -> usize {
    r.saturating_sub(11)
}

/// Independent even sets forced by a largest set of disjoint curves.
pub fn required_even_sets(config: &AdeConfig) -> usize {
    required_for_disjoint(config.max_disjoint_curves().0)
}

/// Largest `F_p`-subspace all of whose nonzero vectors are candidates.
///
/// `candidates` holds one representative per line; membership is tested up
/// to scalars. The search stops early once `target` dimensions are reached.
/// Returns a basis.
pub fn max_closed_subspace(candidates: &[FpWord], p: u32, target: Option<usize>) -> Vec<FpWord> {
    max_closed_subspace_with_symmetry(candidates, p, target, &[])
}

/// [`max_closed_subspace`] using node permutations that map the candidate set
/// to itself: the first basis vector then only runs over orbit
/// representatives. Permutations that do not preserve the set are ignored.
pub fn max_closed_subspace_with_symmetry(
    candidates: &[FpWord],
    p: u32,
    target: Option<usize>,
    symmetries: &[Vec<usize>],
) -> Vec<FpWord> {
    let mut reps: Vec<FpWord> = candidates.iter().map(|w| w.normalized(p)).collect();
    reps.sort();
    reps.dedup();
    if reps.is_empty() {
        return Vec::new();
    }
    let members: HashSet<FpWord> =
        reps.iter().flat_map(|w| (1..p).map(move |k| w.scale(k, p))).collect();
    let index: HashMap<FpWord, usize> = reps.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let perms: Vec<&Vec<usize>> = symmetries
        .iter()
        .filter(|perm| reps.iter().all(|w| index.contains_key(&permute(w, perm).normalized(p))))
        .collect();

    // orbits of lines under the permutations
    let mut orbit_rep: Vec<usize> = (0..reps.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for perm in &perms {
        for i in 0..reps.len() {
            let j = index[&permute(&reps[i], perm).normalized(p)];
            let (a, b) = (find(&mut orbit_rep, i), find(&mut orbit_rep, j));
            if a != b {
                orbit_rep[a.max(b)] = a.min(b);
            }
        }
    }
    let firsts: Vec<usize> = (0..reps.len()).filter(|&i| find(&mut orbit_rep, i) == i).collect();

    let min_weight = reps.iter().map(FpWord::weight).min().unwrap_or(0) as u128;
    let mut search = Search {
        p,
        reps: &reps,
        members: &members,
        target: target.unwrap_or(usize::MAX),
        min_weight,
        best: Vec::new(),
    };
    for &first in &firsts {
        let d = reps[first];
        let span: Vec<FpWord> =
            std::iter::once(FpWord::default()).chain((1..p).map(|a| d.scale(a, p))).collect();
        let compat: Vec<usize> = (0..reps.len())
            .filter(|&j| j != first)
            .filter(|&j| span[1..].iter().all(|s| members.contains(&s.add(&reps[j], p))))
            .collect();
        if search.run(&span, &mut vec![d], &compat) {
            break;
        }
    }
    search.best
}

fn permute(w: &FpWord, perm: &[usize]) -> FpWord {
    let map = |bits: u64| {
        let mut out = 0u64;
        let mut rest = bits;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out |= 1 << perm[i];
            rest &= rest - 1;
        }
        out
    };
    FpWord { ones: map(w.ones), twos: map(w.twos) }
}

struct Search<'a> {
    p: u32,
    reps: &'a [FpWord],
    members: &'a HashSet<FpWord>,
    target: usize,
    min_weight: u128,
    best: Vec<FpWord>,
}

impl Search<'_> {
    /// Lines of a `(dim + t)`-space lying outside a fixed `dim`-subspace.
    fn lines_needed(&self, dim: usize, t: usize) -> usize {
        let p = self.p as usize;
        let span = p.saturating_pow(dim as u32);
        let ext = p.saturating_pow(t as u32);
        span.saturating_mul(ext - 1) / (p - 1)
    }

    /// Every coordinate in the support of a `g`-dimensional code is nonzero in
    /// exactly `(p-1) p^(g-1)` codewords, so the support must have at least
    /// `w_min (p^g - 1) / ((p-1) p^(g-1))` coordinates.
    fn support_suffices(&self, support: u32, goal: usize) -> bool {
        let p = self.p as u128;
        let g = goal as u32;
        if g == 0 || g > 40 {
            return g == 0;
        }
        support as u128 * (p - 1) * p.pow(g - 1) >= self.min_weight * (p.pow(g) - 1)
    }

    fn run(&mut self, span: &[FpWord], basis: &mut Vec<FpWord>, compat: &[usize]) -> bool {
        if basis.len() > self.best.len() {
            self.best = basis.clone();
        }
        if basis.len() >= self.target {
            return true;
        }
        let goal = self.best.len() + 1;
        let t = goal - basis.len();
        let needed = self.lines_needed(basis.len(), t);
        let span_support = basis.iter().fold(0u64, |acc, w| acc | w.support());
        let mut suffix = vec![0u64; compat.len() + 1];
        for k in (0..compat.len()).rev() {
            suffix[k] = suffix[k + 1] | self.reps[compat[k]].support();
        }
        for (k, &i) in compat.iter().enumerate() {
            // the next basis vector is the lowest line of the subspace outside
            // the current span, so every later line comes after it
            if compat.len() - k < needed {
                break;
            }
            if !self.support_suffices((span_support | suffix[k]).count_ones(), goal) {
                break;
            }
            let d = self.reps[i];
            let mut added = Vec::with_capacity(span.len() * (self.p as usize - 1));
            for s in span {
                for a in 1..self.p {
                    added.push(s.add(&d.scale(a, self.p), self.p));
                }
            }
            let next: Vec<usize> = compat[k + 1..]
                .iter()
                .copied()
                .filter(|&j| {
                    let e = self.reps[j];
                    added.iter().all(|s| self.members.contains(&s.add(&e, self.p)))
                })
                .collect();
            let mut new_span = span.to_vec();
            new_span.extend(added);
            basis.push(d);
            let done = self.run(&new_span, basis, &next);
            basis.pop();
            if done {
                return true;
            }
        }
        false
    }
}

/// Configuration on the double cover branched along an even set, after
/// contracting the (-1)-curves over the branch curves.
pub fn double_cover_transform(
    config: &AdeConfig,
    even_set: &DivisibleCandidate,
) -> Result<AdeConfig, DivisibilityError> {
    let graph = config.dynkin();
    let adj = adjacency(&graph)?;
    let n = graph.node_count();
    if even_set.prime != 2 || even_set.len != n || !pairs_integrally(&adj, &even_set.word, 2) {
        return Err(DivisibilityError::NotAnEvenSet(format!("{:?}", even_set.support())));
    }
    let branch = even_set.word.ones;
    if (0..n).any(|v| branch >> v & 1 == 1 && adj[v] & branch != 0) {
        return Err(DivisibilityError::NotAnEvenSet("branch curves are not disjoint".into()));
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Kind {
        Branch,
        Split,
        Meets,
    }
    let mut kind = vec![Kind::Split; n];
    for v in 0..n {
        let hits = (adj[v] & branch).count_ones() as usize;
        kind[v] = if branch >> v & 1 == 1 {
            Kind::Branch
        } else if hits == 0 {
            Kind::Split
        } else if hits == 2 {
            Kind::Meets
        } else {
            return Err(DivisibilityError::NonReducedIntersection {
                curve: graph.nodes[v].clone(),
                count: hits,
            });
        };
    }

    // preimage curves: index lists per original curve
    let mut pre: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut self_int: Vec<i64> = Vec::new();
    for v in 0..n {
        let copies = match kind[v] {
            Kind::Split => 2,
            _ => 1,
        };
        for _ in 0..copies {
            pre[v].push(self_int.len());
            self_int.push(match kind[v] {
                Kind::Branch => -1,
                Kind::Split => -2,
                Kind::Meets => -4,
            });
        }
    }
    let m = self_int.len();
    let mut gram = vec![vec![0i64; m]; m];
    for (i, s) in self_int.iter().enumerate() {
        gram[i][i] = *s;
    }
    for &(a, b) in &graph.edges {
        let pairs: Vec<(usize, usize)> = match (kind[a], kind[b]) {
            (Kind::Branch, Kind::Branch) => unreachable!("branch curves are disjoint"),
            (Kind::Branch, Kind::Meets) | (Kind::Meets, Kind::Branch) => vec![(pre[a][0], pre[b][0])],
            (Kind::Branch, Kind::Split) | (Kind::Split, Kind::Branch) => {
                unreachable!("split curves miss the branch locus")
            }
            // the cover is trivial over a tree of split curves: sheets match
            (Kind::Split, Kind::Split) => vec![(pre[a][0], pre[b][0]), (pre[a][1], pre[b][1])],
            (Kind::Split, Kind::Meets) => vec![(pre[a][0], pre[b][0]), (pre[a][1], pre[b][0])],
            (Kind::Meets, Kind::Split) => vec![(pre[a][0], pre[b][0]), (pre[a][0], pre[b][1])],
            (Kind::Meets, Kind::Meets) => {
                return Err(DivisibilityError::NonReducedIntersection {
                    curve: graph.nodes[a].clone(),
                    count: 2,
                })
            }
        };
        for (x, y) in pairs {
            gram[x][y] += 1;
            gram[y][x] += 1;
        }
    }

    let gram = contract_minus_one_curves(gram);
    classify_ade(&gram)
}

/// Repeatedly blow down (-1)-curves: `C.D += (C.E)(D.E)`.
fn contract_minus_one_curves(mut gram: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    while let Some(e) = (0..gram.len()).find(|&i| gram[i][i] == -1) {
        let m = gram.len();
        for c in 0..m {
            for d in 0..m {
                if c != e && d != e {
                    gram[c][d] += gram[c][e] * gram[d][e];
                }
            }
        }
        gram.remove(e);
        for row in &mut gram {
            row.remove(e);
        }
    }
    gram
}

/// Reads off the ADE type of a configuration of (-2)-curves.
pub fn classify_ade(gram: &[Vec<i64>]) -> Result<AdeConfig, DivisibilityError> {
    let n = gram.len();
    let fail = |msg: String| Err(DivisibilityError::NotADEAfterContraction(msg));
    for (i, row) in gram.iter().enumerate() {
        if row[i] != -2 {
            return fail(format!("curve {i} has self-intersection {}", row[i]));
        }
        for (j, &m) in row.iter().enumerate() {
            if i != j && !(0..=1).contains(&m) {
                return fail(format!("curves {i} and {j} meet with multiplicity {m}"));
            }
        }
    }
    let neighbors: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| j != i && gram[i][j] == 1).collect()).collect();
    let mut seen = vec![false; n];
    let mut config = AdeConfig::empty();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            for &w in &neighbors[comp[k]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            k += 1;
        }
        let edges: usize = comp.iter().map(|&v| neighbors[v].len()).sum::<usize>() / 2;
        if edges + 1 != comp.len() {
            return fail(format!("component of {} curves contains a cycle", comp.len()));
        }
        let branch: Vec<usize> = comp.iter().copied().filter(|&v| neighbors[v].len() >= 3).collect();
        let size = comp.len() as u32;
        let component = match branch.as_slice() {
            [] => Component::a(size),
            [b] if neighbors[*b].len() == 3 => {
                let mut arms: Vec<u32> =
                    neighbors[*b].iter().map(|&s| arm_length(&neighbors, *b, s)).collect();
                arms.sort_unstable();
                match arms.as_slice() {
                    [1, 1, k] => Component::d(k + 3),
                    [1, 2, 2] => Component::e(6),
                    [1, 2, 3] => Component::e(7),
                    [1, 2, 4] => Component::e(8),
                    _ => return fail(format!("branch arms {arms:?} are not of ADE type")),
                }
            }
            _ => return fail("component has a node of degree > 3 or two branch nodes".into()),
        };
        config.add_component(component, 1);
    }
    Ok(config)
}

fn arm_length(neighbors: &[Vec<usize>], from: usize, mut at: usize) -> u32 {
    let mut prev = from;
    let mut len = 1;
    loop {
        let next: Vec<usize> = neighbors[at].iter().copied().filter(|&w| w != prev).collect();
        match next.as_slice() {
            [w] => {
                prev = at;
                at = *w;
                len += 1;
            }
            _ => return len,
        }
    }
}

/// Whether the double cover defined by an even set can exist: a K3 cover
/// (8 branch curves) has Picard number at most 20, hence its configuration
/// rank is at most 19 next to the pulled-back ample class; a torus cover
/// (16 branch curves) carries no (-2)-curves at all.
pub fn cover_is_viable(even_set: &DivisibleCandidate, cover: &AdeConfig) -> bool {
    match even_set.size() {
        16 => cover.is_empty(),
        _ => cover.rank() <= 19,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Excluded,
    NoObstructionFound,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Excluded => "Excluded",
            Verdict::NoObstructionFound => "NoObstructionFound",
        }
    }
}

/// One piece of evidence in an obstruction report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObstructionStep {
    /// The configuration does not fit in a K3 Picard lattice next to an
    /// ample class.
    RankBound { rank: usize, max_rank: usize },
    /// `r = |witness|` disjoint curves force `r - 11` independent even sets
    /// supported on them, but no candidate is supported there.
    AdmissibleCandidateCount { witness: Vec<String>, required: usize, candidates: usize },
    /// As above, but the candidates supported on the witness span a closed
    /// family of dimension only `available`.
    IndependenceDeficit { witness: Vec<String>, required: usize, candidates: usize, available: usize },
    /// The `p`-length of the discriminant group exceeds `22 - rank`; gluing
    /// `k` independent `p`-divisible classes lowers it by at most `2k`.
    LengthRequirement {
        prime: u32,
        p_length: usize,
        bound: usize,
        required: usize,
        available: Option<usize>,
    },
    /// Every even set on these 12 disjoint curves has a non-viable double cover.
    CoverRankExceeds { witness: Vec<String>, candidates: usize, cover_configs: Vec<String> },
}

impl ObstructionStep {
    pub fn kind(&self) -> &'static str {
        match self {
            ObstructionStep::RankBound { .. } => "RankBound",
            ObstructionStep::AdmissibleCandidateCount { .. } => "AdmissibleCandidateCount",
            ObstructionStep::IndependenceDeficit { .. } => "IndependenceDeficit",
            ObstructionStep::LengthRequirement { .. } => "LengthRequirement",
            ObstructionStep::CoverRankExceeds { .. } => "CoverRankExceeds",
        }
    }

    pub fn excludes(&self) -> bool {
        match self {
            ObstructionStep::RankBound { rank, max_rank } => rank > max_rank,
            ObstructionStep::AdmissibleCandidateCount { required, .. } => *required > 0,
            ObstructionStep::IndependenceDeficit { required, available, .. } => available < required,
            ObstructionStep::LengthRequirement { required, available, .. } => {
                available.is_some_and(|a| a < *required)
            }
            ObstructionStep::CoverRankExceeds { .. } => true,
        }
    }

    pub fn to_json(&self) -> Value {
        let s = |x: usize| x.to_string();
        let mut v = match self {
            ObstructionStep::RankBound { rank, max_rank } => {
                json!({"rank": s(*rank), "max_rank": s(*max_rank)})
            }
            ObstructionStep::AdmissibleCandidateCount { witness, required, candidates } => json!({
                "witness": witness,
                "witness_size": s(witness.len()),
                "required": s(*required),
                "candidates": s(*candidates),
            }),
            ObstructionStep::IndependenceDeficit { witness, required, candidates, available } => json!({
                "witness": witness,
                "witness_size": s(witness.len()),
                "required": s(*required),
                "candidates": s(*candidates),
                "available": s(*available),
            }),
            ObstructionStep::LengthRequirement { prime, p_length, bound, required, available } => json!({
                "prime": prime.to_string(),
                "p_length": s(*p_length),
                "bound": s(*bound),
                "required": s(*required),
                "available": available.map_or_else(|| "not analysed".to_string(), s),
            }),
            ObstructionStep::CoverRankExceeds { witness, candidates, cover_configs } => json!({
                "witness": witness,
                "witness_size": s(witness.len()),
                "candidates": s(*candidates),
                "cover_configs": cover_configs,
            }),
        };
        v["kind"] = json!(self.kind());
        v["excludes"] = json!(self.excludes());
        v
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub config: AdeConfig,
    pub m_value: BigRational,
    pub verdict: Verdict,
    pub steps: Vec<ObstructionStep>,
    pub even_set_candidates: usize,
    pub three_divisible_candidates: usize,
}

impl ObstructionReport {
    pub fn excluding_steps(&self) -> impl Iterator<Item = &ObstructionStep> {
        self.steps.iter().filter(|s| s.excludes())
    }

    /// All configurations recorded by `CoverRankExceeds` steps.
    pub fn cover_configs(&self) -> BTreeSet<String> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                ObstructionStep::CoverRankExceeds { cover_configs, .. } => Some(cover_configs.clone()),
                _ => None,
            })
            .flatten()
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config.to_string(),
            "rank": self.config.rank().to_string(),
            "m": rational_to_string(&self.m_value),
            "verdict": self.verdict.as_str(),
            "even_set_candidates": self.even_set_candidates.to_string(),
            "three_divisible_candidates": self.three_divisible_candidates.to_string(),
            "steps": self.steps.iter().map(ObstructionStep::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Maximal sets of disjoint curves with at least `min_size` members, as
/// global bitmasks.
fn maximal_disjoint_sets(config: &AdeConfig, min_size: u32) -> Vec<u64> {
    let graph = config.dynkin();
    let per_block = config.maximal_independent_sets_per_block();
    let mut out = vec![0u64];
    for (block, sets) in graph.blocks.iter().zip(per_block) {
        let mut next = Vec::with_capacity(out.len() * sets.len());
        for acc in &out {
            for s in &sets {
                next.push(acc | s << block.start);
            }
        }
        out = next;
    }
    out.retain(|w| w.count_ones() >= min_size);
    out.sort_unstable();
    out
}

fn labels_of(graph: &DynkinGraph, mask: u64) -> Vec<String> {
    (0..graph.node_count()).filter(|&i| mask >> i & 1 == 1).map(|i| graph.nodes[i].clone()).collect()
}

/// Runs the obstruction arguments against a configuration of (-2)-curves on
/// a K3 surface. `Excluded` is only returned with at least one excluding step.
pub fn check_nonexistence(config: &AdeConfig) -> Result<ObstructionReport, DivisibilityError> {
    let graph = config.dynkin();
    adjacency(&graph)?;
    let rank = config.rank();
    let mut steps = Vec::new();
    let mut report = ObstructionReport {
        config: config.clone(),
        m_value: config.m_value(),
        verdict: Verdict::NoObstructionFound,
        steps: Vec::new(),
        even_set_candidates: 0,
        three_divisible_candidates: 0,
    };
    if rank > 19 {
        steps.push(ObstructionStep::RankBound { rank, max_rank: 19 });
        report.steps = steps;
        report.verdict = Verdict::Excluded;
        return Ok(report);
    }

    let evens = even_set_candidates(config)?;
    let threes = three_divisible_candidates(config)?;
    report.even_set_candidates = evens.len();
    report.three_divisible_candidates = threes.len();
    let even_words: Vec<FpWord> = evens.iter().map(|c| c.word).collect();

    let symmetries = graph.symmetry_generators();

    // (i) disjoint curves force independent even sets on themselves
    let witnesses = maximal_disjoint_sets(config, 12);
    let mut memo: HashMap<Vec<usize>, usize> = HashMap::new();
    for &w in &witnesses {
        let required = required_for_disjoint(w.count_ones() as usize);
        let inside: Vec<usize> =
            (0..even_words.len()).filter(|&i| even_words[i].ones & !w == 0).collect();
        let witness = labels_of(&graph, w);
        if inside.is_empty() {
            steps.push(ObstructionStep::AdmissibleCandidateCount { witness, required, candidates: 0 });
            continue;
        }
        let available = *memo.entry(inside.clone()).or_insert_with(|| {
            let words: Vec<FpWord> = inside.iter().map(|&i| even_words[i]).collect();
            max_closed_subspace_with_symmetry(&words, 2, Some(required), &symmetries).len()
        });
        steps.push(ObstructionStep::IndependenceDeficit {
            witness,
            required,
            candidates: inside.len(),
            available,
        });
    }

    // (ii) p-primary length against the orthogonal complement
    let disc = config.closed_form_disc();
    let bound = 22 - rank;
    let mut primes: BTreeSet<u64> = BTreeSet::new();
    for d in &disc {
        let mut m = u64::try_from(d).expect("small invariant factor");
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                primes.insert(p);
                m /= p;
            } else {
                p += 1;
            }
        }
    }
    for p in primes {
        let p_length = disc.iter().filter(|d| (*d % BigInt::from(p)).is_zero()).count();
        if p_length <= bound {
            continue;
        }
        let required = (p_length - bound).div_ceil(2);
        let available = match p {
            2 => Some(
                max_closed_subspace_with_symmetry(&even_words, 2, Some(required), &symmetries).len(),
            ),
            3 => {
                let words: Vec<FpWord> = threes.iter().map(|c| c.word).collect();
                Some(max_closed_subspace_with_symmetry(&words, 3, Some(required), &symmetries).len())
            }
            _ => None,
        };
        steps.push(ObstructionStep::LengthRequirement {
            prime: p as u32,
            p_length,
            bound,
            required,
            available,
        });
    }

    // (iii) double covers along the even sets forced on 12 disjoint curves
    let mut cover_cache: HashMap<FpWord, Result<AdeConfig, DivisibilityError>> = HashMap::new();
    for &w in &witnesses {
        let nodes: Vec<usize> = (0..graph.node_count()).filter(|&i| w >> i & 1 == 1).collect();
        for sub in subsets_of_size(&nodes, 12) {
            let inside: Vec<&DivisibleCandidate> =
                evens.iter().filter(|c| c.word.ones & !sub == 0).collect();
            if inside.is_empty() {
                continue;
            }
            let mut configs = BTreeSet::new();
            let mut viable = false;
            for c in &inside {
                let cover = cover_cache
                    .entry(c.word)
                    .or_insert_with(|| double_cover_transform(config, c))
                    .clone();
                match cover {
                    Ok(cover) if cover_is_viable(c, &cover) => {
                        viable = true;
                        break;
                    }
                    Ok(cover) => {
                        configs.insert((cover.sort_key(), cover.to_string()));
                    }
                    Err(_) => {}
                }
            }
            if !viable {
                steps.push(ObstructionStep::CoverRankExceeds {
                    witness: labels_of(&graph, sub),
                    candidates: inside.len(),
                    cover_configs: configs.into_iter().map(|(_, s)| s).collect(),
                });
                // one witness per maximal set of disjoint curves is enough
                break;
            }
        }
    }

    report.verdict =
        if steps.iter().any(ObstructionStep::excludes) { Verdict::Excluded } else { Verdict::NoObstructionFound };
    report.steps = steps;
    Ok(report)
}

/// All `k`-element subsets of `items`, as bitmasks.
fn subsets_of_size(items: &[usize], k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, acc: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k {
                break;
            }
            rec(items, k - 1, i + 1, acc | 1 << items[i], out);
        }
    }
    rec(items, k, 0, 0, &mut out);
    out
}

/// Expected `m` of the double cover, `2 m(C) - 3 |S|`, from Euler numbers.
pub fn cover_euler_defect(config: &AdeConfig, even_set: &DivisibleCandidate) -> BigRational {
    config.m_value() * BigRational::from_integer(2.into())
        - BigRational::from_integer(BigInt::from(3 * even_set.size()))
}

/// Configurations `C` with `m(C) = m` and rank at most `max_rank` whose
/// double `2C` is itself a census configuration for `2m` and rank
/// `2 max_rank + 1` that the obstruction engine does not exclude. These are
/// the configurations that can survive on an Enriques surface, whose K3
/// cover carries `2C`.
pub fn doubling_filter(m: &BigRational, max_rank: usize) -> Result<Vec<AdeConfig>, DivisibilityError> {
    let doubled_census: BTreeSet<AdeConfig> =
        crate::ade::enumerate_configs(&(m * BigRational::from_integer(2.into())), 2 * max_rank + 1)
            .into_iter()
            .collect();
    let mut out = Vec::new();
    for c in crate::ade::enumerate_configs(m, max_rank) {
        let doubled = c.scale(2);
        if !doubled_census.contains(&doubled) {
            continue;
        }
        if check_nonexistence(&doubled)?.verdict == Verdict::NoObstructionFound {
            out.push(c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GramLattice;

    fn cfg(s: &str) -> AdeConfig {
        s.parse().unwrap()
    }

    fn mask(nodes: &[usize]) -> FpWord {
        FpWord { ones: nodes.iter().fold(0, |m, &i| m | 1 << i), twos: 0 }
    }

    #[test]
    fn f3_arithmetic() {
        let a = FpWord { ones: 0b011, twos: 0b100 };
        let b = FpWord { ones: 0b001, twos: 0b010 };
        // (1,1,2) + (1,2,0) = (2,0,2)
        assert_eq!(a.add(&b, 3), FpWord { ones: 0, twos: 0b101 });
        assert_eq!(a.add(&a.scale(2, 3), 3), FpWord::default());
        assert_eq!(FpWord { ones: 0b10, twos: 0b01 }.normalized(3), FpWord { ones: 0b01, twos: 0b10 });
    }

    #[test]
    fn even_sets_on_a1_plus_6a3() {
        let c = cfg("A1+6A3");
        let cands = even_set_candidates(&c).unwrap();
        assert_eq!(cands.len(), 15);
        for cand in &cands {
            assert_eq!(cand.size(), 8);
            assert!(!cand.support().contains(&0), "the isolated A1 never occurs");
            let lattice = c.gram();
            assert!(lattice.in_dual(&cand.class_vector()));
        }
    }

    #[test]
    fn even_sets_on_16a1() {
        let cands = even_set_candidates(&cfg("16A1")).unwrap();
        assert_eq!(cands.len(), 12870 + 1);
        assert!(cands.iter().any(|c| c.size() == 16));
    }

    #[test]
    fn three_divisible_on_4a2_2a3_a5() {
        let c = cfg("4A2+2A3+A5");
        let cands = three_divisible_candidates(&c).unwrap();
        // one support; each free A2 may be flipped, the A5 pair is tied to it
        let supports: BTreeSet<u64> = cands.iter().map(|c| c.word.support()).collect();
        assert_eq!(supports.len(), 1);
        assert_eq!(cands.len(), 16);
        let graph = c.dynkin();
        let pairs = cands[0].oriented_pairs(&graph);
        assert_eq!(pairs.len(), 6);
        // nothing on the two A3 blocks (nodes 8..14)
        assert!(cands[0].support().iter().all(|&v| !(8..14).contains(&v)));
        assert!(c.gram().in_dual(&cands[0].class_vector()));
    }

    #[test]
    fn three_divisible_on_9a2_and_a1_6a3() {
        let nine = three_divisible_candidates(&cfg("9A2")).unwrap();
        assert!(nine.iter().any(|c| c.size() == 9));
        assert!(three_divisible_candidates(&cfg("A1+6A3")).unwrap().is_empty());
    }

    #[test]
    fn required_counts() {
        assert_eq!(required_for_disjoint(13), 2);
        assert_eq!(required_for_disjoint(14), 3);
        assert_eq!(required_for_disjoint(11), 0);
        assert_eq!(required_even_sets(&cfg("16A1")), 5);
    }

    #[test]
    fn cover_of_c3() {
        // 5A1 + A3 + A7 + D4: nodes 0..5 are A1, 5..8 A3, 8..15 A7, 15..19 D4
        let c = cfg("5A1+A3+A7+D4");
        let word = mask(&[0, 1, 2, 3, 5, 7, 15, 17]);
        let s = DivisibleCandidate { prime: 2, word, len: 19 };
        let cover = double_cover_transform(&c, &s).unwrap();
        assert_eq!(cover, cfg("3A1+A3+2A7"));
        assert_eq!(cover.rank(), 20);
        assert_eq!(cover.m_value(), cover_euler_defect(&c, &s));
    }

    #[test]
    fn cover_of_16a1_is_a_torus() {
        let c = cfg("16A1");
        let s = DivisibleCandidate { prime: 2, word: mask(&(0..16).collect::<Vec<_>>()), len: 16 };
        let cover = double_cover_transform(&c, &s).unwrap();
        assert!(cover.is_empty());
        assert!(cover_is_viable(&s, &cover));
    }

    #[test]
    fn cover_of_a1_6a3() {
        let c = cfg("A1+6A3");
        // ends of the first four A3 blocks
        let word = mask(&[1, 3, 4, 6, 7, 9, 10, 12]);
        let s = DivisibleCandidate { prime: 2, word, len: 19 };
        let cover = double_cover_transform(&c, &s).unwrap();
        assert_eq!(cover, cfg("6A1+4A3"));
        assert_eq!(cover.m_value(), cover_euler_defect(&c, &s));
    }

    #[test]
    fn classification_of_trees() {
        let d5 = AdeConfig::from_components(&[(Component::d(5), 1)]);
        let gram: Vec<Vec<i64>> = d5.gram().gram().to_rows().iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        assert_eq!(classify_ade(&gram).unwrap(), d5);
        for e in [6, 7, 8] {
            let c = AdeConfig::from_components(&[(Component::e(e), 1)]);
            let g: Vec<Vec<i64>> = c.gram_matrix().to_rows().iter()
                .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
                .collect();
            assert_eq!(classify_ade(&g).unwrap(), c);
        }
        let bad = vec![vec![-2, 1, 1], vec![1, -2, 1], vec![1, 1, -2]];
        assert!(classify_ade(&bad).is_err());
    }

    #[test]
    fn subspace_search_finds_reed_muller() {
        let cands = even_set_candidates(&cfg("16A1")).unwrap();
        let words: Vec<FpWord> = cands.iter().map(|c| c.word).collect();
        let basis = max_closed_subspace(&words, 2, Some(5));
        assert_eq!(basis.len(), 5);
    }

    #[test]
    fn subspace_search_respects_union_bound() {
        // on 11 curves two 8-sets meet in >= 5 curves, so their sum has weight <= 6
        let cands = even_set_candidates(&cfg("11A1")).unwrap();
        let words: Vec<FpWord> = cands.iter().map(|c| c.word).collect();
        assert_eq!(max_closed_subspace(&words, 2, None).len(), 1);
    }

    #[test]
    fn symmetry_reduction_keeps_the_dimension() {
        for text in ["A1+6A3", "3A1+4D4", "12A1", "2A1+3A3+2D4"] {
            let c = cfg(text);
            let symmetries = c.dynkin().symmetry_generators();
            let words: Vec<FpWord> = even_set_candidates(&c).unwrap().iter().map(|c| c.word).collect();
            let plain = max_closed_subspace(&words, 2, None).len();
            let reduced = max_closed_subspace_with_symmetry(&words, 2, None, &symmetries).len();
            assert_eq!(plain, reduced, "{text}");
        }
        let c = cfg("4A2+2A3+A5");
        let symmetries = c.dynkin().symmetry_generators();
        let words: Vec<FpWord> = three_divisible_candidates(&c).unwrap().iter().map(|c| c.word).collect();
        assert_eq!(
            max_closed_subspace(&words, 3, None).len(),
            max_closed_subspace_with_symmetry(&words, 3, None, &symmetries).len()
        );
    }

    #[test]
    fn candidate_classes_lie_in_the_dual() {
        for text in ["2A1+3A3+2D4", "3A1+4D4", "A1+2A2+3A3+D5"] {
            let c = cfg(text);
            let lattice: GramLattice = c.gram();
            for cand in even_set_candidates(&c).unwrap() {
                assert!(lattice.in_dual(&cand.class_vector()), "{text}");
            }
        }
    }

    #[test]
    fn verdicts_for_basic_cases() {
        assert_eq!(check_nonexistence(&cfg("16A1")).unwrap().verdict, Verdict::NoObstructionFound);
        assert_eq!(check_nonexistence(&cfg("11A1+2A3")).unwrap().verdict, Verdict::Excluded);
        let big = check_nonexistence(&cfg("20A1")).unwrap();
        assert_eq!(big.steps[0].kind(), "RankBound");
    }
}
