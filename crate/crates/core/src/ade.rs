//! ADE configurations `C = sum a_n A_n + d_n D_n + e_n E_n` of (-2)-curves.
//!
//! Curves are numbered in a frozen order so that glue vectors written as
//! coordinate lists keep their meaning:
//!
//! * components: all `A` blocks by increasing `n`, then `D`, then `E`;
//! * `A_n`: the chain in path order;
//! * `D_n`: a path of `n - 2` nodes, then the two leaves attached to its last node;
//! * `E_n`: a path of `n - 1` nodes, then the branch node attached to the third.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::lattice::GramLattice;
use crate::matrix::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    A,
    D,
    E,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComponentKind::A => "A",
            ComponentKind::D => "D",
            ComponentKind::E => "E",
        };
        f.write_str(s)
    }
}

/// A single Dynkin diagram `T_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub kind: ComponentKind,
    pub n: u32,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.n)
    }
}

impl Component {
    pub fn new(kind: ComponentKind, n: u32) -> Result<Self, AdeError> {
        let valid = match kind {
            ComponentKind::A => n >= 1,
            ComponentKind::D => n >= 4,
            ComponentKind::E => (6..=8).contains(&n),
        };
        if valid {
            Ok(Self { kind, n })
        } else {
            Err(AdeError::InvalidComponent(format!("{kind}{n}")))
        }
    }

    pub fn a(n: u32) -> Self {
        Self::new(ComponentKind::A, n).expect("valid A_n")
    }

    pub fn d(n: u32) -> Self {
        Self::new(ComponentKind::D, n).expect("valid D_n")
    }

    pub fn e(n: u32) -> Self {
        Self::new(ComponentKind::E, n).expect("valid E_n")
    }

    pub fn rank(&self) -> usize {
        self.n as usize
    }

    /// Order of the binary polyhedral group whose quotient singularity has
    /// this resolution graph.
    pub fn group_order(&self) -> u32 {
        match (self.kind, self.n) {
            (ComponentKind::A, n) => n + 1,
            (ComponentKind::D, n) => 4 * (n - 2),
            (ComponentKind::E, 6) => 24,
            (ComponentKind::E, 7) => 48,
            (ComponentKind::E, _) => 120,
        }
    }

    /// Contribution `(n + 1) - 1/|G|` to `m(C)`.
    pub fn m_value(&self) -> BigRational {
        let n1 = BigRational::from_integer(BigInt::from(self.n + 1));
        n1 - BigRational::new(BigInt::one(), BigInt::from(self.group_order()))
    }

    /// Edges of the Dynkin diagram in canonical node numbering.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank();
        match self.kind {
            ComponentKind::A => (1..n).map(|i| (i - 1, i)).collect(),
            ComponentKind::D => {
                let mut e: Vec<_> = (1..n - 2).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 2));
                e.push((n - 3, n - 1));
                e
            }
            ComponentKind::E => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((2, n - 1));
                e
            }
        }
    }

    pub fn gram(&self) -> IntMatrix {
        let n = self.rank();
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = BigInt::from(-2);
        }
        for (a, b) in self.edges() {
            g[(a, b)] = BigInt::one();
            g[(b, a)] = BigInt::one();
        }
        g
    }

    /// Generators of the automorphism group of the diagram.
    pub fn diagram_symmetries(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let swap = |a: usize, b: usize| {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(a, b);
            p
        };
        match (self.kind, n) {
            (ComponentKind::A, 1) => vec![],
            (ComponentKind::A, _) => vec![(0..n).rev().collect()],
            (ComponentKind::D, 4) => vec![swap(2, 3), swap(0, 2)],
            (ComponentKind::D, _) => vec![swap(n - 2, n - 1)],
            (ComponentKind::E, 6) => vec![vec![4, 3, 2, 1, 0, 5]],
            (ComponentKind::E, _) => vec![],
        }
    }

    /// Cyclic factors of the discriminant group.
    pub fn disc_factors(&self) -> Vec<u64> {
        match (self.kind, self.n) {
            (ComponentKind::A, n) => vec![n as u64 + 1],
            (ComponentKind::D, n) if n % 2 == 0 => vec![2, 2],
            (ComponentKind::D, _) => vec![4],
            (ComponentKind::E, 6) => vec![3],
            (ComponentKind::E, 7) => vec![2],
            (ComponentKind::E, _) => vec![],
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdeError {
    #[error("parse error at position {position}: {message}")]
    ParseError { position: usize, message: String },
    #[error("invalid component {0}")]
    InvalidComponent(String),
}

/// Multiset of ADE components.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct AdeConfig {
    counts: BTreeMap<Component, u32>,
}

impl AdeConfig {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_components(components: &[(Component, u32)]) -> Self {
        let mut c = Self::empty();
        for &(comp, k) in components {
            c.add_component(comp, k);
        }
        c
    }

    pub fn add_component(&mut self, component: Component, count: u32) {
        if count > 0 {
            *self.counts.entry(component).or_insert(0) += count;
        }
    }

    pub fn count(&self, component: Component) -> u32 {
        self.counts.get(&component).copied().unwrap_or(0)
    }

    /// `alpha_n`, `delta_n` or `epsilon_n`.
    pub fn count_of(&self, kind: ComponentKind, n: u32) -> u32 {
        self.counts.get(&Component { kind, n }).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct components with multiplicity, canonical order.
    pub fn counts(&self) -> impl Iterator<Item = (Component, u32)> + '_ {
        self.counts.iter().map(|(c, k)| (*c, *k))
    }

    /// One entry per component block, canonical order.
    pub fn components(&self) -> Vec<Component> {
        self.counts.iter().flat_map(|(c, k)| std::iter::repeat_n(*c, *k as usize)).collect()
    }

    pub fn component_count(&self) -> usize {
        self.counts.values().map(|k| *k as usize).sum()
    }

    pub fn rank(&self) -> usize {
        self.counts.iter().map(|(c, k)| c.rank() * *k as usize).sum()
    }

    pub fn m_value(&self) -> BigRational {
        self.counts
            .iter()
            .map(|(c, k)| c.m_value() * BigRational::from_integer(BigInt::from(*k)))
            .sum()
    }

    /// Disjoint union.
    pub fn add(&self, other: &AdeConfig) -> AdeConfig {
        let mut out = self.clone();
        for (c, k) in other.counts() {
            out.add_component(c, k);
        }
        out
    }

    /// `k` disjoint copies.
    pub fn scale(&self, k: u32) -> AdeConfig {
        let mut out = AdeConfig::empty();
        for (c, n) in self.counts() {
            out.add_component(c, n * k);
        }
        out
    }

    /// Curve labels `T{n}_{occurrence}.{curve}`, both indices from 1.
    pub fn curve_labels(&self) -> Vec<String> {
        let mut labels = Vec::with_capacity(self.rank());
        for (c, k) in self.counts() {
            for occ in 1..=k {
                for s in 1..=c.rank() {
                    labels.push(format!("{c}_{occ}.{s}"));
                }
            }
        }
        labels
    }

    pub fn gram_matrix(&self) -> IntMatrix {
        self.components()
            .iter()
            .fold(IntMatrix::zeros(0, 0), |acc, c| acc.direct_sum(&c.gram()))
    }

    pub fn gram(&self) -> GramLattice {
        GramLattice::new(self.gram_matrix(), self.curve_labels())
            .expect("ADE Gram matrices are nondegenerate")
    }

    pub fn dynkin(&self) -> DynkinGraph {
        let mut edges = Vec::new();
        let mut blocks = Vec::new();
        let mut offset = 0;
        for c in self.components() {
            for (a, b) in c.edges() {
                edges.push((offset + a, offset + b));
            }
            blocks.push(Block { component: c, start: offset });
            offset += c.rank();
        }
        DynkinGraph { nodes: self.curve_labels(), edges, blocks }
    }

    /// Invariant factors of the discriminant group assembled from the
    /// per-component cyclic factors.
    pub fn closed_form_disc(&self) -> Vec<BigInt> {
        let factors: Vec<u64> = self.components().iter().flat_map(|c| c.disc_factors()).collect();
        invariant_factors_from_cyclic(&factors)
    }

    /// Size of a largest set of pairwise disjoint curves, with a witness
    /// (node indices in the canonical numbering).
    pub fn max_disjoint_curves(&self) -> (usize, Vec<usize>) {
        let mut witness = Vec::new();
        let mut offset = 0;
        for c in self.components() {
            let best = component_independent_sets(c)
                .into_iter()
                .max_by_key(|s| (s.count_ones(), std::cmp::Reverse(*s)))
                .unwrap_or(0);
            witness.extend((0..c.rank()).filter(|i| best >> i & 1 == 1).map(|i| offset + i));
            offset += c.rank();
        }
        (witness.len(), witness)
    }

    /// Per component block: all maximal independent node sets, as bitmasks in
    /// the block's local numbering.
    pub fn maximal_independent_sets_per_block(&self) -> Vec<Vec<u64>> {
        self.components()
            .iter()
            .map(|c| {
                let graph = local_adjacency(*c);
                let all = component_independent_sets(*c);
                all.into_iter()
                    .filter(|&s| {
                        (0..c.rank()).all(|v| s >> v & 1 == 1 || s & graph[v] != 0)
                    })
                    .collect()
            })
            .collect()
    }

    /// Sort key: `(rank, a_1..a_19, d_4..d_19, e_6..e_8)`.
    pub fn sort_key(&self) -> Vec<u32> {
        let mut key = vec![self.rank() as u32];
        let max_n = self.counts.keys().map(|c| c.n).max().unwrap_or(0).max(19);
        key.extend((1..=max_n).map(|n| self.count_of(ComponentKind::A, n)));
        key.extend((4..=max_n).map(|n| self.count_of(ComponentKind::D, n)));
        key.extend((6..=8).map(|n| self.count_of(ComponentKind::E, n)));
        key
    }

    pub fn to_json(&self) -> Value {
        let block = |kind: ComponentKind| {
            let map: serde_json::Map<String, Value> = self
                .counts()
                .filter(|(c, _)| c.kind == kind)
                .map(|(c, k)| (c.n.to_string(), json!(k)))
                .collect();
            Value::Object(map)
        };
        let m = self.m_value();
        json!({
            "A": block(ComponentKind::A),
            "D": block(ComponentKind::D),
            "E": block(ComponentKind::E),
            "m": format!("{}/{}", m.numer(), m.denom()),
            "rank": self.rank(),
        })
    }
}

impl PartialOrd for AdeConfig {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AdeConfig {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for AdeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .counts()
            .map(|(c, k)| if k == 1 { c.to_string() } else { format!("{k}{c}") })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for AdeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdeConfig({self})")
    }
}

impl FromStr for AdeConfig {
    type Err = AdeError;

    fn from_str(text: &str) -> Result<Self, AdeError> {
        parse_config(text)
    }
}

/// Parses `"5A1+4A2+A5"`; whitespace is ignored and `"0"` is the empty
/// configuration.
pub fn parse_config(text: &str) -> Result<AdeConfig, AdeError> {
    let chars: Vec<(usize, char)> =
        text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    if chars.len() == 1 && chars[0].1 == '0' {
        return Ok(AdeConfig::empty());
    }
    let err = |position: usize, message: &str| AdeError::ParseError {
        position,
        message: message.to_string(),
    };
    if chars.is_empty() {
        return Err(err(0, "empty configuration"));
    }
    let mut config = AdeConfig::empty();
    let mut i = 0;
    loop {
        let term_start = chars.get(i).map_or(text.len(), |c| c.0);
        let count = read_number(&chars, &mut i);
        let count = match count {
            Some(0) => return Err(err(term_start, "component count must be positive")),
            Some(k) => u32::try_from(k).map_err(|_| err(term_start, "count too large"))?,
            None => 1,
        };
        let kind = match chars.get(i).map(|c| c.1) {
            Some('A') => ComponentKind::A,
            Some('D') => ComponentKind::D,
            Some('E') => ComponentKind::E,
            Some(_) => return Err(err(chars[i].0, "expected component type A, D or E")),
            None => return Err(err(text.len(), "expected component type A, D or E")),
        };
        i += 1;
        let pos = chars.get(i).map_or(text.len(), |c| c.0);
        let n = read_number(&chars, &mut i).ok_or_else(|| err(pos, "expected component rank"))?;
        let n = u32::try_from(n).map_err(|_| err(pos, "rank too large"))?;
        config.add_component(Component::new(kind, n)?, count);
        match chars.get(i) {
            None => break,
            Some((_, '+')) => {
                i += 1;
                if i == chars.len() {
                    return Err(err(text.len(), "dangling '+'"));
                }
            }
            Some((p, _)) => return Err(err(*p, "expected '+' between terms")),
        }
    }
    Ok(config)
}

fn read_number(chars: &[(usize, char)], i: &mut usize) -> Option<u64> {
    let start = *i;
    let mut value: u64 = 0;
    while let Some((_, c)) = chars.get(*i) {
        let Some(d) = c.to_digit(10) else { break };
        value = value.saturating_mul(10).saturating_add(d as u64);
        *i += 1;
    }
    (*i > start).then_some(value)
}

/// One component block inside a Dynkin graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub component: Component,
    pub start: usize,
}

impl Block {
    pub fn nodes(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.component.rank()
    }
}

/// Curve-level view of a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub blocks: Vec<Block>,
}

impl DynkinGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    /// Generators of a group of graph automorphisms, as node permutations:
    /// swaps of neighbouring isomorphic blocks and the diagram symmetries of
    /// each block.
    pub fn symmetry_generators(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let identity: Vec<usize> = (0..n).collect();
        let mut gens = Vec::new();
        for pair in self.blocks.windows(2) {
            if pair[0].component == pair[1].component {
                let mut perm = identity.clone();
                for (a, b) in pair[0].nodes().zip(pair[1].nodes()) {
                    perm[a] = b;
                    perm[b] = a;
                }
                gens.push(perm);
            }
        }
        for block in &self.blocks {
            for local in block.component.diagram_symmetries() {
                let mut perm = identity.clone();
                for (i, &j) in local.iter().enumerate() {
                    perm[block.start + i] = block.start + j;
                }
                gens.push(perm);
            }
        }
        gens
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.blocks.iter().position(|b| b.nodes().contains(&v)).expect("node out of range")
    }
}

fn local_adjacency(c: Component) -> Vec<u64> {
    let mut adj = vec![0u64; c.rank()];
    for (a, b) in c.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    adj
}

/// All independent node sets of one component (including the empty set).
pub fn component_independent_sets(c: Component) -> Vec<u64> {
    let adj = local_adjacency(c);
    let n = c.rank();
    assert!(n < 64, "component too large for bitmask search");
    let mut out = Vec::new();
    fn rec(v: usize, n: usize, set: u64, adj: &[u64], out: &mut Vec<u64>) {
        if v == n {
            out.push(set);
            return;
        }
        rec(v + 1, n, set, adj, out);
        if set & adj[v] == 0 {
            rec(v + 1, n, set | 1 << v, adj, out);
        }
    }
    rec(0, n, 0, &adj, &mut out);
    out
}

/// Combine cyclic groups `Z_{n_1} x ... x Z_{n_k}` into invariant factors
/// `d_1 | d_2 | ...` with every `d_i > 1`.
pub fn invariant_factors_from_cyclic(orders: &[u64]) -> Vec<BigInt> {
    // prime -> exponents, one per cyclic factor
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &order in orders {
        let mut m = order;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                by_prime.entry(p).or_default().push(e);
            }
            p += 1;
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![BigInt::one(); len];
    for (p, mut exps) in by_prime {
        exps.sort_unstable();
        // largest exponents go to the last invariant factors
        let shift = len - exps.len();
        for (k, e) in exps.into_iter().enumerate() {
            factors[shift + k] *= num_traits::pow(BigInt::from(p), e as usize);
        }
    }
    factors.retain(|d| !d.is_one());
    factors
}

/// Every configuration with `m(C) = m_target` and rank at most `max_rank`,
/// sorted by `(rank, a_n, d_n, e_n)`.
pub fn enumerate_configs(m_target: &BigRational, max_rank: usize) -> Vec<AdeConfig> {
    let mut components = Vec::new();
    for n in 1..=max_rank as u32 {
        components.push(Component::a(n));
    }
    for n in 4..=max_rank as u32 {
        components.push(Component::d(n));
    }
    for n in 6..=8u32.min(max_rank as u32) {
        components.push(Component::e(n));
    }
    let values: Vec<BigRational> = components.iter().map(Component::m_value).collect();

    let mut out = Vec::new();
    let mut current = AdeConfig::empty();
    search_configs(&components, &values, 0, m_target.clone(), max_rank, &mut current, &mut out);
    out.sort();
    out
}

fn search_configs(
    components: &[Component],
    values: &[BigRational],
    index: usize,
    m_left: BigRational,
    rank_left: usize,
    current: &mut AdeConfig,
    out: &mut Vec<AdeConfig>,
) {
    if m_left.is_zero() {
        out.push(current.clone());
        return;
    }
    // each component contributes at most n + 1 <= 2n to m
    if index == components.len()
        || m_left < BigRational::zero()
        || m_left > BigRational::from_integer(BigInt::from(2 * rank_left))
    {
        return;
    }
    let c = components[index];
    if c.rank() <= rank_left {
        let mut k = 1u32;
        let mut m = m_left.clone();
        while (k as usize) * c.rank() <= rank_left {
            m -= &values[index];
            if m < BigRational::zero() {
                break;
            }
            current.add_component(c, k);
            search_configs(components, values, index + 1, m.clone(), rank_left - k as usize * c.rank(), current, out);
            remove_component(current, c, k);
            k += 1;
        }
    }
    search_configs(components, values, index + 1, m_left, rank_left, current, out);
}

fn remove_component(config: &mut AdeConfig, c: Component, k: u32) {
    let entry = config.counts.get_mut(&c).expect("component present");
    *entry -= k;
    if *entry == 0 {
        config.counts.remove(&c);
    }
}
