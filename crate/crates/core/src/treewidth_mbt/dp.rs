//! The table DP over an s′-special nice decomposition.
//!
//! A state at node `i` is `(X, P, D)`: the bag vertices that lie in the
//! partial tree, how the partial forest groups them, and their degrees so
//! far. Keys are packed against the node's sorted bag: bit `p` of `mask`,
//! nibble `p` of `parts` and the two bits at `2p` of `degs` all describe
//! the vertex at bag position `p`. Parts are numbered as a restricted
//! growth string over the positions in `mask`.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexMap;
use thiserror::Error;

use super::decomposition::UGraph;
use super::nice::{NiceDecomposition, NodeKind};

/// Bags (s′ included) may hold at most this many vertices.
pub const MAX_BAG: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MbtError {
    #[error("node {node} has a bag of {size} vertices; at most {MAX_BAG} are supported")]
    BagTooLarge { node: usize, size: usize },
    #[error("node {0} does not contain the pendant vertex")]
    PendantMissing(usize),
    #[error("no binary tree contains the pendant vertex")]
    NoTree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DpKey {
    pub mask: u32,
    pub parts: u64,
    pub degs: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Back {
    Leaf,
    Same(DpKey),
    Edge(DpKey),
    Join(DpKey, DpKey),
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    value: u32,
    back: Back,
}

type Table = IndexMap<DpKey, Entry>;

fn part(parts: u64, p: usize) -> u64 {
    (parts >> (4 * p)) & 0xF
}

fn deg(degs: u32, p: usize) -> u32 {
    (degs >> (2 * p)) & 3
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..MAX_BAG).filter(move |&p| mask >> p & 1 == 1)
}

/// Renumbers parts in order of first appearance.
fn canonical(mask: u32, parts: u64) -> u64 {
    let mut map = [u8::MAX; 32];
    let mut next = 0u8;
    let mut out = 0u64;
    for p in bits(mask) {
        let old = part(parts, p) as usize;
        if map[old] == u8::MAX {
            map[old] = next;
            next += 1;
        }
        out |= (map[old] as u64) << (4 * p);
    }
    out
}

fn spread(x: u64, p: usize, width: usize) -> u64 {
    let low = (1u64 << (p * width)) - 1;
    (x & low) | ((x & !low) << width)
}

fn squeeze(x: u64, p: usize, width: usize) -> u64 {
    let low = (1u64 << (p * width)) - 1;
    (x & low) | ((x >> width) & !low)
}

impl DpKey {
    /// Opens an empty slot at position `p`.
    fn with_gap(self, p: usize) -> DpKey {
        DpKey {
            mask: spread(self.mask as u64, p, 1) as u32,
            parts: spread(self.parts, p, 4),
            degs: spread(self.degs as u64, p, 2) as u32,
        }
    }

    /// Deletes position `p`.
    fn without(self, p: usize) -> DpKey {
        let mask = squeeze(self.mask as u64, p, 1) as u32;
        DpKey { mask, parts: canonical(mask, squeeze(self.parts, p, 4)), degs: squeeze(self.degs as u64, p, 2) as u32 }
    }
}

/// Merges two partitions of the same positions, given as part indices per
/// position in `mask`. `None` when the element/part incidence graph has a
/// cycle, i.e. the union of the two forests would not be a forest.
fn merge_packed(mask: u32, a: u64, b: u64) -> Option<u64> {
    let mut uf: [u8; 32] = std::array::from_fn(|i| i as u8);
    fn find(uf: &mut [u8; 32], mut x: usize) -> usize {
        while uf[x] as usize != x {
            uf[x] = uf[uf[x] as usize];
            x = uf[x] as usize;
        }
        x
    }
    for p in bits(mask) {
        let (x, y) = (find(&mut uf, part(a, p) as usize), find(&mut uf, 16 + part(b, p) as usize));
        if x == y {
            return None;
        }
        uf[x] = y as u8;
    }
    let mut wide = [0usize; MAX_BAG];
    for p in bits(mask) {
        wide[p] = find(&mut uf, part(a, p) as usize);
    }
    let mut map = [u8::MAX; 32];
    let mut next = 0u8;
    let mut out = 0u64;
    for p in bits(mask) {
        if map[wide[p]] == u8::MAX {
            map[wide[p]] = next;
            next += 1;
        }
        out |= (map[wide[p]] as u64) << (4 * p);
    }
    Some(out)
}

/// Merges two partitions of `0..len` given as part labels (any labels below
/// 16). Returns the component partition as a restricted growth string, or
/// `None` if the merged auxiliary graph has a cycle.
pub fn merge_partitions(pj: &[u8], pk: &[u8]) -> Option<Vec<u8>> {
    assert_eq!(pj.len(), pk.len());
    assert!(pj.len() <= MAX_BAG);
    let pack = |p: &[u8]| p.iter().enumerate().fold(0u64, |acc, (i, &x)| acc | ((x as u64 & 0xF) << (4 * i)));
    let mask = ((1u64 << pj.len()) - 1) as u32;
    let merged = merge_packed(mask, pack(pj), pack(pk))?;
    Some((0..pj.len()).map(|p| part(merged, p) as u8).collect())
}

/// A readable DP state: the parts of `P` (their union is `X`) and `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpState {
    pub parts: Vec<Vec<usize>>,
    pub degree: BTreeMap<usize, u8>,
}

/// Packs a state against `bag`; `None` if it mentions vertices outside the
/// bag or its degrees do not match the parts.
pub fn encode(bag: &[usize], state: &DpState) -> Option<DpKey> {
    let mut key = DpKey { mask: 0, parts: 0, degs: 0 };
    for (i, part) in state.parts.iter().enumerate() {
        for v in part {
            let p = bag.binary_search(v).ok()?;
            if key.mask >> p & 1 == 1 || i >= 16 {
                return None;
            }
            key.mask |= 1 << p;
            key.parts |= (i as u64) << (4 * p);
        }
    }
    if state.degree.len() != key.mask.count_ones() as usize {
        return None;
    }
    for (v, &d) in &state.degree {
        let p = bag.binary_search(v).ok()?;
        if key.mask >> p & 1 == 0 || d > 3 {
            return None;
        }
        key.degs |= (d as u32) << (2 * p);
    }
    key.parts = canonical(key.mask, key.parts);
    Some(key)
}

pub fn decode(bag: &[usize], key: DpKey) -> DpState {
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut degree = BTreeMap::new();
    for p in bits(key.mask) {
        let i = part(key.parts, p) as usize;
        if parts.len() <= i {
            parts.resize(i + 1, Vec::new());
        }
        parts[i].push(bag[p]);
        degree.insert(bag[p], deg(key.degs, p) as u8);
    }
    DpState { parts, degree }
}

fn relax(table: &mut Table, key: DpKey, value: u32, back: Back) {
    match table.get_mut(&key) {
        Some(e) if e.value >= value => {}
        Some(e) => *e = Entry { value, back },
        None => {
            table.insert(key, Entry { value, back });
        }
    }
}

/// Filled tables plus the optimum at the root.
#[derive(Clone, Debug)]
pub struct MbtDp {
    tables: Vec<Table>,
    bags: Vec<Vec<usize>>,
    /// Edges of the best tree through s′ (s′ and its edge included).
    pub edges: u32,
    pub tree: Vec<(usize, usize)>,
}

impl MbtDp {
    /// Stored value of a state at a node, `None` for −∞.
    pub fn value(&self, node: usize, state: &DpState) -> Option<u32> {
        let key = encode(&self.bags[node], state)?;
        self.tables[node].get(&key).map(|e| e.value)
    }

    /// Number of stored (feasible) states per node.
    pub fn state_counts(&self) -> Vec<usize> {
        self.tables.iter().map(IndexMap::len).collect()
    }

    /// All stored states of a node with their values, in insertion order.
    pub fn states(&self, node: usize) -> Vec<(DpState, u32)> {
        self.tables[node].iter().map(|(&k, e)| (decode(&self.bags[node], k), e.value)).collect()
    }
}

/// Runs the DP bottom-up and backtracks one optimal tree.
pub fn mbt_dp(gs: &UGraph, sd: &NiceDecomposition, sp: usize) -> Result<MbtDp, MbtError> {
    debug_assert_eq!(sd.check_join_disjointness(), Ok(()));
    debug_assert!(sd.nodes().iter().all(|x| match x.kind {
        NodeKind::IntroduceEdge(u, v) => gs.has_edge(u, v),
        _ => true,
    }));
    let mut tables: Vec<Table> = Vec::with_capacity(sd.len());
    for (i, node) in sd.nodes().iter().enumerate() {
        if node.bag.len() > MAX_BAG {
            return Err(MbtError::BagTooLarge { node: i, size: node.bag.len() });
        }
        let pos = |v: usize| node.bag.binary_search(&v).map_err(|_| MbtError::PendantMissing(i));
        pos(sp)?;
        let mut t = Table::new();
        match node.kind {
            NodeKind::Leaf => {
                if node.bag != [sp] {
                    return Err(MbtError::PendantMissing(i));
                }
                t.insert(DpKey { mask: 1, parts: 0, degs: 0 }, Entry { value: 0, back: Back::Leaf });
            }
            NodeKind::IntroduceVertex(v) => {
                let p = pos(v).expect("introduced vertex is in the bag");
                for (&ck, e) in &tables[node.children[0]] {
                    let k0 = ck.with_gap(p);
                    relax(&mut t, k0, e.value, Back::Same(ck));
                    let mask = k0.mask | 1 << p;
                    let k1 = DpKey { mask, parts: canonical(mask, k0.parts | 0xF << (4 * p)), degs: k0.degs };
                    relax(&mut t, k1, e.value, Back::Same(ck));
                }
            }
            NodeKind::IntroduceEdge(u, v) => {
                let (pu, pv) = (pos(u).expect("edge endpoint"), pos(v).expect("edge endpoint"));
                for (&ck, e) in &tables[node.children[0]] {
                    relax(&mut t, ck, e.value, Back::Same(ck));
                    let both = ck.mask >> pu & 1 == 1 && ck.mask >> pv & 1 == 1;
                    if !both || deg(ck.degs, pu) == 3 || deg(ck.degs, pv) == 3 {
                        continue;
                    }
                    let (a, b) = (part(ck.parts, pu), part(ck.parts, pv));
                    if a == b {
                        continue;
                    }
                    let mut parts = ck.parts;
                    for q in bits(ck.mask).filter(|&q| part(ck.parts, q) == b) {
                        parts = (parts & !(0xF << (4 * q))) | a << (4 * q);
                    }
                    let degs = ck.degs + (1 << (2 * pu)) + (1 << (2 * pv));
                    let k = DpKey { mask: ck.mask, parts: canonical(ck.mask, parts), degs };
                    relax(&mut t, k, e.value + 1, Back::Edge(ck));
                }
            }
            NodeKind::Drop(v) => {
                let child = &sd.nodes()[node.children[0]];
                let p = child.bag.binary_search(&v).expect("dropped vertex is in the child bag");
                for (&ck, e) in &tables[node.children[0]] {
                    if ck.mask >> p & 1 == 1 {
                        let d = deg(ck.degs, p);
                        let own = part(ck.parts, p);
                        let shared = bits(ck.mask).any(|q| q != p && part(ck.parts, q) == own);
                        if d == 0 || !shared {
                            continue;
                        }
                    }
                    relax(&mut t, ck.without(p), e.value, Back::Same(ck));
                }
            }
            NodeKind::Join => {
                let (a, b) = (&tables[node.children[0]], &tables[node.children[1]]);
                let mut by_mask: HashMap<u32, Vec<(DpKey, u32)>> = HashMap::new();
                for (&kb, e) in b {
                    by_mask.entry(kb.mask).or_default().push((kb, e.value));
                }
                for (&ka, ea) in a {
                    let Some(list) = by_mask.get(&ka.mask) else { continue };
                    for &(kb, vb) in list {
                        if bits(ka.mask).any(|p| deg(ka.degs, p) + deg(kb.degs, p) > 3) {
                            continue;
                        }
                        let Some(parts) = merge_packed(ka.mask, ka.parts, kb.parts) else { continue };
                        let k = DpKey { mask: ka.mask, parts, degs: ka.degs + kb.degs };
                        relax(&mut t, k, ea.value + vb, Back::Join(ka, kb));
                    }
                }
            }
        }
        tables.push(t);
    }
    let root = sd.root();
    let root_key = DpKey { mask: 1, parts: 0, degs: 1 };
    let best = tables[root].get(&root_key).ok_or(MbtError::NoTree)?.value;
    let tree = backtrack(sd, &tables, root, root_key);
    debug_assert_eq!(tree.len(), best as usize);
    let bags = sd.nodes().iter().map(|x| x.bag.clone()).collect();
    Ok(MbtDp { tables, bags, edges: best, tree })
}

fn backtrack(sd: &NiceDecomposition, tables: &[Table], root: usize, key: DpKey) -> Vec<(usize, usize)> {
    let mut tree = Vec::new();
    let mut stack = vec![(root, key)];
    while let Some((i, k)) = stack.pop() {
        let node = sd.node(i);
        match tables[i][&k].back {
            Back::Leaf => {}
            Back::Same(ck) => stack.push((node.children[0], ck)),
            Back::Edge(ck) => {
                if let NodeKind::IntroduceEdge(u, v) = node.kind {
                    tree.push((u, v));
                }
                stack.push((node.children[0], ck));
            }
            Back::Join(ka, kb) => {
                stack.push((node.children[0], ka));
                stack.push((node.children[1], kb));
            }
        }
    }
    tree.sort_unstable();
    tree
}
