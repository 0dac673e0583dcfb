//! Longest heapable subsequence over a bounded alphabet.
//!
//! A heap over alphabet `[k]` is summarised by its *shape*: for every label
//! `j in 0..=k`, the number of free child slots whose parent carries label `j`
//! (label `0` is the virtual slot of the empty heap). Refined shapes cap each
//! coordinate at `k - j` and collapse everything from the first saturated
//! coordinate onwards to [`INF`]. There are at most `(k+1)! + 1` refined shapes,
//! which bounds the dynamic program to `(k+1)! * k * O(n)` work.

use std::fmt;

use thiserror::Error;

/// A sequence symbol. User labels live in `1..=k`.
pub type Label = u32;

/// Coordinate value standing for "unboundedly many free slots".
pub const INF: u32 = u32::MAX;

/// Largest alphabet for which shape tables are materialised.
pub const MAX_ALPHABET: usize = 9;

const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("alphabet size must be positive")]
    EmptyAlphabet,
    #[error("label {label} at index {index} is outside 1..={k}")]
    LabelOutOfRange { index: usize, label: Label, k: Label },
    #[error("alphabet size {0} exceeds the supported maximum of {MAX_ALPHABET}")]
    AlphabetTooLarge(usize),
    #[error("invalid refined shape: {0}")]
    InvalidShape(&'static str),
}

/// A finite sequence over the alphabet `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequence {
    items: Vec<Label>,
    k: Label,
}

impl Sequence {
    pub fn new(items: Vec<Label>, k: Label) -> Result<Self, SequenceError> {
        if k == 0 {
            return Err(SequenceError::EmptyAlphabet);
        }
        if let Some((index, &label)) = items.iter().enumerate().find(|(_, &a)| a == 0 || a > k) {
            return Err(SequenceError::LabelOutOfRange { index, label, k });
        }
        Ok(Sequence { items, k })
    }

    /// Rank-compresses arbitrary ordered values onto `1..=k`, where `k` is the
    /// number of distinct values (at least 1).
    pub fn from_values<T: Ord + Copy>(values: &[T]) -> Self {
        let mut distinct: Vec<T> = values.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let items = values
            .iter()
            .map(|v| distinct.binary_search(v).expect("value present") as Label + 1)
            .collect();
        Sequence { items, k: distinct.len().max(1) as Label }
    }

    pub fn items(&self) -> &[Label] {
        &self.items
    }

    pub fn k(&self) -> Label {
        self.k
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The subsequence at the given (0-based, increasing) positions.
    pub fn select(&self, indices: &[usize]) -> Sequence {
        Sequence { items: indices.iter().map(|&i| self.items[i]).collect(), k: self.k }
    }
}

/// A refined shape `(x_0, ..., x_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RefinedShape {
    coords: Vec<u32>,
}

impl RefinedShape {
    /// Shape of the empty heap, `(1, 0, ..., 0)`.
    pub fn empty(k: usize) -> Self {
        let mut coords = vec![0; k + 1];
        coords[0] = 1;
        RefinedShape { coords }
    }

    /// Validates a coordinate tuple against the refined-shape rules.
    pub fn new(coords: Vec<u32>) -> Result<Self, SequenceError> {
        if coords.len() < 2 {
            return Err(SequenceError::InvalidShape("needs k + 1 >= 2 coordinates"));
        }
        let k = coords.len() - 1;
        let mut saturated = false;
        for (j, &x) in coords.iter().enumerate() {
            if x == INF {
                saturated = true;
            } else if saturated {
                return Err(SequenceError::InvalidShape("infinity must propagate to the right"));
            } else if x as usize > k - j {
                return Err(SequenceError::InvalidShape("coordinate exceeds k - j"));
            }
        }
        let shape = RefinedShape { coords };
        if shape.coords[0] != 0 && shape != RefinedShape::empty(k) {
            return Err(SequenceError::InvalidShape("x_0 is non-zero outside the empty heap"));
        }
        Ok(shape)
    }

    pub fn k(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_empty_heap(&self) -> bool {
        self.coords[0] == 1
    }

    /// Insert label `label` under a slot whose parent carries `parent`.
    /// `None` is the impossible insertion `⊥`.
    pub fn insert(&self, parent: Label, label: Label) -> Option<RefinedShape> {
        let mut coords = self.coords.clone();
        insert_refined(&mut coords, parent as usize, label as usize).then_some(RefinedShape { coords })
    }
}

impl fmt::Display for RefinedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, &x) in self.coords.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            if x == INF {
                write!(f, "∞")?;
            } else {
                write!(f, "{x}")?;
            }
        }
        write!(f, ")")
    }
}

fn add_slots(x: u32, c: u32) -> u32 {
    if x == INF {
        INF
    } else {
        x + c
    }
}

fn refine_in_place(coords: &mut [u32]) {
    let k = coords.len() - 1;
    if let Some(j0) = coords.iter().enumerate().position(|(j, &x)| x == INF || x as usize > k - j) {
        coords[j0..].iter_mut().for_each(|x| *x = INF);
    }
}

/// Shape insertion without refinement.
fn insert_plain(coords: &mut [u32], parent: usize, label: usize) -> bool {
    let k = coords.len() - 1;
    if label == 0 || parent > label || label > k || coords[parent] == 0 {
        return false;
    }
    if parent == label {
        coords[parent] = add_slots(coords[parent], 1);
    } else {
        if coords[parent] != INF {
            coords[parent] -= 1;
        }
        coords[label] = add_slots(coords[label], 2);
    }
    true
}

fn insert_refined(coords: &mut [u32], parent: usize, label: usize) -> bool {
    let ok = insert_plain(coords, parent, label);
    if ok {
        refine_in_place(coords);
    }
    ok
}

/// `refine(x)`: cut the tuple at the first coordinate with `x_j >= k - j + 1`
/// and saturate everything from there on.
pub fn refine(raw: &[u32]) -> RefinedShape {
    assert!(raw.len() >= 2, "a shape over alphabet k has k + 1 >= 2 coordinates");
    let mut coords = raw.to_vec();
    refine_in_place(&mut coords);
    RefinedShape { coords }
}

/// Insertion on plain (unrefined) shapes; `None` is `⊥`.
pub fn insert_unrefined(raw: &[u32], parent: Label, label: Label) -> Option<Vec<u32>> {
    let mut coords = raw.to_vec();
    insert_plain(&mut coords, parent as usize, label as usize).then_some(coords)
}

/// Dense mixed-radix index over refined shapes of one alphabet size.
///
/// Index 0 is the empty heap. Any other shape has `x_0 = 0` and is encoded by
/// digits `d_j in 0..=k-j+1` for `j in 1..=k`, the top digit standing for `∞`.
#[derive(Clone, Debug)]
pub struct ShapeSpace {
    k: usize,
    stride: Vec<usize>,
    len: usize,
}

impl ShapeSpace {
    pub fn new(k: usize) -> Result<Self, SequenceError> {
        if k == 0 {
            return Err(SequenceError::EmptyAlphabet);
        }
        if k > MAX_ALPHABET {
            return Err(SequenceError::AlphabetTooLarge(k));
        }
        let mut stride = vec![0; k + 1];
        let mut acc = 1;
        for (j, s) in stride.iter_mut().enumerate().skip(1) {
            *s = acc;
            acc *= k - j + 2;
        }
        Ok(ShapeSpace { k, stride, len: acc + 1 })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of codes, `(k+1)! + 1`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn decode_into(&self, index: usize, coords: &mut [u32]) {
        if index == 0 {
            coords.fill(0);
            coords[0] = 1;
            return;
        }
        let mut rest = index - 1;
        coords[0] = 0;
        for (j, c) in coords.iter_mut().enumerate().skip(1) {
            let radix = self.k - j + 2;
            let digit = rest % radix;
            rest /= radix;
            *c = if digit == radix - 1 { INF } else { digit as u32 };
        }
    }

    fn encode(&self, coords: &[u32]) -> usize {
        if coords[0] == 1 {
            return 0;
        }
        1 + (1..=self.k)
            .map(|j| {
                let digit = if coords[j] == INF { self.k - j + 1 } else { coords[j] as usize };
                digit * self.stride[j]
            })
            .sum::<usize>()
    }

    pub fn index_of(&self, shape: &RefinedShape) -> usize {
        assert_eq!(shape.k(), self.k, "shape over a different alphabet");
        self.encode(&shape.coords)
    }

    pub fn shape_at(&self, index: usize) -> RefinedShape {
        let mut coords = vec![0; self.k + 1];
        self.decode_into(index, &mut coords);
        RefinedShape { coords }
    }

    /// Index of `shape(index)⟨parent ← label⟩`.
    pub fn successor(&self, index: usize, parent: Label, label: Label) -> Option<usize> {
        let mut coords = [0u32; MAX_ALPHABET + 1];
        let coords = &mut coords[..=self.k];
        self.decode_into(index, coords);
        insert_refined(coords, parent as usize, label as usize).then(|| self.encode(coords))
    }

    fn is_valid_code(&self, index: usize) -> bool {
        let mut coords = [0u32; MAX_ALPHABET + 1];
        let coords = &mut coords[..=self.k];
        self.decode_into(index, coords);
        let first_inf = coords.iter().position(|&x| x == INF).unwrap_or(coords.len());
        coords[first_inf..].iter().all(|&x| x == INF)
    }
}

/// Every refined shape over alphabet `k`, in index order.
pub fn enumerate_refined_shapes(k: usize) -> Result<Vec<RefinedShape>, SequenceError> {
    let space = ShapeSpace::new(k)?;
    Ok((0..space.len()).filter(|&i| space.is_valid_code(i)).map(|i| space.shape_at(i)).collect())
}

/// Refined shapes from which `target` is reachable by inserting `label`.
pub fn prev_shapes(target: &RefinedShape, label: Label) -> Result<Vec<RefinedShape>, SequenceError> {
    let space = ShapeSpace::new(target.k())?;
    let goal = space.index_of(target);
    Ok((0..space.len())
        .filter(|&i| space.is_valid_code(i))
        .filter(|&i| (0..=label).any(|b| space.successor(i, b, label) == Some(goal)))
        .map(|i| space.shape_at(i))
        .collect())
}

/// All layers `LHS[i, ·]` of the dynamic program for one input sequence.
///
/// Values are stored per layer over the shapes reached so far, in the order
/// they were first reached; a shape, once reached, stays reachable.
#[derive(Clone, Debug)]
pub struct LhsTable {
    space: ShapeSpace,
    reached: Vec<u32>,
    slot: Vec<u32>,
    layers: Vec<Vec<u32>>,
}

impl LhsTable {
    pub fn space(&self) -> &ShapeSpace {
        &self.space
    }

    /// Number of prefixes processed (`n`).
    pub fn prefixes(&self) -> usize {
        self.layers.len() - 1
    }

    fn value_at(&self, i: usize, index: usize) -> Option<u32> {
        let pos = self.slot[index];
        if pos == UNREACHED {
            return None;
        }
        self.layers[i].get(pos as usize).copied()
    }

    /// `LHS[i, x]`, or `None` when no subsequence of the first `i` items
    /// builds a heap of refined shape `x`.
    pub fn value(&self, i: usize, shape: &RefinedShape) -> Option<u32> {
        self.value_at(i, self.space.index_of(shape))
    }

    /// Reachable shapes after the whole sequence.
    pub fn reachable(&self) -> Vec<RefinedShape> {
        self.reached.iter().map(|&i| self.space.shape_at(i as usize)).collect()
    }

    pub fn best(&self) -> u32 {
        self.layers.last().and_then(|l| l.iter().copied().max()).unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct Lhs {
    pub length: usize,
    pub table: LhsTable,
}

/// Batch dynamic program; keeps every layer for [`lhs_reconstruct`].
pub fn lhs_dp(s: &Sequence) -> Result<Lhs, SequenceError> {
    let space = ShapeSpace::new(s.k() as usize)?;
    let mut slot = vec![UNREACHED; space.len()];
    slot[0] = 0;
    let mut reached = vec![0u32];
    let mut layers = Vec::with_capacity(s.len() + 1);
    layers.push(vec![0u32]);

    for &label in s.items() {
        let prev = layers.last().expect("layer 0 exists");
        let mut cur = prev.clone();
        for (pos, &val) in prev.iter().enumerate() {
            let from = reached[pos] as usize;
            for parent in 0..=label {
                let Some(to) = space.successor(from, parent, label) else { continue };
                let cand = val + 1;
                match slot[to] {
                    UNREACHED => {
                        slot[to] = reached.len() as u32;
                        reached.push(to as u32);
                        cur.push(cand);
                    }
                    p => {
                        let p = p as usize;
                        if cur[p] < cand {
                            cur[p] = cand;
                        }
                    }
                }
            }
        }
        layers.push(cur);
    }

    let table = LhsTable { space, reached, slot, layers };
    Ok(Lhs { length: table.best() as usize, table })
}

/// Backtracks through `table` (built by [`lhs_dp`] on `s`) and returns the
/// 0-based positions of one longest heapable subsequence.
pub fn lhs_reconstruct(table: &LhsTable, s: &Sequence) -> Vec<usize> {
    assert_eq!(table.prefixes(), s.len(), "table was built for a different sequence");
    let n = s.len();
    let last = &table.layers[n];
    let Some((best_pos, &best)) = last.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
    else {
        return Vec::new();
    };
    let mut shape = table.reached[best_pos] as usize;
    let mut value = best;
    let mut picked = Vec::with_capacity(best as usize);

    for i in (1..=n).rev() {
        if table.value_at(i - 1, shape) == Some(value) {
            continue;
        }
        let label = s.items()[i - 1];
        let prev = table.layers[i - 1]
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v + 1 == value)
            .map(|(pos, _)| table.reached[pos] as usize)
            .find(|&from| (0..=label).any(|b| table.space.successor(from, b, label) == Some(shape)))
            .expect("recurrence guarantees a predecessor");
        picked.push(i - 1);
        shape = prev;
        value -= 1;
    }
    debug_assert_eq!(value, 0);
    picked.reverse();
    picked
}

/// Length-only streaming evaluation holding two shape-indexed tables.
#[derive(Clone, Debug)]
pub struct LhsStream {
    space: ShapeSpace,
    reached: Vec<u32>,
    prev: Vec<u32>,
    cur: Vec<u32>,
    best: u32,
}

impl LhsStream {
    pub fn new(k: Label) -> Result<Self, SequenceError> {
        let space = ShapeSpace::new(k as usize)?;
        let len = space.len();
        let mut prev = vec![UNREACHED; len];
        prev[0] = 0;
        let mut reached = Vec::with_capacity(len);
        reached.push(0);
        Ok(LhsStream { space, reached, prev, cur: vec![UNREACHED; len], best: 0 })
    }

    pub fn k(&self) -> Label {
        self.space.k() as Label
    }

    pub fn feed(&mut self, label: Label) -> Result<u32, SequenceError> {
        let k = self.k();
        if label == 0 || label > k {
            return Err(SequenceError::LabelOutOfRange { index: 0, label, k });
        }
        self.cur.copy_from_slice(&self.prev);
        let known = self.reached.len();
        for pos in 0..known {
            let from = self.reached[pos] as usize;
            let cand = self.prev[from] + 1;
            for parent in 0..=label {
                let Some(to) = self.space.successor(from, parent, label) else { continue };
                if self.cur[to] == UNREACHED {
                    self.reached.push(to as u32);
                    self.cur[to] = cand;
                } else if self.cur[to] < cand {
                    self.cur[to] = cand;
                }
                self.best = self.best.max(cand);
            }
        }
        std::mem::swap(&mut self.prev, &mut self.cur);
        Ok(self.best)
    }

    pub fn current_length(&self) -> u32 {
        self.best
    }

    /// Entries held by the two rolling tables; fixed at construction.
    pub fn table_entries(&self) -> usize {
        self.prev.len() + self.cur.len()
    }

    /// Capacity of the reachable-shape list; fixed at construction.
    pub fn reachable_capacity(&self) -> usize {
        self.reached.capacity()
    }
}

/// Length of a longest heapable subsequence without keeping history.
pub fn lhs_length(s: &Sequence) -> Result<usize, SequenceError> {
    let mut stream = LhsStream::new(s.k())?;
    for &a in s.items() {
        stream.feed(a)?;
    }
    Ok(stream.current_length() as usize)
}

/// A sequence is heapable iff its longest heapable subsequence is itself.
pub fn is_heapable(s: &Sequence) -> Result<bool, SequenceError> {
    Ok(lhs_length(s)? == s.len())
}
