//! Graded posets with a unique bottom and top, stored as validated cover
//! digraphs. Provides intervals, duals, joins, the zip/unzip surgeries, a
//! thinness test and rank-respecting isomorphism search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque identifier of a poset element. Ids survive intervals, duals and
/// zips; joins offset the right operand's ids, and unzips mint fresh ids
/// above every existing one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u64);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Maximum element count accepted by the default isomorphism search.
pub const DEFAULT_ISO_BUDGET: usize = 200;

#[derive(Debug, Error)]
pub enum PosetError {
    #[error("malformed poset description: {0}")]
    Malformed(String),
    #[error("cover relation contains a cycle")]
    Cyclic,
    #[error("not graded: {0}")]
    NotGraded(String),
    #[error("bottom/top not unique: {0}")]
    NoUniqueBottomTop(String),
    #[error("unknown element id {0}")]
    UnknownElement(u64),
    #[error("elements are not comparable")]
    NotComparable,
    #[error("second element is not covered by the first")]
    NotACover,
    #[error("operation requires interior elements (neither bottom nor top)")]
    InteriorRequired,
    #[error("zip precondition violated: {0}")]
    ZipPrecondition(String),
    #[error("zip result is not graded")]
    ResultNotGraded,
    #[error("poset has {size} elements, above the isomorphism budget {budget}")]
    TooLarge { size: usize, budget: usize },
}

/// Serialized form of a graded poset. `elements` are sorted by id and
/// `covers` lexicographically, so serialization is canonical.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetData {
    pub elements: Vec<ElementEntry>,
    pub covers: Vec<[u64; 2]>,
    pub bottom: u64,
    pub top: u64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ElementEntry {
    pub id: u64,
    pub rank: u64,
}

/// A finite graded poset with unique bottom `0̂` (rank 0) and top `1̂`
/// (rank n+1) in which every element lies on a maximal chain from bottom
/// to top and every cover raises rank by exactly one.
#[derive(Clone, Debug)]
pub struct GradedPoset {
    /// Element ids, ascending; the position in this vector is the dense index.
    ids: Vec<u64>,
    ranks: Vec<usize>,
    ups: Vec<Vec<usize>>,
    downs: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

/// Result of an unzip: the rewritten poset plus the two freshly minted
/// elements (`new_upper` covers `new_lower`).
#[derive(Clone, Debug)]
pub struct Unzipped {
    pub poset: GradedPoset,
    pub new_upper: ElementId,
    pub new_lower: ElementId,
}

/// A closed interval `[lower, upper]`, repackaged as a graded poset whose
/// elements keep their original ids and whose ranks are shifted so that
/// `lower` has rank 0.
#[derive(Clone, Debug)]
pub struct PosetInterval {
    pub lower: ElementId,
    pub upper: ElementId,
    pub poset: GradedPoset,
}

impl GradedPoset {
    /// Builds and fully checks a poset from id-level parts.
    pub fn from_parts<I, C>(elements: I, covers: C, bottom: u64, top: u64) -> Result<Self, PosetError>
    where
        I: IntoIterator<Item = (u64, usize)>,
        C: IntoIterator<Item = (u64, u64)>,
    {
        let mut entries: Vec<(u64, usize)> = elements.into_iter().collect();
        entries.sort_unstable();
        let ids: Vec<u64> = entries.iter().map(|&(id, _)| id).collect();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(PosetError::Malformed(format!("duplicate element id {}", w[0])));
            }
        }
        let ranks: Vec<usize> = entries.iter().map(|&(_, r)| r).collect();
        let idx_of = |id: u64| -> Result<usize, PosetError> {
            ids.binary_search(&id).map_err(|_| PosetError::UnknownElement(id))
        };

        let n = ids.len();
        let mut ups: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut downs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (lo, hi) in covers {
            if lo == hi {
                return Err(PosetError::Cyclic);
            }
            let (l, h) = (idx_of(lo)?, idx_of(hi)?);
            if ranks[h] != ranks[l] + 1 {
                return Err(PosetError::NotGraded(format!(
                    "cover {lo} < {hi} jumps from rank {} to rank {}",
                    ranks[l], ranks[h]
                )));
            }
            ups[l].insert(h);
            downs[h].insert(l);
        }

        let bottom = idx_of(bottom)?;
        let top = idx_of(top)?;
        if bottom == top {
            return Err(PosetError::Malformed("bottom equals top".into()));
        }
        if ranks[bottom] != 0 {
            return Err(PosetError::NotGraded(format!("bottom has rank {}", ranks[bottom])));
        }
        for i in 0..n {
            if downs[i].is_empty() && i != bottom {
                return Err(PosetError::NoUniqueBottomTop(format!(
                    "element {} is minimal but is not the bottom",
                    ids[i]
                )));
            }
            if ups[i].is_empty() && i != top {
                return Err(PosetError::NoUniqueBottomTop(format!(
                    "element {} is maximal but is not the top",
                    ids[i]
                )));
            }
        }

        Ok(GradedPoset {
            ids,
            ranks,
            ups: ups.into_iter().map(|s| s.into_iter().collect()).collect(),
            downs: downs.into_iter().map(|s| s.into_iter().collect()).collect(),
            bottom,
            top,
        })
    }

    /// Validates a deserialized description.
    pub fn validate(data: &PosetData) -> Result<Self, PosetError> {
        GradedPoset::from_parts(
            data.elements.iter().map(|e| (e.id, e.rank as usize)),
            data.covers.iter().map(|c| (c[0], c[1])),
            data.bottom,
            data.top,
        )
    }

    /// Canonical serializable description: elements sorted by id, covers
    /// lexicographically.
    pub fn to_data(&self) -> PosetData {
        let elements = self
            .ids
            .iter()
            .zip(&self.ranks)
            .map(|(&id, &rank)| ElementEntry { id, rank: rank as u64 })
            .collect();
        let mut covers: Vec<[u64; 2]> = Vec::new();
        for (l, us) in self.ups.iter().enumerate() {
            for &h in us {
                covers.push([self.ids[l], self.ids[h]]);
            }
        }
        covers.sort_unstable();
        PosetData {
            elements,
            covers,
            bottom: self.ids[self.bottom],
            top: self.ids[self.top],
        }
    }

    /// Pretty JSON rendering of `to_data`, with a trailing newline. The
    /// output is byte-identical across runs for equal posets.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_data()).expect("poset serialization");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, PosetError> {
        let data: PosetData =
            serde_json::from_str(s).map_err(|e| PosetError::Malformed(e.to_string()))?;
        GradedPoset::validate(&data)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `n` of an `n+1`-rank poset: `rank(top) - 1`.
    pub fn n(&self) -> usize {
        self.ranks[self.top] - 1
    }

    pub fn bottom(&self) -> ElementId {
        ElementId(self.ids[self.bottom])
    }

    pub fn top(&self) -> ElementId {
        ElementId(self.ids[self.top])
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.ids.iter().map(|&id| ElementId(id))
    }

    pub fn has_element(&self, e: ElementId) -> bool {
        self.ids.binary_search(&e.0).is_ok()
    }

    pub fn max_id(&self) -> u64 {
        *self.ids.last().expect("posets are nonempty")
    }

    pub fn rank_of(&self, e: ElementId) -> Result<usize, PosetError> {
        Ok(self.ranks[self.idx(e)?])
    }

    /// Elements of a given rank, ascending by id.
    pub fn rank_layer(&self, rank: usize) -> Vec<ElementId> {
        self.ids
            .iter()
            .zip(&self.ranks)
            .filter(|&(_, &r)| r == rank)
            .map(|(&id, _)| ElementId(id))
            .collect()
    }

    pub fn up_covers(&self, e: ElementId) -> Result<Vec<ElementId>, PosetError> {
        let i = self.idx(e)?;
        Ok(self.ups[i].iter().map(|&j| ElementId(self.ids[j])).collect())
    }

    pub fn down_covers(&self, e: ElementId) -> Result<Vec<ElementId>, PosetError> {
        let i = self.idx(e)?;
        Ok(self.downs[i].iter().map(|&j| ElementId(self.ids[j])).collect())
    }

    pub fn covers(&self, lower: ElementId, upper: ElementId) -> bool {
        match (self.idx(lower), self.idx(upper)) {
            (Ok(l), Ok(h)) => self.ups[l].binary_search(&h).is_ok(),
            _ => false,
        }
    }

    /// Strict order test `a < b`.
    pub fn less(&self, a: ElementId, b: ElementId) -> Result<bool, PosetError> {
        let (ai, bi) = (self.idx(a)?, self.idx(b)?);
        Ok(self.reachable_up(ai, bi))
    }

    pub fn leq(&self, a: ElementId, b: ElementId) -> Result<bool, PosetError> {
        Ok(a == b && self.has_element(a) || self.less(a, b)?)
    }

    fn idx(&self, e: ElementId) -> Result<usize, PosetError> {
        self.ids.binary_search(&e.0).map_err(|_| PosetError::UnknownElement(e.0))
    }

    fn reachable_up(&self, from: usize, to: usize) -> bool {
        if self.ranks[from] >= self.ranks[to] {
            return false;
        }
        let mut seen = vec![false; self.ids.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.ups[u] {
                if w == to {
                    return true;
                }
                if !seen[w] && self.ranks[w] < self.ranks[to] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Dense strict-order closure: `row i` holds the set of dense indices
    /// strictly above element `i`.
    pub(crate) fn strict_closure(&self) -> BitMatrix {
        let n = self.ids.len();
        let mut m = BitMatrix::new(n);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.ranks[b].cmp(&self.ranks[a]));
        for &u in &order {
            for &w in &self.ups[u] {
                m.set(u, w);
                m.or_row_into(u, w);
            }
        }
        m
    }

    /// The closed interval `[x, y]`; errors with `NotComparable` when
    /// `x ≤ y` fails.
    pub fn interval(&self, x: ElementId, y: ElementId) -> Result<PosetInterval, PosetError> {
        let xi = self.idx(x)?;
        let yi = self.idx(y)?;
        if !(xi == yi || self.reachable_up(xi, yi)) {
            return Err(PosetError::NotComparable);
        }
        // Elements between x and y: ascend from x, then keep those that reach y.
        let n = self.ids.len();
        let mut above_x = vec![false; n];
        above_x[xi] = true;
        let mut stack = vec![xi];
        while let Some(u) = stack.pop() {
            for &w in &self.ups[u] {
                if !above_x[w] && self.ranks[w] <= self.ranks[yi] {
                    above_x[w] = true;
                    stack.push(w);
                }
            }
        }
        let mut keep = vec![false; n];
        keep[yi] = above_x[yi];
        let mut stack = vec![yi];
        while let Some(u) = stack.pop() {
            for &w in &self.downs[u] {
                if above_x[w] && !keep[w] {
                    keep[w] = true;
                    stack.push(w);
                }
            }
        }
        let base = self.ranks[xi];
        let elements: Vec<(u64, usize)> = (0..n)
            .filter(|&i| keep[i])
            .map(|i| (self.ids[i], self.ranks[i] - base))
            .collect();
        let mut covers = Vec::new();
        for i in 0..n {
            if !keep[i] {
                continue;
            }
            for &w in &self.ups[i] {
                if keep[w] {
                    covers.push((self.ids[i], self.ids[w]));
                }
            }
        }
        let poset = GradedPoset::from_parts(elements, covers, self.ids[xi], self.ids[yi])?;
        Ok(PosetInterval { lower: x, upper: y, poset })
    }

    /// Order-theoretic dual: covers reverse and ranks flip, ids survive.
    pub fn dual(&self) -> GradedPoset {
        let top_rank = self.ranks[self.top];
        let elements = self
            .ids
            .iter()
            .zip(&self.ranks)
            .map(|(&id, &r)| (id, top_rank - r));
        let mut covers = Vec::new();
        for (l, us) in self.ups.iter().enumerate() {
            for &h in us {
                covers.push((self.ids[h], self.ids[l]));
            }
        }
        GradedPoset::from_parts(elements, covers, self.ids[self.top], self.ids[self.bottom])
            .expect("dual of a valid poset is valid")
    }

    /// Poset join `P * Q` on `(P − top) ∪ (Q − bottom)`, with every element
    /// of the first operand below every element of the second. The right
    /// operand's ids are offset past `self.max_id()`; bottom comes from
    /// `self`, top from `other`.
    pub fn join(&self, other: &GradedPoset) -> GradedPoset {
        let offset = self.max_id() + 1;
        let shift = self.n(); // rank added to other's elements
        let mut elements: Vec<(u64, usize)> = Vec::new();
        let mut covers: Vec<(u64, u64)> = Vec::new();
        for i in 0..self.ids.len() {
            if i == self.top {
                continue;
            }
            elements.push((self.ids[i], self.ranks[i]));
            for &h in &self.ups[i] {
                if h != self.top {
                    covers.push((self.ids[i], self.ids[h]));
                }
            }
        }
        for j in 0..other.ids.len() {
            if j == other.bottom {
                continue;
            }
            elements.push((other.ids[j] + offset, other.ranks[j] + shift));
            for &h in &other.ups[j] {
                covers.push((other.ids[j] + offset, other.ids[h] + offset));
            }
        }
        // Coatoms of self gain covers to atoms of other.
        for &u in &self.downs[self.top] {
            for &v in &other.ups[other.bottom] {
                covers.push((self.ids[u], other.ids[v] + offset));
            }
        }
        GradedPoset::from_parts(elements, covers, self.ids[self.bottom], other.ids[other.top] + offset)
            .expect("join of valid posets is valid")
    }

    /// Every rank-2 interval has exactly two interior elements.
    pub fn is_thin(&self) -> bool {
        let n = self.ids.len();
        for u in 0..n {
            let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
            for &m in &self.ups[u] {
                for &w in &self.ups[m] {
                    *counts.entry(w).or_insert(0) += 1;
                }
            }
            if counts.values().any(|&c| c != 2) {
                return false;
            }
        }
        true
    }

    /// Unzips the cover `y < x` (both interior): the cover is removed and
    /// fresh elements `x'` (at `rank x`) and `y'` (at `rank y`) are added
    /// with `x' < w` for every former cover `x < w`, `w < y'` for every
    /// former cover `w < y`, plus `y' < x'`, `y < x'` and `y' < x`.
    pub fn unzip(&self, x: ElementId, y: ElementId) -> Result<Unzipped, PosetError> {
        let xi = self.idx(x)?;
        let yi = self.idx(y)?;
        if xi == self.bottom || xi == self.top || yi == self.bottom || yi == self.top {
            return Err(PosetError::InteriorRequired);
        }
        if self.downs[xi].binary_search(&yi).is_err() {
            return Err(PosetError::NotACover);
        }
        let xp = self.max_id() + 1;
        let yp = self.max_id() + 2;
        let mut elements: Vec<(u64, usize)> =
            self.ids.iter().zip(&self.ranks).map(|(&id, &r)| (id, r)).collect();
        elements.push((xp, self.ranks[xi]));
        elements.push((yp, self.ranks[yi]));
        let mut covers: Vec<(u64, u64)> = Vec::new();
        for (l, us) in self.ups.iter().enumerate() {
            for &h in us {
                if l == yi && h == xi {
                    continue; // the unzipped cover disappears
                }
                covers.push((self.ids[l], self.ids[h]));
            }
        }
        for &w in &self.ups[xi] {
            covers.push((xp, self.ids[w]));
        }
        for &w in &self.downs[yi] {
            covers.push((self.ids[w], yp));
        }
        covers.push((yp, xp));
        covers.push((self.ids[yi], xp));
        covers.push((yp, self.ids[xi]));
        let poset =
            GradedPoset::from_parts(elements, covers, self.ids[self.bottom], self.ids[self.top])?;
        Ok(Unzipped { poset, new_upper: ElementId(xp), new_lower: ElementId(yp) })
    }

    /// Unzips `(x, y)` and then `k−1` more times, each time targeting the
    /// pair created by the previous step. `k = 0` returns the poset as is.
    pub fn unzip_k(&self, x: ElementId, y: ElementId, k: u64) -> Result<GradedPoset, PosetError> {
        if k == 0 {
            return Ok(self.clone());
        }
        let mut cur = self.unzip(x, y)?;
        for _ in 1..k {
            cur = cur.poset.unzip(cur.new_upper, cur.new_lower)?;
        }
        Ok(cur.poset)
    }

    /// Zips the vee `x` over `{y, z}`: requires a thin poset in which `x`
    /// covers exactly `y` and `z`, `x` is the unique minimal upper bound of
    /// `y` and `z`, and `y`, `z` cover the same elements. Deletes `x`, `y`
    /// and rewires everything above `y` to sit above `z`.
    pub fn zip(&self, x: ElementId, y: ElementId, z: ElementId) -> Result<GradedPoset, PosetError> {
        let xi = self.idx(x)?;
        let yi = self.idx(y)?;
        let zi = self.idx(z)?;
        for &i in &[xi, yi, zi] {
            if i == self.bottom || i == self.top {
                return Err(PosetError::InteriorRequired);
            }
        }
        if yi == zi || xi == yi || xi == zi {
            return Err(PosetError::ZipPrecondition("x, y, z must be distinct".into()));
        }
        if !self.is_thin() {
            return Err(PosetError::ZipPrecondition("poset is not thin".into()));
        }
        if self.downs[xi] != vec![yi.min(zi), yi.max(zi)] {
            return Err(PosetError::ZipPrecondition(format!(
                "{x} does not cover exactly {{{y}, {z}}}"
            )));
        }
        if self.downs[yi] != self.downs[zi] {
            return Err(PosetError::ZipPrecondition(format!(
                "{y} and {z} cover different element sets"
            )));
        }
        let up = self.strict_closure();
        // Common strict upper bounds of y and z must have x as their unique
        // minimal member.
        let n = self.ids.len();
        let bounds: Vec<usize> =
            (0..n).filter(|&w| up.get(yi, w) && up.get(zi, w)).collect();
        for &w in &bounds {
            if w != xi && !up.get(xi, w) {
                return Err(PosetError::ZipPrecondition(format!(
                    "{x} is not the unique minimal upper bound of {y} and {z}"
                )));
            }
        }
        if !bounds.contains(&xi) {
            return Err(PosetError::ZipPrecondition(format!(
                "{x} is not an upper bound of {y} and {z}"
            )));
        }

        // New strict order on the surviving elements: u < v iff u < v held
        // before, or u ≤ z and y < v (the rewired relations through z).
        let keep: Vec<usize> = (0..n).filter(|&i| i != xi && i != yi).collect();
        let less = |u: usize, v: usize| -> bool {
            up.get(u, v) || ((u == zi || up.get(u, zi)) && up.get(yi, v))
        };
        let mut covers: Vec<(u64, u64)> = Vec::new();
        for &u in &keep {
            'pair: for &v in &keep {
                if !less(u, v) {
                    continue;
                }
                for &m in &keep {
                    if m != u && m != v && less(u, m) && less(m, v) {
                        continue 'pair;
                    }
                }
                covers.push((self.ids[u], self.ids[v]));
            }
        }
        let elements = keep.iter().map(|&i| (self.ids[i], self.ranks[i]));
        GradedPoset::from_parts(elements, covers, self.ids[self.bottom], self.ids[self.top])
            .map_err(|_| PosetError::ResultNotGraded)
    }
}

/// Rank-respecting isomorphism test with the default element budget.
pub fn is_isomorphic(p: &GradedPoset, q: &GradedPoset) -> Result<bool, PosetError> {
    is_isomorphic_budget(p, q, DEFAULT_ISO_BUDGET)
}

/// Rank-respecting isomorphism test: color refinement on (rank, cover
/// degrees) followed by backtracking. Errors with `TooLarge` above `budget`.
pub fn is_isomorphic_budget(
    p: &GradedPoset,
    q: &GradedPoset,
    budget: usize,
) -> Result<bool, PosetError> {
    let size = p.len().max(q.len());
    if size > budget {
        return Err(PosetError::TooLarge { size, budget });
    }
    if p.len() != q.len() || p.n() != q.n() {
        return Ok(false);
    }
    let cover_count = |g: &GradedPoset| g.ups.iter().map(Vec::len).sum::<usize>();
    if cover_count(p) != cover_count(q) {
        return Ok(false);
    }

    let np = p.len();
    let mut cp: Vec<u64> = p.ranks.iter().map(|&r| r as u64).collect();
    let mut cq: Vec<u64> = q.ranks.iter().map(|&r| r as u64).collect();
    loop {
        let sig = |g: &GradedPoset, colors: &[u64], i: usize| {
            let mut down: Vec<u64> = g.downs[i].iter().map(|&j| colors[j]).collect();
            let mut upv: Vec<u64> = g.ups[i].iter().map(|&j| colors[j]).collect();
            down.sort_unstable();
            upv.sort_unstable();
            (colors[i], down, upv)
        };
        let mut table: BTreeMap<(u64, Vec<u64>, Vec<u64>), u64> = BTreeMap::new();
        let sp: Vec<_> = (0..np).map(|i| sig(p, &cp, i)).collect();
        let sq: Vec<_> = (0..np).map(|i| sig(q, &cq, i)).collect();
        for s in sp.iter().chain(sq.iter()) {
            let next = table.len() as u64;
            table.entry(s.clone()).or_insert(next);
        }
        let new_cp: Vec<u64> = sp.iter().map(|s| table[s]).collect();
        let new_cq: Vec<u64> = sq.iter().map(|s| table[s]).collect();
        // Colors are renumbered through the shared table every round, so
        // the vectors stop changing exactly when the partition is stable.
        let stable = new_cp == cp && new_cq == cq;
        cp = new_cp;
        cq = new_cq;
        if stable {
            break;
        }
    }
    {
        let mut a = cp.clone();
        let mut b = cq.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Ok(false);
        }
    }

    // Candidate pools per color in q.
    let mut pool: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (j, &c) in cq.iter().enumerate() {
        pool.entry(c).or_default().push(j);
    }
    // Most-constrained-first ordering of p's elements.
    let mut order: Vec<usize> = (0..np).collect();
    order.sort_by_key(|&i| (pool[&cp[i]].len(), cp[i], i));

    let mut image: Vec<Option<usize>> = vec![None; np];
    let mut used = vec![false; np];
    #[allow(clippy::too_many_arguments)]
    fn backtrack(
        p: &GradedPoset,
        q: &GradedPoset,
        cp: &[u64],
        cq: &[u64],
        pool: &BTreeMap<u64, Vec<usize>>,
        order: &[usize],
        depth: usize,
        image: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let u = order[depth];
        for &v in &pool[&cp[u]] {
            if used[v] || cq[v] != cp[u] {
                continue;
            }
            let ok = p.ups[u].iter().all(|&w| match image[w] {
                Some(iw) => q.ups[v].binary_search(&iw).is_ok(),
                None => true,
            }) && p.downs[u].iter().all(|&w| match image[w] {
                Some(iw) => q.downs[v].binary_search(&iw).is_ok(),
                None => true,
            });
            if !ok {
                continue;
            }
            image[u] = Some(v);
            used[v] = true;
            if backtrack(p, q, cp, cq, pool, order, depth + 1, image, used) {
                return true;
            }
            image[u] = None;
            used[v] = false;
        }
        false
    }
    Ok(backtrack(p, q, &cp, &cq, &pool, &order, 0, &mut image, &mut used))
}

/// Row-major square bit matrix used for strict-order closures.
pub(crate) struct BitMatrix {
    words: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix { words, rows: vec![0; n * words] }
    }

    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// `row[dst] |= row[src]`.
    pub(crate) fn or_row_into(&mut self, dst: usize, src: usize) {
        for k in 0..self.words {
            let v = self.rows[src * self.words + k];
            self.rows[dst * self.words + k] |= v;
        }
    }
}
