//! Simplicial complexes stored as antichains of facets over integer
//! vertices. Covers order complexes of graded posets, links, stellar edge
//! subdivision, edge contraction, the link condition, joins, flagness and
//! the exact f/h/gamma-vector pipeline.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::GradedPoset;
use crate::{int, Int};

/// A face: strictly ascending vertex ids.
pub type Face = Vec<u64>;

#[derive(Debug, Error)]
pub enum SimplicialError {
    #[error("malformed complex description: {0}")]
    Malformed(String),
    #[error("not a face of the complex")]
    NotAFace,
    #[error("not an edge of the complex")]
    NotAnEdge,
    #[error("vertex {0} already exists")]
    VertexCollision(u64),
    #[error("h-vector is not symmetric, gamma-vector is undefined")]
    HNotSymmetric,
}

/// Serialized form of a complex: sorted vertex list (exactly the union of
/// the facets) and lexicographically sorted facets.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexData {
    pub vertices: Vec<u64>,
    pub facets: Vec<Vec<u64>>,
}

/// A finite simplicial complex. The facet set `{}` is the void complex;
/// `{∅}` is the empty complex whose only face is the empty face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    facets: BTreeSet<Face>,
}

/// f-vector `(1, f_0, …, f_{n-1})` of an `(n-1)`-dimensional complex; the
/// leading entry counts the empty face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector(pub Vec<Int>);

/// h-vector `(h_0, …, h_n)` defined by `Σ h_i x^{n-i} = Σ f_{i-1} (x-1)^{n-i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector(pub Vec<Int>);

/// gamma-vector `(γ_0, …, γ_{⌊n/2⌋})` of a symmetric h-vector, defined by
/// `Σ h_i x^i = Σ γ_i x^i (1+x)^{n-2i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaVector(pub Vec<Int>);

impl std::fmt::Display for FVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_tuple(f, &self.0)
    }
}
impl std::fmt::Display for HVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_tuple(f, &self.0)
    }
}
impl std::fmt::Display for GammaVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn write_tuple(f: &mut std::fmt::Formatter<'_>, v: &[Int]) -> std::fmt::Result {
    write!(f, "(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Binomial coefficient as an arbitrary-precision integer.
pub(crate) fn binom(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    num_integer::binomial(Int::from(n), Int::from(k))
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

fn normalize_face(f: &[u64]) -> Face {
    let mut v: Face = f.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

impl SimplicialComplex {
    /// The void complex, which has no faces at all.
    pub fn void() -> Self {
        SimplicialComplex { facets: BTreeSet::new() }
    }

    /// The empty complex `{∅}`.
    pub fn empty() -> Self {
        SimplicialComplex { facets: BTreeSet::from([Vec::new()]) }
    }

    /// Builds a complex from generating faces; the inclusion-maximal ones
    /// become the facets.
    pub fn from_faces<I, F>(faces: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[u64]>,
    {
        let all: BTreeSet<Face> = faces.into_iter().map(|f| normalize_face(f.as_ref())).collect();
        let facets = all
            .iter()
            .filter(|f| !all.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
            .cloned()
            .collect();
        SimplicialComplex { facets }
    }

    pub fn facets(&self) -> &BTreeSet<Face> {
        &self.facets
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn vertices(&self) -> BTreeSet<u64> {
        self.facets.iter().flatten().copied().collect()
    }

    /// Dimension of the largest facet; `None` for the void complex and
    /// `Some(-1)` for the empty complex.
    pub fn dim(&self) -> Option<i64> {
        self.facets.iter().map(|f| f.len() as i64 - 1).max()
    }

    pub fn is_pure(&self) -> bool {
        let mut lens = self.facets.iter().map(Vec::len);
        match lens.next() {
            None => true,
            Some(first) => lens.all(|l| l == first),
        }
    }

    pub fn has_face(&self, f: &[u64]) -> bool {
        let f = normalize_face(f);
        self.facets.iter().any(|m| is_subset(&f, m))
    }

    /// Every face, the empty face included (absent only for the void
    /// complex).
    pub fn all_faces(&self) -> BTreeSet<Face> {
        self.all_faces_capped(usize::MAX).expect("uncapped enumeration")
    }

    /// Face enumeration that aborts with `None` once more than `cap` faces
    /// exist.
    pub fn all_faces_capped(&self, cap: usize) -> Option<BTreeSet<Face>> {
        let mut out: BTreeSet<Face> = BTreeSet::new();
        for facet in &self.facets {
            let k = facet.len();
            assert!(k < 32, "facet too large to enumerate");
            for mask in 0..(1u64 << k) {
                let face: Face = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| facet[i]).collect();
                out.insert(face);
                if out.len() > cap {
                    return None;
                }
            }
        }
        Some(out)
    }

    /// Number of faces, the empty face included.
    pub fn face_count(&self) -> usize {
        self.all_faces().len()
    }

    /// `lk(F) = {G : G ∩ F = ∅, G ∪ F ∈ Δ}`.
    pub fn link(&self, f: &[u64]) -> Result<SimplicialComplex, SimplicialError> {
        let f = normalize_face(f);
        if !self.has_face(&f) {
            return Err(SimplicialError::NotAFace);
        }
        let facets = self
            .facets
            .iter()
            .filter(|m| is_subset(&f, m))
            .map(|m| m.iter().copied().filter(|v| !f.contains(v)).collect::<Face>());
        Ok(SimplicialComplex { facets: facets.collect() })
    }

    /// Stellar subdivision of the edge `{i, j}` by the fresh vertex `v`:
    /// faces containing the edge are cut, and `w ∪ {v}`, `w ∪ {i, v}`,
    /// `w ∪ {j, v}` appear for every `w` in the edge's link.
    pub fn edge_subdivision(
        &self,
        i: u64,
        j: u64,
        v: u64,
    ) -> Result<SimplicialComplex, SimplicialError> {
        if i == j || !self.has_face(&[i, j]) {
            return Err(SimplicialError::NotAnEdge);
        }
        if self.vertices().contains(&v) {
            return Err(SimplicialError::VertexCollision(v));
        }
        let edge = normalize_face(&[i, j]);
        let mut facets: BTreeSet<Face> = BTreeSet::new();
        for m in &self.facets {
            if !is_subset(&edge, m) {
                facets.insert(m.clone());
            } else {
                for drop in [i, j] {
                    let mut f: Face = m.iter().copied().filter(|&x| x != drop).collect();
                    f.push(v);
                    f.sort_unstable();
                    facets.insert(f);
                }
            }
        }
        Ok(SimplicialComplex { facets })
    }

    /// Contraction of `i` onto `j`: every face through `i` is replaced by
    /// the same face with `i` renamed to `j`.
    pub fn edge_contraction(&self, i: u64, j: u64) -> SimplicialComplex {
        let mapped = self.facets.iter().map(|m| {
            let f: Face = m.iter().map(|&x| if x == i { j } else { x }).collect();
            normalize_face(&f)
        });
        SimplicialComplex::from_faces(mapped)
    }

    /// The link condition for the edge `{i, j}`:
    /// `lk({i}) ∩ lk({j}) = lk({i, j})`.
    pub fn link_condition(&self, i: u64, j: u64) -> Result<bool, SimplicialError> {
        if i == j || !self.has_face(&[i, j]) {
            return Err(SimplicialError::NotAnEdge);
        }
        let li = self.link(&[i])?.all_faces();
        let lj = self.link(&[j])?.all_faces();
        let lij = self.link(&[i, j])?.all_faces();
        let meet: BTreeSet<Face> = li.intersection(&lj).cloned().collect();
        Ok(meet == lij)
    }

    /// Join of two complexes. Vertex sets must be disjoint; when they are
    /// not, the right operand is relabeled past `self`'s largest vertex.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mine = self.vertices();
        let theirs = other.vertices();
        let offset = if mine.is_disjoint(&theirs) {
            0
        } else {
            mine.iter().max().map_or(0, |m| m + 1)
        };
        let mut facets = BTreeSet::new();
        for a in &self.facets {
            for b in &other.facets {
                let mut f = a.clone();
                f.extend(b.iter().map(|&x| x + offset));
                f.sort_unstable();
                facets.insert(f);
            }
        }
        SimplicialComplex { facets }
    }

    /// True when every set of pairwise-adjacent vertices is a face,
    /// checked by walking cliques of the 1-skeleton against the face set.
    pub fn is_flag(&self) -> bool {
        let faces = self.all_faces();
        let verts: Vec<u64> = self.vertices().into_iter().collect();
        let mut adj: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for f in &faces {
            if f.len() == 2 {
                adj.entry(f[0]).or_default().insert(f[1]);
                adj.entry(f[1]).or_default().insert(f[0]);
            }
        }
        let empty = BTreeSet::new();
        fn grow(
            clique: &mut Face,
            candidates: &[u64],
            faces: &BTreeSet<Face>,
            adj: &BTreeMap<u64, BTreeSet<u64>>,
            empty: &BTreeSet<u64>,
        ) -> bool {
            for (pos, &v) in candidates.iter().enumerate() {
                clique.push(v);
                if !faces.contains(clique) {
                    clique.pop();
                    return false;
                }
                let nv = adj.get(&v).unwrap_or(empty);
                let next: Vec<u64> =
                    candidates[pos + 1..].iter().copied().filter(|u| nv.contains(u)).collect();
                if !grow(clique, &next, faces, adj, empty) {
                    clique.pop();
                    return false;
                }
                clique.pop();
            }
            true
        }
        for (pos, &v) in verts.iter().enumerate() {
            let nv = adj.get(&v).unwrap_or(&empty);
            let cands: Vec<u64> =
                verts[pos + 1..].iter().copied().filter(|u| nv.contains(u)).collect();
            let mut clique = vec![v];
            if !grow(&mut clique, &cands, &faces, &adj, &empty) {
                return false;
            }
        }
        true
    }

    /// Exact f-vector `(1, f_0, …, f_{dim})`.
    pub fn f_vector(&self) -> FVector {
        if self.is_void() {
            return FVector(Vec::new());
        }
        let n = (self.dim().expect("non-void") + 1) as usize;
        let mut counts = vec![Int::zero(); n + 1];
        for f in self.all_faces() {
            counts[f.len()] += 1;
        }
        FVector(counts)
    }

    /// Exact h-vector computed from the f-vector.
    pub fn h_vector(&self) -> HVector {
        h_from_f(&self.f_vector())
    }

    /// Exact gamma-vector; errors when the h-vector is not symmetric.
    pub fn gamma_vector(&self) -> Result<GammaVector, SimplicialError> {
        gamma_from_h(&self.h_vector())
    }

    pub fn to_data(&self) -> ComplexData {
        ComplexData {
            vertices: self.vertices().into_iter().collect(),
            facets: self.facets.iter().cloned().collect(),
        }
    }

    /// Validates a deserialized description: facets strictly ascending and
    /// mutually incomparable, vertices exactly their union.
    pub fn validate(data: &ComplexData) -> Result<Self, SimplicialError> {
        for f in &data.facets {
            if f.windows(2).any(|w| w[0] >= w[1]) {
                return Err(SimplicialError::Malformed(format!(
                    "facet {f:?} is not strictly ascending"
                )));
            }
        }
        let facets: BTreeSet<Face> = data.facets.iter().cloned().collect();
        if facets.len() != data.facets.len() {
            return Err(SimplicialError::Malformed("duplicate facet".into()));
        }
        for f in &facets {
            if facets.iter().any(|g| g.len() > f.len() && is_subset(f, g)) {
                return Err(SimplicialError::Malformed(format!(
                    "facet {f:?} is contained in another facet"
                )));
            }
        }
        let complex = SimplicialComplex { facets };
        let union: Vec<u64> = complex.vertices().into_iter().collect();
        if union != data.vertices {
            return Err(SimplicialError::Malformed(
                "vertex list does not equal the union of the facets".into(),
            ));
        }
        Ok(complex)
    }

    /// Pretty JSON rendering of `to_data`, canonical per complex.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_data()).expect("complex serialization");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, SimplicialError> {
        let data: ComplexData =
            serde_json::from_str(s).map_err(|e| SimplicialError::Malformed(e.to_string()))?;
        SimplicialComplex::validate(&data)
    }
}

/// h-vector from an f-vector via `Σ h_i x^{n-i} = Σ f_{i-1} (x-1)^{n-i}`.
pub fn h_from_f(f: &FVector) -> HVector {
    let n = f.0.len().saturating_sub(1);
    let mut poly = vec![Int::zero(); n + 1]; // coefficient of x^k at index k
    for (i, fi) in f.0.iter().enumerate() {
        // f_{i-1} (x-1)^{n-i}
        let m = n - i;
        for (k, cell) in poly.iter_mut().take(m + 1).enumerate() {
            let sign = if (m - k).is_multiple_of(2) { 1 } else { -1 };
            *cell += fi * binom(m, k) * int(sign);
        }
    }
    HVector((0..=n).map(|i| poly[n - i].clone()).collect())
}

/// gamma-vector from a symmetric h-vector by triangular elimination
/// against the basis `x^i (1+x)^{n-2i}`.
pub fn gamma_from_h(h: &HVector) -> Result<GammaVector, SimplicialError> {
    let n = h.0.len().saturating_sub(1);
    for i in 0..=n {
        if h.0[i] != h.0[n - i] {
            return Err(SimplicialError::HNotSymmetric);
        }
    }
    let mut cur = h.0.clone();
    let mut gamma = Vec::with_capacity(n / 2 + 1);
    for i in 0..=n / 2 {
        let g = cur[i].clone();
        let m = n - 2 * i;
        for k in 0..=m {
            cur[i + k] -= &g * binom(m, k);
        }
        gamma.push(g);
    }
    debug_assert!(cur.iter().all(Int::is_zero), "symmetric h must reduce to zero");
    Ok(GammaVector(gamma))
}

/// Order complex of the open interior of a graded poset: vertices are the
/// elements strictly between bottom and top, facets the maximal chains.
pub fn order_complex(p: &GradedPoset) -> SimplicialComplex {
    let n = p.n();
    if n == 0 {
        return SimplicialComplex::empty();
    }
    let mut facets: BTreeSet<Face> = BTreeSet::new();
    let mut stack: Vec<(crate::poset::ElementId, Vec<u64>)> = p
        .rank_layer(1)
        .into_iter()
        .map(|e| (e, vec![e.0]))
        .collect();
    while let Some((e, chain)) = stack.pop() {
        if chain.len() == n {
            facets.insert(normalize_face(&chain));
            continue;
        }
        for w in p.up_covers(e).expect("element exists") {
            if p.rank_of(w).expect("element exists") <= n {
                let mut c = chain.clone();
                c.push(w.0);
                stack.push((w, c));
            }
        }
    }
    SimplicialComplex { facets }
}

/// Boundary of the interval `[0, k)` as a cycle graph: the `k`-gon.
pub fn cycle_complex(k: u64) -> SimplicialComplex {
    assert!(k >= 3, "cycles need at least 3 vertices");
    let faces = (0..k).map(|i| vec![i, (i + 1) % k]);
    SimplicialComplex::from_faces(faces)
}

/// The 0-sphere: two isolated vertices `0` and `1`.
pub fn zero_sphere() -> SimplicialComplex {
    SimplicialComplex::from_faces([[0u64], [1u64]])
}

/// Vertex-relabeling isomorphism test between complexes: color refinement
/// on the 1-skeleton followed by backtracking over vertex images.
pub fn is_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    if a.facets == b.facets {
        return true;
    }
    let (va, vb): (Vec<u64>, Vec<u64>) =
        (a.vertices().into_iter().collect(), b.vertices().into_iter().collect());
    if va.len() != vb.len() || a.facets.len() != b.facets.len() {
        return false;
    }
    let sizes = |c: &SimplicialComplex| {
        let mut v: Vec<usize> = c.facets.iter().map(Vec::len).collect();
        v.sort_unstable();
        v
    };
    if sizes(a) != sizes(b) {
        return false;
    }

    let index = |vs: &[u64]| -> BTreeMap<u64, usize> {
        vs.iter().enumerate().map(|(i, &v)| (v, i)).collect()
    };
    let (ia, ib) = (index(&va), index(&vb));
    let adjacency = |c: &SimplicialComplex, idx: &BTreeMap<u64, usize>| {
        let mut adj = vec![BTreeSet::new(); idx.len()];
        for f in &c.facets {
            for (p, &x) in f.iter().enumerate() {
                for &y in &f[p + 1..] {
                    adj[idx[&x]].insert(idx[&y]);
                    adj[idx[&y]].insert(idx[&x]);
                }
            }
        }
        adj
    };
    let (aa, ab) = (adjacency(a, &ia), adjacency(b, &ib));

    // Initial colors: multiset of sizes of facets through the vertex.
    let facet_profile = |c: &SimplicialComplex, idx: &BTreeMap<u64, usize>| {
        let mut prof = vec![Vec::new(); idx.len()];
        for f in &c.facets {
            for v in f {
                prof[idx[v]].push(f.len());
            }
        }
        for p in &mut prof {
            p.sort_unstable();
        }
        prof
    };
    let (pa, pb) = (facet_profile(a, &ia), facet_profile(b, &ib));
    let mut table: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for p in pa.iter().chain(pb.iter()) {
        let next = table.len() as u64;
        table.entry(p.clone()).or_insert(next);
    }
    let mut ca: Vec<u64> = pa.iter().map(|p| table[p]).collect();
    let mut cb: Vec<u64> = pb.iter().map(|p| table[p]).collect();
    loop {
        let sig = |colors: &[u64], adj: &[BTreeSet<usize>], i: usize| {
            let mut nb: Vec<u64> = adj[i].iter().map(|&j| colors[j]).collect();
            nb.sort_unstable();
            (colors[i], nb)
        };
        let sa: Vec<_> = (0..va.len()).map(|i| sig(&ca, &aa, i)).collect();
        let sb: Vec<_> = (0..vb.len()).map(|i| sig(&cb, &ab, i)).collect();
        let mut tab: BTreeMap<(u64, Vec<u64>), u64> = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            let next = tab.len() as u64;
            tab.entry(s.clone()).or_insert(next);
        }
        let na: Vec<u64> = sa.iter().map(|s| tab[s]).collect();
        let nb: Vec<u64> = sb.iter().map(|s| tab[s]).collect();
        let stable = na == ca && nb == cb;
        ca = na;
        cb = nb;
        if stable {
            break;
        }
    }
    {
        let mut x = ca.clone();
        let mut y = cb.clone();
        x.sort_unstable();
        y.sort_unstable();
        if x != y {
            return false;
        }
    }

    let mut pool: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (j, &c) in cb.iter().enumerate() {
        pool.entry(c).or_default().push(j);
    }
    let mut order: Vec<usize> = (0..va.len()).collect();
    order.sort_by_key(|&i| (pool[&ca[i]].len(), ca[i], i));

    struct Ctx<'c> {
        a: &'c SimplicialComplex,
        b: &'c SimplicialComplex,
        va: &'c [u64],
        vb: &'c [u64],
        ca: &'c [u64],
        cb: &'c [u64],
        aa: &'c [BTreeSet<usize>],
        ab: &'c [BTreeSet<usize>],
        pool: &'c BTreeMap<u64, Vec<usize>>,
        order: &'c [usize],
    }
    fn assign(
        ctx: &Ctx<'_>,
        depth: usize,
        image: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == ctx.order.len() {
            // Full vertex bijection found; facets must map onto facets.
            let map: BTreeMap<u64, u64> = ctx
                .va
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, ctx.vb[image[i].expect("complete")]))
                .collect();
            let mapped: BTreeSet<Face> = ctx
                .a
                .facets
                .iter()
                .map(|f| normalize_face(&f.iter().map(|v| map[v]).collect::<Face>()))
                .collect();
            return mapped == ctx.b.facets;
        }
        let u = ctx.order[depth];
        for &v in &ctx.pool[&ctx.ca[u]] {
            if used[v] || ctx.cb[v] != ctx.ca[u] {
                continue;
            }
            let consistent = ctx.aa[u].iter().all(|&w| match image[w] {
                Some(iw) => ctx.ab[v].contains(&iw),
                None => true,
            }) && (0..ctx.va.len()).all(|w| {
                match image[w] {
                    Some(iw) => ctx.aa[u].contains(&w) == ctx.ab[v].contains(&iw),
                    None => true,
                }
            });
            if !consistent {
                continue;
            }
            image[u] = Some(v);
            used[v] = true;
            if assign(ctx, depth + 1, image, used) {
                return true;
            }
            image[u] = None;
            used[v] = false;
        }
        false
    }
    let ctx = Ctx {
        a,
        b,
        va: &va,
        vb: &vb,
        ca: &ca,
        cb: &cb,
        aa: &aa,
        ab: &ab,
        pool: &pool,
        order: &order,
    };
    assign(&ctx, 0, &mut vec![None; va.len()], &mut vec![false; va.len()])
}
