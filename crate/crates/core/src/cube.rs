//! The cube of resolutions and the Khovanov chain complex.
//!
//! Vertex `v` is a bitmask with bit `i` set when crossing `i` takes its
//! 1-smoothing. For `X[a,b,c,d]` the 0-smoothing joins `(a,b)` and `(c,d)`,
//! the 1-smoothing joins `(a,d)` and `(b,c)`. A generator at `v` labels every
//! circle `v+` or `v-`; labels are stored as a mask with bit `j` set when
//! circle `j` carries `v-`. Circles are numbered by their smallest edge label,
//! crossingless loops last.
//!
//! Gradings: `h = |v| - n_-`, `q = #v+ - #v- + |v| + n_+ - 2n_-`. The reduced
//! complex pins the marked circle to `v-` and shifts `q` up by one.
//!
//! Only the cube's vertex data is stored; differentials are generated on
//! demand one degree at a time.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homalg::field::{DenseMatrix, HomologyBasis};
use crate::homalg::reduce::Eliminator;
use crate::homalg::ring::{Coefficient, Field, F2};
use crate::homalg::{AbelianGroup, BigradedGroup, Coeff};
use crate::linkdiag::{EdgeLabel, LinkDiagram};

pub const MAX_CROSSINGS: usize = 24;
const MAX_CIRCLES: usize = 63;

/// A full smoothing of the diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub vertex: u32,
    /// Edge labels of each circle, sorted; crossingless loops are empty.
    pub circles: Vec<Vec<EdgeLabel>>,
}

impl Resolution {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn circle_of_edge(&self, e: EdgeLabel) -> Option<usize> {
        self.circles.iter().position(|c| c.binary_search(&e).is_ok())
    }
}

/// Where a component is marked: at an edge, or on a crossingless loop
/// (numbered among the loops).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mark {
    Edge(EdgeLabel),
    FreeLoop(usize),
}

impl Mark {
    /// The basepoint if it lies on `component`, otherwise its smallest edge.
    pub fn for_component(d: &LinkDiagram, component: usize) -> Result<Mark> {
        d.check_component(component)?;
        let comp = &d.components()[component];
        if comp.is_free_loop() {
            let idx = d.components()[..component].iter().filter(|c| c.is_free_loop()).count();
            return Ok(Mark::FreeLoop(idx));
        }
        if let Some(bp) = d.basepoint() {
            if d.component_of_edge(bp) == Some(component) {
                return Ok(Mark::Edge(bp));
            }
        }
        Ok(Mark::Edge(comp.min_edge().expect("component has edges")))
    }

    /// A different mark on the same component, one crossing further along,
    /// if the component has a second edge.
    pub fn next_on_component(d: &LinkDiagram, component: usize) -> Result<Option<Mark>> {
        let first = Mark::for_component(d, component)?;
        let Mark::Edge(e) = first else { return Ok(None) };
        let edges = &d.components()[component].edges;
        let pos = edges.iter().position(|&x| x == e).expect("mark lies on component");
        let next = edges[(pos + 1) % edges.len()];
        Ok((next != e).then_some(Mark::Edge(next)))
    }
}

/// Crossing data with edges renumbered densely.
#[derive(Clone, Debug)]
struct Cube {
    crossings: Vec<[usize; 4]>,
    labels: Vec<EdgeLabel>,
    free_loops: usize,
}

/// Circles of one resolution: `of_edge[e]` for dense edge `e`, loops after
/// the `edge_circles` edge circles.
struct Circles {
    of_edge: Vec<u8>,
    edge_circles: usize,
    total: usize,
}

impl Cube {
    fn new(d: &LinkDiagram) -> Self {
        let labels = d.edges();
        let idx = |e: EdgeLabel| labels.binary_search(&e).expect("edge label");
        let crossings = d.crossings().iter().map(|x| x.map(idx)).collect();
        Self { crossings, labels, free_loops: d.free_loops() }
    }

    fn n(&self) -> usize {
        self.crossings.len()
    }

    fn edge_index(&self, e: EdgeLabel) -> usize {
        self.labels.binary_search(&e).expect("edge label")
    }

    fn circles(&self, vertex: u32) -> Circles {
        let m = self.labels.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, &[a, b, c, d]) in self.crossings.iter().enumerate() {
            let pairs = if vertex >> i & 1 == 0 { [(a, b), (c, d)] } else { [(a, d), (b, c)] };
            for (x, y) in pairs {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                }
            }
        }
        let mut of_edge = vec![0u8; m];
        let mut root_circle = vec![u8::MAX; m];
        let mut count = 0usize;
        #[allow(clippy::needless_range_loop)]
        for e in 0..m {
            let r = find(&mut parent, e);
            if root_circle[r] == u8::MAX {
                root_circle[r] = count as u8;
                count += 1;
            }
            of_edge[e] = root_circle[r];
        }
        Circles { of_edge, edge_circles: count, total: count + self.free_loops }
    }

    fn marked_circle(&self, mark: Mark, c: &Circles) -> usize {
        match mark {
            Mark::Edge(e) => c.of_edge[self.edge_index(e)] as usize,
            Mark::FreeLoop(j) => c.edge_circles + j,
        }
    }
}

/// Partition of the edges into circles at `vertex`.
pub fn resolve(d: &LinkDiagram, vertex: u32) -> Resolution {
    let n = d.crossing_count();
    assert!(n >= 32 || vertex >> n == 0, "vertex has bits beyond the crossing count");
    let cube = Cube::new(d);
    let c = cube.circles(vertex);
    let mut circles = vec![vec![]; c.total];
    for (e, &ci) in c.of_edge.iter().enumerate() {
        circles[ci as usize].push(cube.labels[e]);
    }
    Resolution { vertex, circles }
}

/// Generators of one cube vertex inside a homological degree.
#[derive(Clone, Debug)]
struct Block {
    vertex: u32,
    circles: u8,
    marked: Option<u8>,
    offset: usize,
}

impl Block {
    fn free_bits(&self) -> u32 {
        self.circles as u32 - self.marked.is_some() as u32
    }

    fn size(&self) -> usize {
        1usize << self.free_bits()
    }

    fn expand(&self, compressed: u64) -> u64 {
        match self.marked {
            None => compressed,
            Some(m) => {
                let low = compressed & ((1u64 << m) - 1);
                let high = compressed >> m;
                low | (1u64 << m) | (high << (m + 1))
            }
        }
    }

    fn compress(&self, label: u64) -> u64 {
        match self.marked {
            None => label,
            Some(m) => {
                debug_assert!(label >> m & 1 == 1, "marked circle must carry v-");
                (label & ((1u64 << m) - 1)) | ((label >> (m + 1)) << m)
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Degree {
    blocks: Vec<Block>,
    size: usize,
}

impl Degree {
    fn block_of_vertex(&self, v: u32) -> &Block {
        let i = self.blocks.binary_search_by_key(&v, |b| b.vertex).expect("vertex in degree");
        &self.blocks[i]
    }
}

/// A basis element: a cube vertex with a labeling of its circles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub vertex: u32,
    /// Bit `j` set when circle `j` carries `v-`.
    pub minus_mask: u64,
    pub q: i64,
}

/// Differential `C^h -> C^{h+1}` as `(row, col, ±1)` triplets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Differential {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i8)>,
}

/// The Khovanov complex of a diagram. Immutable after construction.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    cube: Cube,
    diagram: LinkDiagram,
    n_plus: usize,
    n_minus: usize,
    marked: Option<(usize, Mark)>,
    degrees: Vec<Degree>,
}

/// Unreduced complex, or the reduced complex for the distinguished
/// component.
pub fn build_complex(d: &LinkDiagram, reduced: bool) -> Result<ChainComplex> {
    if reduced {
        build_reduced_complex(d, d.distinguished_component())
    } else {
        ChainComplex::new(d, None)
    }
}

/// Reduced complex with the mark on `component`.
pub fn build_reduced_complex(d: &LinkDiagram, component: usize) -> Result<ChainComplex> {
    let mark = Mark::for_component(d, component)?;
    ChainComplex::new(d, Some((component, mark)))
}

/// Vertices with `k` bits among the low `n`, in increasing order.
fn vertices_of_weight(n: usize, k: usize) -> Vec<u32> {
    if k == 0 {
        return vec![0];
    }
    if k > n {
        return vec![];
    }
    let mut out = vec![];
    let mut v: u64 = (1u64 << k) - 1;
    while v < 1u64 << n {
        out.push(v as u32);
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

impl ChainComplex {
    fn new(d: &LinkDiagram, marked: Option<(usize, Mark)>) -> Result<Self> {
        let n = d.crossing_count();
        if n > MAX_CROSSINGS {
            return Err(Error::TooManyCrossings(n));
        }
        let cube = Cube::new(d);
        let signs = d.crossing_signs();
        let degrees = (0..=n)
            .map(|k| {
                let verts = vertices_of_weight(n, k);
                let mut blocks: Vec<Block> = verts
                    .par_iter()
                    .map(|&v| {
                        let c = cube.circles(v);
                        assert!(c.total <= MAX_CIRCLES, "too many circles in a resolution");
                        let m = marked.map(|(_, mk)| cube.marked_circle(mk, &c) as u8);
                        Block { vertex: v, circles: c.total as u8, marked: m, offset: 0 }
                    })
                    .collect();
                let mut offset = 0;
                for b in &mut blocks {
                    b.offset = offset;
                    offset += b.size();
                }
                Degree { blocks, size: offset }
            })
            .collect();
        Ok(Self { cube, diagram: d.clone(), n_plus: signs.n_plus, n_minus: signs.n_minus, marked, degrees })
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn is_reduced(&self) -> bool {
        self.marked.is_some()
    }

    /// The component carrying the reduction mark.
    pub fn marked_component(&self) -> Option<usize> {
        self.marked.map(|(c, _)| c)
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn vertex_count(&self) -> usize {
        self.degrees.iter().map(|d| d.blocks.len()).sum()
    }

    /// Homological degrees `h_min..=h_max`.
    pub fn h_range(&self) -> (i64, i64) {
        let lo = -(self.n_minus as i64);
        (lo, lo + self.cube.n() as i64)
    }

    fn k_of(&self, h: i64) -> Option<usize> {
        let k = h + self.n_minus as i64;
        (0..self.degrees.len() as i64).contains(&k).then_some(k as usize)
    }

    /// Rank of `C^h`.
    pub fn dim(&self, h: i64) -> usize {
        self.k_of(h).map_or(0, |k| self.degrees[k].size)
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.iter().map(|d| d.size).sum()
    }

    fn q_of(&self, vertex_weight: usize, circles: u32, minus: u32) -> i64 {
        circles as i64 - 2 * minus as i64 + vertex_weight as i64 + self.n_plus as i64 - 2 * self.n_minus as i64
            + self.marked.is_some() as i64
    }

    /// Quantum grading of each generator of `C^h`, in basis order.
    pub fn quantum_gradings(&self, h: i64) -> Vec<i64> {
        let Some(k) = self.k_of(h) else { return vec![] };
        let mut out = Vec::with_capacity(self.degrees[k].size);
        for b in &self.degrees[k].blocks {
            for c in 0..b.size() as u64 {
                let label = b.expand(c);
                out.push(self.q_of(k, b.circles as u32, label.count_ones()));
            }
        }
        out
    }

    /// Basis of `C^h`, ordered by vertex and then by label.
    pub fn generators(&self, h: i64) -> Vec<Generator> {
        let Some(k) = self.k_of(h) else { return vec![] };
        let mut out = Vec::with_capacity(self.degrees[k].size);
        for b in &self.degrees[k].blocks {
            for c in 0..b.size() as u64 {
                let label = b.expand(c);
                let q = self.q_of(k, b.circles as u32, label.count_ones());
                out.push(Generator { vertex: b.vertex, minus_mask: label, q });
            }
        }
        out
    }

    /// `d: C^h -> C^{h+1}`.
    pub fn differential(&self, h: i64) -> Differential {
        let cols = self.dim(h);
        let rows = self.dim(h + 1);
        let entries = match self.k_of(h) {
            Some(k) if k + 1 < self.degrees.len() => self.differential_k(k),
            _ => vec![],
        };
        Differential { rows, cols, entries }
    }

    fn differential_k(&self, k: usize) -> Vec<(usize, usize, i8)> {
        let src = &self.degrees[k];
        let dst = &self.degrees[k + 1];
        src.blocks.par_iter().flat_map_iter(|b| self.block_differential(b, dst)).collect()
    }

    fn block_differential(&self, b: &Block, dst: &Degree) -> Vec<(usize, usize, i8)> {
        let cube = &self.cube;
        let n = cube.n();
        let c1 = cube.circles(b.vertex);
        let k1 = c1.total;
        // one representative edge per edge circle
        let mut rep = vec![usize::MAX; c1.edge_circles];
        for (e, &ci) in c1.of_edge.iter().enumerate() {
            if rep[ci as usize] == usize::MAX {
                rep[ci as usize] = e;
            }
        }
        let mut out = vec![];
        for i in 0..n {
            if b.vertex >> i & 1 == 1 {
                continue;
            }
            let v2 = b.vertex | (1 << i);
            let tb = dst.block_of_vertex(v2);
            let c2 = cube.circles(v2);
            let sign: i8 = if (b.vertex & ((1u32 << i) - 1)).count_ones().is_multiple_of(2) { 1 } else { -1 };
            let [ea, eb, ec, _] = cube.crossings[i];
            let ca = c1.of_edge[ea] as usize;
            let cc = c1.of_edge[ec] as usize;
            let phi: Vec<usize> = (0..k1)
                .map(|j| {
                    if j < c1.edge_circles {
                        c2.of_edge[rep[j]] as usize
                    } else {
                        c2.edge_circles + (j - c1.edge_circles)
                    }
                })
                .collect();
            // labels of the circles away from crossing i
            let carry = |label: u64| -> u64 {
                let mut out = 0u64;
                for (j, &t) in phi.iter().enumerate() {
                    if j != ca && j != cc && label >> j & 1 == 1 {
                        out |= 1 << t;
                    }
                }
                out
            };
            for c in 0..b.size() as u64 {
                let label = b.expand(c);
                let col = b.offset + c as usize;
                let sa = label >> ca & 1;
                if ca != cc {
                    // merge
                    let sc = label >> cc & 1;
                    if sa == 1 && sc == 1 {
                        continue;
                    }
                    let m = c2.of_edge[ea] as usize;
                    let target = carry(label) | ((sa | sc) << m);
                    out.push((tb.offset + tb.compress(target) as usize, col, sign));
                } else {
                    // split
                    let p = c2.of_edge[ea] as usize;
                    let q = c2.of_edge[eb] as usize;
                    debug_assert_ne!(p, q);
                    let base = carry(label);
                    if sa == 0 {
                        for t in [base | (1 << q), base | (1 << p)] {
                            out.push((tb.offset + tb.compress(t) as usize, col, sign));
                        }
                    } else {
                        let t = base | (1 << p) | (1 << q);
                        out.push((tb.offset + tb.compress(t) as usize, col, sign));
                    }
                }
            }
        }
        out.sort_unstable_by_key(|&(r, _, _)| r);
        out.sort_by_key(|&(_, c, _)| c);
        out
    }

    /// Verifies `d∘d = 0` in every degree.
    pub fn check_d_squared(&self) -> Result<()> {
        let (lo, hi) = self.h_range();
        let mut prev = self.differential(lo);
        for h in lo + 1..hi {
            let next = self.differential(h);
            let prod = compose(&next.entries, &prev.entries);
            if let Some((&(_, c), _)) = prod.iter().next() {
                let q = self.quantum_gradings(h - 1)[c];
                return Err(Error::NotAChainMap { h: h - 1, q });
            }
            prev = next;
        }
        Ok(())
    }

    /// Verifies that every differential entry joins generators of equal `q`.
    pub fn check_homogeneous(&self) -> Result<()> {
        let (lo, hi) = self.h_range();
        for h in lo..hi {
            let qs = self.quantum_gradings(h);
            let qt = self.quantum_gradings(h + 1);
            for &(r, c, _) in &self.differential(h).entries {
                if qs[c] != qt[r] {
                    return Err(Error::NotAChainMap { h, q: qs[c] });
                }
            }
        }
        Ok(())
    }

    /// Homology in every bigrading. Over `Q` this is the free part of the
    /// integral answer.
    pub fn homology(&self, coeff: Coeff) -> BigradedGroup {
        let (lo, hi) = self.h_range();
        self.homology_range(lo, hi, coeff)
    }

    /// Homology in homological degree `h` only.
    pub fn homology_at(&self, h: i64, coeff: Coeff) -> BigradedGroup {
        let (lo, hi) = self.h_range();
        if h < lo || h > hi {
            return BigradedGroup::new(coeff);
        }
        let full = self.homology_range((h - 1).max(lo), (h + 1).min(hi), coeff);
        let mut out = BigradedGroup::new(coeff);
        for (q, g) in full.at_h(h) {
            out.insert(h, q, g);
        }
        out
    }

    /// Homology computed from `C^lo .. C^hi`; correct for `lo < h < hi` and
    /// at the ends of the full complex.
    fn homology_range(&self, lo: i64, hi: i64, coeff: Coeff) -> BigradedGroup {
        match coeff {
            Coeff::Z => self.integral_range(lo, hi),
            Coeff::Q => self.integral_range(lo, hi).to_field(Coeff::Q),
            Coeff::F2 => {
                let dims = self.eliminate_range::<F2>(lo, hi);
                let mut out = BigradedGroup::new(Coeff::F2);
                for (q, slice) in dims {
                    for (i, &d) in slice.dims.iter().enumerate() {
                        debug_assert!(slice.diffs.iter().all(|t| t.is_empty()));
                        out.insert(lo + i as i64, q, AbelianGroup::free(d));
                    }
                }
                out
            }
        }
    }

    fn integral_range(&self, lo: i64, hi: i64) -> BigradedGroup {
        let slices = self.eliminate_range::<BigInt>(lo, hi);
        let groups: Vec<(i64, Vec<AbelianGroup>)> =
            slices.into_par_iter().map(|(q, s)| (q, s.integral_homology())).collect();
        let mut out = BigradedGroup::new(Coeff::Z);
        for (q, gs) in groups {
            for (i, g) in gs.into_iter().enumerate() {
                out.insert(lo + i as i64, q, g);
            }
        }
        out
    }

    /// Per-`q` unit elimination over degrees `lo..=hi`, streaming one
    /// differential at a time.
    fn eliminate_range<R: Coefficient>(&self, lo: i64, hi: i64) -> Vec<(i64, crate::homalg::reduce::CochainSlice<R>)> {
        let positions: Vec<QPositions> = (lo..=hi).map(|h| QPositions::new(&self.quantum_gradings(h))).collect();
        let mut all_q: Vec<i64> = positions.iter().flat_map(|p| p.dims.keys().copied()).collect();
        all_q.sort_unstable();
        all_q.dedup();
        let slot: BTreeMap<i64, usize> = all_q.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let mut elims: Vec<Eliminator<R>> = all_q.iter().map(|q| Eliminator::new(positions[0].dim(*q))).collect();
        for (i, h) in (lo..hi).enumerate() {
            let d = self.differential(h);
            let mut buckets: Vec<Vec<(usize, usize, R)>> = vec![vec![]; all_q.len()];
            for (r, c, v) in d.entries {
                let (q, lc) = positions[i].at[c];
                let (q2, lr) = positions[i + 1].at[r];
                debug_assert_eq!(q, q2, "differential must preserve q");
                buckets[slot[&q]].push((lr, lc, R::from_i64(v as i64)));
            }
            let next = &positions[i + 1];
            elims.par_iter_mut().zip(buckets).zip(&all_q).for_each(|((e, t), q)| {
                e.push(next.dim(*q), t);
            });
        }
        all_q.into_iter().zip(elims).map(|(q, e)| (q, e.finish())).collect()
    }

    /// Rows of `d` restricted to one quantum grading, as a dense matrix from
    /// the `q`-part of `C^h` to the `q`-part of `C^{h+1}`.
    fn dense_slice<K: Field>(&self, h: i64, q: i64, src: &QPositions, dst: &QPositions) -> DenseMatrix<K> {
        let mut m = DenseMatrix::zeros(dst.dim(q), src.dim(q));
        if src.dim(q) == 0 || dst.dim(q) == 0 {
            return m;
        }
        for (r, c, v) in self.differential(h).entries {
            let (qc, lc) = src.at[c];
            if qc == q {
                let (_, lr) = dst.at[r];
                m.set(lr, lc, K::from_i64(v as i64));
            }
        }
        m
    }

    /// JSON debug dump: basis sizes and sparse differentials per degree.
    pub fn to_debug_json(&self) -> serde_json::Value {
        let (lo, hi) = self.h_range();
        let degrees: Vec<serde_json::Value> = (lo..=hi)
            .map(|h| {
                let d = self.differential(h);
                serde_json::json!({
                    "h": h,
                    "size": self.dim(h),
                    "differential": d.entries.iter().map(|&(r, c, v)| [r as i64, c as i64, v as i64]).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "crossings": self.cube.n(),
            "reduced": self.is_reduced(),
            "marked_component": self.marked_component(),
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "degrees": degrees,
        })
    }
}

/// Position of each generator of a degree inside its `q`-slice.
struct QPositions {
    at: Vec<(i64, usize)>,
    dims: BTreeMap<i64, usize>,
}

impl QPositions {
    fn new(qs: &[i64]) -> Self {
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        let at = qs
            .iter()
            .map(|&q| {
                let n = dims.entry(q).or_default();
                *n += 1;
                (q, *n - 1)
            })
            .collect();
        Self { at, dims }
    }

    fn dim(&self, q: i64) -> usize {
        self.dims.get(&q).copied().unwrap_or(0)
    }
}

/// Sparse product `a∘b` of triplet matrices with zero entries dropped.
fn compose(a: &[(usize, usize, i8)], b: &[(usize, usize, i8)]) -> BTreeMap<(usize, usize), i64> {
    let mut by_row: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
    for &(r, c, v) in a {
        by_row.entry(c).or_default().push((r, v as i64));
    }
    let mut out: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for &(mid, c, v) in b {
        if let Some(rs) = by_row.get(&mid) {
            for &(r, w) in rs {
                *out.entry((r, c)).or_default() += v as i64 * w;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// A degree-preserving map `C -> C` of bidegree `(0, q_shift)`, stored per
/// homological degree as `(row, col, value)` triplets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub q_shift: i64,
    h_min: i64,
    maps: Vec<Vec<(usize, usize, i8)>>,
}

impl ChainMap {
    pub fn identity(c: &ChainComplex) -> Self {
        let (lo, hi) = c.h_range();
        let maps = (lo..=hi).map(|h| (0..c.dim(h)).map(|i| (i, i, 1)).collect()).collect();
        Self { q_shift: 0, h_min: lo, maps }
    }

    pub fn zero(c: &ChainComplex, q_shift: i64) -> Self {
        let (lo, hi) = c.h_range();
        Self { q_shift, h_min: lo, maps: vec![vec![]; (hi - lo + 1) as usize] }
    }

    pub fn at(&self, h: i64) -> &[(usize, usize, i8)] {
        let k = h - self.h_min;
        if k < 0 || k as usize >= self.maps.len() {
            return &[];
        }
        &self.maps[k as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_empty())
    }

    /// `f∘f = 0` in every degree.
    pub fn squares_to_zero(&self) -> bool {
        self.maps.iter().all(|m| compose(m, m).is_empty())
    }

    /// `d∘f = f∘d` between `C^h` and `C^{h+1}`.
    pub fn commutes_at(&self, c: &ChainComplex, h: i64) -> bool {
        let d = c.differential(h).entries;
        compose(&d, self.at(h)) == compose(self.at(h + 1), &d)
    }

    pub fn check_chain_map(&self, c: &ChainComplex) -> Result<()> {
        let (lo, hi) = c.h_range();
        for h in lo..hi {
            if !self.commutes_at(c, h) {
                return Err(Error::NotAChainMap { h, q: 0 });
            }
        }
        Ok(())
    }

    /// Checks that every entry shifts `q` by `q_shift`.
    pub fn is_homogeneous(&self, c: &ChainComplex) -> bool {
        let (lo, hi) = c.h_range();
        (lo..=hi).all(|h| {
            let qs = c.quantum_gradings(h);
            self.at(h).iter().all(|&(r, col, _)| qs[r] == qs[col] + self.q_shift)
        })
    }
}

/// The operator `x_i` on the complex: on the circle through the mark of
/// `component`, `v+ -> v-` and `v- -> 0`.
pub fn basepoint_chain_operator(c: &ChainComplex, component: usize) -> Result<ChainMap> {
    let mark = Mark::for_component(&c.diagram, component)?;
    if c.marked_component() == Some(component) {
        return Err(Error::DistinguishedComponent(component));
    }
    Ok(operator_at_mark(c, mark))
}

/// `x` at an explicit mark.
pub fn operator_at_mark(c: &ChainComplex, mark: Mark) -> ChainMap {
    let (lo, _) = c.h_range();
    let maps = c
        .degrees
        .par_iter()
        .map(|deg| {
            let mut out = vec![];
            for b in &deg.blocks {
                let circles = c.cube.circles(b.vertex);
                let x = c.cube.marked_circle(mark, &circles);
                for comp in 0..b.size() as u64 {
                    let label = b.expand(comp);
                    if label >> x & 1 == 0 {
                        let t = label | (1 << x);
                        out.push((b.offset + b.compress(t) as usize, b.offset + comp as usize, 1i8));
                    }
                }
            }
            out
        })
        .collect();
    ChainMap { q_shift: -2, h_min: lo, maps }
}

/// Matrix of the map induced by a chain map on `H^h` over a field.
/// Homology bases are ordered by `q`, then by representative.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedMap<K> {
    pub h: i64,
    /// `(q, dim)` of the source summands in basis order.
    pub source: Vec<(i64, usize)>,
    pub target: Vec<(i64, usize)>,
    pub matrix: DenseMatrix<K>,
}

impl<K: Field> InducedMap<K> {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

/// Induced endomorphism of `H^h(C; K)`.
pub fn induced_map<K: Field>(f: &ChainMap, c: &ChainComplex, h: i64) -> Result<InducedMap<K>> {
    let prev = QPositions::new(&c.quantum_gradings(h - 1));
    let here = QPositions::new(&c.quantum_gradings(h));
    let next = QPositions::new(&c.quantum_gradings(h + 1));
    for hh in [h - 1, h] {
        if !f.commutes_at(c, hh) {
            return Err(Error::NotAChainMap { h: hh, q: 0 });
        }
    }

    let mut bases: BTreeMap<i64, HomologyBasis<K>> = BTreeMap::new();
    let mut basis_for = |q: i64| -> HomologyBasis<K> {
        bases
            .entry(q)
            .or_insert_with(|| {
                let d_out = c.dense_slice::<K>(h, q, &here, &next);
                let d_in = c.dense_slice::<K>(h - 1, q, &prev, &here);
                HomologyBasis::new(here.dim(q), &d_out, &d_in)
            })
            .clone()
    };

    let qs: Vec<i64> = here.dims.keys().copied().collect();
    let mut source = vec![];
    let mut target = vec![];
    let mut src_bases = vec![];
    for &q in &qs {
        let b = basis_for(q);
        if b.dim() > 0 {
            source.push((q, b.dim()));
            src_bases.push((q, b));
        }
        let t = basis_for(q + f.q_shift);
        if t.dim() > 0 && !target.iter().any(|&(tq, _)| tq == q + f.q_shift) {
            target.push((q + f.q_shift, t.dim()));
        }
    }
    target.sort();
    let rows: usize = target.iter().map(|t| t.1).sum();
    let cols: usize = source.iter().map(|s| s.1).sum();
    let mut matrix = DenseMatrix::zeros(rows, cols);

    // sparse f restricted to C^h, keyed by source generator
    let mut f_cols: BTreeMap<usize, Vec<(usize, K)>> = BTreeMap::new();
    for &(r, col, v) in f.at(h) {
        f_cols.entry(col).or_default().push((r, K::from_i64(v as i64)));
    }
    // global index of each (q, local) pair in C^h
    let mut global: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for (g, &(q, l)) in here.at.iter().enumerate() {
        global.insert((q, l), g);
    }

    let mut col0 = 0;
    for (q, b) in &src_bases {
        let tq = q + f.q_shift;
        let Some(row0) = target_offset(&target, tq) else {
            col0 += b.dim();
            continue;
        };
        let tb = basis_for(tq);
        for (j, z) in b.representatives().iter().enumerate() {
            let mut image = vec![K::zero(); here.dim(tq)];
            for (l, x) in z.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let g = global[&(*q, l)];
                for (r, v) in f_cols.get(&g).into_iter().flatten() {
                    let (rq, rl) = here.at[*r];
                    if rq != tq {
                        return Err(Error::DimensionMismatch(format!(
                            "chain map is not homogeneous of degree {}",
                            f.q_shift
                        )));
                    }
                    image[rl] = image[rl].clone() + x.clone() * v.clone();
                }
            }
            for (i, y) in tb.coordinates(&image).into_iter().enumerate() {
                matrix.set(row0 + i, col0 + j, y);
            }
        }
        col0 += b.dim();
    }
    Ok(InducedMap { h, source, target, matrix })
}

fn target_offset(target: &[(i64, usize)], q: i64) -> Option<usize> {
    let mut off = 0;
    for &(tq, d) in target {
        if tq == q {
            return Some(off);
        }
        off += d;
    }
    None
}
