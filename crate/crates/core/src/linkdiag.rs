//! Oriented link diagrams given as planar-diagram (PD) codes.
//!
//! A crossing `X[a,b,c,d]` lists its four incident edges counterclockwise,
//! starting from the incoming under-strand, so the under-strand always runs
//! `a -> c`. The over-strand runs `d -> b` (a positive crossing) or `b -> d`
//! (a negative crossing); which one is inferred from the traversal.
//!
//! Closed components without crossings cannot be written as PD tuples and
//! are carried as a separate `free_loops` count.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type EdgeLabel = u32;

/// Position of the incoming under-strand inside a PD tuple.
const UNDER_IN: usize = 0;
const UNDER_OUT: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Edge labels in traversal order, starting at the smallest label.
    /// Empty for a crossingless loop.
    pub edges: Vec<EdgeLabel>,
}

impl Component {
    pub fn is_free_loop(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn min_edge(&self) -> Option<EdgeLabel> {
        self.edges.iter().copied().min()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingData {
    pub signs: Vec<i8>,
    pub n_plus: usize,
    pub n_minus: usize,
}

impl CrossingData {
    pub fn writhe(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }
}

#[derive(Clone, Debug)]
pub struct LinkDiagram {
    crossings: Vec<[EdgeLabel; 4]>,
    free_loops: usize,
    basepoint: Option<EdgeLabel>,
    name: Option<String>,
    // over-strand runs d -> b
    positive: Vec<bool>,
    components: Vec<Component>,
    edge_component: BTreeMap<EdgeLabel, usize>,
}

impl PartialEq for LinkDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.crossings == other.crossings && self.free_loops == other.free_loops && self.basepoint == other.basepoint
    }
}

impl Eq for LinkDiagram {}

/// JSON form of a diagram: `{"crossings":[[a,b,c,d],...],"free_loops":n,"basepoint":e}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    #[serde(default)]
    pub crossings: Vec<[EdgeLabel; 4]>,
    #[serde(default)]
    pub free_loops: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<EdgeLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl LinkDiagram {
    pub fn new(crossings: Vec<[EdgeLabel; 4]>, free_loops: usize, basepoint: Option<EdgeLabel>) -> Result<Self> {
        if crossings.is_empty() && free_loops == 0 {
            return Err(Error::InvalidDiagram("diagram has no components".into()));
        }

        let occurrences = collect_occurrences(&crossings)?;
        let positive = orient_over_strands(&crossings, &occurrences)?;
        check_planar(&crossings, &occurrences)?;

        // traversal: an edge enters a crossing at one position and leaves
        // through the opposite one
        let mut head: BTreeMap<EdgeLabel, (usize, usize)> = BTreeMap::new();
        for (&e, occ) in &occurrences {
            let ins: Vec<_> = occ.iter().filter(|&&(c, p)| is_incoming(p, positive[c])).copied().collect();
            if ins.len() != 1 {
                return Err(Error::InvalidDiagram(format!(
                    "edge {e} must enter exactly one crossing, enters {}",
                    ins.len()
                )));
            }
            head.insert(e, ins[0]);
        }

        let mut components = Vec::new();
        let mut edge_component = BTreeMap::new();
        for &start in occurrences.keys() {
            if edge_component.contains_key(&start) {
                continue;
            }
            let idx = components.len();
            let mut edges = vec![];
            let mut e = start;
            loop {
                if edge_component.insert(e, idx).is_some() {
                    return Err(Error::InvalidDiagram(format!("traversal from edge {start} does not close up")));
                }
                edges.push(e);
                let (c, p) = head[&e];
                e = crossings[c][(p + 2) % 4];
                if e == start {
                    break;
                }
            }
            components.push(Component { edges });
        }
        for _ in 0..free_loops {
            components.push(Component { edges: vec![] });
        }

        if let Some(bp) = basepoint {
            let Some(&ci) = edge_component.get(&bp) else {
                return Err(Error::InvalidDiagram(format!("basepoint {bp} is not an edge label")));
            };
            // distinguished component goes last
            let comp = components.remove(ci);
            components.push(comp);
            edge_component.clear();
            for (i, comp) in components.iter().enumerate() {
                for &e in &comp.edges {
                    edge_component.insert(e, i);
                }
            }
        }

        Ok(Self { crossings, free_loops, basepoint, name: None, positive, components, edge_component })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn unknot() -> Self {
        Self::new(vec![], 1, None).expect("valid")
    }

    pub fn unlink(n: usize) -> Self {
        Self::new(vec![], n, None).expect("valid")
    }

    pub fn from_spec(spec: &DiagramSpec) -> Result<Self> {
        let d = Self::new(spec.crossings.clone(), spec.free_loops, spec.basepoint)?;
        Ok(match &spec.name {
            Some(n) => d.with_name(n.clone()),
            None => d,
        })
    }

    pub fn to_spec(&self) -> DiagramSpec {
        DiagramSpec {
            crossings: self.crossings.clone(),
            free_loops: self.free_loops,
            basepoint: self.basepoint,
            name: self.name.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DiagramSpec = serde_json::from_str(text)?;
        Self::from_spec(&spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("serializable")
    }

    pub fn crossings(&self) -> &[[EdgeLabel; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn basepoint(&self) -> Option<EdgeLabel> {
        self.basepoint
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Sorted list of all edge labels.
    pub fn edges(&self) -> Vec<EdgeLabel> {
        self.edge_component.keys().copied().collect()
    }

    pub fn component_of_edge(&self, e: EdgeLabel) -> Option<usize> {
        self.edge_component.get(&e).copied()
    }

    /// The component carrying the basepoint, or the last component.
    pub fn distinguished_component(&self) -> usize {
        self.components.len() - 1
    }

    pub fn is_positive(&self, crossing: usize) -> bool {
        self.positive[crossing]
    }

    pub fn crossing_sign(&self, crossing: usize) -> i8 {
        if self.positive[crossing] {
            1
        } else {
            -1
        }
    }

    pub fn crossing_signs(&self) -> CrossingData {
        let signs: Vec<i8> = (0..self.crossings.len()).map(|c| self.crossing_sign(c)).collect();
        let n_plus = signs.iter().filter(|&&s| s > 0).count();
        CrossingData { n_minus: signs.len() - n_plus, n_plus, signs }
    }

    /// Components of the under- and over-strand at a crossing.
    pub fn crossing_components(&self, crossing: usize) -> (usize, usize) {
        let x = &self.crossings[crossing];
        (self.edge_component[&x[0]], self.edge_component[&x[1]])
    }

    pub fn check_component(&self, i: usize) -> Result<()> {
        if i < self.components.len() {
            Ok(())
        } else {
            Err(Error::ComponentOutOfRange { index: i, count: self.components.len() })
        }
    }

    pub fn linking_number(&self, i: usize, j: usize) -> Result<i64> {
        self.check_component(i)?;
        self.check_component(j)?;
        if i == j {
            return Err(Error::Precondition("linking number needs two distinct components".into()));
        }
        let total: i64 = (0..self.crossings.len())
            .filter(|&c| {
                let (u, o) = self.crossing_components(c);
                (u == i && o == j) || (u == j && o == i)
            })
            .map(|c| self.crossing_sign(c) as i64)
            .sum();
        debug_assert!(total % 2 == 0);
        Ok(total / 2)
    }

    /// Sum of all pairwise linking numbers.
    pub fn total_linking_number(&self) -> i64 {
        let r = self.components.len();
        let mut t = 0;
        for i in 0..r {
            for j in i + 1..r {
                t += self.linking_number(i, j).expect("valid indices");
            }
        }
        t
    }

    /// Switch every crossing; orientation and components are unchanged.
    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.positive)
            .map(|(&[a, b, c, d], &pos)| if pos { [d, a, b, c] } else { [b, c, d, a] })
            .collect();
        let mut m = Self::new(crossings, self.free_loops, self.basepoint).expect("mirror of a valid diagram is valid");
        m.name = self.name.as_ref().map(|n| format!("mirror({n})"));
        m
    }

    /// Diagram of the sublink formed by `keep` (component indices). Crossings
    /// with dropped components are erased by joining the two edges of the
    /// surviving strand.
    pub fn sublink(&self, keep: &[usize]) -> Result<Self> {
        for &i in keep {
            self.check_component(i)?;
        }
        let keep: BTreeSet<usize> = keep.iter().copied().collect();
        if keep.is_empty() {
            return Err(Error::Precondition("sublink needs at least one component".into()));
        }

        let mut uf = LabelUnion::default();
        let mut kept_crossings = vec![];
        for (c, x) in self.crossings.iter().enumerate() {
            let (u, o) = self.crossing_components(c);
            match (keep.contains(&u), keep.contains(&o)) {
                (true, true) => kept_crossings.push(*x),
                (true, false) => uf.union(x[0], x[2]),
                (false, true) => uf.union(x[1], x[3]),
                (false, false) => {}
            }
        }
        let crossings: Vec<[EdgeLabel; 4]> = kept_crossings.iter().map(|x| x.map(|e| uf.find(e))).collect();

        let mut free_loops = 0;
        for (i, comp) in self.components.iter().enumerate() {
            if !keep.contains(&i) {
                continue;
            }
            let touches =
                comp.is_free_loop() || !comp.edges.iter().any(|e| crossings.iter().any(|x| x.contains(&uf.find(*e))));
            if touches {
                free_loops += 1;
            }
        }
        let basepoint = self
            .basepoint
            .filter(|bp| keep.contains(&self.edge_component[bp]))
            .map(|bp| uf.find(bp))
            .filter(|bp| crossings.iter().any(|x| x.contains(bp)));
        Self::new(crossings, free_loops, basepoint)
    }

    /// PD text; crossingless components are written as `Loop[k]`.
    pub fn to_pd_string(&self) -> String {
        let mut parts: Vec<String> = self.crossings.iter().map(|[a, b, c, d]| format!("X[{a},{b},{c},{d}]")).collect();
        let top = self.edge_component.keys().max().copied().unwrap_or(0);
        for i in 0..self.free_loops {
            parts.push(format!("Loop[{}]", top as usize + 1 + i));
        }
        format!("PD[{}]", parts.join(","))
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n}: {}", self.to_pd_string()),
            None => write!(f, "{}", self.to_pd_string()),
        }
    }
}

fn is_incoming(pos: usize, positive: bool) -> bool {
    match pos {
        UNDER_IN => true,
        UNDER_OUT => false,
        3 => positive,
        _ => !positive,
    }
}

type Occurrences = BTreeMap<EdgeLabel, Vec<(usize, usize)>>;

fn collect_occurrences(crossings: &[[EdgeLabel; 4]]) -> Result<Occurrences> {
    let mut occ: Occurrences = BTreeMap::new();
    for (c, x) in crossings.iter().enumerate() {
        for (p, &e) in x.iter().enumerate() {
            if e == 0 {
                return Err(Error::InvalidDiagram("edge labels must be positive".into()));
            }
            occ.entry(e).or_default().push((c, p));
        }
    }
    for (e, o) in &occ {
        if o.len() != 2 {
            return Err(Error::InvalidDiagram(format!(
                "edge {e} occurs {} times; every edge must occur exactly twice",
                o.len()
            )));
        }
    }
    Ok(occ)
}

/// Incoming-ness of an endpoint: either fixed, or `positive[c] ^ flip`.
#[derive(Clone, Copy)]
enum Role {
    Fixed(bool),
    Var(usize, bool),
}

fn role(c: usize, p: usize) -> Role {
    match p {
        UNDER_IN => Role::Fixed(true),
        UNDER_OUT => Role::Fixed(false),
        3 => Role::Var(c, false),
        _ => Role::Var(c, true),
    }
}

/// Solve for the direction of every over-strand. Each edge must enter
/// exactly one of its two endpoints, which gives parity constraints between
/// crossings; groups left unconstrained (a component that only passes over)
/// follow the consecutive-label convention.
fn orient_over_strands(crossings: &[[EdgeLabel; 4]], occ: &Occurrences) -> Result<Vec<bool>> {
    let n = crossings.len();
    let mut fixed: Vec<Option<bool>> = vec![None; n];
    let mut adj: Vec<Vec<(usize, bool)>> = vec![vec![]; n];
    let mut pending_fixed: Vec<(usize, bool, EdgeLabel)> = vec![];

    for (&e, o) in occ {
        let (r1, r2) = (role(o[0].0, o[0].1), role(o[1].0, o[1].1));
        match (r1, r2) {
            (Role::Fixed(x), Role::Fixed(y)) => {
                if x == y {
                    return Err(Error::InvalidDiagram(format!(
                        "edge {e} is {} at both ends as an under-strand",
                        if x { "incoming" } else { "outgoing" }
                    )));
                }
            }
            (Role::Fixed(x), Role::Var(c, flip)) | (Role::Var(c, flip), Role::Fixed(x)) => {
                pending_fixed.push((c, !x ^ flip, e));
            }
            (Role::Var(c1, f1), Role::Var(c2, f2)) => {
                let parity = true ^ f1 ^ f2;
                if c1 == c2 {
                    if parity {
                        return Err(Error::InvalidDiagram(format!("edge {e} cannot be oriented consistently")));
                    }
                } else {
                    adj[c1].push((c2, parity));
                    adj[c2].push((c1, parity));
                }
            }
        }
    }
    for (c, v, e) in pending_fixed {
        match fixed[c] {
            Some(w) if w != v => {
                return Err(Error::InvalidDiagram(format!("inconsistent orientation at crossing {c} (edge {e})")))
            }
            _ => fixed[c] = Some(v),
        }
    }

    let mut value: Vec<Option<bool>> = vec![None; n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // collect the group
        let mut group = vec![];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(c) = queue.pop_front() {
            group.push(c);
            for &(c2, _) in &adj[c] {
                if !seen[c2] {
                    seen[c2] = true;
                    queue.push_back(c2);
                }
            }
        }
        let (root, root_value) = match group.iter().find_map(|&c| fixed[c].map(|v| (c, v))) {
            Some(rv) => rv,
            None => {
                let c = *group.iter().min().expect("nonempty");
                let [_, b, _, d] = crossings[c];
                (c, b == d + 1 || d > b + 1)
            }
        };
        value[root] = Some(root_value);
        let mut queue = VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            let v = value[c].expect("assigned");
            for &(c2, parity) in &adj[c] {
                let w = v ^ parity;
                match value[c2] {
                    None => {
                        value[c2] = Some(w);
                        queue.push_back(c2);
                    }
                    Some(x) if x != w => {
                        return Err(Error::InvalidDiagram(format!(
                            "over-strand orientation is inconsistent at crossing {c2}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        for &c in &group {
            if let Some(f) = fixed[c] {
                if value[c] != Some(f) {
                    return Err(Error::InvalidDiagram(format!(
                        "over-strand orientation is inconsistent at crossing {c}"
                    )));
                }
            }
        }
    }
    Ok(value.into_iter().map(|v| v.expect("all assigned")).collect())
}

/// Euler characteristic check: each connected piece of the 4-valent
/// diagram graph must have V - E + F = 2.
fn check_planar(crossings: &[[EdgeLabel; 4]], occ: &Occurrences) -> Result<()> {
    let n = crossings.len();
    if n == 0 {
        return Ok(());
    }
    let dart = |c: usize, p: usize| 4 * c + p;
    let mut other = vec![0usize; 4 * n];
    let mut uf = (0..n).collect::<Vec<_>>();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let next = uf[y];
            uf[y] = r;
            y = next;
        }
        r
    }
    for o in occ.values() {
        let (d1, d2) = (dart(o[0].0, o[0].1), dart(o[1].0, o[1].1));
        other[d1] = d2;
        other[d2] = d1;
        let (a, b) = (find(&mut uf, o[0].0), find(&mut uf, o[1].0));
        uf[a] = b;
    }
    let pieces = (0..n).filter(|&c| find(&mut uf, c) == c).count();

    let mut visited = vec![false; 4 * n];
    let mut faces = 0;
    for s in 0..4 * n {
        if visited[s] {
            continue;
        }
        faces += 1;
        let mut x = s;
        while !visited[x] {
            visited[x] = true;
            let y = other[x];
            x = 4 * (y / 4) + (y % 4 + 1) % 4;
        }
    }
    if faces != n + 2 * pieces {
        return Err(Error::InvalidDiagram(format!(
            "PD code is not planar ({faces} faces, expected {})",
            n + 2 * pieces
        )));
    }
    Ok(())
}

#[derive(Default)]
struct LabelUnion {
    parent: BTreeMap<EdgeLabel, EdgeLabel>,
}

impl LabelUnion {
    fn find(&self, mut e: EdgeLabel) -> EdgeLabel {
        while let Some(&p) = self.parent.get(&e) {
            e = p;
        }
        e
    }

    fn union(&mut self, a: EdgeLabel, b: EdgeLabel) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }
}

/// Parse `PD[X[a,b,c,d],...]`. `Loop[k]` items denote crossingless
/// components.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    parse_pd_with_loops(text, 0)
}

pub fn parse_pd_with_loops(text: &str, extra_free_loops: usize) -> Result<LinkDiagram> {
    let (crossings, loops) = PdParser::new(text).parse()?;
    LinkDiagram::new(crossings, loops + extra_free_loops, None)
}

struct PdParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> PdParser<'a> {
    fn new(text: &'a str) -> Self {
        Self { src: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected '{tok}'"))
        }
    }

    fn number(&mut self) -> Result<EdgeLabel> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a positive integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match s.parse::<EdgeLabel>() {
            Ok(0) => {
                self.pos = start;
                self.err("edge labels must be positive")
            }
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("edge label out of range")
            }
        }
    }

    fn parse(mut self) -> Result<(Vec<[EdgeLabel; 4]>, usize)> {
        self.expect("PD")?;
        self.expect("[")?;
        let mut crossings = vec![];
        let mut loops = 0;
        if !self.eat("]") {
            loop {
                if self.eat("X") {
                    self.expect("[")?;
                    let mut x = [0; 4];
                    for (i, slot) in x.iter_mut().enumerate() {
                        if i > 0 {
                            self.expect(",")?;
                        }
                        *slot = self.number()?;
                    }
                    self.expect("]")?;
                    crossings.push(x);
                } else if self.eat("Loop") {
                    self.expect("[")?;
                    self.number()?;
                    self.expect("]")?;
                    loops += 1;
                } else {
                    return self.err("expected 'X[' or 'Loop['");
                }
                if self.eat("]") {
                    break;
                }
                self.expect(",")?;
            }
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("trailing input");
        }
        Ok((crossings, loops))
    }
}
