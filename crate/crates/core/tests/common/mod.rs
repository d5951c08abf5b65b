//! Independent oracles and helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hopf_kh::homalg::LaurentPoly;
use hopf_kh::library::braid_closure;
use hopf_kh::linkdiag::{EdgeLabel, LinkDiagram};

/// Circles of the smoothing `state` as classes of edge labels, ordered by
/// smallest label.
fn smoothing_circles(d: &LinkDiagram, state: u64) -> Vec<BTreeSet<EdgeLabel>> {
    let mut parent: BTreeMap<EdgeLabel, EdgeLabel> = BTreeMap::new();
    fn find(p: &mut BTreeMap<EdgeLabel, EdgeLabel>, x: EdgeLabel) -> EdgeLabel {
        let up = *p.entry(x).or_insert(x);
        if up == x {
            return x;
        }
        let r = find(p, up);
        p.insert(x, r);
        r
    }
    let join = |p: &mut BTreeMap<EdgeLabel, EdgeLabel>, a, b| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p.insert(ra.max(rb), ra.min(rb));
        }
    };
    for (i, x) in d.crossings().iter().enumerate() {
        let [a, b, c, e] = *x;
        if state >> i & 1 == 0 {
            join(&mut parent, a, b);
            join(&mut parent, c, e);
        } else {
            join(&mut parent, a, e);
            join(&mut parent, b, c);
        }
    }
    let keys: Vec<EdgeLabel> = parent.keys().copied().collect();
    let mut classes: BTreeMap<EdgeLabel, BTreeSet<EdgeLabel>> = BTreeMap::new();
    for k in keys {
        let r = find(&mut parent, k);
        classes.entry(r).or_default().insert(k);
    }
    let mut out: Vec<BTreeSet<EdgeLabel>> = classes.into_values().collect();
    out.sort_by_key(|c| *c.iter().next().unwrap());
    out
}

type Poly = BTreeMap<i64, i64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&i, &x) in a {
        for (&j, &y) in b {
            *out.entry(i + j).or_insert(0) += x * y;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Unnormalized Jones polynomial in `q` (`q + q^{-1}` for the unknot) from
/// the Kauffman bracket state sum.
pub fn kauffman_jones(d: &LinkDiagram) -> LaurentPoly {
    let n = d.crossing_count();
    let loop_value: Poly = BTreeMap::from([(2, -1), (-2, -1)]);
    let mut bracket = Poly::new();
    for state in 0u64..(1 << n) {
        let b_count = state.count_ones() as i64;
        let loops = smoothing_circles(d, state).len() + d.free_loops();
        let mut term: Poly = BTreeMap::from([(n as i64 - 2 * b_count, 1)]);
        for _ in 1..loops {
            term = poly_mul(&term, &loop_value);
        }
        for (k, v) in term {
            *bracket.entry(k).or_insert(0) += v;
        }
    }
    bracket.retain(|_, v| *v != 0);
    let w: i64 = d.crossing_signs().signs.iter().map(|&s| s as i64).sum();
    // (-A^3)^{-w}
    let unit: Poly = BTreeMap::from([(-3 * w, if w % 2 == 0 { 1 } else { -1 })]);
    let v = poly_mul(&bracket, &unit);
    // A^k = (A^{-2})^{-k/2} = (-q)^{-k/2}
    let mut in_q = Poly::new();
    for (k, c) in v {
        assert_eq!(k % 2, 0, "odd power of A after normalization");
        let e = -k / 2;
        *in_q.entry(e).or_insert(0) += if e % 2 == 0 { c } else { -c };
    }
    let j = poly_mul(&in_q, &BTreeMap::from([(1, 1), (-1, 1)]));
    LaurentPoly::from_int_exponents(&j.into_iter().collect::<Vec<_>>())
}

/// `|V_L(-1)|` from the bracket at `A = e^{iπ/4}`.
pub fn determinant_oracle(d: &LinkDiagram) -> u64 {
    let n = d.crossing_count();
    let zeta = |k: i64| {
        let a = std::f64::consts::FRAC_PI_4 * k as f64;
        (a.cos(), a.sin())
    };
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for state in 0u64..(1 << n) {
        let b_count = state.count_ones() as i64;
        let loops = smoothing_circles(d, state).len() + d.free_loops();
        // d = -A^2 - A^{-2} = -(i - i) = 0 at A = ζ_8, so only one-loop states count
        if loops != 1 {
            continue;
        }
        let (x, y) = zeta(n as i64 - 2 * b_count);
        re += x;
        im += y;
    }
    (re * re + im * im).sqrt().round() as u64
}

/// Kh over F2 from enhanced states, with no signs; keys `(h, q)`.
pub fn kh_f2_oracle(d: &LinkDiagram) -> BTreeMap<(i64, i64), usize> {
    let n = d.crossing_count();
    let signs = d.crossing_signs();
    let (n_plus, n_minus) = (signs.n_plus as i64, signs.n_minus as i64);
    let free = d.free_loops();
    let states: Vec<Vec<BTreeSet<EdgeLabel>>> = (0u64..(1 << n)).map(|s| smoothing_circles(d, s)).collect();
    let circle_count = |s: usize| states[s].len() + free;
    let grading = |s: usize, mask: u64| -> (i64, i64) {
        let k = circle_count(s) as i64;
        let minus = mask.count_ones() as i64;
        let ones = s.count_ones() as i64;
        (ones - n_minus, (k - minus) - minus + ones + n_plus - 2 * n_minus)
    };
    // index of every enhanced state within its (h, q) block
    let mut blocks: BTreeMap<(i64, i64), Vec<(usize, u64)>> = BTreeMap::new();
    for s in 0..states.len() {
        for mask in 0u64..(1 << circle_count(s)) {
            blocks.entry(grading(s, mask)).or_default().push((s, mask));
        }
    }
    let index: BTreeMap<(usize, u64), usize> =
        blocks.values().flat_map(|v| v.iter().enumerate().map(|(i, &g)| (g, i))).collect();
    let circle_of = |s: usize, e: EdgeLabel| states[s].iter().position(|c| c.contains(&e)).unwrap();

    // image of one enhanced state under d, as a set of enhanced states
    let image = |s: usize, mask: u64| -> Vec<(usize, u64)> {
        let mut out: BTreeMap<(usize, u64), bool> = BTreeMap::new();
        for i in 0..n {
            if s >> i & 1 == 1 {
                continue;
            }
            let t = s | 1 << i;
            let [a, b, c, _] = d.crossings()[i];
            // carry the uninvolved circles
            let carried = |m: u64, skip: &[usize]| -> u64 {
                let mut out = 0u64;
                for (ci, circ) in states[s].iter().enumerate() {
                    if skip.contains(&ci) {
                        continue;
                    }
                    let e = *circ.iter().next().unwrap();
                    if m >> ci & 1 == 1 {
                        out |= 1 << circle_of(t, e);
                    }
                }
                for f in 0..free {
                    if m >> (states[s].len() + f) & 1 == 1 {
                        out |= 1 << (states[t].len() + f);
                    }
                }
                out
            };
            let (c1, c2) = (circle_of(s, a), circle_of(s, c));
            let mut targets = vec![];
            if c1 != c2 {
                let m = circle_of(t, a);
                let base = carried(mask, &[c1, c2]);
                match (mask >> c1 & 1, mask >> c2 & 1) {
                    (0, 0) => targets.push(base),
                    (1, 1) => {}
                    _ => targets.push(base | 1 << m),
                }
            } else {
                let (m1, m2) = (circle_of(t, a), circle_of(t, b));
                assert_ne!(m1, m2);
                let base = carried(mask, &[c1]);
                if mask >> c1 & 1 == 0 {
                    targets.push(base | 1 << m1);
                    targets.push(base | 1 << m2);
                } else {
                    targets.push(base | 1 << m1 | 1 << m2);
                }
            }
            for m in targets {
                let e = out.entry((t, m)).or_insert(false);
                *e = !*e;
            }
        }
        out.into_iter().filter(|&(_, v)| v).map(|(k, _)| k).collect()
    };

    let mut rank_of_d: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (&(h, q), gens) in &blocks {
        let Some(target) = blocks.get(&(h + 1, q)) else { continue };
        let words = target.len().div_ceil(64);
        let mut rows: Vec<Vec<u64>> = gens
            .iter()
            .map(|&(s, m)| {
                let mut row = vec![0u64; words];
                for g in image(s, m) {
                    let j = index[&g];
                    row[j / 64] ^= 1 << (j % 64);
                }
                row
            })
            .collect();
        rank_of_d.insert((h, q), f2_rank(&mut rows, target.len()));
    }
    let mut out = BTreeMap::new();
    for (&(h, q), gens) in &blocks {
        let r_out = rank_of_d.get(&(h, q)).copied().unwrap_or(0);
        let r_in = rank_of_d.get(&(h - 1, q)).copied().unwrap_or(0);
        let dim = gens.len() - r_out - r_in;
        if dim > 0 {
            out.insert((h, q), dim);
        }
    }
    out
}

fn f2_rank(rows: &mut [Vec<u64>], cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Ranks of a bigraded group as a plain map, for comparison with oracles.
pub fn rank_map(g: &hopf_kh::homalg::BigradedGroup) -> BTreeMap<(i64, i64), usize> {
    g.iter().filter(|(_, a)| a.free_rank > 0).map(|(k, a)| (k, a.free_rank)).collect()
}

/// Split union of two diagrams.
pub fn disjoint_union(a: &LinkDiagram, b: &LinkDiagram) -> LinkDiagram {
    let shift = a.edges().last().copied().unwrap_or(0);
    let mut crossings = a.crossings().to_vec();
    crossings.extend(b.crossings().iter().map(|x| x.map(|e| e + shift)));
    LinkDiagram::new(crossings, a.free_loops() + b.free_loops(), None).unwrap()
}

pub fn braid(strands: usize, word: &[i32]) -> LinkDiagram {
    braid_closure(strands, word).unwrap()
}

/// Greatest common divisor of all `k x k` minors, for `k = 1..=min(m, n)`;
/// the invariant factors are their successive quotients.
pub fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![];
    for k in 1..=rows.min(cols) {
        let mut g: i128 = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect()).collect();
                g = gcd(g, laplace(&sub).abs());
            }
        }
        out.push(g);
    }
    out
}

/// Invariant factors from the determinantal divisors.
pub fn invariant_factors_oracle(m: &[Vec<i64>]) -> Vec<i128> {
    let dd = determinantal_divisors(m);
    let mut out = vec![];
    let mut prev = 1i128;
    for d in dd {
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with_last: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in &mut with_last {
        s.push(n - 1);
    }
    let mut out = subsets(n - 1, k);
    out.extend(with_last);
    out
}

fn laplace(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * laplace(&minor)
            })
            .sum(),
    }
}

/// Rank shapes (symmetric, support at least three gradings, top grading at
/// most `m_max`) admitting summand signs whose series `Σ ε_i t^{j_i}` is
/// divisible by `(t - 1)^2` with `|½ p''(1)| = lk_abs`. Each summand gets its
/// own sign. Returned as the per-grading net coefficients, normalized so the
/// top grading is positive.
pub fn shape_oracle(budget: usize, lk_abs: i64, m_max: i64) -> BTreeSet<Vec<(i64, i64)>> {
    let mut out = BTreeSet::new();
    let mut ranks = vec![0usize; (2 * m_max + 1) as usize];
    fn ranks_rec(i: usize, left: usize, ranks: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == ranks.len() {
            f(ranks);
            return;
        }
        for r in 0..=left {
            ranks[i] = r;
            ranks_rec(i + 1, left - r, ranks, f);
        }
        ranks[i] = 0;
    }
    let mut visit = |ranks: &[usize]| {
        let j = |i: usize| i as i64 - m_max;
        let support: Vec<usize> = (0..ranks.len()).filter(|&i| ranks[i] > 0).collect();
        if support.len() < 3 || (0..ranks.len()).any(|i| ranks[i] != ranks[ranks.len() - 1 - i]) {
            return;
        }
        // net coefficient per grading ranges over -r, -r+2, ..., r
        let mut coeffs = vec![0i64; support.len()];
        fn signs_rec(k: usize, support: &[usize], ranks: &[usize], coeffs: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
            if k == support.len() {
                f(coeffs);
                return;
            }
            let r = ranks[support[k]] as i64;
            let mut c = -r;
            while c <= r {
                coeffs[k] = c;
                signs_rec(k + 1, support, ranks, coeffs, f);
                c += 2;
            }
        }
        let mut found = vec![];
        signs_rec(0, &support, ranks, &mut coeffs, &mut |cs: &[i64]| {
            let p0: i64 = cs.iter().sum();
            let p1: i64 = cs.iter().zip(&support).map(|(c, &i)| c * j(i)).sum();
            let p2: i64 = cs.iter().zip(&support).map(|(c, &i)| c * j(i) * j(i)).sum();
            if p0 == 0 && p1 == 0 && p2 % 2 == 0 && (p2 / 2).abs() == lk_abs {
                let top = *cs.last().unwrap();
                let flip = if top < 0 { -1 } else { 1 };
                found.push(support.iter().zip(cs).map(|(&i, &c)| (j(i), flip * c)).collect::<Vec<_>>());
            }
        });
        out.extend(found);
    };
    ranks_rec(0, budget, &mut ranks, &mut visit);
    out
}

/// Peak resident set size in KiB, where the platform reports it.
pub fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}
