//! Brute-force orbit enumeration over small finite rings Z/n.
//!
//! Elements are stored as residues in u8 and matrices as fixed arrays, so
//! the enumeration never touches the generic arithmetic.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::error::{precondition, Error, Result};
use crate::ring::{Ring, RingSpec};

pub const DEFAULT_MAX_ORDER: u64 = 9;
/// States explored per class when merging after one stabilization.
const LEVEL_ONE_BUDGET: usize = 20_000;

#[derive(Clone, Debug)]
pub struct FiniteRing {
    n: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl FiniteRing {
    pub fn new(ring: &Ring, max_order: u64) -> Result<FiniteRing> {
        let n = match &**ring {
            RingSpec::IntegersMod(n) | RingSpec::PrimeField(n) => n.clone(),
            _ => return Err(Error::Unsupported(format!("the oracle needs a finite ring Z/n, got {ring}"))),
        };
        let n = u64::try_from(&n).unwrap_or(u64::MAX);
        if n > max_order || n > 255 {
            return Err(Error::SizeLimit(format!("ring of order {n} exceeds the oracle bound {max_order}")));
        }
        if n % 2 == 0 {
            return precondition("the oracle needs 2 to be a unit");
        }
        let n = n as u8;
        let table = |f: fn(u32, u32) -> u32| -> Vec<u8> {
            (0..n as u32 * n as u32).map(|k| (f(k / n as u32, k % n as u32) % n as u32) as u8).collect()
        };
        Ok(FiniteRing { n, add: table(|a, b| a + b), mul: table(|a, b| a * b) })
    }

    pub fn order(&self) -> u8 {
        self.n
    }
    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.n as usize + b as usize]
    }
    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.n as usize + b as usize]
    }
    fn neg(&self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }
    fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect() }
    }
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }
    /// The smaller root wins, so roots are orbit minima.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Orbits of an enumerated universe, each a sorted list of entry lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub ring: String,
    pub universe: String,
    pub size: usize,
    pub generators: usize,
    pub orbits: Vec<Vec<Vec<u8>>>,
    pub edges: u64,
}

impl OrbitPartition {
    pub fn orbit_of(&self, x: &[u8]) -> Option<usize> {
        self.orbits.iter().position(|o| o.binary_search_by(|y| y.as_slice().cmp(x)).is_ok())
    }
}

fn decode(code: u32, n: u8, len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    let mut c = code;
    for k in (0..len).rev() {
        out[k] = (c % n as u32) as u8;
        c /= n as u32;
    }
    out
}

fn encode(xs: &[u8], n: u8) -> u32 {
    xs.iter().fold(0u32, |acc, &x| acc * n as u32 + x as u32)
}

/// Groups members by union-find root; orbits come out ordered by minimum.
fn collect(uf: &mut UnionFind, members: &[u32], n: u8, len: usize) -> Vec<Vec<Vec<u8>>> {
    let mut by_root: std::collections::BTreeMap<u32, Vec<Vec<u8>>> = Default::default();
    for &m in members {
        by_root.entry(uf.find(m)).or_default().push(decode(m, n, len));
    }
    by_root.into_values().collect()
}

fn is_unit(r: &FiniteRing, x: u8) -> bool {
    (0..r.n).any(|y| r.mul(x, y) == 1)
}

/// Σ aᵢbᵢ = 1 for some b: some element of the ideal (a) is a unit.
fn row_is_unimodular(r: &FiniteRing, a: &[u8; 3]) -> bool {
    (0..r.n).any(|x| (0..r.n).any(|y| (0..r.n).any(|z| {
        let s = r.add(r.add(r.mul(a[0], x), r.mul(a[1], y)), r.mul(a[2], z));
        is_unit(r, s)
    })))
}

/// Row orbits of Um₃ under right multiplication by every E_ij(λ).
pub fn orbits_um3(ring: &Ring) -> Result<OrbitPartition> {
    orbits_um3_bounded(ring, DEFAULT_MAX_ORDER)
}

pub fn orbits_um3_bounded(ring: &Ring, max_order: u64) -> Result<OrbitPartition> {
    let r = FiniteRing::new(ring, max_order)?;
    let n = r.n;
    let total = (n as usize).pow(3);
    let rows: Vec<u32> = (0..total as u32)
        .filter(|&c| {
            let v = decode(c, n, 3);
            row_is_unimodular(&r, &[v[0], v[1], v[2]])
        })
        .collect();
    let mut uf = UnionFind::new(total);
    let mut edges = 0u64;
    let apply = |v: &[u8], i: usize, j: usize, l: u8| -> Vec<u8> {
        let mut w = v.to_vec();
        w[j] = r.add(w[j], r.mul(l, w[i]));
        w
    };
    let gens: Vec<(usize, usize, u8)> = (0..3)
        .flat_map(|i| (0..3).filter(move |&j| j != i).flat_map(move |j| (1..n).map(move |l| (i, j, l))))
        .collect();
    for &c in &rows {
        let v = decode(c, n, 3);
        for &(i, j, l) in &gens {
            uf.union(c, encode(&apply(&v, i, j, l), n));
            edges += 1;
        }
    }
    // closure: every generator keeps every row in its orbit
    for &c in &rows {
        let v = decode(c, n, 3);
        let root = uf.find(c);
        for &(i, j, l) in &gens {
            if uf.find(encode(&apply(&v, i, j, l), n)) != root {
                return Err(Error::Verification("row orbit is not closed".into()));
            }
        }
    }
    Ok(OrbitPartition {
        ring: ring.to_string(),
        universe: "Um3".into(),
        size: rows.len(),
        generators: gens.len(),
        orbits: collect(&mut uf, &rows, n, 3),
        edges,
    })
}

/// Upper entries (01, 02, 03, 12, 13, 23) of a skew 4×4 matrix.
type Skew4 = [u8; 6];

fn idx4(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => unreachable!(),
    }
}

fn get_skew(r: &FiniteRing, m: &[u8], size: usize, i: usize, j: usize) -> u8 {
    use std::cmp::Ordering::*;
    let pos = |a: usize, b: usize| a * (2 * size - a - 1) / 2 + (b - a - 1);
    match i.cmp(&j) {
        Equal => 0,
        Less => m[pos(i, j)],
        Greater => r.neg(m[pos(j, i)]),
    }
}

/// Eᵀ M E for E = E_ij(λ), on packed upper entries of a skew matrix of
/// the given size: column j += λ column i, then row j += λ row i.
fn congruence_step(r: &FiniteRing, m: &[u8], size: usize, i: usize, j: usize, l: u8) -> Vec<u8> {
    let full = |a: usize, b: usize| get_skew(r, m, size, a, b);
    let mut out = Vec::with_capacity(m.len());
    for a in 0..size {
        for b in a + 1..size {
            // entry (a, b) of EᵀME; the λ² M_ii term vanishes
            let mut v = full(a, b);
            if b == j {
                v = r.add(v, r.mul(l, full(a, i)));
            }
            if a == j {
                v = r.add(v, r.mul(l, full(i, b)));
            }
            out.push(v);
        }
    }
    out
}

pub fn pfaffian4(r: &FiniteRing, m: &Skew4) -> u8 {
    let p = |i, j| m[idx4(i, j)];
    r.add(r.sub(r.mul(p(0, 1), p(2, 3)), r.mul(p(0, 2), p(1, 3))), r.mul(p(0, 3), p(1, 2)))
}

/// Pfaffian-1 skew 4×4 matrices up to elementary congruence, optionally
/// merging classes that meet after adding ψ₂.
pub fn orbits_a4(ring: &Ring, stab_levels: usize) -> Result<OrbitPartition> {
    orbits_a4_bounded(ring, stab_levels, DEFAULT_MAX_ORDER)
}

pub fn orbits_a4_bounded(ring: &Ring, stab_levels: usize, max_order: u64) -> Result<OrbitPartition> {
    if stab_levels > 1 {
        return Err(Error::SizeLimit("stabilization is explored to level 1 at most".into()));
    }
    let r = FiniteRing::new(ring, max_order)?;
    let n = r.n;
    let total = (n as usize).pow(6);
    let members: Vec<u32> = (0..total as u32)
        .filter(|&c| {
            let v = decode(c, n, 6);
            pfaffian4(&r, &[v[0], v[1], v[2], v[3], v[4], v[5]]) == 1
        })
        .collect();
    let gens: Vec<(usize, usize, u8)> = (0..4)
        .flat_map(|i| (0..4).filter(move |&j| j != i).flat_map(move |j| (1..n).map(move |l| (i, j, l))))
        .collect();
    let mut uf = UnionFind::new(total);
    let mut edges = 0u64;
    for &c in &members {
        let v = decode(c, n, 6);
        for &(i, j, l) in &gens {
            uf.union(c, encode(&congruence_step(&r, &v, 4, i, j, l), n));
            edges += 1;
        }
    }
    for &c in &members {
        let v = decode(c, n, 6);
        let root = uf.find(c);
        for &(i, j, l) in &gens {
            let w = congruence_step(&r, &v, 4, i, j, l);
            if pfaffian4(&r, &[w[0], w[1], w[2], w[3], w[4], w[5]]) != 1 {
                return Err(Error::Verification("Pfaffian changed under elementary congruence".into()));
            }
            if uf.find(encode(&w, n)) != root {
                return Err(Error::Verification("congruence orbit is not closed".into()));
            }
        }
    }
    let mut universe = "A4 Pf=1".to_string();
    if stab_levels == 1 {
        let roots: Vec<u32> = {
            let mut rs: Vec<u32> = members.iter().map(|&c| uf.find(c)).collect();
            rs.sort_unstable();
            rs.dedup();
            rs
        };
        if roots.len() > 1 {
            for &root in &roots {
                for other in level_one_neighbours(&r, &decode(root, n, 6)) {
                    uf.union(root, encode(&other, n));
                }
            }
        }
        universe.push_str(" level 1");
    }
    Ok(OrbitPartition {
        ring: ring.to_string(),
        universe,
        size: members.len(),
        generators: gens.len(),
        orbits: collect(&mut uf, &members, n, 6),
        edges,
    })
}

/// 4×4 matrices N with N ⊥ ψ₂ reachable from M ⊥ ψ₂ by a bounded
/// breadth-first search under elementary congruence at size 6.
fn level_one_neighbours(r: &FiniteRing, m: &[u8]) -> Vec<Vec<u8>> {
    let n = r.n;
    let size = 6;
    // packed upper entries of M ⊥ ψ₂
    let mut start = Vec::with_capacity(15);
    for a in 0..size {
        for b in a + 1..size {
            start.push(if a < 4 && b < 4 {
                m[idx4(a, b)]
            } else if (a, b) == (4, 5) {
                1
            } else {
                0
            });
        }
    }
    let gens: Vec<(usize, usize, u8)> = (0..size)
        .flat_map(|i| (0..size).filter(move |&j| j != i).flat_map(move |j| (1..n).map(move |l| (i, j, l))))
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    let mut found = Vec::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(x) = queue.pop_front() {
        let split = (0..4).all(|a| get_skew(r, &x, size, a, 4) == 0 && get_skew(r, &x, size, a, 5) == 0)
            && get_skew(r, &x, size, 4, 5) == 1;
        if split {
            let mut y = Vec::with_capacity(6);
            for a in 0..4 {
                for b in a + 1..4 {
                    y.push(get_skew(r, &x, size, a, b));
                }
            }
            found.push(y);
        }
        if seen.len() >= LEVEL_ONE_BUDGET {
            continue;
        }
        for &(i, j, l) in &gens {
            let y = congruence_step(r, &x, size, i, j, l);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    found
}

/// V(a, b) over the finite ring, packed as upper entries.
pub fn classical_symbol4(r: &FiniteRing, a: &[u8; 3], b: &[u8; 3]) -> Skew4 {
    // rows [0, −a1, −a2, −a3], [a1, 0, −b3, b2], [a2, b3, 0, −b1]
    [r.neg(a[0]), r.neg(a[1]), r.neg(a[2]), r.neg(b[2]), b[1], r.neg(b[0])]
}

fn witnesses(r: &FiniteRing, a: &[u8; 3]) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for x in 0..r.n {
        for y in 0..r.n {
            for z in 0..r.n {
                if r.add(r.add(r.mul(a[0], x), r.mul(a[1], y)), r.mul(a[2], z)) == 1 {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SymbolMapReport {
    pub ring: String,
    pub rows: OrbitPartition,
    pub level0: OrbitPartition,
    pub classes: OrbitPartition,
    /// image class of each row orbit
    pub map: Vec<usize>,
    /// whether every member and witness of each row orbit was checked
    pub all_members_checked: bool,
    pub injective: bool,
    pub surjective: bool,
    pub timings: Vec<(String, Duration)>,
}

/// Members of every row orbit are checked (with all witnesses) when the
/// ring has at most this many elements.
const EXHAUSTIVE_ORDER: u8 = 5;

pub fn symbol_map_report(ring: &Ring) -> Result<SymbolMapReport> {
    let r = FiniteRing::new(ring, DEFAULT_MAX_ORDER)?;
    let mut timings = Vec::new();
    let t = Instant::now();
    let rows = orbits_um3(ring)?;
    timings.push(("um3".to_string(), t.elapsed()));
    let t = Instant::now();
    let level0 = orbits_a4(ring, 0)?;
    timings.push(("a4 level 0".to_string(), t.elapsed()));
    let t = Instant::now();
    let classes = if level0.orbits.len() > 1 { orbits_a4(ring, 1)? } else { level0.clone() };
    timings.push(("a4 level 1".to_string(), t.elapsed()));

    let t = Instant::now();
    let all_members_checked = r.order() <= EXHAUSTIVE_ORDER;
    let mut map = Vec::with_capacity(rows.orbits.len());
    for orbit in &rows.orbits {
        let members: &[Vec<u8>] = if all_members_checked { orbit } else { &orbit[..1] };
        let mut image: Option<usize> = None;
        for row in members {
            let a = [row[0], row[1], row[2]];
            let ws = witnesses(&r, &a);
            let ws: &[[u8; 3]] = if all_members_checked { &ws } else { &ws[..1] };
            for b in ws {
                let v = classical_symbol4(&r, &a, b);
                if pfaffian4(&r, &v) != 1 {
                    return Err(Error::Verification("classical symbol does not have Pfaffian 1".into()));
                }
                let class = classes
                    .orbit_of(&v)
                    .ok_or_else(|| Error::Verification("symbol outside the enumerated classes".into()))?;
                match image {
                    None => image = Some(class),
                    Some(c) if c != class => {
                        return Err(Error::Verification("symbol is not constant on a row orbit".into()))
                    }
                    _ => {}
                }
            }
        }
        map.push(image.expect("orbits are nonempty"));
    }
    timings.push(("symbol map".to_string(), t.elapsed()));
    let mut sorted = map.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let injective = sorted.len() == map.len();
    let surjective = sorted.len() == classes.orbits.len();
    Ok(SymbolMapReport {
        ring: ring.to_string(),
        rows,
        level0,
        classes,
        map,
        all_members_checked,
        injective,
        surjective,
        timings,
    })
}

fn plural(k: usize, word: &str) -> String {
    if k == 1 {
        format!("1 {word}")
    } else {
        format!("{k} {word}s")
    }
}

fn class_word(k: usize) -> String {
    if k == 1 {
        "1 class".into()
    } else {
        format!("{k} classes")
    }
}

impl SymbolMapReport {
    pub fn verdict(&self) -> &'static str {
        match (self.injective, self.surjective) {
            (true, true) => "bijective",
            (true, false) => "injective",
            (false, true) => "surjective",
            (false, false) => "neither",
        }
    }

    /// Text report; timings are included only on request so that reports
    /// are reproducible byte for byte.
    pub fn render(&self, timings: bool) -> String {
        let mut s = String::new();
        let yes = |b: bool| if b { "yes" } else { "no" };
        let _ = writeln!(s, "vaserstein-oracle v1");
        let _ = writeln!(s, "ring {}", self.ring);
        let _ = writeln!(
            s,
            "um3: {} unimodular rows, {} generators, {}",
            self.rows.size,
            self.rows.generators,
            plural(self.rows.orbits.len(), "orbit")
        );
        let _ = writeln!(
            s,
            "a4 level 0: {} matrices with Pfaffian 1, {} generators, {}",
            self.level0.size,
            self.level0.generators,
            class_word(self.level0.orbits.len())
        );
        let _ = writeln!(s, "a4 level 1: {}", class_word(self.classes.orbits.len()));
        if self.classes.orbits.len() > 1 {
            let _ = writeln!(s, "note: classes are distinct at level <= 1, deeper stabilization not explored");
        }
        for (k, orbit) in self.rows.orbits.iter().enumerate() {
            let rep = &orbit[0];
            let _ = writeln!(
                s,
                "orbit {k} ({} rows, representative {:?}) -> class {}",
                orbit.len(),
                rep,
                self.map[k]
            );
        }
        let _ = writeln!(
            s,
            "well defined: {}",
            if self.all_members_checked { "checked on all members and witnesses" } else { "checked on representatives" }
        );
        let _ = writeln!(s, "injective: {}", yes(self.injective));
        let _ = writeln!(s, "surjective: {}", yes(self.surjective));
        if timings {
            for (name, d) in &self.timings {
                let _ = writeln!(s, "time {name}: {:.3}s", d.as_secs_f64());
            }
        }
        let _ = writeln!(s, "{}", self.summary());
        s
    }

    /// e.g. "summary: 1 orbit / 1 class / bijective"
    pub fn summary(&self) -> String {
        format!(
            "summary: {} / {} / {}",
            plural(self.rows.orbits.len(), "orbit"),
            class_word(self.classes.orbits.len()),
            self.verdict()
        )
    }
}
