//! Bounded enumeration of loxodromic conjugacy classes in PSL(2, Z[i]).
//!
//! Classes are found by union-find over conjugation by the generators, with
//! exploration capped at a height. Distinct reported classes may still be
//! conjugate through elements above the cap, so the table may over-split.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::gaussian_ring::{gcd, mod_inverse, GaussianInt};

/// A 2x2 matrix over `Z[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: GaussianInt,
    pub b: GaussianInt,
    pub c: GaussianInt,
    pub d: GaussianInt,
}

type Key = [i8; 8];

const fn g(re: i64, im: i64) -> GaussianInt {
    GaussianInt::new(re, im)
}

/// `(1 1; 0 1)`, `(1 i; 0 1)` and `(0 -1; 1 0)`.
pub const GENERATORS: [Mat2; 3] = [
    Mat2::new(g(1, 0), g(1, 0), g(0, 0), g(1, 0)),
    Mat2::new(g(1, 0), g(0, 1), g(0, 0), g(1, 0)),
    Mat2::new(g(0, 0), g(-1, 0), g(1, 0), g(0, 0)),
];

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(g(1, 0), g(0, 0), g(0, 0), g(1, 0));

    pub const fn new(a: GaussianInt, b: GaussianInt, c: GaussianInt, d: GaussianInt) -> Self {
        Self { a, b, c, d }
    }

    pub fn det(&self) -> GaussianInt {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> GaussianInt {
        self.a + self.d
    }

    pub fn height(&self) -> i64 {
        self.entries().iter().map(|e| e.height()).max().unwrap_or(0)
    }

    pub fn entries(&self) -> [GaussianInt; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn pow(&self, k: u32) -> Mat2 {
        let mut out = Mat2::IDENTITY;
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// The sign representative: first nonzero entry has `re > 0`, or `re = 0` and `im > 0`.
    pub fn psl_normalized(&self) -> Mat2 {
        match self.entries().into_iter().find(|e| !e.is_zero()) {
            Some(e) if e.sign_normalized() != e => Mat2::new(-self.a, -self.b, -self.c, -self.d),
            _ => *self,
        }
    }

    fn key(&self) -> Key {
        let mut k = [0i8; 8];
        for (slot, e) in self.entries().iter().enumerate() {
            k[2 * slot] = e.re as i8;
            k[2 * slot + 1] = e.im as i8;
        }
        k
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Elliptic,
    Parabolic,
    Loxodromic,
}

/// Norm `|lambda|^2` of the larger eigenvalue `lambda = (t + sqrt(t^2 - 4))/2`.
///
/// Elliptic traces (real, `|t| < 2`) report norm 1.
pub fn trace_to_norm(t: Complex64) -> (f64, Kind) {
    let real = t.im.abs() <= 1e-12;
    if real && (t.re.abs() - 2.0).abs() <= 1e-12 {
        return (1.0, Kind::Parabolic);
    }
    if real && t.re.abs() < 2.0 {
        return (1.0, Kind::Elliptic);
    }
    let root = (t * t - 4.0).sqrt();
    let plus = (t + root) * 0.5;
    let minus = (t - root) * 0.5;
    let lambda = if plus.norm() >= minus.norm() { plus } else { minus };
    (lambda.norm_sqr(), Kind::Loxodromic)
}

fn kind_of(m: &Mat2) -> (f64, Kind) {
    trace_to_norm(m.trace().to_complex())
}

fn box_values(h: i64) -> Vec<GaussianInt> {
    let mut v = Vec::with_capacity(((2 * h + 1) * (2 * h + 1)) as usize);
    for re in -h..=h {
        for im in -h..=h {
            v.push(g(re, im));
        }
    }
    v
}

fn sort_matrices(v: &mut [Mat2]) {
    v.sort_by_key(|m| (m.height(), m.key()));
}

/// All of PSL(2, Z[i]) with entries of height at most `h`, one matrix per sign pair.
///
/// For coprime `(a, c)` the solutions of `ad - bc = 1` are `d = d0 + kc`,
/// `b = b0 + ka`; the range of `k` is bounded by the height box.
pub fn enumerate_group(h: i64) -> Vec<Mat2> {
    assert!((1..=127).contains(&h), "height must lie in 1..=127");
    let vals = box_values(h);
    let chunks: Vec<Vec<Mat2>> = vals
        .par_iter()
        .map(|&a| {
            let mut out = Vec::new();
            for &c in &vals {
                solve_for_pair(a, c, h, &mut out);
            }
            out
        })
        .collect();
    let mut all: Vec<Mat2> = chunks.into_iter().flatten().filter(|m| m.psl_normalized() == *m).collect();
    sort_matrices(&mut all);
    all
}

fn solve_for_pair(a: GaussianInt, c: GaussianInt, h: i64, out: &mut Vec<Mat2>) {
    if a.is_zero() && c.is_zero() {
        return;
    }
    if gcd(a, c) != Ok(GaussianInt::ONE) {
        return;
    }
    let in_box = |z: GaussianInt| z.height() <= h;
    if c.is_zero() {
        // a is a unit: d = a^{-1}, b free
        let d = a.conj();
        for b in box_values(h) {
            out.push(Mat2::new(a, b, c, d));
        }
        return;
    }
    // a d0 = 1 mod c, then shift d0 next to the origin
    let d0 = mod_inverse(a, c).unwrap_or(GaussianInt::ZERO);
    let d0 = d0 - c * d0.div_nearest(c);
    let b0 = (a * d0 - GaussianInt::ONE)
        .exact_div(c)
        .expect("a d0 - 1 is divisible by c");
    let reach = ((d0.abs() + std::f64::consts::SQRT_2 * h as f64) / c.abs()).ceil() as i64 + 1;
    for kr in -reach..=reach {
        for ki in -reach..=reach {
            let k = g(kr, ki);
            let d = d0 + k * c;
            let b = b0 + k * a;
            if in_box(d) && in_box(b) {
                out.push(Mat2::new(a, b, c, d));
            }
        }
    }
}

/// Quadruple loop over the height box testing `ad - bc = 1` directly.
pub fn enumerate_group_brute_force(h: i64) -> Vec<Mat2> {
    let vals = box_values(h);
    let mut all = Vec::new();
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                for &d in &vals {
                    let m = Mat2::new(a, b, c, d);
                    if m.det() == GaussianInt::ONE && m.psl_normalized() == m {
                        all.push(m);
                    }
                }
            }
        }
    }
    sort_matrices(&mut all);
    all
}

/// One reported conjugacy class.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicClass {
    pub representative: Mat2,
    /// Trace of the representative, normalized up to sign.
    pub trace: GaussianInt,
    pub norm: f64,
    pub primitive: bool,
    pub power_index: u32,
    /// Norm of the primitive root, when a root was found.
    pub root_norm: f64,
    /// Members found within the orbit height cap.
    pub class_size_observed: usize,
    /// Enumerated elements of height at most `h_rep` in this class.
    pub raw_members: usize,
}

impl GeodesicClass {
    /// `log N(P_0)`.
    pub fn lambda_weight(&self) -> f64 {
        self.norm.ln() / self.power_index as f64
    }
}

/// CSV row of the class table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRow {
    pub trace_re: i64,
    pub trace_im: i64,
    pub norm: f64,
    pub primitive: bool,
    pub power_index: u32,
    pub class_size_observed: usize,
    pub representative: String,
}

impl From<&GeodesicClass> for ClassRow {
    fn from(c: &GeodesicClass) -> Self {
        Self {
            trace_re: c.trace.re,
            trace_im: c.trace.im,
            norm: crate::kloosterman::round_sig(c.norm, 15),
            primitive: c.primitive,
            power_index: c.power_index,
            class_size_observed: c.class_size_observed,
            representative: c.representative.to_string(),
        }
    }
}

/// Classes with the bookkeeping needed to judge over-splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTable {
    pub h_rep: i64,
    pub h_orbit: i64,
    pub classes: Vec<GeodesicClass>,
    /// Loxodromic elements of height at most `h_rep` before merging.
    pub raw_count: usize,
    /// Always true: classes linked only above `h_orbit` stay separate.
    pub may_over_split: bool,
}

/// Hyperbolic Chebyshev sum with the counts behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiReport {
    pub x: f64,
    /// Sum of `Lambda` over merged classes with norm at most `x`.
    pub value: f64,
    /// Same sum with every enumerated element counted separately.
    pub raw_value: f64,
    pub raw_count: usize,
    pub merged_count: usize,
}

impl ClassTable {
    pub fn rows(&self) -> Vec<ClassRow> {
        self.classes.iter().map(ClassRow::from).collect()
    }

    pub fn psi(&self, x: f64) -> PsiReport {
        let mut report = PsiReport {
            x,
            value: 0.0,
            raw_value: 0.0,
            raw_count: 0,
            merged_count: 0,
        };
        for c in self.classes.iter().filter(|c| c.norm <= x) {
            let w = c.lambda_weight();
            report.value += w;
            report.raw_value += w * c.raw_members as f64;
            report.raw_count += c.raw_members;
            report.merged_count += 1;
        }
        report
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index wins so roots do not depend on visiting order within a component
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn conjugators() -> [(Mat2, Mat2); 5] {
    let [t, ti, s] = GENERATORS;
    [
        (t, t.inverse()),
        (t.inverse(), t),
        (ti, ti.inverse()),
        (ti.inverse(), ti),
        (s, s.inverse()),
    ]
}

/// Loxodromic classes among elements of height at most `h_rep`.
///
/// Conjugation by the generators is followed while it stays within height `h_orbit`.
pub fn conjugacy_classes(h_rep: i64, h_orbit: i64) -> ClassTable {
    conjugacy_classes_up_to(h_rep, h_orbit, f64::INFINITY)
}

/// As [`conjugacy_classes`], restricted to classes of norm at most `max_norm`.
pub fn conjugacy_classes_up_to(h_rep: i64, h_orbit: i64, max_norm: f64) -> ClassTable {
    assert!(h_orbit >= h_rep, "h_orbit must be at least h_rep");
    assert!(h_orbit <= 127, "h_orbit must be at most 127");
    let reps: Vec<(Mat2, f64)> = enumerate_group(h_rep)
        .into_iter()
        .filter_map(|m| match kind_of(&m) {
            (n, Kind::Loxodromic) if n <= max_norm => Some((m, n)),
            _ => None,
        })
        .collect();

    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut nodes: Vec<Mat2> = Vec::new();
    let mut uf = UnionFind { parent: Vec::new() };
    let mut queue = VecDeque::new();
    let mut rep_ids = Vec::with_capacity(reps.len());
    for &(m, _) in &reps {
        let id = *index.entry(m.key()).or_insert_with(|| {
            nodes.push(m);
            queue.push_back(nodes.len() - 1);
            uf.push()
        });
        rep_ids.push(id);
    }
    let conj = conjugators();
    while let Some(id) = queue.pop_front() {
        let m = nodes[id];
        for (p, q) in &conj {
            let next = p.mul(&m).mul(q).psl_normalized();
            if next.height() > h_orbit {
                continue;
            }
            let nid = match index.get(&next.key()) {
                Some(&k) => k,
                None => {
                    nodes.push(next);
                    index.insert(next.key(), nodes.len() - 1);
                    queue.push_back(nodes.len() - 1);
                    uf.push()
                }
            };
            uf.union(id, nid);
        }
    }

    let mut sizes: HashMap<usize, usize> = HashMap::new();
    let mut best: HashMap<usize, Mat2> = HashMap::new();
    for k in 0..nodes.len() {
        let r = uf.find(k);
        *sizes.entry(r).or_default() += 1;
        let cand = nodes[k];
        best.entry(r)
            .and_modify(|cur| {
                if (cand.height(), cand.key()) < (cur.height(), cur.key()) {
                    *cur = cand;
                }
            })
            .or_insert(cand);
    }
    let mut members: BTreeMap<usize, usize> = BTreeMap::new();
    for &id in &rep_ids {
        *members.entry(uf.find(id)).or_default() += 1;
    }

    let mut classes: Vec<(usize, GeodesicClass)> = members
        .iter()
        .map(|(&root, &raw)| {
            let rep = best[&root];
            let (norm, _) = kind_of(&rep);
            (
                root,
                GeodesicClass {
                    representative: rep,
                    trace: rep.trace().sign_normalized(),
                    norm,
                    primitive: true,
                    power_index: 1,
                    root_norm: norm,
                    class_size_observed: sizes[&root],
                    raw_members: raw,
                },
            )
        })
        .collect();

    detect_powers(&reps, &index, &mut uf, &mut classes);

    let mut classes: Vec<GeodesicClass> = classes.into_iter().map(|(_, c)| c).collect();
    classes.sort_by(|x, y| {
        x.norm
            .total_cmp(&y.norm)
            .then_with(|| x.trace.cmp(&y.trace))
            .then_with(|| (x.representative.height(), x.representative.key()).cmp(&(y.representative.height(), y.representative.key())))
    });
    ClassTable {
        h_rep,
        h_orbit,
        raw_count: reps.len(),
        classes,
        may_over_split: true,
    }
}

/// Marks classes containing `Q^k` for an enumerated `Q`, with `k <= log N_max / log N_min`.
fn detect_powers(
    reps: &[(Mat2, f64)],
    index: &HashMap<Key, usize>,
    uf: &mut UnionFind,
    classes: &mut [(usize, GeodesicClass)],
) {
    let (Some(n_min), Some(n_max)) = (
        classes.iter().map(|c| c.1.norm).reduce(f64::min),
        classes.iter().map(|c| c.1.norm).reduce(f64::max),
    ) else {
        return;
    };
    let k_max = (n_max.ln() / n_min.ln()).floor() as u32;
    let by_root: HashMap<usize, usize> = classes.iter().enumerate().map(|(k, c)| (c.0, k)).collect();
    for &(q, nq) in reps {
        let mut p = q;
        for k in 2..=k_max {
            p = p.mul(&q);
            if nq.powi(k as i32) > n_max * (1.0 + 1e-9) {
                break;
            }
            let pn = p.psl_normalized();
            if pn.height() > 127 {
                break;
            }
            let Some(&id) = index.get(&pn.key()) else {
                continue;
            };
            if let Some(&slot) = by_root.get(&uf.find(id)) {
                let class = &mut classes[slot].1;
                if k > class.power_index {
                    class.power_index = k;
                    class.primitive = false;
                    class.root_norm = nq;
                }
            }
        }
    }
}

/// Lower approximation of the hyperbolic Chebyshev function.
pub fn psi_lower(x: f64, h_rep: i64, h_orbit: i64) -> f64 {
    psi_lower_report(x, h_rep, h_orbit).value
}

pub fn psi_lower_report(x: f64, h_rep: i64, h_orbit: i64) -> PsiReport {
    if x <= 1.0 {
        return PsiReport {
            x,
            value: 0.0,
            raw_value: 0.0,
            raw_count: 0,
            merged_count: 0,
        };
    }
    conjugacy_classes_up_to(h_rep, h_orbit, x).psi(x)
}
