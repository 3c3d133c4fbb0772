//! The relative BRST complex: invariant subspace, differentials, the Lefschetz triple.

use crate::fock::{FockError, FreeFields, GhostLayout, Grade, GradedSpace, Mode, Monomial};
use crate::lie::{check_twice_critical, CriticalReport, LieAlgebra, SymplecticRep};
use crate::linalg::{inverse, Echelon, SMat, SVec};
use crate::ops::{self, basis_state, cutoff, normal_order, state_add, Op, State};
use crate::scalar::{Rat, Scalar};
use crate::unitarity::{gram_block, rho};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, thiserror::Error)]
pub enum BrstError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("level is not twice critical:\n{0}")]
    NotCritical(CriticalReport),
    #[error("operator leaves the invariant subspace at {grade} (state {state})")]
    NotInvariant { grade: Grade, state: String },
    #[error("Gram matrix singular at h = {0}")]
    SingularGram(String),
    #[error("inconsistent partition of g: {0}")]
    Partition(String),
    #[error("operator does not preserve the subspace: {0}")]
    NotPreserved(String),
}

/// Matter bosons tensored with the ghost system of `g`.
#[derive(Clone, Debug)]
pub struct Gauge {
    pub g: LieAlgebra,
    pub matter: Option<SymplecticRep>,
    pub ff: FreeFields,
    pub gl: GhostLayout,
    pub critical: CriticalReport,
}

impl Gauge {
    pub fn new(g: LieAlgebra, matter: Option<SymplecticRep>, allow_non_critical: bool) -> Result<Self, BrstError> {
        let critical = check_twice_critical(matter.as_ref(), &g);
        if !critical.twice_critical && !allow_non_critical {
            return Err(BrstError::NotCritical(critical));
        }
        let ghosts = FreeFields::ghosts(&g);
        let ff = match &matter {
            Some(rep) => FreeFields::bosons(rep).tensor(&ghosts),
            None => ghosts,
        };
        let gl = ff.ghosts.clone().expect("ghost system present");
        Ok(Gauge { g, matter, ff, gl, critical })
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.g.dim).collect()
    }

    /// Matter current `J_{A,n}` (zero without matter).
    pub fn current(&self, a: usize, n: i32, h2_max: i64) -> Op {
        match &self.matter {
            Some(rep) => ops::matter_current(&self.ff, rep, 0, a, n, h2_max),
            None => Op::zero(),
        }
    }

    pub fn total_current_zero(&self, a: usize, h2_max: i64) -> Op {
        self.current(a, 0, h2_max).add(&ops::ghost_current_zero(&self.ff, &self.gl, &self.g, a, h2_max))
    }

    /// `Q^+` or `Q^-`, restricted to the Lie indices in `idx` (all of g for the full differential).
    pub fn differential(&self, plus: bool, idx: &[usize], h2_max: i64) -> Op {
        let sub = self.restricted_algebra(idx);
        let cur = |a: usize, n: i32| if idx.contains(&a) { self.current(a, n, h2_max) } else { Op::zero() };
        ops::differential(&self.ff, &self.gl, &sub, plus, h2_max, &cur)
    }

    /// Same structure constants with entries outside `idx` dropped.
    fn restricted_algebra(&self, idx: &[usize]) -> LieAlgebra {
        let mut g = self.g.clone();
        for a in 0..g.dim {
            for b in 0..g.dim {
                for c in 0..g.dim {
                    if !(idx.contains(&a) && idx.contains(&b) && idx.contains(&c)) {
                        g.f[a][b][c] = Rat::zero();
                    }
                }
            }
        }
        g
    }

    /// `Pi`, `L`, `Lambda` from the ghost bilinears, over the Lie indices in `idx`.
    pub fn sl2_triple(&self, idx: &[usize], h2_max: i64) -> (Op, Op, Op) {
        let cut = cutoff(h2_max, 0);
        let (mut pi, mut l, mut lam) = (Vec::new(), Vec::new(), Vec::new());
        for &a in idx {
            for &b in idx {
                let k = &self.g.k[a][b];
                if k.is_zero() {
                    continue;
                }
                for n in 1..=cut {
                    let c = Scalar::real(k / Rat::from_integer(n.into()));
                    let w = |x: bool, y: bool| vec![(self.gl.gen(x, a), -n), (self.gl.gen(y, b), n)];
                    pi.push((c.clone(), w(false, true)));
                    pi.push((c.clone(), w(true, false)));
                    l.push((-c.clone(), w(false, false)));
                    lam.push((c, w(true, true)));
                }
            }
        }
        (Op::from_terms(pi), Op::from_terms(l), Op::from_terms(lam))
    }

    /// `Q^pm` and `S^pm` from their explicit mode expansions in terms of `J^{[p]}`.
    pub fn explicit_q_s(&self, plus: bool, h2_max: i64) -> (Op, Op) {
        let cut = cutoff(h2_max, 0);
        let g = &self.g;
        let (mut q, mut s): (Vec<(Scalar, Vec<Mode>)>, Vec<(Scalar, Vec<Mode>)>) = (Vec::new(), Vec::new());
        let push = |acc: &mut Vec<(Scalar, Vec<Mode>)>, c: Scalar, op: Op, left: Option<Mode>, right: Option<Mode>| {
            for (x, w) in op.words {
                let mut word = Vec::new();
                word.extend(left);
                word.extend(w);
                word.extend(right);
                acc.push((&c * &x, word));
            }
        };
        for n in 1..=cut {
            let inv = Scalar::frac(1, n as i64);
            for a in 0..g.dim {
                let jn = self.current(a, n, h2_max);
                let jm = self.current(a, -n, h2_max);
                let e_minus = (self.gl.gen(plus, a), -n);
                let e_plus = (self.gl.gen(plus, a), n);
                push(&mut q, inv.clone(), r_part(&self.ff, &jn, 0), Some(e_minus), None);
                push(&mut q, -inv.clone(), r_part(&self.ff, &jm, 2), None, Some(e_plus));
                push(&mut s, inv.clone(), r_part(&self.ff, &jn, -2), Some(e_minus), None);
                push(&mut s, -inv.clone(), r_part(&self.ff, &jm, 0), None, Some(e_plus));
            }
        }
        for a in 0..g.dim {
            for b in 0..g.dim {
                for c in 0..g.dim {
                    let f = g.f_low(a, b, c);
                    if f.is_zero() {
                        continue;
                    }
                    let f = Scalar::real(f);
                    for n in 1..=cut {
                        for m in 1..=cut {
                            let (n64, m64) = (n as i64, m as i64);
                            let gp = |x: usize| self.gl.gen(plus, x);
                            let gm = |x: usize| self.gl.gen(!plus, x);
                            q.push((&f * &Scalar::frac(1, n64 * (m64 + n64)), vec![(gp(a), -n), (gm(b), -m), (gp(c), n + m)]));
                            q.push((&f * &Scalar::frac(-1, 2 * m64 * n64), vec![(gp(a), -n), (gp(b), -m), (gm(c), n + m)]));
                            s.push((&f * &Scalar::frac(1, m64 * (m64 + n64)), vec![(gp(a), -n - m), (gm(b), n), (gp(c), m)]));
                            s.push((&f * &Scalar::frac(-1, 2 * m64 * n64), vec![(gm(a), -n - m), (gp(b), n), (gp(c), m)]));
                        }
                    }
                }
            }
        }
        let norm = |t: Vec<(Scalar, Vec<Mode>)>| {
            Op::from_terms(t.into_iter().filter_map(|(c, w)| normal_order(&self.ff, &w).map(|(s, w)| (&c * &s, w))).collect())
        };
        (norm(q), norm(s))
    }
}

/// Doubled R-shift of a word: creators add 1/2, annihilators remove 1/2.
pub fn word_r_shift2(w: &[Mode]) -> i64 {
    w.iter().map(|&(_, n)| if n < 0 { 1 } else { -1 }).sum()
}

/// Words of `op` shifting R by `r2 / 2`.
pub fn r_part(_ff: &FreeFields, op: &Op, r2: i64) -> Op {
    Op::from_terms(op.words.iter().filter(|(_, w)| word_r_shift2(w) == r2).cloned().collect())
}

/// Invariant vectors inside one ambient grade block.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RelBlock {
    pub grade: Grade,
    /// Offset of this block inside its slice.
    pub offset: usize,
    /// Block-local indices of the free coordinates (one per invariant vector).
    pub free: Vec<usize>,
    /// Invariant vectors in block-local coordinates.
    pub vectors: Vec<SVec>,
}

/// Fixed conformal weight part of the relative complex.
#[derive(Clone, Debug)]
pub struct Slice {
    pub h2: i64,
    pub blocks: Vec<RelBlock>,
    pub grades: Vec<Grade>,
    pub gram: SMat,
    pub gram_inv: SMat,
}

impl Slice {
    pub fn dim(&self) -> usize {
        self.grades.len()
    }

    /// Indices with a given `(R, d)` or `d` filter.
    pub fn indices(&self, pred: impl Fn(&Grade) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&i| pred(&self.grades[i])).collect()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.grades.iter().map(|g| g.d).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

/// Weight-preserving operator on the relative complex, one matrix per slice.
#[derive(Clone, Debug, PartialEq)]
pub struct GOp(pub BTreeMap<i64, SMat>);

impl GOp {
    pub fn zip(&self, o: &GOp, f: impl Fn(&SMat, &SMat) -> SMat) -> GOp {
        GOp(self.0.iter().map(|(h, m)| (*h, f(m, &o.0[h]))).collect())
    }
    pub fn map(&self, f: impl Fn(&SMat) -> SMat) -> GOp {
        GOp(self.0.iter().map(|(h, m)| (*h, f(m))).collect())
    }
    pub fn mul(&self, o: &GOp) -> GOp {
        self.zip(o, |a, b| a.mul(b))
    }
    pub fn add(&self, o: &GOp) -> GOp {
        self.zip(o, |a, b| a.add(b))
    }
    pub fn sub(&self, o: &GOp) -> GOp {
        self.zip(o, |a, b| a.sub(b))
    }
    pub fn scale(&self, c: &Scalar) -> GOp {
        self.map(|a| a.scale(c))
    }
    pub fn comm(&self, o: &GOp) -> GOp {
        self.zip(o, |a, b| a.comm(b))
    }
    pub fn anticomm(&self, o: &GOp) -> GOp {
        self.zip(o, |a, b| a.anticomm(b))
    }
    pub fn is_zero(&self) -> bool {
        self.0.values().all(|m| m.is_zero())
    }
    /// Lowest weight at which the operator is nonzero.
    pub fn first_nonzero(&self) -> Option<(i64, usize, usize)> {
        self.0.iter().find_map(|(h, m)| m.first_nonzero().map(|(i, j, _)| (*h, i, j)))
    }
    /// Split by doubled R-shift of each entry.
    pub fn r_part(&self, cx: &RelativeComplex, r2: i64) -> GOp {
        GOp(self
            .0
            .iter()
            .map(|(h, m)| {
                let gr = &cx.slices[h].grades;
                let rows = m.rows.iter().enumerate().map(|(i, row)| row.iter().filter(|(j, _)| gr[i].r2 - gr[*j].r2 == r2).cloned().collect()).collect();
                (*h, SMat { nrows: m.nrows, ncols: m.ncols, rows })
            })
            .collect())
    }
}

/// The relative (G-invariant) subcomplex, truncated at `h <= h2_max / 2`.
#[derive(Clone, Debug)]
pub struct RelativeComplex {
    pub gauge: Gauge,
    pub h2_max: i64,
    pub space: GradedSpace,
    pub slices: BTreeMap<i64, Slice>,
}

impl RelativeComplex {
    pub fn build(gauge: Gauge, h2_max: i64, budget: usize) -> Result<Self, BrstError> {
        let space = GradedSpace::enumerate(&gauge.ff, h2_max, budget)?;
        let blocks = Self::invariant_blocks(&gauge, &space, h2_max);
        Self::assemble(gauge, h2_max, space, blocks)
    }

    /// Kernel of the total current zero modes on each ambient grade block.
    pub fn invariant_blocks(gauge: &Gauge, space: &GradedSpace, h2_max: i64) -> Vec<RelBlock> {
        let jtot: Vec<Op> = (0..gauge.g.dim).map(|a| gauge.total_current_zero(a, h2_max).prepared()).collect();
        let ff = &gauge.ff;
        space
            .blocks
            .par_iter()
            .map(|(gr, b)| {
                let mut rows: Vec<SVec> = Vec::new();
                for j in &jtot {
                    let mut mrows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); b.len()];
                    for (src, m) in b.states.iter().enumerate() {
                        for (t, c) in j.apply_monomial(ff, m) {
                            let ti = b.index[&t];
                            mrows[ti].insert(src, c);
                        }
                    }
                    rows.extend(mrows.into_iter().filter(|r| !r.is_empty()).map(|r| r.into_iter().collect::<SVec>()));
                }
                let ech = Echelon::from_rows(b.len(), &rows);
                let pivots: std::collections::HashSet<usize> = ech.pivots.iter().copied().collect();
                let free: Vec<usize> = (0..b.len()).filter(|c| !pivots.contains(c)).collect();
                RelBlock { grade: *gr, offset: 0, free, vectors: ech.null_space() }
            })
            .filter(|b| !b.vectors.is_empty())
            .collect()
    }

    /// Slices and Gram matrices from precomputed invariant blocks.
    pub fn assemble(gauge: Gauge, h2_max: i64, space: GradedSpace, blocks: Vec<RelBlock>) -> Result<Self, BrstError> {
        let ff = &gauge.ff;
        let mut per_h: BTreeMap<i64, Vec<RelBlock>> = BTreeMap::new();
        for b in blocks {
            per_h.entry(b.grade.h2).or_default().push(b);
        }
        let mut slices = BTreeMap::new();
        for h2 in 0..=h2_max {
            let mut blocks = per_h.remove(&h2).unwrap_or_default();
            let mut grades = Vec::new();
            for b in blocks.iter_mut() {
                b.offset = grades.len();
                grades.extend(std::iter::repeat_n(b.grade, b.vectors.len()));
            }
            let n = grades.len();
            let mut gram = SMat::zeros(n, n);
            let mut gram_inv = SMat::zeros(n, n);
            for b in &blocks {
                let g_amb = gram_block(ff, &space.blocks[&b.grade].states);
                let k = SMat::from_columns(g_amb.nrows, &b.vectors);
                let g_rel = k.dagger().mul(&g_amb).mul(&k);
                let inv = inverse(&g_rel).ok_or_else(|| BrstError::SingularGram(crate::fock::half(h2)))?;
                for i in 0..g_rel.nrows {
                    for (j, v) in &g_rel.rows[i] {
                        gram.rows[b.offset + i].push((b.offset + j, v.clone()));
                    }
                    for (j, v) in &inv.rows[i] {
                        gram_inv.rows[b.offset + i].push((b.offset + j, v.clone()));
                    }
                }
            }
            slices.insert(h2, Slice { h2, blocks, grades, gram, gram_inv });
        }
        Ok(RelativeComplex { gauge, h2_max, space, slices })
    }

    /// Ambient state of the `i`-th invariant vector of a slice.
    pub fn vector_state(&self, h2: i64, i: usize) -> State {
        let sl = &self.slices[&h2];
        let b = sl.blocks.iter().rev().find(|b| b.offset <= i).unwrap();
        let states = &self.space.blocks[&b.grade].states;
        b.vectors[i - b.offset].iter().map(|(k, c)| (states[*k].clone(), c.clone())).collect()
    }

    /// Coordinates of an ambient state known to lie in the invariant subspace.
    pub fn coordinates(&self, h2: i64, s: &State) -> Result<SVec, BrstError> {
        let sl = &self.slices[&h2];
        let mut by_grade: HashMap<Grade, Vec<(&Monomial, &Scalar)>> = HashMap::new();
        for (m, c) in s {
            by_grade.entry(self.gauge.ff.grade(m)).or_default().push((m, c));
        }
        let mut out: SVec = Vec::new();
        for (gr, entries) in by_grade {
            let fail = || BrstError::NotInvariant { grade: gr, state: self.gauge.ff.fmt_monomial(entries[0].0) };
            let b = sl.blocks.iter().find(|b| b.grade == gr).ok_or_else(fail)?;
            let amb = &self.space.blocks[&gr];
            let mut local: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (m, c) in &entries {
                local.insert(amb.index[*m], (*c).clone());
            }
            let coords: Vec<Scalar> = b.free.iter().map(|f| local.get(f).cloned().unwrap_or_else(Scalar::zero)).collect();
            // reconstruct and compare
            let mut rec: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, c) in coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (i, v) in &b.vectors[k] {
                    let e = rec.entry(*i).or_insert_with(Scalar::zero);
                    *e += &(c * v);
                }
            }
            rec.retain(|_, v| !v.is_zero());
            if rec != local {
                return Err(fail());
            }
            for (k, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    out.push((b.offset + k, c));
                }
            }
        }
        out.sort_by_key(|e| e.0);
        Ok(out)
    }

    /// Restrict a weight-preserving ambient operator to the invariant subspace.
    pub fn restrict(&self, op: &Op) -> Result<GOp, BrstError> {
        let op = op.clone().prepared();
        let ff = &self.gauge.ff;
        let mut out = BTreeMap::new();
        for (&h2, sl) in &self.slices {
            let cols: Result<Vec<SVec>, BrstError> = (0..sl.dim())
                .into_par_iter()
                .map(|j| {
                    let v = op.apply(ff, &self.vector_state(h2, j));
                    self.coordinates(h2, &v)
                })
                .collect();
            out.insert(h2, SMat::from_columns(sl.dim(), &cols?));
        }
        Ok(GOp(out))
    }

    /// Diagonal operator from a function of the grade.
    pub fn diagonal(&self, f: impl Fn(&Grade) -> Scalar) -> GOp {
        GOp(self
            .slices
            .iter()
            .map(|(h, sl)| {
                let rows = sl.grades.iter().enumerate().map(|(i, g)| {
                    let v = f(g);
                    if v.is_zero() {
                        vec![]
                    } else {
                        vec![(i, v)]
                    }
                });
                (*h, SMat { nrows: sl.dim(), ncols: sl.dim(), rows: rows.collect() })
            })
            .collect())
    }

    pub fn identity(&self) -> GOp {
        self.diagonal(|_| Scalar::one())
    }

    /// Hermitian adjoint `G^-1 X^H G`.
    pub fn adjoint(&self, x: &GOp) -> GOp {
        GOp(x.0.iter().map(|(h, m)| (*h, self.slices[h].gram_inv.mul(&m.dagger()).mul(&self.slices[h].gram))).collect())
    }

    /// Dimension table `(h2, d) -> dim`.
    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        let mut t = BTreeMap::new();
        for (h, sl) in &self.slices {
            for g in &sl.grades {
                *t.entry((*h, g.d)).or_insert(0) += 1;
            }
        }
        t
    }

    /// The standard operator family of the complex.
    pub fn operators(&self) -> Result<Operators, BrstError> {
        let idx = self.gauge.all_indices();
        self.operators_for(&idx)
    }

    /// Operators built from the Lie indices in `idx` only (one summand of a direct sum).
    pub fn operators_for(&self, idx: &[usize]) -> Result<Operators, BrstError> {
        let h = self.h2_max;
        let qp = self.restrict(&self.gauge.differential(true, idx, h))?;
        let qm = self.restrict(&self.gauge.differential(false, idx, h))?;
        let (pi, l, lam) = self.gauge.sl2_triple(idx, h);
        let (pi, l, lam) = (self.restrict(&pi)?, self.restrict(&l)?, self.restrict(&lam)?);
        let qbp = self.adjoint(&qp);
        let qbm = self.adjoint(&qm);
        let lap = qp.anticomm(&qbp);
        Ok(Operators { qp, qm, qbp, qbm, pi, l, lam, lap })
    }
}

/// `Q^pm`, their adjoints, the Laplacian and the Lefschetz triple on a relative complex.
#[derive(Clone, Debug)]
pub struct Operators {
    pub qp: GOp,
    pub qm: GOp,
    pub qbp: GOp,
    pub qbm: GOp,
    pub pi: GOp,
    pub l: GOp,
    pub lam: GOp,
    pub lap: GOp,
}

impl Operators {
    pub fn q(&self, plus: bool) -> &GOp {
        if plus {
            &self.qp
        } else {
            &self.qm
        }
    }
    pub fn qbar(&self, plus: bool) -> &GOp {
        if plus {
            &self.qbp
        } else {
            &self.qbm
        }
    }
}

/// One named identity and where it first fails.
#[derive(Clone, Debug, serde::Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), ok: true, witness: None }
    }
    pub fn fail(name: impl Into<String>, w: impl Into<String>) -> Self {
        Check { name: name.into(), ok: false, witness: Some(w.into()) }
    }
    /// Pass when `x` vanishes.
    pub fn zero(name: impl Into<String>, cx: &RelativeComplex, x: &GOp) -> Self {
        match x.first_nonzero() {
            None => Check::pass(name),
            Some((h, i, j)) => {
                let sl = &cx.slices[&h];
                Check::fail(name, format!("entry ({i},{j}) at h = {}: {} <- {}", crate::fock::half(h), sl.grades[i], sl.grades[j]))
            }
        }
    }
    pub fn equal(name: impl Into<String>, cx: &RelativeComplex, x: &GOp, y: &GOp) -> Self {
        Check::zero(name, cx, &x.sub(y))
    }
}

/// `Q^pm = Q^pm_{+1/2} + S^pm_{-1/2}` by R-shift of matrix entries.
pub struct QsSplit {
    pub q: GOp,
    pub s: GOp,
    pub residue: GOp,
}

pub fn split_qs(cx: &RelativeComplex, full: &GOp) -> QsSplit {
    let q = full.r_part(cx, 1);
    let s = full.r_part(cx, -1);
    let residue = full.sub(&q).sub(&s);
    QsSplit { q, s, residue }
}

/// Identities of the differential family, each as an exact matrix check.
pub fn check_kahler(cx: &RelativeComplex, o: &Operators) -> Vec<Check> {
    let mut out = Vec::new();
    let z = |n: &str, x: &GOp| Check::zero(n, cx, x);
    out.push(z("(Q+)^2 = 0", &o.qp.mul(&o.qp)));
    out.push(z("(Q-)^2 = 0", &o.qm.mul(&o.qm)));
    out.push(z("[Q+, Q-] = 0", &o.qp.anticomm(&o.qm)));
    out.push(z("[Qbar+, Qbar-] = 0", &o.qbp.anticomm(&o.qbm)));
    out.push(Check::equal("[Q-, Qbar-] = Laplacian", cx, &o.qm.anticomm(&o.qbm), &o.lap));
    out.push(z("[Q+, Qbar-] = 0", &o.qp.anticomm(&o.qbm)));
    out.push(z("[Q-, Qbar+] = 0", &o.qm.anticomm(&o.qbp)));
    out.push(z("Laplacian self-adjoint", &o.lap.sub(&cx.adjoint(&o.lap))));
    // Lefschetz
    out.push(Check::equal("[Pi, Q+] = -Q+", cx, &o.pi.comm(&o.qp), &o.qp.scale(&Scalar::int(-1))));
    out.push(Check::equal("[Pi, Q-] = Q-", cx, &o.pi.comm(&o.qm), &o.qm));
    out.push(Check::equal("[L, Q+] = Q-", cx, &o.l.comm(&o.qp), &o.qm));
    out.push(Check::equal("[Lambda, Q-] = Q+", cx, &o.lam.comm(&o.qm), &o.qp));
    out.push(z("[L, Q-] = 0", &o.l.comm(&o.qm)));
    out.push(z("[Lambda, Q+] = 0", &o.lam.comm(&o.qp)));
    out.push(Check::equal("[Pi, Qbar+] = Qbar+", cx, &o.pi.comm(&o.qbp), &o.qbp));
    out.push(Check::equal("[Pi, Qbar-] = -Qbar-", cx, &o.pi.comm(&o.qbm), &o.qbm.scale(&Scalar::int(-1))));
    out.push(Check::equal("[L, Qbar-] = -Qbar+", cx, &o.l.comm(&o.qbm), &o.qbp.scale(&Scalar::int(-1))));
    out.push(Check::equal("[Lambda, Qbar+] = -Qbar-", cx, &o.lam.comm(&o.qbp), &o.qbm.scale(&Scalar::int(-1))));
    out.push(z("[Laplacian, Pi] = 0", &o.lap.comm(&o.pi)));
    out.push(z("[Laplacian, L] = 0", &o.lap.comm(&o.l)));
    out.push(z("[Laplacian, Lambda] = 0", &o.lap.comm(&o.lam)));
    // sl2 triple and its reality
    out.push(Check::equal("[L, Lambda] = Pi", cx, &o.l.comm(&o.lam), &o.pi));
    out.push(Check::equal("[Pi, L] = 2L", cx, &o.pi.comm(&o.l), &o.l.scale(&Scalar::int(2))));
    out.push(Check::equal("[Pi, Lambda] = -2Lambda", cx, &o.pi.comm(&o.lam), &o.lam.scale(&Scalar::int(-2))));
    out.push(Check::equal("Pi self-adjoint", cx, &cx.adjoint(&o.pi), &o.pi));
    out.push(Check::equal("L^dagger = Lambda", cx, &cx.adjoint(&o.l), &o.lam));
    out.push(Check::equal("Pi = -d", cx, &o.pi, &cx.diagonal(|g| Scalar::int(-g.d))));
    out
}

/// R-split identities and the adjoint relations between `Q` and `S`.
pub fn check_split(cx: &RelativeComplex, o: &Operators) -> Vec<Check> {
    let p = split_qs(cx, &o.qp);
    let m = split_qs(cx, &o.qm);
    let z = |n: &str, x: &GOp| Check::zero(n, cx, x);
    let neg = Scalar::int(-1);
    let mut out = vec![
        z("Q+ - Q+_{1/2} - S+_{-1/2} = 0", &p.residue),
        z("Q- - Q-_{1/2} - S-_{-1/2} = 0", &m.residue),
        z("(Q+)^2 = 0 (R-homogeneous part)", &p.q.mul(&p.q)),
        z("(Q-)^2 = 0 (R-homogeneous part)", &m.q.mul(&m.q)),
        z("(S+)^2 = 0", &p.s.mul(&p.s)),
        z("(S-)^2 = 0", &m.s.mul(&m.s)),
        z("[Q+, S+] = 0", &p.q.anticomm(&p.s)),
        z("[Q-, S-] = 0", &m.q.anticomm(&m.s)),
        z("[Q+, Q-] = 0 (R-homogeneous parts)", &p.q.anticomm(&m.q)),
        z("[S+, S-] = 0", &p.s.anticomm(&m.s)),
        z("[Q+, S-] = -[Q-, S+]", &p.q.anticomm(&m.s).add(&m.q.anticomm(&p.s))),
    ];
    // eps_{+-} = -1, eps_{-+} = 1: (S+)^dag = Q-, (S-)^dag = -Q+, (Q+)^dag = -S-, (Q-)^dag = S+
    out.push(Check::equal("(S+)^dagger = Q-", cx, &cx.adjoint(&p.s), &m.q));
    out.push(Check::equal("(S-)^dagger = -Q+", cx, &cx.adjoint(&m.s), &p.q.scale(&neg)));
    out.push(Check::equal("(Q+)^dagger = -S-", cx, &cx.adjoint(&p.q), &m.s.scale(&neg)));
    out.push(Check::equal("(Q-)^dagger = S+", cx, &cx.adjoint(&m.q), &p.s));
    out
}

/// Compare the R-split pieces with the explicit mode formulas.
pub fn check_explicit_split(cx: &RelativeComplex, o: &Operators) -> Result<Vec<Check>, BrstError> {
    let mut out = Vec::new();
    for (plus, name) in [(true, "+"), (false, "-")] {
        let sp = split_qs(cx, o.q(plus));
        let (q, s) = cx.gauge.explicit_q_s(plus, cx.h2_max);
        out.push(Check::equal(format!("Q{name} matches its mode expansion"), cx, &cx.restrict(&q)?, &sp.q));
        out.push(Check::equal(format!("S{name} matches its mode expansion"), cx, &cx.restrict(&s)?, &sp.s));
    }
    Ok(out)
}

/// Conditions on the moment map: `J_{A,-1}|0>` at `R = 1`, `J^{[1]}_{A,n>=0} = 0`, `rho(J_A) = J_A`.
pub fn check_good_action(g: &Gauge, h2_max: i64) -> Vec<Check> {
    let mut out = Vec::new();
    let ff = &g.ff;
    let vac = basis_state(&vec![]);
    let mut first = None;
    let mut second = None;
    let mut third = None;
    for a in 0..g.g.dim {
        let j = g.current(a, -1, h2_max).prepared();
        let st = j.apply(ff, &vac);
        if first.is_none() {
            if let Some(m) = st.keys().find(|m| {
                let gr = ff.grade(m);
                gr.h2 != 2 || gr.r2 != 2
            }) {
                first = Some(format!("J_{} contains {}", a + 1, ff.fmt_monomial(m)));
            }
        }
        for n in 0..=cutoff(h2_max, 0) {
            if second.is_some() {
                break;
            }
            let up = r_part(ff, &g.current(a, n, h2_max), 2);
            if let Some((_, w)) = up.words.first() {
                second = Some(format!("J_{},{} has R-raising word {:?}", a + 1, n, w));
            }
        }
        if third.is_none() && rho(ff, &st) != st {
            third = Some(format!("rho(J_{}) != J_{}", a + 1, a + 1));
        }
    }
    for (name, w) in [("J_{A,-1}|0> has R = 1", first), ("J^{[1]}_{A,n} = 0 for n >= 0", second), ("rho(J_A) = J_A", third)] {
        out.push(match w {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        });
    }
    out
}

/// Apply a weight-preserving ambient operator and return `(grade, state)` pairs; used by examples.
pub fn apply_on(cx: &RelativeComplex, op: &Op, s: &State) -> State {
    let op = op.clone().prepared();
    let mut out = State::new();
    for (m, c) in op.apply(&cx.gauge.ff, s) {
        state_add(&mut out, m, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::load_preset;

    #[test]
    fn trivial_u1_is_whole_fock_space() {
        let g = load_preset("u1").unwrap();
        let cx = RelativeComplex::build(Gauge::new(g, None, false).unwrap(), 4, 10_000).unwrap();
        assert_eq!(cx.slices.values().map(|s| s.dim()).sum::<usize>(), cx.space.dim());
        let o = cx.operators().unwrap();
        assert!(o.qp.is_zero() && o.qm.is_zero());
        assert!(check_kahler(&cx, &o).iter().all(|c| c.ok));
    }

    #[test]
    fn nf4_at_weight_one() {
        let g = load_preset("sl2").unwrap();
        let rep = SymplecticRep::doublets(&g, 8).unwrap();
        let cx = RelativeComplex::build(Gauge::new(g, Some(rep), false).unwrap(), 2, 100_000).unwrap();
        let dims = cx.dims();
        assert_eq!(dims.get(&(1, 0)), None);
        assert_eq!(dims[&(2, 0)], 28);
        let o = cx.operators().unwrap();
        for c in check_kahler(&cx, &o).into_iter().chain(check_split(&cx, &o)) {
            assert!(c.ok, "{c:?}");
        }
        for c in check_explicit_split(&cx, &o).unwrap() {
            assert!(c.ok, "{c:?}");
        }
        for c in check_good_action(&cx.gauge, 2) {
            assert!(c.ok, "{c:?}");
        }
    }

    #[test]
    fn total_current_represents_g() {
        use crate::ops::check_relation;
        let g = load_preset("sl2").unwrap();
        let rep = SymplecticRep::doublets(&g, 1).unwrap();
        let gauge = Gauge::new(g.clone(), Some(rep), true).unwrap();
        let sp = GradedSpace::enumerate(&gauge.ff, 4, 100_000).unwrap();
        let j: Vec<Op> = (0..3).map(|a| gauge.total_current_zero(a, 4).prepared()).collect();
        let jg: Vec<Op> = (0..3).map(|a| ops::ghost_current_zero(&gauge.ff, &gauge.gl, &g, a, 4).prepared()).collect();
        for a in 0..3 {
            for b in 0..3 {
                let rhs: Vec<(Scalar, &Op)> = (0..3).map(|c| (Scalar::real(g.f[a][b][c].clone()), &jg[c])).collect();
                assert_eq!(check_relation(&gauge.ff, &sp, 4, &jg[a], &jg[b], 1, &Op::sum(rhs).prepared()), None, "ghost {a}{b}");
                let rhs: Vec<(Scalar, &Op)> = (0..3).map(|c| (Scalar::real(g.f[a][b][c].clone()), &j[c])).collect();
                assert_eq!(check_relation(&gauge.ff, &sp, 4, &j[a], &j[b], 1, &Op::sum(rhs).prepared()), None, "total {a}{b}");
            }
        }
    }
}
