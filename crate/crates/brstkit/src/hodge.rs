//! Laplacian, harmonic spaces, cohomology, quartets and the derived checks on a relative complex.
//!
//! Everything is computed per `(h, d)` block of a [`RelativeComplex`] slice. Subspaces are
//! column spans in slice coordinates.

use crate::brst::{BrstError, Check, GOp, Operators, RelativeComplex, Slice};
use crate::fock::half;
use crate::linalg::{coordinates, first_nonpositive_minor, image, intersect, kernel, rank, svec_hdot, Echelon, SMat, SVec};
use crate::scalar::{fmt_rat, Rat, Scalar};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

fn sub(m: &SMat, rows: &[usize], cols: &[usize]) -> SMat {
    m.select_rows(rows).select_cols(cols)
}

/// Pad columns given on `idx` to full slice coordinates.
fn embed(n: usize, idx: &[usize], v: &SMat) -> SMat {
    let cols: Vec<SVec> = v.columns().into_iter().map(|c| c.into_iter().map(|(k, x)| (idx[k], x)).collect()).collect();
    SMat::from_columns(n, &cols)
}

/// `A^H G B`.
fn inner(g: &SMat, a: &SMat, b: &SMat) -> SMat {
    a.dagger().mul(&g.mul(b))
}

fn herm(g: &SMat, x: &SVec, y: &SVec) -> Scalar {
    svec_hdot(x, &g.apply(y))
}

fn by_degree(sl: &Slice) -> BTreeMap<i64, Vec<usize>> {
    let mut m: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, g) in sl.grades.iter().enumerate() {
        m.entry(g.d).or_default().push(i);
    }
    m
}

fn blocks(cx: &RelativeComplex) -> Vec<(i64, i64, Vec<usize>)> {
    cx.slices.iter().flat_map(|(h, sl)| by_degree(sl).into_iter().map(move |(d, idx)| (*h, d, idx))).collect()
}

/// Exact kernel of the Laplacian on `(h, d)`, in slice coordinates.
pub fn harmonic_basis(cx: &RelativeComplex, o: &Operators, h2: i64, d: i64) -> SMat {
    let sl = &cx.slices[&h2];
    let idx = sl.indices(|g| g.d == d);
    embed(sl.dim(), &idx, &kernel(&sub(&o.lap.0[&h2], &idx, &idx)))
}

/// Quartet heads `ker Qbar+ ∩ ker Qbar- ∩ im Lap` on the indices `idx`, in `idx` coordinates.
fn quartet_heads(o: &Operators, h2: i64, idx: &[usize], lap_d: &SMat) -> SMat {
    let qbar = o.qbp.0[&h2].select_cols(idx).vstack(&o.qbm.0[&h2].select_cols(idx));
    intersect(&kernel(&qbar), &image(lap_d))
}

/// Dimension of `H(Q)` on the indices `idx`: `dim ker Q|_d - rank Q into d`.
fn cohom_dim(q: &SMat, idx: &[usize]) -> usize {
    idx.len() - rank(&q.select_cols(idx)) - rank(&q.select_rows(idx))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HodgeRow {
    pub h: String,
    pub d: i64,
    pub chain: usize,
    pub harmonic: usize,
    pub im_q_plus: usize,
    pub im_qbar_plus: usize,
    pub im_q_minus: usize,
    pub im_qbar_minus: usize,
    pub h_minus: usize,
    pub h_plus: usize,
    pub quartets: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EulerRow {
    pub h: String,
    pub chain: i64,
    pub cohomology: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HodgeReport {
    pub rows: Vec<HodgeRow>,
    pub euler: Vec<EulerRow>,
    pub checks: Vec<Check>,
}

/// Hodge decompositions for both signs, orthogonality, cohomology and Euler characteristics.
pub fn hodge_report(cx: &RelativeComplex, o: &Operators) -> HodgeReport {
    let items = blocks(cx);
    let done: Vec<(HodgeRow, Vec<Check>)> = items
        .par_iter()
        .map(|(h2, d, idx)| {
            let (h2, d) = (*h2, *d);
            let sl = &cx.slices[&h2];
            let at = format!("(h={}, d={d})", half(h2));
            let g = sub(&sl.gram, idx, idx);
            let lap = sub(&o.lap.0[&h2], idx, idx);
            let harm = kernel(&lap);
            let mut checks = Vec::new();
            let mut ims = Vec::new();
            for plus in [true, false] {
                let s = if plus { '+' } else { '-' };
                let q = image(&o.q(plus).0[&h2].select_rows(idx));
                let qb = image(&o.qbar(plus).0[&h2].select_rows(idx));
                let total = harm.ncols + q.ncols + qb.ncols;
                checks.push(if total == idx.len() {
                    Check::pass(format!("Hodge decomposition Q{s} {at}"))
                } else {
                    Check::fail(format!("Hodge decomposition Q{s} {at}"), format!("{} + {} + {} != {}", harm.ncols, q.ncols, qb.ncols, idx.len()))
                });
                let orth = [("ker Lap, im Q", &harm, &q), ("ker Lap, im Qbar", &harm, &qb), ("im Q, im Qbar", &q, &qb)];
                for (name, a, b) in orth {
                    let m = inner(&g, a, b);
                    checks.push(match m.first_nonzero() {
                        None => Check::pass(format!("orthogonal {name} ({s}) {at}")),
                        Some((i, j, v)) => Check::fail(format!("orthogonal {name} ({s}) {at}"), format!("pairing ({i},{j}) = {v}")),
                    });
                }
                ims.push((q.ncols, qb.ncols));
            }
            let quartets = quartet_heads(o, h2, idx, &lap).ncols;
            let h_minus = cohom_dim(&o.qm.0[&h2], idx);
            let h_plus = cohom_dim(&o.qp.0[&h2], idx);
            checks.push(if h_minus == harm.ncols && h_plus == harm.ncols {
                Check::pass(format!("dim H(Q-) = dim H(Q+) = dim ker Lap {at}"))
            } else {
                Check::fail(format!("dim H(Q-) = dim H(Q+) = dim ker Lap {at}"), format!("{h_minus}, {h_plus}, {}", harm.ncols))
            });
            let row = HodgeRow {
                h: half(h2),
                d,
                chain: idx.len(),
                harmonic: harm.ncols,
                im_q_plus: ims[0].0,
                im_qbar_plus: ims[0].1,
                im_q_minus: ims[1].0,
                im_qbar_minus: ims[1].1,
                h_minus,
                h_plus,
                quartets,
            };
            (row, checks)
        })
        .collect();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (r, c) in done {
        rows.push(r);
        checks.extend(c);
    }
    let mut euler = Vec::new();
    for h2 in cx.slices.keys() {
        let (mut c, mut hh) = (0i64, 0i64);
        for r in rows.iter().filter(|r| r.h == half(*h2)) {
            let s = if r.d.rem_euclid(2) == 0 { 1 } else { -1 };
            c += s * r.chain as i64;
            hh += s * r.h_minus as i64;
        }
        checks.push(if c == hh {
            Check::pass(format!("Euler characteristic h={}", half(*h2)))
        } else {
            Check::fail(format!("Euler characteristic h={}", half(*h2)), format!("{c} != {hh}"))
        });
        euler.push(EulerRow { h: half(*h2), chain: c, cohomology: hh });
    }
    HodgeReport { rows, euler, checks }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CohomologyRow {
    pub h: String,
    pub d: i64,
    pub dim: usize,
}

/// Cohomology of `Q^+` or `Q^-` per `(h, d)`, with harmonic representatives.
pub fn cohomology(cx: &RelativeComplex, o: &Operators, plus: bool) -> (Vec<CohomologyRow>, BTreeMap<(i64, i64), SMat>, Vec<Check>) {
    let items = blocks(cx);
    let out: Vec<_> = items
        .par_iter()
        .map(|(h2, d, idx)| {
            let q = &o.q(plus).0[h2];
            let dim = cohom_dim(q, idx);
            let reps = harmonic_basis(cx, o, *h2, *d);
            let at = format!("(h={}, d={d})", half(*h2));
            let mut checks = Vec::new();
            let closed = q.mul(&reps).is_zero() && o.q(!plus).0[h2].mul(&reps).is_zero();
            checks.push(if closed { Check::pass(format!("harmonic representatives closed {at}")) } else { Check::fail(format!("harmonic representatives closed {at}"), "Q x != 0") });
            checks.push(if reps.ncols == dim {
                Check::pass(format!("harmonic count = cohomology {at}"))
            } else {
                Check::fail(format!("harmonic count = cohomology {at}"), format!("{} != {dim}", reps.ncols))
            });
            (CohomologyRow { h: half(*h2), d: *d, dim }, ((*h2, *d), reps), checks)
        })
        .collect();
    let mut rows = Vec::new();
    let mut reps = BTreeMap::new();
    let mut checks = Vec::new();
    for (r, (k, v), c) in out {
        rows.push(r);
        reps.insert(k, v);
        checks.extend(c);
    }
    (rows, reps, checks)
}

// ---------------------------------------------------------------------------
// polynomials over Scalar, coefficients low to high

type Poly = Vec<Scalar>;

fn poly_trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    poly_trim(out)
}

fn poly_eval(p: &Poly, x: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
}

/// Divide by `(x - r)`, assuming `r` is a root.
fn poly_deflate(p: &Poly, r: &Scalar) -> Poly {
    let n = p.len() - 1;
    let mut q = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for k in (0..n).rev() {
        carry = &p[k + 1] + &(&carry * r);
        q[k] = carry.clone();
    }
    q
}

fn poly_of_matrix(p: &Poly, m: &SMat) -> SMat {
    let n = m.nrows;
    let mut acc = SMat::zeros(n, n);
    for c in p.iter().rev() {
        acc = acc.mul(m).add(&SMat::scalar_identity(n, c));
    }
    acc
}

pub fn fmt_poly(p: &Poly) -> String {
    let mut parts = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let mono = match k {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{k}"),
        };
        parts.push(if k > 0 && c.is_one() { mono } else if mono.is_empty() { cs } else { format!("({cs})*{mono}") });
    }
    parts.join(" + ")
}

/// Minimal polynomial of the vector `v` under `m` (monic).
fn vector_minpoly(m: &SMat, v: &SVec) -> Poly {
    let n = m.nrows;
    let mut krylov: Vec<SVec> = vec![v.clone()];
    let mut e = Echelon::new(n);
    e.insert(v);
    loop {
        let next = m.apply(krylov.last().unwrap());
        if e.contains(&next) {
            let basis = SMat::from_columns(n, &krylov);
            let c = coordinates(&basis, &SMat::from_columns(n, &[next])).expect("Krylov vector in span");
            let mut p: Poly = (0..krylov.len()).map(|k| -c.get(k, 0)).collect();
            p.push(Scalar::one());
            return p;
        }
        e.insert(&next);
        krylov.push(next);
    }
}

/// Minimal polynomial of a diagonalizable matrix.
fn minpoly(m: &SMat) -> Poly {
    let n = m.nrows;
    let seed: SVec = (0..n).map(|i| (i, Scalar::int(((7 * i + 3) % 11 + 1) as i64))).collect();
    let mut p = vector_minpoly(m, &seed);
    loop {
        let pm = poly_of_matrix(&p, m);
        let Some((_, j, _)) = pm.first_nonzero() else { return p };
        let w = pm.column(j);
        p = poly_mul(&p, &vector_minpoly(m, &w));
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Numerical roots of a monic polynomial (Durand-Kerner), used only to propose candidates.
fn approx_roots(p: &Poly) -> Vec<Complex64> {
    let n = p.len() - 1;
    let c: Vec<Complex64> = p.iter().map(|s| Complex64::new(rat_to_f64(&s.re), rat_to_f64(&s.im))).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let bound = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(bound, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    den *= z[k] - z[j];
                }
            }
            let step = eval(z[k]) / den;
            z[k] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 {
            break;
        }
    }
    z
}

/// Continued-fraction convergents of `x` with bounded denominator.
fn convergents(x: f64, max_den: i64) -> Vec<Rat> {
    let mut out = Vec::new();
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.saturating_mul(h1).saturating_add(h0), a.saturating_mul(k1).saturating_add(k0));
        if k2 > max_den || k2 <= 0 {
            break;
        }
        out.push(Rat::new(h2.into(), k2.into()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a as f64;
        if frac.abs() < 1e-13 {
            break;
        }
        y = 1.0 / frac;
    }
    out
}

/// Exact rational roots of `p` (each simple) and the cofactor without them.
fn rational_roots(p: &Poly) -> (Vec<Rat>, Poly) {
    let mut roots = Vec::new();
    let mut rest = p.clone();
    for z in approx_roots(p) {
        if rest.len() <= 1 {
            break;
        }
        for c in convergents(z.re, 1_000_000) {
            let s = Scalar::real(c.clone());
            if poly_eval(&rest, &s).is_zero() {
                rest = poly_deflate(&rest, &s);
                roots.push(c);
                break;
            }
        }
    }
    roots.sort();
    (roots, rest)
}

/// Gram-Schmidt without normalization under the form `g`.
fn orthogonalize(g: &SMat, vs: Vec<SVec>) -> Vec<SVec> {
    let mut out: Vec<(SVec, Scalar)> = Vec::new();
    for v in vs {
        let mut u = v.clone();
        for (w, nw) in &out {
            let c = &herm(g, w, &v) / nw;
            u = crate::linalg::svec_axpy(&u, &-c, w);
        }
        let n = herm(g, &u, &u);
        out.push((u, n));
    }
    out.into_iter().map(|(u, _)| u).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Quartet {
    pub h: String,
    pub d: i64,
    /// Laplacian eigenvalue, or `None` when the head lies in an irrational invariant block.
    pub eigenvalue: Option<String>,
    /// Squared norms of `x, Q-x, Q+x, Q-Q+x`.
    pub norms: Vec<String>,
    #[serde(skip)]
    pub vectors: [SVec; 4],
    #[serde(skip)]
    group: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuartetReport {
    pub h: String,
    pub dim: usize,
    pub harmonic: usize,
    pub quartets: Vec<Quartet>,
    /// Irreducible non-linear factors met, one note each.
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

/// Decompose the weight-`h2/2` slice into harmonic states and orthogonal quartets.
pub fn quartet_decompose(cx: &RelativeComplex, o: &Operators, h2: i64) -> Result<QuartetReport, BrstError> {
    let sl = &cx.slices[&h2];
    let n = sl.dim();
    let (qp, qm, lap) = (&o.qp.0[&h2], &o.qm.0[&h2], &o.lap.0[&h2]);
    let mut quartets: Vec<Quartet> = Vec::new();
    let mut notes = Vec::new();
    let mut checks = Vec::new();
    let mut harmonic = SMat::zeros(n, 0);
    let mut group = 0usize;
    for (d, idx) in by_degree(sl) {
        let at = format!("(h={}, d={d})", half(h2));
        let g = sub(&sl.gram, &idx, &idx);
        let lap_d = sub(lap, &idx, &idx);
        harmonic = harmonic.hstack(&embed(n, &idx, &kernel(&lap_d)));
        let x = quartet_heads(o, h2, &idx, &lap_d);
        if x.ncols == 0 {
            continue;
        }
        let m = coordinates(&x, &lap_d.mul(&x)).ok_or_else(|| BrstError::NotPreserved(format!("Laplacian on quartet heads {at}")))?;
        let p = minpoly(&m);
        let (roots, rest) = rational_roots(&p);
        let mut groups: Vec<(Option<Rat>, SMat)> = roots.iter().map(|r| (Some(r.clone()), kernel(&m.sub(&SMat::scalar_identity(m.nrows, &Scalar::real(r.clone())))))).collect();
        if rest.len() > 1 {
            notes.push(format!("{at}: irrational Laplacian factor {}; quartets reported per invariant block", fmt_poly(&rest)));
            groups.push((None, kernel(&poly_of_matrix(&rest, &m))));
        }
        for (ev, coords) in groups {
            group += 1;
            let heads = orthogonalize(&g, x.mul(&coords).columns());
            for h in heads {
                let xf: SVec = h.iter().map(|(k, v)| (idx[*k], v.clone())).collect();
                let a = qm.apply(&xf);
                let b = qp.apply(&xf);
                let c = qm.apply(&b);
                if let Some(ev) = &ev {
                    let lx = lap.apply(&xf);
                    let ok = lx == crate::linalg::svec_scale(&xf, &Scalar::real(ev.clone()));
                    let nx = herm(&sl.gram, &xf, &xf);
                    let nb = herm(&sl.gram, &b, &b);
                    let ok2 = &nx * &Scalar::real(ev.clone()) == nb && herm(&sl.gram, &xf, &lx) == nb;
                    if !ok || !ok2 {
                        checks.push(Check::fail(format!("quartet eigenvalue {at}"), format!("delta = {}, |x|^2 = {nx}, |Q+x|^2 = {nb}", fmt_rat(ev))));
                    }
                }
                let vectors = [xf, a, b, c];
                let norms = vectors.iter().map(|v| herm(&sl.gram, v, v).to_string()).collect();
                quartets.push(Quartet { h: half(h2), d, eigenvalue: ev.as_ref().map(fmt_rat), norms, vectors, group });
            }
        }
    }
    let tag = format!("h={}", half(h2));
    if !checks.iter().any(|c| !c.ok) {
        checks.push(Check::pass(format!("quartet heads are Laplacian eigenvectors with delta |x|^2 = |Q+x|^2, {tag}")));
    }
    let total = harmonic.ncols + 4 * quartets.len();
    checks.push(if total == n {
        Check::pass(format!("harmonic + 4 * quartets = dim, {tag}"))
    } else {
        Check::fail(format!("harmonic + 4 * quartets = dim, {tag}"), format!("{} + 4*{} != {n}", harmonic.ncols, quartets.len()))
    });
    let nonharm = n - harmonic.ncols;
    checks.push(if nonharm % 4 == 0 { Check::pass(format!("non-harmonic dimension divisible by 4, {tag}")) } else { Check::fail(format!("non-harmonic dimension divisible by 4, {tag}"), format!("{nonharm}")) });

    // full Gram of harmonic states and quartet vectors
    let qcols: Vec<SVec> = quartets.iter().flat_map(|q| q.vectors.iter().cloned()).collect();
    let qmat = SMat::from_columns(n, &qcols);
    let hq = inner(&sl.gram, &harmonic, &qmat);
    checks.push(match hq.first_nonzero() {
        None => Check::pass(format!("quartets orthogonal to harmonic states, {tag}")),
        Some((i, j, v)) => Check::fail(format!("quartets orthogonal to harmonic states, {tag}"), format!("({i},{j}) = {v}")),
    });
    let qq = inner(&sl.gram, &qmat, &qmat);
    let mut bad = None;
    'outer: for (i, row) in qq.rows.iter().enumerate() {
        for (j, v) in row {
            let (qi, qj) = (&quartets[i / 4], &quartets[*j / 4]);
            let same_block = qi.group == qj.group && qi.eigenvalue.is_none();
            if i / 4 != *j / 4 && !same_block && !v.is_zero() {
                bad = Some(format!("quartets {} and {} pair to {v}", i / 4, j / 4));
                break 'outer;
            }
        }
    }
    checks.push(match bad {
        None => Check::pass(format!("distinct quartets orthogonal, {tag}")),
        Some(w) => Check::fail(format!("distinct quartets orthogonal, {tag}"), w),
    });
    let mut bad = None;
    for (k, q) in quartets.iter().enumerate() {
        let g4 = sub(&qq, &[4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 3], &[4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 3]);
        if let Some((i, m)) = first_nonpositive_minor(&g4) {
            bad = Some(format!("quartet at d={} has minor {i} = {m}", q.d));
            break;
        }
    }
    checks.push(match bad {
        None => Check::pass(format!("quartet Gram blocks positive-definite, {tag}")),
        Some(w) => Check::fail(format!("quartet Gram blocks positive-definite, {tag}"), w),
    });
    Ok(QuartetReport { h: half(h2), dim: n, harmonic: harmonic.ncols, quartets, notes, checks })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DdcRow {
    pub h: String,
    pub d: i64,
    /// `dim (im Q- ∩ ker Q+ ∩ ker Q-)`
    pub exact_minus: usize,
    /// `rank Q-Q+` into this degree
    pub im_qm_qp: usize,
    pub exact_plus: usize,
    pub im_qp_qm: usize,
    /// `dim (ker Q- ∩ ker Q+) / im Q-Q+`
    pub symmetric_quotient: usize,
    pub h_minus: usize,
}

/// The `Q^-Q^+` lemma and the symmetric quotient, per `(h, d)`.
pub fn check_ddc_lemma(cx: &RelativeComplex, o: &Operators) -> (Vec<DdcRow>, Vec<Check>) {
    let items = blocks(cx);
    let out: Vec<_> = items
        .par_iter()
        .map(|(h2, d, idx)| {
            let (qp, qm) = (&o.qp.0[h2], &o.qm.0[h2]);
            let at = format!("(h={}, d={d})", half(*h2));
            let closed = kernel(&qp.select_cols(idx).vstack(&qm.select_cols(idx)));
            let qmqp = image(&qm.mul(qp).select_rows(idx));
            let qpqm = image(&qp.mul(qm).select_rows(idx));
            let ex_m = intersect(&image(&qm.select_rows(idx)), &closed);
            let ex_p = intersect(&image(&qp.select_rows(idx)), &closed);
            let contained = |a: &SMat, b: &SMat| rank(&a.hstack(b)) == a.ncols;
            let mut checks = Vec::new();
            for (s, ex, im) in [("-", &ex_m, &qmqp), ("+", &ex_p, &qpqm)] {
                let ok = ex.ncols == im.ncols && contained(ex, im);
                checks.push(if ok {
                    Check::pass(format!("im Q{s} ∩ ker Q+ ∩ ker Q- = im Q-Q+ {at}"))
                } else {
                    Check::fail(format!("im Q{s} ∩ ker Q+ ∩ ker Q- = im Q-Q+ {at}"), format!("{} vs {}", ex.ncols, im.ncols))
                });
            }
            let symq = closed.ncols - qmqp.ncols;
            let h_minus = cohom_dim(qm, idx);
            checks.push(if symq == h_minus {
                Check::pass(format!("symmetric quotient = H(Q-) {at}"))
            } else {
                Check::fail(format!("symmetric quotient = H(Q-) {at}"), format!("{symq} != {h_minus}"))
            });
            let row = DdcRow { h: half(*h2), d: *d, exact_minus: ex_m.ncols, im_qm_qp: qmqp.ncols, exact_plus: ex_p.ncols, im_qp_qm: qpqm.ncols, symmetric_quotient: symq, h_minus };
            (row, checks)
        })
        .collect();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (r, c) in out {
        rows.push(r);
        checks.extend(c);
    }
    (rows, checks)
}

#[derive(Clone, Debug, Serialize)]
pub struct Usp2Block {
    pub h: String,
    pub dim: usize,
    /// Harmonic dimension per Π-eigenvalue.
    pub weights: BTreeMap<i64, usize>,
    pub l_nonzero: usize,
    pub lambda_nonzero: usize,
    #[serde(skip)]
    pub matrices: (SMat, SMat, SMat),
    #[serde(skip)]
    pub degrees: Vec<i64>,
}

/// The Lefschetz triple restricted to the harmonic space of each weight.
pub fn usp2_on_cohomology(cx: &RelativeComplex, o: &Operators) -> (Vec<Usp2Block>, Vec<Check>) {
    let mut out = Vec::new();
    let mut checks = Vec::new();
    for (h2, sl) in &cx.slices {
        let tag = format!("h={}", half(*h2));
        let mut k = SMat::zeros(sl.dim(), 0);
        let mut degrees = Vec::new();
        for (d, idx) in by_degree(sl) {
            let b = kernel(&sub(&o.lap.0[h2], &idx, &idx));
            degrees.extend(std::iter::repeat_n(d, b.ncols));
            k = k.hstack(&embed(sl.dim(), &idx, &b));
        }
        let restrict = |x: &GOp| coordinates(&k, &x.0[h2].mul(&k));
        let (Some(pi), Some(l), Some(lam)) = (restrict(&o.pi), restrict(&o.l), restrict(&o.lam)) else {
            checks.push(Check::fail(format!("Lefschetz triple preserves ker Lap, {tag}"), "image leaves the harmonic space"));
            continue;
        };
        checks.push(Check::pass(format!("Lefschetz triple preserves ker Lap, {tag}")));
        let two = Scalar::int(2);
        let rel = [
            ("[Pi, L] = 2L", pi.comm(&l).sub(&l.scale(&two))),
            ("[Pi, Lambda] = -2 Lambda", pi.comm(&lam).add(&lam.scale(&two))),
            ("[L, Lambda] = Pi", l.comm(&lam).sub(&pi)),
        ];
        for (name, m) in rel {
            checks.push(if m.is_zero() { Check::pass(format!("harmonic {name}, {tag}")) } else { Check::fail(format!("harmonic {name}, {tag}"), "nonzero") });
        }
        let diag = SMat::from_dense(&(0..degrees.len()).map(|i| (0..degrees.len()).map(|j| if i == j { Scalar::int(-degrees[i]) } else { Scalar::zero() }).collect()).collect::<Vec<_>>());
        checks.push(if pi == diag { Check::pass(format!("Pi = -d on harmonic states, {tag}")) } else { Check::fail(format!("Pi = -d on harmonic states, {tag}"), "Pi not diagonal in d") });
        let mut weights = BTreeMap::new();
        for d in &degrees {
            *weights.entry(-d).or_insert(0) += 1;
        }
        out.push(Usp2Block { h: half(*h2), dim: k.ncols, weights, l_nonzero: l.nnz(), lambda_nonzero: lam.nnz(), matrices: (pi, l, lam), degrees });
    }
    (out, checks)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FormalityRow {
    pub h: String,
    pub d: i64,
    pub h_v_minus: usize,
    pub h_ker_plus_minus: usize,
    pub h_v_plus: usize,
    /// `Q-` maps `ker Q+` into `im Q+`, so its induced map on `H(Q+)` vanishes.
    pub induced_zero: bool,
}

/// The three cohomology columns of the formality roof.
pub fn formality_dims(cx: &RelativeComplex, o: &Operators) -> (Vec<FormalityRow>, Vec<Check>) {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (h2, sl) in &cx.slices {
        let (qp, qm) = (&o.qp.0[h2], &o.qm.0[h2]);
        let deg = by_degree(sl);
        let z: BTreeMap<i64, SMat> = deg.iter().map(|(d, idx)| (*d, embed(sl.dim(), idx, &kernel(&qp.select_cols(idx))))).collect();
        for (d, idx) in &deg {
            let at = format!("(h={}, d={d})", half(*h2));
            let zd = &z[d];
            let qz = qm.mul(zd);
            let kerdim = zd.ncols - rank(&qz);
            let im = z.get(&(d + 1)).map(|zn| rank(&qm.mul(zn))).unwrap_or(0);
            let mid = kerdim - im;
            let hm = cohom_dim(qm, idx);
            let hp = cohom_dim(qp, idx);
            // Q- (ker Q+ at d) lands in degree d-1: compare with im Q+ there
            let induced_zero = match deg.get(&(d - 1)) {
                None => true,
                Some(lower) => {
                    let imq = image(&qp.select_rows(lower));
                    rank(&imq.hstack(&qz.select_rows(lower))) == imq.ncols
                }
            };
            checks.push(if hm == mid && mid == hp {
                Check::pass(format!("formality columns agree {at}"))
            } else {
                Check::fail(format!("formality columns agree {at}"), format!("{hm}, {mid}, {hp}"))
            });
            checks.push(if induced_zero { Check::pass(format!("induced Q- on H(Q+) is zero {at}")) } else { Check::fail(format!("induced Q- on H(Q+) is zero {at}"), "Q- x not Q+-exact") });
            rows.push(FormalityRow { h: half(*h2), d: *d, h_v_minus: hm, h_ker_plus_minus: mid, h_v_plus: hp, induced_zero });
        }
    }
    (rows, checks)
}

/// A cochain complex graded by `d` with several commuting differentials of degree -1.
struct Chain {
    dims: BTreeMap<i64, usize>,
    maps: Vec<BTreeMap<i64, SMat>>,
}

impl Chain {
    fn map(&self, k: usize, d: i64) -> SMat {
        self.maps[k].get(&d).cloned().unwrap_or_else(|| SMat::zeros(self.dims.get(&(d - 1)).copied().unwrap_or(0), self.dims.get(&d).copied().unwrap_or(0)))
    }

    /// Cohomology of the first differential with the others induced on it.
    fn reduce(&self) -> Option<Chain> {
        let mut reps = BTreeMap::new();
        let mut frames = BTreeMap::new();
        for (&d, &n) in &self.dims {
            let z = kernel(&self.map(0, d));
            let b = image(&self.map(0, d + 1));
            let mut e = Echelon::new(n);
            for c in b.columns() {
                e.insert(&c);
            }
            let r: Vec<SVec> = z.columns().into_iter().filter(|c| e.insert(c)).collect();
            let r = SMat::from_columns(n, &r);
            frames.insert(d, (b.hstack(&r), b.ncols));
            reps.insert(d, r);
        }
        let dims = reps.iter().map(|(d, r)| (*d, r.ncols)).collect();
        let mut maps = Vec::new();
        for k in 1..self.maps.len() {
            let mut m = BTreeMap::new();
            for (&d, r) in &reps {
                let Some((frame, nb)) = frames.get(&(d - 1)) else { continue };
                let img = self.map(k, d).mul(r);
                let c = coordinates(frame, &img)?;
                let rows: Vec<usize> = (*nb..frame.ncols).collect();
                m.insert(d, c.select_rows(&rows));
            }
            maps.push(m);
        }
        Some(Chain { dims, maps })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IteratedRow {
    #[serde(skip)]
    pub h2: i64,
    pub h: String,
    pub d: i64,
    pub iterated: usize,
    pub total: usize,
}

/// Check that the index sets `parts` split `g` into commuting ideals.
pub fn check_partition(g: &crate::lie::LieAlgebra, parts: &[Vec<usize>]) -> Result<(), String> {
    let mut owner = vec![usize::MAX; g.dim];
    for (p, idx) in parts.iter().enumerate() {
        for &a in idx {
            if a >= g.dim || owner[a] != usize::MAX {
                return Err(format!("index {a} missing or repeated"));
            }
            owner[a] = p;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err("partition does not cover g".into());
    }
    for a in 0..g.dim {
        for b in 0..g.dim {
            if owner[a] != owner[b] && !g.k[a][b].is_zero() {
                return Err(format!("invariant form couples {a} and {b}"));
            }
            for c in 0..g.dim {
                if !g.f[a][b][c].is_zero() && (owner[a] != owner[b] || owner[c] != owner[a]) {
                    return Err(format!("f_({a},{b})^{c} crosses the partition"));
                }
            }
        }
    }
    Ok(())
}

/// `H(...H(V, Q-_1)..., Q-_N)` against `H(V, Q-)`, per `(h, d)`.
pub fn iterated_cohomology(cx: &RelativeComplex, parts: &[Vec<usize>]) -> Result<(Vec<IteratedRow>, Vec<Check>), BrstError> {
    check_partition(&cx.gauge.g, parts).map_err(BrstError::Partition)?;
    let h = cx.h2_max;
    let qs: Vec<GOp> = parts.iter().map(|idx| cx.restrict(&cx.gauge.differential(false, idx, h))).collect::<Result<_, _>>()?;
    let total = cx.restrict(&cx.gauge.differential(false, &cx.gauge.all_indices(), h))?;
    let mut checks = Vec::new();
    for (i, a) in qs.iter().enumerate() {
        checks.push(Check::zero(format!("(Q-_{})^2 = 0", i + 1), cx, &a.mul(a)));
        for (j, b) in qs.iter().enumerate().skip(i + 1) {
            checks.push(Check::zero(format!("[Q-_{}, Q-_{}] = 0", i + 1, j + 1), cx, &a.anticomm(b)));
        }
    }
    let sum = qs.iter().skip(1).fold(qs[0].clone(), |acc, q| acc.add(q));
    checks.push(Check::equal("sum of summand differentials = Q-", cx, &sum, &total));
    let mut rows = Vec::new();
    for (h2, sl) in &cx.slices {
        let deg = by_degree(sl);
        let dims: BTreeMap<i64, usize> = deg.iter().map(|(d, idx)| (*d, idx.len())).collect();
        let maps = qs
            .iter()
            .map(|q| deg.iter().filter_map(|(d, idx)| deg.get(&(d - 1)).map(|lo| (*d, sub(&q.0[h2], lo, idx)))).collect())
            .collect();
        let mut chain = Chain { dims, maps };
        while !chain.maps.is_empty() {
            chain = chain.reduce().ok_or_else(|| BrstError::Partition("summand differentials do not descend".into()))?;
            if chain.maps.is_empty() {
                break;
            }
        }
        for (d, idx) in &deg {
            let it = chain.dims[d];
            let tot = cohom_dim(&total.0[h2], idx);
            rows.push(IteratedRow { h2: *h2, h: half(*h2), d: *d, iterated: it, total: tot });
        }
    }
    let bad: Vec<String> = rows.iter().filter(|r| r.iterated != r.total).map(|r| format!("(h={}, d={}): {} != {}", r.h, r.d, r.iterated, r.total)).collect();
    checks.push(if bad.is_empty() { Check::pass("iterated = total cohomology") } else { Check::fail("iterated = total cohomology", bad.join("; ")) });
    Ok((rows, checks))
}

/// Convolution of single-factor cohomology tables `(h2, d) -> dim`.
pub fn kunneth(a: &BTreeMap<(i64, i64), usize>, b: &BTreeMap<(i64, i64), usize>, h2_max: i64) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    for ((h1, d1), x) in a {
        for ((h2, d2), y) in b {
            if h1 + h2 <= h2_max && x * y > 0 {
                *out.entry((h1 + h2, d1 + d2)).or_insert(0) += x * y;
            }
        }
    }
    out
}

/// `(h2, d) -> dim H(Q-)`.
pub fn cohomology_table(cx: &RelativeComplex) -> Result<BTreeMap<(i64, i64), usize>, BrstError> {
    let q = cx.restrict(&cx.gauge.differential(false, &cx.gauge.all_indices(), cx.h2_max))?;
    let mut t = BTreeMap::new();
    for (h2, sl) in &cx.slices {
        for (d, idx) in by_degree(sl) {
            t.insert((*h2, d), cohom_dim(&q.0[h2], &idx));
        }
    }
    Ok(t)
}

