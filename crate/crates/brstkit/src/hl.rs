//! Associated-graded modes, Hall-Littlewood chiral rings and the Koszul model of their reduction.

use crate::brst::{split_qs, word_r_shift2, Check, Operators, RelativeComplex};
use crate::fock::{half, FreeFields, Grade, Mode, Monomial};
use crate::lie::{LieAlgebra, SymplecticRep};
use crate::linalg::{coordinates, kernel, rank, SMat, SVec};
use crate::ops::{apply_mode_state, basis_state, matter_current, state_axpy, Op, State};
use crate::scalar::{Rat, Scalar};
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// A field whose associated-graded modes can be taken.
#[derive(Clone, Copy, Debug)]
pub enum Field {
    Vacuum,
    /// A free-field generator.
    Gen(u16),
    /// The matter current `J_A` (bosons first in the field content).
    Current(usize),
}

/// Leading (`Y+`) and subleading (`Y-`, only for `n >= 0`) R-components of a mode.
pub struct GrModes {
    pub plus: Op,
    pub minus: Option<Op>,
}

fn r_component(op: &Op, r2: i64) -> Op {
    Op::from_terms(op.words.iter().filter(|(_, w)| word_r_shift2(w) == r2).cloned().collect())
}

/// Mode `n` of `field` split by R-degree. `p2` is twice the R-degree of the field.
pub fn gr_modes(ff: &FreeFields, rep: Option<&SymplecticRep>, field: Field, n: i32, h2_max: i64) -> GrModes {
    let (full, p2) = match field {
        Field::Vacuum => (if n == -1 { Op::identity() } else { Op::zero() }, 0),
        Field::Gen(g) => (Op::mode((g, n)), 1),
        Field::Current(a) => (matter_current(ff, rep.expect("current needs matter"), 0, a, n, h2_max), 2),
    };
    let plus = r_component(&full, p2);
    let minus = (n >= 0).then(|| r_component(&full, p2 - 2));
    GrModes { plus, minus }
}

fn lowest(g: u16) -> Mode {
    (g, -1)
}

/// Key of an HL graded piece: polynomial degree, doubled R, d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HlKey {
    pub degree: usize,
    pub r2: i64,
    pub d: i64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HlDim {
    pub degree: usize,
    #[serde(rename = "R")]
    pub r: String,
    pub d: i64,
    pub dim: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum HlError {
    #[error("BPS bound violated by {0} at {1}")]
    Bps(String, Grade),
}

/// The Hall-Littlewood chiral ring of a free-field algebra, truncated in polynomial degree.
pub struct HlRing {
    pub ff: FreeFields,
    /// Generators whose lowest mode is Hall-Littlewood.
    pub gens: Vec<u16>,
    pub degree_max: usize,
    pub basis: BTreeMap<HlKey, Vec<Monomial>>,
}

impl HlRing {
    pub fn build(ff: &FreeFields, degree_max: usize) -> Result<Self, HlError> {
        let mut gens = Vec::new();
        for g in 0..ff.ngens() as u16 {
            // deeper modes only raise h, so the lowest mode decides the bound
            let gr = ff.grade(&vec![lowest(g)]);
            if !gr.bps() {
                return Err(HlError::Bps(ff.gens[g as usize].name.clone(), gr));
            }
            if gr.is_hl() {
                gens.push(g);
            }
        }
        gens.sort_by_key(|&g| ff.key(lowest(g)));
        let mut basis: BTreeMap<HlKey, Vec<Monomial>> = BTreeMap::new();
        let mut frontier: Vec<(usize, Monomial)> = vec![(0, Vec::new())];
        for deg in 0..=degree_max {
            let mut next = Vec::new();
            for (start, m) in &frontier {
                let g = ff.grade(m);
                basis.entry(HlKey { degree: deg, r2: g.r2, d: g.d }).or_default().push(m.clone());
                if deg == degree_max {
                    continue;
                }
                for k in *start..gens.len() {
                    let odd = ff.is_odd(gens[k]);
                    if odd && m.contains(&lowest(gens[k])) {
                        continue;
                    }
                    let st = apply_mode_state(ff, lowest(gens[k]), &basis_state(m));
                    if let Some((mm, _)) = st.into_iter().next() {
                        next.push((if odd { k + 1 } else { k }, mm));
                    }
                }
            }
            frontier = next;
        }
        for v in basis.values_mut() {
            v.sort_by(|a, b| ff.fmt_monomial(a).cmp(&ff.fmt_monomial(b)));
            v.dedup();
        }
        Ok(HlRing { ff: ff.clone(), gens, degree_max, basis })
    }

    pub fn dims(&self) -> Vec<HlDim> {
        self.basis.iter().map(|(k, v)| HlDim { degree: k.degree, r: half(k.r2), d: k.d, dim: v.len() }).collect()
    }

    pub fn dims_by_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.degree_max + 1];
        for (k, v) in &self.basis {
            out[k.degree] += v.len();
        }
        out
    }

    fn parity(&self, m: &Monomial) -> usize {
        self.ff.parity(m)
    }

    /// Commutative product: the leading part of the `-1` mode, i.e. mode concatenation.
    pub fn product(&self, x: &State, y: &State) -> State {
        let mut out = State::new();
        for (m, c) in x {
            let mut s = y.clone();
            for &md in m.iter().rev() {
                s = apply_mode_state(&self.ff, md, &s);
            }
            state_axpy(&mut out, c, &s);
        }
        out
    }

    /// Poisson bracket as the biderivation of the generator brackets `x_0 y`.
    pub fn bracket(&self, x: &State, y: &State) -> State {
        let ff = &self.ff;
        let mut out = State::new();
        for (mx, cx) in x {
            for (my, cy) in y {
                for i in 0..mx.len() {
                    for j in 0..my.len() {
                        let b = ff.bracket((mx[i].0, 0), my[j]);
                        if b.is_zero() {
                            continue;
                        }
                        let pi = ff.is_odd(mx[i].0) as usize;
                        let pj = ff.is_odd(my[j].0) as usize;
                        let after: usize = mx[i + 1..].iter().map(|m| ff.is_odd(m.0) as usize).sum();
                        let before: usize = my[..j].iter().map(|m| ff.is_odd(m.0) as usize).sum();
                        let sign = if (pi * after + pj * before) % 2 == 0 { 1 } else { -1 };
                        let mut rx = mx.clone();
                        rx.remove(i);
                        let mut ry = my.clone();
                        ry.remove(j);
                        let prod = self.product(&basis_state(&rx), &basis_state(&ry));
                        let c = &(&(cx * cy) * &b) * &Scalar::int(sign);
                        state_axpy(&mut out, &c, &prod);
                    }
                }
            }
        }
        out
    }

    fn state_parity(&self, s: &State) -> usize {
        s.keys().next().map(|m| self.parity(m) % 2).unwrap_or(0)
    }

    /// All basis states up to polynomial degree `deg`, in a fixed order.
    pub fn states_up_to(&self, deg: usize) -> Vec<Monomial> {
        self.basis.iter().filter(|(k, _)| k.degree <= deg).flat_map(|(_, v)| v.iter().cloned()).collect()
    }

    /// Closure and bidegree on all pairs of degree `<= deg`; Jacobi and Leibniz on all triples
    /// of total degree `<= deg + 1`.
    pub fn check_axioms(&self, deg: usize) -> Vec<Check> {
        let states = self.states_up_to(deg);
        let graded: Vec<(usize, &Monomial)> = self.basis.iter().filter(|(k, _)| k.degree <= deg).flat_map(|(k, v)| v.iter().map(move |m| (k.degree, m))).collect();
        let mut out = Vec::new();
        let mut closure = None;
        let mut bideg = None;
        for x in &states {
            for y in &states {
                let (gx, gy) = (self.ff.grade(x), self.ff.grade(y));
                let p = self.product(&basis_state(x), &basis_state(y));
                let b = self.bracket(&basis_state(x), &basis_state(y));
                for m in p.keys().chain(b.keys()) {
                    if !self.ff.grade(m).is_hl() && closure.is_none() {
                        closure = Some(self.ff.fmt_monomial(m));
                    }
                }
                for m in b.keys() {
                    let g = self.ff.grade(m);
                    if (g.r2 != gx.r2 + gy.r2 - 2 || g.d != gx.d + gy.d) && bideg.is_none() {
                        bideg = Some(format!("{{{}, {}}}", self.ff.fmt_monomial(x), self.ff.fmt_monomial(y)));
                    }
                }
            }
        }
        out.push(closure.map_or_else(|| Check::pass("HL closed under product and bracket"), |w| Check::fail("HL closed under product and bracket", w)));
        out.push(bideg.map_or_else(|| Check::pass("bracket has bidegree (-1, 0)"), |w| Check::fail("bracket has bidegree (-1, 0)", w)));
        let mut jac = None;
        let mut leib = None;
        for &(dx, x) in &graded {
            for &(dy, y) in &graded {
                for &(_, z) in graded.iter().filter(|(dz, _)| dx + dy + dz <= deg + 1) {
                    let (sx, sy, sz) = (basis_state(x), basis_state(y), basis_state(z));
                    let (px, py) = (self.state_parity(&sx), self.state_parity(&sy));
                    let sgn = Scalar::int(if px * py % 2 == 0 { 1 } else { -1 });
                    // {x,{y,z}} = {{x,y},z} + (-1)^{|x||y|} {y,{x,z}}
                    let lhs = self.bracket(&sx, &self.bracket(&sy, &sz));
                    let mut rhs = self.bracket(&self.bracket(&sx, &sy), &sz);
                    state_axpy(&mut rhs, &sgn, &self.bracket(&sy, &self.bracket(&sx, &sz)));
                    if !diff_zero(&lhs, &rhs) && jac.is_none() {
                        jac = Some(format!("{}, {}, {}", self.ff.fmt_monomial(x), self.ff.fmt_monomial(y), self.ff.fmt_monomial(z)));
                    }
                    // {x, y z} = {x,y} z + (-1)^{|x||y|} y {x,z}
                    let lhs = self.bracket(&sx, &self.product(&sy, &sz));
                    let mut rhs = self.product(&self.bracket(&sx, &sy), &sz);
                    state_axpy(&mut rhs, &sgn, &self.product(&sy, &self.bracket(&sx, &sz)));
                    if !diff_zero(&lhs, &rhs) && leib.is_none() {
                        leib = Some(format!("{}, {}, {}", self.ff.fmt_monomial(x), self.ff.fmt_monomial(y), self.ff.fmt_monomial(z)));
                    }
                }
            }
        }
        out.push(jac.map_or_else(|| Check::pass(format!("Jacobi identity up to total degree {}", deg + 1)), |w| Check::fail(format!("Jacobi identity up to total degree {}", deg + 1), w)));
        out.push(leib.map_or_else(|| Check::pass(format!("Leibniz rule up to total degree {}", deg + 1)), |w| Check::fail(format!("Leibniz rule up to total degree {}", deg + 1), w)));
        out
    }

    /// The bracket with a generator agrees with its subleading zero mode on every basis state.
    pub fn check_against_modes(&self, deg: usize) -> Check {
        for &g in &self.gens {
            let y0 = gr_modes(&self.ff, None, Field::Gen(g), 0, 2 * deg as i64 + 2).minus.expect("n >= 0");
            for y in self.states_up_to(deg) {
                let a = y0.apply(&self.ff, &basis_state(&y));
                let b = self.bracket(&basis_state(&vec![lowest(g)]), &basis_state(&y));
                if !diff_zero(&a, &b) {
                    return Check::fail("bracket = Y- zero mode of generators", format!("{} on {}", self.ff.gens[g as usize].name, self.ff.fmt_monomial(&y)));
                }
            }
        }
        Check::pass("bracket = Y- zero mode of generators")
    }
}

fn diff_zero(a: &State, b: &State) -> bool {
    let mut d = a.clone();
    state_axpy(&mut d, &Scalar::int(-1), b);
    d.values().all(|v| v.is_zero())
}

/// The matrices `X_A` of the comoment action `J_{A,0} q^b = X_A[c][b] q^c` on one-particle states,
/// compared with the contragredient action `-T_A^T`.
pub fn check_comoment(rep: &SymplecticRep, g: &LieAlgebra) -> Check {
    let ff = FreeFields::bosons(rep);
    let n = rep.dim;
    for a in 0..g.dim {
        let y = gr_modes(&ff, Some(rep), Field::Current(a), 0, 2).minus.expect("n >= 0");
        let direct = gr_modes(&ff, Some(rep), Field::Current(a), 0, 2).plus;
        if !direct.is_zero() {
            return Check::fail("J_A comoment action", "Y+ zero mode of J_A is nonzero");
        }
        for b in 0..n {
            let out = y.apply(&ff, &basis_state(&vec![(b as u16, -1)]));
            for c in 0..n {
                let got = out.get(&vec![(c as u16, -1)]).cloned().unwrap_or_else(Scalar::zero);
                let want = -rep.rep[a][b][c].clone();
                if got != want {
                    return Check::fail("J_A comoment action", format!("A={a}, q^{b} -> q^{c}: {got} != {want}"));
                }
            }
        }
    }
    Check::pass("J_A comoment action")
}

// ---------------------------------------------------------------------------
// Koszul model: (Sym V (x) wedge g)^G with d eta^A = -K^{AB} mu_B

/// `(q multiset, eta set)`, both sorted.
type KMono = (Vec<u16>, Vec<u16>);
type KPoly = BTreeMap<KMono, Scalar>;

fn kadd(p: &mut KPoly, k: KMono, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = p.entry(k.clone()).or_insert_with(Scalar::zero);
    *e += &c;
    if e.is_zero() {
        p.remove(&k);
    }
}

/// Insert `eta^e` at the front of a sorted wedge, with sign; `None` if repeated.
fn wedge_front(e: u16, rest: &[u16]) -> Option<(i64, Vec<u16>)> {
    if rest.contains(&e) {
        return None;
    }
    let pos = rest.iter().filter(|&&x| x < e).count();
    let mut v = rest.to_vec();
    v.insert(pos, e);
    Some((if pos % 2 == 0 { 1 } else { -1 }, v))
}

fn multisets(n: u16, k: usize) -> Vec<Vec<u16>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for m in multisets(n, k - 1) {
        let start = m.last().copied().unwrap_or(0);
        for a in start..n {
            let mut mm = m.clone();
            mm.push(a);
            out.push(mm);
        }
    }
    out
}

fn subsets(n: u16, k: usize) -> Vec<Vec<u16>> {
    multisets(n, k).into_iter().filter(|m| m.windows(2).all(|w| w[0] < w[1])).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct KoszulRow {
    /// Twice the conformal weight: q counts 1, eta^- counts 2.
    pub degree: usize,
    #[serde(rename = "R")]
    pub r: String,
    pub d: i64,
    pub invariants: usize,
    pub cohomology: usize,
}

struct KSpace {
    basis: Vec<KMono>,
    index: HashMap<KMono, usize>,
}

impl KSpace {
    fn new(basis: Vec<KMono>) -> Self {
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        KSpace { basis, index }
    }
    fn column(&self, p: &KPoly) -> SVec {
        let mut v: SVec = p.iter().map(|(k, c)| (self.index[k], c.clone())).collect();
        v.sort_by_key(|e| e.0);
        v
    }
}

/// The Koszul model, independent of the vertex-algebra machinery.
pub struct Koszul<'a> {
    pub g: &'a LieAlgebra,
    pub rep: Option<&'a SymplecticRep>,
    /// `mu_B` as quadratic polynomials.
    mu: Vec<KPoly>,
}

impl<'a> Koszul<'a> {
    pub fn new(g: &'a LieAlgebra, rep: Option<&'a SymplecticRep>) -> Self {
        let mut mu = Vec::new();
        for b in 0..g.dim {
            let mut p = KPoly::new();
            if let Some(r) = rep {
                // mu_B = 1/2 q^T Omega T_B q
                for i in 0..r.dim {
                    for j in 0..r.dim {
                        let mut m = Scalar::zero();
                        for k in 0..r.dim {
                            if !r.omega[i][k].is_zero() {
                                m += &(&Scalar::real(r.omega[i][k].clone()) * &r.rep[b][k][j]);
                            }
                        }
                        let mut q = vec![i as u16, j as u16];
                        q.sort_unstable();
                        kadd(&mut p, (q, Vec::new()), &m * &Scalar::frac(1, 2));
                    }
                }
            }
            mu.push(p);
        }
        Koszul { g, rep, mu }
    }

    fn nq(&self) -> u16 {
        self.rep.map_or(0, |r| r.dim as u16)
    }

    fn space(&self, degree: usize, k: usize) -> KSpace {
        let nq = degree - 2 * k;
        let mut basis = Vec::new();
        for e in subsets(self.g.dim as u16, k) {
            for q in multisets(self.nq(), nq) {
                basis.push((q, e.clone()));
            }
        }
        KSpace::new(basis)
    }

    /// `delta_A` on a monomial: derivation from `T_A q` and the coadjoint-type action on eta.
    fn act(&self, a: usize, m: &KMono) -> KPoly {
        let mut out = KPoly::new();
        let (q, e) = m;
        if let Some(r) = self.rep {
            for i in 0..q.len() {
                for b in 0..r.dim {
                    let t = &r.rep[a][q[i] as usize][b];
                    if t.is_zero() {
                        continue;
                    }
                    let mut nq = q.clone();
                    nq[i] = b as u16;
                    nq.sort_unstable();
                    kadd(&mut out, (nq, e.clone()), t.clone());
                }
            }
        }
        let g = self.g;
        for i in 0..e.len() {
            for x in 0..g.dim {
                // delta_A eta^B = -K^{BC} f_{ACx} eta^x
                let mut c = Rat::zero();
                for cc in 0..g.dim {
                    if !g.k_inv[e[i] as usize][cc].is_zero() {
                        c -= &g.k_inv[e[i] as usize][cc] * g.f_low(a, cc, x);
                    }
                }
                if c.is_zero() {
                    continue;
                }
                let mut rest = e.clone();
                rest.remove(i);
                // put eta^x back at position i: move to front from i, then insert
                let sign_i = if i % 2 == 0 { 1 } else { -1 };
                if let Some((s, ne)) = wedge_front(x as u16, &rest) {
                    kadd(&mut out, (q.clone(), ne), Scalar::real(c * Rat::from_integer((s * sign_i).into())));
                }
            }
        }
        out
    }

    /// Koszul differential on a monomial.
    fn koszul(&self, m: &KMono) -> KPoly {
        let mut out = KPoly::new();
        let (q, e) = m;
        for i in 0..e.len() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let mut rest = e.clone();
            let a = rest.remove(i) as usize;
            for b in 0..self.g.dim {
                let kab = &self.g.k_inv[a][b];
                if kab.is_zero() {
                    continue;
                }
                for ((mq, _), c) in &self.mu[b] {
                    let mut nq = q.clone();
                    nq.extend(mq);
                    nq.sort_unstable();
                    let coef = &(c * &Scalar::real(-kab.clone())) * &Scalar::int(sign);
                    kadd(&mut out, (nq, rest.clone()), coef);
                }
            }
        }
        out
    }

    fn action_matrix(&self, s: &KSpace) -> SMat {
        let mut rows = SMat::zeros(0, s.basis.len());
        for a in 0..self.g.dim {
            let cols: Vec<SVec> = s.basis.iter().map(|m| s.column(&self.act(a, m))).collect();
            rows = rows.vstack(&SMat::from_columns(s.basis.len(), &cols));
        }
        rows
    }

    /// Invariant cohomology dims for polynomial degree `<= degree_max`, with equivariance checks.
    pub fn reduce(&self, degree_max: usize) -> (Vec<KoszulRow>, Vec<Check>) {
        let mut rows = Vec::new();
        let mut checks = Vec::new();
        for degree in 0..=degree_max {
            let kmax = (degree / 2).min(self.g.dim);
            let spaces: Vec<KSpace> = (0..=kmax).map(|k| self.space(degree, k)).collect();
            let inv: Vec<SMat> = spaces.iter().map(|s| kernel(&self.action_matrix(s))).collect();
            // koszul[k]: C_k -> C_{k-1}
            let kz: Vec<Option<SMat>> = (0..=kmax)
                .map(|k| {
                    (k > 0).then(|| {
                        let cols: Vec<SVec> = spaces[k].basis.iter().map(|m| spaces[k - 1].column(&self.koszul(m))).collect();
                        SMat::from_columns(spaces[k - 1].basis.len(), &cols)
                    })
                })
                .collect();
            let mut ok = true;
            for k in 1..=kmax {
                let m = kz[k].as_ref().unwrap();
                let (src, dst) = (self.action_matrix(&spaces[k]), self.action_matrix(&spaces[k - 1]));
                let n = spaces[k - 1].basis.len();
                for a in 0..self.g.dim {
                    let ra: Vec<usize> = (a * spaces[k].basis.len()..(a + 1) * spaces[k].basis.len()).collect();
                    let rb: Vec<usize> = (a * n..(a + 1) * n).collect();
                    if !m.mul(&src.select_rows(&ra)).sub(&dst.select_rows(&rb).mul(m)).is_zero() {
                        ok = false;
                    }
                }
                if k >= 2 && !kz[k - 1].as_ref().unwrap().mul(m).is_zero() {
                    ok = false;
                }
            }
            checks.push(if ok { Check::pass(format!("Koszul differential equivariant and square-zero, degree {degree}")) } else { Check::fail(format!("Koszul differential equivariant and square-zero, degree {degree}"), "mismatch") });
            // restricted differential ranks on invariants
            let mut rk = vec![0usize; kmax + 2];
            for k in 1..=kmax {
                let img = kz[k].as_ref().unwrap().mul(&inv[k]);
                rk[k] = rank(&img);
                if inv[k - 1].ncols > 0 && coordinates(&inv[k - 1], &img).is_none() && img.nnz() > 0 {
                    checks.push(Check::fail(format!("Koszul differential preserves invariants, degree {degree}"), format!("k = {k}")));
                }
            }
            for k in 0..=kmax {
                let dim = inv[k].ncols;
                let coh = dim - rk[k] - rk[k + 1];
                let d = -(k as i64);
                let r2 = (degree - 2 * k + k) as i64;
                rows.push(KoszulRow { degree, r: half(r2), d, invariants: dim, cohomology: coh });
            }
        }
        (rows, checks)
    }

    /// Dimension of `Sym^2(V)^G`, the classical invariant count.
    pub fn quadratic_invariants(&self) -> usize {
        kernel(&self.action_matrix(&self.space(2, 0))).ncols
    }
}

// ---------------------------------------------------------------------------
// HL sector of a relative complex

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HlSectorRow {
    pub h: String,
    #[serde(rename = "R")]
    pub r: String,
    pub d: i64,
    pub chain: usize,
    /// Cohomology of the leading part of `Q+` on the HL sector.
    pub cohomology: usize,
    /// Harmonic states at this HL grade.
    pub harmonic: usize,
}

/// HL grades of the relative complex with `Q+` cohomology and harmonic counts.
pub fn hl_sector(cx: &RelativeComplex, o: &Operators) -> Vec<HlSectorRow> {
    let mut rows = Vec::new();
    for (h2, sl) in &cx.slices {
        let hl = sl.indices(|g| g.is_hl());
        let qp = o.qp.0[h2].select_rows(&hl).select_cols(&hl);
        let mut ds: Vec<i64> = hl.iter().map(|&i| sl.grades[i].d).collect();
        ds.dedup();
        for d in ds {
            let local: Vec<usize> = (0..hl.len()).filter(|&k| sl.grades[hl[k]].d == d).collect();
            let idx: Vec<usize> = local.iter().map(|&k| hl[k]).collect();
            let coh = local.len() - rank(&qp.select_cols(&local)) - rank(&qp.select_rows(&local));
            // harmonic states supported on this grade
            let harmonic = kernel(&o.lap.0[h2].select_cols(&idx)).ncols;
            rows.push(HlSectorRow { h: half(*h2), r: half(sl.grades[idx[0]].r2), d, chain: idx.len(), cohomology: coh, harmonic });
        }
    }
    rows
}

/// `[Q^a, Q^b] = 0`, `[Qbar_a, Qbar_b] = 0`, `[Q^a, Qbar_b] = 1/2 delta^a_b Lap` for the leading parts.
pub fn check_pva_kahler(cx: &RelativeComplex, o: &Operators) -> Vec<Check> {
    let qp = split_qs(cx, &o.qp).q;
    let qm = split_qs(cx, &o.qm).q;
    let qbp = cx.adjoint(&qp);
    let qbm = cx.adjoint(&qm);
    let half_lap = o.lap.scale(&Scalar::frac(1, 2));
    let z = |n: &str, x: &crate::brst::GOp| Check::zero(n, cx, x);
    vec![
        z("[Q+, Q+] = 0 (leading)", &qp.anticomm(&qp)),
        z("[Q-, Q-] = 0 (leading)", &qm.anticomm(&qm)),
        z("[Q+, Q-] = 0 (leading)", &qp.anticomm(&qm)),
        z("[Qbar+, Qbar-] = 0 (leading)", &qbp.anticomm(&qbm)),
        z("[Qbar+, Qbar+] = 0 (leading)", &qbp.anticomm(&qbp)),
        z("[Qbar-, Qbar-] = 0 (leading)", &qbm.anticomm(&qbm)),
        Check::equal("[Q+, Qbar+] = Lap/2", cx, &qp.anticomm(&qbp), &half_lap),
        Check::equal("[Q-, Qbar-] = Lap/2", cx, &qm.anticomm(&qbm), &half_lap),
        z("[Q+, Qbar-] = 0", &qp.anticomm(&qbm)),
        z("[Q-, Qbar+] = 0", &qm.anticomm(&qbp)),
        Check::equal("Qbar+ = -S-", cx, &qbp, &split_qs(cx, &o.qm).s.scale(&Scalar::int(-1))),
        Check::equal("Qbar- = S+", cx, &qbm, &split_qs(cx, &o.qp).s),
    ]
}
