//! Mode algebra acting on Fock states: words of modes, currents, stress tensors.

use crate::fock::{FreeFields, GhostLayout, GradedSpace, Mode, Monomial};
use crate::lie::{dmul, LieAlgebra, SymplecticRep};
use crate::scalar::{Rat, Scalar};
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Sparse Fock vector.
pub type State = HashMap<Monomial, Scalar>;

pub fn basis_state(m: &Monomial) -> State {
    let mut s = State::new();
    s.insert(m.clone(), Scalar::one());
    s
}

pub fn state_add(acc: &mut State, m: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&m) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                acc.remove(&m);
            }
        }
        None => {
            acc.insert(m, c);
        }
    }
}

pub fn state_axpy(acc: &mut State, c: &Scalar, x: &State) {
    for (m, v) in x {
        state_add(acc, m.clone(), c * v);
    }
}

pub fn state_sub(a: &State, b: &State) -> State {
    let mut out = a.clone();
    state_axpy(&mut out, &Scalar::int(-1), b);
    out
}

/// Apply a single mode to a monomial.
pub fn apply_mode(ff: &FreeFields, md: Mode, m: &Monomial) -> Vec<(Monomial, Scalar)> {
    let (g, n) = md;
    let odd = ff.is_odd(g);
    if odd && n == 0 {
        return vec![];
    }
    if n < 0 {
        let k = ff.key(md);
        let pos = m.partition_point(|&x| ff.key(x) <= k);
        if odd && pos > 0 && m[pos - 1] == md {
            return vec![];
        }
        let passed = if odd { m[..pos].iter().filter(|x| ff.is_odd(x.0)).count() } else { 0 };
        let mut out = m.clone();
        out.insert(pos, md);
        let c = if passed % 2 == 1 { Scalar::int(-1) } else { Scalar::one() };
        return vec![(out, c)];
    }
    let mut res = Vec::new();
    let mut odd_before = 0usize;
    for (i, &e) in m.iter().enumerate() {
        let b = ff.bracket(md, e);
        if !b.is_zero() {
            let mut rest = m.clone();
            rest.remove(i);
            let c = if odd && odd_before % 2 == 1 { -b } else { b };
            res.push((rest, c));
        }
        if ff.is_odd(e.0) {
            odd_before += 1;
        }
    }
    res
}

pub fn apply_mode_state(ff: &FreeFields, md: Mode, s: &State) -> State {
    let mut out = State::new();
    for (m, c) in s {
        for (m2, c2) in apply_mode(ff, md, m) {
            state_add(&mut out, m2, c * &c2);
        }
    }
    out
}

/// A linear combination of mode words; each word acts right to left.
#[derive(Clone, Debug, Default)]
pub struct Op {
    pub words: Vec<(Scalar, Vec<Mode>)>,
    by_right: HashMap<Mode, Vec<usize>>,
    creators: Vec<usize>,
    /// Words whose rightmost mode acts as zero only via bracket partners are indexed;
    /// the identity (empty word) is kept in `creators`.
    indexed: bool,
}

impl Op {
    pub fn zero() -> Self {
        Op::default()
    }

    pub fn identity() -> Self {
        Op::from_terms(vec![(Scalar::one(), vec![])])
    }

    pub fn mode(md: Mode) -> Self {
        Op::from_terms(vec![(Scalar::one(), vec![md])])
    }

    /// Merge duplicate words, drop zero coefficients.
    pub fn from_terms(terms: Vec<(Scalar, Vec<Mode>)>) -> Self {
        let mut acc: HashMap<Vec<Mode>, Scalar> = HashMap::new();
        let mut order: Vec<Vec<Mode>> = Vec::new();
        for (c, w) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&w) {
                Some(x) => *x += &c,
                None => {
                    order.push(w.clone());
                    acc.insert(w, c);
                }
            }
        }
        let words = order.into_iter().filter_map(|w| {
            let c = acc.remove(&w).unwrap();
            (!c.is_zero()).then_some((c, w))
        });
        Op { words: words.collect(), ..Default::default() }
    }

    fn index(&mut self) {
        self.by_right.clear();
        self.creators.clear();
        for (i, (_, w)) in self.words.iter().enumerate() {
            match w.last() {
                Some(&md) if md.1 >= 0 => self.by_right.entry(md).or_default().push(i),
                _ => self.creators.push(i),
            }
        }
        self.indexed = true;
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Op {
        Op::from_terms(self.words.iter().map(|(x, w)| (x * c, w.clone())).collect())
    }

    pub fn add(&self, o: &Op) -> Op {
        Op::from_terms(self.words.iter().chain(o.words.iter()).cloned().collect())
    }

    pub fn sum<'a>(ops: impl IntoIterator<Item = (Scalar, &'a Op)>) -> Op {
        let mut terms = Vec::new();
        for (c, o) in ops {
            terms.extend(o.words.iter().map(|(x, w)| (x * &c, w.clone())));
        }
        Op::from_terms(terms)
    }

    /// Word product `self * o` (o acts first).
    pub fn compose(&self, o: &Op) -> Op {
        let mut terms = Vec::new();
        for (a, w1) in &self.words {
            for (b, w2) in &o.words {
                let mut w = w1.clone();
                w.extend(w2);
                terms.push((a * b, w));
            }
        }
        Op::from_terms(terms)
    }

    /// Make the operator ready for repeated application.
    pub fn prepared(mut self) -> Op {
        self.index();
        self
    }

    fn candidates(&self, ff: &FreeFields, m: &Monomial) -> Vec<usize> {
        let mut out = self.creators.clone();
        for &(h, n) in m {
            let an = if ff.is_odd(h) { -n } else { -n - 1 };
            for (g, _) in ff.partners(h) {
                if let Some(v) = self.by_right.get(&(*g, an)) {
                    out.extend(v);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn apply_monomial(&self, ff: &FreeFields, m: &Monomial) -> State {
        let mut out = State::new();
        let idx: Vec<usize> = if self.indexed { self.candidates(ff, m) } else { (0..self.words.len()).collect() };
        for i in idx {
            let (c, w) = &self.words[i];
            let mut cur: Vec<(Monomial, Scalar)> = vec![(m.clone(), c.clone())];
            for &md in w.iter().rev() {
                let mut next = Vec::new();
                for (mm, cc) in &cur {
                    for (m2, c2) in apply_mode(ff, md, mm) {
                        next.push((m2, cc * &c2));
                    }
                }
                cur = next;
                if cur.is_empty() {
                    break;
                }
            }
            for (mm, cc) in cur {
                state_add(&mut out, mm, cc);
            }
        }
        out
    }

    pub fn apply(&self, ff: &FreeFields, s: &State) -> State {
        let mut out = State::new();
        for (m, c) in s {
            let r = self.apply_monomial(ff, m);
            state_axpy(&mut out, c, &r);
        }
        out
    }
}

/// Reorder modes so creators stand left of annihilators (stable), with the Koszul sign.
/// Returns `None` when a fermion zero mode is present.
pub fn normal_order(ff: &FreeFields, modes: &[Mode]) -> Option<(Scalar, Vec<Mode>)> {
    if modes.iter().any(|&(g, n)| ff.is_odd(g) && n == 0) {
        return None;
    }
    let mut out: Vec<Mode> = Vec::with_capacity(modes.len());
    let mut sign = 1i64;
    // odd annihilators already placed; each odd creator moving left passes them
    let mut odd_ann_seen = 0usize;
    let mut ann: Vec<Mode> = Vec::new();
    for &md in modes {
        if md.1 < 0 {
            if ff.is_odd(md.0) && odd_ann_seen % 2 == 1 {
                sign = -sign;
            }
            out.push(md);
        } else {
            if ff.is_odd(md.0) {
                odd_ann_seen += 1;
            }
            ann.push(md);
        }
    }
    out.extend(ann);
    Some((Scalar::int(sign), out))
}

/// Mode-index cutoff for operators acting on states of doubled weight `<= h2_max`.
pub fn cutoff(h2_max: i64, n: i32) -> i32 {
    (h2_max as i32) + n.abs() + 2
}

/// Matter current modes `J_{A,n} = 1/2 M_ab sum_k :q^a_k q^b_{n-1-k}:` with `M = Omega T_A`.
pub fn matter_current(ff: &FreeFields, rep: &SymplecticRep, boson_offset: usize, a: usize, n: i32, h2_max: i64) -> Op {
    let omega: Vec<Vec<Scalar>> = rep.omega.iter().map(|r| r.iter().map(|x| Scalar::real(x.clone())).collect()).collect();
    let m = dmul(&omega, &rep.rep[a]);
    let cut = cutoff(h2_max, n);
    let half = Scalar::frac(1, 2);
    let mut terms = Vec::new();
    for i in 0..rep.dim {
        for j in 0..rep.dim {
            if m[i][j].is_zero() {
                continue;
            }
            let c = &half * &m[i][j];
            for k in -cut..=cut {
                let l = n - 1 - k;
                if l.abs() > cut {
                    continue;
                }
                let w = [((boson_offset + i) as u16, k), ((boson_offset + j) as u16, l)];
                let (s, w) = normal_order(ff, &w).unwrap();
                terms.push((&c * &s, w));
            }
        }
    }
    Op::from_terms(terms)
}

fn lower_form(p: &[Vec<Scalar>], gens: &[usize]) -> Vec<Vec<Scalar>> {
    use crate::linalg::{inverse, SMat};
    let sub: Vec<Vec<Scalar>> = gens.iter().map(|&a| gens.iter().map(|&b| p[a][b].clone()).collect()).collect();
    inverse(&SMat::from_dense(&sub)).expect("pairing must be invertible").to_dense()
}

/// Stress tensor modes `L_n` of every generator in the system.
pub fn stress_tensor(ff: &FreeFields, n: i32, h2_max: i64) -> Op {
    let cut = cutoff(h2_max, n);
    let half = Scalar::frac(1, 2);
    let mut terms = Vec::new();
    let bos: Vec<usize> = (0..ff.ngens()).filter(|&g| !ff.gens[g].odd).collect();
    let fer: Vec<usize> = (0..ff.ngens()).filter(|&g| ff.gens[g].odd).collect();
    if !bos.is_empty() {
        // 1/2 Omega_ab sum_k (-k-1) :q^b_{n-1-k} q^a_k:
        let om = lower_form(&ff.pairing, &bos);
        for (i, &a) in bos.iter().enumerate() {
            for (j, &b) in bos.iter().enumerate() {
                if om[i][j].is_zero() {
                    continue;
                }
                for k in -cut..=cut {
                    let l = n - 1 - k;
                    if l.abs() > cut {
                        continue;
                    }
                    let (s, w) = normal_order(ff, &[(b as u16, l), (a as u16, k)]).unwrap();
                    terms.push((&(&half * &om[i][j]) * &(&s * &Scalar::int((-k - 1) as i64)), w));
                }
            }
        }
    }
    if !fer.is_empty() {
        // 1/2 Omega_ab sum_k :eta^a_{n-k} eta^b_k:
        let om = lower_form(&ff.pairing, &fer);
        for (i, &a) in fer.iter().enumerate() {
            for (j, &b) in fer.iter().enumerate() {
                if om[i][j].is_zero() {
                    continue;
                }
                for k in -cut..=cut {
                    let l = n - k;
                    if l.abs() > cut {
                        continue;
                    }
                    if let Some((s, w)) = normal_order(ff, &[(a as u16, l), (b as u16, k)]) {
                        terms.push((&(&half * &om[i][j]) * &s, w));
                    }
                }
            }
        }
    }
    Op::from_terms(terms)
}

/// Ghost current zero mode `-f_ABC sum_{n != 0} (1/n) :eta^{-B}_{-n} eta^{+C}_n:`.
pub fn ghost_current_zero(ff: &FreeFields, gl: &GhostLayout, g: &LieAlgebra, a: usize, h2_max: i64) -> Op {
    let cut = cutoff(h2_max, 0);
    let mut terms = Vec::new();
    for b in 0..g.dim {
        for c in 0..g.dim {
            let f = g.f_low(a, b, c);
            if f.is_zero() {
                continue;
            }
            for n in (-cut..=cut).filter(|&n| n != 0) {
                let w = [(gl.gen(false, b), -n), (gl.gen(true, c), n)];
                let (s, w) = normal_order(ff, &w).unwrap();
                terms.push((&Scalar::real(-f.clone() / Rat::from_integer(n.into())) * &s, w));
            }
        }
    }
    Op::from_terms(terms)
}

/// BRST-type differentials `Q^+` (`plus = true`) and `Q^-`.
///
/// `currents(A, n)` must return the matter current mode `J_{A,n}`.
pub fn differential(
    ff: &FreeFields,
    gl: &GhostLayout,
    g: &LieAlgebra,
    plus: bool,
    h2_max: i64,
    currents: &dyn Fn(usize, i32) -> Op,
) -> Op {
    let cut = cutoff(h2_max, 0);
    let mut terms: Vec<(Scalar, Vec<Mode>)> = Vec::new();
    for n in (-cut..=cut).filter(|&n| n != 0) {
        let inv = Scalar::frac(1, n as i64);
        for a in 0..g.dim {
            let eta = Op::mode((gl.gen(plus, a), -n));
            let j = currents(a, n);
            terms.extend(eta.compose(&j).words.into_iter().map(|(c, w)| (&c * &inv, w)));
        }
    }
    for a in 0..g.dim {
        for b in 0..g.dim {
            for c in 0..g.dim {
                let f = g.f_low(a, b, c);
                if f.is_zero() {
                    continue;
                }
                for n in (-cut..=cut).filter(|&n| n != 0) {
                    for m in (-cut..=cut).filter(|&m| m != 0 && m != n) {
                        let w = [(gl.gen(plus, a), -n), (gl.gen(plus, b), m), (gl.gen(!plus, c), n - m)];
                        if let Some((s, w)) = normal_order(ff, &w) {
                            let coef = Scalar::real(f.clone() / Rat::from_integer((2 * m as i64 * n as i64).into()));
                            terms.push((&coef * &s, w));
                        }
                    }
                }
            }
        }
    }
    Op::from_terms(terms)
}

/// Vacuum coefficient of a state.
pub fn vacuum_coeff(s: &State) -> Scalar {
    s.get(&Vec::new()).cloned().unwrap_or_else(Scalar::zero)
}

/// Apply `[X, Y]_sign = XY - sign YX` to a state.
pub fn apply_bracket(ff: &FreeFields, x: &Op, y: &Op, sign: i64, s: &State) -> State {
    let xy = x.apply(ff, &y.apply(ff, s));
    let yx = y.apply(ff, &x.apply(ff, s));
    let mut out = xy;
    state_axpy(&mut out, &Scalar::int(-sign), &yx);
    out
}

/// Check `[X, Y]_sign == Z` on every basis state of weight `<= h2`; returns the first failing state.
pub fn check_relation(ff: &FreeFields, space: &GradedSpace, h2: i64, x: &Op, y: &Op, sign: i64, z: &Op) -> Option<Monomial> {
    for (gr, b) in &space.blocks {
        if gr.h2 > h2 {
            continue;
        }
        for m in &b.states {
            let s = basis_state(m);
            let lhs = apply_bracket(ff, x, y, sign, &s);
            let rhs = z.apply(ff, &s);
            if !state_sub(&lhs, &rhs).is_empty() {
                return Some(m.clone());
            }
        }
    }
    None
}

/// Level matrix `k_AB` from `[J_{A,1}, J_{B,-1}] |0>`.
pub fn extract_level(ff: &FreeFields, currents: &dyn Fn(usize, i32) -> Op, dim: usize) -> Vec<Vec<Scalar>> {
    let vac = basis_state(&vec![]);
    (0..dim)
        .map(|a| (0..dim).map(|b| vacuum_coeff(&apply_bracket(ff, &currents(a, 1), &currents(b, -1), 1, &vac))).collect())
        .collect()
}

/// Central charge from `[L_2, L_{-2}] |0> = (c/2) |0>`.
pub fn extract_central_charge(ff: &FreeFields) -> Scalar {
    let vac = basis_state(&vec![]);
    let l2 = stress_tensor(ff, 2, 4).prepared();
    let lm2 = stress_tensor(ff, -2, 4).prepared();
    let v = apply_bracket(ff, &l2, &lm2, 1, &vac);
    &vacuum_coeff(&v) * &Scalar::int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::load_preset;

    #[test]
    fn creation_then_annihilation() {
        let g = load_preset("sl2").unwrap();
        let ff = FreeFields::bosons(&SymplecticRep::doublets(&g, 1).unwrap());
        // q^1_0 q^2_{-1} |0> = Omega^{12} |0>
        let r = apply_mode(&ff, (0, 0), &vec![(1, -1)]);
        assert_eq!(r, vec![(vec![], ff.pairing[0][1].clone())]);
        let gh = FreeFields::ghosts(&g);
        // fermion creators anticommute
        let a = apply_mode(&gh, (0, -1), &vec![(3, -1)]);
        let b = apply_mode(&gh, (3, -1), &vec![(0, -1)]);
        assert_eq!(a[0].0, b[0].0);
        assert_eq!(a[0].1, -b[0].1.clone());
    }

    #[test]
    fn central_charges() {
        let g = load_preset("sl2").unwrap();
        let sb = FreeFields::bosons(&SymplecticRep::doublets(&g, 1).unwrap());
        assert_eq!(extract_central_charge(&sb), Scalar::int(-1));
        let u1 = FreeFields::ghosts(&load_preset("u1").unwrap());
        assert_eq!(extract_central_charge(&u1), Scalar::int(-2));
    }

    #[test]
    fn l0_is_weight() {
        let g = load_preset("sl2").unwrap();
        let ff = FreeFields::bosons(&SymplecticRep::doublets(&g, 1).unwrap()).tensor(&FreeFields::ghosts(&g));
        let sp = GradedSpace::enumerate(&ff, 3, 10_000).unwrap();
        let l0 = stress_tensor(&ff, 0, 3).prepared();
        for (gr, b) in &sp.blocks {
            for m in &b.states {
                let v = l0.apply(&ff, &basis_state(m));
                let mut want = State::new();
                state_add(&mut want, m.clone(), Scalar::frac(gr.h2, 2));
                assert_eq!(v, want, "{}", ff.fmt_monomial(m));
            }
        }
    }

    #[test]
    fn matter_level_and_affine() {
        let g = load_preset("sl2").unwrap();
        let rep = SymplecticRep::doublets(&g, 1).unwrap();
        let ff = FreeFields::bosons(&rep);
        let cur = |a: usize, n: i32| matter_current(&ff, &rep, 0, a, n, 4).prepared();
        let k = extract_level(&ff, &cur, 3);
        let sp = GradedSpace::enumerate(&ff, 3, 10_000).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for (m, n) in [(0, 0), (1, -1), (-1, 0), (2, -1)] {
                    let js: Vec<(Scalar, Op)> = (0..3).map(|c| (Scalar::real(g.f[a][b][c].clone()), cur(c, m + n))).collect();
                    let rhs = Op::sum(js.iter().map(|(c, o)| (c.clone(), o)));
                    let rhs = if m + n == 0 { rhs.add(&Op::identity().scale(&(&k[a][b] * &Scalar::int(m as i64)))) } else { rhs };
                    assert_eq!(check_relation(&ff, &sp, 1, &cur(a, m), &cur(b, n), 1, &rhs.prepared()), None, "{a} {b} {m} {n}");
                }
            }
        }
    }
}
