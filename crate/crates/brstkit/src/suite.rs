//! Grouped identity checks on a free-field system: mode algebra, level and
//! central charge, graded unitarity.

use crate::brst::{r_part, Check};
use crate::fock::{FreeFields, GradedSpace, Monomial};
use crate::lie::{LieAlgebra, SymplecticRep};
use crate::ops::{apply_mode, basis_state, check_relation, extract_central_charge, extract_level, matter_current, state_axpy, stress_tensor, Op, State};
use crate::scalar::Scalar;
use crate::unitarity::{
    check_adjoint_pair, check_bilinear_symmetry, check_hermitian, check_op_adjoint, check_positive_definite, check_quaternionic,
    check_spin_statistics, op_adjoint,
};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// A free-field system, optionally carrying the currents of a symplectic action.
pub struct System<'a> {
    pub name: String,
    pub ff: &'a FreeFields,
    /// Lie algebra and boson representation; the bosons must come first in `ff`.
    pub action: Option<(&'a LieAlgebra, &'a SymplecticRep)>,
}

fn check(name: impl Into<String>, r: Option<String>) -> Check {
    match r {
        None => Check::pass(name),
        Some(w) => Check::fail(name, w),
    }
}

fn first<T: Sync>(items: Vec<T>, f: impl Fn(&T) -> Option<String> + Sync + Send) -> Option<String> {
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().flatten().next()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Mode(u16, i32),
    L(i32),
    J(usize, i32),
}

/// Mode operators of a system with images memoized per basis monomial.
struct Modes<'a> {
    ff: &'a FreeFields,
    rep: Option<&'a SymplecticRep>,
    cut: i64,
    ops: HashMap<Key, Op>,
    memo: HashMap<(Key, Monomial), State>,
}

impl<'a> Modes<'a> {
    fn new(sys: &System<'a>, cut: i64) -> Self {
        Modes { ff: sys.ff, rep: sys.action.map(|x| x.1), cut, ops: HashMap::new(), memo: HashMap::new() }
    }

    fn op(&mut self, k: Key) -> &Op {
        let (ff, rep, cut) = (self.ff, self.rep, self.cut);
        self.ops.entry(k).or_insert_with(|| match k {
            Key::Mode(g, n) => Op::mode((g, n)),
            Key::L(m) => stress_tensor(ff, m, cut).prepared(),
            Key::J(a, n) => matter_current(ff, rep.expect("currents need a representation"), 0, a, n, cut).prepared(),
        })
    }

    fn apply(&mut self, k: Key, s: &State) -> State {
        let mut out = State::new();
        for (m, c) in s {
            if !self.memo.contains_key(&(k, m.clone())) {
                let ff = self.ff;
                let img = self.op(k).apply_monomial(ff, m);
                self.memo.insert((k, m.clone()), img);
            }
            state_axpy(&mut out, c, &self.memo[&(k, m.clone())]);
        }
        out
    }

    /// First basis state where `[X, Y]_sign != sum c_i Z_i + c_0`.
    fn relation(&mut self, states: &[&Monomial], x: Key, y: Key, sign: i64, rhs: &[(Scalar, Key)], c0: &Scalar) -> Option<Monomial> {
        {
            for &m in states {
                let s = basis_state(m);
                let ys = self.apply(y, &s);
                let mut lhs = self.apply(x, &ys);
                let xs = self.apply(x, &s);
                state_axpy(&mut lhs, &Scalar::int(-sign), &self.apply(y, &xs));
                state_axpy(&mut lhs, &-c0.clone(), &s);
                for (c, z) in rhs {
                    state_axpy(&mut lhs, &-c.clone(), &self.apply(*z, &s));
                }
                if !lhs.is_empty() {
                    return Some(m.clone());
                }
            }
        }
        None
    }
}

fn states_up_to(space: &GradedSpace, h2: i64, keep: impl Fn(&Monomial) -> bool) -> Vec<&Monomial> {
    space.blocks.iter().filter(|(g, _)| g.h2 <= h2).flat_map(|(_, b)| b.states.iter()).filter(|m| keep(m)).collect()
}

fn fmt_fail(sys: &System, what: String, m: Option<Monomial>) -> Option<String> {
    m.map(|m| format!("{what} on {}", sys.ff.fmt_monomial(&m)))
}

/// Mode indices mapping some state of doubled weight `<= h2` to another one.
fn window(h2: i64) -> std::ops::RangeInclusive<i32> {
    let w = (h2 as i32 + 1) / 2;
    -w..=w - 1
}

/// Mode pairs `(m, n)` with `|m|, |n| <= 1`, plus `(2, -2)` and `(-2, 2)` for the central terms.
fn pairs() -> Vec<(i32, i32)> {
    let mut v: Vec<(i32, i32)> = (-1..=1).flat_map(|m| (-1..=1).map(move |n| (m, n))).collect();
    v.extend([(2, -2), (-2, 2)]);
    v
}

fn merge(mut v: Vec<(Monomial, Scalar)>) -> Vec<(Monomial, Scalar)> {
    v.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Monomial, Scalar)> = Vec::new();
    for (m, c) in v {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += &c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Canonical (anti)commutators of every pair of generator modes, on every basis state.
pub fn generator_brackets(sys: &System, space: &GradedSpace, h2: i64) -> Vec<Check> {
    let ff = sys.ff;
    let modes: Vec<(u16, i32)> = (0..ff.ngens() as u16).flat_map(|g| window(h2).map(move |n| (g, n))).collect();
    let family = |i: usize, j: usize| match (ff.is_odd(modes[i].0), ff.is_odd(modes[j].0)) {
        (false, false) => 0,
        (true, true) => 1,
        _ => 2,
    };
    let mut found: [Option<String>; 3] = [None, None, None];
    for (gr, b) in &space.blocks {
        if gr.h2 > h2 {
            continue;
        }
        for m in &b.states {
            let imgs: Vec<Vec<(Monomial, Scalar)>> = modes.iter().map(|&x| apply_mode(ff, x, m)).collect();
            for i in 0..modes.len() {
                for j in i..modes.len() {
                    let f = family(i, j);
                    if found[f].is_some() {
                        continue;
                    }
                    let (x, y) = (modes[i], modes[j]);
                    let sign = if f == 1 { Scalar::one() } else { -Scalar::one() };
                    let mut acc: Vec<(Monomial, Scalar)> = Vec::new();
                    for (m1, c1) in &imgs[j] {
                        acc.extend(apply_mode(ff, x, m1).into_iter().map(|(m2, c2)| (m2, c1 * &c2)));
                    }
                    for (m1, c1) in &imgs[i] {
                        acc.extend(apply_mode(ff, y, m1).into_iter().map(|(m2, c2)| (m2, &sign * &(c1 * &c2))));
                    }
                    acc.push((m.clone(), -ff.bracket(x, y)));
                    if !merge(acc).is_empty() {
                        let (gx, gy) = (&ff.gens[x.0 as usize].name, &ff.gens[y.0 as usize].name);
                        found[f] = Some(format!("[{gx}_{}, {gy}_{}] on {}", x.1, y.1, ff.fmt_monomial(m)));
                    }
                }
            }
        }
    }
    let present = |f: usize| (0..modes.len()).any(|i| (i..modes.len()).any(|j| family(i, j) == f));
    ["boson brackets", "fermion brackets", "boson-fermion brackets"]
        .iter()
        .enumerate()
        .filter(|(f, _)| present(*f))
        .map(|(f, name)| check(format!("{}: {name}", sys.name), found[f].clone()))
        .collect()
}

/// Virasoro algebra and the primary relations of the generators.
pub fn virasoro(sys: &System, space: &GradedSpace, h2: i64) -> Vec<Check> {
    let ff = sys.ff;
    let c = extract_central_charge(ff);
    let mut md = Modes::new(sys, h2 + 4);
    let states = states_up_to(space, h2, |_| true);
    let mut found = None;
    'vir: for m in -2..=2 {
        for n in -2..=2 {
            let mut c0 = Scalar::zero();
            if m + n == 0 {
                c0 = &c * &Scalar::frac((m as i64).pow(3) - m as i64, 12);
            }
            let r = md.relation(&states, Key::L(m), Key::L(n), 1, &[(Scalar::int((m - n) as i64), Key::L(m + n))], &c0);
            found = fmt_fail(sys, format!("[L_{m}, L_{n}]"), r);
            if found.is_some() {
                break 'vir;
            }
        }
    }
    let mut out = vec![check(format!("{}: Virasoro algebra at c = {c}", sys.name), found)];
    let mut found = None;
    'gen: for g in 0..ff.ngens() {
        for m in -1..=1 {
            for n in window(h2) {
                // boson q_n has standard index n + 1/2 and weight 1/2; fermion eta_n has index n and weight 1
                let coef = if ff.gens[g].odd { Scalar::int(-n as i64) } else { Scalar::frac(-(m as i64) - 2 * n as i64 - 1, 2) };
                let r = md.relation(&states, Key::L(m), Key::Mode(g as u16, n), 1, &[(coef, Key::Mode(g as u16, m + n))], &Scalar::zero());
                found = fmt_fail(sys, format!("[L_{m}, {}_{n}]", ff.gens[g].name), r);
                if found.is_some() {
                    break 'gen;
                }
            }
        }
    }
    out.push(check(format!("{}: generators are primary", sys.name), found));
    out
}

/// Affine brackets of the matter currents at their extracted level, and their action on bosons.
pub fn affine(sys: &System, space: &GradedSpace, h2: i64) -> Vec<Check> {
    let Some((g, rep)) = sys.action else { return Vec::new() };
    let ff = sys.ff;
    let mut md = Modes::new(sys, h2 + 4);
    for a in 0..g.dim {
        md.op(Key::J(a, 1));
        md.op(Key::J(a, -1));
    }
    let ops = &md.ops;
    let k = extract_level(ff, &|a, n| ops[&Key::J(a, n)].clone(), g.dim);
    // the currents touch only the bosons (generators 0..rep.dim) and every other generator
    // supercommutes with them, so the identities hold on all states iff on boson-only states
    let states = states_up_to(space, h2, |m| m.iter().all(|&(x, _)| (x as usize) < rep.dim));
    let mut found = None;
    'aff: for a in 0..g.dim {
        for b in a..g.dim {
            for &(m, n) in &pairs() {
                {
                    let rhs: Vec<(Scalar, Key)> = (0..g.dim).filter(|&c| !g.f[a][b][c].is_zero()).map(|c| (Scalar::real(g.f[a][b][c].clone()), Key::J(c, m + n))).collect();
                    let c0 = if m + n == 0 { &k[a][b] * &Scalar::int(m as i64) } else { Scalar::zero() };
                    let r = md.relation(&states, Key::J(a, m), Key::J(b, n), 1, &rhs, &c0);
                    found = fmt_fail(sys, format!("[J{}_{m}, J{}_{n}]", a + 1, b + 1), r);
                    if found.is_some() {
                        break 'aff;
                    }
                }
            }
        }
    }
    let mut out = vec![check(format!("{}: affine brackets", sys.name), found)];
    let mut found = None;
    'rot: for a in 0..g.dim {
        for b in 0..rep.dim {
            for m in -1..=1 {
                for n in window(h2) {
                    // [J_{A,m}, q^b_n] = -(T_A)^b_c q^c_{m+n}
                    let rhs: Vec<(Scalar, Key)> = (0..rep.dim).filter(|&c| !rep.rep[a][b][c].is_zero()).map(|c| (-rep.rep[a][b][c].clone(), Key::Mode(c as u16, m + n))).collect();
                    let r = md.relation(&states, Key::J(a, m), Key::Mode(b as u16, n), 1, &rhs, &Scalar::zero());
                    found = fmt_fail(sys, format!("[J{}_{m}, q{}_{n}]", a + 1, b + 1), r);
                    if found.is_some() {
                        break 'rot;
                    }
                }
            }
        }
    }
    out.push(check(format!("{}: currents rotate the bosons", sys.name), found));
    let mut found = None;
    'prim: for a in 0..g.dim {
        for m in -1..=1 {
            for n in -1..=1 {
                let r = md.relation(&states, Key::L(m), Key::J(a, n), 1, &[(Scalar::int(-n as i64), Key::J(a, m + n))], &Scalar::zero());
                found = fmt_fail(sys, format!("[L_{m}, J{}_{n}]", a + 1), r);
                if found.is_some() {
                    break 'prim;
                }
            }
        }
    }
    out.push(check(format!("{}: currents are primary of weight 1", sys.name), found));
    out
}

/// All mode-algebra identities of a system on states of doubled weight `<= h2`.
pub fn mode_algebra(sys: &System, h2: i64) -> Result<Vec<Check>, crate::fock::FockError> {
    let space = GradedSpace::enumerate(sys.ff, h2, 1_000_000)?;
    let mut out = generator_brackets(sys, &space, h2);
    out.extend(virasoro(sys, &space, h2));
    out.extend(affine(sys, &space, h2));
    Ok(out)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Invariants {
    /// `k_AB` as a multiple of `K_AB`, if proportional.
    pub level_over_k: Option<String>,
    pub level: Vec<Vec<String>>,
    pub central_charge: String,
}

/// Level of the matter currents and central charge of the whole system.
pub fn invariants(ff: &FreeFields, action: Option<(&LieAlgebra, &SymplecticRep)>) -> Invariants {
    let central_charge = extract_central_charge(ff).to_string();
    let Some((g, rep)) = action else {
        return Invariants { level_over_k: Some("0".into()), level: Vec::new(), central_charge };
    };
    let cur = |a: usize, n: i32| matter_current(ff, rep, 0, a, n, 4).prepared();
    let k = extract_level(ff, &cur, g.dim);
    let mut ratio: Option<Scalar> = None;
    let mut prop = true;
    for a in 0..g.dim {
        for b in 0..g.dim {
            let kk = Scalar::real(g.k[a][b].clone());
            if kk.is_zero() {
                prop &= k[a][b].is_zero();
                continue;
            }
            let r = &k[a][b] * &kk.inv();
            match &ratio {
                None => ratio = Some(r),
                Some(x) => prop &= *x == r,
            }
        }
    }
    Invariants {
        level_over_k: if prop { ratio.map(|r| r.to_string()) } else { None },
        level: k.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        central_charge,
    }
}

fn witness(name: &str, r: Result<(), crate::unitarity::Witness>) -> Check {
    match r {
        Ok(()) => Check::pass(name),
        Err(w) => Check::fail(name, format!("{}: {}", w.state, w.detail)),
    }
}

/// Graded-unitarity checks on every basis state and Gram block of `space`.
pub fn unitarity(sys: &System, space: &GradedSpace) -> Vec<Check> {
    let ff = sys.ff;
    let p = |s: &str| format!("{}: {s}", sys.name);
    let mut out = vec![
        witness(&p("spin-statistics"), check_spin_statistics(ff, space)),
        witness(&p("rho^2 = s and rho sigma = sigma^-1 rho"), check_quaternionic(ff, space)),
        witness(&p("Gram blocks Hermitian and equal to the invariant form"), check_hermitian(ff, space, 300)),
        witness(&p("bilinear form graded symmetric"), check_bilinear_symmetry(ff, space, 400)),
    ];
    let bad: Vec<String> = check_positive_definite(ff, space)
        .into_iter()
        .filter(|v| v.verdict != "positive")
        .map(|v| format!("{} {}: {}", v.grade, v.verdict, v.witness.unwrap_or_default()))
        .collect();
    out.push(check(p("Gram blocks positive definite"), bad.into_iter().next()));
    let modes: Vec<(u16, i32)> = (0..ff.ngens() as u16).flat_map(|g| [(g, -2), (g, -1), (g, 0), (g, 1)]).collect();
    let w = first(modes, |&md| check_op_adjoint(ff, space, &Op::mode(md)).err().map(|w| format!("{}: {}", w.state, w.detail)));
    out.push(check(p("generator adjoint table"), w));
    if let Some((g, rep)) = sys.action {
        out.extend(shortening(sys, g, rep, space));
    }
    out
}

/// R-degree components of the currents: `J = J^[1] + J^[0] + J^[-1]`, `J^[1]_{n >= 0} = 0`,
/// `(J^[+-1]_{A,n})^dagger = J^[-+1]_{A,-n}` and `(J^[0]_{A,n})^dagger = -J^[0]_{A,-n}`
/// (compact basis, conjugation trivial on the Lie index).
pub fn shortening(sys: &System, g: &LieAlgebra, rep: &SymplecticRep, space: &GradedSpace) -> Vec<Check> {
    let ff = sys.ff;
    let h2 = space.blocks.keys().map(|g| g.h2).max().unwrap_or(0);
    let cur = |a: usize, n: i32| matter_current(ff, rep, 0, a, n, h2 + 4);
    let p = |s: &str| format!("{}: {s}", sys.name);
    let mut out = Vec::new();
    let mut bad_split = None;
    let mut bad_top = None;
    for a in 0..g.dim {
        for n in -2..=2 {
            let j = cur(a, n);
            let parts: Vec<Op> = [2, 0, -2].iter().map(|&r| r_part(ff, &j, r)).collect();
            let total = parts.iter().fold(Op::zero(), |acc, x| acc.add(x));
            if bad_split.is_none() && total.len() != j.len() {
                bad_split = Some(format!("J{}_{n} has words outside R-shift {{1, 0, -1}}", a + 1));
            }
            if bad_top.is_none() && n >= 0 && !parts[0].is_empty() {
                bad_top = Some(format!("J{}_{n}^[1] != 0", a + 1));
            }
        }
    }
    out.push(check(p("currents split into R-degrees 1, 0, -1"), bad_split));
    out.push(check(p("J^[1]_{A,n} = 0 for n >= 0"), bad_top));
    let mut work = Vec::new();
    for a in 0..g.dim {
        for n in -1..=1 {
            for (r, rr, sign) in [(2, -2, 1), (0, 0, -1), (-2, 2, 1)] {
                work.push((a, n, r, rr, sign));
            }
        }
    }
    let w = first(work, |&(a, n, r, rr, sign)| {
        let x = r_part(ff, &cur(a, n), r).prepared();
        let y = r_part(ff, &cur(a, -n), rr).scale(&Scalar::int(sign)).prepared();
        let table = op_adjoint(ff, &x).prepared();
        check_adjoint_pair(ff, space, &|s| x.apply(ff, s), &|s| y.apply(ff, s))
            .err()
            .map(|w| format!("J{}_{n}^[{}]: {}: {}", a + 1, r / 2, w.state, w.detail))
            .or_else(|| {
                let d = table.add(&y.scale(&Scalar::int(-1)));
                check_relation(ff, space, h2, &d.prepared(), &Op::identity(), 0, &Op::zero())
                    .map(|m| format!("J{}_{n}^[{}] adjoint table differs on {}", a + 1, r / 2, ff.fmt_monomial(&m)))
            })
    });
    out.push(check(p("(J^[p]_{A,n})^dagger = (-1)^(p+1) J^[-p]_{A,-n}"), w));
    out
}
