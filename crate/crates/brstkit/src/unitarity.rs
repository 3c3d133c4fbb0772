//! Conjugation, phases, invariant forms and mode adjoints on free-field Fock spaces.

use crate::fock::{FreeFields, Grade, GradedSpace, Mode, Monomial};
use crate::linalg::{first_nonpositive_minor, SMat};
use crate::ops::{apply_mode_state, basis_state, state_add, vacuum_coeff, Op, State};
use crate::scalar::Scalar;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::HashMap;

/// Mode-number profile; monomials with different profiles are orthogonal.
pub fn profile(ff: &FreeFields, m: &Monomial) -> Vec<(bool, i32)> {
    let mut p: Vec<(bool, i32)> = m.iter().map(|&(g, n)| (ff.is_odd(g), n)).collect();
    p.sort_unstable();
    p
}

/// `sigma = i^{2R}`.
pub fn sigma(g: &Grade) -> Scalar {
    Scalar::i_pow(g.r2)
}

pub fn parity_sign(ff: &FreeFields, m: &Monomial) -> Scalar {
    if ff.parity(m) == 1 {
        Scalar::int(-1)
    } else {
        Scalar::one()
    }
}

fn conj_state(s: &State) -> State {
    s.iter().map(|(m, c)| (m.clone(), c.conj())).collect()
}

/// Antilinear conjugation on a monomial, via `rho(x_n y) = (-1)^{|x||y|} rho(x)_n rho(y)`.
pub fn rho_monomial(ff: &FreeFields, m: &Monomial) -> State {
    let mut acc = basis_state(&vec![]);
    // build from the right: rho(c_k |0>), then rho(c_{k-1} c_k |0>), ...
    let mut odd_right = 0usize;
    for &(g, n) in m.iter().rev() {
        let mut next = State::new();
        for (h, c) in ff.conj[g as usize].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let part = apply_mode_state(ff, (h as u16, n), &acc);
            for (mm, v) in part {
                state_add(&mut next, mm, c * &v);
            }
        }
        if ff.is_odd(g) && odd_right % 2 == 1 {
            next = next.into_iter().map(|(k, v)| (k, -v)).collect();
        }
        if ff.is_odd(g) {
            odd_right += 1;
        }
        acc = next;
    }
    acc
}

pub fn rho(ff: &FreeFields, s: &State) -> State {
    let mut out = State::new();
    for (m, c) in s {
        for (mm, v) in rho_monomial(ff, m) {
            state_add(&mut out, mm, &c.conj() * &v);
        }
    }
    out
}

pub fn apply_sigma(ff: &FreeFields, s: &State) -> State {
    s.iter().map(|(m, c)| (m.clone(), c * &sigma(&ff.grade(m)))).collect()
}

pub fn apply_sigma_inv(ff: &FreeFields, s: &State) -> State {
    s.iter().map(|(m, c)| (m.clone(), c * &sigma(&ff.grade(m)).conj())).collect()
}

/// `s = (-1)^{2R}`.
pub fn apply_s(ff: &FreeFields, s: &State) -> State {
    s.iter().map(|(m, c)| (m.clone(), c * &Scalar::i_pow(2 * ff.grade(m).r2))).collect()
}

/// Mode transposed under the invariant bilinear form, with its phase.
fn transpose_mode(ff: &FreeFields, (g, n): Mode) -> (Mode, Scalar) {
    if ff.is_odd(g) {
        ((g, -n), Scalar::one())
    } else {
        ((g, -1 - n), Scalar::i())
    }
}

/// Invariant bilinear form `(x, y)` by moving modes of `x` across to `y` one at a time.
pub fn bilinear_monomial(ff: &FreeFields, x: &Monomial, y: &State) -> Scalar {
    let Some((&first, rest)) = x.split_first() else {
        return vacuum_coeff(y);
    };
    let rest: Monomial = rest.to_vec();
    let (t, phase) = transpose_mode(ff, first);
    let sign = if ff.is_odd(first.0) && ff.parity(&rest) == 1 { Scalar::int(-1) } else { Scalar::one() };
    let ty = apply_mode_state(ff, t, y);
    if ty.is_empty() {
        return Scalar::zero();
    }
    &(&sign * &phase) * &bilinear_monomial(ff, &rest, &ty)
}

pub fn bilinear(ff: &FreeFields, x: &State, y: &State) -> Scalar {
    let mut s = Scalar::zero();
    for (m, c) in x {
        s += c * &bilinear_monomial(ff, m, y);
    }
    s
}

/// `<x|y> = ((sigma rho) x, y)`.
pub fn hermitian_via_form(ff: &FreeFields, x: &State, y: &State) -> Scalar {
    bilinear(ff, &apply_sigma(ff, &rho(ff, x)), y)
}

/// Adjoint of a single mode from the creation/annihilation table.
pub fn mode_adjoint(ff: &FreeFields, (g, n): Mode) -> Op {
    let odd = ff.is_odd(g);
    if odd && n == 0 {
        return Op::zero();
    }
    let (target, sign) = match (odd, n < 0) {
        (false, true) => (-n - 1, Scalar::one()),
        (false, false) => (-n - 1, Scalar::int(-1)),
        (true, true) => (-n, Scalar::one()),
        (true, false) => (-n, Scalar::int(-1)),
    };
    let terms = ff.adj[g as usize]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(h, c)| (&sign * c, vec![(h as u16, target)]))
        .collect();
    Op::from_terms(terms)
}

/// Adjoint of a word operator (antilinear in coefficients, reversed order).
pub fn op_adjoint(ff: &FreeFields, op: &Op) -> Op {
    let mut terms = Vec::new();
    for (c, w) in &op.words {
        let mut acc = Op::from_terms(vec![(c.conj(), vec![])]);
        for &md in w.iter() {
            // (a b)^dagger = b^dagger a^dagger: accumulate left factors on the right
            acc = mode_adjoint(ff, md).compose(&acc);
        }
        terms.extend(acc.words);
    }
    Op::from_terms(terms)
}

/// `<m1|m2>` from the adjoint table.
pub fn hermitian_monomial(ff: &FreeFields, m1: &Monomial, m2: &Monomial) -> Scalar {
    let mut s = basis_state(m2);
    for &md in m1 {
        s = mode_adjoint(ff, md).apply(ff, &s);
        if s.is_empty() {
            return Scalar::zero();
        }
    }
    vacuum_coeff(&s)
}

/// Hermitian product of sparse states using the adjoint table, pairing only equal profiles.
pub fn hermitian(ff: &FreeFields, x: &State, y: &State) -> Scalar {
    let mut by_prof: HashMap<Vec<(bool, i32)>, Vec<(&Monomial, &Scalar)>> = HashMap::new();
    for (m, c) in y {
        by_prof.entry(profile(ff, m)).or_default().push((m, c));
    }
    let mut s = Scalar::zero();
    for (m1, c1) in x {
        if let Some(list) = by_prof.get(&profile(ff, m1)) {
            for (m2, c2) in list {
                let h = hermitian_monomial(ff, m1, m2);
                if !h.is_zero() {
                    s += &(&c1.conj() * c2) * &h;
                }
            }
        }
    }
    s
}

/// Gram matrix of one graded block, from the adjoint table.
pub fn gram_block(ff: &FreeFields, states: &[Monomial]) -> SMat {
    let n = states.len();
    let mut groups: HashMap<Vec<(bool, i32)>, Vec<usize>> = HashMap::new();
    for (i, m) in states.iter().enumerate() {
        groups.entry(profile(ff, m)).or_default().push(i);
    }
    let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
    for idx in groups.values() {
        for &i in idx {
            for &j in idx {
                let h = hermitian_monomial(ff, &states[i], &states[j]);
                if !h.is_zero() {
                    rows[i].push((j, h));
                }
            }
        }
    }
    for r in rows.iter_mut() {
        r.sort_by_key(|e| e.0);
    }
    SMat { nrows: n, ncols: n, rows }
}

/// Gram matrix of one block computed independently through the bilinear form.
pub fn gram_block_via_form(ff: &FreeFields, states: &[Monomial]) -> SMat {
    let dense: Vec<Vec<Scalar>> = states
        .iter()
        .map(|x| {
            let sx = apply_sigma(ff, &rho_monomial(ff, x));
            states.iter().map(|y| bilinear(ff, &sx, &basis_state(y))).collect()
        })
        .collect();
    SMat::from_dense(&dense)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct GradeVerdict {
    pub grade: String,
    pub dim: usize,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Positive-definiteness per grade from leading principal minors.
pub fn check_positive_definite(ff: &FreeFields, space: &GradedSpace) -> Vec<GradeVerdict> {
    space
        .blocks
        .iter()
        .map(|(g, b)| {
            let gram = gram_block(ff, &b.states);
            match first_nonpositive_minor(&gram) {
                None => GradeVerdict { grade: g.to_string(), dim: b.len(), verdict: "positive".into(), witness: None },
                Some((k, minor)) => GradeVerdict {
                    grade: g.to_string(),
                    dim: b.len(),
                    verdict: if minor.is_zero() { "degenerate".into() } else { "negative".into() },
                    witness: Some(format!("leading minor {} = {} (state {})", k, minor, ff.fmt_monomial(&b.states[k - 1]))),
                },
            }
        })
        .collect()
}

/// A failing basis state together with a description.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub state: String,
    pub detail: String,
}

fn witness(ff: &FreeFields, m: &Monomial, detail: impl Into<String>) -> Witness {
    Witness { state: ff.fmt_monomial(m), detail: detail.into() }
}

/// `(-1)^{|x|} = (-1)^{2(h+R)}` on every basis state.
pub fn check_spin_statistics(ff: &FreeFields, space: &GradedSpace) -> Result<(), Witness> {
    for (g, b) in &space.blocks {
        for m in &b.states {
            if ff.parity(m) as i64 != (g.h2 + g.r2).rem_euclid(2) {
                return Err(witness(ff, m, format!("parity {} at {}", ff.parity(m), g)));
            }
        }
    }
    Ok(())
}

/// `rho^2 = s` and `rho sigma = sigma^{-1} rho` on every basis state.
pub fn check_quaternionic(ff: &FreeFields, space: &GradedSpace) -> Result<(), Witness> {
    for b in space.blocks.values() {
        for m in &b.states {
            let x = basis_state(m);
            let rr = rho(ff, &rho(ff, &x));
            if rr != apply_s(ff, &x) {
                return Err(witness(ff, m, "rho^2 != s"));
            }
            if rho(ff, &apply_sigma(ff, &x)) != apply_sigma_inv(ff, &rho(ff, &x)) {
                return Err(witness(ff, m, "rho sigma != sigma^-1 rho"));
            }
        }
    }
    Ok(())
}

/// Gram blocks are Hermitian and agree with the form built from `sigma rho`.
pub fn check_hermitian(ff: &FreeFields, space: &GradedSpace, cross_check_dim: usize) -> Result<(), Witness> {
    for (g, b) in &space.blocks {
        let gram = gram_block(ff, &b.states);
        if gram.dagger() != gram {
            let (i, j, _) = gram.sub(&gram.dagger()).first_nonzero().unwrap();
            return Err(witness(ff, &b.states[i], format!("not Hermitian against {} at {}", ff.fmt_monomial(&b.states[j]), g)));
        }
        if b.len() <= cross_check_dim {
            let other = gram_block_via_form(ff, &b.states);
            if other != gram {
                let (i, j, _) = gram.sub(&other).first_nonzero().unwrap();
                return Err(witness(ff, &b.states[i], format!("adjoint table and invariant form disagree against {} at {}", ff.fmt_monomial(&b.states[j]), g)));
            }
        }
    }
    Ok(())
}

/// `(x, y) = (-1)^{|x||y| + 2h} (y, x)` on each block.
pub fn check_bilinear_symmetry(ff: &FreeFields, space: &GradedSpace, max_dim: usize) -> Result<(), Witness> {
    let all: Vec<(&Grade, &Monomial)> = space.blocks.iter().flat_map(|(g, b)| b.states.iter().map(move |m| (g, m))).collect();
    let mut by_h: HashMap<i64, Vec<&Monomial>> = HashMap::new();
    for (g, m) in &all {
        by_h.entry(g.h2).or_default().push(m);
    }
    for (h2, ms) in by_h {
        if ms.len() > max_dim {
            continue;
        }
        for x in &ms {
            for y in &ms {
                let a = bilinear_monomial(ff, x, &basis_state(y));
                let b = bilinear_monomial(ff, y, &basis_state(x));
                let e = (ff.parity(x) * ff.parity(y)) as i64 + h2;
                let want = if e % 2 == 1 { -b } else { b };
                if a != want {
                    return Err(witness(ff, x, format!("symmetry fails against {}", ff.fmt_monomial(y))));
                }
            }
        }
    }
    Ok(())
}

/// `<X m1 | m2> = <m1 | Y m2>` for all basis pairs with `h <= h2_max`.
pub fn check_adjoint_pair(
    ff: &FreeFields,
    space: &GradedSpace,
    x: &dyn Fn(&State) -> State,
    y: &dyn Fn(&State) -> State,
) -> Result<(), Witness> {
    let basis: Vec<&Monomial> = space.blocks.values().flat_map(|b| b.states.iter()).collect();
    let mut by_prof: HashMap<Vec<(bool, i32)>, Vec<usize>> = HashMap::new();
    for (i, m) in basis.iter().enumerate() {
        by_prof.entry(profile(ff, m)).or_default().push(i);
    }
    let images: Vec<State> = basis.iter().map(|m| x(&basis_state(m))).collect();
    // profile of each image monomial -> sources
    let mut hit: HashMap<Vec<(bool, i32)>, Vec<usize>> = HashMap::new();
    for (i, s) in images.iter().enumerate() {
        for m in s.keys() {
            hit.entry(profile(ff, m)).or_default().push(i);
        }
    }
    for m2 in &basis {
        let v = y(&basis_state(m2));
        let mut cand: Vec<usize> = hit.get(&profile(ff, m2)).cloned().unwrap_or_default();
        for m in v.keys() {
            if let Some(l) = by_prof.get(&profile(ff, m)) {
                cand.extend(l);
            }
        }
        cand.sort_unstable();
        cand.dedup();
        let s2 = basis_state(m2);
        for i in cand {
            let lhs = hermitian(ff, &images[i], &s2);
            let rhs = hermitian(ff, &basis_state(basis[i]), &v);
            if lhs != rhs {
                return Err(witness(ff, basis[i], format!("<X x|y> = {lhs} but <x|X^dag y> = {rhs} for y = {}", ff.fmt_monomial(m2))));
            }
        }
    }
    Ok(())
}

/// Same as [`check_adjoint_pair`] with the table adjoint of a word operator.
pub fn check_op_adjoint(ff: &FreeFields, space: &GradedSpace, op: &Op) -> Result<(), Witness> {
    let adj = op_adjoint(ff, op).prepared();
    let op = op.clone().prepared();
    check_adjoint_pair(ff, space, &|s| op.apply(ff, s), &|s| adj.apply(ff, s))
}

/// Conjugate-linear helper used by tests of `rho`.
pub fn conj_coeffs(s: &State) -> State {
    conj_state(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{load_preset, SymplecticRep};

    fn sb() -> FreeFields {
        FreeFields::bosons(&SymplecticRep::doublets(&load_preset("sl2").unwrap(), 1).unwrap())
    }

    #[test]
    fn gram_of_single_boson() {
        let ff = sb();
        assert_eq!(hermitian_monomial(&ff, &vec![(0, -1)], &vec![(0, -1)]), Scalar::one());
        assert_eq!(hermitian_monomial(&ff, &vec![], &vec![]), Scalar::one());
    }

    #[test]
    fn rho_squares_to_parity() {
        let g = load_preset("sl2").unwrap();
        let ff = sb().tensor(&FreeFields::ghosts(&g));
        let sp = GradedSpace::enumerate(&ff, 3, 10_000).unwrap();
        check_quaternionic(&ff, &sp).unwrap();
        check_spin_statistics(&ff, &sp).unwrap();
    }

    #[test]
    fn two_gram_constructions_agree() {
        let g = load_preset("sl2").unwrap();
        let ff = sb().tensor(&FreeFields::ghosts(&g));
        let sp = GradedSpace::enumerate(&ff, 3, 10_000).unwrap();
        check_hermitian(&ff, &sp, 200).unwrap();
        check_bilinear_symmetry(&ff, &sp, 400).unwrap();
        assert!(check_positive_definite(&ff, &sp).iter().all(|v| v.verdict == "positive"));
    }

    #[test]
    fn mode_and_current_adjoints() {
        use crate::ops::matter_current;
        let g = load_preset("sl2").unwrap();
        let rep = SymplecticRep::doublets(&g, 1).unwrap();
        let ff = FreeFields::bosons(&rep).tensor(&FreeFields::ghosts(&g));
        let sp = GradedSpace::enumerate(&ff, 3, 10_000).unwrap();
        for md in [(0u16, -1), (1, 0), (1, -2), (2, -1), (5, 1), (3, 2)] {
            check_op_adjoint(&ff, &sp, &Op::mode(md)).unwrap();
        }
        for a in 0..3 {
            for n in [-1, 0, 1, 2] {
                let j = matter_current(&ff, &rep, 0, a, n, 3).prepared();
                let jm = matter_current(&ff, &rep, 0, a, -n, 3).prepared();
                check_adjoint_pair(&ff, &sp, &|s| j.apply(&ff, s), &|s| {
                    let t = jm.apply(&ff, &apply_sigma(&ff, s));
                    apply_sigma_inv(&ff, &t).into_iter().map(|(m, c)| (m, -c)).collect()
                })
                .unwrap();
            }
            let jstate = matter_current(&ff, &rep, 0, a, -1, 3).apply(&ff, &basis_state(&vec![]));
            assert_eq!(rho(&ff, &jstate), jstate);
        }
    }
}
