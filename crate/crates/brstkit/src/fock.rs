//! Free-field generators, normal-ordered monomial states and graded bases.
//!
//! Conventions: a boson `q^a` has modes `q^a_n` with `[q^a_n, q^b_m] = P^ab d(n+m+1)`;
//! creation modes are `n <= -1` with weight `-n - 1/2`. A fermion `eta^a` has
//! `[eta^a_n, eta^b_m] = n P^ab d(n+m)`; creation modes `n <= -1` with weight `-n`.
//! All weights are stored doubled.

use crate::lie::{LieAlgebra, SymplecticRep};
use crate::scalar::{Rat, Scalar};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub type Mode = (u16, i32);
/// Canonically ordered creation modes acting on the vacuum.
pub type Monomial = Vec<Mode>;

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub odd: bool,
    pub d: i64,
}

/// Which generators form the ghost system `Sf[C^2 (x) g]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GhostLayout {
    pub offset: usize,
    pub dim_g: usize,
}

impl GhostLayout {
    /// Generator index of `eta^{alpha, A}` with `plus = (alpha == +)`.
    pub fn gen(&self, plus: bool, a: usize) -> u16 {
        (self.offset + if plus { 0 } else { self.dim_g } + a) as u16
    }
}

/// A tensor product of symplectic boson and fermion systems.
#[derive(Clone, Debug)]
pub struct FreeFields {
    pub gens: Vec<Generator>,
    /// Bracket matrix `P^ab` (zero between opposite parities).
    pub pairing: Vec<Vec<Scalar>>,
    /// Antilinear conjugation on generators: `rho(x^g) = sum_h conj[g][h] x^h`.
    pub conj: Vec<Vec<Scalar>>,
    /// Adjoint table: `(x^g_creation)^dagger = sum_h adj[g][h] x^h_annihilation`.
    pub adj: Vec<Vec<Scalar>>,
    pub n_bosons: usize,
    pub ghosts: Option<GhostLayout>,
    /// Partners: for each generator, the generators it pairs with.
    partners: Vec<Vec<(u16, Scalar)>>,
}

impl FreeFields {
    fn finish(mut self) -> Self {
        let n = self.gens.len();
        self.partners = (0..n)
            .map(|g| (0..n).filter(|&h| !self.pairing[g][h].is_zero()).map(|h| (h as u16, self.pairing[g][h].clone())).collect())
            .collect();
        self
    }

    pub fn empty() -> Self {
        FreeFields { gens: vec![], pairing: vec![], conj: vec![], adj: vec![], n_bosons: 0, ghosts: None, partners: vec![] }
    }

    /// `Sb[V]` from a symplectic representation: `P = Omega^-1`,
    /// `rho(q^a) = -Omega_ab q^b`, `(q^a_{-n-1})^dagger = Omega_ab q^b_n`.
    pub fn bosons(rep: &SymplecticRep) -> Self {
        let n = rep.dim;
        let s = |m: &Vec<Vec<Rat>>, c: i64| -> Vec<Vec<Scalar>> { m.iter().map(|r| r.iter().map(|x| Scalar::real(x * Rat::from_integer(c.into()))).collect()).collect() };
        let gens = (0..n).map(|a| Generator { name: format!("q{}", a + 1), odd: false, d: rep.d_grades[a] }).collect();
        FreeFields { gens, pairing: s(&rep.omega_inv, 1), conj: s(&rep.omega, -1), adj: s(&rep.omega, 1), n_bosons: n, ghosts: None, partners: vec![] }.finish()
    }

    /// Ghost system `Sf[C^2 (x) g]`: `P^{(aA)(bB)} = eps^ab K^AB` with `eps^{+-} = 1`.
    ///
    /// Conjugation and adjoint act on the doublet index only (identity on the
    /// Lie index in the compact basis): `rho(eta^{a,A}) = -i eps_ab eta^{b,A}`.
    pub fn ghosts(g: &LieAlgebra) -> Self {
        let n = g.dim;
        let mut gens = Vec::new();
        for (plus, sign) in [(true, "+"), (false, "-")] {
            for a in 0..n {
                gens.push(Generator { name: format!("eta{}{}", sign, a + 1), odd: true, d: if plus { 1 } else { -1 } });
            }
        }
        let m = 2 * n;
        let z = || vec![vec![Scalar::zero(); m]; m];
        let (mut pairing, mut conj, mut adj) = (z(), z(), z());
        for a in 0..n {
            for b in 0..n {
                let kinv = Scalar::real(g.k_inv[a][b].clone());
                pairing[a][n + b] = kinv.clone();
                pairing[n + a][b] = -kinv;
            }
            // eps_{+-} = -1, eps_{-+} = 1
            conj[a][n + a] = Scalar::i();
            conj[n + a][a] = -Scalar::i();
            adj[a][n + a] = Scalar::int(-1);
            adj[n + a][a] = Scalar::one();
        }
        FreeFields { gens, pairing, conj, adj, n_bosons: 0, ghosts: Some(GhostLayout { offset: 0, dim_g: n }), partners: vec![] }.finish()
    }

    /// `Sf[V]` with a general symplectic form (internal degree from `rep.d_grades`).
    pub fn fermions(rep: &SymplecticRep) -> Self {
        let n = rep.dim;
        let gens = (0..n).map(|a| Generator { name: format!("chi{}", a + 1), odd: true, d: rep.d_grades[a] }).collect();
        let pairing = rep.omega_inv.iter().map(|r| r.iter().map(|x| Scalar::real(x.clone())).collect()).collect();
        let conj = rep.omega.iter().map(|r| r.iter().map(|x| &Scalar::real(x.clone()) * &(-Scalar::i())).collect()).collect();
        let adj = rep.omega.iter().map(|r| r.iter().map(|x| Scalar::real(x.clone())).collect()).collect();
        FreeFields { gens, pairing, conj, adj, n_bosons: 0, ghosts: None, partners: vec![] }.finish()
    }

    /// Tensor product; bosons of both factors are placed first.
    pub fn tensor(&self, o: &FreeFields) -> FreeFields {
        let order: Vec<(usize, usize)> = (0..self.gens.len())
            .filter(|&g| !self.gens[g].odd)
            .map(|g| (0, g))
            .chain((0..o.gens.len()).filter(|&g| !o.gens[g].odd).map(|g| (1, g)))
            .chain((0..self.gens.len()).filter(|&g| self.gens[g].odd).map(|g| (0, g)))
            .chain((0..o.gens.len()).filter(|&g| o.gens[g].odd).map(|g| (1, g)))
            .collect();
        let n = order.len();
        let mut pos = [vec![0usize; self.gens.len()], vec![0usize; o.gens.len()]];
        for (k, &(s, g)) in order.iter().enumerate() {
            pos[s][g] = k;
        }
        let src = [self, o];
        let gens = order.iter().map(|&(s, g)| src[s].gens[g].clone()).collect();
        let mut pairing = vec![vec![Scalar::zero(); n]; n];
        let mut conj = pairing.clone();
        let mut adj = pairing.clone();
        for s in 0..2 {
            let f = src[s];
            for a in 0..f.gens.len() {
                for b in 0..f.gens.len() {
                    pairing[pos[s][a]][pos[s][b]] = f.pairing[a][b].clone();
                    conj[pos[s][a]][pos[s][b]] = f.conj[a][b].clone();
                    adj[pos[s][a]][pos[s][b]] = f.adj[a][b].clone();
                }
            }
        }
        let ghosts = match (&self.ghosts, &o.ghosts) {
            (Some(gl), None) => Some(GhostLayout { offset: pos[0][gl.offset], dim_g: gl.dim_g }),
            (None, Some(gl)) => Some(GhostLayout { offset: pos[1][gl.offset], dim_g: gl.dim_g }),
            (None, None) => None,
            _ => panic!("only one ghost system per tensor product"),
        };
        FreeFields { gens, pairing, conj, adj, n_bosons: self.n_bosons + o.n_bosons, ghosts, partners: vec![] }.finish()
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn is_odd(&self, g: u16) -> bool {
        self.gens[g as usize].odd
    }

    pub fn partners(&self, g: u16) -> &[(u16, Scalar)] {
        &self.partners[g as usize]
    }

    /// Doubled weight of a creation mode, or `None` for annihilators.
    pub fn mode_weight2(&self, (g, n): Mode) -> Option<i64> {
        if n >= 0 {
            return None;
        }
        Some(if self.is_odd(g) { -2 * n as i64 } else { -2 * n as i64 - 1 })
    }

    /// Weight shift (doubled) caused by applying a mode: `-(2n+1)` for bosons, `-2n` for fermions.
    pub fn mode_shift2(&self, (g, n): Mode) -> i64 {
        if self.is_odd(g) {
            -2 * n as i64
        } else {
            -2 * n as i64 - 1
        }
    }

    /// Sort key giving the canonical order: bosons first, then weight descending, then species.
    pub fn key(&self, (g, n): Mode) -> (bool, i32, u16) {
        (self.is_odd(g), n, g)
    }

    /// Scalar `[a, b]` (graded) for two modes.
    pub fn bracket(&self, (g, n): Mode, (h, m): Mode) -> Scalar {
        let p = &self.pairing[g as usize][h as usize];
        if p.is_zero() {
            return Scalar::zero();
        }
        if self.is_odd(g) {
            if n + m == 0 && n != 0 {
                p * &Scalar::int(n as i64)
            } else {
                Scalar::zero()
            }
        } else if n + m + 1 == 0 {
            p.clone()
        } else {
            Scalar::zero()
        }
    }

    pub fn grade(&self, m: &Monomial) -> Grade {
        let mut g = Grade::vacuum();
        for &md in m {
            g.h2 += self.mode_weight2(md).expect("monomials contain creation modes only");
            g.r2 += 1;
            g.d += self.gens[md.0 as usize].d;
        }
        g
    }

    pub fn parity(&self, m: &Monomial) -> usize {
        m.iter().filter(|md| self.is_odd(md.0)).count() % 2
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        if m.is_empty() {
            return "|0>".into();
        }
        let mut s = String::new();
        for &(g, n) in m {
            s.push_str(&format!("{}_{{{}}} ", self.gens[g as usize].name, n));
        }
        s.push_str("|0>");
        s
    }

    /// Enumerate all monomials of doubled weight `w2`, in canonical generation order.
    pub fn monomials_of_weight(&self, w2: i64) -> Vec<Monomial> {
        // creation modes sorted canonically
        let mut modes: Vec<Mode> = Vec::new();
        for g in 0..self.ngens() as u16 {
            let mut n = -1i32;
            while let Some(w) = self.mode_weight2((g, n)) {
                if w > w2 {
                    break;
                }
                modes.push((g, n));
                n -= 1;
            }
        }
        modes.sort_by_key(|&md| self.key(md));
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.enum_rec(&modes, 0, w2, &mut cur, &mut out);
        out
    }

    fn enum_rec(&self, modes: &[Mode], start: usize, left: i64, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..modes.len() {
            let w = self.mode_weight2(modes[i]).unwrap();
            if w > left {
                continue;
            }
            cur.push(modes[i]);
            // bosons may repeat, fermions may not
            let next = if self.is_odd(modes[i].0) { i + 1 } else { i };
            self.enum_rec(modes, next, left - w, cur, out);
            cur.pop();
        }
    }
}

/// Doubled conformal weight, doubled R, and internal degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Grade {
    pub h2: i64,
    pub r2: i64,
    pub d: i64,
}

impl Grade {
    pub fn vacuum() -> Self {
        Grade { h2: 0, r2: 0, d: 0 }
    }
    pub fn h(&self) -> Rat {
        Rat::new(self.h2.into(), 2.into())
    }
    pub fn r(&self) -> Rat {
        Rat::new(self.r2.into(), 2.into())
    }
    /// BPS bound `h >= R + |d|/2`.
    pub fn bps(&self) -> bool {
        self.h2 >= self.r2 + self.d.abs()
    }
    /// Hall-Littlewood: `h = R - d/2` with `d <= 0`.
    pub fn is_hl(&self) -> bool {
        self.d <= 0 && self.h2 == self.r2 - self.d
    }
}

pub fn half(x2: i64) -> String {
    if x2 % 2 == 0 {
        (x2 / 2).to_string()
    } else {
        format!("{}/2", x2)
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(h={}, R={}, d={})", half(self.h2), half(self.r2), self.d)
    }
}

/// Basis of one graded component.
#[derive(Clone, Debug, Default)]
pub struct Block {
    pub states: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.states.len()
    }
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FockError {
    #[error("state budget {budget} exceeded at grade {grade}")]
    Budget { budget: usize, grade: Grade },
}

/// All grades with `h <= h_max`.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    pub h2_max: i64,
    pub blocks: BTreeMap<Grade, Block>,
}

impl GradedSpace {
    pub fn enumerate(ff: &FreeFields, h2_max: i64, budget: usize) -> Result<Self, FockError> {
        let mut blocks: BTreeMap<Grade, Block> = BTreeMap::new();
        let mut total = 0usize;
        for w in 0..=h2_max {
            for m in ff.monomials_of_weight(w) {
                let g = ff.grade(&m);
                let b = blocks.entry(g).or_default();
                b.index.insert(m.clone(), b.states.len());
                b.states.push(m);
                total += 1;
                if total > budget {
                    return Err(FockError::Budget { budget, grade: g });
                }
            }
        }
        Ok(GradedSpace { h2_max, blocks })
    }

    pub fn block(&self, g: &Grade) -> Option<&Block> {
        self.blocks.get(g)
    }

    pub fn dim(&self) -> usize {
        self.blocks.values().map(|b| b.len()).sum()
    }

    pub fn grades_at(&self, h2: i64) -> Vec<Grade> {
        self.blocks.keys().filter(|g| g.h2 == h2).copied().collect()
    }

    pub fn character(&self) -> Character {
        Character { h2_max: self.h2_max, rows: self.blocks.iter().map(|(g, b)| (*g, b.len())).collect() }
    }
}

/// Table of graded dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub h2_max: i64,
    pub rows: Vec<(Grade, usize)>,
}

fn power(var: &str, x2: i64) -> Option<String> {
    match x2 {
        0 => None,
        2 => Some(var.to_string()),
        _ => Some(format!("{}^{{{}}}", var, half(x2))),
    }
}

impl Character {
    /// `sum dim q^h t^R z^d`, ordered by h, then R, then d descending.
    pub fn series(&self) -> String {
        let mut rows: Vec<(Grade, usize)> = self.rows.iter().filter(|(_, n)| *n > 0).copied().collect();
        rows.sort_by_key(|(g, _)| (g.h2, g.r2, -g.d));
        let terms: Vec<String> = rows
            .iter()
            .map(|(g, n)| {
                let mut parts: Vec<String> = Vec::new();
                parts.extend(power("q", g.h2));
                parts.extend(power("t", g.r2));
                match g.d {
                    0 => {}
                    1 => parts.push("z".into()),
                    d => parts.push(format!("z^{{{}}}", d)),
                }
                let mono = parts.join(" ");
                match (*n, mono.is_empty()) {
                    (n, true) => n.to_string(),
                    (1, false) => mono,
                    (n, false) => format!("{}·{}", n, mono),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn dim_at(&self, g: Grade) -> usize {
        self.rows.iter().find(|(x, _)| *x == g).map_or(0, |(_, n)| *n)
    }

    pub fn dim_at_h(&self, h2: i64) -> usize {
        self.rows.iter().filter(|(g, _)| g.h2 == h2).map(|(_, n)| n).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::load_preset;

    fn sb_c2() -> FreeFields {
        let g = load_preset("sl2").unwrap();
        FreeFields::bosons(&SymplecticRep::doublets(&g, 1).unwrap())
    }

    #[test]
    fn sb_c2_low_grades() {
        let sp = GradedSpace::enumerate(&sb_c2(), 1, 1000).unwrap();
        assert_eq!(sp.block(&Grade { h2: 1, r2: 1, d: 0 }).unwrap().len(), 2);
        assert_eq!(sp.block(&Grade::vacuum()).unwrap().len(), 1);
        assert_eq!(sp.character().series(), "1 + 2·q^{1/2} t^{1/2}");
    }

    #[test]
    fn sf_u1_character() {
        let ff = FreeFields::ghosts(&load_preset("u1").unwrap());
        let sp = GradedSpace::enumerate(&ff, 2, 1000).unwrap();
        assert_eq!(sp.character().series(), "1 + q t^{1/2} z + q t^{1/2} z^{-1}");
    }

    #[test]
    fn sf_sl2_weight_one() {
        let ff = FreeFields::ghosts(&load_preset("sl2").unwrap());
        let sp = GradedSpace::enumerate(&ff, 2, 1000).unwrap();
        assert_eq!(sp.character().dim_at_h(2), 6);
    }

    #[test]
    fn empty_matter_is_vacuum_only() {
        let sp = GradedSpace::enumerate(&FreeFields::empty(), 0, 10).unwrap();
        assert_eq!(sp.character().series(), "1");
    }

    #[test]
    fn budget_is_enforced() {
        assert!(GradedSpace::enumerate(&sb_c2(), 8, 5).is_err());
    }
}
