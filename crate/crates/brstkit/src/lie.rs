//! Lie algebra structure data and symplectic representations.
//!
//! Presets use a real basis of the compact form (anti-Hermitian matrices), so
//! every structure constant is rational and the compact conjugation fixes each
//! basis vector.

use crate::scalar::{rat_int, Rat, Scalar};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Dense = Vec<Vec<Scalar>>;

pub fn dzeros(r: usize, c: usize) -> Dense {
    vec![vec![Scalar::zero(); c]; r]
}

pub fn dmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = dzeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

pub fn dsub(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub fn dtrace(a: &Dense) -> Scalar {
    let mut t = Scalar::zero();
    for (i, r) in a.iter().enumerate() {
        t += &r[i];
    }
    t
}

pub fn dtranspose(a: &Dense) -> Dense {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn dreal(a: &[Vec<Rat>]) -> Dense {
    a.iter().map(|r| r.iter().map(|x| Scalar::real(x.clone())).collect()).collect()
}

fn dis_zero(a: &Dense) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Exact inverse of a small rational matrix.
pub fn rat_inverse(k: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = k.len();
    let mut a: Vec<Vec<Rat>> = k
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = Rat::one() / &a[c][c];
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    pub start: usize,
    pub dim: usize,
    pub simple: bool,
    /// Dual Coxeter number for simple factors.
    pub dual_coxeter: Option<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    pub dim: usize,
    /// `f[a][b][c]` is `f_{ab}^c`.
    pub f: Vec<Vec<Vec<Rat>>>,
    pub k: Vec<Vec<Rat>>,
    pub k_inv: Vec<Vec<Rat>>,
    pub factors: Vec<Factor>,
    /// Defining-representation matrices, when the algebra came from a preset.
    pub defining: Option<Vec<Dense>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("antisymmetry violated at ({0},{1},{2})")]
    Antisymmetry(usize, usize, usize),
    #[error("Jacobi identity violated at ({0},{1},{2})")]
    Jacobi(usize, usize, usize),
    #[error("invariance violated at ({0},{1},{2})")]
    Invariance(usize, usize, usize),
    #[error("K is not symmetric at ({0},{1})")]
    KNotSymmetric(usize, usize),
    #[error("K is singular")]
    KSingular,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

impl LieAlgebra {
    /// Validate raw `(f, K)` data; indices in errors are 1-based.
    pub fn from_raw(f: Vec<Vec<Vec<Rat>>>, k: Vec<Vec<Rat>>) -> Result<Self, LieError> {
        let n = k.len();
        if f.len() != n || f.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(LieError::Shape(format!("f must be {n}x{n}x{n}")));
        }
        if k.iter().any(|r| r.len() != n) {
            return Err(LieError::Shape("K must be square".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if f[a][b][c] != -f[b][a][c].clone() {
                        let (x, y) = if a < b { (a, b) } else { (b, a) };
                        return Err(LieError::Antisymmetry(x + 1, y + 1, c + 1));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if k[a][b] != k[b][a] {
                    return Err(LieError::KNotSymmetric(a + 1, b + 1));
                }
            }
        }
        let k_inv = rat_inverse(&k).ok_or(LieError::KSingular)?;
        // Jacobi: f_ab^d f_dc^e + f_bc^d f_da^e + f_ca^d f_db^e = 0
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mut s = Rat::zero();
                        for d in 0..n {
                            s += &f[a][b][d] * &f[d][c][e] + &f[b][c][d] * &f[d][a][e] + &f[c][a][d] * &f[d][b][e];
                        }
                        if !s.is_zero() {
                            return Err(LieError::Jacobi(a + 1, b + 1, c + 1));
                        }
                    }
                }
            }
        }
        let lie = LieAlgebra { dim: n, f, k, k_inv, factors: Vec::new(), defining: None };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if lie.f_low(a, b, c) != -lie.f_low(a, c, b) {
                        return Err(LieError::Invariance(a + 1, b + 1, c + 1));
                    }
                }
            }
        }
        let mut lie = lie;
        lie.factors = lie.split_factors();
        Ok(lie)
    }

    /// `f_{abc} = f_{ab}^d K_{dc}`.
    pub fn f_low(&self, a: usize, b: usize, c: usize) -> Rat {
        let mut s = Rat::zero();
        for d in 0..self.dim {
            if !self.f[a][b][d].is_zero() {
                s += &self.f[a][b][d] * &self.k[d][c];
            }
        }
        s
    }

    /// Connected components of the bracket/form graph; each becomes a factor.
    fn split_factors(&self) -> Vec<Factor> {
        let n = self.dim;
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(c: &mut [usize], mut x: usize) -> usize {
            while c[x] != x {
                c[x] = c[c[x]];
                x = c[x];
            }
            x
        }
        let link = |c: &mut [usize], a: usize, b: usize| {
            let (ra, rb) = (find(c, a), find(c, b));
            if ra != rb {
                c[ra.max(rb)] = ra.min(rb);
            }
        };
        for a in 0..n {
            for b in 0..n {
                if !self.k[a][b].is_zero() {
                    link(&mut comp, a, b);
                }
                for c in 0..n {
                    if !self.f[a][b][c].is_zero() {
                        link(&mut comp, a, b);
                        link(&mut comp, a, c);
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|a| find(&mut comp, a)).collect();
        let mut out: Vec<Factor> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for a in 0..n {
            if seen.contains(&roots[a]) {
                continue;
            }
            seen.push(roots[a]);
            let members: Vec<usize> = (0..n).filter(|&b| roots[b] == roots[a]).collect();
            let contiguous = members.windows(2).all(|w| w[1] == w[0] + 1);
            let abelian = members.iter().all(|&x| members.iter().all(|&y| (0..n).all(|z| self.f[x][y][z].is_zero())));
            if !contiguous {
                // fall back to a single factor when the basis interleaves summands
                return vec![Factor { name: "g".into(), start: 0, dim: n, simple: false, dual_coxeter: None }];
            }
            if abelian {
                for &m in &members {
                    out.push(Factor { name: "u1".into(), start: m, dim: 1, simple: false, dual_coxeter: None });
                }
            } else {
                out.push(Factor { name: format!("g{}", out.len() + 1), start: members[0], dim: members.len(), simple: true, dual_coxeter: None });
            }
        }
        out
    }

    /// Killing-type trace form in the adjoint representation, `Tr(ad T_a ad T_b)`.
    pub fn adjoint_trace(&self) -> Vec<Vec<Rat>> {
        let n = self.dim;
        let mut t = vec![vec![Rat::zero(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut s = Rat::zero();
                for c in 0..n {
                    for d in 0..n {
                        s += &self.f[a][c][d] * &self.f[b][d][c];
                    }
                }
                t[a][b] = s;
            }
        }
        t
    }

    /// Adjoint representation matrices `(ad T_a)^c_b = f_{ab}^c`.
    pub fn adjoint_rep(&self) -> Vec<Dense> {
        let n = self.dim;
        (0..n)
            .map(|a| (0..n).map(|c| (0..n).map(|b| Scalar::real(self.f[a][b][c].clone())).collect()).collect())
            .collect()
    }

    pub fn direct_sum(&self, o: &LieAlgebra) -> LieAlgebra {
        let n = self.dim + o.dim;
        let mut f = vec![vec![vec![Rat::zero(); n]; n]; n];
        let mut k = vec![vec![Rat::zero(); n]; n];
        let mut k_inv = vec![vec![Rat::zero(); n]; n];
        for (src, off) in [(self, 0), (o, self.dim)] {
            for a in 0..src.dim {
                for b in 0..src.dim {
                    k[a + off][b + off] = src.k[a][b].clone();
                    k_inv[a + off][b + off] = src.k_inv[a][b].clone();
                    for c in 0..src.dim {
                        f[a + off][b + off][c + off] = src.f[a][b][c].clone();
                    }
                }
            }
        }
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().map(|fa| Factor { start: fa.start + self.dim, ..fa.clone() }));
        let defining = match (&self.defining, &o.defining) {
            (Some(a), Some(b)) => {
                // block-diagonal defining representation of the sum
                let (na, nb) = (a[0].len(), b[0].len());
                let mut reps = Vec::new();
                for t in a {
                    let mut m = dzeros(na + nb, na + nb);
                    for i in 0..na {
                        for j in 0..na {
                            m[i][j] = t[i][j].clone();
                        }
                    }
                    reps.push(m);
                }
                for t in b {
                    let mut m = dzeros(na + nb, na + nb);
                    for i in 0..nb {
                        for j in 0..nb {
                            m[na + i][na + j] = t[i][j].clone();
                        }
                    }
                    reps.push(m);
                }
                Some(reps)
            }
            _ => None,
        };
        LieAlgebra { dim: n, f, k, k_inv, factors, defining }
    }

    /// Indices belonging to factor `i`.
    pub fn factor_range(&self, i: usize) -> std::ops::Range<usize> {
        let fa = &self.factors[i];
        fa.start..fa.start + fa.dim
    }
}

/// Structure constants of the span of `basis` (closed under brackets) and the
/// form `K_ab = -Tr(T_a T_b)`.
fn from_matrix_basis(basis: &[Dense]) -> (Vec<Vec<Vec<Rat>>>, Vec<Vec<Rat>>) {
    let n = basis.len();
    let sz = basis[0].len();
    // flatten to real coordinates to solve for coefficients
    let flat = |m: &Dense| -> Vec<Rat> {
        let mut v = Vec::new();
        for r in m {
            for x in r {
                v.push(x.re.clone());
                v.push(x.im.clone());
            }
        }
        v
    };
    let cols: Vec<Vec<Rat>> = basis.iter().map(flat).collect();
    let rows = cols[0].len();
    let solve = |target: &[Rat]| -> Vec<Rat> {
        // least-effort exact solve of sum_c x_c cols[c] = target via normal equations
        let mut g = vec![vec![Rat::zero(); n]; n];
        let mut rhs = vec![Rat::zero(); n];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = (0..rows).map(|r| &cols[i][r] * &cols[j][r]).fold(Rat::zero(), |a, b| a + b);
            }
            rhs[i] = (0..rows).map(|r| &cols[i][r] * &target[r]).fold(Rat::zero(), |a, b| a + b);
        }
        let gi = rat_inverse(&g).expect("basis matrices are independent");
        (0..n).map(|i| (0..n).map(|j| &gi[i][j] * &rhs[j]).fold(Rat::zero(), |a, b| a + b)).collect()
    };
    let mut f = vec![vec![vec![Rat::zero(); n]; n]; n];
    let mut k = vec![vec![Rat::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let br = dsub(&dmul(&basis[a], &basis[b]), &dmul(&basis[b], &basis[a]));
            f[a][b] = solve(&flat(&br));
            let t = dtrace(&dmul(&basis[a], &basis[b]));
            assert!(t.is_real());
            k[a][b] = -t.re;
        }
    }
    let _ = sz;
    (f, k)
}

/// Compact basis of su(n): `E_jk - E_kj`, `i(E_jk + E_kj)`, `i(E_jj - E_j+1,j+1)`.
pub fn su_basis(n: usize) -> Vec<Dense> {
    let mut out = Vec::new();
    let unit = |i: usize, j: usize, c: Scalar| {
        let mut m = dzeros(n, n);
        m[i][j] = c;
        m
    };
    let add = |a: &Dense, b: &Dense| -> Dense { a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect() };
    for j in 0..n {
        for k in j + 1..n {
            out.push(add(&unit(j, k, Scalar::one()), &unit(k, j, Scalar::int(-1))));
            out.push(add(&unit(j, k, Scalar::i()), &unit(k, j, Scalar::i())));
        }
    }
    for j in 0..n - 1 {
        out.push(add(&unit(j, j, Scalar::i()), &unit(j + 1, j + 1, -Scalar::i())));
    }
    out
}

pub fn preset_su(n: usize) -> LieAlgebra {
    let basis = su_basis(n);
    let (f, k) = from_matrix_basis(&basis);
    let mut lie = LieAlgebra::from_raw(f, k).expect("preset data is valid");
    lie.factors = vec![Factor { name: format!("sl{n}"), start: 0, dim: lie.dim, simple: true, dual_coxeter: Some(n as i64) }];
    lie.defining = Some(basis);
    lie
}

/// Abelian summand with form `K = [[k]]`; defining rep is `i` on C^1.
pub fn preset_u1(k: Rat) -> LieAlgebra {
    let mut lie = LieAlgebra::from_raw(vec![vec![vec![Rat::zero()]]], vec![vec![k]]).expect("u1 data is valid");
    lie.factors = vec![Factor { name: "u1".into(), start: 0, dim: 1, simple: false, dual_coxeter: None }];
    lie.defining = Some(vec![vec![vec![Scalar::i()]]]);
    lie
}

/// Parse `"sl2"`, `"sl3"`, `"u1"`, or `+`-separated sums such as `"sl2+u1"`.
pub fn load_preset(spec: &str) -> Result<LieAlgebra, LieError> {
    let mut acc: Option<LieAlgebra> = None;
    for part in spec.split('+').map(str::trim) {
        let g = if part == "u1" {
            preset_u1(Rat::one())
        } else if let Some(n) = part.strip_prefix("sl").and_then(|s| s.parse::<usize>().ok()).filter(|&n| n >= 2) {
            preset_su(n)
        } else {
            return Err(LieError::UnknownPreset(spec.to_string()));
        };
        acc = Some(match acc {
            None => g,
            Some(a) => a.direct_sum(&g),
        });
    }
    acc.ok_or_else(|| LieError::UnknownPreset(spec.to_string()))
}

/// Symplectic representation data for a block of symplectic bosons.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticRep {
    pub dim: usize,
    /// `Omega_ab`
    pub omega: Vec<Vec<Rat>>,
    /// `Omega^ab`, with `Omega_ab Omega^bc = delta_a^c`
    pub omega_inv: Vec<Vec<Rat>>,
    /// `(T_A)^a_b`
    pub rep: Vec<Dense>,
    pub d_grades: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error("Omega must be antisymmetric and invertible")]
    BadOmega,
    #[error("dimension must be even and positive, got {0}")]
    OddDim(usize),
    #[error("generator {0} does not preserve Omega")]
    NotSymplectic(usize),
    #[error("bracket of generators ({0},{1}) does not match the structure constants")]
    Bracket(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

impl SymplecticRep {
    pub fn new(omega: Vec<Vec<Rat>>, rep: Vec<Dense>, d_grades: Vec<i64>) -> Result<Self, RepError> {
        let dim = omega.len();
        if dim == 0 || dim % 2 == 1 {
            return Err(RepError::OddDim(dim));
        }
        for a in 0..dim {
            for b in 0..dim {
                if omega[a][b] != -omega[b][a].clone() {
                    return Err(RepError::BadOmega);
                }
            }
        }
        let omega_inv = rat_inverse(&omega).ok_or(RepError::BadOmega)?;
        if d_grades.len() != dim || rep.iter().any(|t| t.len() != dim) {
            return Err(RepError::Shape("rep matrices and d-grades must match Omega".into()));
        }
        Ok(SymplecticRep { dim, omega, omega_inv, rep, d_grades })
    }

    /// Check `T^T Omega + Omega T = 0` and `[T_a, T_b] = f_ab^c T_c`.
    pub fn validate(&self, g: &LieAlgebra) -> Result<(), RepError> {
        if self.rep.len() != g.dim {
            return Err(RepError::Shape(format!("expected {} generators, got {}", g.dim, self.rep.len())));
        }
        let om = dreal(&self.omega);
        for (i, t) in self.rep.iter().enumerate() {
            let lhs = dmul(&dtranspose(t), &om);
            let rhs = dmul(&om, t);
            let s: Dense = lhs.iter().zip(&rhs).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect();
            if !dis_zero(&s) {
                return Err(RepError::NotSymplectic(i + 1));
            }
        }
        for a in 0..g.dim {
            for b in 0..g.dim {
                let br = dsub(&dmul(&self.rep[a], &self.rep[b]), &dmul(&self.rep[b], &self.rep[a]));
                let mut rhs = dzeros(self.dim, self.dim);
                for c in 0..g.dim {
                    if g.f[a][b][c].is_zero() {
                        continue;
                    }
                    let fc = Scalar::real(g.f[a][b][c].clone());
                    for i in 0..self.dim {
                        for j in 0..self.dim {
                            rhs[i][j] += &fc * &self.rep[c][i][j];
                        }
                    }
                }
                if !dis_zero(&dsub(&br, &rhs)) {
                    return Err(RepError::Bracket(a + 1, b + 1));
                }
            }
        }
        Ok(())
    }

    /// `C^2 (x) C^n` style matter: `copies` copies of the defining representation
    /// of an algebra acting on C^2 (Omega = eps (x) delta).
    pub fn doublets(g: &LieAlgebra, copies: usize) -> Result<Self, RepError> {
        let def = g.defining.as_ref().ok_or_else(|| RepError::Shape("algebra has no defining representation".into()))?;
        let m = def[0].len();
        if m != 2 {
            return Err(RepError::Shape("doublet matter needs a 2-dimensional defining representation".into()));
        }
        Self::tensor_with_flavour(def, &[vec![Rat::zero(), Rat::one()], vec![-Rat::one(), Rat::zero()]], copies)
    }

    /// Representation `R (x) C^copies` with `Omega = eps_R (x) delta`.
    pub fn tensor_with_flavour(def: &[Dense], eps: &[Vec<Rat>], copies: usize) -> Result<Self, RepError> {
        let m = eps.len();
        let dim = m * copies;
        let idx = |s: usize, f: usize| s * copies + f;
        let mut omega = vec![vec![Rat::zero(); dim]; dim];
        for s in 0..m {
            for t in 0..m {
                for f in 0..copies {
                    omega[idx(s, f)][idx(t, f)] = eps[s][t].clone();
                }
            }
        }
        let rep = def
            .iter()
            .map(|t| {
                let mut big = dzeros(dim, dim);
                for s in 0..m {
                    for u in 0..m {
                        for f in 0..copies {
                            big[idx(s, f)][idx(u, f)] = t[s][u].clone();
                        }
                    }
                }
                big
            })
            .collect();
        SymplecticRep::new(omega, rep, vec![0; dim])
    }

    /// Block-diagonal sum of representations of `g1 + g2` (each acted on by its own summand).
    pub fn direct_sum(a: &SymplecticRep, b: &SymplecticRep) -> Result<Self, RepError> {
        let dim = a.dim + b.dim;
        let mut omega = vec![vec![Rat::zero(); dim]; dim];
        for i in 0..a.dim {
            for j in 0..a.dim {
                omega[i][j] = a.omega[i][j].clone();
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                omega[a.dim + i][a.dim + j] = b.omega[i][j].clone();
            }
        }
        let mut rep = Vec::new();
        for t in &a.rep {
            let mut m = dzeros(dim, dim);
            for i in 0..a.dim {
                for j in 0..a.dim {
                    m[i][j] = t[i][j].clone();
                }
            }
            rep.push(m);
        }
        for t in &b.rep {
            let mut m = dzeros(dim, dim);
            for i in 0..b.dim {
                for j in 0..b.dim {
                    m[a.dim + i][a.dim + j] = t[i][j].clone();
                }
            }
            rep.push(m);
        }
        let mut d = a.d_grades.clone();
        d.extend(&b.d_grades);
        SymplecticRep::new(omega, rep, d)
    }

    pub fn trace_form(&self) -> Vec<Vec<Scalar>> {
        let n = self.rep.len();
        (0..n).map(|a| (0..n).map(|b| dtrace(&dmul(&self.rep[a], &self.rep[b]))).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalReport {
    pub twice_critical: bool,
    /// `(factor name, Tr_rep restricted, 2 Tr_ad restricted, ok)` with traces of the first diagonal entry
    pub factors: Vec<FactorCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorCheck {
    pub factor: String,
    pub ok: bool,
    pub rep_trace: String,
    pub twice_adjoint_trace: String,
}

impl fmt::Display for CriticalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.factors {
            writeln!(f, "{}: Tr_R = {} vs 2 Tr_ad = {} -> {}", c.factor, c.rep_trace, c.twice_adjoint_trace, if c.ok { "ok" } else { "FAIL" })?;
        }
        Ok(())
    }
}

/// `Tr_R(T_a T_b) = 2 Tr_ad(T_a T_b)` entrywise (level zero on abelian summands).
pub fn check_twice_critical(rep: Option<&SymplecticRep>, g: &LieAlgebra) -> CriticalReport {
    let n = g.dim;
    let tr = rep.map(|r| r.trace_form()).unwrap_or_else(|| vec![vec![Scalar::zero(); n]; n]);
    let ad = g.adjoint_trace();
    let mut factors = Vec::new();
    let mut all = true;
    for (i, fa) in g.factors.iter().enumerate() {
        let range = g.factor_range(i);
        let mut ok = true;
        for a in 0..n {
            for b in range.clone() {
                let want = Scalar::real(&ad[a][b] * rat_int(2));
                if tr[a][b] != want {
                    ok = false;
                }
            }
        }
        all &= ok;
        let a0 = range.start;
        factors.push(FactorCheck {
            factor: fa.name.clone(),
            ok,
            rep_trace: tr[a0][a0].to_string(),
            twice_adjoint_trace: Scalar::real(&ad[a0][a0] * rat_int(2)).to_string(),
        });
    }
    CriticalReport { twice_critical: all, factors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn sl2_preset_is_consistent() {
        let g = load_preset("sl2").unwrap();
        assert_eq!(g.dim, 3);
        assert_eq!(g.factors[0].dual_coxeter, Some(2));
        // Tr_ad = -2 h K on the compact form
        let ad = g.adjoint_trace();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(ad[a][b], &g.k[a][b] * rat_int(-4));
            }
        }
    }

    #[test]
    fn sl3_killing_matches_dual_coxeter() {
        let g = load_preset("sl3").unwrap();
        assert_eq!(g.dim, 8);
        let ad = g.adjoint_trace();
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(ad[a][b], &g.k[a][b] * rat_int(-6));
            }
        }
    }

    #[test]
    fn antisymmetry_error_names_triple() {
        let z = || vec![vec![Rat::zero(); 3]; 3];
        let mut f = vec![z(), z(), z()];
        f[0][1][2] = Rat::one();
        f[1][0][2] = Rat::one();
        let k = vec![vec![Rat::one(), Rat::zero(), Rat::zero()], vec![Rat::zero(), Rat::one(), Rat::zero()], vec![Rat::zero(), Rat::zero(), Rat::one()]];
        let e = LieAlgebra::from_raw(f, k).unwrap_err();
        assert_eq!(e.to_string(), "antisymmetry violated at (1,2,3)");
    }

    #[test]
    fn u1_and_sums() {
        let g = load_preset("u1").unwrap();
        assert_eq!(g.dim, 1);
        assert_eq!(g.k, vec![vec![Rat::one()]]);
        let s = load_preset("sl2+sl2").unwrap();
        assert_eq!(s.factors.len(), 2);
        assert_eq!(s.factor_range(1), 3..6);
        let _ = rat(1, 2);
    }

    #[test]
    fn twice_critical_counts_doublets() {
        let g = load_preset("sl2").unwrap();
        let r8 = SymplecticRep::doublets(&g, 8).unwrap();
        r8.validate(&g).unwrap();
        assert!(check_twice_critical(Some(&r8), &g).twice_critical);
        let r6 = SymplecticRep::doublets(&g, 6).unwrap();
        assert!(!check_twice_critical(Some(&r6), &g).twice_critical);
        let u = load_preset("u1").unwrap();
        assert!(check_twice_critical(None, &u).twice_critical);
    }
}
