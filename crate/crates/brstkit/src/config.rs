//! JSON configuration of a gauge theory, with strict validation and built-in fixtures.

use crate::brst::{BrstError, Gauge, RelBlock, RelativeComplex};
use crate::fock::{FreeFields, GradedSpace};
use crate::lie::{load_preset, Dense, LieAlgebra, SymplecticRep};
use crate::scalar::{parse_rat, Rat, Scalar};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexConfig {
    pub schema_version: u32,
    pub name: String,
    pub lie_algebra: LieSpec,
    pub matter: Vec<MatterBlock>,
    /// Nonnegative half-integer, written `"p/q"`.
    pub h_max: String,
    #[serde(default = "default_hl_degree")]
    pub hl_degree_max: usize,
    /// Lie-index blocks for iterated cohomology; defaults to the simple and abelian factors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub flags: Flags,
}

fn default_hl_degree() -> usize {
    3
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[serde(default)]
    pub allow_non_critical: bool,
    #[serde(default)]
    pub emit_witnesses: bool,
}

/// Either a preset name (`"sl2"`, `"sl2+u1"`) or raw structure constants `f_ab^c` and form `K_ab`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatterKind {
    SymplecticBoson,
    SymplecticFermion,
    Trivial,
}

/// One block of matter fields. Matrix entries are exact strings such as `"-1/2"` or `"1/2+3*i"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatterBlock {
    pub name: String,
    pub kind: MatterKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub omega: Vec<Vec<String>>,
    /// `(T_A)^a_b`, one matrix per Lie generator.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rep: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub d_grades: Vec<i64>,
}

/// Every violation found, each prefixed by a JSON pointer.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

/// A validated configuration with its algebraic data.
#[derive(Clone, Debug)]
pub struct Model {
    pub config: ComplexConfig,
    pub g: LieAlgebra,
    pub bosons: Option<SymplecticRep>,
    pub fermions: Option<SymplecticRep>,
    pub h2_max: i64,
    pub partition: Vec<Vec<usize>>,
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut s = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => s.push_str(&format!("/{index}")),
            Segment::Map { key } => s.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => s.push_str(&format!("/{variant}")),
            Segment::Unknown => s.push_str("/?"),
        }
    }
    if s.is_empty() {
        "/".into()
    } else {
        s
    }
}

/// Parse a doubled half-integer weight bound.
pub fn parse_h_max(s: &str) -> Result<i64, String> {
    let r = parse_rat(s).map_err(|e| e.to_string())?;
    if r.is_negative() {
        return Err("h_max must be ≥ 0".into());
    }
    let two = &r * Rat::from_integer(2.into());
    if !two.is_integer() {
        return Err("h_max must be a half-integer".into());
    }
    i64::try_from(two.to_integer()).map_err(|_| "h_max is too large".into())
}

impl ComplexConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let msg = e.inner().to_string();
            ConfigError::Invalid(vec![format!("{}: {}", pointer(e.path()), msg)])
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(serde_json::to_string(self).expect("config serializes").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Semantic checks; collects every violation.
    pub fn validate(&self) -> Result<Model, ConfigError> {
        let mut errs: Vec<String> = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            errs.push(format!("/schema_version: unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version));
        }
        let h2_max = parse_h_max(&self.h_max).map_err(|e| errs.push(format!("/h_max: {e}"))).ok();
        let g = self.lie_algebra(&mut errs);
        let mut names = BTreeSet::new();
        let mut bosons: Vec<SymplecticRep> = Vec::new();
        let mut fermions: Vec<SymplecticRep> = Vec::new();
        for (i, b) in self.matter.iter().enumerate() {
            let at = format!("/matter/{i}");
            if !names.insert(b.name.as_str()) {
                errs.push(format!("{at}/name: duplicate block name {:?}", b.name));
            }
            match b.kind {
                MatterKind::Trivial => {
                    if !(b.omega.is_empty() && b.rep.is_empty() && b.d_grades.is_empty()) {
                        errs.push(format!("{at}: a trivial block carries no omega, rep or d_grades"));
                    }
                }
                _ => {
                    if let Some(rep) = matter_rep(b, g.as_ref(), &at, &mut errs) {
                        match b.kind {
                            MatterKind::SymplecticBoson => bosons.push(rep),
                            _ => fermions.push(rep),
                        }
                    }
                }
            }
        }
        let partition = match (&g, &self.partition) {
            (Some(g), Some(p)) => match crate::hodge::check_partition(g, p) {
                Ok(()) => p.clone(),
                Err(e) => {
                    errs.push(format!("/partition: {e}"));
                    Vec::new()
                }
            },
            (Some(g), None) => (0..g.factors.len()).map(|i| g.factor_range(i).collect()).collect(),
            _ => Vec::new(),
        };
        if !errs.is_empty() {
            return Err(ConfigError::Invalid(errs));
        }
        let (g, h2_max) = (g.unwrap(), h2_max.unwrap());
        let sum = |v: Vec<SymplecticRep>| v.into_iter().reduce(|a, b| block_sum(&a, &b));
        Ok(Model { config: self.clone(), g, bosons: sum(bosons), fermions: sum(fermions), h2_max, partition })
    }

    fn lie_algebra(&self, errs: &mut Vec<String>) -> Option<LieAlgebra> {
        let l = &self.lie_algebra;
        match (&l.preset, &l.f, &l.k) {
            (Some(p), None, None) => load_preset(p).map_err(|e| errs.push(format!("/lie_algebra/preset: {e}"))).ok(),
            (None, Some(f), Some(k)) => {
                let before = errs.len();
                let f: Vec<Vec<Vec<Rat>>> = f
                    .iter()
                    .enumerate()
                    .map(|(a, x)| x.iter().enumerate().map(|(b, y)| y.iter().enumerate().map(|(c, z)| real(z, &format!("/lie_algebra/f/{a}/{b}/{c}"), errs)).collect()).collect())
                    .collect();
                let k: Vec<Vec<Rat>> = k
                    .iter()
                    .enumerate()
                    .map(|(a, x)| x.iter().enumerate().map(|(b, z)| real(z, &format!("/lie_algebra/K/{a}/{b}"), errs)).collect())
                    .collect();
                if errs.len() > before {
                    return None;
                }
                LieAlgebra::from_raw(f, k).map_err(|e| errs.push(format!("/lie_algebra: {e}"))).ok()
            }
            _ => {
                errs.push("/lie_algebra: give either \"preset\" or both \"f\" and \"K\"".into());
                None
            }
        }
    }
}

fn real(s: &str, at: &str, errs: &mut Vec<String>) -> Rat {
    match s.parse::<Scalar>() {
        Ok(x) if x.is_real() => x.re,
        Ok(_) => {
            errs.push(format!("{at}: must be real"));
            Rat::zero()
        }
        Err(e) => {
            errs.push(format!("{at}: {e}"));
            Rat::zero()
        }
    }
}

fn matter_rep(b: &MatterBlock, g: Option<&LieAlgebra>, at: &str, errs: &mut Vec<String>) -> Option<SymplecticRep> {
    let before = errs.len();
    let n = b.omega.len();
    if n == 0 || n % 2 == 1 {
        errs.push(format!("{at}/omega: must be a nonempty even-dimensional square matrix"));
    }
    for (i, r) in b.omega.iter().enumerate() {
        if r.len() != n {
            errs.push(format!("{at}/omega/{i}: expected {n} entries, got {}", r.len()));
        }
    }
    if b.d_grades.len() != n {
        errs.push(format!("{at}/d_grades: expected {n} entries, got {}", b.d_grades.len()));
    }
    if let Some(g) = g {
        if b.rep.len() != g.dim {
            errs.push(format!("{at}/rep: expected one matrix per generator ({}), got {}", g.dim, b.rep.len()));
        }
    }
    let mut rep: Vec<Dense> = Vec::new();
    for (a, t) in b.rep.iter().enumerate() {
        if t.len() != n || t.iter().any(|r| r.len() != n) {
            errs.push(format!("{at}/rep/{a}: must be {n}x{n}"));
            continue;
        }
        let mut m = Vec::new();
        for (i, r) in t.iter().enumerate() {
            let mut row = Vec::new();
            for (j, x) in r.iter().enumerate() {
                match x.parse::<Scalar>() {
                    Ok(v) => row.push(v),
                    Err(e) => {
                        errs.push(format!("{at}/rep/{a}/{i}/{j}: {e}"));
                        row.push(Scalar::zero());
                    }
                }
            }
            m.push(row);
        }
        rep.push(m);
    }
    let omega: Vec<Vec<Rat>> = b.omega.iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, x)| real(x, &format!("{at}/omega/{i}/{j}"), errs)).collect()).collect();
    if errs.len() > before {
        return None;
    }
    let rep = SymplecticRep::new(omega, rep, b.d_grades.clone()).map_err(|e| errs.push(format!("{at}: {e}"))).ok()?;
    if let Some(g) = g {
        rep.validate(g).map_err(|e| errs.push(format!("{at}/rep: {e}"))).ok()?;
    }
    Some(rep)
}

/// Block-diagonal sum of two representations of the same algebra.
pub fn block_sum(a: &SymplecticRep, b: &SymplecticRep) -> SymplecticRep {
    let n = a.dim + b.dim;
    let mut omega = vec![vec![Rat::zero(); n]; n];
    let mut rep = vec![vec![vec![Scalar::zero(); n]; n]; a.rep.len()];
    for (off, x) in [(0, a), (a.dim, b)] {
        for i in 0..x.dim {
            for j in 0..x.dim {
                omega[off + i][off + j] = x.omega[i][j].clone();
                for (t, m) in rep.iter_mut().enumerate() {
                    m[off + i][off + j] = x.rep[t][i][j].clone();
                }
            }
        }
    }
    let mut d = a.d_grades.clone();
    d.extend(&b.d_grades);
    SymplecticRep::new(omega, rep, d).expect("block sum of valid representations")
}

fn strings(m: &[Vec<Rat>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|x| Scalar::real(x.clone()).to_string()).collect()).collect()
}

fn boson_block(name: &str, rep: &SymplecticRep) -> MatterBlock {
    MatterBlock {
        name: name.into(),
        kind: MatterKind::SymplecticBoson,
        omega: strings(&rep.omega),
        rep: rep.rep.iter().map(|t| t.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()).collect(),
        d_grades: rep.d_grades.clone(),
    }
}

fn base(name: &str, preset: &str, matter: Vec<MatterBlock>, h_max: &str, hl: usize) -> ComplexConfig {
    ComplexConfig {
        schema_version: SCHEMA_VERSION,
        name: name.into(),
        lie_algebra: LieSpec { preset: Some(preset.into()), ..Default::default() },
        matter,
        h_max: h_max.into(),
        hl_degree_max: hl,
        partition: None,
        flags: Flags::default(),
    }
}

/// sl2 with eight doublets: 16 symplectic bosons, `Omega = eps (x) delta_8`.
pub fn nf4() -> ComplexConfig {
    let g = load_preset("sl2").unwrap();
    let rep = SymplecticRep::doublets(&g, 8).unwrap();
    base("CFG-NF4", "sl2", vec![boson_block("hypers", &rep)], "3/2", 2)
}

/// u1 with no matter.
pub fn triv() -> ComplexConfig {
    let block = MatterBlock { name: "none".into(), kind: MatterKind::Trivial, omega: vec![], rep: vec![], d_grades: vec![] };
    base("CFG-TRIV", "u1", vec![block], "2", 2)
}

/// Two decoupled copies of CFG-NF4: sl2+sl2, each factor acting on its own 16 bosons.
pub fn double_nf4() -> ComplexConfig {
    let g = load_preset("sl2").unwrap();
    let one = SymplecticRep::doublets(&g, 8).unwrap();
    let both = SymplecticRep::direct_sum(&one, &one).unwrap();
    let zero = vec![vec![Scalar::zero(); 16]; 16];
    let half = |r: &SymplecticRep, off: usize, mine: std::ops::Range<usize>| {
        let rep: Vec<Dense> = (0..6)
            .map(|a| {
                if !mine.contains(&a) {
                    return zero.clone();
                }
                (0..16).map(|i| (0..16).map(|j| r.rep[a][off + i][off + j].clone()).collect()).collect()
            })
            .collect();
        let om: Vec<Vec<Rat>> = (0..16).map(|i| (0..16).map(|j| r.omega[off + i][off + j].clone()).collect()).collect();
        SymplecticRep::new(om, rep, vec![0; 16]).unwrap()
    };
    let a = half(&both, 0, 0..3);
    let b = half(&both, 16, 3..6);
    base("CFG-NF4x2", "sl2+sl2", vec![boson_block("left", &a), boson_block("right", &b)], "1", 2)
}

/// Built-in configurations by name.
pub fn builtin(name: &str) -> Option<ComplexConfig> {
    match name.to_ascii_lowercase().as_str() {
        "nf4" | "cfg-nf4" => Some(nf4()),
        "triv" | "cfg-triv" => Some(triv()),
        "nf4x2" | "cfg-nf4x2" => Some(double_nf4()),
        _ => None,
    }
}

impl Model {
    pub fn gauge(&self) -> Result<Gauge, BrstError> {
        Gauge::new(self.g.clone(), self.bosons.clone(), self.config.flags.allow_non_critical)
    }

    /// Matter and ghosts as one free-field system (bosons first).
    pub fn free_fields(&self) -> FreeFields {
        let mut ff = FreeFields::empty();
        if let Some(b) = &self.bosons {
            ff = FreeFields::bosons(b);
        }
        if let Some(f) = &self.fermions {
            ff = ff.tensor(&FreeFields::fermions(f));
        }
        ff.tensor(&FreeFields::ghosts(&self.g))
    }

    pub fn h_max(&self) -> String {
        crate::fock::half(self.h2_max)
    }

    /// Override the weight bound; the content hash follows.
    pub fn with_h_max(mut self, s: &str) -> Result<Self, ConfigError> {
        self.h2_max = parse_h_max(s).map_err(|e| ConfigError::Invalid(vec![format!("--h-max: {e}")]))?;
        self.config.h_max = s.to_string();
        Ok(self)
    }

    pub fn hash(&self) -> String {
        self.config.hash()
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    key: String,
    h2_max: i64,
    blocks: Vec<RelBlock>,
}

/// Build the relative complex, reusing `cache_dir/<hash>.json` when it matches.
pub fn build_complex(model: &Model, cache_dir: Option<&Path>, budget: usize) -> Result<(RelativeComplex, bool), BrstError> {
    let gauge = model.gauge()?;
    let space = GradedSpace::enumerate(&gauge.ff, model.h2_max, budget)?;
    let key = model.hash();
    let file = cache_dir.map(|d| d.join(format!("{key}.json")));
    if let Some(f) = &file {
        if let Some(blocks) = read_cache(f, &key, model.h2_max, &space) {
            return Ok((RelativeComplex::assemble(gauge, model.h2_max, space, blocks)?, true));
        }
    }
    let blocks = RelativeComplex::invariant_blocks(&gauge, &space, model.h2_max);
    if let Some(f) = &file {
        let c = CacheFile { schema_version: SCHEMA_VERSION, key, h2_max: model.h2_max, blocks: blocks.clone() };
        // a failed write only costs a rebuild next time
        let _ = std::fs::create_dir_all(f.parent().unwrap()).and_then(|_| std::fs::write(f, serde_json::to_vec(&c).unwrap()));
    }
    Ok((RelativeComplex::assemble(gauge, model.h2_max, space, blocks)?, false))
}

fn read_cache(f: &Path, key: &str, h2_max: i64, space: &GradedSpace) -> Option<Vec<RelBlock>> {
    let c: CacheFile = serde_json::from_slice(&std::fs::read(f).ok()?).ok()?;
    if c.schema_version != SCHEMA_VERSION || c.key != key || c.h2_max != h2_max {
        return None;
    }
    let fits = c.blocks.iter().all(|b| {
        space.block(&b.grade).is_some_and(|amb| {
            b.free.len() == b.vectors.len() && b.free.iter().all(|&i| i < amb.len()) && b.vectors.iter().all(|v| v.iter().all(|(i, _)| *i < amb.len()))
        })
    });
    fits.then_some(c.blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for c in [nf4(), triv(), double_nf4()] {
            let m = c.validate().unwrap();
            let back = ComplexConfig::from_json(&c.to_json()).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.hash(), c.hash());
            assert!(m.g.dim > 0);
        }
    }
}
