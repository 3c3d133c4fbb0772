//! Command runner behind the `brstkit` binary: builds the requested objects from a validated
//! [`Model`] and assembles a deterministic report.
//!
//! Reports are plain data. Rationals are strings, rows come out in grade order and nothing
//! depends on timing, thread count or whether the complex came from the cache.

use crate::brst::{check_explicit_split, check_good_action, check_kahler, check_split, BrstError, Check, Operators, RelativeComplex};
use crate::config::{build_complex, ConfigError, Model, SCHEMA_VERSION};
use crate::fock::{half, FockError, FreeFields, GradedSpace};
use crate::hl::{check_comoment, check_pva_kahler, hl_sector, HlError, HlRing, Koszul};
use crate::hodge::{check_ddc_lemma, cohomology, formality_dims, harmonic_basis, hodge_report, iterated_cohomology, quartet_decompose, usp2_on_cohomology};
use crate::lie::{check_twice_critical, LieAlgebra};
use crate::linalg::{kernel, SMat};
use crate::ops::{state_axpy, State};
use crate::scalar::{rat_int, Scalar};
use crate::suite::{invariants, mode_algebra, System};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;

/// States allowed in one ambient enumeration before a run is refused.
pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Unitarity,
    Brst,
    Hodge,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Unitarity => "unitarity",
            Suite::Brst => "brst",
            Suite::Hodge => "hodge",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Basis,
    Character,
    ComplexBuild,
    Cohomology,
    Hodge,
    Quartets,
    Formality,
    Iterated,
    HlRing,
    Verify(Suite),
}

impl Command {
    pub fn name(self) -> String {
        match self {
            Command::Basis => "basis".into(),
            Command::Character => "character".into(),
            Command::ComplexBuild => "complex build".into(),
            Command::Cohomology => "cohomology".into(),
            Command::Hodge => "hodge".into(),
            Command::Quartets => "quartets".into(),
            Command::Formality => "formality".into(),
            Command::Iterated => "iterated".into(),
            Command::HlRing => "hl-ring".into(),
            Command::Verify(s) => format!("verify {}", s.name()),
        }
    }

    /// Stem of the report file written under `--out`.
    pub fn file_stem(self) -> String {
        self.name().replace(' ', "-")
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub cache_dir: Option<PathBuf>,
    pub emit_witnesses: bool,
    pub budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { cache_dir: None, emit_witnesses: false, budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Brst(#[from] BrstError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Hl(#[from] HlError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Debug, Serialize)]
struct ConfigRef {
    name: String,
    hash: String,
    h_max: String,
}

/// Outcome of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    config: ConfigRef,
    pub ok: bool,
    pub data: Value,
    pub checks: Vec<Check>,
    /// Flat rows for CSV output.
    #[serde(skip)]
    pub table: Vec<Value>,
}

impl Report {
    fn new(cmd: Command, model: &Model, data: Value, table: Vec<Value>, checks: Vec<Check>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: cmd.name(),
            config: ConfigRef { name: model.config.name.clone(), hash: model.hash(), h_max: model.h_max() },
            ok: checks.iter().all(|c| c.ok),
            data,
            checks,
            table,
        }
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The row table; commands without one list their checks.
    pub fn to_csv(&self) -> String {
        let rows: Vec<Value> = if self.table.is_empty() { self.checks.iter().map(|c| json!({ "name": c.name, "ok": c.ok, "witness": c.witness })).collect() } else { self.table.clone() };
        let mut header: Vec<String> = Vec::new();
        for r in &rows {
            if let Value::Object(m) = r {
                for k in m.keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).unwrap();
        for r in &rows {
            w.write_record(header.iter().map(|k| cell(r.get(k)))).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Array(a)) => a.iter().map(|x| cell(Some(x))).collect::<Vec<_>>().join(";"),
        Some(x) => x.to_string(),
    }
}

fn rows<T: Serialize>(xs: &[T]) -> Vec<Value> {
    xs.iter().map(|x| serde_json::to_value(x).unwrap()).collect()
}

/// Run one command on a validated model.
pub fn run(cmd: Command, model: &Model, opts: &Options) -> Result<Report, RunError> {
    let mut w = Workbench { model, opts, cx: None, ops: None };
    match cmd {
        Command::Basis => w.basis(cmd),
        Command::Character => w.character(cmd),
        Command::ComplexBuild => w.complex_build(cmd),
        Command::Cohomology => w.cohomology(cmd),
        Command::Hodge => w.hodge(cmd),
        Command::Quartets => w.quartets(cmd),
        Command::Formality => w.formality(cmd),
        Command::Iterated => w.iterated(cmd),
        Command::HlRing => w.hl_ring(cmd),
        Command::Verify(s) => w.verify(cmd, s),
    }
}

struct Workbench<'a> {
    model: &'a Model,
    opts: &'a Options,
    cx: Option<RelativeComplex>,
    ops: Option<Operators>,
}

#[derive(Serialize)]
struct GradeRow {
    h: String,
    #[serde(rename = "R")]
    r: String,
    d: i64,
    dim: usize,
}

fn fmt_state(ff: &FreeFields, s: &State) -> String {
    let mut terms: Vec<(String, &Scalar)> = s.iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (ff.fmt_monomial(m), c)).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().map(|(m, c)| format!("({c}) {m}")).collect::<Vec<_>>().join(" + ")
}

impl<'a> Workbench<'a> {
    fn complex(&mut self) -> Result<&RelativeComplex, RunError> {
        if self.cx.is_none() {
            if self.model.fermions.is_some() {
                return Err(RunError::Usage("symplectic_fermion matter is not supported by the BRST commands".into()));
            }
            let (cx, cached) = build_complex(self.model, self.opts.cache_dir.as_deref(), self.opts.budget)?;
            if cached {
                eprintln!("relative complex loaded from cache");
            }
            self.cx = Some(cx);
        }
        Ok(self.cx.as_ref().unwrap())
    }

    fn operators(&mut self) -> Result<(&RelativeComplex, &Operators), RunError> {
        if self.ops.is_none() {
            let o = self.complex()?.operators()?;
            self.ops = Some(o);
        }
        Ok((self.cx.as_ref().unwrap(), self.ops.as_ref().unwrap()))
    }

    fn ambient(&self) -> Result<(FreeFields, GradedSpace), RunError> {
        let ff = self.model.free_fields();
        let space = GradedSpace::enumerate(&ff, self.model.h2_max, self.opts.budget)?;
        Ok((ff, space))
    }

    fn basis(&mut self, cmd: Command) -> Result<Report, RunError> {
        let cx = self.complex()?;
        let mut table = Vec::new();
        for sl in cx.slices.values() {
            let mut dims: BTreeMap<(i64, i64), usize> = BTreeMap::new();
            for g in &sl.grades {
                *dims.entry((g.r2, g.d)).or_default() += 1;
            }
            for ((r2, d), dim) in dims {
                table.push(GradeRow { h: half(sl.h2), r: half(r2), d, dim });
            }
        }
        let table = rows(&table);
        Ok(Report::new(cmd, self.model, Value::Array(table.clone()), table, Vec::new()))
    }

    fn character(&mut self, cmd: Command) -> Result<Report, RunError> {
        let (_, space) = self.ambient()?;
        let ch = space.character();
        let table = rows(&ch.rows.iter().map(|(g, n)| GradeRow { h: half(g.h2), r: half(g.r2), d: g.d, dim: *n }).collect::<Vec<_>>());
        let data = json!({ "series": ch.series(), "rows": table });
        Ok(Report::new(cmd, self.model, data, table, Vec::new()))
    }

    fn complex_build(&mut self, cmd: Command) -> Result<Report, RunError> {
        let crit = check_twice_critical(self.model.bosons.as_ref(), &self.model.g);
        let lie_dim = self.model.g.dim;
        let cx = self.complex()?;
        let table = rows(&cx.dims().iter().map(|((h2, d), n)| json!({ "h": half(*h2), "d": d, "dim": n })).collect::<Vec<_>>());
        let data = json!({
            "lie_dim": lie_dim,
            "twice_critical": crit,
            "ambient_dim": cx.space.dim(),
            "relative_dim": cx.slices.values().map(|s| s.dim()).sum::<usize>(),
            "dims": table,
        });
        Ok(Report::new(cmd, self.model, data, table, Vec::new()))
    }

    fn cohomology(&mut self, cmd: Command) -> Result<Report, RunError> {
        let emit = self.opts.emit_witnesses || self.model.config.flags.emit_witnesses;
        let (cx, o) = self.operators()?;
        let (hd, _, mut checks) = cohomology(cx, o, true);
        let (hd_minus, _, c) = cohomology(cx, o, false);
        checks.extend(c);
        let mut by_grade: BTreeMap<(i64, i64, i64), usize> = BTreeMap::new();
        let mut reps = Vec::new();
        let plus: BTreeMap<(String, i64), usize> = hd.iter().map(|r| ((r.h.clone(), r.d), r.dim)).collect();
        let minus: BTreeMap<(String, i64), usize> = hd_minus.iter().map(|r| ((r.h.clone(), r.d), r.dim)).collect();
        for (h2, sl) in &cx.slices {
            for d in sl.degrees() {
            let key = (half(*h2), d);
            let (dp, dm) = (plus.get(&key).copied().unwrap_or(0), minus.get(&key).copied().unwrap_or(0));
            let lap = &o.lap.0[h2];
            let mut r2s: Vec<i64> = sl.grades.iter().filter(|g| g.d == d).map(|g| g.r2).collect();
            r2s.dedup();
            let mut total = 0;
            for r2 in r2s {
                let idx = sl.indices(|g| g.d == d && g.r2 == r2);
                let dim = kernel(&lap.select_cols(&idx)).ncols;
                total += dim;
                by_grade.insert((*h2, r2, d), dim);
            }
            let at = format!("(h={}, d={d})", half(*h2));
            checks.push(if total == dp && dm == dp {
                Check::pass(format!("H(Q+) = H(Q-) = sum over R of harmonic dims {at}"))
            } else {
                Check::fail(format!("H(Q+) = H(Q-) = sum over R of harmonic dims {at}"), format!("H(Q+) {dp}, H(Q-) {dm}, sum over R {total}"))
            });
            if emit && dp > 0 {
                let basis = harmonic_basis(cx, o, *h2, d);
                reps.push(json!({ "h": half(*h2), "d": d, "states": column_states(cx, *h2, &basis) }));
            }
            }
        }
        let table = rows(&by_grade.iter().map(|((h2, r2, d), dim)| GradeRow { h: half(*h2), r: half(*r2), d: *d, dim: *dim }).collect::<Vec<_>>());
        let mut data = json!({ "rows": table });
        if emit {
            data["representatives"] = Value::Array(reps);
        }
        Ok(Report::new(cmd, self.model, data, table, checks))
    }

    fn hodge(&mut self, cmd: Command) -> Result<Report, RunError> {
        let (cx, o) = self.operators()?;
        let hr = hodge_report(cx, o);
        let (ddc, c2) = check_ddc_lemma(cx, o);
        let (usp2, c3) = usp2_on_cohomology(cx, o);
        let mut checks = hr.checks.clone();
        checks.extend(c2);
        checks.extend(c3);
        let table = rows(&hr.rows);
        let data = json!({ "rows": table, "euler": hr.euler, "ddc": ddc, "usp2": usp2 });
        Ok(Report::new(cmd, self.model, data, table, checks))
    }

    fn quartets(&mut self, cmd: Command) -> Result<Report, RunError> {
        let emit = self.opts.emit_witnesses || self.model.config.flags.emit_witnesses;
        let (cx, o) = self.operators()?;
        let mut reports = Vec::new();
        let mut table = Vec::new();
        let mut checks = Vec::new();
        for h2 in cx.slices.keys() {
            let q = quartet_decompose(cx, o, *h2)?;
            checks.extend(q.checks.iter().cloned());
            let mut v = serde_json::to_value(&q).unwrap();
            v.as_object_mut().unwrap().remove("checks");
            if emit {
                for (k, qt) in q.quartets.iter().enumerate() {
                    let head = SMat::from_columns(cx.slices[h2].dim(), &[qt.vectors[0].clone()]);
                    v["quartets"][k]["head"] = Value::String(column_states(cx, *h2, &head).remove(0));
                }
            }
            for qt in &q.quartets {
                table.push(json!({ "h": qt.h, "d": qt.d, "eigenvalue": qt.eigenvalue, "norms": qt.norms }));
            }
            reports.push(v);
        }
        Ok(Report::new(cmd, self.model, Value::Array(reports), table, checks))
    }

    fn formality(&mut self, cmd: Command) -> Result<Report, RunError> {
        let (cx, o) = self.operators()?;
        let (r, checks) = formality_dims(cx, o);
        let table = rows(&r);
        Ok(Report::new(cmd, self.model, Value::Array(table.clone()), table, checks))
    }

    fn iterated(&mut self, cmd: Command) -> Result<Report, RunError> {
        let parts = self.model.partition.clone();
        let cx = self.complex()?;
        let (r, checks) = iterated_cohomology(cx, &parts)?;
        let table = rows(&r);
        let data = json!({ "partition": parts, "rows": table });
        Ok(Report::new(cmd, self.model, data, table, checks))
    }

    fn hl_ring(&mut self, cmd: Command) -> Result<Report, RunError> {
        let (data, table, checks) = self.hl_data()?;
        Ok(Report::new(cmd, self.model, data, table, checks))
    }

    fn hl_data(&mut self) -> Result<(Value, Vec<Value>, Vec<Check>), RunError> {
        let deg = self.model.config.hl_degree_max;
        let g = self.model.g.clone();
        let rep = self.model.bosons.clone();
        let mut checks = Vec::new();
        let mut matter = Value::Null;
        if let Some(rep) = &rep {
            checks.push(check_comoment(rep, &g));
            let ring = HlRing::build(&FreeFields::bosons(rep), deg)?;
            checks.extend(ring.check_axioms(deg.min(2)));
            checks.push(ring.check_against_modes(deg.min(2)));
            matter = json!({ "dims_by_degree": ring.dims_by_degree(), "dims": ring.dims() });
        }
        let kz = Koszul::new(&g, rep.as_ref());
        let (koszul, c) = kz.reduce(deg);
        checks.extend(c);
        let (cx, o) = self.operators()?;
        let sector = hl_sector(cx, o);
        checks.extend(check_pva_kahler(cx, o));
        let top = deg.min(cx.h2_max as usize);
        for kr in koszul.iter().filter(|k| k.degree <= top) {
            let found = sector.iter().find(|s| s.h == half(kr.degree as i64) && s.r == kr.r && s.d == kr.d);
            let (coh, harm) = found.map_or((0, 0), |s| (s.cohomology, s.harmonic));
            let name = format!("Koszul = HL sector of the complex (degree {}, R={}, d={})", kr.degree, kr.r, kr.d);
            checks.push(if coh == kr.cohomology && harm == kr.cohomology {
                Check::pass(name)
            } else {
                Check::fail(name, format!("Koszul {}, Q+ cohomology {coh}, harmonic {harm}", kr.cohomology))
            });
        }
        for s in sector.iter().filter(|s| s.cohomology > 0) {
            let d2 = koszul.iter().any(|k| half(k.degree as i64) == s.h && k.r == s.r && k.d == s.d);
            let inside = koszul.iter().any(|k| half(k.degree as i64) == s.h);
            if inside && !d2 {
                checks.push(Check::fail("HL sector grades covered by the Koszul model", format!("h={}, R={}, d={}", s.h, s.r, s.d)));
            }
        }
        let table = rows(&koszul);
        let data = json!({
            "degree_max": deg,
            "quadratic_invariants": kz.quadratic_invariants(),
            "koszul": table,
            "complex": sector,
            "matter": matter,
        });
        Ok((data, table, checks))
    }

    fn verify(&mut self, cmd: Command, s: Suite) -> Result<Report, RunError> {
        let suites: Vec<Suite> = match s {
            Suite::All => vec![Suite::Algebra, Suite::Unitarity, Suite::Brst, Suite::Hodge],
            s => vec![s],
        };
        let mut checks = Vec::new();
        let mut summary = Vec::new();
        for s in suites {
            let c = match s {
                Suite::Algebra => self.verify_algebra()?,
                Suite::Unitarity => self.verify_unitarity()?,
                Suite::Brst => self.verify_brst()?,
                Suite::Hodge => self.verify_hodge()?,
                Suite::All => unreachable!(),
            };
            summary.push(json!({ "suite": s.name(), "checks": c.len(), "failed": c.iter().filter(|x| !x.ok).count() }));
            checks.extend(c.into_iter().map(|mut x| {
                x.name = format!("{}: {}", s.name(), x.name);
                x
            }));
        }
        Ok(Report::new(cmd, self.model, json!({ "suites": summary }), Vec::new(), checks))
    }

    fn system<'b>(&'b self, ff: &'b FreeFields) -> System<'b> {
        System { name: self.model.config.name.clone(), ff, action: self.model.bosons.as_ref().map(|r| (&self.model.g, r)) }
    }

    fn verify_algebra(&mut self) -> Result<Vec<Check>, RunError> {
        let g = &self.model.g;
        let mut checks = vec![match LieAlgebra::from_raw(g.f.clone(), g.k.clone()) {
            Ok(_) => Check::pass("structure constants antisymmetric, Jacobi, K invariant"),
            Err(e) => Check::fail("structure constants antisymmetric, Jacobi, K invariant", e.to_string()),
        }];
        let crit = check_twice_critical(self.model.bosons.as_ref(), g);
        checks.push(if crit.twice_critical { Check::pass("twice-critical level") } else { Check::fail("twice-critical level", crit.to_string().trim_end().to_string()) });

        let ff = self.model.free_fields();
        let sys = self.system(&ff);
        let inv = invariants(&ff, sys.action);
        if self.model.bosons.is_some() {
            // k_AB = 2 h^v K_AB on simple factors and 0 on abelian ones
            let mut bad = None;
            for (i, fa) in g.factors.iter().enumerate() {
                let hv = rat_int(fa.dual_coxeter.unwrap_or(0));
                for a in g.factor_range(i) {
                    for b in 0..g.dim {
                        let want = Scalar::real(&g.k[a][b] * &hv * rat_int(2)).to_string();
                        if inv.level[a][b] != want && bad.is_none() {
                            bad = Some(format!("k[{a}][{b}] = {} but 2 h^v K = {want}", inv.level[a][b]));
                        }
                    }
                }
            }
            checks.push(match bad {
                None => Check::pass("matter level = -2 h^v on each simple factor"),
                Some(w) => Check::fail("matter level = -2 h^v on each simple factor", w),
            });
        }
        let nb = (0..ff.ngens() as u16).filter(|&x| !ff.is_odd(x)).count() as i64;
        let nf = ff.ngens() as i64 - nb;
        let want = Scalar::frac(-nb - 2 * nf, 2).to_string();
        checks.push(if inv.central_charge == want {
            Check::pass("central charge = -(bosons)/2 - (fermions)")
        } else {
            Check::fail("central charge = -(bosons)/2 - (fermions)", format!("{} != {want}", inv.central_charge))
        });
        checks.extend(mode_algebra(&sys, self.model.h2_max)?);
        if self.model.fermions.is_none() {
            let gauge = self.model.gauge()?;
            checks.extend(check_good_action(&gauge, self.model.h2_max));
        }
        Ok(checks)
    }

    fn verify_unitarity(&mut self) -> Result<Vec<Check>, RunError> {
        let (ff, space) = self.ambient()?;
        Ok(crate::suite::unitarity(&self.system(&ff), &space))
    }

    fn verify_brst(&mut self) -> Result<Vec<Check>, RunError> {
        let (cx, o) = self.operators()?;
        let mut checks = check_kahler(cx, o);
        checks.extend(check_split(cx, o));
        checks.extend(check_explicit_split(cx, o)?);
        Ok(checks)
    }

    fn verify_hodge(&mut self) -> Result<Vec<Check>, RunError> {
        let parts = self.model.partition.clone();
        let (cx, o) = self.operators()?;
        let mut checks = hodge_report(cx, o).checks;
        for h2 in cx.slices.keys() {
            checks.extend(quartet_decompose(cx, o, *h2)?.checks);
        }
        checks.extend(check_ddc_lemma(cx, o).1);
        checks.extend(usp2_on_cohomology(cx, o).1);
        checks.extend(formality_dims(cx, o).1);
        if parts.len() > 1 {
            checks.extend(iterated_cohomology(cx, &parts)?.1);
        }
        let (_, _, hl) = self.hl_data()?;
        checks.extend(hl);
        Ok(checks)
    }
}

fn column_states(cx: &RelativeComplex, h2: i64, m: &SMat) -> Vec<String> {
    m.columns()
        .iter()
        .map(|col| {
            let mut s = State::new();
            for (i, c) in col {
                state_axpy(&mut s, c, &cx.vector_state(h2, *i));
            }
            fmt_state(&cx.gauge.ff, &s)
        })
        .collect()
}
