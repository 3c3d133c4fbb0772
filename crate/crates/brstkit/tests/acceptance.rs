//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest harness so the lines
//! always show up in `cargo test` output.

use brstkit::brst::{check_explicit_split, check_kahler, check_split, Check, Gauge, Operators, RelativeComplex};
use brstkit::config::{double_nf4, nf4, Model};
use brstkit::fock::{FreeFields, GradedSpace};
use brstkit::hl::{check_pva_kahler, hl_sector, Koszul};
use brstkit::hodge::{check_ddc_lemma, cohomology_table, formality_dims, hodge_report, iterated_cohomology, kunneth, quartet_decompose};
use brstkit::lie::{load_preset, SymplecticRep};
use brstkit::linalg::{rank, SMat};
use brstkit::scalar::Scalar;
use brstkit::suite::{invariants, mode_algebra, unitarity, System};
use std::process::Command;
use std::time::Instant;

const BUDGET: usize = 2_000_000;

type Outcome = Result<String, String>;

fn all_pass(checks: &[Check]) -> Result<usize, String> {
    match checks.iter().find(|c| !c.ok) {
        None => Ok(checks.len()),
        Some(c) => Err(format!("{}: {}", c.name, c.witness.as_deref().unwrap_or("?"))),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Nf4 {
    model: Model,
    cx: RelativeComplex,
    ops: Operators,
    /// Also up to h = 2, the first weight with quartets.
    deep: (RelativeComplex, Operators),
}

impl Nf4 {
    fn new() -> Self {
        let model = nf4().validate().unwrap();
        assert_eq!(model.h2_max, 3);
        let cx = RelativeComplex::build(model.gauge().unwrap(), model.h2_max, BUDGET).unwrap();
        let ops = cx.operators().unwrap();
        let deep = RelativeComplex::build(model.gauge().unwrap(), 4, BUDGET).unwrap();
        let deep_ops = deep.operators().unwrap();
        Nf4 { model, cx, ops, deep: (deep, deep_ops) }
    }

    fn both(&self) -> [(&RelativeComplex, &Operators); 2] {
        [(&self.cx, &self.ops), (&self.deep.0, &self.deep.1)]
    }
}

fn mode_algebra_suite(nf: &Nf4) -> Outcome {
    let m = &nf.model;
    let ff = m.free_fields();
    let rep = m.bosons.as_ref().unwrap();
    let sys = System { name: "CFG-NF4".into(), ff: &ff, action: Some((&m.g, rep)) };
    let mut n = all_pass(&mode_algebra(&sys, 3).map_err(|e| e.to_string())?)?;

    let sl2 = load_preset("sl2").unwrap();
    let c2 = SymplecticRep::doublets(&sl2, 1).unwrap();
    let sb = FreeFields::bosons(&c2);
    n += all_pass(&mode_algebra(&System { name: "Sb[C^2]".into(), ff: &sb, action: Some((&sl2, &c2)) }, 6).map_err(|e| e.to_string())?)?;
    let sf = FreeFields::ghosts(&sl2);
    n += all_pass(&mode_algebra(&System { name: "Sf[C^2 x sl2]".into(), ff: &sf, action: None }, 6).map_err(|e| e.to_string())?)?;
    Ok(format!("{n} identities"))
}

fn level_and_central_charge(nf: &Nf4) -> Outcome {
    let m = &nf.model;
    let ff = m.free_fields();
    let inv = invariants(&ff, Some((&m.g, m.bosons.as_ref().unwrap())));
    let def = m.g.defining.as_ref().unwrap();
    for a in 0..m.g.dim {
        for b in 0..m.g.dim {
            // -4 Tr(T_a T_b) in the defining representation
            let mut tr = Scalar::int(0);
            for i in 0..2 {
                for j in 0..2 {
                    tr += &(&def[a][i][j] * &def[b][j][i]);
                }
            }
            let want = (&tr * &Scalar::int(-4)).to_string();
            ensure(inv.level[a][b] == want, || format!("k[{a}][{b}] = {}, want {want}", inv.level[a][b]))?;
        }
    }
    ensure(inv.central_charge == "-14", || format!("c = {}", inv.central_charge))?;
    Ok("k = -4 Tr, c = -14".into())
}

fn graded_unitarity(nf: &Nf4) -> Outcome {
    let m = &nf.model;
    let ff = m.free_fields();
    let space = GradedSpace::enumerate(&ff, m.h2_max, BUDGET).unwrap();
    let sys = System { name: "CFG-NF4".into(), ff: &ff, action: Some((&m.g, m.bosons.as_ref().unwrap())) };
    let checks = unitarity(&sys, &space);
    ensure(checks.iter().any(|c| c.name.contains("positive")), || "no positivity check ran".into())?;
    ensure(checks.iter().any(|c| c.name.contains("J^[")), || "no shortening check ran".into())?;
    Ok(format!("{} checks on {} states", all_pass(&checks)?, space.dim()))
}

fn kahler_package(nf: &Nf4) -> Outcome {
    let mut n = 0;
    for (cx, o) in nf.both() {
        let mut checks = check_kahler(cx, o);
        checks.extend(check_split(cx, o));
        checks.extend(check_explicit_split(cx, o).map_err(|e| e.to_string())?);
        n += all_pass(&checks)?;
    }
    Ok(format!("{n} identities"))
}

fn hodge_and_quartets(nf: &Nf4) -> Outcome {
    let mut summary = Vec::new();
    for (cx, o) in nf.both() {
        let hr = hodge_report(cx, o);
        let mut n = all_pass(&hr.checks)?;
        for r in &hr.rows {
            let at = format!("(h={}, d={})", r.h, r.d);
            ensure(r.chain == r.harmonic + r.im_q_plus + r.im_qbar_plus, || format!("chain != harmonic + im Q+ + im Qbar+ at {at}"))?;
            ensure((r.chain - r.harmonic) % 4 == 0, || format!("non-harmonic part not divisible by 4 at {at}"))?;
            ensure(r.h_minus == r.harmonic && r.h_plus == r.harmonic, || format!("H(Q-), H(Q+), ker Lap differ at {at}"))?;
        }
        let mut quartets = 0;
        for h2 in cx.slices.keys() {
            let q = quartet_decompose(cx, o, *h2).map_err(|e| e.to_string())?;
            n += all_pass(&q.checks)?;
            ensure(q.dim == q.harmonic + 4 * q.quartets.len(), || format!("h={}: {} != {} + 4*{}", q.h, q.dim, q.harmonic, q.quartets.len()))?;
            quartets += q.quartets.len();
        }
        summary.push(format!("h<={}: {} grades, {n} checks, {quartets} quartets", brstkit::fock::half(cx.h2_max), hr.rows.len()));
    }
    Ok(summary.join("; "))
}

fn ddc_lemma(nf: &Nf4) -> Outcome {
    let mut n = 0;
    for (cx, o) in nf.both() {
        let (rows, checks) = check_ddc_lemma(cx, o);
        all_pass(&checks)?;
        for r in &rows {
            ensure(r.exact_minus == r.im_qm_qp && r.symmetric_quotient == r.h_minus, || format!("(h={}, d={}): {r:?}", r.h, r.d))?;
        }
        n += rows.len();
    }
    Ok(format!("{n} grades"))
}

/// Invariants of sl2 on Sym^2 of the matter space, computed from the representation matrices.
fn quadratic_invariants_oracle(rep: &SymplecticRep) -> (usize, usize) {
    let n = rep.dim;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let pos = |i: usize, j: usize| pairs.iter().position(|&p| p == (i.min(j), i.max(j))).unwrap();
    let mut rows = vec![vec![Scalar::int(0); pairs.len()]; 0];
    for t in &rep.rep {
        let mut m = vec![vec![Scalar::int(0); pairs.len()]; pairs.len()];
        for (col, &(i, j)) in pairs.iter().enumerate() {
            // T(e_i e_j) = (T e_i) e_j + e_i (T e_j)
            for k in 0..n {
                m[pos(k, j)][col] += &t[k][i];
                m[pos(i, k)][col] += &t[k][j];
            }
        }
        rows.extend(m);
    }
    let r = rank(&SMat::from_dense(&rows));
    (pairs.len(), pairs.len() - r)
}

fn benchmark_28(nf: &Nf4) -> Outcome {
    let table = cohomology_table(&nf.cx).map_err(|e| e.to_string())?;
    let h = table.get(&(2, 0)).copied().unwrap_or(0);
    let (sym2, inv) = quadratic_invariants_oracle(nf.model.bosons.as_ref().unwrap());
    // Sym^2(C^2 x C^8) = Sym^2 C^2 x Sym^2 C^8 + L^2 C^2 x L^2 C^8 and the adjoint 3 has no invariants
    ensure(sym2 == 3 * 36 + 28, || format!("dim Sym^2 = {sym2}"))?;
    ensure(inv == 28 && h == 28, || format!("H(h=1, d=0) = {h}, oracle {inv}"))?;
    Ok("H(h=1, d=0) = 28 = oracle".into())
}

fn formality(nf: &Nf4) -> Outcome {
    let mut n = 0;
    for (cx, o) in nf.both() {
        let (rows, checks) = formality_dims(cx, o);
        all_pass(&checks)?;
        for r in &rows {
            ensure(r.h_v_minus == r.h_ker_plus_minus && r.h_ker_plus_minus == r.h_v_plus && r.induced_zero, || format!("{r:?}"))?;
        }
        n += rows.len();
    }
    Ok(format!("{n} grades"))
}

fn iterated() -> Outcome {
    let model = double_nf4().validate().unwrap();
    assert_eq!(model.h2_max, 2);
    let cx = RelativeComplex::build(model.gauge().unwrap(), 2, BUDGET).unwrap();
    let (rows, checks) = iterated_cohomology(&cx, &model.partition).map_err(|e| e.to_string())?;
    all_pass(&checks)?;
    let sl2 = load_preset("sl2").unwrap();
    let single = RelativeComplex::build(Gauge::new(sl2.clone(), Some(SymplecticRep::doublets(&sl2, 8).unwrap()), false).unwrap(), 2, BUDGET).unwrap();
    let one = cohomology_table(&single).map_err(|e| e.to_string())?;
    let product = kunneth(&one, &one, 2);
    for r in &rows {
        let p = product.get(&(r.h2, r.d)).copied().unwrap_or(0);
        ensure(r.iterated == r.total && r.total == p, || format!("(h={}, d={}): iterated {}, total {}, product {p}", r.h, r.d, r.iterated, r.total))?;
    }
    for ((h2, d), p) in &product {
        ensure(*p == 0 || rows.iter().any(|r| r.h2 == *h2 && r.d == *d), || format!("product {p} at ({h2}, {d}) missing"))?;
    }
    Ok(format!("{} grades", rows.len()))
}

fn hl_koszul(nf: &Nf4) -> Outcome {
    let n = all_pass(&check_pva_kahler(&nf.cx, &nf.ops))?;
    let m = &nf.model;
    let rep = m.bosons.as_ref().unwrap();
    let (koszul, checks) = Koszul::new(&m.g, Some(rep)).reduce(2);
    all_pass(&checks)?;
    let (_, quad) = quadratic_invariants_oracle(rep);
    // classical invariants: constants, no linear ones, the quadratic count
    for (deg, want) in [(0, 1), (1, 0), (2, quad)] {
        let got: usize = koszul.iter().filter(|k| k.degree == deg && k.d == 0).map(|k| k.cohomology).sum();
        ensure(got == want, || format!("Koszul degree {deg} ghost 0: {got}, oracle {want}"))?;
    }
    let sector = hl_sector(&nf.cx, &nf.ops);
    for k in &koszul {
        let h = brstkit::fock::half(k.degree as i64);
        let s = sector.iter().find(|s| s.h == h && s.r == k.r && s.d == k.d);
        let (c, harm) = s.map_or((0, 0), |s| (s.cohomology, s.harmonic));
        ensure(c == k.cohomology && harm == k.cohomology, || format!("degree {} R {} d {}: Koszul {}, HL {c}, harmonic {harm}", k.degree, k.r, k.d, k.cohomology))?;
    }
    let covered: Vec<String> = koszul.iter().map(|k| brstkit::fock::half(k.degree as i64)).collect();
    for s in sector.iter().filter(|s| s.cohomology > 0 && covered.contains(&s.h)) {
        ensure(koszul.iter().any(|k| brstkit::fock::half(k.degree as i64) == s.h && k.r == s.r && k.d == s.d), || format!("HL class at h={} R={} d={} not in Koszul", s.h, s.r, s.d))?;
    }
    Ok(format!("{n} PVA identities, {} Koszul grades", koszul.len()))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = || -> Result<(Vec<u8>, Vec<u8>), String> {
        let out = Command::new(env!("CARGO_BIN_EXE_brstkit"))
            .args(["--config", "nf4", "--h-max", "1", "--out"])
            .arg(dir.path())
            .args(["verify", "--all"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
        let report = std::fs::read(dir.path().join("verify-all.json")).map_err(|e| e.to_string())?;
        let stdout = Command::new(env!("CARGO_BIN_EXE_brstkit")).args(["--config", "nf4", "--h-max", "1", "verify", "all"]).output().map_err(|e| e.to_string())?.stdout;
        Ok((report, stdout))
    };
    // the second run reads the cached complex written by the first
    let (a, sa) = run()?;
    let (b, sb) = run()?;
    ensure(!a.is_empty() && a == b, || "report files differ".into())?;
    ensure(sa == a && sb == b, || "stdout differs from the report file".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() {
    let start = Instant::now();
    let nf = Nf4::new();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("mode algebra", Box::new(|| mode_algebra_suite(&nf))),
        ("level and central charge", Box::new(|| level_and_central_charge(&nf))),
        ("graded unitarity", Box::new(|| graded_unitarity(&nf))),
        ("Kahler package", Box::new(|| kahler_package(&nf))),
        ("Hodge decomposition and quartets", Box::new(|| hodge_and_quartets(&nf))),
        ("Q-Q+ lemma and symmetric quotient", Box::new(|| ddc_lemma(&nf))),
        ("H(h=1, d=0) = 28", Box::new(|| benchmark_28(&nf))),
        ("formality", Box::new(|| formality(&nf))),
        ("iterated cohomology", Box::new(iterated)),
        ("HL ring and Koszul model", Box::new(|| hl_koszul(&nf))),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!("{tag} {:>2} {name}: {detail} ({:.1}s)", i + 1, t.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed in {:.0}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
