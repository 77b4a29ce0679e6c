//! Acceptance criteria 1-12. Runs every criterion, prints one PASS/FAIL line
//! each, and exits nonzero if any failed.
//!
//! All comparisons are exact over Q(q) (no numeric tolerance); the pinned
//! tolerances are the runtime budgets below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use qdiag::{run, CheckReport, Options};
use qdiag_core::hecke::{diag_kernel_of_p, formal_project_p, p_matrix, FormalWords};
use qdiag_core::pplactic::{ppk_count, RelationInstance};
use qdiag_core::qma::{diag_relation_kernel, expand_diagonal, DEFAULT_MAX_BLOCK};
use qdiag_core::rmat::pi;
use qdiag_core::symgroup::enumerate_perms;
use qdiag_core::{omega, DiagElt, HeckeElt, Perm, QMatrix, QScalar, Sign};

const SYSTD_BUDGET: Duration = Duration::from_secs(1);
const IDEMPOTENT_BUDGET: Duration = Duration::from_secs(1);
const PREPLACTIC_BUDGET: Duration = Duration::from_secs(60);
const CONJECTURE_BUDGET: Duration = Duration::from_secs(600);

type Verdict = Result<String, String>;

fn s(x: &str) -> QScalar {
    x.parse().unwrap()
}

fn opts() -> Options {
    Options::default()
}

fn run_ok(check: &str, o: &Options) -> Result<Vec<CheckReport>, String> {
    let reports = run(check, o).map_err(|e| format!("{check}: {e}"))?;
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => Err(format!("{check} failed: {}", r.witness.clone().unwrap_or_default())),
        None => Ok(reports),
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(
        elapsed < budget,
        format!("took {:.2?}, budget {:.0?}", elapsed, budget),
    )
}

fn scalars(v: &serde_json::Value) -> Vec<QScalar> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| s(x.as_str().unwrap()))
        .collect()
}

fn c1_systd_matrix() -> Verdict {
    let start = Instant::now();
    let reports = run_ok("systd", &opts())?;
    let elapsed = start.elapsed();
    let expected = [
        ["1", "0", "0", "0", "0", "0"],
        ["1", "w", "0", "0", "0", "0"],
        ["1", "0", "w", "0", "0", "0"],
        ["1", "0", "w", "0", "0", "w"],
        ["1", "w", "0", "0", "0", "w"],
        ["1", "w", "w", "w^2", "w^2", "w^3 + w"],
    ];
    let m = &reports[0].detail["matrix"];
    let mut equal = 0;
    for (i, row) in expected.iter().enumerate() {
        let got = scalars(&m[i]);
        for (j, e) in row.iter().enumerate() {
            ensure(got[j] == s(e), format!("entry ({i}, {j}): {} vs {e}", got[j]))?;
            equal += 1;
        }
    }
    within(elapsed, SYSTD_BUDGET)?;
    Ok(format!("{equal}/36 entries exact, {:.0?}", elapsed))
}

fn c2_systd_kernel() -> Verdict {
    let reports = run_ok("systd", &opts())?;
    let d = &reports[0].detail;
    ensure(d["kernel_dim"] == 1, "kernel is not one-dimensional")?;
    let k = scalars(&d["kernel"]);
    let expected: Vec<QScalar> = ["0", "1", "-1", "1", "-1", "0"].iter().map(|x| s(x)).collect();
    ensure(k == expected, format!("kernel {k:?}"))?;
    Ok("dim 1, c = (0, 1, -1, 1, -1, 0) over 123 132 213 231 312 321".into())
}

fn c3_two_letter_blocks() -> Verdict {
    let e = expand_diagonal(2, &[2, 1]).map_err(|e| e.to_string())?;
    let expected = QMatrix::from_dense(&[
        vec![s("1"), s("0")],
        vec![s("1"), s("w")],
        vec![s("1"), s("(q^2 + 1)*w")],
    ])
    .unwrap();
    ensure(e.matrix == expected, format!("weight (2,1) matrix\n{}", e.matrix))?;
    for (w, inst) in [
        (vec![2, 1], RelationInstance::lower_repeat(1, 2)),
        (vec![1, 2], RelationInstance::upper_repeat(1, 2)),
    ] {
        let k = expand_diagonal(2, &w).unwrap().matrix.left_kernel();
        let v = inst.poly.to_block_vec(&w).unwrap();
        ensure(k.dim() == 1 && k.contains(&v).unwrap(), format!("kernel of {w:?}"))?;
    }
    Ok("rows (1,0),(1,w),(1,(q^2+1)w); kernels spanned by the q^2-brackets".into())
}

fn c4_dimension_formula() -> Verdict {
    let mut got = Vec::new();
    for (d, want) in [(2, 2), (3, 7), (4, 16)] {
        let k = diag_relation_kernel(d, 3, DEFAULT_MAX_BLOCK).map_err(|e| e.to_string())?;
        let total: usize = k.values().map(|b| b.kernel.dim()).sum();
        ensure(total == want && ppk_count(d) == want, format!("d={d}: {total} vs {want}"))?;
        got.push(total.to_string());
    }
    Ok(format!("dims {} for d = 2, 3, 4", got.join(", ")))
}

fn c5_idempotents() -> Verdict {
    let start = Instant::now();
    let reports = run_ok("idempotents", &opts())?;
    let elapsed = start.elapsed();
    within(elapsed, IDEMPOTENT_BUDGET)?;
    let n = reports[0].detail["identities"].as_object().unwrap().len();
    Ok(format!("{n} identities exact, {:.0?}", elapsed))
}

fn c6_rhat() -> Verdict {
    let reports = run_ok("rhat", &opts())?;
    let ns: Vec<usize> = reports.iter().filter_map(|r| r.params.n).collect();
    ensure(ns == [2, 3, 4], format!("ran for {ns:?}"))?;
    Ok("quadratic, braid, FRT and zero pattern for n = 2, 3, 4".into())
}

fn c7_appendix() -> Verdict {
    let reports = run_ok("appendix", &opts())?;
    let totals: Vec<u64> = reports
        .iter()
        .map(|r| r.detail["entries_6x6"].as_u64().unwrap() + r.detail["entries_3x3"].as_u64().unwrap())
        .collect();
    ensure(totals == [90, 90], format!("entries {totals:?}"))?;
    Ok("90 entries per sign equal".into())
}

fn c8_braid_identity() -> Verdict {
    run_ok("braid-identity", &opts())?;
    let l = DiagElt::from_terms(
        3,
        [("132", 1), ("312", -1), ("213", -1), ("231", 1)]
            .map(|(a, c)| (a.parse::<Perm>().unwrap(), QScalar::from_int(c))),
    )
    .unwrap();
    let expect = FormalWords::from([(vec![1, 2, 1], omega()), (vec![2, 1, 2], -omega())]);
    ensure(formal_project_p(&l) == expect, "formal difference")?;
    Ok("w (T_s1s2s1 - T_s2s1s2) before the braid relation, 0 after".into())
}

fn c9_preplactic() -> Verdict {
    let start = Instant::now();
    ensure(diag_kernel_of_p(3).unwrap().dim() == 1, "dim ker p at r = 3")?;
    let reports = run_ok("preplactic", &opts())?;
    let elapsed = start.elapsed();
    within(elapsed, PREPLACTIC_BUDGET)?;
    let r4 = reports.iter().find(|r| r.params.r == Some(4)).ok_or("no r = 4 report")?;
    let equal: Vec<String> = r4.detail["variants"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["equal"] == true)
        .map(|v| format!("{} ({})", v["variant"].as_str().unwrap(), v["method"].as_str().unwrap()))
        .collect();
    ensure(!equal.is_empty(), "no variant equals the kernel at r = 4")?;
    Ok(format!(
        "dim ker = 1 at r = 3; r = 4 kernel dim {} equals: {}; {:.0?}",
        r4.detail["dim_kernel"],
        equal.join(", "),
        elapsed
    ))
}

fn c10_lemma_brute() -> Verdict {
    let reports = run("lemma-brute", &opts()).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for r in &reports {
        let sign = r.params.sign.unwrap();
        for w in r.detail["weights"].as_array().unwrap() {
            ensure(w["residual_zero"] == true, format!("{sign} I={}: nonzero residual", w["index"]))?;
        }
        ensure(r.detail["orthogonality"] == true, "orthogonality precheck")?;
        if let Some(wit) = &r.witness {
            notes.push(format!("{sign}: {wit}"));
        }
    }
    let expected = [
        (Sign::Plus, "-(w^3 - w^2 - 2)/(2*w*[3]^2)"),
        (Sign::Minus, "-(w^3 + w^2 + 2)/(2*w*[3]^2)"),
    ];
    for (sign, printed) in expected {
        let r = reports.iter().find(|r| r.params.sign == Some(sign)).unwrap();
        let ws = r.detail["weights"].as_array().unwrap();
        let c = |idx: &str| {
            ws.iter()
                .find(|w| w["index"] == idx)
                .and_then(|w| w["scalar"].as_str())
                .map(s)
        };
        if c("122") != Some(s("[2]/(4*w*[3])")) || c("123") != Some(s(printed)) {
            return Err(format!("residuals exactly zero, scalars differ: {}", notes.join(" | ")));
        }
    }
    Ok("scalars recovered, residuals exactly zero".into())
}

fn c11_conjecture() -> Verdict {
    let start = Instant::now();
    let mut done = Vec::new();
    for r in run_ok("conjecture", &opts())? {
        done.push(format!("({},{})", r.params.n.unwrap(), r.params.r.unwrap()));
    }
    for r in 5..=6 {
        let o = Options {
            n: Some(1),
            r: Some(r),
            ..opts()
        };
        run_ok("conjecture", &o)?;
        done.push(format!("(1,{r})"));
    }
    let elapsed = start.elapsed();
    within(elapsed, CONJECTURE_BUDGET)?;
    Ok(format!("PASS for {}; {:.1?}", done.join(" "), elapsed))
}

fn hecke_elt(r: usize) -> impl Strategy<Value = HeckeElt> {
    let n = (1..=r).product::<usize>();
    prop::collection::vec((0..n, -3i64..=3, -2i32..=2), 1..5).prop_map(move |terms| {
        let perms = enumerate_perms(r).unwrap();
        HeckeElt::from_terms(
            r,
            terms
                .into_iter()
                .map(|(k, c, e)| (perms[k].clone(), QScalar::from_int(c) * QScalar::q_pow(e))),
        )
        .unwrap()
    })
}

fn reduced_words(p: &Perm) -> Vec<Vec<usize>> {
    if p.is_identity() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 1..p.rank() {
        let shorter = p.mul_s_right(i);
        if shorter.length() < p.length() {
            for mut w in reduced_words(&shorter) {
                w.push(i);
                out.push(w);
            }
        }
    }
    out
}

fn rank_nullity(m: &QMatrix) -> bool {
    let rank = m.rank();
    rank + m.kernel().dim() == m.ncols() && rank + m.left_kernel().dim() == m.nrows()
}

fn c12_properties() -> Verdict {
    let mut counts = Vec::new();
    let mut assoc = 0;
    for r in [3, 4] {
        let mut runner = TestRunner::new(Config {
            cases: 100,
            failure_persistence: None,
            ..Config::default()
        });
        runner
            .run(&(hecke_elt(r), hecke_elt(r), hecke_elt(r)), |(a, b, c)| {
                let l = a.mul(&b).unwrap().mul(&c).unwrap();
                let rr = a.mul(&b.mul(&c).unwrap()).unwrap();
                prop_assert_eq!(l, rr);
                Ok(())
            })
            .map_err(|e| format!("associativity in H{r}: {e}"))?;
        assoc += 100;
    }
    counts.push(format!("{assoc} associativity triples"));

    let mut words = 0;
    for r in 2..=4 {
        for p in enumerate_perms(r).unwrap() {
            for w in reduced_words(&p) {
                ensure(
                    HeckeElt::from_word(&w, r).unwrap() == HeckeElt::basis(p.clone()),
                    format!("reduced word {w:?} of {p}"),
                )?;
                words += 1;
            }
        }
    }
    counts.push(format!("{words} reduced words"));

    let mut runner = TestRunner::new(Config {
        cases: 50,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(hecke_elt(3), hecke_elt(3)), |(a, b)| {
            let lhs = pi(&a.mul(&b).unwrap(), 3, 3).unwrap();
            let rhs = pi(&a, 3, 3).unwrap().mul(&pi(&b, 3, 3).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| format!("pi homomorphism: {e}"))?;
    counts.push("50 pi homomorphism pairs".into());

    let mut matrices: Vec<QMatrix> = (2..=5).map(|r| p_matrix(r).unwrap()).collect();
    for (d, r) in [(2, 3), (3, 3), (2, 4), (3, 4)] {
        let table = qdiag_core::qma::deg2_table(d).unwrap();
        for w in qdiag_core::symgroup::weight_blocks(d, r).unwrap().keys() {
            let quot = qdiag_core::qma::BlockQuotient::with_table(
                d,
                qdiag_core::qma::BlockKey::diagonal(w),
                &table,
                DEFAULT_MAX_BLOCK,
            )
            .unwrap();
            matrices.push(qdiag_core::qma::expand_diagonal_in(&quot).unwrap().matrix);
        }
    }
    for sign in [Sign::Plus, Sign::Minus] {
        matrices.push(pi(&qdiag_core::hecke::e21(sign), 3, 3).unwrap());
    }
    let bad = matrices.iter().filter(|m| !rank_nullity(m)).count();
    ensure(bad == 0, format!("{bad} matrices violate rank-nullity"))?;
    counts.push(format!("rank-nullity on {} matrices", matrices.len()));
    Ok(format!("{}; zero failures", counts.join(", ")))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 12] = [
        ("expansion matrix of the multilinear block", c1_systd_matrix),
        ("kernel of the multilinear block", c2_systd_kernel),
        ("weight (2,1) and (1,2) blocks", c3_two_letter_blocks),
        ("degree-3 dimension formula", c4_dimension_formula),
        ("idempotents of H3", c5_idempotents),
        ("R-matrix suite", c6_rhat),
        ("appendix matrices", c7_appendix),
        ("braid identity", c8_braid_identity),
        ("pre-plactic kernel", c9_preplactic),
        ("lemma brute scalars", c10_lemma_brute),
        ("conjecture verdicts", c11_conjecture),
        ("property suites", c12_properties),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
