//! The individual checks. Each returns one outcome per parameter setting; a
//! witness string is attached exactly when something failed.

use rayon::prelude::*;
use serde_json::json;

use qdiag_core::hecke::{
    e21, evaluate_formal, formal_p_of_basis, formal_project_p, idempotents_r2, idempotents_r3,
    project_p, theta, FormalWords, MAX_DIAG_RANK,
};
use qdiag_core::pplactic::{
    assemble_conjecture, conjecture_block, conjecture_weights, lemma_brute_check, ppk_count,
    preplactic_check, BlockVerdict, RelationInstance,
};
use qdiag_core::qma::{deg2_table, diag_relation_kernel, expand_diagonal, golden_systd, golden_weight21};
use qdiag_core::rmat::{
    build_rhat, compare_appendix, pi, reading_reports, reproduces_frt2, satisfies_braid,
    satisfies_quadratic, select_reading, weight_preserving, RhatReading,
};
use qdiag_core::symgroup::enumerate_perms;
use qdiag_core::{omega, DiagElt, HeckeElt, Perm, QMatrix, QScalar, RmatError, Sign};

use crate::{BlockCache, CliError, Options, Outcome, ReportParams};

const MAX_HECKE_AXIOM_RANK: usize = 5;
const MAX_RHAT_DIM: usize = 6;

/// Default `(d, r)` pairs of the conjecture check.
pub const CONJECTURE_DEFAULTS: [(usize, usize); 7] = [(1, 3), (1, 4), (2, 3), (3, 3), (4, 3), (2, 4), (3, 4)];

fn perm(s: &str) -> Perm {
    s.parse().expect("valid permutation literal")
}

fn params_r(r: usize) -> ReportParams {
    ReportParams {
        r: Some(r),
        ..Default::default()
    }
}

fn params_nr(n: usize, r: usize) -> ReportParams {
    ReportParams {
        n: Some(n),
        r: Some(r),
        ..Default::default()
    }
}

/// Collects named boolean facts; the first false one becomes the witness.
#[derive(Default)]
struct Facts {
    items: Vec<(String, bool)>,
}

impl Facts {
    fn add(&mut self, name: impl Into<String>, ok: bool) {
        self.items.push((name.into(), ok));
    }

    fn witness(&self) -> Option<String> {
        self.items
            .iter()
            .find(|(_, ok)| !ok)
            .map(|(n, _)| format!("{n} does not hold"))
    }

    fn passed(&self) -> usize {
        self.items.iter().filter(|(_, ok)| *ok).count()
    }

    fn json(&self) -> serde_json::Value {
        self.items.iter().map(|(n, ok)| (n.clone(), json!(ok))).collect::<serde_json::Map<_, _>>().into()
    }
}

fn matrix_text(rows: &[String], cols: &[String], m: &QMatrix) -> String {
    let mut out = format!("columns: {}\n", cols.join(" "));
    for (label, row) in rows.iter().zip(m.to_strings()) {
        out.push_str(&format!("{label}: ({})\n", row.join(", ")));
    }
    out
}

fn first_difference(rows: &[String], cols: &[String], got: &QMatrix, expected: &QMatrix) -> Option<String> {
    if (got.nrows(), got.ncols()) != (expected.nrows(), expected.ncols()) {
        return Some(format!(
            "shape {}x{} differs from expected {}x{}",
            got.nrows(),
            got.ncols(),
            expected.nrows(),
            expected.ncols()
        ));
    }
    for (i, row) in rows.iter().enumerate().take(expected.nrows()) {
        for (j, col) in cols.iter().enumerate().take(expected.ncols()) {
            let (g, e) = (got.get(i, j), expected.get(i, j));
            if g != e {
                return Some(format!("entry ({row}, {col}): computed {g}, expected {e}"));
            }
        }
    }
    None
}

pub fn hecke_axioms(opts: &Options) -> Result<Vec<Outcome>, CliError> {
    let ranks = opts.r.map_or_else(|| vec![2, 3, 4], |r| vec![r]);
    let mut out = Vec::new();
    for r in ranks {
        if r > MAX_HECKE_AXIOM_RANK {
            return Err(CliError::BoundExceeded {
                what: "r",
                value: r,
                bound: MAX_HECKE_AXIOM_RANK,
            });
        }
        let mut facts = Facts::default();
        let t = |i| HeckeElt::generator(i, r).expect("valid generator");
        let one = HeckeElt::one(r);
        for i in 1..r {
            let lhs = t(i).mul(&t(i))?;
            let rhs = one.axpy(&omega(), &t(i))?;
            facts.add(format!("T{i}^2 = 1 + w T{i}"), lhs == rhs);
        }
        for i in 1..r.saturating_sub(1) {
            let a = t(i).mul(&t(i + 1))?.mul(&t(i))?;
            let b = t(i + 1).mul(&t(i))?.mul(&t(i + 1))?;
            facts.add(format!("braid at {i}"), a == b);
        }
        for i in 1..r {
            for j in i + 2..r {
                facts.add(format!("T{i} T{j} = T{j} T{i}"), t(i).mul(&t(j))? == t(j).mul(&t(i))?);
            }
        }
        let perms = enumerate_perms(r)?;
        let basis = |p: &Perm| HeckeElt::basis(p.clone());
        // length-additive products are basis elements
        let pairs: Vec<(usize, usize)> = if r <= 4 {
            (0..perms.len()).flat_map(|a| (0..perms.len()).map(move |b| (a, b))).collect()
        } else {
            (0..perms.len()).map(|k| (k, (7 * k + 3) % perms.len())).collect()
        };
        let mut additive = 0;
        let mut additive_ok = true;
        for (a, b) in pairs {
            let (x, y) = (&perms[a], &perms[b]);
            let xy = x.compose(y)?;
            if xy.length() == x.length() + y.length() {
                additive += 1;
                additive_ok &= basis(x).mul(&basis(y))? == basis(&xy);
            }
        }
        facts.add("T_x T_y = T_xy when lengths add", additive_ok);
        // associativity on basis triples: exhaustive for r <= 3, sampled above
        let n = perms.len();
        let triples: Vec<(usize, usize, usize)> = if r <= 3 {
            (0..n * n * n).map(|k| (k / (n * n), (k / n) % n, k % n)).collect()
        } else {
            (0..100).map(|k| ((7 * k + 1) % n, (11 * k + 3) % n, (13 * k + 5) % n)).collect()
        };
        let assoc_ok = triples.par_iter().all(|&(a, b, c)| {
            let (x, y, z) = (basis(&perms[a]), basis(&perms[b]), basis(&perms[c]));
            let l = x.mul(&y).and_then(|xy| xy.mul(&z));
            let rr = y.mul(&z).and_then(|yz| x.mul(&yz));
            matches!((l, rr), (Ok(l), Ok(rr)) if l == rr)
        });
        facts.add("associativity", assoc_ok);
        let summary = format!(
            "{} identities; {additive} length-additive products; {} associativity triples",
            facts.passed(),
            triples.len()
        );
        let detail = json!({
            "identities": facts.json(),
            "length_additive_pairs": additive,
            "associativity_triples": triples.len(),
        });
        out.push(Outcome::verdict(params_r(r), summary, detail, facts.witness()));
    }
    Ok(out)
}

pub fn idempotents(_: &Options) -> Result<Vec<Outcome>, CliError> {
    let mut facts = Facts::default();
    let (e2, e11) = idempotents_r2();
    let one2 = HeckeElt::one(2);
    facts.add("e2^2 = e2", e2.mul(&e2)? == e2);
    facts.add("e11^2 = e11", e11.mul(&e11)? == e11);
    facts.add("e2 e11 = 0", e2.mul(&e11)?.is_zero());
    facts.add("e2 + e11 = 1", e2.add(&e11)? == one2);

    let id = idempotents_r3();
    let named = [
        ("e3", &id.e3),
        ("e21+", &id.e21_plus),
        ("e21-", &id.e21_minus),
        ("e111", &id.e111),
    ];
    for (name, e) in named {
        facts.add(format!("{name}^2 = {name}"), e.mul(e)? == *e);
    }
    for (a, x) in named {
        for (b, y) in named {
            if a != b {
                facts.add(format!("{a} {b} = 0"), x.mul(y)?.is_zero());
            }
        }
    }
    let mut sum = HeckeElt::zero(3);
    for (_, e) in named {
        sum = sum.add(e)?;
    }
    facts.add("e3 + e21+ + e21- + e111 = 1", sum == HeckeElt::one(3));
    let th = theta();
    facts.add("theta e21+ = e21+", th.mul(&id.e21_plus)? == id.e21_plus);
    facts.add("theta e21- = -e21-", th.mul(&id.e21_minus)? == id.e21_minus.scale(&QScalar::from_int(-1)));
    let big = id.e21_plus.add(&id.e21_minus)?;
    for i in 1..3 {
        let t = HeckeElt::generator(i, 3)?;
        facts.add(format!("E21 T{i} = T{i} E21"), big.mul(&t)? == t.mul(&big)?);
    }
    facts.add("involution(e21+) = e21-", id.e21_plus.involution() == id.e21_minus);
    facts.add("involution(e21-) = e21+", id.e21_minus.involution() == id.e21_plus);
    facts.add("involution(e3) = e111", id.e3.involution() == id.e111);
    let summary = format!(
        "{} identities; e3 normaliser {}, e111 normaliser {}",
        facts.passed(),
        id.n3,
        id.n111
    );
    let detail = json!({
        "identities": facts.json(),
        "e3_normaliser": id.n3,
        "e111_normaliser": id.n111,
        "e21_plus": id.e21_plus.to_string(),
        "e21_minus": id.e21_minus.to_string(),
    });
    Ok(vec![Outcome::verdict(params_r(3), summary, detail, facts.witness())])
}

pub fn rhat(opts: &Options) -> Result<Vec<Outcome>, CliError> {
    let ns = opts.n.map_or_else(|| vec![2, 3, 4], |n| vec![n]);
    let mut out = Vec::new();
    for n in ns {
        if !(1..=MAX_RHAT_DIM).contains(&n) {
            return Err(CliError::BoundExceeded {
                what: "n",
                value: n,
                bound: MAX_RHAT_DIM,
            });
        }
        let mut facts = Facts::default();
        let m = build_rhat(n)?;
        facts.add("(R - q)(R + q^-1) = 0", satisfies_quadratic(&m));
        facts.add("braid relation on V^3", satisfies_braid(&m, n));
        facts.add("degree-2 FRT relations reproduced", reproduces_frt2(&m, n));
        let selected = select_reading(n)?;
        facts.add("descending-diagonal reading selected", selected == RhatReading::DescendingDiagonal);
        for sign in [Sign::Plus, Sign::Minus] {
            let p = pi(&e21(sign), n, 3)?;
            facts.add(format!("pi(e21{sign}) vanishes off equal multisets"), weight_preserving(&p, n, 3));
        }
        let readings = reading_reports(n);
        let summary = format!(
            "n={n}: {} identities; reading {selected}; candidates: {}",
            facts.passed(),
            readings
                .iter()
                .map(|r| format!("{} {}", r.reading, if r.accepted() { "accepted" } else { "rejected" }))
                .collect::<Vec<_>>()
                .join(", ")
        );
        let detail = json!({ "identities": facts.json(), "readings": readings });
        out.push(Outcome::verdict(
            ReportParams {
                n: Some(n),
                ..Default::default()
            },
            summary,
            detail,
            facts.witness(),
        ));
    }
    Ok(out)
}

pub fn appendix(opts: &Options) -> Result<Vec<Outcome>, CliError> {
    let mut out = Vec::new();
    for sign in opts.signs() {
        let params = ReportParams {
            n: Some(3),
            r: Some(3),
            sign: Some(sign),
            ..Default::default()
        };
        match compare_appendix(sign) {
            Ok(c) => out.push(Outcome::pass(
                params,
                format!(
                    "{} entries equal: 6x6 block ({}) and {} two-letter 3x3 blocks ({})",
                    c.total(),
                    c.entries_6x6,
                    c.blocks_3x3,
                    c.entries_3x3
                ),
                json!(c),
            )),
            Err(RmatError::BlockMismatch {
                block,
                row,
                col,
                expected,
                got,
            }) => out.push(Outcome::verdict(
                params,
                format!("block {block} differs"),
                json!({ "block": block, "row": row, "col": col, "expected": expected, "got": got }),
                Some(format!("block {block}, entry ({row}, {col}): computed {got}, expected {expected}")),
            )),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

pub fn systd(_: &Options) -> Result<Vec<Outcome>, CliError> {
    let e = expand_diagonal(3, &[1, 1, 1])?;
    let g = golden_systd()?;
    let rows: Vec<String> = e.rows.clone();
    let cols: Vec<String> = e.cols.clone();
    let mut witness = first_difference(&rows, &cols, &e.matrix, &g.matrix);
    let kernel = e.matrix.left_kernel();
    let expected_kernel = g.kernel.normalized();
    if witness.is_none() {
        if kernel.dim() != 1 {
            witness = Some(format!("kernel has dimension {}", kernel.dim()));
        } else if kernel.rows()[0] != expected_kernel {
            witness = Some(format!(
                "kernel vector {:?} differs from the expected one",
                kernel.rows()[0].to_dense(6).iter().map(ToString::to_string).collect::<Vec<_>>()
            ));
        }
    }
    let kvec: Vec<String> = kernel
        .rows()
        .first()
        .map(|v| v.to_dense(6).iter().map(ToString::to_string).collect())
        .unwrap_or_default();
    let summary = format!(
        "{}kernel: ({}) over {}",
        matrix_text(&rows, &cols, &e.matrix),
        kvec.join(", "),
        rows.join(" ")
    );
    let detail = json!({
        "rows": rows,
        "cols": cols,
        "matrix": e.matrix.to_strings(),
        "entries_compared": 36,
        "kernel_dim": kernel.dim(),
        "kernel": kvec,
    });
    Ok(vec![Outcome::verdict(params_nr(3, 3), summary, detail, witness)])
}

fn two_letter_blocks() -> Result<Outcome, CliError> {
    let e = expand_diagonal(2, &[2, 1])?;
    let g = golden_weight21()?;
    let mut witness = first_difference(&e.rows, &e.cols, &e.matrix, &g.matrix);
    let mut detail = serde_json::Map::new();
    detail.insert("weight21_matrix".into(), json!(e.matrix.to_strings()));
    for (weight, inst) in [
        (vec![2, 1], RelationInstance::lower_repeat(1, 2)),
        (vec![1, 2], RelationInstance::upper_repeat(1, 2)),
    ] {
        let kernel = expand_diagonal(2, &weight)?.matrix.left_kernel();
        let v = inst.poly.to_block_vec(&weight).expect("instance lies in its block");
        let ok = kernel.dim() == 1 && kernel.contains(&v)?;
        let key = format!("kernel_{}{}", weight[0], weight[1]);
        detail.insert(
            key,
            json!({ "dim": kernel.dim(), "spanned_by": inst.poly.to_string(), "ok": ok }),
        );
        if !ok && witness.is_none() {
            witness = Some(format!(
                "weight {weight:?}: kernel of dimension {} does not equal span of {}",
                kernel.dim(),
                inst.poly
            ));
        }
    }
    let summary = format!(
        "weight (2,1):\n{}kernels spanned by [[x1,x2],x1]_q2 and [x2,[x1,x2]]_q2",
        matrix_text(&e.rows, &e.cols, &e.matrix)
    );
    Ok(Outcome::verdict(params_nr(2, 3), summary, detail.into(), witness))
}

fn kernel_dims(d: usize, r: usize, max_block: usize) -> Result<Outcome, CliError> {
    let blocks = diag_relation_kernel(d, r, max_block)?;
    let total: usize = blocks.values().map(|b| b.kernel.dim()).sum();
    let per_block: Vec<serde_json::Value> = blocks
        .values()
        .filter(|b| b.kernel.dim() > 0)
        .map(|b| json!({ "weight": b.weight, "words": b.num_words, "quotient_dim": b.quotient_dim, "kernel_dim": b.kernel.dim() }))
        .collect();
    let (expected, witness) = if r == 3 {
        let c = ppk_count(d);
        (Some(c), (total != c).then(|| format!("total kernel dimension {total}, expected {c}")))
    } else {
        (None, None)
    };
    let summary = match expected {
        Some(c) => format!("d={d}, r={r}: total kernel dimension {total} (formula {c})"),
        None => format!("d={d}, r={r}: total kernel dimension {total}"),
    };
    let detail = json!({ "total": total, "expected": expected, "blocks": per_block });
    Ok(Outcome::verdict(params_nr(d, r), summary, detail, witness))
}

pub fn diag_kernel(opts: &Options) -> Result<Vec<Outcome>, CliError> {
    if opts.n.is_some() || opts.r.is_some() {
        let (d, r) = (opts.n.unwrap_or(3), opts.r.unwrap_or(3));
        return Ok(vec![kernel_dims(d, r, opts.max_block)?]);
    }
    let mut out = vec![two_letter_blocks()?];
    for d in 2..=4 {
        out.push(kernel_dims(d, 3, opts.max_block)?);
    }
    Ok(out)
}

fn formal_text(x: &FormalWords) -> String {
    if x.is_empty() {
        return "0".into();
    }
    x.iter()
        .map(|(w, c)| {
            let word = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join(" ")
            };
            format!("({c})*T[{word}]")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn braid_identity(_: &Options) -> Result<Vec<Outcome>, CliError> {
    let signed = [("132", 1), ("312", -1), ("213", -1), ("231", 1)];
    let l = DiagElt::from_terms(3, signed.map(|(a, c)| (perm(a), QScalar::from_int(c))))?;
    let products: Vec<serde_json::Value> = signed
        .iter()
        .map(|(a, _)| json!({ "alpha": a, "product": formal_text(&formal_p_of_basis(&perm(a))) }))
        .collect();
    let half = |terms: &[(&str, i64)]| {
        DiagElt::from_terms(3, terms.iter().map(|(a, c)| (perm(a), QScalar::from_int(*c)))).map(|x| formal_project_p(&x))
    };
    let first = half(&signed[..2])?;
    let second = half(&signed[2..])?;
    let formal = formal_project_p(&l);
    let expected = FormalWords::from([(vec![1, 2, 1], omega()), (vec![2, 1, 2], -omega())]);
    let mut facts = Facts::default();
    facts.add("formal p(L) = w (T[s1 s2 s1] - T[s2 s1 s2])", formal == expected);
    facts.add(
        "first half = -w T[s2 s1 s2]",
        first == FormalWords::from([(vec![2, 1, 2], -omega())]),
    );
    facts.add(
        "second half = w T[s1 s2 s1]",
        second == FormalWords::from([(vec![1, 2, 1], omega())]),
    );
    facts.add("braid relation sends it to 0", evaluate_formal(&formal, 3)?.is_zero());
    facts.add("project_p(L) = 0", project_p(&l).is_zero());
    let summary = format!(
        "p(L) before the braid relation: {}; after: 0",
        formal_text(&formal)
    );
    let detail = json!({
        "identities": facts.json(),
        "products": products,
        "first_half": formal_text(&first),
        "second_half": formal_text(&second),
        "intermediate": formal_text(&formal),
    });
    Ok(vec![Outcome::verdict(params_r(3), summary, detail, facts.witness())])
}

pub fn preplactic(opts: &Options) -> Result<Vec<Outcome>, CliError> {
    let ranks = opts.r.map_or_else(|| vec![3, 4], |r| vec![r]);
    let mut out = Vec::new();
    for r in ranks {
        if !(3..=MAX_DIAG_RANK).contains(&r) {
            return Err(CliError::InvalidParam(format!("preplactic needs 3 <= r <= {MAX_DIAG_RANK}, got {r}")));
        }
        let rep = preplactic_check(r, &opts.variants())?;
        let equal: Vec<String> = rep.variants.iter().filter(|v| v.equal).map(|v| v.variant.to_string()).collect();
        let witness = if !rep.all_contained() {
            rep.variants
                .iter()
                .find(|v| !v.contained)
                .map(|v| format!("{} ideal leaves ker p: {}", v.variant, v.witness.clone().unwrap_or_default()))
        } else if !rep.some_equal() {
            Some(format!(
                "no variant equals ker p; kernel vector outside: {}",
                rep.variants[0].witness.clone().unwrap_or_default()
            ))
        } else {
            None
        };
        let summary = format!(
            "dim ker p = {} of {}; {}; equal to ker p: {}",
            rep.dim_kernel,
            rep.dim_diagonal,
            rep.variants
                .iter()
                .map(|v| format!("{} ideal dim {} ({:?})", v.variant, v.dim, v.method))
                .collect::<Vec<_>>()
                .join(", "),
            if equal.is_empty() { "none".to_string() } else { equal.join(", ") }
        );
        let params = ReportParams {
            r: Some(r),
            variant: opts.variant,
            ..Default::default()
        };
        out.push(Outcome::verdict(params, summary, json!(rep), witness));
    }
    Ok(out)
}

pub fn lemma_brute(opts: &Options) -> Result<Vec<Outcome>, CliError> {
    let mut out = Vec::new();
    for sign in opts.signs() {
        let rep = lemma_brute_check(sign)?;
        let mut lines = Vec::new();
        let mut problems = Vec::new();
        if !rep.orthogonality {
            problems.push("pi(e+) pi(e-) is not zero".to_string());
        }
        for w in &rep.weights {
            let c = w.scalar.as_ref().map_or("none".to_string(), ToString::to_string);
            let mut line = format!("I={}: c = {c}", w.index);
            if !w.residual_zero {
                problems.push(format!("I={}: residual against {} is nonzero", w.index, w.instance));
            }
            if let Some(p) = &w.reference_scalar {
                line.push_str(&format!("; printed {p}"));
                if w.matches_reference == Some(false) {
                    let swapped = if w.matches_swapped == Some(true) { " (matches the other sign)" } else { "" };
                    problems.push(format!("I={}: computed {c}, printed {p}{swapped}", w.index));
                }
            }
            lines.push(line);
        }
        let witness = (!problems.is_empty()).then(|| problems.join("; "));
        let params = ReportParams {
            n: Some(3),
            r: Some(3),
            sign: Some(sign),
            ..Default::default()
        };
        out.push(Outcome::verdict(params, lines.join("\n"), json!(rep), witness));
    }
    Ok(out)
}

fn cached_block(
    cache: Option<&BlockCache>,
    d: usize,
    r: usize,
    weight: &[usize],
    table: &qdiag_core::qma::Deg2Table,
    max_block: usize,
) -> Result<BlockVerdict, CliError> {
    let compute = || conjecture_block(d, r, weight, table, max_block).map_err(CliError::from);
    match cache {
        None => compute(),
        Some(c) => {
            let key = BlockCache::key(&[
                "conjecture-block",
                &d.to_string(),
                &r.to_string(),
                &format!("{weight:?}"),
                &max_block.to_string(),
            ]);
            c.get_or_compute(&key, compute)
        }
    }
}

pub fn conjecture(opts: &Options) -> Result<Vec<Outcome>, CliError> {
    let pairs = match (opts.n, opts.r) {
        (None, None) => CONJECTURE_DEFAULTS.to_vec(),
        (d, r) => vec![(d.unwrap_or(3), r.unwrap_or(3))],
    };
    let mut out = Vec::new();
    for (d, r) in pairs {
        if r < 3 {
            return Err(CliError::InvalidParam(format!("conjecture needs r >= 3, got {r}")));
        }
        let weights = conjecture_weights(d, r)?;
        let table = deg2_table(d)?;
        let blocks = weights
            .par_iter()
            .map(|w| cached_block(opts.cache.as_deref(), d, r, w, &table, opts.max_block))
            .collect::<Result<Vec<_>, _>>()?;
        let rep = assemble_conjecture(d, r, blocks);
        let witness = rep.blocks.iter().find(|b| !b.equal).map(|b| {
            format!(
                "block {:?}: kernel dim {}, ideal dim {}, vector {}",
                b.weight,
                b.dim_kernel,
                b.dim_ideal,
                b.witness.clone().unwrap_or_default()
            )
        });
        let summary = format!(
            "d={d}, r={r}: {} blocks, kernel dim {} = ideal dim {}",
            rep.blocks.len(),
            rep.total_kernel,
            rep.total_ideal
        );
        let summary = if witness.is_some() {
            summary.replace(" = ", " vs ")
        } else {
            summary
        };
        out.push(Outcome::verdict(params_nr(d, r), summary, json!(rep), witness));
    }
    Ok(out)
}
