//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use knaf_cli::fixtures;
use knaf_cli::problem::{parse_problem, ProblemFile};
use knaf_cli::report::parse_record;
use knaf_cli::run::{run, Outcome};
use knaf_core::localsplit::{split_extensions, to_extension_invariants, PadicRationals};
use knaf_core::ordgroup::{initial_index, LexGroup, RationalVector};
use knaf_core::raminv::{frobenius_defect, knaf_decide, validate, ExtensionInvariants, FrobeniusGroup, Violation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn qi(n: i64) -> BigRational {
    q(n, 1)
}

// ---- 1 --------------------------------------------------------------------------

fn random_basis(rng: &mut ChaCha8Rng, rank: usize, max_den: i64) -> Vec<Vec<BigRational>> {
    loop {
        let m: Vec<Vec<BigRational>> = (0..rank)
            .map(|_| (0..rank).map(|_| q(rng.gen_range(-6..=6), rng.gen_range(1..=max_den))).collect())
            .collect();
        if !oracles::det(m.clone()).is_zero() {
            return m;
        }
    }
}

fn random_int_matrix(rng: &mut ChaCha8Rng, rank: usize, max_det: i64) -> (Vec<Vec<i64>>, i64) {
    loop {
        let m: Vec<Vec<i64>> = (0..rank).map(|_| (0..rank).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let d = oracles::det(m.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect());
        let d = d.to_integer().abs().to_i64().unwrap();
        if d != 0 && d <= max_det {
            return (m, d);
        }
    }
}

fn combine(m: &[Vec<i64>], basis: &[Vec<BigRational>]) -> Vec<RationalVector> {
    m.iter()
        .map(|row| {
            let mut v = vec![BigRational::zero(); basis[0].len()];
            for (c, b) in row.iter().zip(basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += qi(*c) * y;
                }
            }
            RationalVector::new(v)
        })
        .collect()
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut eft, mut eps_short, mut defect) = (0, 0, 0);
    for case in 0..200 {
        let rank = rng.gen_range(1..=3);
        let basis = random_basis(&mut rng, rank, 6);
        let (m, e) = random_int_matrix(&mut rng, rank, 24);
        let mut nu = combine(&m, &basis);
        if rng.gen_bool(0.3) {
            let extra = nu[0].add(&nu[rank - 1]);
            nu.push(extra);
        }
        let omega: Vec<RationalVector> = basis.iter().cloned().map(RationalVector::new).collect();
        let p = [0u64, 2, 3, 5][rng.gen_range(0..4)];
        let d = if p == 0 { 1 } else { p.pow(rng.gen_range(0..=2)) };
        let f = rng.gen_range(1..=3);
        let local = e as u64 * f * d;
        let ext = ExtensionInvariants {
            gamma_nu: LexGroup::new(rank, nu).map_err(|x| x.to_string())?,
            gamma_omega: LexGroup::new(rank, omega).map_err(|x| x.to_string())?,
            residue_degree: f,
            local_degree: local,
            residue_char: p,
            total_degree: Some(local * rng.gen_range(1..=2)),
            provenance: String::new(),
        };
        let v = knaf_decide(&ext).map_err(|x| format!("case {case}: {x}"))?;
        ensure(v.e == e as u64, || format!("case {case}: e = {} but det = {e}", v.e))?;
        ensure(v.f == f && v.d == d, || format!("case {case}: (f, d) = ({}, {}), expected ({f}, {d})", v.f, v.d))?;
        ensure(v.e * v.f * v.d == local, || format!("case {case}: e*f*d != local degree"))?;
        ensure(v.eps >= 1 && v.eps <= v.e, || format!("case {case}: eps = {} outside [1, e = {}]", v.eps, v.e))?;
        ensure(v.eft == (v.d == 1 && v.eps == v.e), || format!("case {case}: verdict {v:?}"))?;
        eft += v.eft as usize;
        eps_short += (v.eps < v.e) as usize;
        defect += (v.d > 1) as usize;
    }
    ensure(eft > 0 && eps_short > 0 && defect > 0, || "random data did not reach every verdict branch".into())?;
    Ok(format!("200 instances: {eft} EFT, {eps_short} with ε<e, {defect} with d>1"))
}

// ---- 2 --------------------------------------------------------------------------

fn scaled_ints(vs: &[RationalVector], scale: &BigInt) -> Vec<Vec<i64>> {
    vs.iter()
        .map(|v| {
            v.coords()
                .iter()
                .map(|c| (c * BigRational::from_integer(scale.clone())).to_integer().to_i64().unwrap())
                .collect()
        })
        .collect()
}

/// A basis of a rank-`rank` group with denominators at most 4: an echelon
/// basis mixed by a small unimodular matrix, so that the elements deciding
/// the initial index have small coefficients.
fn mixed_echelon_basis(rng: &mut ChaCha8Rng, rank: usize) -> Vec<Vec<BigRational>> {
    let mut rows: Vec<Vec<BigRational>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => BigRational::zero(),
                    std::cmp::Ordering::Equal => q(rng.gen_range(1..=4), rng.gen_range(1..=4)),
                    std::cmp::Ordering::Greater => q(rng.gen_range(-3..=3), rng.gen_range(1..=4)),
                })
                .collect()
        })
        .collect();
    for _ in 0..rank {
        let (i, j) = (rng.gen_range(0..rank), rng.gen_range(0..rank));
        if i != j {
            let s = qi(if rng.gen_bool(0.5) { 1 } else { -1 });
            let add: Vec<BigRational> = rows[j].iter().map(|x| x * &s).collect();
            rows[i].iter_mut().zip(add).for_each(|(x, y)| *x += y);
        }
    }
    rows.swap(0, rank - 1);
    rows
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut tested, mut unstable, mut eps_short) = (0, 0, 0);
    let mut by_rank = [0usize; 3];
    for _ in 0..160 {
        let rank = rng.gen_range(1..=3);
        let basis = mixed_echelon_basis(&mut rng, rank);
        let (m, e) = random_int_matrix(&mut rng, rank, 12);
        let nu = combine(&m, &basis);
        let omega: Vec<RationalVector> = basis.iter().cloned().map(RationalVector::new).collect();
        let scale = BigInt::from(12);
        let oi = scaled_ints(&omega, &scale);
        let bound = [40, 30, 24][rank - 1];
        let small = oracles::box_initial_index(&oi, &m, bound);
        let large = oracles::box_initial_index(&oi, &m, bound * 3 / 2);
        if small != large {
            unstable += 1;
            continue;
        }
        let big = LexGroup::new(rank, omega).unwrap();
        let sub = LexGroup::new(rank, nu).unwrap();
        let got = initial_index(&big, &sub).map_err(|x| x.to_string())?;
        ensure(got == large, || {
            format!("rank {rank}, index {e}: initial_index = {got}, box gives {large}; omega {oi:?} m {m:?}")
        })?;
        tested += 1;
        by_rank[rank - 1] += 1;
        eps_short += (got < e as u64) as usize;
    }
    ensure(tested >= 100, || format!("only {tested} pairs had a stable box count"))?;
    Ok(format!(
        "{tested} pairs (ranks 1/2/3: {}/{}/{}), {eps_short} with ε<e, 0 mismatches, {unstable} skipped as box-unstable",
        by_rank[0], by_rank[1], by_rank[2]
    ))
}

// ---- 3 --------------------------------------------------------------------------

fn random_poly(rng: &mut ChaCha8Rng, p: u64) -> Vec<BigInt> {
    let pk = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| {
        let c = rng.gen_range(lo..=hi);
        BigInt::from(p.pow(rng.gen_range(0..=2)) as i64 * c)
    };
    let one = BigInt::from(1);
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(1..=4usize);
            let mut g: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
            g.push(one);
            g
        }
        1 => {
            // product of factors with p-divisible lower coefficients, so the
            // Newton polygons are not trivial
            let n = rng.gen_range(2..=4usize);
            let mut g = vec![one.clone()];
            let mut left = n;
            while left > 0 {
                let d = rng.gen_range(1..=left.min(2));
                let mut fct: Vec<BigInt> = (0..d).map(|_| pk(rng, -2, 2)).collect();
                fct.push(one.clone());
                g = oracles::poly_mul(&g, &fct);
                left -= d;
            }
            g
        }
        _ => {
            // biquadratic-style quartics, often without p-adic roots
            let c1 = pk(rng, -3, 3);
            let c2 = pk(rng, 1, 3);
            vec![c2, BigInt::zero(), c1, BigInt::zero(), one]
        }
    }
}

fn criterion_3() -> Check {
    // the oracle itself on x^4 + 1: irreducible over Q_2, two factors at odd p
    let x4 = [1, 0, 0, 0, 1].map(BigInt::from);
    for (p, n) in [(2u64, 1usize), (3, 2), (5, 2), (7, 2)] {
        let got = oracles::padic_factor_count(&x4, p);
        ensure(got == Some(n), || format!("oracle on x^4+1 at {p}: {got:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut tested, mut ramified, mut multi, mut rootless_quartics) = (0, 0, 0, 0);
    let mut attempts = 0;
    while tested < 50 {
        attempts += 1;
        if attempts > 5000 {
            return Err(format!("only {tested} usable polynomials generated"));
        }
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let g = random_poly(&mut rng, p);
        if !oracles::squarefree(&g) || oracles::abs_max(&g) > BigInt::from(60) {
            continue;
        }
        let Some(expected) = oracles::padic_factor_count(&g, p) else {
            continue;
        };
        let k = PadicRationals::new(p).unwrap();
        let gq: Vec<BigRational> = g.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let n = (g.len() - 1) as u64;
        let factors = split_extensions(&k, &gq, 16).map_err(|x| format!("{g:?} at {p}: {x}"))?;
        let total: u64 = factors.iter().map(|l| l.degree).sum();
        ensure(total == n, || format!("{g:?} at {p}: degrees sum to {total}"))?;
        for lf in &factors {
            let v = knaf_decide(&to_extension_invariants(&k, lf, n)).map_err(|x| x.to_string())?;
            ensure(lf.e * lf.f == lf.degree && v.d == 1, || format!("{g:?} at {p}: factor {lf} has a defect"))?;
            ramified += (lf.e > 1) as usize;
        }
        ensure(factors.len() == expected, || {
            format!("{g:?} at {p}: {} factors, Hensel count {expected}", factors.len())
        })?;
        multi += (factors.len() > 1) as usize;
        rootless_quartics += (n == 4 && oracles::padic_roots(&g, p) == 0) as usize;
        tested += 1;
    }
    Ok(format!(
        "50 polynomials, {multi} reducible over Q_p, {ramified} ramified factors, {rootless_quartics} rootless quartics, counts match"
    ))
}

// ---- 4 and 5 ----------------------------------------------------------------------

fn rows_of(text: &str) -> Result<Vec<(u64, u64, u64, u64, bool)>, String> {
    let p = parse_problem(text).map_err(|e| e.to_string())?;
    match run(&p, 16).map_err(|f| f.messages.join("; "))? {
        Outcome::Rows(rows) => {
            Ok(rows.iter().map(|r| (r.verdict.e, r.verdict.f, r.verdict.eps, r.verdict.d, r.verdict.eft)).collect())
        }
        Outcome::Group(_) => Err("unexpected group outcome".into()),
    }
}

fn split_text(base: &str, coeffs: &str) -> String {
    format!("format_version = 1\nmode = split\n[base]\n{base}\n[polynomial]\ncoeffs = [{coeffs}]\n")
}

fn criterion_4() -> Check {
    let cases = [
        ("x^2-2 at v_2", split_text("field = rationals\np = 2", "-2, 0, 1"), vec![(2, 1, 2, 1, true)]),
        ("x^2+1 at v_5", split_text("field = rationals\np = 5", "1, 0, 1"), vec![(1, 1, 1, 1, true); 2]),
        ("x^2+1 at v_3", split_text("field = rationals\np = 3", "1, 0, 1"), vec![(1, 2, 1, 1, true)]),
        (
            "x^2-t at v_t over F_3(t)",
            split_text("field = function\nq = 3\nuniformizer = t", "-t, 0, 1"),
            vec![(2, 1, 2, 1, true)],
        ),
    ];
    for (name, text, expected) in &cases {
        let got = rows_of(text)?;
        ensure(&got == expected, || format!("{name}: got {got:?}, expected {expected:?}"))?;
    }
    Ok(format!("{} instances exact", cases.len()))
}

fn binomial_text(a: i64, b: i64) -> String {
    format!(
        "format_version = 1\nmode = binomial\n[base]\nfield = finite\nq = 5\n[weights]\nx = (1, 0)\ny = (0, 1)\n[binomial]\nn = 2\na = {a}\nb = {b}\nc = 1\n"
    )
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let cases = [
        ("z^2=x", 1, 0, (2, 1, 1, 1, false)),
        ("z^2=y", 0, 1, (2, 1, 2, 1, true)),
        ("z^2=xy", 1, 1, (2, 1, 1, 1, false)),
    ];
    for (name, a, b, expected) in cases {
        let got = rows_of(&binomial_text(a, b))?;
        ensure(got == vec![expected], || format!("{name}: got {got:?}, expected {expected:?}"))?;
    }
    let p = parse_problem(&binomial_text(1, 0)).unwrap();
    let Outcome::Rows(rows) = run(&p, 16).unwrap() else { unreachable!() };
    ensure(rows[0].reason == "ε=1 < e=2", || format!("reason '{}'", rows[0].reason))?;
    ensure(start.elapsed() < Duration::from_secs(1), || "slower than 1 s".into())?;
    Ok("x: ε=1<e=2 false, y: ε=2=e true, xy: false".into())
}

// ---- 6, 7 and 8 -------------------------------------------------------------------

fn trivial_ramification(p: u64, residue_char: u64) -> ExtensionInvariants {
    ExtensionInvariants {
        gamma_nu: LexGroup::integer_lattice(1),
        gamma_omega: LexGroup::integer_lattice(1),
        residue_degree: 1,
        local_degree: p,
        residue_char,
        total_degree: Some(p),
        provenance: String::new(),
    }
}

fn criterion_6() -> Check {
    for p in [2u64, 3, 5, 7] {
        let v = knaf_decide(&trivial_ramification(p, p)).map_err(|x| x.to_string())?;
        ensure(v.e == 1 && v.f == 1 && v.eps == v.e && v.d == p && !v.eft, || format!("p = {p}: {v:?}"))?;
        let violations = validate(&trivial_ramification(p, 0));
        ensure(violations.iter().any(|x| matches!(x, Violation::DefectInCharZero { .. })), || {
            format!("p = {p}: residue characteristic 0 accepted ({violations:?})")
        })?;
    }
    let fx = fixtures::find("frobenius-defect-p").unwrap().row().map_err(|f| f.messages.join("; "))?;
    ensure(!fx.verdict.eft && fx.verdict.initial_condition && fx.verdict.d == 3, || format!("{fx:?}"))?;
    Ok("d=p forces EFT false for p in {2,3,5,7}; char 0 rejected".into())
}

fn criterion_7() -> Check {
    let z = FrobeniusGroup::Lattice(LexGroup::integer_lattice(1));
    let z2 = FrobeniusGroup::Lattice(LexGroup::integer_lattice(2));
    for p in [2u64, 3, 5, 7] {
        let err = |x: knaf_core::raminv::RamError| x.to_string();
        let a = frobenius_defect(p, &z, 1, p).map_err(err)?;
        let b = frobenius_defect(p * p, &z2, 1, p).map_err(err)?;
        let c = frobenius_defect(p, &FrobeniusGroup::DeclaredIndex(1), 1, p).map_err(err)?;
        ensure((a, b, c) == (1, 1, p), || format!("p = {p}: got ({a}, {b}, {c})"))?;
    }
    let ab = fixtures::find("frobenius-abhyankar").unwrap().row().map_err(|f| f.messages.join("; "))?;
    let direct = frobenius_defect(3, &z, 1, 3).unwrap();
    ensure(ab.verdict.d == direct && ab.verdict.eft, || format!("{ab:?}"))?;
    Ok("(p, Z, 1) -> 1, (p^2, Z^2, 1) -> 1, declared [Γ:pΓ]=1 -> p".into())
}

fn criterion_8() -> Check {
    let factors = [q(1, 3), qi(2), q(7, 2)];
    for fx in fixtures::catalog() {
        let ext = (fx.build)();
        let base = knaf_decide(&ext).map_err(|x| x.to_string())?;
        for s in &factors {
            let scaled = ExtensionInvariants {
                gamma_nu: ext.gamma_nu.scaled(s),
                gamma_omega: ext.gamma_omega.scaled(s),
                ..ext.clone()
            };
            let v = knaf_decide(&scaled).map_err(|x| x.to_string())?;
            ensure((v.e, v.eps, v.eft) == (base.e, base.eps, base.eft), || {
                format!("{} scaled by {s}: {v:?} vs {base:?}", fx.name)
            })?;
        }
    }
    Ok(format!("{} fixtures x 3 factors unchanged", fixtures::catalog().len()))
}

// ---- 9 ------------------------------------------------------------------------------

fn knaf(args: &[&str], stdin: Option<&str>) -> Output {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_knaf"))
        .args(args)
        .stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn knaf");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn shipped_problems() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("problems");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn round_trips(p: &ProblemFile) -> bool {
    parse_problem(&p.to_string()).as_ref() == Ok(p)
}

fn criterion_9() -> Check {
    // round-trip on every fixture and every shipped problem file
    let mut files = 0;
    for fx in fixtures::catalog() {
        let p = fx.problem_file();
        ensure(round_trips(&p), || format!("fixture {} does not round-trip", fx.name))?;
        let out = knaf(&["fixtures", fx.name], None);
        let printed = parse_problem(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
        ensure(printed == p, || format!("printed fixture {} differs", fx.name))?;
        files += 1;
    }
    for path in shipped_problems() {
        let p =
            parse_problem(&std::fs::read_to_string(&path).unwrap()).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(round_trips(&p), || format!("{} does not round-trip", path.display()))?;
        files += 1;
    }

    // porcelain schema and stability
    const KEYS: [&str; 10] = ["label", "e", "f", "eps", "d", "defectless", "eps_eq_e", "eft", "reason", "certificate"];
    let first = knaf(&["fixtures", "--porcelain"], None);
    let second = knaf(&["fixtures", "--porcelain"], None);
    ensure(first.status.code() == Some(0) && first.stdout == second.stdout, || {
        "porcelain output differs between runs".into()
    })?;
    let porcelain = String::from_utf8(first.stdout).unwrap();
    let human = String::from_utf8(knaf(&["fixtures"], None).stdout).unwrap();
    let human_rows: Vec<Vec<&str>> =
        human.lines().skip(1).take_while(|l| !l.is_empty()).map(|l| l.split_whitespace().collect()).collect();
    ensure(human_rows.len() == porcelain.lines().count(), || "human and porcelain row counts differ".into())?;
    for (line, cells) in porcelain.lines().zip(&human_rows) {
        let rec = parse_record(line)?;
        let keys: Vec<&str> = rec.iter().map(|(k, _)| k.as_str()).collect();
        ensure(keys == KEYS, || format!("schema {keys:?}"))?;
        let yes = |s: &str| if s == "true" { "yes" } else { "no" };
        let from_porcelain = [
            rec[0].1.as_str(),
            &rec[1].1,
            &rec[2].1,
            &rec[3].1,
            &rec[4].1,
            yes(&rec[5].1),
            yes(&rec[6].1),
            yes(&rec[7].1),
        ];
        ensure(from_porcelain[..] == cells[..8], || format!("table row {cells:?} vs record {line}"))?;
        // the same fixture through decide, by name and by explicit data
        let name = &rec[0].1;
        let by_name = knaf(&["decide", "--fixture", name, "--porcelain"], None);
        ensure(String::from_utf8_lossy(&by_name.stdout).trim_end() == line, || {
            format!("decide --fixture {name} differs")
        })?;
        let text = String::from_utf8(knaf(&["fixtures", name], None).stdout).unwrap();
        let by_data = knaf(&["decide", "--file", "-", "--porcelain"], Some(&text));
        ensure(String::from_utf8_lossy(&by_data.stdout).trim_end() == line, || {
            format!("decide on printed {name} differs")
        })?;
    }

    // exit codes
    let good = "format_version = 1\nmode = split\n[base]\nfield = rationals\np = 5\n[polynomial]\ncoeffs = [1, 0, 1]\n";
    let inconsistent = "format_version = 1\nmode = decide\n[gamma_nu]\ngenerators = [(1)]\n[gamma_omega]\ngenerators = [(1/2)]\n[extension]\nresidue_degree = 1\nlocal_degree = 3\nresidue_char = 3\n";
    let deep = "format_version = 1\nmode = split\n[base]\nfield = rationals\np = 2\n[polynomial]\ncoeffs = [18, 0, -4, 0, 1]\n";
    let cases: Vec<(&str, Vec<&str>, String, i32)> = vec![
        ("valid split", vec!["split"], good.into(), 0),
        (
            "malformed rational",
            vec!["group"],
            "format_version = 1\nmode = group\n[gamma_nu]\ngenerators = [(1//2)]\n[gamma_omega]\ngenerators = [(1)]\n"
                .into(),
            1,
        ),
        ("unknown key", vec!["split"], good.replace("p = 5", "p = 5\nprecision = 3"), 1),
        ("version mismatch", vec!["split"], good.replace("format_version = 1", "format_version = 9"), 1),
        ("mode mismatch", vec!["group"], good.into(), 1),
        ("not squarefree", vec!["split"], good.replace("[1, 0, 1]", "[1, 2, 1]"), 1),
        ("e*f does not divide local degree", vec!["decide"], inconsistent.into(), 2),
        (
            "subgroup not contained",
            vec!["group"],
            "format_version = 1\nmode = group\n[gamma_nu]\ngenerators = [(1/3)]\n[gamma_omega]\ngenerators = [(1/2)]\n"
                .into(),
            2,
        ),
        ("depth limit", vec!["split", "--depth", "0"], deep.into(), 3),
    ];
    for (name, args, text, code) in &cases {
        let mut a = args.clone();
        a.extend(["--file", "-"]);
        let out = knaf(&a, Some(text));
        ensure(out.status.code() == Some(*code), || {
            format!(
                "{name}: exit {:?}, expected {code}; stderr {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            )
        })?;
        if *code != 0 {
            ensure(!out.stderr.is_empty(), || format!("{name}: no diagnostic"))?;
        }
    }
    for (args, code) in [
        (vec!["decide", "--fixture", "no-such"], 1),
        (vec!["fixtures", "no-such"], 1),
        (vec!["frobnicate"], 1),
        (vec!["--help"], 0),
    ] {
        let out = knaf(&args, None);
        ensure(out.status.code() == Some(code), || format!("{args:?}: exit {:?}", out.status.code()))?;
    }
    Ok(format!("{files} files round-trip, porcelain stable, {} exit-code cases", cases.len() + 4))
}

fn main() {
    let criteria: [(&str, fn() -> Check, u64); 9] = [
        ("criterion semantics on random invariants", criterion_1, 10),
        ("initial index vs box enumeration", criterion_2, 60),
        ("rank-1 conservation and Hensel counts", criterion_3, 120),
        ("named instances", criterion_4, 60),
        ("monomial ε dichotomy", criterion_5, 1),
        ("defect gate", criterion_6, 60),
        ("Frobenius defect", criterion_7, 60),
        ("scaling invariance", criterion_8, 60),
        ("CLI contract", criterion_9, 120),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or("panic".into()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|m| {
            if elapsed > Duration::from_secs(*limit) {
                Err(format!("took {elapsed:.1?}, limit {limit} s"))
            } else {
                Ok(m)
            }
        });
        match result {
            Ok(m) => println!("PASS {}. {name} ({elapsed:.2?}): {m}", i + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL {}. {name} ({elapsed:.2?}): {m}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
