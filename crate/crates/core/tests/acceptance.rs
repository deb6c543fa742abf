//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 7 and 12 state claims that do not hold as written. They print
//! FAIL, followed by a line for the form that does hold. The run exits
//! nonzero if any other criterion fails, if a corrected form fails, or if one
//! of the two stated claims starts passing.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use qbrion_core::jackson::{self, FirstOrthantDivisor};
use qbrion_core::lattice::{dilate, Polytope};
use qbrion_core::measures::{self, DiscreteMeasure, DEFAULT_TOL};
use qbrion_core::{brion, qalg, Result};

const SEED: u64 = 20240601;
const KNOWN_FALSE: [usize; 2] = [7, 12];

const SEGMENTS: [&str; 4] = ["segment_0.json", "segment_1.json", "segment_2.json", "segment_5.json"];
const PLANAR: [&str; 3] = ["hexagon.json", "simplex_p2.json", "square_p1xp1.json"];

struct Verdict {
    pass: bool,
    detail: String,
    corrected: Option<(bool, String)>,
}

impl Verdict {
    fn plain(pass: bool, detail: String) -> Self {
        Self { pass, detail, corrected: None }
    }
}

fn fixture(name: &str) -> Polytope {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    Polytope::from_path(path).expect("fixture")
}

fn all_fixtures() -> Vec<&'static str> {
    SEGMENTS.iter().chain(PLANAR.iter()).copied().chain(["trapezoid_f1.json"]).collect()
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn verify_family(names: &[&str], order: usize, runtime_target: f64) -> Result<Verdict> {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in names {
        let t = Instant::now();
        let rep = brion::verify_identity(&fixture(name), order, 3, SEED, false)?;
        let secs = t.elapsed().as_secs_f64();
        pass &= rep.equal;
        let status = if rep.equal { "equal" } else { "MISMATCH" };
        let slow = if secs < runtime_target { "" } else { " over runtime target" };
        parts.push(format!("{} {status} {secs:.2}s{slow}", name.trim_end_matches(".json")));
    }
    Ok(Verdict::plain(pass, format!("K={order}, 3 trials: {}", parts.join(", "))))
}

fn criterion_1() -> Result<Verdict> {
    verify_family(&SEGMENTS, 20, 1.0)
}

fn criterion_2() -> Result<Verdict> {
    verify_family(&PLANAR, 12, 30.0)
}

fn criterion_3() -> Result<Verdict> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for name in all_fixtures() {
        let p = fixture(name);
        let rep = brion::verify_identity(&p, 1, 3, SEED, false)?;
        for point in &rep.points {
            let x: Vec<BigRational> = point.iter().map(|s| BigRational::from_str(s).unwrap()).collect();
            let rhs = brion::rhs_series_at(&p, &x, 1)?;
            if rhs.coeff(0) != &brion::lattice_point_sum(&p, &x)? {
                bad.push(format!("{name} at {point:?}"));
            }
            checked += 1;
        }
    }
    Ok(Verdict::plain(bad.is_empty(), format!("{checked} fixture/point pairs, mismatches: {bad:?}")))
}

fn criterion_4() -> Result<Verdict> {
    let mut names = Vec::new();
    let mut bad = Vec::new();
    for name in all_fixtures() {
        let p = fixture(name);
        if !p.is_radially_symmetric() {
            continue;
        }
        names.push(name.trim_end_matches(".json"));
        let lhs = brion::lhs_series(&p, 12)?;
        let rs = brion::rs_polynomial(&p)?;
        let f = qalg::q_pochhammer(p.offset_sum() as usize, 12);
        let same_support = lhs.support().eq(rs.support());
        let coefficientwise = lhs.iter().all(|(u, g)| rs.get(u).is_some_and(|c| g * &f == c.to_series(12)));
        if !(same_support && coefficientwise) {
            bad.push(name);
        }
    }
    Ok(Verdict::plain(bad.is_empty(), format!("mod q^13 on {}; failing: {bad:?}", names.join(", "))))
}

fn criterion_5() -> Result<Verdict> {
    let mut cases: Vec<(String, Polytope)> = Vec::new();
    for m in 0..=5 {
        cases.push((format!("P1 m={m}"), Polytope::segment(m)));
    }
    for k in 0..=4 {
        cases.push((format!("P2 k={k}"), Polytope::projective_simplex(2, k)));
    }
    for m1 in 0..=3 {
        for m2 in 0..=3 {
            cases.push((format!("P1xP1 ({m1},{m2})"), Polytope::product_of_segments(&[m1, m2])));
        }
    }
    let mut checks = 0;
    let mut bad = Vec::new();
    for (label, p) in &cases {
        let d = FirstOrthantDivisor::new(p.clone())?;
        for axis in 0..p.dim() {
            checks += 1;
            if !jackson::verify_derivative_recursion(&d, axis)? {
                bad.push(format!("{label} axis {}", axis + 1));
            }
        }
    }
    Ok(Verdict::plain(bad.is_empty(), format!("{checks} polytope/axis pairs over {} polytopes; failing: {bad:?}", cases.len())))
}

fn criterion_6() -> Result<Verdict> {
    let convention = jackson::discriminate_convention(6)?;
    let mut one_var = true;
    for k in 0..=6 {
        one_var &= jackson::verify_ladder(1, k, 0, convention)?.all_hold();
    }
    let mut failures = Vec::new();
    for k in 0..=4 {
        for axis in 0..2 {
            let rep = jackson::verify_ladder(2, k, axis, convention)?;
            if !rep.all_hold() {
                failures.push(format!("k={k} axis {}: {rep:?}", axis + 1));
            }
        }
    }
    let two_var = if failures.is_empty() {
        "n=2, k<=4, both axes: all three identities hold".to_string()
    } else {
        format!("n=2 failures: {failures:?}")
    };
    Ok(Verdict::plain(one_var, format!("convention {convention:?}; n=1, k<=6: {}; {two_var}", if one_var { "all hold" } else { "FAILED" })))
}

fn criterion_7() -> Result<Verdict> {
    let mut literal_bad = Vec::new();
    let mut corrected_bad = Vec::new();
    let mut names = Vec::new();
    for name in all_fixtures() {
        let p = fixture(name);
        if !p.is_radially_symmetric() {
            continue;
        }
        let d = FirstOrthantDivisor::new(p)?;
        let lt = jackson::leading_term_check(&d)?;
        let label = name.trim_end_matches(".json");
        names.push(label);
        if lt.derivative != lt.bare_product() {
            literal_bad.push(format!("{label} at {:?}: {} vs {}", lt.maximizer, lt.derivative, lt.bare_product()));
        }
        if lt.derivative != lt.expected() {
            corrected_bad.push(label.to_string());
        }
    }
    Ok(Verdict {
        pass: literal_bad.is_empty(),
        detail: format!("derivative vs [i_1]_q...[i_n]_q on {}; differs on {literal_bad:?}", names.join(", ")),
        corrected: Some((
            corrected_bad.is_empty(),
            format!("derivative = RS coefficient at the maximizer times [i_1]_q!...[i_n]_q!; failing: {corrected_bad:?}"),
        )),
    })
}

fn criterion_8() -> Result<Verdict> {
    let seg = fixture("segment_1.json");
    let mut exact = true;
    for k in 1..=10u64 {
        let mu = measures::mu_measure(&dilate(&seg, k as i64)?)?;
        let binom = DiscreteMeasure::from_masses(
            1,
            (0..=k).map(|j| (vec![j as i64], num_integer::binomial(BigUint::from(k), BigUint::from(j)))),
        )?;
        exact &= mu == binom;
    }
    let mut worst: f64 = 0.0;
    for k in [5i64, 50] {
        let mu = measures::mu_measure(&dilate(&seg, k)?)?;
        for x in [0.1, 1.0, PI] {
            let got = measures::characteristic_function_scaled(&mu, &[x], k as f64);
            let want = Complex64::from_polar(1.0, x / 2.0) * (x / (2.0 * k as f64)).cos().powi(k as i32);
            worst = worst.max((got - want).norm());
        }
    }
    Ok(Verdict::plain(
        exact && worst < 1e-12,
        format!("binomial for k<=10: {exact}; max characteristic function error {worst:.2e} (tol 1e-12)"),
    ))
}

fn criterion_9() -> Result<Verdict> {
    let p = fixture("trapezoid_f1.json");
    let mu = measures::mu_measure(&p)?;
    let want = DiscreteMeasure::from_masses(
        2,
        [(vec![0, 1], 1u32), (vec![1, 1], 2), (vec![2, 1], 1)].map(|(u, w)| (u, BigUint::from(w))),
    )?;
    let tv = mu.total_variation(&measures::mu_limit_estimate(&p, &r(999, 1000))?);
    let close = tv <= r(1, 100);
    Ok(Verdict::plain(
        mu == want && close,
        format!("exact (1/4,1/2,1/4): {}; total variation at q=0.999: {:.3e} (tol 1e-2)", mu == want, tv.to_f64().unwrap()),
    ))
}

fn scaled_covariance(p: &Polytope, k: i64) -> Result<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let mom = measures::mu_moments(&dilate(p, k)?)?;
    let kr = BigRational::from_integer(k.into());
    let mean = mom.mean.iter().map(|x| x / &kr).collect();
    let cov = mom.covariance.iter().map(|row| row.iter().map(|x| x / &kr).collect()).collect();
    Ok((mean, cov))
}

fn criterion_10() -> Result<Verdict> {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["segment_1.json", "simplex_p2.json"] {
        let p = fixture(name);
        let limit = measures::gaussian_model(&p, DEFAULT_TOL)?.covariance();
        let (_, first) = scaled_covariance(&p, 1)?;
        let mut constant = true;
        let mut worst: f64 = 0.0;
        for k in 1..=10 {
            let (_, cov) = scaled_covariance(&p, k)?;
            constant &= cov == first;
            for (a, b) in cov.iter().flatten().zip(limit.iter().flatten()) {
                worst = worst.max((a.to_f64().unwrap() - b).abs());
            }
        }
        pass &= constant && worst < 1e-12;
        parts.push(format!("{} Cov/k constant for k<=10: {constant}, max gap to Gaussian {worst:.1e}", name.trim_end_matches(".json")));
    }
    let t = Instant::now();
    let (mean, cov) = scaled_covariance(&fixture("hexagon.json"), 400)?;
    let secs = t.elapsed().as_secs_f64();
    let target = [[1.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 3.0]];
    let mut diff = 0.0;
    let mut norm = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            diff += (cov[i][j].to_f64().unwrap() - target[i][j]).powi(2);
            norm += target[i][j].powi(2);
        }
    }
    let rel = (diff / norm).sqrt();
    let mean_exact = mean.iter().all(|m| *m == r(1, 1));
    pass &= rel <= 0.03 && mean_exact;
    parts.push(format!("hexagon k=400 relative Frobenius {rel:.2e} (tol 3e-2), E/k=(1,1) exactly: {mean_exact}, {secs:.2}s"));
    Ok(Verdict::plain(pass, parts.join("; ")))
}

fn criterion_11() -> Result<Verdict> {
    let mut pass = true;
    for name in ["segment_1.json", "simplex_p2.json"] {
        let p = fixture(name);
        let mus: Vec<DiscreteMeasure> = (1..=8).map(|k| measures::mu_measure(&dilate(&p, k)?)).collect::<Result<_>>()?;
        for k in 1..=4 {
            for l in 1..=4 {
                pass &= measures::convolve(&mus[k - 1], &mus[l - 1])? == mus[k + l - 1];
            }
        }
    }
    Ok(Verdict::plain(pass, "mu_kD * mu_lD = mu_(k+l)D for k,l<=4 on segment_1 and simplex_p2".into()))
}

fn criterion_12() -> Result<Verdict> {
    let dir = tempfile::tempdir()?;
    let out = Command::new(env!("CARGO_BIN_EXE_qbrion"))
        .args(["heatmap", fixture_path("hexagon.json").as_str(), "--dilate", "30", "--q", "0.2,0.6,0.9", "--output"])
        .arg(dir.path())
        .output()?;
    if !out.status.success() {
        return Ok(Verdict::plain(false, format!("heatmap exited with {:?}", out.status.code())));
    }
    let mut sums_ok = true;
    let mut symmetric = true;
    let mut peaks = Vec::new();
    for q in ["0.2", "0.6", "0.9"] {
        let text = std::fs::read_to_string(dir.path().join(format!("heatmap_k30_q{q}.tsv")))?;
        let table: HashMap<(i64, i64), &str> = text
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split('\t').collect();
                ((f[0].parse().unwrap(), f[1].parse().unwrap()), f[2])
            })
            .collect();
        let total: f64 = table.values().map(|w| w.parse::<f64>().unwrap()).sum();
        sums_ok &= (total - 1.0).abs() < 1e-12;
        symmetric &= table.iter().all(|(&(a, b), w)| table.get(&(60 - a, 60 - b)) == Some(w));
        peaks.push(table.values().map(|w| w.parse::<f64>().unwrap()).fold(0.0, f64::max));
    }
    let narrowing = peaks[2] < peaks[0];
    let detail = format!(
        "three tables, sums within 1e-12: {sums_ok}, symmetric under u -> (60,60)-u: {symmetric}; peaks {:.3e}, {:.3e}, {:.3e} at q=0.2, 0.6, 0.9",
        peaks[0], peaks[1], peaks[2]
    );
    Ok(Verdict {
        pass: sums_ok && symmetric && narrowing,
        detail: format!("{detail}; q=0.9 peak below q=0.2 peak: {narrowing}"),
        corrected: Some((
            sums_ok && symmetric && peaks[0] < peaks[1] && peaks[1] < peaks[2],
            "normalized, symmetric, and the peak weight grows with q".into(),
        )),
    })
}

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn main() -> ExitCode {
    let criteria: [fn() -> Result<Verdict>; 12] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
    ];
    let mut consistent = true;
    let mut passed = 0;
    for (i, check) in criteria.iter().enumerate() {
        let id = i + 1;
        let t = Instant::now();
        let verdict = check().unwrap_or_else(|e| Verdict::plain(false, format!("error: {e}")));
        let tag = if verdict.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {tag}  {} [{:.2}s]", verdict.detail, t.elapsed().as_secs_f64());
        if let Some((ok, text)) = &verdict.corrected {
            println!("    corrected form: {}  {text}", if *ok { "PASS" } else { "FAIL" });
        }
        passed += usize::from(verdict.pass);
        consistent &= if KNOWN_FALSE.contains(&id) {
            !verdict.pass && verdict.corrected.is_some_and(|(ok, _)| ok)
        } else {
            verdict.pass
        };
    }
    println!("acceptance: {passed}/12 PASS; criteria {KNOWN_FALSE:?} fail as stated, corrected forms checked above");
    if consistent { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
