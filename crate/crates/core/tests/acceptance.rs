//! Acceptance criteria. Run with `cargo test -p zonal-shepard --test acceptance`.
//!
//! Prints one PASS/FAIL line per criterion and exits non-zero if any fail.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zonal_shepard::benchmark::{self, BenchmarkRow, BenchmarkSpec, DataSource};
use zonal_shepard::{
    compute_delta, fit, geodesic_distance, geomagnetic_synthetic, random_uniform_sphere, rrmse,
    sh_basis, spiral_points, GeomagneticSynth, HarmonicDegree, LocalFitOptions, LocalInterpolant,
    ShepardConfig, TestFunction, UnitVec, ZonalKernel, ZoneIndex,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn deg(l: i32) -> HarmonicDegree {
    HarmonicDegree::new(l).unwrap()
}

fn median_of(rows: &[BenchmarkRow], source: &str, n: usize, l: i32) -> f64 {
    benchmark::median_rrmse(rows)[&(source.to_string(), n, deg(l))]
}

/// Reference RRMSE for f1, gamma = 0.5, indexed by L = -1..=2.
const REFERENCE_N1000: [f64; 4] = [3.4759e-4, 2.5466e-4, 1.0109e-4, 2.3277e-5];
const REFERENCE_N4000: [f64; 4] = [2.8568e-5, 1.8057e-5, 8.2052e-6, 1.3413e-6];

struct Context {
    f1_rows: Vec<BenchmarkRow>,
    f1_grid_time: Duration,
}

fn f1_grid() -> Context {
    let spec = BenchmarkSpec::tables(TestFunction::F1, vec![1000, 4000]);
    let t = Instant::now();
    let f1_rows = benchmark::run(&spec).expect("f1 grid");
    Context {
        f1_rows,
        f1_grid_time: t.elapsed(),
    }
}

fn criterion_1(ctx: &Context) -> Outcome {
    let mut ok = true;
    let mut detail = String::new();
    for (n, table) in [(1000, REFERENCE_N1000), (4000, REFERENCE_N4000)] {
        for (i, &expected) in table.iter().enumerate() {
            let l = i as i32 - 1;
            let m = median_of(&ctx.f1_rows, "f1", n, l);
            let inside = m >= expected / 10.0 && m <= expected * 10.0;
            ok &= inside;
            detail += &format!(
                "\n    n={n:<5} L={l:>2}: median {m:.4e} vs {expected:.4e} (ratio {:.2}){}",
                m / expected,
                if inside { "" } else { "  OUT OF BAND" }
            );
        }
    }
    let secs = ctx.f1_grid_time.as_secs_f64();
    ok &= secs < 60.0;
    detail += &format!("\n    grid runtime {secs:.1}s (limit 60s)");
    Outcome { passed: ok, detail }
}

fn criterion_2(ctx: &Context) -> Outcome {
    let mut ok = true;
    let mut detail = String::new();
    for n in [1000, 4000] {
        let m: Vec<f64> = (-1..=2).map(|l| median_of(&ctx.f1_rows, "f1", n, l)).collect();
        ok &= m[3] < m[0];
        detail += &format!(
            "\n    n={n}: L=-1 {:.3e}, L=0 {:.3e}, L=1 {:.3e}, L=2 {:.3e}",
            m[0], m[1], m[2], m[3]
        );
    }
    Outcome { passed: ok, detail }
}

fn criterion_3() -> Outcome {
    let mut spec = BenchmarkSpec::tables(TestFunction::F2, vec![1000]);
    spec.degrees = vec![deg(-1), deg(2)];
    let rows = benchmark::run(&spec).expect("f2 grid");
    let lo = median_of(&rows, "f2", 1000, -1);
    let hi = median_of(&rows, "f2", 1000, 2);
    Outcome {
        passed: hi < lo,
        detail: format!("\n    n=1000: L=-1 {lo:.4e} (reference 2.6059e-2), L=2 {hi:.4e} (reference 6.9575e-3)"),
    }
}

fn criterion_4(ctx: &Context) -> Outcome {
    let spec = BenchmarkSpec::tables(TestFunction::F1, vec![16000]);
    let t = Instant::now();
    let rows16 = benchmark::run(&spec).expect("n=16000 grid");
    let secs = t.elapsed().as_secs_f64();
    let mut ok = secs < 300.0;
    let mut detail = String::new();
    for l in -1..=2 {
        let a = median_of(&ctx.f1_rows, "f1", 1000, l);
        let b = median_of(&ctx.f1_rows, "f1", 4000, l);
        let c = median_of(&rows16, "f1", 16000, l);
        let dec = a > b && b > c;
        ok &= dec;
        detail += &format!(
            "\n    L={l:>2}: {a:.3e} > {b:.3e} > {c:.3e}{}",
            if dec { "" } else { "  NOT DECREASING" }
        );
    }
    detail += &format!("\n    n=16000 grid runtime {secs:.1}s (limit 300s)");
    Outcome { passed: ok, detail }
}

fn config(nz: usize, nw: usize, gamma: f64, l: i32) -> ShepardConfig {
    ShepardConfig::new(nz, nw, ZonalKernel::inverse_multiquadric(gamma).unwrap(), deg(l)).unwrap()
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut detail = String::new();

    // (a) interpolation at the nodes
    let nodes = random_uniform_sphere(1000, 11).sample(|p| TestFunction::F1.eval(p));
    let values = nodes.values().unwrap();
    let mut worst_a: f64 = 0.0;
    let mut worst_b: f64 = 0.0;
    let spiral = spiral_points(600).unwrap();
    for l in -1..=2 {
        let model = fit(nodes.points(), values, &config(15, 10, 0.5, l)).unwrap();
        let at_nodes = model.evaluate(nodes.points()).unwrap();
        for (o, v) in at_nodes.iter().zip(values) {
            worst_a = worst_a.max((o - v).abs() / v.abs());
        }
        // (b) partition of unity
        for e in model.evaluate_detailed(spiral.points()).unwrap() {
            worst_b = worst_b.max((e.weight_sum - 1.0).abs());
        }
    }
    ok &= worst_a <= 1e-7 && worst_b <= 1e-12;
    detail += &format!("\n    (a) max relative node residual {worst_a:.2e} (<= 1e-7)");
    detail += &format!("\n    (b) max |sum W - 1| {worst_b:.2e} (<= 1e-12)");

    // (c) harmonic reproduction
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let nodes = random_uniform_sphere(500, 12);
    for l in 0..=2 {
        let d = deg(l);
        let coef: Vec<f64> = (0..d.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let g = |p: &UnitVec| sh_basis(p, d).iter().zip(&coef).map(|(y, c)| y * c).sum::<f64>();
        let vals: Vec<f64> = nodes.points().iter().map(g).collect();
        let model = fit(nodes.points(), &vals, &config(15, 10, 0.5, l)).unwrap();
        let pred = model.evaluate(spiral.points()).unwrap();
        let truth: Vec<f64> = spiral.points().iter().map(g).collect();
        let e = rrmse(&pred, &truth).unwrap();
        ok &= e <= 1e-7;
        detail += &format!("\n    (c) L={l}: harmonic reproduction RRMSE {e:.2e} (<= 1e-7)");
    }
    Outcome { passed: ok, detail }
}

fn brute_force_cap(points: &[UnitVec], c: &UnitVec, r: f64) -> Vec<usize> {
    let mut v: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (geodesic_distance(c, p), i))
        .filter(|(d, _)| *d <= r)
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v.into_iter().map(|x| x.1).collect()
}

fn criterion_6() -> Outcome {
    let n = 500;
    let pts = random_uniform_sphere(n, 31);
    let queries = random_uniform_sphere(50, 32);
    let m_base = 15;
    let ix = ZoneIndex::build(pts.points(), compute_delta(n, m_base, 1)).unwrap();
    let (mut total, mut agree) = (0usize, 0usize);
    for q in queries.points() {
        // radii along the escalation path up to the whole sphere
        let mut k = 1u64;
        loop {
            let r = compute_delta(n, m_base, k);
            total += 1;
            if ix.query_cap(q, r).ids == brute_force_cap(pts.points(), q, r) {
                agree += 1;
            }
            if r >= PI {
                break;
            }
            k = k * 2 + 1;
        }
        for m in [1, 10, 15, 40, 120, 500] {
            total += 1;
            let got = ix.nearest_m(q, m, n).unwrap().neighbors.ids;
            let want: Vec<usize> = brute_force_cap(pts.points(), q, PI).into_iter().take(m).collect();
            if got == want {
                agree += 1;
            }
        }
    }
    Outcome {
        passed: agree == total,
        detail: format!("\n    {agree}/{total} query results identical to brute force"),
    }
}

fn criterion_7() -> Outcome {
    let pts = random_uniform_sphere(3000, 41);
    let centers = random_uniform_sphere(200, 42);
    let ix = ZoneIndex::build(pts.points(), compute_delta(3000, 15, 1)).unwrap();
    let kernel = ZonalKernel::inverse_multiquadric(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let (mut worst_res, mut worst_mom): (f64, f64) = (0.0, 0.0);
    let mut failures = 0;
    for (i, c) in centers.points().iter().enumerate() {
        let ids = ix.nearest_m(c, 15, 3000).unwrap().neighbors.ids;
        let nodes: Vec<UnitVec> = ids.iter().map(|&i| pts.points()[i]).collect();
        // smooth data: a test function plus a random field of degree <= 4
        let f = if i % 2 == 0 { TestFunction::F1 } else { TestFunction::F2 };
        let coef: Vec<f64> = (0..25).map(|_| rng.random_range(-1.0..1.0)).collect();
        let values: Vec<f64> = nodes
            .iter()
            .map(|p| {
                let field: f64 = sh_basis(p, deg(4)).iter().zip(&coef).map(|(y, c)| y * c).sum();
                f.eval(p) + field
            })
            .collect();
        match LocalInterpolant::fit(&nodes, &values, kernel, deg(2), &LocalFitOptions::default(), i) {
            Ok(z) => {
                let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let res = nodes
                    .iter()
                    .zip(&values)
                    .map(|(p, v)| (z.eval(p) - v).abs() / scale)
                    .fold(0.0, f64::max);
                worst_res = worst_res.max(res);
                worst_mom = worst_mom.max(z.moment_residual());
            }
            Err(_) => failures += 1,
        }
    }
    Outcome {
        passed: failures == 0 && worst_res <= 1e-8 && worst_mom <= 1e-8,
        detail: format!(
            "\n    200 neighborhoods: {failures} failures, max residual {worst_res:.2e}, max moment residual {worst_mom:.2e}"
        ),
    }
}

fn criterion_8() -> Outcome {
    let data = geomagnetic_synthetic(2284, 2084, GeomagneticSynth::default());
    let spec = BenchmarkSpec {
        source: DataSource::Dataset {
            label: "geomag".into(),
            data,
        },
        node_counts: vec![],
        seeds: (1..=5).collect(),
        degrees: vec![deg(-1), deg(0)],
        gamma: 0.96,
        nz: 12,
        nw: 10,
        eval_count: 200,
    };
    let rows = benchmark::run(&spec).expect("geomagnetic cross-validation");
    let lo = median_of(&rows, "geomag", 2084, -1);
    let hi = median_of(&rows, "geomag", 2084, 0);
    Outcome {
        passed: hi <= lo,
        detail: format!("\n    n=2084, s=200: L=-1 {lo:.4e}, L=0 {hi:.4e}"),
    }
}

fn criterion_9() -> Outcome {
    let mut spec = BenchmarkSpec::tables(TestFunction::F1, vec![1000]);
    spec.seeds = vec![1];
    let rows = benchmark::gamma_sweep(&spec).expect("gamma sweep");
    let gammas: Vec<f64> = {
        let mut g: Vec<f64> = rows.iter().map(|r| r.gamma).collect();
        g.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        g.sort_by(f64::total_cmp);
        g.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        g
    };
    let covers = gammas.len() == 19
        && (gammas[0] - 0.05).abs() < 1e-12
        && (gammas[18] - 0.95).abs() < 1e-12;
    let finite = rows.iter().all(|r| r.rrmse.is_finite());
    let best = rows.iter().map(|r| r.rrmse).fold(f64::INFINITY, f64::min);
    let worst = rows.iter().map(|r| r.rrmse).fold(0.0, f64::max);
    Outcome {
        passed: covers && finite,
        detail: format!(
            "\n    {} sweep rows over {} gamma values, all finite: {finite}, rrmse range [{best:.2e}, {worst:.2e}]",
            rows.len(),
            gammas.len()
        ),
    }
}

fn main() {
    let start = Instant::now();
    let ctx = f1_grid();
    let results = [
        ("1 f1 error magnitudes", criterion_1(&ctx)),
        ("2 augmentation benefit, f1", criterion_2(&ctx)),
        ("3 augmentation benefit, f2", criterion_3()),
        ("4 refinement trend", criterion_4(&ctx)),
        ("5 exactness suite", criterion_5()),
        ("6 search-structure oracle equivalence", criterion_6()),
        ("7 local solver conditions", criterion_7()),
        ("8 geomagnetic-style cross-validation", criterion_8()),
        ("9 gamma-sweep sanity", criterion_9()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        println!(
            "[{}] criterion {name}{}",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed ({:.1}s)",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
