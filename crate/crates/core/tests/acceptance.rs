//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p glucomem --test acceptance`.

use std::time::Instant;

use glucomem::closed_form::{
    agm_m, steady_u, steady_v, steady_w, thiele_k, vim_u, vim_v, vim_w, ClosedFormCoefficients,
    AGM_TOL,
};
use glucomem::model::{initial_profile, DimensionlessParams, Param};
use glucomem::solver::{
    estimate_convergence_order, solve_steady, solve_transient, ConcentrationField,
    ConvergenceOrder, Grid, SolverConfig,
};
use glucomem::validation::{
    reproduce_table, sensitivity_analysis, Functional, Species, TableId, TABLE_POSITIONS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Absolute tolerance for four-decimal table entries.
const TABLE_TOL: f64 = 5e-4;
const AGM_PRINTED: f64 = 0.3133;
const AGM_SWEEP_TOL: f64 = 1e-10;
const TABLE1_MEAN_DEV_MAX: f64 = 0.01;
const TABLE3_MEAN_DEV_MAX: f64 = 0.07;
const NUMERICAL_U0: f64 = 0.9528;
const NUMERICAL_U0_TOL: f64 = 0.002;
const IDENTITY_TOL: f64 = 1e-8;
const TRANSIENT_STEADY_TOL: f64 = 1e-4;
const EXACT_TOL: f64 = 1e-12;
const VIM_SHORT_TIME_TOL: f64 = 1e-3;
const ORDER_RANGE: (f64, f64) = (1.8, 2.2);
const SHARE_SUM_TOL: f64 = 0.1;
const GRID_N: usize = 201;

// Printed closed-form columns, X = 0, 0.2, …, 1.
const TABLE1_VIM: [(f64, [f64; 6]); 3] = [
    (10.0, [0.9528, 0.9547, 0.9603, 0.9697, 0.9829, 1.0]),
    (210.0, [0.4503, 0.4690, 0.5267, 0.6280, 0.7815, 1.0]),
    (350.0, [0.3058, 0.3271, 0.3938, 0.5153, 0.7084, 1.0]),
];
const TABLE2_VIM_GS10: [f64; 6] = [0.9764, 0.9773, 0.9801, 0.9848, 0.9914, 1.0];
const TABLE3_VIM: [(f64, [f64; 6]); 3] = [
    (5.0, [0.1774, 0.1705, 0.1498, 0.1149, 0.0652, 0.0]),
    (20.0, [0.7096, 0.6821, 0.5993, 0.4597, 0.2610, 0.0]),
    (40.0, [1.4192, 1.3643, 1.1986, 0.9195, 0.5221, 0.0]),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn params(alpha: f64, beta: f64, ge: f64, gs: f64) -> DimensionlessParams {
    DimensionlessParams::new(alpha, beta, ge, gs, 1.0, 1.0).unwrap()
}

fn scenario_a() -> DimensionlessParams {
    params(0.01, 1.15, 10.0, 10.0)
}

fn grid() -> Grid {
    Grid::new(GRID_N).unwrap()
}

fn glucose_closed_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for (ge, column) in TABLE1_VIM {
        let c = ClosedFormCoefficients::new(&params(0.01, 1.15, ge, 10.0)).unwrap();
        for (x, expected) in TABLE_POSITIONS.iter().zip(column) {
            worst = worst.max((steady_u(*x, &c).unwrap() - expected).abs());
        }
    }
    outcome(
        worst <= TABLE_TOL,
        format!("max |u - table| = {worst:.2e} (tol {TABLE_TOL:.0e})"),
    )
}

fn agm_constant() -> Outcome {
    let m = agm_m(10.0, 0.01, 1.15, AGM_TOL).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let ge = rng.gen_range(0.1..500.0);
        let alpha = 10f64.powf(rng.gen_range(-2.0..1.0));
        let beta = 10f64.powf(rng.gen_range(-2.0..1.0));
        let k = thiele_k(ge, alpha, beta).unwrap();
        worst = worst.max((agm_m(ge, alpha, beta, AGM_TOL).unwrap() - k.sqrt()).abs());
    }
    outcome(
        (m - AGM_PRINTED).abs() <= TABLE_TOL && worst <= AGM_SWEEP_TOL,
        format!("m = {m:.6}; max |m - sqrt k| over 100 draws = {worst:.2e}"),
    )
}

fn acid_closed_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for (gs, column) in TABLE3_VIM {
        let p = params(0.1, 1.0, 5.0, gs);
        let c = ClosedFormCoefficients::new(&p).unwrap();
        for (x, expected) in TABLE_POSITIONS.iter().zip(column) {
            worst = worst.max((steady_w(*x, &p, &c).unwrap() - expected).abs());
        }
    }
    outcome(worst <= TABLE_TOL, format!("max |w - table| = {worst:.2e}"))
}

fn oxygen_closed_form() -> Outcome {
    let p = scenario_a();
    let c = ClosedFormCoefficients::new(&p).unwrap();
    let worst = TABLE_POSITIONS
        .iter()
        .zip(TABLE2_VIM_GS10)
        .map(|(x, e)| (steady_v(*x, &p, &c).unwrap() - e).abs())
        .fold(0.0, f64::max);
    outcome(worst <= TABLE_TOL, format!("max |v - table| = {worst:.2e}"))
}

fn solver_vs_closed_form(cfg: &SolverConfig) -> Outcome {
    let g = grid();
    let t1 = reproduce_table(TableId::Glucose, &g, cfg).unwrap();
    let t3 = reproduce_table(TableId::GluconicAcid, &g, cfg).unwrap();
    let t1_worst = t1
        .iter()
        .map(|r| r.mean_dev_vim.max(r.mean_dev_agm))
        .fold(0.0, f64::max);
    let t3_worst = t3
        .iter()
        .map(|r| r.mean_dev_vim.max(r.mean_dev_agm))
        .fold(0.0, f64::max);
    let u0 = t1[0].rows[0].numerical;
    outcome(
        t1_worst <= TABLE1_MEAN_DEV_MAX
            && t3_worst <= TABLE3_MEAN_DEV_MAX
            && (u0 - NUMERICAL_U0).abs() <= NUMERICAL_U0_TOL,
        format!(
            "table 1 worst mean dev {t1_worst:.4}, table 3 worst mean dev {t3_worst:.4}, numerical u(0) = {u0:.4}"
        ),
    )
}

fn steady_invariants(cfg: &SolverConfig) -> Outcome {
    let g = grid();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for table in [TableId::Glucose, TableId::Oxygen, TableId::GluconicAcid] {
        for r in reproduce_table(table, &g, cfg).unwrap() {
            worst = worst.max(r.audit.max_coupling_violation());
            count += 1;
        }
    }
    outcome(
        worst <= IDENTITY_TOL,
        format!("{count} steady solutions, max identity violation {worst:.2e}"),
    )
}

fn transient_consistency(cfg: &SolverConfig) -> Outcome {
    let g = grid();
    let p = scenario_a();
    let run = solve_transient(&p, &g, cfg, 5.0, &[0.0, 0.01, 5.0]).unwrap();
    let steady = solve_steady(&p, &g, cfg).unwrap();
    let late = run.samples[2].max_abs_diff(&steady.field);
    let ic = run.samples[0].max_abs_diff(&ConcentrationField::initial(&g));
    let short = (run.samples[1].u[0] - vim_u(0.0, 0.01, &p).unwrap()).abs();
    outcome(
        late <= TRANSIENT_STEADY_TOL && ic <= EXACT_TOL && short <= VIM_SHORT_TIME_TOL,
        format!("|T(5) - S| = {late:.2e}, |T(0) - IC| = {ic:.1e}, |u(0,0.01) - vim| = {short:.2e}"),
    )
}

fn spatial_convergence(cfg: &SolverConfig) -> Outcome {
    let p = params(0.01, 1.15, 210.0, 10.0);
    let est = estimate_convergence_order(&p, cfg, &[101, 201, 401]).unwrap();
    match est.order {
        ConvergenceOrder::Observed(q) => outcome(
            (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&q),
            format!("observed order {q:.3}"),
        ),
        ConvergenceOrder::Exact => outcome(false, "differences at round-off; no order observable"),
    }
}

fn sensitivity_properties(cfg: &SolverConfig) -> Outcome {
    let g = grid();
    let p = scenario_a();
    let mut ok = true;
    let mut notes = Vec::new();
    for target in [Species::U, Species::V, Species::W] {
        let a = sensitivity_analysis(target, &p, 0.01, Functional::Center, &g, cfg).unwrap();
        let b = sensitivity_analysis(target, &p, 0.01, Functional::Center, &g, cfg).unwrap();
        let nonneg = a.entries.iter().all(|e| e.share_percent >= 0.0);
        let sum = a.total_share();
        ok &= nonneg && (sum - 100.0).abs() <= SHARE_SUM_TOL && a == b;
        if target != Species::W {
            ok &= a.share(Param::Mu) == 0.0;
        }
        notes.push(format!("{target}: sum {sum:.4}"));
    }
    outcome(
        ok,
        notes.join(", ") + "; mu share for u = 0; repeat runs identical",
    )
}

fn vim_exactness() -> Outcome {
    let p = scenario_a();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let x: f64 = rng.gen_range(0.0..=1.0);
        let (u, v, w) = initial_profile(x).unwrap();
        worst = worst
            .max((vim_u(x, 0.0, &p).unwrap() - u).abs())
            .max((vim_v(x, 0.0, &p).unwrap() - v).abs())
            .max((vim_w(x, 0.0, &p).unwrap() - w).abs());
    }
    let r = |t: f64| vim_u(1.0, t, &p).unwrap() - 1.0;
    let (t1, t2) = (0.05, 0.5);
    let collinear = (r(t2) * t1 - r(t1) * t2).abs();
    outcome(
        worst <= EXACT_TOL && collinear <= EXACT_TOL,
        format!("max |VIM(tau=0) - IC| = {worst:.1e}, collinearity defect {collinear:.1e}"),
    )
}

type Criterion = Box<dyn Fn() -> Outcome>;

fn main() {
    // libtest flags (e.g. --nocapture) are accepted and ignored
    let cfg = SolverConfig::default();
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "1 closed-form glucose vs table 1",
            Box::new(glucose_closed_form),
        ),
        ("2 AGM constant", Box::new(agm_constant)),
        (
            "3 closed-form gluconic acid vs table 3",
            Box::new(acid_closed_form),
        ),
        (
            "4 closed-form oxygen vs table 2 (gammaS1=10)",
            Box::new(oxygen_closed_form),
        ),
        (
            "5 numerical steady vs closed form",
            Box::new(move || solver_vs_closed_form(&cfg)),
        ),
        (
            "6 steady coupling identities",
            Box::new(move || steady_invariants(&cfg)),
        ),
        (
            "7 transient-to-steady consistency",
            Box::new(move || transient_consistency(&cfg)),
        ),
        (
            "8 spatial convergence order",
            Box::new(move || spatial_convergence(&cfg)),
        ),
        (
            "9 sensitivity share properties",
            Box::new(move || sensitivity_properties(&cfg)),
        ),
        (
            "10 VIM initial-condition exactness",
            Box::new(vim_exactness),
        ),
    ];

    let start = Instant::now();
    let mut failed = 0;
    for (name, check) in &criteria {
        let t = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {name}: {} ({:.2}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
