//! Acceptance suite. Each test prints one `criterion N ... PASS|FAIL` line; run with
//! `cargo test -p ppa-reductions --test acceptance -- --nocapture --test-threads=1`.

mod common;

use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use common::gates::run_gate;
use common::*;
use num::{Signed, Zero};
use ppa_reductions::ce::{self, BlanketState};
use ppa_reductions::gadgets::reduction::check_masses;
use ppa_reductions::gadgets::{build_reduction, output_gate_transform, GateKind};
use ppa_reductions::instances::{HamSandwichInstance, NVHDTInstance, NecklaceInstance, TuckerGrid2D};
use ppa_reductions::measure::{Label, LabelledCutSet};
use ppa_reductions::mobius::*;
use ppa_reductions::oracles::{
    brute_force_ham_sandwich, brute_force_necklace, complementary_pairs, verify_necklace, verify_tucker2d, HamBounds,
    TUCKER_CELL_BOUND,
};
use ppa_reductions::params::ReductionParams;
use ppa_reductions::rational::{int, q, Rational};
use ppa_reductions::sandwich::*;
use ppa_reductions::snake::{compose_folds, pull_back_solution};
use rand::seq::SliceRandom;
use rand::Rng;

fn report(n: u32, what: &str, failures: &[String], detail: String, start: Instant, limit: Duration) {
    let took = start.elapsed();
    let ok = failures.is_empty() && took <= limit;
    println!(
        "criterion {n:>2} {what:<34} {}  ({detail}; {:.2}s of {}s)",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs()
    );
    assert!(failures.is_empty(), "criterion {n}: {} failures, first: {}", failures.len(), failures[0]);
    assert!(took <= limit, "criterion {n}: {took:?} over {limit:?}");
}

/// Criteria run one at a time so each runtime is measured alone.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

#[test]
fn c01_moment_curve_round_trip() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut count = 0;
    for len in 1..=8usize {
        for mask in 0u32..(1 << len) {
            let beads: Vec<u32> = (0..len).map(|j| 1 + (mask >> j & 1)).collect();
            let Ok(inst) = NecklaceInstance::new(beads, 2, 2) else { continue };
            count += 1;
            let run = || -> ppa_reductions::Result<bool> {
                let (dhs, emb) = necklace_to_sandwich(&inst)?;
                let sol = brute_force_ham_sandwich(&dhs, HamBounds::default())?;
                let split = sandwich_to_necklace_solution(&emb, &sol.hyperplane, &sol.on_plane)?;
                Ok(split.cut_positions.len() <= 2 && verify_necklace(&inst, &split)?)
            };
            match run() {
                Ok(true) => {}
                other => fails.push(format!("{:?}: {other:?}", inst.beads)),
            }
        }
    }
    report(1, "moment-curve round trip", &fails, format!("{count} necklaces"), start, secs(120));
}

#[test]
fn c02_snake_embedding_soundness() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let (mut grids, mut pairs) = (0, 0);
    for m in 4..=9usize {
        for seed in 0..9u64 {
            let g = TuckerGrid2D::random(m, &mut rng(9000 + 100 * m as u64 + seed));
            grids += 1;
            let e = match compose_folds(&g) {
                Ok(e) => e,
                Err(err) => {
                    fails.push(format!("m={m} seed={seed}: {err}"));
                    continue;
                }
            };
            if let Err(err) = e.grid.check_bounded_facets() {
                fails.push(format!("m={m} seed={seed}: {err}"));
            }
            for (p, qq) in complementary_pairs(&e.grid, TUCKER_CELL_BOUND, false).unwrap() {
                pairs += 1;
                match pull_back_solution(&e.trace, &g, &p, &qq) {
                    Ok((a, b)) if verify_tucker2d(&g, a, b).unwrap_or(false) => {}
                    other => fails.push(format!("m={m} seed={seed} {p:?} {qq:?}: {other:?}")),
                }
            }
        }
    }
    report(2, "snake embedding soundness", &fails, format!("{grids} grids, {pairs} pairs"), start, secs(300));
}

#[test]
fn c03_coordinate_transform_exactness() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut g = rng(3003);
    let mut trips = 0;
    for n in 2..=6usize {
        let r = q(1, 10 * (n * n) as i64);
        for _ in 0..2000 {
            let p = near_axis(&mut g, n, &r);
            trips += 1;
            match from_transformed(&p).and_then(|x| to_transformed(&x)) {
                Ok(t) if t.point == p => {}
                other => fails.push(format!("{p:?}: {other:?}")),
            }
        }
    }
    let mut seams = 0;
    for k in 0..1000 {
        let n = 2 + k % 5;
        let y = positive_simplex(&mut g, n);
        let mut a = vec![Rational::zero()];
        a.extend(y.coords.clone());
        let mut b = y.coords.clone();
        b.push(Rational::zero());
        let ta = to_transformed(&SimplexPoint::new(a).unwrap()).unwrap().point;
        let tb = to_transformed(&SimplexPoint::new(b).unwrap()).unwrap().point;
        seams += 1;
        let neg: Vec<Rational> = tb.alphas.iter().map(|v| -v).collect();
        if !(ta.tau.is_zero() && tb.tau == int(1) && ta.alphas == neg) {
            fails.push(format!("seam {y:?}"));
        }
    }
    report(
        3,
        "coordinate transform exactness",
        &fails,
        format!("{trips} round trips, {seams} seam pairs"),
        start,
        secs(60),
    );
}

#[test]
fn c04_metric_ratio() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut g = rng(4004);
    let (mut pairs, mut n) = (0, 2usize);
    let (mut lo, mut hi) = (f64::INFINITY, 0f64);
    while pairs < 10_000 {
        let bound = int(10 * (n * n) as i64);
        let a = near_axis(&mut g, n, &q(1, 20 * (n * n) as i64));
        let b = near_axis(&mut g, n, &q(1, 20 * (n * n) as i64));
        let dt = metric_dtilde(&a, &b);
        if !dt.is_zero() {
            let d = metric_d(&from_transformed(&a).unwrap(), &from_transformed(&b).unwrap());
            let ratio = d / dt;
            let f = ppa_reductions::rational::to_f64(&ratio) * (n * n) as f64;
            lo = lo.min(f);
            hi = hi.max(f);
            if ratio < int(1) / &bound || ratio > bound {
                fails.push(format!("n={n} ratio {ratio}"));
            }
            pairs += 1;
        }
        n = if n == 6 { 2 } else { n + 1 };
    }
    let detail = format!("{pairs} pairs, n²·ratio in [{lo:.3}, {hi:.3}]");
    report(4, "metric ratio d/d~", &fails, detail, start, secs(60));
}

#[test]
fn c05_gate_truth_tables() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut rows = 0;
    for a in [false, true] {
        rows += 1;
        if run_gate(GateKind::Not, &[a]) != !a {
            fails.push(format!("NOT {a}"));
        }
        for b in [false, true] {
            rows += 2;
            if run_gate(GateKind::Or, &[a, b]) != (a || b) {
                fails.push(format!("OR {a} {b}"));
            }
            if run_gate(GateKind::And, &[a, b]) != (a && b) {
                fails.push(format!("AND {a} {b}"));
            }
        }
    }
    report(5, "gate gadget truth tables", &fails, format!("{rows} rows, discrepancy 0"), start, secs(1));
}

#[test]
fn c06_output_gate_algebra() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    for gp in [false, true] {
        for gn in [false, true] {
            for x in [false, true] {
                // no colour: (T, F); colour +j: both NOT x; colour -j: both x
                let want = match (gp, gn) {
                    (false, false) => Some((true, false)),
                    (true, false) => Some((!x, !x)),
                    (false, true) => Some((x, x)),
                    (true, true) => None,
                };
                let got = output_gate_transform(gp, gn, x).ok();
                if got != want {
                    fails.push(format!("({gp}, {gn}, {x}): {got:?}"));
                }
                if want.is_some() && output_gate_transform(gn, gp, !x).ok() != got {
                    fails.push(format!("seam ({gp}, {gn}, {x})"));
                }
            }
        }
    }
    report(6, "output gate algebra and seam", &fails, "8 combinations".into(), start, secs(1));
}

/// Single cut giving the comb of `b_{1,2}` the wanted imbalance. The block count is even, so
/// an even imbalance needs the cut in a gap; an odd one puts it inside a block, which is
/// then not counted. `flip` adds a cut at 0 and negates every label.
fn comb_cuts(p: &ReductionParams, imbalance: i64, flip: bool) -> LabelledCutSet {
    let blocks = ce::comb_blocks(1, 2, p);
    let total = blocks.len() as i64;
    let cut = if (total + imbalance) % 2 == 0 {
        let plus = ((total + imbalance) / 2) as usize;
        (&blocks[plus - 1].1 + &blocks[plus].0) / int(2)
    } else {
        let (a, b) = &blocks[((total - 1 + imbalance) / 2) as usize];
        (a + b) / int(2)
    };
    let mut cuts = vec![cut];
    if flip {
        cuts.push(int(0));
    }
    LabelledCutSet::new(cuts)
}

#[test]
fn c07_blanket_threshold_and_mass() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let p = ReductionParams::desk(2);
    let pl = p.p_large as i64;
    for (imb, active) in [(pl - 1, false), (pl, true), (pl + 5, true)] {
        for flip in [false, true] {
            let cuts = comb_cuts(&p, imb, flip);
            let sign = if flip { -1 } else { 1 };
            let got = ce::comb_imbalance(&cuts, 2, 1, &p);
            let st = ce::blanket_active(&cuts, 2, 1, &p);
            let want = match (active, flip) {
                (false, _) => BlanketState::Inactive,
                (true, false) => BlanketState::Active(Label::Plus),
                (true, true) => BlanketState::Active(Label::Minus),
            };
            if got != sign * imb || st != want {
                fails.push(format!("imbalance {imb} flip {flip}: counted {got}, {st:?}"));
            }
        }
    }
    let mut agents = 0;
    for n in [2, 3] {
        let params = ReductionParams::desk(n);
        let inst = NVHDTInstance::random(n, &mut rng(7000 + n as u64));
        match build_reduction(&inst, &params).and_then(|r| check_masses(&r)) {
            Ok(k) => agents += k,
            Err(e) => fails.push(format!("desk n={n}: {e}")),
        }
    }
    let detail = format!("imbalances {}/{}/{}, {agents} agents of mass 1", pl - 1, pl, pl + 5);
    report(7, "blanket threshold and mass", &fails, detail, start, secs(30));
}

fn significant_deviation(x: &SimplexPoint) -> Rational {
    let inv = q(1, x.n() as i64);
    x.coords[1..x.n()].iter().map(|c| (c - &inv).abs()).max().unwrap()
}

#[test]
fn c08_strip_negation_and_consistent_colour() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut g = rng(8008);
    let mut strips = 0;
    for k in 0..1000 {
        let n = 2 + k % 3;
        let params = ReductionParams::desk(n);
        let inst = NVHDTInstance::random(n, &mut g);
        let alphas: Vec<Rational> = (2..=n).map(|_| &params.delta_t * rat_in(&mut g, -1000, 1000, 1000)).collect();
        let p0 = TransformedPoint { tau: int(0), alphas: alphas.clone() };
        let p1 = TransformedPoint { tau: int(1), alphas: alphas.iter().map(|a| -a).collect() };
        strips += 1;
        match (colour_f(&p0, &inst, &params), colour_f(&p1, &inst, &params)) {
            (Ok(c0), Ok(c1)) if c0.neg() == c1 => {}
            other => fails.push(format!("strip {p0:?}: {other:?}")),
        }
    }
    let mut outer = 0;
    let mut k = 0;
    while outer < 1000 {
        let n = 2 + k % 3;
        k += 1;
        let params = ReductionParams::desk(n);
        let dir = near_axis(&mut g, n, &int(1));
        if dir.alphas.iter().all(Zero::is_zero) {
            continue;
        }
        // scale the direction so the significant deviation lands in [δw - δtiny, δw]
        let target = &params.delta_w - &params.delta_tiny * rat_in(&mut g, 0, 1000, 1000);
        let small =
            TransformedPoint { tau: dir.tau.clone(), alphas: dir.alphas.iter().map(|a| a / int(1000)).collect() };
        let Ok(xs) = from_transformed(&small) else { continue };
        let scale = &target / significant_deviation(&xs) / int(1000);
        let p = TransformedPoint { tau: dir.tau.clone(), alphas: dir.alphas.iter().map(|a| a * &scale).collect() };
        let Ok(x) = from_transformed(&p) else { continue };
        outer += 1;
        let cuts = ce::cuts_from_simplex(&x.coords);
        if significant_deviation(&x) != target || consistent_colour(&p, &cuts, &params).is_none() {
            fails.push(format!("n={n} {p:?}"));
        }
    }
    report(
        8,
        "strip negation, consistent colour",
        &fails,
        format!("{strips} strips, {outer} outer points"),
        start,
        secs(120),
    );
}

#[test]
fn c09_power_of_two_thieves() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut g = rng(9009);
    let solver = |i: &NecklaceInstance| brute_force_necklace(i, 24);
    let mut max_cuts = 0;
    for _ in 0..250 {
        let len = 4 * g.gen_range(1..=4usize);
        let ones = 4 * g.gen_range(0..=len / 4);
        let mut beads: Vec<u32> = (0..len).map(|j| if j < ones { 1 } else { 2 }).collect();
        beads.shuffle(&mut g);
        let inst = NecklaceInstance::new(beads, 4, 2).unwrap();
        match solve_power_of_two(&inst, &solver) {
            Ok(s) if s.cut_positions.len() <= 6 && verify_necklace(&inst, &s).unwrap_or(false) => {
                max_cuts = max_cuts.max(s.cut_positions.len());
            }
            other => fails.push(format!("{:?}: {other:?}", inst.beads)),
        }
    }
    report(9, "power-of-two thieves", &fails, format!("250 necklaces, max {max_cuts} cuts"), start, secs(120));
}

#[test]
fn c10_candidate_label_antipodality() {
    let _guard = serial();
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut g = rng(10010);
    let grain = 64u64;
    let mut pairs = 0;
    while pairs < 500 {
        let n = 2 + pairs % 2;
        let sets: Vec<Vec<Vec<Rational>>> = (0..n)
            .map(|_| {
                let size = g.gen_range(1..=6);
                (0..size).map(|_| (0..n).map(|_| int(g.gen_range(-20..=20))).collect()).collect()
            })
            .collect();
        let inst = HamSandwichInstance::new(n, sets).unwrap();
        // gradient on the 1/N lattice of the L1 sphere
        let mut raw = vec![0i64; n];
        for _ in 0..grain {
            raw[g.gen_range(0..n)] += 1;
        }
        for r in raw.iter_mut() {
            if g.gen_bool(0.5) {
                *r = -*r;
            }
        }
        let gr: Vec<Rational> = raw.iter().map(|&v| q(v, grain as i64)).collect();
        let neg: Vec<Rational> = gr.iter().map(|v| -v).collect();
        match (candidate_hyperplane_label(&inst, &gr, grain), candidate_hyperplane_label(&inst, &neg, grain)) {
            (Ok(a), Ok(b)) => {
                pairs += 1;
                if a != -b {
                    fails.push(format!("{gr:?}: {a} vs {b}"));
                }
            }
            (Err(_), Err(_)) => {}
            other => fails.push(format!("{gr:?}: asymmetric {other:?}")),
        }
        if !fails.is_empty() && fails.len() > 20 {
            break;
        }
    }
    report(10, "candidate label antipodality", &fails, format!("{pairs} pairs at N = {grain}"), start, secs(60));
}

#[test]
fn comb_cut_construction_counts_blocks() {
    let p = ReductionParams::desk(2);
    assert_eq!(ce::comb_blocks(1, 2, &p).len(), 800);
    for imb in [-7, 0, 1, 20, 21, 798, 799] {
        let cuts = comb_cuts(&p, imb, false);
        assert_eq!(ce::comb_imbalance(&cuts, 2, 1, &p), imb);
        assert!(cuts.cuts[0].is_positive());
        assert_eq!(ce::comb_imbalance(&comb_cuts(&p, imb, true), 2, 1, &p), -imb);
    }
}
