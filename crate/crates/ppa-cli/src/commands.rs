use std::fs;
use std::path::Path;

use ppa_reductions::ce;
use ppa_reductions::gadgets::{self, reduction::check_masses, Reduction as ChReduction};
use ppa_reductions::instances::{
    HamSandwichInstance, NVHDTInstance, NecklaceInstance, NecklaceSplit, TuckerGrid2D, TuckerGridND,
};
use ppa_reductions::measure::{CHInstance, LabelledCutSet};
use ppa_reductions::mobius::{self, SimplexPoint};
use ppa_reductions::oracles::{self, HamBounds, HamSandwichSolution, NECKLACE_BEAD_BOUND, TUCKER_CELL_BOUND};
use ppa_reductions::params::ReductionParams;
use ppa_reductions::rational::{self, q, Rational};
use ppa_reductions::{sandwich, snake, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{
    Cli, GenArgs, ParamsArgs, Preset, ReduceArgs, Reduction, RoundtripArgs, SolveArgs, Subject, Suite, Verb, VerifyArgs,
};

pub struct Outcome {
    pub ok: bool,
    pub report: Value,
}

pub struct Failure {
    pub code: i32,
    pub message: String,
}

type Res<T> = std::result::Result<T, Failure>;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotFound(_) | Error::Upstream(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

fn pass(report: Value) -> Res<Outcome> {
    Ok(Outcome { ok: true, report })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure { code: 3, message: format!("{}: {e}", path.display()) })?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Writes `v` to `out` and returns the path, or returns `v` itself when there is no path.
fn emit<T: Serialize>(out: Option<&Path>, v: &T) -> Res<Value> {
    match out {
        None => Ok(to_value(v)),
        Some(p) => {
            let text = serde_json::to_string_pretty(v).map_err(|e| malformed(e.to_string()))?;
            fs::write(p, text + "\n").map_err(|e| Failure { code: 3, message: format!("{}: {e}", p.display()) })?;
            Ok(json!({ "written": p.display().to_string() }))
        }
    }
}

fn need<'a>(p: &'a Option<std::path::PathBuf>, flag: &str) -> Res<&'a Path> {
    p.as_deref().ok_or_else(|| malformed(format!("missing --{flag}")))
}

fn params_for(cli: &Cli, preset: Preset, n: usize) -> Res<ReductionParams> {
    let p = match &cli.params {
        Some(path) => read_json(path)?,
        None => match preset {
            Preset::Desk => ReductionParams::desk(n),
            Preset::Coarse => ReductionParams::coarse(n),
        },
    };
    p.validate()?;
    Ok(p)
}

#[derive(Serialize, Deserialize)]
struct Points {
    #[serde(with = "rational::rat_vec_vec")]
    points: Vec<Vec<Rational>>,
}

pub fn run(cli: &Cli) -> Res<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.verb {
        Verb::Gen(a) => gen(cli, a, &mut rng),
        Verb::Reduce(a) => reduce(cli, a),
        Verb::Verify(a) => verify(a),
        Verb::Solve(a) => solve(a),
        Verb::Roundtrip(a) => roundtrip(cli, a, &mut rng),
        Verb::ParamsCheck(a) => params_check(cli, a),
    }
}

fn gen(cli: &Cli, a: &GenArgs, rng: &mut ChaCha8Rng) -> Res<Outcome> {
    let out = a.out.as_deref();
    let report = match a.subject {
        Subject::Tucker2d => emit(out, &TuckerGrid2D::random(a.m, rng))?,
        Subject::Tuckernd => emit(out, &TuckerGridND::from_2d(&TuckerGrid2D::random(a.m, rng)))?,
        Subject::Nvhdt => emit(out, &NVHDTInstance::random(a.n, rng))?,
        Subject::Ch => {
            let p = params_for(cli, a.preset, a.n)?;
            let inst = NVHDTInstance::random(p.n, rng);
            emit(out, &gadgets::build_reduction(&inst, &p)?.instance()?)?
        }
        Subject::Necklace => {
            if a.colours == 0 || a.thieves < 2 {
                return Err(malformed("need at least one colour and two thieves"));
            }
            let k = a.thieves as usize;
            let per = (a.beads / (k * a.colours as usize)).max(1);
            let mut beads: Vec<u32> = (1..=a.colours).flat_map(|c| std::iter::repeat_n(c, per * k)).collect();
            for i in (1..beads.len()).rev() {
                beads.swap(i, rng.gen_range(0..=i));
            }
            emit(out, &NecklaceInstance::new(beads, a.thieves, a.colours)?)?
        }
        Subject::Sandwich => {
            let inst = NecklaceInstance::new(random_necklace(rng, a.beads, a.colours), 2, a.colours)?;
            emit(out, &sandwich::necklace_to_sandwich(&inst)?.0)?
        }
    };
    pass(report)
}

/// Two-thief necklace with every colour count even.
fn random_necklace(rng: &mut ChaCha8Rng, beads: usize, colours: u32) -> Vec<u32> {
    let mut v: Vec<u32> = (0..beads.max(2) / 2).map(|_| rng.gen_range(1..=colours.max(1))).collect();
    v.extend(v.clone());
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    v
}

fn reduce(cli: &Cli, a: &ReduceArgs) -> Res<Outcome> {
    let out = a.out.as_deref();
    match a.reduction {
        Reduction::NsToDhs => {
            let inst: NecklaceInstance = read_json(&a.input)?;
            let (dhs, emb) = sandwich::necklace_to_sandwich(&inst)?;
            let emb_report = emit(a.embedding.as_deref(), &emb)?;
            pass(json!({ "instance": emit(out, &dhs)?, "embedding": emb_report }))
        }
        Reduction::DhsToNs => {
            let sol: HamSandwichSolution = read_json(&a.input)?;
            let emb = read_json(need(&a.embedding, "embedding")?)?;
            let split = sandwich::sandwich_to_necklace_solution(&emb, &sol.hyperplane, &sol.on_plane)?;
            pass(json!({ "split": emit(out, &split)? }))
        }
        Reduction::Tucker2dToNvhdt => {
            let g: TuckerGrid2D = read_json(&a.input)?;
            let (inst, e) = snake::embed_to_cubelets(&g)?;
            let trace = emit(a.embedding.as_deref(), &e)?;
            pass(json!({ "instance": emit(out, &inst)?, "embedding": trace, "folds": e.trace.folds() }))
        }
        Reduction::NvhdtToCh => {
            let inst: NVHDTInstance = read_json(&a.input)?;
            let p = params_for(cli, a.preset, inst.n)?;
            let red = gadgets::build_reduction(&inst, &p)?;
            let summary = json!({
                "agents": red.num_agents(),
                "slots_per_encoder": red.slots_per_encoder(),
                "domain_length": rational::to_string(&red.domain_length()),
            });
            let written = if a.materialise { emit(out, &red.instance()?)? } else { emit(out, &red)? };
            pass(json!({ "summary": summary, "output": written }))
        }
        Reduction::ChToNvhdt => {
            let inst: NVHDTInstance = read_json(&a.input)?;
            let red: ChReduction = read_json(need(&a.reduction_file, "reduction-file")?)?;
            let cuts: LabelledCutSet = read_json(need(&a.cuts, "cuts")?)?;
            let ext = gadgets::extract_solution(&inst, &red, &cuts)?;
            pass(json!({ "extraction": emit(out, &ext)? }))
        }
    }
}

fn verify(a: &VerifyArgs) -> Res<Outcome> {
    let sol = || a.solution.as_deref().or(a.cuts.as_deref()).ok_or_else(|| malformed("missing --solution"));
    let (ok, report) = match a.subject {
        Subject::Ch => {
            let inst: CHInstance = read_json(&a.inst)?;
            let cuts: LabelledCutSet = read_json(sol()?)?;
            let rep = oracles::eval_ch(&inst, &cuts)?;
            (rep.is_epsilon_solution, to_value(&rep))
        }
        Subject::Necklace => {
            let inst: NecklaceInstance = read_json(&a.inst)?;
            let split: NecklaceSplit = read_json(sol()?)?;
            let ok = oracles::verify_necklace(&inst, &split)?;
            (ok, json!({ "valid": ok, "cuts": split.cut_positions.len(), "max_cuts": inst.max_cuts() }))
        }
        Subject::Sandwich => {
            let inst: HamSandwichInstance = read_json(&a.inst)?;
            let s: HamSandwichSolution = read_json(sol()?)?;
            let ok = oracles::verify_ham_sandwich(&inst, &s.hyperplane, &s.on_plane)?;
            (ok, json!({ "valid": ok }))
        }
        Subject::Tucker2d => {
            let inst: TuckerGrid2D = read_json(&a.inst)?;
            let (p, q) = (pair(&a.p)?, pair(&a.q)?);
            let ok = oracles::verify_tucker2d(&inst, p, q)?;
            (ok, json!({ "valid": ok }))
        }
        Subject::Tuckernd => {
            let inst: TuckerGridND = read_json(&a.inst)?;
            let ok = oracles::verify_tucker_nd(&inst, &a.p, &a.q)?;
            (ok, json!({ "valid": ok }))
        }
        Subject::Nvhdt => {
            let inst: NVHDTInstance = read_json(&a.inst)?;
            let pts: Points = read_json(sol()?)?;
            let ok = oracles::verify_nvhdt(&inst, &pts.points, pts.points.len())?;
            (ok, json!({ "valid": ok }))
        }
    };
    Ok(Outcome { ok, report })
}

fn pair(v: &[usize]) -> Res<(usize, usize)> {
    match v {
        [x, y] => Ok((*x, *y)),
        _ => Err(malformed(format!("expected two coordinates, got {}", v.len()))),
    }
}

fn two_thief(inst: &NecklaceInstance) -> ppa_reductions::Result<Option<NecklaceSplit>> {
    oracles::brute_force_necklace(inst, NECKLACE_BEAD_BOUND)
}

fn solve(a: &SolveArgs) -> Res<Outcome> {
    let out = a.out.as_deref();
    match a.subject {
        Subject::Necklace => {
            let inst: NecklaceInstance = read_json(&a.inst)?;
            let split = if inst.thieves == 2 {
                two_thief(&inst)?
            } else {
                Some(sandwich::solve_power_of_two(&inst, &two_thief)?)
            };
            match split {
                Some(s) => pass(json!({ "cuts": s.cut_positions.len(), "split": emit(out, &s)? })),
                None => Ok(Outcome { ok: false, report: json!({ "split": null }) }),
            }
        }
        Subject::Sandwich => {
            let inst: HamSandwichInstance = read_json(&a.inst)?;
            let s = oracles::brute_force_ham_sandwich(&inst, HamBounds::default())?;
            pass(json!({ "solution": emit(out, &s)? }))
        }
        Subject::Tucker2d => {
            let inst: TuckerGrid2D = read_json(&a.inst)?;
            let (p, q) = oracles::brute_force_tucker2d(&inst)?;
            pass(json!({ "p": [p.0, p.1], "q": [q.0, q.1] }))
        }
        Subject::Tuckernd => {
            let inst: TuckerGridND = read_json(&a.inst)?;
            let (p, q) = oracles::brute_force_tucker_nd(&inst, TUCKER_CELL_BOUND)?;
            pass(json!({ "p": p, "q": q }))
        }
        Subject::Nvhdt | Subject::Ch => Err(malformed("no brute-force solver for this subject")),
    }
}

fn roundtrip(cli: &Cli, a: &RoundtripArgs, rng: &mut ChaCha8Rng) -> Res<Outcome> {
    let (ok, mut report) = match a.suite {
        Suite::NsDhs => {
            let inst: NecklaceInstance = read_json(need(&a.input, "in")?)?;
            let (dhs, emb) = sandwich::necklace_to_sandwich(&inst)?;
            let s = oracles::brute_force_ham_sandwich(&dhs, HamBounds::default())?;
            let split = sandwich::sandwich_to_necklace_solution(&emb, &s.hyperplane, &s.on_plane)?;
            let ok = oracles::verify_necklace(&inst, &split)? && split.cut_positions.len() <= inst.colours as usize;
            (ok, json!({ "cuts": split.cut_positions.len() }))
        }
        Suite::Snake => {
            let g: TuckerGrid2D = match &a.input {
                Some(p) => read_json(p)?,
                None => TuckerGrid2D::random(a.m, rng),
            };
            let e = snake::compose_folds(&g)?;
            e.grid.check_bounded_facets()?;
            let pairs = oracles::complementary_pairs(&e.grid, TUCKER_CELL_BOUND, false)?;
            let mut back = 0usize;
            for (p, q) in &pairs {
                // pairs inside fold padding have no preimage
                match snake::pull_back_solution(&e.trace, &g, p, q) {
                    Ok(_) => back += 1,
                    Err(Error::Invalid(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            (back > 0, json!({ "pairs": pairs.len(), "pulled_back": back, "dims": e.grid.dims }))
        }
        Suite::Mobius => {
            let mut bad = 0usize;
            for _ in 0..a.count {
                let w: Vec<i64> = (0..=a.n).map(|_| rng.gen_range(1..=1000)).collect();
                let s: i64 = w.iter().sum();
                let x = SimplexPoint::new(w.iter().map(|&v| q(v, s)).collect())?;
                let t = mobius::to_transformed(&x)?;
                if mobius::from_transformed(&t.point)? != x {
                    bad += 1;
                }
            }
            (bad == 0, json!({ "points": a.count, "mismatches": bad }))
        }
        Suite::NvhdtCh => {
            let inst: NVHDTInstance = match &a.input {
                Some(p) => read_json(p)?,
                None => NVHDTInstance::random(a.n, rng),
            };
            let p = params_for(cli, a.preset, inst.n)?;
            let red = gadgets::build_reduction(&inst, &p)?;
            check_masses(&red)?;
            let w: Vec<i64> = (0..=inst.n).map(|_| rng.gen_range(1..=100)).collect();
            let s: i64 = w.iter().sum();
            let x: Vec<Rational> = w.iter().map(|&v| q(v, s)).collect();
            let cuts = gadgets::simulate(&red, &ce::cuts_from_simplex(&x).cuts)?;
            let mut unbalanced = 0u64;
            for idx in inst.n as u64..red.num_agents() {
                if cuts.discrepancy(&red.agent(idx)?) != rational::zero() {
                    unbalanced += 1;
                }
            }
            (unbalanced == 0, json!({ "agents": red.num_agents(), "unbalanced": unbalanced }))
        }
    };
    report["roundtrip"] = json!(if ok { "pass" } else { "fail" });
    Ok(Outcome { ok, report })
}

fn params_check(cli: &Cli, a: &ParamsArgs) -> Res<Outcome> {
    let p = params_for(cli, a.preset, a.n)?;
    let s = |r: &Rational| rational::to_string(r);
    pass(json!({
        "valid": true,
        "params": to_value(&p),
        "p_huge": p.p_huge(),
        "epsilon": s(&p.epsilon()),
        "kappa": s(&p.kappa()),
        "comb_block_mass": s(&ce::comb_block_mass(&p)),
    }))
}
