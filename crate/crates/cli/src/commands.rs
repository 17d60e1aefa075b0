use abelian_core::cycles::{build_constellation, real_interval_to_coefficients, CycleVector, IntervalSystem, VanishingCycleCombo};
use abelian_core::hyperelliptic::{
    check_exth, integral_i, integral_i_derivative, main4_limit_check, reduce_form, OneForm, OvalFamily,
};
use abelian_core::invariant::{decompose_v_delta, nonzero_pairings};
use abelian_core::monodromy::{divisor_lattice, monodromy as compute_monodromy, DivisorLattice, MonodromyRep};
use abelian_core::poly::RatPoly;
use abelian_core::solver::{
    classify as classify_cycle, orthogonal_members, puiseux_vanishes, solve_moment_problem, vanishes_exactly,
    verify_vanishing_numeric, z_delta_basis, FiberSamples,
};
use abelian_core::{Config, Error};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "abelian-cli/1";

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: String) -> Self {
        Failure { code: 2, message }
    }

    pub fn compute(message: String) -> Self {
        Failure { code: 1, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_input_error() { 2 } else { 1 }, message: e.to_string() }
    }
}

pub enum Output {
    Json { command: &'static str, result: Value },
    Svg(String),
}

impl Output {
    pub fn render(self, cfg: &Config) -> String {
        match self {
            Output::Json { command, result } => {
                let doc = json!({ "schema": SCHEMA, "command": command, "config": cfg, "result": result });
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable output");
                s.push('\n');
                s
            }
            Output::Svg(s) => s,
        }
    }
}

type Run = Result<Output, Failure>;

fn parse<T: DeserializeOwned>(input: &[u8]) -> Result<T, Failure> {
    serde_json::from_slice(input).map_err(|e| Failure::input(format!("input does not match the schema: {e}")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn json(command: &'static str, result: Value) -> Run {
    Ok(Output::Json { command, result })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyInput {
    polynomial: RatPoly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CycleInput {
    polynomial: RatPoly,
    cycle: CycleVector,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveInput {
    polynomial: RatPoly,
    #[serde(default)]
    cycle: Option<CycleVector>,
    #[serde(default)]
    intervals: Option<IntervalSystem>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryInput {
    polynomial: RatPoly,
    cycle: CycleVector,
    q: RatPoly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentInput {
    polynomial: RatPoly,
    intervals: IntervalSystem,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HyperInput {
    family: OvalFamily,
    #[serde(default)]
    k: Option<RatPoly>,
    #[serde(default)]
    omega: Option<OneForm>,
    #[serde(default)]
    ts: Option<Vec<f64>>,
    #[serde(default)]
    count: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Main4Input {
    f: RatPoly,
    k: RatPoly,
    center: f64,
    combo: VanishingCycleCombo,
    z_samples: Vec<f64>,
}

fn setup(p: &RatPoly, cfg: &Config) -> Result<(MonodromyRep, DivisorLattice), Failure> {
    if p.deg().is_none_or(|d| d < 2) {
        return Err(Failure::input("the polynomial must have degree at least 2".into()));
    }
    let rep = compute_monodromy(p, cfg)?;
    let lattice = divisor_lattice(&rep, p)?;
    Ok((rep, lattice))
}

fn check_cycle(v: &CycleVector, p: &RatPoly) -> Result<(), Failure> {
    if Some(v.len()) != p.deg() {
        return Err(Failure::input(format!("cycle has {} entries, polynomial has degree {:?}", v.len(), p.deg())));
    }
    Ok(())
}

/// max_j |Σ v_i Q(x_i(z_j)) - Σ v_i Q(x_i(z_0))|: zero iff the integral is constant on the samples.
fn spread(samples: &FiberSamples, v: &CycleVector, q: &RatPoly) -> f64 {
    let values: Vec<(f64, f64)> = samples
        .fibers
        .iter()
        .map(|fiber| {
            fiber.iter().zip(v.entries()).fold((0.0, 0.0), |(re, im), (x, vi)| {
                let y = q.eval_complex(x);
                let w = vi.to_f64();
                (re + y.real().to_f64() * w, im + y.imag().to_f64() * w)
            })
        })
        .collect();
    let first = values.first().copied().unwrap_or_default();
    values.iter().map(|c| (c.0 - first.0).hypot(c.1 - first.1)).fold(0.0, f64::max)
}

pub fn monodromy(input: &[u8], cfg: &Config) -> Run {
    let PolyInput { polynomial } = parse(input)?;
    let (rep, _) = setup(&polynomial, cfg)?;
    let mut out = to_value(&rep.to_json());
    out["group_order"] = json!(rep.group_order()?.to_string());
    json("monodromy", out)
}

pub fn lattice(input: &[u8], cfg: &Config) -> Run {
    let PolyInput { polynomial } = parse(input)?;
    let (_, lattice) = setup(&polynomial, cfg)?;
    let mut out = to_value(&lattice);
    out["psi"] = to_value(&lattice.psi_table());
    json("lattice", out)
}

pub fn analyze_cycle(input: &[u8], cfg: &Config) -> Run {
    let CycleInput { polynomial, cycle } = parse(input)?;
    check_cycle(&cycle, &polynomial)?;
    let (_, lattice) = setup(&polynomial, cfg)?;
    json(
        "analyze-cycle",
        json!({
            "reduced": cycle.is_reduced(),
            "nonzero_pairings": nonzero_pairings(cycle.entries())?,
            "decomposition": decompose_v_delta(cycle.entries(), &lattice)?,
            "orthogonal_members": orthogonal_members(&cycle, &lattice)?,
        }),
    )
}

pub fn solve(input: &[u8], cfg: &Config) -> Run {
    let SolveInput { polynomial, cycle, intervals } = parse(input)?;
    let (rep, lattice) = setup(&polynomial, cfg)?;
    let n = polynomial.deg().expect("checked");
    let bound = cfg.bound_for(n);
    let samples = FiberSamples::new(&rep, cfg)?;
    match (cycle, intervals) {
        (Some(v), None) => {
            check_cycle(&v, &polynomial)?;
            let basis = z_delta_basis(&v, &lattice, bound)?;
            let residuals: Vec<f64> =
                basis.elements.iter().map(|e| samples.residual(&v, &e.poly)).collect::<Result<_, _>>()?;
            let mut out = json!({ "cycle": v, "basis": basis, "residuals": residuals });
            if v.is_zero() {
                out["notice"] = json!("zero cycle: every polynomial vanishes");
            }
            json("solve", out)
        }
        (None, Some(system)) => {
            let sol = solve_moment_problem(&polynomial, &system, bound, &rep, &lattice, cfg)?;
            let residuals: Vec<f64> = sol
                .basis
                .elements
                .iter()
                .map(|e| sol.cycles.iter().map(|lc| spread(&samples, &lc.cycle, &e.poly)).fold(0.0, f64::max))
                .collect();
            json("solve", json!({ "cycles": sol.cycles, "basis": sol.basis, "residuals": residuals }))
        }
        _ => Err(Failure::input("give exactly one of `cycle` and `intervals`".into())),
    }
}

pub fn classify(input: &[u8], cfg: &Config) -> Run {
    let QueryInput { polynomial, cycle, q } = parse(input)?;
    check_cycle(&cycle, &polynomial)?;
    let (_, lattice) = setup(&polynomial, cfg)?;
    json("classify", to_value(&classify_cycle(&cycle, &q, &lattice)?))
}

pub fn verify(input: &[u8], cfg: &Config) -> Run {
    let QueryInput { polynomial, cycle, q } = parse(input)?;
    check_cycle(&cycle, &polynomial)?;
    let (rep, lattice) = setup(&polynomial, cfg)?;
    json(
        "verify",
        json!({
            "exact": vanishes_exactly(&cycle, &lattice, &q)?,
            "puiseux": puiseux_vanishes(&polynomial, &cycle, &q)?,
            "oracle": verify_vanishing_numeric(&cycle, &q, &rep, cfg)?,
        }),
    )
}

pub fn moment_problem(input: &[u8], cfg: &Config) -> Run {
    let MomentInput { polynomial, intervals } = parse(input)?;
    let (rep, lattice) = setup(&polynomial, cfg)?;
    let bound = cfg.bound_for(polynomial.deg().expect("checked"));
    let cycles = real_interval_to_coefficients(&polynomial, &intervals, &rep, cfg)?;
    let sol = solve_moment_problem(&polynomial, &intervals, bound, &rep, &lattice, cfg)?;
    json("moment-problem", json!({ "cycles": cycles, "basis": sol.basis }))
}

fn form_k(h: &HyperInput) -> Result<(RatPoly, Option<Value>), Failure> {
    match (&h.k, &h.omega) {
        (Some(k), None) => Ok((k.clone(), None)),
        (None, Some(omega)) => {
            let reduced = reduce_form(omega, &h.family.f)?;
            Ok((reduced.k.clone(), Some(to_value(&reduced))))
        }
        _ => Err(Failure::input("give exactly one of `k` and `omega`".into())),
    }
}

pub fn hyper_check(input: &[u8], cfg: &Config) -> Run {
    let h: HyperInput = parse(input)?;
    h.family.validate()?;
    let (k, reduced) = form_k(&h)?;
    let report = check_exth(&h.family, &k, cfg)?;
    json("hyper-check", json!({ "reduced_form": reduced, "report": report }))
}

pub fn hyper_integrate(input: &[u8], _cfg: &Config) -> Run {
    let h: HyperInput = parse(input)?;
    h.family.validate()?;
    let (k, reduced) = form_k(&h)?;
    let ts = match (&h.ts, h.count) {
        (Some(ts), None) => ts.clone(),
        (None, count) => h.family.sample_ts(count.unwrap_or(8)),
        _ => return Err(Failure::input("give at most one of `ts` and `count`".into())),
    };
    let values: Vec<Value> = ts
        .iter()
        .map(|&t| -> Result<Value, Failure> {
            Ok(json!({
                "t": t,
                "integral": integral_i(&h.family, &k, t)?,
                "derivative": integral_i_derivative(&h.family, &k, t)?,
            }))
        })
        .collect::<Result<_, _>>()?;
    json("hyper-integrate", json!({ "k": k, "reduced_form": reduced, "values": values }))
}

pub fn main4_check(input: &[u8], cfg: &Config) -> Run {
    let m: Main4Input = parse(input)?;
    let report = main4_limit_check(&m.f, &m.k, m.center, &m.combo, &m.z_samples, cfg)?;
    json("main4-check", to_value(&report))
}

pub fn plot_constellation(input: &[u8], cfg: &Config) -> Run {
    let PolyInput { polynomial } = parse(input)?;
    let (rep, _) = setup(&polynomial, cfg)?;
    let constellation = build_constellation(&rep, cfg)?;
    Ok(Output::Svg(crate::svg::render(&constellation)))
}
