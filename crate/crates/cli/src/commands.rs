//! One function per subcommand. Each returns an [`Outcome`]; verification failures are failing
//! checks inside the report, while errors are reserved for bad input and computations that
//! could not finish.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;
use wilfpoly::arith::{bernoulli_number, is_prime_u64};
use wilfpoly::circulant::{
    build_granville, det_granville_mod_q, det_numeric, eigen_check_mod_q, granville_sign,
    verify_identities, DET_NUMERIC_MAX_P,
};
use wilfpoly::dedekind::{
    check_all_congruences, check_periodicity, compute_v, dedekind_sum, scaled_sum, scaled_sums,
    CongruenceReport, DedekindParams,
};
use wilfpoly::numeric::{
    check_sign_case, l_numeric, wilf_numeric, FixedComplex, PrecisionConfig, SignCase,
};
use wilfpoly::period::{crt_prime_candidates, PeriodContext, DEFAULT_PRIME_FLOOR};
use wilfpoly::wieferich::{
    is_wieferich_pair, reproduce_table, scan_wieferich, splits_linearly_mod_q, valuation,
    TableAgreement, DEFAULT_ROWS, STRETCH_ROWS, VALUATION_TABLE,
};
use wilfpoly::{Error, IntPolynomial};

use crate::args::{Cli, Command, Method};
use crate::cache::{cache_load, cache_store, CacheError, PolynomialCacheFile};
use crate::report::{Check, Outcome, RunReport};
use crate::{EXIT_COMPUTATION, EXIT_USAGE, EXIT_VERIFICATION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Cache(_) => EXIT_COMPUTATION,
            CliError::Core(e) => match e {
                Error::TheoremViolation(_) => EXIT_VERIFICATION,
                Error::RoundingFailure { .. }
                | Error::UnsupportedScale(_)
                | Error::NotIntegral { .. }
                | Error::DegenerateReduction(_)
                | Error::ZeroConstant(_) => EXIT_COMPUTATION,
                _ => EXIT_USAGE,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Settings shared by every subcommand.
struct Ctx<'a> {
    cache_dir: Option<&'a Path>,
    precision: PrecisionConfig,
    seed: u64,
    timings: Option<BTreeMap<String, f64>>,
}

impl Ctx<'_> {
    fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if let Some(t) = self.timings.as_mut() {
            t.insert(phase.to_string(), start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }
}

/// Executes the parsed command line.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // build_global errors if a global pool already exists; the existing one is kept
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let precision = match cli.precision_bits {
        Some(b) => PrecisionConfig::with_bits(b)?,
        None => PrecisionConfig::default(),
    };
    let mut ctx = Ctx {
        cache_dir: cli.cache_dir.as_deref(),
        precision,
        seed: cli.seed,
        timings: cli.timings.then(BTreeMap::new),
    };
    let mut outcome = match &cli.command {
        Command::Bernoulli { n } => bernoulli(*n),
        Command::Dedekind { r, h, k } => dedekind(*r, *h, *k),
        Command::ScaledSum { p, h } => scaled(*p, *h),
        Command::CheckCongruences { p } => congruences(*p, &mut ctx),
        Command::ComputeL {
            p,
            method,
            constant_only,
        } => compute_l(*p, *method, *constant_only, &mut ctx),
        Command::ComputeW { r, k } => compute_w(*r, *k, &mut ctx),
        Command::CheckTheorem1 { p } => sign_case(*p, &mut ctx),
        Command::Granville {
            p,
            verify_identity,
            verify_eigen,
            verify_det,
        } => granville(*p, *verify_identity, *verify_eigen, *verify_det, &mut ctx),
        Command::Wieferich { p, q, scan, qmax } => wieferich(*p, *q, *scan, *qmax),
        Command::Splitting { p, q } => splitting(*p, *q, &mut ctx),
        Command::Valuation { p, q } => valuation_cmd(*p, *q, &mut ctx),
        Command::Table { rows, stretch } => table(rows.as_deref(), *stretch, &mut ctx),
    }?;
    outcome.report.timings_ms = ctx.timings;
    Ok(outcome)
}

fn params<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn coeff_strings(poly: &IntPolynomial) -> Vec<String> {
    poly.coeffs().iter().map(|c| c.to_string()).collect()
}

fn outcome(
    command: &str,
    parameters: BTreeMap<String, Value>,
    result: Value,
    checks: Vec<Check>,
    lines: Vec<String>,
) -> CliResult<Outcome> {
    Ok(Outcome {
        report: RunReport::new(command, parameters, result, checks),
        lines,
    })
}

fn bernoulli(n: usize) -> CliResult<Outcome> {
    let b = bernoulli_number(n);
    outcome(
        "bernoulli",
        params([("n", json!(n))]),
        json!({
            "value": b.to_string(),
            "numerator": b.numer().to_string(),
            "denominator": b.denom().to_string(),
        }),
        vec![],
        vec![b.to_string()],
    )
}

fn dedekind(r: u64, h: i64, k: u64) -> CliResult<Outcome> {
    let s = dedekind_sum(DedekindParams::new(r, h, k)?)?;
    outcome(
        "dedekind",
        params([("r", json!(r)), ("h", json!(h)), ("k", json!(k))]),
        json!({ "value": s.to_string() }),
        vec![],
        vec![s.to_string()],
    )
}

fn scaled(p: u64, h: Option<i64>) -> CliResult<Outcome> {
    let values: Vec<(i64, BigInt)> = match h {
        Some(h) => vec![(h, scaled_sum(p, h)?)],
        None => scaled_sums(p)?
            .into_iter()
            .enumerate()
            .map(|(i, s)| (i as i64 + 1, s))
            .collect(),
    };
    let lines = match h {
        Some(_) => vec![values[0].1.to_string()],
        None => values
            .iter()
            .map(|(h, s)| format!("h = {h}: {s}"))
            .collect(),
    };
    outcome(
        "scaled-sum",
        params([("p", json!(p)), ("h", json!(h))]),
        json!({
            "values": values
                .iter()
                .map(|(h, s)| json!({ "h": h, "value": s.to_string() }))
                .collect::<Vec<_>>()
        }),
        vec![],
        lines,
    )
}

fn congruence_check(name: &str, r: &CongruenceReport) -> Check {
    let bad: Vec<u64> = r.records.iter().filter(|x| !x.holds).map(|x| x.h).collect();
    let detail = if bad.is_empty() {
        format!("all {} values of h, modulo {}", r.records.len(), r.modulus)
    } else {
        format!("fails for h in {bad:?}, modulo {}", r.modulus)
    };
    Check::new(name, r.pass).with_detail(detail)
}

fn congruences(p: u64, ctx: &mut Ctx) -> CliResult<Outcome> {
    let [power, parity, recip] = ctx.timed("congruences", || check_all_congruences(p))?;
    let periodicity = ctx.timed("periodicity", || check_periodicity(p, None))?;
    let u = power.u.clone().expect("power-law report carries u");
    let v = compute_v(p)?;
    let records: Vec<Value> = (0..power.records.len())
        .map(|i| {
            json!({
                "h": power.records[i].h,
                "scaled_sum": power.records[i].scaled_sum.to_string(),
                "mod_p2": power.records[i].observed,
                "u_h_p": power.records[i].predicted,
                "parity": parity.records[i].observed,
                "h_inverse": recip.records[i].h_inverse,
                "reciprocity_rhs": recip.records[i].predicted,
            })
        })
        .collect();
    let checks = vec![
        congruence_check("power law p^2 s = u h^p (mod p^2)", &power),
        congruence_check("parity p^2 s = (p^2-1)/8 (mod 2)", &parity),
        congruence_check("reciprocity congruence (mod p^2)", &recip),
        Check::new("periodicity f(H + bp) = f(H) (mod p^2)", periodicity.pass()).with_detail(
            format!(
                "{} probes with a = {}, {} failures",
                periodicity.probes,
                periodicity.a,
                periodicity.failures.len()
            ),
        ),
    ];
    let lines = vec![format!(
        "u = {}, v = {} (mod {})",
        u.value(),
        v.value(),
        p * p
    )];
    outcome(
        "check-congruences",
        params([("p", json!(p))]),
        json!({
            "u": u.value().to_string(),
            "v": v.value().to_string(),
            "modulus": p * p,
            "records": records,
            "periodicity": {
                "a": periodicity.a,
                "probes": periodicity.probes,
                "failures": periodicity.failures,
            },
        }),
        checks,
        lines,
    )
}

/// `L(p,x)` from the cache when a verified entry with the requested method exists, otherwise
/// computed and (with a cache directory) stored.
fn obtain_l(p: u64, method: Method, ctx: &mut Ctx) -> CliResult<IntPolynomial> {
    if let Some(dir) = ctx.cache_dir {
        match cache_load(dir, p, ctx.seed) {
            Ok(Some((file, poly))) if file.method == method.tag() => {
                eprintln!("note: using verified cache entry for p = {p}");
                return Ok(poly);
            }
            Ok(_) => {}
            Err(e @ CacheError::CacheCorrupt { .. }) => {
                eprintln!("warning: {e}; recomputing");
            }
            Err(e) => return Err(e.into()),
        }
    }
    let pctx = PeriodContext::new(p)?;
    let (poly, primes) = match method {
        Method::Crt => {
            let poly = ctx.timed("compute", || pctx.l_exact());
            (poly, pctx.primes().iter().map(|c| c.q).collect())
        }
        Method::Numeric => {
            let cfg = ctx.precision;
            let r = ctx.timed("compute", || l_numeric(p, &cfg))?;
            (r.poly, Vec::new())
        }
    };
    if let Some(dir) = ctx.cache_dir {
        let file = PolynomialCacheFile::new(p, &poly, method.tag(), primes, pctx.primitive_root());
        cache_store(dir, &file)?;
    }
    Ok(poly)
}

fn obtain_constant(p: u64, ctx: &mut Ctx) -> CliResult<BigInt> {
    if let Some(dir) = ctx.cache_dir {
        match cache_load(dir, p, ctx.seed) {
            Ok(Some((_, poly))) => return Ok(poly.coeff(0)),
            Ok(None) => {}
            Err(e @ CacheError::CacheCorrupt { .. }) => eprintln!("warning: {e}; recomputing"),
            Err(e) => return Err(e.into()),
        }
    }
    let pctx = PeriodContext::new(p)?;
    Ok(ctx.timed("constant", || pctx.constant_term()))
}

/// Structural checks plus an independent reduction modulo a prime not used in the computation.
fn l_checks(p: u64, poly: &IntPolynomial, seed: u64) -> CliResult<Vec<Check>> {
    let pctx = PeriodContext::new(p)?;
    let fresh = pctx.fresh_primes((seed % 4) as usize, 1).remove(0);
    Ok(vec![
        Check::new(
            "monic of degree p",
            poly.is_monic() && poly.degree() == Some(p as usize),
        ),
        Check::new(
            "coefficient of x^(p-1) is 0",
            poly.coeff(p as usize - 1) == BigInt::from(0),
        ),
        Check::new("fresh-prime verification", pctx.verify_mod(poly, &fresh))
            .with_detail(format!("q = {}", fresh.q)),
    ])
}

fn compute_l(p: u64, method: Method, constant_only: bool, ctx: &mut Ctx) -> CliResult<Outcome> {
    let parameters = params([
        ("p", json!(p)),
        ("method", json!(method.tag())),
        ("constant_only", json!(constant_only)),
    ]);
    if constant_only {
        let c = match method {
            Method::Crt => obtain_constant(p, ctx)?,
            Method::Numeric => obtain_l(p, method, ctx)?.coeff(0),
        };
        return outcome(
            "compute-L",
            parameters,
            json!({ "p": p, "constant_term": c.to_string() }),
            vec![],
            vec![c.to_string()],
        );
    }
    let poly = obtain_l(p, method, ctx)?;
    let seed = ctx.seed;
    let checks = ctx.timed("verify", || l_checks(p, &poly, seed))?;
    outcome(
        "compute-L",
        parameters,
        json!({
            "p": p,
            "variable": "x",
            "coefficients": coeff_strings(&poly),
        }),
        checks,
        vec![poly.to_string()],
    )
}

fn compute_w(r: u64, k: u64, ctx: &mut Ctx) -> CliResult<Outcome> {
    let cfg = ctx.precision;
    let w = ctx.timed("compute", || wilf_numeric(r, k, &cfg))?;
    outcome(
        "compute-W",
        params([("r", json!(r)), ("k", json!(k))]),
        json!({
            "variable": "x",
            "coefficients": coeff_strings(&w.poly),
            "max_deviation": w.max_deviation,
            "max_imag": w.max_imag,
            "bits": w.bits,
        }),
        vec![Check::new("rounded within tolerance", true)
            .with_detail(format!("max deviation {:.3e}", w.max_deviation))],
        vec![w.poly.to_string()],
    )
}

fn sign_case(p: u64, ctx: &mut Ctx) -> CliResult<Outcome> {
    let cfg = ctx.precision;
    let expected = SignCase::expected(p);
    let parameters = params([("p", json!(p))]);
    match ctx.timed("compute", || check_sign_case(p, &cfg)) {
        Ok(c) => {
            let pass = c.case == expected;
            outcome(
                "check-theorem1",
                parameters,
                json!({
                    "case": c.case.name(),
                    "expected": expected.name(),
                    "max_deviation": c.wilf.max_deviation,
                    "bits": c.wilf.bits,
                    "wilf_coefficients": coeff_strings(&c.wilf.poly),
                    "period_coefficients": coeff_strings(&c.period),
                }),
                vec![
                    Check::new("sign case agrees with p mod 8", pass).with_detail(format!(
                        "p = {} (mod 8), expected {}",
                        p % 8,
                        expected.name()
                    )),
                ],
                vec![c.case.name().to_string()],
            )
        }
        Err(Error::TheoremViolation(msg)) => outcome(
            "check-theorem1",
            parameters,
            json!({ "case": null, "expected": expected.name() }),
            vec![Check::new("sign case agrees with p mod 8", false).with_detail(msg)],
            vec!["no sign case".into()],
        ),
        Err(e) => Err(e.into()),
    }
}

fn granville(p: u64, identity: bool, eigen: bool, det: bool, ctx: &mut Ctx) -> CliResult<Outcome> {
    let a = build_granville(p)?;
    let n = p as usize;
    let matrix: Vec<Vec<String>> = (1..=n)
        .map(|i| (1..=n).map(|j| a.get(i, j).to_string()).collect())
        .collect();
    let mut checks = Vec::new();
    if identity {
        for c in verify_identities(p)? {
            let detail = if c.holds {
                "entrywise equal".to_string()
            } else {
                format!("{} of {} entries differ", c.mismatches.len(), n * n)
            };
            checks.push(Check::new(c.name, c.holds).with_detail(detail));
        }
    }
    let primes: Vec<_> = crt_prime_candidates(p, DEFAULT_PRIME_FLOOR)
        .take(3)
        .collect();
    if eigen {
        for cp in &primes {
            let ok = ctx.timed("eigen", || -> CliResult<bool> {
                for k in 0..p {
                    if !eigen_check_mod_q(p, k, cp)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            })?;
            checks.push(
                Check::new(format!("T v_k and B v_k eigen-identities mod {}", cp.q), ok)
                    .with_detail(format!("k = 0..{}", p - 1)),
            );
        }
    }
    if det {
        let pctx = PeriodContext::new(p)?;
        let l = ctx.timed("period", || pctx.l_exact());
        let signed = l.scale(&BigInt::from(granville_sign(p)));
        for cp in pctx.fresh_primes(0, 3) {
            let ok = det_granville_mod_q(p, &cp)? == signed.reduce_mod(cp.q);
            checks.push(Check::new(
                format!("det(A) = (-1)^((p+1)/2) L(p,x) mod {}", cp.q),
                ok,
            ));
        }
        if p <= DET_NUMERIC_MAX_P {
            let cfg = ctx.precision;
            for x in [0i64, 1, -2] {
                let x0 = FixedComplex::from_integer(&BigInt::from(x), cfg.bits());
                let d = det_numeric(p, &x0, &cfg)?;
                let want = FixedComplex::from_integer(&signed.eval(&BigInt::from(x)), cfg.bits());
                let dist = d.distance(&want);
                checks.push(
                    Check::new(format!("complex det(A) at x = {x}"), dist < cfg.tolerance())
                        .with_detail(format!("distance {dist:.3e}")),
                );
            }
        }
    }
    let lines = matrix.iter().map(|row| row.join(" ")).collect();
    outcome(
        "granville",
        params([
            ("p", json!(p)),
            ("verify_identity", json!(identity)),
            ("verify_eigen", json!(eigen)),
            ("verify_det", json!(det)),
        ]),
        json!({ "p": p, "sign": granville_sign(p), "matrix": matrix }),
        checks,
        lines,
    )
}

fn wieferich(p: u64, q: Option<u64>, scan: bool, qmax: Option<u64>) -> CliResult<Outcome> {
    match (q, scan, qmax) {
        (Some(q), false, None) => {
            let pair = is_wieferich_pair(q, p)?;
            outcome(
                "wieferich",
                params([("p", json!(p)), ("q", json!(q))]),
                json!({ "p": p, "q": q, "is_pair": pair }),
                vec![],
                vec![pair.to_string()],
            )
        }
        (None, true, Some(qmax)) => {
            let found = scan_wieferich(p, qmax)?;
            outcome(
                "wieferich",
                params([
                    ("p", json!(p)),
                    ("scan", json!(true)),
                    ("qmax", json!(qmax)),
                ]),
                json!({ "p": p, "qmax": qmax, "pairs": found }),
                vec![],
                vec![found
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")],
            )
        }
        _ => Err(CliError::Usage(
            "wieferich needs either --q Q or --scan --qmax N".into(),
        )),
    }
}

fn splitting(p: u64, q: u64, ctx: &mut Ctx) -> CliResult<Outcome> {
    let pair = is_wieferich_pair(q, p)?;
    let poly = obtain_l(p, Method::Crt, ctx)?;
    let splits = ctx.timed("splitting", || splits_linearly_mod_q(&poly, q))?;
    let checks = if pair {
        vec![
            Check::new("L(p,x) splits into linear factors mod q", splits)
                .with_detail("(q, p) is a Wieferich pair"),
        ]
    } else {
        vec![]
    };
    let mut lines = vec![if splits { "splits" } else { "does not split" }.to_string()];
    if !pair {
        lines.push("exploratory: (q, p) is not a Wieferich pair, nothing is claimed".into());
    }
    outcome(
        "splitting",
        params([("p", json!(p)), ("q", json!(q))]),
        json!({ "p": p, "q": q, "is_pair": pair, "splits": splits, "exploratory": !pair }),
        checks,
        lines,
    )
}

fn agreement_name(a: TableAgreement) -> &'static str {
    match a {
        TableAgreement::Exact => "exact",
        TableAgreement::ExceedsTable => "exceeds table (table is a lower bound)",
        TableAgreement::BelowTable => "below table",
        TableAgreement::NotApplicable => "not in table",
    }
}

fn valuation_cmd(p: u64, q: u64, ctx: &mut Ctx) -> CliResult<Outcome> {
    if !is_prime_u64(q) {
        return Err(Error::NotPrime(q).into());
    }
    let c = obtain_constant(p, ctx)?;
    let v = valuation(&c, q).ok_or(Error::ZeroConstant(p))?;
    let table = VALUATION_TABLE
        .iter()
        .find(|&&(tp, tq, _)| tp == p && tq == q)
        .map(|&(_, _, e)| e);
    let checks = match table {
        Some(t) => {
            let agreement = if v == t {
                TableAgreement::Exact
            } else if v > t {
                TableAgreement::ExceedsTable
            } else {
                TableAgreement::BelowTable
            };
            vec![
                Check::new("valuation at least the table exponent", v >= t).with_detail(format!(
                    "computed {v}, table {t}: {}",
                    agreement_name(agreement)
                )),
            ]
        }
        None => vec![],
    };
    outcome(
        "valuation",
        params([("p", json!(p)), ("q", json!(q))]),
        json!({ "p": p, "q": q, "valuation": v, "table_exponent": table }),
        checks,
        vec![v.to_string()],
    )
}

fn table(rows: Option<&[u64]>, stretch: bool, ctx: &mut Ctx) -> CliResult<Outcome> {
    let mut list: Vec<u64> = rows.map_or_else(|| DEFAULT_ROWS.to_vec(), <[u64]>::to_vec);
    if stretch {
        list.extend(
            STRETCH_ROWS
                .iter()
                .filter(|p| !list.contains(p))
                .collect::<Vec<_>>(),
        );
    }
    let records = ctx.timed("table", || reproduce_table(&list, true))?;
    let mut checks = Vec::new();
    let mut lines = Vec::new();
    let mut out = Vec::new();
    for r in &records {
        let table = r.table_exponent.map_or("-".to_string(), |t| t.to_string());
        let v = r.valuation.map_or("-".to_string(), |v| v.to_string());
        let splits = r.splits.map_or("-", |s| if s { "yes" } else { "no" });
        lines.push(format!(
            "p = {:>5}  q = {:>4}  pair = {}  splits = {splits}  v_q(L(p,0)) = {v}  table = {table}",
            r.p, r.q, r.is_pair
        ));
        checks.push(
            Check::new(format!("p = {}, q = {}", r.p, r.q), r.verified())
                .with_detail(agreement_name(r.agreement())),
        );
        out.push(json!({
            "p": r.p,
            "q": r.q,
            "is_pair": r.is_pair,
            "splits": r.splits,
            "valuation": r.valuation,
            "table_exponent": r.table_exponent,
            "agreement": agreement_name(r.agreement()),
            "constant_consistent": r.constant_consistent,
        }));
    }
    outcome(
        "table",
        params([("rows", json!(list)), ("stretch", json!(stretch))]),
        json!({ "rows": out }),
        checks,
        lines,
    )
}
