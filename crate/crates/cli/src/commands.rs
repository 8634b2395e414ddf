use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use gpade_core::constants::{compute_constants, family_constants, ConstantsError, FamilyConstants, Verdict};
use gpade_core::derivation::{iterate, zero_estimate_check};
use gpade_core::digits::{expand_digits, gfun_value, theorem2_bound_check, theorem2_convergent};
use gpade_core::dioph::{DiophError, VerifyConfig};
use gpade_core::exact::rational::parse_rational;
use gpade_core::exact::{Poly, Rational};
use gpade_core::gfun::GFunctionSystem;
use gpade_core::pade::{assemble, build, PadeApproximant};
use gpade_core::quad::{cf_sqrt, pell_bound_check, reduce_to_theorem1, theorem5_scan, Denominator};
use gpade_core::report::{fmt_interval, fmt_rational, Record, RunReport, Status};
use gpade_core::suite::{run_suite, SuiteConfig};

use crate::config::Config;
use crate::error::{CliError, Classify, Kind};

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// `a..b`, `a..=b` (both inclusive) or a single `m`.
fn range_arg(s: &str) -> Result<(u32, u32), String> {
    let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("{x:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let m = parse(s)?;
            (m, m)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("empty or invalid range {s:?}"));
    }
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Den {
    Alpha,
    Beta,
}

/// Where an approximant comes from: explicit parameters or an artifact
/// written by `gpade build --artifact`.
#[derive(clap::Args, Debug)]
pub struct Source {
    /// built-in name (log1m, polylog<s>, binom:<alpha>, sqrt1m) or system file
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    /// build artifact from `gpade build --artifact`
    #[arg(long, conflicts_with_all = ["system", "p", "q", "h"])]
    from: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct the approximant (Q; P_1..P_N) with certificates.
    Build {
        #[arg(long)]
        system: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        h: usize,
        /// also write a reusable artifact (TOML) here
        #[arg(long)]
        artifact: Option<PathBuf>,
    },
    /// Run the derivation iteration and certify each k.
    Iterate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k_max: usize,
    },
    /// Zero-estimate check of Delta_N.
    Zerocheck {
        #[command(flatten)]
        source: Source,
    },
    /// The effective constant chain for one (a, b, t, m).
    Constants {
        #[arg(long)]
        system: String,
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        #[arg(long, default_value = "0", value_parser = rational_arg)]
        t: Rational,
        #[arg(long)]
        m: u64,
    },
    /// Check |F_j(a/b) - n/(B b^m)| against the explicit lower bound.
    Verify {
        #[arg(long)]
        system: String,
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long)]
        b: BigInt,
        #[arg(long = "B", default_value = "1")]
        big_b: BigInt,
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "scan_nearest", required_unless_present = "scan_nearest")]
        n: Option<BigInt>,
        /// use the nearest integer to B b^m F_j(a/b)
        #[arg(long)]
        scan_nearest: bool,
        /// function index; the principal one by default
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, value_parser = rational_arg)]
        t: Option<Rational>,
        /// replay the proof at small (p, q, h) below the b threshold
        #[arg(long)]
        property_mode: bool,
        /// also check the 1/b^(m(1+eps)) form
        #[arg(long, value_parser = rational_arg)]
        eps: Option<Rational>,
    },
    /// Digits of F(a/b^s) in base b, repetition profile and convergents.
    Digits {
        #[arg(long)]
        system: String,
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 100)]
        window: usize,
        #[arg(long, default_value = "1/2", value_parser = rational_arg)]
        eps: Rational,
    },
    /// Continued fraction of sqrt(d), Pell bound, reduction and scan.
    Sqrt {
        #[arg(long, value_parser = rational_arg)]
        d: Rational,
        #[arg(long, default_value_t = 10)]
        convergents: usize,
        /// m range for the scan, e.g. 1..20
        #[arg(long, value_parser = range_arg)]
        scan_m: Option<(u32, u32)>,
        #[arg(long, value_enum, default_value = "alpha")]
        den: Den,
        /// convergent used by the scan; the last one by default
        #[arg(long)]
        index: Option<usize>,
    },
    /// The acceptance suite.
    Suite {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct Artifact {
    system: String,
    p: usize,
    q: usize,
    h: usize,
    /// kernel vector v_0..v_q as decimal strings
    v: Vec<String>,
}

fn lib<E: Classify + std::fmt::Display>(e: E) -> CliError {
    CliError::from_lib(e)
}

fn system(spec: &str) -> Result<GFunctionSystem, CliError> {
    GFunctionSystem::resolve(spec).map_err(lib)
}

fn coeffs(p: &Poly) -> String {
    let v: Vec<String> = p.coeffs().iter().map(fmt_rational).collect();
    format!("[{}]", v.join(","))
}

fn base_report(name: &str, cfg: &Config) -> RunReport {
    RunReport::new(name)
        .config("precision", cfg.precision)
        .config("max_precision", cfg.max_precision)
        .config("h0", fmt_rational(&cfg.constants.h0))
        .config("h1", fmt_rational(&cfg.constants.h1))
        .config("h2", fmt_rational(&cfg.constants.h2))
}

/// A hypothesis verdict: failing hypotheses are reported as unmet, not
/// violated.
fn hypothesis(v: Verdict) -> Status {
    match v {
        Verdict::Holds => Status::Certified,
        Verdict::Fails => Status::HypothesisUnmet,
        Verdict::Indeterminate => Status::Indeterminate,
    }
}

/// Indeterminate and hypothesis errors become a record; the rest abort.
fn soft<E: Classify + std::fmt::Display>(report: &mut RunReport, key: &str, e: E) -> Result<(), CliError> {
    match e.kind() {
        Kind::Indeterminate => report.push(Record::check(key, Status::Indeterminate).field("reason", e)),
        Kind::Hypothesis => report.push(Record::check(key, Status::HypothesisUnmet).field("reason", e)),
        _ => return Err(CliError::from_lib(e)),
    }
    Ok(())
}

fn echo(cmd: &Command) -> String {
    match cmd {
        Command::Build { system, p, q, h, .. } => format!("gpade build --system {system} --p {p} --q {q} --h {h}"),
        Command::Iterate { source, k_max } => format!("gpade iterate {} --k-max {k_max}", echo_source(source)),
        Command::Zerocheck { source } => format!("gpade zerocheck {}", echo_source(source)),
        Command::Constants { system, a, b, t, m } => {
            format!("gpade constants --system {system} --a {a} --b {b} --t {} --m {m}", fmt_rational(t))
        }
        Command::Verify { system, a, b, big_b, m, n, scan_nearest, j, t, property_mode, eps } => {
            let mut s = format!("gpade verify --system {system} --a {a} --b {b} --B {big_b} --m {m}");
            if let Some(n) = n {
                s += &format!(" --n {n}");
            }
            if *scan_nearest {
                s += " --scan-nearest";
            }
            if let Some(j) = j {
                s += &format!(" --j {j}");
            }
            if let Some(t) = t {
                s += &format!(" --t {}", fmt_rational(t));
            }
            if *property_mode {
                s += " --property-mode";
            }
            if let Some(e) = eps {
                s += &format!(" --eps {}", fmt_rational(e));
            }
            s
        }
        Command::Digits { system, a, b, s, t, count, window, eps } => format!(
            "gpade digits --system {system} --a {a} --b {b} --s {s} --t {t} --count {count} --window {window} --eps {}",
            fmt_rational(eps)
        ),
        Command::Sqrt { d, convergents, scan_m, den, index } => {
            let mut s = format!("gpade sqrt --d {} --convergents {convergents}", fmt_rational(d));
            if let Some((lo, hi)) = scan_m {
                s += &format!(" --scan-m {lo}..{hi} --den {}", if matches!(den, Den::Alpha) { "alpha" } else { "beta" });
            }
            if let Some(i) = index {
                s += &format!(" --index {i}");
            }
            s
        }
        Command::Suite { quick } => format!("gpade suite{}", if *quick { " --quick" } else { "" }),
    }
}

fn echo_source(s: &Source) -> String {
    match &s.from {
        Some(p) => format!("--from {}", p.display()),
        None => format!(
            "--system {} --p {} --q {} --h {}",
            s.system.as_deref().unwrap_or("?"),
            s.p.map_or("?".into(), |x| x.to_string()),
            s.q.map_or("?".into(), |x| x.to_string()),
            s.h.map_or("?".into(), |x| x.to_string())
        ),
    }
}

/// Approximant from flags or from an artifact, re-certified either way.
fn load_source(src: &Source) -> Result<(GFunctionSystem, PadeApproximant), CliError> {
    if let Some(path) = &src.from {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let art: Artifact = toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let sys = system(&art.system)?;
        let v = art
            .v
            .iter()
            .map(|x| x.parse::<BigInt>().map_err(|e| CliError::Usage(format!("artifact kernel entry {x:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let approx = assemble(&sys, art.p, art.q, art.h, &v).map_err(lib)?;
        return Ok((sys, approx));
    }
    let missing = |n: &str| CliError::Usage(format!("--{n} is required without --from"));
    let sys = system(src.system.as_deref().ok_or_else(|| missing("system"))?)?;
    let (p, q, h) = (src.p.ok_or_else(|| missing("p"))?, src.q.ok_or_else(|| missing("q"))?, src.h.ok_or_else(|| missing("h"))?);
    let approx = build(&sys, p, q, h).map_err(lib)?;
    Ok((sys, approx))
}

fn approximant_records(report: &mut RunReport, sys: &GFunctionSystem, a: &PadeApproximant) {
    let target = a.p + a.h + 1;
    report.push(
        Record::value("approximant")
            .field("system", &a.system)
            .field("p", a.p)
            .field("q", a.q)
            .field("h", a.h),
    );
    let v: Vec<String> = a.v.iter().map(|x| x.to_string()).collect();
    report.push(Record::value("kernel").field("v", format!("[{}]", v.join(","))));
    report.push(Record::value("poly/Q").field("coeffs", coeffs(&a.q_poly)));
    for (j, pj) in a.p_polys.iter().enumerate() {
        report.push(Record::value(format!("poly/P{}", j + 1)).field("coeffs", coeffs(pj)));
    }
    for (j, &o) in a.order_certificates.iter().enumerate() {
        report.push(
            Record::check(format!("order/j{}", j + 1), Status::from_bool(o >= target))
                .field("ord", o)
                .field("target", target),
        );
    }
    let dp = gpade_core::exact::rational::from_big(sys.denominator(a.p));
    let integral = a.q_poly.is_integral() && a.p_polys.iter().all(|x| x.scale(&dp).is_integral());
    report.push(Record::check("integrality", Status::from_bool(integral)).field("d_p", sys.denominator(a.p)));
    report.push(
        Record::check("siegel", Status::from_bool(a.siegel.within))
            .field("max_norm", &a.siegel.max_norm)
            .interval("bound", &a.siegel.bound, 12),
    );
    report.push(Record::value("height").field("H(Q)", fmt_rational(&a.height_q)));
}

fn family_records(report: &mut RunReport, fc: &FamilyConstants) {
    report.push(
        Record::value("family")
            .field("chi", &fc.chi)
            .field("c1", &fc.c1)
            .field("c2", fc.c2)
            .field("c3", fmt_rational(&fc.c3))
            .field("c5", fmt_rational(&fc.c5))
            .field("c6", &fc.c6)
            .field("y", fmt_rational(&fc.y))
            .interval("c4", &fc.c4, 12)
            .interval("c7", &fc.c7, 12)
            .interval("c8", &fc.c8, 12),
    );
    if let Some(pc) = &fc.closed_form_c4 {
        report.push(
            Record::check("c4/below-10^5.78", Status::from_bool(pc.below_10_578)).interval("c4", &fc.c4, 12),
        );
        report.push(
            Record::check("c4/closed-form-1pct", Status::from_bool(!pc.discrepancy))
                .interval("closed_form", &pc.value, 12)
                .interval("rel_diff", &pc.rel_diff, 6),
        );
    }
}

pub fn dispatch(cmd: &Command, cfg: &Config) -> Result<RunReport, CliError> {
    let mut report = base_report(&echo(cmd), cfg);
    let cc = &cfg.constants;
    match cmd {
        Command::Build { system: spec, p, q, h, artifact } => {
            let sys = system(spec)?;
            let a = build(&sys, *p, *q, *h).map_err(lib)?;
            approximant_records(&mut report, &sys, &a);
            if let Some(path) = artifact {
                let art = Artifact {
                    system: spec.clone(),
                    p: *p,
                    q: *q,
                    h: *h,
                    v: a.v.iter().map(|x| x.to_string()).collect(),
                };
                let text = toml::to_string(&art).map_err(|e| CliError::Internal(e.to_string()))?;
                std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            }
        }
        Command::Iterate { source, k_max } => {
            let (sys, a) = load_source(source)?;
            let fam = iterate(&a, &sys, *k_max).map_err(lib)?;
            report.push(Record::value("approximant").field("system", &a.system).field("p", a.p).field("q", a.q).field("h", a.h));
            for (k, c) in fam.certs.iter().enumerate() {
                let deg_p: Vec<String> = c.deg_p.iter().map(|g| g.map_or("-".into(), |g| g.to_string())).collect();
                report.push(
                    Record::check(format!("k{k:03}"), Status::from_bool(c.all_ok()))
                        .field("deg_q", c.deg_q.map_or("-".into(), |g| g.to_string()))
                        .field("deg_p", format!("[{}]", deg_p.join(",")))
                        .field("q_integral", c.q_integral)
                        .field("p_integral", c.p_integral)
                        .field("orders", format!("{:?}", c.orders).replace(' ', ""))
                        .field("target", c.order_target)
                        .field("pade_applicable", c.pade_applicable)
                        .field("eq7_match", c.eq7_match)
                        .field("height", fmt_rational(&fam.qk[k].height())),
                );
                report.push(Record::value(format!("k{k:03}/Q")).field("coeffs", coeffs(&fam.qk[k])));
            }
        }
        Command::Zerocheck { source } => {
            let (sys, a) = load_source(source)?;
            let fam = iterate(&a, &sys, sys.n().max(a.h / sys.d())).map_err(lib)?;
            let z = zero_estimate_check(&fam, &sys).map_err(lib)?;
            report.push(
                Record::check("zero-estimate", Status::from_bool(z.nonzero && z.deg_ok))
                    .field("nonzero", z.nonzero)
                    .field("required_order", z.required_order)
                    .field("vanish_order", z.vanish_order.map_or("-".into(), |v| v.to_string()))
                    .field("deg_tilde", z.delta_tilde.degree().map_or("-".into(), |v| v.to_string()))
                    .field("ell0", z.ell0)
                    .field("lemma_applies", a.h >= sys.n() * sys.d()),
            );
            report.push(Record::value("delta_tilde").field("coeffs", coeffs(&z.delta_tilde)));
        }
        Command::Constants { system: spec, a, b, t, m } => {
            let sys = system(spec)?;
            match compute_constants(&sys, a, b, t, *m, cc) {
                Ok(r) => {
                    family_records(&mut report, &r.family);
                    let mut rec = Record::value("instance")
                        .interval("x", &r.x, 12)
                        .field("h", r.h)
                        .field("p", r.p)
                        .field("q", r.q);
                    if let Some(beta) = &r.beta {
                        rec = rec.interval("beta", beta, 12);
                    }
                    report.push(rec);
                    report.push(Record::check("hypothesis/x>N+1", Status::Certified));
                    report.push(Record::check("hypothesis/b>(c1|a|)^c2", hypothesis(r.hyp3)));
                    report.push(Record::check("hypothesis/feasibility", hypothesis(r.eqhyp)));
                }
                Err(ConstantsError::Hypothesis3) => {
                    let fc = family_constants(&sys, t, cc).map_err(lib)?;
                    family_records(&mut report, &fc);
                    let x = gpade_core::constants::x_value(&fc, a, b, cc.bits).map_err(lib)?;
                    report.push(
                        Record::check("hypothesis/x>N+1", Status::HypothesisUnmet)
                            .interval("x", &x, 12)
                            .field("N+1", sys.n() + 1),
                    );
                }
                Err(e) => soft(&mut report, "constants", e)?,
            }
        }
        Command::Verify { system: spec, a, b, big_b, m, n, scan_nearest: _, j, t, property_mode, eps } => {
            let sys = system(spec)?;
            let vc = VerifyConfig {
                constants: cc.clone(),
                t: t.clone(),
                property_mode: *property_mode,
                eps: eps.clone(),
                ..Default::default()
            };
            match gpade_core::dioph::verify_theorem1(&sys, a, b, big_b, *m, n.as_ref(), *j, &vc) {
                Ok(r) => verify_records(&mut report, &r),
                Err(e @ DiophError::HypothesisUnmet(_)) => {
                    report.push(Record::check("hypothesis/b>(c1|a|)^c2", Status::HypothesisUnmet).field("reason", e));
                }
                Err(e) => soft(&mut report, "theorem1", e)?,
            }
        }
        Command::Digits { system: spec, a, b, s, t, count, window, eps } => {
            let sys = system(spec)?;
            match theorem2_bound_check(&sys, a, *b, *s, *t, eps, *window, cc) {
                Ok(r) => {
                    let z = Rational::new(a.clone(), num_traits::pow(BigInt::from(*b), *s as usize));
                    let value = gfun_value(&sys, sys.principal(), z);
                    let ds = if r.digits.certified_len >= *count {
                        r.digits.clone()
                    } else {
                        expand_digits(&value, *b, *count, cc.bits, cc.max_bits).map_err(lib)?
                    };
                    let shown = (*count).min(ds.certified_len);
                    report.push(
                        Record::value("digits")
                            .field("base", b)
                            .field("integer_part", &ds.integer_part)
                            .field("count", shown)
                            .field("digits", &ds.to_digit_string()[..shown]),
                    );
                    if shown < *count {
                        report.push(Record::check("digits/complete", Status::Indeterminate).field("certified", shown));
                    }
                    let vals: Vec<String> = r.profile.values.iter().map(|v| v.to_string()).collect();
                    report.push(
                        Record::value("profile")
                            .field("t", r.t)
                            .field("values", format!("[{}]", vals.join(",")))
                            .field("max_ratio", fmt_rational(&r.profile.max_ratio))
                            .field("argmax", r.profile.argmax)
                            .field("empirical_vb", format!("{:.6}", r.profile.empirical_vb)),
                    );
                    report.push(Record::check("hypothesis/b^s>(c1|a|)^c2", hypothesis(r.hyp_b)));
                    report.push(Record::check("hypothesis/b^s>(|a|+1)^(2c4/eps)", hypothesis(r.hyp_eps)));
                    let hyps = r.hyp_b.holds() && r.hyp_eps.holds();
                    let st = match (r.empirical_ok, hyps) {
                        (true, _) => Status::Certified,
                        (false, true) => Status::Violated,
                        (false, false) => Status::HypothesisUnmet,
                    };
                    report.push(
                        Record::check("repetition/N<=eps*n/t", st)
                            .field("max_ratio", fmt_rational(&r.profile.max_ratio))
                            .field("eps/t", fmt_rational(&(eps / Rational::from_integer((*t).into())))),
                    );
                    convergent_records(&mut report, &r.digits, &value, *t, *window)?;
                }
                Err(e) => soft(&mut report, "digits", e)?,
            }
        }
        Command::Sqrt { d, convergents, scan_m, den, index } => sqrt_records(&mut report, d, *convergents, *scan_m, *den, *index, cfg)?,
        Command::Suite { quick } => {
            let (results, suite_report) = run_suite(&SuiteConfig { quick: *quick, constants: cc.clone() });
            for r in &results {
                eprintln!("{}", r.line());
                for n in &r.notes {
                    eprintln!("    note: {n}");
                }
            }
            report.records = suite_report.records;
        }
    }
    Ok(report)
}

fn verify_records(report: &mut RunReport, r: &gpade_core::dioph::VerifyReport) {
    report.push(
        Record::value("instance")
            .field("system", &r.system)
            .field("reflected", r.reflected)
            .field("j", r.j)
            .field("a", &r.a)
            .field("b", &r.b)
            .field("B", &r.big_b)
            .field("m", r.m)
            .field("n", &r.n)
            .field("n_is_nearest", r.n_is_nearest)
            .field("t", fmt_rational(&r.t))
            .interval("c4", &r.family.c4, 12),
    );
    report.push(Record::check("hypothesis/b>(c1|a|)^c2", hypothesis(r.hyp_b)));
    report.push(Record::check("hypothesis/m>=c3*log(b)/log(|a|+1)", hypothesis(r.hyp_m)));
    let mut rec = Record::check("theorem1", Status::from_verdict(r.holds))
        .interval("lhs", &r.lhs, 20)
        .interval("log_rhs", &r.log_rhs, 12);
    if let Some(reason) = &r.reason {
        rec = rec.field("reason", reason);
    }
    report.push(rec);
    if let Some(c) = &r.proof_path {
        report.push(
            Record::value("chain/params")
                .field("p", c.p)
                .field("q", c.q)
                .field("h", c.h)
                .field("k", c.witness.k)
                .field("xi", &c.witness.xi)
                .field("Q_k(a/b)", fmt_rational(&c.q_value)),
        );
        report.push(Record::check("chain/b^m|xi", Status::from_bool(c.witness.divisible_by_bm && c.witness.xi != BigInt::from(0))));
        report.push(
            Record::check("chain/remainder", Status::from_verdict(c.remainder_small))
                .interval("abs_r", &c.remainder, 40)
                .field("threshold", fmt_rational(&c.remainder_threshold)),
        );
        report.push(Record::check("chain/xi-inequality", Status::from_verdict(c.xi_chain)).field("slack", fmt_rational(&c.xi_chain_slack)));
        let mut rec = Record::check("chain/distance", Status::from_verdict(c.distance_certified));
        if let Some(dl) = &c.distance_lower {
            rec = rec.field("lower", fmt_rational(dl));
        }
        report.push(rec);
    }
    if let Some(c) = &r.corollary {
        report.push(Record::check("corollary/m>=2t/eps", if c.m_ok { Status::Certified } else { Status::HypothesisUnmet }));
        report.push(Record::check("corollary/b>(|a|+1)^(2c4/eps)", hypothesis(c.b_ok)));
        report.push(
            Record::check("corollary", Status::from_verdict(c.holds))
                .field("eps", fmt_rational(&c.eps))
                .interval("log_bound", &c.log_bound, 12),
        );
    }
}

fn convergent_records<F>(
    report: &mut RunReport,
    ds: &gpade_core::digits::DigitString,
    value: &F,
    t: usize,
    window: usize,
) -> Result<(), CliError>
where
    F: Fn(u32) -> Result<gpade_core::exact::IntervalReal, gpade_core::digits::DigitsError>,
{
    let xi = value(ds.bits).map_err(lib)?;
    let mut block_exceeded = Vec::new();
    let mut undecided = 0usize;
    let mut checked = 0usize;
    for n in 1..=window {
        match theorem2_convergent(ds, &xi, t, n) {
            Ok(c) => {
                checked += 1;
                if c.block_ok == Verdict::Fails {
                    block_exceeded.push(n.to_string());
                }
                if c.match_ok != Verdict::Holds {
                    undecided += 1;
                }
            }
            Err(e) if e.kind() == Kind::Indeterminate => undecided += 1,
            Err(e) => return Err(lib(e)),
        }
    }
    let st = if undecided == 0 { Status::Certified } else { Status::Indeterminate };
    report.push(
        Record::check("convergents/|xi-p/q|<=b^(1-n-tN)", st)
            .field("t", t)
            .field("checked", checked)
            .field("undecided", undecided)
            .field("(b-1)/b^(n+tN)_exceeded_at", format!("[{}]", block_exceeded.join(","))),
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sqrt_records(
    report: &mut RunReport,
    d: &Rational,
    count: usize,
    scan_m: Option<(u32, u32)>,
    den: Den,
    index: Option<usize>,
    cfg: &Config,
) -> Result<(), CliError> {
    if count == 0 {
        return Err(CliError::Usage("--convergents must be positive".into()));
    }
    let e = cf_sqrt(d, count).map_err(lib)?;
    let list = |v: &[BigInt]| format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    report.push(
        Record::value("cf")
            .field("d", fmt_rational(d))
            .field("sqrt", gpade_core::quad::sqrt_decimal(d, 30))
            .field("preperiod", list(&e.preperiod))
            .field("period", list(&e.period)),
    );
    for c in &e.convergents {
        let k = format!("conv/{:03}", c.index);
        let pell = pell_bound_check(c, d);
        report.push(
            Record::check(format!("{k}/pell"), Status::from_bool(pell.holds))
                .field("alpha", &c.alpha)
                .field("beta", &c.beta)
                .field("value", fmt_rational(&pell.value))
                .interval("bound", &pell.bound, 12),
        );
        match reduce_to_theorem1(c, d, &cfg.constants) {
            Ok(r) => {
                report.push(
                    Record::check(format!("{k}/identity"), Status::from_bool(r.identity_holds))
                        .field("a", &r.a)
                        .field("b", &r.b)
                        .field("via_series", r.via_series)
                        .interval("f", &r.f_value, 20),
                );
                report.push(
                    Record::check(format!("{k}/hypothesis"), hypothesis(r.hyp_b)).interval("log_N_d", &r.log_nd, 12),
                );
            }
            Err(err) => soft(report, &format!("{k}/identity"), err)?,
        }
    }
    if let Some((lo, hi)) = scan_m {
        let i = index.unwrap_or(e.convergents.len() - 1);
        let conv = e
            .convergents
            .get(i)
            .ok_or_else(|| CliError::Usage(format!("--index {i} beyond {} convergents", e.convergents.len())))?;
        let dd = match den {
            Den::Alpha => Denominator::Alpha,
            Den::Beta => Denominator::Beta,
        };
        let s = theorem5_scan(d, conv, lo..=hi, dd, &cfg.constants).map_err(lib)?;
        for row in &s.rows {
            report.push(
                Record::value(format!("scan/m{:04}", row.m))
                    .field("n", &row.n)
                    .field("distance", fmt_interval(&row.distance, 6))
                    .field("exponent", format!("{:.6}", row.exponent))
                    .field("eta", format!("{:.6}", row.eta))
                    .field("trivial", row.trivial),
            );
        }
        report.push(
            Record::value("scan/summary")
                .field("alpha", &s.alpha)
                .field("beta", &s.beta)
                .field("eta_fit", format!("{:.6}", s.eta_fit)),
        );
    }
    Ok(())
}
