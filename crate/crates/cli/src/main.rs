//! `cml`: run a construction, print its JSON certificate on stdout and a
//! one-line summary on stderr. Exit 0 when every check passed, 1 when a
//! check failed, 2 when the input was rejected.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cml::cert::Certificate;
use cml::monodromy::{exceptional_surjection_certificate, loop_permutation, CoefficientPath};
use cml::par::Exec;
use cml::plane_curves::{
    admissible_sizes, banerjee_chen_sizes, cubic_torsion, flex_points, jordan_totient,
    relative_residual, torsion_points, torsion_stratum, ProjectivePoint, TernaryForm,
    WeierstrassCurve,
};
use cml::poly_core::{discriminant, from_roots, is_square_free, roots};
use cml::poly_maps::{phi_disjoin, psi_torsion, resolve_quartic, resolvent_d, TorsionMapSpec};
use cml::suite::{random, run_suite, trial_rng, SuiteConfig};
use cml::{Complex, Configuration, Error, MonicPolynomial, TolerancePolicy};

#[derive(Parser)]
#[command(
    name = "cml",
    version,
    about = "Certified constructive maps between polynomial and plane-cubic moduli"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "CML_SEED", default_value_t = 42)]
    seed: u64,
    /// Relative convergence threshold for root iterations.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_root: f64,
    /// Relative separation below which points count as equal.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_distinct: f64,
    /// Worker threads (0: automatic, 1: sequential).
    #[arg(long, global = true, default_value_t = 0)]
    parallelism: usize,
    /// Also write the certificate to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

/// JSON inputs are file paths, or inline JSON when they start with `{` or `[`.
#[derive(Subcommand)]
enum Command {
    /// Discriminant of a monic polynomial, checked against the root product.
    Discriminant {
        #[arg(long)]
        poly: String,
    },
    /// Roots of a monic polynomial.
    Roots {
        #[arg(long)]
        poly: String,
    },
    /// Monic polynomial with the given roots.
    Viete {
        #[arg(long)]
        config: String,
    },
    /// Resolvent cubic of a square-free quartic.
    ResolveQuartic {
        #[arg(long)]
        poly: String,
    },
    /// Twisted resolvent `Delta^d R`.
    ResolventD {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// Disjoining map: append `sum |z_i| + 1`.
    Phi {
        #[arg(long)]
        config: String,
    },
    /// Nonzero k-torsion of `y^2 = prod (x - l_i)`, projected to `x + tau y`.
    PsiTorsion {
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// `re` or `re,im`.
        #[arg(long, default_value = "1")]
        tau: String,
    },
    /// Permutation monodromy of a closed coefficient path.
    Monodromy {
        #[arg(long)]
        path: String,
    },
    /// Certify the exceptional surjection S_4 -> S_3.
    CertifyS4s3,
    /// Flex points of a smooth plane curve (the file given by --curve, or a
    /// seeded random smooth curve of degree --d).
    Flexes {
        #[arg(long)]
        curve: Option<String>,
        #[arg(long, default_value_t = 3)]
        d: u32,
    },
    /// The 9k^2 points of 3k-torsion of a smooth cubic (default: Fermat).
    CubicTorsion {
        #[arg(long)]
        curve: Option<String>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Index of the flex used as origin.
        #[arg(long, default_value_t = 0)]
        flex: usize,
    },
    /// The 9 J_2(m) points of the torsion stratum of level m.
    Stratum {
        #[arg(long)]
        curve: Option<String>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        flex: usize,
    },
    /// Jordan totient J_2(m).
    Jordan {
        #[arg(long)]
        m: u64,
    },
    /// Admissible multisection sizes up to the bound, with witnesses.
    Sizes {
        #[arg(long, default_value_t = 110)]
        bound: u64,
    },
    /// Sizes 18 J_2(m), m >= 4, up to the bound.
    BcSizes {
        #[arg(long, default_value_t = 2200)]
        bound: u64,
    },
    /// The full seeded property suite.
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 100)]
        curve_trials: usize,
    },
}

/// Errors that mean the input itself was rejected.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidInput(_)
            | Error::NotSquareFree { .. }
            | Error::NotDistinct { .. }
            | Error::NotSmooth
            | Error::FlexNotOnCurve(_)
            | Error::PathHitsDiscriminant { .. }
    )
}

fn read_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Error> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::InvalidInput(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{arg}: {e}")))
}

fn parse_complex(s: &str) -> Result<Complex, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .map_err(|e| Error::InvalidInput(format!("bad number {p:?}: {e}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex::new(num(re)?, num(im)?)),
        _ => Err(Error::InvalidInput(format!(
            "expected `re` or `re,im`, got {s:?}"
        ))),
    }
}

fn curve_or_fermat(curve: &Option<String>) -> Result<TernaryForm, Error> {
    match curve {
        Some(c) => read_json(c),
        None => Ok(TernaryForm::fermat_cubic()),
    }
}

fn pick_flex(
    f: &TernaryForm,
    index: usize,
    tol: &TolerancePolicy,
) -> Result<ProjectivePoint, Error> {
    let flexes = flex_points(f, tol)?;
    flexes
        .get(index)
        .map(|x| x.point)
        .ok_or_else(|| Error::InvalidInput(format!("flex index {index} out of {}", flexes.len())))
}

fn on_curve_check(cert: &mut Certificate, f: &TernaryForm, pts: &[ProjectivePoint]) {
    let worst = pts
        .iter()
        .map(|p| relative_residual(f, p.coords()))
        .fold(0.0, f64::max);
    cert.check(
        "points_on_curve",
        worst <= 1e-8,
        "worst relative residual on the curve",
        worst,
    );
}

fn run(cmd: &Command, g: &Global, tol: &TolerancePolicy) -> Result<Certificate, Error> {
    let exec = if g.parallelism == 1 {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let mut cert;
    match cmd {
        Command::Discriminant { poly } => {
            let p: MonicPolynomial = read_json(poly)?;
            cert = Certificate::new("discriminant", *tol, g.seed);
            cert.input("poly", &p);
            let n = p.degree();
            if n < 2 {
                return Err(Error::InvalidInput("discriminant needs degree >= 2".into()));
            }
            let d = discriminant(&p)?;
            let sf = is_square_free(&p, tol)?;
            let r = roots(&p, tol)?;
            let pts = r.points();
            let mut oracle = Complex::new(1.0, 0.0);
            for i in 0..n {
                for j in i + 1..n {
                    oracle *= (pts[i] - pts[j]) * (pts[i] - pts[j]);
                }
            }
            let scale = d.norm().max(oracle.norm()).max(sf.threshold);
            let err = if scale > 0.0 {
                (d - oracle).norm() / scale
            } else {
                0.0
            };
            cert.output("discriminant", &d)
                .output("square_free", &sf.square_free)
                .output("margin", &sf.margin)
                .check(
                    "root_product_oracle",
                    err <= 1e-8,
                    "relative difference to prod (r_i - r_j)^2",
                    err,
                );
        }
        Command::Roots { poly } => {
            let p: MonicPolynomial = read_json(poly)?;
            cert = Certificate::new("roots", *tol, g.seed);
            cert.input("poly", &p);
            let r = roots(&p, tol)?;
            let worst = r
                .points()
                .iter()
                .map(|&z| {
                    let bound = tol.root_tol
                        * (1.0 + z.norm())
                            .powi(p.degree() as i32)
                            .max(p.abs_eval(z.norm()));
                    p.evaluate(z).norm() / bound
                })
                .fold(0.0, f64::max);
            cert.output("roots", &r).check(
                "residual_bound",
                worst <= 1.0,
                "worst |P(r)| relative to the accepted residual bound",
                worst,
            );
        }
        Command::Viete { config } => {
            let c: Configuration = read_json(config)?;
            if c.is_empty() {
                return Err(Error::InvalidInput("configuration must be nonempty".into()));
            }
            cert = Certificate::new("viete", *tol, g.seed);
            cert.input("config", &c);
            let p = from_roots(&c);
            cert.output("poly", &p);
            if c.is_distinct(tol) {
                let back = roots(&p, tol)?;
                let d = back.relative_matching_distance(&c).unwrap_or(f64::INFINITY);
                cert.check(
                    "round_trip",
                    d <= 1e-9,
                    "relative matching distance of roots(V(c)) to c",
                    d,
                );
            } else {
                cert.check(
                    "round_trip",
                    true,
                    "repeated points: round trip not applicable",
                    0.0,
                );
            }
        }
        Command::ResolveQuartic { poly } => {
            let p: MonicPolynomial = read_json(poly)?;
            cert = Certificate::new("resolve-quartic", *tol, g.seed);
            cert.input("poly", &p);
            let r = resolve_quartic(&p, tol)?;
            let a = r.input_roots.points();
            let b = r.b_values.points();
            let ids = [
                (b[0] - b[1], (a[3] - a[2]) * (a[0] - a[1])),
                (b[0] - b[2], (a[0] - a[2]) * (a[3] - a[1])),
                (b[1] - b[2], (a[0] - a[3]) * (a[2] - a[1])),
            ];
            let err = ids
                .iter()
                .map(|(l, r)| (l - r).norm() / r.norm())
                .fold(0.0, f64::max);
            let sf = is_square_free(&r.output, tol)?;
            cert.output("resolvent", &r)
                .check(
                    "b_difference_identities",
                    err <= 1e-9,
                    "b_i - b_j against products of root differences",
                    err,
                )
                .check(
                    "output_square_free",
                    sf.square_free,
                    "resolvent cubic passes the square-free gate",
                    sf.margin,
                );
        }
        Command::ResolventD { poly, d } => {
            let p: MonicPolynomial = read_json(poly)?;
            cert = Certificate::new("resolvent-d", *tol, g.seed);
            cert.input("poly", &p)
                .input("d", d)
                .input("realization", &"resolvent roots scaled by Delta^d");
            let r = resolve_quartic(&p, tol)?;
            let out = resolvent_d(&p, *d, tol)?;
            let s = r.input_discriminant.powu(*d);
            let expected =
                Configuration::unordered(r.b_values.points().iter().map(|b| b * s).collect())?;
            let got = roots(&out, tol)?;
            let err = got
                .relative_matching_distance(&expected)
                .unwrap_or(f64::INFINITY);
            let sf = is_square_free(&out, tol)?;
            cert.output("poly", &out)
                .check(
                    "root_scaling_law",
                    err <= 1e-9,
                    "roots against Delta^d times the resolvent roots",
                    err,
                )
                .check(
                    "output_square_free",
                    sf.square_free,
                    "twisted resolvent passes the square-free gate",
                    sf.margin,
                );
        }
        Command::Phi { config } => {
            let c: Configuration = read_json(config)?;
            cert = Certificate::new("phi", *tol, g.seed);
            cert.input("config", &c);
            let out = phi_disjoin(&c, tol)?;
            cert.output("config", &out).check(
                "output_distinct",
                out.is_distinct(tol),
                "separation of the disjoined configuration",
                out.separation(),
            );
        }
        Command::PsiTorsion { config, k, tau } => {
            let lambda: Configuration = read_json(config)?;
            let spec = TorsionMapSpec::with_tau(*k, parse_complex(tau)?)?;
            cert = Certificate::new("psi-torsion", *tol, g.seed);
            cert.input("lambda", &lambda).input("spec", &spec);
            let out = psi_torsion(&lambda, &spec, tol)?;
            let e = WeierstrassCurve::new(&lambda, tol)?;
            let pts = torsion_points(&e, *k, tol)?;
            let worst = pts
                .iter()
                .map(|p| e.torsion_residual(p, *k))
                .fold(0.0, f64::max);
            cert.output("config", &out)
                .output("torsion_points", &pts)
                .check(
                    "cardinality",
                    out.len() == k * k - 1,
                    format!("{} points, expected {}", out.len(), k * k - 1),
                    out.len() as f64,
                )
                .check(
                    "distinct",
                    out.is_distinct(tol),
                    "separation of the projected points",
                    out.separation(),
                )
                .check(
                    "torsion_residual",
                    worst <= 1e-8,
                    "worst distance of (k-1)P to -P",
                    worst,
                );
            if *k == 2 {
                let d = out
                    .relative_matching_distance(&lambda)
                    .unwrap_or(f64::INFINITY);
                cert.check(
                    "two_torsion_is_lambda",
                    d <= 1e-10,
                    "distance of the image to lambda",
                    d,
                );
            }
        }
        Command::Monodromy { path } => {
            let p: CoefficientPath = read_json(path)?;
            cert = Certificate::new("monodromy", *tol, g.seed);
            cert.input("path", &p);
            let m = loop_permutation(&p, tol)?;
            cert.output("monodromy", &m)
                .output("cycles", &m.permutation.to_string())
                .check(
                    "separation",
                    m.min_separation_along_path > 10.0 * tol.distinct_tol,
                    "minimum root separation along the path",
                    m.min_separation_along_path,
                );
        }
        Command::CertifyS4s3 => {
            cert = exceptional_surjection_certificate(tol, exec);
        }
        Command::Flexes { curve, d } => {
            let f = match curve {
                Some(c) => read_json(c)?,
                None => random::smooth_form(&mut trial_rng(g.seed, 0, 0), *d, tol),
            };
            cert = Certificate::new("flexes", *tol, g.seed);
            cert.input("curve", &f);
            let flexes = flex_points(&f, tol)?;
            let deg = f.degree() as usize;
            let total: usize = flexes.iter().map(|x| x.multiplicity).sum();
            let expected = 3 * deg * deg.saturating_sub(2);
            let pts: Vec<ProjectivePoint> = flexes.iter().map(|x| x.point).collect();
            cert.output("flexes", &flexes)
                .output("total_multiplicity", &total)
                .check(
                    "flex_count",
                    total == expected,
                    format!("multiplicities sum to {total}, expected 3d(d-2) = {expected}"),
                    total as f64,
                );
            on_curve_check(&mut cert, &f, &pts);
        }
        Command::CubicTorsion { curve, k, flex } => {
            let f = curve_or_fermat(curve)?;
            let origin = pick_flex(&f, *flex, tol)?;
            cert = Certificate::new("cubic-torsion", *tol, g.seed);
            cert.input("curve", &f).input("k", k).input("flex", &origin);
            let pts = cubic_torsion(&f, *k, &origin, tol)?;
            cert.output("points", &pts).check(
                "cardinality",
                pts.len() == 9 * k * k,
                format!("{} points, expected 9k^2 = {}", pts.len(), 9 * k * k),
                pts.len() as f64,
            );
            on_curve_check(&mut cert, &f, &pts);
        }
        Command::Stratum { curve, m, flex } => {
            let f = curve_or_fermat(curve)?;
            let origin = pick_flex(&f, *flex, tol)?;
            cert = Certificate::new("stratum", *tol, g.seed);
            cert.input("curve", &f).input("m", m).input("flex", &origin);
            let pts = torsion_stratum(&f, *m, &origin, tol)?;
            let expected = 9 * jordan_totient(*m as u64) as usize;
            cert.output("points", &pts)
                .output("size", &pts.len())
                .check(
                    "cardinality",
                    pts.len() == expected,
                    format!("{} points, expected 9 J_2(m) = {expected}", pts.len()),
                    pts.len() as f64,
                );
            on_curve_check(&mut cert, &f, &pts);
        }
        Command::Jordan { m } => {
            if *m == 0 {
                return Err(Error::InvalidInput("m must be >= 1".into()));
            }
            cert = Certificate::new("jordan", *tol, g.seed);
            cert.input("m", m);
            let j = jordan_totient(*m);
            let sum: u64 = (1..=*m).filter(|d| m % d == 0).map(jordan_totient).sum();
            cert.output("value", &j).check(
                "divisor_sum",
                sum == m * m,
                format!("sum over d | m of J_2(d) = {sum}, m^2 = {}", m * m),
                sum as f64,
            );
        }
        Command::Sizes { bound } => {
            let sizes = admissible_sizes(*bound)?;
            cert = Certificate::new("sizes", *tol, g.seed);
            cert.input("bound", bound);
            let bad = sizes.iter().filter(|s| !s.verify()).count();
            let list: Vec<u64> = sizes.iter().map(|s| s.n).collect();
            cert.output("sizes", &list)
                .output("witnesses", &sizes)
                .check(
                    "witnesses_verify",
                    bad == 0,
                    format!("{} sizes, {bad} failing witnesses", sizes.len()),
                    bad as f64,
                );
        }
        Command::BcSizes { bound } => {
            let sizes = banerjee_chen_sizes(*bound)?;
            cert = Certificate::new("bc-sizes", *tol, g.seed);
            cert.input("bound", bound);
            let attained = sizes
                .iter()
                .filter(|&&n| (4..=n).any(|m| 18 * jordan_totient(m) == n))
                .count();
            cert.output("sizes", &sizes).check(
                "each_is_18_j2",
                attained == sizes.len(),
                "every size equals 18 J_2(m) for some m >= 4",
                attained as f64,
            );
        }
        Command::Verify {
            trials,
            curve_trials,
        } => {
            let cfg = SuiteConfig {
                seed: g.seed,
                trials: *trials,
                curve_trials: *curve_trials,
                parallelism: g.parallelism,
                exec,
                tolerances: *tol,
            };
            cert = run_suite(&cfg)?;
        }
    }
    Ok(cert)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let started = Instant::now();
    let result = TolerancePolicy::new(
        g.tol_root,
        g.tol_distinct,
        TolerancePolicy::default().max_iterations,
    )
    .and_then(|tol| run(&cli.command, g, &tol));
    let cert = match result {
        Ok(c) => c,
        Err(e) if is_input_error(&e) => {
            eprintln!("cml: rejected input: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            // a computation that could not complete is a failed certificate
            let tol = TolerancePolicy::new(g.tol_root, g.tol_distinct, 500).unwrap_or_default();
            let mut c = Certificate::new("error", tol, g.seed);
            c.error("construction", &e);
            c
        }
    };
    let json = cert.to_json();
    println!("{json}");
    if let Some(path) = &g.out {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("cml: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let total = cert.checks().len();
    let failed: Vec<_> = cert.failed_checks().collect();
    eprintln!(
        "{}: {} ({}/{} checks passed, {:.2}s)",
        cert.construction(),
        if cert.passed() { "PASS" } else { "FAIL" },
        total - failed.len(),
        total,
        started.elapsed().as_secs_f64()
    );
    for c in &failed {
        eprintln!("  failed {}: {}", c.name, c.detail);
    }
    if cert.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
