use std::fmt::Write as _;
use std::path::Path;

use polyvol::certificates::{
    certify_p1, certify_p2, certify_p3, Certificate, DEFAULT_STOCHASTIC_TOL, DEFAULT_TOL,
};
use polyvol::poly::{
    enumerate_indices, parse_document, Convention, Degree, Document, GeneralizedPolynomial,
};
use polyvol::solvers::{
    scale_gram_to_target_volume, scale_to_target_volume, solve_p1, solve_p2, solve_p3,
    SolveConfig, SolveResult,
};
use polyvol::volume::{
    closed_form_ball_moment, closed_form_ball_volume, finite_volume_test, moment_matrix,
    moment_table, moments, volume, Backend, EngineConfig,
};
use polyvol::Error;
use serde_json::json;

use crate::{Command, Common, Format, Output, ProblemArg};

pub(crate) struct Failure {
    pub code: u8,
    pub message: Option<String>,
}

const EXIT_INPUT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_UNCONVERGED: u8 = 4;
const EXIT_CERTIFICATE: u8 = 5;

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: Some(message.into()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfiniteVolume { .. } | Error::Divergent { .. } | Error::NonFinite(_) | Error::Overflow { .. } => {
                EXIT_INFEASIBLE
            }
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: Some(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

pub(crate) fn run(command: Command) -> Outcome {
    match command {
        Command::Volume { file, common, force } => cmd_volume(&file, &common, force),
        Command::Moments {
            file,
            max_order,
            q,
            common,
            force,
        } => cmd_moments(&file, &max_order, q, &common, force),
        Command::Solve {
            problem,
            n,
            d,
            q,
            start,
            max_iters,
            common,
        } => cmd_solve(problem, n, &d, q, start.as_deref(), max_iters, &common),
        Command::Certify {
            file,
            problem,
            rescale,
            common,
        } => cmd_certify(&file, problem, rescale, &common),
        Command::BallTable { n_range, d_list, output } => cmd_ball_table(&n_range, &d_list, &output),
        Command::Boundary { file, count, output } => cmd_boundary(&file, count, &output),
    }
}

fn read_document(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_polynomial(path: &Path) -> Result<GeneralizedPolynomial, Failure> {
    Ok(match read_document(path)? {
        Document::Polynomial(g) => g,
        Document::Gram(f) => f.expand(),
    })
}

fn engine(common: &Common, n: usize) -> EngineConfig {
    let backend = common.backend.map_or(Backend::default_for(n), Backend::from);
    let mut cfg = EngineConfig::new(backend).with_seed(common.seed);
    if let Some(b) = common.budget {
        cfg = cfg.with_budget(b as usize);
    }
    cfg
}

fn emit(output: &Output, text: &str) -> Outcome {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require_finite(g: &GeneralizedPolynomial, force: bool) -> Outcome {
    if force {
        return Ok(());
    }
    let v = finite_volume_test(g);
    if v.finite_volume {
        Ok(())
    } else {
        Err(Error::InfiniteVolume {
            sphere_minimum: v.sphere_minimum,
        }
        .into())
    }
}

fn cmd_volume(file: &Path, common: &Common, force: bool) -> Outcome {
    let g = read_polynomial(file)?;
    require_finite(&g, force)?;
    let est = volume(&g, &engine(common, g.n()))?;
    let text = match common.output.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", serde_json::to_string(&est).expect("serializable")),
        Format::Csv => format!(
            "value;std_error;backend;samples_or_nodes\n{};{};{};{}\n",
            est.value, est.std_error, est.backend, est.samples_or_nodes
        ),
    };
    emit(&common.output, &text)
}

fn cmd_moments(file: &Path, max_order: &str, q: Option<u32>, common: &Common, force: bool) -> Outcome {
    let g = read_polynomial(file)?;
    let order: Degree = max_order.parse().map_err(|e: Error| Failure::input(e.to_string()))?;
    let q = q.unwrap_or(g.q());
    if q == 0 {
        return Err(Failure::input("--q must be at least 1"));
    }
    let top = order.times(q).ok_or_else(|| {
        Failure::input(format!("order {order} is not on the 1/{q} lattice; pass a matching --q"))
    })?;
    require_finite(&g, force)?;
    let alphas: Vec<_> = (1..=top).flat_map(|k| enumerate_indices(g.n(), k, q)).collect();
    let table = moments(&g, &alphas, &engine(common, g.n()))?;
    let text = match common.output.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let rows: Vec<_> = table
                .entries()
                .iter()
                .map(|(a, e)| json!({"alpha_times_q": a.numerators(), "value": e.value, "std_error": e.std_error}))
                .collect();
            let v = json!({
                "region": table.region(),
                "q": q,
                "volume": table.volume(),
                "moments": rows,
            });
            format!("{v}\n")
        }
    };
    emit(&common.output, &text)
}

fn json_only(output: &Output) -> Outcome {
    if output.format == Some(Format::Csv) {
        return Err(Failure::input("this command writes JSON only"));
    }
    Ok(())
}

fn cmd_solve(
    problem: ProblemArg,
    n: usize,
    d: &str,
    q: u32,
    start: Option<&Path>,
    max_iters: usize,
    common: &Common,
) -> Outcome {
    json_only(&common.output)?;
    let degree: Degree = d.parse().map_err(|e: Error| Failure::input(e.to_string()))?;
    if n == 0 {
        return Err(Failure::input("--n must be at least 1"));
    }
    let mut cfg = SolveConfig::default()
        .with_engine(engine(common, n))
        .with_seed(common.seed)
        .with_max_iters(max_iters);
    if let Some(t) = common.tol {
        cfg.certificate_tol = t;
    }
    let start = start.map(read_document).transpose()?;
    let poly_start = |doc: &Option<Document>| -> Result<Option<GeneralizedPolynomial>, Failure> {
        match doc {
            None => Ok(None),
            Some(Document::Polynomial(g)) => Ok(Some(g.clone())),
            Some(Document::Gram(f)) => Ok(Some(f.expand())),
        }
    };
    let result: SolveResult = match problem {
        ProblemArg::P1 | ProblemArg::P1q => {
            if problem == ProblemArg::P1 && q != 1 {
                return Err(Failure::input("p1 is the q = 1 problem; use p1q for generalized polynomials"));
            }
            if problem == ProblemArg::P1q && q == 1 {
                return Err(Failure::input("p1q needs --q greater than 1"));
            }
            solve_p1(n, degree, q, poly_start(&start)?.as_ref(), &cfg)?
        }
        ProblemArg::P2 => solve_p2(n, degree, q, poly_start(&start)?.as_ref(), &cfg)?,
        ProblemArg::P3 => {
            if q != 1 || degree.den() != 1 {
                return Err(Failure::input("p3 needs an even integer degree and q = 1"));
            }
            let form = match start {
                None => None,
                Some(Document::Gram(f)) => Some(f),
                Some(Document::Polynomial(_)) => {
                    return Err(Failure::input("p3 starts from a Gram form (a document with \"Q\")"))
                }
            };
            solve_p3(n, degree.num(), form.as_ref(), &cfg)?
        }
    };
    emit(&common.output, &format!("{}\n", result.to_json()))?;
    if !result.converged {
        return Err(Failure {
            code: EXIT_UNCONVERGED,
            message: Some(format!("no convergence within {max_iters} iterations")),
        });
    }
    certificate_outcome(&result.certificate)
}

fn certificate_outcome(c: &Certificate) -> Outcome {
    if c.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_CERTIFICATE,
            message: Some(format!("certificate failed: {}", c.failing().join(", "))),
        })
    }
}

fn default_tol(cfg: &EngineConfig) -> f64 {
    if cfg.backend.is_deterministic() {
        DEFAULT_TOL
    } else {
        DEFAULT_STOCHASTIC_TOL
    }
}

fn rho(n: usize, d: f64) -> Result<f64, Failure> {
    Ok(closed_form_ball_volume(n, d)?)
}

fn cmd_certify(file: &Path, problem: Option<ProblemArg>, rescale: bool, common: &Common) -> Outcome {
    json_only(&common.output)?;
    let doc = read_document(file)?;
    let problem = problem.unwrap_or(match &doc {
        Document::Gram(_) => ProblemArg::P3,
        Document::Polynomial(g) if g.convention() == Convention::Multinomial => ProblemArg::P2,
        Document::Polynomial(_) => ProblemArg::P1,
    });
    let n = match &doc {
        Document::Gram(f) => f.n(),
        Document::Polynomial(g) => g.n(),
    };
    let cfg = engine(common, n);
    let tol = common.tol.unwrap_or_else(|| default_tol(&cfg));
    let hint = |e: Error| -> Failure {
        match e {
            Error::Precondition(m) if !rescale => Failure::input(format!("{m} (or pass --rescale)")),
            e => e.into(),
        }
    };
    let cert = match problem {
        ProblemArg::P1 | ProblemArg::P1q | ProblemArg::P2 => {
            let mut g = match doc {
                Document::Polynomial(g) => g,
                Document::Gram(f) => f.expand(),
            };
            require_finite(&g, false)?;
            if rescale {
                g = scale_to_target_volume(&g, rho(g.n(), g.d())?, &cfg)?;
            }
            if problem == ProblemArg::P2 {
                let target = if g.is_signed() { Convention::Multinomial } else { Convention::Monomial };
                g = g.to_convention(target)?;
                certify_p2(&g, &moment_table(&g, &cfg)?, tol)?
            } else {
                let g = g.to_convention(Convention::Monomial)?;
                certify_p1(&g, &moment_table(&g, &cfg)?, tol).map_err(hint)?
            }
        }
        ProblemArg::P3 => {
            let Document::Gram(mut form) = doc else {
                return Err(Failure::input("the Gram-trace certificate needs a Gram form (a document with \"Q\")"));
            };
            require_finite(&form.expand(), false)?;
            if rescale {
                form = scale_gram_to_target_volume(&form, rho(form.n(), form.d() as f64)?, &cfg)?;
            }
            let m = moment_matrix(&form.expand(), form.d() / 2, 1, &cfg)?;
            certify_p3(&form, &m, tol).map_err(hint)?
        }
    };
    emit(&common.output, &format!("{}\n", cert.to_json()))?;
    certificate_outcome(&cert)
}

fn parse_range(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::input(format!("--n-range: cannot read `{s}`; use `N` or `A..B`"));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo == 0 || hi < lo {
        return Err(Failure::input("--n-range must be a nonempty range of dimensions ≥ 1"));
    }
    Ok((lo..=hi).collect())
}

fn cmd_ball_table(n_range: &str, d_list: &str, output: &Output) -> Outcome {
    let ns = parse_range(n_range)?;
    let ds = d_list
        .split(',')
        .map(|t| t.parse::<Degree>().map_err(|e| Failure::input(format!("--d-list: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for &n in &ns {
        for d in &ds {
            let vol = closed_form_ball_volume(n, d.as_f64())?;
            let axis = closed_form_ball_moment(n, d.as_f64(), 0)?;
            rows.push((n, *d, vol, axis));
        }
    }
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("n;d;volume;axis_moment\n");
            for (n, d, v, m) in &rows {
                let _ = writeln!(s, "{n};{d};{v};{m}");
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(n, d, v, m)| json!({"n": n, "d": d.to_string(), "volume": v, "axis_moment": m}))
                .collect();
            format!("{}\n", serde_json::Value::from(v))
        }
    };
    emit(output, &text)
}

fn cmd_boundary(file: &Path, count: usize, output: &Output) -> Outcome {
    let g = read_polynomial(file)?;
    if g.n() != 2 {
        return Err(Failure::input(format!("boundary sampling needs n = 2, got n = {}", g.n())));
    }
    if count == 0 {
        return Err(Failure::input("--count must be at least 1"));
    }
    let ev = g.evaluator();
    let d = g.d();
    let step = std::f64::consts::TAU / count as f64;
    let points: Vec<[f64; 2]> = (0..count)
        .filter_map(|k| {
            let (s, c) = (k as f64 * step).sin_cos();
            let h = ev.eval(&[c, s]);
            (h > 0.0).then(|| {
                let r = h.powf(-1.0 / d);
                [r * c, r * s]
            })
        })
        .collect();
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("x;y\n");
            for [x, y] in &points {
                let _ = writeln!(s, "{x};{y}");
            }
            s
        }
        Format::Json => format!("{}\n", json!({ "points": points })),
    };
    emit(output, &text)
}
