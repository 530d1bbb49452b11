use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use serde_json::json;

use slgal::asymptotics::{classify_lambda, sufficiency_case, SpectrumTag};
use slgal::eigenfunction::{build_eigenfunction, eval_eigenfunction};
use slgal::error::{Error, Result};
use slgal::frobenius::p_symbol;
use slgal::kimura::{candidate_eigenvalues, default_window, is_triangularizable, KIMURA_TOL};
use slgal::monodromy::{monodromy_pair, ANGLE_TOL};
use slgal::oracle::{default_l, shoot, verify};
use slgal::problem::{make_allen_cahn, make_hulthen, parse_problem, SLProblem};
use slgal::spectra_report::{
    region_grid, region_to_csv, sweep_allen_cahn, sweep_hulthen, sweep_to_csv,
};

#[derive(Parser)]
#[command(name = "slgal", version, about = "Spectra of line eigenvalue problems over heteroclinic profiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// built-in family: hulthen | allen_cahn
    #[arg(long)]
    family: Option<String>,
    /// comma-separated family parameters
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// JSON problem description file
    #[arg(long)]
    problem: Option<std::path::PathBuf>,
    /// write output here instead of standard output
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Endpoint data, spectrum class at a lambda, and the singularity symbol
    Analyze {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// print the three-point exponent table instead of the JSON report
        #[arg(long)]
        psymbol: bool,
    },
    /// Discrete eigenvalues by the closed-form enumeration
    Eigenvalues {
        #[command(flatten)]
        problem: ProblemArgs,
        /// search window lo:hi (default: decay window)
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        /// confirm each value with the shooting oracle
        #[arg(long, default_value_t = true)]
        cross_check: bool,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        /// json | csv
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Sample an explicit eigenfunction as CSV
    Eigenfunction {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// sampling grid lo:hi:step
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// rescale so max |psi| = 1
        #[arg(long)]
        normalize: bool,
    },
    /// Monodromy matrices around both endpoints and the verdict
    Monodromy {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = ANGLE_TOL)]
        tol: f64,
    },
    /// Cross-method verification report at one lambda
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// Eigenvalue branches against a family parameter (CSV)
    Sweep {
        /// hulthen | allen_cahn
        #[arg(long)]
        family: String,
        /// fixed parameters: hulthen takes a1,a3; allen_cahn none
        #[arg(long)]
        params: Option<String>,
        /// swept parameter range lo:hi
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 11)]
        grid: usize,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Spectrum-classification raster over complex lambda (CSV)
    Region {
        #[command(flatten)]
        problem: ProblemArgs,
        /// real range lo:hi
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        /// imaginary range lo:hi
        #[arg(long, allow_hyphen_values = true)]
        im: String,
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
}

fn parse_lambda(s: &str) -> Result<C64> {
    let t = s.trim().replace(' ', "");
    if let Ok(re) = t.parse::<f64>() {
        return Ok(C64::new(re, 0.0));
    }
    // a+bi / a-bi
    if let Some(body) = t.strip_suffix('i') {
        // split at the last +/- that is not an exponent sign or leading
        let bytes = body.as_bytes();
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                let re: f64 = body[..i]
                    .parse()
                    .map_err(|_| Error::Config(format!("bad lambda '{s}'")))?;
                let imtxt = &body[i..];
                let im: f64 = if imtxt == "+" {
                    1.0
                } else if imtxt == "-" {
                    -1.0
                } else {
                    imtxt
                        .parse()
                        .map_err(|_| Error::Config(format!("bad lambda '{s}'")))?
                };
                return Ok(C64::new(re, im));
            }
        }
        let im: f64 = if body.is_empty() || body == "+" {
            1.0
        } else if body == "-" {
            -1.0
        } else {
            body.parse()
                .map_err(|_| Error::Config(format!("bad lambda '{s}'")))?
        };
        return Ok(C64::new(0.0, im));
    }
    Err(Error::Config(format!("bad lambda '{s}' (use a or a+bi)")))
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!("bad range '{s}' (use lo:hi)")));
    }
    let lo = parts[0]
        .parse()
        .map_err(|_| Error::Config(format!("bad range '{s}'")))?;
    let hi = parts[1]
        .parse()
        .map_err(|_| Error::Config(format!("bad range '{s}'")))?;
    Ok((lo, hi))
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("bad grid '{s}' (use lo:hi:step)")));
    }
    let v: Result<Vec<f64>> = parts
        .iter()
        .map(|p| {
            p.parse()
                .map_err(|_| Error::Config(format!("bad grid '{s}'")))
        })
        .collect();
    let v = v?;
    if v[2] <= 0.0 || v[1] < v[0] {
        return Err(Error::Config(format!("bad grid '{s}'")));
    }
    Ok((v[0], v[1], v[2]))
}

fn load_problem(a: &ProblemArgs) -> Result<SLProblem> {
    match (&a.family, &a.problem) {
        (Some(_), Some(_)) => Err(Error::Config(
            "give either --family or --problem, not both".into(),
        )),
        (None, None) => Err(Error::Config("no problem source (--family or --problem)".into())),
        (None, Some(path)) => {
            let doc = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_problem(&doc)
        }
        (Some(fam), None) => {
            let params: Vec<f64> = a
                .params
                .as_deref()
                .unwrap_or("")
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad parameter '{t}'")))
                })
                .collect::<Result<_>>()?;
            match fam.as_str() {
                "hulthen" => {
                    if params.len() != 3 {
                        return Err(Error::Config("hulthen takes three parameters".into()));
                    }
                    make_hulthen(params[0], params[1], params[2])
                }
                "allen_cahn" => {
                    if params.len() != 1 {
                        return Err(Error::Config("allen_cahn takes one parameter".into()));
                    }
                    make_allen_cahn(params[0])
                }
                other => Err(Error::Config(format!("unknown family '{other}'"))),
            }
        }
    }
}

fn emit(out: &Option<std::path::PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze {
            problem,
            lambda,
            psymbol,
        } => {
            let p = load_problem(&problem)?;
            let l = parse_lambda(&lambda)?;
            if psymbol {
                let ps = p_symbol(&p, l)?;
                let loc = |pt: &slgal::frobenius::SingularPoint| match pt.location {
                    slgal::frobenius::Location::Finite(z) => format!("z = {z}"),
                    slgal::frobenius::Location::Infinity => "z = infinity".into(),
                };
                let mut table = format!("{:<26}{:<30}{:<30}\n", "point", "rho_plus", "rho_minus");
                for i in 0..3 {
                    table.push_str(&format!(
                        "{:<26}{:<30}{:<30}\n",
                        loc(&ps.points[i]),
                        format!("{}", ps.exponents[i].0),
                        format!("{}", ps.exponents[i].1),
                    ));
                }
                return emit(&problem.out, table.trim_end());
            }
            let d = p.endpoint_data();
            let cl = classify_lambda(&d, l);
            let class = match cl.tag {
                SpectrumTag::DiscreteCandidate => "DiscreteCandidate",
                SpectrumTag::ContinuousSpectrum => "ContinuousSpectrum",
                SpectrumTag::NotEigenvalue => "NotEigenvalue",
            };
            let doc = json!({
                "class": class,
                "boundary": cl.boundary,
                "endpoint_data": d,
                "sufficiency_case": sufficiency_case(&d),
                "side_minus": cl.minus,
                "side_plus": cl.plus,
                "kimura": is_triangularizable(&p, l, KIMURA_TOL).ok(),
            });
            emit(&problem.out, &serde_json::to_string_pretty(&doc).unwrap())
        }
        Command::Eigenvalues {
            problem,
            range,
            cross_check,
            tol,
            format,
        } => {
            if format != "json" && format != "csv" {
                return Err(Error::Config(format!("unknown format '{format}'")));
            }
            let p = load_problem(&problem)?;
            let (lo, hi) = match range {
                Some(r) => parse_pair(&r)?,
                None => default_window(&p),
            };
            let cands = candidate_eigenvalues(&p, lo, hi)?;
            let mut kept = Vec::new();
            for c in cands {
                let miss = if cross_check {
                    Some(shoot(&p, c.lambda, default_l(&p, c.lambda))?.miss.norm())
                } else {
                    None
                };
                if miss.map(|m| m < tol).unwrap_or(true) {
                    kept.push((c, miss));
                }
            }
            if format == "csv" {
                let mut csv = String::from("k,lambda_re,lambda_im,sqrt_lambda,miss\n");
                for (c, miss) in kept {
                    let sq = if c.lambda.re >= 0.0 {
                        c.lambda.re.sqrt().to_string()
                    } else {
                        String::new()
                    };
                    let m = miss.map(|m| m.to_string()).unwrap_or_default();
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        c.k, c.lambda.re, c.lambda.im, sq, m
                    ));
                }
                return emit(&problem.out, csv.trim_end());
            }
            let rows: Vec<_> = kept
                .into_iter()
                .map(|(c, miss)| {
                    json!({
                        "lambda": {"re": c.lambda.re, "im": c.lambda.im},
                        "sqrt_lambda": if c.lambda.re >= 0.0 { Some(c.lambda.re.sqrt()) } else { None },
                        "k": c.k,
                        "sign_pattern": c.sign_pattern,
                        "kimura_distance": c.kimura_distance,
                        "miss": miss,
                        "verified": true,
                    })
                })
                .collect();
            emit(
                &problem.out,
                &serde_json::to_string_pretty(&json!(rows)).unwrap(),
            )
        }
        Command::Eigenfunction {
            problem,
            lambda,
            x,
            normalize,
        } => {
            let p = load_problem(&problem)?;
            let l = parse_lambda(&lambda)?;
            let (lo, hi, step) = parse_triple(&x)?;
            let ef = build_eigenfunction(&p, l)?.ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "no explicit eigenfunction at lambda = {l} (not an accepted candidate)"
                ))
            })?;
            let n = ((hi - lo) / step).round() as usize;
            let mut vals = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let xi = lo + step * i as f64;
                vals.push((xi, eval_eigenfunction(&ef, &p, xi)));
            }
            let scale = if normalize {
                vals.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max).max(1e-300)
            } else {
                1.0
            };
            let mut csv = String::from("x,psi_re,psi_im\n");
            for (xi, v) in vals {
                csv.push_str(&format!("{},{},{}\n", xi, v.re / scale, v.im / scale));
            }
            emit(&problem.out, csv.trim_end())
        }
        Command::Monodromy {
            problem,
            lambda,
            tol,
        } => {
            let p = load_problem(&problem)?;
            let l = parse_lambda(&lambda)?;
            let r = monodromy_pair(&p, l, tol)?;
            let ev = |m: &slgal::matrix::Matrix2C| {
                let (e1, e2) = m.eigenvalues();
                json!([{"re": e1.re, "im": e1.im}, {"re": e2.re, "im": e2.im}])
            };
            let doc = json!({
                "result": r,
                "eigenvalues_minus": ev(&r.m_minus),
                "eigenvalues_plus": ev(&r.m_plus),
            });
            emit(&problem.out, &serde_json::to_string_pretty(&doc).unwrap())
        }
        Command::Verify {
            problem,
            lambda,
            tol,
        } => {
            let p = load_problem(&problem)?;
            let l = parse_lambda(&lambda)?;
            let r = verify(&p, l, tol)?;
            emit(&problem.out, &serde_json::to_string_pretty(&r).unwrap())
        }
        Command::Sweep {
            family,
            params,
            range,
            grid,
            out,
        } => {
            let (lo, hi) = parse_pair(&range)?;
            let table = match family.as_str() {
                "hulthen" => {
                    let ps: Vec<f64> = params
                        .as_deref()
                        .ok_or_else(|| Error::Config("hulthen sweep needs --params a1,a3".into()))?
                        .split(',')
                        .map(|t| {
                            t.trim()
                                .parse()
                                .map_err(|_| Error::Config(format!("bad parameter '{t}'")))
                        })
                        .collect::<Result<_>>()?;
                    if ps.len() != 2 {
                        return Err(Error::Config("hulthen sweep needs --params a1,a3".into()));
                    }
                    sweep_hulthen(ps[0], ps[1], (lo, hi), grid)?
                }
                "allen_cahn" => sweep_allen_cahn((lo, hi), grid)?,
                other => return Err(Error::Config(format!("unknown family '{other}'"))),
            };
            emit(&out, sweep_to_csv(&table).trim_end())
        }
        Command::Region {
            problem,
            re,
            im,
            grid,
        } => {
            let p = load_problem(&problem)?;
            let g = region_grid(&p, parse_pair(&re)?, parse_pair(&im)?, grid)?;
            emit(&problem.out, region_to_csv(&g).trim_end())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let doc = json!({"error": format!("{e}"), "kind": e.kind()});
            eprintln!("{}", serde_json::to_string(&doc).unwrap());
            ExitCode::FAILURE
        }
    }
}
