//! Command-line frontend.
//!
//! Every report carries the SHA-256 of the input quiver file, the seed and
//! the budget caps. CSV reports start with `#` comment lines holding that
//! metadata, followed by a fixed header row.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::coxeter;
use crate::error::{Error, Result};
use crate::kronecker::{self, KroneckerInstance};
use crate::quiver::{Classification, DimVector, Quiver};
use crate::rational::{self, fmt_float, Rational};
use crate::sampler;
use crate::spectral;
use crate::stability::{self, SlopeFunction, Which};
use crate::subrep::{self, Budget, EmbedCache};

/// Environment variable naming a directory that relative `--output` paths
/// are resolved against.
pub const OUTPUT_DIR_VAR: &str = "QUIVER_EXPANDERS_OUTPUT_DIR";

const CSV_COLUMNS: &str = "\
CSV columns:
  epsilon          delta,epsilon,witness
  scan             k,delta,epsilon,witness,running_min
  certify          delta,bound
  subreps          e
  kronecker        delta,zeta,epsilon_bound (--curve); delta,epsilon,delta_slope,epsilon_slope (--translate)
  coxeter          k,dim (--orbit); k,dim,slope,gap (--slopes)
  sample           seed,verdict,violating
  verify-appendix  trial,gamma,threshold,lambda_h,margin,pass";

#[derive(Parser, Debug)]
#[command(
    name = "quiver-expanders",
    about = "Expansion properties of quiver representations",
    after_help = CSV_COLUMNS
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Cap on lattice points enumerated per query.
    #[arg(long, global = true, default_value_t = Budget::default().lattice_points)]
    budget: u64,
    /// Cap on subspace tuples visited by the finite-field search.
    #[arg(long, global = true, default_value_t = Budget::default().subspace_tuples)]
    subspace_budget: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct SlopeOpts {
    /// Use Θ = {d,_}, κ = −(d,_).
    #[arg(long)]
    from_d: bool,
    /// Θ coefficients (rationals `p/q`).
    #[arg(long, num_args = 1.., allow_negative_numbers = true, conflicts_with = "from_d")]
    theta: Vec<String>,
    /// κ coefficients, positive.
    #[arg(long, num_args = 1.., requires = "theta")]
    kappa: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dynkin / extended Dynkin / wild, with the two smallest Cartan eigenvalues.
    Classify { quiver: PathBuf },
    /// Euler, symmetric and antisymmetric form values.
    Form {
        quiver: PathBuf,
        #[arg(long, num_args = 1..)]
        d: Vec<String>,
        #[arg(long, num_args = 1..)]
        e: Vec<String>,
    },
    /// Whether e is a general subrepresentation of d.
    Embeds {
        quiver: PathBuf,
        #[arg(long, num_args = 1..)]
        e: Vec<String>,
        #[arg(long, num_args = 1..)]
        d: Vec<String>,
    },
    /// All general subrepresentation dimension vectors of d.
    Subreps {
        quiver: PathBuf,
        #[arg(long, num_args = 1..)]
        d: Vec<String>,
    },
    /// Expansion coefficient at each δ.
    Epsilon {
        quiver: PathBuf,
        #[arg(long, default_value = "eff")]
        which: String,
        #[arg(long, num_args = 1..)]
        d: Vec<String>,
        #[command(flatten)]
        slope: SlopeOpts,
        /// Comma-separated list of rationals in (0,1).
        #[arg(long)]
        delta: String,
    },
    /// Whether a (δ,ε)-expander of dimension vector d exists.
    Exists {
        quiver: PathBuf,
        #[arg(long, num_args = 1..)]
        d: Vec<String>,
        #[command(flatten)]
        slope: SlopeOpts,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        eps: String,
    },
    /// ε at k·d for k = 1..k_max, with the running minimum.
    Scan {
        quiver: PathBuf,
        #[arg(long, default_value = "eff")]
        which: String,
        #[arg(long, num_args = 1..)]
        d: Vec<String>,
        #[command(flatten)]
        slope: SlopeOpts,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        kmax: u64,
    },
    /// Spectral uniform-expansion certificate and bound table.
    Certify {
        quiver: PathBuf,
        /// Dimension vector; searched for when omitted.
        #[arg(long, num_args = 1..)]
        d: Vec<String>,
        #[arg(long, default_value = "1/10,1/5,3/10,2/5,1/2,3/5,7/10,4/5,9/10")]
        delta: String,
        /// Search cap on t when d is omitted.
        #[arg(long, default_value_t = spectral::DEFAULT_SEARCH_CAP)]
        search_cap: u64,
    },
    /// Closed-form bounds for the m-Kronecker quiver.
    Kronecker {
        #[arg(long)]
        m: u32,
        #[arg(long, num_args = 2)]
        d: Vec<i64>,
        #[arg(long, num_args = 2, default_values_t = [String::from("1"), String::from("1")])]
        kappa: Vec<String>,
        #[arg(
            long,
            conflicts_with = "translate",
            required_unless_present = "translate"
        )]
        curve: bool,
        #[arg(long)]
        translate: bool,
        #[arg(long, default_value = "1/10,1/5,3/10,2/5,1/2,3/5,7/10,4/5,9/10")]
        delta: String,
        #[arg(long, required_if_eq("translate", "true"))]
        eps: Option<String>,
    },
    /// Coxeter transformation, preprojective orbits and slope convergence.
    Coxeter {
        quiver: PathBuf,
        #[arg(long, conflicts_with = "slopes", required_unless_present = "slopes")]
        orbit: bool,
        #[arg(long)]
        slopes: bool,
        /// Vertex name of the projective; defaults to the last vertex.
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        #[arg(long, num_args = 1..)]
        d: Vec<String>,
        #[command(flatten)]
        slope: SlopeOpts,
    },
    /// Random representations over F_p (empirical).
    Sample {
        quiver: PathBuf,
        #[arg(long, num_args = 1..)]
        d: Vec<String>,
        #[arg(long, default_value_t = 101)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: u64,
        /// Test for a subrepresentation of this dimension vector.
        #[arg(long, num_args = 1.., conflicts_with = "check")]
        e: Vec<String>,
        /// Run the empirical expander check.
        #[arg(long, requires_all = ["delta", "eps"])]
        check: bool,
        #[command(flatten)]
        slope: SlopeOpts,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Random-instance check of the hyperplane eigenvalue estimate.
    VerifyAppendix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A rendered report: text, optional CSV body, and JSON body.
struct Report {
    text: String,
    csv: Option<String>,
    json: Value,
}

struct Meta {
    command: &'static str,
    input_sha256: Option<String>,
    seed: Option<u64>,
    budget: Budget,
}

impl Meta {
    /// Sampler verdicts are heuristic; random-instance checks are numerical;
    /// everything else is computed exactly or with a certified margin.
    fn label(&self) -> &'static str {
        match self.command {
            "sample" => sampler::EMPIRICAL,
            "verify-appendix" => "numerical",
            _ => "certified",
        }
    }

    fn json(&self) -> Value {
        json!({
            "label": self.label(),
            "command": self.command,
            "input_sha256": self.input_sha256,
            "seed": self.seed,
            "budget": {
                "lattice_points": self.budget.lattice_points,
                "subspace_tuples": self.budget.subspace_tuples,
            },
        })
    }

    fn line(&self) -> String {
        format!(
            "input-sha256={} seed={} budget=lattice:{},subspace:{}",
            self.input_sha256.as_deref().unwrap_or("none"),
            self.seed.map_or("none".to_string(), |s| s.to_string()),
            self.budget.lattice_points,
            self.budget.subspace_tuples
        )
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn load_quiver(path: &PathBuf) -> Result<(Quiver, String)> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::MalformedInput(format!("cannot read {}: {e}", path.display())))?;
    let src = String::from_utf8(bytes.clone())
        .map_err(|_| Error::MalformedInput(format!("{} is not UTF-8", path.display())))?;
    Ok((Quiver::parse(&src)?, sha256_hex(&bytes)))
}

fn parse_ints(values: &[String], what: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for v in values {
        for part in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            out.push(part.parse::<i64>().map_err(|_| {
                Error::MalformedInput(format!("{what}: {part:?} is not an integer"))
            })?);
        }
    }
    Ok(out)
}

fn parse_dim(q: &Quiver, values: &[String], what: &str) -> Result<DimVector> {
    if values.is_empty() {
        return Err(Error::MalformedInput(format!("--{what} is required")));
    }
    q.dim(parse_ints(values, what)?)
}

fn parse_rationals(values: &[String]) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for v in values {
        out.extend(rational::parse_list(v)?);
    }
    Ok(out)
}

fn parse_deltas(s: &str) -> Result<Vec<Rational>> {
    let deltas = rational::parse_list(s)?;
    if deltas.is_empty() {
        return Err(Error::MalformedInput("--delta is empty".into()));
    }
    Ok(deltas)
}

fn slope_of(q: &Quiver, d: Option<&DimVector>, opts: &SlopeOpts) -> Result<SlopeFunction> {
    if opts.from_d {
        let d = d.ok_or_else(|| Error::MalformedInput("--from-d needs --d".into()))?;
        return stability::slope_from_d(q, d);
    }
    if opts.theta.is_empty() {
        return Err(Error::MalformedInput(
            "a slope is required: --from-d or --theta/--kappa".into(),
        ));
    }
    let theta = parse_rationals(&opts.theta)?;
    let kappa = parse_rationals(&opts.kappa)?;
    for (name, v) in [("theta", &theta), ("kappa", &kappa)] {
        if v.len() != q.vertex_count() {
            return Err(Error::MalformedInput(format!(
                "--{name} has {} entries for {} vertices",
                v.len(),
                q.vertex_count()
            )));
        }
    }
    SlopeFunction::new(theta, kappa)
}

fn which_of(s: &str) -> Result<Which> {
    s.parse()
}

fn csv_field_dim(d: &DimVector) -> String {
    format!("\"{d}\"")
}

fn spectrum_text(q: &Quiver, class: Classification) -> Result<String> {
    let spec = spectral::cartan_spectrum(q)?;
    let ev = &spec.eigenvalues;
    let mut s = format!("{class}; \u{3bb}1={}", fmt_float(ev[0]));
    if let Some(l2) = ev.get(1) {
        s.push_str(&format!(", \u{3bb}2={}", fmt_float(*l2)));
    }
    Ok(s)
}

fn cmd_classify(q: &Quiver) -> Result<Report> {
    let comps = q.classify();
    if comps.len() == 1 {
        let class = comps[0].class;
        let spec = spectral::cartan_spectrum(q)?;
        return Ok(Report {
            text: spectrum_text(q, class)?,
            csv: None,
            json: json!({
                "class": class.to_string(),
                "eigenvalues": spec.eigenvalues,
            }),
        });
    }
    let mut text = Vec::new();
    let mut items = Vec::new();
    for c in &comps {
        let names: Vec<&str> = c.vertices.iter().map(String::as_str).collect();
        text.push(format!("{{{}}}: {}", names.join(","), c.class));
        items.push(json!({"vertices": names, "class": c.class.to_string()}));
    }
    Ok(Report {
        text: format!("Disconnected\n{}", text.join("\n")),
        csv: None,
        json: json!({"class": "Disconnected", "components": items}),
    })
}

fn cmd_form(q: &Quiver, d: &DimVector, e: &DimVector) -> Result<Report> {
    let euler = q.euler_form(d, e)?;
    let sym = q.sym_form(d, e)?;
    let anti = q.antisym_form(d, e)?;
    Ok(Report {
        text: format!("euler={euler} sym={sym} antisym={anti}"),
        csv: Some(format!("euler,sym,antisym\n{euler},{sym},{anti}\n")),
        json: json!({"d": d, "e": e, "euler": euler, "sym": sym, "antisym": anti}),
    })
}

fn cmd_epsilon(
    q: &Quiver,
    mu: &SlopeFunction,
    d: &DimVector,
    deltas: &[Rational],
    which: Which,
    cache: &EmbedCache,
) -> Result<Report> {
    let mut text = Vec::new();
    let mut csv = String::from("delta,epsilon,witness\n");
    let mut items = Vec::new();
    for delta in deltas {
        let res = stability::epsilon(q, mu, d, delta, which, cache)?;
        let mut line = res.value.to_string();
        if let Some(w) = &res.witness {
            line.push_str(&format!(" witness {w}"));
        }
        text.push(if deltas.len() == 1 {
            line
        } else {
            format!("delta={delta}: {line}")
        });
        csv.push_str(&format!(
            "{delta},{},{}\n",
            res.value,
            res.witness.as_ref().map(csv_field_dim).unwrap_or_default()
        ));
        items.push(
            json!({"delta": delta.to_string(), "epsilon": res.value, "witness": res.witness}),
        );
    }
    Ok(Report {
        text: text.join("\n"),
        csv: Some(csv),
        json: json!({"which": which, "d": d, "results": items}),
    })
}

fn cmd_certify(q: &Quiver, d: Option<DimVector>, deltas: &[Rational], cap: u64) -> Result<Report> {
    let cert = match d {
        Some(d) => spectral::certificate(q, &d)?,
        None => spectral::find_expander_dimvector(q, cap)?.1,
    };
    let table = cert.bound_table(deltas);
    let mut text = format!(
        "valid certificate for d={}\nlambda1={} lambda2={} gamma={} threshold={} lambda_H={} C={}\ndelta bound",
        cert.d,
        fmt_float(cert.lambda1),
        fmt_float(cert.lambda2),
        fmt_float(cert.gamma),
        fmt_float(cert.gamma_threshold),
        cert.lambda_h.map_or("none".to_string(), fmt_float),
        fmt_float(cert.c_constant)
    );
    let mut csv = String::from("delta,bound\n");
    for (delta, b) in &table {
        text.push_str(&format!("\n{delta} {}", fmt_float(*b)));
        csv.push_str(&format!("{delta},{}\n", fmt_float(*b)));
    }
    let rows: Vec<Value> = table
        .iter()
        .map(|(delta, b)| json!({"delta": delta.to_string(), "bound": b}))
        .collect();
    Ok(Report {
        text,
        csv: Some(csv),
        json: json!({"certificate": cert, "bounds": rows}),
    })
}

#[derive(Serialize)]
struct SampleRow {
    seed: u64,
    verdict: Value,
}

fn budget_from(g: &GlobalOpts) -> Budget {
    Budget {
        lattice_points: g.budget,
        subspace_tuples: g.subspace_budget,
    }
}

fn execute(cli: &Cli) -> Result<(Report, Meta)> {
    let budget = budget_from(&cli.global);
    let meta = |command, input_sha256, seed| Meta {
        command,
        input_sha256,
        seed,
        budget,
    };
    Ok(match &cli.command {
        Command::Classify { quiver } => {
            let (q, h) = load_quiver(quiver)?;
            (cmd_classify(&q)?, meta("classify", Some(h), None))
        }
        Command::Form { quiver, d, e } => {
            let (q, h) = load_quiver(quiver)?;
            let d = parse_dim(&q, d, "d")?;
            let e = parse_dim(&q, e, "e")?;
            (cmd_form(&q, &d, &e)?, meta("form", Some(h), None))
        }
        Command::Embeds { quiver, e, d } => {
            let (q, h) = load_quiver(quiver)?;
            let e = parse_dim(&q, e, "e")?;
            let d = parse_dim(&q, d, "d")?;
            let cache = EmbedCache::with_budget(&q, budget);
            let ans = subrep::embeds(&q, &e, &d, &cache)?;
            let report = Report {
                text: ans.to_string(),
                csv: Some(format!(
                    "e,d,embeds\n{},{},{ans}\n",
                    csv_field_dim(&e),
                    csv_field_dim(&d)
                )),
                json: json!({"e": e, "d": d, "embeds": ans}),
            };
            (report, meta("embeds", Some(h), None))
        }
        Command::Subreps { quiver, d } => {
            let (q, h) = load_quiver(quiver)?;
            let d = parse_dim(&q, d, "d")?;
            let cache = EmbedCache::with_budget(&q, budget);
            let subs = subrep::general_subreps(&q, &d, &cache)?;
            let text: Vec<String> = subs.iter().map(|s| s.to_string()).collect();
            let mut csv = String::from("e\n");
            for s in &subs {
                csv.push_str(&format!("{}\n", csv_field_dim(s)));
            }
            let report = Report {
                text: text.join("\n"),
                csv: Some(csv),
                json: json!({"d": d, "subreps": subs}),
            };
            (report, meta("subreps", Some(h), None))
        }
        Command::Epsilon {
            quiver,
            which,
            d,
            slope,
            delta,
        } => {
            let (q, h) = load_quiver(quiver)?;
            let which = which_of(which)?;
            let d = parse_dim(&q, d, "d")?;
            let mu = slope_of(&q, Some(&d), slope)?;
            let deltas = parse_deltas(delta)?;
            let cache = EmbedCache::with_budget(&q, budget);
            (
                cmd_epsilon(&q, &mu, &d, &deltas, which, &cache)?,
                meta("epsilon", Some(h), None),
            )
        }
        Command::Exists {
            quiver,
            d,
            slope,
            delta,
            eps,
        } => {
            let (q, h) = load_quiver(quiver)?;
            let d = parse_dim(&q, d, "d")?;
            let mu = slope_of(&q, Some(&d), slope)?;
            let delta = rational::parse(delta)?;
            let eps = rational::parse(eps)?;
            let cache = EmbedCache::with_budget(&q, budget);
            let v = stability::expander_exists(&q, &mu, &d, &delta, &eps, &cache)?;
            let text = match &v.violating {
                None => "exists".to_string(),
                Some(e) => format!("does not exist; violating {e}"),
            };
            let report = Report {
                text,
                csv: Some(format!(
                    "exists,violating\n{},{}\n",
                    v.exists,
                    v.violating.as_ref().map(csv_field_dim).unwrap_or_default()
                )),
                json: json!({"d": d, "delta": delta.to_string(), "eps": eps.to_string(), "verdict": v}),
            };
            (report, meta("exists", Some(h), None))
        }
        Command::Scan {
            quiver,
            which,
            d,
            slope,
            delta,
            kmax,
        } => {
            let (q, h) = load_quiver(quiver)?;
            let which = which_of(which)?;
            let d = parse_dim(&q, d, "d")?;
            let mu = slope_of(&q, Some(&d), slope)?;
            let deltas = parse_deltas(delta)?;
            let cache = EmbedCache::with_budget(&q, budget);
            let mut all = Vec::new();
            for delta in &deltas {
                all.push((
                    *delta,
                    stability::uniform_scan(&q, &mu, &d, delta, *kmax, which, &cache)?,
                ));
            }
            let csv = stability::scan_csv(&all);
            let mut text = Vec::new();
            for (delta, rows) in &all {
                for r in rows {
                    text.push(format!(
                        "delta={delta} k={} epsilon={} running_min={}",
                        r.k, r.result.value, r.running_min
                    ));
                }
            }
            let json_rows: Vec<Value> = all
                .iter()
                .map(|(delta, rows)| json!({"delta": delta.to_string(), "rows": rows}))
                .collect();
            let report = Report {
                text: text.join("\n"),
                csv: Some(csv),
                json: json!({"which": which, "d": d, "scan": json_rows}),
            };
            (report, meta("scan", Some(h), None))
        }
        Command::Certify {
            quiver,
            d,
            delta,
            search_cap,
        } => {
            let (q, h) = load_quiver(quiver)?;
            let d = if d.is_empty() {
                None
            } else {
                Some(parse_dim(&q, d, "d")?)
            };
            let deltas = parse_deltas(delta)?;
            (
                cmd_certify(&q, d, &deltas, *search_cap)?,
                meta("certify", Some(h), None),
            )
        }
        Command::Kronecker {
            m,
            d,
            kappa,
            curve,
            translate: _,
            delta,
            eps,
        } => {
            let kappa = parse_rationals(kappa)?;
            let inst = KroneckerInstance::new(*m, d[0], d[1], kappa[0], kappa[1])?;
            let deltas = parse_deltas(delta)?;
            let report = if *curve {
                let csv = kronecker::curve_csv(&inst, &deltas)?;
                let mut text = Vec::new();
                let mut rows = Vec::new();
                for delta in &deltas {
                    let x = rational::to_f64(delta);
                    let z = kronecker::zeta(inst.m, inst.alpha(), x)?;
                    let b = kronecker::epsilon_bound(&inst, x)?;
                    text.push(format!(
                        "delta={delta} zeta={} epsilon_bound={}",
                        fmt_float(z),
                        fmt_float(b)
                    ));
                    rows.push(json!({"delta": delta.to_string(), "zeta": z, "epsilon_bound": b}));
                }
                Report {
                    text: text.join("\n"),
                    csv: Some(csv),
                    json: json!({"instance": inst, "curve": rows}),
                }
            } else {
                let eps = rational::parse(eps.as_deref().unwrap_or_default())?;
                let mut text = Vec::new();
                let mut csv = String::from("delta,epsilon,delta_slope,epsilon_slope\n");
                let mut rows = Vec::new();
                for delta in &deltas {
                    let (dp, ep) = kronecker::translate_delta_eps(&inst, delta, &eps)?;
                    text.push(format!("({delta}, {eps}) -> ({dp}, {ep})"));
                    csv.push_str(&format!("{delta},{eps},{dp},{ep}\n"));
                    rows.push(json!({
                        "delta": delta.to_string(),
                        "epsilon": eps.to_string(),
                        "delta_slope": dp.to_string(),
                        "epsilon_slope": ep.to_string(),
                    }));
                }
                Report {
                    text: text.join("\n"),
                    csv: Some(csv),
                    json: json!({"instance": inst, "translate": rows}),
                }
            };
            (report, meta("kronecker", None, None))
        }
        Command::Coxeter {
            quiver,
            orbit,
            slopes: _,
            vertex,
            nmax,
            d,
            slope,
        } => {
            let (q, h) = load_quiver(quiver)?;
            let i = match vertex {
                Some(name) => q
                    .vertex_index(name)
                    .ok_or_else(|| Error::MalformedInput(format!("unknown vertex {name:?}")))?,
                None => q.vertex_count() - 1,
            };
            let d = if d.is_empty() {
                None
            } else {
                Some(parse_dim(&q, d, "d")?)
            };
            let report = if *orbit {
                let cox = coxeter::coxeter(&q)?;
                let orb = coxeter::tau_orbit(&q, i, *nmax)?;
                let mut csv = String::from("k,dim\n");
                let mut text = vec![
                    format!("{}; rho={}", cox.class, fmt_float(cox.rho)),
                    format!("phi_inv={:?}", cox.phi_inv),
                ];
                for (k, x) in orb.iter().enumerate() {
                    csv.push_str(&format!("{k},{}\n", csv_field_dim(x)));
                    text.push(format!("{k} {x}"));
                }
                Report {
                    text: text.join("\n"),
                    csv: Some(csv),
                    json: json!({"coxeter": cox, "vertex": q.vertex_names()[i], "orbit": orb}),
                }
            } else {
                let mu = slope_of(&q, d.as_ref(), slope)?;
                let rep = coxeter::slope_convergence_report(&q, &mu, i, *nmax)?;
                let mut text = vec![format!(
                    "rho={} limit_slope={} lambda_fit={}",
                    fmt_float(rep.rho),
                    fmt_float(rep.limit_slope),
                    fmt_float(rep.lambda_fit)
                )];
                for r in &rep.rows {
                    text.push(format!(
                        "{} {} {} {}",
                        r.k,
                        r.dim,
                        r.slope,
                        fmt_float(r.gap)
                    ));
                }
                Report {
                    text: text.join("\n"),
                    csv: Some(coxeter::slopes_csv(&rep)),
                    json: serde_json::to_value(&rep).expect("serializable"),
                }
            };
            (report, meta("coxeter", Some(h), None))
        }
        Command::Sample {
            quiver,
            d,
            p,
            seed,
            samples,
            e,
            check,
            slope,
            delta,
            eps,
        } => {
            let (q, h) = load_quiver(quiver)?;
            let d = parse_dim(&q, d, "d")?;
            let e = if e.is_empty() {
                None
            } else {
                Some(parse_dim(&q, e, "e")?)
            };
            let check_args = if *check {
                let mu = slope_of(&q, Some(&d), slope)?;
                let delta = rational::parse(delta.as_deref().unwrap_or_default())?;
                let eps = rational::parse(eps.as_deref().unwrap_or_default())?;
                Some((mu, delta, eps))
            } else {
                None
            };
            let mut rows = Vec::new();
            let mut text = Vec::new();
            let mut csv = String::from("seed,verdict,violating\n");
            for s in *seed..seed.saturating_add(*samples) {
                let v = sampler::sample_rep(&q, &d, *p, s)?;
                let (verdict, short, violating) = if let Some((mu, delta, eps)) = &check_args {
                    let r = sampler::empirical_expander_check(&v, mu, delta, eps, &budget)?;
                    let short = if r.pass { "pass" } else { "fail" };
                    let viol = r.violating.clone();
                    (
                        serde_json::to_value(&r).expect("serializable"),
                        short.to_string(),
                        viol,
                    )
                } else if let Some(e) = &e {
                    let w = sampler::has_subrep(&v, e, &budget)?;
                    let short = if w.is_some() { "found" } else { "none" };
                    (
                        json!({"e": e, "found": w.is_some(), "witness": w, "label": sampler::EMPIRICAL}),
                        short.to_string(),
                        None,
                    )
                } else {
                    let dims = sampler::all_subrep_dims(&v, &budget)?;
                    let short = dims
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ");
                    (
                        json!({"subrep_dims": dims, "label": sampler::EMPIRICAL}),
                        short,
                        None,
                    )
                };
                text.push(format!(
                    "seed={s} {short}{}",
                    violating
                        .as_ref()
                        .map(|x| format!(" violating {x}"))
                        .unwrap_or_default()
                ));
                csv.push_str(&format!(
                    "{s},\"{short}\",{}\n",
                    violating.as_ref().map(csv_field_dim).unwrap_or_default()
                ));
                rows.push(SampleRow { seed: s, verdict });
            }
            text.push(format!("({} verdicts)", sampler::EMPIRICAL));
            let report = Report {
                text: text.join("\n"),
                csv: Some(csv),
                json: json!({"label": sampler::EMPIRICAL, "p": p, "d": d, "samples": rows}),
            };
            (report, meta("sample", Some(h), Some(*seed)))
        }
        Command::VerifyAppendix { n, trials, seed } => {
            let rep = spectral::verify_appendix_lemma(*n, *trials, *seed)?;
            let mut csv = String::from("trial,gamma,threshold,lambda_h,margin,pass\n");
            for t in &rep.per_trial {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    t.trial,
                    fmt_float(t.gamma),
                    fmt_float(t.threshold),
                    fmt_float(t.lambda_h),
                    fmt_float(t.margin),
                    t.pass
                ));
            }
            let report = Report {
                text: format!(
                    "{}/{} pass; worst margin {}",
                    rep.passed,
                    rep.trials,
                    fmt_float(rep.worst_margin)
                ),
                csv: Some(csv),
                json: serde_json::to_value(&rep).expect("serializable"),
            };
            (report, meta("verify-appendix", None, Some(*seed)))
        }
    })
}

fn render(format: Format, report: Report, meta: &Meta) -> Result<String> {
    Ok(match format {
        Format::Text => format!("{}\n# {}\n", report.text, meta.line()),
        Format::Csv => {
            let body = report.csv.ok_or_else(|| {
                Error::MalformedInput(format!(
                    "--format csv is not available for {}",
                    meta.command
                ))
            })?;
            format!("# {}\n{body}", meta.line())
        }
        Format::Json => {
            let mut v = json!({"meta": meta.json(), "report": report.json});
            if let Value::Object(m) = &mut v {
                m.sort_keys();
            }
            format!(
                "{}\n",
                serde_json::to_string_pretty(&v).expect("serializable")
            )
        }
    })
}

fn resolve_output(path: &PathBuf, dir: Option<&str>) -> PathBuf {
    match dir {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

/// Runs the CLI on `args` (including the program name), writing the report
/// to `out` (unless `--output` is given) and diagnostics to `err`. Returns
/// the exit code: 0 on success, 1 on domain errors, 2 on budget errors.
pub fn run_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if cli.global.format == Format::Csv && matches!(cli.command, Command::Classify { .. }) {
        let _ = writeln!(
            err,
            "MalformedInput: --format csv is not available for classify"
        );
        return 1;
    }
    let result = execute(&cli).and_then(|(report, meta)| render(cli.global.format, report, &meta));
    match result {
        Ok(text) => match &cli.global.output {
            Some(path) => {
                let dir = std::env::var(OUTPUT_DIR_VAR).ok();
                let path = resolve_output(path, dir.as_deref());
                match std::fs::write(&path, text) {
                    Ok(()) => 0,
                    Err(e) => {
                        let _ =
                            writeln!(err, "MalformedInput: cannot write {}: {e}", path.display());
                        1
                    }
                }
            }
            None => {
                let _ = out.write_all(text.as_bytes());
                0
            }
        },
        Err(e) => {
            let _ = writeln!(err, "{e}");
            if e.is_budget() {
                2
            } else {
                1
            }
        }
    }
}

pub fn run(args: &[String]) -> i32 {
    run_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &[&str]) -> Vec<String> {
        std::iter::once("quiver-expanders")
            .chain(s.iter().copied())
            .map(String::from)
            .collect()
    }

    #[test]
    fn integer_lists_accept_commas_and_spaces() {
        let v = parse_ints(&["1,2".into(), "3".into()], "d").unwrap();
        assert_eq!(v, vec![1, 2, 3]);
        assert!(parse_ints(&["x".into()], "d").is_err());
    }

    #[test]
    fn unknown_flags_are_rejected() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(&args(&["classify", "--bogus", "x"]), &mut out, &mut err);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
    }

    #[test]
    fn output_dir_override() {
        assert_eq!(
            resolve_output(&PathBuf::from("a.csv"), Some("/tmp/x")),
            PathBuf::from("/tmp/x/a.csv")
        );
        assert_eq!(
            resolve_output(&PathBuf::from("/abs.csv"), Some("/tmp/x")),
            PathBuf::from("/abs.csv")
        );
        assert_eq!(
            resolve_output(&PathBuf::from("a.csv"), None),
            PathBuf::from("a.csv")
        );
    }

    #[test]
    fn appendix_without_input_file() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(
            &args(&[
                "verify-appendix",
                "--n",
                "3",
                "--trials",
                "20",
                "--seed",
                "1",
            ]),
            &mut out,
            &mut err,
        );
        assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("20/20 pass; worst margin "));
        assert!(text.contains("input-sha256=none seed=1"));
    }
}
