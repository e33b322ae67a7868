use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use qgl11::dsl::{self, Value as DslValue};
use qgl11::hopf::{coproduct, coproduct_z, drinfeld_coproduct};
use qgl11::matrix::QMatrix;
use qgl11::pairing::{pair_closed_elements, pair_oracle};
use qgl11::repr::{
    a11_over_t, baxter_check, rep_pi_a, rep_pi_cd, rep_rho, transfer_ops, Representation,
};
use qgl11::rmatrix::evaluate_r_projective;
use qgl11::scalars::{parse_rational, specialize_q};
use qgl11::suites::{run_suite, SuiteOptions, SUITES};
use qgl11::{Element, LaurentSeries, Letter, QScalar, Rational, TensorElement};

#[derive(Parser)]
#[command(
    name = "qgl11",
    version,
    about = "Exact computations in quantum affine gl(1|1)"
)]
struct Cli {
    /// Specialize printed scalars at this rational value of q.
    #[arg(long, global = true)]
    q: Option<String>,
    /// JSON file presetting order, seed, samples, parameter sets and suites.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of an expression.
    Nf { expr: String },
    /// Coproduct of an element.
    Coproduct {
        expr: String,
        /// z-graded coproduct.
        #[arg(long, group = "kind")]
        z: bool,
        /// z-graded opposite coproduct.
        #[arg(long, group = "kind")]
        cop: bool,
        /// Drinfeld new coproduct of a single generator.
        #[arg(long, group = "kind")]
        drinfeld: bool,
        #[arg(long, default_value_t = 3)]
        order: i64,
    },
    /// Hopf pairing of an element of A with an element of B.
    Pair {
        a: String,
        b: String,
        /// Use the axiom-driven oracle instead of the closed form.
        #[arg(long)]
        oracle: bool,
    },
    /// Truncated R(z) on a pair of representations (rho, pi(a), pi(c,d)).
    Rmatrix {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        order: Option<i64>,
    },
    /// Transfer-operator blocks A_ij(z) on a chain.
    Transfer(ChainArgs),
    /// Degree bounds for the normalized diagonal blocks on a chain.
    Baxter(ChainArgs),
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        index_bound: Option<i64>,
        /// Drop the Koszul sign of the flip (braid negative control).
        #[arg(long)]
        unsigned_flip: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    a: Option<String>,
    /// Sites as `(c,d);(c,d);...`.
    #[arg(long)]
    chain: Option<String>,
    #[arg(long)]
    order: Option<i64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    order: Option<i64>,
    seed: Option<u64>,
    samples: Option<usize>,
    index_bound: Option<i64>,
    a: Option<String>,
    /// `"c,d"` strings.
    params: Option<Vec<String>>,
    /// `"(c,d);(c,d)"` strings.
    chains: Option<Vec<String>>,
    suites: Option<Vec<String>>,
}

fn load_config(path: &Option<PathBuf>) -> Result<Config> {
    let Some(p) = path else {
        return Ok(Config::default());
    };
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
}

fn rational(s: &str) -> Result<Rational> {
    Ok(parse_rational(s)?)
}

fn pair_of(s: &str) -> Result<(Rational, Rational)> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (c, d) = inner
        .split_once(',')
        .ok_or_else(|| anyhow!("expected c,d in {s:?}"))?;
    Ok((rational(c)?, rational(d)?))
}

fn parse_chain(s: &str) -> Result<Vec<(Rational, Rational)>> {
    let sites: Vec<_> = s
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(pair_of)
        .collect::<Result<_>>()?;
    if sites.is_empty() {
        bail!("empty chain");
    }
    Ok(sites)
}

fn parse_rep(s: &str) -> Result<Representation> {
    let s = s.trim();
    if s == "rho" {
        return Ok(rep_rho());
    }
    let args = ["pi_cd(", "pi_a(", "pi("]
        .iter()
        .find_map(|p| s.strip_prefix(p))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| anyhow!("unknown representation {s:?}; expected rho, pi(a) or pi(c,d)"))?;
    Ok(match args.split_once(',') {
        Some((c, d)) => rep_pi_cd(&rational(c)?, &rational(d)?)?,
        None => rep_pi_a(&rational(args)?)?,
    })
}

/// Prints scalars symbolically, or at a fixed `q`.
struct Printer {
    q: Option<Rational>,
}

impl Printer {
    fn scalar(&self, x: &QScalar) -> Result<String> {
        match &self.q {
            None => Ok(x.to_string()),
            Some(q0) => Ok(specialize_q(x, q0)?.to_string()),
        }
    }

    fn element(&self, x: &Element) -> Result<String> {
        if self.q.is_none() {
            return Ok(dsl::format_element(x));
        }
        let terms = x
            .terms()
            .iter()
            .map(|(m, c)| Ok((m.to_string(), self.scalar(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(join_terms(terms))
    }

    fn tensor(&self, x: &TensorElement) -> Result<String> {
        if self.q.is_none() {
            return Ok(dsl::format_tensor(x));
        }
        let terms = x
            .terms()
            .iter()
            .map(|((a, b), c)| Ok((format!("{a} # {b}"), self.scalar(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(join_terms(terms))
    }

    fn matrix(&self, m: &QMatrix) -> Result<Value> {
        let rows = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| self.scalar(m.get(i, j)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(json!(rows))
    }

    fn matrix_series(&self, s: &LaurentSeries<QMatrix>, n: i64) -> Result<Value> {
        let mut out = serde_json::Map::new();
        for k in s.lo()..=n {
            if let Some(m) = s.coeff(k) {
                out.insert(k.to_string(), self.matrix(&m)?);
            }
        }
        Ok(Value::Object(out))
    }
}

fn join_terms(terms: Vec<(String, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .into_iter()
        .map(|(m, c)| format!("({c})*{m}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn print_tensor_series(p: &Printer, s: &LaurentSeries<TensorElement>, n: i64) -> Result<()> {
    for k in s.lo()..=n {
        if let Some(t) = s.coeff(k) {
            if !t.is_zero() {
                println!("z^{k}: {}", p.tensor(&t)?);
            }
        }
    }
    Ok(())
}

fn single_letter(x: &Element) -> Result<Letter> {
    let mut terms = x.terms().iter();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if c.is_one() => match m.letters().as_slice() {
            [l] => Ok(*l),
            _ => bail!("--drinfeld expects a single generator"),
        },
        _ => bail!("--drinfeld expects a single generator"),
    }
}

fn chain_inputs(
    args: &ChainArgs,
    cfg: &Config,
) -> Result<(Rational, Vec<(Rational, Rational)>, i64)> {
    let a = match args.a.as_deref().or(cfg.a.as_deref()) {
        Some(s) => rational(s)?,
        None => Rational::from_integer(1.into()),
    };
    let chain_src = args
        .chain
        .clone()
        .or_else(|| cfg.chains.as_ref().and_then(|c| c.first().cloned()))
        .ok_or_else(|| anyhow!("--chain is required"))?;
    let order = args.order.or(cfg.order).unwrap_or(8);
    Ok((a, parse_chain(&chain_src)?, order))
}

fn emit(out: &Option<PathBuf>, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    match out {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = load_config(&cli.config)?;
    let p = Printer {
        q: cli.q.as_deref().map(rational).transpose()?,
    };
    match cli.command {
        Command::Nf { expr } => match dsl::parse(&expr)? {
            DslValue::Element(x) => println!("{}", p.element(&x)?),
            DslValue::Tensor(t) => println!("{}", p.tensor(&t)?),
        },
        Command::Coproduct {
            expr,
            z,
            cop,
            drinfeld,
            order,
        } => {
            let x = dsl::parse_element(&expr)?;
            if drinfeld {
                print_tensor_series(&p, &drinfeld_coproduct(single_letter(&x)?, order)?, order)?;
            } else if z || cop {
                let s = coproduct_z(&x, cop);
                print_tensor_series(&p, &s, s.hi())?;
            } else {
                println!("{}", p.tensor(&coproduct(&x))?);
            }
        }
        Command::Pair { a, b, oracle } => {
            let (x, y) = (dsl::parse_element(&a)?, dsl::parse_element(&b)?);
            let v = if oracle {
                pair_oracle(&x, &y)?
            } else {
                pair_closed_elements(&x, &y)?
            };
            println!("{}", p.scalar(&v)?);
        }
        Command::Rmatrix { left, right, order } => {
            let (l, r) = (parse_rep(&left)?, parse_rep(&right)?);
            let n = order.or(cfg.order).unwrap_or(4);
            let (rz, desc) = evaluate_r_projective(&l, &r, n)?;
            let mut doc = json!({
                "left": l.name(),
                "right": r.name(),
                "order": n,
                "coefficients": p.matrix_series(&rz, n)?,
            });
            if !desc.is_trivial() {
                doc["dropped_k_factor"] = json!(desc.render());
            }
            emit(&None, &doc)?;
        }
        Command::Transfer(args) => {
            let (a, chain, n) = chain_inputs(&args, &cfg)?;
            let ops = transfer_ops(&a, &chain, n)?;
            let mut blocks = serde_json::Map::new();
            for i in 0..2 {
                for j in 0..2 {
                    blocks.insert(
                        format!("A{}{}", i + 1, j + 1),
                        p.matrix_series(&ops.a[i][j], n)?,
                    );
                }
            }
            let ratio = match a11_over_t(&a, &chain, n)? {
                Some(s) => json!((0..=n)
                    .map(|k| p.scalar(&s.coeff(k).unwrap_or_default()))
                    .collect::<Result<Vec<_>>>()?),
                None => Value::Null,
            };
            let doc = json!({
                "a": a.to_string(),
                "chain": chain.iter().map(|(c, d)| format!("({c},{d})")).collect::<Vec<_>>().join(";"),
                "order": n,
                "v1_count": ops.v1_count,
                "blocks": blocks,
                "a11_over_t": ratio,
            });
            emit(&args.out, &doc)?;
        }
        Command::Baxter(args) => {
            let (a, chain, n) = chain_inputs(&args, &cfg)?;
            let report = baxter_check(&a, &chain, n, true);
            emit(&args.out, &serde_json::to_value(&report)?)?;
            return Ok(report.passed());
        }
        Command::Verify {
            suite,
            order,
            seed,
            samples,
            index_bound,
            unsigned_flip,
            format,
        } => {
            let mut o = SuiteOptions {
                order: order.or(cfg.order),
                seed: seed.or(cfg.seed).unwrap_or(0),
                samples: samples.or(cfg.samples),
                index_bound: index_bound.or(cfg.index_bound),
                unsigned_flip,
                ..Default::default()
            };
            if let Some(a) = &cfg.a {
                o.a = rational(a)?;
            }
            if let Some(ps) = &cfg.params {
                o.params = ps.iter().map(|s| pair_of(s)).collect::<Result<_>>()?;
            }
            if let Some(cs) = &cfg.chains {
                o.chains = cs.iter().map(|s| parse_chain(s)).collect::<Result<_>>()?;
            }
            let names = match suite {
                Some(s) => vec![s],
                None => cfg.suites.clone().unwrap_or_else(|| vec!["all".into()]),
            };
            let mut ok = true;
            for name in names {
                if name != "all" && !SUITES.contains(&name.as_str()) {
                    bail!(
                        "unknown suite {name}; expected one of {} or all",
                        SUITES.join(", ")
                    );
                }
                let mut report = run_suite(&name, &o)?;
                if let Some(q0) = &p.q {
                    report = report.param("q", q0.to_string());
                }
                ok &= report.passed();
                match format {
                    Format::Json => println!("{}", report.to_json()),
                    Format::Text => print!("{}", report.to_text()),
                }
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
