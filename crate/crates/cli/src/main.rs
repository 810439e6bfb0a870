//! `anticont`: continued fractions, anticontinuants, asymmetry types and the
//! congruences `x^2 + n x + (-1)^s = 0 (mod alpha)` from the command line.
//!
//! Exit status: 0 success, 1 usage error, 2 domain error, 3 verification
//! found violations.

use std::process::ExitCode;

use anticont::{
    anticontinuant_range, anticontinuant_recursive, both_expansions, build_table, compose,
    continuant_range, decompose, enumerate_types, euler_residual, evaluate, exceptional_candidates,
    expand, expand_with_parity, fibonacci, folded_expand_classify, folded_normalize,
    parity_by_inverse, solve_quadratic, true_exceptions, type_value, verify_identities,
    verify_main_theorem, AsymmetryDecomposition, BigInt, CongruenceSpec, Error,
    ExtendedAsymmetryType, FoldedParams, LambdaParity, Parity, QuotientSequence, RationalPair,
    TheoremMode, VerificationReport,
};
use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "anticont",
    version,
    about = "Continued fractions, anticontinuants and asymmetry types"
)]
struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "ANTICONT_FORMAT",
        default_value = "text"
    )]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Continued-fraction expansion of ALPHA/BETA.
    Expand {
        alpha: BigInt,
        beta: BigInt,
        /// Expansion of the given length parity instead of the conventional one.
        #[arg(long)]
        parity: Option<Parity>,
        /// Both expansions, conventional first.
        #[arg(long, conflicts_with_all = ["parity", "inverse"])]
        both: bool,
        /// Predict the length parity from the inverse of BETA modulo ALPHA.
        #[arg(long, conflicts_with = "parity")]
        inverse: bool,
    },
    /// Continuant of a sequence, or of the sub-range I..=J.
    Continuant {
        #[arg(required_unless_present = "fibonacci")]
        seq: Option<QuotientSequence>,
        #[arg(long, num_args = 2, value_names = ["I", "J"], allow_negative_numbers = true)]
        range: Option<Vec<i64>>,
        /// Evaluate the sequence as a fraction alpha/beta.
        #[arg(long, conflicts_with_all = ["range", "euler"])]
        fraction: bool,
        /// Residual of Euler's identity for indices K L M N.
        #[arg(long, num_args = 4, value_names = ["K", "L", "M", "N"], allow_negative_numbers = true, conflicts_with = "range")]
        euler: Option<Vec<i64>>,
        /// Fibonacci number F_K instead.
        #[arg(long, value_name = "K", conflicts_with = "seq")]
        fibonacci: Option<u64>,
    },
    /// Anticontinuant of a sequence, or of the sub-range I..=J.
    Anticont {
        seq: QuotientSequence,
        #[arg(long, num_args = 2, value_names = ["I", "J"], allow_negative_numbers = true)]
        range: Option<Vec<i64>>,
        /// Use the peeling recursion instead of the definition.
        #[arg(long)]
        recursive: bool,
    },
    /// Asymmetry type of a sequence; value of a type; or the sequence built from one.
    Type(TypeArgs),
    /// All asymmetry types with anticontinuant N.
    Enumerate {
        #[arg(long, allow_negative_numbers = true)]
        n: BigInt,
        /// Core length parity: even, odd or both.
        #[arg(long, default_value = "both")]
        parity: LambdaParity,
        /// Only the types printed in the small-value table (even stripped depth, no sigma).
        #[arg(long)]
        coarse: bool,
    },
    /// Roots 0 < beta < ALPHA of x^2 + n x + (-1)^s.
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        n: BigInt,
        #[arg(long)]
        s: i64,
        alpha: BigInt,
    },
    /// Exceptional moduli of the congruence, with certificates.
    Exceptional {
        #[arg(long, allow_negative_numbers = true)]
        n: BigInt,
        #[arg(long)]
        s: i64,
        /// List roots over exceptional moduli that no expansion explains.
        #[arg(long)]
        true_exceptions: bool,
        /// With --true-exceptions, only the congruence for n itself (not -n).
        #[arg(long, requires = "true_exceptions")]
        single_sign: bool,
    },
    /// Classify b n^2 / (b a n - eps) after normalizing gcd(a, n) into b.
    Folded {
        #[arg(long)]
        b: BigInt,
        #[arg(long)]
        n: BigInt,
        #[arg(long)]
        a: BigInt,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        eps: i8,
        /// Print the normalized parameters only.
        #[arg(long)]
        normalize_only: bool,
    },
    /// Sweeps over ranges of moduli.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Asymmetry types and true exceptions for 1 <= n <= N_MAX.
    Table {
        #[arg(long, default_value_t = 6)]
        n_max: u64,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Congruence identity, half bound and parity lemma over all pairs, plus random Euler checks.
    Identities {
        #[arg(long, default_value_t = 500)]
        max_alpha: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Roots versus asymmetry types for every alpha up to ALPHA_MAX.
    Theorem {
        #[arg(long, allow_negative_numbers = true)]
        n: BigInt,
        #[arg(long)]
        s: i64,
        #[arg(long, default_value_t = 2000)]
        alpha_max: u64,
        #[arg(long, default_value = "refined")]
        mode: TheoremMode,
    },
}

#[derive(Args)]
struct TypeArgs {
    /// Sequence to decompose.
    #[arg(required_unless_present = "c", conflicts_with_all = ["c", "core"])]
    seq: Option<QuotientSequence>,
    /// Marginal asymmetry.
    #[arg(long, allow_negative_numbers = true, requires = "core")]
    c: Option<BigInt>,
    /// Core asymmetry (may be empty: --core "").
    #[arg(long)]
    core: Option<QuotientSequence>,
    /// Parity of the stripped depth.
    #[arg(long, conflicts_with = "pivot")]
    sigma: Option<Parity>,
    /// Build the sequence with this pivot instead of evaluating the type.
    #[arg(long, requires = "c")]
    pivot: Option<BigInt>,
    /// Symmetric outer layers, outermost first.
    #[arg(long, requires = "pivot")]
    outer: Option<QuotientSequence>,
}

/// One result in all three renderings.
struct Rendered {
    text: String,
    json: Value,
    csv: String,
    /// A verification found violations.
    failed: bool,
}

impl Rendered {
    fn new(text: impl Into<String>, json: Value, csv: impl Into<String>) -> Self {
        Rendered {
            text: text.into(),
            json,
            csv: csv.into(),
            failed: false,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize")
}

fn int(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => json!(i),
        Err(_) => json!(v.to_string()),
    }
}

fn dots(q: &QuotientSequence) -> String {
    q.to_string().replace(',', ".")
}

fn joined<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn full_range(q: &QuotientSequence, range: Option<Vec<i64>>) -> (i64, i64) {
    match range {
        Some(r) => (r[0], r[1]),
        None => (0, q.len() as i64 - 1),
    }
}

fn run(command: Command) -> Result<Rendered, Error> {
    Ok(match command {
        Command::Expand {
            alpha,
            beta,
            parity,
            both,
            inverse,
        } => {
            if inverse {
                let p = parity_by_inverse(&alpha, &beta)?;
                let side = if p.same_side { "same" } else { "opposite" };
                let text = format!("{} {side} {}", p.v_inverse, p.predicted_parity);
                let csv = format!(
                    "u,v,v_inverse,same_side,parity\n{},{},{},{},{}\n",
                    p.u, p.v, p.v_inverse, p.same_side, p.predicted_parity
                );
                return Ok(Rendered::new(text, to_json(&p), csv));
            }
            let pair = RationalPair::new(alpha, beta)?;
            let seqs = if both {
                both_expansions(&pair)
            } else if let Some(parity) = parity {
                vec![expand_with_parity(&pair, parity)?]
            } else {
                vec![expand(&pair)]
            };
            let rows: Vec<Value> = seqs
                .iter()
                .map(|q| {
                    json!({
                        "alpha": int(pair.alpha()),
                        "beta": int(pair.beta()),
                        "expansion": to_json(q),
                        "parity": q.parity(),
                        "convention": q.satisfies_convention(),
                    })
                })
                .collect();
            let json = if both {
                Value::Array(rows)
            } else {
                rows[0].clone()
            };
            let mut csv = String::from("alpha,beta,expansion,parity\n");
            for q in &seqs {
                csv += &format!(
                    "{},{},{},{}\n",
                    pair.alpha(),
                    pair.beta(),
                    dots(q),
                    q.parity()
                );
            }
            Rendered::new(joined(&seqs, "\n"), json, csv)
        }
        Command::Continuant {
            seq,
            range,
            fraction,
            euler,
            fibonacci: k,
        } => {
            if let Some(k) = k {
                let f = fibonacci(k);
                return Ok(Rendered::new(
                    f.to_string(),
                    json!({ "k": k, "fibonacci": int(&f) }),
                    format!("k,fibonacci\n{k},{f}\n"),
                ));
            }
            let q = seq.expect("clap requires a sequence");
            if fraction {
                let pair = evaluate(&q)?;
                let csv = format!("alpha,beta\n{},{}\n", pair.alpha(), pair.beta());
                return Ok(Rendered::new(pair.to_string(), to_json(&pair), csv));
            }
            if let Some(e) = euler {
                let r = euler_residual(&q, e[0], e[1], e[2], e[3])?;
                let json = json!({
                    "sequence": to_json(&q),
                    "k": e[0], "l": e[1], "m": e[2], "n": e[3],
                    "residual": int(&r),
                });
                let csv = format!(
                    "k,l,m,n,residual\n{},{},{},{},{r}\n",
                    e[0], e[1], e[2], e[3]
                );
                return Ok(Rendered::new(r.to_string(), json, csv));
            }
            let (i, j) = full_range(&q, range);
            let k = continuant_range(&q, i, j)?;
            let json = json!({ "sequence": to_json(&q), "i": i, "j": j, "continuant": int(&k) });
            Rendered::new(
                k.to_string(),
                json,
                format!("i,j,continuant\n{i},{j},{k}\n"),
            )
        }
        Command::Anticont {
            seq,
            range,
            recursive,
        } => {
            let (i, j) = full_range(&seq, range);
            let a = if recursive {
                anticontinuant_recursive(&seq, i, j)?
            } else {
                anticontinuant_range(&seq, i, j)?
            };
            let json =
                json!({ "sequence": to_json(&seq), "i": i, "j": j, "anticontinuant": int(&a) });
            Rendered::new(
                a.to_string(),
                json,
                format!("i,j,anticontinuant\n{i},{j},{a}\n"),
            )
        }
        Command::Type(args) => run_type(args)?,
        Command::Enumerate { n, parity, coarse } => {
            let catalog = enumerate_types(&n, parity)?;
            let mut csv = String::from("c,core,sigma,family\n");
            let mut lines = Vec::new();
            let json = if coarse {
                let view = catalog.paper_view();
                for t in &view.types {
                    lines.push(t.to_string());
                    csv += &format!("{},{},,false\n", t.c, dots(&t.core));
                }
                for f in &view.families {
                    lines.push(format!("({} ; {})", f.c, f.pattern_string()));
                    csv += &format!("{},{},,true\n", f.c, f.pattern_string().replace(',', "."));
                }
                to_json(&view)
            } else {
                for t in &catalog.finite_types {
                    lines.push(t.to_string());
                    csv += &format!("{},{},{},false\n", t.c, dots(&t.core), t.sigma);
                }
                for f in &catalog.parametric_families {
                    lines.push(f.to_string());
                    csv += &format!(
                        "{},{},{},true\n",
                        f.c,
                        f.pattern_string().replace(',', "."),
                        f.sigma
                    );
                }
                to_json(&catalog)
            };
            Rendered::new(lines.join("\n"), json, csv)
        }
        Command::Solve { n, s, alpha } => {
            let spec = CongruenceSpec::new(n, s)?;
            if alpha < BigInt::from(1) {
                return Err(Error::Parse {
                    input: alpha.to_string(),
                    reason: "modulus must be positive".into(),
                });
            }
            let roots = solve_quadratic(&spec, &alpha);
            let json = json!({
                "spec": to_json(&spec),
                "alpha": int(&alpha),
                "roots": roots.iter().map(int).collect::<Vec<_>>(),
            });
            let mut csv = String::from("alpha,beta\n");
            for r in &roots {
                csv += &format!("{alpha},{r}\n");
            }
            Rendered::new(joined(&roots, ","), json, csv)
        }
        Command::Exceptional {
            n,
            s,
            true_exceptions: list_true,
            single_sign,
        } => {
            let spec = CongruenceSpec::new(n, s)?;
            if list_true {
                let pairs = true_exceptions(&spec, !single_sign)?;
                let cells: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}/{b}")).collect();
                let text = if cells.is_empty() {
                    "None".to_string()
                } else {
                    cells.join(" ")
                };
                let json = Value::Array(
                    pairs
                        .iter()
                        .map(|(a, b)| json!({ "alpha": int(a), "beta": int(b) }))
                        .collect(),
                );
                let mut csv = String::from("alpha,beta\n");
                for (a, b) in &pairs {
                    csv += &format!("{a},{b}\n");
                }
                return Ok(Rendered::new(text, json, csv));
            }
            let set = exceptional_candidates(&spec)?;
            let mut csv = String::from("modulus,condition,witness\n");
            for m in &set.members {
                for c in &m.certificates {
                    let condition = to_json(&c.condition);
                    let witness = c
                        .witness
                        .as_ref()
                        .map(ToString::to_string)
                        .unwrap_or_default();
                    csv += &format!(
                        "{},{},{witness}\n",
                        m.modulus,
                        condition.as_str().unwrap_or_default()
                    );
                }
            }
            Rendered::new(joined(&set.moduli(), ","), to_json(&set), csv)
        }
        Command::Folded {
            b,
            n,
            a,
            eps,
            normalize_only,
        } => {
            let p = folded_normalize(&FoldedParams::new(b, n, a, eps)?);
            let (alpha, beta) = (p.alpha(), p.beta());
            let head = format!(
                "b={} n={} a={} eps={} -> {alpha}/{beta}",
                p.b, p.n, p.a, p.epsilon
            );
            if normalize_only {
                let json =
                    json!({ "params": to_json(&p), "alpha": int(&alpha), "beta": int(&beta) });
                let csv = format!(
                    "b,n,a,eps,alpha,beta\n{},{},{},{},{alpha},{beta}\n",
                    p.b, p.n, p.a, p.epsilon
                );
                return Ok(Rendered::new(head, json, csv));
            }
            let cls = folded_expand_classify(&p)?;
            let f = &cls.form;
            let x = f.x.as_ref().map(ToString::to_string).unwrap_or_default();
            let text = format!(
                "{head}\n[{}] form {} x={} pivot={}",
                cls.sequence,
                f.form,
                if x.is_empty() { "-" } else { &x },
                f.pivot
            );
            let json = json!({
                "params": to_json(&p),
                "alpha": int(&alpha),
                "beta": int(&beta),
                "classification": to_json(&cls),
            });
            let csv = format!(
                "b,n,a,eps,alpha,beta,sequence,form,x,pivot\n{},{},{},{},{alpha},{beta},{},{},{x},{}\n",
                p.b,
                p.n,
                p.a,
                p.epsilon,
                dots(&cls.sequence),
                f.form,
                f.pivot
            );
            Rendered::new(text, json, csv)
        }
        Command::Verify { what } => {
            let report = match what {
                Verify::Identities {
                    max_alpha,
                    trials,
                    seed,
                } => verify_identities(max_alpha, trials, seed)?,
                Verify::Theorem {
                    n,
                    s,
                    alpha_max,
                    mode,
                } => verify_main_theorem(&CongruenceSpec::new(n, s)?, alpha_max, mode)?,
            };
            report_rendering(&report)
        }
        Command::Table { n_max } => {
            let doc = build_table(n_max)?;
            Rendered::new(doc.to_text(), to_json(&doc), doc.to_csv())
        }
    })
}

fn run_type(args: TypeArgs) -> Result<Rendered, Error> {
    if let Some(q) = args.seq {
        let d = decompose(&q)?;
        let t = d.extended_type();
        let value = anticont::anticontinuant(q.entries());
        let pivot = d
            .pivot
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default();
        let text = format!(
            "type: {}\ndepth: {}\nc: {}\ncore: {}\npivot: {}\nouter: {}\nanticontinuant: {value}",
            t.as_ref()
                .map_or("symmetric".to_string(), ToString::to_string),
            d.depth,
            d.c,
            d.core,
            if pivot.is_empty() { "-" } else { &pivot },
            d.outer
        );
        let json = json!({
            "decomposition": to_json(&d),
            "extended_type": to_json(&t),
            "anticontinuant": int(&value),
        });
        let csv = format!(
            "depth,c,core,pivot,outer,sigma\n{},{},{},{pivot},{},{}\n",
            d.depth,
            d.c,
            dots(&d.core),
            dots(&d.outer),
            d.depth_parity()
        );
        return Ok(Rendered::new(text, json, csv));
    }
    let c = args.c.expect("clap requires --c");
    let core = args.core.unwrap_or_default();
    if let Some(pivot) = args.pivot {
        let outer = args.outer.unwrap_or_default();
        let d = AsymmetryDecomposition {
            depth: outer.len(),
            c,
            core,
            pivot: Some(pivot),
            outer,
        };
        let q = compose(&d)?;
        let json = json!({ "sequence": to_json(&q) });
        return Ok(Rendered::new(
            q.to_string(),
            json,
            format!("sequence\n{}\n", dots(&q)),
        ));
    }
    let t = ExtendedAsymmetryType::new(c, core, args.sigma.unwrap_or(Parity::Even))?;
    let v = type_value(&t)?;
    let json = json!({ "type": to_json(&t), "value": int(&v) });
    let csv = format!(
        "c,core,sigma,value\n{},{},{},{v}\n",
        t.c,
        dots(&t.core),
        t.sigma
    );
    Ok(Rendered::new(v.to_string(), json, csv))
}

fn report_rendering(report: &VerificationReport) -> Rendered {
    let mut csv = String::from("alpha,beta,expansion,kind\n");
    for v in &report.violations {
        csv += &format!(
            "{},{},{},{}\n",
            v.alpha,
            v.beta,
            dots(&v.expansion),
            to_json(&v.kind).as_str().unwrap_or_default()
        );
    }
    Rendered {
        text: report.to_string(),
        json: to_json(report),
        csv,
        failed: !report.is_clean(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let rendered = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let body = match cli.format {
        Format::Text => rendered.text,
        Format::Json => serde_json::to_string_pretty(&rendered.json).expect("json"),
        Format::Csv => rendered.csv,
    };
    println!("{}", body.trim_end_matches('\n'));
    if rendered.failed {
        eprintln!("verification found violations");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
