//! `padic`: command-line front end for the p-adic arithmetic laboratory.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use padic::casestudies::fixtures::somos_seeds;
use padic::casestudies::*;
use padic::lattice::{hermite_nf, propagate_backward, propagate_forward, PMatrix};
use padic::newton::{hensel_lift, newton_inverse, padic_sqrt, PPolynomial, SqrtVariant};
use padic::pfloat::PFloatSystem;
use padic::scalar::{parse_scalar, print_digits};
use padic::{PadicError, PadicScalar, PrimeContext, Rational};

#[derive(Parser)]
#[command(name = "padic", version, about = "p-adic arithmetic laboratory")]
struct Cli {
    /// The prime.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Working precision: absolute precision given to exact inputs, or the
    /// significand length of p-adic floats.
    #[arg(long, global = true, default_value_t = 10)]
    prec: i64,
    /// Arithmetic used by the linear algebra and polynomial commands.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Zealous)]
    backend: BackendArg,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Zealous,
    Pfloat,
    /// Exact computation truncated to the optimal precision found from the
    /// Jacobian.
    Optimal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SqrtMode {
    Naive,
    ZeroLift,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum JacobianKind {
    Det,
    Charpoly,
    Lu,
    Bezout,
    Somos,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Forward,
    Backward,
}

#[derive(Subcommand)]
enum Command {
    /// Base-p digits of an integer.
    Expand { n: BigInt },
    /// Square root by Newton iteration.
    Sqrt {
        #[arg(allow_hyphen_values = true)]
        literal: String,
        #[arg(long, value_enum, default_value_t = SqrtMode::ZeroLift)]
        mode: SqrtMode,
    },
    /// Inverse by Newton iteration, to `--prec` digits.
    Inv {
        #[arg(allow_hyphen_values = true)]
        literal: String,
    },
    /// Hensel lifting of a root of a polynomial (coefficients from the
    /// constant term, comma separated) to `--prec` digits.
    Hensel {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(allow_hyphen_values = true)]
        seed: String,
    },
    /// Determinant of the matrix on standard input.
    Det,
    /// Characteristic polynomial of the matrix on standard input.
    Charpoly,
    /// L factor of the matrix on standard input.
    Lu,
    /// Bézout coefficients of the two monic polynomials on standard input
    /// (one per line, constant term first).
    Bezout,
    /// Evaluation at 0..d followed by interpolation of the polynomial on
    /// standard input.
    Interp,
    /// Inversion of the Hilbert matrix in p-adic floats with `--prec`
    /// digits, compared with the exact inverse.
    Hilbert { n: usize },
    /// Term `u_n` of the Somos-4 sequence with the given seeds.
    #[command(allow_negative_numbers = true)]
    Somos {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        n: usize,
        #[arg(long, default_value = "stabilized-zealous")]
        mode: String,
        /// Also print the comparison with the exact sequence.
        #[arg(long)]
        report: bool,
    },
    /// Hermite normal form of the matrix on standard input.
    Hnf,
    /// Jacobian of a case-study map at the input on standard input: a
    /// matrix (det, charpoly, lu), two polynomials (bezout) or
    /// `a b c d i` (somos).
    Jacobian {
        #[arg(value_enum)]
        which: JacobianKind,
    },
    /// Precision propagation through the Jacobian matrix on standard input
    /// (rows are inputs), with every given precision equal to `--prec`.
    Precision {
        #[arg(value_enum)]
        direction: Direction,
    },
}

/// Failure kinds, mapped to exit codes.
enum Failure {
    Usage(String),
    Precision(PadicError),
}

impl From<PadicError> for Failure {
    fn from(e: PadicError) -> Self {
        if e.is_precision_error() {
            Failure::Precision(e)
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

struct Env {
    ctx: PrimeContext,
    prec: i64,
    backend: BackendArg,
    format: Format,
}

impl Env {
    /// An exact input becomes known modulo `p^prec`.
    fn at_prec(&self, x: PadicScalar) -> PadicScalar {
        if x.is_exact() {
            x.truncate(self.prec)
        } else {
            x
        }
    }

    fn scalar(&self, text: &str) -> std::result::Result<PadicScalar, Failure> {
        Ok(self.at_prec(parse_scalar(text, &self.ctx)?))
    }

    fn matrix(&self, text: &str) -> std::result::Result<PMatrix, Failure> {
        let joined = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(";");
        let m = PMatrix::parse(&joined, &self.ctx)?;
        Ok(PMatrix::from_fn(&self.ctx, m.rows(), m.cols(), |i, j| self.at_prec(m.get(i, j).clone()))?)
    }

    fn polynomial(&self, text: &str) -> std::result::Result<PPolynomial, Failure> {
        let f = PPolynomial::parse(text.trim(), &self.ctx)?;
        Ok(PPolynomial::new(&self.ctx, f.coefficients().iter().map(|c| self.at_prec(c.clone())).collect())?)
    }

    fn pfloat(&self) -> std::result::Result<PFloatArith, Failure> {
        let digits = u32::try_from(self.prec).map_err(|_| Failure::Usage("--prec must be positive".into()))?;
        Ok(PFloatArith::with_digits(&self.ctx, digits)?)
    }

    /// Labelled values as an aligned table or as TSV.
    fn rows(&self, rows: &[(String, String)]) -> String {
        match self.format {
            Format::Tsv => {
                let mut out = String::from("quantity\tvalue\n");
                for (k, v) in rows {
                    out.push_str(&format!("{k}\t{v}\n"));
                }
                out
            }
            Format::Table => {
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
            }
        }
    }

    /// A single value: bare in table format, one labelled row in TSV.
    fn single(&self, label: &str, value: String) -> String {
        match self.format {
            Format::Table => format!("{value}\n"),
            Format::Tsv => self.rows(&[(label.to_string(), value)]),
        }
    }

    fn matrix_rows(&self, name: &str, rows: Vec<Vec<String>>) -> String {
        let labelled: Vec<(String, String)> = rows
            .into_iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.into_iter().enumerate().map(move |(j, v)| (format!("{name}[{},{}]", i + 1, j + 1), v))
            })
            .collect();
        self.rows(&labelled)
    }

    fn report(&self, report: &ExperimentReport) -> String {
        match self.format {
            Format::Table => report.to_table(),
            Format::Tsv => report.to_tsv(),
        }
    }
}

fn stdin_text() -> std::result::Result<String, Failure> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
    Ok(s)
}

fn render_all<A: Arith>(a: &A, xs: &[A::Elem]) -> Vec<String> {
    xs.iter().map(|x| a.render(x)).collect()
}

fn descending_labels(d: usize) -> Vec<String> {
    (0..d).rev().map(|k| if k == 0 { "1".to_string() } else { format!("X^{k}") }).collect()
}

fn run(cli: Cli) -> Outcome {
    let env = Env { ctx: PrimeContext::new(cli.p)?, prec: cli.prec, backend: cli.backend, format: cli.format };
    let ctx = env.ctx;
    match cli.command {
        Command::Expand { n } => Ok(env.single("digits", print_digits(&PadicScalar::exact(&ctx, n)))),
        Command::Sqrt { literal, mode } => {
            let variant = match mode {
                SqrtMode::Naive => SqrtVariant::NaiveZealous,
                SqrtMode::ZeroLift => SqrtVariant::ZeroLift,
            };
            Ok(env.single("sqrt", print_digits(&padic_sqrt(&env.scalar(&literal)?, variant)?)))
        }
        Command::Inv { literal } => {
            let x = parse_scalar(&literal, &ctx)?;
            Ok(env.single("inverse", print_digits(&newton_inverse(&x, env.prec)?)))
        }
        Command::Hensel { poly, seed } => {
            let f = PPolynomial::parse(&poly, &ctx)?;
            let a = parse_scalar(&seed, &ctx)?;
            Ok(env.single("root", print_digits(&hensel_lift(&f, &a, env.prec)?)))
        }
        Command::Det => {
            let m = env.matrix(&stdin_text()?)?;
            let value = match env.backend {
                BackendArg::Zealous => print_digits(&det_division_free(&ZealousArith::new(&ctx), &m)?),
                BackendArg::Pfloat => {
                    let a = env.pfloat()?;
                    a.render(&det_division_free(&a, &m)?)
                }
                BackendArg::Optimal => print_digits(&det_optimal(&m)?),
            };
            Ok(env.single("det", value))
        }
        Command::Charpoly => {
            let m = env.matrix(&stdin_text()?)?;
            let d = m.rows();
            let values: Vec<String> = match env.backend {
                BackendArg::Zealous => {
                    let a = ZealousArith::new(&ctx);
                    render_all(&a, &charpoly(&a, &m)?)
                }
                BackendArg::Pfloat => {
                    let a = env.pfloat()?;
                    render_all(&a, &charpoly(&a, &m)?)
                }
                BackendArg::Optimal => {
                    let precision = input_precisions(&m);
                    let out = propagate_forward(&charpoly_jacobian(&m)?, &precision)?;
                    let exact = charpoly(&ExactArith::new(&ctx), &m.lift_exact())?;
                    let mut v: Vec<String> = vec!["1".into()];
                    for (k, n) in out.output_precision.iter().enumerate() {
                        v.insert(0, print_digits(&exact_scalar(&ctx, &exact[d - 1 - k]).truncate(*n)));
                    }
                    v
                }
            };
            let labels = descending_labels(d + 1);
            let rows: Vec<(String, String)> = labels.into_iter().zip(values.into_iter().rev()).collect();
            Ok(env.rows(&rows))
        }
        Command::Lu => {
            let m = env.matrix(&stdin_text()?)?;
            let rows = match env.backend {
                BackendArg::Zealous => {
                    let a = ZealousArith::new(&ctx);
                    lu_factor(&a, &m)?.l.iter().map(|r| render_all(&a, r)).collect()
                }
                BackendArg::Pfloat => {
                    let a = env.pfloat()?;
                    lu_factor(&a, &m)?.l.iter().map(|r| render_all(&a, r)).collect()
                }
                BackendArg::Optimal => {
                    let precision = input_precisions(&m);
                    let out = propagate_forward(&lu_jacobian(&m)?, &precision)?;
                    let exact = lu_factor(&ExactArith::new(&ctx), &m.lift_exact())?;
                    let d = m.rows();
                    let mut rows: Vec<Vec<String>> = (0..d)
                        .map(|i| (0..d).map(|j| if i == j { "1".into() } else { "0".into() }).collect())
                        .collect();
                    for ((i, j), n) in lower_positions(d).into_iter().zip(out.output_precision) {
                        rows[i][j] = print_digits(&exact_scalar(&ctx, &exact.l[i][j]).truncate(n));
                    }
                    rows
                }
            };
            Ok(env.matrix_rows("L", rows))
        }
        Command::Bezout => {
            let text = stdin_text()?;
            let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
            let [p_text, q_text] = lines[..] else {
                return Err(Failure::Usage("expected two polynomials, one per line".into()));
            };
            let (p, q) = (env.polynomial(p_text)?, env.polynomial(q_text)?);
            let (u, v) = match env.backend {
                BackendArg::Zealous => bezout_poly(&ZealousArith::new(&ctx), &p, &q)?,
                BackendArg::Pfloat => bezout_poly(&env.pfloat()?, &p, &q)?,
                BackendArg::Optimal => bezout_reference(&p, &q, BEZOUT_BOOST)?,
            };
            let labels = descending_labels(p.degree());
            let mut rows = Vec::new();
            for (name, f) in [("U", &u), ("V", &v)] {
                for (label, c) in labels.iter().zip(f.coefficients().iter().rev()) {
                    rows.push((format!("{name} {label}"), print_digits(c)));
                }
            }
            Ok(env.rows(&rows))
        }
        Command::Interp => {
            let f = env.polynomial(&stdin_text()?)?;
            let values = match env.backend {
                BackendArg::Zealous | BackendArg::Optimal => {
                    round_trip(&ZealousArith::new(&ctx), &f)?.coefficients().iter().map(print_digits).collect::<Vec<_>>()
                }
                BackendArg::Pfloat => {
                    let a = env.pfloat()?;
                    let back = interpolate_divided_differences(&a, &evaluate_at_first_integers(&a, &embed_poly(&a, &f))?)?;
                    render_all(&a, &back)
                }
            };
            let labels = descending_labels(values.len());
            Ok(env.rows(&labels.into_iter().zip(values.into_iter().rev()).collect::<Vec<_>>()))
        }
        Command::Hilbert { n } => {
            let digits = u32::try_from(env.prec).map_err(|_| Failure::Usage("--prec must be positive".into()))?;
            let report = hilbert_experiment(n, &PFloatSystem::with_digits(&ctx, digits)?)?;
            let mut out = env.report(&report);
            if env.format == Format::Table {
                out.push_str(&format!("average correct digits: {:.2}\n", report.average_agreement().unwrap_or(0.0)));
            }
            Ok(out)
        }
        Command::Somos { a, b, c, d, n, mode, report } => {
            let mode: SomosMode = mode.parse()?;
            let seeds = somos_seeds(&ctx, [a, b, c, d], env.prec);
            let out = somos(&seeds, n, mode)?;
            let mut text = env.single(&format!("u{n}"), print_digits(&out.value));
            if let Some(demand) = out.seed_demand {
                let list = demand.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                text.push_str(&format!("seed digits read: {list}\n"));
            }
            if report {
                text.push_str(&env.report(&out.report));
            }
            Ok(text)
        }
        Command::Hnf => {
            let h = hermite_nf(&env.matrix(&stdin_text()?)?)?;
            Ok(env.matrix_rows("H", pmatrix_rows(&h)))
        }
        Command::Jacobian { which } => {
            let text = stdin_text()?;
            let j = match which {
                JacobianKind::Det => det_jacobian(&env.matrix(&text)?)?,
                JacobianKind::Charpoly => charpoly_jacobian(&env.matrix(&text)?)?,
                JacobianKind::Lu => lu_jacobian(&env.matrix(&text)?)?,
                JacobianKind::Bezout => {
                    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
                    let [p_text, q_text] = lines[..] else {
                        return Err(Failure::Usage("expected two polynomials, one per line".into()));
                    };
                    bezout_jacobian(&env.polynomial(p_text)?, &env.polynomial(q_text)?)?
                }
                JacobianKind::Somos => {
                    let nums: Vec<i64> = text
                        .split(|ch: char| ch.is_whitespace() || ch == ',')
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse().map_err(|_| Failure::Usage(format!("not an integer: {t}"))))
                        .collect::<std::result::Result<_, _>>()?;
                    let [a, b, c, d, i] = nums[..] else {
                        return Err(Failure::Usage("expected `a b c d i`".into()));
                    };
                    let i = usize::try_from(i).map_err(|_| Failure::Usage("negative index".into()))?;
                    somos_jacobian(&ctx, [a, b, c, d].map(|x| Rational::from_integer(BigInt::from(x))), i)?
                }
            };
            Ok(env.matrix_rows("J", pmatrix_rows(&j)))
        }
        Command::Precision { direction } => {
            let j = PMatrix::parse(
                &stdin_text()?.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(";"),
                &ctx,
            )?;
            match direction {
                Direction::Forward => {
                    let out = propagate_forward(&j, &vec![env.prec; j.rows()])?;
                    let mut rows: Vec<(String, String)> = out
                        .output_precision
                        .iter()
                        .enumerate()
                        .map(|(k, n)| (format!("output {}", k + 1), format!("O({}^{n})", ctx.p())))
                        .collect();
                    if let Ok(d) = out.image.diffused_digits() {
                        rows.push(("diffused digits".into(), d.to_string()));
                    }
                    Ok(env.rows(&rows))
                }
                Direction::Backward => {
                    let need = propagate_backward(&j, &vec![env.prec; j.cols()])?;
                    let rows: Vec<(String, String)> = need
                        .iter()
                        .enumerate()
                        .map(|(k, n)| {
                            let v = n.map_or("any".to_string(), |n| format!("O({}^{n})", ctx.p()));
                            (format!("input {}", k + 1), v)
                        })
                        .collect();
                    Ok(env.rows(&rows))
                }
            }
        }
    }
}

fn input_precisions(m: &PMatrix) -> Vec<i64> {
    (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).abs_prec().unwrap_or(i64::MAX / 4)).collect()
}

fn pmatrix_rows(m: &PMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(print_digits).collect()).collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Precision(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
