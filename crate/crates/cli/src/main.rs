use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arrcore::aomoto::{aomoto_cohomology, h1_completion_profile, WeightMatrix};
use arrcore::arrangement::{dense_flats, esv_check, intersection_lattice, Arrangement};
use arrcore::bar::{em_pages, ConnectedDGA};
use arrcore::holonomy::{holonomy_presentation, lcs_dims};
use arrcore::itint::{iterated_integral, monodromy, pairing, standard_meridian, Loop, TwistedForm};
use arrcore::laurent::{laurent_cohomology, parse_laurent, WindowBox};
use arrcore::massey::{massey_triple, DegreeOneClass};
use arrcore::os::OSAlgebra;
use arrcore::scalar::Scalar;
use arrcore::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "arrtool", version, about = "Exact computations on hyperplane arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Arrangement file
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct Twist {
    /// Weight-matrix file (rows of scalar strings)
    #[arg(long = "a")]
    a: PathBuf,
    /// Window radius
    #[arg(long, default_value_t = 3)]
    window: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection lattice with Möbius values
    Flats {
        #[command(flatten)]
        common: Common,
        /// Use the projective closure
        #[arg(long)]
        projective: bool,
    },
    /// Dense flats of the projective closure
    Dense {
        #[command(flatten)]
        common: Common,
    },
    /// ESV condition for one weight row
    Esv {
        #[command(flatten)]
        common: Common,
        /// Comma-separated scalars
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
    },
    /// NBC basis of the Orlik–Solomon algebra
    OsBasis {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Betti numbers
    Betti {
        #[command(flatten)]
        common: Common,
    },
    /// Aomoto cohomology for one weight row
    Aomoto {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
    },
    /// dim H¹, dim H² over a window of characters
    Profile {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        twist: Twist,
    },
    /// Per-component cohomology of the Laurent-graded algebra
    LaurentH {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        twist: Twist,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Massey triple product of three degree-one classes
    Massey {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        twist: Twist,
        /// Three Laurent elements; defaults to the `classes` list of the weight file
        #[arg(long, num_args = 3, allow_hyphen_values = true)]
        classes: Option<Vec<String>>,
    },
    /// Holonomy Lie algebra presentation and graded dimensions
    Holonomy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Eilenberg–Moore E₁ and E₂ dimensions
    BarPages {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        smax: usize,
        /// Use the cohomology of the Laurent-graded algebra instead of A•
        #[arg(long = "a")]
        a: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        window: u32,
    },
    /// Numeric pairings, monodromy and iterated integrals along a loop
    Itint {
        #[command(flatten)]
        common: Common,
        /// Loop file; with --meridian only its base point is used
        #[arg(long = "loop")]
        loop_file: PathBuf,
        /// Replace the loop by the standard meridian of this hyperplane
        #[arg(long)]
        meridian: Option<usize>,
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
        #[arg(long = "a")]
        a: Option<PathBuf>,
        /// Rational value substituted for r
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
        /// Degree-one Laurent element; repeat for ψ₁ … ψ_s in order
        #[arg(long = "form", allow_hyphen_values = true)]
        forms: Vec<String>,
        /// Exponent m of φ = q^m, comma-separated
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_arrangement(c: &Common) -> Result<Arrangement> {
    Arrangement::from_json(&read(&c.input)?)
}

fn parse_row(text: &str) -> Result<Vec<Scalar>> {
    text.split(',')
        .map(|s| Ok(s.trim().parse::<Scalar>()?))
        .collect()
}

fn parse_ints(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| Error::Malformed(format!("not an integer: {s}"))))
        .collect()
}

fn key(k: &[i64]) -> String {
    let parts: Vec<String> = k.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn set(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn bidegree(s: usize, t: usize) -> String {
    if s == 0 {
        format!("(0,{t})")
    } else {
        format!("(-{s},{t})")
    }
}

fn complex(z: &Complex64) -> String {
    format!("{:.12} {:+.12}i", z.re, z.im)
}

fn complex_json(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

struct Report {
    text: String,
    json: Value,
}

fn run(cli: Cli) -> Result<(Format, Report)> {
    match cli.command {
        Command::Flats { common, projective } => {
            let arr = load_arrangement(&common)?;
            let lat = intersection_lattice(&arr, projective);
            let mut text = String::new();
            for f in &lat.flats {
                let _ = writeln!(text, "rank {} {} mu={}{}", f.rank, set(&f.hyperplanes), f.moebius, if f.dense { " dense" } else { "" });
            }
            Ok((common.format, Report { text, json: serde_json::to_value(&lat)? }))
        }
        Command::Dense { common } => {
            let arr = load_arrangement(&common)?;
            let flats = dense_flats(&arr);
            let mut text = String::new();
            for f in &flats {
                let _ = writeln!(text, "rank {} {}", f.rank, set(&f.hyperplanes));
            }
            Ok((common.format, Report { text, json: serde_json::to_value(&flats)? }))
        }
        Command::Esv { common, weights } => {
            let arr = load_arrangement(&common)?;
            let rep = esv_check(&arr, &parse_row(&weights)?)?;
            let mut text = format!("valid: {}\n", rep.valid);
            for v in &rep.violations {
                let _ = writeln!(text, "violation {} sum={}", set(&v.hyperplanes), v.sum);
            }
            Ok((common.format, Report { text, json: serde_json::to_value(&rep)? }))
        }
        Command::OsBasis { common, degree } => {
            let alg = OSAlgebra::new(&load_arrangement(&common)?);
            let degrees: Vec<usize> = match degree {
                Some(p) if p > alg.top_degree() => return Err(Error::UnsupportedDegree(p, alg.top_degree())),
                Some(p) => vec![p],
                None => (0..=alg.top_degree()).collect(),
            };
            let mut text = String::new();
            let mut js = serde_json::Map::new();
            for p in degrees {
                let names: Vec<String> = alg
                    .basis(p)
                    .iter()
                    .map(|m| if m.is_empty() { "1".into() } else { m.iter().map(|j| format!("w{j}")).collect::<Vec<_>>().join("^") })
                    .collect();
                let _ = writeln!(text, "A{p}: {}", names.join(" "));
                js.insert(p.to_string(), json!(names));
            }
            Ok((common.format, Report { text, json: Value::Object(js) }))
        }
        Command::Betti { common } => {
            let alg = OSAlgebra::new(&load_arrangement(&common)?);
            let b = alg.betti();
            let parts: Vec<String> = b.iter().map(usize::to_string).collect();
            Ok((common.format, Report { text: format!("{}\n", parts.join(" ")), json: json!(b) }))
        }
        Command::Aomoto { common, weights } => {
            let alg = OSAlgebra::new(&load_arrangement(&common)?);
            let rep = aomoto_cohomology(&alg, &parse_row(&weights)?)?;
            let dims: Vec<String> = rep.dims.iter().map(usize::to_string).collect();
            let mut text = format!("dims: {}\nesv_valid: {}\n", dims.join(" "), rep.esv_valid);
            for (p, reps) in rep.representatives.iter().enumerate() {
                for x in reps {
                    let _ = writeln!(text, "H{p}: {x}");
                }
            }
            Ok((common.format, Report { text, json: serde_json::to_value(&rep)? }))
        }
        Command::Profile { common, twist } => {
            let alg = OSAlgebra::new(&load_arrangement(&common)?);
            let a = WeightMatrix::from_json(&read(&twist.a)?, alg.n())?;
            let win = WindowBox::radius(a.nrows(), twist.window);
            let prof = h1_completion_profile(&alg, &a, &win)?;
            let mut text = String::new();
            let mut js = serde_json::Map::new();
            for (k, e) in &prof {
                let _ = writeln!(text, "{} h1={} h2={} esv={}", key(k), e.h1, e.h2, e.esv_valid);
                js.insert(key(k), serde_json::to_value(e)?);
            }
            Ok((common.format, Report { text, json: Value::Object(js) }))
        }
        Command::LaurentH { common, twist, degree } => {
            let alg = OSAlgebra::new(&load_arrangement(&common)?);
            let a = WeightMatrix::from_json(&read(&twist.a)?, alg.n())?;
            let win = WindowBox::radius(a.nrows(), twist.window);
            let coh = laurent_cohomology(&alg, &a, &win, degree)?;
            let mut text = String::new();
            let mut js = serde_json::Map::new();
            for (k, s) in &coh {
                if s.dim == 0 {
                    continue;
                }
                let reps: Vec<String> = s.representatives.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "{} dim={} esv={} reps: {}", key(k), s.dim, s.esv_valid, reps.join(" ; "));
                js.insert(key(k), serde_json::to_value(s)?);
            }
            Ok((common.format, Report { text, json: Value::Object(js) }))
        }
        Command::Massey { common, twist, classes } => {
            let alg = OSAlgebra::new(&load_arrangement(&common)?);
            let text_a = read(&twist.a)?;
            let a = WeightMatrix::from_json(&text_a, alg.n())?;
            let classes = match classes {
                Some(c) => c,
                None => WeightMatrix::classes_from_json(&text_a)?,
            };
            if classes.len() != 3 {
                return Err(Error::Malformed("three classes are required (--classes or the weight file)".into()));
            }
            let rank = a.nrows();
            let xs = classes
                .iter()
                .map(|c| DegreeOneClass::from_laurent(&parse_laurent(&alg, rank, c)?, rank))
                .collect::<Result<Vec<_>>>()?;
            let win = WindowBox::radius(rank, twist.window);
            let res = massey_triple(&alg, &a, [&xs[0], &xs[1], &xs[2]], &win)?;
            let mut text = String::new();
            let _ = writeln!(text, "target: {}", key(&res.target));
            let _ = writeln!(text, "defined: {}", res.defined);
            if let (Some(r12), Some(r23)) = (&res.r12, &res.r23) {
                let _ = writeln!(text, "r12: {r12}");
                let _ = writeln!(text, "r23: {r23}");
            }
            let _ = writeln!(text, "representative: {}", res.representative);
            let _ = writeln!(text, "h2_dim: {}", res.h2_dim);
            let _ = writeln!(text, "indeterminacy_dim: {}", res.indeterminacy_basis.len());
            for b in &res.indeterminacy_basis {
                let _ = writeln!(text, "  {b}");
            }
            let _ = writeln!(text, "pairs_outside_window: {}", res.pairs_outside_window);
            let _ = writeln!(text, "verdict: {}", res.verdict());
            let mut js = serde_json::to_value(&res)?;
            js["verdict"] = json!(res.verdict());
            Ok((common.format, Report { text, json: js }))
        }
        Command::Holonomy { common, degree } => {
            let alg = OSAlgebra::new(&load_arrangement(&common)?);
            let p = holonomy_presentation(&alg);
            let dims = lcs_dims(&p, degree)?;
            let parts: Vec<String> = dims.iter().map(usize::to_string).collect();
            let text = format!("{p}dims: {}\n", parts.join(" "));
            let mut js = serde_json::to_value(&p)?;
            js["dims"] = json!(dims);
            Ok((common.format, Report { text, json: js }))
        }
        Command::BarPages { common, smax, a, window } => {
            let alg = OSAlgebra::new(&load_arrangement(&common)?);
            let dga = match a {
                None => ConnectedDGA::from_os(&alg)?,
                Some(path) => {
                    let a = WeightMatrix::from_json(&read(&path)?, alg.n())?;
                    ConnectedDGA::from_laurent_cohomology(&alg, &a, &WindowBox::radius(a.nrows(), window))?
                }
            };
            let pages = em_pages(&dga, smax)?;
            let page_json = |p: &std::collections::BTreeMap<(usize, usize), usize>| {
                let m: serde_json::Map<String, Value> =
                    p.iter().map(|((s, t), d)| (bidegree(*s, *t), json!(d))).collect();
                Value::Object(m)
            };
            let js = json!({"s_max": smax, "E1": page_json(&pages.e1), "E2": page_json(&pages.e2)});
            Ok((common.format, Report { text: pages.to_string(), json: js }))
        }
        Command::Itint { common, loop_file, meridian, radius, a, r, forms, phi } => {
            let arr = load_arrangement(&common)?;
            let mut l = Loop::from_json(&read(&loop_file)?)?;
            if let Some(j) = meridian {
                l = standard_meridian(&arr, &l.base, j, radius)?;
            }
            let r = r.map(|s| -> Result<_> {
                s.parse::<Scalar>()?
                    .as_rational()
                    .cloned()
                    .ok_or_else(|| Error::NonNumeric(s.clone()))
            }).transpose()?;
            let p = pairing(&arr, &l)?;
            let mut text = format!("pairing: {}\n", p.iter().map(complex).collect::<Vec<_>>().join(" ; "));
            let mut js = json!({"pairing": p.iter().map(complex_json).collect::<Vec<_>>()});
            if let Some(path) = a {
                let a = WeightMatrix::from_json(&read(&path)?, arr.len())?;
                let m = monodromy(&arr, &a, r.as_ref(), &l)?;
                let _ = writeln!(text, "monodromy: {}", m.iter().map(complex).collect::<Vec<_>>().join(" ; "));
                js["monodromy"] = json!(m.iter().map(complex_json).collect::<Vec<_>>());
                if !forms.is_empty() || phi.is_some() {
                    let alg = OSAlgebra::new(&arr);
                    let rank = a.nrows();
                    let tf = forms
                        .iter()
                        .map(|f| {
                            let c = DegreeOneClass::from_laurent(&parse_laurent(&alg, rank, f)?, rank)?;
                            TwistedForm::new(c.form, c.k)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let m = match phi {
                        Some(s) => parse_ints(&s)?,
                        None => vec![0; rank],
                    };
                    let v = iterated_integral(&arr, &a, r.as_ref(), &tf, &m, &l)?;
                    let _ = writeln!(text, "integral: {}", complex(&v));
                    js["integral"] = complex_json(&v);
                }
            } else if !forms.is_empty() {
                return Err(Error::Malformed("--form needs --a".into()));
            }
            Ok((common.format, Report { text, json: js }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok((Format::Text, r)) => {
            print!("{}", r.text);
            ExitCode::SUCCESS
        }
        Ok((Format::Json, r)) => {
            println!("{}", serde_json::to_string_pretty(&r.json).expect("json output"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
