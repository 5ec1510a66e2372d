//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when the input is rejected (parse, schema or
//! validation errors), 2 when a computation fails. Diagnostics go to the
//! error stream, prefixed with the error name.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convolution::{convolve, ts_infinity, MeasureZeta};
use crate::error::{Error, Result};
use crate::exactring::EPoly;
use crate::grothendieck::EqClass;
use crate::kapranov::{functional_equation_check, sym_powers, verify_rational};
use crate::mckay::{mckay_compare, AbelianAction};
use crate::output::{mrat_latex, Format, Rendered};
use crate::resolution::{builtin_fixture, fixture_names, Mode, ResolutionData};
use crate::zeta::{
    acampo_lefschetz, denef_loeser, igusa_zeta, measure_pushforward, monodromy_zeta,
    motivic_nearby, nearby_class, topological_specialization, topological_zeta,
    vanishing_class, Form,
};

#[derive(Parser, Debug)]
#[command(
    name = "motivica",
    version,
    about = "Exact motivic, topological, Igusa and monodromy zeta functions from resolution data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Resolution data JSON file, or a directory of them (batch mode).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in fixture, e.g. cuspA or xN(3).
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct Out {
    /// text, json or latex.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args, Debug, Clone)]
struct ModeArg {
    /// local (over the locus) or global (all strata).
    #[arg(long, default_value = "local")]
    mode: String,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Motivic nearby series S(f) over the locus.
    Zeta {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
        /// Also expand to this order.
        #[arg(long)]
        order: Option<u32>,
    },
    /// Nearby cycle class ψ.
    Nearby {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// Vanishing cycle class φ.
    Vanishing {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// Hodge spectrum of φ.
    Spectrum {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// Topological zeta function.
    Topzeta {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Igusa local zeta function from point counts.
    Igusa {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
        /// Evaluate at this prime power.
        #[arg(long)]
        q: Option<String>,
    },
    /// Motivic (Denef–Loeser) zeta function.
    Dlzeta {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
        #[command(flatten)]
        mode: ModeArg,
        /// Also expand to this order.
        #[arg(long)]
        order: Option<u32>,
    },
    /// Monodromy zeta function.
    Monodromy {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// Lefschetz numbers of powers of the monodromy.
    Acampo {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
        /// A single power; otherwise 1..=order.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 12)]
        order: u32,
    },
    /// Direct image of the motivic measure.
    Pushforward {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
        #[arg(long, default_value = "global")]
        mode: String,
        /// open (strata E_I°) or closed (intersections E_I).
        #[arg(long, default_value = "open")]
        form: String,
    },
    /// Convolution of two measures given by nearby series or measure JSON.
    Convolve {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
        /// Second operand as a file.
        #[arg(long)]
        with_input: Option<PathBuf>,
        /// Second operand as a fixture.
        #[arg(long)]
        with_fixture: Option<String>,
        #[arg(long, default_value_t = 8)]
        order: u32,
        /// Value at T = ∞ of the convolution of two massless measures.
        #[arg(long)]
        infinity: bool,
    },
    /// Compare the orbifold weight of a group with the stringy invariant.
    Mckay {
        /// Group JSON {"m", "dim", "generators"}.
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// Kapranov zeta function of a class.
    Kapranov {
        /// E-polynomial, e.g. "1 - 2u - 2v + uv".
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 8)]
        order: u32,
        /// Candidate denominator factors a,b for (1 - u^a v^b T).
        #[arg(long = "factor", value_name = "A,B")]
        factors: Vec<String>,
        /// Numerator degree bound for --factor (default: order / 2).
        #[arg(long)]
        degree: Option<usize>,
        /// Check the functional equation of a curve class.
        #[arg(long)]
        functional_equation: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Validate resolution data.
    Validate {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// List the built-in fixtures, or print one as JSON.
    Fixtures {
        #[arg(long)]
        fixture: Option<String>,
        #[command(flatten)]
        out: Out,
    },
}

impl Command {
    fn source(&self) -> Option<&Source> {
        use Command::*;
        match self {
            Zeta { src, .. }
            | Nearby { src, .. }
            | Vanishing { src, .. }
            | Spectrum { src, .. }
            | Topzeta { src, .. }
            | Igusa { src, .. }
            | Dlzeta { src, .. }
            | Monodromy { src, .. }
            | Acampo { src, .. }
            | Pushforward { src, .. }
            | Convolve { src, .. }
            | Mckay { src, .. }
            | Validate { src, .. } => Some(src),
            Kapranov { .. } | Fixtures { .. } => None,
        }
    }

    fn format(&self) -> &str {
        use Command::*;
        match self {
            Zeta { out, .. }
            | Nearby { out, .. }
            | Vanishing { out, .. }
            | Spectrum { out, .. }
            | Topzeta { out, .. }
            | Igusa { out, .. }
            | Dlzeta { out, .. }
            | Monodromy { out, .. }
            | Acampo { out, .. }
            | Pushforward { out, .. }
            | Convolve { out, .. }
            | Mckay { out, .. }
            | Kapranov { out, .. }
            | Validate { out, .. }
            | Fixtures { out, .. } => &out.format,
        }
    }
}

/// Result of one invocation on one input.
struct Outcome {
    stdout: String,
    stderr: String,
    code: i32,
}

struct Loaded {
    res: ResolutionData,
    name: String,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(src: &Source, path: Option<&Path>, warnings: &mut Vec<String>) -> Result<Loaded> {
    let path = path.or(src.input.as_deref());
    match (path, &src.fixture) {
        (Some(_), Some(_)) => Err(Error::Parse("give either --input or --fixture, not both".into())),
        (None, None) => Err(Error::Parse("one of --input or --fixture is required".into())),
        (Some(p), None) => {
            let res = ResolutionData::from_json(&read(p)?)?;
            warnings.extend(res.validate()?);
            Ok(Loaded {
                res,
                name: p.display().to_string(),
            })
        }
        (None, Some(f)) => {
            let fx = builtin_fixture(f)?;
            warnings.extend(fx.data.validate()?);
            Ok(Loaded {
                res: fx.data,
                name: fx.name,
            })
        }
    }
}

fn load_measure(path: Option<&Path>, fixture: Option<&str>) -> Result<MeasureZeta> {
    match (path, fixture) {
        (Some(_), Some(_)) => Err(Error::Parse("give one source per operand".into())),
        (None, None) => Err(Error::Parse("missing convolution operand".into())),
        (None, Some(f)) => {
            let fx = builtin_fixture(f)?;
            fx.data.validate()?;
            MeasureZeta::from_nearby(&fx.data, &fx.name)
        }
        (Some(p), None) => {
            let text = read(p)?;
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            if v.get("series").is_some() {
                let m: MeasureZeta =
                    serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))?;
                MeasureZeta::new(m.series, m.provenance)
            } else if v.get("terms").is_some() {
                let s = serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))?;
                MeasureZeta::new(s, p.display().to_string())
            } else {
                let res = ResolutionData::from_json(&text)?;
                res.validate()?;
                MeasureZeta::from_nearby(&res, &p.display().to_string())
            }
        }
    }
}

fn parse_mode(s: &str) -> Result<Mode> {
    s.parse()
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct Lefschetz {
    pub n: u32,
    pub lambda: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct FixtureInfo {
    pub name: String,
    pub note: String,
}

fn lines<T: std::fmt::Display>(items: impl IntoIterator<Item = (String, T)>) -> String {
    items
        .into_iter()
        .map(|(k, v)| format!("{k}: {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn expansion_of(series: &crate::exactring::Series<EqClass>, order: u32) -> Vec<EqClass> {
    (0..=order).map(|n| series.get(n)).collect()
}

fn nonzero_lines(coeffs: &[EqClass]) -> String {
    let items = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (format!("T^{n}"), c.to_string()));
    let s = lines(items);
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn compute(cmd: &Command, path: Option<&Path>, warnings: &mut Vec<String>) -> Result<Rendered> {
    use Command::*;
    match cmd {
        Zeta { src, order, .. } => {
            let l = load(src, path, warnings)?;
            let s = motivic_nearby(&l.res)?;
            let mut r = Rendered::new("motivic_nearby_series", &s, s.to_string(), mrat_latex(&s))?
                .with("source", &l.name);
            if let Some(k) = order {
                let coeffs = expansion_of(&s.expand(*k), *k);
                r.text = format!("{}\n{}", r.text, nonzero_lines(&coeffs));
                r = r.with("expansion", coeffs);
            }
            Ok(r)
        }
        Nearby { src, .. } => {
            let l = load(src, path, warnings)?;
            let psi = nearby_class(&l.res)?;
            Ok(Rendered::new("nearby_class", &psi, psi.to_string(), psi.to_latex())?
                .with("source", &l.name)
                .with("euler_underlying", psi.underlying().euler().to_string())
                .with("euler_augmentation", psi.augmentation().euler().to_string()))
        }
        Vanishing { src, .. } => {
            let l = load(src, path, warnings)?;
            let phi = vanishing_class(&l.res)?;
            Ok(Rendered::new("vanishing_class", &phi, phi.to_string(), phi.to_latex())?
                .with("source", &l.name))
        }
        Spectrum { src, .. } => {
            let l = load(src, path, warnings)?;
            let h = vanishing_class(&l.res)?.spe();
            let sp = h.spectrum_poly();
            Ok(Rendered::new("spectrum", &h, sp.to_string(), h.epoly().to_latex())?
                .with("source", &l.name)
                .with("hodge", h.to_string()))
        }
        Topzeta { src, mode, .. } => {
            let l = load(src, path, warnings)?;
            let z = topological_zeta(&l.res, parse_mode(&mode.mode)?)?;
            let at0 = z.eval(&BigRational::zero()).map(|x| x.to_string()).ok();
            Ok(Rendered::new("topological_zeta", &z, z.to_string(), z.to_latex())?
                .with("source", &l.name)
                .with("at_zero", at0))
        }
        Igusa { src, q, .. } => {
            let l = load(src, path, warnings)?;
            let z = igusa_zeta(&l.res)?;
            let mut r = Rendered::new("igusa_zeta", &z, z.to_string(), z.to_latex())?
                .with("source", &l.name);
            if let Some(q) = q {
                let qv: BigInt = q
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("--q expects an integer, got \"{q}\"")))?;
                let numeric = z.at_q(&qv)?;
                r.text = numeric.clone();
                r = r.with("q", q.trim()).with("numeric", numeric);
            }
            Ok(r)
        }
        Dlzeta { src, mode, order, .. } => {
            let l = load(src, path, warnings)?;
            let z = denef_loeser(&l.res, parse_mode(&mode.mode)?)?;
            let top = topological_specialization(&z).map(|t| t.to_string()).ok();
            let mut r = Rendered::new("motivic_zeta", &z, z.to_string(), mrat_latex(&z))?
                .with("source", &l.name)
                .with("topological", top);
            if let Some(k) = order {
                let s = z.expand(*k);
                let coeffs: Vec<EPoly> = (0..=*k).map(|n| s.get(n)).collect();
                let text = lines(
                    coeffs
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(n, c)| (format!("T^{n}"), c.to_string())),
                );
                r.text = format!("{}\n{}", r.text, text);
                r = r.with("expansion", coeffs);
            }
            Ok(r)
        }
        Monodromy { src, .. } => {
            let l = load(src, path, warnings)?;
            let z = monodromy_zeta(&l.res)?;
            let logd: Vec<String> = z.log_derivative(12).iter().map(|c| c.to_string()).collect();
            Ok(Rendered::new("monodromy_zeta", &z, z.to_string(), z.to_latex())?
                .with("source", &l.name)
                .with("lefschetz", logd))
        }
        Acampo { src, n, order, .. } => {
            let l = load(src, path, warnings)?;
            let ns: Vec<u32> = match n {
                Some(n) => vec![*n],
                None => (1..=*order).collect(),
            };
            let mut vals = Vec::new();
            for k in ns {
                vals.push(Lefschetz {
                    n: k,
                    lambda: acampo_lefschetz(&l.res, k)?.to_string(),
                });
            }
            let text = lines(vals.iter().map(|v| (format!("Lambda_{}", v.n), v.lambda.clone())));
            let latex = vals
                .iter()
                .map(|v| format!("\\Lambda_{{{}}} = {}", v.n, v.lambda))
                .collect::<Vec<_>>()
                .join(",\\ ");
            Ok(Rendered::new("lefschetz_numbers", &vals, text, latex)?.with("source", &l.name))
        }
        Pushforward { src, mode, form, .. } => {
            let l = load(src, path, warnings)?;
            let form: Form = form.parse()?;
            let p = measure_pushforward(&l.res, parse_mode(mode)?, form)?;
            Ok(Rendered::new("pushforward", &p, p.value.to_string(), p.value.to_latex())?
                .with("source", &l.name)
                .with("euler_value", &p.euler_value))
        }
        Convolve {
            src,
            with_input,
            with_fixture,
            order,
            infinity,
            ..
        } => {
            let a = load_measure(path.or(src.input.as_deref()), src.fixture.as_deref())?;
            let b = load_measure(with_input.as_deref(), with_fixture.as_deref())?;
            if *infinity {
                let v = ts_infinity(&a, &b)?;
                Ok(Rendered::new("convolution_at_infinity", &v, v.to_string(), v.to_latex())?)
            } else {
                let coeffs = expansion_of(&convolve(&a, &b, *order)?, *order);
                let latex = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(n, c)| format!("{}\\,T^{{{n}}}", c.to_latex()))
                    .collect::<Vec<_>>()
                    .join(" + ");
                Ok(Rendered::new("convolution", &coeffs, nonzero_lines(&coeffs), latex)?
                    .with("order", order))
            }
        }
        Mckay { group, src, .. } => {
            let g = AbelianAction::from_json(&read(group)?)?;
            let l = load(src, path, warnings)?;
            let rep = mckay_compare(&g, &l.res)?;
            let text = format!(
                "equal: {}\ndifference: {}\norbifold: {}\nstringy: {}",
                rep.equal, rep.difference, rep.orbifold, rep.stringy
            );
            let latex = format!("{} - ({}) = {}", rep.orbifold.to_latex(), rep.stringy.to_latex(), rep.difference.to_latex());
            Ok(Rendered::new("mckay", &rep, text, latex)?.with("source", &l.name))
        }
        Kapranov {
            class,
            order,
            factors,
            degree,
            functional_equation,
            ..
        } => {
            let e = EPoly::parse(class)?;
            if *functional_equation {
                let f = functional_equation_check(&e, *order)?;
                let text = format!(
                    "genus: {}\nholds: {}\nnumerator: {}",
                    f.genus,
                    f.holds,
                    poly_in_t(&f.numerator)
                );
                let latex = format!("P(T) = {}", poly_in_t(&f.numerator));
                return Rendered::new("kapranov_functional_equation", &f, text, latex);
            }
            let z = sym_powers(&e, *order)?;
            if !factors.is_empty() {
                let fs = factors.iter().map(|s| parse_factor(s)).collect::<Result<Vec<_>>>()?;
                let check = verify_rational(&z, &fs, degree.unwrap_or(*order as usize / 2));
                let text = format!(
                    "rational: {}\nnumerator: {}",
                    check.rational,
                    poly_in_t(&check.numerator)
                );
                return Rendered::new("kapranov_rationality", &check, text.clone(), text);
            }
            let text = lines(z.iter().enumerate().map(|(n, c)| (format!("Sym^{n}"), c.to_string())));
            let latex = z
                .iter()
                .enumerate()
                .map(|(n, c)| format!("\\left({}\\right)T^{{{n}}}", c.to_latex()))
                .collect::<Vec<_>>()
                .join(" + ");
            Rendered::new("kapranov_series", &z, text, latex)
        }
        Validate { src, .. } => {
            let l = load(src, path, warnings)?;
            let report = ValidationReport {
                valid: true,
                warnings: std::mem::take(warnings),
            };
            let mut text = format!("valid: {}", l.name);
            for w in &report.warnings {
                text.push_str(&format!("\nwarning: {w}"));
            }
            Rendered::new("validation", &report, text.clone(), text)
        }
        Fixtures { fixture, .. } => match fixture {
            Some(name) => {
                let fx = builtin_fixture(name)?;
                let v = fx.data.to_json_value();
                Ok(Rendered::new("fixture", &v, fx.data.to_json(), fx.data.to_json())?
                    .with("note", fx.note))
            }
            None => {
                let infos: Vec<FixtureInfo> = fixture_names()
                    .into_iter()
                    .map(|n| {
                        let note = builtin_fixture(&n).map(|f| f.note).unwrap_or_default();
                        FixtureInfo { name: n, note }
                    })
                    .collect();
                let text = lines(infos.iter().map(|i| (i.name.clone(), i.note.clone())));
                Rendered::new("fixtures", &infos, text.clone(), text)
            }
        },
    }
}

fn poly_in_t(c: &[EPoly]) -> String {
    let parts: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(n, x)| match n {
            0 => format!("({x})"),
            1 => format!("({x})*T"),
            _ => format!("({x})*T^{n}"),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn parse_factor(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse(format!("factor \"{s}\" should be A,B"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn execute(cmd: &Command, path: Option<&Path>) -> Outcome {
    let mut warnings = Vec::new();
    let result = cmd.format().parse::<Format>().and_then(|f| Ok((f, compute(cmd, path, &mut warnings)?)));
    let mut stderr = String::new();
    for w in &warnings {
        stderr.push_str(&format!("warning: {w}\n"));
    }
    match result {
        Ok((format, r)) => Outcome {
            stdout: r.render(format) + "\n",
            stderr,
            code: 0,
        },
        Err(e) => {
            stderr.push_str(&format!("{e}\n"));
            Outcome {
                stdout: String::new(),
                stderr,
                code: if e.is_input_error() { 1 } else { 2 },
            }
        }
    }
}

fn batch_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "ParseError: {text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let cmd = cli.command;
    let dir = cmd
        .source()
        .and_then(|s| s.input.clone())
        .filter(|p| p.is_dir());
    let outcomes: Vec<(Option<PathBuf>, Outcome)> = match dir {
        None => vec![(None, execute(&cmd, None))],
        Some(dir) => match batch_files(&dir) {
            Ok(files) => files
                .into_par_iter()
                .map(|f| {
                    let o = execute(&cmd, Some(&f));
                    (Some(f), o)
                })
                .collect(),
            Err(e) => {
                let _ = writeln!(stderr, "{e}");
                return 1;
            }
        },
    };
    let mut code = 0;
    for (file, o) in outcomes {
        if let Some(f) = &file {
            let _ = writeln!(stdout, "== {} ==", f.display());
            if !o.stderr.is_empty() {
                let _ = write!(stderr, "== {} ==\n", f.display());
            }
        }
        let _ = write!(stdout, "{}", o.stdout);
        let _ = write!(stderr, "{}", o.stderr);
        code = code.max(o.code);
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut argv = vec!["motivica".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn text_outputs() {
        let (c, out, _) = call(&["igusa", "--fixture", "xN(1)"]);
        assert_eq!(c, 0);
        assert_eq!(out.trim(), "(1-q^(-1))/(1-q^(-1-s))");
        let (_, out, _) = call(&["monodromy", "--fixture", "cuspA"]);
        assert_eq!(out.trim(), "(1-t+t^2)/(1-t)");
        let (_, out, _) = call(&["spectrum", "--fixture", "cuspA"]);
        assert_eq!(out.trim(), "t^(5/6) + t^(7/6)");
    }

    #[test]
    fn exit_codes() {
        let (c, _, err) = call(&["topzeta", "--fixture", "nosuch"]);
        assert_eq!(c, 1);
        assert!(err.starts_with("UnknownFixture"));
        let (c, _, err) = call(&["igusa", "--fixture", "node"]);
        assert_eq!(c, 2);
        assert!(err.lines().last().unwrap().starts_with("MissingCounts"));
        let (c, _, _) = call(&["topzeta", "--fixture", "cuspA", "--format", "xml"]);
        assert_eq!(c, 1);
        let (c, _, _) = call(&["nonsense"]);
        assert_eq!(c, 1);
    }

    #[test]
    fn acampo_single_and_range() {
        let (_, out, _) = call(&["acampo", "--fixture", "cuspA", "--n", "6"]);
        assert_eq!(out.trim(), "Lambda_6: -1");
        let (_, out, _) = call(&["acampo", "--fixture", "cuspA", "--order", "3"]);
        assert_eq!(out.trim(), "Lambda_1: 0\nLambda_2: 2\nLambda_3: 3");
    }

    #[test]
    fn kapranov_modes() {
        let (_, out, _) = call(&["kapranov", "--class", "1 + uv", "--factor", "0,0", "--factor", "1,1"]);
        assert!(out.starts_with("rational: true"));
        let (_, out, _) = call(&["kapranov", "--class", "1 - 2u - 2v + uv", "--functional-equation"]);
        assert!(out.contains("holds: true"));
    }
}
