//! Command-line surface: `ginv compute|verify|solve|bench`.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::characterizations::{self, System};
use crate::error::{GinvError, Result};
use crate::inverse::{self, InverseKind};
use crate::io;
use crate::problems::{self, NilpotentBlock, RandomKind};
use crate::solve::{self, SolveMode, SolveRequest};
use crate::tensor::{DenseTensor, TensorShape};

#[derive(Debug, Parser)]
#[command(
    name = "ginv",
    version,
    about = "Tensor generalized inverses under the Einstein product"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a generalized inverse of a tensor file and report the
    /// residuals of its defining equations.
    Compute {
        /// Input tensor file
        #[arg(long = "in")]
        input: PathBuf,
        /// Inverse kind: mp|drazin|core-ep|cmp|mpd|dmp|mpcep|cepmp
        #[arg(long)]
        kind: String,
        /// Residual tolerance
        #[arg(long, default_value_t = inverse::DEFAULT_TOL)]
        tol: f64,
        /// Directory for the output tensor file
        #[arg(long = "out-dir", default_value = ".")]
        out_dir: PathBuf,
    },
    /// Verify that a candidate tensor satisfies an equation set or a
    /// characterizing system; exit 0 iff satisfied at tolerance.
    Verify {
        /// Operator tensor file
        #[arg(long = "in")]
        input: PathBuf,
        /// Candidate inverse tensor file
        #[arg(long)]
        rhs: PathBuf,
        /// Check the defining equations of this inverse kind
        #[arg(long)]
        kind: Option<String>,
        /// Check a named system instead: penrose-all|penrose-1..4|
        /// cmp|dmp|mpd|mpcep|cepmp
        #[arg(long)]
        system: Option<String>,
        #[arg(long, default_value_t = inverse::DEFAULT_TOL)]
        tol: f64,
    },
    /// Solve a multilinear system D * Z = B through a composite inverse.
    Solve {
        /// Operator tensor file
        #[arg(long = "in")]
        input: PathBuf,
        /// Right-hand side: a tensor file path, or `from-range` /
        /// `from-range:seed=N` to synthesize B = D^k * S
        #[arg(long)]
        rhs: String,
        /// Solve mode: cmp_power|cmp_constrained|cmp_projected|
        /// dmp_constrained|mpd_constrained|mpcep_general|
        /// mpcep_constrained|cepmp_constrained
        #[arg(long)]
        mode: String,
        #[arg(long, default_value_t = inverse::DEFAULT_TOL)]
        tol: f64,
        /// Seed for synthesized right-hand sides and family samples
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// For general modes: also check this many sampled family members
        #[arg(long = "sample-q", default_value_t = 0)]
        sample_q: usize,
        #[arg(long = "out-dir", default_value = ".")]
        out_dir: PathBuf,
    },
    /// Benchmark residuals and timings across all inverse kinds.
    Bench {
        /// Problem spec: fixture | dirichlet:n=8[:block=N1|N2|N3] |
        /// neumann:n=20
        #[arg(long)]
        problem: String,
        #[arg(long, default_value_t = 30)]
        repeats: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = inverse::DEFAULT_TOL)]
        tol: f64,
        #[arg(long = "out-dir", default_value = ".")]
        out_dir: PathBuf,
    },
}

/// Maps library errors onto the documented exit codes.
fn exit_code(err: &GinvError) -> i32 {
    match err {
        GinvError::Parse(_) => 2,
        GinvError::NotSquare(_, _) => 3,
        GinvError::ConvergenceFailure => 4,
        GinvError::RhsNotInRange => 5,
        _ => 1,
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Compute {
            input,
            kind,
            tol,
            out_dir,
        } => cmd_compute(&input, &kind, tol, &out_dir),
        Command::Verify {
            input,
            rhs,
            kind,
            system,
            tol,
        } => cmd_verify(&input, &rhs, kind.as_deref(), system.as_deref(), tol),
        Command::Solve {
            input,
            rhs,
            mode,
            tol,
            seed,
            sample_q,
            out_dir,
        } => cmd_solve(&input, &rhs, &mode, tol, seed, sample_q, &out_dir),
        Command::Bench {
            problem,
            repeats,
            seed,
            tol,
            out_dir,
        } => cmd_bench(&problem, repeats, seed, tol, &out_dir),
    }
}

fn parse_kind(s: &str) -> Result<InverseKind> {
    InverseKind::parse(s).ok_or_else(|| GinvError::Parse(format!("unknown inverse kind '{s}'")))
}

fn cmd_compute(input: &Path, kind: &str, tol: f64, out_dir: &Path) -> Result<i32> {
    let kind = parse_kind(kind)?;
    let d = io::parse_tensor_file(input)?;
    let y = inverse::compute_inverse(&d, kind)?;
    std::fs::create_dir_all(out_dir)?;
    let out_path = out_dir.join(format!("{}.tns", kind.label()));
    io::write_tensor_file(&out_path, &y)?;
    println!("wrote {}", out_path.display());
    let residuals = inverse::verify_equations(&d, &y, inverse::defining_equations(kind))?;
    for (label, value) in residuals.iter() {
        println!("equation {:>3}: {value:e}", label.label());
    }
    println!(
        "max residual {:e} (tol {tol:e}): {}",
        residuals.max_residual(),
        if residuals.satisfied(tol) {
            "ok"
        } else {
            "FAILED"
        }
    );
    Ok(if residuals.satisfied(tol) { 0 } else { 1 })
}

fn cmd_verify(
    input: &Path,
    rhs: &Path,
    kind: Option<&str>,
    system: Option<&str>,
    tol: f64,
) -> Result<i32> {
    let d = io::parse_tensor_file(input)?;
    let z = io::parse_tensor_file(rhs)?;
    let (max_residual, listing) = match (kind, system) {
        (Some(kind), None) => {
            let kind = parse_kind(kind)?;
            let residuals = inverse::verify_equations(&d, &z, inverse::defining_equations(kind))?;
            let listing = residuals
                .iter()
                .map(|(l, v)| format!("equation {:>3}: {v:e}", l.label()))
                .collect::<Vec<_>>();
            (residuals.max_residual(), listing)
        }
        (None, Some(name)) => verify_named_system(&d, &z, name, tol)?,
        _ => {
            return Err(GinvError::Parse(
                "verify needs exactly one of --kind or --system".into(),
            ))
        }
    };
    for line in &listing {
        println!("{line}");
    }
    let ok = max_residual <= tol;
    println!(
        "max residual {max_residual:e} (tol {tol:e}): {}",
        if ok { "ok" } else { "FAILED" }
    );
    Ok(if ok { 0 } else { 1 })
}

fn verify_named_system(
    d: &DenseTensor,
    z: &DenseTensor,
    name: &str,
    tol: f64,
) -> Result<(f64, Vec<String>)> {
    use crate::inverse::EquationLabel;
    let penrose = [
        EquationLabel::Inner,
        EquationLabel::Outer,
        EquationLabel::HermDy,
        EquationLabel::HermYd,
    ];
    let labels: Option<Vec<EquationLabel>> = match name {
        "penrose-all" => Some(penrose.to_vec()),
        "penrose-1" => Some(vec![EquationLabel::Inner]),
        "penrose-2" => Some(vec![EquationLabel::Outer]),
        "penrose-3" => Some(vec![EquationLabel::HermDy]),
        "penrose-4" => Some(vec![EquationLabel::HermYd]),
        _ => None,
    };
    if let Some(labels) = labels {
        let residuals = inverse::verify_equations(d, z, &labels)?;
        let listing = residuals
            .iter()
            .map(|(l, v)| format!("equation {:>3}: {v:e}", l.label()))
            .collect::<Vec<_>>();
        return Ok((residuals.max_residual(), listing));
    }
    let system = match name {
        "cmp" => System::Cmp,
        "dmp" => System::Dmp,
        "mpd" => System::Mpd,
        "mpcep" => System::Mpcep,
        "cepmp" => System::Cepmp,
        other => return Err(GinvError::Parse(format!("unknown system '{other}'"))),
    };
    let res = characterizations::verify_system(d, z, &system, tol)?;
    let listing = res
        .eq_residuals
        .iter()
        .enumerate()
        .map(|(i, v)| format!("system equation {}: {v:e}", i + 1))
        .collect();
    Ok((res.max_residual(), listing))
}

fn synthesize_rhs(d: &DenseTensor, spec: &str, default_seed: u64) -> Result<DenseTensor> {
    let rest = spec.strip_prefix("from-range").unwrap();
    let seed = match rest.strip_prefix(":seed=") {
        Some(v) => v
            .parse::<u64>()
            .map_err(|_| GinvError::Parse(format!("bad seed in rhs spec '{spec}'")))?,
        None if rest.is_empty() => default_seed,
        None => return Err(GinvError::Parse(format!("bad rhs spec '{spec}'"))),
    };
    let k = inverse::tensor_index(d)?;
    let shape = TensorShape::new(d.shape().col_modes().to_vec(), vec![])?;
    let s = problems::random_tensor(shape, seed, RandomKind::Dense)?;
    let b = d.power(k)?.einstein_product(&s)?;
    // normalize so reported residuals are comparable across problem scales
    let norm = b.frobenius_norm();
    if norm == 0.0 {
        return Ok(b);
    }
    Ok(b.scale(num_complex::Complex64::new(1.0 / norm, 0.0)))
}

fn cmd_solve(
    input: &Path,
    rhs: &str,
    mode: &str,
    tol: f64,
    seed: u64,
    sample_q: usize,
    out_dir: &Path,
) -> Result<i32> {
    let mode = SolveMode::parse(mode)
        .ok_or_else(|| GinvError::Parse(format!("unknown solve mode '{mode}'")))?;
    let d = io::parse_tensor_file(input)?;
    let b = if rhs.starts_with("from-range") {
        synthesize_rhs(&d, rhs, seed)?
    } else {
        io::parse_tensor_file(Path::new(rhs))?
    };
    let mut req = SolveRequest::new(d.clone(), b.clone(), mode);
    req.tol = tol;
    std::fs::create_dir_all(out_dir)?;
    let bnorm = b.frobenius_norm().max(1.0);
    if mode.is_general() {
        let family = solve::solve_general(&req)?;
        io::write_tensor_file(&out_dir.join("z0.tns"), &family.particular)?;
        io::write_tensor_file(&out_dir.join("projector.tns"), &family.projector)?;
        println!("system: {}", family.constraint_desc);
        let res = solve::general_system_residual(&d, &family.particular, &b, mode)?;
        println!("particular residual: {res:e}");
        let mut worst = res;
        for i in 0..sample_q {
            let q = problems::random_tensor(
                b.shape().clone(),
                seed.wrapping_add(1 + i as u64),
                RandomKind::Dense,
            )?;
            let member = family.member(&q)?;
            let r = solve::general_system_residual(&d, &member, &b, mode)?;
            println!("family member {}: residual {r:e}", i + 1);
            worst = worst.max(r);
        }
        Ok(if worst <= tol.max(1e-8) { 0 } else { 1 })
    } else {
        let z = solve::solve_constrained(&req)?;
        io::write_tensor_file(&out_dir.join("z.tns"), &z)?;
        let residual = d.einstein_product(&z)?.sub(&b)?.frobenius_norm() / bnorm;
        let generator = solve::advertised_range_generator(&d, mode)?;
        let in_range = characterizations::range_contains(&generator, &z)?;
        println!("residual ||D*Z-B||/||B||: {residual:e}");
        println!("solution in advertised range: {in_range}");
        Ok(if residual <= tol.max(1e-6) && in_range {
            0
        } else {
            1
        })
    }
}

/// Builds a named benchmark problem from a spec such as
/// `dirichlet:n=8:block=N2`.
pub fn build_problem(spec: &str) -> Result<DenseTensor> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default();
    let mut n: Option<usize> = None;
    let mut block: Option<NilpotentBlock> = None;
    for part in parts {
        if let Some(v) = part.strip_prefix("n=") {
            n = Some(
                v.parse()
                    .map_err(|_| GinvError::Parse(format!("bad n in problem spec '{spec}'")))?,
            );
        } else if let Some(v) = part.strip_prefix("block=") {
            block =
                Some(NilpotentBlock::parse(v).ok_or_else(|| {
                    GinvError::Parse(format!("bad block in problem spec '{spec}'"))
                })?);
        } else {
            return Err(GinvError::Parse(format!(
                "unknown field '{part}' in problem spec '{spec}'"
            )));
        }
    }
    match name {
        "fixture" => Ok(problems::paper_fixture().tensor),
        "dirichlet" => {
            let base = problems::dirichlet_poisson(n.unwrap_or(8))?;
            match block {
                Some(b) => problems::augment_nilpotent(&base, b),
                None => Ok(base),
            }
        }
        "neumann" => problems::neumann_poisson(n.unwrap_or(20)),
        other => Err(GinvError::Parse(format!("unknown problem '{other}'"))),
    }
}

fn cmd_bench(problem: &str, repeats: usize, seed: u64, tol: f64, out_dir: &Path) -> Result<i32> {
    let d = build_problem(problem)?;
    let b = synthesize_rhs(&d, "from-range", seed)?;
    let report = solve::residual_report(&d, &b, &InverseKind::ALL, repeats)?;
    std::fs::create_dir_all(out_dir)?;
    let order = d.shape().row_modes().len() + d.shape().col_modes().len();
    let mut csv = String::from(io::BENCH_CSV_HEADER);
    csv.push('\n');
    for row in &report.rows {
        csv.push_str(&io::bench_csv_row(
            problem,
            order,
            report.index,
            report.nnz,
            row.kind.label(),
            row.residual,
            row.mean_time_s(),
            report.repeats,
            seed,
        ));
        csv.push('\n');
    }
    let csv_path = out_dir.join("bench.csv");
    std::fs::write(&csv_path, &csv)?;
    println!("wrote {}", csv_path.display());
    let _ = tol;
    if problem.starts_with("neumann") {
        emit_neumann_surfaces(&d, &b, out_dir)?;
    }
    Ok(0)
}

/// Solution grids for the index-1 kinds, as heatmap CSVs plus a plot script.
fn emit_neumann_surfaces(d: &DenseTensor, b: &DenseTensor, out_dir: &Path) -> Result<()> {
    let kinds = [
        InverseKind::Mp,
        InverseKind::Drazin,
        InverseKind::CoreEp,
        InverseKind::Mpd,
    ];
    let n = d.shape().row_modes()[0];
    let mut plot = String::from("# gnuplot script for the solution surfaces\nset view map\n");
    for kind in kinds {
        let k_inv = inverse::compute_inverse(d, kind)?;
        let z = k_inv.einstein_product(b)?;
        let mut grid = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| format!("{:e}", z.entries()[i * n + j].re))
                .collect();
            grid.push_str(&row.join(","));
            grid.push('\n');
        }
        let name = format!("neumann_{}.csv", kind.label());
        std::fs::write(out_dir.join(&name), grid)?;
        plot.push_str(&format!(
            "splot '{name}' matrix with image title '{}'\npause -1\n",
            kind.label()
        ));
    }
    std::fs::write(out_dir.join("plot_neumann.gp"), plot)?;
    println!("wrote {}", out_dir.join("plot_neumann.gp").display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_specs_parse() {
        assert!(build_problem("fixture").is_ok());
        let d = build_problem("dirichlet:n=3:block=N1").unwrap();
        assert_eq!(inverse::tensor_index(&d).unwrap(), 3);
        assert!(build_problem("neumann:n=4").is_ok());
        assert!(matches!(build_problem("bogus"), Err(GinvError::Parse(_))));
        assert!(matches!(
            build_problem("dirichlet:m=3"),
            Err(GinvError::Parse(_))
        ));
    }

    #[test]
    fn rhs_spec_parses() {
        let d = problems::paper_fixture().tensor;
        let b1 = synthesize_rhs(&d, "from-range", 7).unwrap();
        let b2 = synthesize_rhs(&d, "from-range:seed=7", 0).unwrap();
        assert_eq!(b1.entries(), b2.entries());
        assert!(matches!(
            synthesize_rhs(&d, "from-range:seed=x", 0),
            Err(GinvError::Parse(_))
        ));
    }

    #[test]
    fn exit_codes_match_contract() {
        assert_eq!(exit_code(&GinvError::Parse("x".into())), 2);
        assert_eq!(exit_code(&GinvError::NotSquare(vec![2], vec![3])), 3);
        assert_eq!(exit_code(&GinvError::ConvergenceFailure), 4);
        assert_eq!(exit_code(&GinvError::RhsNotInRange), 5);
    }
}
