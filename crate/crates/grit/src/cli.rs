//! Command-line front end.
//!
//! Four subcommands: `check` verifies a GRIT proof against a DIMACS
//! formula, `convert` turns a DRUP trace into GRIT, `trim` minimizes an
//! existing proof, and `gen` writes benchmark families. Every command
//! exits 0 on success, 1 when the input proof or trace is invalid, and
//! 2 when an input cannot be read at all (missing file, malformed
//! syntax, I/O failure).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::checker::{refute_with_stats, RejectionReason, Verdict};
use crate::convert::{backward_trim, convert, convert_streaming, ConvertError, ConvertErrorKind, TrimError};
use crate::dimacs::{parse_dimacs, ParsedCnf};
use crate::proof::{write_grit_action, DrupReader, GritReader, ProofAction};
use crate::testkit::{complete_tree_clause, visit_complete_tree, GenError};

pub const EXIT_OK: u8 = 0;
/// The input was readable but the proof or trace in it does not hold.
pub const EXIT_INVALID: u8 = 1;
/// The input could not be read: missing file, syntax error, I/O failure.
pub const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "grit",
    version,
    about = "Check GRIT unsatisfiability proofs and convert DRUP traces"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify a GRIT proof against a DIMACS CNF formula
    Check {
        /// DIMACS CNF file
        cnf: PathBuf,
        /// GRIT proof file
        proof: PathBuf,
        /// Print run counters to stderr
        #[arg(long)]
        stats: bool,
        /// Print only VERIFIED or REJECTED, without detail
        #[arg(long)]
        quiet: bool,
    },
    /// Convert a DRUP trace into a GRIT proof
    Convert {
        /// DIMACS CNF file the trace refutes
        cnf: PathBuf,
        /// DRUP trace file
        drup: PathBuf,
        /// GRIT file to write
        out: PathBuf,
        /// Keep only the lines the refutation uses and delete each
        /// clause right after its last use
        #[arg(long)]
        trim: bool,
        /// Print conversion counters to stderr
        #[arg(long)]
        stats: bool,
    },
    /// Re-derive a GRIT proof's deletions and drop lines it never uses
    Trim {
        /// DIMACS CNF file
        cnf: PathBuf,
        /// GRIT proof file to minimize
        proof: PathBuf,
        /// GRIT file to write
        out: PathBuf,
    },
    /// Write a generated formula and its refutation
    Gen {
        /// Proof family
        family: Family,
        /// Size parameter (tree depth)
        #[arg(value_parser = clap::value_parser!(u32).range(1..=24))]
        n: u32,
        /// DIMACS file to write
        out_cnf: PathBuf,
        /// GRIT file to write
        out_proof: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Family {
    /// One clause per assignment over n variables, refuted bottom-up
    CompleteTree,
}

/// Parse real argv, run, and map the result to a process exit code.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(dispatch(&cli, &mut io::stdout().lock(), &mut io::stderr().lock()))
}

pub fn dispatch(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> u8 {
    match &cli.command {
        Command::Check { cnf, proof, stats, quiet } => {
            cmd_check(cnf, proof, *stats, *quiet, out, err)
        }
        Command::Convert { cnf, drup, out: out_path, trim, stats } => {
            cmd_convert(cnf, drup, out_path, *trim, *stats, err)
        }
        Command::Trim { cnf, proof, out: out_path } => cmd_trim(cnf, proof, out_path, err),
        Command::Gen { family: Family::CompleteTree, n, out_cnf, out_proof } => {
            cmd_gen(*n, out_cnf, out_proof, err)
        }
    }
}

/// `error:` in red when GRIT_COLOR asks for it; plain otherwise.
fn error_prefix() -> &'static str {
    match std::env::var("GRIT_COLOR").as_deref() {
        Ok("1") | Ok("always") => "\x1b[31merror:\x1b[0m",
        _ => "error:",
    }
}

fn fail(err: &mut impl Write, path: &Path, message: impl std::fmt::Display) -> u8 {
    let _ = writeln!(err, "{} {}: {message}", error_prefix(), path.display());
    EXIT_ERROR
}

fn load_formula(path: &Path, err: &mut impl Write) -> Result<ParsedCnf, u8> {
    let file = File::open(path).map_err(|e| fail(err, path, e))?;
    let parsed = parse_dimacs(file).map_err(|e| fail(err, path, e))?;
    for warning in &parsed.warnings {
        let _ = writeln!(err, "warning: {}: {warning}", path.display());
    }
    Ok(parsed)
}

pub fn cmd_check(
    cnf: &Path,
    proof: &Path,
    stats: bool,
    quiet: bool,
    out: &mut impl Write,
    err: &mut impl Write,
) -> u8 {
    let started = Instant::now();
    let parsed = match load_formula(cnf, err) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let file = match File::open(proof) {
        Ok(f) => f,
        Err(e) => return fail(err, proof, e),
    };
    let mut reader = GritReader::new(file);
    let (verdict, run) = refute_with_stats(&parsed.formula, &mut reader);
    let code = match &verdict {
        Verdict::Verified => EXIT_OK,
        Verdict::Rejected { reason: RejectionReason::ParseFailure(_), .. } => EXIT_ERROR,
        Verdict::Rejected { .. } => EXIT_INVALID,
    };
    if quiet {
        let _ = writeln!(out, "{}", if code == EXIT_OK { "VERIFIED" } else { "REJECTED" });
    } else {
        let _ = writeln!(out, "{verdict}");
    }
    if stats {
        let _ = writeln!(err, "proof lines applied: {}", run.actions);
        let _ = writeln!(err, "live clauses: {} at end, {} peak", run.live.count, run.live.peak);
        let _ = writeln!(
            err,
            "proof bytes read: {} ({} peak buffered)",
            reader.bytes_read(),
            reader.peak_buffered()
        );
        let _ = writeln!(err, "elapsed: {:.1?}", started.elapsed());
    }
    code
}

fn convert_exit(err: &mut impl Write, drup: &Path, e: &ConvertError) -> u8 {
    let _ = writeln!(err, "{} {}: {e}", error_prefix(), drup.display());
    match e.kind {
        ConvertErrorKind::RupFailed(_)
        | ConvertErrorKind::DeleteMissing(_)
        | ConvertErrorKind::NoEmptyClause => EXIT_INVALID,
        ConvertErrorKind::Parse(_) | ConvertErrorKind::Io(_) => EXIT_ERROR,
    }
}

pub fn cmd_convert(
    cnf: &Path,
    drup: &Path,
    out_path: &Path,
    trim: bool,
    stats: bool,
    err: &mut impl Write,
) -> u8 {
    let started = Instant::now();
    let parsed = match load_formula(cnf, err) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let drup_file = match File::open(drup) {
        Ok(f) => f,
        Err(e) => return fail(err, drup, e),
    };
    let reader = DrupReader::new(drup_file);

    let summary = if trim {
        // Trimming needs the whole proof in memory before anything can
        // be written: the last line decides what the first line keeps.
        // The output file is only touched once conversion succeeds.
        let output = match convert(&parsed.formula, reader, true) {
            Ok(output) => output,
            Err(e) => return convert_exit(err, drup, &e),
        };
        let out_file = match File::create(out_path) {
            Ok(f) => f,
            Err(e) => return fail(err, out_path, e),
        };
        let mut writer = BufWriter::new(out_file);
        for action in &output.actions {
            if let Err(e) = write_grit_action(&mut writer, action) {
                return fail(err, out_path, e);
            }
        }
        if let Err(e) = writer.flush() {
            return fail(err, out_path, e);
        }
        output.summary
    } else {
        // Untrimmed conversion streams: each emitted line is final.
        let out_file = match File::create(out_path) {
            Ok(f) => f,
            Err(e) => return fail(err, out_path, e),
        };
        let mut writer = BufWriter::new(out_file);
        match convert_streaming(&parsed.formula, reader, |a| write_grit_action(&mut writer, a)) {
            Ok(summary) => match writer.flush() {
                Ok(()) => summary,
                Err(e) => return fail(err, out_path, e),
            },
            Err(e) => return convert_exit(err, drup, &e),
        }
    };
    if stats {
        let _ = writeln!(err, "lemmas checked: {}", summary.lemmas_checked);
        let _ = writeln!(
            err,
            "emitted: {} originals, {} lemmas, {} deletions",
            summary.originals_emitted, summary.lemmas_emitted, summary.deletions_emitted
        );
        let _ = writeln!(err, "elapsed: {:.1?}", started.elapsed());
    }
    EXIT_OK
}

pub fn cmd_trim(cnf: &Path, proof: &Path, out_path: &Path, err: &mut impl Write) -> u8 {
    let parsed = match load_formula(cnf, err) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let file = match File::open(proof) {
        Ok(f) => f,
        Err(e) => return fail(err, proof, e),
    };
    let actions: Vec<ProofAction> = match GritReader::new(file).collect() {
        Ok(actions) => actions,
        Err(e) => return fail(err, proof, e),
    };
    let trimmed = match backward_trim(&parsed.formula, &actions) {
        Ok(t) => t,
        Err(e @ TrimError::InputDoesNotVerify { .. }) => {
            let _ = writeln!(err, "{} {}: {e}", error_prefix(), proof.display());
            return EXIT_INVALID;
        }
    };
    match File::create(out_path) {
        Ok(file) => {
            let mut writer = BufWriter::new(file);
            for action in &trimmed {
                if let Err(e) = write_grit_action(&mut writer, action) {
                    return fail(err, out_path, e);
                }
            }
            if let Err(e) = writer.flush() {
                return fail(err, out_path, e);
            }
            EXIT_OK
        }
        Err(e) => fail(err, out_path, e),
    }
}

pub fn cmd_gen(n: u32, out_cnf: &Path, out_proof: &Path, err: &mut impl Write) -> u8 {
    let write_cnf = |w: &mut BufWriter<File>| -> io::Result<()> {
        writeln!(w, "p cnf {n} {}", 1u64 << n)?;
        for path in 0..1u64 << n {
            writeln!(w, "{}", complete_tree_clause(n, path))?;
        }
        w.flush()
    };
    match File::create(out_cnf) {
        Ok(file) => {
            if let Err(e) = write_cnf(&mut BufWriter::new(file)) {
                return fail(err, out_cnf, e);
            }
        }
        Err(e) => return fail(err, out_cnf, e),
    }
    match File::create(out_proof) {
        Ok(file) => {
            let mut writer = BufWriter::new(file);
            let result = visit_complete_tree(n, |a| write_grit_action(&mut writer, a))
                .and_then(|()| writer.flush().map_err(GenError::Io));
            match result {
                Ok(()) => EXIT_OK,
                Err(e) => fail(err, out_proof, e),
            }
        }
        Err(e) => fail(err, out_proof, e),
    }
}
