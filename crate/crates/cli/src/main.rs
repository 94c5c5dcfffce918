//! `pokstruct`: key generation, signing, verification and parameter reports.

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use pokstruct_core::analysis::{self, bits_to_kb, lookup, ParamSet, ReportRow, REGISTRY};
use pokstruct_core::fiat_shamir::{self, PublicKey, SecretKey};
use pokstruct_core::primitives::Prg;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const SEED_ENV: &str = "POKSTRUCT_SEED";

#[derive(Parser)]
#[command(name = "pokstruct", version, about = "Structure-leveraging proof-of-knowledge signatures")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct SeedArg {
    /// Deterministic seed string; POKSTRUCT_SEED takes precedence.
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair, written to `<out>.pk` and `<out>.sk`.
    Keygen {
        #[arg(long, alias = "set")]
        scheme: String,
        #[arg(long, default_value = "key")]
        out: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Sign a message file.
    Sign {
        #[arg(long, alias = "set")]
        scheme: String,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        msg: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Verify a signature; exit status 0 on accept, 1 on reject.
    Verify {
        #[arg(long, alias = "set")]
        scheme: String,
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        msg: PathBuf,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Parameter report: sizes, soundness, KZ20 cost and reduction loss.
    Report {
        #[arg(long, alias = "set", conflicts_with = "all")]
        scheme: Option<String>,
        /// Every registered set (the default without --scheme).
        #[arg(long)]
        all: bool,
        /// Tab-separated output with a header row.
        #[arg(long)]
        tsv: bool,
    },
    /// KZ20 attack cost for a registered set or explicit challenge spaces.
    Kz20 {
        #[arg(long, alias = "set", conflicts_with_all = ["tau", "c1", "c2"])]
        scheme: Option<String>,
        #[arg(long, requires_all = ["c1", "c2"])]
        tau: Option<usize>,
        #[arg(long)]
        c1: Option<BigUint>,
        #[arg(long)]
        c2: Option<BigUint>,
    },
    /// Serialized sizes of freshly generated keys and signatures.
    Sizes {
        #[arg(long, alias = "set")]
        scheme: Option<String>,
        #[arg(long)]
        tsv: bool,
        #[command(flatten)]
        seed: SeedArg,
    },
}

/// Failure with its exit status.
struct Fail(u8, String);

fn usage(msg: String) -> Fail {
    Fail(2, msg)
}

fn runtime(msg: String) -> Fail {
    Fail(1, msg)
}

fn set_of(name: &str) -> Result<&'static ParamSet, Fail> {
    lookup(name).ok_or_else(|| {
        let known: Vec<_> = REGISTRY.iter().map(|p| p.name).collect();
        usage(format!("unknown scheme '{name}'; expected one of {}", known.join(", ")))
    })
}

/// 32 bytes from the seed string, or from the OS when none is given.
fn entropy(arg: &SeedArg, label: &str) -> Result<[u8; 32], Fail> {
    let seed = std::env::var(SEED_ENV).ok().or_else(|| arg.seed.clone());
    let mut out = [0u8; 32];
    match seed {
        Some(s) => Prg::new(&[0; 32], s.as_bytes(), label.as_bytes()).fill(&mut out),
        None => getrandom::getrandom(&mut out).map_err(|e| runtime(format!("OS randomness unavailable: {e}")))?,
    }
    Ok(out)
}

fn read(path: &Path) -> Result<Vec<u8>, Fail> {
    fs::read(path).map_err(|e| runtime(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, data: &[u8]) -> Result<(), Fail> {
    fs::write(path, data).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

fn with_ext(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn fmt_log2(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.2}"))
}

const REPORT_HEADER: [&str; 9] =
    ["set", "scheme", "pk_kb", "sig_kb", "published_sig_kb", "log2_soundness", "tau_star", "log2_kz20", "log2_loss"];

fn report_fields(r: &ReportRow) -> [String; 9] {
    [
        r.set.name.into(),
        r.set.scheme.label().into(),
        format!("{:.3}", bits_to_kb(r.pk_bits as f64)),
        format!("{:.3}", bits_to_kb(r.formula_bits)),
        format!("{:.1}", r.set.published_sig_kb),
        format!("{:.3}", r.log2_soundness),
        r.kz20.as_ref().map_or_else(|| "-".into(), |k| k.tau_star.to_string()),
        fmt_log2(r.kz20.as_ref().map(|k| k.log2_cost)),
        fmt_log2(r.log2_loss),
    ]
}

fn print_table(header: &[&str], rows: &[Vec<String>], tsv: bool) {
    if tsv {
        println!("{}", header.join("\t"));
        for r in rows {
            println!("{}", r.join("\t"));
        }
        return;
    }
    let widths: Vec<usize> =
        (0..header.len()).map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap()).collect();
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        println!("{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
}

fn run(cli: Cli) -> Result<ExitCode, Fail> {
    match cli.cmd {
        Command::Keygen { scheme, out, seed } => {
            let set = set_of(&scheme)?;
            let (pk, sk) = fiat_shamir::keygen(set, entropy(&seed, "keygen")?)
                .map_err(|e| runtime(format!("keygen failed: {e:?}")))?;
            let pkb = pk.to_bytes();
            write(&with_ext(&out, "pk"), &pkb)?;
            write(&with_ext(&out, "sk"), &sk.seed)?;
            println!("{}: public key {} bytes ({:.3} kB), secret key 32 bytes", set.name, pkb.len(), pkb.len() as f64 / 1000.0);
        }
        Command::Sign { scheme, sk, msg, out, seed } => {
            let set = set_of(&scheme)?;
            let bytes = read(&sk)?;
            let seed_bytes: [u8; 32] =
                bytes.try_into().map_err(|_| runtime(format!("{}: secret key must be 32 bytes", sk.display())))?;
            let key = SecretKey { set, seed: seed_bytes };
            let m = read(&msg)?;
            let sig = fiat_shamir::sign(&key, &m, &entropy(&seed, "sign")?)
                .map_err(|e| runtime(format!("signing failed: {e:?}")))?;
            let b = sig.to_bytes(set);
            write(&out, &b)?;
            println!("{}: signature {} bytes ({:.3} kB)", set.name, b.len(), b.len() as f64 / 1000.0);
        }
        Command::Verify { scheme, pk, msg, sig } => {
            let set = set_of(&scheme)?;
            let key = match PublicKey::from_bytes(set, &read(&pk)?) {
                Ok(k) => k,
                Err(e) => {
                    eprintln!("reject: malformed public key ({e:?})");
                    return Ok(ExitCode::from(1));
                }
            };
            if fiat_shamir::verify_bytes(&key, &read(&msg)?, &read(&sig)?) {
                println!("accept");
            } else {
                println!("reject");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Report { scheme, all, tsv } => {
            let rows: Vec<ReportRow> = match scheme {
                Some(s) if !all => vec![analysis::report(set_of(&s)?)],
                _ => analysis::report_all(),
            };
            let rows: Vec<Vec<String>> = rows.iter().map(|r| report_fields(r).to_vec()).collect();
            print_table(&REPORT_HEADER, &rows, tsv);
        }
        Command::Kz20 { scheme, tau, c1, c2 } => {
            let (label, rep) = match (scheme, tau, c1, c2) {
                (Some(s), _, _, _) => {
                    let set = set_of(&s)?;
                    let rep = analysis::kz20_for(set)
                        .ok_or_else(|| usage(format!("{} is a three-round scheme; KZ20 does not apply", set.name)))?;
                    (format!("{} tau={}", set.name, set.tau), rep)
                }
                (None, Some(t), Some(a), Some(b)) => {
                    if a < BigUint::from(2u32) || b < BigUint::from(2u32) {
                        return Err(usage("c1 and c2 must be at least 2".into()));
                    }
                    (format!("tau={t} c1={a} c2={b}"), analysis::kz20_cost(t, &a, Some(&b)))
                }
                _ => return Err(usage("give --scheme or all of --tau, --c1, --c2".into())),
            };
            println!(
                "{label}: tau*={} log2(cost)={:.3} log2(1/P1)={:.3} log2(C2^(tau-tau*))={:.3}",
                rep.tau_star, rep.log2_cost, rep.log2_first, rep.log2_second
            );
        }
        Command::Sizes { scheme, tsv, seed } => {
            let sets: Vec<&'static ParamSet> = match scheme {
                Some(s) => vec![set_of(&s)?],
                None => REGISTRY.iter().collect(),
            };
            let mut rows = Vec::new();
            for set in sets {
                let (pk, sk) = fiat_shamir::keygen(set, entropy(&seed, set.name)?)
                    .map_err(|e| runtime(format!("keygen failed: {e:?}")))?;
                let sig = fiat_shamir::sign(&sk, b"sizes", &entropy(&seed, "sizes")?)
                    .map_err(|e| runtime(format!("signing failed: {e:?}")))?;
                let b = sig.to_bytes(set);
                rows.push(vec![
                    set.name.to_string(),
                    format!("{:.3}", pk.to_bytes().len() as f64 / 1000.0),
                    format!("{:.3}", b.len() as f64 / 1000.0),
                    format!("{:.3}", bits_to_kb(analysis::signature_size(set))),
                    format!("{:.1}", set.published_sig_kb),
                ]);
            }
            print_table(&["set", "pk_kb", "sig_kb", "formula_kb", "published_kb"], &rows, tsv);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(c) => c,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
