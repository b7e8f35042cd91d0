use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use llr_scl::channel_sim::{Execution, SimConfig, Simulation, RNG_ALGORITHM};
use llr_scl::cost_model::{anchor_checks, compare};
use llr_scl::likelihood_oracle::{pairs_from_llrs, scl_decode_lik};
use llr_scl::llr_kernels::clamp_llr;
use llr_scl::{
    build_batcher, construct_frozen_set, CodeSpec, Datapath, FixedDatapath, FloatDatapath,
    QuantSpec, SclDecoder,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::{Command, ConstructArgs, CostArgs, DecodeArgs, DecoderArgs, SimulateArgs, SortnetArgs};

/// Seed used when `--seed` is omitted, so unattended runs are reproducible.
pub const DEFAULT_SEED: u64 = 0x5EED_2015;

/// Candidate-metric gaps at or below this make the reference comparison a tie.
const TIE_GAP: f64 = 1e-9;

pub fn run(command: Command, argv: &[String]) -> CliResult<()> {
    match command {
        Command::Construct(args) => construct(args),
        Command::Decode(args) => decode(args),
        Command::Simulate(args) => simulate(args, argv),
        Command::Costmodel(args) => costmodel(args),
        Command::Sortnet(args) => sortnet(args),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(CliError::data),
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(CliError::data)?;
        Ok(text)
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
    }
}

fn read_mask(path: &Path) -> CliResult<CodeSpec> {
    read_input(path)?
        .parse()
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn construct(args: ConstructArgs) -> CliResult<()> {
    let spec = construct_frozen_set(args.n, args.k, args.z0).map_err(CliError::usage)?;
    write_output(args.out.as_deref(), &spec.to_mask_file())
}

fn quant_spec(args: &DecoderArgs) -> CliResult<Option<QuantSpec>> {
    match args.q {
        None | Some(0) => Ok(None),
        Some(q) => QuantSpec::new(q, args.scale)
            .map(Some)
            .map_err(CliError::usage),
    }
}

fn read_llr_rows(path: &Path, n: usize) -> CliResult<Vec<Vec<f64>>> {
    let text = read_input(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|x| !x.is_nan())
                    .ok_or_else(|| {
                        CliError::data(format!("row {}: {field:?} is not a number", i + 1))
                    })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        if row.len() != n {
            return Err(CliError::data(format!(
                "row {}: expected {n} LLRs, found {}",
                i + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::data(format!("{}: no LLR rows", path.display())));
    }
    Ok(rows)
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 0 { '0' } else { '1' })
        .collect()
}

fn decode_rows<D: Datapath>(
    decoder: &SclDecoder<D>,
    rows: &[Vec<f64>],
    oracle_check: bool,
    out: &mut impl Write,
) -> CliResult<bool> {
    let spec = decoder.spec();
    let header = if oracle_check {
        "frame,message,metric,min_gap,oracle"
    } else {
        "frame,message,metric,min_gap"
    };
    writeln!(out, "{header}").map_err(CliError::data)?;
    let mut all_agree = true;
    for (i, llrs) in rows.iter().enumerate() {
        let result = decoder.decode(llrs)?;
        write!(
            out,
            "{i},{},{},{}",
            bit_string(&result.message),
            result.metric,
            result.min_gap
        )
        .map_err(CliError::data)?;
        if oracle_check {
            let clamped: Vec<f64> = llrs.iter().map(|&x| clamp_llr(x)).collect();
            let reference = scl_decode_lik(spec, &pairs_from_llrs(&clamped), decoder.list_size())?;
            let verdict = if reference[0].u == result.u_hat {
                "agree"
            } else if result.min_gap <= TIE_GAP {
                "tie"
            } else {
                all_agree = false;
                "disagree"
            };
            write!(out, ",{verdict}").map_err(CliError::data)?;
        }
        writeln!(out).map_err(CliError::data)?;
    }
    Ok(all_agree)
}

fn decode(args: DecodeArgs) -> CliResult<()> {
    let spec = read_mask(&args.mask)?;
    let rows = read_llr_rows(&args.llrs, spec.n())?;
    let list = args.decoder.list;
    let mut stdout = io::stdout().lock();
    let agree = match quant_spec(&args.decoder)? {
        Some(q) => {
            let decoder =
                SclDecoder::new(spec, list, FixedDatapath::new(q)).map_err(CliError::usage)?;
            decode_rows(&decoder, &rows, args.oracle_check, &mut stdout)?
        }
        None => {
            let dp = FloatDatapath::new(args.decoder.kernel.into(), args.decoder.metric.into());
            let decoder = SclDecoder::new(spec, list, dp).map_err(CliError::usage)?;
            decode_rows(&decoder, &rows, args.oracle_check, &mut stdout)?
        }
    };
    if !agree {
        eprintln!("llrscl: reference decoder disagreed on at least one non-tie frame");
    }
    Ok(())
}

/// Parses `x` or `start:step:stop` (inclusive of `stop`).
pub fn parse_snr_sweep(text: &str) -> CliResult<Vec<f64>> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| CliError::usage(format!("bad SNR value {s:?}")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, step, stop] => {
            let (start, step, stop) = (parse(start)?, parse(step)?, parse(stop)?);
            if step <= 0.0 || stop < start {
                return Err(CliError::usage(format!(
                    "SNR sweep {text:?} needs step > 0 and stop >= start"
                )));
            }
            // tolerance keeps e.g. 1.0:0.1:3.0 from dropping its endpoint
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > 10_000 {
                return Err(CliError::usage(format!(
                    "SNR sweep {text:?} has {count} points"
                )));
            }
            // round to 1e-9 dB so points print cleanly
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        _ => Err(CliError::usage(format!(
            "SNR sweep {text:?} must be a value or start:step:stop"
        ))),
    }
}

#[derive(Debug, Serialize)]
struct Outputs {
    csv: PathBuf,
    manifest: PathBuf,
}

#[derive(Debug, Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    argv: &'a [String],
    config: &'a SimConfig,
    seed: u64,
    frozen_mask: String,
    library_version: &'a str,
    cli_version: &'a str,
    git_describe: &'a str,
    rng_algorithm: &'a str,
    threads: usize,
    sequential: bool,
    outputs: Outputs,
}

fn execution(args: &SimulateArgs) -> CliResult<Execution> {
    if args.sequential {
        return Ok(Execution::Sequential);
    }
    #[cfg(feature = "parallel")]
    if args.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .map_err(CliError::usage)?;
    }
    Ok(Execution::default())
}

fn simulate(args: SimulateArgs, argv: &[String]) -> CliResult<()> {
    let pinned = args.mask.as_deref().map(read_mask).transpose()?;
    let (n, k) = match &pinned {
        Some(spec) => {
            for (flag, given, actual) in [("--n", args.n, spec.n()), ("--k", args.k, spec.k())] {
                if given.is_some_and(|g| g != actual) {
                    return Err(CliError::usage(format!(
                        "{flag} disagrees with the mask file ({actual})"
                    )));
                }
            }
            (spec.n(), spec.k())
        }
        None => (
            args.n.expect("required by clap"),
            args.k.expect("required by clap"),
        ),
    };
    let config = SimConfig {
        n,
        k,
        list_size: args.decoder.list,
        snr_db: parse_snr_sweep(&args.snr)?,
        max_frames: args.frames,
        min_errors: args.min_errors,
        seed: args.seed,
        metric: args.decoder.metric.into(),
        kernel: args.decoder.kernel.into(),
        quant: quant_spec(&args.decoder)?,
        all_zero: args.all_zero,
        design_z0: args.z0,
    };
    let sim = match pinned {
        Some(spec) => Simulation::with_code(config, spec),
        None => Simulation::new(config),
    }
    .map_err(CliError::usage)?;
    let exec = execution(&args)?;
    let result = sim.run(exec);

    let csv = result.to_csv();
    let manifest_path = args.out.with_extension("json");
    let manifest = RunManifest {
        command: "simulate",
        argv,
        config: sim.config(),
        seed: args.seed,
        frozen_mask: sim.code().to_mask_file().trim_end().to_string(),
        library_version: llr_scl::VERSION,
        cli_version: env!("CARGO_PKG_VERSION"),
        git_describe: env!("LLRSCL_GIT_DESCRIBE"),
        rng_algorithm: RNG_ALGORITHM,
        threads: args.threads,
        sequential: matches!(exec, Execution::Sequential),
        outputs: Outputs {
            csv: args.out.clone(),
            manifest: manifest_path.clone(),
        },
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(CliError::data)?;
    write_output(Some(&args.out), &csv)?;
    write_output(Some(&manifest_path), &(json + "\n"))?;
    write_output(None, &csv)
}

fn costmodel(args: CostArgs) -> CliResult<()> {
    if args.paper_check {
        let checks = anchor_checks();
        let mut failed = Vec::new();
        for c in &checks {
            let status = if c.ok { "ok  " } else { "FAIL" };
            write_output(
                None,
                &format!(
                    "{status} {}: expected {}, got {}\n",
                    c.name, c.expected, c.actual
                ),
            )?;
            if !c.ok {
                failed.push(c.name);
            }
        }
        return if failed.is_empty() {
            Ok(())
        } else {
            Err(CliError::Mismatch(failed.join(", ")))
        };
    }
    let report = compare(args.n, args.list, args.q).map_err(CliError::usage)?;
    if args.json {
        let json = serde_json::to_string_pretty(&report).map_err(CliError::data)?;
        write_output(None, &format!("{json}\n"))?;
    } else {
        write_output(None, &format!("{report}\n"))?;
    }
    Ok(())
}

fn sortnet(args: SortnetArgs) -> CliResult<()> {
    let net = build_batcher(args.size).map_err(CliError::usage)?;
    write_output(None, &net.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_sweeps() {
        assert_eq!(
            parse_snr_sweep("1.0:0.5:3.0").unwrap(),
            vec![1.0, 1.5, 2.0, 2.5, 3.0]
        );
        assert_eq!(parse_snr_sweep("2").unwrap(), vec![2.0]);
        assert_eq!(parse_snr_sweep("1:0.1:2").unwrap().len(), 11);
        assert_eq!(
            parse_snr_sweep("0.3:0.1:0.6").unwrap(),
            vec![0.3, 0.4, 0.5, 0.6]
        );
        assert_eq!(parse_snr_sweep("1:2:2").unwrap(), vec![1.0]);
        for bad in ["", "a", "1:0:2", "3:1:1", "1:2", "1:nan:2", "1:1:2:3"] {
            assert!(
                matches!(parse_snr_sweep(bad), Err(CliError::Usage(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn bit_strings() {
        assert_eq!(bit_string(&[1, 0, 0, 1]), "1001");
        assert_eq!(bit_string(&[]), "");
    }
}
