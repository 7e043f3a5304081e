//! Command implementations. Each returns the text it would write, so the
//! binary only handles argument parsing, files and exit codes.

use std::fmt::Write as _;

use color488::analysis::{
    enumerate_boundary_patterns, enumerate_failures, fit_threshold, lowrate_estimate,
    read_samples_csv, run_samples, write_samples_csv, BoundaryOptions, EnumerationOptions,
    FailureCountTable, FitOptions, LowRateOptions, SampleJob,
};
use color488::decoders::{check_failure, Decoder, DecoderConfig, DecoderKind, SpacetimeSyndrome};
use color488::lattice::{build_color_lattice, validate, ColorCodeLattice, LatticeDump};
use color488::noise::syndrome;
use color488::{Error, Result};
use serde::Serialize;

use crate::config::{ExperimentConfig, VERSION};

/// JSON envelope shared by every command.
#[derive(Serialize)]
struct Output<'a, O: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a ExperimentConfig,
    options: O,
    result: R,
}

fn envelope<O: Serialize, R: Serialize>(
    cfg: &ExperimentConfig,
    options: O,
    result: R,
) -> Result<String> {
    let out = Output {
        tool: "color488",
        version: VERSION,
        config: cfg,
        options,
        result,
    };
    Ok(serde_json::to_string_pretty(&out)? + "\n")
}

/// Provenance lines for CSV outputs.
pub fn preamble(cfg: &ExperimentConfig) -> Vec<String> {
    vec![
        format!("color488 {VERSION}"),
        format!("config {}", cfg.to_json()),
    ]
}

/// Output of a command: the main text and a short summary for stderr.
pub struct Report {
    pub text: String,
    pub summary: String,
}

fn decoder_config(cfg: &ExperimentConfig) -> DecoderConfig {
    let mut dc = cfg.decoder.config();
    if let Some(o) = cfg.order {
        dc = dc.with_order(o);
    }
    if let Some(w) = cfg.w_b {
        dc = dc.with_w_b(w);
    }
    dc
}

fn single_distance(cfg: &ExperimentConfig) -> Result<usize> {
    match cfg.distances.as_slice() {
        [d] => Ok(*d),
        ds => Err(Error::InvalidParameter(format!(
            "expected one distance, got {}",
            ds.len()
        ))),
    }
}

#[derive(Serialize)]
pub struct LatticeOptions {
    pub validate: bool,
}

#[derive(Serialize)]
struct LatticeResult {
    qubits: usize,
    checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<color488::lattice::ValidationReport>,
    lattice: LatticeDump,
}

/// Builds the lattice, optionally validates it, and dumps it as JSON. An
/// invariant failure is an internal error.
pub fn cmd_lattice(cfg: &ExperimentConfig, opts: LatticeOptions) -> Result<Report> {
    cfg.validate()?;
    let d = single_distance(cfg)?;
    let lat = build_color_lattice(d)?;
    let report = opts.validate.then(|| validate(&lat));
    let mut summary = format!(
        "d={d}: {} qubits, {} checks",
        lat.num_qubits(),
        lat.num_checks()
    );
    if let Some(r) = &report {
        for c in &r.checks {
            let _ = write!(
                summary,
                "\n  {} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            );
        }
    }
    let failed = report.as_ref().is_some_and(|r| !r.passed());
    let result = LatticeResult {
        qubits: lat.num_qubits(),
        checks: lat.num_checks(),
        report,
        lattice: LatticeDump::new(&lat),
    };
    let text = envelope(cfg, opts, result)?;
    if failed {
        return Err(Error::Internal(format!(
            "lattice invariants failed\n{summary}"
        )));
    }
    Ok(Report { text, summary })
}

/// Runs every `(d, p)` point and returns the samples CSV.
pub fn cmd_sample(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    if cfg.distances.is_empty() || cfg.ps.is_empty() || cfg.shots == 0 {
        return Err(Error::InvalidParameter(
            "sample needs distances, probabilities and shots".into(),
        ));
    }
    let mut records = Vec::new();
    let mut summary = String::new();
    for &d in &cfg.distances {
        for &p in &cfg.ps {
            let job = SampleJob {
                family: cfg.family(),
                decoder: cfg.decoder,
                d,
                p,
                rounds: cfg.rounds.fixed(),
                shots: cfg.shots,
                seed: cfg.seed,
                w_b: cfg.w_b,
                order: cfg.order,
            };
            let r = run_samples(&job, cfg.workers)?;
            let _ = writeln!(
                summary,
                "d={d} p={p} rounds={} fail_any={}/{} ({:.5})",
                r.rounds,
                r.fail_any,
                r.shots,
                r.rate_any()
            );
            records.push(r);
        }
    }
    let mut buf = Vec::new();
    write_samples_csv(&mut buf, &records, &preamble(cfg))?;
    let text = String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(Report {
        text,
        summary: summary.trim_end().into(),
    })
}

#[derive(Serialize)]
pub struct EnumerateOptions {
    pub weight: Option<usize>,
    pub repeats: usize,
    pub patterns: bool,
}

/// Exhaustive weight-`d/2` enumeration, with the closed-form count for
/// comparison, or the first-row boundary patterns.
pub fn cmd_enumerate(cfg: &ExperimentConfig, opts: EnumerateOptions) -> Result<Report> {
    cfg.validate()?;
    let d = single_distance(cfg)?;
    let lat = build_color_lattice(d)?;
    if opts.patterns {
        let bopts = BoundaryOptions {
            w_b: cfg.w_b.unwrap_or(0.999),
            repeats: opts.repeats,
            seed: cfg.seed,
        };
        let counts = enumerate_boundary_patterns(&lat, bopts)?;
        let mut summary = String::new();
        for c in &counts {
            let _ = writeln!(
                summary,
                "{} configs={} N={:.2} N'={:.2} predicted={}",
                c.pattern, c.configurations, c.n, c.n_prime, c.predicted
            );
        }
        return Ok(Report {
            text: envelope(cfg, opts, counts)?,
            summary: summary.trim_end().into(),
        });
    }
    let weight = opts.weight.unwrap_or(d / 2);
    let dc = decoder_config(cfg);
    let r = enumerate_failures(
        &lat,
        &dc,
        EnumerationOptions {
            weight,
            repeats: opts.repeats,
            seed: cfg.seed,
        },
    )?;
    let table = FailureCountTable::for_distance(d)?;
    let predicted = match cfg.decoder {
        DecoderKind::Restricted => table.restricted.to_string(),
        DecoderKind::Correlated => table.correlated.to_string(),
    };
    let summary = format!(
        "d={d} weight={weight} configurations={} expected={:.3} +- {:.3} (closed form {predicted})",
        r.configurations, r.expected, r.std_error
    );
    #[derive(Serialize)]
    struct Enumerated {
        enumeration: color488::analysis::EnumerationResult,
        closed_form: String,
    }
    let text = envelope(
        cfg,
        opts,
        Enumerated {
            enumeration: r,
            closed_form: predicted,
        },
    )?;
    Ok(Report { text, summary })
}

/// Closed-form counts and the boundary ratio over a distance range, as CSV.
pub fn cmd_analytic(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut text = String::new();
    for line in preamble(cfg) {
        let _ = writeln!(text, "# {line}");
    }
    let mut last = None;
    for &d in &cfg.distances {
        let t = FailureCountTable::for_distance(d)?;
        last = Some((d, t.ratio_f64));
        w.serialize(t).map_err(Error::from)?;
    }
    let body = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    text.push_str(&String::from_utf8(body).map_err(|e| Error::Internal(e.to_string()))?);
    let summary = match last {
        Some((d, r)) => format!("{} distances, ratio at d={d}: {r:.6}", cfg.distances.len()),
        None => "no distances".into(),
    };
    Ok(Report { text, summary })
}

/// Stratified low-rate estimate for one distance.
pub fn cmd_lowrate(cfg: &ExperimentConfig, opts: LowRateOptions) -> Result<Report> {
    cfg.validate()?;
    let d = single_distance(cfg)?;
    let lat = build_color_lattice(d)?;
    let est = lowrate_estimate(&lat, &decoder_config(cfg), &cfg.ps, opts)?;
    let mut summary = String::new();
    for pt in &est.points {
        let _ = writeln!(
            summary,
            "p={:e} p_fail={:e} +- {:e}",
            pt.p, pt.p_fail, pt.std_error
        );
    }
    if let Some(s) = est.loglog_slope(f64::INFINITY) {
        let _ = write!(summary, "log-log slope {s:.3}");
    }
    Ok(Report {
        text: envelope(cfg, opts, &est)?,
        summary: summary.trim_end().into(),
    })
}

/// Finite-size-scaling fit of a samples CSV.
pub fn cmd_fit(cfg: &ExperimentConfig, samples: &str, opts: FitOptions) -> Result<Report> {
    let records = read_samples_csv(samples.as_bytes())?;
    let fit = fit_threshold(&records, &opts)?;
    let summary = format!(
        "p_th={:.5} [{:.5}, {:.5}] nu={:.3} [{:.3}, {:.3}]",
        fit.p_th, fit.p_th_ci.0, fit.p_th_ci.1, fit.nu, fit.nu_ci.0, fit.nu_ci.1
    );
    Ok(Report {
        text: envelope(cfg, opts, &fit)?,
        summary,
    })
}

#[derive(Serialize)]
pub struct DecodeOptions {
    /// Flipped qubits.
    pub errors: Vec<usize>,
    pub trace: bool,
    pub tie_seed: Option<u64>,
}

/// Decodes one code-capacity error. With `trace`, every stage is dumped.
/// A correction that leaves a nonzero syndrome is an internal error.
pub fn cmd_decode(cfg: &ExperimentConfig, opts: DecodeOptions) -> Result<Report> {
    cfg.validate()?;
    let d = single_distance(cfg)?;
    let lat = build_color_lattice(d)?;
    check_qubits(&lat, &opts.errors)?;
    let dc = decoder_config(cfg);
    let dec = Decoder::new(&lat, dc)?;
    let syn = SpacetimeSyndrome::single(&syndrome(&lat, &opts.errors));
    let trace = match cfg.decoder {
        DecoderKind::Restricted => dec.decode_traced_independent(&syn, opts.tie_seed)?,
        DecoderKind::Correlated => dec.decode_traced(&syn, opts.tie_seed)?,
    };
    if !trace.correction.residual_zero {
        return Err(Error::Internal(
            "correction leaves a nonzero residual syndrome".into(),
        ));
    }
    let flags = check_failure(&opts.errors, &trace.correction, &lat)?;
    let summary = format!(
        "correction {:?}; logical flips green={} blue={}",
        trace.correction.flips, flags.green, flags.blue
    );
    #[derive(Serialize)]
    struct Decoded<'t> {
        correction: &'t color488::decoders::Correction,
        failure: color488::decoders::LogicalFlags,
        #[serde(skip_serializing_if = "Option::is_none")]
        trace: Option<&'t color488::decoders::DecodeTrace>,
    }
    let result = Decoded {
        correction: &trace.correction,
        failure: flags,
        trace: opts.trace.then_some(&trace),
    };
    Ok(Report {
        text: envelope(cfg, opts, result)?,
        summary,
    })
}

fn check_qubits(lat: &ColorCodeLattice, qubits: &[usize]) -> Result<()> {
    match qubits.iter().find(|&&q| q >= lat.num_qubits()) {
        Some(q) => Err(Error::InvalidParameter(format!(
            "qubit {q} outside 0..{}",
            lat.num_qubits()
        ))),
        None => Ok(()),
    }
}
