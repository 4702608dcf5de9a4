//! The command pipelines behind the binary.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use stabtherm_core::duality::{
    self, build_2dtc_bath_mapping, check_homology_identity_with_cap, check_series_duality_4dtc_with_cap,
    coefficient_bound_holds, compare_series, gsd_report, ising_log_z_low_t, ising_low_t_coeffs, Bath,
};
use stabtherm_core::enumerate::{constraint_kernel, weight_enumerator_mitm_with_cap};
use stabtherm_core::models::{build_ising, build_toric_4d, ModelKind};
use stabtherm_core::thermo::{sweep_with, Derivatives, PartitionFunction, SweepOptions, DEFAULT_RELATIVE_STEP};
use stabtherm_core::{ConstraintKernel, CssModel, IsingModel, Side, WeightEnumerator};

use crate::config::{Check, Command, DerivativeMode, Normalization, RunConfig};
use crate::error::{Category, CliError};
use crate::io::{describe_comparison, enumerator_table, float, series_table, thermo_table, Report, Table};
use crate::oracle;
use crate::parallel::{thread_count, weight_enumerator_parallel};

/// Relative tolerance for `oracle-compare`.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub table: Table,
    /// False when the command checks a claim and the claim failed.
    pub passed: bool,
}

/// Runs the configured command without touching the filesystem.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let mut outcome = match cfg.command {
        Command::Gsd => gsd(cfg),
        Command::Enumerate => enumerate(cfg),
        Command::Thermo => thermo(cfg),
        Command::Duality => duality_check(cfg),
        Command::OracleCompare => oracle_compare(cfg),
        Command::Logicals => logicals(cfg),
    }?;
    outcome
        .report
        .section("timing")
        .line("elapsed_ms", started.elapsed().as_millis());
    Ok(outcome)
}

/// Runs the command, writes the CSV to `cfg.out` when set and returns the
/// report text. A failed check is reported as [`Category::CheckFailed`]
/// after the artifacts are written.
pub fn execute(cfg: &RunConfig) -> Result<String, (CliError, Option<String>)> {
    let outcome = run(cfg).map_err(|e| (e, None))?;
    if let Some(path) = &cfg.out {
        let write = || -> std::io::Result<()> {
            let mut w = BufWriter::new(File::create(path)?);
            outcome.table.write_csv(&mut w).map_err(std::io::Error::other)?;
            w.flush()
        };
        write().map_err(|e| (CliError::from(e), None))?;
    }
    let text = outcome.report.render();
    if outcome.passed {
        Ok(text)
    } else {
        Err((
            CliError {
                category: Category::CheckFailed,
                message: "the checked claim does not hold; see the report".into(),
            },
            Some(text),
        ))
    }
}

fn css(cfg: &RunConfig) -> Result<CssModel, CliError> {
    Ok(cfg.model.build_css(cfg.l, cfg.coupling_a, cfg.coupling_b)?)
}

fn ising(cfg: &RunConfig) -> Result<IsingModel, CliError> {
    Ok(build_ising(cfg.dim, cfg.l)?.with_coupling(cfg.coupling_a)?)
}

fn model_section(r: &mut Report, cfg: &RunConfig) {
    r.section("model").line("model", cfg.model).line("L", cfg.l);
    if cfg.model == ModelKind::Ising {
        r.line("dim", cfg.dim).line("J", float(cfg.coupling_a));
    } else {
        r.line("a", float(cfg.coupling_a)).line("b", float(cfg.coupling_b));
    }
}

fn gsd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = css(cfg)?;
    let g = gsd_report(&m);
    let mut report = Report::new("ground-state degeneracy");
    model_section(&mut report, cfg);
    report
        .section("result")
        .line("n_qubits", g.n_qubits)
        .line("rank_a", g.rank_a)
        .line("rank_b", g.rank_b)
        .line("log2_gsd", g.log2_gsd)
        .line("gsd", &g.gsd);
    let mut table = Table::new(vec!["n_qubits", "rank_a", "rank_b", "log2_gsd", "gsd"]);
    table.push(vec![
        g.n_qubits.to_string(),
        g.rank_a.to_string(),
        g.rank_b.to_string(),
        g.log2_gsd.to_string(),
        g.gsd.to_string(),
    ]);
    Ok(Outcome {
        report,
        table,
        passed: true,
    })
}

/// Exhaustive enumeration when the kernel is small enough, otherwise the
/// meet-in-the-middle enumerator if a weight cutoff was requested.
fn kernel_enumerator(k: &ConstraintKernel, cfg: &RunConfig) -> Result<WeightEnumerator, CliError> {
    match cfg.max_weight {
        Some(w) if k.dim() > cfg.cap => Ok(weight_enumerator_mitm_with_cap(k, w, cfg.cap)?),
        _ => Ok(weight_enumerator_parallel(k, cfg.cap, thread_count()?)?),
    }
}

fn enumerate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut report = Report::new("constraint weight enumerator");
    model_section(&mut report, cfg);
    if cfg.model == ModelKind::Ising {
        let model = ising(cfg)?;
        let n_bonds = model.bonds().len();
        let coeffs = ising_low_t_coeffs(&model, n_bonds)?;
        let w = WeightEnumerator::from_counts(coeffs, model.n_spins().saturating_sub(1), n_bonds, true, n_bonds);
        report
            .section("result")
            .line("kind", "broken-bond classes")
            .line("n_spins", model.n_spins())
            .line("n_bonds", n_bonds)
            .line("total", w.total());
        return Ok(Outcome {
            table: enumerator_table(&w),
            report,
            passed: true,
        });
    }
    let m = css(cfg)?;
    let k = constraint_kernel(&m, cfg.side);
    let w = kernel_enumerator(&k, cfg)?;
    report
        .section("result")
        .line("side", cfg.side.as_str())
        .line("n_generators", k.n_generators())
        .line("kernel_dim", k.dim())
        .line("complete", w.is_complete())
        .line("max_tracked", w.max_tracked())
        .line("total", w.total());
    let nonzero: Vec<String> = w.nonzero().map(|(n, c)| format!("{n}:{c}")).collect();
    report.line("nonzero", if nonzero.is_empty() { "none".to_string() } else { nonzero.join(" ") });
    Ok(Outcome {
        table: enumerator_table(&w),
        report,
        passed: true,
    })
}

fn sweep_options(cfg: &RunConfig, volume: f64) -> SweepOptions {
    SweepOptions {
        volume,
        derivatives: match cfg.derivatives {
            DerivativeMode::Stencil => Derivatives::Stencil {
                relative_step: DEFAULT_RELATIVE_STEP,
            },
            DerivativeMode::Grid => Derivatives::Grid,
        },
    }
}

fn thermo(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let betas = cfg.beta.values();
    let sites = (cfg.l as f64).powi(cfg.model.lattice_dim() as i32);
    let mut report = Report::new("thermodynamics");
    model_section(&mut report, cfg);
    let points = if cfg.model == ModelKind::Ising {
        let model = ising(cfg)?;
        let coeffs = ising_low_t_coeffs(&model, model.bonds().len())?;
        let volume = match cfg.normalization {
            Normalization::Site => (cfg.l as f64).powi(cfg.dim as i32),
            Normalization::Qubit => model.n_spins() as f64,
        };
        report
            .section("method")
            .line("expansion", "broken-bond classes")
            .line("volume", float(volume));
        sweep_with(
            |b| Ok(ising_log_z_low_t(&model, &coeffs, b)),
            false,
            &betas,
            &sweep_options(cfg, volume),
        )?
    } else {
        let m = css(cfg)?;
        let wa = kernel_enumerator(&constraint_kernel(&m, Side::A), cfg)?;
        let wb = kernel_enumerator(&constraint_kernel(&m, Side::B), cfg)?;
        let z = PartitionFunction::new(&m, &wa, &wb)?;
        let volume = match cfg.normalization {
            Normalization::Site => sites,
            Normalization::Qubit => m.n_qubits() as f64,
        };
        report
            .section("method")
            .line("kernel_dim_a", wa.dim())
            .line("kernel_dim_b", wb.dim())
            .line("truncated", z.is_truncated())
            .line("volume", float(volume));
        stabtherm_core::thermo::sweep(&z, &betas, &sweep_options(cfg, volume))?
    };
    report
        .section("grid")
        .line("points", points.len())
        .line("beta_min", float(cfg.beta.min))
        .line("beta_max", float(cfg.beta.max));
    Ok(Outcome {
        table: thermo_table(&points),
        report,
        passed: true,
    })
}

fn duality_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let check = cfg.check.ok_or_else(|| CliError::input("duality needs --check"))?;
    let l = cfg.l;
    let mut report = Report::new(format!("duality check {}", check.name()));
    let (table, passed) = match check {
        Check::FourDtcIsing => {
            let c = check_series_duality_4dtc_with_cap(l, cfg.cap)?;
            describe_comparison(&mut report, &c);
            (series_table(&c), c.matched)
        }
        Check::Homology | Check::Bound => {
            let h = check_homology_identity_with_cap(l, cfg.cap)?;
            describe_comparison(&mut report, &h.comparison);
            let bound = coefficient_bound_holds(&h);
            report
                .section("totals")
                .line("betti_3", h.betti)
                .line("sum_cycles", h.cycles.total())
                .line("sum_boundaries", h.boundaries.total())
                .line("bound_holds", bound);
            let passed = if check == Check::Bound { bound } else { h.comparison.matched };
            (series_table(&h.comparison), passed)
        }
        Check::AbIdentity => {
            let m = build_toric_4d(l)?;
            let wa = weight_enumerator_parallel(&constraint_kernel(&m, Side::A), cfg.cap, thread_count()?)?;
            let wb = weight_enumerator_parallel(&constraint_kernel(&m, Side::B), cfg.cap, thread_count()?)?;
            let cutoff = wa.len().max(wb.len()) + 1;
            let c = compare_series(
                format!("4D toric code A-side and B-side enumerators are identical (L={l})"),
                wa.coeffs(),
                wb.coeffs(),
                cutoff,
            );
            describe_comparison(&mut report, &c);
            (series_table(&c), c.matched)
        }
        Check::ThreeDtcStars | Check::ThreeDtcPlaquettes => {
            let (stars, plaquettes) = duality::check_series_duality_3dtc(l)?;
            let c = if check == Check::ThreeDtcStars { stars } else { plaquettes };
            describe_comparison(&mut report, &c);
            (series_table(&c), c.matched)
        }
        Check::HaahChains => {
            let (a, b) = duality::check_haah_chain_duality(l)?;
            describe_comparison(&mut report, &a);
            report
                .section("b-side")
                .line("claim", &b.claim)
                .line("matched", b.matched);
            (series_table(&a), a.matched && b.matched)
        }
        Check::BathVx | Check::BathVy => {
            let bath = if check == Check::BathVx { Bath::Vx } else { Bath::Vy };
            let bm = build_2dtc_bath_mapping(l, bath)?;
            let violation = bm.map.first_violation();
            report
                .section("claim")
                .line(
                    "claim",
                    format!("open 2D toric code with {} bath has the bond algebra of its dual (L={l})", check.name()),
                )
                .section("result")
                .line("stars", bm.n_stars)
                .line("plaquettes", bm.n_plaquettes)
                .line("fields", bm.n_fields)
                .line("isomorphic", violation.is_none())
                .line(
                    "first_violation",
                    violation.map_or_else(|| "none".to_string(), |(i, j)| format!("terms {i} and {j}")),
                );
            let mut table = Table::new(vec!["index", "family", "source", "target"]);
            for (i, (s, t)) in bm.map.source().iter().zip(bm.map.target()).enumerate() {
                let family = if bm.stars().contains(&i) {
                    "star"
                } else if bm.plaquettes().contains(&i) {
                    "plaquette"
                } else {
                    "field"
                };
                table.push(vec![i.to_string(), family.into(), s.to_string(), t.to_string()]);
            }
            (table, violation.is_none())
        }
    };
    Ok(Outcome {
        report,
        table,
        passed,
    })
}

fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn oracle_compare(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let betas = cfg.beta.values();
    let mut report = Report::new("oracle comparison");
    model_section(&mut report, cfg);
    let mut table = Table::new(vec!["beta", "logZ", "oracle_logZ", "rel_err"]);
    let mut worst: f64 = 0.0;
    let mut push = |b: f64, pipeline: f64, reference: f64| {
        let err = relative_error(pipeline, reference);
        worst = worst.max(err);
        table.push(vec![float(b), float(pipeline), float(reference), float(err)]);
    };
    if cfg.model == ModelKind::Ising {
        let model = ising(cfg)?;
        if model.n_spins() > oracle::MAX_BRUTE_SPINS {
            return Err(CliError::refused(format!(
                "brute-force Ising spin count of {} exceeds the cap of {}; compare a smaller lattice",
                model.n_spins(),
                oracle::MAX_BRUTE_SPINS
            )));
        }
        let coeffs = ising_low_t_coeffs(&model, model.bonds().len())?;
        report.section("method").line("pipeline", "broken-bond classes").line("oracle", "configuration sum");
        for &b in &betas {
            push(b, ising_log_z_low_t(&model, &coeffs, b), oracle::ising_brute_log_z(&model, b)?);
        }
    } else {
        let m = css(cfg)?;
        let spectrum = oracle::DenseSpectrum::of_model(&m)?;
        let wa = kernel_enumerator(&constraint_kernel(&m, Side::A), cfg)?;
        let wb = kernel_enumerator(&constraint_kernel(&m, Side::B), cfg)?;
        let z = PartitionFunction::new(&m, &wa, &wb)?;
        report
            .section("method")
            .line("pipeline", "constraint enumerators")
            .line("oracle", "dense diagonalization")
            .line("eigen_residual", float(spectrum.max_residual));
        for &b in &betas {
            push(b, z.log_z(b)?, spectrum.log_trace(b));
        }
    }
    let passed = worst <= ORACLE_TOLERANCE;
    report
        .section("result")
        .line("tolerance", float(ORACLE_TOLERANCE))
        .line("max_rel_err", float(worst))
        .line("matched", passed);
    Ok(Outcome {
        report,
        table,
        passed,
    })
}

fn logicals(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let r = match cfg.model {
        ModelKind::Toric4d => duality::logical_operators_4dtc(cfg.l)?,
        ModelKind::Haah => duality::logical_operators_haah(cfg.l)?,
        other => {
            return Err(CliError::input(format!(
                "logical operators are implemented for toric4d and haah, not {other}"
            )))
        }
    };
    let mut report = Report::new("logical operators");
    model_section(&mut report, cfg);
    report
        .section("result")
        .line("operators", r.logicals.len())
        .line("commute_with_stabilizers", r.commute_with_stabilizers)
        .line("pattern_holds", r.pattern_holds)
        .line("none_in_stabilizer_group", r.none_in_stabilizer_group)
        .line("independent_z", r.independent[0])
        .line("independent_x", r.independent[1]);
    let mut table = Table::new(vec!["label", "family", "weight"]);
    for lg in &r.logicals {
        let family = if lg.family == 0 { "Z" } else { "X" };
        table.push(vec![lg.label.clone(), family.into(), lg.op.weight().to_string()]);
    }
    Ok(Outcome {
        passed: r.all_hold(),
        report,
        table,
    })
}
