use std::path::{Path, PathBuf};

use emission_core::csv::write_table;
use emission_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::output::{emit, read_input, write_atomic, CliError, CliResult, Format};
use crate::svg::{line_chart, Line};
use crate::{Figure1Args, IdenticalModesArgs, InverseArgs, SeriesArgs, TwoLevelArgs};

fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be a positive finite number, got {x}"
        )))
    }
}

fn finite(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("--{name} must be finite, got {x}")))
    }
}

fn coupling(alpha: f64, phase: f64) -> CliResult<Complex64> {
    Ok(Complex64::from_polar(
        finite("alpha", alpha)?,
        finite("alpha-phase", phase)?,
    ))
}

fn core_grid(args: &SeriesArgs) -> CliResult<TimeGrid64> {
    let hbar = positive("hbar", args.hbar)?;
    let t_max = positive("t-max", args.t_max)?;
    Ok(TimeGrid::new(0.0, t_max / hbar, args.samples)?)
}

/// Same values on a grid expressed in display units.
fn display_series(series: &SurvivalSeries64, hbar: f64) -> CliResult<SurvivalSeries64> {
    let g = series.grid();
    let grid = TimeGrid::new(g.t_start() * hbar, g.t_end() * hbar, g.samples())?;
    Ok(SurvivalSeries::new(grid, series.values().to_vec())?)
}

fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

/// Writes the numerical trace next to its closed form.
fn write_overlay(args: &SeriesArgs, series: &SurvivalSeries64, analytic: &[f64]) -> CliResult<()> {
    let hbar = args.hbar;
    let text = match args.format {
        Format::Csv => write_table(
            &["t", "P", "P_analytic"],
            series
                .iter()
                .zip(analytic)
                .map(|((t, p), a)| vec![t * hbar, p, *a]),
        ),
        Format::Json => {
            let mut value =
                serde_json::to_value(display_series(series, hbar)?).expect("series serializes");
            value["P_analytic"] = serde_json::json!(analytic);
            json_text(&value)
        }
    };
    emit(args.out.as_deref(), &text)?;
    if let Some(path) = &args.svg {
        let numeric: Vec<(f64, f64)> = series.iter().map(|(t, p)| (t * hbar, p)).collect();
        let closed: Vec<(f64, f64)> = series
            .grid()
            .times()
            .zip(analytic)
            .map(|(t, a)| (t * hbar, *a))
            .collect();
        let svg = line_chart(
            &[
                Line {
                    label: "P (spectral)".into(),
                    points: &numeric,
                },
                Line {
                    label: "P (closed form)".into(),
                    points: &closed,
                },
            ],
            "t",
            "P(t)",
        );
        write_atomic(path, &svg)?;
    }
    Ok(())
}

pub fn two_level(args: &TwoLevelArgs) -> CliResult<()> {
    let eps0 = finite("eps0", args.eps0)?;
    let eps1 = finite("eps1", args.eps1.unwrap_or(eps0))?;
    let alpha = coupling(args.alpha, args.alpha_phase)?;
    let grid = core_grid(&args.series)?;
    let d = eigh(&build_hamiltonian(&StarModel::two_level(
        eps0, eps1, alpha,
    )?))?;
    let series = survival_series(&d, grid);
    let analytic: Vec<f64> = grid
        .times()
        .map(|t| detuned_two_level_survival(eps0, eps1, alpha, t))
        .collect();
    write_overlay(&args.series, &series, &analytic)
}

pub fn identical_modes(args: &IdenticalModesArgs) -> CliResult<()> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let eps0 = finite("eps0", args.eps0)?;
    let alpha = coupling(args.alpha, args.alpha_phase)?;
    let grid = core_grid(&args.series)?;
    let d = eigh(&build_hamiltonian(&StarModel::identical_modes(
        args.n, eps0, alpha,
    )?))?;
    let series = survival_series(&d, grid);
    let analytic: Vec<f64> = grid
        .times()
        .map(|t| identical_modes_survival(args.n, alpha.norm(), t))
        .collect();
    write_overlay(&args.series, &series, &analytic)
}

fn load_profile(args: &InverseArgs) -> CliResult<SpectralProfile64> {
    if let Some(path) = &args.profile {
        return Ok(SpectralProfile::from_json(&read_input(path)?)?);
    }
    let Some(m_half) = args.m else {
        return Err(CliError::Usage(
            "give --profile <file>, --flat --m <M>, or --m <M> --seed <S>".into(),
        ));
    };
    let eps0 = finite("eps0", args.eps0)?;
    let d_width = positive("d", args.d)?;
    if args.flat {
        Ok(flat_profile(m_half, eps0, d_width)?)
    } else if let Some(seed) = args.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(inverse::random_symmetric_profile(
            m_half, eps0, d_width, &mut rng,
        )?)
    } else {
        Err(CliError::Usage("--m needs either --flat or --seed".into()))
    }
}

pub fn inverse(args: &InverseArgs) -> CliResult<()> {
    if args.format != Format::Json {
        return Err(CliError::Usage("inverse writes JSON only".into()));
    }
    let tol = positive("tol", args.tol)?;
    let profile = load_profile(args)?;
    let model = construct_hamiltonian(&profile)?;
    let report = verify_round_trip(&model, &profile, tol)?;

    if let Some(path) = &args.profile_out {
        write_atomic(path, &format!("{}\n", profile.to_json()))?;
    }
    emit(args.out.as_deref(), &format!("{}\n", model.to_json()))?;
    let report_text = json_text(&serde_json::to_value(&report).expect("report serializes"));
    match &args.report {
        Some(path) => write_atomic(path, &report_text)?,
        None => eprint!("{report_text}"),
    }
    if !report.pass {
        return Err(CliError::Verification(format!(
            "round trip errors (eigenvalues {:e}, overlaps {:e}) exceed tolerance {:e}",
            report.max_eigenvalue_error, report.max_overlap_error, tol
        )));
    }
    Ok(())
}

fn parse_m_list(raw: &[String]) -> CliResult<Vec<usize>> {
    let mut list = Vec::new();
    for item in raw.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let m: usize = item.parse().map_err(|_| {
            CliError::Usage(format!("--m-list entry {item:?} is not a positive integer"))
        })?;
        if m == 0 {
            return Err(CliError::Usage(
                "--m-list entries must be at least 1".into(),
            ));
        }
        if !list.contains(&m) {
            list.push(m);
        }
    }
    if list.is_empty() {
        return Err(CliError::Usage("--m-list is empty".into()));
    }
    Ok(list)
}

struct Trace {
    m_half: usize,
    series: SurvivalSeries64,
    metrics: EmissionMetrics64,
}

fn flat_trace(
    m_half: usize,
    args: &Figure1Args,
    hbar: f64,
    t_max: Option<f64>,
) -> CliResult<Trace> {
    let profile = flat_profile(m_half, args.eps0, args.d)?;
    let d = eigh(&build_hamiltonian(&construct_hamiltonian(&profile)?))?;
    let t_end = match t_max {
        Some(t) => t / hbar,
        None => args.periods * revival_period(m_half, args.d),
    };
    let series = survival_series(&d, TimeGrid::new(0.0, t_end, args.samples)?);
    let mut metrics = emission_metrics(&series, args.threshold)?;
    metrics.decay_time = metrics.decay_time.map(|t| t * hbar);
    metrics.revival_time = metrics.revival_time.map(|t| t * hbar);
    Ok(Trace {
        m_half,
        series: display_series(&series, hbar)?,
        metrics,
    })
}

fn trace_path(dir: &Path, m_half: usize, suffix: &str) -> PathBuf {
    dir.join(format!("figure1_M{m_half}{suffix}"))
}

pub fn figure1(args: &Figure1Args) -> CliResult<()> {
    let m_list = parse_m_list(&args.m_list)?;
    let hbar = positive("hbar", args.hbar)?;
    positive("d", args.d)?;
    finite("eps0", args.eps0)?;
    positive("periods", args.periods)?;
    let t_max = args.t_max.map(|t| positive("t-max", t)).transpose()?;
    if !(args.threshold > 0.0 && args.threshold < 1.0) {
        return Err(CliError::Usage(format!(
            "--threshold must lie in (0, 1), got {}",
            args.threshold
        )));
    }

    let traces: Vec<CliResult<Trace>> = std::thread::scope(|scope| {
        let handles: Vec<_> = m_list
            .iter()
            .map(|&m| scope.spawn(move || flat_trace(m, args, hbar, t_max)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("trace worker panicked"))
            .collect()
    });
    let traces = traces.into_iter().collect::<CliResult<Vec<_>>>()?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", args.out.display())))?;
    for trace in &traces {
        let series_text = match args.format {
            Format::Csv => trace.series.to_csv(),
            Format::Json => format!("{}\n", trace.series.to_json()),
        };
        let ext = format!(".{}", args.format.extension());
        write_atomic(&trace_path(&args.out, trace.m_half, &ext), &series_text)?;
        write_atomic(
            &trace_path(&args.out, trace.m_half, "_metrics.json"),
            &format!("{}\n", trace.metrics.to_json()),
        )?;
    }

    if let Some(path) = &args.svg {
        let points: Vec<Vec<(f64, f64)>> =
            traces.iter().map(|t| t.series.iter().collect()).collect();
        let lines: Vec<Line<'_>> = traces
            .iter()
            .zip(&points)
            .map(|(t, p)| Line {
                label: format!("M = {}", t.m_half),
                points: p,
            })
            .collect();
        write_atomic(path, &line_chart(&lines, "t", "P(t)"))?;
    }
    Ok(())
}
