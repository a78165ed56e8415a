//! Subcommand implementations.
//!
//! Every command is a plain function from its argument structure to a
//! text [`Outcome`]; the binary only parses, dispatches, and prints.
//! Commands that fan out over a grid go through [`pool::map_ordered`],
//! so their output does not depend on the worker count.

use std::path::PathBuf;

use num_complex::Complex64;
use serde_json::json;

use fzeta_measure::{
    disk_drum, richardson, sierpinski_carpet, sierpinski_gasket, square_boundary,
    staircase_drum, DistanceField,
};
use fzeta_moran::{classify, find_roots, Classification, DirichletPolynomial, Window};
use fzeta_spectral::{frequency_count, riemann_zeta, weyl_term};
use fzeta_spray::{ball_volume, catalog_entries, catalog_get, CatalogEntry, CatalogParams, EntryKind};
use fzeta_strings::{FractalString, GeometricZetaForm};
use fzeta_tube::{
    classify_entry, classify_string, series_for_entry, series_for_string, standard_window,
    string_divisor, TubeSeries, Verdict,
};

use crate::acceptance::{run_criterion, CRITERIA};
use crate::output::{log_grid, parse_complex, sig, sig_pair, Table};
use crate::pool;
use crate::spec::{
    CatalogArgs, ClassifyArgs, Command, DimsArgs, DivisorSumArgs, ReportArgs, RunSpec,
    SpectralArgs, TubeCompareArgs, TubeMeasureArgs, TubePredictArgs, ZetaArgs,
};
use crate::target::{entry_period, Target};
use crate::CliError;

/// What a finished command hands back to the binary.
#[derive(Clone, Debug)]
pub struct Outcome {
    /// Full text output; files named by `--out` flags are already written.
    pub stdout: String,
    /// Process exit code: zero, or one when a requested check failed.
    pub exit: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, exit: 0 }
    }
}

/// Runs one complete description.  The worker pool is created here and
/// nowhere else; the library crates underneath stay serial.
pub fn run(spec: &RunSpec) -> Result<Outcome, CliError> {
    let workers = pool::resolve_workers((spec.workers > 0).then_some(spec.workers))?;
    let pool = pool::build(workers)?;
    match &spec.command {
        Command::Catalog(args) => catalog_cmd(args),
        Command::Zeta(args) => zeta_cmd(args),
        Command::Dims(args) => dims_cmd(args),
        Command::TubePredict(args) => tube_predict_cmd(args, &pool),
        Command::TubeMeasure(args) => tube_measure_cmd(args, &pool),
        Command::TubeCompare(args) => tube_compare_cmd(args, &pool),
        Command::Classify(args) => classify_cmd(args),
        Command::Spectral(args) => spectral_cmd(args, &pool),
        Command::DivisorSum(args) => divisor_sum_cmd(args),
        Command::Report(args) => report_cmd(args),
    }
}

/// Routes a finished text either to `--out` or to stdout.
fn deliver(text: String, out: &Option<PathBuf>, what: &str) -> Result<String, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &text)?;
            Ok(format!("wrote {what} to {}\n", path.display()))
        }
        None => Ok(text),
    }
}

fn pretty(doc: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("json document serializes");
    text.push('\n');
    text
}

fn kind_label(kind: &EntryKind) -> String {
    match kind {
        EntryKind::Relative => "relative".into(),
        EntryKind::Bounded { delta } => format!("bounded, delta {}", sig(*delta)),
        EntryKind::Tube { delta } => format!("tube, delta {}", sig(*delta)),
    }
}

fn kind_json(kind: &EntryKind) -> serde_json::Value {
    match kind {
        EntryKind::Relative => json!({ "kind": "relative" }),
        EntryKind::Bounded { delta } => json!({ "kind": "bounded", "delta": delta }),
        EntryKind::Tube { delta } => json!({ "kind": "tube", "delta": delta }),
    }
}

fn entry_json(entry: &CatalogEntry) -> serde_json::Value {
    json!({
        "name": entry.name,
        "ambient": entry.ambient,
        "kind": kind_json(&entry.kind),
        "dimension": entry.dimension,
        "closed_form": entry.zeta.is_some(),
        "divisor": {
            "exact": entry.divisor_exact,
            "fixed": entry.divisor.fixed().iter().map(|(p, m)| {
                json!({ "re": p.re, "im": p.im, "order": m })
            }).collect::<Vec<_>>(),
            "families": entry.divisor.families().iter().map(|f| {
                json!({ "re": f.base.re, "im": f.base.im, "period": f.period, "order": f.order })
            }).collect::<Vec<_>>(),
        },
        "residues": entry.residues.iter().map(|(p, r)| {
            json!({ "pole": { "re": p.re, "im": p.im }, "residue": { "re": r.re, "im": r.im } })
        }).collect::<Vec<_>>(),
        "notes": entry.notes,
    })
}

fn catalog_cmd(args: &CatalogArgs) -> Result<Outcome, CliError> {
    match &args.name {
        None => {
            let entries: Vec<CatalogEntry> = catalog_entries()
                .into_iter()
                .map(|name| catalog_get(name, &CatalogParams::default()))
                .collect::<Result<_, _>>()?;
            if args.json {
                let doc = entries.iter().map(entry_json).collect::<Vec<_>>();
                return Ok(Outcome::ok(pretty(&serde_json::Value::Array(doc))));
            }
            let mut out = String::new();
            for e in &entries {
                out.push_str(&format!(
                    "{:<22} N={}  dim {:<22}  {}\n",
                    e.name,
                    e.ambient,
                    sig(e.dimension),
                    kind_label(&e.kind)
                ));
            }
            Ok(Outcome::ok(out))
        }
        Some(name) => {
            let entry = catalog_get(name, &CatalogParams::default())?;
            if args.json {
                return Ok(Outcome::ok(pretty(&entry_json(&entry))));
            }
            let mut out = String::new();
            out.push_str(&format!("name:       {}\n", entry.name));
            out.push_str(&format!("ambient:    {}\n", entry.ambient));
            out.push_str(&format!("kind:       {}\n", kind_label(&entry.kind)));
            out.push_str(&format!("dimension:  {}\n", sig(entry.dimension)));
            out.push_str(&format!(
                "closed form: {}\n",
                if entry.zeta.is_some() { "yes" } else { "no" }
            ));
            out.push_str(&format!(
                "divisor:    {}, {} fixed, {} ladder(s)\n",
                if entry.divisor_exact { "exact" } else { "upper bound" },
                entry.divisor.fixed().len(),
                entry.divisor.families().len()
            ));
            out.push_str(&format!("residues:   {} stored\n", entry.residues.len()));
            out.push_str(&format!("notes:      {}\n", entry.notes));
            Ok(Outcome::ok(out))
        }
    }
}

fn zeta_cmd(args: &ZetaArgs) -> Result<Outcome, CliError> {
    let target = Target::parse(&args.target)?;
    let points: Vec<Complex64> =
        args.at.iter().map(|t| parse_complex(t)).collect::<Result<_, _>>()?;

    let eval: Box<dyn Fn(Complex64) -> Result<Complex64, CliError>> = match &target {
        Target::Riemann => Box::new(|s| Ok(riemann_zeta(s)?)),
        Target::Entry(_) => {
            let entry = target.entry(args.n, args.delta)?;
            let zeta = entry.zeta.clone().ok_or_else(|| {
                CliError::usage(format!("{} stores no closed form to evaluate", entry.name))
            })?;
            Box::new(move |s| Ok(zeta.eval(s)?))
        }
        Target::Str(string_spec) => {
            let string = string_spec.build()?;
            match string.geometric_zeta() {
                GeometricZetaForm::Closed(expr) => Box::new(move |s| Ok(expr.eval(s)?)),
                GeometricZetaForm::PartialSumsOnly => {
                    Box::new(move |s| Ok(string.zeta_partial(s)?))
                }
            }
        }
        Target::Moran(bases) => {
            let poly = DirichletPolynomial::from_scales(bases.clone())?;
            Box::new(move |s| Ok(poly.eval(s)))
        }
    };

    let mut table = Table::new(&["s_re", "s_im", "value_re", "value_im"]);
    let rows = points.len();
    for s in points {
        let value = eval(s)?;
        let (sre, sim) = sig_pair(s);
        let (vre, vim) = sig_pair(value);
        table.row(&[sre, sim, vre, vim]);
    }
    Ok(Outcome::ok(deliver(table.finish(), &args.out, &format!("{rows} rows"))?))
}

/// Vertical period of the densest pole ladder of a scale set: the exact
/// lattice period when there is one, the period of the smallest ratio
/// otherwise.
fn ladder_period(poly: &DirichletPolynomial) -> f64 {
    if let Classification::Lattice { period, .. } = classify(poly) {
        return period;
    }
    let r_min = poly.terms().iter().map(|(b, _)| b.value()).fold(1.0, f64::min);
    std::f64::consts::TAU / (1.0 / r_min).ln()
}

fn string_scaling(string: &FractalString) -> Result<DirichletPolynomial, CliError> {
    let bases = string.ratio_bases();
    if bases.is_empty() {
        return Err(CliError::usage(
            "this string exposes no scaling ratios, so it has no pole ladder".into(),
        ));
    }
    Ok(DirichletPolynomial::new(bases.to_vec())?)
}

/// Applies the four optional window overrides to a default box.
fn resolve_window(
    default: (f64, f64, f64, f64),
    args: (&Option<f64>, &Option<f64>, &Option<f64>, &Option<f64>),
) -> (f64, f64, f64, f64) {
    (
        args.0.unwrap_or(default.0),
        args.1.unwrap_or(default.1),
        args.2.unwrap_or(default.2),
        args.3.unwrap_or(default.3),
    )
}

fn window_json(w: (f64, f64, f64, f64)) -> serde_json::Value {
    json!({ "re_min": w.0, "re_max": w.1, "im_min": w.2, "im_max": w.3 })
}

fn poles_json(points: &[(Complex64, i32)]) -> Vec<serde_json::Value> {
    points
        .iter()
        .map(|(p, m)| json!({ "re": p.re, "im": p.im, "order": m }))
        .collect()
}

fn dims_cmd(args: &DimsArgs) -> Result<Outcome, CliError> {
    let target = Target::parse(&args.target)?;
    let overrides = (&args.re_min, &args.re_max, &args.im_min, &args.im_max);
    let doc = match &target {
        Target::Entry(_) => {
            let entry = target.entry(args.n, args.delta)?;
            let period = entry_period(&entry).unwrap_or(1.0);
            let half = (f64::from(args.kmax) + 0.5) * period;
            let w = resolve_window(
                (-0.5, f64::from(entry.ambient) + 0.5, -half, half),
                overrides,
            );
            let window = Window::new(w.0, w.1, w.2, w.3);
            let points = entry.divisor.points_in(&window);
            json!({
                "target": entry.name,
                "window": window_json(w),
                "exact": entry.divisor_exact,
                "poles": poles_json(&points),
            })
        }
        Target::Str(string_spec) => {
            let string = string_spec.build()?;
            let period = ladder_period(&string_scaling(&string)?);
            let half = (f64::from(args.kmax) + 0.5) * period;
            let w = resolve_window((-0.5, 1.5, -half, half), overrides);
            let window = Window::new(w.0, w.1, w.2, w.3);
            let points = string_divisor(&string, &window)?.points_in(&window);
            json!({
                "target": string_spec.describe(),
                "window": window_json(w),
                "exact": true,
                "poles": poles_json(&points),
            })
        }
        Target::Moran(bases) => {
            let poly = DirichletPolynomial::from_scales(bases.clone())?;
            let sigma = poly.real_dimension()?;
            let period = ladder_period(&poly);
            let half = (f64::from(args.kmax) + 0.5) * period;
            let w = resolve_window((sigma - 2.0, sigma + 0.5, -half, half), overrides);
            let window = Window::new(w.0, w.1, w.2, w.3);
            let roots = find_roots(&poly, &window)?;
            json!({
                "target": args.target,
                "dimension": sigma,
                "window": window_json(w),
                "roots": roots.iter().map(|r| {
                    json!({ "re": r.location.re, "im": r.location.im, "order": r.order })
                }).collect::<Vec<_>>(),
            })
        }
        Target::Riemann => {
            return Err(CliError::usage("the Riemann zeta has no poles to tabulate here"))
        }
    };
    Ok(Outcome::ok(deliver(pretty(&doc), &args.out, "pole table")?))
}

/// Widths where an entry's expansion is taken at face value when the
/// caller does not override: the stated neighborhood depth where the
/// entry has one, a known geometric ceiling otherwise.
fn default_valid_to(entry: &CatalogEntry) -> f64 {
    match entry.kind {
        EntryKind::Bounded { delta } | EntryKind::Tube { delta } => delta,
        EntryKind::Relative => match entry.name {
            "cantor-string" => 1.0 / 6.0,
            "cantor-graph" => 1.0 / 3.0,
            _ => 1.0,
        },
    }
}

fn half_longest(string: &FractalString) -> Result<f64, CliError> {
    string
        .lengths()
        .next()
        .map(|(l, _)| l / 2.0)
        .ok_or_else(|| CliError::failed("string has no lengths"))
}

/// Builds the tube expansion a target admits.
fn build_series(
    target: &Target,
    n: Option<u32>,
    delta: Option<f64>,
    kmax: u32,
    valid_to: Option<f64>,
) -> Result<TubeSeries, CliError> {
    match target {
        Target::Entry(_) => {
            let entry = target.entry(n, delta)?;
            let period = entry_period(&entry).unwrap_or(1.0);
            let valid = valid_to.unwrap_or_else(|| default_valid_to(&entry));
            Ok(series_for_entry(&entry, &standard_window(entry.ambient, period, kmax), valid)?)
        }
        Target::Str(string_spec) => {
            let string = string_spec.build()?;
            let period = ladder_period(&string_scaling(&string)?);
            let valid = match valid_to {
                Some(v) => v,
                None => half_longest(&string)?,
            };
            Ok(series_for_string(&string, &standard_window(1, period, kmax), valid)?)
        }
        _ => Err(CliError::usage("this target admits no tube expansion")),
    }
}

fn clamp_to_validity(eps_max: f64, series: &TubeSeries) -> Result<(), CliError> {
    if eps_max > series.valid_to() {
        return Err(CliError::usage(format!(
            "eps_max {eps_max} exceeds the expansion's validity ceiling {}",
            series.valid_to()
        )));
    }
    Ok(())
}

fn tube_predict_cmd(args: &TubePredictArgs, pool: &rayon::ThreadPool) -> Result<Outcome, CliError> {
    let target = Target::parse(&args.target)?;
    let series = build_series(&target, args.n, args.delta, args.kmax, args.valid_to)?;
    clamp_to_validity(args.eps_max, &series)?;
    let grid = log_grid(args.eps_min, args.eps_max, args.points)?;
    let rows = pool::map_ordered(pool, grid, |eps| Ok((eps, series.eval(eps)?)))?;

    let mut table = Table::new(&["epsilon", "volume"]);
    for (eps, v) in &rows {
        table.row(&[sig(*eps), sig(*v)]);
    }
    Ok(Outcome::ok(deliver(table.finish(), &args.out, &format!("{} rows", rows.len()))?))
}

/// Rasterizes one of the stock drums into a distance field.
fn build_field(raster: &str, depth: u32, resolution: usize) -> Result<DistanceField, CliError> {
    Ok(match raster {
        "gasket" => sierpinski_gasket(depth, resolution)?.distance_field(),
        "carpet" => sierpinski_carpet(depth, resolution)?.distance_field(),
        "square" => square_boundary(resolution)?.distance_field(),
        "disk" => disk_drum(resolution)?.distance_field(),
        "staircase" => staircase_drum(depth, resolution)?,
        other => {
            return Err(CliError::usage(format!(
                "unknown raster {other:?}; expected gasket, carpet, staircase, square, or disk"
            )))
        }
    })
}

fn tube_measure_cmd(args: &TubeMeasureArgs, pool: &rayon::ThreadPool) -> Result<Outcome, CliError> {
    let field = build_field(&args.raster, args.depth, args.resolution)?;
    let grid = log_grid(args.eps_min, args.eps_max, args.points)?;
    let rows: Vec<(f64, f64)> = if args.richardson {
        let fine = build_field(&args.raster, args.depth, args.resolution * 2)?;
        pool::map_ordered(pool, grid, |eps| {
            Ok((eps, richardson(field.tube_volume(eps)?, fine.tube_volume(eps)?)))
        })?
    } else {
        pool::map_ordered(pool, grid, |eps| Ok((eps, field.tube_volume(eps)?)))?
    };

    let mut table = Table::new(&["epsilon", "volume"]);
    for (eps, v) in &rows {
        table.row(&[sig(*eps), sig(*v)]);
    }
    Ok(Outcome::ok(deliver(table.finish(), &args.out, &format!("{} rows", rows.len()))?))
}

/// An independent reference volume for targets that have one: the exact
/// bookkeeping sum for strings, a raster for the planar fractals, the
/// shell volume for spheres.
#[allow(clippy::type_complexity)]
fn build_reference(
    target: &Target,
    args: &TubeCompareArgs,
) -> Result<(Box<dyn Fn(f64) -> Result<f64, CliError> + Sync + Send>, &'static str, Option<f64>), CliError>
{
    match target {
        Target::Str(string_spec) => {
            let string = string_spec.build()?;
            Ok((Box::new(move |eps| Ok(string.tube_exact(eps)?)), "exact", None))
        }
        Target::Entry(name) => match name.as_str() {
            "cantor-string" => {
                let string = FractalString::cantor();
                Ok((Box::new(move |eps| Ok(string.tube_exact(eps)?)), "exact", None))
            }
            "sierpinski-gasket" | "sierpinski-carpet" => {
                let raster = if name == "sierpinski-gasket" { "gasket" } else { "carpet" };
                let field = build_field(raster, args.depth, args.resolution)?;
                // The carpet raster carries less margin than the entry's
                // neighborhood depth; stay inside it by default.
                let cap = if raster == "carpet" { Some(0.18) } else { None };
                Ok((Box::new(move |eps| Ok(field.tube_volume(eps)?)), "raster", cap))
            }
            "sphere" => {
                let n = args.n.unwrap_or(2);
                let theta = ball_volume(n);
                let power = i32::try_from(n).expect("catalog dimensions are small");
                Ok((
                    Box::new(move |eps| {
                        Ok(theta * ((1.0 + eps).powi(power) - (1.0 - eps).powi(power)))
                    }),
                    "analytic",
                    Some(1.0),
                ))
            }
            other => Err(CliError::usage(format!(
                "no independent reference volume for {other}; try cantor-string, \
                 sierpinski-gasket, sierpinski-carpet, sphere, or a string target"
            ))),
        },
        _ => Err(CliError::usage("tube-compare needs a catalog entry or a string target")),
    }
}

fn tube_compare_cmd(args: &TubeCompareArgs, pool: &rayon::ThreadPool) -> Result<Outcome, CliError> {
    let target = Target::parse(&args.target)?;
    let series = build_series(&target, args.n, args.delta, args.kmax, args.valid_to)?;
    let (reference, label, cap) = build_reference(&target, args)?;

    let eps_max = match args.eps_max {
        Some(v) => {
            clamp_to_validity(v, &series)?;
            v
        }
        None => {
            let v = series.valid_to().min(cap.unwrap_or(f64::INFINITY));
            v
        }
    };
    let grid = log_grid(args.eps_min, eps_max, args.points)?;
    let rows = pool::map_ordered(pool, grid, |eps| {
        let predicted = series.eval(eps)?;
        let measured = reference(eps)?;
        Ok((eps, predicted, measured))
    })?;

    let mut table = Table::new(&["epsilon", "V_formula", "V_reference", "rel_err"]);
    let mut worst = 0.0f64;
    for (eps, predicted, measured) in &rows {
        let rel = (predicted - measured).abs() / measured.abs().max(1e-300);
        worst = worst.max(rel);
        table.row(&[sig(*eps), sig(*predicted), sig(*measured), sig(rel)]);
    }
    let mut stdout = deliver(table.finish(), &args.out, &format!("{} rows", rows.len()))?;
    stdout.push_str(&format!("reference {label}, max_rel_err {}\n", sig(worst)));

    let exit = match args.tolerance {
        Some(tol) if worst > tol => 1,
        _ => 0,
    };
    Ok(Outcome { stdout, exit })
}

fn verdict_json(target: &str, verdict: &Verdict) -> serde_json::Value {
    use fzeta_tube::{ContentVerdict, Fractality};
    let content = match verdict.content {
        ContentVerdict::Measurable { content } => {
            json!({ "kind": "measurable", "content": content })
        }
        ContentVerdict::NotMeasurable { average } => {
            json!({ "kind": "not-measurable", "average": average })
        }
        ContentVerdict::LogGauge { power, content } => {
            json!({ "kind": "log-gauge", "power": power, "content": content })
        }
    };
    let fractality = match verdict.fractal {
        Fractality::NotFractal => json!({ "kind": "not-fractal" }),
        Fractality::Critical => json!({ "kind": "critical" }),
        Fractality::Subcritical { exponent } => {
            json!({ "kind": "subcritical", "exponent": exponent })
        }
    };
    json!({
        "target": target,
        "dimension": verdict.dimension,
        "content": content,
        "fractality": fractality,
    })
}

fn classify_cmd(args: &ClassifyArgs) -> Result<Outcome, CliError> {
    let target = Target::parse(&args.target)?;
    let doc = match &target {
        Target::Entry(_) => {
            let entry = target.entry(args.n, args.delta)?;
            verdict_json(entry.name, &classify_entry(&entry)?)
        }
        Target::Str(string_spec) => {
            let string = string_spec.build()?;
            verdict_json(&string_spec.describe(), &classify_string(&string)?)
        }
        Target::Moran(bases) => {
            let poly = DirichletPolynomial::from_scales(bases.clone())?;
            let dimension = poly.real_dimension()?;
            let scaling = match classify(&poly) {
                Classification::Lattice { generator, period, .. } => {
                    json!({ "kind": "lattice", "generator": generator, "period": period })
                }
                Classification::NonLattice { rank_bound } => {
                    json!({ "kind": "nonlattice", "rank_bound": rank_bound })
                }
                Classification::Ambiguous => json!({ "kind": "ambiguous" }),
            };
            json!({ "target": args.target, "dimension": dimension, "scaling": scaling })
        }
        Target::Riemann => {
            return Err(CliError::usage("classification applies to geometric targets"))
        }
    };
    Ok(Outcome::ok(pretty(&doc)))
}

fn spectral_cmd(args: &SpectralArgs, pool: &rayon::ThreadPool) -> Result<Outcome, CliError> {
    let Target::Str(string_spec) = Target::parse(&args.target)? else {
        return Err(CliError::usage("spectral counting needs a string target, string:<name>"));
    };
    let string = string_spec.build()?;
    let grid = log_grid(args.x_min, args.x_max, args.points)?;
    let rows = pool::map_ordered(pool, grid, |x| {
        let count = frequency_count(&string, x)?;
        let weyl = weyl_term(&string, x);
        Ok((x, count, weyl))
    })?;

    let mut table = Table::new(&["x", "N_nu", "W", "ratio"]);
    for (x, count, weyl) in &rows {
        table.row(&[sig(*x), sig(*count), sig(*weyl), sig(count / weyl)]);
    }
    Ok(Outcome::ok(deliver(table.finish(), &args.out, &format!("{} rows", rows.len()))?))
}

fn divisor_sum_cmd(args: &DivisorSumArgs) -> Result<Outcome, CliError> {
    let left = catalog_get(&args.left, &CatalogParams::default())?;
    let right = catalog_get(&args.right, &CatalogParams::default())?;
    let sum = left.divisor.minkowski_sum(&right.divisor)?;

    let period = sum
        .families()
        .iter()
        .map(|f| f.period)
        .fold(0.0f64, f64::max)
        .max(1.0);
    let re_max = f64::from(left.ambient.max(right.ambient)) + 0.5;
    let half = args.periods * period;
    let window = Window::new(-0.5, re_max, -half, half);
    let points = sum.points_in(&window);

    let mut doc = json!({
        "left": left.name,
        "right": right.name,
        "window": window_json((-0.5, re_max, -half, half)),
        "points": poles_json(&points),
    });
    let mut exit = 0u8;
    if let Some(name) = &args.expect {
        let expected = catalog_get(name, &CatalogParams::default())?;
        let matches = sum.same_support_in(&expected.divisor, &window, 1e-12);
        doc["expect"] = json!({ "name": expected.name, "matches": matches });
        if !matches {
            exit = 1;
        }
    }
    let stdout = deliver(pretty(&doc), &args.out, "divisor sum")?;
    Ok(Outcome { stdout, exit })
}

fn report_cmd(args: &ReportArgs) -> Result<Outcome, CliError> {
    let ids: Vec<u32> = match &args.criteria {
        Some(list) if !list.is_empty() => {
            for id in list {
                if !CRITERIA.iter().any(|(n, _)| n == id) {
                    return Err(CliError::usage(format!("no criterion numbered {id}")));
                }
            }
            list.clone()
        }
        _ => CRITERIA.iter().map(|(n, _)| *n).collect(),
    };

    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
    }

    let mut stdout = String::new();
    let mut summary = Vec::new();
    let mut failed = Vec::new();
    for &id in &ids {
        let report = run_criterion(id, args.seed);
        stdout.push_str(&report.line());
        stdout.push('\n');
        if let Some(dir) = &args.out_dir {
            for (name, text) in &report.artifacts {
                std::fs::write(dir.join(format!("{:02}_{name}", report.id)), text)?;
            }
        }
        summary.push(json!({
            "id": report.id,
            "name": report.name,
            "passed": report.passed,
            "seconds": report.seconds,
            "details": report.details,
        }));
        if !report.passed {
            failed.push(id);
        }
    }
    if let Some(dir) = &args.out_dir {
        std::fs::write(dir.join("summary.json"), pretty(&serde_json::Value::Array(summary)))?;
    }

    stdout.push_str(&format!("passed {} of {}\n", ids.len() - failed.len(), ids.len()));
    if failed.is_empty() {
        Ok(Outcome::ok(stdout))
    } else {
        let list = failed.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
        stdout.push_str(&format!("failed criteria: {list}\n"));
        Ok(Outcome { stdout, exit: 1 })
    }
}
