use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use emt_core::hausdorff::{directed_hausdorff, hausdorff as sym_hausdorff};
use emt_core::io::{
    format_g17, parse_axis_spec, parse_count_matrix, parse_grid_spec, parse_presheaf, parse_sampled_function,
    parse_subset, presheaf_row, read_space, write_conditions, write_presheaf, write_sampled_function, write_sweep_dat,
};
use emt_core::legendre::{self, convex_hull, default_dual_grid, lf_distance, lf_forward, toland_singer_check};
use emt_core::magnitude::{category_magnitude, magnitude_function, similarity_matrix, solve_weighting};
use emt_core::nucleus::{
    in_tight_span, is_isbell_point, isbell_hull, sample_isbell_completion, tight_span_filter, IsbellSample,
};
use emt_core::{DualGrid, ExtReal, GenMetricSpace, Grid, Outcome, SampledFunction, SimilarityMatrix, SpaceKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: emt_core::Error },
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] emt_core::Error),
}

type Result<T> = std::result::Result<T, CliError>;

/// Text for standard output, and whether the command's finding is negative
/// (exit status 1).
#[derive(Debug, Default)]
pub struct Report {
    pub stdout: String,
    pub negative: bool,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { stdout, negative: false }
    }

    fn negative(stdout: String) -> Self {
        Report { stdout, negative: true }
    }

    /// Sends the output to `out` instead of standard output when given.
    pub fn to(self, out: Option<PathBuf>) -> Result<Self> {
        match out {
            None => Ok(self),
            Some(path) => {
                write_file(&path, &self.stdout)?;
                Ok(Report { stdout: String::new(), ..self })
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source })
}

fn located<T>(path: &Path, r: emt_core::Result<T>) -> Result<T> {
    r.map_err(|source| CliError::Input { path: path.into(), source })
}

fn load_space(path: &Path, kind: SpaceKind) -> Result<GenMetricSpace> {
    let text = read_file(path)?;
    located(path, read_space(&text, kind))
}

fn violation_listing(x: &GenMetricSpace, tol: f64) -> Option<String> {
    let report = x.validate_with_tol(tol);
    if report.is_valid() {
        return None;
    }
    let mut out = String::from("invalid\n# points:");
    for (i, l) in x.labels().iter().enumerate() {
        let _ = write!(out, " {i}={l}");
    }
    out.push('\n');
    for v in &report.violations {
        let _ = writeln!(out, "{v}");
    }
    Some(out)
}

pub fn validate(path: &Path, kind: SpaceKind, tol: f64) -> Result<Report> {
    let x = load_space(path, kind)?;
    Ok(match violation_listing(&x, tol) {
        Some(listing) => Report::negative(listing),
        None => Report::ok("valid\n".into()),
    })
}

pub fn magnitude(path: &Path, kind: SpaceKind, t: f64, rational: bool) -> Result<Report> {
    if rational {
        let text = read_file(path)?;
        let (labels, counts) = located(path, parse_count_matrix(&text))?;
        let z = located(path, SimilarityMatrix::from_counts(labels, &counts))?;
        return Ok(match located(path, category_magnitude(&z))? {
            Outcome::Singular => Report::negative("singular\n".into()),
            Outcome::Defined(m) => {
                let mut out = format!("magnitude {m}\n");
                if let Outcome::Defined(w) = solve_weighting(&z) {
                    for (l, v) in w.labels.iter().zip(&w.w) {
                        let _ = writeln!(out, "weight {l} {v}");
                    }
                }
                Report::ok(out)
            }
        });
    }
    let x = load_space(path, kind)?;
    if let Some(listing) = violation_listing(&x, emt_core::DEFAULT_TOL) {
        return Ok(Report::negative(listing));
    }
    let z = similarity_matrix(&x, t)?;
    Ok(match solve_weighting(&z) {
        Outcome::Singular => Report::negative("singular\n".into()),
        Outcome::Defined(w) => {
            let mut out = format!("magnitude {}\n", format_g17(w.total()));
            for (l, v) in w.labels.iter().zip(&w.w) {
                let _ = writeln!(out, "weight {l} {}", format_g17(*v));
            }
            let _ = writeln!(out, "condition {}", format_g17(w.condition));
            Report::ok(out)
        }
    })
}

pub fn sweep(path: &Path, kind: SpaceKind, grid: &str, conditions: Option<&Path>) -> Result<Report> {
    let spec = parse_grid_spec(grid).map_err(|e| CliError::Usage(format!("--grid: {e}")))?;
    let x = load_space(path, kind)?;
    if let Some(listing) = violation_listing(&x, emt_core::DEFAULT_TOL) {
        return Ok(Report::negative(listing));
    }
    let samples = magnitude_function(&x, &spec.values()?)?;
    if let Some(c) = conditions {
        write_file(c, &write_conditions(&samples))?;
    }
    Ok(Report::ok(write_sweep_dat(&samples)))
}

pub fn hausdorff(path: &Path, kind: SpaceKind, a: &str, b: &str, directed: bool) -> Result<Report> {
    let x = load_space(path, kind)?;
    let a = parse_subset(a, &x).map_err(|e| CliError::Usage(format!("subset A: {e}")))?;
    let b = parse_subset(b, &x).map_err(|e| CliError::Usage(format!("subset B: {e}")))?;
    let d = if directed { directed_hausdorff(&x, &a, &b)? } else { sym_hausdorff(&x, &a, &b)? };
    Ok(Report::ok(format!("{}\n", format_g17(d.to_f64()))))
}

fn positive_step(step: f64) -> Result<f64> {
    if step > 0.0 && step.is_finite() {
        Ok(step)
    } else {
        Err(CliError::Usage(format!("step must be positive, got {step}")))
    }
}

fn sample_section(out: &mut String, x: &GenMetricSpace, sample: &IsbellSample) {
    let _ = writeln!(out, "# isbell completion: {} points, grid bound {}", sample.points.len(), format_g17(sample.grid_bound));
    if !sample.bound_is_complete {
        out.push_str("# grid bound is a heuristic for asymmetric spaces; fixed points beyond it are missed\n");
    }
    let _ = writeln!(out, "# {}", x.labels().join(" "));
    for p in &sample.points {
        let _ = writeln!(out, "{}", presheaf_row(p));
    }
}

pub fn tightspan(path: &Path, sample: Option<f64>, check: Option<&Path>, tol: f64) -> Result<Report> {
    let step = sample.map(positive_step).transpose()?;
    let x = load_space(path, SpaceKind::ClassicalMetric)?;
    if let Some(listing) = violation_listing(&x, tol) {
        return Err(CliError::Usage(format!("{} is not a classical metric space:\n{}", path.display(), listing.trim_end())));
    }
    if let Some(check) = check {
        let text = read_file(check)?;
        let f = located(check, parse_presheaf(&text, &x))?;
        return Ok(if in_tight_span(&x, &f.0, tol)? {
            Report::ok("in tight span\n".into())
        } else {
            Report::negative("not in tight span\n".into())
        });
    }
    let step = step.expect("clap requires --sample or --check");
    let sample = sample_isbell_completion(&x, step, tol)?;
    let span = tight_span_filter(&x, &sample.points, tol)?;
    let mut out = String::new();
    sample_section(&mut out, &x, &sample);
    let _ = writeln!(out, "# tight span: {} points, max asymmetry {}", span.members.len(), format_g17(span.max_asymmetry));
    for p in &span.members {
        let _ = writeln!(out, "{}", presheaf_row(p));
    }
    Ok(Report::ok(out))
}

pub fn isbell(path: &Path, kind: SpaceKind, step: Option<f64>, hull: Option<&Path>, tol: f64) -> Result<Report> {
    let step = step.map(positive_step).transpose()?;
    let x = load_space(path, kind)?;
    if let Some(listing) = violation_listing(&x, tol) {
        return Ok(Report::negative(listing));
    }
    if let Some(hull) = hull {
        let text = read_file(hull)?;
        let psi = located(hull, parse_presheaf(&text, &x))?;
        let fixed = is_isbell_point(&x, &psi, tol)?;
        let h = isbell_hull(&x, &psi)?;
        let mut out = format!("# input is {}a fixed point\n", if fixed { "" } else { "not " });
        out.push_str(&write_presheaf(&h));
        return Ok(Report::ok(out));
    }
    let sample = sample_isbell_completion(&x, step.expect("clap requires --step or --hull"), tol)?;
    let mut out = String::new();
    sample_section(&mut out, &x, &sample);
    Ok(Report::ok(out))
}

pub struct LfOptions<'a> {
    pub dual: &'a [String],
    pub roundtrip: bool,
    pub hull_out: Option<&'a Path>,
    pub distance: Option<&'a Path>,
    pub tol: Option<f64>,
}

fn load_function(path: &Path) -> Result<SampledFunction> {
    let text = read_file(path)?;
    located(path, parse_sampled_function(&text))
}

fn explicit_dual(specs: &[String], dim: usize) -> Result<DualGrid> {
    if specs.len() != dim {
        return Err(CliError::Usage(format!("--dual given {} times for a {dim}-dimensional function", specs.len())));
    }
    let axes = specs
        .iter()
        .map(|s| parse_axis_spec(s).map_err(|e| CliError::Usage(format!("--dual: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(DualGrid(Grid::new(axes)?))
}

/// The default dual grids of both functions, merged axis by axis.
fn covering_dual(f: &SampledFunction, g: &SampledFunction) -> Result<DualGrid> {
    let a = default_dual_grid(f)?;
    let b = default_dual_grid(g)?;
    let axes = a
        .0
        .axes()
        .iter()
        .zip(b.0.axes())
        .map(|(x, y)| legendre::Axis::new(x.min().min(y.min()), x.max().max(y.max()), x.count().max(y.count())))
        .collect::<emt_core::Result<Vec<_>>>()?;
    Ok(DualGrid(Grid::new(axes)?))
}

fn ts_line(out: &mut String, name: &str, lhs: ExtReal, rhs: ExtReal, pass: bool) {
    let _ = writeln!(out, "toland-singer {name} {} {} pass={pass}", format_g17(lhs.to_f64()), format_g17(rhs.to_f64()));
}

pub fn lf(path: &Path, opts: &LfOptions<'_>) -> Result<Report> {
    let f = load_function(path)?;
    if let Some(other) = opts.distance {
        let g = load_function(other)?;
        if f.grid() != g.grid() {
            return Err(CliError::Usage(format!("{} and {} are sampled on different grids", path.display(), other.display())));
        }
        let dual = if opts.dual.is_empty() { covering_dual(&f, &g)? } else { explicit_dual(opts.dual, f.grid().dim())? };
        let tol = opts.tol.unwrap_or(1e-9);
        let fg = toland_singer_check(&f, &g, &dual, tol)?;
        let gf = toland_singer_check(&g, &f, &dual, tol)?;
        let mut out = format!(
            "d(f,g) {}\nd(g,f) {}\n",
            format_g17(lf_distance(&f, &g)?.to_f64()),
            format_g17(lf_distance(&g, &f)?.to_f64())
        );
        ts_line(&mut out, "f->g", fg.lhs, fg.rhs, fg.pass);
        ts_line(&mut out, "g->f", gf.lhs, gf.rhs, gf.pass);
        let negative = !(fg.pass && gf.pass);
        return Ok(Report { stdout: out, negative });
    }
    let dual = if opts.dual.is_empty() { default_dual_grid(&f)? } else { explicit_dual(opts.dual, f.grid().dim())? };
    let mut out = write_sampled_function(&lf_forward(&f, &dual)?.function);
    if opts.roundtrip {
        let hull = write_sampled_function(&convex_hull(&f, &dual)?);
        match opts.hull_out {
            Some(p) => write_file(p, &hull)?,
            None => {
                out.push_str("# convex hull\n");
                out.push_str(&hull);
            }
        }
    }
    Ok(Report::ok(out))
}
