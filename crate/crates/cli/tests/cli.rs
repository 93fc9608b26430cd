use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn emt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn number(s: &str) -> f64 {
    s.trim().parse().unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = emt(&["validate", &data("equilateral.dm"), "--kind", "classical"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout(&ok), "valid\n");

    let bad = emt(&["validate", &data("broken_triangle.dm")]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("triangle (0,1,2)"), "{}", stdout(&bad));

    let garbled = emt(&["validate", &data("bad_token.dm")]);
    assert_eq!(code(&garbled), 2);
    let err = String::from_utf8_lossy(&garbled.stderr);
    assert!(err.contains("line 3, column 3"), "{err}");
}

#[test]
fn asymmetric_space_fails_classical_check_only() {
    assert_eq!(code(&emt(&["validate", &data("directed.dm")])), 0);
    assert_eq!(code(&emt(&["validate", &data("directed.dm"), "--kind", "classical"])), 1);
}

#[test]
fn two_point_magnitude() {
    let o = emt(&["magnitude", &data("pair.dm"), "-t", "1"]);
    assert_eq!(code(&o), 0);
    let line = stdout(&o).lines().next().unwrap().to_string();
    let m = number(line.strip_prefix("magnitude ").unwrap());
    assert!((m - 2.0 / (1.0 + (-1f64).exp())).abs() < 1e-12);
}

#[test]
fn rational_category_magnitudes() {
    let g = emt(&["magnitude", &data("cyclic3.counts"), "--rational"]);
    assert!(stdout(&g).starts_with("magnitude 1/3\n"));
    let c = emt(&["magnitude", &data("chain2.counts"), "--rational"]);
    assert!(stdout(&c).starts_with("magnitude 1\n"));
}

#[test]
fn single_point_sweep_is_constant() {
    let o = emt(&["sweep", &data("point.dm"), "--grid", "0.01:10000:9:log"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<_> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 9);
    assert!(lines.iter().all(|l| l.ends_with(" 1")));
}

#[test]
fn close_pair_sweep_climbs_from_one_to_three() {
    let o = emt(&["sweep", &data("close_pair.dm"), "--grid", "0.01:100000:41:log"]);
    let vals: Vec<f64> = stdout(&o).lines().map(|l| number(l.split(' ').nth(1).unwrap())).collect();
    assert!((vals[0] - 1.0).abs() < 0.05, "{vals:?}");
    assert!((vals[vals.len() - 1] - 3.0).abs() < 0.01, "{vals:?}");
    // an intermediate regime where the pair looks like a single point
    assert!(vals.iter().any(|v| (v - 2.0).abs() < 0.05), "{vals:?}");
}

#[test]
fn bipartite_sweep_blows_up_between_grid_points() {
    let o = emt(&["sweep", &data("bipartite.dm"), "--grid", "0.3:0.4:3"]);
    let vals: Vec<f64> = stdout(&o).lines().map(|l| number(l.split(' ').nth(1).unwrap())).collect();
    assert!(vals[1] > vals[0] && vals[1] > vals[2], "{vals:?}");
}

#[test]
fn sweep_writes_conditions_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.dat");
    let cond = dir.path().join("c.dat");
    let o = emt(&[
        "sweep",
        &data("pair.dm"),
        "--grid",
        "0.5:1:2",
        "--out",
        out.to_str().unwrap(),
        "--conditions",
        cond.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 2);
    assert_eq!(std::fs::read_to_string(&cond).unwrap().lines().count(), 2);
}

#[test]
fn bad_grid_spec_is_a_usage_error() {
    assert_eq!(code(&emt(&["sweep", &data("pair.dm"), "--grid", "1:2"])), 2);
    assert_eq!(code(&emt(&["sweep", &data("pair.dm"), "--grid", "1:2:5:cubic"])), 2);
}

#[test]
fn hausdorff_queries() {
    let dm = data("directed.dm");
    assert_eq!(stdout(&emt(&["hausdorff", &dm, "a", "a,b", "--directed"])), "0\n");
    assert_eq!(stdout(&emt(&["hausdorff", &dm, "", "b", "--directed"])), "0\n");
    let ab = number(&stdout(&emt(&["hausdorff", &dm, "a,c", "b", "--directed"])));
    let ba = number(&stdout(&emt(&["hausdorff", &dm, "b", "a,c", "--directed"])));
    let sym = number(&stdout(&emt(&["hausdorff", &dm, "a,c", "b"])));
    assert_eq!(sym, ab.max(ba));
    assert_eq!(code(&emt(&["hausdorff", &dm, "a", "z"])), 2);
}

#[test]
fn tight_span_membership() {
    let dm = data("equilateral.dm");
    let yes = emt(&["tightspan", &dm, "--check", &data("center.psh")]);
    assert_eq!((code(&yes), stdout(&yes).as_str()), (0, "in tight span\n"));
    let no = emt(&["tightspan", &dm, "--check", &data("off_span.psh")]);
    assert_eq!((code(&no), stdout(&no).as_str()), (1, "not in tight span\n"));
}

#[test]
fn yoneda_row_is_in_tight_span() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("y.psh");
    std::fs::write(&f, "a 0\nb 2\nc 2\n").unwrap();
    assert_eq!(code(&emt(&["tightspan", &data("equilateral.dm"), "--check", f.to_str().unwrap()])), 0);
}

#[test]
fn two_point_tight_span_sample() {
    let o = emt(&["tightspan", &data("pair.dm"), "--sample", "0.25"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let (completion, span) = text.split_once("# tight span").unwrap();
    let span = span.split_once('\n').unwrap().1;
    let rows = |s: &str| s.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count();
    assert_eq!(rows(completion), 25);
    assert_eq!(rows(span), 5);
    for row in span.lines() {
        let v: Vec<f64> = row.split(' ').map(number).collect();
        assert_eq!(v[0] + v[1], 1.0);
    }
}

#[test]
fn nonpositive_step_is_rejected() {
    assert_eq!(code(&emt(&["tightspan", &data("pair.dm"), "--sample", "0"])), 2);
    assert_eq!(code(&emt(&["isbell", &data("pair.dm"), "--step", "-1"])), 2);
}

#[test]
fn isbell_sample_flags_heuristic_bound() {
    let dir = tempfile::tempdir().unwrap();
    let dm = dir.path().join("asym.dm");
    std::fs::write(&dm, "2\nx y\n0 1\n2 0\n").unwrap();
    let o = emt(&["isbell", dm.to_str().unwrap(), "--step", "0.5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("heuristic"));
}

#[test]
fn isbell_hull_of_representable_is_itself() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("y.psh");
    std::fs::write(&f, "a 0\nb 2\nc 1\n").unwrap();
    let o = emt(&["isbell", &data("directed.dm"), "--hull", f.to_str().unwrap()]);
    assert_eq!(stdout(&o), "# input is a fixed point\na 0\nb 2\nc 1\n");
}

#[test]
fn kinked_pair_distances() {
    let o = emt(&["lf", &data("abs.fn"), "--distance", &data("shifted_abs.fn"), "--dual=-2:2:257"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "d(f,g) 1\nd(g,f) 3\ntoland-singer f->g 1 1 pass=true\ntoland-singer g->f 3 3 pass=true\n"
    );
}

#[test]
fn distance_on_mismatched_grids_is_a_usage_error() {
    assert_eq!(code(&emt(&["lf", &data("abs.fn"), "--distance", &data("quartic.fn")])), 2);
}

fn values_after(text: &str, marker: Option<&str>) -> Vec<(f64, f64)> {
    let body = match marker {
        Some(m) => text.split_once(m).unwrap().1,
        None => text,
    };
    body.lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .map(|l| {
            let (x, v) = l.split_once(' ').unwrap();
            (number(x), number(v))
        })
        .collect()
}

#[test]
fn double_well_hull_is_flat_in_the_middle() {
    let o = emt(&["lf", &data("quartic.fn"), "--roundtrip"]);
    assert_eq!(code(&o), 0);
    let hull = values_after(&stdout(&o), Some("# convex hull"));
    assert_eq!(hull.len(), 361);
    for (x, v) in hull {
        if x.abs() <= 1.0 {
            assert!(v.abs() < 1e-3, "hull({x}) = {v}");
        }
    }
}

#[test]
fn roundtrip_of_convex_input_reproduces_it() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.fn");
    let o = emt(&["lf", &data("parabola.fn"), "--roundtrip", "--hull-out", h.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let hull = values_after(&std::fs::read_to_string(&h).unwrap(), None);
    let input = values_after(&std::fs::read_to_string(data("parabola.fn")).unwrap(), None);
    assert_eq!(hull.len(), input.len());
    for ((x, a), (_, b)) in hull.iter().zip(&input) {
        assert!((a - b).abs() < 1e-3, "at {x}: {a} vs {b}");
    }
}

#[test]
fn dual_axis_count_must_match_dimension() {
    assert_eq!(code(&emt(&["lf", &data("parabola.fn"), "--dual=0:1:3", "--dual=0:1:3"])), 2);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_emt"))
            .args(["sweep", &data("close_pair.dm"), "--grid", "0.01:1000:200:log"])
            .env("EMT_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("4"));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_emt"))
        .args(["validate", &data("pair.dm")])
        .env("EMT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}
