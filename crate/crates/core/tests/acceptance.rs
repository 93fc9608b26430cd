//! End-to-end acceptance checks. Runs without the libtest harness so that
//! each criterion prints exactly one PASS/FAIL line; the process exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{close_enough, random_category, random_metric, random_values};
use emt_core::ext::{ExtReal, PosInf};
use emt_core::hausdorff::{directed_hausdorff, hausdorff, SubsetSelection};
use emt_core::legendre::{
    conjugate_at, convex_hull, default_dual_grid, grid_tolerance, lf_distance, lf_forward, toland_singer_check,
    DualGrid, Grid, SampledFunction,
};
use emt_core::linalg::rational;
use emt_core::magnitude::{
    category_magnitude, complete_bipartite_space, magnitude, magnitude_function, rational_from_ratio,
    similarity_matrix, Outcome, SimilarityMatrix,
};
use emt_core::nucleus::{
    hom_profunctor, in_tight_span, isbell_distance, isbell_hull, pull, push, three_point_space, tripod_lengths,
    yoneda_at, Copresheaf, Presheaf,
};
use emt_core::space::funcat_distance;
use emt_core::{GenMetricSpace, ScalarFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn within(label: &str, elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("{label} took {elapsed:?}, limit {limit:?}"))
    }
}

fn tripod() -> Verdict {
    let start = Instant::now();
    let mut r = rng(1);
    let mut done = 0;
    while done < 200 {
        // multiples of 1/64 keep the leg arithmetic exact
        let [a, b, c]: [f64; 3] = std::array::from_fn(|_| f64::from(r.gen_range(0u32..=640)) / 64.0);
        if a > b + c || b > a + c || c > a + b {
            continue;
        }
        let legs = tripod_lengths(a, b, c).map_err(|e| e.to_string())?;
        if legs.leg_b + legs.leg_c != a || legs.leg_b + legs.leg_a != c || legs.leg_c + legs.leg_a != b {
            return Err(format!("leg sums fail for ({a}, {b}, {c}): {legs:?}"));
        }
        if a == 0.0 || b == 0.0 || c == 0.0 {
            continue;
        }
        let x = three_point_space(a, b, c).map_err(|e| e.to_string())?;
        let f = ScalarFunction::nonneg(&x, &legs.center()).map_err(|e| e.to_string())?;
        if !in_tight_span(&x, &f, 1e-9).map_err(|e| e.to_string())? {
            return Err(format!("tripod centre of ({a}, {b}, {c}) not in the tight span"));
        }
        done += 1;
    }
    within("200 tripods", start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("200 triangles in {:?}", start.elapsed()))
}

fn two_point_magnitude() -> Verdict {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let t = r.gen_range(0.01..10.0);
        let d = r.gen_range(0.01..10.0);
        let x = GenMetricSpace::from_f64(&["x", "y"], &[&[0.0, d], &[d, 0.0]], emt_core::SpaceKind::ClassicalMetric)
            .map_err(|e| e.to_string())?;
        let m = magnitude(&similarity_matrix(&x, t).map_err(|e| e.to_string())?)
            .defined()
            .ok_or(format!("two points at t={t}, d={d} reported singular"))?;
        let oracle = 2.0 / (1.0 + (-t * d).exp());
        worst = worst.max((m - oracle).abs());
    }
    if worst > 1e-9 {
        return Err(format!("two-point error {worst:e}"));
    }
    for n in 1..=12 {
        let z = SimilarityMatrix::from_poset(n, |i, j| i == j).map_err(|e| e.to_string())?;
        if category_magnitude(&z).map_err(|e| e.to_string())? != Outcome::Defined(rational(n as i64)) {
            return Err(format!("discrete {n}-point magnitude is not exactly {n}"));
        }
    }
    Ok(format!("max two-point error {worst:e}; discrete 1..12 exact"))
}

fn bipartite_singularity() -> Verdict {
    let x = complete_bipartite_space(3, 2).map_err(|e| e.to_string())?;
    let ln2 = 2f64.ln();
    let grid: Vec<f64> = (0..1000).map(|i| ln2 + (i as f64 - 500.0) * 1e-3).collect();
    let start = Instant::now();
    let sweep = magnitude_function(&x, &grid).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let near: Vec<_> = sweep.iter().filter(|s| (s.t - ln2).abs() <= 1e-6).collect();
    let flagged = near.iter().any(|s| s.value.is_singular());
    let checks = magnitude_function(&x, &[0.5, 1.0]).map_err(|e| e.to_string())?;
    let conditioned = checks.iter().all(|s| !s.value.is_singular() && s.condition < 1e6);
    let worst_near = near.iter().map(|s| s.condition).fold(0.0, f64::max);
    within("1000-point sweep", elapsed, Duration::from_secs(1))?;
    if !conditioned {
        return Err(format!("not well conditioned at t = 0.5, 1.0: {checks:?}"));
    }
    if !flagged {
        let all_singular: Vec<f64> = sweep.iter().filter(|s| s.value.is_singular()).map(|s| s.t).collect();
        return Err(format!(
            "no SINGULAR sample within 1e-6 of ln 2 (condition there {worst_near:.3}); singular samples at {all_singular:?}"
        ));
    }
    Ok(format!("singular near ln 2; sweep {elapsed:?}"))
}

fn large_scale_limit() -> Verdict {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let n = r.gen_range(1..=6);
        let x = random_metric(&mut r, n, 0.1);
        let m = x.min_distance().finite().unwrap_or(1.0);
        let t_max = 50.0 / m;
        let grid = emt_core::magnitude::log_grid(0.01 / m, t_max, 200).map_err(|e| e.to_string())?;
        let sweep = magnitude_function(&x, &grid).map_err(|e| e.to_string())?;
        let last = sweep.last().and_then(|s| s.value.clone().defined()).ok_or(format!("case {case}: singular at t_max"))?;
        worst = worst.max((last - n as f64).abs());
        if (last - n as f64).abs() > 1e-6 {
            return Err(format!("case {case}: |tX| = {last} at t = {t_max}, expected {n}"));
        }
        let tail: Vec<f64> = sweep[sweep.len() - 10..]
            .iter()
            .map(|s| s.value.clone().defined().ok_or(format!("case {case}: singular in the tail")))
            .collect::<Result<_, _>>()?;
        if tail.windows(2).any(|w| w[1] < w[0]) {
            return Err(format!("case {case}: tail decreases: {tail:?}"));
        }
    }
    Ok(format!("50 spaces, max |n - |tX|| {worst:e}"))
}

// μ(x, x) = 1 and μ(x, y) = −Σ_{x ≤ z < y} μ(x, z); the magnitude of a
// poset is the sum of μ over comparable pairs.
fn mobius_magnitude(n: usize, leq: &[Vec<bool>]) -> i64 {
    let mut total = 0;
    for x in 0..n {
        let mut mu = vec![0i64; n];
        // the relation is built on a linear extension of 0..n
        for y in x..n {
            if !leq[x][y] {
                continue;
            }
            mu[y] = if y == x { 1 } else { -(x..y).filter(|&z| leq[x][z] && leq[z][y]).map(|z| mu[z]).sum::<i64>() };
            total += mu[y];
        }
    }
    total
}

fn category_magnitudes() -> Verdict {
    for order in 1..=12u64 {
        let z = SimilarityMatrix::from_counts(vec!["*".into()], &[vec![order]]).map_err(|e| e.to_string())?;
        if category_magnitude(&z).map_err(|e| e.to_string())? != Outcome::Defined(rational_from_ratio(1, order as i64)) {
            return Err(format!("group of order {order} is not 1/{order}"));
        }
    }
    let chain = SimilarityMatrix::from_poset(2, |i, j| i <= j).map_err(|e| e.to_string())?;
    if category_magnitude(&chain).map_err(|e| e.to_string())? != Outcome::Defined(rational(1)) {
        return Err("2-chain magnitude is not 1".into());
    }
    let mut r = rng(5);
    for case in 0..20 {
        let n = r.gen_range(1..=7);
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
            for j in i + 1..n {
                leq[i][j] = r.gen_bool(0.35);
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        let z = SimilarityMatrix::from_poset(n, |i, j| leq[i][j]).map_err(|e| e.to_string())?;
        let got = category_magnitude(&z).map_err(|e| e.to_string())?;
        let oracle = mobius_magnitude(n, &leq);
        if got != Outcome::Defined(rational(oracle)) {
            return Err(format!("poset case {case}: {got:?} vs Möbius {oracle}"));
        }
    }
    Ok("groups 1..12, 2-chain and 20 posets exact".into())
}

fn quartic_anchor() -> Verdict {
    let grid = Grid::line(-1.8, 1.8, 20_001).map_err(|e| e.to_string())?;
    let f = SampledFunction::from_fn(grid.clone(), |p| (p[0] * p[0] - 1.0).powi(2)).map_err(|e| e.to_string())?;
    let dual = default_dual_grid(&f).map_err(|e| e.to_string())?;
    let tol = grid_tolerance(&grid, &dual);
    if tol >= 5e-3 {
        return Err(format!("grid tolerance {tol} is not below 5e-3"));
    }
    let (v, _, _) = conjugate_at(&f, &[-45.0 / 16.0]).map_err(|e| e.to_string())?;
    let err = (v.to_f64() - 819.0 / 256.0).abs();
    if err > tol {
        return Err(format!("f^(-45/16) = {v}, error {err:e} > {tol:e}"));
    }
    let hull = convex_hull(&f, &dual).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (i, h) in hull.values().iter().enumerate() {
        if grid.point(i)[0].abs() <= 1.0 {
            worst = worst.max(h.to_f64().abs());
        }
    }
    if worst > tol {
        return Err(format!("double transform reaches {worst:e} on [-1, 1], tolerance {tol:e}"));
    }
    Ok(format!("error {err:e}, hull max {worst:e} on [-1, 1], tolerance {tol:e}"))
}

fn kinked_pair() -> Verdict {
    // spacing 1/16 puts the kinks at 0 and 2 on the grid, exactly
    let grid = Grid::line(-10.0, 10.0, 321).map_err(|e| e.to_string())?;
    let f = SampledFunction::from_fn(grid.clone(), |p| p[0].abs()).map_err(|e| e.to_string())?;
    let g = SampledFunction::from_fn(grid, |p| (p[0] - 2.0).abs() - 1.0).map_err(|e| e.to_string())?;
    let fg = lf_distance(&f, &g).map_err(|e| e.to_string())?;
    let gf = lf_distance(&g, &f).map_err(|e| e.to_string())?;
    if fg != ExtReal::Finite(1.0) || gf != ExtReal::Finite(3.0) {
        return Err(format!("distances {fg}, {gf}; expected 1, 3"));
    }
    let dual = DualGrid(Grid::line(-2.0, 2.0, 257).map_err(|e| e.to_string())?);
    let ab = toland_singer_check(&f, &g, &dual, 1e-9).map_err(|e| e.to_string())?;
    let ba = toland_singer_check(&g, &f, &dual, 1e-9).map_err(|e| e.to_string())?;
    if !ab.pass || !ba.pass {
        return Err(format!("Toland-Singer failed: {ab:?} / {ba:?}"));
    }
    Ok(format!("d = 1 and 3; dual sides {} and {}", ab.rhs, ba.rhs))
}

fn adjunction_suite() -> Verdict {
    let start = Instant::now();
    let mut r = rng(8);
    let tol = 1e-9;
    for case in 0..1000 {
        let n = r.gen_range(1..=6);
        let x = random_category(&mut r, n, 0.2);
        let p = hom_profunctor(&x).map_err(|e| e.to_string())?;
        let psi = Presheaf::new(&x, random_values(&mut r, n)).map_err(|e| e.to_string())?;
        let phi = Copresheaf::new(&x, random_values(&mut r, n)).map_err(|e| e.to_string())?;
        let e = |e: emt_core::Error| e.to_string();
        let pulled = pull(&p, &psi).map_err(e)?;
        let pushed = push(&p, &phi).map_err(e)?;
        if !close_enough(pull(&p, &push(&p, &pulled).map_err(e)?).map_err(e)?.values(), pulled.values(), tol) {
            return Err(format!("case {case}: pull∘push∘pull ≠ pull"));
        }
        if !close_enough(push(&p, &pull(&p, &pushed).map_err(e)?).map_err(e)?.values(), pushed.values(), tol) {
            return Err(format!("case {case}: push∘pull∘push ≠ push"));
        }
        let h = isbell_hull(&x, &psi).map_err(e)?;
        if !close_enough(isbell_hull(&x, &h).map_err(e)?.values(), h.values(), tol) {
            return Err(format!("case {case}: hull is not idempotent"));
        }
        let lhs = funcat_distance(&x, &phi.0, &pulled.0).map_err(e)?;
        let rhs = funcat_distance(&x, &psi.0, &pushed.0).map_err(e)?;
        if !lhs.approx_eq(rhs, tol) {
            return Err(format!("case {case}: hom-isomorphism {lhs} ≠ {rhs}"));
        }
    }
    within("1000 instances", start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("1000 instances in {:?}", start.elapsed()))
}

fn yoneda_isometry() -> Verdict {
    let mut r = rng(9);
    for case in 0..100 {
        let n = r.gen_range(1..=7);
        let x = random_category(&mut r, n, 0.25);
        for i in 0..n {
            for j in 0..n {
                let yi = yoneda_at(&x, i).map_err(|e| e.to_string())?;
                let yj = yoneda_at(&x, j).map_err(|e| e.to_string())?;
                let d = isbell_distance(&x, &yi, &yj).map_err(|e| e.to_string())?;
                if d != x.d(i, j) {
                    return Err(format!("case {case}: I(y{i}, y{j}) = {d}, X = {}", x.d(i, j)));
                }
            }
        }
    }
    Ok("100 spaces, every pair exact".into())
}

fn brute_hausdorff(x: &GenMetricSpace, a: &[usize], b: &[usize]) -> f64 {
    let one_way = |p: &[usize], q: &[usize]| {
        p.iter().map(|&i| q.iter().map(|&j| x.d(i, j).to_f64()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

fn hausdorff_properties() -> Verdict {
    let mut r = rng(10);
    for case in 0..20 {
        let x = random_metric(&mut r, 4, 0.1);
        let subsets = SubsetSelection::all(&x);
        let e = |e: emt_core::Error| e.to_string();
        let mut table = vec![vec![ExtReal::ZERO; subsets.len()]; subsets.len()];
        for (i, a) in subsets.iter().enumerate() {
            for (j, b) in subsets.iter().enumerate() {
                let d = directed_hausdorff(&x, a, b).map_err(e)?;
                if (d == ExtReal::ZERO) != a.is_subset_of(b) {
                    return Err(format!("case {case}: S({a:?}, {b:?}) = {d}"));
                }
                if !a.is_empty() && !b.is_empty() {
                    let sym = hausdorff(&x, a, b).map_err(e)?;
                    let oracle = brute_hausdorff(&x, a.members(), b.members());
                    if sym != ExtReal::Finite(oracle) {
                        return Err(format!("case {case}: H = {sym}, brute force {oracle}"));
                    }
                }
                table[i][j] = d;
            }
        }
        for i in 0..subsets.len() {
            for j in 0..subsets.len() {
                for k in 0..subsets.len() {
                    if !table[i][j].plus(table[j][k]).approx_ge(table[i][k], 1e-12) {
                        return Err(format!("case {case}: triangle fails on subsets {i}, {j}, {k}"));
                    }
                }
            }
        }
        if table[1][0] != PosInf {
            return Err(format!("case {case}: S(A, ∅) should be ∞"));
        }
    }
    Ok("20 spaces, all pairs and triples of subsets".into())
}

fn fenchel_moreau() -> Verdict {
    let mut r = rng(11);
    let grid = Grid::line(-4.0, 4.0, 513).map_err(|e| e.to_string())?;
    // knot slopes stay within ±8, strictly inside the dual range
    let dual = DualGrid(Grid::line(-10.0, 10.0, 1281).map_err(|e| e.to_string())?);
    let tol = grid_tolerance(&grid, &dual);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let knots: Vec<f64> = (0..=16).map(|_| f64::from(r.gen_range(-8i32..=8)) / 4.0).collect();
        let f = SampledFunction::from_fn(grid.clone(), |p| {
            let s = (p[0] + 4.0) * 2.0;
            let i = (s.floor() as usize).min(15);
            let frac = s - i as f64;
            knots[i] * (1.0 - frac) + knots[i + 1] * frac
        })
        .map_err(|e| e.to_string())?;
        let hull = convex_hull(&f, &dual).map_err(|e| e.to_string())?;
        if hull.values().iter().zip(f.values()).any(|(h, v)| h > v) {
            return Err(format!("case {case}: hull exceeds f"));
        }
        let f1 = lf_forward(&f, &dual).map_err(|e| e.to_string())?.function;
        let f3 = lf_forward(&hull, &dual).map_err(|e| e.to_string())?.function;
        for (a, b) in f1.values().iter().zip(f3.values()) {
            let gap = a.gap(*b).ok_or(format!("case {case}: infinities differ"))?;
            worst = worst.max(gap);
        }
        if worst > 2.0 * tol {
            return Err(format!("case {case}: f*** differs from f* by {worst:e} > {:e}", 2.0 * tol));
        }
    }
    Ok(format!("100 functions, max |f*** - f*| {worst:e}, bound {:e}", 2.0 * tol))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("tripod legs and tight-span centre", tripod),
        ("two-point and discrete magnitude", two_point_magnitude),
        ("bipartite singularity at ln 2", bipartite_singularity),
        ("large-scale limit and increasing tail", large_scale_limit),
        ("category magnitudes", category_magnitudes),
        ("quartic conjugate anchor", quartic_anchor),
        ("kinked pair and Toland-Singer", kinked_pair),
        ("adjunction suite", adjunction_suite),
        ("Yoneda isometry", yoneda_isometry),
        ("Hausdorff properties", hausdorff_properties),
        ("Fenchel-Moreau suite", fenchel_moreau),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
