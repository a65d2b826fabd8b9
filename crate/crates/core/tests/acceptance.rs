//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use conifold_kit::fibration::{
    amoeba_sample, factorized_coefficients, max_distance_to_lines, vanishing_cycle_counts, walls_deformed_g_degenerate,
    AmoebaGrid,
};
use conifold_kit::gw::gfunc::{g_function_g, mirror_map_g};
use conifold_kit::gw::verify_open_mirror;
use conifold_kit::lattice::{
    deformation_dimensions, enumerate_by_flips, enumerate_maximal_triangulations, make_rectangle, make_trapezoid,
    minkowski_sum, unit_segment_summands, Family, LatticePoint,
};
use conifold_kit::mirror::{
    chamber_product_invariance, mirror_deformed_g, mirror_deformed_o, mirror_resolved_g, transition_consistency_check,
    KahlerParams,
};
use conifold_kit::poly::Poly;
use conifold_kit::props::series_properties;
use conifold_kit::series::{rat, TruncatedSeries};
use conifold_kit::toric::{intersection_rules_check, GGeometry};
use num_complex::Complex64;

const PROPERTY_SEED: u64 = 0x00C0_41F0_1D5E_ED00;
const PROPERTY_CASES: usize = 500;
const AMOEBA_RESIDUAL_TOL: f64 = 1e-9;
const AMOEBA_DISTANCE_TOL: f64 = 1e-6;
const AMOEBA_MIN_POINTS: usize = 10_000;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn c1_triangulations() -> Outcome {
    let mut checked = 0;
    for k in 1..=8i64 {
        for l in 1..=k.min(9 - k) {
            let t = make_trapezoid(k, l).unwrap();
            let found = enumerate_maximal_triangulations(&t, 16).unwrap();
            let flips = enumerate_by_flips(&t, 16).unwrap();
            let want = binomial((k + l) as u64, k as u64) as usize;
            if found.len() != want || found != flips {
                return outcome(false, format!("(k,l)=({k},{l}): enumerated {} flips {} expected {want}", found.len(), flips.len()));
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} trapezoids, counts equal C(k+l,k), flip-graph search agrees"))
}

fn c2_intersections() -> Outcome {
    let mut n = 0;
    for k in 1..=5 {
        for l in 1..=k {
            let r = intersection_rules_check(k, l).unwrap();
            if !r.ok {
                return outcome(false, format!("(k,l)=({k},{l}): {:?}", r.failures));
            }
            n += 1;
        }
    }
    outcome(true, format!("{n} resolutions, all rules exact"))
}

fn c3_open_mirror() -> Outcome {
    let mut divisors = 0;
    for (k, l) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
        let g = GGeometry::new(k, l).unwrap();
        for p in 0..g.n_height_one() {
            let r = verify_open_mirror(k, l, p, 5).unwrap();
            if !r.ok {
                return outcome(false, format!("(k,l,p)=({k},{l},{p}): {:?}", &r.mismatches[..r.mismatches.len().min(3)]));
            }
            divisors += 1;
        }
    }
    outcome(true, format!("{divisors} divisors at N=5, flat and complex pipelines exact"))
}

fn c4_a1() -> Outcome {
    let g = GGeometry::new(2, 1).unwrap();
    let vars = g.var_names();
    let c1 = g.c_index(1);
    let mono = |d: u32, n: i64| {
        let mut e = vec![0; vars.len()];
        e[c1] = d;
        TruncatedSeries::monomial(&vars, 3, e, rat(n, 1))
    };
    let mm = mirror_map_g(&g, 3).unwrap();
    let want_map = mono(1, 1).add(&mono(2, -2)).unwrap().add(&mono(3, 3)).unwrap();
    let exp_g = g_function_g(&g, 1, 3).unwrap().exp().unwrap().substitute(&mm.to_kahler()).unwrap();
    let want_exp = mono(0, 1).add(&mono(1, 1)).unwrap();
    let ok = mm.inverse[c1] == want_map && exp_g == want_exp;
    outcome(ok, format!("q_check(q) = {}, exp g_1 = {}", mm.inverse[c1], exp_g))
}

fn c5_chambers() -> Outcome {
    for k in 1..=4 {
        for l in 1..=k {
            let r = chamber_product_invariance(k, l).unwrap();
            if !r.ok {
                return outcome(false, format!("(k,l)=({k},{l}): {:?}", r.failures));
            }
        }
    }
    outcome(true, "k,l <= 4, products identical in all four chambers")
}

fn c6_transition() -> Outcome {
    for k in 1..=5usize {
        for l in 1..=k {
            let res = mirror_resolved_g(k, l, &KahlerParams::all_one(k, l)).unwrap();
            let def = mirror_deformed_g(k, l).unwrap();
            for (i, e) in [k as u32, l as u32].into_iter().enumerate() {
                let a = res.relations[i].polynomial().unwrap().prune_vars();
                let b = def.relations[i].polynomial().unwrap().prune_vars();
                let z = vec!["Z".to_string()];
                let want = Poly::one_plus(&z, vec![1], rat(1, 1)).pow(e);
                if res.relations[i].lhs != def.relations[i].lhs || a != want || b != want {
                    return outcome(false, format!("(k,l)=({k},{l}) relation {i}: {a} vs {b}"));
                }
            }
            if !transition_consistency_check(k, l).unwrap().ok {
                return outcome(false, format!("(k,l)=({k},{l}): transition report failed"));
            }
        }
    }
    outcome(true, "U1V1 = (1+Z)^k, U2V2 = (1+Z)^l at unit parameters for k,l <= 5")
}

fn c7_conifold() -> Outcome {
    let rep = transition_consistency_check(1, 1).unwrap();
    let Some(c) = rep.conifold else { return outcome(false, "no conifold report") };
    // direct: U2V2 - q0 U1V1 = 1 - q0 from the two resolved relations
    let res = mirror_resolved_g(1, 1, &KahlerParams::symbolic()).unwrap();
    let r1 = res.relations[0].polynomial().unwrap();
    let r2 = res.relations[1].polynomial().unwrap();
    let vars = r2.vars().to_vec();
    let q0 = Poly::var(&vars, "q0").unwrap();
    let r1 = r1.with_vars(&vars).unwrap();
    let lhs = r2.sub(&q0.mul(&r1).unwrap()).unwrap();
    let rhs = Poly::one(&vars).sub(&q0).unwrap();
    let direct_g = lhs == rhs;
    // direct: UV = (1+X)(1+Y) with X = z-1, Y = w-1 is UV = zw
    let d = mirror_deformed_o(1, 1).unwrap().relations[0].polynomial().unwrap();
    let t: Vec<String> = ["z", "w"].iter().map(|s| s.to_string()).collect();
    let zm1 = Poly::var(&t, "z").unwrap().sub(&Poly::one(&t)).unwrap();
    let wm1 = Poly::var(&t, "w").unwrap().sub(&Poly::one(&t)).unwrap();
    let images = BTreeMap::from([("X".to_string(), zm1), ("Y".to_string(), wm1)]);
    let zw = Poly::var(&t, "z").unwrap().mul(&Poly::var(&t, "w").unwrap()).unwrap();
    let direct_o = d.substitute(&t, &images).unwrap() == zw;
    let ok = c.ok() && direct_g && direct_o;
    outcome(ok, format!("{c:?}, direct resolved-G {direct_g}, direct deformed-O {direct_o}"))
}

fn c8_bookkeeping() -> Outcome {
    for k in 1..=8u64 {
        for l in 1..=k {
            let grid = (k + 1) * (l + 1) - 3;
            let edge = k + l - 1;
            let g = deformation_dimensions(Family::Generalized, k as i64, l as i64).unwrap();
            let o = deformation_dimensions(Family::Orbifolded, k as i64, l as i64).unwrap();
            let cg = vanishing_cycle_counts(Family::Generalized, k as usize, l as usize).unwrap();
            let co = vanishing_cycle_counts(Family::Orbifolded, k as usize, l as usize).unwrap();
            let ok = (g.complex_dim, g.kahler_dim) == (grid, edge)
                && (o.complex_dim, o.kahler_dim) == (edge, grid)
                && (cg.s1xs2, cg.s3 as u64) == (0, grid)
                && (co.s1xs2 as u64, co.s3) == (k + l - 2, 1)
                && cg.s3 as u64 == g.complex_dim;
            if !ok {
                return outcome(false, format!("(k,l)=({k},{l}): {g:?} {o:?} {cg:?} {co:?}"));
            }
        }
    }
    outcome(true, "k,l <= 8, S3 count equals complex dimension for G")
}

fn c9_minkowski() -> Outcome {
    for k in 1..=6usize {
        for l in 1..=6usize {
            let sum = minkowski_sum(&unit_segment_summands(k, l)).unwrap();
            let (ki, li) = (k as i64, l as i64);
            let corners = [(0, 0), (ki, 0), (ki, li), (0, li)].map(|(x, y)| LatticePoint::new(x, y));
            let rect_ok = k < l || sum == make_rectangle(ki, li).unwrap();
            if sum.vertices() != corners || !rect_ok {
                return outcome(false, format!("(k,l)=({k},{l}): {sum}"));
            }
        }
    }
    outcome(true, "k,l <= 6, sum of unit segments is [0,k] x [0,l]")
}

fn c10_amoeba() -> Outcome {
    let f: Vec<Complex64> = [(0.3, 0.4), (-1.7, 0.2), (0.0, 4.5)].iter().map(|&(a, b)| Complex64::new(a, b)).collect();
    let g: Vec<Complex64> = [(2.2, -0.1), (0.1, 0.6)].iter().map(|&(a, b)| Complex64::new(a, b)).collect();
    let walls = walls_deformed_g_degenerate(&f, &g).unwrap();
    let grid = AmoebaGrid { radii: 64, angles: 256, log_radius: 3.0, both_directions: true, tol: AMOEBA_RESIDUAL_TOL };
    let s = amoeba_sample(&factorized_coefficients(&f, &g), &grid).unwrap();
    let dist = max_distance_to_lines(&s.points, &walls);
    let ok = s.points.len() >= AMOEBA_MIN_POINTS
        && s.meta.max_residual < AMOEBA_RESIDUAL_TOL
        && dist < AMOEBA_DISTANCE_TOL
        && walls.chamber_count() == 12;
    outcome(
        ok,
        format!(
            "{} points, max residual {:.2e}, max distance {:.2e}, {} rejected roots, {} chambers",
            s.points.len(),
            s.meta.max_residual,
            dist,
            s.meta.rejected_roots,
            walls.chamber_count()
        ),
    )
}

fn c11_series() -> Outcome {
    let r = series_properties(PROPERTY_SEED, PROPERTY_CASES, 6);
    outcome(r.ok, format!("{} cases, {} checks, {} failures, seed {:#x}", r.cases, r.checks, r.failures.len(), r.seed))
}

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "triangulation counts", Some(Duration::from_secs(60)), c1_triangulations),
        (2, "intersection rules", Some(Duration::from_secs(5)), c2_intersections),
        (3, "open mirror identity", Some(Duration::from_secs(120)), c3_open_mirror),
        (4, "A1 flat coordinates", None, c4_a1),
        (5, "chamber-product invariance", None, c5_chambers),
        (6, "transition consistency", None, c6_transition),
        (7, "conifold self-duality", None, c7_conifold),
        (8, "dimension and cycle bookkeeping", None, c8_bookkeeping),
        (9, "Minkowski identity", None, c9_minkowski),
        (10, "amoeba degeneration", Some(Duration::from_secs(30)), c10_amoeba),
        (11, "series engine properties", None, c11_series),
    ];
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        let in_time = budget.is_none_or(|b| el < b);
        let ok = o.ok && in_time;
        failed += usize::from(!ok);
        let budget_txt = budget.map_or(String::new(), |b| format!(" (budget {} s)", b.as_secs()));
        let late = if in_time { "" } else { " OVER BUDGET" };
        println!(
            "{} criterion {n:>2} {name}: {} [{:.2} s{budget_txt}{late}]",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            el.as_secs_f64()
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
