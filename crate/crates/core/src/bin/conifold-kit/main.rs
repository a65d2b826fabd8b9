use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use conifold_kit::fibration::{
    amoeba_sample, curve_genus_report, discriminant_deformed_o, discriminant_resolved_g, factorized_coefficients,
    max_distance_to_lines, vanishing_cycle_counts, walls_deformed_g_degenerate, walls_deformed_o, walls_resolved_g,
    AmoebaGrid,
};
use conifold_kit::gw::admissible::enumerate_admissible;
use conifold_kit::gw::gfunc::{g_function_g, g_function_o, mirror_map_g, mirror_map_o, window_of, Window};
use conifold_kit::gw::verify::verify_open_mirror_with;
use conifold_kit::lattice::{
    check_kl, deformation_dimensions, dual_cone_generators, enumerate_maximal_triangulations, make_polygon,
    make_rectangle, make_trapezoid, minkowski_sum, triangulation_count_formula, unit_segment_summands, Family,
    LatticePolygon, DEFAULT_ENUMERATION_GUARD,
};
use conifold_kit::mirror::{
    chamber_coordinates, chamber_product_invariance, mirror_deformed_g, mirror_deformed_o, mirror_resolved_g,
    mirror_resolved_o, transition_consistency_check, KahlerParams, MirrorFamily,
};
use conifold_kit::gw::ChamberLabel;
use conifold_kit::toric::{curve_basis_o, intersection_number, intersection_rules_check, GGeometry, OGeometry};
use conifold_kit::verify::{corrupted_g, default_fault_divisor, verify_all, Fault, VerifyOptions};

const THREADS_ENV: &str = "CONIFOLD_KIT_THREADS";

#[derive(Parser)]
#[command(name = "conifold-kit", version, about = "Toric, series and mirror computations for generalized and orbifolded conifolds")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Print per-stage timings to stderr.
    #[arg(long, global = true)]
    profile: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Polygons, triangulations and deformation counts.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Fans, curve classes and intersection numbers.
    #[command(subcommand)]
    Toric(ToricCmd),
    /// g-functions, mirror maps and open invariants.
    #[command(subcommand)]
    Gw(GwCmd),
    /// Mirror equations and their consistency checks.
    #[command(subcommand)]
    Mirror(MirrorCmd),
    /// Walls, discriminant loci, amoebas and vanishing cycles.
    #[command(subcommand)]
    Fib(FibCmd),
    /// Runs the whole verification suite; exit 0 iff every check passes.
    VerifyAll(VerifyAllArgs),
}

#[derive(Args, Clone, Copy)]
struct Kl {
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    k: i64,
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    l: i64,
}

#[derive(Args, Clone, Copy)]
struct FamilyKl {
    #[arg(long, default_value = "G")]
    family: Family,
    #[command(flatten)]
    kl: Kl,
}

#[derive(Args, Clone, Copy)]
struct Order {
    /// Truncation order (total degree).
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
}

#[derive(Subcommand)]
enum LatticeCmd {
    Trapezoid(Kl),
    Rectangle(Kl),
    Triangulations {
        #[command(flatten)]
        fk: FamilyKl,
        /// Largest number of lattice points accepted for enumeration.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_GUARD)]
        guard: usize,
    },
    Minkowski(Kl),
    Dims(FamilyKl),
    DualCone(FamilyKl),
}

#[derive(Subcommand)]
enum ToricCmd {
    Fan(FamilyKl),
    Curves(FamilyKl),
    Intersections(FamilyKl),
}

#[derive(Subcommand)]
enum GwCmd {
    GFunction {
        #[command(flatten)]
        fk: FamilyKl,
        /// Divisor index for family G.
        #[arg(long)]
        p: Option<usize>,
        /// Lattice point `i,j` for family O.
        #[arg(long, value_parser = parse_pair)]
        point: Option<(usize, usize)>,
        #[command(flatten)]
        order: Order,
    },
    MirrorMap {
        #[command(flatten)]
        fk: FamilyKl,
        #[command(flatten)]
        order: Order,
    },
    Admissible {
        #[command(flatten)]
        kl: Kl,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        order: Order,
    },
    Verify {
        #[command(flatten)]
        kl: Kl,
        /// Only this divisor; all divisors by default.
        #[arg(long)]
        p: Option<usize>,
        #[command(flatten)]
        order: Order,
        /// Corrupt g_p (default divisor when no value is given).
        #[arg(long, num_args = 0..=1)]
        inject_fault: Option<Option<usize>>,
    },
}

#[derive(Args)]
struct MirrorArgs {
    #[command(flatten)]
    kl: Kl,
    /// JSON object of Kähler parameter values, e.g. {"q1": "1/2"}.
    #[arg(long)]
    params: Option<PathBuf>,
    #[command(flatten)]
    order: Order,
    /// Multiply out factored right-hand sides.
    #[arg(long)]
    expanded: bool,
}

#[derive(Subcommand)]
enum MirrorCmd {
    #[command(name = "resolved-G", alias = "resolved-g")]
    ResolvedG(MirrorArgs),
    #[command(name = "deformed-G", alias = "deformed-g")]
    DeformedG(MirrorArgs),
    #[command(name = "resolved-O", alias = "resolved-o")]
    ResolvedO(MirrorArgs),
    #[command(name = "deformed-O", alias = "deformed-o")]
    DeformedO(MirrorArgs),
    Chambers(MirrorArgs),
    TransitionCheck(Kl),
}

#[derive(Args)]
struct FibArgs {
    #[command(flatten)]
    fk: FamilyKl,
    /// JSON with `f`, `g` (complex roots) or `s`, `t` (real heights).
    #[arg(long)]
    roots: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FibCmd {
    Walls(FibArgs),
    Discriminant(FibArgs),
    Amoeba {
        /// JSON with `table` ((k+1) x (l+1) coefficients) or `f`, `g` roots.
        #[arg(long)]
        coeffs: PathBuf,
        /// Radii and angles per circle family.
        #[arg(long, default_value = "64,256", value_parser = parse_pair)]
        grid: (usize, usize),
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 3.0)]
        log_radius: f64,
        /// Also solve for z on circles in w.
        #[arg(long)]
        both_directions: bool,
        /// Largest admitted distance to the predicted lines when roots are given.
        #[arg(long, default_value_t = 1e-6)]
        line_tol: f64,
    },
    Cycles(FamilyKl),
}

#[derive(Args)]
struct VerifyAllArgs {
    #[command(flatten)]
    kl: Kl,
    #[command(flatten)]
    order: Order,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_GUARD)]
    guard: usize,
    /// Seed of the randomized series checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    property_cases: usize,
    #[arg(long, num_args = 0..=1)]
    inject_fault: Option<Option<usize>>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated integers, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

enum Fail {
    Usage(String),
    Io(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Usage(_) => 2,
            Fail::Io(_) => 3,
        }
    }
}

type Res<T> = Result<T, Fail>;

fn usage<E: std::fmt::Display>(e: E) -> Fail {
    Fail::Usage(e.to_string())
}

enum Output {
    Json(Value),
    Text(String),
}

struct Run {
    out: Output,
    /// `Some(reason)` when a verification did not pass.
    failed: Option<String>,
}

impl Run {
    fn json(v: Value) -> Res<Run> {
        Ok(Run { out: Output::Json(v), failed: None })
    }

    fn checked(v: Value, ok: bool, what: &str) -> Res<Run> {
        Ok(Run { out: Output::Json(v), failed: (!ok).then(|| format!("{what} failed")) })
    }
}

struct Profile {
    on: bool,
    stages: Vec<(String, Duration)>,
}

impl Profile {
    fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let r = f();
        self.stages.push((name.to_string(), t.elapsed()));
        r
    }

    fn report(&self) {
        if self.on {
            for (n, d) in &self.stages {
                eprintln!("[profile] {n}: {:.3} ms", d.as_secs_f64() * 1e3);
            }
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Res<Value> {
    serde_json::to_value(v).map_err(|e| Fail::Io(e.to_string()))
}

fn read_file(p: &Path) -> Res<String> {
    fs::read_to_string(p).map_err(|e| Fail::Io(format!("{}: {e}", p.display())))
}

fn kl(k: Kl) -> Res<(usize, usize)> {
    check_kl(k.k, k.l).map_err(usage)
}

fn polygon_json(p: &LatticePolygon) -> Value {
    json!({
        "vertices": p.vertices(),
        "lattice_points": p.lattice_points(),
        "boundary_points": p.boundary_points().len(),
        "interior_points": p.interior_lattice_point_count(),
        "twice_area": p.twice_area(),
    })
}

fn lattice(cmd: LatticeCmd, prof: &mut Profile) -> Res<Run> {
    match cmd {
        LatticeCmd::Trapezoid(k) => Run::json(polygon_json(&make_trapezoid(k.k, k.l).map_err(usage)?)),
        LatticeCmd::Rectangle(k) => Run::json(polygon_json(&make_rectangle(k.k, k.l).map_err(usage)?)),
        LatticeCmd::Triangulations { fk, guard } => {
            let poly = make_polygon(fk.family, fk.kl.k, fk.kl.l).map_err(usage)?;
            let ts = prof.stage("enumerate", || enumerate_maximal_triangulations(&poly, guard)).map_err(usage)?;
            let mut v = json!({ "family": fk.family, "k": fk.kl.k, "l": fk.kl.l, "count": ts.len(), "triangulations": ts });
            if fk.family == Family::Generalized {
                v["formula"] = json!(triangulation_count_formula(fk.kl.k, fk.kl.l).map_err(usage)?.to_string());
            }
            Run::json(v)
        }
        LatticeCmd::Minkowski(k) => {
            let (ku, lu) = kl(k)?;
            let sum = minkowski_sum(&unit_segment_summands(ku, lu)).map_err(usage)?;
            let rect = make_rectangle(k.k, k.l).map_err(usage)?;
            let ok = sum == rect;
            Run::checked(json!({ "k": ku, "l": lu, "sum": sum.vertices(), "rectangle": rect.vertices(), "equal": ok }), ok, "Minkowski identity")
        }
        LatticeCmd::Dims(fk) => {
            let d = deformation_dimensions(fk.family, fk.kl.k, fk.kl.l).map_err(usage)?;
            Run::json(json!({ "family": fk.family, "k": fk.kl.k, "l": fk.kl.l, "complex_dim": d.complex_dim, "kahler_dim": d.kahler_dim }))
        }
        LatticeCmd::DualCone(fk) => {
            let g = dual_cone_generators(fk.family, fk.kl.k, fk.kl.l).map_err(usage)?;
            Run::json(json!({ "family": fk.family, "k": fk.kl.k, "l": fk.kl.l, "generators": g }))
        }
    }
}

fn toric(cmd: ToricCmd) -> Res<Run> {
    match cmd {
        ToricCmd::Fan(fk) => {
            kl(fk.kl)?;
            let fan = match fk.family {
                Family::Generalized => GGeometry::new(fk.kl.k, fk.kl.l).map_err(usage)?.fan,
                Family::Orbifolded => OGeometry::new(fk.kl.k, fk.kl.l).map_err(usage)?.fan,
            };
            Run::json(json!({ "family": fk.family, "k": fk.kl.k, "l": fk.kl.l, "unimodular": fan.is_unimodular(), "fan": to_value(&fan)? }))
        }
        ToricCmd::Curves(fk) => {
            kl(fk.kl)?;
            let curves: Vec<Value> = match fk.family {
                Family::Generalized => GGeometry::new(fk.kl.k, fk.kl.l)
                    .map_err(usage)?
                    .basis
                    .iter()
                    .map(|c| json!({ "name": c.name, "class": c.class }))
                    .collect(),
                Family::Orbifolded => curve_basis_o(fk.kl.k, fk.kl.l)
                    .map_err(usage)?
                    .into_iter()
                    .map(|((i, j), c)| json!({ "name": format!("C{i}{j}"), "point": [i, j], "class": c }))
                    .collect(),
            };
            Run::json(json!({ "family": fk.family, "k": fk.kl.k, "l": fk.kl.l, "curves": curves }))
        }
        ToricCmd::Intersections(fk) => {
            kl(fk.kl)?;
            let (fan, named): (_, Vec<(String, _)>) = match fk.family {
                Family::Generalized => {
                    let g = GGeometry::new(fk.kl.k, fk.kl.l).map_err(usage)?;
                    let n = g.basis.iter().map(|c| (c.name.clone(), c.class.clone())).collect();
                    (g.fan, n)
                }
                Family::Orbifolded => {
                    let g = OGeometry::new(fk.kl.k, fk.kl.l).map_err(usage)?;
                    let walls = g.wall_classes().map_err(usage)?;
                    let n = walls.into_iter().enumerate().map(|(i, c)| (format!("wall{i}"), c)).collect();
                    (g.fan, n)
                }
            };
            let table: Vec<Value> = named
                .iter()
                .map(|(name, c)| {
                    let row: serde_json::Map<String, Value> = (0..fan.rays().len())
                        .filter(|&r| intersection_number(c, r) != 0)
                        .map(|r| (fan.label(r).to_string(), json!(intersection_number(c, r))))
                        .collect();
                    json!({ "curve": name, "intersections": row })
                })
                .collect();
            let mut v = json!({ "family": fk.family, "k": fk.kl.k, "l": fk.kl.l, "table": table });
            if fk.family == Family::Generalized {
                let r = intersection_rules_check(fk.kl.k, fk.kl.l).map_err(usage)?;
                v["rules_ok"] = json!(r.ok);
                v["failures"] = json!(r.failures);
                return Run::checked(v, r.ok, "intersection rules");
            }
            Run::json(v)
        }
    }
}

fn fault_p(f: Option<Option<usize>>, k: usize, l: usize) -> Option<usize> {
    f.map(|p| p.unwrap_or_else(|| default_fault_divisor(k, l)))
}

fn gw(cmd: GwCmd, prof: &mut Profile) -> Res<Run> {
    match cmd {
        GwCmd::GFunction { fk, p, point, order } => {
            kl(fk.kl)?;
            let s = match (fk.family, p, point) {
                (Family::Generalized, Some(p), None) => {
                    let g = GGeometry::new(fk.kl.k, fk.kl.l).map_err(usage)?;
                    prof.stage("g-function", || g_function_g(&g, p, order.order)).map_err(usage)?
                }
                (Family::Orbifolded, None, Some((i, j))) => {
                    prof.stage("g-function", || g_function_o(fk.kl.k, fk.kl.l, i, j, order.order)).map_err(usage)?
                }
                (Family::Generalized, _, _) => return Err(usage("family G takes --p and no --point")),
                (Family::Orbifolded, _, _) => return Err(usage("family O takes --point i,j and no --p")),
            };
            Run::json(json!({ "display": s.to_string(), "series": to_value(&s)? }))
        }
        GwCmd::MirrorMap { fk, order } => {
            kl(fk.kl)?;
            let mm = prof
                .stage("mirror map", || match fk.family {
                    Family::Generalized => GGeometry::new(fk.kl.k, fk.kl.l)
                        .map_err(|e| e.to_string())
                        .and_then(|g| mirror_map_g(&g, order.order).map_err(|e| e.to_string())),
                    Family::Orbifolded => mirror_map_o(fk.kl.k, fk.kl.l, order.order).map_err(|e| e.to_string()),
                })
                .map_err(usage)?;
            Run::json(to_value(&mm)?)
        }
        GwCmd::Admissible { kl: k, p, order } => {
            kl(k)?;
            let g = GGeometry::new(k.k, k.l).map_err(usage)?;
            let (m, center) = match window_of(&g, p).map_err(usage)? {
                Window::Corner => (0, None),
                Window::C => (g.k, Some(p)),
                Window::E => (g.l, Some(p - g.k - 1)),
            };
            let seqs = match center {
                Some(c) => enumerate_admissible(m, c, order.order).map_err(usage)?,
                None => Vec::new(),
            };
            let window = to_value(&window_of(&g, p).map_err(usage)?)?;
            Run::json(json!({ "k": g.k, "l": g.l, "p": p, "window": window, "center": center, "order": order.order, "count": seqs.len(), "sequences": seqs }))
        }
        GwCmd::Verify { kl: k, p, order, inject_fault } => {
            let (ku, lu) = kl(k)?;
            let g = GGeometry::new(k.k, k.l).map_err(usage)?;
            let fault = fault_p(inject_fault, ku, lu);
            let ps: Vec<usize> = match p {
                Some(p) => vec![p],
                None => (0..g.n_height_one()).collect(),
            };
            let mut reports = Vec::new();
            let mut mismatches = Vec::new();
            for p in ps {
                let gp = if fault == Some(p) {
                    corrupted_g(&g, p, order.order).map_err(usage)?
                } else {
                    g_function_g(&g, p, order.order).map_err(usage)?
                };
                let r = prof.stage(&format!("verify p={p}"), || verify_open_mirror_with(&g, p, order.order, &gp)).map_err(usage)?;
                mismatches.extend(r.mismatches.iter().map(|m| json!({ "p": p, "exponent": m.exponent, "lhs": m.lhs, "rhs": m.rhs, "coords": m.coords })));
                reports.push(r);
            }
            let ok = reports.iter().all(|r| r.ok);
            Run::checked(json!({ "ok": ok, "order": order.order, "k": ku, "l": lu, "mismatches": mismatches, "divisors": to_value(&reports)? }), ok, "open mirror verification")
        }
    }
}

fn load_params(path: &Option<PathBuf>, k: usize, l: usize) -> Res<KahlerParams> {
    match path {
        None => Ok(KahlerParams::symbolic()),
        Some(p) => KahlerParams::from_json(k, l, &read_file(p)?).map_err(usage),
    }
}

fn family_json(f: MirrorFamily, expanded: bool) -> Res<Run> {
    Run::json(to_value(&if expanded { f.expanded() } else { f })?)
}

fn mirror(cmd: MirrorCmd, prof: &mut Profile) -> Res<Run> {
    match cmd {
        MirrorCmd::ResolvedG(a) => {
            let (k, l) = kl(a.kl)?;
            let params = load_params(&a.params, k, l)?;
            family_json(mirror_resolved_g(k, l, &params).map_err(usage)?, a.expanded)
        }
        MirrorCmd::DeformedG(a) => {
            let (k, l) = kl(a.kl)?;
            family_json(mirror_deformed_g(k, l).map_err(usage)?, a.expanded)
        }
        MirrorCmd::ResolvedO(a) => {
            let (k, l) = kl(a.kl)?;
            let f = prof.stage("resolved-O", || mirror_resolved_o(k, l, a.order.order)).map_err(usage)?;
            family_json(f, a.expanded)
        }
        MirrorCmd::DeformedO(a) => {
            let (k, l) = kl(a.kl)?;
            family_json(mirror_deformed_o(k, l).map_err(usage)?, a.expanded)
        }
        MirrorCmd::Chambers(a) => {
            let (k, l) = kl(a.kl)?;
            let params = load_params(&a.params, k, l)?;
            let mut chambers = serde_json::Map::new();
            for c in ChamberLabel::ALL {
                let coords = chamber_coordinates(c, k, l, &params).map_err(usage)?;
                let m: serde_json::Map<String, Value> =
                    coords.iter().map(|(n, p)| (n.to_string(), json!(p.to_string()))).collect();
                chambers.insert(c.to_string(), Value::Object(m));
            }
            let r = prof.stage("product invariance", || chamber_product_invariance(k, l)).map_err(usage)?;
            Run::checked(json!({ "k": k, "l": l, "chambers": chambers, "invariance": to_value(&r)? }), r.ok, "chamber product invariance")
        }
        MirrorCmd::TransitionCheck(k) => {
            let (k, l) = kl(k)?;
            let r = prof.stage("transition", || transition_consistency_check(k, l)).map_err(usage)?;
            Run::checked(to_value(&r)?, r.ok, "transition consistency")
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CNum {
    Real(f64),
    Pair([f64; 2]),
}

impl From<&CNum> for Complex64 {
    fn from(c: &CNum) -> Self {
        match *c {
            CNum::Real(r) => Complex64::new(r, 0.0),
            CNum::Pair([a, b]) => Complex64::new(a, b),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootsFile {
    f: Option<Vec<CNum>>,
    g: Option<Vec<CNum>>,
    s: Option<Vec<f64>>,
    t: Option<Vec<f64>>,
    table: Option<Vec<Vec<CNum>>>,
}

fn load_roots(p: &Path) -> Res<RootsFile> {
    serde_json::from_str(&read_file(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn complex(v: &Option<Vec<CNum>>, name: &str, len: Option<usize>) -> Res<Vec<Complex64>> {
    let v: Vec<Complex64> = v.as_ref().ok_or_else(|| usage(format!("missing roots {name:?}")))?.iter().map(Into::into).collect();
    match len {
        Some(n) if n != v.len() => Err(usage(format!("expected {n} roots in {name:?}, got {}", v.len()))),
        _ => Ok(v),
    }
}

fn fib(cmd: FibCmd, prof: &mut Profile) -> Res<Run> {
    match cmd {
        FibCmd::Walls(a) => {
            let (k, l) = kl(a.fk.kl)?;
            let roots = a.roots.as_deref().map(load_roots).transpose()?;
            let (kind, walls) = match (a.fk.family, roots) {
                (Family::Generalized, None) => ("resolved", walls_resolved_g()),
                (Family::Generalized, Some(r)) => (
                    "deformed-degenerate",
                    walls_deformed_g_degenerate(&complex(&r.f, "f", Some(k))?, &complex(&r.g, "g", Some(l))?).map_err(usage)?,
                ),
                (Family::Orbifolded, Some(r)) => (
                    "deformed",
                    walls_deformed_o(&complex(&r.f, "f", Some(k))?, &complex(&r.g, "g", Some(l))?).map_err(usage)?,
                ),
                (Family::Orbifolded, None) => return Err(usage("family O needs --roots with f and g")),
            };
            Run::json(json!({ "family": a.fk.family, "k": k, "l": l, "kind": kind, "walls": to_value(&walls)?, "chamber_count": walls.chamber_count() }))
        }
        FibCmd::Discriminant(a) => {
            let (k, l) = kl(a.fk.kl)?;
            let r = load_roots(a.roots.as_deref().ok_or_else(|| usage("--roots is required"))?)?;
            let d = match a.fk.family {
                Family::Generalized => {
                    let (s, t) = r.s.zip(r.t).ok_or_else(|| usage("family G needs real heights s and t"))?;
                    discriminant_resolved_g(k, l, &s, &t).map_err(usage)?
                }
                Family::Orbifolded => {
                    discriminant_deformed_o(&complex(&r.f, "f", Some(k))?, &complex(&r.g, "g", Some(l))?).map_err(usage)?
                }
            };
            Run::json(json!({ "family": a.fk.family, "k": k, "l": l, "discriminant": to_value(&d)? }))
        }
        FibCmd::Amoeba { coeffs, grid, tol, log_radius, both_directions, line_tol } => {
            if tol.is_nan() || tol <= 0.0 || line_tol.is_nan() || line_tol <= 0.0 {
                return Err(usage("tolerances must be positive"));
            }
            let r = load_roots(&coeffs)?;
            let (table, lines) = match (&r.table, &r.f, &r.g) {
                (Some(t), None, None) => (t.iter().map(|row| row.iter().map(Into::into).collect()).collect(), None),
                (None, Some(_), Some(_)) => {
                    let (f, g) = (complex(&r.f, "f", None)?, complex(&r.g, "g", None)?);
                    (factorized_coefficients(&f, &g), Some(walls_deformed_g_degenerate(&f, &g).map_err(usage)?))
                }
                _ => return Err(usage("coefficients file needs either `table` or both `f` and `g`")),
            };
            let g = AmoebaGrid { radii: grid.0, angles: grid.1, log_radius, both_directions, tol };
            let sample = prof.stage("amoeba", || amoeba_sample(&table, &g)).map_err(usage)?;
            let mut meta = to_value(&sample.meta)?;
            meta["points"] = json!(sample.points.len());
            let mut failed = None;
            if let Some(w) = lines {
                let d = max_distance_to_lines(&sample.points, &w);
                meta["max_distance_to_lines"] = json!(d);
                if d.is_nan() || d >= line_tol {
                    failed = Some(format!("amoeba point at distance {d:e} from the predicted lines"));
                }
            }
            eprintln!("{meta}");
            Ok(Run { out: Output::Text(sample.to_csv()), failed })
        }
        FibCmd::Cycles(fk) => {
            let (k, l) = kl(fk.kl)?;
            let c = vanishing_cycle_counts(fk.family, k, l).map_err(usage)?;
            let d = deformation_dimensions(fk.family, fk.kl.k, fk.kl.l).map_err(usage)?;
            let mut v = json!({ "family": fk.family, "k": k, "l": l, "vanishing_cycles": c, "deformations": d });
            if fk.family == Family::Generalized {
                v["curve_genus"] = to_value(&curve_genus_report(k, l).map_err(usage)?)?;
            }
            Run::json(v)
        }
    }
}

fn verify_all_cmd(a: VerifyAllArgs, prof: &mut Profile) -> Res<Run> {
    let (k, l) = kl(a.kl)?;
    let opts = VerifyOptions {
        guard: a.guard,
        fault: fault_p(a.inject_fault, k, l).map(|p| Fault::CorruptG { p }),
        seed: a.seed,
        property_cases: a.property_cases,
    };
    let r = verify_all(a.kl.k, a.kl.l, a.order.order, &opts).map_err(usage)?;
    for c in &r.checks {
        prof.stages.push((c.name.to_string(), Duration::from_millis(c.millis as u64)));
        eprintln!("{} {}", if c.ok { "PASS" } else { "FAIL" }, c.name);
    }
    Run::checked(to_value(&r)?, r.ok, "verification suite")
}

fn configure_threads() -> Res<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(usage(format!("{THREADS_ENV} must be positive")));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Fail::Io(e.to_string()))
}

fn emit(out: &Output, path: &Option<PathBuf>) -> Res<()> {
    let mut bytes = match out {
        Output::Json(v) => serde_json::to_string_pretty(v).map_err(|e| Fail::Io(e.to_string()))?,
        Output::Text(s) => s.clone(),
    };
    if !bytes.ends_with('\n') {
        bytes.push('\n');
    }
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Fail::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().lock().write_all(bytes.as_bytes()).map_err(|e| Fail::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Res<Option<String>> {
    configure_threads()?;
    let mut prof = Profile { on: cli.profile, stages: Vec::new() };
    let result = match cli.cmd {
        Cmd::Lattice(c) => lattice(c, &mut prof),
        Cmd::Toric(c) => toric(c),
        Cmd::Gw(c) => gw(c, &mut prof),
        Cmd::Mirror(c) => mirror(c, &mut prof),
        Cmd::Fib(c) => fib(c, &mut prof),
        Cmd::VerifyAll(a) => verify_all_cmd(a, &mut prof),
    }?;
    prof.stage("write", || emit(&result.out, &cli.output))?;
    prof.report();
    Ok(result.failed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(reason)) => {
            eprintln!("error: {reason}");
            ExitCode::from(1)
        }
        Err(f) => {
            let (Fail::Usage(m) | Fail::Io(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
