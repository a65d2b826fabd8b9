//! Bases of the Lagrangian fibrations: walls, discriminant loci, chambers,
//! amoeba samples and vanishing-cycle counts.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{check_kl, make_rectangle, Family, LatticeError};

#[derive(Debug, Error)]
pub enum FibrationError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("non-finite input")]
    NotFinite,
    #[error("roots must be non-zero")]
    ZeroRoot,
    #[error("invalid amoeba input: {0}")]
    Amoeba(String),
}

pub type Result<T> = std::result::Result<T, FibrationError>;

/// A hyperplane `b_coord = value` in the base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallPiece {
    pub coord: u8,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallSet {
    pub pieces: Vec<WallPiece>,
}

impl WallSet {
    /// Number of connected components of the complement, for axis-aligned
    /// hyperplanes: the product over coordinates of (distinct values + 1).
    pub fn chamber_count(&self) -> usize {
        (1..=3u8)
            .map(|c| {
                let mut v: Vec<f64> = self.pieces.iter().filter(|p| p.coord == c).map(|p| p.value).collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v.len() + 1
            })
            .product()
    }

    fn values(&self, coord: u8) -> Vec<f64> {
        self.pieces.iter().filter(|p| p.coord == coord).map(|p| p.value).collect()
    }

    /// `(i, j)`: how many walls in `b1` and in `b2` lie below the point.
    pub fn chamber_of(&self, b1: f64, b2: f64) -> (usize, usize) {
        (self.values(1).iter().filter(|&&v| v < b1).count(), self.values(2).iter().filter(|&&v| v < b2).count())
    }
}

/// A codimension-two piece `{b_a = x, b_b = y}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinePiece {
    pub fixed: [(u8, f64); 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantLocus {
    pub boundary: bool,
    pub interior_pieces: Vec<LinePiece>,
}

impl DiscriminantLocus {
    /// Every piece lies in some wall of `w`.
    pub fn within(&self, w: &WallSet) -> bool {
        self.interior_pieces
            .iter()
            .all(|p| p.fixed.iter().any(|&(c, v)| w.pieces.iter().any(|q| q.coord == c && q.value == v)))
    }
}

fn finite(v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(FibrationError::NotFinite)
    }
}

/// `{b1 = 0, b3 = s_i}` and `{b2 = 0, b3 = t_j}` with the boundary.
pub fn discriminant_resolved_g(k: usize, l: usize, s: &[f64], t: &[f64]) -> Result<DiscriminantLocus> {
    check_kl(k as i64, l as i64)?;
    if s.len() != k {
        return Err(FibrationError::Length { expected: k, got: s.len() });
    }
    if t.len() != l {
        return Err(FibrationError::Length { expected: l, got: t.len() });
    }
    finite(s)?;
    finite(t)?;
    let mut pieces: Vec<LinePiece> = s.iter().map(|&v| LinePiece { fixed: [(1, 0.0), (3, v)] }).collect();
    pieces.extend(t.iter().map(|&v| LinePiece { fixed: [(2, 0.0), (3, v)] }));
    Ok(DiscriminantLocus { boundary: true, interior_pieces: pieces })
}

pub fn walls_resolved_g() -> WallSet {
    WallSet { pieces: vec![WallPiece { coord: 1, value: 0.0 }, WallPiece { coord: 2, value: 0.0 }] }
}

fn moduli(roots: &[Complex64]) -> Result<Vec<f64>> {
    if roots.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(FibrationError::NotFinite);
    }
    if roots.iter().any(|r| r.norm() == 0.0) {
        return Err(FibrationError::ZeroRoot);
    }
    Ok(roots.iter().map(|r| r.norm()).collect())
}

fn merged(coord: u8, values: Vec<f64>, out: &mut Vec<WallPiece>) {
    for v in values {
        if out.iter().any(|p| p.coord == coord && p.value == v) {
            log::warn!("duplicate wall b{coord} = {v} merged");
        } else {
            out.push(WallPiece { coord, value: v });
        }
    }
}

/// Horizontal planes `b3 = |r_i|` and `b3 = |s_j|`.
pub fn walls_deformed_o(f_roots: &[Complex64], g_roots: &[Complex64]) -> Result<WallSet> {
    let mut pieces = Vec::new();
    merged(3, moduli(f_roots)?, &mut pieces);
    merged(3, moduli(g_roots)?, &mut pieces);
    Ok(WallSet { pieces })
}

/// `{b1 = 0, b3 = |r_i|}` and `{b2 = 0, b3 = |s_j|}` with the boundary.
pub fn discriminant_deformed_o(f_roots: &[Complex64], g_roots: &[Complex64]) -> Result<DiscriminantLocus> {
    let mut pieces: Vec<LinePiece> = moduli(f_roots)?.into_iter().map(|v| LinePiece { fixed: [(1, 0.0), (3, v)] }).collect();
    pieces.extend(moduli(g_roots)?.into_iter().map(|v| LinePiece { fixed: [(2, 0.0), (3, v)] }));
    Ok(DiscriminantLocus { boundary: true, interior_pieces: pieces })
}

/// Walls of the degenerate deformed generalized conifold, in the two amoeba
/// coordinates: `b1 = log|r_i|` and `b2 = log|s_j|`.
pub fn walls_deformed_g_degenerate(f_roots: &[Complex64], g_roots: &[Complex64]) -> Result<WallSet> {
    let mut pieces = Vec::new();
    merged(1, moduli(f_roots)?.into_iter().map(f64::ln).collect(), &mut pieces);
    merged(2, moduli(g_roots)?.into_iter().map(f64::ln).collect(), &mut pieces);
    Ok(WallSet { pieces })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingCycles {
    #[serde(rename = "S1xS2")]
    pub s1xs2: usize,
    #[serde(rename = "S3")]
    pub s3: usize,
}

pub fn vanishing_cycle_counts(family: Family, k: usize, l: usize) -> Result<VanishingCycles> {
    check_kl(k as i64, l as i64)?;
    Ok(match family {
        Family::Generalized => VanishingCycles { s1xs2: 0, s3: (k + 1) * (l + 1) - 3 },
        Family::Orbifolded => VanishingCycles { s1xs2: k + l - 2, s3: 1 },
    })
}

/// Genus data of the curve `sum a_ij z^i w^j = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct CurveGenusReport {
    pub k: usize,
    pub l: usize,
    /// Interior lattice points of the Newton polygon `[0,k] x [0,l]`.
    pub newton_interior_points: usize,
    pub stated_genus: usize,
    pub agree: bool,
}

pub fn curve_genus_report(k: usize, l: usize) -> Result<CurveGenusReport> {
    let rect = make_rectangle(k as i64, l as i64)?;
    let n = rect.interior_lattice_point_count();
    Ok(CurveGenusReport { k, l, newton_interior_points: n, stated_genus: k * l, agree: n == k * l })
}

/// Sampling grid for [`amoeba_sample`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmoebaGrid {
    pub radii: usize,
    pub angles: usize,
    /// Circles have `log|z|` evenly spaced in `[-log_radius, log_radius]`.
    pub log_radius: f64,
    /// Also sample `w` on circles and solve for `z`.
    pub both_directions: bool,
    /// Bound on the normalized residual of accepted roots.
    pub tol: f64,
}

impl Default for AmoebaGrid {
    fn default() -> Self {
        Self { radii: 64, angles: 256, log_radius: 3.0, both_directions: false, tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AmoebaMeta {
    pub k: usize,
    pub l: usize,
    pub grid: AmoebaGrid,
    pub samples: usize,
    pub skipped: usize,
    pub rejected_roots: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmoebaSample {
    pub points: Vec<(f64, f64)>,
    pub meta: AmoebaMeta,
}

impl AmoebaSample {
    /// CSV with header `b1,b2` and `%.12e` formatting.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("b1,b2\n");
        for (a, b) in &self.points {
            s.push_str(&format!("{},{}\n", fmt_e12(*a), fmt_e12(*b)));
        }
        s
    }
}

/// C-style `%.12e`.
pub fn fmt_e12(x: f64) -> String {
    let s = format!("{x:.12e}");
    match s.split_once('e') {
        Some((m, e)) => {
            let (sign, digits) = match e.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', e),
            };
            format!("{m}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

/// `|p(x)| / sum |c_j| |x|^j`.
pub fn normalized_residual(c: &[Complex64], x: Complex64) -> f64 {
    let scale: f64 = c.iter().enumerate().map(|(j, a)| a.norm() * x.norm().powi(j as i32)).sum();
    if scale == 0.0 {
        return 0.0;
    }
    horner(c, x).norm() / scale
}

/// Roots of `sum c_j x^j` (low degree first): companion-matrix eigenvalues
/// polished by Newton steps. Trailing coefficients below `1e-14` of the
/// largest are dropped. `None` when the polynomial vanishes identically or
/// the eigenvalue iteration fails.
pub fn polynomial_roots(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let big = c.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if big == 0.0 {
        return None;
    }
    let mut n = c.len();
    while n > 0 && c[n - 1].norm() <= 1e-14 * big {
        n -= 1;
    }
    let c = &c[..n];
    let deg = n - 1;
    if deg == 0 {
        return Some(Vec::new());
    }
    let lead = c[deg];
    let comp = DMatrix::<Complex64>::from_fn(deg, deg, |i, j| {
        if j == deg - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = comp.eigenvalues()?;
    let dc: Vec<Complex64> = (1..=deg).map(|j| c[j] * j as f64).collect();
    Some(
        eig.iter()
            .map(|&r0| {
                let mut r = r0;
                for _ in 0..50 {
                    let d = horner(&dc, r);
                    if d.norm() == 0.0 {
                        break;
                    }
                    let step = horner(c, r) / d;
                    r -= step;
                    if step.norm() <= 1e-16 * r.norm().max(1.0) || normalized_residual(c, r) < 1e-15 {
                        break;
                    }
                }
                r
            })
            .collect(),
    )
}

/// Samples the amoeba of `sum a[i][j] z^i w^j = 0`, `a` of shape
/// `(k+1) x (l+1)`: for `z` on each circle, all roots `w` with normalized
/// residual below `grid.tol` give a point `(log|z|, log|w|)`. Residuals are
/// recomputed from `a` directly. Samples where the `w`-polynomial vanishes
/// or the solver fails are counted in `meta.skipped`.
pub fn amoeba_sample(a: &[Vec<Complex64>], grid: &AmoebaGrid) -> Result<AmoebaSample> {
    let k1 = a.len();
    let l1 = a.first().map_or(0, |r| r.len());
    if k1 < 2 || l1 < 2 || a.iter().any(|r| r.len() != l1) {
        return Err(FibrationError::Amoeba("coefficients must form a (k+1) x (l+1) table with k, l >= 1".into()));
    }
    if a.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(FibrationError::NotFinite);
    }
    if grid.radii == 0 || grid.angles == 0 || grid.tol.is_nan() || grid.tol <= 0.0 || !grid.log_radius.is_finite() {
        return Err(FibrationError::Amoeba("grid sizes must be positive and the tolerance > 0".into()));
    }
    let transposed: Vec<Vec<Complex64>> = (0..l1).map(|j| (0..k1).map(|i| a[i][j]).collect()).collect();
    let mut tasks: Vec<(bool, usize, usize)> = Vec::new();
    for dir in [false, true] {
        if dir && !grid.both_directions {
            continue;
        }
        for r in 0..grid.radii {
            for t in 0..grid.angles {
                tasks.push((dir, r, t));
            }
        }
    }
    // points, skipped, rejected roots, worst residual
    type Chunk = (Vec<(f64, f64)>, bool, usize, f64);
    let results: Vec<Chunk> = tasks
        .par_iter()
        .map(|&(swapped, r, t)| {
            let table = if swapped { &transposed } else { a };
            let lr = if grid.radii == 1 {
                0.0
            } else {
                -grid.log_radius + 2.0 * grid.log_radius * r as f64 / (grid.radii - 1) as f64
            };
            let theta = std::f64::consts::TAU * (t as f64 + 0.5) / grid.angles as f64;
            let x = Complex64::from_polar(lr.exp(), theta);
            // coefficients in the other variable
            let ncols = table[0].len();
            let coeffs: Vec<Complex64> = (0..ncols).map(|j| horner(&table.iter().map(|row| row[j]).collect::<Vec<_>>(), x)).collect();
            let Some(roots) = polynomial_roots(&coeffs) else { return (Vec::new(), true, 0, 0.0) };
            let mut pts = Vec::new();
            let mut rejected = 0;
            let mut worst: f64 = 0.0;
            for y in roots {
                let res = full_residual(table, x, y);
                if res < grid.tol && y.norm() > 0.0 {
                    worst = worst.max(res);
                    let p = (x.norm().ln(), y.norm().ln());
                    pts.push(if swapped { (p.1, p.0) } else { p });
                } else {
                    rejected += 1;
                }
            }
            (pts, false, rejected, worst)
        })
        .collect();
    let mut points = Vec::new();
    let (mut skipped, mut rejected_roots, mut max_residual) = (0, 0, 0.0f64);
    for (p, skip, rej, worst) in results {
        points.extend(p);
        skipped += usize::from(skip);
        rejected_roots += rej;
        max_residual = max_residual.max(worst);
    }
    Ok(AmoebaSample {
        points,
        meta: AmoebaMeta {
            k: k1 - 1,
            l: l1 - 1,
            grid: grid.clone(),
            samples: tasks.len(),
            skipped,
            rejected_roots,
            max_residual,
        },
    })
}

/// `|sum a_ij x^i y^j| / sum |a_ij| |x|^i |y|^j`.
pub fn full_residual(a: &[Vec<Complex64>], x: Complex64, y: Complex64) -> f64 {
    let (mut v, mut scale) = (Complex64::new(0.0, 0.0), 0.0);
    for (i, row) in a.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            v += c * x.powi(i as i32) * y.powi(j as i32);
            scale += c.norm() * x.norm().powi(i as i32) * y.norm().powi(j as i32);
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        v.norm() / scale
    }
}

/// Coefficients of `prod (x - r)`, low degree first.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i + 1] += x;
            next[i] -= r * x;
        }
        c = next;
    }
    c
}

/// `a_ij = f_i g_j` for `f = prod (z - r_i)`, `g = prod (w - s_j)`.
pub fn factorized_coefficients(f_roots: &[Complex64], g_roots: &[Complex64]) -> Vec<Vec<Complex64>> {
    let f = poly_from_roots(f_roots);
    let g = poly_from_roots(g_roots);
    f.iter().map(|fi| g.iter().map(|gj| fi * gj).collect()).collect()
}

/// Largest distance from a sample point to the line set
/// `{b1 = log|r_i|} u {b2 = log|s_j|}`.
pub fn max_distance_to_lines(points: &[(f64, f64)], walls: &WallSet) -> f64 {
    let (v1, v2) = (walls.values(1), walls.values(2));
    points
        .iter()
        .map(|&(b1, b2)| {
            v1.iter().map(|v| (b1 - v).abs()).chain(v2.iter().map(|v| (b2 - v).abs())).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}
