//! Hypergeometric g-functions attached to toric divisors and the mirror
//! maps they define, for both families.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{GwError, Result};
use crate::linalg::{gcd_all, unimodular_completion, Mat};
use crate::series::{coordinate_images, forward_mirror_map, reverse_mirror_map_units, SubstImage, TruncatedSeries};
use crate::toric::{GGeometry, OGeometry};

/// Growing table of factorials.
#[derive(Debug, Default)]
pub struct Factorials(Vec<BigInt>);

impl Factorials {
    pub fn get(&mut self, n: usize) -> &BigInt {
        if self.0.is_empty() {
            self.0.push(BigInt::one());
        }
        while self.0.len() <= n {
            let next = self.0.last().unwrap() * BigInt::from(self.0.len());
            self.0.push(next);
        }
        &self.0[n]
    }
}

/// A candidate class for the g-function sums: its exponent in the series
/// variables and its intersection numbers with the height-one divisors.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub exponent: Vec<u32>,
    pub intersections: Vec<i64>,
}

/// `sum (-1)^{D_i.d} (-D_i.d - 1)! / prod_{p != i} (D_p.d)! x^d` over the
/// candidates with `D_i.d < 0` and `D_p.d >= 0` for `p != i`.
pub fn hypergeometric_sum(
    vars: &[String],
    order: u32,
    candidates: &[Candidate],
    i: usize,
    fact: &mut Factorials,
) -> TruncatedSeries {
    let mut terms = Vec::new();
    for c in candidates {
        let di = c.intersections[i];
        if di >= 0 {
            continue;
        }
        if c.intersections.iter().enumerate().any(|(p, &x)| p != i && x < 0) {
            continue;
        }
        let mut num = fact.get((-di - 1) as usize).clone();
        if di % 2 != 0 {
            num = -num;
        }
        let mut den = BigInt::one();
        for (p, &x) in c.intersections.iter().enumerate() {
            if p != i && x > 1 {
                den *= fact.get(x as usize);
            }
        }
        terms.push((c.exponent.clone(), BigRational::new(num, den)));
    }
    TruncatedSeries::from_terms(vars, order, terms).expect("exponent lengths match")
}

/// All `n` in `N^len` with `|n| <= order`, lexicographic.
fn compositions(len: usize, order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, order, &mut cur, &mut out);
    out
}

/// The divisor windows of the fixed resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Window {
    /// `1 <= p <= k-1`: classes `C_1..C_{k-1}`.
    C,
    /// `k+2 <= p <= k+l`: classes `E_1..E_{l-1}`.
    E,
    /// `p` in `{0, k, k+1, k+l+1}`.
    Corner,
}

pub fn window_of(g: &GGeometry, p: usize) -> Result<Window> {
    let (k, l) = (g.k, g.l);
    if p > k + l + 1 {
        return Err(GwError::IndexOutOfRange(p, k + l + 1));
    }
    Ok(if (1..k).contains(&p) {
        Window::C
    } else if (k + 2..=k + l).contains(&p) {
        Window::E
    } else {
        Window::Corner
    })
}

/// Basis indices spanning a window.
pub fn window_basis(g: &GGeometry, w: Window) -> Vec<usize> {
    match w {
        Window::C => (1..g.k).map(|i| g.c_index(i)).collect(),
        Window::E => (1..g.l).map(|j| g.e_index(j)).collect(),
        Window::Corner => Vec::new(),
    }
}

fn g_candidates(g: &GGeometry, basis_indices: &[usize], order: u32) -> Vec<Candidate> {
    let r = g.basis.len();
    let h = g.n_height_one();
    compositions(basis_indices.len(), order)
        .into_iter()
        .filter(|n| n.iter().any(|&x| x > 0))
        .map(|n| {
            let mut full = vec![0i64; r];
            let mut exponent = vec![0u32; r];
            for (&m, &x) in basis_indices.iter().zip(&n) {
                full[m] = x as i64;
                exponent[m] = x;
            }
            let class = g.combine(&full);
            Candidate { exponent, intersections: class.coeffs()[..h].to_vec() }
        })
        .collect()
}

/// `g_p` for the fixed resolution of the generalized conifold, summed over
/// non-negative combinations of the window containing `p`.
pub fn g_function_g(g: &GGeometry, p: usize, order: u32) -> Result<TruncatedSeries> {
    let w = window_of(g, p)?;
    let vars = g.var_names();
    if w == Window::Corner {
        return Ok(TruncatedSeries::zero(&vars, order));
    }
    let cands = g_candidates(g, &window_basis(g, w), order);
    Ok(hypergeometric_sum(&vars, order, &cands, p, &mut Factorials::default()))
}

/// The same sum taken over all non-negative combinations of the full curve
/// basis; agrees with [`g_function_g`].
pub fn g_function_g_full(g: &GGeometry, p: usize, order: u32) -> Result<TruncatedSeries> {
    window_of(g, p)?;
    let all: Vec<usize> = (0..g.basis.len()).collect();
    let cands = g_candidates(g, &all, order);
    Ok(hypergeometric_sum(&g.var_names(), order, &cands, p, &mut Factorials::default()))
}

/// A mirror map `q_c = x_c exp(h_c(x))` with its inverse.
#[derive(Debug, Clone, Serialize)]
pub struct MirrorMap {
    pub vars: Vec<String>,
    pub order: u32,
    /// `h_c` in the complex coordinates.
    pub h: Vec<TruncatedSeries>,
    /// `q_c` as series in the complex coordinates.
    pub forward: Vec<TruncatedSeries>,
    /// Complex coordinates as series in the Kähler coordinates.
    pub inverse: Vec<TruncatedSeries>,
    /// `x_c / q_c`, exact to the full order.
    #[serde(skip)]
    pub inverse_units: Vec<TruncatedSeries>,
}

impl MirrorMap {
    fn from_h(vars: Vec<String>, order: u32, h: Vec<TruncatedSeries>) -> Result<Self> {
        let forward = forward_mirror_map(&h)?;
        let inverse_units = reverse_mirror_map_units(&h)?;
        let inverse = coordinate_images(&inverse_units).iter().map(|im| im.to_series()).collect();
        Ok(Self { vars, order, h, forward, inverse, inverse_units })
    }

    /// Substitution taking series in complex coordinates to Kähler ones.
    pub fn to_kahler(&self) -> Vec<SubstImage> {
        coordinate_images(&self.inverse_units)
    }

    /// Substitution taking series in Kähler coordinates to complex ones.
    pub fn to_complex(&self) -> Result<Vec<SubstImage>> {
        Ok(coordinate_images(&self.h.iter().map(|h| h.exp()).collect::<std::result::Result<Vec<_>, _>>()?))
    }
}

/// `h_c = -sum_j (b_c . D_j) g_j` for each basis class `b_c`.
fn exponents_from_g(basis_dots: &[Vec<i64>], gs: &[TruncatedSeries], vars: &[String], order: u32) -> Vec<TruncatedSeries> {
    basis_dots
        .iter()
        .map(|dots| {
            let mut h = TruncatedSeries::zero(vars, order);
            for (d, gj) in dots.iter().zip(gs) {
                if *d != 0 && !gj.is_zero() {
                    h = h.sub(&gj.scale(&BigRational::from_integer(BigInt::from(*d)))).expect("same vars");
                }
            }
            h
        })
        .collect()
}

/// All g-functions `g_0..g_{k+l+1}` of the fixed resolution.
pub fn all_g_functions_g(g: &GGeometry, order: u32) -> Result<Vec<TruncatedSeries>> {
    (0..g.n_height_one()).map(|p| g_function_g(g, p, order)).collect()
}

pub fn mirror_map_g(g: &GGeometry, order: u32) -> Result<MirrorMap> {
    let gs = all_g_functions_g(g, order)?;
    let h1 = g.n_height_one();
    let dots: Vec<Vec<i64>> = g.basis.iter().map(|b| b.class.coeffs()[..h1].to_vec()).collect();
    let vars = g.var_names();
    let h = exponents_from_g(&dots, &gs, &vars, order);
    MirrorMap::from_h(vars, order, h)
}

/// Series variables for the orbifolded conifold. The walls of the staircase
/// triangulation generate the effective cone; when they are a lattice basis
/// they are used directly, otherwise a unimodular basis is chosen whose dual
/// coordinates are non-negative on every wall.
#[derive(Debug, Clone, Serialize)]
pub struct OBasis {
    pub k: usize,
    pub l: usize,
    pub vars: Vec<String>,
    /// Rows are the coordinate functionals on `C_ij`-coordinates.
    pub coord_rows: Mat,
    /// Columns are the basis classes in `C_ij`-coordinates.
    pub basis_cols: Mat,
    /// Wall classes in `C_ij`-coordinates.
    pub walls: Vec<Vec<i64>>,
    pub walls_are_basis: bool,
}

fn h_weight(i: i64, j: i64) -> i64 {
    i * i + j * j + (i - j) * (i - j)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact inverse of an integer matrix with determinant `+-1`.
pub fn inverse_unimodular(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .chain((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].clone().recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = &a[i][n + j];
            if !x.is_integer() {
                return None;
            }
            out[i][j] = i64::try_from(x.to_integer()).ok()?;
        }
    }
    Some(out)
}

impl OBasis {
    pub fn new(geom: &OGeometry) -> Result<Self> {
        let walls: Vec<Vec<i64>> = geom.wall_classes()?.iter().map(|w| geom.coordinates(w)).collect();
        let pts = geom.basis_points();
        let r = pts.len();
        let vars: Vec<String> = (1..=r).map(|m| format!("y{m}")).collect();
        // columns = walls
        let wmat: Mat = (0..r).map(|i| walls.iter().map(|w| w[i]).collect()).collect();
        if walls.len() == r {
            if let Some(inv) = inverse_unimodular(&wmat) {
                return Ok(Self { k: geom.k, l: geom.l, vars, coord_rows: inv, basis_cols: wmat, walls, walls_are_basis: true });
            }
        }
        let mut y0: Vec<i64> = pts
            .iter()
            .map(|&(a, b)| h_weight(a as i64, b as i64) - 2 * a as i64 - 2 * b as i64)
            .collect();
        let g = gcd_all(&y0).abs();
        y0.iter_mut().for_each(|x| *x /= g);
        if walls.iter().any(|w| dot(&y0, w) <= 0) {
            return Err(GwError::Internal("weight functional not positive on walls".into()));
        }
        let (mut rows, _) = unimodular_completion(&y0)
            .ok_or_else(|| GwError::Internal("weight functional not primitive".into()))?;
        for row in rows.iter_mut().skip(1) {
            let shift = walls
                .iter()
                .map(|w| {
                    let (a, b) = (dot(row, w), dot(&y0, w));
                    // smallest t >= 0 with a + t b >= 0
                    if a >= 0 {
                        0
                    } else {
                        (-a + b - 1) / b
                    }
                })
                .max()
                .unwrap_or(0);
            row.iter_mut().zip(&y0).for_each(|(x, y)| *x += shift * y);
        }
        let cols = inverse_unimodular(&rows).ok_or_else(|| GwError::Internal("basis not unimodular".into()))?;
        Ok(Self { k: geom.k, l: geom.l, vars, coord_rows: rows, basis_cols: cols, walls, walls_are_basis: false })
    }

    /// Coordinates of a class (in `C_ij`-coordinates) in the series basis.
    pub fn exponent_of(&self, c: &[i64]) -> Vec<i64> {
        self.coord_rows.iter().map(|row| dot(row, c)).collect()
    }

    /// Basis class `m` in `C_ij`-coordinates.
    pub fn basis_class(&self, m: usize) -> Vec<i64> {
        self.basis_cols.iter().map(|row| row[m]).collect()
    }

    /// Distinct non-zero non-negative combinations of walls of degree at most
    /// `order`, in `C_ij`-coordinates.
    pub fn effective_classes(&self, order: u32) -> Vec<Vec<i64>> {
        let r = self.vars.len();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue = VecDeque::from([vec![0i64; r]]);
        while let Some(d) = queue.pop_front() {
            for w in &self.walls {
                let n: Vec<i64> = d.iter().zip(w).map(|(a, b)| a + b).collect();
                let deg: i64 = self.exponent_of(&n).iter().sum();
                if deg <= order as i64 && !seen.contains(&n) {
                    seen.insert(n.clone());
                    queue.push_back(n);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Intersections of the class with `C_ij`-coordinates `c` with every toric
/// divisor, in ray order.
fn o_intersections(geom: &OGeometry, c: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; geom.points.len()];
    for (&(i, j), &t) in geom.basis_points().iter().zip(c) {
        if t != 0 {
            for (o, x) in out.iter_mut().zip(geom.c_class(i, j).coeffs()) {
                *o += t * x;
            }
        }
    }
    out
}

/// Everything needed for the orbifolded conifold's g-functions.
#[derive(Debug, Clone)]
pub struct OData {
    pub geom: OGeometry,
    pub basis: OBasis,
}

impl OData {
    pub fn new(k: i64, l: i64) -> Result<Self> {
        let geom = OGeometry::new(k, l)?;
        let basis = OBasis::new(&geom)?;
        Ok(Self { geom, basis })
    }

    fn candidates(&self, order: u32) -> Vec<Candidate> {
        self.basis
            .effective_classes(order)
            .iter()
            .map(|c| Candidate {
                exponent: self.basis.exponent_of(c).iter().map(|&x| x as u32).collect(),
                intersections: o_intersections(&self.geom, c),
            })
            .collect()
    }

    /// `g_ij` for every lattice point, keyed by `(i, j)`.
    pub fn all_g_functions(&self, order: u32) -> BTreeMap<(usize, usize), TruncatedSeries> {
        let cands = self.candidates(order);
        let mut fact = Factorials::default();
        self.geom
            .points
            .iter()
            .enumerate()
            .map(|(ray, &p)| (p, hypergeometric_sum(&self.basis.vars, order, &cands, ray, &mut fact)))
            .collect()
    }

    pub fn g_function(&self, i: usize, j: usize, order: u32) -> Result<TruncatedSeries> {
        if i > self.geom.k || j > self.geom.l {
            return Err(GwError::IndexOutOfRange(i.max(j), self.geom.k.max(self.geom.l)));
        }
        let cands = self.candidates(order);
        Ok(hypergeometric_sum(&self.basis.vars, order, &cands, self.geom.ray_of(i, j), &mut Factorials::default()))
    }

    pub fn mirror_map(&self, order: u32) -> Result<MirrorMap> {
        let gs = self.all_g_functions(order);
        let gs_ray_order: Vec<TruncatedSeries> = self.geom.points.iter().map(|p| gs[p].clone()).collect();
        let dots: Vec<Vec<i64>> = (0..self.basis.vars.len())
            .map(|m| o_intersections(&self.geom, &self.basis.basis_class(m)))
            .collect();
        let h = exponents_from_g(&dots, &gs_ray_order, &self.basis.vars, order);
        MirrorMap::from_h(self.basis.vars.clone(), order, h)
    }

    /// Exponent of `q^{C_ij}` in the series variables; may be negative.
    pub fn c_monomial(&self, i: usize, j: usize) -> Vec<i64> {
        let c = self.geom.coordinates(&self.geom.c_class(i, j));
        self.basis.exponent_of(&c)
    }
}

pub fn g_function_o(k: i64, l: i64, i: usize, j: usize, order: u32) -> Result<TruncatedSeries> {
    OData::new(k, l)?.g_function(i, j, order)
}

pub fn mirror_map_o(k: i64, l: i64, order: u32) -> Result<MirrorMap> {
    OData::new(k, l)?.mirror_map(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn a1_g_function() {
        let g = GGeometry::new(2, 1).unwrap();
        let g1 = g_function_g(&g, 1, 4).unwrap();
        assert_eq!(g1.vars(), ["C1", "C0"]);
        assert_eq!(g1.coeff(&[1, 0]), rat(1, 1));
        assert_eq!(g1.coeff(&[2, 0]), rat(3, 2));
        assert_eq!(g1.coeff(&[3, 0]), rat(10, 3));
        assert_eq!(g1.coeff(&[4, 0]), rat(35, 4));
        assert_eq!(g1.terms().len(), 4);
        for p in [0, 2, 3, 4] {
            assert!(g_function_g(&g, p, 4).unwrap().is_zero());
        }
        assert!(matches!(g_function_g(&g, 5, 4), Err(GwError::IndexOutOfRange(5, 4))));
    }

    #[test]
    fn a1_mirror_map() {
        let g = GGeometry::new(2, 1).unwrap();
        let mm = mirror_map_g(&g, 4).unwrap();
        let f = &mm.forward[0];
        for (n, c) in [(1, 1), (2, 2), (3, 5), (4, 14)] {
            assert_eq!(f.coeff(&[n, 0]), rat(c, 1));
        }
        // q^{C_0} = x^{C_0} exp(-g_1) here since C_0.D_1 = 1 and g_{k+2} = g_3 = 0
        let g1 = g_function_g(&g, 1, 4).unwrap();
        assert_eq!(mm.h[1], g1.neg());
        let inv = &mm.inverse[0];
        assert_eq!(inv.coeff(&[1, 0]), rat(1, 1));
        assert_eq!(inv.coeff(&[2, 0]), rat(-2, 1));
        assert_eq!(inv.coeff(&[3, 0]), rat(3, 1));
    }

    #[test]
    fn conifold_has_trivial_mirror_map() {
        let g = GGeometry::new(1, 1).unwrap();
        let mm = mirror_map_g(&g, 5).unwrap();
        assert_eq!(mm.vars, ["C0"]);
        assert!(mm.h[0].is_zero());
        let o = mirror_map_o(1, 1, 5).unwrap();
        assert!(o.h.iter().all(|h| h.is_zero()));
    }

    #[test]
    fn o_basis_properties() {
        for (k, l) in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (4, 2)] {
            let d = OData::new(k, l).unwrap();
            let b = &d.basis;
            assert_eq!(b.vars.len() as i64, (k + 1) * (l + 1) - 3);
            for w in &b.walls {
                let e = b.exponent_of(w);
                assert!(e.iter().all(|&x| x >= 0), "wall {w:?} -> {e:?}");
                assert!(e.iter().sum::<i64>() >= 1);
            }
            let id = crate::linalg::mat_mul(&b.coord_rows, &b.basis_cols);
            assert_eq!(id, crate::linalg::identity(b.vars.len()));
        }
        assert!(OData::new(2, 1).unwrap().basis.walls_are_basis);
        assert!(!OData::new(2, 2).unwrap().basis.walls_are_basis);
    }

    #[test]
    fn o_corners_vanish() {
        for (k, l) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let d = OData::new(k, l).unwrap();
            let gs = d.all_g_functions(4);
            for (&(i, j), s) in &gs {
                assert!(s.constant_term().is_zero());
                let corner = (i == 0 || i == k as usize) && (j == 0 || j == l as usize);
                if corner {
                    assert!(s.is_zero(), "corner ({i},{j}) of {k}x{l}");
                }
            }
        }
    }

    #[test]
    fn o_edge_midpoint_is_a1() {
        let d = OData::new(2, 1).unwrap();
        // the class D_00 + D_20 - 2 D_10 along the bottom edge
        let mut edge = vec![0i64; d.geom.points.len()];
        edge[d.geom.ray_of(0, 0)] = 1;
        edge[d.geom.ray_of(2, 0)] = 1;
        edge[d.geom.ray_of(1, 0)] = -2;
        let edge_class = crate::toric::CurveClass::new(&d.geom.fan, edge).unwrap();
        let e = d.basis.exponent_of(&d.geom.coordinates(&edge_class));
        let g10 = d.g_function(1, 0, 6).unwrap();
        let at = |n: i64| -> Vec<u32> { e.iter().map(|&x| (x * n) as u32).collect() };
        assert_eq!(g10.coeff(&at(1)), rat(1, 1));
        assert_eq!(g10.coeff(&at(2)), rat(3, 2));
    }
}
