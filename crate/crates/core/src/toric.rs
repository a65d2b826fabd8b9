//! Fans over triangulated polygons, the compactified fan of the generalized
//! conifold, and curve classes read off from wall relations.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{
    check_kl, fixed_trapezoid_triangulation, make_trapezoid, staircase_rectangle_triangulation,
    LatticeError, LatticePoint, MaximalTriangulation,
};
use crate::linalg::{det3, solve3, V3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("wall {0:?} is not interior (adjacent to {1} three-dimensional cones)")]
    NotInteriorWall([usize; 2], usize),
    #[error("wall relation for {0:?} is not smooth")]
    SingularWall([usize; 2]),
    #[error("disc vector has length {0} but the fan has {1} rays")]
    Length(usize, usize),
    #[error("vector {0:?} has nonzero boundary {1:?}, not a curve class")]
    NotClosed(Vec<i64>, V3),
    #[error("fan is not over the trapezoid with k={0}, l={1}")]
    NotTrapezoidFan(i64, i64),
    #[error("unknown divisor label {0:?}")]
    UnknownLabel(String),
}

pub type Result<T> = std::result::Result<T, ToricError>;

pub const LABEL_Z_INF: &str = "D_{z=inf}";
pub const LABEL_W_INF: &str = "D_{w=inf}";
pub const LABEL_XI_0: &str = "D_{xi=0}";
pub const LABEL_XI_INF: &str = "D_{xi=inf}";

/// Compactifying rays in the order they are appended.
pub const COMPACTIFYING_RAYS: [(V3, &str); 4] = [
    ([0, 0, -1], LABEL_Z_INF),
    ([0, -1, -1], LABEL_W_INF),
    ([1, 0, 0], LABEL_XI_0),
    ([-1, 0, 0], LABEL_XI_INF),
];

/// A simplicial fan in `Z^3` with labelled rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<V3>,
    labels: Vec<String>,
    cones3: Vec<[usize; 3]>,
    cones2: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct FanRepr<'a> {
    rays: &'a [V3],
    cones3: &'a [[usize; 3]],
    cones2: &'a [[usize; 2]],
    labels: BTreeMap<&'a str, usize>,
}

impl Serialize for Fan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FanRepr {
            rays: &self.rays,
            cones3: &self.cones3,
            cones2: &self.cones2,
            labels: self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect(),
        }
        .serialize(s)
    }
}

fn faces(c: &[usize; 3]) -> [[usize; 2]; 3] {
    [[c[0], c[1]], [c[0], c[2]], [c[1], c[2]]]
}

impl Fan {
    fn from_parts(rays: Vec<V3>, labels: Vec<String>, cones: Vec<[usize; 3]>) -> Self {
        let mut cones3: Vec<[usize; 3]> = cones
            .into_iter()
            .map(|mut c| {
                c.sort();
                c
            })
            .collect();
        cones3.sort();
        let mut cones2: Vec<[usize; 2]> = cones3.iter().flat_map(faces).collect();
        cones2.sort();
        cones2.dedup();
        Self { rays, labels, cones3, cones2 }
    }

    pub fn rays(&self) -> &[V3] {
        &self.rays
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn ray_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| ToricError::UnknownLabel(label.to_string()))
    }

    pub fn cones3(&self) -> &[[usize; 3]] {
        &self.cones3
    }

    pub fn cones2(&self) -> &[[usize; 2]] {
        &self.cones2
    }

    /// Indices of the 3-cones containing the 2-cone `wall`.
    pub fn adjacent_cones(&self, wall: [usize; 2]) -> Vec<usize> {
        (0..self.cones3.len())
            .filter(|&i| self.cones3[i].contains(&wall[0]) && self.cones3[i].contains(&wall[1]))
            .collect()
    }

    /// 2-cones shared by exactly two 3-cones.
    pub fn interior_walls(&self) -> Vec<[usize; 2]> {
        self.cones2
            .iter()
            .copied()
            .filter(|&w| self.adjacent_cones(w).len() == 2)
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.cones3
            .iter()
            .all(|c| det3(self.rays[c[0]], self.rays[c[1]], self.rays[c[2]]).abs() == 1)
    }

    /// Whether each 2-cone lies in exactly two 3-cones, as for a complete
    /// fan.
    pub fn is_closed_surface(&self) -> bool {
        self.cones2.iter().all(|&w| self.adjacent_cones(w).len() == 2)
    }

    /// The 3-cones containing the direction `x` (closed cones).
    pub fn cones_containing(&self, x: V3) -> Vec<usize> {
        (0..self.cones3.len())
            .filter(|&i| {
                let [a, b, c] = self.cones3[i].map(|r| self.rays[r]);
                let d = det3(a, b, c);
                let n = [det3(x, b, c), det3(a, x, c), det3(a, b, x)];
                n.iter().all(|&v| v * d.signum() >= 0)
            })
            .collect()
    }

    fn boundary(&self, coeffs: &[i64]) -> V3 {
        let mut s = [0i64; 3];
        for (c, r) in coeffs.iter().zip(&self.rays) {
            for k in 0..3 {
                s[k] += c * r[k];
            }
        }
        s
    }

    /// The curve class of the torus-invariant curve dual to an interior wall.
    pub fn curve_class_from_wall(&self, wall: [usize; 2]) -> Result<CurveClass> {
        let mut wall = wall;
        wall.sort();
        let adj = self.adjacent_cones(wall);
        if adj.len() != 2 {
            return Err(ToricError::NotInteriorWall(wall, adj.len()));
        }
        let opposite = |c: usize| *self.cones3[c].iter().find(|r| !wall.contains(r)).unwrap();
        let (a, b) = (opposite(adj[0]), opposite(adj[1]));
        let [u, v] = wall;
        let x = solve3(self.rays[u], self.rays[v], self.rays[a], self.rays[b])
            .ok_or(ToricError::SingularWall(wall))?;
        if x[2] != -1 {
            return Err(ToricError::SingularWall(wall));
        }
        let mut coeffs = vec![0i64; self.rays.len()];
        coeffs[a] += 1;
        coeffs[b] += 1;
        coeffs[u] -= x[0];
        coeffs[v] -= x[1];
        CurveClass::new(self, coeffs)
    }
}

fn trapezoid_params(t: &MaximalTriangulation) -> Option<(i64, i64)> {
    let pts = t.parent().lattice_points();
    if pts.iter().any(|p| p.y < 0 || p.y > 1 || p.x < 0) {
        return None;
    }
    let k = pts.iter().filter(|p| p.y == 0).map(|p| p.x).max()?;
    let l = pts.iter().filter(|p| p.y == 1).map(|p| p.x).max()?;
    match make_trapezoid(k, l) {
        Ok(trap) if &trap == t.parent() => Some((k, l)),
        _ => None,
    }
}

/// The fan of cones over `t` placed at height one. Rays follow the `(y, x)`
/// order of lattice points; trapezoid rays are labelled `D_i` in that order,
/// all others `D_{x,y}`.
pub fn fan_over_triangulation(t: &MaximalTriangulation) -> Fan {
    let pts = t.parent().lattice_points();
    let rays: Vec<V3> = pts.iter().map(|p| [p.x, p.y, 1]).collect();
    let labels: Vec<String> = if trapezoid_params(t).is_some() {
        (0..pts.len()).map(|i| format!("D_{i}")).collect()
    } else {
        pts.iter().map(|p| format!("D_{{{},{}}}", p.x, p.y)).collect()
    };
    let index = |p: LatticePoint| pts.iter().position(|&q| q == p).unwrap();
    let cones = t
        .triangles()
        .iter()
        .map(|tr| tr.corners().map(index))
        .collect();
    Fan::from_parts(rays, labels, cones)
}

/// Adds the four compactifying rays and the cones joining them to the
/// boundary of the trapezoid. Works for every triangulation of the
/// trapezoid since only boundary edges are involved.
pub fn compactify_g_fan(f: &Fan, k: i64, l: i64) -> Result<Fan> {
    let (ku, lu) = check_kl(k, l)?;
    let expected: Vec<V3> = (0..=k).map(|i| [i, 0, 1]).chain((0..=l).map(|j| [j, 1, 1])).collect();
    if f.rays != expected {
        return Err(ToricError::NotTrapezoidFan(k, l));
    }
    let a = |i: usize| i;
    let b = |j: usize| ku + 1 + j;
    let n = ku + lu + 2;
    let (z_inf, w_inf, xi0, xi_inf) = (n, n + 1, n + 2, n + 3);
    let mut rays = f.rays.clone();
    let mut labels = f.labels.clone();
    for (r, name) in COMPACTIFYING_RAYS {
        rays.push(r);
        labels.push(name.to_string());
    }
    let mut cones = f.cones3.clone();
    // left and right edges
    cones.push([xi_inf, a(0), b(0)]);
    cones.push([xi0, a(ku), b(lu)]);
    // top edge, capped by z = inf
    for j in 0..lu {
        cones.push([b(j), b(j + 1), z_inf]);
    }
    cones.push([xi_inf, b(0), z_inf]);
    cones.push([b(lu), xi0, z_inf]);
    // bottom edge, capped by w = inf
    for i in 0..ku {
        cones.push([a(i), a(i + 1), w_inf]);
    }
    cones.push([xi_inf, a(0), w_inf]);
    cones.push([a(ku), xi0, w_inf]);
    // below
    cones.push([xi_inf, z_inf, w_inf]);
    cones.push([z_inf, xi0, w_inf]);
    Ok(Fan::from_parts(rays, labels, cones))
}

/// An integer vector over the rays of a fan: the coefficient at a ray is the
/// intersection number with that toric divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DiscClassVector {
    pub coeffs: Vec<i64>,
}

impl DiscClassVector {
    pub fn basic(n_rays: usize, ray: usize) -> Self {
        let mut coeffs = vec![0; n_rays];
        coeffs[ray] = 1;
        Self { coeffs }
    }

    pub fn maslov_index(&self) -> i64 {
        2 * self.coeffs.iter().sum::<i64>()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scaled(&self, t: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * t).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scaled(-1))
    }
}

/// A disc vector with zero boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CurveClass {
    pub disc: DiscClassVector,
}

impl CurveClass {
    pub fn new(fan: &Fan, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != fan.rays.len() {
            return Err(ToricError::Length(coeffs.len(), fan.rays.len()));
        }
        let b = fan.boundary(&coeffs);
        if b != [0, 0, 0] {
            return Err(ToricError::NotClosed(coeffs, b));
        }
        Ok(Self { disc: DiscClassVector { coeffs } })
    }

    pub fn zero(n_rays: usize) -> Self {
        Self { disc: DiscClassVector { coeffs: vec![0; n_rays] } }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.disc.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&c| c == 0)
    }
}

pub fn intersection_number(c: &CurveClass, ray_index: usize) -> i64 {
    c.disc.coeffs[ray_index]
}

/// First Chern class degree: the sum of intersections with all toric
/// divisors.
pub fn c1_degree(c: &CurveClass) -> i64 {
    c.disc.coeffs.iter().sum()
}

/// A basis curve with its series variable name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCurve {
    pub name: String,
    pub class: CurveClass,
}

/// The compactified fan of the fixed resolution of the generalized
/// conifold together with the curve basis `C_1..C_{k-1}, C_0, E_1..E_{l-1}`.
#[derive(Debug, Clone, Serialize)]
pub struct GGeometry {
    pub k: usize,
    pub l: usize,
    pub fan: Fan,
    pub basis: Vec<NamedCurve>,
}

impl GGeometry {
    pub fn new(k: i64, l: i64) -> Result<Self> {
        let (ku, lu) = check_kl(k, l)?;
        let t = fixed_trapezoid_triangulation(k, l)?;
        let fan = compactify_g_fan(&fan_over_triangulation(&t), k, l)?;
        let top = |j: usize| ku + 1 + j;
        let mut basis = Vec::new();
        for i in 1..ku {
            basis.push(NamedCurve { name: format!("C{i}"), class: fan.curve_class_from_wall([top(0), i])? });
        }
        basis.push(NamedCurve { name: "C0".into(), class: fan.curve_class_from_wall([top(0), ku])? });
        for j in 1..lu {
            basis.push(NamedCurve { name: format!("E{j}"), class: fan.curve_class_from_wall([top(j), ku])? });
        }
        Ok(Self { k: ku, l: lu, fan, basis })
    }

    pub fn n_rays(&self) -> usize {
        self.fan.rays().len()
    }

    /// Number of height-one rays, `k + l + 2`.
    pub fn n_height_one(&self) -> usize {
        self.k + self.l + 2
    }

    pub fn var_names(&self) -> Vec<String> {
        self.basis.iter().map(|c| c.name.clone()).collect()
    }

    /// Index of `C_i` (`1 <= i <= k-1`) in the basis.
    pub fn c_index(&self, i: usize) -> usize {
        i - 1
    }

    pub fn c0_index(&self) -> usize {
        self.k - 1
    }

    /// Index of `E_j` (`1 <= j <= l-1`) in the basis.
    pub fn e_index(&self, j: usize) -> usize {
        self.k + j - 1
    }

    /// The class `sum_m n_m basis_m`.
    pub fn combine(&self, n: &[i64]) -> CurveClass {
        let mut coeffs = vec![0i64; self.n_rays()];
        for (b, &t) in self.basis.iter().zip(n) {
            for (c, x) in coeffs.iter_mut().zip(b.class.coeffs()) {
                *c += t * x;
            }
        }
        CurveClass { disc: DiscClassVector { coeffs } }
    }

    /// Coordinates of a closed class in the basis; `None` if it is not in the
    /// span.
    pub fn coordinates(&self, c: &CurveClass) -> Option<Vec<i64>> {
        // On the height-one rays, C_i is supported on D_{i-1}, D_i, D_{i+1};
        // solve left to right using the unit entry each basis vector has.
        let k = self.k;
        let mut rest = c.coeffs().to_vec();
        let mut out = vec![0i64; self.basis.len()];
        // C_i has coefficient 1 at D_{i-1}; C_0 at D_{k-1}; E_j at D_{k+j}.
        let lead: Vec<usize> = (1..k).map(|i| i - 1).chain([k - 1]).chain((1..self.l).map(|j| k + j)).collect();
        let mut order: Vec<usize> = (0..self.basis.len()).collect();
        order.sort_by_key(|&m| lead[m]);
        for m in order {
            let t = rest[lead[m]];
            out[m] = t;
            for (r, x) in rest.iter_mut().zip(self.basis[m].class.coeffs()) {
                *r -= t * x;
            }
        }
        if rest.iter().all(|&x| x == 0) {
            Some(out)
        } else {
            None
        }
    }
}

/// The staircase-triangulated rectangle fan with the classes `C_ij`.
#[derive(Debug, Clone, Serialize)]
pub struct OGeometry {
    pub k: usize,
    pub l: usize,
    pub fan: Fan,
    /// Lattice points in ray order.
    pub points: Vec<(usize, usize)>,
}

impl OGeometry {
    pub fn new(k: i64, l: i64) -> Result<Self> {
        let (ku, lu) = check_kl(k, l)?;
        let t = staircase_rectangle_triangulation(k, l)?;
        let fan = fan_over_triangulation(&t);
        let points = t.parent().lattice_points().iter().map(|p| (p.x as usize, p.y as usize)).collect();
        Ok(Self { k: ku, l: lu, fan, points })
    }

    pub fn ray_of(&self, i: usize, j: usize) -> usize {
        j * (self.k + 1) + i
    }

    /// `C_ij = e_ij - i e_10 - j e_01 + (i+j-1) e_00`.
    pub fn c_class(&self, i: usize, j: usize) -> CurveClass {
        let mut coeffs = vec![0i64; self.points.len()];
        coeffs[self.ray_of(i, j)] += 1;
        coeffs[self.ray_of(1, 0)] -= i as i64;
        coeffs[self.ray_of(0, 1)] -= j as i64;
        coeffs[self.ray_of(0, 0)] += i as i64 + j as i64 - 1;
        CurveClass::new(&self.fan, coeffs).expect("C_ij is closed")
    }

    /// Lattice points other than `(0,0), (1,0), (0,1)`, in ray order; their
    /// `C_ij` form a basis of `H_2`.
    pub fn basis_points(&self) -> Vec<(usize, usize)> {
        self.points
            .iter()
            .copied()
            .filter(|p| !matches!(p, (0, 0) | (1, 0) | (0, 1)))
            .collect()
    }

    /// Coordinates of a closed class in the `C_ij` basis: the entries at the
    /// basis points.
    pub fn coordinates(&self, c: &CurveClass) -> Vec<i64> {
        self.basis_points().iter().map(|&(i, j)| c.coeffs()[self.ray_of(i, j)]).collect()
    }

    pub fn wall_classes(&self) -> Result<Vec<CurveClass>> {
        self.fan.interior_walls().into_iter().map(|w| self.fan.curve_class_from_wall(w)).collect()
    }
}

pub fn curve_basis_g(k: i64, l: i64) -> Result<Vec<NamedCurve>> {
    Ok(GGeometry::new(k, l)?.basis)
}

/// `C_ij` for every lattice point of the rectangle, keyed by `(i, j)`.
pub fn curve_basis_o(k: i64, l: i64) -> Result<BTreeMap<(usize, usize), CurveClass>> {
    let g = OGeometry::new(k, l)?;
    Ok(g.points.iter().map(|&(i, j)| ((i, j), g.c_class(i, j))).collect())
}

/// Outcome of comparing the wall-relation classes of the fixed resolution
/// with the closed-form intersection rules.
#[derive(Debug, Clone, Serialize)]
pub struct IntersectionRuleReport {
    pub k: usize,
    pub l: usize,
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Checks, over every ray including the compactifying ones:
/// `C_i.D_{i-1} = C_i.D_{i+1} = 1`, `C_i.D_i = -2`;
/// `C_0.D_{k-1} = C_0.D_{k+2} = 1`, `C_0.D_k = C_0.D_{k+1} = -1`;
/// `E_j.D_{k+j} = E_j.D_{k+j+2} = 1`, `E_j.D_{k+j+1} = -2`;
/// all other intersections zero.
pub fn intersection_rules_check(k: i64, l: i64) -> Result<IntersectionRuleReport> {
    let g = GGeometry::new(k, l)?;
    let (k, l) = (g.k, g.l);
    let n = g.n_rays();
    let expect = |entries: &[(usize, i64)]| {
        let mut v = vec![0i64; n];
        for &(i, x) in entries {
            v[i] = x;
        }
        v
    };
    let mut failures = Vec::new();
    let mut check = |name: &str, class: &CurveClass, want: Vec<i64>| {
        let got: Vec<i64> = (0..n).map(|r| intersection_number(class, r)).collect();
        if got != want {
            failures.push(format!("{name}: got {got:?}, expected {want:?}"));
        }
        if c1_degree(class) != 0 {
            failures.push(format!("{name}: c1 degree {}", c1_degree(class)));
        }
    };
    for i in 1..k {
        check(&format!("C{i}"), &g.basis[g.c_index(i)].class, expect(&[(i - 1, 1), (i, -2), (i + 1, 1)]));
    }
    check("C0", &g.basis[g.c0_index()].class, expect(&[(k - 1, 1), (k, -1), (k + 1, -1), (k + 2, 1)]));
    for j in 1..l {
        check(&format!("E{j}"), &g.basis[g.e_index(j)].class, expect(&[(k + j, 1), (k + j + 1, -2), (k + j + 2, 1)]));
    }
    Ok(IntersectionRuleReport { k, l, ok: failures.is_empty(), failures })
}

/// Metadata note attached to every orbifolded-conifold output.
pub const STAIRCASE_NOTE: &str =
    "triangulation of the rectangle fixed to the staircase: unit squares cut along their (1,1) diagonals";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_maximal_triangulations;

    #[test]
    fn conifold_fans() {
        for t in enumerate_maximal_triangulations(&make_trapezoid(1, 1).unwrap(), 16).unwrap() {
            let f = fan_over_triangulation(&t);
            assert_eq!(f.rays().len(), 4);
            assert_eq!(f.cones3().len(), 2);
            assert!(f.is_unimodular());
        }
        let f = fan_over_triangulation(&fixed_trapezoid_triangulation(4, 2).unwrap());
        assert_eq!((f.rays().len(), f.cones3().len()), (8, 6));
        let o = fan_over_triangulation(&staircase_rectangle_triangulation(5, 3).unwrap());
        assert_eq!(o.rays().len(), 24);
        assert_eq!(o.label(o.rays().len() - 1), "D_{5,3}");
    }

    #[test]
    fn compactified_fan_is_complete() {
        for k in 1..=5 {
            for l in 1..=k {
                for t in enumerate_maximal_triangulations(&make_trapezoid(k, l).unwrap(), 16).unwrap() {
                    let f = compactify_g_fan(&fan_over_triangulation(&t), k, l).unwrap();
                    assert_eq!(f.rays().len() as i64, k + l + 6);
                    assert!(f.is_unimodular());
                    assert!(f.is_closed_surface());
                    assert_eq!(f.cones3().len() as i64, 2 * (k + l + 6) - 4);
                    for x in [
                        [1009, 2003, 3001],
                        [-3001, 5003, 7001],
                        [2003, -7001, 1009],
                        [5003, 1009, -11003],
                        [-1009, -1013, -1019],
                        [7001, 3001, -2003],
                        [-7001, 3001, -2003],
                        [9001, 1013, 1019],
                    ] {
                        assert_eq!(f.cones_containing(x).len(), 1, "direction {x:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn compactifying_labels() {
        let g = GGeometry::new(1, 1).unwrap();
        assert_eq!(g.n_rays(), 8);
        assert_eq!(g.fan.rays()[g.fan.ray_index(LABEL_Z_INF).unwrap()], [0, 0, -1]);
        assert_eq!(g.fan.rays()[g.fan.ray_index(LABEL_W_INF).unwrap()], [0, -1, -1]);
        assert_eq!(g.fan.rays()[g.fan.ray_index(LABEL_XI_0).unwrap()], [1, 0, 0]);
        assert_eq!(g.fan.rays()[g.fan.ray_index(LABEL_XI_INF).unwrap()], [-1, 0, 0]);
        for (i, l) in g.fan.labels().iter().enumerate() {
            assert_eq!(g.fan.ray_index(l).unwrap(), i);
        }
    }

    #[test]
    fn boundary_wall_is_rejected() {
        let f = fan_over_triangulation(&fixed_trapezoid_triangulation(2, 1).unwrap());
        assert!(matches!(f.curve_class_from_wall([0, 1]), Err(ToricError::NotInteriorWall(_, 1))));
    }

    #[test]
    fn basis_rules_k4_l2() {
        let g = GGeometry::new(4, 2).unwrap();
        assert_eq!(g.basis.len(), 5);
        assert_eq!(g.var_names(), ["C1", "C2", "C3", "C0", "E1"]);
        let c1 = &g.basis[0].class;
        assert_eq!(intersection_number(c1, 0), 1);
        assert_eq!(intersection_number(c1, 1), -2);
        assert_eq!(intersection_number(c1, 2), 1);
        assert_eq!(intersection_number(c1, g.fan.ray_index(LABEL_XI_0).unwrap()), 0);
        let c0 = &g.basis[3].class;
        assert_eq!(&c0.coeffs()[..8], &[0, 0, 0, 1, -1, -1, 1, 0]);
        let e1 = &g.basis[4].class;
        assert_eq!(&e1.coeffs()[..8], &[0, 0, 0, 0, 0, 1, -2, 1]);
        for b in &g.basis {
            assert_eq!(c1_degree(&b.class), 0);
            assert_eq!(g.coordinates(&b.class).unwrap().iter().filter(|&&x| x != 0).count(), 1);
        }
        let mixed = g.combine(&[2, -1, 0, 3, 1]);
        assert_eq!(g.coordinates(&mixed).unwrap(), vec![2, -1, 0, 3, 1]);
    }

    #[test]
    fn intersection_rules_hold() {
        for k in 1..=5 {
            for l in 1..=k {
                let r = intersection_rules_check(k, l).unwrap();
                assert!(r.ok, "{:?}", r.failures);
            }
        }
    }

    #[test]
    fn o_classes() {
        let b = curve_basis_o(1, 1).unwrap();
        assert!(b[&(0, 0)].is_zero() && b[&(1, 0)].is_zero() && b[&(0, 1)].is_zero());
        assert_eq!(b[&(1, 1)].coeffs(), &[1, -1, -1, 1]);
        for (k, l) in [(2, 1), (3, 2), (4, 3)] {
            let g = OGeometry::new(k, l).unwrap();
            assert_eq!(g.basis_points().len() as i64, (k + 1) * (l + 1) - 3);
            for w in g.wall_classes().unwrap() {
                assert_eq!(c1_degree(&w), 0);
                // the coordinates reconstruct the class
                let coords = g.coordinates(&w);
                let mut rebuilt = vec![0i64; g.points.len()];
                for (&(i, j), t) in g.basis_points().iter().zip(&coords) {
                    for (r, x) in rebuilt.iter_mut().zip(g.c_class(i, j).coeffs()) {
                        *r += t * x;
                    }
                }
                assert_eq!(rebuilt, w.coeffs());
            }
        }
    }

    #[test]
    fn fan_json() {
        let f = fan_over_triangulation(&fixed_trapezoid_triangulation(1, 1).unwrap());
        let j = serde_json::to_value(&f).unwrap();
        assert_eq!(j["rays"][3], serde_json::json!([1, 1, 1]));
        assert_eq!(j["labels"]["D_2"], 2);
    }
}
