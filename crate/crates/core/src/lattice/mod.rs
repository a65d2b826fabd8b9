//! Lattice polygons in the plane, their unimodular triangulations, Minkowski
//! sums, and the counting formulas attached to the trapezoid and rectangle
//! families.

mod flip;
mod triangulate;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use flip::enumerate_by_flips;
pub use triangulate::enumerate_maximal_triangulations;

/// Default cap on the number of lattice points accepted by exhaustive
/// triangulation enumeration.
pub const DEFAULT_ENUMERATION_GUARD: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid parameters k={k}, l={l}: need k >= l >= 1")]
    InvalidParameters { k: i64, l: i64 },
    #[error("degenerate polygon: {0}")]
    Degenerate(String),
    #[error("polygon is not convex")]
    NotConvex,
    #[error("triangle {0:?} is not unimodular")]
    NotUnimodular([LatticePoint; 3]),
    #[error("polygon with {points} lattice points is too large for exhaustive enumeration (guard {guard})")]
    TooLarge { points: usize, guard: usize },
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// The two polygon families: trapezoids for generalized conifolds and
/// rectangles for orbifolded conifolds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "G")]
    Generalized,
    #[serde(rename = "O")]
    Orbifolded,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Generalized => write!(f, "G"),
            Family::Orbifolded => write!(f, "O"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "G" | "g" => Ok(Family::Generalized),
            "O" | "o" => Ok(Family::Orbifolded),
            other => Err(format!("unknown family {other:?}, expected G or O")),
        }
    }
}

/// Checks the normalization `k >= l >= 1` shared by both families.
pub fn check_kl(k: i64, l: i64) -> Result<(usize, usize)> {
    if l < 1 || k < l {
        return Err(LatticeError::InvalidParameters { k, l });
    }
    Ok((k as usize, l as usize))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }

    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([x, y]: [i64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `o, a, b`.
pub(crate) fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    let (u, v) = (a.sub(o), b.sub(o));
    u.x * v.y - u.y * v.x
}

/// A convex lattice polygon with counterclockwise extreme vertices, starting
/// from the lexicographically smallest one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr")]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

#[derive(Deserialize)]
struct PolygonRepr {
    vertices: Vec<LatticePoint>,
}

impl TryFrom<PolygonRepr> for LatticePolygon {
    type Error = LatticeError;

    fn try_from(r: PolygonRepr) -> Result<Self> {
        LatticePolygon::new(r.vertices)
    }
}

impl LatticePolygon {
    /// Builds a polygon from its extreme vertices, given in either
    /// orientation. Collinear consecutive vertices and non-convex input are
    /// rejected.
    pub fn new(mut vertices: Vec<LatticePoint>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(LatticeError::Degenerate(format!("{n} vertices")));
        }
        let turns: Vec<i64> = (0..n)
            .map(|i| cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]))
            .collect();
        if turns.contains(&0) {
            return Err(LatticeError::Degenerate("collinear or repeated vertices".into()));
        }
        if turns.iter().all(|&t| t < 0) {
            vertices.reverse();
        } else if !turns.iter().all(|&t| t > 0) {
            return Err(LatticeError::NotConvex);
        }
        // A star-shaped turn sequence (e.g. a pentagram) turns the same way
        // at every vertex but winds more than once.
        let winding: i64 = (1..n - 1)
            .map(|i| cross(vertices[0], vertices[i], vertices[i + 1]))
            .sum();
        let boundary: i64 = (1..n - 1)
            .map(|i| cross(vertices[0], vertices[i], vertices[i + 1]).abs())
            .sum();
        if winding != boundary {
            return Err(LatticeError::NotConvex);
        }
        let start = (0..n).min_by_key(|&i| vertices[i]).unwrap();
        vertices.rotate_left(start);
        Ok(Self { vertices })
    }

    /// Convex hull of an arbitrary point set; errors when the hull has empty
    /// interior.
    pub fn hull_of(points: &[LatticePoint]) -> Result<Self> {
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(LatticeError::Degenerate(format!(
                "hull of {} points has {} vertices",
                points.len(),
                hull.len()
            )));
        }
        Self::new(hull)
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Twice the Euclidean area, i.e. the number of unimodular triangles in
    /// any maximal triangulation.
    pub fn twice_area(&self) -> i64 {
        let v = &self.vertices;
        (1..v.len() - 1).map(|i| cross(v[0], v[i], v[i + 1])).sum()
    }

    /// Closed containment test.
    pub fn contains(&self, p: LatticePoint) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0)
    }

    pub fn contains_strictly(&self, p: LatticePoint) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) > 0)
    }

    fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let xs = self.vertices.iter().map(|p| p.x);
        let ys = self.vertices.iter().map(|p| p.y);
        (
            LatticePoint::new(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            LatticePoint::new(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    /// All lattice points of the closed polygon, sorted by `(y, x)`.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        for y in lo.y..=hi.y {
            for x in lo.x..=hi.x {
                let p = LatticePoint::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Boundary lattice points in counterclockwise order, starting at the
    /// first vertex.
    pub fn boundary_points(&self) -> Vec<LatticePoint> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let d = b.sub(a);
            let g = num_integer::gcd(d.x, d.y).abs();
            for t in 0..g {
                out.push(LatticePoint::new(a.x + d.x / g * t, a.y + d.y / g * t));
            }
        }
        out
    }

    pub fn interior_lattice_point_count(&self) -> usize {
        let (lo, hi) = self.bounding_box();
        let mut count = 0;
        for y in lo.y..=hi.y {
            for x in lo.x..=hi.x {
                if self.contains_strictly(LatticePoint::new(x, y)) {
                    count += 1;
                }
            }
        }
        count
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        write!(f, "conv{{{}}}", parts.join(","))
    }
}

/// Andrew's monotone chain; drops collinear boundary points, returns
/// counterclockwise order.
pub(crate) fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The trapezoid with vertices `(0,0), (k,0), (l,1), (0,1)`.
pub fn make_trapezoid(k: i64, l: i64) -> Result<LatticePolygon> {
    check_kl(k, l)?;
    LatticePolygon::new(vec![
        LatticePoint::new(0, 0),
        LatticePoint::new(k, 0),
        LatticePoint::new(l, 1),
        LatticePoint::new(0, 1),
    ])
}

/// The rectangle `[0,k] x [0,l]`.
pub fn make_rectangle(k: i64, l: i64) -> Result<LatticePolygon> {
    check_kl(k, l)?;
    LatticePolygon::new(vec![
        LatticePoint::new(0, 0),
        LatticePoint::new(k, 0),
        LatticePoint::new(k, l),
        LatticePoint::new(0, l),
    ])
}

pub fn make_polygon(family: Family, k: i64, l: i64) -> Result<LatticePolygon> {
    match family {
        Family::Generalized => make_trapezoid(k, l),
        Family::Orbifolded => make_rectangle(k, l),
    }
}

/// A lattice triangle of normalized area one, corners sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "[LatticePoint; 3]")]
pub struct StandardTriangle {
    corners: [LatticePoint; 3],
}

impl From<StandardTriangle> for [LatticePoint; 3] {
    fn from(t: StandardTriangle) -> Self {
        t.corners
    }
}

impl StandardTriangle {
    pub fn new(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Result<Self> {
        let mut corners = [a, b, c];
        corners.sort();
        if cross(a, b, c).abs() != 1 {
            return Err(LatticeError::NotUnimodular(corners));
        }
        Ok(Self { corners })
    }

    pub fn corners(&self) -> [LatticePoint; 3] {
        self.corners
    }

    /// Corners in counterclockwise order.
    pub fn ccw(&self) -> [LatticePoint; 3] {
        let [a, b, c] = self.corners;
        if cross(a, b, c) > 0 {
            [a, b, c]
        } else {
            [a, c, b]
        }
    }

    pub fn has_corner(&self, p: LatticePoint) -> bool {
        self.corners.contains(&p)
    }
}

/// A subdivision of a lattice polygon into standard triangles using every
/// lattice point. Triangles are kept sorted, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaximalTriangulation {
    triangles: Vec<StandardTriangle>,
    parent: LatticePolygon,
}

#[derive(Serialize, Deserialize)]
struct TriangulationRepr {
    triangles: Vec<[LatticePoint; 3]>,
}

impl Serialize for MaximalTriangulation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TriangulationRepr {
            triangles: self.triangles.iter().map(|t| t.corners).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MaximalTriangulation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TriangulationRepr::deserialize(d)?;
        let corners: Vec<LatticePoint> = repr.triangles.iter().flatten().copied().collect();
        let parent = LatticePolygon::hull_of(&corners).map_err(serde::de::Error::custom)?;
        let triangles = repr
            .triangles
            .iter()
            .map(|[a, b, c]| StandardTriangle::new(*a, *b, *c))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        MaximalTriangulation::new(parent, triangles).map_err(serde::de::Error::custom)
    }
}

impl MaximalTriangulation {
    /// Validating constructor.
    pub fn new(parent: LatticePolygon, triangles: Vec<StandardTriangle>) -> Result<Self> {
        let t = Self::new_unchecked(parent, triangles);
        t.validate()?;
        Ok(t)
    }

    pub(crate) fn new_unchecked(parent: LatticePolygon, mut triangles: Vec<StandardTriangle>) -> Self {
        triangles.sort();
        Self { triangles, parent }
    }

    pub fn triangles(&self) -> &[StandardTriangle] {
        &self.triangles
    }

    pub fn parent(&self) -> &LatticePolygon {
        &self.parent
    }

    /// Rechecks the defining properties from scratch: unimodularity,
    /// containment, pairwise interior disjointness, area coverage and use of
    /// every lattice point.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LatticeError::InvalidTriangulation(m));
        for t in &self.triangles {
            let [a, b, c] = t.corners;
            if cross(a, b, c).abs() != 1 {
                return Err(LatticeError::NotUnimodular(t.corners));
            }
            if !t.corners.iter().all(|&p| self.parent.contains(p)) {
                return bad(format!("triangle {:?} leaves the polygon", t.corners));
            }
        }
        for (i, s) in self.triangles.iter().enumerate() {
            for t in &self.triangles[i + 1..] {
                if !interiors_disjoint(&s.ccw(), &t.ccw()) {
                    return bad(format!("triangles {:?} and {:?} overlap", s.corners, t.corners));
                }
            }
        }
        if self.triangles.len() as i64 != self.parent.twice_area() {
            return bad(format!(
                "{} triangles but normalized area {}",
                self.triangles.len(),
                self.parent.twice_area()
            ));
        }
        for p in self.parent.lattice_points() {
            if !self.triangles.iter().any(|t| t.has_corner(p)) {
                return bad(format!("lattice point {p} unused"));
            }
        }
        Ok(())
    }

    /// Interior edges (shared by two triangles) with their two opposite
    /// corners.
    pub fn interior_edges(&self) -> Vec<([LatticePoint; 2], [LatticePoint; 2])> {
        let mut map: std::collections::BTreeMap<[LatticePoint; 2], Vec<LatticePoint>> =
            std::collections::BTreeMap::new();
        for t in &self.triangles {
            let c = t.corners;
            for (i, j, o) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                map.entry([c[i], c[j]]).or_default().push(c[o]);
            }
        }
        map.into_iter()
            .filter(|(_, opp)| opp.len() == 2)
            .map(|(e, opp)| (e, [opp[0], opp[1]]))
            .collect()
    }
}

/// Separating-axis test on closed half-planes for two counterclockwise
/// triangles.
fn interiors_disjoint(s: &[LatticePoint; 3], t: &[LatticePoint; 3]) -> bool {
    let separated_by = |p: &[LatticePoint; 3], q: &[LatticePoint; 3]| {
        (0..3).any(|i| {
            let (a, b) = (p[i], p[(i + 1) % 3]);
            q.iter().all(|&z| cross(a, b, z) <= 0)
        })
    };
    separated_by(s, t) || separated_by(t, s)
}

/// The exact count `C(k+l, k)` of crepant resolutions of the generalized
/// conifold.
pub fn triangulation_count_formula(k: i64, l: i64) -> Result<BigUint> {
    let (k, l) = check_kl(k, l)?;
    Ok(num_integer::binomial(BigUint::from(k + l), BigUint::from(k)))
}

/// A Minkowski summand: a lattice segment or a full polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Summand {
    Segment(LatticePoint, LatticePoint),
    Polygon(LatticePolygon),
}

impl Summand {
    fn points(&self) -> Vec<LatticePoint> {
        match self {
            Summand::Segment(a, b) => vec![*a, *b],
            Summand::Polygon(p) => p.vertices().to_vec(),
        }
    }
}

impl From<LatticePolygon> for Summand {
    fn from(p: LatticePolygon) -> Self {
        Summand::Polygon(p)
    }
}

/// Exact Minkowski sum. The result must be two-dimensional.
pub fn minkowski_sum(summands: &[Summand]) -> Result<LatticePolygon> {
    let mut acc = vec![LatticePoint::new(0, 0)];
    for s in summands {
        let pts = s.points();
        let sums: Vec<LatticePoint> = acc
            .iter()
            .flat_map(|a| pts.iter().map(move |b| a.add(*b)))
            .collect();
        acc = convex_hull(&sums);
    }
    LatticePolygon::hull_of(&acc)
}

/// `k` copies of `[0,1] x {0}` and `l` copies of `{0} x [0,1]`.
pub fn unit_segment_summands(k: usize, l: usize) -> Vec<Summand> {
    let o = LatticePoint::new(0, 0);
    let mut out = vec![Summand::Segment(o, LatticePoint::new(1, 0)); k];
    out.extend(vec![Summand::Segment(o, LatticePoint::new(0, 1)); l]);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeformationDims {
    pub complex_dim: u64,
    pub kahler_dim: u64,
}

/// Dimensions of the complex and Kähler deformation spaces.
pub fn deformation_dimensions(family: Family, k: i64, l: i64) -> Result<DeformationDims> {
    let (k, l) = check_kl(k, l)?;
    let (k, l) = (k as u64, l as u64);
    let grid = (k + 1) * (l + 1) - 3;
    let edge = (k + 1) + (l + 1) - 3;
    Ok(match family {
        Family::Generalized => DeformationDims { complex_dim: grid, kahler_dim: edge },
        Family::Orbifolded => DeformationDims { complex_dim: edge, kahler_dim: grid },
    })
}

/// Generators of the dual cone of the cone over the polygon.
pub fn dual_cone_generators(family: Family, k: i64, l: i64) -> Result<[[i64; 3]; 4]> {
    check_kl(k, l)?;
    Ok(match family {
        Family::Generalized => [[1, 0, 0], [0, -1, 1], [-1, l - k, k], [0, 1, 0]],
        Family::Orbifolded => [[1, 0, 0], [0, -1, l], [-1, 0, k], [0, 1, 0]],
    })
}

/// Generators pair with every lattice point of the polygon (lifted to height
/// one) non-negatively, and each vanishes on an edge.
pub fn dual_cone_is_valid(polygon: &LatticePolygon, gens: &[[i64; 3]]) -> bool {
    let pts = polygon.lattice_points();
    gens.iter().all(|g| {
        let vals: Vec<i64> = pts.iter().map(|p| g[0] * p.x + g[1] * p.y + g[2]).collect();
        vals.iter().all(|&v| v >= 0) && vals.iter().filter(|&&v| v == 0).count() >= 2
    })
}

/// The fixed crepant resolution of the generalized conifold: `(0,1)` joined
/// to every bottom point and `(k,0)` joined to every top point.
pub fn fixed_trapezoid_triangulation(k: i64, l: i64) -> Result<MaximalTriangulation> {
    let parent = make_trapezoid(k, l)?;
    let p = LatticePoint::new;
    let mut tris = Vec::new();
    for i in 0..k {
        tris.push(StandardTriangle::new(p(0, 1), p(i, 0), p(i + 1, 0))?);
    }
    for j in 0..l {
        tris.push(StandardTriangle::new(p(k, 0), p(j, 1), p(j + 1, 1))?);
    }
    MaximalTriangulation::new(parent, tris)
}

/// The staircase triangulation of `[0,k] x [0,l]`: unit squares cut along
/// their `(1,1)` diagonals.
pub fn staircase_rectangle_triangulation(k: i64, l: i64) -> Result<MaximalTriangulation> {
    let parent = make_rectangle(k, l)?;
    let p = LatticePoint::new;
    let mut tris = Vec::new();
    for i in 0..k {
        for j in 0..l {
            tris.push(StandardTriangle::new(p(i, j), p(i + 1, j), p(i + 1, j + 1))?);
            tris.push(StandardTriangle::new(p(i, j), p(i + 1, j + 1), p(i, j + 1))?);
        }
    }
    MaximalTriangulation::new(parent, tris)
}
