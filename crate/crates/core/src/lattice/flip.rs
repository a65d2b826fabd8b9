//! Triangulation enumeration by breadth-first search of the flip graph. The
//! flip graph of unimodular triangulations of a lattice polygon is
//! connected, so this reaches the same set as the backtracking enumerator
//! by entirely different means.

use std::collections::{BTreeSet, VecDeque};

use super::{
    cross, LatticeError, LatticePoint, LatticePolygon, MaximalTriangulation, Result,
    StandardTriangle,
};

type Tri = [LatticePoint; 3];

fn sorted(mut t: Tri) -> Tri {
    t.sort();
    t
}

fn on_open_segment(a: LatticePoint, b: LatticePoint, p: LatticePoint) -> bool {
    cross(a, b, p) == 0
        && p != a
        && p != b
        && (p.x - a.x) * (p.x - b.x) <= 0
        && (p.y - a.y) * (p.y - b.y) <= 0
}

/// A starting triangulation: fan from the first vertex, then insert every
/// remaining lattice point by splitting the triangle or edge it lies on.
fn initial_triangulation(polygon: &LatticePolygon) -> Vec<Tri> {
    let v = polygon.vertices();
    let mut tris: Vec<Tri> = (1..v.len() - 1).map(|i| [v[0], v[i], v[i + 1]]).collect();
    for p in polygon.lattice_points() {
        if v.contains(&p) {
            continue;
        }
        let mut next = Vec::with_capacity(tris.len() + 2);
        for t in tris {
            let [a, b, c] = if cross(t[0], t[1], t[2]) > 0 { t } else { [t[0], t[2], t[1]] };
            let (ab, bc, ca) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
            if ab > 0 && bc > 0 && ca > 0 {
                next.extend([[a, b, p], [b, c, p], [c, a, p]]);
            } else if ab >= 0 && bc >= 0 && ca >= 0 {
                // p lies on an edge of this triangle
                if on_open_segment(a, b, p) {
                    next.extend([[a, p, c], [p, b, c]]);
                } else if on_open_segment(b, c, p) {
                    next.extend([[b, p, a], [p, c, a]]);
                } else if on_open_segment(c, a, p) {
                    next.extend([[c, p, b], [p, a, b]]);
                } else {
                    next.push(t);
                }
            } else {
                next.push(t);
            }
        }
        tris = next;
    }
    tris
}

fn canonical(tris: &[Tri]) -> Vec<Tri> {
    let mut v: Vec<Tri> = tris.iter().map(|&t| sorted(t)).collect();
    v.sort();
    v
}

fn flips(tris: &[Tri]) -> Vec<Vec<Tri>> {
    let mut out = Vec::new();
    for i in 0..tris.len() {
        for j in i + 1..tris.len() {
            let shared: Vec<LatticePoint> =
                tris[i].iter().filter(|p| tris[j].contains(p)).copied().collect();
            if shared.len() != 2 {
                continue;
            }
            let (a, b) = (shared[0], shared[1]);
            let c = *tris[i].iter().find(|p| !shared.contains(p)).unwrap();
            let d = *tris[j].iter().find(|p| !shared.contains(p)).unwrap();
            // strictly convex quadrilateral: a and b strictly on opposite
            // sides of cd
            if cross(c, d, a).signum() * cross(c, d, b).signum() >= 0 {
                continue;
            }
            let mut next: Vec<Tri> = tris
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != i && m != j)
                .map(|(_, t)| *t)
                .collect();
            next.push([c, d, a]);
            next.push([c, d, b]);
            out.push(canonical(&next));
        }
    }
    out
}

/// All maximal triangulations reachable by flips from a starting one, in the
/// same canonical order as [`super::enumerate_maximal_triangulations`].
pub fn enumerate_by_flips(polygon: &LatticePolygon, guard: usize) -> Result<Vec<MaximalTriangulation>> {
    let n = polygon.lattice_points().len();
    if n > guard {
        return Err(LatticeError::TooLarge { points: n, guard });
    }
    let start = canonical(&initial_triangulation(polygon));
    let mut seen: BTreeSet<Vec<Tri>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(t) = queue.pop_front() {
        for n in flips(&t) {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    seen.into_iter()
        .map(|tris| {
            let tris = tris
                .iter()
                .map(|&[a, b, c]| StandardTriangle::new(a, b, c))
                .collect::<Result<Vec<_>>>()?;
            MaximalTriangulation::new(polygon.clone(), tris)
        })
        .collect()
}
