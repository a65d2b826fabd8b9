//! Exhaustive enumeration of maximal triangulations by advancing-front
//! backtracking: the smallest uncovered oriented edge is always closed off
//! by a unimodular triangle on its left.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use super::{
    cross, LatticeError, LatticePoint, LatticePolygon, MaximalTriangulation, Result,
    StandardTriangle,
};

#[derive(Clone)]
struct Front<'a> {
    pts: &'a [LatticePoint],
    /// Oriented edges whose left side is still uncovered.
    open: BTreeSet<(usize, usize)>,
    /// Every segment drawn so far, as `(min, max)`.
    segments: HashSet<(usize, usize)>,
    seg_list: Vec<(usize, usize)>,
    triangles: Vec<[usize; 3]>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn properly_cross(a: LatticePoint, b: LatticePoint, c: LatticePoint, d: LatticePoint) -> bool {
    let s1 = cross(a, b, c).signum();
    let s2 = cross(a, b, d).signum();
    let s3 = cross(c, d, a).signum();
    let s4 = cross(c, d, b).signum();
    s1 * s2 < 0 && s3 * s4 < 0
}

impl<'a> Front<'a> {
    fn new(pts: &'a [LatticePoint], polygon: &LatticePolygon) -> Self {
        let index = |p: LatticePoint| pts.iter().position(|&q| q == p).unwrap();
        let boundary = polygon.boundary_points();
        let mut f = Front {
            pts,
            open: BTreeSet::new(),
            segments: HashSet::new(),
            seg_list: Vec::new(),
            triangles: Vec::new(),
        };
        for i in 0..boundary.len() {
            let (u, v) = (index(boundary[i]), index(boundary[(i + 1) % boundary.len()]));
            f.open.insert((u, v));
            f.segments.insert(key(u, v));
            f.seg_list.push(key(u, v));
        }
        f
    }

    /// Candidate apexes closing the edge `a -> b`.
    fn candidates(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.pts.len())
            .filter(|&c| cross(self.pts[a], self.pts[b], self.pts[c]) == 1)
            .collect()
    }

    /// Places the triangle `a, b, c` (counterclockwise, `a -> b` open) if it
    /// fits against the current front.
    fn place(&self, a: usize, b: usize, c: usize) -> Option<Front<'a>> {
        let mut next = self.clone();
        next.open.remove(&(a, b));
        for (u, v) in [(b, c), (c, a)] {
            if next.open.remove(&(u, v)) {
                continue;
            }
            if next.segments.contains(&key(u, v)) {
                return None;
            }
            let (pu, pv) = (self.pts[u], self.pts[v]);
            if next
                .seg_list
                .iter()
                .any(|&(s, t)| properly_cross(pu, pv, self.pts[s], self.pts[t]))
            {
                return None;
            }
            next.segments.insert(key(u, v));
            next.seg_list.push(key(u, v));
            next.open.insert((v, u));
        }
        next.triangles.push([a, b, c]);
        Some(next)
    }

    fn extend(self, out: &mut Vec<Vec<[usize; 3]>>) {
        let Some(&(a, b)) = self.open.iter().next() else {
            out.push(self.triangles);
            return;
        };
        for c in self.candidates(a, b) {
            if let Some(next) = self.place(a, b, c) {
                next.extend(out);
            }
        }
    }
}

/// All maximal triangulations of `polygon`, deduplicated and in canonical
/// (sorted) order. Polygons with more than `guard` lattice points are
/// refused.
pub fn enumerate_maximal_triangulations(
    polygon: &LatticePolygon,
    guard: usize,
) -> Result<Vec<MaximalTriangulation>> {
    let pts = polygon.lattice_points();
    if pts.len() > guard {
        return Err(LatticeError::TooLarge { points: pts.len(), guard });
    }
    let root = Front::new(&pts, polygon);
    let &(a, b) = root.open.iter().next().expect("polygon has boundary edges");
    let branches: Vec<Vec<Vec<[usize; 3]>>> = root
        .candidates(a, b)
        .into_par_iter()
        .filter_map(|c| root.place(a, b, c))
        .map(|f| {
            let mut out = Vec::new();
            f.extend(&mut out);
            out
        })
        .collect();
    let canonical: BTreeSet<Vec<StandardTriangle>> = branches
        .into_iter()
        .flatten()
        .map(|tris| {
            let mut v: Vec<StandardTriangle> = tris
                .iter()
                .map(|&[a, b, c]| {
                    StandardTriangle::new(pts[a], pts[b], pts[c]).expect("placed triangles are unimodular")
                })
                .collect();
            v.sort();
            v
        })
        .collect();
    Ok(canonical
        .into_iter()
        .map(|tris| MaximalTriangulation::new_unchecked(polygon.clone(), tris))
        .collect())
}
