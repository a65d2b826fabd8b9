//! Small exact integer linear algebra.

pub type V3 = [i64; 3];

pub fn det3(a: V3, b: V3, c: V3) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Coefficients `x` with `x0 a + x1 b + x2 c = t`, when they are integers.
pub fn solve3(a: V3, b: V3, c: V3, t: V3) -> Option<V3> {
    let d = det3(a, b, c);
    if d == 0 {
        return None;
    }
    let n = [det3(t, b, c), det3(a, t, c), det3(a, b, t)];
    if n.iter().any(|x| x % d != 0) {
        return None;
    }
    Some([n[0] / d, n[1] / d, n[2] / d])
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| num_integer::gcd(g, x))
}

/// Square integer matrix, row-major.
pub type Mat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_vec(m: &Mat, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().enumerate().map(|(k, x)| x * b[k][j]).sum()).collect())
        .collect()
}

/// Completes a primitive row vector `y` to a unimodular matrix `L` whose
/// first row is `y`; returns `(L, L^{-1})`.
pub fn unimodular_completion(y: &[i64]) -> Option<(Mat, Mat)> {
    let n = y.len();
    if gcd_all(y).abs() != 1 {
        return None;
    }
    // Column operations U (tracked with inverse) reduce y to e_0: y U = e_0.
    // Then L = U^{-1} has first row y and L^{-1} = U.
    let mut row = y.to_vec();
    let mut u = identity(n);
    let mut u_inv = identity(n);
    // col_j += t col_i  on U; inverse: row_i -= t row_j on U^{-1}
    fn add_col(row: &mut [i64], u: &mut Mat, u_inv: &mut Mat, j: usize, i: usize, t: i64) {
        row[j] += t * row[i];
        for r in u.iter_mut() {
            r[j] += t * r[i];
        }
        let rj = u_inv[j].clone();
        for (x, y) in u_inv[i].iter_mut().zip(rj) {
            *x -= t * y;
        }
    }
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| row[i] != 0).collect();
        if nz.len() == 1 {
            break;
        }
        let p = *nz.iter().min_by_key(|&&i| row[i].abs()).unwrap();
        for &j in &nz {
            if j != p {
                let t = row[j].div_euclid(row[p]);
                add_col(&mut row, &mut u, &mut u_inv, j, p, -t);
            }
        }
    }
    let p = (0..n).find(|&i| row[i] != 0).unwrap();
    if row[p] == -1 {
        for r in u.iter_mut() {
            r[p] = -r[p];
        }
        for x in u_inv[p].iter_mut() {
            *x = -*x;
        }
        row[p] = 1;
    }
    if p != 0 {
        for r in u.iter_mut() {
            r.swap(0, p);
        }
        u_inv.swap(0, p);
    }
    // y U = e_0, so L = U^{-1} has first row y.
    Some((u_inv, u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cramer() {
        assert_eq!(solve3([1, 0, 0], [0, 1, 0], [0, 0, 1], [3, -2, 5]), Some([3, -2, 5]));
        assert_eq!(solve3([2, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 0]), None);
    }

    #[test]
    fn completion() {
        for y in [vec![3, 5, 7], vec![1, 0, 0], vec![0, -1], vec![6, 10, 15], vec![4, 4, 1, 9]] {
            let (l, li) = unimodular_completion(&y).unwrap();
            assert_eq!(l[0], y);
            assert_eq!(mat_mul(&l, &li), identity(y.len()));
        }
        assert!(unimodular_completion(&[2, 4]).is_none());
    }
}
