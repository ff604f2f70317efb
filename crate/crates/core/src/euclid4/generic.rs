//! Geometry formulas written once over [`Scalar`], so the same code gives
//! values (`f64`) and exact first derivatives ([`Jet`](crate::Jet)).

use crate::scalar::Scalar;

pub type Vec4<S> = [S; 4];

fn m<S: Scalar>(a: &S, b: &S) -> S {
    a.clone() * b.clone()
}

pub fn constant4<S: Scalar>(p: &[f64; 4]) -> Vec4<S> {
    p.map(S::constant)
}

pub fn sub<S: Scalar>(a: &Vec4<S>, b: &Vec4<S>) -> Vec4<S> {
    core::array::from_fn(|i| a[i].clone() - b[i].clone())
}

pub fn add<S: Scalar>(a: &Vec4<S>, b: &Vec4<S>) -> Vec4<S> {
    core::array::from_fn(|i| a[i].clone() + b[i].clone())
}

pub fn scale<S: Scalar>(k: &S, a: &Vec4<S>) -> Vec4<S> {
    core::array::from_fn(|i| m(k, &a[i]))
}

pub fn dot<S: Scalar>(a: &Vec4<S>, b: &Vec4<S>) -> S {
    m(&a[0], &b[0]) + m(&a[1], &b[1]) + m(&a[2], &b[2]) + m(&a[3], &b[3])
}

pub fn norm<S: Scalar>(a: &Vec4<S>) -> S {
    dot(a, a).sqrt()
}

/// Determinant of the 4×4 matrix with the given rows.
pub fn det4<S: Scalar>(r: [&Vec4<S>; 4]) -> S {
    let [a, b, c, d] = r;
    let s0 = m(&a[0], &b[1]) - m(&b[0], &a[1]);
    let s1 = m(&a[0], &b[2]) - m(&b[0], &a[2]);
    let s2 = m(&a[0], &b[3]) - m(&b[0], &a[3]);
    let s3 = m(&a[1], &b[2]) - m(&b[1], &a[2]);
    let s4 = m(&a[1], &b[3]) - m(&b[1], &a[3]);
    let s5 = m(&a[2], &b[3]) - m(&b[2], &a[3]);
    let c5 = m(&c[2], &d[3]) - m(&d[2], &c[3]);
    let c4 = m(&c[1], &d[3]) - m(&d[1], &c[3]);
    let c3 = m(&c[1], &d[2]) - m(&d[1], &c[2]);
    let c2 = m(&c[0], &d[3]) - m(&d[0], &c[3]);
    let c1 = m(&c[0], &d[2]) - m(&d[0], &c[2]);
    let c0 = m(&c[0], &d[1]) - m(&d[0], &c[1]);
    m(&s0, &c5) - m(&s1, &c4) + m(&s2, &c3) + m(&s3, &c2) - m(&s4, &c1) + m(&s5, &c0)
}

fn det3<S: Scalar>(r: [[&S; 3]; 3]) -> S {
    let [a, b, c] = r;
    m(a[0], &(m(b[1], c[2]) - m(b[2], c[1]))) - m(a[1], &(m(b[0], c[2]) - m(b[2], c[0])))
        + m(a[2], &(m(b[0], c[1]) - m(b[1], c[0])))
}

/// The vector `n` with `n · x = det(a, b, c, x)` for every `x`.
pub fn cross4<S: Scalar>(a: &Vec4<S>, b: &Vec4<S>, c: &Vec4<S>) -> Vec4<S> {
    core::array::from_fn(|i| {
        let cols: [usize; 3] = match i {
            0 => [1, 2, 3],
            1 => [0, 2, 3],
            2 => [0, 1, 3],
            _ => [0, 1, 2],
        };
        let minor = det3([cols.map(|j| &a[j]), cols.map(|j| &b[j]), cols.map(|j| &c[j])]);
        // Cofactor of entry (3, i) of the matrix with rows a, b, c, x.
        if (3 + i) % 2 == 0 {
            minor
        } else {
            -minor
        }
    })
}

/// Gram determinant `|u|²|v|² − (u·v)²`.
pub fn gram2<S: Scalar>(u: &Vec4<S>, v: &Vec4<S>) -> S {
    let uv = dot(u, v);
    m(&dot(u, u), &dot(v, v)) - m(&uv, &uv)
}

/// Twice the area of triangle `abc`.
pub fn double_area<S: Scalar>(a: &Vec4<S>, b: &Vec4<S>, c: &Vec4<S>) -> S {
    gram2(&sub(b, a), &sub(c, a)).sqrt()
}

/// Gram determinant of three vectors.
pub fn gram3<S: Scalar>(u: &Vec4<S>, v: &Vec4<S>, w: &Vec4<S>) -> S {
    let g = [
        [dot(u, u), dot(u, v), dot(u, w)],
        [dot(v, u), dot(v, v), dot(v, w)],
        [dot(w, u), dot(w, v), dot(w, w)],
    ];
    det3([
        [&g[0][0], &g[0][1], &g[0][2]],
        [&g[1][0], &g[1][1], &g[1][2]],
        [&g[2][0], &g[2][1], &g[2][2]],
    ])
}

/// Six times the volume of tetrahedron `abcd`.
pub fn six_volume<S: Scalar>(a: &Vec4<S>, b: &Vec4<S>, c: &Vec4<S>, d: &Vec4<S>) -> S {
    gram3(&sub(b, a), &sub(c, a), &sub(d, a)).sqrt()
}

/// `det(b−a, c−a, d−a, e−a)`, i.e. 24 times the oriented 4-volume.
pub fn det_volume<S: Scalar>(a: &Vec4<S>, b: &Vec4<S>, c: &Vec4<S>, d: &Vec4<S>, e: &Vec4<S>) -> S {
    det4([&sub(b, a), &sub(c, a), &sub(d, a), &sub(e, a)])
}

/// Signed angle between the tetrahedra `EABC` and `ABCD` across face
/// `ABC`: `atan2(s, −c)` where `c` is the inner product of the components of
/// `D−A`, `E−A` orthogonal to the face and `s = det(AB, AC, AD, AE)/2S`.
/// Equals `sign(𝒱)·(π − δ)` with `δ` the interior dihedral angle of the
/// 4-simplex at the face.
pub fn theta<S: Scalar>(e: &Vec4<S>, a: &Vec4<S>, b: &Vec4<S>, c: &Vec4<S>, d: &Vec4<S>) -> S {
    let u = sub(b, a);
    let v = sub(c, a);
    let x = sub(d, a);
    let y = sub(e, a);
    let (uu, uv, vv) = (dot(&u, &u), dot(&u, &v), dot(&v, &v));
    let g = m(&uu, &vv) - m(&uv, &uv);
    let (ux, vx, uy, vy) = (dot(&u, &x), dot(&v, &x), dot(&u, &y), dot(&v, &y));
    let proj = m(&vv, &m(&ux, &uy)) - m(&uv, &(m(&ux, &vy) + m(&vx, &uy))) + m(&uu, &m(&vx, &vy));
    let cos_part = dot(&x, &y) - proj / g.clone();
    let sin_part = det4([&u, &v, &x, &y]) / g.sqrt();
    sin_part.atan2(&(-cos_part))
}

/// Why an apex could not be placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementFailure {
    /// The face or the previous apex is degenerate.
    Degenerate,
    /// The three distances do not fit a nondegenerate tetrahedron.
    Unrealizable,
}

/// Places `D` at the given distances from `a`, `b`, `c` so that the signed
/// angle between `P a b c` and `a b c D` at face `abc` is `theta`.
#[allow(clippy::too_many_arguments)]
pub fn place_apex<S: Scalar>(
    a: &Vec4<S>,
    b: &Vec4<S>,
    c: &Vec4<S>,
    p: &Vec4<S>,
    l_ad: &S,
    l_bd: &S,
    l_cd: &S,
    theta: &S,
) -> Result<Vec4<S>, PlacementFailure> {
    let u1 = sub(b, a);
    let u2 = sub(c, a);
    let b1 = norm(&u1);
    if !(b1.value() > 0.0) {
        return Err(PlacementFailure::Degenerate);
    }
    let e1 = scale(&(S::constant(1.0) / b1.clone()), &u1);
    let c1 = dot(&u2, &e1);
    let w = sub(&u2, &scale(&c1, &e1));
    let c2 = norm(&w);
    if !(c2.value() > 1e-12 * b1.value()) {
        return Err(PlacementFailure::Degenerate);
    }
    let e2 = scale(&(S::constant(1.0) / c2.clone()), &w);
    let pp = sub(p, a);
    let q = sub(&sub(&pp, &scale(&dot(&pp, &e1), &e1)), &scale(&dot(&pp, &e2), &e2));
    let qn = norm(&q);
    if !(qn.value() > 1e-12 * b1.value()) {
        return Err(PlacementFailure::Degenerate);
    }
    let un = scale(&(S::constant(1.0) / qn), &q);
    let vn = cross4(&e1, &e2, &un).map(|x| -x);
    let two = S::constant(2.0);
    let alpha = (m(l_ad, l_ad) - m(l_bd, l_bd) + m(&b1, &b1)) / m(&two, &b1);
    let beta = (m(l_ad, l_ad) - m(l_cd, l_cd) + m(&c1, &c1) + m(&c2, &c2) - m(&two, &m(&alpha, &c1))) / m(&two, &c2);
    let h2 = m(l_ad, l_ad) - m(&alpha, &alpha) - m(&beta, &beta);
    if !(h2.value() > 0.0) {
        return Err(PlacementFailure::Unrealizable);
    }
    let h = h2.sqrt();
    let dir = add(&scale(&(-theta.cos()), &un), &scale(&theta.sin(), &vn));
    Ok(add(
        &add(a, &add(&scale(&alpha, &e1), &scale(&beta, &e2))),
        &scale(&h, &dir),
    ))
}

/// Inverse of a 4×4 matrix given by rows, via cofactors.
pub fn inverse4<S: Scalar>(mat: &[Vec4<S>; 4]) -> Option<[Vec4<S>; 4]> {
    let det = det4([&mat[0], &mat[1], &mat[2], &mat[3]]);
    if det.value() == 0.0 || !det.value().is_finite() {
        return None;
    }
    // cof[i][j] = (−1)^{i+j} · minor(i, j); inverse = cofᵀ / det.
    let minor = |i: usize, j: usize| -> S {
        let rows: [usize; 3] = core::array::from_fn(|k| if k < i { k } else { k + 1 });
        let cols: [usize; 3] = core::array::from_fn(|k| if k < j { k } else { k + 1 });
        det3(rows.map(|r| cols.map(|c| &mat[r][c])))
    };
    let inv_det = S::constant(1.0) / det;
    Some(core::array::from_fn(|r| {
        core::array::from_fn(|c| {
            let cof = minor(c, r);
            let cof = if (r + c) % 2 == 0 { cof } else { -cof };
            m(&cof, &inv_det)
        })
    }))
}

/// Product of two 4×4 matrices given by rows.
pub fn matmul4<S: Scalar>(a: &[Vec4<S>; 4], b: &[Vec4<S>; 4]) -> [Vec4<S>; 4] {
    core::array::from_fn(|r| {
        core::array::from_fn(|c| {
            m(&a[r][0], &b[0][c]) + m(&a[r][1], &b[1][c]) + m(&a[r][2], &b[2][c]) + m(&a[r][3], &b[3][c])
        })
    })
}

/// Matrix whose columns are the given vectors.
pub fn from_columns<S: Scalar>(cols: [&Vec4<S>; 4]) -> [Vec4<S>; 4] {
    core::array::from_fn(|r| core::array::from_fn(|c| cols[c][r].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn det4_matches_nalgebra() {
        let rows = [
            [0.3, -1.2, 0.5, 2.0],
            [1.1, 0.4, -0.7, 0.2],
            [-0.6, 0.9, 1.3, -0.4],
            [0.8, 0.1, -0.2, 1.7],
        ];
        let na = nalgebra::Matrix4::from_fn(|r, c| rows[r][c]);
        assert_relative_eq!(
            det4([&rows[0], &rows[1], &rows[2], &rows[3]]),
            na.determinant(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn cross4_is_orthogonal_and_represents_det() {
        let a = [0.3, -1.2, 0.5, 2.0];
        let b = [1.1, 0.4, -0.7, 0.2];
        let c = [-0.6, 0.9, 1.3, -0.4];
        let x = [0.8, 0.1, -0.2, 1.7];
        let n = cross4(&a, &b, &c);
        assert!(dot(&n, &a).abs() < 1e-14);
        assert!(dot(&n, &b).abs() < 1e-14);
        assert!(dot(&n, &c).abs() < 1e-14);
        assert_relative_eq!(dot(&n, &x), det4([&a, &b, &c, &x]), max_relative = 1e-13);
    }

    #[test]
    fn inverse4_round_trip() {
        let a = [
            [0.3, -1.2, 0.5, 2.0],
            [1.1, 0.4, -0.7, 0.2],
            [-0.6, 0.9, 1.3, -0.4],
            [0.8, 0.1, -0.2, 1.7],
        ];
        let p = matmul4(&a, &inverse4(&a).unwrap());
        for (r, row) in p.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((x - want).abs() < 1e-13);
            }
        }
    }
}
