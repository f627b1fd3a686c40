//! Convex bodies: boxes, Euclidean balls and bounded polytopes in d ≤ 3.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

const FEAS_TOL: f64 = 1e-9;

/// Halfspace `{x : ⟨normal, x⟩ ≤ offset}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Polytope { halfspaces: Vec<Halfspace> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Shape", into = "Shape")]
pub struct ConvexBody {
    shape: Shape,
    dim: usize,
    // Polytope vertices; empty for boxes and balls.
    vertices: Vec<Vec<f64>>,
}

impl TryFrom<Shape> for ConvexBody {
    type Error = Error;
    fn try_from(shape: Shape) -> Result<Self> {
        ConvexBody::new(shape)
    }
}

impl From<ConvexBody> for Shape {
    fn from(b: ConvexBody) -> Shape {
        b.shape
    }
}

impl ConvexBody {
    pub fn new(shape: Shape) -> Result<Self> {
        match &shape {
            Shape::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return Err(param("box", "lo/hi must be nonempty and of equal length"));
                }
                if lo.iter().zip(hi).any(|(l, h)| !(l < h) || !l.is_finite() || !h.is_finite()) {
                    return Err(param("box", "need finite lo < hi on every axis"));
                }
                let dim = lo.len();
                Ok(Self { shape, dim, vertices: Vec::new() })
            }
            Shape::Ball { center, radius } => {
                if center.is_empty() || !(*radius > 0.0) || !radius.is_finite() {
                    return Err(param("ball", "need nonempty center and finite radius > 0"));
                }
                let dim = center.len();
                Ok(Self { shape, dim, vertices: Vec::new() })
            }
            Shape::Polytope { halfspaces } => {
                let dim = halfspaces.first().map(|h| h.normal.len()).unwrap_or(0);
                if dim == 0 || dim > 3 {
                    return Err(param("polytope", "dimension must be 1, 2 or 3"));
                }
                if halfspaces.iter().any(|h| h.normal.len() != dim || norm2(&h.normal) == 0.0) {
                    return Err(param("polytope", "normals must be nonzero and share one dimension"));
                }
                if let Some(ray) = recession_ray(halfspaces, dim) {
                    return Err(Error::Unbounded(ray));
                }
                let vertices = enumerate_vertices(halfspaces, dim);
                if vertices.len() < dim + 1 {
                    return Err(param("polytope", "empty or lower-dimensional polytope"));
                }
                let c = centroid(&vertices);
                let slack = halfspaces
                    .iter()
                    .map(|h| (h.offset - dot(&h.normal, &c)) / norm2(&h.normal))
                    .fold(f64::INFINITY, f64::min);
                if slack <= 1e-10 {
                    return Err(param("polytope", "polytope has empty interior"));
                }
                Ok(Self { shape, dim, vertices })
            }
        }
    }

    pub fn unit_box(dim: usize) -> Self {
        Self::new(Shape::Box { lo: vec![-1.0; dim], hi: vec![1.0; dim] }).expect("valid box")
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        Self::new(Shape::Ball { center, radius })
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        Self::new(Shape::Box { lo, hi })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.shape {
            Shape::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *v >= *l && *v <= *h),
            Shape::Ball { center, radius } => dist2(x, center) <= *radius,
            Shape::Polytope { halfspaces } => halfspaces.iter().all(|h| dot(&h.normal, x) <= h.offset),
        }
    }

    /// Distance from `x` to the body (zero inside). For polytopes this is the
    /// largest normalized halfspace violation, a lower bound on the distance.
    pub fn outside_distance(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (l, h))| (l - v).max(v - h).max(0.0).powi(2))
                .sum::<f64>()
                .sqrt(),
            Shape::Ball { center, radius } => (dist2(x, center) - radius).max(0.0),
            Shape::Polytope { halfspaces } => halfspaces
                .iter()
                .map(|h| (dot(&h.normal, x) - h.offset) / norm2(&h.normal))
                .fold(0.0, f64::max),
        }
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.shape {
            Shape::Box { lo, hi } => (lo.clone(), hi.clone()),
            Shape::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            Shape::Polytope { .. } => {
                let mut lo = vec![f64::INFINITY; self.dim];
                let mut hi = vec![f64::NEG_INFINITY; self.dim];
                for v in &self.vertices {
                    for k in 0..self.dim {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                (lo, hi)
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Box { lo, hi } => dist2(lo, hi),
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Polytope { .. } => {
                let mut d: f64 = 0.0;
                for (i, a) in self.vertices.iter().enumerate() {
                    for b in &self.vertices[i + 1..] {
                        d = d.max(dist2(a, b));
                    }
                }
                d
            }
        }
    }

    /// Support function `max_{y ∈ K} ⟨y, h⟩`.
    pub fn support(&self, h: &[f64]) -> f64 {
        match &self.shape {
            Shape::Box { lo, hi } => h.iter().zip(lo.iter().zip(hi)).map(|(c, (l, u))| (c * l).max(c * u)).sum(),
            Shape::Ball { center, radius } => dot(center, h) + radius * norm2(h),
            Shape::Polytope { .. } => self
                .vertices
                .iter()
                .map(|v| dot(v, h))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Lebesgue measure of the body.
    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| h - l).product(),
            Shape::Ball { radius, .. } => match self.dim {
                1 => 2.0 * radius,
                2 => std::f64::consts::PI * radius * radius,
                3 => 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3),
                d => {
                    // π^{d/2} r^d / Γ(d/2 + 1)
                    std::f64::consts::PI.powf(d as f64 / 2.0) * radius.powi(d as i32)
                        / statrs::function::gamma::gamma(d as f64 / 2.0 + 1.0)
                }
            },
            Shape::Polytope { halfspaces } => polytope_volume(&self.vertices, halfspaces, self.dim),
        }
    }
}

/// Midpoint and half-width of the projection of `body` onto the unit vector `h`.
pub fn supporting_slab(body: &ConvexBody, h: &[f64]) -> Result<(f64, f64)> {
    if h.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: h.len() });
    }
    if (norm2(h) - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("direction must be a unit vector, |h| = {}", norm2(h))));
    }
    let hi = body.support(h);
    let neg: Vec<f64> = h.iter().map(|v| -v).collect();
    let lo = -body.support(&neg);
    if !hi.is_finite() || !lo.is_finite() {
        return Err(Error::Unbounded(h.to_vec()));
    }
    Ok((0.5 * (hi + lo), 0.5 * (hi - lo)))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn centroid(pts: &[Vec<f64>]) -> Vec<f64> {
    let d = pts[0].len();
    let mut c = vec![0.0; d];
    for p in pts {
        for k in 0..d {
            c[k] += p[k];
        }
    }
    c.iter_mut().for_each(|v| *v /= pts.len() as f64);
    c
}

fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Solve the d×d system `rows · x = rhs` by Gaussian elimination with partial pivoting.
fn solve(rows: &[&[f64]], rhs: &[f64]) -> Option<Vec<f64>> {
    let d = rows.len();
    let mut m: Vec<Vec<f64>> = rows.iter().zip(rhs).map(|(r, b)| r.iter().copied().chain([*b]).collect()).collect();
    for col in 0..d {
        let piv = (col..d).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..d {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=d {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..d).map(|i| m[i][d] / m[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn enumerate_vertices(hs: &[Halfspace], dim: usize) -> Vec<Vec<f64>> {
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for combo in combinations(hs.len(), dim) {
        let rows: Vec<&[f64]> = combo.iter().map(|&i| hs[i].normal.as_slice()).collect();
        let rhs: Vec<f64> = combo.iter().map(|&i| hs[i].offset).collect();
        if let Some(v) = solve(&rows, &rhs) {
            let feasible = hs.iter().all(|h| dot(&h.normal, &v) <= h.offset + FEAS_TOL * (1.0 + h.offset.abs()));
            if feasible && !verts.iter().any(|w| dist2(w, &v) < 1e-9) {
                verts.push(v);
            }
        }
    }
    verts
}

/// A nonzero direction in the recession cone `{y : ⟨n_i, y⟩ ≤ 0}`, if any.
fn recession_ray(hs: &[Halfspace], dim: usize) -> Option<Vec<f64>> {
    let feasible = |y: &[f64]| hs.iter().all(|h| dot(&h.normal, y) <= 1e-12 * norm2(&h.normal) * norm2(y));
    // A line in the cone shows up as a null direction of the normal matrix;
    // check the candidate directions from (d-1)-subsets which cover both cases.
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    match dim {
        1 => {
            candidates.push(vec![1.0]);
            candidates.push(vec![-1.0]);
        }
        2 => {
            for h in hs {
                candidates.push(vec![-h.normal[1], h.normal[0]]);
                candidates.push(vec![h.normal[1], -h.normal[0]]);
            }
            candidates.push(vec![1.0, 0.0]);
            candidates.push(vec![0.0, 1.0]);
            candidates.push(vec![-1.0, 0.0]);
            candidates.push(vec![0.0, -1.0]);
        }
        _ => {
            for c in combinations(hs.len(), 2) {
                let v = cross3(&hs[c[0]].normal, &hs[c[1]].normal);
                if norm2(&v) > 1e-12 {
                    candidates.push(v.to_vec());
                    candidates.push(v.iter().map(|x| -x).collect());
                }
            }
            for h in hs {
                // rank-one normal sets leave a whole plane of null directions
                let n = &h.normal;
                let a = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
                let u = cross3(n, &a);
                let w = cross3(n, &u);
                for v in [u, w] {
                    candidates.push(v.to_vec());
                    candidates.push(v.iter().map(|x| -x).collect());
                }
            }
            for k in 0..3 {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; 3];
                    e[k] = s;
                    candidates.push(e);
                }
            }
        }
    }
    if hs.len() < dim + 1 {
        return candidates.into_iter().find(|y| feasible(y)).or(Some(vec![1.0; dim]));
    }
    candidates.into_iter().find(|y| feasible(y))
}

fn polytope_volume(vertices: &[Vec<f64>], hs: &[Halfspace], dim: usize) -> f64 {
    match dim {
        1 => {
            let lo = vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
            let hi = vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        }
        2 => {
            let c = centroid(vertices);
            let mut pts = vertices.to_vec();
            pts.sort_by(|a, b| (a[1] - c[1]).atan2(a[0] - c[0]).total_cmp(&(b[1] - c[1]).atan2(b[0] - c[0])));
            let n = pts.len();
            0.5 * (0..n)
                .map(|i| {
                    let (p, q) = (&pts[i], &pts[(i + 1) % n]);
                    p[0] * q[1] - q[0] * p[1]
                })
                .sum::<f64>()
                .abs()
        }
        _ => {
            // Cone decomposition from the vertex centroid over each facet.
            let c = centroid(vertices);
            let mut vol = 0.0;
            for h in hs {
                let nn = norm2(&h.normal);
                let on: Vec<&Vec<f64>> = vertices
                    .iter()
                    .filter(|v| (dot(&h.normal, v) - h.offset).abs() <= 1e-8 * (1.0 + h.offset.abs()) * nn.max(1.0))
                    .collect();
                if on.len() < 3 {
                    continue;
                }
                let owned: Vec<Vec<f64>> = on.iter().map(|v| (*v).clone()).collect();
                let fc = centroid(&owned);
                let n: Vec<f64> = h.normal.iter().map(|v| v / nn).collect();
                let a = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
                let u = cross3(&n, &a);
                let un = norm2(&u);
                let u: Vec<f64> = u.iter().map(|v| v / un).collect();
                let w = cross3(&n, &u);
                let mut pts = owned.clone();
                let ang = |p: &Vec<f64>| {
                    let d: Vec<f64> = p.iter().zip(&fc).map(|(x, y)| x - y).collect();
                    dot(&d, &w).atan2(dot(&d, &u))
                };
                pts.sort_by(|p, q| ang(p).total_cmp(&ang(q)));
                let height = (h.offset / nn - dot(&n, &c)).abs();
                let mut area = 0.0;
                for i in 0..pts.len() {
                    let p: Vec<f64> = pts[i].iter().zip(&fc).map(|(x, y)| x - y).collect();
                    let q: Vec<f64> = pts[(i + 1) % pts.len()].iter().zip(&fc).map(|(x, y)| x - y).collect();
                    area += 0.5 * norm2(&cross3(&p, &q));
                }
                vol += area * height / 3.0;
            }
            vol
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square_polytope() -> ConvexBody {
        let hs = vec![
            Halfspace { normal: vec![1.0, 0.0], offset: 1.0 },
            Halfspace { normal: vec![-1.0, 0.0], offset: 1.0 },
            Halfspace { normal: vec![0.0, 1.0], offset: 1.0 },
            Halfspace { normal: vec![0.0, -1.0], offset: 1.0 },
        ];
        ConvexBody::new(Shape::Polytope { halfspaces: hs }).unwrap()
    }

    #[test]
    fn slab_examples() {
        let b = ConvexBody::unit_box(2);
        let (t0, a) = supporting_slab(&b, &[1.0, 0.0]).unwrap();
        assert_eq!((t0, a), (0.0, 1.0));

        let ball = ConvexBody::ball(vec![0.5, -2.0], 0.7).unwrap();
        let h = [0.6, 0.8];
        let (t0, a) = supporting_slab(&ball, &h).unwrap();
        assert_relative_eq!(t0, 0.5 * 0.6 - 2.0 * 0.8, epsilon = 1e-15);
        assert_relative_eq!(a, 0.7, epsilon = 1e-15);

        // vertices of [0,2]×[0,1] project to {0, 2/√2, 1/√2, 3/√2}
        let r = ConvexBody::boxed(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let (t0, a) = supporting_slab(&r, &[s, s]).unwrap();
        assert_relative_eq!(t0, 3.0 / (2.0 * 2f64.sqrt()), epsilon = 1e-14);
        assert_relative_eq!(a, 3.0 / (2.0 * 2f64.sqrt()), epsilon = 1e-14);
    }

    #[test]
    fn polytope_matches_box() {
        let p = square_polytope();
        let b = ConvexBody::unit_box(2);
        assert_eq!(p.vertices().len(), 4);
        assert_relative_eq!(p.volume(), 4.0, epsilon = 1e-12);
        assert_relative_eq!(p.diameter(), b.diameter(), epsilon = 1e-12);
        let h = [0.28, 0.96];
        assert_relative_eq!(supporting_slab(&p, &h).unwrap().1, supporting_slab(&b, &h).unwrap().1, epsilon = 1e-12);
    }

    #[test]
    fn cube_polytope_volume() {
        let mut hs = Vec::new();
        for k in 0..3 {
            for s in [1.0, -1.0] {
                let mut n = vec![0.0; 3];
                n[k] = s;
                hs.push(Halfspace { normal: n, offset: if k == 0 { 2.0 } else { 1.0 } });
            }
        }
        let p = ConvexBody::new(Shape::Polytope { halfspaces: hs }).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_relative_eq!(p.volume(), 4.0 * 2.0 * 2.0, epsilon = 1e-10);
    }

    #[test]
    fn unbounded_and_degenerate_rejected() {
        let hs = vec![
            Halfspace { normal: vec![1.0, 0.0], offset: 1.0 },
            Halfspace { normal: vec![-1.0, 0.0], offset: 1.0 },
            Halfspace { normal: vec![0.0, 1.0], offset: 1.0 },
        ];
        assert!(matches!(ConvexBody::new(Shape::Polytope { halfspaces: hs }), Err(Error::Unbounded(_))));
        assert!(ConvexBody::boxed(vec![0.0], vec![0.0]).is_err());
        assert!(ConvexBody::ball(vec![0.0, 0.0], -1.0).is_err());
        let flat = vec![
            Halfspace { normal: vec![1.0, 0.0], offset: 0.0 },
            Halfspace { normal: vec![-1.0, 0.0], offset: 0.0 },
            Halfspace { normal: vec![0.0, 1.0], offset: 1.0 },
            Halfspace { normal: vec![0.0, -1.0], offset: 1.0 },
        ];
        assert!(ConvexBody::new(Shape::Polytope { halfspaces: flat }).is_err());
    }

    #[test]
    fn distance_and_containment() {
        let b = ConvexBody::unit_box(2);
        assert!(b.contains(&[0.3, -1.0]));
        assert_relative_eq!(b.outside_distance(&[2.0, 2.0]), 2f64.sqrt(), epsilon = 1e-15);
        let ball = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_relative_eq!(ball.outside_distance(&[3.0, 4.0]), 4.0, epsilon = 1e-15);
        assert_eq!(ball.outside_distance(&[0.1, 0.1]), 0.0);
    }
}
