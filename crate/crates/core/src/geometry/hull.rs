//! Convex hulls in dimensions 2..=10.
//!
//! Dimension 2 uses Andrew's monotone chain. Higher dimensions use an
//! incremental beneath-beyond construction with outside sets (quickhull
//! ordering: the furthest outside point of a facet is inserted next).
//! Facets are kept simplicial during construction; coplanar neighbours are
//! merged afterwards so that non-simplicial polytopes (cubes, prisms) come
//! out with their true facets. Inputs are normalized to unit bounding-box
//! diagonal before any predicate is evaluated.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numeric::{dot, generalized_cross, norm, orthonormal_basis};

/// Plane-distance tolerance in normalized coordinates.
const PLANE_EPS: f64 = 1e-11;
/// Minimum distance from the affine hull of the current simplex, in
/// normalized coordinates, for the input to count as full-dimensional.
const AFFINE_EPS: f64 = 1e-9;
/// Tolerance for treating two adjacent facets as lying in one hyperplane.
const COPLANAR_EPS: f64 = 1e-9;

#[derive(Clone, Debug)]
pub(crate) struct RawFacet {
    pub vertices: Vec<usize>,
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Hull of a point set, expressed through indices into the input.
#[derive(Clone, Debug)]
pub(crate) struct RawHull {
    pub vertices: Vec<usize>,
    pub facets: Vec<RawFacet>,
    /// Boundary triangulation: each entry is a (d-1)-simplex of the boundary.
    pub simplices: Vec<Vec<usize>>,
}

/// Normalization x -> (x - center) / scale.
struct Frame {
    center: Vec<f64>,
    scale: f64,
}

impl Frame {
    fn new(points: &[f64], dim: usize) -> Self {
        let m = points.len() / dim;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for i in 0..m {
            for k in 0..dim {
                let v = points[i * dim + k];
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let diag = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt();
        Self {
            center,
            scale: if diag > 0.0 { diag } else { 1.0 },
        }
    }

    fn apply(&self, points: &[f64], dim: usize) -> Vec<f64> {
        points
            .iter()
            .enumerate()
            .map(|(i, &v)| (v - self.center[i % dim]) / self.scale)
            .collect()
    }
}

/// Full hull with merged facets and an irredundant vertex set.
pub(crate) fn hull(points: &[Vec<f64>]) -> Result<RawHull> {
    let dim = check_points(points)?;
    let flat: Vec<f64> = points.iter().flatten().copied().collect();
    if dim == 2 {
        return hull_2d(&flat);
    }
    let mut subset: Vec<usize> = (0..points.len()).collect();
    // Re-run on the extreme subset until every hull vertex is extreme;
    // points in the relative interior of a face may enter the simplicial
    // triangulation when they are processed before the face's corners.
    for _ in 0..4 {
        let sub_flat: Vec<f64> = subset
            .iter()
            .flat_map(|&i| points[i].iter().copied())
            .collect();
        let simplicial = quickhull_with_retry(&sub_flat, dim)?;
        let merged = merge_facets(&simplicial, dim);
        let extreme = extreme_vertices(&merged, dim);
        let all_vertices = simplicial.vertex_set();
        if extreme.len() == all_vertices.len() {
            let map = |v: &usize| subset[*v];
            let frame = &simplicial.frame;
            return Ok(RawHull {
                vertices: extreme.iter().map(map).collect(),
                facets: merged
                    .into_iter()
                    .map(|f| {
                        let offset = f.offset * frame.scale + dot(&f.normal, &frame.center);
                        RawFacet {
                            vertices: f.vertices.iter().map(map).collect(),
                            normal: f.normal,
                            offset,
                        }
                    })
                    .collect(),
                simplices: simplicial
                    .alive_facets()
                    .map(|f| f.v.iter().map(map).collect())
                    .collect(),
            });
        }
        subset = extreme.iter().map(|&v| subset[v]).collect();
    }
    Err(Error::degenerate("hull vertex set did not stabilize"))
}

/// Volume of the convex hull of a flat point buffer. Skips facet merging.
pub(crate) fn hull_volume_flat(points: &[f64], dim: usize) -> Result<f64> {
    if dim == 2 {
        let ring = monotone_chain(points)?;
        return Ok(shoelace(points, &ring));
    }
    let h = quickhull_with_retry(points, dim)?;
    Ok(h.volume(points, dim))
}

/// Number of extreme points of the hull of a flat point buffer.
pub(crate) fn hull_vertex_count_flat(points: &[f64], dim: usize) -> Result<usize> {
    if dim == 2 {
        return Ok(monotone_chain(points)?.len());
    }
    let h = quickhull_with_retry(points, dim)?;
    let merged = merge_facets(&h, dim);
    Ok(extreme_vertices(&merged, dim).len())
}

fn check_points(points: &[Vec<f64>]) -> Result<usize> {
    let dim = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::degenerate("empty point set"))?;
    if !(2..=10).contains(&dim) {
        return Err(Error::invalid(format!("dimension {dim} outside 2..=10")));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::invalid("points of mixed dimension"));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite coordinate"));
    }
    if points.len() < dim + 1 {
        return Err(Error::degenerate(format!(
            "{} points cannot span R^{dim}",
            points.len()
        )));
    }
    Ok(dim)
}

// ---------------------------------------------------------------- 2D

/// Counter-clockwise extreme points (collinear points dropped).
pub(crate) fn monotone_chain(points: &[f64]) -> Result<Vec<usize>> {
    let m = points.len() / 2;
    if m < 3 {
        return Err(Error::degenerate("fewer than three points"));
    }
    let frame = Frame::new(points, 2);
    let p = frame.apply(points, 2);
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_unstable_by(|&a, &b| {
        p[2 * a]
            .total_cmp(&p[2 * b])
            .then(p[2 * a + 1].total_cmp(&p[2 * b + 1]))
    });
    let cross = |o: usize, a: usize, b: usize| {
        (p[2 * a] - p[2 * o]) * (p[2 * b + 1] - p[2 * o + 1])
            - (p[2 * a + 1] - p[2 * o + 1]) * (p[2 * b] - p[2 * o])
    };
    let mut ring: Vec<usize> = Vec::with_capacity(2 * m);
    for &i in &idx {
        while ring.len() >= 2 && cross(ring[ring.len() - 2], ring[ring.len() - 1], i) <= PLANE_EPS {
            ring.pop();
        }
        ring.push(i);
    }
    let lower_len = ring.len() + 1;
    for &i in idx.iter().rev().skip(1) {
        while ring.len() >= lower_len
            && cross(ring[ring.len() - 2], ring[ring.len() - 1], i) <= PLANE_EPS
        {
            ring.pop();
        }
        ring.push(i);
    }
    ring.pop();
    if ring.len() < 3 {
        return Err(Error::degenerate("points are collinear"));
    }
    let area = shoelace(&p, &ring);
    if area <= AFFINE_EPS {
        return Err(Error::degenerate("points are collinear"));
    }
    Ok(ring)
}

pub(crate) fn shoelace(points: &[f64], ring: &[usize]) -> f64 {
    let n = ring.len();
    let mut s = 0.0;
    for k in 0..n {
        let a = ring[k];
        let b = ring[(k + 1) % n];
        s += points[2 * a] * points[2 * b + 1] - points[2 * b] * points[2 * a + 1];
    }
    0.5 * s
}

fn hull_2d(points: &[f64]) -> Result<RawHull> {
    let ring = monotone_chain(points)?;
    let n = ring.len();
    let mut facets = Vec::with_capacity(n);
    let mut simplices = Vec::with_capacity(n);
    for k in 0..n {
        let a = ring[k];
        let b = ring[(k + 1) % n];
        let e = [points[2 * b] - points[2 * a], points[2 * b + 1] - points[2 * a + 1]];
        let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
        let normal = vec![e[1] / len, -e[0] / len];
        let offset = normal[0] * points[2 * a] + normal[1] * points[2 * a + 1];
        facets.push(RawFacet {
            vertices: vec![a, b],
            normal,
            offset,
        });
        simplices.push(vec![a, b]);
    }
    Ok(RawHull {
        vertices: ring,
        facets,
        simplices,
    })
}

// ---------------------------------------------------------------- d >= 3

#[derive(Clone, Debug)]
struct Facet {
    v: Vec<usize>,
    n: Vec<f64>,
    off: f64,
    nb: Vec<usize>,
    outside: Vec<usize>,
    alive: bool,
    visit: u32,
}

struct Simplicial {
    frame: Frame,
    pts: Vec<f64>,
    facets: Vec<Facet>,
}

impl Simplicial {
    fn alive_facets(&self) -> impl Iterator<Item = &Facet> {
        self.facets.iter().filter(|f| f.alive)
    }

    fn vertex_set(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.alive_facets().flat_map(|f| f.v.iter().copied()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    fn volume(&self, original: &[f64], dim: usize) -> f64 {
        // Cone over every boundary simplex from an interior point.
        let vs = self.vertex_set();
        let mut c = vec![0.0; dim];
        for &v in &vs {
            for k in 0..dim {
                c[k] += original[v * dim + k];
            }
        }
        c.iter_mut().for_each(|x| *x /= vs.len() as f64);
        let fact: f64 = (1..=dim).map(|k| k as f64).product();
        let mut total = 0.0;
        let mut rows = vec![vec![0.0; dim]; dim];
        for f in self.alive_facets() {
            for (r, &v) in rows.iter_mut().zip(&f.v) {
                for k in 0..dim {
                    r[k] = original[v * dim + k] - c[k];
                }
            }
            total += crate::numeric::det(&rows).abs();
        }
        total / fact
    }
}

fn quickhull_with_retry(points: &[f64], dim: usize) -> Result<Simplicial> {
    match quickhull(points, dim) {
        Err(Error::DegenerateInput(msg)) if msg.starts_with("facet") => {}
        other => return other,
    }
    // Joggle: deterministic tiny perturbation, growing per attempt.
    let mut state = 0x9E37_79B9_7F4A_7C15_u64;
    for attempt in 1..=3 {
        let amp = 1e-11 * 10f64.powi(attempt);
        let frame = Frame::new(points, dim);
        let jittered: Vec<f64> = points
            .iter()
            .map(|&v| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let u = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                v + amp * frame.scale * u
            })
            .collect();
        match quickhull(&jittered, dim) {
            Ok(mut h) => {
                // keep coordinates of the original input for volumes
                h.frame = Frame::new(points, dim);
                h.pts = h.frame.apply(points, dim);
                return Ok(h);
            }
            Err(Error::DegenerateInput(msg)) if msg.starts_with("facet") => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::degenerate("facet construction failed after joggling"))
}

fn quickhull(points: &[f64], dim: usize) -> Result<Simplicial> {
    let m = points.len() / dim;
    if m < dim + 1 {
        return Err(Error::degenerate("too few points"));
    }
    let frame = Frame::new(points, dim);
    let pts = frame.apply(points, dim);
    let p = |i: usize| &pts[i * dim..(i + 1) * dim];

    let simplex = initial_simplex(&pts, dim)?;
    let mut interior = vec![0.0; dim];
    for &s in &simplex {
        for k in 0..dim {
            interior[k] += p(s)[k] / (dim + 1) as f64;
        }
    }

    let plane = |vs: &[usize]| -> Result<(Vec<f64>, f64)> {
        let base = p(vs[0]);
        let edges: Vec<Vec<f64>> = vs[1..]
            .iter()
            .map(|&v| p(v).iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let mut n = generalized_cross(&edges);
        let len = norm(&n);
        let edge_scale: f64 = edges.iter().map(|e| norm(e)).product();
        if !(len > 1e-14 * edge_scale.max(1e-300)) || len == 0.0 {
            return Err(Error::degenerate("facet normal vanished"));
        }
        n.iter_mut().for_each(|x| *x /= len);
        let mut off = dot(&n, base);
        if dot(&n, &interior) > off {
            n.iter_mut().for_each(|x| *x = -*x);
            off = -off;
        }
        if off - dot(&n, &interior) <= 0.0 {
            return Err(Error::degenerate("facet passes through interior point"));
        }
        Ok((n, off))
    };

    let mut facets: Vec<Facet> = Vec::new();
    for i in 0..=dim {
        let v: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &s)| s)
            .collect();
        let (n, off) = plane(&v)?;
        // neighbour opposite v[k] is the facet that omits that vertex
        let nb: Vec<usize> = (0..=dim).filter(|&j| j != i).collect();
        facets.push(Facet {
            v,
            n,
            off,
            nb,
            outside: Vec::new(),
            alive: true,
            visit: 0,
        });
    }

    let mut in_simplex = vec![false; m];
    simplex.iter().for_each(|&s| in_simplex[s] = true);
    for i in 0..m {
        if in_simplex[i] {
            continue;
        }
        for f in facets.iter_mut() {
            if dot(&f.n, p(i)) - f.off > PLANE_EPS {
                f.outside.push(i);
                break;
            }
        }
    }

    let mut stack: Vec<usize> = (0..facets.len()).collect();
    let mut iteration: u32 = 0;
    let mut visible: Vec<usize> = Vec::new();
    let mut horizon: Vec<(Vec<usize>, usize, usize)> = Vec::new();
    let mut ridge_map: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();

    while let Some(fi) = stack.pop() {
        if !facets[fi].alive || facets[fi].outside.is_empty() {
            continue;
        }
        iteration += 1;
        let apex = {
            let f = &facets[fi];
            *f.outside
                .iter()
                .max_by(|&&a, &&b| {
                    (dot(&f.n, p(a)) - f.off).total_cmp(&(dot(&f.n, p(b)) - f.off))
                })
                .unwrap()
        };
        let ap = p(apex).to_vec();

        // visible set by flood fill
        visible.clear();
        visible.push(fi);
        facets[fi].visit = iteration;
        let mut head = 0;
        while head < visible.len() {
            let cur = visible[head];
            head += 1;
            for k in 0..dim {
                let g = facets[cur].nb[k];
                if facets[g].visit != iteration
                    && dot(&facets[g].n, &ap) - facets[g].off > PLANE_EPS
                {
                    facets[g].visit = iteration;
                    visible.push(g);
                }
            }
        }

        horizon.clear();
        for &vf in &visible {
            for k in 0..dim {
                let g = facets[vf].nb[k];
                if facets[g].visit != iteration {
                    let ridge: Vec<usize> = facets[vf]
                        .v
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &x)| x)
                        .collect();
                    horizon.push((ridge, g, vf));
                }
            }
        }

        let first_new = facets.len();
        ridge_map.clear();
        for (ridge, g, vf) in horizon.drain(..) {
            let mut v = ridge.clone();
            v.push(apex);
            let (n, off) = plane(&v)?;
            let id = facets.len();
            let mut nb = vec![usize::MAX; dim];
            nb[dim - 1] = g;
            if let Some(slot) = facets[g].nb.iter().position(|&x| x == vf) {
                facets[g].nb[slot] = id;
            }
            for k in 0..dim - 1 {
                let mut key: Vec<usize> = v
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &x)| x)
                    .collect();
                key.sort_unstable();
                if let Some((other, slot)) = ridge_map.remove(&key) {
                    nb[k] = other;
                    facets[other].nb[slot] = id;
                } else {
                    ridge_map.insert(key, (id, k));
                }
            }
            facets.push(Facet {
                v,
                n,
                off,
                nb,
                outside: Vec::new(),
                alive: true,
                visit: 0,
            });
        }
        if !ridge_map.is_empty() {
            return Err(Error::degenerate("facet adjacency left unmatched ridges"));
        }

        let mut orphans: Vec<usize> = Vec::new();
        for &vf in &visible {
            facets[vf].alive = false;
            orphans.append(&mut facets[vf].outside);
        }
        for q in orphans {
            if q == apex {
                continue;
            }
            let pq = p(q);
            for f in facets[first_new..].iter_mut() {
                if dot(&f.n, pq) - f.off > PLANE_EPS {
                    f.outside.push(q);
                    break;
                }
            }
        }
        for id in first_new..facets.len() {
            if !facets[id].outside.is_empty() {
                stack.push(id);
            }
        }
    }

    Ok(Simplicial {
        frame,
        pts,
        facets,
    })
}

fn initial_simplex(pts: &[f64], dim: usize) -> Result<Vec<usize>> {
    let m = pts.len() / dim;
    let p = |i: usize| &pts[i * dim..(i + 1) * dim];
    let first = (0..m)
        .min_by(|&a, &b| p(a)[0].total_cmp(&p(b)[0]))
        .unwrap();
    let mut chosen = vec![first];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for _ in 0..dim {
        let base = p(first);
        let mut best = (0.0, usize::MAX);
        for i in 0..m {
            let mut r: Vec<f64> = p(i).iter().zip(base).map(|(a, b)| a - b).collect();
            for b in &basis {
                let c = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(ri, bi)| *ri -= c * bi);
            }
            let d = norm(&r);
            if d > best.0 {
                best = (d, i);
            }
        }
        if best.0 < AFFINE_EPS {
            return Err(Error::degenerate("points are affinely dependent"));
        }
        chosen.push(best.1);
        let dir: Vec<f64> = p(best.1).iter().zip(base).map(|(a, b)| a - b).collect();
        basis = orthonormal_basis(&[basis.clone(), vec![dir]].concat(), 1e-12);
    }
    Ok(chosen)
}

/// Union of coplanar adjacent simplicial facets. Indices refer to the
/// point buffer the simplicial hull was built from; normals and offsets
/// are in normalized coordinates.
fn merge_facets(h: &Simplicial, dim: usize) -> Vec<RawFacet> {
    let ids: Vec<usize> = (0..h.facets.len()).filter(|&i| h.facets[i].alive).collect();
    let mut parent: HashMap<usize, usize> = ids.iter().map(|&i| (i, i)).collect();
    fn find(parent: &mut HashMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while parent[&r] != r {
            r = parent[&r];
        }
        let mut c = x;
        while parent[&c] != r {
            let next = parent[&c];
            parent.insert(c, r);
            c = next;
        }
        r
    }
    for &i in &ids {
        let f = &h.facets[i];
        for &g in &f.nb {
            let fg = &h.facets[g];
            if g > i
                && fg.alive
                && (1.0 - dot(&f.n, &fg.n)).abs() < COPLANAR_EPS
                && (f.off - fg.off).abs() < COPLANAR_EPS
            {
                let (a, b) = (find(&mut parent, i), find(&mut parent, g));
                if a != b {
                    parent.insert(a, b);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for &i in &ids {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut keys: Vec<usize> = groups.keys().copied().collect();
    keys.sort_unstable();
    let p = |i: usize| &h.pts[i * dim..(i + 1) * dim];
    keys.into_iter()
        .map(|k| {
            let members = &groups[&k];
            let mut normal = vec![0.0; dim];
            let mut verts: Vec<usize> = Vec::new();
            for &i in members {
                normal
                    .iter_mut()
                    .zip(&h.facets[i].n)
                    .for_each(|(a, b)| *a += b);
                verts.extend_from_slice(&h.facets[i].v);
            }
            verts.sort_unstable();
            verts.dedup();
            let len = norm(&normal);
            normal.iter_mut().for_each(|x| *x /= len);
            let offset = verts.iter().map(|&v| dot(&normal, p(v))).sum::<f64>() / verts.len() as f64;
            RawFacet {
                vertices: verts,
                normal,
                offset,
            }
        })
        .collect()
}

/// A point is a vertex iff the normals of the merged facets through it
/// span R^d.
fn extreme_vertices(facets: &[RawFacet], dim: usize) -> Vec<usize> {
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (fi, f) in facets.iter().enumerate() {
        for &v in &f.vertices {
            incident.entry(v).or_default().push(fi);
        }
    }
    let mut out: Vec<usize> = incident
        .into_iter()
        .filter(|(_, fs)| {
            fs.len() >= dim && {
                let normals: Vec<Vec<f64>> = fs.iter().map(|&f| facets[f].normal.clone()).collect();
                orthonormal_basis(&normals, 1e-10).len() == dim
            }
        })
        .map(|(v, _)| v)
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(d: usize) -> Vec<Vec<f64>> {
        (0..1usize << d)
            .map(|mask| (0..d).map(|k| ((mask >> k) & 1) as f64).collect())
            .collect()
    }

    #[test]
    fn square_with_center_drops_interior_point() {
        let mut pts = cube(2);
        pts.push(vec![0.5, 0.5]);
        let h = hull(&pts).unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert!(!h.vertices.contains(&4));
    }

    #[test]
    fn cube_facets_merge_into_squares() {
        for d in 3..=5 {
            let h = hull(&cube(d)).unwrap();
            assert_eq!(h.vertices.len(), 1 << d);
            assert_eq!(h.facets.len(), 2 * d);
            for f in &h.facets {
                assert_eq!(f.vertices.len(), 1 << (d - 1));
            }
        }
    }

    #[test]
    fn cube_with_face_centers_is_irredundant() {
        let mut pts = cube(3);
        for k in 0..3 {
            for side in [0.0, 1.0] {
                let mut c = vec![0.5; 3];
                c[k] = side;
                pts.insert(0, c);
            }
        }
        let h = hull(&pts).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.facets.len(), 6);
    }

    #[test]
    fn flat_input_is_degenerate() {
        let pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ];
        assert!(matches!(hull(&pts), Err(Error::DegenerateInput(_))));
        let line = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert!(matches!(hull(&line), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn volume_of_unit_cube_flat() {
        for d in 2..=6 {
            let flat: Vec<f64> = cube(d).into_iter().flatten().collect();
            let v = hull_volume_flat(&flat, d).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "d={d} v={v}");
        }
    }
}
