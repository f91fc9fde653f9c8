//! Triangulations with the broken line as an internal interface. Vertices on the interface
//! come in two copies: the plus copy is used by triangles inside the wedge `|theta| < omega`,
//! the minus copy by triangles outside. The corner is a single vertex.

use std::collections::HashMap;
use std::f64::consts::PI;

use dshell_core::PhysParams;
use serde::{Deserialize, Serialize};

use crate::{FemError, Result};

/// Angles below this use the strip layout under [`Layout::Auto`].
pub const STRIP_ANGLE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Auto,
    /// Graded polar triangulation of the disk of radius `radius`.
    Disk,
    /// Column-structured rectangle `[radius/6, radius] x [-Y, Y]` aligned with a thin wedge.
    Strip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ray {
    /// `theta = omega`
    Left,
    /// `theta = -omega`
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshOptions {
    pub radius: f64,
    pub h: f64,
    /// Corner grading exponent in `[0, 1)`: element size `~ h (r/R)^grading`.
    pub grading: f64,
    pub bc: BoundaryCondition,
    pub layout: Layout,
}

impl Default for MeshOptions {
    fn default() -> Self {
        Self {
            radius: 10.0,
            h: 0.5,
            grading: 0.5,
            bc: BoundaryCondition::Dirichlet,
            layout: Layout::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterfaceEdge {
    pub ray: Ray,
    pub plus: [usize; 2],
    pub minus: [usize; 2],
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub interface_edges: Vec<InterfaceEdge>,
    pub corner_vertex: Option<usize>,
    /// On the artificial outer boundary.
    pub boundary: Vec<bool>,
    /// Minus copy -> (plus copy, ray).
    pub twin: Vec<Option<(usize, Ray)>>,
    pub bc: BoundaryCondition,
    pub layout: Layout,
    pub h: f64,
    pub radius: f64,
    pub grading: f64,
}

impl Mesh {
    /// Vertex values forced to zero.
    pub fn is_fixed(&self, v: usize) -> bool {
        self.corner_vertex == Some(v) || (self.bc == BoundaryCondition::Dirichlet && self.boundary[v])
    }

    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| signed_area(&self.vertices, t)).sum()
    }

    pub fn min_area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| signed_area(&self.vertices, t))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn signed_area(v: &[[f64; 2]], t: &[usize; 3]) -> f64 {
    let [a, b, c] = [v[t[0]], v[t[1]], v[t[2]]];
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Size guard on `radius / (h (1 - grading))`, far above any mesh that fits in memory.
pub const MAX_SPAN: f64 = 2e4;

fn check_options(p: &PhysParams, o: &MeshOptions) -> Result<()> {
    let bad = |name: &'static str, value: f64, reason: &str| {
        Err(FemError::InvalidOption {
            name,
            value,
            reason: reason.into(),
        })
    };
    if !(o.radius > 0.0) || !o.radius.is_finite() {
        return bad("radius", o.radius, "must be positive");
    }
    if !(o.h > 0.0) || !o.h.is_finite() || o.h > o.radius {
        return bad("h", o.h, "must be positive and at most the radius");
    }
    if !(0.0..1.0).contains(&o.grading) {
        return bad("grading", o.grading, "must lie in [0, 1)");
    }
    if !(p.omega > 0.0 && p.omega <= PI / 2.0) {
        return bad("omega", p.omega, "mesh generation needs omega in (0, pi/2]");
    }
    // rings of the disk layout; also bounds the strip layout
    if o.radius / (o.h * (1.0 - o.grading)) > MAX_SPAN {
        return bad(
            "h",
            o.h,
            &format!("radius / (h (1 - grading)) must not exceed {MAX_SPAN:e}"),
        );
    }
    Ok(())
}

pub fn build_mesh(p: &PhysParams, o: &MeshOptions) -> Result<Mesh> {
    check_options(p, o)?;
    let layout = match o.layout {
        Layout::Auto if p.omega < STRIP_ANGLE => Layout::Strip,
        Layout::Auto => Layout::Disk,
        l => l,
    };
    let mut mesh = match layout {
        Layout::Strip => build_strip(p, o)?,
        _ => build_disk(p, o)?,
    };
    orient(&mut mesh);
    Ok(mesh)
}

fn orient(mesh: &mut Mesh) {
    for t in mesh.triangles.iter_mut() {
        if signed_area(&mesh.vertices, t) < 0.0 {
            t.swap(1, 2);
        }
    }
}

struct Builder {
    vertices: Vec<[f64; 2]>,
    boundary: Vec<bool>,
    twin: Vec<Option<(usize, Ray)>>,
    triangles: Vec<[usize; 3]>,
    interface_edges: Vec<InterfaceEdge>,
}

impl Builder {
    fn new() -> Self {
        Self {
            vertices: Vec::new(),
            boundary: Vec::new(),
            twin: Vec::new(),
            triangles: Vec::new(),
            interface_edges: Vec::new(),
        }
    }

    fn vertex(&mut self, x: [f64; 2], boundary: bool) -> usize {
        self.vertices.push(x);
        self.boundary.push(boundary);
        self.twin.push(None);
        self.vertices.len() - 1
    }

    /// Plus and minus copies of an interface point.
    fn pair(&mut self, x: [f64; 2], boundary: bool, ray: Ray) -> (usize, usize) {
        let plus = self.vertex(x, boundary);
        let minus = self.vertex(x, boundary);
        self.twin[minus] = Some((plus, ray));
        (plus, minus)
    }

    fn finish(self, corner: Option<usize>, o: &MeshOptions, layout: Layout) -> Mesh {
        Mesh {
            vertices: self.vertices,
            triangles: self.triangles,
            interface_edges: self.interface_edges,
            corner_vertex: corner,
            boundary: self.boundary,
            twin: self.twin,
            bc: o.bc,
            layout,
            h: o.h,
            radius: o.radius,
            grading: o.grading,
        }
    }
}

/// Triangulates the band between two polylines of increasing angle.
fn zipper(tris: &mut Vec<[usize; 3]>, inner: &[(usize, f64)], outer: &[(usize, f64)]) {
    let (na, nb) = (inner.len() - 1, outer.len() - 1);
    let (mut i, mut j) = (0, 0);
    while i < na || j < nb {
        let advance_inner = if i == na {
            false
        } else if j == nb {
            true
        } else {
            inner[i + 1].1 < outer[j + 1].1
        };
        if advance_inner {
            tris.push([inner[i].0, outer[j].0, inner[i + 1].0]);
            i += 1;
        } else {
            tris.push([inner[i].0, outer[j].0, outer[j + 1].0]);
            j += 1;
        }
    }
}

fn build_disk(p: &PhysParams, o: &MeshOptions) -> Result<Mesh> {
    let w = p.omega;
    let required = 50.0 * o.radius * w.sin();
    if o.h > required {
        return Err(FemError::DegenerateGeometry {
            h: o.h,
            required_h: required,
        });
    }
    let q = 1.0 / (1.0 - o.grading);
    let rings = ((q * o.radius / o.h).ceil() as usize).max(2);
    let radius = |k: usize| o.radius * (k as f64 / rings as f64).powf(q);

    let mut b = Builder::new();
    let corner = b.vertex([0.0, 0.0], false);
    // (start angle, span, plus side?)
    let sectors = [(-w, 2.0 * w, true), (w, 2.0 * PI - 2.0 * w, false)];
    let mut prev: Vec<Vec<(usize, f64)>> = sectors.iter().map(|&(a0, _, _)| vec![(corner, a0)]).collect();
    let mut prev_counts = [0usize; 2];
    // (plus, minus) copies on the previous ring
    let mut prev_left = (corner, corner);
    let mut prev_right = (corner, corner);
    for k in 1..=rings {
        let r = radius(k);
        let dr = r - radius(k - 1);
        let on_boundary = k == rings;
        let (lp, lm) = b.pair([r * w.cos(), r * w.sin()], on_boundary, Ray::Left);
        let (rp, rm) = b.pair([r * w.cos(), -r * w.sin()], on_boundary, Ray::Right);
        for (s, &(a0, span, plus)) in sectors.iter().enumerate() {
            let n = ((span * r / dr).ceil() as usize)
                .max((span / (PI / 2.0)).ceil() as usize)
                .max(prev_counts[s])
                .max(1);
            prev_counts[s] = n;
            let mut ring = Vec::with_capacity(n + 1);
            for j in 0..=n {
                let a = a0 + span * j as f64 / n as f64;
                let id = if j == 0 {
                    if plus {
                        rp
                    } else {
                        lm
                    }
                } else if j == n {
                    if plus {
                        lp
                    } else {
                        rm
                    }
                } else {
                    b.vertex([r * a.cos(), r * a.sin()], on_boundary)
                };
                ring.push((id, a));
            }
            if k == 1 {
                for j in 0..n {
                    b.triangles.push([corner, ring[j].0, ring[j + 1].0]);
                }
            } else {
                zipper(&mut b.triangles, &prev[s], &ring);
            }
            prev[s] = ring;
        }
        b.interface_edges.push(InterfaceEdge {
            ray: Ray::Left,
            plus: [prev_left.0, lp],
            minus: [prev_left.1, lm],
        });
        b.interface_edges.push(InterfaceEdge {
            ray: Ray::Right,
            plus: [prev_right.0, rp],
            minus: [prev_right.1, rm],
        });
        prev_left = (lp, lm);
        prev_right = (rp, rm);
    }
    Ok(b.finish(Some(corner), o, Layout::Disk))
}

/// Number of wedge-interior intervals and of graded intervals on each side for spacing `h`.
pub fn strip_counts(h: f64) -> (usize, usize) {
    let n_in = ((0.6 / h).ceil() as usize).max(2);
    let n_out = ((6.0 / h).ceil() as usize).max(4);
    (n_in, n_out)
}

fn build_strip(p: &PhysParams, o: &MeshOptions) -> Result<Mesh> {
    let tan = p.omega.tan();
    let (x0, x1) = (o.radius / 6.0, o.radius);
    let decay = if p.tau < 0.0 { p.constants().kappa0 } else { p.m };
    let y_out = x1 * tan + 8.0 / decay;
    let n_x = ((x1 - x0) / o.h).ceil() as usize;
    let (n_in, n_out) = strip_counts(o.h);
    let grade = |k: usize| (k as f64 / n_out as f64).powf(1.5);

    let mut b = Builder::new();
    // columns of (bottom region, wedge, top region) vertex lists, each bottom-to-top
    let mut cols: Vec<[Vec<usize>; 3]> = Vec::with_capacity(n_x + 1);
    for i in 0..=n_x {
        let x = x0 + (x1 - x0) * i as f64 / n_x as f64;
        let w = x * tan;
        let edge = i == 0 || i == n_x;
        let mut below = Vec::with_capacity(n_out + 1);
        for k in (1..=n_out).rev() {
            below.push(b.vertex([x, -(w + (y_out - w) * grade(k))], edge || k == n_out));
        }
        let (rp, rm) = b.pair([x, -w], edge, Ray::Right);
        below.push(rm);
        let mut wedge = vec![rp];
        for j in 1..n_in {
            wedge.push(b.vertex([x, w * (-1.0 + 2.0 * j as f64 / n_in as f64)], edge));
        }
        let (lp, lm) = b.pair([x, w], edge, Ray::Left);
        wedge.push(lp);
        let mut above = vec![lm];
        for k in 1..=n_out {
            above.push(b.vertex([x, w + (y_out - w) * grade(k)], edge || k == n_out));
        }
        cols.push([below, wedge, above]);
    }
    for i in 0..n_x {
        for region in 0..3 {
            let (a, c) = (&cols[i][region], &cols[i + 1][region]);
            for j in 0..a.len() - 1 {
                b.triangles.push([a[j], c[j], c[j + 1]]);
                b.triangles.push([a[j], c[j + 1], a[j + 1]]);
            }
        }
        let (a, c) = (&cols[i], &cols[i + 1]);
        b.interface_edges.push(InterfaceEdge {
            ray: Ray::Right,
            plus: [a[1][0], c[1][0]],
            minus: [*a[0].last().unwrap(), *c[0].last().unwrap()],
        });
        b.interface_edges.push(InterfaceEdge {
            ray: Ray::Left,
            plus: [*a[1].last().unwrap(), *c[1].last().unwrap()],
            minus: [a[2][0], c[2][0]],
        });
    }
    Ok(b.finish(None, o, Layout::Strip))
}

/// Red refinement: every triangle split into four through its edge midpoints. The discrete
/// space of the result contains that of `mesh`.
pub fn refine(mesh: &Mesh) -> Mesh {
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut uses: HashMap<(usize, usize), u32> = HashMap::new();
    for t in &mesh.triangles {
        for e in 0..3 {
            *uses.entry(key(t[e], t[(e + 1) % 3])).or_insert(0) += 1;
        }
    }
    let mut on_interface = std::collections::HashSet::new();
    for e in &mesh.interface_edges {
        on_interface.insert(key(e.plus[0], e.plus[1]));
        on_interface.insert(key(e.minus[0], e.minus[1]));
    }
    let mut vertices = mesh.vertices.clone();
    let mut boundary = mesh.boundary.clone();
    let mut twin = mesh.twin.clone();
    let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
    let mut midpoint = |a: usize,
                        b: usize,
                        vertices: &mut Vec<[f64; 2]>,
                        boundary: &mut Vec<bool>,
                        twin: &mut Vec<Option<(usize, Ray)>>|
     -> usize {
        let k = key(a, b);
        if let Some(&m) = mid.get(&k) {
            return m;
        }
        let (pa, pb) = (vertices[a], vertices[b]);
        vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
        boundary.push(uses[&k] == 1 && !on_interface.contains(&k));
        twin.push(None);
        let id = vertices.len() - 1;
        mid.insert(k, id);
        id
    };
    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());
    for t in &mesh.triangles {
        let m01 = midpoint(t[0], t[1], &mut vertices, &mut boundary, &mut twin);
        let m12 = midpoint(t[1], t[2], &mut vertices, &mut boundary, &mut twin);
        let m20 = midpoint(t[2], t[0], &mut vertices, &mut boundary, &mut twin);
        triangles.push([t[0], m01, m20]);
        triangles.push([m01, t[1], m12]);
        triangles.push([m20, m12, t[2]]);
        triangles.push([m01, m12, m20]);
    }
    let mut interface_edges = Vec::with_capacity(2 * mesh.interface_edges.len());
    for e in &mesh.interface_edges {
        let mp = midpoint(e.plus[0], e.plus[1], &mut vertices, &mut boundary, &mut twin);
        let mm = midpoint(e.minus[0], e.minus[1], &mut vertices, &mut boundary, &mut twin);
        twin[mm] = Some((mp, e.ray));
        interface_edges.push(InterfaceEdge {
            ray: e.ray,
            plus: [e.plus[0], mp],
            minus: [e.minus[0], mm],
        });
        interface_edges.push(InterfaceEdge {
            ray: e.ray,
            plus: [mp, e.plus[1]],
            minus: [mm, e.minus[1]],
        });
    }
    Mesh {
        vertices,
        triangles,
        interface_edges,
        corner_vertex: mesh.corner_vertex,
        boundary,
        twin,
        bc: mesh.bc,
        layout: mesh.layout,
        h: 0.5 * mesh.h,
        radius: mesh.radius,
        grading: mesh.grading,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(omega: f64) -> PhysParams {
        PhysParams::new(-1.0, 1.0, omega).unwrap()
    }

    fn disk(omega: f64, radius: f64, h: f64) -> Mesh {
        let o = MeshOptions {
            radius,
            h,
            layout: Layout::Disk,
            ..MeshOptions::default()
        };
        build_mesh(&params(omega), &o).unwrap()
    }

    fn check_copies(m: &Mesh) {
        let mut copies: HashMap<[u64; 2], usize> = HashMap::new();
        for e in &m.interface_edges {
            for &v in e.plus.iter().chain(&e.minus) {
                let x = m.vertices[v];
                copies.entry([x[0].to_bits(), x[1].to_bits()]).or_default();
            }
        }
        for (v, x) in m.vertices.iter().enumerate() {
            if let Some(c) = copies.get_mut(&[x[0].to_bits(), x[1].to_bits()]) {
                *c += 1;
                assert_eq!(m.corner_vertex == Some(v), x == &[0.0, 0.0]);
            }
        }
        for (x, c) in copies {
            let is_corner = x == [0f64.to_bits(), 0f64.to_bits()];
            assert_eq!(c, if is_corner { 1 } else { 2 }, "{x:?}");
        }
    }

    #[test]
    fn disk_mesh_is_valid() {
        let m = disk(PI / 4.0, 10.0, 0.5);
        assert!(m.min_area() > 0.0);
        check_copies(&m);
        for e in &m.interface_edges {
            for k in 0..2 {
                assert_eq!(m.vertices[e.plus[k]], m.vertices[e.minus[k]]);
                if Some(e.minus[k]) != m.corner_vertex {
                    assert_eq!(m.twin[e.minus[k]], Some((e.plus[k], e.ray)));
                }
            }
        }
    }

    #[test]
    fn no_triangle_mixes_sides() {
        let m = disk(0.3, 5.0, 0.4);
        let plus: std::collections::HashSet<usize> = m
            .interface_edges
            .iter()
            .flat_map(|e| e.plus)
            .filter(|&v| Some(v) != m.corner_vertex)
            .collect();
        let minus: std::collections::HashSet<usize> = m
            .interface_edges
            .iter()
            .flat_map(|e| e.minus)
            .filter(|&v| Some(v) != m.corner_vertex)
            .collect();
        for t in &m.triangles {
            let c = [t[0], t[1], t[2]];
            let cx = (m.vertices[c[0]][0] + m.vertices[c[1]][0] + m.vertices[c[2]][0]) / 3.0;
            let cy = (m.vertices[c[0]][1] + m.vertices[c[1]][1] + m.vertices[c[2]][1]) / 3.0;
            let inside = cy.atan2(cx).abs() < 0.3;
            for v in c {
                if plus.contains(&v) {
                    assert!(inside);
                }
                if minus.contains(&v) {
                    assert!(!inside);
                }
            }
        }
    }

    #[test]
    fn disk_area() {
        for &h in &[0.5, 0.25] {
            let m = disk(PI / 4.0, 10.0, h);
            let exact = PI * 100.0;
            assert!((m.area() - exact).abs() < 0.01 * exact);
        }
    }

    #[test]
    fn halving_h_quadruples_triangles() {
        for &w in &[PI / 4.0, PI / 2.0, 0.2] {
            let a = disk(w, 10.0, 0.5).triangles.len() as f64;
            let b = disk(w, 10.0, 0.25).triangles.len() as f64;
            assert!((b / a - 4.0).abs() < 0.6, "{w}: {}", b / a);
        }
    }

    #[test]
    fn thin_wedge_rejected_on_disk() {
        let o = MeshOptions {
            layout: Layout::Disk,
            ..MeshOptions::default()
        };
        match build_mesh(&params(5e-4), &o) {
            Err(FemError::DegenerateGeometry { required_h, .. }) => assert!(required_h < 0.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn strip_mesh_is_valid() {
        let o = MeshOptions {
            radius: 60.0,
            h: 1.0,
            ..MeshOptions::default()
        };
        let m = build_mesh(&params(3.2e-3), &o).unwrap();
        assert_eq!(m.layout, Layout::Strip);
        assert!(m.min_area() > 0.0);
        assert!(m.corner_vertex.is_none());
        check_copies(&m);
        let (x0, x1) = (10.0, 60.0);
        let y = 60.0 * (3.2e-3f64).tan() + 10.0;
        assert!((m.area() - (x1 - x0) * 2.0 * y).abs() < 1e-9 * m.area());
        for e in &m.interface_edges {
            for v in e.plus {
                let x = m.vertices[v];
                let want = match e.ray {
                    Ray::Left => x[0] * (3.2e-3f64).tan(),
                    Ray::Right => -x[0] * (3.2e-3f64).tan(),
                };
                assert!((x[1] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn refinement_keeps_structure() {
        let m = disk(PI / 3.0, 3.0, 0.75);
        let r = refine(&m);
        assert_eq!(r.triangles.len(), 4 * m.triangles.len());
        assert_eq!(r.interface_edges.len(), 2 * m.interface_edges.len());
        assert!((r.area() - m.area()).abs() < 1e-12 * m.area());
        assert!(r.min_area() > 0.0);
        check_copies(&r);
        let nb = |m: &Mesh| m.boundary.iter().filter(|&&b| b).count();
        // each outer arc gains one midpoint per edge
        assert_eq!(nb(&r), 2 * nb(&m) - 2);
    }
}
