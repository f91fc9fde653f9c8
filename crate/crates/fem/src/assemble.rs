//! Assembly of `|grad u|^2 + m^2 |u|^2 + (2m/tau) |u_+ - u_-|^2` for P1 spinors, with the
//! minus copies on the interface eliminated through `u_- = M u_+`.

use dshell_core::model::{m_left, m_right, pauli};
use dshell_core::PhysParams;
use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::mesh::{Mesh, Ray};
use crate::sparse::{reverse_cuthill_mckee, Block, BlockCsr, ZERO};
use crate::Result;

type Mat2 = Matrix2<C64>;

/// Triangles per assembly task. Fixed so the summation order, and hence the result, does
/// not depend on the number of threads.
const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VertexDof {
    Fixed,
    /// Reduced block index.
    Free(usize),
    /// Value is `map` applied to the unknowns of block `master`.
    Slave {
        master: usize,
        map: Mat2,
    },
}

#[derive(Debug, Clone)]
pub struct DofMap {
    pub vertex: Vec<VertexDof>,
    pub n_blocks: usize,
}

impl DofMap {
    /// Scalar unknowns.
    pub fn dim(&self) -> usize {
        2 * self.n_blocks
    }

    /// Block index and map of a vertex, `None` when the vertex is fixed.
    pub fn resolve(&self, v: usize) -> Option<(usize, Mat2)> {
        match self.vertex[v] {
            VertexDof::Fixed => None,
            VertexDof::Free(i) => Some((i, pauli(0).expect("identity"))),
            VertexDof::Slave { master, map } => Some((master, map)),
        }
    }

    /// Spinor value at vertex `v` for the reduced vector `x`.
    pub fn value(&self, v: usize, x: &[C64]) -> [C64; 2] {
        match self.resolve(v) {
            None => [ZERO; 2],
            Some((i, t)) => [
                t[(0, 0)] * x[2 * i] + t[(0, 1)] * x[2 * i + 1],
                t[(1, 0)] * x[2 * i] + t[(1, 1)] * x[2 * i + 1],
            ],
        }
    }
}

/// The pencil `(A, B)` on the reduced unknowns.
#[derive(Debug, Clone)]
pub struct HermitianPencil {
    pub a: BlockCsr,
    pub b: BlockCsr,
    pub dof_map: DofMap,
}

impl HermitianPencil {
    pub fn dim(&self) -> usize {
        self.dof_map.dim()
    }
}

pub fn assemble(p: &PhysParams, mesh: &Mesh) -> Result<HermitianPencil> {
    assemble_with(p, mesh, true)
}

/// With `coupling = false` the interface is ignored: traces are continuous, the corner is
/// free and no jump term is added, leaving two copies of `-Laplace + m^2`.
pub fn assemble_with(p: &PhysParams, mesh: &Mesh, coupling: bool) -> Result<HermitianPencil> {
    let eye = pauli(0).expect("identity");
    let (ml, mr) = if coupling {
        (m_left(p).entries, m_right(p).entries)
    } else {
        (eye, eye)
    };
    // det M = 1 away from tau = +-2, which PhysParams already excludes
    debug_assert!((ml.determinant() - C64::new(1.0, 0.0)).norm() < 1e-8 * ml.norm_squared().max(1.0));
    let ray_map = |r: Ray| if r == Ray::Left { ml } else { mr };

    // without coupling the corner is an ordinary vertex
    let is_fixed = |v: usize| mesh.is_fixed(v) && (coupling || mesh.corner_vertex != Some(v));
    // masters in mesh order, then renumbered by reverse Cuthill-McKee
    let nv = mesh.vertices.len();
    let mut master_of = vec![usize::MAX; nv];
    let mut n_masters = 0;
    for v in 0..nv {
        if mesh.twin[v].is_none() && !is_fixed(v) {
            master_of[v] = n_masters;
            n_masters += 1;
        }
    }
    let owner = |v: usize| -> Option<usize> {
        if is_fixed(v) {
            return None;
        }
        let m = match mesh.twin[v] {
            Some((plus, _)) => master_of[plus],
            None => master_of[v],
        };
        (m != usize::MAX).then_some(m)
    };
    let mut adj: Vec<Vec<usize>> = (0..n_masters).map(|i| vec![i]).collect();
    for t in &mesh.triangles {
        let o: Vec<usize> = t.iter().filter_map(|&v| owner(v)).collect();
        for &i in &o {
            for &j in &o {
                adj[i].push(j);
            }
        }
    }
    for row in adj.iter_mut() {
        row.sort_unstable();
        row.dedup();
    }
    let perm = reverse_cuthill_mckee(&adj);
    let mut padj = vec![Vec::new(); n_masters];
    for (i, row) in adj.iter().enumerate() {
        let mut r: Vec<usize> = row.iter().map(|&j| perm[j]).collect();
        r.sort_unstable();
        padj[perm[i]] = r;
    }
    drop(adj);

    let mut vertex = vec![VertexDof::Fixed; nv];
    for v in 0..nv {
        if let Some(m) = owner(v) {
            vertex[v] = match mesh.twin[v] {
                Some((_, ray)) => VertexDof::Slave {
                    master: perm[m],
                    map: ray_map(ray),
                },
                None => VertexDof::Free(perm[m]),
            };
        }
    }
    let dof_map = DofMap {
        vertex,
        n_blocks: n_masters,
    };

    let mut a = BlockCsr::from_adjacency(&padj);
    let mut b = BlockCsr::from_adjacency(&padj);
    let m2 = p.m * p.m;
    let pattern = &a;
    let dm = &dof_map;
    let verts = &mesh.vertices;
    let chunks: Vec<Vec<(usize, Block, Block)>> = mesh
        .triangles
        .par_chunks(CHUNK)
        .map(|tris| {
            let mut out = Vec::with_capacity(9 * tris.len());
            for t in tris {
                let (k, m) = p1_element(verts, t);
                let loc: Vec<Option<(usize, Mat2)>> = t.iter().map(|&v| dm.resolve(v)).collect();
                for i in 0..3 {
                    let Some((bi, ti)) = loc[i] else { continue };
                    for j in 0..3 {
                        let Some((bj, tj)) = loc[j] else { continue };
                        let g = ti.adjoint() * tj;
                        let slot = pattern.slot(bi, bj).expect("pattern covers element");
                        let sa = C64::from(k[i][j] + m2 * m[i][j]);
                        let sb = C64::from(m[i][j]);
                        out.push((slot, to_block(&(g * sa)), to_block(&(g * sb))));
                    }
                }
            }
            out
        })
        .collect();
    for chunk in chunks {
        for (slot, da, db) in chunk {
            for r in 0..4 {
                a.vals[slot][r] += da[r];
                b.vals[slot][r] += db[r];
            }
        }
    }

    if coupling {
        let weight = 2.0 * p.m / p.tau;
        for e in &mesh.interface_edges {
            let d = eye - ray_map(e.ray);
            let jump = d.adjoint() * d * C64::from(weight);
            let (x0, x1) = (verts[e.plus[0]], verts[e.plus[1]]);
            let len = (x1[0] - x0[0]).hypot(x1[1] - x0[1]);
            let loc: Vec<Option<usize>> = e
                .plus
                .iter()
                .map(|&v| match dm.vertex[v] {
                    VertexDof::Free(i) => Some(i),
                    _ => None,
                })
                .collect();
            for i in 0..2 {
                let Some(bi) = loc[i] else { continue };
                for j in 0..2 {
                    let Some(bj) = loc[j] else { continue };
                    let em = if i == j { len / 3.0 } else { len / 6.0 };
                    let slot = a.slot(bi, bj).expect("interface edge lies in a triangle");
                    let blk = to_block(&(jump * C64::from(em)));
                    for r in 0..4 {
                        a.vals[slot][r] += blk[r];
                    }
                }
            }
        }
    }
    Ok(HermitianPencil { a, b, dof_map })
}

fn to_block(m: &Mat2) -> Block {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

/// P1 stiffness and mass matrices of a triangle.
fn p1_element(v: &[[f64; 2]], t: &[usize; 3]) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let x = [v[t[0]], v[t[1]], v[t[2]]];
    let area = 0.5 * ((x[1][0] - x[0][0]) * (x[2][1] - x[0][1]) - (x[2][0] - x[0][0]) * (x[1][1] - x[0][1]));
    let mut grad = [[0.0; 2]; 3];
    for i in 0..3 {
        let (a, b) = (x[(i + 1) % 3], x[(i + 2) % 3]);
        grad[i] = [(a[1] - b[1]) / (2.0 * area), (b[0] - a[0]) / (2.0 * area)];
    }
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
            m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    (k, m)
}
