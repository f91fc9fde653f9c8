//! Counting Ritz values below the edge of the essential spectrum.

use dshell_core::PhysParams;
use serde::{Deserialize, Serialize};

use crate::assemble::{assemble, HermitianPencil};
use crate::eigen::{solve_lowest, Eigenpairs, SolverOptions};
use crate::mesh::{build_mesh, BoundaryCondition, Layout, Mesh, MeshOptions};
use crate::Result;

/// Margin multiplier on the two-mesh error estimate.
pub const MARGIN_FACTOR: f64 = 5.0;
/// Margin floor relative to `eps_tau^2`.
pub const MARGIN_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshInfo {
    pub layout: Layout,
    pub bc: BoundaryCondition,
    pub radius: f64,
    pub h: f64,
    pub grading: f64,
    pub vertices: usize,
    pub triangles: usize,
    pub interface_edges: usize,
    pub unknowns: usize,
}

impl MeshInfo {
    pub fn new(mesh: &Mesh, pencil: &HermitianPencil) -> Self {
        Self {
            layout: mesh.layout,
            bc: mesh.bc,
            radius: mesh.radius,
            h: mesh.h,
            grading: mesh.grading,
            vertices: mesh.vertices.len(),
            triangles: mesh.triangles.len(),
            interface_edges: mesh.interface_edges.len(),
            unknowns: pencil.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Lowest Ritz values, ascending.
    pub eigenvalues: Vec<f64>,
    /// `eps_tau^2`
    pub gap_edge: f64,
    pub margin: f64,
    /// Number of Ritz values below `gap_edge - margin`.
    pub count_below: usize,
    /// `|A x - mu B x| / |B x|` per pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub mesh: MeshInfo,
    /// Ritz values on the mesh with doubled spacing, used for the margin.
    pub coarse_eigenvalues: Vec<f64>,
    pub coarse_mesh: MeshInfo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountOptions {
    pub mesh: MeshOptions,
    pub k: usize,
    /// Shift; `None` uses `-0.1 m^2`.
    pub sigma: Option<f64>,
    pub solver: SolverOptions,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            mesh: MeshOptions::default(),
            k: 4,
            sigma: None,
            solver: SolverOptions::default(),
        }
    }
}

/// Builds, assembles and solves on one mesh.
pub fn solve_on_mesh(
    p: &PhysParams,
    mesh_opts: &MeshOptions,
    k: usize,
    sigma: f64,
    solver: &SolverOptions,
) -> Result<(MeshInfo, Eigenpairs)> {
    let mesh = build_mesh(p, mesh_opts)?;
    let pencil = assemble(p, &mesh)?;
    let info = MeshInfo::new(&mesh, &pencil);
    drop(mesh);
    let k = k.min(pencil.dim());
    let pairs = solve_lowest(&pencil, k, sigma, solver)?;
    Ok((info, pairs))
}

/// Margin from the lowest Ritz value on meshes `h` and `2h`, assuming second-order
/// convergence of the eigenvalue.
pub fn two_mesh_margin(fine: f64, coarse: f64, gap_edge: f64) -> f64 {
    (MARGIN_FACTOR * (coarse - fine).abs() / 3.0).max(MARGIN_FLOOR * gap_edge)
}

pub fn count_bound_states(p: &PhysParams, opts: &CountOptions) -> Result<SpectralReport> {
    let gap_edge = p.constants().eps_tau.powi(2);
    let sigma = opts.sigma.unwrap_or(-0.1 * p.m * p.m);
    let (info, fine) = solve_on_mesh(p, &opts.mesh, opts.k, sigma, &opts.solver)?;
    let coarse_opts = MeshOptions {
        h: 2.0 * opts.mesh.h,
        ..opts.mesh
    };
    let (coarse_info, coarse) = solve_on_mesh(p, &coarse_opts, opts.k, sigma, &opts.solver)?;
    let margin = two_mesh_margin(fine.values[0], coarse.values[0], gap_edge);
    let count_below = fine.values.iter().filter(|&&v| v < gap_edge - margin).count();
    Ok(SpectralReport {
        eigenvalues: fine.values,
        gap_edge,
        margin,
        count_below,
        residuals: fine.residuals,
        iterations: fine.iterations,
        mesh: info,
        coarse_eigenvalues: coarse.values,
        coarse_mesh: coarse_info,
    })
}
