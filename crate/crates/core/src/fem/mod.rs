//! P1 finite elements on the structured mesh: heterogeneous diffusion
//! coefficient, mass/stiffness assembly with homogeneous Dirichlet
//! elimination, and single-point evaluation of nodal fields.

pub mod sparse;

use crate::error::{Error, Result};
use crate::mesh::FineMesh;
use crate::scalar::Scalar;
use rand::{Rng, SeedableRng};
use sparse::CsrMatrix;

/// Piecewise-constant diffusion coefficient, one value per fine square cell
/// (both triangles of a square share it).
#[derive(Clone, Debug)]
pub struct MediumField<T> {
    pub cells_per_side: usize,
    /// Row-major cell values, `kappa[cj * cells + ci] > 0`.
    pub kappa: Vec<T>,
}

impl<T: Scalar> MediumField<T> {
    pub fn homogeneous(cells_per_side: usize, value: T) -> Result<Self> {
        if value <= T::zero() {
            return Err(Error::config("kappa must be positive"));
        }
        Ok(MediumField { cells_per_side, kappa: vec![value; cells_per_side * cells_per_side] })
    }

    pub fn from_values(cells_per_side: usize, kappa: Vec<T>) -> Result<Self> {
        if kappa.len() != cells_per_side * cells_per_side {
            return Err(Error::config(format!(
                "kappa has {} values, expected {}",
                kappa.len(),
                cells_per_side * cells_per_side
            )));
        }
        if kappa.iter().any(|&v| v <= T::zero()) {
            return Err(Error::config("kappa must be positive everywhere"));
        }
        Ok(MediumField { cells_per_side, kappa })
    }

    /// Parse the plain-text raster format: first line `rows cols`, then
    /// `rows * cols` positive reals in row-major order.
    pub fn from_raster_str(text: &str) -> Result<Self> {
        let mut it = text.split_whitespace();
        let rows: usize = it
            .next()
            .ok_or_else(|| Error::format("raster: missing row count"))?
            .parse()
            .map_err(|_| Error::format("raster: bad row count"))?;
        let cols: usize = it
            .next()
            .ok_or_else(|| Error::format("raster: missing column count"))?
            .parse()
            .map_err(|_| Error::format("raster: bad column count"))?;
        if rows != cols {
            return Err(Error::format(format!("raster must be square, got {rows} x {cols}")));
        }
        let mut kappa = Vec::with_capacity(rows * cols);
        for tok in it {
            let v: f64 = tok.parse().map_err(|_| Error::format(format!("raster: bad value {tok}")))?;
            kappa.push(T::from_f64c(v));
        }
        if kappa.len() != rows * cols {
            return Err(Error::format(format!(
                "raster: expected {} values, found {}",
                rows * cols,
                kappa.len()
            )));
        }
        MediumField::from_values(rows, kappa)
    }

    pub fn to_raster_string(&self) -> String {
        let n = self.cells_per_side;
        let mut out = format!("{n} {n}\n");
        for row in self.kappa.chunks(n) {
            let line: Vec<String> = row.iter().map(|v| format!("{}", v.to_f64c())).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Synthetic high-contrast medium: horizontal channels of elevated
    /// conductivity with a few vertical connectors, deterministic in `seed`.
    pub fn synthetic_channels(cells_per_side: usize, seed: u64, contrast: T) -> Result<Self> {
        if contrast < T::one() {
            return Err(Error::config("channel contrast must be >= 1"));
        }
        let n = cells_per_side;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let mut kappa = vec![T::one(); n * n];
        let thick = (n / 25).max(1);
        let n_channels = rng.gen_range(4..=6);
        for _ in 0..n_channels {
            let cj0 = rng.gen_range(0..n.saturating_sub(thick).max(1));
            let ci0 = rng.gen_range(0..n / 4 + 1);
            let ci1 = rng.gen_range(3 * n / 4..=n);
            for cj in cj0..(cj0 + thick).min(n) {
                for ci in ci0..ci1 {
                    kappa[cj * n + ci] = contrast;
                }
            }
        }
        let n_connectors = rng.gen_range(2..=3);
        for _ in 0..n_connectors {
            let ci0 = rng.gen_range(0..n.saturating_sub(thick).max(1));
            let cj0 = rng.gen_range(0..n / 2);
            let cj1 = rng.gen_range(n / 2..=n);
            for ci in ci0..(ci0 + thick).min(n) {
                for cj in cj0..cj1 {
                    kappa[cj * n + ci] = contrast;
                }
            }
        }
        MediumField::from_values(n, kappa)
    }

    #[inline]
    pub fn cell_value(&self, ci: usize, cj: usize) -> T {
        self.kappa[cj * self.cells_per_side + ci]
    }
}

/// Spatial source component `f`, sampled at the fine nodes.
#[derive(Clone, Debug)]
pub struct SpatialSource<T> {
    pub values: Vec<T>,
    pub support_mask: Vec<bool>,
}

impl<T: Scalar> SpatialSource<T> {
    /// Validate `0 <= f <= cf` and `f = 0` on the boundary.
    pub fn from_nodal(mesh: &FineMesh<T>, values: Vec<T>, cf: T) -> Result<Self> {
        if values.len() != mesh.node_count() {
            return Err(Error::config(format!(
                "source has {} values, mesh has {} nodes",
                values.len(),
                mesh.node_count()
            )));
        }
        for (node, &v) in values.iter().enumerate() {
            if v < T::zero() || v > cf {
                return Err(Error::config(format!(
                    "source value {v} at node {node} outside [0, {cf}]"
                )));
            }
            if !mesh.interior_mask[node] && v != T::zero() {
                return Err(Error::config(format!("source does not vanish on the boundary (node {node})")));
            }
        }
        let support_mask = values.iter().map(|&v| v > T::zero()).collect();
        Ok(SpatialSource { values, support_mask })
    }

    /// Smooth compactly supported product bump centered at `center` with
    /// the given `radius` in each direction, clipped to `[0, cf]`.
    pub fn bump(mesh: &FineMesh<T>, center: [T; 2], radius: T, amplitude: T, cf: T) -> Result<Self> {
        if radius <= T::zero() || amplitude <= T::zero() {
            return Err(Error::config("bump radius and amplitude must be positive"));
        }
        let values: Vec<T> = mesh
            .nodes
            .iter()
            .map(|&p| {
                let v = amplitude
                    * bump_1d((p[0] - center[0]) / radius)
                    * bump_1d((p[1] - center[1]) / radius);
                v.min(cf).max(T::zero())
            })
            .collect();
        SpatialSource::from_nodal(mesh, values, cf)
    }

    /// Nodal raster with `(m+1) x (m+1)` entries, same layout as the mesh.
    pub fn from_raster_str(mesh: &FineMesh<T>, text: &str, cf: T) -> Result<Self> {
        let mut it = text.split_whitespace();
        let rows: usize = it
            .next()
            .ok_or_else(|| Error::format("source raster: missing row count"))?
            .parse()
            .map_err(|_| Error::format("source raster: bad row count"))?;
        let cols: usize = it
            .next()
            .ok_or_else(|| Error::format("source raster: missing column count"))?
            .parse()
            .map_err(|_| Error::format("source raster: bad column count"))?;
        let n1 = mesh.cells_per_side + 1;
        if rows != n1 || cols != n1 {
            return Err(Error::format(format!(
                "source raster is {rows} x {cols}, mesh needs {n1} x {n1}"
            )));
        }
        let mut values = Vec::with_capacity(n1 * n1);
        for tok in it {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::format(format!("source raster: bad value {tok}")))?;
            values.push(T::from_f64c(v));
        }
        if values.len() != n1 * n1 {
            return Err(Error::format("source raster: value count mismatch"));
        }
        SpatialSource::from_nodal(mesh, values, cf)
    }

    /// Source restricted to the interior unknowns.
    pub fn interior_values(&self, mesh: &FineMesh<T>) -> Vec<T> {
        mesh.interior_nodes.iter().map(|&n| self.values[n]).collect()
    }

    pub fn max_value(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &v| m.max(v))
    }
}

/// `exp(1 - 1/(1 - s^2))` for `|s| < 1`, zero outside; equals 1 at `s = 0`.
fn bump_1d<T: Scalar>(s: T) -> T {
    let s2 = s * s;
    if s2 >= T::one() {
        T::zero()
    } else {
        (T::one() - T::one() / (T::one() - s2)).exp()
    }
}

/// Assembled mass and stiffness matrices over the interior nodes.
#[derive(Clone, Debug)]
pub struct OperatorPair<T> {
    pub mass: CsrMatrix<T>,
    pub stiffness: CsrMatrix<T>,
    pub size: usize,
}

/// P1 Galerkin matrices over all nodes, no boundary treatment.
pub fn assemble_full<T: Scalar>(
    mesh: &FineMesh<T>,
    medium: &MediumField<T>,
) -> Result<(CsrMatrix<T>, CsrMatrix<T>)> {
    if medium.cells_per_side != mesh.cells_per_side {
        return Err(Error::config(format!(
            "medium grid {} does not match mesh {}",
            medium.cells_per_side, mesh.cells_per_side
        )));
    }
    if medium.kappa.iter().any(|&k| k <= T::zero()) {
        return Err(Error::config("kappa must be positive everywhere"));
    }

    let n = mesh.node_count();
    let mut mass_trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut stiff_trip = Vec::with_capacity(9 * mesh.triangles.len());

    for (t, tri) in mesh.triangles.iter().enumerate() {
        let (ci, cj) = mesh.cell_of_triangle(t);
        let kappa = medium.cell_value(ci, cj);
        let [p0, p1, p2] = mesh.triangle_coords(t);
        let b = [p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]];
        let c = [p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]];
        let area2 = mesh.double_area(t);
        let area = area2 / T::from_f64c(2.0);
        let four_area = area2 * T::from_f64c(2.0);
        for a in 0..3 {
            for bb in 0..3 {
                let s = kappa * (b[a] * b[bb] + c[a] * c[bb]) / four_area;
                let m = if a == bb {
                    area / T::from_f64c(6.0)
                } else {
                    area / T::from_f64c(12.0)
                };
                stiff_trip.push((tri[a], tri[bb], s));
                mass_trip.push((tri[a], tri[bb], m));
            }
        }
    }

    Ok((
        CsrMatrix::from_triplets(n, n, mass_trip),
        CsrMatrix::from_triplets(n, n, stiff_trip),
    ))
}

/// Assemble with homogeneous Dirichlet conditions eliminated: the returned
/// operators act on the interior unknowns only.
pub fn assemble<T: Scalar>(mesh: &FineMesh<T>, medium: &MediumField<T>) -> Result<OperatorPair<T>> {
    let (mass_full, stiff_full) = assemble_full(mesh, medium)?;
    let mass = restrict_to_interior(mesh, &mass_full);
    let stiffness = restrict_to_interior(mesh, &stiff_full);
    Ok(OperatorPair { size: mesh.interior_count(), mass, stiffness })
}

/// Drop boundary rows and columns of a full-node matrix.
pub fn restrict_to_interior<T: Scalar>(mesh: &FineMesh<T>, full: &CsrMatrix<T>) -> CsrMatrix<T> {
    let m = mesh.interior_count();
    let mut trip = Vec::with_capacity(full.nnz());
    for (ri, &rnode) in mesh.interior_nodes.iter().enumerate() {
        for (cnode, v) in full.row(rnode) {
            if let Some(ci) = mesh.interior_index[cnode] {
                trip.push((ri, ci, v));
            }
        }
    }
    CsrMatrix::from_triplets(m, m, trip)
}

/// Expand an interior vector to all nodes, zero on the boundary.
pub fn interior_to_full<T: Scalar>(mesh: &FineMesh<T>, interior: &[T]) -> Vec<T> {
    let mut full = vec![T::zero(); mesh.node_count()];
    for (i, &node) in mesh.interior_nodes.iter().enumerate() {
        full[node] = interior[i];
    }
    full
}

/// P1 interpolation of a nodal field (all nodes) at a point strictly
/// inside the domain.
pub fn evaluate_at_point<T: Scalar>(mesh: &FineMesh<T>, nodal: &[T], point: [T; 2]) -> Result<T> {
    let w = interpolation_weights(mesh, point)?;
    Ok(w.iter().map(|&(node, wt)| wt * nodal[node]).sum())
}

/// Barycentric weights of the triangle containing `point`, as
/// `(node, weight)` pairs. The point must be strictly interior to `D`.
pub fn interpolation_weights<T: Scalar>(
    mesh: &FineMesh<T>,
    point: [T; 2],
) -> Result<[(usize, T); 3]> {
    let x = point[0].to_f64c();
    let y = point[1].to_f64c();
    if !(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0) {
        return Err(Error::config(format!("evaluation point ({x}, {y}) not strictly inside the domain")));
    }
    let t = mesh.cell_of_point(point)?;
    let tri = mesh.triangles[t];
    let [p0, p1, p2] = mesh.triangle_coords(t);
    let area2 = mesh.double_area(t);
    // lambda_a = (a_a + b_a x + c_a y) / (2 area)
    let a = [
        p1[0] * p2[1] - p2[0] * p1[1],
        p2[0] * p0[1] - p0[0] * p2[1],
        p0[0] * p1[1] - p1[0] * p0[1],
    ];
    let b = [p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]];
    let c = [p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]];
    let mut out = [(0usize, T::zero()); 3];
    for k in 0..3 {
        let lam = (a[k] + b[k] * point[0] + c[k] * point[1]) / area2;
        out[k] = (tri[k], lam);
    }
    Ok(out)
}

/// Interpolation weights mapped to interior equation indices; boundary
/// vertices (value zero) are dropped.
pub fn interior_observation_weights<T: Scalar>(
    mesh: &FineMesh<T>,
    point: [T; 2],
) -> Result<Vec<(usize, T)>> {
    let w = interpolation_weights(mesh, point)?;
    Ok(w.iter()
        .filter_map(|&(node, wt)| mesh.interior_index[node].map(|i| (i, wt)))
        .collect())
}
