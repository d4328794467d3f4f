//! Structured triangulations of the unit square.
//!
//! The fine mesh splits an `m x m` grid of squares into right triangles
//! (diagonal from lower-left to upper-right). The coarse grid groups fine
//! cells into `n x n` blocks and carries, per coarse vertex, the
//! neighborhood `omega_i` (union of adjacent blocks) together with the
//! bilinear hat function sampled at the fine nodes. Node order is row-major
//! from `(0,0)` to `(1,1)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniform triangulation of `D = (0,1)^2`.
#[derive(Clone, Debug)]
pub struct FineMesh<T> {
    /// Number of square cells per side.
    pub cells_per_side: usize,
    /// Node coordinates, row-major: `node = j * (m+1) + i` at `(i h, j h)`.
    pub nodes: Vec<[T; 2]>,
    /// Triangles as node index triples, counter-clockwise.
    pub triangles: Vec<[usize; 3]>,
    /// `true` iff the node is not on the boundary of the square.
    pub interior_mask: Vec<bool>,
    /// Node index -> interior equation index (dense numbering of interiors).
    pub interior_index: Vec<Option<usize>>,
    /// Interior equation index -> node index.
    pub interior_nodes: Vec<usize>,
    /// Mesh size `1 / cells_per_side`.
    pub h: T,
}

/// One coarse vertex together with its neighborhood.
#[derive(Clone, Debug)]
pub struct Neighborhood<T> {
    /// Coarse vertex index this neighborhood belongs to.
    pub vertex: usize,
    /// Coarse blocks `(bi, bj)` whose closure contains the vertex.
    pub blocks: Vec<(usize, usize)>,
    /// Fine nodes in the closed neighborhood, ascending global index.
    pub fine_nodes: Vec<usize>,
    /// Fine triangles contained in the neighborhood.
    pub fine_triangles: Vec<usize>,
    /// Hat function of the coarse vertex sampled at `fine_nodes` (same order).
    pub chi: Vec<T>,
}

/// Coarse partition of the fine mesh into blocks, with neighborhoods and
/// the hat-function partition of unity.
#[derive(Clone, Debug)]
pub struct CoarseGrid<T> {
    /// Number of coarse blocks per side.
    pub blocks_per_side: usize,
    /// Fine cells per coarse block side.
    pub cells_per_block: usize,
    /// Coarse vertex coordinates, row-major, boundary included.
    pub coarse_nodes: Vec<[T; 2]>,
    /// One neighborhood per coarse vertex, same order as `coarse_nodes`.
    pub neighborhoods: Vec<Neighborhood<T>>,
    /// Coarse mesh size `1 / blocks_per_side`.
    pub h_coarse: T,
}

impl<T: Scalar> FineMesh<T> {
    /// Node index of grid position `(i, j)`.
    #[inline]
    pub fn node_id(&self, i: usize, j: usize) -> usize {
        j * (self.cells_per_side + 1) + i
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn interior_count(&self) -> usize {
        self.interior_nodes.len()
    }

    /// Triangle index containing `point`; ties on cell edges resolve to the
    /// lower triangle. Errors when the point lies outside the closed square.
    pub fn cell_of_point(&self, point: [T; 2]) -> Result<usize> {
        let m = self.cells_per_side;
        let x = point[0].to_f64c();
        let y = point[1].to_f64c();
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
            return Err(Error::config(format!("point ({x}, {y}) outside the unit square")));
        }
        let hf = 1.0 / m as f64;
        let ci = ((x / hf).floor() as usize).min(m - 1);
        let cj = ((y / hf).floor() as usize).min(m - 1);
        let xi = x / hf - ci as f64;
        let eta = y / hf - cj as f64;
        let cell = cj * m + ci;
        Ok(if xi >= eta { 2 * cell } else { 2 * cell + 1 })
    }

    /// Vertex coordinates of a triangle.
    pub fn triangle_coords(&self, tri: usize) -> [[T; 2]; 3] {
        let [a, b, c] = self.triangles[tri];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    /// Twice the signed area of a triangle.
    pub fn double_area(&self, tri: usize) -> T {
        let [p0, p1, p2] = self.triangle_coords(tri);
        (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1])
    }

    /// Square cell `(ci, cj)` owning a triangle.
    #[inline]
    pub fn cell_of_triangle(&self, tri: usize) -> (usize, usize) {
        let cell = tri / 2;
        (cell % self.cells_per_side, cell / self.cells_per_side)
    }
}

/// Build the structured fine triangulation with `cells_per_side >= 2`.
pub fn build_fine_mesh<T: Scalar>(cells_per_side: usize) -> Result<FineMesh<T>> {
    if cells_per_side < 2 {
        return Err(Error::config(format!(
            "cells_per_side must be >= 2, got {cells_per_side}"
        )));
    }
    let m = cells_per_side;
    let n1 = m + 1;
    let h = T::from_f64c(1.0 / m as f64);

    let mut nodes = Vec::with_capacity(n1 * n1);
    let mut interior_mask = Vec::with_capacity(n1 * n1);
    for j in 0..n1 {
        for i in 0..n1 {
            nodes.push([T::from_usize(i).unwrap() * h, T::from_usize(j).unwrap() * h]);
            interior_mask.push(i > 0 && i < m && j > 0 && j < m);
        }
    }

    let mut triangles = Vec::with_capacity(2 * m * m);
    for j in 0..m {
        for i in 0..m {
            let p00 = j * n1 + i;
            let p10 = p00 + 1;
            let p01 = p00 + n1;
            let p11 = p01 + 1;
            // Diagonal p00 -> p11; both triangles counter-clockwise.
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }

    let mut interior_index = vec![None; n1 * n1];
    let mut interior_nodes = Vec::with_capacity((m - 1) * (m - 1));
    for (node, &inside) in interior_mask.iter().enumerate() {
        if inside {
            interior_index[node] = Some(interior_nodes.len());
            interior_nodes.push(node);
        }
    }

    Ok(FineMesh {
        cells_per_side,
        nodes,
        triangles,
        interior_mask,
        interior_index,
        interior_nodes,
        h,
    })
}

/// Build the coarse grid over a fine mesh. `blocks_per_side` must divide
/// the fine cell count.
pub fn build_coarse_grid<T: Scalar>(
    mesh: &FineMesh<T>,
    blocks_per_side: usize,
) -> Result<CoarseGrid<T>> {
    let m = mesh.cells_per_side;
    if blocks_per_side == 0 || m % blocks_per_side != 0 {
        return Err(Error::config(format!(
            "blocks_per_side {blocks_per_side} does not divide cells_per_side {m}"
        )));
    }
    let nb = blocks_per_side;
    let s = m / nb;
    let h_coarse = T::from_f64c(1.0 / nb as f64);

    let mut coarse_nodes = Vec::with_capacity((nb + 1) * (nb + 1));
    for vj in 0..=nb {
        for vi in 0..=nb {
            coarse_nodes.push([
                T::from_usize(vi).unwrap() * h_coarse,
                T::from_usize(vj).unwrap() * h_coarse,
            ]);
        }
    }

    let mut neighborhoods = Vec::with_capacity(coarse_nodes.len());
    for vj in 0..=nb {
        for vi in 0..=nb {
            let vertex = vj * (nb + 1) + vi;
            let bi0 = vi.saturating_sub(1);
            let bi1 = (vi + 1).min(nb);
            let bj0 = vj.saturating_sub(1);
            let bj1 = (vj + 1).min(nb);

            let mut blocks = Vec::new();
            for bj in bj0..bj1 {
                for bi in bi0..bi1 {
                    blocks.push((bi, bj));
                }
            }

            // The union of blocks is the cell rectangle
            // [bi0*s, bi1*s) x [bj0*s, bj1*s).
            let (c0, c1) = (bi0 * s, bi1 * s);
            let (r0, r1) = (bj0 * s, bj1 * s);

            let mut fine_nodes = Vec::with_capacity((c1 - c0 + 1) * (r1 - r0 + 1));
            for j in r0..=r1 {
                for i in c0..=c1 {
                    fine_nodes.push(mesh.node_id(i, j));
                }
            }

            let mut fine_triangles = Vec::with_capacity(2 * (c1 - c0) * (r1 - r0));
            for cj in r0..r1 {
                for ci in c0..c1 {
                    let cell = cj * m + ci;
                    fine_triangles.push(2 * cell);
                    fine_triangles.push(2 * cell + 1);
                }
            }

            let vx = coarse_nodes[vertex];
            let chi = fine_nodes
                .iter()
                .map(|&n| hat_value(vx, mesh.nodes[n], h_coarse))
                .collect();

            neighborhoods.push(Neighborhood {
                vertex,
                blocks,
                fine_nodes,
                fine_triangles,
                chi,
            });
        }
    }

    Ok(CoarseGrid {
        blocks_per_side: nb,
        cells_per_block: s,
        coarse_nodes,
        neighborhoods,
        h_coarse,
    })
}

/// Bilinear hat of a coarse vertex evaluated at a point.
pub fn hat_value<T: Scalar>(vertex: [T; 2], p: [T; 2], h_coarse: T) -> T {
    let sx = T::one() - ((p[0] - vertex[0]) / h_coarse).abs();
    let sy = T::one() - ((p[1] - vertex[1]) / h_coarse).abs();
    sx.max(T::zero()) * sy.max(T::zero())
}

/// Gradient of the bilinear hat of a coarse vertex at a point strictly
/// inside its support (zero outside).
pub fn hat_gradient<T: Scalar>(vertex: [T; 2], p: [T; 2], h_coarse: T) -> [T; 2] {
    let dx = (p[0] - vertex[0]) / h_coarse;
    let dy = (p[1] - vertex[1]) / h_coarse;
    let sx = T::one() - dx.abs();
    let sy = T::one() - dy.abs();
    if sx <= T::zero() || sy <= T::zero() {
        return [T::zero(), T::zero()];
    }
    let gx = -dx.signum() / h_coarse * sy;
    let gy = -dy.signum() / h_coarse * sx;
    [gx, gy]
}

impl<T: Scalar> CoarseGrid<T> {
    pub fn vertex_count(&self) -> usize {
        self.coarse_nodes.len()
    }

    /// Sum of all hat functions at every fine node (should be one).
    pub fn partition_of_unity_sum(&self, mesh: &FineMesh<T>) -> Vec<T> {
        let mut acc = vec![T::zero(); mesh.node_count()];
        for nb in &self.neighborhoods {
            for (k, &node) in nb.fine_nodes.iter().enumerate() {
                acc[node] += nb.chi[k];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_mesh() {
        assert!(build_fine_mesh::<f64>(0).is_err());
        assert!(build_fine_mesh::<f64>(1).is_err());
    }

    #[test]
    fn two_cell_mesh_counts() {
        let mesh = build_fine_mesh::<f64>(2).unwrap();
        assert_eq!(mesh.node_count(), 9);
        assert_eq!(mesh.triangles.len(), 8);
        assert_eq!(mesh.interior_count(), 1);
        assert_eq!(mesh.interior_nodes[0], mesh.node_id(1, 1));
    }

    #[test]
    fn paper_scale_interior_counts() {
        // 100 x 100 cells -> 9801 interior unknowns; 50 x 50 -> 2401.
        assert_eq!(build_fine_mesh::<f64>(100).unwrap().interior_count(), 9801);
        assert_eq!(build_fine_mesh::<f64>(50).unwrap().interior_count(), 2401);
    }

    #[test]
    fn counts_match_closed_forms_in_sweep() {
        for m in 2..=20 {
            let mesh = build_fine_mesh::<f64>(m).unwrap();
            assert_eq!(mesh.node_count(), (m + 1) * (m + 1));
            assert_eq!(mesh.triangles.len(), 2 * m * m);
            assert_eq!(mesh.interior_count(), (m - 1) * (m - 1));
        }
    }

    #[test]
    fn triangles_positively_oriented() {
        let mesh = build_fine_mesh::<f64>(7).unwrap();
        for t in 0..mesh.triangles.len() {
            assert!(mesh.double_area(t) > 0.0);
        }
    }

    #[test]
    fn point_location_hits_owning_triangle() {
        let mesh = build_fine_mesh::<f64>(4).unwrap();
        // Strictly below the diagonal of cell (1, 2) -> lower triangle.
        let t = mesh.cell_of_point([0.45, 0.55]).unwrap();
        assert_eq!(t, 2 * (2 * 4 + 1));
        // Strictly above the diagonal -> upper triangle.
        let t = mesh.cell_of_point([0.3, 0.6]).unwrap();
        assert_eq!(t, 2 * (2 * 4 + 1) + 1);
        assert!(mesh.cell_of_point([1.2, 0.5]).is_err());
        assert!(mesh.cell_of_point([0.5, -0.1]).is_err());
    }

    #[test]
    fn coarse_grid_rejects_non_divisible_blocks() {
        let mesh = build_fine_mesh::<f64>(10).unwrap();
        assert!(build_coarse_grid(&mesh, 3).is_err());
        assert!(build_coarse_grid(&mesh, 0).is_err());
    }

    #[test]
    fn coarse_vertex_counts() {
        let mesh = build_fine_mesh::<f64>(100).unwrap();
        let coarse = build_coarse_grid(&mesh, 10).unwrap();
        assert_eq!(coarse.vertex_count(), 121);

        let mesh = build_fine_mesh::<f64>(4).unwrap();
        let coarse = build_coarse_grid(&mesh, 2).unwrap();
        assert_eq!(coarse.vertex_count(), 9);
        // Corner vertex owns exactly one block, interior vertex four.
        assert_eq!(coarse.neighborhoods[0].blocks.len(), 1);
        assert_eq!(coarse.neighborhoods[4].blocks.len(), 4);
    }

    #[test]
    fn interior_vertices_have_four_blocks() {
        let mesh = build_fine_mesh::<f64>(12).unwrap();
        let coarse = build_coarse_grid(&mesh, 4).unwrap();
        for vj in 0..=4usize {
            for vi in 0..=4usize {
                let nb = &coarse.neighborhoods[vj * 5 + vi];
                let expect = if (1..4).contains(&vi) && (1..4).contains(&vj) {
                    4
                } else if vi == 0 || vi == 4 {
                    if vj == 0 || vj == 4 {
                        1
                    } else {
                        2
                    }
                } else {
                    2
                };
                assert_eq!(nb.blocks.len(), expect);
            }
        }
    }

    #[test]
    fn partition_of_unity_sums_to_one() {
        for (m, nb) in [(100usize, 10usize), (12, 4), (6, 3)] {
            let mesh = build_fine_mesh::<f64>(m).unwrap();
            let coarse = build_coarse_grid(&mesh, nb).unwrap();
            for (node, s) in coarse.partition_of_unity_sum(&mesh).iter().enumerate() {
                assert!(
                    (s - 1.0).abs() < 1e-12,
                    "partition of unity broken at node {node}: {s}"
                );
            }
        }
    }

    #[test]
    fn hat_support_stays_in_neighborhood() {
        let mesh = build_fine_mesh::<f64>(12).unwrap();
        let coarse = build_coarse_grid(&mesh, 3).unwrap();
        for nb in &coarse.neighborhoods {
            let inside: std::collections::HashSet<usize> = nb.fine_nodes.iter().copied().collect();
            let vx = coarse.coarse_nodes[nb.vertex];
            for node in 0..mesh.node_count() {
                if !inside.contains(&node) {
                    let v = hat_value(vx, mesh.nodes[node], coarse.h_coarse);
                    assert_eq!(v, 0.0, "hat leaks outside neighborhood at node {node}");
                }
            }
        }
    }

    #[test]
    fn neighborhoods_cover_all_triangles() {
        let mesh = build_fine_mesh::<f64>(8).unwrap();
        let coarse = build_coarse_grid(&mesh, 4).unwrap();
        let mut covered = vec![false; mesh.triangles.len()];
        for nb in &coarse.neighborhoods {
            for &t in &nb.fine_triangles {
                covered[t] = true;
            }
        }
        assert!(covered.iter().all(|&c| c));
    }
}
