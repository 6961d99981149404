//! Uniform one-dimensional grid on `(0, L)` with the trapezoid inner product.
//!
//! Nodes `x_i = i h`, `i = 0..=n+1`; nodes `0` and `n+1` sit on the boundary.
//! All norms in the crate are the discrete `L2` norm induced by the
//! composite trapezoid rule (weight `h` inside, `h/2` at the two ends).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    length: f64,
    n_interior: usize,
    h: f64,
    nodes: Vec<f64>,
}

/// Which nodes of a field are unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dofs {
    /// Interior nodes only; boundary values are pinned to zero.
    Interior,
    /// Every node, boundary included.
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteField {
    values: Vec<f64>,
    dofs: Dofs,
}

pub fn build_grid(length: f64, n_interior: usize) -> Result<Grid1D> {
    Grid1D::new(length, n_interior)
}

impl Grid1D {
    pub fn new(length: f64, n_interior: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "domain length must be positive, got {length}"
            )));
        }
        if n_interior < 2 {
            return Err(Error::InvalidConfiguration(format!(
                "need at least 2 interior nodes, got {n_interior}"
            )));
        }
        let h = length / (n_interior + 1) as f64;
        let nodes = (0..n_interior + 2).map(|i| i as f64 * h).collect();
        Ok(Self {
            length,
            n_interior,
            h,
            nodes,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    pub fn n_nodes(&self) -> usize {
        self.n_interior + 2
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Trapezoid weight of node `i`.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n_interior + 1 {
            0.5 * self.h
        } else {
            self.h
        }
    }

    /// Index range of the unknowns for the given dof layout.
    pub fn dof_range(&self, dofs: Dofs) -> std::ops::Range<usize> {
        match dofs {
            Dofs::Interior => 1..self.n_interior + 1,
            Dofs::All => 0..self.n_interior + 2,
        }
    }

    /// Quadrature weights restricted to the dofs.
    pub fn dof_weights(&self, dofs: Dofs) -> Vec<f64> {
        self.dof_range(dofs).map(|i| self.weight(i)).collect()
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(f64) -> f64>(&self, dofs: Dofs, f: F) -> DiscreteField {
        let mut values: Vec<f64> = self.nodes.iter().map(|&x| f(x)).collect();
        if dofs == Dofs::Interior {
            values[0] = 0.0;
            *values.last_mut().unwrap() = 0.0;
        }
        DiscreteField { values, dofs }
    }

    pub fn inner_product(&self, u: &DiscreteField, v: &DiscreteField) -> Result<f64> {
        inner_product(u, v, self)
    }

    pub fn norm(&self, u: &DiscreteField) -> Result<f64> {
        Ok(inner_product(u, u, self)?.sqrt())
    }
}

impl DiscreteField {
    pub fn new(values: Vec<f64>, dofs: Dofs) -> Self {
        let mut values = values;
        if dofs == Dofs::Interior && values.len() >= 2 {
            values[0] = 0.0;
            *values.last_mut().unwrap() = 0.0;
        }
        Self { values, dofs }
    }

    pub fn zeros(grid: &Grid1D, dofs: Dofs) -> Self {
        Self {
            values: vec![0.0; grid.n_nodes()],
            dofs,
        }
    }

    pub fn constant(grid: &Grid1D, dofs: Dofs, value: f64) -> Self {
        Self::new(vec![value; grid.n_nodes()], dofs)
    }

    /// Scatters a dof vector back onto all nodes, zero elsewhere.
    pub fn from_dofs(grid: &Grid1D, dofs: Dofs, dof_values: &[f64]) -> Result<Self> {
        let range = grid.dof_range(dofs);
        if dof_values.len() != range.len() {
            return Err(Error::Shape {
                expected: range.len(),
                found: dof_values.len(),
            });
        }
        let mut values = vec![0.0; grid.n_nodes()];
        values[range].copy_from_slice(dof_values);
        Ok(Self { values, dofs })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn dofs(&self) -> Dofs {
        self.dofs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dof_values(&self, grid: &Grid1D) -> &[f64] {
        &self.values[grid.dof_range(self.dofs)]
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| alpha * v).collect(),
            dofs: self.dofs,
        }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &DiscreteField, beta: f64) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
            dofs: self.dofs,
        })
    }

    pub fn max_abs_diff(&self, other: &DiscreteField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::Shape { expected, found })
    } else {
        Ok(())
    }
}

/// Trapezoid quadrature of `u v` over the grid.
pub fn inner_product(u: &DiscreteField, v: &DiscreteField, grid: &Grid1D) -> Result<f64> {
    check_len(grid.n_nodes(), u.len())?;
    check_len(grid.n_nodes(), v.len())?;
    let n = grid.n_nodes();
    let h = grid.h();
    let interior: f64 = (1..n - 1).map(|i| u.values[i] * v.values[i]).sum();
    let ends = u.values[0] * v.values[0] + u.values[n - 1] * v.values[n - 1];
    Ok(h * interior + 0.5 * h * ends)
}

/// Returns `(u / ||u||, ||u||)`.
pub fn normalize(u: &DiscreteField, grid: &Grid1D) -> Result<(DiscreteField, f64)> {
    let norm = inner_product(u, u, grid)?.sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::DegenerateInput(format!(
            "cannot normalize a field of norm {norm}"
        )));
    }
    Ok((u.scaled(1.0 / norm), norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn grid_on_pi_with_three_nodes() {
        let g = build_grid(PI, 3).unwrap();
        assert_abs_diff_eq!(g.h(), PI / 4.0, epsilon = 1e-15);
        let expected = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI];
        for (a, b) in g.nodes().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert_abs_diff_eq!((g.n_interior() + 1) as f64 * g.h(), PI, epsilon = 1e-15);
    }

    #[test]
    fn grid_spacing_unit_interval() {
        let g = build_grid(1.0, 2).unwrap();
        assert_abs_diff_eq!(g.h(), 1.0 / 3.0, epsilon = 1e-16);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(
            build_grid(1.0, 1),
            Err(Error::InvalidConfiguration(_))
        ));
        assert!(matches!(
            build_grid(0.0, 5),
            Err(Error::InvalidConfiguration(_))
        ));
        assert!(matches!(
            build_grid(-1.0, 5),
            Err(Error::InvalidConfiguration(_))
        ));
    }

    #[test]
    fn inner_product_of_constants() {
        let g = build_grid(1.0, 3).unwrap();
        let ones = DiscreteField::constant(&g, Dofs::All, 1.0);
        assert_abs_diff_eq!(
            inner_product(&ones, &ones, &g).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let zero = DiscreteField::zeros(&g, Dofs::All);
        assert_eq!(inner_product(&zero, &ones, &g).unwrap(), 0.0);
    }

    #[test]
    fn inner_product_of_sine_squared() {
        let g = build_grid(PI, 99).unwrap();
        let s = g.sample(Dofs::Interior, f64::sin);
        let ip = inner_product(&s, &s, &g).unwrap();
        assert!((ip - PI / 2.0).abs() < 1e-3);
    }

    #[test]
    fn inner_product_shape_error() {
        let g = build_grid(1.0, 3).unwrap();
        let short = DiscreteField::new(vec![1.0; 3], Dofs::All);
        let ok = DiscreteField::constant(&g, Dofs::All, 1.0);
        assert!(matches!(
            inner_product(&short, &ok, &g),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn normalize_scales_and_reports_norm() {
        let g = build_grid(1.0, 3).unwrap();
        let u = DiscreteField::constant(&g, Dofs::All, 2.0);
        let (w, n) = normalize(&u, &g).unwrap();
        assert_abs_diff_eq!(n, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.norm(&w).unwrap(), 1.0, epsilon = 1e-14);
        let (w2, n2) = normalize(&w, &g).unwrap();
        assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-14);
        assert!(w2.max_abs_diff(&w) < 1e-14);
        let z = DiscreteField::zeros(&g, Dofs::All);
        assert!(matches!(normalize(&z, &g), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn dirichlet_fields_vanish_on_boundary() {
        let g = build_grid(1.0, 4).unwrap();
        let f = DiscreteField::new(vec![3.0; 6], Dofs::Interior);
        assert_eq!(f.values()[0], 0.0);
        assert_eq!(f.values()[5], 0.0);
        assert_eq!(f.dof_values(&g).len(), 4);
    }
}
