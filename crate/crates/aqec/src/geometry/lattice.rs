use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Anything that assigns a distance to a finite set of sites.
pub trait SiteMetric {
    fn num_sites(&self) -> usize;
    fn dist(&self, a: usize, b: usize) -> f64;
    /// Identifies the site universe; regions built on different universes never mix.
    fn fingerprint(&self) -> String;
    /// Lattice coordinates of a site.
    fn coords(&self, site: usize) -> Vec<usize>;
    fn site_at(&self, coords: &[usize]) -> Option<usize>;
}

/// Regular D-dimensional grid of `L^D` sites with Euclidean distance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub dimension: usize,
    pub linear_size: usize,
    pub periodic: Vec<bool>,
    #[serde(default = "unit_spacing")]
    pub spacing: f64,
}

fn unit_spacing() -> f64 {
    1.0
}

impl Lattice {
    pub fn new(dimension: usize, linear_size: usize, periodic: Vec<bool>) -> Result<Self> {
        Self::with_spacing(dimension, linear_size, periodic, 1.0)
    }

    pub fn open(dimension: usize, linear_size: usize) -> Result<Self> {
        Self::new(dimension, linear_size, vec![false; dimension])
    }

    pub fn torus(dimension: usize, linear_size: usize) -> Result<Self> {
        Self::new(dimension, linear_size, vec![true; dimension])
    }

    pub fn with_spacing(dimension: usize, linear_size: usize, periodic: Vec<bool>, spacing: f64) -> Result<Self> {
        if dimension == 0 || linear_size == 0 {
            return invalid("lattice dimension and linear size must be positive");
        }
        if periodic.len() != dimension {
            return invalid(format!("expected {dimension} periodicity flags, got {}", periodic.len()));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return invalid("lattice spacing must be positive");
        }
        let sites = (linear_size as u128).checked_pow(dimension as u32);
        if sites.is_none_or(|s| s > (1u128 << 40)) {
            return invalid("lattice is too large to enumerate");
        }
        Ok(Lattice { dimension, linear_size, periodic, spacing })
    }

    pub fn validate(&self) -> Result<()> {
        Self::with_spacing(self.dimension, self.linear_size, self.periodic.clone(), self.spacing).map(|_| ())
    }

    pub fn is_torus(&self) -> bool {
        self.periodic.iter().all(|&p| p)
    }

    /// Per-axis separation in lattice steps under the minimal-image rule.
    pub fn axis_steps(&self, a: usize, b: usize, axis: usize) -> usize {
        let l = self.linear_size;
        let ca = a / l.pow(axis as u32) % l;
        let cb = b / l.pow(axis as u32) % l;
        let d = ca.abs_diff(cb);
        if self.periodic[axis] {
            d.min(l - d)
        } else {
            d
        }
    }

    /// Distance from a site to a point given in lattice units (fractional allowed).
    pub fn dist_to_point(&self, site: usize, point: &[f64]) -> f64 {
        let l = self.linear_size as f64;
        let c = self.coords(site);
        let mut acc = 0.0;
        for axis in 0..self.dimension {
            let mut d = (c[axis] as f64 - point[axis]).abs();
            if self.periodic[axis] {
                d = d.rem_euclid(l);
                d = d.min(l - d);
            }
            acc += d * d;
        }
        self.spacing * acc.sqrt()
    }

    /// Sites one lattice step away along an axis.
    pub fn neighbors(&self, site: usize) -> Vec<(usize, usize, isize)> {
        let l = self.linear_size;
        let c = self.coords(site);
        let mut out = Vec::with_capacity(2 * self.dimension);
        for axis in 0..self.dimension {
            for step in [-1isize, 1] {
                let x = c[axis] as isize + step;
                let wrapped = if x < 0 || x >= l as isize {
                    if !self.periodic[axis] || l < 2 {
                        continue;
                    }
                    x.rem_euclid(l as isize) as usize
                } else {
                    x as usize
                };
                let mut nc = c.clone();
                nc[axis] = wrapped;
                if let Some(s) = self.site_at(&nc) {
                    if s != site {
                        out.push((s, axis, step));
                    }
                }
            }
        }
        out
    }
}

impl SiteMetric for Lattice {
    fn num_sites(&self) -> usize {
        self.linear_size.pow(self.dimension as u32)
    }

    fn dist(&self, a: usize, b: usize) -> f64 {
        let sq: usize = (0..self.dimension).map(|ax| self.axis_steps(a, b, ax).pow(2)).sum();
        self.spacing * (sq as f64).sqrt()
    }

    fn fingerprint(&self) -> String {
        let flags: String = self.periodic.iter().map(|&p| if p { 'p' } else { 'o' }).collect();
        format!("lattice:D{}:L{}:{}:a{}", self.dimension, self.linear_size, flags, self.spacing)
    }

    fn coords(&self, site: usize) -> Vec<usize> {
        let l = self.linear_size;
        (0..self.dimension).map(|ax| site / l.pow(ax as u32) % l).collect()
    }

    fn site_at(&self, coords: &[usize]) -> Option<usize> {
        if coords.len() != self.dimension || coords.iter().any(|&c| c >= self.linear_size) {
            return None;
        }
        Some(coords.iter().rev().fold(0, |acc, &c| acc * self.linear_size + c))
    }
}

/// Qubits placed on a subset of lattice sites; the qubit index is the site of the metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub name: String,
    pub lattice: Lattice,
    pub qubit_sites: Vec<usize>,
}

impl Layout {
    pub fn new(name: impl Into<String>, lattice: Lattice, qubit_sites: Vec<usize>) -> Result<Self> {
        let n = lattice.num_sites();
        let mut seen = std::collections::BTreeSet::new();
        for &s in &qubit_sites {
            if s >= n || !seen.insert(s) {
                return invalid(format!("qubit site {s} is out of range or repeated"));
            }
        }
        Ok(Layout { name: name.into(), lattice, qubit_sites })
    }

    /// One qubit per lattice site, in site order.
    pub fn full(name: impl Into<String>, lattice: Lattice) -> Self {
        let n = lattice.num_sites();
        Layout { name: name.into(), lattice, qubit_sites: (0..n).collect() }
    }

    pub fn qubit_of_site(&self, site: usize) -> Option<usize> {
        self.qubit_sites.iter().position(|&s| s == site)
    }
}

impl SiteMetric for Layout {
    fn num_sites(&self) -> usize {
        self.qubit_sites.len()
    }

    fn dist(&self, a: usize, b: usize) -> f64 {
        self.lattice.dist(self.qubit_sites[a], self.qubit_sites[b])
    }

    fn fingerprint(&self) -> String {
        format!("layout:{}:{}:{}", self.name, self.qubit_sites.len(), self.lattice.fingerprint())
    }

    fn coords(&self, site: usize) -> Vec<usize> {
        self.lattice.coords(self.qubit_sites[site])
    }

    fn site_at(&self, coords: &[usize]) -> Option<usize> {
        self.lattice.site_at(coords).and_then(|s| self.qubit_of_site(s))
    }
}
