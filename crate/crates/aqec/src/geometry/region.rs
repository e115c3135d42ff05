use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::lattice::SiteMetric;
use crate::error::{invalid, Result};

/// Slack for "within distance ℓ" comparisons on floating coordinates.
pub const DIST_EPS: f64 = 1e-9;

/// Sorted, duplicate-free set of sites tied to one metric universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    universe: String,
    sites: Vec<usize>,
}

impl Region {
    pub fn new<M: SiteMetric + ?Sized>(metric: &M, sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = metric.num_sites();
        let set: BTreeSet<usize> = sites.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&s| s >= n) {
            return invalid(format!("site {bad} outside universe of {n} sites"));
        }
        Ok(Region { universe: metric.fingerprint(), sites: set.into_iter().collect() })
    }

    pub fn empty<M: SiteMetric + ?Sized>(metric: &M) -> Self {
        Region { universe: metric.fingerprint(), sites: vec![] }
    }

    pub fn full<M: SiteMetric + ?Sized>(metric: &M) -> Self {
        Region { universe: metric.fingerprint(), sites: (0..metric.num_sites()).collect() }
    }

    /// Builds a region from coordinate tuples.
    pub fn from_coords<M: SiteMetric + ?Sized>(metric: &M, coords: &[Vec<usize>]) -> Result<Self> {
        let mut sites = Vec::with_capacity(coords.len());
        for c in coords {
            match metric.site_at(c) {
                Some(s) => sites.push(s),
                None => return invalid(format!("coordinate {c:?} is not a site")),
            }
        }
        Self::new(metric, sites)
    }

    pub fn to_coords<M: SiteMetric + ?Sized>(&self, metric: &M) -> Vec<Vec<usize>> {
        self.sites.iter().map(|&s| metric.coords(s)).collect()
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn universe(&self) -> &str {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.sites.iter().all(|&s| other.contains(s))
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.sites.iter().all(|&s| !other.contains(s))
    }

    fn same_universe(&self, other: &Region) -> Result<()> {
        if self.universe != other.universe {
            return invalid(format!("regions from different universes: {} vs {}", self.universe, other.universe));
        }
        Ok(())
    }

    pub fn check_universe<M: SiteMetric + ?Sized>(&self, metric: &M) -> Result<()> {
        if self.universe != metric.fingerprint() {
            return invalid(format!("region belongs to {}, not {}", self.universe, metric.fingerprint()));
        }
        Ok(())
    }

    pub fn union(&self, other: &Region) -> Result<Region> {
        self.same_universe(other)?;
        let set: BTreeSet<usize> = self.sites.iter().chain(&other.sites).copied().collect();
        Ok(Region { universe: self.universe.clone(), sites: set.into_iter().collect() })
    }

    pub fn intersection(&self, other: &Region) -> Result<Region> {
        self.same_universe(other)?;
        let sites = self.sites.iter().copied().filter(|&s| other.contains(s)).collect();
        Ok(Region { universe: self.universe.clone(), sites })
    }

    pub fn difference(&self, other: &Region) -> Result<Region> {
        self.same_universe(other)?;
        let sites = self.sites.iter().copied().filter(|&s| !other.contains(s)).collect();
        Ok(Region { universe: self.universe.clone(), sites })
    }

    pub fn complement<M: SiteMetric + ?Sized>(&self, metric: &M) -> Result<Region> {
        self.check_universe(metric)?;
        let sites = (0..metric.num_sites()).filter(|&s| !self.contains(s)).collect();
        Ok(Region { universe: self.universe.clone(), sites })
    }

    /// Relabels sites through `map` (e.g. a lattice symmetry).
    pub fn mapped(&self, map: &[usize]) -> Region {
        let set: BTreeSet<usize> = self.sites.iter().map(|&s| map[s]).collect();
        Region { universe: self.universe.clone(), sites: set.into_iter().collect() }
    }
}

/// Minimum site-pair distance; infinite if either region is empty.
pub fn region_distance<M: SiteMetric + ?Sized>(metric: &M, a: &Region, b: &Region) -> Result<f64> {
    a.check_universe(metric)?;
    b.check_universe(metric)?;
    let mut best = f64::INFINITY;
    for &x in a.sites() {
        for &y in b.sites() {
            best = best.min(metric.dist(x, y));
        }
    }
    Ok(best)
}

/// A^{+ℓ}: every site within distance ℓ of the region.
pub fn neighborhood<M: SiteMetric + ?Sized>(metric: &M, region: &Region, ell: f64) -> Result<Region> {
    region.check_universe(metric)?;
    if !(ell >= 0.0) {
        return invalid(format!("neighborhood radius must be nonnegative, got {ell}"));
    }
    if ell.is_infinite() {
        return Ok(if region.is_empty() { region.clone() } else { Region::full(metric) });
    }
    let sites = (0..metric.num_sites())
        .filter(|&s| region.contains(s) || region.sites().iter().any(|&a| metric.dist(s, a) <= ell + DIST_EPS))
        .collect();
    Ok(Region { universe: region.universe.clone(), sites })
}

/// A^{+ℓ} \ A.
pub fn boundary_shell<M: SiteMetric + ?Sized>(metric: &M, region: &Region, ell: f64) -> Result<Region> {
    if !(ell > 0.0) {
        return invalid(format!("shell width must be positive, got {ell}"));
    }
    neighborhood(metric, region, ell)?.difference(region)
}

/// Sites of A at distance more than `r` from everything outside A.
pub fn interior<M: SiteMetric + ?Sized>(metric: &M, region: &Region, r: f64) -> Result<Region> {
    let outside = region.complement(metric)?;
    let sites = region
        .sites()
        .iter()
        .copied()
        .filter(|&s| outside.sites().iter().all(|&o| metric.dist(s, o) > r + DIST_EPS))
        .collect();
    Ok(Region { universe: region.universe.clone(), sites })
}

/// Largest pairwise distance inside a region.
pub fn diameter<M: SiteMetric + ?Sized>(metric: &M, region: &Region) -> f64 {
    let s = region.sites();
    let mut best = 0.0f64;
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            best = best.max(metric.dist(a, b));
        }
    }
    best
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingSequence {
    pub regions: Vec<Region>,
    pub shell_sizes: Vec<usize>,
}

/// Nested regions A₀ ⊂ A₀B₁ ⊂ …, each step adding the ℓ-shell of the previous union.
pub fn ring_sequence<M: SiteMetric + ?Sized>(metric: &M, seed: &Region, ell: f64, steps: usize) -> Result<RingSequence> {
    if steps == 0 {
        return invalid("ring sequence needs at least one step");
    }
    let mut regions = vec![seed.clone()];
    let mut shell_sizes = Vec::with_capacity(steps);
    for _ in 0..steps {
        let last = regions.last().expect("nonempty");
        let shell = boundary_shell(metric, last, ell)?;
        shell_sizes.push(shell.len());
        let next = last.union(&shell)?;
        regions.push(next);
    }
    Ok(RingSequence { regions, shell_sizes })
}
