use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::lattice::{Lattice, Layout, SiteMetric};
use super::region::{boundary_shell, region_distance, Region, DIST_EPS};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    XCell,
    YCell,
    ZBar,
    CornerDisk,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Part {
    pub name: String,
    pub role: Role,
    pub region: Region,
}

/// Two named parts that must sit at least `min` apart.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Separation {
    pub a: String,
    pub b: String,
    pub min: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub universe: String,
    pub parts: Vec<Part>,
    pub required: Vec<Separation>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionCheck {
    pub disjoint: bool,
    pub covers: bool,
    pub separations: BTreeMap<String, f64>,
    pub violations: Vec<String>,
}

impl PartitionCheck {
    pub fn ok(&self) -> bool {
        self.disjoint && self.covers && self.violations.is_empty()
    }
}

impl PartitionPlan {
    pub fn part(&self, name: &str) -> Option<&Part> {
        self.parts.iter().find(|p| p.name == name)
    }

    /// Union of every part carrying `role`.
    pub fn role_region<M: SiteMetric + ?Sized>(&self, metric: &M, role: Role) -> Result<Region> {
        let mut acc = Region::empty(metric);
        for p in self.parts.iter().filter(|p| p.role == role) {
            acc = acc.union(&p.region)?;
        }
        Ok(acc)
    }

    pub fn count(&self, role: Role) -> usize {
        self.parts.iter().filter(|p| p.role == role).count()
    }

    /// Brute-force check of disjointness, exact cover and every declared separation.
    pub fn verify<M: SiteMetric + ?Sized>(&self, metric: &M) -> Result<PartitionCheck> {
        let n = metric.num_sites();
        let mut owner = vec![0usize; n];
        for p in &self.parts {
            p.region.check_universe(metric)?;
            for &s in p.region.sites() {
                owner[s] += 1;
            }
        }
        let disjoint = owner.iter().all(|&c| c <= 1);
        let covers = owner.iter().all(|&c| c >= 1);
        let mut separations = BTreeMap::new();
        let mut violations = Vec::new();
        for req in &self.required {
            let (a, b) = match (self.part(&req.a), self.part(&req.b)) {
                (Some(a), Some(b)) => (a, b),
                _ => return invalid(format!("separation refers to unknown parts {} / {}", req.a, req.b)),
            };
            let d = region_distance(metric, &a.region, &b.region)?;
            if d + DIST_EPS < req.min {
                violations.push(format!("dist({}, {}) = {d} < {}", req.a, req.b, req.min));
            }
            separations.insert(format!("{}|{}", req.a, req.b), d);
        }
        Ok(PartitionCheck { disjoint, covers, separations, violations })
    }

    /// `{name: [coords...], "separations": {...}}`.
    pub fn to_json<M: SiteMetric + ?Sized>(&self, metric: &M) -> Result<serde_json::Value> {
        let check = self.verify(metric)?;
        let mut map = serde_json::Map::new();
        for p in &self.parts {
            map.insert(p.name.clone(), serde_json::to_value(p.region.to_coords(metric))?);
        }
        map.insert("separations".into(), serde_json::to_value(&check.separations)?);
        Ok(serde_json::Value::Object(map))
    }

    /// Keeps only the sites that carry qubits, re-expressed as qubit regions of `layout`.
    pub fn restrict_to_layout(&self, layout: &Layout) -> Result<PartitionPlan> {
        if self.universe != layout.lattice.fingerprint() {
            return invalid("plan was not built on the layout's lattice");
        }
        let mut parts = Vec::with_capacity(self.parts.len());
        for p in &self.parts {
            let qubits = p.region.sites().iter().filter_map(|&s| layout.qubit_of_site(s));
            parts.push(Part { name: p.name.clone(), role: p.role, region: Region::new(layout, qubits)? });
        }
        Ok(PartitionPlan { universe: layout.fingerprint(), parts, required: self.required.clone() })
    }
}

fn pairwise(names: &[String], min: f64) -> Vec<Separation> {
    let mut out = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            out.push(Separation { a: a.clone(), b: b.clone(), min });
        }
    }
    out
}

fn cell_ranges(lat: &Lattice, origin: &[usize], side: usize) -> Vec<usize> {
    let l = lat.linear_size;
    let mut out = Vec::new();
    let total = side.pow(lat.dimension as u32);
    for k in 0..total {
        let mut c = Vec::with_capacity(lat.dimension);
        let mut rem = k;
        for o in origin {
            c.push((o + rem % side) % l);
            rem /= side;
        }
        if let Some(s) = lat.site_at(&c) {
            out.push(s);
        }
    }
    out
}

fn multi_indices(dim: usize, t: usize) -> Vec<Vec<usize>> {
    (0..t.pow(dim as u32))
        .map(|mut k| {
            (0..dim)
                .map(|_| {
                    let v = k % t;
                    k /= t;
                    v
                })
                .collect()
        })
        .collect()
}

/// Closed-form site census of the bar grid left between checkerboard cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarCensus {
    pub cells: usize,
    pub segments: usize,
    pub segment_sites: usize,
    pub junction_sites: usize,
}

pub fn bar_census(dimension: usize, linear_size: usize, cell_side: usize, gap: usize) -> BarCensus {
    let t = linear_size / (cell_side + gap);
    let cells = t.pow(dimension as u32);
    let segments = dimension * cells;
    let segment_sites = segments * gap * cell_side.pow(dimension as u32 - 1);
    let junction_sites = linear_size.pow(dimension as u32) - cells * cell_side.pow(dimension as u32) - segment_sites;
    BarCensus { cells, segments, segment_sites, junction_sites }
}

/// Counts what the plan's bar grid actually contains: sites lying in exactly one gap
/// slab (segments) versus several (junctions).
pub fn measured_bar_census(lat: &Lattice, cell_side: usize, gap: usize) -> BarCensus {
    let p = cell_side + gap;
    let n = lat.num_sites();
    let (mut in_cells, mut seg, mut junction) = (0, 0, 0);
    for s in 0..n {
        let slabs = lat.coords(s).iter().filter(|&&c| c % p >= cell_side).count();
        match slabs {
            0 => in_cells += 1,
            1 => seg += 1,
            _ => junction += 1,
        }
    }
    let cells = in_cells / cell_side.pow(lat.dimension as u32);
    // each segment is a gap × cell^{D-1} slab touching one cell face
    let segments = seg / (gap * cell_side.pow(lat.dimension as u32 - 1));
    BarCensus { cells, segments, segment_sites: seg, junction_sites: junction }
}

/// Cells of side `cell_side` separated by bars of width `gap`, coloured alternately
/// into X and Y; the bars form Z.
pub fn checkerboard_partition(lat: &Lattice, cell_side: usize, gap: usize) -> Result<PartitionPlan> {
    if cell_side == 0 || gap == 0 {
        return invalid("cell side and gap must be positive");
    }
    let l = lat.linear_size;
    let p = cell_side + gap;
    if l % p != 0 {
        let suggestion = (1..l)
            .filter(|c| l % (c + gap) == 0)
            .min_by_key(|c| c.abs_diff(cell_side));
        return invalid(match suggestion {
            Some(c) => format!("cell side {cell_side} + gap {gap} does not divide L = {l}; nearest valid cell side is {c}"),
            None => format!("no cell side works with gap {gap} and L = {l}"),
        });
    }
    let t = l / p;
    let mut parts = Vec::new();
    let mut covered = vec![false; lat.num_sites()];
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for idx in multi_indices(lat.dimension, t) {
        let origin: Vec<usize> = idx.iter().map(|i| i * p).collect();
        let sites = cell_ranges(lat, &origin, cell_side);
        for &s in &sites {
            covered[s] = true;
        }
        let even = idx.iter().sum::<usize>() % 2 == 0;
        let (names, prefix, role) = if even { (&mut xs, "X", Role::XCell) } else { (&mut ys, "Y", Role::YCell) };
        let name = format!("{prefix}{}", names.len());
        names.push(name.clone());
        parts.push(Part { name, role, region: Region::new(lat, sites)? });
    }
    let bars = (0..covered.len()).filter(|&s| !covered[s]);
    parts.push(Part { name: "Z".into(), role: Role::ZBar, region: Region::new(lat, bars)? });
    let min = gap as f64 * lat.spacing;
    let mut required = pairwise(&xs, min);
    required.extend(pairwise(&ys, min));
    Ok(PartitionPlan { universe: lat.fingerprint(), parts, required })
}

/// For each axis, whether `set` contains a closed nearest-neighbour path winding around it.
pub fn winding_axes(lat: &Lattice, set: &Region) -> Result<Vec<bool>> {
    set.check_universe(lat)?;
    let l = lat.linear_size as isize;
    let mut lift: Vec<Option<Vec<isize>>> = vec![None; lat.num_sites()];
    let mut winds = vec![false; lat.dimension];
    for &start in set.sites() {
        if lift[start].is_some() {
            continue;
        }
        lift[start] = Some(lat.coords(start).iter().map(|&c| c as isize).collect());
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let lu = lift[u].clone().expect("visited");
            for (v, axis, step) in lat.neighbors(u) {
                if !set.contains(v) {
                    continue;
                }
                let mut lv = lu.clone();
                lv[axis] += step;
                match &lift[v] {
                    None => {
                        lift[v] = Some(lv);
                        queue.push_back(v);
                    }
                    Some(existing) => {
                        for ax in 0..lat.dimension {
                            if (existing[ax] - lv[ax]) % l == 0 && existing[ax] != lv[ax] {
                                winds[ax] = true;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(winds)
}

fn four_square_core(lat: &Lattice, ell: f64, occupied: &dyn Fn(usize) -> bool) -> Result<(PartitionPlan, f64)> {
    if lat.dimension != 2 || !lat.is_torus() {
        return invalid("four-square partition needs a two-dimensional torus");
    }
    let l = lat.linear_size;
    if l % 2 != 0 {
        return invalid(format!("four-square partition needs even L, got {l}"));
    }
    let physical = l as f64 * lat.spacing;
    if !(ell > 0.0) || ell >= physical / 2.0 {
        return invalid(format!("need 0 < ell < L/2 = {}, got {ell}", physical / 2.0));
    }
    let h = l / 2;
    let quadrant = |s: usize| {
        let c = lat.coords(s);
        (c[0] >= h) as usize + 2 * ((c[1] >= h) as usize)
    };
    let b = [h as f64 - 0.5, l as f64 - 0.5];
    let corners = [[b[0], b[0]], [b[1], b[0]], [b[0], b[1]], [b[1], b[1]]];
    let n = lat.num_sites();
    let mut radius = ell / 2.0;
    loop {
        let near = |s: usize| corners.iter().any(|p| lat.dist_to_point(s, p) <= radius + DIST_EPS);
        let pick = |q: usize| Region::new(lat, (0..n).filter(|&s| quadrant(s) == q && !near(s)));
        let occ = |r: &Region| Region::new(lat, r.sites().iter().copied().filter(|&s| occupied(s)));
        let x0 = pick(0)?;
        let x1 = pick(3)?;
        let y0 = pick(2)?;
        let y1 = pick(1)?;
        let xsep = region_distance(lat, &occ(&x0)?, &occ(&x1)?)?;
        let ysep = region_distance(lat, &occ(&y0)?, &occ(&y1)?)?;
        if xsep + DIST_EPS >= ell && ysep + DIST_EPS >= ell {
            let z = Region::new(lat, (0..n).filter(|&s| near(s)))?;
            let parts = vec![
                Part { name: "X0".into(), role: Role::XCell, region: x0 },
                Part { name: "X1".into(), role: Role::XCell, region: x1 },
                Part { name: "Y0".into(), role: Role::YCell, region: y0 },
                Part { name: "Y1".into(), role: Role::YCell, region: y1 },
                Part { name: "Z".into(), role: Role::CornerDisk, region: z },
            ];
            let required = vec![
                Separation { a: "X0".into(), b: "X1".into(), min: ell },
                Separation { a: "Y0".into(), b: "Y1".into(), min: ell },
            ];
            return Ok((PartitionPlan { universe: lat.fingerprint(), parts, required }, radius));
        }
        radius += lat.spacing / 2.0;
        if radius > physical {
            return invalid(format!("no corner-disk radius separates the squares by {ell}"));
        }
    }
}

/// Quadrants of a torus: the diagonal pair forms X, the other pair Y, and disks around
/// the four corner points form Z. Disks start at diameter ℓ and grow until the two
/// squares of each colour are ℓ apart. Returns the plan and the disk radius used.
pub fn four_square_partition(lat: &Lattice, ell: f64) -> Result<(PartitionPlan, f64)> {
    four_square_core(lat, ell, &|_| true)
}

/// Same construction measured on the qubits of a layout only.
pub fn four_square_partition_layout(layout: &Layout, ell: f64) -> Result<(PartitionPlan, f64)> {
    let (plan, radius) = four_square_core(&layout.lattice, ell, &|s| layout.qubit_of_site(s).is_some())?;
    Ok((plan.restrict_to_layout(layout)?, radius))
}

/// Disjoint hypercubes forming X, each with an ℓ-shell of fewer than `d` sites; Y is the rest.
pub fn logical_support_grid(lat: &Lattice, d: usize, ell: f64) -> Result<(PartitionPlan, usize)> {
    if lat.dimension < 2 {
        return invalid("logical support grid needs D >= 2");
    }
    if d == 0 || !(ell > 0.0) {
        return invalid("need positive distance and shield width");
    }
    let side = cell_side_for(lat.dimension, lat.spacing, d, ell)?;
    let gap = ((ell / lat.spacing + DIST_EPS).floor() as usize).max(1);
    let p = side + gap;
    let t = lat.linear_size / p;
    if t == 0 {
        return invalid(format!("cell side {side} plus gap {gap} exceeds L = {}", lat.linear_size));
    }
    let mut parts = Vec::new();
    let mut covered = vec![false; lat.num_sites()];
    let mut names = Vec::new();
    for idx in multi_indices(lat.dimension, t) {
        let origin: Vec<usize> = idx.iter().map(|i| i * p).collect();
        let sites = cell_ranges(lat, &origin, side);
        for &s in &sites {
            covered[s] = true;
        }
        let name = format!("X{}", names.len());
        names.push(name.clone());
        parts.push(Part { name, role: Role::XCell, region: Region::new(lat, sites)? });
    }
    let rest = (0..covered.len()).filter(|&s| !covered[s]);
    parts.push(Part { name: "Y".into(), role: Role::YCell, region: Region::new(lat, rest)? });
    let required = pairwise(&names, ell);
    Ok((PartitionPlan { universe: lat.fingerprint(), parts, required }, side))
}

/// Largest cube side whose ℓ-shell has fewer than `d` sites (at least 1).
pub fn cell_side_for(dimension: usize, spacing: f64, d: usize, ell: f64) -> Result<usize> {
    let pad = (ell / spacing).ceil() as usize + 1;
    let mut best = 1;
    for s in 1..=64usize {
        let lat = Lattice::with_spacing(dimension, s + 2 * pad, vec![false; dimension], spacing)?;
        let cube = Region::new(&lat, cell_ranges(&lat, &vec![pad; dimension], s))?;
        let shell = boundary_shell(&lat, &cube, ell)?.len();
        if shell < d {
            best = s;
        } else {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkerboard_ten_by_ten() {
        let lat = Lattice::open(2, 10).unwrap();
        let plan = checkerboard_partition(&lat, 4, 1).unwrap();
        assert_eq!(plan.count(Role::XCell), 2);
        assert_eq!(plan.count(Role::YCell), 2);
        let z = plan.part("Z").unwrap().region.len();
        assert_eq!(z, 36);
        let x = plan.role_region(&lat, Role::XCell).unwrap().len();
        let y = plan.role_region(&lat, Role::YCell).unwrap().len();
        assert_eq!(x + y + z, 100);
        assert!(plan.verify(&lat).unwrap().ok());
        assert_eq!(measured_bar_census(&lat, 4, 1), bar_census(2, 10, 4, 1));
    }

    #[test]
    fn checkerboard_divisibility_error_suggests_a_side() {
        let lat = Lattice::open(2, 10).unwrap();
        let err = checkerboard_partition(&lat, 3, 1).unwrap_err().to_string();
        assert!(err.contains("nearest valid cell side is 4"), "{err}");
    }

    #[test]
    fn four_square_on_eight_torus() {
        let lat = Lattice::torus(2, 8).unwrap();
        let (plan, _) = four_square_partition(&lat, 2.0).unwrap();
        let check = plan.verify(&lat).unwrap();
        assert!(check.ok(), "{check:?}");
        let x = plan.role_region(&lat, Role::XCell).unwrap();
        let y = plan.role_region(&lat, Role::YCell).unwrap();
        let z = plan.part("Z").unwrap().region.clone();
        assert_eq!(z.len(), 64 - x.len() - y.len());
        assert_eq!(winding_axes(&lat, &x.union(&z).unwrap()).unwrap(), vec![true, true]);
        assert_eq!(winding_axes(&lat, &y.union(&z).unwrap()).unwrap(), vec![true, true]);
        // the squares alone do not wrap
        assert_eq!(winding_axes(&lat, &x).unwrap(), vec![false, false]);
        assert!(four_square_partition(&lat, 0.0).is_err());
        assert!(four_square_partition(&lat, 4.0).is_err());
    }

    #[test]
    fn winding_detects_a_single_row() {
        let lat = Lattice::torus(2, 5).unwrap();
        let row = Region::from_coords(&lat, &(0..5).map(|x| vec![x, 2]).collect::<Vec<_>>()).unwrap();
        assert_eq!(winding_axes(&lat, &row).unwrap(), vec![true, false]);
        let open = Lattice::open(2, 5).unwrap();
        let row = Region::from_coords(&open, &(0..5).map(|x| vec![x, 2]).collect::<Vec<_>>()).unwrap();
        assert_eq!(winding_axes(&open, &row).unwrap(), vec![false, false]);
    }

    #[test]
    fn logical_support_grid_sweep() {
        let lat = Lattice::open(2, 10).unwrap();
        let mut last = usize::MAX;
        for d in [4, 8, 16] {
            let (plan, _) = logical_support_grid(&lat, d, 1.0).unwrap();
            assert!(plan.verify(&lat).unwrap().ok());
            let y = plan.part("Y").unwrap().region.len();
            let x = plan.role_region(&lat, Role::XCell).unwrap().len();
            assert_eq!(x + y, 100);
            assert!(y <= last);
            last = y;
        }
        let (_, side) = logical_support_grid(&lat, 8, 1.0).unwrap();
        assert_eq!(side, 1);
        assert!(logical_support_grid(&lat, 8, 0.0).is_err());
        assert!(logical_support_grid(&Lattice::open(1, 10).unwrap(), 8, 1.0).is_err());
    }

    #[test]
    fn plan_serialises_with_separations() {
        let lat = Lattice::open(2, 10).unwrap();
        let plan = checkerboard_partition(&lat, 4, 1).unwrap();
        let v = plan.to_json(&lat).unwrap();
        assert!(v["separations"]["X0|X1"].as_f64().unwrap() >= 1.0);
        assert_eq!(v["Z"].as_array().unwrap().len(), 36);
    }
}
