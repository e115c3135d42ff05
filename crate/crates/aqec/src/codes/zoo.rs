//! Named codes with their qubit layouts.

use super::pauli::Pauli;
use super::space::CodeSpace;
use super::stabilizer::StabilizerCode;
use crate::error::{invalid, Result};
use crate::geometry::{diameter, Lattice, Layout, Region, SiteMetric};

/// Toric code on an `L x L` torus of unit spacing.
///
/// Vertices, edges and plaquettes live on a `2L x 2L` grid of spacing 1/2: vertex `(x, y)`
/// sits at `(2x, 2y)`, the horizontal edge leaving it at `(2x+1, 2y)`, the vertical one at
/// `(2x, 2y+1)`. Qubits are numbered by ascending grid site.
pub fn toric_code(lx: usize, ly: usize) -> Result<CodeSpace> {
    if lx != ly {
        return invalid(format!("only square tori are supported, got {lx}x{ly}"));
    }
    let l = lx;
    if l < 2 {
        return invalid("toric code needs L >= 2");
    }
    let m = 2 * l;
    let lat = Lattice::with_spacing(2, m, vec![true, true], 0.5)?;
    let site = |a: usize, b: usize| (a % m) + m * (b % m);
    let mut sites: Vec<usize> = Vec::with_capacity(2 * l * l);
    for y in 0..l {
        for x in 0..l {
            sites.push(site(2 * x + 1, 2 * y));
            sites.push(site(2 * x, 2 * y + 1));
        }
    }
    sites.sort_unstable();
    let layout = Layout::new(format!("toric-{l}x{l}"), lat, sites.clone())?;
    let n = sites.len();
    let qubit = |a: usize, b: usize| sites.binary_search(&site(a, b)).expect("edge site");
    let mut gens = Vec::new();
    let star = |x: usize, y: usize| {
        let (a, b) = (2 * x + m, 2 * y + m);
        [qubit(a + 1, b), qubit(a - 1, b), qubit(a, b + 1), qubit(a, b - 1)]
    };
    let plaq = |x: usize, y: usize| {
        let (a, b) = (2 * x + 1 + m, 2 * y + 1 + m);
        [qubit(a + 1, b), qubit(a - 1, b), qubit(a, b + 1), qubit(a, b - 1)]
    };
    let word = |qs: [usize; 4], letter: char| -> Result<Pauli> {
        let mut p = Pauli::identity(n);
        for q in qs {
            p = p.mul(&Pauli::single(n, q, letter)?);
        }
        Ok(p.hermitian_form())
    };
    for y in 0..l {
        for x in 0..l {
            if (x, y) != (l - 1, l - 1) {
                gens.push(word(star(x, y), 'X')?);
            }
        }
    }
    for y in 0..l {
        for x in 0..l {
            if (x, y) != (l - 1, l - 1) {
                gens.push(word(plaq(x, y), 'Z')?);
            }
        }
    }
    CodeSpace::from_stabilizer(format!("toric-{l}x{l}"), StabilizerCode::new(n, gens)?, layout)
}

/// The [[5,1,3]] code on an open chain.
pub fn five_qubit() -> CodeSpace {
    let code = StabilizerCode::from_strings(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).expect("valid generators");
    let layout = Layout::full("five-qubit", Lattice::open(1, 5).expect("chain"));
    CodeSpace::from_stabilizer("five-qubit", code, layout).expect("encodable")
}

/// Bit-flip repetition code with `ZZ` checks on an open chain.
pub fn repetition(n: usize) -> Result<CodeSpace> {
    if n < 2 {
        return invalid("repetition code needs at least two qubits");
    }
    let gens = (0..n - 1)
        .map(|i| Ok(Pauli::single(n, i, 'Z')?.mul(&Pauli::single(n, i + 1, 'Z')?)))
        .collect::<Result<Vec<_>>>()?;
    let layout = Layout::full(format!("repetition-{n}"), Lattice::open(1, n)?);
    CodeSpace::from_stabilizer(format!("repetition-{n}"), StabilizerCode::new(n, gens)?, layout)
}

pub fn by_name(name: &str) -> Result<CodeSpace> {
    match name {
        "five-qubit" => Ok(five_qubit()),
        "toric-2x2" => toric_code(2, 2),
        "toric-3x3" => toric_code(3, 3),
        _ => {
            if let Some(rest) = name.strip_prefix("repetition-") {
                let n = rest.parse().map_err(|_| crate::Error::InvalidArgument(format!("bad repetition size {rest:?}")))?;
                return repetition(n);
            }
            if let Some(rest) = name.strip_prefix("toric-") {
                if let Some((a, b)) = rest.split_once('x') {
                    let parse = |s: &str| s.parse::<usize>().map_err(|_| crate::Error::InvalidArgument(format!("bad toric size {rest:?}")));
                    return toric_code(parse(a)?, parse(b)?);
                }
            }
            invalid(format!("unknown code {name:?}"))
        }
    }
}

/// Largest diameter of a stabilizer generator's support.
pub fn generator_diameter(space: &CodeSpace) -> f64 {
    let Some(code) = space.stabilizer() else { return 0.0 };
    let layout = space.layout();
    code.generators()
        .iter()
        .map(|g| diameter(layout, &Region::new(layout, g.support()).expect("support inside layout")))
        .fold(0.0, f64::max)
}

/// All qubit permutations induced by lattice translations and axis swaps/reflections
/// that keep the layout and the stabilizer group invariant.
pub fn lattice_symmetries(space: &CodeSpace) -> Vec<Vec<usize>> {
    let layout = space.layout();
    let lat = &layout.lattice;
    let d = lat.dimension;
    let l = lat.linear_size;
    let n = layout.num_sites();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let torus = lat.is_torus();
    let shifts: Vec<Vec<usize>> = if torus {
        (0..l.pow(d as u32)).map(|s| lat.coords(s)).collect()
    } else {
        vec![vec![0; d]]
    };
    let mut axis_perms: Vec<Vec<usize>> = vec![(0..d).collect()];
    if d == 2 && lat.periodic[0] == lat.periodic[1] {
        axis_perms.push(vec![1, 0]);
    }
    for shift in &shifts {
        for perm in &axis_perms {
            for flips in 0usize..1 << d {
                let map: Option<Vec<usize>> = (0..n)
                    .map(|q| {
                        let c = layout.coords(q);
                        let nc: Vec<usize> = (0..d)
                            .map(|ax| {
                                let v = c[perm[ax]];
                                let v = if flips >> ax & 1 == 1 { if torus { (l - v) % l } else { l - 1 - v } } else { v };
                                (v + shift[ax]) % l
                            })
                            .collect();
                        layout.site_at(&nc)
                    })
                    .collect();
                let Some(map) = map else { continue };
                let mut seen = map.clone();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() != n || out.contains(&map) {
                    continue;
                }
                if space.stabilizer().is_none_or(|code| code.is_symmetry(&map)) {
                    out.push(map);
                }
            }
        }
    }
    out
}
