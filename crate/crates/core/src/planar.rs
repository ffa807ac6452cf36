//! Lattices built on the square of a colored chain: a quadratic-size
//! construction using `M3` and `N5,5` fills, and a semimodular one using
//! the eight-element gadget `S8`.

use thiserror::Error;

use crate::congruence::{congruence_lattice, principal_congruence, CongruenceError};
use crate::laws::is_semimodular;
use crate::order::{
    enumerate_lattices, lattice_isomorphism, poset_isomorphism, Lattice, OrderError, Poset,
    DEFAULT_SIZE_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanarError {
    #[error("the poset is empty")]
    EmptyPoset,
    #[error("contract violated: {detail}")]
    ContractViolated { detail: String },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
}

fn violated(detail: impl Into<String>) -> PlanarError {
    PlanarError::ContractViolated {
        detail: detail.into(),
    }
}

/// A chain whose prime intervals carry elements of a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredChain {
    /// `colors[i]` colors the prime interval from `i` to `i + 1`.
    pub colors: Vec<usize>,
}

impl ColoredChain {
    /// Number of prime intervals.
    pub fn length(&self) -> usize {
        self.colors.len()
    }

    /// Index of the first interval colored `p`.
    pub fn first(&self, p: usize) -> Option<usize> {
        self.colors.iter().position(|&c| c == p)
    }
}

/// Colors a chain of length `2|P|` by the linear extension of `p` with each
/// color repeated on two adjacent intervals.
pub fn colored_chain(p: &Poset) -> Result<ColoredChain, PlanarError> {
    if p.is_empty() {
        return Err(PlanarError::EmptyPoset);
    }
    let colors = p.linear_extension().iter().flat_map(|&x| [x, x]).collect();
    Ok(ColoredChain { colors })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    M3,
    N55,
    S8,
}

/// One gadget added to the grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetFill {
    pub kind: GadgetKind,
    /// Grid coordinates of the lower-left corner of the filled region.
    pub location: (usize, usize),
    /// Whether the region is the mirror image across the diagonal.
    pub transposed: bool,
    /// Ids of the added elements.
    pub added: Vec<usize>,
}

/// Hasse diagram of a grid `(0..=w) × (0..=h)` plus added elements.
struct Diagram {
    height: usize,
    size: usize,
    covers: Vec<(usize, usize)>,
}

impl Diagram {
    fn grid(width: usize, height: usize) -> Self {
        let mut covers = Vec::new();
        let id = |x: usize, y: usize| x * (height + 1) + y;
        for x in 0..=width {
            for y in 0..=height {
                if x < width {
                    covers.push((id(x, y), id(x + 1, y)));
                }
                if y < height {
                    covers.push((id(x, y), id(x, y + 1)));
                }
            }
        }
        Self {
            height,
            size: (width + 1) * (height + 1),
            covers,
        }
    }

    fn at(&self, x: usize, y: usize) -> usize {
        x * (self.height + 1) + y
    }

    /// Adds an element with the single lower cover `a` and upper cover `b`.
    fn insert_between(&mut self, a: usize, b: usize) -> usize {
        let z = self.size;
        self.size += 1;
        self.covers.push((a, z));
        self.covers.push((z, b));
        z
    }

    /// Splits the cover `a ≺ b` into `a ≺ z ≺ b`.
    fn subdivide(&mut self, a: usize, b: usize) -> usize {
        self.covers.retain(|&c| c != (a, b));
        self.insert_between(a, b)
    }

    /// Inserts between `a` and `b`, subdividing when `a ≺ b` is a cover.
    fn place(&mut self, a: usize, b: usize) -> usize {
        if self.covers.contains(&(a, b)) {
            self.subdivide(a, b)
        } else {
            self.insert_between(a, b)
        }
    }

    fn build(&self) -> Result<Lattice, OrderError> {
        Lattice::from_covers(self.size, &self.covers)
    }

    fn build_within(&self, cap: usize) -> Result<Lattice, OrderError> {
        if self.size > cap {
            return Err(OrderError::SizeLimitExceeded {
                required: self.size,
                cap,
            });
        }
        self.build()
    }
}

/// Local `C2 × C3` grid of an `N5,5` site, element `x * 3 + y`. The `C3`
/// side (vertical) carries the larger color `p`, the `C2` side the smaller
/// color `q`.
const N55_GRID: (usize, usize) = (1, 2);

/// A cover between two grid points `(x, y)`.
pub type GridEdge = ((usize, usize), (usize, usize));

/// Whether, in `l`, collapsing either `p` edge of the left column collapses
/// the bottom and top `q` edges, while neither `q` edge collapses a `p` edge.
pub fn n55_contract(l: &Lattice) -> bool {
    let id = |x: usize, y: usize| x * 3 + y;
    let ps = [
        principal_congruence(l, id(0, 0), id(0, 1)),
        principal_congruence(l, id(0, 1), id(0, 2)),
    ];
    let qs = [
        principal_congruence(l, id(0, 0), id(1, 0)),
        principal_congruence(l, id(0, 2), id(1, 2)),
    ];
    ps.iter()
        .all(|p| qs.iter().all(|q| q.is_finer_than(p) && !p.is_finer_than(q)))
}

/// All placements `(a, b)` of one extra element `a < z < b` in the local
/// grid that satisfy [`n55_contract`]. When `a ≺ b` the element subdivides
/// that cover.
pub fn n55_placements() -> Result<Vec<GridEdge>, PlanarError> {
    let mut out = Vec::new();
    let points: Vec<(usize, usize)> = (0..=N55_GRID.0)
        .flat_map(|x| (0..=N55_GRID.1).map(move |y| (x, y)))
        .collect();
    for &a in &points {
        for &b in &points {
            if a == b || a.0 > b.0 || a.1 > b.1 {
                continue;
            }
            let mut d = Diagram::grid(N55_GRID.0, N55_GRID.1);
            d.place(d.at(a.0, a.1), d.at(b.0, b.1));
            if n55_contract(&d.build()?) {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// The placement used by the constructions: the extra element subdivides
/// the middle `q` edge.
pub fn n55_template() -> Result<GridEdge, PlanarError> {
    let chosen = ((0, 1), (1, 1));
    if !n55_placements()?.contains(&chosen) {
        return Err(violated("N5,5 placement fails its congruence contract"));
    }
    Ok(chosen)
}

/// Adds one `N5,5` fill whose local grid has origin `origin`; transposed
/// fills swap the two grid axes.
fn n55_fill(
    d: &mut Diagram,
    placement: GridEdge,
    origin: (usize, usize),
    transposed: bool,
) -> GadgetFill {
    let place = |(x, y): (usize, usize)| {
        let (gx, gy) = (origin.0 + x, origin.1 + y);
        if transposed {
            (gy, gx)
        } else {
            (gx, gy)
        }
    };
    let (a, b) = (place(placement.0), place(placement.1));
    let z = d.place(d.at(a.0, a.1), d.at(b.0, b.1));
    GadgetFill {
        kind: GadgetKind::N55,
        location: if transposed {
            (origin.1, origin.0)
        } else {
            origin
        },
        transposed,
        added: vec![z],
    }
}

/// A constructed lattice with the fills that produced it.
#[derive(Clone, Debug)]
pub struct PlanarConstruction {
    pub lattice: Lattice,
    pub x_chain: ColoredChain,
    pub y_chain: ColoredChain,
    pub fills: Vec<GadgetFill>,
}

fn check_ji(lattice: &Lattice, p: &Poset) -> Result<(), PlanarError> {
    let con = congruence_lattice(lattice)?;
    if poset_isomorphism(con.ji_order(), p).is_none() {
        return Err(violated(format!(
            "join-irreducible congruences ({}) do not reproduce the poset ({} elements)",
            con.ji().len(),
            p.size()
        )));
    }
    Ok(())
}

/// Builds `C²` for the colored chain of `p`, adds an `N5,5` element for
/// every pair of colors `q < p` (and its mirror image), placed on the first
/// `q` interval against the two `p` intervals, then an `M3` center in every
/// square whose two sides share a color. Checks the result is a lattice with
/// `Ji(Con L) ≅ p`.
pub fn quadratic_construction(p: &Poset) -> Result<PlanarConstruction, PlanarError> {
    quadratic_construction_with_cap(p, DEFAULT_SIZE_CAP)
}

/// [`quadratic_construction`] refusing outputs with more than `cap` elements.
pub fn quadratic_construction_with_cap(
    p: &Poset,
    cap: usize,
) -> Result<PlanarConstruction, PlanarError> {
    let chain = colored_chain(p)?;
    let m = chain.length();
    let placement = n55_template()?;
    let mut d = Diagram::grid(m, m);
    let mut fills = Vec::new();
    for &pc in p.linear_extension() {
        let i0 = chain.first(pc).expect("every element colors the chain");
        for &qc in p.linear_extension() {
            if !p.lt(qc, pc) {
                continue;
            }
            let j0 = chain.first(qc).expect("every element colors the chain");
            fills.push(n55_fill(&mut d, placement, (j0, i0), false));
            fills.push(n55_fill(&mut d, placement, (j0, i0), true));
        }
    }
    for i in 0..m {
        for j in 0..m {
            if chain.colors[i] == chain.colors[j] {
                let z = d.insert_between(d.at(i, j), d.at(i + 1, j + 1));
                fills.push(GadgetFill {
                    kind: GadgetKind::M3,
                    location: (i, j),
                    transposed: false,
                    added: vec![z],
                });
            }
        }
    }
    let lattice = d.build_within(cap)?;
    if lattice.size() != (m + 1) * (m + 1) + fills.len() {
        return Err(violated("fills did not add exactly one element each"));
    }
    check_ji(&lattice, p)?;
    Ok(PlanarConstruction {
        lattice,
        x_chain: chain.clone(),
        y_chain: chain,
        fills,
    })
}

/// Covers of the eight-element semimodular gadget: `C2 × C3` with the
/// column `[1, 7]` widened to an `M3` by the atoms `3` and `4` of that
/// interval.
pub const S8_COVERS: [(usize, usize); 11] = [
    (0, 1),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 7),
    (3, 7),
    (4, 7),
    (5, 2),
    (5, 6),
    (6, 7),
];

/// Whether `l` is semimodular with exactly one congruence besides the
/// identity and the total one.
pub fn s8_contract(l: &Lattice) -> Result<bool, PlanarError> {
    if !is_semimodular(l).holds {
        return Ok(false);
    }
    Ok(congruence_lattice(l)?.len() == Some(3))
}

/// The eight-element gadget, checked against [`s8_contract`].
pub fn s8_template() -> Result<Lattice, PlanarError> {
    let l = Lattice::from_covers(8, &S8_COVERS)?;
    if !s8_contract(&l)? {
        return Err(violated(
            "S8 template is not semimodular with three congruences",
        ));
    }
    Ok(l)
}

/// The eight-element lattices satisfying [`s8_contract`], up to isomorphism.
pub fn s8_candidates() -> Result<Vec<Lattice>, PlanarError> {
    let mut out = Vec::new();
    for l in enumerate_lattices(8, 8)? {
        if s8_contract(&l)? {
            out.push(l);
        }
    }
    Ok(out)
}

/// Whether `l` is isomorphic to the shipped S8 template.
pub fn matches_s8(l: &Lattice) -> Result<bool, PlanarError> {
    Ok(lattice_isomorphism(l, &s8_template()?).is_some())
}

/// Semimodular construction. The horizontal chain is the doubled linear
/// extension of `p`; the vertical chain repeats it and then adds one extra
/// pair of intervals colored `q` for each cover `q ≺ p'`. Monochromatic
/// squares get `M3` centers, and for each cover the vertical pair is
/// widened by two elements in every column to the right of the upper `p'`
/// interval, which places an `S8` where the pair meets that interval and
/// carries its side atoms to the boundary.
pub fn semimodular_construction(p: &Poset) -> Result<PlanarConstruction, PlanarError> {
    semimodular_construction_with_cap(p, DEFAULT_SIZE_CAP)
}

/// [`semimodular_construction`] refusing outputs with more than `cap`
/// elements.
pub fn semimodular_construction_with_cap(
    p: &Poset,
    cap: usize,
) -> Result<PlanarConstruction, PlanarError> {
    let x_chain = colored_chain(p)?;
    let position: Vec<usize> = {
        let mut pos = vec![0; p.size()];
        for (i, &x) in p.linear_extension().iter().enumerate() {
            pos[x] = i;
        }
        pos
    };
    let mut covers: Vec<(usize, usize)> = p.covers().to_vec();
    covers.sort_by_key(|&(q, u)| (position[q], position[u]));
    let mut y_colors = x_chain.colors.clone();
    let mut forks = Vec::with_capacity(covers.len());
    for &(q, u) in &covers {
        forks.push((y_colors.len(), u));
        y_colors.extend([q, q]);
    }
    let y_chain = ColoredChain { colors: y_colors };
    let (mx, my) = (x_chain.length(), y_chain.length());
    let mut d = Diagram::grid(mx, my);
    let mut fills = Vec::new();
    for i in 0..mx {
        for j in 0..my {
            if x_chain.colors[i] == y_chain.colors[j] {
                let z = d.insert_between(d.at(i, j), d.at(i + 1, j + 1));
                fills.push(GadgetFill {
                    kind: GadgetKind::M3,
                    location: (i, j),
                    transposed: false,
                    added: vec![z],
                });
            }
        }
    }
    for &(j, u) in &forks {
        let i0 = x_chain.first(u).expect("every element colors the chain") + 1;
        let mut added = Vec::new();
        let mut prev: Option<(usize, usize)> = None;
        for k in i0 + 1..=mx {
            let (lo, hi) = (d.at(k, j), d.at(k, j + 2));
            let a = d.insert_between(lo, hi);
            let b = d.insert_between(lo, hi);
            if let Some((pa, pb)) = prev {
                d.covers.push((pa, a));
                d.covers.push((pb, b));
            }
            prev = Some((a, b));
            added.extend([a, b]);
        }
        fills.push(GadgetFill {
            kind: GadgetKind::S8,
            location: (i0, j),
            transposed: false,
            added,
        });
    }
    let lattice = d.build_within(cap)?;
    if !is_semimodular(&lattice).holds {
        return Err(violated(
            "semimodular construction produced a non-semimodular lattice",
        ));
    }
    check_ji(&lattice, p)?;
    Ok(PlanarConstruction {
        lattice,
        x_chain,
        y_chain,
        fills,
    })
}
