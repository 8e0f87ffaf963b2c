//! The 100×100 block representation of the four-component algebra.
//!
//! The matrix is cut into 24 diagonal blocks: four 5×5 "vector" blocks
//! (a Lorentz 4-vector plus one translation slot) followed by twenty 4×4
//! spinor blocks. Each off-diagonal block position carries a fixed degree,
//! and a generator of degree d only populates positions of degree d.
//!
//! The block-degree tables and the generator placement lists are kept as
//! plain text below so that they can be reviewed line by line against the
//! source tables; a checksum test pins them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::clifford::{CliffordData, CliffordError, Convention, ConventionSpace};
use crate::grading::{Degree, GradingConfig};
use crate::grassmann::Multivector;
use crate::matrix::{Entry, Mat, SparseMatrix};
use crate::report::{Failure, Report};
use crate::scalar::{Field, Scalar, ScalarError};
use crate::superalgebra::{build_four_component, BasisElement, CouplingConfig, StructureConstants, ROTATION_PAIRS};

pub const BLOCK_COUNT: usize = 24;
pub const VECTOR_BLOCKS: usize = 4;
pub const DIM: usize = 100;

/// Block-degree tables, one line per block row: `row: col=degree ...`.
/// Degree tokens: 1, 1b (antiwhite), r, g, b, rb, gb, bb (anticolors),
/// and sums such as `r+g`. Diagonal blocks (degree 0) are implicit.
const DEGREE_TABLES: &str = "
# vector rows against vector columns
0: 1=r+g 2=g+b 3=b+r
1: 0=rb+gb 2=b+rb 3=gb+b
2: 0=gb+bb 1=bb+r 3=r+gb
3: 0=bb+rb 1=g+bb 2=rb+g
# vector rows against spinor columns
0: 4=r 5=g 6=b 7=rb 8=gb 9=bb 10=1 11=1b
1: 4=gb 5=rb 9=1b 10=b 12=bb 15=g 16=r 21=1
2: 5=bb 6=gb 7=1b 10=r 13=rb 17=b 18=g 22=1
3: 4=bb 6=rb 8=1b 10=g 14=gb 19=r 20=b 23=1
# spinor rows against vector columns
4: 0=rb 1=g 3=b
5: 0=gb 1=r 2=b
6: 0=bb 2=g 3=r
7: 0=r 2=1
8: 0=g 3=1
9: 0=b 1=1
10: 0=1b 1=bb 2=rb 3=gb
11: 0=1
12: 1=b
13: 2=r
14: 3=g
15: 1=gb
16: 1=rb
17: 2=bb
18: 2=gb
19: 3=rb
20: 3=bb
21: 1=1b
22: 2=1b
23: 3=1b
";

/// Where each supertranslation family sits: `degree: B row,col ... ; C row,col ...`.
/// B positions take the 5×4 upper block, C positions the 4×5 lower block.
const SUPERTRANSLATION_PLACEMENT: &str = "
1: 0,10 1,21 2,22 3,23 ; 11,0 9,1 7,2 8,3
1b: 0,11 1,9 2,7 3,8 ; 10,0 21,1 22,2 23,3
r: 0,4 1,16 2,10 3,19 ; 7,0 5,1 13,2 6,3
g: 0,5 1,15 2,18 3,10 ; 8,0 4,1 6,2 14,3
b: 0,6 1,10 2,17 3,20 ; 9,0 12,1 5,2 4,3
rb: 0,7 1,5 2,13 3,6 ; 4,0 16,1 10,2 19,3
gb: 0,8 1,4 2,6 3,14 ; 5,0 15,1 18,2 10,3
bb: 0,9 1,12 2,5 3,4 ; 6,0 10,1 17,2 20,3
";

/// The single vector-block position of each bicolor family.
const BICOLOR_PLACEMENT: &str = "
r+g: 0,1
g+b: 0,2
b+r: 0,3
rb+gb: 1,0
gb+bb: 2,0
bb+rb: 3,0
b+rb: 1,2
gb+b: 1,3
r+gb: 2,3
bb+r: 2,1
g+bb: 3,1
rb+g: 3,2
";

#[derive(Debug, Error)]
pub enum RepresentationError {
    #[error("{0} is not a four-component basis element")]
    UnknownElement(String),
    #[error("coordinate for {slot} has degree {found}, expected {expected}")]
    DegreeMismatch { slot: String, found: String, expected: String },
    #[error("unparsable layout token {0:?}")]
    Layout(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

/// Parses `r`, `1b`, `r+gb`, ... into a Z^3 degree.
pub fn parse_degree_token(tok: &str) -> Option<Degree> {
    let mut sum = Degree::ZERO;
    for part in tok.split('+') {
        sum = sum
            + match part.trim() {
                "0" => Degree::ZERO,
                "1" => Degree::WHITE,
                "1b" => Degree::ANTIWHITE,
                "r" => Degree::RED,
                "g" => Degree::GREEN,
                "b" => Degree::BLUE,
                "rb" => Degree::ANTIRED,
                "gb" => Degree::ANTIGREEN,
                "bb" => Degree::ANTIBLUE,
                _ => return None,
            };
    }
    Some(sum)
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_pos(tok: &str) -> Result<(usize, usize), RepresentationError> {
    let bad = || RepresentationError::Layout(tok.to_string());
    let (r, c) = tok.split_once(',').ok_or_else(bad)?;
    Ok((r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?))
}

/// Block sizes and the degree carried by each allowed block position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    sizes: [usize; BLOCK_COUNT],
    offsets: [usize; BLOCK_COUNT + 1],
    degrees: BTreeMap<(usize, usize), Degree>,
}

impl BlockLayout {
    /// The transcribed layout (panics only if the embedded tables are malformed).
    pub fn standard() -> BlockLayout {
        BlockLayout::from_tables(DEGREE_TABLES).expect("embedded degree tables parse")
    }

    pub fn from_tables(text: &str) -> Result<BlockLayout, RepresentationError> {
        let sizes: [usize; BLOCK_COUNT] = std::array::from_fn(|k| if k < VECTOR_BLOCKS { 5 } else { 4 });
        let mut offsets = [0; BLOCK_COUNT + 1];
        for k in 0..BLOCK_COUNT {
            offsets[k + 1] = offsets[k] + sizes[k];
        }
        let mut degrees = BTreeMap::new();
        for k in 0..BLOCK_COUNT {
            degrees.insert((k, k), Degree::ZERO);
        }
        for line in data_lines(text) {
            let bad = || RepresentationError::Layout(line.to_string());
            let (row, rest) = line.split_once(':').ok_or_else(bad)?;
            let row: usize = row.trim().parse().map_err(|_| bad())?;
            for cell in rest.split_whitespace() {
                let (col, deg) = cell.split_once('=').ok_or_else(bad)?;
                let col: usize = col.parse().map_err(|_| bad())?;
                let deg = parse_degree_token(deg).ok_or_else(bad)?;
                if row >= BLOCK_COUNT || col >= BLOCK_COUNT || degrees.insert((row, col), deg).is_some() {
                    return Err(bad());
                }
            }
        }
        Ok(BlockLayout { sizes, offsets, degrees })
    }

    pub fn size(&self, k: usize) -> usize {
        self.sizes[k]
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn dim(&self) -> usize {
        self.offsets[BLOCK_COUNT]
    }

    /// Block containing the scalar row/column `index`.
    pub fn block_of(&self, index: usize) -> usize {
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    pub fn degree_of_block(&self, i: usize, j: usize) -> Option<Degree> {
        self.degrees.get(&(i, j)).copied()
    }

    /// All allowed positions with their degrees, in row-major order.
    pub fn positions(&self) -> impl Iterator<Item = ((usize, usize), Degree)> + '_ {
        self.degrees.iter().map(|(k, v)| (*k, *v))
    }

    /// A potential φ with degree(i,j) = φ(i) − φ(j), found by walking the
    /// tables from block 0. Returns the first inconsistent position if any.
    pub fn potential(&self) -> Result<[Degree; BLOCK_COUNT], (usize, usize)> {
        let mut phi: [Option<Degree>; BLOCK_COUNT] = [None; BLOCK_COUNT];
        phi[0] = Some(Degree::ZERO);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let pi = phi[i].unwrap();
            for (&(r, c), &d) in &self.degrees {
                let (next, value) = if r == i {
                    (c, pi - d)
                } else if c == i {
                    (r, pi + d)
                } else {
                    continue;
                };
                match phi[next] {
                    None => {
                        phi[next] = Some(value);
                        queue.push_back(next);
                    }
                    Some(v) if v != value => return Err((r, c)),
                    Some(_) => {}
                }
            }
        }
        let mut out = [Degree::ZERO; BLOCK_COUNT];
        for (k, p) in phi.iter().enumerate() {
            out[k] = p.ok_or((k, k))?;
        }
        Ok(out)
    }

    /// Stable 64-bit FNV-1a digest of the allowed positions and degrees.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for ((r, c), d) in self.positions() {
            for byte in format!("{r},{c},{},{},{};", d.r, d.g, d.b).bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }

    /// 24×24 grid of degree labels; `.` marks a forbidden block.
    pub fn render_grid(&self) -> String {
        let mut s = String::new();
        s += &format!("{:>4}", "");
        for c in 0..BLOCK_COUNT {
            s += &format!("{c:>7}");
        }
        s.push('\n');
        for r in 0..BLOCK_COUNT {
            s += &format!("{r:>4}");
            for c in 0..BLOCK_COUNT {
                let label = self.degree_of_block(r, c).map_or(".".to_string(), Degree::label);
                s += &format!("{label:>7}");
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "block_sizes": self.sizes.to_vec(),
            "blocks": self.positions().map(|((r, c), d)| json!({
                "row": r, "col": c, "degree": [d.r, d.g, d.b], "label": d.label()
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks the layout tables: shapes, diagonal, antisymmetry and the potential.
pub fn degree_consistency_report(layout: &BlockLayout) -> Report {
    let mut rep = Report::new("representation.degree_consistency");
    rep.check(layout.dim() == DIM, || Failure {
        context: "total size".into(),
        lhs: layout.dim().to_string(),
        rhs: DIM.to_string(),
    });
    for k in 0..BLOCK_COUNT {
        let d = layout.degree_of_block(k, k);
        rep.check(d == Some(Degree::ZERO), || Failure {
            context: format!("diagonal block ({k},{k})"),
            lhs: format!("{d:?}"),
            rhs: "0".into(),
        });
    }
    for ((r, c), d) in layout.positions() {
        if r >= VECTOR_BLOCKS && c >= VECTOR_BLOCKS && r != c {
            rep.fail(format!("spinor-spinor block ({r},{c})"), d.label(), "forbidden");
        }
        let back = layout.degree_of_block(c, r);
        rep.check(back == Some(-d), || Failure {
            context: format!("transposed block ({c},{r}) of ({r},{c})"),
            lhs: back.map_or("missing".into(), Degree::label),
            rhs: (-d).label(),
        });
    }
    match layout.potential() {
        Ok(phi) => {
            for ((r, c), d) in layout.positions() {
                rep.check(phi[r] - phi[c] == d, || Failure {
                    context: format!("path consistency at ({r},{c})"),
                    lhs: (phi[r] - phi[c]).label(),
                    rhs: d.label(),
                });
            }
            let labels: Vec<String> = phi.iter().map(|d| d.to_string()).collect();
            rep.note(format!("potential: {}", labels.join(" ")));
        }
        Err((r, c)) => rep.fail(format!("potential breaks at ({r},{c})"), "inconsistent", "consistent"),
    }
    rep
}

/// Degree of an entry, for the supermatrix degree contract.
pub trait GradedEntry: Entry {
    /// `None` for a nonzero entry that mixes degrees.
    fn entry_degree(&self) -> Option<Degree>;
}

impl GradedEntry for Scalar {
    fn entry_degree(&self) -> Option<Degree> {
        Some(Degree::ZERO)
    }
}

impl GradedEntry for Multivector {
    fn entry_degree(&self) -> Option<Degree> {
        self.homogeneous_degree()
    }
}

/// Checks that `m` is homogeneous of degree `d`: every nonzero entry sits in
/// an allowed block with block degree − entry degree = d. Returns the first
/// offending entry as (row, col, reason).
pub fn check_homogeneous<E: GradedEntry>(
    m: &SparseMatrix<E>,
    d: Degree,
    layout: &BlockLayout,
    grading: &GradingConfig,
) -> Result<(), (usize, usize, String)> {
    let target = grading.reduce(d);
    for (r, c, v) in m.entries() {
        let (br, bc) = (layout.block_of(r), layout.block_of(c));
        let Some(pos) = layout.degree_of_block(br, bc) else {
            return Err((r, c, format!("forbidden block ({br},{bc})")));
        };
        let Some(e) = v.entry_degree() else {
            return Err((r, c, "inhomogeneous entry".into()));
        };
        if grading.reduce(pos - e) != target {
            return Err((
                r,
                c,
                format!("block ({br},{bc}) of degree {} holds entry of degree {}", pos.label(), e.label()),
            ));
        }
    }
    Ok(())
}

struct Placement {
    upper: Vec<(usize, usize)>,
    lower: Vec<(usize, usize)>,
}

fn supertranslation_placements() -> BTreeMap<Degree, Placement> {
    let mut out = BTreeMap::new();
    for line in data_lines(SUPERTRANSLATION_PLACEMENT) {
        let (deg, rest) = line.split_once(':').expect("placement line");
        let (upper, lower) = rest.split_once(';').expect("placement halves");
        let list = |s: &str| s.split_whitespace().map(|t| parse_pos(t).expect("position")).collect();
        out.insert(parse_degree_token(deg).expect("degree"), Placement { upper: list(upper), lower: list(lower) });
    }
    out
}

fn bicolor_placements() -> BTreeMap<Degree, (usize, usize)> {
    data_lines(BICOLOR_PLACEMENT)
        .map(|line| {
            let (deg, pos) = line.split_once(':').expect("placement line");
            (parse_degree_token(deg).expect("degree"), parse_pos(pos.trim()).expect("position"))
        })
        .collect()
}

/// Deviations from the printed generator matrices, used only to test
/// hypotheses about where the residuals come from. The default is the
/// construction exactly as printed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RepresentationOptions {
    /// Spinor blocks carry −Sᵀ instead of S = −(ℏ/2i)γ_αγ_β.
    pub contragredient_spin: bool,
    /// Supertranslation blocks are divided by √2.
    pub halve_supertranslations: bool,
}

impl RepresentationOptions {
    pub fn label(&self) -> String {
        format!(
            "contragredient_spin={} halve_supertranslations={}",
            self.contragredient_spin, self.halve_supertranslations
        )
    }
}

/// Generator matrices Γ(e) for every four-component basis element.
#[derive(Clone, Debug)]
pub struct Representation {
    pub layout: BlockLayout,
    pub clifford: CliffordData,
    pub coupling: CouplingConfig,
    pub options: RepresentationOptions,
    elements: Vec<BasisElement>,
    gammas: Vec<SparseMatrix<Scalar>>,
}

impl Representation {
    /// Builds Γ on the basis order of `sc` (which must be four-component).
    pub fn new(
        elements: &[BasisElement],
        clifford: &CliffordData,
        coupling: &CouplingConfig,
    ) -> Result<Representation, RepresentationError> {
        Representation::with_options(elements, clifford, coupling, RepresentationOptions::default())
    }

    pub fn with_options(
        elements: &[BasisElement],
        clifford: &CliffordData,
        coupling: &CouplingConfig,
        options: RepresentationOptions,
    ) -> Result<Representation, RepresentationError> {
        let layout = BlockLayout::standard();
        let gammas = elements
            .iter()
            .map(|e| gamma_with(e, &layout, clifford, coupling, options))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Representation {
            layout,
            clifford: clifford.clone(),
            coupling: coupling.clone(),
            options,
            elements: elements.to_vec(),
            gammas,
        })
    }

    pub fn for_algebra(
        sc: &StructureConstants,
        clifford: &CliffordData,
        coupling: &CouplingConfig,
    ) -> Result<Representation, RepresentationError> {
        Representation::new(sc.basis().elements(), clifford, coupling)
    }

    pub fn field(&self) -> Field {
        self.clifford.field()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn gamma(&self, k: usize) -> &SparseMatrix<Scalar> {
        &self.gammas[k]
    }

    pub fn gamma_of(&self, e: &BasisElement) -> Result<&SparseMatrix<Scalar>, RepresentationError> {
        let k = self
            .elements
            .iter()
            .position(|x| x == e)
            .ok_or_else(|| RepresentationError::UnknownElement(e.to_string()))?;
        Ok(&self.gammas[k])
    }
}

fn lower_index_m(cd: &CliffordData, hbar: &Scalar, a: usize, b: usize) -> Mat {
    // (M_ab)_{μν} = (ℏ/i)(δ_bμ η_aν − δ_aμ η_bν)
    let field = cd.field();
    let pref = hbar.mul(&field.i()).neg();
    let mut m = Mat::zeros(field, 5, 5);
    for mu in 0..4 {
        for nu in 0..4 {
            let v = (b == mu) as i64 * cd.eta(a, nu) - (a == mu) as i64 * cd.eta(b, nu);
            if v != 0 {
                m.set(mu, nu, pref.mul(&field.int(v)));
            }
        }
    }
    m
}

/// Γ(e) as a sparse 100×100 scalar matrix.
pub fn gamma_of(
    e: &BasisElement,
    layout: &BlockLayout,
    cd: &CliffordData,
    cfg: &CouplingConfig,
) -> Result<SparseMatrix<Scalar>, RepresentationError> {
    gamma_with(e, layout, cd, cfg, RepresentationOptions::default())
}

fn gamma_with(
    e: &BasisElement,
    layout: &BlockLayout,
    cd: &CliffordData,
    cfg: &CouplingConfig,
    options: RepresentationOptions,
) -> Result<SparseMatrix<Scalar>, RepresentationError> {
    let field = cd.field();
    let hbar = &cfg.units.hbar;
    let ratio = hbar.div(&cfg.units.lambda_length)?;
    let unknown = || RepresentationError::UnknownElement(e.to_string());
    let mut out = SparseMatrix::zero(field, DIM);
    // −(iℏ/λ) δ_μ in the translation column of a 5×5 block
    let translation = |mu: usize| {
        let mut m = Mat::zeros(field, 5, 5);
        m.set(mu, 4, ratio.mul(&field.i()).neg());
        m
    };
    match *e {
        BasisElement::M(a, b) => {
            let (a, b) = (a as usize - 1, b as usize - 1);
            if a >= b || b >= 4 {
                return Err(unknown());
            }
            let vector = lower_index_m(cd, hbar, a, b);
            // −(ℏ/2i) γ_a γ_b = (iℏ/2) γ_a γ_b
            let mut spin = cd.gamma[a].mul(&cd.gamma[b]).scale(&hbar.mul(&field.i()).mul(&field.frac(1, 2)));
            if options.contragredient_spin {
                spin = spin.transpose().neg();
            }
            for k in 0..BLOCK_COUNT {
                let block = if k < VECTOR_BLOCKS { &vector } else { &spin };
                out.put_block(layout.offset(k), layout.offset(k), block);
            }
        }
        BasisElement::P(mu) => {
            let mu = mu as usize;
            if !(1..=4).contains(&mu) {
                return Err(unknown());
            }
            let block = translation(mu - 1);
            for k in 0..VECTOR_BLOCKS {
                out.put_block(layout.offset(k), layout.offset(k), &block);
            }
        }
        BasisElement::Q(d, a) => {
            let a = a as usize;
            let placement = supertranslation_placements().remove(&d).ok_or_else(unknown)?;
            if !(1..=4).contains(&a) {
                return Err(unknown());
            }
            let a = a - 1;
            let mut scale = ratio.sqrt()?.mul(&field.zeta8(1)).neg().mul(cfg.sqrt_kappa(d));
            if options.halve_supertranslations {
                scale = scale.div(&field.sqrt2())?;
            }
            // upper: rows α carry (γ^α C)_{ab}, bottom row zero
            let mut upper = Mat::zeros(field, 5, 4);
            for alpha in 0..4 {
                let gc = cd.gamma_upper_c(alpha);
                for col in 0..4 {
                    upper.set(alpha, col, gc.get(a, col).mul(&scale));
                }
            }
            let mut lower = Mat::zeros(field, 4, 5);
            lower.set(a, 4, scale.clone());
            for &(r, c) in &placement.upper {
                out.put_block(layout.offset(r), layout.offset(c), &upper);
            }
            for &(r, c) in &placement.lower {
                out.put_block(layout.offset(r), layout.offset(c), &lower);
            }
        }
        BasisElement::R(d, a) => {
            let a = a as usize;
            let (r, c) = *bicolor_placements().get(&d).ok_or_else(unknown)?;
            if !(1..=4).contains(&a) {
                return Err(unknown());
            }
            out.put_block(layout.offset(r), layout.offset(c), &translation(a - 1));
        }
    }
    Ok(out)
}

/// Coordinates of an algebra element, keyed by the basis element they multiply.
#[derive(Clone, Debug, Default)]
pub struct ElementCoordinates<E> {
    values: BTreeMap<BasisElement, E>,
}

impl<E: Clone> ElementCoordinates<E> {
    pub fn new() -> Self {
        ElementCoordinates { values: BTreeMap::new() }
    }

    pub fn set(mut self, e: BasisElement, v: E) -> Self {
        self.values.insert(e, v);
        self
    }

    pub fn get(&self, e: &BasisElement) -> Option<&E> {
        self.values.get(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisElement, &E)> {
        self.values.iter()
    }
}

/// Numeric element: (i/ℏ)[ωΓ(M) + tΓ(P) + uΓ(R)] + ℏ^{-1/2} e^{−iπ/4} ψΓ(Q).
pub fn element_matrix(
    rep: &Representation,
    coords: &ElementCoordinates<Scalar>,
) -> Result<SparseMatrix<Scalar>, RepresentationError> {
    let field = rep.field();
    let hbar = &rep.coupling.units.hbar;
    let even = field.i().div(hbar)?;
    let odd = hbar.sqrt()?.inv()?.mul(&field.zeta8(-1));
    let mut out = SparseMatrix::zero(field, DIM);
    for (e, v) in coords.iter() {
        let pref = if matches!(e, BasisElement::Q(..)) { &odd } else { &even };
        out = out.add(&rep.gamma_of(e)?.scale(&v.mul(pref)));
    }
    Ok(out)
}

pub(crate) fn lift(m: &SparseMatrix<Scalar>) -> SparseMatrix<Multivector> {
    let mut out = SparseMatrix::zero(m.field(), m.dim());
    for (r, c, v) in m.entries() {
        out.set(r, c, Multivector::scalar(v.clone()));
    }
    out
}

/// Grassmann-valued element of total degree zero:
/// (i/ℏ)[ΩΓ(M) + TΓ(P) + U^#Γ(R)] + (i/ℏ^{1/2}) Σ ζ^{a#}(γ_4)_{ab} Γ(Q_b).
/// Coordinates for Q(d,a) are the ζ^{a_d}, for R(d,a) the U^{a_d}.
pub fn element_matrix_grassmann(
    rep: &Representation,
    coords: &ElementCoordinates<Multivector>,
) -> Result<SparseMatrix<Multivector>, RepresentationError> {
    let field = rep.field();
    let grading = GradingConfig::from_field(field);
    let hbar = &rep.coupling.units.hbar;
    let even = field.i().div(hbar)?;
    let odd = field.i().div(&hbar.sqrt()?)?;
    let g4 = &rep.clifford.gamma[3];
    let mut out = SparseMatrix::zero(field, DIM);
    for (e, v) in coords.iter() {
        if v.is_zero() {
            continue;
        }
        let expected = grading.reduce(e.degree());
        if v.homogeneous_degree() != Some(expected) {
            return Err(RepresentationError::DegreeMismatch {
                slot: e.to_string(),
                found: v.homogeneous_degree().map_or("mixed".into(), Degree::label),
                expected: expected.label(),
            });
        }
        match *e {
            BasisElement::Q(d, a) => {
                let zeta = v.adjoint().scale(&odd);
                for b in 1..=4u8 {
                    let g = g4.get(a as usize - 1, b as usize - 1);
                    if g.is_zero() {
                        continue;
                    }
                    let gamma = lift(rep.gamma_of(&BasisElement::Q(d, b))?);
                    out = out.add(&gamma.left_mul_entries(&zeta.scale(g)));
                }
            }
            BasisElement::R(..) => {
                out = out.add(&lift(rep.gamma_of(e)?).left_mul_entries(&v.adjoint().scale(&even)));
            }
            _ => {
                out = out.add(&lift(rep.gamma_of(e)?).left_mul_entries(&v.scale(&even)));
            }
        }
    }
    Ok(out)
}

fn family_label(e: &BasisElement) -> String {
    match e {
        BasisElement::M(..) => "M".into(),
        BasisElement::P(_) => "P".into(),
        BasisElement::Q(d, _) => format!("Q({})", d.label()),
        BasisElement::R(d, _) => format!("R({})", d.label()),
    }
}

/// Checks Γ(a)Γ(b) − ε(d_a,d_b)Γ(b)Γ(a) = Γ([a,b]) over all ordered pairs.
/// Tallies count failing pairs per block cell (`cell (i,j)`) and per family
/// pair (`pair [X,Y]`), which localizes residuals to table entries.
pub fn homomorphism_report(sc: &StructureConstants, rep: &Representation) -> Report {
    homomorphism_report_on(sc, rep, &(0..sc.len()).collect::<Vec<_>>())
}

/// As `homomorphism_report`, over ordered pairs drawn from `subset`.
pub fn homomorphism_report_on(sc: &StructureConstants, rep: &Representation, subset: &[usize]) -> Report {
    let grading = sc.grading();
    let mut report = Report::new("representation.homomorphism")
        .with_config("convention", rep.clifford.convention.label())
        .with_config("pairs", subset.len() * subset.len());
    let parts = subset
        .par_iter()
        .map(|&a| {
            let mut part = Report::new("representation.homomorphism");
            for &b in subset {
                let eps = grading.epsilon(sc.degree(a), sc.degree(b));
                let ga = rep.gamma(a);
                let gb = rep.gamma(b);
                let lhs = ga.mul(gb).sub(&gb.mul(ga).scale(&eps));
                let mut rhs = SparseMatrix::zero(rep.field(), DIM);
                for (k, c) in sc.entry(a, b).terms() {
                    rhs = rhs.add(&rep.gamma(*k).scale(c));
                }
                let residual = lhs.sub(&rhs);
                part.case();
                if residual.is_zero() {
                    continue;
                }
                let (ea, eb) = (sc.basis().get(a), sc.basis().get(b));
                let cells: BTreeSet<(usize, usize)> =
                    residual.entries().map(|(r, c, _)| (rep.layout.block_of(r), rep.layout.block_of(c))).collect();
                for (i, j) in &cells {
                    part.tally(format!("cell ({i},{j})"), 1);
                }
                part.tally(format!("pair [{},{}]", family_label(&ea), family_label(&eb)), 1);
                let (r, c, v) = residual.entries().next().expect("nonzero residual");
                part.failures.push(Failure {
                    context: format!("[{ea},{eb}] at ({r},{c}), {} entries in {} blocks", residual.nnz(), cells.len()),
                    lhs: lhs.get(r, c).to_string(),
                    rhs: format!("{} (residual {v})", rhs.get(r, c)),
                });
            }
            part
        })
        .reduce(|| Report::new("representation.homomorphism"), Report::merge);
    report.absorb(parts);
    report
}

/// Every Γ(e) is homogeneous of its element's degree.
pub fn homogeneity_report(rep: &Representation) -> Report {
    let grading = GradingConfig::from_field(rep.field());
    let mut report = Report::new("representation.homogeneity");
    for (k, e) in rep.elements().iter().enumerate() {
        let res = check_homogeneous(rep.gamma(k), e.degree(), &rep.layout, &grading);
        report.check(res.is_ok() && !rep.gamma(k).is_zero(), || {
            let (r, c, why) = res.clone().err().unwrap_or((0, 0, "zero matrix".into()));
            Failure { context: format!("Γ({e}) at ({r},{c})"), lhs: why, rhs: e.degree().label() }
        });
    }
    report
}

/// Γ_{k,k} restricted to the Poincaré generators is injective for k = 0..3.
pub fn faithful_blocks_report(rep: &Representation) -> Report {
    let field = rep.field();
    let mut report = Report::new("representation.faithful_blocks");
    let poincare: Vec<usize> = rep
        .elements()
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e, BasisElement::M(..) | BasisElement::P(_)))
        .map(|(k, _)| k)
        .collect();
    for blk in 0..VECTOR_BLOCKS {
        let o = rep.layout.offset(blk);
        let mut m = Mat::zeros(field, 25, poincare.len());
        for (col, &k) in poincare.iter().enumerate() {
            for r in 0..5 {
                for c in 0..5 {
                    m.set(r * 5 + c, col, rep.gamma(k).get(o + r, o + c));
                }
            }
        }
        let kernel = m.nullspace().map(|v| v.len());
        report.check(kernel.as_ref().is_ok_and(|&n| n == 0), || Failure {
            context: format!("kernel of block ({blk},{blk}) on M, P"),
            lhs: format!("{kernel:?}"),
            rhs: "0".into(),
        });
    }
    report
}

/// The spin blocks −(ℏ/2i)γ_aγ_b close under commutators like the M's.
pub fn spin_closure_report(sc: &StructureConstants, rep: &Representation) -> Report {
    let field = rep.field();
    let mut report = Report::new("representation.spin_closure");
    let o = rep.layout.offset(VECTOR_BLOCKS);
    let spin = |k: usize| {
        let mut m = Mat::zeros(field, 4, 4);
        for r in 0..4 {
            for c in 0..4 {
                m.set(r, c, rep.gamma(k).get(o + r, o + c));
            }
        }
        m
    };
    let rotations: Vec<usize> = (0..ROTATION_PAIRS.len()).collect();
    for &a in &rotations {
        for &b in &rotations {
            let lhs = spin(a).mul(&spin(b)).sub(&spin(b).mul(&spin(a)));
            let mut rhs = Mat::zeros(field, 4, 4);
            for (k, c) in sc.entry(a, b).terms() {
                rhs = rhs.add(&spin(*k).scale(c));
            }
            report.check(lhs == rhs, || Failure {
                context: format!("[{},{}] on a spin block", sc.basis().get(a), sc.basis().get(b)),
                lhs: "commutator".into(),
                rhs: "Γ of the bracket".into(),
            });
        }
    }
    report
}

/// One step of the correction ladder: what was changed and the outcome.
#[derive(Clone, Debug)]
pub struct LadderStep {
    pub label: String,
    pub report: Report,
}

/// Applies the three candidate corrections cumulatively to `conv` and
/// reruns the homomorphism check after each: halved supertranslation
/// normalization, bicolor bracket phase −1, contragredient spinor blocks.
/// The first step is the construction as printed.
pub fn correction_ladder(
    grading: &GradingConfig,
    coupling: &CouplingConfig,
    conv: &Convention,
) -> Result<Vec<LadderStep>, RepresentationError> {
    use crate::clifford::Phase;
    let field = grading.field();
    let mut steps = Vec::new();
    let mut conv = *conv;
    let mut options = RepresentationOptions::default();
    for stage in 0..4 {
        let label = match stage {
            0 => "as printed",
            1 => {
                options.halve_supertranslations = true;
                "+ supertranslation blocks divided by sqrt 2"
            }
            2 => {
                conv.phases.qq_to_r_bicolor = Phase::MinusOne;
                "+ bicolor bracket phase -1"
            }
            _ => {
                options.contragredient_spin = true;
                "+ contragredient spinor blocks"
            }
        };
        let cd = CliffordData::from_convention(field, &conv)?;
        let sc = build_four_component(coupling, &cd, *grading)
            .map_err(|e| RepresentationError::Layout(format!("algebra does not build: {e}")))?;
        let rep = Representation::with_options(sc.basis().elements(), &cd, coupling, options)?;
        let report = homomorphism_report(&sc, &rep).with_config("options", options.label());
        steps.push(LadderStep { label: label.to_string(), report });
    }
    Ok(steps)
}

/// `conv` with every correction of `correction_ladder` applied: bicolor
/// bracket phase −1, supertranslation blocks divided by √2, contragredient
/// spinor blocks.
pub fn fully_corrected(
    grading: &GradingConfig,
    coupling: &CouplingConfig,
    conv: &Convention,
) -> Result<(StructureConstants, Representation), RepresentationError> {
    let mut conv = *conv;
    conv.phases.qq_to_r_bicolor = crate::clifford::Phase::MinusOne;
    let cd = CliffordData::from_convention(grading.field(), &conv)?;
    let sc = build_four_component(coupling, &cd, *grading)
        .map_err(|e| RepresentationError::Layout(format!("algebra does not build: {e}")))?;
    let options = RepresentationOptions { contragredient_spin: true, halve_supertranslations: true };
    let rep = Representation::with_options(sc.basis().elements(), &cd, coupling, options)?;
    Ok((sc, rep))
}

/// Failing homomorphism pairs for every convention point that builds.
#[derive(Clone, Debug)]
pub struct RepresentationSearch {
    pub scores: Vec<(Convention, usize)>,
    pub rejected: usize,
}

impl RepresentationSearch {
    pub fn best(&self) -> Option<&(Convention, usize)> {
        self.scores.iter().min_by_key(|(_, n)| *n)
    }
}

impl fmt::Display for RepresentationSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} conventions scored, {} rejected", self.scores.len(), self.rejected)?;
        if let Some((c, n)) = self.best() {
            writeln!(f, "best: {} with {n} failing pairs", c.label())?;
        }
        Ok(())
    }
}

/// Scores the homomorphism check over the four-component points of `space`.
pub fn representation_search(
    space: &ConventionSpace,
    grading: &GradingConfig,
    coupling: &CouplingConfig,
) -> RepresentationSearch {
    let field = grading.field();
    let mut out = RepresentationSearch { scores: Vec::new(), rejected: 0 };
    for conv in space.four_component_points() {
        let Ok(cd) = CliffordData::from_convention(field, &conv) else {
            out.rejected += 1;
            continue;
        };
        let Ok(sc) = build_four_component(coupling, &cd, *grading) else {
            out.rejected += 1;
            continue;
        };
        let Ok(rep) = Representation::for_algebra(&sc, &cd, coupling) else {
            out.rejected += 1;
            continue;
        };
        out.scores.push((conv, homomorphism_report(&sc, &rep).failures.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::Formulation;

    fn setup() -> (StructureConstants, Representation) {
        let grading = GradingConfig::new(0).unwrap();
        let field = grading.field();
        let cd = CliffordData::frozen(field);
        let cfg = CouplingConfig::new(field);
        let sc = build_four_component(&cfg, &cd, grading).unwrap();
        let rep = Representation::for_algebra(&sc, &cd, &cfg).unwrap();
        (sc, rep)
    }

    #[test]
    fn layout_checksum_is_pinned() {
        let layout = BlockLayout::standard();
        assert_eq!(layout.positions().count(), 24 + 12 + 32 + 32);
        assert_eq!(layout.checksum(), PINNED_CHECKSUM, "the transcribed tables changed");
    }

    const PINNED_CHECKSUM: u64 = 7_524_111_415_018_506_307;

    #[test]
    fn layout_examples() {
        let l = BlockLayout::standard();
        assert_eq!(l.degree_of_block(0, 1), Some(Degree::RED + Degree::GREEN));
        assert_eq!(l.degree_of_block(0, 10), Some(Degree::WHITE));
        assert_eq!(l.degree_of_block(5, 5), Some(Degree::ZERO));
        assert_eq!(l.degree_of_block(4, 5), None);
        assert_eq!(l.dim(), 100);
        assert_eq!(l.offset(4), 20);
        assert_eq!(l.block_of(19), 3);
        assert_eq!(l.block_of(20), 4);
        assert_eq!(l.block_of(99), 23);
    }

    #[test]
    fn degree_tables_are_consistent() {
        let r = degree_consistency_report(&BlockLayout::standard());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn corrupted_table_is_caught() {
        let bad = DEGREE_TABLES.replace("0: 1=r+g", "0: 1=r+b");
        let r = degree_consistency_report(&BlockLayout::from_tables(&bad).unwrap());
        assert!(!r.passed());
    }

    #[test]
    fn placements_match_block_degrees() {
        let l = BlockLayout::standard();
        for (d, p) in supertranslation_placements() {
            for &(r, c) in p.upper.iter().chain(&p.lower) {
                assert_eq!(l.degree_of_block(r, c), Some(d), "Q({}) at ({r},{c})", d.label());
            }
        }
        for (d, (r, c)) in bicolor_placements() {
            assert_eq!(l.degree_of_block(r, c), Some(d));
        }
        assert_eq!(supertranslation_placements().len(), 8);
        assert_eq!(bicolor_placements().len(), 12);
    }

    #[test]
    fn translation_matrices() {
        let (_, rep) = setup();
        let field = rep.field();
        let p1 = rep.gamma_of(&BasisElement::P(1)).unwrap();
        assert_eq!(p1.nnz(), 4);
        for k in 0..4 {
            assert_eq!(p1.get(5 * k, 5 * k + 4), field.i().neg());
        }
        assert!(p1.mul(p1).is_zero());
        let r = rep.gamma_of(&BasisElement::R(Degree::RED + Degree::GREEN, 2)).unwrap();
        assert_eq!(r.nnz(), 1);
        assert_eq!(r.get(1, 5 + 4), field.i().neg());
    }

    #[test]
    fn supertranslation_blocks() {
        let (_, rep) = setup();
        let q = rep.gamma_of(&BasisElement::Q(Degree::WHITE, 1)).unwrap();
        let l = &rep.layout;
        let blocks: BTreeSet<(usize, usize)> = q.entries().map(|(r, c, _)| (l.block_of(r), l.block_of(c))).collect();
        let expected: BTreeSet<(usize, usize)> =
            [(0, 10), (1, 21), (2, 22), (3, 23), (11, 0), (9, 1), (7, 2), (8, 3)].into_iter().collect();
        assert_eq!(blocks, expected);
    }

    #[test]
    fn generators_are_homogeneous() {
        let (_, rep) = setup();
        let r = homogeneity_report(&rep);
        assert!(r.passed(), "{r}");
        assert_eq!(r.cases, 90);
    }

    #[test]
    fn poincare_blocks_are_faithful() {
        let (_, rep) = setup();
        let r = faithful_blocks_report(&rep);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn spin_blocks_close() {
        let (sc, rep) = setup();
        let r = spin_closure_report(&sc, &rep);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn poincare_pairs_are_represented() {
        let (sc, rep) = setup();
        let subset: Vec<usize> = (0..10).collect();
        let r = homomorphism_report_on(&sc, &rep, &subset);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn printed_construction_fails_in_localized_cells() {
        let (sc, rep) = setup();
        let r = homomorphism_report(&sc, &rep);
        assert_eq!(r.failures.len(), 784);
        assert_eq!(r.tallies.get("pair [M,Q(r)]"), Some(&16));
        assert_eq!(r.tallies.get("pair [Q(r),Q(g)]"), Some(&12));
        assert_eq!(r.tallies.get("pair [M,P]"), None);
    }

    #[test]
    fn corrections_make_the_representation_exact() {
        let grading = GradingConfig::new(0).unwrap();
        let cfg = CouplingConfig::new(grading.field());
        let steps = correction_ladder(&grading, &cfg, &Convention::FROZEN).unwrap();
        let counts: Vec<usize> = steps.iter().map(|s| s.report.failures.len()).collect();
        assert_eq!(counts, vec![784, 544, 256, 0]);
    }

    #[test]
    fn contragredient_spin_blocks_still_close() {
        let (sc, rep) = setup();
        let opts = RepresentationOptions { contragredient_spin: true, halve_supertranslations: false };
        let alt = Representation::with_options(rep.elements(), &rep.clifford, &rep.coupling, opts).unwrap();
        assert!(spin_closure_report(&sc, &alt).passed());
    }

    #[test]
    fn zero_coordinates_give_zero() {
        let (_, rep) = setup();
        assert!(element_matrix(&rep, &ElementCoordinates::new()).unwrap().is_zero());
    }

    #[test]
    fn numeric_translation_element() {
        let (_, rep) = setup();
        let field = rep.field();
        let coords = ElementCoordinates::new().set(BasisElement::P(1), field.one());
        let m = element_matrix(&rep, &coords).unwrap();
        assert_eq!(m, rep.gamma_of(&BasisElement::P(1)).unwrap().scale(&field.i()));
    }

    #[test]
    fn grassmann_element_has_degree_zero() {
        use crate::grassmann::Generator;
        let (_, rep) = setup();
        let field = rep.field();
        let grading = GradingConfig::from_field(field);
        let z = Multivector::generator(field, Generator::param(&grading, 1, Degree::RED));
        let coords = ElementCoordinates::new().set(BasisElement::Q(Degree::RED, 1), z);
        let m = element_matrix_grassmann(&rep, &coords).unwrap();
        assert!(!m.is_zero());
        assert!(check_homogeneous(&m, Degree::ZERO, &rep.layout, &grading).is_ok());
    }

    #[test]
    fn grassmann_degree_mismatch_is_rejected() {
        use crate::grassmann::Generator;
        let (_, rep) = setup();
        let field = rep.field();
        let grading = GradingConfig::from_field(field);
        let z = Multivector::generator(field, Generator::param(&grading, 1, Degree::GREEN));
        let coords = ElementCoordinates::new().set(BasisElement::Q(Degree::RED, 1), z);
        assert!(matches!(element_matrix_grassmann(&rep, &coords), Err(RepresentationError::DegreeMismatch { .. })));
    }

    #[test]
    fn basis_has_ninety_generators() {
        let (sc, _) = setup();
        assert_eq!(sc.len(), 90);
        assert_eq!(sc.formulation, Formulation::Four);
    }
}
