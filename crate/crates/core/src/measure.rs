//! Quadrature against the normalized self-similar measure `μ`.
//!
//! Every region handled here is a finite union of cylinders (complements and
//! annuli of cylinders) or a metric annulus `{r_in < d(center, y) ≤ r_out}`.
//! A cell `C_v` contributes `μ(C_v) f(x_v)` with `x_v` the fixed point of
//! `S_v`, and `μ(C_v) · osc_v` to the error, where `osc_v` bounds
//! `|f(y) − f(x_v)|` on `C_v`. Cells are summed child by child in letter
//! order, so the reduction tree is fixed and parallel and serial runs agree
//! bit for bit.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::error::{input_err, Error, Result};
use crate::geometry::Point;
use crate::ifs::{Cell, Ifs};
use crate::par;
use crate::rng::{self, LetterSampler};
use crate::symbolic::Word;

/// Default cap on the number of cells a single quadrature may visit.
pub const DEFAULT_CELL_CAP: u128 = 1 << 24;
/// Extra levels a cell may be split when its error bound is not finite.
pub const ADAPTIVE_LEVELS: usize = 12;
/// Subtrees with at least this many levels left are fanned out.
const PAR_LEVELS: usize = 5;

/// Modulus of continuity supplied with an integrand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModulusSpec {
    Lipschitz { l: f64 },
    Holder { c: f64, alpha: f64 },
    SupOnly { m: f64 },
}

impl ModulusSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ModulusSpec::Lipschitz { l } => l >= 0.0,
            ModulusSpec::Holder { c, alpha } => c >= 0.0 && alpha > 0.0 && alpha <= 1.0,
            ModulusSpec::SupOnly { m } => m >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(input_err!("invalid modulus {self:?}"))
        }
    }

    /// Bound on `|f(y) − f(y')|` for `d(y, y') ≤ d`.
    pub fn oscillation(&self, d: f64) -> f64 {
        match *self {
            ModulusSpec::Lipschitz { l } => l * d,
            ModulusSpec::Holder { c, alpha } => c * d.powf(alpha),
            ModulusSpec::SupOnly { m } => 2.0 * m,
        }
    }

    pub fn lipschitz(&self) -> Option<f64> {
        match *self {
            ModulusSpec::Lipschitz { l } => Some(l),
            _ => None,
        }
    }
}

/// Value with a certified half-width: the exact integral lies in
/// `[value − err, value + err]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub err: f64,
    #[serde(rename = "depth")]
    pub depth_used: usize,
    #[serde(skip)]
    pub cells_evaluated: u64,
}

impl QuadratureResult {
    pub fn zero() -> QuadratureResult {
        QuadratureResult { value: 0.0, err: 0.0, depth_used: 0, cells_evaluated: 0 }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.err
    }

    pub fn upper(&self) -> f64 {
        self.value + self.err
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.err
    }

    /// Do the two brackets intersect?
    pub fn agrees_with(&self, other: &QuadratureResult) -> bool {
        (self.value - other.value).abs() <= self.err + other.err
    }

    pub fn is_resolved(&self) -> bool {
        self.err.is_finite()
    }

    pub fn add(&self, other: &QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + other.value,
            err: self.err + other.err,
            depth_used: self.depth_used.max(other.depth_used),
            cells_evaluated: self.cells_evaluated + other.cells_evaluated,
        }
    }

    pub fn sub(&self, other: &QuadratureResult) -> QuadratureResult {
        let neg = QuadratureResult { value: -other.value, ..*other };
        self.add(&neg)
    }

    pub fn scale(&self, c: f64) -> QuadratureResult {
        QuadratureResult { value: c * self.value, err: c.abs() * self.err, ..*self }
    }
}

/// Something that can be integrated cell by cell.
pub trait Integrand: Sync {
    /// Value at the cell representative.
    fn eval(&self, cell: &Cell) -> f64;

    /// Bound on `|f(y) − f(rep)|` over `y ∈ C_v`; `∞` when unknown.
    fn oscillation(&self, cell: &Cell) -> f64;

    /// Bound on `|f|` over the part of `C_v` where `d(center, y) > inner`.
    fn sup_beyond(&self, cell: &Cell, _center: &Point, _inner: f64) -> f64 {
        let osc = self.oscillation(cell);
        if osc.is_finite() {
            self.eval(cell).abs() + osc
        } else {
            f64::INFINITY
        }
    }
}

/// A plain function of the point with a caller-supplied modulus.
pub struct FnIntegrand<F> {
    pub f: F,
    pub modulus: ModulusSpec,
}

impl<F: Fn(&Point) -> f64 + Sync> FnIntegrand<F> {
    pub fn new(f: F, modulus: ModulusSpec) -> FnIntegrand<F> {
        FnIntegrand { f, modulus }
    }
}

impl<F: Fn(&Point) -> f64 + Sync> Integrand for FnIntegrand<F> {
    fn eval(&self, cell: &Cell) -> f64 {
        (self.f)(&cell.rep)
    }

    fn oscillation(&self, cell: &Cell) -> f64 {
        self.modulus.oscillation(cell.diam)
    }
}

/// `f ≡ 1`.
pub struct One;

impl Integrand for One {
    fn eval(&self, _: &Cell) -> f64 {
        1.0
    }

    fn oscillation(&self, _: &Cell) -> f64 {
        0.0
    }
}

/// Depth-`n` partition of the attractor (or of one cylinder).
#[derive(Debug, Clone)]
pub struct CylinderNet {
    pub prefix: Word,
    pub depth: usize,
    pub cells: Vec<Cell>,
}

impl CylinderNet {
    pub fn total_weight(&self) -> f64 {
        par::pairwise_sum(&self.cells.iter().map(|c| c.weight).collect::<Vec<_>>())
    }

    /// The net one level deeper; children follow their parents in order.
    pub fn refine(&self, ifs: &Ifs) -> Result<CylinderNet> {
        check_cap(self.cells.len() as u128 * ifs.len() as u128, DEFAULT_CELL_CAP)?;
        let kids = par::map(&self.cells, |c| ifs.children(c));
        Ok(CylinderNet {
            prefix: self.prefix.clone(),
            depth: self.depth + 1,
            cells: kids.into_iter().flatten().collect(),
        })
    }

    /// `Σ μ(C_v) f(x_v)` with the same error model as [`integrate`].
    pub fn integrate(&self, f: &dyn Integrand) -> Result<QuadratureResult> {
        let parts = par::map(&self.cells, |c| leaf(c, f));
        let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(fold_parts(&parts))
    }

    /// CSV with header `cell,word,weight,diameter,fvalue`; the word is written
    /// as space-separated letters.
    pub fn to_csv(&self, f: Option<&dyn Integrand>) -> String {
        let mut out = String::from("cell,word,weight,diameter,fvalue\n");
        for (i, c) in self.cells.iter().enumerate() {
            let word: Vec<String> = c.word.letters().iter().map(|l| l.to_string()).collect();
            let fv = f.map(|f| format!("{:.16e}", f.eval(c))).unwrap_or_default();
            let _ = writeln!(out, "{i},{},{:.16e},{:.16e},{fv}", word.join(" "), c.weight, c.diam);
        }
        out
    }
}

fn check_cap(cells: u128, cap: u128) -> Result<()> {
    if cells > cap {
        Err(Error::Resource { cells, cap })
    } else {
        Ok(())
    }
}

fn cells_below(ifs: &Ifs, depth: usize) -> u128 {
    (ifs.len() as u128).checked_pow(depth as u32).unwrap_or(u128::MAX)
}

/// All `N^depth` cells of the attractor.
pub fn net(ifs: &Ifs, depth: usize) -> Result<CylinderNet> {
    net_under(ifs, &Word::empty(), depth)
}

/// The `N^depth` cells `C_{prefix u}`, `|u| = depth`.
pub fn net_under(ifs: &Ifs, prefix: &Word, depth: usize) -> Result<CylinderNet> {
    check_cap(cells_below(ifs, depth), DEFAULT_CELL_CAP)?;
    let mut net = CylinderNet { prefix: prefix.clone(), depth: 0, cells: vec![ifs.cell(prefix)?] };
    for _ in 0..depth {
        net = net.refine(ifs)?;
    }
    Ok(net)
}

#[derive(Debug, Clone, Copy)]
struct Part {
    value: f64,
    err: f64,
    cells: u64,
    depth: usize,
}

fn fold_parts(parts: &[Part]) -> QuadratureResult {
    let value = par::pairwise_sum(&parts.iter().map(|p| p.value).collect::<Vec<_>>());
    let err = par::pairwise_sum(&parts.iter().map(|p| p.err).collect::<Vec<_>>());
    QuadratureResult {
        value,
        err,
        depth_used: parts.iter().map(|p| p.depth).max().unwrap_or(0),
        cells_evaluated: parts.iter().map(|p| p.cells).sum(),
    }
}

fn sum_parts(parts: &[Part]) -> Part {
    parts.iter().fold(Part { value: 0.0, err: 0.0, cells: 0, depth: 0 }, |a, p| Part {
        value: a.value + p.value,
        err: a.err + p.err,
        cells: a.cells + p.cells,
        depth: a.depth.max(p.depth),
    })
}

fn eval_checked(cell: &Cell, f: &dyn Integrand) -> Result<f64> {
    let v = f.eval(cell);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation { word: cell.word.to_string(), value: v })
    }
}

/// One cell; the error is infinite when the oscillation is unknown.
fn leaf(cell: &Cell, f: &dyn Integrand) -> Result<Part> {
    let osc = f.oscillation(cell);
    if osc.is_finite() {
        let v = eval_checked(cell, f)?;
        return Ok(Part { value: cell.weight * v, err: cell.weight * osc, cells: 1, depth: cell.depth() });
    }
    Ok(Part { value: 0.0, err: f64::INFINITY, cells: 1, depth: cell.depth() })
}

struct Engine<'a> {
    ifs: &'a Ifs,
    f: &'a dyn Integrand,
    adaptive: usize,
}

impl Engine<'_> {
    fn children(&self, cell: &Cell, levels: usize, visit: impl Fn(&Cell) -> Result<Part> + Sync + Send) -> Result<Part> {
        let kids = self.ifs.children(cell);
        let parts: Vec<Result<Part>> = if levels >= PAR_LEVELS {
            par::map(&kids, &visit)
        } else {
            kids.iter().map(&visit).collect()
        };
        Ok(sum_parts(&parts.into_iter().collect::<Result<Vec<_>>>()?))
    }

    /// Full subtree below `cell`, `levels` levels deep.
    fn subtree(&self, cell: &Cell, levels: usize) -> Result<Part> {
        if levels == 0 {
            return self.adaptive_leaf(cell, self.adaptive);
        }
        self.children(cell, levels, |c| self.subtree(c, levels - 1))
    }

    fn adaptive_leaf(&self, cell: &Cell, extra: usize) -> Result<Part> {
        if extra > 0 && !self.f.oscillation(cell).is_finite() {
            return self.children(cell, 0, |c| self.adaptive_leaf(c, extra - 1));
        }
        leaf(cell, self.f)
    }

    /// Cells of `{inner < d(center, y) ≤ outer}` below `cell`, down to
    /// absolute depth `cap`.
    fn annulus(&self, cell: &Cell, center: &Point, inner: f64, outer: f64, cap: usize) -> Result<Part> {
        let g = self.ifs.geometry();
        let lo = cell.dist_lower(g, center);
        let hi = cell.dist_upper(g, center);
        if hi <= inner || lo > outer {
            return Ok(Part { value: 0.0, err: 0.0, cells: 1, depth: cell.depth() });
        }
        let levels = cap.saturating_sub(cell.depth());
        if lo > inner && hi <= outer {
            return self.subtree(cell, levels);
        }
        if levels == 0 {
            // straddles a sphere: the exact contribution is bounded by the
            // mass of the cell times |f| on its part inside the region
            let sup = self.f.sup_beyond(cell, center, inner);
            return Ok(Part { value: 0.0, err: cell.weight * sup, cells: 1, depth: cell.depth() });
        }
        self.children(cell, levels, |c| self.annulus(c, center, inner, outer, cap))
    }
}

/// Cells `C_{v|_{j-1} i}` with `i ≠ v_j` for `j` from `|outer|+1` to `|inner|`:
/// the disjoint decomposition of `C_outer ∖ C_inner`.
pub fn annulus_roots(ifs: &Ifs, outer: &Word, inner: &Word) -> Result<Vec<Cell>> {
    if !outer.is_prefix_of(inner) {
        return Err(input_err!("{outer} is not a prefix of {inner}"));
    }
    ifs.check_word(inner)?;
    let mut roots = Vec::new();
    let mut path = ifs.cell(outer)?;
    for &next in &inner.letters()[outer.len()..] {
        for l in ifs.alphabet().letters().filter(|&l| l != next) {
            roots.push(ifs.child(&path, l));
        }
        path = ifs.child(&path, next);
    }
    Ok(roots)
}

fn integrate_roots(ifs: &Ifs, f: &dyn Integrand, roots: &[Cell], depth: usize) -> Result<QuadratureResult> {
    check_cap(roots.len() as u128 * cells_below(ifs, depth), DEFAULT_CELL_CAP)?;
    let engine = Engine { ifs, f, adaptive: ADAPTIVE_LEVELS };
    let parts = par::map(roots, |c| engine.subtree(c, depth));
    Ok(fold_parts(&parts.into_iter().collect::<Result<Vec<_>>>()?))
}

/// `∫_C f dμ` over the depth-`depth` net.
pub fn integrate(ifs: &Ifs, f: &dyn Integrand, depth: usize) -> Result<QuadratureResult> {
    integrate_roots(ifs, f, &[ifs.root_cell()], depth)
}

/// `∫_{C_v} f dμ`, cells refined `depth` levels below `C_v`.
pub fn integrate_cylinder(ifs: &Ifs, f: &dyn Integrand, v: &Word, depth: usize) -> Result<QuadratureResult> {
    integrate_roots(ifs, f, &[ifs.cell(v)?], depth)
}

/// `∫_{C_outer ∖ C_inner} f dμ`, each sibling cylinder refined `depth` levels.
pub fn integrate_annulus(
    ifs: &Ifs,
    f: &dyn Integrand,
    outer: &Word,
    inner: &Word,
    depth: usize,
) -> Result<QuadratureResult> {
    let roots = annulus_roots(ifs, outer, inner)?;
    if roots.is_empty() {
        return Ok(QuadratureResult::zero());
    }
    integrate_roots(ifs, f, &roots, depth)
}

/// `∫_{C ∖ C_v} f dμ` through the sibling decomposition; exact as a region
/// when the IFS is separated.
pub fn integrate_complement(ifs: &Ifs, f: &dyn Integrand, excluded: &Word, depth: usize) -> Result<QuadratureResult> {
    if excluded.is_empty() {
        return Err(input_err!("excluded word must be nonempty"));
    }
    integrate_annulus(ifs, f, &Word::empty(), excluded, depth)
}

/// `∫_{inner < d(center, y) ≤ outer} f dμ`; cells are classified with their
/// enclosing balls and refined down to absolute depth `depth`.
pub fn integrate_ball_annulus(
    ifs: &Ifs,
    f: &dyn Integrand,
    center: &Point,
    inner: f64,
    outer: f64,
    depth: usize,
) -> Result<QuadratureResult> {
    ifs.geometry().check(center)?;
    if !(inner >= 0.0) || !(outer > inner) {
        return Err(input_err!("need 0 ≤ inner < outer, got {inner}, {outer}"));
    }
    check_cap(cells_below(ifs, depth), DEFAULT_CELL_CAP)?;
    let engine = Engine { ifs, f, adaptive: ADAPTIVE_LEVELS };
    let part = engine.annulus(&ifs.root_cell(), center, inner, outer, depth)?;
    Ok(fold_parts(&[part]))
}

/// `∫_{C ∖ B(center, eps)} f dμ`, the region of the truncated operator.
pub fn integrate_ball_complement(
    ifs: &Ifs,
    f: &dyn Integrand,
    center: &Point,
    eps: f64,
    depth: usize,
) -> Result<QuadratureResult> {
    if !(eps > 0.0) {
        return Err(input_err!("eps must be positive, got {eps}"));
    }
    integrate_ball_annulus(ifs, f, center, eps, f64::INFINITY, depth)
}

/// Monte Carlo estimate of `∫ f dμ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    /// Letters drawn per sample.
    pub truncation_depth: usize,
    /// Largest diameter of a depth-`truncation_depth` cell.
    pub truncation_diam: f64,
}

/// Draw `n` words from `μ̃` (letters i.i.d. with weights `r_i^s`), cut them at
/// a depth where cells are below `1e-12 · diam(C)`, and average `f` over the
/// cell fixed points. Reproducible for a fixed seed; letter `j` of sample `i`
/// is output `i·L + j` of the SplitMix64 stream.
pub fn mc_integrate<F>(ifs: &Ifs, f: F, n_samples: usize, seed: u64) -> Result<McResult>
where
    F: Fn(&Point) -> f64 + Sync + Send,
{
    if n_samples == 0 {
        return Err(input_err!("need at least one sample"));
    }
    let r_max = ifs.ratios().into_iter().fold(0.0, f64::max);
    let depth = ((1e-12f64).ln() / r_max.ln()).ceil().clamp(1.0, 64.0) as usize;
    let sampler = LetterSampler::new(ifs.weights());
    let g = ifs.geometry();
    let values = par::map_range(n_samples, |i| {
        let base = (i as u64) * depth as u64;
        let map = (0..depth as u64).fold(crate::ifs::Similarity::identity(g), |acc, j| {
            let l = sampler.letter(rng::unit(rng::at(seed, base + j)));
            acc.then(g, ifs.map_of(l))
        });
        f(&map.fixed_point(g))
    });
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Evaluation { word: format!("sample {i}"), value: *v });
    }
    let n = n_samples as f64;
    let mean = par::pairwise_sum(&values) / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = if n_samples > 1 { par::pairwise_sum(&sq) / (n - 1.0) } else { 0.0 };
    Ok(McResult {
        mean,
        stderr: (var / n).sqrt(),
        samples: n_samples,
        truncation_depth: depth,
        truncation_diam: r_max.powi(depth as i32) * ifs.diam_bound(),
    })
}
