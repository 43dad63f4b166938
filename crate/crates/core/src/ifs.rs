//! Rotation-free similarity IFSs `S_i = τ_{q_i} ∘ δ_{r_i}`.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::error::{config_err, input_err, Result};
use crate::geometry::{Geometry, Point};
use crate::par;
use crate::symbolic::{bernoulli_weights, Alphabet, EpWord, Letter, Word};

/// Relative width targeted by the certified diameter bracket.
pub const DIAM_REL_TOL: f64 = 1e-6;
/// Depth of the separation check cached on every IFS.
pub const DEFAULT_SEPARATION_DEPTH: usize = 10;
const MAX_PAIRS: usize = 1 << 20;
const TIE_REL_WIDTH: f64 = 1e-3;

/// `x ↦ q · δ_r(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub ratio: f64,
    pub translation: Point,
}

impl Similarity {
    pub fn identity(g: &Geometry) -> Similarity {
        Similarity { ratio: 1.0, translation: g.origin() }
    }

    pub fn apply(&self, g: &Geometry, x: &Point) -> Point {
        g.op(&self.translation, &g.dilate_unchecked(self.ratio, x))
    }

    /// `self ∘ other`.
    pub fn then(&self, g: &Geometry, other: &Similarity) -> Similarity {
        Similarity {
            ratio: self.ratio * other.ratio,
            translation: g.op(&self.translation, &g.dilate_unchecked(self.ratio, &other.translation)),
        }
    }

    /// Unique fixed point of a contraction (`ratio < 1`).
    ///
    /// Heisenberg: the horizontal part solves `x = q + r x`; the commutator
    /// term `q_x x_y − q_y x_x` then vanishes, leaving `t = q_t / (1 − r²)`.
    pub fn fixed_point(&self, g: &Geometry) -> Point {
        let r = self.ratio;
        let q = self.translation.coords();
        match g {
            Geometry::Euclidean { .. } => Point(q.iter().map(|c| c / (1.0 - r)).collect()),
            Geometry::Heisenberg1 => Point::new(&[q[0] / (1.0 - r), q[1] / (1.0 - r), q[2] / (1.0 - r * r)]),
        }
    }
}

/// Unique `s > 0` with `Σ r_i^s = 1`.
pub fn similarity_dimension(ratios: &[f64]) -> Result<f64> {
    if ratios.len() < 2 {
        return Err(input_err!("need at least two ratios, got {}", ratios.len()));
    }
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(input_err!("contraction ratio {r} is not in (0, 1)"));
    }
    let h = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    let dh = |s: f64| ratios.iter().map(|r| r.powf(s) * r.ln()).sum::<f64>();
    let r_max = ratios.iter().cloned().fold(0.0, f64::max);
    let (mut lo, mut hi) = (0.0, (ratios.len() as f64).ln() / (1.0 / r_max).ln());
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = h(s);
        if v == 0.0 {
            break;
        }
        if v > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let newton = s - v / dh(s);
        s = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Ok(s)
}

/// A cylinder cell `C_v` with everything quadrature needs to know about it.
///
/// `C_v ⊆ B(center, radius)` and `C_v ⊆ B(rep, diam)`; `rep` is the fixed
/// point of `S_v`, which lies in `C_v`.
#[derive(Debug, Clone)]
pub struct Cell {
    pub word: Word,
    pub map: Similarity,
    pub weight: f64,
    pub rep: Point,
    pub center: Point,
    pub radius: f64,
    pub diam: f64,
}

impl Cell {
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    /// Certified lower bound on `d(p, y)` over `y ∈ C_v`.
    pub fn dist_lower(&self, g: &Geometry, p: &Point) -> f64 {
        let a = g.dist_unchecked(p, &self.center) - self.radius;
        let b = g.dist_unchecked(p, &self.rep) - self.diam;
        a.max(b).max(0.0)
    }

    /// Certified upper bound on `d(p, y)` over `y ∈ C_v`.
    pub fn dist_upper(&self, g: &Geometry, p: &Point) -> f64 {
        let a = g.dist_unchecked(p, &self.center) + self.radius;
        let b = g.dist_unchecked(p, &self.rep) + self.diam;
        a.min(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeparationStatus {
    Overlapping,
    SeparatedUnknownStrength { gap: f64 },
    Separated { gap: f64 },
    StronglySeparated { gap: f64, max_diam: f64 },
    Inconclusive { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub status: SeparationStatus,
    pub depth_used: usize,
    /// Certified bracket on `min_{i≠j} dist(C_i, C_j)`.
    pub gap_bracket: (f64, f64),
    /// Certified bracket on `max_i diam(C_i)`.
    pub max_diam_bracket: (f64, f64),
}

impl SeparationReport {
    pub fn is_separated(&self) -> bool {
        matches!(
            self.status,
            SeparationStatus::Separated { .. }
                | SeparationStatus::SeparatedUnknownStrength { .. }
                | SeparationStatus::StronglySeparated { .. }
        )
    }

    pub fn is_strongly_separated(&self) -> bool {
        matches!(self.status, SeparationStatus::StronglySeparated { .. })
    }
}

/// Optional open set (a ball) witnessing the strong open set condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapConfig {
    pub r: f64,
    pub q: Vec<f64>,
}

/// JSON form: `{"geometry": …, "maps": [{"r": 0.25, "q": [0, 0]}, …], "s": …}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IfsConfig {
    pub geometry: Geometry,
    pub maps: Vec<MapConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_set: Option<OpenBall>,
}

impl IfsConfig {
    pub fn build(&self) -> Result<Ifs> {
        let maps = self
            .maps
            .iter()
            .map(|m| Similarity { ratio: m.r, translation: Point::new(&m.q) })
            .collect();
        let mut ifs = Ifs::new(self.geometry, maps)?;
        if let Some(s) = self.s {
            if (s - ifs.dim()).abs() > 1e-8 {
                return Err(config_err!("declared s = {s} but Σ r_i^s = 1 gives s = {}", ifs.dim()));
            }
        }
        if let Some(ball) = &self.open_set {
            let c = Point::new(&ball.center);
            self.geometry.check(&c)?;
            if !(ball.radius > 0.0) {
                return Err(config_err!("open set radius must be positive"));
            }
            ifs.open_set = Some((c, ball.radius));
        }
        Ok(ifs)
    }
}

#[derive(Debug)]
pub struct Ifs {
    geometry: Geometry,
    maps: Vec<Similarity>,
    dim: f64,
    weights: Vec<f64>,
    bound: (Point, f64),
    diam: (f64, f64),
    open_set: Option<(Point, f64)>,
    separation: OnceLock<SeparationReport>,
}

impl Clone for Ifs {
    fn clone(&self) -> Ifs {
        Ifs {
            geometry: self.geometry,
            maps: self.maps.clone(),
            dim: self.dim,
            weights: self.weights.clone(),
            bound: self.bound.clone(),
            diam: self.diam,
            open_set: self.open_set.clone(),
            separation: self.separation.clone(),
        }
    }
}

impl Ifs {
    pub fn new(geometry: Geometry, maps: Vec<Similarity>) -> Result<Ifs> {
        if geometry.dim() == 0 {
            return Err(config_err!("Euclidean dimension must be at least 1"));
        }
        Alphabet::new(maps.len()).map_err(|e| config_err!("{e}"))?;
        for (i, m) in maps.iter().enumerate() {
            if !(m.ratio > 0.0 && m.ratio < 1.0) {
                return Err(config_err!("map {} has ratio {} outside (0, 1)", i + 1, m.ratio));
            }
            geometry.check(&m.translation).map_err(|e| config_err!("map {}: {e}", i + 1))?;
        }
        let ratios: Vec<f64> = maps.iter().map(|m| m.ratio).collect();
        let dim = similarity_dimension(&ratios)?;
        let weights = bernoulli_weights(&ratios, dim)?;
        let bound = attractor_ball(&geometry, &maps);
        let mut ifs = Ifs {
            geometry,
            maps,
            dim,
            weights,
            diam: (0.0, 2.0 * bound.1),
            bound,
            open_set: None,
            separation: OnceLock::new(),
        };
        ifs.diam = ifs.diameter_bracket(DIAM_REL_TOL);
        Ok(ifs)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.maps.len()).expect("validated on construction")
    }

    /// Similarity dimension `s`.
    pub fn dim(&self) -> f64 {
        self.dim
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|m| m.ratio).collect()
    }

    /// Bernoulli weights `r_i^s`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Ball `B(center, radius)` with `S_i(B) ⊆ B` for all `i`, hence `C ⊆ B`.
    pub fn attractor_bound(&self) -> (Point, f64) {
        self.bound.clone()
    }

    /// Certified bracket `[lo, hi] ∋ diam(C)`.
    pub fn diam_bracket(&self) -> (f64, f64) {
        self.diam
    }

    /// Upper end of the diameter bracket; the value used for cell diameters.
    pub fn diam_bound(&self) -> f64 {
        self.diam.1
    }

    pub fn open_set(&self) -> Option<&(Point, f64)> {
        self.open_set.as_ref()
    }

    pub fn config(&self) -> IfsConfig {
        IfsConfig {
            geometry: self.geometry,
            maps: self
                .maps
                .iter()
                .map(|m| MapConfig { r: m.ratio, q: m.translation.coords().to_vec() })
                .collect(),
            s: Some(self.dim),
            open_set: self
                .open_set
                .as_ref()
                .map(|(c, r)| OpenBall { center: c.coords().to_vec(), radius: *r }),
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        self.alphabet().check(w)
    }

    pub fn check_epword(&self, w: &EpWord) -> Result<()> {
        self.check_word(w.pre())?;
        self.check_word(w.period())
    }

    pub(crate) fn map_of(&self, letter: Letter) -> &Similarity {
        &self.maps[letter as usize - 1]
    }

    /// `S_v = S_{v_1} ∘ … ∘ S_{v_n}`.
    pub fn compose(&self, v: &Word) -> Result<Similarity> {
        if v.is_empty() {
            return Err(input_err!("compose needs a nonempty word"));
        }
        self.check_word(v)?;
        Ok(self.compose_unchecked(v))
    }

    pub(crate) fn compose_unchecked(&self, v: &Word) -> Similarity {
        v.letters()
            .iter()
            .fold(Similarity::identity(&self.geometry), |acc, &l| acc.then(&self.geometry, self.map_of(l)))
    }

    /// `ξ_w`, the fixed point of `S_w`.
    pub fn fixed_point(&self, w: &Word) -> Result<Point> {
        Ok(self.compose(w)?.fixed_point(&self.geometry))
    }

    /// `π(u v^∞) = S_u(ξ_v)`.
    pub fn code_point(&self, w: &EpWord) -> Result<Point> {
        self.check_epword(w)?;
        let xi = self.compose_unchecked(w.period()).fixed_point(&self.geometry);
        Ok(self.compose_unchecked(w.pre()).apply(&self.geometry, &xi))
    }

    pub fn root_cell(&self) -> Cell {
        let (center, radius) = self.bound.clone();
        Cell {
            word: Word::empty(),
            map: Similarity::identity(&self.geometry),
            weight: 1.0,
            rep: self.maps[0].fixed_point(&self.geometry),
            center,
            radius,
            diam: self.diam.1,
        }
    }

    pub fn child(&self, parent: &Cell, letter: Letter) -> Cell {
        let g = &self.geometry;
        let map = parent.map.then(g, self.map_of(letter));
        Cell {
            word: parent.word.push(letter),
            weight: parent.weight * self.weights[letter as usize - 1],
            rep: map.fixed_point(g),
            center: map.apply(g, &self.bound.0),
            radius: map.ratio * self.bound.1,
            diam: map.ratio * self.diam.1,
            map,
        }
    }

    pub fn children(&self, parent: &Cell) -> Vec<Cell> {
        self.alphabet().letters().map(|l| self.child(parent, l)).collect()
    }

    /// The cell `C_v`.
    pub fn cell(&self, v: &Word) -> Result<Cell> {
        self.check_word(v)?;
        Ok(v.letters().iter().fold(self.root_cell(), |c, &l| self.child(&c, l)))
    }

    /// Branch and bound over pairs of cells for `diam(C)`.
    ///
    /// Lower end: largest distance between representatives seen. Upper end:
    /// largest `d(c_u, c_v) + R_u + R_v` over pairs that could still beat it.
    pub fn diameter_bracket(&self, rel_tol: f64) -> (f64, f64) {
        let g = &self.geometry;
        let root = self.root_cell();
        let mut pairs = vec![(root.clone(), root)];
        let mut lo: f64 = 0.0;
        let mut hi = 2.0 * self.bound.1;
        // largest upper bound among discarded pairs
        let mut pruned: f64 = 0.0;
        for _ in 0..64 {
            let bounds: Vec<(f64, f64)> = par::map(&pairs, |(u, v)| {
                let lb = g.dist_unchecked(&u.rep, &v.rep);
                let ub = g.dist_unchecked(&u.center, &v.center) + u.radius + v.radius;
                (lb, ub)
            });
            lo = bounds.iter().fold(lo, |m, b| m.max(b.0));
            let top = bounds.iter().fold(pruned, |m, b| m.max(b.1));
            hi = hi.min(top);
            if hi <= lo * (1.0 + rel_tol) || pairs.len() > MAX_PAIRS {
                break;
            }
            let cut = lo * (1.0 + rel_tol);
            let mut survivors = Vec::with_capacity(pairs.len());
            for (p, b) in pairs.into_iter().zip(bounds) {
                if b.1 > cut {
                    survivors.push(p);
                } else {
                    pruned = pruned.max(b.1);
                }
            }
            pairs = self.split_pairs(survivors, true);
        }
        (lo, hi.max(lo))
    }

    fn split_pairs(&self, pairs: Vec<(Cell, Cell)>, symmetric: bool) -> Vec<(Cell, Cell)> {
        let expanded = par::map(&pairs, |(u, v)| {
            let mut out = Vec::new();
            if symmetric && u.word == v.word {
                let kids = self.children(u);
                for i in 0..kids.len() {
                    for j in i..kids.len() {
                        out.push((kids[i].clone(), kids[j].clone()));
                    }
                }
            } else {
                for a in self.children(u) {
                    for b in self.children(v) {
                        out.push((a.clone(), b));
                    }
                }
            }
            out
        });
        expanded.into_iter().flatten().collect()
    }

    /// Cover each `C_i` by depth-`depth` cells and bracket the inter-cell gap.
    pub fn check_separation(&self, depth: usize) -> Result<SeparationReport> {
        if depth == 0 {
            return Err(input_err!("separation depth must be at least 1"));
        }
        let g = &self.geometry;
        let root = self.root_cell();
        let first = self.children(&root);
        let mut pairs: Vec<(Cell, Cell)> = Vec::new();
        for i in 0..first.len() {
            for j in (i + 1)..first.len() {
                pairs.push((first[i].clone(), first[j].clone()));
            }
        }
        let mut level = 1;
        let (mut g_lo, mut g_hi);
        loop {
            let bounds: Vec<(f64, f64)> = par::map(&pairs, |(u, v)| {
                let a = g.dist_unchecked(&u.center, &v.center) - u.radius - v.radius;
                let b = g.dist_unchecked(&u.rep, &v.rep) - u.diam - v.diam;
                (a.max(b), g.dist_unchecked(&u.rep, &v.rep))
            });
            g_hi = bounds.iter().fold(f64::INFINITY, |m, b| m.min(b.1));
            g_lo = bounds.iter().fold(f64::INFINITY, |m, b| m.min(b.0)).max(0.0);
            if level >= depth || g_hi <= 0.0 {
                break;
            }
            let survivors: Vec<(Cell, Cell)> = pairs
                .into_iter()
                .zip(bounds)
                .filter(|(_, b)| b.0 <= g_hi)
                .map(|(p, _)| p)
                .collect();
            if survivors.len().saturating_mul(self.len() * self.len()) > MAX_PAIRS {
                break;
            }
            pairs = self.split_pairs(survivors, false);
            level += 1;
        }
        let r_max = self.ratios().into_iter().fold(0.0, f64::max);
        let (dl, dh) = (r_max * self.diam.0, r_max * self.diam.1);
        let scale = self.diam.1.max(f64::MIN_POSITIVE);
        let status = if g_hi <= 1e-14 * scale {
            SeparationStatus::Overlapping
        } else if g_lo <= 0.0 {
            SeparationStatus::Inconclusive { depth: level }
        } else if g_lo >= dh {
            SeparationStatus::StronglySeparated { gap: g_lo, max_diam: dh }
        } else if g_hi >= dl && dh >= g_lo && g_hi - g_lo <= TIE_REL_WIDTH * dh && dh - dl <= TIE_REL_WIDTH * dh {
            // indistinguishable from equality, and the condition is non-strict
            SeparationStatus::StronglySeparated { gap: g_lo, max_diam: dh }
        } else if g_hi < dl {
            SeparationStatus::Separated { gap: g_lo }
        } else {
            SeparationStatus::SeparatedUnknownStrength { gap: g_lo }
        };
        Ok(SeparationReport {
            status,
            depth_used: level,
            gap_bracket: (g_lo, g_hi),
            max_diam_bracket: (dl, dh),
        })
    }

    /// Separation report at [`DEFAULT_SEPARATION_DEPTH`], computed once.
    pub fn separation(&self) -> &SeparationReport {
        self.separation.get_or_init(|| {
            self.check_separation(DEFAULT_SEPARATION_DEPTH).expect("depth is positive")
        })
    }
}

fn attractor_ball(g: &Geometry, maps: &[Similarity]) -> (Point, f64) {
    let fixed: Vec<Point> = maps.iter().map(|m| m.fixed_point(g)).collect();
    let mut center = g.origin();
    for p in &fixed {
        for (c, x) in center.0.iter_mut().zip(p.coords()) {
            *c += x / fixed.len() as f64;
        }
    }
    let radius = maps
        .iter()
        .map(|m| g.dist_unchecked(&center, &m.apply(g, &center)) / (1.0 - m.ratio))
        .fold(0.0, f64::max);
    (center, radius * (1.0 + 8.0 * f64::EPSILON))
}
