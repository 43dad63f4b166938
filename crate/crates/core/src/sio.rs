//! Singular-integral drivers: truncated integrals, symbolic principal-value
//! traces, the periodic-point criterion, symbolic maximal estimates,
//! ball-versus-cylinder comparisons and finite-horizon divergence
//! certificates.
//!
//! Every driver integrates `y ↦ k(x, y)` for a pole `x = π(w)` through the
//! cylinder quadrature in [`crate::measure`]; `depth` is the number of levels
//! each cylinder of the region is refined below its own level, except for
//! metric balls, where it is the absolute cell depth.

use serde::{Deserialize, Serialize};

use crate::error::{input_err, Error, Result};
use crate::geometry::Point;
use crate::ifs::{Cell, Ifs};
use crate::kernels::{HomogeneousKernel, KernelAt};
use crate::measure::{self, Integrand, QuadratureResult};
use crate::par;
use crate::symbolic::{EpWord, Word};

fn check_kernel(ifs: &Ifs, kern: &HomogeneousKernel) -> Result<()> {
    if ifs.geometry() != kern.geometry() {
        return Err(input_err!("kernel geometry {:?} differs from IFS geometry {:?}", kern.geometry(), ifs.geometry()));
    }
    Ok(())
}

/// One row of a principal-value trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    /// `∫_{C∖C_{w|k}} k(π(w), y) dμ(y)`.
    pub f: QuadratureResult,
    /// `∫_{C_{w|k}∖C_{w|k+1}} k(π(w), y) dμ(y)`.
    pub a: QuadratureResult,
    /// Some bracket in this row is not finite.
    pub inconclusive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvTrace {
    pub word: EpWord,
    pub x: Point,
    pub rows: Vec<TraceRow>,
    /// `F_K`.
    pub f_final: QuadratureResult,
    /// Increment over the first full period after the preperiod, when the
    /// trace reaches it.
    pub eta_estimate: Option<QuadratureResult>,
    /// Separation verdict of the IFS; brackets are set-level only when true.
    pub separated: bool,
}

impl PvTrace {
    pub fn any_inconclusive(&self) -> bool {
        self.rows.iter().any(|r| r.inconclusive)
    }

    /// Largest `|F_{k+1} − F_k − A_k|` minus its combined bracket; `≤ 0`
    /// when every row telescopes.
    pub fn telescoping_excess(&self) -> f64 {
        let mut fs: Vec<&QuadratureResult> = self.rows.iter().map(|r| &r.f).collect();
        fs.push(&self.f_final);
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (fs[i + 1].value - fs[i].value - r.a.value).abs() - (fs[i + 1].err + fs[i].err + r.a.err))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn complement_at(ifs: &Ifs, f: &dyn Integrand, v: &Word, depth: usize) -> Result<QuadratureResult> {
    if v.is_empty() {
        Ok(QuadratureResult::zero())
    } else {
        measure::integrate_complement(ifs, f, v, depth)
    }
}

/// `F_k` and `A_k` for `k = 0..K`, plus `F_K`.
pub fn pv_trace(ifs: &Ifs, kern: &HomogeneousKernel, w: &EpWord, k_max: usize, depth: usize) -> Result<PvTrace> {
    check_kernel(ifs, kern)?;
    ifs.check_epword(w)?;
    let x = ifs.code_point(w)?;
    let f = KernelAt::new(kern, x.clone());
    let fs = par::map_range(k_max + 1, |k| complement_at(ifs, &f, &w.prefix(k), depth));
    let fs = fs.into_iter().collect::<Result<Vec<_>>>()?;
    let a = par::map_range(k_max, |k| measure::integrate_annulus(ifs, &f, &w.prefix(k), &w.prefix(k + 1), depth));
    let a = a.into_iter().collect::<Result<Vec<_>>>()?;
    let rows: Vec<TraceRow> = (0..k_max)
        .map(|k| TraceRow {
            k,
            f: fs[k],
            a: a[k],
            inconclusive: !(fs[k].is_resolved() && a[k].is_resolved()),
        })
        .collect();
    let norm = w.normalized();
    let (start, p) = (norm.pre().len(), norm.period().len());
    let eta_estimate = (start + p <= k_max)
        .then(|| a[start..start + p].iter().fold(QuadratureResult::zero(), |acc, r| acc.add(r)));
    Ok(PvTrace {
        word: w.clone(),
        x,
        rows,
        f_final: fs[k_max],
        eta_estimate,
        separated: ifs.separation().is_separated(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NonzeroCertified,
    ZeroWithinBracket,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub w: Word,
    pub xi: Point,
    #[serde(rename = "I")]
    pub integral: QuadratureResult,
    pub verdict: Verdict,
}

fn verdict_of(q: &QuadratureResult) -> Verdict {
    if !q.err.is_finite() {
        Verdict::Inconclusive
    } else if q.value.abs() > q.err {
        Verdict::NonzeroCertified
    } else {
        Verdict::ZeroWithinBracket
    }
}

/// `I = ∫_{C∖C_w} k(ξ_w, y) dμ(y)` with `ξ_w` the fixed point of `S_w`.
pub fn criterion(ifs: &Ifs, kern: &HomogeneousKernel, w: &Word, depth: usize) -> Result<CriterionReport> {
    check_kernel(ifs, kern)?;
    if w.is_empty() {
        return Err(input_err!("criterion needs a nonempty word"));
    }
    let xi = ifs.fixed_point(w)?;
    let integral = measure::integrate_complement(ifs, &KernelAt::new(kern, xi.clone()), w, depth)?;
    Ok(CriterionReport { w: w.clone(), xi, verdict: verdict_of(&integral), integral })
}

/// `T_ε(1)(x) = ∫_{d(x,y) > ε} k(x, y) dμ(y)`, cells refined to absolute
/// depth `depth`.
pub fn truncated(ifs: &Ifs, kern: &HomogeneousKernel, x: &Point, eps: f64, depth: usize) -> Result<QuadratureResult> {
    check_kernel(ifs, kern)?;
    measure::integrate_ball_complement(ifs, &KernelAt::new(kern, x.clone()), x, eps, depth)
}

/// One scanned annulus `C_{w|m} ∖ C_{w|n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusValue {
    pub m: usize,
    pub n: usize,
    pub value: QuadratureResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalEstimate {
    pub w: EpWord,
    pub best: AnnulusValue,
    pub table: Vec<AnnulusValue>,
    pub separated: bool,
}

/// `max_{0 ≤ m < n ≤ max_n} |∫_{C_{w|m}∖C_{w|n}} k(π(w), y) dμ(y)|`, each
/// annulus assembled from the single-level increments.
pub fn maximal_symbolic(
    ifs: &Ifs,
    kern: &HomogeneousKernel,
    w: &EpWord,
    max_n: usize,
    depth: usize,
) -> Result<MaximalEstimate> {
    if max_n < 2 {
        return Err(input_err!("max_n must be at least 2, got {max_n}"));
    }
    let trace = pv_trace(ifs, kern, w, max_n, depth)?;
    let a: Vec<QuadratureResult> = trace.rows.iter().map(|r| r.a).collect();
    let mut table = Vec::with_capacity(max_n * (max_n + 1) / 2);
    for m in 0..max_n {
        let mut acc = QuadratureResult::zero();
        for (n, inc) in a.iter().enumerate().skip(m) {
            acc = acc.add(inc);
            table.push(AnnulusValue { m, n: n + 1, value: acc });
        }
    }
    let best = *table
        .iter()
        .reduce(|b, e| if e.value.value.abs() > b.value.value.abs() { e } else { b })
        .expect("max_n ≥ 2");
    Ok(MaximalEstimate { w: w.clone(), best, table, separated: trace.separated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub n: usize,
    pub m1: usize,
    /// `∫_{C_{v|n}∖C_{v|n+m1·p}}`, `p` the period length.
    pub cylinder: QuadratureResult,
    /// `∫_{B₁∖B₂}` with `B_i = B(π(v), factor · diam C_{v|·})`.
    pub ball: QuadratureResult,
    pub radii: (f64, f64),
    /// `|cylinder − ball|` with the combined bracket.
    pub gap: QuadratureResult,
}

/// Compare the cylinder annulus `C_{v|n}∖C_{v|n+m1·p}` with the metric
/// annulus between balls of radius `factor · diam` of the same cylinders.
/// Diameters use the upper end of the certified bracket.
pub fn ball_cylinder_gap(
    ifs: &Ifs,
    kern: &HomogeneousKernel,
    v: &EpWord,
    n: usize,
    m1: usize,
    depth: usize,
    radius_factor: f64,
) -> Result<GapReport> {
    check_kernel(ifs, kern)?;
    if n == 0 || m1 == 0 {
        return Err(input_err!("n and m1 must be at least 1"));
    }
    if !(radius_factor > 0.0) {
        return Err(input_err!("radius factor must be positive"));
    }
    if ifs.open_set().is_none() && !ifs.separation().is_separated() {
        return Err(Error::Refused(
            "ball comparison needs an open-set ball in the configuration or a separated IFS".into(),
        ));
    }
    ifs.check_epword(v)?;
    let x = ifs.code_point(v)?;
    let f = KernelAt::new(kern, x.clone());
    let long = n + m1 * v.normalized().period().len();
    let (outer, inner) = (v.prefix(n), v.prefix(long));
    let cylinder = measure::integrate_annulus(ifs, &f, &outer, &inner, depth)?;
    let diam = ifs.diam_bound();
    let r1 = radius_factor * ifs.compose(&outer)?.ratio * diam;
    let r2 = radius_factor * ifs.compose(&inner)?.ratio * diam;
    let ball = measure::integrate_ball_annulus(ifs, &f, &x, r2, r1, n + depth)?;
    let diff = cylinder.sub(&ball);
    let gap = QuadratureResult { value: diff.value.abs(), ..diff };
    Ok(GapReport { n, m1, cylinder, ball, radii: (r1, r2), gap })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceCertificate {
    pub w: Word,
    /// `η = ∫_{C∖C_w} k(ξ_w, y) dμ(y)`.
    pub eta: QuadratureResult,
    /// `∫_{C_{w^k}∖C_{w^{k+1}}} k(ξ_w, y) dμ(y)` for `k < K`.
    pub increments: Vec<QuadratureResult>,
    /// `∫_{C∖C_{w^K}} k(ξ_w, y) dμ(y)`.
    pub f_final: QuadratureResult,
    pub increments_agree: bool,
    pub linear_growth: bool,
    pub pass: bool,
}

impl DivergenceCertificate {
    pub fn status(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// Finite-horizon evidence that the principal value at `ξ_w` diverges:
/// equal block increments and `|F_K| ≥ K|η|` up to the brackets.
pub fn divergence_certificate(
    ifs: &Ifs,
    kern: &HomogeneousKernel,
    w: &Word,
    k_max: usize,
    depth: usize,
) -> Result<DivergenceCertificate> {
    if k_max == 0 {
        return Err(input_err!("K must be at least 1"));
    }
    let crit = criterion(ifs, kern, w, depth)?;
    if crit.verdict != Verdict::NonzeroCertified {
        return Err(Error::Refused(format!(
            "criterion at {w} is {:?} (I = {} ± {}); nothing to certify",
            crit.verdict, crit.integral.value, crit.integral.err
        )));
    }
    let f = KernelAt::new(kern, crit.xi.clone());
    let increments = par::map_range(k_max, |k| measure::integrate_annulus(ifs, &f, &w.power(k), &w.power(k + 1), depth));
    let increments = increments.into_iter().collect::<Result<Vec<_>>>()?;
    let increments_agree = increments.iter().all(|a| {
        increments.iter().all(|b| (a.value - b.value).abs() <= 2.0 * (a.err + b.err))
    });
    let f_final = measure::integrate_complement(ifs, &f, &w.power(k_max), depth)?;
    let eta = crit.integral;
    let slack = f_final.err + increments.iter().map(|a| a.err).sum::<f64>();
    let linear_growth = f_final.value.abs() >= k_max as f64 * eta.value.abs() - slack;
    Ok(DivergenceCertificate {
        w: w.clone(),
        eta,
        increments,
        f_final,
        increments_agree,
        linear_growth,
        pass: increments_agree && linear_growth,
    })
}

/// `g(π(τ)) = Σ_k χ_{C∖C_1}(S_{u^k}^{-1} π(τ))` decided from a cell word:
/// `Some(true)` when `τ = u^k a …` with `a ≠ 1`, `Some(false)` when every
/// extension of the word gives 0, `None` while still undecided.
pub fn witness_indicator(u: &Word, v: &Word) -> Option<bool> {
    let (u, v) = (u.letters(), v.letters());
    let mut j = 0;
    loop {
        if v.len() <= j {
            return None;
        }
        if v[j] != 1 {
            return Some(true);
        }
        let rest = &v[j..];
        if rest.len() < u.len() {
            return if u.starts_with(rest) { None } else { Some(false) };
        }
        if &rest[..u.len()] != u {
            return Some(false);
        }
        j += u.len();
    }
}

/// `y ↦ g(y) k(pole, y)` for the witness function built on `u`.
pub struct WitnessAt<'a> {
    pub kernel: &'a HomogeneousKernel,
    pub pole: Point,
    pub u: Word,
}

impl Integrand for WitnessAt<'_> {
    fn eval(&self, cell: &Cell) -> f64 {
        match witness_indicator(&self.u, &cell.word) {
            Some(true) => self.kernel.eval_unchecked(&self.pole, &cell.rep),
            _ => 0.0,
        }
    }

    fn oscillation(&self, cell: &Cell) -> f64 {
        let inner = KernelAt { kernel: self.kernel, pole: self.pole.clone() };
        match witness_indicator(&self.u, &cell.word) {
            Some(true) => inner.oscillation(cell),
            Some(false) => 0.0,
            None => {
                let delta = cell.dist_lower(self.kernel.geometry(), &self.pole);
                if delta > 0.0 {
                    self.kernel.sup_at_distance(delta)
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessGrowth {
    pub u: Word,
    pub m: usize,
    /// `∫_{C∖C_{u^m 1}} g(y) k(x₁, y) dμ(y)`, `x₁ = π(u^∞)`.
    pub integral: QuadratureResult,
    /// `∫_{C∖C_1} k(x₁, z) dμ(z)`; the integral equals `(m+1)` times this.
    pub per_block: QuadratureResult,
}

/// The bounded function `g` whose symbolic maximal integrals at `π(u^∞)`
/// grow linearly in `m`; `u` must start with letter 1.
pub fn witness_growth(ifs: &Ifs, kern: &HomogeneousKernel, u: &Word, m: usize, depth: usize) -> Result<WitnessGrowth> {
    check_kernel(ifs, kern)?;
    if u.letters().first() != Some(&1) {
        return Err(input_err!("witness word must start with letter 1, got {u}"));
    }
    let pole = ifs.fixed_point(u)?;
    let g = WitnessAt { kernel: kern, pole: pole.clone(), u: u.clone() };
    let integral = measure::integrate_complement(ifs, &g, &u.power(m).push(1), depth)?;
    let per_block = measure::integrate_complement(ifs, &KernelAt::new(kern, pole), &Word::new(&[1]), depth)?;
    Ok(WitnessGrowth { u: u.clone(), m, integral, per_block })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Geometry;
    use crate::kernels::OmegaSpec;
    use crate::presets;

    fn sign_kernel() -> HomogeneousKernel {
        HomogeneousKernel::new(&Geometry::Euclidean { dim: 1 }, 2f64.ln() / 3f64.ln(), OmegaSpec::Sign).unwrap()
    }

    fn ones() -> EpWord {
        EpWord::periodic(Word::new(&[1])).unwrap()
    }

    #[test]
    fn sign_trace_has_constant_increments() {
        let mt = presets::middle_thirds();
        let t = pv_trace(&mt, &sign_kernel(), &ones(), 6, 10).unwrap();
        assert_eq!(t.rows.len(), 6);
        assert!(t.separated && !t.any_inconclusive());
        assert_eq!(t.rows[0].f, QuadratureResult::zero());
        let a0 = t.rows[0].a;
        assert!(a0.value > -0.6458 && a0.value < -0.5);
        for r in &t.rows {
            assert!(r.a.agrees_with(&a0), "{r:?}");
        }
        assert!(t.telescoping_excess() <= 0.0);
        let eta = t.eta_estimate.unwrap();
        assert_eq!(eta.value, a0.value);
    }

    #[test]
    fn empty_trace() {
        let mt = presets::middle_thirds();
        let t = pv_trace(&mt, &sign_kernel(), &ones(), 0, 4).unwrap();
        assert!(t.rows.is_empty() && t.eta_estimate.is_none());
    }

    #[test]
    fn constant_kernel_increments_are_positive() {
        let mt = presets::middle_thirds();
        let k = HomogeneousKernel::new(mt.geometry(), mt.dim(), OmegaSpec::Constant { c: 1.0 }).unwrap();
        let t = pv_trace(&mt, &k, &ones(), 5, 8).unwrap();
        assert!(t.rows.iter().all(|r| r.a.lower() > 0.0));
    }

    #[test]
    fn geometry_mismatch_is_rejected() {
        let fc = presets::four_corner();
        assert!(pv_trace(&fc, &sign_kernel(), &ones(), 2, 2).is_err());
    }

    #[test]
    fn criterion_examples() {
        let line = presets::line_ifs();
        let vertical = HomogeneousKernel::new(line.geometry(), 1.0, OmegaSpec::Riesz { axis: 2 }).unwrap();
        let r = criterion(&line, &vertical, &Word::new(&[1]), 8).unwrap();
        assert_eq!(r.integral.value, 0.0);
        assert_eq!(r.verdict, Verdict::ZeroWithinBracket);
        // Ω(x − y) points along (1, 0) from ξ_2 = (1, 0) towards C_1
        let bumped = vertical.perturb(&Point::new(&[1.0, 0.0]), 0.5, 0.1).unwrap();
        let r = criterion(&line, &bumped, &Word::new(&[2]), 8).unwrap();
        assert_eq!(r.verdict, Verdict::NonzeroCertified);
        assert!(r.integral.value > 0.0);
        // from ξ_1 = 0 the arguments point along (−1, 0), outside the cap
        let r = criterion(&line, &bumped, &Word::new(&[1]), 8).unwrap();
        assert_eq!(r.integral.value, 0.0);

        let fc = presets::four_corner();
        let riesz = HomogeneousKernel::new(fc.geometry(), 1.0, OmegaSpec::Riesz { axis: 1 }).unwrap();
        let r = criterion(&fc, &riesz, &Word::new(&[1]), 5).unwrap();
        assert_eq!(r.verdict, Verdict::NonzeroCertified);
        assert!(r.integral.value < 0.0);
        assert!(criterion(&fc, &riesz, &Word::empty(), 5).is_err());
    }

    #[test]
    fn criterion_scales_linearly() {
        let fc = presets::four_corner();
        let k = HomogeneousKernel::new(fc.geometry(), 1.0, OmegaSpec::Constant { c: 1.0 }).unwrap();
        let w = Word::new(&[2, 3]);
        let a = criterion(&fc, &k, &w, 4).unwrap();
        let b = criterion(&fc, &k.scaled(3.5).unwrap(), &w, 4).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert!((b.integral.value - 3.5 * a.integral.value).abs() < 1e-12 * b.integral.value.abs());
    }

    #[test]
    fn truncated_examples() {
        let mt = presets::middle_thirds();
        let k = sign_kernel();
        let zero = Point::new(&[0.0]);
        let far = truncated(&mt, &k, &Point::new(&[5.0]), 7.0, 8).unwrap();
        assert_eq!((far.value, far.err), (0.0, 0.0));
        let half = truncated(&mt, &k, &zero, 0.5, 12).unwrap();
        let eta = pv_trace(&mt, &k, &ones(), 1, 11).unwrap().rows[0].a;
        assert!(half.agrees_with(&eta), "{half:?} {eta:?}");
        assert!(truncated(&mt, &k, &zero, 0.0, 8).is_err());
    }

    #[test]
    fn maximal_examples() {
        let mt = presets::middle_thirds();
        let est = maximal_symbolic(&mt, &sign_kernel(), &ones(), 4, 8).unwrap();
        assert_eq!(est.table.len(), 10);
        assert_eq!((est.best.m, est.best.n), (0, 4));
        assert!(est.table.iter().all(|e| e.m < e.n));
        let single = est.table.iter().filter(|e| e.n == e.m + 1).map(|e| e.value.value.abs()).fold(0.0, f64::max);
        assert!(est.best.value.value.abs() >= single);
        assert!(maximal_symbolic(&mt, &sign_kernel(), &ones(), 1, 8).is_err());
    }

    #[test]
    fn ball_gap_with_unit_radii_vanishes() {
        let mt = presets::middle_thirds();
        for n in 2..5 {
            let r = ball_cylinder_gap(&mt, &sign_kernel(), &ones(), n, 1, 9, 1.0).unwrap();
            assert!(r.gap.value >= 0.0);
            assert!(r.gap.value <= r.gap.err, "{r:?}");
        }
        assert!(ball_cylinder_gap(&mt, &sign_kernel(), &ones(), 0, 1, 9, 2.0).is_err());
    }

    #[test]
    fn ball_gap_refused_for_overlaps() {
        let h = presets::halves();
        let k = HomogeneousKernel::new(h.geometry(), 1.0, OmegaSpec::Constant { c: 1.0 }).unwrap();
        assert!(matches!(ball_cylinder_gap(&h, &k, &ones(), 2, 1, 4, 2.0), Err(Error::Refused(_))));
    }

    #[test]
    fn divergence_examples() {
        let mt = presets::middle_thirds();
        let cert = divergence_certificate(&mt, &sign_kernel(), &Word::new(&[1]), 6, 10).unwrap();
        assert!(cert.pass, "{cert:?}");
        assert!(cert.eta.value > -0.6458 && cert.eta.value < -0.5);
        let k = HomogeneousKernel::new(mt.geometry(), mt.dim(), OmegaSpec::Constant { c: 1.0 }).unwrap();
        let cert = divergence_certificate(&mt, &k, &Word::new(&[1]), 4, 8).unwrap();
        assert!(cert.pass && cert.eta.value > 0.0);
        let line = presets::line_ifs();
        let vertical = HomogeneousKernel::new(line.geometry(), 1.0, OmegaSpec::Riesz { axis: 2 }).unwrap();
        assert!(matches!(
            divergence_certificate(&line, &vertical, &Word::new(&[1]), 3, 6),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn witness_indicator_cases() {
        let u = Word::new(&[1, 2]);
        let w = |v: &[u16]| witness_indicator(&u, &Word::new(v));
        assert_eq!(w(&[]), None);
        assert_eq!(w(&[2]), Some(true));
        assert_eq!(w(&[1, 1]), Some(false));
        assert_eq!(w(&[1]), None);
        assert_eq!(w(&[1, 2]), None);
        assert_eq!(w(&[1, 2, 2]), Some(true));
        assert_eq!(w(&[1, 2, 1, 1]), Some(false));
    }

    #[test]
    fn witness_grows_linearly() {
        let fc = presets::four_corner();
        let k = HomogeneousKernel::new(fc.geometry(), 1.0, OmegaSpec::Riesz { axis: 1 }).unwrap();
        let u = Word::new(&[1, 4]);
        for m in [1, 3] {
            let g = witness_growth(&fc, &k, &u, m, 4).unwrap();
            let expected = g.per_block.scale((m + 1) as f64);
            assert!(g.integral.agrees_with(&expected), "{g:?}");
        }
        assert!(witness_growth(&fc, &k, &Word::new(&[2]), 1, 3).is_err());
    }
}
