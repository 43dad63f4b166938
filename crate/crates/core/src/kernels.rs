//! Homogeneous kernels `k(x, y) = Ω(z) / d(x, y)^s` and bump perturbations
//! of `Ω`.
//!
//! The argument is `z = x − y` in Euclidean space and `z = x⁻¹·y` in the
//! Heisenberg group. Replacing `Ω(z)` by `Ω(z⁻¹)` converts between the two
//! conventions. `Ω` is always evaluated on the normalized argument
//! `δ_{1/‖z‖} z`, so homogeneity of degree zero holds by construction.

use serde::{Deserialize, Serialize};

use crate::error::{config_err, input_err, Error, Result};
use crate::geometry::{Geometry, Point};
use crate::ifs::Cell;
use crate::measure::{Integrand, ModulusSpec};
use crate::rng;

/// Bound on `max |φ'|` for the bump profile (attained near `|t| ≈ 0.76`).
pub const BUMP_DERIVATIVE_BOUND: f64 = 2.171;

/// `φ(t) = exp(1 − 1/(1 − t²))` on `|t| < 1`, zero outside; `φ(0) = 1`.
pub fn bump_profile(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// One monomial `c · Π z_i^{p_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub c: f64,
    pub powers: Vec<u32>,
}

/// Degree-zero homogeneous function on the sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaSpec {
    Constant { c: f64 },
    /// `z_axis / ‖z‖` (1-based axis).
    Riesz { axis: usize },
    /// `P(z) / |z|^degree` for an n-homogeneous polynomial `P` (Euclidean).
    PolyOverNorm { coeffs: Vec<Monomial>, degree: u32 },
    /// `sign(z)` on the line.
    Sign,
    /// `base + eps · φ(θ / rho)`, `θ` the angle between the argument and `direction`.
    Perturbed { base: Box<OmegaSpec>, direction: Vec<f64>, rho: f64, eps: f64 },
}

/// The bump added by a perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    /// Unit vector at the center of the cap.
    pub direction: Vec<f64>,
    /// Cap radius in `(0, π)`.
    pub rho: f64,
    /// Amplitude, `> 0`.
    pub eps: f64,
}

/// JSON form: `{"s": 1.0, "omega": {"kind": "riesz", "axis": 1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub s: f64,
    pub omega: OmegaSpec,
    /// User-asserted real analyticity of `Ω`; recorded, never inferred.
    #[serde(default)]
    pub analytic: bool,
}

/// A validated kernel bound to a geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousKernel {
    spec: KernelSpec,
    geometry: Geometry,
    omega_sup: f64,
    omega_modulus: ModulusSpec,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `(sup |Ω|, Lipschitz constant of Ω on the sphere in the chordal metric)`.
fn omega_bounds(omega: &OmegaSpec, g: &Geometry) -> Result<(f64, Option<f64>)> {
    let d = g.dim();
    match omega {
        OmegaSpec::Constant { c } => {
            if !c.is_finite() || *c == 0.0 {
                return Err(config_err!("constant Ω must be finite and nonzero, got {c}"));
            }
            Ok((c.abs(), Some(0.0)))
        }
        OmegaSpec::Riesz { axis } => {
            if *axis == 0 || *axis > d {
                return Err(config_err!("Riesz axis {axis} outside 1..={d}"));
            }
            // the vertical Heisenberg component t/‖z‖² has no cheap modulus
            let lip = if g.is_euclidean() || *axis <= 2 { Some(1.0) } else { None };
            Ok((1.0, lip))
        }
        OmegaSpec::PolyOverNorm { coeffs, degree } => {
            if !g.is_euclidean() {
                return Err(config_err!("poly_over_norm is only defined in Euclidean space"));
            }
            if coeffs.is_empty() {
                return Err(config_err!("poly_over_norm needs at least one monomial"));
            }
            for m in coeffs {
                if m.powers.len() != d {
                    return Err(config_err!("monomial has {} powers, dimension is {d}", m.powers.len()));
                }
                if m.powers.iter().sum::<u32>() != *degree {
                    return Err(config_err!("monomial {:?} is not of degree {degree}", m.powers));
                }
                if !m.c.is_finite() {
                    return Err(config_err!("non-finite coefficient"));
                }
            }
            let mass: f64 = coeffs.iter().map(|m| m.c.abs()).sum();
            if mass == 0.0 {
                return Err(config_err!("poly_over_norm polynomial is zero"));
            }
            Ok((mass, Some(*degree as f64 * mass)))
        }
        OmegaSpec::Sign => {
            if *g != (Geometry::Euclidean { dim: 1 }) {
                return Err(config_err!("sign kernel requires Euclidean dimension 1"));
            }
            // S⁰ = {±1}: |Ω(1) − Ω(−1)| = 2 = chordal distance
            Ok((1.0, Some(1.0)))
        }
        OmegaSpec::Perturbed { base, direction, rho, eps } => {
            check_bump(g, direction, *rho, *eps)?;
            let (m, lip) = omega_bounds(base, g)?;
            // geodesic ≤ (π/2)·chord on the sphere
            let bump_lip = eps * BUMP_DERIVATIVE_BOUND * std::f64::consts::FRAC_PI_2 / rho;
            let lip = if g.is_euclidean() { lip.map(|l| l + bump_lip) } else { None };
            Ok((m + eps, lip))
        }
    }
}

fn check_bump(g: &Geometry, direction: &[f64], rho: f64, eps: f64) -> Result<()> {
    if direction.len() != g.dim() {
        return Err(input_err!("direction has {} coordinates, geometry has {}", direction.len(), g.dim()));
    }
    let n = norm(direction);
    if !(n > 0.0) || !n.is_finite() {
        return Err(input_err!("bump direction must be a nonzero finite vector"));
    }
    if !(rho > 0.0 && rho < std::f64::consts::PI) {
        return Err(input_err!("cap radius must lie in (0, π), got {rho}"));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(input_err!("bump amplitude must be positive, got {eps}"));
    }
    Ok(())
}

fn omega_at(omega: &OmegaSpec, u: &[f64]) -> f64 {
    match omega {
        OmegaSpec::Constant { c } => *c,
        OmegaSpec::Riesz { axis } => u[axis - 1],
        OmegaSpec::PolyOverNorm { coeffs, degree } => {
            let p: f64 = coeffs
                .iter()
                .map(|m| m.c * u.iter().zip(&m.powers).map(|(x, &k)| x.powi(k as i32)).product::<f64>())
                .sum();
            p / norm(u).powi(*degree as i32)
        }
        OmegaSpec::Sign => u[0].signum(),
        OmegaSpec::Perturbed { base, direction, rho, eps } => {
            let h = norm(direction);
            let cos = u.iter().zip(direction).map(|(a, b)| a * b).sum::<f64>() / (norm(u) * h);
            omega_at(base, u) + eps * bump_profile(cos.clamp(-1.0, 1.0).acos() / rho)
        }
    }
}

impl KernelSpec {
    pub fn build(&self, g: &Geometry) -> Result<HomogeneousKernel> {
        if !(self.s > 0.0) || !self.s.is_finite() {
            return Err(config_err!("kernel exponent s must be positive, got {}", self.s));
        }
        let (omega_sup, lip) = omega_bounds(&self.omega, g).map_err(|e| match e {
            Error::Input(m) => Error::Config(m),
            e => e,
        })?;
        let omega_modulus = match lip {
            Some(l) => ModulusSpec::Lipschitz { l },
            None => ModulusSpec::SupOnly { m: omega_sup },
        };
        Ok(HomogeneousKernel { spec: self.clone(), geometry: *g, omega_sup, omega_modulus })
    }
}

impl HomogeneousKernel {
    pub fn new(g: &Geometry, s: f64, omega: OmegaSpec) -> Result<HomogeneousKernel> {
        KernelSpec { s, omega, analytic: false }.build(g)
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn s(&self) -> f64 {
        self.spec.s
    }

    pub fn omega(&self) -> &OmegaSpec {
        &self.spec.omega
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    /// Certified `sup |Ω|`.
    pub fn omega_sup(&self) -> f64 {
        self.omega_sup
    }

    /// Modulus of `Ω` on the unit sphere.
    pub fn omega_modulus(&self) -> ModulusSpec {
        self.omega_modulus
    }

    /// Copy with `Ω` multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<HomogeneousKernel> {
        if !(c > 0.0) {
            return Err(input_err!("scale must be positive, got {c}"));
        }
        let omega = match &self.spec.omega {
            OmegaSpec::Constant { c: a } => OmegaSpec::Constant { c: a * c },
            OmegaSpec::PolyOverNorm { coeffs, degree } => OmegaSpec::PolyOverNorm {
                coeffs: coeffs.iter().map(|m| Monomial { c: m.c * c, powers: m.powers.clone() }).collect(),
                degree: *degree,
            },
            _ => return Err(input_err!("only constant and polynomial Ω can be rescaled exactly")),
        };
        KernelSpec { omega, ..self.spec.clone() }.build(&self.geometry)
    }

    /// The bump of a perturbed kernel.
    pub fn bump(&self) -> Option<BumpSpec> {
        match &self.spec.omega {
            OmegaSpec::Perturbed { direction, rho, eps, .. } => {
                Some(BumpSpec { direction: direction.clone(), rho: *rho, eps: *eps })
            }
            _ => None,
        }
    }

    /// `Ω(z)`; domain error at the identity.
    pub fn eval_omega(&self, z: &Point) -> Result<f64> {
        self.geometry.check(z)?;
        let n = self.geometry.gauge(z);
        if n == 0.0 {
            return Err(Error::Domain("Ω is undefined at the identity".into()));
        }
        Ok(self.omega_normalized(z, n))
    }

    fn omega_normalized(&self, z: &Point, n: f64) -> f64 {
        let u = self.geometry.dilate_unchecked(1.0 / n, z);
        omega_at(&self.spec.omega, u.coords())
    }

    fn argument(&self, x: &Point, y: &Point) -> Point {
        match self.geometry {
            Geometry::Euclidean { .. } => Point(x.0.iter().zip(&y.0).map(|(a, b)| a - b).collect()),
            Geometry::Heisenberg1 => self.geometry.relative(x, y),
        }
    }

    /// `k(x, y)` without input validation; `±∞`/NaN on the diagonal.
    pub fn eval_unchecked(&self, x: &Point, y: &Point) -> f64 {
        let z = self.argument(x, y);
        let d = self.geometry.gauge(&z);
        self.omega_normalized(&z, d) / d.powf(self.spec.s)
    }

    /// `k(x, y)`; domain error when `x = y`.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        self.geometry.check(x)?;
        self.geometry.check(y)?;
        let z = self.argument(x, y);
        let d = self.geometry.gauge(&z);
        if d == 0.0 {
            return Err(Error::Domain("kernel is singular on the diagonal".into()));
        }
        Ok(self.omega_normalized(&z, d) / d.powf(self.spec.s))
    }

    /// Bound on `|k(x, y)|` when `d(x, y) ≥ δ`.
    pub fn sup_at_distance(&self, delta: f64) -> f64 {
        self.omega_sup / delta.powf(self.spec.s)
    }

    /// Modulus of `y ↦ k(x, y)` on `{d(x, y) ≥ δ}`:
    /// `L(δ) = (s·sup|Ω| + 2·L_Ω) / δ^{s+1}`.
    pub fn modulus_on(&self, delta: f64) -> Result<ModulusSpec> {
        if !(delta > 0.0) {
            return Err(input_err!("distance must be positive, got {delta}"));
        }
        Ok(self.modulus_unchecked(delta))
    }

    fn modulus_unchecked(&self, delta: f64) -> ModulusSpec {
        let s = self.spec.s;
        match self.omega_modulus {
            ModulusSpec::Lipschitz { l } => {
                ModulusSpec::Lipschitz { l: (s * self.omega_sup + 2.0 * l) / delta.powf(s + 1.0) }
            }
            _ => ModulusSpec::SupOnly { m: self.sup_at_distance(delta) },
        }
    }

    /// Add the bump `eps · φ(θ / rho)` centred at `direction`.
    pub fn perturb(&self, direction: &Point, rho: f64, eps: f64) -> Result<HomogeneousKernel> {
        check_bump(&self.geometry, direction.coords(), rho, eps)?;
        let n = norm(direction.coords());
        let omega = OmegaSpec::Perturbed {
            base: Box::new(self.spec.omega.clone()),
            direction: direction.coords().iter().map(|c| c / n).collect(),
            rho,
            eps,
        };
        KernelSpec { omega, ..self.spec.clone() }.build(&self.geometry)
    }

    /// `max |Ω_self − Ω_other|` over a deterministic sample of the unit sphere.
    pub fn sup_norm_change(&self, other: &HomogeneousKernel, n: usize) -> Result<f64> {
        if self.geometry != other.geometry {
            return Err(input_err!("kernels live on different geometries"));
        }
        let sample = sphere_sample(&self.geometry, n, 0);
        let mut best: f64 = 0.0;
        for z in &sample {
            best = best.max((self.eval_omega(z)? - other.eval_omega(z)?).abs());
        }
        Ok(best)
    }
}

/// `Ω(z)` free-function form.
pub fn eval_omega(kern: &HomogeneousKernel, z: &Point) -> Result<f64> {
    kern.eval_omega(z)
}

/// `k(x, y)` free-function form.
pub fn eval_kernel(kern: &HomogeneousKernel, x: &Point, y: &Point) -> Result<f64> {
    kern.eval(x, y)
}

/// Lipschitz bound for `y ↦ k(x, y)` valid where `d(x, y) ≥ δ`.
pub fn kernel_modulus_on(kern: &HomogeneousKernel, delta: f64) -> Result<ModulusSpec> {
    kern.modulus_on(delta)
}

/// Bump perturbation; `Ω* ≥ Ω` with equality off the open cap.
pub fn perturb(kern: &HomogeneousKernel, direction: &Point, rho: f64, eps: f64) -> Result<HomogeneousKernel> {
    kern.perturb(direction, rho, eps)
}

/// `n` points of the unit sphere `{‖z‖ = 1}`: both points of `S⁰`, evenly
/// spaced angles on the circle, and otherwise seeded cube samples pushed to
/// the sphere by the dilation.
pub fn sphere_sample(g: &Geometry, n: usize, seed: u64) -> Vec<Point> {
    match g {
        Geometry::Euclidean { dim: 1 } => vec![Point::new(&[1.0]), Point::new(&[-1.0])],
        Geometry::Euclidean { dim: 2 } => (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / n as f64;
                Point::new(&[a.cos(), a.sin()])
            })
            .collect(),
        _ => {
            let d = g.dim() as u64;
            let mut out = Vec::with_capacity(n);
            let mut idx = 0u64;
            while out.len() < n {
                let z: Vec<f64> = (0..d).map(|j| 2.0 * rng::unit(rng::at(seed, idx * d + j)) - 1.0).collect();
                idx += 1;
                let p = Point::from(z);
                let r = g.gauge(&p);
                if r > 1e-3 {
                    out.push(g.dilate_unchecked(1.0 / r, &p));
                }
            }
            out
        }
    }
}

/// `y ↦ k(pole, y)` as a quadrature integrand. Each cell uses its own
/// certified distance to the pole, so far cells get sharp error bounds.
pub struct KernelAt<'a> {
    pub kernel: &'a HomogeneousKernel,
    pub pole: Point,
}

impl<'a> KernelAt<'a> {
    pub fn new(kernel: &'a HomogeneousKernel, pole: Point) -> KernelAt<'a> {
        KernelAt { kernel, pole }
    }
}

impl Integrand for KernelAt<'_> {
    fn eval(&self, cell: &Cell) -> f64 {
        self.kernel.eval_unchecked(&self.pole, &cell.rep)
    }

    fn oscillation(&self, cell: &Cell) -> f64 {
        let delta = cell.dist_lower(&self.kernel.geometry, &self.pole);
        if delta <= 0.0 {
            return f64::INFINITY;
        }
        self.kernel.modulus_unchecked(delta).oscillation(cell.diam)
    }

    fn sup_beyond(&self, cell: &Cell, center: &Point, inner: f64) -> f64 {
        let mut delta = cell.dist_lower(&self.kernel.geometry, &self.pole);
        if *center == self.pole {
            delta = delta.max(inner);
        }
        if delta <= 0.0 {
            f64::INFINITY
        } else {
            self.kernel.sup_at_distance(delta)
        }
    }
}
