use serde::Serialize;
use serde_json::{json, Value};

use selfsim::ergodic;
use selfsim::geometry::Point;
use selfsim::ifs::Ifs;
use selfsim::kernels::{HomogeneousKernel, KernelAt};
use selfsim::measure::{self, FnIntegrand, Integrand, ModulusSpec, One};
use selfsim::sio::{self, Verdict};
use selfsim::symbolic::Word;
use selfsim::{Error, Result};

use crate::config::{IntegrandSpec, Method, RegionSpec, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

/// Text to emit and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

pub struct Run<'a> {
    pub command: &'a str,
    pub cfg: RunConfig,
    /// Configuration as loaded (after overrides); embedded in JSON output.
    pub raw: Value,
    pub json: bool,
    pub hits: bool,
}

impl Run<'_> {
    fn report<T: Serialize>(&self, result: &T, code: i32) -> Result<Outcome> {
        let body = json!({ "command": self.command, "config": self.raw, "result": result });
        let text = serde_json::to_string_pretty(&body).map_err(|e| Error::Input(e.to_string()))?;
        Ok(Outcome { text: text + "\n", code })
    }

    fn ifs(&self) -> Result<Ifs> {
        self.cfg.ifs.build()
    }

    fn kernel(&self, ifs: &Ifs) -> Result<HomogeneousKernel> {
        self.cfg.kernel()?.build(ifs.geometry())
    }

    pub fn execute(&self) -> Result<Outcome> {
        match self.command {
            "dim" => self.dim(),
            "separation" => self.separation(),
            "integrate" => self.integrate(),
            "pv-trace" => self.pv_trace(),
            "truncated" => self.truncated(),
            "criterion" => self.criterion(),
            "maximal" => self.maximal(),
            "gap" => self.gap(),
            "birkhoff" => self.birkhoff(),
            "perturb" => self.perturb(),
            "divergence" => self.divergence(),
            other => Err(Error::Input(format!("unknown command {other}"))),
        }
    }

    fn dim(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let s = ifs.dim();
        let residual = (ifs.ratios().iter().map(|r| r.powf(s)).sum::<f64>() - 1.0).abs();
        self.report(&json!({ "s": s, "residual": residual }), EXIT_OK)
    }

    fn separation(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let report = ifs.check_separation(self.cfg.depth(selfsim::ifs::DEFAULT_SEPARATION_DEPTH))?;
        let code = match report.status {
            selfsim::ifs::SeparationStatus::Inconclusive { .. } => EXIT_INCONCLUSIVE,
            _ => EXIT_OK,
        };
        let result = json!({ "report": report, "diam_bracket": ifs.diam_bracket(), "dim": ifs.dim() });
        self.report(&result, code)
    }

    fn integrate(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let spec = self.cfg.integrand.clone().unwrap_or(IntegrandSpec::One);
        let region = self.cfg.region.clone().unwrap_or_default();
        let depth = self.cfg.depth(8);
        let kernel = match &spec {
            IntegrandSpec::Kernel { .. } => Some(self.kernel(&ifs)?),
            _ => None,
        };
        if self.cfg.method.unwrap_or_default() == Method::MonteCarlo {
            if region != RegionSpec::Whole {
                return Err(Error::Config("Monte Carlo integrates over the whole attractor only".into()));
            }
            let samples = self.cfg.samples.unwrap_or(100_000);
            let seed = self.cfg.seed.unwrap_or(0);
            let f = pointwise(&ifs, &spec, kernel.as_ref())?;
            let r = measure::mc_integrate(&ifs, |p| f(p), samples, seed)?;
            return self.report(&r, EXIT_OK);
        }
        let integrand: Box<dyn Integrand + '_> = match &spec {
            IntegrandSpec::One => Box::new(One),
            IntegrandSpec::Monomial { .. } => {
                let f = pointwise(&ifs, &spec, None)?;
                let l = monomial_lipschitz(&ifs, &spec)?;
                Box::new(FnIntegrand::new(f, ModulusSpec::Lipschitz { l }))
            }
            IntegrandSpec::Kernel { point } => {
                let p = Point::new(point);
                ifs.geometry().check(&p)?;
                Box::new(KernelAt::new(kernel.as_ref().expect("built above"), p))
            }
        };
        let f = integrand.as_ref();
        let r = match &region {
            RegionSpec::Whole => measure::integrate(&ifs, f, depth)?,
            RegionSpec::Cylinder { word } => measure::integrate_cylinder(&ifs, f, &Word::new(word), depth)?,
            RegionSpec::Complement { word } => measure::integrate_complement(&ifs, f, &Word::new(word), depth)?,
            RegionSpec::BallComplement { center, eps } => {
                measure::integrate_ball_complement(&ifs, f, &Point::new(center), *eps, depth)?
            }
        };
        self.report(&r, if r.is_resolved() { EXIT_OK } else { EXIT_INCONCLUSIVE })
    }

    fn pv_trace(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let kern = self.kernel(&ifs)?;
        let w = self.cfg.word()?.infinite()?;
        let trace = sio::pv_trace(&ifs, &kern, &w, self.cfg.k.unwrap_or(6), self.cfg.depth(10))?;
        let code = if trace.any_inconclusive() || !trace.separated { EXIT_INCONCLUSIVE } else { EXIT_OK };
        if self.json {
            return self.report(&trace, code);
        }
        let flag = trace.any_inconclusive();
        let mut text = String::from("k,F_value,F_err,A_value,A_err");
        text.push_str(if flag { ",flag\n" } else { "\n" });
        for r in &trace.rows {
            text.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.k, r.f.value, r.f.err, r.a.value, r.a.err
            ));
            if flag {
                text.push_str(if r.inconclusive { ",inconclusive" } else { "," });
            }
            text.push('\n');
        }
        Ok(Outcome { text, code })
    }

    fn truncated(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let kern = self.kernel(&ifs)?;
        let x = match (&self.cfg.point, &self.cfg.word) {
            (Some(p), _) => Point::new(p),
            (None, Some(w)) => ifs.code_point(&w.infinite()?)?,
            (None, None) => return Err(Error::Config("truncated needs \"point\" or \"word\"".into())),
        };
        let eps = self.cfg.eps.ok_or_else(|| Error::Config("missing \"eps\"".into()))?;
        let r = sio::truncated(&ifs, &kern, &x, eps, self.cfg.depth(12))?;
        let result = json!({ "x": x, "eps": eps, "integral": r });
        self.report(&result, if r.is_resolved() { EXIT_OK } else { EXIT_INCONCLUSIVE })
    }

    fn criterion(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let kern = self.kernel(&ifs)?;
        let r = sio::criterion(&ifs, &kern, &self.cfg.word()?.finite()?, self.cfg.depth(8))?;
        let code = verdict_code(r.verdict);
        self.report(&r, code)
    }

    fn maximal(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let kern = self.kernel(&ifs)?;
        let w = self.cfg.word()?.infinite()?;
        let est = sio::maximal_symbolic(&ifs, &kern, &w, self.cfg.max_n.unwrap_or(8), self.cfg.depth(8))?;
        let resolved = est.table.iter().all(|e| e.value.is_resolved());
        let code = if resolved && est.separated { EXIT_OK } else { EXIT_INCONCLUSIVE };
        self.report(&est, code)
    }

    fn gap(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let kern = self.kernel(&ifs)?;
        let w = self.cfg.word()?.infinite()?;
        let r = sio::ball_cylinder_gap(
            &ifs,
            &kern,
            &w,
            self.cfg.n.unwrap_or(2),
            self.cfg.m1.unwrap_or(1),
            self.cfg.depth(8),
            self.cfg.radius_factor.unwrap_or(2.0),
        )?;
        let code = if r.gap.is_resolved() { EXIT_OK } else { EXIT_INCONCLUSIVE };
        self.report(&r, code)
    }

    fn birkhoff(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let target = Word::new(self.cfg.target.as_deref().unwrap_or(&[]));
        let n = self.cfg.n_steps.unwrap_or(100_000);
        let seed = self.cfg.seed.unwrap_or(0);
        if self.hits {
            let times = ergodic::hitting_times(&ifs, &target, n, seed)?;
            let mut text = String::from("k\n");
            for k in times {
                text.push_str(&format!("{k}\n"));
            }
            return Ok(Outcome { text, code: EXIT_OK });
        }
        let r = ergodic::birkhoff_frequency(&ifs, &target, n, seed)?;
        let times = ergodic::hitting_times(&ifs, &target, n, seed)?;
        let result = json!({
            "frequency": r,
            "seed": seed,
            "within_3_stderr": r.within(3.0),
            "mean_gap": ergodic::mean_gap(&times),
        });
        self.report(&result, EXIT_OK)
    }

    fn perturb(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let kern = self.kernel(&ifs)?;
        let dir = self.cfg.direction.as_ref().ok_or_else(|| Error::Config("missing \"direction\"".into()))?;
        let rho = self.cfg.rho.ok_or_else(|| Error::Config("missing \"rho\"".into()))?;
        let eps = self.cfg.eps.ok_or_else(|| Error::Config("missing \"eps\"".into()))?;
        let bumped = kern.perturb(&Point::new(dir), rho, eps)?;
        let change = bumped.sup_norm_change(&kern, self.cfg.sphere_points.unwrap_or(10_000))?;
        let mut result = json!({ "kernel": bumped.spec(), "sup_norm_change": change });
        let mut code = EXIT_OK;
        if let Some(w) = &self.cfg.word {
            let w = w.finite()?;
            let depth = self.cfg.depth(8);
            let before = sio::criterion(&ifs, &kern, &w, depth)?;
            let after = sio::criterion(&ifs, &bumped, &w, depth)?;
            code = verdict_code(after.verdict);
            result["criterion_before"] = serde_json::to_value(before).map_err(|e| Error::Input(e.to_string()))?;
            result["criterion_after"] = serde_json::to_value(after).map_err(|e| Error::Input(e.to_string()))?;
        }
        self.report(&result, code)
    }

    fn divergence(&self) -> Result<Outcome> {
        let ifs = self.ifs()?;
        let kern = self.kernel(&ifs)?;
        let w = self.cfg.word()?.finite()?;
        match sio::divergence_certificate(&ifs, &kern, &w, self.cfg.k.unwrap_or(6), self.cfg.depth(10)) {
            Ok(cert) => {
                let code = if cert.pass { EXIT_OK } else { EXIT_INCONCLUSIVE };
                let result = json!({ "status": cert.status(), "certificate": cert });
                self.report(&result, code)
            }
            Err(Error::Refused(reason)) => {
                self.report(&json!({ "status": "REFUSED", "reason": reason }), EXIT_INCONCLUSIVE)
            }
            Err(e) => Err(e),
        }
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::NonzeroCertified => EXIT_OK,
        Verdict::ZeroWithinBracket | Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

type PointFn<'a> = Box<dyn Fn(&Point) -> f64 + Sync + Send + 'a>;

fn pointwise<'a>(ifs: &Ifs, spec: &IntegrandSpec, kernel: Option<&'a HomogeneousKernel>) -> Result<PointFn<'a>> {
    match spec {
        IntegrandSpec::One => Ok(Box::new(|_| 1.0)),
        IntegrandSpec::Monomial { c, powers } => {
            if !ifs.geometry().is_euclidean() {
                return Err(Error::Config("monomial integrands need Euclidean geometry".into()));
            }
            if powers.len() != ifs.geometry().dim() {
                return Err(Error::Config(format!("monomial needs {} powers", ifs.geometry().dim())));
            }
            let (c, powers) = (*c, powers.clone());
            Ok(Box::new(move |p: &Point| {
                c * p.coords().iter().zip(&powers).map(|(x, &k)| x.powi(k as i32)).product::<f64>()
            }))
        }
        IntegrandSpec::Kernel { point } => {
            let kern = kernel.ok_or_else(|| Error::Config("missing \"kernel\"".into()))?;
            let pole = Point::new(point);
            ifs.geometry().check(&pole)?;
            Ok(Box::new(move |y: &Point| kern.eval_unchecked(&pole, y)))
        }
    }
}

/// `|∇(c Π x_i^{p_i})| ≤ |c| · |p| · B^{deg−1}` on the attractor's bounding
/// ball, `B` the largest coordinate modulus there.
fn monomial_lipschitz(ifs: &Ifs, spec: &IntegrandSpec) -> Result<f64> {
    let IntegrandSpec::Monomial { c, powers } = spec else {
        unreachable!("only called for monomials")
    };
    let (center, radius) = ifs.attractor_bound();
    let b = center.coords().iter().map(|x| x.abs() + radius).fold(0.0, f64::max);
    let degree: u32 = powers.iter().sum();
    if degree == 0 {
        return Ok(0.0);
    }
    let norm = powers.iter().map(|&p| (p * p) as f64).sum::<f64>().sqrt();
    Ok(c.abs() * norm * b.powi(degree as i32 - 1))
}
