//! Property suites behind `gmc verify`. Each check reports its worst residual
//! against a bound; a suite passes when every check does.

use std::fmt;
use std::sync::Arc;

use gmc_core::gmc::{covariance_residuals, orthogonality_test, semi_invariance_residual, GmcFunctional, GmcModel, ToleranceTable};
use gmc_core::heisenberg::{
    self as heis, dirac_delta, factorize_oscillator, HTestFunction, HeisenbergElement, HermiteVector, Schrodinger, SchrodingerConfig,
};
use gmc_core::hermite::hermite_functions;
use gmc_core::mollifier::{gmc_approx, make_jn, mollify, BumpProfile};
use gmc_core::pairing::pair;
use gmc_core::torus::{self, cis_turns, factorize_torus, project_subrep, Torus, TorusSequence, TorusTestFunction};
use gmc_core::{Complex64, GroupModel, GrowthClass, GrowthEnvelope, LieAlgebra, UeaElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Uea,
    TorusCovariance,
    HeisenbergCovariance,
    Mollifier,
    Smoothing,
    Structure,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Uea,
        Suite::TorusCovariance,
        Suite::HeisenbergCovariance,
        Suite::Mollifier,
        Suite::Smoothing,
        Suite::Structure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Uea => "uea",
            Suite::TorusCovariance => "torus-covariance",
            Suite::HeisenbergCovariance => "heisenberg-covariance",
            Suite::Mollifier => "mollifier",
            Suite::Smoothing => "smoothing",
            Suite::Structure => "structure",
        }
    }

    pub fn parse(name: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| CliError::Parse {
                token: name.to_string(),
                message: "unknown suite".into(),
            })
    }
}

/// What a check's residual is compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// `residual < tol`; replaced by a tolerance override.
    Below(f64),
    /// `residual == 0`.
    Exact,
    /// A structural property (monotonicity, certificate); the residual is informative.
    Holds(bool),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub bound: Bound,
}

impl Check {
    fn below(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            bound: Bound::Below(tol),
        }
    }

    fn exact(name: impl Into<String>, residual: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            bound: Bound::Exact,
        }
    }

    fn holds(name: impl Into<String>, residual: f64, ok: bool) -> Self {
        Self {
            name: name.into(),
            residual,
            bound: Bound::Holds(ok),
        }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::Below(tol) => self.residual < tol,
            Bound::Exact => self.residual == 0.0,
            Bound::Holds(ok) => ok,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let bound = match self.bound {
            Bound::Below(tol) => format!("< {tol:.1e}"),
            Bound::Exact => "exact".into(),
            Bound::Holds(_) => "holds".into(),
        };
        write!(f, "{verdict} {} max_residual={:.3e} ({bound})", self.name, self.residual)
    }
}

/// Shared inputs of every suite.
#[derive(Debug, Clone, Copy, PartialEq)]
#[derive(Default)]
pub struct Context {
    pub seed: u64,
    pub tolerances: ToleranceTable,
    pub schrodinger: SchrodingerConfig,
    /// Replaces every numeric bound when set.
    pub tol_override: Option<f64>,
}


impl Context {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn model(&self) -> Schrodinger {
        Schrodinger::new(self.schrodinger)
    }

    fn apply(&self, mut checks: Vec<Check>) -> Vec<Check> {
        if let Some(t) = self.tol_override {
            for c in &mut checks {
                if let Bound::Below(_) = c.bound {
                    c.bound = Bound::Below(t);
                }
            }
        }
        checks
    }
}

pub fn run(suite: Suite, ctx: &Context) -> Result<Vec<Check>, CliError> {
    let checks = match suite {
        Suite::Uea => uea(ctx)?,
        Suite::TorusCovariance => torus_covariance(ctx)?,
        Suite::HeisenbergCovariance => [heisenberg_health(ctx)?, heisenberg_covariance(ctx)?].concat(),
        Suite::Mollifier => mollifier(ctx)?,
        Suite::Smoothing => [torus_series(ctx)?, heisenberg_smoothing(ctx)?].concat(),
        Suite::Structure => [factorization(ctx)?, structure(ctx)?].concat(),
    };
    Ok(ctx.apply(checks))
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn worst(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

/// Largest ratio `r_{k+1}/r_k`, below 1 exactly when the sequence decreases.
fn worst_ratio(xs: &[f64]) -> f64 {
    worst(xs.windows(2).map(|w| w[1] / w[0]))
}

fn max_coeff_diff(a: &UeaElement, b: &UeaElement) -> Result<f64, CliError> {
    Ok(worst(a.sub(b)?.terms().map(|(_, c)| c.norm())))
}

/// Gaussian-integer coefficients keep normal ordering exact in floating point.
fn random_element(rng: &mut ChaCha8Rng, alg: &Arc<LieAlgebra>) -> Result<UeaElement, CliError> {
    let mut e = UeaElement::zero(alg);
    for _ in 0..rng.gen_range(1..4) {
        let word: Vec<usize> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..alg.dim())).collect();
        let coeff = Complex64::new(rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64);
        e = e.add(&UeaElement::from_word(alg, &word, coeff)?)?;
    }
    Ok(e)
}

pub fn uea(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut rng = ctx.rng(1);
    let heis_alg = Arc::new(LieAlgebra::heisenberg());
    let (mut assoc, mut invol, mut anti): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..64 {
        let [a, b, d] = [(); 3].map(|_| random_element(&mut rng, &heis_alg));
        let (a, b, d) = (a?, b?, d?);
        assoc = assoc.max(max_coeff_diff(&a.mul(&b)?.mul(&d)?, &a.mul(&b.mul(&d)?)?)?);
        invol = invol.max(max_coeff_diff(&a.transpose().transpose(), &a)?);
        anti = anti.max(max_coeff_diff(&a.mul(&b)?.transpose(), &b.transpose().mul(&a.transpose())?)?);
    }
    let [p, q, z] = [0, 1, 2].map(|i| UeaElement::generator(&heis_alg, i).expect("three generators"));
    let comm = |x: &UeaElement, y: &UeaElement| -> Result<UeaElement, CliError> { Ok(x.mul(y)?.sub(&y.mul(x)?)?) };
    let zero = UeaElement::zero(&heis_alg);
    let heis_rel = worst([
        max_coeff_diff(&comm(&p, &q)?, &z)?,
        max_coeff_diff(&comm(&p, &z)?, &zero)?,
        max_coeff_diff(&comm(&q, &z)?, &zero)?,
    ]);
    let torus_alg = Arc::new(LieAlgebra::torus());
    let x = UeaElement::generator(&torus_alg, 0)?;
    let x3 = x.pow(3);
    let torus_rel = max_coeff_diff(&x.mul(&x3)?, &x3.mul(&x)?)?;

    let phi = HermiteVector::finite((0..16).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())?;
    let pq = heis::act_algebra(&p, &heis::act_algebra(&q, &phi)?)?;
    let qp = heis::act_algebra(&q, &heis::act_algebra(&p, &phi)?)?;
    let zphi = heis::act_algebra(&z, &phi)?;
    let weyl = worst((0..20).map(|k| (pq.coeff(k) - qp.coeff(k) - zphi.coeff(k)).norm()));

    Ok(vec![
        Check::exact("normal ordering is associative (confluent)", assoc),
        Check::exact("transpose is an involution", invol),
        Check::exact("transpose reverses products", anti),
        Check::exact("heisenberg relations [P,Q]=Z, Z central", heis_rel),
        Check::exact("torus algebra is commutative", torus_rel),
        Check::below("[π(P),π(Q)] = π(Z) on a random finite vector", weyl, 1e-12),
    ])
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_torus_sequence(rng: &mut ChaCha8Rng) -> Result<TorusSequence, CliError> {
    Ok(match rng.gen_range(0..5) {
        0 => TorusSequence::comb(),
        1 => TorusSequence::poly(rng.gen_range(0.0..3.0))?,
        2 => TorusSequence::geometric(rng.gen_range(0.1..0.9))?,
        3 => TorusSequence::unit(rng.gen_range(-8..=8)),
        _ => {
            let len = rng.gen_range(1..10);
            TorusSequence::finite(rng.gen_range(-10..5), (0..len).map(|_| random_complex(rng)).collect())?
        }
    })
}

fn random_band_function(rng: &mut ChaCha8Rng, max_band: usize) -> TorusTestFunction {
    let band = rng.gen_range(0..=max_band);
    TorusTestFunction::new(band, (0..2 * band + 1).map(|_| random_complex(rng)).collect()).expect("length 2B+1")
}

fn random_torus_element(rng: &mut ChaCha8Rng, alg: &Arc<LieAlgebra>) -> Result<UeaElement, CliError> {
    let deg = rng.gen_range(0..=3u32);
    let mut d = UeaElement::zero(alg);
    for m in 0..=deg {
        d = d.add(&UeaElement::monomial(alg, vec![m], random_complex(rng))?)?;
    }
    Ok(d)
}

pub fn torus_covariance(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut rng = ctx.rng(2);
    let alg = Arc::new(LieAlgebra::torus());
    let mut res = [0.0f64; 4];
    let mut functor: f64 = 0.0;
    for _ in 0..200 {
        let phi = random_torus_sequence(&mut rng)?;
        let psi = random_torus_sequence(&mut rng)?;
        let f = random_band_function(&mut rng, 16);
        let h: f64 = rng.gen_range(0.0..1.0);
        let d = random_torus_element(&mut rng, &alg)?;
        let r = covariance_residuals(&Torus, &phi, &psi, &f, &h, &d)?;
        for (acc, x) in res.iter_mut().zip(r) {
            *acc = acc.max(x);
        }
        let k: f64 = rng.gen_range(0.0..1.0);
        let base = GmcFunctional::new(Torus, phi, psi);
        let a = base.right_translate(&k).right_translate(&h).eval(&f)?;
        let b = base.right_translate(&Torus.mul(&h, &k)).eval(&f)?;
        functor = functor.max((a - b).norm() / (1.0 + a.norm()));
    }
    let tol = ctx.tolerances.torus;
    Ok(vec![
        Check::below("F_{π(h)φ,ψ} = R(h)F_{φ,ψ}", res[0], tol),
        Check::below("F_{φ,π*(h)ψ} = L(h)F_{φ,ψ}", res[1], tol),
        Check::below("F_{π(D)φ,ψ} = R(D)F_{φ,ψ}", res[2], tol),
        Check::below("F_{φ,π*(D)ψ} = L(D)F_{φ,ψ}", res[3], tol),
        Check::below("R(h)R(k)F = R(hk)F", functor, tol),
    ])
}

/// `F(f) = Σ a_n f̂(-n)`, stabilization at `m = B`, and the comb identity.
pub fn torus_series(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut rng = ctx.rng(3);
    let ones = TorusSequence::ones();
    let (mut series, mut stable, mut comb): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let a = random_torus_sequence(&mut rng)?;
        let f = random_band_function(&mut rng, 16);
        let b = f.bandwidth() as i64;
        let direct: Complex64 = (-b..=b).map(|n| a.coeff(n) * f.hat(-n)).sum();
        let via_smoothing = torus::gmc_eval(&a, &ones, &f);
        series = series.max((via_smoothing - direct).norm() / (1.0 + direct.norm()));
        for m in b as u64..b as u64 + 4 {
            stable = stable.max((torus::series_partial_sum(&a, m, &f) - via_smoothing).norm());
        }
        comb = comb.max((torus::gmc_eval(&TorusSequence::comb(), &ones, &f) - f.value(0.0)).norm());
    }
    Ok(vec![
        Check::below("gmc_eval(a, 1, f) = Σ a_n f̂(-n)", series, ctx.tolerances.torus),
        Check::exact("partial sums equal the limit for m ≥ B", stable),
        Check::below("gmc_eval(comb, 1, f) = f(0)", comb, ctx.tolerances.torus),
    ])
}

pub fn factorization(_ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for r in [0.0, 1.0, 2.0, 3.0] {
        let a = TorusSequence::poly(r)?;
        let (d, u) = factorize_torus(&a)?;
        let back = torus::act_algebra(&d, &u)?;
        let termwise = worst((-2000..=2000).map(|n| {
            let want = a.coeff(n);
            (back.coeff(n) - want).norm() / want.norm().max(1.0)
        }));
        let (cauchy_ok, step) = u.vector().square_summable_cauchy(&[250, 500, 1000, 2000], 1e-8);
        checks.push(Check::below(format!("torus r={r}: π(D)u = a termwise (relative)"), termwise, 1e-12));
        checks.push(Check::holds(
            format!("torus r={r}: ‖u‖₂ partial sums Cauchy within 1e-8"),
            step,
            cauchy_ok && u.class() == GrowthClass::SquareSummable,
        ));
    }
    for (label, phi) in [("δ", dirac_delta()), ("poly-growth:2", HermiteVector::poly_growth(2.0)?)] {
        let (d, u) = factorize_oscillator(&phi)?;
        let back = heis::act_algebra(&d, &u)?;
        let termwise = worst((0..400).map(|k| {
            let want = phi.coeff(k);
            (back.coeff(k) - want).norm() / want.norm().max(1.0)
        }));
        checks.push(Check::below(format!("heisenberg {label}: π(D)u = φ termwise (relative)"), termwise, 1e-12));
    }
    Ok(checks)
}

/// `⟨π(p,q,0)h_0, h_0⟩` by the trapezoid rule in `x`, independent of the
/// Gauss–Hermite path.
pub fn wigner_oracle(p: f64, q: f64) -> Complex64 {
    let (a, b, m) = (-10.0, 10.0, 4000);
    let h = (b - a) / m as f64;
    let mut acc = c(0.0);
    for i in 0..=m {
        let x = a + i as f64 * h;
        let w = if i == 0 || i == m { 0.5 * h } else { h };
        acc += cis_turns(q * x + p * q / 2.0) * (hermite_functions(x + p, 1)[0] * hermite_functions(x, 1)[0] * w);
    }
    acc
}

fn random_heisenberg(rng: &mut ChaCha8Rng, scale: f64) -> HeisenbergElement {
    HeisenbergElement::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

fn hermite_l2_diff(a: &HermiteVector, b: &HermiteVector, n: usize) -> f64 {
    (0..n).map(|k| (a.coeff(k) - b.coeff(k)).norm_sqr()).sum::<f64>().sqrt()
}

/// Homomorphism, unitarity and the Fourier–Wigner oracle.
pub fn heisenberg_health(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut rng = ctx.rng(4);
    let cfg = &ctx.schrodinger;
    let n = cfg.truncation;
    let (mut hom, mut unit): (f64, f64) = (0.0, 0.0);
    for _ in 0..6 {
        let (g, h) = (random_heisenberg(&mut rng, 1.0), random_heisenberg(&mut rng, 1.0));
        let k = rng.gen_range(0..4);
        let v = HermiteVector::basis(k);
        let direct = heis::act_group(&heis::group_mul(&g, &h), &v, n, cfg)?;
        let nested = heis::act_group(&g, &heis::act_group(&h, &v, n, cfg)?, n, cfg)?;
        hom = hom.max(hermite_l2_diff(&direct, &nested, n));
        unit = unit.max(heis::unitarity_defect(&g, &v, n, cfg)?);
    }
    let e0 = HermiteVector::basis(0);
    let mut fw: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let (p, q) = (-1.0 + 0.5 * i as f64, -1.0 + 0.5 * j as f64);
            let v = heis::fourier_wigner(&e0, &e0, p, q, cfg)?;
            fw = fw.max((v.norm() - wigner_oracle(p, q).norm()).abs());
        }
    }
    Ok(vec![
        Check::below(format!("π(gh) = π(g)π(h) on h_k (N={n})"), hom, 1e-6),
        Check::below(format!("truncated unitarity defect (N={n})"), unit, 1e-6),
        Check::below("|fourier_wigner(e_0,e_0)| vs x-space quadrature on 5×5 grid", fw, 1e-6),
    ])
}

/// The covariance test function: a cube bump whose derivatives go through
/// finite differences.
pub fn heisenberg_probe(cfg: &SchrodingerConfig) -> Result<HTestFunction, CliError> {
    Ok(cfg.bump3(HeisenbergElement::new(0.1, -0.05, 0.02), 0.5, 1.0)?.without_gradient())
}

fn heisenberg_generators() -> [UeaElement; 3] {
    let alg = Arc::new(LieAlgebra::heisenberg());
    [0, 1, 2].map(|i| UeaElement::generator(&alg, i).expect("three generators"))
}

pub fn heisenberg_covariance(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut rng = ctx.rng(5);
    let model = ctx.model();
    let f = heisenberg_probe(&ctx.schrodinger)?;
    let gens = heisenberg_generators();
    let mut res = [0.0f64; 4];
    for _ in 0..4 {
        let phi = match rng.gen_range(0..3) {
            0 => HermiteVector::basis(0),
            1 => HermiteVector::gauss(),
            _ => HermiteVector::basis(2),
        };
        let psi = HermiteVector::basis(rng.gen_range(0..3));
        let h = random_heisenberg(&mut rng, 0.5);
        let i = rng.gen_range(0..3);
        let d = if rng.gen_bool(0.5) {
            gens[i].clone()
        } else {
            gens[i].mul(&gens[rng.gen_range(0..3)])?
        };
        let r = covariance_residuals(&model, &phi, &psi, &f, &h, &d)?;
        for (acc, x) in res.iter_mut().zip(r) {
            *acc = acc.max(x);
        }
    }
    let base = GmcFunctional::new(model, HermiteVector::basis(0), HermiteVector::basis(1));
    let (h, k) = (random_heisenberg(&mut rng, 0.5), random_heisenberg(&mut rng, 0.5));
    let a = base.right_translate(&k).right_translate(&h).eval(&f)?;
    let b = base.right_translate(&heis::group_mul(&h, &k)).eval(&f)?;
    let tol = ctx.tolerances.heisenberg;
    Ok(vec![
        Check::below("F_{π(h)φ,ψ} = R(h)F_{φ,ψ}", res[0], tol),
        Check::below("F_{φ,π*(h)ψ} = L(h)F_{φ,ψ}", res[1], tol),
        Check::below("F_{π(D)φ,ψ} = R(D)F_{φ,ψ}", res[2], tol),
        Check::below("F_{φ,π*(D)ψ} = L(D)F_{φ,ψ}", res[3], tol),
        Check::below("R(h)R(k)F = R(hk)F", (a - b).norm() / (1.0 + a.norm()), tol),
    ])
}

/// The wide product bump used for the decay certificate.
pub fn certificate_probe(cfg: &SchrodingerConfig) -> Result<HTestFunction, CliError> {
    Ok(HTestFunction::bump3_axes(
        HeisenbergElement::new(0.1, -0.05, 0.02),
        [1.0, 1.0, 0.25],
        1.0,
        cfg.legendre_nodes,
        cfg.fd_step,
    )?)
}

pub fn heisenberg_smoothing(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let cfg = &ctx.schrodinger;
    let n = cfg.truncation;
    let tol = ctx.tolerances.heisenberg;
    let mut checks = Vec::new();

    // ⟨π(p,q,t)δ, h_k⟩ = e^{2πi(t - pq/2)} h_k(-p)
    let f = cfg.bump3(HeisenbergElement::new(0.1, -0.2, 0.05), 0.5, 1.0)?;
    let smoothed = heis::smooth_by(&f, &dirac_delta(), n, cfg)?;
    let oracle = worst((0..n).map(|k| {
        let o = f.integrate_against(|g| cis_turns(g.t - g.p * g.q / 2.0) * hermite_functions(-g.p, k + 1)[k]);
        (o - smoothed.coeff(k)).norm()
    }));
    checks.push(Check::below("π(f)δ vs direct δ-oracle", oracle, tol));

    let f = heisenberg_probe(cfg)?;
    for (label, phi) in [("e_0", HermiteVector::basis(0)), ("δ", dirac_delta())] {
        let s = heis::smooth_by(&f, &phi, n, cfg)?;
        let (mut left, mut right): (f64, f64) = (0.0, 0.0);
        for d in heisenberg_generators() {
            let a = heis::act_algebra(&d, &s)?;
            let b = heis::smooth_by(&f.left_derive(&d)?, &phi, n, cfg)?;
            left = left.max(hermite_l2_diff(&a, &b, n - 1));
            let a = heis::smooth_by(&f, &heis::act_algebra(&d, &phi)?, n, cfg)?;
            let b = heis::smooth_by(&f.right_derive(&d.transpose())?, &phi, n, cfg)?;
            right = right.max(hermite_l2_diff(&a, &b, n - 1));
        }
        checks.push(Check::below(format!("π(D)π(f){label} = π(L(D)f){label}, D ∈ {{P,Q,Z}}"), left, tol));
        checks.push(Check::below(format!("π(f)π(D){label} = π(R(A(D))f){label}, D ∈ {{P,Q,Z}}"), right, tol));
    }

    let wide = certificate_probe(cfg)?;
    for (label, phi) in [("e_0", HermiteVector::basis(0)), ("δ", dirac_delta())] {
        let cert = heis::rapid_decay_certificate(&wide, &phi, 2.0, 80, 160, cfg)?;
        let weakest = cert.exponents.iter().cloned().fold(f64::INFINITY, f64::min);
        checks.push(Check::holds(
            format!("π(f){label} decay exponent > {} at N = {:?}", cert.required, cert.truncations),
            weakest,
            cert.passed,
        ));
    }
    Ok(checks)
}

/// The torus pairing residuals `|⟨π(J_n)η − η, v⟩|` for `η = comb`, `v = e^{-5m²}`.
pub fn torus_mollifier_residuals(ns: &[u32]) -> Result<Vec<f64>, CliError> {
    let profile = BumpProfile::new(0.2)?;
    let v = TorusSequence::gaussian(5.0)?;
    let target = pair(TorusSequence::comb().vector(), v.vector())?;
    ns.iter()
        .map(|&n| {
            let m = mollify(&Torus, &TorusSequence::comb(), n, profile)?;
            Ok((pair(m.vector(), v.vector())? - target).norm())
        })
        .collect()
}

pub fn mollifier(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let mut mass: f64 = 0.0;
    for radius in [0.2, 0.5] {
        let p = BumpProfile::new(radius)?;
        for n in [1, 2, 4, 8, 16, 32, 64] {
            for dim in [1, 3] {
                mass = mass.max((make_jn(p, n, dim)?.mass().0 - 1.0).abs());
            }
        }
    }
    checks.push(Check::below("∫J_n = 1", mass, 1e-10));

    let ns = [2, 4, 8, 16, 32, 64];
    let res = torus_mollifier_residuals(&ns)?;
    checks.push(Check::holds("torus |⟨π(J_n)η − η, v⟩| decreasing in n", worst_ratio(&res), decreasing(&res)));
    checks.push(Check::below("torus |⟨π(J_64)η − η, v⟩|", res[res.len() - 1], 1e-6));

    let ns = [2, 4, 8, 16];
    let f = TorusTestFunction::from_fn(4, |n| c(1.0 / (1.0 + (n * n) as f64)));
    let rows = gmc_approx(&Torus, &TorusSequence::comb(), &TorusSequence::ones(), &f, &ns, BumpProfile::new(0.2)?)?;
    let r: Vec<f64> = rows.iter().map(|r| r.residual).collect();
    checks.push(Check::holds("torus GMC approximation residual decreasing", worst_ratio(&r), decreasing(&r)));

    let model = ctx.model();
    let f = ctx.schrodinger.bump3(HeisenbergElement::new(0.1, -0.05, 0.02), 0.5, 1.0)?;
    let rows = gmc_approx(&model, &dirac_delta(), &HermiteVector::basis(0), &f, &ns, BumpProfile::new(0.5)?)?;
    let r: Vec<f64> = rows.iter().map(|r| r.residual).collect();
    checks.push(Check::holds("heisenberg GMC approximation residual decreasing", worst_ratio(&r), decreasing(&r)));
    Ok(checks)
}

pub fn structure(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut rng = ctx.rng(6);
    let mut checks = Vec::new();

    // π(h)e_k = e^{2πikh}e_k
    let mut semi: f64 = 0.0;
    for _ in 0..20 {
        let k = rng.gen_range(-6..=6);
        let samples: Vec<(f64, Complex64)> = (0..4)
            .map(|_| {
                let h: f64 = rng.gen_range(0.0..1.0);
                (h, cis_turns(k as f64 * h))
            })
            .collect();
        let f = random_band_function(&mut rng, 12);
        semi = semi.max(semi_invariance_residual(&Torus, &TorusSequence::unit(k), &TorusSequence::comb(), &samples, &f)?);
    }
    checks.push(Check::below("torus e_k is semi-invariant with character e^{2πikh}", semi, ctx.tolerances.torus));

    let model = ctx.model();
    let samples: Vec<_> = [-0.5, -0.25, 0.25, 0.5].iter().map(|&q| (HeisenbergElement::new(0.0, q, 0.0), c(1.0))).collect();
    let f = ctx.schrodinger.bump3(HeisenbergElement::new(0.1, -0.05, 0.02), 0.5, 1.0)?;
    let r = semi_invariance_residual(&model, &dirac_delta(), &HermiteVector::basis(0), &samples, &f)?;
    checks.push(Check::below("heisenberg δ invariant under (0,q,0)", r, ctx.tolerances.heisenberg));

    let a = project_subrep(&TorusSequence::comb(), |n| n >= 0);
    let b = project_subrep(&TorusSequence::poly(2.0)?, |n| n < 0);
    let probes: Vec<_> = (0..20).map(|_| random_band_function(&mut rng, 16)).collect();
    let (_, orth) = orthogonality_test(&Torus, &a, &b, &probes, f64::MIN_POSITIVE)?;
    checks.push(Check::exact("disjoint-support torus pair is orthogonal", orth));

    let keep = |n: i64| n % 3 == 0;
    let x = UeaElement::generator(&Arc::new(LieAlgebra::torus()), 0)?;
    let d = x.mul(&x)?.add(&x)?;
    let mut proj: f64 = 0.0;
    for _ in 0..10 {
        let a = random_torus_sequence(&mut rng)?;
        let t: f64 = rng.gen_range(0.0..1.0);
        let f = random_band_function(&mut rng, 16);
        let pairs = [
            (project_subrep(&torus::act_group(t, &a), keep), torus::act_group(t, &project_subrep(&a, keep))),
            (project_subrep(&torus::act_algebra(&d, &a)?, keep), torus::act_algebra(&d, &project_subrep(&a, keep))?),
            (project_subrep(&torus::smooth_by(&f, &a), keep), torus::smooth_by(&f, &project_subrep(&a, keep))),
        ];
        for (l, r) in pairs {
            proj = proj.max(worst((-40..=40).map(|n| (l.coeff(n) - r.coeff(n)).norm())));
        }
    }
    checks.push(Check::exact("projection commutes with π(t), π(D) and π(f)", proj));

    let mut witness: f64 = 0.0;
    for r in [0.0, 1.0, 2.0, 3.0] {
        let phi = TorusSequence::poly(r)?;
        let (d, u) = factorize_torus(&phi)?;
        let psi = random_torus_sequence(&mut rng)?;
        let f = random_band_function(&mut rng, 16);
        let direct = torus::gmc_eval(&phi, &psi, &f);
        let via = GmcFunctional::new(Torus, u, psi).right_derive(&d).eval(&f)?;
        witness = witness.max((direct - via).norm() / (1.0 + direct.norm()));
    }
    checks.push(Check::below("torus F_{π(D)u,ψ} = R(D)F_{u,ψ} for factorized φ", witness, ctx.tolerances.torus));

    let (d, u) = factorize_oscillator(&dirac_delta())?;
    let f = heisenberg_probe(&ctx.schrodinger)?;
    let psi = HermiteVector::basis(0);
    let direct = model.gmc_eval(&dirac_delta(), &psi, &f)?;
    let via = GmcFunctional::new(model, u, psi).right_derive(&d).eval(&f)?;
    checks.push(Check::below(
        "heisenberg F_{δ,e_0} = R(D)F_{u,e_0} for δ = π(D)u",
        (direct - via).norm() / (1.0 + direct.norm()),
        ctx.tolerances.heisenberg,
    ));

    let f = TorusTestFunction::from_fn(6, |n| c(1.0 / (1.0 + (n * n) as f64)));
    let bs: Vec<_> = (1..=7).map(|j| TorusSequence::gaussian(10f64.powi(-2 * j))).collect::<Result<_, _>>()?;
    let env = GrowthEnvelope::new(1.0, 0.0)?;
    let res = torus::dominated_sequence_check(&TorusSequence::comb(), &bs, &TorusSequence::ones(), &f, env)?;
    checks.push(Check::holds("dominated b_m → 1: residuals decreasing", worst_ratio(&res), decreasing(&res)));
    checks.push(Check::below("dominated b_m → 1: final residual", res[res.len() - 1], 1e-10));

    let cfg = &ctx.schrodinger;
    let probes = [(0.0, 0.0), (0.3, 0.0), (0.0, 0.3), (0.3, 0.3), (-0.4, 0.2)]
        .iter()
        .map(|&(p, q)| cfg.bump3(HeisenbergElement::new(p, q, 0.0), 0.3, 1.0))
        .collect::<Result<Vec<_>, _>>()?;
    let zetas: Vec<_> = (0..=8).map(HermiteVector::basis).collect();
    let found = heis::injectivity_probe(&dirac_delta(), &zetas, &probes, 1e-6, cfg)?;
    let smallest = found.iter().map(|w| w.map_or(0.0, |(_, v)| v)).fold(f64::INFINITY, f64::min);
    checks.push(Check::holds(
        "witness probe found for every e_k, k ≤ 8 (smallest |F(f)| reported)",
        smallest,
        found.iter().all(|w| w.is_some()),
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(Suite::parse("everything").is_err());
    }

    #[test]
    fn override_replaces_numeric_bounds_only() {
        let ctx = Context {
            tol_override: Some(1e-30),
            ..Context::default()
        };
        let checks = ctx.apply(vec![Check::below("a", 1e-20, 1.0), Check::exact("b", 0.0), Check::holds("c", 3.0, true)]);
        assert!(!checks[0].passed());
        assert!(checks[1].passed() && checks[2].passed());
    }

    #[test]
    fn oracle_matches_closed_form() {
        for (p, q) in [(0.0, 0.0), (0.5, -1.0), (1.0, 1.0)] {
            let want = (-PI * (p * p + q * q) / 2.0).exp();
            assert!((wigner_oracle(p, q).norm() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn uea_and_torus_suites_pass() {
        let ctx = Context::default();
        for s in [Suite::Uea, Suite::TorusCovariance] {
            for check in run(s, &ctx).unwrap() {
                assert!(check.passed(), "{check}");
            }
        }
    }
}
