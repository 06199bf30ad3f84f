//! The computations behind each subcommand, returning CSV tables.

use gmc_core::heisenberg::{fourier_wigner, Schrodinger, SchrodingerConfig};
use gmc_core::mollifier::{gmc_approx, mollify, BumpProfile};
use gmc_core::torus::{self, Torus, TorusSequence};
use gmc_core::GrowthClass;

use crate::config::Group;
use crate::{spec, Cell, CliError, Table};

/// Default profile radius on the torus; support `ρ/n` stays inside the
/// injectivity radius `1/2` for every `n ≥ 1`.
pub const TORUS_PROFILE_RADIUS: f64 = 0.2;
pub const HEISENBERG_PROFILE_RADIUS: f64 = 0.5;

/// Rows `(m, partial_sum_re, partial_sum_im, residual_vs_limit)` for
/// `m = 0..=m_max`, where the limit is `⟨π(f)a, 1⟩`.
pub fn torus_series(coeffs: &str, f: &str, m_max: u64) -> Result<Table, CliError> {
    let a = spec::torus_sequence(coeffs)?;
    let f = spec::torus_test_function(f)?;
    let limit = torus::gmc_eval(&a, &TorusSequence::ones(), &f);
    let mut t = Table::new(&["m", "partial_sum_re", "partial_sum_im", "residual_vs_limit"]);
    for m in 0..=m_max {
        let s = torus::series_partial_sum(&a, m, &f);
        t.push(vec![Cell::Int(m as i64), s.re.into(), s.im.into(), (s - limit).norm().into()]);
    }
    Ok(t)
}

/// Rows `(p, q, re, im, abs)` of `⟨π(p,q,0)φ, ψ⟩`. A distribution `ψ` needs
/// `mollify`, which then replaces every polynomial-growth side by `π(J_n)`.
pub fn wigner(phi: &str, psi: &str, grid: &str, mollifier: Option<&str>, cfg: &SchrodingerConfig) -> Result<Table, CliError> {
    let mut phi = spec::hermite_vector(phi)?;
    let mut psi = spec::hermite_vector(psi)?;
    let (ps, qs) = spec::grid(grid)?;
    match mollifier {
        Some(m) => {
            let (n, profile) = spec::mollifier(m, HEISENBERG_PROFILE_RADIUS)?;
            let model = Schrodinger::new(*cfg);
            for v in [&mut phi, &mut psi] {
                if v.class() == GrowthClass::PolynomialGrowth {
                    *v = mollify(&model, v, n, profile)?;
                }
            }
        }
        None if psi.class() != GrowthClass::RapidDecay => {
            return Err(CliError::Precondition(format!(
                "ψ is {}; the pointwise coefficient needs a rapid-decay ψ, pass --mollify <n>",
                psi.class()
            )))
        }
        None => {}
    }
    let mut t = Table::new(&["p", "q", "re", "im", "abs"]);
    for &p in &ps {
        for &q in &qs {
            let v = fourier_wigner(&phi, &psi, p, q, cfg)?;
            t.push(vec![p.into(), q.into(), v.re.into(), v.im.into(), v.norm().into()]);
        }
    }
    Ok(t)
}

/// Rows `(n, value_re, value_im, residual)` of `⟨π(f)π(J_n)η, ζ⟩`.
pub fn mollify_table(
    group: Group,
    eta: &str,
    zeta: &str,
    f: &str,
    ns: &[u32],
    radius: Option<f64>,
    cfg: &SchrodingerConfig,
) -> Result<Table, CliError> {
    let rows = match group {
        Group::Torus => {
            let profile = BumpProfile::new(radius.unwrap_or(TORUS_PROFILE_RADIUS))?;
            let (eta, zeta) = (spec::torus_sequence(eta)?, spec::torus_sequence(zeta)?);
            gmc_approx(&Torus, &eta, &zeta, &spec::torus_test_function(f)?, ns, profile)?
        }
        Group::Heisenberg => {
            let profile = BumpProfile::new(radius.unwrap_or(HEISENBERG_PROFILE_RADIUS))?;
            let (eta, zeta) = (spec::hermite_vector(eta)?, spec::hermite_vector(zeta)?);
            let f = spec::heisenberg_test_function(f, cfg)?;
            gmc_approx(&Schrodinger::new(*cfg), &eta, &zeta, &f, ns, profile)?
        }
    };
    let mut t = Table::new(&["n", "value_re", "value_im", "residual"]);
    for r in rows {
        t.push(vec![r.n.into(), r.value.re.into(), r.value.im.into(), r.residual.into()]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn reals(t: &Table, col: &str) -> Vec<f64> {
        t.column(col)
            .unwrap()
            .into_iter()
            .map(|c| match c {
                Cell::Real(x) => x,
                Cell::Int(n) => n as f64,
            })
            .collect()
    }

    #[test]
    fn comb_series_hits_limit_at_bandwidth() {
        let t = torus_series("comb", "band:4:lorentz", 8).unwrap();
        let r = reals(&t, "residual_vs_limit");
        assert!(r[3] > 0.0);
        assert!(r[4..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn unit_zero_gives_the_mean() {
        let t = torus_series("unit:0", "band:2:0.1,0.2,0.7,0.2,0.1", 3).unwrap();
        assert!(reals(&t, "partial_sum_re").iter().all(|&x| x == 0.7));
    }

    #[test]
    fn poly_residual_nonincreasing_past_band() {
        let r = reals(&torus_series("poly:1", "band:5:fejer", 12).unwrap(), "residual_vs_limit");
        assert!(r[5..].windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn ground_state_wigner_table() {
        let cfg = SchrodingerConfig::default();
        let t = wigner("e:0", "e:0", "-1:1:5", None, &cfg).unwrap();
        let (p, q, a) = (reals(&t, "p"), reals(&t, "q"), reals(&t, "abs"));
        for i in 0..t.rows.len() {
            assert!((a[i] - (-PI * (p[i] * p[i] + q[i] * q[i]) / 2.0).exp()).abs() < 1e-6);
        }
        assert!((a[12] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_psi_needs_mollifier() {
        let cfg = SchrodingerConfig::default();
        assert!(matches!(wigner("e:0", "delta", "0:0:1", None, &cfg), Err(CliError::Precondition(_))));
        let t8 = wigner("delta", "e:0", "-0.5:0.5:3", Some("8"), &cfg).unwrap();
        let t16 = wigner("delta", "e:0", "-0.5:0.5:3", Some("16"), &cfg).unwrap();
        let direct = wigner("delta", "e:0", "-0.5:0.5:3", None, &cfg).unwrap();
        let (a8, a16, a) = (reals(&t8, "abs"), reals(&t16, "abs"), reals(&direct, "abs"));
        let e = |x: &[f64]| x.iter().zip(&a).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        assert!(a8.iter().all(|x| x.is_finite()));
        assert!(e(&a16) < e(&a8));
    }

    #[test]
    fn torus_mollify_table() {
        let cfg = SchrodingerConfig::default();
        let r = reals(&mollify_table(Group::Torus, "comb", "ones", "band:4:lorentz", &[2, 4, 8, 16], None, &cfg).unwrap(), "residual");
        assert!(r.windows(2).all(|w| w[1] < w[0]));
        let z = reals(&mollify_table(Group::Torus, "comb", "formula:constant:0,0", "band:4:lorentz", &[2, 4], None, &cfg).unwrap(), "residual");
        assert!(z.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn injectivity_violation_names_minimum_n() {
        let cfg = SchrodingerConfig::default();
        let e = mollify_table(Group::Torus, "comb", "ones", "band:2:dirichlet", &[1, 2], Some(1.2), &cfg).unwrap_err();
        assert!(matches!(e, CliError::Core(gmc_core::Error::InjectivityRadius { required_n: 3, .. })), "{e}");
    }
}
