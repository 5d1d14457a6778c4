use mgt_fourier::asymptotics::{
    default_eta_grid, eta_limit_probe, kappa_limit_constants, kappa_limit_probe, omega_kappa_scan,
    subcritical_value,
};
use mgt_fourier::charpoly::{decay_rate_spectrum, spectral_abscissa, tau_star_spectrum};
use mgt_fourier::energy::{certified_rate, omega_b};
use mgt_fourier::optimize::parabolic_argmax;
use mgt_fourier::oscillator::{
    osc_admissible, osc_identity_residual, osc_optimize, osc_simulate, OscState,
};
use mgt_fourier::params::{
    stability_predicate, theoretical_threshold, theoretical_threshold_1d, Regime,
};
use mgt_fourier::simulate::{
    energy_identity_residual, measured_rate_series, simulate_mode, SimConfig, Superposition,
};
use mgt_fourier::{Error, ModeState};
use rayon::prelude::*;

use crate::args::{Command, RunConfig};
use crate::output::{num, Csv, Report};
use crate::CliError;

/// Rendered document, plus whether a check inside it failed.
pub struct Output {
    pub text: String,
    pub failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            failed: false,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    match cfg.command {
        Command::Classify => classify(cfg).map(Output::ok),
        Command::Threshold => threshold(cfg),
        Command::Decay => decay(cfg).map(Output::ok),
        Command::Simulate => simulate(cfg).map(Output::ok),
        Command::Certify => certify(cfg).map(Output::ok),
        Command::Asymptotics => asymptotics(cfg),
        Command::Oscillator => oscillator(cfg),
    }
}

fn pool(cfg: &RunConfig) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Io(e.to_string()))
}

/// Maps a grid point to a row in parallel, keeping grid order.
fn scan<T, F>(cfg: &RunConfig, xs: &[f64], f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    Ok(pool(cfg)?.install(|| xs.par_iter().map(|&x| f(x)).collect()))
}

fn classify(cfg: &RunConfig) -> Result<String, CliError> {
    let p = &cfg.params;
    let spectrum = cfg.spectrum();
    let mut r = Report::new(cfg);
    let regime = p.regime();
    r.entry("regime", regime);
    r.number("mu", p.mu());
    r.number("varkappa", p.stability_number());
    r.number("tau", theoretical_threshold(p));
    r.number("tau_1d", theoretical_threshold_1d(p));
    r.number("tau_star", tau_star_spectrum(p, &spectrum)?);
    r.entry("stability_predicate", stability_predicate(p));
    r.number("spectral_abscissa", spectral_abscissa(p, p.lambda1)?);
    let rate = decay_rate_spectrum(p, &spectrum)?;
    let verdict = if rate.unstable {
        "unstable"
    } else if rate.rate > 0.0 {
        "stable"
    } else {
        "marginal"
    };
    r.entry("verdict", verdict);
    r.number("decay_rate", rate.rate);
    if regime == Regime::Subcritical {
        r.entry(
            "note",
            "subcritical regime: the uncoupled equation is already exponentially stable; \
             the threshold analysis here targets mu >= 0",
        );
    }
    Ok(r.finish())
}

fn threshold(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = cfg.params;
    let spectrum = cfg.spectrum();
    let kappas = cfg.grid.points();
    let rows = scan(cfg, &kappas, |kappa| {
        let q = p.with_kappa(kappa);
        let tau = theoretical_threshold(&q);
        tau_star_spectrum(&q, &spectrum)
            .map(|ts| [kappa, tau, theoretical_threshold_1d(&q), ts, tau / ts])
    })?;
    let columns = [
        "kappa",
        "tau_theoretical",
        "tau_theoretical_1d",
        "tau_star",
        "ratio",
    ]
    .map(String::from);
    let mut csv = Csv::new(cfg, &columns)?;
    let mut failures = 0;
    for (i, (kappa, row)) in kappas.iter().zip(rows).enumerate() {
        match row {
            Ok(values) => csv.row(values.map(num))?,
            Err(e) => {
                failures += 1;
                csv.row([
                    num(*kappa),
                    num(f64::NAN),
                    num(f64::NAN),
                    num(f64::NAN),
                    num(f64::NAN),
                ])?;
                csv.comment(format!("row {i} failed: {e}"));
            }
        }
    }
    let failed = failures * 100 > kappas.len();
    if failed {
        csv.comment(format!("{failures} of {} rows failed", kappas.len()));
    }
    Ok(Output {
        text: csv.finish()?,
        failed,
    })
}

fn decay(cfg: &RunConfig) -> Result<String, CliError> {
    let p = cfg.params;
    let spectrum = cfg.spectrum();
    let etas = cfg.grid.points();
    let rows = scan(cfg, &etas, |eta| -> Result<(f64, f64, f64, bool), Error> {
        let q = p.with_eta(eta);
        let star = decay_rate_spectrum(&q, &spectrum)?.rate;
        let wb = match omega_b(&q) {
            Ok((w, _)) => w,
            Err(Error::CertificateUnavailable { .. }) => f64::NAN,
            Err(e) => return Err(e),
        };
        let cert = certified_rate(&q, &spectrum)?;
        let cert_rate = if cert.valid {
            cert.omega_cert
        } else {
            f64::NAN
        };
        Ok((star, wb, cert_rate, cert.valid))
    })?;
    let columns = [
        "eta",
        "omega_star",
        "omega_b",
        "omega_cert",
        "certificate_valid",
    ]
    .map(String::from);
    let mut csv = Csv::new(cfg, &columns)?;
    let (mut stars, mut wbs) = (Vec::new(), Vec::new());
    for (i, (&eta, row)) in etas.iter().zip(rows).enumerate() {
        match row {
            Ok((star, wb, cert_rate, valid)) => {
                stars.push(star);
                wbs.push(wb);
                csv.row([
                    num(eta),
                    num(star),
                    num(wb),
                    num(cert_rate),
                    valid.to_string(),
                ])?;
            }
            Err(e) => {
                stars.push(f64::NAN);
                wbs.push(f64::NAN);
                csv.row([
                    num(eta),
                    num(f64::NAN),
                    num(f64::NAN),
                    num(f64::NAN),
                    "false".into(),
                ])?;
                csv.comment(format!("row {i} failed: {e}"));
            }
        }
    }
    if let Some((eta, w)) = parabolic_argmax(&etas, &wbs) {
        csv.comment(format!("eta_b={} omega_b_max={}", num(eta), num(w)));
    }
    if let Some((eta, w)) = parabolic_argmax(&etas, &stars) {
        csv.comment(format!("eta_star={} omega_star_max={}", num(eta), num(w)));
    }
    csv.finish()
}

fn simulate(cfg: &RunConfig) -> Result<String, CliError> {
    let p = cfg.params;
    let spectrum = cfg.spectrum();
    let sim = SimConfig::new(cfg.dt, cfg.t_end);
    let x0 = cfg.x0;
    let modes = pool(cfg)?.install(|| {
        spectrum
            .par_iter()
            .map(|&l| simulate_mode(&p, &ModeState::from_array(x0, l), &sim))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let residual = modes
        .iter()
        .map(|m| energy_identity_residual(m, &p))
        .fold(0.0, f64::max);
    let sup = Superposition::from_trajectories(modes);

    let mut columns = vec!["t".to_string()];
    for k in 1..=spectrum.len() {
        for name in ["u", "v", "w", "theta"] {
            columns.push(format!("{name}_{k}"));
        }
    }
    columns.push("E_total".into());
    columns.push("W_total".into());
    let mut csv = Csv::new(cfg, &columns)?;
    for (i, t) in sup.times.iter().enumerate() {
        let mut row = vec![num(*t)];
        for m in &sup.modes {
            row.extend(m.states[i].to_array().map(num));
        }
        row.push(num(sup.total_energy[i]));
        row.push(num(sup.total_quasienergy[i]));
        csv.row(row)?;
    }
    let expected = decay_rate_spectrum(&p, &spectrum)?.rate;
    match measured_rate_series(&sup.times, &sup.total_energy) {
        Ok(rate) => csv.comment(format!("measured_rate={}", num(rate))),
        Err(e) => csv.comment(format!("measured_rate=unfit ({e})")),
    }
    csv.comment(format!("spectral_rate={}", num(expected)));
    csv.comment(format!("energy_identity_residual={}", num(residual)));
    if sup.blow_up {
        csv.comment(format!(
            "blow_up=true truncated_at={}",
            num(sup.times.last().copied().unwrap_or(0.0))
        ));
    } else {
        csv.comment("blow_up=false");
    }
    csv.finish()
}

fn certify(cfg: &RunConfig) -> Result<String, CliError> {
    let p = &cfg.params;
    let spectrum = cfg.spectrum();
    let cert = certified_rate(p, &spectrum)?;
    let mut r = Report::new(cfg);
    r.entry("valid", cert.valid);
    let reasons: Vec<String> = cert.reasons.iter().map(|x| x.to_string()).collect();
    r.entry("reasons", reasons.join(","));
    r.number("rho", cert.rho);
    r.number("epsilon", cert.epsilon);
    r.number("sigma", cert.sigma);
    r.number("ell", cert.ell);
    r.number("omega", cert.omega);
    r.number("c", cert.c);
    r.number("omega_cert", cert.omega_cert);
    r.entry("c_optimal", false);
    r.number("omega_star", decay_rate_spectrum(p, &spectrum)?.rate);
    let grid: Vec<String> = cert.lambda_grid.iter().map(|l| l.to_string()).collect();
    r.entry("lambda_grid", grid.join(","));
    for (l, m) in cert.lambda_grid.iter().zip(&cert.margins) {
        r.number(&format!("lyapunov_margin[{l}]"), *m);
    }
    Ok(r.finish())
}

fn check(r: &mut Report, failed: &mut bool, name: &str, ok: bool) {
    r.entry(&format!("check.{name}"), if ok { "pass" } else { "fail" });
    *failed |= !ok;
}

fn asymptotics(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = cfg.params;
    let l = p.lambda1;
    let mut r = Report::new(cfg);
    let mut failed = false;

    let mut all_roots = true;
    let mut far_p = f64::NAN;
    for eta in [1e2, 1e3, 1e4] {
        let probe = eta_limit_probe(&p.with_eta(eta), l)?;
        r.number(&format!("eta_probe[{eta}].eps_eta"), probe.eps_eta);
        r.number(&format!("eta_probe[{eta}].p_value"), probe.p_value);
        r.entry(&format!("eta_probe[{eta}].root_found"), probe.root_found);
        all_roots &= probe.root_found;
        far_p = probe.p_value;
    }
    check(
        &mut r,
        &mut failed,
        "p_minus_eps_eta_near_minus_one",
        (far_p + 1.0).abs() < 0.05,
    );
    check(&mut r, &mut failed, "real_root_in_window", all_roots);

    let rates = [10.0, 1e2, 1e3]
        .iter()
        .map(|&eta| decay_rate_spectrum(&p.with_eta(eta), &[l]).map(|d| d.rate))
        .collect::<Result<Vec<_>, _>>()?;
    for (eta, w) in [10.0, 1e2, 1e3].iter().zip(&rates) {
        r.number(&format!("omega_star[eta={eta}]"), *w);
    }
    check(
        &mut r,
        &mut failed,
        "rate_vanishes_with_eta",
        rates.windows(2).all(|w| w[1] < w[0]) && rates[2] < 0.01,
    );

    if p.mu() >= 0.0 {
        let c = kappa_limit_constants(&p, l)?;
        r.number("r", c.r);
        r.number("xi", c.xi);
        let mut negative = true;
        for eta in [1.0, 10.0] {
            let k = kappa_limit_probe(&p.with_eta(eta), l, 1e6)?;
            r.number(&format!("kappa_probe[eta={eta}].zeta"), k.zeta);
            r.number(&format!("kappa_probe[eta={eta}].p_value"), k.p_value);
            r.number(&format!("kappa_probe[eta={eta}].f_value"), k.f_value);
            r.number(&format!("kappa_probe[eta={eta}].g_value"), k.g_value);
            negative &= k.p_value < 0.0;
        }
        check(&mut r, &mut failed, "p_minus_zeta_negative", negative);
        let mut bounded = true;
        for kappa in [1e3, 1e4, 1e5] {
            let s = omega_kappa_scan(&p, kappa, &default_eta_grid(&p, kappa, 200))?;
            r.number(&format!("omega_kappa[{kappa}]"), s.omega);
            r.number(&format!("omega_kappa[{kappa}].eta"), s.eta);
            bounded &= s.omega <= 2.0 * c.xi;
        }
        check(&mut r, &mut failed, "omega_kappa_below_two_xi", bounded);
        let mut small = Vec::new();
        for kappa in [1e-3, 1e-4] {
            let s = omega_kappa_scan(&p, kappa, &default_eta_grid(&p, kappa, 200))?;
            r.number(&format!("omega_kappa[{kappa}]"), s.omega);
            small.push(s.omega);
        }
        check(
            &mut r,
            &mut failed,
            "omega_kappa_vanishes_small_kappa",
            small[1] < small[0],
        );
    } else {
        r.entry("kappa_limit", "skipped (mu < 0)");
    }

    let sub = subcritical_value(&p, l)?;
    r.number("p_minus_alpha", sub);
    r.number(
        "p_minus_alpha_closed_form",
        l * p.mu() * (p.kappa * l - p.alpha),
    );
    if p.mu() < 0.0 && p.kappa * l > p.alpha {
        check(&mut r, &mut failed, "subcritical_root_in_window", sub < 0.0);
    }
    r.entry("status", if failed { "fail" } else { "pass" });
    Ok(Output {
        text: r.finish(),
        failed,
    })
}

fn oscillator(cfg: &RunConfig) -> Result<Output, CliError> {
    let mut r = Report::new(cfg);
    let mut failed = false;
    let opt = osc_optimize()?;
    let exact = 1.0 - 5f64.sqrt() / 5.0;
    r.number("omega_star", opt.omega_star);
    r.number("epsilon_opt", opt.epsilon);
    r.number("omega_b", opt.omega_b);
    r.number("omega_b_exact", exact);
    r.number("gap", opt.gap());
    let traj = osc_simulate(OscState::new(1.0, 0.0), &SimConfig::new(1e-3, 20.0))?;
    let residual = osc_identity_residual(&traj, 0.5);
    r.number("identity_residual", residual);
    check(
        &mut r,
        &mut failed,
        "omega_star_is_one",
        (opt.omega_star - 1.0).abs() < 1e-12,
    );
    check(
        &mut r,
        &mut failed,
        "omega_b_closed_form",
        (opt.omega_b - exact).abs() < 1e-9,
    );
    check(
        &mut r,
        &mut failed,
        "epsilon_opt_half",
        (opt.epsilon - 0.5).abs() < 1e-8,
    );
    check(
        &mut r,
        &mut failed,
        "optimum_admissible",
        osc_admissible(0.5, exact),
    );
    check(
        &mut r,
        &mut failed,
        "identity_residual_small",
        residual < 1e-8,
    );
    check(&mut r, &mut failed, "gap_positive", opt.gap() > 0.0);
    r.entry("status", if failed { "fail" } else { "pass" });
    Ok(Output {
        text: r.finish(),
        failed,
    })
}
