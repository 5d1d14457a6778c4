"""Smoke test for the mgt_fourier extension module.

Build first:  maturin develop --release -m crates/python/Cargo.toml
"""

import math

import mgt_fourier as mf


def main():
    p = mf.SystemParams.reference(kappa=2.0, eta=3.0)
    assert p.regime() == "supercritical" and p.mu() == 1.0
    assert mf.stability_predicate(p)
    assert abs(mf.tau_star(p) - 0.5) < 1e-10
    assert mf.theoretical_threshold(p) > mf.tau_star(p)

    a3, a2, a1, a0 = mf.quartic_coefficients(p, 1.0)
    assert (a3, a0) == (4.0, 6.0)
    assert mf.hurwitz_stable(p, 1.0)
    rate, unstable = mf.decay_rate(p, [1.0, 4.0, 9.0])
    assert not unstable and rate > 0

    _, unstable = mf.decay_rate(p.with_eta(0.0))
    assert unstable

    cert = mf.certified_rate(p, modes=10)
    assert cert.valid and 0 < cert.omega_cert <= rate
    assert all(m <= 0 for m in cert.margins)
    assert "sigma<=0" in mf.certified_rate(p.with_eta(0.5)).reasons[0]

    traj = mf.simulate_mode(p, [1.0, 0.0, 0.0, 0.0], 1.0, dt=1e-3, t_end=10.0)
    assert not traj.blow_up and traj.identity_residual < 1e-8
    assert abs(traj.energy[0] - mf.energy(p, traj.states[0], 1.0)) < 1e-14

    eps_eta, value, found = mf.eta_limit_probe(p.with_eta(1e4), 1.0)
    assert found and abs(value + 1.0) < 1e-3

    eps, omega_b, omega_star = mf.oscillator_optimum()
    assert abs(omega_b - (1 - 1 / math.sqrt(5))) < 1e-9 and omega_star == 1.0

    try:
        mf.SystemParams(-1.0, 1.0, 3.0, 2.0, 3.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative alpha accepted")

    print(f"ok: decay rate {rate:.6f}, certified {cert.omega_cert:.6f}, omega_b {omega_b:.6f}")


if __name__ == "__main__":
    main()
