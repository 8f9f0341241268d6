"""Acceptance criteria 1-10, one PASS/FAIL line each (see the terminal summary)."""

import csv
import io
import math
import subprocess
import sys
import time

import numpy as np

from channelqfi import ChannelParams, ProbeClass, apply_channel, make_probe, qfi, qfi_zero_temperature
from channelqfi.fock import coherent_fock, max_entangled, page_entropy, qfi_gamma_fock, scatter_experiment, tmsv_fock
from channelqfi.gaussian import tmsv_from_squeezing
from channelqfi.sld import commutator_expectation, qfi_matrix
from channelqfi.yields import (
    ALL_CLASSES,
    Param,
    high_energy_expansion,
    low_energy_expansion,
    single_mode_output_parameters,
    single_mode_yield,
)
from conftest import record_acceptance

SINGLE_MODE = [ProbeClass.COHERENT, ProbeClass.THERMAL, ProbeClass.SINGLE_MODE_SQUEEZED]


def open_low(rng, lo, hi, size):
    """Uniform samples on (lo, hi]."""
    return hi - (hi - lo) * rng.random(size)


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_criterion_1_zero_temperature_forms():
    rng = np.random.default_rng(1)
    ns, gs = open_low(rng, 0, 10, 1000), open_low(rng, 0.01, 3, 1000)
    t0 = time.perf_counter()
    worst = 0.0
    for n, g in zip(ns, gs):
        th = ChannelParams(g, 0.0)
        for c in ALL_CLASSES:
            worst = max(worst, rel_err(qfi("gamma", c, n, th), qfi_zero_temperature(c, n, g)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    assert record_acceptance(1, ok, f"max rel err {worst:.2e} (<= 1e-12), {elapsed:.3f} s (< 1 s)")


def test_criterion_2_dominance():
    rng = np.random.default_rng(2)
    size = 10_000
    ns, gs, Ns = open_low(rng, 0, 10, size), open_low(rng, 0.01, 3, size), open_low(rng, 0, 5, size)
    t0 = time.perf_counter()
    worst = math.inf
    for n, g, N in zip(ns, gs, Ns):
        th = ChannelParams(g, N)
        for p in Param:
            top = qfi(p, ProbeClass.TWO_MODE_SQUEEZED_VACUUM, n, th)
            for c in ALL_CLASSES[:3]:
                worst = min(worst, top - qfi(p, c, n, th))
    elapsed = time.perf_counter() - t0
    ok = worst >= -1e-12 and elapsed < 5.0
    assert record_acceptance(2, ok, f"min slack {worst:.2e} (>= -1e-12), {elapsed:.3f} s (< 5 s)")


def test_criterion_3_high_energy_ratio():
    th = ChannelParams(0.3, 0.9)
    ratio = qfi("gamma", "two-mode", 100.0, th) / qfi("gamma", "coherent", 100.0, th)
    coeff = high_energy_expansion("gamma", "two-mode", th).slope / high_energy_expansion("gamma", "coherent", th).slope
    exact = 1 + 1 / (th.z * (2 * th.nbar + 1))
    in_band = 1.9 <= ratio <= 2.1
    close = abs(coeff - ratio) <= 1e-2
    ok = in_band and close and abs(coeff - exact) <= 1e-12
    assert record_acceptance(
        3,
        ok,
        f"ratio at n=100 {ratio:.6f} (in [1.9, 2.1]: {in_band}); "
        f"coefficient ratio {coeff:.6f}, |diff| {abs(coeff - ratio):.4f} (<= 1e-2: {close})",
    )


def test_criterion_4_commutator():
    rng = np.random.default_rng(4)
    rs, gs, Ns = open_low(rng, 0, 2, 200), open_low(rng, 0.05, 2, 200), rng.uniform(0, 3, 200)
    t0 = time.perf_counter()
    worst = max(abs(commutator_expectation(tmsv_from_squeezing(r), ChannelParams(g, N))) for r, g, N in zip(rs, gs, Ns))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 10.0
    assert record_acceptance(4, ok, f"max |tr rho[L_g, L_N]| {worst:.2e} (< 1e-9), {elapsed:.3f} s (< 10 s)")


def test_criterion_5_cross_formalism():
    rng = np.random.default_rng(5)
    worst = 0.0
    for k in range(500):
        c = ALL_CLASSES[k % 4]
        n, g, N = open_low(rng, 0, 10, 1)[0], open_low(rng, 0.05, 2, 1)[0], open_low(rng, 0.05, 3, 1)[0]
        th = ChannelParams(g, N)
        j = qfi_matrix(make_probe(c, n), th)
        for i, p in enumerate(Param):
            want = qfi(p, c, n, th)
            worst = max(worst, abs(j[i, i] - want) / max(abs(want), 1e-12))
    assert record_acceptance(5, worst < 1e-8, f"max rel err {worst:.2e} (< 1e-8) over 500 configurations")


def test_criterion_6_fock_oracle():
    g = 0.1
    t0 = time.perf_counter()
    j_coh = qfi_gamma_fock(coherent_fock(1.0, 30)[0], g)
    j_tm = qfi_gamma_fock(tmsv_fock(1.0, 30)[0], g)
    elapsed = time.perf_counter() - t0
    e_coh = rel_err(j_coh, math.exp(-g))
    e_tm = rel_err(j_tm, 1 / math.expm1(g))
    ok = e_coh <= 1e-4 and e_tm <= 1e-3 and elapsed < 5.0
    assert record_acceptance(
        6, ok, f"coherent {j_coh:.7f} rel {e_coh:.1e} (<= 1e-4); TMSV {j_tm:.6f} rel {e_tm:.1e} (<= 1e-3); {elapsed:.3f} s (< 5 s)"
    )


def test_criterion_7_scatter():
    g = 0.1
    z = math.expm1(g)
    t0 = time.perf_counter()
    res = scatter_experiment(4000, g, 4, 4, (3, 4, 5, 6), seed=2024, workers=1)
    elapsed = time.perf_counter() - t0
    rand = [r for r in res.records if r.kind.value == "random"]
    bound_ok = all(r.j_gamma <= 1.01 * r.n_a / z for r in rand)
    worst_ratio = max(r.j_gamma * z / r.n_a for r in rand)
    eff = [r.efficiency * z for r in res.records if r.kind.value == "max-ent"]
    eff_ok = len(eff) == 4 and all(abs(e - 1) <= 0.02 for e in eff)
    ent = np.array([r.entropy for r in rand])
    se = ent.std(ddof=1) / math.sqrt(ent.size)
    page = page_entropy(4, 4)
    page_ok = abs(ent.mean() - page) <= 3 * se
    ok = bound_ok and eff_ok and page_ok and elapsed < 120
    assert record_acceptance(
        7,
        ok,
        f"max J z/n_a {worst_ratio:.4f} (<= 1.01); max-ent efficiency x z {min(eff):.6f}..{max(eff):.6f} (within 2%); "
        f"mean entropy {ent.mean():.5f} vs Page {page:.5f}, {abs(ent.mean() - page) / se:.2f} SE (<= 3); {elapsed:.1f} s (< 120 s)",
    )


def test_criterion_8_expansion_consistency():
    th = ChannelParams(0.3, 0.9)
    failures = []
    for p in Param:
        for c in ALL_CLASSES:
            lo, hi = low_energy_expansion(p, c, th), high_energy_expansion(p, c, th)

            def resid(n, model):
                return abs(qfi(p, c, n, th) - model.model(n))

            if not resid(1e-4, lo) <= 1.2e-2 * resid(1e-3, lo):
                failures.append(f"{p.value}/{c.value} low")
            if not resid(1e4, hi) <= resid(1e3, hi):
                failures.append(f"{p.value}/{c.value} high")
    detail = "all 8 class/parameter pairs decay as required" if not failures else "violations: " + ", ".join(failures)
    assert record_acceptance(8, not failures, detail)


def test_criterion_9_single_mode_formula():
    rng = np.random.default_rng(9)
    worst = 0.0
    for k in range(300):
        c = SINGLE_MODE[k % 3]
        n, g, N = open_low(rng, 0, 10, 1)[0], open_low(rng, 0.05, 2, 1)[0], open_low(rng, 0.05, 3, 1)[0]
        th = ChannelParams(g, N)
        nu, r, d = single_mode_output_parameters(apply_channel(make_probe(c, n), th))
        for p in Param:
            want = qfi(p, c, n, th)
            worst = max(worst, abs(single_mode_yield(p, nu, r, d, th) - want) / max(abs(want), 1e-12))
    assert record_acceptance(9, worst <= 1e-10, f"max rel err {worst:.2e} (<= 1e-10) over 300 configurations")


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "channelqfi.cli", *argv], capture_output=True, check=True).stdout


def test_criterion_10_cli_determinism():
    flags = ["scatter", "--samples", "300", "--gamma", "0.1", "--seed", "7"]
    first, second = _cli(*flags), _cli(*flags)
    identical = first == second and len(first) > 0
    sweep = _cli("sweep", "--param", "gamma", "--gamma", "0.3", "--nbar", "0.9", "--n-min", "0", "--n-max", "100", "--points", "201")
    rows = list(csv.reader(io.StringIO(sweep.decode())))
    header_ok = rows[0] == ["n", "J_coherent", "J_thermal", "J_squeezed", "J_two_mode"]
    count_ok = len(rows) == 202
    ok = identical and header_ok and count_ok
    assert record_acceptance(10, ok, f"scatter byte-identical: {identical}; sweep header exact: {header_ok}; rows 1+201: {count_ok}")
