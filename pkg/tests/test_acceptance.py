"""Acceptance suite: one test per gate, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-gate
lines; every tolerance and trial count is fixed here, not tuned at run
time.
"""

import math
import time

import numpy as np
import pytest

from kantorovich.cli import TABLE1_BAND, TABLE1_CLASSICAL_REF, main
from kantorovich.image import (
    apply_psk_image,
    block_means,
    expected_reconstruction_metrics,
    classical_reconstruction_metrics,
    reconstruct_sk,
    sk_reconstruct,
    synthetic_test_image,
)
from kantorovich.kernels import box_kernel, bspline_kernel
from kantorovich.metrics import mae, psnr_from_mse, ssim, variance_abs_error
from kantorovich.noise import (
    NoiseModel,
    TrialContext,
    apply_psk_from_means,
    expected_error,
    gaussian_field,
)
from kantorovich.operator1d import (
    CellMeans,
    Domain1D,
    apply_sk,
    apply_sk_function,
    cell_index_range,
    compute_cell_means,
    error_summary,
    pointwise_error,
    sample_function,
)

from helpers import (
    aligned_trapezoid_grid,
    naive_block_reconstruct,
    naive_sk_1d,
    random_step,
    step_cell_means,
    step_eval,
    trapezoid_l1,
)

GAUSS = lambda x: np.exp(-np.asarray(x, dtype=float) ** 2)
ZERO = lambda x: np.zeros_like(np.asarray(x, dtype=float))

DOMAIN = Domain1D(-3.0, 3.0, 1000)
NS = (5, 15, 25, 35, 45)


def _report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {name}: {status}{suffix}")


def classical_l1_errors() -> dict[int, float]:
    exact = sample_function(GAUSS, DOMAIN)
    out = {}
    for n in NS:
        approx = apply_sk_function(GAUSS, DOMAIN, n, box_kernel())
        out[n] = error_summary(pointwise_error(approx, exact)).l1_total
    return out


def test_table1_classical_band_and_decrease():
    start = time.perf_counter()
    errors = classical_l1_errors()
    elapsed = time.perf_counter() - start

    in_band = {
        n: TABLE1_BAND[n][0] <= errors[n] <= TABLE1_BAND[n][1] for n in TABLE1_CLASSICAL_REF
    }
    decreasing = all(errors[b] < errors[a] for a, b in zip(NS, NS[1:]))
    ok = all(in_band.values()) and decreasing and elapsed < 5.0
    _report(
        "table1-classical",
        ok,
        f"errors={ {n: round(errors[n], 5) for n in NS} }, {elapsed:.2f}s",
    )
    assert all(in_band.values()), (errors, TABLE1_BAND)
    assert decreasing, errors
    assert elapsed < 5.0


def test_table1_probabilistic_direction_and_noise_oracle():
    start = time.perf_counter()
    trials = 2000
    noise = NoiseModel(std=0.02, placement="cell", master_seed=42)
    classical = classical_l1_errors()

    exceeds = {}
    for n in TABLE1_CLASSICAL_REF:
        est = expected_error(GAUSS, DOMAIN, n, box_kernel(), noise, trials=trials)
        exceeds[n] = est.mean - 3.0 * est.std_error > classical[n]

    oracle = expected_error(ZERO, DOMAIN, 5, box_kernel(), noise, trials=trials)
    target = 6.0 * 0.02 * math.sqrt(2.0 / math.pi)
    oracle_ok = abs(oracle.mean - target) < 3.0 * oracle.std_error
    elapsed = time.perf_counter() - start

    ok = all(exceeds.values()) and oracle_ok and elapsed < 60.0
    _report(
        "table1-probabilistic",
        ok,
        f"direction={exceeds}, noise-only mean={oracle.mean:.5f} vs {target:.5f}, {elapsed:.1f}s",
    )
    assert all(exceeds.values()), exceeds
    assert oracle_ok, (oracle, target)
    assert elapsed < 60.0


def test_l1_boundedness_property_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(1234)
    kernels = (box_kernel(), bspline_kernel(2))
    domain = Domain1D(-3.0, 3.0, 2)
    checked = 0
    failures = 0
    for _ in range(100):
        edges, vals = random_step(rng)
        for n in (1, 2, 5, 10):
            k_min, k_max = cell_index_range(domain, n)
            means = step_cell_means(edges, vals, n, k_min, k_max)
            for kernel in kernels:
                lo = k_min / n - 1.0 / n
                hi = (k_max + kernel.order) / n + 1.0 / n
                knots = np.arange(math.floor(lo * n), math.ceil(hi * n) + 1) / n
                grid = aligned_trapezoid_grid(np.concatenate([knots, edges]))
                sk = naive_sk_1d(grid, n, k_min, k_max, means, kernel, grid[-1])
                lhs = trapezoid_l1(sk, grid)
                rhs = trapezoid_l1(step_eval(edges, vals, grid), grid)
                checked += 1
                if lhs > kernel.l1_norm * rhs + 1e-9:
                    failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 10.0
    _report("l1-boundedness", ok, f"{checked} cases, {failures} failures, {elapsed:.1f}s")
    assert failures == 0
    assert checked == 100 * 4 * 2
    assert elapsed < 10.0


def test_vanishing_noise_convergence():
    start = time.perf_counter()
    trials = 500
    means = []
    for n in NS:
        noise = NoiseModel(std=0.02 / math.sqrt(n), placement="cell", master_seed=42)
        est = expected_error(GAUSS, DOMAIN, n, box_kernel(), noise, trials=trials)
        means.append(est.mean)
    elapsed = time.perf_counter() - start
    decreasing = all(b < a for a, b in zip(means, means[1:]))
    ok = decreasing and elapsed < 120.0
    _report(
        "vanishing-noise-convergence",
        ok,
        f"means={[round(m, 5) for m in means]}, {elapsed:.1f}s",
    )
    assert decreasing, means
    assert elapsed < 120.0


def test_oracle_equivalence():
    rng = np.random.default_rng(2024)
    worst_1d = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 7))
        points = int(rng.integers(8, 65))
        a = float(rng.uniform(-2.5, -0.5))
        b = float(rng.uniform(0.5, 2.5))
        coeffs = rng.uniform(-1, 1, 4)
        f = lambda x, c=coeffs: (
            c[0] + c[1] * np.sin(2 * np.asarray(x)) + c[2] * np.cos(3 * np.asarray(x)) + c[3] * np.asarray(x)
        )
        kernel = (box_kernel(), bspline_kernel(2), bspline_kernel(3))[int(rng.integers(3))]
        d = Domain1D(a, b, points)
        means = compute_cell_means(f, d, n)
        got = apply_sk(means, kernel, d).samples
        want = naive_sk_1d(d.grid(), n, means.k_min, means.k_max, means.values, kernel, d.b)
        worst_1d = max(worst_1d, float(np.max(np.abs(got - want))))
    ok_1d = worst_1d <= 1e-12

    worst_2d = 0.0
    for _ in range(10):
        img = rng.uniform(0, 1, (16, 16))
        w = int(rng.integers(1, 17))
        got = sk_reconstruct(img, w)
        want = naive_block_reconstruct(img, w)
        worst_2d = max(worst_2d, float(np.max(np.abs(got - want))))
    ok_2d = worst_2d <= 1e-12

    # Perturbed variants share the noise stream with their oracles.
    noise = NoiseModel(std=0.02, placement="cell", master_seed=77)
    d = Domain1D(-2.0, 2.0, 64)
    means = compute_cell_means(GAUSS, d, 5)
    got = apply_psk_from_means(means, d, box_kernel(), noise, TrialContext(3)).samples
    noisy = means.values + gaussian_field(noise, TrialContext(3), len(means.values))
    want = naive_sk_1d(d.grid(), 5, means.k_min, means.k_max, noisy, box_kernel(), d.b)
    worst_psk = float(np.max(np.abs(got - want)))

    img = rng.uniform(0, 1, (16, 16))
    noise_img = NoiseModel(std=0.02, placement="sample", master_seed=78)
    got_img = apply_psk_image(img, 3, noise_img, TrialContext(1))
    field = gaussian_field(noise_img, TrialContext(1), img.size).reshape(img.shape)
    want_img = naive_block_reconstruct(img + field, 3)
    worst_psk_img = float(np.max(np.abs(got_img - want_img)))
    ok_psk = worst_psk <= 1e-12 and worst_psk_img <= 1e-12

    ok = ok_1d and ok_2d and ok_psk
    _report(
        "oracle-equivalence",
        ok,
        f"1d={worst_1d:.2e}, 2d={worst_2d:.2e}, psk={max(worst_psk, worst_psk_img):.2e}",
    )
    assert ok_1d and ok_2d and ok_psk


def test_table2_trends():
    start = time.perf_counter()
    img = synthetic_test_image()
    reports = {w: classical_reconstruction_metrics(img, w) for w in (3, 7, 15)}
    elapsed = time.perf_counter() - start
    psnr_down = reports[3].psnr > reports[7].psnr > reports[15].psnr
    mae_up = reports[3].mae < reports[7].mae < reports[15].mae
    ssim_down = reports[3].ssim > reports[7].ssim > reports[15].ssim
    ok = psnr_down and mae_up and ssim_down and elapsed < 10.0
    _report(
        "table2-trends",
        ok,
        f"psnr={[round(reports[w].psnr, 2) for w in (3, 7, 15)]}, "
        f"mae={[round(reports[w].mae, 4) for w in (3, 7, 15)]}, "
        f"ssim={[round(reports[w].ssim, 4) for w in (3, 7, 15)]}, {elapsed:.1f}s",
    )
    assert psnr_down and mae_up and ssim_down
    assert elapsed < 10.0


def test_table3_variance_trend():
    start = time.perf_counter()
    img = synthetic_test_image()
    noise = NoiseModel(std=0.02, placement="sample", master_seed=42)
    variances = [
        expected_reconstruction_metrics(img, w, noise, trials=100).var_abs_err
        for w in (3, 7, 15)
    ]
    elapsed = time.perf_counter() - start
    decreasing = variances[0] > variances[1] > variances[2]
    ok = decreasing and elapsed < 60.0
    _report(
        "table3-variance-trend",
        ok,
        f"var={[f'{v:.2e}' for v in variances]}, {elapsed:.1f}s",
    )
    assert decreasing, variances
    assert elapsed < 60.0


def test_metric_unit_oracles():
    exact_20 = psnr_from_mse(0.01, 1.0)
    ok_psnr = exact_20 == 20.0

    rng = np.random.default_rng(5150)
    ok_ssim = all(
        ssim(img, img) == pytest.approx(1.0, abs=1e-12)
        for img in (rng.uniform(0, 1, (24, 24)) for _ in range(10))
    )

    ok_mae = (
        mae(np.array([[0.0, 0.5]]), np.array([[0.2, 0.1]])) == pytest.approx(0.3)
        and mae(np.zeros((3, 3)), np.zeros((3, 3))) == 0.0
        and mae(np.zeros((3, 3)), np.full((3, 3), 0.1)) == pytest.approx(0.1)
    )

    ok_var = all(
        variance_abs_error(rng.normal(0, 1, int(rng.integers(2, 50)))) >= -1e-15
        for _ in range(10_000)
    )

    ok = ok_psnr and ok_ssim and ok_mae and ok_var
    _report("metric-unit-oracles", ok, f"psnr20={exact_20}")
    assert ok_psnr and ok_ssim and ok_mae and ok_var


def test_determinism_of_reproduce_tables(tmp_path):
    argv = ["reproduce-tables", "--trials-table1", "50", "--trials-table3", "10", "--seed", "42"]
    main(argv + ["--out-dir", str(tmp_path / "r1")])
    main(argv + ["--out-dir", str(tmp_path / "r2")])
    main(argv + ["--out-dir", str(tmp_path / "t1"), "--threads", "1"])
    main(argv + ["--out-dir", str(tmp_path / "t8"), "--threads", "8"])

    names = sorted(p.name for p in (tmp_path / "r1").iterdir())
    rerun_same = all(
        (tmp_path / "r1" / n).read_bytes() == (tmp_path / "r2" / n).read_bytes() for n in names
    )
    threads_same = all(
        (tmp_path / "t1" / n).read_bytes() == (tmp_path / "t8" / n).read_bytes() for n in names
    )
    ok = rerun_same and threads_same
    _report("determinism", ok, f"{len(names)} artifacts compared")
    assert rerun_same
    assert threads_same


def test_degeneracy_gates():
    # Zero-noise probabilistic pipelines must equal the classical ones
    # bitwise, window 1 must be the identity, and constants must be
    # reproduced exactly.
    d = Domain1D(-3.0, 3.0, 500)
    means = compute_cell_means(GAUSS, d, 5)
    classical = apply_sk(means, box_kernel(), d).samples
    ok_1d = True
    for placement in ("cell", "sample"):
        noise = NoiseModel(std=0.0, placement=placement)
        out = apply_psk_from_means(means, d, box_kernel(), noise, TrialContext(0)).samples
        ok_1d = ok_1d and np.array_equal(out, classical)

    img = synthetic_test_image(64)
    noise = NoiseModel(std=0.0, placement="sample")
    ok_img = np.array_equal(
        apply_psk_image(img, 4, noise, TrialContext(0)), sk_reconstruct(img, 4)
    )

    ok_identity = np.array_equal(sk_reconstruct(img, 1), img)
    ok_identity = ok_identity and np.array_equal(
        reconstruct_sk(block_means(img, 1), 1, *img.shape), img
    )

    const = apply_sk_function(lambda x: np.full_like(x, 0.37), d, 9, box_kernel()).samples
    ok_const = bool(np.max(np.abs(const - 0.37)) <= 1e-12)
    for kernel in (bspline_kernel(2), bspline_kernel(3)):
        out = apply_sk_function(lambda x: np.full_like(x, -1.5), d, 4, kernel).samples
        ok_const = ok_const and bool(np.max(np.abs(out + 1.5)) <= 1e-12)

    ok = ok_1d and ok_img and ok_identity and ok_const
    _report("degeneracy-gates", ok)
    assert ok_1d
    assert ok_img
    assert ok_identity
    assert ok_const
