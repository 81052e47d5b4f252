import numpy as np
import pytest

from dyonphase import plotting


def png_ok(path):
    return path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_path_and_trajectory_figures(tmp_path):
    t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    pts = np.stack([2 * np.cos(t), 2 * np.sin(t), 0 * t], axis=-1)
    assert png_ok(plotting.plot_path(pts, 1.0, tmp_path / "p.png", title="loop"))
    assert png_ok(plotting.plot_trajectory(pts[:20], 1.0, tmp_path / "t.png"))


def test_profile_flow_fringe_and_reduction_figures(tmp_path):
    rho = np.linspace(0.01, 3, 50)
    plotting.plot_profile(rho, rho * 1.001, rho, 1.0, tmp_path / "a.png")
    alphas = np.linspace(0, 1, 5)
    levels = np.column_stack([alphas**2, (1 - alphas) ** 2])
    plotting.plot_spectral_flow(alphas, levels, levels + 1e-6, tmp_path / "f.png")
    plotting.plot_spectral_flow(alphas, levels, None, tmp_path / "g.png")
    x = np.linspace(-5, 5, 101)
    plotting.plot_fringes(x, 1 + np.cos(x), 1 + np.cos(x - 0.2), 0.2, tmp_path / "i.png")
    rows = [{"reduction": "ab_by_charge", "phase_before": 2.5, "phase_after": 2.5}]
    plotting.plot_reductions(rows, tmp_path / "r.png")
    for name in "afgir":
        assert png_ok(tmp_path / f"{name}.png")


@pytest.mark.parametrize("ext", ["png", "svg"])
def test_renders_are_deterministic(tmp_path, ext):
    x = np.linspace(-5, 5, 101)
    a = plotting.plot_fringes(x, 1 + np.cos(x), 1 + np.cos(x - 0.2), 0.2, tmp_path / f"a.{ext}")
    b = plotting.plot_fringes(x, 1 + np.cos(x), 1 + np.cos(x - 0.2), 0.2, tmp_path / f"b.{ext}")
    assert a.read_bytes() == b.read_bytes()
