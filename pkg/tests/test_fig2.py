import csv
import io
import math

import numpy as np
import pytest

from qgenbound import fig2, framework as fw
from qgenbound.errors import DomainError


@pytest.fixture(scope="module")
def p_rows():
    return fig2.sweep_p(fig2.Fig2Config())


@pytest.fixture(scope="module")
def alpha_rows():
    return fig2.sweep_alpha(fig2.Fig2Config())


def test_learner_probabilities_follow_angles():
    cfg = fig2.Fig2Config()
    j = fw.induce(fig2.build_fig2_instance(cfg, 0.6))
    want = np.array([[0.6 * 0.45, 0.4 * 0.5], [0.6 * 0.55, 0.4 * 0.5]])
    np.testing.assert_allclose(j.joint_matrix(), want, atol=1e-12)


def test_loss_spectrum():
    ev = np.linalg.eigvalsh(fig2.fig2_loss(fig2.Fig2Config()))
    np.testing.assert_allclose(ev, [-0.8, -0.8, -0.8, 0.8], atol=1e-15)


def test_psi_states_overlaps():
    st = fig2.psi_states(fig2.Fig2Config())
    for z, c2 in (("0", 0.45), ("1", 0.5)):
        f, fp, psi = st[z]
        assert abs(np.vdot(f, fp)) < 1e-15
        assert abs(np.vdot(f, psi)) ** 2 == pytest.approx(c2)


def test_p_sweep_orderings(p_rows):
    assert [r[0] for r in p_rows] == pytest.approx([0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8])
    for p, b_kl, b_mod, b_petz, gen in p_rows:
        assert b_mod <= b_petz + 1e-9
        assert b_mod <= b_kl + 1e-9
        assert gen <= b_mod + 1e-9


def test_alpha_sweep_orderings(alpha_rows):
    assert len(alpha_rows) == 25
    assert alpha_rows[0][0] == pytest.approx(0.4)
    assert all(0.4 <= r[0] < 1 for r in alpha_rows)
    for a, b_kl, b_mod, b_petz in alpha_rows:
        assert b_mod <= b_petz + 1e-9


def test_threads_do_not_change_results(p_rows):
    assert fig2.sweep_p(fig2.Fig2Config(), threads=3) == p_rows


def test_perp_sign_leaves_bounds_unchanged(p_rows):
    flipped = fig2.sweep_p(fig2.Fig2Config(perp_sign=-1))
    for a, b in zip(p_rows, flipped):
        np.testing.assert_allclose(a[1:4], b[1:4], atol=1e-6)


def test_reproduce_writes_csv_and_svg(tmp_path):
    cfg = fig2.Fig2Config(p_grid=(0.5, 0.6))
    out = fig2.reproduce("p", tmp_path, cfg)
    csv_path, svg_path = (tmp_path / "fig2a.csv"), (tmp_path / "fig2a.svg")
    assert sorted(out["files"]) == sorted([str(csv_path), str(svg_path)])
    rows = list(csv.reader(io.StringIO(csv_path.read_text())))
    assert tuple(rows[0]) == fig2.P_HEADER and len(rows) == 3
    svg = svg_path.read_text()
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert svg.count("<polyline") == 3
    again = tmp_path / "again"
    fig2.reproduce("p", again, cfg)
    assert (again / "fig2a.svg").read_text() == svg


def test_config_validation():
    with pytest.raises(DomainError):
        fig2.Fig2Config(p_grid=(1.2,))
    with pytest.raises(DomainError):
        fig2.Fig2Config(perp_sign=2)
    with pytest.raises(DomainError):
        fig2.reproduce("q", "/tmp", fig2.Fig2Config())
