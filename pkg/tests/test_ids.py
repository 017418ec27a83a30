import numpy as np
import pytest

from conftest import make_model
from disorder import place_centers
from hamiltonian import build_grid
from ids import (EmptyDomain, InconclusiveProbe, classify_probe, complement_domain, complement_operator,
                 coupling_limit, deterministic_staircase, ids_dichotomy, ids_estimate, interlacing_check,
                 staircase_counts)
from thresholds import e0_curve


def test_complement_removes_closed_cubes():
    grid = build_grid(1, 3, 11)
    domain = complement_domain(grid, place_centers(grid, 0.2, 0, 'periodic', 0.5), 0.5)
    assert domain.kept_dimension == 2
    np.testing.assert_allclose(grid.axis_coordinates()[~domain.mask], [-0.5, 0.5])


def test_tiny_cubes_between_grid_points_remove_nothing():
    grid = build_grid(1, 3, 8)
    domain = complement_domain(grid, place_centers(grid, 0.005, 0, 'periodic', 0.01), 0.01)
    assert domain.kept_dimension == grid.size


@pytest.mark.parametrize('n', [5, 7])
def test_covering_has_no_complement(n):
    model = make_model('covering', side=3, n=n)
    with pytest.raises(EmptyDomain):
        complement_operator(model)
    with pytest.raises(EmptyDomain):
        interlacing_check(model, 2, 1.0, 2, 0)


def test_ids_without_disorder_is_the_background_staircase():
    model = make_model('ergodic')
    energies = [0.5, 3.3, 10.1, 40.7]
    curve = ids_estimate(model, energies, 0.0, 3, 0)
    expected = deterministic_staircase(model.hamiltonian(), energies, model.grid.volume)
    np.testing.assert_allclose(curve.values, expected)
    np.testing.assert_allclose(curve.values * 7, [1, 4, 7, 14])
    assert np.all(curve.ci == 0)


def test_staircase_ends():
    model = make_model('ergodic')
    op = model.random_operator(1.0, 0, 0)
    np.testing.assert_array_equal(staircase_counts(op, [-5.0, 1e6]), [0, op.dimension])


def test_interlacing_with_the_complement():
    model = make_model('gap')
    report = interlacing_check(model, 10, 5.0, 20, 0, threads=2)
    assert report.instances == 200
    assert report.violations == 0
    assert report.worst_margin >= -1e-9


def test_coupling_limit_climbs_to_the_complement():
    model = make_model('gap')
    report = coupling_limit(model, [10.0, 1e3, 1e6], 10)
    assert report.monotone
    assert np.all(report.gaps >= -1e-8)
    assert report.relative_gap() < 0.01


def test_classify_probe():
    assert classify_probe(5.0, 10.0) == 'below'
    assert classify_probe(20.0, 10.0) == 'above'
    for energy in [9.0, 10.0, 11.0]:
        with pytest.raises(InconclusiveProbe):
            classify_probe(energy, 10.0)
    assert classify_probe(9.0, 10.0, band=0.05) == 'below'


def test_dichotomy_is_skipped_without_a_threshold():
    covering = ids_dichotomy(make_model('covering', side=3, n=7), [1.0], [1.0], 2, 0, np.inf)
    assert [p.verdict for p in covering.probes] == ['skipped']
    gap = ids_dichotomy(make_model('gap'), [1.0], [1.0], 2, 0, 20.0)
    assert [p.verdict for p in gap.probes] == ['skipped']
    assert 'ergodic' in gap.probes[0].reason


def test_dichotomy_on_both_sides_of_the_threshold():
    model = make_model('ergodic')
    threshold = e0_curve(model).threshold
    probes = [0.5 * threshold, 1.05 * threshold, 2.0 * threshold]
    report = ids_dichotomy(model, probes, [10.0, 1e2, 1e4], 10, 0, threshold)
    below, band, above = report.probes
    assert (below.side, below.verdict) == ('below', 'vanishing')
    assert below.means == sorted(below.means, reverse=True)
    assert (band.side, band.verdict) == ('band', 'inconclusive')
    assert (above.side, above.verdict) == ('above', 'persistent')
    assert above.violations == 0 and above.complement_count >= 1
