import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.exceptions import CompletenessError, DomainError, ResolutionError
from src.spectra_closed import circle_spectrum, point_spectrum
from src.sturm_dtn import (
    BaseGeometry,
    MeshSpec,
    Source,
    SturmProblem,
    assemble_full,
    base_dtn_spectrum,
    collar_geometry,
    constrained_rayleigh_quotient,
    dtn_eigen_sturm,
    dtn_eigenvalues,
    graded_mesh,
    harmonic_extension,
    merge_eigenvalues,
    neumann,
    rayleigh_quotient,
    steklov,
)

TWO_PI = 2.0 * math.pi


def _ones(t):
    return np.ones_like(t)


@settings(max_examples=15, deadline=None)
@given(
    mu=st.floats(min_value=0.1, max_value=16.0),
    length=st.floats(min_value=0.5, max_value=2.0),
)
def test_constant_coefficient_closed_form(mu, length):
    root = math.sqrt(mu)
    p = SturmProblem.constant(length, q=mu, mesh=MeshSpec(elements=800))
    expected = [root * math.tanh(root * length / 2.0), root / math.tanh(root * length / 2.0)]
    np.testing.assert_allclose(dtn_eigenvalues(p), expected, rtol=1e-4)


def test_mixed_end_closed_form():
    p = SturmProblem.constant(1.0, q=4.0, right=neumann())
    values = dtn_eigenvalues(p)
    assert values.size == 1
    assert values[0] == pytest.approx(2.0 * math.tanh(2.0), rel=1e-5)


def test_harmonic_interval_is_exact():
    # linear functions are discrete harmonic: values 0 and 2 / L
    p = SturmProblem.constant(2.0, mesh=MeshSpec(elements=16))
    np.testing.assert_allclose(dtn_eigenvalues(p), [0.0, 1.0], atol=1e-12)


def test_boundary_weight_scales_eigenvalues():
    p = SturmProblem.constant(1.0, q=1.0, left=steklov(2.0), right=neumann())
    reference = SturmProblem.constant(1.0, q=1.0, right=neumann())
    assert dtn_eigenvalues(p)[0] == pytest.approx(0.5 * dtn_eigenvalues(reference)[0], rel=1e-12)


def test_eigenvector_rayleigh_quotient():
    p = SturmProblem(1.0, lambda t: 1.0 + t, lambda t: 2.0 + np.sin(t))
    assembled = assemble_full(p)
    eigen = dtn_eigen_sturm(p)
    for value, vector in eigen.pairs():
        extension = harmonic_extension(p, vector, assembled)
        assert rayleigh_quotient(p, extension, assembled) == pytest.approx(value, rel=1e-10)


def test_harmonic_extension_minimises_energy(rng):
    p = SturmProblem(1.0, lambda t: 1.0 + t, lambda t: 1.0 + 0.0 * t)
    assembled = assemble_full(p)
    extension = harmonic_extension(p, [1.0, -0.5], assembled)
    energy = extension @ (assembled.matrix @ extension)
    bump = np.zeros_like(extension)
    bump[1:-1] = rng.normal(size=extension.size - 2)
    perturbed = extension + 1e-3 * bump
    assert perturbed @ (assembled.matrix @ perturbed) > energy


def test_constrained_quotient_bounds_first_nonzero():
    p = SturmProblem(2.0, lambda t: 1.0 + 0.5 * t, lambda t: 0.0 * t)
    sigma1 = dtn_eigenvalues(p)[1]
    trial = p.nodes ** 2
    assert constrained_rayleigh_quotient(p, trial) >= sigma1 * (1.0 - 1e-12)


def test_rayleigh_quotient_rejects_zero_boundary():
    p = SturmProblem.constant(1.0)
    samples = np.zeros(p.nodes.size)
    samples[3] = 1.0
    with pytest.raises(DomainError):
        rayleigh_quotient(p, samples)


def test_unresolved_transition():
    mesh = MeshSpec(elements=16, transitions=((0.5, 0.51),))
    with pytest.raises(ResolutionError) as excinfo:
        dtn_eigenvalues(SturmProblem.constant(1.0, mesh=mesh))
    assert excinfo.value.interval == (0.5, 0.51)


def test_too_few_elements():
    with pytest.raises(ResolutionError):
        dtn_eigenvalues(SturmProblem.constant(1.0, mesh=MeshSpec(elements=8)))


def test_graded_mesh_resolves_short_segments():
    mesh = MeshSpec(elements=200, breakpoints=(0.001, 0.002))
    nodes = graded_mesh(1.0, mesh)
    assert nodes[0] == 0.0 and nodes[-1] == 1.0
    assert np.all(np.diff(nodes) > 0.0)
    assert np.count_nonzero((nodes > 0.001) & (nodes <= 0.002)) >= mesh.min_transition_elements


def test_problem_needs_a_steklov_end():
    with pytest.raises(DomainError):
        SturmProblem.constant(1.0, left=neumann(), right=neumann())
    with pytest.raises(DomainError):
        steklov(0.0)
    with pytest.raises(DomainError):
        dtn_eigenvalues(SturmProblem(1.0, lambda t: -_ones(t), lambda t: 0.0 * t))


def test_geometry():
    geom = collar_geometry(circle_spectrum(TWO_PI, 4), 1.0, 'mixed')
    assert geom.steklov_ends == (0,)
    assert geom.component_count == 1
    assert collar_geometry(point_spectrum(), 1.0).component_count == 2
    with pytest.raises(DomainError):
        collar_geometry(point_spectrum(), 1.0, 'dirichlet')
    with pytest.raises(DomainError):
        BaseGeometry(point_spectrum(), 1.0, 'neumann', 'neumann')


def test_base_spectrum_over_circle_modes():
    geom = collar_geometry(circle_spectrum(TWO_PI, 64), 1.0)
    spectrum = base_dtn_spectrum(geom, _ones, 0.0, _ones, top=3.0)
    assert spectrum.count_up_to(3.0) == 12
    expected = [0.0, math.tanh(0.5), 2.0 * math.tanh(1.0), 2.0]
    np.testing.assert_allclose(spectrum.values[:4], expected, rtol=1e-5, atol=1e-9)
    assert spectrum.multiplicities[:4].tolist() == [1, 2, 2, 1]
    assert spectrum.entries[1].sources[0].mu_mode == 1.0


def test_base_spectrum_threads_agree():
    geom = collar_geometry(circle_spectrum(TWO_PI, 64), 1.0)
    serial = base_dtn_spectrum(geom, _ones, 1.0, _ones, top=5.0)
    threaded = base_dtn_spectrum(geom, _ones, 1.0, _ones, top=5.0, workers=4)
    np.testing.assert_array_equal(serial.values, threaded.values)
    assert serial.multiplicities.tolist() == threaded.multiplicities.tolist()


def test_exhausted_cross_section():
    geom = collar_geometry(circle_spectrum(TWO_PI, 2), 1.0)
    with pytest.raises(CompletenessError):
        base_dtn_spectrum(geom, _ones, 0.0, _ones, top=10.0)


def test_base_spectrum_arguments():
    geom = collar_geometry(point_spectrum(), 1.0)
    with pytest.raises(DomainError):
        base_dtn_spectrum(geom, _ones, 0.0, _ones, top=0.0)
    with pytest.raises(DomainError):
        base_dtn_spectrum(geom, _ones, -1.0, _ones, top=1.0)


def test_merge_collects_sources():
    a = Source(0.0, 1, 1.0, 2, 0)
    b = Source(1.0, 2, 0.0, 1, 0)
    merged = merge_eigenvalues([(0.5, a), (0.5 * (1.0 + 1e-9), b), (2.0, a), (1e-14, b)])
    assert merged.values.tolist()[0] == 0.0
    assert merged.multiplicities.tolist() == [2, 4, 2]
    assert merged.entries[1].sources == (a, b)
    frame = merged.to_frame()
    assert frame.columns.tolist() == ['value', 'multiplicity', 'lambda_fiber', 'mu_mode', 'branch']
    assert len(frame) == 4


def test_assembled_blocks_of_unit_interval():
    assembled = assemble_full(SturmProblem.constant(1.0, mesh=MeshSpec(elements=100)))
    system = assembled.system
    assert system.a_bb.shape == (2, 2)
    assert system.a_ib.shape == (99, 2)
    assert system.a_ii.shape == (99, 99)
    # constants lie in the kernel of the pure stiffness
    assert np.max(np.abs(assembled.stiffness @ np.ones(101))) <= 1e-10


def test_stiffness_is_linear_in_w():
    mesh = MeshSpec(elements=100)
    unit = assemble_full(SturmProblem.constant(1.0, mesh=mesh)).stiffness
    double = assemble_full(SturmProblem.constant(1.0, w=2.0, mesh=mesh)).stiffness
    np.testing.assert_allclose(double.toarray(), 2.0 * unit.toarray(), rtol=1e-14)


def test_unit_potential_mass_sums_to_length():
    assembled = assemble_full(SturmProblem.constant(1.0, q=1.0, mesh=MeshSpec(elements=100)))
    assert np.sum(assembled.mass) == pytest.approx(1.0, rel=1e-12)


def test_zero_mode_is_constant():
    p = SturmProblem(1.0, lambda t: 1.0 + t, lambda t: 0.0 * t)
    eigen = dtn_eigen_sturm(p)
    assert abs(eigen.values[0]) <= 1e-8
    vector = eigen.vectors[:, 0]
    assert np.max(np.abs(vector - vector.mean())) <= 1e-6 * np.max(np.abs(vector))


@settings(max_examples=15, deadline=None)
@given(c=st.floats(min_value=0.1, max_value=10.0))
def test_joint_scaling_of_coefficients(c):
    w = lambda t: 1.0 + t
    q = lambda t: 2.0 + np.sin(t)
    reference = dtn_eigenvalues(SturmProblem(1.0, w, q))
    scaled = dtn_eigenvalues(SturmProblem(1.0, lambda t: c * w(t), lambda t: c * q(t)))
    np.testing.assert_allclose(scaled, c * reference, rtol=1e-9)


@pytest.mark.parametrize('elements', [100, 400, 1600])
def test_sorted_values_grow_with_fiber_eigenvalue(elements):
    geom = collar_geometry(circle_spectrum(TWO_PI, 64), 1.0)
    w = lambda t: 1.0 + t * (1.0 - t)
    inv_sq = lambda t: 1.0 / w(t) ** 2
    lowest = []
    for lam in (0.0, 0.5, 1.0, 2.0, 4.0):
        values = base_dtn_spectrum(geom, w, lam, inv_sq, top=6.0, mesh=MeshSpec(elements=elements)).flat_values()
        assert values.size >= 6
        lowest.append(values[:6])
    assert np.all(np.diff(np.array(lowest), axis=0) >= -1e-9)
