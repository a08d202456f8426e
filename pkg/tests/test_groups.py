import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schoenberg import DomainError, GroupAxiomError, NotHermitianError
from schoenberg.groups import (
    GroupFunction,
    bochner_check_cyclic,
    gram_matrix,
    make_cyclic,
    make_dihedral,
    make_from_table,
    make_product,
    make_trivial,
    pd_check_group,
    random_pd_function,
    read_group_table,
)

GROUPS = [make_trivial(), make_cyclic(2), make_cyclic(5), make_product(make_cyclic(2), make_cyclic(2)), make_dihedral(3), make_dihedral(4)]


def brute_axioms(g):
    k = g.order
    for a, b, c in itertools.product(range(k), repeat=3):
        assert g.mul[g.mul[a, b], c] == g.mul[a, g.mul[b, c]]
    for a in range(k):
        assert g.mul[a, g.inv[a]] == 0 == g.mul[g.inv[a], a]


def phi_from_spectrum(spec):
    """phi(u) = (1/k) sum_j s_j exp(2 pi i j u / k), summed directly."""
    k = len(spec)
    u = np.arange(k)
    return np.array([np.sum(spec * np.exp(2j * np.pi * np.arange(k) * v / k)) for v in u]) / k


class TestGroupSpec:
    @pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
    def test_axioms(self, g):
        brute_axioms(g)

    def test_cyclic_small(self):
        assert make_cyclic(1).order == 1
        z2 = make_cyclic(2)
        assert list(z2.inv) == [0, 1]

    def test_dihedral_non_abelian(self):
        g = make_dihedral(3)
        assert g.order == 6
        assert not np.array_equal(g.mul, g.mul.T)

    def test_klein_every_element_involutive(self):
        g = make_product(make_cyclic(2), make_cyclic(2))
        assert list(g.inv) == [0, 1, 2, 3]

    def test_quotient(self):
        g = make_cyclic(6)
        assert g.quotient(2, 5) == 3
        assert g.difference_table()[4, 1] == 3

    def test_closure_witness(self):
        with pytest.raises(GroupAxiomError) as info:
            make_from_table([[0, 1], [1, 2]])
        assert info.value.witness == (1, 1)

    def test_identity_witness(self):
        with pytest.raises(GroupAxiomError):
            make_from_table([[1, 0], [0, 1]])

    def test_associativity_witness(self):
        # a Latin square with identity 0 that is not associative (order 5 loop)
        table = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ]
        with pytest.raises(GroupAxiomError) as info:
            make_from_table(table)
        a, b, c = info.value.witness
        m = np.array(table)
        assert m[m[a, b], c] != m[a, m[b, c]]

    def test_inverse_witness(self):
        with pytest.raises(GroupAxiomError) as info:
            make_from_table([[0, 1, 2], [1, 1, 1], [2, 2, 2]])
        assert len(info.value.witness) >= 1

    def test_read_table(self, tmp_path):
        p = tmp_path / "z3.txt"
        p.write_text("3\n0 1 2\n1 2 0\n2 0 1\n")
        assert read_group_table(p) == make_cyclic(3)
        p.write_text("3\n0 1 2\n1 2 0\n")
        with pytest.raises(GroupAxiomError):
            read_group_table(p)

    def test_domain(self):
        with pytest.raises(DomainError):
            make_cyclic(0)


class TestGroupFunction:
    def test_arithmetic(self):
        g = make_cyclic(3)
        a = GroupFunction(g, [1, 2, 3])
        b = GroupFunction.constant(g, 2.0)
        assert (a + b).allclose([3, 4, 5])
        assert (a * b - a).allclose(a)
        assert (a / 2).allclose([0.5, 1, 1.5])
        with pytest.raises(DomainError):
            a + GroupFunction.zeros(make_cyclic(2))

    def test_character_is_pd(self):
        for k in (1, 2, 5, 8):
            for j in range(k):
                chi = GroupFunction.character(k, j)
                assert chi.is_hermitian()
                assert pd_check_group(chi).is_pd

    @pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
    def test_random_pd(self, g):
        rng = np.random.default_rng(1)
        for _ in range(10):
            phi = random_pd_function(g, rng)
            assert phi.is_hermitian(1e-12)
            assert phi.at_identity() == pytest.approx(1.0)
            assert pd_check_group(phi).is_pd

    def test_schur_product_closure(self):
        rng = np.random.default_rng(2)
        for g in GROUPS:
            a, b = random_pd_function(g, rng), random_pd_function(g, rng)
            assert pd_check_group(a * b).is_pd
            assert pd_check_group(a + b * 0.3).is_pd

    def test_bad_z3(self):
        phi = GroupFunction(make_cyclic(3), [1, -1, -1])
        rep = pd_check_group(phi)
        assert not rep.is_pd
        c = rep.witness
        assert np.real(np.vdot(c, gram_matrix(phi) @ c)) < 0
        spec, ok = bochner_check_cyclic(phi)
        assert not ok
        np.testing.assert_allclose(spec, [-1, 2, 2], atol=1e-14)

    def test_not_hermitian_is_not_a_verdict(self):
        phi = GroupFunction(make_cyclic(3), [1, 0.5j, 0.5j])
        with pytest.raises(NotHermitianError):
            pd_check_group(phi)
        with pytest.raises(NotHermitianError):
            bochner_check_cyclic(phi)


class TestBochnerAgreement:
    def test_two_hundred_random(self):
        rng = np.random.default_rng(20240917)
        verdicts = []
        for trial in range(200):
            k = int(rng.integers(1, 65))
            g = make_cyclic(k)
            mode = trial % 3
            if mode == 0:
                phi = random_pd_function(g, rng)
            else:
                mags = rng.uniform(0.05, 1.0, k)
                signs = np.where(rng.random(k) < (0.0 if mode == 1 else 0.3), -1.0, 1.0)
                phi = GroupFunction(g, phi_from_spectrum(mags * signs))
            gram = pd_check_group(phi, tol=1e-10).is_pd
            spec, bochner = bochner_check_cyclic(phi, k, tol=1e-10)
            assert gram == bochner, (trial, k)
            verdicts.append(gram)
        assert 50 < sum(verdicts) < 200

    @given(st.lists(st.floats(-1, 1).filter(lambda v: abs(v) > 1e-3), min_size=1, max_size=16))
    @settings(max_examples=60)
    def test_property(self, spec):
        phi = GroupFunction(make_cyclic(len(spec)), phi_from_spectrum(np.array(spec)))
        _, bochner = bochner_check_cyclic(phi)
        assert bochner == (min(spec) >= 0)
        assert pd_check_group(phi).is_pd == bochner
