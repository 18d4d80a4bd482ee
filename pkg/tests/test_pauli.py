"""Pauli-sum parsing, dense matrices, expectations, and the LCU split."""

import numpy as np
import pytest

from qexpect import (
    LcuForm,
    ParseError,
    PauliSum,
    PauliTerm,
    ResourceLimitError,
    StateVector,
    expectation_exact,
    format_pauli_sum,
    lcu_normal_form,
    load_operator,
    parse_pauli_sum,
    state_from_amplitudes,
    to_matrix,
)
from qexpect.pauli import apply_pauli_sum, is_hermitian, term_matrix

from conftest import random_complex_state, random_pauli_sum

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


class TestParsing:
    def test_basic_terms_with_comments_and_blanks(self):
        op = parse_pauli_sum(
            """
            # quadrupole pieces
            -0.18144 I
            0.28394  X0   # off-diagonal
            0.18144  Z0
            """
        )
        assert op.n_qubits == 1
        assert op.identity_coefficient == -0.18144
        assert op.coefficient_of({0: "X"}) == 0.28394
        assert op.coefficient_of({0: "Z"}) == 0.18144

    def test_unicode_minus_accepted(self):
        op = parse_pauli_sum("−0.5 Z0")
        assert op.coefficient_of({0: "Z"}) == -0.5

    def test_multi_factor_term(self):
        op = parse_pauli_sum("0.25 X0 Y2 Z3")
        assert op.n_qubits == 4
        assert op.coefficient_of({0: "X", 2: "Y", 3: "Z"}) == 0.25

    def test_duplicate_terms_merge(self):
        op = parse_pauli_sum("0.5 X0\n0.25 X0")
        assert len(op.terms) == 1
        assert op.coefficient_of({0: "X"}) == 0.75

    def test_cancelled_terms_vanish(self):
        op = parse_pauli_sum("0.5 X0\n-0.5 X0\n1.0 I")
        assert op.coefficient_of({0: "X"}) == 0.0
        assert len(op.terms) == 1

    def test_explicit_register_width(self):
        op = parse_pauli_sum("1.0 Z0", n_qubits=3)
        assert op.n_qubits == 3

    def test_width_smaller_than_terms_rejected(self):
        with pytest.raises(ValueError, match="register is 1"):
            parse_pauli_sum("1.0 Z2", n_qubits=1)

    def test_bad_coefficient_reports_line(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_pauli_sum("1.0 Z0\nabc X0")

    def test_bad_factor_rejected(self):
        with pytest.raises(ParseError, match="bad factor"):
            parse_pauli_sum("1.0 W0")

    def test_factor_without_index_rejected(self):
        with pytest.raises(ParseError, match="needs a qubit index"):
            parse_pauli_sum("1.0 X")

    def test_repeated_qubit_in_term_rejected(self):
        with pytest.raises(ParseError, match="repeated"):
            parse_pauli_sum("1.0 X0 Z0")

    def test_format_round_trips_bit_exactly(self, rng):
        op = random_pauli_sum(rng, 3, 6, include_identity=True)
        again = parse_pauli_sum(format_pauli_sum(op), n_qubits=op.n_qubits)
        assert again == op

    def test_load_operator_from_file(self, tmp_path):
        path = tmp_path / "op.ops"
        path.write_text("0.5 X0\n-0.25 Z1\n", encoding="utf-8")
        op = load_operator(path)
        assert op.n_qubits == 2
        assert op.coefficient_of({1: "Z"}) == -0.25


class TestAlgebra:
    def test_from_terms_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="non-finite"):
            PauliSum.from_terms([PauliTerm(float("nan"), ())])

    def test_equality_is_order_insensitive(self):
        a = parse_pauli_sum("0.5 X0\n0.25 Z1")
        b = parse_pauli_sum("0.25 Z1\n0.5 X0")
        assert a == b
        assert hash(a) == hash(b)

    def test_term_label_and_identity(self):
        assert PauliTerm(1.0, ()).is_identity
        assert PauliTerm(1.0, ()).label() == "I"
        assert PauliTerm(2.0, ((0, "X"), (2, "Z"))).label() == "X0 Z2"

    def test_is_hermitian_for_real_sums(self, rng):
        op = random_pauli_sum(rng, 3, 5)
        assert is_hermitian(op)


class TestDenseMatrices:
    def test_term_matrix_kron_order(self):
        # qubit 0 is the least significant factor, so X0 on 2 qubits is I (x) X
        assert np.array_equal(
            term_matrix(PauliTerm(1.0, ((0, "X"),)), 2), np.kron(I2, X)
        )
        assert np.array_equal(
            term_matrix(PauliTerm(2.0, ((1, "Y"),)), 2), 2 * np.kron(Y, I2)
        )

    def test_to_matrix_sums_terms(self):
        op = parse_pauli_sum("0.5 X0\n0.25 Z0 Z1")
        expected = 0.5 * np.kron(I2, X) + 0.25 * np.kron(Z, Z)
        assert np.allclose(to_matrix(op), expected)

    def test_to_matrix_is_hermitian(self, rng):
        m = to_matrix(random_pauli_sum(rng, 3, 6, include_identity=True))
        assert np.allclose(m, m.conj().T)

    def test_matrix_cap_enforced(self):
        with pytest.raises(ResourceLimitError, match="cap"):
            to_matrix(parse_pauli_sum("1.0 Z12"))

    def test_apply_pauli_sum_matches_dense(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 5))
            op = random_pauli_sum(rng, n, 6, include_identity=True)
            vec = random_complex_state(rng, n)
            out = apply_pauli_sum(op, StateVector(n, vec.copy()))
            assert np.allclose(out, to_matrix(op) @ vec, atol=1e-12)

    def test_expectation_matches_dense_quadratic_form(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 5))
            op = random_pauli_sum(rng, n, 6, include_identity=True)
            vec = random_complex_state(rng, n)
            got = expectation_exact(op, StateVector(n, vec.copy()))
            want = np.vdot(vec, to_matrix(op) @ vec).real
            assert got == pytest.approx(want, abs=1e-12)

    def test_reference_expectation_on_bundled_operator(self):
        op = parse_pauli_sum("-0.18144 I\n0.28394 X0\n0.18144 Z0")
        st = state_from_amplitudes([0.2759, 0.9611], normalize=True)
        assert expectation_exact(op, st) == pytest.approx(
            -0.1846443826982403, abs=1e-14
        )


class TestLcuNormalForm:
    def test_split_keeps_identity_by_default(self):
        op = parse_pauli_sum("-0.18144 I\n0.28394 X0\n0.18144 Z0")
        form = lcu_normal_form(op)
        assert form.identity_offset == 0.0
        assert form.lam == pytest.approx(0.18144 + 0.28394 + 0.18144)
        assert all(b > 0 for b in form.betas)
        assert {u.coefficient for u in form.unitaries} <= {1.0, -1.0}

    def test_drop_identity_moves_it_to_the_offset(self):
        op = parse_pauli_sum("-0.18144 I\n0.28394 X0\n0.18144 Z0")
        form = lcu_normal_form(op, drop_identity=True)
        assert form.identity_offset == -0.18144
        assert form.lam == pytest.approx(0.46538, abs=1e-12)
        assert len(form.betas) == 2

    def test_signs_absorbed_into_unitaries(self):
        form = lcu_normal_form(parse_pauli_sum("-0.7 Y0"))
        assert form.betas == (0.7,)
        assert form.unitaries[0].coefficient == -1.0
        assert form.unitaries[0].factors == ((0, "Y"),)

    def test_reconstruct_round_trips(self, rng):
        for _ in range(10):
            op = random_pauli_sum(rng, 3, 6, include_identity=True)
            for drop in (False, True):
                form = lcu_normal_form(op, drop_identity=drop)
                assert form.reconstruct() == op

    def test_empty_operator_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            lcu_normal_form(PauliSum.from_terms([], n_qubits=1))

    def test_pure_identity_rejected_when_dropped(self):
        with pytest.raises(ValueError, match="pure identity"):
            lcu_normal_form(parse_pauli_sum("2.0 I"), drop_identity=True)

    def test_pure_identity_allowed_as_unitary_slot(self):
        form = lcu_normal_form(parse_pauli_sum("2.0 I"))
        assert isinstance(form, LcuForm)
        assert form.betas == (2.0,)
        assert form.unitaries[0].is_identity
