import numpy as np
import pytest

from ddbtomo.bases import family
from ddbtomo.circuits import (
    Circuit,
    Gate,
    circuit_permutation,
    circuit_unitary,
    controlled_x,
    element_circuits,
    emit_gate_list,
    emit_qasm,
    expand_mcx,
    gate_count,
    inverse_shift_circuit,
    measurement_gates,
    measurement_unitary,
    power_shift_circuit,
    shift_circuit,
    simulate_circuit,
    spec_to_dict,
    synth_basis_circuit,
)


def perm_of(circ):
    return circuit_permutation(circ)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("X", 0, ((1, True),))  # X takes no controls
    with pytest.raises(ValueError):
        Gate("CX", 0, ())
    with pytest.raises(ValueError):
        Gate("CX", 0, ((0, True),))  # target reused as control
    with pytest.raises(ValueError):
        Gate("CCX", 2, ((0, True),))


def test_shift_circuit_decrements():
    for l in (1, 2, 3, 4):
        perm = perm_of(shift_circuit(l))
        d = 1 << l
        want = [(m - 1) % d for m in range(d)]
        assert list(perm) == want
        perm_inv = perm_of(inverse_shift_circuit(l))
        assert list(perm_inv) == [(m + 1) % d for m in range(d)]


def test_shift_circuit_structure_l3():
    # open-controlled cascade: borrow propagates from the low wire up
    gates = shift_circuit(3).gates
    assert gates[0] == Gate("MCX", 0, ((1, False), (2, False)))
    assert gates[1] == Gate("MCX", 1, ((2, False),))
    assert gates[2] == Gate("X", 2)


@pytest.mark.parametrize("l", list(range(1, 9)))
@pytest.mark.parametrize("mode", ["binary", "signed"])
def test_power_shift_exhaustive(l, mode):
    d = 1 << l
    for j in range(d):
        perm = perm_of(power_shift_circuit(l, j, mode))
        want = [(m - j) % d for m in range(d)]
        assert list(perm) == want, (l, j, mode)


def test_power_shift_single_high_bit_is_one_x():
    # j = 2^(l-1) reduces to a bare X on the top qubit
    c = power_shift_circuit(3, 4)
    assert c.gates == (Gate("X", 0),)


def test_signed_mode_uses_fewer_blocks_for_runs():
    # j = 7 = 8 - 1: signed form spends one inverse block plus the
    # dropped 2^3 digit instead of three binary blocks
    b = power_shift_circuit(3, 7, "binary")
    s = power_shift_circuit(3, 7, "signed")
    assert gate_count(s) <= gate_count(b)
    assert list(perm_of(s)) == list(perm_of(b))


@pytest.mark.parametrize("l", list(range(1, 9)))
def test_signed_never_worse(l):
    for j in range(1 << l):
        nb = gate_count(power_shift_circuit(l, j, "binary"))
        ns = gate_count(power_shift_circuit(l, j, "signed"))
        assert ns <= nb, (l, j)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
@pytest.mark.parametrize("mode", ["binary", "signed"])
def test_synthesized_circuits_match_family(n, mode):
    # the measurement unitary's conjugate rows are exactly the family
    # vectors, bit for bit, ordered by the outcome map
    d = 1 << n
    fam = family(d)
    for label in fam.labels():
        spec = synth_basis_circuit(n, label, mode)
        u = measurement_unitary(spec)
        want = np.zeros((d, d), dtype=complex)
        for out, vec in enumerate(spec.outcome_map):
            want[:, out] = fam[label].vectors[vec].dense()
        assert np.array_equal(u.conj().T, want), label


def test_synth_structure_n2():
    b1 = synth_basis_circuit(2, "B1")
    assert b1.circuit.gates == ()
    assert b1.pauli_layer == ("Z", "X")
    b2 = synth_basis_circuit(2, "B2")
    assert b2.circuit.gates == ()
    assert b2.pauli_layer == ("X", "Z")
    b3 = synth_basis_circuit(2, "B3")
    assert b3.circuit.gates == (Gate("CX", 1, ((0, True),)),)
    assert b3.pauli_layer == ("X", "Z")
    c3 = synth_basis_circuit(2, "C3")
    assert c3.pauli_layer == ("Y", "Z")
    b0 = synth_basis_circuit(2, "B0")
    assert b0.circuit.gates == () and b0.pauli_layer == ("Z", "Z")


def test_synth_rejects_bad_labels():
    with pytest.raises(ValueError):
        synth_basis_circuit(2, "B4")
    with pytest.raises(ValueError):
        synth_basis_circuit(2, "D1")
    with pytest.raises(ValueError):
        synth_basis_circuit(0, "B1")


def test_element_circuits_example():
    el = element_circuits(3, 2, 5)
    assert (el.s, el.shift) == (1, 3)
    assert el.outcome_plus == 2
    assert el.outcome_minus == 6
    assert el.diag.label == "B0"
    assert el.phi.label == "B7" and el.psi.label == "C7"


def test_element_circuits_top_pair_is_local():
    # (j, k) differing only in the last bit: a one-qubit readout
    el = element_circuits(3, 6, 7)
    assert (el.s, el.shift) == (3, 0)
    assert el.phi.circuit.gates == ()
    assert el.phi.pauli_layer == ("Z", "Z", "X")


def test_element_circuits_n2_antidiagonal():
    el = element_circuits(2, 0, 3)
    assert el.phi.label == "B3"
    assert el.outcome_plus == 0 and el.outcome_minus == 2


def test_element_circuits_probabilities_read_entry():
    from ddbtomo.linalg import random_rank_r_dm, rng_from

    n, d = 3, 8
    rho = random_rank_r_dm(d, d, rng_from(0, "elprob"))
    for (j, k) in [(0, 1), (1, 6), (2, 5), (0, 7), (4, 6)]:
        el = element_circuits(n, j, k)
        u_phi = measurement_unitary(el.phi)
        u_psi = measurement_unitary(el.psi)
        p_phi = np.real(np.einsum("oi,ij,oj->o", u_phi, rho, u_phi.conj()))
        p_psi = np.real(np.einsum("oi,ij,oj->o", u_psi, rho, u_psi.conj()))
        s = rho[j, j].real + rho[k, k].real
        got = (p_phi[el.outcome_plus] - 1j * p_psi[el.outcome_plus]) - (1 - 1j) / 2 * s
        assert abs(got - rho[j, k]) < 1e-12


def test_element_circuits_validate_pair():
    with pytest.raises(ValueError):
        element_circuits(2, 3, 1)
    with pytest.raises(ValueError):
        element_circuits(2, 1, 4)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_distinct_element_circuits_bound(n):
    # every pair reuses one of the 2^n - 1 family programs
    d = 1 << n
    seen = set()
    for j in range(d):
        for k in range(j + 1, d):
            el = element_circuits(n, j, k)
            seen.add(el.phi.label)
    assert len(seen) <= d - 1


def test_measurement_gates_layers():
    spec = synth_basis_circuit(2, "C3")
    prog = measurement_gates(spec)
    # permutation gates, then SDG+H on the Y wire
    assert prog.gates[-2:] == (Gate("SDG", 0), Gate("H", 0))
    spec = synth_basis_circuit(2, "B2")
    prog = measurement_gates(spec)
    assert prog.gates == (Gate("H", 0),)


def test_expand_mcx_small_cases_exact():
    # open controls and two-control gates expand without ancillas
    g = controlled_x([(0, False), (2, True)], 1)
    c = Circuit(3, (g,))
    ex = expand_mcx(c)
    assert ex.n_ancillas == 0
    assert all(gate.kind in ("X", "CCX") for gate in ex.gates)
    assert np.array_equal(perm_of(c), perm_of(ex))


def test_expand_mcx_three_controls():
    g = controlled_x([(0, True), (1, True), (2, True)], 3)
    c = Circuit(4, (g,))
    ex = expand_mcx(c)
    assert ex.n_ancillas == 1
    assert sum(gate.kind == "CCX" for gate in ex.gates) == 3
    # ancilla wires are appended, so they sit in the low-order bits
    pc, pe = perm_of(c), perm_of(ex)
    for m in range(16):
        assert pe[m << 1] == pc[m] << 1


def test_expand_mcx_preserves_permutation():
    for n, t in [(3, 5), (4, 9), (4, 13)]:
        spec = synth_basis_circuit(n, f"B{t}")
        ex = expand_mcx(spec.circuit)
        a = ex.n_ancillas
        pc, pe = perm_of(spec.circuit), perm_of(ex)
        for m in range(1 << n):
            out = pe[m << a]
            assert out & ((1 << a) - 1) == 0  # ancillas uncomputed
            assert out >> a == pc[m]


@pytest.mark.parametrize("n", list(range(1, 9)))
def test_gate_count_bound(n):
    # expanded elementary-gate count stays under 16 n^4 per program
    d = 1 << n
    bound = 16 * n**4
    for t in range(1, d):
        for flavor in ("B", "C"):
            prog = measurement_gates(synth_basis_circuit(n, f"{flavor}{t}"))
            assert gate_count(prog) <= bound, (n, flavor, t)


def test_gate_count_models():
    spec = synth_basis_circuit(4, "B9")
    prog = measurement_gates(spec)
    expanded = gate_count(prog)
    estimate = gate_count(prog, "barenco-estimate")
    assert len(prog.gates) <= expanded
    assert estimate >= len(prog.gates)
    with pytest.raises(ValueError):
        gate_count(prog, "nope")


def test_emit_gate_list_format():
    c = Circuit(3, (Gate("MCX", 2, ((0, True), (1, False))), Gate("H", 0)))
    text = emit_gate_list(c)
    assert text.splitlines() == ["MCX q2 ; c+ q0 c- q1", "H q0"]


def test_emit_qasm_header_and_gates():
    spec = synth_basis_circuit(2, "B3")
    text = emit_qasm(measurement_gates(spec))
    lines = text.splitlines()
    assert lines[0] == "OPENQASM 2.0;"
    assert 'include "qelib1.inc";' in lines
    assert "qreg q[2];" in lines
    assert "cx q[0],q[1];" in lines
    assert "h q[0];" in lines
    assert "measure q[0] -> c[0];" in lines
    no_meas = emit_qasm(measurement_gates(spec), measure=False)
    assert "measure" not in no_meas


def test_simulate_circuit_with_layer():
    # H then Z-read equals the B1 measurement on one qubit
    spec = synth_basis_circuit(1, "B1")
    u = measurement_unitary(spec)
    s = 1 / np.sqrt(2)
    assert np.array_equal(u, np.array([[s, s], [s, -s]], dtype=complex))
    spec = synth_basis_circuit(1, "C1")
    u = measurement_unitary(spec)
    want = np.array([[s, -1j * s], [s, 1j * s]], dtype=complex)
    assert np.array_equal(u, want)


def test_circuit_unitary_matches_permutation():
    c = shift_circuit(3)
    u = circuit_unitary(c)
    perm = perm_of(c)
    want = np.zeros((8, 8))
    want[perm, np.arange(8)] = 1.0
    assert np.array_equal(u, want.astype(complex))


def test_spec_to_dict_round_readable():
    spec = synth_basis_circuit(2, "B3")
    obj = spec_to_dict(spec)
    assert obj["label"] == "B3"
    assert obj["n"] == 2
    assert obj["pauli_layer"] == "XZ"
    assert obj["outcome_map"] == [0, 2, 1, 3]
    assert obj["gates"] == ["CX q1 ; c+ q0"]
    assert obj["gate_count_expanded"] == 2
