"""Gate-level synthesis of the measurement bases for dimension 2^n.

Every basis in the family diagonalizes as one local X or Y readout after
a classical permutation built from controlled cyclic shifts.  The core
block is the decrement (m -> m-1 mod 2^l), an open-control cascade on l
qubits (most significant wire first):

    q0 --X--------------------   flips while all lower wires read 0
    q1 --o----X-----------
    q2 --o----o----X------
    q3 --o----o----o----X-      (l = 4; o = open control)

written bottom-up as gates: MCX(q0; q1- q2- q3-), MCX(q1; q2- q3-),
MCX(q2; q3-), X(q3).  Powers (m -> m-j) decompose blockwise because the
2^b-th power of the decrement acts as a smaller decrement on the top
l-b wires.  Measurement synthesis then recurses over the basis label:
low labels act inside each half, the middle label is a bare Hadamard
readout on the top wire, and high labels conjugate by a controlled
shift power before the top-wire readout.

Qubit 0 is the most significant wire.  Ancillas introduced by
``expand_mcx`` occupy wires n_qubits..n_qubits+n_ancillas-1, start in
|0>, and are returned to |0>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bases import INV_SQRT2

_ONE_QUBIT_KINDS = ("X", "H", "S", "SDG")
_X_KINDS = ("X", "CX", "CCX", "MCX")
BARENCO_CONSTANT = 8  # coarse quadratic model: ~8 m^2 elementary gates per m-control X


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    controls: tuple[tuple[int, bool], ...] = ()  # (qubit, True = closed)

    def __post_init__(self):
        if self.kind in _ONE_QUBIT_KINDS:
            if self.controls:
                raise ValueError(f"{self.kind} takes no controls")
        elif self.kind == "CX":
            if len(self.controls) != 1:
                raise ValueError("CX takes exactly one control")
        elif self.kind == "CCX":
            if len(self.controls) != 2:
                raise ValueError("CCX takes exactly two controls")
        elif self.kind == "MCX":
            if not self.controls:
                raise ValueError("MCX takes at least one control")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        wires = [self.target] + [q for q, _ in self.controls]
        if len(set(wires)) != len(wires):
            raise ValueError(f"repeated wire in {self.kind} gate")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    n_ancillas: int = 0


def controlled_x(controls, target: int) -> Gate:
    """Controlled-X with canonical kind: CX/CCX when all controls are
    closed and small, MCX otherwise."""
    cs = tuple(sorted(controls))
    if all(closed for _, closed in cs):
        if len(cs) == 1:
            return Gate("CX", target, cs)
        if len(cs) == 2:
            return Gate("CCX", target, cs)
    return Gate("MCX", target, cs)


def shift_circuit(l: int) -> Circuit:
    """Cyclic decrement m -> (m - 1) mod 2^l on l qubits."""
    if l < 1:
        raise ValueError(f"need at least one qubit, got {l}")
    gates = []
    for t in range(l - 1):
        gates.append(controlled_x(((q, False) for q in range(t + 1, l)), t))
    gates.append(Gate("X", l - 1))
    return Circuit(l, tuple(gates))


def inverse_shift_circuit(l: int) -> Circuit:
    """Cyclic increment: the decrement cascade reversed (every gate is
    its own inverse)."""
    return Circuit(l, tuple(reversed(shift_circuit(l).gates)))


def _naf_digits(j: int) -> list[tuple[int, int]]:
    # non-adjacent signed-digit form, least significant position first
    digits = []
    pos = 0
    while j:
        if j & 1:
            z = 2 - (j & 3)
            digits.append((pos, z))
            j -= z
        j >>= 1
        pos += 1
    return digits


def power_shift_circuit(l: int, j: int, mode: str = "binary") -> Circuit:
    """m -> (m - j) mod 2^l from shift blocks, one per digit of j.

    The 2^b-th power of the decrement is the decrement on the top l-b
    qubits, so "binary" places one block per set bit of j.  "signed"
    uses the non-adjacent signed-digit form (digits at or above position
    l drop out mod 2^l), spending inverse blocks on -1 digits; it never
    needs more gates than binary.  Blocks commute; they are emitted from
    the largest stride down.
    """
    if l < 1:
        raise ValueError(f"need at least one qubit, got {l}")
    j %= 1 << l
    gates: list[Gate] = []
    if mode == "binary":
        picks = [(b, 1) for b in range(l) if (j >> b) & 1]
    elif mode in ("signed", "signed-digit"):
        picks = [(b, s) for b, s in _naf_digits(j) if b < l]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for b, sign in sorted(picks, reverse=True):
        block = shift_circuit(l - b) if sign > 0 else inverse_shift_circuit(l - b)
        gates.extend(block.gates)
    return Circuit(l, tuple(gates))


@dataclass(frozen=True)
class MeasurementSpec:
    """A measurement program: permutation circuit, then one-qubit Pauli
    readouts.  outcome_map[m] is the family vector index that outcome
    bitstring m projects onto."""

    n: int
    label: str
    circuit: Circuit
    pauli_layer: tuple[str, ...]
    outcome_map: tuple[int, ...]


def _measure_gates(n: int, t: int, off: int, mode: str):
    half = 1 << (n - 1)
    if t == half:
        return [], off
    if t < half:
        return _measure_gates(n - 1, t, off + 1, mode)
    base = power_shift_circuit(n - 1, t - half, mode)
    gates = []
    for g in base.gates:
        ctrls = tuple((q + off + 1, pol) for q, pol in g.controls) + ((off, True),)
        gates.append(controlled_x(ctrls, g.target + off + 1))
    return gates, off


def _outcome_map(n: int, t: int) -> tuple[int, ...]:
    half = 1 << (n - 1)
    if n > 1 and t < half:
        sub = _outcome_map(n - 1, t)
        return sub + tuple(half + v for v in sub)
    # crossed (and the base case): outcome (b, s) reads pair s, sign b
    return tuple(2 * s for s in range(half)) + tuple(2 * s + 1 for s in range(half))


def synth_basis_circuit(n: int, label: str, mode: str = "binary") -> MeasurementSpec:
    """Measurement program for one family basis of dimension 2^n."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    d = 1 << n
    if label == "B0":
        return MeasurementSpec(n, label, Circuit(n, ()), ("Z",) * n, tuple(range(d)))
    flavor, t_text = label[0], label[1:]
    if flavor not in ("B", "C") or not t_text.isdigit():
        raise ValueError(f"bad basis label {label!r}")
    t = int(t_text)
    if not 1 <= t <= d - 1:
        raise ValueError(f"label index {t} outside 1..{d - 1}")
    gates, active = _measure_gates(n, t, 0, mode)
    layer = ["Z"] * n
    layer[active] = "X" if flavor == "B" else "Y"
    return MeasurementSpec(n, label, Circuit(n, tuple(gates)), tuple(layer), _outcome_map(n, t))


@dataclass(frozen=True)
class ElementSpecs:
    """The three measurement programs that determine one matrix entry.

    s is the 1-based position of the first differing bit of j and k
    (most significant = 1); shift is the cyclic offset between their
    suffixes.  Outcome ``outcome_plus`` (the bits of j) of the phi/psi
    programs reads the + vector of the pair, ``outcome_minus`` the -
    vector, and the diagonal program reads rho_jj, rho_kk at outcomes
    j and k.
    """

    n: int
    j: int
    k: int
    s: int
    shift: int
    diag: MeasurementSpec
    phi: MeasurementSpec
    psi: MeasurementSpec
    outcome_plus: int
    outcome_minus: int


def element_circuits(n: int, j: int, k: int, mode: str = "binary") -> ElementSpecs:
    """Measurement programs targeting the single entry rho_jk."""
    d = 1 << n
    if not 0 <= j < k < d:
        raise ValueError(f"need 0 <= j < k < {d}, got ({j}, {k})")
    p = (j ^ k).bit_length() - 1  # integer bit position of the first difference
    mask = (1 << p) - 1
    shift = ((k & mask) - (j & mask)) % (1 << p) if p else 0
    t = (1 << p) + shift
    return ElementSpecs(
        n=n,
        j=j,
        k=k,
        s=n - p,
        shift=shift,
        diag=synth_basis_circuit(n, "B0", mode),
        phi=synth_basis_circuit(n, f"B{t}", mode),
        psi=synth_basis_circuit(n, f"C{t}", mode),
        outcome_plus=j,
        outcome_minus=j | (1 << p),
    )


def measurement_gates(spec: MeasurementSpec) -> Circuit:
    """Permutation circuit plus the basis-change gates of the readout
    layer (X: H; Y: SDG then H), as one flat circuit."""
    gates = list(spec.circuit.gates)
    for q, axis in enumerate(spec.pauli_layer):
        if axis == "X":
            gates.append(Gate("H", q))
        elif axis == "Y":
            gates.append(Gate("SDG", q))
            gates.append(Gate("H", q))
    return Circuit(spec.circuit.n_qubits, tuple(gates), spec.circuit.n_ancillas)


def expand_mcx(c: Circuit) -> Circuit:
    """Rewrite onto {X, H, S, SDG, CX, CCX} with closed controls only.

    Open controls are conjugated by X.  An MCX with m >= 3 controls uses
    m-2 clean ancillas and 2(m-2)+1 Toffolis (an AND ladder, the middle
    Toffoli, and the uncomputation).  All expansions share one ancilla
    pool appended after the existing wires.
    """
    pool = 0
    base = c.n_qubits + c.n_ancillas
    out: list[Gate] = []
    for g in c.gates:
        if not g.controls:
            out.append(g)
            continue
        opens = [q for q, closed in g.controls if not closed]
        ctrl = [q for q, _ in g.controls]
        m = len(ctrl)
        for q in opens:
            out.append(Gate("X", q))
        if m == 1:
            out.append(Gate("CX", g.target, ((ctrl[0], True),)))
        elif m == 2:
            out.append(controlled_x(((ctrl[0], True), (ctrl[1], True)), g.target))
        else:
            need = m - 2
            pool = max(pool, need)
            anc = [base + i for i in range(need)]
            compute = [controlled_x(((ctrl[0], True), (ctrl[1], True)), anc[0])]
            for i in range(2, m - 1):
                compute.append(controlled_x(((ctrl[i], True), (anc[i - 2], True)), anc[i - 1]))
            out.extend(compute)
            out.append(controlled_x(((ctrl[m - 1], True), (anc[-1], True)), g.target))
            out.extend(reversed(compute))
        for q in opens:
            out.append(Gate("X", q))
    return Circuit(c.n_qubits, tuple(out), c.n_ancillas + pool)


def gate_count(c: Circuit, model: str = "expanded") -> int:
    """"expanded" counts gates after expand_mcx; "barenco-estimate"
    scores each MCX as BARENCO_CONSTANT * m^2 without ancillas."""
    if model == "expanded":
        return len(expand_mcx(c).gates)
    if model == "barenco-estimate":
        total = 0
        for g in c.gates:
            if g.kind == "MCX":
                total += BARENCO_CONSTANT * len(g.controls) ** 2
            else:
                total += 1
        return total
    raise ValueError(f"unknown count model {model!r}")


def _wires(c: Circuit) -> int:
    return c.n_qubits + c.n_ancillas


def _x_condition(state: np.ndarray, g: Gate, width: int) -> np.ndarray:
    cond = np.ones(state.shape, dtype=bool)
    for q, closed in g.controls:
        bit = (state >> (width - 1 - q)) & 1
        cond &= (bit == 1) if closed else (bit == 0)
    return cond


def circuit_permutation(c: Circuit) -> np.ndarray:
    """table[input] = output over the full register, for circuits made
    of X-type gates only."""
    width = _wires(c)
    if width > 16:
        raise ValueError(f"permutation simulation capped at 16 wires, got {width}")
    state = np.arange(1 << width)
    for g in c.gates:
        if g.kind not in _X_KINDS:
            raise ValueError(f"{g.kind} gate breaks the permutation structure")
        state = np.where(_x_condition(state, g, width), state ^ (1 << (width - 1 - g.target)), state)
    return state


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense unitary over the full register (capped at 8 wires)."""
    width = _wires(c)
    if width > 8:
        raise ValueError(f"unitary simulation capped at 8 wires, got {width}")
    dim = 1 << width
    u = np.eye(dim, dtype=complex)
    idx = np.arange(dim)
    for g in c.gates:
        if g.kind in _X_KINDS:
            perm = np.where(_x_condition(idx, g, width), idx ^ (1 << (width - 1 - g.target)), idx)
            u = u[perm, :]
            continue
        mask = 1 << (width - 1 - g.target)
        hi = idx[(idx & mask) != 0]
        if g.kind == "S":
            u[hi, :] *= 1j
        elif g.kind == "SDG":
            u[hi, :] *= -1j
        elif g.kind == "H":
            lo = hi ^ mask
            a, b = u[lo, :], u[hi, :]
            u[lo, :] = (a + b) * INV_SQRT2
            u[hi, :] = (a - b) * INV_SQRT2
        else:
            raise ValueError(f"cannot simulate gate kind {g.kind!r}")
    return u


def _ancilla_block(u: np.ndarray, n: int, width: int) -> np.ndarray:
    # restrict to ancillas |0>, checking the circuit never leaks into them
    idx = np.arange(1 << width)
    anc_mask = (1 << (width - n)) - 1
    zero = idx[(idx & anc_mask) == 0]
    nonzero = idx[(idx & anc_mask) != 0]
    if np.any(u[np.ix_(nonzero, zero)] != 0):
        raise ValueError("circuit leaves the ancillas dirty")
    return u[np.ix_(zero, zero)]


def simulate_circuit(c: Circuit, layer: tuple[str, ...] | None = None) -> np.ndarray:
    """Permutation table for X-only circuits, dense unitary otherwise.

    With a readout layer, returns the 2^n x 2^n measurement unitary M
    (layer applied after the circuit): outcome probabilities are
    diag(M rho M^dagger) and column m of M^dagger is the measured
    vector for outcome m.
    """
    if layer is None:
        if all(g.kind in _X_KINDS for g in c.gates):
            return circuit_permutation(c)
        return circuit_unitary(c)
    if len(layer) != c.n_qubits:
        raise ValueError("layer length must match qubit count")
    u = circuit_unitary(c)
    if c.n_ancillas:
        u = _ancilla_block(u, c.n_qubits, _wires(c))
    n = c.n_qubits
    idx = np.arange(1 << n)
    for q, axis in enumerate(layer):
        if axis == "Z":
            continue
        mask = 1 << (n - 1 - q)
        hi = idx[(idx & mask) != 0]
        if axis == "Y":
            u[hi, :] *= -1j
        elif axis != "X":
            raise ValueError(f"unknown layer axis {axis!r}")
        lo = hi ^ mask
        a, b = u[lo, :], u[hi, :]
        u[lo, :] = (a + b) * INV_SQRT2
        u[hi, :] = (a - b) * INV_SQRT2
    return u


def measurement_unitary(spec: MeasurementSpec) -> np.ndarray:
    return simulate_circuit(spec.circuit, spec.pauli_layer)


def emit_gate_list(c: Circuit) -> str:
    """One gate per line: kind, target, then controls as c+/c- wires."""
    lines = []
    for g in c.gates:
        line = f"{g.kind} q{g.target}"
        if g.controls:
            line += " ; " + " ".join(
                f"c{'+' if closed else '-'} q{q}" for q, closed in g.controls
            )
        lines.append(line)
    return "\n".join(lines)


def emit_qasm(c: Circuit, measure: bool = True) -> str:
    """OPENQASM 2.0 for the expanded circuit (x/h/s/sdg/cx/ccx only)."""
    e = expand_mcx(c)
    width = _wires(e)
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{width}];",
    ]
    if measure:
        lines.append(f"creg c[{e.n_qubits}];")
    for g in e.gates:
        ctrl = [q for q, _ in g.controls]
        if g.kind == "CX":
            lines.append(f"cx q[{ctrl[0]}],q[{g.target}];")
        elif g.kind == "CCX":
            lines.append(f"ccx q[{ctrl[0]}],q[{ctrl[1]}],q[{g.target}];")
        else:
            lines.append(f"{g.kind.lower()} q[{g.target}];")
    if measure:
        for q in range(e.n_qubits):
            lines.append(f"measure q[{q}] -> c[{q}];")
    return "\n".join(lines) + "\n"


def spec_to_dict(spec: MeasurementSpec) -> dict:
    return {
        "n": spec.n,
        "label": spec.label,
        "pauli_layer": "".join(spec.pauli_layer),
        "gates": emit_gate_list(spec.circuit).splitlines(),
        "outcome_map": list(spec.outcome_map),
        "gate_count_expanded": gate_count(measurement_gates(spec)),
    }
