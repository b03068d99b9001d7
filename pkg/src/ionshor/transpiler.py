"""Lowering to trapped-ion natives: R(theta, phi) rotations and XX(chi).

The pipeline has four steps:

  1. expand SWAP, Fredkin and CR_k over {Toffoli, CNOT, single-qubit};
  2. replace each Toffoli by the controlled-sqrt(X) block
     CV(b,t) CNOT(a,b) CV'(b,t) CNOT(a,b) CV(a,t);
  3. replace CNOT / CV / CV' by one XX(pi/4) / XX(pi/8) conjugated with
     fixed single-qubit gates (identities below, exact including phase);
  4. multiply every maximal run of single-qubit gates on a wire into one
     unitary and emit it as at most two R rotations via the closed-form
     decomposition U = e^{id} R(-pi, -c-pi/2) R(2b+pi, a-c-pi/2).

Phases are tracked, not discarded: the identities in step 3 are exact and
step 4 accumulates each d into NativeProgram.global_phase, so the emitted
program times e^{i phase} reproduces the source unitary to float precision.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .circuit import (
    CNOT, CV, CV_INV, R, TOFFOLI, U1, XX,
    Circuit, Gate, GateKind, gate_matrix,
)

__all__ = [
    "NativeProgram", "UnitaryParams", "decompose_unitary", "reconstruct",
    "lower_toffoli", "lower_two_qubit", "merge_singles", "transpile",
]

_SINGLE_KINDS = frozenset({GateKind.X, GateKind.H, GateKind.U1, GateKind.R})

# Primitive 2x2 blocks the step-3 identities are assembled from.
_I2 = np.eye(2, dtype=complex)
_PZ = np.array([[1, 0], [0, -1]], dtype=complex)
_HM = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _phase(alpha: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * alpha)]).astype(complex)


# CNOT = e^{i pi/4} (RZ(pi/2) H Z (x) RX(pi/2)) XX(pi/4) (Z H (x) I)
_CNOT_PRE_C = _PZ @ _HM
_CNOT_POST_C = cmath.exp(0.25j * math.pi) * (_rz(math.pi / 2) @ _HM @ _PZ)
_CNOT_POST_T = _rx(math.pi / 2)
# CV = (P(pi/4) H Z (x) RX(pi/4)) XX(pi/8) (Z H (x) I)
_CV_PRE_C = _PZ @ _HM
_CV_POST_C = _phase(math.pi / 4) @ _HM @ _PZ
_CV_POST_T = _rx(math.pi / 4)
# CV' = (P(-pi/4) H (x) RX(-pi/4)) XX(pi/8) (H (x) I)
_CVINV_PRE_C = _HM
_CVINV_POST_C = _phase(-math.pi / 4) @ _HM
_CVINV_POST_T = _rx(-math.pi / 4)


def lower_toffoli(circuit: Circuit) -> Circuit:
    """Remove Toffoli and Fredkin gates.

    Fredkin first becomes CNOT-conjugated Toffoli; each Toffoli then becomes
    two CNOTs and three controlled-sqrt(X) gates.
    """
    expanded: list[Gate] = []
    for g in circuit.gates:
        if g.kind is GateKind.FREDKIN:
            c, t0, t1 = g.wires
            expanded += [CNOT(t1, t0), TOFFOLI(c, t0, t1), CNOT(t1, t0)]
        else:
            expanded.append(g)
    lowered: list[Gate] = []
    for g in expanded:
        if g.kind is GateKind.TOFFOLI:
            a, b, t = g.wires
            lowered += [CV(b, t), CNOT(a, b), CV_INV(b, t), CNOT(a, b), CV(a, t)]
        else:
            lowered.append(g)
    return Circuit(circuit.width, lowered, circuit.layout)


def _crk_block(g: Gate) -> list[Gate]:
    c, t = g.wires
    phi = 2 * math.pi / 2 ** int(g.params[0])
    if g.kind is GateKind.CRKINV:
        phi = -phi
    return [CNOT(c, t), U1(t, _phase(-phi / 2)), CNOT(c, t),
            U1(t, _phase(phi / 2)), U1(c, _phase(phi / 2))]


XXSigns = Mapping[frozenset, int] | int | None


def _pair_sign(xx_sign: XXSigns, w0: int, w1: int) -> int:
    if xx_sign is None:
        return 1
    if isinstance(xx_sign, Mapping):
        return 1 if xx_sign.get(frozenset((w0, w1)), 1) >= 0 else -1
    return 1 if xx_sign >= 0 else -1


def lower_two_qubit(circuit: Circuit, xx_sign: XXSigns = None) -> Circuit:
    """Map every two-qubit gate onto a single XX block.

    ``xx_sign`` declares which chi sign the hardware offers, either globally
    or as a mapping frozenset({w0, w1}) -> +-1 per qubit pair (default all
    positive).  An XX whose angle has the unavailable sign is emitted as
    XX(-chi) conjugated by Z on the first wire.
    """
    expanded: list[Gate] = []
    for g in circuit.gates:
        if g.kind is GateKind.SWAP:
            w0, w1 = g.wires
            expanded += [CNOT(w0, w1), CNOT(w1, w0), CNOT(w0, w1)]
        elif g.kind in (GateKind.CRK, GateKind.CRKINV):
            expanded += _crk_block(g)
        else:
            expanded.append(g)
    lowered: list[Gate] = []

    def emit_xx(w0: int, w1: int, chi: float) -> None:
        if chi * _pair_sign(xx_sign, w0, w1) < 0:
            lowered.append(U1(w0, _PZ))
            lowered.append(XX(w0, w1, -chi))
            lowered.append(U1(w0, _PZ))
        else:
            lowered.append(XX(w0, w1, chi))

    for g in expanded:
        if g.kind is GateKind.CNOT:
            c, t = g.wires
            lowered.append(U1(c, _CNOT_PRE_C))
            emit_xx(c, t, math.pi / 4)
            lowered += [U1(c, _CNOT_POST_C), U1(t, _CNOT_POST_T)]
        elif g.kind is GateKind.CV:
            c, t = g.wires
            lowered.append(U1(c, _CV_PRE_C))
            emit_xx(c, t, math.pi / 8)
            lowered += [U1(c, _CV_POST_C), U1(t, _CV_POST_T)]
        elif g.kind is GateKind.CVINV:
            c, t = g.wires
            lowered.append(U1(c, _CVINV_PRE_C))
            emit_xx(c, t, math.pi / 8)
            lowered += [U1(c, _CVINV_POST_C), U1(t, _CVINV_POST_T)]
        elif g.kind is GateKind.XX:
            emit_xx(g.wires[0], g.wires[1], g.params[0])
        elif g.kind in _SINGLE_KINDS:
            lowered.append(g)
        else:
            raise ValueError(f"cannot lower {g.kind.value} to the native set")
    return Circuit(circuit.width, lowered, circuit.layout)


@dataclass(frozen=True, slots=True)
class UnitaryParams:
    """Angles (a, b, c, d) with U = e^{id} R(-pi,-c-pi/2) R(2b+pi,a-c-pi/2)."""

    a: float
    b: float
    c: float
    d: float


def decompose_unitary(U) -> UnitaryParams:
    """Closed-form angles for a 2x2 unitary; b always lands in [0, pi/2].

    The target form is U = e^{id} [[e^{ia} cos b, e^{ic} sin b],
    [-e^{-ic} sin b, e^{-ia} cos b]] with b = arccos|u00|, so in exact
    arithmetic a = (phi00-phi11)/2, c = (phi00-2*phi10+phi11)/2 - pi and
    d = (phi00+phi11)/2 with phi_ij = Arg(u_ij).  On float inputs the
    arguments of nearly vanishing entries magnify the unitarity defect, so
    the angles are anchored to whichever pair dominates (the same values up
    to that defect, by the unitarity constraint linking the two columns);
    the phase of a genuinely vanishing pair is free and is pinned to 0.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {U.shape}")
    err = np.abs(U.conj().T @ U - _I2).max()
    if err > 1e-10:
        raise ValueError(f"matrix is not unitary (deviation {err:.3g})")
    abs00, abs01 = abs(U[0, 0]), abs(U[0, 1])
    # atan2 evaluates arccos|u00| without the endpoint ill-conditioning,
    # since |u00|^2 + |u01|^2 = 1.
    b = math.atan2(abs01, abs00)
    if b <= math.pi / 4:         # diagonal pair dominates
        phi00, phi11 = cmath.phase(U[0, 0]), cmath.phase(U[1, 1])
        a = (phi00 - phi11) / 2
        d = (phi00 + phi11) / 2
        c = cmath.phase(U[0, 1]) - d if abs01 > 1e-12 else 0.0
    else:                        # off-diagonal pair dominates
        phi01, phi10 = cmath.phase(U[0, 1]), cmath.phase(U[1, 0])
        c = (phi01 - phi10 - math.pi) / 2
        d = (phi01 + phi10 + math.pi) / 2
        a = cmath.phase(U[0, 0]) - d if abs00 > 1e-12 else 0.0
    return UnitaryParams(a, b, c, d)


def reconstruct(params: UnitaryParams) -> np.ndarray:
    """Matrix e^{id} R(-pi,-c-pi/2) R(2b+pi,a-c-pi/2) for the given angles."""
    a, b, c, d = params.a, params.b, params.c, params.d
    first = gate_matrix(R(0, 2 * b + math.pi, a - c - math.pi / 2))
    second = gate_matrix(R(0, -math.pi, -c - math.pi / 2))
    return cmath.exp(1j * d) * second @ first


@dataclass(frozen=True)
class NativeProgram:
    """Sequence of R/XX gates plus the accumulated global phase."""

    width: int
    gates: tuple[Gate, ...]
    global_phase: float = 0.0

    def __post_init__(self) -> None:
        for g in self.gates:
            if g.kind not in (GateKind.R, GateKind.XX):
                raise ValueError(f"native programs hold only R and XX gates, "
                                 f"got {g.kind.value}")
            if any(w >= self.width for w in g.wires):
                raise ValueError(f"gate wires {g.wires} exceed width {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    def as_circuit(self) -> Circuit:
        """The same gates as a Circuit; drops the global phase."""
        return Circuit(self.width, self.gates)

    def to_text(self) -> str:
        lines = [f"qubits {self.width}"]
        for g in self.gates:
            fields = [g.kind.value, *map(str, g.wires)]
            fields += [f"{p:.12g}" for p in g.params]
            lines.append(" ".join(fields))
        lines.append(f"# global_phase {self.global_phase:.12g}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        gates = [{"gate": g.kind.value, "wires": list(g.wires),
                  "params": list(g.params)} for g in self.gates]
        return json.dumps({"qubits": self.width, "gates": gates,
                           "global_phase": self.global_phase})


_IDENTITY_TOL = 1e-12


def _flush(pending: np.ndarray | None, wire: int,
           out: list[Gate]) -> float:
    """Emit a merged single-qubit unitary as <=2 R gates; returns its phase."""
    if pending is None:
        return 0.0
    alpha = cmath.phase(pending[0, 0]) if abs(pending[0, 0]) > 0.5 \
        else cmath.phase(pending[1, 1])
    if np.abs(pending - cmath.exp(1j * alpha) * _I2).max() <= _IDENTITY_TOL:
        return alpha  # identity up to phase: drop the rotations entirely
    p = decompose_unitary(pending)
    out.append(R(wire, 2 * p.b + math.pi, p.a - p.c - math.pi / 2))
    out.append(R(wire, -math.pi, -p.c - math.pi / 2))
    return p.d


def merge_singles(circuit: Circuit) -> NativeProgram:
    """Collapse runs of single-qubit gates between XX gates into <=2 R each."""
    pending: dict[int, np.ndarray | None] = {}
    out: list[Gate] = []
    phase = 0.0
    for g in circuit.gates:
        if g.kind in _SINGLE_KINDS:
            w = g.wires[0]
            m = gate_matrix(g)
            prev = pending.get(w)
            pending[w] = m if prev is None else m @ prev
        elif g.kind is GateKind.XX:
            for w in g.wires:
                phase += _flush(pending.pop(w, None), w, out)
            out.append(g)
        else:
            raise ValueError(f"merge_singles expects only XX and single-qubit "
                             f"gates, got {g.kind.value}")
    for w in sorted(pending):
        phase += _flush(pending[w], w, out)
    return NativeProgram(circuit.width, tuple(out),
                         float(math.remainder(phase, 2 * math.pi)))


def transpile(circuit: Circuit, xx_sign: XXSigns = None) -> NativeProgram:
    """Run the four lowering steps; R gates pass through untouched and XX
    gates are realigned to the available chi sign (default positive)."""
    return merge_singles(lower_two_qubit(lower_toffoli(circuit), xx_sign))
