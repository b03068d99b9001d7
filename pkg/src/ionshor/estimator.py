"""Native-gate counting and the label-propagation depth bound.

The depth bound ignores single-qubit gates: every qubit starts at level 0,
each two-qubit gate raises both its qubits to max(levels)+1, and the final
maximum times 3 bounds the schedule depth (at most two R rotations sit on a
wire between consecutive XX gates, so each two-qubit level costs at most
three time steps).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .circuit import GateKind
from .templates import TemplateParams, order_finding
from .transpiler import NativeProgram, transpile

__all__ = ["ResourceReport", "count_gates", "depth_bound",
           "estimate_order_finding", "reports_to_csv"]

CSV_HEADER = "n,n_x,N,y,total_native,two_qubit,single_qubit,depth_bound"


@dataclass(frozen=True)
class ResourceReport:
    """Gate totals and depth bound for one native program."""

    total_native: int
    two_qubit: int
    single_qubit: int
    depth_bound: int
    histogram: dict[str, int] = field(default_factory=dict)
    n: int | None = None
    n_x: int | None = None
    N: int | None = None
    y: int | None = None

    def __post_init__(self) -> None:
        if self.total_native != self.two_qubit + self.single_qubit:
            raise ValueError("total_native must equal two_qubit + single_qubit")
        if self.depth_bound % 3:
            raise ValueError("depth_bound carries the x3 factor, so it must be "
                             "divisible by 3")

    def to_json(self) -> str:
        payload = {"n": self.n, "n_x": self.n_x, "N": self.N, "y": self.y,
                   "total_native": self.total_native, "two_qubit": self.two_qubit,
                   "single_qubit": self.single_qubit, "depth_bound": self.depth_bound,
                   "histogram": self.histogram}
        return json.dumps(payload)

    def csv_row(self) -> str:
        blank = ""
        return ",".join(str(v) if v is not None else blank for v in (
            self.n, self.n_x, self.N, self.y, self.total_native,
            self.two_qubit, self.single_qubit, self.depth_bound))


def depth_bound(program: NativeProgram) -> int:
    """Upper bound on circuit depth: 3 x the deepest two-qubit level."""
    levels: dict[int, int] = {}
    deepest = 0
    for g in program.gates:
        if len(g.wires) != 2:
            continue
        w0, w1 = g.wires
        lvl = max(levels.get(w0, 0), levels.get(w1, 0)) + 1
        levels[w0] = levels[w1] = lvl
        if lvl > deepest:
            deepest = lvl
    return 3 * deepest


def count_gates(program: NativeProgram) -> ResourceReport:
    """Exact per-kind counts plus the depth bound of a native program."""
    histogram: dict[str, int] = {}
    two_qubit = 0
    for g in program.gates:
        histogram[g.kind.value] = histogram.get(g.kind.value, 0) + 1
        if g.kind is GateKind.XX:
            two_qubit += 1
    total = len(program.gates)
    return ResourceReport(total_native=total, two_qubit=two_qubit,
                          single_qubit=total - two_qubit,
                          depth_bound=depth_bound(program),
                          histogram=histogram)


def estimate_order_finding(n: int, n_x: int | None = None) -> ResourceReport:
    """Build, transpile and count the order-finding circuit for n-bit moduli.

    Representative parameters are N = 2^n - 1 (the largest n-bit odd modulus)
    and y = 2, recorded in the report; n_x defaults to 2n + 2.  Counts for
    other moduli of the same bit width differ only mildly.
    """
    if n < 2:
        raise ValueError(f"modulus width n must be >= 2, got {n}")
    if n_x is None:
        n_x = 2 * n + 2
    N = 2 ** n - 1
    y = 2
    circuit = order_finding(TemplateParams(N=N, y=y, n=n, n_x=n_x))
    program = transpile(circuit)
    counts = count_gates(program)
    return ResourceReport(total_native=counts.total_native,
                          two_qubit=counts.two_qubit,
                          single_qubit=counts.single_qubit,
                          depth_bound=counts.depth_bound,
                          histogram=counts.histogram,
                          n=n, n_x=n_x, N=N, y=y)


def reports_to_csv(reports) -> str:
    lines = [CSV_HEADER]
    lines += [r.csv_row() for r in reports]
    return "\n".join(lines) + "\n"
