"""Word-operation tracing for structural tests.

TracingInt behaves like an int but records every word-level logic
operation it participates in and refuses truthiness tests outright.
Feeding an engine TracingInt registers therefore proves two things at
once: the executed operation sequence can be compared across different
lane data (identical traces = data-independent control flow, i.e. no
per-lane branching), and per-category op counts can be asserted (XORs
per LFSR step, zero logic ops in ShiftRows, ...).
"""

from __future__ import annotations


class DataDependentBranch(AssertionError):
    """An engine bool-tested a sliced word."""


class OpTrace:
    def __init__(self):
        self.ops: list[str] = []

    def count(self, kind: str) -> int:
        return sum(1 for op in self.ops if op == kind)

    def clear(self):
        self.ops.clear()


class TracingInt(int):
    """Int that logs xor/and/or/invert/shift into a shared OpTrace."""

    trace: OpTrace | None = None

    def __new__(cls, value, trace: OpTrace):
        obj = super().__new__(cls, value)
        obj.trace = trace
        return obj

    def _wrap(self, value, kind: str) -> "TracingInt":
        self.trace.ops.append(kind)
        return TracingInt(value, self.trace)

    def __xor__(self, other):
        return self._wrap(int(self) ^ int(other), "xor")

    __rxor__ = __xor__

    def __and__(self, other):
        return self._wrap(int(self) & int(other), "and")

    __rand__ = __and__

    def __or__(self, other):
        return self._wrap(int(self) | int(other), "or")

    __ror__ = __or__

    def __invert__(self):
        return self._wrap(~int(self), "invert")

    def __lshift__(self, other):
        return self._wrap(int(self) << int(other), "shift")

    def __rshift__(self, other):
        return self._wrap(int(self) >> int(other), "shift")

    def __bool__(self):
        raise DataDependentBranch(
            "engine tested the truth value of a sliced word"
        )
