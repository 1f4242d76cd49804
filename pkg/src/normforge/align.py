"""Character-level alignment between raw and normalized word forms.

The hot DP kernel lives in the compiled ``_speedups`` extension when it
built; otherwise the pure-Python twin in ``_align_py`` is used.  Both
expose the same ``distance``/``align`` functions and agree op-for-op.
"""

from __future__ import annotations

from dataclasses import dataclass

try:
    from normforge import _speedups as _kernel
except ImportError:  # extension not built; the fallback is exact but slower
    from normforge import _align_py as _kernel

BACKEND: str = _kernel.BACKEND

OP_KINDS = ("match", "substitute", "delete", "insert", "transpose")


@dataclass(frozen=True)
class EditOp:
    kind: str
    raw_char: str | None
    norm_char: str | None
    position: int  # index into norm (insertion point for inserts)


@dataclass(frozen=True)
class EditScript:
    ops: tuple[EditOp, ...]

    @property
    def cost(self) -> int:
        return sum(1 for op in self.ops if op.kind != "match")

    def replay(self, norm: str) -> str:
        """Apply the script to norm; yields raw by construction."""
        out: list[str] = []
        for op in self.ops:
            if op.kind in ("match", "substitute", "insert"):
                out.append(op.raw_char)  # type: ignore[arg-type]
            elif op.kind == "transpose":
                out.append(norm[op.position + 1])
                out.append(norm[op.position])
            # delete emits nothing
        return "".join(out)


def char_distance(raw: str, norm: str) -> int:
    """Damerau-Levenshtein distance under unit costs with transposition."""
    return _kernel.distance(raw, norm)


def char_align(raw: str, norm: str) -> EditScript:
    """Minimal-cost alignment; backtrace ties prefer match > transpose >
    substitute > delete > insert."""
    if not raw or not norm:
        raise ValueError("char_align requires non-empty raw and norm")
    ops = tuple(EditOp(*op) for op in _kernel.align(raw, norm))
    return EditScript(ops)
