"""Drift-plus-local-frame pulse schedules and their dense evaluation.

A schedule alternates two instruction kinds: ``LocalLayer`` (a tensor
product of single-qubit unitaries, applied instantaneously) and ``Drift``
(free evolution under the fixed drift Hamiltonian for a duration).

Instructions are listed in operator-product order: evaluating
``[A, B, C]`` yields ``A @ B @ C`` (times the global phase), so the last
entry acts first on a state.  The conjugation pattern
``[LocalLayer(U), Drift(t), LocalLayer(U^dag)]`` therefore evaluates to
``exp(-i t U H U^dag)`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Mapping

import numpy as np

from .dense import DEFAULT_DENSE_CAP, dense_of_expansion, kron_all, operator_norm
from .errors import DimMismatch, InvalidTerm, TooLarge
from .pauli import HamExpansion

if TYPE_CHECKING:  # pragma: no cover
    from .bounds import ErrorPlan

UNITARY_TOL = 1e-10

_ID2 = np.eye(2, dtype=complex)


class LocalLayer:
    """One layer of single-qubit unitaries; omitted sites act as identity."""

    __slots__ = ("factors",)

    def __init__(self, factors: Mapping[int, np.ndarray]):
        checked: dict[int, np.ndarray] = {}
        for site in sorted(factors):
            u = np.asarray(factors[site], dtype=complex)
            if u.shape != (2, 2):
                raise InvalidTerm(f"layer factor on site {site} is not 2x2")
            defect = np.abs(u.conj().T @ u - _ID2).max()
            if defect > UNITARY_TOL:
                raise InvalidTerm(
                    f"layer factor on site {site} has unitarity defect {defect:.3e}"
                )
            u = u.copy()
            u.flags.writeable = False
            checked[site] = u
        self.factors = checked

    def sites(self) -> tuple[int, ...]:
        return tuple(self.factors)

    def factor(self, site: int) -> np.ndarray:
        return self.factors.get(site, _ID2)

    def dense(self, n: int) -> np.ndarray:
        return kron_all(self.factor(q) for q in range(n))

    def dagger(self) -> "LocalLayer":
        return LocalLayer({q: u.conj().T for q, u in self.factors.items()})

    def cache_key(self) -> tuple:
        return tuple((q, u.tobytes()) for q, u in self.factors.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalLayer) and self.cache_key() == other.cache_key()

    def __repr__(self) -> str:
        return f"LocalLayer(sites={self.sites()})"


@dataclass(frozen=True)
class Drift:
    """Free evolution under the drift Hamiltonian for ``tau`` time units."""

    tau: float

    def __post_init__(self):
        if not self.tau >= 0.0:
            raise InvalidTerm(f"drift duration must be >= 0, got {self.tau}")


Instruction = LocalLayer | Drift


@dataclass(frozen=True)
class Schedule:
    """An operator-ordered instruction list with an explicit global phase.

    ``raw_drift_periods`` preserves the pre-merge drift count when the
    schedule came out of a compiler; ``plan`` carries the step plan that
    produced it, when one exists.  ``predicted_error`` is the compiler's
    error budget for the whole schedule (a chained total when several
    independently planned pieces were concatenated).
    """

    n: int
    instructions: tuple[Instruction, ...]
    phase: float = 0.0
    raw_drift_periods: int | None = None
    plan: "ErrorPlan | None" = field(default=None, compare=False)
    predicted_error: float | None = field(default=None, compare=False)

    def drift_count(self) -> int:
        return sum(1 for ins in self.instructions if isinstance(ins, Drift))

    def total_drift_time(self) -> float:
        return sum(ins.tau for ins in self.instructions if isinstance(ins, Drift))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Schedule)
            and self.n == other.n
            and self.phase == other.phase
            and self.instructions == other.instructions
        )


_LAYER_DROP_TOL = 1e-12


def _merge_layers(a: LocalLayer, b: LocalLayer) -> LocalLayer:
    # operator order: a comes left of b, so per-site factors multiply a @ b
    out: dict[int, np.ndarray] = {q: u for q, u in a.factors.items()}
    for q, u in b.factors.items():
        out[q] = out[q] @ u if q in out else u
    kept = {
        q: u for q, u in out.items() if np.abs(u - _ID2).max() > _LAYER_DROP_TOL
    }
    return LocalLayer(kept)


def canonicalize(sched: Schedule) -> Schedule:
    """Merge adjacent layers, drop identities, fuse adjacent drifts.

    Every rewrite preserves the evaluated operator exactly (up to the
    1e-12 identity-dropping tolerance), so canonical and raw schedules
    are interchangeable for verification.
    """
    out: list[Instruction] = []
    for ins in sched.instructions:
        if isinstance(ins, Drift):
            if ins.tau == 0.0:
                continue
            if out and isinstance(out[-1], Drift):
                out[-1] = Drift(out[-1].tau + ins.tau)
            else:
                out.append(ins)
        else:
            if out and isinstance(out[-1], LocalLayer):
                merged = _merge_layers(out[-1], ins)
                if merged.factors:
                    out[-1] = merged
                else:
                    out.pop()
            elif ins.factors:
                out.append(ins)

    # a layer that cancelled out may leave Drift, Drift adjacency behind
    fused: list[Instruction] = []
    for ins in out:
        if isinstance(ins, Drift) and fused and isinstance(fused[-1], Drift):
            fused[-1] = Drift(fused[-1].tau + ins.tau)
        else:
            fused.append(ins)

    return Schedule(
        sched.n,
        tuple(fused),
        sched.phase,
        raw_drift_periods=sched.raw_drift_periods,
        plan=sched.plan,
        predicted_error=sched.predicted_error,
    )


def evaluate_schedule(
    sched: Schedule, drift: HamExpansion, *, dense_cap: int | None = None
) -> np.ndarray:
    """Dense unitary implemented by a schedule under the given drift.

    Evaluation is the plain operator-ordered product of the instruction
    matrices times ``exp(i*phase)``.  Raises :class:`TooLarge` when the
    register exceeds the dense cap (default 10 qubits).
    """
    cap = DEFAULT_DENSE_CAP if dense_cap is None else dense_cap
    if sched.n > cap:
        raise TooLarge(f"{sched.n} qubits exceeds dense cap {cap}")
    if drift.n != sched.n:
        raise DimMismatch(f"drift on {drift.n} qubits, schedule on {sched.n}")

    dim = 2**sched.n
    evals, vecs = np.linalg.eigh(dense_of_expansion(drift))
    vecs_h = vecs.conj().T

    layer_cache: dict[tuple, np.ndarray] = {}
    w = np.eye(dim, dtype=complex)
    for ins in sched.instructions:
        if isinstance(ins, Drift):
            op = (vecs * np.exp(-1j * evals * ins.tau)) @ vecs_h
        else:
            key = ins.cache_key()
            op = layer_cache.get(key)
            if op is None:
                op = ins.dense(sched.n)
                layer_cache[key] = op
        w = w @ op
    return np.exp(1j * sched.phase) * w


def unitarity_defect(w: np.ndarray) -> float:
    """Operator-norm distance of ``w^dag w`` from the identity."""
    return operator_norm(w.conj().T @ w - np.eye(w.shape[0]))
