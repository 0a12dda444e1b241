import numpy as np
import pytest

from hamrc import HamExpansion, build_expansion


@pytest.fixture
def sample_drift() -> HamExpansion:
    """Two-qubit drift with a dominant XZ coupling plus clutter terms."""
    return build_expansion(2, [("ZI", 1.0), ("XZ", 2.0), ("ZZ", 1.0)])


def random_two_body(
    n: int,
    rng: np.random.Generator,
    *,
    coupling_density: float = 0.5,
    local_density: float = 0.5,
    connected: bool = False,
) -> HamExpansion:
    """Random two-body expansion; optionally forced to couple all qubits."""
    entries: list[tuple[str, float]] = []
    for q in range(n):
        for axis in "XYZ":
            if rng.random() < local_density / 3:
                ops = ["I"] * n
                ops[q] = axis
                entries.append(("".join(ops), float(rng.normal())))
    for i in range(n):
        for j in range(i + 1, n):
            for a in "XYZ":
                for b in "XYZ":
                    if rng.random() < coupling_density / 9:
                        ops = ["I"] * n
                        ops[i], ops[j] = a, b
                        entries.append(("".join(ops), float(rng.normal())))
    if connected:
        order = list(rng.permutation(n))
        for i, j in zip(order, order[1:]):
            ops = ["I"] * n
            ops[i] = "XYZ"[int(rng.integers(3))]
            ops[j] = "XYZ"[int(rng.integers(3))]
            entries.append(("".join(ops), float(rng.normal()) or 0.5))
    return build_expansion(n, entries)


def random_coupled_pair(rng: np.random.Generator) -> HamExpansion:
    """Random two-qubit expansion guaranteed to carry a coupling term."""
    ham = random_two_body(2, rng, coupling_density=0.7, local_density=0.7)
    if not any(p.weight() == 2 for p in ham.terms):
        a, b = rng.choice(list("XYZ"), size=2)
        extra = build_expansion(2, [(a + b, float(rng.normal()) or 1.0)])
        ham = build_expansion(
            2, [(p.ops, c) for p, c in ham.items()] + [(q.ops, c) for q, c in extra.items()]
        )
    return ham
