"""Graph Laplacians scaled to a target spectral radius."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NetworkError

TOPOLOGIES = ("ring", "complete", "star", "path", "random", "directed_ring")


@dataclass(frozen=True)
class Network:
    n: int
    adjacency: np.ndarray
    laplacian: np.ndarray
    scale: float
    topology: str
    seed: int | None = None
    directed: bool = False

    @property
    def symmetric(self) -> bool:
        return bool(np.allclose(self.laplacian, self.laplacian.T, atol=1e-14))

    @property
    def eigenvalues(self) -> np.ndarray:
        if self.symmetric:
            return np.linalg.eigvalsh(self.laplacian)
        return np.sort_complex(np.linalg.eigvals(self.laplacian))

    def eigh(self):
        """Orthonormal eigen-decomposition (symmetric Laplacians only)."""
        if not self.symmetric:
            raise NetworkError("eigen-decoupling needs a symmetric Laplacian")
        return np.linalg.eigh(self.laplacian)

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.laplacian))))

    def to_json(self) -> dict:
        return {"topology": self.topology, "n": self.n, "scale": self.scale, "seed": self.seed,
                "directed": self.directed}


def _adjacency(topology: str, n: int, rng: np.random.Generator, density: float) -> np.ndarray:
    A = np.zeros((n, n))
    if topology == "ring":
        for i in range(n):
            A[i, (i + 1) % n] = A[(i + 1) % n, i] = 1.0
    elif topology == "path":
        for i in range(n - 1):
            A[i, i + 1] = A[i + 1, i] = 1.0
    elif topology == "complete":
        A[:] = 1.0
        np.fill_diagonal(A, 0.0)
    elif topology == "star":
        A[0, 1:] = A[1:, 0] = 1.0
    elif topology == "random":
        upper = np.triu(rng.random((n, n)) < density, 1)
        A = (upper | upper.T).astype(float)
    elif topology == "directed_ring":
        for i in range(n):
            A[i, (i + 1) % n] = 1.0
    else:
        raise NetworkError(f"unknown topology {topology!r}; choose from {', '.join(TOPOLOGIES)}")
    return A


def _connected(A: np.ndarray) -> bool:
    """Strong connectivity by breadth-first search in both directions."""
    n = len(A)
    for M in (A, A.T):
        seen, frontier = {0}, [0]
        while frontier:
            i = frontier.pop()
            for j in np.nonzero(M[i])[0]:
                if j not in seen:
                    seen.add(int(j))
                    frontier.append(int(j))
        if len(seen) != n:
            return False
    return True


def build_network(topology: str = "ring", n: int = 5, scale: float = 0.5, seed: int | None = None,
                  density: float = 0.5, directed: bool = False, max_tries: int = 200) -> Network:
    """Laplacian ``diag(A 1) - A`` of a connected graph, scaled to spectral radius ``scale``.

    ``directed_ring`` (a balanced directed cycle) requires ``directed=True``;
    its Laplacian is normal but not symmetric, so results on it fall outside
    the symmetric, diagonalizable setting the certificates speak about.
    """
    if n < 2:
        raise NetworkError("a network needs at least two agents")
    if not scale > 0:
        raise NetworkError("scale must be positive")
    if topology == "directed_ring" and not directed:
        raise NetworkError("directed topologies require directed=True")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries if topology == "random" else 1):
        A = _adjacency(topology, n, rng, density)
        if _connected(A):
            break
    else:
        raise NetworkError(f"no connected {topology} graph on {n} agents after {max_tries} draws "
                           f"(density {density})")
    if not _connected(A):
        raise NetworkError(f"{topology} graph on {n} agents is not connected")
    L = np.diag(A.sum(axis=1)) - A
    rho = float(np.max(np.abs(np.linalg.eigvals(L))))
    L = L * (scale / rho)
    return Network(n, A, L, float(scale), topology, seed, topology == "directed_ring")
