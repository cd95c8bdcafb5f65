import numpy as np
import pytest

from thermaltda.complexes import (
    CORPUS,
    SimplicialComplex,
    random_complex,
)

# hand-checked Betti numbers of the bundled corpus, by dimension
CORPUS_BETTI = {
    "hollow-triangle": {0: 1, 1: 1},
    "filled-triangle": {0: 1, 1: 0, 2: 0},
    "tetrahedron-boundary": {0: 1, 1: 0, 2: 1},
    "two-components": {0: 2, 1: 0},
    "octahedron-boundary": {0: 1, 1: 0, 2: 1},
}


@pytest.fixture(scope="session")
def corpus() -> dict[str, SimplicialComplex]:
    return {name: make() for name, make in CORPUS.items()}


def random_complex_family(count: int, max_vertices: int = 8, seed: int = 1234):
    """Deterministic family of random clique complexes for property tests."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(3, max_vertices + 1))
        p = float(rng.uniform(0.2, 0.95))
        out.append(random_complex(n, p, max_dim=n - 1, seed=1000 + i))
    return out


def random_spectra(count: int, seed: int = 99):
    """Random PSD spectra (some with kernels) as plain Spectrum objects."""
    from thermaltda.homology import Spectrum

    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        m = int(rng.integers(2, 30))
        kernel = int(rng.integers(0, min(4, m)))
        lam = np.sort(rng.uniform(0.05, 50.0, size=m - kernel))
        lam = np.concatenate([np.zeros(kernel), lam])
        tol = 1e-8 * max(1.0, lam[-1] if lam.size else 1.0)
        out.append(Spectrum(eigenvalues=lam, tol_kernel=tol))
    return out
