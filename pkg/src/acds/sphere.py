"""Seeded sampling of directions uniform on the unit Euclidean sphere."""

import numpy as np

__all__ = ["SphereSampler", "ReplaySampler"]

# Recorded in run metadata so a trace can be replayed on the same stack.
GENERATOR_INFO = "numpy.PCG64 + Generator.standard_normal (ziggurat), scaled to unit 2-norm"


class SphereSampler:
    """Draws vectors uniform on the unit sphere in R^dim.

    A Gaussian vector is drawn from PCG64 seeded with ``seed`` and scaled to
    unit 2-norm. The same seed and call sequence reproduce the same draws
    bit-exactly; one sampler instance belongs to one run and is not safe to
    share across threads.
    """

    def __init__(self, dim: int, seed: int):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        self.dim = int(dim)
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    @property
    def generator_info(self) -> str:
        return GENERATOR_INFO

    def sample(self) -> np.ndarray:
        """One direction; advances the generator state."""
        while True:
            g = self._gen.standard_normal(self.dim)
            # einsum, not dot: same summation order as the batched path, so
            # sample() and sample_many() yield bit-identical streams
            norm = np.sqrt(np.einsum("i,i->", g, g))
            if norm > 0.0:  # an all-zero draw has probability ~0; redraw
                return g / norm

    def sample_many(self, m: int) -> np.ndarray:
        """(m, dim) array of directions, row i identical to the i-th sample() call.

        Generator.standard_normal fills arrays in C order, so one (m, dim)
        draw consumes the stream exactly like m consecutive sample() calls.
        """
        g = self._gen.standard_normal((int(m), self.dim))
        norms = np.sqrt(np.einsum("ij,ij->i", g, g))
        while np.any(norms == 0.0):
            bad = norms == 0.0
            g[bad] = self._gen.standard_normal((int(np.sum(bad)), self.dim))
            norms = np.sqrt(np.einsum("ij,ij->i", g, g))
        return g / norms[:, None]


class ReplaySampler:
    """Serves rows of a pre-drawn direction matrix in order.

    Lets several Monte-Carlo estimates share one expensive stream: draw once
    with SphereSampler.sample_many, then hand each consumer its own replay.
    Raises when the stored rows are exhausted.
    """

    def __init__(self, directions):
        directions = np.asarray(directions, dtype=float)
        if directions.ndim != 2 or directions.shape[0] == 0:
            raise ValueError(f"expected a nonempty (m, dim) matrix, got {directions.shape}")
        self._rows = directions
        self.dim = directions.shape[1]
        self._pos = 0

    @property
    def generator_info(self) -> str:
        return f"replay of {self._rows.shape[0]} pre-drawn directions"

    def sample(self) -> np.ndarray:
        return self.sample_many(1)[0]

    def sample_many(self, m: int) -> np.ndarray:
        end = self._pos + int(m)
        if end > self._rows.shape[0]:
            raise ValueError(
                f"direction store exhausted: asked for {m}, {self._rows.shape[0] - self._pos} left"
            )
        out = self._rows[self._pos : end]
        self._pos = end
        return out
