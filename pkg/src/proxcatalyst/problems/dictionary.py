"""Dictionary learning as a smooth finite sum over the dictionary.

For a patch matrix X with columns x_i, each component is the optimal
elastic-net coding value

    f_i(D) = min_a 0.5 ||x_i - D a||^2 + (mu/2) ||a||^2 + lam ||a||_1,

a Moreau-type marginal that is smooth in D with gradient
-(x_i - D a_i) a_i' at the (unique, mu > 0) minimizing code a_i.
The dictionary variable is the C-order flattening of D (m rows, p
atoms); the constraint set keeps every atom inside the unit l2 ball.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..core import ColumnBallIndicator, CompositeObjective, SmoothPart

CD_TOL = 1e-9
CD_MAX_SWEEPS = 10_000


class InnerSolveError(RuntimeError):
    """Coordinate descent failed to reach its tolerance within the cap."""


def project_dictionary(D: np.ndarray) -> np.ndarray:
    """Scale each column onto the unit ball: d -> d / max(1, ||d||)."""
    norms = np.linalg.norm(D, axis=0)
    return D * (1.0 / np.maximum(1.0, norms))[np.newaxis, :]


def elastic_net_prox(v, beta, mu, lam):
    """prox of beta * (lam ||.||_1 + (mu/2) ||.||^2): soft threshold at
    beta*lam then scale by 1/(1 + beta*mu)."""
    return kernels.enet_prox(np.asarray(v, dtype=float), beta * lam, beta * mu)


def solve_code(D, x, mu, lam, alpha0=None, tol=CD_TOL, max_sweeps=CD_MAX_SWEEPS):
    """Elastic-net code of one patch by cyclic coordinate descent; stops
    when the largest coordinate update of a sweep drops below tol."""
    gram = D.T @ D
    corr = D.T @ x
    if alpha0 is None:
        alpha0 = np.zeros(D.shape[1])
    alpha, _, last = kernels.enet_cd(gram, corr, lam, mu, alpha0, tol, max_sweeps)
    if not last < tol:
        raise InnerSolveError(
            "coding did not converge: last sweep moved %g >= %g after %d sweeps"
            % (last, tol, max_sweeps))
    return alpha


class DictionarySmooth(SmoothPart):
    def __init__(self, patches, n_atoms: int, mu: float, lam: float):
        patches = np.ascontiguousarray(patches, dtype=float)
        if patches.ndim != 2:
            raise ValueError("patches must be (m, n)")
        if mu <= 0:
            raise ValueError("mu must be positive so codes are unique")
        self.patches = patches
        self.m, self.n_components = patches.shape
        self.n_atoms = int(n_atoms)
        self.mu = float(mu)
        self.lam = float(lam)
        self.dim = self.m * self.n_atoms

    def _mat(self, x):
        return x.reshape(self.m, self.n_atoms)

    def _codes(self, D):
        """Codes of every patch at D; the gram matrix is shared."""
        gram = D.T @ D
        corr = D.T @ self.patches  # (p, n)
        out = np.empty((self.n_atoms, self.n_components))
        z = np.zeros(self.n_atoms)
        for i in range(self.n_components):
            alpha, _, last = kernels.enet_cd(gram, np.ascontiguousarray(corr[:, i]),
                                             self.lam, self.mu, z, CD_TOL,
                                             CD_MAX_SWEEPS)
            if not last < CD_TOL:
                raise InnerSolveError("coding did not converge for patch %d" % i)
            out[:, i] = alpha
        return out

    def component_value(self, i, x):
        D = self._mat(x)
        a = solve_code(D, self.patches[:, i], self.mu, self.lam)
        r = self.patches[:, i] - D @ a
        return 0.5 * float(r @ r) + 0.5 * self.mu * float(a @ a) \
            + self.lam * float(np.sum(np.abs(a)))

    def component_gradient(self, i, x):
        D = self._mat(x)
        a = solve_code(D, self.patches[:, i], self.mu, self.lam)
        r = self.patches[:, i] - D @ a
        return -np.outer(r, a).ravel()

    def value(self, x):
        D = self._mat(x)
        codes = self._codes(D)
        resid = self.patches - D @ codes
        total = 0.5 * np.einsum("ij,ij->j", resid, resid) \
            + 0.5 * self.mu * np.einsum("ij,ij->j", codes, codes) \
            + self.lam * np.sum(np.abs(codes), axis=0)
        return float(np.mean(total))

    def gradient(self, x):
        D = self._mat(x)
        codes = self._codes(D)
        resid = self.patches - D @ codes
        return (-(resid @ codes.T) / self.n_components).ravel()


def estimate_dictionary_lipschitz(D0, patches, mu, lam) -> float:
    """Heuristic smoothness estimate max_i ||a_i(D0)||^2 over the codes
    at the initial dictionary, floored at 1e-8."""
    best = 0.0
    for i in range(patches.shape[1]):
        a = solve_code(np.asarray(D0, dtype=float), patches[:, i], mu, lam)
        best = max(best, float(a @ a))
    return max(best, 1e-8)


def initial_dictionary(m: int, n_atoms: int, seed: int) -> np.ndarray:
    """Random feasible start: gaussian atoms scaled to unit norm."""
    rng = np.random.Generator(np.random.Philox(seed))
    D = rng.standard_normal((m, n_atoms))
    return D / np.linalg.norm(D, axis=0)[np.newaxis, :]


def dictionary_objective(patches, n_atoms: int, mu: float, lam: float,
                         D0: np.ndarray | None = None,
                         seed: int = 0) -> tuple[CompositeObjective, np.ndarray]:
    """Build the composite objective (constraint set included) plus the
    flattened starting point used for the Lipschitz estimate."""
    smooth = DictionarySmooth(patches, n_atoms, mu, lam)
    if D0 is None:
        D0 = initial_dictionary(smooth.m, n_atoms, seed)
    lip = estimate_dictionary_lipschitz(D0, smooth.patches, mu, lam)
    psi = ColumnBallIndicator(smooth.m, n_atoms)
    obj = CompositeObjective(smooth, psi, lipschitz=lip)
    return obj, np.asarray(D0, dtype=float).ravel()
