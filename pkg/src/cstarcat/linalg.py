"""Numerical substrate: complex dense matrices, operator norms, Hermitian
functional calculus, Hilbert-Schmidt subspaces of matrix spaces, and seeded
search for invertible elements.

All values are immutable after construction and all routines are pure given
explicit seeds. Matrices are numpy ``complex128`` arrays throughout; equality
is tolerance-based, with residuals compared against
``eps_abs * max(1, operand norms)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidMatrix,
    MissingShape,
    NotHermitian,
    NotSquare,
    ShapeMismatch,
    SingularOperand,
)


@dataclass(frozen=True)
class Tolerance:
    """Absolute and relative comparison thresholds."""

    eps_abs: float = 1e-9
    eps_rel: float = 1e-9

    def __post_init__(self):
        if not (self.eps_abs > 0 and self.eps_rel > 0):
            raise ValueError("tolerances must be strictly positive")

    def bound(self, *scales: float) -> float:
        """Comparison threshold scaled by ``max(1, scales)``."""
        return self.eps_abs * max(1.0, *scales) if scales else self.eps_abs

    def close(self, a: np.ndarray, b: np.ndarray) -> bool:
        a, b = np.asarray(a), np.asarray(b)
        if a.shape != b.shape:
            return False
        scale = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)))
        return float(np.linalg.norm(a - b)) <= self.bound(scale)


DEFAULT_TOL = Tolerance()


def as_matrix(m, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce to a finite complex128 matrix, validating shape if given."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise InvalidMatrix(f"expected a 2-d matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix("matrix has non-finite entries")
    if rows is not None and a.shape != (rows, cols):
        raise ShapeMismatch(f"expected shape {(rows, cols)}, got {a.shape}")
    return a


def matrix_to_json(m: np.ndarray) -> list:
    """Row-major nested lists of [re, im] pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(data) -> np.ndarray:
    rows = []
    for row in data:
        rows.append([complex(re, im) for re, im in row])
    if not rows:
        return np.zeros((0, 0), dtype=np.complex128)
    return as_matrix(np.array(rows, dtype=np.complex128))


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product <a, b> = tr(a* b)."""
    return complex(np.vdot(a, b))


def hs_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def op_norm(m) -> float:
    """Largest singular value; realizes the C*-norm in the concrete model."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def smallest_singular_value(m) -> float:
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def is_hermitian(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return float(np.linalg.norm(a - a.conj().T)) <= tol.bound(hs_norm(a))


def herm_funcalc(h, fn: str, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Apply ``fn`` in {sqrt, inv_sqrt, inv} to a Hermitian matrix via its
    eigendecomposition.

    ``inv_sqrt`` and ``inv`` require every eigenvalue above ``tol.eps_abs``;
    ``sqrt`` tolerates eigenvalues down to ``-tol.eps_abs`` (clipped to 0).
    """
    a = as_matrix(h)
    if a.shape[0] != a.shape[1]:
        raise NotHermitian(f"matrix of shape {a.shape} is not square")
    if not is_hermitian(a, tol):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    sym = (a + a.conj().T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(sym)
    if fn == "sqrt":
        if np.any(eigvals < -tol.eps_abs):
            raise SingularOperand(f"negative eigenvalue {eigvals.min():.3e} under sqrt")
        vals = np.sqrt(np.clip(eigvals, 0.0, None))
    elif fn == "inv_sqrt":
        if np.any(eigvals <= tol.eps_abs):
            raise SingularOperand(f"eigenvalue {eigvals.min():.3e} too small for inv_sqrt")
        vals = 1.0 / np.sqrt(eigvals)
    elif fn == "inv":
        if np.any(eigvals <= tol.eps_abs):
            raise SingularOperand(f"eigenvalue {eigvals.min():.3e} too small for inv")
        vals = 1.0 / eigvals
    else:
        raise ValueError(f"unknown function {fn!r}")
    out = (eigvecs * vals) @ eigvecs.conj().T
    return (out + out.conj().T) / 2.0


def is_unitary(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff a*a = 1 and aa* = 1 within tolerance."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    eye = np.eye(a.shape[1])
    left = float(np.linalg.norm(a.conj().T @ a - eye))
    right = float(np.linalg.norm(a @ a.conj().T - eye))
    return left <= tol.bound(1.0) and right <= tol.bound(1.0)


def is_isometry(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff a*a = 1 within tolerance (aa* unconstrained)."""
    a = as_matrix(m)
    eye = np.eye(a.shape[1])
    return float(np.linalg.norm(a.conj().T @ a - eye)) <= tol.bound(1.0)


class Subspace:
    """A linear subspace of the ``rows x cols`` complex matrices, held as an
    orthonormal basis under the Hilbert-Schmidt inner product.

    The basis is stored both as matrices and as a stacked array of flattened
    rows, which makes projections one matmul.
    """

    def __init__(self, ambient_rows: int, ambient_cols: int, basis=(),
                 tol: Tolerance = DEFAULT_TOL, _trusted: bool = False):
        self.ambient_rows = int(ambient_rows)
        self.ambient_cols = int(ambient_cols)
        self.tol = tol
        mats = [as_matrix(b, self.ambient_rows, self.ambient_cols) for b in basis]
        if mats:
            stacked = np.stack([b.ravel() for b in mats])
        else:
            stacked = np.zeros((0, self.ambient_rows * self.ambient_cols),
                               dtype=np.complex128)
        if mats and not _trusted:
            gram = stacked @ stacked.conj().T
            if float(np.linalg.norm(gram - np.eye(len(mats)))) > tol.bound(1.0):
                raise InvalidMatrix("basis is not HS-orthonormal; use subspace_span")
        self.basis = mats
        self._rows = stacked

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ambient_rows, self.ambient_cols)

    def coords(self, m) -> np.ndarray:
        """HS coordinates of ``m`` with respect to the stored basis."""
        a = as_matrix(m, self.ambient_rows, self.ambient_cols)
        return self._rows.conj() @ a.ravel()

    def from_coords(self, coeffs) -> np.ndarray:
        c = np.asarray(coeffs, dtype=np.complex128)
        if c.shape != (self.dim,):
            raise ShapeMismatch(f"expected {self.dim} coordinates, got {c.shape}")
        flat = c @ self._rows
        return flat.reshape(self.ambient_rows, self.ambient_cols)

    def project(self, m) -> np.ndarray:
        return self.from_coords(self.coords(m))

    def residual(self, m) -> float:
        """HS distance from ``m`` to the subspace."""
        a = as_matrix(m, self.ambient_rows, self.ambient_cols)
        return hs_norm(a - self.project(a))

    def contains(self, m, tol: Tolerance | None = None) -> bool:
        tol = tol or self.tol
        a = as_matrix(m, self.ambient_rows, self.ambient_cols)
        return self.residual(a) <= tol.bound(hs_norm(a))

    def to_json(self) -> dict:
        return {
            "rows": self.ambient_rows,
            "cols": self.ambient_cols,
            "basis": [matrix_to_json(b) for b in self.basis],
        }

    @classmethod
    def from_json(cls, data, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        basis = [matrix_from_json(b) for b in data["basis"]]
        try:
            return cls(data["rows"], data["cols"], basis, tol=tol)
        except InvalidMatrix:
            return subspace_span(basis, ambient_shape=(data["rows"], data["cols"]), tol=tol)

    def __repr__(self):
        return f"Subspace({self.ambient_rows}x{self.ambient_cols}, dim={self.dim})"


def subspace_span(mats, ambient_shape: tuple[int, int] | None = None,
                  tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthonormalize a list of matrices into a :class:`Subspace`.

    Dependent inputs are dropped: the dimension equals the numerical rank of
    the stack, with singular values below ``eps_abs * max(1, sigma_max)``
    treated as zero.
    """
    mats = list(mats)
    if not mats:
        if ambient_shape is None:
            raise MissingShape("empty span needs an explicit ambient shape")
        return Subspace(ambient_shape[0], ambient_shape[1], [], tol=tol)
    first = as_matrix(mats[0])
    shape = first.shape
    if ambient_shape is not None and tuple(ambient_shape) != shape:
        raise ShapeMismatch(f"ambient {ambient_shape} != matrix shape {shape}")
    arrays = [as_matrix(m, shape[0], shape[1]) for m in mats]
    stacked = np.stack([a.ravel() for a in arrays])
    _, svals, vh = np.linalg.svd(stacked, full_matrices=False)
    cutoff = tol.bound(float(svals[0])) if svals.size else tol.eps_abs
    rank = int(np.sum(svals > cutoff))
    basis = [vh[i].reshape(shape) for i in range(rank)]
    return Subspace(shape[0], shape[1], basis, tol=tol, _trusted=True)


def find_invertible(space: Subspace, seed: int, samples: int = 64,
                    tol: Tolerance = DEFAULT_TOL) -> np.ndarray | None:
    """Search a square-matrix subspace for an invertible element.

    Draws ``samples`` seeded random coefficient vectors, normalizes each
    candidate to unit operator norm, and accepts the first one whose smallest
    singular value exceeds ``eps_abs``. A ``None`` answer is only evidence of
    absence (the determinant polynomial may vanish on every sample), never a
    proof; callers must report it as such.
    """
    if space.ambient_rows != space.ambient_cols:
        raise NotSquare("invertible elements require a square ambient shape")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if space.dim == 0:
        return None
    rng = np.random.default_rng(np.random.PCG64(seed))
    for _ in range(samples):
        coeffs = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
        candidate = space.from_coords(coeffs)
        top = op_norm(candidate)
        if top <= tol.eps_abs:
            continue
        candidate = candidate / top
        if smallest_singular_value(candidate) > tol.eps_abs:
            return candidate
    return None
