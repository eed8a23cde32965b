"""Compact matrix Lie algebras, structure constants and symmetric-pair checks.

Generators are anti-Hermitian ``n x n`` complex matrices ``X_a`` with
``[X_a, X_b] = f_abc X_c``. For su(2) the basis is ``sigma^a / 2i`` and
``f_abc = eps_abc``.
"""
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

DEFAULT_TOL = 1e-10

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)


class ClosureError(ValueError):
    """A commutator of two generators leaves the span of the generators."""

    def __init__(self, pair, residual):
        self.pair = pair
        self.residual = residual
        super().__init__(f"commutator [X_{pair[0]}, X_{pair[1]}] is not in the span "
                         f"of the generators (residual {residual:.3e})")


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    name: str
    generators: np.ndarray
    check_closure: bool = field(default=True, repr=False)

    def __post_init__(self):
        gens = np.array(self.generators, dtype=complex)
        if gens.ndim != 3 or gens.shape[1] != gens.shape[2]:
            raise ValueError("generators must have shape (count, n, n)")
        gens.flags.writeable = False
        object.__setattr__(self, "generators", gens)
        for a, X in enumerate(gens):
            if np.max(np.abs(X + X.conj().T)) > 1e-12:
                raise ValueError(f"generator {a} is not anti-Hermitian")
        M = self.metric
        if np.max(np.abs(M - M.T)) > 1e-12:
            raise ValueError("trace metric is not symmetric")
        if len(M) and np.max(np.linalg.eigvalsh(M)) >= -1e-12:
            raise ValueError("trace metric is not negative definite; only compact algebras "
                             "are supported")
        if self.check_closure:
            structure_constants(self)

    @property
    def dim(self):
        return self.generators.shape[0]

    @property
    def matrix_dim(self):
        return self.generators.shape[1]

    @cached_property
    def metric(self):
        """``tr(X_a X_b)`` (real, negative definite)."""
        return np.einsum("aij,bji->ab", self.generators, self.generators).real

    @cached_property
    def metric_inverse(self):
        return np.linalg.inv(self.metric)

    def components(self, mats):
        """Coefficients of matrices ``(..., n, n)`` in the generator basis.

        Returns ``(coeffs, residual)`` where ``coeffs`` has shape
        ``(dim, ...)`` and ``residual`` is the Frobenius norm of what the
        expansion misses.
        """
        mats = np.asarray(mats, dtype=complex)
        traces = np.einsum("aij,...ji->a...", self.generators, mats).real
        coeffs = np.tensordot(self.metric_inverse, traces, axes=(1, 0))
        back = np.tensordot(coeffs, self.generators, axes=(0, 0))
        residual = np.sqrt(np.sum(np.abs(mats - back) ** 2, axis=(-2, -1)))
        return coeffs, residual

    def is_orthogonal(self, tol=1e-12):
        """True when the trace metric is a negative multiple of the identity."""
        M = self.metric
        return bool(np.max(np.abs(M - M[0, 0] * np.eye(len(M)))) < tol)

    def to_json(self, pair=None):
        doc = {
            "name": self.name,
            "dim": self.matrix_dim,
            "generators": [[[[z.real, z.imag] for z in row] for row in X]
                           for X in self.generators],
        }
        if pair is not None:
            doc["pair"] = {"T": list(pair[0]), "S": list(pair[1])}
        return doc


def commutator(X, Y):
    return X @ Y - Y @ X


@dataclass(frozen=True)
class StructureConstants:
    f: np.ndarray

    @property
    def antisymmetry_residual(self):
        return float(np.max(np.abs(self.f + self.f.transpose(1, 0, 2)), initial=0.0))

    @property
    def jacobi_residual(self):
        f = self.f
        jac = (np.einsum("abe,ecd->abcd", f, f)
               + np.einsum("bce,ead->abcd", f, f)
               + np.einsum("cae,ebd->abcd", f, f))
        return float(np.max(np.abs(jac), initial=0.0))


def structure_constants(alg, tol=DEFAULT_TOL):
    """``f_abc`` from projecting ``[X_a, X_b]`` on the basis via the trace metric.

    Raises :class:`ClosureError` naming the first pair whose commutator is
    not in the span of the generators.
    """
    gens = alg.generators
    n = len(gens)
    f = np.zeros((n, n, n))
    for a in range(n):
        for b in range(a + 1, n):
            coeffs, res = alg.components(commutator(gens[a], gens[b]))
            if res >= tol:
                raise ClosureError((a, b), float(res))
            f[a, b] = coeffs
            f[b, a] = -coeffs
    return StructureConstants(f)


# ------------------------------------------------------------- builtins

def su2():
    return LieAlgebraSpec("su2", PAULI / 2j)


def u1():
    return LieAlgebraSpec("u1", np.array([[[1j]]]))


def gell_mann():
    lam = np.zeros((8, 3, 3), dtype=complex)
    lam[0][0, 1] = lam[0][1, 0] = 1
    lam[1][0, 1], lam[1][1, 0] = -1j, 1j
    lam[2][0, 0], lam[2][1, 1] = 1, -1
    lam[3][0, 2] = lam[3][2, 0] = 1
    lam[4][0, 2], lam[4][2, 0] = -1j, 1j
    lam[5][1, 2] = lam[5][2, 1] = 1
    lam[6][1, 2], lam[6][2, 1] = -1j, 1j
    lam[7] = np.diag([1, 1, -2]) / np.sqrt(3)
    return lam


def su3():
    return LieAlgebraSpec("su3", gell_mann() / 2j)


BUILTIN = {"su2": su2, "su3": su3, "u1": u1}


def builtin(name):
    try:
        return BUILTIN[name]()
    except KeyError:
        raise ValueError(f"unknown algebra {name!r}; builtins are {sorted(BUILTIN)}") from None


# -------------------------------------------------------- symmetric pairs

@dataclass(frozen=True, eq=False)
class SymmetricPairSpec:
    """Split of the generators of ``G`` into ``T`` (spanning H) and ``S``."""

    G: LieAlgebraSpec
    T_indices: Tuple[int, ...]
    S_indices: Tuple[int, ...] = None

    def __post_init__(self):
        T = tuple(int(i) for i in self.T_indices)
        S = (tuple(i for i in range(self.G.dim) if i not in T)
             if self.S_indices is None else tuple(int(i) for i in self.S_indices))
        object.__setattr__(self, "T_indices", T)
        object.__setattr__(self, "S_indices", S)
        labels = sorted(T + S)
        if labels != list(range(self.G.dim)) or not T:
            raise ValueError(f"T={T} and S={S} must partition the {self.G.dim} generators "
                             "with T non-empty")

    @cached_property
    def h(self):
        """``h[a, M, N]``: coefficient of ``S^N`` in ``[T^a, S^M]``."""
        gens = self.G.generators
        h = np.zeros((len(self.T_indices), len(self.S_indices), len(self.S_indices)))
        for ia, a in enumerate(self.T_indices):
            for iM, M in enumerate(self.S_indices):
                coeffs, _ = self.G.components(commutator(gens[a], gens[M]))
                h[ia, iM] = coeffs[list(self.S_indices)]
        return h

    def subalgebra(self):
        """The Lie algebra of H spanned by the T generators."""
        return LieAlgebraSpec(f"{self.G.name}|H", self.G.generators[list(self.T_indices)])


@dataclass
class PairReport:
    t_closure: bool
    t_closure_residual: float
    s_representation: bool
    s_representation_residual: float
    s_closure: bool
    s_closure_residual: float
    closure_constant: float
    dimension_condition: bool
    dim_G: int
    dim_H: int
    tol: float
    jacobi_residual: float
    worst_pairs: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.t_closure and self.s_representation and self.s_closure

    def to_dict(self):
        return {
            "t_closure": {"pass": self.t_closure, "residual": self.t_closure_residual},
            "s_representation": {"pass": self.s_representation,
                                 "residual": self.s_representation_residual},
            "s_closure": {"pass": self.s_closure, "residual": self.s_closure_residual,
                          "closure_constant": self.closure_constant},
            "dimension_condition": {"dim_G": self.dim_G, "dim_H": self.dim_H,
                                    "dim_G_gt_3_dim_H": self.dimension_condition,
                                    "enforced": False},
            "jacobi_residual": self.jacobi_residual,
            "worst_pairs": self.worst_pairs,
            "tol": self.tol,
            "pass": self.passed,
        }


def check_symmetric_pair(pair, tol=DEFAULT_TOL):
    """Check the three bracket conditions of a symmetric pair.

    (a) ``[T, T]`` closes on T; (b) ``[T, S]`` lies in span(S); (c) ``[S, S]``
    lies in span(T) and is proportional to ``h^{aMN} T^a`` with one fitted
    constant. The ``dim G > 3 dim H`` flag is informational and never fails
    the check.
    """
    G = pair.G
    gens = G.generators
    T, S = list(pair.T_indices), list(pair.S_indices)
    jac = structure_constants(G).jacobi_residual
    worst = {}

    def coeffs_of(i, j):
        c, res = G.components(commutator(gens[i], gens[j]))
        return c, float(res)

    res_a = 0.0
    for i in T:
        for j in T:
            c, res = coeffs_of(i, j)
            r = float(np.linalg.norm(c[S])) + res
            if r > res_a:
                res_a, worst["t_closure"] = r, [i, j]

    res_b = 0.0
    for i in T:
        for j in S:
            c, res = coeffs_of(i, j)
            r = float(np.linalg.norm(c[T])) + res
            if r > res_b:
                res_b, worst["s_representation"] = r, [i, j]

    h = pair.h
    ct = np.zeros((len(S), len(S), len(T)))
    out = np.zeros((len(S), len(S)))
    for iM, M in enumerate(S):
        for iN, N in enumerate(S):
            c, res = coeffs_of(M, N)
            ct[iM, iN] = c[T]
            out[iM, iN] = float(np.linalg.norm(c[S])) + res
    target = np.transpose(h, (1, 2, 0))  # [M, N, a]
    denom = float(np.sum(target * target))
    k = float(np.sum(ct * target) / denom) if denom > 0 else 0.0
    fit = np.sqrt(np.sum((ct - k * target) ** 2, axis=-1)) + out
    res_c = float(np.max(fit, initial=0.0))
    if fit.size and res_c > 0:
        iM, iN = np.unravel_index(int(np.argmax(fit)), fit.shape)
        worst["s_closure"] = [S[iM], S[iN]]

    return PairReport(
        t_closure=res_a < tol,
        t_closure_residual=res_a,
        s_representation=res_b < tol,
        s_representation_residual=res_b,
        s_closure=res_c < tol,
        s_closure_residual=res_c,
        closure_constant=k,
        dimension_condition=G.dim > 3 * len(T),
        dim_G=G.dim,
        dim_H=len(T),
        tol=tol,
        jacobi_residual=jac,
        worst_pairs=worst,
    )


# ------------------------------------------------------------------ files

def algebra_from_json(doc):
    """Build ``(LieAlgebraSpec, pair or None)`` from a parsed algebra document.

    ``{"builtin": "su3", "pair": {"T": [2]}}`` is accepted as a shorthand.
    Generator labels in ``pair`` are 0-based.
    """
    if "builtin" in doc:
        alg = builtin(doc["builtin"])
    else:
        n = int(doc["dim"])
        gens = np.array([[[complex(re, im) for re, im in row] for row in X]
                         for X in doc["generators"]], dtype=complex)
        if gens.shape[1:] != (n, n):
            raise ValueError(f"generators are not {n}x{n}")
        alg = LieAlgebraSpec(doc.get("name", "algebra"), gens)
    pair = None
    if "pair" in doc:
        p = doc["pair"]
        pair = SymmetricPairSpec(alg, p["T"], p.get("S"))
    return alg, pair


def load_algebra(path):
    with open(path) as fh:
        return algebra_from_json(json.load(fh))
