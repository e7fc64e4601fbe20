"""Exact multilinear algebra over a fixed Lie algebra basis.

Conventions, fixed once for the whole package and calibrated on the Kodaira
Vaisman identity:

* structure constants are stored for i < j only, ``[e_i, e_j] = sum_k c^k_ij e_k``;
* the invariant exterior derivative is Chevalley-Eilenberg with the
  geometers' sign, ``d(alpha)(x, y) = -alpha([x, y])`` on 1-forms, extended
  as an antiderivation;
* a k-form is a dict from strictly increasing index tuples to scalars;
* the codifferential is the geometric one, ``d* a = -sum g^{ij} i_{e_i} (nabla_{e_j} a)``
  with nabla the Levi-Civita connection; on unimodular algebras it is the
  formal adjoint of d for the g-induced pairings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import scalars
from .scalars import FLOAT, RATIONAL


def _sort_with_sign(indices):
    """Sort an index tuple, returning (sorted tuple, permutation sign); None if repeated."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return None, 0
    return tuple(idx), sign


@dataclass(frozen=True)
class ValidationReport:
    jacobi: bool
    unimodular: bool
    max_jacobi_residual: float


@dataclass(frozen=True)
class LieAlgebra:
    """A real Lie algebra given by structure constants on a fixed basis.

    brackets maps (i, j, k) with i < j (0-based) to the coefficient of e_k in
    [e_i, e_j]. Values are immutable after construction.
    """

    dim: int
    brackets: dict
    mode: str = RATIONAL
    name: str = ""

    def __post_init__(self):
        scalars.check_mode(self.mode)
        cleaned = {}
        for (i, j, k), c in self.brackets.items():
            if not (0 <= i < j < self.dim and 0 <= k < self.dim):
                raise ValueError(f"bad bracket index ({i},{j},{k}) for dim {self.dim}")
            c = scalars.scalar(c, self.mode)
            if c != 0:
                cleaned[(i, j, k)] = c
        object.__setattr__(self, "brackets", cleaned)

    def bracket_basis(self, i: int, j: int) -> np.ndarray:
        """[e_i, e_j] as a coefficient vector."""
        v = scalars.zeros(self.dim, self.mode)
        if i == j:
            return v
        sgn = scalars.one(self.mode)
        if i > j:
            i, j = j, i
            sgn = -sgn
        for k in range(self.dim):
            c = self.brackets.get((i, j, k))
            if c is not None:
                v[k] = sgn * c
        return v

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = scalars.zeros(self.dim, self.mode)
        for (i, j, k), c in self.brackets.items():
            t = c * (x[i] * y[j] - x[j] * y[i])
            if t != 0:
                out[k] = out[k] + t
        return out

    def ad(self, i: int) -> np.ndarray:
        """Matrix of ad_{e_i} (columns are [e_i, e_j])."""
        m = scalars.zeros((self.dim, self.dim), self.mode)
        for j in range(self.dim):
            m[:, j] = self.bracket_basis(i, j)
        return m

    def as_float(self) -> "LieAlgebra":
        if self.mode == FLOAT:
            return self
        return LieAlgebra(
            self.dim,
            {k: float(c) for k, c in self.brackets.items()},
            mode=FLOAT,
            name=self.name,
        )


def validate_algebra(alg: LieAlgebra, tol: float = 1e-9) -> ValidationReport:
    """Check the Jacobi identity and unimodularity; report-only, never raises."""
    worst = 0.0
    jacobi = True
    for i, j, k in itertools.combinations(range(alg.dim), 3):
        jac = (
            alg.bracket(alg.bracket_basis(i, j), _basis_vec(alg, k))
            + alg.bracket(alg.bracket_basis(j, k), _basis_vec(alg, i))
            + alg.bracket(alg.bracket_basis(k, i), _basis_vec(alg, j))
        )
        r = scalars.max_abs(jac)
        worst = max(worst, r)
    if alg.mode == RATIONAL:
        jacobi = worst == 0.0
    else:
        jacobi = worst < tol
    unimodular = True
    for i in range(alg.dim):
        tr = np.trace(alg.ad(i))
        if alg.mode == RATIONAL:
            if tr != 0:
                unimodular = False
        elif abs(float(tr)) >= tol:
            unimodular = False
    return ValidationReport(jacobi=jacobi, unimodular=unimodular, max_jacobi_residual=worst)


def _basis_vec(alg: LieAlgebra, i: int) -> np.ndarray:
    v = scalars.zeros(alg.dim, alg.mode)
    v[i] = scalars.one(alg.mode)
    return v


@dataclass
class KForm:
    """Alternating k-form with coefficients on strictly increasing index tuples."""

    dim: int
    degree: int
    coeffs: dict = field(default_factory=dict)
    mode: str = RATIONAL

    def __post_init__(self):
        cleaned = {}
        for idx, c in self.coeffs.items():
            idx = tuple(idx)
            if len(idx) != self.degree:
                raise ValueError(f"index {idx} has wrong length for degree {self.degree}")
            if any(not (0 <= a < self.dim) for a in idx):
                raise ValueError(f"index {idx} out of range for dim {self.dim}")
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"index {idx} is not strictly increasing")
            c = scalars.scalar(c, self.mode)
            if c != 0:
                cleaned[idx] = c
        self.coeffs = cleaned

    # -- algebra ---------------------------------------------------------
    def __add__(self, other: "KForm") -> "KForm":
        self._check_compat(other)
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out.get(idx, scalars.zero(self.mode)) + c
        return KForm(self.dim, self.degree, out, self.mode)

    def __sub__(self, other: "KForm") -> "KForm":
        return self + other.scale(-scalars.one(self.mode))

    def scale(self, c) -> "KForm":
        c = scalars.scalar(c, self.mode)
        return KForm(self.dim, self.degree, {i: c * v for i, v in self.coeffs.items()}, self.mode)

    def _check_compat(self, other: "KForm"):
        if (self.dim, self.degree, self.mode) != (other.dim, other.degree, other.mode):
            raise ValueError("incompatible forms")

    def coefficient(self, idx) -> object:
        srt, sign = _sort_with_sign(tuple(idx))
        if sign == 0:
            return scalars.zero(self.mode)
        return sign * self.coeffs.get(srt, scalars.zero(self.mode))

    def __call__(self, *vectors) -> object:
        """Evaluate on vectors (coefficient arrays)."""
        if len(vectors) != self.degree:
            raise ValueError("wrong number of arguments")
        total = scalars.zero(self.mode)
        for idx, c in self.coeffs.items():
            sub = np.array([[v[a] for a in idx] for v in vectors], dtype=object)
            total = total + c * scalars.det(sub if self.mode == RATIONAL else scalars.mat_to_float(sub))
        return total

    def max_abs(self) -> float:
        return scalars.max_abs(self.coeffs.values())

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    def as_float(self) -> "KForm":
        return KForm(self.dim, self.degree, {i: float(c) for i, c in self.coeffs.items()}, FLOAT)

    def as_matrix(self) -> np.ndarray:
        """Degree-2 only: antisymmetric matrix of values on basis pairs."""
        if self.degree != 2:
            raise ValueError("as_matrix is for 2-forms")
        m = scalars.zeros((self.dim, self.dim), self.mode)
        for (i, j), c in self.coeffs.items():
            m[i, j] = c
            m[j, i] = -c
        return m


def zero_form(dim: int, degree: int, mode: str) -> KForm:
    return KForm(dim, degree, {}, mode)


def basis_form(dim: int, idx, mode: str) -> KForm:
    """The dual basis form e_{i1}* ^ ... ^ e_{ik}*."""
    return KForm(dim, len(idx), {tuple(idx): scalars.one(mode)}, mode)


def one_form_from_vector(theta: np.ndarray, mode: str) -> KForm:
    return KForm(len(theta), 1, {(i,): c for i, c in enumerate(theta)}, mode)


def form_from_matrix(m: np.ndarray, mode: str) -> KForm:
    """2-form from an antisymmetric matrix of values."""
    dim = m.shape[0]
    coeffs = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            coeffs[(i, j)] = m[i, j]
    return KForm(dim, 2, coeffs, mode)


def wedge(a: KForm, b: KForm) -> KForm:
    """Graded-commutative wedge with the determinant convention."""
    if a.dim != b.dim or a.mode != b.mode:
        raise ValueError("incompatible forms")
    deg = a.degree + b.degree
    if deg > a.dim:
        return zero_form(a.dim, min(deg, a.dim), a.mode)
    out: dict = {}
    zero = scalars.zero(a.mode)
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            idx, sign = _sort_with_sign(ia + ib)
            if sign == 0:
                continue
            out[idx] = out.get(idx, zero) + sign * ca * cb
    return KForm(a.dim, deg, out, a.mode)


def ce_differential(alg: LieAlgebra, form: KForm) -> KForm:
    """Invariant exterior derivative on the Chevalley-Eilenberg complex.

    d(alpha)(x_0..x_k) = sum_{i<j} (-1)^{i+j} alpha([x_i,x_j], x_0..^i..^j..x_k).
    Degree-dim input returns the zero form (top degree).
    """
    if form.dim != alg.dim or form.mode != alg.mode:
        raise ValueError("form does not match algebra")
    if form.degree >= alg.dim:
        return zero_form(alg.dim, alg.dim, alg.mode)
    if form.degree == 0:
        return zero_form(alg.dim, 1, alg.mode)
    k = form.degree
    out: dict = {}
    zero = scalars.zero(alg.mode)
    for idx in itertools.combinations(range(alg.dim), k + 1):
        total = zero
        for a in range(k + 1):
            for b in range(a + 1, k + 1):
                rest = tuple(idx[m] for m in range(k + 1) if m not in (a, b))
                br = alg.bracket_basis(idx[a], idx[b])
                # alpha([e_a, e_b], rest): expand bracket over basis
                for t in range(alg.dim):
                    c = br[t]
                    if c == 0:
                        continue
                    val = form.coefficient((t,) + rest)
                    if val != 0:
                        total = total + ((-1) ** (a + b)) * c * val
        if total != 0:
            out[idx] = total
    return KForm(alg.dim, k + 1, out, alg.mode)


# -- metric machinery ------------------------------------------------------

def metric_dual(g: np.ndarray, form: KForm) -> np.ndarray:
    """Sharp of a 1-form: the vector with g(theta^#, x) = theta(x)."""
    if form.degree != 1:
        raise ValueError("metric_dual expects a 1-form")
    theta = np.array([form.coefficient((i,)) for i in range(form.dim)], dtype=g.dtype)
    return scalars.solve(g, theta)


def sharp(g: np.ndarray, theta_vec: np.ndarray) -> np.ndarray:
    return scalars.solve(g, theta_vec)


def flat(g: np.ndarray, x: np.ndarray) -> np.ndarray:
    return g @ x


def gram_matrix(g: np.ndarray, degree: int) -> tuple[list, np.ndarray]:
    """Gram matrix of the g-induced inner product on degree-k forms.

    Returns (index tuples, matrix) with <e_I*, e_J*> = det g^{-1}[I, J].
    """
    dim = g.shape[0]
    ginv = scalars.inv(g)
    idxs = list(itertools.combinations(range(dim), degree))
    n = len(idxs)
    mode = RATIONAL if g.dtype == object else FLOAT
    gm = scalars.zeros((n, n), mode)
    for a, I in enumerate(idxs):
        for b, J in enumerate(idxs[a:], start=a):
            sub = ginv[np.ix_(I, J)]
            d = scalars.det(sub)
            gm[a, b] = d
            gm[b, a] = d
    return idxs, gm


def form_inner(g: np.ndarray, a: KForm, b: KForm) -> object:
    """g-induced inner product of two k-forms (exact in rational mode)."""
    if a.degree != b.degree:
        raise ValueError("degrees differ")
    if a.degree == 0:
        raise ValueError("degree-0 inner product is plain multiplication")
    ginv = scalars.inv(g)
    total = scalars.zero(a.mode)
    for I, ca in a.coeffs.items():
        for J, cb in b.coeffs.items():
            sub = ginv[np.ix_(I, J)]
            total = total + ca * cb * scalars.det(sub)
    return total


def form_norm_sq(g: np.ndarray, a: KForm) -> object:
    return form_inner(g, a, a)


def tensor_norm_sq(g: np.ndarray, t: np.ndarray) -> object:
    """Squared g-norm of a (0,2)-tensor: g^{ik} g^{jl} T_ij T_kl."""
    ginv = scalars.inv(g)
    m = ginv @ t @ ginv
    return np.sum(m * t)


def vector_norm_sq(g: np.ndarray, x: np.ndarray) -> object:
    return x @ g @ x


def one_form_norm_sq(g: np.ndarray, theta_vec: np.ndarray) -> object:
    return theta_vec @ scalars.inv(g) @ theta_vec


# -- Levi-Civita coefficients (shared by codifferential and connections) ----

def koszul_gamma(alg: LieAlgebra, g: np.ndarray) -> np.ndarray:
    """Levi-Civita coefficients: gamma[i,j,:] = nabla_{e_i} e_j in the basis.

    Koszul on invariant fields:
    2 g(nabla_x y, z) = g([x,y],z) - g([y,z],x) + g([z,x],y).
    """
    d = alg.dim
    mode = alg.mode
    rhs = scalars.zeros((d, d, d), mode)
    br = [[alg.bracket_basis(i, j) for j in range(d)] for i in range(d)]
    half = scalars.scalar("1/2", mode) if mode == RATIONAL else 0.5
    for i in range(d):
        for j in range(d):
            for k in range(d):
                val = (g @ br[i][j])[k] - (g @ br[j][k])[i] + (g @ br[k][i])[j]
                rhs[i, j, k] = half * val
    gamma = scalars.zeros((d, d, d), mode)
    for i in range(d):
        gamma[i] = scalars.solve(g, rhs[i].T).T
    return gamma


def _covariant_derivative_form(alg: LieAlgebra, gamma: np.ndarray, form: KForm, i: int) -> KForm:
    """(nabla_{e_i} form) for an invariant form: -sum over slots of form(.., nabla_{e_i} e_a, ..)."""
    k = form.degree
    out: dict = {}
    zero = scalars.zero(alg.mode)
    for idx in itertools.combinations(range(alg.dim), k):
        total = zero
        for slot in range(k):
            target = idx[slot]
            nab = gamma[i, target]  # nabla_{e_i} e_target
            for t in range(alg.dim):
                c = nab[t]
                if c == 0:
                    continue
                rep = idx[:slot] + (t,) + idx[slot + 1:]
                val = form.coefficient(rep)
                if val != 0:
                    total = total - c * val
        if total != 0:
            out[idx] = total
    return KForm(alg.dim, k, out, alg.mode)


@dataclass(frozen=True)
class CodifferentialResult:
    form: KForm
    adjointness_guaranteed: bool


def codifferential(alg: LieAlgebra, g: np.ndarray, form: KForm) -> CodifferentialResult:
    """Geometric codifferential d* of an invariant k-form.

    d* a = -sum_{ij} g^{ij} i_{e_i} (nabla_{e_j} a). On unimodular algebras
    this is the formal adjoint of the invariant exterior derivative; on
    non-unimodular algebras the result carries adjointness_guaranteed=False.
    """
    if form.degree == 0:
        return CodifferentialResult(zero_form(alg.dim, 0, alg.mode),
                                    validate_algebra(alg).unimodular)
    gamma = koszul_gamma(alg, g)
    ginv = scalars.inv(g)
    k = form.degree
    out = zero_form(alg.dim, k - 1, alg.mode)
    for j in range(alg.dim):
        da = _covariant_derivative_form(alg, gamma, form, j)
        for i in range(alg.dim):
            w = ginv[i, j]
            if w == 0:
                continue
            contracted: dict = {}
            for idx, c in da.coeffs.items():
                if i not in idx:
                    continue
                pos = idx.index(i)
                rest = idx[:pos] + idx[pos + 1:]
                contracted[rest] = contracted.get(rest, scalars.zero(alg.mode)) + ((-1) ** pos) * c
            out = out + KForm(alg.dim, k - 1, contracted, alg.mode).scale(-w)
    return CodifferentialResult(out, validate_algebra(alg).unimodular)
