"""Sigmoid-kernel soft-margin SVM trained with sequential minimal optimization.

The kernel tanh(gamma*<x,y> + coef0) is not positive semidefinite, so the
pairwise subproblem can lose its curvature; when eta = K11 + K22 - 2*K12
is not positive the objective is evaluated at both box endpoints and the
better endpoint taken.  Pair selection is first order: the worst KKT
violator, partnered with the point of maximal |E_i - E_j|, falling back to
a seeded random sweep so runs are reproducible.

Margins are mapped to probabilities with Platt scaling: a two-parameter
sigmoid 1/(1 + exp(A*f + B)) fitted by Newton iteration with backtracking
on the smoothed-target negative log-likelihood.
"""

from __future__ import annotations

import math
import random
from collections import OrderedDict
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import sparse

from .dataset import Label
from .errors import ParseError, ValidationError
from .features import SparseVector

_MODEL_MAGIC = "tweetinfo-svm-v1"
# widest sigmoid argument we evaluate; keeps probabilities strictly inside (0,1)
_SIGMOID_CLIP = 30.0


@dataclass(frozen=True)
class SvmParams:
    c: float = 1.0
    gamma: float | None = None  # None: 1/n_features at training time
    coef0: float = 0.0
    tol: float = 1e-3
    max_passes: int | None = None  # None: 10 * n_samples at training time

    def __post_init__(self):
        if self.c <= 0:
            raise ValidationError(f"C must be positive, got {self.c}")
        if self.gamma is not None and self.gamma <= 0:
            raise ValidationError(f"gamma must be positive, got {self.gamma}")
        if self.tol <= 0:
            raise ValidationError(f"tol must be positive, got {self.tol}")
        if self.max_passes is not None and self.max_passes < 1:
            raise ValidationError(f"max_passes must be >= 1, got {self.max_passes}")


@dataclass(frozen=True)
class FitReport:
    converged: bool
    passes: int
    max_kkt_violation: float
    n_support: int
    dual_objective: float
    objective_trace: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class SvmModel:
    support_vectors: tuple[SparseVector, ...]
    dual_coefs: np.ndarray  # alpha_i * y_i
    bias: float
    params: SvmParams  # gamma/max_passes resolved to concrete values
    platt_a: float | None = None
    platt_b: float | None = None
    fit_report: FitReport | None = field(default=None, compare=False)

    @property
    def dimension(self) -> int:
        return self.support_vectors[0].dimension


@dataclass(frozen=True)
class ConfidencePair:
    decision: float
    probability: float


def _sigmoid(z: float) -> float:
    """1/(1+exp(z)), clipped so the result stays strictly inside (0,1)."""
    z = min(max(z, -_SIGMOID_CLIP), _SIGMOID_CLIP)
    if z >= 0:
        ez = math.exp(-z)
        return ez / (1.0 + ez)
    return 1.0 / (1.0 + math.exp(z))


def kernel_sigmoid(x: SparseVector, y: SparseVector, gamma: float, coef0: float) -> float:
    """tanh(gamma * <x, y> + coef0)."""
    return math.tanh(gamma * x.dot(y) + coef0)


def _stack(vectors) -> sparse.csr_matrix:
    n = len(vectors)
    dim = vectors[0].dimension
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        if v.dimension != dim:
            raise ValidationError("vectors have inconsistent dimensions")
        indptr[i + 1] = indptr[i] + v.nnz
    indices = np.concatenate([v.indices for v in vectors]) if n else np.empty(0)
    data = np.concatenate([v.values for v in vectors]) if n else np.empty(0)
    return sparse.csr_matrix((data, indices, indptr), shape=(n, dim))


class _KernelCache:
    """LRU cache of kernel rows K[i, :] over the training set."""

    def __init__(self, x: sparse.csr_matrix, gamma: float, coef0: float, budget: int):
        self._x = x
        self._gamma = gamma
        self._coef0 = coef0
        self._budget = max(2, budget)
        self._rows: OrderedDict[int, np.ndarray] = OrderedDict()
        self.computed = 0

    def row(self, i: int) -> np.ndarray:
        cached = self._rows.get(i)
        if cached is not None:
            self._rows.move_to_end(i)
            return cached
        dots = self._x @ self._x.getrow(i).T
        row = np.tanh(self._gamma * dots.toarray().ravel() + self._coef0)
        self.computed += 1
        self._rows[i] = row
        if len(self._rows) > self._budget:
            self._rows.popitem(last=False)
        return row


def _labels_to_y(labels) -> np.ndarray:
    y = np.array(
        [1.0 if lab == Label.INFORMATIVE else -1.0 for lab in labels], dtype=np.float64
    )
    return y


def train_svm(
    vectors,
    labels,
    params: SvmParams = SvmParams(),
    seed: int = 0,
    cache_rows: int = 512,
    debug: bool = False,
) -> SvmModel:
    """Solve the dual soft-margin problem by SMO.

    Stops when every point satisfies the KKT conditions within params.tol,
    or after max_passes outer iterations (reported via fit_report).
    INFORMATIVE maps to y=+1.
    """
    if len(vectors) != len(labels):
        raise ValidationError("vectors and labels must have equal length")
    if len(vectors) < 2:
        raise ValidationError("need at least 2 training points")
    y = _labels_to_y(labels)
    if np.all(y > 0) or np.all(y < 0):
        missing = Label.UNINFORMATIVE if y[0] > 0 else Label.INFORMATIVE
        raise ValidationError(
            f"training data contains a single class; no {missing.name} examples"
        )

    x = _stack(vectors)
    n = x.shape[0]
    gamma = params.gamma if params.gamma is not None else 1.0 / x.shape[1]
    max_passes = params.max_passes if params.max_passes is not None else 10 * n
    c = params.c
    tol = params.tol
    resolved = replace(params, gamma=gamma, max_passes=max_passes)

    cache = _KernelCache(x, gamma, params.coef0, cache_rows)
    rng = random.Random(seed)
    alpha = np.zeros(n)
    b = 0.0
    errors = -y.copy()  # E_i = f(x_i) - y_i with f = 0 initially
    trace: list[float] = []
    dual_obj = 0.0

    def take_step(i1: int, i2: int) -> bool:
        nonlocal b, dual_obj, errors
        if i1 == i2:
            return False
        a1_old, a2_old = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        e1, e2 = errors[i1], errors[i2]
        s = y1 * y2
        if s > 0:
            lo = max(0.0, a1_old + a2_old - c)
            hi = min(c, a1_old + a2_old)
        else:
            lo = max(0.0, a2_old - a1_old)
            hi = min(c, c + a2_old - a1_old)
        if hi - lo < 1e-12:
            return False
        k1 = cache.row(i1)
        k2 = cache.row(i2)
        k11, k22, k12 = k1[i1], k2[i2], k1[i2]
        eta = k11 + k22 - 2.0 * k12
        snap = 1e-10 * c
        if eta > 1e-15:
            a2 = a2_old + y2 * (e1 - e2) / eta
            a2 = min(max(a2, lo), hi)
        else:
            # Non-positive curvature (non-Mercer kernel): the restricted dual
            # D(a2_old + d) - D(a2_old) = d*y2*(e1-e2) - eta*d^2/2 is convex
            # or flat, so the maximum sits at a box endpoint.
            gain_lo = (lo - a2_old) * y2 * (e1 - e2) - 0.5 * eta * (lo - a2_old) ** 2
            gain_hi = (hi - a2_old) * y2 * (e1 - e2) - 0.5 * eta * (hi - a2_old) ** 2
            if gain_lo > gain_hi + 1e-12:
                a2 = lo
            elif gain_hi > gain_lo + 1e-12:
                a2 = hi
            else:
                return False
        # snap to the interval ends so bound alphas are exactly 0 or C;
        # an alpha stranded within float noise of a bound would otherwise
        # count as movable and stall the final refinement steps
        if a2 - lo < snap:
            a2 = lo
        elif hi - a2 < snap:
            a2 = hi
        if abs(a2 - a2_old) < 1e-14 * (a2 + a2_old + 1e-14):
            return False
        a1 = a1_old + s * (a2_old - a2)
        # snap a1 exactly onto a grazed bound and recompute a2 along the
        # constraint line, so sum(alpha*y) is preserved to the last bit
        if a1 < snap:
            a1 = 0.0
            a2 = a2_old + s * a1_old
        elif c - a1 < snap:
            a1 = c
            a2 = a2_old + s * (a1_old - c)
        a2 = min(max(a2, lo), hi)

        d1, d2 = a1 - a1_old, a2 - a2_old
        b_old = b
        b1 = b_old - e1 - y1 * d1 * k11 - y2 * d2 * k12
        b2 = b_old - e2 - y1 * d1 * k12 - y2 * d2 * k22
        if 0.0 < a1 < c:
            b = b1
        elif 0.0 < a2 < c:
            b = b2
        else:
            b = 0.5 * (b1 + b2)
        alpha[i1], alpha[i2] = a1, a2
        errors += y1 * d1 * k1 + y2 * d2 * k2 + (b - b_old)
        if debug:
            delta = (a2 - a2_old) * y2 * (e1 - e2) - 0.5 * eta * (a2 - a2_old) ** 2
            dual_obj += delta
            trace.append(dual_obj)
        return True

    def kkt_gap():
        """Bias-independent optimality gap (maximal violating pair).

        A solution is optimal iff some b satisfies every KKT condition.
        Points that may still be pushed up (alpha<C, y=+1 or alpha>0, y=-1)
        lower-bound b; the mirror set upper-bounds it.  The gap between the
        two extremes is independent of the current bias estimate.
        """
        up = ((alpha < c) & (y > 0)) | ((alpha > 0.0) & (y < 0))
        low = ((alpha > 0.0) & (y > 0)) | ((alpha < c) & (y < 0))
        e_up = np.where(up, errors, np.inf)
        e_low = np.where(low, errors, -np.inf)
        i_up = int(np.argmin(e_up))
        i_low = int(np.argmax(e_low))
        gap = float(errors[i_low] - errors[i_up])
        return gap, i_up, i_low

    def fallback_anchors(i_up: int, i_low: int) -> list[int]:
        # every point that violates the pairwise criterion against the
        # opposite extreme could still anchor a productive step
        up = ((alpha < c) & (y > 0)) | ((alpha > 0.0) & (y < 0))
        low = ((alpha > 0.0) & (y > 0)) | ((alpha < c) & (y < 0))
        viol_up = up & (errors < errors[i_low] - 2.0 * tol)
        viol_low = low & (errors > errors[i_up] + 2.0 * tol)
        anchors = np.nonzero(viol_up | viol_low)[0].tolist()
        rng.shuffle(anchors)
        return anchors

    passes = 0
    while passes < max_passes:
        passes += 1
        gap, i_up, i_low = kkt_gap()
        if gap <= 2.0 * tol:
            break
        stepped = take_step(i_up, i_low)
        if not stepped:
            # seeded random fallback sweep over all remaining violators
            for anchor in fallback_anchors(i_up, i_low):
                partner = int(np.argmax(np.abs(errors - errors[anchor])))
                if take_step(partner, anchor):
                    stepped = True
                    break
                sweep = list(range(n))
                rng.shuffle(sweep)
                for partner in sweep:
                    if take_step(partner, anchor):
                        stepped = True
                        break
                if stepped:
                    break
        if not stepped:
            # Pairwise fixed point: no violating pair admits an ascent step.
            # With a positive semidefinite kernel this only happens at the
            # optimum; the sigmoid kernel can stall earlier (reported).
            break

    # Center the bias inside its KKT-feasible interval [b_lo, b_hi]; with a
    # free support vector the interval is already (almost) a point.
    gap, i_up, i_low = kkt_gap()
    b_shift = -0.5 * (errors[i_up] + errors[i_low])
    b += b_shift
    errors += b_shift
    max_viol = max(0.0, 0.5 * gap)
    converged = max_viol <= tol

    keep = alpha > 1e-12
    if not np.any(keep):
        raise ValidationError("training produced no support vectors")
    support = tuple(v for v, k in zip(vectors, keep) if k)
    dual_coefs = (alpha * y)[keep].copy()
    report = FitReport(
        converged=converged,
        passes=passes,
        max_kkt_violation=max_viol,
        n_support=int(keep.sum()),
        dual_objective=dual_obj if debug else float("nan"),
        objective_trace=tuple(trace),
    )
    return SvmModel(
        support_vectors=support,
        dual_coefs=dual_coefs,
        bias=float(b),
        params=resolved,
        fit_report=report,
    )


def decision(model: SvmModel, x: SparseVector) -> float:
    """f(x) = sum_i dual_coef_i * k(sv_i, x) + bias."""
    if x.dimension != model.dimension:
        raise ValidationError(
            f"dimension mismatch: model={model.dimension}, input={x.dimension}"
        )
    total = 0.0
    for coef, sv in zip(model.dual_coefs, model.support_vectors):
        total += coef * kernel_sigmoid(sv, x, model.params.gamma, model.params.coef0)
    return total + model.bias


def decision_batch(model: SvmModel, vectors) -> np.ndarray:
    if not vectors:
        return np.empty(0)
    for v in vectors:
        if v.dimension != model.dimension:
            raise ValidationError(
                f"dimension mismatch: model={model.dimension}, input={v.dimension}"
            )
    x = _stack(vectors)
    sv = _stack(model.support_vectors)
    k = np.tanh(
        model.params.gamma * (x @ sv.T).toarray() + model.params.coef0
    )
    return k @ model.dual_coefs + model.bias


def fit_platt(decisions, labels) -> tuple[float, float]:
    """Fit (A, B) of p = 1/(1+exp(A*f+B)) by Newton with backtracking.

    Targets use Platt smoothing t+ = (N+ + 1)/(N+ + 2), t- = 1/(N- + 2).
    Converged when the gradient infinity-norm drops below 1e-5; at most 100
    iterations.
    """
    f = np.asarray(decisions, dtype=np.float64)
    y = _labels_to_y(labels)
    if f.shape != y.shape:
        raise ValidationError("decisions and labels must have equal length")
    n_pos = int((y > 0).sum())
    n_neg = int((y < 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("Platt fitting needs both classes")
    t = np.where(y > 0, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))

    def nll(a: float, bb: float) -> float:
        z = a * f + bb
        # term = -t*log(p) - (1-t)*log(1-p) evaluated stably
        return float(
            np.sum(np.where(z >= 0, t * z + np.log1p(np.exp(-np.abs(z))),
                            (t - 1.0) * z + np.log1p(np.exp(-np.abs(z)))))
        )

    a, bb = 0.0, math.log((n_neg + 1.0) / (n_pos + 1.0))
    value = nll(a, bb)
    sigma = 1e-12  # Hessian ridge
    for _ in range(100):
        z = a * f + bb
        p = np.where(z >= 0, np.exp(-z) / (1.0 + np.exp(-z)), 1.0 / (1.0 + np.exp(z)))
        d = t - p  # dNLL/dz
        g_a = float(np.dot(d, f))
        g_b = float(d.sum())
        if max(abs(g_a), abs(g_b)) < 1e-5:
            break
        w = p * (1.0 - p)
        h_aa = float(np.dot(w, f * f)) + sigma
        h_bb = float(w.sum()) + sigma
        h_ab = float(np.dot(w, f))
        det = h_aa * h_bb - h_ab * h_ab
        step_a = -(h_bb * g_a - h_ab * g_b) / det
        step_b = -(-h_ab * g_a + h_aa * g_b) / det
        descent = g_a * step_a + g_b * step_b
        stepsize = 1.0
        while stepsize >= 1e-10:
            cand_a, cand_b = a + stepsize * step_a, bb + stepsize * step_b
            cand_value = nll(cand_a, cand_b)
            if cand_value < value + 1e-4 * stepsize * descent:
                a, bb, value = cand_a, cand_b, cand_value
                break
            stepsize *= 0.5
        else:
            break  # line search failed; gradient is numerically flat
    return a, bb


def platt_probability(platt_a: float, platt_b: float, decision_value: float) -> float:
    return _sigmoid(platt_a * decision_value + platt_b)


def confidence(model: SvmModel, x: SparseVector) -> ConfidencePair:
    if model.platt_a is None or model.platt_b is None:
        raise ValidationError("model has no Platt calibration; fit it first")
    f = decision(model, x)
    return ConfidencePair(f, platt_probability(model.platt_a, model.platt_b, f))


def predict_proba(model: SvmModel, x: SparseVector) -> float:
    """P(INFORMATIVE) via the fitted Platt sigmoid."""
    return confidence(model, x).probability


def predict_proba_batch(model: SvmModel, vectors) -> np.ndarray:
    if model.platt_a is None or model.platt_b is None:
        raise ValidationError("model has no Platt calibration; fit it first")
    f = decision_batch(model, vectors)
    z = np.clip(model.platt_a * f + model.platt_b, -_SIGMOID_CLIP, _SIGMOID_CLIP)
    return np.where(z >= 0, np.exp(-z) / (1.0 + np.exp(-z)), 1.0 / (1.0 + np.exp(z)))


def calibrate(model: SvmModel, vectors, labels) -> SvmModel:
    """Return a copy of the model with Platt (A, B) fitted on the given data."""
    decisions = decision_batch(model, vectors)
    a, bb = fit_platt(decisions, labels)
    return replace(model, platt_a=a, platt_b=bb)


def save_model(path, model: SvmModel) -> None:
    """Self-describing text format; floats stored exactly via repr."""
    p = model.params
    if p.gamma is None or p.max_passes is None:
        raise ValidationError("cannot persist a model with unresolved parameters")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{_MODEL_MAGIC}\n")
        fh.write(f"c\t{p.c!r}\n")
        fh.write(f"gamma\t{p.gamma!r}\n")
        fh.write(f"coef0\t{p.coef0!r}\n")
        fh.write(f"tol\t{p.tol!r}\n")
        fh.write(f"max_passes\t{p.max_passes}\n")
        fh.write(f"dimension\t{model.dimension}\n")
        fh.write(f"bias\t{model.bias!r}\n")
        fh.write(f"platt_a\t{'none' if model.platt_a is None else repr(model.platt_a)}\n")
        fh.write(f"platt_b\t{'none' if model.platt_b is None else repr(model.platt_b)}\n")
        fh.write(f"n_support\t{len(model.support_vectors)}\n")
        for coef, sv in zip(model.dual_coefs, model.support_vectors):
            cells = " ".join(
                f"{int(i)}:{float(v)!r}" for i, v in zip(sv.indices, sv.values)
            )
            fh.write(f"{float(coef)!r}\t{cells}\n")


def load_model(path) -> SvmModel:
    with open(path, encoding="utf-8", newline="\n") as fh:
        magic = fh.readline().rstrip("\n")
        if magic != _MODEL_MAGIC:
            raise ParseError(f"not a {_MODEL_MAGIC} file", path=str(path), line=1)
        header: dict[str, str] = {}
        lineno = 1
        for _ in range(10):
            lineno += 1
            key, _, value = fh.readline().rstrip("\n").partition("\t")
            if not key:
                raise ParseError("truncated model header", path=str(path), line=lineno)
            header[key] = value
        try:
            params = SvmParams(
                c=float(header["c"]),
                gamma=float(header["gamma"]),
                coef0=float(header["coef0"]),
                tol=float(header["tol"]),
                max_passes=int(header["max_passes"]),
            )
            dimension = int(header["dimension"])
            bias = float(header["bias"])
            platt_a = None if header["platt_a"] == "none" else float(header["platt_a"])
            platt_b = None if header["platt_b"] == "none" else float(header["platt_b"])
            n_support = int(header["n_support"])
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad model header: {exc}", path=str(path)) from None
        coefs = []
        vectors = []
        for row in range(n_support):
            lineno += 1
            line = fh.readline().rstrip("\n")
            if not line:
                raise ParseError(
                    f"expected {n_support} support vectors, found {row}",
                    path=str(path),
                    line=lineno,
                )
            coef_s, _, cells = line.partition("\t")
            coefs.append(float(coef_s))
            if cells:
                pairs = [cell.split(":", 1) for cell in cells.split(" ")]
                idx = np.array([int(i) for i, _ in pairs], dtype=np.int64)
                val = np.array([float(v) for _, v in pairs])
            else:
                idx = np.empty(0, dtype=np.int64)
                val = np.empty(0)
            vectors.append(SparseVector(idx, val, dimension))
    return SvmModel(
        support_vectors=tuple(vectors),
        dual_coefs=np.array(coefs),
        bias=bias,
        params=params,
        platt_a=platt_a,
        platt_b=platt_b,
    )
