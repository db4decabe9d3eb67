"""
JSON problem files.

A problem file is one JSON object::

    {
      "dimension": 3,
      "U": {"anchor": [0, 0, 0], "span": [[1, 0, 0]]},
      "V": {"matrix": [[1, 0, 0], [0, 0, 1]], "rhs": [0, 1]},
      "x0": [1, 1, 1],
      "iters": 200,
      "seed": 7
    }

Each set is given either as ``anchor`` + ``span`` or as the solution set of
``matrix @ x = rhs``. ``seed`` is optional and only recorded.
"""

import json
import logging

import numpy as np

from .douglas_rachford import DrProblem
from .errors import DimensionError
from .subspace import AffineSubspace, orthonormalize

__all__ = ["ProblemFileError", "parse_problem", "load_problem", "problem_to_dict", "dump_problem"]

log = logging.getLogger(__name__)

VERBATIM_TOL = 1e-14


class ProblemFileError(ValueError):
    """Malformed problem file; the message names the offending field."""

    def __init__(self, field, msg):
        super().__init__(f"{field}: {msg}")
        self.field = field


def _reals(value, field, ndim=1):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ProblemFileError(field, "expected numbers") from None
    if ndim == 2 and arr.size == 0:
        return np.zeros((0, 0))
    if arr.ndim != ndim:
        raise ProblemFileError(field, f"expected a {ndim}-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ProblemFileError(field, "non-finite entry")
    return arr


def _check_dim(arr, dim, field):
    if arr.shape[-1] != dim:
        raise DimensionError(f"{field} has dimension {arr.shape[-1]}, expected {dim}")


def _parse_set(obj, dim, name):
    if not isinstance(obj, dict):
        raise ProblemFileError(name, "expected an object")
    if "anchor" in obj:
        anchor = _reals(obj["anchor"], f"{name}.anchor")
        _check_dim(anchor, dim, f"{name}.anchor")
        span = _reals(obj.get("span", []), f"{name}.span", ndim=2)
        if span.shape[0]:
            _check_dim(span, dim, f"{name}.span")
        if not span.shape[0]:
            basis = np.zeros((0, dim))
        elif np.allclose(span @ span.T, np.eye(span.shape[0]), rtol=0, atol=VERBATIM_TOL):
            # already orthonormal (e.g. a saved instance): keep the exact bits
            basis = span
        else:
            basis = orthonormalize(span, dim=dim)
        if basis.shape[0] < span.shape[0]:
            log.warning("%s.span: %d vectors span only %d dimensions; reduced", name, span.shape[0], basis.shape[0])
        return AffineSubspace(anchor, basis)
    if "matrix" in obj:
        if "rhs" not in obj:
            raise ProblemFileError(f"{name}.rhs", "missing")
        M = _reals(obj["matrix"], f"{name}.matrix", ndim=2)
        c = _reals(obj["rhs"], f"{name}.rhs")
        _check_dim(M, dim, f"{name}.matrix")
        if M.shape[0] != c.shape[0]:
            raise DimensionError(f"{name}.rhs has {c.shape[0]} entries for {M.shape[0]} equations")
        return AffineSubspace.from_equations(M, c)
    raise ProblemFileError(name, "needs either 'anchor' (+ 'span') or 'matrix' + 'rhs'")


def parse_problem(doc):
    """Build ``(DrProblem, iters, seed)`` from a decoded JSON object.

    Raises
    ------
    ProblemFileError
        Missing or malformed field.
    DimensionError
        Inconsistent dimensions.
    """
    if not isinstance(doc, dict):
        raise ProblemFileError("<root>", "expected a JSON object")
    for key in ("dimension", "U", "V", "x0", "iters"):
        if key not in doc:
            raise ProblemFileError(key, "missing")
    dim = doc["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ProblemFileError("dimension", "expected a positive integer")
    iters = doc["iters"]
    if not isinstance(iters, int) or isinstance(iters, bool) or iters < 1:
        raise ProblemFileError("iters", "expected a positive integer")
    seed = doc.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
        raise ProblemFileError("seed", "expected a nonnegative integer")
    U = _parse_set(doc["U"], dim, "U")
    V = _parse_set(doc["V"], dim, "V")
    x0 = _reals(doc["x0"], "x0")
    _check_dim(x0, dim, "x0")
    return DrProblem(U, V, x0), iters, seed


def load_problem(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemFileError("<json>", str(exc)) from None
    return parse_problem(doc)


def _set_to_dict(S):
    return {"anchor": S.anchor.tolist(), "span": S.basis.tolist()}


def problem_to_dict(problem, iters, seed=None):
    doc = {
        "dimension": problem.dim,
        "U": _set_to_dict(problem.U),
        "V": _set_to_dict(problem.V),
        "x0": problem.x0.tolist(),
        "iters": int(iters),
    }
    if seed is not None:
        doc["seed"] = int(seed)
    return doc


def dump_problem(problem, iters, path, seed=None):
    # float repr round-trips exactly through json
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_dict(problem, iters, seed), fh, indent=2)
        fh.write("\n")
