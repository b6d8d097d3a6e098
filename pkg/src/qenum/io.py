"""JSON file formats and scalar serialization.

Operator files::

    {"dims": [2, 2], "entries": [...]}

``entries`` is row-major with ``(∏dims)^2`` items.  Each item is a number, a
``[re, im]`` pair of numbers, an exact ``"p/q"`` string, or a pair of such
strings.  A file whose entries are all integers or strings loads on the exact
backend; any float switches the whole operator to floating point.

Code files carry ``{"dims": [...], "vectors": [[...], ...]}``, one list per
codeword, with the same entry syntax.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ContractError, DimensionMismatchError
from .gaussian import GaussianRational, GaussianRationalArray
from .hilbert import CodeStates, Factorization, Operator


def scalar_to_json(c):
    """Exact values become ``"p/q"`` strings (pairs when complex); floats stay numbers."""
    if isinstance(c, bool):
        return c
    if isinstance(c, int):
        return str(c)
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, GaussianRational):
        return str(c.real) if c.imag == 0 else [str(c.real), str(c.imag)]
    if isinstance(c, (complex, np.complexfloating)):
        c = complex(c)
        return c.real if c.imag == 0 else [c.real, c.imag]
    if isinstance(c, (float, np.floating)):
        return float(c)
    if isinstance(c, np.integer):
        return str(int(c))
    raise TypeError(f"cannot serialize {type(c).__name__}")


def _part(x):
    if isinstance(x, bool):
        raise ContractError("booleans are not valid entries")
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ContractError(f"bad rational {x!r}") from None
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    raise ContractError(f"bad entry {x!r}")


def scalar_from_json(v):
    """Inverse of :func:`scalar_to_json`; exact inputs give ``Fraction``/``GaussianRational``."""
    if isinstance(v, list):
        if len(v) != 2:
            raise ContractError(f"complex entries are [re, im] pairs, got {v!r}")
        re, im = (_part(x) for x in v)
        if isinstance(re, Fraction) and isinstance(im, Fraction):
            return re if im == 0 else GaussianRational(re, im)
        return complex(float(re), float(im))
    return _part(v)


def _entries_array(items, shape):
    vals = [scalar_from_json(v) for v in items]
    if len(vals) != int(np.prod(shape)):
        raise DimensionMismatchError(f"expected {int(np.prod(shape))} entries, got {len(vals)}")
    if all(isinstance(v, (Fraction, GaussianRational)) for v in vals):
        arr = np.empty(len(vals), dtype=object)
        arr[:] = vals
        return GaussianRationalArray.from_numbers(arr.reshape(shape))
    return np.array([complex(v) for v in vals], dtype=complex).reshape(shape)


def _dims(doc) -> Factorization:
    try:
        return Factorization(int(d) for d in doc["dims"])
    except (KeyError, TypeError):
        raise ContractError("file needs a 'dims' list") from None


def operator_from_json(doc: dict) -> Operator:
    fact = _dims(doc)
    if "entries" not in doc:
        raise ContractError("operator file needs 'entries'")
    d = fact.total_dim
    return Operator(fact, _entries_array(doc["entries"], (d, d)))


def operator_to_json(M: Operator) -> dict:
    if M.is_exact:
        flat = M.entries.reshape((M.dim * M.dim,)).to_numbers()
        items = [scalar_to_json(flat[i]) for i in range(len(flat))]
    else:
        items = [[float(z.real), float(z.imag)] for z in M.entries.reshape(-1)]
    return {"dims": list(M.dims), "entries": items}


def code_from_json(doc: dict) -> CodeStates:
    fact = _dims(doc)
    if "vectors" in doc:
        vecs = doc["vectors"]
        if not vecs:
            raise ContractError("code file lists no vectors")
        cols = [np.asarray(_to_complex(_entries_array(v, (fact.total_dim,)))) for v in vecs]
        return CodeStates(fact, np.stack(cols, axis=1))
    if "entries" in doc:
        return CodeStates.from_projector(operator_from_json(doc), method="columns")
    raise ContractError("code file needs 'vectors' or projector 'entries'")


def _to_complex(a):
    return a.to_complex() if isinstance(a, GaussianRationalArray) else a


def code_to_json(C: CodeStates) -> dict:
    return {
        "dims": list(C.dims),
        "vectors": [[[float(z.real), float(z.imag)] for z in C.vectors[:, k]] for k in range(C.K)],
    }


def load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ContractError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ContractError(f"{path} is not valid JSON: {exc}") from None


def load_operator(path) -> Operator:
    return operator_from_json(load_json(path))


def load_code(path) -> CodeStates:
    return code_from_json(load_json(path))


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)
