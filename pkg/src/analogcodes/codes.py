"""Linear analog block code constructions.

A code maps a length-k complex source vector u to a length-n codeword
v = G^H u, where G is a full-row-rank k x n generator matrix.  Every family
here is an sklearn-style transformer: construction parameters go to
``__init__``, ``fit()`` builds the generator deterministically (there is
nothing to learn from data, so ``X`` is ignored), ``transform`` encodes
row-stacked source vectors and ``inverse_transform`` applies the
least-squares maximum-likelihood decoder.

Fitted attributes:

``generator_``
    The k x n complex generator matrix G.
``gram_``
    G G^H, exactly Hermitian.
``singular_values_``
    Singular values of G, ascending.
``pseudo_inverse_``
    The cached decoder matrix B = (G G^H)^{-1} G.
"""

from __future__ import annotations

import hashlib
import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import linalg, matio
from .validation import (
    RANK_RTOL,
    MatrixFormatError,
    RankDeficientError,
    check_complex_matrix,
    check_count,
    check_row_indices,
    check_seed,
    check_vector,
)

__all__ = [
    "LinearAnalogCode",
    "DFTCode",
    "DCTCode",
    "DSTCode",
    "RepetitionCode",
    "RandomCode",
    "CustomCode",
    "normalize",
    "to_descriptor",
    "from_descriptor",
    "descriptor_id",
    "save_generator",
    "load_generator",
]

#: Γ of a normalized generator must match 1 to this tolerance.
NORMALIZED_GAMMA_TOL = 1e-9

#: Attempts before RandomCode gives up redrawing a rank-deficient sample.
MAX_RANDOM_REDRAWS = 100


class LinearAnalogCode(BaseEstimator, TransformerMixin):
    """Base class for all code families.

    Subclasses implement ``_build_generator`` and declare a ``family`` tag;
    everything else (rank validation, optional power normalization, decoder
    caching, encode/decode) is shared.
    """

    family = "custom"

    def _build_generator(self) -> np.ndarray:
        raise NotImplementedError

    def fit(self, X=None, y=None):
        """Build and validate the generator matrix.  ``X`` and ``y`` are ignored."""
        g = check_complex_matrix(self._build_generator(), "generator")
        return self._finalize_fit(g)

    def _finalize_fit(self, g: np.ndarray):
        k, n = g.shape
        s = linalg.singular_values(g)
        if k > n or s[0] <= RANK_RTOL * s[-1]:
            raise RankDeficientError(
                f"generator must have full row rank {k}: smallest singular value "
                f"{s[0]:.3e}, largest {s[-1]:.3e}"
            )
        if self.normalize:
            power_gain = float(np.sum(s * s)) / k
            scale = math.sqrt(power_gain)
            g = g / scale
            s = s / scale
        self.generator_ = g
        self.k_, self.n_ = k, n
        self.singular_values_ = s
        self.gram_ = linalg.gram(g)
        self.pseudo_inverse_ = linalg.left_pseudo_inverse(g)
        return self

    # ------------------------------------------------------------------
    # encoding / decoding

    def transform(self, X) -> np.ndarray:
        """Encode row-stacked source vectors: (m, k) -> (m, n)."""
        check_is_fitted(self, "generator_")
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != self.k_:
            raise ValueError(f"expected shape (m, {self.k_}), got {X.shape}")
        return X @ self.generator_.conj()

    def inverse_transform(self, R) -> np.ndarray:
        """ML-decode row-stacked receptions: (m, n) -> (m, k)."""
        check_is_fitted(self, "generator_")
        R = np.asarray(R)
        if R.ndim != 2 or R.shape[1] != self.n_:
            raise ValueError(f"expected shape (m, {self.n_}), got {R.shape}")
        return R @ self.pseudo_inverse_.T

    def encode(self, u) -> np.ndarray:
        """Encode one source vector: v = G^H u."""
        check_is_fitted(self, "generator_")
        u = check_vector(u, self.k_, "source vector")
        return u @ self.generator_.conj()

    def decode(self, r) -> np.ndarray:
        """ML-decode one reception, the minimizer of ||r - G^H u||^2."""
        check_is_fitted(self, "generator_")
        r = check_vector(r, self.n_, "reception")
        return self.pseudo_inverse_ @ r


class DFTCode(LinearAnalogCode):
    """Rows of the order-n unitary DFT matrix.

    Entry (i, c) of the full matrix is exp(-2j*pi*i*c/n) / sqrt(n); the
    generator keeps the rows in ``row_indices`` (default: the first k).
    Any selection satisfies G G^H = I_k.
    """

    family = "dft"

    def __init__(self, n, k=None, row_indices=None, normalize=False):
        self.n = n
        self.k = k
        self.row_indices = row_indices
        self.normalize = normalize

    def _resolve_rows(self) -> tuple[int, ...]:
        n = check_count(self.n, "n")
        if self.row_indices is None:
            if self.k is None:
                raise ValueError("either k or row_indices is required")
            k = check_count(self.k, "k")
            if k > n:
                raise ValueError(f"k must be <= n, got k={k}, n={n}")
            return tuple(range(k))
        rows = check_row_indices(self.row_indices, n, None if self.k is None else int(self.k))
        return rows

    def _build_generator(self) -> np.ndarray:
        n = int(self.n)
        rows = self._resolve_rows()
        self.row_indices_ = rows
        i = np.asarray(rows, dtype=np.float64)[:, None]
        c = np.arange(n, dtype=np.float64)[None, :]
        return np.exp(-2j * np.pi * i * c / n) / math.sqrt(n)


class DCTCode(LinearAnalogCode):
    """Rows of an order-n orthonormal DCT matrix.

    Entry (i, c) is 1/sqrt(n) for c = 0 and sqrt(2/n) * cos((2i+1) c pi / (2n))
    for c >= 1.  The matrix is real and orthogonal, so any row selection is a
    normalized (unitary) code.
    """

    family = "dct"

    def __init__(self, n, k=None, row_indices=None, normalize=False):
        self.n = n
        self.k = k
        self.row_indices = row_indices
        self.normalize = normalize

    _resolve_rows = DFTCode._resolve_rows

    def _build_generator(self) -> np.ndarray:
        n = int(self.n)
        rows = self._resolve_rows()
        self.row_indices_ = rows
        i = np.asarray(rows, dtype=np.float64)[:, None]
        c = np.arange(n, dtype=np.float64)[None, :]
        scale = np.full(n, math.sqrt(2.0 / n))
        scale[0] = math.sqrt(1.0 / n)
        return (scale[None, :] * np.cos((2 * i + 1) * c * np.pi / (2 * n))).astype(np.complex128)


class DSTCode(LinearAnalogCode):
    """Rows of the order-n orthonormal DST-I matrix.

    Entry (i, c) is sqrt(2/(n+1)) * sin((i+1)(c+1) pi / (n+1)), orthogonal
    for every n.
    """

    family = "dst"

    def __init__(self, n, k=None, row_indices=None, normalize=False):
        self.n = n
        self.k = k
        self.row_indices = row_indices
        self.normalize = normalize

    _resolve_rows = DFTCode._resolve_rows

    def _build_generator(self) -> np.ndarray:
        n = int(self.n)
        rows = self._resolve_rows()
        self.row_indices_ = rows
        i = np.asarray(rows, dtype=np.float64)[:, None]
        c = np.arange(n, dtype=np.float64)[None, :]
        return (math.sqrt(2.0 / (n + 1)) * np.sin((i + 1) * (c + 1) * np.pi / (n + 1))).astype(np.complex128)


class RepetitionCode(LinearAnalogCode):
    """Source vector repeated t times: G = [I_k, I_k, ..., I_k], n = t*k."""

    family = "repetition"

    def __init__(self, k, t, normalize=False):
        self.k = k
        self.t = t
        self.normalize = normalize

    def _build_generator(self) -> np.ndarray:
        k = check_count(self.k, "k")
        t = check_count(self.t, "t")
        return np.tile(np.eye(k, dtype=np.complex128), (1, t))


class RandomCode(LinearAnalogCode):
    """Generator with i.i.d. standard complex Gaussian entries.

    The seeded stream makes (k, n, seed) fully determine the matrix.  A
    rank-deficient draw (never seen in practice for Gaussian matrices) is
    redrawn, up to MAX_RANDOM_REDRAWS attempts.
    """

    family = "random"

    def __init__(self, k, n, seed=0, normalize=False):
        self.k = k
        self.n = n
        self.seed = seed
        self.normalize = normalize

    def _build_generator(self) -> np.ndarray:
        k = check_count(self.k, "k")
        n = check_count(self.n, "n")
        if k > n:
            raise ValueError(f"k must be <= n, got k={k}, n={n}")
        rng = np.random.default_rng(check_seed(self.seed))
        for _ in range(MAX_RANDOM_REDRAWS):
            g = (rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))) / math.sqrt(2.0)
            s = linalg.singular_values(g)
            if s[0] > RANK_RTOL * s[-1]:
                return g
        raise RankDeficientError(
            f"no full-rank draw in {MAX_RANDOM_REDRAWS} attempts for (k={k}, n={n}, seed={self.seed})"
        )


class CustomCode(LinearAnalogCode):
    """Code defined directly by a user-supplied generator matrix."""

    family = "custom"

    def __init__(self, matrix, normalize=False):
        self.matrix = matrix
        self.normalize = normalize

    def _build_generator(self) -> np.ndarray:
        return check_complex_matrix(self.matrix, "matrix").copy()


def normalize(code: LinearAnalogCode) -> LinearAnalogCode:
    """Return a fitted copy of ``code`` scaled to encoding power gain 1.

    The returned estimator carries ``normalize=True`` in its parameters, so
    its descriptor rebuilds the same scaled generator.  A code that is
    already normalized comes back with an identical matrix.
    """
    params = code.get_params()
    params["normalize"] = True
    fresh = type(code)(**params)
    if hasattr(code, "generator_"):
        if hasattr(code, "row_indices_"):
            fresh.row_indices_ = code.row_indices_
        return fresh._finalize_fit(code.generator_.copy())
    return fresh.fit()


# ----------------------------------------------------------------------
# descriptors: the serializable identity of a code

_FAMILIES: dict[str, type[LinearAnalogCode]] = {
    cls.family: cls for cls in (DFTCode, DCTCode, DSTCode, RepetitionCode, RandomCode, CustomCode)
}


def to_descriptor(code: LinearAnalogCode) -> dict:
    """Flat dict of family tag plus construction parameters of a fitted code."""
    check_is_fitted(code, "generator_")
    d: dict = {"family": code.family}
    if isinstance(code, (DFTCode, DCTCode, DSTCode)):
        d["n"] = code.n_
        d["k"] = code.k_
        d["row_indices"] = list(code.row_indices_)
    elif isinstance(code, RepetitionCode):
        d["k"] = int(code.k)
        d["t"] = int(code.t)
    elif isinstance(code, RandomCode):
        d["k"] = int(code.k)
        d["n"] = int(code.n)
        d["seed"] = int(code.seed)
    else:
        d["matrix"] = [[matio.format_entry(z) for z in row] for row in code.generator_]
        # the stored matrix is the fitted (possibly rescaled) one
        d["normalized"] = bool(code.normalize)
        return d
    d["normalized"] = bool(code.normalize)
    return d


def from_descriptor(descriptor: dict) -> LinearAnalogCode:
    """Rebuild an unfitted estimator from a descriptor dict.

    Raises ValueError naming the offending field for anything malformed.
    """
    if not isinstance(descriptor, dict):
        raise ValueError(f"code descriptor must be an object, got {type(descriptor).__name__}")
    d = dict(descriptor)
    family = str(d.pop("family", "")).lower()
    if family not in _FAMILIES:
        raise ValueError(f"unknown code family {family!r} (expected one of {sorted(_FAMILIES)})")
    norm = bool(d.pop("normalized", False))
    try:
        if family in ("dft", "dct", "dst"):
            code = _FAMILIES[family](
                n=d.pop("n"),
                k=d.pop("k", None),
                row_indices=d.pop("row_indices", None),
                normalize=norm,
            )
        elif family == "repetition":
            code = RepetitionCode(k=d.pop("k"), t=d.pop("t"), normalize=norm)
        elif family == "random":
            code = RandomCode(k=d.pop("k"), n=d.pop("n"), seed=d.pop("seed", 0), normalize=norm)
        else:
            if "path" in d:
                loaded = load_generator(d.pop("path"))
                code = CustomCode(matrix=loaded.generator_, normalize=norm)
            else:
                raw = d.pop("matrix")
                entries = [[matio.parse_entry(str(z)) for z in row] for row in raw]
                code = CustomCode(matrix=np.array(entries, dtype=np.complex128), normalize=norm)
    except KeyError as exc:
        raise ValueError(f"code descriptor for family {family!r} is missing field {exc.args[0]!r}") from None
    if d:
        raise ValueError(f"unexpected code descriptor field(s): {sorted(d)}")
    return code


def _compact_rows(rows: tuple[int, ...]) -> str:
    if list(rows) == list(range(rows[0], rows[0] + len(rows))):
        return f"{rows[0]}-{rows[-1]}" if len(rows) > 1 else f"{rows[0]}"
    return "+".join(str(i) for i in rows)


def descriptor_id(descriptor: dict) -> str:
    """Short deterministic identifier, safe for CSV cells and file names."""
    family = str(descriptor["family"]).lower()
    if family in ("dft", "dct", "dst"):
        rows = tuple(int(i) for i in descriptor["row_indices"])
        base = f"{family}_n{descriptor['n']}_k{descriptor['k']}"
        if list(rows) != list(range(len(rows))):
            base += f"_rows{_compact_rows(rows)}"
    elif family == "repetition":
        base = f"repetition_k{descriptor['k']}_t{descriptor['t']}"
    elif family == "random":
        base = f"random_k{descriptor['k']}_n{descriptor['n']}_seed{descriptor['seed']}"
    else:
        # content hash keeps distinct custom codes distinct in result tables
        payload = "\n".join(" ".join(str(z) for z in row) for row in descriptor["matrix"])
        digest = hashlib.sha256(payload.encode("ascii")).hexdigest()[:8]
        base = f"custom_{digest}"
    if descriptor.get("normalized"):
        base += "_norm"
    return base


# ----------------------------------------------------------------------
# generator files

def _header_line(code: LinearAnalogCode) -> str:
    d = to_descriptor(code)
    parts = [f"family={d['family']}"]
    if "n" in d:
        parts.append(f"n={d['n']}")
    if "k" in d:
        parts.append(f"k={d['k']}")
    if "row_indices" in d:
        parts.append("rows=" + ",".join(str(i) for i in d["row_indices"]))
    if "t" in d:
        parts.append(f"t={d['t']}")
    if "seed" in d:
        parts.append(f"seed={d['seed']}")
    parts.append(f"normalized={1 if d.get('normalized') else 0}")
    return " ".join(parts)


def save_generator(code: LinearAnalogCode, path) -> None:
    """Write a fitted code's generator in the matrix text format.

    The leading comment line records the descriptor, so ``load_generator``
    can restore the family and parameters.
    """
    check_is_fitted(code, "generator_")
    matio.save_matrix(path, code.generator_, comments=[_header_line(code)])


def _parse_header(comments: list[str]) -> dict | None:
    for line in comments:
        if not line.startswith("family="):
            continue
        d: dict = {}
        for item in line.split():
            key, _, value = item.partition("=")
            if key == "family":
                d["family"] = value
            elif key == "rows":
                d["row_indices"] = [int(x) for x in value.split(",") if x != ""]
            elif key in ("n", "k", "t", "seed"):
                d[key] = int(value)
            elif key == "normalized":
                d["normalized"] = bool(int(value))
            else:
                raise MatrixFormatError(f"unknown generator header field {key!r}")
        return d
    return None


def load_generator(path) -> LinearAnalogCode:
    """Load a generator file into a fitted estimator.

    The matrix stored in the file is authoritative: it is installed verbatim
    (so save/load round-trips are bit-identical) and only validated for shape
    against the header, full row rank, and the normalization flag.
    """
    g, comments = matio.load_matrix(path)
    header = _parse_header(comments)
    if header is None:
        code = CustomCode(matrix=g)
    else:
        family = str(header.get("family", "custom")).lower()
        if family == "custom" or family not in _FAMILIES:
            code = CustomCode(matrix=g, normalize=header.get("normalized", False))
        else:
            code = from_descriptor(header)
        expected_k = header.get("k")
        expected_n = header.get("n")
        if expected_n is None and family == "repetition" and "k" in header and "t" in header:
            expected_n = header["k"] * header["t"]
        if expected_k is not None and expected_k != g.shape[0]:
            raise MatrixFormatError(f"header says k={expected_k} but file holds {g.shape[0]} rows")
        if expected_n is not None and expected_n != g.shape[1]:
            raise MatrixFormatError(f"header says n={expected_n} but file holds {g.shape[1]} columns")
    # install the file's matrix as the fitted generator without rescaling it again
    want_normalize = bool(code.normalize)
    code.normalize = False
    try:
        code._finalize_fit(g)
    finally:
        code.normalize = want_normalize
    if isinstance(code, (DFTCode, DCTCode, DSTCode)) and header and "row_indices" in header:
        code.row_indices_ = tuple(header["row_indices"])
    if want_normalize:
        s = code.singular_values_
        power_gain = float(np.sum(s * s)) / code.k_
        if abs(power_gain - 1.0) > NORMALIZED_GAMMA_TOL:
            raise MatrixFormatError(
                f"file is flagged normalized but its encoding power gain is {power_gain!r}"
            )
    return code
