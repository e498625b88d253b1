"""Exact fields and dense matrices.

Two fields are supported: a prime field GF(p) with ``p > 2**40`` (the default
is the largest prime below ``2**62``) and the rationals.  Prime-field elements
are plain ints in ``[0, p)``; rationals are :class:`fractions.Fraction`.

Rank, row reduction and kernels go through python-flint when it is available
(``nmod_mat`` / ``fmpq_mat``).  A pure-Python implementation (Gaussian
elimination mod p, fraction-free Bareiss elimination over the integers) is
kept alongside, both as a fallback and as an independent check of the fast
path.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

try:
    import flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

DEFAULT_PRIME = 4611686018427387847  # 2**62 - 57
MIN_PRIME = 2**40
RATIONAL_SAMPLE_BOUND = 999

BACKENDS = ("flint", "python")


def _is_prime(p: int) -> bool:
    if flint is not None:
        return bool(flint.fmpz(p).is_prime())
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for p < 3.3e24, probabilistic beyond
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """A prime field ``GF(p)`` (``kind='prime'``) or the rationals."""

    kind: str = "prime"
    p: int | None = DEFAULT_PRIME

    def __post_init__(self):
        if self.kind == "prime":
            if self.p is None or self.p <= MIN_PRIME:
                raise ValueError(f"prime field needs p > 2**40, got {self.p}")
            if not _is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
        elif self.kind == "rational":
            object.__setattr__(self, "p", None)
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "Field":
        return cls("prime", p)

    @classmethod
    def rational(cls) -> "Field":
        return cls("rational", None)

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    def __repr__(self):
        return f"GF({self.p})" if self.is_prime else "QQ"

    # -- elements ---------------------------------------------------------

    def __call__(self, x) -> int | Fraction:
        """Coerce an int, Fraction or ``"a/b"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.is_prime:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{x} has no image mod {self.p}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    @property
    def zero(self):
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.is_prime else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_prime else a - b

    def mul(self, a, b):
        return a * b % self.p if self.is_prime else a * b

    def neg(self, a):
        return -a % self.p if self.is_prime else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.is_prime else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random(self, rng: random.Random):
        """Uniform over GF(p); integers in [-999, 999] over QQ."""
        if self.is_prime:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND))

    def random_nonzero(self, rng: random.Random):
        while True:
            x = self.random(rng)
            if x != 0:
                return x

    def to_str(self, a) -> str:
        if self.is_prime:
            return str(a)
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def to_dict(self) -> dict:
        if self.is_prime:
            return {"kind": "prime", "p": str(self.p)}
        return {"kind": "rational"}

    @classmethod
    def from_dict(cls, data: dict) -> "Field":
        if data.get("kind") == "rational":
            return cls.rational()
        return cls.prime(int(data.get("p", DEFAULT_PRIME)))


DEFAULT_FIELD = Field.prime()


@dataclass(frozen=True)
class ExactMatrix:
    """Dense row-major matrix over an exact field."""

    rows: int
    cols: int
    entries: tuple
    field: Field = DEFAULT_FIELD

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = DEFAULT_FIELD, cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(field(x) for r in rows for x in r), field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, field: Field = DEFAULT_FIELD):
        cols = len(columns)
        entries = [field.zero] * (nrows * cols)
        for j, c in enumerate(columns):
            if len(c) != nrows:
                raise ValueError("ragged columns")
            for i, x in enumerate(c):
                entries[i * cols + j] = field(x)
        return cls(nrows, cols, tuple(entries), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = DEFAULT_FIELD):
        return cls(rows, cols, (field.zero,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: Field = DEFAULT_FIELD):
        e = [field.zero] * (n * n)
        for i in range(n):
            e[i * n + i] = field.one
        return cls(n, n, tuple(e), field)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        r, c = self.rows, self.cols
        e = self.entries
        return ExactMatrix(c, r, tuple(e[i * c + j] for j in range(c) for i in range(r)), self.field)

    def select_columns(self, idx: Sequence[int]) -> "ExactMatrix":
        c = self.cols
        e = self.entries
        return ExactMatrix(
            self.rows, len(idx), tuple(e[i * c + j] for i in range(self.rows) for j in idx), self.field
        )

    def select_rows(self, idx: Sequence[int]) -> "ExactMatrix":
        c = self.cols
        e = self.entries
        return ExactMatrix(len(idx), c, tuple(e[i * c + j] for i in idx for j in range(c)), self.field)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        F = self.field
        return ExactMatrix(self.rows, self.cols, tuple(F.add(a, b) for a, b in zip(self.entries, other.entries)), F)

    def scale(self, c) -> "ExactMatrix":
        F = self.field
        c = F(c)
        return ExactMatrix(self.rows, self.cols, tuple(F.mul(c, a) for a in self.entries), F)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return matmul(self, other)

    def apply(self, v: Sequence) -> list:
        F = self.field
        c = self.cols
        out = []
        for i in range(self.rows):
            row = self.entries[i * c:(i + 1) * c]
            s = sum(a * b for a, b in zip(row, v))
            out.append(s % F.p if F.is_prime else s)
        return out


def hstack(blocks: Sequence[ExactMatrix]) -> ExactMatrix:
    blocks = list(blocks)
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("hstack: row counts differ")
    rowlists = [[] for _ in range(rows)]
    for b in blocks:
        for i, r in enumerate(b.to_rows()):
            rowlists[i].extend(r)
    cols = sum(b.cols for b in blocks)
    return ExactMatrix(rows, cols, tuple(x for r in rowlists for x in r), blocks[0].field)


def vstack(blocks: Sequence[ExactMatrix]) -> ExactMatrix:
    blocks = list(blocks)
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("vstack: column counts differ")
    return ExactMatrix(sum(b.rows for b in blocks), cols, tuple(x for b in blocks for x in b.entries), blocks[0].field)


# -- backend selection ----------------------------------------------------

def _pick_backend(M: ExactMatrix, backend: str | None) -> str:
    if backend is None:
        backend = "flint" if flint is not None else "python"
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "flint":
        if flint is None:
            raise RuntimeError("python-flint is not installed")
        if M.field.is_prime and M.field.p >= 2**63:
            return "python"
    return backend


def _to_flint(M: ExactMatrix):
    e = M.entries
    if M.field.is_prime:
        nz = [k for k, x in enumerate(e) if x]
        if 4 * len(nz) >= len(e):
            return flint.nmod_mat(M.rows, M.cols, list(e), M.field.p)
        A = flint.nmod_mat(M.rows, M.cols, M.field.p)
        c = M.cols
        for k in nz:
            A[k // c, k % c] = e[k]
        return A
    return flint.fmpq_mat(M.rows, M.cols, [flint.fmpq(x.numerator, x.denominator) for x in e])


def _flint_value(x, field: Field):
    return int(x) if field.is_prime else Fraction(int(x.p), int(x.q))


def _from_flint(A, field: Field, nonzero_rows: int | None = None) -> ExactMatrix:
    rows, cols = A.nrows(), A.ncols()
    if nonzero_rows is None:
        if field.is_prime:
            e = tuple(int(x) for x in A.entries())
        else:
            e = tuple(Fraction(int(x.p), int(x.q)) for x in A.entries())
        return ExactMatrix(rows, cols, e, field)
    head = [_flint_value(A[i, j], field) for i in range(nonzero_rows) for j in range(cols)]
    tail = [field.zero] * ((rows - nonzero_rows) * cols)
    return ExactMatrix(rows, cols, tuple(head + tail), field)


# -- pure python elimination ----------------------------------------------

def _gauss_rref_mod_p(rows: list[list[int]], ncols: int, p: int):
    """In-place RREF over GF(p); returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        pr = [x * inv % p for x in rows[r]]
        rows[r] = pr
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


def _clear_denominators(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def bareiss_rank(rows: list[list[int]], ncols: int) -> tuple[int, list[int]]:
    """Fraction-free elimination over the integers; returns (rank, pivot columns)."""
    A = [list(r) for r in rows]
    nrows = len(A)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        a = A[r][c]
        for i in range(r + 1, nrows):
            b = A[i][c]
            Ai, Ar = A[i], A[r]
            # exact division by the previous pivot (Sylvester's identity)
            A[i] = [(a * Ai[k] - b * Ar[k]) // prev for k in range(ncols)]
        prev = a
        pivots.append(c)
        r += 1
    return r, pivots


def _rref_python(M: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    F = M.field
    rows = M.to_rows()
    if F.is_prime:
        pivots = _gauss_rref_mod_p(rows, M.cols, F.p)
    else:
        pivots = []
        r = 0
        for c in range(M.cols):
            if r == len(rows):
                break
            piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = 1 / rows[r][c]
            pr = [x * inv for x in rows[r]]
            rows[r] = pr
            for i in range(len(rows)):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
            pivots.append(c)
            r += 1
    return ExactMatrix(M.rows, M.cols, tuple(x for row in rows for x in row), F), pivots


# -- public operations ----------------------------------------------------

def rref(M: ExactMatrix, backend: str | None = None) -> tuple[ExactMatrix, list[int]]:
    """Reduced row echelon form and its pivot columns."""
    if M.rows == 0 or M.cols == 0:
        return M, []
    if _pick_backend(M, backend) == "python":
        return _rref_python(M)
    R, rk = _to_flint(M).rref()
    R = _from_flint(R, M.field, nonzero_rows=rk)
    pivots = []
    c = 0
    for i in range(rk):
        while R[i, c] == 0:
            c += 1
        pivots.append(c)
        c += 1
    return R, pivots


def rank(M: ExactMatrix, backend: str | None = None) -> int:
    """Exact rank over the matrix's field."""
    if M.rows == 0 or M.cols == 0:
        return 0
    backend = _pick_backend(M, backend)
    if backend == "flint":
        return _to_flint(M).rank()
    if M.field.is_prime:
        return len(_gauss_rref_mod_p(M.to_rows(), M.cols, M.field.p))
    return bareiss_rank(_clear_denominators(M.to_rows()), M.cols)[0]


def kernel_basis(M: ExactMatrix, backend: str | None = None) -> list[list]:
    """Basis of ``{v : M v = 0}``, one vector per free column of the RREF."""
    F = M.field
    if M.cols == 0:
        return []
    R, pivots = rref(M, backend)
    pivset = set(pivots)
    basis = []
    for f in range(M.cols):
        if f in pivset:
            continue
        v = [F.zero] * M.cols
        v[f] = F.one
        for r, c in enumerate(pivots):
            v[c] = F.neg(R[r, f])
        basis.append(v)
    return basis


def column_space_basis(M: ExactMatrix, backend: str | None = None) -> tuple[list[int], ExactMatrix]:
    """Greedy left-to-right independent columns and the matrix they form."""
    _, pivots = rref(M, backend)
    return pivots, M.select_columns(pivots)


def matmul(A: ExactMatrix, B: ExactMatrix, backend: str | None = None) -> ExactMatrix:
    if A.cols != B.rows:
        raise ValueError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    F = A.field
    if A.rows == 0 or B.cols == 0 or A.cols == 0:
        return ExactMatrix.zeros(A.rows, B.cols, F)
    if _pick_backend(A, backend) == "flint":
        return _from_flint(_to_flint(A) * _to_flint(B), F)
    Bt = B.transpose().to_rows()
    out = []
    for row in A.to_rows():
        for col in Bt:
            s = sum(a * b for a, b in zip(row, col))
            out.append(s % F.p if F.is_prime else s)
    return ExactMatrix(A.rows, B.cols, tuple(out), F)


def linear_combination(vectors: Iterable[Sequence], coeffs: Sequence, field: Field) -> list:
    out = None
    for v, c in zip(vectors, coeffs):
        if out is None:
            out = [c * x for x in v]
        else:
            out = [a + c * x for a, x in zip(out, v)]
    if out is None:
        return []
    return [x % field.p for x in out] if field.is_prime else out
