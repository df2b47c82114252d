"""Finitely presented group arithmetic at desk scale.

Words are sequences of signed 1-based generator indices; nothing here solves
the word problem.  The decidable core is integer Smith normal form with
recorded unimodular transforms, abelianization via the relator exponent-sum
matrix, the named presentations of the Pham-Brieskorn circle of groups, the
triangle-group trichotomy, the homology-sphere criterion, and the covering
matrix exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class GroupError(Exception):
    pass


class InvalidParams(GroupError):
    pass


class NotCoprime(GroupError):
    pass


class WrongShape(GroupError):
    pass


Word = tuple[int, ...]


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        n = len(self.generators)
        for word in self.relators:
            for letter in word:
                if letter == 0 or abs(letter) > n:
                    raise GroupError(f"letter {letter} out of range in relator {word}")

    def spell(self, word: Word) -> str:
        if not word:
            return "1"
        parts = []
        i = 0
        while i < len(word):
            letter = word[i]
            j = i
            while j < len(word) and word[j] == letter:
                j += 1
            count = (j - i) * (1 if letter > 0 else -1)
            name = self.generators[abs(letter) - 1]
            parts.append(name if count == 1 else f"{name}^{count}")
            i = j
        return "*".join(parts)


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank + Z/d1 + ... with the divisibility chain d1 | d2 | ..."""

    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        for d in self.torsion:
            if d <= 1:
                raise GroupError("torsion coefficients must exceed 1")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise GroupError("torsion coefficients must form a divisibility chain")

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self):
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# integer linear algebra


def identity_matrix(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def det_int(matrix) -> int:
    """Exact integer determinant (fraction-free elimination)."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(matrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """U, S, V with U*M*V = S diagonal, d1 | d2 | ..., U and V unimodular.

    Row operations accumulate in U, column operations in V; both are verified
    unimodular and the product identity is checked before returning.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    s = [list(r) for r in matrix]
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        s[dst] = [a + c * b for a, b in zip(s[dst], s[src])]
        u[dst] = [a + c * b for a, b in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for r in s:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        s[i] = [-a for a in s[i]]
        u[i] = [-a for a in u[i]]

    n = min(rows, cols)
    for k in range(n):
        # find a pivot minimizing |entry|
        while True:
            pivot = None
            best = None
            for i in range(k, rows):
                for j in range(k, cols):
                    a = s[i][j]
                    if a != 0 and (best is None or abs(a) < best):
                        best = abs(a)
                        pivot = (i, j)
            if pivot is None:
                break
            i, j = pivot
            if i != k:
                swap_rows(k, i)
            if j != k:
                swap_cols(k, j)
            dirty = False
            for i in range(k + 1, rows):
                if s[i][k]:
                    q = s[i][k] // s[k][k]
                    add_row(k, i, -q)
                    if s[i][k]:
                        dirty = True
            for j in range(k + 1, cols):
                if s[k][j]:
                    q = s[k][j] // s[k][k]
                    add_col(k, j, -q)
                    if s[k][j]:
                        dirty = True
            if not dirty and all(s[i][k] == 0 for i in range(k + 1, rows)) and all(
                s[k][j] == 0 for j in range(k + 1, cols)
            ):
                # pivot must divide the rest of the block for the chain
                offender = None
                for i in range(k + 1, rows):
                    for j in range(k + 1, cols):
                        if s[i][j] % s[k][k] != 0:
                            offender = i
                            break
                    if offender:
                        break
                if offender is None:
                    break
                add_row(offender, k, 1)
        if k < rows and k < cols and s[k][k] < 0:
            negate_row(k)
    _validate_snf(matrix, u, s, v)
    return u, s, v


def _validate_snf(m, u, s, v):
    if abs(det_int(u)) != 1 or abs(det_int(v)) != 1:
        raise GroupError("SNF transforms are not unimodular")
    if mat_mul(mat_mul(u, m), v) != s:
        raise GroupError("SNF identity U*M*V = S failed")
    diag = [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            raise GroupError("SNF zero ordering violated")
        if a not in (0,) and b % a != 0:
            raise GroupError("SNF divisibility chain violated")


def snf_diagonal(matrix) -> list[int]:
    _, s, _ = smith_normal_form(matrix)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


# ---------------------------------------------------------------------------
# abelianization


def relator_matrix(p: Presentation) -> list[list[int]]:
    """Rows = relators, columns = generators, entries = exponent sums."""
    rows = []
    for word in p.relators:
        row = [0] * len(p.generators)
        for letter in word:
            row[abs(letter) - 1] += 1 if letter > 0 else -1
        rows.append(row)
    return rows


def abelianization(p: Presentation) -> AbelianGroup:
    """H1 of the presentation: cokernel of the relator exponent matrix."""
    if not p.relators:
        return AbelianGroup(len(p.generators), ())
    diag = snf_diagonal(relator_matrix(p))
    nonzero = [d for d in diag if d != 0]
    torsion = tuple(d for d in nonzero if d > 1)
    return AbelianGroup(len(p.generators) - len(nonzero), torsion)


# ---------------------------------------------------------------------------
# named presentations


def _power(letter: int, k: int) -> Word:
    if k >= 0:
        return (letter,) * k
    return (-letter,) * (-k)


def _inverse(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def bezout_alpha(k: int, l: int) -> tuple[int, int, Word]:
    """Canonical (p, q) with k p + l q = 1 and the word for alpha = a^q b^p.

    Among all solutions, |p| is minimized; a tie (only when l = 2|p|) is
    broken toward positive p.  Generators: a = 1, b = 2.
    """
    if _gcd(k, l) != 1:
        raise NotCoprime(f"gcd({k},{l}) != 1")
    p0, q0 = _extended_euclid(k, l)
    # general solution p = p0 + t*l
    t = round(-p0 / l)
    candidates = [p0 + (t + d) * l for d in (-1, 0, 1)]
    p = min(candidates, key=lambda c: (abs(c), -c))
    q = (1 - k * p) // l
    assert k * p + l * q == 1
    word = _power(1, q) + _power(2, p)
    return p, q, word


def _extended_euclid(a: int, b: int) -> tuple[int, int]:
    """x, y with a x + b y = gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_x, x = x, old_x - qt * x
        old_y, y = y, old_y - qt * y
    if old_r < 0:
        old_x, old_y = -old_x, -old_y
    return old_x, old_y


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def named_presentation(name: str, **params) -> Presentation:
    """Presentations: bkl(k,l), bkls(k,l,s), gkls(k,l,s), tkls(k,l,s),
    b3quot(s), xtquot(t)."""
    key = name.lower()
    if key == "bkl":
        k, l = params["k"], params["l"]
        _positive(k, l)
        return Presentation(("a", "b"), (_power(1, k) + _power(2, -l),))
    if key == "bkls":
        k, l, s = params["k"], params["l"], params["s"]
        _positive(k, l, s)
        p, q, alpha = bezout_alpha(k, l)
        return Presentation(("a", "b"), (_power(1, k) + _power(2, -l), alpha * s))
    if key == "gkls":
        k, l, s = params["k"], params["l"], params["s"]
        _positive(k, l, s)
        central = (1, 2, 3)
        return Presentation(
            ("g1", "g2", "g3"),
            (
                _power(1, k) + _inverse(central),
                _power(2, l) + _inverse(central),
                _power(3, s) + _inverse(central),
            ),
        )
    if key == "tkls":
        k, l, s = params["k"], params["l"], params["s"]
        _positive(k, l, s)
        return Presentation(
            ("b1", "b2", "b3"),
            (
                _power(1, 2),
                _power(2, 2),
                _power(3, 2),
                (1, 2) * k,
                (2, 3) * l,
                (3, 1) * s,
            ),
        )
    if key == "b3quot":
        s = params["s"]
        _positive(s)
        braid = (1, 2, 1, -2, -1, -2)
        return Presentation(("s1", "s2"), (braid, _power(1, s), _power(2, s)))
    if key == "xtquot":
        t = params["t"]
        m00, n00, m10, n10, m01, n01, m11, n11 = _xt_entries(t)
        # generators a0, a1, b0, b1 = 1, 2, 3, 4
        commutators = []
        for ai in (1, 2):
            for bj in (3, 4):
                commutators.append((ai, bj, -ai, -bj))
        relators = commutators + [
            _power(1, m00) + _power(3, n00),
            _power(2, m10) + _power(3, n10),
            _power(1, m01) + _power(4, n01),
            _power(2, m11) + _power(4, n11),
        ]
        return Presentation(("a0", "a1", "b0", "b1"), tuple(relators))
    raise InvalidParams(f"unknown presentation {name!r}")


def _positive(*values):
    if any(v < 1 for v in values):
        raise InvalidParams("parameters must be positive integers")


def _xt_entries(t):
    if len(t) != 4 or any(len(row) != 4 for row in t):
        raise WrongShape("need a 4x4 matrix")
    pattern = {(0, 0), (0, 2), (1, 0), (1, 3), (2, 1), (2, 2), (3, 1), (3, 3)}
    for i in range(4):
        for j in range(4):
            entry = t[i][j]
            if not isinstance(entry, int) or entry < 0:
                raise WrongShape("entries must be non-negative integers")
            if (i, j) not in pattern and entry != 0:
                raise WrongShape(f"entry ({i},{j}) must be zero in this shape")
    return t[0][0], t[0][2], t[1][0], t[1][3], t[2][1], t[2][2], t[3][1], t[3][3]


# ---------------------------------------------------------------------------
# classification helpers


def triangle_classification(k: int, l: int, s: int) -> str:
    """Finite / Nilpotent / ContainsF2 by comparing 1/k + 1/l + 1/s with 1."""
    if min(k, l, s) < 2:
        raise InvalidParams("triangle parameters must be >= 2")
    total = Fraction(1, k) + Fraction(1, l) + Fraction(1, s)
    if total > 1:
        return "Finite"
    if total == 1:
        return "Nilpotent"
    return "ContainsF2"


def homology_sphere_check(k: int, l: int, s: int) -> bool:
    """The link of x^k - y^l - z^s is a homology sphere iff k, l, s are
    pairwise coprime.

    Note this is a statement about the manifold, not about the central
    extension built by named_presentation("gkls"): that group is perfect only
    when |kls - kl - ks - ls| = 1 (e.g. (2,3,5) and (2,3,7)), a strictly
    stronger condition than coprimality ((2,5,7) gives H1 = Z/11).  The
    implication "abelianization trivial => pairwise coprime" does hold.
    """
    if min(k, l, s) < 2:
        raise InvalidParams("parameters must be >= 2")
    return _gcd(k, l) == 1 and _gcd(k, s) == 1 and _gcd(l, s) == 1


def gkls_abelianization_order(k: int, l: int, s: int) -> int:
    """|k l s - k l - k s - l s|, the order of H1 of the gkls presentation
    (0 means infinite; never happens for k,l,s >= 2)."""
    return abs(k * l * s - k * l - k * s - l * s)


def xt_exponent(t) -> int:
    """Delta = m00 n10 m11 n01 - m01 n11 m10 n00, the exponent killing a0."""
    m00, n00, m10, n10, m01, n01, m11, n11 = _xt_entries(t)
    return m00 * n10 * m11 * n01 - m01 * n11 * m10 * n00
