"""Exact expectations of entry products and trace products of words in
a Haar unitary's four variants U, Ut, U-bar, U*, interleaved with
deterministic constant matrices.

The trace-product evaluator follows the pairing bookkeeping that makes
these integrals finite sums: letters are numbered 1..M, the one-cycle-
per-word permutation gamma and the transpose signs eps build the index
relabeling phi = eps gamma delta, and each pair of eta-compatible
pairings (p, q) contributes its Weingarten weight Phi_N(p, q) times the
trace product read off pi_epsilon of the conjugated involution
phi^-1 p delta q delta phi.  Everything stays in rational-complex
arithmetic; nothing is floated.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .combinat import Pairing, Permutation, enumerate_alpha_pairings, pi_epsilon
from .errors import CapacityError, DimensionError, WordParseError
from .exact import (QC, QC_ONE, QC_ZERO, QCMatrix, identity_qc, mat_is_identity,
                    mat_mul, mat_scale, mat_sub, mat_trace, mat_transpose,
                    qc_matrix)
from .weingarten import DEFAULT_ORDER_CAP, phi


@dataclass(frozen=True)
class HaarLetter:
    """One occurrence of the Haar unitary: eps = -1 transposes,
    eta = -1 conjugates entries."""

    eps: int = 1
    eta: int = 1

    def __post_init__(self):
        if self.eps not in (1, -1) or self.eta not in (1, -1):
            raise ValueError("eps and eta must be +1 or -1")

    def adjoint(self) -> "HaarLetter":
        return HaarLetter(-self.eps, -self.eta)

    def token(self) -> str:
        return {(1, 1): "U", (-1, 1): "Ut", (1, -1): "Uc", (-1, -1): "U*"}[
            (self.eps, self.eta)]

    def __repr__(self) -> str:
        return self.token()


U = HaarLetter(1, 1)
U_T = HaarLetter(-1, 1)
U_BAR = HaarLetter(1, -1)
U_STAR = HaarLetter(-1, -1)


@dataclass(frozen=True)
class ConstantLetter:
    name: str
    matrix: QCMatrix
    transpose: bool = False

    def __post_init__(self):
        object.__setattr__(self, "matrix", qc_matrix(self.matrix))
        n = len(self.matrix)
        if n == 0 or any(len(row) != n for row in self.matrix):
            raise DimensionError(f"constant {self.name!r} is not square")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def resolved(self) -> QCMatrix:
        return mat_transpose(self.matrix) if self.transpose else self.matrix

    def __repr__(self) -> str:
        return self.name + ("t" if self.transpose else "")


Letter = HaarLetter | ConstantLetter


@dataclass(frozen=True)
class TraceWord:
    """Tr (or tr, when normalized) of a product of letters."""

    letters: tuple
    normalized: bool = False

    def __post_init__(self):
        letters = tuple(self.letters)
        if not letters:
            raise ValueError("a trace word must contain at least one letter")
        for l in letters:
            if not isinstance(l, (HaarLetter, ConstantLetter)):
                raise TypeError(f"not a letter: {l!r}")
        object.__setattr__(self, "letters", letters)

    def haar_count(self) -> int:
        return sum(1 for l in self.letters if isinstance(l, HaarLetter))

    def constant_dim(self) -> int | None:
        for l in self.letters:
            if isinstance(l, ConstantLetter):
                return l.dim
        return None

    def __repr__(self) -> str:
        body = " ".join(repr(l) for l in self.letters)
        return f"{'tr' if self.normalized else 'Tr'}({body})"


@dataclass(frozen=True)
class TraceProductExpr:
    """A product of trace factors evaluated at one dimension N."""

    words: tuple
    N: int

    def __post_init__(self):
        words = tuple(self.words)
        object.__setattr__(self, "words", words)
        if self.N < 1:
            raise ValueError("dimension N must be at least 1")
        for w in words:
            d = w.constant_dim()
            if d is not None and d != self.N:
                raise DimensionError(
                    f"constant dimension {d} does not match N={self.N}")

    def __repr__(self) -> str:
        return "".join(repr(w) for w in self.words) + f" @N={self.N}"


# ----------------------------------------------------------------------
# entry products

def entry_product_expectation(alpha: Sequence[int], rows: Sequence[int],
                              cols: Sequence[int], N: int,
                              cap: int = DEFAULT_ORDER_CAP) -> Fraction:
    """E(u^(alpha_1)_{rows_1, cols_1} ... u^(alpha_n)_{rows_n, cols_n}).

    alpha_k = +1 stands for an entry of U, -1 for an entry of U-bar.
    The value is the sum of Phi_N(p, q) over pairs of alpha-compatible
    pairings with rows constant on the blocks of p and columns constant
    on the blocks of q.
    """
    n = len(alpha)
    if n == 0:
        return Fraction(1)
    if len(rows) != n or len(cols) != n:
        raise ValueError("alpha, rows and cols must have equal length")
    if any(a not in (1, -1) for a in alpha):
        raise ValueError("alpha entries must be +1 or -1")
    if any(not (1 <= i <= N) for i in list(rows) + list(cols)):
        raise ValueError(f"matrix indices must lie in 1..{N}")
    if n % 2 or sum(alpha) != 0:
        return Fraction(0)
    if n > 2 * cap:
        raise CapacityError(
            f"entry product of {n} letters exceeds engine cap {2 * cap}")
    pairings = list(enumerate_alpha_pairings(alpha))
    row_ok = [all(rows[a - 1] == rows[b - 1] for a, b in p.pairs())
              for p in pairings]
    col_ok = [all(cols[a - 1] == cols[b - 1] for a, b in p.pairs())
              for p in pairings]
    total = Fraction(0)
    for p, pok in zip(pairings, row_ok):
        if not pok:
            continue
        for q, qok in zip(pairings, col_ok):
            if qok:
                total += phi(p, q, N, cap)
    return total


# ----------------------------------------------------------------------
# trace products

def _rotate_to_haar_form(letters: tuple) -> list[tuple[HaarLetter, QCMatrix | None]]:
    """Cyclically rotate so the word reads U_1 B_1 U_2 B_2 ... U_M B_M,
    then collapse each constant run into a single matrix (None when the
    run is empty or the product is the identity)."""
    first = next(i for i, l in enumerate(letters) if isinstance(l, HaarLetter))
    rotated = letters[first:] + letters[:first]
    out: list[tuple[HaarLetter, QCMatrix | None]] = []
    current: HaarLetter | None = None
    acc: QCMatrix | None = None
    for l in rotated:
        if isinstance(l, HaarLetter):
            if current is not None:
                out.append((current, acc))
            current, acc = l, None
        else:
            m = l.resolved()
            acc = m if acc is None else mat_mul(acc, m)
    out.append((current, acc))
    return [(u, None if b is not None and mat_is_identity(b) else b)
            for u, b in out]


def _cycle_trace(pi: Permutation, lam: Sequence[int],
                 mats: Sequence[QCMatrix | None], N: int) -> QC:
    """Tr_pi of the letters mats with transposes applied per lam; a None
    letter is the identity."""
    total = QC_ONE
    for cyc in pi.cycles():
        prod: QCMatrix | None = None
        for j in cyc:
            b = mats[j - 1]
            if b is None:
                continue
            if lam[j - 1] == -1:
                b = mat_transpose(b)
            prod = b if prod is None else mat_mul(prod, b)
        factor = QC(N) if prod is None else mat_trace(prod)
        total = total * factor
        if not total:
            break
    return total


def expected_trace_product(expr: TraceProductExpr,
                           cap: int = DEFAULT_ORDER_CAP) -> QC:
    """Exact Haar expectation of a product of traces.

    Words with no Haar letter are evaluated directly (deterministic
    constants factor out of the expectation).  An expression with no
    words at all is the empty product, 1.
    """
    N = expr.N
    const_factor = QC_ONE
    segments: list[list[tuple[HaarLetter, QCMatrix | None]]] = []
    norm_divisor = Fraction(1)
    for word in expr.words:
        if word.normalized:
            norm_divisor /= N
        if word.haar_count() == 0:
            prod = None
            for l in word.letters:
                m = l.resolved()
                prod = m if prod is None else mat_mul(prod, m)
            const_factor = const_factor * mat_trace(prod)
        else:
            segments.append(_rotate_to_haar_form(word.letters))
    if not const_factor:
        return QC_ZERO
    if not segments:
        return const_factor * QC(norm_divisor)

    flat = [pair for seg in segments for pair in seg]
    M = len(flat)
    if M > 2 * cap:
        raise CapacityError(
            f"trace product with {M} Haar letters exceeds engine cap {2 * cap}")
    eta = [u.eta for u, _ in flat]
    if sum(eta) != 0:
        return QC_ZERO
    eps = [u.eps for u, _ in flat]
    mats = [b for _, b in flat]

    # gamma: one cycle per word, in letter order
    gamma = [0] * (M + 1)
    start = 1
    for seg in segments:
        idx = list(range(start, start + len(seg)))
        for a, b in zip(idx, idx[1:] + idx[:1]):
            gamma[a] = b
        start += len(seg)

    # phi = eps gamma delta on [+-M]
    phi_map: dict[int, int] = {}
    for l in range(1, M + 1):
        phi_map[l] = -eps[l - 1] * l
        g = gamma[l]
        phi_map[-l] = eps[g - 1] * g
    phi_inv = {v: k for k, v in phi_map.items()}

    points = list(range(1, M + 1)) + list(range(-M, 0))
    pairings = list(enumerate_alpha_pairings(eta))
    trace_cache: dict[tuple, QC] = {}
    total = QC_ZERO
    for p in pairings:
        for q in pairings:
            # tau = phi^-1 (p delta q delta) phi, a pairing of [+-M]
            blocks = set()
            for x in points:
                y = phi_map[x]
                y = p(y) if y > 0 else -q(-y)
                blocks.add(frozenset((x, phi_inv[y])))
            pi, lam = pi_epsilon(Pairing(blocks))
            key = (pi, lam)
            val = trace_cache.get(key)
            if val is None:
                val = _cycle_trace(pi, lam, mats, N)
                trace_cache[key] = val
            if val:
                total = total + val * QC(phi(p, q, N, cap))
    return const_factor * total * QC(norm_divisor)


# ----------------------------------------------------------------------
# word simplification

def _is_adjoint_pair(a: HaarLetter, b: HaarLetter) -> bool:
    return a.eps == -b.eps and a.eta == -b.eta


def _slot_ok(slots: list, i: int) -> bool:
    """Constant slot i (before Haar letter i) is acceptable: centered,
    or identity where the flanking Haar letters are not mutual adjoints."""
    a, _u = slots[i]
    if a is None:
        prev = slots[i - 1][1]  # cyclic: slot 0 is preceded by the last letter
        return not _is_adjoint_pair(prev, slots[i][1])
    return mat_trace(a) == QC_ZERO


def _rotate_to_slot_form(letters: tuple) -> list[list]:
    """Alternating form [A_1, U_1][A_2, U_2]...[A_m, U_m] with each A_i the
    collapsed constant run before U_i (None for an empty or identity run);
    assumes at least one Haar letter."""
    last = max(i for i, l in enumerate(letters) if isinstance(l, HaarLetter))
    rotated = letters[last + 1:] + letters[:last + 1]
    slots: list[list] = []
    acc: QCMatrix | None = None
    for l in rotated:
        if isinstance(l, HaarLetter):
            slots.append([acc, l])
            acc = None
        else:
            m = l.resolved()
            acc = m if acc is None else mat_mul(acc, m)
    return [[None, u] if a is not None and mat_is_identity(a) else [a, u]
            for a, u in slots]


def _word_from_slots(slots: list, normalized: bool, counter: list[int]) -> TraceWord:
    letters: list = []
    for a, u in slots:
        if a is not None:
            counter[0] += 1
            letters.append(ConstantLetter(f"A{counter[0]}", a))
        letters.append(u)
    return TraceWord(tuple(letters), normalized=normalized)


def is_simplified(word: TraceWord) -> bool:
    """Whether the word meets the reduced form: alternating constants and
    Haar letters with every constant centered, identities only between
    non-adjoint neighbours; or a single centered constant word."""
    if word.haar_count() == 0:
        prod = None
        for l in word.letters:
            m = l.resolved()
            prod = m if prod is None else mat_mul(prod, m)
        return mat_trace(prod) == QC_ZERO
    slots = _rotate_to_slot_form(word.letters)
    return all(_slot_ok(slots, i) for i in range(len(slots)))


def simplify_word(word: TraceWord) -> tuple[QC, list[tuple[QC, TraceWord]]]:
    """Rewrite Tr(word) as c0 + sum of coeff * Tr(simplified word).

    Repeatedly centers the first offending constant (A = A-ring + tr(A) I)
    and cancels identity constants flanked by mutually adjoint Haar
    letters (U^(eps,eta) I U^(-eps,-eta) = I), which shortens the word.
    Constants must be deterministic; the scalars come out exact.
    """
    N = word.constant_dim()
    c0 = QC_ZERO
    done: dict[tuple, QC] = {}

    def emit_constant(coeff: QC, mat: QCMatrix | None):
        # the whole word collapsed to a constant; its trace value joins c0
        nonlocal c0
        if mat is None:
            if not word.normalized:
                c0 = c0 + coeff * QC(N if N is not None else 1)
            else:
                c0 = c0 + coeff
            return
        t = mat_trace(mat)
        dim = len(mat)
        c0 = c0 + coeff * (t / QC(dim) if word.normalized else t)
        ring = mat_sub(mat, mat_scale(t / QC(dim), identity_qc(dim)))
        if any(any(x for x in row) for row in ring):
            key = ((ring, None),)
            done[key] = done.get(key, QC_ZERO) + coeff

    stack: list[tuple[QC, list]] = []
    if word.haar_count() == 0:
        prod = None
        for l in word.letters:
            m = l.resolved()
            prod = m if prod is None else mat_mul(prod, m)
        emit_constant(QC_ONE, prod)
    else:
        stack.append((QC_ONE, _rotate_to_slot_form(word.letters)))

    while stack:
        coeff, slots = stack.pop()
        if not coeff:
            continue
        m = len(slots)
        bad = next((i for i in range(m) if not _slot_ok(slots, i)), None)
        if bad is None:
            key = tuple((a, u) for a, u in slots)
            done[key] = done.get(key, QC_ZERO) + coeff
            continue
        slots = slots[bad + 1:] + slots[:bad + 1]  # offender now in the last slot
        a_last, u_last = slots[-1]
        if a_last is None:
            # identity between mutual adjoints: U_{m-1} I U_m = I
            u_prev = slots[-2][1]
            assert _is_adjoint_pair(u_prev, u_last)
            a_prev = slots[-2][0]
            rest = slots[:-2]
            if not rest:
                emit_constant(coeff, a_prev)
                continue
            if a_prev is not None:
                first = rest[0]
                merged = a_prev if first[0] is None else mat_mul(a_prev, first[0])
                rest = [[merged, first[1]]] + rest[1:]
            stack.append((coeff, rest))
        else:
            t = mat_trace(a_last)
            dim = len(a_last)
            ring = mat_sub(a_last, mat_scale(t / QC(dim), identity_qc(dim)))
            has_ring = any(any(x for x in row) for row in ring)
            if has_ring:
                stack.append((coeff, slots[:-1] + [[ring, u_last]]))
            stack.append((coeff * (t / QC(dim)), slots[:-1] + [[None, u_last]]))

    counter = [0]
    terms = []
    for key in sorted(done, key=repr):
        coeff = done[key]
        if not coeff:
            continue
        if len(key) == 1 and key[0][1] is None:
            counter[0] += 1
            w = TraceWord((ConstantLetter(f"A{counter[0]}", key[0][0]),),
                          normalized=word.normalized)
        else:
            w = _word_from_slots([list(s) for s in key], word.normalized, counter)
        terms.append((coeff, w))
    return c0, terms


# ----------------------------------------------------------------------
# limits and the invariance counterexample

def first_order_limit(m: int, variant: tuple[int, int],
                      n: int, variant2: tuple[int, int]) -> int:
    """Large-N limit of E(tr((U^(eps,eta))^m (U^(eps',eta'))^n)): one
    exactly when the powers match and the variants are mutual adjoints,
    zero otherwise."""
    if m < 1 or n < 1:
        raise ValueError("powers must be positive")
    (e1, h1), (e2, h2) = variant, variant2
    for s in (e1, h1, e2, h2):
        if s not in (1, -1):
            raise ValueError("variant signs must be +1 or -1")
    return int(m == n and e1 == -e2 and h1 == -h2)


def invariance_counterexample(cos_sq: Fraction, N: int) -> tuple[Fraction, Fraction]:
    """The pair (E(u_11 ubar_22), E(b_11 b'_22)) where b, b' are the
    entries of U and U-bar conjugated by the fixed non-orthogonal
    unitary built from the angle with cos^2(theta) = cos_sq.

    The first value is always 0; the second is 4 cos^2 sin^2 / N, so it
    differs from the first whenever cos(theta) sin(theta) != 0.  The
    sixteen cross terms carry coefficients a + b*x with x = i cos sin,
    x^2 = -cos^2 sin^2; only rational combinations survive.
    """
    cos_sq = Fraction(cos_sq)
    if not 0 <= cos_sq <= 1:
        raise ValueError("cos^2(theta) must lie in [0, 1]")
    if N < 2:
        raise ValueError("need N >= 2 for 2x2 corner indices")
    sin_sq = 1 - cos_sq
    x_sq = -cos_sq * sin_sq

    lhs = entry_product_expectation([1, -1], [1, 2], [1, 2], N)

    # coefficients (rational part, x part) of b_11 over u_{rc} and of
    # b'_22 over ubar_{rc}
    coeff1 = {(1, 1): (sin_sq, Fraction(0)), (2, 1): (Fraction(0), Fraction(1)),
              (1, 2): (Fraction(0), Fraction(-1)), (2, 2): (cos_sq, Fraction(0))}
    coeff2 = {(1, 1): (cos_sq, Fraction(0)), (2, 1): (Fraction(0), Fraction(-1)),
              (1, 2): (Fraction(0), Fraction(1)), (2, 2): (sin_sq, Fraction(0))}
    rational = Fraction(0)
    x_part = Fraction(0)
    for (r1, c1), (a1, b1) in coeff1.items():
        for (r2, c2), (a2, b2) in coeff2.items():
            ev = entry_product_expectation([1, -1], [r1, r2], [c1, c2], N)
            if not ev:
                continue
            rational += (a1 * a2 + b1 * b2 * x_sq) * ev
            x_part += (a1 * b2 + a2 * b1) * ev
    if x_part != 0:
        raise RuntimeError("irrational residue in the sixteen-term expansion")
    return lhs, rational


# ----------------------------------------------------------------------
# word grammar

_FACTOR_RE = re.compile(r"\s*(Tr|tr)\s*\(\s*([^()]*?)\s*\)")
_HAAR_TOKENS = {"U": (1, 1), "Ut": (-1, 1), "Uc": (1, -1), "U*": (-1, -1)}


def parse_trace_product(text: str,
                        constants: Mapping[str, QCMatrix] | None = None,
                        N: int | None = None) -> TraceProductExpr:
    """Parse a trace-product string like "Tr(U A U*)tr(U Uc)".

    Haar letters are U, Ut, Uc, U*; any other token names a constant
    from the supplied mapping, with a trailing t selecting its
    transpose.  N may be omitted when a constant fixes the dimension.
    """
    constants = dict(constants or {})
    pos = 0
    words: list[TraceWord] = []
    while pos < len(text):
        m = _FACTOR_RE.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise WordParseError(f"cannot parse {text[pos:].strip()!r}")
            break
        pos = m.end()
        letters: list = []
        for token in m.group(2).split():
            if token in _HAAR_TOKENS:
                letters.append(HaarLetter(*_HAAR_TOKENS[token]))
            elif token in constants:
                letters.append(ConstantLetter(token, constants[token]))
            elif token.endswith("t") and token[:-1] in constants:
                letters.append(ConstantLetter(token[:-1], constants[token[:-1]],
                                              transpose=True))
            else:
                raise WordParseError(f"unknown letter {token!r}")
        if not letters:
            raise WordParseError("empty trace factor")
        words.append(TraceWord(tuple(letters), normalized=m.group(1) == "tr"))
    if not words:
        raise WordParseError("no trace factors found")
    if N is None:
        N = next((w.constant_dim() for w in words
                  if w.constant_dim() is not None), None)
        if N is None:
            raise WordParseError("dimension N required for pure Haar words")
    return TraceProductExpr(tuple(words), N)


def load_matrix_csv(path: str) -> QCMatrix:
    """Read one exact matrix from CSV rows (row, col, re_num, re_den,
    im_num, im_den); omitted entries are zero, indices are 1-based."""
    entries: dict[tuple[int, int], QC] = {}
    dim = 0
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for line in reader:
            if not line or line[0].strip().startswith("#"):
                continue
            if line[0].strip().lower() == "row":
                continue
            try:
                r, c = int(line[0]), int(line[1])
                re_num, re_den = int(line[2]), int(line[3])
                im_num, im_den = int(line[4]), int(line[5])
            except (ValueError, IndexError) as exc:
                raise WordParseError(f"bad matrix row {line!r} in {path}") from exc
            if r < 1 or c < 1:
                raise WordParseError(f"matrix indices are 1-based: {line!r}")
            entries[(r, c)] = QC(Fraction(re_num, re_den), Fraction(im_num, im_den))
            dim = max(dim, r, c)
    if dim == 0:
        raise WordParseError(f"no entries in matrix file {path}")
    return qc_matrix([[entries.get((r, c), QC_ZERO) for c in range(1, dim + 1)]
                      for r in range(1, dim + 1)])
