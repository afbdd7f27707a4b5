"""Bijective length-first Goedel numbering.

Strings over the fixed token alphabet are enumerated by length and, within a
length, alphabetically; the code of a string is its index in that
enumeration.  Equivalently the code is the bijective base-k value of the
string where the i-th alphabet token has digit value i+1 and the empty string
is 0.  Under this coding concatenation is of multiplicative order, and the
code of a proof (a separator-joined sequence of formula strings) strictly
exceeds the code of every line.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from . import syntax
from .syntax import Formula

MANIFEST_VERSION = "provforge-coding-v1"

# Formula tokens first (31 of them), the sequence separator last, so the
# non-separator tokens are exactly the digit values 1..31.
DEFAULT_TOKENS: tuple[str, ...] = (
    "bot", "top", "0", "1", "v", "S", "+", "*", "exp", "(", ")", ",",
    "=", "<=", "<", "not", "and", "or", "imp", "all", "ex",
    "d0", "d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9",
    ";",
)


class CodingError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    tokens: tuple[str, ...]
    version: str = MANIFEST_VERSION

    def __post_init__(self):
        if len(set(self.tokens)) != len(self.tokens):
            raise CodingError("alphabet tokens must be distinct")

    @property
    def size(self) -> int:
        return len(self.tokens)

    def digit(self, token: str) -> int:
        try:
            return self.tokens.index(token) + 1
        except ValueError:
            raise CodingError(f"unknown token {token!r}") from None


DEFAULT_ALPHABET = Alphabet(DEFAULT_TOKENS)
SEPARATOR = ";"


# ---------------------------------------------------------------------------
# Strings <-> codes

def encode_string(tokens: list[str] | tuple[str, ...], alphabet: Alphabet = DEFAULT_ALPHABET) -> int:
    k = alphabet.size
    code = 0
    for tok in tokens:
        code = code * k + alphabet.digit(tok)
    return code


def decode_string(code: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> list[str]:
    if code < 0:
        raise CodingError("codes are naturals")
    k = alphabet.size
    out: list[str] = []
    while code > 0:
        code, rem = divmod(code - 1, k)
        out.append(alphabet.tokens[rem])
    out.reverse()
    return out


def string_length(code: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> int:
    k = alphabet.size
    n = 0
    while code > 0:
        code = (code - 1) // k
        n += 1
    return n


def concat_codes(a: int, b: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> int:
    return a * alphabet.size ** string_length(b, alphabet) + b


# ---------------------------------------------------------------------------
# Sequences of naturals
#
# An element n is written as the bijective base-(k-1) digit string of n+1
# over the non-separator tokens; elements are joined with the separator.
# Element 0 is therefore a one-token string and the empty sequence is 0.

def _element_tokens(n: int, alphabet: Alphabet) -> list[str]:
    m = alphabet.size - 1
    v = n + 1
    out: list[str] = []
    while v > 0:
        v, rem = divmod(v - 1, m)
        out.append(alphabet.tokens[rem])
    out.reverse()
    return out


def _element_value(tokens: list[str], alphabet: Alphabet) -> int:
    m = alphabet.size - 1
    v = 0
    for tok in tokens:
        d = alphabet.digit(tok)
        if d == alphabet.size:
            raise CodingError("separator inside a sequence element")
        v = v * m + d
    return v - 1


def encode_seq(ns: list[int], alphabet: Alphabet = DEFAULT_ALPHABET) -> int:
    toks: list[str] = []
    for i, n in enumerate(ns):
        if n < 0:
            raise CodingError("sequence elements are naturals")
        if i:
            toks.append(SEPARATOR)
        toks.extend(_element_tokens(n, alphabet))
    return encode_string(toks, alphabet)


def decode_seq(code: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> list[int]:
    toks = decode_string(code, alphabet)
    if not toks:
        return []
    out: list[int] = []
    part: list[str] = []
    for tok in toks:
        if tok == SEPARATOR:
            if not part:
                raise CodingError("empty sequence element")
            out.append(_element_value(part, alphabet))
            part = []
        else:
            part.append(tok)
    if not part:
        raise CodingError("empty sequence element")
    out.append(_element_value(part, alphabet))
    return out


def occurs_before(seq_code: int, x: int, y: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> bool:
    """True when some occurrence of x precedes an occurrence of y."""
    elems = decode_seq(seq_code, alphabet)
    for i, e in enumerate(elems):
        if e == y and x in elems[:i]:
            return True
    return False


# ---------------------------------------------------------------------------
# Formulas and proofs

def encode_formula(f: Formula, alphabet: Alphabet = DEFAULT_ALPHABET) -> int:
    return encode_string(syntax.formula_tokens(f), alphabet)


def decode_formula(code: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> Formula:
    return syntax.parse_tokens(decode_string(code, alphabet))


def try_decode_formula(code: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> Formula | None:
    try:
        return decode_formula(code, alphabet)
    except (syntax.ParseError, CodingError):
        return None


def encode_formula_seq(fs: list[Formula], alphabet: Alphabet = DEFAULT_ALPHABET) -> int:
    """Sequence-of-formulas code: token strings joined with the separator.

    This realizes proof codes.  Every line's token string is a substring of
    the sequence string, so the sequence code strictly exceeds each line's
    code by the length-first order.
    """
    toks: list[str] = []
    for i, f in enumerate(fs):
        if i:
            toks.append(SEPARATOR)
        toks.extend(syntax.formula_tokens(f))
    return encode_string(toks, alphabet)


def decode_formula_seq(code: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> list[Formula] | None:
    """Inverse of encode_formula_seq; None when the code is not a sequence of
    well-formed formula strings."""
    toks = decode_string(code, alphabet)
    if not toks:
        return None
    parts: list[list[str]] = [[]]
    for tok in toks:
        if tok == SEPARATOR:
            parts.append([])
        else:
            parts[-1].append(tok)
    out: list[Formula] = []
    for part in parts:
        if not part:
            return None
        try:
            out.append(syntax.parse_tokens(part))
        except syntax.ParseError:
            return None
    return out


def formula_seq_codes(code: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> list[int] | None:
    """Per-line formula codes of a proof code (None if malformed)."""
    toks = decode_string(code, alphabet)
    if not toks:
        return None
    parts: list[list[str]] = [[]]
    for tok in toks:
        if tok == SEPARATOR:
            parts.append([])
        else:
            parts[-1].append(tok)
    if any(not p for p in parts):
        return None
    return [encode_string(p, alphabet) for p in parts]


# ---------------------------------------------------------------------------
# Manifest

def manifest_text(alphabet: Alphabet = DEFAULT_ALPHABET) -> str:
    lines = [alphabet.version]
    lines.extend(alphabet.tokens)
    return "\n".join(lines) + "\n"


def parse_manifest(text: str) -> Alphabet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CodingError("empty manifest")
    return Alphabet(tuple(lines[1:]), version=lines[0])


def packaged_manifest() -> str:
    return resources.files("provforge").joinpath("data/alphabet.txt").read_text()


def verify_manifest(text: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> list[str]:
    """Returns a list of discrepancies (empty = verified)."""
    problems: list[str] = []
    try:
        other = parse_manifest(text)
    except CodingError as exc:
        return [str(exc)]
    if other.version != alphabet.version:
        problems.append(f"version mismatch: {other.version!r} != {alphabet.version!r}")
    if other.tokens != alphabet.tokens:
        problems.append("alphabet token list differs")
    return problems
