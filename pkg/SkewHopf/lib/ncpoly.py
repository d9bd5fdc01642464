'''
Exact scalars, generator letters, words, noncommutative polynomials and tensors.

Nothing in here knows about chains or rewriting rules. Scalars are gmpy2.mpq,
letters x^r_{ij} are interned NamedTuples, words are tuples of letters (the empty
tuple is the unit 1), and polynomials are immutable maps word -> nonzero mpq.
'''
from __future__ import annotations
from functools import lru_cache
from itertools import product
from gmpy2 import mpq
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Tuple

Rational = type(mpq(0))

class SkewHopfException(Exception):
    '''
    base of every error raised by this package. `code` is the machine-readable
    name of the failure (e.g. NON_REFINING, WINDOW_EXCEEDED).
    '''
    exit_code = 2

    def __init__(self, code: str, message: str = None):
        self.code = code
        self.message = message or code
        super().__init__(f'{code}: {self.message}')

class ValidationException(SkewHopfException):
    exit_code = 1

class ComputationException(SkewHopfException):
    exit_code = 2

def rational(value) -> Rational:
    '''
    accepts ints, mpq, Fractions and strings of the form "p" or "p/q".
    '''
    if isinstance(value, str):
        value = value.strip()
        if '/' in value:
            num, den = value.split('/')
            return mpq(int(num), int(den))
        return mpq(int(value))
    return mpq(value)

def natural_key(index: str):
    # digit ids compare numerically so that "10" sorts after "2"
    return (0, int(index), '') if index.isdigit() else (1, 0, index)

class Letter(NamedTuple):
    level: int
    row: str
    col: str

    def __str__(self) -> str:
        return f'x[{self.level},{self.row},{self.col}]'

    @property
    def key(self):
        return (self.level, natural_key(self.row), natural_key(self.col))

    def to_json(self) -> list:
        return [self.level, self.row, self.col]

@lru_cache(maxsize=None)
def _interned(level: int, row: str, col: str) -> Letter:
    return Letter(level, row, col)

def letter(level: int, row, col) -> Letter:
    # interned, so words built from repeated letters share the same objects
    return _interned(int(level), str(row), str(col))

Word = Tuple[Letter, ...]
ONE: Word = ()

def word_key(word: Word):
    return (len(word), tuple(l.key for l in word))

def word_str(word: Word) -> str:
    return '*'.join(str(l) for l in word) if word else '1'

def word_to_json(word: Word) -> list:
    return [l.to_json() for l in word]

def word_from_json(data: list) -> Word:
    return tuple(letter(*l) for l in data)

def levels_of(word: Word) -> Tuple[int, ...]:
    return tuple(l.level for l in word)

def _coeff_str(c: Rational) -> str:
    return str(c) # mpq prints as "p" or "p/q"

class NCPoly:
    '''
    a finite linear combination of words with exact rational coefficients.
    instances are never mutated after construction.
    '''
    __slots__ = ('_terms', '_hash')

    def __init__(self: NCPoly, terms: Dict[Word, Rational] or None = None):
        self._terms = {w: mpq(c) for w, c in (terms or {}).items() if c}
        self._hash = None

    @staticmethod
    def from_word(word: Word, coeff=1) -> NCPoly:
        return NCPoly({tuple(word): mpq(coeff)})

    @staticmethod
    def from_letter(l: Letter, coeff=1) -> NCPoly:
        return NCPoly({(l,): mpq(coeff)})

    @staticmethod
    def constant(c) -> NCPoly:
        return NCPoly({ONE: mpq(c)})

    @staticmethod
    def combine(pairs: Iterable[Tuple[Word, Rational]]) -> NCPoly:
        # merges like terms, zero sums are dropped by the constructor
        terms = {}
        for w, c in pairs:
            terms[w] = terms.get(w, 0) + c
        return NCPoly(terms)

    @property
    def terms(self: NCPoly) -> Dict[Word, Rational]:
        return dict(self._terms)

    def items(self: NCPoly, key: Callable[[Word], Any] = None) -> List[Tuple[Word, Rational]]:
        '''
        terms sorted by `key` on their words. a rule set's word_key gives the
        rewrite order; the default is length, then letters.
        '''
        order = key or word_key
        return sorted(self._terms.items(), key=lambda t: order(t[0]))

    def support(self: NCPoly, key: Callable[[Word], Any] = None) -> List[Word]:
        return sorted(self._terms, key=key or word_key)

    def coefficient(self: NCPoly, word: Word) -> Rational:
        return self._terms.get(tuple(word), mpq(0))

    def is_zero(self: NCPoly) -> bool:
        return not self._terms

    def degree(self: NCPoly) -> int:
        return max((len(w) for w in self._terms), default=-1)

    def letters(self: NCPoly) -> set:
        return {l for w in self._terms for l in w}

    def __len__(self: NCPoly) -> int:
        return len(self._terms)

    def __bool__(self: NCPoly) -> bool:
        return bool(self._terms)

    def __eq__(self: NCPoly, other) -> bool:
        if isinstance(other, NCPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self == NCPoly.constant(other)
        return NotImplemented

    def __hash__(self: NCPoly) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self: NCPoly, other) -> NCPoly:
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return NCPoly.combine(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self: NCPoly) -> NCPoly:
        return NCPoly({w: -c for w, c in self._terms.items()})

    def __sub__(self: NCPoly, other) -> NCPoly:
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self: NCPoly, other) -> NCPoly:
        return (-self) + other

    def scale(self: NCPoly, c) -> NCPoly:
        c = mpq(c)
        return NCPoly({w: c * v for w, v in self._terms.items()}) if c else NCPoly()

    def __mul__(self: NCPoly, other) -> NCPoly:
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self: NCPoly, other) -> NCPoly:
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __str__(self: NCPoly) -> str:
        return self.text()

    def text(self: NCPoly, key: Callable[[Word], Any] = None) -> str:
        if not self._terms:
            return '0'
        res = ''
        for i, (w, c) in enumerate(self.items(key)):
            sign = '-' if c < 0 else '+'
            mag = abs(c)
            if not w:
                body = _coeff_str(mag)
            elif mag == 1:
                body = word_str(w)
            else:
                body = f'{_coeff_str(mag)} {word_str(w)}'
            if i == 0:
                res = body if sign == '+' else f'-{body}'
            else:
                res += f' {sign} {body}'
        return res

    def __repr__(self: NCPoly) -> str:
        return f'NCPoly[{self}]'

    def to_json(self: NCPoly, key: Callable[[Word], Any] = None) -> list:
        return [[_coeff_str(c), word_to_json(w)] for w, c in self.items(key)]

    @staticmethod
    def from_json(data: list) -> NCPoly:
        return NCPoly.combine((word_from_json(w), rational(c)) for c, w in data)

def _as_poly(x) -> NCPoly or None:
    if isinstance(x, NCPoly):
        return x
    if isinstance(x, (int, Rational)):
        return NCPoly.constant(x)
    return None

ZERO = NCPoly()
UNIT = NCPoly.constant(1)

def multiply(p: NCPoly, q: NCPoly) -> NCPoly:
    '''
    bilinear concatenation product of the free algebra. no reduction is applied.
    '''
    return NCPoly.combine((u + v, a * b) for (u, a), (v, b) in product(p._terms.items(), q._terms.items()))

class TensorPoly:
    '''
    a finite linear combination of word (x) word, the codomain of comultiplication.
    '''
    __slots__ = ('_terms',)

    def __init__(self: TensorPoly, terms: Dict[Tuple[Word, Word], Rational] or None = None):
        self._terms = {k: mpq(c) for k, c in (terms or {}).items() if c}

    @staticmethod
    def combine(pairs: Iterable[Tuple[Tuple[Word, Word], Rational]]) -> TensorPoly:
        terms = {}
        for k, c in pairs:
            terms[k] = terms.get(k, 0) + c
        return TensorPoly(terms)

    @staticmethod
    def pure(left: NCPoly, right: NCPoly) -> TensorPoly:
        return TensorPoly.combine(((a, b), c * d) for a, c in left._terms.items() for b, d in right._terms.items())

    @property
    def terms(self: TensorPoly) -> Dict[Tuple[Word, Word], Rational]:
        return dict(self._terms)

    def items(self: TensorPoly):
        return sorted(self._terms.items(), key=lambda t: (word_key(t[0][0]), word_key(t[0][1])))

    def is_zero(self: TensorPoly) -> bool:
        return not self._terms

    def __eq__(self: TensorPoly, other) -> bool:
        return isinstance(other, TensorPoly) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self: TensorPoly, other: TensorPoly) -> TensorPoly:
        return TensorPoly.combine(list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self: TensorPoly, other: TensorPoly) -> TensorPoly:
        return self + other.scale(-1)

    def scale(self: TensorPoly, c) -> TensorPoly:
        c = mpq(c)
        return TensorPoly({k: c * v for k, v in self._terms.items()})

    def __mul__(self: TensorPoly, other: TensorPoly) -> TensorPoly:
        # factorwise product (a (x) b)(c (x) d) = ac (x) bd
        return TensorPoly.combine(((a + c, b + d), x * y)
                                  for ((a, b), x), ((c, d), y) in product(self._terms.items(), other._terms.items()))

    def map(self: TensorPoly, left, right) -> TensorPoly:
        '''
        applies linear maps Word -> NCPoly on each leg and re-expands.
        '''
        res = {}
        for (a, b), c in self._terms.items():
            for (u, x), (v, y) in product(left(a)._terms.items(), right(b)._terms.items()):
                res[(u, v)] = res.get((u, v), 0) + c * x * y
        return TensorPoly(res)

    def left_legs(self: TensorPoly) -> Dict[Word, NCPoly]:
        # groups right legs by left leg: p = sum_a a (x) legs[a]
        groups = {}
        for (a, b), c in self._terms.items():
            groups.setdefault(a, []).append((b, c))
        return {a: NCPoly.combine(pairs) for a, pairs in groups.items()}

    def __str__(self: TensorPoly) -> str:
        if not self._terms:
            return '0'
        return ' + '.join(f'({_coeff_str(c)}) {word_str(a)} (x) {word_str(b)}' for (a, b), c in self.items())

    def to_json(self: TensorPoly) -> list:
        return [[_coeff_str(c), word_to_json(a), word_to_json(b)] for (a, b), c in self.items()]

UNIT_TENSOR = TensorPoly({(ONE, ONE): mpq(1)})
