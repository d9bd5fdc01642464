'''
The Hopf structure on normal forms: comultiplication, counit, antipode and the
convolution identities, plus the rank of an element, the right-coefficient
span dimension and the asymptotic coradical split.
'''
from __future__ import annotations
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, List, Tuple
from gmpy2 import mpq
from SkewHopf.lib.chain import ValidatedChain, WindowException
from SkewHopf.lib.linalg import dense_rank
from SkewHopf.lib.logger import LOGGER_NAME
from SkewHopf.lib.ncpoly import (ComputationException, Letter, NCPoly, ONE, TensorPoly, UNIT_TENSOR,
                                 ValidationException, Word, letter, levels_of, word_key)
from SkewHopf.lib.rewrite import RuleSet

class RankException(ComputationException):
    pass

@dataclass(frozen=True)
class RankTuple:
    levels: Tuple[int, ...]

    def __len__(self: RankTuple) -> int:
        return len(self.levels)

    def is_subword_of(self: RankTuple, other: Tuple[int, ...]) -> bool:
        # scattered: obtained from `other` by deleting entries
        it = iter(other)
        return all(r in it for r in self.levels)

    def __str__(self: RankTuple) -> str:
        return '(' + ','.join(str(r) for r in self.levels) + ')'

    def to_json(self: RankTuple) -> list:
        return list(self.levels)

def _delta_letter(chain: ValidatedChain, l: Letter) -> TensorPoly:
    r, i, j = l
    return TensorPoly.combine((((letter(r, i, u),), (letter(r, u, j),)), mpq(1))
                              for u in chain.components[chain.component_of[i]]
                              if chain._present(r, i, u) and chain._present(r, u, j))

def _delta_word(chain: ValidatedChain, word: Word) -> TensorPoly:
    res = UNIT_TENSOR
    for l in word:
        res = res * _delta_letter(chain, l)
    return res

def comultiply(rules: RuleSet, p: NCPoly) -> TensorPoly:
    '''
    x^r_{ij} -> sum_u x^r_{iu} (x) x^r_{uj}, multiplicative on words, with both legs in normal form.
    '''
    chain = rules.chain
    chain.check_poly(p)
    res = TensorPoly.combine(k for w, c in p.items() for k in _delta_word(chain, w).scale(c).terms.items())
    nf = lambda w: rules.normal_form(NCPoly.from_word(w))
    return res.map(nf, nf)

def counit(p: NCPoly) -> mpq:
    return sum((c for w, c in p.items() if all(l.row == l.col for l in w)), mpq(0))

def _antipode_word(chain: ValidatedChain, word: Word) -> Word or None:
    for l in word:
        if l.level + 1 > chain.hi:
            raise WindowException('WINDOW_EXCEEDED', f'S({l}) needs level {l.level + 1}, window ends at {chain.hi}')
    res = []
    for l in reversed(word):
        image = chain.theta(l.level, l)
        if image is None:
            return None
        res += [image]
    return tuple(res)

def antipode(chain: ValidatedChain, rules: RuleSet, p: NCPoly) -> NCPoly:
    '''
    S(x^r_{ij}) = x^{r+1}_{ji} or 0, reversing products. fails with WINDOW_EXCEEDED
    rather than truncating when a letter sits at the top of the window.
    '''
    chain.check_poly(p)
    images = ((_antipode_word(chain, w), c) for w, c in p.items())
    return rules.normal_form(NCPoly.combine((w, c) for w, c in images if w is not None))

def convolution_check(chain: ValidatedChain, rules: RuleSet, r: int, i: str, j: str) -> Tuple[bool, bool]:
    '''
    (m(S (x) id) delta x == eps x, m(id (x) S) delta x == eps x) for x = x^r_{ij}.
    '''
    if r + 1 > chain.hi:
        raise WindowException('WINDOW_EXCEEDED', f'the antipode of level {r} needs level {r + 1}, window ends at {chain.hi}')
    x = letter(r, i, j)
    chain.check_letter(x)
    delta = comultiply(rules, NCPoly.from_letter(x))
    expected = NCPoly.constant(1 if i == j else 0)
    S = lambda w: antipode(chain, rules, NCPoly.from_word(w))
    left, right = NCPoly(), NCPoly()
    for (a, b), c in delta.terms.items():
        left = left + (S(a) * NCPoly.from_word(b)).scale(c)
        right = right + (NCPoly.from_word(a) * S(b)).scale(c)
    return rules.normal_form(left) == expected, rules.normal_form(right) == expected

def rank(p: NCPoly, rules: RuleSet = None) -> RankTuple:
    '''
    the unique longest level tuple among the support words (after normalizing
    against `rules` when given).
    '''
    if rules is not None:
        p = rules.normal_form(p)
    if p.is_zero():
        raise RankException('ZERO_ELEMENT', 'the rank of 0 is undefined')
    n = p.degree()
    tuples = sorted({levels_of(w) for w in p.support() if len(w) == n})
    if len(tuples) > 1:
        raise RankException('NON_UNIQUE_RANK', f'maximal level tuples {tuples} are not unique')
    return RankTuple(tuples[0])

def right_span_dim(rules: RuleSet, p: NCPoly) -> int:
    '''
    dimension of the span of the right legs of delta(p) grouped by left leg,
    i.e. of the cyclic module p <| H*.
    '''
    legs = comultiply(rules, p).left_legs()
    if not legs:
        return 0
    columns = sorted({w for q in legs.values() for w in q.support()}, key=word_key)
    matrix = [[q.coefficient(w) for w in columns] for _, q in sorted(legs.items(), key=lambda t: word_key(t[0]))]
    return dense_rank(matrix)

@dataclass
class CoradicalSplit:
    diagonal: Dict[int, List[Letter]] = field(default_factory=dict)
    off_diagonal: Dict[int, List[Letter]] = field(default_factory=dict)

    def to_json(self: CoradicalSplit) -> list:
        return [{'r': r,
                 'diagonal': [l.to_json() for l in self.diagonal[r]],
                 'offDiagonal': [l.to_json() for l in self.off_diagonal[r]]}
                for r in sorted(self.diagonal)]

def asymptotic_coradical(chain: ValidatedChain) -> CoradicalSplit:
    '''
    a present letter x^r_{ij} lies in the asymptotic coradical iff i and j share a
    block at the lowest window level, where the colimit stabilizes.
    '''
    res = CoradicalSplit()
    for r in chain.levels:
        letters = sorted(chain.letters(r), key=lambda l: l.key)
        res.diagonal[r] = [l for l in letters if chain.same_block(chain.lo, l.row, l.col)]
        res.off_diagonal[r] = [l for l in letters if not chain.same_block(chain.lo, l.row, l.col)]
    return res

@dataclass
class AxiomReport:
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self: AxiomReport) -> bool:
        return not self.failures

    def to_json(self: AxiomReport) -> dict:
        return {'checked': self.checked, 'ok': self.ok, 'failures': self.failures}

def _triple(rules: RuleSet, t: TensorPoly, on_left: bool) -> Dict[Tuple[Word, Word, Word], mpq]:
    res = {}
    for (a, b), c in t.terms.items():
        for (u, v), d in comultiply(rules, NCPoly.from_word(a if on_left else b)).terms.items():
            key = (u, v, b) if on_left else (a, u, v)
            res[key] = res.get(key, 0) + c * d
    return {k: v for k, v in res.items() if v}

def hopf_axioms(chain: ValidatedChain, rules: RuleSet) -> AxiomReport:
    '''
    coassociativity, both counit laws and (where the window allows) both
    antipode convolution identities on every generator of the window.
    '''
    report = AxiomReport()
    for r in chain.levels:
        for l in chain.letters(r):
            g = NCPoly.from_letter(l)
            delta = comultiply(rules, g)
            report.checked += 1
            if _triple(rules, delta, True) != _triple(rules, delta, False):
                report.failures += [f'coassociativity fails on {l}']
            left = NCPoly.combine((b, c * counit(NCPoly.from_word(a))) for (a, b), c in delta.terms.items())
            right = NCPoly.combine((a, c * counit(NCPoly.from_word(b))) for (a, b), c in delta.terms.items())
            if left != g or right != g:
                report.failures += [f'counit law fails on {l}']
            if r + 1 <= chain.hi and convolution_check(chain, rules, r, l.row, l.col) != (True, True):
                report.failures += [f'antipode convolution fails on {l}']
    getLogger(LOGGER_NAME).info(f'hopf axioms: {report.checked} generators, {len(report.failures)} failures')
    return report

def rank_containment(rules: RuleSet, factors: List[NCPoly]) -> Tuple[bool, Tuple[int, ...], NCPoly]:
    '''
    multiplies level-homogeneous factors and checks that every support word of the
    normal form has a level tuple that is a subword of the factor tuple.
    returns (ok, factor tuple, normal form).
    '''
    levels = ()
    product = NCPoly.constant(1)
    for p in factors:
        found = {l.level for l in p.letters()}
        if len(found) > 1:
            raise ValidationException('BAD_FACTOR', f'factor {p} mixes levels {sorted(found)}')
        if found:
            levels += (found.pop(),) * p.degree()
        product = product * p
    nf = rules.normal_form(product)
    ok = all(RankTuple(levels_of(w)).is_subword_of(levels) for w in nf.support())
    if not ok:
        getLogger(LOGGER_NAME).warning(f'rank containment fails for factor tuple {levels}')
    return ok, levels, nf

def first_block_bound(chain: ValidatedChain, word: Word) -> int:
    '''
    size of the block at the first letter's level holding its row index; a lower
    bound for right_span_dim of the word.
    '''
    if word == ONE:
        return 1
    first = word[0]
    chain.check_letter(first)
    return len(chain.block_containing(first.level, first.row))
