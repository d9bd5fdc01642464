'''
The reduction system of a triangular chain and everything built on it:
rule derivation, normal forms, overlap/inclusion ambiguities and their
residuals (confluence), bounded completion, reduced-word counting and the
independent linear-algebra dimension oracle.
'''
from __future__ import annotations
import os
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import product
from logging import getLogger
from typing import Dict, Iterable, List, Tuple
from gmpy2 import mpq
from SkewHopf.lib.chain import ValidatedChain
from SkewHopf.lib.linalg import sparse_rank
from SkewHopf.lib.logger import LOGGER_NAME
from SkewHopf.lib.ncpoly import (ComputationException, NCPoly, ONE, Word, letter, word_key, word_str,
                                 word_to_json)

MAX_WORDS = 10 ** 5
MAX_REDUCTION_DEPTH = 200
DEFAULT_MAX_DEGREE = 4
DEFAULT_MAX_ITERS = 16

class RewriteException(ComputationException):
    pass

def max_words() -> int:
    return int(os.environ.get('SKEWHOPF_MAX_WORDS', MAX_WORDS))

class Family(Enum):
    UP0 = '0up'
    UP1 = '1up'
    DOWN1 = '1down'
    DOWN0 = '0down'
    DERIVED = 'derived' # oriented by completion

@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: NCPoly
    family: Family
    source: Tuple[int, str, str] or None = None

    @property
    def relation(self: Rule) -> NCPoly:
        # lhs - rhs, the element that vanishes in the quotient
        return NCPoly.from_word(self.lhs) - self.rhs

    def __str__(self: Rule) -> str:
        return f'{word_str(self.lhs)} -> {self.rhs}'

    def to_json(self: Rule, key=None) -> dict:
        res = {'lhs': word_to_json(self.lhs), 'rhs': self.rhs.to_json(key), 'family': self.family.value}
        if self.source:
            res['source'] = list(self.source)
        return res

class RuleSet:
    '''
    rules indexed by left-hand side, plus the chain they came from.
    normal forms are memoized per word; the rules themselves never change.
    '''
    chain: ValidatedChain
    rules: Dict[Word, Rule]

    def __init__(self: RuleSet, chain: ValidatedChain, rules: Iterable[Rule]):
        self.chain = chain
        self.rules = {}
        for rule in rules:
            if rule.lhs in self.rules:
                raise RewriteException('DUPLICATE_LHS', f'two rules share the left-hand side {word_str(rule.lhs)}')
            self.rules[rule.lhs] = rule
        self.lengths = sorted({len(lhs) for lhs in self.rules})
        self._cache = {}

    def __len__(self: RuleSet) -> int:
        return len(self.rules)

    def __iter__(self: RuleSet):
        return iter(sorted(self.rules.values(), key=lambda r: word_key(r.lhs)))

    def __contains__(self: RuleSet, lhs: Word) -> bool:
        return tuple(lhs) in self.rules

    def occurrences(self: RuleSet, word: Word) -> int:
        return sum(1 for n in self.lengths for k in range(len(word) - n + 1) if word[k:k + n] in self.rules)

    def word_key(self: RuleSet, word: Word):
        '''
        the global word order: lhs occurrences, then length, then (level, row, col) lexicographically.
        '''
        return (self.occurrences(word),) + word_key(word)

    def find(self: RuleSet, word: Word) -> Tuple[int, Rule] or None:
        # leftmost start first, shortest match at that start
        for k in range(len(word)):
            for n in self.lengths:
                if k + n > len(word):
                    break
                rule = self.rules.get(word[k:k + n])
                if rule:
                    return k, rule
        return None

    def is_reduced(self: RuleSet, word: Word) -> bool:
        return self.find(word) is None

    def _reduce_word(self: RuleSet, word: Word, depth: int) -> NCPoly:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        hit = self.find(word)
        if hit is None:
            res = NCPoly.from_word(word)
        else:
            if depth > MAX_REDUCTION_DEPTH:
                raise RewriteException('REDUCTION_LIMIT', f'reduction of {word_str(word)} exceeded depth {MAX_REDUCTION_DEPTH}')
            k, rule = hit
            prefix, suffix = word[:k], word[k + len(rule.lhs):]
            res = NCPoly.combine((w, c * d)
                                 for v, c in rule.rhs.items()
                                 for w, d in self._reduce_word(prefix + v + suffix, depth + 1).items())
        self._cache[word] = res
        return res

    def normal_form(self: RuleSet, p: NCPoly) -> NCPoly:
        return NCPoly.combine((w, c * d) for v, c in p.items() for w, d in self._reduce_word(v, 0).items())

    def extended(self: RuleSet, rules: Iterable[Rule]) -> RuleSet:
        return RuleSet(self.chain, list(self.rules.values()) + list(rules))

    def to_json(self: RuleSet) -> list:
        return [r.to_json(self.word_key) for r in self]

def _extreme(chain: ValidatedChain, ids: List[str], largest: bool) -> str:
    return (max if largest else min)(ids, key=chain.position.get)

def derive_rules(chain: ValidatedChain) -> RuleSet:
    '''
    the reductions making (x^r_{ij}) and (x^{r+1}_{ji}) mutual inverses, for every
    pair of consecutive levels in the window. Row rules eliminate
    x^r_{i,e} x^{r+1}_{j,e} and column rules x^{r+1}_{e,i} x^r_{e,j}, where e is the
    largest or lowest index admissible for both factors depending on the parity of r.
    '''
    rules = []
    for r in range(chain.lo, chain.hi):
        even = r % 2 == 0
        for comp in chain.components:
            for i, j in product(comp, comp):
                delta = NCPoly.constant(1 if i == j else 0)
                row = [a for a in comp if chain.present(r, i, a) and chain.present(r + 1, j, a)]
                col = [b for b in comp if chain.present(r + 1, b, i) and chain.present(r, b, j)]
                if (not row or not col) and i == j:
                    raise RewriteException('INCONSISTENT_CHAIN', f'level {r} pair ({i},{j}) would force 1 = 0')
                if row:
                    e = _extreme(chain, row, even)
                    rhs = delta - NCPoly.combine(((letter(r, i, a), letter(r + 1, j, a)), mpq(1)) for a in row if a != e)
                    rules += [Rule((letter(r, i, e), letter(r + 1, j, e)), rhs, Family.UP0 if even else Family.UP1, (r, i, j))]
                if col:
                    e = _extreme(chain, col, not even)
                    rhs = delta - NCPoly.combine(((letter(r + 1, b, i), letter(r, b, j)), mpq(1)) for b in col if b != e)
                    rules += [Rule((letter(r + 1, e, i), letter(r, e, j)), rhs, Family.DOWN1 if not even else Family.DOWN0, (r, i, j))]
    res = RuleSet(chain, rules)
    getLogger(LOGGER_NAME).debug(f'derived {len(res)} rules on {chain}')
    return res

def normal_form(rules: RuleSet, p: NCPoly) -> NCPoly:
    rules.chain.check_poly(p)
    return rules.normal_form(p)

@dataclass(frozen=True)
class Ambiguity:
    '''
    word is reducible by `left` at position 0 and by `right` at `offset`.
    kind is 'overlap' (the two left-hand sides overlap properly) or
    'inclusion' (right.lhs sits inside left.lhs == word).
    '''
    word: Word
    left: Rule
    right: Rule
    offset: int
    kind: str = 'overlap'

    def branches(self: Ambiguity) -> Tuple[NCPoly, NCPoly]:
        n = len(self.left.lhs)
        m = len(self.right.lhs)
        left = NCPoly.from_word(ONE) * self.left.rhs * NCPoly.from_word(self.word[n:])
        right = NCPoly.from_word(self.word[:self.offset]) * self.right.rhs * NCPoly.from_word(self.word[self.offset + m:])
        return left, right

    def residual(self: Ambiguity, rules: RuleSet) -> NCPoly:
        left, right = self.branches()
        return rules.normal_form(left) - rules.normal_form(right)

    def to_json(self: Ambiguity) -> dict:
        return {'word': word_to_json(self.word), 'left': word_to_json(self.left.lhs),
                'right': word_to_json(self.right.lhs), 'offset': self.offset, 'kind': self.kind}

def ambiguities(rules: RuleSet) -> List[Ambiguity]:
    prefixes = {}
    for rule in rules:
        for k in range(1, len(rule.lhs)):
            prefixes.setdefault(rule.lhs[:k], []).append(rule)
    res = []
    for left in rules:
        lhs = left.lhs
        for k in range(1, len(lhs)):
            for right in prefixes.get(lhs[-k:], []):
                res += [Ambiguity(lhs + right.lhs[k:], left, right, len(lhs) - k)]
        for n in rules.lengths:
            if n >= len(lhs):
                break
            for start in range(len(lhs) - n + 1):
                inner = rules.rules.get(lhs[start:start + n])
                if inner:
                    res += [Ambiguity(lhs, left, inner, start, 'inclusion')]
    return sorted(res, key=lambda a: (word_key(a.word), a.offset, a.kind))

@dataclass
class ConfluenceReport:
    total: int
    resolved: int
    unresolved: List[Tuple[Ambiguity, NCPoly]] = field(default_factory=list)

    @property
    def confluent(self: ConfluenceReport) -> bool:
        return not self.unresolved

    def to_json(self: ConfluenceReport) -> dict:
        return {
            'ambiguities': self.total,
            'resolved': self.resolved,
            'confluent': self.confluent,
            'unresolved': [{**a.to_json(), 'residual': p.to_json(), 'residualText': str(p)} for a, p in self.unresolved]
        }

def _residual_chunk(chunk: List[Tuple[RuleSet, Ambiguity]]) -> List[NCPoly]:
    # top level so that worker processes can unpickle it
    return [a.residual(rules) for rules, a in chunk]

def check_confluence(rules: RuleSet, parallel: int = 1) -> ConfluenceReport:
    '''
    reduces both branches of every ambiguity to normal form. since the system
    terminates, a nonzero residual certifies non-confluence and all-zero
    residuals certify unique normal forms.
    '''
    ambs = ambiguities(rules)
    if parallel > 1 and len(ambs) > 1:
        from SkewHopf.lib.pool import map_chunks
        parts = map_chunks(_residual_chunk, [(rules, a) for a in ambs], parallel)
        residuals = [r for part in parts for r in part]
    else:
        residuals = _residual_chunk([(rules, a) for a in ambs])
    unresolved = [(a, r) for a, r in zip(ambs, residuals) if not r.is_zero()]
    getLogger(LOGGER_NAME).info(f'{len(ambs)} ambiguities, {len(unresolved)} unresolved')
    return ConfluenceReport(len(ambs), len(ambs) - len(unresolved), unresolved)

@dataclass
class CompletionResult:
    rules: RuleSet
    derived: List[NCPoly]
    iterations: int
    fixpoint: bool
    degree_cap_hit: bool = False
    iter_cap_hit: bool = False
    collapsed: bool = False
    reduction_limit_hit: bool = False

    def to_json(self: CompletionResult) -> dict:
        return {
            'iterations': self.iterations,
            'fixpoint': self.fixpoint,
            'degreeCapHit': self.degree_cap_hit,
            'iterCapHit': self.iter_cap_hit,
            'collapsed': self.collapsed,
            'reductionLimitHit': self.reduction_limit_hit,
            'rules': len(self.rules),
            'derived': [p.to_json(self.rules.word_key) for p in self.derived],
            'derivedText': [p.text(self.rules.word_key) for p in self.derived]
        }

def _contains(word: Word, sub: Word) -> bool:
    return any(word[k:k + len(sub)] == sub for k in range(len(word) - len(sub) + 1))

def _orient(system: RuleSet, p: NCPoly) -> Tuple[Rule, NCPoly]:
    lead = max(p.support(), key=system.word_key)
    monic = p.scale(1 / p.coefficient(lead))
    return Rule(lead, NCPoly.from_word(lead) - monic, Family.DERIVED), monic

def _round(current: RuleSet, table: Dict[Word, Rule], derived: List[NCPoly], max_degree: int) -> Tuple[bool, bool, bool]:
    '''
    one completion round on `table`, in place. returns (added, degree cap hit, collapsed).
    '''
    logger = getLogger(LOGGER_NAME)
    pending = deque(r for _, r in check_confluence(current).unresolved)
    added = degree_cap_hit = False
    while pending:
        system = RuleSet(current.chain, table.values())
        p = system.normal_form(pending.popleft())
        if p.is_zero():
            continue
        if p.degree() == 0:
            derived += [p.scale(1 / p.coefficient(ONE))]
            logger.warning('completion derived 1 = 0, the quotient collapses')
            return added, degree_cap_hit, True
        if p.degree() > max_degree:
            degree_cap_hit = True
            logger.debug(f'dropping residual of degree {p.degree()} > {max_degree}')
            continue
        rule, monic = _orient(system, p)
        derived += [monic]
        for lhs, old in list(table.items()):
            if _contains(lhs, rule.lhs):
                del table[lhs]
                pending.append(old.relation)
        table[rule.lhs] = rule
        added = True
    system = RuleSet(current.chain, table.values())
    for lhs, rule in list(table.items()):
        table[lhs] = replace(rule, rhs=system.normal_form(rule.rhs))
    return added, degree_cap_hit, False

def complete(rules: RuleSet, max_degree: int = DEFAULT_MAX_DEGREE, max_iters: int = DEFAULT_MAX_ITERS) -> CompletionResult:
    '''
    bounded Knuth-Bendix style completion. every round turns the nonzero
    residuals of the current system into new rules (largest word in the global
    order becomes the left-hand side), drops residuals of degree above
    max_degree, removes rules made redundant and re-reduces right-hand sides.
    stops at a fixpoint, at max_iters rounds, when 1 = 0 is derived, or when the
    derived orientation stops terminating (REDUCTION_LIMIT, reported as a flag).
    '''
    if max_degree < 2:
        raise RewriteException('BAD_PARAMS', 'completion needs max_degree >= 2')
    logger = getLogger(LOGGER_NAME)
    current = rules
    derived = []
    degree_cap_hit = False
    for iteration in range(1, max_iters + 1):
        table = dict(current.rules)
        try:
            added, capped, collapsed = _round(current, table, derived, max_degree)
        except RewriteException as e:
            if e.code != 'REDUCTION_LIMIT':
                raise
            logger.warning(f'completion round {iteration} stopped: {e.message}')
            return CompletionResult(RuleSet(current.chain, table.values()), derived, iteration, False,
                                    degree_cap_hit, reduction_limit_hit=True)
        degree_cap_hit = degree_cap_hit or capped
        current = RuleSet(current.chain, table.values())
        if collapsed:
            return CompletionResult(current, derived, iteration, False, degree_cap_hit, collapsed=True)
        logger.info(f'completion round {iteration}: {len(current)} rules, {len(derived)} derived so far')
        if not added:
            if degree_cap_hit:
                logger.warning(f'completion stopped with residuals above degree {max_degree} dropped')
            return CompletionResult(current, derived, iteration, True, degree_cap_hit)
    logger.warning(f'completion hit the iteration cap ({max_iters})')
    return CompletionResult(current, derived, max_iters, False, degree_cap_hit, True)

class ForbiddenAutomaton:
    '''
    Aho-Corasick automaton over letters recognizing any left-hand side as a
    suffix. with only two-letter patterns its states are the pattern first
    letters and it is the usual forbidden-pair transfer matrix.
    '''
    def __init__(self: ForbiddenAutomaton, patterns: Iterable[Word]):
        self.goto = [{}]
        self.fail = [0]
        self.hit = [False]
        for pattern in patterns:
            state = 0
            for a in pattern:
                if a not in self.goto[state]:
                    self.goto.append({})
                    self.fail.append(0)
                    self.hit.append(False)
                    self.goto[state][a] = len(self.goto) - 1
                state = self.goto[state][a]
            self.hit[state] = True
        queue = deque(self.goto[0].values())
        while queue:
            state = queue.popleft()
            for a, nxt in self.goto[state].items():
                f = self.fail[state]
                while f and a not in self.goto[f]:
                    f = self.fail[f]
                self.fail[nxt] = self.goto[f].get(a, 0)
                self.hit[nxt] = self.hit[nxt] or self.hit[self.fail[nxt]]
                queue.append(nxt)
        self._delta = {}

    def step(self: ForbiddenAutomaton, state: int, a) -> int:
        key = (state, a)
        if key not in self._delta:
            s = state
            while s and a not in self.goto[s]:
                s = self.fail[s]
            self._delta[key] = self.goto[s].get(a, 0)
        return self._delta[key]

def count_reduced_words(rules: RuleSet, max_len: int) -> List[int]:
    '''
    number of words of each length 0..max_len over the chain's present letters
    that contain no left-hand side as a subword.
    '''
    letters = rules.chain.letters()
    automaton = ForbiddenAutomaton(rules.rules)
    counts = {0: 1}
    res = [1]
    for _ in range(max_len):
        nxt = {}
        for state, c in counts.items():
            for a in letters:
                t = automaton.step(state, a)
                if not automaton.hit[t]:
                    nxt[t] = nxt.get(t, 0) + c
        counts = nxt
        res += [sum(counts.values())]
    return res

def reduced_words(rules: RuleSet, max_len: int) -> List[Word]:
    '''
    the reduced words themselves, in the global word order. only meant for small max_len.
    '''
    res = [ONE]
    layer = [ONE]
    letters = rules.chain.letters()
    for _ in range(max_len):
        layer = [w + (a,) for w in layer for a in letters if rules.is_reduced(w + (a,))]
        res += layer
    return res

def _words(letters, length):
    return product(letters, repeat=length)

def oracle_dimension(chain: ValidatedChain, max_len: int, rules: RuleSet = None) -> int:
    '''
    dim span(words of length <= max_len) / span(u (lhs - rhs) v of total length <= max_len),
    as an exact sparse rank. equals the cumulative reduced-word count when the
    system is confluent; a smaller value means the reduced words are linearly dependent.
    '''
    rules = rules if rules is not None else derive_rules(chain)
    letters = chain.letters()
    total = sum(len(letters) ** k for k in range(max_len + 1))
    if total > max_words():
        raise RewriteException('TOO_LARGE', f'{total} words up to length {max_len} exceed the guard of {max_words()}')
    index = {}
    for n in range(max_len + 1):
        for w in _words(letters, n):
            index[w] = len(index)
    rows = []
    for rule in rules:
        relation = rule.relation
        room = max_len - relation.degree()
        for left in range(room + 1):
            for right in range(room - left + 1):
                for u, v in product(_words(letters, left), _words(letters, right)):
                    rows += [{index[u + w + v]: c for w, c in relation.items()}]
    rank = sparse_rank(rows, total)
    getLogger(LOGGER_NAME).debug(f'oracle: {total} words, {len(rows)} relation multiples of rank {rank}')
    return total - rank
