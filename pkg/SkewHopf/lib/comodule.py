'''
Natural comodules of the levels of a chain, their duals, submodule lattices
and coefficient coalgebras, and the two experiment reports built from them.

Within one component the blocks of a level are pairwise non-isomorphic simple
modules over the block-triangular dual algebra, so every subcomodule of a natural
comodule is spanned by basis vectors of whole blocks. Lattices are therefore
stored as sets of 1-based block numbers, and the lattice of a level is the set of
down-sets of its block reachability order.
'''
from __future__ import annotations
from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, FrozenSet, Iterable, List, Tuple
from SkewHopf.lib.chain import ValidatedChain, WindowException
from SkewHopf.lib.hopf import right_span_dim
from SkewHopf.lib.logger import LOGGER_NAME
from SkewHopf.lib.ncpoly import ComputationException, Letter, NCPoly, ValidationException, letter, word_str
from SkewHopf.lib.rewrite import RuleSet, derive_rules

EXTRAPOLATION_NOTE = ('divergence as r decreases is extrapolated from the finite window; '
                      'only the truncation shown here is verified')
WITNESSES_PER_LEVEL = 4

class ComoduleException(ValidationException):
    pass

@dataclass
class ComoduleStructure:
    '''
    rho(e_j) = sum_i e_i (x) coaction[(i, j)], entries missing where the letter is absent.
    '''
    level: int
    component: int
    basis: List[str]
    coaction: Dict[Tuple[str, str], Letter]

    def matrix(self: ComoduleStructure) -> List[List[str or None]]:
        return [[str(self.coaction[(i, j)]) if (i, j) in self.coaction else None for j in self.basis] for i in self.basis]

    def shape(self: ComoduleStructure) -> FrozenSet[Tuple[str, str]]:
        return frozenset(self.coaction)

    def to_json(self: ComoduleStructure) -> dict:
        return {'r': self.level, 'component': self.component, 'basis': self.basis, 'coaction': self.matrix()}

@dataclass(frozen=True)
class SubspaceLattice:
    '''
    blocks[k - 1] spans the coordinate subspace of block number k; elements are
    sets of block numbers, ordered by containment.
    '''
    blocks: Tuple[Tuple[str, ...], ...]
    elements: FrozenSet[FrozenSet[int]]

    def __len__(self: SubspaceLattice) -> int:
        return len(self.elements)

    def __contains__(self: SubspaceLattice, sub) -> bool:
        return frozenset(sub) in self.elements

    def as_lists(self: SubspaceLattice) -> List[List[int]]:
        return sorted((sorted(e) for e in self.elements), key=lambda e: (len(e), e))

    def span(self: SubspaceLattice, sub: Iterable[int]) -> List[str]:
        return [i for k in sorted(sub) for i in self.blocks[k - 1]]

    def annihilators(self: SubspaceLattice) -> FrozenSet[FrozenSet[str]]:
        # W -> W^perp as index sets: complement, reversing the order
        everything = {i for b in self.blocks for i in b}
        return frozenset(frozenset(everything - set(self.span(e))) for e in self.elements)

    def index_sets(self: SubspaceLattice) -> FrozenSet[FrozenSet[str]]:
        return frozenset(frozenset(self.span(e)) for e in self.elements)

    def to_json(self: SubspaceLattice) -> list:
        return self.as_lists()

def _check_component(chain: ValidatedChain, component: int) -> None:
    if not 0 <= component < len(chain.components):
        raise ComoduleException('UNKNOWN_COMPONENT', f'component {component} does not exist')

def natural_comodule(chain: ValidatedChain, r: int, component: int = 0) -> ComoduleStructure:
    chain.check_level(r)
    _check_component(chain, component)
    basis = list(chain.components[component])
    return ComoduleStructure(r, component, basis,
                             {(i, j): letter(r, i, j) for i in basis for j in basis if chain._present(r, i, j)})

def dual_comodule(chain: ValidatedChain, s: ComoduleStructure) -> ComoduleStructure:
    '''
    the dual basis coaction through the antipode: entry (i, j) is S(x^r_{ji}) = x^{r+1}_{ij}.
    '''
    r = s.level
    if r + 1 > chain.hi:
        raise WindowException('WINDOW_EXCEEDED', f'the dual of a level-{r} comodule lives at level {r + 1}, window ends at {chain.hi}')
    coaction = {}
    for (j, i), l in s.coaction.items():
        image = chain.theta(r, l)
        if image is not None:
            coaction[(i, j)] = image
    res = ComoduleStructure(r + 1, s.component, list(s.basis), coaction)
    if res.shape() != natural_comodule(chain, r + 1, s.component).shape():
        raise ComputationException('DUAL_MISMATCH', f'dual of the level-{r} comodule is not the natural level-{r + 1} comodule')
    return res

def _blocks(chain: ValidatedChain, s: ComoduleStructure) -> List[Tuple[str, ...]]:
    return chain.component_blocks(s.level, s.component)

def _down_sets(principal: List[FrozenSet[int]]) -> FrozenSet[FrozenSet[int]]:
    elements = {frozenset()}
    for p in principal:
        elements |= {e | p for e in elements}
    return frozenset(elements)

def submodule_lattice(chain: ValidatedChain, s: ComoduleStructure) -> SubspaceLattice:
    '''
    closes every block under the dual-algebra action (e_j reaches e_i when the
    coaction entry (i, j) is present) and takes all unions of the closures.
    '''
    blocks = _blocks(chain, s)
    number = {i: k for k, b in enumerate(blocks, start=1) for i in b}
    reach = {k: {number[i] for i in s.basis for j in b if (i, j) in s.coaction} for k, b in enumerate(blocks, start=1)}
    principal = []
    for k in reach:
        closure, todo = {k}, [k]
        while todo:
            for m in reach[todo.pop()]:
                if m not in closure:
                    closure.add(m)
                    todo.append(m)
        principal += [frozenset(closure)]
    return SubspaceLattice(tuple(blocks), _down_sets(principal))

def expected_lattice(chain: ValidatedChain, r: int, component: int = 0) -> SubspaceLattice:
    '''
    prefixes of the block order on even (upper) levels, suffixes on odd (lower) levels.
    '''
    _check_component(chain, component)
    blocks = chain.component_blocks(r, component)
    n = len(blocks)
    if r % 2 == 0:
        elements = [frozenset(range(1, k + 1)) for k in range(n + 1)]
    else:
        elements = [frozenset(range(k, n + 1)) for k in range(1, n + 2)]
    return SubspaceLattice(tuple(blocks), frozenset(elements))

def coefficient_coalgebra(chain: ValidatedChain, s: ComoduleStructure, sub: Iterable[int],
                          quotient_of: Iterable[int] or None = None) -> List[Letter]:
    '''
    the letters spanning the coefficient coalgebra of sub / quotient_of, both given
    as sets of block numbers of the lattice of `s`.
    '''
    lattice = submodule_lattice(chain, s)
    sub = frozenset(sub)
    quotient_of = frozenset(quotient_of or ())
    for e in (sub, quotient_of):
        if e not in lattice:
            raise ComoduleException('NOT_A_SUBCOMODULE', f'blocks {sorted(e)} do not span a subcomodule at level {s.level}')
    if not quotient_of <= sub:
        raise ComoduleException('NOT_A_SUBCOMODULE', f'blocks {sorted(quotient_of)} are not inside {sorted(sub)}')
    ids = lattice.span(sub - quotient_of)
    return [s.coaction[(i, j)] for i in ids for j in ids if (i, j) in s.coaction]

def min_simple_dim(chain: ValidatedChain, r: int) -> int:
    return min(chain.block_sizes(r))

@dataclass
class GrowthReport:
    rows: List[Tuple[int, int, bool]]
    verdict: str
    stable_from: int
    note: str = EXTRAPOLATION_NOTE

    @property
    def dims(self: GrowthReport) -> List[int]:
        return [d for _, d, _ in self.rows]

    def to_json(self: GrowthReport) -> dict:
        return {
            'levels': [{'r': r, 'minSimpleDim': d, 'supOK': ok} for r, d, ok in self.rows],
            'verdict': self.verdict,
            'stableFrom': self.stable_from,
            'note': self.note
        }

def growth_report(chain: ValidatedChain) -> GrowthReport:
    '''
    min simple dimension per level with a verdict on how it grows leftward:
    'bounded' (constant), 'bounded window' (a single jump), 'doubling leftward'
    (at least two jumps, each by a factor 2) or 'increasing leftward'.
    '''
    rows = [(r, min_simple_dim(chain, r), min_simple_dim(chain, r) >= 2) for r in chain.levels]
    dims = [d for _, d, _ in rows]
    steps = [(left, right) for left, right in zip(dims, dims[1:]) if left > right]
    stable_from = chain.hi
    while stable_from > chain.lo and dims[stable_from - 1 - chain.lo] == dims[-1]:
        stable_from -= 1
    if not steps:
        verdict = 'bounded'
    elif len(steps) == 1:
        verdict = 'bounded window'
    elif all(left == 2 * right for left, right in steps):
        verdict = 'doubling leftward'
    else:
        verdict = 'increasing leftward'
    getLogger(LOGGER_NAME).debug(f'growth table {dims}: {verdict}')
    return GrowthReport(rows, verdict, stable_from)

@dataclass
class TheoremReport:
    rows: List[dict] = field(default_factory=list)

    @property
    def ok(self: TheoremReport) -> bool:
        return all(row.get('ok', True) for row in self.rows)

    def to_json(self: TheoremReport) -> dict:
        return {'ok': self.ok, 'levels': self.rows}

def theorem_a_report(chain: ValidatedChain) -> TheoremReport:
    '''
    per level and component: the computed lattice against the expected one, and
    (below the top level) that dualizing yields the next natural comodule whose
    lattice contains the annihilators of this one.
    '''
    report = TheoremReport()
    for r in chain.levels:
        for c in range(len(chain.components)):
            s = natural_comodule(chain, r, c)
            lattice = submodule_lattice(chain, s)
            row = {'r': r, 'component': c, 'lattice': lattice.to_json(),
                   'latticeOk': lattice == expected_lattice(chain, r, c), 'dualOk': None}
            if r + 1 <= chain.hi:
                try:
                    dual = dual_comodule(chain, s)
                    row['dualOk'] = lattice.annihilators() <= submodule_lattice(chain, dual).index_sets()
                except ComputationException as e:
                    getLogger(LOGGER_NAME).warning(f'level {r}: {e}')
                    row['dualOk'] = False
            row['ok'] = row['latticeOk'] and row['dualOk'] is not False
            report.rows += [row]
    return report

def _witnesses(chain: ValidatedChain, rules: RuleSet, r: int) -> List[Tuple]:
    firsts = [letter(r, b[0], b[0]) for b in chain.blocks[r]]
    res = [(l,) for l in firsts]
    if r + 1 <= chain.hi:
        res += [(l, m) for l in firsts for m in chain.letters(r + 1) if rules.is_reduced((l, m))]
    return res[:WITNESSES_PER_LEVEL]

def theorem_b_report(chain: ValidatedChain, rules: RuleSet = None) -> Tuple[GrowthReport, TheoremReport]:
    '''
    the growth table, plus for every level a few reduced words starting at that level
    whose cyclic modules must have dimension at least the level's min simple dimension.
    '''
    rules = rules if rules is not None else derive_rules(chain)
    growth = growth_report(chain)
    report = TheoremReport()
    for r, bound, _ in growth.rows:
        for word in _witnesses(chain, rules, r):
            dim = right_span_dim(rules, NCPoly.from_word(word))
            report.rows += [{'r': r, 'word': word_str(word), 'rightSpanDim': dim, 'bound': bound, 'ok': dim >= bound}]
    return growth, report
