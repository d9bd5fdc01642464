'''
Triangular skew coalgebra chains: the per-level block partitions of a finite
index set, the presence patterns they induce (upper block-triangular on even
levels, lower on odd levels), the connecting maps theta^r and the named presets.
'''
from __future__ import annotations
import json
from dataclasses import dataclass, field
from itertools import product
from logging import getLogger
from typing import Dict, List, Tuple
from SkewHopf.lib.logger import LOGGER_NAME
from SkewHopf.lib.ncpoly import ComputationException, Letter, NCPoly, ValidationException, letter

SPEC_KEYS = {'indices', 'components', 'window', 'levels'}
Blocks = List[List[str]]

class ChainException(ValidationException):
    pass

class WindowException(ComputationException):
    pass

@dataclass
class ChainSpec:
    indices: List[str]
    components: List[List[str]]
    window: Tuple[int, int]
    levels: List[Tuple[int, Blocks]] = field(default_factory=list)

    def to_json(self: ChainSpec) -> dict:
        return {
            'indices': list(self.indices),
            'components': [list(c) for c in self.components],
            'window': {'lo': self.window[0], 'hi': self.window[1]},
            'levels': [{'r': r, 'blocks': [list(b) for b in blocks]} for r, blocks in self.levels]
        }

    @staticmethod
    def from_json(data: dict) -> ChainSpec:
        if not isinstance(data, dict):
            raise ChainException('BAD_SPEC', 'chain spec must be a JSON object')
        unknown = set(data) - SPEC_KEYS
        if unknown:
            raise ChainException('UNKNOWN_KEY', f'unknown keys {sorted(unknown)}')
        missing = {'indices', 'window'} - set(data)
        if missing:
            raise ChainException('BAD_SPEC', f'missing keys {sorted(missing)}')
        window = data['window']
        if not isinstance(window, dict) or set(window) != {'lo', 'hi'}:
            raise ChainException('BAD_SPEC', 'window must be {"lo": int, "hi": int}')
        indices = [str(i) for i in data['indices']]
        try:
            levels = []
            for entry in data.get('levels', []):
                if set(entry) - {'r', 'blocks'}:
                    raise ChainException('UNKNOWN_KEY', f'unknown keys {sorted(set(entry) - {"r", "blocks"})} in level')
                levels += [(int(entry['r']), [[str(i) for i in b] for b in entry['blocks']])]
            return ChainSpec(indices,
                             [[str(i) for i in c] for c in data.get('components', [indices])],
                             (int(window['lo']), int(window['hi'])),
                             levels)
        except (KeyError, TypeError, ValueError) as e:
            raise ChainException('BAD_SPEC', f'malformed chain spec ({e})')

    @staticmethod
    def load(path: str) -> ChainSpec:
        with open(path) as f:
            try:
                return ChainSpec.from_json(json.load(f))
            except json.JSONDecodeError as e:
                raise ChainException('BAD_SPEC', f'{path} is not valid JSON ({e})')

class ValidatedChain:
    '''
    a chain spec together with its derived tables. built by `validate`, never mutated.

    blocks[r] lists the blocks of level r as tuples of ids, components in order,
    blocks of a component in the component's order; block_of[r][i] is the
    position of the block holding i in that list.
    '''
    spec: ChainSpec
    lo: int
    hi: int
    blocks: Dict[int, List[Tuple[str, ...]]]
    block_of: Dict[int, Dict[str, int]]
    component_of: Dict[str, int]
    position: Dict[str, int]
    warnings: List[str]

    def __init__(self: ValidatedChain, spec: ChainSpec, blocks: Dict[int, List[Tuple[str, ...]]]):
        self.spec = spec
        self.lo, self.hi = spec.window
        self.blocks = blocks
        self.component_of = {i: c for c, comp in enumerate(spec.components) for i in comp}
        self.position = {i: k for comp in spec.components for k, i in enumerate(comp)}
        self.block_of = {r: {i: b for b, block in enumerate(bl) for i in block} for r, bl in blocks.items()}
        self.warnings = []
        self._letters = {}

    @property
    def levels(self: ValidatedChain) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def components(self: ValidatedChain) -> List[List[str]]:
        return self.spec.components

    def in_window(self: ValidatedChain, r: int) -> bool:
        return self.lo <= r <= self.hi

    def check_level(self: ValidatedChain, r: int) -> None:
        if not self.in_window(r):
            raise WindowException('LEVEL_OUT_OF_WINDOW', f'level {r} outside window [{self.lo},{self.hi}]')

    def present(self: ValidatedChain, r: int, i: str, j: str) -> bool:
        self.check_level(r)
        for k in (i, j):
            if k not in self.position:
                raise ChainException('UNKNOWN_INDEX', f'index {k!r} is not in the chain')
        return self._present(r, i, j)

    def _present(self: ValidatedChain, r: int, i: str, j: str) -> bool:
        if self.component_of[i] != self.component_of[j]:
            return False
        bi, bj = self.block_of[r][i], self.block_of[r][j]
        return bi <= bj if r % 2 == 0 else bi >= bj

    def letters(self: ValidatedChain, r: int = None) -> List[Letter]:
        '''
        all present letters at level r, or at every level of the window if r is None.
        '''
        if r is None:
            return [l for s in self.levels for l in self.letters(s)]
        self.check_level(r)
        if r not in self._letters:
            self._letters[r] = [letter(r, i, j) for comp in self.components for i, j in product(comp, comp) if self._present(r, i, j)]
        return self._letters[r]

    def check_letter(self: ValidatedChain, l: Letter) -> None:
        if not self.in_window(l.level):
            raise WindowException('LETTER_OUT_OF_WINDOW', f'{l} lies outside window [{self.lo},{self.hi}]')
        if l.row not in self.position or l.col not in self.position:
            raise ChainException('UNKNOWN_INDEX', f'{l} uses an index not in the chain')
        if not self._present(l.level, l.row, l.col):
            raise ChainException('LETTER_NOT_PRESENT', f'{l} is not present at level {l.level}')

    def check_poly(self: ValidatedChain, p: NCPoly) -> None:
        for l in p.letters():
            self.check_letter(l)

    def theta(self: ValidatedChain, r: int, l: Letter) -> Letter or None:
        '''
        the connecting map x^r_{ij} -> x^{r+1}_{ji}, or None where the image vanishes.
        '''
        self.check_level(r)
        if l.level != r:
            raise ChainException('BAD_LETTER', f'{l} is not a level-{r} letter')
        if not self.in_window(r + 1):
            raise WindowException('LEVEL_OUT_OF_WINDOW', f'theta^{r} needs level {r + 1}, window ends at {self.hi}')
        return letter(r + 1, l.col, l.row) if self._present(r + 1, l.col, l.row) else None

    def same_block(self: ValidatedChain, r: int, i: str, j: str) -> bool:
        return self.component_of[i] == self.component_of[j] and self.block_of[r][i] == self.block_of[r][j]

    def block_containing(self: ValidatedChain, r: int, i: str) -> Tuple[str, ...]:
        self.check_level(r)
        return self.blocks[r][self.block_of[r][i]]

    def component_blocks(self: ValidatedChain, r: int, component: int) -> List[Tuple[str, ...]]:
        self.check_level(r)
        return [b for b in self.blocks[r] if self.component_of[b[0]] == component]

    def block_sizes(self: ValidatedChain, r: int) -> List[int]:
        self.check_level(r)
        return [len(b) for b in self.blocks[r]]

    def sup_partition(self: ValidatedChain) -> Tuple[List[List[str]], int]:
        '''
        the finest partition over the window (intersection of the relations ~_r) and its smallest class size.
        '''
        classes = {}
        for i in self.spec.indices:
            classes.setdefault(tuple(self.block_of[r][i] for r in self.levels) + (self.component_of[i],), []).append(i)
        parts = sorted((sorted(c, key=self.position.get) for c in classes.values()),
                       key=lambda c: (self.component_of[c[0]], self.position[c[0]]))
        return parts, min(len(c) for c in parts)

    @property
    def sup_ok(self: ValidatedChain) -> bool:
        return self.sup_partition()[1] >= 2

    def check_invariants(self: ValidatedChain) -> List[str]:
        '''
        exhaustively re-checks the pattern laws; returns human-readable violations (empty when sound).
        '''
        violations = []
        for r in self.levels:
            for comp in self.components:
                for i in comp:
                    if not self._present(r, i, i):
                        violations += [f'diagonal x[{r},{i},{i}] absent']
                for i, j in product(comp, comp):
                    if self._present(r, i, j) and self._present(r, j, i) and not self.same_block(r, i, j):
                        violations += [f'triangularity fails at level {r} for ({i},{j})']
                    if r + 1 <= self.hi and self._present(r + 1, j, i) and not self._present(r, i, j):
                        violations += [f'theta^{r} maps onto absent x[{r + 1},{j},{i}]']
                for i, u, j in product(comp, comp, comp):
                    if self._present(r, i, u) and self._present(r, u, j) and not self._present(r, i, j):
                        violations += [f'coideal closure fails at level {r} for ({i},{u},{j})']
        return violations

    def __str__(self: ValidatedChain) -> str:
        return f'Chain[{len(self.spec.indices)} indices, window [{self.lo},{self.hi}]]'

def _level_blocks(spec: ChainSpec, r: int) -> Blocks:
    listed = [(s, b) for s, b in spec.levels if s <= r]
    if not listed:
        return [list(c) for c in spec.components] # nothing listed at or below r: one block per component
    return max(listed, key=lambda t: t[0])[1]

def validate(spec: ChainSpec) -> ValidatedChain:
    '''
    checks a chain spec and derives presence, block and supremum tables.

    Errors (ChainException codes):
        EMPTY_WINDOW: no indices, or window lo > hi.
        DUPLICATE_INDEX: an id listed twice in indices, components or a level.
        NON_INTERVAL_BLOCK: a block is not a contiguous run of one component's order,
            or a level's blocks do not partition the indices.
        NON_REFINING: some block of level r+1 is not contained in a block of level r.
    '''
    lo, hi = spec.window
    if not spec.indices or lo > hi:
        raise ChainException('EMPTY_WINDOW', f'need indices and lo <= hi, got {len(spec.indices)} indices and window [{lo},{hi}]')
    if len(set(spec.indices)) != len(spec.indices):
        raise ChainException('DUPLICATE_INDEX', 'indices contain duplicates')
    flat = [i for c in spec.components for i in c]
    if len(set(flat)) != len(flat):
        raise ChainException('DUPLICATE_INDEX', 'an index appears in two components')
    if set(flat) != set(spec.indices) or any(not c for c in spec.components):
        raise ChainException('NON_INTERVAL_BLOCK', 'components must partition the indices')
    if len({r for r, _ in spec.levels}) != len(spec.levels):
        raise ChainException('DUPLICATE_INDEX', 'a level is listed twice')

    component_of = {i: c for c, comp in enumerate(spec.components) for i in comp}
    position = {i: k for comp in spec.components for k, i in enumerate(comp)}
    blocks = {}
    for r in range(lo, hi + 1):
        raw = _level_blocks(spec, r)
        seen = [i for b in raw for i in b]
        if len(set(seen)) != len(seen):
            raise ChainException('DUPLICATE_INDEX', f'an index appears twice in the blocks of level {r}')
        if set(seen) != set(spec.indices) or any(not b for b in raw):
            raise ChainException('NON_INTERVAL_BLOCK', f'blocks of level {r} do not partition the indices')
        for b in raw:
            if len({component_of[i] for i in b}) != 1:
                raise ChainException('NON_INTERVAL_BLOCK', f'block {b} at level {r} spans several components')
            pos = sorted(position[i] for i in b)
            if pos != list(range(pos[0], pos[0] + len(pos))):
                raise ChainException('NON_INTERVAL_BLOCK', f'block {b} at level {r} is not an interval')
        # order blocks by component, then along the component's order
        blocks[r] = sorted((tuple(sorted(b, key=position.get)) for b in raw),
                           key=lambda b: (component_of[b[0]], position[b[0]]))
    for r in range(lo, hi):
        coarse = {i: k for k, b in enumerate(blocks[r]) for i in b}
        for b in blocks[r + 1]:
            if len({coarse[i] for i in b}) != 1:
                raise ChainException('NON_REFINING', f'block {list(b)} at level {r + 1} is split across level-{r} blocks')

    chain = ValidatedChain(spec, blocks)
    if lo > 0:
        chain.warnings += ['POSITIVE_WINDOW_START']
        getLogger(LOGGER_NAME).warning(f'window starts at {lo} > 0')
    parts, smallest = chain.sup_partition()
    if smallest < 2:
        chain.warnings += ['SUP_CLASS_TOO_SMALL']
        getLogger(LOGGER_NAME).warning(f'supremum partition has a class of size {smallest}: {parts}')
    return chain

def _numbered(n: int) -> List[str]:
    return [str(i) for i in range(1, n + 1)]

def _chunks(ids: List[str], size: int) -> Blocks:
    return [ids[k:k + size] for k in range(0, len(ids), size)]

def _check_window(lo, hi):
    if lo > hi:
        raise ChainException('BAD_PARAMS', f'window [{lo},{hi}] is empty')

def free_matrix(n: int = 2, lo: int = 0, hi: int = 1) -> ChainSpec:
    if n < 1:
        raise ChainException('BAD_PARAMS', 'free-matrix needs n >= 1')
    _check_window(lo, hi)
    ids = _numbered(n)
    return ChainSpec(ids, [ids], (lo, hi), [(r, [ids]) for r in range(lo, hi + 1)])

def collapse_m4(lo: int = -1, hi: int = 1) -> ChainSpec:
    _check_window(lo, hi)
    ids = _numbered(4)
    return ChainSpec(ids, [ids], (lo, hi), [(r, [ids] if r < 0 else _chunks(ids, 2)) for r in range(lo, hi + 1)])

def needge2(n: int = 2, lo: int = -1, hi: int = 1) -> ChainSpec:
    if n < 2:
        raise ChainException('BAD_PARAMS', 'needge2 needs n >= 2')
    _check_window(lo, hi)
    ids = _numbered(n)
    return ChainSpec(ids, [ids], (lo, hi), [(r, [ids] if r < 0 else [ids[:1], ids[1:]]) for r in range(lo, hi + 1)])

def growth(k: int = 3) -> ChainSpec:
    if k < 1:
        raise ChainException('BAD_PARAMS', 'growth needs k >= 1')
    ids = _numbered(2 ** k)
    return ChainSpec(ids, [ids], (-k, 0), [(r, _chunks(ids, max(2 ** -r, 2))) for r in range(-k, 1)])

PRESETS = {
    'free-matrix': free_matrix,
    'collapse-m4': collapse_m4,
    'needge2': needge2,
    'growth': growth,
}

def preset(name: str, **params) -> ChainSpec:
    '''
    named example chains. parameters are passed as keywords (n, lo, hi, k).
    '''
    if name not in PRESETS:
        raise ChainException('UNKNOWN_PRESET', f'unknown preset {name}, choose from {sorted(PRESETS)}')
    try:
        return PRESETS[name](**{k: int(v) for k, v in params.items()})
    except (TypeError, ValueError) as e:
        raise ChainException('BAD_PARAMS', f'bad parameters for {name}: {e}')
