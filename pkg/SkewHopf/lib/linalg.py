'''
Exact ranks over the rationals through sympy's DomainMatrix: sparse (SDM) for
the dimension oracle, dense for span dimensions.
'''
from __future__ import annotations
from gmpy2 import mpq
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from typing import Dict, List

Row = Dict[int, mpq]

def _qq(x: mpq):
    return QQ(int(x.numerator), int(x.denominator))

def sparse_rank(rows: List[Row], ncols: int) -> int:
    '''
    rank of the matrix whose rows are dicts column -> mpq (zeros may be omitted).
    '''
    entries = {}
    for k, row in enumerate(rows):
        nonzero = {j: _qq(mpq(v)) for j, v in row.items() if v}
        if nonzero:
            entries[k] = nonzero
    if not entries:
        return 0
    return DomainMatrix(entries, (len(rows), ncols), QQ).rank()

def dense_rank(matrix: List[List[mpq]]) -> int:
    if not matrix or not matrix[0]:
        return 0
    entries = [[_qq(x) for x in row] for row in matrix]
    return DomainMatrix(entries, (len(entries), len(entries[0])), QQ).rank()
