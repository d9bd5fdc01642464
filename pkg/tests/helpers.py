from SkewHopf.lib.chain import preset, validate
from SkewHopf.lib.ncpoly import NCPoly, letter

def chain_of(name, **params):
    return validate(preset(name, **params))

def x(r, i, j):
    return NCPoly.from_letter(letter(r, str(i), str(j)))

def w(*triples):
    return tuple(letter(r, str(i), str(j)) for r, i, j in triples)
