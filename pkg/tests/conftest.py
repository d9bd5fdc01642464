import pytest
from helpers import chain_of
from SkewHopf.lib.rewrite import derive_rules

@pytest.fixture
def free2():
    chain = chain_of('free-matrix', n=2, lo=0, hi=1)
    return chain, derive_rules(chain)

@pytest.fixture
def m4():
    chain = chain_of('collapse-m4', lo=-1, hi=1)
    return chain, derive_rules(chain)
